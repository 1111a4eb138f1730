//! Relative entropy, Rényi relative entropy and the Nussbaum–Szkoła pair of
//! classical distributions. All logarithms are base 2.

use crate::error::{Error, Result};
use crate::linalg::{same_dim, DensityMatrix, SUPPORT_TOL};
/// Tr rho^a sigma^(1-a) at or below this counts as orthogonal supports.
pub const ORTHOGONALITY_TOL: f64 = 1e-15;

/// A divergence in [0, +inf].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DivergenceValue {
    pub value: f64,
    pub finite: bool,
}

impl DivergenceValue {
    pub fn finite(value: f64) -> Self {
        Self {
            value: value.max(0.0),
            finite: true,
        }
    }

    pub const INFINITE: Self = Self {
        value: f64::INFINITY,
        finite: false,
    };

    pub fn from_f64(v: f64) -> Self {
        if v.is_finite() {
            Self::finite(v)
        } else {
            Self::INFINITE
        }
    }
}

impl std::fmt::Display for DivergenceValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.finite {
            write!(f, "{}", self.value)
        } else {
            write!(f, "inf")
        }
    }
}

/// Nonnegative weights on a rows x cols grid summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
}

impl JointDistribution {
    pub fn new(rows: usize, cols: usize, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for a {rows}x{cols} distribution",
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().copied().find(|w| *w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidState {
                invariant: "nonnegative weights",
                residual: -w,
            });
        }
        let residual = (weights.iter().sum::<f64>() - 1.0).abs();
        if residual > 1e-10 {
            return Err(Error::InvalidState {
                invariant: "weights sum to one",
                residual,
            });
        }
        Ok(Self { rows, cols, weights })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.cols + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

fn check_open_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange(alpha))
    }
}

fn from_log_overlap(log_tr: f64, alpha: f64) -> DivergenceValue {
    if log_tr == f64::NEG_INFINITY {
        DivergenceValue::INFINITE
    } else {
        DivergenceValue::finite(log_tr / (alpha - 1.0))
    }
}

/// D_alpha(rho||sigma) = log2(Tr rho^a sigma^(1-a)) / (a - 1), 0 < a < 1.
pub fn renyi_divergence(rho: &DensityMatrix, sigma: &DensityMatrix, alpha: f64) -> Result<DivergenceValue> {
    check_open_alpha(alpha)?;
    same_dim(rho, sigma)?;
    let tr = rho.power(alpha).inner(&sigma.power(1.0 - alpha)).re;
    let log_tr = if tr <= ORTHOGONALITY_TOL {
        f64::NEG_INFINITY
    } else {
        tr.log2()
    };
    Ok(from_log_overlap(log_tr, alpha))
}

/// alpha -> 0 endpoint: -log2 Tr(P_rho sigma) with P_rho the support projector of rho.
pub fn renyi_divergence_alpha_zero(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    same_dim(rho, sigma)?;
    Ok(DivergenceValue::from_f64(
        -OverlapProfile::new(rho, sigma)?.log_overlap(0.0),
    ))
}

/// D(rho||sigma) = Tr rho (log rho - log sigma); +inf unless supp rho ⊆ supp sigma.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<DivergenceValue> {
    Ok(DivergenceValue::from_f64(
        OverlapProfile::new(rho, sigma)?.relative_entropy(),
    ))
}

/// (Gamma, Gamma_bar) with Gamma(i,j) = l_i |<v_j|u_i>|^2 and
/// Gamma_bar(i,j) = m_j |<v_j|u_i>|^2.
pub fn nussbaum_szkola(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<(JointDistribution, JointDistribution)> {
    same_dim(rho, sigma)?;
    let d = rho.dim();
    let (lam, mu, w) = eigen_overlaps(rho, sigma);
    let mut g = vec![0.0; d * d];
    let mut gb = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            g[i * d + j] = lam[i] * w[i * d + j];
            gb[i * d + j] = mu[j] * w[i * d + j];
        }
    }
    Ok((JointDistribution::new(d, d, g)?, JointDistribution::new(d, d, gb)?))
}

/// Classical D_alpha over matched index sets; terms with p = 0 contribute 0.
pub fn classical_renyi(p: &JointDistribution, q: &JointDistribution, alpha: f64) -> Result<DivergenceValue> {
    check_open_alpha(alpha)?;
    if p.rows != q.rows || p.cols != q.cols {
        return Err(Error::DimensionMismatch("distributions on different index sets".into()));
    }
    Ok(from_log_overlap(
        classical_log_overlap(&p.weights, &q.weights, alpha),
        alpha,
    ))
}

/// log2 sum_k p_k^a q_k^(1-a) with 0^x := 0 (including x = 0).
pub fn classical_log_overlap(p: &[f64], q: &[f64], alpha: f64) -> f64 {
    let s: f64 = p
        .iter()
        .zip(q)
        .map(|(&a, &b)| pow0(a, alpha) * pow0(b, 1.0 - alpha))
        .sum();
    if s <= ORTHOGONALITY_TOL {
        f64::NEG_INFINITY
    } else {
        s.log2()
    }
}

/// Classical relative entropy in bits.
pub fn classical_relative_entropy(p: &[f64], q: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (&a, &b) in p.iter().zip(q) {
        if a <= 0.0 {
            continue;
        }
        if b <= 0.0 {
            return f64::INFINITY;
        }
        acc += a * (a / b).log2();
    }
    acc.max(0.0)
}

fn pow0(x: f64, e: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

fn eigen_overlaps(rho: &DensityMatrix, sigma: &DensityMatrix) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let d = rho.dim();
    let er = rho.eig();
    let es = sigma.eig();
    let clean = |v: &[f64]| -> Vec<f64> { v.iter().map(|&l| if l <= SUPPORT_TOL { 0.0 } else { l }).collect() };
    let lam = clean(&er.eigenvalues);
    let mu = clean(&es.eigenvalues);
    let u = &er.eigenvectors;
    let v = &es.eigenvectors;
    let mut w = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let ov: crate::linalg::C64 = (0..d).map(|k| v[(k, j)].conj() * u[(k, i)]).sum();
            w[i * d + j] = ov.norm_sqr();
        }
    }
    (lam, mu, w)
}

/// Eigen-overlap data of a state pair: nonzero-overlap terms (l_i, m_j, w_ij)
/// so that Tr rho^a sigma^(1-a) = sum w l^a m^(1-a). Cheap to evaluate at
/// many alpha values.
#[derive(Clone, Debug)]
pub struct OverlapProfile {
    ln_lam: Vec<f64>,
    ln_mu: Vec<f64>,
    lam: Vec<f64>,
    w: Vec<f64>,
}

impl OverlapProfile {
    pub fn new(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        same_dim(rho, sigma)?;
        let d = rho.dim();
        let (lam, mu, w) = eigen_overlaps(rho, sigma);
        let mut out = Self {
            ln_lam: Vec::new(),
            ln_mu: Vec::new(),
            lam: Vec::new(),
            w: Vec::new(),
        };
        for i in 0..d {
            for j in 0..d {
                let wij = w[i * d + j];
                if wij <= 0.0 || (lam[i] == 0.0 && mu[j] == 0.0) {
                    continue;
                }
                out.ln_lam
                    .push(if lam[i] > 0.0 { lam[i].ln() } else { f64::NEG_INFINITY });
                out.ln_mu.push(if mu[j] > 0.0 { mu[j].ln() } else { f64::NEG_INFINITY });
                out.lam.push(lam[i]);
                out.w.push(wij);
            }
        }
        Ok(out)
    }

    /// Commuting pair with the given spectra in a shared basis.
    pub fn classical(p: &[f64], q: &[f64]) -> Self {
        let mut out = Self {
            ln_lam: Vec::new(),
            ln_mu: Vec::new(),
            lam: Vec::new(),
            w: Vec::new(),
        };
        for (&a, &b) in p.iter().zip(q) {
            if a <= 0.0 && b <= 0.0 {
                continue;
            }
            out.ln_lam.push(if a > 0.0 { a.ln() } else { f64::NEG_INFINITY });
            out.ln_mu.push(if b > 0.0 { b.ln() } else { f64::NEG_INFINITY });
            out.lam.push(a.max(0.0));
            out.w.push(1.0);
        }
        out
    }

    /// log2 Tr rho^a sigma^(1-a) for a in [0, 1]; the endpoints use the
    /// support convention 0^0 = 0. Returns -inf for orthogonal supports.
    pub fn log_overlap(&self, alpha: f64) -> f64 {
        let mut s = 0.0;
        for k in 0..self.w.len() {
            let (a, b) = (self.ln_lam[k], self.ln_mu[k]);
            let term = if alpha <= 0.0 {
                if b.is_finite() && a.is_finite() {
                    b.exp()
                } else {
                    0.0
                }
            } else if alpha >= 1.0 {
                if a.is_finite() && b.is_finite() {
                    a.exp()
                } else {
                    0.0
                }
            } else if a.is_finite() && b.is_finite() {
                (alpha * a + (1.0 - alpha) * b).exp()
            } else {
                0.0
            };
            s += self.w[k] * term;
        }
        if s <= ORTHOGONALITY_TOL {
            f64::NEG_INFINITY
        } else {
            s.log2()
        }
    }

    /// D(rho||sigma) in bits.
    pub fn relative_entropy(&self) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.w.len() {
            let mass = self.w[k] * self.lam[k];
            if mass <= SUPPORT_TOL {
                continue;
            }
            if !self.ln_mu[k].is_finite() {
                return f64::INFINITY;
            }
            acc += mass * (self.ln_lam[k] - self.ln_mu[k]);
        }
        (acc / std::f64::consts::LN_2).max(0.0)
    }

    /// D(sigma||rho) in bits.
    pub fn reverse_relative_entropy(&self) -> f64 {
        let mut acc = 0.0;
        for k in 0..self.w.len() {
            if !self.ln_mu[k].is_finite() {
                continue;
            }
            let mass = self.w[k] * self.ln_mu[k].exp();
            if mass <= SUPPORT_TOL {
                continue;
            }
            if !self.ln_lam[k].is_finite() {
                return f64::INFINITY;
            }
            acc += mass * (self.ln_mu[k] - self.ln_lam[k]);
        }
        (acc / std::f64::consts::LN_2).max(0.0)
    }

    /// Right derivative at a = 0 of log2 Tr rho^a sigma^(1-a), restricted to
    /// the support of rho. Equals -D(sigma||rho) when supp sigma ⊆ supp rho.
    pub fn log_overlap_slope_at_zero(&self) -> f64 {
        let (mut s0, mut s1) = (0.0, 0.0);
        for k in 0..self.w.len() {
            let (a, b) = (self.ln_lam[k], self.ln_mu[k]);
            if a.is_finite() && b.is_finite() {
                let m = self.w[k] * b.exp();
                s0 += m;
                s1 += m * (a - b);
            }
        }
        if s0 <= ORTHOGONALITY_TOL {
            f64::NEG_INFINITY
        } else {
            s1 / (s0 * std::f64::consts::LN_2)
        }
    }

    /// True when Tr rho^a sigma^(1-a) vanishes for every a.
    pub fn is_orthogonal(&self) -> bool {
        self.log_overlap(0.5) == f64::NEG_INFINITY
    }

    /// Profile of (sigma, rho).
    pub fn swapped(&self) -> Self {
        Self {
            ln_lam: self.ln_mu.clone(),
            ln_mu: self.ln_lam.clone(),
            lam: self.ln_mu.iter().map(|x| x.exp()).collect(),
            w: self.w.clone(),
        }
    }

    /// D_alpha for alpha in (0, 1).
    pub fn renyi(&self, alpha: f64) -> DivergenceValue {
        from_log_overlap(self.log_overlap(alpha), alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::KrausChannel;
    use crate::linalg::{r, random, ComplexMatrix};
    use proptest::prelude::*;

    fn plus() -> DensityMatrix {
        DensityMatrix::pure(&[r(1.0), r(1.0)]).unwrap()
    }

    fn q_fn(q: f64, a: f64) -> f64 {
        let (x, y) = (1.0 - q / 2.0, q / 2.0);
        x.powf(a) * y.powf(1.0 - a) + x.powf(1.0 - a) * y.powf(a)
    }

    // Tr rho (ln rho - ln sigma) through matrix logarithms, full-rank only.
    fn relative_entropy_oracle(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
        let lr = rho.operator().map_spectrum(f64::ln);
        let ls = sigma.operator().map_spectrum(f64::ln);
        rho.matrix().inner(&(&lr - &ls)).re / std::f64::consts::LN_2
    }

    #[test]
    fn renyi_examples() {
        let mut rng = random::stream_rng(10, 0);
        let rho = random::random_density(3, 3, &mut rng);
        assert!(renyi_divergence(&rho, &rho, 0.3).unwrap().value.abs() < 1e-12);
        let z = DensityMatrix::basis(2, 0);
        for a in [0.1, 0.5, 0.9] {
            let d = renyi_divergence(&z, &plus(), a).unwrap();
            assert!(((1.0 - a) * d.value - 1.0).abs() < 1e-12);
        }
        let q = 0.3;
        let dep = KrausChannel::depolarizing(q).unwrap();
        let (r0, r1) = (dep.apply(&z).unwrap(), dep.apply(&DensityMatrix::basis(2, 1)).unwrap());
        for a in [0.2, 0.5, 0.7] {
            let want = q_fn(q, a).log2() / (a - 1.0);
            assert!((renyi_divergence(&r0, &r1, a).unwrap().value - want).abs() < 1e-12);
        }
        assert!(matches!(renyi_divergence(&z, &z, 1.0), Err(Error::AlphaOutOfRange(_))));
        assert!(renyi_divergence(&z, &DensityMatrix::maximally_mixed(3), 0.5).is_err());
        let one = DensityMatrix::basis(2, 1);
        assert!(!renyi_divergence(&z, &one, 0.5).unwrap().finite);
    }

    #[test]
    fn relative_entropy_examples() {
        let mut rng = random::stream_rng(11, 0);
        let rho = random::random_density(3, 3, &mut rng);
        assert!(relative_entropy(&rho, &rho).unwrap().value.abs() < 1e-12);
        let d = relative_entropy(&DensityMatrix::basis(2, 0), &DensityMatrix::basis(2, 1)).unwrap();
        assert!(!d.finite && d.value.is_infinite());
        // pure rho inside a full-rank sigma stays finite
        let d = relative_entropy(&DensityMatrix::basis(2, 0), &DensityMatrix::maximally_mixed(2)).unwrap();
        assert!((d.value - 1.0).abs() < 1e-12);
        for _ in 0..10 {
            let a = random::random_density(3, 3, &mut rng);
            let b = random::random_density(3, 3, &mut rng);
            let d = relative_entropy(&a, &b).unwrap().value;
            assert!((d - relative_entropy_oracle(&a, &b)).abs() < 1e-10);
        }
    }

    #[test]
    fn renyi_tends_to_relative_entropy() {
        let mut rng = random::stream_rng(12, 0);
        for _ in 0..10 {
            let a = random::random_density(3, 3, &mut rng);
            let b = random::random_density(3, 3, &mut rng);
            let d1 = renyi_divergence(&a, &b, 0.999).unwrap().value;
            let d2 = renyi_divergence(&a, &b, 0.9999).unwrap().value;
            // linear extrapolation in (1 - alpha)
            let extrap = d2 + (d2 - d1) / 9.0;
            let d = relative_entropy(&a, &b).unwrap().value;
            assert!((extrap - d).abs() < 1e-5, "{extrap} vs {d}");
        }
    }

    #[test]
    fn alpha_zero_endpoint() {
        let z = DensityMatrix::basis(2, 0);
        let d = renyi_divergence_alpha_zero(&z, &plus()).unwrap();
        assert!((d.value - 1.0).abs() < 1e-12);
        let mm = DensityMatrix::maximally_mixed(2);
        assert!(renyi_divergence_alpha_zero(&mm, &z).unwrap().value.abs() < 1e-12);
        assert!(
            !renyi_divergence_alpha_zero(&z, &DensityMatrix::basis(2, 1))
                .unwrap()
                .finite
        );
    }

    #[test]
    fn ns_commuting_and_equal() {
        let p = DensityMatrix::diagonal(&[0.2, 0.3, 0.5]).unwrap();
        let q = DensityMatrix::diagonal(&[0.1, 0.3, 0.6]).unwrap();
        let (g, gb) = nussbaum_szkola(&p, &q).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(g.get(i, j), 0.0);
                    assert_eq!(gb.get(i, j), 0.0);
                }
            }
        }
        let mut gd: Vec<f64> = (0..3).map(|i| g.get(i, i)).collect();
        gd.sort_by(f64::total_cmp);
        assert!((gd[0] - 0.2).abs() < 1e-15 && (gd[2] - 0.5).abs() < 1e-15);
        let mut gbd: Vec<f64> = (0..3).map(|i| gb.get(i, i)).collect();
        gbd.sort_by(f64::total_cmp);
        assert!((gbd[0] - 0.1).abs() < 1e-15 && (gbd[2] - 0.6).abs() < 1e-15);

        let mut rng = random::stream_rng(13, 0);
        let rho = random::random_density(3, 3, &mut rng);
        let (g, gb) = nussbaum_szkola(&rho, &rho).unwrap();
        for (a, b) in g.weights().iter().zip(gb.weights()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn ns_divergence_equality() {
        let mut rng = random::stream_rng(14, 0);
        for t in 0..60 {
            let d = 2 + t % 4;
            let rho = random::random_density(d, 1 + t % d, &mut rng);
            let sigma = random::random_density(d, d, &mut rng);
            let (g, gb) = nussbaum_szkola(&rho, &sigma).unwrap();
            for k in 1..10 {
                let a = k as f64 / 10.0;
                let lhs = renyi_divergence(&rho, &sigma, a).unwrap().value;
                let rhs = classical_renyi(&g, &gb, a).unwrap().value;
                assert!((lhs - rhs).abs() < 1e-8, "dim {d} alpha {a}: {lhs} vs {rhs}");
                let prof = OverlapProfile::new(&rho, &sigma).unwrap().renyi(a).value;
                assert!((lhs - prof).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn classical_examples() {
        let one = |p: f64| JointDistribution::new(1, 2, vec![p, 1.0 - p]).unwrap();
        assert!(classical_renyi(&one(0.3), &one(0.3), 0.4).unwrap().value.abs() < 1e-14);
        let (p, q) = (0.2f64, 0.7f64);
        let want = -2.0 * ((p * q).sqrt() + ((1.0 - p) * (1.0 - q)).sqrt()).log2();
        assert!((classical_renyi(&one(p), &one(q), 0.5).unwrap().value - want).abs() < 1e-14);
        assert!(JointDistribution::new(1, 2, vec![0.5, 0.6]).is_err());
        assert!(JointDistribution::new(1, 2, vec![1.5, -0.5]).is_err());
        let other = JointDistribution::new(2, 1, vec![0.5, 0.5]).unwrap();
        assert!(classical_renyi(&one(0.5), &other, 0.5).is_err());
    }

    #[test]
    fn profile_endpoints_and_reverse() {
        let z = DensityMatrix::basis(2, 0);
        let mm = DensityMatrix::maximally_mixed(2);
        let prof = OverlapProfile::new(&z, &mm).unwrap();
        // Tr P_z mm = 1/2, Tr z P_mm = 1
        assert!((prof.log_overlap(0.0) + 1.0).abs() < 1e-14);
        assert!(prof.log_overlap(1.0).abs() < 1e-14);
        assert!((prof.relative_entropy() - 1.0).abs() < 1e-14);
        assert!(prof.reverse_relative_entropy().is_infinite());
    }

    fn random_pair(seed: u64, d: usize) -> (DensityMatrix, DensityMatrix) {
        let mut rng = random::stream_rng(seed, 0);
        (
            random::random_density(d, d, &mut rng),
            random::random_density(d, d, &mut rng),
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn renyi_nonnegative_and_monotone(seed in any::<u64>(), d in 2usize..5) {
            let (rho, sigma) = random_pair(seed, d);
            let mut prev = 0.0;
            for k in 1..10 {
                let v = renyi_divergence(&rho, &sigma, k as f64 / 10.0).unwrap().value;
                prop_assert!(v >= 0.0);
                prop_assert!(v >= prev - 1e-10);
                prev = v;
            }
        }

        #[test]
        fn skew_symmetry(seed in any::<u64>(), d in 2usize..5, a in 0.05f64..0.95) {
            let (rho, sigma) = random_pair(seed, d);
            let lhs = (1.0 - a) * renyi_divergence(&rho, &sigma, a).unwrap().value;
            let rhs = a * renyi_divergence(&sigma, &rho, 1.0 - a).unwrap().value;
            prop_assert!((lhs - rhs).abs() < 1e-8);
        }

        #[test]
        fn data_processing(seed in any::<u64>(), a in 0.05f64..0.95) {
            let (rho, sigma) = random_pair(seed, 2);
            let mut rng = random::stream_rng(seed, 1);
            // random channel: Stinespring isometry C^2 -> C^2 ⊗ C^3 traced on the environment
            let u = random::haar_unitary(6, &mut rng);
            let kraus: Vec<ComplexMatrix> = (0..3)
                .map(|e| ComplexMatrix::from_fn(2, 2, |i, j| u[(i * 3 + e, j * 3)]))
                .collect();
            let ch = KrausChannel::new(kraus).unwrap();
            let before = renyi_divergence(&rho, &sigma, a).unwrap().value;
            let after = renyi_divergence(&ch.apply(&rho).unwrap(), &ch.apply(&sigma).unwrap(), a).unwrap().value;
            prop_assert!(after <= before + 1e-8);
        }
    }
}
