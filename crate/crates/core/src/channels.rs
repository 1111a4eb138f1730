//! Quantum channels in Kraus form, classical-quantum channels, the qubit
//! Bloch-affine picture, and the named example channels.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::linalg::{
    basis_ket, bloch_of, kron_vec, partial_trace_matrix, pauli_x, pauli_y, pauli_z, r, ComplexMatrix, DensityMatrix,
    HermitianOperator, C64, ZERO,
};

/// Tolerance for sum_i E_i^dagger E_i = I.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Tolerance for Choi-matrix positivity checks.
pub const CHOI_TOL: f64 = 1e-9;
/// Default cap on the input/output dimension of tensor powers.
pub const DEFAULT_TENSOR_DIM_CAP: usize = 64;

/// Completely positive trace-preserving map rho -> sum_i E_i rho E_i^dagger.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
}

impl KrausChannel {
    /// Validates shapes and Kraus completeness (1e-10).
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::DimensionMismatch("channel needs at least one Kraus operator".into()))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        if let Some(bad) = kraus.iter().find(|k| k.rows() != out_dim || k.cols() != in_dim) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators must all be {out_dim}x{in_dim}, found {}x{}",
                bad.rows(),
                bad.cols()
            )));
        }
        let ch = Self { in_dim, out_dim, kraus };
        let residual = ch.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::NotTracePreserving { residual });
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self::unitary(ComplexMatrix::identity(dim)).expect("identity is unitary")
    }

    /// rho -> U rho U^dagger (also accepts isometries V with V^dagger V = I).
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// rho -> Tr(rho) I/out_dim.
    pub fn completely_depolarizing(in_dim: usize, out_dim: usize) -> Self {
        let w = r((1.0 / out_dim as f64).sqrt());
        let mut kraus = Vec::with_capacity(in_dim * out_dim);
        for b in 0..out_dim {
            for k in 0..in_dim {
                kraus.push(ComplexMatrix::outer(&basis_ket(out_dim, b), &basis_ket(in_dim, k)).scale(w));
            }
        }
        Self { in_dim, out_dim, kraus }
    }

    /// rho -> Tr(rho) state, for a fixed output state.
    pub fn replacer(in_dim: usize, state: &DensityMatrix) -> Self {
        let e = state.eig();
        let mut kraus = Vec::new();
        for (l, k) in e.eigenvalues.iter().zip(0..) {
            if *l <= 0.0 {
                continue;
            }
            let u = e.vector(k);
            for i in 0..in_dim {
                kraus.push(ComplexMatrix::outer(&u, &basis_ket(in_dim, i)).scale_real(l.sqrt()));
            }
        }
        Self {
            in_dim,
            out_dim: state.dim(),
            kraus,
        }
    }

    /// Convex combination sum_k p_k ch_k; all channels must share dimensions.
    pub fn mixture(parts: &[(f64, &KrausChannel)]) -> Result<Self> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty mixture".into()))?;
        let total: f64 = parts.iter().map(|(p, _)| p).sum();
        if parts.iter().any(|(p, _)| !(0.0..=1.0).contains(p)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::ParameterOutOfRange {
                name: "mixture weights",
                value: total,
                range: "a probability vector",
            });
        }
        let mut kraus = Vec::new();
        for (p, ch) in parts {
            if ch.in_dim != first.in_dim || ch.out_dim != first.out_dim {
                return Err(Error::DimensionMismatch(
                    "mixture of channels with different dims".into(),
                ));
            }
            if *p > 0.0 {
                kraus.extend(ch.kraus.iter().map(|k| k.scale_real(p.sqrt())));
            }
        }
        Self::new(kraus)
    }

    /// D_q: rho -> (1-q) rho + q I/2.
    pub fn depolarizing(q: f64) -> Result<Self> {
        check_unit("q", q)?;
        Self::mixture(&[(1.0 - q, &Self::identity(2)), (q, &Self::completely_depolarizing(2, 2))])
    }

    /// rho -> p_I rho + p_x X rho X + p_y Y rho Y + p_z Z rho Z.
    pub fn pauli(p: [f64; 4]) -> Result<Self> {
        let total: f64 = p.iter().sum();
        if p.iter().any(|x| !(0.0..=1.0).contains(x)) || (total - 1.0).abs() > 1e-12 {
            return Err(Error::ParameterOutOfRange {
                name: "pauli probabilities",
                value: total,
                range: "a probability 4-vector",
            });
        }
        let ops = [ComplexMatrix::identity(2), pauli_x(), pauli_y(), pauli_z()];
        Self::new(
            ops.iter()
                .zip(p)
                .filter(|(_, w)| *w > 0.0)
                .map(|(op, w)| op.scale_real(w.sqrt()))
                .collect(),
        )
    }

    /// Kraus operators sqrt(gamma)|0><1| and |0><0| + sqrt(1-gamma)|1><1|.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        check_unit("gamma", gamma)?;
        let a0 = ComplexMatrix::from_real_rows(&[&[0.0, gamma.sqrt()], &[0.0, 0.0]])?;
        let a1 = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, (1.0 - gamma).sqrt()]])?;
        Self::new(vec![a0, a1])
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    /// max entrywise |sum_i E_i^dagger E_i - I|
    pub fn completeness_residual(&self) -> f64 {
        let mut acc = ComplexMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            acc = &acc + &(&k.dagger() * k);
        }
        acc.max_diff(&ComplexMatrix::identity(self.in_dim))
    }

    /// Linear action on an arbitrary in_dim x in_dim operator.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !x.is_square() || x.rows() != self.in_dim {
            return Err(Error::DimensionMismatch(format!(
                "channel input dim {} applied to a {}x{} operator",
                self.in_dim,
                x.rows(),
                x.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            out = &out + &(&(k * x) * &k.dagger());
        }
        Ok(out)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_trusted(&self.apply_operator(rho.matrix())?))
    }

    /// Output for a pure input vector, sum_i (E_i psi)(E_i psi)^dagger.
    pub fn apply_pure(&self, psi: &[C64]) -> Result<DensityMatrix> {
        if psi.len() != self.in_dim {
            return Err(Error::DimensionMismatch(format!(
                "channel input dim {} applied to a vector of length {}",
                self.in_dim,
                psi.len()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            let v = k.matvec(psi);
            out = &out + &ComplexMatrix::outer(&v, &v);
        }
        Ok(DensityMatrix::from_trusted(&out))
    }

    /// (id_R ⊗ ch)(rho) for rho on R ⊗ A with dim R = `ref_dim`.
    pub fn apply_extended(&self, rho: &DensityMatrix, ref_dim: usize) -> Result<DensityMatrix> {
        if rho.dim() != ref_dim * self.in_dim {
            return Err(Error::DimensionMismatch(format!(
                "extended input of dim {} is not {ref_dim} x {}",
                rho.dim(),
                self.in_dim
            )));
        }
        let id = ComplexMatrix::identity(ref_dim);
        let m = rho.matrix();
        let mut out = ComplexMatrix::zeros(ref_dim * self.out_dim, ref_dim * self.out_dim);
        for k in &self.kraus {
            let big = id.kron(k);
            out = &out + &(&(&big * m) * &big.dagger());
        }
        Ok(DensityMatrix::from_trusted(&out))
    }

    /// (id_R ⊗ ch) on a pure input vector on R ⊗ A.
    pub fn apply_extended_pure(&self, psi: &[C64], ref_dim: usize) -> Result<DensityMatrix> {
        if psi.len() != ref_dim * self.in_dim {
            return Err(Error::DimensionMismatch(format!(
                "extended input of length {} is not {ref_dim} x {}",
                psi.len(),
                self.in_dim
            )));
        }
        let od = ref_dim * self.out_dim;
        let mut out = ComplexMatrix::zeros(od, od);
        let mut v = vec![ZERO; od];
        for k in &self.kraus {
            for rr in 0..ref_dim {
                let chunk = &psi[rr * self.in_dim..(rr + 1) * self.in_dim];
                let img = k.matvec(chunk);
                v[rr * self.out_dim..(rr + 1) * self.out_dim].copy_from_slice(&img);
            }
            out = &out + &ComplexMatrix::outer(&v, &v);
        }
        Ok(DensityMatrix::from_trusted(&out))
    }

    /// ch ⊗ other, with Kraus set {E_i ⊗ F_j}.
    pub fn tensor(&self, other: &KrausChannel, cap: usize) -> Result<Self> {
        let (din, dout) = (self.in_dim * other.in_dim, self.out_dim * other.out_dim);
        let need = din.max(dout);
        if need > cap {
            return Err(Error::BudgetExceeded {
                what: "tensor product dimension",
                requested: need,
                cap,
            });
        }
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| a.kron(b)))
            .collect();
        Ok(Self {
            in_dim: din,
            out_dim: dout,
            kraus,
        })
    }

    /// ch^{⊗n}; fails with `BudgetExceeded` when the dimension passes `cap`.
    pub fn tensor_power(&self, n: usize, cap: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ParameterOutOfRange {
                name: "n",
                value: 0.0,
                range: "n >= 1",
            });
        }
        let need = self
            .in_dim
            .max(self.out_dim)
            .checked_pow(n as u32)
            .unwrap_or(usize::MAX);
        if need > cap {
            return Err(Error::BudgetExceeded {
                what: "tensor power dimension",
                requested: need,
                cap,
            });
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.tensor(self, cap)?;
        }
        Ok(acc)
    }

    /// Choi matrix sum_ij |i><j| ⊗ ch(|i><j|) on in ⊗ out.
    pub fn choi(&self) -> ComplexMatrix {
        choi_of(self.in_dim, self.out_dim, |x| {
            self.apply_operator(x).expect("dims checked")
        })
    }

    /// Smallest eigenvalue of the partially transposed Choi matrix.
    pub fn choi_partial_transpose_min_eig(&self) -> f64 {
        let pt = partial_transpose_first(&self.choi(), self.in_dim, self.out_dim);
        HermitianOperator::from_hermitian_part(&pt).lambda_min()
    }

    /// PPT test on the Choi matrix (necessary for entanglement breaking).
    pub fn is_ppt(&self) -> bool {
        self.choi_partial_transpose_min_eig() >= -CHOI_TOL
    }
}

fn check_unit(name: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value: x,
            range: "[0, 1]",
        })
    }
}

fn choi_of(in_dim: usize, out_dim: usize, map: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> ComplexMatrix {
    let mut j = ComplexMatrix::zeros(in_dim * out_dim, in_dim * out_dim);
    for a in 0..in_dim {
        for b in 0..in_dim {
            let eab = ComplexMatrix::outer(&basis_ket(in_dim, a), &basis_ket(in_dim, b));
            let img = map(&eab);
            for k in 0..out_dim {
                for l in 0..out_dim {
                    j[(a * out_dim + k, b * out_dim + l)] = img[(k, l)];
                }
            }
        }
    }
    j
}

fn partial_transpose_first(m: &ComplexMatrix, d1: usize, d2: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d1 * d2, d1 * d2, |i, j| {
        let (a, k) = (i / d2, i % d2);
        let (b, l) = (j / d2, j % d2);
        m[(b * d2 + k, a * d2 + l)]
    })
}

/// The two entanglement-breaking channels C^2 ⊗ C^2 (registers A, C) -> C^2
/// of the Harrow et al. construction. Both measure C in the computational
/// basis; on outcome 0 they prepare |0> (resp. |+>), on outcome 1 they measure
/// A in the Z (resp. X) basis.
pub fn harrow_channels() -> (KrausChannel, KrausChannel) {
    let k0 = basis_ket(2, 0);
    let k1 = basis_ket(2, 1);
    let plus = vec![r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)];
    let minus = vec![r(FRAC_1_SQRT_2), r(-FRAC_1_SQRT_2)];
    // bras on A ⊗ C
    let ac = |a: &[C64], c: &[C64]| kron_vec(a, c);
    let op = |out: &[C64], bra: Vec<C64>, w: f64| ComplexMatrix::outer(out, &bra).scale_real(w);
    let h = FRAC_1_SQRT_2;

    let m = vec![
        op(&k0, ac(&k0, &k0), 1.0),
        op(&k0, ac(&k1, &k0), 1.0),
        op(&k0, ac(&k0, &k1), 1.0),
        op(&k0, ac(&k1, &k1), h),
        op(&k1, ac(&k1, &k1), h),
    ];
    let mbar = vec![
        op(&plus, ac(&k0, &k0), 1.0),
        op(&plus, ac(&k1, &k0), 1.0),
        op(&k1, ac(&plus, &k1), 1.0),
        op(&k0, ac(&minus, &k1), h),
        op(&k1, ac(&minus, &k1), h),
    ];
    (
        KrausChannel::new(m).expect("M is trace preserving"),
        KrausChannel::new(mbar).expect("Mbar is trace preserving"),
    )
}

/// Harrow channels mixed with weight `eps` into the completely depolarizing
/// channel C^4 -> C^2.
pub fn harrow_depolarized_channels(eps: f64) -> Result<(KrausChannel, KrausChannel)> {
    check_unit("eps", eps)?;
    let (m, mbar) = harrow_channels();
    let dep = KrausChannel::completely_depolarizing(4, 2);
    Ok((
        KrausChannel::mixture(&[(1.0 - eps, &m), (eps, &dep)])?,
        KrausChannel::mixture(&[(1.0 - eps, &mbar), (eps, &dep)])?,
    ))
}

/// Qubit channel in Bloch form: r -> t + T r.
#[derive(Clone, Debug, PartialEq)]
pub struct BlochAffine {
    pub t: [f64; 3],
    pub tmat: [[f64; 3]; 3],
}

impl BlochAffine {
    pub fn map_bloch(&self, v: [f64; 3]) -> [f64; 3] {
        let mut out = self.t;
        for (i, o) in out.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                *o += self.tmat[i][j] * vj;
            }
        }
        out
    }

    /// Linear extension to all 2x2 operators X = (x0 I + x.sigma)/2.
    pub fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let paulis = [pauli_x(), pauli_y(), pauli_z()];
        let x0 = x.trace();
        let xs: Vec<C64> = paulis.iter().map(|p| (x * p).trace()).collect();
        let mut out = ComplexMatrix::identity(2).scale(x0);
        for (i, p) in paulis.iter().enumerate() {
            let mut coeff = x0 * self.t[i];
            for (j, xj) in xs.iter().enumerate() {
                coeff += xj * self.tmat[i][j];
            }
            out = &out + &p.scale(coeff);
        }
        out.scale_real(0.5)
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let v = rho.bloch_vector()?;
        Ok(DensityMatrix::from_bloch_trusted(self.map_bloch(v)))
    }

    pub fn choi(&self) -> ComplexMatrix {
        choi_of(2, 2, |x| self.apply_operator(x))
    }

    /// Choi matrix PSD within 1e-9.
    pub fn is_completely_positive(&self) -> bool {
        HermitianOperator::from_hermitian_part(&self.choi()).lambda_min() >= -CHOI_TOL
    }
}

/// t_i = Tr(sigma_i M(I))/2, T_ij = Tr(sigma_i M(sigma_j))/2.
pub fn bloch_affine_of(ch: &KrausChannel) -> Result<BlochAffine> {
    if ch.in_dim != 2 || ch.out_dim != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Bloch form needs a qubit channel, got {} -> {}",
            ch.in_dim, ch.out_dim
        )));
    }
    let half = |m: &ComplexMatrix| {
        let b = bloch_of(m);
        [0.5 * b[0], 0.5 * b[1], 0.5 * b[2]]
    };
    let t = half(&ch.apply_operator(&ComplexMatrix::identity(2))?);
    let mut tmat = [[0.0; 3]; 3];
    for (j, p) in [pauli_x(), pauli_y(), pauli_z()].iter().enumerate() {
        let col = half(&ch.apply_operator(p)?);
        for i in 0..3 {
            tmat[i][j] = col[i];
        }
    }
    Ok(BlochAffine { t, tmat })
}

/// Finite classical-quantum channel x -> rho_x.
#[derive(Clone, Debug, PartialEq)]
pub struct CqChannel {
    labels: Vec<String>,
    outputs: Vec<DensityMatrix>,
}

impl CqChannel {
    pub fn new(labels: Vec<String>, outputs: Vec<DensityMatrix>) -> Result<Self> {
        if labels.is_empty() || labels.len() != outputs.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} output states",
                labels.len(),
                outputs.len()
            )));
        }
        let d = outputs[0].dim();
        if outputs.iter().any(|o| o.dim() != d) {
            return Err(Error::DimensionMismatch("cq-channel outputs of different dims".into()));
        }
        let mut sorted = labels.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != labels.len() {
            return Err(Error::Parse("duplicate alphabet labels".into()));
        }
        Ok(Self { labels, outputs })
    }

    /// Labels "0", "1", ...
    pub fn from_states(outputs: Vec<DensityMatrix>) -> Result<Self> {
        let labels = (0..outputs.len()).map(|i| i.to_string()).collect();
        Self::new(labels, outputs)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn out_dim(&self) -> usize {
        self.outputs[0].dim()
    }

    pub fn outputs(&self) -> &[DensityMatrix] {
        &self.outputs
    }

    pub fn output(&self, x: usize) -> &DensityMatrix {
        &self.outputs[x]
    }

    pub fn output_by_label(&self, label: &str) -> Option<&DensityMatrix> {
        self.labels.iter().position(|l| l == label).map(|i| &self.outputs[i])
    }

    /// Checks that the two channels share alphabet and output dimension.
    pub fn check_matched(&self, other: &CqChannel) -> Result<()> {
        if self.labels != other.labels || self.out_dim() != other.out_dim() {
            return Err(Error::DimensionMismatch(
                "cq-channels must share alphabet and output dimension".into(),
            ));
        }
        Ok(())
    }
}

/// Measure-and-prepare map xi -> sum_x rho_x Tr(E_x xi) for a PVM {E_x}.
#[derive(Clone, Debug)]
pub struct PvmStatePreparer {
    pvm: Vec<ComplexMatrix>,
    prepared: Vec<DensityMatrix>,
}

impl PvmStatePreparer {
    pub fn new(pvm: Vec<ComplexMatrix>, prepared: Vec<DensityMatrix>) -> Result<Self> {
        if pvm.is_empty() || pvm.len() != prepared.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} projectors for {} prepared states",
                pvm.len(),
                prepared.len()
            )));
        }
        let d = pvm[0].rows();
        if pvm.iter().any(|e| !e.is_square() || e.rows() != d) {
            return Err(Error::DimensionMismatch("projectors of different dims".into()));
        }
        let mut sum = ComplexMatrix::zeros(d, d);
        for e in &pvm {
            sum = &sum + e;
        }
        let residual = sum.max_diff(&ComplexMatrix::identity(d));
        if residual > COMPLETENESS_TOL {
            return Err(Error::InvalidPvm {
                invariant: "sum of projectors equals identity",
                residual,
            });
        }
        for (x, ex) in pvm.iter().enumerate() {
            for (y, ey) in pvm.iter().enumerate() {
                let prod = ex * ey;
                let target = if x == y { ex.clone() } else { ComplexMatrix::zeros(d, d) };
                let residual = prod.max_diff(&target);
                if residual > COMPLETENESS_TOL {
                    return Err(Error::InvalidPvm {
                        invariant: "E_x E_y = delta_xy E_x",
                        residual,
                    });
                }
            }
        }
        Ok(Self { pvm, prepared })
    }

    pub fn to_channel(&self) -> Result<KrausChannel> {
        let mut kraus = Vec::new();
        for (e, rho) in self.pvm.iter().zip(&self.prepared) {
            let pe = HermitianOperator::from_hermitian_part(e);
            let range: Vec<Vec<C64>> = (0..pe.dim())
                .filter(|&k| pe.eig().eigenvalues[k] > 0.5)
                .map(|k| pe.eig().vector(k))
                .collect();
            let re = rho.eig();
            for (k, &l) in re.eigenvalues.iter().enumerate() {
                if l <= 0.0 {
                    continue;
                }
                let u = re.vector(k);
                for b in &range {
                    kraus.push(ComplexMatrix::outer(&u, b).scale_real(l.sqrt()));
                }
            }
        }
        KrausChannel::new(kraus)
    }
}

/// The qq-channel xi -> sum_x rho_x <x|xi|x> realizing a cq-channel.
pub fn cq_as_qq(n: &CqChannel) -> KrausChannel {
    let d = n.len();
    let pvm = (0..d)
        .map(|x| ComplexMatrix::outer(&basis_ket(d, x), &basis_ket(d, x)))
        .collect();
    PvmStatePreparer::new(pvm, n.outputs.clone())
        .and_then(|p| p.to_channel())
        .expect("computational-basis PVM is valid")
}

/// Tr_R of an operator on R ⊗ A.
pub fn trace_out_reference(m: &ComplexMatrix, ref_dim: usize, sys_dim: usize) -> Result<ComplexMatrix> {
    partial_trace_matrix(m, &[ref_dim, sys_dim], &[1])
}

/// |psi> on A from a unit vector, for building product inputs.
pub fn ket_state(v: &[C64]) -> Result<DensityMatrix> {
    DensityMatrix::pure(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{kron_vec, partial_trace, random, ONE};

    fn assert_state_eq(a: &DensityMatrix, b: &DensityMatrix, tol: f64) {
        assert!(
            a.matrix().approx_eq(b.matrix(), tol),
            "{:?} vs {:?}",
            a.matrix(),
            b.matrix()
        );
    }

    #[test]
    fn constructors_are_complete() {
        let (m, mbar) = harrow_channels();
        for ch in [
            KrausChannel::identity(3),
            KrausChannel::depolarizing(0.3).unwrap(),
            KrausChannel::pauli([0.4, 0.3, 0.2, 0.1]).unwrap(),
            KrausChannel::amplitude_damping(0.7).unwrap(),
            KrausChannel::completely_depolarizing(4, 2),
            m,
            mbar,
        ] {
            assert!(ch.completeness_residual() <= COMPLETENESS_TOL);
        }
    }

    #[test]
    fn rejects_incomplete_kraus() {
        let k = ComplexMatrix::identity(2).scale_real(0.9);
        assert!(matches!(
            KrausChannel::new(vec![k]),
            Err(Error::NotTracePreserving { .. })
        ));
        assert!(matches!(
            KrausChannel::depolarizing(1.5),
            Err(Error::ParameterOutOfRange { .. })
        ));
        assert!(KrausChannel::pauli([0.5, 0.5, 0.5, -0.5]).is_err());
    }

    #[test]
    fn apply_examples() {
        let mut rng = random::stream_rng(1, 0);
        let rho = random::random_density(2, 2, &mut rng);
        assert_state_eq(&KrausChannel::identity(2).apply(&rho).unwrap(), &rho, 1e-15);
        assert_state_eq(
            &KrausChannel::depolarizing(1.0).unwrap().apply(&rho).unwrap(),
            &DensityMatrix::maximally_mixed(2),
            1e-15,
        );
        assert_state_eq(
            &KrausChannel::depolarizing(0.0).unwrap().apply(&rho).unwrap(),
            &rho,
            1e-15,
        );
        let g = 0.35;
        let out = KrausChannel::amplitude_damping(g)
            .unwrap()
            .apply(&DensityMatrix::basis(2, 1))
            .unwrap();
        assert_state_eq(&out, &DensityMatrix::diagonal(&[g, 1.0 - g]).unwrap(), 1e-15);
        let full = KrausChannel::amplitude_damping(1.0).unwrap();
        assert_state_eq(&full.apply(&rho).unwrap(), &DensityMatrix::basis(2, 0), 1e-15);
        assert!(KrausChannel::identity(3).apply(&rho).is_err());
    }

    #[test]
    fn pauli_matches_depolarizing() {
        let q = 0.37;
        let dep = KrausChannel::depolarizing(q).unwrap();
        let pau = KrausChannel::pauli([1.0 - 0.75 * q, q / 4.0, q / 4.0, q / 4.0]).unwrap();
        let mut rng = random::stream_rng(2, 0);
        for _ in 0..20 {
            let rho = random::random_density(2, 2, &mut rng);
            assert_state_eq(&dep.apply(&rho).unwrap(), &pau.apply(&rho).unwrap(), 1e-14);
        }
    }

    #[test]
    fn extended_action() {
        let mut rng = random::stream_rng(3, 0);
        let ch = KrausChannel::amplitude_damping(0.4).unwrap();
        let rr = random::random_density(3, 3, &mut rng);
        let ra = random::random_density(2, 2, &mut rng);
        let out = ch.apply_extended(&rr.kron(&ra), 3).unwrap();
        assert_state_eq(&out, &rr.kron(&ch.apply(&ra).unwrap()), 1e-14);

        let bell = DensityMatrix::pure(&[ONE, ZERO, ZERO, ONE]).unwrap();
        assert_state_eq(
            &KrausChannel::identity(2).apply_extended(&bell, 2).unwrap(),
            &bell,
            1e-15,
        );

        // Tr_R commutes with the channel
        let joint = random::random_density(6, 6, &mut rng);
        let lhs = partial_trace(&ch.apply_extended(&joint, 3).unwrap(), &[3, 2], &[1]).unwrap();
        let rhs = ch.apply(&partial_trace(&joint, &[3, 2], &[1]).unwrap()).unwrap();
        assert_state_eq(&lhs, &rhs, 1e-14);

        let psi = random::haar_vector(6, &mut rng);
        let a = ch.apply_extended_pure(&psi, 3).unwrap();
        let b = ch.apply_extended(&DensityMatrix::pure(&psi).unwrap(), 3).unwrap();
        assert_state_eq(&a, &b, 1e-14);
        assert!(ch.apply_extended(&joint, 2).is_err());
    }

    #[test]
    fn tensor_power_examples() {
        let dep = KrausChannel::depolarizing(0.3).unwrap();
        assert_eq!(dep.tensor_power(1, 64).unwrap(), dep);
        let id2 = KrausChannel::identity(2).tensor_power(2, 64).unwrap();
        let mut rng = random::stream_rng(4, 0);
        let rho = random::random_density(4, 4, &mut rng);
        assert_state_eq(&id2.apply(&rho).unwrap(), &rho, 1e-15);

        let z = DensityMatrix::basis(2, 0);
        let lhs = dep.tensor_power(2, 64).unwrap().apply(&z.kron(&z)).unwrap();
        let single = dep.apply(&z).unwrap();
        assert_state_eq(&lhs, &single.kron(&single), 1e-15);

        assert!(matches!(
            dep.tensor_power(7, 64),
            Err(Error::BudgetExceeded { requested: 128, .. })
        ));
    }

    #[test]
    fn harrow_outputs_on_00() {
        let (m, mbar) = harrow_channels();
        let z = DensityMatrix::basis(2, 0);
        let input = z.kron(&z);
        assert_state_eq(&m.apply(&input).unwrap(), &z, 1e-15);
        let plus = DensityMatrix::pure(&[ONE, ONE]).unwrap();
        assert_state_eq(&mbar.apply(&input).unwrap(), &plus, 1e-15);
        assert!(m.is_ppt() && mbar.is_ppt());
        assert!(!KrausChannel::identity(2).is_ppt());
    }

    #[test]
    fn bloch_forms() {
        let q = 0.3;
        let b = bloch_affine_of(&KrausChannel::depolarizing(q).unwrap()).unwrap();
        let close = |x: f64, y: f64| (x - y).abs() < 1e-14;
        for i in 0..3 {
            assert!(close(b.t[i], 0.0));
            for j in 0..3 {
                assert!(close(b.tmat[i][j], if i == j { 1.0 - q } else { 0.0 }));
            }
        }
        let g = 0.6;
        let b = bloch_affine_of(&KrausChannel::amplitude_damping(g).unwrap()).unwrap();
        assert!(close(b.t[2], g) && close(b.t[0], 0.0) && close(b.t[1], 0.0));
        let diag = [(1.0 - g).sqrt(), (1.0 - g).sqrt(), 1.0 - g];
        for i in 0..3 {
            assert!(close(b.tmat[i][i], diag[i]));
        }
        let p = [0.5, 0.2, 0.2, 0.1];
        let b = bloch_affine_of(&KrausChannel::pauli(p).unwrap()).unwrap();
        let want = [
            p[0] + p[1] - p[2] - p[3],
            p[0] - p[1] + p[2] - p[3],
            p[0] - p[1] - p[2] + p[3],
        ];
        for i in 0..3 {
            assert!(close(b.tmat[i][i], want[i]));
        }
        assert!(b.is_completely_positive());
        // transpose map is positive but not CP
        let transpose = BlochAffine {
            t: [0.0; 3],
            tmat: [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]],
        };
        assert!(!transpose.is_completely_positive());
        assert!(bloch_affine_of(&KrausChannel::identity(3)).is_err());
    }

    #[test]
    fn bloch_roundtrip_random_states() {
        let mut rng = random::stream_rng(5, 0);
        let chans = [
            KrausChannel::amplitude_damping(0.3).unwrap(),
            KrausChannel::pauli([0.6, 0.1, 0.2, 0.1]).unwrap(),
            KrausChannel::unitary(random::haar_unitary(2, &mut rng)).unwrap(),
        ];
        for ch in &chans {
            let b = bloch_affine_of(ch).unwrap();
            assert!(b.is_completely_positive());
            for _ in 0..100 {
                let rho = random::random_density(2, 2, &mut rng);
                assert_state_eq(&b.apply(&rho).unwrap(), &ch.apply(&rho).unwrap(), 1e-10);
            }
        }
    }

    #[test]
    fn cq_embedding() {
        let rho0 = DensityMatrix::from_bloch([0.1, 0.2, 0.3]).unwrap();
        let rho1 = DensityMatrix::from_bloch([0.0, -0.5, 0.5]).unwrap();
        let n = CqChannel::from_states(vec![rho0.clone(), rho1.clone()]).unwrap();
        let qq = cq_as_qq(&n);
        assert!(qq.completeness_residual() <= COMPLETENESS_TOL);
        assert_state_eq(&qq.apply(&DensityMatrix::basis(2, 0)).unwrap(), &rho0, 1e-14);
        assert_state_eq(&qq.apply(&DensityMatrix::basis(2, 1)).unwrap(), &rho1, 1e-14);

        let single = CqChannel::from_states(vec![rho1.clone()]).unwrap();
        let rep = cq_as_qq(&single);
        assert_eq!(rep.in_dim(), 1);
        assert_state_eq(&rep.apply(&DensityMatrix::basis(1, 0)).unwrap(), &rho1, 1e-14);

        // replacer constant on a 2-dim input
        let rep2 = KrausChannel::replacer(2, &rho1);
        let mut rng = random::stream_rng(6, 0);
        assert_state_eq(
            &rep2.apply(&random::random_density(2, 2, &mut rng)).unwrap(),
            &rho1,
            1e-14,
        );
    }

    #[test]
    fn pvm_validation() {
        let p0 = ComplexMatrix::outer(&basis_ket(2, 0), &basis_ket(2, 0));
        let plus = vec![r(FRAC_1_SQRT_2), r(FRAC_1_SQRT_2)];
        let pp = ComplexMatrix::outer(&plus, &plus);
        let states = vec![DensityMatrix::basis(2, 0), DensityMatrix::basis(2, 1)];
        assert!(matches!(
            PvmStatePreparer::new(vec![p0.clone(), pp], states.clone()),
            Err(Error::InvalidPvm { .. })
        ));
        let p1 = ComplexMatrix::outer(&basis_ket(2, 1), &basis_ket(2, 1));
        assert!(PvmStatePreparer::new(vec![p0, p1], states).is_ok());
        // rank-two projector preparing a mixed state
        let big = ComplexMatrix::diag(&[1.0, 1.0, 0.0]);
        let small = ComplexMatrix::diag(&[0.0, 0.0, 1.0]);
        let ch = PvmStatePreparer::new(
            vec![big, small],
            vec![DensityMatrix::maximally_mixed(2), DensityMatrix::basis(2, 1)],
        )
        .unwrap()
        .to_channel()
        .unwrap();
        let psi = kron_vec(&basis_ket(1, 0), &[r(0.6), r(0.0), r(0.8)]);
        let out = ch.apply(&DensityMatrix::pure(&psi).unwrap()).unwrap();
        assert_state_eq(&out, &DensityMatrix::diagonal(&[0.18, 0.82]).unwrap(), 1e-14);
    }
}
