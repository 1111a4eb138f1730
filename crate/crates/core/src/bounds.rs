//! Non-adaptive error floors from positive definite combinations
//! P = sum_ij alpha_ij E_i^dagger F_j of Kraus products.
//!
//! If P > 0 then every parallel strategy has Bayes error at least
//! lambda_min(P)^{4n} / 4, so the non-adaptive Chernoff exponent is at most
//! 4 log2(1 / lambda_min(P)).

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::linalg::{random, ComplexMatrix, HermitianOperator, C64, ZERO};

/// Below this lambda_min a combination is not treated as positive.
pub const POSITIVITY_THRESHOLD: f64 = 1e-9;
pub const DEFAULT_RESTARTS: usize = 64;

/// All products E_i^dagger F_j, index i * |F| + j.
#[derive(Clone, Debug)]
pub struct KrausProductSpan {
    pub basis: Vec<ComplexMatrix>,
    pub in_dim: usize,
    /// (|E|, |F|)
    pub shape: (usize, usize),
}

impl KrausProductSpan {
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn combine(&self, coeffs: &[C64]) -> ComplexMatrix {
        let d = self.in_dim;
        let mut p = ComplexMatrix::zeros(d, d);
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != ZERO {
                p = &p + &b.scale(c);
            }
        }
        p
    }
}

pub fn kraus_product_span(m: &KrausChannel, mbar: &KrausChannel) -> Result<KrausProductSpan> {
    if m.in_dim() != mbar.in_dim() || m.out_dim() != mbar.out_dim() {
        return Err(Error::DimensionMismatch(format!(
            "channels {}->{} and {}->{}",
            m.in_dim(),
            m.out_dim(),
            mbar.in_dim(),
            mbar.out_dim()
        )));
    }
    let basis = m
        .kraus()
        .iter()
        .flat_map(|e| {
            let ed = e.dagger();
            mbar.kraus().iter().map(move |f| &ed * f)
        })
        .collect();
    Ok(KrausProductSpan {
        basis,
        in_dim: m.in_dim(),
        shape: (m.kraus().len(), mbar.kraus().len()),
    })
}

#[derive(Clone, Debug)]
pub struct PositiveCombination {
    /// Unit l2 norm.
    pub coefficients: Vec<C64>,
    /// sum_k c_k B_k as assembled (not symmetrized).
    pub p: ComplexMatrix,
    /// Smallest eigenvalue of (P + P^dagger)/2.
    pub lambda_min: f64,
    /// max |P - P^dagger|.
    pub hermiticity_residual: f64,
}

impl PositiveCombination {
    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual <= 1e-10
    }
}

/// Normalizes `coeffs`, assembles P and checks positivity.
pub fn evaluate_combination(span: &KrausProductSpan, coeffs: &[C64]) -> Result<PositiveCombination> {
    if coeffs.len() != span.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for a span of {} products",
            coeffs.len(),
            span.len()
        )));
    }
    let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "coefficient norm",
            value: norm,
            range: "nonzero and finite",
        });
    }
    let coefficients: Vec<C64> = coeffs.iter().map(|c| c / norm).collect();
    let p = span.combine(&coefficients);
    let hermiticity_residual = p.hermiticity_residual();
    let lambda_min = HermitianOperator::from_hermitian_part(&p).lambda_min();
    if lambda_min <= POSITIVITY_THRESHOLD {
        return Err(Error::NotPositive { lambda_min });
    }
    Ok(PositiveCombination {
        coefficients,
        p,
        lambda_min,
        hermiticity_residual,
    })
}

fn positive(pc: &PositiveCombination) -> Result<f64> {
    if pc.lambda_min > 0.0 {
        Ok(pc.lambda_min)
    } else {
        Err(Error::NotPositive {
            lambda_min: pc.lambda_min,
        })
    }
}

/// 4 log2(1/lambda_min): upper bound on the non-adaptive Chernoff exponent.
pub fn chernoff_upper_bound(pc: &PositiveCombination) -> Result<f64> {
    Ok(-4.0 * positive(pc)?.log2())
}

/// lambda_min^{4n} / 4: lower bound on every parallel n-use Bayes error.
pub fn error_lower_bound(pc: &PositiveCombination, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange {
            name: "n",
            value: 0.0,
            range: "n >= 1",
        });
    }
    let l = positive(pc)?;
    Ok(0.25 * l.powi(4 * n as i32))
}

/// Hand-built combination for the Harrow channels: weights alpha on
/// E1'F1 and E2'F2, beta/sqrt2 on E5'F3 and E3'F4, -2 beta on E5'F5, with
/// alpha = 2 beta sin^2(pi/8) and 8 beta^2 sin^4(pi/8) + 5 beta^2 = 1.
pub fn harrow_ansatz_coefficients() -> Vec<C64> {
    let s2 = (PI / 8.0).sin().powi(2);
    let beta = 1.0 / (8.0 * s2 * s2 + 5.0).sqrt();
    let alpha = 2.0 * beta * s2;
    let mut c = vec![ZERO; 25];
    let idx = |i: usize, j: usize| (i - 1) * 5 + (j - 1);
    c[idx(1, 1)] = C64::new(alpha, 0.0);
    c[idx(2, 2)] = C64::new(alpha, 0.0);
    c[idx(5, 3)] = C64::new(beta * std::f64::consts::FRAC_1_SQRT_2, 0.0);
    c[idx(3, 4)] = C64::new(beta * std::f64::consts::FRAC_1_SQRT_2, 0.0);
    c[idx(5, 5)] = C64::new(-2.0 * beta, 0.0);
    c
}

/// (2 - sqrt2) / (4 sqrt(4 - sqrt2)), the ansatz value.
pub fn harrow_lambda_min_closed_form() -> f64 {
    let r2 = std::f64::consts::SQRT_2;
    (2.0 - r2) / (4.0 * (4.0 - r2).sqrt())
}

#[derive(Clone, Debug)]
pub enum SearchOutcome {
    Found(PositiveCombination),
    NotFound { best_lambda_min: f64 },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&PositiveCombination> {
        match self {
            SearchOutcome::Found(pc) => Some(pc),
            SearchOutcome::NotFound { .. } => None,
        }
    }

    pub fn best_lambda_min(&self) -> f64 {
        match self {
            SearchOutcome::Found(pc) => pc.lambda_min,
            SearchOutcome::NotFound { best_lambda_min } => *best_lambda_min,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CombinationSearchConfig {
    pub restarts: usize,
    pub seed: u64,
}

impl Default for CombinationSearchConfig {
    fn default() -> Self {
        Self {
            restarts: DEFAULT_RESTARTS,
            seed: 0,
        }
    }
}

const SEARCH_STREAM: u64 = 0xB0_0D5;

/// Real coordinates x (c_k = x_2k + i x_2k+1) keeping P exactly Hermitian:
/// an orthonormal basis of the kernel of x -> P(x) - P(x)^dagger.
fn hermitian_coordinates(span: &KrausProductSpan) -> Vec<Vec<f64>> {
    let n = 2 * span.len();
    let d = span.in_dim;
    let unit = |j: usize| -> ComplexMatrix {
        let b = &span.basis[j / 2];
        if j.is_multiple_of(2) {
            b.clone()
        } else {
            b.scale(C64::new(0.0, 1.0))
        }
    };
    // rows of the constraint operator, one per real component of P - P^dagger
    let anti: Vec<ComplexMatrix> = (0..n)
        .map(|j| {
            let m = unit(j);
            &m - &m.dagger()
        })
        .collect();
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(2 * d * d);
    for a in 0..d {
        for b in 0..d {
            rows.push(anti.iter().map(|m| m[(a, b)].re).collect());
            rows.push(anti.iter().map(|m| m[(a, b)].im).collect());
        }
    }
    let row_space = gram_schmidt(rows, &[]);
    let standard = (0..n).map(|j| {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        e
    });
    gram_schmidt(standard.collect(), &row_space)
}

/// Orthonormalizes `vs` against `against` and each other, dropping dependent vectors.
fn gram_schmidt(vs: Vec<Vec<f64>>, against: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for mut v in vs {
        let n0 = dot(&v, &v).sqrt();
        if n0 == 0.0 {
            continue;
        }
        for _ in 0..2 {
            for u in against.iter().chain(out.iter()) {
                let p = dot(u, &v);
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= p * y);
            }
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-8 * n0 {
            v.iter_mut().for_each(|x| *x /= n);
            out.push(v);
        }
    }
    out
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

struct HermitianPencil {
    dim: usize,
    gens: Vec<ComplexMatrix>,
    coords: Vec<Vec<f64>>,
}

impl HermitianPencil {
    fn at(&self, y: &[f64]) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(self.dim, self.dim);
        for (g, &w) in self.gens.iter().zip(y) {
            p = &p + &g.scale_real(w);
        }
        p
    }

    fn coefficients(&self, y: &[f64]) -> Vec<C64> {
        let n = self.coords.first().map_or(0, |c| c.len());
        let mut x = vec![0.0; n];
        for (c, &w) in self.coords.iter().zip(y) {
            x.iter_mut().zip(c).for_each(|(a, b)| *a += w * b);
        }
        x.chunks(2).map(|p| C64::new(p[0], p[1])).collect()
    }

    /// Soft-min of the spectrum at temperature t with its gradient, and the hard minimum.
    fn smoothed(&self, y: &[f64], t: f64) -> (f64, Vec<f64>, f64) {
        let h = HermitianOperator::from_hermitian_part(&self.at(y));
        let e = h.eig();
        let lmin = e.min();
        let w: Vec<f64> = e.eigenvalues.iter().map(|l| (-(l - lmin) / t).exp()).collect();
        let z: f64 = w.iter().sum();
        let mut grad = vec![0.0; self.gens.len()];
        for (k, wk) in w.iter().enumerate() {
            let p = wk / z;
            if p < 1e-14 {
                continue;
            }
            let v = e.vector(k);
            for (g, out) in self.gens.iter().zip(grad.iter_mut()) {
                let gv = g.matvec(&v);
                *out += p * crate::linalg::dot(&v, &gv).re;
            }
        }
        (lmin - t * z.ln(), grad, lmin)
    }
}

fn project_ball(y: &mut [f64]) {
    let n = dot(y, y).sqrt();
    if n > 1.0 {
        y.iter_mut().for_each(|x| *x /= n);
    }
}

/// Projected ascent of the soft-min over the unit ball with backtracking,
/// lowering the temperature in stages. lambda_min is concave and
/// homogeneous, so the ball optimum sits on the sphere.
fn ascend(pencil: &HermitianPencil, mut y: Vec<f64>) -> (Vec<f64>, f64) {
    let mut best = (y.clone(), f64::NEG_INFINITY);
    let consider = |y: &[f64], lmin: f64, best: &mut (Vec<f64>, f64)| {
        let n = dot(y, y).sqrt();
        if n > 0.0 && lmin / n > best.1 {
            *best = (y.iter().map(|x| x / n).collect(), lmin / n);
        }
    };
    let mut t = 0.05;
    let mut step = 1.0;
    while t > 1e-9 {
        let (mut f, mut g, lmin) = pencil.smoothed(&y, t);
        consider(&y, lmin, &mut best);
        for _ in 0..400 {
            let mut moved = false;
            while step > 1e-12 {
                let mut cand: Vec<f64> = y.iter().zip(&g).map(|(a, b)| a + step * b).collect();
                project_ball(&mut cand);
                let (fc, gc, lc) = pencil.smoothed(&cand, t);
                let shift: f64 = cand.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum();
                if fc >= f + 1e-4 * shift / step && shift > 0.0 {
                    consider(&cand, lc, &mut best);
                    moved = fc - f > 1e-15 * (1.0 + f.abs());
                    (y, f, g) = (cand, fc, gc);
                    step *= 2.0;
                    break;
                }
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        t *= 0.25;
        step = step.max(1e-6);
    }
    best
}

/// Maximizes lambda_min(P) over unit-norm coefficient vectors for which P is
/// Hermitian. Restarts run in parallel with per-restart seeded streams; the
/// merge keeps the lowest restart index among ties.
pub fn search_positive_combination(span: &KrausProductSpan, cfg: &CombinationSearchConfig) -> SearchOutcome {
    let coords = hermitian_coordinates(span);
    if coords.is_empty() || cfg.restarts == 0 {
        return SearchOutcome::NotFound {
            best_lambda_min: f64::NEG_INFINITY,
        };
    }
    let gens: Vec<ComplexMatrix> = coords
        .iter()
        .map(|x| {
            let c: Vec<C64> = x.chunks(2).map(|p| C64::new(p[0], p[1])).collect();
            span.combine(&c).hermitian_part()
        })
        .collect();
    let pencil = HermitianPencil {
        dim: span.in_dim,
        gens,
        coords,
    };
    let m = pencil.gens.len();
    let runs: Vec<(Vec<f64>, f64)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| {
            let mut rng = random::stream_rng(cfg.seed ^ SEARCH_STREAM, k as u64);
            let mut y: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let n = dot(&y, &y).sqrt();
            y.iter_mut().for_each(|x| *x /= n);
            ascend(&pencil, y)
        })
        .collect();
    let (y, _) = runs.into_iter().fold(
        (Vec::new(), f64::NEG_INFINITY),
        |acc, r| if r.1 > acc.1 { r } else { acc },
    );
    let coeffs = pencil.coefficients(&y);
    match evaluate_combination(span, &coeffs) {
        Ok(pc) => SearchOutcome::Found(pc),
        Err(Error::NotPositive { lambda_min }) => SearchOutcome::NotFound {
            best_lambda_min: lambda_min,
        },
        Err(_) => SearchOutcome::NotFound {
            best_lambda_min: f64::NEG_INFINITY,
        },
    }
}
