//! Cyclic Jacobi eigensolver for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot entry with a diagonal
//! unitary, then applies the classical real Jacobi rotation to the resulting
//! real symmetric 2x2 block. Sweeps continue until the off-diagonal mass is at
//! roundoff level relative to the Frobenius norm.

use super::matrix::{ComplexMatrix, C64, ONE, ZERO};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column k is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.col(k)
    }

    /// V f(Λ) V^dagger
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n)
                .filter(|&k| fl[k] != 0.0)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k])
                .sum()
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map(|l| l)
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }
}

/// Diagonalizes a matrix assumed Hermitian; only Hermitian symmetry of the
/// input is relied upon. Callers validate Hermiticity beforehand.
pub(crate) fn jacobi_eigh(h: &ComplexMatrix) -> EigenDecomposition {
    let n = h.rows();
    if n == 1 {
        return EigenDecomposition {
            eigenvalues: vec![h[(0, 0)].re],
            eigenvectors: ComplexMatrix::identity(1),
        };
    }
    if n == 2 {
        return eigh_2x2(h);
    }
    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, scale);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    EigenDecomposition {
        eigenvalues: order.iter().map(|&i| diag[i]).collect(),
        eigenvectors: ComplexMatrix::from_fn(n, n, |i, k| v[(i, order[k])]),
    }
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let n = a.rows();
    let g = a[(p, q)];
    let gabs = g.norm();
    if gabs <= 1e-300 || gabs <= 1e-18 * scale {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return;
    }
    let phase = g / gabs;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * gabs);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let cs = 1.0 / (t * t + 1.0).sqrt();
    let sn = t * cs;
    // U on the (p, q) plane: [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
    let ph_c = phase.conj();
    let u_pp = C64::new(cs, 0.0);
    let u_pq = C64::new(sn, 0.0);
    let u_qp = -ph_c * sn;
    let u_qq = ph_c * cs;

    // A <- A U (columns)
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * u_pp + aiq * u_qp;
        a[(i, q)] = aip * u_pq + aiq * u_qq;
    }
    // A <- U^dagger A (rows)
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = u_pp.conj() * apj + u_qp.conj() * aqj;
        a[(q, j)] = u_pq.conj() * apj + u_qq.conj() * aqj;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * u_pp + viq * u_qp;
        v[(i, q)] = vip * u_pq + viq * u_qq;
    }
}

/// Closed-form 2x2 case; the qubit searches call this millions of times.
fn eigh_2x2(h: &ComplexMatrix) -> EigenDecomposition {
    let a = h[(0, 0)].re;
    let d = h[(1, 1)].re;
    let b = (h[(0, 1)] + h[(1, 0)].conj()) * 0.5;
    let bn = b.norm();
    let mean = 0.5 * (a + d);
    let half = 0.5 * (a - d);
    let rad = (half * half + bn * bn).sqrt();
    let (l0, l1) = (mean - rad, mean + rad);
    if bn <= 1e-300 || bn <= 1e-17 * rad {
        // already diagonal
        return if a <= d {
            EigenDecomposition {
                eigenvalues: vec![a, d],
                eigenvectors: ComplexMatrix::identity(2),
            }
        } else {
            EigenDecomposition {
                eigenvalues: vec![d, a],
                eigenvectors: ComplexMatrix::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap(),
            }
        };
    }
    // Eigenvector of l1: (b, l1 - a) or (l1 - d, conj b); pick the better conditioned.
    let (x0, x1) = if half >= 0.0 {
        (C64::new(l1 - d, 0.0), b.conj())
    } else {
        (b, C64::new(l1 - a, 0.0))
    };
    let nrm = (x0.norm_sqr() + x1.norm_sqr()).sqrt();
    let (x0, x1) = (x0 / nrm, x1 / nrm);
    // orthogonal complement for l0
    let (y0, y1) = (-x1.conj(), x0.conj());
    EigenDecomposition {
        eigenvalues: vec![l0, l1],
        eigenvectors: ComplexMatrix::from_rows(&[vec![y0, x0], vec![y1, x1]]).unwrap(),
    }
}
