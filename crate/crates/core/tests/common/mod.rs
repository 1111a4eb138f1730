//! Reference computations written independently of the library numerics.
#![allow(dead_code)]

use qchd::linalg::{ComplexMatrix, DensityMatrix};

/// Real symmetric 2n x 2n embedding [[A, -B], [B, A]] of H = A + iB.
fn embed(m: &ComplexMatrix) -> Vec<Vec<f64>> {
    let n = m.rows();
    let mut e = vec![vec![0.0; 2 * n]; 2 * n];
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            e[i][j] = z.re;
            e[i + n][j + n] = z.re;
            e[i][j + n] = -z.im;
            e[i + n][j] = z.im;
        }
    }
    e
}

/// Cyclic Jacobi on a real symmetric matrix: (eigenvalues, eigenvectors as columns).
pub fn jacobi(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Spectrum of a Hermitian matrix (each eigenvalue once, ascending).
pub fn eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let (mut w, _) = jacobi(embed(m));
    w.sort_by(f64::total_cmp);
    w.into_iter().step_by(2).collect()
}

/// f applied to the spectrum, returned in the real embedding.
fn embedded_function(m: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
    let (w, v) = jacobi(embed(m));
    let n = w.len();
    let mut out = vec![vec![0.0; n]; n];
    for k in 0..n {
        let fk = f(w[k]);
        for i in 0..n {
            for j in 0..n {
                out[i][j] += fk * v[i][k] * v[j][k];
            }
        }
    }
    out
}

/// Tr rho^a sigma^(1-a), zero eigenvalues mapped to zero.
pub fn overlap(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> f64 {
    let pw = |s: f64| move |x: f64| if x > 1e-14 { x.powf(s) } else { 0.0 };
    let x = embedded_function(rho.matrix(), pw(a));
    let y = embedded_function(sigma.matrix(), pw(1.0 - a));
    let n = x.len();
    let mut t = 0.0;
    for i in 0..n {
        for k in 0..n {
            t += x[i][k] * y[k][i];
        }
    }
    t / 2.0
}

pub fn renyi(rho: &DensityMatrix, sigma: &DensityMatrix, a: f64) -> f64 {
    overlap(rho, sigma, a).log2() / (a - 1.0)
}

/// Tr rho^a sigma^(1-a) for qubits straight from the Bloch vectors.
pub fn qubit_overlap(r: [f64; 3], s: [f64; 3], a: f64) -> f64 {
    let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let (nr, ns) = (norm(r), norm(s));
    let cos = if nr > 0.0 && ns > 0.0 {
        (r[0] * s[0] + r[1] * s[1] + r[2] * s[2]) / (nr * ns)
    } else {
        0.0
    };
    let mut t = 0.0;
    for si in [1.0, -1.0] {
        for tj in [1.0, -1.0] {
            let l = (1.0 + si * nr) / 2.0;
            let m = (1.0 + tj * ns) / 2.0;
            if l <= 0.0 || m <= 0.0 {
                continue;
            }
            let tr = if nr > 0.0 && ns > 0.0 {
                (1.0 + si * tj * cos) / 2.0
            } else {
                0.5
            };
            t += l.powf(a) * m.powf(1.0 - a) * tr;
        }
    }
    t
}

/// D(rho || sigma) in bits for qubits, sigma full rank.
pub fn qubit_relative_entropy(r: [f64; 3], s: [f64; 3]) -> f64 {
    let norm = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let (nr, ns) = (norm(r), norm(s));
    let h = |x: f64| if x > 0.0 { x * x.log2() } else { 0.0 };
    let neg_entropy = h((1.0 + nr) / 2.0) + h((1.0 - nr) / 2.0);
    // -Tr rho log sigma; log sigma = c0 I + c1 (s.sigma)/|s|
    let (m1, m2) = ((1.0 + ns) / 2.0, (1.0 - ns) / 2.0);
    let c0 = (m1.log2() + m2.log2()) / 2.0;
    let c1 = (m1.log2() - m2.log2()) / 2.0;
    let proj = if ns > 0.0 {
        (r[0] * s[0] + r[1] * s[1] + r[2] * s[2]) / ns
    } else {
        0.0
    };
    neg_entropy - (c0 + c1 * proj)
}

/// Golden-section maximum of a unimodal function on [lo, hi] after a coarse scan.
pub fn maximize(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let n = 400;
    let mut best = (f64::NEG_INFINITY, lo);
    for k in 0..=n {
        let x = lo + (hi - lo) * k as f64 / n as f64;
        let v = f(x);
        if v > best.0 {
            best = (v, x);
        }
    }
    let h = (hi - lo) / n as f64;
    let (mut a, mut b) = ((best.1 - h).max(lo), (best.1 + h).min(hi));
    let g = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let x = (a + b) / 2.0;
    let fx = f(x);
    if fx >= best.0 {
        (fx, x)
    } else {
        best
    }
}

/// Q(q, a) for the antipodal outputs of the depolarizing channel.
pub fn depolarizing_q(q: f64, a: f64) -> f64 {
    let (x, y) = (1.0 - q / 2.0, q / 2.0);
    x.powf(a) * y.powf(1.0 - a) + x.powf(1.0 - a) * y.powf(a)
}

/// max over letters of max over s of -log2 sum_y W^s Wbar^(1-s).
pub fn classical_chernoff(w: &[Vec<f64>], wbar: &[Vec<f64>]) -> f64 {
    w.iter()
        .zip(wbar)
        .map(|(p, q)| {
            maximize(
                |s| {
                    -p.iter()
                        .zip(q)
                        .map(|(a, b)| a.powf(s) * b.powf(1.0 - s))
                        .sum::<f64>()
                        .log2()
                },
                0.0,
                1.0,
            )
            .0
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
