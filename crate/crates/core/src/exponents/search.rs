//! Searches over pure input states (or pairs of them) of qq-channels.
//!
//! A table of candidate inputs is built once: a (theta, phi) grid on the
//! Bloch sphere for qubits, basis states plus seeded Haar-random vectors
//! otherwise. For each candidate the output spectra and eigenvector overlaps
//! are stored, so scanning all candidates at a new alpha costs a few flops
//! each. Local refinement is Nelder-Mead in the state parameters.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::OnceLock;

use rayon::prelude::*;

use super::alpha::alpha_grid;
use super::source::{ExponentSource, Extremum, Scan, SteinCache, Witness};
use crate::channels::KrausChannel;
use crate::divergences::{OverlapProfile, ORTHOGONALITY_TOL};
use crate::error::{Error, Result};
use crate::linalg::{c, random, DensityMatrix, C64, SUPPORT_TOL};

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    /// Bloch grid for single-input searches on qubits (theta includes both poles).
    pub theta_points: usize,
    pub phi_points: usize,
    /// Coarser per-state grid for pair searches.
    pub pair_theta_points: usize,
    pub pair_phi_points: usize,
    /// Random starting vectors for inputs beyond qubits.
    pub restarts: usize,
    pub seed: u64,
    /// Number of best candidates refined locally.
    pub top_k: usize,
    pub tol: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            theta_points: 64,
            phi_points: 128,
            pair_theta_points: 16,
            pair_phi_points: 32,
            restarts: 32,
            seed: 0,
            top_k: 3,
            tol: 1e-9,
        }
    }
}

/// Minimizes `f` from `x0`. Returns the best vertex and its value.
pub fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, x0: &[f64], step: f64, tol: f64, max_iter: usize) -> (Vec<f64>, f64) {
    let n = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if simplex[0].1 == f64::NEG_INFINITY {
            break;
        }
        let spread = simplex[n].1 - simplex[0].1;
        let diam = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if diam <= tol || spread.abs() <= 1e-15 * (1.0 + simplex[0].1.abs()) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(x, _)| x[k]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let xr = along(1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let x = along(0.5);
                let v = eval(&x);
                (x, v)
            } else {
                let x = along(-0.5);
                let v = eval(&x);
                (x, v)
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = vertex.0.iter().zip(&best).map(|(a, b)| b + 0.5 * (a - b)).collect();
                    let v = eval(&x);
                    *vertex = (x, v);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

#[derive(Debug)]
enum Mode {
    /// rho -> (M(rho), Mbar(rho))
    Inputs { m: KrausChannel, mbar: KrausChannel },
    /// (rho, sigma) -> (M(rho), M(sigma))
    Pairs { m: KrausChannel },
}

#[derive(Debug)]
struct Spectrum {
    lam: Vec<f64>,
    ln: Vec<f64>,
}

impl Spectrum {
    fn of(rho: &DensityMatrix) -> (Self, crate::linalg::ComplexMatrix) {
        let e = rho.eig();
        let lam: Vec<f64> = e
            .eigenvalues
            .iter()
            .map(|&l| if l <= SUPPORT_TOL { 0.0 } else { l })
            .collect();
        let ln = lam
            .iter()
            .map(|&l| if l > 0.0 { l.ln() } else { f64::NEG_INFINITY })
            .collect();
        (Self { lam, ln }, e.eigenvectors.clone())
    }
}

fn overlaps(u: &crate::linalg::ComplexMatrix, v: &crate::linalg::ComplexMatrix, out: &mut [f64]) {
    let d = u.rows();
    for a in 0..d {
        for b in 0..d {
            let ov: C64 = (0..d).map(|k| v[(k, b)].conj() * u[(k, a)]).sum();
            out[a * d + b] = ov.norm_sqr();
        }
    }
}

/// Input-state search for a pair of channels, or state-pair search for one
/// channel (discrimination power).
#[derive(Debug)]
pub struct ChannelSearch {
    mode: Mode,
    cfg: SearchConfig,
    qubit: bool,
    in_dim: usize,
    d: usize,
    points: Vec<Vec<f64>>,
    left: Vec<Spectrum>,
    right: Vec<Spectrum>,
    w: Vec<f64>,
    n_cand: usize,
    seeds: OnceLock<Vec<usize>>,
    cache: SteinCache,
}

impl ChannelSearch {
    /// sup over pure inputs rho of quantities of (M(rho), Mbar(rho)).
    pub fn inputs(m: &KrausChannel, mbar: &KrausChannel, cfg: &SearchConfig) -> Result<Self> {
        if m.in_dim() != mbar.in_dim() || m.out_dim() != mbar.out_dim() {
            return Err(Error::DimensionMismatch(format!(
                "channels {}->{} and {}->{}",
                m.in_dim(),
                m.out_dim(),
                mbar.in_dim(),
                mbar.out_dim()
            )));
        }
        let qubit = m.in_dim() == 2;
        let points = candidate_points(m.in_dim(), qubit, cfg.theta_points, cfg.phi_points, cfg);
        let d = m.out_dim();
        let per: Vec<(Spectrum, Spectrum, Vec<f64>)> = points
            .par_iter()
            .map(|p| {
                let ket = param_ket(p, qubit);
                let (sl, ul) = Spectrum::of(&m.apply_pure(&ket).expect("dims checked"));
                let (sr, ur) = Spectrum::of(&mbar.apply_pure(&ket).expect("dims checked"));
                let mut w = vec![0.0; d * d];
                overlaps(&ul, &ur, &mut w);
                (sl, sr, w)
            })
            .collect();
        let n_cand = points.len();
        let mut left = Vec::with_capacity(n_cand);
        let mut right = Vec::with_capacity(n_cand);
        let mut w = Vec::with_capacity(n_cand * d * d);
        for (l, r, ww) in per {
            left.push(l);
            right.push(r);
            w.extend(ww);
        }
        Ok(Self {
            mode: Mode::Inputs {
                m: m.clone(),
                mbar: mbar.clone(),
            },
            cfg: cfg.clone(),
            qubit,
            in_dim: m.in_dim(),
            d,
            points,
            left,
            right,
            w,
            n_cand,
            seeds: OnceLock::new(),
            cache: SteinCache::default(),
        })
    }

    /// sup over pure input pairs (rho, sigma) of quantities of (M(rho), M(sigma)).
    pub fn pairs(m: &KrausChannel, cfg: &SearchConfig) -> Result<Self> {
        let qubit = m.in_dim() == 2;
        let points = candidate_points(m.in_dim(), qubit, cfg.pair_theta_points, cfg.pair_phi_points, cfg);
        let d = m.out_dim();
        let n = points.len();
        let spectra: Vec<(Spectrum, crate::linalg::ComplexMatrix)> = points
            .par_iter()
            .map(|p| Spectrum::of(&m.apply_pure(&param_ket(p, qubit)).expect("dims checked")))
            .collect();
        let dd = d * d;
        let mut w = vec![0.0; n * n * dd];
        w.par_chunks_mut(n * dd).enumerate().for_each(|(i, row)| {
            for j in 0..n {
                overlaps(&spectra[i].1, &spectra[j].1, &mut row[j * dd..(j + 1) * dd]);
            }
        });
        let left: Vec<Spectrum> = spectra.into_iter().map(|(s, _)| s).collect();
        Ok(Self {
            mode: Mode::Pairs { m: m.clone() },
            cfg: cfg.clone(),
            qubit,
            in_dim: m.in_dim(),
            d,
            points,
            left,
            right: Vec::new(),
            w,
            n_cand: n * n,
            seeds: OnceLock::new(),
            cache: SteinCache::default(),
        })
    }

    pub fn candidate_count(&self) -> usize {
        self.n_cand
    }

    fn sides(&self, c: usize) -> (&Spectrum, &Spectrum) {
        match self.mode {
            Mode::Inputs { .. } => (&self.left[c], &self.right[c]),
            Mode::Pairs { .. } => {
                let n = self.points.len();
                (&self.left[c / n], &self.left[c % n])
            }
        }
    }

    fn cand_params(&self, c: usize) -> Vec<f64> {
        match self.mode {
            Mode::Inputs { .. } => self.points[c].clone(),
            Mode::Pairs { .. } => {
                let n = self.points.len();
                let mut p = self.points[c / n].clone();
                p.extend_from_slice(&self.points[c % n]);
                p
            }
        }
    }

    /// Larger is better for every scan kind.
    fn scan_values(&self, scan: Scan) -> Vec<f64> {
        let dd = self.d * self.d;
        (0..self.n_cand)
            .into_par_iter()
            .map(|c| {
                let (l, r) = self.sides(c);
                let w = &self.w[c * dd..(c + 1) * dd];
                match scan {
                    Scan::Alpha(a) => {
                        let mut s = 0.0;
                        for i in 0..self.d {
                            if l.lam[i] == 0.0 {
                                continue;
                            }
                            for j in 0..self.d {
                                if r.lam[j] == 0.0 {
                                    continue;
                                }
                                s += w[i * self.d + j] * (a * l.ln[i] + (1.0 - a) * r.ln[j]).exp();
                            }
                        }
                        if s <= ORTHOGONALITY_TOL {
                            f64::INFINITY
                        } else {
                            -s.log2()
                        }
                    }
                    Scan::Stein => spectral_relative_entropy(l, r, w, self.d, false),
                    Scan::Reverse => spectral_relative_entropy(r, l, w, self.d, true),
                    Scan::Seeds => 0.0,
                }
            })
            .collect()
    }

    fn seeds(&self) -> &[usize] {
        self.seeds.get_or_init(|| {
            let k = self.cfg.top_k;
            let mut scans: Vec<Scan> = alpha_grid().map(Scan::Alpha).collect();
            scans.push(Scan::Stein);
            scans.push(Scan::Reverse);
            let picked: Vec<Vec<usize>> = scans.par_iter().map(|s| top_k(&self.scan_values(*s), k)).collect();
            picked
                .into_iter()
                .flatten()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect()
        })
    }

    fn evaluate(&self, params: &[f64]) -> (OverlapProfile, Witness) {
        match &self.mode {
            Mode::Inputs { m, mbar } => {
                let ket = param_ket(params, self.qubit);
                let a = m.apply_pure(&ket).expect("dims checked");
                let b = mbar.apply_pure(&ket).expect("dims checked");
                let prof = OverlapProfile::new(&a, &b).expect("dims checked");
                (prof, Witness::Input(DensityMatrix::pure(&ket).expect("normalized ket")))
            }
            Mode::Pairs { m } => {
                let k = params.len() / 2;
                let ka = param_ket(&params[..k], self.qubit);
                let kb = param_ket(&params[k..], self.qubit);
                let a = m.apply_pure(&ka).expect("dims checked");
                let b = m.apply_pure(&kb).expect("dims checked");
                let prof = OverlapProfile::new(&a, &b).expect("dims checked");
                (
                    prof,
                    Witness::Pair(
                        DensityMatrix::pure(&ka).expect("normalized ket"),
                        DensityMatrix::pure(&kb).expect("normalized ket"),
                    ),
                )
            }
        }
    }

    fn method(&self) -> &'static str {
        match (self.qubit, &self.mode) {
            (true, Mode::Inputs { .. }) => "bloch-grid+nelder-mead",
            (true, Mode::Pairs { .. }) => "bloch-pair-grid+nelder-mead",
            (false, Mode::Inputs { .. }) => "random-restart+nelder-mead",
            (false, Mode::Pairs { .. }) => "random-restart-pairs+nelder-mead",
        }
    }

    pub fn input_dim(&self) -> usize {
        self.in_dim
    }
}

fn spectral_relative_entropy(l: &Spectrum, r: &Spectrum, w: &[f64], d: usize, transpose: bool) -> f64 {
    let mut acc = 0.0;
    for i in 0..d {
        if l.lam[i] == 0.0 {
            continue;
        }
        for j in 0..d {
            let wij = if transpose { w[j * d + i] } else { w[i * d + j] };
            let mass = l.lam[i] * wij;
            if mass <= SUPPORT_TOL {
                continue;
            }
            if r.lam[j] == 0.0 {
                return f64::INFINITY;
            }
            acc += mass * (l.ln[i] - r.ln[j]);
        }
    }
    acc / std::f64::consts::LN_2
}

/// Indices of the k largest values, ties broken by index.
fn top_k(values: &[f64], k: usize) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::with_capacity(k + 1);
    for (i, v) in values.iter().enumerate() {
        if v.is_nan() {
            continue;
        }
        let pos = best.iter().position(|&b| values[b] < *v).unwrap_or(best.len());
        if pos < k {
            best.insert(pos, i);
            best.truncate(k);
        }
    }
    best
}

fn candidate_points(dim: usize, qubit: bool, nt: usize, np: usize, cfg: &SearchConfig) -> Vec<Vec<f64>> {
    if qubit {
        let nt = nt.max(2);
        let mut pts = vec![vec![0.0, 0.0]];
        for i in 1..nt - 1 {
            let theta = PI * i as f64 / (nt - 1) as f64;
            for j in 0..np.max(1) {
                pts.push(vec![theta, 2.0 * PI * j as f64 / np.max(1) as f64]);
            }
        }
        pts.push(vec![PI, 0.0]);
        pts
    } else {
        let mut pts = Vec::with_capacity(dim + cfg.restarts);
        for k in 0..dim {
            let mut p = vec![0.0; 2 * dim];
            p[2 * k] = 1.0;
            pts.push(p);
        }
        let mut rng = random::stream_rng(cfg.seed, 0x5EA2C4);
        for _ in 0..cfg.restarts {
            let v = random::haar_vector(dim, &mut rng);
            pts.push(v.iter().flat_map(|z| [z.re, z.im]).collect());
        }
        pts
    }
}

/// Qubit: (theta, phi) -> cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
/// Otherwise interleaved (re, im) coordinates, normalized.
fn param_ket(p: &[f64], qubit: bool) -> Vec<C64> {
    if qubit {
        let (t, ph) = (p[0], p[1]);
        vec![c((t / 2.0).cos(), 0.0), C64::from_polar((t / 2.0).sin(), ph)]
    } else {
        let v: Vec<C64> = p.chunks(2).map(|x| c(x[0], x[1])).collect();
        let n = crate::linalg::norm(&v);
        if n > 0.0 {
            v.into_iter().map(|z| z / n).collect()
        } else {
            let mut e = vec![C64::new(0.0, 0.0); v.len()];
            e[0] = c(1.0, 0.0);
            e
        }
    }
}

impl ExponentSource for ChannelSearch {
    fn maximize(&self, objective: &(dyn Fn(&OverlapProfile) -> f64 + Sync), scan: Scan) -> Extremum {
        let mut starts: BTreeSet<usize> = self.seeds().iter().copied().collect();
        if scan != Scan::Seeds {
            starts.extend(top_k(&self.scan_values(scan), self.cfg.top_k));
        }
        let starts: Vec<usize> = starts.into_iter().collect();
        let guarded = |p: &OverlapProfile| {
            let v = objective(p);
            if v.is_nan() {
                f64::NEG_INFINITY
            } else {
                v
            }
        };
        let vals: Vec<f64> = starts
            .par_iter()
            .map(|&c| guarded(&self.evaluate(&self.cand_params(c)).0))
            .collect();
        let order = top_k(&vals, self.cfg.top_k.max(1));
        let grid_value = vals[order[0]];
        let method = self.method();
        if grid_value == f64::INFINITY {
            let (profile, witness) = self.evaluate(&self.cand_params(starts[order[0]]));
            return Extremum {
                value: grid_value,
                witness,
                profile,
                grid_value,
                search_method: method,
            };
        }
        let step = if self.qubit { 0.2 } else { 0.1 };
        let tol = self.cfg.tol;
        let refined: Vec<(Vec<f64>, f64)> = order
            .par_iter()
            .map(|&o| {
                let x0 = self.cand_params(starts[o]);
                let f = |x: &[f64]| -guarded(&self.evaluate(x).0);
                let n = x0.len();
                let (x1, _) = nelder_mead(&f, &x0, step, tol, 400 * n);
                nelder_mead(&f, &x1, step * 0.05, tol, 400 * n)
            })
            .collect();
        let mut best = (self.cand_params(starts[order[0]]), -grid_value);
        for r in refined {
            if r.1 < best.1 {
                best = r;
            }
        }
        let (profile, witness) = self.evaluate(&best.0);
        Extremum {
            value: -best.1,
            witness,
            profile,
            grid_value,
            search_method: method,
        }
    }

    fn stein(&self) -> &Extremum {
        self.cache.stein(self)
    }

    fn reverse_stein(&self) -> &Extremum {
        self.cache.reverse(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let (x, v) = nelder_mead(&f, &[-1.2, 1.0], 0.5, 1e-10, 10_000);
        assert!(v < 1e-14 && (x[0] - 1.0).abs() < 1e-6, "{x:?} {v}");
    }

    #[test]
    fn top_k_order() {
        assert_eq!(top_k(&[0.1, 0.5, f64::NAN, 0.5, 0.3], 3), vec![1, 3, 4]);
        assert_eq!(top_k(&[1.0], 3), vec![0]);
    }

    #[test]
    fn qubit_grid_has_poles_once() {
        let pts = candidate_points(2, true, 64, 128, &SearchConfig::default());
        assert_eq!(pts.len(), 62 * 128 + 2);
        assert_eq!(pts[0], vec![0.0, 0.0]);
        assert_eq!(pts.last().unwrap(), &vec![PI, 0.0]);
    }
}
