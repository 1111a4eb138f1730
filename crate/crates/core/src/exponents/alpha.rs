//! One-dimensional optimization over alpha and the exponents of a single
//! state pair.

use crate::divergences::OverlapProfile;

/// Coarse grid spacing; the grid is {0.01, ..., 0.99}.
pub const ALPHA_GRID_STEP: f64 = 0.01;
/// Golden-section searches stay inside [EPS, 1 - EPS].
pub const ALPHA_EPS: f64 = 1e-6;
const GOLDEN_TOL: f64 = 1e-12;

pub fn alpha_grid() -> impl Iterator<Item = f64> + Clone {
    (1..=99).map(|k| k as f64 * ALPHA_GRID_STEP)
}

/// Maximizes `obj` over the open interval: 99-point grid, then golden
/// section on the bracket around the best grid point. Returns (value, alpha).
pub fn maximize_alpha(obj: impl Fn(f64) -> f64) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, 0.5);
    let mut best_k = 50;
    for (k, a) in alpha_grid().enumerate() {
        let v = obj(a);
        if v > best.0 {
            best = (v, a);
            best_k = k + 1;
        }
    }
    let lo = ((best_k as f64 - 1.0) * ALPHA_GRID_STEP).max(ALPHA_EPS);
    let hi = ((best_k as f64 + 1.0) * ALPHA_GRID_STEP).min(1.0 - ALPHA_EPS);
    let refined = golden_max(&obj, lo, hi);
    if refined.0 > best.0 {
        refined
    } else {
        best
    }
}

fn golden_max(obj: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = obj(x1);
    let mut f2 = obj(x2);
    while hi - lo > GOLDEN_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = obj(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = obj(x2);
        }
    }
    if f1 >= f2 {
        (f1, x1)
    } else {
        (f2, x2)
    }
}

/// B(r) = sup_{0 < a <= 1} ((a - 1) r - log2 Tr rho^a sigma^(1-a)) / a for one
/// pair, including the a -> 0 limit. Returns (value, alpha_star).
pub fn pair_hoeffding(p: &OverlapProfile, r: f64) -> (f64, f64) {
    if p.is_orthogonal() {
        return (f64::INFINITY, 0.5);
    }
    let f0 = p.log_overlap(0.0);
    let lead = -r - f0;
    if lead > 1e-12 {
        // numerator stays positive as a -> 0
        return (f64::INFINITY, 0.0);
    }
    let mut best = (-p.log_overlap(1.0), 1.0);
    if lead.abs() <= 1e-12 {
        let limit = r - p.log_overlap_slope_at_zero();
        if limit > best.0 {
            best = (limit, 0.0);
        }
    }
    let inner = maximize_alpha(|a| ((a - 1.0) * r - p.log_overlap(a)) / a);
    if inner.0 > best.0 {
        best = inner;
    }
    best
}

/// C(a, b) = sup_{0 <= s <= 1} -log2 Tr rho^s sigma^(1-s) - s a - (1 - s) b.
pub fn pair_chernoff(p: &OverlapProfile, a: f64, b: f64) -> (f64, f64) {
    if p.is_orthogonal() {
        return (f64::INFINITY, 0.5);
    }
    let obj = |s: f64| -p.log_overlap(s) - s * a - (1.0 - s) * b;
    let mut best = (obj(0.0), 0.0);
    let end = obj(1.0);
    if end > best.0 {
        best = (end, 1.0);
    }
    let inner = maximize_alpha(obj);
    if inner.0 > best.0 {
        best = inner;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_interior_and_boundary() {
        let (v, a) = maximize_alpha(|x| -(x - 0.37).powi(2));
        assert!((a - 0.37).abs() < 1e-6 && v.abs() < 1e-12);
        let (_, a) = maximize_alpha(|x| x);
        assert!(a > 1.0 - 1e-5);
        let (_, a) = maximize_alpha(|x| -x);
        assert!(a < 1e-5);
    }

    #[test]
    fn classical_pair_brute_force() {
        let (p, q) = ([0.7, 0.3], [0.2, 0.8]);
        let prof = OverlapProfile::classical(&p, &q);
        let psi = |a: f64| (p[0].powf(a) * q[0].powf(1.0 - a) + p[1].powf(a) * q[1].powf(1.0 - a)).log2();
        for r in [0.05, 0.2, 0.4] {
            let brute = (1..100_000)
                .map(|k| k as f64 / 100_000.0)
                .map(|a| ((a - 1.0) * r - psi(a)) / a)
                .fold(f64::NEG_INFINITY, f64::max);
            let (v, _) = pair_hoeffding(&prof, r);
            assert!((v - brute).abs() < 1e-7, "{v} vs {brute}");
        }
        let brute = (0..=100_000)
            .map(|k| k as f64 / 100_000.0)
            .map(|s| -psi(s))
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((pair_chernoff(&prof, 0.0, 0.0).0 - brute).abs() < 1e-8);
    }

    #[test]
    fn endpoints() {
        let (p, q) = ([0.7, 0.3], [0.2, 0.8]);
        let prof = OverlapProfile::classical(&p, &q);
        let d = prof.relative_entropy();
        let dr = prof.reverse_relative_entropy();
        assert!((pair_hoeffding(&prof, 0.0).0 - dr).abs() < 1e-12);
        assert!(pair_hoeffding(&prof, d).0.abs() < 1e-9);
        // supp sigma larger than supp rho: B(r) infinite below D_0
        let prof = OverlapProfile::classical(&[1.0, 0.0], &[0.5, 0.5]);
        assert!(pair_hoeffding(&prof, 0.5).0.is_infinite());
        assert!(pair_hoeffding(&prof, 1.0).0.is_finite());
        let orth = OverlapProfile::classical(&[1.0, 0.0], &[0.0, 1.0]);
        assert!(pair_chernoff(&orth, 0.0, 0.0).0.is_infinite());
    }
}
