//! Hoeffding exponent B(r), generalized Chernoff exponent C(a, b), the rate
//! r_{a,b}, channel-level suprema over inputs, and discrimination power.
//!
//! Every exponent is a joint supremum over (input, alpha). A source
//! ([`ExponentSource`]) supplies the family of output pairs: one pair, the
//! letters of a cq-channel pair, the pure inputs of a qq-channel pair, or the
//! pure input pairs of a single channel. The alpha part is solved exactly per
//! pair by [`pair_hoeffding`] / [`pair_chernoff`].

mod alpha;
mod closed_form;
mod curve;
mod search;
mod source;

pub use alpha::{alpha_grid, maximize_alpha, pair_chernoff, pair_hoeffding, ALPHA_EPS, ALPHA_GRID_STEP};
pub use closed_form::{
    amplitude_damping_pair, amplitude_damping_pair_divergence, amplitude_damping_pair_divergence_oracle,
    chernoff_alpha_star_depolarizing, depolarizing_power, depolarizing_renyi, q_function, q_second_derivative,
    w_cross_check, w_function, WCrossCheck,
};
pub use curve::{
    chernoff_curve, format_g12, hoeffding_curve, r_grid, ChernoffCurve, ChernoffSample, ExponentCurve, HoeffdingSample,
};
pub use search::{nelder_mead, ChannelSearch, SearchConfig};
pub use source::{CqSource, ExponentSource, Extremum, Scan, StatePairSource, Witness};

use crate::channels::{CqChannel, KrausChannel};
use crate::divergences::OverlapProfile;
use crate::error::{Error, Result};

/// Slack allowed on the admissible ranges of r and a - b.
pub const BAND_TOL: f64 = 1e-9;
const BISECTION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OptimumStatus {
    Finite,
    Infinite,
    /// r above the Stein exponent; B is reported as 0.
    AboveStein,
}

/// Value of an exponent with its optimizing alpha and maximizing input.
#[derive(Clone, Debug)]
pub struct AlphaOptimum {
    pub value: f64,
    pub alpha_star: f64,
    pub grid_resolution: f64,
    pub status: OptimumStatus,
    pub witness: Witness,
}

/// sup over inputs of D_alpha, with the maximizer.
#[derive(Clone, Debug)]
pub struct InputOptimum {
    pub value: f64,
    pub witness: Witness,
    /// Best grid value before refinement.
    pub grid_value: f64,
    pub search_method: &'static str,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExponentQuery {
    Hoeffding { r: f64 },
    Chernoff { a: f64, b: f64 },
}

fn optimum(value: f64, alpha_star: f64, witness: Witness) -> AlphaOptimum {
    AlphaOptimum {
        value,
        alpha_star,
        grid_resolution: ALPHA_GRID_STEP,
        status: if value.is_finite() {
            OptimumStatus::Finite
        } else {
            OptimumStatus::Infinite
        },
        witness,
    }
}

/// B(r) for any source.
pub fn hoeffding_exponent(src: &dyn ExponentSource, r: f64) -> Result<AlphaOptimum> {
    let d = src.stein().value;
    if !(r >= 0.0) || !r.is_finite() {
        return Err(Error::ROutOfRange { r, stein: d });
    }
    let ext = src.maximize(&|p: &OverlapProfile| pair_hoeffding(p, r).0, Scan::Seeds);
    let (_, alpha_star) = pair_hoeffding(&ext.profile, r);
    let mut out = optimum(ext.value, alpha_star, ext.witness);
    if r > d + BAND_TOL {
        out.value = 0.0;
        out.status = OptimumStatus::AboveStein;
    }
    Ok(out)
}

/// Admissible band [-D(N||Nbar), D(Nbar||N)] for a - b.
pub fn chernoff_band(src: &dyn ExponentSource) -> (f64, f64) {
    (-src.stein().value, src.reverse_stein().value)
}

/// C(a, b) for any source.
pub fn chernoff_exponent(src: &dyn ExponentSource, a: f64, b: f64) -> Result<AlphaOptimum> {
    let (lo, hi) = chernoff_band(src);
    let diff = a - b;
    if !(diff >= lo - BAND_TOL && diff <= hi + BAND_TOL) {
        return Err(Error::AbOutOfRange { diff, lo, hi });
    }
    let ext = src.maximize(&|p: &OverlapProfile| pair_chernoff(p, a, b).0, Scan::Seeds);
    let (_, alpha_star) = pair_chernoff(&ext.profile, a, b);
    Ok(optimum(ext.value, alpha_star, ext.witness))
}

/// r_{a,b}: the root of B(r) - r = a - b, by bisection on [0, D].
pub fn solve_r_ab(src: &dyn ExponentSource, a: f64, b: f64) -> Result<f64> {
    let (lo_band, hi_band) = chernoff_band(src);
    let target = a - b;
    if !(target >= lo_band - BAND_TOL && target <= hi_band + BAND_TOL) {
        return Err(Error::AbOutOfRange {
            diff: target,
            lo: lo_band,
            hi: hi_band,
        });
    }
    let g = |r: f64| -> Result<f64> { Ok(hoeffding_exponent(src, r)?.value - r) };
    let mut lo = 0.0;
    let g_lo = g(lo)?;
    if g_lo <= target {
        return Ok(0.0);
    }
    let d = src.stein().value;
    let mut hi = if d.is_finite() { d } else { 1.0 };
    while g(hi)? > target {
        if d.is_finite() {
            return Ok(d);
        }
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::BudgetExceeded {
                what: "bracketing r_{a,b}",
                requested: hi as usize,
                cap: 1_000_000,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let gm = g(mid)?;
        if (gm - target).abs() <= BISECTION_TOL || hi - lo <= 1e-15 {
            return Ok(mid);
        }
        if gm > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// sup over inputs of D_alpha(rho_x || sigma_x).
pub fn renyi_sup(src: &dyn ExponentSource, alpha: f64) -> Result<InputOptimum> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::AlphaOutOfRange(alpha));
    }
    let ext = src.maximize(
        &|p: &OverlapProfile| -p.log_overlap(alpha) / (1.0 - alpha),
        Scan::Alpha(alpha),
    );
    Ok(InputOptimum {
        value: ext.value.max(0.0),
        witness: ext.witness,
        grid_value: ext.grid_value,
        search_method: ext.search_method,
    })
}

pub fn exponent(src: &dyn ExponentSource, query: ExponentQuery) -> Result<AlphaOptimum> {
    match query {
        ExponentQuery::Hoeffding { r } => hoeffding_exponent(src, r),
        ExponentQuery::Chernoff { a, b } => chernoff_exponent(src, a, b),
    }
}

/// B(r) for a pair of cq-channels.
pub fn hoeffding_b(n: &CqChannel, nbar: &CqChannel, r: f64) -> Result<AlphaOptimum> {
    hoeffding_exponent(&CqSource::new(n, nbar)?, r)
}

/// C(a, b) for a pair of cq-channels.
pub fn chernoff_c(n: &CqChannel, nbar: &CqChannel, a: f64, b: f64) -> Result<AlphaOptimum> {
    chernoff_exponent(&CqSource::new(n, nbar)?, a, b)
}

/// sup over input states of D_alpha(M(rho) || Mbar(rho)).
pub fn channel_renyi_sup(
    m: &KrausChannel,
    mbar: &KrausChannel,
    alpha: f64,
    cfg: &SearchConfig,
) -> Result<InputOptimum> {
    renyi_sup(&ChannelSearch::inputs(m, mbar, cfg)?, alpha)
}

/// B(r) or C(a, b) for qq-channels with product (non-entangled) inputs.
pub fn qq_exponents(
    m: &KrausChannel,
    mbar: &KrausChannel,
    query: ExponentQuery,
    cfg: &SearchConfig,
) -> Result<AlphaOptimum> {
    exponent(&ChannelSearch::inputs(m, mbar, cfg)?, query)
}

/// Exponents of discriminating two input states through one channel,
/// optimized over the state pair.
pub fn discrimination_power(m_o: &KrausChannel, query: ExponentQuery, cfg: &SearchConfig) -> Result<AlphaOptimum> {
    exponent(&ChannelSearch::pairs(m_o, cfg)?, query)
}
