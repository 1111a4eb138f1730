use std::io::Write;

use rand::Rng;

use super::{report_checks, Check, RunConfig};
use crate::bounds::{
    evaluate_combination, harrow_ansatz_coefficients, kraus_product_span, search_positive_combination,
    CombinationSearchConfig,
};
use crate::channels::{harrow_channels, KrausChannel};
use crate::divergences::{classical_renyi, nussbaum_szkola, renyi_divergence};
use crate::error::{Error, Result};
use crate::exponents::{
    chernoff_band, chernoff_exponent, format_g12, hoeffding_exponent, r_grid, solve_r_ab, ChannelSearch,
    ExponentSource, SearchConfig,
};
use crate::linalg::random;
use crate::strategies::{
    classical_adaptive_optimum, classical_parallel_optimum, nonadaptive_floor_check, ClassicalChannelPair,
};

pub const SUITES: [&str; 4] = ["nussbaum-szkola", "exponent-identities", "prop1-floor", "classical-dp"];

pub fn run(suite: &str, cfg: &RunConfig, out: &mut dyn Write) -> Result<i32> {
    let checks = match suite {
        "nussbaum-szkola" => nussbaum_szkola_suite(cfg.seed)?,
        "exponent-identities" => exponent_identities(cfg.seed)?,
        "prop1-floor" => prop1_floor(cfg.seed)?,
        "classical-dp" => classical_dp(cfg.seed)?,
        other => {
            return Err(Error::Usage(format!(
                "unknown suite '{other}' (expected one of {})",
                SUITES.join(", ")
            )))
        }
    };
    report_checks(&checks, cfg.format, out)
}

fn nussbaum_szkola_suite(seed: u64) -> Result<Vec<Check>> {
    let mut rng = random::stream_rng(seed, 0x4E53);
    let mut worst = 0.0f64;
    for k in 0..50 {
        let d = 2 + k % 4;
        let rho = random::random_density(d, d, &mut rng);
        let sigma = random::random_density(d, d, &mut rng);
        let (p, q) = nussbaum_szkola(&rho, &sigma)?;
        for j in 1..=9 {
            let a = j as f64 / 10.0;
            let quantum = renyi_divergence(&rho, &sigma, a)?.value;
            let classical = classical_renyi(&p, &q, a)?.value;
            worst = worst.max((quantum - classical).abs());
        }
    }
    Ok(vec![Check::new(
        "D_alpha(rho||sigma) = D_alpha of the Nussbaum-Szkola pair",
        worst <= 1e-8,
        format!("50 random pairs, dims 2-5, 9 alphas: max |diff| = {worst:.2e} (tol 1e-8)"),
    )])
}

fn exponent_identities(seed: u64) -> Result<Vec<Check>> {
    let cfg = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    let mut checks = Vec::new();
    for q in [0.2, 0.5, 0.8] {
        let src = ChannelSearch::pairs(&KrausChannel::depolarizing(q)?, &cfg)?;
        let d = src.stein().value;
        let mut worst = 0.0f64;
        for r in r_grid(d, 20) {
            let b = hoeffding_exponent(&src, r)?.value;
            worst = worst.max(chernoff_exponent(&src, b, r)?.value.abs());
        }
        checks.push(Check::new(
            format!("depolarizing q={q}: C(B(r), r) = 0"),
            worst <= 1e-6,
            format!("20 rates on [0, D]: max |C| = {worst:.2e} (tol 1e-6)"),
        ));
        let (lo, hi) = chernoff_band(&src);
        let mut worst = 0.0f64;
        for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let b = 0.1;
            let a = b + lo + t * (hi - lo);
            let r = solve_r_ab(&src, a, b)?;
            let c = chernoff_exponent(&src, a, b)?.value;
            let br = hoeffding_exponent(&src, r)?.value;
            worst = worst.max((c - (r - b)).abs()).max((c - (br - a)).abs());
        }
        checks.push(Check::new(
            format!("depolarizing q={q}: C(a,b) = r_ab - b = B(r_ab) - a"),
            worst <= 1e-6,
            format!("5 points across the band: max deviation {worst:.2e} (tol 1e-6)"),
        ));
    }
    Ok(checks)
}

fn prop1_floor(seed: u64) -> Result<Vec<Check>> {
    let (m, mb) = harrow_channels();
    let span = kraus_product_span(&m, &mb)?;
    let pc = evaluate_combination(&span, &harrow_ansatz_coefficients())?;
    let mut checks = Vec::new();
    for n in [1, 2] {
        let rep = nonadaptive_floor_check(&m, &mb, &pc, n, 500, seed)?;
        checks.push(Check::new(
            format!("Harrow pair, n = {n}: sampled parallel errors >= lambda^{}/4", 4 * n),
            rep.holds(),
            format!(
                "floor {} , min over 500 inputs {}, {} below",
                format_g12(rep.floor),
                format_g12(rep.min_error),
                rep.violations
            ),
        ));
    }
    let found = search_positive_combination(
        &span,
        &CombinationSearchConfig {
            seed,
            ..Default::default()
        },
    );
    checks.push(Check::new(
        "search reaches the hand-built combination",
        found.best_lambda_min() >= pc.lambda_min - 1e-7,
        format!(
            "search lambda_min {} vs {}",
            format_g12(found.best_lambda_min()),
            format_g12(pc.lambda_min)
        ),
    ));
    Ok(checks)
}

fn random_binary_pair(rng: &mut impl Rng) -> Result<ClassicalChannelPair> {
    let mut row = || {
        let p: f64 = rng.random_range(0.05..0.95);
        vec![p, 1.0 - p]
    };
    let w = vec![row(), row()];
    let wbar = vec![row(), row()];
    ClassicalChannelPair::new(w, wbar)
}

fn classical_dp(seed: u64) -> Result<Vec<Check>> {
    let mut rng = random::stream_rng(seed, 0xD9);
    let mut checks = Vec::new();
    for k in 0..5 {
        let pair = random_binary_pair(&mut rng)?;
        let c = pair.chernoff_exponent();
        let mut ordered = true;
        let mut monotone = true;
        let mut above = true;
        let mut last = (f64::INFINITY, f64::INFINITY);
        let mut rates = Vec::new();
        for n in 1..=6 {
            let ad = classical_adaptive_optimum(&pair, n, 0.0, 0.0)?;
            let par = classical_parallel_optimum(&pair, n, 0.0, 0.0)?;
            ordered &= ad <= par + 1e-12;
            let (ra, rp) = (-ad.log2() / n as f64, -par.log2() / n as f64);
            monotone &= ra <= last.0 + 1e-12 && rp <= last.1 + 1e-12;
            above &= rp >= c - 1e-12;
            last = (ra, rp);
            rates.push(format!("{:.4}", rp));
        }
        checks.push(Check::new(
            format!("random pair {k}"),
            ordered && above,
            format!(
                "adaptive <= parallel: {ordered}; rates >= C = {:.4}: {above}; rates nonincreasing (informational): {monotone}; parallel rates n=1..6 [{}]",
                c,
                rates.join(", ")
            ),
        ));
    }
    Ok(checks)
}
