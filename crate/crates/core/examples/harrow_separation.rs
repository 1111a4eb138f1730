//! Two Harrow channels: a two-use adaptive protocol tells them apart
//! perfectly, while every parallel strategy keeps an error floor.
//!
//!     cargo run --release --example harrow_separation

use qchd::bounds::{
    chernoff_upper_bound, error_lower_bound, evaluate_combination, harrow_ansatz_coefficients, kraus_product_span,
};
use qchd::channels::harrow_channels;
use qchd::strategies::{harrow_adaptive_script, nonadaptive_floor_check, run_adaptive_script};

fn main() -> qchd::Result<()> {
    let (m, mbar) = harrow_channels();
    let span = kraus_product_span(&m, &mbar)?;
    let pc = evaluate_combination(&span, &harrow_ansatz_coefficients())?;
    println!("lambda_min of the positive combination: {:.6}", pc.lambda_min);
    println!(
        "non-adaptive Chernoff exponent <= {:.4} bits",
        chernoff_upper_bound(&pc)?
    );

    let adaptive = run_adaptive_script(&m, &mbar, &harrow_adaptive_script())?;
    println!("adaptive, two uses: error {:.1e}", adaptive.bayes);

    for n in 1..=2 {
        let rep = nonadaptive_floor_check(&m, &mbar, &pc, n, 200, 7)?;
        println!(
            "parallel, n = {n}: floor {:.3e}, smallest sampled error {:.4} ({} violations)",
            error_lower_bound(&pc, n)?,
            rep.min_error,
            rep.violations
        );
    }
    Ok(())
}
