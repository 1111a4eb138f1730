//! Searching the Kraus-product span for a positive definite combination.
//! Noise makes the Harrow pair easier to certify; orthogonal replacers
//! admit no certificate at all.
//!
//!     cargo run --release --example positive_combination_search

use qchd::bounds::{
    chernoff_upper_bound, kraus_product_span, search_positive_combination, CombinationSearchConfig, SearchOutcome,
};
use qchd::channels::{harrow_depolarized_channels, KrausChannel};
use qchd::linalg::DensityMatrix;

fn report(label: &str, m: &KrausChannel, mbar: &KrausChannel) -> qchd::Result<()> {
    let span = kraus_product_span(m, mbar)?;
    match search_positive_combination(&span, &CombinationSearchConfig::default()) {
        SearchOutcome::Found(pc) => println!(
            "{label}: {} products, lambda_min {:.5}, exponent <= {:.3}",
            span.len(),
            pc.lambda_min,
            chernoff_upper_bound(&pc)?
        ),
        SearchOutcome::NotFound { best_lambda_min } => {
            println!("{label}: nothing positive (best lambda_min {best_lambda_min:.2e})")
        }
    }
    Ok(())
}

fn main() -> qchd::Result<()> {
    for eps in [0.0, 0.05, 0.2] {
        let (m, mbar) = harrow_depolarized_channels(eps)?;
        report(&format!("Harrow, eps = {eps}"), &m, &mbar)?;
    }
    let zero = KrausChannel::replacer(2, &DensityMatrix::basis(2, 0));
    let one = KrausChannel::replacer(2, &DensityMatrix::basis(2, 1));
    report("replace by |0> vs |1>", &zero, &one)
}
