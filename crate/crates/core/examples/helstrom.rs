//! Helstrom errors of parallel strategies for the Harrow pair: product
//! inputs of basis states, and the error split into its two types.
//!
//!     cargo run --release --example helstrom

use qchd::channels::{harrow_channels, DEFAULT_TENSOR_DIM_CAP};
use qchd::linalg::DensityMatrix;
use qchd::strategies::{parallel_error, ParallelStrategy};

fn main() -> qchd::Result<()> {
    let (m, mbar) = harrow_channels();
    for k in 0..m.in_dim() {
        for n in 1..=2 {
            let s = ParallelStrategy::repeated(DensityMatrix::basis(m.in_dim(), k), n)?;
            let r = parallel_error(&m, &mbar, &s, DEFAULT_TENSOR_DIM_CAP)?;
            println!(
                "input |{k}>^{n}: bayes {:.4}  type1 {:.4}  type2 {:.4}",
                r.bayes, r.type1, r.type2
            );
        }
    }
    Ok(())
}
