//! Exact finite-n optima for a classical channel pair: adaptive strategies
//! never lose to parallel ones, and both rates head toward the single-letter
//! Chernoff value from above.
//!
//!     cargo run --release --example classical_dp

use qchd::strategies::{classical_adaptive_optimum, classical_parallel_optimum, ClassicalChannelPair};

fn main() -> qchd::Result<()> {
    let pair = ClassicalChannelPair::new(
        vec![vec![0.9, 0.1], vec![0.6, 0.4]],
        vec![vec![0.3, 0.7], vec![0.55, 0.45]],
    )?;
    println!("Chernoff exponent {:.4}", pair.chernoff_exponent());
    println!("n   adaptive     parallel     rate");
    for n in 1..=8 {
        let ad = classical_adaptive_optimum(&pair, n, 0.0, 0.0)?;
        let par = classical_parallel_optimum(&pair, n, 0.0, 0.0)?;
        println!("{n}   {ad:.4e}   {par:.4e}   {:.4}", -par.log2() / n as f64);
    }
    Ok(())
}
