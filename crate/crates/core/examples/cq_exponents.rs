//! Exponents for a pair of classical-quantum channels: the best letter is
//! chosen separately for every rate.
//!
//!     cargo run --release --example cq_exponents

use qchd::channels::CqChannel;
use qchd::exponents::{chernoff_c, hoeffding_b, Witness};
use qchd::linalg::DensityMatrix;

fn main() -> qchd::Result<()> {
    let labels = vec!["x".to_string(), "z".to_string()];
    let n = CqChannel::new(
        labels.clone(),
        vec![
            DensityMatrix::from_bloch([0.9, 0.0, 0.0])?,
            DensityMatrix::from_bloch([0.0, 0.0, 0.6])?,
        ],
    )?;
    let nbar = CqChannel::new(
        labels,
        vec![
            DensityMatrix::from_bloch([0.0, 0.0, 0.0])?,
            DensityMatrix::from_bloch([0.0, 0.0, -0.6])?,
        ],
    )?;
    for r in [0.0, 0.2, 0.5, 1.0] {
        let b = hoeffding_b(&n, &nbar, r)?;
        let letter = match &b.witness {
            Witness::Letter { label, .. } => label.clone(),
            _ => "?".into(),
        };
        println!("B({r}) = {:.5} at alpha {:.3}, letter {letter}", b.value, b.alpha_star);
    }
    let c = chernoff_c(&n, &nbar, 0.0, 0.0)?;
    println!("Chernoff C(0, 0) = {:.5}", c.value);
    Ok(())
}
