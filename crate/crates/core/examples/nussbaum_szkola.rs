//! The Nussbaum-Szkola pair of classical distributions carries the same
//! Renyi divergences as the two quantum states it came from.
//!
//!     cargo run --release --example nussbaum_szkola

use qchd::divergences::{classical_renyi, nussbaum_szkola, relative_entropy, renyi_divergence};
use qchd::linalg::random;

fn main() -> qchd::Result<()> {
    let mut rng = random::stream_rng(42, 0);
    let rho = random::random_density(3, 3, &mut rng);
    let sigma = random::random_density(3, 2, &mut rng);
    let (p, q) = nussbaum_szkola(&rho, &sigma)?;
    println!("joint distributions on {}x{} outcomes", p.rows(), p.cols());
    for a in [0.1, 0.5, 0.9] {
        println!(
            "alpha {a}: quantum {:.12}  classical {:.12}",
            renyi_divergence(&rho, &sigma, a)?.value,
            classical_renyi(&p, &q, a)?.value
        );
    }
    println!("D(rho||sigma) = {:.6}", relative_entropy(&rho, &sigma)?.value);
    Ok(())
}
