//! Channels as JSON files, then exponents between two of them over
//! product inputs.
//!
//!     cargo run --release --example channel_files

use qchd::channels::KrausChannel;
use qchd::exponents::{qq_exponents, ExponentQuery, SearchConfig};
use qchd::io::{load_channel, save_channel};

fn main() -> qchd::Result<()> {
    let dir = std::env::temp_dir().join("qchd-example");
    std::fs::create_dir_all(&dir).map_err(|e| qchd::Error::Io(e.to_string()))?;
    let a = dir.join("ad.json");
    let b = dir.join("dephasing.json");
    save_channel(&a, &KrausChannel::amplitude_damping(0.3)?)?;
    save_channel(&b, &KrausChannel::pauli([0.8, 0.0, 0.0, 0.2])?)?;
    println!("wrote {} and {}", a.display(), b.display());

    let (m, mbar) = (load_channel(&a)?, load_channel(&b)?);
    let cfg = SearchConfig::default();
    let c = qq_exponents(&m, &mbar, ExponentQuery::Chernoff { a: 0.0, b: 0.0 }, &cfg)?;
    println!(
        "Chernoff exponent over product inputs: {:.5} (alpha {:.3})",
        c.value, c.alpha_star
    );
    let h = qq_exponents(&m, &mbar, ExponentQuery::Hoeffding { r: 0.05 }, &cfg)?;
    println!("B(0.05) = {:.5}", h.value);
    Ok(())
}
