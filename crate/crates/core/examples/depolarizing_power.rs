//! Discrimination power of the depolarizing channel: the Bloch search
//! against the closed forms, then a Hoeffding curve.
//!
//!     cargo run --release --example depolarizing_power

use qchd::channels::KrausChannel;
use qchd::exponents::{
    depolarizing_power, depolarizing_renyi, hoeffding_curve, renyi_sup, ChannelSearch, ExponentSource, SearchConfig,
};

fn main() -> qchd::Result<()> {
    let q = 0.3;
    let src = ChannelSearch::pairs(&KrausChannel::depolarizing(q)?, &SearchConfig::default())?;
    println!(
        "q = {q}: D(M) search {:.8}, closed form {:.8}",
        src.stein().value,
        depolarizing_power(q)?
    );
    for a in [0.25, 0.5, 0.75] {
        let s = renyi_sup(&src, a)?;
        println!(
            "  D_{a}: search {:.8}, closed form {:.8}",
            s.value,
            depolarizing_renyi(q, a)?
        );
    }
    let curve = hoeffding_curve(&src, None, 8)?;
    println!("\n{}", curve.to_csv());
    Ok(())
}
