//! Amplitude damping: the Stein exponent over input pairs is infinite, so
//! curves are drawn for the fixed output pair (+-sqrt(1-g), 0, g).
//!
//!     cargo run --release --example amplitude_damping

use qchd::channels::KrausChannel;
use qchd::exponents::{
    amplitude_damping_pair, hoeffding_curve, renyi_sup, w_cross_check, ChannelSearch, ExponentSource, SearchConfig,
    StatePairSource,
};

fn main() -> qchd::Result<()> {
    for g in [0.2, 0.5, 0.8] {
        println!("gamma = {g}");
        println!("  {}", w_cross_check(g, 0.5)?);
        let (r1, r2) = amplitude_damping_pair(g)?;
        let pair = StatePairSource::new(&r1, &r2)?;
        let curve = hoeffding_curve(&pair, None, 6)?;
        let bs: Vec<String> = curve.samples.iter().map(|s| format!("{:.3}", s.b)).collect();
        println!("  B on [0, D]: {}", bs.join(" "));

        let all = ChannelSearch::pairs(&KrausChannel::amplitude_damping(g)?, &SearchConfig::default())?;
        println!(
            "  over all input pairs: D(M) = {}, sup D_0.5 = {:.4}",
            all.stein().value,
            renyi_sup(&all, 0.5)?.value
        );
    }
    Ok(())
}
