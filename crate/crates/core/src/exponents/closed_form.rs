//! Closed forms for the depolarizing and amplitude-damping qubit examples.

use crate::divergences::{relative_entropy, renyi_divergence};
use crate::error::{Error, Result};
use crate::linalg::DensityMatrix;

fn open_unit(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::ParameterOutOfRange {
            name,
            value: x,
            range: "(0, 1)",
        })
    }
}

/// Q(q, a) = (1-q/2)^a (q/2)^(1-a) + (1-q/2)^(1-a) (q/2)^a.
pub fn q_function(q: f64, alpha: f64) -> Result<f64> {
    open_unit("q", q)?;
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::ParameterOutOfRange {
            name: "alpha",
            value: alpha,
            range: "[0, 1]",
        });
    }
    let (x, y) = (1.0 - q / 2.0, q / 2.0);
    Ok(x.powf(alpha) * y.powf(1.0 - alpha) + x.powf(1.0 - alpha) * y.powf(alpha))
}

/// d^2 Q / d alpha^2 = (ln(q/(2-q)))^2 Q.
pub fn q_second_derivative(q: f64, alpha: f64) -> Result<f64> {
    let l = (q / (2.0 - q)).ln();
    Ok(l * l * q_function(q, alpha)?)
}

/// sup over input pairs of D_alpha for the depolarizing channel.
pub fn depolarizing_renyi(q: f64, alpha: f64) -> Result<f64> {
    Ok(q_function(q, alpha)?.log2() / (alpha - 1.0))
}

/// D(M) = (1-q) log2((2-q)/q) for the depolarizing channel.
pub fn depolarizing_power(q: f64) -> Result<f64> {
    open_unit("q", q)?;
    Ok((1.0 - q) * ((2.0 - q) / q).log2())
}

/// Stationary point of the Chernoff objective for depolarizing outputs,
/// a - b inside [-D, D].
pub fn chernoff_alpha_star_depolarizing(q: f64, a: f64, b: f64) -> Result<f64> {
    let d = depolarizing_power(q)?;
    let diff = a - b;
    if diff.abs() > d + 1e-12 {
        return Err(Error::AbOutOfRange { diff, lo: -d, hi: d });
    }
    let l = (q / (2.0 - q)).log2();
    let diff = diff.clamp(-d, d);
    Ok((0.5 - ((l + diff) / (l - diff)).log2() / (2.0 * l)).clamp(0.0, 1.0))
}

struct AdPair {
    l1: f64,
    l2: f64,
    c1: f64,
    c2: f64,
    cross: f64,
    s: f64,
}

fn ad_pair(gamma: f64) -> AdPair {
    let s = (gamma * gamma - gamma + 1.0).sqrt();
    let (l1, l2) = ((1.0 + s) / 2.0, (1.0 - s) / 2.0);
    let sq = (1.0 - gamma).sqrt();
    let k1 = (2.0 * l1 - 1.0 - gamma) / sq;
    let k2 = (2.0 * l2 - 1.0 - gamma) / sq;
    let c1 = ((1.0 - k1 * k1) / (1.0 + k1 * k1)).powi(2);
    let c2 = ((1.0 - k2 * k2) / (1.0 + k2 * k2)).powi(2);
    let num = 1.0 - (2.0 * l1 - 1.0 - gamma) * (2.0 * l2 - 1.0 - gamma) / (1.0 - gamma);
    let cross = num * num / ((1.0 + k1 * k1) * (1.0 + k2 * k2));
    AdPair {
        l1,
        l2,
        c1,
        c2,
        cross,
        s,
    }
}

/// Printed closed form W(gamma, alpha) for the amplitude-damping pair
/// with output Bloch vectors (+-sqrt(1-gamma), 0, gamma).
pub fn w_function(gamma: f64, alpha: f64) -> Result<f64> {
    open_unit("gamma", gamma)?;
    open_unit("alpha", alpha)?;
    let p = ad_pair(gamma);
    let q = q_function(1.0 - p.s, alpha)?;
    Ok(p.l1 * p.c1 + p.l2 * p.c2 + q * p.cross)
}

/// Printed closed form of D(rho_1 || rho_2) for the same pair, in bits.
pub fn amplitude_damping_pair_divergence(gamma: f64) -> Result<f64> {
    open_unit("gamma", gamma)?;
    let p = ad_pair(gamma);
    let lg = |x: f64| x.log2();
    Ok(p.l1 * lg(p.l1) + p.l2 * lg(p.l2)
        - p.l1 * lg(p.l1) * p.c1
        - p.l2 * lg(p.l2) * p.c2
        - (p.l1 * lg(p.l2) + p.l2 * lg(p.l1)) * p.cross)
}

/// Output states with Bloch vectors (sqrt(1-gamma), 0, gamma) and
/// (-sqrt(1-gamma), 0, gamma), images of |+> and |->.
pub fn amplitude_damping_pair(gamma: f64) -> Result<(DensityMatrix, DensityMatrix)> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::ParameterOutOfRange {
            name: "gamma",
            value: gamma,
            range: "[0, 1]",
        });
    }
    let x = (1.0 - gamma).sqrt();
    Ok((
        DensityMatrix::from_bloch([x, 0.0, gamma])?,
        DensityMatrix::from_bloch([-x, 0.0, gamma])?,
    ))
}

/// Closed form W versus the matrix-level divergence of the same states.
#[derive(Clone, Debug, PartialEq)]
pub struct WCrossCheck {
    pub gamma: f64,
    pub alpha: f64,
    pub closed_form: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    pub agree: bool,
}

impl std::fmt::Display for WCrossCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.agree {
            write!(
                f,
                "gamma={} alpha={}: closed form {:.12} matches matrix value {:.12} (|diff| {:.2e})",
                self.gamma, self.alpha, self.closed_form, self.oracle, self.abs_diff
            )
        } else {
            write!(
                f,
                "gamma={} alpha={}: DISCREPANCY closed form {:.12} vs matrix value {:.12} (|diff| {:.2e}); using the matrix value",
                self.gamma, self.alpha, self.closed_form, self.oracle, self.abs_diff
            )
        }
    }
}

impl WCrossCheck {
    /// The value to trust: the matrix computation.
    pub fn trusted(&self) -> f64 {
        self.oracle
    }
}

/// Compares log2(W)/(alpha-1) against D_alpha of the two output states.
pub fn w_cross_check(gamma: f64, alpha: f64) -> Result<WCrossCheck> {
    let closed_form = w_function(gamma, alpha)?.log2() / (alpha - 1.0);
    let (r1, r2) = amplitude_damping_pair(gamma)?;
    let oracle = renyi_divergence(&r1, &r2, alpha)?.value;
    let abs_diff = (closed_form - oracle).abs();
    Ok(WCrossCheck {
        gamma,
        alpha,
        closed_form,
        oracle,
        abs_diff,
        agree: abs_diff <= 1e-6,
    })
}

/// Relative entropy of the pair, matrix route.
pub fn amplitude_damping_pair_divergence_oracle(gamma: f64) -> Result<f64> {
    let (r1, r2) = amplitude_damping_pair(gamma)?;
    Ok(relative_entropy(&r1, &r2)?.value)
}
