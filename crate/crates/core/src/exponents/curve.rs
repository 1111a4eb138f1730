use std::fmt::Write as _;

use rayon::prelude::*;

use super::source::ExponentSource;
use super::{chernoff_band, chernoff_exponent, hoeffding_exponent};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HoeffdingSample {
    pub r: f64,
    pub b: f64,
    pub alpha_star: f64,
}

/// Samples of r -> B(r) on an increasing r-grid.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExponentCurve {
    pub samples: Vec<HoeffdingSample>,
}

impl ExponentCurve {
    pub fn is_nonincreasing(&self, tol: f64) -> bool {
        self.samples.windows(2).all(|w| w[1].b <= w[0].b + tol)
    }

    /// Each interior sample lies below the chord through its neighbours.
    pub fn is_convex(&self, tol: f64) -> bool {
        self.samples.windows(3).all(|w| {
            if !(w[0].b.is_finite() && w[1].b.is_finite() && w[2].b.is_finite()) {
                return true;
            }
            let t = (w[1].r - w[0].r) / (w[2].r - w[0].r);
            w[1].b <= (1.0 - t) * w[0].b + t * w[2].b + tol
        })
    }

    pub fn alpha_nondecreasing(&self, tol: f64) -> bool {
        self.samples
            .windows(2)
            .all(|w| w[1].alpha_star >= w[0].alpha_star - tol)
    }

    /// Violated shape invariants (nonincreasing at 1e-9, convex at 1e-6).
    pub fn shape_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.is_nonincreasing(1e-9) {
            out.push("B is not nonincreasing in r".to_string());
        }
        if !self.is_convex(1e-6) {
            out.push("B fails the discrete convexity check".to_string());
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,B,alpha_star\n");
        for p in &self.samples {
            let _ = writeln!(
                s,
                "{},{},{}",
                format_g12(p.r),
                format_g12(p.b),
                format_g12(p.alpha_star)
            );
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChernoffSample {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub alpha_star: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChernoffCurve {
    pub samples: Vec<ChernoffSample>,
}

impl ChernoffCurve {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("a,b,C,alpha_star\n");
        for p in &self.samples {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                format_g12(p.a),
                format_g12(p.b),
                format_g12(p.c),
                format_g12(p.alpha_star)
            );
        }
        s
    }
}

/// `points` equally spaced rates on [0, r_max]; a single point is r = 0.
pub fn r_grid(r_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|k| r_max * k as f64 / (n - 1) as f64).collect(),
    }
}

/// B(r) on [0, r_max]; r_max defaults to the Stein exponent.
pub fn hoeffding_curve(src: &dyn ExponentSource, r_max: Option<f64>, points: usize) -> Result<ExponentCurve> {
    if points == 0 {
        return Err(Error::Usage("a curve needs at least one point".into()));
    }
    let r_max = match r_max {
        Some(r) => r,
        None => src.stein().value,
    };
    if !(r_max >= 0.0 && r_max.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "r_max",
            value: r_max,
            range: "a finite nonnegative rate (the Stein exponent is infinite here; pass r_max)",
        });
    }
    let samples = r_grid(r_max, points)
        .into_par_iter()
        .map(|r| {
            let o = hoeffding_exponent(src, r)?;
            Ok(HoeffdingSample {
                r,
                b: o.value,
                alpha_star: o.alpha_star,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ExponentCurve { samples })
}

/// C(a, b) with b fixed and a - b sweeping the admissible band.
pub fn chernoff_curve(src: &dyn ExponentSource, b: f64, points: usize) -> Result<ChernoffCurve> {
    if points == 0 {
        return Err(Error::Usage("a curve needs at least one point".into()));
    }
    let (lo, hi) = chernoff_band(src);
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::ParameterOutOfRange {
            name: "a - b band",
            value: if lo.is_finite() { hi } else { lo },
            range: "finite (a Stein exponent is infinite here)",
        });
    }
    let diffs: Vec<f64> = if points == 1 {
        vec![0.0]
    } else {
        (0..points)
            .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
            .collect()
    };
    let samples = diffs
        .into_par_iter()
        .map(|d| {
            let a = b + d;
            let o = chernoff_exponent(src, a, b)?;
            Ok(ChernoffSample {
                a,
                b,
                c: o.value,
                alpha_star: o.alpha_star,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ChernoffCurve { samples })
}

/// printf-style %.12g.
pub fn format_g12(x: f64) -> String {
    const P: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..P).contains(&exp) {
        let mant = strip_zeros(mant);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mant}e{sign}{:02}", exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_formatting() {
        assert_eq!(format_g12(0.0), "0");
        assert_eq!(format_g12(1.0), "1");
        assert_eq!(format_g12(0.1), "0.1");
        assert_eq!(format_g12(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g12(123456.789), "123456.789");
        assert_eq!(format_g12(1.5e-5), "1.5e-05");
        assert_eq!(format_g12(-2.0e13), "-2e+13");
        assert_eq!(format_g12(f64::INFINITY), "inf");
        assert_eq!(format_g12(0.0001), "0.0001");
    }

    #[test]
    fn grid_shapes() {
        assert_eq!(r_grid(1.0, 1), vec![0.0]);
        assert_eq!(r_grid(1.0, 3), vec![0.0, 0.5, 1.0]);
    }

    #[test]
    fn convexity_check() {
        let mk = |bs: &[f64]| ExponentCurve {
            samples: bs
                .iter()
                .enumerate()
                .map(|(i, &b)| HoeffdingSample {
                    r: i as f64,
                    b,
                    alpha_star: 0.5,
                })
                .collect(),
        };
        assert!(mk(&[4.0, 2.0, 1.0, 0.5]).shape_violations().is_empty());
        assert!(!mk(&[4.0, 3.9, 1.0]).is_convex(1e-6));
        assert!(!mk(&[1.0, 2.0]).is_nonincreasing(1e-9));
    }
}
