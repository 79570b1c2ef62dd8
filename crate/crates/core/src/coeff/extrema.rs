//! Sampled suprema and infima of coefficient envelopes.
//!
//! Samples are uniform in `ln(1+t)` at [`SAMPLES_PER_DECADE`] points per
//! decade of `1+t`. The grid is doubled until the extremum moves by less than
//! [`REFINE_TOL`] relative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SAMPLES_PER_DECADE: usize = 10_000;
pub const REFINE_TOL: f64 = 5e-3;
const MAX_DOUBLINGS: u32 = 4;
/// Semi-infinite intervals are sampled out to `(1+t_lo) * 10^FAR_DECADES`.
const FAR_DECADES: f64 = 12.0;

/// Extrema of the Riccati coefficients on a time interval, with `phi`
/// restricted to the admissible range at each time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoeffExtrema {
    pub t_lo: f64,
    pub t_hi: f64,
    pub sup_abs_a0: f64,
    pub sup_pos_a0: f64,
    pub inf_a2: f64,
    pub converged: bool,
}

fn grid(t_lo: f64, t_hi: f64, per_decade: usize) -> Vec<f64> {
    let l0 = (1.0 + t_lo).ln();
    let l1 = (1.0 + t_hi).ln();
    let decades = ((l1 - l0) / std::f64::consts::LN_10).max(1.0);
    let n = (decades * per_decade as f64).ceil() as usize;
    (0..=n)
        .map(|i| {
            if i == n {
                t_hi
            } else {
                (l0 + (l1 - l0) * i as f64 / n as f64).exp_m1()
            }
        })
        .collect()
}

/// Index of the sample holding the extremum and its value.
fn extremum<F: Fn(f64) -> f64>(f: &F, ts: &[f64], maximize: bool) -> (usize, f64) {
    let mut best = (0, if maximize { f64::NEG_INFINITY } else { f64::INFINITY });
    for (i, &t) in ts.iter().enumerate() {
        let v = f(t);
        if v.is_nan() {
            continue;
        }
        if (maximize && v > best.1) || (!maximize && v < best.1) {
            best = (i, v);
        }
    }
    best
}

/// Result of a sampled search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampled {
    pub value: f64,
    pub at: f64,
    pub converged: bool,
}

/// Sampled supremum (`maximize`) or infimum of `f` on `[t_lo, t_hi]`, with
/// `t_hi = inf` allowed.
///
/// On a semi-infinite interval a supremum still growing within the last
/// decade sampled is reported as [`Error::NoFiniteSup`].
pub fn sample_extremum<F: Fn(f64) -> f64>(
    f: &F,
    t_lo: f64,
    t_hi: f64,
    maximize: bool,
    what: &'static str,
) -> Result<Sampled> {
    let unbounded = t_hi.is_infinite();
    let hi = if unbounded {
        (1.0 + t_lo) * 10f64.powf(FAR_DECADES) - 1.0
    } else {
        t_hi
    };
    let mut per_decade = SAMPLES_PER_DECADE;
    let ts = grid(t_lo, hi, per_decade);
    let (mut idx, mut value) = extremum(f, &ts, maximize);
    let mut at = ts[idx];
    let mut last_len = ts.len();
    let mut converged = false;
    for _ in 0..MAX_DOUBLINGS {
        per_decade *= 2;
        let ts = grid(t_lo, hi, per_decade);
        let (i2, v2) = extremum(f, &ts, maximize);
        let shift = (v2 - value).abs();
        let done = shift <= REFINE_TOL * v2.abs().max(value.abs()) || shift == 0.0;
        idx = i2;
        value = v2;
        at = ts[i2];
        last_len = ts.len();
        if done {
            converged = true;
            break;
        }
    }
    if !value.is_finite() {
        return Err(Error::NonFinite(what));
    }
    if unbounded && maximize {
        let last_decade = last_len - last_len / FAR_DECADES as usize;
        if idx >= last_decade {
            return Err(Error::NoFiniteSup { what, t_lo });
        }
    }
    Ok(Sampled { value, at, converged })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_interior_maximum() {
        let s = sample_extremum(&|t: f64| -(t - 1.5).powi(2), 0.0, 4.0, true, "f").unwrap();
        assert!(s.value.abs() < 1e-6);
        assert!((s.at - 1.5).abs() < 1e-3);
        assert!(s.converged);
    }

    #[test]
    fn infimum_approached_at_infinity() {
        let s = sample_extremum(&|t: f64| 1.0 + 1.0 / (1.0 + t), 0.0, f64::INFINITY, false, "f")
            .unwrap();
        assert!((s.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn growing_supremum_is_reported() {
        let r = sample_extremum(&|t: f64| (1.0 + t).ln(), 0.0, f64::INFINITY, true, "f");
        assert!(matches!(r, Err(Error::NoFiniteSup { .. })));
    }
}
