//! Comparison equation for the marked-point Riccati variable.
//!
//! With `a0 <= A0(t)` and `a2 >= A2(t) > 0` along every characteristic, a
//! negative `y` stays below the solution `Y` of `Y' = A0 - A2 Y^2` from the
//! same initial value, so `Y`'s blow-up time bounds `y`'s from above. For
//! `gamma = 3` the constant ceilings of `|a0|`, `|a1|` on `[0, t0]` play the
//! part of `A0` and the `a1` term.

use serde::{Deserialize, Serialize};

use crate::coeff::{BoundsContext, ThresholdConstants};
use crate::error::Result;
use crate::riccati::{integrate_riccati, ConstantCoefficients, IntegratorOptions, Outcome, RiccatiCoefficients};

struct Envelope<'a> {
    ctx: &'a BoundsContext,
}

impl RiccatiCoefficients for Envelope<'_> {
    fn a0(&self, t: f64) -> f64 {
        self.ctx.a0_ceiling(t).unwrap_or(f64::NAN)
    }
    fn a1(&self, _: f64) -> f64 {
        0.0
    }
    fn a2(&self, t: f64) -> f64 {
        self.ctx.a2_lower(t).unwrap_or(f64::NAN)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRun {
    pub y0: f64,
    pub t_end: f64,
    pub outcome: Outcome,
    /// `(t, Y)` at uniformly spaced output times up to the outcome.
    pub samples: Vec<(f64, f64)>,
}

/// Integrates the comparison equation from `y0` to `t_end` (clipped to the
/// budget `t0` for `gamma = 3`).
pub fn envelope_run(ctx: &BoundsContext, consts: &ThresholdConstants, y0: f64, t_end: f64, n_out: usize) -> Result<EnvelopeRun> {
    let p = &ctx.params;
    let t_end = match (p.is_gamma3(), consts.t0) {
        (true, Some(t0)) => t_end.min(t0),
        _ => t_end,
    };
    let outs: Vec<f64> = (0..=n_out).map(|i| t_end * i as f64 / n_out.max(1) as f64).collect();
    let opts = IntegratorOptions::default();
    let traj = if p.is_gamma3() {
        let t0 = consts.t0.unwrap_or(t_end);
        let (c1, c0) = ctx.gamma3_ceilings(t0)?;
        // while Y < 0, -a1 Y <= c1 |Y| = -c1 Y
        let c = ConstantCoefficients { a0: c0, a1: c1, a2: p.k_c() };
        integrate_riccati(&c, y0, 0.0, t_end, &outs, &opts)?
    } else {
        integrate_riccati(&Envelope { ctx }, y0, 0.0, t_end, &outs, &opts)?
    };
    Ok(EnvelopeRun {
        y0,
        t_end,
        outcome: traj.outcome,
        samples: traj.t.iter().copied().zip(traj.y.iter().copied()).collect(),
    })
}
