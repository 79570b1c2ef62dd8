//! Picks compression-pulse slopes a given factor beyond the blow-up threshold.

use serde::{Deserialize, Serialize};

use super::scenario::resolve_params;
use super::{ExperimentError, ScenarioConfig};
use crate::coeff::BoundsContext;
use crate::error::Error;
use crate::riccati::branch_blowup_bound;
use crate::solver::{initialize, Profile};
use crate::verify::state_ceiling;

/// Marked-point quantities for one candidate slope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseDesign {
    pub slope: f64,
    /// Riccati variable at the marked point (the smaller of the two families).
    pub y0: f64,
    pub level: f64,
    pub slope_threshold: f64,
    pub c0: f64,
    /// Upper bound on the blow-up time when the threshold is crossed.
    pub bound: Option<f64>,
}

impl PulseDesign {
    /// `-y0 / level`, or `slope / slope_threshold` when the level is zero.
    pub fn ratio(&self) -> f64 {
        if self.level > 0.0 {
            -self.y0 / self.level
        } else {
            self.slope / self.slope_threshold
        }
    }
}

fn with_slope(cfg: &ScenarioConfig, slope: f64) -> Result<ScenarioConfig, ExperimentError> {
    let mut c = cfg.clone();
    match &mut c.profile {
        Profile::CompressionPulse { slope: s, .. } => *s = slope,
        _ => {
            return Err(ExperimentError::Invalid(vec!["slope design needs a compression_pulse profile".into()]));
        }
    }
    Ok(c)
}

/// Thresholds at the marked point for the config's current profile.
pub fn evaluate_pulse(cfg: &ScenarioConfig) -> Result<PulseDesign, ExperimentError> {
    let Profile::CompressionPulse { slope, .. } = cfg.profile else {
        return Err(ExperimentError::Invalid(vec!["slope design needs a compression_pulse profile".into()]));
    };
    let params = resolve_params(cfg)?;
    let (state, init) = initialize(&cfg.profile, &params, &cfg.grid)?;
    let ctx = BoundsContext::new(&params, state_ceiling(&params, &cfg.grid, &state)?)?;
    let consts = ctx.threshold_constants(cfg.t0_budget)?;
    let c = ctx.coefficients()?;
    let yw = c.gradient_variable(0.0, init.phi0, init.w_x0);
    let yz = c.gradient_variable(0.0, init.phi0, init.z_x0);
    let y0 = yw.min(yz);
    Ok(PulseDesign {
        slope,
        y0,
        level: consts.level,
        slope_threshold: ctx.blowup_threshold(init.phi0, &consts)?,
        c0: params.c0,
        bound: branch_blowup_bound(&ctx, &consts, y0)?.map(|b| b.t_bound),
    })
}

/// Slope `s < 0` for which the marked point sits `factor` times beyond the
/// threshold: `y0 = -factor * level`, or `s = factor * threshold` when the
/// level is zero. Every other config field is kept.
pub fn design_pulse_slope(cfg: &ScenarioConfig, factor: f64) -> Result<PulseDesign, ExperimentError> {
    if !(factor > 1.0) {
        return Err(Error::Domain { what: "factor - 1", value: factor - 1.0 }.into());
    }
    let probe = evaluate_pulse(&with_slope(cfg, -1e-3)?)?;
    if probe.level == 0.0 {
        return evaluate_pulse(&with_slope(cfg, factor * probe.slope_threshold)?);
    }
    let gap = |s: f64| -> Result<(f64, PulseDesign), ExperimentError> {
        let d = evaluate_pulse(&with_slope(cfg, s)?)?;
        Ok((d.y0 + factor * d.level, d))
    };
    let (mut hi, mut lo) = (0.0f64, -0.05f64);
    let (g0, _) = gap(-1e-9)?;
    if g0 <= 0.0 {
        return Err(ExperimentError::Invalid(vec![format!(
            "flat data already lies {factor}x beyond the threshold"
        )]));
    }
    let mut found = None;
    let mut last = None;
    for _ in 0..30 {
        let (g, d) = gap(lo)?;
        if g < 0.0 {
            found = Some(d);
            break;
        }
        last = Some(d);
        hi = lo;
        lo *= 2.0;
    }
    let mut best = found.ok_or_else(|| {
        let r = last.map_or(f64::NAN, |d| d.ratio());
        ExperimentError::Invalid(vec![format!(
            "no slope reaches {factor}x the threshold; ratio {r} at slope {hi} (C0 grows with the pulse amplitude)"
        )])
    })?;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let (g, d) = gap(mid)?;
        if g < 0.0 {
            lo = mid;
            best = d;
        } else {
            hi = mid;
        }
        if (lo - hi).abs() <= 1e-10 * lo.abs() {
            break;
        }
    }
    Ok(best)
}
