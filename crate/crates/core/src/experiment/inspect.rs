//! Constants and comparison-equation reports for a config, without running
//! the solver.

use serde::{Deserialize, Serialize};

use super::envelope::{envelope_run, EnvelopeRun};
use super::scenario::resolve_params;
use super::{ExperimentError, ResolvedConstants, ScenarioConfig};
use crate::coeff::{BoundsContext, ThresholdConstants};
use crate::error::Error;
use crate::riccati::{branch_blowup_bound, BlowupBound};
use crate::solver::{initialize, InitialReport};
use crate::verify::state_ceiling;

/// Threshold comparison at the marked point of the initial data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkedPoint {
    pub x0: f64,
    pub phi0: f64,
    pub w_x0: f64,
    pub z_x0: f64,
    /// The smaller Riccati variable of the two families.
    pub y0: f64,
    pub slope_threshold: f64,
    pub threshold_crossed: bool,
    pub bound: Option<BlowupBound>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsDocument {
    #[serde(flatten)]
    pub constants: ResolvedConstants,
    pub marked_point: Option<MarkedPoint>,
}

struct Prepared {
    ctx: BoundsContext,
    init: InitialReport,
    constants: ResolvedConstants,
    consts: Option<ThresholdConstants>,
}

fn prepare(cfg: &ScenarioConfig) -> Result<Prepared, ExperimentError> {
    cfg.validate()?;
    let params = resolve_params(cfg)?;
    let (state, init) = initialize(&cfg.profile, &params, &cfg.grid)?;
    let ctx = BoundsContext::new(&params, state_ceiling(&params, &cfg.grid, &state)?)?;
    let constants = ResolvedConstants::compute(&ctx, cfg.t0_budget)?;
    let consts = match ctx.threshold_constants(cfg.t0_budget) {
        Ok(c) => Some(c),
        Err(Error::UnsupportedRegime(_) | Error::InvalidParams(_)) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Prepared { ctx, init, constants, consts })
}

fn marked_point(p: &Prepared, consts: &ThresholdConstants) -> Result<MarkedPoint, ExperimentError> {
    let c = p.ctx.coefficients()?;
    let i = &p.init;
    let y0 = c.gradient_variable(0.0, i.phi0, i.w_x0).min(c.gradient_variable(0.0, i.phi0, i.z_x0));
    Ok(MarkedPoint {
        x0: i.x0,
        phi0: i.phi0,
        w_x0: i.w_x0,
        z_x0: i.z_x0,
        y0,
        slope_threshold: p.ctx.blowup_threshold(i.phi0, consts)?,
        threshold_crossed: y0 < -consts.level,
        bound: branch_blowup_bound(&p.ctx, consts, y0)?,
    })
}

/// Every analytic constant of a config plus the marked-point comparison.
pub fn bounds_document(cfg: &ScenarioConfig) -> Result<BoundsDocument, ExperimentError> {
    let p = prepare(cfg)?;
    let marked_point = match &p.consts {
        Some(c) => Some(marked_point(&p, c)?),
        None => None,
    };
    Ok(BoundsDocument { constants: p.constants, marked_point })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiccatiDocument {
    pub marked_point: MarkedPoint,
    /// Comparison-equation solution bounding the marked-point variable.
    pub envelope: EnvelopeRun,
}

/// Integrates the comparison equation from the marked point up to `t_end`
/// (the config horizon when `None`).
pub fn riccati_document(cfg: &ScenarioConfig, t_end: Option<f64>, samples: usize) -> Result<RiccatiDocument, ExperimentError> {
    let p = prepare(cfg)?;
    let consts = p.consts.ok_or_else(|| {
        ExperimentError::Numerical(Error::UnsupportedRegime(
            p.constants.note.clone().unwrap_or_else(|| "no threshold constants".into()),
        ))
    })?;
    let mp = marked_point(&p, &consts)?;
    let envelope = envelope_run(&p.ctx, &consts, mp.y0, t_end.unwrap_or(cfg.horizon), samples)?;
    Ok(RiccatiDocument { marked_point: mp, envelope })
}
