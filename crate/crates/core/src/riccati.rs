//! Integration of `y' = a0(t) - a1(t) y - a2(t) y^2` up to a finite-time pole.
//!
//! The integrator is an embedded Dormand-Prince 5(4) pair. Once `y` falls
//! below [`RECIPROCAL_SWITCH`] it continues with `v = 1/y`, which obeys the
//! regular equation `v' = a2 + a1 v - a0 v^2`; the pole is the zero of `v`,
//! located by bisection on the step size.

use serde::{Deserialize, Serialize};

use crate::coeff::{BlowupBranch, BoundsContext, CoefficientSet, ThresholdConstants};
use crate::error::{Error, Result};
use crate::quad::adaptive_simpson;

/// `y` below this switches the state to `v = 1/y`.
pub const RECIPROCAL_SWITCH: f64 = -1e3;
/// `y` above this (while tracking `v`) switches back.
const RECIPROCAL_RELEASE: f64 = -5e2;
/// Width of the bracket around a located pole.
pub const POLE_BRACKET: f64 = 1e-8;

/// Coefficients along one trajectory.
pub trait RiccatiCoefficients {
    fn a0(&self, t: f64) -> f64;
    fn a1(&self, t: f64) -> f64;
    fn a2(&self, t: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantCoefficients {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

impl RiccatiCoefficients for ConstantCoefficients {
    fn a0(&self, _: f64) -> f64 {
        self.a0
    }
    fn a1(&self, _: f64) -> f64 {
        self.a1
    }
    fn a2(&self, _: f64) -> f64 {
        self.a2
    }
}

/// Coefficients evaluated along a characteristic with known `phi(t)`.
pub struct PathCoefficients<'a, F: Fn(f64) -> f64> {
    pub set: &'a CoefficientSet,
    pub phi: F,
}

impl<F: Fn(f64) -> f64> RiccatiCoefficients for PathCoefficients<'_, F> {
    fn a0(&self, t: f64) -> f64 {
        self.set.a0(t, (self.phi)(t))
    }
    fn a1(&self, t: f64) -> f64 {
        self.set.a1(t, (self.phi)(t))
    }
    fn a2(&self, t: f64) -> f64 {
        self.set.a2(t, (self.phi)(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-12, max_steps: 2_000_000 }
    }
}

/// How an integration ended.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Outcome {
    /// Reached the horizon with a finite value.
    Finite { t: f64, y: f64 },
    /// `y -> -inf` inside `[lo, hi]`.
    BlowUp { t_star: f64, lo: f64, hi: f64 },
}

impl Outcome {
    pub fn blowup_time(&self) -> Option<f64> {
        match *self {
            Outcome::BlowUp { t_star, .. } => Some(t_star),
            Outcome::Finite { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiccatiTrajectory {
    pub t: Vec<f64>,
    pub y: Vec<f64>,
    pub outcome: Outcome,
}

impl RiccatiTrajectory {
    /// Value at a requested output time; `None` past the pole or if the
    /// time was not requested.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        self.t.iter().position(|&s| s == t).map(|i| self.y[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Var {
    Direct,
    Reciprocal,
}

fn rhs<C: RiccatiCoefficients + ?Sized>(c: &C, var: Var, t: f64, s: f64) -> f64 {
    match var {
        Var::Direct => c.a0(t) - c.a1(t) * s - c.a2(t) * s * s,
        Var::Reciprocal => c.a2(t) + c.a1(t) * s - c.a0(t) * s * s,
    }
}

// Dormand-Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand-Prince step; returns the fifth-order value and the error estimate.
fn dopri_step<C: RiccatiCoefficients + ?Sized>(c: &C, var: Var, t: f64, s: f64, h: f64) -> (f64, f64) {
    let k1 = rhs(c, var, t, s);
    let k2 = rhs(c, var, t + C2 * h, s + h * A21 * k1);
    let k3 = rhs(c, var, t + C3 * h, s + h * (A31 * k1 + A32 * k2));
    let k4 = rhs(c, var, t + C4 * h, s + h * (A41 * k1 + A42 * k2 + A43 * k3));
    let k5 = rhs(c, var, t + C5 * h, s + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4));
    let k6 = rhs(c, var, t + h, s + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5));
    let next = s + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6);
    let k7 = rhs(c, var, t + h, next);
    let err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
    (next, err)
}

/// Integrates from `(t_start, y0)` to `t_end`, reporting `y` at each time of
/// `outputs` (which must be sorted and inside `[t_start, t_end]`).
pub fn integrate_riccati<C: RiccatiCoefficients + ?Sized>(
    coeffs: &C,
    y0: f64,
    t_start: f64,
    t_end: f64,
    outputs: &[f64],
    opts: &IntegratorOptions,
) -> Result<RiccatiTrajectory> {
    if !y0.is_finite() {
        return Err(Error::NonFinite("initial Riccati value"));
    }
    if !(t_end >= t_start) {
        return Err(Error::InvalidParams(format!("horizon {t_end} precedes start {t_start}")));
    }
    let mut out_t = Vec::new();
    let mut out_y = Vec::new();
    let mut next_out = outputs.iter().copied().filter(|&s| s >= t_start && s <= t_end).peekable();
    if next_out.peek() == Some(&t_start) {
        out_t.push(t_start);
        out_y.push(y0);
        next_out.next();
    }

    let (mut var, mut s) = if y0 < RECIPROCAL_SWITCH {
        (Var::Reciprocal, 1.0 / y0)
    } else {
        (Var::Direct, y0)
    };
    let mut t = t_start;
    let span = (t_end - t_start).max(1e-300);
    let mut h = (1e-3 * span).min(1e-2);
    let value = |var: Var, s: f64| match var {
        Var::Direct => s,
        Var::Reciprocal => 1.0 / s,
    };

    for _ in 0..opts.max_steps {
        if t >= t_end {
            return Ok(RiccatiTrajectory { t: out_t, y: out_y, outcome: Outcome::Finite { t, y: value(var, s) } });
        }
        let target = next_out.peek().copied().unwrap_or(t_end).min(t_end);
        let lands = t + h >= target;
        let step = if lands { target - t } else { h };
        let (next, err) = dopri_step(coeffs, var, t, s, step);
        let scale = opts.atol + opts.rtol * s.abs().max(next.abs());
        let ratio = (err / scale).abs();
        if !ratio.is_finite() || ratio > 1.0 {
            let factor = if ratio.is_finite() { (0.9 * ratio.powf(-0.2)).max(0.2) } else { 0.1 };
            h = step * factor;
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::StepUnderflow { t, y: value(var, s), h });
            }
            continue;
        }
        if var == Var::Reciprocal && next >= 0.0 {
            let (lo, hi) = locate_zero(coeffs, t, s, step)?;
            return Ok(RiccatiTrajectory {
                t: out_t,
                y: out_y,
                outcome: Outcome::BlowUp { t_star: 0.5 * (lo + hi), lo, hi },
            });
        }
        t = if lands { target } else { t + step };
        s = next;
        if lands && next_out.peek() == Some(&target) {
            out_t.push(t);
            out_y.push(value(var, s));
            next_out.next();
        }
        match var {
            Var::Direct if s < RECIPROCAL_SWITCH => {
                var = Var::Reciprocal;
                s = 1.0 / s;
            }
            Var::Reciprocal if 1.0 / s > RECIPROCAL_RELEASE => {
                var = Var::Direct;
                s = 1.0 / s;
            }
            _ => {}
        }
        let grow = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        // a step clipped to an output time does not shrink the next one
        h = if lands { h.max(step * grow) } else { step * grow };
    }
    Err(Error::StepUnderflow { t, y: value(var, s), h })
}

/// Brackets the zero of `v` inside `(t, t + h]` by bisection on the step size.
fn locate_zero<C: RiccatiCoefficients + ?Sized>(c: &C, t: f64, v: f64, h: f64) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = (0.0, h);
    while hi - lo > POLE_BRACKET {
        let mid = 0.5 * (lo + hi);
        let (vm, _) = dopri_step(c, Var::Reciprocal, t, v, mid);
        if !vm.is_finite() {
            return Err(Error::NonFinite("reciprocal Riccati state"));
        }
        if vm >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    Ok((t + lo, t + hi))
}

/// Closed-form solution of `y' = a0 - a2 y^2` with constant `a0`, `a2 > 0`;
/// `None` at or past the pole.
pub fn constant_coefficient_solution(a0: f64, a2: f64, y0: f64, t: f64) -> Option<f64> {
    if let Some(ts) = constant_coefficient_blowup(a0, a2, y0) {
        if t >= ts {
            return None;
        }
    }
    let (a, b) = (a0, a2);
    if a > 0.0 {
        let k = (a / b).sqrt();
        let th = ((a * b).sqrt() * t).tanh();
        Some(k * (k * th + y0) / (k + th * y0))
    } else if a == 0.0 {
        Some(y0 / (1.0 + b * y0 * t))
    } else {
        let m = (-a / b).sqrt();
        let w = (-a * b).sqrt() * t;
        let (sn, cs) = w.sin_cos();
        Some(m * (y0 * cs - m * sn) / (m * cs + y0 * sn))
    }
}

/// Pole of the constant-coefficient solution, if any.
pub fn constant_coefficient_blowup(a0: f64, a2: f64, y0: f64) -> Option<f64> {
    let (a, b) = (a0, a2);
    if a > 0.0 {
        let k = (a / b).sqrt();
        (y0 < -k).then(|| (-k / y0).atanh() / (a * b).sqrt())
    } else if a == 0.0 {
        (y0 < 0.0).then(|| -1.0 / (b * y0))
    } else {
        let m = (-a / b).sqrt();
        Some(((y0 / m).atan() + std::f64::consts::FRAC_PI_2) / (-a * b).sqrt())
    }
}

/// Result of sandwiching a trajectory between constant-coefficient solutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub ok: bool,
    pub max_violation: f64,
    pub samples: usize,
}

/// Checks `sub <= y <= super` at every stored sample of `traj`, where `sub`
/// solves with `(a0_min, a2_max)` and `super` with `(a0_max, a2_min)`. Only
/// meaningful when `a1 = 0`. Samples past either comparison pole are skipped.
pub fn comparison_check(
    traj: &RiccatiTrajectory,
    t_start: f64,
    y0: f64,
    a0_range: (f64, f64),
    a2_range: (f64, f64),
    tol: f64,
) -> ComparisonReport {
    let mut worst = 0.0f64;
    let mut n = 0;
    for (&t, &y) in traj.t.iter().zip(&traj.y) {
        let dt = t - t_start;
        let lo = constant_coefficient_solution(a0_range.0, a2_range.1, y0, dt);
        let hi = constant_coefficient_solution(a0_range.1, a2_range.0, y0, dt);
        if let Some(lo) = lo {
            worst = worst.max(lo - y);
        }
        if let Some(hi) = hi {
            worst = worst.max(y - hi);
        }
        n += 1;
    }
    ComparisonReport { ok: worst <= tol, max_violation: worst, samples: n }
}

/// Which blow-up time estimate applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupBoundKind {
    /// `int_{t_start}^T a2_lower = -1/y0`.
    TailIntegral,
    /// `(1 - (1+eps)^-2) int_0^T a2_lower = -1/y0`.
    SlackIntegral,
    /// `T = -1 / (rate y0)` for a constant lower rate.
    LinearReciprocal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupBound {
    pub kind: BlowupBoundKind,
    pub t_bound: f64,
}

/// Smallest `T >= t_start` with `factor * int_{t_start}^T f >= target`, or
/// `None` if the integral saturates below the target before `t = 1e12`.
fn integral_crossing<F: Fn(f64) -> f64>(f: &F, t_start: f64, factor: f64, target: f64) -> Option<f64> {
    let mut acc = 0.0;
    let mut lo = t_start;
    let mut width = 1e-3_f64.max(1e-3 * t_start);
    while lo < 1e12 {
        let hi = lo + width;
        let piece = factor * adaptive_simpson(f, lo, hi, 1e-10);
        if acc + piece >= target {
            // bisect inside the panel
            let (mut a, mut b) = (lo, hi);
            while b - a > 1e-12 * b.max(1.0) {
                let m = 0.5 * (a + b);
                if acc + factor * adaptive_simpson(f, lo, m, 1e-10) >= target {
                    b = m;
                } else {
                    a = m;
                }
            }
            return Some(b);
        }
        acc += piece;
        if piece <= 1e-16 * acc && f(hi) * width * 1e6 < target - acc {
            return None;
        }
        lo = hi;
        width *= 2.0;
    }
    None
}

/// Upper bound on the blow-up time of a trajectory starting at `y0 < 0`.
///
/// `a2_lower` is a lower envelope of `a2` valid along every characteristic.
pub fn blowup_upper_bound<F: Fn(f64) -> f64>(
    kind: BlowupBoundKind,
    y0: f64,
    a2_lower: &F,
    t_start: f64,
    slack: f64,
) -> Result<Option<f64>> {
    if !(y0 < 0.0) {
        return Ok(None);
    }
    match kind {
        BlowupBoundKind::LinearReciprocal => {
            let rate = a2_lower(t_start);
            if !(rate > 0.0) {
                return Err(Error::Domain { what: "a2 lower rate", value: rate });
            }
            Ok(Some(t_start - 1.0 / (rate * y0)))
        }
        BlowupBoundKind::TailIntegral => Ok(integral_crossing(a2_lower, t_start, 1.0, -1.0 / y0)),
        BlowupBoundKind::SlackIntegral => {
            if !(slack > 0.0) {
                return Ok(None);
            }
            let factor = 1.0 - (1.0 + slack).powi(-2);
            Ok(integral_crossing(a2_lower, t_start, factor, -1.0 / y0))
        }
    }
}

/// Blow-up time bound for the branch in `consts`, for a characteristic
/// starting at `y0 < -level`. `None` when the branch condition fails or the
/// integral saturates.
pub fn branch_blowup_bound(
    ctx: &BoundsContext,
    consts: &ThresholdConstants,
    y0: f64,
) -> Result<Option<BlowupBound>> {
    if !(y0 < -consts.level) {
        return Ok(None);
    }
    let a2 = |t: f64| ctx.a2_lower(t).unwrap_or(f64::NAN);
    let (kind, t_start, slack) = match consts.branch {
        BlowupBranch::LowGammaNonPositive | BlowupBranch::HighGammaNonPositive => {
            (BlowupBoundKind::TailIntegral, 0.0, 0.0)
        }
        BlowupBranch::LowGammaSignChange | BlowupBranch::HighGammaSignChange => {
            (BlowupBoundKind::TailIntegral, consts.t0.unwrap_or(0.0), 0.0)
        }
        BlowupBranch::HighGammaLongTime => {
            (BlowupBoundKind::SlackIntegral, 0.0, -y0 / consts.level - 1.0)
        }
        BlowupBranch::GammaThree => {
            let kc = ctx.params.k_c();
            let t = -2.0 / (kc * y0);
            return Ok(Some(BlowupBound { kind: BlowupBoundKind::LinearReciprocal, t_bound: t }));
        }
    };
    Ok(blowup_upper_bound(kind, y0, &a2, t_start, slack)?
        .map(|t_bound| BlowupBound { kind, t_bound }))
}
