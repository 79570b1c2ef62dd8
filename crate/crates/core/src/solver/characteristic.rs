//! Characteristic curves `dx/dt = +c` (forward) and `dx/dt = -c` (backward)
//! traced through a snapshot series.
//!
//! Fields are interpolated linearly in `x` between cell centers and linearly
//! in `t` between snapshots. Paths are advanced with classical RK4 on a
//! uniform time grid.

use serde::{Deserialize, Serialize};

use super::run::RunSeries;
use super::state::cell_gradient;
use super::{Boundary, Grid1D};
use crate::coeff::CoefficientSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Forward,
    Backward,
}

impl Family {
    pub fn sign(self) -> f64 {
        match self {
            Family::Forward => 1.0,
            Family::Backward => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub t: f64,
    pub x: f64,
    pub tau: f64,
    pub u: f64,
    pub c: f64,
    pub phi: f64,
    /// `w_x` on forward paths, `z_x` on backward ones.
    pub grad: f64,
    /// Riccati variable built from `grad`; `None` if the weight is undefined.
    pub y: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacteristicPath {
    pub family: Family,
    pub anchor: (f64, f64),
    pub dt: f64,
    pub samples: Vec<PathSample>,
}

struct Frame {
    t: f64,
    tau: Vec<f64>,
    u: Vec<f64>,
    c: Vec<f64>,
    phi: Vec<f64>,
    grad: Vec<f64>,
}

/// Interpolator over the snapshot series.
struct Slab<'a> {
    grid: &'a Grid1D,
    frames: Vec<Frame>,
}

#[derive(Clone, Copy)]
struct Point {
    tau: f64,
    u: f64,
    c: f64,
    phi: f64,
    grad: f64,
}

impl<'a> Slab<'a> {
    fn new(series: &'a RunSeries, family: Family) -> Self {
        let p = &series.params;
        let frames = series
            .snapshots
            .iter()
            .map(|s| {
                let phi = s.phi(p);
                let (w, z) = s.riemann(p);
                let grad = match family {
                    Family::Forward => cell_gradient(&series.grid, &w),
                    Family::Backward => cell_gradient(&series.grid, &z),
                };
                Frame {
                    t: s.t,
                    tau: s.tau.clone(),
                    u: s.u.clone(),
                    c: s.tau.iter().map(|&t| p.sound_speed(t).unwrap_or(f64::NAN)).collect(),
                    phi,
                    grad,
                }
            })
            .collect();
        Self { grid: &series.grid, frames }
    }

    fn t_range(&self) -> (f64, f64) {
        (self.frames[0].t, self.frames.last().map_or(0.0, |f| f.t))
    }

    fn at_frame(&self, f: &Frame, x: f64) -> Option<Point> {
        let g = self.grid;
        Some(Point {
            tau: g.interpolate(&f.tau, x)?,
            u: g.interpolate(&f.u, x)?,
            c: g.interpolate(&f.c, x)?,
            phi: g.interpolate(&f.phi, x)?,
            grad: g.interpolate(&f.grad, x)?,
        })
    }

    fn at(&self, x: f64, t: f64) -> Result<Point> {
        let (t_lo, t_hi) = self.t_range();
        if !(t >= t_lo - 1e-12 && t <= t_hi + 1e-12) {
            return Err(Error::OutsideSlab { x, t });
        }
        let k = self.frames.partition_point(|f| f.t <= t).saturating_sub(1);
        let k = k.min(self.frames.len().saturating_sub(2));
        let left = self.at_frame(&self.frames[k], x).ok_or(Error::LeftDomain { t, x })?;
        if self.frames.len() == 1 {
            return Ok(left);
        }
        let right = self.at_frame(&self.frames[k + 1], x).ok_or(Error::LeftDomain { t, x })?;
        let (t0, t1) = (self.frames[k].t, self.frames[k + 1].t);
        let s = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let mix = |a: f64, b: f64| (1.0 - s) * a + s * b;
        Ok(Point {
            tau: mix(left.tau, right.tau),
            u: mix(left.u, right.u),
            c: mix(left.c, right.c),
            phi: mix(left.phi, right.phi),
            grad: mix(left.grad, right.grad),
        })
    }
}

/// Traces a characteristic from `anchor = (x0, t0)` to `t_end` (or the last
/// snapshot), with `samples_per_interval` RK4 steps per snapshot interval.
pub fn trace_characteristic(
    series: &RunSeries,
    coeffs: Option<&CoefficientSet>,
    family: Family,
    anchor: (f64, f64),
    t_end: Option<f64>,
    samples_per_interval: usize,
) -> Result<CharacteristicPath> {
    let slab = Slab::new(series, family);
    let (x0, t0) = anchor;
    let (_, t_last) = slab.t_range();
    let grid = &series.grid;
    if !(t0 >= 0.0 && t0 <= t_last)
        || (grid.boundary == Boundary::ConstantExtrapolation && !(x0 >= grid.x_min && x0 <= grid.x_max))
    {
        return Err(Error::OutsideSlab { x: x0, t: t0 });
    }
    let t_end = t_end.unwrap_or(t_last).min(t_last);
    let dt = series.cadence / samples_per_interval.max(1) as f64;
    let n = ((t_end - t0) / dt + 1e-9).floor() as usize;
    let sign = family.sign();
    let speed = |x: f64, t: f64| -> Result<f64> { Ok(sign * slab.at(x, t)?.c) };
    let sample = |x: f64, t: f64| -> Result<PathSample> {
        let pt = slab.at(x, t)?;
        Ok(PathSample {
            t,
            x,
            tau: pt.tau,
            u: pt.u,
            c: pt.c,
            phi: pt.phi,
            grad: pt.grad,
            y: coeffs.map(|c| c.gradient_variable(t, pt.phi, pt.grad)),
        })
    };
    let mut samples = Vec::with_capacity(n + 1);
    let mut x = x0;
    samples.push(sample(x, t0)?);
    for i in 0..n {
        let t = t0 + i as f64 * dt;
        let k1 = speed(x, t)?;
        let k2 = speed(x + 0.5 * dt * k1, t + 0.5 * dt)?;
        let k3 = speed(x + 0.5 * dt * k2, t + 0.5 * dt)?;
        let k4 = speed(x + dt * k3, t + dt)?;
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        samples.push(sample(x, t0 + (i + 1) as f64 * dt)?);
    }
    Ok(CharacteristicPath { family, anchor, dt, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::GasParams;
    use crate::solver::{run, Profile, RunOptions};

    fn constant_series(gamma: f64, k: f64, tau: f64) -> RunSeries {
        let p = GasParams::new(gamma, k, 0.0, 0.0, 2.0).unwrap();
        let g = Grid1D::new(0.0, 1.0, 32, Boundary::Periodic).unwrap();
        let opts = RunOptions { horizon: 0.5, cadence: 0.1, ..Default::default() };
        run(&p, &g, &Profile::Constant { tau, u: 0.0 }, &opts).unwrap()
    }

    #[test]
    fn constant_state_straight_lines() {
        let s = constant_series(2.0, 0.125, 1.0);
        let c = s.params.sound_speed(1.0).unwrap();
        for fam in [Family::Forward, Family::Backward] {
            let path = trace_characteristic(&s, None, fam, (0.3, 0.0), None, 20).unwrap();
            let last = path.samples.last().unwrap();
            assert!((last.t - 0.5).abs() < 1e-12);
            assert!((last.x - (0.3 + fam.sign() * c * 0.5)).abs() < 1e-12);
        }
    }

    #[test]
    fn gamma3_slope_is_kc_phi_squared() {
        let s = constant_series(3.0, 1.0 / 3.0, 0.8);
        let p = s.params;
        let phi = p.phi_of_tau(0.8).unwrap();
        let path = trace_characteristic(&s, None, Family::Forward, (0.1, 0.0), None, 20).unwrap();
        let last = path.samples.last().unwrap();
        let slope = (last.x - 0.1) / (last.t - 0.0);
        assert!((slope - p.k_c() * phi * phi).abs() < 1e-12);
    }

    #[test]
    fn anchor_outside_slab_rejected() {
        let s = constant_series(2.0, 0.125, 1.0);
        let r = trace_characteristic(&s, None, Family::Forward, (0.3, 2.0), None, 20);
        assert!(matches!(r, Err(Error::OutsideSlab { .. })));
    }

    #[test]
    fn bounded_grid_path_leaves_domain() {
        let p = GasParams::new(2.0, 0.125, 0.0, 0.0, 2.0).unwrap();
        let g = Grid1D::new(0.0, 1.0, 32, Boundary::ConstantExtrapolation).unwrap();
        let opts = RunOptions { horizon: 2.0, cadence: 0.1, ..Default::default() };
        let s = run(&p, &g, &Profile::Constant { tau: 1.0, u: 0.0 }, &opts).unwrap();
        let r = trace_characteristic(&s, None, Family::Forward, (0.9, 0.0), None, 20);
        assert!(matches!(r, Err(Error::LeftDomain { .. })));
    }
}
