//! Built-in initial data families and grid initialization.

use serde::{Deserialize, Serialize};

use super::state::gradient_proxy;
use super::{Boundary, FlowState, Grid1D};
use crate::error::{Error, Result};
use crate::gas::{GammaRegime, GasParams, STRICT_MARGIN};

/// Initial data `(tau0, u0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum Profile {
    Constant {
        tau: f64,
        u: f64,
    },
    /// `tau = tau_mean + tau_amp cos(k s)`, `u = u_amp sin(k s)`, `s = x - x_min`.
    Sine {
        tau_mean: f64,
        #[serde(default)]
        tau_amp: f64,
        u_amp: f64,
        wavenumber: f64,
    },
    /// Uniform `tau`, `u = slope * width * tanh((x - x0) / width)`, so that
    /// `u_x(x0) = slope` is the extreme slope. `slope < 0` compresses.
    CompressionPulse {
        tau_mean: f64,
        slope: f64,
        width: f64,
        x0: f64,
    },
    /// Forward simple wave: `phi = phi(tau_mean) + amp sin(k s)`, `u = phi - phi(tau_mean)`,
    /// so `z` is constant.
    SimpleWave {
        tau_mean: f64,
        amp: f64,
        wavenumber: f64,
    },
    /// `tau = tau`, `u = slope * x + offset`: uniform expansion or compression.
    LinearVelocity {
        tau: f64,
        slope: f64,
        offset: f64,
    },
}

/// What initialization measured on the sampled data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialReport {
    /// Data bound: `1.01 max(sup tau0, sup |u0|, 1/inf tau0, ...)`.
    pub achieved_c0: f64,
    /// Marked point where thresholds are compared.
    pub x0: f64,
    pub tau0: f64,
    pub phi0: f64,
    pub u_x0: f64,
    pub phi_x0: f64,
    /// `u_x + phi_x` at `x0`.
    pub w_x0: f64,
    /// `u_x - phi_x` at `x0`.
    pub z_x0: f64,
    pub proxy0: f64,
    pub mass0: f64,
}

fn bad(msg: String) -> Error {
    Error::InvalidParams(msg)
}

impl Profile {
    /// Checks profile parameters, listing every violated constraint.
    pub fn validate(&self, grid: &Grid1D) -> Result<()> {
        let mut v = Vec::new();
        let periodic = grid.boundary == Boundary::Periodic;
        let check_k = |k: f64, v: &mut Vec<String>| {
            if !(k > 0.0 && k.is_finite()) {
                v.push(format!("wavenumber must be positive, got {k}"));
            } else if periodic {
                let periods = k * grid.length() / (2.0 * std::f64::consts::PI);
                if (periods - periods.round()).abs() > 1e-9 * periods.max(1.0) {
                    v.push(format!(
                        "wavenumber {k} does not fit the periodic domain of length {}",
                        grid.length()
                    ));
                }
            }
        };
        match *self {
            Profile::Constant { tau, u } => {
                if !(tau > 0.0) {
                    v.push(format!("tau must be positive, got {tau}"));
                }
                if !u.is_finite() {
                    v.push("u must be finite".into());
                }
            }
            Profile::Sine { tau_mean, tau_amp, u_amp, wavenumber } => {
                if !(tau_mean > 0.0) {
                    v.push(format!("tau_mean must be positive, got {tau_mean}"));
                }
                if !(tau_amp.abs() < tau_mean) {
                    v.push(format!("|tau_amp| must be below tau_mean, got {tau_amp}"));
                }
                if !u_amp.is_finite() {
                    v.push("u_amp must be finite".into());
                }
                check_k(wavenumber, &mut v);
            }
            Profile::CompressionPulse { tau_mean, slope, width, x0 } => {
                if !(tau_mean > 0.0) {
                    v.push(format!("tau_mean must be positive, got {tau_mean}"));
                }
                if !slope.is_finite() {
                    v.push("slope must be finite".into());
                }
                if !(width > 0.0) {
                    v.push(format!("width must be positive, got {width}"));
                }
                if !(x0 > grid.x_min && x0 < grid.x_max) {
                    v.push(format!("x0 = {x0} lies outside the grid"));
                }
                if periodic {
                    v.push("compression_pulse needs constant_extrapolation boundaries".into());
                }
            }
            Profile::SimpleWave { tau_mean, amp, wavenumber } => {
                if !(tau_mean > 0.0) {
                    v.push(format!("tau_mean must be positive, got {tau_mean}"));
                }
                if !amp.is_finite() {
                    v.push("amp must be finite".into());
                }
                check_k(wavenumber, &mut v);
            }
            Profile::LinearVelocity { tau, slope, offset } => {
                if !(tau > 0.0) {
                    v.push(format!("tau must be positive, got {tau}"));
                }
                if !(slope.is_finite() && offset.is_finite()) {
                    v.push("slope and offset must be finite".into());
                }
                if periodic {
                    v.push("linear_velocity needs constant_extrapolation boundaries".into());
                }
            }
        }
        if v.is_empty() {
            Ok(())
        } else {
            Err(bad(v.join("; ")))
        }
    }

    /// `(tau0(x), u0(x))`.
    pub fn sample(&self, params: &GasParams, grid: &Grid1D, x: f64) -> Result<(f64, f64)> {
        let s = x - grid.x_min;
        let out = match *self {
            Profile::Constant { tau, u } => (tau, u),
            Profile::Sine { tau_mean, tau_amp, u_amp, wavenumber: k } => {
                (tau_mean + tau_amp * (k * s).cos(), u_amp * (k * s).sin())
            }
            Profile::CompressionPulse { tau_mean, slope, width, x0 } => {
                (tau_mean, slope * width * ((x - x0) / width).tanh())
            }
            Profile::SimpleWave { tau_mean, amp, wavenumber: k } => {
                let bar = params.phi_of_tau(tau_mean)?;
                let phi = bar + amp * (k * s).sin();
                (params.tau_of_phi(phi)?, phi - bar)
            }
            Profile::LinearVelocity { tau, slope, offset } => (tau, slope * x + offset),
        };
        Ok(out)
    }

    /// Point where slopes are compared with thresholds.
    pub fn marked_point(&self, grid: &Grid1D) -> f64 {
        match *self {
            Profile::CompressionPulse { x0, .. } => x0,
            _ => 0.5 * (grid.x_min + grid.x_max),
        }
    }
}

/// Central-difference step used for profile derivatives.
fn fd_step(grid: &Grid1D) -> f64 {
    1e-6 * grid.length()
}

/// Samples the profile at cell centers and measures the data constants.
///
/// `params.c0` is ignored here; the report carries the achieved bound.
pub fn initialize(profile: &Profile, params: &GasParams, grid: &Grid1D) -> Result<(FlowState, InitialReport)> {
    grid.validate()?;
    profile.validate(grid)?;
    let mut tau = Vec::with_capacity(grid.n_cells);
    let mut u = Vec::with_capacity(grid.n_cells);
    for x in grid.centers() {
        let (t, v) = profile.sample(params, grid, x)?;
        if !(t > 0.0) {
            return Err(Error::Domain { what: "tau0", value: t });
        }
        tau.push(t);
        u.push(v);
    }
    let state = FlowState::new(0.0, tau, u)?;

    // sup norms on a grid 16 times finer than the cells
    let h = fd_step(grid);
    let fine = 16 * grid.n_cells;
    let (mut sup_tau, mut sup_u, mut inf_tau, mut sup_dtau, mut sup_du) = (0.0f64, 0.0f64, f64::INFINITY, 0.0f64, 0.0f64);
    for i in 0..=fine {
        let x = grid.x_min + grid.length() * i as f64 / fine as f64;
        let (t, v) = profile.sample(params, grid, x)?;
        let (tp, vp) = profile.sample(params, grid, x + h)?;
        let (tm, vm) = profile.sample(params, grid, x - h)?;
        sup_tau = sup_tau.max(t.abs());
        sup_u = sup_u.max(v.abs());
        inf_tau = inf_tau.min(t);
        sup_dtau = sup_dtau.max(((tp - tm) / (2.0 * h)).abs());
        sup_du = sup_du.max(((vp - vm) / (2.0 * h)).abs());
    }
    let mut c0 = sup_tau.max(sup_u).max(1.0 / inf_tau);
    if params.regime() != GammaRegime::GammaAbove3 {
        c0 = c0.max(sup_dtau).max(sup_du);
    }

    let x0 = profile.marked_point(grid);
    let (tau0, _) = profile.sample(params, grid, x0)?;
    let phi_at = |x: f64| -> Result<f64> { params.phi_of_tau(profile.sample(params, grid, x)?.0) };
    let u_at = |x: f64| -> Result<f64> { Ok(profile.sample(params, grid, x)?.1) };
    let phi0 = params.phi_of_tau(tau0)?;
    let u_x0 = (u_at(x0 + h)? - u_at(x0 - h)?) / (2.0 * h);
    let phi_x0 = (phi_at(x0 + h)? - phi_at(x0 - h)?) / (2.0 * h);
    let report = InitialReport {
        achieved_c0: STRICT_MARGIN * c0,
        x0,
        tau0,
        phi0,
        u_x0,
        phi_x0,
        w_x0: u_x0 + phi_x0,
        z_x0: u_x0 - phi_x0,
        proxy0: gradient_proxy(&state, params, grid),
        mass0: state.mass(grid),
    };
    Ok((state, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn params() -> GasParams {
        GasParams::new(2.0, 0.125, 0.5, 0.5, 1.0).unwrap()
    }

    #[test]
    fn constant_profile_zero_gradient() {
        let g = Grid1D::new(0.0, 1.0, 32, Boundary::Periodic).unwrap();
        let (s, r) = initialize(&Profile::Constant { tau: 1.0, u: 0.0 }, &params(), &g).unwrap();
        assert!(s.tau.iter().all(|&t| t == 1.0));
        assert_eq!(r.proxy0, 0.0);
        assert_eq!(r.w_x0, 0.0);
        assert!((r.achieved_c0 - 1.01).abs() < 1e-15);
    }

    #[test]
    fn pulse_slope_at_marked_point() {
        let g = Grid1D::new(-4.0, 4.0, 400, Boundary::ConstantExtrapolation).unwrap();
        let p = Profile::CompressionPulse { tau_mean: 1.0, slope: -1.5, width: 0.5, x0: 0.0 };
        let (s, r) = initialize(&p, &params(), &g).unwrap();
        assert!((r.u_x0 + 1.5).abs() < 1e-8);
        // the discrete slope at x0 from the two straddling cells
        let dx = g.dx();
        let fd = (s.u[200] - s.u[199]) / dx;
        assert!((fd + 1.5).abs() < 2.0 * dx * dx * 1.5 / (0.5 * 0.5), "{fd}");
        assert!((r.achieved_c0 - 1.01 * 1.5).abs() < 1e-6);
    }

    #[test]
    fn sine_mass_matches_mean() {
        let g = Grid1D::new(0.0, 2.0, 64, Boundary::Periodic).unwrap();
        let p = Profile::Sine { tau_mean: 1.3, tau_amp: 0.2, u_amp: 0.1, wavenumber: 2.0 * PI };
        let (s, _) = initialize(&p, &params(), &g).unwrap();
        assert!((s.mass(&g) - 2.6).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_profiles() {
        let g = Grid1D::new(0.0, 1.0, 32, Boundary::Periodic).unwrap();
        let e = initialize(&Profile::Constant { tau: -1.0, u: 0.0 }, &params(), &g).unwrap_err();
        assert!(e.to_string().contains("tau"));
        let p = Profile::Sine { tau_mean: 1.0, tau_amp: 0.0, u_amp: 0.1, wavenumber: 3.0 };
        assert!(initialize(&p, &params(), &g).is_err());
    }

    #[test]
    fn simple_wave_has_constant_z() {
        let g = Grid1D::new(0.0, 1.0, 64, Boundary::Periodic).unwrap();
        let p = Profile::SimpleWave { tau_mean: 1.0, amp: 0.05, wavenumber: 2.0 * PI };
        let (s, r) = initialize(&p, &params(), &g).unwrap();
        let (_, z) = s.riemann(&params());
        assert!(z.iter().all(|&v| (v - z[0]).abs() < 1e-13));
        assert!(r.z_x0.abs() < 1e-6);
    }
}
