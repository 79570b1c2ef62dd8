//! One time step: Rusanov flux with minmod-limited linear reconstruction,
//! SSP-RK2 in time, and Strang splitting of the damping source.

use super::{Boundary, FlowState, Grid1D};
use crate::error::{Error, Result};
use crate::gas::{pow_pos, GasParams};

/// Largest admissible CFL number.
pub const CFL_LIMIT: f64 = 0.45;
const GHOST: usize = 2;

/// Exact factor by which the source ODE `u' = -alpha (1+t)^{-lambda} u`
/// scales `u` between `t_prev` and `t`.
pub fn damping_factor(params: &GasParams, t_prev: f64, t: f64) -> f64 {
    let (a, l) = (params.alpha, params.lambda);
    if a == 0.0 {
        return 1.0;
    }
    if l == 1.0 {
        pow_pos((1.0 + t) / (1.0 + t_prev), -a)
    } else {
        let d = pow_pos(1.0 + t, 1.0 - l) - pow_pos(1.0 + t_prev, 1.0 - l);
        (-a * d / (1.0 - l)).exp()
    }
}

fn max_sound_speed(params: &GasParams, tau: &[f64]) -> f64 {
    // c decreases in tau, so the smallest tau carries the largest speed
    let tmin = tau.iter().copied().fold(f64::INFINITY, f64::min);
    params.sound_speed(tmin).unwrap_or(f64::INFINITY)
}

/// Time step with the given CFL number on the current state.
pub fn stable_dt(state: &FlowState, params: &GasParams, grid: &Grid1D, cfl: f64) -> f64 {
    cfl * grid.dx() / max_sound_speed(params, &state.tau)
}

fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

fn with_ghosts(grid: &Grid1D, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mut g = Vec::with_capacity(n + 2 * GHOST);
    for k in (1..=GHOST).rev() {
        g.push(match grid.boundary {
            Boundary::Periodic => f[n - k],
            Boundary::ConstantExtrapolation => f[0],
        });
    }
    g.extend_from_slice(f);
    for k in 0..GHOST {
        g.push(match grid.boundary {
            Boundary::Periodic => f[k],
            Boundary::ConstantExtrapolation => f[n - 1],
        });
    }
    g
}

/// Semi-discrete right side `-(F_{i+1/2} - F_{i-1/2}) / dx` for `(tau, u)`.
fn flux_divergence(params: &GasParams, grid: &Grid1D, tau: &[f64], u: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = tau.len();
    let gt = with_ghosts(grid, tau);
    let gu = with_ghosts(grid, u);
    let m = gt.len();
    let mut st = vec![0.0; m];
    let mut su = vec![0.0; m];
    for i in 1..m - 1 {
        st[i] = minmod(gt[i] - gt[i - 1], gt[i + 1] - gt[i]);
        su[i] = minmod(gu[i] - gu[i - 1], gu[i + 1] - gu[i]);
    }
    // faces between ghost-padded cells j and j+1, j = GHOST-1 ..= GHOST+n-1
    let mut ft = vec![0.0; n + 1];
    let mut fu = vec![0.0; n + 1];
    for (f, j) in (GHOST - 1..GHOST + n).enumerate() {
        let tl = gt[j] + 0.5 * st[j];
        let tr = gt[j + 1] - 0.5 * st[j + 1];
        let ul = gu[j] + 0.5 * su[j];
        let ur = gu[j + 1] - 0.5 * su[j + 1];
        if !(tl > 0.0 && tr > 0.0) {
            return Err(Error::Vacuum { cell: f.min(n - 1), t: f64::NAN, tau: tl.min(tr) });
        }
        let (pl, pr) = (params.pressure(tl)?, params.pressure(tr)?);
        let a = params.sound_speed(tl)?.max(params.sound_speed(tr)?);
        ft[f] = 0.5 * (-ul - ur) - 0.5 * a * (tr - tl);
        fu[f] = 0.5 * (pl + pr) - 0.5 * a * (ur - ul);
    }
    let dx = grid.dx();
    let dt: Vec<f64> = (0..n).map(|i| -(ft[i + 1] - ft[i]) / dx).collect();
    let du: Vec<f64> = (0..n).map(|i| -(fu[i + 1] - fu[i]) / dx).collect();
    Ok((dt, du))
}

fn check(tau: &[f64], u: &[f64], t: f64) -> Result<()> {
    for (cell, (&a, &b)) in tau.iter().zip(u).enumerate() {
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::Vacuum { cell, t, tau: a });
        }
        if !b.is_finite() {
            return Err(Error::NonFinite("velocity"));
        }
    }
    Ok(())
}

/// Advances `state` by `dt`. Fails if `dt` exceeds the CFL limit on the
/// current state or if any cell reaches vacuum.
pub fn step(state: &FlowState, params: &GasParams, grid: &Grid1D, dt: f64) -> Result<FlowState> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Domain { what: "dt", value: dt });
    }
    let cfl = dt * max_sound_speed(params, &state.tau) / grid.dx();
    if cfl > CFL_LIMIT * (1.0 + 1e-12) {
        return Err(Error::Cfl { cfl, limit: CFL_LIMIT });
    }
    let t0 = state.t;
    let th = t0 + 0.5 * dt;
    let t1 = t0 + dt;
    let tag = |e: Error| match e {
        Error::Vacuum { cell, tau, .. } => Error::Vacuum { cell, t: t1, tau },
        other => other,
    };

    let f = damping_factor(params, t0, th);
    let tau0 = state.tau.clone();
    let u0: Vec<f64> = state.u.iter().map(|v| v * f).collect();

    let (dt1, du1) = flux_divergence(params, grid, &tau0, &u0).map_err(tag)?;
    let tau1: Vec<f64> = tau0.iter().zip(&dt1).map(|(a, b)| a + dt * b).collect();
    let u1: Vec<f64> = u0.iter().zip(&du1).map(|(a, b)| a + dt * b).collect();
    check(&tau1, &u1, t1)?;
    let (dt2, du2) = flux_divergence(params, grid, &tau1, &u1).map_err(tag)?;
    let tau2: Vec<f64> = (0..tau0.len()).map(|i| 0.5 * tau0[i] + 0.5 * (tau1[i] + dt * dt2[i])).collect();
    let f2 = damping_factor(params, th, t1);
    let u2: Vec<f64> = (0..u0.len()).map(|i| (0.5 * u0[i] + 0.5 * (u1[i] + dt * du2[i])) * f2).collect();
    check(&tau2, &u2, t1)?;
    Ok(FlowState { t: t1, tau: tau2, u: u2 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, lambda: f64) -> GasParams {
        GasParams::new(2.0, 0.125, alpha, lambda, 1.0).unwrap()
    }

    #[test]
    fn constant_state_fixed_point() {
        let p = params(0.7, -0.5);
        let g = Grid1D::new(0.0, 1.0, 32, Boundary::Periodic).unwrap();
        let mut s = FlowState::new(0.0, vec![1.2; 32], vec![0.0; 32]).unwrap();
        for _ in 0..20 {
            let dt = stable_dt(&s, &p, &g, CFL_LIMIT);
            s = step(&s, &p, &g, dt).unwrap();
        }
        assert!(s.tau.iter().all(|&t| t == 1.2));
        assert!(s.u.iter().all(|&u| u == 0.0));
    }

    #[test]
    fn uniform_flow_decays_exactly() {
        for (alpha, lambda) in [(0.5, 0.5), (0.3, -1.0), (0.8, 1.0), (0.4, 2.0)] {
            let p = params(alpha, lambda);
            let g = Grid1D::new(0.0, 1.0, 16, Boundary::Periodic).unwrap();
            let mut s = FlowState::new(0.0, vec![1.0; 16], vec![0.6; 16]).unwrap();
            while s.t < 1.0 {
                let dt = stable_dt(&s, &p, &g, CFL_LIMIT).min(1.0 - s.t);
                s = step(&s, &p, &g, dt).unwrap();
            }
            let exact = 0.6 * damping_factor(&p, 0.0, s.t);
            for &u in &s.u {
                assert!((u - exact).abs() < 1e-10 * exact, "{alpha} {lambda}");
            }
            assert!(s.tau.iter().all(|&t| t == 1.0));
        }
    }

    #[test]
    fn damping_factor_closed_forms() {
        let p = params(0.5, 0.5);
        let expect = (-0.5 * (2f64.sqrt() - 1.0) / 0.5).exp();
        assert!((damping_factor(&p, 0.0, 1.0) - expect).abs() < 1e-15);
        let p1 = params(2.0, 1.0);
        assert!((damping_factor(&p1, 0.0, 1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn cfl_violation_rejected() {
        let p = params(0.0, 0.0);
        let g = Grid1D::new(0.0, 1.0, 32, Boundary::Periodic).unwrap();
        let s = FlowState::new(0.0, vec![1.0; 32], vec![0.0; 32]).unwrap();
        let dt = stable_dt(&s, &p, &g, 0.9);
        assert!(matches!(step(&s, &p, &g, dt), Err(Error::Cfl { .. })));
    }

    #[test]
    fn periodic_mass_conserved() {
        let p = params(0.5, 0.0);
        let g = Grid1D::new(0.0, 1.0, 64, Boundary::Periodic).unwrap();
        let k = 2.0 * std::f64::consts::PI;
        let tau: Vec<f64> = g.centers().iter().map(|&x| 1.0 + 0.2 * (k * x).cos()).collect();
        let u: Vec<f64> = g.centers().iter().map(|&x| 0.3 * (k * x).sin()).collect();
        let mut s = FlowState::new(0.0, tau, u).unwrap();
        let m0 = s.mass(&g);
        for _ in 0..200 {
            let dt = stable_dt(&s, &p, &g, CFL_LIMIT);
            s = step(&s, &p, &g, dt).unwrap();
        }
        assert!(((s.mass(&g) - m0) / m0).abs() < 1e-13);
    }
}
