//! Flow snapshots and the fields derived from them.

use serde::{Deserialize, Serialize};

use super::{Boundary, Grid1D};
use crate::error::{Error, Result};
use crate::gas::GasParams;

/// Cell values of `(tau, u)` at time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowState {
    pub t: f64,
    pub tau: Vec<f64>,
    pub u: Vec<f64>,
}

/// Per-cell derived quantities; `a = w_x`, `b = z_x` at cell centers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StateFields {
    pub rho: Vec<f64>,
    pub p: Vec<f64>,
    pub c: Vec<f64>,
    pub phi: Vec<f64>,
    pub w: Vec<f64>,
    pub z: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// Central differences in the interior, one-sided at non-periodic ends.
pub fn cell_gradient(grid: &Grid1D, f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let dx = grid.dx();
    (0..n)
        .map(|i| match grid.boundary {
            Boundary::Periodic => (f[(i + 1) % n] - f[(i + n - 1) % n]) / (2.0 * dx),
            Boundary::ConstantExtrapolation => {
                if i == 0 {
                    (f[1] - f[0]) / dx
                } else if i == n - 1 {
                    (f[n - 1] - f[n - 2]) / dx
                } else {
                    (f[i + 1] - f[i - 1]) / (2.0 * dx)
                }
            }
        })
        .collect()
}

impl FlowState {
    pub fn new(t: f64, tau: Vec<f64>, u: Vec<f64>) -> Result<Self> {
        if tau.len() != u.len() {
            return Err(Error::InvalidParams(format!(
                "tau has {} cells but u has {}",
                tau.len(),
                u.len()
            )));
        }
        let s = Self { t, tau, u };
        s.check_positive()?;
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.tau.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tau.is_empty()
    }

    /// Vacuum abort: every `tau` must be finite and positive, every `u` finite.
    pub fn check_positive(&self) -> Result<()> {
        for (cell, (&tau, &u)) in self.tau.iter().zip(&self.u).enumerate() {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(Error::Vacuum { cell, t: self.t, tau });
            }
            if !u.is_finite() {
                return Err(Error::NonFinite("velocity"));
            }
        }
        Ok(())
    }

    /// `phi(tau)` per cell.
    pub fn phi(&self, params: &GasParams) -> Vec<f64> {
        self.tau.iter().map(|&t| params.phi_of_tau(t).unwrap_or(f64::NAN)).collect()
    }

    /// Riemann invariants `(w, z)` per cell.
    pub fn riemann(&self, params: &GasParams) -> (Vec<f64>, Vec<f64>) {
        let phi = self.phi(params);
        let w = self.u.iter().zip(&phi).map(|(u, f)| u + f).collect();
        let z = self.u.iter().zip(&phi).map(|(u, f)| u - f).collect();
        (w, z)
    }

    pub fn fields(&self, params: &GasParams, grid: &Grid1D) -> StateFields {
        let phi = self.phi(params);
        let (w, z) = self.riemann(params);
        let a = cell_gradient(grid, &w);
        let b = cell_gradient(grid, &z);
        StateFields {
            rho: self.tau.iter().map(|t| 1.0 / t).collect(),
            p: self.tau.iter().map(|&t| params.pressure(t).unwrap_or(f64::NAN)).collect(),
            c: self.tau.iter().map(|&t| params.sound_speed(t).unwrap_or(f64::NAN)).collect(),
            phi,
            w,
            z,
            a,
            b,
        }
    }

    /// `int tau dx` by the midpoint rule.
    pub fn mass(&self, grid: &Grid1D) -> f64 {
        self.tau.iter().sum::<f64>() * grid.dx()
    }

    /// `int u dx` by the midpoint rule.
    pub fn momentum(&self, grid: &Grid1D) -> f64 {
        self.u.iter().sum::<f64>() * grid.dx()
    }
}

/// Largest face difference quotient of `w` or `z`.
pub fn gradient_proxy(state: &FlowState, params: &GasParams, grid: &Grid1D) -> f64 {
    let (w, z) = state.riemann(params);
    let n = w.len();
    let faces = match grid.boundary {
        Boundary::Periodic => n,
        Boundary::ConstantExtrapolation => n - 1,
    };
    let mut m = 0.0f64;
    for i in 0..faces {
        let j = (i + 1) % n;
        m = m.max((w[j] - w[i]).abs()).max((z[j] - z[i]).abs());
    }
    m / grid.dx()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (GasParams, Grid1D) {
        (
            GasParams::new(2.0, 0.125, 0.5, 0.5, 1.0).unwrap(),
            Grid1D::new(0.0, 1.0, 64, Boundary::Periodic).unwrap(),
        )
    }

    #[test]
    fn constant_state_has_zero_gradients() {
        let (p, g) = setup();
        let s = FlowState::new(0.0, vec![1.0; 64], vec![0.0; 64]).unwrap();
        let f = s.fields(&p, &g);
        assert!(f.a.iter().chain(&f.b).all(|&v| v == 0.0));
        assert_eq!(gradient_proxy(&s, &p, &g), 0.0);
    }

    #[test]
    fn sine_proxy_matches_derivative() {
        let (p, _) = setup();
        let g = Grid1D::new(0.0, 1.0, 1024, Boundary::Periodic).unwrap();
        let k = 2.0 * std::f64::consts::PI;
        let u: Vec<f64> = g.centers().iter().map(|&x| 0.3 * (k * x).sin()).collect();
        let s = FlowState::new(0.0, vec![1.0; 1024], u).unwrap();
        let proxy = gradient_proxy(&s, &p, &g);
        assert!((proxy - 0.3 * k).abs() < 1e-4, "{proxy}");
    }

    #[test]
    fn proxy_translation_invariant() {
        let (p, g) = setup();
        let u: Vec<f64> = (0..64).map(|i| ((i * i) % 7) as f64 * 0.1).collect();
        let mut shifted = u.clone();
        shifted.rotate_left(5);
        let a = FlowState::new(0.0, vec![1.0; 64], u).unwrap();
        let b = FlowState::new(0.0, vec![1.0; 64], shifted).unwrap();
        assert_eq!(gradient_proxy(&a, &p, &g), gradient_proxy(&b, &p, &g));
    }

    #[test]
    fn vacuum_rejected() {
        let e = FlowState::new(0.5, vec![1.0, -0.1], vec![0.0, 0.0]).unwrap_err();
        assert!(matches!(e, Error::Vacuum { cell: 1, .. }));
    }
}
