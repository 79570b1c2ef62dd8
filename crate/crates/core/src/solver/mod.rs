//! Finite-volume solver for the damped p-system in mass coordinates,
//!
//! ```text
//! tau_t - u_x = 0,   u_t + p(tau)_x = -alpha (1+t)^{-lambda} u,
//! ```
//!
//! with gradient reconstruction and characteristic tracing through the
//! computed snapshots.

pub mod characteristic;
pub mod profile;
pub mod run;
pub mod scheme;
pub mod state;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use characteristic::{trace_characteristic, CharacteristicPath, Family, PathSample};
pub use profile::{initialize, InitialReport, Profile};
pub use run::{run, Event, EventKind, RunOptions, RunSeries};
pub use scheme::{damping_factor, stable_dt, step, CFL_LIMIT};
pub use state::{gradient_proxy, FlowState, StateFields};

pub const MIN_CELLS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Boundary {
    Periodic,
    ConstantExtrapolation,
}

/// Uniform cell-centered grid on `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid1D {
    pub x_min: f64,
    pub x_max: f64,
    pub n_cells: usize,
    pub boundary: Boundary,
}

impl Grid1D {
    pub fn new(x_min: f64, x_max: f64, n_cells: usize, boundary: Boundary) -> Result<Self> {
        let g = Self { x_min, x_max, n_cells, boundary };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.x_min.is_finite() && self.x_max.is_finite() && self.x_max > self.x_min) {
            bad.push(format!("x_max ({}) must exceed x_min ({})", self.x_max, self.x_min));
        }
        if self.n_cells < MIN_CELLS {
            bad.push(format!("n_cells must be at least {MIN_CELLS}, got {}", self.n_cells));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(bad.join("; ")))
        }
    }

    pub fn length(&self) -> f64 {
        self.x_max - self.x_min
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n_cells as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n_cells).map(|i| self.center(i)).collect()
    }

    /// Same domain with `factor` times as many cells.
    pub fn refined(&self, factor: usize) -> Self {
        Self { n_cells: self.n_cells * factor, ..*self }
    }

    /// Maps `x` into the periodic domain; identity for other boundaries.
    pub fn wrap(&self, x: f64) -> f64 {
        match self.boundary {
            Boundary::Periodic => self.x_min + (x - self.x_min).rem_euclid(self.length()),
            Boundary::ConstantExtrapolation => x,
        }
    }

    /// Linear interpolation of a cell-centered field at `x`.
    ///
    /// Periodic grids wrap; otherwise values beyond the outermost centers are
    /// held constant. Returns `None` outside `[x_min, x_max]` on non-periodic
    /// grids.
    pub fn interpolate(&self, field: &[f64], x: f64) -> Option<f64> {
        let n = self.n_cells;
        let x = self.wrap(x);
        if self.boundary == Boundary::ConstantExtrapolation && !(x >= self.x_min && x <= self.x_max) {
            return None;
        }
        let s = (x - self.x_min) / self.dx() - 0.5;
        let i0 = s.floor();
        let frac = s - i0;
        let i0 = i0 as isize;
        let at = |i: isize| -> f64 {
            match self.boundary {
                Boundary::Periodic => field[i.rem_euclid(n as isize) as usize],
                Boundary::ConstantExtrapolation => field[i.clamp(0, n as isize - 1) as usize],
            }
        };
        Some((1.0 - frac) * at(i0) + frac * at(i0 + 1))
    }
}
