//! Polytropic gas in Lagrangian coordinates.
//!
//! Every thermodynamic symbol lives here: pressure `p = K tau^-gamma`, the
//! Lagrangian sound speed `c = sqrt(-p_tau)`, the integrated sound speed
//! `phi = int_tau^inf c`, the Riemann invariants `w = u + phi`, `z = u - phi`
//! and the constants `K_tau`, `K_p`, `K_c` that recode `tau`, `p`, `c` as
//! powers of `phi`.
//!
//! Non-integer powers go through [`pow_pos`] so that tiny bases (deep density
//! floors) underflow as late as possible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `base^exponent` for a positive base, evaluated as `exp(exponent * ln base)`.
#[inline]
pub fn pow_pos(base: f64, exponent: f64) -> f64 {
    (exponent * base.ln()).exp()
}

/// Which closed forms apply. `gamma == 3` is matched exactly, never by tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaRegime {
    GammaBelow3,
    GammaAbove3,
    GammaEq3,
}

/// Gas and damping parameters.
///
/// `c0` is the initial-data bound: `|u0|, |tau0|` (and, for `gamma <= 3`, their
/// first derivatives) stay below it and `tau0 > 1/c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GasParams {
    pub gamma: f64,
    #[serde(rename = "K")]
    pub k: f64,
    pub alpha: f64,
    pub lambda: f64,
    #[serde(rename = "C0")]
    pub c0: f64,
}

/// Margin applied to strict lower bounds (`C~0`, `M`, the achieved `C0`).
pub const STRICT_MARGIN: f64 = 1.01;

impl GasParams {
    pub fn new(gamma: f64, k: f64, alpha: f64, lambda: f64, c0: f64) -> Result<Self> {
        let p = Self { gamma, k, alpha, lambda, c0 };
        p.validate()?;
        Ok(p)
    }

    /// `K` for which `2 sqrt(K gamma) / (gamma - 1) = 1`, i.e. `K_tau = 1` and
    /// `phi = tau^{-(gamma-1)/2}`. Under this normalisation the uniform bounds
    /// on `u` and `tau` hold in the form used by [`GasParams::c_tilde0`].
    pub fn normalized_k(gamma: f64) -> f64 {
        (gamma - 1.0).powi(2) / (4.0 * gamma)
    }

    pub fn validate(&self) -> Result<()> {
        let mut bad = Vec::new();
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            bad.push(format!("gamma must be > 1 (got {})", self.gamma));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            bad.push(format!("K must be > 0 (got {})", self.k));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            bad.push(format!("alpha must be >= 0 (got {})", self.alpha));
        }
        if !self.lambda.is_finite() {
            bad.push(format!("lambda must be finite (got {})", self.lambda));
        }
        if !(self.c0 > 0.0 && self.c0.is_finite()) {
            bad.push(format!("C0 must be > 0 (got {})", self.c0));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams(bad.join("; ")))
        }
    }

    pub fn regime(&self) -> GammaRegime {
        if self.gamma == 3.0 {
            GammaRegime::GammaEq3
        } else if self.gamma < 3.0 {
            GammaRegime::GammaBelow3
        } else {
            GammaRegime::GammaAbove3
        }
    }

    pub fn is_gamma3(&self) -> bool {
        self.regime() == GammaRegime::GammaEq3
    }

    /// `2 sqrt(K gamma) / (gamma - 1)`, the prefactor of `phi`.
    pub fn phi_prefactor(&self) -> f64 {
        2.0 * (self.k * self.gamma).sqrt() / (self.gamma - 1.0)
    }

    pub fn k_tau(&self) -> f64 {
        if self.is_gamma3() {
            (3.0 * self.k).sqrt()
        } else {
            pow_pos(self.phi_prefactor(), 2.0 / (self.gamma - 1.0))
        }
    }

    /// `K_p = K K_tau^-gamma`, the constant making `p = K_p phi^{2 gamma/(gamma-1)}`.
    pub fn k_p(&self) -> f64 {
        self.k * pow_pos(self.k_tau(), -self.gamma)
    }

    pub fn k_c(&self) -> f64 {
        if self.is_gamma3() {
            1.0 / (3.0 * self.k).sqrt()
        } else {
            (self.k * self.gamma).sqrt() * pow_pos(self.k_tau(), -(self.gamma + 1.0) / 2.0)
        }
    }

    /// Critical damping exponent `alpha (gamma-1) / (gamma-3)` separating the
    /// sign patterns of the Riccati forcing. Undefined for `gamma = 3`.
    pub fn lambda_crit(&self) -> Option<f64> {
        (!self.is_gamma3()).then(|| self.alpha * (self.gamma - 1.0) / (self.gamma - 3.0))
    }

    /// Uniform bound `C~0` on `|u|` and `1/tau`, taken as a fixed margin above
    /// `max{C0 + C0^{(g-1)/2}, (C0 + C0^{(g-1)/2})^{2/(g-1)}}`.
    pub fn c_tilde0(&self) -> f64 {
        STRICT_MARGIN * self.c_tilde0_floor()
    }

    /// The strict lower limit for `C~0`.
    pub fn c_tilde0_floor(&self) -> f64 {
        let s = self.c0 + pow_pos(self.c0, (self.gamma - 1.0) / 2.0);
        s.max(pow_pos(s, 2.0 / (self.gamma - 1.0)))
    }

    pub fn pressure(&self, tau: f64) -> Result<f64> {
        check_pos("tau", tau)?;
        Ok(self.k * pow_pos(tau, -self.gamma))
    }

    pub fn sound_speed(&self, tau: f64) -> Result<f64> {
        check_pos("tau", tau)?;
        Ok((self.k * self.gamma).sqrt() * pow_pos(tau, -(self.gamma + 1.0) / 2.0))
    }

    /// Sound speed through the `phi` recoding, `c = K_c phi^{(g+1)/(g-1)}`.
    pub fn sound_speed_of_phi(&self, phi: f64) -> Result<f64> {
        check_pos("phi", phi)?;
        Ok(self.k_c() * pow_pos(phi, (self.gamma + 1.0) / (self.gamma - 1.0)))
    }

    pub fn phi_of_tau(&self, tau: f64) -> Result<f64> {
        check_pos("tau", tau)?;
        if self.is_gamma3() {
            Ok((3.0 * self.k).sqrt() / tau)
        } else {
            Ok(self.phi_prefactor() * pow_pos(tau, -(self.gamma - 1.0) / 2.0))
        }
    }

    pub fn tau_of_phi(&self, phi: f64) -> Result<f64> {
        check_pos("phi", phi)?;
        Ok(self.k_tau() * pow_pos(phi, -2.0 / (self.gamma - 1.0)))
    }

    pub fn thermo_point(&self, tau: f64, u: f64) -> Result<ThermoPoint> {
        check_pos("tau", tau)?;
        let phi = self.phi_of_tau(tau)?;
        Ok(ThermoPoint {
            tau,
            u,
            rho: 1.0 / tau,
            p: self.pressure(tau)?,
            c: self.sound_speed(tau)?,
            phi,
            w: u + phi,
            z: u - phi,
        })
    }

    /// `h(tau) = int_0^tau c^{1/2}` for `gamma != 3`.
    pub fn control_h(&self, tau: f64) -> f64 {
        4.0 * (self.k * self.gamma).powf(0.25) / (3.0 - self.gamma)
            * pow_pos(tau, (3.0 - self.gamma) / 4.0)
    }

    /// `h1(tau) = int_{1/C~0}^tau c^{1/2} = (3K)^{1/4} ln(C~0 tau)` for `gamma = 3`.
    pub fn control_h1(&self, tau: f64) -> f64 {
        (3.0 * self.k).powf(0.25) * (self.c_tilde0() * tau).ln()
    }

    /// The control antiderivative used by `G`, `H`: `h` or `h1` by regime.
    pub fn control(&self, tau: f64) -> f64 {
        if self.is_gamma3() {
            self.control_h1(tau)
        } else {
            self.control_h(tau)
        }
    }
}

fn check_pos(what: &'static str, value: f64) -> Result<()> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}

/// State at a point with every derived thermodynamic quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermoPoint {
    pub tau: f64,
    pub u: f64,
    pub rho: f64,
    pub p: f64,
    pub c: f64,
    pub phi: f64,
    pub w: f64,
    pub z: f64,
}

impl ThermoPoint {
    pub fn riemann_invariants(&self) -> (f64, f64) {
        (self.w, self.z)
    }
}

/// `(w, z) = (u + phi, u - phi)`.
pub fn riemann_invariants(u: f64, phi: f64) -> (f64, f64) {
    (u + phi, u - phi)
}

/// Inverse of [`riemann_invariants`]: `(u, phi)`.
pub fn from_riemann_invariants(w: f64, z: f64) -> (f64, f64) {
    (0.5 * (w + z), 0.5 * (w - z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gas(gamma: f64, k: f64) -> GasParams {
        GasParams::new(gamma, k, 0.0, 0.0, 1.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn pressure_examples() {
        assert_eq!(gas(2.0, 1.0).pressure(1.0).unwrap(), 1.0);
        assert!(rel(gas(2.0, 1.0).pressure(0.5).unwrap(), 4.0) < 1e-14);
        assert!(rel(gas(5.0, 3.0).pressure(1.0).unwrap(), 3.0) < 1e-14);
        assert!(matches!(gas(2.0, 1.0).pressure(0.0), Err(Error::Domain { .. })));
        assert!(gas(2.0, 1.0).pressure(-1.0).is_err());
    }

    #[test]
    fn sound_speed_examples() {
        for g in [1.4, 2.0, 3.0, 5.0] {
            assert!(rel(gas(g, 1.0 / g).sound_speed(1.0).unwrap(), 1.0) < 1e-14);
        }
        assert!(rel(gas(3.0, 1.0 / 3.0).sound_speed(4.0).unwrap(), 1.0 / 16.0) < 1e-14);
        let g = gas(2.0, 1.0);
        for tau in [0.5, 1.0, 2.0] {
            let via_phi = g.sound_speed_of_phi(g.phi_of_tau(tau).unwrap()).unwrap();
            assert!(rel(g.sound_speed(tau).unwrap(), via_phi) < 1e-12);
        }
    }

    #[test]
    fn phi_examples() {
        let g = gas(3.0, 1.0 / 3.0);
        assert!(rel(g.phi_of_tau(1.0).unwrap(), 1.0) < 1e-15);
        assert!(rel(g.phi_of_tau(2.0).unwrap(), 0.5) < 1e-15);
        assert!(g.phi_of_tau(0.0).is_err());
        assert!(g.tau_of_phi(-1.0).is_err());
        for gamma in [1.4, 2.0, 3.0, 5.0] {
            let g = gas(gamma, 0.7);
            for x in [1e-3, 1.0, 1e3] {
                let back = g.tau_of_phi(g.phi_of_tau(x).unwrap()).unwrap();
                assert!(rel(back, x) < 1e-12, "gamma {gamma} x {x}");
            }
        }
    }

    #[test]
    fn gamma3_constants() {
        let g = gas(3.0, 1.0 / 3.0);
        assert_eq!(g.regime(), GammaRegime::GammaEq3);
        assert!(rel(g.k_c(), 1.0) < 1e-15);
        assert!(rel(gas(3.0, 0.5).k_c(), 1.0 / 1.5f64.sqrt()) < 1e-15);
        // exact equality only
        assert_eq!(gas(3.0 + 1e-12, 1.0).regime(), GammaRegime::GammaAbove3);
        assert_eq!(gas(3.0 - 1e-12, 1.0).regime(), GammaRegime::GammaBelow3);
    }

    #[test]
    fn pressure_via_phi() {
        let g = gas(1.4, 2.5);
        for tau in [0.1, 1.0, 7.0] {
            let phi = g.phi_of_tau(tau).unwrap();
            let p = g.k_p() * pow_pos(phi, 2.0 * g.gamma / (g.gamma - 1.0));
            assert!(rel(p, g.pressure(tau).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn riemann_examples() {
        let g = gas(3.0, 1.0 / 3.0);
        let pt = g.thermo_point(1.0, 0.0).unwrap();
        assert_eq!(pt.riemann_invariants(), (1.0, -1.0));
        assert_eq!(riemann_invariants(2.0, 0.5), (2.5, 1.5));
    }

    #[test]
    fn c_tilde0_examples() {
        let g3 = GasParams::new(3.0, 1.0 / 3.0, 0.0, 0.0, 1.0).unwrap();
        assert!(rel(g3.c_tilde0(), 2.02) < 1e-14);
        let g2 = GasParams::new(2.0, 0.125, 0.0, 0.0, 1.0).unwrap();
        assert!(rel(g2.c_tilde0(), 4.04) < 1e-14);
        assert!(g2.c_tilde0() > g2.c_tilde0_floor());
    }

    #[test]
    fn invalid_params_list_every_violation() {
        let e = GasParams::new(0.5, -1.0, -2.0, 0.0, 0.0).unwrap_err();
        let Error::InvalidParams(msg) = e else { panic!() };
        for key in ["gamma", "K", "alpha", "C0"] {
            assert!(msg.contains(key), "{msg}");
        }
    }

    proptest! {
        #[test]
        fn monotone_and_positive(gamma in 1.05f64..6.0, k in 0.05f64..5.0,
                                 mut taus in proptest::collection::vec(1e-3f64..1e3, 2..20)) {
            let g = gas(gamma, k);
            taus.sort_by(f64::total_cmp);
            taus.dedup();
            let mut prev: Option<(f64, f64, f64)> = None;
            for &t in &taus {
                let cur = (g.pressure(t).unwrap(), g.sound_speed(t).unwrap(), g.phi_of_tau(t).unwrap());
                prop_assert!(cur.0 > 0.0 && cur.1 > 0.0 && cur.2 > 0.0);
                if let Some(p) = prev {
                    prop_assert!(cur.0 < p.0 && cur.1 < p.1 && cur.2 < p.2);
                }
                prev = Some(cur);
            }
        }

        #[test]
        fn two_sound_speed_forms_agree(gamma in 1.05f64..6.0, k in 0.05f64..5.0, tau in 1e-3f64..1e3) {
            let g = gas(gamma, k);
            let a = g.sound_speed(tau).unwrap();
            let b = g.sound_speed_of_phi(g.phi_of_tau(tau).unwrap()).unwrap();
            prop_assert!(rel(a, b) < 1e-12);
        }

        #[test]
        fn riemann_inverse(u in -50.0f64..50.0, phi in 1e-6f64..50.0) {
            let (w, z) = riemann_invariants(u, phi);
            prop_assert!(w > z);
            let (u2, phi2) = from_riemann_invariants(w, z);
            prop_assert!((u2 - u).abs() <= 1e-12 * (1.0 + u.abs() + phi));
            prop_assert!((phi2 - phi).abs() <= 1e-12 * (1.0 + u.abs() + phi));
        }

        #[test]
        fn c_tilde0_monotone(gamma in 1.05f64..6.0, a in 0.01f64..10.0, b in 0.01f64..10.0) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let p_lo = GasParams::new(gamma, 1.0, 0.0, 0.0, lo).unwrap();
            let p_hi = GasParams::new(gamma, 1.0, 0.0, 0.0, hi).unwrap();
            prop_assert!(p_lo.c_tilde0() <= p_hi.c_tilde0());
        }
    }
}
