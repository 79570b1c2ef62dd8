//! Time-dependent Riccati coefficients, control functions and the analytic
//! constants built from them.
//!
//! Along a forward characteristic the weighted gradient variable `y` obeys
//! `y' = a0 - a1 y - a2 y^2` (`a1 = 0` unless `gamma = 3`). [`CoefficientSet`]
//! evaluates `a0, a1, a2` and converts between `w_x` (or `z_x`) and `y`
//! (or `q`). [`bounds::BoundsContext`] holds every constant derived from the
//! initial data: the ceiling `M`, the density floor, the sign-change time and
//! the blow-up thresholds.

pub mod bounds;
pub mod extrema;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{pow_pos, GammaRegime, GasParams};

pub use bounds::{BlowupBranch, BoundsContext, TailIntegral, ThresholdConstants};
pub use extrema::CoeffExtrema;

/// Which power of `(1+t)` enters the exponential weight of `y`.
///
/// `Antiderivative` uses `(1+t)^{1-lambda}` and makes the Riccati reduction
/// exact. `Literal` uses `(1+t)^{-lambda}`; it exists only to show that the
/// reduction then fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentVariant {
    #[default]
    Antiderivative,
    Literal,
}

/// Riccati coefficients for one parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub params: GasParams,
    pub regime: GammaRegime,
    pub variant: ExponentVariant,
    k_c: f64,
}

/// Builds the coefficient evaluators. `gamma != 3` with `lambda = 1` is
/// rejected: the `1/(1-lambda)` weights are singular there.
pub fn riccati_coefficients(params: &GasParams) -> Result<CoefficientSet> {
    CoefficientSet::new(params, ExponentVariant::Antiderivative)
}

impl CoefficientSet {
    pub fn new(params: &GasParams, variant: ExponentVariant) -> Result<Self> {
        params.validate()?;
        let regime = params.regime();
        if regime != GammaRegime::GammaEq3 && params.lambda == 1.0 {
            return Err(Error::UnsupportedRegime(
                "lambda = 1 with gamma != 3 has no Riccati weight".into(),
            ));
        }
        Ok(Self { params: *params, regime, variant, k_c: params.k_c() })
    }

    fn g(&self) -> f64 {
        self.params.gamma
    }

    /// `alpha (3 gamma - 1) / (2 (gamma - 3)(1 - lambda))`.
    pub fn kappa(&self) -> f64 {
        let p = &self.params;
        p.alpha * (3.0 * p.gamma - 1.0) / (2.0 * (p.gamma - 3.0) * (1.0 - p.lambda))
    }

    /// Exponent of `phi` in `a0` and in the damping part of `y`.
    fn phi_exp(&self) -> f64 {
        (self.g() - 3.0) / (2.0 * (self.g() - 1.0))
    }

    /// Exponent of `phi` multiplying `w_x` in `y`.
    fn grad_exp(&self) -> f64 {
        (self.g() + 1.0) / (2.0 * (self.g() - 1.0))
    }

    /// `ln` of the exponential weight `E(t)` of `y`.
    pub fn log_weight(&self, t: f64) -> f64 {
        let lam = self.params.lambda;
        let power = match self.variant {
            ExponentVariant::Antiderivative => pow_pos(1.0 + t, 1.0 - lam),
            ExponentVariant::Literal => pow_pos(1.0 + t, -lam),
        };
        self.kappa() * power
    }

    /// `K_a = alpha (gamma - 1) / (K_c (gamma - 3))`, the coefficient of the
    /// damping shift in `y`.
    pub fn shift_coefficient(&self) -> f64 {
        let p = &self.params;
        p.alpha * (p.gamma - 1.0) / (self.k_c * (p.gamma - 3.0))
    }

    /// Time factor of `a0` without the `phi` power, sign included.
    pub fn a0_prefactor(&self, t: f64) -> f64 {
        let p = &self.params;
        if self.regime == GammaRegime::GammaEq3 {
            return 0.0;
        }
        let g = p.gamma;
        p.lambda * p.alpha * (g - 1.0) * (g - 3.0) * pow_pos(1.0 + t, p.lambda - 1.0)
            - p.alpha * p.alpha * (g - 1.0) * (g - 1.0)
    }

    pub fn a0(&self, t: f64, phi: f64) -> f64 {
        let p = &self.params;
        match self.regime {
            GammaRegime::GammaEq3 => {
                let l = phi.ln();
                p.alpha * l * (2.0 * p.lambda * pow_pos(1.0 + t, p.lambda - 1.0) - p.alpha * (1.0 + l))
                    / (4.0 * self.k_c * pow_pos(1.0 + t, 2.0 * p.lambda))
            }
            _ => {
                let pre = self.a0_prefactor(t);
                if pre == 0.0 {
                    return 0.0;
                }
                let g = p.gamma;
                let log_mag = pre.abs().ln() - (self.k_c * (g - 3.0) * (g - 3.0)).ln()
                    - 2.0 * p.lambda * (1.0 + t).ln()
                    + self.phi_exp() * phi.ln()
                    + self.log_weight(t);
                pre.signum() * log_mag.exp()
            }
        }
    }

    pub fn a1(&self, t: f64, phi: f64) -> f64 {
        let p = &self.params;
        match self.regime {
            GammaRegime::GammaEq3 => {
                p.alpha * (1.0 + 2.0 * phi.ln()) / (2.0 * pow_pos(1.0 + t, p.lambda))
            }
            _ => 0.0,
        }
    }

    pub fn a2(&self, t: f64, phi: f64) -> f64 {
        match self.regime {
            GammaRegime::GammaEq3 => self.k_c,
            _ => {
                let g = self.g();
                let coef = self.k_c * (g + 1.0) / (2.0 * (g - 1.0));
                (coef.ln() - self.phi_exp() * phi.ln() - self.log_weight(t)).exp()
            }
        }
    }

    /// Right side `a0 - a1 y - a2 y^2`.
    pub fn rhs(&self, t: f64, phi: f64, y: f64) -> f64 {
        self.a0(t, phi) - self.a1(t, phi) * y - self.a2(t, phi) * y * y
    }

    /// Maps a Riemann-invariant gradient (`w_x` for `y`, `z_x` for `q`) to the
    /// Riccati variable.
    pub fn gradient_variable(&self, t: f64, phi: f64, grad: f64) -> f64 {
        let p = &self.params;
        match self.regime {
            GammaRegime::GammaEq3 => {
                phi * grad - p.alpha / (2.0 * self.k_c * pow_pos(1.0 + t, p.lambda)) * phi.ln()
            }
            _ => {
                let bracket = pow_pos(phi, self.grad_exp()) * grad
                    - self.shift_coefficient() / pow_pos(1.0 + t, p.lambda)
                        * pow_pos(phi, self.phi_exp());
                bracket * self.log_weight(t).exp()
            }
        }
    }

    /// Inverse of [`CoefficientSet::gradient_variable`].
    pub fn gradient_from_variable(&self, t: f64, phi: f64, y: f64) -> f64 {
        let p = &self.params;
        match self.regime {
            GammaRegime::GammaEq3 => {
                (y + p.alpha / (2.0 * self.k_c * pow_pos(1.0 + t, p.lambda)) * phi.ln()) / phi
            }
            _ => {
                let bracket = y * (-self.log_weight(t)).exp()
                    + self.shift_coefficient() / pow_pos(1.0 + t, p.lambda)
                        * pow_pos(phi, self.phi_exp());
                bracket * pow_pos(phi, -self.grad_exp())
            }
        }
    }
}

/// Time `t0 > 0` where the forcing `a0` changes sign, solving
/// `(1+t0)^{lambda-1} = alpha (gamma-1) / (lambda (gamma-3))`.
pub fn sign_change_time(params: &GasParams) -> Result<Option<f64>> {
    if params.is_gamma3() || params.lambda == 1.0 {
        return Err(Error::UnsupportedRegime(
            "sign-change time needs gamma != 3 and lambda != 1".into(),
        ));
    }
    let (a, l, g) = (params.alpha, params.lambda, params.gamma);
    if a == 0.0 || l == 0.0 {
        return Ok(None);
    }
    let ratio = a * (g - 1.0) / (l * (g - 3.0));
    if ratio <= 0.0 {
        return Ok(None);
    }
    let t0 = pow_pos(ratio, 1.0 / (l - 1.0)) - 1.0;
    Ok((t0 > 0.0 && t0.is_finite()).then_some(t0))
}

/// Control functions `G, H` (or `G^, H^` for `lambda < 0`) and their
/// integrating factors. Meaningful for `1 < gamma <= 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlFunctions {
    pub params: GasParams,
}

impl ControlFunctions {
    pub fn new(params: &GasParams) -> Result<Self> {
        if params.regime() == GammaRegime::GammaAbove3 {
            return Err(Error::UnsupportedRegime(
                "control functions G, H are defined for 1 < gamma <= 3".into(),
            ));
        }
        Ok(Self { params: *params })
    }

    /// Weight of the control term: `alpha` for `lambda >= 0`, `alpha - lambda` otherwise.
    pub fn damping_weight(&self) -> f64 {
        if self.params.lambda >= 0.0 {
            self.params.alpha
        } else {
            self.params.alpha - self.params.lambda
        }
    }

    /// `c^{1/2} grad + weight (1+t)^{-lambda} h(tau)`; pass `w_x` for `G`, `z_x` for `H`.
    pub fn evaluate(&self, t: f64, tau: f64, grad: f64) -> f64 {
        let p = &self.params;
        let c = (p.k * p.gamma).sqrt() * pow_pos(tau, -(p.gamma + 1.0) / 2.0);
        c.sqrt() * grad + self.damping_weight() / pow_pos(1.0 + t, p.lambda) * p.control(tau)
    }

    /// Time-dependent ceiling of `G, H`: `M` for `lambda >= 0`, otherwise
    /// `exp(-lambda (1+t)^{1-lambda}/(1-lambda)) M`.
    pub fn ceiling(&self, t: f64, m: f64) -> f64 {
        let l = self.params.lambda;
        if l >= 0.0 {
            m
        } else {
            m * (-l * pow_pos(1.0 + t, 1.0 - l) / (1.0 - l)).exp()
        }
    }

    /// `A(t) = exp(alpha (1+t)^{1-lambda} / (2 (1-lambda)))`, `lambda != 1`.
    pub fn integrating_factor(&self, t: f64) -> f64 {
        let p = &self.params;
        (p.alpha * pow_pos(1.0 + t, 1.0 - p.lambda) / (2.0 * (1.0 - p.lambda))).exp()
    }

    /// `A1(t) = (1+t)^{alpha/2}`, used for `lambda = 1`.
    pub fn integrating_factor_unit(&self, t: f64) -> f64 {
        pow_pos(1.0 + t, self.params.alpha / 2.0)
    }
}

/// Floor for `M` when every initial control term vanishes.
pub const M_FLOOR: f64 = 1e-12;

/// Ceiling `M` for the initial control functions over a sampled state.
///
/// `grad_w`, `grad_z` are `w_x`, `z_x` per cell. For `lambda < 0` the
/// supremum of `|G^|, |H^|` is scaled by `exp(lambda/(1-lambda))` so that
/// `G^(0) <= exp(-lambda/(1-lambda)) M`.
pub fn ceiling_m(params: &GasParams, tau: &[f64], grad_w: &[f64], grad_z: &[f64]) -> Result<f64> {
    let ctrl = ControlFunctions::new(params)?;
    let mut sup = 0.0f64;
    for ((&t, &a), &b) in tau.iter().zip(grad_w).zip(grad_z) {
        if !(a.is_finite() && b.is_finite() && t.is_finite()) {
            return Err(Error::NonFinite("initial gradients"));
        }
        sup = sup.max(ctrl.evaluate(0.0, t, a).abs()).max(ctrl.evaluate(0.0, t, b).abs());
    }
    let l = params.lambda;
    let scaled = if l < 0.0 { sup * (l / (1.0 - l)).exp() } else { sup };
    Ok((STRICT * scaled).max(M_FLOOR))
}

const STRICT: f64 = crate::gas::STRICT_MARGIN;

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gamma: f64, k: f64, alpha: f64, lambda: f64) -> GasParams {
        GasParams::new(gamma, k, alpha, lambda, 1.0).unwrap()
    }

    #[test]
    fn gamma3_a2_is_kc() {
        let c = riccati_coefficients(&params(3.0, 1.0 / 3.0, 0.7, 0.5)).unwrap();
        for &(t, phi) in &[(0.0, 0.3), (2.0, 1.0), (10.0, 5.0)] {
            assert!((c.a2(t, phi) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma3_undamped_forcing_vanishes() {
        let c = riccati_coefficients(&params(3.0, 1.0 / 3.0, 0.0, 0.5)).unwrap();
        for &(t, phi) in &[(0.0, 0.3), (2.0, 1.7)] {
            assert_eq!(c.a0(t, phi), 0.0);
            assert_eq!(c.a1(t, phi), 0.0);
        }
    }

    #[test]
    fn gamma2_undamped() {
        let p = params(2.0, 0.3, 0.0, 0.0);
        let c = riccati_coefficients(&p).unwrap();
        for &(t, phi) in &[(0.0, 0.25), (1.0, 1.0), (3.0, 4.0)] {
            assert_eq!(c.a0(t, phi), 0.0);
            let expect = p.k_c() * 1.5 * phi.sqrt();
            assert!((c.a2(t, phi) - expect).abs() < 1e-13 * expect);
        }
    }

    #[test]
    fn lambda_one_rejected_off_gamma3() {
        assert!(matches!(
            riccati_coefficients(&params(2.0, 0.1, 0.5, 1.0)),
            Err(Error::UnsupportedRegime(_))
        ));
        assert!(riccati_coefficients(&params(3.0, 0.1, 0.5, 1.0)).is_ok());
    }

    #[test]
    fn sign_change_examples() {
        let p = params(2.0, 0.125, 0.25, -1.0);
        let t0 = sign_change_time(&p).unwrap().unwrap();
        assert!((t0 - 1.0).abs() < 1e-14);
        let c = riccati_coefficients(&p).unwrap();
        for phi in [0.5, 1.0, 2.0] {
            assert!(c.a0(t0, phi).abs() < 1e-10);
        }
        assert_eq!(sign_change_time(&params(2.0, 0.125, 0.0, -1.0)).unwrap(), None);
        assert_eq!(sign_change_time(&params(5.0, 0.8, 0.0, 0.5)).unwrap(), None);
        // lambda >= lambda_crit, gamma < 3: a0 <= 0 throughout
        assert_eq!(sign_change_time(&params(2.0, 0.125, 0.5, -0.25)).unwrap(), None);
        assert!(sign_change_time(&params(3.0, 0.125, 0.5, -0.25)).is_err());
    }

    #[test]
    fn gradient_variable_roundtrip() {
        for (g, l) in [(2.0, -0.5), (5.0, 0.3), (3.0, 0.5), (1.4, 2.0)] {
            let c = riccati_coefficients(&params(g, 0.4, 0.6, l)).unwrap();
            for &(t, phi, gx) in &[(0.0, 1.0, -2.0), (1.3, 0.4, 0.7), (4.0, 2.5, -10.0)] {
                let y = c.gradient_variable(t, phi, gx);
                let back = c.gradient_from_variable(t, phi, y);
                assert!((back - gx).abs() < 1e-11 * (1.0 + gx.abs()), "{g} {l}");
            }
        }
    }

    #[test]
    fn constant_state_ceiling() {
        let p = params(2.0, 0.125, 0.5, 0.5);
        let n = 8;
        let m = ceiling_m(&p, &vec![1.0; n], &vec![0.0; n], &vec![0.0; n]).unwrap();
        assert!((m - 1.01 * 0.5 * p.control_h(1.0)).abs() < 1e-14);
        let p0 = params(2.0, 0.125, 0.0, 0.5);
        assert_eq!(ceiling_m(&p0, &vec![1.0; n], &vec![0.0; n], &vec![0.0; n]).unwrap(), M_FLOOR);
        let p3 = params(3.0, 1.0 / 3.0, 0.5, 0.0);
        let m3 = ceiling_m(&p3, &vec![1.0; n], &vec![0.0; n], &vec![0.0; n]).unwrap();
        assert!((m3 - 1.01 * 0.5 * p3.control_h1(1.0)).abs() < 1e-14);
    }

    #[test]
    fn ceiling_monotone_in_gradient() {
        let p = params(2.0, 0.125, 0.3, 0.0);
        let tau = vec![1.0; 5];
        let g1 = vec![0.0, -0.5, -1.0, -0.5, 0.0];
        let g2: Vec<f64> = g1.iter().map(|v| 2.0 * v).collect();
        let m1 = ceiling_m(&p, &tau, &g1, &g1).unwrap();
        let m2 = ceiling_m(&p, &tau, &g2, &g2).unwrap();
        assert!(m2 >= m1);
        assert!(ceiling_m(&p, &tau, &[f64::NAN; 5], &g1).is_err());
    }

    #[test]
    fn ceiling_rejects_high_gamma() {
        let p = params(5.0, 0.8, 0.3, 0.0);
        assert!(ceiling_m(&p, &[1.0], &[0.0], &[0.0]).is_err());
    }
}
