//! Analytic constants derived from the initial data: density floor,
//! coefficient extrema, `a2` tail integrals and blow-up thresholds.

use serde::{Deserialize, Serialize};

use super::extrema::{sample_extremum, CoeffExtrema};
use super::{sign_change_time, CoefficientSet, ExponentVariant};
use crate::error::{Error, Result};
use crate::gas::{pow_pos, GammaRegime, GasParams};
use crate::quad::{adaptive_simpson, tail_integral};

const QUAD_TOL: f64 = 1e-8;

/// Which blow-up statement applies to a parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupBranch {
    /// `1 < gamma < 3`, `lambda >= lambda_crit`: `a0 <= 0` for all time.
    LowGammaNonPositive,
    /// `1 < gamma < 3`, `lambda < lambda_crit`: `a0 > 0` before `t0`.
    LowGammaSignChange,
    /// `gamma > 3`, `lambda < 1` with `a0 <= 0` for all time.
    HighGammaNonPositive,
    /// `gamma > 3`, `lambda_crit < lambda < 1`: `a0 > 0` before `t0`.
    HighGammaSignChange,
    /// `gamma > 3`, `lambda > 1`: `a2` stays bounded below on `[0, inf)`.
    HighGammaLongTime,
    /// `gamma = 3`, any `lambda`, with a user-chosen time budget `t0`.
    GammaThree,
}

impl BlowupBranch {
    pub fn for_params(p: &GasParams) -> Result<Self> {
        let g = p.gamma;
        let l = p.lambda;
        if p.is_gamma3() {
            return Ok(Self::GammaThree);
        }
        if l == 1.0 {
            return Err(Error::UnsupportedRegime(
                "lambda = 1 with gamma != 3 has no blow-up criterion".into(),
            ));
        }
        let lc = p.lambda_crit().unwrap_or(0.0);
        if g < 3.0 {
            if p.alpha == 0.0 || l >= lc {
                Ok(Self::LowGammaNonPositive)
            } else {
                Ok(Self::LowGammaSignChange)
            }
        } else if l > 1.0 {
            Ok(Self::HighGammaLongTime)
        } else if p.alpha == 0.0 || l <= lc {
            Ok(Self::HighGammaNonPositive)
        } else {
            Ok(Self::HighGammaSignChange)
        }
    }
}

/// `int_{t_start}^{inf} a2_lower`, possibly divergent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum TailIntegral {
    Finite(f64),
    Infinite,
}

impl TailIntegral {
    /// `1 / integral`, zero when divergent.
    pub fn reciprocal(self) -> f64 {
        match self {
            TailIntegral::Finite(v) => 1.0 / v,
            TailIntegral::Infinite => 0.0,
        }
    }
}

/// Thresholds for one branch. The Riccati variable blows up when
/// `y(0) < -level`; `k3, k4` give the equivalent slope condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdConstants {
    pub branch: BlowupBranch,
    /// Sign-change time (`gamma != 3`) or time budget (`gamma = 3`).
    pub t0: Option<f64>,
    pub level: f64,
    pub k3: f64,
    pub k4: f64,
    pub tail: Option<TailIntegral>,
    pub sup_a0: Option<f64>,
    pub inf_a2: Option<f64>,
    pub m_bar: Option<f64>,
    pub m_tilde: Option<f64>,
}

/// Every constant derived from `(params, M)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsContext {
    pub params: GasParams,
    /// Ceiling of the initial control functions.
    pub m: f64,
    coeffs: Option<CoefficientSet>,
}

fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

impl BoundsContext {
    pub fn new(params: &GasParams, m: f64) -> Result<Self> {
        params.validate()?;
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Domain { what: "M", value: m });
        }
        let coeffs = CoefficientSet::new(params, ExponentVariant::Antiderivative).ok();
        Ok(Self { params: *params, m, coeffs })
    }

    pub fn coefficients(&self) -> Result<&CoefficientSet> {
        self.coeffs.as_ref().ok_or_else(|| {
            Error::UnsupportedRegime("lambda = 1 with gamma != 3 has no Riccati weight".into())
        })
    }

    pub fn c_tilde0(&self) -> f64 {
        self.params.c_tilde0()
    }

    /// `C = (max{C0^{(3-g)/4}, (3-g)/4 (K g)^{-1/4} M})^{4/(g-3)}`, `gamma < 3`.
    pub fn floor_constant(&self) -> Result<f64> {
        let p = &self.params;
        if p.regime() != GammaRegime::GammaBelow3 {
            return Err(Error::UnsupportedRegime("density-floor constant C needs gamma < 3".into()));
        }
        let g = p.gamma;
        let base = pow_pos(p.c0, (3.0 - g) / 4.0)
            .max((3.0 - g) / 4.0 * pow_pos(p.k * g, -0.25) * self.m);
        Ok(pow_pos(base, 4.0 / (g - 3.0)))
    }

    /// `M^ = (3K)^{-1/4} M`, `gamma = 3`.
    pub fn m_hat(&self) -> Result<f64> {
        if !self.params.is_gamma3() {
            return Err(Error::UnsupportedRegime("M^ needs gamma = 3".into()));
        }
        Ok(pow_pos(3.0 * self.params.k, -0.25) * self.m)
    }

    /// Natural log of the density floor at time `t`.
    pub fn log_density_floor(&self, t: f64) -> Result<f64> {
        let p = &self.params;
        let l = p.lambda;
        // exponent of the lambda < 0 growth factor
        let grow = |t: f64| -l * pow_pos(1.0 + t, 1.0 - l) / (1.0 - l);
        match p.regime() {
            GammaRegime::GammaAbove3 => Err(Error::UnsupportedRegime(
                "no density floor is available for gamma > 3".into(),
            )),
            GammaRegime::GammaBelow3 => {
                let c = self.floor_constant()?.ln();
                let e = 4.0 / (p.gamma - 3.0);
                if l >= 0.0 {
                    Ok(c + e * (1.0 + t).ln())
                } else if t == 0.0 {
                    Ok(c)
                } else {
                    Ok(c + e * softplus(grow(t) + t.ln()))
                }
            }
            GammaRegime::GammaEq3 => {
                let mh = self.m_hat()?;
                let rate = if l >= 0.0 { mh * t } else { mh * t * grow(t).exp() };
                Ok(-p.c0.ln() - rate)
            }
        }
    }

    /// Lower bound on the density at time `t`.
    pub fn density_floor(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain { what: "t", value: t });
        }
        Ok(self.log_density_floor(t)?.exp())
    }

    /// Largest admissible `phi`, reached at `tau = 1 / C~0`.
    pub fn phi_max(&self) -> f64 {
        let p = &self.params;
        if p.is_gamma3() {
            (3.0 * p.k).sqrt() * self.c_tilde0()
        } else {
            p.phi_prefactor() * pow_pos(self.c_tilde0(), (p.gamma - 1.0) / 2.0)
        }
    }

    /// Smallest admissible `phi` at time `t`, from the density floor.
    pub fn phi_min(&self, t: f64) -> Result<f64> {
        let p = &self.params;
        let lr = self.log_density_floor(t)?;
        if p.is_gamma3() {
            Ok((3.0 * p.k).sqrt() * lr.exp())
        } else {
            Ok(p.phi_prefactor() * (lr * (p.gamma - 1.0) / 2.0).exp())
        }
    }

    /// The `phi` where `a2` is smallest and `|a0|` largest at time `t`.
    fn critical_phi(&self, t: f64) -> Result<f64> {
        match self.params.regime() {
            GammaRegime::GammaBelow3 => self.phi_min(t),
            _ => Ok(self.phi_max()),
        }
    }

    /// Lower envelope of `a2` along any characteristic at time `t`.
    pub fn a2_lower(&self, t: f64) -> Result<f64> {
        let c = self.coefficients()?;
        if self.params.is_gamma3() {
            return Ok(self.params.k_c());
        }
        Ok(c.a2(t, self.critical_phi(t)?))
    }

    /// `a0` at the admissible `phi` of largest `|a0|` at time `t`.
    pub fn a0_upper(&self, t: f64) -> Result<f64> {
        let c = self.coefficients()?;
        Ok(c.a0(t, self.critical_phi(t)?))
    }

    /// Largest `a0` over the admissible `phi` at time `t`. Where `a0 < 0`
    /// the least negative value sits at the other end of the range, which
    /// for `gamma > 3` is `phi -> 0` and gives zero.
    pub fn a0_ceiling(&self, t: f64) -> Result<f64> {
        let v = self.a0_upper(t)?;
        if v >= 0.0 {
            return Ok(v);
        }
        match self.params.regime() {
            GammaRegime::GammaBelow3 => Ok(self.coefficients()?.a0(t, self.phi_max())),
            _ => Ok(0.0),
        }
    }

    /// Sampled `sup |a0|`, `sup a0+` and `inf a2` on `[t_lo, t_hi]`.
    pub fn coefficient_extrema(&self, t_lo: f64, t_hi: f64) -> Result<CoeffExtrema> {
        if self.params.is_gamma3() {
            return Err(Error::UnsupportedRegime(
                "gamma = 3 uses the M-bar ceilings instead of sampled extrema".into(),
            ));
        }
        self.coefficients()?;
        let envelope_a0 = |t: f64| self.a0_upper(t).unwrap_or(f64::NAN);
        let sup_abs = sample_extremum(&|t| envelope_a0(t).abs(), t_lo, t_hi, true, "|a0|")?;
        let sup_pos = sample_extremum(&|t| envelope_a0(t).max(0.0), t_lo, t_hi, true, "a0+")?;
        let inf_a2 = sample_extremum(
            &|t| self.a2_lower(t).unwrap_or(f64::NAN),
            t_lo,
            t_hi,
            false,
            "a2",
        )?;
        Ok(CoeffExtrema {
            t_lo,
            t_hi,
            sup_abs_a0: sup_abs.value,
            sup_pos_a0: sup_pos.value,
            inf_a2: inf_a2.value,
            converged: sup_abs.converged && sup_pos.converged && inf_a2.converged,
        })
    }

    pub fn sign_change_time(&self) -> Result<Option<f64>> {
        sign_change_time(&self.params)
    }

    /// `int_{t_start}^{horizon} a2_lower` by adaptive quadrature; `None`
    /// horizon integrates to infinity.
    pub fn a2_tail_quadrature(&self, t_start: f64, horizon: Option<f64>) -> Result<TailIntegral> {
        self.coefficients()?;
        let f = |t: f64| self.a2_lower(t).unwrap_or(f64::NAN);
        match horizon {
            Some(h) => {
                if h <= t_start {
                    return Ok(TailIntegral::Finite(0.0));
                }
                // panels of doubling width keep the integrand resolved on long horizons
                let mut total = 0.0;
                let mut lo = t_start;
                let mut width = 1.0_f64.max(0.1 * t_start);
                while lo < h {
                    let hi = (lo + width).min(h);
                    total += adaptive_simpson(&f, lo, hi, QUAD_TOL);
                    lo = hi;
                    width *= 2.0;
                }
                if !total.is_finite() {
                    return Err(Error::NonFinite("a2 quadrature"));
                }
                Ok(TailIntegral::Finite(total))
            }
            None => Ok(match tail_integral(&f, t_start, QUAD_TOL) {
                Some(v) if v.is_finite() => TailIntegral::Finite(v),
                _ => TailIntegral::Infinite,
            }),
        }
    }

    /// `int_{t_start}^{inf} a2_lower`, using a closed-form lower bound where
    /// one is available.
    ///
    /// For `gamma > 3`, `0 <= lambda < 1` the bound
    /// `Pref 2(g-3)/(alpha(3g-1)) exp(-kappa (1+t_start)^{1-lambda})` is used.
    /// For `gamma < 3`, `lambda < 0` the integral diverges whenever
    /// `alpha(3g-1)/(2(3-g)) + lambda >= 0`.
    pub fn a2_tail_integral(&self, t_start: f64) -> Result<TailIntegral> {
        let p = &self.params;
        let c = self.coefficients()?;
        let g = p.gamma;
        let l = p.lambda;
        match p.regime() {
            GammaRegime::GammaEq3 => Ok(TailIntegral::Infinite),
            GammaRegime::GammaAbove3 => {
                if l > 1.0 || p.alpha == 0.0 {
                    return Ok(TailIntegral::Infinite);
                }
                if l >= 0.0 {
                    let pref = c.a2(t_start, self.phi_max()) * c.log_weight(t_start).exp();
                    let weight = (-c.kappa() * pow_pos(1.0 + t_start, 1.0 - l)).exp();
                    return Ok(TailIntegral::Finite(
                        pref * 2.0 * (g - 3.0) / (p.alpha * (3.0 * g - 1.0)) * weight,
                    ));
                }
                self.a2_tail_quadrature(t_start, None)
            }
            GammaRegime::GammaBelow3 => {
                if l < 0.0 && p.alpha * (3.0 * g - 1.0) / (2.0 * (3.0 - g)) + l >= 0.0 {
                    return Ok(TailIntegral::Infinite);
                }
                self.a2_tail_quadrature(t_start, None)
            }
        }
    }

    /// `M-bar(t0)`: the largest of `phi`, `1/phi` over the admissible range
    /// on `[0, t0]`, `gamma = 3`.
    pub fn m_bar(&self, t0: f64) -> Result<f64> {
        if !self.params.is_gamma3() {
            return Err(Error::UnsupportedRegime("M-bar needs gamma = 3".into()));
        }
        let hi = self.phi_max();
        let lo = self.phi_min(t0)?;
        Ok(hi.max(1.0 / hi).max(lo).max(1.0 / lo))
    }

    /// Ceilings of `|a1|` and `|a0|` on `[0, t0]`, `gamma = 3`.
    pub fn gamma3_ceilings(&self, t0: f64) -> Result<(f64, f64)> {
        let p = &self.params;
        let lm = self.m_bar(t0)?.ln();
        let kc = p.k_c();
        let (a, l) = (p.alpha, p.lambda);
        let s1 = pow_pos(1.0 + t0, -l).max(1.0);
        let s2 = pow_pos(1.0 + t0, -2.0 * l).max(1.0);
        let c1 = (a / 2.0 + a * lm) * s1;
        let c0 = (l.abs() * a / (2.0 * kc) * lm + a * a / (4.0 * kc) * lm + a * a / (4.0 * kc) * lm * lm)
            * s2;
        Ok((c1, c0))
    }

    /// `M~(t0) = r1 + sqrt(r1^2 + 2 r0)` with `r = ceiling / K_c`, `gamma = 3`.
    pub fn m_tilde(&self, t0: f64) -> Result<f64> {
        let (c1, c0) = self.gamma3_ceilings(t0)?;
        let kc = self.params.k_c();
        let (r1, r0) = (c1 / kc, c0 / kc);
        Ok(r1 + (r1 * r1 + 2.0 * r0).sqrt())
    }

    /// Thresholds for the branch selected by the parameters. `t_budget` is
    /// the `gamma = 3` time budget and is ignored otherwise.
    pub fn threshold_constants(&self, t_budget: Option<f64>) -> Result<ThresholdConstants> {
        let p = &self.params;
        let branch = BlowupBranch::for_params(p)?;
        let mut out = ThresholdConstants {
            branch,
            t0: None,
            level: 0.0,
            k3: 0.0,
            k4: 0.0,
            tail: None,
            sup_a0: None,
            inf_a2: None,
            m_bar: None,
            m_tilde: None,
        };
        if branch == BlowupBranch::GammaThree {
            let t0 = t_budget.ok_or_else(|| {
                Error::InvalidParams("gamma = 3 thresholds need a time budget t0".into())
            })?;
            if !(t0 > 0.0 && t0.is_finite()) {
                return Err(Error::Domain { what: "t0", value: t0 });
            }
            let mt = self.m_tilde(t0)?;
            out.t0 = Some(t0);
            out.m_bar = Some(self.m_bar(t0)?);
            out.m_tilde = Some(mt);
            out.level = (2.0 / (p.k_c() * t0)).max(mt);
            return Ok(out);
        }
        let c = self.coefficients()?;
        out.k3 = c.shift_coefficient();
        let t0 = self.sign_change_time()?;
        out.t0 = t0;
        out.level = match branch {
            BlowupBranch::LowGammaNonPositive => 0.0,
            BlowupBranch::HighGammaNonPositive => {
                let tail = self.a2_tail_integral(0.0)?;
                out.tail = Some(tail);
                tail.reciprocal()
            }
            BlowupBranch::LowGammaSignChange | BlowupBranch::HighGammaSignChange => {
                let t0 = t0.ok_or_else(|| {
                    Error::UnsupportedRegime("forcing has no sign change for these parameters".into())
                })?;
                let tail = self.a2_tail_integral(t0)?;
                let ex = self.coefficient_extrema(0.0, t0)?;
                out.tail = Some(tail);
                out.sup_a0 = Some(ex.sup_pos_a0);
                out.inf_a2 = Some(ex.inf_a2);
                tail.reciprocal().max((ex.sup_pos_a0 / ex.inf_a2).sqrt())
            }
            BlowupBranch::HighGammaLongTime => {
                let ex = self.coefficient_extrema(0.0, f64::INFINITY)?;
                out.sup_a0 = Some(ex.sup_abs_a0);
                out.inf_a2 = Some(ex.inf_a2);
                (ex.sup_abs_a0 / ex.inf_a2).sqrt()
            }
            BlowupBranch::GammaThree => unreachable!(),
        };
        out.k4 = out.level * (-c.kappa()).exp();
        Ok(out)
    }

    /// Initial slope `w_x` (or `z_x`) below which blow-up is guaranteed, at
    /// initial `phi = phi0`.
    pub fn blowup_threshold(&self, phi0: f64, consts: &ThresholdConstants) -> Result<f64> {
        if !(phi0 > 0.0) {
            return Err(Error::Domain { what: "phi0", value: phi0 });
        }
        let p = &self.params;
        if p.is_gamma3() {
            return Ok((p.alpha / (2.0 * p.k_c()) * phi0.ln() - consts.level) / phi0);
        }
        let g = p.gamma;
        Ok(consts.k3 * pow_pos(phi0, -2.0 / (g - 1.0))
            - consts.k4 * pow_pos(phi0, -(g + 1.0) / (2.0 * (g - 1.0))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(gamma: f64, k: f64, alpha: f64, lambda: f64, c0: f64, m: f64) -> BoundsContext {
        BoundsContext::new(&GasParams::new(gamma, k, alpha, lambda, c0).unwrap(), m).unwrap()
    }

    #[test]
    fn density_floor_gamma2_examples() {
        let c = ctx(2.0, 0.5, 0.5, 0.5, 1.0, 0.1);
        // C = max{1, 0.25 * 1 * 0.1}^{-4} = 1
        assert!((c.floor_constant().unwrap() - 1.0).abs() < 1e-15);
        assert!((c.density_floor(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((c.density_floor(1.0).unwrap() - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn density_floor_gamma3_example() {
        let c = ctx(3.0, 1.0 / 3.0, 0.5, 0.0, 1.0, 0.1);
        let v = c.density_floor(1.0).unwrap();
        assert!((v - (-0.1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn density_floor_rejects_high_gamma() {
        let c = ctx(5.0, 0.8, 0.5, 0.0, 1.0, 0.1);
        assert!(matches!(c.density_floor(1.0), Err(Error::UnsupportedRegime(_))));
    }

    #[test]
    fn negative_lambda_floor_matches_direct_form() {
        let c = ctx(2.0, 0.125, 0.3, -0.7, 1.5, 0.4);
        let cc = c.floor_constant().unwrap();
        for t in [0.0f64, 0.5, 2.0, 4.0] {
            let l: f64 = -0.7;
            let direct = cc
                * (1.0 + (-l * (1.0 + t).powf(1.0 - l) / (1.0 - l)).exp() * t).powf(-4.0);
            let v = c.density_floor(t).unwrap();
            assert!((v - direct).abs() <= 1e-13 * direct, "t = {t}");
        }
    }

    #[test]
    fn branch_selection() {
        let b = |g: f64, a: f64, l: f64| {
            BlowupBranch::for_params(&GasParams::new(g, 0.2, a, l, 1.0).unwrap())
        };
        assert_eq!(b(2.0, 0.5, -1.0).unwrap(), BlowupBranch::LowGammaSignChange);
        assert_eq!(b(2.0, 0.5, 0.0).unwrap(), BlowupBranch::LowGammaNonPositive);
        assert_eq!(b(2.0, 0.0, -1.0).unwrap(), BlowupBranch::LowGammaNonPositive);
        assert_eq!(b(5.0, 0.2, 0.7).unwrap(), BlowupBranch::HighGammaSignChange);
        assert_eq!(b(5.0, 0.2, 0.2).unwrap(), BlowupBranch::HighGammaNonPositive);
        assert_eq!(b(5.0, 0.2, 2.0).unwrap(), BlowupBranch::HighGammaLongTime);
        assert_eq!(b(3.0, 0.2, 1.0).unwrap(), BlowupBranch::GammaThree);
        assert!(b(2.0, 0.2, 1.0).is_err());
    }

    #[test]
    fn low_gamma_slope_threshold_form() {
        let c = ctx(2.0, 0.125, 1.0, -2.0, 1.0, 0.5);
        let k = c.threshold_constants(None).unwrap();
        assert_eq!(k.branch, BlowupBranch::LowGammaSignChange);
        for phi0 in [0.5f64, 1.0, 2.0] {
            let expect = k.k3 * phi0.powi(-2) - k.k4 * phi0.powf(-1.5);
            assert!((c.blowup_threshold(phi0, &k).unwrap() - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn gamma3_undamped_threshold() {
        let c = ctx(3.0, 1.0 / 3.0, 0.0, 0.0, 1.0, 0.1);
        let k = c.threshold_constants(Some(2.0)).unwrap();
        assert_eq!(k.m_tilde, Some(0.0));
        assert!((k.level - 1.0).abs() < 1e-15);
        assert!((c.blowup_threshold(1.0, &k).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn m_bar_and_m_tilde_grow_with_t0() {
        let c = ctx(3.0, 1.0 / 3.0, 0.3, -0.5, 1.2, 0.2);
        let mut prev = (0.0, 0.0);
        for t0 in [0.5, 1.0, 2.0, 4.0] {
            let mb = c.m_bar(t0).unwrap();
            let mt = c.m_tilde(t0).unwrap();
            assert!(mb >= prev.0 && mt >= prev.1);
            prev = (mb, mt);
        }
    }

    #[test]
    fn closed_form_tail_below_quadrature() {
        for (l, t0) in [(0.0, 0.0), (0.5, 0.0), (0.7, 1.3)] {
            let c = ctx(5.0, 0.8, 0.2, l, 1.0, 0.1);
            let closed = c.a2_tail_integral(t0).unwrap();
            let quad = c.a2_tail_quadrature(t0, None).unwrap();
            match (closed, quad) {
                (TailIntegral::Finite(a), TailIntegral::Finite(b)) => {
                    assert!(a <= b * (1.0 + 1e-8), "lambda {l}: {a} > {b}")
                }
                other => panic!("unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn tail_integral_monotone_in_horizon() {
        let c = ctx(2.0, 0.125, 0.25, -1.0, 1.0, 0.3);
        let mut prev = 0.0;
        for h in [1.5, 2.0, 4.0, 8.0] {
            let TailIntegral::Finite(v) = c.a2_tail_quadrature(1.0, Some(h)).unwrap() else {
                panic!()
            };
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn divergent_tail_for_weak_negative_lambda() {
        // alpha(3g-1)/(2(3-g)) + lambda = 0.75 - 0.5 > 0
        let c = ctx(2.0, 0.125, 0.3, -0.5, 1.0, 0.3);
        assert_eq!(c.a2_tail_integral(0.5).unwrap(), TailIntegral::Infinite);
    }
}
