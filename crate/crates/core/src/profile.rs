//! Closed-form pieces of the half-space classification.
//!
//! Positive solutions of `-Δu = u^(-γ)` on the half-space depend only on the
//! distance `t` to the boundary, so everything reduces to the autonomous ODE
//! `-v'' = v^(-γ)`, `v(0) = 0`. Multiplying by `v'` gives the first integral
//!
//! ```text
//! E = ½ v'(t)² + F(v(t)),   F(u) = u^(1-γ)/(1-γ)   (γ ≠ 1),   F(u) = ln u   (γ = 1)
//! ```
//!
//! For γ > 1, `F < 0` and `F(u) → 0` as `u → ∞`, so every ascending global
//! solution has a finite asymptotic slope `m = √(2E)`. The family is closed
//! under `u ↦ λ^(-2/(γ+1)) u(λ t)`, which multiplies slopes by
//! `λ^((γ-1)/(γ+1))`; taking the normalized member to be the one with `m = 1`
//! gives the dictionary
//!
//! ```text
//! m = √(2E),   λ = m^((γ+1)/(γ-1)),   E = ½ λ^(2(γ-1)/(γ+1)).
//! ```
//!
//! `E = 0` is the explicit power branch `A(γ) t^(2/(γ+1))`; it is fixed by
//! the scaling and carries the sentinel `λ = m = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used for the algebraic consistency checks of this module.
pub const ALGEBRAIC_RTOL: f64 = 1e-12;

/// The exponent γ > 0.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct GammaParam(f64);

/// The two sides of the classification dichotomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// γ > 1: the power solution and the scaled normalized profiles.
    ExistenceGammaGt1,
    /// 0 < γ ≤ 1: no positive solution exists.
    NonexistenceGammaLe1,
}

impl GammaParam {
    pub fn new(gamma: f64) -> Result<Self> {
        if gamma.is_finite() && gamma > 0.0 {
            Ok(Self(gamma))
        } else {
            Err(Error::Domain(format!(
                "gamma must be a finite positive number, got {gamma}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Exact comparison against 1; there is no tolerance window.
    pub fn regime(self) -> Regime {
        if self.0 > 1.0 {
            Regime::ExistenceGammaGt1
        } else {
            Regime::NonexistenceGammaLe1
        }
    }

    pub fn require_existence(self) -> Result<()> {
        match self.regime() {
            Regime::ExistenceGammaGt1 => Ok(()),
            Regime::NonexistenceGammaLe1 => Err(Error::Regime(format!(
                "no positive solutions for 0 < gamma <= 1 (gamma = {})",
                self.0
            ))),
        }
    }

    /// Boundary-layer exponent `2/(γ+1)`.
    pub fn boundary_exponent(self) -> f64 {
        2.0 / (self.0 + 1.0)
    }

    /// Slope scaling exponent `(γ-1)/(γ+1)`.
    pub fn slope_exponent(self) -> f64 {
        (self.0 - 1.0) / (self.0 + 1.0)
    }
}

impl TryFrom<f64> for GammaParam {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<GammaParam> for f64 {
    fn from(g: GammaParam) -> f64 {
        g.0
    }
}

pub fn regime_classify(gamma: GammaParam) -> Regime {
    gamma.regime()
}

/// `A(γ) = (γ+1)^(2/(γ+1)) / (2γ-2)^(1/(γ+1))`, the coefficient of the
/// explicit solution.
pub fn power_coefficient(gamma: GammaParam) -> Result<f64> {
    gamma.require_existence()?;
    let g = gamma.value();
    Ok((g + 1.0).powf(2.0 / (g + 1.0)) / (2.0 * g - 2.0).powf(1.0 / (g + 1.0)))
}

/// `A(γ) t^(2/(γ+1))`.
pub fn explicit_solution_eval(gamma: GammaParam, t: f64) -> Result<f64> {
    let a = power_coefficient(gamma)?;
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be nonnegative, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    Ok(a * t.powf(gamma.boundary_exponent()))
}

/// Value, first and second derivative of the explicit solution at `t > 0`,
/// all in closed form.
pub fn explicit_solution_jet(gamma: GammaParam, t: f64) -> Result<[f64; 3]> {
    let a = power_coefficient(gamma)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("derivatives need t > 0, got {t}")));
    }
    let p = gamma.boundary_exponent();
    let u = a * t.powf(p);
    Ok([u, p * u / t, p * (p - 1.0) * u / (t * t)])
}

/// `F(u)`, the antiderivative of `u^(-γ)` normalized so that `F → 0` at
/// infinity for γ > 1 (and `F(1) = 0` for γ = 1).
pub fn antiderivative(gamma: GammaParam, u: f64) -> Result<f64> {
    if !(u > 0.0) {
        return Err(Error::Domain(format!("F(u) needs u > 0, got {u}")));
    }
    Ok(antiderivative_unchecked(gamma.value(), u))
}

#[inline]
pub(crate) fn antiderivative_unchecked(g: f64, u: f64) -> f64 {
    if g == 1.0 {
        u.ln()
    } else {
        u.powf(1.0 - g) / (1.0 - g)
    }
}

/// Inverse of [`antiderivative`]; `None` when `level` is outside the range
/// of F (`(-∞, 0)` for γ > 1, `(0, ∞)` for γ < 1).
pub fn antiderivative_inverse(gamma: GammaParam, level: f64) -> Option<f64> {
    let g = gamma.value();
    if g == 1.0 {
        return Some(level.exp()).filter(|u| *u > 0.0 && u.is_finite());
    }
    let base = (1.0 - g) * level;
    if base > 0.0 {
        let u = base.powf(1.0 / (1.0 - g));
        (u > 0.0 && u.is_finite()).then_some(u)
    } else {
        None
    }
}

/// Position on a trajectory together with its first-integral value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyState {
    pub gamma: GammaParam,
    pub value_u: f64,
    pub slope_u: f64,
    pub f_of_u: f64,
    pub energy: f64,
}

impl EnergyState {
    pub fn new(gamma: GammaParam, value_u: f64, slope_u: f64) -> Result<Self> {
        let f_of_u = antiderivative(gamma, value_u)?;
        Ok(Self {
            gamma,
            value_u,
            slope_u,
            f_of_u,
            energy: 0.5 * slope_u * slope_u + f_of_u,
        })
    }

    /// Recomputes the energy from `(u, u')` and compares with the stored one.
    pub fn is_consistent(&self) -> bool {
        let e = 0.5 * self.slope_u * self.slope_u
            + antiderivative_unchecked(self.gamma.value(), self.value_u);
        (e - self.energy).abs()
            <= ALGEBRAIC_RTOL * e.abs().max(self.energy.abs()).max(f64::MIN_POSITIVE)
    }
}

/// How a family member is selected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParam {
    Energy(f64),
    Lambda(f64),
    Slope(f64),
}

/// One member of the γ > 1 solution family. The three parameters are
/// redundant and kept mutually consistent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSpec {
    pub gamma: GammaParam,
    pub energy: f64,
    pub lambda: f64,
    pub slope_inf: f64,
}

impl ProfileSpec {
    pub fn from_energy(gamma: GammaParam, energy: f64) -> Result<Self> {
        gamma.require_existence()?;
        if !(energy >= 0.0) || !energy.is_finite() {
            return Err(Error::Domain(format!(
                "energy must be finite and >= 0, got {energy}"
            )));
        }
        if energy == 0.0 {
            return Ok(Self::power_branch(gamma));
        }
        let slope = (2.0 * energy).sqrt();
        Ok(Self {
            gamma,
            energy,
            lambda: lambda_of_slope(gamma, slope)?,
            slope_inf: slope,
        })
    }

    pub fn from_slope(gamma: GammaParam, slope: f64) -> Result<Self> {
        gamma.require_existence()?;
        if !(slope >= 0.0) || !slope.is_finite() {
            return Err(Error::Domain(format!(
                "slope must be finite and >= 0, got {slope}"
            )));
        }
        if slope == 0.0 {
            return Ok(Self::power_branch(gamma));
        }
        Ok(Self {
            gamma,
            energy: 0.5 * slope * slope,
            lambda: lambda_of_slope(gamma, slope)?,
            slope_inf: slope,
        })
    }

    pub fn from_lambda(gamma: GammaParam, lambda: f64) -> Result<Self> {
        gamma.require_existence()?;
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!(
                "lambda must be finite and > 0, got {lambda}"
            )));
        }
        let slope = lambda.powf(gamma.slope_exponent());
        Ok(Self {
            gamma,
            energy: 0.5 * slope * slope,
            lambda,
            slope_inf: slope,
        })
    }

    /// The normalized profile: asymptotic slope 1, λ = 1.
    pub fn normalized(gamma: GammaParam) -> Result<Self> {
        Self::from_lambda(gamma, 1.0)
    }

    pub fn power_branch(gamma: GammaParam) -> Self {
        Self {
            gamma,
            energy: 0.0,
            lambda: 0.0,
            slope_inf: 0.0,
        }
    }

    pub fn is_power_branch(&self) -> bool {
        self.energy == 0.0
    }

    /// Checks the stored parameters against each other.
    pub fn check_consistency(&self) -> Result<()> {
        if self.energy == 0.0 {
            if self.lambda == 0.0 && self.slope_inf == 0.0 {
                return Ok(());
            }
            return Err(Error::Spec(
                "power branch must carry lambda = slope = 0".into(),
            ));
        }
        let m = self.slope_inf;
        if (m - (2.0 * self.energy).sqrt()).abs() > ALGEBRAIC_RTOL * m.max(1.0) {
            return Err(Error::Spec(format!(
                "slope {m} inconsistent with energy {}",
                self.energy
            )));
        }
        let lam = m.powf(1.0 / self.gamma.slope_exponent());
        if (self.lambda - lam).abs() > ALGEBRAIC_RTOL * self.lambda.max(1.0) {
            return Err(Error::Spec(format!(
                "lambda {} inconsistent with slope {m}",
                self.lambda
            )));
        }
        Ok(())
    }

    /// First-integral slope `v' = √(2E − 2F(v))` at height `v > 0`.
    pub fn slope_at_value(&self, v: f64) -> f64 {
        let g = self.gamma.value();
        (2.0 * self.energy + 2.0 / (g - 1.0) * v.powf(1.0 - g)).sqrt()
    }
}

// λ = m^((γ+1)/(γ-1)); the exponent blows up as γ → 1⁺.
fn lambda_of_slope(gamma: GammaParam, slope: f64) -> Result<f64> {
    let lambda = slope.powf(1.0 / gamma.slope_exponent());
    if lambda > 0.0 && lambda.is_finite() {
        Ok(lambda)
    } else {
        Err(Error::Domain(format!(
            "scaling parameter for slope {slope} at gamma {} is outside the f64 range",
            gamma.value()
        )))
    }
}

pub fn spec_from(gamma: GammaParam, param: FamilyParam) -> Result<ProfileSpec> {
    match param {
        FamilyParam::Energy(e) => ProfileSpec::from_energy(gamma, e),
        FamilyParam::Lambda(l) => ProfileSpec::from_lambda(gamma, l),
        FamilyParam::Slope(m) => ProfileSpec::from_slope(gamma, m),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(v: f64) -> GammaParam {
        GammaParam::new(v).unwrap()
    }

    #[test]
    fn regime_examples() {
        assert_eq!(regime_classify(g(3.0)), Regime::ExistenceGammaGt1);
        assert_eq!(regime_classify(g(1.0)), Regime::NonexistenceGammaLe1);
        assert_eq!(regime_classify(g(0.5)), Regime::NonexistenceGammaLe1);
        assert_eq!(
            regime_classify(g(1.0 + f64::EPSILON)),
            Regime::ExistenceGammaGt1
        );
    }

    #[test]
    fn invalid_gamma_rejected() {
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(GammaParam::new(bad), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn power_coefficient_values() {
        assert!((power_coefficient(g(3.0)).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((power_coefficient(g(2.0)).unwrap() - 4.5f64.cbrt()).abs() < 1e-15);
        assert!((power_coefficient(g(2.0)).unwrap() - 1.650_963_624_4).abs() < 1e-10);
        assert!(matches!(power_coefficient(g(1.0)), Err(Error::Regime(_))));
        assert!(matches!(power_coefficient(g(0.4)), Err(Error::Regime(_))));
    }

    #[test]
    fn explicit_solution_examples() {
        let s3 = g(3.0);
        assert!(
            (explicit_solution_eval(s3, 1.0).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-10
        );
        assert_eq!(explicit_solution_eval(s3, 0.0).unwrap(), 0.0);
        assert!((explicit_solution_eval(s3, 4.0).unwrap() - 2.828_427_124_7).abs() < 1e-10);
        assert!(explicit_solution_eval(s3, -1.0).is_err());
        assert!(matches!(
            explicit_solution_eval(g(1.0), 1.0),
            Err(Error::Regime(_))
        ));
    }

    #[test]
    fn antiderivative_examples() {
        assert!((antiderivative(g(3.0), 1.0).unwrap() + 0.5).abs() < 1e-15);
        assert_eq!(antiderivative(g(1.0), 1.0).unwrap(), 0.0);
        assert!((antiderivative(g(0.5), 1.0).unwrap() - 2.0).abs() < 1e-15);
        assert!(matches!(antiderivative(g(3.0), 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn antiderivative_inverse_round_trips() {
        for (gv, u) in [(3.0, 2.5), (1.0, 0.3), (0.5, 7.0), (1.7, 1e-3)] {
            let f = antiderivative(g(gv), u).unwrap();
            let back = antiderivative_inverse(g(gv), f).unwrap();
            assert!((back - u).abs() <= 1e-12 * u);
        }
        // Outside the range of F.
        assert!(antiderivative_inverse(g(3.0), 0.5).is_none());
        assert!(antiderivative_inverse(g(0.5), -0.5).is_none());
    }

    #[test]
    fn spec_conversion_examples() {
        let s = spec_from(g(3.0), FamilyParam::Slope(1.0)).unwrap();
        assert!((s.energy - 0.5).abs() < 1e-15 && (s.lambda - 1.0).abs() < 1e-15);
        let s = spec_from(g(3.0), FamilyParam::Lambda(4.0)).unwrap();
        assert!((s.slope_inf - 2.0).abs() < 1e-15 && (s.energy - 2.0).abs() < 1e-14);
        let s = spec_from(g(3.0), FamilyParam::Energy(0.0)).unwrap();
        assert!(s.is_power_branch() && s.lambda == 0.0 && s.slope_inf == 0.0);
        assert!(matches!(
            spec_from(g(3.0), FamilyParam::Energy(-1.0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            spec_from(g(0.9), FamilyParam::Slope(1.0)),
            Err(Error::Regime(_))
        ));
        assert!(matches!(
            spec_from(g(3.0), FamilyParam::Lambda(0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn inconsistent_spec_detected() {
        let mut s = ProfileSpec::from_energy(g(2.0), 1.0).unwrap();
        s.check_consistency().unwrap();
        s.lambda *= 1.001;
        assert!(matches!(s.check_consistency(), Err(Error::Spec(_))));
    }

    #[test]
    fn energy_state_consistency() {
        let st = EnergyState::new(g(3.0), 3f64.sqrt(), 2.0 / 3f64.sqrt()).unwrap();
        assert!((st.energy - 0.5).abs() < 1e-15);
        assert!(st.is_consistent());
        let st = EnergyState::new(g(1.0), 2.0, 0.1).unwrap();
        assert!((st.f_of_u - 2f64.ln()).abs() < 1e-15 && st.is_consistent());
    }

    proptest! {
        #[test]
        fn explicit_solution_has_zero_residual(gv in 1.0f64..10.0, log_t in -3.0f64..3.0) {
            prop_assume!(gv > 1.0);
            let t = 10f64.powf(log_t);
            let [u, _, upp] = explicit_solution_jet(g(gv), t).unwrap();
            let source = u.powf(-gv);
            prop_assert!((-upp - source).abs() <= 1e-10 * source);
        }

        #[test]
        fn antiderivative_is_increasing(gv in 0.05f64..8.0, u1 in 1e-3f64..1e3, frac in 1e-6f64..1.0) {
            let u2 = u1 * (1.0 + frac);
            prop_assert!(antiderivative(g(gv), u1).unwrap() < antiderivative(g(gv), u2).unwrap());
        }

        #[test]
        fn energy_lambda_round_trip(gv in 1.01f64..10.0, e in 1e-6f64..100.0) {
            let s = ProfileSpec::from_energy(g(gv), e).unwrap();
            s.check_consistency().unwrap();
            let back = ProfileSpec::from_lambda(g(gv), s.lambda).unwrap();
            prop_assert!((back.energy - e).abs() <= 1e-12 * e);
        }
    }
}
