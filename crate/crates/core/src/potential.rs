//! The screened Coulomb potential, its Coulomb core and its small-b expansion.
//!
//! With x = b·r the potential factorises as
//!
//! ```text
//! V(r) = -(a/r) [1 + (1 + x) e^{-2x}] = -2a/r - (a/r) Σ_{i≥1} V_i x^i
//! ```
//!
//! where V_i is the coefficient of x^i in (1 + x) e^{-2x}. The i = 0 term of
//! that product is 1 and is folded into the Coulomb core -2a/r.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical configuration shared by every computation. Defaults are atomic
/// units (ħ = m = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    /// Coupling strength a (energy × length).
    pub a: f64,
    /// Screening parameter b (inverse length).
    pub b: f64,
    pub mass: f64,
    pub hbar: f64,
}

impl PotentialParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::with_units(a, b, 1.0, 1.0)
    }

    pub fn with_units(a: f64, b: f64, mass: f64, hbar: f64) -> Result<Self> {
        let params = Self { a, b, mass, hbar };
        params.validate()?;
        Ok(params)
    }

    /// Atomic-unit parameters for a given β = b/a.
    pub fn from_beta(a: f64, beta: f64) -> Result<Self> {
        Self::new(a, a * beta)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.a) {
            return Err(Error::InvalidParameter(format!("a must be > 0, got {}", self.a)));
        }
        if !(self.b.is_finite() && self.b >= 0.0) {
            return Err(Error::InvalidParameter(format!("b must be >= 0, got {}", self.b)));
        }
        if !ok(self.mass) {
            return Err(Error::InvalidParameter(format!("mass must be > 0, got {}", self.mass)));
        }
        if !ok(self.hbar) {
            return Err(Error::InvalidParameter(format!("hbar must be > 0, got {}", self.hbar)));
        }
        Ok(())
    }

    /// Dimensionless screening β = b/a.
    pub fn beta(&self) -> f64 {
        self.b / self.a
    }

    /// Same parameters with the screening switched off.
    pub fn unscreened(&self) -> Self {
        Self { b: 0.0, ..*self }
    }

    /// ħ²/(2m)
    pub fn kinetic_scale(&self) -> f64 {
        self.hbar * self.hbar / (2.0 * self.mass)
    }

    /// ħ/√(2m), the factor relating a superpotential to a log-derivative.
    pub fn superpotential_scale(&self) -> f64 {
        self.hbar / (2.0 * self.mass).sqrt()
    }
}

fn check_radius(what: &'static str, r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, r })
    }
}

/// V(r) = -(a/r)[1 + (1 + b r) e^{-2 b r}].
pub fn eval_mgesc(params: &PotentialParams, r: f64) -> Result<f64> {
    check_radius("the screened potential", r)?;
    Ok(mgesc_unchecked(params, r))
}

#[inline]
pub(crate) fn mgesc_unchecked(params: &PotentialParams, r: f64) -> f64 {
    let x = params.b * r;
    -(params.a / r) * (1.0 + (1.0 + x) * (-2.0 * x).exp())
}

/// V₀(r) = -2a/r.
pub fn eval_coulomb_core(params: &PotentialParams, r: f64) -> Result<f64> {
    check_radius("the Coulomb core", r)?;
    Ok(-2.0 * params.a / r)
}

/// Screened potential plus centrifugal barrier ℓ(ℓ+1)ħ²/(2 m r²).
pub fn eval_effective(params: &PotentialParams, l: u32, r: f64) -> Result<f64> {
    check_radius("the effective potential", r)?;
    Ok(effective_unchecked(params, l, r))
}

#[inline]
pub(crate) fn effective_unchecked(params: &PotentialParams, l: u32, r: f64) -> f64 {
    let ll = f64::from(l) * f64::from(l + 1);
    mgesc_unchecked(params, r) + ll * params.kinetic_scale() / (r * r)
}

/// Exact rational coefficients V₁ … V_k of the expansion in (b r).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesCoefficients {
    pub values: Vec<BigRational>,
}

impl SeriesCoefficients {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| v.to_f64().expect("coefficients are finite"))
            .collect()
    }
    /// V_i as a reduced fraction (numerator, denominator); handy in tests.
    pub fn as_fraction(&self, i: usize) -> Option<(BigInt, BigInt)> {
        let v = self.values.get(i.checked_sub(1)?)?;
        Some((v.numer().clone(), v.denom().clone()))
    }

    pub fn is_zero(&self, i: usize) -> bool {
        i >= 1 && self.values.get(i - 1).is_some_and(Zero::is_zero)
    }
}

/// Coefficients from the Cauchy product of (1 + x) with Σ (-2x)^j / j!:
/// V_i = (-2)^i/i! + (-2)^{i-1}/(i-1)!.
pub fn series_coefficients(order: usize) -> Result<SeriesCoefficients> {
    if order == 0 {
        return Err(Error::InvalidParameter("series order must be >= 1".into()));
    }
    let minus_two = BigRational::from_integer(BigInt::from(-2));
    let mut exp_terms = Vec::with_capacity(order + 1);
    let mut term = BigRational::one();
    exp_terms.push(term.clone());
    for j in 1..=order {
        term = term * &minus_two / BigRational::from_integer(BigInt::from(j));
        exp_terms.push(term.clone());
    }
    let values = (1..=order)
        .map(|i| &exp_terms[i] + &exp_terms[i - 1])
        .collect();
    Ok(SeriesCoefficients { values })
}

/// Highest power of b kept in the perturbation ΔV = V - V₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PerturbationTruncation {
    /// ΔV = a b
    Linear,
    /// adds -(2/3) a b³ r²
    Cubic,
    /// adds +(2/3) a b⁴ r³; the b⁵ r⁴ term is dropped
    #[default]
    Quartic,
}

impl TryFrom<u32> for PerturbationTruncation {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            1 => Ok(Self::Linear),
            3 => Ok(Self::Cubic),
            4 => Ok(Self::Quartic),
            other => Err(Error::UnsupportedOrder(other)),
        }
    }
}

/// Truncated perturbation ΔV(r) = ab - (2ab³/3) r² + (2ab⁴/3) r³.
pub fn eval_perturbation(
    params: &PotentialParams,
    r: f64,
    truncation: PerturbationTruncation,
) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain { what: "the perturbation", r });
    }
    let (a, b) = (params.a, params.b);
    let mut dv = a * b;
    if matches!(truncation, PerturbationTruncation::Cubic | PerturbationTruncation::Quartic) {
        dv -= 2.0 * a * b.powi(3) * r * r / 3.0;
    }
    if truncation == PerturbationTruncation::Quartic {
        dv += 2.0 * a * b.powi(4) * r.powi(3) / 3.0;
    }
    Ok(dv)
}

/// Untruncated partial sum -(a/r) Σ_{i=1}^{k} V_i (b r)^i.
pub fn series_partial_sum(params: &PotentialParams, r: f64, coeffs: &SeriesCoefficients) -> f64 {
    let x = params.b * r;
    let mut sum = 0.0;
    let mut pow = 1.0;
    for v in coeffs.to_f64() {
        pow *= x;
        sum += v * pow;
    }
    -(params.a / r) * sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn p(a: f64, b: f64) -> PotentialParams {
        PotentialParams::new(a, b).unwrap()
    }

    #[test]
    fn potential_values() {
        assert_eq!(eval_mgesc(&p(1.0, 0.0), 2.0).unwrap(), -1.0);
        let want = -(1.0 + 2.0 * (-2.0f64).exp());
        assert_relative_eq!(eval_mgesc(&p(1.0, 1.0), 1.0).unwrap(), want, epsilon = 1e-15);
        assert_relative_eq!(eval_mgesc(&p(1.0, 1.0), 1.0).unwrap(), -1.2706706, epsilon = 1e-7);
        assert_relative_eq!(eval_mgesc(&p(2.0, 0.5), 2.0).unwrap(), -1.2706706, epsilon = 1e-7);
    }

    #[test]
    fn radius_must_be_positive() {
        for r in [0.0, -1.0, f64::NAN] {
            assert!(matches!(eval_mgesc(&p(1.0, 0.1), r), Err(Error::Domain { .. })));
            assert!(eval_coulomb_core(&p(1.0, 0.1), r).is_err());
            assert!(eval_effective(&p(1.0, 0.1), 1, r).is_err());
        }
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(PotentialParams::new(0.0, 0.1).is_err());
        assert!(PotentialParams::new(1.0, -0.1).is_err());
        assert!(PotentialParams::with_units(1.0, 0.1, 0.0, 1.0).is_err());
        assert!(PotentialParams::with_units(1.0, 0.1, 1.0, -1.0).is_err());
    }

    #[test]
    fn coulomb_core() {
        assert_eq!(eval_coulomb_core(&p(1.0, 0.3), 1.0).unwrap(), -2.0);
        assert_eq!(eval_coulomb_core(&p(1.0, 0.3), 2.0).unwrap(), -1.0);
    }

    #[test]
    fn coulomb_limit_is_exact() {
        let params = p(1.3, 0.0);
        for i in 1..200 {
            let r = 0.05 * i as f64;
            assert_eq!(eval_mgesc(&params, r).unwrap(), eval_coulomb_core(&params, r).unwrap());
        }
    }

    #[test]
    fn effective_potential() {
        assert_eq!(eval_effective(&p(1.0, 0.0), 0, 1.0).unwrap(), -2.0);
        assert_eq!(eval_effective(&p(1.0, 0.0), 1, 1.0).unwrap(), -1.0);
        assert_relative_eq!(eval_effective(&p(1.0, 1.0), 1, 1.0).unwrap(), -0.2706706, epsilon = 1e-7);
    }

    #[test]
    fn first_five_coefficients() {
        let c = series_coefficients(5).unwrap();
        assert_eq!(c.values, vec![rat(-1, 1), rat(0, 1), rat(2, 3), rat(-4, 6), rat(12, 30)]);
        assert_eq!(series_coefficients(1).unwrap().values, vec![rat(-1, 1)]);
        assert!(c.is_zero(2));
        assert!(series_coefficients(0).is_err());
    }

    /// Independent oracle: multiply (1 + x) by the Taylor series of e^{-2x}
    /// term by term using explicit factorials.
    #[test]
    fn coefficients_match_cauchy_product_oracle() {
        let c = series_coefficients(12).unwrap();
        for i in 1..=12usize {
            let mut want = BigRational::zero();
            for j in [i, i - 1] {
                let fact: BigInt = (1..=j).map(BigInt::from).product();
                let pow = BigInt::from(-2).pow(j as u32);
                want += BigRational::new(pow, fact);
            }
            assert_eq!(c.values[i - 1], want, "V_{i}");
        }
        assert_eq!(c.values[5], rat(-8, 45));
        assert_eq!(c.values[6], rat(4, 63));
    }

    #[test]
    fn perturbation_truncations() {
        let params = p(1.0, 0.1);
        let got = eval_perturbation(&params, 1.0, PerturbationTruncation::Quartic).unwrap();
        assert_relative_eq!(got, 0.0994, epsilon = 1e-12);
        assert_eq!(eval_perturbation(&p(1.0, 0.0), 5.0, PerturbationTruncation::Quartic).unwrap(), 0.0);
        assert_relative_eq!(
            eval_perturbation(&params, 0.0, PerturbationTruncation::Quartic).unwrap(),
            0.1,
            epsilon = 1e-15
        );
        let lin = eval_perturbation(&params, 3.0, PerturbationTruncation::Linear).unwrap();
        assert_relative_eq!(lin, 0.1, epsilon = 1e-15);
        let cub = eval_perturbation(&params, 1.0, PerturbationTruncation::Cubic).unwrap();
        assert_relative_eq!(cub, 0.1 - 0.002 / 3.0, epsilon = 1e-15);
        assert!(matches!(PerturbationTruncation::try_from(2), Err(Error::UnsupportedOrder(2))));
        assert!(eval_perturbation(&params, -1.0, PerturbationTruncation::Quartic).is_err());
    }

    /// The quartic truncation equals the r-dependent part of the exact
    /// series through V₄.
    #[test]
    fn truncation_agrees_with_series_through_fourth_order() {
        let params = p(1.7, 0.03);
        let c = series_coefficients(4).unwrap();
        for r in [0.2, 1.0, 3.5] {
            let dv = eval_perturbation(&params, r, PerturbationTruncation::Quartic).unwrap();
            let series = series_partial_sum(&params, r, &c);
            assert_relative_eq!(dv, series, max_relative = 1e-13);
        }
    }

    proptest! {
        #[test]
        fn series_consistency(a in 0.1f64..5.0, x in 1e-4f64..0.05, r in 0.05f64..20.0) {
            let params = p(a, x / r);
            let c = series_coefficients(8).unwrap();
            let exact = eval_mgesc(&params, r).unwrap();
            let approx = eval_coulomb_core(&params, r).unwrap() + series_partial_sum(&params, r, &c);
            prop_assert!((exact - approx).abs() <= 1e-10 * exact.abs());
        }

        #[test]
        fn scaling_form(a in 0.1f64..5.0, b in 1e-3f64..3.0, r in 0.01f64..30.0) {
            let params = p(a, b);
            let x = b * r;
            let g = -(1.0 / x) * (1.0 + (1.0 + x) * (-2.0 * x).exp());
            let lhs = eval_mgesc(&params, r).unwrap();
            prop_assert!((lhs - a * b * g).abs() <= 1e-13 * lhs.abs());
        }

        #[test]
        fn always_attractive(a in 1e-3f64..10.0, b in 0.0f64..10.0, r in 1e-6f64..1e3) {
            prop_assert!(eval_mgesc(&p(a, b), r).unwrap() < 0.0);
        }
    }
}
