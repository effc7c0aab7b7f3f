//! Wavefunctions of the form χ(r)·u(r) with the moderating factor
//! u(r) = exp(-(√(2m)/ħ) ∫₀^r W(x) dx), renormalised on a finite domain.
//!
//! The exponent is tabulated at panel edges with an 8-point Gauss–Legendre
//! rule per panel; evaluation at an arbitrary r adds one more partial panel,
//! so the result agrees with the full-line integral to rule precision.

use std::fmt;
use std::sync::Arc;

use crate::coulomb::{CoulombState, QuantumNumbers};
use crate::error::{Error, Result};
use crate::gauss::GaussRule;
use crate::potential::PotentialParams;

const PANEL_RULE: usize = 8;
const NORM_RULE: usize = 16;

/// Finite interval [0, r_max] used for renormalisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavefunctionDomain {
    pub r_max: f64,
    pub panels: usize,
}

impl WavefunctionDomain {
    /// 40 (n+ℓ+1) ħ²/(2ma), matching the default eigensolver box.
    pub fn for_state(params: &PotentialParams, qn: QuantumNumbers) -> Self {
        let length = params.hbar * params.hbar / (2.0 * params.mass * params.a);
        Self { r_max: 40.0 * f64::from(qn.principal()) * length, panels: 400 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.r_max > 0.0 && self.r_max.is_finite()) || self.panels == 0 {
            return Err(Error::InvalidParameter(format!("bad wavefunction domain {self:?}")));
        }
        Ok(())
    }

    fn width(&self) -> f64 {
        self.r_max / self.panels as f64
    }
}

type Superpotential = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// χ(r) · exp(-(√(2m)/ħ) ∫₀^r W), unit norm on its domain.
#[derive(Clone)]
pub struct ModeratedWavefunction {
    chi: CoulombState,
    superpotential: Superpotential,
    scale: f64,
    domain: WavefunctionDomain,
    cumulative: Vec<f64>,
    rule: GaussRule,
    norm: f64,
}

impl fmt::Debug for ModeratedWavefunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModeratedWavefunction")
            .field("qn", &self.chi.qn)
            .field("domain", &self.domain)
            .field("norm", &self.norm)
            .finish_non_exhaustive()
    }
}

impl ModeratedWavefunction {
    pub fn build(
        params: &PotentialParams,
        chi: CoulombState,
        superpotential: impl Fn(f64) -> f64 + Send + Sync + 'static,
        domain: WavefunctionDomain,
    ) -> Result<Self> {
        domain.validate()?;
        let rule = GaussRule::legendre(PANEL_RULE);
        let superpotential: Superpotential = Arc::new(superpotential);
        let h = domain.width();
        let mut cumulative = Vec::with_capacity(domain.panels + 1);
        let mut acc = 0.0;
        cumulative.push(0.0);
        for i in 0..domain.panels {
            let lo = i as f64 * h;
            acc += rule.integrate_interval(lo, lo + h, |x| superpotential(x));
            cumulative.push(acc);
        }
        if !acc.is_finite() {
            return Err(Error::NumericalFailure("moderating exponent is not finite".into()));
        }
        let mut wf = Self {
            chi,
            superpotential,
            scale: (2.0 * params.mass).sqrt() / params.hbar,
            domain,
            cumulative,
            rule,
            norm: 1.0,
        };
        let norm2 = wf.integrate_squared();
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::NumericalFailure(format!("cannot normalise: ∫ψ² = {norm2}")));
        }
        wf.norm = norm2.sqrt().recip();
        Ok(wf)
    }

    /// ∫₀^r W(x) dx.
    pub fn exponent_integral(&self, r: f64) -> f64 {
        let h = self.domain.width();
        let k = ((r / h).floor() as usize).min(self.domain.panels);
        let base = k as f64 * h;
        let partial = if r > base {
            self.rule.integrate_interval(base, r, |x| (self.superpotential)(x))
        } else {
            0.0
        };
        self.cumulative[k] + partial
    }

    /// The moderating factor u(r) before renormalisation.
    pub fn moderating_factor(&self, r: f64) -> f64 {
        (-self.scale * self.exponent_integral(r)).exp()
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let chi = self.chi.eval(r);
        if chi == 0.0 {
            return 0.0;
        }
        self.norm * chi * self.moderating_factor(r)
    }

    /// ψ(r)/χ(r) including the renormalisation constant.
    pub fn ratio_to_unperturbed(&self, r: f64) -> f64 {
        self.norm * self.moderating_factor(r)
    }

    /// ∫₀^{r_max} ψ² dr on the composite rule used for normalisation.
    pub fn norm_squared(&self) -> f64 {
        self.integrate_squared()
    }

    /// ∫₀^{r_max} ψ² r^k dr.
    pub fn moment(&self, k: i32) -> f64 {
        composite(&self.domain, |r| self.eval(r).powi(2) * r.powi(k))
    }

    pub fn domain(&self) -> WavefunctionDomain {
        self.domain
    }

    pub fn unperturbed(&self) -> &CoulombState {
        &self.chi
    }

    fn integrate_squared(&self) -> f64 {
        composite(&self.domain, |r| self.eval(r).powi(2))
    }
}

/// N r^{ℓ+1} exp(P(r)) with P(r) = Σ_{i=1}^{5} p_i r^i, unit norm on its
/// domain.
#[derive(Debug, Clone)]
pub struct ClosedFormGroundState {
    l: u32,
    exponent: [f64; 5],
    domain: WavefunctionDomain,
    norm: f64,
}

impl ClosedFormGroundState {
    pub fn build(l: u32, exponent: [f64; 5], domain: WavefunctionDomain) -> Result<Self> {
        domain.validate()?;
        let mut wf = Self { l, exponent, domain, norm: 1.0 };
        let norm2 = composite(&domain, |r| wf.eval(r).powi(2));
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(Error::NumericalFailure(format!("cannot normalise: ∫ψ² = {norm2}")));
        }
        wf.norm = norm2.sqrt().recip();
        Ok(wf)
    }

    pub fn exponent(&self, r: f64) -> f64 {
        self.exponent.iter().rev().fold(0.0, |acc, p| (acc + p) * r)
    }

    pub fn coefficients(&self) -> [f64; 5] {
        self.exponent
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        self.norm * r.powi(self.l as i32 + 1) * self.exponent(r).exp()
    }

    pub fn norm_squared(&self) -> f64 {
        composite(&self.domain, |r| self.eval(r).powi(2))
    }

    pub fn domain(&self) -> WavefunctionDomain {
        self.domain
    }
}

fn composite(domain: &WavefunctionDomain, mut f: impl FnMut(f64) -> f64) -> f64 {
    let rule = GaussRule::legendre(NORM_RULE);
    let h = domain.width();
    (0..domain.panels)
        .map(|i| {
            let lo = i as f64 * h;
            rule.integrate_interval(lo, lo + h, &mut f)
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coulomb::coulomb_wavefunction;

    #[test]
    fn constant_superpotential_gives_exponential_factor() {
        let params = PotentialParams::new(1.0, 0.0).unwrap();
        let qn = QuantumNumbers::new(0, 0);
        let chi = coulomb_wavefunction(&params, qn);
        let domain = WavefunctionDomain::for_state(&params, qn);
        let wf = ModeratedWavefunction::build(&params, chi.clone(), |_| 0.25, domain).unwrap();
        for r in [0.3, 1.234, 7.9] {
            let want = (-(2f64.sqrt()) * 0.25 * r).exp();
            assert!((wf.moderating_factor(r) - want).abs() < 1e-14);
        }
        // u = e^{-r/√8}: χ·u is again a pure exponential state
        assert!((wf.norm_squared() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn closed_form_horner() {
        let domain = WavefunctionDomain { r_max: 10.0, panels: 50 };
        let wf = ClosedFormGroundState::build(0, [-1.0, 0.5, 0.0, -0.25, 0.0], domain).unwrap();
        let r: f64 = 1.7;
        let want = -r + 0.5 * r * r - 0.25 * r.powi(4);
        assert!((wf.exponent(r) - want).abs() < 1e-14);
    }

    #[test]
    fn bad_domain_rejected() {
        assert!(ClosedFormGroundState::build(0, [-1.0; 5], WavefunctionDomain { r_max: 0.0, panels: 4 }).is_err());
    }
}
