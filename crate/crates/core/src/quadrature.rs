//! Correction integrals evaluated numerically against the exact Coulomb
//! states. Works for any (n, ℓ) and serves as the oracle for the closed
//! forms.
//!
//! Integrands over [0, ∞) are polynomial × e^{-2β_c r}, so the default
//! scheme is a Gauss–Laguerre rule scaled by the state's decay rate. The
//! error estimate is the change against a rule with half as many nodes.
//!
//! Cumulative integrals ∫₀^r, needed for the superpotentials, are done
//! directly: a Gauss–Legendre rule on [0, r] below the mean radius, and
//! the complementary tail -∫_r^∞ (a shifted Laguerre rule) beyond it. In
//! both branches the exponential e^{-2β_c r} of χ² is cancelled
//! analytically against the quotient 1/χ²(r), so W stays accurate far into
//! the tail.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::closed_form::{w1_unchecked, BracketSign};
use crate::coulomb::{coulomb_wavefunction, CoulombState, QuantumNumbers};
use crate::error::{Error, Result};
use crate::gauss::GaussRule;
use crate::moderated::{ModeratedWavefunction, WavefunctionDomain};
use crate::potential::PotentialParams;

/// Evaluation points closer than this to a node of χ_n are rejected.
pub const NODE_EXCLUSION: f64 = 1e-3;

/// Highest moment power with guaranteed accuracy at default settings.
pub const MAX_MOMENT_POWER: u32 = 8;

const HEAD_RULE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    GaussLaguerreMapped,
    /// Composite Gauss–Legendre panels on a truncated domain, doubled until
    /// converged.
    AdaptiveComposite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub node_count: usize,
    pub scheme: Scheme,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { node_count: 200, scheme: Scheme::GaussLaguerreMapped, rel_tol: 1e-12 }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.node_count < 32 {
            return Err(Error::InvalidParameter(format!(
                "node_count must be >= 32, got {}",
                self.node_count
            )));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("rel_tol must be > 0, got {}", self.rel_tol)));
        }
        Ok(())
    }
}

fn laguerre_rule(nodes: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("rule cache poisoned");
    guard.entry(nodes).or_insert_with(|| Arc::new(GaussRule::laguerre(nodes))).clone()
}

fn legendre_rule(nodes: usize) -> Arc<GaussRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().expect("rule cache poisoned");
    guard.entry(nodes).or_insert_with(|| Arc::new(GaussRule::legendre(nodes))).clone()
}

/// ∫₀^∞ χ(r)² f(r) dr with an error estimate.
fn weighted_integral(
    state: &CoulombState,
    spec: &QuadratureSpec,
    f: impl Fn(f64) -> f64,
) -> Result<f64> {
    spec.validate()?;
    let integrand = |r: f64| {
        let p = state.poly(r);
        p * p * f(r)
    };
    let (fine, coarse, scale) = match spec.scheme {
        Scheme::GaussLaguerreMapped => {
            let rate = 2.0 * state.decay_rate;
            let fine = laguerre_rule(spec.node_count).integrate_exp(rate, integrand);
            let coarse = laguerre_rule(spec.node_count / 2).integrate_exp(rate, integrand);
            let scale = laguerre_rule(spec.node_count / 2).integrate_exp(rate, |r| integrand(r).abs());
            (fine, coarse, scale)
        }
        Scheme::AdaptiveComposite => {
            let r_max = (2.0 * crate::coulomb::UNDERFLOW_EXPONENT / 3.0) / state.decay_rate;
            let full = |r: f64| integrand(r) * (-2.0 * state.decay_rate * r).exp();
            let rule = legendre_rule(16);
            let eval = |panels: usize| -> f64 {
                let h = r_max / panels as f64;
                (0..panels)
                    .map(|i| rule.integrate_interval(i as f64 * h, (i + 1) as f64 * h, full))
                    .sum()
            };
            let mut panels = spec.node_count;
            let mut prev = eval(panels);
            loop {
                panels *= 2;
                let next = eval(panels);
                let scale = {
                    let h = r_max / panels as f64;
                    (0..panels)
                        .map(|i| rule.integrate_interval(i as f64 * h, (i + 1) as f64 * h, |r| full(r).abs()))
                        .sum::<f64>()
                };
                if (next - prev).abs() <= spec.rel_tol * scale || panels > 1 << 16 {
                    break (next, prev, scale);
                }
                prev = next;
            }
        }
    };
    if !fine.is_finite() {
        return Err(Error::NumericalFailure("quadrature produced a non-finite value".into()));
    }
    let estimate = if scale > 0.0 { (fine - coarse).abs() / scale } else { 0.0 };
    if estimate > spec.rel_tol {
        return Err(Error::Accuracy { estimate, tolerance: spec.rel_tol });
    }
    Ok(fine)
}

/// ⟨r^k⟩ = ∫ χ_n² r^k dr.
pub fn expectation_power(
    params: &PotentialParams,
    qn: QuantumNumbers,
    k: u32,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if k > MAX_MOMENT_POWER {
        return Err(Error::InvalidParameter(format!(
            "moment power {k} exceeds the supported maximum {MAX_MOMENT_POWER}"
        )));
    }
    let state = coulomb_wavefunction(params, qn);
    weighted_integral(&state, spec, |r| r.powi(k as i32))
}

/// E⁽¹⁾ = -(2ab³/3) ⟨r²⟩.
pub fn first_order_shift_quad(
    params: &PotentialParams,
    qn: QuantumNumbers,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let r2 = expectation_power(params, qn, 2, spec)?;
    Ok(-2.0 * params.a * params.b.powi(3) / 3.0 * r2)
}

/// ∫₀^∞ χ² [E⁽¹⁾ + (2ab³/3) x²] dx, which must vanish for W⁽¹⁾ to stay
/// bounded at infinity.
pub fn first_order_boundedness_integral(
    params: &PotentialParams,
    qn: QuantumNumbers,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let e1 = first_order_shift_quad(params, qn, spec)?;
    let c = 2.0 * params.a * params.b.powi(3) / 3.0;
    let state = coulomb_wavefunction(params, qn);
    weighted_integral(&state, spec, |x| e1 + c * x * x)
}

/// Mean radius ⟨r⟩ = ħ²[3N² - ℓ(ℓ+1)]/(4ma), where the cumulative integral
/// switches from the head to the tail form.
fn split_radius(params: &PotentialParams, qn: QuantumNumbers) -> f64 {
    let nn = f64::from(qn.principal());
    let ll = f64::from(qn.l * (qn.l + 1));
    params.hbar * params.hbar * (3.0 * nn * nn - ll) / (4.0 * params.mass * params.a)
}

/// (√(2m)/ħ) · (1/χ²(r)) · ∫₀^r χ²(x) g(x) dx, where ∫₀^∞ χ² g = 0.
fn superpotential_quotient(
    params: &PotentialParams,
    state: &CoulombState,
    r: f64,
    spec: &QuadratureSpec,
    g: impl Fn(f64) -> f64,
) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain { what: "a quadrature superpotential", r });
    }
    let (distance, node) = state.distance_to_node(r);
    if distance < NODE_EXCLUSION {
        return Err(Error::SingularPoint { r, node, distance });
    }
    let rate = 2.0 * state.decay_rate;
    let p_r = state.poly(r);
    let cumulative_over_chi2 = if r <= split_radius(params, state.qn) {
        legendre_rule(HEAD_RULE).integrate_interval(0.0, r, |x| {
            let p = state.poly(x);
            p * p * g(x) * (rate * (r - x)).exp()
        }) / (p_r * p_r)
    } else {
        let tail = laguerre_rule(spec.node_count).integrate_exp(rate, |t| {
            let x = r + t;
            let p = state.poly(x);
            p * p * g(x)
        });
        -tail / (p_r * p_r)
    };
    let w = (2.0 * params.mass).sqrt() / params.hbar * cumulative_over_chi2;
    if w.is_finite() {
        Ok(w)
    } else {
        Err(Error::NumericalFailure(format!("superpotential quotient not finite at r = {r}")))
    }
}

/// W⁽¹⁾(r) from its defining integral.
pub fn first_order_superpotential_quad(
    params: &PotentialParams,
    qn: QuantumNumbers,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let e1 = first_order_shift_quad(params, qn, spec)?;
    let c = 2.0 * params.a * params.b.powi(3) / 3.0;
    let state = coulomb_wavefunction(params, qn);
    superpotential_quotient(params, &state, r, spec, |x| e1 + c * x * x)
}

/// ⟨(W⁽¹⁾)²⟩ for the closed-form W⁽¹⁾ with either bracket sign. At n = 0,
/// ℓ = 0, a = m = ħ = 1 the plus sign gives (43/192) b⁶.
pub fn first_order_superpotential_moment(
    params: &PotentialParams,
    qn: QuantumNumbers,
    sign: BracketSign,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let state = coulomb_wavefunction(params, qn);
    weighted_integral(&state, spec, |r| w1_unchecked(params, qn, r, sign).powi(2))
}

/// Source of W⁽¹⁾ inside the ⟨(W⁽¹⁾)²⟩ term of E⁽²⁾.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FirstOrderSource {
    /// The closed-form hierarchy W⁽¹⁾ (plus-sign bracket); regular for all n.
    #[default]
    ClosedForm,
    /// The quotient integral. Only the nodeless n = 0 states give an
    /// integrable ⟨(W⁽¹⁾)²⟩: at a node of χ_n the cumulative integral is
    /// generally non-zero, so W⁽¹⁾ has a pole there and χ²(W⁽¹⁾)² ~ 1/(r - r₀)².
    Quotient,
}

/// E⁽²⁾ = (2ab⁴/3) ⟨r³⟩ - ⟨(W⁽¹⁾)²⟩ with the closed-form W⁽¹⁾.
pub fn second_order_shift_quad(
    params: &PotentialParams,
    qn: QuantumNumbers,
    spec: &QuadratureSpec,
) -> Result<f64> {
    second_order_shift_quad_with(params, qn, spec, FirstOrderSource::ClosedForm)
}

/// (⟨(2ab⁴/3) r³⟩, ⟨(W⁽¹⁾)²⟩), the two pieces of E⁽²⁾.
pub fn second_order_pieces_quad(
    params: &PotentialParams,
    qn: QuantumNumbers,
    spec: &QuadratureSpec,
    source: FirstOrderSource,
) -> Result<(f64, f64)> {
    let state = coulomb_wavefunction(params, qn);
    let quartic = 2.0 * params.a * params.b.powi(4) / 3.0 * weighted_integral(&state, spec, |r| r.powi(3))?;
    let w1_squared = match source {
        FirstOrderSource::ClosedForm => weighted_integral(&state, spec, |r| {
            w1_unchecked(params, qn, r, BracketSign::Plus).powi(2)
        })?,
        FirstOrderSource::Quotient => {
            if qn.n > 0 {
                return Err(Error::SingularPoint {
                    r: state.nodes()[0],
                    node: state.nodes()[0],
                    distance: 0.0,
                });
            }
            let e1 = first_order_shift_quad(params, qn, spec)?;
            let c = 2.0 * params.a * params.b.powi(3) / 3.0;
            let failure = RefCell::new(None);
            let value = weighted_integral(&state, spec, |r| {
                match superpotential_quotient(params, &state, r, spec, |x| e1 + c * x * x) {
                    Ok(w) => w * w,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                }
            });
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            value?
        }
    };
    Ok((quartic, w1_squared))
}

pub fn second_order_shift_quad_with(
    params: &PotentialParams,
    qn: QuantumNumbers,
    spec: &QuadratureSpec,
    source: FirstOrderSource,
) -> Result<f64> {
    let (quartic, w1_squared) = second_order_pieces_quad(params, qn, spec, source)?;
    Ok(quartic - w1_squared)
}

/// W⁽²⁾(r) from its defining integral, with E⁽²⁾ and W⁽¹⁾ from the
/// closed-form hierarchy.
pub fn second_order_superpotential_quad(
    params: &PotentialParams,
    qn: QuantumNumbers,
    r: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let e2 = second_order_shift_quad(params, qn, spec)?;
    let state = coulomb_wavefunction(params, qn);
    let p = *params;
    let c = 2.0 * params.a * params.b.powi(4) / 3.0;
    superpotential_quotient(params, &state, r, spec, move |x| {
        e2 + w1_unchecked(&p, qn, x, BracketSign::Plus).powi(2) - c * x.powi(3)
    })
}

/// χ_n · exp(-(√(2m)/ħ) ∫₀^r (W⁽¹⁾ + W⁽²⁾) dx), renormalised.
///
/// For n = 0 both superpotentials come from their quotient integrals. For
/// n ≥ 1 the quotients have poles at the nodes of χ_n and the integral
/// through them diverges; the exponent then uses the pole-free closed-form
/// W⁽¹⁾ and omits W⁽²⁾.
pub fn moderated_wavefunction_quad(
    params: &PotentialParams,
    qn: QuantumNumbers,
    spec: &QuadratureSpec,
) -> Result<ModeratedWavefunction> {
    if qn.n > 2 {
        return Err(Error::UnsupportedState { n: qn.n, l: qn.l });
    }
    spec.validate()?;
    let domain = WavefunctionDomain::for_state(params, qn);
    let chi = coulomb_wavefunction(params, qn);
    let p = *params;
    if params.b == 0.0 {
        return ModeratedWavefunction::build(params, chi, |_| 0.0, domain);
    }
    if qn.n > 0 {
        return ModeratedWavefunction::build(
            params,
            chi,
            move |r| w1_unchecked(&p, qn, r, BracketSign::Plus),
            domain,
        );
    }
    let e1 = first_order_shift_quad(params, qn, spec)?;
    let e2 = second_order_shift_quad(params, qn, spec)?;
    let c1 = 2.0 * params.a * params.b.powi(3) / 3.0;
    let c2 = 2.0 * params.a * params.b.powi(4) / 3.0;
    let state = chi.clone();
    let spec = *spec;
    let w = move |r: f64| {
        if r <= 0.0 {
            return 0.0;
        }
        let g = |x: f64| {
            let w1 = w1_unchecked(&p, qn, x, BracketSign::Plus);
            (e1 + c1 * x * x) + (e2 + w1 * w1 - c2 * x.powi(3))
        };
        // n = 0 has no nodes, so the quotient cannot fail
        superpotential_quotient(&p, &state, r, &spec, g).unwrap_or(f64::NAN)
    };
    ModeratedWavefunction::build(params, chi, w, domain)
}
