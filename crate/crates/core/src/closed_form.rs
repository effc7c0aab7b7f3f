//! Analytic energy shifts and superpotentials for the n = 0, 1, 2 states.
//!
//! The perturbation kept is ΔV = ab - (2ab³/3) r² + (2ab⁴/3) r³. The constant
//! ab shifts every level; the r² term yields the β³ correction E⁽¹⁾ and the
//! r³ term together with ⟨(W⁽¹⁾)²⟩ yields the β⁴ and β⁶ parts of E⁽²⁾.
//!
//! The first-order superpotential is taken with a plus sign inside its
//! bracket for every state,
//!
//! ```text
//! W⁽¹⁾(r) = -ħ (n+ℓ+1) b³ r / (3√(2m)) · [r + ħ²(n+ℓ+1)(n+ℓ+2)/(2am)].
//! ```
//!
//! The ground-state expression has also been printed with a minus sign in
//! the bracket; that variant is kept behind [`BracketSign::Minus`] only so the
//! two can be compared (the minus form does not reproduce the β⁶ energy
//! coefficient, see the tests below).

use serde::{Deserialize, Serialize};

use crate::coulomb::{coulomb_wavefunction, unperturbed_energy, QuantumNumbers};
use crate::error::{Error, Result};
use crate::moderated::{ClosedFormGroundState, ModeratedWavefunction, WavefunctionDomain};
use crate::potential::PotentialParams;

/// Per-order pieces of a bound-state energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// E⁽⁰⁾, order β⁰
    pub e_coulomb: f64,
    /// constant shift ab, order β¹
    pub e_linear: f64,
    /// E⁽¹⁾, order β³
    pub e_beta3: f64,
    /// b⁴ part of E⁽²⁾
    pub e_beta4: f64,
    /// b⁶ part of E⁽²⁾
    pub e_beta6: f64,
}

/// Truncation orders in β. Orders 2 and 5 carry no new term at this
/// truncation and alias to 1 and 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TruncationOrder {
    Zero,
    One,
    Three,
    Four,
    Six,
}

impl TruncationOrder {
    pub const ALL: [TruncationOrder; 5] = [Self::Zero, Self::One, Self::Three, Self::Four, Self::Six];

    pub fn power(self) -> u32 {
        match self {
            Self::Zero => 0,
            Self::One => 1,
            Self::Three => 3,
            Self::Four => 4,
            Self::Six => 6,
        }
    }
}

impl TryFrom<u32> for TruncationOrder {
    type Error = Error;

    fn try_from(order: u32) -> Result<Self> {
        match order {
            0 => Ok(Self::Zero),
            1 | 2 => Ok(Self::One),
            3 => Ok(Self::Three),
            4 | 5 => Ok(Self::Four),
            6 => Ok(Self::Six),
            other => Err(Error::UnsupportedOrder(other)),
        }
    }
}

impl std::fmt::Display for TruncationOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.power())
    }
}

impl EnergyBreakdown {
    fn pieces(&self) -> [(u32, f64); 5] {
        [
            (0, self.e_coulomb),
            (1, self.e_linear),
            (3, self.e_beta3),
            (4, self.e_beta4),
            (6, self.e_beta6),
        ]
    }

    /// Sum of the pieces with β-power ≤ order, smallest magnitude first.
    pub fn total(&self, order: TruncationOrder) -> f64 {
        let mut kept: Vec<f64> = self
            .pieces()
            .into_iter()
            .filter(|(p, _)| *p <= order.power())
            .map(|(_, v)| v)
            .collect();
        kept.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
        kept.into_iter().sum()
    }

    /// Second-order shift E⁽²⁾ = b⁴ piece + b⁶ piece.
    pub fn second_order(&self) -> f64 {
        self.e_beta6 + self.e_beta4
    }
}

fn ensure_tabulated(qn: QuantumNumbers) -> Result<()> {
    if qn.n <= 2 {
        Ok(())
    } else {
        Err(Error::UnsupportedState { n: qn.n, l: qn.l })
    }
}

/// State-dependent polynomial multiplying -ħ⁴b³/(12am²) in E⁽¹⁾.
fn first_order_polynomial(qn: QuantumNumbers) -> f64 {
    let l = f64::from(qn.l);
    match qn.n {
        0 => (l + 1.0).powi(2) * (l + 2.0) * (2.0 * l + 3.0),
        1 => (l + 2.0).powi(2) * (l + 7.0) * (2.0 * l + 3.0),
        2 => (l + 3.0).powi(2) * (l + 2.0) * (2.0 * l + 23.0),
        _ => unreachable!("checked by ensure_tabulated"),
    }
}

/// Polynomials multiplying ħ⁶b⁴/(48a²m³) and -ħ¹⁰b⁶/(1152a⁴m⁵) in E⁽²⁾.
fn second_order_polynomials(qn: QuantumNumbers) -> (f64, f64) {
    let l = f64::from(qn.l);
    match qn.n {
        0 => (
            (l + 1.0).powi(3) * (l + 2.0) * (2.0 * l + 3.0) * (2.0 * l + 5.0),
            (l + 1.0).powi(6) * (l + 2.0) * (2.0 * l + 3.0) * (8.0 * l * l + 37.0 * l + 43.0),
        ),
        1 => (
            (l + 2.0).powi(3) * (l + 11.0) * (2.0 * l + 3.0) * (2.0 * l + 5.0),
            (l + 2.0).powi(6) * (l + 3.0) * (2.0 * l + 3.0) * (7.0 * l * l + 101.0 * l + 211.0),
        ),
        2 => (
            (l + 2.0) * (l + 3.0).powi(2) * (2.0 * l + 5.0) * (2.0 * l * l + 45.0 * l + 153.0),
            (l + 2.0)
                * (l + 3.0).powi(5)
                * (((16.0 * l + 474.0) * l + 3879.0) * l * l + 12118.0 * l + 12873.0),
        ),
        _ => unreachable!("checked by ensure_tabulated"),
    }
}

/// E⁽¹⁾ for n ∈ {0, 1, 2}.
pub fn first_order_shift(params: &PotentialParams, qn: QuantumNumbers) -> Result<f64> {
    ensure_tabulated(qn)?;
    let PotentialParams { a, b, mass, hbar } = *params;
    Ok(-hbar.powi(4) * b.powi(3) / (12.0 * a * mass * mass) * first_order_polynomial(qn))
}

/// (b⁴ piece, b⁶ piece) of E⁽²⁾ for n ∈ {0, 1, 2}.
pub fn second_order_shift(params: &PotentialParams, qn: QuantumNumbers) -> Result<(f64, f64)> {
    ensure_tabulated(qn)?;
    let PotentialParams { a, b, mass, hbar } = *params;
    let (p4, p6) = second_order_polynomials(qn);
    let e4 = hbar.powi(6) * b.powi(4) / (48.0 * a * a * mass.powi(3)) * p4;
    let e6 = -hbar.powi(10) * b.powi(6) / (1152.0 * a.powi(4) * mass.powi(5)) * p6;
    Ok((e4, e6))
}

pub fn energy_breakdown(params: &PotentialParams, qn: QuantumNumbers) -> Result<EnergyBreakdown> {
    let e_beta3 = first_order_shift(params, qn)?;
    let (e_beta4, e_beta6) = second_order_shift(params, qn)?;
    Ok(EnergyBreakdown {
        e_coulomb: unperturbed_energy(params, qn),
        e_linear: params.a * params.b,
        e_beta3,
        e_beta4,
        e_beta6,
    })
}

/// Energy truncated at the given order in β.
pub fn total_energy(
    params: &PotentialParams,
    qn: QuantumNumbers,
    order: TruncationOrder,
) -> Result<f64> {
    Ok(energy_breakdown(params, qn)?.total(order))
}

/// Sign inside the bracket of W⁽¹⁾.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BracketSign {
    #[default]
    Plus,
    Minus,
}

/// W⁽¹⁾(r) for any n, with the plus-sign bracket.
pub fn first_order_superpotential(
    params: &PotentialParams,
    qn: QuantumNumbers,
    r: f64,
) -> Result<f64> {
    first_order_superpotential_with_sign(params, qn, r, BracketSign::Plus)
}

pub fn first_order_superpotential_with_sign(
    params: &PotentialParams,
    qn: QuantumNumbers,
    r: f64,
    sign: BracketSign,
) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain { what: "the first-order superpotential", r });
    }
    Ok(w1_unchecked(params, qn, r, sign))
}

#[inline]
pub(crate) fn w1_unchecked(
    params: &PotentialParams,
    qn: QuantumNumbers,
    r: f64,
    sign: BracketSign,
) -> f64 {
    let PotentialParams { a, b, mass, hbar } = *params;
    let nn = f64::from(qn.principal());
    let offset = hbar * hbar * nn * (nn + 1.0) / (2.0 * a * mass);
    let bracket = match sign {
        BracketSign::Plus => r + offset,
        BracketSign::Minus => r - offset,
    };
    -hbar * nn * b.powi(3) * r / (3.0 * (2.0 * mass).sqrt()) * bracket
}

/// Coefficients a₁, a₂, a₃ of the ground-state W⁽²⁾.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundStateCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    /// a₄·b⁴ = a₂ b⁴ + 12am b³/(ħ²(ℓ+1)²), finite at b = 0.
    pub a4_b4: f64,
}

pub fn ground_state_coefficients(params: &PotentialParams, l: u32) -> GroundStateCoefficients {
    let PotentialParams { a, b, mass, hbar } = *params;
    let l = f64::from(l);
    let (h2, b2) = (hbar * hbar, b * b);
    let a1 = h2 * (l + 1.0) * (3.0 * l + 7.0) * b2 / (2.0 * a * mass)
        - 12.0 * a * mass / (h2 * (l + 1.0).powi(2));
    let a2 = h2 * h2 * (l + 1.0).powi(2) * (8.0 * l * l + 37.0 * l + 43.0) * b2
        / (8.0 * a * a * mass * mass)
        - 1.5 * (2.0 * l + 5.0) / (l + 1.0);
    let a3 = h2 * (l + 1.0).powi(3) / (18.0 * a * mass);
    let a4_b4 = a2 * b2 * b2 + 12.0 * a * mass * b.powi(3) / (h2 * (l + 1.0).powi(2));
    GroundStateCoefficients { a1, a2, a3, a4_b4 }
}

/// Ground-state W⁽²⁾(r) in its closed form
///
/// ```text
/// W⁽²⁾ = -(ħ b⁴ a₃ r / (2√(2m))) {b² r³ + a₁ r² + a₂ [r + ħ²(ℓ+1)(ℓ+2)/(2am)]}
///        - ħ(ℓ+1)/(2√(2m) a) · E⁽²⁾
/// ```
pub fn second_order_superpotential_ground(
    params: &PotentialParams,
    l: u32,
    r: f64,
) -> Result<f64> {
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain { what: "the second-order superpotential", r });
    }
    let e2 = energy_breakdown(params, QuantumNumbers::new(0, l))?.second_order();
    Ok(w2_ground_unchecked(params, l, r, &ground_state_coefficients(params, l), e2))
}

pub(crate) fn w2_ground_unchecked(
    params: &PotentialParams,
    l: u32,
    r: f64,
    c: &GroundStateCoefficients,
    e2: f64,
) -> f64 {
    let PotentialParams { a, b, mass, hbar } = *params;
    let lf = f64::from(l);
    let root2m = (2.0 * mass).sqrt();
    let offset = hbar * hbar * (lf + 1.0) * (lf + 2.0) / (2.0 * a * mass);
    let braces = b * b * r.powi(3) + c.a1 * r * r + c.a2 * (r + offset);
    -hbar * b.powi(4) * c.a3 * r / (2.0 * root2m) * braces
        - hbar * (lf + 1.0) / (2.0 * root2m * a) * e2
}

/// Which construction of the ground-state wavefunction to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroundStatePath {
    /// χ₀ · exp(-(√(2m)/ħ) ∫₀^r (W⁽¹⁾ + W⁽²⁾) dx), integral done numerically.
    #[default]
    NumericIntegral,
    /// r^{ℓ+1} exp(P(r)) with the fifth-order polynomial exponent P.
    ClosedFormExponent,
}

/// Renormalised ground-state wavefunction including the first- and
/// second-order moderating factors.
#[derive(Debug, Clone)]
pub enum GroundStateWavefunction {
    Numeric(ModeratedWavefunction),
    ClosedForm(ClosedFormGroundState),
}

impl GroundStateWavefunction {
    pub fn eval(&self, r: f64) -> f64 {
        match self {
            Self::Numeric(w) => w.eval(r),
            Self::ClosedForm(w) => w.eval(r),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        match self {
            Self::Numeric(w) => w.norm_squared(),
            Self::ClosedForm(w) => w.norm_squared(),
        }
    }

    pub fn domain(&self) -> WavefunctionDomain {
        match self {
            Self::Numeric(w) => w.domain(),
            Self::ClosedForm(w) => w.domain(),
        }
    }
}

pub fn ground_state_wavefunction(
    params: &PotentialParams,
    l: u32,
    path: GroundStatePath,
) -> Result<GroundStateWavefunction> {
    ground_state_wavefunction_on(params, l, path, WavefunctionDomain::for_state(params, QuantumNumbers::new(0, l)))
}

pub fn ground_state_wavefunction_on(
    params: &PotentialParams,
    l: u32,
    path: GroundStatePath,
    domain: WavefunctionDomain,
) -> Result<GroundStateWavefunction> {
    let qn = QuantumNumbers::new(0, l);
    let e2 = energy_breakdown(params, qn)?.second_order();
    let coeffs = ground_state_coefficients(params, l);
    match path {
        GroundStatePath::NumericIntegral => {
            let p = *params;
            let w = move |r: f64| {
                w1_unchecked(&p, qn, r, BracketSign::Plus) + w2_ground_unchecked(&p, l, r, &coeffs, e2)
            };
            let chi = coulomb_wavefunction(params, qn);
            Ok(GroundStateWavefunction::Numeric(ModeratedWavefunction::build(
                params, chi, w, domain,
            )?))
        }
        GroundStatePath::ClosedFormExponent => {
            let exponent = closed_form_exponent(params, l, &coeffs, e2);
            Ok(GroundStateWavefunction::ClosedForm(ClosedFormGroundState::build(
                l, exponent, domain,
            )?))
        }
    }
}

/// Coefficients p₁ … p₅ of the closed-form exponent P(r) = Σ p_i r^i.
pub fn closed_form_exponent(
    params: &PotentialParams,
    l: u32,
    c: &GroundStateCoefficients,
    e2: f64,
) -> [f64; 5] {
    let PotentialParams { a, b, mass, hbar } = *params;
    let lf = f64::from(l);
    let b4 = b.powi(4);
    [
        (lf + 1.0) * e2 / (2.0 * a) - 2.0 * a * mass / ((lf + 1.0) * hbar * hbar),
        2.25 * (lf + 2.0) / (lf + 1.0).powi(2) * c.a3 * c.a3 * c.a4_b4,
        c.a3 * c.a4_b4 / 6.0,
        c.a1 * c.a3 * b4 / 8.0,
        c.a3 * b.powi(6) / 10.0,
    ]
}
