//! Exact bound states of the unperturbed problem V₀ = -2a/r plus the
//! centrifugal barrier.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauss::{symmetric_tridiagonal_eigen, GaussRule};
use crate::potential::PotentialParams;

/// Beyond decay_rate·r = 700 the exponential factor underflows an f64 and
/// the wavefunction is reported as exactly zero.
pub const UNDERFLOW_EXPONENT: f64 = 700.0;

const NORM_RULE_NODES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    /// Radial quantum number: the number of interior nodes.
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub const fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }

    /// n + ℓ + 1
    pub fn principal(&self) -> u32 {
        self.n + self.l + 1
    }

    /// Spectroscopic label for s/p/d/f states, e.g. "2s" for n = 1, ℓ = 0.
    pub fn label(&self) -> String {
        const LETTERS: [char; 7] = ['s', 'p', 'd', 'f', 'g', 'h', 'i'];
        match LETTERS.get(self.l as usize) {
            Some(c) => format!("{}{}", self.principal(), c),
            None => format!("n{}l{}", self.n, self.l),
        }
    }
}

impl std::str::FromStr for QuantumNumbers {
    type Err = Error;

    /// Accepts spectroscopic labels ("1s", "3d") or "n,l" pairs.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("unrecognised state '{s}'"));
        if let Some((n, l)) = s.split_once(',') {
            let n = n.trim().parse().map_err(|_| bad())?;
            let l = l.trim().parse().map_err(|_| bad())?;
            return Ok(Self::new(n, l));
        }
        let letter = s.chars().last().ok_or_else(bad)?;
        let l = "spdfghi".find(letter).ok_or_else(bad)? as u32;
        let principal: u32 = s[..s.len() - 1].parse().map_err(|_| bad())?;
        if principal < l + 1 {
            return Err(bad());
        }
        Ok(Self::new(principal - l - 1, l))
    }
}

/// E⁽⁰⁾ = -2 m a² / (ħ² (n+ℓ+1)²).
pub fn unperturbed_energy(params: &PotentialParams, qn: QuantumNumbers) -> f64 {
    let nn = f64::from(qn.principal());
    -2.0 * params.mass * params.a * params.a / (params.hbar * params.hbar * nn * nn)
}

/// Generalised Laguerre polynomial L_n^k(x) by upward recurrence in n.
pub fn laguerre(n: u32, k: u32, x: f64) -> f64 {
    let k = f64::from(k);
    if n == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + k - x;
    for j in 1..n {
        let j = f64::from(j);
        let next = ((2.0 * j + 1.0 + k - x) * cur - (j + k) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// A normalised Coulomb bound state
/// χ(r) = N r^{ℓ+1} e^{-β_c r} L_n^{2ℓ+1}(2 β_c r), β_c = 2ma/((n+ℓ+1)ħ²).
#[derive(Debug, Clone, PartialEq)]
pub struct CoulombState {
    pub qn: QuantumNumbers,
    pub decay_rate: f64,
    pub norm_constant: f64,
    nodes: Vec<f64>,
}

impl CoulombState {
    fn unnormalised_poly(&self, r: f64) -> f64 {
        let QuantumNumbers { n, l } = self.qn;
        r.powi(l as i32 + 1) * laguerre(n, 2 * l + 1, 2.0 * self.decay_rate * r)
    }

    /// χ(r) without its exponential factor: χ(r) = poly(r) e^{-β_c r}.
    pub fn poly(&self, r: f64) -> f64 {
        self.norm_constant * self.unnormalised_poly(r)
    }

    /// χ(r); zero beyond the underflow threshold.
    pub fn eval(&self, r: f64) -> f64 {
        let exponent = self.decay_rate * r;
        if exponent > UNDERFLOW_EXPONENT {
            return 0.0;
        }
        self.poly(r) * (-exponent).exp()
    }

    /// χ'(r)/χ(r) from the analytic derivative; infinite at nodes.
    pub fn log_derivative(&self, r: f64) -> f64 {
        let QuantumNumbers { n, l } = self.qn;
        let x = 2.0 * self.decay_rate * r;
        let lag = laguerre(n, 2 * l + 1, x);
        let dlag = if n == 0 { 0.0 } else { -laguerre(n - 1, 2 * l + 2, x) };
        f64::from(l + 1) / r - self.decay_rate + 2.0 * self.decay_rate * dlag / lag
    }

    /// Interior zeros of χ in ascending order.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Distance from r to the nearest interior node (infinite when none).
    pub fn distance_to_node(&self, r: f64) -> (f64, f64) {
        self.nodes
            .iter()
            .map(|&node| ((r - node).abs(), node))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .unwrap_or((f64::INFINITY, f64::NAN))
    }

    /// ∫₀^∞ χ(r)² r^k dr, exact for the polynomial × exponential integrand.
    pub fn moment(&self, k: u32) -> f64 {
        let nodes = NORM_RULE_NODES.max((self.qn.n + self.qn.l + k) as usize + 8);
        let rule = GaussRule::laguerre(nodes);
        rule.integrate_exp(2.0 * self.decay_rate, |r| {
            let p = self.poly(r);
            p * p * r.powi(k as i32)
        })
    }
}

/// Builds the normalised state, fixing N by Gauss–Laguerre quadrature.
pub fn coulomb_wavefunction(params: &PotentialParams, qn: QuantumNumbers) -> CoulombState {
    let decay_rate =
        2.0 * params.mass * params.a / (f64::from(qn.principal()) * params.hbar * params.hbar);
    let mut state = CoulombState { qn, decay_rate, norm_constant: 1.0, nodes: Vec::new() };
    let rule = GaussRule::laguerre(NORM_RULE_NODES.max((qn.n + qn.l) as usize + 8));
    let norm2 = rule.integrate_exp(2.0 * decay_rate, |r| {
        let p = state.unnormalised_poly(r);
        p * p
    });
    state.norm_constant = norm2.sqrt().recip();
    state.nodes = laguerre_roots(qn.n, 2 * qn.l + 1)
        .into_iter()
        .map(|x| x / (2.0 * decay_rate))
        .collect();
    state
}

/// Zeros of L_n^k: eigenvalues of the Jacobi matrix of the generalised
/// Laguerre weight, polished by Newton steps.
fn laguerre_roots(n: u32, k: u32) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let kf = f64::from(k);
    let diag: Vec<f64> = (0..n).map(|i| 2.0 * f64::from(i) + 1.0 + kf).collect();
    let off: Vec<f64> = (1..n).map(|i| (f64::from(i) * (f64::from(i) + kf)).sqrt()).collect();
    let (mut roots, _) = symmetric_tridiagonal_eigen(diag, off);
    roots.sort_by(f64::total_cmp);
    for x in roots.iter_mut() {
        for _ in 0..20 {
            let f = laguerre(n, k, *x);
            let df = -laguerre(n - 1, k + 1, *x);
            let dx = f / df;
            *x -= dx;
            if dx.abs() <= 1e-15 * x.abs() {
                break;
            }
        }
    }
    roots
}

/// Normalisation constant in the closed form
/// [4ma/((n+ℓ+1)ħ²)]^{ℓ+1} / (n+ℓ+1) / √(ħ² (n+2ℓ+1)! / (2 m a n!)).
///
/// Only used to cross-check the quadrature normalisation.
pub fn tabulated_normalization(params: &PotentialParams, qn: QuantumNumbers) -> f64 {
    let QuantumNumbers { n, l } = qn;
    let nn = f64::from(qn.principal());
    let (a, m, hbar) = (params.a, params.mass, params.hbar);
    let ratio: f64 = ((n + 1)..=(n + 2 * l + 1)).map(f64::from).product();
    (4.0 * m * a / (nn * hbar * hbar)).powi(l as i32 + 1) / nn
        / (hbar * hbar * ratio / (2.0 * m * a)).sqrt()
}

/// W(r) = -(ħ/√(2m)) (ℓ+1)/r + √(2m) a / ((ℓ+1) ħ).
pub fn zeroth_superpotential(params: &PotentialParams, l: u32, r: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Domain { what: "the zeroth-order superpotential", r });
    }
    let lp1 = f64::from(l + 1);
    let root2m = (2.0 * params.mass).sqrt();
    Ok(-(params.hbar / root2m) * lp1 / r + root2m * params.a / (lp1 * params.hbar))
}
