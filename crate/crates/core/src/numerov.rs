//! Shooting eigensolver for the radial equation u'' = (2m/ħ²)(V_eff - E) u
//! with the full screened potential.
//!
//! A shot integrates outward from r_min with the three-point Numerov
//! recurrence and inward from r_max on the decaying exponential. The
//! eigenvalue is first bracketed by node counting (the outward solution has
//! n nodes just below E_n and n + 1 just above), then refined by bisection
//! on the sign of the discrete Casoratian of the two solutions, which the
//! recurrence conserves and which vanishes exactly at the eigenvalue.

use serde::{Deserialize, Serialize};

use crate::coulomb::{unperturbed_energy, QuantumNumbers};
use crate::error::{Error, Result};
use crate::potential::{mgesc_unchecked, PotentialParams};

pub const MIN_POINTS: usize = 1000;
pub const DEFAULT_POINTS: usize = 20001;

/// The inward start is placed on exp(-κ r); a mismatch below this means
/// the shot is within about 10⁻⁵ of an eigenvalue for the low states.
pub const MATCH_TOLERANCE: f64 = 1e-3;

const RESCALE_ABOVE: f64 = 1e100;
const LOWER_BOUND_FACTOR: f64 = 1.05;

/// Uniform grid r_i = r_min + i·step, i = 0 … points-1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_min: f64,
    pub r_max: f64,
    pub step: f64,
    pub points: usize,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if points < MIN_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid needs at least {MIN_POINTS} points, got {points}"
            )));
        }
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("bad grid bounds [{r_min}, {r_max}]")));
        }
        Ok(Self { r_min, r_max, step: (r_max - r_min) / (points - 1) as f64, points })
    }

    pub fn r(&self, i: usize) -> f64 {
        self.r_min + i as f64 * self.step
    }

    /// Same bounds, step halved.
    pub fn refined(&self) -> Self {
        Self { step: 0.5 * self.step, points: 2 * self.points - 1, ..*self }
    }
}

/// Samples of a function on a [`RadialGrid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    pub grid: RadialGrid,
    pub values: Vec<f64>,
}

impl GridFunction {
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().map(|(i, &v)| (self.grid.r(i), v))
    }

    /// Copy scaled to ∫ u² dr = 1 (trapezoid rule) and positive near the
    /// origin.
    pub fn normalized(&self) -> Self {
        let h = self.grid.step;
        let sum: f64 = self.values.iter().map(|v| v * v).sum::<f64>()
            - 0.5 * (self.values[0].powi(2) + self.values[self.values.len() - 1].powi(2));
        let first = self.values.iter().copied().find(|v| *v != 0.0).unwrap_or(1.0);
        let scale = first.signum() / (sum * h).sqrt();
        Self { grid: self.grid, values: self.values.iter().map(|v| v * scale).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShotResult {
    /// Outward solution over the whole grid, rescaled where it grew large.
    pub samples: GridFunction,
    pub node_count: u32,
    /// u'/u - v'/v at the matching point, outward minus inward.
    pub log_derivative_mismatch: f64,
    pub match_index: usize,
    /// (1-f_{m+1})(1-f_m)(u_{m+1} v_m - u_m v_{m+1}); independent of m up to
    /// the positive rescaling factors, zero at an eigenvalue.
    pub casoratian: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GridChoice {
    /// r_min = 10⁻⁶·ħ²/(2ma), r_max = 40(n+ℓ+1)·ħ²/(2ma).
    Auto { points: usize },
    Explicit(RadialGrid),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MatchPoint {
    OuterTurningPoint,
    /// Fixed fraction of r_max.
    Fraction(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub grid: GridChoice,
    pub energy_tol: f64,
    pub max_bisections: usize,
    pub match_point: MatchPoint,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid: GridChoice::Auto { points: DEFAULT_POINTS },
            energy_tol: 1e-10,
            max_bisections: 200,
            match_point: MatchPoint::OuterTurningPoint,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.energy_tol > 0.0) {
            return Err(Error::InvalidParameter(format!("energy_tol must be > 0, got {}", self.energy_tol)));
        }
        if let MatchPoint::Fraction(f) = self.match_point {
            if !(f > 0.0 && f < 1.0) {
                return Err(Error::InvalidParameter(format!("match fraction must be in (0, 1), got {f}")));
            }
        }
        Ok(())
    }
}

pub fn build_grid(params: &PotentialParams, qn: QuantumNumbers, config: &SolverConfig) -> Result<RadialGrid> {
    match config.grid {
        GridChoice::Explicit(grid) => RadialGrid::new(grid.r_min, grid.r_max, grid.points),
        GridChoice::Auto { points } => {
            let length = params.hbar * params.hbar / (2.0 * params.mass * params.a);
            RadialGrid::new(1e-6 * length, 40.0 * f64::from(qn.principal()) * length, points)
        }
    }
}

/// Strict sign changes, ignoring zeros and the first and last two samples.
pub fn count_nodes(samples: &[f64]) -> u32 {
    if samples.len() <= 4 {
        return 0;
    }
    let mut count = 0;
    let mut last = 0.0f64;
    for &v in &samples[2..samples.len() - 2] {
        if v == 0.0 {
            continue;
        }
        if last != 0.0 && (v > 0.0) != (last > 0.0) {
            count += 1;
        }
        last = v;
    }
    count
}

/// One outward and one inward shot at energy E for the potential V(r)
/// (centrifugal term added here).
pub fn integrate_numerov(
    potential: impl Fn(f64) -> f64,
    energy: f64,
    l: u32,
    grid: &RadialGrid,
    params: &PotentialParams,
) -> Result<ShotResult> {
    let v_eff = effective_on_grid(&potential, l, grid, params);
    shoot(&v_eff, energy, l, grid, params, MatchPoint::OuterTurningPoint)
}

fn effective_on_grid(potential: &impl Fn(f64) -> f64, l: u32, grid: &RadialGrid, params: &PotentialParams) -> Vec<f64> {
    let ll = f64::from(l) * f64::from(l + 1) * params.kinetic_scale();
    (0..grid.points)
        .map(|i| {
            let r = grid.r(i);
            potential(r) + ll / (r * r)
        })
        .collect()
}

fn shoot(
    v_eff: &[f64],
    energy: f64,
    l: u32,
    grid: &RadialGrid,
    params: &PotentialParams,
    match_point: MatchPoint,
) -> Result<ShotResult> {
    let n = grid.points;
    let h = grid.step;
    let c = 2.0 * params.mass / (params.hbar * params.hbar);
    // f_i = h² k_i / 12 with u'' = k u
    let f: Vec<f64> = v_eff.iter().map(|v| h * h * c * (v - energy) / 12.0).collect();
    if f.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure("potential is not finite on the grid".into()));
    }

    // Near the origin u = r^{ℓ+1}(1 - 2ma r/(ħ²(ℓ+1)) + …); with the
    // plain power law the start would carry an O(h) admixture of the
    // irregular solution.
    let cusp = -2.0 * params.mass * params.a / (params.hbar * params.hbar * f64::from(l + 1));
    let start = |r: f64| r.powi(l as i32 + 1) * (1.0 + cusp * r);
    // with a centrifugal barrier the recurrence is unstable where f > 1, so
    // the shot starts once the step resolves it
    let first = f.iter().position(|&x| x < 0.1).unwrap_or(0).min(n - 3);
    let mut u = vec![0.0; n];
    u[first] = start(grid.r(first));
    u[first + 1] = start(grid.r(first + 1));
    for i in first + 1..n - 1 {
        let next = (2.0 * (1.0 + 5.0 * f[i]) * u[i] - (1.0 - f[i - 1]) * u[i - 1]) / (1.0 - f[i + 1]);
        u[i + 1] = next;
        if next.abs() > RESCALE_ABOVE {
            for x in &mut u[..=i + 1] {
                *x /= RESCALE_ABOVE;
            }
        }
    }
    if u.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure(format!("outward shot produced NaN at E = {energy}")));
    }

    let m = match match_point {
        MatchPoint::OuterTurningPoint => f
            .iter()
            .rposition(|&x| x < 0.0)
            .filter(|&i| i > first + 1 && i < n - 3)
            .unwrap_or(n / 3),
        MatchPoint::Fraction(frac) => ((frac * (n - 1) as f64) as usize).clamp(first + 2, n - 4),
    };

    let kappa = (12.0 * f[n - 1]).max(0.0).sqrt() / h;
    let mut v_next = 1.0;
    let mut v_cur = (kappa * h).exp();
    let mut window = [0.0; 3];
    for i in (m..n - 2).rev() {
        // v at i+2 = v_next, i+1 = v_cur
        let v_i = (2.0 * (1.0 + 5.0 * f[i + 1]) * v_cur - (1.0 - f[i + 2]) * v_next) / (1.0 - f[i]);
        v_next = v_cur;
        v_cur = v_i;
        if v_cur.abs() > RESCALE_ABOVE {
            v_cur /= RESCALE_ABOVE;
            v_next /= RESCALE_ABOVE;
        }
    }
    // v_cur = v_m, v_next = v_{m+1}
    let v_prev = (2.0 * (1.0 + 5.0 * f[m]) * v_cur - (1.0 - f[m + 1]) * v_next) / (1.0 - f[m - 1]);
    window[0] = v_prev;
    window[1] = v_cur;
    window[2] = v_next;
    if window.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure(format!("inward shot produced NaN at E = {energy}")));
    }

    let log_u = (u[m + 1] - u[m - 1]) / (2.0 * h * u[m]);
    let log_v = (window[2] - window[0]) / (2.0 * h * window[1]);
    let casoratian = (1.0 - f[m + 1]) * (1.0 - f[m]) * (u[m + 1] * window[1] - u[m] * window[2]);
    let node_count = count_nodes(&u);
    Ok(ShotResult {
        samples: GridFunction { grid: *grid, values: u },
        node_count,
        log_derivative_mismatch: log_u - log_v,
        match_index: m,
        casoratian,
    })
}

/// A converged bound state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenstate {
    pub energy: f64,
    /// Final bracket width.
    pub bracket: f64,
    pub bisections: usize,
    /// Shot at the lower end of the final bracket, which carries n nodes.
    pub shot: ShotResult,
}

pub fn solve_eigenvalue(params: &PotentialParams, qn: QuantumNumbers, config: &SolverConfig) -> Result<f64> {
    solve_state(params, qn, config).map(|s| s.energy)
}

/// Bisection within [1.05·E_Coulomb, 0). Screening only raises the levels,
/// so the lower end always lies below E_n.
pub fn solve_state(params: &PotentialParams, qn: QuantumNumbers, config: &SolverConfig) -> Result<Eigenstate> {
    params.validate()?;
    config.validate()?;
    let grid = build_grid(params, qn, config)?;
    let p = *params;
    let v_eff = effective_on_grid(&move |r| mgesc_unchecked(&p, r), qn.l, &grid, params);
    let shot = |e: f64| shoot(&v_eff, e, qn.l, &grid, params, config.match_point);
    let target = qn.n;

    let mut lo = LOWER_BOUND_FACTOR * unperturbed_energy(params, qn);
    let mut hi = 0.0;
    let mut lo_shot = shot(lo)?;
    let mut extensions = 0;
    while lo_shot.node_count > target {
        extensions += 1;
        if extensions > 60 {
            return Err(Error::NoBoundState {
                nodes: target,
                reason: "no energy with too few nodes below the Coulomb level".into(),
            });
        }
        lo *= 2.0;
        lo_shot = shot(lo)?;
    }
    let hi_shot = shot(hi)?;
    if hi_shot.node_count <= target {
        return Err(Error::NoBoundState {
            nodes: target,
            reason: format!(
                "the E = 0 shot has only {} node(s); the state has merged with the continuum",
                hi_shot.node_count
            ),
        });
    }
    let mut lo_nodes = lo_shot.node_count;
    let mut hi_nodes = hi_shot.node_count;

    let mut iterations = 0;
    let budget_exhausted = |iterations: usize, width: f64| Error::NoConvergence { iterations, width };

    while lo_nodes != target || hi_nodes != target + 1 {
        if iterations >= config.max_bisections {
            return Err(budget_exhausted(iterations, hi - lo));
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        let nodes = shot(mid)?.node_count;
        if nodes <= target {
            lo = mid;
            lo_nodes = nodes;
        } else {
            hi = mid;
            hi_nodes = nodes;
        }
    }

    let lo_sign = shot(lo)?.casoratian > 0.0;
    while hi - lo > config.energy_tol {
        if iterations >= config.max_bisections {
            return Err(budget_exhausted(iterations, hi - lo));
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = shot(mid)?;
        let below = if s.node_count < target {
            true
        } else if s.node_count > target + 1 {
            false
        } else {
            (s.casoratian > 0.0) == lo_sign
        };
        if below {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let energy = 0.5 * (lo + hi);
    Ok(Eigenstate { energy, bracket: hi - lo, bisections: iterations, shot: shot(lo)? })
}
