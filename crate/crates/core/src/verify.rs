//! Cross-checks between the closed forms, the quadrature oracle and the
//! eigensolver. Every check becomes a [`VerifyRecord`]; nothing here
//! returns an error.
//!
//! Informational records document known disagreements between two routes
//! and only affect the outcome under `strict`.

use serde::{Deserialize, Serialize};

use crate::closed_form::{
    first_order_shift, ground_state_wavefunction, second_order_shift,
    second_order_superpotential_ground, total_energy, BracketSign, GroundStatePath, TruncationOrder,
};
use crate::coulomb::{coulomb_wavefunction, tabulated_normalization, unperturbed_energy, QuantumNumbers};
use crate::moderated::WavefunctionDomain;
use crate::numerov::{count_nodes, solve_eigenvalue, solve_state, GridChoice, RadialGrid, SolverConfig};
use crate::potential::PotentialParams;
use crate::quadrature::{
    expectation_power, first_order_boundedness_integral, first_order_shift_quad,
    first_order_superpotential_moment, moderated_wavefunction_quad, second_order_shift_quad,
    second_order_superpotential_quad, QuadratureSpec,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRecord {
    pub check_name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Reported only; does not affect the exit status unless strict.
    pub informational: bool,
}

impl VerifyRecord {
    /// rel_err = |lhs - rhs| / |rhs|, or |lhs - rhs| when rhs = 0.
    pub fn compare(check_name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let diff = (lhs - rhs).abs();
        let rel_err = if rhs == 0.0 { diff } else { diff / rhs.abs() };
        Self {
            check_name: check_name.into(),
            lhs,
            rhs,
            rel_err,
            tolerance,
            pass: rel_err <= tolerance,
            informational: false,
        }
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    /// A check that could not be evaluated.
    fn failed(check_name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            check_name: check_name.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            rel_err: f64::INFINITY,
            tolerance,
            pass: false,
            informational: false,
        }
    }

    pub fn status(&self) -> &'static str {
        match (self.pass, self.informational) {
            (true, _) => "PASS",
            (false, false) => "FAIL",
            (false, true) => "INFO",
        }
    }
}

/// True iff every record that counts passed.
pub fn all_pass(records: &[VerifyRecord], strict: bool) -> bool {
    records.iter().all(|r| r.pass || (r.informational && !strict))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyGrid {
    pub radial: Vec<u32>,
    pub angular: Vec<u32>,
    pub screening: Vec<f64>,
    pub wavefunction_betas: Vec<f64>,
}

impl Default for VerifyGrid {
    fn default() -> Self {
        Self {
            radial: vec![0, 1, 2],
            angular: vec![0, 1, 2, 3],
            screening: vec![0.01, 0.05, 0.1],
            wavefunction_betas: vec![0.01, 0.05],
        }
    }
}

fn label(qn: QuantumNumbers) -> String {
    format!("n={},l={}", qn.n, qn.l)
}

fn record(name: String, tolerance: f64, value: crate::Result<(f64, f64)>) -> VerifyRecord {
    match value {
        Ok((lhs, rhs)) => VerifyRecord::compare(name, lhs, rhs, tolerance),
        Err(_) => VerifyRecord::failed(name, tolerance),
    }
}

pub fn verify(grid: &VerifyGrid) -> Vec<VerifyRecord> {
    let mut out = Vec::new();
    let spec = QuadratureSpec::default();
    let states: Vec<QuantumNumbers> = grid
        .radial
        .iter()
        .flat_map(|&n| grid.angular.iter().map(move |&l| QuantumNumbers::new(n, l)))
        .collect();

    for &b in &grid.screening {
        let params = PotentialParams::new(1.0, b).expect("valid screening");
        for &qn in &states {
            out.push(record(
                format!("closed_vs_quadrature.e1[{},b={b}]", label(qn)),
                1e-9,
                first_order_shift_quad(&params, qn, &spec).and_then(|q| Ok((q, first_order_shift(&params, qn)?))),
            ));
            out.push(record(
                format!("closed_vs_quadrature.e2[{},b={b}]", label(qn)),
                1e-9,
                second_order_shift_quad(&params, qn, &spec)
                    .and_then(|q| second_order_shift(&params, qn).map(|(e4, e6)| (q, e4 + e6))),
            ));
        }
    }

    let unit = PotentialParams::new(1.0, 0.0).expect("valid params");
    for n in 0..=3 {
        for l in 0..=3 {
            let qn = QuantumNumbers::new(n, l);
            let nn = f64::from(qn.principal());
            let ll = f64::from(l * (l + 1));
            // ⟨r²⟩ = a_Z² N²(5N² + 1 - 3ℓ(ℓ+1))/2 with a_Z = ħ²/(2ma)
            let formula = 0.25 * nn * nn * (5.0 * nn * nn + 1.0 - 3.0 * ll) / 2.0;
            out.push(record(
                format!("hydrogenic_r2[{}]", label(qn)),
                1e-9,
                expectation_power(&unit, qn, 2, &spec).map(|q| (q, formula)),
            ));
        }
    }

    let coefficient = 43.0 / 192.0;
    let s1 = QuantumNumbers::new(0, 0);
    let unit_b = PotentialParams::new(1.0, 1.0).expect("valid params");
    out.push(record(
        "bracket_sign.plus".into(),
        1e-9,
        first_order_superpotential_moment(&unit_b, s1, BracketSign::Plus, &spec).map(|m| (m, coefficient)),
    ));
    out.push(
        record(
            "bracket_sign.minus".into(),
            1e-9,
            first_order_superpotential_moment(&unit_b, s1, BracketSign::Minus, &spec).map(|m| (m, coefficient)),
        )
        .informational(),
    );

    let screened = PotentialParams::new(1.0, 0.1).expect("valid params");
    for n in 0..=3 {
        for l in 0..=3 {
            let qn = QuantumNumbers::new(n, l);
            out.push(record(
                format!("boundedness[{}]", label(qn)),
                1e-10,
                first_order_boundedness_integral(&screened, qn, &spec)
                    .and_then(|i| Ok((i / first_order_shift_quad(&screened, qn, &spec)?.abs(), 0.0))),
            ));
        }
    }

    for n in 0..=3 {
        for l in 0..=2 {
            let qn = QuantumNumbers::new(n, l);
            let chi = coulomb_wavefunction(&unit, qn);
            out.push(VerifyRecord::compare(format!("normalization.coulomb[{}]", label(qn)), chi.moment(0), 1.0, 1e-10));
        }
    }
    for &beta in &grid.wavefunction_betas {
        let params = PotentialParams::from_beta(1.0, beta).expect("valid beta");
        for n in 0..=2 {
            let qn = QuantumNumbers::new(n, 0);
            out.push(record(
                format!("normalization.moderated[{},beta={beta}]", label(qn)),
                1e-10,
                moderated_wavefunction_quad(&params, qn, &spec).map(|w| (w.norm_squared(), 1.0)),
            ));
        }
    }

    let sample_grid = RadialGrid::new(1e-6, 80.0, 8001).expect("valid grid");
    for n in 0..=3 {
        let qn = QuantumNumbers::new(n, 0);
        let chi = coulomb_wavefunction(&unit, qn);
        let samples: Vec<f64> = (0..sample_grid.points).map(|i| chi.eval(sample_grid.r(i))).collect();
        out.push(VerifyRecord::compare(
            format!("nodes.coulomb[{}]", label(qn)),
            f64::from(count_nodes(&samples)),
            f64::from(n),
            0.0,
        ));
        let params = PotentialParams::from_beta(1.0, 0.05).expect("valid beta");
        out.push(record(
            format!("nodes.numerov[{},beta=0.05]", label(qn)),
            0.0,
            solve_state(&params, qn, &SolverConfig::default()).map(|s| (f64::from(s.shot.node_count), f64::from(n))),
        ));
    }

    for n in 0..=2 {
        for l in 0..=2 {
            let qn = QuantumNumbers::new(n, l);
            out.push(record(
                format!("numerov.coulomb_limit[{}]", label(qn)),
                1e-8,
                solve_eigenvalue(&unit, qn, &SolverConfig::default()).map(|e| (e, unperturbed_energy(&unit, qn))),
            ));
        }
    }
    out.push(record("numerov.step_halving_ratio".into(), 0.25, step_halving_ratio().map(|r| (r, 16.0))));

    for &beta in &[0.05, 0.3] {
        for qn in [QuantumNumbers::new(0, 0), QuantumNumbers::new(1, 1), QuantumNumbers::new(2, 0)] {
            let at = |a: f64| {
                let params = PotentialParams::from_beta(a, beta)?;
                Ok(total_energy(&params, qn, TruncationOrder::Six)? / (a * a))
            };
            for a in [0.5, 2.0, 7.0] {
                out.push(record(
                    format!("dimensionless_collapse[{},beta={beta},a={a}]", label(qn)),
                    1e-12,
                    at(a).and_then(|x| Ok((x, at(1.0)?))),
                ));
            }
        }
    }

    for &beta in &grid.wavefunction_betas {
        ground_state_reports(beta, &mut out);
    }
    for r in [1e-8, 0.5, 1.0, 2.0] {
        let name = format!("w2_ground.closed_vs_quadrature[r={r}]");
        let value = second_order_superpotential_ground(&screened, 0, r)
            .and_then(|c| Ok((c, second_order_superpotential_quad(&screened, s1, r, &spec)?)));
        out.push(record(name, 1e-9, value).informational());
    }
    for n in 0..=2 {
        for l in 0..=1 {
            let qn = QuantumNumbers::new(n, l);
            let chi = coulomb_wavefunction(&unit, qn);
            out.push(
                VerifyRecord::compare(
                    format!("tabulated_normalization[{}]", label(qn)),
                    tabulated_normalization(&unit, qn),
                    chi.norm_constant,
                    1e-12,
                )
                .informational(),
            );
        }
    }
    out
}

/// Numeric-integral and closed-exponent ground states at one β.
fn ground_state_reports(beta: f64, out: &mut Vec<VerifyRecord>) {
    let params = PotentialParams::from_beta(1.0, beta).expect("valid beta");
    let numeric = ground_state_wavefunction(&params, 0, GroundStatePath::NumericIntegral);
    let closed = ground_state_wavefunction(&params, 0, GroundStatePath::ClosedFormExponent);
    out.push(record(
        format!("ground_state.numeric_norm[beta={beta}]"),
        1e-10,
        numeric.as_ref().map(|w| (w.norm_squared(), 1.0)).map_err(Clone::clone),
    ));
    let overlap = match (&numeric, &closed) {
        (Ok(x), Ok(y)) => {
            let domain = x.domain();
            Ok((overlap(domain, |r| x.eval(r) * y.eval(r)), 1.0))
        }
        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
    };
    out.push(record(format!("ground_state.closed_exponent_overlap[beta={beta}]"), 1e-6, overlap).informational());
    let peak = |w: &crate::closed_form::GroundStateWavefunction| {
        let domain = w.domain();
        (0..4000).map(|i| domain.r_max * f64::from(i) / 4000.0).fold((0.0, 0.0), |best, r| {
            let v = w.eval(r).abs();
            if v > best.1 {
                (r, v)
            } else {
                best
            }
        })
    };
    if let (Ok(x), Ok(y)) = (&numeric, &closed) {
        out.push(
            VerifyRecord::compare(format!("ground_state.closed_exponent_peak[beta={beta}]"), peak(y).0, peak(x).0, 1e-3)
                .informational(),
        );
    }
}

fn overlap(domain: WavefunctionDomain, f: impl Fn(f64) -> f64) -> f64 {
    let rule = crate::gauss::GaussRule::legendre(16);
    let h = domain.r_max / domain.panels as f64;
    (0..domain.panels).map(|i| rule.integrate_interval(i as f64 * h, (i + 1) as f64 * h, &f)).sum()
}

/// (E_h - E_{h/2}) / (E_{h/2} - E_{h/4}) for the Coulomb 1s level.
pub fn step_halving_ratio() -> crate::Result<f64> {
    let params = PotentialParams::new(1.0, 0.0)?;
    let qn = QuantumNumbers::new(0, 0);
    let base = crate::numerov::build_grid(
        &params,
        qn,
        &SolverConfig { grid: GridChoice::Auto { points: 1001 }, ..Default::default() },
    )?;
    let solve = |grid: RadialGrid| {
        let cfg = SolverConfig { grid: GridChoice::Explicit(grid), energy_tol: 1e-14, ..Default::default() };
        solve_eigenvalue(&params, qn, &cfg)
    };
    let e1 = solve(base)?;
    let e2 = solve(base.refined())?;
    let e3 = solve(base.refined().refined())?;
    Ok((e1 - e2) / (e2 - e3))
}
