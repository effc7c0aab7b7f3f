//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! (with the offending cells underneath) and exits non-zero if any fail.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mgesc::closed_form::{
    first_order_shift, ground_state_wavefunction, second_order_shift, total_energy, BracketSign, GroundStatePath,
};
use mgesc::coulomb::{coulomb_wavefunction, unperturbed_energy};
use mgesc::numerov::{count_nodes, solve_eigenvalue, solve_state, RadialGrid};
use mgesc::quadrature::{
    first_order_boundedness_integral, first_order_shift_quad, first_order_superpotential_moment,
    moderated_wavefunction_quad, second_order_shift_quad,
};
use mgesc::tables::{table1, table1_reference, table2_published, TABLE1_BETAS};
use mgesc::verify::{step_halving_ratio, verify, VerifyGrid};
use mgesc::{PotentialParams, QuadratureSpec, QuantumNumbers, SolverConfig, TruncationOrder};

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new() -> Self {
        Self { failures: Vec::new(), summary: String::new() }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(detail());
        }
    }
}

fn run(id: u32, title: &str, budget: Duration, body: impl FnOnce(&mut Outcome)) -> bool {
    let start = Instant::now();
    let mut outcome = Outcome::new();
    body(&mut outcome);
    let elapsed = start.elapsed();
    outcome.check(elapsed <= budget, || format!("took {elapsed:.2?}, budget {budget:.0?}"));
    let pass = outcome.failures.is_empty();
    println!(
        "criterion {id} [{}] {title}: {} ({:.2?})",
        if pass { "PASS" } else { "FAIL" },
        outcome.summary,
        elapsed
    );
    for f in &outcome.failures {
        println!("    {f}");
    }
    pass
}

fn series_table1(o: &mut Outcome) {
    let rows = table1(&TABLE1_BETAS, 1.0, false).expect("table1");
    let mut cells = 0;
    for reference in table1_reference() {
        let Some(want) = reference.series else { continue };
        cells += 1;
        let row = rows
            .iter()
            .find(|r| r.state_label == reference.state && (r.beta - reference.beta).abs() < 1e-9)
            .expect("row for every reference cell");
        let delta = (row.series_energy - want).abs();
        o.check(delta <= 5e-7, || {
            format!("{} beta={}: computed {:.7}, reference {want}, |delta| = {delta:.2e}", reference.state, reference.beta, row.series_energy)
        });
    }
    o.summary = format!("{cells} cells, {} outside 5e-7", o.failures.len());
}

fn truncation_table2(o: &mut Outcome) {
    let rows = table2_published().expect("table2");
    for row in &rows {
        let want = row.reference.expect("every published cell present");
        let delta = (row.energy - want).abs();
        o.check(delta <= 5e-7, || {
            format!("{} beta={} order {}: computed {:.7}, reference {want}", row.state_label, row.beta, row.order, row.energy)
        });
    }
    let find = |s: &str, b: f64, k: u32| {
        rows.iter().find(|r| r.state_label == s && (r.beta - b).abs() < 1e-9 && r.order == k).map(|r| r.energy)
    };
    o.check(find("1s", 0.8, 6).is_some_and(|e| (e - -1.2587093).abs() <= 5e-7), || "1s beta=0.8 order 6".into());
    o.check(find("2s", 0.3, 3).is_some_and(|e| (e - -0.389).abs() <= 5e-7), || "2s beta=0.3 order 3".into());
    o.summary = format!("{} cells, {} outside 5e-7", rows.len(), o.failures.len());
}

fn numerov_column(o: &mut Outcome) {
    let mut cells = 0;
    for reference in table1_reference() {
        let Some(want) = reference.numerical else { continue };
        cells += 1;
        let qn: QuantumNumbers = reference.state.parse().expect("state label");
        let tol = if reference.beta <= 0.1 + 1e-12 { 1e-4 } else { 5e-3 };
        let params = PotentialParams::from_beta(1.0, reference.beta).expect("params");
        match solve_eigenvalue(&params, qn, &SolverConfig::default()) {
            Ok(e) => {
                let delta = (e - want).abs();
                o.check(delta <= tol, || {
                    format!("{} beta={}: solver {e:.7}, reference {want}, |delta| = {delta:.2e} > {tol:.0e}", reference.state, reference.beta)
                });
            }
            Err(err) => o.check(false, || format!("{} beta={}: {err}", reference.state, reference.beta)),
        }
    }
    o.summary = format!("{cells} cells, {} outside tolerance", o.failures.len());
}

fn oracle_equivalence(o: &mut Outcome) {
    let spec = QuadratureSpec::default();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for b in [0.01, 0.05, 0.1] {
        let params = PotentialParams::new(1.0, b).expect("params");
        for n in 0..=2 {
            for l in 0..=3 {
                let qn = QuantumNumbers::new(n, l);
                let e1 = first_order_shift(&params, qn).expect("closed e1");
                let q1 = first_order_shift_quad(&params, qn, &spec).expect("quad e1");
                let (e4, e6) = second_order_shift(&params, qn).expect("closed e2");
                let q2 = second_order_shift_quad(&params, qn, &spec).expect("quad e2");
                for (what, closed, quad) in [("E1", e1, q1), ("E2", e4 + e6, q2)] {
                    count += 1;
                    let rel = ((quad - closed) / closed).abs();
                    worst = worst.max(rel);
                    o.check(rel <= 1e-9, || {
                        format!("{what} n={n} l={l} b={b}: closed {closed:.10e}, quadrature {quad:.10e}, rel {rel:.2e}")
                    });
                }
            }
        }
    }
    o.summary = format!("{count} comparisons, {} above 1e-9, worst rel {worst:.2e}", o.failures.len());
}

fn bracket_sign(o: &mut Outcome) {
    let spec = QuadratureSpec::default();
    let params = PotentialParams::new(1.0, 1.0).expect("params");
    let s1 = QuantumNumbers::new(0, 0);
    let want = 43.0 / 192.0;
    let plus = first_order_superpotential_moment(&params, s1, BracketSign::Plus, &spec).expect("plus");
    let minus = first_order_superpotential_moment(&params, s1, BracketSign::Minus, &spec).expect("minus");
    let rel_plus = ((plus - want) / want).abs();
    let rel_minus = ((minus - want) / want).abs();
    o.check(rel_plus <= 1e-9, || format!("plus form: {plus} vs {want}, rel {rel_plus:.2e}"));
    o.check(rel_minus > 0.1, || format!("minus form not rejected: rel {rel_minus:.3}"));
    o.summary = format!("plus rel {rel_plus:.1e}, minus rel {rel_minus:.3}");
}

fn properties(o: &mut Outcome) {
    let spec = QuadratureSpec::default();
    let unit = PotentialParams::new(1.0, 0.0).expect("params");

    for n in 0..=2 {
        for l in 0..=2 {
            let qn = QuantumNumbers::new(n, l);
            let exact = unperturbed_energy(&unit, qn);
            let e = solve_eigenvalue(&unit, qn, &SolverConfig::default()).expect("coulomb level");
            o.check((e - exact).abs() <= 1e-8, || format!("numerov coulomb n={n} l={l}: {e} vs {exact}"));
            for order in TruncationOrder::ALL {
                let s = total_energy(&unit, qn, order).expect("series");
                o.check(s == exact, || format!("series coulomb n={n} l={l} order {order}: {s} vs {exact}"));
            }
        }
    }

    for n in 0..=3 {
        for l in 0..=3 {
            let chi = coulomb_wavefunction(&unit, QuantumNumbers::new(n, l));
            let norm = chi.moment(0);
            o.check((norm - 1.0).abs() <= 1e-10, || format!("coulomb norm n={n} l={l}: {norm}"));
        }
    }
    for beta in [0.01, 0.05, 0.1] {
        let params = PotentialParams::from_beta(1.0, beta).expect("params");
        let psi = ground_state_wavefunction(&params, 0, GroundStatePath::NumericIntegral).expect("ground state");
        let norm = psi.norm_squared();
        o.check((norm - 1.0).abs() <= 1e-10, || format!("ground-state norm beta={beta}: {norm}"));
        for n in 1..=2 {
            let psi = moderated_wavefunction_quad(&params, QuantumNumbers::new(n, 0), &spec).expect("moderated");
            let norm = psi.norm_squared();
            o.check((norm - 1.0).abs() <= 1e-10, || format!("moderated norm n={n} beta={beta}: {norm}"));
        }
    }

    let grid = RadialGrid::new(1e-6, 80.0, 8001).expect("grid");
    for n in 0..=3 {
        let chi = coulomb_wavefunction(&unit, QuantumNumbers::new(n, 0));
        let samples: Vec<f64> = (0..grid.points).map(|i| chi.eval(grid.r(i))).collect();
        let nodes = count_nodes(&samples);
        o.check(nodes == n, || format!("coulomb nodes n={n}: {nodes}"));
        let params = PotentialParams::from_beta(1.0, 0.05).expect("params");
        let state = solve_state(&params, QuantumNumbers::new(n, 0), &SolverConfig::default()).expect("solve");
        o.check(state.shot.node_count == n, || format!("numerov nodes n={n}: {}", state.shot.node_count));
    }

    let screened = PotentialParams::new(1.0, 0.1).expect("params");
    for n in 0..=3 {
        for l in 0..=3 {
            let qn = QuantumNumbers::new(n, l);
            let integral = first_order_boundedness_integral(&screened, qn, &spec).expect("boundedness");
            let scale = first_order_shift_quad(&screened, qn, &spec).expect("e1").abs();
            o.check(integral.abs() <= 1e-10 * scale, || format!("boundedness n={n} l={l}: {integral:.3e}"));
        }
    }

    for beta in [0.02, 0.1, 0.5] {
        for n in 0..=2 {
            for l in 0..=3 {
                let qn = QuantumNumbers::new(n, l);
                let at = |a: f64| {
                    let params = PotentialParams::from_beta(a, beta).expect("params");
                    total_energy(&params, qn, TruncationOrder::Six).expect("series") / (a * a)
                };
                let base = at(1.0);
                for a in [0.3, 2.0, 11.0] {
                    let rel = ((at(a) - base) / base).abs();
                    o.check(rel <= 1e-12, || format!("collapse n={n} l={l} beta={beta} a={a}: rel {rel:.2e}"));
                }
            }
        }
    }

    let ratio = step_halving_ratio().expect("ratio");
    o.check((12.0..=20.0).contains(&ratio), || format!("step-halving ratio {ratio}"));
    o.summary = format!("step-halving ratio {ratio:.2}, {} violations", o.failures.len());
}

fn wavefunction_report(o: &mut Outcome) {
    let betas = vec![0.01, 0.05];
    let grid = VerifyGrid { radial: vec![0], angular: vec![0], screening: vec![0.1], wavefunction_betas: betas.clone() };
    let records = verify(&grid);
    let mut overlaps = Vec::new();
    for beta in betas {
        let overlap = records.iter().find(|r| r.check_name == format!("ground_state.closed_exponent_overlap[beta={beta}]"));
        o.check(overlap.is_some(), || format!("no closed-exponent report for beta={beta}"));
        if let Some(r) = overlap {
            overlaps.push(format!("beta={beta}: overlap {:.9} ({})", r.lhs, r.status()));
        }
        let norm = records.iter().find(|r| r.check_name == format!("ground_state.numeric_norm[beta={beta}]"));
        o.check(norm.is_some_and(|r| r.pass), || format!("numeric-path normalisation failed for beta={beta}"));
    }
    o.summary = overlaps.join("; ");
}

fn main() -> ExitCode {
    let results = [
        run(1, "series table reproduction", Duration::from_secs(1), series_table1),
        run(2, "truncation-order table reproduction", Duration::from_secs(1), truncation_table2),
        run(3, "eigensolver vs numerical column", Duration::from_secs(30), numerov_column),
        run(4, "closed form vs quadrature oracle", Duration::from_secs(10), oracle_equivalence),
        run(5, "bracket-sign discrimination", Duration::from_secs(10), bracket_sign),
        run(6, "property suites", Duration::from_secs(60), properties),
        run(7, "ground-state cross-path report", Duration::from_secs(30), wavefunction_report),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
