//! Acceptance criteria. Each prints one `PASS`/`FAIL` line with the measured
//! value, the tolerance and the runtime against its budget.

use std::time::{Duration, Instant};

use bpc_core::algebra::ParaComplex;
use bpc_core::dynamics::{ham_rhs, hamiltonian_energy, integrate, PhaseState};
use bpc_core::eom::{synthesize_ham, Problem};
use bpc_core::verify::{self, fixtures, Report};

const SEED: u64 = 42;

struct Outcome {
    passed: bool,
    detail: String,
}

fn criterion(id: u32, title: &str, budget_s: f64, body: impl FnOnce() -> Outcome, results: &mut Vec<bool>) {
    let start = Instant::now();
    let out = body();
    let elapsed = start.elapsed();
    let in_budget = elapsed <= Duration::from_secs_f64(budget_s);
    let passed = out.passed && in_budget;
    println!(
        "{} criterion {id} {title}: {} [runtime {:.3}s, budget {budget_s}s]",
        if passed { "PASS" } else { "FAIL" },
        out.detail,
        elapsed.as_secs_f64()
    );
    results.push(passed);
}

fn checks(report: &Report, prefix: &str) -> Outcome {
    let chosen: Vec<_> = report.checks.iter().filter(|c| c.name.starts_with(prefix)).collect();
    let failed: Vec<String> = chosen.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
    Outcome {
        passed: !chosen.is_empty() && failed.is_empty(),
        detail: if failed.is_empty() {
            chosen.iter().map(|c| format!("{}={:e}<={:e}", c.name, c.measured, c.threshold)).collect::<Vec<_>>().join(" ")
        } else {
            failed.join("; ")
        },
    }
}

#[test]
fn acceptance() {
    let total = Instant::now();
    let mut results = Vec::new();

    criterion(1, "algebra identities", 1.0, || {
        let r = verify::selftest_algebra(SEED);
        let mut o = checks(&r, "algebra.idempotent_identities");
        o.detail = format!("{} operands; {}", verify::OPERANDS, o.detail);
        o
    }, &mut results);

    criterion(2, "structure tables", 1.0, || checks(&verify::selftest_algebra(SEED), "structure."), &mut results);

    criterion(3, "oscillator closed form", 1.0, || match verify::oscillator_deviation(1e-3) {
        Ok(d) => Outcome { passed: d <= 1e-8, detail: format!("max deviation {d:e} <= 1e-8") },
        Err(e) => Outcome { passed: false, detail: e },
    }, &mut results);

    criterion(4, "lambda reduction", 5.0, || {
        let mut r = Report::new(SEED);
        for p in fixtures::reduction_lagrangians() {
            r.extend(verify::check_reduction(&p.into(), 100, SEED));
        }
        for p in fixtures::reduction_hamiltonians() {
            r.extend(verify::check_reduction(&p.into(), 100, SEED));
        }
        let worst = r.checks.iter().map(|c| c.measured).fold(0.0, f64::max);
        Outcome {
            passed: r.checks.len() == 10 && r.all_passed(),
            detail: format!("{} problems x 100 states, max relative deviation {worst:e} <= 1e-12", r.checks.len()),
        }
    }, &mut results);

    criterion(5, "constant-lambda Hamilton conservation", 2.0, || {
        let (p, s0, cfg) = fixtures::conservation();
        let ode = synthesize_ham(&p);
        match integrate(|s: &PhaseState| ham_rhs(&ode, s), &s0, &cfg) {
            Ok(tr) => {
                let r = verify::conservation_report(&Problem::from(p), &tr);
                let c = &r.checks[0];
                Outcome { passed: r.all_passed(), detail: format!("drift {:e} <= {:e} over {} samples", c.measured, c.threshold, tr.len()) }
            }
            Err(e) => Outcome { passed: false, detail: e.to_string() },
        }
    }, &mut results);
    generic_start_drift();

    criterion(6, "residual audits", 10.0, || {
        let mut r = Report::new(SEED);
        for f in fixtures::el_trajectories() {
            let name = format!("el_residual[{}]", f.name);
            r.push(match verify::el_trajectory_residual(&f) {
                Ok(x) => verify::Check::at_most(name, x, verify::EL_RESIDUAL_TOLERANCE),
                Err(_) => verify::Check::failed(name, verify::EL_RESIDUAL_TOLERANCE),
            });
        }
        for p in fixtures::audit_lagrangians() {
            r.extend(verify::audit_report(&p.into(), 100, SEED, false));
        }
        for p in fixtures::audit_hamiltonians() {
            r.extend(verify::audit_report(&p.into(), 100, SEED, false));
        }
        let worst = |prefix: &str| r.checks.iter().filter(|c| c.name.starts_with(prefix)).map(|c| c.measured).fold(0.0, f64::max);
        Outcome {
            passed: r.all_passed(),
            detail: format!(
                "FD residual max {:e} <= 1e-5 on {} trajectories; plug-back max {:e} and Hamilton max {:e} <= 1e-10 at 100 states x {} problems",
                worst("el_residual"),
                fixtures::el_trajectories().len(),
                worst("audit[L"),
                worst("audit[H"),
                fixtures::audit_lagrangians().len() + fixtures::audit_hamiltonians().len(),
            ),
        }
    }, &mut results);

    criterion(7, "singularity detection", 1.0, || {
        let (p, s0) = fixtures::singular_lambda();
        let d_minus = synthesize_ham(&p).d_minus.evaluate(&s0.eval_state());
        let singular = verify::singular_lambda_detected();
        let degenerate = verify::degenerate_lagrangian_detected();
        let shown = match &d_minus {
            Ok(v) => v.to_string(),
            Err(e) => e.to_string(),
        };
        Outcome {
            passed: singular && degenerate && d_minus.as_ref().is_ok_and(|v| *v == ParaComplex::ZERO),
            detail: format!("D- at start = {shown}; SingularDenominator(D-) {singular}; DegenerateLagrangian {degenerate}"),
        }
    }, &mut results);

    criterion(8, "RK4 convergence order", 2.0, || {
        let errs: Result<Vec<f64>, String> = [4e-3, 2e-3, 1e-3].iter().map(|&dt| verify::oscillator_endpoint_error(dt)).collect();
        match errs {
            Ok(e) => {
                let (r1, r2) = (e[0] / e[1], e[1] / e[2]);
                Outcome {
                    passed: (12.0..=20.0).contains(&r1) && (12.0..=20.0).contains(&r2),
                    detail: format!("errors {:e} {:e} {:e}; ratios {r1:.2} {r2:.2} in [12, 20]", e[0], e[1], e[2]),
                }
            }
            Err(e) => Outcome { passed: false, detail: e },
        }
    }, &mut results);

    criterion(9, "parser round-trip and FD suites", 5.0, || {
        let mut r = verify::check_parse_roundtrip(100, SEED);
        r.extend(verify::check_fd_random(100, 5, SEED));
        let mut o = checks(&r, "");
        o.detail = format!("100 expressions; {}", o.detail);
        o
    }, &mut results);

    let elapsed = total.elapsed().as_secs_f64();
    println!("{} full suite: {elapsed:.3}s, target 30s", if elapsed <= 30.0 { "PASS" } else { "FAIL" });
    results.push(elapsed <= 30.0);
    let failed = results.iter().filter(|p| !**p).count();
    assert_eq!(failed, 0, "{failed} acceptance line(s) failed");
}

/// A generic O(1) start for the criterion-5 problem. The flow is a saddle, so
/// this reaches the double-precision floor of the canonical storage; reported
/// for information only.
fn generic_start_drift() {
    let (p, _, cfg) = fixtures::conservation();
    let s0 = PhaseState::new(0.0, vec![ParaComplex::ONE], vec![ParaComplex::real(0.5)]);
    let ode = synthesize_ham(&p);
    match integrate(|s: &PhaseState| ham_rhs(&ode, s), &s0, &cfg) {
        Ok(mut tr) => {
            let drift = hamiltonian_energy(&p, &mut tr).map(|_| {
                let h0 = tr.diagnostics[0].energy.unwrap_or(ParaComplex::ZERO);
                tr.diagnostics.iter().filter_map(|d| d.energy).map(|e| (e - h0).max_abs()).fold(0.0, f64::max)
            });
            println!("INFO criterion 5 generic start z1=1, zb1=0.5: drift {drift:?} (not asserted)");
        }
        Err(e) => println!("INFO criterion 5 generic start z1=1, zb1=0.5: {e}"),
    }
}
