use rand::Rng;

use super::baseline::{ClassicalHamilton, ClassicalLagrange};
use super::fixtures;
use super::report::{Check, Report};
use super::sample::{self, clear_of_zero_divisors, random_pc, random_state_where};
use crate::algebra::{
    structure_apply, structure_apply_all, structure_apply_difference, AlgebraError, Basis,
    FrameVector, IdempotentPair, ParaComplex, StructureKind,
};
use crate::dynamics::{
    el_rhs, ham_rhs, hamiltonian_energy, integrate, lagrangian_energy, residual_series,
    IntegrationError, PhaseState, RhsError, Trajectory,
};
use crate::eom::{
    synthesize_el, synthesize_ham, Denominator, ExplicitODE, HamiltonAudit, ImplicitODE,
    LagrangeAudit, Problem, Semispray,
};
use crate::symbolic::{differentiate, parse, simplify, to_text, CoordinateChart, EvalState, Expr};

pub const OPERANDS: usize = 1000;
pub const ROUNDTRIP_TOLERANCE: f64 = 1e-15;
pub const REDUCTION_TOLERANCE: f64 = 1e-12;
pub const FD_STEP: f64 = 1e-5;
pub const FD_TOLERANCE: f64 = 1e-6;
pub const CONSERVATION_TOLERANCE: f64 = 1e-8;
pub const AUDIT_TOLERANCE: f64 = 1e-10;
pub const EL_RESIDUAL_TOLERANCE: f64 = 1e-5;
/// Sampled velocity systems whose idempotent Hadamard ratio falls below this are skipped.
pub const CONDITION_FLOOR: f64 = 1e-3;

const MAX_TRIES_PER_SAMPLE: usize = 200;

/// Check names are single tokens.
fn label(e: &Expr) -> String {
    to_text(e).chars().filter(|c| !c.is_whitespace()).collect()
}

fn problem_label(p: &Problem) -> String {
    let kind = match p {
        Problem::Lagrangian(_) => "L",
        Problem::Hamiltonian(_) => "H",
    };
    format!("{kind}={};lambda={}", label(p.function()), label(p.lambda()))
}

fn pair_dev(x: IdempotentPair, y: IdempotentPair) -> f64 {
    (x.u - y.u).abs().max((x.v - y.v).abs())
}

fn add(x: IdempotentPair, y: IdempotentPair) -> IdempotentPair {
    IdempotentPair::new(x.u + y.u, x.v + y.v)
}

fn sub(x: IdempotentPair, y: IdempotentPair) -> IdempotentPair {
    IdempotentPair::new(x.u - y.u, x.v - y.v)
}

/// Idempotent identities, canonical round-trips, functional calculus and
/// structure tables.
pub fn selftest_algebra(seed: u64) -> Report {
    let mut report = Report::new(seed);
    let mut rng = sample::rng(seed);
    let ops: Vec<(ParaComplex, ParaComplex)> = (0..OPERANDS).map(|_| (random_pc(&mut rng), random_pc(&mut rng))).collect();

    let ep = ParaComplex::E_PLUS.to_idempotent();
    let em = ParaComplex::E_MINUS.to_idempotent();
    let one = ParaComplex::ONE.to_idempotent();
    let j = ParaComplex::J.to_idempotent();
    let zero = IdempotentPair::new(0.0, 0.0);
    let mut exact: f64 = pair_dev(ep * ep, ep)
        .max(pair_dev(em * em, em))
        .max(pair_dev(ep * em, zero))
        .max(pair_dev(add(ep, em), one))
        .max(pair_dev(sub(ep, em), j))
        .max(pair_dev(j * j, one));
    for &(x, y) in &ops {
        let (p, q) = (x.to_idempotent(), y.to_idempotent());
        exact = exact
            .max(pair_dev(p * ep * ep, p * ep))
            .max(pair_dev((p * ep) * (q * em), zero))
            .max(pair_dev(add(p * ep, p * em), p))
            .max(pair_dev(p * sub(ep, em), p * j))
            .max(pair_dev(p * j * j, p));
    }
    report.push(Check::at_most("algebra.idempotent_identities_exact", exact, 0.0));

    let (e_p, e_m, jj) = (ParaComplex::E_PLUS, ParaComplex::E_MINUS, ParaComplex::J);
    let mut roundtrip: f64 = (e_p * e_p - e_p)
        .max_abs()
        .max((e_p * e_m).max_abs())
        .max((e_p + e_m - ParaComplex::ONE).max_abs())
        .max((e_p - e_m - jj).max_abs())
        .max((jj * jj - ParaComplex::ONE).max_abs());
    for &(x, y) in &ops {
        roundtrip = roundtrip
            .max((ParaComplex::from_idempotent(x.to_idempotent()) - x).max_abs())
            .max((x * e_p * e_p - x * e_p).max_abs())
            .max(((x * e_p) * (y * e_m)).max_abs())
            .max((x * e_p + x * e_m - x).max_abs())
            .max((x * (e_p - e_m) - x * jj).max_abs())
            .max((x * jj * jj - x).max_abs());
    }
    report.push(Check::at_most("algebra.idempotent_identities_roundtrip", roundtrip, ROUNDTRIP_TOLERANCE));

    let mut product: f64 = 0.0;
    let mut conj: f64 = 0.0;
    for &(x, y) in &ops {
        let canonical = ParaComplex::new(x.a * y.a + x.b * y.b, x.a * y.b + x.b * y.a);
        product = product.max((x * y - canonical).max_abs() / (1.0 + x.max_abs() * y.max_abs()));
        conj = conj.max(((x * y).conj() - x.conj() * y.conj()).max_abs() / (1.0 + x.max_abs() * y.max_abs()));
    }
    report.push(Check::at_most("algebra.product_matches_canonical", product, 1e-15));
    report.push(Check::at_most("algebra.conjugation_multiplicative", conj, 1e-15));

    let mut inverse: f64 = 0.0;
    let mut zero_divisor_rejections = 0.0;
    for &(x, _) in &ops {
        if clear_of_zero_divisors(x) {
            let inv = x.inverse().expect("invertible operand");
            inverse = inverse.max((x * inv - ParaComplex::ONE).max_abs() / (x.max_abs() * inv.max_abs()));
        }
        let zd = x * e_p;
        if !matches!(zd.inverse(), Err(AlgebraError::ZeroDivisor { .. })) {
            zero_divisor_rejections += 1.0;
        }
    }
    report.push(Check::at_most("algebra.inverse", inverse, 1e-15));
    report.push(Check::at_most("algebra.zero_divisors_rejected", zero_divisor_rejections, 0.0));

    let mut exp_add: f64 = 0.0;
    let mut ln_exp: f64 = 0.0;
    let mut trig: f64 = 0.0;
    for &(x, y) in &ops {
        let lhs = (x + y).exp();
        exp_add = exp_add.max((lhs - x.exp() * y.exp()).max_abs() / lhs.max_abs().max(1.0));
        ln_exp = ln_exp.max((x.exp().ln().expect("exp is positive") - x).max_abs());
        let pyth = x.sin() * x.sin() + x.cos() * x.cos();
        trig = trig.max((pyth - ParaComplex::ONE).max_abs());
    }
    report.push(Check::at_most("algebra.exp_additivity", exp_add, 1e-14));
    report.push(Check::at_most("algebra.ln_exp", ln_exp, 1e-14));
    report.push(Check::at_most("algebra.sin2_plus_cos2", trig, 1e-14));

    let lambdas = [ParaComplex::ZERO, random_pc(&mut rng), random_pc(&mut rng)];
    let coeffs: Vec<ParaComplex> = (0..20).map(|_| random_pc(&mut rng)).collect();
    report.push(structure_table_check(&lambdas, &coeffs));
    report.push(structure_mismatch_check());
    report.extend(structure_identities(seed, &coeffs));
    report
}

/// Expected image of a unit basis element, written out independently of the
/// production table.
fn expected(kind: StructureKind, basis: Basis, lambda: ParaComplex) -> Option<(Basis, ParaComplex)> {
    use Basis::*;
    use StructureKind::*;
    let one = ParaComplex::ONE;
    let j = ParaComplex::J;
    let half = |s: f64| ParaComplex::new(0.5, 0.5 * s);
    let (up, down) = (lambda.exp(), (-lambda).exp());
    let sign = match kind {
        PPlus | PStarPlus | WPlus | WStarPlus => 1.0,
        _ => -1.0,
    };
    let e = half(sign);
    Some(match (kind, basis) {
        (F | J, PartialX) => (PartialY, one),
        (F | J, PartialY) => (PartialX, one),
        (P, PartialX) => (PartialX, one),
        (P, PartialY) => (PartialY, -one),
        (J, PartialZ) => (PartialZb, -j),
        (J, PartialZb) => (PartialZ, j),
        (JStar, Dz) => (Dzb, -j),
        (JStar, Dzb) => (Dz, j),
        (PPlus | PMinus, PartialZ) | (PStarPlus | PStarMinus, Dz) => (if basis == PartialZ { PartialZb } else { Dzb }, -e),
        (PPlus | PMinus, PartialZb) | (PStarPlus | PStarMinus, Dzb) => (if basis == PartialZb { PartialZ } else { Dz }, e),
        (WPlus | WMinus, PartialZ) | (WStarPlus | WStarMinus, Dz) => (if basis == PartialZ { PartialZb } else { Dzb }, -(e * up)),
        (WPlus | WMinus, PartialZb) | (WStarPlus | WStarMinus, Dzb) => (if basis == PartialZb { PartialZ } else { Dz }, e * down),
        _ => return None,
    })
}

const BASES: [Basis; 6] = [Basis::PartialX, Basis::PartialY, Basis::PartialZ, Basis::PartialZb, Basis::Dz, Basis::Dzb];

fn structure_table_check(lambdas: &[ParaComplex], coeffs: &[ParaComplex]) -> Check {
    let mut worst: f64 = 0.0;
    for &lambda in lambdas {
        for kind in StructureKind::ALL {
            for basis in BASES {
                let Some((image, c)) = expected(kind, basis, lambda) else { continue };
                for &k in coeffs.iter().chain([ParaComplex::ONE].iter()) {
                    let scalar = if basis.is_real_frame() { k } else { k.conj() };
                    match structure_apply(kind, FrameVector::new(basis, 2, k), lambda) {
                        Ok(out) if out.len() == 1 && out[0].basis == image && out[0].index == 2 => {
                            let want = scalar * c;
                            worst = worst.max((out[0].coeff - want).max_abs() / want.max_abs().max(1.0));
                        }
                        _ => worst = f64::INFINITY,
                    }
                }
            }
        }
    }
    Check::at_most("structure.tables", worst, 1e-15)
}

fn structure_mismatch_check() -> Check {
    let mut wrong = 0.0;
    for kind in StructureKind::ALL {
        for basis in BASES {
            let accepted = structure_apply(kind, FrameVector::unit(basis, 1), ParaComplex::ZERO).is_ok();
            if accepted != expected(kind, basis, ParaComplex::ZERO).is_some() {
                wrong += 1.0;
            }
        }
    }
    Check::at_most("structure.domain_mismatches", wrong, 0.0)
}

fn combination_dev(got: &[FrameVector], want: &[FrameVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for w in want {
        let g = got.iter().find(|g| g.basis == w.basis && g.index == w.index).map_or(ParaComplex::ZERO, |g| g.coeff);
        worst = worst.max((g - w.coeff).max_abs() / w.coeff.max_abs().max(1.0));
    }
    for g in got {
        if !want.iter().any(|w| w.basis == g.basis && w.index == g.index) {
            worst = worst.max(g.coeff.max_abs());
        }
    }
    worst
}

fn structure_identities(seed: u64, coeffs: &[ParaComplex]) -> Report {
    use StructureKind::*;
    let mut report = Report::new(seed);
    let z = ParaComplex::ZERO;

    let mut involution: f64 = 0.0;
    for (kind, bases) in [(J, &BASES[..4]), (JStar, &BASES[4..])] {
        for &basis in bases {
            for &k in coeffs {
                let v = [FrameVector::new(basis, 1, k)];
                let twice = structure_apply_all(kind, &v, z).and_then(|once| structure_apply_all(kind, &once, z));
                involution = involution.max(twice.map_or(f64::INFINITY, |t| combination_dev(&t, &v)));
            }
        }
    }
    report.push(Check::at_most("structure.j_squared_identity", involution, 1e-15));

    let mut p_squared: f64 = 0.0;
    for (plus, minus, bases) in [(PPlus, PMinus, [Basis::PartialZ, Basis::PartialZb]), (PStarPlus, PStarMinus, [Basis::Dz, Basis::Dzb])] {
        for basis in bases {
            for &k in coeffs {
                let v = FrameVector::new(basis, 1, k);
                let twice = structure_apply_difference(plus, minus, v, z).and_then(|once| {
                    let mut acc: Vec<FrameVector> = Vec::new();
                    for w in once {
                        acc.extend(structure_apply_difference(plus, minus, w, z)?);
                    }
                    Ok(acc)
                });
                p_squared = p_squared.max(twice.map_or(f64::INFINITY, |t| combination_dev(&t, &[v])));
                // the difference also coincides with J / J*
                let j_kind = if basis.is_covector() { JStar } else { J };
                let d = structure_apply_difference(plus, minus, v, z);
                let jv = structure_apply(j_kind, v, z);
                p_squared = p_squared.max(match (d, jv) {
                    (Ok(d), Ok(jv)) => combination_dev(&d, &jv),
                    _ => f64::INFINITY,
                });
            }
        }
    }
    report.push(Check::at_most("structure.p_difference_squared_identity", p_squared, 1e-15));

    let mut w_vs_p: f64 = 0.0;
    for (w, p) in [(WPlus, PPlus), (WMinus, PMinus), (WStarPlus, PStarPlus), (WStarMinus, PStarMinus)] {
        for basis in BASES {
            let v = FrameVector::new(basis, 1, coeffs[0]);
            match (structure_apply(w, v, z), structure_apply(p, v, z)) {
                (Ok(a), Ok(b)) => w_vs_p = w_vs_p.max(combination_dev(&a, &b)),
                (Err(_), Err(_)) => {}
                _ => w_vs_p = f64::INFINITY,
            }
        }
    }
    report.push(Check::at_most("structure.w_at_zero_equals_p", w_vs_p, 0.0));
    report
}

/// Min over idempotent components of `|det| / Π ‖row‖` for a velocity matrix;
/// 1 for orthogonal rows, 0 when singular.
pub fn hadamard_ratio(m: &[Vec<ParaComplex>]) -> f64 {
    let comp = |f: fn(IdempotentPair) -> f64| -> f64 {
        let mut a: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|x| f(x.to_idempotent())).collect()).collect();
        let norms: f64 = a.iter().map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt()).product();
        if norms == 0.0 {
            return 0.0;
        }
        let d = a.len();
        let mut det = 1.0;
        for c in 0..d {
            let p = (c..d).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).expect("non-empty");
            if a[p][c] == 0.0 {
                return 0.0;
            }
            a.swap(c, p);
            det *= a[c][c];
            for r in c + 1..d {
                let f = a[r][c] / a[c][c];
                for k in c..d {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
        det.abs() / norms
    };
    comp(|p| p.u).min(comp(|p| p.v))
}

fn relative_dev(got: &[ParaComplex], want: &[ParaComplex]) -> f64 {
    got.iter().zip(want).map(|(g, w)| (*g - *w).max_abs() / w.max_abs().max(1.0)).fold(0.0, f64::max)
}

/// Conformal EL velocities at a well-conditioned state.
fn conditioned_el(ode: &ImplicitODE, s: &EvalState) -> Option<Vec<ParaComplex>> {
    let (m, _) = ode.evaluate(s).ok()?;
    if hadamard_ratio(&m) < CONDITION_FLOOR {
        return None;
    }
    let st = PhaseState::new(0.0, s.z.clone(), s.zb.clone());
    let (mut xi, xib) = el_rhs(ode, &st).ok()?;
    xi.extend(xib);
    Some(xi)
}

/// Hamilton velocities at a state where both denominators stay clear of the
/// zero-divisor lines.
fn conditioned_ham(ode: &ExplicitODE, s: &EvalState) -> Option<Vec<ParaComplex>> {
    let (dp, dm) = ode.denominators(s).ok()?;
    if !clear_of_zero_divisors(dp) || !clear_of_zero_divisors(dm) {
        return None;
    }
    let (mut z, zb) = ham_rhs(ode, &PhaseState::new(0.0, s.z.clone(), s.zb.clone())).ok()?;
    z.extend(zb);
    Some(z)
}

/// Conformal synthesis at λ = 0 against the classical baseline.
pub fn check_reduction(p: &Problem, samples: usize, seed: u64) -> Report {
    let mut report = Report::new(seed);
    let name = format!("reduction[{}]", problem_label(p));
    if !p.lambda().is_zero() {
        report.push(Check::failed(name, REDUCTION_TOLERANCE));
        return report;
    }
    let mut rng = sample::rng(seed);
    let n = p.chart().n();
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    let mut tries = 0;
    while taken < samples && tries < samples * MAX_TRIES_PER_SAMPLE {
        tries += 1;
        let s = sample::random_state(&mut rng, n);
        let pair = match p {
            Problem::Lagrangian(lp) => {
                let ode = synthesize_el(lp);
                let base = ClassicalLagrange::new(lp);
                conditioned_el(&ode, &s).zip(base.velocities(&s).ok().flatten())
            }
            Problem::Hamiltonian(hp) => {
                let ode = synthesize_ham(hp);
                conditioned_ham(&ode, &s).zip(ClassicalHamilton::new(hp).velocities(&s).ok())
            }
        };
        if let Some((conformal, classical)) = pair {
            worst = worst.max(relative_dev(&conformal, &classical));
            taken += 1;
        }
    }
    if taken < samples {
        report.push(Check::failed(name, REDUCTION_TOLERANCE));
    } else {
        report.push(Check::at_most(name, worst, REDUCTION_TOLERANCE));
    }
    report
}

/// Symbolic partials of `expr` against central differences along the real
/// and `j` directions of every position coordinate.
pub fn check_fd(expr: &Expr, chart: &CoordinateChart, samples: usize, seed: u64) -> Report {
    let mut report = Report::new(seed);
    let name = format!("fd[{}]", label(expr));
    let (worst, taken) = fd_deviation(expr, chart, samples, seed);
    report.push(if taken < samples { Check::failed(name, FD_TOLERANCE) } else { Check::at_most(name, worst, FD_TOLERANCE) });
    report
}

/// Max relative FD deviation and the number of states it was measured at.
pub fn fd_deviation(expr: &Expr, chart: &CoordinateChart, samples: usize, seed: u64) -> (f64, usize) {
    let mut rng = sample::rng(seed);
    let partials: Vec<_> = chart.positions().into_iter().map(|q| (q, differentiate(expr, q))).collect();
    let h = FD_STEP;
    let directions = [(ParaComplex::real(h), ParaComplex::ONE), (ParaComplex::new(0.0, h), ParaComplex::J)];
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    let mut tries = 0;
    'state: while taken < samples && tries < samples * MAX_TRIES_PER_SAMPLE {
        tries += 1;
        let s = sample::random_state(&mut rng, chart.n());
        let mut dev: f64 = 0.0;
        for (q, d) in &partials {
            let Ok(sym) = d.evaluate(&s) else { continue 'state };
            for (step, undo) in directions {
                let (Ok(fp), Ok(fm)) = (expr.evaluate(&s.shifted(*q, step)), expr.evaluate(&s.shifted(*q, -step))) else {
                    continue 'state;
                };
                // (f(x+δ) − f(x−δ)) / 2h ≈ (δ/h)·f'; multiplying by the unit undoes δ/h since j² = 1
                let fd = (fp - fm).scale(0.5 / h) * undo;
                dev = dev.max((fd - sym).max_abs() / sym.max_abs().max(1.0));
            }
        }
        worst = worst.max(dev);
        taken += 1;
    }
    (worst, taken)
}

/// Print/parse round-trip on random expressions: the reparsed expression must
/// simplify to the same tree as the original and evaluate to the same value
/// at 10 random states.
pub fn check_parse_roundtrip(count: usize, seed: u64) -> Report {
    let mut report = Report::new(seed);
    let mut rng = sample::rng(seed);
    let chart = CoordinateChart::new(2);
    let mut structural = 0.0;
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let e = sample::random_expr(&mut rng, &chart, 3);
        let Ok(back) = parse(&to_text(&e), &chart) else {
            structural += 1.0;
            continue;
        };
        if simplify(&back) != simplify(&e) {
            structural += 1.0;
        }
        for _ in 0..10 {
            let s = sample::random_state(&mut rng, 2);
            match (e.evaluate(&s), back.evaluate(&s)) {
                (Ok(a), Ok(b)) => worst = worst.max((a - b).max_abs() / a.max_abs().max(1.0)),
                (Err(_), Err(_)) => {}
                _ => worst = f64::INFINITY,
            }
        }
    }
    report.push(Check::at_most("parse.roundtrip_structure", structural, 0.0));
    report.push(Check::at_most("parse.roundtrip_value", worst, 1e-12));
    report
}

/// FD check over `count` random expressions in two coordinate pairs.
pub fn check_fd_random(count: usize, samples: usize, seed: u64) -> Report {
    let mut report = Report::new(seed);
    let mut rng = sample::rng(seed);
    let chart = CoordinateChart::new(2);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let e = sample::random_expr(&mut rng, &chart, 3);
        let (dev, taken) = fd_deviation(&e, &chart, samples, rng.gen());
        worst = worst.max(if taken < samples { f64::INFINITY } else { dev });
    }
    report.push(Check::at_most("fd.random_expressions", worst, FD_TOLERANCE));
    report
}

/// Drift of `H` (or `E_L`) along `tr`. Asserted only for a Hamiltonian with a
/// constant conformal factor.
pub fn conservation_report(p: &Problem, tr: &Trajectory) -> Report {
    let mut report = Report::new(0);
    let name = format!("conservation[{}]", problem_label(p));
    let mut tr = tr.clone();
    let filled = match p {
        Problem::Hamiltonian(hp) => hamiltonian_energy(hp, &mut tr).map_err(RhsError::from),
        Problem::Lagrangian(lp) => lagrangian_energy(lp, &mut tr),
    };
    let energies: Option<Vec<ParaComplex>> = tr.diagnostics.iter().map(|d| d.energy).collect();
    let (Ok(()), Some(energies)) = (filled, energies) else {
        report.push(Check::failed(name, CONSERVATION_TOLERANCE));
        return report;
    };
    let drift = energies.iter().map(|e| (*e - energies[0]).max_abs()).fold(0.0, f64::max);
    let constant_lambda = p.chart().positions().iter().all(|&q| !p.lambda().depends_on(q));
    match p {
        Problem::Hamiltonian(_) if constant_lambda => report.push(Check::at_most(name, drift, CONSERVATION_TOLERANCE)),
        _ => report.push(Check::info(name, drift)),
    }
    report
}

/// Maximum audit residual over `samples` well-conditioned random states.
/// With `flip_rhs` the synthesized right-hand side is negated first, which a
/// working audit must detect.
pub fn audit_report(p: &Problem, samples: usize, seed: u64, flip_rhs: bool) -> Report {
    let mut report = Report::new(seed);
    let name = format!("audit[{}]", problem_label(p));
    let mut rng = sample::rng(seed);
    let n = p.chart().n();
    let sign = if flip_rhs { -ParaComplex::ONE } else { ParaComplex::ONE };
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    match p {
        Problem::Lagrangian(lp) => {
            let ode = synthesize_el(lp);
            let audit = LagrangeAudit::new(lp);
            for _ in 0..samples {
                let Some((s, v)) = draw(&mut rng, n, |s| conditioned_el(&ode, s)) else { break };
                let v: Vec<ParaComplex> = v.into_iter().map(|x| sign * x).collect();
                let xi = Semispray::new(v[..n].to_vec(), v[n..].to_vec());
                worst = worst.max(audit.residual(&s, &xi).unwrap_or(f64::INFINITY));
                taken += 1;
            }
        }
        Problem::Hamiltonian(hp) => {
            let ode = synthesize_ham(hp);
            let audit = HamiltonAudit::for_flow(hp, if flip_rhs { ode.negated() } else { ode.clone() });
            for _ in 0..samples {
                let Some((s, _)) = draw(&mut rng, n, |s| conditioned_ham(&ode, s)) else { break };
                worst = worst.max(audit.residual(&s).unwrap_or(f64::INFINITY));
                taken += 1;
            }
        }
    }
    report.push(if taken < samples { Check::failed(name, AUDIT_TOLERANCE) } else { Check::at_most(name, worst, AUDIT_TOLERANCE) });
    report
}

fn draw<R: Rng, T>(rng: &mut R, n: usize, mut f: impl FnMut(&EvalState) -> Option<T>) -> Option<(EvalState, T)> {
    let mut found = None;
    random_state_where(rng, n, MAX_TRIES_PER_SAMPLE, |s| {
        found = f(s);
        found.is_some()
    })
    .map(|s| (s, found.expect("accepted state has a value")))
}

/// Integrates a fixture and returns the largest finite-difference EL residual.
pub fn el_trajectory_residual(f: &fixtures::TrajectoryFixture) -> Result<f64, String> {
    let ode = synthesize_el(&f.problem);
    let tr = integrate(|s: &PhaseState| el_rhs(&ode, s), &f.start, &f.config).map_err(|e| e.to_string())?;
    let r = residual_series(&f.problem, &tr, f.config.dt).map_err(|e| e.to_string())?;
    if r.iter().flatten().count() == 0 {
        return Err("no interior samples".into());
    }
    Ok(r.iter().flatten().fold(0.0, |a, &b| a.max(b)))
}

/// Max deviation of the oscillator Lagrangian's RK4 flow from the closed form
/// `z1 = cos t`, `zb1 = j sin t` over one period.
pub fn oscillator_deviation(dt: f64) -> Result<f64, String> {
    let p = fixtures::lagrangian(1, "z1*zb1", "0");
    let ode = synthesize_el(&p);
    let tau = 2.0 * std::f64::consts::PI;
    let s0 = PhaseState::new(0.0, vec![ParaComplex::ONE], vec![ParaComplex::ZERO]);
    let tr = integrate(|s: &PhaseState| el_rhs(&ode, s), &s0, &crate::dynamics::IntegratorConfig::rk4(0.0, tau, dt))
        .map_err(|e| e.to_string())?;
    Ok(tr
        .samples
        .iter()
        .map(|s| (s.z[0] - ParaComplex::real(s.t.cos())).max_abs().max((s.zb[0] - ParaComplex::new(0.0, s.t.sin())).max_abs()))
        .fold(0.0, f64::max))
}

/// Endpoint error of the oscillator flow at `t = 2π`.
pub fn oscillator_endpoint_error(dt: f64) -> Result<f64, String> {
    let p = fixtures::lagrangian(1, "z1*zb1", "0");
    let ode = synthesize_el(&p);
    let tau = 2.0 * std::f64::consts::PI;
    let s0 = PhaseState::new(0.0, vec![ParaComplex::ONE], vec![ParaComplex::ZERO]);
    let tr = integrate(|s: &PhaseState| el_rhs(&ode, s), &s0, &crate::dynamics::IntegratorConfig::rk4(0.0, tau, dt))
        .map_err(|e| e.to_string())?;
    let e = tr.last().ok_or("empty trajectory")?;
    Ok((e.z[0] - ParaComplex::real(tau.cos())).max_abs().max((e.zb[0] - ParaComplex::new(0.0, tau.sin())).max_abs()))
}

/// 1 when the singular-λ fixture aborts at t = 0 naming `D⁻`, 0 otherwise.
pub fn singular_lambda_detected() -> bool {
    let (p, s0) = fixtures::singular_lambda();
    let ode = synthesize_ham(&p);
    let cfg = crate::dynamics::IntegratorConfig::rk4(0.0, 1.0, 1e-2);
    matches!(
        integrate(|s: &PhaseState| ham_rhs(&ode, s), &s0, &cfg),
        Err(IntegrationError::Rhs { t, source: RhsError::SingularDenominator { which: Denominator::DMinus, .. }, .. }) if t == 0.0
    )
}

pub fn degenerate_lagrangian_detected() -> bool {
    let (p, s0) = fixtures::degenerate_lagrangian();
    let ode = synthesize_el(&p);
    let cfg = crate::dynamics::IntegratorConfig::rk4(0.0, 1.0, 1e-2);
    matches!(
        integrate(|s: &PhaseState| el_rhs(&ode, s), &s0, &cfg),
        Err(IntegrationError::Rhs { source: RhsError::DegenerateLagrangian { .. }, .. })
    )
}

fn flag(name: &str, ok: bool) -> Check {
    Check::at_most(name, if ok { 0.0 } else { 1.0 }, 0.0)
}

/// Every suite, in a fixed order.
pub fn selftest_all(seed: u64) -> Report {
    let mut report = selftest_algebra(seed);

    for p in fixtures::reduction_lagrangians() {
        report.extend(check_reduction(&p.into(), 100, seed));
    }
    for p in fixtures::reduction_hamiltonians() {
        report.extend(check_reduction(&p.into(), 100, seed));
    }
    for p in fixtures::reduction_lagrangians() {
        report.extend(check_fd(&p.lagrangian, &p.chart, 20, seed));
    }
    report.extend(check_parse_roundtrip(100, seed));
    report.extend(check_fd_random(100, 5, seed));

    for p in fixtures::audit_lagrangians() {
        report.extend(audit_report(&p.into(), 100, seed, false));
    }
    for p in fixtures::audit_hamiltonians() {
        report.extend(audit_report(&p.into(), 100, seed, false));
    }
    for f in fixtures::el_trajectories() {
        let name = format!("el_residual[{}]", f.name);
        report.push(match el_trajectory_residual(&f) {
            Ok(r) => Check::at_most(name, r, EL_RESIDUAL_TOLERANCE),
            Err(_) => Check::failed(name, EL_RESIDUAL_TOLERANCE),
        });
    }

    let (p, s0, cfg) = fixtures::conservation();
    let ode = synthesize_ham(&p);
    match integrate(|s: &PhaseState| ham_rhs(&ode, s), &s0, &cfg) {
        Ok(tr) => report.extend(conservation_report(&p.into(), &tr)),
        Err(_) => report.push(Check::failed("conservation", CONSERVATION_TOLERANCE)),
    }

    report.push(match oscillator_deviation(1e-3) {
        Ok(d) => Check::at_most("dynamics.oscillator_closed_form", d, 1e-8),
        Err(_) => Check::failed("dynamics.oscillator_closed_form", 1e-8),
    });
    report.push(flag("dynamics.singular_lambda_detected", singular_lambda_detected()));
    report.push(flag("dynamics.degenerate_lagrangian_detected", degenerate_lagrangian_detected()));
    report.seed = seed;
    report
}
