use std::convert::Infallible;

use bpc_core::algebra::ParaComplex;
use bpc_core::dynamics::*;
use bpc_core::eom::*;
use bpc_core::symbolic::{parse, CoordinateChart};

fn pc(a: f64, b: f64) -> ParaComplex {
    ParaComplex::new(a, b)
}

fn lagr(l: &str, lambda: &str) -> LagrangianProblem {
    let chart = CoordinateChart::new(1);
    LagrangianProblem::new(chart, parse(l, &chart).unwrap(), parse(lambda, &chart).unwrap()).unwrap()
}

fn ham(h: &str, lambda: &str) -> HamiltonianProblem {
    let chart = CoordinateChart::new(1);
    HamiltonianProblem::new(chart, parse(h, &chart).unwrap(), parse(lambda, &chart).unwrap()).unwrap()
}

fn start(z: ParaComplex, zb: ParaComplex) -> PhaseState {
    PhaseState::new(0.0, vec![z], vec![zb])
}

fn oscillator(s: &PhaseState) -> Result<Derivative, Infallible> {
    Ok((vec![-(ParaComplex::J * s.zb[0])], vec![ParaComplex::J * s.z[0]]))
}

#[test]
fn el_rhs_examples() {
    let ode = synthesize_el(&lagr("z1*zb1", "0"));
    let (dz, dzb) = el_rhs(&ode, &start(ParaComplex::ONE, ParaComplex::ZERO)).unwrap();
    assert_eq!((dz[0], dzb[0]), (ParaComplex::ZERO, ParaComplex::J));
    let (dz, dzb) = el_rhs(&ode, &start(ParaComplex::ZERO, ParaComplex::ZERO)).unwrap();
    assert!(dz[0].is_zero() && dzb[0].is_zero());

    let ode = synthesize_el(&lagr("z1", "0"));
    assert!(matches!(
        el_rhs(&ode, &start(pc(0.3, 0.1), pc(1.0, -0.4))),
        Err(RhsError::DegenerateLagrangian { .. })
    ));
}

#[test]
fn constant_rhs_gives_constant_trajectory() {
    let s0 = start(pc(0.3, -1.0), pc(2.0, 0.5));
    for cfg in [IntegratorConfig::rk4(0.0, 1.0, 0.1), IntegratorConfig::rkf45(0.0, 1.0, 1e-8)] {
        let tr = integrate(|_: &PhaseState| Ok::<_, Infallible>((vec![ParaComplex::ZERO], vec![ParaComplex::ZERO])), &s0, &cfg).unwrap();
        assert!(tr.samples.iter().all(|s| s.z == s0.z && s.zb == s0.zb));
        assert_eq!(tr.last().unwrap().t, 1.0);
    }
}

#[test]
fn oscillator_half_period() {
    let cfg = IntegratorConfig::rk4(0.0, std::f64::consts::PI, 1e-3);
    let tr = integrate(oscillator, &start(ParaComplex::ONE, ParaComplex::ZERO), &cfg).unwrap();
    let end = tr.last().unwrap();
    assert_eq!(end.t, std::f64::consts::PI);
    assert!((end.z[0] - pc(-1.0, 0.0)).max_abs() <= 1e-8, "{:?}", end);
    assert!(end.zb[0].max_abs() <= 1e-8, "{:?}", end);
    let ts: Vec<f64> = tr.samples.iter().map(|s| s.t).collect();
    assert!(ts.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn hyperbolic_rotation() {
    // ż = −j z has the closed form z(t) = exp(−j t) = cosh t − j sinh t
    let rhs = |s: &PhaseState| Ok::<_, Infallible>((vec![-(ParaComplex::J * s.z[0])], vec![ParaComplex::ZERO]));
    let s0 = start(ParaComplex::ONE, ParaComplex::ZERO);
    let exact = pc(1f64.cosh(), -1f64.sinh());
    for cfg in [IntegratorConfig::rk4(0.0, 1.0, 1e-3), IntegratorConfig::rkf45(0.0, 1.0, 1e-11)] {
        let tr = integrate(rhs, &s0, &cfg).unwrap();
        assert!((tr.last().unwrap().z[0] - exact).max_abs() <= 1e-8);
    }
}

#[test]
fn rhs_errors_carry_the_time() {
    let ode = synthesize_ham(&ham("z1*zb1", "2*z1 - 2"));
    let cfg = IntegratorConfig::rk4(0.0, 1.0, 1e-2);
    let err = integrate(|s: &PhaseState| ham_rhs(&ode, s), &start(ParaComplex::ONE, pc(0.5, 0.0)), &cfg).unwrap_err();
    match err {
        IntegrationError::Rhs { t, source: RhsError::SingularDenominator { which, .. }, .. } => {
            assert_eq!(t, 0.0);
            assert_eq!(which, Denominator::DMinus);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn invalid_configs() {
    let s0 = start(ParaComplex::ONE, ParaComplex::ZERO);
    for cfg in [
        IntegratorConfig::rk4(1.0, 0.0, 0.1),
        IntegratorConfig::rk4(0.0, 1.0, 0.0),
        IntegratorConfig::rkf45(0.0, 1.0, -1.0),
    ] {
        assert!(matches!(integrate(oscillator, &s0, &cfg), Err(IntegrationError::InvalidConfig(_))));
    }
    let mut cfg = IntegratorConfig::rkf45(0.0, 10.0, 1e-12);
    cfg.max_steps = 5;
    assert!(matches!(integrate(oscillator, &s0, &cfg), Err(IntegrationError::MaxSteps { .. })));
}

#[test]
fn rkf45_matches_rk4() {
    let s0 = start(pc(0.8, 0.1), pc(-0.3, 0.4));
    let a = integrate(oscillator, &s0, &IntegratorConfig::rk4(0.0, 3.0, 1e-4)).unwrap();
    let b = integrate(oscillator, &s0, &IntegratorConfig::rkf45(0.0, 3.0, 1e-10)).unwrap();
    let (ea, eb) = (a.last().unwrap(), b.last().unwrap());
    assert!((ea.z[0] - eb.z[0]).max_abs() <= 1e-7);
    assert!((ea.zb[0] - eb.zb[0]).max_abs() <= 1e-7);
}

#[test]
fn residual_series_examples() {
    let p = lagr("z1*zb1", "0");
    let ode = synthesize_el(&p);
    let dt = 1e-3;
    let tr = integrate(|s: &PhaseState| el_rhs(&ode, s), &start(ParaComplex::ONE, ParaComplex::ZERO), &IntegratorConfig::rk4(0.0, 1.0, dt)).unwrap();
    let r = residual_series(&p, &tr, dt).unwrap();
    assert!(r[0].is_none() && r[r.len() - 1].is_none());
    let worst = r.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
    assert!(worst <= 1e-5, "{worst}");

    // equilibrium of a Lagrangian whose partials vanish at the origin
    let q = lagr("z1^2*zb1^2", "0.3*z1");
    let eq = Trajectory {
        samples: (0..5).map(|k| PhaseState::new(k as f64 * 0.1, vec![ParaComplex::ZERO], vec![ParaComplex::ZERO])).collect(),
        diagnostics: vec![Diagnostics::default(); 5],
    };
    assert!(residual_series(&q, &eq, 0.1).unwrap().iter().flatten().all(|&r| r <= 1e-12));

    // the oscillator path is far from solving another Lagrangian
    let other = residual_series(&lagr("z1^2*zb1", "0"), &tr, dt).unwrap();
    assert!(other.iter().flatten().fold(0.0f64, |a, &b| a.max(b)) > 0.1);
}

#[test]
fn csv_layout() {
    let mut tr = integrate(oscillator, &start(ParaComplex::ONE, ParaComplex::ZERO), &IntegratorConfig::rk4(0.0, 0.2, 0.1)).unwrap();
    hamiltonian_energy(&ham("z1*zb1", "0"), &mut tr).unwrap();
    let mut out = Vec::new();
    write_csv(&tr, &mut out, true, true).unwrap();
    let text = String::from_utf8(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,z1_a,z1_b,zb1_a,zb1_b,H_a,H_b,residual");
    assert_eq!(lines[1], "0.0,1.0,0.0,0.0,0.0,0.0,0.0,");
    assert_eq!(lines.len(), 4);
    let last: Vec<f64> = lines[3].split(',').take(5).map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 0.2);
}

#[test]
fn hamilton_conservation_constant_lambda() {
    let p = ham("z1*zb1 + 0.1*z1^2", "0.7");
    let ode = synthesize_ham(&p);
    let mut tr = integrate(|s: &PhaseState| ham_rhs(&ode, s), &start(pc(0.5, 0.4), pc(0.2, -0.25)), &IntegratorConfig::rkf45(0.0, 10.0, 1e-10)).unwrap();
    hamiltonian_energy(&p, &mut tr).unwrap();
    let h0 = tr.diagnostics[0].energy.unwrap();
    let drift = tr.diagnostics.iter().map(|d| (d.energy.unwrap() - h0).max_abs()).fold(0.0, f64::max);
    println!("drift {drift:e} over {} samples", tr.len());
    assert!(drift <= 1e-8, "{drift:e}");
}

#[test]
fn rk4_convergence_ratio() {
    let tau = 2.0 * std::f64::consts::PI;
    let err = |dt: f64| {
        let tr = integrate(oscillator, &start(ParaComplex::ONE, ParaComplex::ZERO), &IntegratorConfig::rk4(0.0, tau, dt)).unwrap();
        let e = tr.last().unwrap();
        (e.z[0] - pc(tau.cos(), 0.0)).max_abs().max((e.zb[0] - pc(0.0, tau.sin())).max_abs())
    };
    let (e4, e2, e1) = (err(4e-3), err(2e-3), err(1e-3));
    println!("errors {e4:e} {e2:e} {e1:e}; ratios {} {}", e4 / e2, e2 / e1);
    assert!((12.0..=20.0).contains(&(e4 / e2)));
    assert!((12.0..=20.0).contains(&(e2 / e1)));
}

#[test]
fn rkf45_matches_rk4_on_fixtures() {
    for f in bpc_core::verify::fixtures::el_trajectories() {
        let ode = synthesize_el(&f.problem);
        let rhs = |s: &PhaseState| el_rhs(&ode, s);
        let (t0, t1) = (f.config.t0, f.config.t1);
        let a = integrate(rhs, &f.start, &IntegratorConfig::rk4(t0, t1, 1e-4)).unwrap();
        let b = integrate(rhs, &f.start, &IntegratorConfig::rkf45(t0, t1, 1e-10)).unwrap();
        let (ea, eb) = (a.last().unwrap(), b.last().unwrap());
        let dev = ea.z.iter().chain(&ea.zb).zip(eb.z.iter().chain(&eb.zb)).map(|(x, y)| (*x - *y).max_abs()).fold(0.0, f64::max);
        assert!(dev <= 1e-7, "{}: {dev:e}", f.name);
    }
}
