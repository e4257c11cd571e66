//! Shipped problems used by the suites, the acceptance run and the CLI.

use crate::algebra::ParaComplex;
use crate::dynamics::{IntegratorConfig, PhaseState};
use crate::eom::{HamiltonianProblem, LagrangianProblem};
use crate::symbolic::{parse, CoordinateChart};

pub fn lagrangian(n: usize, l: &str, lambda: &str) -> LagrangianProblem {
    let chart = CoordinateChart::new(n);
    let parsed = |s: &str| parse(s, &chart).unwrap_or_else(|e| panic!("fixture {s:?}: {e}"));
    LagrangianProblem::new(chart, parsed(l), parsed(lambda)).expect("fixture lies in its chart")
}

pub fn hamiltonian(n: usize, h: &str, lambda: &str) -> HamiltonianProblem {
    let chart = CoordinateChart::new(n);
    let parsed = |s: &str| parse(s, &chart).unwrap_or_else(|e| panic!("fixture {s:?}: {e}"));
    HamiltonianProblem::new(chart, parsed(h), parsed(lambda)).expect("fixture lies in its chart")
}

/// Lagrangians with λ = 0 for the reduction check.
pub fn reduction_lagrangians() -> Vec<LagrangianProblem> {
    vec![
        lagrangian(1, "z1*zb1", "0"),
        lagrangian(1, "z1^2*zb1 + 0.3*zb1^2", "0"),
        lagrangian(1, "0.5*zb1^2 + 0.5*z1^2 + 0.2*z1*zb1", "0"),
        lagrangian(1, "exp(z1)*zb1 + 0.5*zb1^2", "0"),
        lagrangian(2, "z1*zb1 + z2*zb2 + 0.1*z1*z2*zb1", "0"),
    ]
}

/// Hamiltonians with λ = 0 for the reduction check.
pub fn reduction_hamiltonians() -> Vec<HamiltonianProblem> {
    vec![
        hamiltonian(1, "z1*zb1", "0"),
        hamiltonian(1, "z1*zb1 + 0.1*z1^2", "0"),
        hamiltonian(1, "0.5*zb1^2 + 0.5*z1^2", "0"),
        hamiltonian(1, "exp(z1)*zb1 + sin(zb1)", "0"),
        hamiltonian(2, "z1*zb1 + z2*zb2 + 0.3*z1*zb2", "0"),
    ]
}

/// Lagrangians with non-trivial conformal factors for the plug-back audit.
pub fn audit_lagrangians() -> Vec<LagrangianProblem> {
    let mut v = reduction_lagrangians();
    v.extend([
        lagrangian(1, "z1*zb1", "0.7"),
        lagrangian(1, "z1*zb1 + 0.5*zb1^2", "0.2*z1 + 0.1*zb1"),
        lagrangian(1, "0.5*zb1^2 + 0.5*z1^2 + 0.2*z1*zb1", "0.1*z1*zb1"),
        lagrangian(2, "z1*zb1 + z2*zb2 + 0.1*z1*z2*zb1", "0.1*z2 - 0.2*zb1"),
    ]);
    v
}

/// Hamiltonians with non-trivial conformal factors for the Hamilton audit.
pub fn audit_hamiltonians() -> Vec<HamiltonianProblem> {
    let mut v = reduction_hamiltonians();
    v.extend([
        hamiltonian(1, "z1*zb1 + 0.1*z1^2", "0.7"),
        hamiltonian(1, "z1*zb1", "0.3*z1"),
        hamiltonian(1, "0.5*zb1^2 + 0.5*z1^2", "0.1*z1*zb1 + 0.2*zb1"),
        hamiltonian(2, "z1*zb1 + z2*zb2 + 0.3*z1*zb2", "0.2*z1 - 0.1*zb2"),
    ]);
    v
}

/// A Lagrangian with a start state and an RK4 run along which the
/// velocity system stays solvable.
#[derive(Clone, Debug)]
pub struct TrajectoryFixture {
    pub name: &'static str,
    pub problem: LagrangianProblem,
    pub start: PhaseState,
    pub config: IntegratorConfig,
}

fn pc(a: f64, b: f64) -> ParaComplex {
    ParaComplex::new(a, b)
}

pub fn el_trajectories() -> Vec<TrajectoryFixture> {
    let tau = 2.0 * std::f64::consts::PI;
    let one = |z: ParaComplex, zb: ParaComplex| PhaseState::new(0.0, vec![z], vec![zb]);
    vec![
        TrajectoryFixture {
            name: "oscillator",
            problem: lagrangian(1, "z1*zb1", "0"),
            start: one(pc(1.0, 0.0), ParaComplex::ZERO),
            config: IntegratorConfig::rk4(0.0, tau, 1e-3),
        },
        TrajectoryFixture {
            name: "oscillator-const-lambda",
            problem: lagrangian(1, "z1*zb1", "0.7"),
            start: one(pc(0.6, 0.2), pc(-0.3, 0.1)),
            config: IntegratorConfig::rk4(0.0, 2.0, 1e-3),
        },
        TrajectoryFixture {
            name: "quadratic-coupled",
            problem: lagrangian(1, "0.5*zb1^2 + 0.5*z1^2 + 0.2*z1*zb1", "0"),
            start: one(pc(0.5, 0.1), pc(0.2, -0.3)),
            config: IntegratorConfig::rk4(0.0, 2.0, 1e-3),
        },
        TrajectoryFixture {
            name: "conformal-linear-lambda",
            problem: lagrangian(1, "z1*zb1 + 0.5*zb1^2", "0.2*z1 + 0.1*zb1"),
            start: one(pc(0.3, 0.1), pc(0.2, 0.0)),
            config: IntegratorConfig::rk4(0.0, 1.0, 1e-3),
        },
        TrajectoryFixture {
            name: "two-pairs",
            problem: lagrangian(2, "z1*zb1 + z2*zb2 + 0.1*z1*z2*zb1", "0.1*z2 - 0.2*zb1"),
            start: PhaseState::new(0.0, vec![pc(0.4, 0.1), pc(-0.2, 0.3)], vec![pc(0.1, 0.0), pc(0.3, -0.1)]),
            config: IntegratorConfig::rk4(0.0, 1.0, 1e-3),
        },
    ]
}

/// `λ = 2 z1 − 2` with `z1 = 1`: `D⁻` vanishes at the start.
pub fn singular_lambda() -> (HamiltonianProblem, PhaseState) {
    (
        hamiltonian(1, "z1*zb1", "2*z1 - 2"),
        PhaseState::new(0.0, vec![ParaComplex::ONE], vec![pc(0.5, 0.0)]),
    )
}

/// `L = z1` has a vanishing Hessian.
pub fn degenerate_lagrangian() -> (LagrangianProblem, PhaseState) {
    (lagrangian(1, "z1", "0"), PhaseState::new(0.0, vec![pc(0.3, 0.1)], vec![pc(1.0, -0.4)]))
}

/// The constant-λ conservation problem and its start state.
pub fn conservation() -> (HamiltonianProblem, PhaseState, IntegratorConfig) {
    (
        hamiltonian(1, "z1*zb1 + 0.1*z1^2", "0.7"),
        PhaseState::new(0.0, vec![pc(0.5, 0.4)], vec![pc(0.2, -0.25)]),
        IntegratorConfig::rkf45(0.0, 10.0, 1e-10),
    )
}
