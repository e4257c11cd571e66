//! Geometric constructions and synthesis of the conformal bi-para
//! Euler–Lagrange and Hamilton equations.

mod construct;
mod forms;
mod synth;

pub use construct::{
    canonical_omega, canonical_two_form, energy, lagrangian_two_form, liouville_one_form,
    liouville_vector_field, vertical_differential,
};
pub use forms::{Covector, OneForm, Semispray, ThreeForm, TwoForm, VectorField};
pub use synth::{
    audit_hamilton, audit_lagrange, derive_hamilton, derive_lagrange, synthesize_el,
    synthesize_ham, ExplicitODE, HamiltonAudit, ImplicitODE, LagrangeAudit,
};

use std::fmt;

use crate::algebra::ParaComplex;
use crate::symbolic::{differentiate, Coord, CoordinateChart, EvalError, Expr};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProblemError {
    #[error("{role} uses {coord}, which is outside the chart of {n} coordinate pairs")]
    ForeignVariable { role: &'static str, coord: Coord, n: usize },
}

fn check(role: &'static str, e: &Expr, chart: &CoordinateChart) -> Result<(), ProblemError> {
    match e.foreign_var(chart) {
        Some(coord) => Err(ProblemError::ForeignVariable { role, coord, n: chart.n() }),
        None => Ok(()),
    }
}

/// A Lagrangian `L(z, zb)` with conformal factor `λ(z, zb)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianProblem {
    pub chart: CoordinateChart,
    pub lagrangian: Expr,
    pub lambda: Expr,
}

impl LagrangianProblem {
    pub fn new(chart: CoordinateChart, lagrangian: Expr, lambda: Expr) -> Result<Self, ProblemError> {
        let chart = CoordinateChart::new(chart.n());
        check("lagrangian", &lagrangian, &chart)?;
        check("lambda", &lambda, &chart)?;
        Ok(Self { chart, lagrangian, lambda })
    }

    pub fn partial(&self, c: Coord) -> Expr {
        differentiate(&self.lagrangian, c)
    }
}

/// A Hamiltonian `H(z, zb)` with conformal factor `λ(z, zb)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianProblem {
    pub chart: CoordinateChart,
    pub hamiltonian: Expr,
    pub lambda: Expr,
}

impl HamiltonianProblem {
    pub fn new(chart: CoordinateChart, hamiltonian: Expr, lambda: Expr) -> Result<Self, ProblemError> {
        let chart = CoordinateChart::new(chart.n());
        check("hamiltonian", &hamiltonian, &chart)?;
        check("lambda", &lambda, &chart)?;
        Ok(Self { chart, hamiltonian, lambda })
    }

    pub fn partial(&self, c: Coord) -> Expr {
        differentiate(&self.hamiltonian, c)
    }
}

/// The two conformal denominators of the Hamilton equations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Denominator {
    /// `D⁺ = 1 + ½ e^λ S`
    DPlus,
    /// `D⁻ = 1 − ½ e^λ S`
    DMinus,
}

impl fmt::Display for Denominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Denominator::DPlus => "D+",
            Denominator::DMinus => "D-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HamiltonError {
    #[error("singular denominator {which} = {value}")]
    SingularDenominator { which: Denominator, value: ParaComplex },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Either kind of problem, for code that handles both.
#[derive(Clone, Debug, PartialEq)]
pub enum Problem {
    Lagrangian(LagrangianProblem),
    Hamiltonian(HamiltonianProblem),
}

impl Problem {
    pub fn chart(&self) -> CoordinateChart {
        match self {
            Problem::Lagrangian(p) => p.chart,
            Problem::Hamiltonian(p) => p.chart,
        }
    }

    pub fn lambda(&self) -> &Expr {
        match self {
            Problem::Lagrangian(p) => &p.lambda,
            Problem::Hamiltonian(p) => &p.lambda,
        }
    }

    /// The Lagrangian or Hamiltonian.
    pub fn function(&self) -> &Expr {
        match self {
            Problem::Lagrangian(p) => &p.lagrangian,
            Problem::Hamiltonian(p) => &p.hamiltonian,
        }
    }
}

impl From<LagrangianProblem> for Problem {
    fn from(p: LagrangianProblem) -> Self {
        Problem::Lagrangian(p)
    }
}

impl From<HamiltonianProblem> for Problem {
    fn from(p: HamiltonianProblem) -> Self {
        Problem::Hamiltonian(p)
    }
}
