use std::path::Path;

use serde::Deserialize;

use bpc_core::algebra::ParaComplex;
use bpc_core::dynamics::{IntegratorConfig, PhaseState};
use bpc_core::eom::{HamiltonianProblem, LagrangianProblem, Problem};
use bpc_core::symbolic::{parse, CoordinateChart, Expr};

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Lagrangian,
    Hamiltonian,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Integrator {
    Rk4,
    Rkf45,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Initial {
    pub z: Vec<[f64; 2]>,
    pub zb: Vec<[f64; 2]>,
}

/// On-disk problem description. Values are canonical `[a, b]` pairs.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub n: usize,
    pub kind: Kind,
    pub function: String,
    pub lambda: String,
    pub initial: Initial,
    pub t0: f64,
    pub t1: f64,
    pub integrator: Integrator,
    #[serde(default)]
    pub dt: Option<f64>,
    #[serde(default)]
    pub tol: Option<f64>,
    #[serde(default)]
    pub emit_energy: bool,
}

/// A validated problem file.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub problem: Problem,
    pub start: PhaseState,
    pub config: IntegratorConfig,
    pub emit_energy: bool,
}

fn expression(role: &str, text: &str, chart: &CoordinateChart) -> Result<Expr, String> {
    parse(text, chart).map_err(|e| format!("{role}: {e}\n  {text}\n  {}^", " ".repeat(e.column().saturating_sub(1))))
}

fn pairs(role: &str, v: &[[f64; 2]], n: usize) -> Result<Vec<ParaComplex>, String> {
    if v.len() != n {
        return Err(format!("initial.{role} has {} entries, expected n = {n}", v.len()));
    }
    if v.iter().flatten().any(|x| !x.is_finite()) {
        return Err(format!("initial.{role} contains a non-finite value"));
    }
    Ok(v.iter().map(|[a, b]| ParaComplex::new(*a, *b)).collect())
}

impl ProblemFile {
    pub fn read(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn load(&self) -> Result<Loaded, String> {
        if self.n == 0 {
            return Err("n must be at least 1".into());
        }
        let chart = CoordinateChart::new(self.n);
        let function = expression("function", &self.function, &chart)?;
        let lambda = expression("lambda", &self.lambda, &chart)?;
        let problem = match self.kind {
            Kind::Lagrangian => Problem::from(LagrangianProblem::new(chart, function, lambda).map_err(|e| e.to_string())?),
            Kind::Hamiltonian => Problem::from(HamiltonianProblem::new(chart, function, lambda).map_err(|e| e.to_string())?),
        };
        let start = PhaseState::new(self.t0, pairs("z", &self.initial.z, self.n)?, pairs("zb", &self.initial.zb, self.n)?);
        let config = match (self.integrator, self.dt, self.tol) {
            (Integrator::Rk4, Some(dt), None) => IntegratorConfig::rk4(self.t0, self.t1, dt),
            (Integrator::Rkf45, None, Some(tol)) => IntegratorConfig::rkf45(self.t0, self.t1, tol),
            (Integrator::Rk4, _, _) => return Err("rk4 needs `dt` and no `tol`".into()),
            (Integrator::Rkf45, _, _) => return Err("rkf45 needs `tol` and no `dt`".into()),
        };
        config.validate()?;
        Ok(Loaded { problem, start, config, emit_energy: self.emit_energy })
    }
}
