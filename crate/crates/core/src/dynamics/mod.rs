//! Numerical evaluation and time integration of synthesized equations.

mod integrate;
mod linear;

pub use integrate::{integrate, Diagnostics, IntegrationError, IntegratorConfig, Method, Trajectory};
pub use linear::{solve_para_linear, Component, SolveError, PIVOT_TOLERANCE};

use std::io::{self, Write};

use crate::algebra::ParaComplex;
use crate::eom::{
    energy, synthesize_el, Denominator, ExplicitODE, HamiltonError, HamiltonianProblem,
    ImplicitODE, LagrangianProblem,
};
use crate::symbolic::{Coord, EvalError, EvalState, Expr};

/// Time plus coordinate values.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseState {
    pub t: f64,
    pub z: Vec<ParaComplex>,
    pub zb: Vec<ParaComplex>,
}

impl PhaseState {
    pub fn new(t: f64, z: Vec<ParaComplex>, zb: Vec<ParaComplex>) -> Self {
        assert_eq!(z.len(), zb.len(), "z and zb must have equal length");
        Self { t, z, zb }
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn eval_state(&self) -> EvalState {
        EvalState::new(self.z.clone(), self.zb.clone())
    }

    pub fn is_finite(&self) -> bool {
        self.z.iter().chain(&self.zb).all(|x| x.is_finite())
    }

    /// `[z1_a, z1_b, …, zn_b, zb1_a, …, zbn_b]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.z.iter().chain(&self.zb).flat_map(|x| [x.a, x.b]).collect()
    }

    pub fn from_flat(t: f64, n: usize, y: &[f64]) -> Self {
        assert_eq!(y.len(), 4 * n);
        let pcs: Vec<ParaComplex> = y.chunks(2).map(|c| ParaComplex::new(c[0], c[1])).collect();
        Self { t, z: pcs[..n].to_vec(), zb: pcs[n..].to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RhsError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("singular denominator {which} = {value}")]
    SingularDenominator { which: Denominator, value: ParaComplex },
    #[error("degenerate Lagrangian: the {component} component of M is singular")]
    DegenerateLagrangian { component: Component },
}

impl From<HamiltonError> for RhsError {
    fn from(e: HamiltonError) -> Self {
        match e {
            HamiltonError::SingularDenominator { which, value } => RhsError::SingularDenominator { which, value },
            HamiltonError::Eval(e) => RhsError::Eval(e),
        }
    }
}

impl From<SolveError> for RhsError {
    fn from(e: SolveError) -> Self {
        let SolveError::DegenerateLagrangian { component } = e;
        RhsError::DegenerateLagrangian { component }
    }
}

pub type Derivative = (Vec<ParaComplex>, Vec<ParaComplex>);

/// Solves `M(s)·(ξ, ξ̄) = b(s)` and returns `(ż, żb) = (ξ, ξ̄)`.
pub fn el_rhs(ode: &ImplicitODE, s: &PhaseState) -> Result<Derivative, RhsError> {
    let (m, b) = ode.evaluate(&s.eval_state())?;
    let mut x = solve_para_linear(&m, &b)?;
    let xib = x.split_off(s.n());
    Ok((x, xib))
}

pub fn ham_rhs(ode: &ExplicitODE, s: &PhaseState) -> Result<Derivative, RhsError> {
    Ok(ode.evaluate(&s.eval_state())?)
}

/// Maximum Euler–Lagrange residual at each sample, with the time derivatives
/// of `e^λ ∂L/∂zb_i` and `e^{−λ} ∂L/∂z_i` taken by central differences of
/// neighbouring samples. Boundary samples and samples whose neighbours are
/// not spaced `h` apart (relative 1e-6) are `None`.
pub fn residual_series(p: &LagrangianProblem, tr: &Trajectory, h: f64) -> Result<Vec<Option<f64>>, EvalError> {
    let n = p.chart.n();
    let e_pos = p.lambda.clone().exp();
    let e_neg = (-p.lambda.clone()).exp();
    let l_z: Vec<Expr> = (0..n).map(|i| p.partial(Coord::z(i))).collect();
    let l_zb: Vec<Expr> = (0..n).map(|i| p.partial(Coord::zb(i))).collect();
    let g_a: Vec<Expr> = l_zb.iter().map(|d| e_pos.clone() * d.clone()).collect();
    let g_b: Vec<Expr> = l_z.iter().map(|d| e_neg.clone() * d.clone()).collect();
    let eval_all = |es: &[Expr], s: &EvalState| es.iter().map(|e| e.evaluate(s)).collect::<Result<Vec<_>, _>>();

    let k = tr.len();
    let mut out = vec![None; k];
    for i in 1..k.saturating_sub(1) {
        let (prev, cur, next) = (&tr.samples[i - 1], &tr.samples[i], &tr.samples[i + 1]);
        let uniform = ((cur.t - prev.t) - h).abs() <= 1e-6 * h && ((next.t - cur.t) - h).abs() <= 1e-6 * h;
        if !uniform {
            continue;
        }
        let (sp, sc, sn) = (prev.eval_state(), cur.eval_state(), next.eval_state());
        let width = next.t - prev.t;
        let (a_prev, a_next) = (eval_all(&g_a, &sp)?, eval_all(&g_a, &sn)?);
        let (b_prev, b_next) = (eval_all(&g_b, &sp)?, eval_all(&g_b, &sn)?);
        let (lz, lzb) = (eval_all(&l_z, &sc)?, eval_all(&l_zb, &sc)?);
        let mut worst: f64 = 0.0;
        for r in 0..n {
            let row_a = ParaComplex::J * (a_next[r] - a_prev[r]).scale(1.0 / width) + lz[r];
            let row_b = ParaComplex::J * (b_next[r] - b_prev[r]).scale(1.0 / width) - lzb[r];
            worst = worst.max(row_a.max_abs()).max(row_b.max_abs());
        }
        out[i] = Some(worst);
    }
    Ok(out)
}

/// Fills `diagnostics[k].energy` with `H` at every sample.
pub fn hamiltonian_energy(p: &HamiltonianProblem, tr: &mut Trajectory) -> Result<(), EvalError> {
    for (s, d) in tr.samples.iter().zip(tr.diagnostics.iter_mut()) {
        d.energy = Some(p.hamiltonian.evaluate(&s.eval_state())?);
    }
    Ok(())
}

/// Fills `diagnostics[k].energy` with `E_L`, using the velocities of the
/// solved Euler–Lagrange system at each sample.
pub fn lagrangian_energy(p: &LagrangianProblem, tr: &mut Trajectory) -> Result<(), RhsError> {
    let ode = synthesize_el(p);
    let e = energy(p);
    for (s, d) in tr.samples.iter().zip(tr.diagnostics.iter_mut()) {
        let (xi, xib) = el_rhs(&ode, s)?;
        d.energy = Some(e.evaluate(&s.eval_state().with_velocities(xi, xib))?);
    }
    Ok(())
}

/// Writes `t,z1_a,z1_b,…,zb1_a,zb1_b,…[,H_a,H_b][,residual]` rows with
/// round-trip float formatting. Missing diagnostics print as empty fields.
pub fn write_csv<W: Write>(tr: &Trajectory, out: &mut W, with_energy: bool, with_residual: bool) -> io::Result<()> {
    let n = tr.samples.first().map_or(0, PhaseState::n);
    let mut header = vec!["t".to_string()];
    for prefix in ["z", "zb"] {
        for i in 1..=n {
            header.push(format!("{prefix}{i}_a"));
            header.push(format!("{prefix}{i}_b"));
        }
    }
    if with_energy {
        header.extend(["H_a".to_string(), "H_b".to_string()]);
    }
    if with_residual {
        header.push("residual".into());
    }
    writeln!(out, "{}", header.join(","))?;
    for (s, d) in tr.samples.iter().zip(&tr.diagnostics) {
        let mut row = vec![format!("{:?}", s.t)];
        row.extend(s.to_flat().iter().map(|x| format!("{x:?}")));
        if with_energy {
            match d.energy {
                Some(e) => row.extend([format!("{:?}", e.a), format!("{:?}", e.b)]),
                None => row.extend([String::new(), String::new()]),
            }
        }
        if with_residual {
            row.push(d.residual.map(|r| format!("{r:?}")).unwrap_or_default());
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
