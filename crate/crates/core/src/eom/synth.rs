use super::forms::Semispray;
use super::{Denominator, HamiltonError, HamiltonianProblem, LagrangianProblem};
use crate::algebra::ParaComplex;
use crate::symbolic::{
    differentiate, simplify, to_text, Coord, CoordinateChart, EvalError, EvalState, Expr,
};

fn c(v: ParaComplex) -> Expr {
    Expr::constant(v)
}

/// `M(z, zb) · (ξ, ξ̄) = b(z, zb)`; unknowns ordered `xi1..xin, xib1..xibn`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImplicitODE {
    pub chart: CoordinateChart,
    pub m: Vec<Vec<Expr>>,
    pub b: Vec<Expr>,
}

impl ImplicitODE {
    pub fn dim(&self) -> usize {
        self.b.len()
    }

    pub fn evaluate(
        &self,
        s: &EvalState,
    ) -> Result<(Vec<Vec<ParaComplex>>, Vec<ParaComplex>), EvalError> {
        let m = self
            .m
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate(s)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let b = self.b.iter().map(|e| e.evaluate(s)).collect::<Result<Vec<_>, _>>()?;
        Ok((m, b))
    }

    /// Row `i` as an expression `Σ_k M_ik u_k − b_i` in the velocity symbols.
    pub fn row(&self, i: usize) -> Expr {
        let unknowns = Semispray::symbols(self.chart.n());
        let mut terms: Vec<Expr> = self.m[i]
            .iter()
            .zip(unknowns.xi.iter().chain(&unknowns.xib))
            .filter(|(m, _)| !m.is_zero())
            .map(|(m, u)| m.clone() * u.clone())
            .collect();
        terms.push(-self.b[i].clone());
        simplify(&Expr::sum(terms))
    }

    /// Closed-form velocities when `M` is diagonal or the system is 2×2.
    /// `None` when `M` is symbolically singular or too large to invert by hand.
    pub fn solve_symbolic(&self) -> Option<Semispray<Expr>> {
        let d = self.dim();
        let n = self.chart.n();
        let diagonal = (0..d).all(|i| (0..d).all(|k| i == k || self.m[i][k].is_zero()));
        let x: Vec<Expr> = if diagonal {
            if self.m.iter().enumerate().any(|(i, row)| row[i].is_zero()) {
                return None;
            }
            (0..d)
                .map(|i| simplify(&(self.b[i].clone() / self.m[i][i].clone())))
                .collect()
        } else if d == 2 {
            let m = &self.m;
            let det = simplify(&(m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone()));
            if det.is_zero() {
                return None;
            }
            vec![
                simplify(&((self.b[0].clone() * m[1][1].clone() - m[0][1].clone() * self.b[1].clone()) / det.clone())),
                simplify(&((m[0][0].clone() * self.b[1].clone() - self.b[0].clone() * m[1][0].clone()) / det)),
            ]
        } else {
            return None;
        };
        let (xi, xib) = x.split_at(n);
        Some(Semispray::new(xi.to_vec(), xib.to_vec()))
    }
}

/// Explicit Hamilton flow `ż = rhs_z`, `żb = rhs_zb`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitODE {
    pub chart: CoordinateChart,
    pub rhs_z: Vec<Expr>,
    pub rhs_zb: Vec<Expr>,
    pub d_plus: Expr,
    pub d_minus: Expr,
    num_z: Vec<Expr>,
    num_zb: Vec<Expr>,
}

impl ExplicitODE {
    pub fn denominators(&self, s: &EvalState) -> Result<(ParaComplex, ParaComplex), HamiltonError> {
        let dp = self.d_plus.evaluate(s)?;
        let dm = self.d_minus.evaluate(s)?;
        if !dp.is_invertible() {
            return Err(HamiltonError::SingularDenominator { which: Denominator::DPlus, value: dp });
        }
        if !dm.is_invertible() {
            return Err(HamiltonError::SingularDenominator { which: Denominator::DMinus, value: dm });
        }
        Ok((dp, dm))
    }

    /// The same flow with every right-hand side negated.
    pub fn negated(&self) -> Self {
        let neg = |v: &[Expr]| v.iter().map(|e| simplify(&-e.clone())).collect::<Vec<_>>();
        Self {
            chart: self.chart,
            rhs_z: neg(&self.rhs_z),
            rhs_zb: neg(&self.rhs_zb),
            d_plus: self.d_plus.clone(),
            d_minus: self.d_minus.clone(),
            num_z: neg(&self.num_z),
            num_zb: neg(&self.num_zb),
        }
    }

    /// `(ż, żb)` at `s`.
    pub fn evaluate(
        &self,
        s: &EvalState,
    ) -> Result<(Vec<ParaComplex>, Vec<ParaComplex>), HamiltonError> {
        let (dp, dm) = self.denominators(s)?;
        let (ip, im) = (dp.inverse().unwrap(), dm.inverse().unwrap());
        let z = self
            .num_z
            .iter()
            .map(|e| Ok(e.evaluate(s)? * ip))
            .collect::<Result<Vec<_>, HamiltonError>>()?;
        let zb = self
            .num_zb
            .iter()
            .map(|e| Ok(e.evaluate(s)? * im))
            .collect::<Result<Vec<_>, HamiltonError>>()?;
        Ok((z, zb))
    }
}

pub fn synthesize_el(p: &LagrangianProblem) -> ImplicitODE {
    let n = p.chart.n();
    let pos = p.chart.positions();
    let l_z: Vec<Expr> = (0..n).map(|i| p.partial(Coord::z(i))).collect();
    let l_zb: Vec<Expr> = (0..n).map(|i| p.partial(Coord::zb(i))).collect();
    let lam: Vec<Expr> = pos.iter().map(|&q| differentiate(&p.lambda, q)).collect();
    let j_pos = c(ParaComplex::J) * p.lambda.clone().exp();
    let j_neg = c(ParaComplex::J) * (-p.lambda.clone()).exp();

    let mut m = vec![vec![Expr::zero(); 2 * n]; 2 * n];
    let mut b = vec![Expr::zero(); 2 * n];
    for i in 0..n {
        for (k, &q) in pos.iter().enumerate() {
            let a = differentiate(&l_zb[i], q) + lam[k].clone() * l_zb[i].clone();
            m[i][k] = simplify(&(j_pos.clone() * a));
            let bb = differentiate(&l_z[i], q) - lam[k].clone() * l_z[i].clone();
            m[n + i][k] = simplify(&(j_neg.clone() * bb));
        }
        b[i] = simplify(&-l_z[i].clone());
        b[n + i] = l_zb[i].clone();
    }
    ImplicitODE { chart: p.chart, m, b }
}

/// The sum `S = Σ z_i ∂λ/∂z_i + zb_i ∂λ/∂zb_i`.
fn lambda_euler_sum(lambda: &Expr, chart: &CoordinateChart) -> Expr {
    let terms = chart
        .positions()
        .into_iter()
        .map(|q| Expr::var(q) * differentiate(lambda, q))
        .collect();
    simplify(&Expr::sum(terms))
}

pub fn synthesize_ham(p: &HamiltonianProblem) -> ExplicitODE {
    let n = p.chart.n();
    let half_e = c(ParaComplex::real(0.5)) * p.lambda.clone().exp() * lambda_euler_sum(&p.lambda, &p.chart);
    let d_plus = simplify(&(Expr::one() + half_e.clone()));
    let d_minus = simplify(&(Expr::one() - half_e));
    let num_z: Vec<Expr> = (0..n)
        .map(|i| simplify(&-(c(ParaComplex::J) * p.partial(Coord::zb(i)))))
        .collect();
    let num_zb: Vec<Expr> = (0..n)
        .map(|i| simplify(&(c(ParaComplex::J) * p.partial(Coord::z(i)))))
        .collect();
    let rhs_z = num_z.iter().map(|e| simplify(&(e.clone() / d_plus.clone()))).collect();
    let rhs_zb = num_zb.iter().map(|e| simplify(&(e.clone() / d_minus.clone()))).collect();
    ExplicitODE { chart: p.chart, rhs_z, rhs_zb, d_plus, d_minus, num_z, num_zb }
}

/// Direct evaluation of the Euler–Lagrange rows
/// `j d/dt(e^λ L_{zb_i}) + L_{z_i}` and `j d/dt(e^{−λ} L_{z_i}) − L_{zb_i}`,
/// with `d/dt = ξ^k ∂/∂z_k + ξ̄^k ∂/∂zb_k`.
#[derive(Clone, Debug)]
pub struct LagrangeAudit {
    rows: Vec<Expr>,
    n: usize,
}

impl LagrangeAudit {
    pub fn new(p: &LagrangianProblem) -> Self {
        let n = p.chart.n();
        let total = |f: &Expr| -> Expr {
            let terms = p
                .chart
                .positions()
                .into_iter()
                .map(|q| Expr::var(q.velocity()) * differentiate(f, q))
                .collect();
            Expr::sum(terms)
        };
        let j = c(ParaComplex::J);
        let mut rows = Vec::with_capacity(2 * n);
        for i in 0..n {
            let g = p.lambda.clone().exp() * p.partial(Coord::zb(i));
            rows.push(j.clone() * total(&g) + p.partial(Coord::z(i)));
        }
        for i in 0..n {
            let g = (-p.lambda.clone()).exp() * p.partial(Coord::z(i));
            rows.push(j.clone() * total(&g) - p.partial(Coord::zb(i)));
        }
        Self { rows, n }
    }

    /// Max-abs residual over all `2n` rows.
    pub fn residual(&self, s: &EvalState, xi: &Semispray<ParaComplex>) -> Result<f64, EvalError> {
        assert_eq!(xi.n(), self.n);
        let full = EvalState::new(s.z.clone(), s.zb.clone()).with_velocities(xi.xi.clone(), xi.xib.clone());
        let mut worst: f64 = 0.0;
        for r in &self.rows {
            worst = worst.max(r.evaluate(&full)?.max_abs());
        }
        Ok(worst)
    }
}

pub fn audit_lagrange(
    p: &LagrangianProblem,
    s: &EvalState,
    xi: &Semispray<ParaComplex>,
) -> Result<f64, EvalError> {
    LagrangeAudit::new(p).residual(s, xi)
}

/// Checks `i_Z Φ = dH` coefficientwise for the synthesized Hamilton flow `Z`.
#[derive(Clone, Debug)]
pub struct HamiltonAudit {
    ode: ExplicitODE,
    lambda: Expr,
    lambda_partials: Vec<(Coord, Expr)>,
    h_z: Vec<Expr>,
    h_zb: Vec<Expr>,
}

impl HamiltonAudit {
    pub fn new(p: &HamiltonianProblem) -> Self {
        Self::for_flow(p, super::synthesize_ham(p))
    }

    /// Audits an arbitrary flow `ode` against the Hamiltonian of `p`.
    pub fn for_flow(p: &HamiltonianProblem, ode: ExplicitODE) -> Self {
        let n = p.chart.n();
        Self {
            ode,
            lambda: p.lambda.clone(),
            lambda_partials: p
                .chart
                .positions()
                .into_iter()
                .map(|q| (q, differentiate(&p.lambda, q)))
                .collect(),
            h_z: (0..n).map(|i| p.partial(Coord::z(i))).collect(),
            h_zb: (0..n).map(|i| p.partial(Coord::zb(i))).collect(),
        }
    }

    pub fn residual(&self, s: &EvalState) -> Result<f64, HamiltonError> {
        let (z_dot, zb_dot) = self.ode.evaluate(s)?;
        let mut sum = ParaComplex::ZERO;
        for (q, d) in &self.lambda_partials {
            sum += s.get(*q).expect("state matches chart") * d.evaluate(s)?;
        }
        let half = self.lambda.evaluate(s)?.exp() * sum * 0.5;
        let (dp, dm) = (ParaComplex::ONE + half, ParaComplex::ONE - half);
        let (ep, em) = (ParaComplex::E_PLUS, ParaComplex::E_MINUS);
        let mut worst: f64 = 0.0;
        for i in 0..self.h_z.len() {
            let dz = zb_dot[i] * ep * dm - zb_dot[i] * em * dm;
            let dzb = -(z_dot[i] * ep * dp) + z_dot[i] * em * dp;
            worst = worst
                .max((dz - self.h_z[i].evaluate(s)?).max_abs())
                .max((dzb - self.h_zb[i].evaluate(s)?).max_abs());
        }
        Ok(worst)
    }
}

pub fn audit_hamilton(p: &HamiltonianProblem, s: &EvalState) -> Result<f64, HamiltonError> {
    HamiltonAudit::new(p).residual(s)
}

/// Printable equations, one per line.
pub fn derive_lagrange(p: &LagrangianProblem) -> Vec<String> {
    let ode = synthesize_el(p);
    let n = p.chart.n();
    let mut out = Vec::new();
    for i in 0..2 * n {
        let label = if i < n { format!("A_{}", i + 1) } else { format!("B_{}", i - n + 1) };
        out.push(format!("EL row {label}: {} = 0", to_text(&ode.row(i))));
    }
    match ode.solve_symbolic() {
        Some(v) => {
            for (i, e) in v.xi.iter().enumerate() {
                out.push(format!("{} = {}", Coord::xi(i), to_text(e)));
            }
            for (i, e) in v.xib.iter().enumerate() {
                out.push(format!("{} = {}", Coord::xib(i), to_text(e)));
            }
        }
        None => out.push("velocities: solved numerically from the rows above at each step".into()),
    }
    out
}

pub fn derive_hamilton(p: &HamiltonianProblem) -> Vec<String> {
    let ode = synthesize_ham(p);
    let mut out = vec![
        format!("D+ = {}", to_text(&ode.d_plus)),
        format!("D- = {}", to_text(&ode.d_minus)),
    ];
    for (i, e) in ode.rhs_z.iter().enumerate() {
        out.push(format!("HAM z_{}: d{}/dt = {}", i + 1, Coord::z(i), to_text(e)));
    }
    for (i, e) in ode.rhs_zb.iter().enumerate() {
        out.push(format!("HAM zb_{}: d{}/dt = {}", i + 1, Coord::zb(i), to_text(e)));
    }
    out
}
