//! Classical (λ-free) para-complex equations, assembled and solved without
//! the synthesis or linear-solver code of the other modules.

use crate::algebra::ParaComplex;
use crate::eom::{HamiltonianProblem, LagrangianProblem};
use crate::symbolic::{differentiate, Coord, EvalError, EvalState, Expr};

/// Classical Euler–Lagrange system `A(q)·q̇ = r(q)`, unknowns `(ξ, ξ̄)`:
///
/// ```text
/// j Σ_k (L_{zb_i z_k} ξ_k + L_{zb_i zb_k} ξ̄_k) = −L_{z_i}
/// j Σ_k (L_{z_i z_k} ξ_k + L_{z_i zb_k} ξ̄_k)   =  L_{zb_i}
/// ```
#[derive(Clone, Debug)]
pub struct ClassicalLagrange {
    hessian: Vec<Vec<Expr>>,
    gradient: Vec<Expr>,
    n: usize,
}

impl ClassicalLagrange {
    pub fn new(p: &LagrangianProblem) -> Self {
        let n = p.chart.n();
        let vars: Vec<Coord> = (0..n).map(Coord::z).chain((0..n).map(Coord::zb)).collect();
        let row_vars: Vec<Coord> = (0..n).map(Coord::zb).chain((0..n).map(Coord::z)).collect();
        let gradient: Vec<Expr> = row_vars.iter().map(|&r| differentiate(&p.lagrangian, r)).collect();
        let hessian = gradient
            .iter()
            .map(|g| vars.iter().map(|&v| differentiate(g, v)).collect())
            .collect();
        Self { hessian, gradient, n }
    }

    /// Velocities at `s`; `None` when the system is singular.
    pub fn velocities(&self, s: &EvalState) -> Result<Option<Vec<ParaComplex>>, EvalError> {
        let j = ParaComplex::J;
        let mut a = Vec::with_capacity(2 * self.n);
        for row in &self.hessian {
            let mut r = Vec::with_capacity(2 * self.n);
            for e in row {
                r.push(j * e.evaluate(s)?);
            }
            a.push(r);
        }
        let g = self.gradient.iter().map(|e| e.evaluate(s)).collect::<Result<Vec<_>, _>>()?;
        let (l_zb, l_z) = g.split_at(self.n);
        let b: Vec<ParaComplex> = l_z.iter().map(|&x| -x).chain(l_zb.iter().copied()).collect();
        Ok(gauss_jordan(a, b))
    }
}

/// Gauss–Jordan elimination over para-complex numbers with pivots chosen to
/// maximize the smaller idempotent magnitude. `None` when no pivot has both
/// idempotent components above `1e-12` relative to the largest entry.
pub fn gauss_jordan(mut a: Vec<Vec<ParaComplex>>, mut b: Vec<ParaComplex>) -> Option<Vec<ParaComplex>> {
    let d = b.len();
    let weakest = |x: ParaComplex| {
        let p = x.to_idempotent();
        p.u.abs().min(p.v.abs())
    };
    let scale = a.iter().flatten().map(|x| x.max_abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return None;
    }
    for col in 0..d {
        let (best, strength) = (col..d)
            .map(|r| (r, weakest(a[r][col])))
            .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if strength <= 1e-12 * scale {
            return None;
        }
        a.swap(col, best);
        b.swap(col, best);
        let inv = a[col][col].inverse().ok()?;
        for k in 0..d {
            a[col][k] = a[col][k] * inv;
        }
        b[col] = b[col] * inv;
        for r in 0..d {
            if r == col {
                continue;
            }
            let f = a[r][col];
            if f.is_zero() {
                continue;
            }
            for k in 0..d {
                let t = a[col][k];
                a[r][k] = a[r][k] - f * t;
            }
            let t = b[col];
            b[r] = b[r] - f * t;
        }
    }
    Some(b)
}

/// Classical Hamilton flow `ż_i = −j H_{zb_i}`, `żb_i = j H_{z_i}`.
#[derive(Clone, Debug)]
pub struct ClassicalHamilton {
    h_z: Vec<Expr>,
    h_zb: Vec<Expr>,
}

impl ClassicalHamilton {
    pub fn new(p: &HamiltonianProblem) -> Self {
        let n = p.chart.n();
        Self {
            h_z: (0..n).map(|i| differentiate(&p.hamiltonian, Coord::z(i))).collect(),
            h_zb: (0..n).map(|i| differentiate(&p.hamiltonian, Coord::zb(i))).collect(),
        }
    }

    /// `[ż_1..ż_n, żb_1..żb_n]` at `s`.
    pub fn velocities(&self, s: &EvalState) -> Result<Vec<ParaComplex>, EvalError> {
        let j = ParaComplex::J;
        let mut out = Vec::with_capacity(2 * self.h_z.len());
        for e in &self.h_zb {
            out.push(-(j * e.evaluate(s)?));
        }
        for e in &self.h_z {
            out.push(j * e.evaluate(s)?);
        }
        Ok(out)
    }
}
