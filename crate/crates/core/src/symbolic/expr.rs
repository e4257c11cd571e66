use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::algebra::{AlgebraError, Func, IdempotentPair, ParaComplex};

/// Which family a formal variable belongs to.
///
/// `Xi`/`Xib` are the velocity symbols ξ, ξ̄ that appear in the energy
/// function and in the implicit Euler–Lagrange rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CoordKind {
    Z,
    Zb,
    Xi,
    Xib,
}

impl CoordKind {
    pub fn prefix(self) -> &'static str {
        match self {
            CoordKind::Z => "z",
            CoordKind::Zb => "zb",
            CoordKind::Xi => "xi",
            CoordKind::Xib => "xib",
        }
    }

    pub fn is_velocity(self) -> bool {
        matches!(self, CoordKind::Xi | CoordKind::Xib)
    }
}

/// A variable reference; `index` is zero-based, printed one-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    pub kind: CoordKind,
    pub index: usize,
}

impl Coord {
    pub const fn z(index: usize) -> Self {
        Self { kind: CoordKind::Z, index }
    }
    pub const fn zb(index: usize) -> Self {
        Self { kind: CoordKind::Zb, index }
    }
    pub const fn xi(index: usize) -> Self {
        Self { kind: CoordKind::Xi, index }
    }
    pub const fn xib(index: usize) -> Self {
        Self { kind: CoordKind::Xib, index }
    }

    /// The velocity symbol paired with a position coordinate.
    pub fn velocity(self) -> Self {
        match self.kind {
            CoordKind::Z => Coord::xi(self.index),
            CoordKind::Zb => Coord::xib(self.index),
            _ => self,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.prefix(), self.index + 1)
    }
}

/// The coordinate range `z1..zn, zb1..zbn`, optionally extended by `xi1..xin, xib1..xibn`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoordinateChart {
    n: usize,
    velocities: bool,
}

impl CoordinateChart {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a chart needs at least one coordinate pair");
        Self { n, velocities: false }
    }

    pub fn with_velocities(self) -> Self {
        Self { velocities: true, ..self }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_velocities(&self) -> bool {
        self.velocities
    }

    pub fn contains(&self, c: Coord) -> bool {
        c.index < self.n && (self.velocities || !c.kind.is_velocity())
    }

    /// Position coordinates in unknown order: z1..zn, zb1..zbn.
    pub fn positions(&self) -> Vec<Coord> {
        (0..self.n)
            .map(Coord::z)
            .chain((0..self.n).map(Coord::zb))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Constant(ParaComplex),
    Var(Coord),
    /// At least two children.
    Sum(Vec<Expr>),
    /// At least two children.
    Product(Vec<Expr>),
    /// Nonzero integer exponent.
    Power(Box<Expr>, i32),
    Quotient(Box<Expr>, Box<Expr>),
    Apply(Func, Box<Expr>),
    Negate(Box<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Constant(ParaComplex::ZERO)
    }

    pub fn one() -> Expr {
        Expr::Constant(ParaComplex::ONE)
    }

    pub fn j() -> Expr {
        Expr::Constant(ParaComplex::J)
    }

    pub fn real(a: f64) -> Expr {
        Expr::Constant(ParaComplex::real(a))
    }

    pub fn constant(c: ParaComplex) -> Expr {
        Expr::Constant(c)
    }

    pub fn var(c: Coord) -> Expr {
        Expr::Var(c)
    }

    pub fn sum(mut terms: Vec<Expr>) -> Expr {
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.pop().unwrap(),
            _ => Expr::Sum(terms),
        }
    }

    pub fn product(mut factors: Vec<Expr>) -> Expr {
        match factors.len() {
            0 => Expr::one(),
            1 => factors.pop().unwrap(),
            _ => Expr::Product(factors),
        }
    }

    pub fn pow(self, k: i32) -> Expr {
        match k {
            0 => Expr::one(),
            1 => self,
            _ => Expr::Power(Box::new(self), k),
        }
    }

    pub fn apply(f: Func, arg: Expr) -> Expr {
        Expr::Apply(f, Box::new(arg))
    }

    pub fn exp(self) -> Expr {
        Expr::apply(Func::Exp, self)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Constant(c) if c.is_zero())
    }

    pub fn as_constant(&self) -> Option<ParaComplex> {
        match self {
            Expr::Constant(c) => Some(*c),
            _ => None,
        }
    }

    /// Calls `f` on every variable occurrence.
    pub fn visit_vars(&self, f: &mut impl FnMut(Coord)) {
        match self {
            Expr::Constant(_) => {}
            Expr::Var(c) => f(*c),
            Expr::Sum(xs) | Expr::Product(xs) => xs.iter().for_each(|x| x.visit_vars(f)),
            Expr::Power(b, _) => b.visit_vars(f),
            Expr::Quotient(n, d) => {
                n.visit_vars(f);
                d.visit_vars(f);
            }
            Expr::Apply(_, a) | Expr::Negate(a) => a.visit_vars(f),
        }
    }

    pub fn depends_on(&self, c: Coord) -> bool {
        let mut found = false;
        self.visit_vars(&mut |v| found |= v == c);
        found
    }

    /// First variable that lies outside `chart`, if any.
    pub fn foreign_var(&self, chart: &CoordinateChart) -> Option<Coord> {
        let mut bad = None;
        self.visit_vars(&mut |v| {
            if bad.is_none() && !chart.contains(v) {
                bad = Some(v);
            }
        });
        bad
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Constant(_) | Expr::Var(_) => 1,
            Expr::Sum(xs) | Expr::Product(xs) => 1 + xs.iter().map(Expr::node_count).sum::<usize>(),
            Expr::Power(b, _) => 1 + b.node_count(),
            Expr::Quotient(n, d) => 1 + n.node_count() + d.node_count(),
            Expr::Apply(_, a) | Expr::Negate(a) => 1 + a.node_count(),
        }
    }

    pub fn evaluate(&self, s: &EvalState) -> Result<ParaComplex, EvalError> {
        self.eval_idem(s).map(IdempotentPair::to_canonical)
    }

    // Evaluates in the idempotent basis where every operation is componentwise.
    fn eval_idem(&self, s: &EvalState) -> Result<IdempotentPair, EvalError> {
        Ok(match self {
            Expr::Constant(c) => c.to_idempotent(),
            Expr::Var(c) => s
                .get(*c)
                .ok_or_else(|| EvalError::Unbound { name: c.to_string() })?
                .to_idempotent(),
            Expr::Sum(xs) => {
                let mut acc = IdempotentPair::new(0.0, 0.0);
                for x in xs {
                    let v = x.eval_idem(s)?;
                    acc.u += v.u;
                    acc.v += v.v;
                }
                acc
            }
            Expr::Product(xs) => {
                let mut acc = IdempotentPair::new(1.0, 1.0);
                for x in xs {
                    acc = acc * x.eval_idem(s)?;
                }
                acc
            }
            Expr::Power(b, k) => {
                let p = b.eval_idem(s)?;
                if *k < 0 && !p.is_invertible() {
                    return Err(self.algebra_error(AlgebraError::ZeroDivisor {
                        value: p.to_canonical(),
                    }));
                }
                IdempotentPair::new(p.u.powi(*k), p.v.powi(*k))
            }
            Expr::Quotient(n, d) => {
                let num = n.eval_idem(s)?;
                let den = d.eval_idem(s)?;
                if !den.is_invertible() {
                    return Err(self.algebra_error(AlgebraError::ZeroDivisor {
                        value: den.to_canonical(),
                    }));
                }
                IdempotentPair::new(num.u / den.u, num.v / den.v)
            }
            Expr::Apply(f, a) => {
                let p = a.eval_idem(s)?;
                let (u, v) = match f {
                    Func::Exp => (p.u.exp(), p.v.exp()),
                    Func::Sin => (p.u.sin(), p.v.sin()),
                    Func::Cos => (p.u.cos(), p.v.cos()),
                    Func::Ln => {
                        if !(p.u > 0.0 && p.v > 0.0) {
                            return Err(self.algebra_error(AlgebraError::Domain {
                                func: Func::Ln,
                                value: p.to_canonical(),
                            }));
                        }
                        (p.u.ln(), p.v.ln())
                    }
                };
                IdempotentPair::new(u, v)
            }
            Expr::Negate(a) => {
                let p = a.eval_idem(s)?;
                IdempotentPair::new(-p.u, -p.v)
            }
        })
    }

    fn algebra_error(&self, source: AlgebraError) -> EvalError {
        EvalError::Algebra {
            source,
            subexpr: super::to_text(self),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::to_text(self))
    }
}

impl From<ParaComplex> for Expr {
    fn from(c: ParaComplex) -> Self {
        Expr::Constant(c)
    }
}

impl From<f64> for Expr {
    fn from(a: f64) -> Self {
        Expr::real(a)
    }
}

impl From<Coord> for Expr {
    fn from(c: Coord) -> Self {
        Expr::Var(c)
    }
}

// Builder operators; they never simplify.
impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Sum(vec![self, rhs])
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Sum(vec![self, Expr::Negate(Box::new(rhs))])
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Product(vec![self, rhs])
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Quotient(Box::new(self), Box::new(rhs))
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Negate(Box::new(self))
    }
}

/// Values for the coordinates (and optionally the velocity symbols).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalState {
    pub z: Vec<ParaComplex>,
    pub zb: Vec<ParaComplex>,
    pub xi: Vec<ParaComplex>,
    pub xib: Vec<ParaComplex>,
}

impl EvalState {
    pub fn new(z: Vec<ParaComplex>, zb: Vec<ParaComplex>) -> Self {
        assert_eq!(z.len(), zb.len(), "z and zb must have equal length");
        Self { z, zb, xi: Vec::new(), xib: Vec::new() }
    }

    pub fn with_velocities(mut self, xi: Vec<ParaComplex>, xib: Vec<ParaComplex>) -> Self {
        assert_eq!(xi.len(), self.z.len());
        assert_eq!(xib.len(), self.z.len());
        self.xi = xi;
        self.xib = xib;
        self
    }

    pub fn n(&self) -> usize {
        self.z.len()
    }

    pub fn get(&self, c: Coord) -> Option<ParaComplex> {
        let slot = match c.kind {
            CoordKind::Z => &self.z,
            CoordKind::Zb => &self.zb,
            CoordKind::Xi => &self.xi,
            CoordKind::Xib => &self.xib,
        };
        slot.get(c.index).copied()
    }

    pub fn get_mut(&mut self, c: Coord) -> Option<&mut ParaComplex> {
        let slot = match c.kind {
            CoordKind::Z => &mut self.z,
            CoordKind::Zb => &mut self.zb,
            CoordKind::Xi => &mut self.xi,
            CoordKind::Xib => &mut self.xib,
        };
        slot.get_mut(c.index)
    }

    /// Copy with one variable shifted by `delta`.
    pub fn shifted(&self, c: Coord, delta: ParaComplex) -> Self {
        let mut s = self.clone();
        if let Some(x) = s.get_mut(c) {
            *x += delta;
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("{source} in `{subexpr}`")]
    Algebra { source: AlgebraError, subexpr: String },
    #[error("variable {name} has no value")]
    Unbound { name: String },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(z: ParaComplex, zb: ParaComplex) -> EvalState {
        EvalState::new(vec![z], vec![zb])
    }

    #[test]
    fn product_of_coordinates() {
        // idempotent oracle: (2,0)·(2,2) = (4,0) -> 2 + 2j
        let e = Expr::var(Coord::z(0)) * Expr::var(Coord::zb(0));
        let s = state(ParaComplex::new(1.0, 1.0), ParaComplex::real(2.0));
        assert_eq!(e.evaluate(&s).unwrap(), ParaComplex::new(2.0, 2.0));
    }

    #[test]
    fn constant_exponential() {
        let v = Expr::j().exp().evaluate(&EvalState::default()).unwrap();
        assert!((v.a - 1.5430806348152437).abs() < 1e-15);
        assert!((v.b - 1.1752011936438014).abs() < 1e-15);
    }

    #[test]
    fn zero_divisor_names_subexpression() {
        let e = Expr::one() / Expr::var(Coord::z(0));
        let s = state(ParaComplex::new(1.0, 1.0), ParaComplex::ZERO);
        match e.evaluate(&s) {
            Err(EvalError::Algebra { source: AlgebraError::ZeroDivisor { .. }, subexpr }) => {
                assert_eq!(subexpr, "1/z1")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbound_velocity() {
        let e = Expr::var(Coord::xi(0));
        assert!(matches!(
            e.evaluate(&state(ParaComplex::ONE, ParaComplex::ONE)),
            Err(EvalError::Unbound { .. })
        ));
    }

    #[test]
    fn chart_membership() {
        let chart = CoordinateChart::new(2);
        assert!(chart.contains(Coord::zb(1)));
        assert!(!chart.contains(Coord::z(2)));
        assert!(!chart.contains(Coord::xi(0)));
        assert!(chart.with_velocities().contains(Coord::xib(1)));
    }
}
