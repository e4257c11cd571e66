//! Normalization to a sum of monomials.
//!
//! Every expression is rewritten as `Σ cₖ · Πᵢ atomᵢ^eᵢ` with numeric
//! coefficients. Atoms are variables, function applications with normalized
//! arguments, and sums that could not be distributed (reciprocals, large
//! powers). Products are distributed over sums, factors are sorted, and like
//! terms are collected, so expressions that differ only by ring identities
//! usually normalize to the same tree.

use std::cmp::Ordering;

use super::expr::Expr;
use super::print::to_text;
use crate::algebra::{Func, ParaComplex};

/// Positive powers of sums up to this exponent are expanded.
const MAX_EXPANDED_POWER: i32 = 8;
/// Products that would exceed this many terms keep the sum as an atom.
const MAX_TERMS: usize = 4096;
/// Collected coefficients this small relative to their addends become zero.
const CANCELLATION: f64 = 1e-14;

type Monomial = Vec<(Expr, i32)>;

#[derive(Clone, Debug, Default)]
struct Poly {
    terms: Vec<(ParaComplex, Monomial)>,
}

fn atom_rank(e: &Expr) -> u8 {
    match e {
        Expr::Var(_) => 0,
        Expr::Apply(..) => 1,
        Expr::Sum(_) => 2,
        _ => 3,
    }
}

fn atom_cmp(x: &Expr, y: &Expr) -> Ordering {
    match (x, y) {
        (Expr::Var(a), Expr::Var(b)) => a.cmp(b),
        (Expr::Apply(f, _), Expr::Apply(g, _)) if f != g => f.cmp(g),
        _ => atom_rank(x)
            .cmp(&atom_rank(y))
            .then_with(|| to_text(x).cmp(&to_text(y))),
    }
}

fn cancel_add(x: f64, y: f64) -> f64 {
    let s = x + y;
    if s.abs() <= CANCELLATION * x.abs().max(y.abs()) {
        0.0
    } else {
        s
    }
}

fn coef_add(x: ParaComplex, y: ParaComplex) -> ParaComplex {
    ParaComplex::new(cancel_add(x.a, y.a), cancel_add(x.b, y.b))
}

/// Lexicographic on (atom, exponent); the constant monomial sorts last.
fn mono_cmp(x: &Monomial, y: &Monomial) -> Ordering {
    match (x.is_empty(), y.is_empty()) {
        (true, true) => return Ordering::Equal,
        (true, false) => return Ordering::Greater,
        (false, true) => return Ordering::Less,
        _ => {}
    }
    for (a, b) in x.iter().zip(y) {
        let o = if a.0 == b.0 { Ordering::Equal } else { atom_cmp(&a.0, &b.0) };
        let o = o.then(b.1.cmp(&a.1));
        if o != Ordering::Equal {
            return o;
        }
    }
    y.len().cmp(&x.len())
}

fn mono_mul(x: &Monomial, y: &Monomial) -> Monomial {
    let mut out: Monomial = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut k) = (0, 0);
    while i < x.len() || k < y.len() {
        let ord = match (x.get(i), y.get(k)) {
            (Some(a), Some(b)) => {
                if a.0 == b.0 {
                    Ordering::Equal
                } else {
                    atom_cmp(&a.0, &b.0)
                }
            }
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(x[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                out.push(y[k].clone());
                k += 1;
            }
            Ordering::Equal => {
                let e = x[i].1 + y[k].1;
                if e != 0 {
                    out.push((x[i].0.clone(), e));
                }
                i += 1;
                k += 1;
            }
        }
    }
    out
}

/// Folds `exp(a)^k · exp(b)^m` into `exp(k·a + m·b)`, and into the
/// coefficient when the combined argument is constant.
fn merge_exps(c: ParaComplex, m: Monomial) -> (ParaComplex, Monomial) {
    let is_exp = |a: &Expr| matches!(a, Expr::Apply(Func::Exp, _));
    if m.iter().filter(|(a, _)| is_exp(a)).count() < 2 {
        return (c, m);
    }
    let (exps, rest): (Monomial, Monomial) = m.into_iter().partition(|(a, _)| is_exp(a));
    let arg = exps.into_iter().fold(Poly::default(), |acc, (a, k)| match a {
        Expr::Apply(_, x) => acc.add(normalize(&x).scale(ParaComplex::real(k as f64))),
        _ => unreachable!(),
    });
    match arg.as_constant() {
        Some(a) => (c * a.exp(), rest),
        None => (c, mono_mul(&rest, &vec![(Expr::apply(Func::Exp, arg.into_expr()), 1)])),
    }
}

impl Poly {
    fn constant(c: ParaComplex) -> Poly {
        if c.is_zero() {
            Poly::default()
        } else {
            Poly { terms: vec![(c, Vec::new())] }
        }
    }

    fn atom(e: Expr, k: i32) -> Poly {
        Poly { terms: vec![(ParaComplex::ONE, vec![(e, k)])] }
    }

    fn as_constant(&self) -> Option<ParaComplex> {
        match self.terms.as_slice() {
            [] => Some(ParaComplex::ZERO),
            [(c, m)] if m.is_empty() => Some(*c),
            _ => None,
        }
    }

    fn push(&mut self, c: ParaComplex, m: Monomial) {
        if c.is_zero() {
            return;
        }
        if let Some(slot) = self.terms.iter_mut().find(|(_, n)| *n == m) {
            slot.0 = coef_add(slot.0, c);
        } else {
            self.terms.push((c, m));
        }
    }

    fn prune(mut self) -> Poly {
        self.terms.retain(|(c, _)| !c.is_zero());
        self
    }

    fn add(mut self, other: Poly) -> Poly {
        for (c, m) in other.terms {
            self.push(c, m);
        }
        self.prune()
    }

    fn scale(mut self, s: ParaComplex) -> Poly {
        if s.is_zero() {
            return Poly::default();
        }
        for t in &mut self.terms {
            t.0 = t.0 * s;
        }
        self.prune()
    }

    fn mul(self, other: Poly) -> Poly {
        if let Some(c) = self.as_constant() {
            return other.scale(c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(c);
        }
        let (x, y) = if self.terms.len() * other.terms.len() > MAX_TERMS {
            // too large to distribute: freeze the longer factor
            if self.terms.len() >= other.terms.len() {
                (self.frozen(1), other)
            } else {
                (self, other.frozen(1))
            }
        } else {
            (self, other)
        };
        let mut out = Poly::default();
        for (c1, m1) in &x.terms {
            for (c2, m2) in &y.terms {
                let (c, m) = merge_exps(*c1 * *c2, mono_mul(m1, m2));
                out.push(c, m);
            }
        }
        out.prune()
    }

    fn powi(self, k: i32) -> Poly {
        debug_assert!(k != 0);
        if k < 0 {
            return self.reciprocal().powi(-k);
        }
        if self.terms.len() == 1 {
            let (c, m) = &self.terms[0];
            return match c.powi(k) {
                Ok(ck) => Poly {
                    terms: vec![(ck, m.iter().map(|(a, e)| (a.clone(), e * k)).collect())],
                }
                .prune(),
                Err(_) => self.frozen(k),
            };
        }
        if k > MAX_EXPANDED_POWER {
            return self.frozen(k);
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self.clone());
        }
        acc
    }

    fn reciprocal(self) -> Poly {
        if self.terms.len() == 1 {
            let (c, m) = &self.terms[0];
            if let Ok(ci) = c.inverse() {
                return Poly {
                    terms: vec![(ci, m.iter().map(|(a, e)| (a.clone(), -e)).collect())],
                };
            }
        }
        // zero, a zero divisor, or a genuine sum: keep the division symbolic
        self.frozen(-1)
    }

    /// `self^k` with `self` kept as an opaque atom. The term order is made
    /// canonical and a real leading coefficient is pulled out,
    /// so `1/(1 + z1)` and `-2/(-2*z1 - 2)` meet the same atom.
    fn frozen(mut self, k: i32) -> Poly {
        self.terms.sort_by(|x, y| mono_cmp(&x.1, &y.1));
        let lead = self.terms.first().map(|t| t.0).unwrap_or(ParaComplex::ONE);
        // Only a real lead is divided out: a para-complex one with unequal
        // idempotent magnitudes would spread them apart in the canonical
        // (a, b) storage and lose digits of the smaller component.
        let lead = if lead.is_real() { lead } else { ParaComplex::ONE };
        let scale = match (lead.inverse(), lead.powi(k)) {
            (Ok(inv), Ok(ck)) => {
                for t in &mut self.terms {
                    t.0 = t.0 * inv;
                }
                ck
            }
            _ => ParaComplex::ONE,
        };
        Poly::atom(self.into_expr(), k).scale(scale)
    }

    fn into_expr(self) -> Expr {
        let terms: Vec<Expr> = self.terms.into_iter().map(|(c, m)| term_expr(c, m)).collect();
        Expr::sum(terms)
    }
}

fn reads_negative(c: ParaComplex) -> bool {
    (c.b == 0.0 && c.a < 0.0) || (c.a == 0.0 && c.b < 0.0)
}

/// A monomial with only negative exponents reads better as `1/(...)`.
fn monomial_expr(factors: Vec<Expr>) -> Expr {
    if factors.iter().all(|f| matches!(f, Expr::Power(_, k) if *k < 0)) {
        let flipped = factors
            .into_iter()
            .map(|f| match f {
                Expr::Power(b, k) => b.pow(-k),
                _ => unreachable!(),
            })
            .collect();
        Expr::Quotient(Box::new(Expr::one()), Box::new(Expr::product(flipped)))
    } else {
        Expr::product(factors)
    }
}

fn term_expr(c: ParaComplex, m: Monomial) -> Expr {
    let factors: Vec<Expr> = m.into_iter().map(|(a, k)| a.pow(k)).collect();
    if factors.is_empty() {
        return Expr::Constant(c);
    }
    if c == ParaComplex::ONE {
        return monomial_expr(factors);
    }
    let (negate, c) = if reads_negative(c) { (true, -c) } else { (false, c) };
    let body = if c == ParaComplex::ONE {
        monomial_expr(factors)
    } else {
        let mut all = Vec::with_capacity(factors.len() + 1);
        all.push(Expr::Constant(c));
        all.extend(factors);
        Expr::Product(all)
    };
    if negate {
        -body
    } else {
        body
    }
}

fn normalize(e: &Expr) -> Poly {
    match e {
        Expr::Constant(c) => Poly::constant(*c),
        Expr::Var(_) => Poly::atom(e.clone(), 1),
        Expr::Sum(xs) => xs
            .iter()
            .fold(Poly::default(), |acc, x| acc.add(normalize(x))),
        Expr::Product(xs) => xs
            .iter()
            .fold(Poly::constant(ParaComplex::ONE), |acc, x| acc.mul(normalize(x))),
        Expr::Negate(x) => normalize(x).scale(-ParaComplex::ONE),
        Expr::Quotient(n, d) => normalize(n).mul(normalize_inverse(d)),
        Expr::Power(b, k) => {
            if *k == 0 {
                Poly::constant(ParaComplex::ONE)
            } else {
                normalize(b).powi(*k)
            }
        }
        Expr::Apply(f, a) => {
            let arg = normalize(a);
            if let Some(c) = arg.as_constant() {
                if let Ok(v) = c.apply(*f) {
                    return Poly::constant(v);
                }
            }
            Poly::atom(Expr::apply(*f, arg.into_expr()), 1)
        }
    }
}

/// Normal form of `1/e`, without expanding powers and products that sit in
/// the denominator.
fn normalize_inverse(e: &Expr) -> Poly {
    match e {
        Expr::Power(b, k) => normalize(b).powi(-k),
        Expr::Product(xs) => xs
            .iter()
            .fold(Poly::constant(ParaComplex::ONE), |acc, x| acc.mul(normalize_inverse(x))),
        Expr::Quotient(n, d) => normalize(d).mul(normalize_inverse(n)),
        Expr::Negate(x) => normalize_inverse(x).scale(-ParaComplex::ONE),
        _ => normalize(e).reciprocal(),
    }
}

/// Best-effort normalization; preserves the value at every nonsingular state.
pub fn simplify(e: &Expr) -> Expr {
    normalize(e).into_expr()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{parse, to_text, CoordinateChart};

    fn s(text: &str) -> String {
        to_text(&simplify(&parse(text, &CoordinateChart::new(2)).unwrap()))
    }

    #[test]
    fn absorption_and_collection() {
        assert_eq!(s("0*z1 + zb1"), "zb1");
        assert_eq!(s("z1 + z1"), "2*z1");
        assert_eq!(s("exp(0)*z1"), "z1");
        assert_eq!(s("z1*zb1 - zb1*z1"), "0");
        assert_eq!(s("z1*z1*z1/z1"), "z1^2");
        assert_eq!(s("(z1 + zb1)^2"), "z1^2 + 2*z1*zb1 + zb1^2");
        assert_eq!(s("-(-z1)"), "z1");
        assert_eq!(s("-j*zb1/1"), "-j*zb1");
        assert_eq!(s("zb1/j"), "j*zb1");
        assert_eq!(s("1 + 2*j"), "(1+2*j)");
    }

    #[test]
    fn exponentials_combine() {
        assert_eq!(s("exp(z1)*exp(-z1)*zb1"), "zb1");
        assert_eq!(s("exp(z1)*exp(zb1)"), "exp(z1 + zb1)");
        assert_eq!(s("exp(z1)^2/exp(z1)"), "exp(z1)");
    }

    #[test]
    fn reciprocals_stay_symbolic() {
        assert_eq!(s("1/(z1 + 1)"), "1/(z1 + 1)");
        assert_eq!(s("2/(z1*zb1)"), "2/(z1*zb1)");
        assert_eq!(s("z1/(1+j)"), "z1/(1+1*j)");
        assert_eq!(s("1/(z1+1) + 1/(1+z1)"), "2/(z1 + 1)");
    }

    #[test]
    fn idempotent() {
        for t in ["exp(z1*zb1)*(z1 - 2*zb2)^3/(1 + z2)", "sin(2*z1)*cos(z1) - 0.5*zb1^-2", "j*exp(0.3)*z1"] {
            let once = simplify(&parse(t, &CoordinateChart::new(2)).unwrap());
            assert_eq!(simplify(&once), once, "{t}");
        }
    }

    #[test]
    fn zero_divisor_constants_are_not_folded() {
        let e = simplify(&parse("z1/(1+j)", &CoordinateChart::new(1)).unwrap());
        let st = crate::symbolic::EvalState::new(vec![ParaComplex::ONE], vec![ParaComplex::ONE]);
        assert!(e.evaluate(&st).is_err());
    }
}
