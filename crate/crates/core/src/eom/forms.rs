//! Vector fields and differential forms with symbolic coefficients.
//!
//! Covectors are indexed by position in the order `dz1..dzn, dzb1..dzbn`,
//! matching [`CoordinateChart::positions`].

use std::collections::BTreeMap;
use std::fmt;

use crate::symbolic::{differentiate, simplify, to_text, Coord, CoordinateChart, Expr};

/// Velocity components `(ξ^i, ξ̄^i)`, either symbolic or numeric.
#[derive(Clone, Debug, PartialEq)]
pub struct Semispray<T> {
    pub xi: Vec<T>,
    pub xib: Vec<T>,
}

impl<T> Semispray<T> {
    pub fn new(xi: Vec<T>, xib: Vec<T>) -> Self {
        assert_eq!(xi.len(), xib.len(), "xi and xib must have equal length");
        Self { xi, xib }
    }

    pub fn n(&self) -> usize {
        self.xi.len()
    }
}

impl Semispray<Expr> {
    /// The formal velocity symbols `xi1..xin`, `xib1..xibn`.
    pub fn symbols(n: usize) -> Self {
        Self::new(
            (0..n).map(|i| Expr::var(Coord::xi(i))).collect(),
            (0..n).map(|i| Expr::var(Coord::xib(i))).collect(),
        )
    }
}

/// `Σ coeff_z[i] ∂/∂z_i + coeff_zb[i] ∂/∂zb_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    pub coeff_z: Vec<Expr>,
    pub coeff_zb: Vec<Expr>,
}

impl VectorField {
    pub fn is_zero(&self) -> bool {
        self.coeff_z.iter().chain(&self.coeff_zb).all(Expr::is_zero)
    }

    /// The derivation `X(f) = Σ X^k ∂f/∂x_k` over the position coordinates.
    pub fn apply(&self, f: &Expr) -> Expr {
        let n = self.coeff_z.len();
        let mut terms = Vec::new();
        for (k, c) in self.coeff_z.iter().chain(&self.coeff_zb).enumerate() {
            let coord = if k < n { Coord::z(k) } else { Coord::zb(k - n) };
            let d = differentiate(f, coord);
            if !c.is_zero() && !d.is_zero() {
                terms.push(c.clone() * d);
            }
        }
        simplify(&Expr::sum(terms))
    }
}

/// A basis covector `dz_i` or `dzb_i` (zero-based index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Covector {
    Dz(usize),
    Dzb(usize),
}

impl Covector {
    fn at(n: usize, p: usize) -> Covector {
        if p < n {
            Covector::Dz(p)
        } else {
            Covector::Dzb(p - n)
        }
    }

    fn position(self, n: usize) -> usize {
        match self {
            Covector::Dz(i) => i,
            Covector::Dzb(i) => n + i,
        }
    }
}

impl fmt::Display for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Covector::Dz(i) => write!(f, "dz{}", i + 1),
            Covector::Dzb(i) => write!(f, "dzb{}", i + 1),
        }
    }
}

/// `Σ coeff_dz[i] dz_i + coeff_dzb[i] dzb_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct OneForm {
    pub coeff_dz: Vec<Expr>,
    pub coeff_dzb: Vec<Expr>,
}

impl OneForm {
    pub fn n(&self) -> usize {
        self.coeff_dz.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff_dz.iter().chain(&self.coeff_dzb).all(Expr::is_zero)
    }

    fn coeff_at(&self, p: usize) -> &Expr {
        let n = self.n();
        if p < n {
            &self.coeff_dz[p]
        } else {
            &self.coeff_dzb[p - n]
        }
    }

    /// Formal exterior derivative; coefficients may depend only on positions.
    pub fn exterior_derivative(&self) -> TwoForm {
        let n = self.n();
        let chart = CoordinateChart::new(n).positions();
        let mut out = TwoForm::zero(n);
        for q in 0..2 * n {
            for p in 0..q {
                let c = Expr::sum(vec![
                    differentiate(self.coeff_at(q), chart[p]),
                    -differentiate(self.coeff_at(p), chart[q]),
                ]);
                out.insert(p, q, simplify(&c));
            }
        }
        out
    }

    /// Contraction with a vector field: `Σ α_i X^i`.
    pub fn contract(&self, x: &VectorField) -> Expr {
        let terms = self
            .coeff_dz
            .iter()
            .zip(&x.coeff_z)
            .chain(self.coeff_dzb.iter().zip(&x.coeff_zb))
            .map(|(a, v)| a.clone() * v.clone())
            .collect();
        simplify(&Expr::sum(terms))
    }
}

impl fmt::Display for OneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.n();
        let terms: Vec<String> = (0..2 * n)
            .filter(|&p| !self.coeff_at(p).is_zero())
            .map(|p| format!("({}) {}", to_text(self.coeff_at(p)), Covector::at(n, p)))
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join(" + "))
        }
    }
}

/// A 2-form stored as `coeff(p, q) dθ_p ∧ dθ_q` for `p < q`; zero entries are omitted.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoForm {
    n: usize,
    coeff: BTreeMap<(usize, usize), Expr>,
}

impl TwoForm {
    pub fn zero(n: usize) -> Self {
        Self { n, coeff: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn insert(&mut self, p: usize, q: usize, c: Expr) {
        debug_assert!(p < q);
        if !c.is_zero() {
            self.coeff.insert((p, q), c);
        }
    }

    /// Coefficient of `a ∧ b`, antisymmetric in its arguments.
    pub fn get(&self, a: Covector, b: Covector) -> Expr {
        let (p, q) = (a.position(self.n), b.position(self.n));
        let (key, negate) = match p.cmp(&q) {
            std::cmp::Ordering::Less => ((p, q), false),
            std::cmp::Ordering::Greater => ((q, p), true),
            std::cmp::Ordering::Equal => return Expr::zero(),
        };
        match self.coeff.get(&key) {
            Some(c) if negate => simplify(&-c.clone()),
            Some(c) => c.clone(),
            None => Expr::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_empty()
    }

    /// Nonzero entries `(a, b, coeff)` with `a` before `b`.
    pub fn terms(&self) -> impl Iterator<Item = (Covector, Covector, &Expr)> {
        self.coeff
            .iter()
            .map(|(&(p, q), c)| (Covector::at(self.n, p), Covector::at(self.n, q), c))
    }

    pub fn negated(&self) -> TwoForm {
        let mut out = TwoForm::zero(self.n);
        for (&(p, q), c) in &self.coeff {
            out.insert(p, q, simplify(&-c.clone()));
        }
        out
    }

    pub fn exterior_derivative(&self) -> ThreeForm {
        let n = self.n;
        let chart = CoordinateChart::new(n).positions();
        let at = |p: usize, q: usize| self.coeff.get(&(p, q)).cloned().unwrap_or_else(Expr::zero);
        let mut coeff = BTreeMap::new();
        for r in 0..2 * n {
            for p in r + 1..2 * n {
                for q in p + 1..2 * n {
                    let c = simplify(&Expr::sum(vec![
                        differentiate(&at(p, q), chart[r]),
                        -differentiate(&at(r, q), chart[p]),
                        differentiate(&at(r, p), chart[q]),
                    ]));
                    if !c.is_zero() {
                        coeff.insert((r, p, q), c);
                    }
                }
            }
        }
        ThreeForm { n, coeff }
    }

    pub fn is_closed(&self) -> bool {
        self.exterior_derivative().is_zero()
    }
}

impl fmt::Display for TwoForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .terms()
            .map(|(a, b, c)| format!("({}) {}^{}", to_text(c), a, b))
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

/// A 3-form stored for strictly increasing position triples.
#[derive(Clone, Debug, PartialEq)]
pub struct ThreeForm {
    n: usize,
    coeff: BTreeMap<(usize, usize, usize), Expr>,
}

impl ThreeForm {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ([Covector; 3], &Expr)> {
        self.coeff.iter().map(|(&(r, p, q), c)| {
            (
                [Covector::at(self.n, r), Covector::at(self.n, p), Covector::at(self.n, q)],
                c,
            )
        })
    }
}
