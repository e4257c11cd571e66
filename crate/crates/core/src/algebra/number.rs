//! Split-complex (para-complex) scalars `a + b·j` with `j² = +1`.
//!
//! Products, quotients and the elementary functions are evaluated in the
//! idempotent basis `e± = (1 ± j)/2`, where the ring is isomorphic to
//! `R × R` and everything acts componentwise.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use super::AlgebraError;

/// Components below this magnitude are treated as exact zeros when inverting.
pub const ZERO_COMPONENT: f64 = 1e-300;

/// A para-complex number in canonical form `a + b·j`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ParaComplex {
    pub a: f64,
    pub b: f64,
}

/// The same number written as `u·e⁺ + v·e⁻`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct IdempotentPair {
    pub u: f64,
    pub v: f64,
}

/// Elementary functions supported by the functional calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        match name {
            "exp" => Some(Func::Exp),
            "ln" => Some(Func::Ln),
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            _ => None,
        }
    }
}

impl IdempotentPair {
    pub const fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    pub fn to_canonical(self) -> ParaComplex {
        ParaComplex {
            a: 0.5 * (self.u + self.v),
            b: 0.5 * (self.u - self.v),
        }
    }

    pub fn is_invertible(self) -> bool {
        self.u.abs() >= ZERO_COMPONENT && self.v.abs() >= ZERO_COMPONENT
    }
}

impl Mul for IdempotentPair {
    type Output = IdempotentPair;
    fn mul(self, rhs: IdempotentPair) -> IdempotentPair {
        IdempotentPair::new(self.u * rhs.u, self.v * rhs.v)
    }
}

impl ParaComplex {
    pub const ZERO: ParaComplex = ParaComplex { a: 0.0, b: 0.0 };
    pub const ONE: ParaComplex = ParaComplex { a: 1.0, b: 0.0 };
    pub const J: ParaComplex = ParaComplex { a: 0.0, b: 1.0 };
    /// e⁺ = (1 + j)/2
    pub const E_PLUS: ParaComplex = ParaComplex { a: 0.5, b: 0.5 };
    /// e⁻ = (1 − j)/2
    pub const E_MINUS: ParaComplex = ParaComplex { a: 0.5, b: -0.5 };

    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub const fn real(a: f64) -> Self {
        Self { a, b: 0.0 }
    }

    pub fn from_idempotent(p: IdempotentPair) -> Self {
        p.to_canonical()
    }

    pub fn to_idempotent(self) -> IdempotentPair {
        IdempotentPair {
            u: self.a + self.b,
            v: self.a - self.b,
        }
    }

    pub fn is_zero(self) -> bool {
        self.a == 0.0 && self.b == 0.0
    }

    pub fn is_real(self) -> bool {
        self.b == 0.0
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }

    pub fn is_invertible(self) -> bool {
        self.to_idempotent().is_invertible()
    }

    /// Para-complex conjugate `a − b·j`; swaps the idempotent components.
    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b)
    }

    /// `max(|a|, |b|)`, the norm used for residuals and drifts.
    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs())
    }

    /// Componentwise `|x − y| ≤ tol`.
    pub fn approx_eq(self, other: ParaComplex, tol: f64) -> bool {
        (self - other).max_abs() <= tol
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.a * s, self.b * s)
    }

    pub fn inverse(self) -> Result<Self, AlgebraError> {
        let p = self.to_idempotent();
        if !p.is_invertible() {
            return Err(AlgebraError::ZeroDivisor { value: self });
        }
        Ok(IdempotentPair::new(1.0 / p.u, 1.0 / p.v).to_canonical())
    }

    pub fn checked_div(self, rhs: ParaComplex) -> Result<Self, AlgebraError> {
        let d = rhs.to_idempotent();
        if !d.is_invertible() {
            return Err(AlgebraError::ZeroDivisor { value: rhs });
        }
        if rhs.b == 0.0 {
            return Ok(Self::new(self.a / rhs.a, self.b / rhs.a));
        }
        let n = self.to_idempotent();
        Ok(IdempotentPair::new(n.u / d.u, n.v / d.v).to_canonical())
    }

    /// Integer power; negative exponents require an invertible base.
    pub fn powi(self, k: i32) -> Result<Self, AlgebraError> {
        let p = self.to_idempotent();
        if k < 0 && !p.is_invertible() {
            return Err(AlgebraError::ZeroDivisor { value: self });
        }
        Ok(IdempotentPair::new(p.u.powi(k), p.v.powi(k)).to_canonical())
    }

    pub fn exp(self) -> Self {
        let p = self.to_idempotent();
        IdempotentPair::new(p.u.exp(), p.v.exp()).to_canonical()
    }

    pub fn ln(self) -> Result<Self, AlgebraError> {
        let p = self.to_idempotent();
        if !(p.u > 0.0 && p.v > 0.0) {
            return Err(AlgebraError::Domain {
                func: Func::Ln,
                value: self,
            });
        }
        Ok(IdempotentPair::new(p.u.ln(), p.v.ln()).to_canonical())
    }

    pub fn sin(self) -> Self {
        let p = self.to_idempotent();
        IdempotentPair::new(p.u.sin(), p.v.sin()).to_canonical()
    }

    pub fn cos(self) -> Self {
        let p = self.to_idempotent();
        IdempotentPair::new(p.u.cos(), p.v.cos()).to_canonical()
    }

    pub fn apply(self, f: Func) -> Result<Self, AlgebraError> {
        match f {
            Func::Exp => Ok(self.exp()),
            Func::Ln => self.ln(),
            Func::Sin => Ok(self.sin()),
            Func::Cos => Ok(self.cos()),
        }
    }
}

impl From<f64> for ParaComplex {
    fn from(a: f64) -> Self {
        ParaComplex::real(a)
    }
}

impl Add for ParaComplex {
    type Output = ParaComplex;
    fn add(self, rhs: ParaComplex) -> ParaComplex {
        ParaComplex::new(self.a + rhs.a, self.b + rhs.b)
    }
}

impl Sub for ParaComplex {
    type Output = ParaComplex;
    fn sub(self, rhs: ParaComplex) -> ParaComplex {
        ParaComplex::new(self.a - rhs.a, self.b - rhs.b)
    }
}

impl Neg for ParaComplex {
    type Output = ParaComplex;
    fn neg(self) -> ParaComplex {
        ParaComplex::new(-self.a, -self.b)
    }
}

impl Mul for ParaComplex {
    type Output = ParaComplex;
    fn mul(self, rhs: ParaComplex) -> ParaComplex {
        // real factors scale both parts; this keeps 1·x and 2·x exact
        if rhs.b == 0.0 {
            return self.scale(rhs.a);
        }
        if self.b == 0.0 {
            return rhs.scale(self.a);
        }
        (self.to_idempotent() * rhs.to_idempotent()).to_canonical()
    }
}

impl Mul<f64> for ParaComplex {
    type Output = ParaComplex;
    fn mul(self, rhs: f64) -> ParaComplex {
        self.scale(rhs)
    }
}

impl AddAssign for ParaComplex {
    fn add_assign(&mut self, rhs: ParaComplex) {
        *self = *self + rhs;
    }
}

impl SubAssign for ParaComplex {
    fn sub_assign(&mut self, rhs: ParaComplex) {
        *self = *self - rhs;
    }
}

impl MulAssign for ParaComplex {
    fn mul_assign(&mut self, rhs: ParaComplex) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for ParaComplex {
    fn sum<I: Iterator<Item = ParaComplex>>(iter: I) -> ParaComplex {
        iter.fold(ParaComplex::ZERO, |acc, x| acc + x)
    }
}

impl fmt::Display for ParaComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b < 0.0 {
            write!(f, "({}-{}*j)", self.a, -self.b)
        } else {
            write!(f, "({}+{}*j)", self.a, self.b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_matches_idempotent_oracle() {
        // (1+2j): u=3, v=-1; (3+4j): u=7, v=-1 -> (21, 1) -> 11 + 10j
        let x = ParaComplex::new(1.0, 2.0);
        let y = ParaComplex::new(3.0, 4.0);
        assert_eq!(x * y, ParaComplex::new(11.0, 10.0));
        assert_eq!(ParaComplex::J * ParaComplex::J, ParaComplex::ONE);
        assert_eq!(x + ParaComplex::ZERO, x);
    }

    #[test]
    fn division_and_zero_divisors() {
        let q = ParaComplex::new(11.0, 10.0)
            .checked_div(ParaComplex::new(3.0, 4.0))
            .unwrap();
        assert_eq!(q, ParaComplex::new(1.0, 2.0));
        let x = ParaComplex::new(0.3, -1.7);
        assert_eq!(x.checked_div(ParaComplex::ONE).unwrap(), x);
        assert!(matches!(
            x.checked_div(ParaComplex::new(1.0, 1.0)),
            Err(AlgebraError::ZeroDivisor { .. })
        ));
        assert!(ParaComplex::E_MINUS.scale(3.0).inverse().is_err());
        // tiny but nonzero components are still invertible
        assert!(ParaComplex::new(1.0, 1.0 - 1e-12).is_invertible());
    }

    #[test]
    fn conversion_fixed_points() {
        assert_eq!(
            ParaComplex::new(11.0, 10.0).to_idempotent(),
            IdempotentPair::new(21.0, 1.0)
        );
        assert_eq!(ParaComplex::ONE.to_idempotent(), IdempotentPair::new(1.0, 1.0));
        assert_eq!(ParaComplex::J.to_idempotent(), IdempotentPair::new(1.0, -1.0));
        assert_eq!(ParaComplex::E_PLUS.to_idempotent(), IdempotentPair::new(1.0, 0.0));
        assert_eq!(ParaComplex::E_MINUS.to_idempotent(), IdempotentPair::new(0.0, 1.0));
    }

    #[test]
    fn functional_calculus() {
        assert_eq!(ParaComplex::ZERO.exp(), ParaComplex::ONE);
        let ej = ParaComplex::J.exp();
        assert!((ej.a - 1f64.cosh()).abs() < 1e-15);
        assert!((ej.b - 1f64.sinh()).abs() < 1e-15);
        assert_eq!(ParaComplex::ONE.ln().unwrap(), ParaComplex::ZERO);
        assert!(matches!(
            ParaComplex::J.ln(),
            Err(AlgebraError::Domain { func: Func::Ln, .. })
        ));
        let x = ParaComplex::new(0.4, -0.9);
        let back = x.exp().ln().unwrap();
        assert!(back.approx_eq(x, 1e-15));
    }

    #[test]
    fn powers() {
        let x = ParaComplex::new(1.0, 2.0);
        assert!(x.powi(3).unwrap().approx_eq(x * x * x, 1e-12));
        assert!(x.powi(-1).unwrap().approx_eq(x.inverse().unwrap(), 1e-15));
        assert!(ParaComplex::new(1.0, -1.0).powi(-2).is_err());
        assert_eq!(ParaComplex::new(1.0, -1.0).powi(2).unwrap(), ParaComplex::new(2.0, -2.0));
    }

    #[test]
    fn display() {
        assert_eq!(ParaComplex::new(1.0, 2.0).to_string(), "(1+2*j)");
        assert_eq!(ParaComplex::new(0.5, -1.5).to_string(), "(0.5-1.5*j)");
    }
}
