//! Action tables of the structure operators on coordinate frames and coframes.
//!
//! Real frame (`∂/∂x`, `∂/∂y`):
//!
//! ```text
//! F(∂x) = ∂y     F(∂y) = ∂x      P(∂x) = ∂x     P(∂y) = −∂y     J = F
//! ```
//!
//! Para-complex frame and coframe:
//!
//! ```text
//! J(∂z)   = −j ∂z̄          J(∂z̄)   = j ∂z
//! J*(dz)  = −j dz̄          J*(dz̄)  = j dz
//! P∓(∂z)  = −e∓ ∂z̄         P∓(∂z̄)  = e∓ ∂z         (same for P*∓ on dz, dz̄)
//! W∓(∂z)  = −e∓ e^λ ∂z̄     W∓(∂z̄)  = e∓ e^−λ ∂z    (same for W*∓ on dz, dz̄)
//! ```
//!
//! Every para-complex entry exchanges a basis element with its conjugate, so
//! the operator is semilinear over the scalars: `T(c·X) = conj(c)·T(X)`.
//! With that rule `J∘J` and `(P⁺−P⁻)∘(P⁺−P⁻)` are the identity. Real-frame
//! entries act linearly.

use super::{AlgebraError, ParaComplex};

/// Coordinate frame and coframe elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    /// ∂/∂x_i
    PartialX,
    /// ∂/∂y_i
    PartialY,
    /// ∂/∂z_i
    PartialZ,
    /// ∂/∂z̄_i
    PartialZb,
    /// dz_i
    Dz,
    /// dz̄_i
    Dzb,
}

impl Basis {
    pub fn is_covector(self) -> bool {
        matches!(self, Basis::Dz | Basis::Dzb)
    }

    pub fn is_real_frame(self) -> bool {
        matches!(self, Basis::PartialX | Basis::PartialY)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Basis::PartialX => "d/dx",
            Basis::PartialY => "d/dy",
            Basis::PartialZ => "d/dz",
            Basis::PartialZb => "d/dzb",
            Basis::Dz => "dz",
            Basis::Dzb => "dzb",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StructureKind {
    /// Real product structure F of the bi-para-complex pair.
    F,
    /// Real product structure P of the bi-para-complex pair.
    P,
    J,
    PPlus,
    PMinus,
    WPlus,
    WMinus,
    JStar,
    PStarPlus,
    PStarMinus,
    WStarPlus,
    WStarMinus,
}

impl StructureKind {
    pub const ALL: [StructureKind; 12] = [
        StructureKind::F,
        StructureKind::P,
        StructureKind::J,
        StructureKind::PPlus,
        StructureKind::PMinus,
        StructureKind::WPlus,
        StructureKind::WMinus,
        StructureKind::JStar,
        StructureKind::PStarPlus,
        StructureKind::PStarMinus,
        StructureKind::WStarPlus,
        StructureKind::WStarMinus,
    ];

    pub fn is_starred(self) -> bool {
        matches!(
            self,
            StructureKind::JStar
                | StructureKind::PStarPlus
                | StructureKind::PStarMinus
                | StructureKind::WStarPlus
                | StructureKind::WStarMinus
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            StructureKind::F => "F",
            StructureKind::P => "P",
            StructureKind::J => "J",
            StructureKind::PPlus => "P+",
            StructureKind::PMinus => "P-",
            StructureKind::WPlus => "W+",
            StructureKind::WMinus => "W-",
            StructureKind::JStar => "J*",
            StructureKind::PStarPlus => "P*+",
            StructureKind::PStarMinus => "P*-",
            StructureKind::WStarPlus => "W*+",
            StructureKind::WStarMinus => "W*-",
        }
    }

    fn accepts(self, basis: Basis) -> bool {
        match self {
            StructureKind::F | StructureKind::P => basis.is_real_frame(),
            StructureKind::J => !basis.is_covector(),
            _ if self.is_starred() => basis.is_covector(),
            _ => matches!(basis, Basis::PartialZ | Basis::PartialZb),
        }
    }
}

/// `coefficient · basis_index` (index is 1-based).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrameVector {
    pub basis: Basis,
    pub index: usize,
    pub coeff: ParaComplex,
}

impl FrameVector {
    pub fn new(basis: Basis, index: usize, coeff: ParaComplex) -> Self {
        assert!(index >= 1, "frame indices start at 1");
        Self { basis, index, coeff }
    }

    pub fn unit(basis: Basis, index: usize) -> Self {
        Self::new(basis, index, ParaComplex::ONE)
    }
}

/// Table entry for a unit basis element: (image basis, coefficient).
fn table(kind: StructureKind, basis: Basis, lambda: ParaComplex) -> (Basis, ParaComplex) {
    use Basis::*;
    use StructureKind::*;
    let j = ParaComplex::J;
    let (ep, em) = (ParaComplex::E_PLUS, ParaComplex::E_MINUS);
    let e_sign = |k: StructureKind| match k {
        PPlus | WPlus | PStarPlus | WStarPlus => ep,
        _ => em,
    };
    let one = ParaComplex::ONE;
    match (kind, basis) {
        (F, PartialX) | (J, PartialX) => (PartialY, one),
        (F, PartialY) | (J, PartialY) => (PartialX, one),
        (P, PartialX) => (PartialX, one),
        (P, PartialY) => (PartialY, -one),
        (J, PartialZ) => (PartialZb, -j),
        (J, PartialZb) => (PartialZ, j),
        (JStar, Dz) => (Dzb, -j),
        (JStar, Dzb) => (Dz, j),
        (PPlus | PMinus, PartialZ) => (PartialZb, -e_sign(kind)),
        (PPlus | PMinus, PartialZb) => (PartialZ, e_sign(kind)),
        (PStarPlus | PStarMinus, Dz) => (Dzb, -e_sign(kind)),
        (PStarPlus | PStarMinus, Dzb) => (Dz, e_sign(kind)),
        (WPlus | WMinus, PartialZ) => (PartialZb, -(e_sign(kind) * lambda.exp())),
        (WPlus | WMinus, PartialZb) => (PartialZ, e_sign(kind) * (-lambda).exp()),
        (WStarPlus | WStarMinus, Dz) => (Dzb, -(e_sign(kind) * lambda.exp())),
        (WStarPlus | WStarMinus, Dzb) => (Dz, e_sign(kind) * (-lambda).exp()),
        _ => unreachable!("accepts() filters {kind:?} on {basis:?}"),
    }
}

/// Applies a structure operator to one frame element.
///
/// `lambda` is the value of the conformal factor and only affects the W kinds.
pub fn structure_apply(
    kind: StructureKind,
    v: FrameVector,
    lambda: ParaComplex,
) -> Result<Vec<FrameVector>, AlgebraError> {
    if !kind.accepts(v.basis) {
        return Err(AlgebraError::KindMismatch { kind, basis: v.basis });
    }
    let (image, c) = table(kind, v.basis, lambda);
    let scalar = if v.basis.is_real_frame() { v.coeff } else { v.coeff.conj() };
    Ok(vec![FrameVector::new(image, v.index, scalar * c)])
}

/// Applies a structure operator to a linear combination, merging like terms.
pub fn structure_apply_all(
    kind: StructureKind,
    vs: &[FrameVector],
    lambda: ParaComplex,
) -> Result<Vec<FrameVector>, AlgebraError> {
    let mut out: Vec<FrameVector> = Vec::new();
    for v in vs {
        for w in structure_apply(kind, *v, lambda)? {
            match out.iter_mut().find(|o| o.basis == w.basis && o.index == w.index) {
                Some(o) => o.coeff += w.coeff,
                None => out.push(w),
            }
        }
    }
    out.retain(|w| !w.coeff.is_zero());
    Ok(out)
}

/// The difference operator `A − B` of two kinds (e.g. `P⁺ − P⁻`), applied to one element.
pub fn structure_apply_difference(
    plus: StructureKind,
    minus: StructureKind,
    v: FrameVector,
    lambda: ParaComplex,
) -> Result<Vec<FrameVector>, AlgebraError> {
    let mut terms = structure_apply(plus, v, lambda)?;
    for mut w in structure_apply(minus, v, lambda)? {
        w.coeff = -w.coeff;
        terms.push(w);
    }
    let mut out: Vec<FrameVector> = Vec::new();
    for w in terms {
        match out.iter_mut().find(|o| o.basis == w.basis && o.index == w.index) {
            Some(o) => o.coeff += w.coeff,
            None => out.push(w),
        }
    }
    out.retain(|w| !w.coeff.is_zero());
    Ok(out)
}
