//! Para-complex scalars and the structure operators acting on coordinate frames.

mod number;
mod structure;

pub use number::{Func, IdempotentPair, ParaComplex, ZERO_COMPONENT};
pub use structure::{
    structure_apply, structure_apply_all, structure_apply_difference, Basis, FrameVector,
    StructureKind,
};

use std::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("zero divisor: {value} has a vanishing idempotent component")]
    ZeroDivisor { value: ParaComplex },
    #[error("{func} is undefined at {value}")]
    Domain { func: Func, value: ParaComplex },
    #[error("{} cannot act on {}", .kind.name(), .basis.symbol())]
    KindMismatch { kind: StructureKind, basis: Basis },
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}
