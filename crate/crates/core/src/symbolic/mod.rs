//! Expressions over the coordinates `z_i`, `zb_i` (and velocities `xi_i`, `xib_i`).

mod diff;
mod expr;
mod parse;
mod print;
mod simplify;

pub use diff::differentiate;
pub use expr::{Coord, CoordKind, CoordinateChart, EvalError, EvalState, Expr};
pub use parse::{parse, ParseError};
pub use print::to_text;
pub use simplify::simplify;
