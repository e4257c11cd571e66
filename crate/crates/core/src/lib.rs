//! Conformal bi-para-complex mechanics: para-complex algebra, symbolic
//! expressions, synthesis of Euler–Lagrange and Hamilton equations, numerical
//! integration, and verification suites.

pub mod algebra;
pub mod dynamics;
pub mod eom;
pub mod symbolic;
pub mod verify;
