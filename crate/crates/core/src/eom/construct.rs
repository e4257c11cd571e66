//! The geometric objects built from a Lagrangian or from the conformal factor alone.

use super::forms::{OneForm, Semispray, TwoForm, VectorField};
use super::LagrangianProblem;
use crate::algebra::ParaComplex;
use crate::symbolic::{simplify, Coord, CoordinateChart, Expr};

fn c(v: ParaComplex) -> Expr {
    Expr::constant(v)
}

/// `d_{(W⁺−W⁻)} L = Σ −j e^λ L_{zb_i} dz_i + j e^{−λ} L_{z_i} dzb_i`.
pub fn vertical_differential(p: &LagrangianProblem) -> OneForm {
    let e_pos = p.lambda.clone().exp();
    let e_neg = (-p.lambda.clone()).exp();
    let n = p.chart.n();
    OneForm {
        coeff_dz: (0..n)
            .map(|i| simplify(&(-(c(ParaComplex::J) * e_pos.clone() * p.partial(Coord::zb(i))))))
            .collect(),
        coeff_dzb: (0..n)
            .map(|i| simplify(&(c(ParaComplex::J) * e_neg.clone() * p.partial(Coord::z(i)))))
            .collect(),
    }
}

/// `Φ_L = −d(d_{(W⁺−W⁻)} L)`.
pub fn lagrangian_two_form(p: &LagrangianProblem) -> TwoForm {
    vertical_differential(p).exterior_derivative().negated()
}

/// `V = (W⁺−W⁻)(ξ)`: `−e^λ j ξ^i ∂/∂z_i + e^{−λ} j ξ̄^i ∂/∂zb_i`.
pub fn liouville_vector_field(xi: &Semispray<Expr>, lambda: &Expr) -> VectorField {
    let e_pos = lambda.clone().exp();
    let e_neg = (-lambda.clone()).exp();
    VectorField {
        coeff_z: xi
            .xi
            .iter()
            .map(|x| simplify(&(-(e_pos.clone() * c(ParaComplex::J) * x.clone()))))
            .collect(),
        coeff_zb: xi
            .xib
            .iter()
            .map(|x| simplify(&(e_neg.clone() * c(ParaComplex::J) * x.clone())))
            .collect(),
    }
}

/// `E_L = Σ −j ξ^i e^λ L_{zb_i} + j ξ̄^i e^{−λ} L_{z_i} − L` with the velocity
/// symbols `xi_i`, `xib_i` left free. Each velocity is paired with the partial
/// along the conjugate direction, as the structure operators map `∂z` to `∂zb`.
pub fn energy(p: &LagrangianProblem) -> Expr {
    let xi = Semispray::symbols(p.chart.n());
    let e_pos = p.lambda.clone().exp();
    let e_neg = (-p.lambda.clone()).exp();
    let mut terms = Vec::new();
    for i in 0..p.chart.n() {
        terms.push(-(c(ParaComplex::J) * xi.xi[i].clone() * e_pos.clone() * p.partial(Coord::zb(i))));
        terms.push(c(ParaComplex::J) * xi.xib[i].clone() * e_neg.clone() * p.partial(Coord::z(i)));
    }
    terms.push(-p.lagrangian.clone());
    simplify(&Expr::sum(terms))
}

/// The Liouville form `½ j e^λ (zb_i dz_i − z_i dzb_i)`.
pub fn liouville_one_form(lambda: &Expr, chart: &CoordinateChart) -> OneForm {
    let half_j = c(ParaComplex::new(0.0, 0.5));
    let e = lambda.clone().exp();
    let n = chart.n();
    OneForm {
        coeff_dz: (0..n)
            .map(|i| simplify(&(half_j.clone() * e.clone() * Expr::var(Coord::zb(i)))))
            .collect(),
        coeff_dzb: (0..n)
            .map(|i| simplify(&(-(half_j.clone() * e.clone() * Expr::var(Coord::z(i))))))
            .collect(),
    }
}

/// The companion form `ω = ½ (e⁺ + e^{2λ} e⁻)(z_i dz_i + zb_i dzb_i)`.
pub fn canonical_omega(lambda: &Expr, chart: &CoordinateChart) -> OneForm {
    let weight = c(ParaComplex::real(0.5))
        * (c(ParaComplex::E_PLUS) + c(ParaComplex::E_MINUS) * (Expr::real(2.0) * lambda.clone()).exp());
    let n = chart.n();
    OneForm {
        coeff_dz: (0..n)
            .map(|i| simplify(&(weight.clone() * Expr::var(Coord::z(i)))))
            .collect(),
        coeff_dzb: (0..n)
            .map(|i| simplify(&(weight.clone() * Expr::var(Coord::zb(i)))))
            .collect(),
    }
}

/// `Φ = −d(Liouville form)`.
pub fn canonical_two_form(lambda: &Expr, chart: &CoordinateChart) -> TwoForm {
    liouville_one_form(lambda, chart).exterior_derivative().negated()
}
