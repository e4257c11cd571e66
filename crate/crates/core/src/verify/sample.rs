//! Seeded random operands, states and expressions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Func, ParaComplex};
use crate::symbolic::{Coord, CoordinateChart, EvalState, Expr};

/// States closer than this (in idempotent components) to a singular set are rejected.
pub const SINGULAR_MARGIN: f64 = 1e-3;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Both canonical components uniform in `[−2, 2]`.
pub fn random_pc<R: Rng>(rng: &mut R) -> ParaComplex {
    ParaComplex::new(rng.gen_range(-2.0..=2.0), rng.gen_range(-2.0..=2.0))
}

/// True when both idempotent components have magnitude at least [`SINGULAR_MARGIN`].
pub fn clear_of_zero_divisors(x: ParaComplex) -> bool {
    let p = x.to_idempotent();
    p.u.abs() >= SINGULAR_MARGIN && p.v.abs() >= SINGULAR_MARGIN
}

/// A state whose coordinates are all clear of the zero-divisor lines.
pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> EvalState {
    loop {
        let z: Vec<ParaComplex> = (0..n).map(|_| random_pc(rng)).collect();
        let zb: Vec<ParaComplex> = (0..n).map(|_| random_pc(rng)).collect();
        if z.iter().chain(&zb).all(|&x| clear_of_zero_divisors(x)) {
            return EvalState::new(z, zb);
        }
    }
}

/// Draws states until `accept` holds; `None` after `tries` rejections.
pub fn random_state_where<R: Rng>(
    rng: &mut R,
    n: usize,
    tries: usize,
    mut accept: impl FnMut(&EvalState) -> bool,
) -> Option<EvalState> {
    (0..tries).map(|_| random_state(rng, n)).find(|s| accept(s))
}

/// Random expression over the chart's positions whose every reciprocal,
/// logarithm and negative power has a base of the form `c + w²` with real
/// `c ≥ 0.5`, so it is defined at every state.
pub fn random_expr<R: Rng>(rng: &mut R, chart: &CoordinateChart, depth: u32) -> Expr {
    let pos = chart.positions();
    let leaf = |rng: &mut R| -> Expr {
        match rng.gen_range(0..5) {
            0 => Expr::constant(ParaComplex::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))),
            1 => Expr::real((rng.gen_range(-20..=20) as f64) / 4.0),
            _ => Expr::var(pos[rng.gen_range(0..pos.len())]),
        }
    };
    if depth == 0 {
        return leaf(rng);
    }
    let sub = |rng: &mut R| random_expr(rng, chart, depth - 1);
    let positive = |rng: &mut R, w: Expr| Expr::real(rng.gen_range(0.5..2.0)) + w.pow(2);
    match rng.gen_range(0..10) {
        0 | 1 => Expr::Sum(vec![sub(rng), sub(rng)]),
        2 | 3 => Expr::Product(vec![sub(rng), sub(rng)]),
        4 => -sub(rng),
        5 => sub(rng).pow(rng.gen_range(2..=3)),
        6 => {
            let n = sub(rng);
            let w = sub(rng);
            n / positive(rng, w)
        }
        7 => {
            let w = sub(rng);
            positive(rng, w).pow(-rng.gen_range(1..=2))
        }
        8 => {
            // scaled arguments keep exp and the trig functions moderate
            let f = [Func::Exp, Func::Sin, Func::Cos][rng.gen_range(0..3)];
            Expr::apply(f, Expr::real(0.5) * sub(rng))
        }
        _ => {
            let w = sub(rng);
            let arg = positive(rng, w);
            Expr::apply(Func::Ln, arg)
        }
    }
}

/// Coordinates an expression may be differentiated by.
pub fn random_coord<R: Rng>(rng: &mut R, chart: &CoordinateChart) -> Coord {
    let pos = chart.positions();
    pos[rng.gen_range(0..pos.len())]
}
