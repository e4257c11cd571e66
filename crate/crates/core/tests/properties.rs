use proptest::prelude::*;

use bpc_core::algebra::*;
use bpc_core::dynamics::solve_para_linear;
use bpc_core::eom::*;
use bpc_core::symbolic::*;
use bpc_core::verify::{fixtures, gauss_jordan, hadamard_ratio, sample, selftest_algebra};

fn pc() -> impl Strategy<Value = ParaComplex> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| ParaComplex::new(a, b))
}

fn invertible_pc() -> impl Strategy<Value = ParaComplex> {
    pc().prop_filter("clear of the zero-divisor lines", |x| sample::clear_of_zero_divisors(*x))
}

fn state(n: usize) -> impl Strategy<Value = EvalState> {
    (prop::collection::vec(invertible_pc(), n), prop::collection::vec(invertible_pc(), n))
        .prop_map(|(z, zb)| EvalState::new(z, zb))
}

fn rel(x: ParaComplex, y: ParaComplex) -> f64 {
    (x - y).max_abs() / x.max_abs().max(y.max_abs()).max(1.0)
}

/// Expressions in two coordinate pairs that are defined everywhere: every
/// reciprocal, negative power and logarithm acts on `c + w²` with `c ≥ 0.5`.
fn expr() -> impl Strategy<Value = Expr> {
    let chart = CoordinateChart::new(2);
    let leaf = prop_oneof![
        prop::sample::select(chart.positions()).prop_map(Expr::var),
        (-3i32..=3).prop_map(|k| Expr::real(k as f64 / 2.0)),
        pc().prop_map(Expr::constant),
    ];
    leaf.prop_recursive(3, 24, 2, |inner| {
        let positive = (0.5f64..2.0, inner.clone()).prop_map(|(c, w)| Expr::real(c) + w.pow(2));
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            inner.clone().prop_map(|a| -a),
            (inner.clone(), 2i32..=3).prop_map(|(a, k)| a.pow(k)),
            (inner.clone(), positive.clone()).prop_map(|(a, d)| a / d),
            (positive.clone(), 1i32..=2).prop_map(|(d, k)| d.pow(-k)),
            positive.prop_map(|d| Expr::apply(Func::Ln, d)),
            (prop::sample::select(vec![Func::Exp, Func::Sin, Func::Cos]), inner)
                .prop_map(|(f, a)| Expr::apply(f, Expr::real(0.5) * a)),
        ]
    })
}

fn coord() -> impl Strategy<Value = Coord> {
    prop::sample::select(CoordinateChart::new(2).positions())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn idempotent_identities_are_exact(x in pc(), y in pc()) {
        let (p, q) = (x.to_idempotent(), y.to_idempotent());
        let ep = ParaComplex::E_PLUS.to_idempotent();
        let em = ParaComplex::E_MINUS.to_idempotent();
        let j = ParaComplex::J.to_idempotent();
        prop_assert_eq!(p * ep * ep, p * ep);
        prop_assert_eq!(p * em * em, p * em);
        let zero = (p * ep) * (q * em);
        prop_assert!(zero.u == 0.0 && zero.v == 0.0);
        let sum = IdempotentPair::new((p * ep).u + (p * em).u, (p * ep).v + (p * em).v);
        prop_assert_eq!(sum, p);
        prop_assert_eq!(p * j * j, p);
    }

    #[test]
    fn canonical_roundtrip(x in pc()) {
        let back = ParaComplex::from_idempotent(x.to_idempotent());
        prop_assert!((back - x).max_abs() <= 1e-15 * x.max_abs().max(1.0));
    }

    #[test]
    fn exp_is_additive(x in pc(), y in pc()) {
        prop_assert!(rel((x + y).exp(), x.exp() * y.exp()) <= 1e-12);
    }

    #[test]
    fn p_difference_squares_to_identity(c in pc(), i in 1usize..4, covector in any::<bool>(), conj in any::<bool>()) {
        let (plus, minus, basis) = match (covector, conj) {
            (false, false) => (StructureKind::PPlus, StructureKind::PMinus, Basis::PartialZ),
            (false, true) => (StructureKind::PPlus, StructureKind::PMinus, Basis::PartialZb),
            (true, false) => (StructureKind::PStarPlus, StructureKind::PStarMinus, Basis::Dz),
            (true, true) => (StructureKind::PStarPlus, StructureKind::PStarMinus, Basis::Dzb),
        };
        let v = FrameVector::new(basis, i, c);
        let once = structure_apply_difference(plus, minus, v, ParaComplex::ZERO).unwrap();
        prop_assert_eq!(once.len(), 1);
        let twice = structure_apply_difference(plus, minus, once[0], ParaComplex::ZERO).unwrap();
        prop_assert_eq!(twice.len(), 1);
        prop_assert_eq!((twice[0].basis, twice[0].index), (basis, i));
        prop_assert!((twice[0].coeff - c).max_abs() <= 1e-15 * c.max_abs().max(1.0));
    }

    #[test]
    fn j_squares_to_identity(c in pc(), b in prop::sample::select(vec![Basis::PartialX, Basis::PartialY, Basis::PartialZ, Basis::PartialZb, Basis::Dz, Basis::Dzb])) {
        let kind = if b.is_covector() { StructureKind::JStar } else { StructureKind::J };
        let v = FrameVector::new(b, 1, c);
        let once = structure_apply(kind, v, ParaComplex::ZERO).unwrap();
        let twice = structure_apply_all(kind, &once, ParaComplex::ZERO).unwrap();
        prop_assert_eq!(twice.len(), 1);
        prop_assert_eq!(twice[0].basis, b);
        prop_assert!((twice[0].coeff - c).max_abs() <= 1e-15 * c.max_abs().max(1.0));
    }

    #[test]
    fn w_at_zero_lambda_is_p(c in pc(), b in prop::sample::select(vec![Basis::PartialZ, Basis::PartialZb, Basis::Dz, Basis::Dzb])) {
        let pairs = if b.is_covector() {
            [(StructureKind::WStarPlus, StructureKind::PStarPlus), (StructureKind::WStarMinus, StructureKind::PStarMinus)]
        } else {
            [(StructureKind::WPlus, StructureKind::PPlus), (StructureKind::WMinus, StructureKind::PMinus)]
        };
        for (w, p) in pairs {
            let v = FrameVector::new(b, 2, c);
            prop_assert_eq!(structure_apply(w, v, ParaComplex::ZERO).unwrap(), structure_apply(p, v, ParaComplex::ZERO).unwrap());
        }
    }

    #[test]
    fn algebra_suite_passes_for_any_seed(seed in any::<u64>()) {
        prop_assert!(selftest_algebra(seed).all_passed());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_roundtrip(e in expr(), s in state(2)) {
        let chart = CoordinateChart::new(2);
        let back = parse(&to_text(&e), &chart).unwrap();
        prop_assert_eq!(simplify(&back), simplify(&e));
        prop_assert!(rel(back.evaluate(&s).unwrap(), e.evaluate(&s).unwrap()) <= 1e-12);
    }

    #[test]
    fn simplify_preserves_value(e in expr(), s in state(2)) {
        let simp = simplify(&e);
        prop_assert!(rel(simp.evaluate(&s).unwrap(), e.evaluate(&s).unwrap()) <= 1e-10);
        prop_assert_eq!(simplify(&simp), simp);
    }

    #[test]
    fn derivative_is_linear(f in expr(), g in expr(), a in pc(), b in pc(), q in coord(), s in state(2)) {
        let lhs = differentiate(&(Expr::constant(a) * f.clone() + Expr::constant(b) * g.clone()), q);
        let rhs = a * differentiate(&f, q).evaluate(&s).unwrap() + b * differentiate(&g, q).evaluate(&s).unwrap();
        prop_assert!(rel(lhs.evaluate(&s).unwrap(), rhs) <= 1e-12, "{} vs {}", lhs.evaluate(&s).unwrap(), rhs);
    }

    #[test]
    fn derivative_matches_central_differences(e in expr(), q in coord(), s in state(2)) {
        let h = 1e-5;
        let sym = differentiate(&e, q).evaluate(&s).unwrap();
        for (step, unit) in [(ParaComplex::real(h), ParaComplex::ONE), (ParaComplex::new(0.0, h), ParaComplex::J)] {
            let diff = e.evaluate(&s.shifted(q, step)).unwrap() - e.evaluate(&s.shifted(q, -step)).unwrap();
            // along j the difference quotient is j·∂e, and j·j = 1
            let fd = diff.scale(0.5 / h) * unit;
            prop_assert!((fd - sym).max_abs() <= 1e-6 * sym.max_abs().max(1.0), "fd {} sym {}", fd, sym);
        }
    }

    #[test]
    fn mixed_partials_commute(e in expr(), i in 0usize..2, k in 0usize..2, s in state(2)) {
        let (zi, zbk) = (Coord::z(i), Coord::zb(k));
        let a = differentiate(&differentiate(&e, zi), zbk).evaluate(&s).unwrap();
        let b = differentiate(&differentiate(&e, zbk), zi).evaluate(&s).unwrap();
        prop_assert!(rel(a, b) <= 1e-12, "{} vs {}", a, b);
    }
}

/// Lagrangians `α z zb + β zb² + γ z² + δ z² zb` with a linear conformal factor.
fn lagrangian_problem() -> impl Strategy<Value = LagrangianProblem> {
    (prop::array::uniform4(-1.0f64..1.0), prop::array::uniform2(-0.5f64..0.5)).prop_map(|(c, l)| {
        let chart = CoordinateChart::new(1);
        let z = Expr::var(Coord::z(0));
        let zb = Expr::var(Coord::zb(0));
        let lag = Expr::real(1.0 + c[0]) * z.clone() * zb.clone()
            + Expr::real(c[1]) * zb.clone().pow(2)
            + Expr::real(c[2]) * z.clone().pow(2)
            + Expr::real(c[3]) * z.clone().pow(2) * zb.clone();
        let lambda = Expr::real(l[0]) * z + Expr::real(l[1]) * zb;
        LagrangianProblem::new(chart, lag, lambda).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn plug_back_audit_vanishes(p in lagrangian_problem(), s in state(1)) {
        let ode = synthesize_el(&p);
        let (m, b) = ode.evaluate(&s).unwrap();
        prop_assume!(hadamard_ratio(&m) >= 1e-3);
        let x = solve_para_linear(&m, &b).unwrap();
        let xi = Semispray::new(vec![x[0]], vec![x[1]]);
        let r = audit_lagrange(&p, &s, &xi).unwrap();
        prop_assert!(r <= 1e-10 * x.iter().map(|v| v.max_abs()).fold(1.0, f64::max), "{r:e}");
    }

    #[test]
    fn constant_lambda_leaves_hamilton_flow_unchanged(c in pc(), k in 0usize..5, s in state(2)) {
        let base = &fixtures::reduction_hamiltonians()[k];
        let shifted = HamiltonianProblem::new(base.chart, base.hamiltonian.clone(), Expr::constant(c)).unwrap();
        let s = EvalState::new(s.z[..base.chart.n()].to_vec(), s.zb[..base.chart.n()].to_vec());
        let (a, ab) = synthesize_ham(base).evaluate(&s).unwrap();
        let (b, bb) = synthesize_ham(&shifted).evaluate(&s).unwrap();
        for (x, y) in a.iter().chain(&ab).zip(b.iter().chain(&bb)) {
            prop_assert!(rel(*x, *y) <= 1e-12);
        }
    }

    #[test]
    fn canonical_two_form_is_closed(l in prop::array::uniform4(-1.0f64..1.0), n in 1usize..3) {
        let chart = CoordinateChart::new(n);
        let z = Expr::var(Coord::z(0));
        let zb = Expr::var(Coord::zb(n - 1));
        let lambda = Expr::real(l[0]) * z.clone() * zb.clone()
            + Expr::real(l[1]) * zb.clone().pow(2)
            + Expr::apply(Func::Exp, Expr::real(l[2]) * z)
            + Expr::apply(Func::Sin, Expr::real(l[3]) * zb);
        prop_assert!(canonical_two_form(&lambda, &chart).is_closed());
    }

    #[test]
    fn linear_solve_plugs_back(dim in 1usize..5, entries in prop::collection::vec(pc(), 16), rhs in prop::collection::vec(pc(), 4)) {
        let m: Vec<Vec<ParaComplex>> = (0..dim).map(|i| entries[i * 4..i * 4 + dim].to_vec()).collect();
        let b = rhs[..dim].to_vec();
        prop_assume!(hadamard_ratio(&m) >= 1e-3);
        let x = solve_para_linear(&m, &b).unwrap();
        let scale = m.iter().flatten().map(|v| v.max_abs()).fold(0.0, f64::max) * x.iter().map(|v| v.max_abs()).fold(1.0, f64::max);
        for (row, bi) in m.iter().zip(&b) {
            let mx: ParaComplex = row.iter().zip(&x).map(|(a, v)| *a * *v).sum();
            prop_assert!((mx - *bi).max_abs() <= 1e-10 * scale.max(1.0));
        }
        let y = gauss_jordan(m.clone(), b.clone()).unwrap();
        for (u, v) in x.iter().zip(&y) {
            prop_assert!(rel(*u, *v) <= 1e-9);
        }
    }
}
