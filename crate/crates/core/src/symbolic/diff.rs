use super::expr::{Coord, Expr};
use super::simplify::simplify;
use crate::algebra::Func;

/// Formal partial derivative with respect to `var`; every other coordinate,
/// including the conjugate partner of `var`, is held fixed.
pub fn differentiate(e: &Expr, var: Coord) -> Expr {
    simplify(&raw(e, var))
}

fn raw(e: &Expr, var: Coord) -> Expr {
    if !e.depends_on(var) {
        return Expr::zero();
    }
    match e {
        Expr::Constant(_) => Expr::zero(),
        Expr::Var(c) => {
            if *c == var {
                Expr::one()
            } else {
                Expr::zero()
            }
        }
        Expr::Sum(xs) => Expr::sum(
            xs.iter()
                .map(|x| raw(x, var))
                .filter(|d| !d.is_zero())
                .collect(),
        ),
        Expr::Product(xs) => {
            let mut terms = Vec::new();
            for (i, x) in xs.iter().enumerate() {
                let d = raw(x, var);
                if d.is_zero() {
                    continue;
                }
                let mut factors: Vec<Expr> = xs.clone();
                factors[i] = d;
                terms.push(Expr::product(factors));
            }
            Expr::sum(terms)
        }
        Expr::Negate(x) => -raw(x, var),
        Expr::Quotient(n, d) => {
            // (n'd − n d') / d²
            let dn = raw(n, var);
            let dd = raw(d, var);
            let mut top = Vec::new();
            if !dn.is_zero() {
                top.push(dn * (**d).clone());
            }
            if !dd.is_zero() {
                top.push(-((**n).clone() * dd));
            }
            Expr::Quotient(Box::new(Expr::sum(top)), Box::new((**d).clone().pow(2)))
        }
        Expr::Power(b, k) => Expr::Product(vec![
            Expr::real(*k as f64),
            (**b).clone().pow(k - 1),
            raw(b, var),
        ]),
        Expr::Apply(f, a) => {
            let inner = raw(a, var);
            let arg = (**a).clone();
            let outer = match f {
                Func::Exp => e.clone(),
                Func::Ln => arg.pow(-1),
                Func::Sin => Expr::apply(Func::Cos, arg),
                Func::Cos => -Expr::apply(Func::Sin, arg),
            };
            outer * inner
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{parse, to_text, CoordinateChart};

    fn d(text: &str, var: Coord) -> String {
        to_text(&differentiate(&parse(text, &CoordinateChart::new(2)).unwrap(), var))
    }

    #[test]
    fn rules() {
        assert_eq!(d("z1^2*zb1", Coord::z(0)), "2*z1*zb1");
        assert_eq!(d("z1", Coord::zb(0)), "0");
        assert_eq!(d("exp(2*z1)", Coord::z(0)), "2*exp(2*z1)");
        assert_eq!(d("ln(z1)", Coord::z(0)), "1/z1");
        assert_eq!(d("sin(zb2)", Coord::zb(1)), "cos(zb2)");
        assert_eq!(d("cos(z1*zb1)", Coord::zb(0)), "-z1*sin(z1*zb1)");
        assert_eq!(d("1/z1", Coord::z(0)), "-1/z1^2");
        assert_eq!(d("z1/(1 + zb1)", Coord::zb(0)), "-z1/(zb1 + 1)^2");
    }
}
