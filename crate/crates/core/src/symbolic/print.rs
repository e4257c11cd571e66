//! Deterministic text rendering that [`parse`](super::parse) reads back.

use super::expr::Expr;
use crate::algebra::ParaComplex;

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

pub fn to_text(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(e, &mut out);
    out
}

fn constant_text(c: ParaComplex) -> (String, u8) {
    if c.b == 0.0 {
        if c.a < 0.0 {
            (format!("-{}", -c.a), UNARY)
        } else {
            (format!("{}", c.a), ATOM)
        }
    } else if c.a == 0.0 && c.b == 1.0 {
        ("j".into(), ATOM)
    } else if c.a == 0.0 && c.b == -1.0 {
        ("-j".into(), UNARY)
    } else {
        (c.to_string(), ATOM)
    }
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Constant(c) => constant_text(*c).1,
        Expr::Var(_) | Expr::Apply(..) => ATOM,
        Expr::Sum(_) => SUM,
        Expr::Product(_) | Expr::Quotient(..) => PRODUCT,
        Expr::Negate(_) => UNARY,
        Expr::Power(..) => POWER,
    }
}

fn is_reciprocal(e: &Expr) -> bool {
    matches!(e, Expr::Power(_, k) if *k < 0)
}

fn write_at_least(e: &Expr, min: u8, out: &mut String) {
    if precedence(e) < min {
        out.push('(');
        write_expr(e, out);
        out.push(')');
    } else {
        write_expr(e, out);
    }
}

/// If `e` reads as a subtraction inside a sum, its positive counterpart.
fn negated_term(e: &Expr) -> Option<Expr> {
    match e {
        Expr::Negate(x) => Some((**x).clone()),
        Expr::Constant(c) if c.b == 0.0 && c.a < 0.0 => Some(Expr::constant(-*c)),
        Expr::Product(xs) => match xs.first() {
            Some(Expr::Constant(c)) if c.b == 0.0 && c.a < 0.0 => {
                let mut rest = xs.clone();
                if *c == -ParaComplex::ONE {
                    rest.remove(0);
                } else {
                    rest[0] = Expr::constant(-*c);
                }
                Some(Expr::product(rest))
            }
            _ => None,
        },
        _ => None,
    }
}

fn write_expr(e: &Expr, out: &mut String) {
    match e {
        Expr::Constant(c) => out.push_str(&constant_text(*c).0),
        Expr::Var(c) => out.push_str(&c.to_string()),
        Expr::Sum(xs) => {
            for (i, x) in xs.iter().enumerate() {
                if i == 0 {
                    write_at_least(x, SUM + 1, out);
                    continue;
                }
                match negated_term(x) {
                    Some(pos) => {
                        out.push_str(" - ");
                        write_at_least(&pos, PRODUCT, out);
                    }
                    None => {
                        out.push_str(" + ");
                        write_at_least(x, SUM + 1, out);
                    }
                }
            }
        }
        Expr::Product(xs) => {
            let (den, num): (Vec<&Expr>, Vec<&Expr>) = xs.iter().partition(|x| is_reciprocal(x));
            if num.is_empty() {
                out.push('1');
            }
            for (i, x) in num.iter().enumerate() {
                if i > 0 {
                    out.push('*');
                    write_at_least(x, POWER, out);
                } else {
                    write_at_least(x, UNARY, out);
                }
            }
            if den.is_empty() {
                return;
            }
            out.push('/');
            let flipped: Vec<Expr> = den
                .iter()
                .map(|d| match d {
                    Expr::Power(b, k) => (**b).clone().pow(-k),
                    _ => unreachable!(),
                })
                .collect();
            if flipped.len() == 1 {
                write_at_least(&flipped[0], POWER, out);
            } else {
                out.push('(');
                write_expr(&Expr::Product(flipped), out);
                out.push(')');
            }
        }
        Expr::Quotient(n, d) => {
            write_at_least(n, PRODUCT, out);
            out.push('/');
            write_at_least(d, POWER, out);
        }
        Expr::Power(b, k) => {
            write_at_least(b, ATOM, out);
            out.push('^');
            out.push_str(&k.to_string());
        }
        Expr::Apply(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(a, out);
            out.push(')');
        }
        Expr::Negate(x) => {
            // `-a*b` reads back as (-a)*b, which has the same value
            let inner = to_text(x);
            out.push('-');
            if precedence(x) < PRODUCT || inner.starts_with('-') {
                out.push('(');
                out.push_str(&inner);
                out.push(')');
            } else {
                out.push_str(&inner);
            }
        }
    }
}
