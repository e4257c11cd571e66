//! Recursive-descent parser for expressions over a coordinate chart.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" ["-"] integer)?
//! atom   := number | "j" | var | func "(" expr ")" | "(" expr ")"
//! ```
//!
//! `^` binds tighter than unary minus, so `-z1^2` is `-(z1^2)`.

use std::fmt;

use super::expr::{Coord, CoordKind, CoordinateChart, Expr};
use crate::algebra::Func;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at column {column}: expected {}, found {found}", .expected.join(" or "))]
    Syntax {
        column: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("unknown variable `{name}` at column {column}")]
    UnknownVariable { name: String, column: usize },
    #[error("`{name}` at column {column} is outside the chart (n = {n})")]
    IndexOutOfRange { name: String, column: usize, n: usize },
}

impl ParseError {
    pub fn column(&self) -> usize {
        match self {
            ParseError::Syntax { column, .. }
            | ParseError::UnknownVariable { column, .. }
            | ParseError::IndexOutOfRange { column, .. } => *column,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64, String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(_, s) => write!(f, "number `{s}`"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

/// Tokens paired with their 1-based column.
fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, col));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut k = i + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    i = k;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let v: f64 = s.parse().map_err(|_| ParseError::Syntax {
                column: col,
                expected: vec!["number"],
                found: format!("`{s}`"),
            })?;
            out.push((Tok::Num(v, s), col));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else {
            return Err(ParseError::Syntax {
                column: col,
                expected: vec!["expression"],
                found: format!("`{c}`"),
            });
        }
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    chart: &'a CoordinateChart,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        ParseError::Syntax {
            column: self.column(),
            expected,
            found: self.peek().to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, name: &'static str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(vec![name]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    terms.push(self.term()?);
                }
                Tok::Minus => {
                    self.bump();
                    terms.push(-self.term()?);
                }
                _ => break,
            }
        }
        Ok(Expr::sum(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        // true while `acc` is a product built by this loop (safe to extend)
        let mut in_run = false;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = match acc {
                        Expr::Product(mut factors) if in_run => {
                            factors.push(rhs);
                            Expr::Product(factors)
                        }
                        other => Expr::Product(vec![other, rhs]),
                    };
                    in_run = true;
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = acc / rhs;
                    in_run = false;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let k = match self.peek().clone() {
            Tok::Num(_, s) if s.bytes().all(|b| b.is_ascii_digit()) => match s.parse::<i32>() {
                Ok(k) => k,
                Err(_) => return Err(self.error(vec!["integer exponent"])),
            },
            _ => return Err(self.error(vec!["integer exponent"])),
        };
        self.bump();
        Ok(base.pow(if negative { -k } else { k }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(Expr::real(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let column = self.column();
                self.bump();
                if name == "j" {
                    return Ok(Expr::j());
                }
                if let Some(f) = Func::from_name(&name) {
                    self.expect(Tok::LParen, "`(`")?;
                    let arg = self.expr()?;
                    self.expect(Tok::RParen, "`)`")?;
                    return Ok(Expr::apply(f, arg));
                }
                self.variable(&name, column).map(Expr::Var)
            }
            _ => Err(self.error(vec!["number", "variable", "function", "`(`", "`-`"])),
        }
    }

    fn variable(&self, name: &str, column: usize) -> Result<Coord, ParseError> {
        let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
        let (prefix, digits) = name.split_at(split);
        let kind = match prefix {
            "z" => CoordKind::Z,
            "zb" => CoordKind::Zb,
            "xi" if self.chart.has_velocities() => CoordKind::Xi,
            "xib" if self.chart.has_velocities() => CoordKind::Xib,
            _ => return Err(ParseError::UnknownVariable { name: name.into(), column }),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(ParseError::UnknownVariable { name: name.into(), column });
        }
        let out_of_range = || ParseError::IndexOutOfRange {
            name: name.into(),
            column,
            n: self.chart.n(),
        };
        let one_based: usize = digits.parse().map_err(|_| out_of_range())?;
        if one_based == 0 || one_based > self.chart.n() {
            return Err(out_of_range());
        }
        Ok(Coord { kind, index: one_based - 1 })
    }
}

/// Parses `text` against `chart`.
pub fn parse(text: &str, chart: &CoordinateChart) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, chart };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(vec!["operator", "end of input"]));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ParaComplex;

    fn chart1() -> CoordinateChart {
        CoordinateChart::new(1)
    }

    fn z1() -> Expr {
        Expr::var(Coord::z(0))
    }
    fn zb1() -> Expr {
        Expr::var(Coord::zb(0))
    }

    #[test]
    fn two_token_product() {
        assert_eq!(parse("z1*zb1", &chart1()).unwrap(), Expr::Product(vec![z1(), zb1()]));
    }

    #[test]
    fn precedence() {
        let e = parse("0.5*zb1^2 - 9.8*z1", &chart1()).unwrap();
        let expected = Expr::Sum(vec![
            Expr::Product(vec![Expr::real(0.5), zb1().pow(2)]),
            -Expr::Product(vec![Expr::real(9.8), z1()]),
        ]);
        assert_eq!(e, expected);
        assert_eq!(parse("-z1^2", &chart1()).unwrap(), -(z1().pow(2)));
        assert_eq!(
            parse("z1/zb1*2", &chart1()).unwrap(),
            Expr::Product(vec![z1() / zb1(), Expr::real(2.0)])
        );
        assert_eq!(
            parse("z1*zb1/2", &chart1()).unwrap(),
            Expr::Product(vec![z1(), zb1()]) / Expr::real(2.0)
        );
        assert_eq!(parse("z1^-2", &chart1()).unwrap(), z1().pow(-2));
    }

    #[test]
    fn constants_and_functions() {
        assert_eq!(parse("j", &chart1()).unwrap(), Expr::constant(ParaComplex::J));
        assert_eq!(parse("exp(2*z1)", &chart1()).unwrap(), (Expr::real(2.0) * z1()).exp());
        assert_eq!(parse("1.5e-3", &chart1()).unwrap(), Expr::real(1.5e-3));
        assert_eq!(parse("  .25 ", &chart1()).unwrap(), Expr::real(0.25));
    }

    #[test]
    fn variable_errors() {
        assert!(matches!(
            parse("z2", &chart1()),
            Err(ParseError::IndexOutOfRange { n: 1, column: 1, .. })
        ));
        assert!(matches!(parse("z0", &chart1()), Err(ParseError::IndexOutOfRange { .. })));
        assert!(matches!(parse("t*z1", &chart1()), Err(ParseError::UnknownVariable { .. })));
        assert!(matches!(parse("xi1", &chart1()), Err(ParseError::UnknownVariable { .. })));
        assert_eq!(
            parse("xib1", &chart1().with_velocities()).unwrap(),
            Expr::var(Coord::xib(0))
        );
    }

    #[test]
    fn syntax_errors_carry_columns() {
        for (text, col) in [("z1 +", 5), ("z1 ** zb1", 5), ("(z1", 4), ("z1^1.5", 4), ("exp z1", 5), ("z1 $", 4), ("z1 zb1", 4)] {
            match parse(text, &chart1()) {
                Err(e @ ParseError::Syntax { .. }) => assert_eq!(e.column(), col, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
