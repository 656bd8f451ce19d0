//! Expressions over the generators.
//!
//! ```text
//! expr     := term (("+" | "-") term)*
//! term     := unary ("*" unary)*
//! unary    := "-" unary | factor
//! factor   := atom ("^" uint)?
//! atom     := "E2" | "E4" | "E6" | "Delta" | rational
//!           | "D" "(" expr ")" | "RC" "(" expr "," expr "," uint ")" | "(" expr ")"
//! rational := uint ("/" uint)?
//! ```
//!
//! Whitespace between tokens is ignored. A minus sign directly in front of a
//! literal is folded into it.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::brackets::bracket;
use crate::numkernel::{format_rational, Rational};
use crate::ring::{GradedPoly, QuasiForm};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    E2,
    E4,
    E6,
    Delta,
}

impl Generator {
    fn name(self) -> &'static str {
        match self {
            Generator::E2 => "E2",
            Generator::E4 => "E4",
            Generator::E6 => "E6",
            Generator::Delta => "Delta",
        }
    }

    fn form(self) -> QuasiForm {
        match self {
            Generator::E2 => QuasiForm::e2(),
            Generator::E4 => QuasiForm::e4(),
            Generator::E6 => QuasiForm::e6(),
            Generator::Delta => QuasiForm::delta(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Gen(Generator),
    Num(Rational),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    D(Box<Expr>),
    Rc(Box<Expr>, Box<Expr>, u32),
}

pub fn parse(text: &str) -> Result<Expr> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&self, message: &str) -> Error {
        let found = match self.src.get(self.pos) {
            Some(c) => format!("`{}`", *c as char),
            None => "end of input".into(),
        };
        Error::Syntax { offset: self.pos, message: format!("{message}, found {found}") }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Expr::negate(self.unary()?));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.uint()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("ascii digits parse"))
    }

    fn uint(&mut self) -> Result<u32> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let n = self.digits()?;
        u32::try_from(n).map_err(|_| Error::Syntax { offset: start, message: "integer too large".into() })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                let den_at = self.pos;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = self.digits()?;
                    if den.is_zero() {
                        return Err(Error::Syntax { offset: den_at, message: "zero denominator".into() });
                    }
                    return Ok(Expr::Num(Rational::new(num, den)));
                }
                Ok(Expr::Num(Rational::from_integer(num)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii identifier");
                match name {
                    "E2" => Ok(Expr::Gen(Generator::E2)),
                    "E4" => Ok(Expr::Gen(Generator::E4)),
                    "E6" => Ok(Expr::Gen(Generator::E6)),
                    "Delta" => Ok(Expr::Gen(Generator::Delta)),
                    "D" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        Ok(Expr::D(Box::new(e)))
                    }
                    "RC" => {
                        self.expect(b'(')?;
                        let f = self.expr()?;
                        self.expect(b',')?;
                        let g = self.expr()?;
                        self.expect(b',')?;
                        let n = self.uint()?;
                        self.expect(b')')?;
                        Ok(Expr::Rc(Box::new(f), Box::new(g), n))
                    }
                    _ => Err(Error::UnknownIdentifier { offset: start, name: name.to_string() }),
                }
            }
            _ => Err(self.error("expected an expression")),
        }
    }
}

impl Expr {
    /// `-e`, folded into the literal when `e` is one.
    pub fn negate(e: Expr) -> Expr {
        match e {
            Expr::Num(r) => Expr::Num(-r),
            e => Expr::Neg(Box::new(e)),
        }
    }

    pub fn eval(&self) -> Result<QuasiForm> {
        Ok(match self {
            Expr::Gen(g) => g.form(),
            Expr::Num(r) => QuasiForm::constant(r.clone()),
            Expr::Add(a, b) => add(&a.eval()?, &b.eval()?)?,
            Expr::Sub(a, b) => add(&a.eval()?, &b.eval()?.scale(&-Rational::from_integer(1.into())))?,
            Expr::Mul(a, b) => tight(a.eval()?.mul(&b.eval()?)),
            Expr::Neg(a) => a.eval()?.scale(&-Rational::from_integer(1.into())),
            Expr::Pow(a, e) => tight(a.eval()?.pow(*e)),
            Expr::D(a) => tight(a.eval()?.derive()),
            Expr::Rc(f, g, n) => bracket(&f.eval()?, &g.eval()?, *n, None)?,
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Num(r) if r.is_negative() => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

/// Shrinks the declared depth to the exact depth.
fn tight(f: QuasiForm) -> QuasiForm {
    let d = f.exact_depth().unwrap_or(0);
    f.with_depth(d).expect("exact depth is a valid bound")
}

/// Sum of two forms; a zero summand takes the weight of the other one.
fn add(a: &QuasiForm, b: &QuasiForm) -> Result<QuasiForm> {
    if a.weight() != b.weight() {
        if a.is_zero() {
            return Ok(b.clone());
        }
        if b.is_zero() {
            return Ok(a.clone());
        }
    }
    Ok(tight(a.add(b)?))
}

fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Gen(g) => f.write_str(g.name()),
            Expr::Num(r) => f.write_str(&format_rational(r)),
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                wrap(f, b, 2)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("*")?;
                wrap(f, b, 3)
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                // `-(3)` keeps the negation from folding into the literal
                let min = if matches!(**a, Expr::Num(_)) { 6 } else { 3 };
                wrap(f, a, min)
            }
            Expr::Pow(a, e) => {
                wrap(f, a, 5)?;
                write!(f, "^{e}")
            }
            Expr::D(a) => write!(f, "D({a})"),
            Expr::Rc(a, b, n) => write!(f, "RC({a}, {b}, {n})"),
        }
    }
}

/// Parses and evaluates in one step.
pub fn eval_str(text: &str) -> Result<QuasiForm> {
    parse(text)?.eval()
}

/// Evaluates to a bare polynomial.
pub fn eval_poly(text: &str) -> Result<GradedPoly> {
    Ok(eval_str(text)?.into_poly())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn parse_examples() {
        assert_eq!(parse("D(E2)").unwrap(), Expr::D(Box::new(Expr::Gen(Generator::E2))));
        let rc = parse("RC(E4, D(E4), 1)").unwrap();
        assert!(matches!(rc, Expr::Rc(_, _, 1)));
        assert_eq!(rc.eval().unwrap().poly(), &GradedPoly::delta().scale(&rat(960)));
        assert_eq!(parse(" 3 / 4 ").unwrap(), Expr::Num(ratio(3, 4)));
        assert_eq!(parse("-3").unwrap(), Expr::Num(rat(-3)));
    }

    #[test]
    fn errors_carry_offsets() {
        assert!(matches!(parse("E2^^2"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse("E2 + E8"), Err(Error::UnknownIdentifier { offset: 5, .. })));
        assert!(matches!(parse("E2 +"), Err(Error::Syntax { offset: 4, .. })));
        assert!(matches!(parse("1/0"), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse("RC(E2, E2)"), Err(Error::Syntax { offset: 9, .. })));
        assert!(matches!(parse("(E2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("E2 E4"), Err(Error::Syntax { offset: 3, .. })));
        assert!(matches!(parse("D E2"), Err(Error::Syntax { offset: 2, .. })));
    }

    #[test]
    fn evaluation() {
        let e2sq = eval_poly("E2^2").unwrap();
        assert_eq!(e2sq, eval_poly("E4 + 12*D(E2)").unwrap());
        assert_eq!(eval_poly("RC(E2, E2, 4)").unwrap(), GradedPoly::delta().scale(&rat(-48)));
        assert!(eval_poly("(E4^3 - E6^2)/1728").is_err());
        assert_eq!(eval_poly("1/1728*(E4^3 - E6^2)").unwrap(), GradedPoly::delta());
        let f = eval_str("0 + E4").unwrap();
        assert_eq!(f.weight(), 4);
        let f = eval_str("E4 - E4").unwrap();
        assert_eq!((f.weight(), f.is_zero()), (4, true));
        assert!(matches!(eval_str("E2 + E4"), Err(Error::Grading(_))));
        assert!(eval_str("RC(1, E4, 1)").is_err());
        assert_eq!(eval_str("D(E2)*E4").unwrap().depth(), 2);
    }

    #[test]
    fn polynomial_display_parses_back() {
        for p in [
            GradedPoly::delta(),
            GradedPoly::e2().derive_n(3),
            &GradedPoly::e2() * &GradedPoly::e4().scale(&rat(-1)),
            GradedPoly::zero(),
        ] {
            assert_eq!(eval_poly(&p.to_string()).unwrap(), p, "{p}");
        }
    }

    #[test]
    fn printing() {
        for s in ["E2 - (E4 - E6)", "-E2^2", "(-3)^2", "-(3)", "E2*(E4*E6)", "(E2^2)^3", "RC(D(E4), E6, 2)", "1/2*E2 + -1"] {
            let e = parse(s).unwrap();
            assert_eq!(parse(&e.to_string()).unwrap(), e, "{s} -> {e}");
        }
        assert_eq!(parse("-(3)").unwrap().to_string(), "-3");
        assert_eq!(parse("E2 - (E4 - E6)").unwrap().to_string(), "E2 - (E4 - E6)");
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            prop_oneof![Just(Generator::E2), Just(Generator::E4), Just(Generator::E6), Just(Generator::Delta)]
                .prop_map(Expr::Gen),
            (-20i64..20, 1i64..6).prop_map(|(p, q)| Expr::Num(ratio(p, q))),
        ];
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                inner.clone().prop_map(Expr::negate),
                (inner.clone(), 0u32..4).prop_map(|(a, e)| Expr::Pow(Box::new(a), e)),
                inner.clone().prop_map(|a| Expr::D(Box::new(a))),
                (inner.clone(), inner, 0u32..3).prop_map(|(a, b, n)| Expr::Rc(Box::new(a), Box::new(b), n)),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let shown = e.to_string();
            prop_assert_eq!(parse(&shown).unwrap(), e);
        }
    }
}
