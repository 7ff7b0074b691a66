//! Polynomial file grammar.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' integer)?
//! atom  := integer ('/' integer)? | ident | 'pi2' | 'sqrt' '(' rational ')' | '(' expr ')'
//! ```
//!
//! Rationals are `p/q`, never decimals. `#` starts a comment. Expressions
//! evaluate exactly; all square roots in one expression must lie in a single
//! quadratic field and the result must have degree at most 2 in `pi2`.

use hotspots_core::exactq::{format_rational, int, parse_rational, rational_sqrt, BigRational, Surd};
use hotspots_core::poly::QPoly;
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("at offset {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos, msg: &str| ParseError { pos, msg: msg.into() };
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c == '#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            // p/q is one literal; there is no division operator
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            if j < bytes.len() && bytes[j] == b'/' {
                j += 1;
                while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                    j += 1;
                }
                if j >= bytes.len() || !bytes[j].is_ascii_digit() {
                    return Err(err(j, "expected denominator after '/'"));
                }
                while j < bytes.len() && bytes[j].is_ascii_digit() {
                    j += 1;
                }
                i = j;
            }
            if i < bytes.len() && bytes[i] == b'.' {
                return Err(err(i, "decimals are not allowed; write p/q"));
            }
            let text: String = src[start..i].chars().filter(|c| !c.is_whitespace()).collect();
            let v = parse_rational(&text).map_err(|e| err(start, &e.to_string()))?;
            out.push((start, Tok::Num(v)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(err(i, &format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    vars: [&'a str; 2],
    field: Option<BigRational>,
}

fn pi_degree(p: &QPoly) -> usize {
    let (nx, ny) = p.shape();
    (0..nx)
        .flat_map(|i| (0..ny).map(move |j| (i, j)))
        .map(|(i, j)| p.coeff(i, j).degree())
        .max()
        .unwrap_or(0)
}

impl<'a> Parser<'a> {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn fail<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos(), msg: msg.into() })
    }

    fn peek_op(&self, c: char) -> bool {
        matches!(self.toks.get(self.at), Some((_, Tok::Op(o))) if *o == c)
    }

    fn expect_op(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek_op(c) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.peek_op('+') {
                self.at += 1;
                acc = &acc + &self.term()?;
            } else if self.peek_op('-') {
                self.at += 1;
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<QPoly, ParseError> {
        let mut acc = self.unary()?;
        while self.peek_op('*') {
            self.at += 1;
            let pos = self.pos();
            let rhs = self.unary()?;
            if pi_degree(&acc) + pi_degree(&rhs) > 2 {
                return Err(ParseError { pos, msg: "degree in pi2 exceeds 2".into() });
            }
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<QPoly, ParseError> {
        if self.peek_op('-') {
            self.at += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<QPoly, ParseError> {
        let base = self.atom()?;
        if !self.peek_op('^') {
            return Ok(base);
        }
        self.at += 1;
        let k = match self.toks.get(self.at) {
            Some((_, Tok::Num(v))) if v.is_integer() && !v.is_negative() => v.to_integer(),
            _ => return self.fail("exponent must be a nonnegative integer"),
        };
        let k: u32 = match u32::try_from(&k) {
            Ok(k) if k <= 64 => k,
            _ => return self.fail("exponent too large"),
        };
        if pi_degree(&base) * k as usize > 2 {
            return self.fail("degree in pi2 exceeds 2");
        }
        self.at += 1;
        Ok(base.pow(k))
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let neg = self.peek_op('-');
        if neg {
            self.at += 1;
        }
        match self.toks.get(self.at).cloned() {
            Some((_, Tok::Num(v))) => {
                self.at += 1;
                Ok(if neg { -v } else { v })
            }
            _ => self.fail("expected a rational"),
        }
    }

    fn sqrt(&mut self) -> Result<QPoly, ParseError> {
        self.expect_op('(')?;
        let pos = self.pos();
        let d = self.rational()?;
        self.expect_op(')')?;
        let err = |msg: &str| ParseError { pos, msg: msg.into() };
        if d.is_negative() {
            return Err(err("square root of a negative number"));
        }
        if rational_sqrt(&d).is_none() {
            match &self.field {
                None => self.field = Some(d.clone()),
                Some(f) => {
                    if rational_sqrt(&(&d / f)).is_none() {
                        return Err(err("square roots from different quadratic fields"));
                    }
                }
            }
        }
        let s = Surd::sqrt(d).map_err(|e| err(&e.to_string()))?;
        Ok(QPoly::surd(s, self.vars))
    }

    fn atom(&mut self) -> Result<QPoly, ParseError> {
        let Some((_, tok)) = self.toks.get(self.at).cloned() else {
            return self.fail("unexpected end of input");
        };
        self.at += 1;
        match tok {
            Tok::Num(v) => Ok(QPoly::rat(v, self.vars)),
            Tok::Op('(') => {
                let e = self.expr()?;
                self.expect_op(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "pi2" => Ok(QPoly::pi2(self.vars)),
            Tok::Ident(name) if name == "sqrt" => self.sqrt(),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(idx) => Ok(QPoly::var(idx, self.vars)),
                None => {
                    self.at -= 1;
                    self.fail(format!("unknown variable {name:?} (expected {} or {})", self.vars[0], self.vars[1]))
                }
            },
            Tok::Op(c) => {
                self.at -= 1;
                self.fail(format!("unexpected '{c}'"))
            }
        }
    }
}

/// Parses `src` as an exact polynomial in the two named variables.
pub fn parse_poly(src: &str, vars: [&str; 2]) -> Result<QPoly, ParseError> {
    for v in vars {
        if v == "pi2" || v == "sqrt" || !v.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_') {
            return Err(ParseError { pos: 0, msg: format!("invalid variable name {v:?}") });
        }
    }
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser {
        toks,
        at: 0,
        end: src.len(),
        vars,
        field: None,
    };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return p.fail("trailing input");
    }
    Ok(out)
}

fn lit(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format_rational(v)
    }
}

fn push_term(out: &mut String, coef: &BigRational, factors: &[String]) {
    if coef.is_zero() {
        return;
    }
    let mag = coef.abs();
    if out.is_empty() {
        if coef.is_negative() {
            out.push('-');
        }
    } else {
        out.push_str(if coef.is_negative() { " - " } else { " + " });
    }
    let one = mag == int(1);
    if !one || factors.is_empty() {
        out.push_str(&lit(&mag));
    }
    for (k, f) in factors.iter().enumerate() {
        if k > 0 || !one {
            out.push('*');
        }
        out.push_str(f);
    }
}

/// Prints in the grammar accepted by [`parse_poly`]; the output reparses to
/// an equal polynomial.
pub fn print_poly(p: &QPoly) -> String {
    let vars = p.vars();
    let (nx, ny) = p.shape();
    let mut out = String::new();
    for i in 0..nx {
        for j in 0..ny {
            let c = p.coeff(i, j);
            let mut mono = Vec::new();
            for (name, e) in [(vars[0], i), (vars[1], j)] {
                match e {
                    0 => {}
                    1 => mono.push(name.to_string()),
                    _ => mono.push(format!("{name}^{e}")),
                }
            }
            for (k, s) in c.coeffs().iter().enumerate() {
                let mut pre = Vec::new();
                match k {
                    0 => {}
                    1 => pre.push("pi2".to_string()),
                    _ => pre.push("pi2^2".to_string()),
                }
                let base: Vec<String> = pre.iter().chain(&mono).cloned().collect();
                push_term(&mut out, s.rational(), &base);
                if !s.irrational().is_zero() {
                    let with_root: Vec<String> = std::iter::once(format!("sqrt({})", lit(s.radicand())))
                        .chain(base)
                        .collect();
                    push_term(&mut out, s.irrational(), &with_root);
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Whether every coefficient is rational.
pub fn is_rational(p: &QPoly) -> bool {
    let (nx, ny) = p.shape();
    (0..nx).all(|i| (0..ny).all(|j| p.coeff(i, j).is_rational()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hotspots_core::exactq::{rat, PiQuad};

    const V: [&str; 2] = ["x", "y"];

    #[test]
    fn basic_forms() {
        let p = parse_poly("x - 1", V).unwrap();
        assert_eq!(p.coeff(1, 0), PiQuad::from_rational(int(1)));
        assert_eq!(p.coeff(0, 0), PiQuad::from_rational(int(-1)));
        let q = parse_poly("-1/2 + 0*x", V).unwrap();
        assert_eq!(q.coeff(0, 0), PiQuad::from_rational(rat(-1, 2)));
        let r = parse_poly("(x + y)^2 - x^2 - y^2", V).unwrap();
        assert_eq!(print_poly(&r), "2*x*y");
        assert_eq!(print_poly(&parse_poly("sqrt(12) * sqrt(3)", V).unwrap()), "6");
        assert_eq!(print_poly(&parse_poly("-x^2", V).unwrap()), "-x^2");
    }

    #[test]
    fn pi_and_surd() {
        let p = parse_poly("pi2*x - 3/4*sqrt(3)*y + pi2^2", V).unwrap();
        let s = print_poly(&p);
        assert_eq!(parse_poly(&s, V).unwrap(), p);
        assert!(!is_rational(&p));
    }

    #[test]
    fn errors() {
        for bad in [
            "x +",
            "1.5*x",
            "z",
            "sqrt(2)*sqrt(3)",
            "pi2^3",
            "pi2*pi2*pi2",
            "(x",
            "x y",
            "sqrt(-1)",
            "2^x",
            "",
            "1/0",
        ] {
            assert!(parse_poly(bad, V).is_err(), "{bad:?} parsed");
        }
        assert!(parse_poly("sqrt(2)*sqrt(8)", V).is_ok());
    }

    #[test]
    fn comments_and_layout() {
        let p = parse_poly("# header\n x^2 # square\n - 1 / 3\n", V).unwrap();
        assert_eq!(print_poly(&p), "-1/3 + x^2");
    }
}
