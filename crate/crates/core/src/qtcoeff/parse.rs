//! The canonical scalar grammar used in cache files and reports.
//!
//! Formatting: integer coefficients, `*` for products, `^` for powers,
//! monomials ascending by (q-degree, t-degree), fractions as
//! `(<num>)/(<den>)` with a denominator of `1` omitted. Parsing accepts
//! general +,-,*,/,^ expressions in q and t and reduces to canonical form,
//! so `format . parse` and `parse . format` are identities on canonical
//! strings.

use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed};

use crate::error::{Error, Result};

use super::poly::QtPoly;
use super::rat::QtRat;

fn monomial_string(q_exp: u32, t_exp: u32) -> String {
    let mut parts = Vec::new();
    match q_exp {
        0 => {}
        1 => parts.push("q".to_string()),
        e => parts.push(format!("q^{}", e)),
    }
    match t_exp {
        0 => {}
        1 => parts.push("t".to_string()),
        e => parts.push(format!("t^{}", e)),
    }
    parts.join("*")
}

fn coeff_string(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn format_poly(p: &QtPoly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (&(a, b), c)) in p.canonical_terms().into_iter().enumerate() {
        let neg = c.is_negative();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else if neg {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mag = c.abs();
        let mono = monomial_string(a, b);
        if mono.is_empty() {
            out.push_str(&coeff_string(&mag));
        } else if mag.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&coeff_string(&mag));
            out.push('*');
            out.push_str(&mono);
        }
    }
    out
}

pub fn format_rat(r: &QtRat) -> String {
    if r.den().is_one() {
        format_poly(r.num())
    } else {
        format!("({})/({})", format_poly(r.num()), format_poly(r.den()))
    }
}

impl fmt::Display for QtPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self))
    }
}

impl fmt::Display for QtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rat(self))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Q,
    T,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    /// Next token and its starting byte offset; `None` at end of input.
    fn next(&mut self) -> Result<Option<(Tok, usize)>> {
        self.skip_ws();
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'q' => Tok::Q,
            b't' => Tok::T,
            b'0'..=b'9' => {
                let mut end = self.pos;
                while end < self.src.len() && self.src[end].is_ascii_digit() {
                    end += 1;
                }
                let digits = std::str::from_utf8(&self.src[self.pos..end]).unwrap();
                let n = BigInt::from_str(digits).map_err(|e| Error::Parse {
                    pos: start,
                    msg: e.to_string(),
                })?;
                self.pos = end;
                return Ok(Some((Tok::Int(n), start)));
            }
            other => {
                return Err(Error::Parse {
                    pos: start,
                    msg: format!("unexpected character {:?}", other as char),
                })
            }
        };
        self.pos += 1;
        Ok(Some((tok, start)))
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks
            .get(self.idx)
            .map(|(_, p)| *p)
            .unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _)| t.clone());
        self.idx += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(Error::Parse {
                pos,
                msg: format!("expected {}, found {:?}", what, t),
            }),
            None => Err(Error::Parse {
                pos,
                msg: format!("expected {}, found end of input", what),
            }),
        }
    }

    fn parse_expr(&mut self) -> Result<QtRat> {
        let mut acc = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = &acc + &rhs;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    acc = &acc - &rhs;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_term(&mut self) -> Result<QtRat> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    acc = &acc * &rhs;
                }
                Some(Tok::Slash) => {
                    let pos = self.pos();
                    self.bump();
                    let rhs = self.parse_factor()?;
                    acc = acc.checked_div(&rhs).map_err(|_| Error::Parse {
                        pos,
                        msg: "division by zero".to_string(),
                    })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<QtRat> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            let inner = self.parse_factor()?;
            return Ok(-&inner);
        }
        let base = self.parse_base()?;
        if let Some(Tok::Caret) = self.peek() {
            let pos = self.pos();
            self.bump();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().map_err(|_| Error::Parse {
                        pos,
                        msg: "exponent out of range".to_string(),
                    })?;
                    return base.pow(e as i64).map_err(|_| Error::Parse {
                        pos,
                        msg: "cannot raise zero to a negative power".to_string(),
                    });
                }
                _ => {
                    return Err(Error::Parse {
                        pos,
                        msg: "expected integer exponent after ^".to_string(),
                    })
                }
            }
        }
        Ok(base)
    }

    fn parse_base(&mut self) -> Result<QtRat> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => Ok(QtRat::from_poly(QtPoly::constant(
                BigRational::from_integer(n),
            ))),
            Some(Tok::Q) => Ok(QtRat::q()),
            Some(Tok::T) => Ok(QtRat::t()),
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(Tok::RParen, "closing parenthesis")?;
                Ok(inner)
            }
            Some(t) => Err(Error::Parse {
                pos,
                msg: format!("unexpected token {:?}", t),
            }),
            None => Err(Error::Parse {
                pos,
                msg: "unexpected end of input".to_string(),
            }),
        }
    }
}

pub fn parse_rat(s: &str) -> Result<QtRat> {
    let mut lexer = Lexer::new(s);
    let mut toks = Vec::new();
    while let Some(tok) = lexer.next()? {
        toks.push(tok);
    }
    let mut p = Parser {
        toks,
        idx: 0,
        end: s.len(),
    };
    let value = p.parse_expr()?;
    if p.idx < p.toks.len() {
        return Err(Error::Parse {
            pos: p.pos(),
            msg: "trailing input".to_string(),
        });
    }
    Ok(value)
}

impl FromStr for QtRat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_rat(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_instances() {
        // QtRat(1 + q t^2, 1 - q) formats per the grammar
        let r: QtRat = "(1 + q*t^2)/(1 - q)".parse().unwrap();
        assert_eq!(format_rat(&r), "(1 + q*t^2)/(1 - q)");
        let q: QtRat = "q".parse().unwrap();
        assert_eq!(q, QtRat::q());
        assert_eq!(format_rat(&q), "q");
    }

    #[test]
    fn unbalanced_paren_reports_position() {
        let err = parse_rat("(1 - q").unwrap_err();
        match err {
            Error::Parse { pos, .. } => assert_eq!(pos, 6),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn round_trips() {
        for s in [
            "0",
            "1",
            "-1",
            "q",
            "-q + t",
            "2*q*t^3",
            "1 - q - t + q*t",
            "(1)/(1 - q)",
            "(-1 + t^2)/(q^2)",
            "(2 - q - t)/((1 - q)*(1 - t))",
        ] {
            let r = parse_rat(s).unwrap();
            let back = parse_rat(&format_rat(&r)).unwrap();
            assert_eq!(r, back, "value round trip for {s}");
        }
        // format . parse is the identity on canonical strings
        for s in ["(2 - q - t)/(1 - q)", "-2*q + t^2", "(q*t)/(1 - q*t)"] {
            assert_eq!(format_rat(&parse_rat(s).unwrap()), s);
        }
    }

    #[test]
    fn negative_monomial_formats_with_leading_minus() {
        let r = parse_rat("-q*t").unwrap();
        assert_eq!(format_rat(&r), "-q*t");
    }
}
