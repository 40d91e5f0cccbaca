//! Infix parser.
//!
//! Precedence, tightest first: `^` (integer literal exponent), unary `-`,
//! `*` `/`, `+` `-`. Binary operators are left associative.

use num_rational::Rational64;
use thiserror::Error;

use super::Expr;
use crate::scalar::Func;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedEnd,
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnknownIdentifier(String),
    UnknownFunction(String),
    BadNumber(String),
    BadExponent,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ParseErrorKind::UnexpectedEnd => write!(f, "unexpected end of input"),
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character `{c}`"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected `{t}`"),
            ParseErrorKind::UnknownIdentifier(n) => write!(f, "unknown identifier `{n}`"),
            ParseErrorKind::UnknownFunction(n) => write!(f, "unknown function `{n}`"),
            ParseErrorKind::BadNumber(s) => write!(f, "malformed number `{s}`"),
            ParseErrorKind::BadExponent => {
                write!(f, "`^` needs a non-negative integer literal exponent")
            }
        }
    }
}

/// Syntax error at a byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Float(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn text(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Float(x) => x.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' | '.' => {
                let mut j = i;
                let mut is_float = false;
                while j < bytes.len() && (bytes[j].is_ascii_digit() || bytes[j] == b'.') {
                    is_float |= bytes[j] == b'.';
                    j += 1;
                }
                if j < bytes.len() && (bytes[j] == b'e' || bytes[j] == b'E') {
                    let mut k = j + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        j = k;
                        is_float = true;
                    }
                }
                let s = &text[i..j];
                i = j;
                let bad = || ParseError {
                    offset: start,
                    kind: ParseErrorKind::BadNumber(s.to_string()),
                };
                let tok = if is_float {
                    Tok::Float(s.parse().map_err(|_| bad())?)
                } else {
                    Tok::Int(s.parse().map_err(|_| bad())?)
                };
                out.push((start, tok));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < bytes.len() && (bytes[j].is_ascii_alphanumeric() || bytes[j] == b'_') {
                    j += 1;
                }
                let s = text[i..j].to_string();
                i = j;
                out.push((start, Tok::Ident(s)));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or(c);
                return Err(ParseError {
                    offset: start,
                    kind: ParseErrorKind::UnexpectedChar(ch),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    vars: &'a [&'a str],
    params: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn error_here(&self) -> ParseError {
        ParseError {
            offset: self.offset(),
            kind: match self.peek() {
                None => ParseErrorKind::UnexpectedEnd,
                Some(t) => ParseErrorKind::UnexpectedToken(t.text()),
            },
        }
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error_here())
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    lhs = lhs + self.product()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    lhs = lhs - self.product()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    lhs = lhs * self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    lhs = lhs / self.unary()?;
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let mut base = self.primary()?;
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let at = self.offset();
            match self.bump() {
                Some(Tok::Int(n)) if (0..=u32::MAX as i64).contains(&n) => {
                    base = base.pow(n as u32);
                }
                None => {
                    return Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::UnexpectedEnd,
                    })
                }
                Some(_) => {
                    return Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::BadExponent,
                    })
                }
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(Expr::from_rational(Rational64::from_integer(n)))
            }
            Some(Tok::Float(x)) => {
                self.pos += 1;
                Ok(Expr::float(x))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if self.peek() == Some(&Tok::LParen) {
                    let f = Func::from_name(&name).ok_or(ParseError {
                        offset: at,
                        kind: ParseErrorKind::UnknownFunction(name.clone()),
                    })?;
                    self.pos += 1;
                    let arg = self.sum()?;
                    self.expect(Tok::RParen)?;
                    return Ok(Expr::call(f, arg));
                }
                if self.vars.contains(&name.as_str()) {
                    Ok(Expr::var(&name))
                } else if self.params.contains(&name.as_str()) {
                    Ok(Expr::param(&name))
                } else {
                    Err(ParseError {
                        offset: at,
                        kind: ParseErrorKind::UnknownIdentifier(name),
                    })
                }
            }
            _ => Err(self.error_here()),
        }
    }
}

/// Parses `text` against the declared variable and parameter names.
pub fn parse(text: &str, vars: &[&str], params: &[&str]) -> Result<Expr, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        end: text.len(),
        vars,
        params,
    };
    let e = p.sum()?;
    if p.pos < p.toks.len() {
        return Err(p.error_here());
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{probabilistic_equal, Binding, Domain, Node, DEFAULT_SEED};

    const VARS: &[&str] = &["t", "q1", "p1"];

    #[test]
    fn power_then_divide() {
        let e = parse("p1^2/2", VARS, &[]).unwrap();
        assert!(matches!(e.node(), Node::Div(_, _)));
        assert_eq!(e.evaluate(&Binding::new().with("p1", 2.0)).unwrap(), 2.0);
    }

    #[test]
    fn trailing_operator_reports_end_offset() {
        let err = parse("q1 +", VARS, &[]).unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.kind, ParseErrorKind::UnexpectedEnd);
    }

    #[test]
    fn unknown_identifier() {
        let err = parse("q1 + zz", VARS, &["k"]).unwrap_err();
        assert_eq!(err.offset, 5);
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("zz".into()));
        assert!(parse("k*q1", VARS, &["k"]).is_ok());
    }

    #[test]
    fn exponent_must_be_integer_literal() {
        let err = parse("q1^p1", VARS, &[]).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::BadExponent);
        assert_eq!(err.offset, 3);
        assert!(parse("q1^1.5", VARS, &[]).is_err());
        assert!(parse("q1^-2", VARS, &[]).is_err());
    }

    #[test]
    fn precedence_of_unary_minus() {
        // -q1^2 is -(q1^2); 2*-q1 is accepted.
        let b = Binding::new().with("q1", 3.0);
        assert_eq!(
            parse("-q1^2", VARS, &[]).unwrap().evaluate(&b).unwrap(),
            -9.0
        );
        assert_eq!(
            parse("2*-q1", VARS, &[]).unwrap().evaluate(&b).unwrap(),
            -6.0
        );
        assert_eq!(
            parse("2-3-4", VARS, &[]).unwrap().as_rational().unwrap(),
            (-5).into()
        );
        assert_eq!(
            parse("8/4/2", VARS, &[]).unwrap().as_rational().unwrap(),
            1.into()
        );
    }

    #[test]
    fn float_literals() {
        let e = parse("1.5e-3*q1 + .5", VARS, &[]).unwrap();
        let v: f64 = e.evaluate(&Binding::new().with("q1", 1000.0)).unwrap();
        assert!((v - 2.0).abs() < 1e-15);
    }

    #[test]
    fn unbalanced_and_stray_tokens() {
        assert_eq!(parse("(q1", VARS, &[]).unwrap_err().offset, 3);
        assert_eq!(parse("q1)", VARS, &[]).unwrap_err().offset, 2);
        assert_eq!(
            parse("q1 # 2", VARS, &[]).unwrap_err().kind,
            ParseErrorKind::UnexpectedChar('#')
        );
        assert_eq!(
            parse("foo(q1)", VARS, &[]).unwrap_err().kind,
            ParseErrorKind::UnknownFunction("foo".into())
        );
    }

    #[test]
    fn render_round_trip() {
        let params = ["k"];
        let all: Vec<&str> = VARS.to_vec();
        let domain = Domain::new()
            .range("t", 0.0, 3.0)
            .range("q1", -2.0, 2.0)
            .range("p1", -2.0, 2.0)
            .fixed("k", 0.7);
        for src in [
            "exp(-k*t)*p1^2/2",
            "-(q1 - p1)^3 / (2 + q1^2) - 1.25e-2*sin(t)*cos(q1)",
            "ln(2 + q1^2) - -p1",
            "(-3)^2 - 1/3*q1",
        ] {
            let e = parse(src, &all, &params).unwrap();
            let again = parse(&e.to_string(), &all, &params).unwrap();
            assert!(
                probabilistic_equal(&e, &again, &domain, 32, 1e-14, DEFAULT_SEED).unwrap(),
                "{src} -> {e}"
            );
        }
    }
}
