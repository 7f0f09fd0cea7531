use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{BinOp, Formula, Pred, Term};
use crate::rational::{in_unit, Rational};

/// A parse failure at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyntaxError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at offset {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for SyntaxError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Param(String),
    Int(BigInt),
    Slash,
    LParen,
    RParen,
    Comma,
    Dot,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Param(s) => write!(f, "`@{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let take = |start: usize, pred: &dyn Fn(u8) -> bool| {
        let mut j = start;
        while j < bytes.len() && pred(bytes[j]) {
            j += 1;
        }
        j
    };
    while i < bytes.len() {
        let c = bytes[i];
        let single = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b'.' => Some(Tok::Dot),
            b'/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(t) = single {
            out.push((i, t));
            i += 1;
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let j = take(i, &|b| b.is_ascii_digit());
            out.push((i, Tok::Int(text[i..j].parse().expect("digits"))));
            i = j;
        } else if c.is_ascii_alphabetic() || c == b'_' {
            let j = take(i, &|b| b.is_ascii_alphanumeric() || b == b'_');
            out.push((i, Tok::Ident(text[i..j].to_string())));
            i = j;
        } else if c == b'@' {
            let j = take(i + 1, &|b| b.is_ascii_alphanumeric() || b"_.+/-".contains(&b));
            if j == i + 1 {
                return Err(SyntaxError { pos: i, msg: "empty parameter name".into() });
            }
            out.push((i, Tok::Param(text[i + 1..j].to_string())));
            i = j;
        } else {
            let ch = text[i..].chars().next().expect("in bounds");
            return Err(SyntaxError { pos: i, msg: format!("unexpected character `{ch}`") });
        }
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    /// `Some` when variables must be bound or listed as allowed free names.
    scope: Option<Vec<String>>,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn next(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn fail<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(SyntaxError { pos: self.pos(), msg: msg.into() })
    }

    fn expect(&mut self, want: Tok) -> PResult<()> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            self.fail(format!("expected {want}, found {}", self.peek()))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            t => self.fail(format!("expected {what}, found {t}")),
        }
    }

    fn rational(&mut self) -> PResult<Rational> {
        let start = self.pos();
        let p = match self.next().1 {
            Tok::Int(p) => p,
            t => return Err(SyntaxError { pos: start, msg: format!("expected rational, found {t}") }),
        };
        self.expect(Tok::Slash)?;
        let q = match self.peek().clone() {
            Tok::Int(q) => {
                self.next();
                q
            }
            t => return self.fail(format!("expected denominator, found {t}")),
        };
        if q.is_zero() {
            return Err(SyntaxError { pos: start, msg: "zero denominator".into() });
        }
        let r = Rational::new(p, q);
        if !in_unit(&r) {
            return Err(SyntaxError { pos: start, msg: format!("constant {r} outside [0,1]") });
        }
        Ok(r)
    }

    fn term(&mut self) -> PResult<Term> {
        let pos = self.pos();
        match self.next().1 {
            Tok::Param(p) => Ok(Term::Param(p)),
            Tok::Ident(v) => {
                if let Some(scope) = &self.scope {
                    if !scope.contains(&v) {
                        return Err(SyntaxError { pos, msg: format!("unbound variable `{v}`") });
                    }
                }
                Ok(Term::Var(v))
            }
            t => Err(SyntaxError { pos, msg: format!("expected variable or parameter, found {t}") }),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let start = self.pos();
        match self.peek().clone() {
            Tok::Int(_) => Ok(Formula::Const(self.rational()?)),
            Tok::Ident(kw) => {
                self.next();
                match kw.as_str() {
                    "sup" | "inf" => {
                        let v = self.ident("variable")?;
                        self.expect(Tok::Dot)?;
                        if let Some(scope) = &mut self.scope {
                            scope.push(v.clone());
                        }
                        let body = self.formula()?;
                        if let Some(scope) = &mut self.scope {
                            scope.pop();
                        }
                        Ok(if kw == "sup" { Formula::sup(&v, body) } else { Formula::inf(&v, body) })
                    }
                    "max" | "min" | "plus" | "tsub" | "absdiff" => {
                        let op = match kw.as_str() {
                            "max" => BinOp::Max,
                            "min" => BinOp::Min,
                            "plus" => BinOp::Plus,
                            "tsub" => BinOp::TSub,
                            _ => BinOp::AbsDiff,
                        };
                        self.expect(Tok::LParen)?;
                        let a = self.formula()?;
                        self.expect(Tok::Comma)?;
                        let b = self.formula()?;
                        self.expect(Tok::RParen)?;
                        Ok(Formula::bin(op, a, b))
                    }
                    "scale" => {
                        self.expect(Tok::LParen)?;
                        let c = self.rational()?;
                        self.expect(Tok::Comma)?;
                        let a = self.formula()?;
                        self.expect(Tok::RParen)?;
                        Ok(Formula::scale(c, a))
                    }
                    "mod" => {
                        self.expect(Tok::LParen)?;
                        let name = self.ident("modulus name")?;
                        self.expect(Tok::Comma)?;
                        let a = self.formula()?;
                        self.expect(Tok::RParen)?;
                        Ok(Formula::modulus(&name, a))
                    }
                    "d" | "r" | "dleq" | "dceq" => {
                        let pred = match kw.as_str() {
                            "d" => Pred::D,
                            "r" => Pred::R,
                            "dleq" => Pred::Dleq,
                            _ => Pred::Dceq,
                        };
                        self.expect(Tok::LParen)?;
                        let mut terms = vec![self.term()?];
                        while *self.peek() == Tok::Comma {
                            self.next();
                            terms.push(self.term()?);
                        }
                        self.expect(Tok::RParen)?;
                        if terms.len() != pred.arity() {
                            return Err(SyntaxError {
                                pos: start,
                                msg: format!(
                                    "arity error: `{kw}` takes {} arguments, found {}",
                                    pred.arity(),
                                    terms.len()
                                ),
                            });
                        }
                        Ok(Formula::atom(pred, terms))
                    }
                    _ => Err(SyntaxError { pos: start, msg: format!("unknown keyword `{kw}`") }),
                }
            }
            t => self.fail(format!("expected formula, found {t}")),
        }
    }
}

fn run(text: &str, scope: Option<Vec<String>>) -> PResult<Formula> {
    let mut p = Parser { toks: lex(text)?, at: 0, scope };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.fail(format!("trailing input starting with {}", p.peek()));
    }
    Ok(f)
}

/// Parses a formula; free variables are allowed.
pub fn parse(text: &str) -> Result<Formula, SyntaxError> {
    run(text, None)
}

/// Parses a formula whose free variables must be among `free`.
pub fn parse_with_free(text: &str, free: &[&str]) -> Result<Formula, SyntaxError> {
    run(text, Some(free.iter().map(|s| s.to_string()).collect()))
}

/// Parses a closed formula.
pub fn parse_sentence(text: &str) -> Result<Formula, SyntaxError> {
    parse_with_free(text, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn axiom_one_tree() {
        let f = parse("sup x. sup y. absdiff(d(x,y), plus(r(x,y), r(y,x)))").unwrap();
        let want = Formula::sup(
            "x",
            Formula::sup("y", Formula::absdiff(Formula::d("x", "y"), Formula::plus(Formula::r("x", "y"), Formula::r("y", "x")))),
        );
        assert_eq!(f, want);
        assert_eq!(f.to_string(), "sup x. sup y. absdiff(d(x, y), plus(r(x, y), r(y, x)))");
    }

    #[test]
    fn constants() {
        assert_eq!(parse("0/1").unwrap(), Formula::Const(rat(0, 1)));
        assert_eq!(parse(" 2 / 4 ").unwrap(), Formula::Const(rat(1, 2)));
        assert!(parse("3/2").unwrap_err().msg.contains("outside"));
        assert!(parse("1/0").is_err());
        assert!(parse("scale(5/4, d(x,y))").is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("d(x)").unwrap_err();
        assert!(e.msg.contains("arity"));
        assert_eq!(e.pos, 0);
        let e = parse("max(d(x,y) d(x,y))").unwrap_err();
        assert_eq!(e.pos, 11);
        let e = parse("sup x. d(x, y)").unwrap();
        assert_eq!(e.free_vars().into_iter().collect::<Vec<_>>(), vec!["y".to_string()]);
        let e = parse_sentence("sup x. d(x, y)").unwrap_err();
        assert!(e.msg.contains("unbound"));
        assert_eq!(e.pos, 12);
        assert!(parse("foo(x)").is_err());
        assert!(parse("d(x,y) extra").is_err());
        assert!(parse("d(x,#)").is_err());
    }

    #[test]
    fn params_and_mods() {
        let f = parse_with_free("mod(alpha_1, r(x, @p0))", &["x"]).unwrap();
        assert_eq!(f.to_string(), "mod(alpha_1, r(x, @p0))");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
        assert!(f.is_quantifier_free());
    }
}
