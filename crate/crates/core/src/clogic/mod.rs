//! Continuous-logic formulas over the signature `{d, r, dleq, dceq}`.
//!
//! ```text
//! F ::= sup VAR . F | inf VAR . F
//!     | max(F,F) | min(F,F) | plus(F,F) | tsub(F,F) | absdiff(F,F)
//!     | scale(RAT,F) | mod(NAME,F) | ATOM | RAT
//! ATOM ::= d(T,T) | r(T,T) | dleq(T,T) | dceq(T,T,T)
//! T ::= VAR | @NAME
//! ```

mod eval;
mod modmap;
mod parse;
mod theory;

use std::collections::BTreeSet;
use std::fmt;

use crate::rational::{fmt_rat, Rational};

pub use eval::{evaluate, qf_equiv_defect, Evaluator, Model};
pub use modmap::{ModMap, ModTable, StepMap};
pub use parse::{parse, parse_sentence, parse_with_free, SyntaxError};
pub use theory::{check_theory, theory_by_name, SentenceResult, Theory, TheoryReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pred {
    D,
    R,
    Dleq,
    Dceq,
}

impl Pred {
    pub fn arity(self) -> usize {
        match self {
            Pred::Dceq => 3,
            _ => 2,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Pred::D => "d",
            Pred::R => "r",
            Pred::Dleq => "dleq",
            Pred::Dceq => "dceq",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Param(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Max,
    Min,
    /// `min(a + b, 1)`
    Plus,
    /// `max(a - b, 0)`
    TSub,
    AbsDiff,
}

impl BinOp {
    pub fn keyword(self) -> &'static str {
        match self {
            BinOp::Max => "max",
            BinOp::Min => "min",
            BinOp::Plus => "plus",
            BinOp::TSub => "tsub",
            BinOp::AbsDiff => "absdiff",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(Rational),
    Atom(Pred, Vec<Term>),
    Bin(BinOp, Box<Formula>, Box<Formula>),
    Scale(Rational, Box<Formula>),
    Mod(String, Box<Formula>),
    Sup(String, Box<Formula>),
    Inf(String, Box<Formula>),
}

fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

impl Formula {
    pub fn constant(c: Rational) -> Formula {
        Formula::Const(c)
    }

    pub fn atom(p: Pred, terms: Vec<Term>) -> Formula {
        Formula::Atom(p, terms)
    }

    /// `d(x, y)` for variables `x`, `y`.
    pub fn d(x: &str, y: &str) -> Formula {
        Formula::Atom(Pred::D, vec![var(x), var(y)])
    }

    /// `r(x, y)` for variables `x`, `y`.
    pub fn r(x: &str, y: &str) -> Formula {
        Formula::Atom(Pred::R, vec![var(x), var(y)])
    }

    pub fn bin(op: BinOp, a: Formula, b: Formula) -> Formula {
        Formula::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn max(a: Formula, b: Formula) -> Formula {
        Formula::bin(BinOp::Max, a, b)
    }

    pub fn min(a: Formula, b: Formula) -> Formula {
        Formula::bin(BinOp::Min, a, b)
    }

    pub fn plus(a: Formula, b: Formula) -> Formula {
        Formula::bin(BinOp::Plus, a, b)
    }

    pub fn tsub(a: Formula, b: Formula) -> Formula {
        Formula::bin(BinOp::TSub, a, b)
    }

    pub fn absdiff(a: Formula, b: Formula) -> Formula {
        Formula::bin(BinOp::AbsDiff, a, b)
    }

    pub fn scale(c: Rational, a: Formula) -> Formula {
        Formula::Scale(c, Box::new(a))
    }

    pub fn modulus(name: &str, a: Formula) -> Formula {
        Formula::Mod(name.to_string(), Box::new(a))
    }

    pub fn sup(v: &str, body: Formula) -> Formula {
        Formula::Sup(v.to_string(), Box::new(body))
    }

    pub fn inf(v: &str, body: Formula) -> Formula {
        Formula::Inf(v.to_string(), Box::new(body))
    }

    /// Free variables in sorted order.
    pub fn free_vars(&self) -> BTreeSet<String> {
        fn walk(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Const(_) => {}
                Formula::Atom(_, terms) => {
                    for t in terms {
                        if let Term::Var(v) = t {
                            if !bound.contains(v) {
                                out.insert(v.clone());
                            }
                        }
                    }
                }
                Formula::Bin(_, a, b) => {
                    walk(a, bound, out);
                    walk(b, bound, out);
                }
                Formula::Scale(_, a) | Formula::Mod(_, a) => walk(a, bound, out),
                Formula::Sup(v, a) | Formula::Inf(v, a) => {
                    bound.push(v.clone());
                    walk(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        walk(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Const(_) | Formula::Atom(..) => true,
            Formula::Bin(_, a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Scale(_, a) | Formula::Mod(_, a) => a.is_quantifier_free(),
            Formula::Sup(..) | Formula::Inf(..) => false,
        }
    }

    /// Predicates occurring in the formula.
    pub fn predicates(&self) -> BTreeSet<&'static str> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p, _) = f {
                out.insert(p.keyword());
            }
        });
        out
    }

    /// Names of modulus maps referenced by `mod(...)`.
    pub fn mod_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Mod(n, _) = f {
                out.insert(n.clone());
            }
        });
        out
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.visit(&mut |_| n += 1);
        n
    }

    fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Const(_) | Formula::Atom(..) => {}
            Formula::Bin(_, a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Scale(_, a) | Formula::Mod(_, a) | Formula::Sup(_, a) | Formula::Inf(_, a) => a.visit(f),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Param(p) => write!(f, "@{p}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(c) => write!(f, "{}", fmt_rat(c)),
            Formula::Atom(p, terms) => {
                write!(f, "{}(", p.keyword())?;
                for (i, t) in terms.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Formula::Bin(op, a, b) => write!(f, "{}({a}, {b})", op.keyword()),
            Formula::Scale(c, a) => write!(f, "scale({}, {a})", fmt_rat(c)),
            Formula::Mod(n, a) => write!(f, "mod({n}, {a})"),
            Formula::Sup(v, a) => write!(f, "sup {v}. {a}"),
            Formula::Inf(v, a) => write!(f, "inf {v}. {a}"),
        }
    }
}
