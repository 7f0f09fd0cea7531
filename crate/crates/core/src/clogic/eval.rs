use num_traits::{One, Zero};

use super::{BinOp, Formula, ModMap, ModTable, Pred, Term};
use crate::cyclic::FiniteCyclicOrder;
use crate::error::{Error, Result};
use crate::metric::MetricSpace;
use crate::order::FiniteMetricOrder;
use crate::rational::{absdiff, tsub, Rational};

/// A structure formulas are evaluated in.
#[derive(Debug, Clone, Copy)]
pub enum Model<'a> {
    Linear(&'a FiniteMetricOrder),
    Cyclic(&'a FiniteCyclicOrder),
}

impl<'a> Model<'a> {
    pub fn len(&self) -> usize {
        match self {
            Model::Linear(m) => m.len(),
            Model::Cyclic(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        match self {
            Model::Linear(m) => m.index_of(name),
            Model::Cyclic(c) => c.index_of(name),
        }
    }
}

impl<'a> From<&'a FiniteMetricOrder> for Model<'a> {
    fn from(m: &'a FiniteMetricOrder) -> Self {
        Model::Linear(m)
    }
}

impl<'a> From<&'a FiniteCyclicOrder> for Model<'a> {
    fn from(c: &'a FiniteCyclicOrder) -> Self {
        Model::Cyclic(c)
    }
}

/// Precomputed atom values, row-major.
struct Tables {
    n: usize,
    d: Vec<Rational>,
    d_delta: Vec<Rational>,
    ray: Vec<Rational>,
    d_leq: Vec<Rational>,
    ceq: Vec<bool>,
}

impl Tables {
    fn build(model: Model<'_>) -> Self {
        let n = model.len();
        let pairs = || (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)));
        let (d, d_delta): (Vec<Rational>, Vec<Rational>) = match model {
            Model::Linear(m) => (pairs().map(|(i, j)| m.d(i, j).clone()).collect(), pairs().map(|(i, j)| m.d_delta(i, j)).collect()),
            Model::Cyclic(c) => (pairs().map(|(i, j)| c.d(i, j).clone()).collect(), pairs().map(|(i, j)| c.d_delta(i, j)).collect()),
        };
        let mut t = Tables { n, d, d_delta, ray: Vec::new(), d_leq: Vec::new(), ceq: Vec::new() };
        match model {
            Model::Linear(m) => {
                t.ray = pairs().map(|(i, j)| m.ray(i, j)).collect();
                t.d_leq = pairs().map(|(i, j)| if i <= j { Rational::zero() } else { t.d_delta[i * n + j].clone() }).collect();
            }
            Model::Cyclic(c) => {
                t.ceq = (0..n * n * n).map(|k| c.ceq(k / (n * n), (k / n) % n, k % n)).collect();
            }
        }
        t
    }
}

#[derive(Debug, Clone, Copy)]
enum Slot {
    Var(usize),
    Point(usize),
}

enum Node<'m> {
    Const(Rational),
    Atom(Pred, [Slot; 3]),
    Bin(BinOp, Box<Node<'m>>, Box<Node<'m>>),
    Scale(Rational, Box<Node<'m>>),
    Mod(&'m ModMap, Box<Node<'m>>),
    Quant { sup: bool, slot: usize, body: Box<Node<'m>> },
}

/// Evaluates formulas in a fixed structure with a fixed modulus table.
pub struct Evaluator<'a> {
    model: Model<'a>,
    mods: &'a ModTable,
    tables: Tables,
}

static EMPTY_MODS: std::sync::OnceLock<ModTable> = std::sync::OnceLock::new();

impl<'a> Evaluator<'a> {
    pub fn new(model: impl Into<Model<'a>>, mods: &'a ModTable) -> Self {
        let model = model.into();
        Evaluator { model, mods, tables: Tables::build(model) }
    }

    /// An evaluator with no modulus maps.
    pub fn plain(model: impl Into<Model<'a>>) -> Self {
        Self::new(model, EMPTY_MODS.get_or_init(ModTable::new))
    }

    pub fn model(&self) -> Model<'a> {
        self.model
    }

    fn compile(&self, f: &Formula, scope: &mut Vec<String>) -> Result<Node<'a>> {
        Ok(match f {
            Formula::Const(c) => Node::Const(c.clone()),
            Formula::Atom(p, terms) => {
                match (p, self.model) {
                    (Pred::R | Pred::Dleq, Model::Cyclic(_)) => {
                        return Err(Error::Eval(format!("`{}` needs a linear order", p.keyword())))
                    }
                    (Pred::Dceq, Model::Linear(_)) => return Err(Error::Eval("`dceq` needs a cyclic order".into())),
                    _ => {}
                }
                if terms.len() != p.arity() {
                    return Err(Error::Eval(format!("`{}` takes {} arguments", p.keyword(), p.arity())));
                }
                let mut slots = [Slot::Point(0); 3];
                for (slot, t) in slots.iter_mut().zip(terms) {
                    *slot = match t {
                        Term::Param(name) => Slot::Point(self.model.index_of(name)?),
                        Term::Var(v) => Slot::Var(
                            scope
                                .iter()
                                .rposition(|s| s == v)
                                .ok_or_else(|| Error::Eval(format!("unbound variable `{v}`")))?,
                        ),
                    };
                }
                Node::Atom(*p, slots)
            }
            Formula::Bin(op, a, b) => Node::Bin(*op, Box::new(self.compile(a, scope)?), Box::new(self.compile(b, scope)?)),
            Formula::Scale(c, a) => Node::Scale(c.clone(), Box::new(self.compile(a, scope)?)),
            Formula::Mod(name, a) => {
                let map = self.mods.get(name).ok_or_else(|| Error::Eval(format!("unknown modulus `{name}`")))?;
                Node::Mod(map, Box::new(self.compile(a, scope)?))
            }
            Formula::Sup(v, a) | Formula::Inf(v, a) => {
                scope.push(v.clone());
                let body = self.compile(a, scope);
                scope.pop();
                Node::Quant { sup: matches!(f, Formula::Sup(..)), slot: scope.len(), body: Box::new(body?) }
            }
        })
    }

    fn run(&self, node: &Node<'_>, vals: &mut Vec<usize>) -> Rational {
        let t = &self.tables;
        match node {
            Node::Const(c) => c.clone(),
            Node::Atom(p, slots) => {
                let at = |s: Slot| match s {
                    Slot::Var(k) => vals[k],
                    Slot::Point(i) => i,
                };
                let (x, y) = (at(slots[0]), at(slots[1]));
                match p {
                    Pred::D => t.d[x * t.n + y].clone(),
                    Pred::R => t.ray[x * t.n + y].clone(),
                    Pred::Dleq => t.d_leq[x * t.n + y].clone(),
                    Pred::Dceq => {
                        let z = at(slots[2]);
                        if t.ceq[(x * t.n + y) * t.n + z] {
                            Rational::zero()
                        } else {
                            let dd = |a: usize, b: usize| &t.d_delta[a * t.n + b];
                            dd(x, y).min(dd(y, z)).min(dd(z, x)).clone()
                        }
                    }
                }
            }
            Node::Bin(op, a, b) => {
                let a = self.run(a, vals);
                let b = self.run(b, vals);
                match op {
                    BinOp::Max => a.max(b),
                    BinOp::Min => a.min(b),
                    BinOp::Plus => (a + b).min(Rational::one()),
                    BinOp::TSub => tsub(&a, &b),
                    BinOp::AbsDiff => absdiff(&a, &b),
                }
            }
            Node::Scale(c, a) => c * self.run(a, vals),
            Node::Mod(m, a) => m.apply(&self.run(a, vals)),
            Node::Quant { sup, slot, body } => {
                if vals.len() <= *slot {
                    vals.resize(slot + 1, 0);
                }
                let mut best: Option<Rational> = None;
                for i in 0..t.n {
                    vals[*slot] = i;
                    let v = self.run(body, vals);
                    best = Some(match best {
                        None => v,
                        Some(b) if *sup => b.max(v),
                        Some(b) => b.min(v),
                    });
                }
                best.expect("structure is nonempty")
            }
        }
    }

    /// Evaluates `f` with free variables bound by `env`.
    pub fn eval(&self, f: &Formula, env: &[(&str, usize)]) -> Result<Rational> {
        let mut scope: Vec<String> = env.iter().map(|(v, _)| v.to_string()).collect();
        let mut vals: Vec<usize> = Vec::with_capacity(env.len());
        for (_, i) in env {
            if *i >= self.model.len() {
                return Err(Error::IndexOutOfRange { index: *i, len: self.model.len() });
            }
            vals.push(*i);
        }
        let node = self.compile(f, &mut scope)?;
        Ok(self.run(&node, &mut vals))
    }

    /// Values of `f` at every assignment of `vars`, in lexicographic order
    /// of the assignment.
    pub fn eval_all(&self, f: &Formula, vars: &[&str]) -> Result<Vec<Rational>> {
        let mut scope: Vec<String> = vars.iter().map(|v| v.to_string()).collect();
        let node = self.compile(f, &mut scope)?;
        let n = self.model.len();
        let total = n.pow(vars.len() as u32);
        let mut out = Vec::with_capacity(total);
        let mut vals = vec![0; vars.len()];
        for k in 0..total {
            let mut rest = k;
            for slot in (0..vars.len()).rev() {
                vals[slot] = rest % n;
                rest /= n;
            }
            out.push(self.run(&node, &mut vals));
        }
        Ok(out)
    }

    /// `max over assignments of |phi - psi|`.
    pub fn equiv_defect(&self, phi: &Formula, psi: &Formula) -> Result<Rational> {
        let fv = phi.free_vars();
        if fv != psi.free_vars() {
            return Err(Error::Precondition("formulas have different free variables".into()));
        }
        let vars: Vec<&str> = fv.iter().map(String::as_str).collect();
        let a = self.eval_all(phi, &vars)?;
        let b = self.eval_all(psi, &vars)?;
        Ok(a.iter().zip(&b).map(|(x, y)| absdiff(x, y)).max().unwrap_or_else(Rational::zero))
    }
}

/// Evaluates `f` in `model` without modulus maps.
pub fn evaluate<'a>(f: &Formula, model: impl Into<Model<'a>>, env: &[(&str, usize)]) -> Result<Rational> {
    Evaluator::plain(model).eval(f, env)
}

/// `max over all assignments of |phi - psi|`; both formulas must have the
/// same free variables.
pub fn qf_equiv_defect<'a>(phi: &Formula, psi: &Formula, model: impl Into<Model<'a>>) -> Result<Rational> {
    Evaluator::plain(model).equiv_defect(phi, psi)
}
