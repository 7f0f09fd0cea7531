use std::fs;
use std::path::Path;

use metord::backforth::{build_correlation, Direction};
use metord::clogic::{check_theory, parse, theory_by_name, Evaluator, ModTable, Model, Theory};
use metord::gen::{random_ulo, rng};
use metord::io::{parse_metric_order, parse_predicate, parse_structure, write_cyclic_order, write_metric_order, Structure};
use metord::rational::{fmt_rat, rat, zero};
use metord::regulated::{min_partition, monotone_decomposition, qf_synthesis, SampledPredicate, SynthMode};
use metord::urysohn::{us_export, us_perturb, us_sample};
use metord::{roll_up, Error, FiniteMetricOrder, MetricSpace, Rational};

use crate::report::{Check, Report};
use crate::{CheckArgs, CorrelateArgs, DecomposeArgs, EvalArgs, Failure, GenArgs, GenKind, Mode, Outcome, Output, SynthArgs};

/// Denominator of generated ULO gaps.
const GEN_DEN: i64 = 8;
/// Support grid `{k/16}` for generated U_S samples.
const US_GRID: i64 = 16;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path, large: bool) -> Result<Structure, Failure> {
    parse_structure(&read(path)?, large).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_linear(path: &Path, large: bool) -> Result<FiniteMetricOrder, Failure> {
    parse_metric_order(&read(path)?, large).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn load_predicate(path: &Path, names: &[String]) -> Result<Vec<Rational>, Failure> {
    parse_predicate(&read(path)?, names).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn model(s: &Structure) -> Model<'_> {
    match s {
        Structure::Linear(m) => Model::Linear(m),
        Structure::Cyclic(c) => Model::Cyclic(c),
    }
}

fn checker(name: &str, s: &Structure) -> Result<Rational, Failure> {
    let wrong = |kind: &str| Err(Failure::Usage(format!("theory `{name}` needs a {kind} structure")));
    match (name, s) {
        ("mlo", Structure::Linear(m)) => Ok(m.mlo_defect()),
        ("ulo", Structure::Linear(m)) => Ok(m.mlo_defect().max(m.ultrametric_defect())),
        ("um", Structure::Linear(m)) => Ok(m.ultrametric_defect()),
        ("um", Structure::Cyclic(c)) => Ok(c.ultrametric_defect()),
        ("mco", Structure::Cyclic(c)) => Ok(c.mco_defect()),
        ("mco", _) => wrong("cyclic"),
        _ => wrong("linear"),
    }
}

pub fn check(command: String, a: &CheckArgs, large: bool) -> Outcome {
    let s = load(&a.structure, large)?;
    let mut r = Report::new(command);
    let (label, theory, hand) = if let Some(t) = theory_by_name(&a.theory) {
        let hand = checker(&a.theory, &s)?;
        (a.theory.clone(), t, Some(hand))
    } else if Path::new(&a.theory).is_file() {
        let t = Theory::parse(&read(Path::new(&a.theory))?)?;
        ("file".to_string(), t, None)
    } else {
        return Err(Failure::Usage(format!("unknown theory `{}`; expected mlo, um, ulo, mco or a file", a.theory)));
    };
    let report = check_theory(&theory, model(&s), &a.tol)?;
    for res in &report.results {
        r.artifact("sentence", [res.label.clone(), fmt_rat(&res.value)]);
    }
    if let Some(hand) = &hand {
        r.check(Check::le(format!("{label}.checker"), hand, &a.tol));
    }
    r.check(Check::le(format!("{label}.theory"), &report.max, &a.tol));
    if let Some(hand) = &hand {
        r.check(Check::eq("consistency", &report.max, hand));
    }
    Ok(Output::Report(r))
}

pub fn gen(command: String, a: &GenArgs) -> Outcome {
    if a.perturb.is_some() && a.kind != GenKind::UsSample {
        return Err(Failure::Usage("--perturb applies to us-sample only".into()));
    }
    if a.size == 0 {
        return Err(Failure::Usage("size must be at least 1".into()));
    }
    let mut checks = Vec::new();
    let text = match a.kind {
        GenKind::Ulo | GenKind::UsSample => {
            let m = if a.kind == GenKind::Ulo {
                random_ulo(&mut rng(a.seed), a.size, GEN_DEN)
            } else {
                let grid: Vec<Rational> = (1..=US_GRID).map(|k| rat(k, US_GRID)).collect();
                let mut pts = us_sample(a.seed, &grid, a.size)?;
                if let (Some(below), Some(seed)) = (&a.perturb, a.perturb_seed) {
                    pts = us_perturb(seed, &pts, &grid, below)?;
                }
                us_export(&pts)?.0
            };
            checks.push(Check::eq("mlo", &m.mlo_defect(), &zero()));
            checks.push(Check::eq("um", &m.ultrametric_defect(), &zero()));
            write_metric_order(&m)
        }
        GenKind::Cyclic => {
            let c = roll_up(&random_ulo(&mut rng(a.seed), a.size, GEN_DEN))?;
            checks.push(Check::eq("mco", &c.mco_defect(), &zero()));
            checks.push(Check::eq("um", &c.ultrametric_defect(), &zero()));
            write_cyclic_order(&c)
        }
    };
    if let Some(bad) = checks.iter().find(|c| !c.pass) {
        return Err(Failure::Refused(format!("generated structure failed `{}` (value {})", bad.name, bad.value)));
    }
    let Some(out) = &a.out else {
        return Ok(Output::Raw(text));
    };
    fs::write(out, &text).map_err(|e| Failure::Usage(format!("{}: {e}", out.display())))?;
    let mut r = Report::new(command);
    r.artifact("wrote", [out.display().to_string()]);
    for c in checks {
        r.check(c);
    }
    Ok(Output::Report(r))
}

pub fn correlate(command: String, a: &CorrelateArgs, large: bool) -> Outcome {
    let m = load_linear(&a.m, large)?;
    let n = load_linear(&a.n, large)?;
    let lookup = |s: &FiniteMetricOrder, name: &str| {
        s.index_of(name).map_err(|_| Failure::Usage(format!("unknown point `{name}` in seed")))
    };
    let mut seed_a = Vec::new();
    let mut seed_b = Vec::new();
    for (x, y) in &a.seeds {
        seed_a.push(lookup(&m, x)?);
        seed_b.push(lookup(&n, y)?);
    }
    let mut r = Report::new(command);
    let c = match build_correlation(&m, &n, &seed_a, &seed_b, &a.eps, !a.unordered) {
        Ok(c) => c,
        Err(Error::NoWitness { case, window }) => {
            r.artifact("no-witness", [case, window]);
            r.check(Check::holds("construction", false));
            return Ok(Output::Report(r));
        }
        Err(e) => return Err(e.into()),
    };
    r.artifact("guard", [fmt_rat(&c.guard)]);
    for s in &c.steps {
        let dir = match s.direction {
            Direction::Forth => "forth",
            Direction::Back => "back",
        };
        r.artifact("step", [dir, m.name(s.pair.0), n.name(s.pair.1), s.case]);
    }
    for &(x, y) in c.correlation.pairs() {
        r.artifact("pair", [m.name(x), n.name(y)]);
    }
    let (gh, ogh) = (c.correlation.dis_gh(), c.correlation.dis_ogh());
    r.artifact("dis_gh", [fmt_rat(&gh)]);
    r.artifact("dis_ogh", [fmt_rat(&ogh)]);
    if a.unordered {
        r.check(Check::le("dis_gh", &gh, &a.eps));
    } else {
        r.check(Check::le("dis_ogh", &ogh, &a.eps));
    }
    Ok(Output::Report(r))
}

fn values_row(v: &[Rational]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

fn sup(v: &[Rational]) -> Rational {
    v.iter().max().cloned().unwrap_or_else(zero)
}

pub fn decompose(command: String, a: &DecomposeArgs, large: bool) -> Outcome {
    let m = load_linear(&a.structure, large)?;
    let f = SampledPredicate::new(&m, load_predicate(&a.predicate, m.names())?)?;
    let d = monotone_decomposition(&f, a.m);
    let mut r = Report::new(command);
    r.artifact("points", m.names());
    for (k, p) in d.psi.iter().enumerate() {
        r.artifact(&format!("psi{k}"), values_row(p.values()));
    }
    r.artifact("residual", values_row(d.residual.values()));
    let telescoping = f.sup_distance(&d.recombine());
    r.check(Check::eq("telescoping", &telescoping, &zero()));
    for (k, p) in d.psi.iter().enumerate() {
        r.check(Check::holds(format!("psi{k}.nondecreasing"), p.values().windows(2).all(|w| w[0] <= w[1])));
    }
    if let Some(eps) = &a.eps {
        let blocks = min_partition(&f, eps)?.len();
        r.artifact("blocks", [blocks]);
        if blocks <= a.m {
            r.check(Check::le("bound.residual", &sup(d.residual.values()), eps));
            let next = monotone_decomposition(&f, a.m + 2);
            r.check(Check::le(format!("bound.psi{}", a.m + 1), &sup(next.psi[a.m + 1].values()), eps));
        }
    }
    Ok(Output::Report(r))
}

pub fn synth(command: String, a: &SynthArgs, large: bool) -> Outcome {
    let m = load_linear(&a.structure, large)?;
    let f = SampledPredicate::new(&m, load_predicate(&a.predicate, m.names())?)?;
    let mode = match a.mode {
        Mode::Gap => SynthMode::Gap,
        Mode::Interpolate => SynthMode::Interpolate,
    };
    let q = qf_synthesis(&f, &a.eps, mode)?;
    let g = q.evaluate(&m)?;
    let mut r = Report::new(command);
    r.artifact("formula", [q.formula.to_string()]);
    for line in q.mods.to_string().lines() {
        r.artifact("mod", [line.strip_prefix("mod ").unwrap_or(line)]);
    }
    for (i, name) in m.names().iter().enumerate() {
        r.artifact("value", [name.clone(), fmt_rat(f.value(i)), fmt_rat(g.value(i))]);
    }
    let err = f.sup_distance(g.values());
    r.check(Check::le("sup_error", &err, &(&a.eps * rat(2, 1))));
    r.check(Check::holds("quantifier_free", q.formula.is_quantifier_free()));
    r.check(Check::holds("atoms_d_r", q.formula.predicates().iter().all(|p| *p == "d" || *p == "r")));
    Ok(Output::Report(r))
}

pub fn eval(command: String, a: &EvalArgs, large: bool) -> Outcome {
    let s = load(&a.structure, large)?;
    let f = parse(&a.formula).map_err(|e| Failure::Usage(e.to_string()))?;
    let mods = match &a.mods {
        Some(p) => ModTable::parse(&read(p)?).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?,
        None => ModTable::new(),
    };
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let ev = Evaluator::new(model(&s), &mods);
    let mut r = Report::new(command);
    let values = match free.as_slice() {
        [] => {
            let v = ev.eval(&f, &[])?;
            r.artifact("value", [fmt_rat(&v)]);
            vec![v]
        }
        [x] => {
            let vs = ev.eval_all(&f, &[x.as_str()])?;
            for (name, v) in s.names().iter().zip(&vs) {
                r.artifact("value", [name.clone(), fmt_rat(v)]);
            }
            vs
        }
        _ => return Err(Failure::Usage(format!("at most one free variable allowed, found {}", free.join(", ")))),
    };
    if let Some(tol) = &a.tol {
        r.check(Check::le("max", &sup(&values), tol));
    }
    Ok(Output::Report(r))
}

