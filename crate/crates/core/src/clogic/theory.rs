use super::{parse_sentence, Evaluator, Formula, Model};
use crate::error::{Error, Result};
use crate::rational::Rational;

const MLO: &str = include_str!("../../theories/mlo.cl");
const UM: &str = include_str!("../../theories/um.cl");
const ULO: &str = include_str!("../../theories/ulo.cl");
const MCO: &str = include_str!("../../theories/mco.cl");

/// A list of labelled sentences.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Theory {
    pub sentences: Vec<(String, Formula)>,
}

impl Theory {
    /// Parses `label := sentence` lines; `#` starts a comment line. A line
    /// without `:=` is labelled by its position.
    pub fn parse(text: &str) -> Result<Self> {
        let mut sentences = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (label, body) = match line.split_once(":=") {
                Some((l, b)) => (l.trim().to_string(), b),
                None => (format!("s{}", sentences.len() + 1), line),
            };
            let f = parse_sentence(body).map_err(|e| Error::Parse(format!("line {}: {e}", i + 1)))?;
            sentences.push((label, f));
        }
        Ok(Theory { sentences })
    }
}

/// Built-in axiom files: `mlo`, `um`, `ulo`, `mco`.
pub fn theory_by_name(name: &str) -> Option<Theory> {
    let text = match name {
        "mlo" => MLO,
        "um" => UM,
        "ulo" => ULO,
        "mco" => MCO,
        _ => return None,
    };
    Some(Theory::parse(text).expect("built-in theories parse"))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceResult {
    pub label: String,
    pub value: Rational,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheoryReport {
    pub results: Vec<SentenceResult>,
    pub max: Rational,
}

impl TheoryReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }
}

/// Evaluates each sentence; a sentence passes when its value is `<= tol`.
pub fn check_theory<'a>(theory: &Theory, model: impl Into<Model<'a>>, tol: &Rational) -> Result<TheoryReport> {
    let ev = Evaluator::plain(model);
    let mut results = Vec::new();
    let mut max = Rational::from_integer(0.into());
    for (label, f) in &theory.sentences {
        if let Some(v) = f.free_vars().into_iter().next() {
            return Err(Error::Precondition(format!("sentence `{label}` has free variable `{v}`")));
        }
        let value = ev.eval(f, &[])?;
        max = max.max(value.clone());
        results.push(SentenceResult { label: label.clone(), pass: value <= *tol, value });
    }
    Ok(TheoryReport { results, max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclic::roll_up;
    use crate::fixtures::{bad3, chain3};
    use crate::rational::{rat, zero};

    #[test]
    fn mlo_file() {
        let t = theory_by_name("mlo").unwrap();
        let r = check_theory(&t, &chain3(), &zero()).unwrap();
        assert!(r.passed());
        let r = check_theory(&t, &bad3(), &zero()).unwrap();
        assert!(!r.passed());
        assert_eq!(r.max, rat(3, 10));
        let fails: Vec<_> = r.results.iter().filter(|s| !s.pass).map(|s| s.label.as_str()).collect();
        assert!(fails.contains(&"mlo3"));
        let empty = check_theory(&Theory::default(), &bad3(), &zero()).unwrap();
        assert!(empty.passed());
    }

    #[test]
    fn builtins_parse() {
        for name in ["mlo", "um", "ulo", "mco"] {
            assert!(!theory_by_name(name).unwrap().sentences.is_empty());
        }
        assert!(theory_by_name("nope").is_none());
        let c = roll_up(&chain3()).unwrap();
        assert!(check_theory(&theory_by_name("mco").unwrap(), &c, &zero()).unwrap().passed());
    }

    #[test]
    fn open_sentences_rejected() {
        let t = Theory { sentences: vec![("open".into(), crate::clogic::parse("d(x,x)").unwrap())] };
        assert!(check_theory(&t, &chain3(), &zero()).is_err());
        assert!(Theory::parse("bad := d(x,x)").is_err());
    }
}
