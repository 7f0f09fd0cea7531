use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, parse_rat, Rational};

/// A right-continuous nondecreasing step map on `[0, ∞)`: the value at `t`
/// is the value of the last step whose threshold is `<= t`, or 0 before the
/// first step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StepMap {
    steps: Vec<(Rational, Rational)>,
}

impl StepMap {
    /// Builds a step map from `(threshold, value)` pairs. Thresholds must be
    /// strictly increasing and nonnegative, values nonnegative and
    /// nondecreasing.
    pub fn new(steps: Vec<(Rational, Rational)>) -> Result<Self> {
        for (k, (t, v)) in steps.iter().enumerate() {
            if t.is_negative() || v.is_negative() {
                return Err(Error::Precondition("step map entries must be nonnegative".into()));
            }
            if k > 0 && (*t <= steps[k - 1].0 || *v < steps[k - 1].1) {
                return Err(Error::Precondition("step map must be increasing in t and nondecreasing in value".into()));
            }
        }
        Ok(StepMap { steps })
    }

    pub fn steps(&self) -> &[(Rational, Rational)] {
        &self.steps
    }

    pub fn value(&self, t: &Rational) -> Rational {
        self.steps
            .iter()
            .take_while(|(th, _)| th <= t)
            .last()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Rational::zero)
    }
}

/// A nondecreasing map usable under `mod(NAME, F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModMap {
    Step(StepMap),
    /// `s ↦ min(s / t, 1)` for a positive scale `t`.
    Ramp(Rational),
}

impl ModMap {
    pub fn ramp(t: Rational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::Precondition("ramp scale must be positive".into()));
        }
        Ok(ModMap::Ramp(t))
    }

    /// Value at `s`, clamped to [0,1].
    pub fn apply(&self, s: &Rational) -> Rational {
        let v = match self {
            ModMap::Step(m) => m.value(s),
            ModMap::Ramp(t) => s / t,
        };
        v.min(Rational::one())
    }
}

/// Named modulus maps referenced by formulas.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModTable {
    maps: BTreeMap<String, ModMap>,
}

impl ModTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: &str, map: ModMap) {
        self.maps.insert(name.to_string(), map);
    }

    pub fn get(&self, name: &str) -> Option<&ModMap> {
        self.maps.get(name)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Adds every entry of `other`, which must not reuse a name with a
    /// different map.
    pub fn merge(&mut self, other: &ModTable) -> Result<()> {
        for (k, v) in &other.maps {
            match self.maps.get(k) {
                Some(old) if old != v => {
                    return Err(Error::Precondition(format!("conflicting definitions of modulus `{k}`")))
                }
                _ => {
                    self.maps.insert(k.clone(), v.clone());
                }
            }
        }
        Ok(())
    }

    /// Parses `mod NAME ramp p/q` and `mod NAME step t:v t:v ...` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = ModTable::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |m: &str| Error::Parse(format!("line {}: {m}", i + 1));
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.len() < 3 || words[0] != "mod" {
                return Err(bad("expected `mod NAME ramp|step ...`"));
            }
            let map = match words[2] {
                "ramp" if words.len() == 4 => ModMap::ramp(parse_rat(words[3])?)?,
                "step" => {
                    let mut steps = Vec::new();
                    for w in &words[3..] {
                        let (t, v) = w.split_once(':').ok_or_else(|| bad("expected `t:v`"))?;
                        steps.push((parse_rat(t)?, parse_rat(v)?));
                    }
                    ModMap::Step(StepMap::new(steps)?)
                }
                _ => return Err(bad("expected `ramp p/q` or `step t:v ...`")),
            };
            if table.maps.insert(words[1].to_string(), map).is_some() {
                return Err(bad("duplicate modulus name"));
            }
        }
        Ok(table)
    }
}

impl fmt::Display for ModTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, map) in &self.maps {
            match map {
                ModMap::Ramp(t) => writeln!(f, "mod {name} ramp {}", fmt_rat(t))?,
                ModMap::Step(s) => {
                    write!(f, "mod {name} step")?;
                    for (t, v) in s.steps() {
                        write!(f, " {}:{}", fmt_rat(t), fmt_rat(v))?;
                    }
                    writeln!(f)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn step_values() {
        let s = StepMap::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 4))]).unwrap();
        assert_eq!(s.value(&rat(1, 3)), rat(0, 1));
        assert_eq!(s.value(&rat(1, 2)), rat(1, 4));
        assert_eq!(s.value(&rat(1, 1)), rat(1, 4));
        assert!(StepMap::new(vec![(rat(1, 2), rat(1, 2)), (rat(1, 4), rat(1, 2))]).is_err());
        assert!(StepMap::new(vec![(rat(1, 4), rat(1, 2)), (rat(1, 2), rat(1, 4))]).is_err());
    }

    #[test]
    fn ramp_clamps() {
        let r = ModMap::ramp(rat(1, 4)).unwrap();
        assert_eq!(r.apply(&rat(1, 8)), rat(1, 2));
        assert_eq!(r.apply(&rat(1, 2)), rat(1, 1));
        assert!(ModMap::ramp(rat(0, 1)).is_err());
    }

    #[test]
    fn table_round_trip() {
        let mut t = ModTable::new();
        t.insert("a", ModMap::ramp(rat(3, 10)).unwrap());
        t.insert("b", ModMap::Step(StepMap::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 2), rat(5, 4))]).unwrap()));
        let text = t.to_string();
        assert_eq!(text, "mod a ramp 3/10\nmod b step 0/1:0/1 1/2:5/4\n");
        assert_eq!(ModTable::parse(&text).unwrap(), t);
    }
}
