//! Scenario files: named operators, elements and admissible sets plus suite
//! parameters, in TOML.
//!
//! ```toml
//! model = "finite:2"
//!
//! [suites]
//! seed = 7
//! trials = 20
//!
//! [operators.T]
//! domain = "finite:2"
//! codomain = 1
//! kernel = [[
//!     { breakpoints = [["0", "0"]], left_slope = "1", right_slope = "1" },
//!     { breakpoints = [["0", "0"]], left_slope = "-1", right_slope = "-1" },
//! ]]
//!
//! [elements.f]
//! coords = ["1", "1"]
//!
//! [admissible_sets.D]
//! kind = "fragments"
//! of = "f"
//! ```
//!
//! Sequences use `prefix` and `tail` instead of `coords`. Admissible set
//! kinds are `whole`, `ideal` (1-based `mask`, optional `beyond`),
//! `fragments` (`of` an element), `null` (of an `operator`) and `c00`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::element::{LatticeElement, Model};
use crate::error::{Error, Result};
use crate::lateral::AdmissibleSet;
use crate::operator::{Domain, Operator, UrysonOperator};
use crate::pwl::PiecewiseLinearFn;
use crate::rational::{self, Rational};

pub const DEFAULT_RESOLUTION: usize = 8;
pub const DEFAULT_MAX_DIM: usize = 12;
pub const DEFAULT_TRIALS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteParams {
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default = "default_max_dim")]
    pub max_dim: usize,
}

fn default_trials() -> usize {
    DEFAULT_TRIALS
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

fn default_max_dim() -> usize {
    DEFAULT_MAX_DIM
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams { seed: None, trials: DEFAULT_TRIALS, resolution: DEFAULT_RESOLUTION, max_dim: DEFAULT_MAX_DIM }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    domain: String,
    codomain: usize,
    kernel: Vec<Vec<PiecewiseLinearFn>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<Vec<PiecewiseLinearFn>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawElement {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coords: Option<Vec<RawRational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prefix: Option<Vec<RawRational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<RawRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct RawRational(#[serde(with = "rational::serde_text")] Rational);

/// How an admissible set is described in a scenario.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum AdmissibleSpec {
    Whole { model: String },
    Ideal {
        model: String,
        mask: Vec<usize>,
        #[serde(default)]
        beyond: bool,
    },
    Fragments { of: String },
    Null { operator: String },
    C00,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    model: Option<String>,
    #[serde(default)]
    suites: SuiteParams,
    #[serde(default)]
    operators: BTreeMap<String, RawOperator>,
    #[serde(default)]
    elements: BTreeMap<String, RawElement>,
    #[serde(default)]
    admissible_sets: BTreeMap<String, AdmissibleSpec>,
}

/// A validated scenario.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub model: Option<Model>,
    pub suites: SuiteParams,
    pub operators: BTreeMap<String, UrysonOperator>,
    pub elements: BTreeMap<String, LatticeElement>,
    pub admissible_specs: BTreeMap<String, AdmissibleSpec>,
}

pub fn parse_model(s: &str) -> Result<Model> {
    let s = s.trim();
    if s == "ecseq" {
        return Ok(Model::EcSeq);
    }
    if let Some(n) = s.strip_prefix("finite:") {
        if let Ok(n) = n.trim().parse() {
            return Ok(Model::Finite(n));
        }
    }
    Err(Error::Scenario(format!("bad model `{s}` (expected finite:n or ecseq)")))
}

fn entry_error(what: &str, name: &str, err: impl fmt::Display) -> Error {
    Error::Scenario(format!("{what} `{name}`: {err}"))
}

impl RawOperator {
    fn build(&self, name: &str, max_dim: usize) -> Result<UrysonOperator> {
        let domain = Domain::from_str(&self.domain).map_err(|e| entry_error("operator", name, e))?;
        if domain.columns() > max_dim || self.codomain > max_dim {
            return Err(entry_error("operator", name, format!("dimensions exceed the cap {max_dim}")));
        }
        UrysonOperator::new(domain, self.codomain, self.kernel.clone(), self.tail.clone())
            .map_err(|e| entry_error("operator", name, e))
    }

    fn from_operator(op: &UrysonOperator) -> Self {
        RawOperator {
            domain: op.domain().to_string(),
            codomain: op.codomain(),
            kernel: op.kernel().to_vec(),
            tail: op.tail().map(<[_]>::to_vec),
        }
    }
}

impl RawElement {
    fn build(&self, name: &str, max_dim: usize) -> Result<LatticeElement> {
        let vals = |v: &[RawRational]| v.iter().map(|r| r.0.clone()).collect::<Vec<_>>();
        match (&self.coords, &self.prefix, &self.tail) {
            (Some(c), None, None) => {
                if c.len() > max_dim {
                    return Err(entry_error("element", name, format!("dimension exceeds the cap {max_dim}")));
                }
                Ok(LatticeElement::finite(vals(c)))
            }
            (None, p, Some(t)) => Ok(LatticeElement::ec_seq(p.as_deref().map(vals).unwrap_or_default(), t.0.clone())),
            _ => Err(entry_error("element", name, "give either `coords`, or `prefix` and `tail`")),
        }
    }

    fn from_element(x: &LatticeElement) -> Self {
        let raw = |v: &[Rational]| v.iter().cloned().map(RawRational).collect();
        match x.model() {
            Model::Finite(_) => RawElement { coords: Some(raw(x.coords())), prefix: None, tail: None },
            Model::EcSeq => RawElement {
                coords: None,
                prefix: Some(raw(x.prefix().unwrap())),
                tail: x.tail().cloned().map(RawRational),
            },
        }
    }
}

impl Scenario {
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| Error::Scenario(e.to_string()))?;
        let max_dim = raw.suites.max_dim;
        let model = raw.model.as_deref().map(parse_model).transpose()?;
        let mut seen = BTreeSet::new();
        let names = raw.operators.keys().chain(raw.elements.keys()).chain(raw.admissible_sets.keys());
        for name in names {
            if !seen.insert(name) {
                return Err(Error::Scenario(format!("name `{name}` is used more than once")));
            }
        }
        let mut operators = BTreeMap::new();
        for (name, op) in &raw.operators {
            let op = op.build(name, max_dim)?;
            check_model(model, op.domain().model(), "operator", name)?;
            operators.insert(name.clone(), op);
        }
        let mut elements = BTreeMap::new();
        for (name, el) in &raw.elements {
            let x = el.build(name, max_dim)?;
            check_model(model, x.model(), "element", name)?;
            elements.insert(name.clone(), x);
        }
        let scenario = Scenario {
            model,
            suites: raw.suites,
            operators,
            elements,
            admissible_specs: raw.admissible_sets,
        };
        for name in scenario.admissible_specs.keys() {
            let d = scenario.admissible(name)?;
            check_model(model, d.model(), "admissible set", name)?;
        }
        Ok(scenario)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Scenario(msg) => Error::Scenario(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        let raw = RawScenario {
            model: self.model.map(|m| m.to_string()),
            suites: self.suites.clone(),
            operators: self.operators.iter().map(|(k, v)| (k.clone(), RawOperator::from_operator(v))).collect(),
            elements: self.elements.iter().map(|(k, v)| (k.clone(), RawElement::from_element(v))).collect(),
            admissible_sets: self.admissible_specs.clone(),
        };
        toml::to_string(&raw).expect("scenario serializes")
    }

    pub fn operator(&self, name: &str) -> Result<&UrysonOperator> {
        self.operators.get(name).ok_or_else(|| Error::Scenario(format!("unknown operator `{name}`")))
    }

    pub fn element(&self, name: &str) -> Result<&LatticeElement> {
        self.elements.get(name).ok_or_else(|| Error::Scenario(format!("unknown element `{name}`")))
    }

    /// Builds the named admissible set.
    pub fn admissible(&self, name: &str) -> Result<AdmissibleSet> {
        let spec = self
            .admissible_specs
            .get(name)
            .ok_or_else(|| Error::Scenario(format!("unknown admissible set `{name}`")))?;
        let set = match spec {
            AdmissibleSpec::Whole { model } => AdmissibleSet::whole(parse_model(model)?),
            AdmissibleSpec::Ideal { model, mask, beyond } => {
                let model = parse_model(model)?;
                let len = match model {
                    Model::Finite(n) => n,
                    Model::EcSeq => mask.iter().copied().max().unwrap_or(0),
                };
                let mut bits = vec![false; len];
                for &i in mask {
                    if i == 0 || i > len {
                        return Err(entry_error("admissible set", name, format!("mask index {i} out of range")));
                    }
                    bits[i - 1] = true;
                }
                AdmissibleSet::ideal(model, bits, *beyond).map_err(|e| entry_error("admissible set", name, e))?
            }
            AdmissibleSpec::Fragments { of } => AdmissibleSet::fragments_of(
                self.element(of).map_err(|e| entry_error("admissible set", name, e))?,
            ),
            AdmissibleSpec::Null { operator } => AdmissibleSet::null_set(
                self.operator(operator).map_err(|e| entry_error("admissible set", name, e))?,
            )
            .map_err(|e| entry_error("admissible set", name, e))?,
            AdmissibleSpec::C00 => AdmissibleSet::finitely_supported(),
        };
        Ok(set.with_name(name))
    }

    /// Operators agree on a probe grid, elements and sets are equal.
    pub fn same_as(&self, other: &Scenario) -> bool {
        self.model == other.model
            && self.suites == other.suites
            && self.elements == other.elements
            && self.admissible_specs == other.admissible_specs
            && self.operators.len() == other.operators.len()
            && self.operators.iter().all(|(k, a)| other.operators.get(k).is_some_and(|b| agree_on_grid(a, b)))
    }

    /// The worked examples as a ready-made scenario.
    pub fn builtin() -> Self {
        Self::from_toml(BUILTIN).expect("builtin scenario is valid")
    }
}

fn check_model(expected: Option<Model>, found: Model, what: &str, name: &str) -> Result<()> {
    match expected {
        Some(Model::Finite(_)) | Some(Model::EcSeq) if expected != Some(found) => Err(entry_error(
            what,
            name,
            format!("model {found} differs from the scenario model {}", expected.unwrap()),
        )),
        _ => Ok(()),
    }
}

/// Exact agreement at every probe point of every entry, one coordinate at a time.
fn agree_on_grid(a: &UrysonOperator, b: &UrysonOperator) -> bool {
    if a.domain() != b.domain() || a.codomain() != b.codomain() || a.has_tail() != b.has_tail() {
        return false;
    }
    let fs: Vec<&PiecewiseLinearFn> = a
        .kernel()
        .iter()
        .flatten()
        .chain(b.kernel().iter().flatten())
        .chain(a.tail().into_iter().flatten())
        .chain(b.tail().into_iter().flatten())
        .collect();
    let points = PiecewiseLinearFn::probe_points(&fs);
    let cols = a.domain().columns();
    let probe = |j: Option<usize>, t: &Rational| match a.domain().model() {
        Model::Finite(n) => {
            let mut v = vec![Rational::default(); n];
            if let Some(j) = j {
                v[j] = t.clone();
            }
            LatticeElement::finite(v)
        }
        Model::EcSeq => match j {
            Some(j) => {
                let mut v = vec![Rational::default(); j + 1];
                v[j] = t.clone();
                LatticeElement::ec_seq(v, Rational::default())
            }
            None => LatticeElement::ec_seq(vec![Rational::default(); cols], t.clone()),
        },
    };
    let slots: Vec<Option<usize>> =
        (0..cols).map(Some).chain(a.has_tail().then_some(None)).collect();
    slots.iter().all(|&j| {
        points.iter().all(|t| {
            let x = probe(j, t);
            a.apply(&x).ok() == b.apply(&x).ok()
        })
    })
}

const BUILTIN: &str = r#"
[suites]
trials = 20
resolution = 8

# T(x) = x1 - x2
[operators.T]
domain = "finite:2"
codomain = 1
kernel = [[
    { breakpoints = [["0", "0"]], left_slope = "1", right_slope = "1" },
    { breakpoints = [["0", "0"]], left_slope = "-1", right_slope = "-1" },
]]

# (|x1|, |x2|)
[operators.A]
domain = "finite:2"
codomain = 2
kernel = [
    [{ breakpoints = [["0", "0"]], left_slope = "-1", right_slope = "1" }, { breakpoints = [["0", "0"]], left_slope = "0", right_slope = "0" }],
    [{ breakpoints = [["0", "0"]], left_slope = "0", right_slope = "0" }, { breakpoints = [["0", "0"]], left_slope = "-1", right_slope = "1" }],
]

# (|x1| + |x2|, 0)
[operators.S]
domain = "finite:2"
codomain = 2
kernel = [
    [{ breakpoints = [["0", "0"]], left_slope = "-1", right_slope = "1" }, { breakpoints = [["0", "0"]], left_slope = "-1", right_slope = "1" }],
    [{ breakpoints = [["0", "0"]], left_slope = "0", right_slope = "0" }, { breakpoints = [["0", "0"]], left_slope = "0", right_slope = "0" }],
]

# |x1| + |tail|
[operators.K]
domain = "ecseq:1"
codomain = 1
kernel = [[{ breakpoints = [["0", "0"]], left_slope = "-1", right_slope = "1" }]]
tail = [{ breakpoints = [["0", "0"]], left_slope = "-1", right_slope = "1" }]

[elements.f]
coords = ["1", "1"]

[elements.u]
coords = ["1", "0"]

[elements.s]
prefix = ["5"]
tail = "3"

[admissible_sets.F_u]
kind = "fragments"
of = "u"

[admissible_sets.E2]
kind = "whole"
model = "finite:2"

[admissible_sets.N_A]
kind = "null"
operator = "A"

[admissible_sets.c00]
kind = "c00"
"#;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    const MINIMAL: &str = r#"
[operators.I]
domain = "finite:1"
codomain = 1
kernel = [[{ breakpoints = [["0", "0"]], left_slope = "1", right_slope = "1" }]]
"#;

    #[test]
    fn minimal_loads() {
        let s = Scenario::from_toml(MINIMAL).unwrap();
        let i = s.operator("I").unwrap();
        assert_eq!(i.apply(&LatticeElement::from_ints(&[3])).unwrap(), LatticeElement::from_ints(&[3]));
        assert_eq!(s.suites.resolution, DEFAULT_RESOLUTION);
    }

    #[test]
    fn rejects_kernel_not_vanishing_at_zero() {
        let text = MINIMAL.replace(r#"[["0", "0"]]"#, r#"[["0", "1"]]"#);
        let err = Scenario::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("operator `I`"), "{err}");
        assert!(err.contains("entry (1,1)"), "{err}");
    }

    #[test]
    fn parse_errors_carry_line() {
        let err = Scenario::from_toml("[operators.I]\ndomain = \"finite:1\"\ncodomain = \n").unwrap_err().to_string();
        assert!(err.contains("line 3"), "{err}");
        let err = Scenario::from_toml("[operators.I]\ndomain = \"finite:1\"\ncodomain = 1\nkernel = [[]]\nbogus = 1\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("bogus"), "{err}");
    }

    #[test]
    fn sequence_scenario_with_tail() {
        let text = r#"
model = "ecseq"
[operators.K]
domain = "ecseq:2"
codomain = 1
kernel = [[{ breakpoints = [["0", "0"]], left_slope = "1", right_slope = "1" }, { breakpoints = [["0", "0"]], left_slope = "0", right_slope = "0" }]]
tail = [{ breakpoints = [["0", "0"]], left_slope = "1", right_slope = "1" }]
[elements.e]
prefix = ["5"]
tail = "3"
"#;
        let s = Scenario::from_toml(text).unwrap();
        let k = s.operator("K").unwrap();
        assert_eq!(k.apply(s.element("e").unwrap()).unwrap(), LatticeElement::finite(vec![int(8)]));
        let back = Scenario::from_toml(&s.to_toml()).unwrap();
        assert!(back.same_as(&s));
    }

    #[test]
    fn cross_references_are_checked() {
        let text = format!("{MINIMAL}\n[admissible_sets.D]\nkind = \"fragments\"\nof = \"missing\"\n");
        let err = Scenario::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("admissible set `D`") && err.contains("missing"), "{err}");
        let text = format!("{MINIMAL}\n[elements.I]\ncoords = [1]\n");
        assert!(Scenario::from_toml(&text).unwrap_err().to_string().contains("more than once"));
        let text = format!("model = \"finite:2\"\n{MINIMAL}");
        assert!(Scenario::from_toml(&text).is_err());
    }

    #[test]
    fn builtin_round_trips() {
        let s = Scenario::builtin();
        assert_eq!(s.operators.len(), 4);
        for name in s.admissible_specs.keys() {
            s.admissible(name).unwrap();
        }
        let back = Scenario::from_toml(&s.to_toml()).unwrap();
        assert!(back.same_as(&s));
        let mut changed = back.clone();
        let t = changed.operators.get("T").unwrap().scale(&int(2));
        changed.operators.insert("T".into(), t);
        assert!(!changed.same_as(&s));
    }
}
