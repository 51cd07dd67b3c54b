//! Declarative constraint models and their JSON file format.
//!
//! ```json
//! {
//!   "length": 9,
//!   "constraints": [
//!     {"type": "classic", "mode": "avoid", "pattern": [1, 3, 2, 4]},
//!     {"type": "mesh", "mode": "contain", "pattern": [1, 2, 3],
//!      "regions": [[1, 2], [2, 1], [1, 3], [3, 1]]},
//!     {"type": "property", "name": "involution"},
//!     {"type": "statistic", "terms": [{"coef": 1, "stat": "inversions"}],
//!      "op": "eq", "value": 9}
//!   ],
//!   "emit": ["descents"]
//! }
//! ```
//!
//! Unknown and duplicate keys are rejected. Adjacency and region lists are
//! sets; repeated entries collapse on parse.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::{self, Mode, PatternSpec, Variant};
use crate::perm::Permutation;
use crate::properties::{check_property, PropertyKind};
use crate::statistics::{evaluate_predicate, Comparator, StatisticKind, StatisticPredicate};

/// Longest pattern base accepted in a model.
pub const MAX_PATTERN_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid model at {path}: {message}")]
    Validation { path: String, message: String },
}

impl ModelError {
    fn invalid(path: impl Into<String>, message: impl ToString) -> Self {
        ModelError::Validation {
            path: path.into(),
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Constraint {
    Pattern { pattern: PatternSpec, mode: Mode },
    Property { kind: PropertyKind, negate: bool },
    Statistic(StatisticPredicate),
}

impl Constraint {
    pub fn avoid(pattern: PatternSpec) -> Self {
        Constraint::Pattern {
            pattern,
            mode: Mode::Avoid,
        }
    }

    pub fn contain(pattern: PatternSpec) -> Self {
        Constraint::Pattern {
            pattern,
            mode: Mode::Contain,
        }
    }

    pub fn property(kind: PropertyKind) -> Self {
        Constraint::Property {
            kind,
            negate: false,
        }
    }

    /// Direct leaf evaluation on a complete permutation.
    pub fn holds(&self, p: &Permutation) -> bool {
        match self {
            Constraint::Pattern { pattern, mode } => match mode {
                Mode::Contain => pattern::contains(p, pattern),
                Mode::Avoid => pattern::avoids(p, pattern),
            },
            Constraint::Property { kind, negate } => check_property(p, *kind) != *negate,
            Constraint::Statistic(pred) => {
                evaluate_predicate(p, pred).expect("predicate magnitude checked by Model::new")
            }
        }
    }
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Constraint::Pattern { pattern, mode } => write!(f, "{} {pattern}", mode.as_str()),
            Constraint::Property { kind, negate } => {
                write!(f, "property {}{kind}", if *negate { "not " } else { "" })
            }
            Constraint::Statistic(pred) => write!(f, "statistic {pred}"),
        }
    }
}

/// A target length, a conjunction of constraints, and statistics to report per solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    length: usize,
    constraints: Vec<Constraint>,
    emit: Vec<StatisticKind>,
}

impl Model {
    pub fn new(
        length: usize,
        constraints: Vec<Constraint>,
        emit: Vec<StatisticKind>,
    ) -> Result<Self, ModelError> {
        if length < 1 {
            return Err(ModelError::invalid("length", "length must be at least 1"));
        }
        for (i, c) in constraints.iter().enumerate() {
            match c {
                Constraint::Pattern { pattern, .. } if pattern.len() > MAX_PATTERN_LEN => {
                    return Err(ModelError::invalid(
                        format!("constraints[{i}].pattern"),
                        format!("pattern longer than {MAX_PATTERN_LEN}"),
                    ));
                }
                Constraint::Statistic(pred) => {
                    let bound = pred.terms().iter().try_fold(0i128, |acc, &(c, k)| {
                        (c as i128)
                            .checked_abs()?
                            .checked_mul(k.max_value(length) as i128)
                            .and_then(|t| acc.checked_add(t))
                    });
                    if bound.is_none() {
                        return Err(ModelError::invalid(
                            format!("constraints[{i}]"),
                            "predicate value may overflow",
                        ));
                    }
                }
                _ => {}
            }
        }
        Ok(Self {
            length,
            constraints,
            emit,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn emit(&self) -> &[StatisticKind] {
        &self.emit
    }

    /// The same constraints at a different target length.
    pub fn with_length(&self, length: usize) -> Result<Self, ModelError> {
        Self::new(length, self.constraints.clone(), self.emit.clone())
    }

    pub fn accepts(&self, p: &Permutation) -> bool {
        p.len() == self.length && self.constraints.iter().all(|c| c.holds(p))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    length: i64,
    constraints: Vec<RawConstraint>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    emit: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
enum RawConstraint {
    Classic {
        mode: String,
        pattern: Vec<i64>,
    },
    Vincular {
        mode: String,
        pattern: Vec<i64>,
        adjacencies: Vec<i64>,
    },
    Bivincular {
        mode: String,
        pattern: Vec<i64>,
        index_adjacencies: Vec<i64>,
        value_adjacencies: Vec<i64>,
    },
    Mesh {
        mode: String,
        pattern: Vec<i64>,
        regions: Vec<[i64; 2]>,
    },
    Boxed {
        mode: String,
        pattern: Vec<i64>,
    },
    Consecutive {
        mode: String,
        pattern: Vec<i64>,
    },
    Property {
        name: String,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        negate: bool,
    },
    Statistic {
        terms: Vec<RawTerm>,
        op: String,
        value: i64,
        #[serde(rename = "mod", default, skip_serializing_if = "Option::is_none")]
        modulus: Option<i64>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    coef: i64,
    stat: String,
}

fn coords(path: &str, what: &str, raw: &[i64]) -> Result<Vec<usize>, ModelError> {
    raw.iter()
        .map(|&v| {
            usize::try_from(v)
                .map_err(|_| ModelError::invalid(path, format!("negative {what} {v}")))
        })
        .collect()
}

fn parse_mode(path: &str, s: &str) -> Result<Mode, ModelError> {
    match s {
        "contain" => Ok(Mode::Contain),
        "avoid" => Ok(Mode::Avoid),
        other => Err(ModelError::invalid(
            format!("{path}.mode"),
            format!("unknown mode {other:?}"),
        )),
    }
}

fn convert(path: &str, raw: RawConstraint) -> Result<Constraint, ModelError> {
    let base = |values: &[i64]| {
        if values.len() > MAX_PATTERN_LEN {
            return Err(ModelError::invalid(
                format!("{path}.pattern"),
                format!("pattern longer than {MAX_PATTERN_LEN}"),
            ));
        }
        Permutation::from_signed(values)
            .map_err(|e| ModelError::invalid(format!("{path}.pattern"), e))
    };
    let bad_payload = |e: pattern::PatternError| ModelError::invalid(path, e);
    let (pattern, mode) = match raw {
        RawConstraint::Classic { mode, pattern } => (PatternSpec::classic(base(&pattern)?), mode),
        RawConstraint::Boxed { mode, pattern } => (PatternSpec::boxed(base(&pattern)?), mode),
        RawConstraint::Consecutive { mode, pattern } => {
            (PatternSpec::consecutive(base(&pattern)?), mode)
        }
        RawConstraint::Vincular {
            mode,
            pattern,
            adjacencies,
        } => {
            let adj = coords(path, "adjacency", &adjacencies)?;
            (
                PatternSpec::vincular(base(&pattern)?, adj).map_err(bad_payload)?,
                mode,
            )
        }
        RawConstraint::Bivincular {
            mode,
            pattern,
            index_adjacencies,
            value_adjacencies,
        } => {
            let a = coords(path, "index adjacency", &index_adjacencies)?;
            let b = coords(path, "value adjacency", &value_adjacencies)?;
            (
                PatternSpec::bivincular(base(&pattern)?, a, b).map_err(bad_payload)?,
                mode,
            )
        }
        RawConstraint::Mesh {
            mode,
            pattern,
            regions,
        } => {
            let flat: Vec<i64> = regions.iter().flatten().copied().collect();
            let flat = coords(path, "region coordinate", &flat)?;
            let pairs = flat.chunks(2).map(|c| (c[0], c[1]));
            (
                PatternSpec::mesh(base(&pattern)?, pairs).map_err(bad_payload)?,
                mode,
            )
        }
        RawConstraint::Property { name, negate } => {
            let kind = name
                .parse::<PropertyKind>()
                .map_err(|e| ModelError::invalid(format!("{path}.name"), e))?;
            return Ok(Constraint::Property { kind, negate });
        }
        RawConstraint::Statistic {
            terms,
            op,
            value,
            modulus,
        } => {
            let mut parsed = Vec::with_capacity(terms.len());
            for (j, t) in terms.into_iter().enumerate() {
                let kind = t
                    .stat
                    .parse::<StatisticKind>()
                    .map_err(|e| ModelError::invalid(format!("{path}.terms[{j}].stat"), e))?;
                parsed.push((t.coef, kind));
            }
            let op = op
                .parse::<Comparator>()
                .map_err(|e| ModelError::invalid(format!("{path}.op"), e))?;
            let pred = StatisticPredicate::new(parsed, op, value, modulus)
                .map_err(|e| ModelError::invalid(path, e))?;
            return Ok(Constraint::Statistic(pred));
        }
    };
    Ok(Constraint::Pattern {
        pattern,
        mode: parse_mode(path, &mode)?,
    })
}

pub fn parse_model(text: &[u8]) -> Result<Model, ModelError> {
    let raw: RawModel = serde_json::from_slice(text).map_err(|e| ModelError::Syntax {
        line: e.line().max(1),
        column: e.column().max(1),
        message: e.to_string(),
    })?;
    if raw.length < 1 {
        return Err(ModelError::invalid("length", "length must be at least 1"));
    }
    let length = usize::try_from(raw.length).expect("positive");
    let constraints = raw
        .constraints
        .into_iter()
        .enumerate()
        .map(|(i, c)| convert(&format!("constraints[{i}]"), c))
        .collect::<Result<Vec<_>, _>>()?;
    let emit = raw
        .emit
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.parse::<StatisticKind>()
                .map_err(|e| ModelError::invalid(format!("emit[{i}]"), e))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Model::new(length, constraints, emit)
}

fn to_raw(c: &Constraint) -> RawConstraint {
    let ints = |s: &std::collections::BTreeSet<usize>| s.iter().map(|&v| v as i64).collect();
    match c {
        Constraint::Pattern { pattern, mode } => {
            let mode = mode.as_str().to_string();
            let base: Vec<i64> = pattern.base().images().iter().map(|&v| v as i64).collect();
            match pattern.variant() {
                Variant::Classic => RawConstraint::Classic {
                    mode,
                    pattern: base,
                },
                Variant::Boxed => RawConstraint::Boxed {
                    mode,
                    pattern: base,
                },
                Variant::Consecutive => RawConstraint::Consecutive {
                    mode,
                    pattern: base,
                },
                Variant::Vincular { adjacencies } => RawConstraint::Vincular {
                    mode,
                    pattern: base,
                    adjacencies: ints(adjacencies),
                },
                Variant::Bivincular {
                    index_adjacencies,
                    value_adjacencies,
                } => RawConstraint::Bivincular {
                    mode,
                    pattern: base,
                    index_adjacencies: ints(index_adjacencies),
                    value_adjacencies: ints(value_adjacencies),
                },
                Variant::Mesh { regions } => RawConstraint::Mesh {
                    mode,
                    pattern: base,
                    regions: regions.iter().map(|&(x, y)| [x as i64, y as i64]).collect(),
                },
            }
        }
        Constraint::Property { kind, negate } => RawConstraint::Property {
            name: kind.as_str().to_string(),
            negate: *negate,
        },
        Constraint::Statistic(pred) => RawConstraint::Statistic {
            terms: pred
                .terms()
                .iter()
                .map(|&(coef, k)| RawTerm {
                    coef,
                    stat: k.as_str().to_string(),
                })
                .collect(),
            op: pred.comparator().as_str().to_string(),
            value: pred.rhs(),
            modulus: pred.modulus(),
        },
    }
}

/// Canonical pretty-printed JSON document, newline terminated.
pub fn serialize_model(m: &Model) -> Vec<u8> {
    let raw = RawModel {
        length: m.length as i64,
        constraints: m.constraints.iter().map(to_raw).collect(),
        emit: m.emit.iter().map(|k| k.as_str().to_string()).collect(),
    };
    let mut out = serde_json::to_vec_pretty(&raw).expect("model serializes");
    out.push(b'\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Result<Model, ModelError> {
        parse_model(s.as_bytes())
    }

    #[test]
    fn minimal_document() {
        let m = parse(r#"{"length": 5, "constraints": []}"#).unwrap();
        assert_eq!(m.length(), 5);
        assert!(m.constraints().is_empty());
        assert!(m.emit().is_empty());
        assert_eq!(parse_model(&serialize_model(&m)).unwrap(), m);
    }

    #[test]
    fn out_of_range_adjacency() {
        let err = parse(
            r#"{"length": 5, "constraints": [
                {"type": "vincular", "mode": "avoid", "pattern": [1,3,2], "adjacencies": [7]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, ModelError::Validation { .. }), "{err}");
    }

    #[test]
    fn validation_failures() {
        let cases = [
            r#"{"length": 0, "constraints": []}"#,
            r#"{"length": -3, "constraints": []}"#,
            r#"{"length": 4, "constraints": [{"type": "classic", "mode": "avoid", "pattern": [1,1]}]}"#,
            r#"{"length": 4, "constraints": [{"type": "classic", "mode": "dodge", "pattern": [1]}]}"#,
            r#"{"length": 4, "constraints": [{"type": "mesh", "mode": "avoid", "pattern": [1,2], "regions": [[0,3]]}]}"#,
            r#"{"length": 4, "constraints": [{"type": "mesh", "mode": "avoid", "pattern": [1,2], "regions": [[-1,0]]}]}"#,
            r#"{"length": 4, "constraints": [{"type": "property", "name": "simpel"}]}"#,
            r#"{"length": 4, "constraints": [{"type": "statistic", "terms": [{"coef": 1, "stat": "peaks"}], "op": "eq", "value": 1}]}"#,
            r#"{"length": 4, "constraints": [{"type": "statistic", "terms": [], "op": "eq", "value": 1}]}"#,
            r#"{"length": 4, "constraints": [{"type": "statistic", "terms": [{"coef": 1, "stat": "descents"}], "op": "lt", "value": 1, "mod": 3}]}"#,
            r#"{"length": 4, "constraints": [], "emit": ["peaks"]}"#,
        ];
        for c in cases {
            assert!(
                matches!(parse(c), Err(ModelError::Validation { .. })),
                "{c}"
            );
        }
    }

    #[test]
    fn syntax_failures() {
        let cases = [
            "",
            "{",
            "[]",
            r#"{"length": 4}"#,
            r#"{"length": 4, "constraints": [], "extra": 1}"#,
            r#"{"length": 4, "length": 5, "constraints": []}"#,
            r#"{"length": 4, "constraints": [{"type": "classic", "mode": "avoid", "pattern": [1], "pattern": [1]}]}"#,
            r#"{"length": 4, "constraints": [{"type": "classic", "mode": "avoid", "pattern": [1], "regions": []}]}"#,
            r#"{"length": 4, "constraints": [{"type": "hexagonal", "mode": "avoid", "pattern": [1]}]}"#,
            r#"{"length": 4, "constraints": [{"mode": "avoid", "pattern": [1]}]}"#,
            r#"{"length": 4.5, "constraints": []}"#,
        ];
        for c in cases {
            assert!(matches!(parse(c), Err(ModelError::Syntax { .. })), "{c}");
        }
    }

    #[test]
    fn duplicate_regions_collapse() {
        let m = parse(
            r#"{"length": 9, "constraints": [
                {"type": "mesh", "mode": "avoid", "pattern": [2,1,3], "regions": [[0,0],[0,1],[1,0],[1,0]]}]}"#,
        )
        .unwrap();
        let Constraint::Pattern { pattern, .. } = &m.constraints()[0] else {
            panic!()
        };
        let Variant::Mesh { regions } = pattern.variant() else {
            panic!()
        };
        assert_eq!(regions.len(), 3);
    }

    #[test]
    fn defaults() {
        let m =
            parse(r#"{"length": 3, "constraints": [{"type": "property", "name": "involution"}]}"#)
                .unwrap();
        assert_eq!(
            m.constraints()[0],
            Constraint::Property {
                kind: PropertyKind::Involution,
                negate: false
            }
        );
    }

    #[test]
    fn syntax_errors_carry_location() {
        match parse("{\n  \"length\": 4,\n  oops\n}") {
            Err(ModelError::Syntax { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }
}
