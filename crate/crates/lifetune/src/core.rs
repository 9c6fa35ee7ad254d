//! Domain types shared by every other module: option schemas, configurations,
//! performance objectives, measurements, episodes and the knowledge base.
//!
//! A [`ConfigSpace`] fixes the option axes; a [`Configuration`] is a concrete
//! assignment stored as domain indices, so equality and ordering are value-wise
//! by construction. Episodes accumulate everything measured under one workload
//! and the [`KnowledgeBase`] keeps them in arrival order.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by schema validation and comparisons.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("non-finite performance value {0}")]
    NonFinite(f64),
    #[error("configuration has {got} values but the space declares {expected} options")]
    LengthMismatch { got: usize, expected: usize },
    #[error("value {value} is not in the domain of option '{option}'")]
    DomainViolation { option: String, value: String },
    #[error("option '{0}' declared more than once")]
    DuplicateOption(String),
    #[error("option '{option}' has an invalid domain: {reason}")]
    BadDomain { option: String, reason: String },
    #[error("configuration space must declare at least one option")]
    EmptySpace,
}

/// Optimization sense of the performance metric.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Outcome of comparing two performance values under an objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Better,
    Equal,
    Worse,
}

/// The single performance attribute optimized for a system; its direction is
/// fixed for an entire experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerformanceObjective {
    pub direction: Direction,
    pub metric: String,
}

impl PerformanceObjective {
    pub fn new(direction: Direction, metric: impl Into<String>) -> Self {
        Self {
            direction,
            metric: metric.into(),
        }
    }

    /// Compare `a` against `b`: is `a` better, equal or worse?
    ///
    /// Rejects non-finite inputs; dataset values and penalties are always finite.
    pub fn compare(&self, a: f64, b: f64) -> Result<Comparison, CoreError> {
        if !a.is_finite() {
            return Err(CoreError::NonFinite(a));
        }
        if !b.is_finite() {
            return Err(CoreError::NonFinite(b));
        }
        Ok(self.compare_unchecked(a, b))
    }

    /// Comparison on values already known to be finite.
    pub fn compare_unchecked(&self, a: f64, b: f64) -> Comparison {
        if a == b {
            return Comparison::Equal;
        }
        let a_wins = match self.direction {
            Direction::Minimize => a < b,
            Direction::Maximize => a > b,
        };
        if a_wins {
            Comparison::Better
        } else {
            Comparison::Worse
        }
    }

    /// True when `a` is strictly better than `b`.
    pub fn is_improvement(&self, a: f64, b: f64) -> bool {
        self.compare_unchecked(a, b) == Comparison::Better
    }

    /// True when `a` is at least as good as `b`.
    pub fn is_at_least(&self, a: f64, b: f64) -> bool {
        self.compare_unchecked(a, b) != Comparison::Worse
    }

    /// Total order for sorting best-first, with finite values assumed.
    pub fn rank_key(&self, perf: f64) -> f64 {
        match self.direction {
            Direction::Minimize => perf,
            Direction::Maximize => -perf,
        }
    }
}

/// Kind of a configurable option.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OptionKind {
    Integer,
    Boolean,
    Enumerated,
}

/// One admissible value of an option, in dataset token form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OptionValue {
    Bool(bool),
    Int(i64),
    Text(String),
}

impl OptionValue {
    /// Token written to and read from CSV cells.
    pub fn token(&self) -> String {
        match self {
            OptionValue::Bool(b) => b.to_string(),
            OptionValue::Int(i) => i.to_string(),
            OptionValue::Text(s) => s.clone(),
        }
    }
}

impl fmt::Display for OptionValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

/// Schema of one option: its name, kind and finite ordered domain.
///
/// Integer domains are sorted ascending so the first and last entries are the
/// explicit min/max used by boundary mutation. Option domains come from the
/// dataset descriptor; continuous options appear as the discrete values
/// observed in the dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptionDef {
    pub name: String,
    pub kind: OptionKind,
    pub domain: Vec<OptionValue>,
}

impl OptionDef {
    pub fn integer(name: impl Into<String>, values: impl IntoIterator<Item = i64>) -> Self {
        Self {
            name: name.into(),
            kind: OptionKind::Integer,
            domain: values.into_iter().map(OptionValue::Int).collect(),
        }
    }

    pub fn boolean(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: OptionKind::Boolean,
            domain: vec![OptionValue::Bool(false), OptionValue::Bool(true)],
        }
    }

    pub fn enumerated<S: Into<String>>(
        name: impl Into<String>,
        tokens: impl IntoIterator<Item = S>,
    ) -> Self {
        Self {
            name: name.into(),
            kind: OptionKind::Enumerated,
            domain: tokens
                .into_iter()
                .map(|t| OptionValue::Text(t.into()))
                .collect(),
        }
    }

    /// Index of `value` in the domain, if admissible.
    pub fn index_of(&self, value: &OptionValue) -> Option<u16> {
        self.domain.iter().position(|v| v == value).map(|i| i as u16)
    }

    /// Parse a CSV token according to the option kind.
    pub fn parse_token(&self, token: &str) -> Result<OptionValue, CoreError> {
        let value = match self.kind {
            OptionKind::Integer => token
                .trim()
                .parse::<i64>()
                .map(OptionValue::Int)
                .map_err(|_| CoreError::DomainViolation {
                    option: self.name.clone(),
                    value: token.to_string(),
                })?,
            OptionKind::Boolean => match token.trim() {
                "true" => OptionValue::Bool(true),
                "false" => OptionValue::Bool(false),
                other => {
                    return Err(CoreError::DomainViolation {
                        option: self.name.clone(),
                        value: other.to_string(),
                    })
                }
            },
            OptionKind::Enumerated => OptionValue::Text(token.to_string()),
        };
        Ok(value)
    }

    fn validate(&self) -> Result<(), CoreError> {
        if self.domain.is_empty() {
            return Err(CoreError::BadDomain {
                option: self.name.clone(),
                reason: "empty domain".into(),
            });
        }
        for (i, v) in self.domain.iter().enumerate() {
            if self.domain[..i].contains(v) {
                return Err(CoreError::BadDomain {
                    option: self.name.clone(),
                    reason: format!("duplicate value {v}"),
                });
            }
            let kind_ok = matches!(
                (self.kind, v),
                (OptionKind::Integer, OptionValue::Int(_))
                    | (OptionKind::Boolean, OptionValue::Bool(_))
                    | (OptionKind::Enumerated, OptionValue::Text(_))
            );
            if !kind_ok {
                return Err(CoreError::BadDomain {
                    option: self.name.clone(),
                    reason: format!("value {v} does not match option kind"),
                });
            }
        }
        if self.kind == OptionKind::Integer {
            let sorted = self
                .domain
                .windows(2)
                .all(|w| matches!((&w[0], &w[1]), (OptionValue::Int(a), OptionValue::Int(b)) if a < b));
            if !sorted {
                return Err(CoreError::BadDomain {
                    option: self.name.clone(),
                    reason: "integer domain must be sorted ascending".into(),
                });
            }
        }
        if self.domain.len() > u16::MAX as usize {
            return Err(CoreError::BadDomain {
                option: self.name.clone(),
                reason: "domain too large".into(),
            });
        }
        Ok(())
    }
}

/// The full option schema plus the objective it is tuned for.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigSpace {
    options: Vec<OptionDef>,
    objective: PerformanceObjective,
}

impl ConfigSpace {
    pub fn new(
        options: Vec<OptionDef>,
        objective: PerformanceObjective,
    ) -> Result<Self, CoreError> {
        if options.is_empty() {
            return Err(CoreError::EmptySpace);
        }
        for (i, opt) in options.iter().enumerate() {
            opt.validate()?;
            if options[..i].iter().any(|o| o.name == opt.name) {
                return Err(CoreError::DuplicateOption(opt.name.clone()));
            }
        }
        Ok(Self { options, objective })
    }

    pub fn options(&self) -> &[OptionDef] {
        &self.options
    }

    pub fn objective(&self) -> &PerformanceObjective {
        &self.objective
    }

    pub fn option_count(&self) -> usize {
        self.options.len()
    }

    /// Stable identity token for a configuration, in dataset token form.
    ///
    /// Two configurations map to the same key iff all positional values
    /// compare equal; tokens are length-prefixed so the encoding is injective.
    pub fn canonical_key(&self, config: &Configuration) -> ConfigKey {
        let mut key = String::new();
        for (opt, &idx) in self.options.iter().zip(&config.0) {
            let token = opt.domain[idx as usize].token();
            if !key.is_empty() {
                key.push('|');
            }
            key.push_str(&token.len().to_string());
            key.push(':');
            key.push_str(&token);
        }
        ConfigKey(key)
    }
}

/// Stable, run-independent identity token of a configuration within a space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConfigKey(pub String);

impl fmt::Display for ConfigKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A concrete assignment of one value per option, stored positionally as
/// domain indices. Equality, hashing and ordering are value-wise over the
/// whole vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Configuration(Vec<u16>);

impl Configuration {
    /// Build from raw domain indices, validating against the space.
    pub fn from_indices(space: &ConfigSpace, indices: Vec<u16>) -> Result<Self, CoreError> {
        if indices.len() != space.option_count() {
            return Err(CoreError::LengthMismatch {
                got: indices.len(),
                expected: space.option_count(),
            });
        }
        for (opt, &idx) in space.options().iter().zip(&indices) {
            if idx as usize >= opt.domain.len() {
                return Err(CoreError::DomainViolation {
                    option: opt.name.clone(),
                    value: format!("index {idx}"),
                });
            }
        }
        Ok(Self(indices))
    }

    /// Build from option values, positionally aligned with the space.
    pub fn from_values(space: &ConfigSpace, values: &[OptionValue]) -> Result<Self, CoreError> {
        if values.len() != space.option_count() {
            return Err(CoreError::LengthMismatch {
                got: values.len(),
                expected: space.option_count(),
            });
        }
        let mut indices = Vec::with_capacity(values.len());
        for (opt, value) in space.options().iter().zip(values) {
            let idx = opt.index_of(value).ok_or_else(|| CoreError::DomainViolation {
                option: opt.name.clone(),
                value: value.token(),
            })?;
            indices.push(idx);
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[u16] {
        &self.0
    }

    pub(crate) fn indices_mut(&mut self) -> &mut Vec<u16> {
        &mut self.0
    }

    /// The option values of this configuration, aligned with the space.
    pub fn values(&self, space: &ConfigSpace) -> Vec<OptionValue> {
        self.0
            .iter()
            .zip(space.options())
            .map(|(&idx, opt)| opt.domain[idx as usize].clone())
            .collect()
    }

    /// Human-readable `name=value` rendering.
    pub fn label(&self, space: &ConfigSpace) -> String {
        self.0
            .iter()
            .zip(space.options())
            .map(|(&idx, opt)| format!("{}={}", opt.name, opt.domain[idx as usize]))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// Identifier of one workload, as declared in the dataset descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct WorkloadId(pub String);

impl WorkloadId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for WorkloadId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for WorkloadId {
    fn from(s: &str) -> Self {
        Self(s.to_string())
    }
}

/// One performance observation of a configuration under a workload.
///
/// `valid == false` marks a configuration absent from the measurement table;
/// its `performance` then equals the workload's penalty value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub config: Configuration,
    pub workload: WorkloadId,
    pub performance: f64,
    pub valid: bool,
}

/// A point on the best-so-far trajectory: after `measurements` distinct valid
/// measurements, the best performance seen so far is `best`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub measurements: u32,
    pub best: f64,
}

/// Everything retained from one planning episode under a single workload.
#[derive(Debug, Clone)]
pub struct Episode {
    pub workload: WorkloadId,
    /// All distinct configurations measured this episode, valid and invalid.
    pub evaluated: BTreeMap<Configuration, Measurement>,
    /// The best valid configurations at episode end, best-first, at most N.
    pub elite: Vec<Configuration>,
    /// Optimum of the valid entries in `evaluated`; `None` only in the
    /// degenerate case where nothing valid was ever measured.
    pub best: Option<Configuration>,
    pub trajectory: Vec<TrajectoryPoint>,
}

impl Episode {
    /// Performance of the episode's best configuration, if any.
    pub fn best_performance(&self) -> Option<f64> {
        self.best
            .as_ref()
            .and_then(|c| self.evaluated.get(c))
            .map(|m| m.performance)
    }

    /// Valid measurements, in configuration order.
    pub fn valid_measurements(&self) -> impl Iterator<Item = &Measurement> {
        self.evaluated.values().filter(|m| m.valid)
    }
}

/// Ordered sequence of past episodes, chronological within a run.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    episodes: Vec<Episode>,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, episode: Episode) {
        self.episodes.push(episode);
    }

    pub fn episodes(&self) -> &[Episode] {
        &self.episodes
    }

    /// H, the number of past workloads.
    pub fn len(&self) -> usize {
        self.episodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.episodes.is_empty()
    }

    pub fn last(&self) -> Option<&Episode> {
        self.episodes.last()
    }
}
