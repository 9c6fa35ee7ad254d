//! Dataset-backed measurement oracle.
//!
//! The [`CyberTwin`] stands in for the managed system during planning: an
//! immutable (configuration, workload) -> performance table loaded from a
//! JSON descriptor plus a CSV data file. [`CyberTwin::measure`] answers
//! queries through an episode-local [`BudgetMeter`] that charges one budget
//! unit per distinct in-table measurement, serves duplicates from cache for
//! free, and assigns a penalty to configurations absent from the table.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::core::{
    ConfigSpace, Configuration, CoreError, Direction, Measurement, OptionDef, OptionKind,
    OptionValue, PerformanceObjective, WorkloadId,
};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("descriptor {path}: {reason}")]
    Descriptor { path: PathBuf, reason: String },
    #[error("{path}:{row}: {reason}")]
    Row {
        path: PathBuf,
        row: usize,
        reason: String,
    },
    #[error("data file {path}: {reason}")]
    Data { path: PathBuf, reason: String },
    #[error("workload '{0}' has no measurement rows")]
    EmptyWorkload(WorkloadId),
    #[error("unknown workload '{0}'")]
    UnknownWorkload(WorkloadId),
    #[error(transparent)]
    Schema(#[from] CoreError),
}

/// Raised by [`CyberTwin::measure`] when the budget cannot cover a new query.
#[derive(Debug, Error)]
#[error("measurement budget exhausted ({limit} measurements consumed)")]
pub struct BudgetExhausted {
    pub limit: u32,
}

/// JSON descriptor of a dataset: schema, objective and workload list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetDescriptor {
    pub system: String,
    pub objective: PerformanceObjective,
    pub options: Vec<DescriptorOption>,
    pub workloads: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescriptorOption {
    pub name: String,
    pub kind: OptionKind,
    /// Admissible values; may be omitted for boolean options.
    #[serde(default)]
    pub domain: Option<Vec<OptionValue>>,
}

impl DatasetDescriptor {
    pub fn to_space(&self) -> Result<ConfigSpace, CoreError> {
        let options = self
            .options
            .iter()
            .map(|o| match (&o.domain, o.kind) {
                (Some(domain), _) => OptionDef {
                    name: o.name.clone(),
                    kind: o.kind,
                    domain: domain.clone(),
                },
                (None, OptionKind::Boolean) => OptionDef::boolean(o.name.clone()),
                (None, _) => OptionDef {
                    name: o.name.clone(),
                    kind: o.kind,
                    domain: Vec::new(),
                },
            })
            .collect();
        ConfigSpace::new(options, self.objective.clone())
    }
}

/// Row counts per workload, reported after a successful load.
#[derive(Debug, Clone, Serialize)]
pub struct LoadSummary {
    pub system: String,
    pub total_rows: usize,
    pub rows_per_workload: Vec<(WorkloadId, usize)>,
}

#[derive(Debug, Clone)]
struct WorkloadTable {
    perf: BTreeMap<Configuration, f64>,
    best_obs: f64,
    worst_obs: f64,
}

/// Immutable measurement table emulating the managed system.
#[derive(Debug, Clone)]
pub struct CyberTwin {
    system: String,
    space: ConfigSpace,
    workloads: Vec<WorkloadId>,
    tables: BTreeMap<WorkloadId, WorkloadTable>,
}

impl CyberTwin {
    /// Build a twin from in-memory rows; validation matches the file loader.
    pub fn from_rows(
        system: impl Into<String>,
        space: ConfigSpace,
        workloads: Vec<WorkloadId>,
        rows: impl IntoIterator<Item = (Configuration, WorkloadId, f64)>,
    ) -> Result<Self, OracleError> {
        let mut tables: BTreeMap<WorkloadId, WorkloadTable> = BTreeMap::new();
        let objective = space.objective().clone();
        for (config, workload, perf) in rows {
            if !workloads.contains(&workload) {
                return Err(OracleError::UnknownWorkload(workload));
            }
            if !perf.is_finite() {
                return Err(OracleError::Schema(CoreError::NonFinite(perf)));
            }
            let table = tables.entry(workload.clone()).or_insert(WorkloadTable {
                perf: BTreeMap::new(),
                best_obs: perf,
                worst_obs: perf,
            });
            if table.perf.insert(config.clone(), perf).is_some() {
                return Err(OracleError::Data {
                    path: PathBuf::from("<memory>"),
                    reason: format!(
                        "duplicate row for configuration [{}] under workload '{workload}'",
                        config.label(&space)
                    ),
                });
            }
            if objective.is_improvement(perf, table.best_obs) {
                table.best_obs = perf;
            }
            if objective.is_improvement(table.worst_obs, perf) {
                table.worst_obs = perf;
            }
        }
        for workload in &workloads {
            if !tables.contains_key(workload) {
                return Err(OracleError::EmptyWorkload(workload.clone()));
            }
        }
        Ok(Self {
            system: system.into(),
            space,
            workloads,
            tables,
        })
    }

    /// Load a twin from a descriptor JSON file and a CSV data file.
    ///
    /// `data_path` may contain `*` wildcards to load per-workload file splits;
    /// the semantics are identical to one concatenated file.
    pub fn load(
        descriptor_path: &Path,
        data_path: &Path,
    ) -> Result<(Self, LoadSummary), OracleError> {
        let text = fs::read_to_string(descriptor_path).map_err(|source| OracleError::Io {
            path: descriptor_path.to_path_buf(),
            source,
        })?;
        let descriptor: DatasetDescriptor =
            serde_json::from_str(&text).map_err(|e| OracleError::Descriptor {
                path: descriptor_path.to_path_buf(),
                reason: e.to_string(),
            })?;
        if descriptor.workloads.is_empty() {
            return Err(OracleError::Descriptor {
                path: descriptor_path.to_path_buf(),
                reason: "descriptor declares no workloads".into(),
            });
        }
        for (i, w) in descriptor.workloads.iter().enumerate() {
            if descriptor.workloads[..i].contains(w) {
                return Err(OracleError::Descriptor {
                    path: descriptor_path.to_path_buf(),
                    reason: format!("duplicate workload '{w}'"),
                });
            }
        }
        let space = descriptor.to_space().map_err(|e| OracleError::Descriptor {
            path: descriptor_path.to_path_buf(),
            reason: e.to_string(),
        })?;
        let workloads: Vec<WorkloadId> = descriptor
            .workloads
            .iter()
            .map(|w| WorkloadId::new(w.clone()))
            .collect();

        let mut rows = Vec::new();
        for file in expand_glob(data_path)? {
            read_csv_rows(&file, &space, &workloads, &mut rows)?;
        }
        let total_rows = rows.len();
        let twin = Self::from_rows(descriptor.system.clone(), space, workloads, rows).map_err(
            |e| match e {
                // Re-anchor in-memory duplicate errors to the data path.
                OracleError::Data { reason, .. } => OracleError::Data {
                    path: data_path.to_path_buf(),
                    reason,
                },
                other => other,
            },
        )?;
        let summary = LoadSummary {
            system: twin.system.clone(),
            total_rows,
            rows_per_workload: twin
                .workloads
                .iter()
                .map(|w| (w.clone(), twin.tables[w].perf.len()))
                .collect(),
        };
        Ok((twin, summary))
    }

    pub fn system(&self) -> &str {
        &self.system
    }

    pub fn space(&self) -> &ConfigSpace {
        &self.space
    }

    pub fn workloads(&self) -> &[WorkloadId] {
        &self.workloads
    }

    /// Table lookup without budget accounting.
    pub fn lookup(&self, workload: &WorkloadId, config: &Configuration) -> Option<f64> {
        self.tables.get(workload)?.perf.get(config).copied()
    }

    /// Configurations with a table entry for `workload`, in canonical order.
    pub fn valid_configs(&self, workload: &WorkloadId) -> impl Iterator<Item = &Configuration> {
        self.tables
            .get(workload)
            .into_iter()
            .flat_map(|t| t.perf.keys())
    }

    pub fn valid_count(&self, workload: &WorkloadId) -> usize {
        self.tables.get(workload).map_or(0, |t| t.perf.len())
    }

    /// Best and worst observed performance for a workload.
    pub fn extrema(&self, workload: &WorkloadId) -> Result<(f64, f64), OracleError> {
        let table = self
            .tables
            .get(workload)
            .ok_or_else(|| OracleError::UnknownWorkload(workload.clone()))?;
        Ok((table.best_obs, table.worst_obs))
    }

    /// Penalty performance assigned to configurations absent from the table:
    /// the worst observation pushed further by one full observed range, so it
    /// is strictly worse than every table value while staying finite. Degenerate
    /// single-value workloads fall back to worst plus/minus one.
    pub fn penalty(&self, workload: &WorkloadId) -> Result<f64, OracleError> {
        let (best, worst) = self.extrema(workload)?;
        let value = if best == worst {
            match self.space.objective().direction {
                Direction::Minimize => worst + 1.0,
                Direction::Maximize => worst - 1.0,
            }
        } else {
            match self.space.objective().direction {
                Direction::Minimize => worst + (worst - best),
                Direction::Maximize => worst - (best - worst),
            }
        };
        Ok(value)
    }

    /// Measure a configuration under a workload through an episode meter.
    ///
    /// Repeated queries of the same configuration within the episode return
    /// the cached measurement and consume nothing. Off-table configurations
    /// yield an invalid measurement carrying the penalty value and, by
    /// default, consume no budget. A query that is not cached fails with
    /// [`BudgetExhausted`] once the meter is spent.
    pub fn measure(
        &self,
        workload: &WorkloadId,
        config: &Configuration,
        meter: &mut BudgetMeter,
    ) -> Result<Measurement, BudgetExhausted> {
        if let Some(cached) = meter.cache.get(config) {
            return Ok(cached.clone());
        }
        if meter.consumed >= meter.limit {
            return Err(BudgetExhausted { limit: meter.limit });
        }
        let measurement = match self.lookup(workload, config) {
            Some(perf) => {
                meter.consumed += 1;
                Measurement {
                    config: config.clone(),
                    workload: workload.clone(),
                    performance: perf,
                    valid: true,
                }
            }
            None => {
                if meter.charge_invalid {
                    meter.consumed += 1;
                }
                Measurement {
                    config: config.clone(),
                    workload: workload.clone(),
                    performance: self
                        .penalty(workload)
                        .expect("penalty exists for every loaded workload"),
                    valid: false,
                }
            }
        };
        meter.cache.insert(config.clone(), measurement.clone());
        Ok(measurement)
    }
}

/// Episode-local budget accounting plus the measurement cache.
#[derive(Debug, Clone)]
pub struct BudgetMeter {
    limit: u32,
    consumed: u32,
    charge_invalid: bool,
    cache: BTreeMap<Configuration, Measurement>,
}

impl BudgetMeter {
    pub fn new(limit: u32) -> Self {
        Self {
            limit,
            consumed: 0,
            charge_invalid: false,
            cache: BTreeMap::new(),
        }
    }

    /// Sensitivity-analysis variant where off-table queries also consume budget.
    pub fn charging_invalid(limit: u32) -> Self {
        Self {
            charge_invalid: true,
            ..Self::new(limit)
        }
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }

    pub fn consumed(&self) -> u32 {
        self.consumed
    }

    pub fn exhausted(&self) -> bool {
        self.consumed >= self.limit
    }

    pub fn is_cached(&self, config: &Configuration) -> bool {
        self.cache.contains_key(config)
    }

    /// Distinct measurements taken this episode, valid and invalid.
    pub fn cache(&self) -> &BTreeMap<Configuration, Measurement> {
        &self.cache
    }

    pub fn into_cache(self) -> BTreeMap<Configuration, Measurement> {
        self.cache
    }
}

fn expand_glob(data_path: &Path) -> Result<Vec<PathBuf>, OracleError> {
    let text = data_path.to_string_lossy();
    if !text.contains('*') {
        return Ok(vec![data_path.to_path_buf()]);
    }
    let dir = data_path.parent().unwrap_or_else(|| Path::new("."));
    let pattern = data_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let entries = fs::read_dir(dir).map_err(|source| OracleError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut matches: Vec<PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            p.file_name()
                .map(|n| wildcard_match(&pattern, &n.to_string_lossy()))
                .unwrap_or(false)
        })
        .collect();
    matches.sort();
    if matches.is_empty() {
        return Err(OracleError::Data {
            path: data_path.to_path_buf(),
            reason: "glob matched no files".into(),
        });
    }
    Ok(matches)
}

fn wildcard_match(pattern: &str, name: &str) -> bool {
    // '*' matches any (possibly empty) run of characters.
    let parts: Vec<&str> = pattern.split('*').collect();
    if parts.len() == 1 {
        return pattern == name;
    }
    let mut pos = 0usize;
    for (i, part) in parts.iter().enumerate() {
        if part.is_empty() {
            continue;
        }
        if i == 0 {
            if !name.starts_with(part) {
                return false;
            }
            pos = part.len();
        } else if i == parts.len() - 1 {
            return name.len() >= pos && name[pos..].ends_with(part);
        } else {
            match name[pos..].find(part) {
                Some(found) => pos += found + part.len(),
                None => return false,
            }
        }
    }
    true
}

fn read_csv_rows(
    path: &Path,
    space: &ConfigSpace,
    workloads: &[WorkloadId],
    rows: &mut Vec<(Configuration, WorkloadId, f64)>,
) -> Result<(), OracleError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| OracleError::Data {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;

    let headers = reader
        .headers()
        .map_err(|e| OracleError::Data {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?
        .clone();

    let mut option_cols: Vec<Option<usize>> = vec![None; space.option_count()];
    let mut workload_col = None;
    let mut perf_col = None;
    for (col, header) in headers.iter().enumerate() {
        if header == "workload" {
            workload_col = Some(col);
        } else if header == "performance" {
            perf_col = Some(col);
        } else if let Some(i) = space.options().iter().position(|o| o.name == header) {
            option_cols[i] = Some(col);
        } else {
            return Err(OracleError::Data {
                path: path.to_path_buf(),
                reason: format!("unknown column '{header}'"),
            });
        }
    }
    let workload_col = workload_col.ok_or_else(|| OracleError::Data {
        path: path.to_path_buf(),
        reason: "missing 'workload' column".into(),
    })?;
    let perf_col = perf_col.ok_or_else(|| OracleError::Data {
        path: path.to_path_buf(),
        reason: "missing 'performance' column".into(),
    })?;
    for (i, col) in option_cols.iter().enumerate() {
        if col.is_none() {
            return Err(OracleError::Data {
                path: path.to_path_buf(),
                reason: format!("missing column for option '{}'", space.options()[i].name),
            });
        }
    }

    for (row_idx, record) in reader.records().enumerate() {
        let row = row_idx + 2; // 1-based, after the header line
        let record = record.map_err(|e| OracleError::Row {
            path: path.to_path_buf(),
            row,
            reason: e.to_string(),
        })?;
        let mut values = Vec::with_capacity(space.option_count());
        for (opt, col) in space.options().iter().zip(&option_cols) {
            let token = record.get(col.unwrap()).unwrap_or_default();
            let value = opt.parse_token(token).map_err(|e| OracleError::Row {
                path: path.to_path_buf(),
                row,
                reason: e.to_string(),
            })?;
            values.push(value);
        }
        let config = Configuration::from_values(space, &values).map_err(|e| OracleError::Row {
            path: path.to_path_buf(),
            row,
            reason: e.to_string(),
        })?;
        let workload_name = record.get(workload_col).unwrap_or_default();
        let workload = WorkloadId::new(workload_name);
        if !workloads.contains(&workload) {
            return Err(OracleError::Row {
                path: path.to_path_buf(),
                row,
                reason: format!("undeclared workload '{workload_name}'"),
            });
        }
        let perf: f64 = record
            .get(perf_col)
            .unwrap_or_default()
            .parse()
            .map_err(|_| OracleError::Row {
                path: path.to_path_buf(),
                row,
                reason: format!(
                    "performance '{}' is not a number",
                    record.get(perf_col).unwrap_or_default()
                ),
            })?;
        if !perf.is_finite() {
            return Err(OracleError::Row {
                path: path.to_path_buf(),
                row,
                reason: format!("performance {perf} is not finite"),
            });
        }
        rows.push((config, workload, perf));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{Direction, OptionDef};
    use std::io::Write;

    fn six_row_twin() -> CyberTwin {
        let space = ConfigSpace::new(
            vec![
                OptionDef::integer("a", [0, 1]),
                OptionDef::integer("b", [1, 2, 3]),
            ],
            PerformanceObjective::new(Direction::Minimize, "runtime_s"),
        )
        .unwrap();
        let w = WorkloadId::new("w1");
        let rows: Vec<_> = [(0u16, 0u16, 5.0), (0, 1, 3.0), (0, 2, 8.0), (1, 0, 2.0), (1, 1, 10.0), (1, 2, 6.0)]
            .into_iter()
            .map(|(i, j, p)| {
                (
                    Configuration::from_indices(&space, vec![i, j]).unwrap(),
                    w.clone(),
                    p,
                )
            })
            .collect();
        CyberTwin::from_rows("toy", space, vec![w], rows).unwrap()
    }

    #[test]
    fn direct_load_counts_entries() {
        let twin = six_row_twin();
        assert_eq!(twin.valid_count(&WorkloadId::new("w1")), 6);
    }

    #[test]
    fn first_query_consumes_one_unit() {
        let twin = six_row_twin();
        let w = WorkloadId::new("w1");
        let config = Configuration::from_indices(twin.space(), vec![1, 0]).unwrap();
        let mut meter = BudgetMeter::new(80);
        let m = twin.measure(&w, &config, &mut meter).unwrap();
        assert!(m.valid);
        assert_eq!(m.performance, 2.0);
        assert_eq!(meter.consumed(), 1);
    }

    #[test]
    fn requery_is_free_and_identical() {
        let twin = six_row_twin();
        let w = WorkloadId::new("w1");
        let config = Configuration::from_indices(twin.space(), vec![0, 1]).unwrap();
        let mut meter = BudgetMeter::new(80);
        let first = twin.measure(&w, &config, &mut meter).unwrap();
        let second = twin.measure(&w, &config, &mut meter).unwrap();
        assert_eq!(first, second);
        assert_eq!(meter.consumed(), 1);
    }

    #[test]
    fn off_table_query_returns_penalty_without_charge() {
        let space = ConfigSpace::new(
            vec![OptionDef::integer("a", [0, 1, 2])],
            PerformanceObjective::new(Direction::Minimize, "runtime_s"),
        )
        .unwrap();
        let w = WorkloadId::new("w1");
        let in_table = Configuration::from_indices(&space, vec![0]).unwrap();
        let also_in = Configuration::from_indices(&space, vec![1]).unwrap();
        let off = Configuration::from_indices(&space, vec![2]).unwrap();
        let twin = CyberTwin::from_rows(
            "toy",
            space,
            vec![w.clone()],
            [(in_table, w.clone(), 2.0), (also_in, w.clone(), 10.0)],
        )
        .unwrap();
        let mut meter = BudgetMeter::new(80);
        let m = twin.measure(&w, &off, &mut meter).unwrap();
        assert!(!m.valid);
        assert_eq!(m.performance, 18.0);
        assert_eq!(meter.consumed(), 0);
    }

    #[test]
    fn penalty_formula_for_both_directions() {
        for (dir, best, worst, expected) in [
            (Direction::Minimize, 2.0, 10.0, 18.0),
            (Direction::Maximize, 100.0, 40.0, -20.0),
        ] {
            let space = ConfigSpace::new(
                vec![OptionDef::integer("a", [0, 1, 2])],
                PerformanceObjective::new(dir, "m"),
            )
            .unwrap();
            let w = WorkloadId::new("w1");
            let c0 = Configuration::from_indices(&space, vec![0]).unwrap();
            let c1 = Configuration::from_indices(&space, vec![1]).unwrap();
            let twin = CyberTwin::from_rows(
                "toy",
                space,
                vec![w.clone()],
                [(c0, w.clone(), best), (c1, w.clone(), worst)],
            )
            .unwrap();
            assert_eq!(twin.penalty(&w).unwrap(), expected);
        }
    }

    #[test]
    fn degenerate_extrema_fall_back_to_unit_step() {
        let space = ConfigSpace::new(
            vec![OptionDef::integer("a", [0])],
            PerformanceObjective::new(Direction::Minimize, "m"),
        )
        .unwrap();
        let w = WorkloadId::new("w1");
        let c = Configuration::from_indices(&space, vec![0]).unwrap();
        let twin =
            CyberTwin::from_rows("toy", space, vec![w.clone()], [(c, w.clone(), 5.0)]).unwrap();
        assert_eq!(twin.penalty(&w).unwrap(), 6.0);
    }

    #[test]
    fn exhausted_meter_rejects_uncached_queries() {
        let twin = six_row_twin();
        let w = WorkloadId::new("w1");
        let a = Configuration::from_indices(twin.space(), vec![0, 0]).unwrap();
        let b = Configuration::from_indices(twin.space(), vec![0, 1]).unwrap();
        let mut meter = BudgetMeter::new(1);
        twin.measure(&w, &a, &mut meter).unwrap();
        assert!(twin.measure(&w, &b, &mut meter).is_err());
        // cached queries still succeed
        assert!(twin.measure(&w, &a, &mut meter).is_ok());
    }

    #[test]
    fn load_rejects_out_of_domain_row() {
        let dir = tempfile::tempdir().unwrap();
        let descriptor = dir.path().join("d.json");
        let data = dir.path().join("data.csv");
        fs::write(
            &descriptor,
            r#"{
                "system": "toy",
                "objective": {"direction": "minimize", "metric": "runtime_s"},
                "options": [
                    {"name": "a", "kind": "integer", "domain": [0, 1]},
                    {"name": "b", "kind": "integer", "domain": [1, 2, 3]}
                ],
                "workloads": ["w1"]
            }"#,
        )
        .unwrap();
        let mut f = fs::File::create(&data).unwrap();
        writeln!(f, "a,b,workload,performance").unwrap();
        writeln!(f, "0,4,w1,1.0").unwrap();
        drop(f);
        let err = CyberTwin::load(&descriptor, &data).unwrap_err();
        let text = err.to_string();
        assert!(text.contains(":2:"), "should name the offending row: {text}");
    }

    #[test]
    fn load_round_trips_small_dataset() {
        let dir = tempfile::tempdir().unwrap();
        let descriptor = dir.path().join("d.json");
        let data = dir.path().join("data.csv");
        fs::write(
            &descriptor,
            r#"{
                "system": "toy",
                "objective": {"direction": "minimize", "metric": "runtime_s"},
                "options": [
                    {"name": "a", "kind": "integer", "domain": [0, 1]},
                    {"name": "b", "kind": "enumerated", "domain": ["slow", "fast"]}
                ],
                "workloads": ["w1", "w2"]
            }"#,
        )
        .unwrap();
        let mut f = fs::File::create(&data).unwrap();
        writeln!(f, "a,b,workload,performance").unwrap();
        for (a, b, w, p) in [
            (0, "slow", "w1", 5.0),
            (0, "fast", "w1", 3.0),
            (1, "slow", "w2", 2.5),
            (1, "fast", "w2", 4.5),
        ] {
            writeln!(f, "{a},{b},{w},{p}").unwrap();
        }
        drop(f);
        let (twin, summary) = CyberTwin::load(&descriptor, &data).unwrap();
        assert_eq!(summary.total_rows, 4);
        assert_eq!(twin.valid_count(&WorkloadId::new("w1")), 2);
        assert_eq!(twin.valid_count(&WorkloadId::new("w2")), 2);
    }

    #[test]
    fn penalty_dominates_every_observation() {
        let mut state = 0x9a7eu64;
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (state >> 33) as f64 / (1u64 << 31) as f64 * 100.0
        };
        for dir in [Direction::Minimize, Direction::Maximize] {
            for _ in 0..50 {
                let space = ConfigSpace::new(
                    vec![OptionDef::integer("a", (0..12).collect::<Vec<_>>())],
                    PerformanceObjective::new(dir, "m"),
                )
                .unwrap();
                let w = WorkloadId::new("w1");
                let objective = space.objective().clone();
                let rows: Vec<_> = (0..12u16)
                    .map(|i| {
                        (
                            Configuration::from_indices(&space, vec![i]).unwrap(),
                            w.clone(),
                            next(),
                        )
                    })
                    .collect();
                let values: Vec<f64> = rows.iter().map(|(_, _, p)| *p).collect();
                let twin = CyberTwin::from_rows("toy", space, vec![w.clone()], rows).unwrap();
                let penalty = twin.penalty(&w).unwrap();
                for v in values {
                    assert!(objective.is_improvement(v, penalty), "{v} vs {penalty}");
                }
            }
        }
    }

    #[test]
    fn charging_meter_bills_invalid_queries() {
        let space = ConfigSpace::new(
            vec![OptionDef::integer("a", [0, 1, 2])],
            PerformanceObjective::new(Direction::Minimize, "m"),
        )
        .unwrap();
        let w = WorkloadId::new("w1");
        let c0 = Configuration::from_indices(&space, vec![0]).unwrap();
        let off = Configuration::from_indices(&space, vec![2]).unwrap();
        let twin =
            CyberTwin::from_rows("toy", space, vec![w.clone()], [(c0, w.clone(), 1.0)]).unwrap();
        let mut meter = BudgetMeter::charging_invalid(10);
        let m = twin.measure(&w, &off, &mut meter).unwrap();
        assert!(!m.valid);
        assert_eq!(meter.consumed(), 1);
    }

    #[test]
    fn table_scale_load_counts_every_row() {
        // 190 configurations x 13 workloads = 2470 entries
        let dir = tempfile::tempdir().unwrap();
        let descriptor = dir.path().join("d.json");
        let data = dir.path().join("data.csv");
        let workloads: Vec<String> = (1..=13).map(|i| format!("\"w{i}\"")).collect();
        fs::write(
            &descriptor,
            format!(
                r#"{{
                    "system": "scale",
                    "objective": {{"direction": "minimize", "metric": "runtime_s"}},
                    "options": [
                        {{"name": "x", "kind": "integer", "domain": [{}]}},
                        {{"name": "y", "kind": "integer", "domain": [{}]}}
                    ],
                    "workloads": [{}]
                }}"#,
                (0..10).map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                (0..19).map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                workloads.join(","),
            ),
        )
        .unwrap();
        let mut f = fs::File::create(&data).unwrap();
        writeln!(f, "x,y,workload,performance").unwrap();
        for w in 1..=13 {
            for x in 0..10 {
                for y in 0..19 {
                    writeln!(f, "{x},{y},w{w},{}", (x * 19 + y + w) as f64).unwrap();
                }
            }
        }
        drop(f);
        let (twin, summary) = CyberTwin::load(&descriptor, &data).unwrap();
        assert_eq!(summary.total_rows, 2470);
        assert_eq!(twin.workloads().len(), 13);
        for w in twin.workloads() {
            assert_eq!(twin.valid_count(w), 190);
        }
    }

    #[test]
    fn wildcard_matcher_handles_prefix_and_suffix() {
        assert!(wildcard_match("data-*.csv", "data-w1.csv"));
        assert!(wildcard_match("*.csv", "x.csv"));
        assert!(!wildcard_match("data-*.csv", "other-w1.csv"));
        assert!(wildcard_match("exact.csv", "exact.csv"));
    }
}
