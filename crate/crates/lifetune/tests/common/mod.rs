//! Synthetic twins and dataset files shared by the integration tests.
//!
//! The twins here are full grids (every cell is a valid row) so similarity
//! analysis sees only genuine ranking signal; sparse tables with off-grid
//! penalties are exercised where the tests build twins inline.

#![allow(dead_code)]

use std::fs;
use std::io::Write;
use std::path::Path;

use lifetune::core::{
    ConfigSpace, Configuration, Direction, OptionDef, PerformanceObjective, WorkloadId,
};
use lifetune::oracle::CyberTwin;

/// Deterministic pseudo-random value for a cell, uniform-ish in [10, 100).
pub fn cell_value(seed: u64, x: u16, y: u16) -> f64 {
    let mixed = splitmix(seed ^ ((x as u64) << 32) ^ (y as u64));
    10.0 + (mixed as f64 / u64::MAX as f64) * 90.0
}

pub fn splitmix(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rect_space(side_x: i64, side_y: i64) -> ConfigSpace {
    ConfigSpace::new(
        vec![
            OptionDef::integer("x", (0..side_x).collect::<Vec<_>>()),
            OptionDef::integer("y", (0..side_y).collect::<Vec<_>>()),
        ],
        PerformanceObjective::new(Direction::Minimize, "runtime_s"),
    )
    .unwrap()
}

fn full_grid_twin(
    name: &str,
    workloads: &[&str],
    value: impl Fn(usize, u16, u16) -> f64,
) -> CyberTwin {
    let (side_x, side_y) = (10u16, 20u16);
    let space = rect_space(side_x as i64, side_y as i64);
    let ids: Vec<WorkloadId> = workloads.iter().map(|w| WorkloadId::new(*w)).collect();
    let mut rows = Vec::new();
    for (w_idx, w) in ids.iter().enumerate() {
        for x in 0..side_x {
            for y in 0..side_y {
                rows.push((
                    Configuration::from_indices(&space, vec![x, y]).unwrap(),
                    w.clone(),
                    value(w_idx, x, y),
                ));
            }
        }
    }
    CyberTwin::from_rows(name, space, ids, rows).unwrap()
}

/// Rugged 200-configuration twin (10 x 20 full grid), identical performance
/// landscape under every listed workload.
pub fn identical_rugged_twin(workloads: &[&str], seed: u64) -> CyberTwin {
    full_grid_twin("rugged", workloads, |_, x, y| cell_value(seed, x, y))
}

/// Same grid, but odd-indexed workloads see the rank-reversed landscape
/// `110 - v`, so every adjacent workload pair is fully anti-correlated.
pub fn reversed_rugged_twin(workloads: &[&str], seed: u64) -> CyberTwin {
    full_grid_twin("reversed", workloads, |w_idx, x, y| {
        let v = cell_value(seed, x, y);
        if w_idx % 2 == 0 {
            v
        } else {
            110.0 - v
        }
    })
}

/// Two-tier rugged twin: two deep optima in [1, 3) over a mediocre plateau in
/// [50, 100), identical under every workload. Losing track of an optimum is
/// expensive here, which is what separates seeding policies.
pub fn tiered_rugged_twin(workloads: &[&str], seed: u64) -> CyberTwin {
    let special = [(3u16, 7u16), (8u16, 14u16)];
    full_grid_twin("tiered", workloads, move |_, x, y| {
        let unit = splitmix(seed ^ ((x as u64) << 32) ^ (y as u64)) as f64 / u64::MAX as f64;
        if let Some(rank) = special.iter().position(|&(sx, sy)| (sx, sy) == (x, y)) {
            1.0 + rank as f64 + unit
        } else {
            50.0 + unit * 50.0
        }
    })
}

/// Write a full-grid dataset (descriptor + CSV) for the file-based harness
/// paths.
pub fn write_grid_dataset(
    dir: &Path,
    workloads: &[&str],
    side_x: i64,
    side_y: i64,
    seed: u64,
) -> (std::path::PathBuf, std::path::PathBuf) {
    let descriptor = dir.join("synthetic.json");
    let data = dir.join("synthetic.csv");
    let domain = |side: i64| {
        (0..side)
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(", ")
    };
    fs::write(
        &descriptor,
        format!(
            r#"{{
  "system": "rugged",
  "objective": {{"direction": "minimize", "metric": "runtime_s"}},
  "options": [
    {{"name": "x", "kind": "integer", "domain": [{x_domain}]}},
    {{"name": "y", "kind": "integer", "domain": [{y_domain}]}}
  ],
  "workloads": [{workloads}]
}}"#,
            x_domain = domain(side_x),
            y_domain = domain(side_y),
            workloads = workloads
                .iter()
                .map(|w| format!("\"{w}\""))
                .collect::<Vec<_>>()
                .join(", "),
        ),
    )
    .unwrap();
    let mut f = fs::File::create(&data).unwrap();
    writeln!(f, "x,y,workload,performance").unwrap();
    for w in workloads {
        for x in 0..side_x as u16 {
            for y in 0..side_y as u16 {
                writeln!(f, "{x},{y},{w},{}", cell_value(seed, x, y)).unwrap();
            }
        }
    }
    (descriptor, data)
}
