//! Nonparametric statistics for validating run results: two-sided Wilcoxon
//! rank-sum (exact enumeration for small samples, tie-corrected normal
//! approximation otherwise), the A12 effect size, Scott-Knott rank grouping,
//! the budget-axis speedup metric, and mean/std summaries.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::core::{PerformanceObjective, TrajectoryPoint};

#[derive(Debug, Error)]
pub enum StatsError {
    #[error("each sample needs at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("trajectory exceeds the shared budget axis ({budget})")]
    BudgetAxisMismatch { budget: u32 },
    #[error("no trajectories supplied")]
    NoTrajectories,
}

/// Labelled batch of final performance values, one per run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub label: String,
    pub values: Vec<f64>,
}

impl SampleSet {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            label: label.into(),
            values,
        }
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Exact enumeration is used whenever either side is smaller than this.
const EXACT_LIMIT: usize = 8;

/// Two-sided Wilcoxon rank-sum (Mann-Whitney) p-value.
///
/// Ties get midranks. Samples with fewer than eight values per side are
/// handled by exact enumeration over all rank assignments; larger samples use
/// the normal approximation with tie and continuity corrections. Two samples
/// with all values identical carry no evidence: p = 1.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    for sample in [a, b] {
        if sample.len() < 2 {
            return Err(StatsError::TooFewValues {
                needed: 2,
                got: sample.len(),
            });
        }
    }
    let exact_feasible = combinations(a.len() + b.len(), a.len()) <= 2e6;
    if (a.len() < EXACT_LIMIT || b.len() < EXACT_LIMIT) && exact_feasible {
        Ok(exact_rank_sum_p(a, b))
    } else {
        Ok(normal_approx_rank_sum_p(a, b))
    }
}

fn combinations(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut c = 1.0;
    for i in 0..k {
        c *= (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Midranks of the pooled values, returned in pooled input order.
fn midranks(pooled: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..pooled.len()).collect();
    order.sort_by(|&i, &j| pooled[i].partial_cmp(&pooled[j]).expect("finite values"));
    let mut ranks = vec![0.0; pooled.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && pooled[order[j + 1]] == pooled[order[i]] {
            j += 1;
        }
        let rank = (i + j + 2) as f64 / 2.0; // average of 1-based ranks i+1..=j+1
        for &idx in &order[i..=j] {
            ranks[idx] = rank;
        }
        i = j + 1;
    }
    ranks
}

fn u_statistic_from_ranks(ranks_a: &[f64]) -> f64 {
    let n_a = ranks_a.len() as f64;
    ranks_a.iter().sum::<f64>() - n_a * (n_a + 1.0) / 2.0
}

/// Exact two-sided p by enumerating every assignment of the pooled values'
/// ranks to the first sample: `2 * min(P(U <= u), P(U >= u))`, capped at 1.
pub fn exact_rank_sum_p(a: &[f64], b: &[f64]) -> f64 {
    let mut pooled: Vec<f64> = Vec::with_capacity(a.len() + b.len());
    pooled.extend_from_slice(a);
    pooled.extend_from_slice(b);
    let ranks = midranks(&pooled);
    let observed = u_statistic_from_ranks(&ranks[..a.len()]);

    let n = pooled.len();
    let k = a.len();
    let mut le = 0u64;
    let mut ge = 0u64;
    let mut total = 0u64;
    let mut selection: Vec<usize> = (0..k).collect();
    loop {
        let rank_sum: f64 = selection.iter().map(|&i| ranks[i]).sum();
        let u = rank_sum - (k * (k + 1)) as f64 / 2.0;
        total += 1;
        // tolerance only guards float summation noise among equal midrank sums
        if u <= observed + 1e-9 {
            le += 1;
        }
        if u >= observed - 1e-9 {
            ge += 1;
        }
        // next k-combination of 0..n in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return (2.0 * (le.min(ge) as f64) / total as f64).min(1.0);
            }
            i -= 1;
            if selection[i] != i + n - k {
                break;
            }
        }
        selection[i] += 1;
        for j in i + 1..k {
            selection[j] = selection[j - 1] + 1;
        }
    }
}

/// Normal approximation with midranks, tie correction and continuity
/// correction.
pub fn normal_approx_rank_sum_p(a: &[f64], b: &[f64]) -> f64 {
    let n_a = a.len() as f64;
    let n_b = b.len() as f64;
    let n = n_a + n_b;
    let mut pooled: Vec<f64> = Vec::with_capacity(a.len() + b.len());
    pooled.extend_from_slice(a);
    pooled.extend_from_slice(b);
    let ranks = midranks(&pooled);
    let u = u_statistic_from_ranks(&ranks[..a.len()]);

    let mut sorted = pooled.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite values"));
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let mut j = i;
        while j + 1 < sorted.len() && sorted[j + 1] == sorted[i] {
            j += 1;
        }
        let t = (j - i + 1) as f64;
        tie_term += t * t * t - t;
        i = j + 1;
    }

    let mean = n_a * n_b / 2.0;
    let variance = n_a * n_b / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if variance <= 0.0 {
        return 1.0; // all pooled values identical
    }
    let z = ((u - mean).abs() - 0.5).max(0.0) / variance.sqrt();
    (libm::erfc(z / std::f64::consts::SQRT_2)).min(1.0)
}

/// Vargha-Delaney effect size: the probability that a value drawn from `a`
/// exceeds one drawn from `b`, with ties counted half.
pub fn a12(a: &[f64], b: &[f64]) -> f64 {
    let mut wins = 0.0;
    for &x in a {
        for &y in b {
            if x > y {
                wins += 1.0;
            } else if x == y {
                wins += 0.5;
            }
        }
    }
    wins / (a.len() * b.len()) as f64
}

/// Effect-size band treated as trivial: A12 within [0.44, 0.56].
pub const A12_TRIVIAL_LOW: f64 = 0.44;
pub const A12_TRIVIAL_HIGH: f64 = 0.56;

/// True when the effect size is outside the trivial band.
pub fn a12_non_trivial(effect: f64) -> bool {
    effect <= A12_TRIVIAL_LOW || effect >= A12_TRIVIAL_HIGH
}

/// How Scott-Knott decides whether the best split is real.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitAcceptance {
    /// Accept when the pooled halves differ with a non-trivial A12 effect.
    #[default]
    EffectSize,
    /// Classical acceptance: lambda against a chi-square critical value.
    ChiSquare,
}

/// One Scott-Knott rank group; rank 1 is best under the objective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkGroup {
    pub rank: u32,
    pub labels: Vec<String>,
    pub means: Vec<f64>,
}

/// Scott-Knott rank grouping: order the sample sets by mean (best first under
/// the objective), recursively split where the between-group sum of squares of
/// the treatment means is maximal, and keep a split only when the acceptance
/// test says the halves genuinely differ.
pub fn scott_knott(
    samples: &[SampleSet],
    objective: &PerformanceObjective,
    acceptance: SplitAcceptance,
) -> Result<Vec<SkGroup>, StatsError> {
    if samples.is_empty() {
        return Err(StatsError::TooFewValues { needed: 1, got: 0 });
    }
    for s in samples {
        if s.values.is_empty() {
            return Err(StatsError::TooFewValues { needed: 1, got: 0 });
        }
    }
    let mut ordered: Vec<&SampleSet> = samples.iter().collect();
    ordered.sort_by(|x, y| {
        objective
            .rank_key(x.mean())
            .partial_cmp(&objective.rank_key(y.mean()))
            .expect("finite means")
            .then_with(|| x.label.cmp(&y.label))
    });
    let mut groups = Vec::new();
    partition(&ordered, acceptance, &mut groups);
    Ok(groups
        .into_iter()
        .enumerate()
        .map(|(i, sets)| SkGroup {
            rank: i as u32 + 1,
            labels: sets.iter().map(|s| s.label.clone()).collect(),
            means: sets.iter().map(|s| s.mean()).collect(),
        })
        .collect())
}

fn partition<'a>(
    ordered: &[&'a SampleSet],
    acceptance: SplitAcceptance,
    out: &mut Vec<Vec<&'a SampleSet>>,
) {
    if ordered.len() < 2 {
        out.push(ordered.to_vec());
        return;
    }
    let means: Vec<f64> = ordered.iter().map(|s| s.mean()).collect();
    let grand = means.iter().sum::<f64>() / means.len() as f64;
    let mut best_split = 1;
    let mut best_delta = f64::NEG_INFINITY;
    for split in 1..ordered.len() {
        let left = &means[..split];
        let right = &means[split..];
        let ml = left.iter().sum::<f64>() / left.len() as f64;
        let mr = right.iter().sum::<f64>() / right.len() as f64;
        let delta =
            left.len() as f64 * (ml - grand).powi(2) + right.len() as f64 * (mr - grand).powi(2);
        if delta > best_delta {
            best_delta = delta;
            best_split = split;
        }
    }
    let (left, right) = ordered.split_at(best_split);
    let accept = match acceptance {
        SplitAcceptance::EffectSize => {
            let pooled_left: Vec<f64> =
                left.iter().flat_map(|s| s.values.iter().copied()).collect();
            let pooled_right: Vec<f64> =
                right.iter().flat_map(|s| s.values.iter().copied()).collect();
            a12_non_trivial(a12(&pooled_left, &pooled_right))
        }
        SplitAcceptance::ChiSquare => {
            // classical acceptance: lambda against a chi-square critical value,
            // with the variance estimate blending between- and within-treatment
            // spread of the means
            let k = means.len() as f64;
            let mut ss_within = 0.0;
            let mut dof_within = 0.0;
            let mut n_total = 0.0;
            for s in ordered {
                let m = s.mean();
                ss_within += s.values.iter().map(|v| (v - m).powi(2)).sum::<f64>();
                dof_within += (s.values.len() - 1) as f64;
                n_total += s.values.len() as f64;
            }
            let ss_means: f64 = means.iter().map(|m| (m - grand).powi(2)).sum();
            let sigma0 = if dof_within > 0.0 {
                let mean_variance = ss_within / dof_within / (n_total / k);
                (ss_means + dof_within * mean_variance) / (k + dof_within)
            } else {
                ss_means / k
            };
            if sigma0 <= 0.0 {
                false
            } else {
                let pi = std::f64::consts::PI;
                let lambda = pi / (2.0 * (pi - 2.0)) * best_delta / sigma0;
                let dof = k / (pi - 2.0);
                chi_square_sf(lambda, dof) < 0.05
            }
        }
    };
    if accept {
        partition(left, acceptance, out);
        partition(right, acceptance, out);
    } else {
        out.push(ordered.to_vec());
    }
}

/// Speedup of a candidate over a baseline on the shared budget axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Speedup {
    Ratio(f64),
    /// The candidate's mean trajectory never reaches the baseline's best.
    NotReached,
}

impl Speedup {
    pub fn ratio(&self) -> Option<f64> {
        match self {
            Speedup::Ratio(r) => Some(*r),
            Speedup::NotReached => None,
        }
    }
}

/// Mean best-so-far over runs at each measurement count `1..=budget`.
///
/// Per-run trajectories are step-extended past their last point; a run with
/// no valid measurement at all contributes `fallback` throughout.
pub fn mean_trajectory(
    runs: &[Vec<TrajectoryPoint>],
    budget: u32,
    fallback: f64,
) -> Result<Vec<f64>, StatsError> {
    if runs.is_empty() {
        return Err(StatsError::NoTrajectories);
    }
    for run in runs {
        if run.iter().any(|p| p.measurements > budget || p.measurements == 0) {
            return Err(StatsError::BudgetAxisMismatch { budget });
        }
    }
    let mut means = Vec::with_capacity(budget as usize);
    for count in 1..=budget {
        let total: f64 = runs
            .iter()
            .map(|run| {
                run.iter()
                    .rev()
                    .find(|p| p.measurements <= count)
                    .map(|p| p.best)
                    .unwrap_or(fallback)
            })
            .sum();
        means.push(total / runs.len() as f64);
    }
    Ok(means)
}

/// Speedup `s = b / m`: `b` is the smallest measurement count at which the
/// baseline's mean best-so-far reaches its own best (`T`); `m` is the smallest
/// count at which the candidate's mean is equivalent to or better than `T`.
pub fn speedup(
    baseline_runs: &[Vec<TrajectoryPoint>],
    candidate_runs: &[Vec<TrajectoryPoint>],
    objective: &PerformanceObjective,
    budget: u32,
    baseline_fallback: f64,
    candidate_fallback: f64,
) -> Result<Speedup, StatsError> {
    let baseline = mean_trajectory(baseline_runs, budget, baseline_fallback)?;
    let candidate = mean_trajectory(candidate_runs, budget, candidate_fallback)?;
    let target = *baseline
        .last()
        .expect("budget axis is non-empty for budget >= 1");
    let b = baseline
        .iter()
        .position(|&v| objective.is_at_least(v, target))
        .expect("the baseline reaches its own best")
        + 1;
    match candidate
        .iter()
        .position(|&v| objective.is_at_least(v, target))
    {
        Some(m) => Ok(Speedup::Ratio(b as f64 / (m + 1) as f64)),
        None => Ok(Speedup::NotReached),
    }
}

/// Mean and sample standard deviation (n-1 denominator); a single value has
/// no spread and is flagged degenerate with std 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub degenerate: bool,
}

pub fn summarize(values: &[f64]) -> Summary {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return Summary {
            mean,
            std: 0.0,
            degenerate: true,
        };
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Summary {
        mean,
        std: var.sqrt(),
        degenerate: false,
    }
}

/// Survival function of the chi-square distribution (upper tail).
pub fn chi_square_sf(x: f64, dof: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    gamma_q(dof / 2.0, x / 2.0)
}

/// Regularized upper incomplete gamma Q(a, x), series/continued-fraction split.
fn gamma_q(a: f64, x: f64) -> f64 {
    if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut n = a;
    for _ in 0..500 {
        n += 1.0;
        term *= x / n;
        sum += term;
        if term.abs() < sum.abs() * 1e-15 {
            break;
        }
    }
    sum * (-x + a * x.ln() - libm::lgamma(a)).exp()
}

fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-15 {
            break;
        }
    }
    h * (-x + a * x.ln() - libm::lgamma(a)).exp()
}
