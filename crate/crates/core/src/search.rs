//! Schedule search over the pointer-matrix space.
//!
//! Three drivers share one record store: uniform random sampling, coordinate
//! descent over matrix rows, and exhaustive enumeration for oracle use on
//! small spaces. The cost of a candidate is whatever the supplied cost model
//! says; the built-in one is the analytic simulator.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::baselines::{baseline_latencies, BaselineLatencies};
use crate::error::{Error, Result};
use crate::ir::{
    enumerate_pointer_space, generate_schedule, row_space_size, unrank_row, PointerMatrix,
    Schedule,
};
use crate::rng::sub_rng;
use crate::sim::simulate;
use crate::workload::Scenario;

/// Cost model interface: latency of one schedule, microseconds. Must be
/// pure — the drivers cache and replay latencies freely.
pub trait CostModel: Sync {
    fn latency_us(&self, scenario: &Scenario, schedule: &Schedule) -> Result<f64>;
}

/// The analytic simulator as a cost model.
pub struct SimCost;

impl CostModel for SimCost {
    fn latency_us(&self, scenario: &Scenario, schedule: &Schedule) -> Result<f64> {
        Ok(simulate(scenario, schedule)?.total_latency_us)
    }
}

/// Search driver configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchConfig {
    /// Maximum splits per row, `P`.
    pub pointers_per_row: usize,
    /// Rounds, `R`: sample count for random search, sweep count for
    /// coordinate descent.
    pub rounds: usize,
    /// Candidates per row per sweep, `M` (coordinate descent only).
    pub candidates_per_row: usize,
    pub seed: u64,
    /// Optional cap on total cost evaluations.
    pub evals_budget: Option<u64>,
    /// Cost profiling repeats per candidate; with a deterministic cost model
    /// one run suffices.
    pub repeats: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            pointers_per_row: 4,
            rounds: 100,
            candidates_per_row: 10,
            seed: 0,
            evals_budget: None,
            repeats: 1,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self, scenario: &Scenario) -> Result<()> {
        if self.rounds < 1 {
            return Err(Error::Validation("search.rounds: must be >= 1".into()));
        }
        if self.candidates_per_row < 1 {
            return Err(Error::Validation(
                "search.candidates_per_row: must be >= 1".into(),
            ));
        }
        if self.repeats < 1 {
            return Err(Error::Validation("search.repeats: must be >= 1".into()));
        }
        let min_len = scenario.model_lens().into_iter().min().unwrap_or(0);
        if self.pointers_per_row >= min_len {
            return Err(Error::Validation(format!(
                "search.pointers_per_row: {} must be < shortest model length {}",
                self.pointers_per_row, min_len
            )));
        }
        Ok(())
    }
}

/// One evaluated candidate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchRecord {
    pub rho: PointerMatrix,
    pub latency_us: f64,
    pub eval_index: u64,
}

/// Search outcome: the best point, the full (append-only) record trace, and
/// the baseline latencies measured on the same scenario.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub algorithm: String,
    pub scenario_digest: String,
    pub best_rho: PointerMatrix,
    pub best_schedule: Schedule,
    pub best_latency_us: f64,
    pub records: Vec<SearchRecord>,
    pub evals_used: u64,
    pub wall_time_s: f64,
    /// True when the evaluation budget ran out before the driver finished.
    pub truncated: bool,
    /// Candidates rejected for violating matrix invariants before evaluation.
    pub filtered: u64,
    pub baselines: BaselineLatencies,
}

impl SearchResult {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("result serializes");
        text.push('\n');
        text
    }
}

/// Shared record store and budget accounting.
struct Driver<'a> {
    scenario: &'a Scenario,
    cost: &'a dyn CostModel,
    repeats: usize,
    budget: Option<u64>,
    records: Vec<SearchRecord>,
    evals: u64,
    truncated: bool,
    filtered: u64,
}

impl<'a> Driver<'a> {
    fn new(scenario: &'a Scenario, cost: &'a dyn CostModel, cfg: &SearchConfig) -> Self {
        Driver {
            scenario,
            cost,
            repeats: cfg.repeats,
            budget: cfg.evals_budget,
            records: Vec::new(),
            evals: 0,
            truncated: false,
            filtered: 0,
        }
    }

    /// Evaluate one matrix, appending a record. Returns `None` once the
    /// budget is exhausted.
    fn evaluate(&mut self, rho: &PointerMatrix) -> Result<Option<f64>> {
        if let Some(budget) = self.budget {
            if self.evals >= budget {
                self.truncated = true;
                return Ok(None);
            }
        }
        let schedule = generate_schedule(self.scenario, rho)?;
        let mut acc = 0.0f64;
        for _ in 0..self.repeats {
            acc += self.cost.latency_us(self.scenario, &schedule)?;
        }
        let latency_us = acc / self.repeats as f64;
        let eval_index = self.evals;
        self.evals += 1;
        self.records.push(SearchRecord {
            rho: rho.clone(),
            latency_us,
            eval_index,
        });
        Ok(Some(latency_us))
    }

    /// Finish: the globally lowest-latency record wins; ties go to the
    /// earliest evaluation.
    fn into_result(self, algorithm: &str, started: Instant) -> Result<SearchResult> {
        let best = self
            .records
            .iter()
            .min_by(|a, b| {
                a.latency_us
                    .total_cmp(&b.latency_us)
                    .then(a.eval_index.cmp(&b.eval_index))
            })
            .cloned()
            .ok_or_else(|| Error::Validation("search produced no records".into()))?;
        let best_schedule = generate_schedule(self.scenario, &best.rho)?;
        Ok(SearchResult {
            algorithm: algorithm.to_string(),
            scenario_digest: self.scenario.digest(),
            best_rho: best.rho,
            best_schedule,
            best_latency_us: best.latency_us,
            records: self.records,
            evals_used: self.evals,
            wall_time_s: started.elapsed().as_secs_f64(),
            truncated: self.truncated,
            filtered: self.filtered,
            baselines: baseline_latencies(self.scenario)?,
        })
    }
}

/// Draw one row uniformly over the whole <=P row space of a stream.
fn sample_row_uniform(rng: &mut ChaCha8Rng, len: usize, max_pointers: usize) -> Vec<usize> {
    let space = row_space_size(len, max_pointers).expect("row space fits in u128");
    let index = rng.random_range(0..space);
    unrank_row(len, max_pointers, index)
}

/// Draw a row with the split count itself uniform over `0..=P`, then a
/// uniform subset of that size. Spreads candidates across stage counts
/// instead of concentrating on the (combinatorially dominant) max-split
/// stratum.
fn sample_row_stratified(rng: &mut ChaCha8Rng, len: usize, max_pointers: usize) -> Vec<usize> {
    let positions = len - 1;
    let k = rng.random_range(0..=max_pointers.min(positions));
    let stratum = binomial_u128(positions, k);
    let index = rng.random_range(0..stratum);
    let mut row = unrank_k_subset(positions, k, index);
    row.sort_unstable();
    row
}

/// Perturb the incumbent row: nudge one split, drop one, or insert one.
/// Keeps the walk able to refine good rows instead of only re-rolling them.
fn sample_row_local(
    rng: &mut ChaCha8Rng,
    incumbent: &[usize],
    len: usize,
    max_pointers: usize,
) -> Vec<usize> {
    let positions = len - 1;
    let mut row: Vec<usize> = incumbent.to_vec();
    let action = rng.random_range(0..3u8);
    match action {
        0 if !row.is_empty() => {
            // Move one split by a small signed step.
            let i = rng.random_range(0..row.len());
            let step = rng.random_range(1..=3usize);
            let up = rng.random_range(0..2u8) == 1;
            let p = row[i];
            row[i] = if up {
                (p + step).min(positions)
            } else {
                p.saturating_sub(step).max(1)
            };
        }
        1 if !row.is_empty() => {
            let i = rng.random_range(0..row.len());
            row.remove(i);
        }
        _ if row.len() < max_pointers.min(positions) => {
            row.push(rng.random_range(1..=positions));
        }
        _ => {}
    }
    row.sort_unstable();
    row.dedup();
    row
}

fn binomial_u128(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// The `index`-th k-subset of `1..=n`, lexicographic.
fn unrank_k_subset(n: usize, k: usize, mut index: u128) -> Vec<usize> {
    let mut row = Vec::with_capacity(k);
    let mut value = 1usize;
    let mut remaining = k;
    while remaining > 0 {
        let with_value = binomial_u128(n - value, remaining - 1);
        if index < with_value {
            row.push(value);
            remaining -= 1;
        } else {
            index -= with_value;
        }
        value += 1;
    }
    row
}

/// Uniform random search: `rounds` i.i.d. matrices drawn uniformly from the
/// pointer space, best of all evaluations. Deterministic given the seed.
pub fn random_search(
    scenario: &Scenario,
    cfg: &SearchConfig,
    cost: &dyn CostModel,
) -> Result<SearchResult> {
    let started = Instant::now();
    cfg.validate(scenario)?;
    let lens = scenario.model_lens();
    let mut rng = sub_rng(cfg.seed, "random-search");
    let mut driver = Driver::new(scenario, cost, cfg);
    'rounds: for _ in 0..cfg.rounds {
        let rho = loop {
            let rows: Vec<Vec<usize>> = lens
                .iter()
                .map(|&len| sample_row_uniform(&mut rng, len, cfg.pointers_per_row))
                .collect();
            match PointerMatrix::new(rows, &lens) {
                Ok(rho) => break rho,
                Err(_) => {
                    driver.filtered += 1;
                    continue;
                }
            }
        };
        if driver.evaluate(&rho)?.is_none() {
            break 'rounds;
        }
    }
    driver.into_result("random", started)
}

/// Coordinate descent: sweep the rows `R` times; for each row draw `M`
/// candidate replacements (cycling deterministically through the whole row
/// space when it has at most `M` elements), evaluate each against the
/// incumbent's other rows, and move the row to the best evaluated option,
/// keeping the incumbent row when no candidate beats it. The returned
/// optimum is the global record minimum, which includes the all-empty
/// starting point.
pub fn coordinate_descent_search(
    scenario: &Scenario,
    cfg: &SearchConfig,
    cost: &dyn CostModel,
) -> Result<SearchResult> {
    let started = Instant::now();
    cfg.validate(scenario)?;
    let lens = scenario.model_lens();
    let n = lens.len();
    let mut rng = sub_rng(cfg.seed, "coordinate-search");
    let mut driver = Driver::new(scenario, cost, cfg);

    let mut incumbent = PointerMatrix::empty(n);
    let Some(first) = driver.evaluate(&incumbent)? else {
        return driver.into_result("coordinate", started);
    };
    let mut best_seen = first;

    'sweeps: for _ in 0..cfg.rounds {
        let best_at_round_start = best_seen;
        for stream in 0..n {
            let mut best_row: Option<(f64, Vec<usize>)> = None;
            for m in 0..cfg.candidates_per_row {
                let row = if m % 2 == 1 {
                    sample_row_local(
                        &mut rng,
                        &incumbent.rows()[stream],
                        lens[stream],
                        cfg.pointers_per_row,
                    )
                } else {
                    sample_row_stratified(&mut rng, lens[stream], cfg.pointers_per_row)
                };
                let candidate = match incumbent.with_row(stream, row.clone(), &lens) {
                    Ok(c) => c,
                    Err(_) => {
                        driver.filtered += 1;
                        continue;
                    }
                };
                let Some(latency) = driver.evaluate(&candidate)? else {
                    break 'sweeps;
                };
                best_seen = best_seen.min(latency);
                let better = match &best_row {
                    Some((best_latency, _)) => latency < *best_latency,
                    None => true,
                };
                if better {
                    best_row = Some((latency, row));
                }
            }
            // Move to the best candidate of the batch even when it loses to
            // the incumbent row: the walk keeps exploring, and the returned
            // optimum is the global record minimum regardless.
            if let Some((_, row)) = best_row {
                incumbent = incumbent.with_row(stream, row, &lens)?;
            }
        }
        if best_seen >= best_at_round_start {
            // The sweep stalled at a coordinate-stationary point; restart
            // the walk from a fresh base so later rounds explore new cross
            // sections. The base itself is not evaluated.
            let rows: Vec<Vec<usize>> = lens
                .iter()
                .map(|&len| sample_row_stratified(&mut rng, len, cfg.pointers_per_row))
                .collect();
            incumbent = PointerMatrix::new(rows, &lens)?;
        }
    }
    driver.into_result("coordinate", started)
}

/// Exhaustive oracle: evaluate every matrix with at most `max_pointers`
/// splits per row, refusing when the space exceeds `cap`.
pub fn exhaustive_search(
    scenario: &Scenario,
    max_pointers: usize,
    cap: u64,
    cost: &dyn CostModel,
) -> Result<SearchResult> {
    let started = Instant::now();
    let space = enumerate_pointer_space(scenario, max_pointers, cap)?;
    let cfg = SearchConfig {
        pointers_per_row: max_pointers,
        ..SearchConfig::default()
    };
    let mut driver = Driver::new(scenario, cost, &cfg);
    for rho in space {
        if driver.evaluate(&rho)?.is_none() {
            break;
        }
    }
    driver.into_result("exhaustive", started)
}

/// Speedup of the searched schedule against each baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupReport {
    pub best_latency_us: f64,
    pub rows: Vec<SpeedupRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedupRow {
    pub baseline: String,
    pub baseline_latency_us: f64,
    pub speedup: f64,
}

/// Compare a search result against baseline latencies computed on the same
/// scenario. Mismatched scenario digests are a hard error.
pub fn search_baseline_gap(
    result: &SearchResult,
    baselines: &BaselineLatencies,
) -> Result<SpeedupReport> {
    if result.scenario_digest != baselines.scenario_digest {
        return Err(Error::DigestMismatch {
            left: result.scenario_digest.clone(),
            right: baselines.scenario_digest.clone(),
        });
    }
    let rows = vec![
        SpeedupRow {
            baseline: "sequential".into(),
            baseline_latency_us: baselines.sequential_us,
            speedup: baselines.sequential_us / result.best_latency_us,
        },
        SpeedupRow {
            baseline: "stream-parallel".into(),
            baseline_latency_us: baselines.stream_parallel_us,
            speedup: baselines.stream_parallel_us / result.best_latency_us,
        },
    ];
    Ok(SpeedupReport {
        best_latency_us: result.best_latency_us,
        rows,
    })
}
