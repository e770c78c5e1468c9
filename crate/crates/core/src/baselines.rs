//! Reference scheduling strategies the search is compared against.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::ir::{OpRange, Schedule, Stage};
use crate::sim::{simulate, Timeline};
use crate::workload::{IssueOrder, Scenario};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineKind {
    /// Run each model to completion before starting the next.
    Sequential,
    /// One unbarriered stage with every stream resident, depth-first issue:
    /// the default runtime behavior when models are simply put on streams.
    StreamParallel,
}

impl std::fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BaselineKind::Sequential => write!(f, "sequential"),
            BaselineKind::StreamParallel => write!(f, "stream-parallel"),
        }
    }
}

/// Build the baseline schedule for a scenario.
///
/// Sequential: one stage per model in declaration order, each holding that
/// model's full sequence with every other stream idle. Stream-parallel: the
/// single-stage schedule with every row unsplit.
pub fn baseline_schedule(scenario: &Scenario, kind: BaselineKind) -> Schedule {
    let n = scenario.stream_count();
    match kind {
        BaselineKind::Sequential => {
            let stages = (0..n)
                .map(|active| {
                    let slices = (0..n)
                        .map(|stream| {
                            (stream == active).then(|| OpRange {
                                start: 1,
                                end: scenario.models[stream].len(),
                            })
                        })
                        .collect();
                    Stage { slices }
                })
                .collect();
            Schedule { stages }
        }
        BaselineKind::StreamParallel => {
            let slices = (0..n)
                .map(|stream| {
                    Some(OpRange {
                        start: 1,
                        end: scenario.models[stream].len(),
                    })
                })
                .collect();
            Schedule {
                stages: vec![Stage { slices }],
            }
        }
    }
}

/// Simulate a baseline. Baselines model the stock runtime, so they always
/// use depth-first issue regardless of the scenario's configured order.
pub fn baseline_timeline(scenario: &Scenario, kind: BaselineKind) -> Result<Timeline> {
    let schedule = baseline_schedule(scenario, kind);
    let mut stock = scenario.clone();
    stock.gpu.issue_order = IssueOrder::DepthFirst;
    simulate(&stock, &schedule)
}

/// Baseline latencies stamped with the scenario they were computed on.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineLatencies {
    pub scenario_digest: String,
    pub sequential_us: f64,
    pub stream_parallel_us: f64,
}

/// Simulate both baselines for a scenario.
pub fn baseline_latencies(scenario: &Scenario) -> Result<BaselineLatencies> {
    Ok(BaselineLatencies {
        scenario_digest: scenario.digest(),
        sequential_us: baseline_timeline(scenario, BaselineKind::Sequential)?.total_latency_us,
        stream_parallel_us: baseline_timeline(scenario, BaselineKind::StreamParallel)?
            .total_latency_us,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::validate_schedule;
    use crate::sim::roofline_time_us;
    use crate::workload::{zoo_scenario, GpuSpec, ModelSpec, OpKind, Operator};

    fn flat_scenario(lens: &[usize], contention: f64) -> Scenario {
        let models = lens
            .iter()
            .enumerate()
            .map(|(m, &len)| ModelSpec {
                name: format!("M{}", m + 1),
                operators: (1..=len)
                    .map(|id| Operator {
                        id,
                        kind: OpKind::Conv,
                        flops: 10.0e6,
                        bytes: 100.0,
                        invoke_overhead_us: 0.1,
                    })
                    .collect(),
            })
            .collect();
        Scenario {
            name: "flat".into(),
            gpu: GpuSpec {
                peak_flops: 1.0e12,
                mem_bandwidth: 1.0e11,
                max_concurrency: 8,
                compute_contention_coeff: contention,
                memory_contention_coeff: contention,
                sync_overhead_us: 0.0,
                issue_order: IssueOrder::DepthFirst,
            },
            models,
        }
    }

    #[test]
    fn sequential_runs_one_model_per_phase() {
        let s = zoo_scenario(&["Alex", "R18", "R34"], 3).unwrap();
        let schedule = baseline_schedule(&s, BaselineKind::Sequential);
        assert!(validate_schedule(&s, &schedule).is_empty());
        assert_eq!(schedule.stage_count(), 3);
        let t = baseline_timeline(&s, BaselineKind::Sequential).unwrap();
        // No two streams overlap anywhere in the timeline.
        for a in &t.op_spans {
            for b in &t.op_spans {
                if a.stream != b.stream {
                    assert!(a.end_us <= b.start_us || b.end_us <= a.start_us);
                }
            }
        }
    }

    #[test]
    fn stream_parallel_is_one_stage() {
        let s = zoo_scenario(&["Alex", "R18", "R34"], 3).unwrap();
        let schedule = baseline_schedule(&s, BaselineKind::StreamParallel);
        assert!(validate_schedule(&s, &schedule).is_empty());
        assert_eq!(schedule.stage_count(), 1);
        assert!(schedule.stages[0].slices.iter().all(Option::is_some));
    }

    #[test]
    fn zero_contention_latencies_match_closed_forms() {
        let s = flat_scenario(&[6, 4, 9], 0.0);
        let per_stream: Vec<f64> = s
            .models
            .iter()
            .map(|m| m.operators.iter().map(|op| roofline_time_us(op, &s.gpu)).sum())
            .collect();
        let seq = baseline_timeline(&s, BaselineKind::Sequential).unwrap();
        let total: f64 = per_stream.iter().sum();
        assert!((seq.total_latency_us - total).abs() < 1e-9);
        let par = baseline_timeline(&s, BaselineKind::StreamParallel).unwrap();
        let max = per_stream.iter().cloned().fold(0.0, f64::max);
        // The longest stream here is the last one; DFS delays its start by
        // the invoke overheads of the two streams issued before it.
        let stall = (s.models[0].len() + s.models[1].len()) as f64 * 0.1;
        assert!((par.total_latency_us - (max + stall)).abs() < 1e-9);
    }

    #[test]
    fn heavy_contention_makes_stream_parallel_lose() {
        let s = flat_scenario(&[8, 8, 8], 2.0);
        let seq = baseline_timeline(&s, BaselineKind::Sequential).unwrap();
        let par = baseline_timeline(&s, BaselineKind::StreamParallel).unwrap();
        assert!(par.total_latency_us > seq.total_latency_us);
    }
}
