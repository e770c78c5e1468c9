//! Deterministic analytic device simulator.
//!
//! A schedule is scored stage by stage. Within a stage each stream's slice
//! runs serially at roofline speed, stretched by a contention penalty that
//! grows with the number of co-resident streams demanding the same resource
//! class (compute vs. memory), saturating at the device's concurrency limit.
//! Host-side invoke overheads delay operator starts according to the issue
//! order, a barrier of fixed cost closes every stage, and the next stage
//! starts only when everything before it has finished.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ir::{validate_schedule, Schedule};
use crate::workload::{GpuSpec, IssueOrder, Operator, Scenario};

/// Standalone execution time of one operator, microseconds: the roofline
/// max of compute time and memory time on an otherwise idle device.
pub fn roofline_time_us(op: &Operator, gpu: &GpuSpec) -> f64 {
    let compute_s = op.flops / gpu.peak_flops;
    let memory_s = op.bytes / gpu.mem_bandwidth;
    compute_s.max(memory_s) * 1.0e6
}

/// An operator is compute-bound iff its compute time dominates its memory
/// time on this device.
pub fn is_compute_bound(op: &Operator, gpu: &GpuSpec) -> bool {
    op.flops / gpu.peak_flops >= op.bytes / gpu.mem_bandwidth
}

/// One simulated operator execution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpSpan {
    /// 0-based stream index.
    pub stream: usize,
    /// 1-based operator id within the stream.
    pub op_id: usize,
    pub stage: usize,
    pub issue_us: f64,
    pub start_us: f64,
    pub end_us: f64,
    /// Fraction of one concurrency slot this operator occupies while
    /// running; work-preserving under contention stretch.
    pub demand: f64,
}

/// Analytic decomposition of one stage's cost. `stage_latency_us` is the
/// realized window (it also absorbs issue stalls), so it is always at least
/// the max of the three components.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageCost {
    pub compute_time_us: f64,
    pub memory_time_us: f64,
    pub serial_chain_time_us: f64,
    pub stage_latency_us: f64,
}

/// One point of the piecewise-constant utilization series: `fraction` holds
/// from `time_us` until the next sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UtilSample {
    pub time_us: f64,
    pub fraction: f64,
}

/// Full simulation output for one schedule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timeline {
    pub op_spans: Vec<OpSpan>,
    /// Completion time of each stage's barrier; the last entry equals
    /// `total_latency_us`.
    pub stage_boundaries: Vec<f64>,
    pub total_latency_us: f64,
    /// Exact step series of active-work fraction over time.
    pub utilization_series: Vec<UtilSample>,
    pub stage_costs: Vec<StageCost>,
}

/// Issue offset of one operator relative to its stage start.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpIssue {
    pub stream: usize,
    pub op_id: usize,
    pub offset_us: f64,
}

/// Issue offsets and per-stream stalls for one stage. `stalls[i]` is `None`
/// when stream `i` contributes nothing to the stage.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageIssue {
    pub order: Vec<OpIssue>,
    pub stalls: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IssuePlan {
    pub stages: Vec<StageIssue>,
}

/// Compute issue offsets for every stage of a schedule.
///
/// Depth-first order issues each stream's whole slice before moving on;
/// breadth-first round-robins one operator per stream per pass. Either way
/// the offset of an operator is the accumulated invoke overhead of every
/// operator issued before it, and a stream's stall is the offset of its
/// first operator.
pub fn apply_issue_order(scenario: &Scenario, schedule: &Schedule) -> Result<IssuePlan> {
    let report = validate_schedule(scenario, schedule);
    if !report.is_empty() {
        return Err(Error::InvalidSchedule(report));
    }
    Ok(issue_plan_unchecked(scenario, schedule, scenario.gpu.issue_order))
}

fn issue_plan_unchecked(
    scenario: &Scenario,
    schedule: &Schedule,
    order: IssueOrder,
) -> IssuePlan {
    let n = scenario.stream_count();
    let mut stages = Vec::with_capacity(schedule.stages.len());
    for stage in &schedule.stages {
        let mut sequence: Vec<(usize, usize)> = Vec::new();
        match order {
            IssueOrder::DepthFirst => {
                for stream in 0..n {
                    if let Some(range) = stage.slice(stream) {
                        sequence.extend(range.ids().map(|id| (stream, id)));
                    }
                }
            }
            IssueOrder::BreadthFirst => {
                let mut cursors: Vec<Option<(usize, usize)>> = (0..n)
                    .map(|stream| stage.slice(stream).map(|r| (r.start, r.end)))
                    .collect();
                loop {
                    let mut issued_any = false;
                    for (stream, cursor) in cursors.iter_mut().enumerate() {
                        if let Some((next, end)) = *cursor {
                            sequence.push((stream, next));
                            issued_any = true;
                            *cursor = if next < end { Some((next + 1, end)) } else { None };
                        }
                    }
                    if !issued_any {
                        break;
                    }
                }
            }
        }
        let mut clock = 0.0f64;
        let mut order_out = Vec::with_capacity(sequence.len());
        let mut stalls: Vec<Option<f64>> = vec![None; n];
        for (stream, op_id) in sequence {
            if stalls[stream].is_none() {
                stalls[stream] = Some(clock);
            }
            order_out.push(OpIssue {
                stream,
                op_id,
                offset_us: clock,
            });
            clock += scenario.models[stream].operators[op_id - 1].invoke_overhead_us;
        }
        stages.push(StageIssue {
            order: order_out,
            stalls,
        });
    }
    IssuePlan { stages }
}

/// Contention penalty slope applied to one class within a stage:
/// `coeff * (min(resident_streams, max_concurrency) - 1)`, zero when at most
/// one stream carries work of that class.
fn class_penalty(coeff: f64, resident_streams: usize, max_concurrency: usize) -> f64 {
    let saturation = resident_streams.min(max_concurrency);
    coeff * saturation.saturating_sub(1) as f64
}

/// Simulate a schedule, producing per-operator spans, stage boundaries, and
/// the utilization series. Pure: identical inputs give bit-identical output.
pub fn simulate(scenario: &Scenario, schedule: &Schedule) -> Result<Timeline> {
    let report = validate_schedule(scenario, schedule);
    if !report.is_empty() {
        return Err(Error::InvalidSchedule(report));
    }
    let gpu = &scenario.gpu;
    let n = scenario.stream_count();
    let plan = issue_plan_unchecked(scenario, schedule, gpu.issue_order);

    let mut op_spans: Vec<OpSpan> = Vec::new();
    let mut stage_boundaries = Vec::with_capacity(schedule.stages.len());
    let mut stage_costs = Vec::with_capacity(schedule.stages.len());
    let mut stage_start = 0.0f64;

    for (k, stage) in schedule.stages.iter().enumerate() {
        // Residency per class: streams whose slice carries at least one
        // operator of the class.
        let mut compute_streams = 0usize;
        let mut memory_streams = 0usize;
        for stream in 0..n {
            let Some(range) = stage.slice(stream) else { continue };
            let ops = &scenario.models[stream].operators;
            let mut has_compute = false;
            let mut has_memory = false;
            for id in range.ids() {
                if is_compute_bound(&ops[id - 1], gpu) {
                    has_compute = true;
                } else {
                    has_memory = true;
                }
            }
            compute_streams += has_compute as usize;
            memory_streams += has_memory as usize;
        }
        let pen_c = class_penalty(gpu.compute_contention_coeff, compute_streams, gpu.max_concurrency);
        let pen_m = class_penalty(gpu.memory_contention_coeff, memory_streams, gpu.max_concurrency);

        // Issue offsets for this stage, keyed per stream in op order.
        let mut offsets: Vec<Vec<f64>> = vec![Vec::new(); n];
        for issue in &plan.stages[k].order {
            offsets[issue.stream].push(issue.offset_us);
        }
        // Breadth-first interleaving still issues each stream's operators in
        // op order, so per-stream offsets are already sorted.

        let mut stage_end = stage_start;
        let mut max_compute_chain = 0.0f64;
        let mut max_memory_chain = 0.0f64;
        let mut max_serial_chain = 0.0f64;
        for stream in 0..n {
            let Some(range) = stage.slice(stream) else { continue };
            let ops = &scenario.models[stream].operators;
            let mut cursor = stage_start;
            let mut compute_chain = 0.0f64;
            let mut memory_chain = 0.0f64;
            for (slot, id) in range.ids().enumerate() {
                let op = &ops[id - 1];
                let rt = roofline_time_us(op, gpu);
                let compute_bound = is_compute_bound(op, gpu);
                let pen = if compute_bound { pen_c } else { pen_m };
                if compute_bound {
                    compute_chain += rt;
                } else {
                    memory_chain += rt;
                }
                let issue = stage_start + offsets[stream][slot];
                let start = cursor.max(issue);
                let end = start + rt * (1.0 + pen);
                op_spans.push(OpSpan {
                    stream,
                    op_id: id,
                    stage: k,
                    issue_us: issue,
                    start_us: start,
                    end_us: end,
                    demand: 1.0 / (1.0 + pen),
                });
                cursor = end;
            }
            stage_end = stage_end.max(cursor);
            max_compute_chain = max_compute_chain.max(compute_chain);
            max_memory_chain = max_memory_chain.max(memory_chain);
            max_serial_chain = max_serial_chain.max(compute_chain + memory_chain);
        }

        let stage_latency = stage_end - stage_start;
        stage_costs.push(StageCost {
            compute_time_us: (1.0 + pen_c) * max_compute_chain,
            memory_time_us: (1.0 + pen_m) * max_memory_chain,
            serial_chain_time_us: max_serial_chain,
            stage_latency_us: stage_latency,
        });
        let boundary = stage_end + gpu.sync_overhead_us;
        stage_boundaries.push(boundary);
        stage_start = boundary;
    }

    let total_latency_us = *stage_boundaries.last().expect("schedule has stages");
    let utilization_series = exact_utilization_series(&op_spans, total_latency_us, gpu.max_concurrency);

    Ok(Timeline {
        op_spans,
        stage_boundaries,
        total_latency_us,
        utilization_series,
        stage_costs,
    })
}

/// Build the exact piecewise-constant utilization series from span demands.
fn exact_utilization_series(
    spans: &[OpSpan],
    total_latency_us: f64,
    max_concurrency: usize,
) -> Vec<UtilSample> {
    struct Event {
        time: f64,
        delta: f64,
        stream: usize,
        op_id: usize,
        is_end: bool,
    }
    let mut events: Vec<Event> = Vec::with_capacity(spans.len() * 2);
    for s in spans {
        events.push(Event {
            time: s.start_us,
            delta: s.demand,
            stream: s.stream,
            op_id: s.op_id,
            is_end: false,
        });
        events.push(Event {
            time: s.end_us,
            delta: -s.demand,
            stream: s.stream,
            op_id: s.op_id,
            is_end: true,
        });
    }
    // Total order keeps float accumulation deterministic.
    events.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then(a.is_end.cmp(&b.is_end).reverse())
            .then(a.stream.cmp(&b.stream))
            .then(a.op_id.cmp(&b.op_id))
    });

    let capacity = max_concurrency as f64;
    let mut series: Vec<UtilSample> = Vec::new();
    let mut sum = 0.0f64;
    let mut i = 0;
    while i < events.len() {
        let t = events[i].time;
        while i < events.len() && events[i].time == t {
            sum += events[i].delta;
            i += 1;
        }
        let fraction = (sum.max(0.0).min(capacity)) / capacity;
        match series.last_mut() {
            Some(last) if last.time_us == t => last.fraction = fraction,
            Some(last) if last.fraction == fraction => {}
            _ => series.push(UtilSample {
                time_us: t,
                fraction,
            }),
        }
    }
    if series.first().map(|s| s.time_us > 0.0).unwrap_or(true) {
        series.insert(
            0,
            UtilSample {
                time_us: 0.0,
                fraction: 0.0,
            },
        );
    }
    let last = series.last().copied().unwrap();
    if last.time_us < total_latency_us && last.fraction != 0.0 {
        // Should not happen: all spans end before the trailing barrier.
        series.push(UtilSample {
            time_us: total_latency_us,
            fraction: 0.0,
        });
    }
    series
}

/// Resample a timeline's utilization at a uniform period.
pub fn utilization(timeline: &Timeline, sample_period_us: f64) -> Vec<UtilSample> {
    assert!(sample_period_us > 0.0, "sample period must be positive");
    let series = &timeline.utilization_series;
    let mut out = Vec::new();
    let mut t = 0.0f64;
    let mut k = 0u64;
    while t <= timeline.total_latency_us {
        let idx = series.partition_point(|s| s.time_us <= t);
        let fraction = if idx == 0 { 0.0 } else { series[idx - 1].fraction };
        out.push(UtilSample {
            time_us: t,
            fraction,
        });
        k += 1;
        t = k as f64 * sample_period_us;
    }
    out
}

/// Integral of the utilization step series times device capacity: the total
/// device-time of work performed, microseconds.
pub fn utilization_integral_us(timeline: &Timeline, max_concurrency: usize) -> f64 {
    let series = &timeline.utilization_series;
    let capacity = max_concurrency as f64;
    let mut acc = 0.0f64;
    for pair in series.windows(2) {
        acc += pair[0].fraction * (pair[1].time_us - pair[0].time_us);
    }
    if let Some(last) = series.last() {
        if last.time_us < timeline.total_latency_us {
            acc += last.fraction * (timeline.total_latency_us - last.time_us);
        }
    }
    acc * capacity
}

impl Timeline {
    /// Serialize to the JSON trace document.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("timeline serializes");
        text.push('\n');
        text
    }

    /// Export spans and barriers as Chrome trace (Trace Event Format)
    /// complete events; timestamps are microseconds as the format expects.
    pub fn to_chrome_trace(&self) -> String {
        #[derive(Serialize)]
        struct TraceEvent<'a> {
            name: String,
            cat: &'a str,
            ph: &'a str,
            ts: f64,
            dur: f64,
            pid: u32,
            tid: u32,
        }
        let mut events = Vec::with_capacity(self.op_spans.len() + self.stage_boundaries.len());
        for span in &self.op_spans {
            events.push(TraceEvent {
                name: format!("s{}.op{}", span.stream + 1, span.op_id),
                cat: "operator",
                ph: "X",
                ts: span.start_us,
                dur: span.end_us - span.start_us,
                pid: 0,
                tid: span.stream as u32 + 1,
            });
        }
        let mut prev_end = 0.0f64;
        for (k, &boundary) in self.stage_boundaries.iter().enumerate() {
            let sync_start = self.stage_costs[k].stage_latency_us + prev_end;
            events.push(TraceEvent {
                name: format!("barrier{}", k + 1),
                cat: "sync",
                ph: "X",
                ts: sync_start,
                dur: boundary - sync_start,
                pid: 0,
                tid: 0,
            });
            prev_end = boundary;
        }
        let mut text = serde_json::to_string_pretty(&events).expect("trace serializes");
        text.push('\n');
        text
    }

    /// Export the exact utilization step series as CSV.
    pub fn utilization_csv(&self) -> String {
        let mut out = String::from("time_us,fraction\n");
        for s in &self.utilization_series {
            out.push_str(&format!("{:.6},{:.6}\n", s.time_us, s.fraction));
        }
        out
    }
}
