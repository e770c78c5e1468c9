//! The scheduling intermediate representation.
//!
//! Each model runs on its own stream. A pointer matrix holds, per stream,
//! the sorted indices after which a synchronization barrier is inserted;
//! splitting every stream at its pointers and aligning the resulting
//! segments produces a staged schedule. The pointer matrix form is the
//! search-space element: it maps 1:1 onto the schedules it generates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::workload::{ModelSpec, Scenario};

/// A stream index paired with the model it executes. Streams and models
/// are bijective: stream `i` (1-based) runs the `i`-th model.
#[derive(Debug, Clone, Copy)]
pub struct StreamAssignment<'a> {
    pub stream_id: usize,
    pub model: &'a ModelSpec,
}

/// Enumerate the stream/model pairing of a scenario.
pub fn stream_assignments(scenario: &Scenario) -> Vec<StreamAssignment<'_>> {
    scenario
        .models
        .iter()
        .enumerate()
        .map(|(i, model)| StreamAssignment {
            stream_id: i + 1,
            model,
        })
        .collect()
}

/// Per-stream sorted barrier positions. A pointer value `p` means "barrier
/// after operator `p`", so valid positions are `1..len`. An empty row leaves
/// its stream as a single stage.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PointerMatrix {
    rows: Vec<Vec<usize>>,
}

impl PointerMatrix {
    /// Build a validated matrix. Rows must be strictly increasing (duplicates
    /// are rejected, not deduplicated) with every index inside `1..len`.
    pub fn new(rows: Vec<Vec<usize>>, model_lens: &[usize]) -> Result<Self> {
        if rows.len() != model_lens.len() {
            return Err(Error::Validation(format!(
                "pointer matrix has {} rows for {} models",
                rows.len(),
                model_lens.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            let len = model_lens[i];
            for (j, &p) in row.iter().enumerate() {
                if p < 1 || p >= len {
                    return Err(Error::Validation(format!(
                        "pointer matrix row {i} index {j}: split {p} outside 1..{len}"
                    )));
                }
                if j > 0 && row[j - 1] >= p {
                    return Err(Error::Validation(format!(
                        "pointer matrix row {i} index {j}: splits must be strictly increasing"
                    )));
                }
            }
        }
        Ok(PointerMatrix { rows })
    }

    /// The no-split matrix: every stream is one stage.
    pub fn empty(stream_count: usize) -> Self {
        PointerMatrix {
            rows: vec![Vec::new(); stream_count],
        }
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    /// Replace one row, revalidating against the model lengths.
    pub fn with_row(&self, stream: usize, row: Vec<usize>, model_lens: &[usize]) -> Result<Self> {
        let mut rows = self.rows.clone();
        rows[stream] = row;
        PointerMatrix::new(rows, model_lens)
    }

    /// Stage count of the schedule this matrix generates.
    pub fn stage_count(&self) -> usize {
        1 + self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }
}

/// Inclusive 1-based operator id range within one stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct OpRange {
    pub start: usize,
    pub end: usize,
}

impl OpRange {
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn ids(&self) -> impl Iterator<Item = usize> {
        self.start..=self.end
    }
}

impl From<[usize; 2]> for OpRange {
    fn from(v: [usize; 2]) -> Self {
        OpRange {
            start: v[0],
            end: v[1],
        }
    }
}

impl From<OpRange> for [usize; 2] {
    fn from(r: OpRange) -> Self {
        [r.start, r.end]
    }
}

/// One barrier-delimited stage: a slice per stream, `None` where the stream
/// contributes no operators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Stage {
    pub slices: Vec<Option<OpRange>>,
}

impl Stage {
    pub fn slice(&self, stream: usize) -> Option<OpRange> {
        self.slices.get(stream).copied().flatten()
    }
}

/// The full strategy: an ordered stage list. All operators of a stage must
/// finish before the next stage starts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Schedule {
    pub stages: Vec<Stage>,
}

impl Schedule {
    pub fn stage_count(&self) -> usize {
        self.stages.len()
    }
}

/// Split every stream at its pointer row and align the segments into stages.
///
/// Stage `k` holds each stream's `k`-th segment, or `None` once the stream
/// has run out of segments; the stage count is `1 + max row length`.
pub fn generate_schedule(scenario: &Scenario, rho: &PointerMatrix) -> Result<Schedule> {
    let lens = scenario.model_lens();
    // Revalidate so matrices built against one scenario cannot silently be
    // applied to another.
    let rho = PointerMatrix::new(rho.rows().to_vec(), &lens)?;
    let stage_count = rho.stage_count();
    let mut stages = vec![Stage {
        slices: vec![None; lens.len()]
    }; stage_count];
    for (stream, row) in rho.rows().iter().enumerate() {
        let len = lens[stream];
        let mut start = 1usize;
        for (k, &split) in row.iter().enumerate() {
            stages[k].slices[stream] = Some(OpRange { start, end: split });
            start = split + 1;
        }
        stages[row.len()].slices[stream] = Some(OpRange {
            start,
            end: len,
        });
    }
    Ok(Schedule { stages })
}

/// One finding from schedule validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// A stage's slice list does not match the scenario's stream count.
    StreamCount { stage: usize, found: usize, expected: usize },
    /// A slice range is malformed or outside the model.
    Range { stream: usize, stage: usize, start: usize, end: usize },
    /// Slices of one stream are out of order or overlap across stages.
    Ordering { stream: usize, stage: usize },
    /// Consecutive slices of one stream skip operators.
    Gap { stream: usize, stage: usize, expected_start: usize, found_start: usize },
    /// A stream's slices do not cover its full sequence.
    Incomplete { stream: usize, covered: usize, expected: usize },
    /// The schedule has no stages at all.
    NoStages,
    /// A stage carries no operators from any stream.
    EmptyStage { stage: usize },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::StreamCount { stage, found, expected } => write!(
                f,
                "stage {stage}: {found} slices for {expected} streams"
            ),
            Violation::Range { stream, stage, start, end } => write!(
                f,
                "stream {stream} stage {stage}: bad range [{start},{end}]"
            ),
            Violation::Ordering { stream, stage } => {
                write!(f, "stream {stream} stage {stage}: operators out of order")
            }
            Violation::Gap { stream, stage, expected_start, found_start } => write!(
                f,
                "stream {stream} stage {stage}: expected operator {expected_start}, found {found_start}"
            ),
            Violation::Incomplete { stream, covered, expected } => write!(
                f,
                "stream {stream}: covers {covered} of {expected} operators"
            ),
            Violation::NoStages => write!(f, "schedule has no stages"),
            Violation::EmptyStage { stage } => write!(f, "stage {stage}: every slice is empty"),
        }
    }
}

/// Validation findings; empty iff every schedule invariant holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "ok");
        }
        let lines: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", lines.join("; "))
    }
}

/// Check completeness, ordering, and contiguity of a schedule against its
/// scenario. Streams idle in early stages and resuming later are legal; only
/// coverage and order matter.
pub fn validate_schedule(scenario: &Scenario, schedule: &Schedule) -> ValidationReport {
    let lens = scenario.model_lens();
    let n = lens.len();
    let mut report = ValidationReport::default();
    if schedule.stages.is_empty() {
        report.violations.push(Violation::NoStages);
        return report;
    }
    for (k, stage) in schedule.stages.iter().enumerate() {
        if stage.slices.len() != n {
            report.violations.push(Violation::StreamCount {
                stage: k,
                found: stage.slices.len(),
                expected: n,
            });
        }
        if stage.slices.iter().all(Option::is_none) {
            report.violations.push(Violation::EmptyStage { stage: k });
        }
    }
    for stream in 0..n {
        let len = lens[stream];
        let mut next = 1usize;
        let mut broken = false;
        for (k, stage) in schedule.stages.iter().enumerate() {
            let Some(range) = stage.slice(stream) else {
                continue;
            };
            if range.start > range.end || range.start < 1 || range.end > len {
                report.violations.push(Violation::Range {
                    stream,
                    stage: k,
                    start: range.start,
                    end: range.end,
                });
                broken = true;
                continue;
            }
            if range.start < next {
                report.violations.push(Violation::Ordering { stream, stage: k });
                broken = true;
                continue;
            }
            if range.start > next {
                report.violations.push(Violation::Gap {
                    stream,
                    stage: k,
                    expected_start: next,
                    found_start: range.start,
                });
                broken = true;
                next = range.end + 1;
                continue;
            }
            next = range.end + 1;
        }
        if !broken && next != len + 1 {
            report.violations.push(Violation::Incomplete {
                stream,
                covered: next - 1,
                expected: len,
            });
        }
    }
    report
}

/// Recover the pointer matrix of a schedule: each stream's segment ends,
/// except the last, are its split positions.
///
/// Exact inverse on `generate_schedule` outputs. Schedules that idle a
/// stream before exhaustion project onto the matrix with the same segment
/// boundaries, losing the idle alignment.
pub fn schedule_to_pointers(scenario: &Scenario, schedule: &Schedule) -> Result<PointerMatrix> {
    let report = validate_schedule(scenario, schedule);
    if !report.is_empty() {
        return Err(Error::InvalidSchedule(report));
    }
    let lens = scenario.model_lens();
    let mut rows = Vec::with_capacity(lens.len());
    for stream in 0..lens.len() {
        let mut row = Vec::new();
        for stage in &schedule.stages {
            if let Some(range) = stage.slice(stream) {
                if range.end < lens[stream] {
                    row.push(range.end);
                }
            }
        }
        rows.push(row);
    }
    PointerMatrix::new(rows, &lens)
}

// ---------------------------------------------------------------------------
// Pointer-space enumeration
// ---------------------------------------------------------------------------

/// Binomial coefficient, `None` on u128 overflow.
fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// Count of valid rows for a stream of `len` operators with at most
/// `max_pointers` splits.
pub fn row_space_size(len: usize, max_pointers: usize) -> Option<u128> {
    let positions = len - 1;
    let mut total: u128 = 0;
    for k in 0..=max_pointers.min(positions) {
        total = total.checked_add(binomial(positions, k)?)?;
    }
    Some(total)
}

/// Count of valid matrices: the product of per-row space sizes.
pub fn pointer_space_size(model_lens: &[usize], max_pointers: usize) -> Option<u128> {
    let mut total: u128 = 1;
    for &len in model_lens {
        total = total.checked_mul(row_space_size(len, max_pointers)?)?;
    }
    Some(total)
}

/// Map `index` (0-based) to the row at that position in the deterministic
/// enumeration order: by split count first, then lexicographically.
pub fn unrank_row(len: usize, max_pointers: usize, mut index: u128) -> Vec<usize> {
    let positions = len - 1;
    for k in 0..=max_pointers.min(positions) {
        let count = binomial(positions, k).expect("row space fits in u128");
        if index < count {
            return unrank_combination(positions, k, index);
        }
        index -= count;
    }
    panic!("row index out of range");
}

/// The `index`-th k-combination of `1..=n` in lexicographic order.
fn unrank_combination(n: usize, k: usize, mut index: u128) -> Vec<usize> {
    let mut row = Vec::with_capacity(k);
    let mut value = 1usize;
    let mut remaining = k;
    while remaining > 0 {
        let with_value = binomial(n - value, remaining - 1).expect("fits in u128");
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

/// Deterministic iterator over every valid pointer matrix with at most
/// `max_pointers` splits per row.
#[derive(Debug)]
pub struct PointerSpace {
    model_lens: Vec<usize>,
    row_counts: Vec<u128>,
    cursor: Vec<u128>,
    max_pointers: usize,
    done: bool,
    size: u128,
}

impl PointerSpace {
    pub fn size(&self) -> u128 {
        self.size
    }
}

impl Iterator for PointerSpace {
    type Item = PointerMatrix;

    fn next(&mut self) -> Option<PointerMatrix> {
        if self.done {
            return None;
        }
        let rows: Vec<Vec<usize>> = self
            .cursor
            .iter()
            .zip(&self.model_lens)
            .map(|(&idx, &len)| unrank_row(len, self.max_pointers, idx))
            .collect();
        // Odometer increment, last row fastest.
        let mut carry = true;
        for i in (0..self.cursor.len()).rev() {
            if !carry {
                break;
            }
            self.cursor[i] += 1;
            if self.cursor[i] < self.row_counts[i] {
                carry = false;
            } else {
                self.cursor[i] = 0;
            }
        }
        if carry {
            self.done = true;
        }
        let matrix =
            PointerMatrix::new(rows, &self.model_lens).expect("enumerated rows are valid");
        Some(matrix)
    }
}

/// Enumerate the pointer space, refusing (with the exact count) when it
/// exceeds `cap`.
pub fn enumerate_pointer_space(
    scenario: &Scenario,
    max_pointers_per_row: usize,
    cap: u64,
) -> Result<PointerSpace> {
    let model_lens = scenario.model_lens();
    let size = pointer_space_size(&model_lens, max_pointers_per_row)
        .ok_or(Error::SpaceTooLarge { size: u128::MAX, cap })?;
    if size > cap as u128 {
        return Err(Error::SpaceTooLarge { size, cap });
    }
    let row_counts: Vec<u128> = model_lens
        .iter()
        .map(|&len| row_space_size(len, max_pointers_per_row).expect("within cap"))
        .collect();
    Ok(PointerSpace {
        cursor: vec![0; model_lens.len()],
        model_lens,
        row_counts,
        max_pointers: max_pointers_per_row,
        done: false,
        size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::workload::{GpuSpec, IssueOrder, ModelSpec, Operator, OpKind, Scenario};

    pub(crate) fn toy_scenario(lens: &[usize]) -> Scenario {
        let models = lens
            .iter()
            .enumerate()
            .map(|(m, &len)| ModelSpec {
                name: format!("M{}", m + 1),
                operators: (1..=len)
                    .map(|id| Operator {
                        id,
                        kind: OpKind::Conv,
                        flops: 1.0e6,
                        bytes: 1.0e3,
                        invoke_overhead_us: 5.0,
                    })
                    .collect(),
            })
            .collect();
        Scenario {
            name: "toy".into(),
            gpu: GpuSpec {
                peak_flops: 1.0e12,
                mem_bandwidth: 1.0e11,
                max_concurrency: 4,
                compute_contention_coeff: 0.0,
                memory_contention_coeff: 0.0,
                sync_overhead_us: 0.0,
                issue_order: IssueOrder::DepthFirst,
            },
            models,
        }
    }

    fn ranges(stage: &Stage) -> Vec<Option<(usize, usize)>> {
        stage
            .slices
            .iter()
            .map(|s| s.map(|r| (r.start, r.end)))
            .collect()
    }

    #[test]
    fn splits_a_ten_operator_stream_at_3_5_7() {
        let scenario = toy_scenario(&[10]);
        let rho = PointerMatrix::new(vec![vec![3, 5, 7]], &[10]).unwrap();
        let schedule = generate_schedule(&scenario, &rho).unwrap();
        let segments: Vec<(usize, usize)> = schedule
            .stages
            .iter()
            .map(|s| s.slice(0).map(|r| (r.start, r.end)).unwrap())
            .collect();
        assert_eq!(segments, vec![(1, 3), (4, 5), (6, 7), (8, 10)]);
    }

    #[test]
    fn aligns_first_segments_into_stage_one() {
        let scenario = toy_scenario(&[10, 4, 6]);
        let rho = PointerMatrix::new(
            vec![vec![3, 5, 7], vec![1, 2, 3], vec![2, 4, 5]],
            &[10, 4, 6],
        )
        .unwrap();
        let schedule = generate_schedule(&scenario, &rho).unwrap();
        assert_eq!(schedule.stage_count(), 4);
        assert_eq!(
            ranges(&schedule.stages[0]),
            vec![Some((1, 3)), Some((1, 1)), Some((1, 2))]
        );
    }

    #[test]
    fn empty_rows_give_single_stage() {
        let scenario = toy_scenario(&[5, 3, 4]);
        let schedule = generate_schedule(&scenario, &PointerMatrix::empty(3)).unwrap();
        assert_eq!(schedule.stage_count(), 1);
        assert_eq!(
            ranges(&schedule.stages[0]),
            vec![Some((1, 5)), Some((1, 3)), Some((1, 4))]
        );
    }

    #[test]
    fn uneven_rows_pad_with_empty_slices() {
        let scenario = toy_scenario(&[6, 3]);
        let rho = PointerMatrix::new(vec![vec![2, 4], vec![]], &[6, 3]).unwrap();
        let schedule = generate_schedule(&scenario, &rho).unwrap();
        assert_eq!(schedule.stage_count(), 3);
        assert_eq!(schedule.stages[1].slice(1), None);
        assert_eq!(schedule.stages[2].slice(1), None);
    }

    #[test]
    fn rejects_malformed_rows() {
        assert!(PointerMatrix::new(vec![vec![0]], &[4]).is_err());
        assert!(PointerMatrix::new(vec![vec![4]], &[4]).is_err());
        assert!(PointerMatrix::new(vec![vec![2, 2]], &[4]).is_err());
        assert!(PointerMatrix::new(vec![vec![3, 1]], &[4]).is_err());
        assert!(PointerMatrix::new(vec![vec![1], vec![1]], &[4]).is_err());
        let err = PointerMatrix::new(vec![vec![9]], &[4]).unwrap_err().to_string();
        assert!(err.contains("row 0"), "{err}");
    }

    #[test]
    fn generated_schedules_validate_clean() {
        let scenario = toy_scenario(&[10, 4, 6]);
        let rho = PointerMatrix::new(
            vec![vec![3, 5, 7], vec![1, 2, 3], vec![2, 4, 5]],
            &[10, 4, 6],
        )
        .unwrap();
        let schedule = generate_schedule(&scenario, &rho).unwrap();
        assert!(validate_schedule(&scenario, &schedule).is_empty());
    }

    #[test]
    fn flags_ordering_and_completeness_violations() {
        let scenario = toy_scenario(&[4]);
        // Operator 4 scheduled before 3.
        let schedule = Schedule {
            stages: vec![
                Stage { slices: vec![Some(OpRange { start: 1, end: 2 })] },
                Stage { slices: vec![Some(OpRange { start: 4, end: 4 })] },
                Stage { slices: vec![Some(OpRange { start: 3, end: 3 })] },
            ],
        };
        let report = validate_schedule(&scenario, &schedule);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Ordering { stream: 0, stage: 2 })
                || matches!(v, Violation::Gap { stream: 0, stage: 1, .. })));

        // Operator 4 missing entirely.
        let schedule = Schedule {
            stages: vec![Stage { slices: vec![Some(OpRange { start: 1, end: 3 })] }],
        };
        let report = validate_schedule(&scenario, &schedule);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Incomplete { stream: 0, covered: 3, expected: 4 })));
    }

    #[test]
    fn recovers_pointers_from_segments() {
        let scenario = toy_scenario(&[10]);
        let rho = PointerMatrix::new(vec![vec![3, 5, 7]], &[10]).unwrap();
        let schedule = generate_schedule(&scenario, &rho).unwrap();
        let recovered = schedule_to_pointers(&scenario, &schedule).unwrap();
        assert_eq!(recovered, rho);
    }

    #[test]
    fn single_stage_maps_to_empty_rows() {
        let scenario = toy_scenario(&[5, 3]);
        let schedule = generate_schedule(&scenario, &PointerMatrix::empty(2)).unwrap();
        let recovered = schedule_to_pointers(&scenario, &schedule).unwrap();
        assert_eq!(recovered, PointerMatrix::empty(2));
    }

    #[test]
    fn rejects_invalid_schedule_in_inversion() {
        let scenario = toy_scenario(&[4]);
        let schedule = Schedule {
            stages: vec![Stage { slices: vec![Some(OpRange { start: 1, end: 3 })] }],
        };
        assert!(matches!(
            schedule_to_pointers(&scenario, &schedule),
            Err(Error::InvalidSchedule(_))
        ));
    }

    #[test]
    fn space_counts_match_combinatorics() {
        assert_eq!(row_space_size(3, 1), Some(3)); // C(2,0)+C(2,1)
        assert_eq!(row_space_size(4, 3), Some(8)); // 2^3 subsets
        assert_eq!(row_space_size(1, 2), Some(1)); // only the empty row
        assert_eq!(pointer_space_size(&[3, 3], 1), Some(9));
    }

    #[test]
    fn enumeration_yields_every_matrix_once() {
        let scenario = toy_scenario(&[3, 3]);
        let space = enumerate_pointer_space(&scenario, 1, 100).unwrap();
        assert_eq!(space.size(), 9);
        let all: Vec<PointerMatrix> = space.collect();
        assert_eq!(all.len(), 9);
        let unique: std::collections::HashSet<_> = all.iter().collect();
        assert_eq!(unique.len(), 9);
    }

    #[test]
    fn single_operator_stream_has_only_empty_row() {
        let scenario = toy_scenario(&[1, 4]);
        let space = enumerate_pointer_space(&scenario, 3, 100).unwrap();
        for matrix in space {
            assert!(matrix.rows()[0].is_empty());
        }
    }

    #[test]
    fn refuses_with_exact_count_over_cap() {
        let scenario = toy_scenario(&[3, 3]);
        match enumerate_pointer_space(&scenario, 1, 8) {
            Err(Error::SpaceTooLarge { size, cap }) => {
                assert_eq!(size, 9);
                assert_eq!(cap, 8);
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn unrank_covers_row_space() {
        let size = row_space_size(5, 2).unwrap();
        let rows: Vec<Vec<usize>> = (0..size).map(|i| unrank_row(5, 2, i)).collect();
        let unique: std::collections::HashSet<_> = rows.iter().collect();
        assert_eq!(unique.len(), rows.len());
        for row in &rows {
            assert!(row.windows(2).all(|w| w[0] < w[1]));
            assert!(row.iter().all(|&p| (1..5).contains(&p)));
        }
    }

    #[test]
    fn schedule_json_shape_is_nested_arrays() {
        let scenario = toy_scenario(&[3, 2]);
        let rho = PointerMatrix::new(vec![vec![1], vec![]], &[3, 2]).unwrap();
        let schedule = generate_schedule(&scenario, &rho).unwrap();
        let json = serde_json::to_string(&schedule).unwrap();
        assert_eq!(json, "[[[1,1],[1,2]],[[2,3],null]]");
        let parsed: Schedule = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, schedule);
        assert_eq!(serde_json::to_string(&rho).unwrap(), "[[1],[]]");
    }
}
