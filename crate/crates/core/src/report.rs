//! Render timelines, search traces, and comparison tables into reviewable
//! documents: fixed-width text Gantt charts, dependency-free SVG, and
//! markdown tables.

use std::fmt::Write as _;

use crate::sim::{utilization, Timeline, UtilSample};

/// Output flavor for the Gantt renderer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GanttFormat {
    Text,
    Svg,
}

const GANTT_COLS: usize = 100;

/// Render a timeline as a Gantt chart: one lane per stream, block length
/// proportional to span duration, barrier marks at stage boundaries.
/// The text form is deterministic and golden-test stable.
pub fn render_gantt(timeline: &Timeline, format: GanttFormat) -> String {
    match format {
        GanttFormat::Text => render_gantt_text(timeline),
        GanttFormat::Svg => render_gantt_svg(timeline),
    }
}

fn stream_count(timeline: &Timeline) -> usize {
    timeline
        .op_spans
        .iter()
        .map(|s| s.stream + 1)
        .max()
        .unwrap_or(0)
}

fn render_gantt_text(timeline: &Timeline) -> String {
    let total = timeline.total_latency_us;
    let us_per_col = total / GANTT_COLS as f64;
    let streams = stream_count(timeline);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "gantt total_us={total:.6} cols={GANTT_COLS} us_per_col={us_per_col:.6}"
    );
    let col_of = |t: f64| -> usize { ((t / us_per_col) as usize).min(GANTT_COLS - 1) };
    for stream in 0..streams {
        let mut lane = vec![' '; GANTT_COLS];
        for span in timeline.op_spans.iter().filter(|s| s.stream == stream) {
            let from = col_of(span.start_us);
            let to = col_of(span.end_us.max(span.start_us)).max(from);
            let glyph = if span.op_id % 2 == 1 { '#' } else { '=' };
            for cell in lane.iter_mut().take(to + 1).skip(from) {
                *cell = glyph;
            }
        }
        let lane: String = lane.into_iter().collect();
        let _ = writeln!(out, "S{:<2}|{lane}|", stream + 1);
    }
    let mut axis = vec!['-'; GANTT_COLS];
    for &boundary in &timeline.stage_boundaries {
        axis[col_of(boundary)] = '|';
    }
    let axis: String = axis.into_iter().collect();
    let _ = writeln!(out, "bar|{axis}|");
    out
}

fn render_gantt_svg(timeline: &Timeline) -> String {
    let streams = stream_count(timeline);
    let lane_height = 24.0;
    let left = 50.0;
    let width = 900.0;
    let height = lane_height * streams as f64 + 40.0;
    let total = timeline.total_latency_us.max(1e-9);
    let x_of = |t: f64| left + t / total * (width - left - 10.0);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let palette = ["#4878d0", "#ee854a", "#6acc64", "#d65f5f", "#956cb4", "#8c613c"];
    for stream in 0..streams {
        let y = 20.0 + stream as f64 * lane_height;
        let _ = writeln!(
            out,
            "  <text x=\"4\" y=\"{:.1}\" font-size=\"12\">S{}</text>",
            y + 14.0,
            stream + 1
        );
        for span in timeline.op_spans.iter().filter(|s| s.stream == stream) {
            let x = x_of(span.start_us);
            let w = (x_of(span.end_us) - x).max(0.5);
            let color = palette[span.stage % palette.len()];
            let _ = writeln!(
                out,
                "  <rect x=\"{x:.2}\" y=\"{:.1}\" width=\"{w:.2}\" height=\"{:.1}\" fill=\"{color}\" stroke=\"none\"><title>s{}.op{} [{:.2},{:.2}]us</title></rect>",
                y + 2.0,
                lane_height - 4.0,
                span.stream + 1,
                span.op_id,
                span.start_us,
                span.end_us
            );
        }
    }
    for &boundary in &timeline.stage_boundaries {
        let x = x_of(boundary);
        let _ = writeln!(
            out,
            "  <line x1=\"{x:.2}\" y1=\"14\" x2=\"{x:.2}\" y2=\"{:.1}\" stroke=\"#333\" stroke-dasharray=\"3,2\"/>",
            20.0 + streams as f64 * lane_height
        );
    }
    let _ = writeln!(
        out,
        "  <text x=\"{left:.0}\" y=\"{:.1}\" font-size=\"11\">total {:.2} us</text>",
        height - 8.0,
        timeline.total_latency_us
    );
    out.push_str("</svg>\n");
    out
}

/// Running minimum of recorded latencies by evaluation index.
pub fn prefix_min(latencies: &[f64]) -> Vec<f64> {
    let mut best = f64::INFINITY;
    latencies
        .iter()
        .map(|&l| {
            best = best.min(l);
            best
        })
        .collect()
}

/// One search trace for curve rendering.
pub struct SearchCurve {
    pub label: String,
    pub latencies_us: Vec<f64>,
}

/// Render prefix-min latency vs. evaluation index for each search trace,
/// with horizontal reference lines for the baselines.
pub fn render_search_curve(curves: &[SearchCurve], baselines: &[(String, f64)]) -> String {
    let width = 720.0;
    let height = 360.0;
    let left = 70.0;
    let bottom = height - 40.0;
    let top = 20.0;
    let max_evals = curves
        .iter()
        .map(|c| c.latencies_us.len())
        .max()
        .unwrap_or(1)
        .max(1);
    let mut lat_min = f64::INFINITY;
    let mut lat_max = f64::NEG_INFINITY;
    for value in curves
        .iter()
        .flat_map(|c| c.latencies_us.iter().copied())
        .chain(baselines.iter().map(|(_, l)| *l))
    {
        lat_min = lat_min.min(value);
        lat_max = lat_max.max(value);
    }
    if !lat_min.is_finite() {
        lat_min = 0.0;
        lat_max = 1.0;
    }
    if lat_max <= lat_min {
        lat_max = lat_min + 1.0;
    }
    let pad = (lat_max - lat_min) * 0.05;
    let (lo, hi) = (lat_min - pad, lat_max + pad);
    let x_of = |i: usize| left + i as f64 / max_evals as f64 * (width - left - 20.0);
    let y_of = |l: f64| bottom - (l - lo) / (hi - lo) * (bottom - top);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{bottom}\" stroke=\"#000\"/>"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{left}\" y1=\"{bottom}\" x2=\"{:.0}\" y2=\"{bottom}\" stroke=\"#000\"/>",
        width - 20.0
    );
    let _ = writeln!(
        out,
        "  <text x=\"8\" y=\"{:.0}\" font-size=\"11\" transform=\"rotate(-90 12,{:.0})\">latency (us)</text>",
        (top + bottom) / 2.0,
        (top + bottom) / 2.0
    );
    let _ = writeln!(
        out,
        "  <text x=\"{:.0}\" y=\"{:.0}\" font-size=\"11\">evaluations</text>",
        (left + width) / 2.0 - 30.0,
        height - 8.0
    );
    let palette = ["#d65f5f", "#6acc64", "#4878d0", "#956cb4"];
    for (ci, curve) in curves.iter().enumerate() {
        let series = prefix_min(&curve.latencies_us);
        let mut points = String::new();
        for (i, &l) in series.iter().enumerate() {
            let _ = write!(points, "{:.2},{:.2} ", x_of(i + 1), y_of(l));
        }
        let color = palette[ci % palette.len()];
        let _ = writeln!(
            out,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>",
            points.trim_end()
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.0}\" y=\"{:.0}\" font-size=\"11\" fill=\"{color}\">{}</text>",
            width - 150.0,
            top + 14.0 * (ci as f64 + 1.0),
            curve.label
        );
    }
    for (bi, (label, latency)) in baselines.iter().enumerate() {
        let y = y_of(*latency);
        let _ = writeln!(
            out,
            "  <line x1=\"{left}\" y1=\"{y:.2}\" x2=\"{:.0}\" y2=\"{y:.2}\" stroke=\"#888\" stroke-dasharray=\"6,3\"/>",
            width - 20.0
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.0}\" y=\"{:.2}\" font-size=\"10\" fill=\"#555\">{label}</text>",
            left + 4.0 + 120.0 * bi as f64,
            y - 3.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Latency cell in milliseconds with the speedup over the sequential
/// baseline in parentheses.
pub fn format_speedup_cell(latency_us: f64, sequential_us: f64) -> String {
    format!(
        "{:.2} ({:.2}x)",
        latency_us / 1000.0,
        sequential_us / latency_us
    )
}

/// One comparison row: a scenario's baseline and searched latencies.
#[derive(Debug, Clone)]
pub struct TableRow {
    /// Section label, e.g. "2x" for two-tenant combinations.
    pub group: String,
    pub scenario: String,
    pub sequential_us: f64,
    pub stream_parallel_us: f64,
    pub random_us: Option<f64>,
    pub coordinate_us: Option<f64>,
}

/// Render the latency/speedup comparison as a markdown table, sectioned by
/// tenant-count group. Speedups are relative to the sequential column.
pub fn render_speedup_table(rows: &[TableRow]) -> String {
    let mut out = String::new();
    out.push_str("| Group | Models | Sequential (ms) | Stream-Parallel (ms) | Ours-Random (ms) | Ours-Coordinate (ms) |\n");
    out.push_str("|---|---|---|---|---|---|\n");
    let mut last_group = "";
    for row in rows {
        let group = if row.group == last_group { "" } else { &row.group };
        last_group = &row.group;
        let fmt_opt = |v: Option<f64>| match v {
            Some(latency) => format_speedup_cell(latency, row.sequential_us),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "| {} | {} | {:.2} | {} | {} | {} |",
            group,
            row.scenario,
            row.sequential_us / 1000.0,
            format_speedup_cell(row.stream_parallel_us, row.sequential_us),
            fmt_opt(row.random_us),
            fmt_opt(row.coordinate_us),
        );
    }
    out
}

/// Overlay utilization curves of several schedules on a shared time axis.
pub fn render_utilization_overlay(series: &[(String, &Timeline)]) -> String {
    let width = 720.0;
    let height = 300.0;
    let left = 60.0;
    let bottom = height - 36.0;
    let top = 16.0;
    let total = series
        .iter()
        .map(|(_, t)| t.total_latency_us)
        .fold(1e-9f64, f64::max);
    let x_of = |t: f64| left + t / total * (width - left - 16.0);
    let y_of = |f: f64| bottom - f * (bottom - top);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{bottom}\" stroke=\"#000\"/>"
    );
    let _ = writeln!(
        out,
        "  <line x1=\"{left}\" y1=\"{bottom}\" x2=\"{:.0}\" y2=\"{bottom}\" stroke=\"#000\"/>",
        width - 16.0
    );
    let palette = ["#4878d0", "#ee854a", "#6acc64", "#d65f5f"];
    for (si, (label, timeline)) in series.iter().enumerate() {
        let samples: Vec<UtilSample> = utilization(timeline, total / 400.0);
        let mut points = String::new();
        for sample in &samples {
            let _ = write!(
                points,
                "{:.2},{:.2} ",
                x_of(sample.time_us),
                y_of(sample.fraction)
            );
        }
        let color = palette[si % palette.len()];
        let _ = writeln!(
            out,
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.2\"/>",
            points.trim_end()
        );
        let _ = writeln!(
            out,
            "  <text x=\"{:.0}\" y=\"{:.0}\" font-size=\"11\" fill=\"{color}\">{label}</text>",
            width - 170.0,
            top + 14.0 * (si as f64 + 1.0)
        );
    }
    let _ = writeln!(
        out,
        "  <text x=\"{:.0}\" y=\"{:.0}\" font-size=\"11\">time (0..{:.1} us)</text>",
        (left + width) / 2.0 - 50.0,
        height - 6.0,
        total
    );
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{generate_schedule, OpRange, PointerMatrix, Schedule, Stage};
    use crate::sim::simulate;
    use crate::workload::{GpuSpec, IssueOrder, ModelSpec, OpKind, Operator, Scenario};

    fn scenario(lens: &[usize]) -> Scenario {
        let models = lens
            .iter()
            .enumerate()
            .map(|(m, &len)| ModelSpec {
                name: format!("M{}", m + 1),
                operators: (1..=len)
                    .map(|id| Operator {
                        id,
                        kind: OpKind::Conv,
                        flops: 5.0e6,
                        bytes: 1.0e3,
                        invoke_overhead_us: 0.1,
                    })
                    .collect(),
            })
            .collect();
        Scenario {
            name: "report-test".into(),
            gpu: GpuSpec {
                peak_flops: 1.0e12,
                mem_bandwidth: 1.0e11,
                max_concurrency: 4,
                compute_contention_coeff: 0.3,
                memory_contention_coeff: 0.3,
                sync_overhead_us: 2.0,
                issue_order: IssueOrder::DepthFirst,
            },
            models,
        }
    }

    #[test]
    fn single_stream_gantt_has_one_lane_two_blocks() {
        let s = scenario(&[2]);
        let t = simulate(&s, &generate_schedule(&s, &PointerMatrix::empty(1)).unwrap()).unwrap();
        let text = render_gantt(&t, GanttFormat::Text);
        let lanes: Vec<&str> = text.lines().filter(|l| l.starts_with('S')).collect();
        assert_eq!(lanes.len(), 1);
        assert!(lanes[0].contains('#') && lanes[0].contains('='));
    }

    #[test]
    fn idle_slice_renders_as_gap() {
        let s = scenario(&[10, 4, 6]);
        // Hand-built schedule idling stream 3 during stage 2.
        let schedule = Schedule {
            stages: vec![
                Stage {
                    slices: vec![
                        Some(OpRange { start: 1, end: 3 }),
                        Some(OpRange { start: 1, end: 1 }),
                        Some(OpRange { start: 1, end: 2 }),
                    ],
                },
                Stage {
                    slices: vec![
                        Some(OpRange { start: 4, end: 5 }),
                        Some(OpRange { start: 2, end: 2 }),
                        None,
                    ],
                },
                Stage {
                    slices: vec![
                        Some(OpRange { start: 6, end: 10 }),
                        Some(OpRange { start: 3, end: 4 }),
                        Some(OpRange { start: 3, end: 6 }),
                    ],
                },
            ],
        };
        let t = simulate(&s, &schedule).unwrap();
        let text = render_gantt(&t, GanttFormat::Text);
        let lane3 = text.lines().find(|l| l.starts_with("S3")).unwrap();
        let cells: Vec<char> = lane3.chars().collect();
        let total = t.total_latency_us;
        let upc = total / GANTT_COLS as f64;
        // Probe the middle of the stage-2 window (after the stage-1 barrier).
        let window_start = t.stage_boundaries[0];
        let window_end = t.stage_boundaries[1] - s.gpu.sync_overhead_us;
        let mid_col = (((window_start + window_end) / 2.0) / upc) as usize;
        assert_eq!(cells[4 + mid_col], ' ', "{text}");
    }

    #[test]
    fn text_gantt_is_stable() {
        let s = scenario(&[6, 3]);
        let rho = PointerMatrix::new(vec![vec![2, 4], vec![1]], &[6, 3]).unwrap();
        let t = simulate(&s, &generate_schedule(&s, &rho).unwrap()).unwrap();
        assert_eq!(
            render_gantt(&t, GanttFormat::Text),
            render_gantt(&t, GanttFormat::Text)
        );
        let svg = render_gantt(&t, GanttFormat::Svg);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn prefix_min_is_monotone() {
        let series = prefix_min(&[5.0, 7.0, 3.0, 4.0, 2.5]);
        assert_eq!(series, vec![5.0, 5.0, 3.0, 3.0, 2.5]);
    }

    #[test]
    fn curve_render_handles_baselines() {
        let curves = vec![
            SearchCurve {
                label: "random".into(),
                latencies_us: vec![900.0, 850.0, 870.0, 820.0],
            },
            SearchCurve {
                label: "coordinate".into(),
                latencies_us: vec![900.0, 830.0, 810.0],
            },
        ];
        let svg = render_search_curve(&curves, &[("stream-parallel".into(), 950.0)]);
        assert!(svg.contains("polyline"));
        assert!(svg.contains("stream-parallel"));
    }

    #[test]
    fn speedup_cells_match_reference_format() {
        assert_eq!(format_speedup_cell(10420.0, 17962.0), "10.42 (1.72x)");
        assert_eq!(format_speedup_cell(17962.0, 17962.0), "17.96 (1.00x)");
    }

    #[test]
    fn table_sections_by_group() {
        let rows = vec![
            TableRow {
                group: "2x".into(),
                scenario: "A+B".into(),
                sequential_us: 4000.0,
                stream_parallel_us: 3500.0,
                random_us: Some(3000.0),
                coordinate_us: Some(2900.0),
            },
            TableRow {
                group: "2x".into(),
                scenario: "B+C".into(),
                sequential_us: 5000.0,
                stream_parallel_us: 4200.0,
                random_us: Some(3600.0),
                coordinate_us: None,
            },
            TableRow {
                group: "3x".into(),
                scenario: "A+B+C".into(),
                sequential_us: 9000.0,
                stream_parallel_us: 8000.0,
                random_us: Some(6000.0),
                coordinate_us: Some(5800.0),
            },
        ];
        let table = render_speedup_table(&rows);
        assert_eq!(table.matches("| 2x |").count(), 1);
        assert_eq!(table.matches("| 3x |").count(), 1);
        assert!(table.contains("2.90 (1.38x)"));
        assert!(table.contains(" - "));
    }

    #[test]
    fn utilization_overlay_draws_each_series() {
        let s = scenario(&[6, 4]);
        let par = simulate(&s, &generate_schedule(&s, &PointerMatrix::empty(2)).unwrap()).unwrap();
        let rho = PointerMatrix::new(vec![vec![3], vec![2]], &[6, 4]).unwrap();
        let split = simulate(&s, &generate_schedule(&s, &rho).unwrap()).unwrap();
        let svg = render_utilization_overlay(&[
            ("stream-parallel".into(), &par),
            ("searched".into(), &split),
        ]);
        assert_eq!(svg.matches("polyline").count(), 2);
    }
}
