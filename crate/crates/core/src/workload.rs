//! Workload definitions: operators, models, device descriptions, scenarios.
//!
//! A scenario bundles N operator sequences (one per tenant model) with the
//! device they share. Each operator carries an analytic resource footprint
//! (flops, bytes, host-side invoke overhead) from which the simulator derives
//! roofline times and boundedness classes.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rng::sub_rng;

/// Operator class. The class is descriptive; whether an operator is
/// compute- or memory-bound is decided by its flops/bytes ratio against
/// the device, not by the kind tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OpKind {
    Conv,
    Bn,
    Relu,
    Pooling,
    ResidualAdd,
    Fc,
}

/// One layer's resource footprint.
///
/// `id` is the 1-based position inside its model; ids within a model form
/// the contiguous sequence `1..=len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Operator {
    pub id: usize,
    pub kind: OpKind,
    /// Compute work in floating-point operations.
    pub flops: f64,
    /// Memory traffic in bytes, reads plus writes.
    pub bytes: f64,
    /// Host-side launch cost in microseconds.
    pub invoke_overhead_us: f64,
}

/// One tenant model: an ordered operator sequence. Multi-branch topologies
/// are serialized into a single sequence before they get here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub name: String,
    pub operators: Vec<Operator>,
}

impl ModelSpec {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }
}

/// Host-side operator launch order within a stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IssueOrder {
    /// Issue each stream's whole slice before moving to the next stream.
    DepthFirst,
    /// Round-robin one operator per stream until all are issued.
    BreadthFirst,
}

/// Analytic device description.
///
/// `max_concurrency` is the number of operators that make progress
/// simultaneously without queuing; the contention coefficients are the
/// dimensionless penalty slopes applied per excess co-resident operator of
/// the same boundedness class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpuSpec {
    /// Device compute throughput, FLOP/s.
    pub peak_flops: f64,
    /// Device memory bandwidth, bytes/s.
    pub mem_bandwidth: f64,
    pub max_concurrency: usize,
    pub compute_contention_coeff: f64,
    pub memory_contention_coeff: f64,
    /// Cost of one stage barrier, microseconds.
    #[serde(rename = "sync_overhead")]
    pub sync_overhead_us: f64,
    pub issue_order: IssueOrder,
}

/// A multi-tenant inference task: the models and the device they share.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub gpu: GpuSpec,
    pub models: Vec<ModelSpec>,
}

impl Scenario {
    /// Operator count per model, in stream order.
    pub fn model_lens(&self) -> Vec<usize> {
        self.models.iter().map(ModelSpec::len).collect()
    }

    pub fn stream_count(&self) -> usize {
        self.models.len()
    }

    /// Stable fingerprint of the scenario contents, used to guard against
    /// combining results computed on different inputs.
    pub fn digest(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("scenario serializes");
        let hash = Sha256::digest(&bytes);
        hash.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    /// Check every type invariant, naming the offending field on failure.
    pub fn validate(&self) -> Result<()> {
        validate_gpu(&self.gpu)?;
        if self.models.is_empty() {
            return Err(Error::Validation("models: must not be empty".into()));
        }
        for (m, model) in self.models.iter().enumerate() {
            validate_model(model).map_err(|e| match e {
                Error::Validation(msg) => Error::Validation(format!("models[{m}].{msg}")),
                other => other,
            })?;
        }
        Ok(())
    }
}

fn ensure_finite(value: f64, field: &str) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::Validation(format!("{field}: must be finite")));
    }
    Ok(())
}

fn validate_gpu(gpu: &GpuSpec) -> Result<()> {
    ensure_finite(gpu.peak_flops, "gpu.peak_flops")?;
    ensure_finite(gpu.mem_bandwidth, "gpu.mem_bandwidth")?;
    ensure_finite(gpu.compute_contention_coeff, "gpu.compute_contention_coeff")?;
    ensure_finite(gpu.memory_contention_coeff, "gpu.memory_contention_coeff")?;
    ensure_finite(gpu.sync_overhead_us, "gpu.sync_overhead")?;
    if gpu.peak_flops <= 0.0 {
        return Err(Error::Validation("gpu.peak_flops: must be > 0".into()));
    }
    if gpu.mem_bandwidth <= 0.0 {
        return Err(Error::Validation("gpu.mem_bandwidth: must be > 0".into()));
    }
    if gpu.max_concurrency < 1 {
        return Err(Error::Validation("gpu.max_concurrency: must be >= 1".into()));
    }
    if gpu.compute_contention_coeff < 0.0 {
        return Err(Error::Validation(
            "gpu.compute_contention_coeff: must be >= 0".into(),
        ));
    }
    if gpu.memory_contention_coeff < 0.0 {
        return Err(Error::Validation(
            "gpu.memory_contention_coeff: must be >= 0".into(),
        ));
    }
    if gpu.sync_overhead_us < 0.0 {
        return Err(Error::Validation("gpu.sync_overhead: must be >= 0".into()));
    }
    Ok(())
}

fn validate_model(model: &ModelSpec) -> Result<()> {
    if model.operators.is_empty() {
        return Err(Error::Validation("operators: must not be empty".into()));
    }
    for (i, op) in model.operators.iter().enumerate() {
        ensure_finite(op.flops, &format!("operators[{i}].flops"))?;
        ensure_finite(op.bytes, &format!("operators[{i}].bytes"))?;
        ensure_finite(
            op.invoke_overhead_us,
            &format!("operators[{i}].invoke_overhead_us"),
        )?;
        if op.id != i + 1 {
            return Err(Error::Validation(format!(
                "operators[{i}].id: expected {} (ids must run 1..=len), found {}",
                i + 1,
                op.id
            )));
        }
        if op.flops < 0.0 {
            return Err(Error::Validation(format!(
                "operators[{i}].flops: must be >= 0"
            )));
        }
        if op.bytes < 0.0 {
            return Err(Error::Validation(format!(
                "operators[{i}].bytes: must be >= 0"
            )));
        }
        if op.flops == 0.0 && op.bytes == 0.0 {
            return Err(Error::Validation(format!(
                "operators[{i}]: flops and bytes must not both be zero"
            )));
        }
        // The zoo always uses a positive overhead; zero is accepted so that
        // overhead-free analytical scenarios remain constructible.
        if op.invoke_overhead_us < 0.0 {
            return Err(Error::Validation(format!(
                "operators[{i}].invoke_overhead_us: must be >= 0"
            )));
        }
    }
    Ok(())
}

/// Load a scenario document, validating every invariant.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    let scenario: Scenario = serde_json::from_str(&text).map_err(|source| Error::Parse {
        path: path.display().to_string(),
        source,
    })?;
    scenario.validate()?;
    Ok(scenario)
}

/// Write a scenario document. `load_scenario` of the result compares equal
/// to the input.
pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(scenario).expect("scenario serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

// ---------------------------------------------------------------------------
// Synthetic model zoo
// ---------------------------------------------------------------------------

/// Default per-operator launch overhead, microseconds.
pub const DEFAULT_INVOKE_OVERHEAD_US: f64 = 5.0;

const BYTES_PER_ELEM: f64 = 4.0;

/// Tracks activation shape while a recipe walks the layer stack.
struct ShapeState {
    channels: usize,
    spatial: usize,
}

struct ModelBuilder {
    ops: Vec<Operator>,
    shape: ShapeState,
}

impl ModelBuilder {
    fn new(input_channels: usize, input_spatial: usize) -> Self {
        ModelBuilder {
            ops: Vec::new(),
            shape: ShapeState {
                channels: input_channels,
                spatial: input_spatial,
            },
        }
    }

    fn push(&mut self, kind: OpKind, flops: f64, bytes: f64) {
        self.ops.push(Operator {
            id: self.ops.len() + 1,
            kind,
            flops,
            bytes,
            invoke_overhead_us: DEFAULT_INVOKE_OVERHEAD_US,
        });
    }

    fn conv(&mut self, kernel: usize, out_channels: usize, stride: usize) {
        let c_in = self.shape.channels as f64;
        let c_out = out_channels as f64;
        let h_in = self.shape.spatial as f64;
        let out_spatial = (self.shape.spatial + stride - 1) / stride;
        let h_out = out_spatial as f64;
        let k2 = (kernel * kernel) as f64;
        let flops = 2.0 * k2 * c_in * c_out * h_out * h_out;
        let bytes =
            BYTES_PER_ELEM * (c_in * h_in * h_in + c_out * h_out * h_out + k2 * c_in * c_out);
        self.push(OpKind::Conv, flops, bytes);
        self.shape.channels = out_channels;
        self.shape.spatial = out_spatial;
    }

    fn bn(&mut self) {
        let c = self.shape.channels as f64;
        let hw = (self.shape.spatial * self.shape.spatial) as f64;
        let flops = 2.0 * c * hw;
        let bytes = BYTES_PER_ELEM * (2.0 * c * hw + 2.0 * c);
        self.push(OpKind::Bn, flops, bytes);
    }

    fn relu(&mut self) {
        let elems = (self.shape.channels * self.shape.spatial * self.shape.spatial) as f64;
        self.push(OpKind::Relu, elems, BYTES_PER_ELEM * 2.0 * elems);
    }

    fn pool(&mut self, kernel: usize, stride: usize) {
        let c = self.shape.channels as f64;
        let h_in = self.shape.spatial as f64;
        let out_spatial = (self.shape.spatial + stride - 1) / stride;
        let h_out = out_spatial as f64;
        let flops = (kernel * kernel) as f64 * c * h_out * h_out;
        let bytes = BYTES_PER_ELEM * (c * h_in * h_in + c * h_out * h_out);
        self.push(OpKind::Pooling, flops, bytes);
        self.shape.spatial = out_spatial;
    }

    fn global_pool(&mut self) {
        let c = self.shape.channels as f64;
        let hw = (self.shape.spatial * self.shape.spatial) as f64;
        let flops = c * hw;
        let bytes = BYTES_PER_ELEM * (c * hw + c);
        self.push(OpKind::Pooling, flops, bytes);
        self.shape.spatial = 1;
    }

    fn residual_add(&mut self) {
        let elems = (self.shape.channels * self.shape.spatial * self.shape.spatial) as f64;
        self.push(OpKind::ResidualAdd, elems, BYTES_PER_ELEM * 3.0 * elems);
    }

    fn fc(&mut self, out_features: usize) {
        let c_in = (self.shape.channels * self.shape.spatial * self.shape.spatial) as f64;
        let c_out = out_features as f64;
        let flops = 2.0 * c_in * c_out;
        let bytes = BYTES_PER_ELEM * (c_in + c_out + c_in * c_out);
        self.push(OpKind::Fc, flops, bytes);
        self.shape.channels = out_features;
        self.shape.spatial = 1;
    }

    fn finish(self, name: &str) -> ModelSpec {
        ModelSpec {
            name: name.to_string(),
            operators: self.ops,
        }
    }
}

/// Width jitter keeps zoos seed-dependent while preserving each model's
/// structure (operator counts never change) and magnitude band.
fn jitter_width(rng: &mut impl Rng, base: usize) -> usize {
    let step: i64 = rng.random_range(-1..=1);
    (base as i64 + 4 * step) as usize
}

fn alex_recipe(width: usize) -> ModelSpec {
    let mut b = ModelBuilder::new(3, 224);
    b.conv(11, width, 4);
    b.relu();
    b.pool(3, 2);
    b.conv(5, width * 3, 1);
    b.relu();
    b.pool(3, 2);
    b.conv(3, width * 6, 1);
    b.relu();
    b.conv(3, width * 4, 1);
    b.relu();
    b.conv(3, width * 4, 1);
    b.relu();
    b.pool(3, 2);
    b.fc(1024);
    b.relu();
    b.fc(1024);
    b.relu();
    b.fc(1000);
    b.finish("Alex")
}

fn vgg_recipe(width: usize) -> ModelSpec {
    // conv+relu treated as fused; 13 convs, 5 pools, 3 fc = 21 operators.
    let mut b = ModelBuilder::new(3, 224);
    let stage_convs = [2usize, 2, 3, 3, 3];
    for (stage, &convs) in stage_convs.iter().enumerate() {
        let c_out = (width << stage.min(3)).min(width * 8);
        for _ in 0..convs {
            b.conv(3, c_out, 1);
        }
        b.pool(2, 2);
    }
    b.fc(1024);
    b.fc(1024);
    b.fc(1000);
    b.finish("VGG")
}

/// Basic residual block: two 3x3 convs plus the shortcut add.
fn basic_block(b: &mut ModelBuilder, channels: usize, stride: usize) {
    b.conv(3, channels, stride);
    b.conv(3, channels, 1);
    b.residual_add();
}

/// Bottleneck residual block: 1x1 down, 3x3, 1x1 up, bn, relu, add.
fn bottleneck_block(b: &mut ModelBuilder, mid_channels: usize, stride: usize) {
    b.conv(1, mid_channels, 1);
    b.conv(3, mid_channels, stride);
    b.conv(1, mid_channels * 4, 1);
    b.bn();
    b.relu();
    b.residual_add();
}

fn resnet_basic_recipe(name: &str, width: usize, stage_blocks: [usize; 4]) -> ModelSpec {
    let mut b = ModelBuilder::new(3, 224);
    b.conv(7, width, 2);
    b.relu();
    b.pool(3, 2);
    for (stage, &blocks) in stage_blocks.iter().enumerate() {
        let channels = width << stage;
        for block in 0..blocks {
            let stride = if stage > 0 && block == 0 { 2 } else { 1 };
            basic_block(&mut b, channels, stride);
        }
    }
    b.global_pool();
    b.fc(1000);
    b.finish(name)
}

fn resnet_bottleneck_recipe(
    name: &str,
    width: usize,
    stage_blocks: [usize; 4],
    stage_projections: bool,
) -> ModelSpec {
    let mut b = ModelBuilder::new(3, 224);
    b.conv(7, width, 2);
    b.relu();
    b.pool(3, 2);
    for (stage, &blocks) in stage_blocks.iter().enumerate() {
        let channels = width << stage;
        if stage_projections && stage > 0 {
            // Projection shortcut at each stage transition.
            b.conv(1, channels * 4, 2);
        }
        for block in 0..blocks {
            let stride = if stage > 0 && block == 0 && !stage_projections {
                2
            } else {
                1
            };
            bottleneck_block(&mut b, channels, stride);
        }
    }
    b.global_pool();
    b.fc(1000);
    b.finish(name)
}

/// Generate the six-model synthetic zoo. Identical seeds yield identical
/// zoos; operator counts are structural constants of each recipe.
pub fn make_model_zoo(seed: u64) -> Vec<ModelSpec> {
    let mut rng = sub_rng(seed, "model-zoo");
    let alex_w = jitter_width(&mut rng, 44);
    let vgg_w = jitter_width(&mut rng, 32);
    let r18_w = jitter_width(&mut rng, 78);
    let r34_w = jitter_width(&mut rng, 68);
    let r50_w = jitter_width(&mut rng, 67);
    let r101_w = jitter_width(&mut rng, 66);
    vec![
        alex_recipe(alex_w),
        vgg_recipe(vgg_w),
        resnet_basic_recipe("R18", r18_w, [2, 2, 2, 2]),
        resnet_basic_recipe("R34", r34_w, [3, 4, 6, 3]),
        resnet_bottleneck_recipe("R50", r50_w, [3, 4, 7, 3], false),
        resnet_bottleneck_recipe("R101", r101_w, [3, 4, 22, 3], true),
    ]
}

/// Device description used by zoo scenarios.
pub fn zoo_gpu() -> GpuSpec {
    GpuSpec {
        peak_flops: 14.0e12,
        mem_bandwidth: 500.0e9,
        max_concurrency: 8,
        compute_contention_coeff: 0.6,
        memory_contention_coeff: 0.6,
        sync_overhead_us: 5.0,
        issue_order: IssueOrder::BreadthFirst,
    }
}

/// Assemble a scenario from zoo models selected by name.
pub fn zoo_scenario(model_names: &[&str], seed: u64) -> Result<Scenario> {
    let zoo = make_model_zoo(seed);
    let mut models = Vec::with_capacity(model_names.len());
    for name in model_names {
        let model = zoo
            .iter()
            .find(|m| m.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Validation(format!("unknown zoo model `{name}`")))?;
        models.push(model.clone());
    }
    let scenario = Scenario {
        name: model_names.join("+"),
        gpu: zoo_gpu(),
        models,
    };
    scenario.validate()?;
    Ok(scenario)
}

/// The seven tenant combinations exercised by the comparison sweep.
pub const ZOO_COMBINATIONS: [(&str, &[&str]); 7] = [
    ("2x", &["VGG", "R18"]),
    ("2x", &["R18", "R34"]),
    ("2x", &["R34", "R50"]),
    ("2x", &["R50", "R101"]),
    ("3x", &["VGG", "R18", "R50"]),
    ("3x", &["R18", "R34", "R50"]),
    ("5x", &["VGG", "R18", "R34", "R50", "R101"]),
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoo_operator_counts_are_pinned() {
        let zoo = make_model_zoo(42);
        let counts: Vec<(String, usize)> =
            zoo.iter().map(|m| (m.name.clone(), m.len())).collect();
        let get = |name: &str| counts.iter().find(|(n, _)| n == name).unwrap().1;
        assert_eq!(get("R18"), 29);
        assert_eq!(get("R101"), 200);
        assert_eq!(get("R50"), 107);
        assert!((7..=20).contains(&get("Alex")));
        for (_, count) in &counts {
            assert!((7..=216).contains(count));
        }
        assert!((86..=216).contains(&get("R101")));
    }

    #[test]
    fn zoo_is_deterministic_per_seed() {
        assert_eq!(make_model_zoo(42), make_model_zoo(42));
        assert_ne!(make_model_zoo(1), make_model_zoo(2));
    }

    #[test]
    fn zoo_counts_stable_across_seeds() {
        for seed in 0..12 {
            let zoo = make_model_zoo(seed);
            for model in &zoo {
                assert!((7..=216).contains(&model.len()), "{}", model.name);
            }
        }
    }

    #[test]
    fn conv_ratio_dominates_pooling_ratio() {
        for seed in [1u64, 7, 42] {
            let zoo = make_model_zoo(seed);
            let mut conv_min = f64::INFINITY;
            let mut pool_max = f64::NEG_INFINITY;
            for op in zoo.iter().flat_map(|m| &m.operators) {
                let ratio = op.flops / op.bytes;
                match op.kind {
                    OpKind::Conv => conv_min = conv_min.min(ratio),
                    OpKind::Pooling => pool_max = pool_max.max(ratio),
                    _ => {}
                }
            }
            assert!(
                conv_min > pool_max,
                "conv min ratio {conv_min} vs pooling max {pool_max}"
            );
        }
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut s = zoo_scenario(&["R18", "R34"], 1).unwrap();
        s.models[0].operators[3].flops = -1.0;
        let err = s.validate().unwrap_err().to_string();
        assert!(err.contains("flops"), "{err}");

        let mut s = zoo_scenario(&["R18"], 1).unwrap();
        s.models[0].operators.clear();
        let err = s.validate().unwrap_err().to_string();
        assert!(err.contains("operators"), "{err}");

        let mut s = zoo_scenario(&["R18"], 1).unwrap();
        s.models[0].operators[5].id = 99;
        assert!(s.validate().is_err());
    }

    #[test]
    fn scenario_roundtrip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scenario.json");
        let scenario = zoo_scenario(&["Alex", "VGG", "R18", "R34", "R50"], 42).unwrap();
        save_scenario(&scenario, &path).unwrap();
        let reloaded = load_scenario(&path).unwrap();
        assert_eq!(scenario, reloaded);
    }

    #[test]
    fn load_rejects_invalid_documents() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, "{ not json").unwrap();
        assert!(matches!(load_scenario(&path), Err(Error::Parse { .. })));

        let mut scenario = zoo_scenario(&["R18"], 1).unwrap();
        scenario.models[0].operators[0].flops = -5.0;
        let text = serde_json::to_string(&scenario).unwrap();
        std::fs::write(&path, text).unwrap();
        match load_scenario(&path) {
            Err(Error::Validation(msg)) => assert!(msg.contains("flops")),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn kind_and_order_serialize_kebab_case() {
        assert_eq!(
            serde_json::to_string(&OpKind::ResidualAdd).unwrap(),
            "\"residual-add\""
        );
        assert_eq!(
            serde_json::to_string(&IssueOrder::DepthFirst).unwrap(),
            "\"depth-first\""
        );
    }
}
