//! Deterministic parameter-sweep engine. Each grid cell runs the full
//! pipeline (generate, decompose, evolve to the final state, measure) over a
//! number of replicates; every replicate's seed is derived from the master
//! seed and its grid coordinates, so the output CSV is byte-identical
//! regardless of worker count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::balance::final_state_from_spectrum;
use crate::blockmodel::BlockParams;
use crate::error::{Error, Result};
use crate::metrics::{assortativity, homogeneity, is_balanced, z_metric};
use crate::seeding::stable_seed;
use crate::spectral::{
    boundary_outgroup_animosity, boundary_symmetric_case, classify_params, classify_spectrum,
    eigen_sym, predict_signal, Regime, TransitionKind,
};

/// Column contract of the grid CSV.
pub const GRID_CSV_HEADER: &str =
    "axis1,axis2,replicates,mean_r,std_r,mean_h,std_h,mean_z,mean_lambda1,valid_fraction";

/// Column contract of the boundary-overlay CSV.
pub const BOUNDARY_CSV_HEADER: &str = "axis1,kind,p_out_neg";

/// Parameters a sweep axis may range over. `d` moves `d_in` and `d_out`
/// together; `p_out_neg` is the animosity axis, stored as `1 - p_out_pos`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisParam {
    D,
    DIn,
    DOut,
    PInPos,
    POutNeg,
    POutPos,
}

impl AxisParam {
    fn apply(self, params: &mut FixedParams, value: f64) {
        match self {
            AxisParam::D => {
                params.d_in = value;
                params.d_out = value;
            }
            AxisParam::DIn => params.d_in = value,
            AxisParam::DOut => params.d_out = value,
            AxisParam::PInPos => params.p_in_pos = value,
            AxisParam::POutNeg => params.p_out_pos = 1.0 - value,
            AxisParam::POutPos => params.p_out_pos = value,
        }
    }
}

/// One sweep axis: `steps` evenly spaced values from `start` to `stop`
/// inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: AxisParam,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        (0..self.steps)
            .map(|i| self.start + (self.stop - self.start) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

/// The block-model knobs a sweep holds fixed (axes overwrite their own).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedParams {
    pub n: usize,
    pub d_in: f64,
    pub d_out: f64,
    pub p_in_pos: f64,
    pub p_out_pos: f64,
    #[serde(default = "default_true")]
    pub zero_diagonal: bool,
}

fn default_true() -> bool {
    true
}

/// Metrics a sweep can be asked to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    R,
    H,
    Z,
    Lambda1,
    Regime,
}

fn all_metrics() -> Vec<Metric> {
    vec![
        Metric::R,
        Metric::H,
        Metric::Z,
        Metric::Lambda1,
        Metric::Regime,
    ]
}

/// Declarative sweep description, read from JSON.
///
/// With `symmetric_affinity` set, every cell ties the ingroup affinity to
/// the outgroup animosity (`p_in_pos = 1 - p_out_pos`) after the axes are
/// applied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub axis1: Axis,
    pub axis2: Axis,
    pub fixed: FixedParams,
    pub replicates: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub symmetric_affinity: bool,
    #[serde(default = "all_metrics")]
    pub outputs: Vec<Metric>,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, axis) in [("axis1", &self.axis1), ("axis2", &self.axis2)] {
            if axis.steps == 0 {
                return Err(Error::InvalidConfig(format!("{name} needs steps >= 1")));
            }
            for v in [axis.start, axis.stop] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::InvalidConfig(format!(
                        "{name} range must stay within [0, 1], got {v}"
                    )));
                }
            }
        }
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("replicates must be >= 1".into()));
        }
        if self.symmetric_affinity
            && (self.axis1.param == AxisParam::PInPos || self.axis2.param == AxisParam::PInPos)
        {
            return Err(Error::InvalidConfig(
                "symmetric_affinity overrides p_in_pos; it cannot also be an axis".into(),
            ));
        }
        if self.outputs.is_empty() {
            return Err(Error::InvalidConfig("outputs must not be empty".into()));
        }
        // Every cell must resolve to valid parameters.
        for &i in &[0, self.axis1.steps - 1] {
            for &j in &[0, self.axis2.steps - 1] {
                self.cell_params(i, j)?;
            }
        }
        Ok(())
    }

    /// Block parameters at grid cell `(i, j)` (seed left at 0).
    pub fn cell_params(&self, i: usize, j: usize) -> Result<BlockParams> {
        let mut fixed = self.fixed;
        AxisParam::apply(self.axis1.param, &mut fixed, self.axis1.values()[i]);
        AxisParam::apply(self.axis2.param, &mut fixed, self.axis2.values()[j]);
        if self.symmetric_affinity {
            fixed.p_in_pos = 1.0 - fixed.p_out_pos;
        }
        BlockParams::new(
            fixed.n,
            fixed.d_in,
            fixed.d_out,
            fixed.p_in_pos,
            fixed.p_out_pos,
        )
        .map(|p| p.with_zero_diagonal(fixed.zero_diagonal))
    }

    fn wants(&self, metric: Metric) -> bool {
        self.outputs.contains(&metric)
    }
}

/// Seed for replicate `k` of grid cell `(i, j)`.
pub fn cell_seed(master_seed: u64, i: usize, j: usize, k: usize) -> u64 {
    stable_seed(master_seed, &[i as u64, j as u64, k as u64])
}

/// Everything measured on one evolved replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutcomeRecord {
    pub r_pos: f64,
    pub r_neg: f64,
    pub r: f64,
    pub h: f64,
    pub z: f64,
    pub balanced: bool,
}

impl OutcomeRecord {
    pub const CSV_HEADER: &'static str = "r_pos,r_neg,r,h,z,balanced";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            fmt_f64(self.r_pos),
            fmt_f64(self.r_neg),
            fmt_f64(self.r),
            fmt_f64(self.h),
            fmt_f64(self.z),
            self.balanced
        )
    }
}

/// Result of one full pipeline run. `record` is absent (and `valid` false)
/// when the dynamics have no blow-up to evolve toward, which happens deep in
/// the antisocial corner where the leading eigenvalue is not positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellOutcome {
    pub lambda1: f64,
    pub record: Option<OutcomeRecord>,
    /// Regime predicted from the parameters alone.
    pub predicted_regime: Regime,
    /// Regime read off the realized leading eigenvector.
    pub observed_regime: Regime,
    pub valid: bool,
}

/// Runs the pipeline once: generate the network, decompose it, extract the
/// balance final state, and measure the outcome. `seed` overrides the seed
/// carried by `params`.
pub fn run_cell(params: &BlockParams, seed: u64) -> CellOutcome {
    let p = params.with_seed(seed);
    let n = p.n();
    let adj = p.generate();
    let dp = p.derive();
    let prediction = predict_signal(&dp, n);
    let predicted_regime = classify_params(&dp, n);
    // The dynamics start from Y0 = A/n; its spectrum is A's rescaled, so the
    // adjacency decomposition serves both.
    let spectrum = eigen_sym(&adj.to_dense()).expect("generated adjacency matrices are symmetric");
    let observed = classify_spectrum(&spectrum, &prediction);
    let record = final_state_from_spectrum(&spectrum).ok().map(|final_adj| {
        let a = assortativity(&final_adj).expect("complete sign matrix has ties");
        let h = homogeneity(spectrum.leading_vector()).expect("unit eigenvector is nonzero");
        let balanced = is_balanced(&final_adj)
            .expect("final state is complete")
            .balanced;
        OutcomeRecord {
            r_pos: a.r_pos,
            r_neg: a.r_neg,
            r: a.r,
            h,
            z: z_metric(a.r, h),
            balanced,
        }
    });
    CellOutcome {
        lambda1: spectrum.lambda1(),
        valid: record.is_some(),
        record,
        predicted_regime,
        observed_regime: observed.regime,
    }
}

/// Aggregates of one grid cell over its replicates. The outcome means
/// (`r`, `h`, `z`) cover valid replicates only and are `None` when the
/// metric was not requested or no replicate was valid; `mean_lambda1`
/// covers all replicates, since the leading eigenvalue exists even where
/// the dynamics have no blow-up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub axis1: f64,
    pub axis2: f64,
    pub replicates: usize,
    pub mean_r: Option<f64>,
    pub std_r: Option<f64>,
    pub mean_h: Option<f64>,
    pub std_h: Option<f64>,
    pub mean_z: Option<f64>,
    pub mean_lambda1: Option<f64>,
    pub valid_fraction: f64,
}

/// Grid of aggregated cells in row-major (axis1-major) order.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
    pub axis1_values: Vec<f64>,
    pub axis2_values: Vec<f64>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(GRID_CSV_HEADER);
        out.push('\n');
        for cell in &self.cells {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                fmt_f64(cell.axis1),
                fmt_f64(cell.axis2),
                cell.replicates,
                fmt_opt(cell.mean_r),
                fmt_opt(cell.std_r),
                fmt_opt(cell.mean_h),
                fmt_opt(cell.std_h),
                fmt_opt(cell.mean_z),
                fmt_opt(cell.mean_lambda1),
                fmt_f64(cell.valid_fraction),
            ));
        }
        out
    }
}

fn fmt_f64(v: f64) -> String {
    // Shortest round-trip formatting; stable for identical bit patterns.
    format!("{v}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let k = values.len() as f64;
    let mean = values.iter().sum::<f64>() / k;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / k;
    (mean, var.sqrt())
}

/// Runs a sweep on a worker pool of the given size (`None` = all cores).
/// Replicates execute in parallel; the reduction walks them in fixed grid
/// order, so the result does not depend on the worker count.
pub fn run_sweep(config: &SweepConfig, workers: Option<usize>) -> Result<SweepResult> {
    config.validate()?;
    let axis1_values = config.axis1.values();
    let axis2_values = config.axis2.values();
    let (rows, cols, reps) = (axis1_values.len(), axis2_values.len(), config.replicates);

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidConfig(format!("worker pool: {e}")))?;

    let tasks: Vec<(usize, usize, usize)> = (0..rows)
        .flat_map(|i| (0..cols).flat_map(move |j| (0..reps).map(move |k| (i, j, k))))
        .collect();
    let outcomes: Vec<CellOutcome> = pool.install(|| {
        tasks
            .par_iter()
            .map(|&(i, j, k)| {
                let params = validated_cell_params(config, i, j);
                run_cell(&params, cell_seed(config.master_seed, i, j, k))
            })
            .collect()
    });

    let mut cells = Vec::with_capacity(rows * cols);
    for (i, &axis1) in axis1_values.iter().enumerate() {
        for (j, &axis2) in axis2_values.iter().enumerate() {
            let base = (i * cols + j) * reps;
            let group = &outcomes[base..base + reps];
            let valid: Vec<&CellOutcome> = group.iter().filter(|o| o.valid).collect();
            let collect = |f: &dyn Fn(&CellOutcome) -> f64| -> Vec<f64> {
                valid.iter().map(|o| f(o)).collect()
            };
            let stats = |wanted: bool, f: &dyn Fn(&CellOutcome) -> f64| {
                if !wanted || valid.is_empty() {
                    (None, None)
                } else {
                    let (m, s) = mean_std(&collect(f));
                    (Some(m), Some(s))
                }
            };
            let (mean_r, std_r) = stats(config.wants(Metric::R), &|o| o.record.unwrap().r);
            let (mean_h, std_h) = stats(config.wants(Metric::H), &|o| o.record.unwrap().h);
            let (mean_z, _) = stats(config.wants(Metric::Z), &|o| o.record.unwrap().z);
            let lambda_values: Vec<f64> = group.iter().map(|o| o.lambda1).collect();
            let mean_lambda1 = config
                .wants(Metric::Lambda1)
                .then(|| mean_std(&lambda_values).0);
            cells.push(SweepCell {
                axis1,
                axis2,
                replicates: reps,
                mean_r,
                std_r,
                mean_h,
                std_h,
                mean_z,
                mean_lambda1,
                valid_fraction: valid.len() as f64 / reps as f64,
            });
        }
    }
    Ok(SweepResult {
        cells,
        axis1_values,
        axis2_values,
    })
}

// Validated configs cannot produce invalid cells.
fn validated_cell_params(config: &SweepConfig, i: usize, j: usize) -> BlockParams {
    config
        .cell_params(i, j)
        .expect("config validated before dispatch")
}

/// One sampled point of a theoretical transition curve. `p_out_neg` is
/// `None` where the boundary is infeasible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub axis1: f64,
    pub kind: String,
    pub p_out_neg: Option<f64>,
}

/// Samples the theoretical transition boundaries along axis1 for overlay on
/// the sweep grid: the symmetric-slice curve when `symmetric_affinity` is
/// set, otherwise the assortative and prosocial curves.
pub fn emit_boundaries(config: &SweepConfig) -> Result<Vec<BoundarySample>> {
    config.validate()?;
    let mut samples = Vec::new();
    for (i, &v) in config.axis1.values().iter().enumerate() {
        let params = validated_cell_params(config, i, 0);
        if config.symmetric_affinity {
            let d = 0.5 * (params.d_in() + params.d_out());
            let value = boundary_symmetric_case(d, params.n()).ok();
            samples.push(BoundarySample {
                axis1: v,
                kind: "symmetric".into(),
                p_out_neg: value,
            });
            continue;
        }
        for (kind, label) in [
            (TransitionKind::Assortative, "assortative"),
            (TransitionKind::Prosocial, "prosocial"),
        ] {
            let value = boundary_outgroup_animosity(
                params.d_in(),
                params.d_out(),
                params.p_in_pos(),
                params.n(),
                kind,
            )
            .ok()
            .map(|b| b.p_out_neg);
            samples.push(BoundarySample {
                axis1: v,
                kind: label.into(),
                p_out_neg: value,
            });
        }
    }
    Ok(samples)
}

/// CSV form of the boundary samples.
pub fn boundaries_to_csv(samples: &[BoundarySample]) -> String {
    let mut out = String::from(BOUNDARY_CSV_HEADER);
    out.push('\n');
    for s in samples {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(s.axis1),
            s.kind,
            s.p_out_neg.map(fmt_f64).unwrap_or_default()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> SweepConfig {
        SweepConfig {
            axis1: Axis {
                param: AxisParam::PInPos,
                start: 0.3,
                stop: 0.8,
                steps: 3,
            },
            axis2: Axis {
                param: AxisParam::POutNeg,
                start: 0.2,
                stop: 0.9,
                steps: 2,
            },
            fixed: FixedParams {
                n: 40,
                d_in: 0.45,
                d_out: 0.45,
                p_in_pos: 0.5,
                p_out_pos: 0.5,
                zero_diagonal: true,
            },
            replicates: 3,
            master_seed: 7,
            symmetric_affinity: false,
            outputs: all_metrics(),
        }
    }

    #[test]
    fn axis_values_are_inclusive_linspace() {
        let axis = Axis {
            param: AxisParam::D,
            start: 0.2,
            stop: 0.6,
            steps: 5,
        };
        let v = axis.values();
        assert_eq!(v.len(), 5);
        assert_eq!(v[0], 0.2);
        assert_eq!(v[4], 0.6);
        assert!((v[2] - 0.4).abs() < 1e-15);

        let single = Axis {
            param: AxisParam::D,
            start: 0.3,
            stop: 0.9,
            steps: 1,
        };
        assert_eq!(single.values(), vec![0.3]);
    }

    #[test]
    fn axis_application() {
        let cfg = small_config();
        let p = cfg.cell_params(0, 1).unwrap();
        assert_eq!(p.p_in_pos(), 0.3);
        // p_out_neg = 0.9 stored as p_out_pos.
        assert!((p.p_out_pos() - 0.1).abs() < 1e-15);

        let mut dcfg = cfg.clone();
        dcfg.axis1.param = AxisParam::D;
        let p = dcfg.cell_params(2, 0).unwrap();
        assert_eq!(p.d_in(), 0.8);
        assert_eq!(p.d_out(), 0.8);
    }

    #[test]
    fn symmetric_affinity_links_probabilities() {
        let mut cfg = small_config();
        cfg.symmetric_affinity = true;
        cfg.axis1.param = AxisParam::D;
        let p = cfg.cell_params(0, 1).unwrap();
        assert!((p.p_in_pos() - p.p_out_neg()).abs() < 1e-15);
        assert!((p.p_in_pos() - 0.9).abs() < 1e-15);
    }

    #[test]
    fn config_validation_rejects_bad_inputs() {
        let mut cfg = small_config();
        cfg.replicates = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = small_config();
        cfg.axis1.stop = 1.4;
        assert!(cfg.validate().is_err());

        let mut cfg = small_config();
        cfg.axis2.steps = 0;
        assert!(cfg.validate().is_err());

        let mut cfg = small_config();
        cfg.symmetric_affinity = true;
        assert!(cfg.validate().is_err(), "p_in_pos axis conflicts with link");

        let mut cfg = small_config();
        cfg.outputs = vec![];
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_parses_from_json() {
        let text = r#"{
            "axis1": {"param": "d", "start": 0.15, "stop": 0.75, "steps": 4},
            "axis2": {"param": "p_out_neg", "start": 0.5, "stop": 1.0, "steps": 3},
            "fixed": {"n": 20, "d_in": 0.4, "d_out": 0.4, "p_in_pos": 0.5, "p_out_pos": 0.5},
            "replicates": 2,
            "master_seed": 11,
            "symmetric_affinity": true
        }"#;
        let cfg: SweepConfig = serde_json::from_str(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.outputs, all_metrics());
        assert!(cfg.fixed.zero_diagonal);
    }

    #[test]
    fn run_cell_on_strongly_assortative_point() {
        // About half the seeds at these parameters give the textbook
        // outcome exactly; the rest flip one or two nodes. Seed 4 is clean.
        let p = BlockParams::new(100, 0.7, 0.7, 0.65, 0.35).unwrap();
        let out = run_cell(&p, 4);
        assert!(out.valid);
        let rec = out.record.unwrap();
        assert!((rec.r - 1.0).abs() < 1e-12, "r = {}", rec.r);
        assert_eq!(rec.h, 0.5);
        assert!(rec.balanced);
        assert_eq!(out.predicted_regime, Regime::AssortativeTwoFaction);
        assert_eq!(out.observed_regime, Regime::AssortativeTwoFaction);
    }

    #[test]
    fn run_cell_flags_no_blowup() {
        // An all-negative complete network with self-ties has no positive
        // leading eigenvalue.
        let p = BlockParams::new(20, 1.0, 1.0, 0.0, 0.0)
            .unwrap()
            .with_zero_diagonal(false);
        let out = run_cell(&p, 5);
        assert!(!out.valid);
        assert!(out.record.is_none());
        assert!(out.lambda1 <= 1e-9);
    }

    #[test]
    fn single_cell_sweep_equals_run_cell() {
        let mut cfg = small_config();
        cfg.axis1.steps = 1;
        cfg.axis2.steps = 1;
        cfg.replicates = 1;
        let result = run_sweep(&cfg, Some(1)).unwrap();
        assert_eq!(result.cells.len(), 1);

        let params = cfg.cell_params(0, 0).unwrap();
        let direct = run_cell(&params, cell_seed(cfg.master_seed, 0, 0, 0));
        let cell = &result.cells[0];
        assert_eq!(cell.mean_r, direct.record.map(|r| r.r));
        assert_eq!(cell.mean_h, direct.record.map(|r| r.h));
        assert_eq!(cell.mean_lambda1, Some(direct.lambda1));
        assert_eq!(cell.valid_fraction, 1.0);
    }

    #[test]
    fn sweep_is_deterministic_across_worker_counts() {
        let cfg = small_config();
        let serial = run_sweep(&cfg, Some(1)).unwrap().to_csv();
        let parallel = run_sweep(&cfg, None).unwrap().to_csv();
        let again = run_sweep(&cfg, Some(3)).unwrap().to_csv();
        assert_eq!(serial, parallel);
        assert_eq!(serial, again);
        assert!(serial.starts_with(GRID_CSV_HEADER));
        assert_eq!(serial.lines().count(), 1 + 3 * 2);
    }

    #[test]
    fn deselected_outputs_leave_columns_empty() {
        let mut cfg = small_config();
        cfg.outputs = vec![Metric::R];
        let csv = run_sweep(&cfg, Some(2)).unwrap().to_csv();
        let first = csv.lines().nth(1).unwrap();
        let fields: Vec<&str> = first.split(',').collect();
        assert_eq!(fields.len(), 10);
        assert!(!fields[3].is_empty(), "mean_r requested");
        assert!(fields[5].is_empty(), "mean_h not requested");
        assert!(fields[8].is_empty(), "mean_lambda1 not requested");
    }

    #[test]
    fn boundaries_symmetric_case() {
        let mut cfg = small_config();
        cfg.symmetric_affinity = true;
        cfg.axis1 = Axis {
            param: AxisParam::D,
            start: 0.4,
            stop: 0.4,
            steps: 1,
        };
        let samples = emit_boundaries(&cfg).unwrap();
        assert_eq!(samples.len(), 1);
        assert_eq!(samples[0].kind, "symmetric");
        // n = 40 here: (1 + sqrt(1/(0.4 * 40))) / 2.
        let expected = 0.5 * (1.0 + (1.0 / 16.0_f64).sqrt());
        assert!((samples[0].p_out_neg.unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn boundaries_intersect_symmetrically_at_neutral_affinity() {
        let mut cfg = small_config();
        cfg.axis1 = Axis {
            param: AxisParam::PInPos,
            start: 0.5,
            stop: 0.5,
            steps: 1,
        };
        let samples = emit_boundaries(&cfg).unwrap();
        let assort = samples.iter().find(|s| s.kind == "assortative").unwrap();
        let prosoc = samples.iter().find(|s| s.kind == "prosocial").unwrap();
        let a = assort.p_out_neg.unwrap();
        let p = prosoc.p_out_neg.unwrap();
        assert!((a + p - 1.0).abs() < 1e-12, "curves symmetric about 1/2");
    }

    #[test]
    fn boundaries_steepen_with_density_ratio() {
        // Larger d_in/d_out tilts the curves more steeply in p_in_pos.
        let slope = |d_in: f64, d_out: f64| {
            let mut cfg = small_config();
            cfg.fixed.d_in = d_in;
            cfg.fixed.d_out = d_out;
            cfg.axis1 = Axis {
                param: AxisParam::PInPos,
                start: 0.4,
                stop: 0.6,
                steps: 2,
            };
            let samples = emit_boundaries(&cfg).unwrap();
            let at: Vec<f64> = samples
                .iter()
                .filter(|s| s.kind == "assortative")
                .map(|s| s.p_out_neg.unwrap())
                .collect();
            (at[1] - at[0]).abs()
        };
        let ratio1 = slope(0.45, 0.45);
        let ratio2 = slope(0.6, 0.3);
        assert!(ratio2 > ratio1, "{ratio2} vs {ratio1}");
    }

    #[test]
    fn boundaries_emit_empty_rows_when_infeasible() {
        let mut cfg = small_config();
        cfg.fixed.d_in = 1.0;
        cfg.fixed.d_out = 0.05;
        cfg.axis1 = Axis {
            param: AxisParam::PInPos,
            start: 1.0,
            stop: 1.0,
            steps: 1,
        };
        cfg.axis2 = Axis {
            param: AxisParam::POutNeg,
            start: 0.5,
            stop: 0.9,
            steps: 2,
        };
        let samples = emit_boundaries(&cfg).unwrap();
        assert!(samples.iter().all(|s| s.p_out_neg.is_none()));
        let csv = boundaries_to_csv(&samples);
        assert!(csv.lines().nth(1).unwrap().ends_with(','));
    }

    #[test]
    fn monotone_assortativity_along_the_symmetric_slice() {
        // Mean final r should rise with outgroup animosity at fixed density,
        // up to statistical noise.
        let cfg = SweepConfig {
            axis1: Axis {
                param: AxisParam::D,
                start: 0.4,
                stop: 0.4,
                steps: 1,
            },
            axis2: Axis {
                param: AxisParam::POutNeg,
                start: 0.5,
                stop: 0.75,
                steps: 6,
            },
            fixed: FixedParams {
                n: 100,
                d_in: 0.4,
                d_out: 0.4,
                p_in_pos: 0.5,
                p_out_pos: 0.5,
                zero_diagonal: true,
            },
            replicates: 20,
            master_seed: 2,
            symmetric_affinity: true,
            outputs: all_metrics(),
        };
        let result = run_sweep(&cfg, None).unwrap();
        let means: Vec<f64> = result.cells.iter().map(|c| c.mean_r.unwrap()).collect();
        for w in means.windows(2) {
            assert!(w[1] > w[0] - 0.05, "mean r dipped: {:?}", means);
        }
        // And the ends are in the expected regimes.
        assert!(means[0] < 0.15);
        assert!(means[5] > 0.9);
    }
}
