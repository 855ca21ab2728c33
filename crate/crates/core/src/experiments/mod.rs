//! Monte Carlo harness for the distinguishing game.
//!
//! Ensembles are either ideal Bernoulli oracles or buckets of formulas
//! sharing one truth-table ones-count (which induce the same Bernoulli
//! marginal under uniform random assignments). The harness plays the
//! sequential distinguishing game against a silent reference, measures how
//! trial counts scale with the probability gap, and assembles the
//! probability-weighted cost aggregate end to end.
//!
//! Every repetition derives its own RNG stream from (master seed,
//! repetition index), so results are reproducible regardless of scheduling.

mod io;

pub use io::{load_results, persist_results, RunHeader, FORMAT_VERSION};

use crate::complexity::{self, ComplexityError};
use crate::formula::{self, Formula, FormulaError};
use crate::statdist::{self, StatDistError};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExperimentsError {
    #[error("oracle probability must lie in [0, 1], got {gamma}")]
    InvalidGamma { gamma: f64 },
    #[error("formula bucket {label:?} is empty")]
    EmptyBucket { label: String },
    #[error("formula buckets need exhaustive verification, which caps n at {max}; got n = {n}")]
    BucketBeyondCap { n: u32, max: u32 },
    #[error("formula in bucket {label:?} declares {actual} variables, bucket expects {expected}")]
    BucketVarMismatch { label: String, expected: usize, actual: usize },
    #[error("formula in bucket {label:?} has ones-count {actual}, bucket is labeled k = {expected}")]
    BucketOnesMismatch { label: String, expected: u64, actual: u64 },
    #[error("max_m must be at least 1")]
    ZeroMaxM,
    #[error("the minimum-sample guard must be at least 1")]
    ZeroGuard,
    #[error("reps must be at least 1")]
    ZeroReps,
    #[error("n list must be non-empty")]
    EmptyNList,
    #[error("complexity pipeline is capped at n = {max}, got n = {n}")]
    PipelineBeyondCap { n: u32, max: u32 },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Complexity(#[from] ComplexityError),
    #[error(transparent)]
    StatDist(#[from] StatDistError),
    #[error("failed to access results file: {0}")]
    Io(#[from] std::io::Error),
    #[error("results file line 1: malformed header: {detail}")]
    MalformedHeader { detail: String },
    #[error("results file declares format_version {found}, this reader supports {expected}")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("results file line {line}: {detail}")]
    MalformedLine { line: usize, detail: String },
}

/// Largest n for which formula buckets are verified exhaustively; beyond
/// this, only oracle ensembles are allowed.
pub const BUCKET_MAX_VARS: u32 = 20;

#[derive(Debug, Clone)]
enum Mode {
    Oracle(f64),
    Bucket { n: u32, k: u64, formulas: Vec<Formula> },
}

/// A source of output bits: an ideal Bernoulli oracle, or a bucket of
/// formulas with one shared truth-table ones-count.
#[derive(Debug, Clone)]
pub struct EnsembleSpec {
    label: String,
    mode: Mode,
}

impl EnsembleSpec {
    pub fn oracle(label: impl Into<String>, gamma: f64) -> Result<Self, ExperimentsError> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(ExperimentsError::InvalidGamma { gamma });
        }
        Ok(EnsembleSpec { label: label.into(), mode: Mode::Oracle(gamma) })
    }

    /// Builds a bucket after verifying every member: right variable count,
    /// and truth-table ones-count exactly k. Verification is exhaustive,
    /// hence the n cap.
    pub fn formula_bucket(
        label: impl Into<String>,
        n: u32,
        k: u64,
        formulas: Vec<Formula>,
    ) -> Result<Self, ExperimentsError> {
        let label = label.into();
        if n > BUCKET_MAX_VARS {
            return Err(ExperimentsError::BucketBeyondCap { n, max: BUCKET_MAX_VARS });
        }
        if formulas.is_empty() {
            return Err(ExperimentsError::EmptyBucket { label });
        }
        for f in &formulas {
            if f.num_vars() != n as usize {
                return Err(ExperimentsError::BucketVarMismatch {
                    label: label.clone(),
                    expected: n as usize,
                    actual: f.num_vars(),
                });
            }
            let actual = formula::truth_table(f)?.ones_count();
            if actual != k {
                return Err(ExperimentsError::BucketOnesMismatch {
                    label: label.clone(),
                    expected: k,
                    actual,
                });
            }
        }
        Ok(EnsembleSpec { label, mode: Mode::Bucket { n, k, formulas } })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Number of member formulas; None for oracle ensembles.
    pub fn bucket_size(&self) -> Option<usize> {
        match &self.mode {
            Mode::Oracle(_) => None,
            Mode::Bucket { formulas, .. } => Some(formulas.len()),
        }
    }

    /// The exact Bernoulli parameter this ensemble induces.
    pub fn true_probability(&self) -> f64 {
        match &self.mode {
            Mode::Oracle(gamma) => *gamma,
            Mode::Bucket { n, k, .. } => *k as f64 / (1u64 << n) as f64,
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> (Option<u64>, bool) {
        match &self.mode {
            Mode::Oracle(gamma) => (None, rng.random_bool(*gamma)),
            Mode::Bucket { n, formulas, .. } => {
                // Formula first, then assignment: the order is part of the
                // reproducibility contract.
                let f = &formulas[rng.random_range(0..formulas.len())];
                let value = rng.random_range(0..1u64 << *n);
                let a = formula::Assignment::new(value, *n as usize)
                    .expect("in range by construction");
                let bit = formula::eval(f, &a).expect("bucket members are validated");
                (Some(value), bit)
            }
        }
    }
}

/// One bit from the ensemble: a Bernoulli(gamma) draw for oracles, or a
/// uniform formula evaluated on a uniform assignment for buckets (whose
/// marginal is Bernoulli(k/2^n) by construction).
pub fn sample_output<R: Rng>(spec: &EnsembleSpec, rng: &mut R) -> bool {
    spec.draw(rng).1
}

/// One logged draw, for audit trails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub label: String,
    pub trial_index: u64,
    /// Assignment value for formula buckets; oracles have no assignment.
    pub assignment: Option<u64>,
    pub output: u8,
}

/// Draws `count` outputs and logs each one.
pub fn sample_trace(spec: &EnsembleSpec, count: u64, seed: u64) -> Vec<TrialRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|trial_index| {
            let (assignment, bit) = spec.draw(&mut rng);
            TrialRecord {
                label: spec.label().to_string(),
                trial_index,
                assignment,
                output: u8::from(bit),
            }
        })
        .collect()
}

/// Generates `num_formulas` random formulas and groups them by the
/// ones-count of their truth tables. Deterministic per seed.
pub fn build_bucket(
    n: u32,
    num_formulas: u64,
    size_budget: u64,
    seed: u64,
) -> Result<BTreeMap<u64, EnsembleSpec>, ExperimentsError> {
    if n > BUCKET_MAX_VARS {
        return Err(ExperimentsError::BucketBeyondCap { n, max: BUCKET_MAX_VARS });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups: BTreeMap<u64, Vec<Formula>> = BTreeMap::new();
    for _ in 0..num_formulas {
        let f = formula::random_formula_with(&mut rng, n as usize, size_budget as usize)?;
        let k = formula::truth_table(&f)?.ones_count();
        groups.entry(k).or_default().push(f);
    }
    groups
        .into_iter()
        .map(|(k, formulas)| {
            let spec = EnsembleSpec::formula_bucket(format!("n{n}_k{k}"), n, k, formulas)?;
            Ok((k, spec))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    /// Never produced by this stopping rule (kept so records can express
    /// it); the rule either separates the sources or gives up at max_m.
    Same,
    Different,
    Inconclusive,
}

/// Outcome of one sequential distinguishing run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub label_a: String,
    pub label_b: String,
    pub decision: Decision,
    pub trials_used: u64,
    pub empirical_p_a: f64,
    pub empirical_p_b: f64,
    pub max_m: u64,
    pub guard: u64,
    pub seed: u64,
}

/// Minimum paired draws before the stopping rule may fire; suppresses
/// degenerate stops on the first few samples.
pub const DEFAULT_GUARD: u64 = 8;

pub fn sequential_distinguish(
    a: &EnsembleSpec,
    b: &EnsembleSpec,
    max_m: u64,
    seed: u64,
) -> Result<ExperimentResult, ExperimentsError> {
    sequential_distinguish_with_guard(a, b, max_m, DEFAULT_GUARD, seed)
}

/// Plays the distinguishing game: one paired draw per step, and after each
/// step from the guard onward, declares "different" as soon as the empirical
/// gap reaches the summed empirical standard errors (and is nonzero).
/// Gives up as "inconclusive" at max_m.
pub fn sequential_distinguish_with_guard(
    a: &EnsembleSpec,
    b: &EnsembleSpec,
    max_m: u64,
    guard: u64,
    seed: u64,
) -> Result<ExperimentResult, ExperimentsError> {
    if max_m == 0 {
        return Err(ExperimentsError::ZeroMaxM);
    }
    if guard == 0 {
        return Err(ExperimentsError::ZeroGuard);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ones_a = 0u64;
    let mut ones_b = 0u64;
    let mut outcome = None;
    let mut m_stop = max_m;
    for m in 1..=max_m {
        ones_a += u64::from(sample_output(a, &mut rng));
        ones_b += u64::from(sample_output(b, &mut rng));
        if m < guard {
            continue;
        }
        let p_a = ones_a as f64 / m as f64;
        let p_b = ones_b as f64 / m as f64;
        let separated = statdist::distinguishable(p_a, p_b, m)
            .expect("empirical frequencies are valid probabilities");
        if separated {
            outcome = Some(Decision::Different);
            m_stop = m;
            break;
        }
    }
    Ok(ExperimentResult {
        label_a: a.label().to_string(),
        label_b: b.label().to_string(),
        decision: outcome.unwrap_or(Decision::Inconclusive),
        trials_used: m_stop,
        empirical_p_a: ones_a as f64 / m_stop as f64,
        empirical_p_b: ones_b as f64 / m_stop as f64,
        max_m,
        guard,
        seed,
    })
}

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent per-repetition seed from a master seed. Mixing both inputs
/// through splitmix64 keeps streams decorrelated even for adjacent indices.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index))
}

/// Waiting-time statistics for the first 1 from a Bernoulli(gamma) source.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstSuccessStats {
    pub gamma: f64,
    pub reps: u64,
    pub max_m: u64,
    pub mean: f64,
    pub median: f64,
    /// Runs that saw no success by max_m; they enter the statistics at
    /// max_m, biasing mean and median low for tiny gamma.
    pub censored: u64,
}

pub fn first_success_trials(
    gamma: f64,
    reps: u64,
    max_m: u64,
    seed: u64,
) -> Result<FirstSuccessStats, ExperimentsError> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(ExperimentsError::InvalidGamma { gamma });
    }
    if reps == 0 {
        return Err(ExperimentsError::ZeroReps);
    }
    if max_m == 0 {
        return Err(ExperimentsError::ZeroMaxM);
    }
    let mut waits = Vec::with_capacity(reps as usize);
    let mut censored = 0u64;
    for rep in 0..reps {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, rep));
        let mut wait = max_m;
        let mut hit = false;
        for t in 1..=max_m {
            if rng.random_bool(gamma) {
                wait = t;
                hit = true;
                break;
            }
        }
        if !hit {
            censored += 1;
        }
        waits.push(wait);
    }
    waits.sort_unstable();
    Ok(FirstSuccessStats {
        gamma,
        reps,
        max_m,
        mean: mean_u64(&waits),
        median: median_sorted(&waits),
        censored,
    })
}

fn mean_u64(xs: &[u64]) -> f64 {
    xs.iter().map(|&x| x as f64).sum::<f64>() / xs.len() as f64
}

fn median_sorted(xs: &[u64]) -> f64 {
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid] as f64
    } else {
        (xs[mid - 1] as f64 + xs[mid] as f64) / 2.0
    }
}

/// One row of the trials-vs-n scaling table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: u32,
    pub median_trials: f64,
    pub mean_trials: f64,
    pub reps: u64,
}

/// Trial ceiling for the (0, 2^-n) game: far past the expected decision
/// point, so censoring is negligible at every n.
pub fn scaling_max_m(n: u32) -> u64 {
    64u64 << n
}

/// For each n, plays Oracle(0) against Oracle(2^-n) `reps` times and
/// records median and mean trials to decision.
pub fn scaling_study(
    n_list: &[u32],
    reps: u64,
    seed: u64,
) -> Result<Vec<ScalingRow>, ExperimentsError> {
    scaling_study_with_guard(n_list, reps, seed, DEFAULT_GUARD)
}

/// [`scaling_study`] with an explicit decision guard instead of
/// [`DEFAULT_GUARD`].
pub fn scaling_study_with_guard(
    n_list: &[u32],
    reps: u64,
    seed: u64,
    guard: u64,
) -> Result<Vec<ScalingRow>, ExperimentsError> {
    if n_list.is_empty() {
        return Err(ExperimentsError::EmptyNList);
    }
    if reps == 0 {
        return Err(ExperimentsError::ZeroReps);
    }
    let reference = EnsembleSpec::oracle("oracle_zero", 0.0)?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let gamma = 0.5f64.powi(n as i32);
        let probe = EnsembleSpec::oracle(format!("oracle_2^-{n}"), gamma)?;
        let max_m = scaling_max_m(n);
        let stream = derive_seed(seed, n as u64);
        let mut trials = Vec::with_capacity(reps as usize);
        for rep in 0..reps {
            let result = sequential_distinguish_with_guard(
                &reference,
                &probe,
                max_m,
                guard,
                derive_seed(stream, rep),
            )?;
            trials.push(result.trials_used);
        }
        trials.sort_unstable();
        rows.push(ScalingRow {
            n,
            median_trials: median_sorted(&trials),
            mean_trials: mean_u64(&trials),
            reps,
        });
    }
    Ok(rows)
}

/// Plot-ready CSV for scaling rows.
pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut out = String::from("n,median_trials,mean_trials,reps\n");
    for r in rows {
        out.push_str(&format!("{},{},{},{}\n", r.n, r.median_trials, r.mean_trials, r.reps));
    }
    out
}

/// Number of random formulas the pipeline buckets.
pub const PIPELINE_FORMULAS: u64 = 2000;
/// Size budget for each random formula.
pub const PIPELINE_SIZE_BUDGET: u64 = 30;
/// Distinguishing repetitions per bucket; odd, so the median is a sample.
pub const PIPELINE_REPS: u64 = 201;
/// Largest pipeline n: truth tables and bucket games stay desk-scale.
pub const PIPELINE_MAX_N: u32 = 12;

/// Per-bucket outcome inside a pipeline report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineRow {
    pub k: u64,
    pub bucket_size: u64,
    /// log2 universal-probability bound for the bucket, additive constant
    /// omitted.
    pub log2_p_bound: f64,
    pub median_trials: f64,
    pub mean_trials: f64,
    pub different: u64,
    pub inconclusive: u64,
    /// The reference bucket cannot be scored against itself; its row is
    /// reported but kept out of the aggregate.
    pub included_in_aggregate: bool,
}

/// End-to-end complexity estimate for one n.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineReport {
    pub n: u32,
    pub master_seed: u64,
    pub num_formulas: u64,
    pub size_budget: u64,
    pub reps_per_bucket: u64,
    pub max_m: u64,
    pub guard: u64,
    pub rows: Vec<PipelineRow>,
    pub aggregate_linear: f64,
    pub aggregate_log2: Option<f64>,
}

/// Buckets random formulas, prices each bucket by its universal-probability
/// bound, measures the cost of distinguishing it from the k = 0 reference
/// (the k = 0 bucket when one exists, otherwise a silent oracle), and
/// combines price times cost into the aggregate.
pub fn complexity_pipeline(n: u32, seed: u64) -> Result<PipelineReport, ExperimentsError> {
    if n > PIPELINE_MAX_N {
        return Err(ExperimentsError::PipelineBeyondCap { n, max: PIPELINE_MAX_N });
    }
    let buckets = build_bucket(n, PIPELINE_FORMULAS, PIPELINE_SIZE_BUDGET, seed)?;
    let fallback_reference;
    let reference = match buckets.get(&0) {
        Some(spec) => spec,
        None => {
            fallback_reference = EnsembleSpec::oracle("reference_empty", 0.0)?;
            &fallback_reference
        }
    };
    let max_m = scaling_max_m(n);

    let mut rows = Vec::new();
    let mut aggregate_buckets = Vec::new();
    for (stream_index, (&k, spec)) in buckets.iter().enumerate() {
        let stream = derive_seed(seed, stream_index as u64);
        let bucket_size = spec.bucket_size().unwrap_or(0) as u64;
        let mut trials = Vec::with_capacity(PIPELINE_REPS as usize);
        let mut different = 0u64;
        if k == 0 {
            // Reference against itself: every member's truth table is
            // all-zeros, so both streams are constant 0, the empirical gap
            // is identically 0, and the rule can never fire. The runs are
            // fully determined; skip the simulation.
            trials.extend(std::iter::repeat_n(max_m, PIPELINE_REPS as usize));
        } else {
            for rep in 0..PIPELINE_REPS {
                let result =
                    sequential_distinguish(spec, reference, max_m, derive_seed(stream, rep))?;
                different += u64::from(matches!(result.decision, Decision::Different));
                trials.push(result.trials_used);
            }
        }
        trials.sort_unstable();
        let log2_p_bound =
            complexity::ensemble_universal_prob_bound(n, k)?.log2_p_excluding_constant;
        let median_trials = median_sorted(&trials);
        if k != 0 {
            aggregate_buckets.push((log2_p_bound, median_trials));
        }
        rows.push(PipelineRow {
            k,
            bucket_size,
            log2_p_bound,
            median_trials,
            mean_trials: mean_u64(&trials),
            different,
            inconclusive: PIPELINE_REPS - different,
            included_in_aggregate: k != 0,
        });
    }

    let aggregate_linear = complexity::sat_complexity_aggregate(&aggregate_buckets)?;
    Ok(PipelineReport {
        n,
        master_seed: seed,
        num_formulas: PIPELINE_FORMULAS,
        size_budget: PIPELINE_SIZE_BUDGET,
        reps_per_bucket: PIPELINE_REPS,
        max_m,
        guard: DEFAULT_GUARD,
        rows,
        aggregate_linear,
        aggregate_log2: (aggregate_linear > 0.0).then(|| aggregate_linear.log2()),
    })
}
