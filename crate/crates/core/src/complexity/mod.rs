//! Compression-backed complexity estimates.
//!
//! True Kolmogorov complexity is uncomputable, so this module works with
//! one-sided upper bounds: the compressed size of a string under a pluggable
//! lossless codec. Those estimates convert to universal-probability bounds
//! in log domain (2^-k underflows long before k gets interesting), feed the
//! incompressibility tail check, and combine into a probability-weighted
//! cost aggregate.

mod coders;

pub use coders::{
    compressor_by_name, default_compressor, AdaptiveArithmetic, Compressor, RunLength,
    DEFAULT_COMPRESSOR_NAME,
};

use crate::bits::BitString;
use crate::combinatorics::{self, CombinatoricsError};
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ComplexityError {
    #[error("cannot estimate the complexity of an empty string")]
    EmptyInput,
    #[error("unknown compressor {name:?} (expected \"ac\" or \"rle\")")]
    UnknownCompressor { name: String },
    #[error("compressor {compressor:?} violated its lossless contract")]
    RoundTripFailed { compressor: &'static str },
    #[error("compressed stream is corrupt: {detail}")]
    CorruptStream { detail: &'static str },
    #[error("tail check needs at least {minimum} samples, got {got}")]
    TooFewSamples { got: u64, minimum: u64 },
    #[error("aggregate needs at least one bucket")]
    NoBuckets,
    #[error("bucket cost must be non-negative and finite, got {cost}")]
    InvalidCost { cost: f64 },
    #[error(transparent)]
    Combinatorics(#[from] CombinatoricsError),
}

/// A compressed-size stand-in for the complexity of one string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KEstimate {
    pub input_bits: u64,
    pub k_hat_bits: u64,
    pub compressor: String,
}

/// Compresses `x`, verifies the round trip, and records the compressed size.
/// The estimate upper-bounds the true complexity up to the codec's framing
/// overhead.
pub fn k_estimate(x: &BitString, c: &dyn Compressor) -> Result<KEstimate, ComplexityError> {
    if x.is_empty() {
        return Err(ComplexityError::EmptyInput);
    }
    let compressed = c.compress(x);
    let restored = c.decompress(&compressed)?;
    if restored != *x {
        return Err(ComplexityError::RoundTripFailed { compressor: c.name() });
    }
    Ok(KEstimate {
        input_bits: x.len() as u64,
        k_hat_bits: compressed.len() as u64,
        compressor: c.name().to_string(),
    })
}

/// log2 of the universal-probability proxy: a string of complexity k has
/// probability about 2^-k of being produced, so log2 P = -k_hat.
pub fn universal_probability(k: &KEstimate) -> f64 {
    -(k.k_hat_bits as f64)
}

/// A log2 probability bound that is only tight up to a constant the
/// underlying counting argument never pins down.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogProbBound {
    pub log2_p_excluding_constant: f64,
    pub omits_additive_constant: bool,
}

impl std::fmt::Display for LogProbBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "log2 P >= {:.4}", self.log2_p_excluding_constant)?;
        if self.omits_additive_constant {
            write!(f, " - c")?;
        }
        Ok(())
    }
}

/// Universal-probability lower bound for the ensemble of n-variable truth
/// tables with exactly k ones: log2 P >= -(2^n H(k/2^n) + n/2), additive
/// constant omitted.
pub fn ensemble_universal_prob_bound(n: u32, k: u64) -> Result<LogProbBound, ComplexityError> {
    let report = combinatorics::k_complexity_bound(n, k)?;
    Ok(LogProbBound {
        log2_p_excluding_constant: -report.bits_excluding_constant,
        omits_additive_constant: true,
    })
}

/// Fraction of `strings` that compress by strictly more than `threshold_k`
/// bits. Counting arguments say this should not exceed 2^-threshold for
/// strings drawn uniformly; compressor overhead only pushes it lower.
pub fn tail_fraction<I>(
    strings: I,
    threshold_k: u64,
    c: &dyn Compressor,
) -> Result<f64, ComplexityError>
where
    I: IntoIterator<Item = BitString>,
{
    let mut total = 0u64;
    let mut over = 0u64;
    for x in strings {
        let estimate = k_estimate(&x, c)?;
        if estimate.input_bits.saturating_sub(estimate.k_hat_bits) > threshold_k {
            over += 1;
        }
        total += 1;
    }
    if total == 0 {
        return Err(ComplexityError::TooFewSamples { got: 0, minimum: 1 });
    }
    Ok(over as f64 / total as f64)
}

pub const TAIL_CHECK_MIN_SAMPLES: u64 = 100;

/// Runs `tail_fraction` over `num_samples` uniform-random strings of the
/// given bit length, generated deterministically from `seed`.
pub fn compression_tail_check(
    num_samples: u64,
    length: usize,
    threshold_k: u64,
    c: &dyn Compressor,
    seed: u64,
) -> Result<f64, ComplexityError> {
    if num_samples < TAIL_CHECK_MIN_SAMPLES {
        return Err(ComplexityError::TooFewSamples {
            got: num_samples,
            minimum: TAIL_CHECK_MIN_SAMPLES,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strings = (0..num_samples).map(move |_| uniform_bits(length, &mut rng));
    tail_fraction(strings, threshold_k, c)
}

fn uniform_bits(length: usize, rng: &mut ChaCha8Rng) -> BitString {
    let mut word = 0u64;
    let mut remaining = 0u32;
    BitString::from_fn(length, |_| {
        if remaining == 0 {
            word = rng.next_u64();
            remaining = 64;
        }
        let bit = word & 1 == 1;
        word >>= 1;
        remaining -= 1;
        bit
    })
}

/// Probability-weighted total cost over ensemble buckets given as
/// (log2 probability, cost) pairs: sum of 2^log2p * cost.
///
/// Summation is compensated, and when every bucket sits below the f64
/// exponent range the sum is formed in log domain first, so the result only
/// flushes to zero when it genuinely is below ~2^-1074. Probabilities are
/// bounds, so they need not sum to 1.
pub fn sat_complexity_aggregate(buckets: &[(f64, f64)]) -> Result<f64, ComplexityError> {
    if buckets.is_empty() {
        return Err(ComplexityError::NoBuckets);
    }
    for &(_, cost) in buckets {
        if !(cost.is_finite() && cost >= 0.0) {
            return Err(ComplexityError::InvalidCost { cost });
        }
    }
    let term_logs: Vec<f64> = buckets
        .iter()
        .map(|&(log2_p, cost)| if cost == 0.0 { f64::NEG_INFINITY } else { log2_p + cost.log2() })
        .collect();
    let max_log = term_logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if max_log == f64::NEG_INFINITY {
        return Ok(0.0);
    }

    if max_log > -1000.0 {
        // Every surviving term is representable: sum directly (Kahan).
        let mut sum = 0.0f64;
        let mut carry = 0.0f64;
        for &(log2_p, cost) in buckets {
            let term = log2_p.exp2() * cost;
            let y = term - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        return Ok(sum);
    }

    // Deep-tail regime: factor out the dominant exponent, sum the ratios,
    // and only then return to linear scale.
    let mut scaled = 0.0f64;
    for &log in &term_logs {
        scaled += (log - max_log).exp2();
    }
    Ok(max_log.exp2() * scaled)
}
