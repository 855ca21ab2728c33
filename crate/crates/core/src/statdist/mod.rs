//! Statistical distinguishability of Bernoulli sources.
//!
//! Two output probabilities can be told apart after `m` paired trials when
//! their gap exceeds the combined sampling noise. This module provides that
//! resolvability predicate, the trial counts it implies, the Fisher-metric
//! distance that counts resolvable steps in the continuum limit, and a greedy
//! packing routine that counts those steps directly at finite `m`.

mod quadrature;

pub use quadrature::{tanh_sinh, QuadratureError};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatDistError {
    #[error("probability must lie in [0, 1], got {value}")]
    ProbabilityOutOfRange { value: f64 },
    #[error("trial count must be at least 1")]
    ZeroTrials,
    #[error("a zero-probability source is never distinguishable from another zero")]
    NeverDistinguishable,
    #[error("required trial count {needed:e} exceeds the supported range")]
    TrialCountOverflow { needed: f64 },
    #[error("angle must lie in [0, pi/2], got {value}")]
    AngleOutOfRange { value: f64 },
    #[error("curve parameter range is invalid: t1 = {t1}, t2 = {t2}")]
    CurveRangeInvalid { t1: f64, t2: f64 },
    #[error("curve is not strictly monotone near t = {at_t}")]
    NonMonotoneCurve { at_t: f64 },
    #[error("curve leaves [0, 1] near t = {at_t} (p = {p})")]
    CurveOutOfRange { at_t: f64, p: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

fn check_probability(p: f64) -> Result<(), StatDistError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(StatDistError::ProbabilityOutOfRange { value: p });
    }
    Ok(())
}

fn check_trials(m: u64) -> Result<(), StatDistError> {
    if m == 0 {
        return Err(StatDistError::ZeroTrials);
    }
    Ok(())
}

/// Standard error of a frequency estimate after `m` Bernoulli trials:
/// sqrt(p(1-p)/m).
pub fn delta_p(p: f64, m: u64) -> Result<f64, StatDistError> {
    check_probability(p)?;
    check_trials(m)?;
    Ok((p * (1.0 - p) / m as f64).sqrt())
}

/// Whether `m` trials of each source resolve the gap between `p1` and `p2`:
/// |p1 - p2| must reach the summed standard errors and be strictly positive.
/// Symmetric in its probability arguments; ties (gap exactly equal to the
/// noise) count as distinguishable.
pub fn distinguishable(p1: f64, p2: f64, m: u64) -> Result<bool, StatDistError> {
    let gap = (p1 - p2).abs();
    Ok(gap > 0.0 && gap >= delta_p(p1, m)? + delta_p(p2, m)?)
}

/// Smallest trial count that distinguishes a silent source (p = 0) from one
/// firing with probability `p2`; equals ceil((1 - p2)/p2).
///
/// A certain source needs no trials at all, and `p2 = 0` can never be told
/// apart from silence.
pub fn min_trials_from_zero(p2: f64) -> Result<u64, StatDistError> {
    check_probability(p2)?;
    if p2 == 0.0 {
        return Err(StatDistError::NeverDistinguishable);
    }
    if p2 == 1.0 {
        return Ok(0);
    }
    let needed = (1.0 - p2) / p2;
    if needed >= u64::MAX as f64 {
        return Err(StatDistError::TrialCountOverflow { needed });
    }
    let mut m = (needed.ceil() as u64).max(1);
    // The closed form and the predicate round independently; nudge so the
    // returned count is exactly the predicate's threshold.
    while m > 1 && distinguishable(0.0, p2, m - 1)? {
        m -= 1;
    }
    while !distinguishable(0.0, p2, m)? {
        m += 1;
    }
    Ok(m)
}

/// Smallest trial count that resolves two arbitrary probabilities; the
/// generalization of [`min_trials_from_zero`], which it reproduces at
/// p1 = 0. Equal probabilities can never be resolved; a pair of certain
/// sources (0 against 1) needs no trials at all.
pub fn min_trials(p1: f64, p2: f64) -> Result<u64, StatDistError> {
    check_probability(p1)?;
    check_probability(p2)?;
    let gap = (p1 - p2).abs();
    if gap == 0.0 {
        return Err(StatDistError::NeverDistinguishable);
    }
    let noise = (p1 * (1.0 - p1)).sqrt() + (p2 * (1.0 - p2)).sqrt();
    if noise == 0.0 {
        return Ok(0);
    }
    let needed = (noise / gap).powi(2);
    if needed >= u64::MAX as f64 {
        return Err(StatDistError::TrialCountOverflow { needed });
    }
    let mut m = (needed.ceil() as u64).max(1);
    // Round-off in the closed form and in the predicate differ; settle on
    // the predicate's exact threshold.
    while m > 1 && distinguishable(p1, p2, m - 1)? {
        m -= 1;
    }
    while !distinguishable(p1, p2, m)? {
        m += 1;
    }
    Ok(m)
}

/// Fisher-metric distance between two Bernoulli sources,
/// arccos(sqrt(p1 p2) + sqrt((1-p1)(1-p2))).
///
/// Computed as |asin(sqrt(p2)) - asin(sqrt(p1))|, which is the same arc
/// length along p = sin^2(phi) but keeps full precision when the two
/// probabilities are close (the arccos form loses half the digits near 0).
pub fn bernoulli_distance(p1: f64, p2: f64) -> Result<f64, StatDistError> {
    check_probability(p1)?;
    check_probability(p2)?;
    Ok((p2.sqrt().asin() - p1.sqrt().asin()).abs())
}

/// Detection probability of an analyzer offset by `theta` from a photon's
/// polarization: cos^2(theta). Domain [0, pi/2].
pub fn polarization_prob(theta: f64) -> Result<f64, StatDistError> {
    check_angle(theta)?;
    Ok(theta.cos().powi(2))
}

fn check_angle(theta: f64) -> Result<(), StatDistError> {
    if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
        return Err(StatDistError::AngleOutOfRange { value: theta });
    }
    Ok(())
}

/// Angular resolution after `m` trials of a cos^2(theta) detector:
/// delta_p / |d p / d theta|. The ratio is constant, 1/(2 sqrt(m)), and the
/// 0/0 at the domain endpoints takes that limiting value.
pub fn delta_theta(theta: f64, m: u64) -> Result<f64, StatDistError> {
    check_angle(theta)?;
    check_trials(m)?;
    // At the domain endpoints the ratio is 0/0 with limit 1/(2 sqrt(m));
    // branching on theta (not on the slope) keeps the endpoint values exact.
    if theta == 0.0 || theta == std::f64::consts::FRAC_PI_2 {
        return Ok(1.0 / (2.0 * (m as f64).sqrt()));
    }
    let slope = (2.0 * theta).sin();
    let p = theta.cos().powi(2);
    Ok(delta_p(p, m)? / slope.abs())
}

/// Distance between the output distributions of two satisfiability oracles
/// answering with probabilities `gamma1` and `gamma2`. The oracle output is
/// a single bit, so this is exactly the Bernoulli distance.
pub fn sat_ensemble_distance(gamma1: f64, gamma2: f64) -> Result<f64, StatDistError> {
    bernoulli_distance(gamma1, gamma2)
}

/// Number of mutually distinguishable steps a greedy packer fits between
/// `p1` and `p2` at `m` trials per source: starting from `p1`, repeatedly
/// advance to the nearest probability resolvable from the current one, and
/// count the landings at or below `p2`.
pub fn packing_count(p1: f64, p2: f64, m: u64) -> Result<u64, StatDistError> {
    check_probability(p1)?;
    check_probability(p2)?;
    check_trials(m)?;
    let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
    if lo == hi {
        return Ok(0);
    }
    let mut current = lo;
    let mut count = 0u64;
    loop {
        let Some(next) = next_resolvable(current, m) else {
            break;
        };
        if next > hi || next <= current {
            break;
        }
        count += 1;
        current = next;
    }
    Ok(count)
}

/// Smallest p' > p with (p' - p) >= delta_p(p) + delta_p(p'), found by
/// bisection, or None when even p' = 1 cannot be resolved from p.
///
/// The margin g(p') = (p' - p) - delta_p(p) - delta_p(p') starts negative
/// just above p and crosses zero at most once on (p, 1]: its derivative,
/// 1 - d(delta_p)/dp', is positive except on a vanishing initial segment.
fn next_resolvable(p: f64, m: u64) -> Option<f64> {
    let mf = m as f64;
    let noise = |q: f64| (q * (1.0 - q) / mf).sqrt();
    let margin = |q: f64| (q - p) - noise(p) - noise(q);
    if margin(1.0) < 0.0 {
        return None;
    }
    let (mut lo, mut hi) = (p, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if margin(mid) >= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(hi)
}

/// A strictly monotone probability curve p(t) on [t1, t2].
///
/// Validated on construction by dense sampling: p must stay inside [0, 1]
/// and move strictly in one direction. An analytic derivative can be
/// supplied; otherwise central differences are used.
pub struct ParamCurve {
    t1: f64,
    t2: f64,
    p: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    derivative: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
}

impl std::fmt::Debug for ParamCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParamCurve")
            .field("t1", &self.t1)
            .field("t2", &self.t2)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

const MONOTONICITY_SAMPLES: usize = 256;

impl ParamCurve {
    pub fn new<P>(t1: f64, t2: f64, p: P) -> Result<Self, StatDistError>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(t1, t2, Box::new(p), None)
    }

    pub fn with_derivative<P, D>(t1: f64, t2: f64, p: P, dp: D) -> Result<Self, StatDistError>
    where
        P: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::build(t1, t2, Box::new(p), Some(Box::new(dp)))
    }

    fn build(
        t1: f64,
        t2: f64,
        p: Box<dyn Fn(f64) -> f64 + Send + Sync>,
        derivative: Option<Box<dyn Fn(f64) -> f64 + Send + Sync>>,
    ) -> Result<Self, StatDistError> {
        if !t1.is_finite() || !t2.is_finite() || t1 >= t2 {
            return Err(StatDistError::CurveRangeInvalid { t1, t2 });
        }
        let curve = ParamCurve { t1, t2, p, derivative };
        curve.validate()?;
        Ok(curve)
    }

    fn validate(&self) -> Result<(), StatDistError> {
        let h = (self.t2 - self.t1) / MONOTONICITY_SAMPLES as f64;
        let mut prev_t = self.t1;
        let mut prev_p = self.sample_checked(self.t1)?;
        let mut direction = 0i8;
        for i in 1..=MONOTONICITY_SAMPLES {
            let t = if i == MONOTONICITY_SAMPLES { self.t2 } else { self.t1 + h * i as f64 };
            let p = self.sample_checked(t)?;
            let step = match p.partial_cmp(&prev_p) {
                Some(std::cmp::Ordering::Greater) => 1,
                Some(std::cmp::Ordering::Less) => -1,
                _ => 0,
            };
            if step == 0 || (direction != 0 && step != direction) {
                return Err(StatDistError::NonMonotoneCurve { at_t: prev_t });
            }
            direction = step;
            prev_t = t;
            prev_p = p;
        }
        Ok(())
    }

    fn sample_checked(&self, t: f64) -> Result<f64, StatDistError> {
        let p = (self.p)(t);
        if !(p.is_finite() && (0.0..=1.0).contains(&p)) {
            return Err(StatDistError::CurveOutOfRange { at_t: t, p });
        }
        Ok(p)
    }

    pub fn t_range(&self) -> (f64, f64) {
        (self.t1, self.t2)
    }

    pub fn p_at(&self, t: f64) -> f64 {
        (self.p)(t)
    }

    /// dp/dt, analytic when supplied, else a central difference with the
    /// usual cube-root-of-epsilon step (clipped to stay inside [t1, t2]).
    pub fn dp_at(&self, t: f64) -> f64 {
        if let Some(dp) = &self.derivative {
            return dp(t);
        }
        let p = &self.p;
        let h = f64::EPSILON.cbrt() * t.abs().max(1.0);
        if t - h >= self.t1 && t + h <= self.t2 {
            return (p(t + h) - p(t - h)) / (2.0 * h);
        }
        // Near a range edge the central stencil does not fit; a two-step
        // one-sided stencil keeps the error at second order there.
        if self.t2 - t >= t - self.t1 {
            let h = h.min((self.t2 - t) / 2.0);
            (4.0 * p(t + h) - 3.0 * p(t) - p(t + 2.0 * h)) / (2.0 * h)
        } else {
            let h = h.min((t - self.t1) / 2.0);
            (3.0 * p(t) - 4.0 * p(t - h) + p(t - 2.0 * h)) / (2.0 * h)
        }
    }
}

/// Fisher-metric length of a monotone probability curve:
/// the integral of |dp/dt| / (2 sqrt(p(1-p))) over [t1, t2].
///
/// Equal to `bernoulli_distance(p(t1), p(t2))` for any strictly monotone
/// curve; computing it by quadrature keeps the two routes independent.
pub fn curve_distance(curve: &ParamCurve) -> Result<f64, StatDistError> {
    let (t1, t2) = curve.t_range();
    let integrand = |t: f64| {
        let p = curve.p_at(t).clamp(0.0, 1.0);
        let denom = 2.0 * (p * (1.0 - p)).sqrt();
        // 0 at an endpoint of the probability range: the quadrature drops
        // non-finite evaluations, whose weight is negligible there.
        curve.dp_at(t).abs() / denom
    };
    Ok(tanh_sinh(integrand, t1, t2)?)
}
