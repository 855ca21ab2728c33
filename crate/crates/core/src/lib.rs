//! Boolean-formula ensembles, fixed-weight codes, compression-based
//! complexity estimates, and the statistical geometry that ties them
//! together.
//!
//! The crate is organized as a pipeline of small, independently testable
//! layers:
//!
//! - [`bits`]: exact-length bit strings, the common currency.
//! - [`formula`]: Boolean formula ASTs, parsing, truth tables, planted DNF
//!   constructions, and seeded random formulas.
//! - [`combinatorics`]: binary entropy, big-integer binomials,
//!   rank/unrank of fixed-weight strings, and description-length bounds.
//! - [`complexity`]: pluggable lossless codecs as complexity proxies,
//!   universal-probability conversions, and incompressibility checks.
//! - [`statdist`]: distinguishability of Bernoulli sources - resolution
//!   thresholds, trial counts, arc-length distances, packing counts, and
//!   double-exponential quadrature.
//! - [`experiments`]: the seeded Monte Carlo harness that plays the
//!   distinguishing game at scale and persists its results.
//!
//! Everything random is driven by explicit 64-bit seeds and deterministic
//! per-repetition stream derivation, so every number in every report is
//! exactly reproducible.

pub mod bits;
pub mod combinatorics;
pub mod complexity;
pub mod experiments;
pub mod formula;
pub mod statdist;
