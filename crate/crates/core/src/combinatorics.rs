//! Binary entropy, exact binomial coefficients, lexicographic
//! rank/unrank of fixed-weight bitstrings, and description-length
//! bounds derived from them.
//!
//! All bound formulas exclude an unquantified additive constant; the
//! [`BoundReport`] carries a flag saying so.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;

#[derive(Debug, Error, PartialEq)]
pub enum CombinatoricsError {
    #[error("probability {0} outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("weight {weight} exceeds length {length}")]
    WeightExceedsLength { length: usize, weight: usize },
    #[error("length must be positive")]
    ZeroLength,
    #[error("index {index} outside 1..=C({length},{weight})")]
    IndexOutOfRange {
        length: usize,
        weight: usize,
        index: BigUint,
    },
    #[error("bitstring must be non-empty")]
    EmptyBitString,
    #[error(
        "string has length {length} and weight {weight}, codec expects \
         length {expected_length} and weight {expected_weight}"
    )]
    ShapeMismatch {
        expected_length: usize,
        expected_weight: usize,
        length: usize,
        weight: usize,
    },
    #[error("ones count must be at least 1")]
    ZeroOnes,
    #[error("curve requires k ≤ 2^(n_min-4), got k={k} at n_min={n_min}")]
    CurveTooDense { k: u64, n_min: u32 },
    #[error("variable range n must be within 1..={max}, got n_min={n_min}, n_max={n_max}")]
    CurveRangeInvalid { n_min: u32, n_max: u32, max: u32 },
    #[error("ones count {k} exceeds 2^{n}")]
    OnesExceedSpace { k: u64, n: u32 },
    #[error("variable count must be within 1..=63, got {0}")]
    InvalidVarCount(u32),
}

/// Binary entropy in bits, with the 0·log0 := 0 convention.
///
/// Evaluated through min(p, 1-p) with `ln_1p` so that tiny and
/// near-one probabilities keep full relative accuracy.
pub fn binary_entropy(p: f64) -> Result<f64, CombinatoricsError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CombinatoricsError::ProbabilityOutOfRange(p));
    }
    if p == 0.0 || p == 1.0 {
        return Ok(0.0);
    }
    let lo = p.min(1.0 - p);
    let hi = 1.0 - lo;
    Ok((-lo * lo.ln() + hi * -(-lo).ln_1p()) / std::f64::consts::LN_2)
}

/// `2^n * H(k / 2^n)` in bits, in the cancellation-free form
/// `k*(n - log2 k) + (2^n - k)*(-log2(1 - k/2^n))`.
fn scaled_entropy_bits(n: u32, k: u64) -> f64 {
    let total = (1u128 << n) as f64;
    if k == 0 || (k as u128) == (1u128 << n) {
        return 0.0;
    }
    let k_f = k as f64;
    let p = k_f / total;
    let low_term = k_f * (f64::from(n) - k_f.log2());
    let high_term = (total - k_f) * (-(-p).ln_1p() / std::f64::consts::LN_2);
    low_term + high_term
}

/// Exact binomial coefficient C(l, k).
pub fn binomial(l: usize, k: usize) -> Result<BigUint, CombinatoricsError> {
    if k > l {
        return Err(CombinatoricsError::WeightExceedsLength {
            length: l,
            weight: k,
        });
    }
    let k = k.min(l - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= BigUint::from(l - k + i);
        acc /= BigUint::from(i);
    }
    Ok(acc)
}

/// log2 C(l, k) as a float, accumulated with compensated summation.
pub fn log2_binomial(l: usize, k: usize) -> Result<f64, CombinatoricsError> {
    if k > l {
        return Err(CombinatoricsError::WeightExceedsLength {
            length: l,
            weight: k,
        });
    }
    let k = k.min(l - k);
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for i in 1..=k {
        let term = ((l - k + i) as f64).log2() - (i as f64).log2();
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(sum)
}

/// A validated position in the lexicographic enumeration of length-L,
/// weight-k bitstrings; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KOnesIndex {
    length: usize,
    weight: usize,
    index: BigUint,
}

impl KOnesIndex {
    pub fn new(
        length: usize,
        weight: usize,
        index: BigUint,
    ) -> Result<KOnesIndex, CombinatoricsError> {
        if length == 0 {
            return Err(CombinatoricsError::ZeroLength);
        }
        if weight > length {
            return Err(CombinatoricsError::WeightExceedsLength {
                length,
                weight,
            });
        }
        let total = binomial(length, weight)?;
        if index.is_zero() || index > total {
            return Err(CombinatoricsError::IndexOutOfRange {
                length,
                weight,
                index,
            });
        }
        Ok(KOnesIndex {
            length,
            weight,
            index,
        })
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn index(&self) -> &BigUint {
        &self.index
    }
}

/// Rank/unrank engine for one (length, weight) pair.
///
/// When every needed coefficient fits in a `u128` and the Pascal table
/// stays small, lookups run on a precomputed flat table; otherwise the
/// walk updates one arbitrary-precision coefficient incrementally, so
/// tall-thin shapes (large L, small k) stay cheap.
pub struct KOnesCodec {
    length: usize,
    weight: usize,
    total: BigUint,
    table: Option<PascalTable>,
}

struct PascalTable {
    stride: usize,
    cells: Vec<u128>,
}

impl PascalTable {
    const MAX_CELLS: usize = 1 << 20;

    fn build(length: usize, weight: usize) -> Option<PascalTable> {
        let stride = weight + 1;
        let cells_len = (length + 1).checked_mul(stride)?;
        if cells_len > Self::MAX_CELLS {
            return None;
        }
        let mut cells = vec![0u128; cells_len];
        for r in 0..=length {
            cells[r * stride] = 1;
            for j in 1..=weight.min(r) {
                let above = cells[(r - 1) * stride + j];
                let diagonal = cells[(r - 1) * stride + j - 1];
                cells[r * stride + j] = above.checked_add(diagonal)?;
            }
        }
        Some(PascalTable { stride, cells })
    }

    fn get(&self, remaining: usize, ones_left: usize) -> u128 {
        if ones_left > remaining {
            0
        } else {
            self.cells[remaining * self.stride + ones_left]
        }
    }
}

impl KOnesCodec {
    pub fn new(length: usize, weight: usize) -> Result<KOnesCodec, CombinatoricsError> {
        if length == 0 {
            return Err(CombinatoricsError::ZeroLength);
        }
        if weight > length {
            return Err(CombinatoricsError::WeightExceedsLength {
                length,
                weight,
            });
        }
        let total = binomial(length, weight)?;
        let table = PascalTable::build(length, weight);
        Ok(KOnesCodec {
            length,
            weight,
            total,
            table,
        })
    }

    /// C(length, weight), the number of strings in this class.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    /// The `index`-th (1-based) string of the class in ascending
    /// lexicographic order with '0' < '1'.
    pub fn unrank(&self, index: &BigUint) -> Result<BitString, CombinatoricsError> {
        if index.is_zero() || *index > self.total {
            return Err(CombinatoricsError::IndexOutOfRange {
                length: self.length,
                weight: self.weight,
                index: index.clone(),
            });
        }
        let ordinal = index - 1u32;
        match &self.table {
            Some(table) => Ok(self.unrank_small(table, ordinal.to_u128().expect("total fits"))),
            None => Ok(self.unrank_big(ordinal)),
        }
    }

    /// 1-based lexicographic position of `s` within its class.
    pub fn rank(&self, s: &BitString) -> Result<BigUint, CombinatoricsError> {
        if s.len() != self.length || s.count_ones() as usize != self.weight {
            return Err(CombinatoricsError::ShapeMismatch {
                expected_length: self.length,
                expected_weight: self.weight,
                length: s.len(),
                weight: s.count_ones() as usize,
            });
        }
        match &self.table {
            Some(table) => Ok(self.rank_small(table, s)),
            None => Ok(self.rank_big(s)),
        }
    }

    fn unrank_small(&self, table: &PascalTable, mut ordinal: u128) -> BitString {
        let mut out = BitString::with_capacity(self.length);
        let mut ones_left = self.weight;
        for pos in 0..self.length {
            let remaining = self.length - pos - 1;
            if ones_left == 0 {
                out.push(false);
                continue;
            }
            let zero_block = table.get(remaining, ones_left);
            if ordinal < zero_block {
                out.push(false);
            } else {
                ordinal -= zero_block;
                ones_left -= 1;
                out.push(true);
            }
        }
        out
    }

    fn rank_small(&self, table: &PascalTable, s: &BitString) -> BigUint {
        let mut ordinal = 0u128;
        let mut ones_left = self.weight;
        for pos in 0..self.length {
            if ones_left == 0 {
                break;
            }
            if s.get(pos) {
                let remaining = self.length - pos - 1;
                ordinal += table.get(remaining, ones_left);
                ones_left -= 1;
            }
        }
        BigUint::from(ordinal) + 1u32
    }

    fn unrank_big(&self, mut ordinal: BigUint) -> BitString {
        let mut out = BitString::with_capacity(self.length);
        let mut ones_left = self.weight;
        // coeff tracks C(remaining, ones_left) across both transitions:
        // C(r-1, j) = C(r, j)*(r-j)/r and C(r-1, j-1) = C(r, j)*j/r.
        let mut coeff = binomial(self.length - 1, self.weight).expect("validated shape");
        for pos in 0..self.length {
            let remaining = self.length - pos - 1;
            if ones_left == 0 {
                out.push(false);
                continue;
            }
            if ordinal < coeff {
                out.push(false);
                if remaining > 0 {
                    coeff = coeff * (remaining - ones_left) / remaining;
                }
            } else {
                ordinal -= &coeff;
                out.push(true);
                if remaining > 0 {
                    coeff = coeff * ones_left / remaining;
                }
                ones_left -= 1;
            }
        }
        out
    }

    fn rank_big(&self, s: &BitString) -> BigUint {
        let mut ordinal = BigUint::zero();
        let mut ones_left = self.weight;
        let mut coeff = binomial(self.length - 1, self.weight).expect("validated shape");
        for pos in 0..self.length {
            let remaining = self.length - pos - 1;
            if ones_left == 0 {
                break;
            }
            if s.get(pos) {
                ordinal += &coeff;
                if remaining > 0 {
                    coeff = coeff * ones_left / remaining;
                }
                ones_left -= 1;
            } else if remaining > 0 {
                coeff = coeff * (remaining - ones_left) / remaining;
            }
        }
        ordinal + 1u32
    }
}

/// The I-th length-L weight-k bitstring in ascending lexicographic order.
pub fn unrank_k_ones(
    length: usize,
    weight: usize,
    index: &BigUint,
) -> Result<BitString, CombinatoricsError> {
    KOnesCodec::new(length, weight)?.unrank(index)
}

/// 1-based lexicographic index of `s` among strings of its length and weight.
pub fn rank_k_ones(s: &BitString) -> Result<BigUint, CombinatoricsError> {
    if s.is_empty() {
        return Err(CombinatoricsError::EmptyBitString);
    }
    KOnesCodec::new(s.len(), s.count_ones() as usize)?.rank(s)
}

/// A description-length bound in bits. Every formula here drops an
/// additive constant that is never quantified, so the report says so.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub bits_excluding_constant: f64,
    pub omits_additive_constant: bool,
}

impl BoundReport {
    fn new(bits: f64) -> BoundReport {
        debug_assert!(bits >= 0.0);
        BoundReport {
            bits_excluding_constant: bits,
            omits_additive_constant: true,
        }
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4} bits + c", self.bits_excluding_constant)
    }
}

/// Cost of describing a truth table by its variable count plus the
/// formula text itself: n + formula_size_bits.
pub fn program1_length_bound(formula_size_bits: u64, n: u32) -> Result<BoundReport, CombinatoricsError> {
    if n == 0 || n > 63 {
        return Err(CombinatoricsError::InvalidVarCount(n));
    }
    Ok(BoundReport::new(f64::from(n) + formula_size_bits as f64))
}

/// Cost of describing a weight-k string by (length, lexicographic index):
/// log2 L + log2 C(L, k).
pub fn program2_length_bound(l: usize, k: usize) -> Result<BoundReport, CombinatoricsError> {
    if l == 0 {
        return Err(CombinatoricsError::ZeroLength);
    }
    Ok(BoundReport::new(
        (l as f64).log2() + log2_binomial(l, k)?,
    ))
}

/// Entropy form of the weight-k description cost over the 2^n-bit
/// table: 2^n·H(k/2^n) + n/2.
pub fn k_complexity_bound(n: u32, k: u64) -> Result<BoundReport, CombinatoricsError> {
    if n == 0 || n > 63 {
        return Err(CombinatoricsError::InvalidVarCount(n));
    }
    if u128::from(k) > (1u128 << n) {
        return Err(CombinatoricsError::OnesExceedSpace { k, n });
    }
    Ok(BoundReport::new(
        scaled_entropy_bits(n, k) + f64::from(n) / 2.0,
    ))
}

/// One point of the fixed-k growth curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub n: u32,
    pub y: f64,
}

/// y(n) = 2^n·H(k/2^n) for n in n_min..=n_max; grows linearly with
/// slope k once k ≪ 2^n, which the precondition k ≤ 2^(n_min-4)
/// guarantees from the start.
pub fn figure1_curve(
    k: u64,
    n_min: u32,
    n_max: u32,
) -> Result<Vec<CurvePoint>, CombinatoricsError> {
    if k == 0 {
        return Err(CombinatoricsError::ZeroOnes);
    }
    if n_min < 4 || n_min > n_max || n_max > 60 {
        return Err(CombinatoricsError::CurveRangeInvalid {
            n_min,
            n_max,
            max: 60,
        });
    }
    if k > (1u64 << (n_min - 4)) {
        return Err(CombinatoricsError::CurveTooDense { k, n_min });
    }
    Ok((n_min..=n_max)
        .map(|n| CurvePoint {
            n,
            y: scaled_entropy_bits(n, k),
        })
        .collect())
}

/// Formats a value with six significant digits.
pub fn six_significant_digits(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).clamp(0, 17) as usize;
    format!("{value:.decimals$}")
}

/// CSV rendering of a curve: header plus one "n,y" line per point.
pub fn figure1_csv(points: &[CurvePoint]) -> String {
    let mut out = String::from("n,y\n");
    for p in points {
        out.push_str(&format!("{},{}\n", p.n, six_significant_digits(p.y)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const F64_TOL: f64 = 1e-12;

    /// Oracle: log2 of a positive big integer via its top 53 bits.
    fn log2_big(value: &BigUint) -> f64 {
        let bits = value.bits();
        if bits <= 53 {
            return (value.to_u64().expect("fits in u64") as f64).log2();
        }
        let shift = bits - 53;
        let mantissa = (value >> shift).to_u64().expect("53 bits fit");
        (mantissa as f64).log2() + shift as f64
    }

    mod entropy {
        use super::*;

        #[test]
        fn convention_and_peak() {
            assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
            assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
            assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < F64_TOL);
        }

        #[test]
        fn eighth_matches_direct_evaluation() {
            // Oracle: H(1/8) = 3/8 + (7/8)·log2(8/7), evaluated directly.
            let expected = 0.375 + 0.875 * (8.0f64 / 7.0).log2();
            assert!((binary_entropy(0.125).unwrap() - expected).abs() < F64_TOL);
            assert!((binary_entropy(0.125).unwrap() - 0.543564).abs() < 1e-6);
        }

        #[test]
        fn rejects_out_of_range() {
            assert!(binary_entropy(-0.1).is_err());
            assert!(binary_entropy(1.5).is_err());
            assert!(binary_entropy(f64::NAN).is_err());
        }

        proptest! {
            #[test]
            fn symmetric_and_bounded(p in 0.0f64..=1.0) {
                let h = binary_entropy(p).unwrap();
                let h_sym = binary_entropy(1.0 - p).unwrap();
                prop_assert!((h - h_sym).abs() < 1e-9);
                prop_assert!((0.0..=1.0 + F64_TOL).contains(&h));
            }
        }

        #[test]
        fn tiny_probability_stays_accurate() {
            // Oracle: for tiny p, H(p) = p·(log2(1/p) + log2 e) - O(p^2).
            let p = 2f64.powi(-40);
            let h = binary_entropy(p).unwrap();
            let first_order = p * ((1.0 / p).log2() + std::f64::consts::LOG2_E);
            assert!((h - first_order).abs() / h < 1e-9);
        }
    }

    mod binomials {
        use super::*;

        #[test]
        fn small_values() {
            assert_eq!(binomial(4, 2).unwrap(), BigUint::from(6u32));
            assert_eq!(binomial(17, 0).unwrap(), BigUint::one());
            assert_eq!(binomial(0, 0).unwrap(), BigUint::one());
        }

        #[test]
        fn matches_pascal_recurrence() {
            // Oracle: independent Pascal-triangle fill.
            let rows = 40usize;
            let mut row: Vec<BigUint> = vec![BigUint::one()];
            for r in 1..=rows {
                let mut next = vec![BigUint::one(); r + 1];
                for j in 1..r {
                    next[j] = &row[j - 1] + &row[j];
                }
                row = next;
            }
            for (k, want) in row.iter().enumerate() {
                assert_eq!(&binomial(rows, k).unwrap(), want, "C(40,{k})");
            }
            assert_eq!(binomial(30, 7).unwrap(), BigUint::from(2_035_800u64));
        }

        #[test]
        fn rejects_weight_over_length() {
            assert!(binomial(3, 4).is_err());
        }

        #[test]
        fn log2_matches_exact_value() {
            for (l, k) in [(10, 3), (64, 32), (200, 5), (500, 250), (4096, 17)] {
                let exact = log2_big(&binomial(l, k).unwrap());
                let approx = log2_binomial(l, k).unwrap();
                assert!(
                    (exact - approx).abs() <= 1e-9 * exact.max(1.0),
                    "log2 C({l},{k}): exact {exact}, summed {approx}"
                );
            }
        }

        #[test]
        fn log2_big_handles_wide_values() {
            let v = BigUint::one() << 300;
            assert!((log2_big(&v) - 300.0).abs() < 1e-9);
        }
    }

    mod rank_unrank {
        use super::*;

        #[test]
        fn four_choose_two_enumeration() {
            // Oracle: all six strings written out in ascending lex order.
            let expected = ["0011", "0101", "0110", "1001", "1010", "1100"];
            let codec = KOnesCodec::new(4, 2).unwrap();
            for (i, want) in expected.iter().enumerate() {
                let s = codec.unrank(&BigUint::from(i + 1)).unwrap();
                assert_eq!(&s.to_string(), want, "index {}", i + 1);
                assert_eq!(codec.rank(&s).unwrap(), BigUint::from(i + 1));
            }
        }

        #[test]
        fn free_function_signatures() {
            assert_eq!(
                unrank_k_ones(4, 2, &BigUint::from(1u32)).unwrap().to_string(),
                "0011"
            );
            assert_eq!(
                unrank_k_ones(4, 2, &BigUint::from(4u32)).unwrap().to_string(),
                "1001"
            );
            assert_eq!(
                rank_k_ones(&BitString::from_ascii("1100").unwrap()).unwrap(),
                BigUint::from(6u32)
            );
            assert_eq!(
                rank_k_ones(&BitString::from_ascii("0000").unwrap()).unwrap(),
                BigUint::one()
            );
        }

        #[test]
        fn weight_zero_is_all_zeros() {
            let s = unrank_k_ones(9, 0, &BigUint::one()).unwrap();
            assert_eq!(s.to_string(), "000000000");
        }

        #[test]
        fn index_bounds_are_enforced() {
            assert!(matches!(
                unrank_k_ones(4, 2, &BigUint::zero()),
                Err(CombinatoricsError::IndexOutOfRange { .. })
            ));
            assert!(matches!(
                unrank_k_ones(4, 2, &BigUint::from(7u32)),
                Err(CombinatoricsError::IndexOutOfRange { .. })
            ));
        }

        #[test]
        fn empty_string_has_no_rank() {
            assert_eq!(
                rank_k_ones(&BitString::new()).unwrap_err(),
                CombinatoricsError::EmptyBitString
            );
        }

        #[test]
        fn successive_indices_increase_lexicographically() {
            let codec = KOnesCodec::new(9, 4).unwrap();
            let total = codec.total().to_u64().unwrap();
            let mut previous: Option<String> = None;
            for i in 1..=total {
                let s = codec.unrank(&BigUint::from(i)).unwrap().to_string();
                if let Some(prev) = previous {
                    assert!(prev < s, "{prev} !< {s}");
                }
                previous = Some(s);
            }
        }

        #[test]
        fn big_path_round_trips_on_wide_shapes() {
            // C(256, 128) needs ~251 bits, far past the table fast path.
            let codec = KOnesCodec::new(256, 128).unwrap();
            assert!(codec.total().bits() > 127);
            let probes = [
                BigUint::one(),
                codec.total().clone(),
                codec.total() / 2u32,
                codec.total() / 3u32 + 7u32,
            ];
            for index in probes {
                let s = codec.unrank(&index).unwrap();
                assert_eq!(s.len(), 256);
                assert_eq!(s.count_ones(), 128);
                assert_eq!(codec.rank(&s).unwrap(), index);
            }
        }

        #[test]
        fn tall_thin_shapes_avoid_the_table() {
            let codec = KOnesCodec::new(2_000_000, 2).unwrap();
            assert!(codec.table.is_none());
            // total = C(2e6, 2) = 1_999_999_000_000; probe the last string
            // and one interior index.
            assert_eq!(codec.total(), &BigUint::from(1_999_999_000_000u64));
            for index in [codec.total().clone(), BigUint::from(987_654_321_123u64)] {
                let s = codec.unrank(&index).unwrap();
                assert_eq!(codec.rank(&s).unwrap(), index);
                assert_eq!(s.count_ones(), 2);
            }
        }

        #[test]
        fn small_and_big_paths_agree() {
            let small = KOnesCodec::new(20, 6).unwrap();
            assert!(small.table.is_some());
            let big = KOnesCodec {
                length: 20,
                weight: 6,
                total: small.total.clone(),
                table: None,
            };
            let total = small.total().to_u64().unwrap();
            for i in (1..=total).step_by(997) {
                let index = BigUint::from(i);
                let a = small.unrank(&index).unwrap();
                let b = big.unrank(&index).unwrap();
                assert_eq!(a, b, "index {i}");
                assert_eq!(small.rank(&a).unwrap(), big.rank(&a).unwrap());
            }
        }

        proptest! {
            #[test]
            fn round_trip_random_shapes(
                length in 1usize..=48,
                weight_seed in 0usize..=48,
                index_seed in 0u64..u64::MAX,
            ) {
                let weight = weight_seed % (length + 1);
                let codec = KOnesCodec::new(length, weight).unwrap();
                let total = codec.total();
                let index = BigUint::from(index_seed) % total + 1u32;
                let s = codec.unrank(&index).unwrap();
                prop_assert_eq!(s.len(), length);
                prop_assert_eq!(s.count_ones() as usize, weight);
                prop_assert_eq!(codec.rank(&s).unwrap(), index);
            }
        }
    }

    mod bounds {
        use super::*;

        #[test]
        fn program1_is_a_direct_sum() {
            let r = program1_length_bound(100, 10).unwrap();
            assert_eq!(r.bits_excluding_constant, 110.0);
            assert!(r.omits_additive_constant);
            assert_eq!(program1_length_bound(0, 7).unwrap().bits_excluding_constant, 7.0);
            assert_eq!(r.to_string(), "110.0000 bits + c");
        }

        #[test]
        fn program2_small_cases() {
            // Oracle: exact binomials. C(8,1)=8, C(16,2)=120.
            let r = program2_length_bound(8, 1).unwrap();
            assert!((r.bits_excluding_constant - 6.0).abs() < F64_TOL);
            let r = program2_length_bound(8, 0).unwrap();
            assert!((r.bits_excluding_constant - 3.0).abs() < F64_TOL);
            let r = program2_length_bound(16, 2).unwrap();
            assert!((r.bits_excluding_constant - (4.0 + 120f64.log2())).abs() < F64_TOL);
            assert!((r.bits_excluding_constant - 10.907).abs() < 1e-3);
        }

        #[test]
        fn entropy_bound_cases() {
            let r = k_complexity_bound(3, 1).unwrap();
            let expected = 8.0 * binary_entropy(0.125).unwrap() + 1.5;
            assert!((r.bits_excluding_constant - expected).abs() < F64_TOL);
            assert!((r.bits_excluding_constant - 5.8485).abs() < 1e-4);

            let r = k_complexity_bound(9, 0).unwrap();
            assert_eq!(r.bits_excluding_constant, 4.5);

            let r = k_complexity_bound(3, 4).unwrap();
            assert!((r.bits_excluding_constant - 9.5).abs() < F64_TOL);
        }

        #[test]
        fn entropy_bound_is_symmetric_in_k() {
            for n in [3u32, 6, 10] {
                for k in 0..=(1u64 << n) / 2 {
                    let low = k_complexity_bound(n, k).unwrap().bits_excluding_constant;
                    let high = k_complexity_bound(n, (1u64 << n) - k)
                        .unwrap()
                        .bits_excluding_constant;
                    let scale = low.abs().max(1.0);
                    assert!(
                        (low - high).abs() <= 1e-9 * scale,
                        "n={n} k={k}: {low} vs {high}"
                    );
                }
            }
        }

        #[test]
        fn entropy_bound_rejects_k_over_space() {
            assert!(k_complexity_bound(3, 9).is_err());
        }
    }

    mod curve {
        use super::*;

        #[test]
        fn stable_value_at_n10_k1() {
            // Oracle: y = k·log2(2^n/k) + (2^n-k)·(-log2(1-k/2^n)) evaluated
            // with an independent series for the second factor:
            // -log2(1-p) = (p + p^2/2 + p^3/3 + ...)·log2 e.
            let p: f64 = 1.0 / 1024.0;
            let series: f64 = (1..8)
                .map(|j| p.powi(j) / f64::from(j))
                .sum::<f64>()
                * std::f64::consts::LOG2_E;
            let expected = 10.0 + 1023.0 * series;
            let points = figure1_curve(1, 10, 10).unwrap();
            assert_eq!(points.len(), 1);
            assert!((points[0].y - expected).abs() < 1e-9);
            assert!((points[0].y - 11.4420).abs() < 2e-3);
        }

        #[test]
        fn finite_difference_slope_converges_to_k() {
            for k in [1u64, 2, 5, 16] {
                let points = figure1_curve(k, 20, 40).unwrap();
                for pair in points.windows(2) {
                    let delta = pair[1].y - pair[0].y;
                    assert!(
                        (delta - k as f64).abs() <= 0.01 * k as f64,
                        "k={k} n={}: delta {delta}",
                        pair[0].n
                    );
                }
            }
        }

        #[test]
        fn stays_stable_to_n60() {
            let points = figure1_curve(1, 56, 60).unwrap();
            for pair in points.windows(2) {
                let delta = pair[1].y - pair[0].y;
                assert!((delta - 1.0).abs() < 1e-3, "n={}: {delta}", pair[0].n);
            }
        }

        #[test]
        fn preconditions() {
            assert!(matches!(
                figure1_curve(0, 10, 20),
                Err(CombinatoricsError::ZeroOnes)
            ));
            assert!(matches!(
                figure1_curve(65, 10, 20),
                Err(CombinatoricsError::CurveTooDense { .. })
            ));
            assert!(figure1_curve(1, 10, 61).is_err());
            assert!(figure1_curve(1, 12, 10).is_err());
        }

        #[test]
        fn csv_has_six_significant_digits() {
            let csv = figure1_csv(&figure1_curve(1, 10, 12).unwrap());
            let mut lines = csv.lines();
            assert_eq!(lines.next(), Some("n,y"));
            let first = lines.next().unwrap();
            assert!(first.starts_with("10,11.44"), "line was {first}");
            assert_eq!(first.split(',').nth(1).unwrap().len(), 7);
        }

        #[test]
        fn significant_digit_formatting() {
            assert_eq!(six_significant_digits(11.441993), "11.4420");
            assert_eq!(six_significant_digits(919.25), "919.250");
            assert_eq!(six_significant_digits(0.00123456789), "0.00123457");
            assert_eq!(six_significant_digits(123456789.0), "123456789");
        }
    }
}
