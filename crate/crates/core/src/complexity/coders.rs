//! Reference compressors.
//!
//! Two deliberately simple, fully self-contained codecs over exact bit
//! lengths (no byte padding): an adaptive binary arithmetic coder driven by
//! the Krichevsky-Trofimov estimator, and an Elias-gamma run-length coder.
//! The arithmetic coder is the default: on a memoryless source its code
//! length tracks the empirical entropy to within about half a log factor,
//! which is what makes compressed size a usable complexity proxy.

use super::ComplexityError;
use crate::bits::BitString;

/// A lossless bit-level codec. Implementations are stateless; every call is
/// independent, so values are safe to share across threads.
pub trait Compressor: Send + Sync {
    fn name(&self) -> &'static str;
    fn compress(&self, x: &BitString) -> BitString;
    fn decompress(&self, compressed: &BitString) -> Result<BitString, ComplexityError>;
}

/// Compressed streams self-describe their payload length; refuse headers
/// claiming more than this many bits so corrupt input cannot wedge a decode.
const MAX_DECODED_BITS: u64 = 1 << 32;

struct Cursor<'a> {
    bits: &'a BitString,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(bits: &'a BitString) -> Self {
        Cursor { bits, pos: 0 }
    }

    fn next(&mut self) -> Option<bool> {
        if self.pos < self.bits.len() {
            let b = self.bits.get(self.pos);
            self.pos += 1;
            Some(b)
        } else {
            None
        }
    }

    /// Arithmetic decoding reads past the stored stream; absent bits are 0.
    fn next_or_zero(&mut self) -> u64 {
        u64::from(self.next().unwrap_or(false))
    }

    fn exhausted(&self) -> bool {
        self.pos >= self.bits.len()
    }
}

/// Elias-gamma code for n >= 1: floor(log2 n) zeros, then n's bits from the
/// leading 1 down.
fn gamma_encode(out: &mut BitString, n: u64) {
    debug_assert!(n >= 1);
    let width = 64 - n.leading_zeros();
    for _ in 0..width - 1 {
        out.push(false);
    }
    for i in (0..width).rev() {
        out.push(n >> i & 1 == 1);
    }
}

fn gamma_decode(cursor: &mut Cursor) -> Result<u64, ComplexityError> {
    let mut zeros = 0u32;
    loop {
        match cursor.next() {
            Some(true) => break,
            Some(false) => {
                zeros += 1;
                if zeros > 63 {
                    return Err(ComplexityError::CorruptStream {
                        detail: "gamma code prefix exceeds 63 zeros",
                    });
                }
            }
            None => {
                return Err(ComplexityError::CorruptStream {
                    detail: "stream ended inside a gamma code prefix",
                })
            }
        }
    }
    let mut n = 1u64;
    for _ in 0..zeros {
        match cursor.next() {
            Some(b) => n = n << 1 | u64::from(b),
            None => {
                return Err(ComplexityError::CorruptStream {
                    detail: "stream ended inside a gamma code payload",
                })
            }
        }
    }
    Ok(n)
}

fn decode_length(cursor: &mut Cursor) -> Result<usize, ComplexityError> {
    let n = gamma_decode(cursor)?;
    if n > MAX_DECODED_BITS {
        return Err(ComplexityError::CorruptStream {
            detail: "declared payload length is implausibly large",
        });
    }
    Ok(n as usize)
}

// 32-bit interval-coder registers, widened to u64 so products keep 48 bits.
const MAX_RANGE: u64 = 0xFFFF_FFFF;
const HALF: u64 = 0x8000_0000;
const QUARTER: u64 = 0x4000_0000;
const THREE_QUARTERS: u64 = 0xC000_0000;

/// P(next bit = 1) from Krichevsky-Trofimov counts, in 1/65536 units,
/// clamped so neither symbol's interval can vanish.
fn kt_one_probability(ones: u64, total: u64) -> u64 {
    (((2 * ones + 1) << 16) / (2 * total + 2)).clamp(1, 65535)
}

fn split_point(low: u64, high: u64, p_one: u64) -> u64 {
    let range = high - low + 1;
    let p_zero = (1 << 16) - p_one;
    low + ((range * p_zero) >> 16)
}

/// Adaptive binary arithmetic coder ("ac"), the default complexity proxy.
pub struct AdaptiveArithmetic;

impl Compressor for AdaptiveArithmetic {
    fn name(&self) -> &'static str {
        "ac"
    }

    fn compress(&self, x: &BitString) -> BitString {
        let mut out = BitString::new();
        if x.is_empty() {
            return out;
        }
        gamma_encode(&mut out, x.len() as u64);

        let (mut low, mut high) = (0u64, MAX_RANGE);
        let mut pending = 0usize;
        let (mut ones, mut total) = (0u64, 0u64);
        let emit = |out: &mut BitString, bit: bool, pending: &mut usize| {
            out.push(bit);
            for _ in 0..*pending {
                out.push(!bit);
            }
            *pending = 0;
        };

        for bit in x.iter() {
            let boundary = split_point(low, high, kt_one_probability(ones, total));
            if bit {
                low = boundary;
                ones += 1;
            } else {
                high = boundary - 1;
            }
            total += 1;

            loop {
                if high < HALF {
                    emit(&mut out, false, &mut pending);
                } else if low >= HALF {
                    emit(&mut out, true, &mut pending);
                    low -= HALF;
                    high -= HALF;
                } else if low >= QUARTER && high < THREE_QUARTERS {
                    pending += 1;
                    low -= QUARTER;
                    high -= QUARTER;
                } else {
                    break;
                }
                low <<= 1;
                high = high << 1 | 1;
            }
        }

        pending += 1;
        let final_bit = low >= QUARTER;
        emit(&mut out, final_bit, &mut pending);
        out
    }

    fn decompress(&self, compressed: &BitString) -> Result<BitString, ComplexityError> {
        if compressed.is_empty() {
            return Ok(BitString::new());
        }
        let mut cursor = Cursor::new(compressed);
        let len = decode_length(&mut cursor)?;

        let mut value = 0u64;
        for _ in 0..32 {
            value = value << 1 | cursor.next_or_zero();
        }

        let (mut low, mut high) = (0u64, MAX_RANGE);
        let (mut ones, mut total) = (0u64, 0u64);
        let mut out = BitString::with_capacity(len);
        for _ in 0..len {
            let boundary = split_point(low, high, kt_one_probability(ones, total));
            let bit = value >= boundary;
            if bit {
                low = boundary;
                ones += 1;
            } else {
                high = boundary - 1;
            }
            total += 1;
            out.push(bit);

            loop {
                if high < HALF {
                    // no shift of the window origin
                } else if low >= HALF {
                    low -= HALF;
                    high -= HALF;
                    value -= HALF;
                } else if low >= QUARTER && high < THREE_QUARTERS {
                    low -= QUARTER;
                    high -= QUARTER;
                    value -= QUARTER;
                } else {
                    break;
                }
                low <<= 1;
                high = high << 1 | 1;
                value = value << 1 | cursor.next_or_zero();
            }
        }
        Ok(out)
    }
}

/// Elias-gamma run-length coder ("rle"): first bit value, then each run's
/// length. Excellent on long constant runs, expands noise-like input.
pub struct RunLength;

impl Compressor for RunLength {
    fn name(&self) -> &'static str {
        "rle"
    }

    fn compress(&self, x: &BitString) -> BitString {
        let mut out = BitString::new();
        if x.is_empty() {
            return out;
        }
        let mut iter = x.iter();
        let mut current = iter.next().expect("non-empty");
        out.push(current);
        let mut run = 1u64;
        for bit in iter {
            if bit == current {
                run += 1;
            } else {
                gamma_encode(&mut out, run);
                current = bit;
                run = 1;
            }
        }
        gamma_encode(&mut out, run);
        out
    }

    fn decompress(&self, compressed: &BitString) -> Result<BitString, ComplexityError> {
        if compressed.is_empty() {
            return Ok(BitString::new());
        }
        let mut cursor = Cursor::new(compressed);
        let mut current = cursor.next().expect("non-empty");
        let mut out = BitString::new();
        while !cursor.exhausted() {
            let run = gamma_decode(&mut cursor)?;
            if run > MAX_DECODED_BITS || out.len() as u64 + run > MAX_DECODED_BITS {
                return Err(ComplexityError::CorruptStream {
                    detail: "run lengths overflow the payload cap",
                });
            }
            for _ in 0..run {
                out.push(current);
            }
            current = !current;
        }
        Ok(out)
    }
}

/// Look up a compressor by its CLI name: "ac" or "rle".
pub fn compressor_by_name(name: &str) -> Result<Box<dyn Compressor>, ComplexityError> {
    match name {
        "ac" => Ok(Box::new(AdaptiveArithmetic)),
        "rle" => Ok(Box::new(RunLength)),
        other => Err(ComplexityError::UnknownCompressor { name: other.to_string() }),
    }
}

pub const DEFAULT_COMPRESSOR_NAME: &str = "ac";

pub fn default_compressor() -> Box<dyn Compressor> {
    Box::new(AdaptiveArithmetic)
}
