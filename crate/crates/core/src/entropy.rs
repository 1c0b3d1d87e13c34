//! Binary entropy, the b-number uncertainty bounds and entropy inversion.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

/// Bisection cap for [`inverse_entropy`].
pub const INVERSION_MAX_ITERATIONS: usize = 200;

/// Forward-evaluation tolerance [`inverse_entropy`] guarantees.
pub const INVERSION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EntropyError {
    #[error("probability {0} is outside [0, 1]")]
    Probability(f64),
    #[error("entropy {0} is outside [0, 1]")]
    Entropy(f64),
    #[error("uncertainty bounds need b > 0")]
    ZeroBNumber,
    #[error("bit groups are both empty")]
    EmptySplit,
}

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Probability(f64);

impl Probability {
    pub fn new(p: f64) -> Result<Self, EntropyError> {
        if (0.0..=1.0).contains(&p) {
            Ok(Self(p))
        } else {
            Err(EntropyError::Probability(p))
        }
    }

    /// `1 / k`; `k` must be positive.
    pub fn reciprocal(k: u64) -> Result<Self, EntropyError> {
        if k == 0 {
            return Err(EntropyError::Probability(f64::INFINITY));
        }
        Ok(Self(1.0 / k as f64))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// An entropy in bits, in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct EntropyValue(f64);

impl EntropyValue {
    pub fn new(e: f64) -> Result<Self, EntropyError> {
        if (0.0..=1.0).contains(&e) {
            Ok(Self(e))
        } else {
            Err(EntropyError::Entropy(e))
        }
    }

    /// `I(1/k)`.
    pub fn of_reciprocal(k: u64) -> Result<Self, EntropyError> {
        Probability::reciprocal(k).map(binary_entropy)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl fmt::Display for EntropyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::sig9(self.0))
    }
}

/// I(p) = −p·log2(p) − (1−p)·log2(1−p), with 0·log2(0) = 0.
pub fn binary_entropy(p: Probability) -> EntropyValue {
    let p = p.0;
    if p == 0.0 || p == 1.0 {
        return EntropyValue(0.0);
    }
    let q = 1.0 - p;
    // ln_1p keeps the second term accurate when p is tiny.
    let h = -p * p.log2() - q * (-p).ln_1p() / std::f64::consts::LN_2;
    EntropyValue(h.clamp(0.0, 1.0))
}

/// Checked convenience wrapper over [`binary_entropy`].
pub fn entropy(p: f64) -> Result<EntropyValue, EntropyError> {
    Probability::new(p).map(binary_entropy)
}

/// I(p) for p = 2^(−log2_inv), i.e. p = 1/x where log2(x) is given. Works for
/// x far beyond the range of f64 integers.
fn entropy_of_log2_reciprocal(log2_inv: f64) -> f64 {
    let p = (-log2_inv).exp2();
    if p >= 1.0 {
        return 0.0;
    }
    (p * log2_inv - (1.0 - p) * (-p).ln_1p() / std::f64::consts::LN_2).clamp(0.0, 1.0)
}

/// ⌈log2(b+1)⌉, the Binary payload length of `b > 0`.
pub fn ceil_log2_succ(b: u64) -> u64 {
    u64::from(u64::BITS - b.leading_zeros())
}

/// The two extremes of the uncertainty of a b-number `b > 0`:
/// `lower = I(1/(b+1))` when the value is length-coded and
/// `upper = I(1/(⌈log2(b+1)⌉+1))` when all doubt sits in the sign bit.
#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyBounds {
    pub b: BigUint,
    pub lower: EntropyValue,
    pub upper: EntropyValue,
}

pub fn entropy_bounds(b: u64) -> Result<UncertaintyBounds, EntropyError> {
    if b == 0 {
        return Err(EntropyError::ZeroBNumber);
    }
    let lower = binary_entropy(Probability(1.0 / (b as f64 + 1.0)));
    let upper = binary_entropy(Probability(1.0 / (ceil_log2_succ(b) as f64 + 1.0)));
    Ok(UncertaintyBounds {
        b: BigUint::from(b),
        lower,
        upper,
    })
}

/// [`entropy_bounds`] for arbitrarily large `b`.
pub fn entropy_bounds_big(b: &BigUint) -> Result<UncertaintyBounds, EntropyError> {
    if b.is_zero() {
        return Err(EntropyError::ZeroBNumber);
    }
    if let Some(small) = b.to_u64() {
        return entropy_bounds(small);
    }
    let succ = b + 1u32;
    let lower = EntropyValue(entropy_of_log2_reciprocal(log2_big(&succ)));
    let upper = binary_entropy(Probability(1.0 / (b.bits() as f64 + 1.0)));
    Ok(UncertaintyBounds {
        b: b.clone(),
        lower,
        upper,
    })
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits").max(1) as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("64 bits");
    (top as f64).log2() + shift as f64
}

/// Solves I(p*) = e for p* in `[0, 0.5]` by bisection.
///
/// I is continuous and strictly increasing on that interval, so the bracket
/// always contains exactly one root.
pub fn inverse_entropy(e: EntropyValue) -> Probability {
    let target = e.0;
    if target == 0.0 {
        return Probability(0.0);
    }
    if target == 1.0 {
        return Probability(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    for _ in 0..INVERSION_MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let h = binary_entropy(Probability(mid)).0;
        if (h - target).abs() < INVERSION_TOLERANCE * 1e-3 {
            return Probability(mid);
        }
        if h < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let h_lo = binary_entropy(Probability(lo)).0;
    let h_hi = binary_entropy(Probability(hi)).0;
    if (target - h_lo).abs() <= (h_hi - target).abs() {
        Probability(lo)
    } else {
        Probability(hi)
    }
}

/// Uncertainty of a representation split into a certain and an uncertain
/// bit group: I(r) where r = smaller group / total is the chance that the
/// smaller group is the one to flip.
///
/// With the sign as one group and a payload of L bits as the other this is
/// I(1/(L+1)), whichever of the two is assumed uncertain.
pub fn split_uncertainty(
    certain_bits: u64,
    uncertain_group_size: u64,
) -> Result<EntropyValue, EntropyError> {
    let total = certain_bits
        .checked_add(uncertain_group_size)
        .ok_or(EntropyError::EmptySplit)?;
    if total == 0 {
        return Err(EntropyError::EmptySplit);
    }
    let minority = certain_bits.min(uncertain_group_size);
    Ok(binary_entropy(Probability(minority as f64 / total as f64)))
}
