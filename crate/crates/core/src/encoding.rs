//! b-numbers: natural numbers written as a payload followed by a sign bit.
//!
//! The sign bit records which bit value stands for the root number zero.
//! Under [`SignConvention::Normal`] the sign is `1` and a `0` encodes zero;
//! under [`SignConvention::Flipped`] the sign is `0` and every payload bit is
//! the complement of its normal value.
//!
//! Two extreme payload schemes are supported. [`EncodingScheme::Binary`] is
//! the shortest positional code, leaving all uncertainty in the sign bit.
//! [`EncodingScheme::Length`] carries the value in the payload length alone.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

/// Largest Length-scheme payload that will be materialized.
pub const MAX_LENGTH_PAYLOAD: u64 = 1 << 32;

/// Largest ordinal [`von_neumann`] will render; the term doubles in size
/// with every step.
pub const VON_NEUMANN_LIMIT: u32 = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodingError {
    #[error("malformed representation: {0}")]
    Malformed(String),
    #[error("length-coded payload of {0} bits exceeds the materialization limit")]
    LengthTooLarge(BigUint),
    #[error("ordinal {n} exceeds the display limit of {limit}")]
    DisplayLimit { n: u32, limit: u32 },
}

/// An ordered sequence of bits, most significant first.
///
/// When it represents a b-number the final bit is the sign and the text form
/// separates it with `|`, e.g. `101|1`. An empty payload renders as `|1`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            bits: Vec::with_capacity(n),
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Self { bits }
    }

    /// Parses a plain `0`/`1` string without a sign separator.
    pub fn from_plain(s: &str) -> Result<Self, EncodingError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(EncodingError::Malformed(format!(
                    "unexpected character {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::from_bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn into_bits(self) -> Vec<bool> {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn extend_from(&mut self, other: &BitString) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn extend_bits<I: IntoIterator<Item = bool>>(&mut self, bits: I) {
        self.bits.extend(bits);
    }

    /// Appends the low `width` bits of `value`, most significant first.
    pub fn push_uint(&mut self, value: u64, width: u32) {
        for shift in (0..width).rev() {
            self.bits.push((value >> shift) & 1 == 1);
        }
    }

    /// The final bit.
    pub fn sign(&self) -> Option<bool> {
        self.bits.last().copied()
    }

    /// Everything but the final bit.
    pub fn payload(&self) -> &[bool] {
        match self.bits.split_last() {
            Some((_, payload)) => payload,
            None => &[],
        }
    }

    pub fn payload_len(&self) -> usize {
        self.bits.len().saturating_sub(1)
    }

    /// Renders all bits without the sign separator.
    pub fn to_plain(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(sign) = self.sign() else {
            return Ok(());
        };
        for &b in self.payload() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str(if sign { "|1" } else { "|0" })
    }
}

impl FromStr for BitString {
    type Err = EncodingError;

    /// Accepts `payload|sign` or a plain bit string whose last bit is the sign.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once('|') {
            Some((payload, sign)) => {
                if sign.len() != 1 {
                    return Err(EncodingError::Malformed(format!(
                        "sign part {sign:?} must be a single bit"
                    )));
                }
                let mut bits = Self::from_plain(payload)?;
                bits.extend_from(&Self::from_plain(sign)?);
                Ok(bits)
            }
            None => Self::from_plain(s),
        }
    }
}

impl FromIterator<bool> for BitString {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self::from_bits(iter.into_iter().collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignConvention {
    /// Sign bit 1: a zero is written as 0.
    Normal,
    /// Sign bit 0: a zero is written as 1.
    Flipped,
}

impl SignConvention {
    pub fn sign_bit(self) -> bool {
        matches!(self, Self::Normal)
    }

    /// The bit that encodes zero under this convention.
    pub fn zero_bit(self) -> bool {
        !self.sign_bit()
    }

    pub fn from_sign_bit(sign: bool) -> Self {
        if sign {
            Self::Normal
        } else {
            Self::Flipped
        }
    }

    pub fn opposite(self) -> Self {
        match self {
            Self::Normal => Self::Flipped,
            Self::Flipped => Self::Normal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EncodingScheme {
    /// Positional binary; the payload of n > 0 has ⌈log2(n+1)⌉ bits.
    Binary,
    /// The payload length is the value; the bit values carry nothing.
    Length,
}

/// Number of payload bits `scheme` uses for `n`.
pub fn payload_len(n: &BigUint, scheme: EncodingScheme) -> BigUint {
    match scheme {
        EncodingScheme::Binary => BigUint::from(n.bits().max(1)),
        EncodingScheme::Length => n.clone(),
    }
}

/// Writes `n` as payload followed by sign.
pub fn encode(
    n: &BigUint,
    scheme: EncodingScheme,
    convention: SignConvention,
) -> Result<BitString, EncodingError> {
    let zero = convention.zero_bit();
    let mut out = match scheme {
        EncodingScheme::Binary => n
            .to_radix_be(2)
            .into_iter()
            .map(|d| (d == 1) != zero)
            .collect::<BitString>(),
        EncodingScheme::Length => {
            let len = n
                .to_u64()
                .filter(|&len| len <= MAX_LENGTH_PAYLOAD)
                .ok_or_else(|| EncodingError::LengthTooLarge(n.clone()))?;
            BitString::from_bits(vec![zero; len as usize])
        }
    };
    out.push(convention.sign_bit());
    Ok(out)
}

/// Reads a representation back to its value. The sign bit selects the
/// convention; Length payload bits are ignored.
pub fn decode(bits: &BitString, scheme: EncodingScheme) -> Result<BigUint, EncodingError> {
    let sign = bits
        .sign()
        .ok_or_else(|| EncodingError::Malformed("empty representation".into()))?;
    let payload = bits.payload();
    Ok(match scheme {
        EncodingScheme::Binary => {
            let digits: Vec<u8> = payload.iter().map(|&b| u8::from(b == sign)).collect();
            if digits.is_empty() {
                BigUint::zero()
            } else {
                BigUint::from_radix_be(&digits, 2).expect("digits are 0 or 1")
            }
        }
        EncodingScheme::Length => BigUint::from(payload.len()),
    })
}

/// The Normal and Flipped renderings of `n`, in that order.
pub fn possible_encodings(
    n: &BigUint,
    scheme: EncodingScheme,
) -> Result<(BitString, BitString), EncodingError> {
    Ok((
        encode(n, scheme, SignConvention::Normal)?,
        encode(n, scheme, SignConvention::Flipped)?,
    ))
}

/// Complements every bit.
pub fn dual(bits: &BitString) -> BitString {
    bits.bits().iter().map(|&b| !b).collect()
}

/// Increments a representation in place of its own convention, without
/// going through the numeric value.
///
/// Binary/Normal is an ordinary ripple-carry increment. Binary/Flipped works
/// in the complement domain: trailing 1-digits are written as 0-bits there,
/// so the carry turns trailing 0-bits into 1 and the first 1-bit into 0, and
/// an overflow prepends a 0. Length appends one fill bit.
pub fn successor_bits(bits: &BitString, scheme: EncodingScheme) -> Result<BitString, EncodingError> {
    let sign = bits
        .sign()
        .ok_or_else(|| EncodingError::Malformed("empty representation".into()))?;
    let zero = !sign;
    let mut payload = bits.payload().to_vec();
    match scheme {
        EncodingScheme::Length => payload.push(zero),
        EncodingScheme::Binary => {
            let one = sign;
            let mut carried = true;
            for bit in payload.iter_mut().rev() {
                if *bit == one {
                    *bit = zero;
                } else {
                    *bit = one;
                    carried = false;
                    break;
                }
            }
            if carried {
                payload.insert(0, one);
            }
        }
    }
    payload.push(sign);
    Ok(BitString::from_bits(payload))
}

/// A natural number together with the scheme and convention used to write it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BNumber {
    value: BigUint,
    scheme: EncodingScheme,
    convention: SignConvention,
}

impl BNumber {
    pub fn new(value: impl Into<BigUint>, scheme: EncodingScheme, convention: SignConvention) -> Self {
        Self {
            value: value.into(),
            scheme,
            convention,
        }
    }

    /// Parses `bits` under `scheme`, taking the convention from the sign bit.
    pub fn parse(bits: &BitString, scheme: EncodingScheme) -> Result<Self, EncodingError> {
        let value = decode(bits, scheme)?;
        let convention = SignConvention::from_sign_bit(bits.sign().expect("decode checked"));
        Ok(Self {
            value,
            scheme,
            convention,
        })
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn scheme(&self) -> EncodingScheme {
        self.scheme
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    pub fn render(&self) -> Result<BitString, EncodingError> {
        encode(&self.value, self.scheme, self.convention)
    }

    /// The same value under the opposite convention.
    pub fn dual(&self) -> Self {
        Self {
            convention: self.convention.opposite(),
            ..self.clone()
        }
    }

    /// Peano successor: value plus one, scheme and convention kept.
    pub fn successor(&self) -> Self {
        Self {
            value: &self.value + BigUint::one(),
            ..self.clone()
        }
    }
}

/// Nested-brace rendering of a von Neumann ordinal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetTerm {
    text: String,
}

impl SetTerm {
    pub fn as_str(&self) -> &str {
        &self.text
    }

    /// Counts the comma-separated elements at brace depth one.
    pub fn top_level_elements(&self) -> usize {
        let inner = match self.text.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            Some(inner) => inner,
            None => return 0,
        };
        if inner.is_empty() {
            return 0;
        }
        let mut depth = 0usize;
        let mut count = 1;
        for c in inner.chars() {
            match c {
                '{' => depth += 1,
                '}' => depth -= 1,
                ',' if depth == 0 => count += 1,
                _ => {}
            }
        }
        count
    }
}

impl fmt::Display for SetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Renders n = (n−1) ∪ {n−1} starting from 0 = ∅. With `ascii`, the empty
/// set is written `{}`.
pub fn von_neumann(n: u32, ascii: bool) -> Result<SetTerm, EncodingError> {
    if n > VON_NEUMANN_LIMIT {
        return Err(EncodingError::DisplayLimit {
            n,
            limit: VON_NEUMANN_LIMIT,
        });
    }
    let empty = if ascii { "{}" } else { "∅" };
    let mut terms: Vec<String> = vec![empty.to_string()];
    for k in 1..=n as usize {
        let text = format!("{{{}}}", terms[..k].join(","));
        terms.push(text);
    }
    Ok(SetTerm {
        text: terms.swap_remove(n as usize),
    })
}
