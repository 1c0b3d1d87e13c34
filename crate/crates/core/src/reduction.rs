//! Entropy reduction by padding.
//!
//! A representation with an L-bit payload has uncertainty I(1/(L+1)).
//! Appending consistent fill bits to the payload lowers that ratio until it
//! reaches the probability p* with I(p*) = ε. The padded string keeps the
//! original payload length in a 32-bit header, so removing the padding is
//! exact:
//!
//! ```text
//! [header: 32][original payload][padding][sign]
//! ```
//!
//! The padding count follows the ratio rule 1/(L+k+1) ≤ p*. The header bits
//! are part of the padded payload but are not credited toward that rule, so
//! the padded representation always ends up strictly below ε.

use thiserror::Error;

use crate::encoding::BitString;
use crate::entropy::{self, EntropyValue};
use crate::machine::{self, Computation, MachineError, RunResult};

pub const LENGTH_HEADER_BITS: u32 = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error("uncertainty target {0} cannot be reached with finite padding")]
    Unreachable(f64),
    #[error("invalid uncertainty target: {0}")]
    InvalidTarget(String),
    #[error("padding of {0} bits cannot be materialized")]
    TooLarge(String),
    #[error("malformed padding: {0}")]
    MalformedPadding(String),
    #[error("empty representation")]
    Empty,
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// An uncertainty threshold ε.
///
/// `Reciprocal(k)` is I(1/k) and is handled with exact integer arithmetic;
/// `Value` goes through numerical inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Target {
    Reciprocal(u64),
    Value(EntropyValue),
}

impl Target {
    pub fn value(e: f64) -> Result<Self, ReductionError> {
        EntropyValue::new(e)
            .map(Target::Value)
            .map_err(|e| ReductionError::InvalidTarget(e.to_string()))
    }

    /// ε as a number.
    pub fn epsilon(&self) -> f64 {
        match *self {
            Target::Reciprocal(0) => f64::NAN,
            Target::Reciprocal(k) => EntropyValue::of_reciprocal(k).expect("k > 0").get(),
            Target::Value(e) => e.get(),
        }
    }

    /// p* with I(p*) = ε and p* ≤ 1/2.
    pub fn p_star(&self) -> f64 {
        match *self {
            Target::Reciprocal(k) => 1.0 / k as f64,
            Target::Value(e) => entropy::inverse_entropy(e).get(),
        }
    }

    /// Smallest m ≥ 2 with I(1/m) ≤ ε, i.e. the payload must reach m − 1
    /// bits.
    pub fn threshold_denominator(&self) -> Result<u64, ReductionError> {
        match *self {
            Target::Reciprocal(0) => Err(ReductionError::InvalidTarget("I(1/0)".into())),
            Target::Reciprocal(1) => Err(ReductionError::Unreachable(0.0)),
            Target::Reciprocal(k) => Ok(k),
            Target::Value(e) => denominator_for(e),
        }
    }
}

impl std::fmt::Display for Target {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Target::Reciprocal(k) => write!(f, "I(1/{k})"),
            Target::Value(e) => write!(f, "{e}"),
        }
    }
}

impl std::str::FromStr for Target {
    type Err = ReductionError;

    /// Accepts a decimal literal or `I(1/K)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(k) = s.strip_prefix("I(1/").and_then(|r| r.strip_suffix(')')) {
            return k
                .trim()
                .parse::<u64>()
                .ok()
                .filter(|&k| k > 0)
                .map(Target::Reciprocal)
                .ok_or_else(|| ReductionError::InvalidTarget(s.to_string()));
        }
        let e: f64 = s
            .parse()
            .map_err(|_| ReductionError::InvalidTarget(s.to_string()))?;
        Target::value(e)
    }
}

fn meets(m: u64, e: f64) -> bool {
    EntropyValue::of_reciprocal(m).expect("m > 0").get() <= e
}

/// Integer search for the smallest m ≥ 2 with I(1/m) ≤ e, seeded by the
/// numerical inverse.
fn denominator_for(e: EntropyValue) -> Result<u64, ReductionError> {
    let eps = e.get();
    if eps <= 0.0 {
        return Err(ReductionError::Unreachable(eps));
    }
    let p_star = entropy::inverse_entropy(e).get();
    if p_star <= 0.0 {
        return Err(ReductionError::TooLarge(format!("target {eps}")));
    }
    let estimate = (1.0 / p_star).ceil();
    if estimate >= (u64::MAX / 4) as f64 {
        return Err(ReductionError::TooLarge(format!("target {eps}")));
    }
    let estimate = (estimate as u64).max(2);

    // Bracket: lo fails (or is the floor), hi meets.
    let mut hi = estimate;
    while !meets(hi, eps) {
        hi = hi
            .checked_mul(2)
            .filter(|&h| h < u64::MAX / 4)
            .ok_or_else(|| ReductionError::TooLarge(format!("target {eps}")))?;
    }
    if meets(2, eps) {
        return Ok(2);
    }
    let mut lo = (estimate / 2).max(2);
    while lo > 2 && meets(lo, eps) {
        lo = (lo / 2).max(2);
    }
    if meets(lo, eps) {
        return Ok(lo);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if meets(mid, eps) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Fewest fill bits k with 1/(L+k+1) ≤ p*, i.e. I(1/(L+k+1)) ≤ ε.
pub fn padding_bits_needed(current_payload_length: u64, target: &Target) -> Result<u64, ReductionError> {
    let m = target.threshold_denominator()?;
    Ok((m - 1).saturating_sub(current_payload_length))
}

/// What the added bits are made of.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FillPattern {
    /// Every added bit is the zero encoding of the representation's
    /// convention: 0 when the sign is 1, 1 when the sign is 0.
    #[default]
    ZeroEncoding,
    /// The given bits, repeated as often as needed.
    Repeat(BitString),
}

impl FillPattern {
    fn bits(&self, sign: bool, count: usize) -> Result<Vec<bool>, ReductionError> {
        match self {
            FillPattern::ZeroEncoding => Ok(vec![!sign; count]),
            FillPattern::Repeat(code) if code.is_empty() => {
                Err(ReductionError::InvalidTarget("empty fill pattern".into()))
            }
            FillPattern::Repeat(code) => {
                Ok(code.bits().iter().copied().cycle().take(count).collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaddingPlan {
    pub target_epsilon: f64,
    pub p_star: f64,
    pub original_length: u64,
    pub bits_to_add: u64,
    pub fill: FillPattern,
}

impl PaddingPlan {
    pub fn new(original_length: u64, target: &Target, fill: FillPattern) -> Result<Self, ReductionError> {
        if let Target::Reciprocal(0) = target {
            return Err(ReductionError::InvalidTarget("I(1/0)".into()));
        }
        let eps = target.epsilon();
        if eps <= 0.0 {
            return Err(ReductionError::Unreachable(eps));
        }
        Ok(Self {
            target_epsilon: eps,
            p_star: target.p_star(),
            original_length,
            bits_to_add: padding_bits_needed(original_length, target)?,
            fill,
        })
    }

    /// Payload bits counted by the ratio rule, header excluded.
    pub fn padded_length(&self) -> u64 {
        self.original_length + self.bits_to_add
    }

    /// 1/(L+k+1).
    pub fn resulting_ratio(&self) -> f64 {
        1.0 / (self.padded_length() as f64 + 1.0)
    }

    /// Uncertainty of the materialized padded string, header included.
    pub fn achieved(&self) -> EntropyValue {
        machine::uncertainty_of_payload_len(self.padded_length() + u64::from(LENGTH_HEADER_BITS))
    }
}

/// A padded representation, laid out as
/// `[header: 32][original payload][padding][sign]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PaddedString {
    bits: BitString,
    length_header: u64,
}

impl PaddedString {
    /// Reads the header from a raw bit string.
    pub fn from_bits(bits: BitString) -> Result<Self, ReductionError> {
        let header_len = LENGTH_HEADER_BITS as usize;
        if bits.len() < header_len + 1 {
            return Err(ReductionError::MalformedPadding(format!(
                "{} bits is shorter than header plus sign",
                bits.len()
            )));
        }
        let length_header = bits.bits()[..header_len]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
        Ok(Self { bits, length_header })
    }

    pub fn bits(&self) -> &BitString {
        &self.bits
    }

    pub fn length_header(&self) -> u64 {
        self.length_header
    }

    /// Original payload plus padding.
    pub fn region_len(&self) -> u64 {
        (self.bits.len() - LENGTH_HEADER_BITS as usize - 1) as u64
    }

    pub fn padding_len(&self) -> u64 {
        self.region_len().saturating_sub(self.length_header)
    }

    /// Uncertainty of the padded representation, I(1/|bits|).
    pub fn uncertainty(&self) -> EntropyValue {
        machine::uncertainty_of_payload_len(self.bits.payload_len() as u64)
    }
}

/// Pads `bits` until its uncertainty drops below `target`.
pub fn apply_mapping(
    bits: &BitString,
    target: &Target,
    fill: &FillPattern,
) -> Result<(PaddedString, PaddingPlan), ReductionError> {
    let sign = bits.sign().ok_or(ReductionError::Empty)?;
    let payload = bits.payload();
    if payload.len() as u64 >= 1u64 << LENGTH_HEADER_BITS {
        return Err(ReductionError::TooLarge(format!("payload of {} bits", payload.len())));
    }
    let plan = PaddingPlan::new(payload.len() as u64, target, fill.clone())?;
    let count = usize::try_from(plan.bits_to_add)
        .ok()
        .filter(|&c| c < (1usize << 40))
        .ok_or_else(|| ReductionError::TooLarge(plan.bits_to_add.to_string()))?;
    let mut out = BitString::with_capacity(LENGTH_HEADER_BITS as usize + payload.len() + count + 1);
    out.push_uint(payload.len() as u64, LENGTH_HEADER_BITS);
    out.extend_bits(payload.iter().copied());
    out.extend_bits(fill.bits(sign, count)?);
    out.push(sign);
    let length_header = payload.len() as u64;
    Ok((
        PaddedString {
            bits: out,
            length_header,
        },
        plan,
    ))
}

/// Strips header and padding, returning the original representation.
pub fn invert_mapping(p: &PaddedString) -> Result<BitString, ReductionError> {
    let bits = p.bits.bits();
    let header_len = LENGTH_HEADER_BITS as usize;
    if bits.len() < header_len + 1 {
        return Err(ReductionError::MalformedPadding("truncated header".into()));
    }
    let header = bits[..header_len]
        .iter()
        .fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
    if header != p.length_header {
        return Err(ReductionError::MalformedPadding(format!(
            "header bits say {header}, recorded length is {}",
            p.length_header
        )));
    }
    let region = (bits.len() - header_len - 1) as u64;
    if header > region {
        return Err(ReductionError::MalformedPadding(format!(
            "header claims {header} payload bits in a {region}-bit region"
        )));
    }
    let end = header_len + header as usize;
    let mut out = BitString::with_capacity(header as usize + 1);
    out.extend_bits(bits[header_len..end].iter().copied());
    out.push(*bits.last().expect("checked length"));
    Ok(out)
}

/// C′ = (T′, M(b), o): the padded encoding of a computation. T′ is realized
/// operationally as "strip the padding, then run T".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedComputation {
    padded: PaddedString,
}

impl ReducedComputation {
    pub fn padded(&self) -> &PaddedString {
        &self.padded
    }

    pub fn output_bit(&self) -> bool {
        self.padded.bits().sign().expect("non-empty")
    }

    pub fn uncertainty(&self) -> EntropyValue {
        self.padded.uncertainty()
    }

    /// Removes the padding and decodes the original computation.
    pub fn recover(&self) -> Result<Computation, ReductionError> {
        Ok(Computation::from_combined(invert_mapping(&self.padded)?)?)
    }

    /// Runs T′: recover the original (T, b), then simulate T on b.
    pub fn run(&self, step_limit: u64) -> Result<RunResult, ReductionError> {
        Ok(self.recover()?.run(step_limit)?)
    }
}

pub fn reduce_computation(
    c: &Computation,
    target: &Target,
    fill: &FillPattern,
) -> Result<(ReducedComputation, PaddingPlan), ReductionError> {
    let (padded, plan) = apply_mapping(c.combined(), target, fill)?;
    Ok((ReducedComputation { padded }, plan))
}

/// Same as [`reduce_computation`] with the machine code itself as fill.
pub fn reduce_with_program_code(
    c: &Computation,
    target: &Target,
) -> Result<(ReducedComputation, PaddingPlan), ReductionError> {
    reduce_computation(c, target, &FillPattern::Repeat(c.machine_bits().clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;
    use crate::machine::{encode_computation, parse_machine, random_machine, DEFAULT_STEP_LIMIT, ENDS_IN_ONE};
    use rand::{Rng, SeedableRng};

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn i_of(k: u64) -> f64 {
        EntropyValue::of_reciprocal(k).unwrap().get()
    }

    #[test]
    fn padding_examples() {
        assert_eq!(padding_bits_needed(4, &Target::Reciprocal(9)).unwrap(), 4);
        assert_eq!(padding_bits_needed(12, &Target::Reciprocal(33)).unwrap(), 20);
        assert_eq!(padding_bits_needed(100, &Target::value(1.0).unwrap()).unwrap(), 0);
        // Same answers when ε arrives as a plain number.
        assert_eq!(padding_bits_needed(4, &Target::value(i_of(9)).unwrap()).unwrap(), 4);
        assert_eq!(padding_bits_needed(12, &Target::value(i_of(33)).unwrap()).unwrap(), 20);
    }

    #[test]
    fn zero_target_is_unreachable() {
        assert!(matches!(
            padding_bits_needed(4, &Target::value(0.0).unwrap()),
            Err(ReductionError::Unreachable(_))
        ));
        assert!(matches!(
            padding_bits_needed(4, &Target::Reciprocal(1)),
            Err(ReductionError::Unreachable(_))
        ));
        assert!(Target::value(-0.5).is_err());
        assert!(Target::value(1.5).is_err());
        assert!(matches!(
            PaddingPlan::new(4, &Target::Reciprocal(0), FillPattern::ZeroEncoding),
            Err(ReductionError::InvalidTarget(_))
        ));
    }

    #[test]
    fn target_text() {
        assert_eq!("I(1/9)".parse::<Target>().unwrap(), Target::Reciprocal(9));
        assert_eq!("0.5".parse::<Target>().unwrap(), Target::value(0.5).unwrap());
        assert!("I(1/0)".parse::<Target>().is_err());
        assert!("I(1/x)".parse::<Target>().is_err());
        assert!("2".parse::<Target>().is_err());
        assert_eq!(Target::Reciprocal(33).to_string(), "I(1/33)");
    }

    #[test]
    fn padding_is_minimal() {
        for k in [2u64, 3, 9, 33, 100, 1025, 4097, 1 << 20] {
            for target in [Target::Reciprocal(k), Target::value(i_of(k)).unwrap()] {
                let eps = target.epsilon();
                for len in [0u64, 1, 5, k / 2, k - 1, k, k + 7] {
                    let pad = padding_bits_needed(len, &target).unwrap();
                    let total = len + pad;
                    assert!(i_of(total + 1) <= eps, "k={k} len={len}");
                    // a one-bit payload is the shortest that counts
                    if pad > 0 && total >= 2 {
                        assert!(i_of(total) > eps, "k={k} len={len}: not minimal");
                    }
                }
            }
        }
    }

    #[test]
    fn arbitrary_targets_follow_the_ratio_rule() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..500 {
            let eps: f64 = rng.gen_range(1e-4..1.0);
            let target = Target::value(eps).unwrap();
            let m = target.threshold_denominator().unwrap();
            assert!(i_of(m) <= eps);
            if m > 2 {
                assert!(i_of(m - 1) > eps);
            }
            // ratio rule 1/m ≤ p* agrees with the integer search up to inversion error
            let p_star = target.p_star();
            assert!((1.0 / m as f64) <= p_star * (1.0 + 1e-6));
        }
    }

    #[test]
    fn apply_examples() {
        let (p, plan) = apply_mapping(&bs("101|1"), &Target::value(1.0).unwrap(), &FillPattern::default()).unwrap();
        assert_eq!(plan.bits_to_add, 0);
        assert_eq!(p.bits().to_plain(), format!("{:032b}1011", 3));

        let (p, plan) = apply_mapping(&bs("101|1"), &Target::Reciprocal(9), &FillPattern::default()).unwrap();
        assert_eq!(plan.bits_to_add, 5);
        assert_eq!(p.region_len(), 8);
        assert_eq!(p.padding_len(), 5);
        assert_eq!(p.bits().to_plain(), format!("{:032b}101000001", 3));
        assert!(p.uncertainty().get() < i_of(9));
        assert_eq!(p.uncertainty(), plan.achieved());
        assert!(plan.resulting_ratio() <= plan.p_star);
    }

    #[test]
    fn fill_follows_convention() {
        let (p, _) = apply_mapping(&bs("010|0"), &Target::Reciprocal(9), &FillPattern::default()).unwrap();
        assert!(p.bits().to_plain().ends_with("010111110"));
        let code = bs("110");
        let (p, _) = apply_mapping(&bs("1|1"), &Target::Reciprocal(9), &FillPattern::Repeat(code)).unwrap();
        assert_eq!(&p.bits().to_plain()[32..], "111011011");
        assert!(apply_mapping(&bs("1|1"), &Target::Reciprocal(9), &FillPattern::Repeat(BitString::new())).is_err());
    }

    #[test]
    fn invert_examples() {
        let (p, _) = apply_mapping(&bs("0|1"), &Target::value(0.9).unwrap(), &FillPattern::default()).unwrap();
        assert_eq!(invert_mapping(&p).unwrap().to_string(), "0|1");
        let (p, _) = apply_mapping(&bs("101|1"), &Target::Reciprocal(9), &FillPattern::default()).unwrap();
        assert_eq!(invert_mapping(&p).unwrap().to_string(), "101|1");
    }

    #[test]
    fn invert_rejects_bad_header() {
        // header claims 9 payload bits, region holds 5
        let raw = bs(&format!("{:032b}00000|1", 9));
        let p = PaddedString::from_bits(raw).unwrap();
        assert!(matches!(invert_mapping(&p), Err(ReductionError::MalformedPadding(_))));
        assert!(PaddedString::from_bits(bs("1011")).is_err());
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(
            apply_mapping(&BitString::new(), &Target::Reciprocal(9), &FillPattern::default()).unwrap_err(),
            ReductionError::Empty
        );
    }

    #[test]
    fn reduce_preserves_output() {
        let m = parse_machine(ENDS_IN_ONE).unwrap();
        let c = encode_computation(&m, &BigUint::from(5u32), true).unwrap();
        let (reduced, plan) = reduce_computation(&c, &Target::value(1.0).unwrap(), &FillPattern::default()).unwrap();
        assert_eq!(plan.bits_to_add, 0);
        assert_eq!(reduced.recover().unwrap(), c);

        let (reduced, plan) = reduce_computation(&c, &Target::Reciprocal(1025), &FillPattern::default()).unwrap();
        assert_eq!(plan.bits_to_add, 1024 - c.payload_len());
        assert!(reduced.uncertainty().get() < i_of(1025));
        assert_eq!(reduced.output_bit(), c.output_bit());
        assert_eq!(reduced.run(DEFAULT_STEP_LIMIT).unwrap(), c.run(DEFAULT_STEP_LIMIT).unwrap());

        assert!(matches!(
            reduce_computation(&c, &Target::value(0.0).unwrap(), &FillPattern::default()),
            Err(ReductionError::Unreachable(_))
        ));
    }

    #[test]
    fn program_code_fill_roundtrips() {
        let m = parse_machine(ENDS_IN_ONE).unwrap();
        let c = encode_computation(&m, &BigUint::from(6u32), false).unwrap();
        let (reduced, plan) = reduce_with_program_code(&c, &Target::Reciprocal(2049)).unwrap();
        assert_eq!(plan.bits_to_add, 2048 - c.payload_len());
        assert_eq!(reduced.recover().unwrap(), c);
    }

    #[test]
    fn random_computations_roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let m = random_machine(&mut rng, 6);
            let v = BigUint::from(rng.gen_range(0u32..10_000));
            let c = encode_computation(&m, &v, rng.gen()).unwrap();
            let (reduced, _) = reduce_computation(&c, &Target::Reciprocal(700), &FillPattern::default()).unwrap();
            assert_eq!(reduced.recover().unwrap(), c);
            assert_eq!(reduced.run(500).unwrap(), c.run(500).unwrap());
        }
    }

    proptest::proptest! {
        #[test]
        fn apply_then_invert_is_identity(
            payload in proptest::collection::vec(proptest::bool::ANY, 0..64),
            sign: bool,
            k in 2u64..300,
        ) {
            let mut bits = BitString::from_bits(payload);
            bits.push(sign);
            let (p, plan) = apply_mapping(&bits, &Target::Reciprocal(k), &FillPattern::default()).unwrap();
            proptest::prop_assert_eq!(invert_mapping(&p).unwrap(), bits.clone());
            proptest::prop_assert!(p.uncertainty().get() < i_of(k));
            proptest::prop_assert_eq!(p.padding_len(), plan.bits_to_add);
            let reparsed = PaddedString::from_bits(p.bits().clone()).unwrap();
            proptest::prop_assert_eq!(reparsed, p);
        }

        #[test]
        fn apply_is_injective(
            a in proptest::collection::vec(proptest::bool::ANY, 1..24),
            b in proptest::collection::vec(proptest::bool::ANY, 1..24),
            k in 2u64..64,
        ) {
            proptest::prop_assume!(a != b);
            let t = Target::Reciprocal(k);
            let pa = apply_mapping(&BitString::from_bits(a), &t, &FillPattern::default()).unwrap().0;
            let pb = apply_mapping(&BitString::from_bits(b), &t, &FillPattern::default()).unwrap().0;
            proptest::prop_assert_ne!(pa, pb);
        }
    }
}
