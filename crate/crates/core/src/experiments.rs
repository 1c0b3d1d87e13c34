//! Padding-cost sweeps.
//!
//! Two sweeps measure how many fill bits the reduction mapping must add:
//!
//! - [`theorem3_sweep`]: for each n, the padding needed to reach
//!   I(1/(⌈log2(n+1)⌉+1)) (efficient coding; nothing to add) and
//!   I(1/(n+1)) (length coding; n − ⌈log2(n+1)⌉ bits, linear in n and hence
//!   exponential in the bit length of n).
//! - [`theorem4_sweep`]: for each input value b, the padding needed to push
//!   an encoded computation below I(1/(2^b+1)), i.e. 2^b − baseline(b).
//!
//! Thresholds here are closed-form `I(1/K)` targets, so every count is exact
//! integer arithmetic.

use std::fmt;
use std::io::{self, Write};

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::entropy::{ceil_log2_succ, EntropyValue};
use crate::format::sig9;
use crate::machine::{self, encode_computation, TuringMachine};
use crate::reduction::{self, FillPattern, ReductionError, Target, LENGTH_HEADER_BITS};

/// Largest b for which [`theorem4_sweep`] builds the padded computation.
pub const MATERIALIZE_LIMIT: u32 = 20;

pub const MAX_THEOREM4_B: u32 = 62;

pub const CSV_HEADER: &str = "parameter,baseline_length,required_length,padding,epsilon,achieved";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("need at least 3 records, got {0}")]
    InsufficientData(usize),
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("record {parameter}: achieved {achieved} is not below {epsilon}")]
    TargetMissed {
        parameter: u64,
        achieved: f64,
        epsilon: f64,
    },
    #[error("record {parameter}: reduction added {reduced} bits, sweep counted {counted}")]
    Inconsistent {
        parameter: u64,
        reduced: u64,
        counted: u64,
    },
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrowthClass {
    Polynomial,
    Exponential,
    Unclassified,
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthClass::Polynomial => "Polynomial",
            GrowthClass::Exponential => "Exponential",
            GrowthClass::Unclassified => "Unclassified",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRecord {
    pub parameter: u64,
    pub baseline_length: u64,
    pub required_length: u64,
    pub padding: u64,
    pub epsilon: EntropyValue,
    pub achieved: EntropyValue,
}

impl GrowthRecord {
    /// Record for reaching I(1/(required+1)) from `baseline` payload bits.
    /// `achieved` is the uncertainty of the padded string, header included.
    fn closed_form(parameter: u64, baseline_length: u64, required_length: u64) -> Self {
        let padding = required_length.saturating_sub(baseline_length);
        Self {
            parameter,
            baseline_length,
            required_length,
            padding,
            epsilon: machine::uncertainty_of_payload_len(required_length),
            achieved: machine::uncertainty_of_payload_len(
                baseline_length + padding + u64::from(LENGTH_HEADER_BITS),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub records: Vec<GrowthRecord>,
    pub growth_class: GrowthClass,
    /// padding(i+1) / padding(i) for consecutive records.
    pub fit_evidence: Vec<f64>,
}

impl ExperimentReport {
    pub fn new(mut records: Vec<GrowthRecord>, growth_class: GrowthClass) -> Self {
        records.sort_by_key(|r| r.parameter);
        let fit_evidence = successive_ratios(records.iter().map(|r| r.padding));
        Self {
            records,
            growth_class,
            fit_evidence,
        }
    }

    /// One record per complete bit length of the parameter: the record for
    /// the largest parameter with that many bits, i.e. n = 2^j − 1, with the
    /// bit length j as its parameter.
    pub fn by_bit_length(&self) -> Self {
        let records = self
            .records
            .iter()
            .filter(|r| r.parameter > 0 && r.parameter.wrapping_add(1).is_power_of_two())
            .map(|r| GrowthRecord {
                parameter: ceil_log2_succ(r.parameter),
                ..r.clone()
            })
            .collect();
        Self::new(records, self.growth_class)
    }
}

/// Ratio of consecutive values. 0/0 counts as 1 (no growth) and x/0 for
/// x > 0 as infinity.
pub fn successive_ratios(values: impl IntoIterator<Item = u64>) -> Vec<f64> {
    let values: Vec<u64> = values.into_iter().collect();
    values
        .windows(2)
        .map(|w| match (w[0], w[1]) {
            (0, 0) => 1.0,
            (0, _) => f64::INFINITY,
            (a, b) => b as f64 / a as f64,
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthEvidence {
    pub ratios: Vec<f64>,
    /// The last usable ratio, taken as the limit estimate.
    pub limit: Option<f64>,
    pub verdict: GrowthClass,
}

/// Ratio band counted as "→ 1".
pub const POLYNOMIAL_BAND: f64 = 0.01;
/// Smallest ratio limit counted as geometric growth.
pub const EXPONENTIAL_MIN_RATIO: f64 = 1.5;
/// Relative spread allowed between the last two ratios for a limit to be
/// considered stable.
pub const STABILITY: f64 = 0.05;

/// Classifies the padding growth of a report from its successive ratios.
///
/// Leading records with zero padding are skipped. All-zero padding is
/// Polynomial. Otherwise the last ratio estimates the limit: within
/// [`POLYNOMIAL_BAND`] of 1 is Polynomial, a stable limit of at least
/// [`EXPONENTIAL_MIN_RATIO`] is Exponential, anything else is Unclassified.
pub fn growth_ratio_check(report: &ExperimentReport) -> Result<GrowthEvidence, ExperimentError> {
    if report.records.len() < 3 {
        return Err(ExperimentError::InsufficientData(report.records.len()));
    }
    let ratios = successive_ratios(report.records.iter().map(|r| r.padding));
    let Some(first) = report.records.iter().position(|r| r.padding > 0) else {
        return Ok(GrowthEvidence {
            ratios,
            limit: Some(1.0),
            verdict: GrowthClass::Polynomial,
        });
    };
    let usable = &ratios[first..];
    let limit = usable.last().copied();
    let verdict = match usable {
        [.., prev, last] => {
            if (last - 1.0).abs() <= POLYNOMIAL_BAND {
                GrowthClass::Polynomial
            } else if *last >= EXPONENTIAL_MIN_RATIO && (last - prev).abs() <= STABILITY * last {
                GrowthClass::Exponential
            } else {
                GrowthClass::Unclassified
            }
        }
        _ => GrowthClass::Unclassified,
    };
    Ok(GrowthEvidence {
        ratios,
        limit,
        verdict,
    })
}

/// Efficient-coding and length-coding padding for every n in `[2, max_n]`.
/// Returns `(efficient, length)`.
pub fn theorem3_sweep(max_n: u64) -> Result<(ExperimentReport, ExperimentReport), ExperimentError> {
    if max_n < 2 {
        return Err(ExperimentError::Range(format!("max_n = {max_n} < 2")));
    }
    let (efficient, length): (Vec<_>, Vec<_>) = (2..=max_n)
        .into_par_iter()
        .map(|n| {
            let baseline = ceil_log2_succ(n);
            (
                GrowthRecord::closed_form(n, baseline, baseline),
                GrowthRecord::closed_form(n, baseline, n),
            )
        })
        .unzip();
    Ok((
        ExperimentReport::new(efficient, GrowthClass::Polynomial),
        ExperimentReport::new(length, GrowthClass::Exponential),
    ))
}

/// Encoded-computation payload length of `machine` run on input value `b`.
pub fn computation_baseline(machine: &TuringMachine) -> impl Fn(u64) -> u64 + Sync + '_ {
    let code_len = machine::serialize_machine(machine)
        .map(|bits| bits.len() as u64)
        .unwrap_or(0);
    move |b| code_len + u64::from(machine::INPUT_LENGTH_BITS) + ceil_log2_succ(b).max(1)
}

/// Padding needed to reach I(1/(2^b+1)) for `b` in `[1, max_b]`.
///
/// For b ≤ [`MATERIALIZE_LIMIT`] and a `machine` to encode, the padded
/// computation is built through the reduction mapping and checked: its
/// padding must equal the closed-form count and its uncertainty must be
/// below ε.
pub fn theorem4_sweep<F>(
    max_b: u32,
    baseline: F,
    machine: Option<&TuringMachine>,
) -> Result<ExperimentReport, ExperimentError>
where
    F: Fn(u64) -> u64 + Sync,
{
    if max_b == 0 || max_b > MAX_THEOREM4_B {
        return Err(ExperimentError::Range(format!(
            "max_b = {max_b} outside [1, {MAX_THEOREM4_B}]"
        )));
    }
    let records = (1..=max_b)
        .into_par_iter()
        .map(|b| {
            let required = 1u64 << b;
            let record = GrowthRecord::closed_form(u64::from(b), baseline(u64::from(b)), required);
            if let Some(m) = machine.filter(|_| b <= MATERIALIZE_LIMIT) {
                materialize(m, b, &record)?;
            }
            Ok(record)
        })
        .collect::<Result<Vec<_>, ExperimentError>>()?;
    Ok(ExperimentReport::new(records, GrowthClass::Exponential))
}

fn materialize(m: &TuringMachine, b: u32, record: &GrowthRecord) -> Result<(), ExperimentError> {
    let c = encode_computation(m, &BigUint::from(b), true).map_err(ReductionError::from)?;
    let target = Target::Reciprocal((1u64 << b) + 1);
    let (reduced, plan) = reduction::reduce_computation(&c, &target, &FillPattern::ZeroEncoding)?;
    if plan.bits_to_add != record.padding || c.payload_len() != record.baseline_length {
        return Err(ExperimentError::Inconsistent {
            parameter: record.parameter,
            reduced: plan.bits_to_add,
            counted: record.padding,
        });
    }
    let achieved = reduced.uncertainty();
    if !(achieved < record.epsilon) || achieved != record.achieved {
        return Err(ExperimentError::TargetMissed {
            parameter: record.parameter,
            achieved: achieved.get(),
            epsilon: record.epsilon.get(),
        });
    }
    Ok(())
}

/// Writes the report as CSV. Integers are exact; entropies use 9 significant
/// digits.
pub fn emit_csv<W: Write>(report: &ExperimentReport, mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &report.records {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.parameter,
            r.baseline_length,
            r.required_length,
            r.padding,
            sig9(r.epsilon.get()),
            sig9(r.achieved.get())
        )?;
    }
    out.flush()
}

pub fn csv_string(report: &ExperimentReport) -> String {
    let mut buf = Vec::new();
    emit_csv(report, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ASCII output")
}
