//! Command-line front end.
//!
//! Exit codes: 0 success, 1 domain or validation error (one-line reason on
//! standard error), 2 usage error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use crate::encoding::{self, BitString, EncodingScheme, SignConvention};
use crate::entropy::{self, EntropyValue};
use crate::experiments::{self, ExperimentReport};
use crate::format::sig9;
use crate::machine::{self, TuringMachine};
use crate::reduction::{self, FillPattern, Target};

#[derive(Debug, Parser)]
#[command(name = "bnumber", version, about = "b-number encodings, entropy bounds and padding experiments")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Binary,
    Length,
}

impl From<SchemeArg> for EncodingScheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Binary => EncodingScheme::Binary,
            SchemeArg::Length => EncodingScheme::Length,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignArg {
    Normal,
    Flipped,
}

impl From<SignArg> for SignConvention {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Normal => SignConvention::Normal,
            SignArg::Flipped => SignConvention::Flipped,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FillArg {
    /// The convention's zero bit.
    Zero,
    /// The encoded machine's program code, repeated.
    Program,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CaseArg {
    Efficient,
    Length,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a natural number as a b-number.
    Encode {
        #[arg(long)]
        value: BigUint,
        #[arg(long, value_enum, default_value = "binary")]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value = "normal")]
        sign: SignArg,
    },
    /// Read a b-number back to its value.
    Decode {
        #[arg(long)]
        bits: String,
        #[arg(long, value_enum, default_value = "binary")]
        scheme: SchemeArg,
    },
    /// Binary entropy I(p).
    Entropy {
        #[arg(long)]
        p: f64,
    },
    /// Uncertainty bounds of a b-number b > 0.
    Bounds {
        #[arg(long)]
        b: u64,
    },
    /// Solve I(p) = epsilon for p in [0, 0.5].
    Invert {
        /// Decimal or I(1/K).
        #[arg(long)]
        epsilon: String,
    },
    /// Pad a representation or an encoded computation below epsilon.
    Reduce {
        /// Decimal or I(1/K).
        #[arg(long)]
        epsilon: String,
        /// A b-number such as 101|1.
        #[arg(long, conflicts_with_all = ["machine", "input"])]
        bits: Option<String>,
        /// Machine description file.
        #[arg(long, requires = "input")]
        machine: Option<PathBuf>,
        /// Input value for the machine.
        #[arg(long, requires = "machine")]
        input: Option<BigUint>,
        #[arg(long, value_enum, default_value = "zero")]
        fill: FillArg,
        #[arg(long, default_value_t = machine::DEFAULT_STEP_LIMIT)]
        step_limit: u64,
    },
    /// Run a machine on an input bit string.
    Simulate {
        #[arg(long)]
        machine: PathBuf,
        /// Input bits, e.g. 101; empty for the empty input.
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = machine::DEFAULT_STEP_LIMIT)]
        step_limit: u64,
    },
    /// Worst-case step count over all inputs of length n.
    WorstCase {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = machine::DEFAULT_STEP_LIMIT)]
        step_limit: u64,
    },
    /// Padding-cost sweeps, written as CSV.
    Experiment {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4))]
        theorem: u8,
        #[arg(long, default_value_t = 4096)]
        max_n: u64,
        #[arg(long, default_value_t = 20)]
        max_b: u32,
        /// Machine whose encoding sets the baseline (default: ends-in-1).
        #[arg(long)]
        machine: Option<PathBuf>,
        /// Which theorem-3 report --out receives.
        #[arg(long, value_enum)]
        case: Option<CaseArg>,
        /// CSV destination; `-` for standard output.
        #[arg(long, conflicts_with = "out_dir")]
        out: Option<String>,
        /// Directory for the standard file names.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Von Neumann ordinal as nested sets.
    Vonneumann {
        #[arg(long)]
        n: u32,
        /// Write the empty set as {} instead of ∅.
        #[arg(long)]
        ascii: bool,
    },
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e:#}");
            1
        }
    }
}

fn load_machine(path: &Path) -> anyhow::Result<TuringMachine> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(machine::parse_machine(&text)?)
}

fn parse_input_bits(s: &str) -> anyhow::Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(anyhow!("input must be 0/1 digits, found {other:?}")),
        })
        .collect()
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> anyhow::Result<()> {
    match command {
        Command::Encode { value, scheme, sign } => {
            writeln!(out, "{}", encoding::encode(&value, scheme.into(), sign.into())?)?;
        }
        Command::Decode { bits, scheme } => {
            let bits: BitString = bits.parse()?;
            writeln!(out, "{}", encoding::decode(&bits, scheme.into())?)?;
        }
        Command::Entropy { p } => {
            writeln!(out, "{}", entropy::entropy(p)?)?;
        }
        Command::Bounds { b } => {
            let bounds = entropy::entropy_bounds(b)?;
            writeln!(out, "lower={} upper={}", bounds.lower, bounds.upper)?;
        }
        Command::Invert { epsilon } => {
            let target: Target = epsilon.parse()?;
            let e = EntropyValue::new(target.epsilon())?;
            writeln!(out, "{}", sig9(entropy::inverse_entropy(e).get()))?;
        }
        Command::Reduce {
            epsilon,
            bits,
            machine: machine_path,
            input,
            fill,
            step_limit,
        } => {
            let target: Target = epsilon.parse()?;
            match (bits, machine_path, input) {
                (Some(bits), None, None) => {
                    let bits: BitString = bits.parse()?;
                    let fill = match fill {
                        FillArg::Zero => FillPattern::ZeroEncoding,
                        FillArg::Program => bail!("--fill program needs --machine"),
                    };
                    let (padded, plan) = reduction::apply_mapping(&bits, &target, &fill)?;
                    writeln!(out, "bits_to_add={}", plan.bits_to_add)?;
                    writeln!(out, "padded={}", padded.bits())?;
                    writeln!(out, "uncertainty={}", padded.uncertainty())?;
                }
                (None, Some(path), Some(input)) => {
                    let m = load_machine(&path)?;
                    let verdict = machine::run(&m, &input_bits(&input), step_limit)?.verdict;
                    let c = machine::encode_computation(&m, &input, verdict.accepted())?;
                    let fill = match fill {
                        FillArg::Zero => FillPattern::ZeroEncoding,
                        FillArg::Program => FillPattern::Repeat(c.machine_bits().clone()),
                    };
                    let (reduced, plan) = reduction::reduce_computation(&c, &target, &fill)?;
                    let rerun = reduced.run(step_limit)?.verdict;
                    writeln!(out, "verdict={verdict}")?;
                    writeln!(out, "original_length={}", plan.original_length)?;
                    writeln!(out, "bits_to_add={}", plan.bits_to_add)?;
                    writeln!(out, "padded_length={}", reduced.padded().bits().len())?;
                    writeln!(out, "uncertainty={}", reduced.uncertainty())?;
                    writeln!(out, "recovered_verdict={rerun}")?;
                }
                _ => bail!("give either --bits or --machine with --input"),
            }
        }
        Command::Simulate {
            machine: path,
            input,
            step_limit,
        } => {
            let m = load_machine(&path)?;
            let r = machine::run(&m, &parse_input_bits(&input)?, step_limit)?;
            writeln!(out, "verdict={} steps={} tape={}", r.verdict, r.steps, r.tape_string())?;
        }
        Command::WorstCase {
            machine: path,
            n,
            step_limit,
        } => {
            let m = load_machine(&path)?;
            let w = machine::worst_case_time_parallel(&m, n, step_limit)?;
            writeln!(out, "n={} t_max={} witness={}", w.n, w.t_max, w.witness.to_plain())?;
        }
        Command::Experiment {
            theorem,
            max_n,
            max_b,
            machine: path,
            case,
            out: dest,
            out_dir,
        } => {
            let reports: Vec<(&str, ExperimentReport)> = if theorem == 3 {
                let (efficient, length) = experiments::theorem3_sweep(max_n)?;
                let both = [("theorem3_efficient.csv", efficient), ("theorem3_length.csv", length)];
                match (case, dest.is_some()) {
                    (Some(CaseArg::Efficient), _) => vec![both.into_iter().next().expect("two")],
                    (Some(CaseArg::Length), _) => vec![both.into_iter().nth(1).expect("two")],
                    (None, true) => bail!("--out with --theorem 3 needs --case efficient|length"),
                    (None, false) => both.into(),
                }
            } else {
                let m = match path {
                    Some(p) => load_machine(&p)?,
                    None => machine::parse_machine(machine::ENDS_IN_ONE)?,
                };
                let report = experiments::theorem4_sweep(max_b, experiments::computation_baseline(&m), Some(&m))?;
                vec![("theorem4.csv", report)]
            };
            let to_stdout = dest.as_deref() == Some("-");
            for (name, report) in &reports {
                match (&dest, &out_dir) {
                    (Some(d), _) if d == "-" => experiments::emit_csv(report, &mut *out)?,
                    (Some(d), _) => write_csv(Path::new(d), report)?,
                    (None, Some(dir)) => {
                        fs::create_dir_all(dir)?;
                        write_csv(&dir.join(name), report)?;
                    }
                    (None, None) => {}
                }
                let summary = summary_line(name, report, theorem)?;
                if to_stdout {
                    writeln!(err, "{summary}")?;
                } else {
                    writeln!(out, "{summary}")?;
                }
            }
        }
        Command::Vonneumann { n, ascii } => {
            writeln!(out, "{}", encoding::von_neumann(n, ascii)?)?;
        }
    }
    Ok(())
}

fn input_bits(value: &BigUint) -> Vec<bool> {
    value.to_radix_be(2).into_iter().map(|d| d == 1).collect()
}

fn write_csv(path: &Path, report: &ExperimentReport) -> anyhow::Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    experiments::emit_csv(report, std::io::BufWriter::new(file))
        .with_context(|| format!("writing {}", path.display()))
}

/// `<file>: growth=<class> ratio→<limit>`. Theorem-3 reports measure the
/// ratio over the bit length of n.
fn summary_line(name: &str, report: &ExperimentReport, theorem: u8) -> anyhow::Result<String> {
    let measured = if theorem == 3 { report.by_bit_length() } else { report.clone() };
    let limit = match experiments::growth_ratio_check(&measured) {
        Ok(e) => e.limit.map_or_else(|| "n/a".to_string(), |l| crate::format::sig(l, 3)),
        Err(_) => "n/a".to_string(),
    };
    Ok(format!("{name}: growth={} ratio→{limit}", report.growth_class))
}
