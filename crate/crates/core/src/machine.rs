//! Deterministic Turing machines over `{0, 1, _}` and computation encodings.
//!
//! Tape model: right-infinite, input in cells `0..n`, blanks beyond. A left
//! move on cell 0 leaves the head in place. Each applied transition is one
//! step. A missing transition halts with [`Verdict::Reject`], and a run that
//! exhausts its step budget reports [`Verdict::StepLimit`], which counts as
//! not accepting.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::encoding::{self, BitString, EncodingScheme, SignConvention};
use crate::entropy::{self, EntropyValue, UncertaintyBounds};

/// The "ends in 1" acceptor used throughout the examples and tests.
pub const ENDS_IN_ONE: &str = include_str!("../data/ends_in_one.tm");

pub const DEFAULT_STEP_LIMIT: u64 = 1_000_000;

/// Largest input length [`worst_case_time`] will enumerate.
pub const EXHAUSTIVE_LIMIT: u32 = 16;

pub const MAX_STATES: usize = 256;

/// Width of the input-length prefix inside a computation encoding.
pub const INPUT_LENGTH_BITS: u32 = 16;

const STATE_BITS: u32 = 8;
const COUNT_BITS: u32 = 16;
const SYMBOL_BITS: u32 = 2;
const MOVE_BITS: u32 = 2;
const HEADER_BITS: usize = (4 * STATE_BITS + COUNT_BITS) as usize;
const TRANSITION_BITS: usize = (2 * STATE_BITS + 2 * SYMBOL_BITS + MOVE_BITS) as usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: second transition for ({state}, {symbol})")]
    Nondeterministic {
        line: usize,
        state: String,
        symbol: Symbol,
    },
    #[error("undeclared state {0:?}")]
    UndeclaredState(String),
    #[error("missing {0} declaration")]
    Missing(&'static str),
    #[error("accept and reject must be distinct states")]
    AcceptIsReject,
    #[error("transition leaves halting state {0:?}")]
    LeavesHaltingState(String),
    #[error("{what} exceeds capacity ({value} > {limit})")]
    Capacity {
        what: &'static str,
        value: u64,
        limit: u64,
    },
    #[error("malformed machine code: {0}")]
    MalformedCode(String),
    #[error("step limit must be at least 1")]
    ZeroStepLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

impl Symbol {
    pub const ALL: [Symbol; 3] = [Symbol::Zero, Symbol::One, Symbol::Blank];

    fn code(self) -> u64 {
        match self {
            Symbol::Zero => 0b00,
            Symbol::One => 0b01,
            Symbol::Blank => 0b10,
        }
    }

    fn from_code(code: u64) -> Option<Self> {
        match code {
            0b00 => Some(Symbol::Zero),
            0b01 => Some(Symbol::One),
            0b10 => Some(Symbol::Blank),
            _ => None,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "0" => Some(Symbol::Zero),
            "1" => Some(Symbol::One),
            "_" => Some(Symbol::Blank),
            _ => None,
        }
    }

    pub fn from_bit(bit: bool) -> Self {
        if bit {
            Symbol::One
        } else {
            Symbol::Zero
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::Blank => "_",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Right,
    Stay,
}

impl Move {
    fn code(self) -> u64 {
        match self {
            Move::Left => 0b00,
            Move::Right => 0b01,
            Move::Stay => 0b10,
        }
    }

    fn from_code(code: u64) -> Option<Self> {
        match code {
            0b00 => Some(Move::Left),
            0b01 => Some(Move::Right),
            0b10 => Some(Move::Stay),
            _ => None,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::Left => "L",
            Move::Right => "R",
            Move::Stay => "S",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: usize,
    pub write: Symbol,
    pub movement: Move,
}

/// A validated deterministic machine. States are referred to by index into
/// [`TuringMachine::states`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TuringMachine {
    states: Vec<String>,
    start: usize,
    accept: usize,
    reject: usize,
    transitions: BTreeMap<(usize, Symbol), Transition>,
}

impl TuringMachine {
    pub fn new(
        states: Vec<String>,
        start: usize,
        accept: usize,
        reject: usize,
        transitions: BTreeMap<(usize, Symbol), Transition>,
    ) -> Result<Self, MachineError> {
        let n = states.len();
        if n > MAX_STATES {
            return Err(MachineError::Capacity {
                what: "state count",
                value: n as u64,
                limit: MAX_STATES as u64,
            });
        }
        for idx in [start, accept, reject] {
            if idx >= n {
                return Err(MachineError::UndeclaredState(format!("#{idx}")));
            }
        }
        if accept == reject {
            return Err(MachineError::AcceptIsReject);
        }
        for (&(state, _), t) in &transitions {
            if state >= n || t.next >= n {
                return Err(MachineError::UndeclaredState(format!("#{}", state.max(t.next))));
            }
            if state == accept || state == reject {
                return Err(MachineError::LeavesHaltingState(states[state].clone()));
            }
        }
        Ok(Self {
            states,
            start,
            accept,
            reject,
            transitions,
        })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn accept(&self) -> usize {
        self.accept
    }

    pub fn reject(&self) -> usize {
        self.reject
    }

    pub fn transitions(&self) -> &BTreeMap<(usize, Symbol), Transition> {
        &self.transitions
    }

    pub fn transition(&self, state: usize, symbol: Symbol) -> Option<&Transition> {
        self.transitions.get(&(state, symbol))
    }

    /// Writes the machine in the text description format.
    pub fn render(&self) -> String {
        let mut out = format!(
            "states: {}\nstart: {}\naccept: {}\nreject: {}\n",
            self.states.join(" "),
            self.states[self.start],
            self.states[self.accept],
            self.states[self.reject]
        );
        for (&(state, read), t) in &self.transitions {
            out.push_str(&format!(
                "{} {} -> {} {} {}\n",
                self.states[state], read, self.states[t.next], t.write, t.movement
            ));
        }
        out
    }
}

impl std::str::FromStr for TuringMachine {
    type Err = MachineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_machine(s)
    }
}

/// Parses the line-oriented description format:
///
/// ```text
/// states: q0 q1 qa qr
/// start: q0
/// accept: qa
/// reject: qr
/// q0 0 -> q0 0 R
/// ```
///
/// `#` starts a comment. `_` is the blank symbol.
pub fn parse_machine(text: &str) -> Result<TuringMachine, MachineError> {
    let mut states: Option<Vec<String>> = None;
    let mut start = None;
    let mut accept = None;
    let mut reject = None;
    let mut rules: Vec<(usize, [&str; 5])> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let syntax = |message: String| MachineError::Syntax {
            line: line_no,
            message,
        };
        if let Some((key, value)) = line.split_once(':') {
            let value = value.trim();
            match key.trim() {
                "states" => {
                    let names: Vec<String> = value.split_whitespace().map(str::to_string).collect();
                    if names.is_empty() {
                        return Err(syntax("empty state list".into()));
                    }
                    states = Some(names);
                }
                "start" => start = Some((line_no, value.to_string())),
                "accept" => accept = Some((line_no, value.to_string())),
                "reject" => reject = Some((line_no, value.to_string())),
                other => return Err(syntax(format!("unknown key {other:?}"))),
            }
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [state, read, "->", next, write, movement] => {
                rules.push((line_no, [*state, *read, *next, *write, *movement]))
            }
            _ => {
                return Err(syntax(format!(
                    "expected `state symbol -> state symbol move`, got {line:?}"
                )))
            }
        }
    }

    let states = states.ok_or(MachineError::Missing("states"))?;
    let index: HashMap<&str, usize> = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    if index.len() != states.len() {
        return Err(MachineError::Syntax {
            line: 0,
            message: "duplicate state name".into(),
        });
    }
    let lookup = |name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| MachineError::UndeclaredState(name.to_string()))
    };
    let start = lookup(&start.ok_or(MachineError::Missing("start"))?.1)?;
    let accept = lookup(&accept.ok_or(MachineError::Missing("accept"))?.1)?;
    let reject = lookup(&reject.ok_or(MachineError::Missing("reject"))?.1)?;

    let mut transitions = BTreeMap::new();
    for (line, [state, read, next, write, movement]) in rules {
        let syntax = |message: String| MachineError::Syntax { line, message };
        let state_idx = lookup(state)?;
        let read_sym = Symbol::parse(read).ok_or_else(|| syntax(format!("bad symbol {read:?}")))?;
        let next = lookup(next)?;
        let write = Symbol::parse(write).ok_or_else(|| syntax(format!("bad symbol {write:?}")))?;
        let movement = match movement {
            "L" => Move::Left,
            "R" => Move::Right,
            "S" => Move::Stay,
            other => return Err(syntax(format!("bad move {other:?}"))),
        };
        let t = Transition {
            next,
            write,
            movement,
        };
        if transitions.insert((state_idx, read_sym), t).is_some() {
            return Err(MachineError::Nondeterministic {
                line,
                state: state.to_string(),
                symbol: read_sym,
            });
        }
    }
    TuringMachine::new(states, start, accept, reject, transitions)
}

/// Canonical bit layout, most significant bit first:
///
/// ```text
/// [states-1:8][start:8][accept:8][reject:8][transitions:16]
/// per transition, sorted by (state, symbol): [state:8][read:2][next:8][write:2][move:2]
/// ```
///
/// Symbols: `0`→00, `1`→01, `_`→10. Moves: L→00, R→01, S→10.
pub fn serialize_machine(m: &TuringMachine) -> Result<BitString, MachineError> {
    let n = m.states.len();
    if n > MAX_STATES {
        return Err(MachineError::Capacity {
            what: "state count",
            value: n as u64,
            limit: MAX_STATES as u64,
        });
    }
    let mut out = BitString::with_capacity(serialized_len(m.transitions.len()));
    out.push_uint(n as u64 - 1, STATE_BITS);
    out.push_uint(m.start as u64, STATE_BITS);
    out.push_uint(m.accept as u64, STATE_BITS);
    out.push_uint(m.reject as u64, STATE_BITS);
    out.push_uint(m.transitions.len() as u64, COUNT_BITS);
    for (&(state, read), t) in &m.transitions {
        out.push_uint(state as u64, STATE_BITS);
        out.push_uint(read.code(), SYMBOL_BITS);
        out.push_uint(t.next as u64, STATE_BITS);
        out.push_uint(t.write.code(), SYMBOL_BITS);
        out.push_uint(t.movement.code(), MOVE_BITS);
    }
    Ok(out)
}

/// Length in bits of a serialized machine with `transitions` rules.
pub fn serialized_len(transitions: usize) -> usize {
    HEADER_BITS + transitions * TRANSITION_BITS
}

struct BitReader<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> BitReader<'a> {
    fn new(bits: &'a [bool]) -> Self {
        Self { bits, pos: 0 }
    }

    fn read(&mut self, width: u32) -> Result<u64, MachineError> {
        let end = self.pos + width as usize;
        let chunk = self
            .bits
            .get(self.pos..end)
            .ok_or_else(|| MachineError::MalformedCode("truncated".into()))?;
        self.pos = end;
        Ok(chunk.iter().fold(0, |acc, &b| (acc << 1) | u64::from(b)))
    }
}

/// Reads a machine from the front of `bits`, returning it and the number of
/// bits consumed. States are named `q0`, `q1`, ... by index.
pub fn deserialize_machine(bits: &[bool]) -> Result<(TuringMachine, usize), MachineError> {
    let mut r = BitReader::new(bits);
    let n = r.read(STATE_BITS)? as usize + 1;
    let start = r.read(STATE_BITS)? as usize;
    let accept = r.read(STATE_BITS)? as usize;
    let reject = r.read(STATE_BITS)? as usize;
    let count = r.read(COUNT_BITS)? as usize;
    let mut transitions = BTreeMap::new();
    let mut last = None;
    for _ in 0..count {
        let state = r.read(STATE_BITS)? as usize;
        let read = Symbol::from_code(r.read(SYMBOL_BITS)?)
            .ok_or_else(|| MachineError::MalformedCode("bad symbol code".into()))?;
        let next = r.read(STATE_BITS)? as usize;
        let write = Symbol::from_code(r.read(SYMBOL_BITS)?)
            .ok_or_else(|| MachineError::MalformedCode("bad symbol code".into()))?;
        let movement = Move::from_code(r.read(MOVE_BITS)?)
            .ok_or_else(|| MachineError::MalformedCode("bad move code".into()))?;
        if last.is_some_and(|prev| prev >= (state, read)) {
            return Err(MachineError::MalformedCode("transitions out of order".into()));
        }
        last = Some((state, read));
        transitions.insert(
            (state, read),
            Transition {
                next,
                write,
                movement,
            },
        );
    }
    let states = (0..n).map(|i| format!("q{i}")).collect();
    let m = TuringMachine::new(states, start, accept, reject, transitions)
        .map_err(|e| MachineError::MalformedCode(e.to_string()))?;
    Ok((m, r.pos))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
    StepLimit,
}

impl Verdict {
    pub fn accepted(self) -> bool {
        self == Verdict::Accept
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "Accept",
            Verdict::Reject => "Reject",
            Verdict::StepLimit => "StepLimit",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunResult {
    pub verdict: Verdict,
    pub steps: u64,
    pub final_tape: Vec<Symbol>,
}

impl RunResult {
    /// Tape contents with trailing blanks removed.
    pub fn tape_string(&self) -> String {
        let end = self
            .final_tape
            .iter()
            .rposition(|&s| s != Symbol::Blank)
            .map_or(0, |i| i + 1);
        self.final_tape[..end].iter().map(Symbol::to_string).collect()
    }
}

pub fn run(m: &TuringMachine, input: &[bool], step_limit: u64) -> Result<RunResult, MachineError> {
    if step_limit == 0 {
        return Err(MachineError::ZeroStepLimit);
    }
    let mut tape: Vec<Symbol> = input.iter().map(|&b| Symbol::from_bit(b)).collect();
    let mut head = 0usize;
    let mut state = m.start;
    let mut steps = 0u64;
    let verdict = loop {
        if state == m.accept {
            break Verdict::Accept;
        }
        if state == m.reject {
            break Verdict::Reject;
        }
        if steps == step_limit {
            break Verdict::StepLimit;
        }
        let read = tape.get(head).copied().unwrap_or(Symbol::Blank);
        let Some(t) = m.transition(state, read) else {
            break Verdict::Reject;
        };
        if head == tape.len() {
            tape.push(Symbol::Blank);
        }
        tape[head] = t.write;
        match t.movement {
            Move::Left => head = head.saturating_sub(1),
            Move::Right => head += 1,
            Move::Stay => {}
        }
        state = t.next;
        steps += 1;
    };
    Ok(RunResult {
        verdict,
        steps,
        final_tape: tape,
    })
}

/// T_M(n) together with the first input (in counting order) that attains it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WorstCase {
    pub n: u32,
    pub t_max: u64,
    pub witness: BitString,
}

fn nth_input(n: u32, index: u64) -> Vec<bool> {
    (0..n).rev().map(|shift| (index >> shift) & 1 == 1).collect()
}

fn check_exhaustive(n: u32) -> Result<(), MachineError> {
    if n > EXHAUSTIVE_LIMIT {
        return Err(MachineError::Capacity {
            what: "input length",
            value: u64::from(n),
            limit: u64::from(EXHAUSTIVE_LIMIT),
        });
    }
    Ok(())
}

/// Maximum step count over all 2^n inputs of length `n`.
pub fn worst_case_time(
    m: &TuringMachine,
    n: u32,
    step_limit: u64,
) -> Result<WorstCase, MachineError> {
    check_exhaustive(n)?;
    let mut best: Option<(u64, u64)> = None;
    for index in 0..1u64 << n {
        let steps = run(m, &nth_input(n, index), step_limit)?.steps;
        if best.map_or(true, |(t, _)| steps > t) {
            best = Some((steps, index));
        }
    }
    let (t_max, index) = best.expect("at least one input");
    Ok(WorstCase {
        n,
        t_max,
        witness: BitString::from_bits(nth_input(n, index)),
    })
}

/// [`worst_case_time`] evaluated on the rayon pool. Ties go to the smallest
/// input index, so the result equals the sequential one.
pub fn worst_case_time_parallel(
    m: &TuringMachine,
    n: u32,
    step_limit: u64,
) -> Result<WorstCase, MachineError> {
    check_exhaustive(n)?;
    let (t_max, index) = (0..1u64 << n)
        .into_par_iter()
        .map(|index| run(m, &nth_input(n, index), step_limit).map(|r| (r.steps, index)))
        .try_reduce(
            || (0, u64::MAX),
            |a, b| {
                Ok(if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) {
                    b
                } else {
                    a
                })
            },
        )?;
    Ok(WorstCase {
        n,
        t_max,
        witness: BitString::from_bits(nth_input(n, index)),
    })
}

/// Whether `t_max(n) ≤ n^k + k` for every `n` in `lengths`.
pub fn is_polynomially_bounded(
    m: &TuringMachine,
    lengths: impl IntoIterator<Item = u32>,
    k: u32,
    step_limit: u64,
) -> Result<bool, MachineError> {
    for n in lengths {
        let t = worst_case_time_parallel(m, n, step_limit)?.t_max;
        let bound = u64::from(n)
            .checked_pow(k)
            .and_then(|p| p.checked_add(u64::from(k)))
            .unwrap_or(u64::MAX);
        if t > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A computation C = (T, b, o) written as one bit string:
/// `machine code ++ [|b|:16] ++ b ++ o`. The output bit sits in the sign
/// position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Computation {
    machine_bits: BitString,
    input_payload: BitString,
    output_bit: bool,
    combined: BitString,
}

impl Computation {
    /// Builds a computation from an arbitrary input bit string.
    pub fn from_parts(
        machine: &TuringMachine,
        input_payload: BitString,
        output_bit: bool,
    ) -> Result<Self, MachineError> {
        let limit = (1u64 << INPUT_LENGTH_BITS) - 1;
        if input_payload.len() as u64 > limit {
            return Err(MachineError::Capacity {
                what: "input payload",
                value: input_payload.len() as u64,
                limit,
            });
        }
        let machine_bits = serialize_machine(machine)?;
        let mut combined = BitString::with_capacity(
            machine_bits.len() + INPUT_LENGTH_BITS as usize + input_payload.len() + 1,
        );
        combined.extend_from(&machine_bits);
        combined.push_uint(input_payload.len() as u64, INPUT_LENGTH_BITS);
        combined.extend_from(&input_payload);
        combined.push(output_bit);
        Ok(Self {
            machine_bits,
            input_payload,
            output_bit,
            combined,
        })
    }

    /// Parses a combined bit string back into its parts.
    pub fn from_combined(combined: BitString) -> Result<Self, MachineError> {
        let (_, used) = deserialize_machine(combined.bits())?;
        let mut r = BitReader::new(&combined.bits()[used..]);
        let len = r.read(INPUT_LENGTH_BITS)? as usize;
        let start = used + INPUT_LENGTH_BITS as usize;
        if combined.len() != start + len + 1 {
            return Err(MachineError::MalformedCode(format!(
                "input length {len} disagrees with total length {}",
                combined.len()
            )));
        }
        let bits = combined.bits();
        Ok(Self {
            machine_bits: BitString::from_bits(bits[..used].to_vec()),
            input_payload: BitString::from_bits(bits[start..start + len].to_vec()),
            output_bit: bits[start + len],
            combined,
        })
    }

    pub fn machine_bits(&self) -> &BitString {
        &self.machine_bits
    }

    pub fn machine(&self) -> TuringMachine {
        deserialize_machine(self.machine_bits.bits())
            .expect("serialized by this module")
            .0
    }

    pub fn input_payload(&self) -> &BitString {
        &self.input_payload
    }

    pub fn output_bit(&self) -> bool {
        self.output_bit
    }

    pub fn combined(&self) -> &BitString {
        &self.combined
    }

    /// Length of the (T, b) part, i.e. everything before the output bit.
    pub fn payload_len(&self) -> u64 {
        self.combined.payload_len() as u64
    }

    /// Runs the encoded machine on the encoded input.
    pub fn run(&self, step_limit: u64) -> Result<RunResult, MachineError> {
        run(&self.machine(), self.input_payload.bits(), step_limit)
    }
}

/// Encodes C = (T, b, o) with `b` written as a Binary payload.
pub fn encode_computation(
    machine: &TuringMachine,
    input_value: &BigUint,
    output_bit: bool,
) -> Result<Computation, MachineError> {
    let mut payload = encoding::encode(input_value, EncodingScheme::Binary, SignConvention::Normal)
        .map_err(|e| MachineError::MalformedCode(e.to_string()))?
        .into_bits();
    payload.pop();
    Computation::from_parts(machine, BitString::from_bits(payload), output_bit)
}

/// The uncertainty of an encoded computation.
///
/// `entropy` treats the combined string as an efficiently coded b-number
/// whose sign is the output bit, giving I(1/(L+1)) for L payload bits.
/// `bounds` are the two extremes for the number the payload denotes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComputationUncertainty {
    pub entropy: EntropyValue,
    pub bounds: Option<UncertaintyBounds>,
}

/// I(1/(L+1)) for a payload of `payload_len` bits.
pub fn uncertainty_of_payload_len(payload_len: u64) -> EntropyValue {
    EntropyValue::of_reciprocal(payload_len.saturating_add(1)).expect("denominator is positive")
}

pub fn computation_uncertainty(c: &Computation) -> ComputationUncertainty {
    let value = encoding::decode(c.combined(), EncodingScheme::Binary).expect("non-empty");
    ComputationUncertainty {
        entropy: uncertainty_of_payload_len(c.payload_len()),
        bounds: entropy::entropy_bounds_big(&value).ok(),
    }
}

/// A random machine over `2..=max_states` states. Each non-halting
/// (state, symbol) pair gets a transition with probability 3/4.
pub fn random_machine<R: Rng + ?Sized>(rng: &mut R, max_states: usize) -> TuringMachine {
    let max_states = max_states.clamp(2, MAX_STATES);
    let n = rng.gen_range(2..=max_states);
    let accept = n - 2;
    let reject = n - 1;
    let start = rng.gen_range(0..n);
    let mut transitions = BTreeMap::new();
    for state in 0..n.saturating_sub(2) {
        for symbol in Symbol::ALL {
            if rng.gen_bool(0.75) {
                let write = Symbol::ALL[rng.gen_range(0..3)];
                let movement = [Move::Left, Move::Right, Move::Stay][rng.gen_range(0..3)];
                transitions.insert(
                    (state, symbol),
                    Transition {
                        next: rng.gen_range(0..n),
                        write,
                        movement,
                    },
                );
            }
        }
    }
    let states = (0..n).map(|i| format!("q{i}")).collect();
    TuringMachine::new(states, start, accept, reject, transitions).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn m1() -> TuringMachine {
        parse_machine(ENDS_IN_ONE).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    /// Independent reference interpreter: HashMap tape, no step limit
    /// beyond a generous cap.
    fn reference_run(m: &TuringMachine, input: &[bool]) -> (Verdict, u64) {
        let mut tape: HashMap<usize, Symbol> = input
            .iter()
            .enumerate()
            .map(|(i, &b)| (i, Symbol::from_bit(b)))
            .collect();
        let (mut head, mut state, mut steps) = (0usize, m.start(), 0u64);
        loop {
            if state == m.accept() {
                return (Verdict::Accept, steps);
            }
            if state == m.reject() {
                return (Verdict::Reject, steps);
            }
            let read = *tape.get(&head).unwrap_or(&Symbol::Blank);
            match m.transition(state, read) {
                None => return (Verdict::Reject, steps),
                Some(t) => {
                    tape.insert(head, t.write);
                    head = match t.movement {
                        Move::Left if head > 0 => head - 1,
                        Move::Left | Move::Stay => head,
                        Move::Right => head + 1,
                    };
                    state = t.next;
                    steps += 1;
                }
            }
        }
    }

    #[test]
    fn parses_m1() {
        let m = m1();
        assert_eq!(m.states().len(), 4);
        assert_eq!(m.transitions().len(), 6);
        assert_eq!(m.states()[m.start()], "q0");
        assert_eq!(m.states()[m.accept()], "qa");
    }

    #[test]
    fn parse_errors() {
        let dup = ENDS_IN_ONE.replace("q0 _ -> q1 _ L", "q0 1 -> q1 _ L");
        assert!(matches!(
            parse_machine(&dup),
            Err(MachineError::Nondeterministic { symbol: Symbol::One, .. })
        ));
        let undeclared = ENDS_IN_ONE.replace("q1 1 -> qa 1 S", "q1 1 -> q9 1 S");
        assert_eq!(
            parse_machine(&undeclared),
            Err(MachineError::UndeclaredState("q9".into()))
        );
        let no_start = ENDS_IN_ONE.replace("start: q0", "");
        assert_eq!(parse_machine(&no_start), Err(MachineError::Missing("start")));
        let bad = ENDS_IN_ONE.replace("q1 0 -> qr 0 S", "q1 0 qr 0 S");
        assert!(matches!(parse_machine(&bad), Err(MachineError::Syntax { line: 10, .. })));
        let bad_move = ENDS_IN_ONE.replace("q1 0 -> qr 0 S", "q1 0 -> qr 0 X");
        assert!(matches!(parse_machine(&bad_move), Err(MachineError::Syntax { line: 10, .. })));
        let same = ENDS_IN_ONE.replace("reject: qr", "reject: qa");
        assert_eq!(parse_machine(&same), Err(MachineError::AcceptIsReject));
        let leaving = format!("{ENDS_IN_ONE}qa 0 -> q0 0 R\n");
        assert!(matches!(parse_machine(&leaving), Err(MachineError::LeavesHaltingState(_))));
    }

    #[test]
    fn run_examples() {
        let m = m1();
        let r = run(&m, &bits("101"), DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!((r.verdict, r.steps), (Verdict::Accept, 5));
        assert_eq!(r.tape_string(), "101");
        let r = run(&m, &[], DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!((r.verdict, r.steps), (Verdict::Reject, 2));
        let r = run(&m, &bits("10"), DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!((r.verdict, r.steps), (Verdict::Reject, 4));
        assert_eq!(run(&m, &[], 0), Err(MachineError::ZeroStepLimit));
    }

    #[test]
    fn immediate_halt_and_missing_transition() {
        let text = "states: a r\nstart: a\naccept: a\nreject: r\n";
        let r = run(&parse_machine(text).unwrap(), &bits("0110"), 10).unwrap();
        assert_eq!((r.verdict, r.steps), (Verdict::Accept, 0));

        let text = "states: s a r\nstart: s\naccept: a\nreject: r\ns 0 -> s 0 R\n";
        let r = run(&parse_machine(text).unwrap(), &bits("001"), 10).unwrap();
        assert_eq!((r.verdict, r.steps), (Verdict::Reject, 2));
    }

    #[test]
    fn step_limit_models_divergence() {
        let text = "states: s a r\nstart: s\naccept: a\nreject: r\ns _ -> s _ S\n";
        let m = parse_machine(text).unwrap();
        let r = run(&m, &[], 50).unwrap();
        assert_eq!((r.verdict, r.steps), (Verdict::StepLimit, 50));
        assert!(!r.verdict.accepted());
    }

    #[test]
    fn left_move_at_origin_stays() {
        let text = "states: s t a r\nstart: s\naccept: a\nreject: r\n\
                    s 1 -> t 0 L\nt 0 -> a 1 S\n";
        let r = run(&parse_machine(text).unwrap(), &bits("1"), 10).unwrap();
        assert_eq!(r.verdict, Verdict::Accept);
        assert_eq!(r.tape_string(), "1");
    }

    #[test]
    fn worst_case_examples() {
        let m = m1();
        let w = worst_case_time(&m, 2, DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!(w.t_max, 4);
        assert_eq!(w.witness.to_plain(), "00");
        let w = worst_case_time(&m, 0, DEFAULT_STEP_LIMIT).unwrap();
        assert_eq!((w.t_max, w.witness.len()), (2, 0));
        for n in 0..=10 {
            assert_eq!(worst_case_time(&m, n, DEFAULT_STEP_LIMIT).unwrap().t_max, u64::from(n) + 2);
        }
        assert!(matches!(
            worst_case_time(&m, EXHAUSTIVE_LIMIT + 1, 10),
            Err(MachineError::Capacity { .. })
        ));
        // t_max(n) = n + 2 fits n^2 + 2 but not n + 1.
        assert!(is_polynomially_bounded(&m, 0..=10, 2, DEFAULT_STEP_LIMIT).unwrap());
        assert!(!is_polynomially_bounded(&m, 0..=10, 1, DEFAULT_STEP_LIMIT).unwrap());
    }

    #[test]
    fn worst_case_matches_individual_runs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let m = random_machine(&mut rng, 5);
            for n in 0..=6 {
                let w = worst_case_time(&m, n, 200).unwrap();
                let oracle = (0..1u64 << n)
                    .map(|i| reference_run_capped(&m, &nth_input(n, i), 200))
                    .max()
                    .unwrap();
                assert_eq!(w.t_max, oracle);
                assert_eq!(worst_case_time_parallel(&m, n, 200).unwrap(), w);
            }
        }
    }

    fn reference_run_capped(m: &TuringMachine, input: &[bool], cap: u64) -> u64 {
        run(m, input, cap).unwrap().steps
    }

    #[test]
    fn simulator_agrees_with_reference() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 200 {
            let m = random_machine(&mut rng, 6);
            let len = rng.gen_range(0..8);
            let input: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
            let capped = run(&m, &input, 500).unwrap();
            if capped.verdict == Verdict::StepLimit {
                continue;
            }
            assert_eq!(reference_run(&m, &input), (capped.verdict, capped.steps));
            assert_eq!(run(&m, &input, 500).unwrap(), capped);
            checked += 1;
        }
    }

    #[test]
    fn serialization_layout() {
        let m = m1();
        let code = serialize_machine(&m).unwrap();
        assert_eq!(code.len(), 48 + 6 * 22);
        assert_eq!(code.len(), serialized_len(6));
        // [3][0][2][3][6]
        assert_eq!(&code.to_plain()[..48], "000000110000000000000010000000110000000000000110");
        // first transition: q0 0 -> q0 0 R
        assert_eq!(&code.to_plain()[48..70], "0000000000000000000001");
        let (back, used) = deserialize_machine(code.bits()).unwrap();
        assert_eq!(used, code.len());
        assert_eq!(back.transitions(), m.transitions());
        assert_eq!(serialize_machine(&back).unwrap(), code);
    }

    #[test]
    fn render_parse_serialize_roundtrip() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let m = random_machine(&mut rng, 12);
            let reparsed = parse_machine(&m.render()).unwrap();
            assert_eq!(reparsed, m);
            assert_eq!(serialize_machine(&reparsed).unwrap(), serialize_machine(&m).unwrap());
        }
    }

    #[test]
    fn serialization_capacity() {
        let states: Vec<String> = (0..=MAX_STATES).map(|i| format!("s{i}")).collect();
        let err = TuringMachine::new(states, 0, 1, 2, BTreeMap::new()).unwrap_err();
        assert!(matches!(err, MachineError::Capacity { value: 257, .. }));
        let states: Vec<String> = (0..MAX_STATES).map(|i| format!("s{i}")).collect();
        let m = TuringMachine::new(states, 0, 254, 255, BTreeMap::new()).unwrap();
        let code = serialize_machine(&m).unwrap();
        assert_eq!(deserialize_machine(code.bits()).unwrap().0.states().len(), MAX_STATES);
    }

    #[test]
    fn computation_layout() {
        let m = m1();
        let c = encode_computation(&m, &BigUint::from(5u32), true).unwrap();
        assert_eq!(c.combined().len(), 180 + 16 + 3 + 1);
        assert_eq!(c.combined().sign(), Some(true));
        assert_eq!(c.input_payload().to_plain(), "101");
        assert_eq!(c.payload_len(), 199);
        let back = Computation::from_combined(c.combined().clone()).unwrap();
        assert_eq!(back, c);
        assert_eq!(c.run(DEFAULT_STEP_LIMIT).unwrap().verdict, Verdict::Accept);
    }

    #[test]
    fn computation_capacity() {
        let m = m1();
        let payload = BitString::from_bits(vec![true; 1 << 16]);
        assert!(matches!(
            Computation::from_parts(&m, payload, false),
            Err(MachineError::Capacity { .. })
        ));
    }

    #[test]
    fn computation_uncertainty_values() {
        assert_eq!(uncertainty_of_payload_len(1).get(), 1.0);
        let e = uncertainty_of_payload_len(191).get();
        assert!((e - 0.0469994478).abs() < 1e-9, "{e}");
        let c = encode_computation(&m1(), &BigUint::from(5u32), true).unwrap();
        let u = computation_uncertainty(&c);
        assert_eq!(u.entropy, uncertainty_of_payload_len(199));
        let bounds = u.bounds.unwrap();
        assert!(bounds.lower.get() > 0.0 && bounds.lower < bounds.upper);
    }

    #[test]
    fn computation_encoding_is_injective() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut seen = HashMap::new();
        for _ in 0..500 {
            let m = random_machine(&mut rng, 4);
            let v = BigUint::from(rng.gen_range(0u32..64));
            let c = encode_computation(&m, &v, false).unwrap();
            let key = (serialize_machine(&m).unwrap(), v);
            if let Some(prev) = seen.insert(c.combined().clone(), key.clone()) {
                assert_eq!(prev, key);
            }
        }
    }
}
