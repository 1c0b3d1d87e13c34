//! Signed natural-number encodings ("b-numbers") and the uncertainty they
//! carry.
//!
//! A b-number is a payload followed by a sign bit saying which bit value
//! encodes zero. The crate provides:
//!
//! - [`encoding`]: b-number codecs under the Binary and Length schemes, the
//!   relaxed Peano successor and von Neumann ordinal rendering.
//! - [`entropy`]: the binary entropy I(p), the uncertainty bounds of a
//!   b-number and numerical inversion of I.
//! - [`reduction`]: padding a representation until its uncertainty drops
//!   below a target, with an exact inverse.
//! - [`machine`]: deterministic Turing machines, step counting, canonical
//!   serialization and the computation encoding C = (T, b, o).
//! - [`experiments`]: padding-cost sweeps and growth-rate classification,
//!   with CSV output.
//! - [`cli`]: the `bnumber` command-line front end.

pub mod cli;
pub mod encoding;
pub mod entropy;
pub mod experiments;
pub mod format;
pub mod machine;
pub mod reduction;

pub use encoding::{BNumber, BitString, EncodingScheme, SignConvention};
pub use entropy::{binary_entropy, EntropyValue, Probability, UncertaintyBounds};
pub use machine::{Computation, TuringMachine};
pub use reduction::{PaddedString, PaddingPlan, Target};
