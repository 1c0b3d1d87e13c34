//! The binary entropy kernel, the uncertainty range of a b-number, and the
//! split between a sign bit and its payload.

use bnumber::entropy::{entropy, entropy_bounds, inverse_entropy, split_uncertainty};
use bnumber::{EntropyValue, Probability};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for p in [0.0, 0.1, 0.25, 0.5] {
        println!("I({p}) = {}", entropy(p)?);
    }

    println!("\n{:>20}  {:>14}  {:>12}", "b", "lower", "upper");
    for b in [1u64, 2, 3, 7, 8, 100, 1 << 16, u64::MAX] {
        let r = entropy_bounds(b)?;
        println!("{b:>20}  {:>14}  {:>12}", r.lower.to_string(), r.upper.to_string());
    }

    // A 10-bit payload and its sign, either side treated as the uncertain one.
    let a = split_uncertainty(1, 10)?;
    let b = split_uncertainty(10, 1)?;
    println!("\nsplit(1, 10) = {a}, split(10, 1) = {b}");

    for e in [0.05, 0.5, 0.9] {
        let p: Probability = inverse_entropy(EntropyValue::new(e)?);
        println!("I^-1({e}) = {:.9}", p.get());
    }
    Ok(())
}
