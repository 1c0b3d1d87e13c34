//! Both encoding schemes under both sign conventions, plus duality and the
//! successor walked at the bit level.
//!
//! ```text
//! cargo run -p bnumber --example encodings
//! ```

use bnumber::encoding::{decode, dual, encode, possible_encodings, BNumber};
use bnumber::{EncodingScheme, SignConvention};
use num_bigint::BigUint;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>3}  {:>10} {:>10}  {:>12} {:>12}", "n", "bin/normal", "bin/flip", "len/normal", "len/flip");
    for n in 0u32..=8 {
        let v = BigUint::from(n);
        let cells: Vec<String> = [EncodingScheme::Binary, EncodingScheme::Length]
            .into_iter()
            .flat_map(|scheme| {
                [SignConvention::Normal, SignConvention::Flipped]
                    .map(|conv| encode(&v, scheme, conv).map(|b| b.to_string()))
            })
            .collect::<Result<_, _>>()?;
        println!("{n:>3}  {:>10} {:>10}  {:>12} {:>12}", cells[0], cells[1], cells[2], cells[3]);
    }

    let five = encode(&BigUint::from(5u32), EncodingScheme::Binary, SignConvention::Normal)?;
    let mirrored = dual(&five);
    println!("\ndual({five}) = {mirrored}, which still decodes to {}", decode(&mirrored, EncodingScheme::Binary)?);

    let (normal, flipped) = possible_encodings(&BigUint::from(3u32), EncodingScheme::Binary)?;
    println!("3 renders as {normal} or {flipped}");

    // Counting from 5 under the flipped convention never leaves it.
    let mut x = BNumber::new(5u32, EncodingScheme::Binary, SignConvention::Flipped);
    print!("\nsuccessors:");
    for _ in 0..6 {
        print!(" {}", x.render()?);
        x = x.successor();
    }
    println!();
    Ok(())
}
