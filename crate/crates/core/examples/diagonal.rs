//! A machine fed its own code as input, padded with copies of that code.

use bnumber::machine::{computation_uncertainty, parse_machine, serialize_machine, Computation, ENDS_IN_ONE};
use bnumber::reduction::{reduce_with_program_code, Target};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = parse_machine(ENDS_IN_ONE)?;
    let code = serialize_machine(&m)?;
    let diagonal = Computation::from_parts(&m, code.clone(), true)?;
    println!(
        "(T, T) is {} bits, uncertainty {}",
        diagonal.combined().len(),
        computation_uncertainty(&diagonal).entropy
    );

    let (reduced, plan) = reduce_with_program_code(&diagonal, &Target::Reciprocal(4097))?;
    println!("padded with {} bits of program code, uncertainty {}", plan.bits_to_add, reduced.uncertainty());

    let back = reduced.recover()?;
    assert_eq!(back, diagonal);
    let verdict = reduced.run(1_000_000)?.verdict;
    println!("the code of T ends in {}, so T says {verdict}", if *code.bits().last().unwrap() { 1 } else { 0 });
    Ok(())
}
