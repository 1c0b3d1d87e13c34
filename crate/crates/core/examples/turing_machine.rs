//! Parsing, running and serializing the machine that accepts inputs ending
//! in 1, and timing it over all inputs of each length.

use bnumber::machine::{
    deserialize_machine, is_polynomially_bounded, parse_machine, run, serialize_machine, worst_case_time_parallel,
    DEFAULT_STEP_LIMIT, ENDS_IN_ONE,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m = parse_machine(ENDS_IN_ONE)?;
    print!("{}", m.render());

    for input in ["101", "110", "", "1"] {
        let bits: Vec<bool> = input.chars().map(|c| c == '1').collect();
        let r = run(&m, &bits, DEFAULT_STEP_LIMIT)?;
        println!("{input:>4}: {} after {} steps, tape {}", r.verdict, r.steps, r.tape_string());
    }

    let code = serialize_machine(&m)?;
    let (back, used) = deserialize_machine(code.bits())?;
    println!("\nserialized to {used} bits; round trip keeps {} transitions", back.transitions().len());

    for n in 0..=10 {
        let w = worst_case_time_parallel(&m, n, DEFAULT_STEP_LIMIT)?;
        println!("T({n:>2}) = {:>2}  witness {}", w.t_max, w.witness.to_plain());
    }
    println!("T(n) <= n^2 + 2 on 0..=10: {}", is_polynomially_bounded(&m, 0..=10, 2, DEFAULT_STEP_LIMIT)?);
    Ok(())
}
