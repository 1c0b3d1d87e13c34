//! Padding cost as the target tightens: linear in the input size for the
//! two encodings of n, exponential in b when the target is I(1/(2^b+1)).

use bnumber::experiments::{computation_baseline, csv_string, growth_ratio_check, theorem3_sweep, theorem4_sweep};
use bnumber::machine::{parse_machine, ENDS_IN_ONE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (efficient, length) = theorem3_sweep(1 << 10)?;
    for (name, report) in [("efficient", &efficient), ("length", &length)] {
        let by_n = growth_ratio_check(report)?;
        let by_bits = growth_ratio_check(&report.by_bit_length())?;
        println!(
            "{name:>9}: last padding {:>4}, against n {:?}, against bit length {:?}",
            report.records.last().map_or(0, |r| r.padding),
            by_n.verdict,
            by_bits.verdict,
        );
    }

    let m = parse_machine(ENDS_IN_ONE)?;
    let report = theorem4_sweep(24, computation_baseline(&m), Some(&m))?;
    let evidence = growth_ratio_check(&report)?;
    println!("\ntarget I(1/(2^b+1)): {:?}, ratio tends to {:.4}", evidence.verdict, evidence.limit.unwrap_or(f64::NAN));
    print!("{}", csv_string(&theorem4_sweep(10, computation_baseline(&m), Some(&m))?));
    Ok(())
}
