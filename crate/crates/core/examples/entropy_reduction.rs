//! Padding a bit string until its uncertainty drops below a target, then
//! undoing the padding.

use bnumber::encoding::BitString;
use bnumber::reduction::{apply_mapping, invert_mapping, padding_bits_needed, FillPattern, Target};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let original: BitString = "101|1".parse()?;
    println!("original  {original}  (payload {} bits)", original.payload_len());

    for target in ["I(1/9)", "I(1/33)", "0.01"] {
        let target: Target = target.parse()?;
        let k = padding_bits_needed(original.payload_len() as u64, &target)?;
        let (padded, plan) = apply_mapping(&original, &target, &FillPattern::ZeroEncoding)?;
        println!(
            "\ntarget ε = {:.9}: +{k} bits, padded payload {} bits, uncertainty {}",
            target.epsilon(),
            padded.bits().payload_len(),
            padded.uncertainty(),
        );
        assert_eq!(plan.bits_to_add, k);
        assert_eq!(invert_mapping(&padded)?, original);
    }

    let fill = FillPattern::Repeat("110".parse()?);
    let (padded, _) = apply_mapping(&original, &Target::Reciprocal(12), &fill)?;
    println!("\nwith a repeating fill: {}", padded.bits());

    let unreachable = apply_mapping(&original, &Target::value(0.0)?, &FillPattern::ZeroEncoding);
    println!("ε = 0: {}", unreachable.unwrap_err());
    Ok(())
}
