//! Ordinals as nested sets; the ordinal n has n elements.

use bnumber::encoding::von_neumann;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for n in 0..=4 {
        let set = von_neumann(n, false)?;
        println!("{n} = {} ({} elements)", set.as_str(), set.top_level_elements());
    }
    println!("{}", von_neumann(3, true)?.as_str());
    println!("{}", von_neumann(99, false).unwrap_err());
    Ok(())
}
