//! Generate a seeded random field scenario that keeps |iF1 + F2| bounded away from zero.

use dirac_reduce::oracle::random::{sampled_min_coefficient, seeded};
use dirac_reduce::oracle::{random_scenario, RandomFieldSpec};

fn main() -> dirac_reduce::Result<()> {
    let s = random_scenario(&RandomFieldSpec::with_seed(7))?;
    print!("{}", s.to_toml());
    let min = sampled_min_coefficient(&s, &mut seeded(1), 1000)?;
    println!("# sampled min |iF1 + F2| = {min:.4}");
    Ok(())
}
