//! Run the identity suite on a scenario and print the report as JSON.

use dirac_reduce::dsl::builtin;
use dirac_reduce::harness::{run_verification, VerifyOptions};

fn main() -> dirac_reduce::Result<()> {
    let opts = VerifyOptions { points: 20, ..VerifyOptions::default() };
    let (report, rows) = run_verification(&builtin("wave_E1")?, &opts)?;
    print!("{}", report.summary());
    println!("{} per-point rows", rows.len());
    println!("{}", report.without_timing().to_json());
    Ok(())
}
