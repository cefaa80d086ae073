//! The elimination pipeline at one point of the constant-field scenario.

use dirac_reduce::dsl::{builtin, parse_expression};
use dirac_reduce::harness::reduce_at;

fn main() -> dirac_reduce::Result<()> {
    let s = builtin("constant_E1")?;
    let psi1 = parse_expression("exp(-i*t)")?;
    let summary = reduce_at(&s, &psi1, [0.0, 1.0, 0.0, 0.0], 6)?;
    print!("{summary}");
    Ok(())
}
