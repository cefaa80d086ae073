//! Gauge the first component to a real function and check that |L4 psi1| is unchanged.

use dirac_reduce::dsl::{builtin, parse_expression};
use dirac_reduce::fields::potential_at;
use dirac_reduce::realify::make_real;
use dirac_reduce::reduction::fourth_order_residual;

fn main() -> dirac_reduce::Result<()> {
    let s = builtin("crossed_EH")?;
    let point = [0.1, 1.2, -0.2, 0.0];
    let p = potential_at(&s, point, 7)?;
    let psi1 = parse_expression("(1 + x*x) * exp(i*(y - 2*t))")?.eval_jet(point, 7)?;
    let real = make_real(&psi1, &p)?;
    println!("relative Im of the rotated psi1: {:.1e}", real.relative_imag());
    let before = fourth_order_residual(&psi1, &p)?.value();
    let after = fourth_order_residual(&real.psi1_real, &real.potentials)?.value();
    println!("|L4 psi1| before {:.12}  after {:.12}", before.norm(), after.norm());
    Ok(())
}
