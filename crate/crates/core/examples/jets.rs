//! Truncated Taylor jets: arithmetic, derivatives and evaluation.

use dirac_reduce::jet::{Jet, MultiIndex};

fn main() -> dirac_reduce::Result<()> {
    let point = [0.0, 0.5, 0.0, 0.0];
    let t = Jet::variable(0, point[0], 4)?;
    let x = Jet::variable(1, point[1], 4)?;
    // f = sin(t) * x^2
    let f = t.sin() * x.powi(2)?;
    println!("f(p)        = {}", f.value());
    println!("df/dx       = {}", f.partial(1)?.value());
    println!("d2f/dt dx   = {}", f.partials(&[0, 1])?.value());
    println!("d3f/dt3     = {}", f.derivative(&MultiIndex([3, 0, 0, 0])));
    let g = (&f + &Jet::constant(2.0, 4)).recip()?;
    println!("1/(f+2) at p = {}, order {}", g.value(), g.order());
    Ok(())
}
