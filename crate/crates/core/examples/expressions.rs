//! Parsing potentials written as text and evaluating them as jets.

use dirac_reduce::dsl::parse_expression;

fn main() -> dirac_reduce::Result<()> {
    for text in ["exp(-i*t) * cos(x)", "x^2 - y/(1 + z^2)", "log(1 + x) + sin(t)^3"] {
        let e = parse_expression(text)?;
        let jet = e.eval_jet([0.1, 0.2, 0.3, 0.4], 3)?;
        println!("{text:<26} -> {e}");
        println!("    value {:.6}  d/dx {:.6}", jet.value(), jet.partial(1)?.value());
    }
    match parse_expression("exp(t") {
        Ok(_) => unreachable!(),
        Err(e) => println!("bad input reports: {e}"),
    }
    Ok(())
}
