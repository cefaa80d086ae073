//! Klein-Gordon in a field: build an on-shell jet, move to the real form, compare currents.

use dirac_reduce::dsl::{builtin, parse_expression};
use dirac_reduce::fields::potential_at;
use dirac_reduce::jet::relative_difference;
use dirac_reduce::oracle::series::kg_series;
use dirac_reduce::scalar::{kg_currents, kg_residual, real_kg_residual, schroedinger_transform, ScalarParams, ScalarState};

fn main() -> dirac_reduce::Result<()> {
    let params = ScalarParams { charge: 0.7, mass: 1.0 };
    let s = builtin("scalar_demo")?;
    let point = [0.0, 0.2, 0.1, 0.0];
    let p = potential_at(&s, point, 7)?;
    let initial = parse_expression("(2 + x) * exp(i*y)")?.eval_jet(point, 7)?;
    let psi = kg_series(&initial, &p, params)?;
    println!("complex residual   {:.1e}", kg_residual(&psi, &p, params)?.max_abs());
    let (phi, b) = schroedinger_transform(&psi, &p, params)?;
    println!("real residual      {:.1e}", real_kg_residual(&phi, &b, params)?.max_abs());
    let jc = kg_currents(&ScalarState::Complex { psi, potentials: p }, params)?;
    let jr = kg_currents(&ScalarState::Real { phi, potentials: b }, params)?;
    for mu in 0..4 {
        let m = jc[mu].order().min(jr[mu].order());
        println!("j_{mu}: {:+.6}  mismatch {:.1e}", jc[mu].value().re, relative_difference(&jc[mu].truncated(m), &jr[mu].truncated(m)));
    }
    Ok(())
}
