//! Gamma matrices and the Dirac residual of a free plane wave.

use num_complex::Complex64;

use dirac_reduce::dirac::{adjoint, dirac_residual_components, gamma, matmul, SpinorJets};
use dirac_reduce::dsl::parse_expression;
use dirac_reduce::fields::PotentialJets;

fn main() -> dirac_reduce::Result<()> {
    // {γ^μ, γ^ν} = 2 g^{μν}
    for mu in 0..4 {
        let g = gamma(mu)?;
        let sq = matmul(&g, &g)[0][0];
        let hermitian = adjoint(&g) == g;
        println!("gamma^{mu}: (gamma^{mu})^2 = {sq}, hermitian = {hermitian}");
    }
    // at rest, e^{-it} (1, 0, -1, 0) solves the free equation in this representation
    let profile = parse_expression("exp(-i*t)")?.eval_jet([0.0; 4], 5)?;
    let u = [1.0, 0.0, -1.0, 0.0].map(|r| Complex64::new(r, 0.0));
    let psi = SpinorJets::from_profile(&profile, u);
    let r = dirac_residual_components(&psi, &PotentialJets::zero(5))?;
    println!("max residual of the rest-frame wave: {:.1e}", r.max_abs());
    Ok(())
}
