//! Elimination of ψ3, ψ4 and then ψ2 from the Dirac equation.
//!
//! With ψ3 and ψ4 expressed through the upper pair, the first two Dirac rows
//! become second-order equations `ρ1 = 0`, `ρ2 = 0` for `(ψ1, ψ2)`. Because
//! `ρ1` contains ψ2 without derivatives, it is solved for ψ2 whenever the
//! coefficient `iF¹ + F²` is invertible, which leaves the fourth-order equation
//!
//! ```text
//! L4 ψ1 = ((□′ - iF³)(iF¹ + F²)⁻¹(□′ + iF³) - iF¹ + F²) ψ1 = 0
//! □′ = ∂^μ∂_μ + 2i A^μ ∂_μ + i A^μ_{,μ} - A^μ A_μ + 1
//! ```

use num_complex::Complex64;

use crate::dirac::{lower_rows, SpinorJets};
use crate::error::{Error, Result};
use crate::fields::{elimination_coefficient, field_strength, FieldStrength, PotentialJets, METRIC};
use crate::jet::{min_order, Jet};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Absolute floor on `|iF¹ + F²|` at the anchor point.
pub const SINGULAR_THRESHOLD: f64 = 1e-10;

/// The reciprocal of the elimination coefficient is only formed when its
/// value is at least this fraction of its largest coefficient.
pub const DOMINANCE_RATIO: f64 = 1e-6;

/// Factor relating the first Dirac row, with ψ3 and ψ4 reconstructed, to `ρ1`.
pub const FIRST_ROW_FACTOR: Complex64 = Complex64::new(1.0, 0.0);
/// Factor relating the second Dirac row, with ψ3 and ψ4 reconstructed, to `ρ2`.
pub const SECOND_ROW_FACTOR: Complex64 = Complex64::new(1.0, 0.0);
/// Factor relating the second component of the fully reconstructed Dirac
/// residual to `L4 ψ1`.
pub const FOURTH_ORDER_FACTOR: Complex64 = Complex64::new(1.0, 0.0);

/// Residuals of the two second-order equations for `(ψ1, ψ2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReducedPair {
    pub rho1: Jet,
    pub rho2: Jet,
}

/// The same equations regrouped with `□′` and `F^k`:
/// `σ1 = (□′ + iF³)ψ1 + (iF¹ + F²)ψ2`, `σ2 = (□′ - iF³)ψ2 + (iF¹ - F²)ψ1`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedForms {
    pub sigma1: Jet,
    pub sigma2: Jet,
}

fn underflow(operation: &'static str, order: usize, needed: usize) -> Result<()> {
    if order < needed {
        Err(Error::OrderUnderflow {
            operation,
            order,
            needed,
        })
    } else {
        Ok(())
    }
}

/// ψ3 and ψ4 from the upper pair, order `min(order) - 1`.
pub fn reconstruct_psi34(psi1: &Jet, psi2: &Jet, p: &PotentialJets) -> Result<(Jet, Jet)> {
    lower_rows(psi1, psi2, p)
}

/// `∂^μ ∂_μ f`
pub fn dalembertian(f: &Jet) -> Result<Jet> {
    underflow("d'Alembertian", f.order(), 2)?;
    let mut acc = Jet::zero(f.order() - 2);
    for mu in 0..4 {
        acc += &f.partials(&[mu, mu])?.scale(METRIC[mu]);
    }
    Ok(acc)
}

/// Modified d'Alembertian `□′ f`, order `min(f.order, A.order) - 2`.
pub fn box_prime(f: &Jet, p: &PotentialJets) -> Result<Jet> {
    let order = f.order().min(p.order());
    underflow("modified d'Alembertian", order, 2)?;
    let n = order - 2;
    let f = f.truncated(order);
    let p = p.truncated(order);
    let fv = f.truncated(n);
    let mut out = dalembertian(&f)?;
    out += &p.directional(&f)?.truncated(n).scale(2.0 * I);
    out += &(p.divergence()?.truncated(n) * &fv).scale(I);
    out -= &(p.square().truncated(n) * &fv);
    out += &fv;
    Ok(out)
}

/// Transcription of the two second-order equations for ψ1 and ψ2, written in
/// terms of potential derivatives, as residual jets of order `min - 2`.
pub fn second_order_residuals(psi1: &Jet, psi2: &Jet, p: &PotentialJets) -> Result<ReducedPair> {
    let order = min_order([psi1, psi2, p.upper(0)]);
    underflow("second-order residuals", order, 2)?;
    let n = order - 2;
    let (u1, u2) = (psi1.truncated(order), psi2.truncated(order));
    let p = p.truncated(order);
    // da[ν][μ] = A^ν_{,μ}
    let da: Vec<[Jet; 4]> = (0..4)
        .map(|nu| p.upper(nu).gradient().map(|g| g.map(|j| j.truncated(n))))
        .collect::<Result<_>>()?;
    let d = |nu: usize, mu: usize| &da[nu][mu];
    let one = Jet::constant(1.0, n);
    let a_sq = p.square().truncated(n);
    let div = p.divergence()?.truncated(n);
    let (v1, v2) = (u1.truncated(n), u2.truncated(n));

    let coupling1 = -d(1, 3).scale(I) - d(2, 3) + d(0, 2) + d(3, 2)
        + (d(0, 1) + d(3, 1) + d(1, 0)).scale(I)
        + d(2, 0);
    let self1 = -&one + &a_sq - div.scale(I) + d(0, 3).scale(I) - d(1, 2) + d(2, 1) + d(3, 0).scale(I);
    let rho1 = -dalembertian(&u1)? + &v2 * &coupling1 + &v1 * &self1
        - p.directional(&u1)?.truncated(n).scale(2.0 * I);

    let coupling2 = (d(1, 3) + d(2, 3).scale(I) + d(0, 2).scale(I) - d(3, 2).scale(I) + d(0, 1)
        - d(3, 1)
        + d(1, 0)
        + d(2, 0).scale(I))
    .scale(I);
    let self2 = -&one + &a_sq
        - (&div + d(0, 3) + d(1, 2).scale(I) - d(2, 1).scale(I) + d(3, 0)).scale(I);
    let rho2 = -dalembertian(&u2)? + &v1 * &coupling2 + &v2 * &self2
        - p.directional(&u2)?.truncated(n).scale(2.0 * I);

    Ok(ReducedPair { rho1, rho2 })
}

/// `σ1`, `σ2` built from [`box_prime`] and the field strength.
pub fn normalized_forms(psi1: &Jet, psi2: &Jet, p: &PotentialJets) -> Result<NormalizedForms> {
    let order = min_order([psi1, psi2, p.upper(0)]);
    underflow("normalized forms", order, 2)?;
    let n = order - 2;
    let p = p.truncated(order);
    let f = field_strength(&p)?;
    let k = elimination_coefficient(&f).truncated(n);
    let f1 = f.complex(1).truncated(n);
    let f2 = f.complex(2).truncated(n);
    let f3i = f.complex(3).truncated(n).scale(I);
    let (v1, v2) = (psi1.truncated(n), psi2.truncated(n));
    let sigma1 = box_prime(psi1, &p)? + &f3i * &v1 + &k * &v2;
    let sigma2 = box_prime(psi2, &p)? - &f3i * &v2 + (f1.scale(I) - &f2) * &v1;
    Ok(NormalizedForms { sigma1, sigma2 })
}

/// `(iF¹ + F²)⁻¹` truncated to `order`, or the degenerate-field error.
pub fn inverse_elimination_coefficient(f: &FieldStrength, order: usize, threshold: f64) -> Result<Jet> {
    let k = elimination_coefficient(f).truncated(order);
    let value = k.value().norm();
    if !(value >= threshold) || value < DOMINANCE_RATIO * k.max_abs() {
        return Err(Error::DegenerateField { value, threshold });
    }
    k.recip()
}

/// `ψ2 = -(iF¹ + F²)⁻¹ (□′ + iF³) ψ1`, order `min - 2`.
pub fn solve_psi2(psi1: &Jet, p: &PotentialJets) -> Result<Jet> {
    solve_psi2_with_threshold(psi1, p, SINGULAR_THRESHOLD)
}

pub fn solve_psi2_with_threshold(psi1: &Jet, p: &PotentialJets, threshold: f64) -> Result<Jet> {
    let order = psi1.order().min(p.order());
    underflow("solve for psi2", order, 2)?;
    let n = order - 2;
    let p = p.truncated(order);
    let f = field_strength(&p)?;
    let inv = inverse_elimination_coefficient(&f, n, threshold)?;
    let source = upper_operator(psi1, &p, &f)?;
    Ok(-(inv * source))
}

/// `(□′ + iF³) ψ1`
fn upper_operator(psi1: &Jet, p: &PotentialJets, f: &FieldStrength) -> Result<Jet> {
    let b = box_prime(psi1, p)?;
    let n = b.order();
    Ok(&b + &(f.complex(3).truncated(n).scale(I) * psi1.truncated(n)))
}

/// `L4 ψ1`, of order `min(ψ1.order, A.order) - 4`.
///
/// The operator is applied in the written order: `(□′ + iF³)`, then the
/// reciprocal coefficient, then `(□′ - iF³)`, then the zeroth-order term.
pub fn fourth_order_residual(psi1: &Jet, p: &PotentialJets) -> Result<Jet> {
    fourth_order_residual_with_threshold(psi1, p, SINGULAR_THRESHOLD)
}

pub fn fourth_order_residual_with_threshold(psi1: &Jet, p: &PotentialJets, threshold: f64) -> Result<Jet> {
    let order = psi1.order().min(p.order());
    underflow("fourth-order operator", order, 4)?;
    let p = p.truncated(order);
    let f = field_strength(&p)?;
    let inner = upper_operator(psi1, &p, &f)?;
    let inv = inverse_elimination_coefficient(&f, inner.order(), threshold)?;
    let g = inv * inner;
    let outer = box_prime(&g, &p)?;
    let n = outer.order();
    let f1 = f.complex(1).truncated(n);
    let f2 = f.complex(2).truncated(n);
    let f3 = f.complex(3).truncated(n);
    let v1 = psi1.truncated(n);
    Ok(outer - (f3.scale(I) * g.truncated(n)) + (f2 - f1.scale(I)) * v1)
}

/// Full spinor from ψ1 alone: ψ2 from [`solve_psi2`], then ψ3 and ψ4 from
/// [`reconstruct_psi34`]. All components share order `min - 3`.
pub fn assemble_spinor(psi1: &Jet, p: &PotentialJets) -> Result<SpinorJets> {
    let psi2 = solve_psi2(psi1, p)?;
    let n = psi2.order();
    let psi1 = psi1.truncated(n);
    let (psi3, psi4) = reconstruct_psi34(&psi1, &psi2, p)?;
    let m = psi3.order();
    Ok(SpinorJets([psi1.truncated(m), psi2.truncated(m), psi3, psi4]))
}
