//! Scalar electrodynamics: the Klein–Gordon equation with minimal coupling,
//! its unitary-gauge real form, and the two expressions for the current.
//!
//! Here the charge `e` and mass `m` stay explicit (both default to 1), so
//! the coupling is `∂_μ + i e A_μ`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{PotentialJets, METRIC};
use crate::jet::Jet;
use crate::realify::realify_with_charge;

/// Relative imaginary part tolerated in a "real" field.
pub const REAL_TOLERANCE: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScalarParams {
    pub charge: f64,
    pub mass: f64,
}

impl Default for ScalarParams {
    fn default() -> Self {
        ScalarParams {
            charge: 1.0,
            mass: 1.0,
        }
    }
}

/// Either branch of the theory at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum ScalarState {
    /// Complex matter field with the original potentials.
    Complex { psi: Jet, potentials: PotentialJets },
    /// Real matter field in unitary gauge.
    Real { phi: Jet, potentials: PotentialJets },
}

fn need(operation: &'static str, order: usize, needed: usize) -> Result<()> {
    if order < needed {
        return Err(Error::OrderUnderflow {
            operation,
            order,
            needed,
        });
    }
    Ok(())
}

/// `(∂^μ + ieA^μ)(∂_μ + ieA_μ)ψ + m²ψ`, of order `min - 2`.
///
/// Built by applying the covariant derivative twice rather than through the
/// expanded operator.
pub fn kg_residual(psi: &Jet, p: &PotentialJets, params: ScalarParams) -> Result<Jet> {
    let order = psi.order().min(p.order());
    need("Klein-Gordon residual", order, 2)?;
    let ie = Complex64::new(0.0, params.charge);
    let psi = psi.truncated(order);
    let mut acc = Jet::zero(order - 2);
    for mu in 0..4 {
        let a1 = p.lower(mu).truncated(order - 1);
        let first = psi.partial(mu)? + (&a1 * &psi.truncated(order - 1)).scale(ie);
        let a2 = a1.truncated(order - 2);
        let second = first.partial(mu)? + (&a2 * &first.truncated(order - 2)).scale(ie);
        acc += &second.scale(METRIC[mu]);
    }
    acc += &psi.truncated(order - 2).scale(params.mass * params.mass);
    Ok(acc)
}

fn check_real(phi: &Jet) -> Result<()> {
    let imag = phi.max_imag();
    if imag > 0.0 {
        let rel = imag / phi.max_abs();
        if rel > REAL_TOLERANCE {
            return Err(Error::NonReal { max_imag: rel });
        }
    }
    Ok(())
}

/// `□φ - (e² B^μ B_μ - m²) φ` for a real field `φ`.
pub fn real_kg_residual(phi: &Jet, b: &PotentialJets, params: ScalarParams) -> Result<Jet> {
    check_real(phi)?;
    let order = phi.order().min(b.order());
    need("real Klein-Gordon residual", order, 2)?;
    let n = order - 2;
    let phi = phi.truncated(order);
    let mut boxed = Jet::zero(n);
    for mu in 0..4 {
        boxed += &phi.partials(&[mu, mu])?.scale(METRIC[mu]);
    }
    let e2 = params.charge * params.charge;
    let coeff = b.truncated(n).square().scale(e2) - Jet::constant(params.mass * params.mass, n);
    Ok(boxed - coeff * phi.truncated(n))
}

/// Lower-index current `j_μ` of either branch, order `min - 1`.
///
/// Complex: `ie(ψ* ψ_{,μ} - ψ*_{,μ} ψ) - 2e² A_μ ψ* ψ`. Real: `-2e² B_μ φ²`.
pub fn kg_currents(state: &ScalarState, params: ScalarParams) -> Result<[Jet; 4]> {
    let e = params.charge;
    match state {
        ScalarState::Complex { psi, potentials } => {
            let order = psi.order().min(potentials.order());
            need("scalar current", order, 1)?;
            let n = order - 1;
            let psi = psi.truncated(order);
            let conj = psi.conj();
            let (v, vc) = (psi.truncated(n), conj.truncated(n));
            let density = &vc * &v;
            let mut out: [Jet; 4] = std::array::from_fn(|_| Jet::zero(n));
            for (mu, slot) in out.iter_mut().enumerate() {
                let bracket = &vc * &psi.partial(mu)? - &conj.partial(mu)? * &v;
                *slot = bracket.scale(Complex64::new(0.0, e))
                    - (potentials.lower(mu).truncated(n) * &density).scale(2.0 * e * e);
            }
            Ok(out)
        }
        ScalarState::Real { phi, potentials } => {
            check_real(phi)?;
            let order = phi.order().min(potentials.order());
            need("scalar current", order, 1)?;
            let n = order - 1;
            let phi = phi.truncated(n);
            let sq = &phi * &phi;
            Ok(std::array::from_fn(|mu| {
                (potentials.lower(mu).truncated(n) * &sq).scale(-2.0 * e * e)
            }))
        }
    }
}

/// `∂^μ j_μ` of a lower-index current.
pub fn current_divergence_lower(j: &[Jet; 4]) -> Result<Jet> {
    let mut acc = j[0].partial(0)?;
    for mu in 1..4 {
        acc += &j[mu].partial(mu)?.scale(METRIC[mu]);
    }
    Ok(acc)
}

/// Realify a complex scalar field: `φ = e^{-iα} ψ` with `B_μ = A_μ + ∂_μ α / e`.
pub fn schroedinger_transform(
    psi: &Jet,
    p: &PotentialJets,
    params: ScalarParams,
) -> Result<(Jet, PotentialJets)> {
    let form = realify_with_charge(psi, p, params.charge)?;
    // drop the rounding-level imaginary part so the real branch accepts it
    Ok((form.psi1_real.re(), form.potentials))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{builtin, parse_expression};
    use crate::fields::potential_at;
    use crate::jet::relative_difference;
    use crate::reduction::box_prime;

    fn expr(text: &str, point: [f64; 4], order: usize) -> Jet {
        parse_expression(text).unwrap().eval_jet(point, order).unwrap()
    }

    const UNIT: ScalarParams = ScalarParams {
        charge: 1.0,
        mass: 1.0,
    };

    #[test]
    fn plane_wave_on_shell() {
        let psi = expr("exp(-i*t)", [0.0; 4], 5);
        assert!(kg_residual(&psi, &PotentialJets::zero(5), UNIT).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn constant_field_mass_term() {
        let r = kg_residual(&Jet::constant(1.0, 3), &PotentialJets::zero(3), UNIT).unwrap();
        assert_eq!(r, Jet::constant(1.0, 1));
    }

    #[test]
    fn unit_charge_matches_box_prime() {
        let p = potential_at(&builtin("constant_E1").unwrap(), [0.0, 1.0, 0.0, 0.0], 6).unwrap();
        let psi = expr("exp(-i*t)", [0.0, 1.0, 0.0, 0.0], 6);
        let a = kg_residual(&psi, &p, UNIT).unwrap();
        let b = box_prime(&psi, &p).unwrap();
        assert!(relative_difference(&a, &b) < 1e-14);
    }

    #[test]
    fn real_residual_examples() {
        let phi = expr("cos(t)", [0.0; 4], 4);
        assert!(real_kg_residual(&phi, &PotentialJets::zero(4), UNIT).unwrap().max_abs() < 1e-15);
        let b = PotentialJets::constant([1.0, 0.0, 0.0, 0.0], 3);
        assert!(real_kg_residual(&Jet::constant(1.0, 3), &b, UNIT).unwrap().is_zero());
        let complex = expr("exp(i*t)", [0.0; 4], 3);
        assert!(matches!(
            real_kg_residual(&complex, &b, UNIT),
            Err(Error::NonReal { .. })
        ));
    }

    #[test]
    fn current_examples() {
        let b = PotentialJets::constant([1.0, 0.0, 0.0, 0.0], 3);
        let state = ScalarState::Real {
            phi: Jet::constant(1.0, 3),
            potentials: b,
        };
        let j = kg_currents(&state, UNIT).unwrap();
        assert_eq!(j[0].value(), Complex64::new(-2.0, 0.0));

        let state = ScalarState::Complex {
            psi: expr("1 + x*t", [0.3; 4], 3),
            potentials: PotentialJets::zero(3),
        };
        for jm in kg_currents(&state, UNIT).unwrap() {
            assert!(jm.max_abs() < 1e-15);
        }
    }

    #[test]
    fn constant_phase_transform() {
        let psi = expr("i*cos(t)", [0.2, 0.0, 0.0, 0.0], 4);
        let (phi, b) = schroedinger_transform(&psi, &PotentialJets::zero(4), UNIT).unwrap();
        assert!(relative_difference(&phi, &expr("cos(t)", [0.2, 0.0, 0.0, 0.0], 4)) < 1e-14);
        assert!(b.components().iter().all(|a| a.max_abs() < 1e-14));
    }

    #[test]
    fn spatial_phase_transform() {
        // ψ = e^{ix} f(t), φ = f, B_1 = +1 (B^1 = -1) for e = 1
        let point = [0.1, 0.3, 0.0, 0.0];
        let psi = expr("exp(i*x)*(2 + sin(t))", point, 4);
        let (phi, b) = schroedinger_transform(&psi, &PotentialJets::zero(4), UNIT).unwrap();
        assert!(relative_difference(&phi, &expr("2 + sin(t)", point, 4)) < 1e-14);
        assert!(relative_difference(&b.lower(1), &Jet::constant(1.0, 3)) < 1e-14);
        assert!(b.upper(0).max_abs() < 1e-14);
    }
}
