//! Gauge transform to a real first component, and the splitting of the
//! remaining complex equation into a real equation plus current conservation.

use num_complex::Complex64;

use crate::dirac::SpinorJets;
use crate::error::{Error, Result};
use crate::fields::{gauge_shift, PotentialJets};
use crate::jet::Jet;
use crate::reduction::second_order_residuals;

/// Below this `|ψ4|` the split is reported but not claimed equivalent.
pub const DEFAULT_PSI4_FLOOR: f64 = 1e-8;

/// A realified first component and the potentials that go with it.
#[derive(Clone, Debug, PartialEq)]
pub struct RealForm {
    /// `e^{iχ} ψ1`, real up to rounding.
    pub psi1_real: Jet,
    /// Transformed potentials.
    pub potentials: PotentialJets,
    /// Local phase `α = Im log ψ1`.
    pub phase: Jet,
    /// Gauge phase `χ = -α`; `psi1_real = e^{iχ} ψ1`.
    pub chi: Jet,
}

impl RealForm {
    /// Largest imaginary coefficient of `psi1_real` relative to its size.
    pub fn relative_imag(&self) -> f64 {
        let imag = self.psi1_real.max_imag();
        if imag == 0.0 {
            0.0
        } else {
            imag / self.psi1_real.max_abs()
        }
    }
}

/// `α = Im log ψ1` about the nonzero anchor value.
pub fn phase_jet(psi1: &Jet) -> Result<Jet> {
    let v = psi1.value();
    if v == Complex64::new(0.0, 0.0) || !v.is_finite() {
        return Err(Error::PhaseUndefined { value: v });
    }
    Ok(psi1.ln()?.im())
}

/// Rotate ψ1 to a real function and shift the potentials accordingly.
pub fn make_real(psi1: &Jet, p: &PotentialJets) -> Result<RealForm> {
    realify_with_charge(psi1, p, 1.0)
}

/// [`make_real`] for a field of charge `charge`, where the potential enters
/// as `charge · A`. The matter field is multiplied by `e^{-iα}` and the
/// potential shifted by `∂α / charge`.
pub fn realify_with_charge(psi1: &Jet, p: &PotentialJets, charge: f64) -> Result<RealForm> {
    let phase = phase_jet(psi1)?;
    let rotation = phase.scale(Complex64::new(0.0, -1.0)).exp();
    let psi1_real = &rotation * psi1;
    // A_μ - ∂_μ(χ/e) with χ = -α
    let chi = phase.scale(-1.0);
    let potentials = gauge_shift(p, &chi.scale(1.0 / charge))?;
    Ok(RealForm {
        psi1_real,
        potentials,
        phase,
        chi,
    })
}

/// `δ` with its real and conservation parts `2 Re(ψ4* δ)` and `2 Im(-ψ4* δ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConservationSplit {
    pub delta: Jet,
    pub real_eq: Jet,
    pub conservation: Jet,
    /// `|ψ4|` at the anchor point.
    pub psi4_modulus: f64,
    /// Set when `|ψ4|` is below the floor, so `δ = 0` no longer follows from
    /// both parts vanishing.
    pub psi4_below_floor: bool,
}

/// Split the residual of the second reduced equation for a spinor assembled
/// so that the lower rows and the first reduced equation hold.
pub fn conservation_split(psi: &SpinorJets, p: &PotentialJets) -> Result<ConservationSplit> {
    conservation_split_with_floor(psi, p, DEFAULT_PSI4_FLOOR)
}

pub fn conservation_split_with_floor(
    psi: &SpinorJets,
    p: &PotentialJets,
    floor: f64,
) -> Result<ConservationSplit> {
    let delta = second_order_residuals(&psi.0[0], &psi.0[1], p)?.rho2;
    Ok(split_delta(&psi.0[3], delta, floor))
}

/// The Re/Im split of `ψ4* δ` for an arbitrary `δ`.
pub fn split_delta(psi4: &Jet, delta: Jet, floor: f64) -> ConservationSplit {
    let n = delta.order().min(psi4.order());
    let delta = delta.truncated(n);
    let product = psi4.truncated(n).conj() * &delta;
    let real_eq = product.re().scale(2.0);
    let conservation = product.im().scale(-2.0);
    let psi4_modulus = psi4.value().norm();
    ConservationSplit {
        delta,
        real_eq,
        conservation,
        psi4_modulus,
        psi4_below_floor: psi4_modulus < floor,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expression;
    use crate::fields::field_strength;
    use crate::jet::relative_difference;

    fn expr(text: &str, point: [f64; 4], order: usize) -> Jet {
        parse_expression(text).unwrap().eval_jet(point, order).unwrap()
    }

    #[test]
    fn phase_examples() {
        let half_pi = phase_jet(&Jet::constant(Complex64::i(), 3)).unwrap();
        assert!(relative_difference(&half_pi, &Jet::constant(std::f64::consts::FRAC_PI_2, 3)) < 1e-15);

        let alpha = phase_jet(&expr("exp(i*x)", [0.0; 4], 4)).unwrap();
        assert!(relative_difference(&alpha, &Jet::variable(1, 0.0, 4).unwrap()) < 1e-15);

        assert!(phase_jet(&Jet::constant(2.0, 3)).unwrap().is_zero());
        assert!(matches!(phase_jet(&Jet::zero(2)), Err(Error::PhaseUndefined { .. })));
    }

    #[test]
    fn constant_phase_is_removed() {
        let r = make_real(&Jet::constant(Complex64::i(), 3), &PotentialJets::zero(3)).unwrap();
        assert!(relative_difference(&r.psi1_real, &Jet::constant(1.0, 3)) < 1e-15);
        assert!(r.potentials.components().iter().all(|a| a.max_abs() < 1e-15));
    }

    #[test]
    fn linear_phase_shifts_potential() {
        // χ = -x, so A_1 → +1 and A^1 → -1
        let r = make_real(&expr("exp(i*x)", [0.0; 4], 4), &PotentialJets::zero(4)).unwrap();
        assert!(relative_difference(&r.psi1_real, &Jet::constant(1.0, 4)) < 1e-15);
        assert!(relative_difference(r.potentials.upper(1), &Jet::constant(-1.0, 3)) < 1e-15);
        for mu in [0, 2, 3] {
            assert!(r.potentials.upper(mu).max_abs() < 1e-15);
        }
    }

    #[test]
    fn real_positive_is_fixed_point() {
        let psi1 = expr("2 + 0.3*x*t + cos(y)", [0.1, 0.2, 0.3, 0.4], 5);
        let p = PotentialJets::constant([0.2, 0.1, 0.0, -0.3], 5);
        let r = make_real(&psi1, &p).unwrap();
        assert!(r.phase.is_zero());
        assert_eq!(r.psi1_real, psi1);
        assert_eq!(r.potentials, p.truncated(4));
    }

    #[test]
    fn realified_field_strength_unchanged() {
        let point = [0.2, 0.4, -0.1, 0.3];
        let psi1 = expr("(1.5 + x*y)*exp(i*(t*t - 0.7*z + x))", point, 5);
        let p = PotentialJets::new([
            expr("-x + 0.2*t*y", point, 5),
            expr("sin(t + z)", point, 5),
            expr("0.5*x*x", point, 5),
            expr("cos(y)", point, 5),
        ])
        .unwrap();
        let r = make_real(&psi1, &p).unwrap();
        assert!(r.relative_imag() < 1e-14);
        let before = field_strength(&p.truncated(4)).unwrap();
        let after = field_strength(&r.potentials).unwrap();
        for k in 0..3 {
            assert!(relative_difference(&before.f[k], &after.f[k]) < 1e-14);
        }
    }

    #[test]
    fn split_vanishes_for_zero_delta() {
        let psi4 = expr("1 + i*x", [0.0; 4], 3);
        let s = split_delta(&psi4, Jet::zero(3), DEFAULT_PSI4_FLOOR);
        assert!(s.real_eq.is_zero() && s.conservation.is_zero());
        assert!(!s.psi4_below_floor);
    }

    #[test]
    fn multiplying_delta_by_i_swaps_parts() {
        let psi4 = expr("1 + i*x - y", [0.0; 4], 3);
        let delta = expr("0.3 - 2*i*t + x*z", [0.0; 4], 3);
        let a = split_delta(&psi4, delta.clone(), DEFAULT_PSI4_FLOOR);
        let b = split_delta(&psi4, delta.scale(Complex64::i()), DEFAULT_PSI4_FLOOR);
        // Re(i w) = -Im(w) and Im(-i w) = -Re(w)
        assert!(relative_difference(&b.real_eq, &a.conservation) < 1e-15);
        assert!(relative_difference(&b.conservation, &(-&a.real_eq)) < 1e-15);
    }

    #[test]
    fn floor_flag() {
        let s = split_delta(&Jet::constant(1e-9, 2), Jet::constant(1.0, 2), DEFAULT_PSI4_FLOOR);
        assert!(s.psi4_below_floor);
    }
}
