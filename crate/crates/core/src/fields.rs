//! Four-potentials, field strengths and gauge shifts.
//!
//! Conventions: metric `diag(+1, -1, -1, -1)`, `x^0 = t`. Jet partials are
//! lower-index derivatives `∂_μ`; raising a spatial index flips its sign.
//! Potentials are stored contravariantly (`A^μ`) with the charge absorbed.

use num_complex::Complex64;

use crate::dsl::Scenario;
use crate::error::{Error, Result};
use crate::jet::{min_order, Jet};

/// `g^{μμ}` (equal to `g_{μμ}`) for the diagonal metric.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

/// Contravariant potential `A^μ` as four jets of a shared order.
#[derive(Clone, Debug, PartialEq)]
pub struct PotentialJets {
    a: [Jet; 4],
}

impl PotentialJets {
    pub fn new(a: [Jet; 4]) -> Result<PotentialJets> {
        let order = a[0].order();
        if let Some(bad) = a.iter().find(|j| j.order() != order) {
            return Err(Error::OrderMismatch {
                left: order,
                right: bad.order(),
            });
        }
        Ok(PotentialJets { a })
    }

    pub fn zero(order: usize) -> PotentialJets {
        PotentialJets {
            a: std::array::from_fn(|_| Jet::zero(order)),
        }
    }

    /// Constant potential with the given contravariant components.
    pub fn constant(upper: [f64; 4], order: usize) -> PotentialJets {
        PotentialJets {
            a: upper.map(|v| Jet::constant(v, order)),
        }
    }

    pub fn order(&self) -> usize {
        self.a[0].order()
    }

    /// `A^μ`
    pub fn upper(&self, mu: usize) -> &Jet {
        &self.a[mu]
    }

    /// `A_μ = g_{μμ} A^μ`
    pub fn lower(&self, mu: usize) -> Jet {
        self.a[mu].scale(METRIC[mu])
    }

    pub fn components(&self) -> &[Jet; 4] {
        &self.a
    }

    pub fn truncated(&self, order: usize) -> PotentialJets {
        PotentialJets {
            a: std::array::from_fn(|mu| self.a[mu].truncated(order)),
        }
    }

    /// `A^μ A_μ`
    pub fn square(&self) -> Jet {
        (0..4).fold(Jet::zero(self.order()), |acc, mu| {
            acc + (&self.a[mu] * &self.a[mu]).scale(METRIC[mu])
        })
    }

    /// `∂_μ A^μ`, order `N - 1`.
    pub fn divergence(&self) -> Result<Jet> {
        let mut acc = self.a[0].partial(0)?;
        for mu in 1..4 {
            acc += &self.a[mu].partial(mu)?;
        }
        Ok(acc)
    }

    /// `A^μ ∂_μ f`, of order `min(order, f.order) - 1`.
    pub(crate) fn directional(&self, f: &Jet) -> Result<Jet> {
        let order = min_order([f, &self.a[0]]);
        if order == 0 {
            return Err(Error::OrderUnderflow {
                operation: "A·∂",
                order,
                needed: 1,
            });
        }
        let f = f.truncated(order);
        let mut acc = Jet::zero(order - 1);
        for mu in 0..4 {
            acc += &(self.a[mu].truncated(order - 1) * f.partial(mu)?);
        }
        Ok(acc)
    }

    /// Largest imaginary coefficient across components.
    pub fn max_imag(&self) -> f64 {
        self.a.iter().map(Jet::max_imag).fold(0.0, f64::max)
    }
}

/// Jets of all four potential expressions of `scenario` at `point`.
pub fn potential_at(scenario: &Scenario, point: [f64; 4], order: usize) -> Result<PotentialJets> {
    scenario.check_point(point)?;
    let [a0, a1, a2, a3] = &scenario.potentials;
    PotentialJets::new([
        a0.eval_jet(point, order)?,
        a1.eval_jet(point, order)?,
        a2.eval_jet(point, order)?,
        a3.eval_jet(point, order)?,
    ])
}

/// `F^{μν}`, the electric and magnetic fields, and `F^i = E^i + i H^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldStrength {
    /// `F^{μν} = ∂^μ A^ν - ∂^ν A^μ`.
    pub tensor: [[Jet; 4]; 4],
    /// `E^i = F^{i0}`.
    pub e: [Jet; 3],
    /// `H^1 = F^{32}, H^2 = F^{13}, H^3 = F^{21}`.
    pub h: [Jet; 3],
    pub f: [Jet; 3],
}

impl FieldStrength {
    pub fn order(&self) -> usize {
        self.e[0].order()
    }

    /// The complex combination `F^{k}` for `k = 1..=3`.
    pub fn complex(&self, k: usize) -> &Jet {
        &self.f[k - 1]
    }
}

pub fn field_strength(p: &PotentialJets) -> Result<FieldStrength> {
    if p.order() == 0 {
        return Err(Error::OrderUnderflow {
            operation: "field strength",
            order: 0,
            needed: 1,
        });
    }
    // raised[μ][ν] = ∂^μ A^ν
    let mut raised: Vec<Vec<Jet>> = Vec::with_capacity(4);
    for mu in 0..4 {
        let row = (0..4)
            .map(|nu| p.a[nu].partial(mu).map(|d| d.scale(METRIC[mu])))
            .collect::<Result<Vec<_>>>()?;
        raised.push(row);
    }
    let tensor: [[Jet; 4]; 4] =
        std::array::from_fn(|mu| std::array::from_fn(|nu| &raised[mu][nu] - &raised[nu][mu]));
    let e: [Jet; 3] = std::array::from_fn(|i| tensor[i + 1][0].clone());
    let h = [
        tensor[3][2].clone(),
        tensor[1][3].clone(),
        tensor[2][1].clone(),
    ];
    let f = std::array::from_fn(|i| &e[i] + &h[i].scale(Complex64::i()));
    Ok(FieldStrength { tensor, e, h, f })
}

/// `iF^1 + F^2`, the coefficient whose inverse licenses eliminating ψ2.
pub fn elimination_coefficient(f: &FieldStrength) -> Jet {
    f.f[0].scale(Complex64::i()) + &f.f[1]
}

/// Potential partner of the phase rotation `ψ → e^{iχ} ψ`:
/// `A_μ → A_μ - ∂_μ χ`, returned contravariantly.
///
/// The result has order `min(p.order, χ.order - 1)`.
pub fn gauge_shift(p: &PotentialJets, chi: &Jet) -> Result<PotentialJets> {
    if chi.order() == 0 {
        return Err(Error::OrderUnderflow {
            operation: "gauge shift",
            order: 0,
            needed: 1,
        });
    }
    let order = p.order().min(chi.order() - 1);
    let a = std::array::from_fn(|mu| {
        let d = chi.partial(mu).expect("checked order").truncated(order);
        p.a[mu].truncated(order) - d.scale(METRIC[mu])
    });
    Ok(PotentialJets { a })
}

/// `□A_μ - ∂_μ(∂_ν A^ν) - j_μ` for a lower-index source `j`.
///
/// This is a diagnostic; nothing in the crate requires it to vanish.
pub fn maxwell_residual(p: &PotentialJets, current_lower: &[Jet; 4]) -> Result<[Jet; 4]> {
    if p.order() < 2 {
        return Err(Error::OrderUnderflow {
            operation: "Maxwell residual",
            order: p.order(),
            needed: 2,
        });
    }
    let div = p.divergence()?;
    let mut out: [Jet; 4] = std::array::from_fn(|_| Jet::zero(0));
    for mu in 0..4 {
        let a_lower = p.lower(mu);
        let mut boxed = Jet::zero(p.order() - 2);
        for nu in 0..4 {
            boxed += &a_lower.partials(&[nu, nu])?.scale(METRIC[nu]);
        }
        let order = boxed.order().min(current_lower[mu].order());
        out[mu] = boxed.truncated(order)
            - div.partial(mu)?.truncated(order)
            - current_lower[mu].truncated(order);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::{builtin, parse_expression};
    use crate::jet::{relative_difference, MultiIndex};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_jet_const(j: &Jet, v: Complex64) {
        assert!(
            relative_difference(j, &Jet::constant(v, j.order())) < 1e-15 || (j.max_abs() == 0.0 && v == c(0.0, 0.0)),
            "{j} != {v}"
        );
    }

    #[test]
    fn constant_e1_potential_and_fields() {
        let s = builtin("constant_E1").unwrap();
        let p = potential_at(&s, [0.3, 1.0, 0.2, -0.4], 4).unwrap();
        assert_eq!(p.upper(0).value(), c(-1.0, 0.0));
        assert_eq!(p.upper(0).coeff(&MultiIndex::new(0, 1, 0, 0)), c(-1.0, 0.0));
        assert!(p.upper(1).is_zero() && p.upper(2).is_zero() && p.upper(3).is_zero());

        let f = field_strength(&p).unwrap();
        assert_eq!(f.order(), 3);
        assert_jet_const(&f.e[0], c(1.0, 0.0));
        for k in 1..3 {
            assert!(f.e[k].is_zero());
        }
        for k in 0..3 {
            assert!(f.h[k].is_zero());
        }
        assert_jet_const(&elimination_coefficient(&f), c(0.0, 1.0));
    }

    #[test]
    fn wave_e1_hand_values() {
        let s = builtin("wave_E1").unwrap();
        let p = potential_at(&s, [0.0, 1.0, 0.0, 0.0], 3).unwrap();
        assert_eq!(p.upper(0).value(), c(-1.0, 0.0));
        assert_eq!(p.upper(0).partial(0).unwrap().value(), c(0.0, 0.0));
        // ∂_t² of -x cos t at t=0 is +x
        assert!((p.upper(0).derivative(&MultiIndex::new(2, 0, 0, 0)) - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn outside_region_is_rejected() {
        let s = builtin("constant_E1").unwrap();
        assert!(matches!(
            potential_at(&s, [0.0, 5.0, 0.0, 0.0], 2),
            Err(Error::OutsideRegion { .. })
        ));
    }

    #[test]
    fn crossed_fields() {
        let s = builtin("crossed_EH").unwrap();
        let p = potential_at(&s, [0.0, 1.0, 0.0, 0.0], 3).unwrap();
        let f = field_strength(&p).unwrap();
        assert_jet_const(&f.e[0], c(1.0, 0.0));
        assert_jet_const(&f.h[2], c(1.0, 0.0));
        assert!(f.h[1].is_zero() && f.e[1].is_zero());
        assert_jet_const(&elimination_coefficient(&f), c(0.0, 1.0));
    }

    #[test]
    fn zero_field_coefficient_vanishes() {
        let f = field_strength(&PotentialJets::zero(3)).unwrap();
        assert!(elimination_coefficient(&f).is_zero());
    }

    #[test]
    fn pure_gauge_has_no_field() {
        // A^μ = ∂^μ χ for χ = x t
        let chi = parse_expression("x*t").unwrap().eval_jet([0.2, 0.7, 0.0, 0.0], 4).unwrap();
        let a: [Jet; 4] = std::array::from_fn(|mu| chi.partial(mu).unwrap().scale(METRIC[mu]));
        let f = field_strength(&PotentialJets::new(a).unwrap()).unwrap();
        for k in 0..3 {
            assert!(f.e[k].max_abs() < 1e-15);
            assert!(f.h[k].max_abs() < 1e-15);
        }
    }

    #[test]
    fn gauge_shift_of_constant_is_identity() {
        let p = PotentialJets::constant([0.5, -1.0, 2.0, 0.0], 3);
        let shifted = gauge_shift(&p, &Jet::constant(4.2, 4)).unwrap();
        assert_eq!(shifted, p);
    }

    #[test]
    fn gauge_shift_sign_convention() {
        // χ = -x: A_1 → 0 - ∂_1 χ = +1, hence A^1 = -1.
        let chi = Jet::variable(1, 0.0, 3).unwrap().scale(-1.0);
        let shifted = gauge_shift(&PotentialJets::zero(2), &chi).unwrap();
        assert_jet_const(shifted.upper(1), c(-1.0, 0.0));
        assert_jet_const(&shifted.lower(1), c(1.0, 0.0));
        for mu in [0, 2, 3] {
            assert!(shifted.upper(mu).is_zero());
        }
    }

    #[test]
    fn maxwell_diagnostics() {
        let zeros: [Jet; 4] = std::array::from_fn(|_| Jet::zero(4));
        let s = builtin("constant_E1").unwrap();
        let p = potential_at(&s, [0.0, 1.0, 0.0, 0.0], 4).unwrap();
        for r in maxwell_residual(&p, &zeros).unwrap() {
            assert!(r.is_zero());
        }
        for r in maxwell_residual(&PotentialJets::zero(4), &zeros).unwrap() {
            assert!(r.is_zero());
        }
        let s = builtin("wave_E1").unwrap();
        let p = potential_at(&s, [0.0, 1.0, 0.0, 0.0], 4).unwrap();
        let r = maxwell_residual(&p, &zeros).unwrap();
        // time component cancels; the x component is -sin t
        assert!(r[0].max_abs() < 1e-14);
        assert!(r.iter().any(|j| j.max_abs() > 1e-3), "wave_E1 is not a vacuum solution");
    }
}
