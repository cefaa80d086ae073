//! The reduction's operators evaluated from point samples only.
//!
//! Nothing here touches jets: every derivative is a finite-difference
//! estimate, and the fourth-order operator nests one estimate inside another.

use num_complex::Complex64;

use crate::dsl::Scenario;
use crate::error::{Error, Result};
use crate::fields::METRIC;
use crate::jet::MultiIndex;
use crate::oracle::fd::{fd_partial, FdConfig};
use crate::reduction::SINGULAR_THRESHOLD;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Contravariant potentials as a function of the point.
pub type PotentialSampler<'a> = dyn Fn([f64; 4]) -> [Complex64; 4] + 'a;
/// A scalar complex field as a function of the point.
pub type FieldSampler<'a> = dyn Fn([f64; 4]) -> Complex64 + 'a;

/// Step settings for the inner and outer layer of nested differences.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdOps {
    pub inner: FdConfig,
    /// Used where the sampled function is itself an FD estimate.
    pub outer: FdConfig,
}

impl Default for FdOps {
    fn default() -> Self {
        FdOps {
            inner: FdConfig::default(),
            outer: FdConfig {
                step: 5e-2,
                ..FdConfig::default()
            },
        }
    }
}

fn d(f: &FieldSampler, x: [f64; 4], alpha: [u8; 4], cfg: &FdConfig) -> Result<Complex64> {
    Ok(fd_partial(&|y| f(y), x, &MultiIndex(alpha), cfg)?.value)
}

fn unit(axis: usize, times: u8) -> [u8; 4] {
    let mut a = [0; 4];
    a[axis] = times;
    a
}

/// `A^ν_{,μ}` as `grad[ν][μ]`.
fn potential_gradient(a: &PotentialSampler, x: [f64; 4], cfg: &FdConfig) -> Result<[[Complex64; 4]; 4]> {
    let mut grad = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (nu, row) in grad.iter_mut().enumerate() {
        let comp = |y: [f64; 4]| a(y)[nu];
        for (mu, slot) in row.iter_mut().enumerate() {
            *slot = d(&comp, x, unit(mu, 1), cfg)?;
        }
    }
    Ok(grad)
}

/// `[F¹, F², F³]` with `F^k = E^k + i H^k`.
pub fn fd_complex_field(a: &PotentialSampler, x: [f64; 4], cfg: &FdConfig) -> Result<[Complex64; 3]> {
    let g = potential_gradient(a, x, cfg)?;
    // F^{μν} = g^{μμ} A^ν_{,μ} - g^{νν} A^μ_{,ν}
    let f = |mu: usize, nu: usize| METRIC[mu] * g[nu][mu] - METRIC[nu] * g[mu][nu];
    let e = [f(1, 0), f(2, 0), f(3, 0)];
    let h = [f(3, 2), f(1, 3), f(2, 1)];
    Ok([0, 1, 2].map(|k| e[k] + I * h[k]))
}

/// `iF¹ + F²`
pub fn fd_elimination_coefficient(a: &PotentialSampler, x: [f64; 4], cfg: &FdConfig) -> Result<Complex64> {
    let f = fd_complex_field(a, x, cfg)?;
    Ok(I * f[0] + f[1])
}

/// `□′ψ = □ψ + 2iA^μ∂_μψ + i(∂_μA^μ)ψ - A^μA_μψ + ψ`
pub fn fd_box_prime(psi: &FieldSampler, a: &PotentialSampler, x: [f64; 4], cfg: &FdConfig) -> Result<Complex64> {
    let av = a(x);
    let g = potential_gradient(a, x, cfg)?;
    let v = psi(x);
    let mut out = v;
    for mu in 0..4 {
        out += METRIC[mu] * d(psi, x, unit(mu, 2), cfg)?;
        out += 2.0 * I * av[mu] * d(psi, x, unit(mu, 1), cfg)?;
        out += I * g[mu][mu] * v;
        out -= METRIC[mu] * av[mu] * av[mu] * v;
    }
    Ok(out)
}

/// `(□′ + iF³)ψ`
fn fd_upper(psi: &FieldSampler, a: &PotentialSampler, x: [f64; 4], cfg: &FdConfig) -> Result<Complex64> {
    let f = fd_complex_field(a, x, cfg)?;
    Ok(fd_box_prime(psi, a, x, cfg)? + I * f[2] * psi(x))
}

fn checked_coefficient(a: &PotentialSampler, x: [f64; 4], cfg: &FdConfig) -> Result<Complex64> {
    let k = fd_elimination_coefficient(a, x, cfg)?;
    if !(k.norm() >= SINGULAR_THRESHOLD) {
        return Err(Error::DegenerateField {
            value: k.norm(),
            threshold: SINGULAR_THRESHOLD,
        });
    }
    Ok(k)
}

/// `ψ2 = -(iF¹ + F²)⁻¹ (□′ + iF³) ψ1`, from samples.
pub fn fd_solve_psi2(psi1: &FieldSampler, a: &PotentialSampler, x: [f64; 4], ops: &FdOps) -> Result<Complex64> {
    let k = checked_coefficient(a, x, &ops.inner)?;
    Ok(-fd_upper(psi1, a, x, &ops.inner)? / k)
}

/// `L4ψ1 = (□′ - iF³)(iF¹ + F²)⁻¹(□′ + iF³)ψ1 - iF¹ψ1 + F²ψ1`, from samples.
///
/// The intermediate `g = K⁻¹(□′ + iF³)ψ1` is sampled with the inner steps and
/// differentiated with the outer ones.
pub fn fd_fourth_order(psi1: &FieldSampler, a: &PotentialSampler, x: [f64; 4], ops: &FdOps) -> Result<Complex64> {
    checked_coefficient(a, x, &ops.inner)?;
    let inner = ops.inner;
    let g = |y: [f64; 4]| -> Complex64 {
        let eval = || -> Result<Complex64> {
            let k = fd_elimination_coefficient(a, y, &inner)?;
            Ok(fd_upper(psi1, a, y, &inner)? / k)
        };
        eval().unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    };
    let f = fd_complex_field(a, x, &ops.inner)?;
    let outer = fd_box_prime(&g, a, x, &ops.outer)?;
    Ok(outer - I * f[2] * g(x) + (f[1] - I * f[0]) * psi1(x))
}

/// Potential sampler of a scenario; unevaluable points give NaN.
pub fn scenario_potentials(scenario: &Scenario) -> impl Fn([f64; 4]) -> [Complex64; 4] + '_ {
    move |x| {
        scenario
            .potentials
            .each_ref()
            .map(|e| e.eval(x).unwrap_or(Complex64::new(f64::NAN, f64::NAN)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::builtin;

    const P01: [f64; 4] = [0.0, 1.0, 0.0, 0.0];

    fn plane(x: [f64; 4]) -> Complex64 {
        (-I * x[0]).exp()
    }

    #[test]
    fn constant_e1_field() {
        let s = builtin("constant_E1").unwrap();
        let a = scenario_potentials(&s);
        let f = fd_complex_field(&a, P01, &FdConfig::default()).unwrap();
        assert!((f[0] - 1.0).norm() < 1e-10);
        assert!(f[1].norm() < 1e-10 && f[2].norm() < 1e-10);
    }

    #[test]
    fn worked_values() {
        let s = builtin("constant_E1").unwrap();
        let a = scenario_potentials(&s);
        let ops = FdOps::default();
        let psi2 = fd_solve_psi2(&plane, &a, P01, &ops).unwrap();
        assert!((psi2 - Complex64::new(0.0, -3.0)).norm() < 1e-8, "{psi2}");
        let l4 = fd_fourth_order(&plane, &a, P01, &ops).unwrap();
        assert!((l4 - Complex64::new(0.0, -12.0)).norm() < 1e-5, "{l4}");
    }

    #[test]
    fn zero_field_is_degenerate() {
        let s = builtin("zero_field").unwrap();
        let a = scenario_potentials(&s);
        assert!(matches!(
            fd_fourth_order(&plane, &a, [0.0; 4], &FdOps::default()),
            Err(Error::DegenerateField { .. })
        ));
    }
}
