//! Central finite differences with Richardson extrapolation.
//!
//! A partial `∂^α` is built by nesting the first-order central difference
//! `(g(x+h) - g(x-h)) / 2h` once per unit of `α`, so mixed partials are the
//! tensor product of one-dimensional stencils. The truncation error is even
//! in `h`, and successive halvings are combined with factors `4^j`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dsl::Expr;
use crate::error::{Error, Result};
use crate::jet::MultiIndex;

/// Highest derivative order the oracle supports.
pub const MAX_FD_ORDER: usize = 4;

/// Accepted relative difference between a jet derivative and its FD estimate,
/// indexed by derivative order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceTable(pub [f64; MAX_FD_ORDER + 1]);

impl Default for ToleranceTable {
    fn default() -> Self {
        ToleranceTable([1e-12, 1e-8, 1e-8, 1e-6, 1e-4])
    }
}

impl ToleranceTable {
    pub fn for_order(&self, order: usize) -> f64 {
        self.0[order.min(MAX_FD_ORDER)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    /// Base step `h`.
    pub step: f64,
    /// Number of step halvings combined by Richardson extrapolation.
    pub levels: usize,
    pub tolerances: ToleranceTable,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            step: 1e-2,
            levels: 3,
            tolerances: ToleranceTable::default(),
        }
    }
}

impl FdConfig {
    pub fn new(step: f64, levels: usize) -> Result<FdConfig> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidArgument(format!("FD step must be positive, got {step}")));
        }
        if levels == 0 {
            return Err(Error::InvalidArgument("FD needs at least one Richardson level".into()));
        }
        Ok(FdConfig {
            step,
            levels,
            ..FdConfig::default()
        })
    }
}

/// An extrapolated derivative and the size of the last Richardson correction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FdEstimate {
    pub value: Complex64,
    pub error: f64,
}

fn axes_of(alpha: &MultiIndex) -> Vec<usize> {
    (0..4)
        .flat_map(|axis| std::iter::repeat(axis).take(alpha.0[axis] as usize))
        .collect()
}

fn nested<F: Fn([f64; 4]) -> Complex64>(f: &F, x: [f64; 4], axes: &[usize], h: f64) -> Complex64 {
    match axes.split_first() {
        None => f(x),
        Some((&axis, rest)) => {
            let (mut fwd, mut back) = (x, x);
            fwd[axis] += h;
            back[axis] -= h;
            (nested(f, fwd, rest, h) - nested(f, back, rest, h)) / (2.0 * h)
        }
    }
}

/// Plain nested central difference at a single step, no extrapolation.
pub fn central_difference<F>(f: &F, point: [f64; 4], alpha: &MultiIndex, step: f64) -> Complex64
where
    F: Fn([f64; 4]) -> Complex64,
{
    nested(f, point, &axes_of(alpha), step)
}

/// `∂^α f(point)` from samples of `f`.
pub fn fd_partial<F>(f: &F, point: [f64; 4], alpha: &MultiIndex, cfg: &FdConfig) -> Result<FdEstimate>
where
    F: Fn([f64; 4]) -> Complex64,
{
    let order = alpha.degree();
    if order > MAX_FD_ORDER {
        return Err(Error::FdOrderTooHigh(order));
    }
    let axes = axes_of(alpha);
    let smallest = cfg.step / f64::powi(2.0, cfg.levels as i32 - 1);
    let scale = axes.iter().map(|&a| point[a].abs()).fold(1.0, f64::max);
    if order > 0 && !(smallest > 1e3 * f64::EPSILON * scale) {
        return Err(Error::StepUnderflow { step: smallest, order });
    }
    let mut table: Vec<Complex64> = Vec::with_capacity(cfg.levels);
    let mut error = f64::INFINITY;
    let mut h = cfg.step;
    for level in 0..cfg.levels {
        let mut row = vec![nested(f, point, &axes, h)];
        for j in 1..=level {
            let factor = f64::powi(4.0, j as i32);
            let next = row[j - 1] + (row[j - 1] - table[j - 1]) / (factor - 1.0);
            row.push(next);
        }
        if level > 0 {
            error = (row[level] - table[level - 1]).norm();
        }
        table = row;
        h /= 2.0;
    }
    if cfg.levels == 1 {
        error = f64::NAN;
    }
    Ok(FdEstimate {
        value: table[cfg.levels - 1],
        error,
    })
}

/// Relative difference with a unit floor, `|a - b| / max(|a|, |b|, 1)`.
pub fn fd_relative_difference(a: Complex64, b: Complex64) -> f64 {
    let diff = (a - b).norm();
    if diff == 0.0 {
        0.0
    } else {
        diff / a.norm().max(b.norm()).max(1.0)
    }
}

/// One multi-index of a jet-versus-FD comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FdRow {
    pub alpha: [u8; 4],
    pub order: usize,
    /// Jet coefficient times `α!`.
    pub jet: Complex64,
    pub fd: Complex64,
    pub fd_error: f64,
    pub relative_difference: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compare every derivative of an expression up to `order` (at most 4)
/// between its jet and the FD oracle.
pub fn compare_jet_vs_fd(expr: &Expr, point: [f64; 4], order: usize, cfg: &FdConfig) -> Result<Vec<FdRow>> {
    let jet = expr.eval_jet(point, order)?;
    let sampler = |x: [f64; 4]| expr.eval(x).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    compare_with_sampler(&jet, &sampler, point, cfg)
}

/// [`compare_jet_vs_fd`] for an arbitrary jet and a sampler of the same function.
pub fn compare_with_sampler<F>(jet: &crate::Jet, f: &F, point: [f64; 4], cfg: &FdConfig) -> Result<Vec<FdRow>>
where
    F: Fn([f64; 4]) -> Complex64,
{
    let order = jet.order();
    if order > MAX_FD_ORDER {
        return Err(Error::FdOrderTooHigh(order));
    }
    MultiIndex::up_to(order)
        .iter()
        .map(|alpha| {
            let est = fd_partial(f, point, alpha, cfg)?;
            let exact = jet.derivative(alpha);
            let rel = fd_relative_difference(exact, est.value);
            let tolerance = cfg.tolerances.for_order(alpha.degree());
            Ok(FdRow {
                alpha: alpha.0,
                order: alpha.degree(),
                jet: exact,
                fd: est.value,
                fd_error: est.error,
                relative_difference: rel,
                tolerance,
                pass: rel <= tolerance,
            })
        })
        .collect()
}

/// Observed convergence order of the raw stencil from steps `h`, `h/2`, `h/4`.
pub fn observed_order<F>(f: &F, point: [f64; 4], alpha: &MultiIndex, step: f64) -> f64
where
    F: Fn([f64; 4]) -> Complex64,
{
    let d = [1.0, 2.0, 4.0].map(|k| central_difference(f, point, alpha, step / k));
    ((d[0] - d[1]).norm() / (d[1] - d[2]).norm()).log2()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_expression;

    fn sampler(text: &str) -> impl Fn([f64; 4]) -> Complex64 {
        let e = parse_expression(text).unwrap();
        move |x| e.eval(x).unwrap()
    }

    fn mi(a: [u8; 4]) -> MultiIndex {
        MultiIndex(a)
    }

    #[test]
    fn known_derivatives() {
        let cfg = FdConfig::default();
        let d = fd_partial(&sampler("sin(x)"), [0.0; 4], &mi([0, 1, 0, 0]), &cfg).unwrap();
        assert!((d.value - 1.0).norm() < 1e-9);
        let d = fd_partial(&sampler("exp(-i*t)"), [0.0; 4], &mi([2, 0, 0, 0]), &cfg).unwrap();
        assert!((d.value + 1.0).norm() < 1e-7);
        let d = fd_partial(&sampler("x^4"), [0.0, 0.3, 0.0, 0.0], &mi([0, 4, 0, 0]), &cfg).unwrap();
        assert!((d.value - 24.0).norm() < 1e-5);
    }

    #[test]
    fn mixed_partial() {
        let cfg = FdConfig::default();
        let d = fd_partial(&sampler("x*y*exp(t)"), [0.0, 0.5, 0.5, 0.0], &mi([1, 1, 1, 0]), &cfg).unwrap();
        assert!((d.value - 1.0).norm() < 1e-8);
    }

    #[test]
    fn exponential_times_square_passes_table() {
        let e = parse_expression("exp(i*t)*x^2").unwrap();
        let rows = compare_jet_vs_fd(&e, [0.3, 0.7, -0.2, 0.1], 4, &FdConfig::default()).unwrap();
        assert_eq!(rows.len(), 70);
        for r in &rows {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn constant_rows_are_exact() {
        let e = parse_expression("2.5 - 0.5*i").unwrap();
        let rows = compare_jet_vs_fd(&e, [0.1, 0.2, 0.3, 0.4], 4, &FdConfig::default()).unwrap();
        for r in rows.iter().filter(|r| r.order > 0) {
            assert_eq!(r.relative_difference, 0.0);
        }
    }

    #[test]
    fn stencil_is_second_order() {
        let f = sampler("exp(0.7*x)*cos(y)");
        for alpha in [mi([0, 1, 0, 0]), mi([0, 2, 0, 0]), mi([0, 1, 1, 0])] {
            let p = observed_order(&f, [0.0, 0.2, 0.4, 0.0], &alpha, 0.1);
            assert!((p - 2.0).abs() < 0.1, "{alpha}: {p}");
        }
    }

    #[test]
    fn richardson_improves_on_single_level() {
        let f = sampler("sin(x)");
        let one = fd_partial(&f, [0.0, 0.4, 0.0, 0.0], &mi([0, 1, 0, 0]), &FdConfig::new(1e-2, 1).unwrap()).unwrap();
        let three = fd_partial(&f, [0.0, 0.4, 0.0, 0.0], &mi([0, 1, 0, 0]), &FdConfig::default()).unwrap();
        let exact = 0.4f64.cos();
        assert!((three.value - exact).norm() < 1e-3 * (one.value - exact).norm());
    }

    #[test]
    fn errors() {
        let f = sampler("x");
        let cfg = FdConfig::default();
        assert!(matches!(fd_partial(&f, [0.0; 4], &mi([0, 5, 0, 0]), &cfg), Err(Error::FdOrderTooHigh(5))));
        let tiny = FdConfig::new(1e-300, 3).unwrap();
        assert!(matches!(fd_partial(&f, [0.0; 4], &mi([0, 1, 0, 0]), &tiny), Err(Error::StepUnderflow { .. })));
        assert!(FdConfig::new(-1.0, 3).is_err());
        assert!(FdConfig::new(1e-2, 0).is_err());
    }
}
