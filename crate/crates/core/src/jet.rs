//! Truncated multivariate Taylor expansions ("jets") in the four spacetime
//! coordinates `(t, x, y, z)`.
//!
//! A jet of order `N` stores the Taylor coefficients `∂^α f / α!` of a field
//! at some anchor point for every multi-index `α` with `|α| <= N`. The anchor
//! itself is not stored. Coefficients are laid out densely in graded order
//! (all degree-0 entries, then degree 1, ...), so the coefficients of a jet of
//! order `M < N` are a prefix of those of order `N` and truncation is a slice.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Highest jet order supported by the precomputed layout.
pub const MAX_ORDER: usize = 10;

/// Default working order for the reduction identities.
pub const DEFAULT_ORDER: usize = 6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Exponents `(α0, α1, α2, α3)` of a monomial `t^α0 x^α1 y^α2 z^α3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(pub [u8; 4]);

impl MultiIndex {
    pub const fn new(t: u8, x: u8, y: u8, z: u8) -> Self {
        MultiIndex([t, x, y, z])
    }

    /// The multi-index `e_axis`.
    pub fn unit(axis: usize) -> Self {
        let mut e = [0u8; 4];
        e[axis] = 1;
        MultiIndex(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    /// `α! = α0! α1! α2! α3!`
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial(a as usize)).product()
    }

    pub fn checked_add(&self, other: &MultiIndex) -> MultiIndex {
        let mut out = self.0;
        for (o, b) in out.iter_mut().zip(other.0) {
            *o += b;
        }
        MultiIndex(out)
    }

    /// All multi-indices of degree at most `order`, in storage order.
    pub fn up_to(order: usize) -> &'static [MultiIndex] {
        let layout = layout();
        &layout.indices[..layout.len(order.min(MAX_ORDER))]
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (var, &e) in ["t", "x", "y", "z"].iter().zip(&self.0) {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "·")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{var}")?;
            } else {
                write!(f, "{var}^{e}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

struct Layout {
    indices: Vec<MultiIndex>,
    lookup: HashMap<MultiIndex, usize>,
    /// `offsets[d]` = number of multi-indices of degree `< d`.
    offsets: [usize; MAX_ORDER + 2],
    /// `raise[i][axis]` = index of `indices[i] + e_axis`, or `usize::MAX`.
    raise: Vec<[usize; 4]>,
    /// `(ia, ib, ic)` with `indices[ia] + indices[ib] = indices[ic]`, sorted by `ic`.
    products: Vec<(u32, u32, u32)>,
}

impl Layout {
    fn len(&self, order: usize) -> usize {
        self.offsets[order + 1]
    }

    fn build() -> Self {
        let mut indices = Vec::new();
        let mut offsets = [0usize; MAX_ORDER + 2];
        for d in 0..=MAX_ORDER {
            offsets[d] = indices.len();
            for a0 in (0..=d).rev() {
                for a1 in (0..=d - a0).rev() {
                    for a2 in (0..=d - a0 - a1).rev() {
                        let a3 = d - a0 - a1 - a2;
                        indices.push(MultiIndex([a0 as u8, a1 as u8, a2 as u8, a3 as u8]));
                    }
                }
            }
        }
        offsets[MAX_ORDER + 1] = indices.len();

        let lookup: HashMap<MultiIndex, usize> =
            indices.iter().enumerate().map(|(i, m)| (*m, i)).collect();

        let raise = indices
            .iter()
            .map(|m| {
                let mut r = [usize::MAX; 4];
                for (axis, slot) in r.iter_mut().enumerate() {
                    if let Some(&j) = lookup.get(&m.checked_add(&MultiIndex::unit(axis))) {
                        *slot = j;
                    }
                }
                r
            })
            .collect();

        let mut products = Vec::new();
        for (ia, a) in indices.iter().enumerate() {
            for (ib, b) in indices.iter().enumerate() {
                if a.degree() + b.degree() > MAX_ORDER {
                    continue;
                }
                let ic = lookup[&a.checked_add(b)];
                products.push((ia as u32, ib as u32, ic as u32));
            }
        }
        products.sort_by_key(|&(_, _, ic)| ic);

        Layout {
            indices,
            lookup,
            offsets,
            raise,
            products,
        }
    }

    fn products_for(&self, order: usize) -> &[(u32, u32, u32)] {
        let limit = self.len(order) as u32;
        let end = self.products.partition_point(|&(_, _, ic)| ic < limit);
        &self.products[..end]
    }
}

fn layout() -> &'static Layout {
    static LAYOUT: OnceLock<Layout> = OnceLock::new();
    LAYOUT.get_or_init(Layout::build)
}

/// Number of coefficients of a jet of the given order, `C(order + 4, 4)`.
pub fn coefficient_count(order: usize) -> usize {
    layout().len(order)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Analytic primitives that can be composed with a jet.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Primitive {
    Exp,
    Log,
    Sin,
    Cos,
    Reciprocal,
}

impl Primitive {
    pub fn name(self) -> &'static str {
        match self {
            Primitive::Exp => "exp",
            Primitive::Log => "log",
            Primitive::Sin => "sin",
            Primitive::Cos => "cos",
            Primitive::Reciprocal => "reciprocal",
        }
    }

    /// Taylor coefficients `f^(k)(c) / k!` for `k = 0..=order`.
    fn series(self, c: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let mut out = Vec::with_capacity(order + 1);
        match self {
            Primitive::Exp => {
                let e = c.exp();
                for k in 0..=order {
                    out.push(e / factorial(k));
                }
            }
            Primitive::Sin | Primitive::Cos => {
                let (s, co) = (c.sin(), c.cos());
                // derivatives of sin cycle through sin, cos, -sin, -cos
                let cycle = match self {
                    Primitive::Sin => [s, co, -s, -co],
                    _ => [co, -s, -co, s],
                };
                for k in 0..=order {
                    out.push(cycle[k % 4] / factorial(k));
                }
            }
            Primitive::Log => {
                if c == ZERO || !c.is_finite() {
                    return Err(Error::SingularComposition {
                        primitive: self.name(),
                        value: c,
                    });
                }
                out.push(c.ln());
                let inv = c.inv();
                let mut p = ONE;
                for k in 1..=order {
                    p *= inv;
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    out.push(p * (sign / k as f64));
                }
            }
            Primitive::Reciprocal => {
                if c == ZERO || !c.is_finite() {
                    return Err(Error::SingularComposition {
                        primitive: self.name(),
                        value: c,
                    });
                }
                let inv = c.inv();
                let mut p = inv;
                for k in 0..=order {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    out.push(p * sign);
                    p *= inv;
                }
            }
        }
        Ok(out)
    }
}

/// Truncated Taylor expansion of a complex field in `(t, x, y, z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    order: usize,
    coeffs: Vec<Complex64>,
}

impl Jet {
    fn check_order(order: usize) -> Result<()> {
        if order > MAX_ORDER {
            Err(Error::OrderTooHigh(order))
        } else {
            Ok(())
        }
    }

    /// The zero jet. Panics if `order > MAX_ORDER`.
    pub fn zero(order: usize) -> Jet {
        Self::check_order(order).expect("jet order");
        Jet {
            order,
            coeffs: vec![ZERO; coefficient_count(order)],
        }
    }

    pub fn constant(value: impl Into<Complex64>, order: usize) -> Jet {
        let mut j = Jet::zero(order);
        j.coeffs[0] = value.into();
        j
    }

    /// The coordinate function `x^axis` anchored at coordinate value `at`.
    pub fn variable(axis: usize, at: f64, order: usize) -> Result<Jet> {
        if axis > 3 {
            return Err(Error::AxisOutOfRange(axis));
        }
        Self::check_order(order)?;
        let mut j = Jet::constant(at, order);
        if order >= 1 {
            j.coeffs[layout().lookup[&MultiIndex::unit(axis)]] = ONE;
        }
        Ok(j)
    }

    /// Build a jet from coefficients in storage order (see [`MultiIndex::up_to`]).
    pub fn from_coeffs(order: usize, coeffs: Vec<Complex64>) -> Result<Jet> {
        Self::check_order(order)?;
        let expected = coefficient_count(order);
        if coeffs.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "order {order} jet needs {expected} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Jet { order, coeffs })
    }

    /// Build a jet by evaluating `f` at every multi-index up to `order`.
    pub fn from_fn(order: usize, mut f: impl FnMut(&MultiIndex) -> Complex64) -> Jet {
        Self::check_order(order).expect("jet order");
        let coeffs = MultiIndex::up_to(order).iter().map(&mut f).collect();
        Jet { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn value(&self) -> Complex64 {
        self.coeffs[0]
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Taylor coefficient `∂^α f / α!`; zero beyond the jet order.
    pub fn coeff(&self, alpha: &MultiIndex) -> Complex64 {
        if alpha.degree() > self.order {
            return ZERO;
        }
        self.coeffs[layout().lookup[alpha]]
    }

    pub fn set_coeff(&mut self, alpha: &MultiIndex, value: Complex64) {
        assert!(alpha.degree() <= self.order, "multi-index beyond jet order");
        self.coeffs[layout().lookup[alpha]] = value;
    }

    /// The raw partial derivative `∂^α f` at the anchor.
    pub fn derivative(&self, alpha: &MultiIndex) -> Complex64 {
        self.coeff(alpha) * alpha.factorial()
    }

    /// Drop all coefficients above `order`. Orders above the current one are
    /// left unchanged.
    pub fn truncated(&self, order: usize) -> Jet {
        if order >= self.order {
            return self.clone();
        }
        Jet {
            order,
            coeffs: self.coeffs[..coefficient_count(order)].to_vec(),
        }
    }

    /// `∂_axis f`, a jet of order `N - 1`.
    pub fn partial(&self, axis: usize) -> Result<Jet> {
        if axis > 3 {
            return Err(Error::AxisOutOfRange(axis));
        }
        if self.order == 0 {
            return Err(Error::OrderUnderflow {
                operation: "partial derivative",
                order: 0,
                needed: 1,
            });
        }
        let layout = layout();
        let order = self.order - 1;
        let coeffs = (0..coefficient_count(order))
            .map(|i| {
                let m = layout.indices[i].0[axis] as f64 + 1.0;
                self.coeffs[layout.raise[i][axis]] * m
            })
            .collect();
        Ok(Jet { order, coeffs })
    }

    /// Apply [`Jet::partial`] along each axis in turn.
    pub fn partials(&self, axes: &[usize]) -> Result<Jet> {
        axes.iter().try_fold(self.clone(), |j, &a| j.partial(a))
    }

    pub fn gradient(&self) -> Result<[Jet; 4]> {
        Ok([
            self.partial(0)?,
            self.partial(1)?,
            self.partial(2)?,
            self.partial(3)?,
        ])
    }

    pub fn checked_add(&self, other: &Jet) -> Result<Jet> {
        self.same_order(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Jet) -> Result<Jet> {
        self.same_order(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    /// Truncated product.
    pub fn checked_mul(&self, other: &Jet) -> Result<Jet> {
        self.same_order(other)?;
        let mut out = vec![ZERO; self.coeffs.len()];
        for &(ia, ib, ic) in layout().products_for(self.order) {
            out[ic as usize] += self.coeffs[ia as usize] * other.coeffs[ib as usize];
        }
        Ok(Jet {
            order: self.order,
            coeffs: out,
        })
    }

    /// Compose an analytic primitive with this jet.
    pub fn compose(&self, f: Primitive) -> Result<Jet> {
        let series = f.series(self.value(), self.order)?;
        let mut shift = self.clone();
        shift.coeffs[0] = ZERO;
        // Horner in the nilpotent shift
        let mut acc = Jet::constant(series[self.order], self.order);
        for c in series[..self.order].iter().rev() {
            acc = &acc * &shift;
            acc.coeffs[0] += *c;
        }
        Ok(acc)
    }

    pub fn exp(&self) -> Jet {
        self.compose(Primitive::Exp).expect("exp is entire")
    }

    pub fn ln(&self) -> Result<Jet> {
        self.compose(Primitive::Log)
    }

    pub fn sin(&self) -> Jet {
        self.compose(Primitive::Sin).expect("sin is entire")
    }

    pub fn cos(&self) -> Jet {
        self.compose(Primitive::Cos).expect("cos is entire")
    }

    pub fn recip(&self) -> Result<Jet> {
        self.compose(Primitive::Reciprocal)
    }

    pub fn checked_div(&self, other: &Jet) -> Result<Jet> {
        self.same_order(other)?;
        Ok(self * &other.recip()?)
    }

    /// Integer power; negative exponents go through the reciprocal.
    pub fn powi(&self, n: i32) -> Result<Jet> {
        let base = if n < 0 { self.recip()? } else { self.clone() };
        let mut result = Jet::constant(ONE, self.order);
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(result)
    }

    pub fn scale(&self, c: impl Into<Complex64>) -> Jet {
        let c = c.into();
        self.map(|a| a * c)
    }

    pub fn conj(&self) -> Jet {
        self.map(|a| a.conj())
    }

    /// Real part, coefficient-wise (the jet of `Re f` for real coordinates).
    pub fn re(&self) -> Jet {
        self.map(|a| Complex64::new(a.re, 0.0))
    }

    /// Imaginary part, coefficient-wise, as a real jet.
    pub fn im(&self) -> Jet {
        self.map(|a| Complex64::new(a.im, 0.0))
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Jet {
        Jet {
            order: self.order,
            coeffs: self.coeffs.iter().map(|&a| f(a)).collect(),
        }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest imaginary part modulus.
    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&'static MultiIndex, Complex64)> + '_ {
        MultiIndex::up_to(self.order).iter().zip(self.coeffs.iter().copied())
    }

    fn same_order(&self, other: &Jet) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::OrderMismatch {
                left: self.order,
                right: other.order,
            })
        }
    }

    fn zip_with(&self, other: &Jet, f: impl Fn(Complex64, Complex64) -> Complex64) -> Jet {
        Jet {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

/// Checked binary arithmetic on equal-order jets.
pub fn arith(a: &Jet, b: &Jet, op: ArithOp) -> Result<Jet> {
    match op {
        ArithOp::Add => a.checked_add(b),
        ArithOp::Sub => a.checked_sub(b),
        ArithOp::Mul => a.checked_mul(b),
    }
}

/// Smallest order among the given jets.
pub fn min_order<'a>(jets: impl IntoIterator<Item = &'a Jet>) -> usize {
    jets.into_iter().map(Jet::order).min().unwrap_or(MAX_ORDER)
}

/// `max |a - b| / max(max |a|, max |b|)`, zero when both jets vanish.
///
/// Jets of different order are compared on their common prefix.
pub fn relative_difference(a: &Jet, b: &Jet) -> f64 {
    scaled_difference(a, b, 0.0)
}

/// [`relative_difference`] with the denominator floored at `scale`, for
/// identities whose two sides can both cancel down to rounding level.
pub fn scaled_difference(a: &Jet, b: &Jet, scale: f64) -> f64 {
    let order = a.order.min(b.order);
    let (a, b) = (a.truncated(order), b.truncated(order));
    let scale = a.max_abs().max(b.max_abs()).max(scale);
    let diff = (&a - &b).max_abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / scale
    }
}

// The operator impls require equal orders and panic otherwise; use the
// `checked_*` methods where orders are not known statically.

impl Add<&Jet> for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        self.checked_add(rhs).expect("jet order mismatch in +")
    }
}

impl Sub<&Jet> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        self.checked_sub(rhs).expect("jet order mismatch in -")
    }
}

impl Mul<&Jet> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        self.checked_mul(rhs).expect("jet order mismatch in *")
    }
}

impl Mul<Complex64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: Complex64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.map(|a| -a)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: Complex64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

impl AddAssign<&Jet> for Jet {
    fn add_assign(&mut self, rhs: &Jet) {
        self.same_order(rhs).expect("jet order mismatch in +=");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
    }
}

impl SubAssign<&Jet> for Jet {
    fn sub_assign(&mut self, rhs: &Jet) {
        self.same_order(rhs).expect("jet order mismatch in -=");
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.iter() {
            if c == ZERO {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6e}{:+.6e}i)·{}", c.re, c.im, m)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " [order {}]", self.order)
    }
}
