//! Chiral gamma matrices, the Dirac residual and the Dirac current.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{PotentialJets, METRIC};
use crate::jet::{min_order, Jet};

pub type Matrix4 = [[Complex64; 4]; 4];

const O: Complex64 = Complex64::new(0.0, 0.0);
const P: Complex64 = Complex64::new(1.0, 0.0);
const M: Complex64 = Complex64::new(-1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);
const MI: Complex64 = Complex64::new(0.0, -1.0);

/// `γ^μ` in the chiral representation:
/// `γ^0 = [[0, -1], [-1, 0]]`, `γ^k = [[0, σ^k], [-σ^k, 0]]` in 2×2 blocks,
/// with `σ^1 = [[0,1],[1,0]]`, `σ^2 = [[0,-i],[i,0]]`, `σ^3 = [[1,0],[0,-1]]`.
pub fn gamma(mu: usize) -> Result<Matrix4> {
    Ok(match mu {
        0 => [[O, O, M, O], [O, O, O, M], [M, O, O, O], [O, M, O, O]],
        1 => [[O, O, O, P], [O, O, P, O], [O, M, O, O], [M, O, O, O]],
        2 => [[O, O, O, MI], [O, O, I, O], [O, I, O, O], [MI, O, O, O]],
        3 => [[O, O, P, O], [O, O, O, M], [M, O, O, O], [O, P, O, O]],
        _ => return Err(Error::AxisOutOfRange(mu)),
    })
}

fn gammas() -> [Matrix4; 4] {
    std::array::from_fn(|mu| gamma(mu).expect("valid index"))
}

pub fn matmul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    std::array::from_fn(|r| std::array::from_fn(|c| (0..4).map(|k| a[r][k] * b[k][c]).sum()))
}

pub fn adjoint(a: &Matrix4) -> Matrix4 {
    std::array::from_fn(|r| std::array::from_fn(|c| a[c][r].conj()))
}

/// Four spinor component jets `ψ1..ψ4` (stored zero-based).
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorJets(pub [Jet; 4]);

impl SpinorJets {
    pub fn new(components: [Jet; 4]) -> Result<SpinorJets> {
        let order = components[0].order();
        if let Some(bad) = components.iter().find(|j| j.order() != order) {
            return Err(Error::OrderMismatch {
                left: order,
                right: bad.order(),
            });
        }
        Ok(SpinorJets(components))
    }

    pub fn zero(order: usize) -> SpinorJets {
        SpinorJets(std::array::from_fn(|_| Jet::zero(order)))
    }

    /// `f(x) u` for a constant spinor `u`.
    pub fn from_profile(profile: &Jet, u: [Complex64; 4]) -> SpinorJets {
        SpinorJets(u.map(|c| profile.scale(c)))
    }

    pub fn order(&self) -> usize {
        self.0[0].order()
    }

    pub fn truncated(&self, order: usize) -> SpinorJets {
        SpinorJets(std::array::from_fn(|k| self.0[k].truncated(order)))
    }

    /// Multiply every component by a scalar jet.
    pub fn times(&self, f: &Jet) -> SpinorJets {
        let order = self.order().min(f.order());
        let f = f.truncated(order);
        SpinorJets(std::array::from_fn(|k| self.0[k].truncated(order) * &f))
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(Jet::max_abs).fold(0.0, f64::max)
    }
}

/// Current `j^μ = ψ̄ γ^μ ψ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurrentJets(pub [Jet; 4]);

impl CurrentJets {
    /// `j_μ = g_{μμ} j^μ`
    pub fn lower(&self) -> [Jet; 4] {
        std::array::from_fn(|mu| self.0[mu].scale(METRIC[mu]))
    }

    /// Largest imaginary coefficient relative to the largest modulus.
    pub fn relative_imag(&self) -> f64 {
        let scale = self.0.iter().map(Jet::max_abs).fold(0.0, f64::max);
        let imag = self.0.iter().map(Jet::max_imag).fold(0.0, f64::max);
        if imag == 0.0 {
            0.0
        } else {
            imag / scale
        }
    }
}

fn order_needed(operation: &'static str, order: usize, needed: usize) -> Result<()> {
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

/// `(i ∂̸ - A̸ - 1) ψ` assembled from [`gamma`] and jet arithmetic.
///
/// Output order is `min(ψ.order, A.order) - 1`.
pub fn dirac_residual_matrix(psi: &SpinorJets, p: &PotentialJets) -> Result<SpinorJets> {
    let order = psi.order().min(p.order());
    order_needed("Dirac residual", order, 1)?;
    let out_order = order - 1;
    let g = gammas();
    let psi = psi.truncated(order);
    // D_μ ψ_c = i ∂_μ ψ_c - A_μ ψ_c, per component
    let mut covariant: Vec<[Jet; 4]> = Vec::with_capacity(4);
    for mu in 0..4 {
        let a_lower = p.lower(mu).truncated(out_order);
        let row = std::array::from_fn(|c| {
            let d = psi.0[c].partial(mu).expect("order checked").scale(I);
            d - &a_lower * &psi.0[c].truncated(out_order)
        });
        covariant.push(row);
    }
    let out = std::array::from_fn(|r| {
        let mut acc = -psi.0[r].truncated(out_order);
        for (mu, gm) in g.iter().enumerate() {
            for c in 0..4 {
                if gm[r][c] != O {
                    acc += &covariant[mu][c].scale(gm[r][c]);
                }
            }
        }
        acc
    });
    Ok(SpinorJets(out))
}

/// Lower two rows of the Dirac operator applied to the upper pair `(ψ1, ψ2)`:
/// the right-hand sides that the third and fourth components must equal.
pub(crate) fn lower_rows(psi1: &Jet, psi2: &Jet, p: &PotentialJets) -> Result<(Jet, Jet)> {
    let order = min_order([psi1, psi2, p.upper(0)]);
    order_needed("lower Dirac rows", order, 1)?;
    let n = order - 1;
    let a: [Jet; 4] = std::array::from_fn(|mu| p.upper(mu).truncated(n));
    let (u1, u2) = (psi1.truncated(order), psi2.truncated(order));
    let d1 = u1.gradient()?;
    let d2 = u2.gradient()?;
    let (v1, v2) = (u1.truncated(n), u2.truncated(n));

    // (A0 - A3)ψ1 - (A1 - iA2)ψ2 - i(ψ1,3 - iψ2,2 + ψ2,1 + ψ1,0)
    let psi3 = (&a[0] - &a[3]) * &v1
        - (&a[1] - &a[2].scale(I)) * &v2
        - (&d1[3] - &d2[2].scale(I) + &d2[1] + &d1[0]).scale(I);
    // -(A1 + iA2)ψ1 + (A0 + A3)ψ2 + iψ2,3 + ψ1,2 - i(ψ1,1 + ψ2,0)
    let psi4 = -((&a[1] + &a[2].scale(I)) * &v1) + (&a[0] + &a[3]) * &v2 + d2[3].scale(I) + &d1[2]
        - (&d1[1] + &d2[0]).scale(I);
    Ok((psi3, psi4))
}

/// Upper two rows of the Dirac operator applied to the lower pair `(ψ3, ψ4)`.
fn upper_rows(psi3: &Jet, psi4: &Jet, p: &PotentialJets) -> Result<(Jet, Jet)> {
    let order = min_order([psi3, psi4, p.upper(0)]);
    order_needed("upper Dirac rows", order, 1)?;
    let n = order - 1;
    let a: [Jet; 4] = std::array::from_fn(|mu| p.upper(mu).truncated(n));
    let (u3, u4) = (psi3.truncated(order), psi4.truncated(order));
    let d3 = u3.gradient()?;
    let d4 = u4.gradient()?;
    let (v3, v4) = (u3.truncated(n), u4.truncated(n));

    // (A0 + A3)ψ3 + (A1 - iA2)ψ4 + i(ψ3,3 - iψ4,2 + ψ4,1 - ψ3,0)
    let r1 = (&a[0] + &a[3]) * &v3
        + (&a[1] - &a[2].scale(I)) * &v4
        + (&d3[3] - &d4[2].scale(I) + &d4[1] - &d3[0]).scale(I);
    // (A1 + iA2)ψ3 + (A0 - A3)ψ4 - i(ψ4,3 - iψ3,2 - ψ3,1 + ψ4,0)
    let r2 = (&a[1] + &a[2].scale(I)) * &v3 + (&a[0] - &a[3]) * &v4
        - (&d4[3] - &d3[2].scale(I) - &d3[1] + &d4[0]).scale(I);
    Ok((r1, r2))
}

/// The four component equations written out by hand, as residuals
/// `LHS - ψ_k`. Independent of [`gamma`].
pub fn dirac_residual_components(psi: &SpinorJets, p: &PotentialJets) -> Result<SpinorJets> {
    let [psi1, psi2, psi3, psi4] = &psi.0;
    let (r1, r2) = upper_rows(psi3, psi4, p)?;
    let (r3, r4) = lower_rows(psi1, psi2, p)?;
    let n = r1.order();
    Ok(SpinorJets([
        r1 - psi1.truncated(n),
        r2 - psi2.truncated(n),
        r3 - psi3.truncated(n),
        r4 - psi4.truncated(n),
    ]))
}

/// `Σ conj(u_a) (γ^0 M)_{ac} v_c`, the bilinear `ū M v`.
pub fn bar_bilinear(u: &SpinorJets, m: &Matrix4, v: &SpinorJets) -> Jet {
    let order = u.order().min(v.order());
    let g0m = matmul(&gamma(0).expect("valid"), m);
    let mut acc = Jet::zero(order);
    for a in 0..4 {
        let ua = u.0[a].truncated(order).conj();
        for c in 0..4 {
            if g0m[a][c] != O {
                acc += &(&ua * &v.0[c].truncated(order)).scale(g0m[a][c]);
            }
        }
    }
    acc
}

pub fn current(psi: &SpinorJets) -> CurrentJets {
    CurrentJets(gammas().map(|g| bar_bilinear(psi, &g, psi)))
}

/// `∂_μ (ψ̄ γ^μ ψ)`, order `N - 1`.
pub fn current_divergence(psi: &SpinorJets) -> Result<Jet> {
    order_needed("current divergence", psi.order(), 1)?;
    let j = current(psi);
    let mut acc = Jet::zero(psi.order() - 1);
    for mu in 0..4 {
        acc += &j.0[mu].partial(mu)?;
    }
    Ok(acc)
}

/// The product-rule halves `(ψ̄_{,μ} γ^μ ψ, ψ̄ γ^μ ψ_{,μ})`, summed over μ.
pub fn current_divergence_terms(psi: &SpinorJets) -> Result<(Jet, Jet)> {
    order_needed("current divergence", psi.order(), 1)?;
    let n = psi.order() - 1;
    let base = psi.truncated(n);
    let g = gammas();
    let mut left = Jet::zero(n);
    let mut right = Jet::zero(n);
    for (mu, gm) in g.iter().enumerate() {
        let d = SpinorJets(std::array::from_fn(|k| psi.0[k].partial(mu).expect("order checked")));
        left += &bar_bilinear(&d, gm, &base);
        right += &bar_bilinear(&base, gm, &d);
    }
    Ok((left, right))
}

/// `2 Re(ψ̄ γ^μ ψ_{,μ})`, equal to the current divergence via conjugation.
pub fn current_divergence_real_form(psi: &SpinorJets) -> Result<Jet> {
    let (_, right) = current_divergence_terms(psi)?;
    Ok(right.re().scale(2.0))
}
