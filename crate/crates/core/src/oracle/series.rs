//! Exact local solutions by power series in time.
//!
//! Given data on `t = t0` (the Taylor coefficients without a time exponent,
//! plus the first time derivative for the second-order equation), the
//! remaining coefficients are fixed level by level so that the residual jet
//! vanishes identically. The results are exact on-shell jets to test against.

use num_complex::Complex64;

use crate::dirac::{dirac_residual_matrix, gamma, SpinorJets};
use crate::error::Result;
use crate::fields::PotentialJets;
use crate::jet::{Jet, MultiIndex};
use crate::scalar::{kg_residual, ScalarParams};

fn keep_levels(f: &Jet, below: u8) -> Jet {
    let mut out = f.clone();
    for alpha in MultiIndex::up_to(f.order()) {
        if alpha.0[0] >= below {
            out.set_coeff(alpha, Complex64::new(0.0, 0.0));
        }
    }
    out
}

fn shifted(alpha: &MultiIndex, k: u8) -> MultiIndex {
    let mut a = *alpha;
    a.0[0] += k;
    a
}

/// Dirac solution whose time-independent coefficients match `initial`.
/// Order `min(initial, A)`; its residual vanishes to order one less.
pub fn dirac_series(initial: &SpinorJets, p: &PotentialJets) -> Result<SpinorJets> {
    let n = initial.order().min(p.order());
    let p = p.truncated(n);
    let mut psi = SpinorJets(initial.truncated(n).0.map(|c| keep_levels(&c, 1)));
    // the ∂_t block of the operator is iγ⁰, whose inverse is -iγ⁰
    let g0 = gamma(0)?;
    for level in 0..n {
        let r = dirac_residual_matrix(&psi, &p)?;
        for alpha in MultiIndex::up_to(n - 1).iter().filter(|a| a.0[0] as usize == level) {
            let target = shifted(alpha, 1);
            let scale = (level + 1) as f64;
            for row in 0..4 {
                let mut fix = Complex64::new(0.0, 0.0);
                for c in 0..4 {
                    fix += g0[row][c] * r.0[c].coeff(alpha);
                }
                let old = psi.0[row].coeff(&target);
                psi.0[row].set_coeff(&target, old + Complex64::i() * fix / scale);
            }
        }
    }
    Ok(psi)
}

/// Klein–Gordon solution whose coefficients with time exponent 0 and 1
/// match `initial`. Order `min(initial, A)`; residual vanishes to order two less.
pub fn kg_series(initial: &Jet, p: &PotentialJets, params: ScalarParams) -> Result<Jet> {
    let n = initial.order().min(p.order());
    let p = p.truncated(n);
    let mut psi = keep_levels(&initial.truncated(n), 2);
    for level in 0..n.saturating_sub(1) {
        let r = kg_residual(&psi, &p, params)?;
        for alpha in MultiIndex::up_to(n - 2).iter().filter(|a| a.0[0] as usize == level) {
            let target = shifted(alpha, 2);
            let scale = ((level + 1) * (level + 2)) as f64;
            let old = psi.coeff(&target);
            psi.set_coeff(&target, old - r.coeff(alpha) / scale);
        }
    }
    Ok(psi)
}
