//! Pointwise summaries printed by `reduce` and `realify`.

use std::fmt;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::dirac::current_divergence;
use crate::dsl::{builtin, builtin_names, load_scenario, parse_expression_with, Expr, Scenario};
use crate::error::{Error, Result, ScenarioError};
use crate::fields::{elimination_coefficient, field_strength, potential_at};
use crate::jet::{relative_difference, DEFAULT_ORDER};
use crate::realify::{make_real, split_delta, DEFAULT_PSI4_FLOOR};
use crate::reduction::{assemble_spinor, fourth_order_residual, second_order_residuals, solve_psi2};

/// Directory searched for `<name>.toml` when a name is neither built in nor a path.
pub const SCENARIO_DIR_ENV: &str = "DIRAC_REDUCE_SCENARIO_DIR";

/// Resolve a scenario reference: built-in name, file path, or a file in
/// the directory named by [`SCENARIO_DIR_ENV`].
pub fn resolve_scenario(reference: &str) -> Result<Scenario> {
    if builtin_names().any(|n| n == reference) {
        return builtin(reference);
    }
    let read = |path: &Path| -> Result<Scenario> {
        let text = std::fs::read_to_string(path).map_err(|e| ScenarioError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        load_scenario(&text)
    };
    let direct = Path::new(reference);
    if direct.is_file() {
        return read(direct);
    }
    if let Some(dir) = std::env::var_os(SCENARIO_DIR_ENV) {
        let candidate = Path::new(&dir).join(format!("{reference}.toml"));
        if candidate.is_file() {
            return read(&candidate);
        }
    }
    Err(ScenarioError::Unknown(reference.to_string()).into())
}

/// Parse `t,x,y,z`.
pub fn parse_point(text: &str) -> Result<[f64; 4]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::InvalidArgument(format!("point `{text}` needs four comma-separated numbers")));
    }
    let mut out = [0.0; 4];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("point coordinate `{part}` is not a number")))?;
    }
    Ok(out)
}

/// The scenario's `psi1` unless overridden.
pub fn psi1_expression(scenario: &Scenario, psi1: Option<&str>) -> Result<Expr> {
    match psi1 {
        Some(text) => Ok(parse_expression_with(text, &scenario.constants)?),
        None => scenario
            .psi1
            .clone()
            .ok_or_else(|| Error::InvalidArgument("scenario has no psi1; pass --psi1".into())),
    }
}

/// A named value with the formula that produced it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    pub value: Complex64,
    pub formula: String,
}

fn entry(name: &str, value: Complex64, formula: &str) -> Entry {
    Entry {
        name: name.into(),
        value,
        formula: formula.into(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReduceSummary {
    pub scenario: String,
    pub point: [f64; 4],
    pub psi1: String,
    pub entries: Vec<Entry>,
    pub psi4_modulus: f64,
    /// The Re/Im split only determines δ when |ψ4| is above the floor.
    pub psi4_below_floor: bool,
}

/// The elimination pipeline at one point.
pub fn reduce_at(scenario: &Scenario, psi1: &Expr, point: [f64; 4], order: usize) -> Result<ReduceSummary> {
    scenario.check_point(point)?;
    let order = order.max(5);
    let p = potential_at(scenario, point, order)?;
    let u1 = psi1.eval_jet(point, order)?;
    let f = field_strength(&p)?;
    let k = elimination_coefficient(&f);
    let psi2 = solve_psi2(&u1, &p)?;
    let spinor = assemble_spinor(&u1, &p)?;
    let l4 = fourth_order_residual(&u1, &p)?;
    let delta = second_order_residuals(&u1.truncated(psi2.order()), &psi2, &p)?.rho2;
    let div = current_divergence(&spinor)?;
    let split = split_delta(&spinor.0[3], delta.clone(), DEFAULT_PSI4_FLOOR);
    let entries = vec![
        entry("psi1", u1.value(), "input"),
        entry("iF1+F2", k.value(), "F^k = E^k + iH^k from F^{mu nu} = d^mu A^nu - d^nu A^mu"),
        entry("psi2", psi2.value(), "-(iF1 + F2)^-1 (box' + iF3) psi1"),
        entry("psi3", spinor.0[2].value(), "third Dirac row solved for psi3 given psi1, psi2"),
        entry("psi4", spinor.0[3].value(), "fourth Dirac row solved for psi4 given psi1, psi2"),
        entry("delta", delta.value(), "second reduced equation evaluated with the solved psi2"),
        entry("L4psi1", l4.value(), "(box' - iF3)(iF1 + F2)^-1(box' + iF3) psi1 - iF1 psi1 + F2 psi1"),
        entry("div_j", div.value(), "d_mu (psibar gamma^mu psi) of the assembled spinor"),
        entry("real_equation", split.real_eq.value(), "2 Re(psi4* delta)"),
        entry("conservation", split.conservation.value(), "2 Im(-psi4* delta)"),
    ];
    Ok(ReduceSummary {
        scenario: scenario.name.clone(),
        point,
        psi1: psi1.to_string(),
        entries,
        psi4_modulus: split.psi4_modulus,
        psi4_below_floor: split.psi4_below_floor,
    })
}

impl ReduceSummary {
    pub fn get(&self, name: &str) -> Option<Complex64> {
        self.entries.iter().find(|e| e.name == name).map(|e| e.value)
    }
}

fn fmt_c(z: Complex64) -> String {
    format!("{:+.12e} {:+.12e}i", z.re, z.im)
}

impl fmt::Display for ReduceSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {} at {:?}, psi1 = {}", self.scenario, self.point, self.psi1)?;
        for e in &self.entries {
            writeln!(f, "  {:<14} {}   [{}]", e.name, fmt_c(e.value), e.formula)?;
        }
        if self.psi4_below_floor {
            writeln!(f, "  |psi4| = {:.3e} is below the floor; the split does not determine delta", self.psi4_modulus)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RealifySummary {
    pub scenario: String,
    pub point: [f64; 4],
    pub psi1: String,
    /// Local phase `α`.
    pub phase: f64,
    pub psi1_real: f64,
    /// Transformed contravariant potentials at the point.
    pub potentials: [Complex64; 4],
    pub max_relative_imag: f64,
    /// `|L4 ψ1|` before and after, when the field admits the elimination.
    pub l4_modulus_before: Option<f64>,
    pub l4_modulus_after: Option<f64>,
    pub l4_covariance_residual: Option<f64>,
}

/// Realify ψ1 at one point and check `L4` against the transform.
pub fn realify_at(scenario: &Scenario, psi1: &Expr, point: [f64; 4], order: usize) -> Result<RealifySummary> {
    scenario.check_point(point)?;
    let order = order.max(5);
    let p = potential_at(scenario, point, order)?;
    let u1 = psi1.eval_jet(point, order)?;
    let form = make_real(&u1, &p)?;
    let l4 = match (fourth_order_residual(&u1, &p), fourth_order_residual(&form.psi1_real, &form.potentials)) {
        (Ok(before), Ok(after)) => {
            let m = after.order();
            let expected = &form.chi.truncated(m).scale(Complex64::i()).exp() * &before.truncated(m);
            Some((before.value().norm(), after.value().norm(), relative_difference(&after, &expected)))
        }
        (Err(Error::DegenerateField { .. }), _) | (_, Err(Error::DegenerateField { .. })) => None,
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    Ok(RealifySummary {
        scenario: scenario.name.clone(),
        point,
        psi1: psi1.to_string(),
        phase: form.phase.value().re,
        psi1_real: form.psi1_real.value().re,
        potentials: std::array::from_fn(|mu| form.potentials.upper(mu).value()),
        max_relative_imag: form.relative_imag(),
        l4_modulus_before: l4.map(|v| v.0),
        l4_modulus_after: l4.map(|v| v.1),
        l4_covariance_residual: l4.map(|v| v.2),
    })
}

impl fmt::Display for RealifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scenario {} at {:?}, psi1 = {}", self.scenario, self.point, self.psi1)?;
        writeln!(f, "  alpha          {:+.12e}", self.phase)?;
        writeln!(f, "  psi1_real      {:+.12e}", self.psi1_real)?;
        for (mu, a) in self.potentials.iter().enumerate() {
            writeln!(f, "  A'^{mu}           {}", fmt_c(*a))?;
        }
        writeln!(f, "  max |Im|/max   {:.3e}", self.max_relative_imag)?;
        match (self.l4_modulus_before, self.l4_modulus_after, self.l4_covariance_residual) {
            (Some(b), Some(a), Some(r)) => {
                writeln!(f, "  |L4| before    {b:.12e}")?;
                writeln!(f, "  |L4| after     {a:.12e}")?;
                writeln!(f, "  covariance     {r:.3e}")?;
            }
            _ => writeln!(f, "  L4 undefined: degenerate field at this point")?,
        }
        Ok(())
    }
}

/// Default evaluation point: the centre of the region.
pub fn region_center(scenario: &Scenario) -> [f64; 4] {
    scenario.region.bounds.map(|[lo, hi]| 0.5 * (lo + hi))
}

/// Default order for `reduce` and `realify`.
pub const PIPELINE_ORDER: usize = DEFAULT_ORDER;
