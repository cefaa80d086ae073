//! Seeded random jets and random scenarios.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dirac::SpinorJets;
use crate::dsl::{Region, Scenario};
use crate::error::{Error, Result};
use crate::fields::{elimination_coefficient, field_strength, potential_at, PotentialJets};
use crate::jet::Jet;
use crate::reduction::DOMINANCE_RATIO;

/// Deterministic generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn unit_disc<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    loop {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

/// Jet whose derivatives `∂^α f` lie in the unit disc.
pub fn random_jet<R: Rng + ?Sized>(rng: &mut R, order: usize) -> Jet {
    Jet::from_fn(order, |alpha| unit_disc(rng) / alpha.factorial())
}

/// Real jet with derivatives in `[-1, 1]`.
pub fn random_real_jet<R: Rng + ?Sized>(rng: &mut R, order: usize) -> Jet {
    Jet::from_fn(order, |alpha| Complex64::new(rng.gen_range(-1.0..1.0) / alpha.factorial(), 0.0))
}

pub fn random_potentials<R: Rng + ?Sized>(rng: &mut R, order: usize) -> PotentialJets {
    PotentialJets::new(std::array::from_fn(|_| random_real_jet(rng, order))).expect("equal orders")
}

pub fn random_spinor<R: Rng + ?Sized>(rng: &mut R, order: usize) -> SpinorJets {
    SpinorJets(std::array::from_fn(|_| random_jet(rng, order)))
}

/// `|iF¹ + F²|` at the anchor point of a potential jet.
pub fn coefficient_modulus(p: &PotentialJets) -> Result<f64> {
    Ok(elimination_coefficient(&field_strength(p)?).value().norm())
}

/// Random real potentials with `|iF¹ + F²| ≥ bound` that also pass the
/// dominance check of the elimination; rejection sampled.
pub fn random_admissible_potentials<R: Rng + ?Sized>(
    rng: &mut R,
    order: usize,
    bound: f64,
) -> Result<PotentialJets> {
    const RETRIES: usize = 10_000;
    for _ in 0..RETRIES {
        let p = random_potentials(rng, order);
        let k = elimination_coefficient(&field_strength(&p)?);
        let value = k.value().norm();
        if value >= bound && value >= DOMINANCE_RATIO * k.max_abs() {
            return Ok(p);
        }
    }
    Err(Error::Infeasible { bound, retries: RETRIES })
}

/// Recipe for a random analytic scenario.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomFieldSpec {
    pub seed: u64,
    /// Polynomial and trigonometric perturbation terms on top of a uniform
    /// background field.
    pub terms: usize,
    /// Bound on the background field strength and on every coefficient.
    pub amplitude: f64,
    /// Required minimum of `|iF¹ + F²|` over the region.
    pub min_coefficient: f64,
    pub region: Region,
    pub sample_points: usize,
    pub retries: usize,
}

impl Default for RandomFieldSpec {
    fn default() -> Self {
        RandomFieldSpec {
            seed: 0,
            terms: 4,
            amplitude: 1.0,
            min_coefficient: 0.1,
            region: Region::centered_cube(0.5),
            sample_points: 1000,
            retries: 64,
        }
    }
}

impl RandomFieldSpec {
    pub fn with_seed(seed: u64) -> Self {
        RandomFieldSpec {
            seed,
            ..Self::default()
        }
    }
}

const VARS: [&str; 4] = ["t", "x", "y", "z"];

fn num(v: f64) -> String {
    format!("{v:.4}")
}

fn push(terms: &mut Vec<String>, sign_coeff: f64, body: &str) {
    let c = num(sign_coeff.abs());
    let term = if body.is_empty() { c } else { format!("{c}*{body}") };
    match (terms.is_empty(), sign_coeff < 0.0) {
        (true, false) => terms.push(term),
        (true, true) => terms.push(format!("-{term}")),
        (false, false) => terms.push(format!("+ {term}")),
        (false, true) => terms.push(format!("- {term}")),
    }
}

/// The operator joining a term with coefficient `c`.
fn sign(c: f64) -> char {
    if c < 0.0 {
        '-'
    } else {
        '+'
    }
}

fn perturbation<R: Rng + ?Sized>(rng: &mut R) -> String {
    let v = VARS[rng.gen_range(0..4)];
    match rng.gen_range(0..4) {
        0 => v.to_string(),
        1 => {
            let w = VARS[rng.gen_range(0..4)];
            format!("{v}*{w}")
        }
        2 => format!("sin({}*{v} + {})", num(rng.gen_range(0.5..1.5)), num(rng.gen_range(0.0..1.0))),
        _ => format!("cos({}*{v} + {})", num(rng.gen_range(0.5..1.5)), num(rng.gen_range(0.0..1.0))),
    }
}

fn candidate<R: Rng + ?Sized>(rng: &mut R, spec: &RandomFieldSpec, attempt: usize) -> Result<Scenario> {
    let mut comps: [Vec<String>; 4] = Default::default();
    // uniform background: E along x through A^0 and H along y through A^2
    let e = spec.amplitude * rng.gen_range(0.5..1.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
    let h = spec.amplitude * rng.gen_range(-0.5..0.5);
    push(&mut comps[0], -e, "x");
    push(&mut comps[2], h, "x");
    let small = 0.2 * spec.amplitude / spec.terms.max(1) as f64;
    for _ in 0..spec.terms {
        let mu = rng.gen_range(0..4);
        let c = rng.gen_range(-small..small);
        let body = perturbation(rng);
        push(&mut comps[mu], c, &body);
    }
    let sources = comps.map(|c| if c.is_empty() { "0".to_string() } else { c.join(" ") });
    let (a, w, k) = (rng.gen_range(-0.3..0.3), rng.gen_range(0.8..1.2), rng.gen_range(-0.3..0.3));
    let psi1 = format!("(1.5 {} {}*x)*exp(-i*({}*t {} {}*z))", sign(a), num(a.abs()), num(w), sign(-k), num(k.abs()));
    let b = spec.region.bounds;
    let text = format!(
        "name = \"random_{seed}\"\n\
         description = \"random field, seed {seed}, attempt {attempt}\"\n\
         A0 = \"{}\"\nA1 = \"{}\"\nA2 = \"{}\"\nA3 = \"{}\"\n\
         psi1 = \"{psi1}\"\nmin_coefficient = {:?}\n\n[region]\n\
         t = [{:?}, {:?}]\nx = [{:?}, {:?}]\ny = [{:?}, {:?}]\nz = [{:?}, {:?}]\n",
        sources[0],
        sources[1],
        sources[2],
        sources[3],
        spec.min_coefficient,
        b[0][0], b[0][1], b[1][0], b[1][1], b[2][0], b[2][1], b[3][0], b[3][1],
        seed = spec.seed,
    );
    Scenario::from_toml(&text)
}

/// Smallest `|iF¹ + F²|` over `points` samples of the scenario region.
pub fn sampled_min_coefficient<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R, points: usize) -> Result<f64> {
    let mut min = f64::INFINITY;
    for _ in 0..points {
        let x = scenario.region.sample(rng);
        min = min.min(coefficient_modulus(&potential_at(scenario, x, 1)?)?);
    }
    Ok(min)
}

/// Deterministic random scenario meeting the coefficient bound at
/// `spec.sample_points` region samples.
pub fn random_scenario(spec: &RandomFieldSpec) -> Result<Scenario> {
    if !(spec.min_coefficient > 0.0) || !(spec.amplitude > 0.0) {
        return Err(Error::InvalidArgument(
            "random field bound and amplitude must be positive".into(),
        ));
    }
    let mut rng = seeded(spec.seed);
    for attempt in 0..spec.retries {
        let scenario = candidate(&mut rng, spec, attempt)?;
        let mut check_rng = seeded(spec.seed ^ 0x9e37_79b9_7f4a_7c15);
        if sampled_min_coefficient(&scenario, &mut check_rng, spec.sample_points)? >= spec.min_coefficient {
            return Ok(scenario);
        }
    }
    Err(Error::Infeasible {
        bound: spec.min_coefficient,
        retries: spec.retries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jets_are_bounded_and_reproducible() {
        let a = random_jet(&mut seeded(7), 4);
        let b = random_jet(&mut seeded(7), 4);
        assert_eq!(a, b);
        for (alpha, c) in a.iter() {
            assert!((c * alpha.factorial()).norm() <= 1.0);
        }
        assert_eq!(random_real_jet(&mut seeded(1), 3).max_imag(), 0.0);
    }

    #[test]
    fn admissible_potentials_meet_bound() {
        let mut rng = seeded(3);
        for _ in 0..20 {
            let p = random_admissible_potentials(&mut rng, 4, 0.1).unwrap();
            assert!(coefficient_modulus(&p).unwrap() >= 0.1);
        }
    }

    #[test]
    fn scenario_is_deterministic() {
        let a = random_scenario(&RandomFieldSpec::with_seed(42)).unwrap();
        let b = random_scenario(&RandomFieldSpec::with_seed(42)).unwrap();
        assert_eq!(a.to_toml(), b.to_toml());
        let c = random_scenario(&RandomFieldSpec::with_seed(43)).unwrap();
        assert_ne!(a.to_toml(), c.to_toml());
    }

    #[test]
    fn scenario_round_trips_and_meets_bound() {
        let spec = RandomFieldSpec::with_seed(42);
        let s = random_scenario(&spec).unwrap();
        assert_eq!(Scenario::from_toml(&s.to_toml()).unwrap(), s);
        let min = sampled_min_coefficient(&s, &mut seeded(99), 1000).unwrap();
        assert!(min >= spec.min_coefficient, "{min}");
    }

    #[test]
    fn impossible_bound_is_infeasible() {
        let spec = RandomFieldSpec {
            min_coefficient: 1e6,
            retries: 8,
            ..RandomFieldSpec::with_seed(1)
        };
        assert!(matches!(random_scenario(&spec), Err(Error::Infeasible { retries: 8, .. })));
    }
}
