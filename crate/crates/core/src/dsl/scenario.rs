//! Scenario documents: analytic 4-potentials over a sample region.
//!
//! A scenario is a TOML document:
//!
//! ```toml
//! name = "crossed_EH"
//! description = "optional free text"
//! A0 = "-E*x"          # contravariant components A^0..A^3, charge absorbed
//! A1 = "0"
//! A2 = "B*x"
//! A3 = "0"
//! psi1 = "exp(-i*t)"   # optional test component
//! min_coefficient = 0.5 # lower bound for |iF1 + F2| over the region (default 1e-3)
//!
//! [constants]          # optional named real constants usable in expressions
//! E = 1.0
//! B = 1.0
//!
//! [region]             # closed box, every axis required
//! t = [-1.0, 1.0]
//! x = [0.5, 1.5]
//! y = [-1.0, 1.0]
//! z = [-1.0, 1.0]
//! ```
//!
//! Unknown keys are rejected.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::expr::Expr;
use super::parser::parse_expression_with;
use crate::error::{Error, Result, ScenarioError};

pub const DEFAULT_MIN_COEFFICIENT: f64 = 1e-3;

const AXES: [char; 4] = ['t', 'x', 'y', 'z'];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RegionDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    t: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    y: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    z: Option<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    description: Option<String>,
    #[serde(rename = "A0", skip_serializing_if = "Option::is_none")]
    a0: Option<String>,
    #[serde(rename = "A1", skip_serializing_if = "Option::is_none")]
    a1: Option<String>,
    #[serde(rename = "A2", skip_serializing_if = "Option::is_none")]
    a2: Option<String>,
    #[serde(rename = "A3", skip_serializing_if = "Option::is_none")]
    a3: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi1: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_coefficient: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constants: Option<BTreeMap<String, f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    region: Option<RegionDoc>,
}

/// Closed axis-aligned box in `(t, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub bounds: [[f64; 2]; 4],
}

impl Region {
    pub fn new(bounds: [[f64; 2]; 4]) -> Result<Region, ScenarioError> {
        for (axis, [min, max]) in AXES.iter().zip(bounds) {
            if !(min <= max) {
                return Err(ScenarioError::EmptyRegion {
                    axis: *axis,
                    min,
                    max,
                });
            }
        }
        Ok(Region { bounds })
    }

    /// The cube `[-half_width, half_width]^4`.
    pub fn centered_cube(half_width: f64) -> Region {
        Region {
            bounds: [[-half_width, half_width]; 4],
        }
    }

    pub fn contains(&self, point: [f64; 4]) -> bool {
        point
            .iter()
            .zip(&self.bounds)
            .all(|(p, [lo, hi])| lo <= p && p <= hi)
    }

    /// Uniform sample from the box.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 4] {
        let mut p = [0.0; 4];
        for (p, [lo, hi]) in p.iter_mut().zip(self.bounds) {
            *p = if lo == hi { lo } else { rng.gen_range(lo..=hi) };
        }
        p
    }
}

/// A parsed, validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: Option<String>,
    /// `A^0..A^3`.
    pub potentials: [Expr; 4],
    pub potential_sources: [String; 4],
    pub psi1: Option<Expr>,
    pub psi1_source: Option<String>,
    pub region: Region,
    pub min_coefficient: f64,
    pub constants: BTreeMap<String, f64>,
}

impl Scenario {
    /// Parse a scenario document.
    pub fn from_toml(text: &str) -> Result<Scenario> {
        Ok(load(text)?)
    }

    /// Serialize back to a document that [`Scenario::from_toml`] accepts.
    pub fn to_toml(&self) -> String {
        let [a0, a1, a2, a3] = self.potential_sources.clone();
        let b = self.region.bounds;
        let doc = ScenarioDoc {
            name: Some(self.name.clone()),
            description: self.description.clone(),
            a0: Some(a0),
            a1: Some(a1),
            a2: Some(a2),
            a3: Some(a3),
            psi1: self.psi1_source.clone(),
            min_coefficient: Some(self.min_coefficient),
            constants: (!self.constants.is_empty()).then(|| self.constants.clone()),
            region: Some(RegionDoc {
                t: Some(b[0]),
                x: Some(b[1]),
                y: Some(b[2]),
                z: Some(b[3]),
            }),
        };
        toml::to_string(&doc).expect("scenario documents always serialize")
    }

    /// `OutsideRegion` unless `point` lies in the sample region.
    pub fn check_point(&self, point: [f64; 4]) -> Result<()> {
        if self.region.contains(point) {
            Ok(())
        } else {
            Err(Error::OutsideRegion { point })
        }
    }
}

fn load(text: &str) -> Result<Scenario, ScenarioError> {
    let doc: ScenarioDoc =
        toml::from_str(text).map_err(|e| ScenarioError::Malformed(e.message().to_string()))?;

    let missing = |f: &str| ScenarioError::MissingField(f.to_string());
    let name = doc.name.ok_or_else(|| missing("name"))?;
    let constants = doc.constants.unwrap_or_default();

    let parse = |field: &str, text: &str| {
        parse_expression_with(text, &constants).map_err(|source| ScenarioError::Expression {
            field: field.to_string(),
            source,
        })
    };

    let sources = [
        doc.a0.ok_or_else(|| missing("A0"))?,
        doc.a1.ok_or_else(|| missing("A1"))?,
        doc.a2.ok_or_else(|| missing("A2"))?,
        doc.a3.ok_or_else(|| missing("A3"))?,
    ];
    let potentials = [
        parse("A0", &sources[0])?,
        parse("A1", &sources[1])?,
        parse("A2", &sources[2])?,
        parse("A3", &sources[3])?,
    ];
    let psi1 = doc.psi1.as_deref().map(|s| parse("psi1", s)).transpose()?;

    let region = doc.region.ok_or_else(|| missing("region"))?;
    let bounds = [
        region.t.ok_or_else(|| missing("region.t"))?,
        region.x.ok_or_else(|| missing("region.x"))?,
        region.y.ok_or_else(|| missing("region.y"))?,
        region.z.ok_or_else(|| missing("region.z"))?,
    ];
    let region = Region::new(bounds)?;

    let min_coefficient = doc.min_coefficient.unwrap_or(DEFAULT_MIN_COEFFICIENT);
    if !(min_coefficient > 0.0) {
        return Err(ScenarioError::NonPositiveMinCoefficient(min_coefficient));
    }

    Ok(Scenario {
        name,
        description: doc.description,
        potentials,
        potential_sources: sources,
        psi1,
        psi1_source: doc.psi1,
        region,
        min_coefficient,
        constants,
    })
}

/// Parse a scenario document.
pub fn load_scenario(text: &str) -> Result<Scenario> {
    Scenario::from_toml(text)
}

const CATALOG: [(&str, &str); 5] = [
    ("constant_E1", include_str!("../../scenarios/constant_E1.toml")),
    ("wave_E1", include_str!("../../scenarios/wave_E1.toml")),
    ("crossed_EH", include_str!("../../scenarios/crossed_EH.toml")),
    ("scalar_demo", include_str!("../../scenarios/scalar_demo.toml")),
    ("zero_field", include_str!("../../scenarios/zero_field.toml")),
];

/// Names of the scenarios shipped with the crate.
pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|(n, _)| *n)
}

/// Source document of a built-in scenario.
pub fn builtin_source(name: &str) -> Option<&'static str> {
    CATALOG.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn builtin(name: &str) -> Result<Scenario> {
    let src = builtin_source(name).ok_or_else(|| ScenarioError::Unknown(name.to_string()))?;
    load_scenario(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
name = "m"
A0 = "-x"
A1 = "0"
A2 = "0"
A3 = "0"
[region]
t = [0, 1]
x = [0, 1]
y = [0, 0]
z = [-1, 1]
"#;

    #[test]
    fn minimal_document_loads_with_defaults() {
        let s = load_scenario(MINIMAL).unwrap();
        assert_eq!(s.name, "m");
        assert_eq!(s.min_coefficient, DEFAULT_MIN_COEFFICIENT);
        assert!(s.psi1.is_none());
        assert!(s.region.contains([0.5, 0.5, 0.0, 0.0]));
        assert!(!s.region.contains([0.5, 0.5, 0.1, 0.0]));
    }

    #[test]
    fn missing_potential_component() {
        let doc = MINIMAL.replace("A2 = \"0\"\n", "");
        match load_scenario(&doc).unwrap_err() {
            Error::Scenario(ScenarioError::MissingField(f)) => assert_eq!(f, "A2"),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn missing_region_axis() {
        let doc = MINIMAL.replace("y = [0, 0]\n", "");
        assert!(matches!(
            load_scenario(&doc).unwrap_err(),
            Error::Scenario(ScenarioError::MissingField(f)) if f == "region.y"
        ));
    }

    #[test]
    fn inverted_bounds_are_empty() {
        let doc = MINIMAL.replace("x = [0, 1]", "x = [2, 1]");
        assert!(matches!(
            load_scenario(&doc).unwrap_err(),
            Error::Scenario(ScenarioError::EmptyRegion { axis: 'x', .. })
        ));
    }

    #[test]
    fn unknown_keys_rejected() {
        let doc = format!("colour = \"blue\"\n{MINIMAL}");
        assert!(matches!(
            load_scenario(&doc).unwrap_err(),
            Error::Scenario(ScenarioError::Malformed(_))
        ));
        let doc = MINIMAL.replace("z = [-1, 1]", "z = [-1, 1]\nw = [0, 1]");
        assert!(load_scenario(&doc).is_err());
    }

    #[test]
    fn bad_expression_names_field() {
        let doc = MINIMAL.replace("A1 = \"0\"", "A1 = \"x +\"");
        assert!(matches!(
            load_scenario(&doc).unwrap_err(),
            Error::Scenario(ScenarioError::Expression { field, .. }) if field == "A1"
        ));
    }

    #[test]
    fn non_positive_min_coefficient() {
        let doc = format!("min_coefficient = 0.0\n{MINIMAL}");
        assert!(matches!(
            load_scenario(&doc).unwrap_err(),
            Error::Scenario(ScenarioError::NonPositiveMinCoefficient(_))
        ));
    }

    #[test]
    fn document_round_trip() {
        for name in builtin_names() {
            let s = builtin(name).unwrap();
            let again = load_scenario(&s.to_toml()).unwrap();
            assert_eq!(again, s, "{name}");
        }
    }

    #[test]
    fn unknown_builtin() {
        assert!(matches!(
            builtin("nope"),
            Err(Error::Scenario(ScenarioError::Unknown(_)))
        ));
    }
}
