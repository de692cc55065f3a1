//! Generators for the classical examples, each packaged with its claimed
//! properties as checkable expectations at an explicit resolution.
//!
//! Infinite objects are truncated by a parameter (`N`, `M`) and every
//! expectation carries a tolerance or bound that depends on it. The rationals
//! have no generator: their claims are invisible at positive tolerance.

mod check;
mod generators;

use std::collections::BTreeMap;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use check::{Check, ClaimResult, Expectation};
pub use generators::{
    adversarial_resolution, gen_adversarial_from, gen_harmonic_in_02, gen_l1_family,
    gen_parallel_lines, gen_punctured_square_maxmetric, gen_two_intervals, gen_unit_left_open,
    integer_line, l1_distance,
};

use crate::covers::Cover;
use crate::error::{Error, Result};
use crate::space::FiniteMetricSpace;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NamedCover {
    pub name: String,
    pub cover: Cover,
}

impl NamedCover {
    pub fn new(name: &str, cover: Cover) -> Self {
        NamedCover {
            name: name.to_string(),
            cover,
        }
    }
}

/// A generated space with its covers and expectations. Bundles are
/// self-validating: [`run`](Self::run) is expected to pass at the declared
/// resolution.
#[derive(Clone, Debug, PartialEq)]
pub struct ExampleBundle {
    pub name: String,
    pub provenance: String,
    pub params: BTreeMap<String, Value>,
    /// Sampling step or truncation scale the tolerances derive from.
    pub resolution: f64,
    pub space: FiniteMetricSpace,
    pub covers: Vec<NamedCover>,
    pub expectations: Vec<Expectation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleReport {
    pub name: String,
    pub provenance: String,
    pub params: BTreeMap<String, Value>,
    pub resolution: f64,
    pub points: usize,
    pub claims: Vec<ClaimResult>,
    pub passed: bool,
}

impl BundleReport {
    /// `bundle/claim` ids of the failing claims.
    pub fn failures(&self) -> Vec<String> {
        self.claims
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{}/{}", self.name, c.claim))
            .collect()
    }
}

impl ExampleBundle {
    pub fn cover(&self, name: &str) -> Result<&Cover> {
        self.covers
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.cover)
            .ok_or_else(|| Error::invalid(format!("bundle {} has no cover `{name}`", self.name)))
    }

    /// Runs every expectation in order.
    pub fn run(&self) -> BundleReport {
        let mut cache = BTreeMap::new();
        let claims: Vec<ClaimResult> = self
            .expectations
            .iter()
            .map(|e| e.run(self, &mut cache))
            .collect();
        BundleReport {
            name: self.name.clone(),
            provenance: self.provenance.clone(),
            params: self.params.clone(),
            resolution: self.resolution,
            points: self.space.len(),
            passed: claims.iter().all(|c| c.pass),
            claims,
        }
    }

    /// Fault injection: replaces the named claim's tolerance with NaN so that
    /// it must fail. Accepts `claim` or `bundle/claim`; returns whether a
    /// claim matched.
    pub fn corrupt_tolerance(&mut self, claim: &str) -> bool {
        let local = claim
            .strip_prefix(&self.name)
            .and_then(|rest| rest.strip_prefix('/'))
            .unwrap_or(claim);
        let mut hit = false;
        for e in &mut self.expectations {
            if e.claim == local {
                e.tolerance = f64::NAN;
                hit = true;
            }
        }
        hit
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    /// Parameter names with their defaults.
    pub params: Vec<(&'static str, f64)>,
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "two_intervals",
            summary: "(0,1) ∪ (1,2) split cover; exact Lebesgue number shrinks like 2/N",
            params: vec![("N", 32.0)],
        },
        CatalogEntry {
            name: "harmonic_in_02",
            summary: "{1/n} in (0,2) with harmonic-gap balls; no ball is redundant",
            params: vec![("N", 32.0)],
        },
        CatalogEntry {
            name: "unit_left_open",
            summary: "(0,1] with the harmonic cover; bad sets at every sampled scale",
            params: vec![("N", 32.0)],
        },
        CatalogEntry {
            name: "l1_family",
            summary: "{e_m/n} ∪ {0} in l1; large separated sets, isolated points",
            params: vec![("M", 10.0), ("N", 10.0)],
        },
        CatalogEntry {
            name: "parallel_lines",
            summary: "two parallel segments; property P without chainability or convexity",
            params: vec![("gap", 1.0), ("halfwidth", 8.0), ("N", 64.0)],
        },
        CatalogEntry {
            name: "punctured_square",
            summary: "[-2,2]^2 minus the unit circle, max metric; Menger convex, split",
            params: vec![("N", 32.0)],
        },
        CatalogEntry {
            name: "adversarial_unit_left_open",
            summary: "adversarial cover over a separated subset of the (0,1] sample",
            params: vec![("N", 32.0), ("eps", 0.1)],
        },
        CatalogEntry {
            name: "adversarial_integers",
            summary: "adversarial cover over the integer points 1..n",
            params: vec![("n", 100.0), ("eps", 0.5)],
        },
    ]
}

fn count(params: &BTreeMap<String, f64>, key: &str) -> Result<usize> {
    let v = params[key];
    if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
        Ok(v as usize)
    } else {
        Err(Error::invalid(format!(
            "{key} must be a nonnegative integer, got {v}"
        )))
    }
}

/// Builds a catalog example, overriding any of its default parameters.
pub fn build(name: &str, overrides: &BTreeMap<String, f64>) -> Result<ExampleBundle> {
    let entry = catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnknownExample(name.to_string()))?;
    let mut p: BTreeMap<String, f64> = entry
        .params
        .iter()
        .map(|&(k, v)| (k.to_string(), v))
        .collect();
    for (k, &v) in overrides {
        match p.get_mut(k) {
            Some(slot) => *slot = v,
            None => {
                return Err(Error::invalid(format!(
                    "example {name} has no parameter `{k}`"
                )))
            }
        }
    }
    match name {
        "two_intervals" => gen_two_intervals(count(&p, "N")?),
        "harmonic_in_02" => gen_harmonic_in_02(count(&p, "N")?),
        "unit_left_open" => gen_unit_left_open(count(&p, "N")?),
        "l1_family" => gen_l1_family(count(&p, "M")?, count(&p, "N")?),
        "parallel_lines" => gen_parallel_lines(p["gap"], p["halfwidth"], count(&p, "N")?),
        "punctured_square" => gen_punctured_square_maxmetric(count(&p, "N")?),
        "adversarial_unit_left_open" => {
            let base = gen_unit_left_open(count(&p, "N")?)?;
            gen_adversarial_from(&base.space, p["eps"], "unit_left_open")
        }
        "adversarial_integers" => {
            gen_adversarial_from(&integer_line(count(&p, "n")?)?, p["eps"], "integers")
        }
        _ => unreachable!("catalog and dispatch disagree on {name}"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Small,
    Medium,
    Large,
}

impl FromStr for Scale {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Scale::Small),
            "medium" => Ok(Scale::Medium),
            "large" => Ok(Scale::Large),
            _ => Err(Error::invalid(format!("unknown scale `{s}`"))),
        }
    }
}

impl Scale {
    /// `(example, overrides)` for every catalog entry at this scale.
    pub fn presets(self) -> Vec<(&'static str, BTreeMap<String, f64>)> {
        let (n, l1, lines, square) = match self {
            Scale::Small => (32.0, 10.0, 64.0, 32.0),
            Scale::Medium => (128.0, 20.0, 128.0, 40.0),
            Scale::Large => (512.0, 40.0, 512.0, 64.0),
        };
        let p = |kv: &[(&str, f64)]| -> BTreeMap<String, f64> {
            kv.iter().map(|&(k, v)| (k.to_string(), v)).collect()
        };
        vec![
            ("two_intervals", p(&[("N", n)])),
            ("harmonic_in_02", p(&[("N", n)])),
            ("unit_left_open", p(&[("N", n)])),
            ("l1_family", p(&[("M", l1), ("N", l1)])),
            ("parallel_lines", p(&[("N", lines)])),
            ("punctured_square", p(&[("N", square)])),
            ("adversarial_unit_left_open", p(&[("N", n)])),
            ("adversarial_integers", p(&[])),
        ]
    }

    pub fn bundles(self) -> Result<Vec<ExampleBundle>> {
        self.presets()
            .iter()
            .map(|(name, params)| build(name, params))
            .collect()
    }
}
