use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::ExampleBundle;
use crate::boundedness::max_separated_subset;
use crate::chains::eps_components;
use crate::convexity::{menger_check, metric_convexity_check, property_p_check};
use crate::covers::{
    covers_check, finite_subcover, lebesgue_exact, lebesgue_witness, local_finiteness_profile,
    realize, RealizedCover, DEFAULT_SEARCH_LIMIT,
};
use crate::error::{Error, Result};
use crate::serde_ext::{self, to_value};
use crate::space::PointSet;

/// One checker call with its expected outcome. Covers are referenced by
/// name; `target` overrides the cover's own target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Check {
    /// `covers_check` finds no uncovered target point.
    Covers { cover: String },
    /// The uncovered target points are exactly `expected`.
    UncoveredEquals { cover: String, expected: PointSet },
    /// Every family member is the singleton of its own center.
    OwnCenterOnly { cover: String },
    /// `finite_subcover` of `set` succeeds with exactly `expected` members.
    SubcoverSize {
        cover: String,
        set: PointSet,
        expected: usize,
    },
    /// `min - tolerance <= lebesgue_exact <= max + tolerance`.
    LebesgueExact {
        cover: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<PointSet>,
        #[serde(with = "serde_ext")]
        min: f64,
        #[serde(with = "serde_ext")]
        max: f64,
    },
    /// `lebesgue_witness` finds a bad set for every alpha.
    Witnesses {
        cover: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<PointSet>,
        alphas: Vec<f64>,
    },
    /// Incidence of `delta`-balls is at most `max`.
    LocalFiniteness {
        cover: String,
        delta: f64,
        max: usize,
    },
    /// The index-order maximal `eps`-separated subset has `>= min_size` points.
    SeparatedAtLeast { eps: f64, min_size: usize },
    /// Every point has isolation `> tolerance`.
    IsolationPositive,
    /// At least `min` ε-components.
    ComponentsAtLeast { eps: f64, min: usize },
    /// No ε-component meets both `a` and `b`.
    SeparatesSets { eps: f64, a: PointSet, b: PointSet },
    /// Property P holds at `tol = tolerance`.
    PropertyP,
    /// Menger convexity holds at `tol = tolerance`.
    Menger,
    /// Metric convexity fails at `tol = tolerance` on `pair`.
    MetricConvexityFails { pair: [usize; 2] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub claim: String,
    pub check: Check,
    /// Slack or checker tolerance derived from the sampling resolution.
    #[serde(with = "serde_ext")]
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub claim: String,
    pub pass: bool,
    pub observed: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Realized covers keyed by `(cover name, target override)`.
pub(super) type CoverCache = BTreeMap<(String, Option<PointSet>), RealizedCover>;

impl Expectation {
    pub fn new(claim: impl Into<String>, check: Check, tolerance: f64) -> Self {
        Expectation {
            claim: claim.into(),
            check,
            tolerance,
        }
    }

    pub(super) fn run(&self, bundle: &ExampleBundle, cache: &mut CoverCache) -> ClaimResult {
        let outcome = if self.tolerance.is_finite() && self.tolerance >= 0.0 {
            self.evaluate(bundle, cache)
        } else {
            Err(Error::invalid(format!(
                "tolerance must be finite and >= 0, got {}",
                self.tolerance
            )))
        };
        match outcome {
            Ok((pass, observed)) => ClaimResult {
                claim: self.claim.clone(),
                pass,
                observed,
                error: None,
            },
            Err(e) => ClaimResult {
                claim: self.claim.clone(),
                pass: false,
                observed: Value::Null,
                error: Some(e.to_string()),
            },
        }
    }

    fn evaluate(&self, bundle: &ExampleBundle, cache: &mut CoverCache) -> Result<(bool, Value)> {
        let space = &bundle.space;
        let tol = self.tolerance;
        Ok(match &self.check {
            Check::Covers { cover } => {
                let r = realized(bundle, cache, cover, None)?;
                let miss = covers_check(r);
                (miss.is_none(), json!({ "uncovered": miss }))
            }
            Check::UncoveredEquals { cover, expected } => {
                let r = realized(bundle, cache, cover, None)?;
                let got = r.uncovered();
                (&got == expected, json!({ "uncovered_count": got.len() }))
            }
            Check::OwnCenterOnly { cover } => {
                let c = bundle.cover(cover)?;
                let r = realized(bundle, cache, cover, None)?;
                let centers: Vec<usize> = c
                    .families
                    .iter()
                    .flat_map(|f| f.centers.iter().take(f.range).copied())
                    .collect();
                let offset = c.elements.len();
                let bad: Vec<&str> = centers
                    .iter()
                    .enumerate()
                    .filter(|&(k, &ctr)| r.members[offset + k].set != PointSet::singleton(ctr))
                    .map(|(k, _)| r.members[offset + k].label.as_str())
                    .collect();
                (
                    bad.is_empty(),
                    json!({ "balls": centers.len(), "offending": bad }),
                )
            }
            Check::SubcoverSize {
                cover,
                set,
                expected,
            } => {
                let r = realized(bundle, cache, cover, None)?;
                let size = finite_subcover(space, r, set)?.size();
                (size == Some(*expected), json!({ "size": size }))
            }
            Check::LebesgueExact {
                cover,
                target,
                min,
                max,
            } => {
                let r = realized(bundle, cache, cover, target.as_ref())?;
                let report = lebesgue_exact(space, r, DEFAULT_SEARCH_LIMIT)?;
                let exact = report
                    .exact
                    .ok_or(Error::SearchLimit(DEFAULT_SEARCH_LIMIT))?;
                let pass = exact >= min - tol && exact <= max + tol;
                (
                    pass,
                    json!({ "exact": to_value(exact), "ball_bound": to_value(report.ball_bound) }),
                )
            }
            Check::Witnesses {
                cover,
                target,
                alphas,
            } => {
                let r = realized(bundle, cache, cover, target.as_ref())?;
                let mut missing = Vec::new();
                let mut diameters = Vec::new();
                for &alpha in alphas {
                    match lebesgue_witness(space, r, alpha)? {
                        Some(w) => diameters.push(space.diameter(&w)?),
                        None => missing.push(alpha),
                    }
                }
                (
                    missing.is_empty(),
                    json!({ "alphas": alphas, "witness_diameters": diameters, "missing": missing }),
                )
            }
            Check::LocalFiniteness { cover, delta, max } => {
                let r = realized(bundle, cache, cover, None)?;
                let p = local_finiteness_profile(space, r, *delta)?;
                (p.max <= *max, json!({ "max": p.max, "argmax": p.argmax }))
            }
            Check::SeparatedAtLeast { eps, min_size } => {
                let w = max_separated_subset(space, &space.all(), *eps)?;
                (w.size() >= *min_size, json!({ "size": w.size() }))
            }
            Check::IsolationPositive => {
                let mut least = f64::INFINITY;
                for i in 0..space.len() {
                    least = least.min(space.isolation(i)?);
                }
                (least > tol, json!({ "min_isolation": to_value(least) }))
            }
            Check::ComponentsAtLeast { eps, min } => {
                let parts = eps_components(space, *eps)?;
                (parts.len() >= *min, json!({ "components": parts.len() }))
            }
            Check::SeparatesSets { eps, a, b } => {
                space.check_set(a)?;
                space.check_set(b)?;
                let parts = eps_components(space, *eps)?;
                let mixed = parts
                    .iter()
                    .filter(|p| {
                        p.iter().any(|&i| a.contains(i)) && p.iter().any(|&i| b.contains(i))
                    })
                    .count();
                (
                    mixed == 0,
                    json!({ "components": parts.len(), "mixed": mixed }),
                )
            }
            Check::PropertyP => {
                let r = property_p_check(space, tol)?;
                (r.holds, json!({ "violations": r.violations.len() }))
            }
            Check::Menger => {
                let r = menger_check(space, tol)?;
                (r.holds, json!({ "violations": r.violations.len() }))
            }
            Check::MetricConvexityFails { pair } => {
                space.check_index(pair[0])?;
                space.check_index(pair[1])?;
                let r = metric_convexity_check(space, tol)?;
                let hit = r.violations.iter().find(|v| v.points[..] == pair[..]);
                (
                    hit.is_some(),
                    json!({
                        "violations": r.violations.len(),
                        "defect": hit.map(|v| to_value(v.value)),
                    }),
                )
            }
        })
    }
}

fn realized<'a>(
    bundle: &ExampleBundle,
    cache: &'a mut CoverCache,
    name: &str,
    target: Option<&PointSet>,
) -> Result<&'a RealizedCover> {
    let key = (name.to_string(), target.cloned());
    if !cache.contains_key(&key) {
        let base = (name.to_string(), None);
        if !cache.contains_key(&base) {
            let r = realize(&bundle.space, bundle.cover(name)?)?;
            cache.insert(base.clone(), r);
        }
        if let Some(t) = target {
            bundle.space.check_set(t)?;
            let r = cache[&base].retarget(t.clone())?;
            cache.insert(key.clone(), r);
        }
    }
    Ok(&cache[&key])
}
