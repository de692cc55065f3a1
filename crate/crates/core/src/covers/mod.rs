//! Covers of a target set, their realization against a space, and the
//! Lebesgue-number machinery built on top.
//!
//! A [`Cover`] is symbolic: explicit sets, complements, balls and truncated
//! parametric ball families. [`realize`] evaluates it into a
//! [`RealizedCover`] whose members are concrete point sets; every analysis
//! works on the realized form.

mod lebesgue;
mod local;

pub use lebesgue::{
    lebesgue_ball_bound, lebesgue_exact, lebesgue_exact_brute, lebesgue_witness, LebesgueMethod,
    LebesgueReport, DEFAULT_SEARCH_LIMIT,
};
pub use local::{finite_subcover, local_finiteness_profile, LocalFinitenessProfile, Subcover};

use serde::{Deserialize, Serialize};

use crate::boundedness::SeparationWitness;
use crate::error::{Error, Result};
use crate::space::{FiniteMetricSpace, PointSet};

fn default_true() -> bool {
    true
}

fn default_one() -> f64 {
    1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ElementKind {
    Ball {
        center: usize,
        radius: f64,
        #[serde(default = "default_true")]
        open: bool,
    },
    Explicit {
        points: PointSet,
    },
    Complement {
        points: PointSet,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverElement {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(flatten)]
    pub kind: ElementKind,
}

impl CoverElement {
    pub fn ball(center: usize, radius: f64) -> Self {
        CoverElement {
            label: None,
            kind: ElementKind::Ball {
                center,
                radius,
                open: true,
            },
        }
    }

    pub fn explicit(points: impl IntoIterator<Item = usize>) -> Self {
        CoverElement {
            label: None,
            kind: ElementKind::Explicit {
                points: PointSet::new(points),
            },
        }
    }

    pub fn complement(points: impl IntoIterator<Item = usize>) -> Self {
        CoverElement {
            label: None,
            kind: ElementKind::Complement {
                points: PointSet::new(points),
            },
        }
    }

    pub fn labeled(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }
}

/// Radius of the `n`-th ball (1-based) in a parametric family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RadiusFormula {
    /// `c`
    Constant { c: f64 },
    /// `c * (1/n - 1/(n+1))`
    Harmonic {
        #[serde(default = "default_one")]
        c: f64,
    },
    /// `c / n`
    Scaled { c: f64 },
}

impl RadiusFormula {
    pub fn radius(self, n: usize) -> f64 {
        let nf = n as f64;
        match self {
            RadiusFormula::Constant { c } => c,
            RadiusFormula::Harmonic { c } => c * (1.0 / nf - 1.0 / (nf + 1.0)),
            RadiusFormula::Scaled { c } => c / nf,
        }
    }
}

/// Open balls `B(centers[n-1], radius(n))` for `n = 1..=range`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParametricBallFamily {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub range: usize,
    pub centers: Vec<usize>,
    pub radius: RadiusFormula,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    /// Set being covered; `None` means every point of the space.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<PointSet>,
    #[serde(default)]
    pub elements: Vec<CoverElement>,
    #[serde(default)]
    pub families: Vec<ParametricBallFamily>,
}

impl Cover {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_target(mut self, target: PointSet) -> Self {
        self.target = Some(target);
        self
    }

    pub fn element(mut self, e: CoverElement) -> Self {
        self.elements.push(e);
        self
    }

    pub fn family(mut self, f: ParametricBallFamily) -> Self {
        self.families.push(f);
        self
    }

    /// Largest family truncation, if any family is present.
    pub fn truncation(&self) -> Option<usize> {
        self.families.iter().map(|f| f.range).max()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Member {
    pub label: String,
    pub set: PointSet,
    mask: Vec<bool>,
}

impl Member {
    fn new(label: String, set: PointSet, n: usize) -> Self {
        let mask = set.mask(n);
        Member { label, set, mask }
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.mask[i]
    }
}

/// A cover evaluated against a concrete space. Member order is elements
/// first, then family members `n = 1..=N`; that order breaks every tie.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizedCover {
    pub members: Vec<Member>,
    pub target: PointSet,
    pub truncation: Option<usize>,
}

impl RealizedCover {
    /// Builds a realized cover directly from explicit member sets.
    pub fn from_sets(
        space: &FiniteMetricSpace,
        target: PointSet,
        sets: Vec<(String, PointSet)>,
    ) -> Result<Self> {
        if target.is_empty() {
            return Err(Error::EmptySet);
        }
        space.check_set(&target)?;
        let n = space.len();
        let members = sets
            .into_iter()
            .map(|(label, set)| {
                space.check_set(&set)?;
                Ok(Member::new(label, set, n))
            })
            .collect::<Result<_>>()?;
        Ok(RealizedCover {
            members,
            target,
            truncation: None,
        })
    }

    pub fn labels(&self) -> Vec<&str> {
        self.members.iter().map(|m| m.label.as_str()).collect()
    }

    /// Same members, different target.
    pub fn retarget(&self, target: PointSet) -> Result<Self> {
        if target.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(RealizedCover {
            members: self.members.clone(),
            target,
            truncation: self.truncation,
        })
    }

    pub(crate) fn containing(&self, p: usize) -> Vec<usize> {
        (0..self.members.len())
            .filter(|&m| self.members[m].contains(p))
            .collect()
    }

    /// Target points that lie in no member.
    pub fn uncovered(&self) -> PointSet {
        self.target
            .iter()
            .filter(|&p| !self.members.iter().any(|m| m.contains(p)))
            .collect()
    }
}

fn check_radius(r: f64, what: &str) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{what}: radius must be > 0, got {r}"
        )))
    }
}

/// Evaluates every member of `cover` against `space`.
pub fn realize(space: &FiniteMetricSpace, cover: &Cover) -> Result<RealizedCover> {
    let n = space.len();
    let target = cover.target.clone().unwrap_or_else(|| space.all());
    if target.is_empty() {
        return Err(Error::invalid("realized target is empty"));
    }
    space.check_set(&target)?;

    let mut members = Vec::new();
    for (i, e) in cover.elements.iter().enumerate() {
        let label = e.label.clone().unwrap_or_else(|| format!("e{i}"));
        let set = match &e.kind {
            ElementKind::Ball {
                center,
                radius,
                open,
            } => {
                check_radius(*radius, &label)?;
                space.ball(*center, *radius, !open)?
            }
            ElementKind::Explicit { points } => {
                space.check_set(points)?;
                points.clone()
            }
            ElementKind::Complement { points } => {
                space.check_set(points)?;
                (0..n).filter(|&j| !points.contains(j)).collect()
            }
        };
        members.push(Member::new(label, set, n));
    }
    for (f_idx, f) in cover.families.iter().enumerate() {
        if f.range == 0 {
            return Err(Error::invalid("family range must be >= 1"));
        }
        if f.centers.len() < f.range {
            return Err(Error::invalid(format!(
                "family needs {} centers, got {}",
                f.range,
                f.centers.len()
            )));
        }
        let base = f.label.clone().unwrap_or_else(|| format!("f{f_idx}"));
        for k in 1..=f.range {
            let label = format!("{base}[{k}]");
            let r = f.radius.radius(k);
            check_radius(r, &label)?;
            let set = space.ball(f.centers[k - 1], r, false)?;
            members.push(Member::new(label, set, n));
        }
    }
    Ok(RealizedCover {
        members,
        target,
        truncation: cover.truncation(),
    })
}

/// First target point not covered by any member, or `None` if the members
/// cover the target.
pub fn covers_check(cover: &RealizedCover) -> Option<usize> {
    cover
        .target
        .iter()
        .find(|&p| !cover.members.iter().any(|m| m.contains(p)))
}

/// The cover `{B(x_n, eps/(4n))} ∪ {X \ S}` over the whole space, where
/// `x_1, x_2, ...` are the witness points in index order and `S` is the
/// witness set.
pub fn adversarial_cover(space: &FiniteMetricSpace, witness: &SeparationWitness) -> Result<Cover> {
    if !(witness.eps > 0.0) {
        return Err(Error::invalid("separation scale must be > 0"));
    }
    if witness.indices.is_empty() {
        return Err(Error::EmptySet);
    }
    // re-validate: the witness may have been deserialized
    SeparationWitness::new(space, witness.eps, witness.indices.clone())?;
    let centers = witness.indices.as_slice().to_vec();
    Ok(Cover::new()
        .with_target(space.all())
        .family(ParametricBallFamily {
            label: Some("B".into()),
            range: centers.len(),
            centers: centers.clone(),
            radius: RadiusFormula::Scaled {
                c: witness.eps / 4.0,
            },
        })
        .element(CoverElement::complement(centers).labeled("X-S")))
}
