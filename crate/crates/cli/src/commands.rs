use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};

use metriclab_core::boundedness::{covering_profile, greedy_eps_net, max_separated_subset};
use metriclab_core::chains::{
    chainability_profile, chainability_threshold, eps_chain, eps_components,
    finite_chainability_check, FiniteChainability, Through,
};
use metriclab_core::convexity::{
    menger_check, menger_gap, metric_convexity_check, property_p_check, spectrum,
};
use metriclab_core::covers::{
    covers_check, finite_subcover, lebesgue_exact, lebesgue_exact_brute, lebesgue_witness,
    local_finiteness_profile, realize, Subcover, DEFAULT_SEARCH_LIMIT,
};
use metriclab_core::examples::{build, catalog, Scale};
use metriclab_core::io::{load_cover, SpaceFile};
use metriclab_core::serde_ext::to_value;
use metriclab_core::{Error, FiniteMetricSpace, PointSet, Result};

use crate::args::{
    ChainsArgs, ConvexityArgs, ConvexityCheck, CoverArgs, ExamplesArgs, NetsArgs, VerifyArgs,
};
use crate::report::Outcome;

fn missing(flag: &str, analysis: &str) -> Error {
    Error::InvalidParameter(format!("--{analysis} requires --{flag}"))
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("result is serializable")
}

fn path_value(p: &Path) -> Value {
    Value::String(p.display().to_string())
}

fn load(path: &Path) -> Result<FiniteMetricSpace> {
    SpaceFile::read(path)?.build()
}

/// A point given by index or by label.
fn point(space: &FiniteMetricSpace, token: &str) -> Result<usize> {
    let i = match token.trim().parse::<usize>() {
        Ok(i) => i,
        Err(_) => space
            .index_of(token.trim())
            .ok_or_else(|| Error::InvalidParameter(format!("no point labelled `{token}`")))?,
    };
    space.check_index(i)?;
    Ok(i)
}

fn points(space: &FiniteMetricSpace, tokens: &[String]) -> Result<PointSet> {
    tokens.iter().map(|t| point(space, t)).collect()
}

fn target_or_all(space: &FiniteMetricSpace, tokens: &Option<Vec<String>>) -> Result<PointSet> {
    match tokens {
        Some(t) => points(space, t),
        None => Ok(space.all()),
    }
}

pub fn validate(path: &Path) -> Result<Outcome> {
    let file = SpaceFile::read(path)?;
    let violations = file.violations()?;
    let ok = violations.is_empty();
    let mut results = Map::new();
    if ok {
        let space = file.build()?;
        results.insert("points".into(), json!(space.len()));
        results.insert("axiom_tol".into(), to_value(space.axiom_tol()));
    }
    results.insert("valid".into(), json!(ok));
    results.insert("violations".into(), to_json(&violations));
    let inputs = Map::from_iter([("space".to_string(), path_value(path))]);
    Ok(Outcome::new(inputs, Value::Object(results), ok))
}

pub fn chains(a: &ChainsArgs) -> Result<Outcome> {
    let space = load(&a.space)?;
    let mut inputs = Map::from_iter([("space".to_string(), path_value(&a.space))]);
    if let Some(eps) = a.eps {
        inputs.insert("eps".into(), json!(eps));
    }
    let results = if a.threshold {
        json!({ "threshold": to_value(chainability_threshold(&space)) })
    } else if let Some(xy) = &a.chain {
        let eps = a.eps.ok_or_else(|| missing("eps", "chain"))?;
        let (x, y) = (point(&space, &xy[0])?, point(&space, &xy[1])?);
        inputs.insert("chain".into(), json!([x, y]));
        json!({ "chain": to_json(&eps_chain(&space, x, y, eps)?) })
    } else if a.components {
        let eps = a.eps.ok_or_else(|| missing("eps", "components"))?;
        let parts = eps_components(&space, eps)?;
        json!({ "count": parts.len(), "components": parts })
    } else if a.profile {
        let list = a
            .eps_list
            .as_ref()
            .ok_or_else(|| missing("eps-list", "profile"))?;
        inputs.insert("eps_list".into(), json!(list));
        to_json(&chainability_profile(&space, list)?)
    } else {
        let eps = a.eps.ok_or_else(|| missing("eps", "finite"))?;
        let m = a.m.ok_or_else(|| missing("m", "finite"))?;
        let centers = points(
            &space,
            a.centers
                .as_ref()
                .ok_or_else(|| missing("centers", "finite"))?,
        )?;
        let target = target_or_all(&space, &a.target)?;
        let through = if a.target_only {
            Through::TargetOnly
        } else {
            Through::WholeSpace
        };
        inputs.insert("m".into(), json!(m));
        inputs.insert("centers".into(), to_json(&centers));
        inputs.insert("target".into(), to_json(&target));
        inputs.insert("through".into(), to_json(&through));
        let outcome = finite_chainability_check(&space, &target, eps, m, &centers, through)?;
        let ok = matches!(outcome, FiniteChainability::Certified(_));
        return Ok(Outcome::new(inputs, to_json(&outcome), ok));
    };
    Ok(Outcome::new(inputs, results, true))
}

pub fn nets(a: &NetsArgs) -> Result<Outcome> {
    let space = load(&a.space)?;
    let target = target_or_all(&space, &a.target)?;
    let mut inputs = Map::from_iter([("space".to_string(), path_value(&a.space))]);
    if a.target.is_some() {
        inputs.insert("target".into(), to_json(&target));
    }
    let results = if a.profile {
        let list = a
            .eps_list
            .as_ref()
            .ok_or_else(|| missing("eps-list", "profile"))?;
        inputs.insert("eps_list".into(), json!(list));
        json!({ "profile": to_json(&covering_profile(&space, &target, list)?) })
    } else {
        let eps = a
            .eps
            .ok_or_else(|| missing("eps", if a.net { "net" } else { "packing" }))?;
        inputs.insert("eps".into(), json!(eps));
        if a.net {
            let net = greedy_eps_net(&space, &target, eps)?;
            json!({ "size": net.size(), "net": to_json(&net) })
        } else {
            let w = max_separated_subset(&space, &target, eps)?;
            json!({ "size": w.size(), "separated": to_json(&w) })
        }
    };
    Ok(Outcome::new(inputs, results, true))
}

pub fn cover(a: &CoverArgs) -> Result<Outcome> {
    let space = load(&a.space)?;
    let cover = realize(&space, &load_cover(&a.cover)?)?;
    let mut inputs = Map::from_iter([
        ("space".to_string(), path_value(&a.space)),
        ("cover".to_string(), path_value(&a.cover)),
    ]);
    if a.check {
        let miss = covers_check(&cover);
        let results = json!({ "covers": miss.is_none(), "uncovered": to_json(&cover.uncovered()) });
        return Ok(Outcome::new(inputs, results, miss.is_none()));
    }
    let results = if a.lebesgue {
        let report = if a.brute {
            lebesgue_exact_brute(&space, &cover)?
        } else {
            lebesgue_exact(&space, &cover, a.limit.unwrap_or(DEFAULT_SEARCH_LIMIT))?
        };
        to_json(&report)
    } else if a.witness {
        let alpha = a.alpha.ok_or_else(|| missing("alpha", "witness"))?;
        inputs.insert("alpha".into(), json!(alpha));
        let w = lebesgue_witness(&space, &cover, alpha)?;
        let diameter = match &w {
            Some(set) => to_value(space.diameter(set)?),
            None => Value::Null,
        };
        json!({ "witness": to_json(&w), "diameter": diameter })
    } else if a.local {
        let delta = a.delta.ok_or_else(|| missing("delta", "local"))?;
        inputs.insert("delta".into(), json!(delta));
        to_json(&local_finiteness_profile(&space, &cover, delta)?)
    } else {
        let set = points(
            &space,
            a.set.as_ref().ok_or_else(|| missing("set", "subcover"))?,
        )?;
        inputs.insert("set".into(), to_json(&set));
        let sub = finite_subcover(&space, &cover, &set)?;
        let ok = matches!(sub, Subcover::Found { .. });
        return Ok(Outcome::new(inputs, to_json(&sub), ok));
    };
    Ok(Outcome::new(inputs, results, true))
}

pub fn convexity(a: &ConvexityArgs) -> Result<Outcome> {
    let space = load(&a.space)?;
    let mut inputs = Map::from_iter([("space".to_string(), path_value(&a.space))]);
    if let Some(x) = &a.spectrum {
        let x = point(&space, x)?;
        inputs.insert("basepoint".into(), json!(x));
        return Ok(Outcome::new(inputs, to_json(&spectrum(&space, x)?), true));
    }
    let tol = a.tol.ok_or_else(|| {
        missing(
            "tol",
            if a.check.is_some() {
                "check"
            } else {
                "menger-gap"
            },
        )
    })?;
    inputs.insert("tol".into(), json!(tol));
    if let Some(xy) = &a.menger_gap {
        let (x, y) = (point(&space, &xy[0])?, point(&space, &xy[1])?);
        inputs.insert("pair".into(), json!([x, y]));
        let gap = menger_gap(&space, x, y, tol)?;
        let results = json!({ "covered": gap.is_none(), "uncovered_radius": gap });
        return Ok(Outcome::new(inputs, results, gap.is_none()));
    }
    let kind = a.check.expect("clap enforces one analysis");
    let report = match kind {
        ConvexityCheck::PropertyP => property_p_check(&space, tol)?,
        ConvexityCheck::Menger => menger_check(&space, tol)?,
        ConvexityCheck::Metric => metric_convexity_check(&space, tol)?,
    };
    let ok = report.holds;
    Ok(Outcome::new(inputs, to_json(&report), ok))
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                Error::InvalidParameter(format!("expected key=value, got `{kv}`"))
            })?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::InvalidParameter(format!("`{v}` is not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

pub fn examples(a: &ExamplesArgs) -> Result<Outcome> {
    if a.list {
        return Ok(Outcome::new(
            Map::new(),
            json!({ "examples": to_json(&catalog()) }),
            true,
        ));
    }
    let name = a.run.as_deref().expect("clap enforces one mode");
    let params = parse_params(&a.params)?;
    let inputs = Map::from_iter([
        ("example".to_string(), json!(name)),
        ("params".to_string(), json!(params)),
    ]);
    let report = build(name, &params)?.run();
    let ok = report.passed;
    Ok(Outcome::new(inputs, to_json(&report), ok))
}

pub fn verify_paper(a: &VerifyArgs) -> Result<Outcome> {
    let scale = if a.large {
        Scale::Large
    } else if a.medium {
        Scale::Medium
    } else {
        Scale::Small
    };
    let mut bundles = scale.bundles()?;
    for claim in &a.corrupt_tolerance {
        if !bundles.iter_mut().any(|b| b.corrupt_tolerance(claim)) {
            return Err(Error::InvalidParameter(format!("no claim named `{claim}`")));
        }
    }
    let reports: Vec<_> = bundles.iter().map(|b| b.run()).collect();
    let failures: Vec<String> = reports.iter().flat_map(|r| r.failures()).collect();
    for r in &reports {
        for c in &r.claims {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            eprintln!("{mark}  {}/{}", r.name, c.claim);
        }
    }
    let mut inputs = Map::from_iter([("scale".to_string(), to_json(&scale))]);
    if !a.corrupt_tolerance.is_empty() {
        inputs.insert("corrupt_tolerance".into(), json!(a.corrupt_tolerance));
    }
    let results = json!({ "bundles": to_json(&reports), "failures": failures });
    Ok(Outcome::new(inputs, results, failures.is_empty()))
}
