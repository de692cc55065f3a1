//! JSON file formats for spaces and covers.
//!
//! A space file holds either an explicit matrix
//! `{"labels": [...], "matrix": [[...]]}` or coordinates
//! `{"points": [[...]], "metric": "euclidean" | "l1" | "chebyshev"}`, with an
//! optional `"axiom_tol"`. Loading always validates. Cover files use the
//! serde form of [`Cover`](crate::covers::Cover).

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::covers::Cover;
use crate::error::{Error, Result};
use crate::space::{validate_matrix, FiniteMetricSpace, Metric, MetricViolation};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceFile {
    Matrix {
        labels: Vec<String>,
        matrix: Vec<Vec<f64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axiom_tol: Option<f64>,
    },
    Points {
        points: Vec<Vec<f64>>,
        metric: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        axiom_tol: Option<f64>,
    },
}

impl SpaceFile {
    pub fn parse(json: &str) -> Result<Self> {
        Ok(serde_json::from_str(json)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Matrix form of an existing space.
    pub fn from_space(space: &FiniteMetricSpace) -> Self {
        SpaceFile::Matrix {
            labels: space.labels().to_vec(),
            matrix: space.matrix(),
            axiom_tol: Some(space.axiom_tol()),
        }
    }

    pub fn build(self) -> Result<FiniteMetricSpace> {
        match self {
            SpaceFile::Matrix {
                labels,
                matrix,
                axiom_tol,
            } => FiniteMetricSpace::from_matrix(labels, matrix, axiom_tol),
            SpaceFile::Points {
                points,
                metric,
                labels,
                axiom_tol,
            } => {
                let metric: Metric = metric.parse()?;
                FiniteMetricSpace::from_points(&points, metric, axiom_tol, labels)
            }
        }
    }

    /// Axiom violations without building the space. Coordinate files are
    /// metric by construction and report none.
    pub fn violations(&self) -> Result<Vec<MetricViolation>> {
        match self {
            SpaceFile::Matrix {
                labels,
                matrix,
                axiom_tol,
            } => validate_matrix(labels, matrix, *axiom_tol),
            SpaceFile::Points { .. } => self.clone().build().map(|_| Vec::new()),
        }
    }
}

pub fn load_space(path: impl AsRef<Path>) -> Result<FiniteMetricSpace> {
    SpaceFile::read(path)?.build()
}

pub fn parse_cover(json: &str) -> Result<Cover> {
    Ok(serde_json::from_str(json)?)
}

pub fn load_cover(path: impl AsRef<Path>) -> Result<Cover> {
    parse_cover(&fs::read_to_string(path)?)
}

pub fn write_space(space: &FiniteMetricSpace, path: impl AsRef<Path>) -> Result<()> {
    let json = serde_json::to_string(&SpaceFile::from_space(space))?;
    fs::write(path, json).map_err(Error::from)
}
