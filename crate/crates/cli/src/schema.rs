//! Versioned JSON input and output documents.

use std::path::Path;

use rigidnet::formation::AgentState;
use rigidnet::graph::{AngleIndexSet, AngleTriple, Edge, Graph, Vertex};
use rigidnet::rigidity::Framework;
use rigidnet::Vec2;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Framework document, accepted by `analyze` and `gais` and written by
/// `randgen`.  `positions` may be omitted for `analyze --generic`.
#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkFile {
    #[serde(default = "version")]
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    pub n: usize,
    pub edges: Vec<Edge>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<Vec2>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocalizeFile {
    #[serde(default = "version")]
    pub schema_version: u32,
    #[serde(default)]
    pub kind: Option<String>,
    pub n: usize,
    pub edges: Vec<Edge>,
    pub positions: Vec<Vec2>,
    pub anchors: Vec<Vertex>,
    /// Angle index set to use instead of the augmented minimal one.
    #[serde(default)]
    pub triples: Option<Vec<AngleTriple>>,
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub sample_every: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormationFile {
    #[serde(default = "version")]
    pub schema_version: u32,
    #[serde(default)]
    pub kind: Option<String>,
    pub n: usize,
    pub edges: Vec<Edge>,
    /// Target shape.
    pub positions: Vec<Vec2>,
    /// Explicit initial agent states; seeded random otherwise.
    #[serde(default)]
    pub initial: Option<Vec<AgentState>>,
    #[serde(default)]
    pub init_box: Option<(f64, f64)>,
    #[serde(default)]
    pub init_attitude_range: Option<(f64, f64)>,
    #[serde(default)]
    pub step: Option<f64>,
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub sample_every: Option<usize>,
}

fn version() -> u32 {
    SCHEMA_VERSION
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn check_header(version: u32, kind: Option<&str>, accepted: &[&str]) -> Result<(), CliError> {
    if version != SCHEMA_VERSION {
        return Err(CliError::Input(format!(
            "unsupported schema_version {version}, expected {SCHEMA_VERSION}"
        )));
    }
    match kind {
        Some(k) if !accepted.contains(&k) => Err(CliError::Input(format!(
            "file kind {k:?} is not accepted here (expected one of {accepted:?})"
        ))),
        _ => Ok(()),
    }
}

pub fn graph(n: usize, edges: &[Edge]) -> Result<Graph, CliError> {
    if n == 0 {
        return Err(CliError::Input("n must be positive".into()));
    }
    Ok(Graph::new(n, edges.iter().map(|e| (e.0, e.1)))?)
}

pub fn framework(n: usize, edges: &[Edge], positions: &[Vec2]) -> Result<Framework, CliError> {
    Ok(Framework::new(graph(n, edges)?, positions.to_vec())?)
}

pub fn triples(g: &Graph, t: &[AngleTriple]) -> Result<AngleIndexSet, CliError> {
    Ok(AngleIndexSet::new(g.clone(), t.iter().copied())?)
}

impl FrameworkFile {
    pub fn from_framework(fw: &Framework, kind: &str) -> Self {
        FrameworkFile {
            schema_version: SCHEMA_VERSION,
            kind: Some(kind.into()),
            n: fw.n(),
            edges: fw.graph().edges().collect(),
            positions: Some(fw.config().to_vec()),
        }
    }
}
