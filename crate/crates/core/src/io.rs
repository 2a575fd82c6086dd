//! JSON forms of models, scenarios and relational models, using point names.
//!
//! ```json
//! {"points": ["a", "b"], "opens": [[], ["a"], ["a", "b"]], "valuation": {"p": ["a"]}}
//! {"x": "b", "U": ["a", "b"], "V": ["a"]}
//! {"points": ["x", "y"], "R": [["x", "y"], ["y", "y"]], "valuation": {"p": ["y"]}}
//! ```
//!
//! A model may give `subbasis` instead of `opens`; the topology is then the
//! one it generates.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::models::{ModelError, Scenario, SubsetModel};
use crate::relational::{Frame, RelationalError, RelationalModel};
use crate::topology::{TopoSpace, TopologyError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Relational(#[from] RelationalError),
    #[error("model needs exactly one of \"opens\" and \"subbasis\"")]
    OpensOrSubbasis,
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opens: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subbasis: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl ModelSpec {
    pub fn build(&self) -> Result<SubsetModel, IoError> {
        let space = match (&self.opens, &self.subbasis) {
            (Some(opens), None) => TopoSpace::validate(&self.points, opens)?,
            (None, Some(sets)) => TopoSpace::from_subbasis(&self.points, sets)?,
            _ => return Err(IoError::OpensOrSubbasis),
        };
        Ok(SubsetModel::with_named_valuation(space, &self.valuation)?)
    }

    /// The spec of `m`, listing every open set.
    pub fn of(m: &SubsetModel) -> Self {
        let space = m.space();
        ModelSpec {
            points: space.points().to_vec(),
            opens: Some(space.open_names()),
            subbasis: None,
            valuation: m.valuation().iter().map(|(p, s)| (p.clone(), space.names_of(*s))).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub x: String,
    #[serde(rename = "U")]
    pub u: Vec<String>,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<String>>,
}

impl ScenarioSpec {
    /// Resolves names against `space`; admissibility is checked on evaluation.
    pub fn resolve(&self, space: &TopoSpace) -> Result<Scenario, IoError> {
        let x = space.index_of(&self.x).ok_or_else(|| IoError::UnknownPoint(self.x.clone()))?;
        let u = space.set_of(&self.u)?;
        let v = self.v.as_ref().map(|v| space.set_of(v)).transpose()?;
        Ok(Scenario { x, u, v })
    }

    pub fn of(s: &Scenario, space: &TopoSpace) -> Self {
        ScenarioSpec {
            x: space.points()[s.x].clone(),
            u: space.names_of(s.u),
            v: s.v.map(|v| space.names_of(v)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameSpec {
    pub points: Vec<String>,
    #[serde(rename = "R")]
    pub r: Vec<(String, String)>,
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

impl FrameSpec {
    pub fn build(&self) -> Result<RelationalModel, IoError> {
        let frame = Frame::new(&self.points, &self.r)?;
        Ok(RelationalModel::with_named_valuation(frame, &self.valuation)?)
    }

    pub fn of(m: &RelationalModel) -> Self {
        let f = m.frame();
        let names = |s: crate::PointSet| s.iter().map(|i| f.points()[i].clone()).collect();
        FrameSpec {
            points: f.points().to_vec(),
            r: f.pairs(),
            valuation: m.valuation().iter().map(|(p, s)| (p.clone(), names(*s))).collect(),
        }
    }
}

pub fn model_from_json(text: &str) -> Result<SubsetModel, IoError> {
    serde_json::from_str::<ModelSpec>(text)?.build()
}

pub fn scenario_from_json(text: &str, space: &TopoSpace) -> Result<Scenario, IoError> {
    serde_json::from_str::<ScenarioSpec>(text)?.resolve(space)
}

pub fn frame_from_json(text: &str) -> Result<RelationalModel, IoError> {
    serde_json::from_str::<FrameSpec>(text)?.build()
}
