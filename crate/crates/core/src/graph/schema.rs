//! JSON graph description documents.
//!
//! ```json
//! {"vertices": [{"id": "v1", "condition": "standard"},
//!               {"id": "v2", "condition": {"robin": 0.5}}],
//!  "edges": [{"id": "e1", "from": "v1", "to": "v2", "length": 1.0, "potential": 0.0}]}
//! ```
//!
//! Unknown keys are rejected; `potential` defaults to 0.

use serde::{Deserialize, Serialize};

use super::{EdgeRecord, MetricGraph, VertexCondition, VertexIx, VertexRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphDoc {
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexDoc {
    pub id: String,
    pub condition: ConditionDoc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ConditionDoc {
    Standard,
    Dirichlet,
    Robin(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub from: String,
    pub to: String,
    pub length: f64,
    #[serde(default)]
    pub potential: f64,
}

impl From<ConditionDoc> for VertexCondition {
    fn from(c: ConditionDoc) -> Self {
        match c {
            ConditionDoc::Standard => VertexCondition::Standard,
            ConditionDoc::Dirichlet => VertexCondition::Dirichlet,
            ConditionDoc::Robin(a) => VertexCondition::Robin(a),
        }
    }
}

impl From<VertexCondition> for ConditionDoc {
    fn from(c: VertexCondition) -> Self {
        match c {
            VertexCondition::Standard => ConditionDoc::Standard,
            VertexCondition::Dirichlet => ConditionDoc::Dirichlet,
            VertexCondition::Robin(a) => ConditionDoc::Robin(a),
        }
    }
}

impl GraphDoc {
    pub fn build(&self) -> Result<MetricGraph> {
        let vertices: Vec<VertexRecord> = self
            .vertices
            .iter()
            .map(|v| VertexRecord { id: v.id.clone(), condition: v.condition.into() })
            .collect();
        let mut index = std::collections::HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.id.as_str(), VertexIx(i)).is_some() {
                return Err(Error::DuplicateId { kind: "vertex", id: v.id.clone() });
            }
        }
        let lookup = |edge: &str, vertex: &str| {
            index.get(vertex).copied().ok_or_else(|| Error::DanglingEndpoint {
                edge: edge.to_string(),
                vertex: vertex.to_string(),
            })
        };
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok(EdgeRecord {
                    id: e.id.clone(),
                    from: lookup(&e.id, &e.from)?,
                    to: lookup(&e.id, &e.to)?,
                    length: e.length,
                    potential: e.potential,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MetricGraph::new(vertices, edges)
    }

    pub fn from_graph(g: &MetricGraph) -> Self {
        Self {
            vertices: g
                .vertices()
                .iter()
                .map(|v| VertexDoc { id: v.id.clone(), condition: v.condition.into() })
                .collect(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeDoc {
                    id: e.id.clone(),
                    from: g.vertex(e.from).id.clone(),
                    to: g.vertex(e.to).id.clone(),
                    length: e.length,
                    potential: e.potential,
                })
                .collect(),
        }
    }
}
