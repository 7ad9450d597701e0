//! Aggregated analysis report with a versioned JSON schema.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compat::CompatibilityGraph;
use crate::conditions::{check_conditions, ConditionReport};
use crate::error::Result;
use crate::graph::{classify_vertices, SimplicialGraph};
use crate::partition::PartitionJson;
use crate::retraction::ComplexStats;
use crate::search::{max_compatible, MaxSetResult};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub edges: usize,
    pub names: Vec<String>,
    pub connected: bool,
    pub warnings: Vec<String>,
    pub content_hash: String,
}

impl GraphSummary {
    pub fn of(g: &SimplicialGraph) -> Self {
        GraphSummary {
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            names: g.names().to_vec(),
            connected: g.is_connected(),
            warnings: g.warnings(),
            content_hash: g.content_hash(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub name: String,
    pub principal: bool,
    pub maximal: bool,
    pub relevant: bool,
    /// Index of the equivalence class under ≤.
    pub class: usize,
    pub dominated_by: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxSetRecord {
    pub size: usize,
    pub restricted_to: Vec<String>,
    pub witness: Vec<PartitionJson>,
}

impl MaxSetRecord {
    pub fn new(g: &SimplicialGraph, cg: &CompatibilityGraph, r: &MaxSetResult) -> Self {
        MaxSetRecord {
            size: r.size,
            restricted_to: g.names_of(r.restricted_to),
            witness: r.witness.members.iter().map(|&i| cg.node(i).to_json(g)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VcdVerdict {
    Exact { value: usize, reason: String },
    Bounds { lower: usize, upper: usize, note: String },
}

impl VcdVerdict {
    pub fn decide(m_l: usize, m_v: usize, conditions: &ConditionReport) -> Self {
        if conditions.spiky && conditions.barbed.holds {
            VcdVerdict::Exact {
                value: m_l,
                reason: "graph is spiky and barbed".into(),
            }
        } else if m_l == m_v {
            VcdVerdict::Exact {
                value: m_l,
                reason: "lower and upper bounds coincide".into(),
            }
        } else {
            let mut failed = Vec::new();
            if !conditions.condition1.holds {
                failed.push("condition 1");
            }
            if !conditions.condition2.holds {
                failed.push("condition 2");
            }
            if !conditions.barbed.holds {
                failed.push("barbed");
            }
            VcdVerdict::Bounds {
                lower: m_l,
                upper: m_v,
                note: format!(
                    "fails {}; the generic argument only gives the a priori bounds, a graph-specific argument may do better",
                    failed.join(", ")
                ),
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractionSummary {
    pub events: usize,
    pub before: ComplexStats,
    pub after: ComplexStats,
    pub survivors_match: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub graph: GraphSummary,
    pub vertices: Vec<VertexRecord>,
    pub partition_count: usize,
    pub compatible_pairs: usize,
    pub principal_rank: MaxSetRecord,
    pub spine_dimension: MaxSetRecord,
    pub conditions: ConditionReport,
    pub vcd: VcdVerdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub retraction: Option<RetractionSummary>,
}

pub fn analyze(g: &SimplicialGraph, cg: &CompatibilityGraph) -> Result<AnalysisReport> {
    let c = classify_vertices(g);
    let vertices = g
        .vertices()
        .map(|v| VertexRecord {
            name: g.name(v).to_string(),
            principal: c.principal.contains(v),
            maximal: c.maximal.contains(v),
            relevant: c.relevant.contains(v),
            class: c.class_of[v.0],
            dominated_by: g.names_of(c.dominators[v.0]),
        })
        .collect();
    let m_l = max_compatible(cg, c.principal);
    let m_v = max_compatible(cg, g.all());
    let conditions = check_conditions(g)?;
    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        graph: GraphSummary::of(g),
        vertices,
        partition_count: cg.len(),
        compatible_pairs: cg.edge_count(),
        vcd: VcdVerdict::decide(m_l.size, m_v.size, &conditions),
        principal_rank: MaxSetRecord::new(g, cg, &m_l),
        spine_dimension: MaxSetRecord::new(g, cg, &m_v),
        conditions,
        retraction: None,
    })
}

impl fmt::Display for AnalysisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = &self.graph;
        writeln!(
            f,
            "graph: {} vertices, {} edges{}",
            g.vertices,
            g.edges,
            if g.connected { "" } else { " (disconnected)" }
        )?;
        for w in &g.warnings {
            writeln!(f, "warning: {w}")?;
        }
        let list = |pred: fn(&VertexRecord) -> bool| {
            self.vertices
                .iter()
                .filter(|v| pred(v))
                .map(|v| v.name.as_str())
                .collect::<Vec<_>>()
                .join(" ")
        };
        writeln!(f, "principal: {}", list(|v| v.principal))?;
        writeln!(f, "non-principal: {}", list(|v| !v.principal))?;
        writeln!(f, "relevant: {}", list(|v| v.relevant))?;
        writeln!(f, "partitions: {}", self.partition_count)?;
        writeln!(f, "compatible pairs: {}", self.compatible_pairs)?;
        writeln!(f, "M(L) = {}", self.principal_rank.size)?;
        writeln!(f, "M(V) = {}", self.spine_dimension.size)?;
        let c = &self.conditions;
        writeln!(f, "condition 1: {}", c.condition1.holds)?;
        writeln!(f, "condition 2: {}", c.condition2.holds)?;
        writeln!(f, "spiky: {}", c.spiky)?;
        writeln!(f, "barbed: {}", c.barbed.holds)?;
        writeln!(f, "P(k): k = {}", c.p_k)?;
        match &self.vcd {
            VcdVerdict::Exact { value, reason } => writeln!(f, "vcd = {value} ({reason})")?,
            VcdVerdict::Bounds { lower, upper, note } => writeln!(f, "{lower} <= vcd <= {upper} ({note})")?,
        }
        if let Some(r) = &self.retraction {
            writeln!(
                f,
                "retraction: {} collapses, dimension {:?} -> {:?}, euler {} -> {}",
                r.events,
                r.before.dimension,
                r.after.dimension,
                r.before.euler_characteristic,
                r.after.euler_characteristic
            )?;
        }
        Ok(())
    }
}
