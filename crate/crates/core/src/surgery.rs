//! Graph surgery with the eigenvalue comparison each operation guarantees.
//!
//! All operations require standard conditions at the vertices they touch.
//! Pendant and unfolding operations also require zero potentials, since their
//! comparisons are stated for the standard Laplacian.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{loop_graph, EdgeIx, EdgeRecord, End, GraphDoc, Incidence, MetricGraph, Traversal, VertexCondition, VertexIx, VertexRecord};

/// An edge endpoint named by edge id.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IncidenceRef {
    pub edge: String,
    pub end: End,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurgeryOp {
    /// Splits `vertex` into one vertex per group of incidences; group 0 keeps the id.
    CutVertex { vertex: String, groups: Vec<Vec<IncidenceRef>> },
    /// Identifies all listed vertices with the first one.
    GlueVertices { vertices: Vec<String> },
    /// Glues `pendant` to the graph by identifying its vertex `attach` with `host`.
    AttachPendant { host: String, pendant: GraphDoc, attach: String },
    /// Removes the pendant subgraph spanned by `edges`, attached at `attachment`.
    DeletePendant { attachment: String, edges: Vec<String> },
    /// Replaces pendant edges at `vertex` by one pendant edge of their total length.
    UnfoldPendantEdges { vertex: String, edges: Vec<String> },
    /// Replaces every edge by two parallel copies.
    DoubleGraph,
}

/// The comparison between the spectra before (`old`) and after (`new`) an operation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Relation {
    /// `μ_k(old) ≥ μ_k(new)` for all `k` and `μ_k(new) ≥ μ_{k-r}(old)` for `k > r`.
    Cut { rank: usize },
    /// `μ_k(new) ≥ μ_k(old)` for all `k` and `μ_{k+r}(old) ≥ μ_k(new)`.
    Glue { rank: usize },
    /// `μ_k(new) ≤ μ_k(old)` for all `k`.
    Decreasing,
    /// `μ_k(new) ≥ μ_k(old)` for all `k`.
    Increasing,
    /// `μ₂(new) ≤ μ₂(old)`.
    SecondDecreasing,
    /// The operator is unchanged, e.g. after removing dummy vertices.
    Unchanged,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurgeryPrediction {
    pub relation: Relation,
    pub statement: String,
}

/// One checked inequality `lower ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub k: usize,
    pub inequality: String,
    pub lower: f64,
    pub upper: f64,
    /// `upper - lower`; negative beyond the tolerance means a violation.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictionCheck {
    pub holds: bool,
    pub comparisons: Vec<Comparison>,
}

impl SurgeryPrediction {
    fn new(relation: Relation) -> Self {
        let statement = match relation {
            Relation::Cut { rank } => format!("mu_k(new) <= mu_k(old) for all k; mu_k(new) >= mu_(k-{rank})(old) for k > {rank}"),
            Relation::Glue { rank } => format!("mu_k(new) >= mu_k(old) for all k; mu_k(new) <= mu_(k+{rank})(old)"),
            Relation::Decreasing => "mu_k(new) <= mu_k(old) for all k".into(),
            Relation::Increasing => "mu_k(new) >= mu_k(old) for all k".into(),
            Relation::SecondDecreasing => "mu_2(new) <= mu_2(old)".into(),
            Relation::Unchanged => "mu_k(new) = mu_k(old) for all k".into(),
        };
        Self { relation, statement }
    }

    /// Checks the prediction on the computed eigenvalues (index 0 is `μ₁`),
    /// allowing `tol(μ)` of slack in every inequality.
    pub fn check(&self, old: &[f64], new: &[f64], tol: impl Fn(f64) -> f64) -> PredictionCheck {
        let mut comparisons = Vec::new();
        let mut push = |k: usize, inequality: String, lower: f64, upper: f64| {
            let margin = upper - lower;
            let holds = margin >= -tol(lower.abs().max(upper.abs()));
            comparisons.push(Comparison { k, inequality, lower, upper, margin, holds });
        };
        let n = old.len().min(new.len());
        match self.relation {
            Relation::Cut { rank } => {
                for k in 1..=n {
                    push(k, format!("mu_{k}(new) <= mu_{k}(old)"), new[k - 1], old[k - 1]);
                    if k > rank {
                        push(k, format!("mu_{}(old) <= mu_{k}(new)", k - rank), old[k - 1 - rank], new[k - 1]);
                    }
                }
            }
            Relation::Glue { rank } => {
                for k in 1..=n {
                    push(k, format!("mu_{k}(old) <= mu_{k}(new)"), old[k - 1], new[k - 1]);
                    if k + rank <= old.len() {
                        push(k, format!("mu_{k}(new) <= mu_{}(old)", k + rank), new[k - 1], old[k - 1 + rank]);
                    }
                }
            }
            Relation::Decreasing => {
                for k in 1..=n {
                    push(k, format!("mu_{k}(new) <= mu_{k}(old)"), new[k - 1], old[k - 1]);
                }
            }
            Relation::Increasing => {
                for k in 1..=n {
                    push(k, format!("mu_{k}(old) <= mu_{k}(new)"), old[k - 1], new[k - 1]);
                }
            }
            Relation::SecondDecreasing => {
                if n >= 2 {
                    push(2, "mu_2(new) <= mu_2(old)".into(), new[1], old[1]);
                }
            }
            Relation::Unchanged => {
                for k in 1..=n {
                    push(k, format!("mu_{k}(new) <= mu_{k}(old)"), new[k - 1], old[k - 1]);
                    push(k, format!("mu_{k}(old) <= mu_{k}(new)"), old[k - 1], new[k - 1]);
                }
            }
        }
        PredictionCheck { holds: comparisons.iter().all(|c| c.holds), comparisons }
    }
}

fn require_standard(g: &MetricGraph, v: VertexIx) -> Result<()> {
    if g.vertex(v).condition.is_standard() {
        Ok(())
    } else {
        Err(Error::InvalidSurgery(format!("vertex `{}` does not carry standard conditions", g.vertex(v).id)))
    }
}

fn require_zero_potential(g: &MetricGraph, what: &str) -> Result<()> {
    if g.zero_potential() {
        Ok(())
    } else {
        Err(Error::InvalidSurgery(format!("{what} is only supported with zero potential")))
    }
}

/// Applies `op` and returns the new graph with its predicted spectral comparison.
pub fn apply(g: &MetricGraph, op: &SurgeryOp) -> Result<(MetricGraph, SurgeryPrediction)> {
    match op {
        SurgeryOp::CutVertex { vertex, groups } => cut_vertex(g, vertex, groups),
        SurgeryOp::GlueVertices { vertices } => glue_vertices(g, vertices),
        SurgeryOp::AttachPendant { host, pendant, attach } => attach_pendant(g, host, &pendant.build()?, attach),
        SurgeryOp::DeletePendant { attachment, edges } => delete_pendant(g, attachment, edges),
        SurgeryOp::UnfoldPendantEdges { vertex, edges } => unfold_pendant_edges(g, vertex, edges),
        SurgeryOp::DoubleGraph => {
            g.vertex_ixs().try_for_each(|v| require_standard(g, v))?;
            Ok((g.doubled(), SurgeryPrediction::new(Relation::Decreasing)))
        }
    }
}

fn fresh(used: &mut HashSet<String>, base: &str) -> String {
    let mut id = base.to_string();
    let mut n = 1;
    while used.contains(&id) {
        id = format!("{base}.{n}");
        n += 1;
    }
    used.insert(id.clone());
    id
}

fn cut_vertex(g: &MetricGraph, vertex: &str, groups: &[Vec<IncidenceRef>]) -> Result<(MetricGraph, SurgeryPrediction)> {
    let v = g.vertex_ix(vertex)?;
    require_standard(g, v)?;
    if groups.len() < 2 {
        return Err(Error::InvalidSurgery("a cut needs at least two groups".into()));
    }
    let present: BTreeSet<Incidence> = g.incidences(v).into_iter().collect();
    let mut seen = BTreeSet::new();
    let mut group_of = HashMap::new();
    for (gi, group) in groups.iter().enumerate() {
        if group.is_empty() {
            return Err(Error::InvalidSurgery(format!("cut group {gi} is empty")));
        }
        for r in group {
            let inc = Incidence { edge: g.edge_ix(&r.edge)?, end: r.end };
            if !present.contains(&inc) {
                return Err(Error::InvalidSurgery(format!("{:?} end of edge `{}` is not at vertex `{vertex}`", r.end, r.edge)));
            }
            if !seen.insert(inc) {
                return Err(Error::InvalidSurgery(format!("{:?} end of edge `{}` listed twice", r.end, r.edge)));
            }
            group_of.insert(inc, gi);
        }
    }
    if seen.len() != present.len() {
        return Err(Error::InvalidSurgery(format!("cut groups miss {} incidences at `{vertex}`", present.len() - seen.len())));
    }
    let mut vertices = g.vertices().to_vec();
    let mut used: HashSet<String> = vertices.iter().map(|v| v.id.clone()).collect();
    let mut new_ix = vec![v];
    for gi in 1..groups.len() {
        let id = fresh(&mut used, &format!("{vertex}.{gi}"));
        new_ix.push(VertexIx(vertices.len()));
        vertices.push(VertexRecord { id, condition: VertexCondition::Standard });
    }
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut e = e.clone();
            if let Some(&gi) = group_of.get(&Incidence { edge: EdgeIx(i), end: End::From }) {
                e.from = new_ix[gi];
            }
            if let Some(&gi) = group_of.get(&Incidence { edge: EdgeIx(i), end: End::To }) {
                e.to = new_ix[gi];
            }
            e
        })
        .collect();
    let out = MetricGraph::new(vertices, edges)?;
    Ok((out, SurgeryPrediction::new(Relation::Cut { rank: groups.len() - 1 })))
}

fn glue_vertices(g: &MetricGraph, ids: &[String]) -> Result<(MetricGraph, SurgeryPrediction)> {
    if ids.len() < 2 {
        return Err(Error::InvalidSurgery("gluing needs at least two vertices".into()));
    }
    let mut ixs = Vec::with_capacity(ids.len());
    for id in ids {
        let v = g.vertex_ix(id)?;
        require_standard(g, v)?;
        if ixs.contains(&v) {
            return Err(Error::InvalidSurgery(format!("vertex `{id}` listed twice")));
        }
        ixs.push(v);
    }
    let target = ixs[0];
    let merged: HashSet<VertexIx> = ixs[1..].iter().copied().collect();
    let mut remap = Vec::with_capacity(g.vertex_count());
    let mut vertices = Vec::new();
    for v in g.vertex_ixs() {
        if merged.contains(&v) {
            remap.push(None);
        } else {
            remap.push(Some(VertexIx(vertices.len())));
            vertices.push(g.vertex(v).clone());
        }
    }
    let target_new = remap[target.0].expect("target kept");
    let map = |u: VertexIx| remap[u.0].unwrap_or(target_new);
    let edges = g.edges().iter().map(|e| EdgeRecord { from: map(e.from), to: map(e.to), ..e.clone() }).collect();
    let out = MetricGraph::new(vertices, edges)?;
    Ok((out, SurgeryPrediction::new(Relation::Glue { rank: ids.len() - 1 })))
}

fn attach_pendant(g: &MetricGraph, host: &str, pendant: &MetricGraph, attach: &str) -> Result<(MetricGraph, SurgeryPrediction)> {
    let h = g.vertex_ix(host)?;
    require_standard(g, h)?;
    let a = pendant.vertex_ix(attach)?;
    if pendant.edge_count() == 0 || !pendant.is_connected() {
        return Err(Error::InvalidSurgery("pendant graph must be connected with at least one edge".into()));
    }
    if !pendant.all_standard() {
        return Err(Error::InvalidSurgery("pendant graph must carry standard conditions".into()));
    }
    require_zero_potential(g, "pendant attachment")?;
    require_zero_potential(pendant, "pendant attachment")?;
    let mut vertices = g.vertices().to_vec();
    let mut used_v: HashSet<String> = vertices.iter().map(|v| v.id.clone()).collect();
    let mut used_e: HashSet<String> = g.edges().iter().map(|e| e.id.clone()).collect();
    let mut map = Vec::with_capacity(pendant.vertex_count());
    for u in pendant.vertex_ixs() {
        if u == a {
            map.push(h);
        } else {
            map.push(VertexIx(vertices.len()));
            let id = fresh(&mut used_v, &pendant.vertex(u).id);
            vertices.push(VertexRecord { id, condition: VertexCondition::Standard });
        }
    }
    let mut edges = g.edges().to_vec();
    for e in pendant.edges() {
        let id = fresh(&mut used_e, &e.id);
        edges.push(EdgeRecord { id, from: map[e.from.0], to: map[e.to.0], ..e.clone() });
    }
    let out = MetricGraph::new(vertices, edges)?;
    Ok((out, SurgeryPrediction::new(Relation::Decreasing)))
}

fn delete_pendant(g: &MetricGraph, attachment: &str, edge_ids: &[String]) -> Result<(MetricGraph, SurgeryPrediction)> {
    let a = g.vertex_ix(attachment)?;
    require_standard(g, a)?;
    require_zero_potential(g, "pendant deletion")?;
    if edge_ids.is_empty() {
        return Err(Error::InvalidSurgery("pendant edge set is empty".into()));
    }
    let mut set = BTreeSet::new();
    for id in edge_ids {
        if !set.insert(g.edge_ix(id)?) {
            return Err(Error::InvalidSurgery(format!("edge `{id}` listed twice")));
        }
    }
    if set.len() == g.edge_count() {
        return Err(Error::InvalidSurgery("deleting every edge leaves nothing to attach to".into()));
    }
    let mut inside = BTreeSet::new();
    let mut outside = BTreeSet::new();
    for (i, e) in g.edges().iter().enumerate() {
        let bucket = if set.contains(&EdgeIx(i)) { &mut inside } else { &mut outside };
        bucket.insert(e.from);
        bucket.insert(e.to);
    }
    let shared: Vec<VertexIx> = inside.intersection(&outside).copied().collect();
    if shared != vec![a] {
        let names: Vec<&str> = shared.iter().map(|v| g.vertex(*v).id.as_str()).collect();
        return Err(Error::InvalidSurgery(format!(
            "edges do not form a pendant subgraph at `{attachment}` (shared vertices: {names:?})"
        )));
    }
    // The pendant part itself must be connected.
    let mut uf = crate::union_find::UnionFind::new(g.vertex_count());
    for e in &set {
        let r = g.edge(*e);
        uf.union(r.from.0, r.to.0);
    }
    let root = uf.find(a.0);
    if inside.iter().any(|v| uf.find(v.0) != root) {
        return Err(Error::InvalidSurgery("pendant edge set is not connected".into()));
    }
    for v in &inside {
        if *v != a {
            require_standard(g, *v)?;
        }
    }
    let removed: HashSet<VertexIx> = inside.iter().copied().filter(|v| *v != a).collect();
    let mut remap = Vec::with_capacity(g.vertex_count());
    let mut vertices = Vec::new();
    for v in g.vertex_ixs() {
        if removed.contains(&v) {
            remap.push(None);
        } else {
            remap.push(Some(VertexIx(vertices.len())));
            vertices.push(g.vertex(v).clone());
        }
    }
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !set.contains(&EdgeIx(*i)))
        .map(|(_, e)| EdgeRecord {
            from: remap[e.from.0].expect("kept endpoint"),
            to: remap[e.to.0].expect("kept endpoint"),
            ..e.clone()
        })
        .collect();
    let out = MetricGraph::new(vertices, edges)?;
    Ok((out, SurgeryPrediction::new(Relation::Increasing)))
}

fn unfold_pendant_edges(g: &MetricGraph, vertex: &str, edge_ids: &[String]) -> Result<(MetricGraph, SurgeryPrediction)> {
    let v = g.vertex_ix(vertex)?;
    require_standard(g, v)?;
    require_zero_potential(g, "unfolding")?;
    if edge_ids.len() < 2 {
        return Err(Error::InvalidSurgery("unfolding needs at least two pendant edges".into()));
    }
    let deg = g.degrees();
    let mut edges_ix = Vec::new();
    let mut leaves = Vec::new();
    for id in edge_ids {
        let e = g.edge_ix(id)?;
        let r = g.edge(e);
        if edges_ix.contains(&e) {
            return Err(Error::InvalidSurgery(format!("edge `{id}` listed twice")));
        }
        if r.is_loop() || (r.from != v && r.to != v) {
            return Err(Error::InvalidSurgery(format!("edge `{id}` is not a pendant edge at `{vertex}`")));
        }
        let leaf = r.other(v);
        if deg[leaf.0] != 1 || !g.vertex(leaf).condition.is_standard() {
            return Err(Error::InvalidSurgery(format!("edge `{id}` does not end in a standard leaf")));
        }
        edges_ix.push(e);
        leaves.push(leaf);
    }
    let total: f64 = edges_ix.iter().map(|e| g.edge(*e).length).sum();
    let removed: HashSet<VertexIx> = leaves[1..].iter().copied().collect();
    let dropped: HashSet<EdgeIx> = edges_ix[1..].iter().copied().collect();
    let mut remap = Vec::with_capacity(g.vertex_count());
    let mut vertices = Vec::new();
    for u in g.vertex_ixs() {
        if removed.contains(&u) {
            remap.push(None);
        } else {
            remap.push(Some(VertexIx(vertices.len())));
            vertices.push(g.vertex(u).clone());
        }
    }
    let map = |u: VertexIx| remap[u.0].expect("kept vertex");
    let edges = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| !dropped.contains(&EdgeIx(*i)))
        .map(|(i, e)| {
            let mut e = EdgeRecord { from: map(e.from), to: map(e.to), ..e.clone() };
            if EdgeIx(i) == edges_ix[0] {
                e.length = total;
            }
            e
        })
        .collect();
    let out = MetricGraph::new(vertices, edges)?;
    Ok((out, SurgeryPrediction::new(Relation::SecondDecreasing)))
}

/// Unfolds pairs of neighbouring pendant edges of a tree until a path remains.
/// Dummy vertices are removed before each step and from each result.
pub fn unfold_to_path(g: &MetricGraph) -> Result<Vec<(MetricGraph, SurgeryPrediction)>> {
    g.require_connected()?;
    let betti = g.betti_number()?;
    if betti != 0 {
        return Err(Error::NotATree { betti });
    }
    if !g.all_standard() {
        return Err(Error::InvalidSurgery("unfolding needs standard conditions everywhere".into()));
    }
    let mut current = g.remove_dummy_vertices();
    let mut steps = Vec::new();
    loop {
        let deg = current.degrees();
        if current.leaves().len() <= 2 {
            break;
        }
        let mut choice = None;
        for v in current.vertex_ixs() {
            if deg[v.0] < 2 {
                continue;
            }
            let pendant: Vec<String> = current
                .incidences(v)
                .into_iter()
                .map(|inc| current.edge(inc.edge))
                .filter(|e| deg[e.other(v).0] == 1)
                .map(|e| e.id.clone())
                .collect();
            if pendant.len() >= 2 {
                choice = Some((current.vertex(v).id.clone(), pendant[..2].to_vec()));
                break;
            }
        }
        let (vertex, edges) = choice.ok_or_else(|| Error::InvalidSurgery("no neighbouring pendant edges found".into()))?;
        let (next, pred) = unfold_pendant_edges(&current, &vertex, &edges)?;
        current = next.remove_dummy_vertices();
        steps.push((current.clone(), pred));
    }
    Ok(steps)
}

#[derive(Debug, Clone)]
pub struct DoublingChain {
    pub doubled: MetricGraph,
    pub cycle: Vec<Traversal>,
    /// The loop of length `2L` obtained by cutting the doubled graph along the cycle.
    pub loop_graph: MetricGraph,
    /// `μ₂` of the loop, `π² / L²`.
    pub bound: f64,
}

/// `Γ → Γ₂ → loop of length 2L`, each step lowering every eigenvalue.
pub fn doubling_chain(g: &MetricGraph) -> Result<DoublingChain> {
    g.require_connected()?;
    if !g.all_standard() {
        return Err(Error::InvalidSurgery("doubling chain needs standard conditions everywhere".into()));
    }
    let doubled = g.doubled();
    let cycle = doubled.eulerian_cycle()?;
    let total = 2.0 * g.total_length();
    Ok(DoublingChain { doubled, cycle, loop_graph: loop_graph(total), bound: 4.0 * PI * PI / (total * total) })
}

/// One step of a surgery script.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScriptStep {
    Op(SurgeryOp),
    Macro(ScriptMacro),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScriptMacro {
    /// Glue every vertex into the first.
    GlueAll,
    UnfoldToPath,
    DoublingChain,
    RemoveDummyVertices,
}

pub fn parse_script(text: &str) -> Result<Vec<ScriptStep>> {
    Ok(serde_json::from_str(text)?)
}

impl SurgeryOp {
    pub fn name(&self) -> &'static str {
        match self {
            SurgeryOp::CutVertex { .. } => "cut_vertex",
            SurgeryOp::GlueVertices { .. } => "glue_vertices",
            SurgeryOp::AttachPendant { .. } => "attach_pendant",
            SurgeryOp::DeletePendant { .. } => "delete_pendant",
            SurgeryOp::UnfoldPendantEdges { .. } => "unfold_pendant_edges",
            SurgeryOp::DoubleGraph => "double_graph",
        }
    }
}

/// One elementary step of an expanded script.
#[derive(Debug, Clone)]
pub struct AppliedStep {
    pub label: String,
    pub graph: MetricGraph,
    pub prediction: SurgeryPrediction,
    pub note: Option<String>,
}

/// Applies one script step, expanding macros into their elementary steps.
pub fn apply_step(g: &MetricGraph, step: &ScriptStep) -> Result<Vec<AppliedStep>> {
    let one = |label: &str, (graph, prediction): (MetricGraph, SurgeryPrediction)| {
        vec![AppliedStep { label: label.into(), graph, prediction, note: None }]
    };
    Ok(match step {
        ScriptStep::Op(op) => one(op.name(), apply(g, op)?),
        ScriptStep::Macro(ScriptMacro::GlueAll) => {
            let vertices: Vec<String> = g.vertices().iter().map(|v| v.id.clone()).collect();
            one("glue_all", glue_vertices(g, &vertices)?)
        }
        ScriptStep::Macro(ScriptMacro::RemoveDummyVertices) => {
            one("remove_dummy_vertices", (g.remove_dummy_vertices(), SurgeryPrediction::new(Relation::Unchanged)))
        }
        ScriptStep::Macro(ScriptMacro::UnfoldToPath) => unfold_to_path(g)?
            .into_iter()
            .enumerate()
            .map(|(i, (graph, prediction))| AppliedStep { label: format!("unfold_to_path[{}]", i + 1), graph, prediction, note: None })
            .collect(),
        ScriptStep::Macro(ScriptMacro::DoublingChain) => {
            let chain = doubling_chain(g)?;
            vec![
                AppliedStep {
                    label: "doubling_chain[double]".into(),
                    graph: chain.doubled,
                    prediction: SurgeryPrediction::new(Relation::Decreasing),
                    note: None,
                },
                AppliedStep {
                    label: "doubling_chain[cut_along_euler_cycle]".into(),
                    graph: chain.loop_graph,
                    prediction: SurgeryPrediction::new(Relation::Decreasing),
                    note: Some(format!("mu_2 of the original graph is at least pi^2/L^2 = {}", crate::report::fmt12(chain.bound))),
                },
            ]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{equilateral_star, figure_eight, interval, path, star, three_star};

    fn inc(edge: &str, end: End) -> IncidenceRef {
        IncidenceRef { edge: edge.into(), end }
    }

    #[test]
    fn glue_all_star_gives_flower() {
        let g = three_star(1.0, 1.0, 1.0);
        let ids = g.vertices().iter().map(|v| v.id.clone()).collect();
        let (f, pred) = apply(&g, &SurgeryOp::GlueVertices { vertices: ids }).unwrap();
        assert_eq!(f.vertex_count(), 1);
        assert_eq!(f.edge_count(), 3);
        assert!(f.edges().iter().all(|e| e.is_loop() && e.length == 1.0));
        assert_eq!(pred.relation, Relation::Glue { rank: 3 });
    }

    #[test]
    fn cut_figure_eight_into_loops() {
        let g = figure_eight(1.0, 2.0);
        let op = SurgeryOp::CutVertex {
            vertex: "v1".into(),
            groups: vec![vec![inc("e1", End::From), inc("e1", End::To)], vec![inc("e2", End::From), inc("e2", End::To)]],
        };
        let (cut, pred) = apply(&g, &op).unwrap();
        assert_eq!(cut.component_count(), 2);
        assert_eq!(pred.relation, Relation::Cut { rank: 1 });
        assert!((cut.total_length() - 3.0).abs() < 1e-15);
        assert!(cut.edges().iter().all(|e| e.is_loop()));
    }

    #[test]
    fn invalid_cuts_rejected() {
        let g = figure_eight(1.0, 2.0);
        let missing = SurgeryOp::CutVertex {
            vertex: "v1".into(),
            groups: vec![vec![inc("e1", End::From)], vec![inc("e2", End::From)]],
        };
        assert!(matches!(apply(&g, &missing), Err(Error::InvalidSurgery(_))));
        let single = SurgeryOp::CutVertex {
            vertex: "v1".into(),
            groups: vec![vec![inc("e1", End::From), inc("e1", End::To), inc("e2", End::From), inc("e2", End::To)]],
        };
        assert!(apply(&g, &single).is_err());
    }

    #[test]
    fn double_star() {
        let (d, _) = apply(&three_star(1.0, 1.0, 1.0), &SurgeryOp::DoubleGraph).unwrap();
        assert_eq!(d.edge_count(), 6);
        assert!(d.degrees().iter().all(|d| d % 2 == 0));
    }

    #[test]
    fn pendant_attach_and_delete_round_trip() {
        let g = path(&[1.0, 0.5]);
        let pendant = GraphDoc::from_graph(&interval(0.7));
        let (big, pred) =
            apply(&g, &SurgeryOp::AttachPendant { host: "v2".into(), pendant, attach: "v1".into() }).unwrap();
        assert_eq!(pred.relation, Relation::Decreasing);
        assert_eq!(big.edge_count(), 3);
        assert!((big.total_length() - 2.2).abs() < 1e-12);
        // Colliding ids were renamed.
        let new_edge = &big.edges()[2];
        assert_ne!(new_edge.id, "e1");
        let (back, pred) =
            apply(&big, &SurgeryOp::DeletePendant { attachment: "v2".into(), edges: vec![new_edge.id.clone()] }).unwrap();
        assert_eq!(pred.relation, Relation::Increasing);
        assert_eq!(back.canonical_edges(), g.canonical_edges());
    }

    #[test]
    fn non_pendant_rejected() {
        let g = crate::graph::cycle(&[1.0, 1.0, 1.0]);
        let op = SurgeryOp::DeletePendant { attachment: "v1".into(), edges: vec!["e1".into()] };
        assert!(matches!(apply(&g, &op), Err(Error::InvalidSurgery(_))));
    }

    #[test]
    fn unfold_steps() {
        let steps = unfold_to_path(&three_star(1.0, 1.0, 1.0)).unwrap();
        assert_eq!(steps.len(), 1);
        let last = &steps[0].0;
        assert_eq!(last.edge_count(), 1);
        assert!((last.total_length() - 3.0).abs() < 1e-15);
        assert!(unfold_to_path(&path(&[1.0, 2.0])).unwrap().is_empty());
        assert_eq!(unfold_to_path(&star(&[1.0, 0.5, 0.3, 0.8, 1.1])).unwrap().len(), 3);
        assert!(matches!(unfold_to_path(&figure_eight(1.0, 1.0)), Err(Error::NotATree { betti: 2 })));
    }

    #[test]
    fn doubling_examples() {
        let c = doubling_chain(&interval(1.0)).unwrap();
        assert_eq!(c.cycle.len(), 2);
        assert!((c.loop_graph.total_length() - 2.0).abs() < 1e-15);
        assert!((c.bound - PI * PI).abs() < 1e-12);
        let c = doubling_chain(&equilateral_star(3, 3.0)).unwrap();
        assert_eq!(c.cycle.len(), 6);
        assert!((c.bound - PI * PI / 9.0).abs() < 1e-12);
    }

    #[test]
    fn script_parses() {
        let steps = parse_script(
            r#"[{"op":"glue_all"},{"op":"delete_pendant","attachment":"v1","edges":["e3"]},
                {"op":"cut_vertex","vertex":"v1","groups":[[{"edge":"e1","end":"from"}],[{"edge":"e1","end":"to"}]]},
                {"op":"double_graph"}]"#,
        )
        .unwrap();
        assert_eq!(steps.len(), 4);
        assert!(matches!(steps[0], ScriptStep::Macro(ScriptMacro::GlueAll)));
        assert!(matches!(steps[3], ScriptStep::Op(SurgeryOp::DoubleGraph)));
        assert!(parse_script(r#"[{"op":"explode"}]"#).is_err());
    }

    #[test]
    fn prediction_check_flags_violation() {
        let pred = SurgeryPrediction::new(Relation::Cut { rank: 1 });
        let ok = pred.check(&[0.0, 2.0, 5.0], &[0.0, 1.0, 4.0], |_| 1e-9);
        assert!(ok.holds);
        let bad = pred.check(&[0.0, 2.0, 5.0], &[0.0, 3.0, 4.0], |_| 1e-9);
        assert!(!bad.holds);
    }

    #[test]
    fn macros_expand() {
        let g = three_star(1.0, 2.0, 3.0);
        let glued = apply_step(&g, &ScriptStep::Macro(ScriptMacro::GlueAll)).unwrap();
        assert_eq!((glued.len(), glued[0].graph.vertex_count()), (1, 1));
        let chain = apply_step(&g, &ScriptStep::Macro(ScriptMacro::DoublingChain)).unwrap();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain[1].graph.edge_count(), 1);
        assert!(chain[1].note.is_some());
        let unfolded = apply_step(&g, &ScriptStep::Macro(ScriptMacro::UnfoldToPath)).unwrap();
        let last = &unfolded.last().unwrap().graph;
        assert!(last.is_tree() && last.leaves().len() == 2);
        let same = apply_step(&path(&[1.0, 2.0]), &ScriptStep::Macro(ScriptMacro::RemoveDummyVertices)).unwrap();
        assert_eq!(same[0].graph.edge_count(), 1);
        let pred = &same[0].prediction;
        assert!(pred.check(&[0.0, 1.0], &[0.0, 1.0 + 1e-12], |_| 1e-9).holds);
        assert!(!pred.check(&[0.0, 1.0], &[0.0, 1.1], |_| 1e-9).holds);
    }
}
