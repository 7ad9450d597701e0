use super::{SimplicialGraph, VertexId, VertexSet};

/// Per-vertex flags derived from the domination order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClassification {
    pub principal: VertexSet,
    pub maximal: VertexSet,
    pub relevant: VertexSet,
    /// Equivalence class index per vertex; classes numbered by least member.
    pub class_of: Vec<usize>,
    /// `dominators[v]` = { w : lk(v) ⊊ lk(w) }.
    pub dominators: Vec<VertexSet>,
}

impl VertexClassification {
    pub fn is_principal(&self, v: VertexId) -> bool {
        self.principal.contains(v)
    }

    pub fn non_principal(&self) -> VertexSet {
        let all = VertexSet::full(self.class_of.len());
        all - self.principal
    }

    pub fn relevant_non_principal(&self) -> VertexSet {
        self.relevant - self.principal
    }

    /// Members of the class of `v`.
    pub fn class_members(&self, v: VertexId) -> VertexSet {
        let c = self.class_of[v.0];
        (0..self.class_of.len())
            .filter(|&w| self.class_of[w] == c)
            .map(VertexId)
            .collect()
    }
}

pub fn classify_vertices(g: &SimplicialGraph) -> VertexClassification {
    let n = g.vertex_count();
    let dominators: Vec<VertexSet> = g
        .vertices()
        .map(|v| g.vertices().filter(|&w| g.dominated_by(v, w)).collect())
        .collect();
    let principal = g.vertices().filter(|v| dominators[v.0].is_empty()).collect();

    let mut class_of = vec![usize::MAX; n];
    let mut next = 0;
    for v in g.vertices() {
        if class_of[v.0] != usize::MAX {
            continue;
        }
        for w in g.vertices().skip(v.0) {
            if g.le(v, w) && g.le(w, v) {
                class_of[w.0] = next;
            }
        }
        next += 1;
    }

    let maximal = g
        .vertices()
        .filter(|&v| g.vertices().all(|w| !g.le(v, w) || g.le(w, v)))
        .collect();
    let relevant = g.vertices().filter(|&v| g.units(v).len() >= 2).collect();

    VertexClassification {
        principal,
        maximal,
        relevant,
        class_of,
        dominators,
    }
}
