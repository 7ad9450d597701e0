//! The defining graph Γ and vertex-level structure.

mod classify;
mod sets;
mod text;

use std::collections::{HashMap, VecDeque};

use sha2::{Digest, Sha256};

pub use classify::{classify_vertices, VertexClassification};
pub use sets::{Sign, SignedVertex, SignedVertexSet, VertexId, VertexSet};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

/// A finite simplicial graph with named vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplicialGraph {
    names: Vec<String>,
    index: HashMap<String, VertexId>,
    adj: Vec<VertexSet>,
}

impl SimplicialGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from vertex names and edges given by name.
    pub fn from_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v.as_ref())?;
        }
        for (a, b) in edges {
            let a = g.vertex(a.as_ref())?;
            let b = g.vertex(b.as_ref())?;
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    /// Adds a vertex, or returns the existing id if the name is taken.
    pub fn add_vertex(&mut self, name: &str) -> Result<VertexId> {
        if let Some(&v) = self.index.get(name) {
            return Ok(v);
        }
        validate_name(name)?;
        if self.names.len() == MAX_VERTICES {
            return Err(Error::TooManyVertices(MAX_VERTICES + 1));
        }
        let v = VertexId(self.names.len());
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), v);
        self.adj.push(VertexSet::EMPTY);
        Ok(v)
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId) -> Result<()> {
        self.check(a)?;
        self.check(b)?;
        if a == b {
            return Err(Error::Precondition(format!("loop at vertex `{}`", self.names[a.0])));
        }
        self.adj[a.0].insert(b);
        self.adj[b.0].insert(a);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.names.len()).map(VertexId)
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.names.len())
    }

    /// Edges as id pairs `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for a in self.vertices() {
            for b in self.adj[a.0].iter().filter(|b| *b > a) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn name(&self, v: VertexId) -> &str {
        &self.names[v.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex(&self, name: &str) -> Result<VertexId> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    pub fn vertex_set(&self, names: &[&str]) -> Result<VertexSet> {
        names.iter().map(|n| self.vertex(n)).collect()
    }

    /// Parses `name` or `name^-1`.
    pub fn signed(&self, token: &str) -> Result<SignedVertex> {
        match token.strip_suffix("^-1") {
            Some(base) => Ok(self.vertex(base)?.neg()),
            None => Ok(self.vertex(token)?.pos()),
        }
    }

    pub fn signed_set(&self, tokens: &[&str]) -> Result<SignedVertexSet> {
        tokens.iter().map(|t| self.signed(t)).collect()
    }

    pub fn signed_name(&self, x: SignedVertex) -> String {
        match x.sign() {
            Sign::Pos => self.names[x.vertex().0].clone(),
            Sign::Neg => format!("{}^-1", self.names[x.vertex().0]),
        }
    }

    pub fn names_of(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.names[v.0].clone()).collect()
    }

    pub fn signed_names_of(&self, s: SignedVertexSet) -> Vec<String> {
        s.iter().map(|x| self.signed_name(x)).collect()
    }

    fn check(&self, v: VertexId) -> Result<()> {
        if v.0 < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(v.to_string()))
        }
    }

    pub fn adjacent(&self, a: VertexId, b: VertexId) -> bool {
        self.adj[a.0].contains(b)
    }

    pub fn link(&self, v: VertexId) -> Result<VertexSet> {
        self.check(v)?;
        Ok(self.adj[v.0])
    }

    pub fn star(&self, v: VertexId) -> Result<VertexSet> {
        self.check(v)?;
        Ok(self.st(v))
    }

    pub(crate) fn lk(&self, v: VertexId) -> VertexSet {
        self.adj[v.0]
    }

    pub(crate) fn st(&self, v: VertexId) -> VertexSet {
        self.adj[v.0] | VertexSet::singleton(v)
    }

    /// Shortest-path length; `None` when disconnected.
    pub fn distance(&self, a: VertexId, b: VertexId) -> Result<Option<usize>> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.distances_from(a)[b.0])
    }

    pub(crate) fn distances_from(&self, a: VertexId) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.names.len()];
        dist[a.0] = Some(0);
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            let d = dist[x.0].unwrap();
            for y in self.adj[x.0].iter() {
                if dist[y.0].is_none() {
                    dist[y.0] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// All-pairs distances.
    pub fn distance_table(&self) -> Vec<Vec<Option<usize>>> {
        self.vertices().map(|v| self.distances_from(v)).collect()
    }

    /// Connected components of the full subgraph on `within`, ordered by least vertex.
    pub fn components_of(&self, within: VertexSet) -> Vec<VertexSet> {
        let mut left = within;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = VertexSet::singleton(start);
            let mut frontier = comp;
            while !frontier.is_empty() {
                let mut next = VertexSet::EMPTY;
                for x in frontier.iter() {
                    next = next | (self.adj[x.0] & within);
                }
                frontier = next - comp;
                comp = comp | next;
            }
            left = left - comp;
            out.push(comp);
        }
        out
    }

    /// Components of Γ ∖ st(v).
    pub fn components_minus_star(&self, v: VertexId) -> Result<Vec<VertexSet>> {
        self.check(v)?;
        Ok(self.components_of(self.all() - self.st(v)))
    }

    /// Components of Γ± ∖ lk(v)±, computed by search on the doubled graph.
    /// Includes the singletons {v} and {v⁻¹}; ordered by least element.
    pub fn doubled_components(&self, v: VertexId) -> Result<Vec<SignedVertexSet>> {
        self.check(v)?;
        let within = SignedVertexSet::universe(self.vertex_count()) - self.adj[v.0].doubled();
        let mut left = within;
        let mut out = Vec::new();
        while let Some(start) = left.first() {
            let mut comp = SignedVertexSet::singleton(start);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                for y in self.doubled_neighbours(x).iter() {
                    if within.contains(y) && !comp.contains(y) {
                        comp.insert(y);
                        stack.push(y);
                    }
                }
            }
            left = left - comp;
            out.push(comp);
        }
        Ok(out)
    }

    /// Neighbours of x in Γ±: signed letters whose generator commutes with x's, excluding x⁻¹.
    fn doubled_neighbours(&self, x: SignedVertex) -> SignedVertexSet {
        self.adj[x.vertex().0].doubled()
    }

    /// The non-base doubled components for `v`, derived from the components of Γ ∖ st(v):
    /// a component C with |C| ≥ 2 gives C±, a singleton {x} gives {x} and {x⁻¹}.
    pub(crate) fn units(&self, v: VertexId) -> Vec<SignedVertexSet> {
        let mut out = Vec::new();
        for c in self.components_of(self.all() - self.st(v)) {
            if c.len() == 1 {
                let x = c.first().unwrap();
                out.push(SignedVertexSet::singleton(x.pos()));
                out.push(SignedVertexSet::singleton(x.neg()));
            } else {
                out.push(c.doubled());
            }
        }
        out.sort();
        out
    }

    /// v ≤ w iff lk(v) ⊆ st(w).
    pub fn leq(&self, v: VertexId, w: VertexId) -> Result<bool> {
        self.check(v)?;
        self.check(w)?;
        Ok(self.le(v, w))
    }

    /// lk(v) ⊊ lk(w): w dominates v.
    pub fn lt_circ(&self, v: VertexId, w: VertexId) -> Result<bool> {
        self.check(v)?;
        self.check(w)?;
        Ok(self.dominated_by(v, w))
    }

    pub(crate) fn le(&self, v: VertexId, w: VertexId) -> bool {
        self.adj[v.0].is_subset(self.st(w))
    }

    pub(crate) fn dominated_by(&self, v: VertexId, w: VertexId) -> bool {
        let (a, b) = (self.adj[v.0], self.adj[w.0]);
        a.is_subset(b) && a != b
    }

    pub fn is_connected(&self) -> bool {
        self.components_of(self.all()).len() <= 1
    }

    /// Non-fatal remarks about the input.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let comps = self.components_of(self.all()).len();
        if comps > 1 {
            out.push(format!("graph is disconnected ({comps} components)"));
        }
        out
    }

    /// One `vertex` line per vertex in id order, then one `edge` line per edge in id order.
    pub fn canonical_text(&self) -> String {
        let mut s = String::new();
        for name in &self.names {
            s.push_str("vertex ");
            s.push_str(name);
            s.push('\n');
        }
        for (a, b) in self.edges() {
            s.push_str(&format!("edge {} {}\n", self.names[a.0], self.names[b.0]));
        }
        s
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_text().as_bytes()))
    }
}

fn validate_name(name: &str) -> Result<()> {
    let bad =
        name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == ',' || c == '#') || name.contains('^');
    if bad {
        return Err(Error::Precondition(format!("invalid vertex name `{name}`")));
    }
    Ok(())
}
