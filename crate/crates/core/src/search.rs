//! Maximum compatible sets and clique enumeration over a [`CompatibilityGraph`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::compat::CompatibilityGraph;
use crate::error::{Error, Result};
use crate::graph::VertexSet;

/// Fixed-capacity bitset over node ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NodeSet {
    words: Vec<u64>,
    capacity: usize,
}

impl NodeSet {
    pub fn new(capacity: usize) -> Self {
        NodeSet {
            words: vec![0; capacity.div_ceil(64)],
            capacity,
        }
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for i in 0..capacity {
            s.insert(i);
        }
        s
    }

    pub fn from_ids(capacity: usize, ids: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::new(capacity);
        for i in ids {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.capacity && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn intersection(&self, other: &NodeSet) -> NodeSet {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference_with(&mut self, other: &NodeSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn is_subset(&self, other: &NodeSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// Keeps only ids strictly greater than `i`.
    pub fn retain_above(&mut self, i: usize) {
        let w = i / 64;
        for word in &mut self.words[..w] {
            *word = 0;
        }
        let bit = i % 64;
        self.words[w] &= if bit == 63 { 0 } else { !0u64 << (bit + 1) };
    }

    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(k * 64 + i)
            })
        })
    }

    pub fn to_hex(&self) -> String {
        self.words.iter().map(|w| format!("{w:016x}")).collect()
    }

    pub fn from_hex(capacity: usize, s: &str) -> Option<Self> {
        let words = capacity.div_ceil(64);
        if s.len() != words * 16 {
            return None;
        }
        let mut out = Self::new(capacity);
        for k in 0..words {
            out.words[k] = u64::from_str_radix(s.get(16 * k..16 * k + 16)?, 16).ok()?;
        }
        if out.iter().any(|i| i >= capacity) {
            return None;
        }
        Some(out)
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Membership test shared by the set representations used across modules.
pub trait Members {
    fn has(&self, i: usize) -> bool;
}

impl Members for NodeSet {
    fn has(&self, i: usize) -> bool {
        self.contains(i)
    }
}

impl Members for u128 {
    fn has(&self, i: usize) -> bool {
        i < 128 && self >> i & 1 == 1
    }
}

impl Members for CompatibleSet {
    fn has(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }
}

/// A set of node ids, kept sorted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CompatibleSet {
    pub members: Vec<usize>,
}

impl CompatibleSet {
    pub fn new(mut members: Vec<usize>) -> Self {
        members.sort_unstable();
        members.dedup();
        CompatibleSet { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.has(i)
    }

    pub fn is_subset(&self, other: &CompatibleSet) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    pub fn to_node_set(&self, capacity: usize) -> NodeSet {
        NodeSet::from_ids(capacity, self.members.iter().copied())
    }

    pub fn is_pairwise_compatible(&self, cg: &CompatibilityGraph) -> bool {
        self.members
            .iter()
            .enumerate()
            .all(|(k, &i)| self.members[k + 1..].iter().all(|&j| cg.compatible(i, j)))
    }
}

/// Outcome of a maximum search restricted to partitions based in `restricted_to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxSetResult {
    pub size: usize,
    pub witness: CompatibleSet,
    pub restricted_to: VertexSet,
}

/// M(W): the largest pairwise-compatible set of partitions each basable in `w`.
/// The witness is the lexicographically least maximum set.
pub fn max_compatible(cg: &CompatibilityGraph, w: VertexSet) -> MaxSetResult {
    let allowed = cg.based_in(w);
    let witness = CliqueSolver::new(cg, &allowed).lex_least_maximum();
    MaxSetResult {
        size: witness.len(),
        witness,
        restricted_to: w,
    }
}

/// Size of the largest clique within `allowed`.
pub fn max_clique_size(cg: &CompatibilityGraph, allowed: &NodeSet) -> usize {
    CliqueSolver::new(cg, allowed).maximum().len()
}

/// True iff no node outside `set` is compatible with every member.
pub fn is_inextendible(cg: &CompatibilityGraph, set: &CompatibleSet) -> Result<bool> {
    if set.members.iter().any(|&i| i >= cg.len()) {
        return Err(Error::Precondition("set refers to unknown partitions".into()));
    }
    if !set.is_pairwise_compatible(cg) {
        return Err(Error::Precondition("set is not pairwise compatible".into()));
    }
    Ok(common_neighbours(cg, &set.members).is_empty())
}

/// Nodes compatible with every id in `members` (never including the members).
pub fn common_neighbours(cg: &CompatibilityGraph, members: &[usize]) -> NodeSet {
    let mut out = cg.all_nodes();
    for &i in members {
        out.intersect_with(cg.neighbours(i));
    }
    out
}

/// Branch and bound with greedy colouring bounds over a degeneracy ordering.
struct CliqueSolver {
    /// `order[k]` = original id of local vertex k.
    order: Vec<usize>,
    /// Local adjacency.
    adj: Vec<NodeSet>,
    /// Original id -> local index.
    local: Vec<Option<usize>>,
}

impl CliqueSolver {
    fn new(cg: &CompatibilityGraph, allowed: &NodeSet) -> Self {
        let ids: Vec<usize> = allowed.iter().collect();
        let order = degeneracy_order(cg, &ids);
        let mut local = vec![None; cg.len()];
        for (k, &i) in order.iter().enumerate() {
            local[i] = Some(k);
        }
        let n = order.len();
        let adj = order
            .iter()
            .map(|&i| {
                let mut row = NodeSet::new(n);
                for j in cg.neighbours(i).iter() {
                    if let Some(k) = local[j] {
                        row.insert(k);
                    }
                }
                row
            })
            .collect();
        CliqueSolver { order, adj, local }
    }

    fn to_local(&self, ids: &NodeSet) -> NodeSet {
        NodeSet::from_ids(
            self.order.len(),
            ids.iter().filter_map(|i| self.local.get(i).copied().flatten()),
        )
    }

    fn maximum(&self) -> Vec<usize> {
        let mut search = Search {
            adj: &self.adj,
            best: Vec::new(),
            target: usize::MAX,
        };
        let mut clique = Vec::new();
        search.expand(&mut clique, NodeSet::full(self.order.len()));
        search.best.iter().map(|&k| self.order[k]).collect()
    }

    /// Whether some clique of size `k` lies within `cand` (original ids).
    fn has_clique(&self, cand: &NodeSet, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        let cand = self.to_local(cand);
        if cand.len() < k {
            return false;
        }
        let mut search = Search {
            adj: &self.adj,
            best: Vec::new(),
            target: k,
        };
        search.best = vec![usize::MAX; k - 1];
        let mut clique = Vec::new();
        search.expand(&mut clique, cand);
        search.best.len() >= k
    }

    fn lex_least_maximum(&self) -> CompatibleSet {
        let omega = self.maximum().len();
        let capacity = self.local.len();
        let mut cand = NodeSet::from_ids(capacity, self.order.iter().copied());
        let mut chosen = Vec::with_capacity(omega);
        while chosen.len() < omega {
            let need = omega - chosen.len() - 1;
            let pick = cand
                .iter()
                .find(|&i| {
                    let mut rest = cand.clone();
                    rest.retain_above(i);
                    rest.intersect_with(&self.adj_original(i, capacity));
                    self.has_clique(&rest, need)
                })
                .expect("a maximum clique extends the chosen prefix");
            chosen.push(pick);
            cand.retain_above(pick);
            cand.intersect_with(&self.adj_original(pick, capacity));
        }
        CompatibleSet::new(chosen)
    }

    fn adj_original(&self, i: usize, capacity: usize) -> NodeSet {
        let k = self.local[i].expect("allowed node");
        NodeSet::from_ids(capacity, self.adj[k].iter().map(|l| self.order[l]))
    }
}

struct Search<'a> {
    adj: &'a [NodeSet],
    best: Vec<usize>,
    /// Stop as soon as a clique of this size is found.
    target: usize,
}

impl Search<'_> {
    fn expand(&mut self, clique: &mut Vec<usize>, mut cand: NodeSet) {
        if clique.len() > self.best.len() {
            self.best = clique.clone();
        }
        if self.best.len() >= self.target {
            return;
        }
        let (verts, colours) = colour_sort(self.adj, &cand);
        for idx in (0..verts.len()).rev() {
            if clique.len() + colours[idx] <= self.best.len() {
                return;
            }
            let v = verts[idx];
            clique.push(v);
            let next = cand.intersection(&self.adj[v]);
            if next.is_empty() {
                if clique.len() > self.best.len() {
                    self.best = clique.clone();
                }
            } else {
                self.expand(clique, next);
            }
            clique.pop();
            if self.best.len() >= self.target {
                return;
            }
            cand.remove(v);
        }
    }
}

/// Greedy sequential colouring in index order; returns vertices sorted by colour and
/// the colour count bound at each position.
fn colour_sort(adj: &[NodeSet], cand: &NodeSet) -> (Vec<usize>, Vec<usize>) {
    let mut uncoloured = cand.clone();
    let mut verts = Vec::with_capacity(cand.len());
    let mut colours = Vec::with_capacity(cand.len());
    let mut colour = 0;
    while !uncoloured.is_empty() {
        colour += 1;
        let mut available = uncoloured.clone();
        while let Some(v) = available.first() {
            available.remove(v);
            available.difference_with(&adj[v]);
            uncoloured.remove(v);
            verts.push(v);
            colours.push(colour);
        }
    }
    (verts, colours)
}

/// Vertices ordered so that high-core vertices come first; ties by id.
fn degeneracy_order(cg: &CompatibilityGraph, ids: &[usize]) -> Vec<usize> {
    let n = cg.len();
    let within = NodeSet::from_ids(n, ids.iter().copied());
    let mut degree: Vec<usize> = (0..n)
        .map(|i| {
            if within.contains(i) {
                cg.neighbours(i).intersection(&within).len()
            } else {
                0
            }
        })
        .collect();
    let mut alive = within;
    let mut removal = Vec::with_capacity(ids.len());
    while let Some(first) = alive.first() {
        let v = alive
            .iter()
            .fold(first, |best, i| if degree[i] < degree[best] { i } else { best });
        alive.remove(v);
        removal.push(v);
        for j in cg.neighbours(v).iter().filter(|&j| alive.contains(j)) {
            degree[j] -= 1;
        }
    }
    removal.reverse();
    removal
}

/// Depth-first enumeration of all cliques (including ∅) of size at most `max_size`,
/// in lexicographic order of their sorted member lists.
pub struct CliqueIter<'a> {
    cg: &'a CompatibilityGraph,
    max_size: usize,
    stack: Vec<(Vec<usize>, NodeSet)>,
}

impl<'a> CliqueIter<'a> {
    pub fn new(cg: &'a CompatibilityGraph, max_size: usize) -> Self {
        Self::within(cg, &cg.all_nodes(), max_size)
    }

    /// Cliques drawn from `allowed` only.
    pub fn within(cg: &'a CompatibilityGraph, allowed: &NodeSet, max_size: usize) -> Self {
        CliqueIter {
            cg,
            max_size,
            stack: vec![(Vec::new(), allowed.clone())],
        }
    }
}

impl Iterator for CliqueIter<'_> {
    type Item = CompatibleSet;

    fn next(&mut self) -> Option<CompatibleSet> {
        let (clique, cand) = self.stack.pop()?;
        if clique.len() < self.max_size {
            let ids: Vec<usize> = cand.iter().collect();
            for &i in ids.iter().rev() {
                let mut next = cand.intersection(self.cg.neighbours(i));
                next.retain_above(i);
                let mut c = clique.clone();
                c.push(i);
                self.stack.push((c, next));
            }
        }
        Some(CompatibleSet { members: clique })
    }
}

/// All cliques of size ≤ `max_size`; fails once more than `cap` have been produced.
pub fn enumerate_compatible_sets(
    cg: &CompatibilityGraph,
    max_size: usize,
    cap: usize,
) -> std::result::Result<Vec<CompatibleSet>, CapExceeded> {
    let mut out = Vec::new();
    for set in CliqueIter::new(cg, max_size) {
        if out.len() == cap {
            return Err(CapExceeded { cap, partial: out });
        }
        out.push(set);
    }
    Ok(out)
}

/// Overflow signal carrying the sets produced before the cap was hit.
#[derive(Debug)]
pub struct CapExceeded {
    pub cap: usize,
    pub partial: Vec<CompatibleSet>,
}

impl From<CapExceeded> for Error {
    fn from(e: CapExceeded) -> Self {
        Error::CapExceeded {
            what: "compatible set count",
            cap: e.cap,
        }
    }
}
