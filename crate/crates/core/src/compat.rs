//! Adjacency and compatibility of partitions, and the compatibility graph.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{classify_vertices, SimplicialGraph, VertexSet};
use crate::partition::{all_partitions, Partition};
use crate::search::NodeSet;

/// max(p) ⊆ lk(q) as vertices.
pub fn is_adjacent(p: &Partition, q: &Partition) -> bool {
    p.max_bases().is_subset(q.link_vertices())
}

/// Distinct partitions that are adjacent or have a disjoint pair of sides.
pub fn is_compatible(p: &Partition, q: &Partition) -> bool {
    if p == q {
        return false;
    }
    if is_adjacent(p, q) {
        return true;
    }
    p.sides().iter().any(|x| q.sides().iter().any(|y| !x.intersects(*y)))
}

/// Nodes are the canonical partitions of a graph; edges join compatible pairs.
#[derive(Clone, Debug)]
pub struct CompatibilityGraph {
    nodes: Vec<Partition>,
    principal: Vec<bool>,
    adjacency: Vec<NodeSet>,
}

pub fn compatibility_graph(g: &SimplicialGraph) -> Result<CompatibilityGraph> {
    CompatibilityGraph::build(g)
}

impl CompatibilityGraph {
    pub fn build(g: &SimplicialGraph) -> Result<Self> {
        let nodes = all_partitions(g)?;
        let adjacency = pairwise(&nodes);
        Ok(Self::assemble(g, nodes, adjacency))
    }

    fn assemble(g: &SimplicialGraph, nodes: Vec<Partition>, adjacency: Vec<NodeSet>) -> Self {
        let principal_vertices = classify_vertices(g).principal;
        let principal = nodes
            .iter()
            .map(|p| p.max_bases().intersects(principal_vertices))
            .collect();
        CompatibilityGraph {
            nodes,
            principal,
            adjacency,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Partition] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &Partition {
        &self.nodes[i]
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.nodes.binary_search(p).ok()
    }

    pub fn is_principal(&self, i: usize) -> bool {
        self.principal[i]
    }

    pub fn compatible(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn neighbours(&self, i: usize) -> &NodeSet {
        &self.adjacency[i]
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(NodeSet::len).sum::<usize>() / 2
    }

    /// Nodes that may be based at some vertex of `w`.
    pub fn based_in(&self, w: VertexSet) -> NodeSet {
        let mut out = NodeSet::new(self.len());
        for (i, p) in self.nodes.iter().enumerate() {
            if p.max_bases().intersects(w) {
                out.insert(i);
            }
        }
        out
    }

    pub fn principal_nodes(&self) -> NodeSet {
        let mut out = NodeSet::new(self.len());
        for i in (0..self.len()).filter(|&i| self.principal[i]) {
            out.insert(i);
        }
        out
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.len())
    }

    /// Loads the cached relation for `g` from `dir`, or builds and stores it.
    pub fn load_or_build(g: &SimplicialGraph, dir: &Path) -> Result<(Self, CacheStatus)> {
        let nodes = all_partitions(g)?;
        let hash = g.content_hash();
        let path = cache_path(dir, &hash);
        if path.exists() {
            match read_cache(&path, &hash, &nodes) {
                Ok(adjacency) => {
                    log::info!("compatibility cache hit: {}", path.display());
                    return Ok((Self::assemble(g, nodes, adjacency), CacheStatus::Hit));
                }
                Err(e) => log::warn!("ignoring compatibility cache {}: {e}", path.display()),
            }
        }
        let adjacency = pairwise(&nodes);
        let cg = Self::assemble(g, nodes, adjacency);
        if let Err(e) = write_cache(dir, &path, &hash, &cg) {
            log::warn!("could not write compatibility cache {}: {e}", path.display());
        }
        Ok((cg, CacheStatus::Miss))
    }
}

fn pairwise(nodes: &[Partition]) -> Vec<NodeSet> {
    let n = nodes.len();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = NodeSet::new(n);
            for j in 0..n {
                if is_compatible(&nodes[i], &nodes[j]) {
                    row.insert(j);
                }
            }
            row
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
}

pub const CACHE_VERSION: u32 = 1;

/// On-disk layout. `nodes` holds each partition's two sides as hex-encoded 128-bit masks
/// (bit 2i is vertex i, bit 2i+1 its inverse); `adjacency_bits` holds one hex string per
/// node, the row's 64-bit words in order, each as 16 hex digits.
#[derive(Debug, Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    graph_hash: String,
    nodes: Vec<[String; 2]>,
    adjacency_bits: Vec<String>,
}

fn cache_path(dir: &Path, hash: &str) -> PathBuf {
    dir.join(format!("compat-{hash}.json"))
}

/// `RAAG_CACHE_DIR` if set, else a directory under the system temp dir.
pub fn default_cache_dir() -> PathBuf {
    std::env::var_os("RAAG_CACHE_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("raag-cache"))
}

fn read_cache(path: &Path, hash: &str, nodes: &[Partition]) -> Result<Vec<NodeSet>> {
    let text = std::fs::read_to_string(path)?;
    let file: CacheFile = serde_json::from_str(&text)?;
    let bad = |m: &str| Error::Cache(m.to_string());
    if file.version != CACHE_VERSION {
        return Err(bad("version mismatch"));
    }
    if file.graph_hash != hash {
        return Err(bad("graph hash mismatch"));
    }
    if file.nodes.len() != nodes.len() || file.adjacency_bits.len() != nodes.len() {
        return Err(bad("node count mismatch"));
    }
    for (stored, p) in file.nodes.iter().zip(nodes) {
        let a = u128::from_str_radix(&stored[0], 16).map_err(|_| bad("bad node encoding"))?;
        let b = u128::from_str_radix(&stored[1], 16).map_err(|_| bad("bad node encoding"))?;
        if a != p.side_a().0 || b != p.side_b().0 {
            return Err(bad("node list differs"));
        }
    }
    let n = nodes.len();
    let rows: Vec<NodeSet> = file
        .adjacency_bits
        .iter()
        .map(|s| NodeSet::from_hex(n, s).ok_or_else(|| bad("bad adjacency row")))
        .collect::<Result<_>>()?;
    for i in 0..n {
        if rows[i].contains(i) {
            return Err(bad("reflexive adjacency"));
        }
        for j in rows[i].iter() {
            if !rows[j].contains(i) {
                return Err(bad("asymmetric adjacency"));
            }
        }
    }
    Ok(rows)
}

fn write_cache(dir: &Path, path: &Path, hash: &str, cg: &CompatibilityGraph) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let file = CacheFile {
        version: CACHE_VERSION,
        graph_hash: hash.to_string(),
        nodes: cg
            .nodes
            .iter()
            .map(|p| [format!("{:x}", p.side_a().0), format!("{:x}", p.side_b().0)])
            .collect(),
        adjacency_bits: cg.adjacency.iter().map(NodeSet::to_hex).collect(),
    };
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, serde_json::to_string(&file)?)?;
    std::fs::rename(tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::partition::enumerate_partitions;

    fn trio() -> (SimplicialGraph, [Partition; 3]) {
        let g = families::path_plus_isolated();
        let v = |n: &str| g.vertex(n).unwrap();
        let s = |l: &[&str]| g.signed_set(l).unwrap();
        let ps = [
            Partition::from_side(&g, v("a"), s(&["a", "c", "c^-1", "d", "d^-1"])).unwrap(),
            Partition::from_side(&g, v("b"), s(&["b", "e"])).unwrap(),
            Partition::from_side(&g, v("d"), s(&["d", "a", "a^-1", "b", "b^-1", "e^-1"])).unwrap(),
        ];
        (g, ps)
    }

    #[test]
    fn trio_relations() {
        let (_, [p1, p2, p3]) = trio();
        assert!(is_adjacent(&p1, &p2));
        assert!(is_adjacent(&p2, &p1));
        assert!(!is_adjacent(&p3, &p1));
        assert!(!is_adjacent(&p3, &p2));
        assert!(is_compatible(&p1, &p2));
        assert!(!is_compatible(&p3, &p2));
        assert!(!is_compatible(&p3, &p1));
    }

    #[test]
    fn rake_u_partitions_clash() {
        // {u, C1} | {u^-1, C2} against {u, C2} | {u^-1, C1}: every side pair meets.
        let g = families::rake(2).unwrap();
        let ps = enumerate_partitions(&g, g.vertex("u").unwrap()).unwrap().partitions;
        assert_eq!(ps.len(), 2);
        assert!(!is_adjacent(&ps[0], &ps[1]));
        assert!(!is_compatible(&ps[0], &ps[1]));
        assert!(!is_compatible(&ps[0], &ps[0]));
    }

    #[test]
    fn complete_graph_is_empty() {
        let cg = compatibility_graph(&families::complete(3).unwrap()).unwrap();
        assert!(cg.is_empty());
    }

    #[test]
    fn short_rake_counts() {
        // Oracle: direct pairwise evaluation over the four partitions of the 1-rake.
        let g = families::rake(1).unwrap();
        let cg = compatibility_graph(&g).unwrap();
        assert_eq!(cg.len(), 4);
        let mut edges = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                let (p, q) = (cg.node(i), cg.node(j));
                let disjoint = p.sides().iter().any(|x| q.sides().iter().any(|y| (*x & *y).is_empty()));
                if disjoint || p.max_bases().is_subset(q.link().touched()) {
                    edges += 1;
                }
            }
        }
        assert_eq!(cg.edge_count(), edges);
        assert_eq!(edges, 4);
    }

    #[test]
    fn cache_roundtrip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let g = families::rake(2).unwrap();
        let (a, s1) = CompatibilityGraph::load_or_build(&g, dir.path()).unwrap();
        assert_eq!(s1, CacheStatus::Miss);
        let (b, s2) = CompatibilityGraph::load_or_build(&g, dir.path()).unwrap();
        assert_eq!(s2, CacheStatus::Hit);
        assert_eq!(a.adjacency, b.adjacency);

        let path = cache_path(dir.path(), &g.content_hash());
        std::fs::write(&path, "{ not json").unwrap();
        let (c, s3) = CompatibilityGraph::load_or_build(&g, dir.path()).unwrap();
        assert_eq!(s3, CacheStatus::Miss);
        assert_eq!(a.adjacency, c.adjacency);
    }
}
