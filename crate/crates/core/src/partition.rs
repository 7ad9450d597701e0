//! Whitehead partitions of V± and the automorphisms they induce.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{classify_vertices, SignedVertex, SignedVertexSet, SimplicialGraph, VertexId, VertexSet};

/// Upper bound on free units per base; 2^k assignments are enumerated.
pub const MAX_UNITS_PER_BASE: usize = 24;

/// Upper bound on the total number of partitions collected by [`all_partitions`].
pub const DEFAULT_PARTITION_LIMIT: usize = 1 << 20;

/// A partition of V± into two sides and a link.
///
/// Equality, hashing and ordering use the unordered pair of sides only.
#[derive(Clone, Copy)]
pub struct Partition {
    side_a: SignedVertexSet,
    side_b: SignedVertexSet,
    link: SignedVertexSet,
    split: VertexSet,
    max_bases: VertexSet,
    thick: bool,
}

impl Partition {
    /// The partition based at `base` having `side` as one side.
    pub fn from_side(g: &SimplicialGraph, base: VertexId, side: SignedVertexSet) -> Result<Self> {
        let p = Self::almost(g, base, side)?;
        if !p.thick {
            return Err(Error::InvalidPartition("a side has fewer than two elements".into()));
        }
        Ok(p)
    }

    /// Like [`Partition::from_side`] but accepts thin sides; the result is flagged non-thick.
    pub fn almost(g: &SimplicialGraph, base: VertexId, side: SignedVertexSet) -> Result<Self> {
        g.link(base)?;
        let link = g.lk(base).doubled();
        let universe = SignedVertexSet::universe(g.vertex_count());
        if side.intersects(link) {
            return Err(Error::InvalidPartition("side meets the link of the base".into()));
        }
        if !side.is_subset(universe) {
            return Err(Error::InvalidPartition("side is not a subset of V±".into()));
        }
        if side.contains(base.pos()) == side.contains(base.neg()) {
            return Err(Error::InvalidPartition(
                "base and its inverse must lie on different sides".into(),
            ));
        }
        for unit in g.units(base) {
            if unit.intersects(side) && !unit.is_subset(side) {
                return Err(Error::InvalidPartition(
                    "side cuts through a component of Γ ∖ st(base)".into(),
                ));
            }
        }
        let other = universe - link - side;
        Ok(Self::assemble(g, side, other, link))
    }

    fn assemble(g: &SimplicialGraph, x: SignedVertexSet, y: SignedVertexSet, link: SignedVertexSet) -> Self {
        let (side_a, side_b) = if x.first() < y.first() { (x, y) } else { (y, x) };
        let split = side_a.one_sign();
        let max_bases = split
            .iter()
            .filter(|&w| split.iter().all(|z| !g.le(w, z) || g.le(z, w)))
            .collect();
        Partition {
            side_a,
            side_b,
            link,
            split,
            max_bases,
            thick: side_a.len() >= 2 && side_b.len() >= 2,
        }
    }

    pub fn side_a(&self) -> SignedVertexSet {
        self.side_a
    }

    pub fn side_b(&self) -> SignedVertexSet {
        self.side_b
    }

    pub fn sides(&self) -> [SignedVertexSet; 2] {
        [self.side_a, self.side_b]
    }

    pub fn link(&self) -> SignedVertexSet {
        self.link
    }

    /// Underlying vertices of the link.
    pub fn link_vertices(&self) -> VertexSet {
        self.link.touched()
    }

    pub fn split(&self) -> VertexSet {
        self.split
    }

    /// The maximal split vertices: the legal bases.
    pub fn max_bases(&self) -> VertexSet {
        self.max_bases
    }

    pub fn is_thick(&self) -> bool {
        self.thick
    }

    /// The side containing `x`, if `x` is not in the link.
    pub fn side_containing(&self, x: SignedVertex) -> Option<SignedVertexSet> {
        if self.side_a.contains(x) {
            Some(self.side_a)
        } else if self.side_b.contains(x) {
            Some(self.side_b)
        } else {
            None
        }
    }

    pub fn to_json(&self, g: &SimplicialGraph) -> PartitionJson {
        PartitionJson {
            side_a: g.signed_names_of(self.side_a),
            side_b: g.signed_names_of(self.side_b),
            link: g.signed_names_of(self.link),
            max: g.names_of(self.max_bases),
        }
    }

    /// Short text form: the two sides separated by `|`.
    pub fn display<'a>(&'a self, g: &'a SimplicialGraph) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Partition, &'a SimplicialGraph);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let a = self.1.signed_names_of(self.0.side_a).join(",");
                let b = self.1.signed_names_of(self.0.side_b).join(",");
                write!(f, "{{{a}}} | {{{b}}}")
            }
        }
        D(self, g)
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        self.side_a == other.side_a && self.side_b == other.side_b
    }
}

impl Eq for Partition {}

impl std::hash::Hash for Partition {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.side_a.hash(state);
        self.side_b.hash(state);
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.side_a, self.side_b).cmp(&(other.side_a, other.side_b))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition({:?} | {:?})", self.side_a, self.side_b)
    }
}

/// Report form of a partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionJson {
    #[serde(rename = "sideA")]
    pub side_a: Vec<String>,
    #[serde(rename = "sideB")]
    pub side_b: Vec<String>,
    pub link: Vec<String>,
    pub max: Vec<String>,
}

/// Result of enumerating from one base.
#[derive(Clone, Debug)]
pub struct BasedPartitions {
    pub base: VertexId,
    pub partitions: Vec<Partition>,
    /// Set when the base admits no partition.
    pub note: Option<String>,
}

/// Every partition admitting `base` as a base, in canonical order.
pub fn enumerate_partitions(g: &SimplicialGraph, base: VertexId) -> Result<BasedPartitions> {
    g.link(base)?;
    let units = g.units(base);
    let k = units.len();
    if k < 2 {
        let note = format!(
            "`{}` is not relevant: Γ± ∖ st({})± has {k} component(s)",
            g.name(base),
            g.name(base)
        );
        log::debug!("{note}");
        return Ok(BasedPartitions {
            base,
            partitions: Vec::new(),
            note: Some(note),
        });
    }
    if k > MAX_UNITS_PER_BASE {
        return Err(Error::CapExceeded {
            what: "side assignments per base",
            cap: 1 << MAX_UNITS_PER_BASE,
        });
    }
    let link = g.lk(base).doubled();
    let universe = SignedVertexSet::universe(g.vertex_count());
    let mut partitions = Vec::with_capacity((1 << k) - 2);
    for mask in 1u64..(1 << k) - 1 {
        let mut side = SignedVertexSet::singleton(base.pos());
        for (i, unit) in units.iter().enumerate() {
            if mask >> i & 1 == 1 {
                side = side | *unit;
            }
        }
        let other = universe - link - side;
        partitions.push(Partition::assemble(g, side, other, link));
    }
    partitions.sort();
    partitions.dedup();
    Ok(BasedPartitions {
        base,
        partitions,
        note: None,
    })
}

/// All partitions of `g`, deduplicated and sorted.
pub fn all_partitions(g: &SimplicialGraph) -> Result<Vec<Partition>> {
    all_partitions_capped(g, DEFAULT_PARTITION_LIMIT)
}

pub fn all_partitions_capped(g: &SimplicialGraph, limit: usize) -> Result<Vec<Partition>> {
    let relevant = classify_vertices(g).relevant;
    let mut expected = 0usize;
    for v in relevant.iter() {
        let k = g.units(v).len();
        if k > MAX_UNITS_PER_BASE {
            return Err(Error::CapExceeded {
                what: "partition count",
                cap: limit,
            });
        }
        expected += (1usize << k) - 2;
        if expected > limit {
            return Err(Error::CapExceeded {
                what: "partition count",
                cap: limit,
            });
        }
    }
    let per_base: Vec<Vec<Partition>> = relevant
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|v| enumerate_partitions(g, v).map(|b| b.partitions))
        .collect::<Result<_>>()?;
    let mut out: Vec<Partition> = per_base.into_iter().flatten().collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// A word in the generators and their inverses.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GeneratorWord(pub Vec<SignedVertex>);

impl GeneratorWord {
    pub fn letter(x: SignedVertex) -> Self {
        GeneratorWord(vec![x])
    }

    pub fn letters(&self) -> &[SignedVertex] {
        &self.0
    }

    pub fn inverse(&self) -> Self {
        GeneratorWord(self.0.iter().rev().map(|x| x.inverse()).collect())
    }

    /// Cancels adjacent x x⁻¹ pairs.
    pub fn free_reduce(&self) -> Self {
        let mut out: Vec<SignedVertex> = Vec::with_capacity(self.0.len());
        for &x in &self.0 {
            if out.last() == Some(&x.inverse()) {
                out.pop();
            } else {
                out.push(x);
            }
        }
        GeneratorWord(out)
    }

    /// Substitutes each generator by its image (inverses by inverted images), then reduces.
    pub fn substitute(&self, images: &BTreeMap<VertexId, GeneratorWord>) -> Self {
        let mut out = Vec::new();
        for &x in &self.0 {
            let image = images
                .get(&x.vertex())
                .cloned()
                .unwrap_or_else(|| GeneratorWord::letter(x.vertex().pos()));
            match x.sign() {
                crate::graph::Sign::Pos => out.extend(image.0),
                crate::graph::Sign::Neg => out.extend(image.inverse().0),
            }
        }
        GeneratorWord(out).free_reduce()
    }

    pub fn render(&self, g: &SimplicialGraph) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0.iter().map(|&x| g.signed_name(x)).collect::<Vec<_>>().join("·")
    }
}

impl fmt::Debug for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Images of the generators under the Whitehead automorphism of `p` with base letter `m`.
///
/// With P the side containing m: split y ∈ P goes to y·m⁻¹, split y with y⁻¹ ∈ P goes to m·y,
/// y with y, y⁻¹ ∈ P goes to m·y·m⁻¹. The base generator and everything else is fixed.
pub fn whitehead_images(
    g: &SimplicialGraph,
    p: &Partition,
    m: SignedVertex,
) -> Result<BTreeMap<VertexId, GeneratorWord>> {
    if !p.max_bases.contains(m.vertex()) {
        return Err(Error::Precondition(format!(
            "`{}` is not a base of the partition",
            g.name(m.vertex())
        )));
    }
    let side = p.side_containing(m).expect("a base is split");
    let mut images = BTreeMap::new();
    for y in g.vertices() {
        let word = if y == m.vertex() {
            vec![y.pos()]
        } else if side.contains(y.pos()) && side.contains(y.neg()) {
            vec![m, y.pos(), m.inverse()]
        } else if side.contains(y.pos()) {
            vec![y.pos(), m.inverse()]
        } else if side.contains(y.neg()) {
            vec![m, y.pos()]
        } else {
            vec![y.pos()]
        };
        images.insert(y, GeneratorWord(word));
    }
    Ok(images)
}

/// The partition whose automorphism with base m⁻¹ inverts that of `p` with base `m`:
/// same units, with m and m⁻¹ exchanged between the sides.
pub fn inverse_choice(g: &SimplicialGraph, p: &Partition, m: SignedVertex) -> Result<Partition> {
    let side = p
        .side_containing(m)
        .ok_or_else(|| Error::Precondition("base letter lies in the link".into()))?;
    let swapped = (side - SignedVertexSet::singleton(m)) | SignedVertexSet::singleton(m.inverse());
    Partition::from_side(g, m.vertex(), swapped)
}
