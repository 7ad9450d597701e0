//! The star of a Salvetti vertex as an explicit cube complex, and its retraction by
//! free-face collapses.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::compat::CompatibilityGraph;
use crate::conditions::is_spiky;
use crate::error::{Error, Result};
use crate::graph::{classify_vertices, SimplicialGraph};
use crate::hugging::{cube_survives, HugIndex, HugMode};
use crate::search::{max_compatible, CliqueIter, CompatibleSet};

/// Largest node count the star representation supports.
pub const MAX_STAR_NODES: usize = 128;

/// Default bound on the number of cubes in a star.
pub const DEFAULT_CUBE_CAP: usize = 4_000_000;

/// The cube c(Π₁, Π₂): all blowups by S with Π₁ ⊆ S ⊆ Π₂.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CubeAddress {
    pub lower: CompatibleSet,
    pub upper: CompatibleSet,
}

impl CubeAddress {
    pub fn new(lower: CompatibleSet, upper: CompatibleSet) -> Result<Self> {
        if !lower.is_subset(&upper) {
            return Err(Error::Precondition("lower set is not contained in upper set".into()));
        }
        Ok(CubeAddress { lower, upper })
    }

    pub fn dimension(&self) -> usize {
        self.upper.len() - self.lower.len()
    }

    /// Π₁ ⊆ A ⊆ B ⊆ Π₂ for `face` = c(A, B).
    pub fn has_face(&self, face: &CubeAddress) -> bool {
        self.lower.is_subset(&face.lower) && face.upper.is_subset(&self.upper) && face.lower.is_subset(&face.upper)
    }
}

fn mask_of(ids: &[usize]) -> u128 {
    ids.iter().fold(0, |m, &i| m | 1 << i)
}

fn ids_of(mut mask: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// Cubes c(Π₁, Π₂) over all compatible sets Π₂. Each clique keeps a presence bit per
/// subset Π₁, indexed by the bitmask of Π₁ over the clique's sorted members.
#[derive(Clone, Debug)]
pub struct StarComplex {
    node_count: usize,
    cliques: Vec<u128>,
    members: Vec<Vec<usize>>,
    index: HashMap<u128, usize>,
    present: Vec<Vec<u64>>,
    live: usize,
}

pub fn build_star(cg: &CompatibilityGraph, cap: usize) -> Result<StarComplex> {
    StarComplex::build(cg, cap)
}

impl StarComplex {
    pub fn build(cg: &CompatibilityGraph, cap: usize) -> Result<Self> {
        if cg.len() > MAX_STAR_NODES {
            return Err(Error::Precondition(format!(
                "star complexes support at most {MAX_STAR_NODES} partitions, graph has {}",
                cg.len()
            )));
        }
        let mut star = StarComplex {
            node_count: cg.len(),
            cliques: Vec::new(),
            members: Vec::new(),
            index: HashMap::new(),
            present: Vec::new(),
            live: 0,
        };
        for set in CliqueIter::new(cg, usize::MAX) {
            let k = set.len();
            let cubes = 1usize.checked_shl(k as u32).unwrap_or(usize::MAX);
            star.live = star.live.saturating_add(cubes);
            if star.live > cap {
                return Err(Error::CapExceeded {
                    what: "star cubes",
                    cap,
                });
            }
            let mask = mask_of(&set.members);
            let mut bits = vec![u64::MAX; cubes.div_ceil(64)];
            if cubes < 64 {
                bits[0] = (1u64 << cubes) - 1;
            }
            star.index.insert(mask, star.cliques.len());
            star.cliques.push(mask);
            star.members.push(set.members);
            star.present.push(bits);
        }
        Ok(star)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn clique_count(&self) -> usize {
        self.cliques.len()
    }

    pub fn cube_count(&self) -> usize {
        self.live
    }

    /// Bitmask of `lower` over the sorted members of clique `c`.
    fn compress(&self, c: usize, lower: u128) -> usize {
        self.members[c]
            .iter()
            .enumerate()
            .filter(|(_, &i)| lower >> i & 1 == 1)
            .fold(0, |m, (pos, _)| m | 1 << pos)
    }

    fn expand(&self, c: usize, local: usize) -> u128 {
        self.members[c]
            .iter()
            .enumerate()
            .filter(|(pos, _)| local >> pos & 1 == 1)
            .fold(0, |m, (_, &i)| m | 1 << i)
    }

    fn bit(&self, c: usize, local: usize) -> bool {
        self.present[c][local / 64] >> (local % 64) & 1 == 1
    }

    fn has(&self, lower: u128, upper: u128) -> bool {
        if lower & !upper != 0 {
            return false;
        }
        match self.index.get(&upper) {
            Some(&c) => self.bit(c, self.compress(c, lower)),
            None => false,
        }
    }

    fn clear(&mut self, lower: u128, upper: u128) -> bool {
        let Some(&c) = self.index.get(&upper) else { return false };
        let local = self.compress(c, lower);
        let word = &mut self.present[c][local / 64];
        let bit = 1u64 << (local % 64);
        if *word & bit == 0 {
            return false;
        }
        *word &= !bit;
        self.live -= 1;
        true
    }

    pub fn contains(&self, cube: &CubeAddress) -> bool {
        if cube.upper.members.iter().any(|&i| i >= self.node_count) {
            return false;
        }
        self.has(mask_of(&cube.lower.members), mask_of(&cube.upper.members))
    }

    /// Present cubes as (clique id, local lower mask).
    fn live_cubes(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.cliques.len()).flat_map(move |c| {
            (0..1usize << self.members[c].len())
                .filter(move |&l| self.bit(c, l))
                .map(move |l| (c, l))
        })
    }

    fn address(&self, c: usize, local: usize) -> CubeAddress {
        CubeAddress {
            lower: CompatibleSet {
                members: ids_of(self.expand(c, local)),
            },
            upper: CompatibleSet {
                members: self.members[c].clone(),
            },
        }
    }

    /// All present cubes, sorted.
    pub fn cubes(&self) -> Vec<CubeAddress> {
        let mut out: Vec<CubeAddress> = self.live_cubes().map(|(c, l)| self.address(c, l)).collect();
        out.sort();
        out
    }

    pub fn stats(&self) -> ComplexStats {
        let mut f_vector = Vec::new();
        for (c, l) in self.live_cubes() {
            let dim = self.members[c].len() - (l.count_ones() as usize);
            if f_vector.len() <= dim {
                f_vector.resize(dim + 1, 0);
            }
            f_vector[dim] += 1;
        }
        ComplexStats::from_f_vector(f_vector)
    }

    /// Every face of every present cube is present.
    pub fn is_face_closed(&self) -> bool {
        self.live_cubes().all(|(c, l)| {
            let upper = self.cliques[c];
            let lower = self.expand(c, l);
            let free = ids_of(upper & !lower);
            // Codimension-one faces suffice: raise the bottom or drop a top element.
            free.iter()
                .all(|&x| self.has(lower | 1 << x, upper) && self.has(lower, upper & !(1 << x)))
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexStats {
    /// None for the empty complex.
    pub dimension: Option<usize>,
    pub f_vector: Vec<usize>,
    pub cubes: usize,
    pub euler_characteristic: i64,
}

impl ComplexStats {
    pub fn from_f_vector(f_vector: Vec<usize>) -> Self {
        let euler_characteristic = f_vector
            .iter()
            .enumerate()
            .map(|(d, &n)| if d % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum();
        ComplexStats {
            dimension: f_vector.len().checked_sub(1),
            cubes: f_vector.iter().sum(),
            f_vector,
            euler_characteristic,
        }
    }
}

/// Behaviour when a collapse target has no free face.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NonFreePolicy {
    #[default]
    Fail,
    /// Record the cube and leave it in place.
    Skip,
}

/// Order of cubes within one (b, t, p) batch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchOrder {
    #[default]
    Forward,
    Reverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractOptions {
    pub on_non_free: NonFreePolicy,
    pub batch_order: BatchOrder,
    /// Refuse to run on graphs that are not spiky.
    pub require_spiky: bool,
    pub hug_mode: HugMode,
}

impl Default for RetractOptions {
    fn default() -> Self {
        RetractOptions {
            on_non_free: NonFreePolicy::Fail,
            batch_order: BatchOrder::Forward,
            require_spiky: true,
            hug_mode: HugMode::Relaxed,
        }
    }
}

impl RetractOptions {
    /// Runs on any graph and collapses only where freeness holds.
    pub fn permissive() -> Self {
        RetractOptions {
            on_non_free: NonFreePolicy::Skip,
            require_spiky: false,
            ..Self::default()
        }
    }
}

/// Position of a cube in the processing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Stage {
    /// |Π₁|.
    pub b: usize,
    /// M(V) − |Π₂|.
    pub t: usize,
    /// M(L) − number of principal partitions in Π₂.
    pub p: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollapseEvent {
    pub stage: Stage,
    pub cube: CubeAddress,
    pub free_face: CubeAddress,
    /// Hugged non-principal members of Π₂ ∖ Π₁.
    pub hugged: Vec<usize>,
    pub removed: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedCube {
    pub stage: Stage,
    pub cube: CubeAddress,
    /// A present cube containing the face without being a face of the target.
    pub blocking: CubeAddress,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractionTrace {
    pub events: Vec<CollapseEvent>,
    pub skipped: Vec<SkippedCube>,
    pub before: ComplexStats,
    pub after: ComplexStats,
    pub final_cubes: Vec<CubeAddress>,
}

/// Cube members, lower ids, lower mask, upper mask.
type Batch = (Vec<usize>, Vec<usize>, u128, u128);

pub fn retract(
    g: &SimplicialGraph,
    cg: &CompatibilityGraph,
    star: &StarComplex,
    opts: &RetractOptions,
) -> Result<RetractionTrace> {
    if star.node_count != cg.len() {
        return Err(Error::Precondition(
            "star was built from a different compatibility graph".into(),
        ));
    }
    if !is_spiky(g)? {
        if opts.require_spiky {
            return Err(Error::Precondition("graph is not spiky".into()));
        }
        log::warn!("graph is not spiky; collapsing only where faces are free");
    }
    let index = HugIndex::new(g, cg, opts.hug_mode)?;
    let principal = classify_vertices(g).principal;
    let m_l = max_compatible(cg, principal).size;
    let m_v = max_compatible(cg, g.all()).size;
    let principal_nodes: u128 = mask_of(&(0..cg.len()).filter(|&i| cg.is_principal(i)).collect::<Vec<_>>());

    let mut work = star.clone();
    let before = work.stats();

    let stage_of = |lower: u128, upper: u128| Stage {
        b: lower.count_ones() as usize,
        t: m_v - upper.count_ones() as usize,
        p: m_l.saturating_sub((upper & principal_nodes).count_ones() as usize),
    };
    let mut batches: BTreeMap<Stage, Vec<Batch>> = BTreeMap::new();
    for (c, l) in star.live_cubes() {
        let upper = star.cliques[c];
        let lower = star.expand(c, l);
        batches
            .entry(stage_of(lower, upper))
            .or_default()
            .push((star.members[c].clone(), ids_of(lower), lower, upper));
    }

    let adjacency: Vec<u128> = (0..cg.len())
        .map(|i| mask_of(&cg.neighbours(i).iter().collect::<Vec<_>>()))
        .collect();
    let common = |set: u128| {
        ids_of(set)
            .iter()
            .fold(!0u128 >> (128 - cg.len().max(1)), |m, &i| m & adjacency[i])
    };

    let mut events = Vec::new();
    let mut skipped = Vec::new();
    for (stage, mut batch) in batches {
        batch.sort_unstable_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
        if opts.batch_order == BatchOrder::Reverse {
            batch.reverse();
        }
        for (_, _, lower, upper) in batch {
            if !work.has(lower, upper) {
                continue;
            }
            let hugged: u128 = ids_of(upper & !lower)
                .into_iter()
                .filter(|&q| index.is_non_principal(q) && index.hugged(&upper, q))
                .fold(0, |m, q| m | 1 << q);
            if hugged == 0 {
                continue;
            }
            let face = upper & !hugged;
            if !cg.is_empty() {
                if let Some((a, b)) = blocking_coface(&work, lower, face, upper, common(face)) {
                    let cube = to_address(lower, upper);
                    let blocking = to_address(a, b);
                    match opts.on_non_free {
                        NonFreePolicy::Fail => {
                            return Err(Error::Structural(format!(
                                "face {:?} of cube {:?} is not free: contained in {:?}",
                                to_address(lower, face),
                                cube,
                                blocking
                            )))
                        }
                        NonFreePolicy::Skip => {
                            skipped.push(SkippedCube { stage, cube, blocking });
                            continue;
                        }
                    }
                }
            }
            let mut removed = 0;
            let mut sub = hugged;
            loop {
                if work.clear(lower, face | sub) {
                    removed += 1;
                }
                if sub == 0 {
                    break;
                }
                sub = (sub - 1) & hugged;
            }
            events.push(CollapseEvent {
                stage,
                cube: to_address(lower, upper),
                free_face: to_address(lower, face),
                hugged: ids_of(hugged),
                removed,
            });
        }
    }
    Ok(RetractionTrace {
        after: work.stats(),
        final_cubes: work.cubes(),
        before,
        events,
        skipped,
    })
}

fn to_address(lower: u128, upper: u128) -> CubeAddress {
    CubeAddress {
        lower: CompatibleSet { members: ids_of(lower) },
        upper: CompatibleSet { members: ids_of(upper) },
    }
}

/// A present cube (A, B) ⊇ c(lower, face) that is not a face of c(lower, upper).
///
/// The complex is face-closed, so it is enough to look at (lower ∖ y, face) and
/// (lower, face ∪ x): any offending coface has one of these as a face.
fn blocking_coface(star: &StarComplex, lower: u128, face: u128, upper: u128, addable: u128) -> Option<(u128, u128)> {
    for y in ids_of(lower) {
        let a = lower & !(1 << y);
        if star.has(a, face) {
            return Some((a, face));
        }
    }
    for x in ids_of(addable & !upper & !face) {
        let b = face | 1 << x;
        if star.has(lower, b) {
            return Some((lower, b));
        }
    }
    None
}

/// Outcome of comparing the retracted complex with the survivor predicate.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorCheck {
    pub checked: usize,
    /// Left in the complex although the predicate says redundant.
    pub unexpected: Vec<CubeAddress>,
    /// Removed although the predicate says it survives.
    pub missing: Vec<CubeAddress>,
}

impl SurvivorCheck {
    pub fn passed(&self) -> bool {
        self.unexpected.is_empty() && self.missing.is_empty()
    }
}

/// Compares the final cube set of `trace` with the predicate over every cube of `star`.
pub fn crosscheck_survivors(
    cg: &CompatibilityGraph,
    index: &HugIndex,
    star: &StarComplex,
    trace: &RetractionTrace,
) -> Result<SurvivorCheck> {
    if !trace.skipped.is_empty() {
        return Err(Error::Precondition("retraction skipped non-free cubes".into()));
    }
    let kept: std::collections::HashSet<&CubeAddress> = trace.final_cubes.iter().collect();
    let mut out = SurvivorCheck::default();
    for (c, l) in star.live_cubes() {
        let cube = star.address(c, l);
        out.checked += 1;
        let survives = cube_survives(cg, index, &cube.lower, &cube.upper)?;
        match (survives, kept.contains(&cube)) {
            (true, false) => out.missing.push(cube),
            (false, true) => out.unexpected.push(cube),
            _ => {}
        }
    }
    Ok(out)
}

/// Runs the retraction in both batch orders and reports whether the results agree.
pub fn batch_order_audit(
    g: &SimplicialGraph,
    cg: &CompatibilityGraph,
    star: &StarComplex,
    opts: &RetractOptions,
) -> Result<bool> {
    let forward = retract(
        g,
        cg,
        star,
        &RetractOptions {
            batch_order: BatchOrder::Forward,
            ..*opts
        },
    )?;
    let reverse = retract(
        g,
        cg,
        star,
        &RetractOptions {
            batch_order: BatchOrder::Reverse,
            ..*opts
        },
    )?;
    Ok(forward.final_cubes == reverse.final_cubes)
}
