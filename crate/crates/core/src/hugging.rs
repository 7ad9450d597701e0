//! Hugged partitions: the construction of huggers, detection inside compatible sets,
//! the cube survivor predicate, and exhaustive checks of the redundancy lemmas.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::compat::CompatibilityGraph;
use crate::conditions::{check_condition1, check_condition2, is_barbed};
use crate::error::{Error, Result};
use crate::graph::{classify_vertices, SignedVertexSet, SimplicialGraph, VertexId, VertexSet};
use crate::partition::Partition;
use crate::search::{common_neighbours, max_compatible, CompatibleSet, Members, NodeSet};

/// Which dominating vertices may carry huggers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HugMode {
    /// Any m with lk(u) ⊊ lk(m).
    #[default]
    Relaxed,
    /// Only principal m.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HugKind {
    OneHug,
    TwoHug,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HugWitness {
    pub kind: HugKind,
    pub base_u: VertexId,
    pub base_m: VertexId,
    /// The side Q of the hugged partition that contains m.
    pub hugged_side: SignedVertexSet,
    /// Units of Γ± ∖ lk(m)± inside Q going with m.
    pub c1: Vec<SignedVertexSet>,
    /// Units going with m⁻¹.
    pub c2: Vec<SignedVertexSet>,
    /// Node ids of the thick huggers.
    pub huggers: Vec<usize>,
}

impl HugWitness {
    /// The hugger sides P₁ = {m} ∪ C₁ and P₂ = {m⁻¹} ∪ C₂.
    pub fn hugger_sides(&self) -> (SignedVertexSet, SignedVertexSet) {
        let union = |units: &[SignedVertexSet]| units.iter().fold(SignedVertexSet::EMPTY, |a, &b| a | b);
        (
            union(&self.c1) | SignedVertexSet::singleton(self.base_m.pos()),
            union(&self.c2) | SignedVertexSet::singleton(self.base_m.neg()),
        )
    }
}

/// One split (C₁, C₂) of C^Q(m) with the induced pair of (possibly thin) partitions.
#[derive(Clone, Debug)]
pub struct HugCandidate {
    pub c1: Vec<SignedVertexSet>,
    pub c2: Vec<SignedVertexSet>,
    pub p1: Partition,
    pub p2: Partition,
}

impl HugCandidate {
    pub fn kind(&self) -> Option<HugKind> {
        match (self.p1.is_thick(), self.p2.is_thick()) {
            (true, true) => Some(HugKind::TwoHug),
            (true, false) | (false, true) => Some(HugKind::OneHug),
            (false, false) => None,
        }
    }
}

/// The units of Γ± ∖ lk(m)± lying in the side of `q` that contains m, for a base u of `q`
/// dominated by m.
fn inner_units(
    g: &SimplicialGraph,
    q: &Partition,
    m: VertexId,
) -> Result<(VertexId, SignedVertexSet, Vec<SignedVertexSet>)> {
    let u = q
        .max_bases()
        .iter()
        .find(|&u| g.dominated_by(u, m))
        .ok_or_else(|| Error::Precondition(format!("`{}` does not dominate a base of the partition", g.name(m))))?;
    let side = q
        .side_containing(m.pos())
        .filter(|s| s.contains(m.neg()))
        .ok_or_else(|| Error::Precondition(format!("`{}` does not lie inside a side of the partition", g.name(m))))?;
    let units = g.units(m).into_iter().filter(|c| c.is_subset(side)).collect();
    Ok((u, side, units))
}

/// All 2^k splits of C^Q(m), in order of the bitmask selecting C₁.
pub fn hug_candidates(g: &SimplicialGraph, q: &Partition, m: VertexId) -> Result<Vec<HugCandidate>> {
    let (_, _, units) = inner_units(g, q, m)?;
    if units.len() > 20 {
        return Err(Error::CapExceeded {
            what: "hug splits",
            cap: 1 << 20,
        });
    }
    let mut out = Vec::with_capacity(1 << units.len());
    for mask in 0u32..1 << units.len() {
        let (mut c1, mut c2) = (Vec::new(), Vec::new());
        for (i, c) in units.iter().enumerate() {
            if mask >> i & 1 == 1 {
                c1.push(*c);
            } else {
                c2.push(*c);
            }
        }
        let side1 = c1.iter().fold(SignedVertexSet::singleton(m.pos()), |a, &b| a | b);
        let side2 = c2.iter().fold(SignedVertexSet::singleton(m.neg()), |a, &b| a | b);
        out.push(HugCandidate {
            p1: Partition::almost(g, m, side1)?,
            p2: Partition::almost(g, m, side2)?,
            c1,
            c2,
        });
    }
    Ok(out)
}

/// One way a non-principal node can be hugged: a base u, a dominator m, and the huggers
/// available among the nodes of the compatibility graph.
#[derive(Clone, Debug)]
pub struct HugTarget {
    pub u: VertexId,
    pub m: VertexId,
    pub side: SignedVertexSet,
    pub units: Vec<SignedVertexSet>,
    /// {m, m⁻¹} ∪ ⋃ units.
    pub span: SignedVertexSet,
    /// Nodes that 1-hug on their own.
    pub singles: Vec<usize>,
    /// Node pairs (P₁ ∋ m, P₂ ∋ m⁻¹) that 2-hug.
    pub pairs: Vec<(usize, usize)>,
}

impl HugTarget {
    /// Hugger sets, singles first.
    pub fn configurations(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.singles
            .iter()
            .map(|&x| vec![x])
            .chain(self.pairs.iter().map(|&(x, y)| vec![x, y]))
    }
}

/// Precomputed hugging structure for every non-principal node.
#[derive(Clone, Debug)]
pub struct HugIndex {
    mode: HugMode,
    targets: Vec<Vec<HugTarget>>,
    non_principal: Vec<bool>,
}

impl HugIndex {
    pub fn new(g: &SimplicialGraph, cg: &CompatibilityGraph, mode: HugMode) -> Result<Self> {
        let principal = classify_vertices(g).principal;
        let mut by_side: HashMap<(SignedVertexSet, SignedVertexSet), usize> = HashMap::new();
        for (i, p) in cg.nodes().iter().enumerate() {
            for s in p.sides() {
                by_side.insert((p.link(), s), i);
            }
        }
        let mut targets = Vec::with_capacity(cg.len());
        for (qi, q) in cg.nodes().iter().enumerate() {
            let mut list: Vec<HugTarget> = Vec::new();
            if !cg.is_principal(qi) {
                for u in q.max_bases().iter() {
                    for m in g.vertices().filter(|&m| g.dominated_by(u, m)) {
                        if mode == HugMode::Strict && !principal.contains(m) {
                            continue;
                        }
                        let (_, side, units) = inner_units(g, q, m)?;
                        let span = units.iter().fold(
                            SignedVertexSet::singleton(m.pos()) | SignedVertexSet::singleton(m.neg()),
                            |a, &b| a | b,
                        );
                        if list.iter().any(|t| t.m == m && t.span == span) {
                            continue;
                        }
                        let link = g.lk(m).doubled();
                        let lookup = |s: SignedVertexSet| by_side.get(&(link, s)).copied();
                        let mut singles = Vec::new();
                        for lone in [m.neg(), m.pos()] {
                            if let Some(x) = lookup(span - SignedVertexSet::singleton(lone)) {
                                singles.push(x);
                            }
                        }
                        let mut pairs = Vec::new();
                        for (pi, p) in cg.nodes().iter().enumerate() {
                            if p.link() != link {
                                continue;
                            }
                            let Some(x) = p.side_containing(m.pos()) else { continue };
                            if x.contains(m.neg()) || !x.is_subset(span) {
                                continue;
                            }
                            let rest = span - x;
                            if rest.len() >= 2 {
                                if let Some(y) = lookup(rest) {
                                    pairs.push((pi, y));
                                }
                            }
                        }
                        singles.sort_unstable();
                        singles.dedup();
                        list.push(HugTarget {
                            u,
                            m,
                            side,
                            units,
                            span,
                            singles,
                            pairs,
                        });
                    }
                }
            }
            targets.push(list);
        }
        let non_principal = (0..cg.len()).map(|i| !cg.is_principal(i)).collect();
        Ok(HugIndex {
            mode,
            targets,
            non_principal,
        })
    }

    pub fn mode(&self) -> HugMode {
        self.mode
    }

    pub fn targets(&self, q: usize) -> &[HugTarget] {
        &self.targets[q]
    }

    pub fn is_non_principal(&self, q: usize) -> bool {
        self.non_principal[q]
    }

    /// Fast test: is node `q` hugged by members of `set`? Does not check `q ∈ set`.
    pub fn hugged<M: Members>(&self, set: &M, q: usize) -> bool {
        self.targets[q]
            .iter()
            .any(|t| t.singles.iter().any(|&x| set.has(x)) || t.pairs.iter().any(|&(x, y)| set.has(x) && set.has(y)))
    }

    /// A witness that `q` is hugged by members of `set`, if any.
    pub fn witness<M: Members>(&self, cg: &CompatibilityGraph, set: &M, q: usize) -> Option<HugWitness> {
        for t in &self.targets[q] {
            let make = |kind, huggers: Vec<usize>, with_m: SignedVertexSet| {
                let (c1, c2) = t.units.iter().partition(|c| c.is_subset(with_m));
                HugWitness {
                    kind,
                    base_u: t.u,
                    base_m: t.m,
                    hugged_side: t.side,
                    c1,
                    c2,
                    huggers,
                }
            };
            for &x in &t.singles {
                if set.has(x) {
                    let side = cg.node(x).side_containing(t.m.pos()).unwrap();
                    let with_m = if side.is_subset(t.span) {
                        side
                    } else {
                        SignedVertexSet::EMPTY
                    };
                    return Some(make(HugKind::OneHug, vec![x], with_m));
                }
            }
            for &(x, y) in &t.pairs {
                if set.has(x) && set.has(y) {
                    let side = cg.node(x).side_containing(t.m.pos()).unwrap();
                    return Some(make(HugKind::TwoHug, vec![x, y], side));
                }
            }
        }
        None
    }

    /// Witness that `q ∈ set` is hugged in `set`.
    pub fn is_hugged_in(&self, cg: &CompatibilityGraph, set: &CompatibleSet, q: usize) -> Result<Option<HugWitness>> {
        if !set.contains(q) {
            return Err(Error::Precondition("partition is not in the set".into()));
        }
        if !self.non_principal[q] {
            return Err(Error::Precondition("partition is principal".into()));
        }
        Ok(self.witness(cg, set, q))
    }
}

/// A cube c(Π₁, Π₂) survives the retraction iff no non-principal member of Π₂ ∖ Π₁ is
/// hugged in Π₂ and no non-principal partition compatible with all of Π₂ would be hugged
/// after joining it.
pub fn cube_survives(
    cg: &CompatibilityGraph,
    index: &HugIndex,
    lower: &CompatibleSet,
    upper: &CompatibleSet,
) -> Result<bool> {
    if !lower.is_subset(upper) {
        return Err(Error::Precondition("lower set is not contained in upper set".into()));
    }
    if !upper.is_pairwise_compatible(cg) {
        return Err(Error::Precondition("upper set is not pairwise compatible".into()));
    }
    let upper_nodes = upper.to_node_set(cg.len());
    for &q in &upper.members {
        if !lower.contains(q) && index.is_non_principal(q) && index.hugged(&upper_nodes, q) {
            return Ok(false);
        }
    }
    for r in common_neighbours(cg, &upper.members).iter() {
        if index.is_non_principal(r) {
            let mut joined = upper_nodes.clone();
            joined.insert(r);
            if index.hugged(&joined, r) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Negation of [`cube_survives`].
pub fn is_redundant(
    cg: &CompatibilityGraph,
    index: &HugIndex,
    lower: &CompatibleSet,
    upper: &CompatibleSet,
) -> Result<bool> {
    cube_survives(cg, index, lower, upper).map(|s| !s)
}

/// Result of a bounded exhaustive check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Pass { checked: usize },
    Fail { checked: usize, counterexample: String },
    Inconclusive { checked: usize, reason: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }

    pub fn failed(&self) -> bool {
        matches!(self, Verdict::Fail { .. })
    }
}

struct Budget {
    limit: usize,
    used: usize,
}

impl Budget {
    fn new(limit: usize) -> Self {
        Budget { limit, used: 0 }
    }

    /// Consumes one unit; false once exhausted.
    fn take(&mut self) -> bool {
        if self.used == self.limit {
            return false;
        }
        self.used += 1;
        true
    }

    fn exhausted(&self) -> Verdict {
        Verdict::Inconclusive {
            checked: self.used,
            reason: format!("budget of {} exhausted", self.limit),
        }
    }
}

fn render_set(g: &SimplicialGraph, cg: &CompatibilityGraph, ids: &[usize]) -> String {
    let mut s = String::new();
    for (k, &i) in ids.iter().enumerate() {
        if k > 0 {
            s.push_str(", ");
        }
        let _ = write!(s, "[{}]", cg.node(i).display(g));
    }
    s
}

/// Every compatible set larger than M(L) contains a member hugged in it.
pub fn verify_oversize_hugged(
    g: &SimplicialGraph,
    cg: &CompatibilityGraph,
    index: &HugIndex,
    budget: usize,
) -> Result<Verdict> {
    if !is_barbed(g).holds {
        return Err(Error::Precondition("graph is not barbed".into()));
    }
    let m_l = max_compatible(cg, classify_vertices(g).principal).size;
    let mut budget = Budget::new(budget);
    let mut clique = Vec::new();
    let mut failure = None;
    let complete = oversize_search(
        cg,
        index,
        m_l + 1,
        &mut clique,
        cg.all_nodes(),
        &mut budget,
        &mut failure,
    );
    if let Some(bad) = failure {
        return Ok(Verdict::Fail {
            checked: budget.used,
            counterexample: render_set(g, cg, &bad),
        });
    }
    if !complete {
        return Ok(budget.exhausted());
    }
    Ok(Verdict::Pass { checked: budget.used })
}

/// Visits cliques of size ≥ `min`; returns false if the budget ran out.
fn oversize_search(
    cg: &CompatibilityGraph,
    index: &HugIndex,
    min: usize,
    clique: &mut Vec<usize>,
    cand: NodeSet,
    budget: &mut Budget,
    failure: &mut Option<Vec<usize>>,
) -> bool {
    if clique.len() + cand.len() < min {
        return true;
    }
    if clique.len() >= min {
        if !budget.take() {
            return false;
        }
        let set = NodeSet::from_ids(cg.len(), clique.iter().copied());
        if !clique
            .iter()
            .any(|&q| index.is_non_principal(q) && index.hugged(&set, q))
        {
            *failure = Some(clique.clone());
            return true;
        }
    }
    for i in cand.iter() {
        let mut next = cand.intersection(cg.neighbours(i));
        next.retain_above(i);
        clique.push(i);
        let ok = oversize_search(cg, index, min, clique, next, budget, failure);
        clique.pop();
        if !ok {
            return false;
        }
        if failure.is_some() {
            return true;
        }
    }
    true
}

/// Which configurations the replacement check covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReplacementScope {
    /// All pairs of non-principal partitions, plus every compatible set.
    All,
    /// Pairs (Q, Q′) with Q basable in `first` and Q′ in `second`, tested against principal
    /// partitions basable in `principal`.
    Restricted {
        first: VertexSet,
        second: VertexSet,
        principal: VertexSet,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub condition1: bool,
    /// A non-principal partition compatible with the huggers of Q is compatible with Q.
    pub hug_transfer: Verdict,
    pub condition2: bool,
    /// A principal partition compatible with the huggers of two hugged partitions is
    /// compatible with one of them.
    pub replacement: Verdict,
}

pub fn verify_lemma_conclusions(
    g: &SimplicialGraph,
    cg: &CompatibilityGraph,
    index: &HugIndex,
    budget: usize,
    scope: &ReplacementScope,
) -> Result<LemmaReport> {
    Ok(LemmaReport {
        condition1: check_condition1(g).holds,
        hug_transfer: verify_hug_transfer(g, cg, index, budget),
        condition2: check_condition2(g).holds,
        replacement: verify_replacement(g, cg, index, budget, scope),
    })
}

/// For non-principal Q hugged by a hugger set H and non-principal Q′ ∉ H ∪ {Q} compatible
/// with all of H: Q′ is compatible with Q.
pub fn verify_hug_transfer(g: &SimplicialGraph, cg: &CompatibilityGraph, index: &HugIndex, budget: usize) -> Verdict {
    let mut budget = Budget::new(budget);
    for q in (0..cg.len()).filter(|&q| index.is_non_principal(q)) {
        for t in index.targets(q) {
            for huggers in t.configurations() {
                for q2 in (0..cg.len()).filter(|&x| index.is_non_principal(x) && x != q) {
                    if huggers.contains(&q2) || !huggers.iter().all(|&h| cg.compatible(h, q2)) {
                        continue;
                    }
                    if !budget.take() {
                        return budget.exhausted();
                    }
                    if !cg.compatible(q, q2) {
                        let counterexample = format!(
                            "Q = [{}], huggers {}, Q' = [{}]",
                            cg.node(q).display(g),
                            render_set(g, cg, &huggers),
                            cg.node(q2).display(g)
                        );
                        return Verdict::Fail {
                            checked: budget.used,
                            counterexample,
                        };
                    }
                }
            }
        }
    }
    Verdict::Pass { checked: budget.used }
}

/// The replacement property in pairwise form over the chosen scope, plus the set form
/// over every compatible set when the scope is [`ReplacementScope::All`].
pub fn verify_replacement(
    g: &SimplicialGraph,
    cg: &CompatibilityGraph,
    index: &HugIndex,
    budget: usize,
    scope: &ReplacementScope,
) -> Verdict {
    let mut budget = Budget::new(budget);
    let non_principal: Vec<usize> = (0..cg.len()).filter(|&q| index.is_non_principal(q)).collect();
    let (first, second, bases) = match scope {
        ReplacementScope::All => (g.all(), g.all(), g.all()),
        ReplacementScope::Restricted {
            first,
            second,
            principal,
        } => (*first, *second, *principal),
    };
    let principal: Vec<usize> = (0..cg.len())
        .filter(|&q| !index.is_non_principal(q) && cg.node(q).max_bases().intersects(bases))
        .collect();
    for &q in non_principal
        .iter()
        .filter(|&&q| cg.node(q).max_bases().intersects(first))
    {
        for &q2 in non_principal
            .iter()
            .filter(|&&x| x != q && cg.node(x).max_bases().intersects(second))
        {
            if !cg.compatible(q, q2) {
                continue;
            }
            let configs =
                |x: usize| -> Vec<Vec<usize>> { index.targets(x).iter().flat_map(|t| t.configurations()).collect() };
            let (hq, hq2) = (configs(q), configs(q2));
            for a in &hq {
                for b in &hq2 {
                    let huggers = CompatibleSet::new(a.iter().chain(b).copied().collect());
                    let mut all = huggers.members.clone();
                    all.extend([q, q2]);
                    if !CompatibleSet::new(all).is_pairwise_compatible(cg) {
                        continue;
                    }
                    for &r in &principal {
                        if !huggers.members.iter().all(|&h| cg.compatible(h, r)) {
                            continue;
                        }
                        if !budget.take() {
                            return budget.exhausted();
                        }
                        if !cg.compatible(r, q) && !cg.compatible(r, q2) {
                            let counterexample = format!(
                                "Q = [{}], Q' = [{}], huggers {}, R = [{}]",
                                cg.node(q).display(g),
                                cg.node(q2).display(g),
                                render_set(g, cg, &huggers.members),
                                cg.node(r).display(g)
                            );
                            return Verdict::Fail {
                                checked: budget.used,
                                counterexample,
                            };
                        }
                    }
                }
            }
        }
    }
    if *scope == ReplacementScope::All {
        for set in crate::search::CliqueIter::new(cg, usize::MAX) {
            if !budget.take() {
                return budget.exhausted();
            }
            let nodes = set.to_node_set(cg.len());
            let hugged: Vec<usize> = set
                .members
                .iter()
                .copied()
                .filter(|&q| index.is_non_principal(q) && index.hugged(&nodes, q))
                .collect();
            if hugged.is_empty() {
                continue;
            }
            let rest: Vec<usize> = set.members.iter().copied().filter(|q| !hugged.contains(q)).collect();
            let candidates = common_neighbours(cg, &rest);
            for r in candidates
                .iter()
                .filter(|&r| !index.is_non_principal(r) && !set.contains(r))
            {
                let clashes = hugged.iter().filter(|&&q| !cg.compatible(r, q)).count();
                if clashes > 1 {
                    let counterexample = format!(
                        "set {}, R = [{}] clashes with {clashes} hugged members",
                        render_set(g, cg, &set.members),
                        cg.node(r).display(g)
                    );
                    return Verdict::Fail {
                        checked: budget.used,
                        counterexample,
                    };
                }
            }
        }
    }
    Verdict::Pass { checked: budget.used }
}
