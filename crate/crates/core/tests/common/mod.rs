//! Exhaustive invariant checks shared by the property suite and the acceptance harness.
//! Each check returns the number of instances examined, or a description of the first failure.

#![allow(dead_code)]

use raag_core::compat::CompatibilityGraph;
use raag_core::hugging::hug_candidates;
use raag_core::{
    all_partitions, classify_vertices, enumerate_partitions, families, is_adjacent, is_compatible, max_compatible,
    CompatibleSet, HugIndex, HugMode, Partition, SignedVertexSet, SimplicialGraph, VertexId, VertexSet,
};

pub type Check = Result<usize, String>;

/// Every generated fixture with at most eight vertices.
pub fn small_fixtures() -> Vec<(String, SimplicialGraph)> {
    let mut out: Vec<(String, SimplicialGraph)> = vec![
        ("rake1".into(), families::rake(1).unwrap()),
        ("rake2".into(), families::rake(2).unwrap()),
        ("rake3".into(), families::rake(3).unwrap()),
        (
            "rake-like(2, K2)".into(),
            families::rake_like(2, &families::complete(2).unwrap()).unwrap(),
        ),
        ("leafy-triangle".into(), families::leafy_triangle()),
        ("branching-link".into(), families::branching_link()),
        ("path-plus-isolated".into(), families::path_plus_isolated()),
        ("cond1-violator".into(), families::cond1_violator()),
        ("cond2-violator".into(), families::cond2_violator()),
        ("delta".into(), families::delta()),
    ];
    for n in 1..=6 {
        out.push((format!("path{n}"), families::path(n).unwrap()));
        out.push((format!("edgeless{n}"), families::edgeless(n).unwrap()));
        out.push((format!("complete{n}"), families::complete(n).unwrap()));
    }
    for n in 3..=7 {
        out.push((format!("cycle{n}"), families::cycle(n).unwrap()));
    }
    out.retain(|(_, g)| g.vertex_count() <= 8);
    out
}

pub fn universe(g: &SimplicialGraph) -> SignedVertexSet {
    SignedVertexSet::universe(g.vertex_count())
}

fn link_of(g: &SimplicialGraph, v: VertexId) -> VertexSet {
    g.link(v).unwrap()
}

/// Vertices split by a partition: x and x⁻¹ on different sides.
fn split_oracle(g: &SimplicialGraph, p: &Partition) -> VertexSet {
    let [a, _] = p.sides();
    g.vertices()
        .filter(|v| a.contains(v.pos()) != a.contains(v.neg()) && !p.link().contains(v.pos()))
        .collect()
}

fn adjacent_oracle(p: &Partition, q: &Partition) -> bool {
    p.max_bases().is_subset(q.link_vertices())
}

fn compatible_oracle(p: &Partition, q: &Partition) -> bool {
    p != q && (adjacent_oracle(p, q) || p.sides().iter().any(|a| q.sides().iter().any(|b| !a.intersects(*b))))
}

fn fail<T>(what: String) -> Result<T, String> {
    Err(what)
}

/// The stored relation is symmetric and agrees with the definition recomputed from sides.
pub fn compatibility_symmetry(g: &SimplicialGraph, cg: &CompatibilityGraph) -> Check {
    let mut n = 0;
    for i in 0..cg.len() {
        for j in 0..cg.len() {
            if i == j {
                continue;
            }
            n += 1;
            let (p, q) = (cg.node(i), cg.node(j));
            let stored = cg.compatible(i, j);
            if stored != cg.compatible(j, i) || stored != is_compatible(q, p) || stored != compatible_oracle(p, q) {
                return fail(format!(
                    "compatibility of [{}] and [{}] is inconsistent",
                    p.display(g),
                    q.display(g)
                ));
            }
        }
    }
    Ok(n)
}

/// max(P) ⊆ lk(Q) ⇔ max(Q) ⊆ lk(P), and adjacent pairs are compatible.
pub fn adjacency_equivalence(g: &SimplicialGraph, cg: &CompatibilityGraph) -> Check {
    let mut n = 0;
    for i in 0..cg.len() {
        for j in 0..cg.len() {
            let (p, q) = (cg.node(i), cg.node(j));
            n += 1;
            let forward = adjacent_oracle(p, q);
            if forward != adjacent_oracle(q, p) || forward != is_adjacent(p, q) {
                return fail(format!(
                    "adjacency of [{}] and [{}] depends on the order",
                    p.display(g),
                    q.display(g)
                ));
            }
            if i != j && forward && !cg.compatible(i, j) {
                return fail(format!(
                    "[{}] and [{}] are adjacent but not compatible",
                    p.display(g),
                    q.display(g)
                ));
            }
        }
    }
    Ok(n)
}

/// Pairs of non-equivalent vertices not at distance 2.
fn far_pairs(g: &SimplicialGraph) -> Vec<(VertexId, VertexId)> {
    let c = classify_vertices(g);
    let dist = g.distance_table();
    let mut out = Vec::new();
    for u in g.vertices() {
        for v in g.vertices().filter(|v| v.0 > u.0) {
            if c.class_of[u.0] != c.class_of[v.0] && dist[u.0][v.0] != Some(2) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Partitions based at non-equivalent vertices at distance ≠ 2 are compatible,
/// and M({u, v}) = M({u}) + M({v}) for such pairs. Connected graphs only: on a
/// disconnected graph the statement fails (see `distance_lemma_needs_connectivity`).
pub fn distance_lemma(g: &SimplicialGraph, cg: &CompatibilityGraph) -> Check {
    if !g.is_connected() {
        return Ok(0);
    }
    let mut n = 0;
    for (u, v) in far_pairs(g) {
        let pu = enumerate_partitions(g, u).unwrap().partitions;
        let pv = enumerate_partitions(g, v).unwrap().partitions;
        for p in &pu {
            for q in &pv {
                n += 1;
                if !is_compatible(p, q) {
                    return fail(format!(
                        "[{}] at {} and [{}] at {} are incompatible",
                        p.display(g),
                        g.name(u),
                        q.display(g),
                        g.name(v)
                    ));
                }
            }
        }
        let m = |w: VertexSet| max_compatible(cg, w).size;
        let (mu, mv, muv) = (
            m(VertexSet::singleton(u)),
            m(VertexSet::singleton(v)),
            m(VertexSet::singleton(u) | VertexSet::singleton(v)),
        );
        n += 1;
        if muv != mu + mv {
            return fail(format!(
                "M({},{}) = {muv} but M({}) + M({}) = {mu} + {mv}",
                g.name(u),
                g.name(v),
                g.name(u),
                g.name(v)
            ));
        }
    }
    Ok(n)
}

/// Compatible, non-adjacent partitions with bases at distance ≥ 2 have a side of one
/// contained in a side of the other.
pub fn side_containment(g: &SimplicialGraph, cg: &CompatibilityGraph) -> Check {
    let dist = g.distance_table();
    let mut n = 0;
    for i in 0..cg.len() {
        for j in i + 1..cg.len() {
            let (p, q) = (cg.node(i), cg.node(j));
            if !cg.compatible(i, j) || adjacent_oracle(p, q) {
                continue;
            }
            let near = p
                .max_bases()
                .iter()
                .any(|u| q.max_bases().iter().any(|v| matches!(dist[u.0][v.0], Some(d) if d < 2)));
            if near {
                continue;
            }
            n += 1;
            let contained = p
                .sides()
                .iter()
                .any(|a| q.sides().iter().any(|b| a.is_subset(*b) || b.is_subset(*a)));
            if !contained {
                return fail(format!(
                    "no side containment between [{}] and [{}]",
                    p.display(g),
                    q.display(g)
                ));
            }
        }
    }
    Ok(n)
}

/// Side assignments with both sides thick, counted directly from the doubled components.
fn assignment_count(g: &SimplicialGraph, v: VertexId) -> usize {
    let comps = g.doubled_components(v).unwrap();
    let units: Vec<SignedVertexSet> = comps
        .into_iter()
        .filter(|c| !c.contains(v.pos()) && !c.contains(v.neg()))
        .collect();
    if units.len() < 2 {
        return 0;
    }
    let total: usize = units.iter().map(|c| c.len()).sum();
    (0u64..1 << units.len())
        .filter(|mask| {
            let one: usize = units
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, c)| c.len())
                .sum();
            one + 1 >= 2 && total - one + 1 >= 2
        })
        .count()
}

/// Structural invariants of every enumerated partition, re-enumeration from each base and
/// the count against a direct assignment count.
pub fn partition_invariants(g: &SimplicialGraph, cg: &CompatibilityGraph) -> Check {
    let all = universe(g);
    let mut n = 0;
    let mut union = Vec::new();
    for v in g.vertices() {
        let ps = enumerate_partitions(g, v).unwrap().partitions;
        if ps.len() != assignment_count(g, v) {
            return fail(format!(
                "{} partitions at {} but {} assignments",
                ps.len(),
                g.name(v),
                assignment_count(g, v)
            ));
        }
        for p in &ps {
            n += 1;
            let [a, b] = p.sides();
            let link = link_of(g, v).doubled();
            let show = || p.display(g).to_string();
            if a.intersects(b) || a.intersects(link) || b.intersects(link) || (a | b | link) != all {
                return fail(format!("[{}] does not partition V± ∖ lk", show()));
            }
            if p.link() != link || a.len() < 2 || b.len() < 2 || !p.is_thick() || a >= b {
                return fail(format!("[{}] has a bad link, thin side or non-canonical order", show()));
            }
            if p.split() != split_oracle(g, p) || !p.max_bases().is_subset(p.split()) || !p.max_bases().contains(v) {
                return fail(format!("[{}] has inconsistent split/max sets", show()));
            }
            for m in p.max_bases().iter() {
                if link_of(g, m) != link_of(g, v) || a.contains(m.pos()) == a.contains(m.neg()) {
                    return fail(format!("[{}] has base {} with a different link", show(), g.name(m)));
                }
                if !enumerate_partitions(g, m).unwrap().partitions.contains(p) {
                    return fail(format!("[{}] is not re-enumerated from {}", show(), g.name(m)));
                }
            }
            if cg.index_of(p).is_none() {
                return fail(format!("[{}] is missing from the compatibility graph", show()));
            }
        }
        union.extend(ps);
    }
    union.sort();
    union.dedup();
    if union != all_partitions(g).unwrap() || union.as_slice() != cg.nodes() {
        return fail("all_partitions differs from the union of per-base enumerations".into());
    }
    Ok(n)
}

/// For every available hugger configuration: P̄₁ ∩ P̄₂ = Q̄, P₁ ∩ P₂ = ∅, Pᵢ ⊆ Q, the huggers
/// are compatible with Q and are reproduced by the candidate construction.
pub fn hug_soundness(g: &SimplicialGraph, cg: &CompatibilityGraph) -> Check {
    let all = universe(g);
    let mut n = 0;
    for mode in [HugMode::Relaxed, HugMode::Strict] {
        let index = HugIndex::new(g, cg, mode).map_err(|e| e.to_string())?;
        for q in (0..cg.len()).filter(|&q| index.is_non_principal(q)) {
            let qp = cg.node(q);
            for t in index.targets(q) {
                let candidates = hug_candidates(g, qp, t.m).map_err(|e| e.to_string())?;
                if candidates.len() != 1 << t.units.len() {
                    return fail(format!(
                        "{} candidates for 2^{} splits",
                        candidates.len(),
                        t.units.len()
                    ));
                }
                for huggers in t.configurations() {
                    n += 1;
                    let set = CompatibleSet::new(huggers.iter().copied().chain([q]).collect());
                    let w = index
                        .witness(cg, &set, q)
                        .ok_or_else(|| format!("[{}] not hugged by its own configuration", qp.display(g)))?;
                    let (p1, p2) = w.hugger_sides();
                    let lk_m = link_of(g, w.base_m).doubled();
                    let qbar = all - qp.link() - w.hugged_side;
                    let bar = |s: SignedVertexSet| all - lk_m - s;
                    if bar(p1) & bar(p2) != qbar
                        || p1.intersects(p2)
                        || !p1.is_subset(w.hugged_side)
                        || !p2.is_subset(w.hugged_side)
                    {
                        return fail(format!("hugger sides of [{}] do not fit its sides", qp.display(g)));
                    }
                    for &h in &w.huggers {
                        if !is_compatible(cg.node(h), qp) {
                            return fail(format!(
                                "hugger [{}] clashes with [{}]",
                                cg.node(h).display(g),
                                qp.display(g)
                            ));
                        }
                        if !cg.node(h).sides().iter().any(|s| *s == p1 || *s == p2) {
                            return fail(format!("hugger [{}] not rebuilt from the split", cg.node(h).display(g)));
                        }
                    }
                    let rebuilt = candidates.iter().any(|c| {
                        let mut thick: Vec<usize> = [c.p1, c.p2]
                            .iter()
                            .filter(|p| p.is_thick())
                            .filter_map(|p| cg.index_of(p))
                            .collect();
                        thick.sort();
                        let mut hs = w.huggers.clone();
                        hs.sort();
                        thick == hs
                    });
                    if !rebuilt {
                        return fail(format!("huggers of [{}] not among the candidates", qp.display(g)));
                    }
                }
            }
        }
    }
    Ok(n)
}

/// All criterion checks, by name.
pub type Checker = fn(&SimplicialGraph, &CompatibilityGraph) -> Check;

pub fn suite() -> Vec<(&'static str, Checker)> {
    vec![
        ("compatibility symmetry", compatibility_symmetry),
        ("adjacency equivalence", adjacency_equivalence),
        ("distance-two lemma and additivity", distance_lemma),
        ("side containment", side_containment),
        ("partition invariants", partition_invariants),
        ("hug witness soundness", hug_soundness),
    ]
}
