//! Graph-level conditions: the two domination conditions, spikiness, barbedness and P(k).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{classify_vertices, SimplicialGraph, VertexClassification, VertexId};

/// Maximum number of violations recorded per condition.
pub const WITNESS_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check<W> {
    pub holds: bool,
    /// Up to [`WITNESS_CAP`] violations.
    pub violations: Vec<W>,
}

/// (u, u′, m): u′ non-principal at distance 2 from u, commuting with the principal dominator m of u.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cond1Violation {
    pub u: String,
    pub u_prime: String,
    pub m: String,
}

/// (u, m, n): principal n at distance 2 from u commuting with the principal dominator m of u.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cond2Violation {
    pub u: String,
    pub m: String,
    pub n: String,
}

/// (u, v): v at distance 2 from the non-principal u but not dominating it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarbViolation {
    pub u: String,
    pub v: String,
}

/// Component counts for one non-principal vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominatorSpread {
    pub u: String,
    /// Components of Γ ∖ st(u) containing a vertex dominating u.
    pub dominator_components: usize,
    /// Components of Γ ∖ st(u) containing a principal maximal vertex dominating u.
    pub principal_maximal_components: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub condition1: Check<Cond1Violation>,
    pub condition2: Check<Cond2Violation>,
    pub spiky: bool,
    /// The one-line characterization, evaluated independently.
    pub spiky_char: bool,
    pub barbed: Check<BarbViolation>,
    /// Least k with P(k), counting all dominators.
    pub p_k: usize,
    /// Least k for the variant counting only principal maximal dominators.
    pub p_k_principal_maximal: usize,
    pub spread: Vec<DominatorSpread>,
}

struct Ctx<'a> {
    g: &'a SimplicialGraph,
    c: VertexClassification,
    dist: Vec<Vec<Option<usize>>>,
}

impl<'a> Ctx<'a> {
    fn new(g: &'a SimplicialGraph) -> Self {
        Ctx {
            g,
            c: classify_vertices(g),
            dist: g.distance_table(),
        }
    }

    fn d2(&self, a: VertexId, b: VertexId) -> bool {
        self.dist[a.0][b.0] == Some(2)
    }

    fn non_principal(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.g.vertices().filter(|&v| !self.c.is_principal(v))
    }

    fn principal_dominators(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        (self.c.dominators[u.0] & self.c.principal).iter()
    }
}

fn push<W>(check: &mut Check<W>, w: W) {
    check.holds = false;
    if check.violations.len() < WITNESS_CAP {
        check.violations.push(w);
    }
}

fn ok<W>() -> Check<W> {
    Check {
        holds: true,
        violations: Vec::new(),
    }
}

pub fn check_condition1(g: &SimplicialGraph) -> Check<Cond1Violation> {
    condition1(&Ctx::new(g))
}

fn condition1(x: &Ctx) -> Check<Cond1Violation> {
    let mut out = ok();
    for u in x.non_principal() {
        for m in x.principal_dominators(u) {
            for u2 in x.non_principal() {
                if x.d2(u, u2) && x.g.adjacent(u2, m) {
                    let name = |v: VertexId| x.g.name(v).to_string();
                    push(
                        &mut out,
                        Cond1Violation {
                            u: name(u),
                            u_prime: name(u2),
                            m: name(m),
                        },
                    );
                }
            }
        }
    }
    out
}

pub fn check_condition2(g: &SimplicialGraph) -> Check<Cond2Violation> {
    condition2(&Ctx::new(g))
}

fn condition2(x: &Ctx) -> Check<Cond2Violation> {
    let mut out = ok();
    for u in x.non_principal() {
        for m in x.principal_dominators(u) {
            for n in x.c.principal.iter() {
                if n != m && x.d2(u, n) && x.g.adjacent(m, n) {
                    let name = |v: VertexId| x.g.name(v).to_string();
                    push(
                        &mut out,
                        Cond2Violation {
                            u: name(u),
                            m: name(m),
                            n: name(n),
                        },
                    );
                }
            }
        }
    }
    out
}

/// For every non-principal u, every m dominating u and every v ∈ lk(m) ∖ st(u): d(u, v) > 2.
fn spiky_characterization(x: &Ctx) -> bool {
    x.non_principal().all(|u| {
        x.c.dominators[u.0].iter().all(|m| {
            (x.g.lk(m) - x.g.st(u)).iter().all(|v| match x.dist[u.0][v.0] {
                Some(d) => d > 2,
                None => true,
            })
        })
    })
}

/// Spikiness computed both ways; disagreement is reported as an error.
pub fn is_spiky(g: &SimplicialGraph) -> Result<bool> {
    let x = Ctx::new(g);
    let conj = condition1(&x).holds && condition2(&x).holds;
    let chr = spiky_characterization(&x);
    if conj != chr {
        return Err(Error::Structural(format!(
            "spikiness formulations disagree: conditions give {conj}, characterization gives {chr}"
        )));
    }
    Ok(conj)
}

pub fn is_barbed(g: &SimplicialGraph) -> Check<BarbViolation> {
    barbed(&Ctx::new(g))
}

fn barbed(x: &Ctx) -> Check<BarbViolation> {
    let mut out = ok();
    for u in x.non_principal() {
        for v in x.g.vertices().filter(|&v| x.d2(u, v)) {
            if !x.c.dominators[u.0].contains(v) {
                let name = |v: VertexId| x.g.name(v).to_string();
                push(&mut out, BarbViolation { u: name(u), v: name(v) });
            }
        }
    }
    out
}

fn spread(x: &Ctx) -> Vec<DominatorSpread> {
    x.non_principal()
        .map(|u| {
            let comps = x.g.components_minus_star(u).expect("vertex of g");
            let count = |s: crate::graph::VertexSet| comps.iter().filter(|c| c.intersects(s)).count();
            DominatorSpread {
                u: x.g.name(u).to_string(),
                dominator_components: count(x.c.dominators[u.0]),
                principal_maximal_components: count(x.c.dominators[u.0] & x.c.principal & x.c.maximal),
            }
        })
        .collect()
}

/// Least k ≥ 0 such that the dominators of every non-principal u lie in at most k + 1
/// components of Γ ∖ st(u).
pub fn p_k_value(g: &SimplicialGraph) -> usize {
    least_k(spread(&Ctx::new(g)).iter().map(|s| s.dominator_components))
}

fn least_k(counts: impl Iterator<Item = usize>) -> usize {
    counts.max().unwrap_or(0).saturating_sub(1)
}

pub fn check_conditions(g: &SimplicialGraph) -> Result<ConditionReport> {
    let x = Ctx::new(g);
    let condition1 = condition1(&x);
    let condition2 = condition2(&x);
    let spiky = condition1.holds && condition2.holds;
    let spiky_char = spiky_characterization(&x);
    if spiky != spiky_char {
        return Err(Error::Structural("spikiness formulations disagree".into()));
    }
    let spread = spread(&x);
    Ok(ConditionReport {
        p_k: least_k(spread.iter().map(|s| s.dominator_components)),
        p_k_principal_maximal: least_k(spread.iter().map(|s| s.principal_maximal_components)),
        condition1,
        condition2,
        spiky,
        spiky_char,
        barbed: barbed(&x),
        spread,
    })
}
