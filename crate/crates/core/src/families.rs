//! Graph generators for the standard fixtures.

use crate::error::{Error, Result};
use crate::graph::{classify_vertices, SimplicialGraph};

/// A named graph family with its parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilySpec {
    Rake { d: usize },
    RakeLike { d: usize, inner: Box<FamilySpec> },
    Delta,
    Path { n: usize },
    Cycle { n: usize },
    Complete { n: usize },
    Edgeless { n: usize },
    LeafyTriangle,
    BranchingLink,
    PathPlusIsolated,
    Cond1Violator,
    Cond2Violator,
}

impl FamilySpec {
    pub fn generate(&self) -> Result<SimplicialGraph> {
        match self {
            FamilySpec::Rake { d } => rake(*d),
            FamilySpec::RakeLike { d, inner } => rake_like(*d, &inner.generate()?),
            FamilySpec::Delta => Ok(delta()),
            FamilySpec::Path { n } => path(*n),
            FamilySpec::Cycle { n } => cycle(*n),
            FamilySpec::Complete { n } => complete(*n),
            FamilySpec::Edgeless { n } => edgeless(*n),
            FamilySpec::LeafyTriangle => Ok(leafy_triangle()),
            FamilySpec::BranchingLink => Ok(branching_link()),
            FamilySpec::PathPlusIsolated => Ok(path_plus_isolated()),
            FamilySpec::Cond1Violator => Ok(cond1_violator()),
            FamilySpec::Cond2Violator => Ok(cond2_violator()),
        }
    }

    /// Names accepted by [`FamilySpec::from_name`].
    pub const NAMES: &'static [&'static str] = &[
        "rake",
        "rake-like",
        "delta",
        "path",
        "cycle",
        "complete",
        "edgeless",
        "leafy-triangle",
        "branching-link",
        "path-plus-isolated",
        "cond1-violator",
        "cond2-violator",
    ];

    /// Builds a spec from a family name; `d` and `n` are used where the family needs them.
    pub fn from_name(name: &str, d: Option<usize>, n: Option<usize>, inner: Option<FamilySpec>) -> Result<Self> {
        let need = |x: Option<usize>, flag: &str| {
            x.ok_or_else(|| Error::Precondition(format!("family `{name}` needs --{flag}")))
        };
        Ok(match name {
            "rake" => FamilySpec::Rake { d: need(d, "d")? },
            "rake-like" => FamilySpec::RakeLike {
                d: need(d, "d")?,
                inner: Box::new(
                    inner.ok_or_else(|| Error::Precondition("family `rake-like` needs an inner graph".into()))?,
                ),
            },
            "delta" => FamilySpec::Delta,
            "path" => FamilySpec::Path { n: need(n, "n")? },
            "cycle" => FamilySpec::Cycle { n: need(n, "n")? },
            "complete" => FamilySpec::Complete { n: need(n, "n")? },
            "edgeless" => FamilySpec::Edgeless { n: need(n, "n")? },
            "leafy-triangle" => FamilySpec::LeafyTriangle,
            "branching-link" => FamilySpec::BranchingLink,
            "path-plus-isolated" => FamilySpec::PathPlusIsolated,
            "cond1-violator" => FamilySpec::Cond1Violator,
            "cond2-violator" => FamilySpec::Cond2Violator,
            other => return Err(Error::Precondition(format!("unknown family `{other}`"))),
        })
    }
}

fn build(vertices: &[String], edges: &[(String, String)]) -> SimplicialGraph {
    SimplicialGraph::from_edges(vertices, edges).expect("generated graphs are valid")
}

fn owned(pairs: &[(&str, &str)]) -> Vec<(String, String)> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

/// The d-rake: u–v, v–a_i, a_i–b_i.
pub fn rake(d: usize) -> Result<SimplicialGraph> {
    rake_like(d, &complete(1)?.renamed(&["v"]))
}

/// A rake with the hub replaced by `inner`; every inner vertex is joined to u and to each a_i.
/// A single-vertex inner graph gives the plain rake.
pub fn rake_like(d: usize, inner: &SimplicialGraph) -> Result<SimplicialGraph> {
    if d < 1 {
        return Err(Error::Precondition("rake needs d ≥ 1".into()));
    }
    if inner.vertex_count() == 0 {
        return Err(Error::Precondition("inner graph is empty".into()));
    }
    let c = classify_vertices(inner);
    if c.principal != inner.all() {
        let bad = inner.names_of(inner.all() - c.principal).join(", ");
        return Err(Error::Precondition(format!(
            "inner graph has non-principal vertices: {bad}"
        )));
    }
    let mut vertices = vec!["u".to_string()];
    vertices.extend(inner.names().iter().cloned());
    vertices.extend((1..=d).map(|i| format!("a{i}")));
    vertices.extend((1..=d).map(|i| format!("b{i}")));
    let mut edges = Vec::new();
    for w in inner.names() {
        edges.push(("u".to_string(), w.clone()));
    }
    for (a, b) in inner.edges() {
        edges.push((inner.name(a).to_string(), inner.name(b).to_string()));
    }
    for i in 1..=d {
        for w in inner.names() {
            edges.push((w.clone(), format!("a{i}")));
        }
        edges.push((format!("a{i}"), format!("b{i}")));
    }
    let mut g = SimplicialGraph::new();
    for v in &vertices {
        g.add_vertex(v)
            .map_err(|_| Error::Precondition(format!("inner vertex name `{v}` clashes with a rake vertex")))?;
    }
    if g.vertex_count() != vertices.len() {
        return Err(Error::Precondition(
            "inner vertex names clash with rake vertices".into(),
        ));
    }
    for (a, b) in &edges {
        g.add_edge(g.vertex(a)?, g.vertex(b)?)?;
    }
    Ok(g)
}

/// Ten vertices: two rakes-of-length-one glued along a shared a2.
pub fn delta() -> SimplicialGraph {
    build(
        &names(&["u1", "v1", "u2", "v2", "a1", "a2", "a3", "b1", "b2", "b3"]),
        &owned(&[
            ("u1", "v1"),
            ("u2", "v2"),
            ("v1", "a1"),
            ("v1", "a2"),
            ("v2", "a2"),
            ("v2", "a3"),
            ("a1", "b1"),
            ("a2", "b2"),
            ("a3", "b3"),
        ]),
    )
}

pub fn path(n: usize) -> Result<SimplicialGraph> {
    if n < 1 {
        return Err(Error::Precondition("path needs n ≥ 1".into()));
    }
    let vs: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    let es: Vec<_> = vs.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    Ok(build(&vs, &es))
}

pub fn cycle(n: usize) -> Result<SimplicialGraph> {
    if n < 3 {
        return Err(Error::Precondition("cycle needs n ≥ 3".into()));
    }
    let vs: Vec<String> = (1..=n).map(|i| format!("c{i}")).collect();
    let es: Vec<_> = (0..n).map(|i| (vs[i].clone(), vs[(i + 1) % n].clone())).collect();
    Ok(build(&vs, &es))
}

pub fn complete(n: usize) -> Result<SimplicialGraph> {
    if n < 1 {
        return Err(Error::Precondition("complete graph needs n ≥ 1".into()));
    }
    let vs: Vec<String> = (1..=n).map(|i| format!("k{i}")).collect();
    let mut es = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            es.push((vs[i].clone(), vs[j].clone()));
        }
    }
    Ok(build(&vs, &es))
}

pub fn edgeless(n: usize) -> Result<SimplicialGraph> {
    if n < 1 {
        return Err(Error::Precondition("edgeless graph needs n ≥ 1".into()));
    }
    let vs: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    Ok(build(&vs, &[]))
}

/// Triangle p–q–v with a leaf on p and on q: v is principal but not maximal.
pub fn leafy_triangle() -> SimplicialGraph {
    build(
        &names(&["x", "p", "q", "y", "v"]),
        &owned(&[("x", "p"), ("p", "q"), ("q", "y"), ("v", "p"), ("v", "q")]),
    )
}

/// lk(v) = {l1, l2, l3}; Γ ∖ st(v) has components {x}, {y}, {c1, c2} and {e1, e2, e3}.
pub fn branching_link() -> SimplicialGraph {
    build(
        &names(&["v", "x", "y", "l1", "l2", "l3", "c1", "c2", "e1", "e2", "e3"]),
        &owned(&[
            ("x", "l1"),
            ("l1", "c1"),
            ("c1", "c2"),
            ("v", "l1"),
            ("v", "l2"),
            ("v", "l3"),
            ("l2", "e1"),
            ("l2", "e2"),
            ("e1", "e2"),
            ("l3", "e2"),
            ("l3", "y"),
            ("e2", "e3"),
        ]),
    )
}

/// Path a–b–c–d plus an isolated vertex e.
pub fn path_plus_isolated() -> SimplicialGraph {
    build(
        &names(&["a", "b", "c", "d", "e"]),
        &owned(&[("a", "b"), ("b", "c"), ("c", "d")]),
    )
}

/// u and u2 are non-principal at distance 2, and u2 commutes with m, a principal dominator of u.
pub fn cond1_violator() -> SimplicialGraph {
    build(
        &names(&["u", "v", "u2", "m", "m2", "a", "w"]),
        &owned(&[
            ("u", "v"),
            ("v", "u2"),
            ("v", "m"),
            ("v", "m2"),
            ("v", "a"),
            ("u2", "m"),
            ("m", "m2"),
            ("m2", "w"),
        ]),
    )
}

/// m dominates u and commutes with the principal vertex n at distance 2 from u.
pub fn cond2_violator() -> SimplicialGraph {
    build(
        &names(&[
            "u", "p1", "p2", "m", "m2", "n", "q1", "v", "q2", "q3", "q4", "r1", "r2", "r3",
        ]),
        &owned(&[
            ("u", "p1"),
            ("u", "p2"),
            ("p2", "m"),
            ("p2", "n"),
            ("p2", "m2"),
            ("p1", "m"),
            ("p1", "m2"),
            ("m", "n"),
            ("n", "q4"),
            ("m", "q2"),
            ("m2", "v"),
            ("m2", "q1"),
            ("n", "q3"),
            ("m", "q3"),
            ("q4", "r1"),
            ("q3", "r1"),
            ("q3", "r2"),
            ("v", "r3"),
        ]),
    )
}

impl SimplicialGraph {
    /// Same graph with vertices renamed in id order.
    pub fn renamed(&self, new_names: &[&str]) -> SimplicialGraph {
        assert_eq!(new_names.len(), self.vertex_count());
        let es: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(a, b)| (new_names[a.0].to_string(), new_names[b.0].to_string()))
            .collect();
        build(&names(new_names), &es)
    }
}
