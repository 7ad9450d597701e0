use std::str::FromStr;

use super::SimplicialGraph;
use crate::error::Error;

impl FromStr for SimplicialGraph {
    type Err = Error;

    /// Parses the line format: `# comment`, `vertex <name>`, `edge <name> <name>`.
    fn from_str(input: &str) -> Result<Self, Error> {
        let mut g = SimplicialGraph::new();
        for (i, raw) in input.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| Error::Parse { line, message };
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = text.split_whitespace().collect();
            match tokens.as_slice() {
                ["vertex", name] => {
                    g.add_vertex(name).map_err(|e| err(e.to_string()))?;
                }
                ["edge", a, b] => {
                    let a = g.add_vertex(a).map_err(|e| err(e.to_string()))?;
                    let b = g.add_vertex(b).map_err(|e| err(e.to_string()))?;
                    g.add_edge(a, b).map_err(|e| err(e.to_string()))?;
                }
                ["vertex", ..] => return Err(err("expected `vertex <name>`".into())),
                ["edge", ..] => return Err(err("expected `edge <name> <name>`".into())),
                [other, ..] => return Err(err(format!("unknown directive `{other}`"))),
                [] => unreachable!(),
            }
        }
        Ok(g)
    }
}
