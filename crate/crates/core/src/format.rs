//! Plain-text instance files.
//!
//! ```text
//! ihs-graph 1 directed 4 3
//! 0 1
//! 1 2
//! 2 0
//! planted 1 0
//! params delta=0.25 p=0.5 k=3 seed=7
//! ```
//!
//! The header names the kind, vertex count and edge count; one `u v` line
//! per edge (arc `u -> v` when directed) follows. The `planted` and
//! `params` trailers are optional. Writers emit edges in lexicographic
//! order and params in the order `delta p k seed`, so a written file
//! parses back and re-serializes to the same bytes.

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::graph::{Digraph, Graph, GraphError, VertexSet};
use crate::hitting_set::SubsetFamily;
use crate::models::{ModelParams, PlantedInstance};

const MAGIC: &str = "ihs-graph";
const VERSION: &str = "1";
const FAMILY_MAGIC: &str = "ihs-family";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphData {
    Undirected(Graph),
    Directed(Digraph),
}

impl GraphData {
    pub fn vertex_count(&self) -> usize {
        match self {
            GraphData::Undirected(g) => g.vertex_count(),
            GraphData::Directed(d) => d.vertex_count(),
        }
    }

    pub fn is_directed(&self) -> bool {
        matches!(self, GraphData::Directed(_))
    }
}

/// Generation parameters recorded alongside an instance.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InstanceParams {
    pub delta: Option<f64>,
    pub p: Option<f64>,
    pub k: Option<usize>,
    pub seed: Option<u64>,
}

impl InstanceParams {
    fn is_empty(&self) -> bool {
        *self == InstanceParams::default()
    }
}

impl From<&ModelParams> for InstanceParams {
    fn from(params: &ModelParams) -> Self {
        InstanceParams {
            delta: params.delta,
            p: Some(params.p),
            k: params.k,
            seed: Some(params.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: GraphData,
    pub planted: Option<VertexSet>,
    pub params: Option<InstanceParams>,
}

impl Instance {
    pub fn undirected(g: Graph) -> Self {
        Instance {
            graph: GraphData::Undirected(g),
            planted: None,
            params: None,
        }
    }

    pub fn directed(d: Digraph) -> Self {
        Instance {
            graph: GraphData::Directed(d),
            planted: None,
            params: None,
        }
    }

    pub fn from_planted(inst: &PlantedInstance) -> Self {
        Instance {
            graph: GraphData::Directed(inst.digraph.clone()),
            planted: Some(inst.planted.clone()),
            params: Some(InstanceParams::from(&inst.params)),
        }
    }

    pub fn with_params(mut self, params: InstanceParams) -> Self {
        self.params = Some(params);
        self
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let (kind, n, edges): (&str, usize, Vec<(usize, usize)>) = match &self.graph {
            GraphData::Undirected(g) => ("undirected", g.vertex_count(), g.edges().collect()),
            GraphData::Directed(d) => ("directed", d.vertex_count(), d.arcs().collect()),
        };
        let _ = writeln!(out, "{MAGIC} {VERSION} {kind} {n} {}", edges.len());
        for (u, v) in edges {
            let _ = writeln!(out, "{u} {v}");
        }
        if let Some(planted) = &self.planted {
            let _ = write!(out, "planted {}", planted.len());
            for v in planted.iter() {
                let _ = write!(out, " {v}");
            }
            out.push('\n');
        }
        if let Some(params) = self.params.filter(|p| !p.is_empty()) {
            let mut fields = Vec::new();
            if let Some(delta) = params.delta {
                fields.push(format!("delta={delta}"));
            }
            if let Some(p) = params.p {
                fields.push(format!("p={p}"));
            }
            if let Some(k) = params.k {
                fields.push(format!("k={k}"));
            }
            if let Some(seed) = params.seed {
                fields.push(format!("seed={seed}"));
            }
            let _ = writeln!(out, "params {}", fields.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Instance, FormatError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (header_line, header) = lines.next().ok_or_else(|| parse_error(1, "empty file"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 5 || fields[0] != MAGIC {
            return Err(parse_error(
                header_line,
                format!("expected header `{MAGIC} {VERSION} <directed|undirected> <n> <m>`"),
            ));
        }
        if fields[1] != VERSION {
            return Err(parse_error(header_line, format!("unsupported version {}", fields[1])));
        }
        let directed = match fields[2] {
            "directed" => true,
            "undirected" => false,
            other => return Err(parse_error(header_line, format!("unknown kind `{other}`"))),
        };
        let n: usize = parse_number(fields[3], header_line, "vertex count")?;
        let m: usize = parse_number(fields[4], header_line, "edge count")?;

        let mut edges = Vec::with_capacity(m);
        let mut last_line = header_line;
        for _ in 0..m {
            let (line, text) = lines
                .next()
                .ok_or_else(|| parse_error(last_line + 1, format!("expected {m} edge lines")))?;
            last_line = line;
            let mut parts = text.split_whitespace();
            let (Some(u), Some(v), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(parse_error(line, "expected `u v`"));
            };
            let u: usize = parse_number(u, line, "vertex id")?;
            let v: usize = parse_number(v, line, "vertex id")?;
            if u >= n || v >= n {
                return Err(parse_error(line, format!("vertex id out of range for n = {n}")));
            }
            edges.push((u, v));
        }

        let graph = if directed {
            Digraph::from_arcs(n, edges).map(GraphData::Directed)
        } else {
            Graph::from_edges(n, edges).map(GraphData::Undirected)
        }
        .map_err(|e: GraphError| parse_error(header_line, e.to_string()))?;

        let mut planted = None;
        let mut params = None;
        for (line, text) in lines {
            let mut parts = text.split_whitespace();
            match parts.next() {
                Some("planted") if planted.is_none() && params.is_none() => {
                    let count: usize = parse_number(parts.next().unwrap_or(""), line, "planted count")?;
                    let ids = parts
                        .map(|t| parse_number::<usize>(t, line, "vertex id"))
                        .collect::<Result<Vec<_>, _>>()?;
                    if ids.len() != count {
                        return Err(parse_error(line, format!("planted count {count} but {} ids", ids.len())));
                    }
                    if ids.iter().any(|&v| v >= n) {
                        return Err(parse_error(line, format!("planted id out of range for n = {n}")));
                    }
                    let set = VertexSet::from_unsorted(ids);
                    if set.len() != count {
                        return Err(parse_error(line, "repeated planted id"));
                    }
                    planted = Some(set);
                }
                Some("params") if params.is_none() => {
                    params = Some(parse_params(parts, line)?);
                }
                _ => return Err(parse_error(line, format!("unexpected line `{text}`"))),
            }
        }
        Ok(Instance { graph, planted, params })
    }

    pub fn read(path: &Path) -> Result<Instance, FormatError> {
        Instance::parse(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<(), FormatError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

/// Explicit set families: a header `ihs-family 1 <universe_size>` followed
/// by one subset per line. `#` comments and blank lines are ignored.
pub fn parse_family(text: &str) -> Result<SubsetFamily, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (line, header) = lines
        .find(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .ok_or_else(|| parse_error(1, "empty file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 3 || fields[0] != FAMILY_MAGIC || fields[1] != VERSION {
        return Err(parse_error(line, format!("expected header `{FAMILY_MAGIC} {VERSION} <universe_size>`")));
    }
    let universe: usize = parse_number(fields[2], line, "universe size")?;
    let body: Vec<&str> = text.lines().skip(line).collect();
    SubsetFamily::parse(universe, &body.join("\n")).map_err(|e| match e {
        crate::hitting_set::FamilyError::Parse { line: inner, message } => parse_error(inner + line, message),
        other => parse_error(line, other.to_string()),
    })
}

pub fn family_to_text(family: &SubsetFamily) -> String {
    format!("{FAMILY_MAGIC} {VERSION} {}\n{}", family.universe_size(), family.to_lines())
}

fn parse_number<T: std::str::FromStr>(token: &str, line: usize, what: &str) -> Result<T, FormatError> {
    token
        .parse()
        .map_err(|_| parse_error(line, format!("invalid {what} `{token}`")))
}

fn parse_params<'a>(tokens: impl Iterator<Item = &'a str>, line: usize) -> Result<InstanceParams, FormatError> {
    let mut params = InstanceParams::default();
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| parse_error(line, format!("expected key=value, got `{token}`")))?;
        let duplicate = match key {
            "delta" => params.delta.replace(parse_number(value, line, "delta")?).is_some(),
            "p" => params.p.replace(parse_number(value, line, "p")?).is_some(),
            "k" => params.k.replace(parse_number(value, line, "k")?).is_some(),
            "seed" => params.seed.replace(parse_number(value, line, "seed")?).is_some(),
            other => return Err(parse_error(line, format!("unknown parameter `{other}`"))),
        };
        if duplicate {
            return Err(parse_error(line, format!("parameter `{key}` given twice")));
        }
    }
    Ok(params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{gen_gnp, gen_planted};

    #[test]
    fn empty_graph_file() {
        let g = gen_gnp(&ModelParams::new(10, 0.0, 1)).unwrap();
        let text = Instance::undirected(g).to_text();
        assert_eq!(text, "ihs-graph 1 undirected 10 0\n");
    }

    #[test]
    fn planted_trailer() {
        let inst = gen_planted(&ModelParams::planted(400, 0.1, 0.6, 3, 7)).unwrap();
        let text = Instance::from_planted(&inst).to_text();
        let ids: Vec<String> = (0..40).map(|v| v.to_string()).collect();
        let trailer = format!("planted 40 {}\nparams delta=0.1 p=0.6 k=3 seed=7\n", ids.join(" "));
        assert!(text.ends_with(&trailer));
        let parsed = Instance::parse(&text).unwrap();
        assert_eq!(parsed.to_text(), text);
        assert_eq!(parsed.graph, GraphData::Directed(inst.digraph));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("", 1),
            ("ihs-graph 2 directed 3 0\n", 1),
            ("ihs-graph 1 directed 3 2\n0 1\n", 3),
            ("ihs-graph 1 directed 3 1\n0 7\n", 2),
            ("ihs-graph 1 undirected 3 1\n0 x\n", 2),
            ("ihs-graph 1 undirected 3 0\nplanted 2 0\n", 2),
            ("ihs-graph 1 undirected 3 0\nparams q=1\n", 2),
            ("ihs-graph 1 undirected 3 0\nparams p=1 p=2\n", 2),
            ("ihs-graph 1 undirected 3 0\n0 1\n", 2),
        ];
        for (text, expected) in cases {
            match Instance::parse(text) {
                Err(FormatError::Parse { line, .. }) => assert_eq!(line, expected, "{text:?}"),
                other => panic!("{text:?} gave {other:?}"),
            }
        }
        assert!(Instance::parse("ihs-graph 1 undirected 3 2\n0 1\n1 0\n").is_err());
        assert!(Instance::parse("ihs-graph 1 undirected 3 1\n1 1\n").is_err());
    }

    #[test]
    fn family_files() {
        let text = "# comment\nihs-family 1 5\n1 2\n\n2 3\n";
        let family = parse_family(text).unwrap();
        assert_eq!(family.len(), 2);
        assert_eq!(family_to_text(&family), "ihs-family 1 5\n1 2\n2 3\n");
        match parse_family("ihs-family 1 3\n0 1\n0 9\n") {
            Err(FormatError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_family("ihs-family 1 3\n\n").unwrap().is_empty());
        assert!(parse_family("ihs-graph 1 3\n").is_err());
    }

    #[test]
    fn unsorted_input_is_normalized() {
        let parsed = Instance::parse("ihs-graph 1 undirected 3 2\n2 1\n1 0\n").unwrap();
        assert_eq!(parsed.to_text(), "ihs-graph 1 undirected 3 2\n0 1\n1 2\n");
    }
}
