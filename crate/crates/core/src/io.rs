//! JSON interchange for hypergraphs and file export helpers.
//!
//! Format: `{"r": 3, "n": 5, "edges": [[0,1,2],[2,3,4]], "name": "P_2"}`.
//! Vertices are `0..n`; the writer always emits compact ids.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// A hypergraph with an optional display name, as stored on disk.
#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub graph: Hypergraph,
    pub name: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    r: Value,
    n: Value,
    edges: Value,
    #[serde(default)]
    name: Option<String>,
}

#[derive(Serialize)]
struct OutDocument<'a> {
    r: usize,
    n: usize,
    edges: &'a [Vec<usize>],
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<&'a str>,
}

fn parse_err(location: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        location: location.into(),
        message: message.into(),
    }
}

fn as_index(v: &Value, location: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| {
            parse_err(
                location,
                format!("expected a non-negative integer, got {v}"),
            )
        })
}

/// Parses the JSON interchange format and validates the hypergraph.
pub fn parse_hypergraph(text: &str) -> Result<Document> {
    let raw: RawDocument = serde_json::from_str(text).map_err(|e| {
        parse_err(
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let r = as_index(&raw.r, "r")?;
    let n = as_index(&raw.n, "n")?;
    let list = raw
        .edges
        .as_array()
        .ok_or_else(|| parse_err("edges", "expected an array of edges"))?;
    let mut edges = Vec::with_capacity(list.len());
    for (i, item) in list.iter().enumerate() {
        let at = format!("edges[{i}]");
        let verts = item
            .as_array()
            .ok_or_else(|| parse_err(&at, format!("expected an array of vertices, got {item}")))?;
        let mut edge = Vec::with_capacity(verts.len());
        for (j, v) in verts.iter().enumerate() {
            edge.push(as_index(v, &format!("{at}[{j}]"))?);
        }
        edges.push(edge);
    }
    let graph = Hypergraph::new(r, n, edges).map_err(|e| match e {
        Error::NonUniformEdge { edge, .. } | Error::DanglingVertexRef { edge, .. } => {
            parse_err(format!("edges[{edge}]"), e.to_string())
        }
        Error::NonLinear { second, .. } => parse_err(format!("edges[{second}]"), e.to_string()),
        Error::InvalidRank(_) => parse_err("r", e.to_string()),
        other => other,
    })?;
    Ok(Document {
        graph,
        name: raw.name,
    })
}

/// Reads and validates a hypergraph file.
pub fn ingest(path: impl AsRef<Path>) -> Result<Document> {
    let path = path.as_ref();
    let text =
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_hypergraph(&text)
}

pub fn to_json(h: &Hypergraph, name: Option<&str>) -> String {
    let doc = OutDocument {
        r: h.rank(),
        n: h.order(),
        edges: h.edges(),
        name,
    };
    serde_json::to_string(&doc).expect("plain data serializes")
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_file(path: impl AsRef<Path>, contents: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn export(h: &Hypergraph, name: Option<&str>, path: impl AsRef<Path>) -> Result<()> {
    write_file(path, &to_json(h, name))
}
