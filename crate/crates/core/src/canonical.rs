//! Isomorphism codes for superforests.
//!
//! The vertex-edge incidence graph of a superforest is an ordinary forest, so
//! each component is rooted at its center and encoded with the classic AHU
//! scheme: a node's code is its tag followed by the sorted codes of its
//! children. Vertex nodes are tagged `v`, edge nodes `e`; the rank is written
//! in a header so that codes of different ranks never collide.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Isomorphism-invariant encoding of a superforest.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CanonicalCode(Vec<u8>);

impl CanonicalCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        // only ASCII is ever written
        std::str::from_utf8(&self.0).expect("canonical codes are ASCII")
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl From<CanonicalCode> for String {
    fn from(code: CanonicalCode) -> String {
        code.as_str().to_owned()
    }
}

impl TryFrom<String> for CanonicalCode {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        if s.is_ascii() {
            Ok(CanonicalCode(s.into_bytes()))
        } else {
            Err(Error::Parse {
                location: "canonical_code".into(),
                message: "code must be ASCII".into(),
            })
        }
    }
}

/// Computes the canonical code of a superforest.
pub fn canonical_code(h: &Hypergraph) -> Result<CanonicalCode> {
    if !h.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    let n = h.order();
    let total = n + h.size();
    let mut adj = vec![Vec::new(); total];
    for (i, e) in h.edges().iter().enumerate() {
        for &v in e {
            adj[v].push(n + i);
            adj[n + i].push(v);
        }
    }

    let mut seen = vec![false; total];
    let mut parts: Vec<Vec<u8>> = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let nodes = collect_component(&adj, start, &mut seen);
        let best = centers(&adj, &nodes)
            .into_iter()
            .map(|c| {
                let mut out = Vec::new();
                encode(&adj, n, c, usize::MAX, &mut out);
                out
            })
            .min()
            .unwrap();
        parts.push(best);
    }
    parts.sort();

    let mut bytes = format!("r{}:", h.rank()).into_bytes();
    for p in parts {
        bytes.extend(p);
    }
    Ok(CanonicalCode(bytes))
}

fn collect_component(adj: &[Vec<usize>], start: usize, seen: &mut [bool]) -> Vec<usize> {
    let mut stack = vec![start];
    let mut nodes = Vec::new();
    seen[start] = true;
    while let Some(x) = stack.pop() {
        nodes.push(x);
        for &y in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    nodes
}

/// Center (one node) or bicenter (two nodes) of a tree, by leaf peeling.
fn centers(adj: &[Vec<usize>], nodes: &[usize]) -> Vec<usize> {
    if nodes.len() <= 2 {
        return nodes.to_vec();
    }
    let mut degree: std::collections::HashMap<usize, usize> =
        nodes.iter().map(|&x| (x, adj[x].len())).collect();
    let mut leaves: Vec<usize> = nodes.iter().copied().filter(|x| degree[x] <= 1).collect();
    let mut remaining = nodes.len();
    while remaining > 2 {
        remaining -= leaves.len();
        let mut next = Vec::new();
        for &leaf in &leaves {
            for &y in &adj[leaf] {
                let d = degree.get_mut(&y).unwrap();
                if *d > 0 {
                    *d -= 1;
                    if *d == 1 {
                        next.push(y);
                    }
                }
            }
            *degree.get_mut(&leaf).unwrap() = 0;
        }
        leaves = next;
    }
    leaves
}

fn encode(adj: &[Vec<usize>], n: usize, node: usize, parent: usize, out: &mut Vec<u8>) {
    out.push(if node < n { b'v' } else { b'e' });
    let mut children: Vec<Vec<u8>> = adj[node]
        .iter()
        .filter(|&&c| c != parent)
        .map(|&c| {
            let mut buf = Vec::new();
            encode(adj, n, c, node, &mut buf);
            buf
        })
        .collect();
    if children.is_empty() {
        return;
    }
    children.sort();
    out.push(b'(');
    for c in children {
        out.extend(c);
    }
    out.push(b')');
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Hypergraph {
        Hypergraph::new(3, 7, vec![vec![0, 1, 2], vec![2, 3, 4], vec![4, 5, 6]]).unwrap()
    }

    fn star3() -> Hypergraph {
        Hypergraph::new(3, 7, vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6]]).unwrap()
    }

    #[test]
    fn path_and_star_differ() {
        assert_ne!(
            canonical_code(&path3()).unwrap(),
            canonical_code(&star3()).unwrap()
        );
    }

    #[test]
    fn reversed_vertex_order_gives_same_code() {
        let p2 = Hypergraph::new(3, 5, vec![vec![0, 1, 2], vec![2, 3, 4]]).unwrap();
        let rev = p2.relabeled(&[4, 3, 2, 1, 0], 1).unwrap();
        assert_eq!(canonical_code(&p2).unwrap(), canonical_code(&rev).unwrap());
    }

    #[test]
    fn rank_is_part_of_the_code() {
        let a = Hypergraph::empty(3, 2).unwrap();
        let b = Hypergraph::empty(4, 2).unwrap();
        assert_ne!(canonical_code(&a).unwrap(), canonical_code(&b).unwrap());
    }

    #[test]
    fn isolated_vertices_are_counted() {
        let a = Hypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let b = Hypergraph::new(3, 4, vec![vec![0, 1, 2]]).unwrap();
        assert_ne!(canonical_code(&a).unwrap(), canonical_code(&b).unwrap());
        let empty = Hypergraph::empty(3, 0).unwrap();
        assert_eq!(canonical_code(&empty).unwrap().as_str(), "r3:");
    }

    #[test]
    fn cyclic_input_is_rejected() {
        let h = Hypergraph::new(3, 6, vec![vec![0, 1, 3], vec![1, 2, 4], vec![0, 2, 5]]).unwrap();
        assert_eq!(canonical_code(&h), Err(Error::NotAcyclic));
    }

    #[test]
    fn code_round_trips_through_json() {
        let code = canonical_code(&star3()).unwrap();
        let text = serde_json::to_string(&code).unwrap();
        let back: CanonicalCode = serde_json::from_str(&text).unwrap();
        assert_eq!(back, code);
    }
}
