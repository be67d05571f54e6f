//! Named supertree families and grafting builders.
//!
//! Every constructor returns a [`Built`]: the hypergraph plus a map of named
//! anchor vertices. Paths are labelled `v1, e1, v2, …, ed, v(d+1)`; the anchor
//! `v{k}` is the k-th path vertex. Stars expose `center`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{coalesce_with_map, power, Hypergraph};

pub type Anchors = BTreeMap<String, usize>;

#[derive(Clone, Debug, PartialEq)]
pub struct Built {
    pub graph: Hypergraph,
    pub anchors: Anchors,
}

impl Built {
    pub fn anchor(&self, name: &str) -> Result<usize> {
        self.anchors
            .get(name)
            .copied()
            .ok_or_else(|| Error::BadParams(format!("no anchor named {name}")))
    }
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParams(msg.into())
}

/// Loose path with its spine `v_1, …, v_{d+1}` (ids in the returned vector).
fn path_with_spine(d: usize, r: usize) -> Result<(Hypergraph, Vec<usize>)> {
    Hypergraph::empty(r, 1)?.attach_pendent_path(0, d)
}

fn spine_anchors(spine: &[usize]) -> Anchors {
    spine
        .iter()
        .enumerate()
        .map(|(k, &v)| (format!("v{}", k + 1), v))
        .collect()
}

/// Lowest-id core vertex of the j-th path edge (1-based).
fn core_of(h: &Hypergraph, spine: &[usize], j: usize) -> Result<usize> {
    if h.rank() < 3 {
        return Err(Error::RankTooSmall(h.rank()));
    }
    let (a, b) = (spine[j - 1], spine[j]);
    let e = h
        .edges()
        .iter()
        .find(|e| e.contains(&a) && e.contains(&b))
        .ok_or(Error::NoSuchEdge(j - 1))?;
    Ok(*e.iter().find(|&&w| w != a && w != b).unwrap())
}

fn attach_pendents(mut h: Hypergraph, v: usize, count: usize) -> Result<Hypergraph> {
    for _ in 0..count {
        h = h.attach_pendent_path(v, 1)?.0;
    }
    Ok(h)
}

pub fn loose_path(m: usize, r: usize) -> Result<Built> {
    let (graph, spine) = path_with_spine(m, r)?;
    Ok(Built {
        graph,
        anchors: spine_anchors(&spine),
    })
}

pub fn hyperstar(m: usize, r: usize) -> Result<Built> {
    if m == 0 {
        return Err(bad("a hyperstar needs at least one edge"));
    }
    let graph = attach_pendents(Hypergraph::empty(r, 1)?, 0, m)?;
    Ok(Built {
        graph,
        anchors: Anchors::from([("center".to_string(), 0)]),
    })
}

/// The r-th power of an ordinary tree.
pub fn power_of_tree(tree: &Hypergraph, r: usize) -> Result<Built> {
    if !tree.is_supertree() {
        return Err(bad("base graph must be a tree"));
    }
    let graph = if r == 2 {
        if tree.rank() != 2 {
            return Err(Error::RankNotTwo(tree.rank()));
        }
        tree.clone()
    } else {
        power(tree, r)?
    };
    Ok(Built {
        graph,
        anchors: Anchors::new(),
    })
}

/// `P_d` with `m - d` pendent edges at `v_i`.
pub fn t_md_i(m: usize, d: usize, r: usize, i: usize) -> Result<Built> {
    if !(2 <= i && i <= d && d < m) {
        return Err(bad(format!(
            "need 2 <= i <= d <= m-1, got m={m} d={d} i={i}"
        )));
    }
    let (path, spine) = path_with_spine(d, r)?;
    let graph = attach_pendents(path, spine[i - 1], m - d)?;
    debug_assert_eq!(graph.diameter(), Ok(d));
    Ok(Built {
        graph,
        anchors: spine_anchors(&spine),
    })
}

/// `P_d` with `m - d - 1` pendent edges at `v_i` and one at `v_j`.
pub fn t_md_ij(m: usize, d: usize, r: usize, i: usize, j: usize) -> Result<Built> {
    if !(2 <= i && 2 <= j && i != j && i.max(j) <= d && d + 2 <= m) {
        return Err(bad(format!(
            "need 2 <= i != j <= d <= m-2, got m={m} d={d} i={i} j={j}"
        )));
    }
    let (path, spine) = path_with_spine(d, r)?;
    let h = attach_pendents(path, spine[i - 1], m - d - 1)?;
    let graph = attach_pendents(h, spine[j - 1], 1)?;
    debug_assert_eq!(graph.diameter(), Ok(d));
    Ok(Built {
        graph,
        anchors: spine_anchors(&spine),
    })
}

/// `t_md_ij` with the `m - d - 1` pendent edges at the centre `v_{⌊d/2⌋+1}`
/// and the single one at `v_{⌊d/2⌋+2}`.
pub fn t_double_prime(m: usize, d: usize, r: usize) -> Result<Built> {
    if d < 3 || m < d + 2 {
        return Err(bad(format!("need d >= 3 and m >= d+2, got m={m} d={d}")));
    }
    let c = d / 2 + 1;
    t_md_ij(m, d, r, c, c + 1)
}

/// `P_d` with a hyperstar of `m - d` edges centred at a core vertex of `e_i`.
pub fn t_mdr_edge_i(m: usize, d: usize, r: usize, i: usize) -> Result<Built> {
    if r < 3 {
        return Err(Error::RankTooSmall(r));
    }
    if !(2 <= i && i < d && d <= m) {
        return Err(bad(format!(
            "need 2 <= i <= d-1 and d <= m, got m={m} d={d} i={i}"
        )));
    }
    let (path, spine) = path_with_spine(d, r)?;
    let u = core_of(&path, &spine, i)?;
    let graph = attach_pendents(path, u, m - d)?;
    debug_assert_eq!(graph.diameter(), Ok(d));
    let mut anchors = spine_anchors(&spine);
    anchors.insert("center".into(), u);
    Ok(Built { graph, anchors })
}

/// `P_{m-1}` with a pendent edge at a core vertex of `e_2`. For `r = 2` there
/// is no core vertex and the pendent edge goes to `v_2` (the caterpillar `D_m`).
pub fn d_family(m: usize, r: usize) -> Result<Built> {
    if m < 3 {
        return Err(bad(format!("need m >= 3, got {m}")));
    }
    if r == 2 {
        return p_grave(m, r);
    }
    let (path, spine) = path_with_spine(m - 1, r)?;
    let u = core_of(&path, &spine, 2)?;
    let graph = attach_pendents(path, u, 1)?;
    let mut anchors = spine_anchors(&spine);
    anchors.insert("center".into(), u);
    Ok(Built { graph, anchors })
}

/// `P_{m-1}` with a pendent edge at `v_2`.
pub fn p_grave(m: usize, r: usize) -> Result<Built> {
    if m < 3 {
        return Err(bad(format!("need m >= 3, got {m}")));
    }
    let (path, spine) = path_with_spine(m - 1, r)?;
    let graph = attach_pendents(path, spine[1], 1)?;
    Ok(Built {
        graph,
        anchors: spine_anchors(&spine),
    })
}

/// Attaches a loose path of `p` fresh edges at `v`.
pub fn attach_pendent_path(h: &Hypergraph, v: usize, p: usize) -> Result<Hypergraph> {
    Ok(h.attach_pendent_path(v, p)?.0)
}

fn coalesce_onto_path(
    d: usize,
    at: usize,
    spine: Vec<usize>,
    path: Hypergraph,
    h: &Hypergraph,
    u: usize,
) -> Result<Built> {
    let (graph, map) = coalesce_with_map(&path, at, h, u)?;
    let mut anchors = spine_anchors(&spine);
    anchors.insert("u".into(), map[u]);
    debug_assert_eq!(graph.size(), d + h.size());
    Ok(Built { graph, anchors })
}

/// `u ∈ H` identified with `v_i` of `P_d`.
pub fn path_vertex_attach(d: usize, r: usize, i: usize, h: &Hypergraph, u: usize) -> Result<Built> {
    if !(1 <= i && i <= d + 1) {
        return Err(bad(format!("vertex index {i} outside 1..={}", d + 1)));
    }
    let (path, spine) = path_with_spine(d, r)?;
    coalesce_onto_path(d, spine[i - 1], spine, path, h, u)
}

/// `u ∈ H` identified with a core vertex of `e_j` of `P_d`.
pub fn path_edge_attach(d: usize, r: usize, j: usize, h: &Hypergraph, u: usize) -> Result<Built> {
    if !(1 <= j && j <= d) {
        return Err(bad(format!("edge index {j} outside 1..={d}")));
    }
    let (path, spine) = path_with_spine(d, r)?;
    let core = core_of(&path, &spine, j)?;
    coalesce_onto_path(d, core, spine, path, h, u)
}

/// Two pendent paths of lengths `p` and `q`, both at `v`.
pub fn graft_one_vertex(t: &Hypergraph, v: usize, p: usize, q: usize) -> Result<Hypergraph> {
    let h = attach_pendent_path(t, v, p)?;
    attach_pendent_path(&h, v, q)
}

/// Pendent paths of lengths `p` at `u` and `q` at `v`, where `u` and `v` share
/// an edge.
pub fn graft_adjacent(
    t: &Hypergraph,
    u: usize,
    v: usize,
    p: usize,
    q: usize,
) -> Result<Hypergraph> {
    if u == v || !t.edges().iter().any(|e| e.contains(&u) && e.contains(&v)) {
        return Err(bad(format!("vertices {u} and {v} do not share an edge")));
    }
    let h = attach_pendent_path(t, u, p)?;
    attach_pendent_path(&h, v, q)
}

/// Distance between `u` and `v` when the path joining them qualifies for the
/// distance-s grafting: all non-path vertices of its edges after the first
/// have degree one.
pub fn grafting_distance(t: &Hypergraph, u: usize, v: usize) -> Result<usize> {
    let (verts, edges) = t
        .path_between(u, v)?
        .ok_or_else(|| bad(format!("no path between {u} and {v}")))?;
    if edges.is_empty() {
        return Err(bad("u and v must be distinct"));
    }
    for (k, &e) in edges.iter().enumerate().skip(1) {
        for &w in &t.edges()[e] {
            if w != verts[k] && w != verts[k + 1] && t.degree(w)? != 1 {
                return Err(bad(format!(
                    "vertex {w} of path edge {} has degree {}",
                    k + 1,
                    t.degree(w)?
                )));
            }
        }
    }
    Ok(edges.len())
}

/// Pendent paths of lengths `p` at `u` and `q` at `v`, with `u`, `v` at
/// distance `s` along a path whose later edges carry nothing else.
pub fn graft_distance_s(
    t: &Hypergraph,
    u: usize,
    v: usize,
    p: usize,
    q: usize,
) -> Result<(Hypergraph, usize)> {
    let s = grafting_distance(t, u, v)?;
    let h = attach_pendent_path(t, u, p)?;
    Ok((attach_pendent_path(&h, v, q)?, s))
}

/// A serialisable description of a family member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum FamilySpec {
    LoosePath {
        m: usize,
        r: usize,
    },
    Hyperstar {
        m: usize,
        r: usize,
    },
    PowerOfTree {
        r: usize,
        n: usize,
        edges: Vec<[usize; 2]>,
    },
    #[serde(rename = "Tmd_i")]
    TmdI {
        m: usize,
        d: usize,
        r: usize,
        i: usize,
    },
    #[serde(rename = "Tmdr_edge_i")]
    TmdrEdgeI {
        m: usize,
        d: usize,
        r: usize,
        i: usize,
    },
    TDoublePrime {
        m: usize,
        d: usize,
        r: usize,
    },
    D {
        m: usize,
        r: usize,
    },
    PGrave {
        m: usize,
        r: usize,
    },
    GraftOneVertex {
        base: Box<FamilySpec>,
        v: usize,
        p: usize,
        q: usize,
    },
    GraftAdjacent {
        base: Box<FamilySpec>,
        u: usize,
        v: usize,
        p: usize,
        q: usize,
    },
    GraftDistanceS {
        base: Box<FamilySpec>,
        u: usize,
        v: usize,
        p: usize,
        q: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        s: Option<usize>,
    },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Built> {
        use FamilySpec::*;
        match self {
            LoosePath { m, r } => loose_path(*m, *r),
            Hyperstar { m, r } => hyperstar(*m, *r),
            PowerOfTree { r, n, edges } => {
                let tree = Hypergraph::new(2, *n, edges.iter().map(|e| e.to_vec()).collect())?;
                power_of_tree(&tree, *r)
            }
            TmdI { m, d, r, i } => t_md_i(*m, *d, *r, *i),
            TmdrEdgeI { m, d, r, i } => t_mdr_edge_i(*m, *d, *r, *i),
            TDoublePrime { m, d, r } => t_double_prime(*m, *d, *r),
            D { m, r } => d_family(*m, *r),
            PGrave { m, r } => p_grave(*m, *r),
            GraftOneVertex { base, v, p, q } => {
                let b = base.build()?;
                Ok(Built {
                    graph: graft_one_vertex(&b.graph, *v, *p, *q)?,
                    anchors: b.anchors,
                })
            }
            GraftAdjacent { base, u, v, p, q } => {
                let b = base.build()?;
                Ok(Built {
                    graph: graft_adjacent(&b.graph, *u, *v, *p, *q)?,
                    anchors: b.anchors,
                })
            }
            GraftDistanceS {
                base,
                u,
                v,
                p,
                q,
                s,
            } => {
                let b = base.build()?;
                let (graph, actual) = graft_distance_s(&b.graph, *u, *v, *p, *q)?;
                if let Some(expected) = s {
                    if *expected != actual {
                        return Err(bad(format!(
                            "u and v are at distance {actual}, not {expected}"
                        )));
                    }
                }
                Ok(Built {
                    graph,
                    anchors: b.anchors,
                })
            }
        }
    }

    pub fn rank(&self) -> usize {
        use FamilySpec::*;
        match self {
            LoosePath { r, .. }
            | Hyperstar { r, .. }
            | PowerOfTree { r, .. }
            | TmdI { r, .. }
            | TmdrEdgeI { r, .. }
            | TDoublePrime { r, .. }
            | D { r, .. }
            | PGrave { r, .. } => *r,
            GraftOneVertex { base, .. }
            | GraftAdjacent { base, .. }
            | GraftDistanceS { base, .. } => base.rank(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            LoosePath { m, r } => write!(f, "P(m={m},r={r})"),
            Hyperstar { m, r } => write!(f, "S(m={m},r={r})"),
            PowerOfTree { r, n, .. } => write!(f, "power(n={n},r={r})"),
            TmdI { m, d, r, i } => write!(f, "T(m={m},d={d},r={r})(v{i})"),
            TmdrEdgeI { m, d, r, i } => write!(f, "T(m={m},d={d},r={r})(e{i})"),
            TDoublePrime { m, d, r } => write!(f, "T''(m={m},d={d},r={r})"),
            D { m, r } => write!(f, "D(m={m},r={r})"),
            PGrave { m, r } => write!(f, "Pgrave(m={m},r={r})"),
            GraftOneVertex { base, v, p, q } => write!(f, "{base}[v={v};{p},{q}]"),
            GraftAdjacent { base, u, v, p, q } => write!(f, "{base}[u={u},v={v};{p},{q}]"),
            GraftDistanceS {
                base, u, v, p, q, ..
            } => write!(f, "{base}[u={u}~v={v};{p},{q}]"),
        }
    }
}
