//! Uniform linear hypergraphs and the structural surgery used on supertrees.
//!
//! A [`Hypergraph`] is immutable once built: every constructor validates
//! uniformity, linearity and vertex references, and every operation returns a
//! fresh value. Vertex ids are dense (`0..n`) and isolated vertices are kept
//! explicitly, since they contribute to the order of the matching polynomial.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An r-uniform linear hypergraph on the vertex set `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hypergraph {
    rank: usize,
    n: usize,
    edges: Vec<Vec<usize>>,
}

/// Degree of a vertex and whether it is a core vertex (degree one).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRole {
    pub degree: usize,
    pub is_core: bool,
}

impl VertexRole {
    pub fn from_degree(degree: usize) -> Self {
        VertexRole {
            degree,
            is_core: degree == 1,
        }
    }
}

/// Connectivity summary computed over the vertex-edge incidence graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    pub is_connected: bool,
    pub is_acyclic: bool,
    pub is_supertree: bool,
    /// `None` when the hypergraph is disconnected.
    pub diameter: Option<usize>,
    pub roles: Vec<VertexRole>,
}

/// Validates raw input and compacts vertex ids to `0..n` in the order given by
/// `raw_vertices`.
pub fn validate(raw_vertices: &[u64], raw_edges: &[Vec<u64>], rank: usize) -> Result<Hypergraph> {
    Hypergraph::from_raw(rank, raw_vertices, raw_edges)
}

impl Hypergraph {
    /// Builds a hypergraph on `0..n`, checking every invariant.
    pub fn new(rank: usize, n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        if rank < 2 {
            return Err(Error::InvalidRank(rank));
        }
        let mut sorted = Vec::with_capacity(edges.len());
        for (idx, mut edge) in edges.into_iter().enumerate() {
            if let Some(&v) = edge.iter().find(|&&v| v >= n) {
                return Err(Error::DanglingVertexRef {
                    edge: idx,
                    vertex: v as u64,
                });
            }
            edge.sort_unstable();
            check_uniform(idx, &edge, rank)?;
            sorted.push(edge);
        }
        check_linear(&sorted)?;
        Ok(Hypergraph {
            rank,
            n,
            edges: sorted,
        })
    }

    /// Builds a hypergraph from arbitrary vertex labels.
    pub fn from_raw(rank: usize, raw_vertices: &[u64], raw_edges: &[Vec<u64>]) -> Result<Self> {
        let mut index = HashMap::with_capacity(raw_vertices.len());
        for (i, &v) in raw_vertices.iter().enumerate() {
            if index.insert(v, i).is_some() {
                return Err(Error::DuplicateVertex(v));
            }
        }
        let mut edges = Vec::with_capacity(raw_edges.len());
        for (idx, raw) in raw_edges.iter().enumerate() {
            let mut edge = Vec::with_capacity(raw.len());
            for v in raw {
                match index.get(v) {
                    Some(&i) => edge.push(i),
                    None => {
                        return Err(Error::DanglingVertexRef {
                            edge: idx,
                            vertex: *v,
                        })
                    }
                }
            }
            edges.push(edge);
        }
        Hypergraph::new(rank, raw_vertices.len(), edges)
    }

    /// `N_n`: `n` isolated vertices.
    pub fn empty(rank: usize, n: usize) -> Result<Self> {
        Hypergraph::new(rank, n, Vec::new())
    }

    pub(crate) fn from_parts_unchecked(rank: usize, n: usize, edges: Vec<Vec<usize>>) -> Self {
        debug_assert!(Hypergraph::new(rank, n, edges.clone()).is_ok());
        Hypergraph { rank, n, edges }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> Result<&[usize]> {
        self.edges
            .get(e)
            .map(Vec::as_slice)
            .ok_or(Error::NoSuchEdge(e))
    }

    /// Index of the edge with exactly these vertices, in any order.
    pub fn find_edge(&self, vertices: &[usize]) -> Option<usize> {
        let mut key = vertices.to_vec();
        key.sort_unstable();
        self.edges.iter().position(|e| *e == key)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            for &v in e {
                deg[v] += 1;
            }
        }
        deg
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|e| e.contains(&v)).count())
    }

    pub fn roles(&self) -> Vec<VertexRole> {
        self.degrees()
            .into_iter()
            .map(VertexRole::from_degree)
            .collect()
    }

    /// `E_v` as edge indices.
    pub fn incident_edges(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.contains(&v))
            .map(|(i, _)| i)
            .collect())
    }

    pub(crate) fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (i, e) in self.edges.iter().enumerate() {
            for &v in e {
                inc[v].push(i);
            }
        }
        inc
    }

    /// An edge is pendent when exactly `r - 1` of its vertices are core vertices.
    pub fn is_pendent_edge(&self, e: usize) -> Result<bool> {
        let edge = self.edge(e)?;
        let deg = self.degrees();
        let cores = edge.iter().filter(|&&v| deg[v] == 1).count();
        Ok(cores == self.rank - 1)
    }

    /// Vertices of `e` that lie in at least one other edge.
    pub fn intersection_vertices(&self, e: usize) -> Result<Vec<usize>> {
        let edge = self.edge(e)?;
        let deg = self.degrees();
        Ok(edge.iter().copied().filter(|&v| deg[v] > 1).collect())
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::NoSuchVertex(v))
        }
    }

    /// `H \ e`: same vertex set, edge `e` removed.
    pub fn delete_edge(&self, e: usize) -> Result<Self> {
        self.edge(e)?;
        let mut edges = self.edges.clone();
        edges.remove(e);
        Ok(Hypergraph {
            rank: self.rank,
            n: self.n,
            edges,
        })
    }

    /// `H - S`: drops the vertices in `S` and every edge touching them.
    /// Surviving vertices are renumbered in increasing order.
    pub fn delete_vertices(&self, removed: &[usize]) -> Result<Self> {
        self.delete_vertices_with_map(removed).map(|(h, _)| h)
    }

    /// Like [`delete_vertices`](Self::delete_vertices), also returning the map
    /// from old ids to new ids (`None` for deleted vertices).
    pub fn delete_vertices_with_map(
        &self,
        removed: &[usize],
    ) -> Result<(Self, Vec<Option<usize>>)> {
        let mut gone = vec![false; self.n];
        for &v in removed {
            self.check_vertex(v)?;
            gone[v] = true;
        }
        let mut map = vec![None; self.n];
        let mut next = 0;
        for v in 0..self.n {
            if !gone[v] {
                map[v] = Some(next);
                next += 1;
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| e.iter().all(|&v| !gone[v]))
            .map(|e| e.iter().map(|&v| map[v].unwrap()).collect())
            .collect();
        Ok((
            Hypergraph {
                rank: self.rank,
                n: next,
                edges,
            },
            map,
        ))
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.order()`.
    pub fn disjoint_union(&self, other: &Hypergraph) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let shift = self.n;
        let mut edges = self.edges.clone();
        edges.extend(
            other
                .edges
                .iter()
                .map(|e| e.iter().map(|&v| v + shift).collect()),
        );
        Ok(Hypergraph {
            rank: self.rank,
            n: self.n + other.n,
            edges,
        })
    }

    /// Adds one edge; fails if the result is not uniform or not linear.
    pub fn with_edge(&self, edge: Vec<usize>) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Hypergraph::new(self.rank, self.n, edges)
    }

    /// Adds `count` fresh isolated vertices, returning the new graph and the id
    /// of the first added vertex.
    pub fn with_new_vertices(&self, count: usize) -> (Self, usize) {
        (
            Hypergraph {
                rank: self.rank,
                n: self.n + count,
                edges: self.edges.clone(),
            },
            self.n,
        )
    }

    /// Applies a vertex permutation (`perm[old] = new`) and rotates the edge list.
    pub fn relabeled(&self, perm: &[usize], edge_rotation: usize) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::BadParams(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return Err(Error::BadParams("not a permutation".into()));
            }
            seen[p] = true;
        }
        let mut edges: Vec<Vec<usize>> = self
            .edges
            .iter()
            .map(|e| {
                let mut out: Vec<usize> = e.iter().map(|&v| perm[v]).collect();
                out.sort_unstable();
                out
            })
            .collect();
        if !edges.is_empty() {
            let k = edge_rotation % edges.len();
            edges.rotate_left(k);
        }
        Ok(Hypergraph {
            rank: self.rank,
            n: self.n,
            edges,
        })
    }

    /// Vertex sets of the connected components, each sorted; components are
    /// ordered by their smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            for w in e.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut order = Vec::new();
        for v in 0..self.n {
            let root = uf.find(v);
            groups
                .entry(root)
                .or_insert_with(|| {
                    order.push(root);
                    Vec::new()
                })
                .push(v);
        }
        order
            .into_iter()
            .map(|r| groups.remove(&r).unwrap())
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Acyclic iff the bipartite vertex-edge incidence graph is a forest.
    pub fn is_acyclic(&self) -> bool {
        let mut uf = UnionFind::new(self.n + self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            let node = self.n + i;
            for &v in e {
                if !uf.union(node, v) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_supertree(&self) -> bool {
        self.is_connected() && self.is_acyclic()
    }

    /// Edge-distances from `source`; `None` for unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(source)?;
        let inc = self.incidence();
        Ok(self.bfs(&inc, source))
    }

    fn bfs(&self, inc: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut edge_seen = vec![false; self.edges.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for &e in &inc[v] {
                if edge_seen[e] {
                    continue;
                }
                edge_seen[e] = true;
                for &w in &self.edges[e] {
                    if dist[w].is_none() {
                        dist[w] = Some(d + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    /// Largest edge-distance between two vertices.
    pub fn diameter(&self) -> Result<usize> {
        let inc = self.incidence();
        let mut best = 0;
        for v in 0..self.n {
            for d in self.bfs(&inc, v) {
                match d {
                    Some(d) => best = best.max(d),
                    None => return Err(Error::DiameterUndefined),
                }
            }
        }
        Ok(best)
    }

    pub fn structure(&self) -> Structure {
        let is_connected = self.is_connected();
        let is_acyclic = self.is_acyclic();
        let is_supertree = is_connected && is_acyclic;
        if is_supertree && self.n > 0 {
            debug_assert_eq!(self.n, self.edges.len() * (self.rank - 1) + 1);
        }
        Structure {
            is_connected,
            is_acyclic,
            is_supertree,
            diameter: if is_connected {
                self.diameter().ok()
            } else {
                None
            },
            roles: self.roles(),
        }
    }

    /// A shortest path from `u` to `v` as `(vertices, edges)`, where
    /// `vertices[0] = u`, `vertices.last() = v` and `edges[i]` joins
    /// `vertices[i]` and `vertices[i + 1]`.
    pub fn path_between(&self, u: usize, v: usize) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let inc = self.incidence();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        let mut edge_seen = vec![false; self.edges.len()];
        seen[u] = true;
        let mut queue = VecDeque::from([u]);
        while let Some(x) = queue.pop_front() {
            if x == v {
                break;
            }
            for &e in &inc[x] {
                if edge_seen[e] {
                    continue;
                }
                edge_seen[e] = true;
                for &w in &self.edges[e] {
                    if !seen[w] {
                        seen[w] = true;
                        prev[w] = Some((x, e));
                        queue.push_back(w);
                    }
                }
            }
        }
        if !seen[v] {
            return Ok(None);
        }
        let mut vertices = vec![v];
        let mut edges = Vec::new();
        let mut cur = v;
        while let Some((p, e)) = prev[cur] {
            vertices.push(p);
            edges.push(e);
            cur = p;
        }
        vertices.reverse();
        edges.reverse();
        Ok(Some((vertices, edges)))
    }

    /// Moves each edge `e_i` off its pivot `v_i` onto `target`:
    /// `e_i' = (e_i \ {v_i}) ∪ {target}`.
    pub fn move_edges(&self, moves: &[(usize, usize)], target: usize) -> Result<Self> {
        self.check_vertex(target)?;
        let mut edges = self.edges.clone();
        let mut moved = HashSet::new();
        for &(e, pivot) in moves {
            let edge = self.edge(e)?;
            if !moved.insert(e) {
                return Err(Error::DuplicateMove(e));
            }
            if edge.contains(&target) {
                return Err(Error::TargetInsideEdge {
                    edge: e,
                    vertex: target,
                });
            }
            if !edge.contains(&pivot) {
                return Err(Error::PivotNotInEdge {
                    edge: e,
                    vertex: pivot,
                });
            }
            let mut next: Vec<usize> = edge
                .iter()
                .map(|&w| if w == pivot { target } else { w })
                .collect();
            next.sort_unstable();
            edges[e] = next;
        }
        match check_linear(&edges) {
            Ok(()) => Ok(Hypergraph {
                rank: self.rank,
                n: self.n,
                edges,
            }),
            Err(Error::NonLinear { first, second, .. }) => {
                Err(Error::NonLinearResult { first, second })
            }
            Err(other) => Err(other),
        }
    }

    /// Edge-releasing on `e` at `u`: every edge meeting `e` at a vertex other
    /// than `u` is moved onto `u`.
    pub fn edge_release(&self, e: usize, u: usize) -> Result<Self> {
        let edge = self.edge(e)?.to_vec();
        if !edge.contains(&u) {
            return Err(Error::NoSuchVertex(u));
        }
        if self.intersection_vertices(e)?.len() < 2 {
            return Err(Error::PendentEdge(e));
        }
        let moves: Vec<(usize, usize)> = self
            .edges
            .iter()
            .enumerate()
            .filter(|&(i, f)| i != e && !f.contains(&u))
            .filter_map(|(i, f)| {
                let shared: Vec<usize> = f.iter().copied().filter(|w| edge.contains(w)).collect();
                match shared.as_slice() {
                    [v] => Some((i, *v)),
                    _ => None,
                }
            })
            .collect();
        self.move_edges(&moves, u)
    }

    /// Attaches a loose path of `length` fresh edges starting at `v`. Returns
    /// the new hypergraph together with the path vertices `v = w_0, …, w_length`.
    pub fn attach_pendent_path(&self, v: usize, length: usize) -> Result<(Self, Vec<usize>)> {
        self.check_vertex(v)?;
        let r = self.rank;
        let mut n = self.n;
        let mut edges = self.edges.clone();
        let mut spine = vec![v];
        let mut last = v;
        for _ in 0..length {
            let mut edge = vec![last];
            edge.extend(n..n + r - 1);
            last = n + r - 2;
            n += r - 1;
            spine.push(last);
            edges.push(edge);
        }
        Ok((Hypergraph::from_parts_unchecked(r, n, edges), spine))
    }
}

/// Coalescence `G·H`: identifies `u ∈ G` with `v ∈ H`. The fused vertex keeps
/// id `u`; the other vertices of `H` follow those of `G` in their original
/// order.
pub fn coalesce(g: &Hypergraph, u: usize, h: &Hypergraph, v: usize) -> Result<Hypergraph> {
    coalesce_with_map(g, u, h, v).map(|(out, _)| out)
}

/// Like [`coalesce`], also returning where each vertex of `h` ended up.
pub fn coalesce_with_map(
    g: &Hypergraph,
    u: usize,
    h: &Hypergraph,
    v: usize,
) -> Result<(Hypergraph, Vec<usize>)> {
    if g.rank != h.rank {
        return Err(Error::RankMismatch(g.rank, h.rank));
    }
    g.check_vertex(u)?;
    h.check_vertex(v)?;
    let mut map = vec![0; h.n];
    let mut next = g.n;
    for (w, slot) in map.iter_mut().enumerate() {
        if w == v {
            *slot = u;
        } else {
            *slot = next;
            next += 1;
        }
    }
    let mut edges = g.edges.clone();
    for e in &h.edges {
        let mut out: Vec<usize> = e.iter().map(|&w| map[w]).collect();
        out.sort_unstable();
        edges.push(out);
    }
    Ok((Hypergraph::from_parts_unchecked(g.rank, next, edges), map))
}

/// The r-th power of an ordinary graph: every 2-edge receives `r - 2` fresh
/// core vertices, appended after the original vertices edge by edge.
pub fn power(graph: &Hypergraph, r: usize) -> Result<Hypergraph> {
    if graph.rank != 2 {
        return Err(Error::RankNotTwo(graph.rank));
    }
    if r < 3 {
        return Err(Error::RankTooSmall(r));
    }
    let mut n = graph.n;
    let mut edges = Vec::with_capacity(graph.edges.len());
    for e in &graph.edges {
        let mut out = e.clone();
        out.extend(n..n + r - 2);
        n += r - 2;
        edges.push(out);
    }
    Ok(Hypergraph::from_parts_unchecked(r, n, edges))
}

fn check_uniform(idx: usize, sorted_edge: &[usize], rank: usize) -> Result<()> {
    if sorted_edge.len() != rank {
        return Err(Error::NonUniformEdge {
            edge: idx,
            rank,
            reason: format!("has {} vertices", sorted_edge.len()),
        });
    }
    if sorted_edge.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::NonUniformEdge {
            edge: idx,
            rank,
            reason: "repeats a vertex".into(),
        });
    }
    Ok(())
}

fn check_linear(edges: &[Vec<usize>]) -> Result<()> {
    let mut pairs: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        for a in 0..e.len() {
            for b in a + 1..e.len() {
                if let Some(&j) = pairs.get(&(e[a], e[b])) {
                    let shared = edges[j].iter().filter(|v| e.contains(v)).count();
                    return Err(Error::NonLinear {
                        first: j,
                        second: i,
                        shared,
                    });
                }
                pairs.insert((e[a], e[b]), i);
            }
        }
    }
    Ok(())
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}
