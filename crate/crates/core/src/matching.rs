//! Matching polynomials of uniform hypergraphs.
//!
//! For an r-uniform hypergraph of order n the matching polynomial is
//! `φ(H, x) = Σ_k (-1)^k m(H, k) x^(n - k r)`, where `m(H, k)` counts the
//! k-matchings. Only the counts are stored; the order fixes the exponents.
//! Counts are computed with the edge recurrence
//! `φ(G) = φ(G \ e) - φ(G - V(e))`, splitting into components and memoising
//! acyclic components by canonical code.

use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::canonical::{canonical_code, CanonicalCode};
use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, UnionFind};
use crate::IntPoly;

/// Edge count above which brute-force matching enumeration refuses to run.
pub const BRUTE_FORCE_MAX_EDGES: usize = 20;

/// Exact matching polynomial: order `n`, rank `r` and counts `m_0..m_ν`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatchingPolynomial {
    n: usize,
    r: usize,
    counts: Vec<BigUint>,
}

impl MatchingPolynomial {
    /// Builds from raw counts; trailing zeros are dropped and `m_0` must be 1.
    pub fn from_counts(n: usize, r: usize, mut counts: Vec<BigUint>) -> Result<Self> {
        while counts.len() > 1 && counts.last().is_some_and(Zero::is_zero) {
            counts.pop();
        }
        if !counts.first().is_some_and(|c| c.is_one()) {
            return Err(Error::BadParams("m_0 must equal 1".into()));
        }
        if counts.iter().any(Zero::is_zero) {
            return Err(Error::BadParams(
                "matching counts must be positive up to ν".into(),
            ));
        }
        if (counts.len() - 1) * r > n {
            return Err(Error::BadParams(format!(
                "a {}-matching does not fit in {} vertices",
                counts.len() - 1,
                n
            )));
        }
        Ok(MatchingPolynomial { n, r, counts })
    }

    /// `φ(N_n) = x^n`.
    pub fn isolated(n: usize, r: usize) -> Self {
        MatchingPolynomial {
            n,
            r,
            counts: vec![BigUint::one()],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    /// `m(H, k)`, zero beyond the matching number.
    pub fn count(&self, k: usize) -> BigUint {
        self.counts.get(k).cloned().unwrap_or_default()
    }

    /// ν, the size of a largest matching.
    pub fn matching_number(&self) -> usize {
        self.counts.len() - 1
    }

    /// The number of edges, read off `m_1`.
    pub fn edge_count(&self) -> usize {
        self.count(1).to_usize().expect("edge count fits in usize")
    }

    /// Full polynomial in `x`.
    pub fn to_poly(&self) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); self.n + 1];
        for (k, c) in self.counts.iter().enumerate() {
            let c = BigInt::from(c.clone());
            coeffs[self.n - k * self.r] = if k % 2 == 0 { c } else { -c };
        }
        IntPoly::new(coeffs)
    }

    /// Reduced polynomial `p(y) = Σ (-1)^k m_k y^(ν-k)`, so that
    /// `φ(x) = x^(n - ν r) p(x^r)`.
    pub fn reduced(&self) -> IntPoly {
        let nu = self.matching_number();
        let mut coeffs = vec![BigInt::zero(); nu + 1];
        for (k, c) in self.counts.iter().enumerate() {
            let c = BigInt::from(c.clone());
            coeffs[nu - k] = if k % 2 == 0 { c } else { -c };
        }
        IntPoly::new(coeffs)
    }
}

impl fmt::Display for MatchingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_poly(), f)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CountRepr {
    Small(u64),
    Big(String),
}

#[derive(Serialize, Deserialize)]
struct MatchingPolynomialJson {
    n: usize,
    r: usize,
    counts: Vec<CountRepr>,
}

impl Serialize for MatchingPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatchingPolynomialJson {
            n: self.n,
            r: self.r,
            counts: self
                .counts
                .iter()
                .map(|c| match c.to_u64() {
                    Some(v) => CountRepr::Small(v),
                    None => CountRepr::Big(c.to_string()),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MatchingPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = MatchingPolynomialJson::deserialize(deserializer)?;
        let counts = raw
            .counts
            .into_iter()
            .map(|c| match c {
                CountRepr::Small(v) => Ok(BigUint::from(v)),
                CountRepr::Big(s) => s.parse::<BigUint>().map_err(D::Error::custom),
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        MatchingPolynomial::from_counts(raw.n, raw.r, counts).map_err(D::Error::custom)
    }
}

/// `m(H, k)` by enumerating every k-subset of edges.
pub fn count_matchings_bruteforce(h: &Hypergraph, k: usize) -> Result<BigUint> {
    if h.size() > BRUTE_FORCE_MAX_EDGES {
        return Err(Error::TooLarge(h.size()));
    }
    let disjoint = |a: &Vec<usize>, b: &Vec<usize>| a.iter().all(|v| !b.contains(v));
    let count = h
        .edges()
        .iter()
        .combinations(k)
        .filter(|set| set.iter().tuple_combinations().all(|(a, b)| disjoint(a, b)))
        .count();
    Ok(BigUint::from(count))
}

/// Memo table shared across calls: acyclic connected components keyed by
/// their canonical code. Reads take a shared lock, inserts an exclusive one.
#[derive(Debug, Default)]
pub struct MatchingCache {
    table: RwLock<HashMap<CanonicalCode, Vec<BigUint>>>,
}

impl MatchingCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.table.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn matching_polynomial(&self, h: &Hypergraph) -> MatchingPolynomial {
        let mut local = HashMap::new();
        let counts = self.counts(h.rank(), h.edges(), &mut local);
        MatchingPolynomial {
            n: h.order(),
            r: h.rank(),
            counts,
        }
    }

    fn counts(
        &self,
        rank: usize,
        edges: &[Vec<usize>],
        local: &mut HashMap<Vec<Vec<usize>>, Vec<BigUint>>,
    ) -> Vec<BigUint> {
        if edges.is_empty() {
            return vec![BigUint::one()];
        }
        let components = split_components(edges);
        if components.len() > 1 {
            return components
                .iter()
                .map(|c| self.counts(rank, c, local))
                .fold(vec![BigUint::one()], |acc, c| convolve(&acc, &c));
        }

        let component = compact(rank, edges);
        let key = if component.is_acyclic() {
            Key::Code(canonical_code(&component).expect("acyclic component"))
        } else {
            let mut fp = edges.to_vec();
            fp.sort();
            Key::Fingerprint(fp)
        };
        match &key {
            Key::Code(code) => {
                if let Some(hit) = self.table.read().unwrap().get(code) {
                    return hit.clone();
                }
            }
            Key::Fingerprint(fp) => {
                if let Some(hit) = local.get(fp) {
                    return hit.clone();
                }
            }
        }

        let pivot = pivot_edge(edges);
        let pivot_edge = &edges[pivot];
        let without: Vec<Vec<usize>> = edges
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != pivot)
            .map(|(_, e)| e.clone())
            .collect();
        let disjoint: Vec<Vec<usize>> = edges
            .iter()
            .filter(|e| e.iter().all(|v| !pivot_edge.contains(v)))
            .cloned()
            .collect();
        let mut result = self.counts(rank, &without, local);
        let with = self.counts(rank, &disjoint, local);
        if result.len() < with.len() + 1 {
            result.resize(with.len() + 1, BigUint::zero());
        }
        for (k, c) in with.into_iter().enumerate() {
            result[k + 1] += c;
        }

        match key {
            Key::Code(code) => {
                self.table.write().unwrap().insert(code, result.clone());
            }
            Key::Fingerprint(fp) => {
                local.insert(fp, result.clone());
            }
        }
        result
    }
}

enum Key {
    Code(CanonicalCode),
    Fingerprint(Vec<Vec<usize>>),
}

/// Computes `φ(H)` exactly.
pub fn matching_polynomial(h: &Hypergraph) -> MatchingPolynomial {
    MatchingCache::new().matching_polynomial(h)
}

/// An edge incident to a vertex of maximum degree.
fn pivot_edge(edges: &[Vec<usize>]) -> usize {
    let mut degree: HashMap<usize, usize> = HashMap::new();
    for e in edges {
        for &v in e {
            *degree.entry(v).or_default() += 1;
        }
    }
    let (&hub, _) = degree
        .iter()
        .max_by_key(|&(&v, &d)| (d, std::cmp::Reverse(v)))
        .unwrap();
    edges.iter().position(|e| e.contains(&hub)).unwrap()
}

fn split_components(edges: &[Vec<usize>]) -> Vec<Vec<Vec<usize>>> {
    let ids: HashMap<usize, usize> = edges
        .iter()
        .flatten()
        .copied()
        .unique()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut uf = UnionFind::new(ids.len());
    for e in edges {
        for w in e.windows(2) {
            uf.union(ids[&w[0]], ids[&w[1]]);
        }
    }
    let mut groups: Vec<(usize, Vec<Vec<usize>>)> = Vec::new();
    for e in edges {
        let root = uf.find(ids[&e[0]]);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(e.clone()),
            None => groups.push((root, vec![e.clone()])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

fn compact(rank: usize, edges: &[Vec<usize>]) -> Hypergraph {
    let ids: HashMap<usize, usize> = edges
        .iter()
        .flatten()
        .copied()
        .unique()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mapped = edges
        .iter()
        .map(|e| {
            let mut out: Vec<usize> = e.iter().map(|v| ids[v]).collect();
            out.sort_unstable();
            out
        })
        .collect();
    Hypergraph::from_parts_unchecked(rank, ids.len(), mapped)
}

fn convolve(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `φ(G ∪ H) = φ(G) φ(H)`, computed on the counts.
pub fn poly_union(a: &MatchingPolynomial, b: &MatchingPolynomial) -> Result<MatchingPolynomial> {
    if a.r != b.r {
        return Err(Error::RankMismatch(a.r, b.r));
    }
    Ok(MatchingPolynomial {
        n: a.n + b.n,
        r: a.r,
        counts: convolve(&a.counts, &b.counts),
    })
}

/// Residual of `φ(G) = φ(G \ e) - φ(G - V(e))`; zero when the identity holds.
pub fn edge_recurrence_residual(h: &Hypergraph, e: usize) -> Result<IntPoly> {
    let lhs = matching_polynomial(h).to_poly();
    let without = matching_polynomial(&h.delete_edge(e)?).to_poly();
    let removed = matching_polynomial(&h.delete_vertices(h.edge(e)?)?).to_poly();
    Ok(lhs - (without - removed))
}

/// Residual of `φ(H) = x φ(H - u) - Σ_{e ∋ u} φ(H - V(e))`.
pub fn vertex_deletion_expand(h: &Hypergraph, u: usize) -> Result<IntPoly> {
    let lhs = matching_polynomial(h).to_poly();
    let mut rhs = matching_polynomial(&h.delete_vertices(&[u])?)
        .to_poly()
        .shift(1);
    for e in h.incident_edges(u)? {
        let rest = h.delete_vertices(h.edge(e)?)?;
        rhs = rhs - matching_polynomial(&rest).to_poly();
    }
    Ok(lhs - rhs)
}

/// Residual of `Σ_u φ(H - u) = dφ(H)/dx`.
pub fn derivative_identity_check(h: &Hypergraph) -> Result<IntPoly> {
    let cache = MatchingCache::new();
    let mut sum = IntPoly::zero();
    for u in 0..h.order() {
        sum = sum
            + cache
                .matching_polynomial(&h.delete_vertices(&[u])?)
                .to_poly();
    }
    Ok(sum - cache.matching_polynomial(h).to_poly().derivative())
}

/// Matching polynomial of the r-th power of an ordinary forest from the
/// forest's own polynomial: the counts carry over unchanged and every edge
/// gains `r - 2` vertices.
pub fn power_transform(phi: &MatchingPolynomial, r: usize) -> Result<MatchingPolynomial> {
    if phi.r != 2 {
        return Err(Error::RankNotTwo(phi.r));
    }
    if r < 3 {
        return Err(Error::RankTooSmall(r));
    }
    Ok(MatchingPolynomial {
        n: phi.n + phi.edge_count() * (r - 2),
        r,
        counts: phi.counts.clone(),
    })
}

/// ν(H).
pub fn matching_number(h: &Hypergraph) -> usize {
    matching_polynomial(h).matching_number()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn loose_path(m: usize, r: usize) -> Hypergraph {
        Hypergraph::empty(r, 1)
            .unwrap()
            .attach_pendent_path(0, m)
            .unwrap()
            .0
    }

    fn star(m: usize, r: usize) -> Hypergraph {
        let mut h = Hypergraph::empty(r, 1).unwrap();
        for _ in 0..m {
            h = h.attach_pendent_path(0, 1).unwrap().0;
        }
        h
    }

    #[test]
    fn single_edge() {
        let phi = matching_polynomial(&loose_path(1, 3));
        assert_eq!(phi.to_string(), "x^3 - 1");
        assert_eq!(phi.reduced().to_string(), "x - 1");
    }

    #[test]
    fn two_edge_path() {
        let phi = matching_polynomial(&loose_path(2, 3));
        assert_eq!(phi.to_string(), "x^5 - 2x^2");
        assert_eq!(phi.counts(), big(&[1, 2]).as_slice());
    }

    #[test]
    fn star_reduced_form() {
        for m in 1..6 {
            let phi = matching_polynomial(&star(m, 4));
            assert_eq!(phi.counts(), big(&[1, m as u64]).as_slice());
            assert_eq!(
                count_matchings_bruteforce(&star(m, 4), 2).unwrap(),
                BigUint::zero()
            );
        }
    }

    #[test]
    fn brute_force_examples() {
        let p3 = loose_path(3, 3);
        assert_eq!(
            count_matchings_bruteforce(&p3, 2).unwrap(),
            BigUint::from(1u32)
        );
        assert_eq!(count_matchings_bruteforce(&p3, 0).unwrap(), BigUint::one());
        let big_star = star(21, 3);
        assert_eq!(
            count_matchings_bruteforce(&big_star, 1),
            Err(Error::TooLarge(21))
        );
    }

    #[test]
    fn isolated_vertices_and_empty() {
        let n4 = Hypergraph::empty(3, 4).unwrap();
        assert_eq!(matching_polynomial(&n4).to_string(), "x^4");
        let n0 = Hypergraph::empty(3, 0).unwrap();
        assert_eq!(matching_polynomial(&n0).to_string(), "1");
        assert_eq!(matching_number(&n4), 0);
    }

    #[test]
    fn union_examples() {
        let e = matching_polynomial(&loose_path(1, 3));
        let sq = poly_union(&e, &e).unwrap();
        assert_eq!(sq.counts(), big(&[1, 2, 1]).as_slice());
        assert_eq!(sq.to_string(), "x^6 - 2x^3 + 1");

        let shifted = poly_union(&e, &MatchingPolynomial::isolated(2, 3)).unwrap();
        assert_eq!(shifted.counts(), e.counts());
        assert_eq!(shifted.order(), 5);

        let p2 = matching_polynomial(&loose_path(2, 3));
        let u = poly_union(&p2, &e).unwrap();
        let direct = loose_path(2, 3).disjoint_union(&loose_path(1, 3)).unwrap();
        let brute: Vec<BigUint> = (0..3)
            .map(|k| count_matchings_bruteforce(&direct, k).unwrap())
            .collect();
        assert_eq!(u.counts(), brute.as_slice());
        assert_eq!(u.counts(), big(&[1, 3, 2]).as_slice());

        let other = matching_polynomial(&loose_path(1, 4));
        assert_eq!(poly_union(&e, &other), Err(Error::RankMismatch(3, 4)));
    }

    #[test]
    fn vertex_expansion_examples() {
        let n3 = Hypergraph::empty(3, 3).unwrap();
        assert!(vertex_deletion_expand(&n3, 1).unwrap().is_zero());
        assert!(vertex_deletion_expand(&star(3, 3), 0).unwrap().is_zero());
        // v_2 of P_3^3 is the shared vertex of e_1 and e_2
        assert!(vertex_deletion_expand(&loose_path(3, 3), 2)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn derivative_examples() {
        let n5 = Hypergraph::empty(3, 5).unwrap();
        assert!(derivative_identity_check(&n5).unwrap().is_zero());
        assert!(derivative_identity_check(&loose_path(1, 4))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn power_transform_examples() {
        let p2_graph = Hypergraph::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let phi = matching_polynomial(&p2_graph);
        assert_eq!(phi.to_string(), "x^3 - 2x");
        assert_eq!(power_transform(&phi, 3).unwrap().to_string(), "x^5 - 2x^2");

        let s4 = star(4, 2);
        let t = power_transform(&matching_polynomial(&s4), 3).unwrap();
        assert_eq!((t.order(), t.counts()), (9, big(&[1, 4]).as_slice()));

        let e = matching_polynomial(&loose_path(1, 2));
        assert_eq!(power_transform(&e, 4).unwrap().to_string(), "x^4 - 1");
        assert_eq!(power_transform(&t, 4), Err(Error::RankNotTwo(3)));
        assert_eq!(power_transform(&e, 2), Err(Error::RankTooSmall(2)));
    }

    #[test]
    fn closed_form_exponent_agrees_for_trees() {
        // x^((n-2)(r-2)/2) φ(T, x^(r/2)): the exponent of the k-th term must
        // be n' - k r with n' = n + (n - 1)(r - 2).
        for n in 2..9usize {
            for r in 3..6usize {
                let n_power = n + (n - 1) * (r - 2);
                for k in 0..=n / 2 {
                    let twice = (n - 2) * (r - 2) + (n - 2 * k) * r;
                    assert_eq!(twice, 2 * (n_power - k * r));
                }
            }
        }
    }

    #[test]
    fn cyclic_hypergraph_counts_match_brute_force() {
        let h = Hypergraph::new(
            3,
            9,
            vec![
                vec![0, 1, 3],
                vec![1, 2, 4],
                vec![0, 2, 5],
                vec![3, 6, 7],
                vec![4, 7, 8],
            ],
        )
        .unwrap();
        let phi = matching_polynomial(&h);
        for k in 0..4 {
            assert_eq!(phi.count(k), count_matchings_bruteforce(&h, k).unwrap());
        }
    }

    #[test]
    fn matching_number_of_paths() {
        for m in 1..=8 {
            let p = loose_path(m, 3);
            assert_eq!(matching_number(&p), m.div_ceil(2));
            assert_eq!(
                matching_number(&p),
                max_matching_branch_and_bound(p.edges())
            );
        }
        assert_eq!(matching_number(&star(5, 3)), 1);
    }

    /// Greedy lower bound plus exhaustive branch and bound.
    fn max_matching_branch_and_bound(edges: &[Vec<usize>]) -> usize {
        fn greedy(edges: &[Vec<usize>]) -> usize {
            let mut used: Vec<usize> = Vec::new();
            let mut k = 0;
            for e in edges {
                if e.iter().all(|v| !used.contains(v)) {
                    used.extend(e);
                    k += 1;
                }
            }
            k
        }
        fn go(
            edges: &[Vec<usize>],
            idx: usize,
            used: &mut Vec<usize>,
            cur: usize,
            best: &mut usize,
        ) {
            if cur + (edges.len() - idx) <= *best {
                return;
            }
            if idx == edges.len() {
                *best = cur;
                return;
            }
            let e = &edges[idx];
            if e.iter().all(|v| !used.contains(v)) {
                let before = used.len();
                used.extend(e);
                go(edges, idx + 1, used, cur + 1, best);
                used.truncate(before);
            }
            go(edges, idx + 1, used, cur, best);
        }
        let mut best = greedy(edges);
        go(edges, 0, &mut Vec::new(), 0, &mut best);
        best
    }

    #[test]
    fn json_round_trip() {
        let phi = matching_polynomial(&loose_path(4, 3));
        let text = serde_json::to_string(&phi).unwrap();
        assert_eq!(text, r#"{"n":9,"r":3,"counts":[1,4,3]}"#);
        let back: MatchingPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(back, phi);
        assert!(
            serde_json::from_str::<MatchingPolynomial>(r#"{"n":3,"r":3,"counts":[2]}"#).is_err()
        );
    }
}
