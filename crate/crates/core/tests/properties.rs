use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use supertree::families::{hyperstar, loose_path, t_md_i, t_mdr_edge_i};
use supertree::matching::poly_union;
use supertree::ordering::compare;
use supertree::verify::{path_attachment_checks, random_supertree, rho};
use supertree::{canonical_code, matching_polynomial, Hypergraph, Relation};

fn tree(seed: u64, m: usize, r: usize) -> Hypergraph {
    random_supertree(&mut ChaCha8Rng::seed_from_u64(seed), m, r)
}

fn forest(parts: &[Hypergraph]) -> Hypergraph {
    parts
        .iter()
        .skip(1)
        .fold(parts[0].clone(), |acc, h| acc.disjoint_union(h).unwrap())
}

fn path(m: usize, r: usize) -> Hypergraph {
    loose_path(m, r).unwrap().graph
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn code_survives_relabeling(seed in any::<u64>(), m in 0usize..7, r in 2usize..5, rot in 0usize..7) {
        let h = tree(seed, m, r);
        let mut perm: Vec<usize> = (0..h.order()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed ^ 0x5eed));
        let g = h.relabeled(&perm, rot).unwrap();
        prop_assert_eq!(canonical_code(&g).unwrap(), canonical_code(&h).unwrap());
    }

    #[test]
    fn union_is_multiplicative(a in any::<u64>(), b in any::<u64>(), m1 in 0usize..6, m2 in 0usize..6, r in 2usize..5) {
        let (g, h) = (tree(a, m1, r), tree(b, m2, r));
        let joined = matching_polynomial(&g.disjoint_union(&h).unwrap());
        let product = poly_union(&matching_polynomial(&g), &matching_polynomial(&h)).unwrap();
        prop_assert_eq!(joined, product);
    }

    #[test]
    fn compare_is_antisymmetric(a in any::<u64>(), b in any::<u64>(), m in 1usize..7, r in 2usize..5) {
        let (g, h) = (tree(a, m, r), tree(b, m, r));
        let ab = compare(&g, &h).unwrap().relation;
        let ba = compare(&h, &g).unwrap().relation;
        prop_assert_eq!(ba, ab.flip());
        prop_assert_eq!(ab == Relation::Equal, matching_polynomial(&g) == matching_polynomial(&h));
    }

    #[test]
    fn padding_keeps_strict_order(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(),
                                 m in 2usize..6, k in 0usize..4, r in 2usize..4) {
        let (g, h) = (tree(a, m, r), tree(b, m, r));
        let pad = forest(&[tree(c, k, r), tree(c.wrapping_add(1), 1, r)]);
        let before = compare(&g, &h).unwrap().relation;
        prop_assume!(before.is_strict());
        prop_assume!(rho(&pad).unwrap() < rho(&g).unwrap().min(rho(&h).unwrap()));
        let after = compare(&g.disjoint_union(&pad).unwrap(), &h.disjoint_union(&pad).unwrap()).unwrap().relation;
        prop_assert_eq!(after, before);
    }

    #[test]
    fn padding_keeps_weak_order(a in any::<u64>(), b in any::<u64>(), c in any::<u64>(),
                               m in 2usize..6, k in 0usize..5, r in 2usize..4) {
        let (g, h) = (tree(a, m, r), tree(b, m, r));
        let pad = tree(c, k, r);
        let before = compare(&g, &h).unwrap().relation;
        let after = compare(&g.disjoint_union(&pad).unwrap(), &h.disjoint_union(&pad).unwrap()).unwrap().relation;
        let weak = |rel: Relation| match rel {
            Relation::StrictlyLess => Relation::LessOrEqual,
            Relation::StrictlyGreater => Relation::GreaterOrEqual,
            other => other,
        };
        prop_assert_eq!(weak(after), weak(before));
    }

    #[test]
    fn deleting_an_edge_moves_down(seed in any::<u64>(), m in 1usize..7, r in 2usize..5, pick in any::<prop::sample::Index>()) {
        let h = tree(seed, m, r);
        let e = pick.index(h.size());
        prop_assert_eq!(compare(&h.delete_edge(e).unwrap(), &h).unwrap().relation, Relation::StrictlyLess);
    }
}

#[test]
fn path_splitting_is_consistent() {
    for r in [2, 3, 4] {
        for total in 2..=10 {
            for a in 0..=total / 2 {
                for c in a + 1..=total / 2 {
                    let (b, d) = (total - a, total - c);
                    let unbalanced = forest(&[path(a, r), path(b, r)]);
                    let balanced = forest(&[path(c, r), path(d, r)]);
                    let v = compare(&balanced, &unbalanced).unwrap();
                    assert_eq!(
                        v.relation,
                        Relation::StrictlyLess,
                        "r={r} P{c}+P{d} vs P{a}+P{b}: {}",
                        v.difference
                    );
                }
            }
        }
    }
}

#[test]
fn a_larger_pad_hides_strictness() {
    let (low, high) = (path(3, 3), hyperstar(3, 3).unwrap().graph);
    assert_eq!(
        compare(&low, &high).unwrap().relation,
        Relation::StrictlyLess
    );
    let pad = hyperstar(5, 3).unwrap().graph;
    let v = compare(
        &low.disjoint_union(&pad).unwrap(),
        &high.disjoint_union(&pad).unwrap(),
    )
    .unwrap();
    assert_eq!(v.relation, Relation::LessOrEqual);
}

#[test]
fn small_split_difference_is_x() {
    let balanced = forest(&[path(2, 3), path(2, 3)]);
    let unbalanced = forest(&[path(1, 3), path(3, 3)]);
    let v = compare(&balanced, &unbalanced).unwrap();
    assert_eq!(v.relation, Relation::StrictlyLess);
    assert_eq!(v.difference.to_string(), "x");
}

#[test]
fn attachment_orders_along_a_path() {
    for r in [3, 4] {
        let bases = [
            (hyperstar(1, r).unwrap().graph, 0),
            (hyperstar(2, r).unwrap().graph, 0),
            (path(2, r), 0),
            (path(2, r), 1),
        ];
        for d in 2..=6 {
            for (t, u) in &bases {
                for c in path_attachment_checks(d, r, t, *u).unwrap() {
                    assert!(c.pass, "d={d} r={r} {}: {}", c.name, c.detail);
                }
            }
        }
    }
}

#[test]
fn mirror_images_are_isomorphic() {
    for r in 2..=4 {
        for m in 2..=8 {
            for d in 2..=6.min(m) {
                for i in 2..=d {
                    if let (Ok(a), Ok(b)) = (t_md_i(m, d, r, i), t_md_i(m, d, r, d + 2 - i)) {
                        assert_eq!(
                            canonical_code(&a.graph).unwrap(),
                            canonical_code(&b.graph).unwrap(),
                            "vertex m={m} d={d} r={r} i={i}"
                        );
                    }
                    if let (Ok(a), Ok(b)) =
                        (t_mdr_edge_i(m, d, r, i), t_mdr_edge_i(m, d, r, d + 1 - i))
                    {
                        assert_eq!(
                            canonical_code(&a.graph).unwrap(),
                            canonical_code(&b.graph).unwrap(),
                            "edge m={m} d={d} r={r} i={i}"
                        );
                    }
                }
            }
        }
    }
}
