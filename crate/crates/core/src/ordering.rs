//! Exact comparator for the matching-polynomial quasi-order on superforests.
//!
//! `T1 ⪯ T2` when `φ(T1, x) ≥ φ(T2, x)` for every `x ≥ ρ(T1)`, and `T1 ≺ T2`
//! when in addition the difference does not vanish at `ρ(T1)`.
//!
//! All work happens in `y = x^r`. With `K` the largest index where the counts
//! differ, `φ1 - φ2 = x^(n-Kr) D(x^r)` for an integer polynomial `D`, and the
//! sign question becomes one about `D` on `[ρ(T1)^r, ∞)`. That anchor is the
//! largest root of the reduced polynomial of `T1`, kept as an exact isolating
//! interval, so every verdict is decided with rational arithmetic only.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::matching::{matching_polynomial, MatchingPolynomial};
use crate::poly::SturmChain;
use crate::roots::{largest_real_root, rational, to_rational, IsolatedRoot};
use crate::{IntPoly, RatPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    StrictlyLess,
    LessOrEqual,
    StrictlyGreater,
    GreaterOrEqual,
    Equal,
    Incomparable,
}

impl Relation {
    /// The relation seen from the other argument.
    pub fn flip(self) -> Relation {
        use Relation::*;
        match self {
            StrictlyLess => StrictlyGreater,
            StrictlyGreater => StrictlyLess,
            LessOrEqual => GreaterOrEqual,
            GreaterOrEqual => LessOrEqual,
            other => other,
        }
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Relation::StrictlyLess | Relation::StrictlyGreater)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderingVerdict {
    pub relation: Relation,
    /// `φ(T1, x) - φ(T2, x)`.
    #[serde(serialize_with = "as_display")]
    pub difference: IntPoly,
    /// `ρ(T1)`, the left end of the half-line the sign was certified on.
    pub threshold: f64,
}

fn as_display<S: Serializer>(p: &IntPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// Where the sign analysis starts: `y = ρ^r`.
enum Anchor {
    Zero,
    Root(IsolatedRoot),
}

impl Anchor {
    fn of(phi: &MatchingPolynomial) -> Anchor {
        if phi.matching_number() == 0 {
            return Anchor::Zero;
        }
        let hint = rational(phi.edge_count() as i64 + 1);
        match largest_real_root(&phi.reduced(), Some(hint)) {
            Some(root) => Anchor::Root(root),
            None => unreachable!("reduced matching polynomials of positive degree have real roots"),
        }
    }

    fn rho(&self, r: usize) -> f64 {
        match self {
            Anchor::Zero => 0.0,
            Anchor::Root(root) => {
                let mut root = root.clone();
                root.refine_to(&BigRational::new(1.into(), BigInt::from(1u64 << 52)));
                root.midpoint_f64().powf(1.0 / r as f64)
            }
        }
    }
}

/// `D(y)` with `φ1 - φ2 = x^(n-Kr) D(x^r)`, together with `n - Kr`.
fn reduced_difference(a: &MatchingPolynomial, b: &MatchingPolynomial) -> Option<(IntPoly, usize)> {
    let top = a.matching_number().max(b.matching_number());
    let k_max = (0..=top).rev().find(|&k| a.count(k) != b.count(k))?;
    let coeffs = (0..=k_max)
        .map(|j| {
            // coefficient of y^j comes from k = k_max - j
            let k = k_max - j;
            let diff = BigInt::from(a.count(k)) - BigInt::from(b.count(k));
            if k % 2 == 0 {
                diff
            } else {
                -diff
            }
        })
        .collect();
    Some((IntPoly::new(coeffs), a.order() - k_max * a.rank()))
}

/// Whether `D ≥ 0` on `[y*, ∞)`.
fn nonneg_beyond(d: &RatPoly, anchor: &Anchor) -> bool {
    if d.sign_at_infinity() <= 0 {
        return false;
    }
    let odd = d.odd_multiplicity_part();
    if odd.degree().unwrap_or(0) == 0 {
        return true;
    }
    let sturm = SturmChain::new(&odd);
    let mut root = match anchor {
        Anchor::Zero => return sturm.count_above(&BigRational::zero()) == 0,
        Anchor::Root(root) => root.clone(),
    };
    loop {
        if sturm.count_above(root.upper()) > 0 {
            return false;
        }
        if root.is_exact() {
            return true;
        }
        match sturm.count_between(root.lower(), root.upper()) {
            0 => return true,
            1 if root.is_root_of(&odd) => return true,
            _ => root.bisect(),
        }
    }
}

/// Whether the full difference vanishes at `x = ρ`.
fn vanishes_at(d: &RatPoly, shift: usize, anchor: &Anchor) -> bool {
    match anchor {
        Anchor::Zero => shift > 0 || d.sign_at(&BigRational::zero()) == 0,
        Anchor::Root(root) => root.is_root_of(d),
    }
}

/// Compares two matching polynomials of superforests with equal order and rank.
pub fn compare_polys(a: &MatchingPolynomial, b: &MatchingPolynomial) -> Result<OrderingVerdict> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch(a.rank(), b.rank()));
    }
    if a.order() != b.order() {
        return Err(Error::OrderMismatch(a.order(), b.order()));
    }
    let difference = a.to_poly() - b.to_poly();
    let anchor_a = Anchor::of(a);
    let threshold = anchor_a.rho(a.rank());
    let Some((d, shift)) = reduced_difference(a, b) else {
        return Ok(OrderingVerdict {
            relation: Relation::Equal,
            difference,
            threshold,
        });
    };
    let d = to_rational(&d);
    let neg = -d.clone();
    let anchor_b = Anchor::of(b);

    let le_ab = nonneg_beyond(&d, &anchor_a);
    let le_ba = nonneg_beyond(&neg, &anchor_b);
    let relation = if le_ab && !vanishes_at(&d, shift, &anchor_a) {
        Relation::StrictlyLess
    } else if le_ba && !vanishes_at(&neg, shift, &anchor_b) {
        Relation::StrictlyGreater
    } else if le_ab {
        Relation::LessOrEqual
    } else if le_ba {
        Relation::GreaterOrEqual
    } else {
        Relation::Incomparable
    };
    Ok(OrderingVerdict {
        relation,
        difference,
        threshold,
    })
}

/// Compares two superforests of equal order and rank.
pub fn compare(t1: &Hypergraph, t2: &Hypergraph) -> Result<OrderingVerdict> {
    if t1.rank() != t2.rank() {
        return Err(Error::RankMismatch(t1.rank(), t2.rank()));
    }
    if t1.order() != t2.order() {
        return Err(Error::OrderMismatch(t1.order(), t2.order()));
    }
    if !t1.is_acyclic() || !t2.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    compare_polys(&matching_polynomial(t1), &matching_polynomial(t2))
}

/// `ρ` as a float, read from the exact anchor. Cheap helper for reports.
pub fn rho_of(phi: &MatchingPolynomial) -> f64 {
    Anchor::of(phi).rho(phi.rank())
}

/// Coefficients of the difference as `i128` when they fit; test convenience.
pub fn difference_coeffs(v: &OrderingVerdict) -> Option<Vec<i128>> {
    v.difference.coeffs().iter().map(|c| c.to_i128()).collect()
}
