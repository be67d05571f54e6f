//! Exact isolation of the largest real root of an integer polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::SturmChain;
use crate::{IntPoly, RatPoly};

/// A real root `α` of a square-free polynomial with `lo < α ≤ hi` and no other
/// root of that polynomial in `(lo, hi]`. When `lo == hi` the root is the
/// rational number `hi` itself.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    poly: RatPoly,
    lo: BigRational,
    hi: BigRational,
}

pub(crate) fn to_rational(p: &IntPoly) -> RatPoly {
    p.map(|c| BigRational::from_integer(c.clone()))
}

pub(crate) fn rational(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Cauchy bound: every real root has absolute value below `1 + max |c_i / lc|`.
fn cauchy_bound(p: &RatPoly) -> BigRational {
    let lc = p.leading().unwrap().abs();
    let max = p
        .coeffs()
        .iter()
        .map(|c| c.abs() / lc.clone())
        .fold(BigRational::zero(), |a, b| if b > a { b } else { a });
    max + BigRational::one()
}

/// Isolates the largest real root of `p`, or `None` if `p` has no real root.
/// `hint` is an optional upper bound tried before the Cauchy bound.
pub fn largest_real_root(p: &IntPoly, hint: Option<BigRational>) -> Option<IsolatedRoot> {
    let rp = to_rational(p);
    if rp.degree().unwrap_or(0) == 0 {
        return None;
    }
    let sturm = SturmChain::new(&rp);
    let bound = cauchy_bound(&rp);
    let mut hi = match hint {
        Some(h) if sturm.count_above(&h) == 0 => h,
        _ => bound.clone(),
    };
    let mut lo = -bound;
    if sturm.count_between(&lo, &hi) == 0 {
        return None;
    }
    let two = rational(2);
    while sturm.count_between(&lo, &hi) > 1 {
        let mid = (&lo + &hi) / &two;
        if sturm.count_between(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let poly = sturm.polynomial().clone();
    if poly.sign_at(&hi) == 0 {
        lo = hi.clone();
    }
    Some(IsolatedRoot { poly, lo, hi })
}

impl IsolatedRoot {
    pub fn lower(&self) -> &BigRational {
        &self.lo
    }

    pub fn upper(&self) -> &BigRational {
        &self.hi
    }

    /// The square-free polynomial this root is isolated for.
    pub fn polynomial(&self) -> &RatPoly {
        &self.poly
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    /// Halves the isolating interval.
    pub fn bisect(&mut self) {
        if self.is_exact() {
            return;
        }
        let mid = (&self.lo + &self.hi) / rational(2);
        let s_mid = self.poly.sign_at(&mid);
        if s_mid == 0 {
            self.lo = mid.clone();
            self.hi = mid;
        } else if s_mid == self.poly.sign_at(&self.hi) {
            self.hi = mid;
        } else {
            self.lo = mid;
        }
    }

    /// Bisects until the interval is at most `width` wide.
    pub fn refine_to(&mut self, width: &BigRational) {
        while !self.is_exact() && &self.width() > width {
            self.bisect();
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / rational(2))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn bounds_f64(&self) -> (f64, f64) {
        (
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Whether `q` vanishes at this root, decided exactly through
    /// `gcd(q, poly)`, whose roots in `(lo, hi]` can only be this one.
    pub fn is_root_of(&self, q: &RatPoly) -> bool {
        if self.is_exact() {
            return q.sign_at(&self.hi) == 0;
        }
        let g = self.poly.gcd(q);
        if g.degree().unwrap_or(0) == 0 {
            return false;
        }
        SturmChain::new(&g).count_between(&self.lo, &self.hi) == 1
    }
}
