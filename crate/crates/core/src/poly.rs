//! Dense univariate polynomials over any `num_traits` ring, plus the exact
//! real-root machinery (Sturm chains, square-free and odd-multiplicity parts)
//! needed to certify polynomial signs on a half-line.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Num, One, Signed, Zero};

/// Coefficients are stored lowest degree first with no trailing zeros, so the
/// zero polynomial has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Clone + Num> Poly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: T, k: usize) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len().saturating_sub(1));
        let mut k = T::zero();
        for c in &self.coeffs {
            if !k.is_zero() {
                out.push(c.clone() * k.clone());
            }
            k = k + T::one();
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    pub fn map<U: Clone + Num>(&self, f: impl Fn(&T) -> U) -> Poly<U> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    /// Euclidean division; `T` must be a field (exact division of coefficients).
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let d = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.coeffs[d].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![T::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d].clone() / lead.clone();
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => {
                let lc = lc.clone();
                Poly::new(self.coeffs.iter().map(|c| c.clone() / lc.clone()).collect())
            }
            None => self.clone(),
        }
    }

    /// Monic greatest common divisor over a field.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors (monic).
    pub fn square_free(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun's square-free factorisation: `result[i]` collects the factors of
    /// multiplicity `i + 1` (monic, possibly constant 1).
    pub fn yun(&self) -> Vec<Self> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let df = self.derivative();
        let a0 = self.gcd(&df);
        let mut b = self.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c - b.derivative();
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c - b.derivative();
            out.push(a);
        }
        out
    }

    /// Product of the factors that occur with odd multiplicity. These are
    /// exactly the real points where the polynomial can change sign.
    pub fn odd_multiplicity_part(&self) -> Self {
        self.yun()
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .fold(Poly::constant(T::one()), |acc, (_, f)| acc * f)
    }
}

impl<T: Clone + Num + Signed + PartialOrd> Poly<T> {
    /// Sign of the polynomial at `x` (-1, 0 or 1).
    pub fn sign_at(&self, x: &T) -> i8 {
        sign(&self.eval(x))
    }

    /// Sign as `x -> +inf`.
    pub fn sign_at_infinity(&self) -> i8 {
        self.leading().map_or(0, sign)
    }
}

fn sign<T: Signed>(v: &T) -> i8 {
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of a polynomial over an ordered field, used for exact counts of
/// distinct real roots.
#[derive(Clone, Debug)]
pub struct SturmChain<T> {
    chain: Vec<Poly<T>>,
}

impl<T: Clone + Num + Signed + PartialOrd> SturmChain<T> {
    /// The polynomial is reduced to its square-free part first, so counts are
    /// of distinct roots and hold for half-open intervals `(a, b]`.
    pub fn new(p: &Poly<T>) -> Self {
        let p0 = p.square_free();
        let mut chain = vec![p0.clone()];
        if p0.degree().unwrap_or(0) > 0 {
            let mut prev = p0.clone();
            let mut cur = p0.derivative();
            while !cur.is_zero() {
                chain.push(cur.clone());
                let (_, r) = prev.div_rem(&cur);
                prev = cur;
                cur = -r;
            }
        }
        SturmChain { chain }
    }

    pub fn polynomial(&self) -> &Poly<T> {
        &self.chain[0]
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut count = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn variations_at(&self, x: &T) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    fn variations_at_infinity(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at_infinity()))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_between(&self, a: &T, b: &T) -> usize {
        if a >= b || self.chain[0].degree().unwrap_or(0) == 0 {
            return 0;
        }
        self.variations_at(a) - self.variations_at(b)
    }

    /// Number of distinct real roots in `(a, +inf)`.
    pub fn count_above(&self, a: &T) -> usize {
        if self.chain[0].degree().unwrap_or(0) == 0 {
            return 0;
        }
        self.variations_at(a) - self.variations_at_infinity()
    }
}

impl<T: Clone + Num> Add for Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: Poly<T>) -> Poly<T> {
        &self + &rhs
    }
}

impl<T: Clone + Num> Add for &Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl<T: Clone + Num> Sub for Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: Poly<T>) -> Poly<T> {
        &self - &rhs
    }
}

impl<T: Clone + Num> Sub for &Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &Poly<T>) -> Poly<T> {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..len).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl<T: Clone + Num> Mul for Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: Poly<T>) -> Poly<T> {
        &self * &rhs
    }
}

impl<T: Clone + Num> Mul for &Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

impl<T: Clone + Num + Neg<Output = T>> Neg for Poly<T> {
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<T: Clone + Num> One for Poly<T> {
    fn one() -> Self {
        Poly::constant(T::one())
    }
}

impl<T: Clone + Num> Zero for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Prints in the `x^5 - 2x^2` style, highest degree first.
impl<T: Clone + Num + Signed + fmt::Display> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => f.write_str("x")?,
                1 => write!(f, "{mag}x")?,
                _ if unit => write!(f, "x^{k}")?,
                _ => write!(f, "{mag}x^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rp(cs: &[i64]) -> Poly<BigRational> {
        Poly::new(
            cs.iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        )
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn arithmetic_on_machine_integers() {
        let a = Poly::new(vec![1i64, 1]);
        let b = Poly::new(vec![-1i64, 1]);
        assert_eq!(&a * &b, Poly::new(vec![-1, 0, 1]));
        assert_eq!(&a + &b, Poly::new(vec![0, 2]));
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(
            Poly::new(vec![0i64, 0, 3]).derivative(),
            Poly::new(vec![0, 6])
        );
        assert_eq!(Poly::new(vec![1i64, 2, 3]).eval(&2), 17);
        assert_eq!(Poly::new(vec![5i64]).shift(2), Poly::monomial(5, 2));
    }

    #[test]
    fn float_coefficients_work_too() {
        let p = Poly::new(vec![-2.0f64, 0.0, 1.0]);
        assert!((p.eval(&2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn display_format() {
        let p = Poly::new(vec![0i64, 0, -2, 0, 0, 1]);
        assert_eq!(p.to_string(), "x^5 - 2x^2");
        assert_eq!(Poly::new(vec![-1i64, 0, 0, 1]).to_string(), "x^3 - 1");
        assert_eq!(Poly::new(vec![3i64, -1]).to_string(), "-x + 3");
        assert_eq!(Poly::<i64>::zero().to_string(), "0");
    }

    #[test]
    fn division_and_gcd() {
        let a = rp(&[-1, 0, 1]); // (x-1)(x+1)
        let b = rp(&[-1, 1]); // x-1
        let (qt, r) = a.div_rem(&b);
        assert_eq!(qt, rp(&[1, 1]));
        assert!(r.is_zero());
        let c = rp(&[2, -3, 1]); // (x-1)(x-2)
        assert_eq!(a.gcd(&c), rp(&[-1, 1]));
    }

    #[test]
    fn yun_separates_multiplicities() {
        // (x-1)^3 (x-2)^2 (x-3)
        let f =
            rp(&[-1, 1]) * rp(&[-1, 1]) * rp(&[-1, 1]) * rp(&[-2, 1]) * rp(&[-2, 1]) * rp(&[-3, 1]);
        let parts = f.yun();
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0], rp(&[-3, 1]));
        assert_eq!(parts[1], rp(&[-2, 1]));
        assert_eq!(parts[2], rp(&[-1, 1]));
        assert_eq!(f.odd_multiplicity_part(), rp(&[-3, 1]) * rp(&[-1, 1]));
        assert_eq!(f.square_free(), rp(&[-1, 1]) * rp(&[-2, 1]) * rp(&[-3, 1]));
    }

    #[test]
    fn sturm_counts_distinct_roots() {
        // (x-1)^2 (x+2)(x-5)
        let f = rp(&[-1, 1]) * rp(&[-1, 1]) * rp(&[2, 1]) * rp(&[-5, 1]);
        let s = SturmChain::new(&f);
        assert_eq!(s.count_above(&q(-10, 1)), 3);
        assert_eq!(s.count_between(&q(0, 1), &q(1, 1)), 1);
        assert_eq!(s.count_between(&q(1, 1), &q(5, 1)), 1);
        assert_eq!(s.count_between(&q(1, 1), &q(49, 10)), 0);
        assert_eq!(s.count_above(&q(5, 1)), 0);
        assert_eq!(s.count_above(&q(9, 2)), 1);
    }
}
