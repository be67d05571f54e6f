//! Spectral radius of the adjacency tensor, by two independent routes.
//!
//! * [`rho_from_matching_poly`]: ρ^r is the largest root of the reduced
//!   matching polynomial of a supertree, isolated exactly.
//! * [`rho_power_iteration`]: shifted power iteration on the tensor itself,
//!   bracketed by Collatz-Wielandt bounds.
//!
//! Both are generic over the float type of the result.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{power, Hypergraph};
use crate::matching::{matching_polynomial, MatchingPolynomial};
use crate::roots::{largest_real_root, rational};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 1_000_000;
/// Diagonal shift used by the power iteration.
pub const SHIFT: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    MatchingRoot,
    PowerIteration,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::MatchingRoot => "MatchingRoot",
            Method::PowerIteration => "PowerIteration",
        })
    }
}

/// A spectral radius estimate. `rho` lies within `error_bound` of the true
/// value; the eigenvector (power iteration only) is normalised so that
/// `Σ x_i^r = 1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralEstimate<F> {
    pub rho: F,
    pub method: Method,
    pub error_bound: F,
    #[serde(skip)]
    pub eigenvector: Option<Vec<F>>,
    pub iterations: usize,
}

fn cast<F: Float>(v: f64) -> F {
    F::from(v).expect("f64 value representable in F")
}

/// ρ from the largest real root of the reduced matching polynomial.
/// Valid for superforests; the caller is responsible for acyclicity.
pub fn rho_from_matching_poly<F: Float>(phi: &MatchingPolynomial) -> Result<SpectralEstimate<F>> {
    if phi.matching_number() == 0 {
        return Err(Error::NoPositiveRoot);
    }
    let m = phi.edge_count() as i64;
    let mut root =
        largest_real_root(&phi.reduced(), Some(rational(m + 1))).ok_or(Error::NoPositiveRoot)?;
    if root.upper() <= &rational(0) {
        return Err(Error::NoPositiveRoot);
    }
    let width = BigRational::new(BigInt::one(), BigInt::from(1u64 << 52));
    root.refine_to(&width);
    let steps = root_steps(&root);
    let (lo, hi) = root.bounds_f64();
    let inv_r = 1.0 / phi.rank() as f64;
    let rho = root.midpoint_f64().powf(inv_r);
    let spread = hi.max(0.0).powf(inv_r) - lo.max(0.0).powf(inv_r);
    let error_bound = spread.max(4.0 * f64::EPSILON * rho);
    Ok(SpectralEstimate {
        rho: cast(rho),
        method: Method::MatchingRoot,
        error_bound: cast::<F>(error_bound).max(F::epsilon() * cast(4.0 * rho)),
        eigenvector: None,
        iterations: steps,
    })
}

fn root_steps(root: &crate::roots::IsolatedRoot) -> usize {
    // log2 of (initial span / final width) is not tracked; report the final
    // precision in bits instead.
    let w = root.width();
    if w == BigRational::from_integer(BigInt::from(0)) {
        0
    } else {
        (-(w.to_f64().unwrap_or(1.0)).log2()).ceil().max(0.0) as usize
    }
}

/// ρ of a superforest via its matching polynomial.
pub fn rho_matching<F: Float>(h: &Hypergraph) -> Result<SpectralEstimate<F>> {
    if !h.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    if h.size() == 0 {
        return Err(Error::NoEdges);
    }
    rho_from_matching_poly(&matching_polynomial(h))
}

/// `(A x^{r-1})_i = Σ_{e ∋ i} Π_{j ∈ e, j ≠ i} x_j`.
pub fn tensor_apply<F: Float>(h: &Hypergraph, x: &[F]) -> Vec<F> {
    let mut out = vec![F::zero(); h.order()];
    for e in h.edges() {
        for &i in e {
            let prod = e
                .iter()
                .filter(|&&j| j != i)
                .fold(F::one(), |acc, &j| acc * x[j]);
            out[i] = out[i] + prod;
        }
    }
    out
}

/// Shifted power iteration with the default iteration cap.
pub fn rho_power_iteration<F: Float>(h: &Hypergraph, tol: F) -> Result<SpectralEstimate<F>> {
    rho_power_iteration_capped(h, tol, MAX_ITERATIONS)
}

/// Iterates `x <- normalise((A x^{r-1} + σ x^{[r-1]})^{[1/(r-1)]})` until the
/// Collatz-Wielandt bounds on the shifted tensor are within `tol`.
pub fn rho_power_iteration_capped<F: Float>(
    h: &Hypergraph,
    tol: F,
    max_iterations: usize,
) -> Result<SpectralEstimate<F>> {
    if h.size() == 0 {
        return Err(Error::NoEdges);
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = h.order();
    let r = h.rank();
    let sigma: F = cast(SHIFT);
    let r_minus_1 = F::from(r - 1).unwrap();
    let inv = F::one() / r_minus_1;
    let mut x = vec![F::one(); n];
    normalise(&mut x, r);

    for iteration in 1..=max_iterations {
        let ax = tensor_apply(h, &x);
        let mut lo = F::infinity();
        let mut hi = F::neg_infinity();
        let mut next = Vec::with_capacity(n);
        for i in 0..n {
            let xr = x[i].powi(r as i32 - 1);
            let y = ax[i] + sigma * xr;
            let q = y / xr;
            lo = lo.min(q);
            hi = hi.max(q);
            next.push(y.powf(inv));
        }
        if hi - lo < tol {
            let half = (hi - lo) / cast(2.0);
            let rho = (lo + hi) / cast(2.0) - sigma;
            return Ok(SpectralEstimate {
                rho,
                method: Method::PowerIteration,
                error_bound: half.max(F::epsilon() * cast(16.0) * rho.max(F::one())),
                eigenvector: Some(x),
                iterations: iteration,
            });
        }
        normalise(&mut next, r);
        x = next;
    }
    Err(Error::NotConverged(max_iterations))
}

fn normalise<F: Float>(x: &mut [F], r: usize) {
    let total = x.iter().fold(F::zero(), |acc, &v| acc + v.powi(r as i32));
    let scale = total.powf(F::one() / F::from(r).unwrap());
    for v in x.iter_mut() {
        *v = *v / scale;
    }
}

/// `max_i |(A x)_i - ρ x_i^{r-1}|`.
pub fn eigen_residual<F: Float>(h: &Hypergraph, rho: F, x: &[F]) -> F {
    let ax = tensor_apply(h, x);
    ax.iter()
        .zip(x)
        .map(|(&a, &xi)| (a - rho * xi.powi(h.rank() as i32 - 1)).abs())
        .fold(F::zero(), F::max)
}

/// One rank checked by [`verify_power_relation`].
#[derive(Clone, Debug, Serialize)]
pub struct PowerRelationCheck {
    pub r: usize,
    pub rho_power: f64,
    pub expected: f64,
    pub gap: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PowerRelationReport {
    pub rho_tree: f64,
    pub checks: Vec<PowerRelationCheck>,
}

impl PowerRelationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn max_gap(&self) -> f64 {
        self.checks.iter().map(|c| c.gap).fold(0.0, f64::max)
    }
}

/// Checks `ρ(T^r) = ρ(T)^{2/r}` for `r ∈ {3, 4}`: `ρ(T)` from the matching
/// polynomial of the ordinary tree, `ρ(T^r)` from power iteration on the
/// r-uniform power.
pub fn verify_power_relation(tree: &Hypergraph) -> Result<PowerRelationReport> {
    if tree.rank() != 2 {
        return Err(Error::RankNotTwo(tree.rank()));
    }
    if !tree.is_supertree() {
        return Err(Error::PreconditionViolated(
            "input must be a connected tree".into(),
        ));
    }
    let base = rho_matching::<f64>(tree)?;
    let mut checks = Vec::new();
    for r in [3usize, 4] {
        let lifted = power(tree, r)?;
        let est = rho_power_iteration::<f64>(&lifted, 1e-12)?;
        let expo = 2.0 / r as f64;
        let expected = base.rho.powf(expo);
        let propagated = expo * base.rho.powf(expo - 1.0) * base.error_bound;
        let bound = est.error_bound + propagated + 64.0 * f64::EPSILON * expected;
        let gap = (est.rho - expected).abs();
        checks.push(PowerRelationCheck {
            r,
            rho_power: est.rho,
            expected,
            gap,
            bound,
            pass: gap <= bound,
        });
    }
    Ok(PowerRelationReport {
        rho_tree: base.rho,
        checks,
    })
}
