//! Isomorph-free enumeration of uniform supertrees.
//!
//! Supertrees with `m` edges are grown from those with `m - 1` edges by
//! attaching one fresh pendent edge at any vertex; every supertree arises this
//! way since removing a pendent edge keeps it a supertree. Duplicates are
//! removed by canonical code and results come back sorted by code.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::canonical::{canonical_code, CanonicalCode};
use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

pub const DEFAULT_BUDGET: usize = 7;
pub const MAX_RANK: usize = 5;
pub const BUDGET_ENV: &str = "SUPERTREE_BUDGET";

/// Edge budget: `SUPERTREE_BUDGET` when set to a positive integer, otherwise 7.
pub fn budget_from_env() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_BUDGET)
}

/// All r-uniform supertrees with `m` edges up to isomorphism, sorted by code,
/// under the environment budget.
pub fn enumerate_supertrees(m: usize, r: usize) -> Result<Vec<Hypergraph>> {
    enumerate_supertrees_with_budget(m, r, budget_from_env())
}

pub fn enumerate_supertrees_with_budget(
    m: usize,
    r: usize,
    budget: usize,
) -> Result<Vec<Hypergraph>> {
    Ok(enumerate_coded(m, r, budget)?.into_values().collect())
}

/// Like [`enumerate_supertrees_with_budget`], keyed by canonical code.
pub fn enumerate_coded(
    m: usize,
    r: usize,
    budget: usize,
) -> Result<BTreeMap<CanonicalCode, Hypergraph>> {
    if r < 2 {
        return Err(Error::InvalidRank(r));
    }
    if r > MAX_RANK {
        return Err(Error::BadParams(format!(
            "rank {r} exceeds the enumeration limit {MAX_RANK}"
        )));
    }
    if m > budget {
        return Err(Error::BudgetExceeded { count: m, budget });
    }
    let seed = Hypergraph::empty(r, 1)?;
    let mut level = BTreeMap::from([(canonical_code(&seed)?, seed)]);
    for _ in 0..m {
        level = grow(&level)?;
    }
    Ok(level)
}

fn grow(
    level: &BTreeMap<CanonicalCode, Hypergraph>,
) -> Result<BTreeMap<CanonicalCode, Hypergraph>> {
    let parents: Vec<&Hypergraph> = level.values().collect();
    let children: Vec<(CanonicalCode, Hypergraph)> = parents
        .par_iter()
        .map(|h| -> Result<Vec<(CanonicalCode, Hypergraph)>> {
            let mut seen = BTreeMap::new();
            for v in 0..h.order() {
                let (child, _) = h.attach_pendent_path(v, 1)?;
                let code = canonical_code(&child)?;
                seen.entry(code).or_insert(child);
            }
            Ok(seen.into_iter().collect())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let mut next = BTreeMap::new();
    for (code, h) in children {
        next.entry(code).or_insert(h);
    }
    Ok(next)
}

/// The supertrees of [`enumerate_supertrees`] with diameter exactly `d`.
pub fn enumerate_with_diameter(m: usize, d: usize, r: usize) -> Result<Vec<Hypergraph>> {
    enumerate_with_diameter_budget(m, d, r, budget_from_env())
}

pub fn enumerate_with_diameter_budget(
    m: usize,
    d: usize,
    r: usize,
    budget: usize,
) -> Result<Vec<Hypergraph>> {
    Ok(enumerate_supertrees_with_budget(m, r, budget)?
        .into_iter()
        .filter(|h| h.diameter().ok() == Some(d))
        .collect())
}
