//! End-to-end acceptance run: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use supertree::enumerate::{budget_from_env, enumerate_supertrees_with_budget};
use supertree::families::{d_family, loose_path};
use supertree::matching::count_matchings_bruteforce;
use supertree::verify::{
    random_edge_moving_batch, random_edge_release_batch, random_grafting_batch,
    verify_closed_forms, verify_identities, verify_minima, verify_power_relations,
    verify_ranking_diameter, Grafting,
};
use supertree::{canonical_code, compare, matching_polynomial, Relation, Result};

const SEED: u64 = 20240601;

fn closed_forms() -> Result<(bool, String)> {
    let mut checks = Vec::new();
    for r in [3, 4, 5] {
        checks.extend(verify_closed_forms(r, 10, 1e-9)?);
    }
    let bad: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| &c.name).collect();
    Ok((
        bad.is_empty(),
        format!(
            "{} radii by both methods, {} off: {bad:?}",
            2 * checks.len(),
            bad.len()
        ),
    ))
}

fn power_relation() -> Result<(bool, String)> {
    let c = verify_power_relations(7, 1e-8, budget_from_env().max(7))?;
    Ok((c.pass, c.detail))
}

fn recurrence_vs_brute_force() -> Result<(bool, String)> {
    let (mut trees, mut mismatches) = (0, 0);
    for r in [2, 3, 4] {
        for m in 0..=6 {
            for h in enumerate_supertrees_with_budget(m, r, 7)? {
                trees += 1;
                let phi = matching_polynomial(&h);
                for k in 0..=m {
                    if phi.count(k) != count_matchings_bruteforce(&h, k)? {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    Ok((
        mismatches == 0,
        format!("{trees} supertrees, {mismatches} mismatched counts"),
    ))
}

fn second_minimum() -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut pass = true;
    for (m, r) in [(4, 3), (5, 3), (6, 3), (4, 4)] {
        let rep = verify_minima(m, r)?;
        let d = d_family(m, r)?.graph;
        let skip = [
            canonical_code(&loose_path(m, r)?.graph)?,
            canonical_code(&d)?,
        ];
        let mut not_strict = 0;
        for h in enumerate_supertrees_with_budget(m, r, 7)? {
            if !skip.contains(&canonical_code(&h)?)
                && compare(&d, &h)?.relation != Relation::StrictlyLess
            {
                not_strict += 1;
            }
        }
        let ok = rep.pass && not_strict == 0 && rep.entries.len() >= 2;
        pass &= ok;
        let gap = rep.entries[1].rho - rep.entries[0].rho;
        notes.push(format!(
            "({m},{r}) {} trees, gap {gap:.2e}{}",
            rep.entries.len(),
            if ok { "" } else { " FAILED" }
        ));
    }
    Ok((pass, notes.join("; ")))
}

fn diameter_rankings() -> Result<(bool, String)> {
    let mut notes = Vec::new();
    let mut pass = true;
    for (m, d, r) in [(6, 3, 3), (7, 3, 3), (7, 4, 3), (6, 4, 3)] {
        let rep = verify_ranking_diameter(m, d, r)?;
        pass &= rep.pass;
        let failed: Vec<_> = rep.failures().iter().map(|c| c.name.clone()).collect();
        notes.push(format!(
            "({m},{d},{r}) top {} of {}{}",
            rep.expected.len(),
            rep.entries.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!(" failed {failed:?}")
            }
        ));
    }
    Ok((pass, notes.join("; ")))
}

fn transformations() -> Result<(bool, String)> {
    let reports = [
        random_grafting_batch(Grafting::OneVertex, 200, SEED)?,
        random_grafting_batch(Grafting::Adjacent, 200, SEED + 1)?,
        random_grafting_batch(Grafting::DistanceS, 200, SEED + 2)?,
        random_edge_release_batch(200, SEED + 3)?,
        random_edge_moving_batch(200, SEED + 4)?,
    ];
    let pass = reports.iter().all(|r| r.pass());
    let notes: Vec<String> = reports
        .iter()
        .map(|r| format!("{}: {}/{} violations", r.name, r.violations, r.instances))
        .collect();
    Ok((pass, notes.join("; ")))
}

fn identities() -> Result<(bool, String)> {
    let budget = budget_from_env();
    let mut trees = Vec::new();
    for r in [2, 3, 4] {
        for m in 0..=budget.min(7) {
            trees.extend(enumerate_supertrees_with_budget(m, r, budget)?);
        }
    }
    let rep = verify_identities(&trees)?;
    Ok((
        rep.pass(),
        format!(
            "{} supertrees (m <= {}, r in 2..=4), {} derivative and {} vertex-expansion residuals, {} nonzero",
            rep.supertrees,
            budget.min(7),
            rep.derivative_checks,
            rep.vertex_expansions,
            rep.nonzero_residuals
        ),
    ))
}

type Criterion = fn() -> Result<(bool, String)>;

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 7] = [
        ("closed-form extremes", closed_forms),
        ("power relation", power_relation),
        ("recurrence vs brute force", recurrence_vs_brute_force),
        ("second minimum", second_minimum),
        ("diameter rankings", diameter_rankings),
        ("transformation suite", transformations),
        ("identity suite", identities),
    ];
    let mut all = true;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (pass, detail) = run().unwrap_or_else(|e| (false, format!("error: {e}")));
        all &= pass;
        println!(
            "criterion {} {name}: {} ({:.1}s) {detail}",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
