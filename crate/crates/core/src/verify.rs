//! Executable checks of the ordering results on concrete data: rankings by
//! diameter, the two smallest supertrees, grafting, edge-releasing and
//! edge-moving, plus the exact matching-polynomial identities.

use std::collections::BTreeMap;
use std::io;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::{canonical_code, CanonicalCode};
use crate::enumerate::{budget_from_env, enumerate_supertrees_with_budget};
use crate::error::{Error, Result};
use crate::families::{
    d_family, graft_adjacent, graft_distance_s, graft_one_vertex, grafting_distance, hyperstar,
    loose_path, p_grave, path_edge_attach, path_vertex_attach, t_double_prime, t_md_i,
    t_mdr_edge_i, FamilySpec,
};
use crate::hypergraph::Hypergraph;
use crate::matching::{
    derivative_identity_check, edge_recurrence_residual, matching_polynomial,
    vertex_deletion_expand,
};
use crate::ordering::{compare, Relation};
use crate::spectral::{rho_from_matching_poly, rho_power_iteration};

/// Minimum gap accepted as a strict separation between two radii.
pub const SEPARATION: f64 = 1e-10;

/// One named pass/fail check with a human-readable detail line.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// ρ of a superforest from its matching polynomial.
pub fn rho(h: &Hypergraph) -> Result<f64> {
    Ok(rho_from_matching_poly::<f64>(&matching_polynomial(h))?.rho)
}

fn code(h: &Hypergraph) -> CanonicalCode {
    canonical_code(h).expect("supertrees have codes")
}

// ---------------------------------------------------------------------------
// rankings

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RankingKind {
    /// Largest radii among supertrees of a given diameter.
    DiameterTop,
    /// Smallest radii among all supertrees with a given edge count.
    Minima,
    /// Every supertree, largest radius first, with no expectation.
    Table,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankingEntry {
    pub rank: usize,
    pub canonical_code: CanonicalCode,
    pub family_match: Option<String>,
    pub rho: f64,
    /// `|ρ_matching - ρ_power|`.
    pub method_gap: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExpectedEntry {
    pub label: String,
    pub canonical_code: CanonicalCode,
}

impl ExpectedEntry {
    pub fn from_spec(spec: &FamilySpec) -> Result<ExpectedEntry> {
        Ok(ExpectedEntry {
            label: spec.to_string(),
            canonical_code: canonical_code(&spec.build()?.graph)?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankingReport {
    pub kind: RankingKind,
    pub m: usize,
    pub d: Option<usize>,
    pub r: usize,
    pub entries: Vec<RankingEntry>,
    pub expected: Vec<ExpectedEntry>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl RankingReport {
    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialise")
    }

    /// CSV with columns `rank, canonical_code, family_match, rho, method_gap`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "rank",
            "canonical_code",
            "family_match",
            "rho",
            "method_gap",
        ])
        .map_err(csv_err)?;
        for e in &self.entries {
            w.write_record([
                e.rank.to_string(),
                e.canonical_code.to_string(),
                e.family_match.clone().unwrap_or_default(),
                format!("{:.15}", e.rho),
                format!("{:.3e}", e.method_gap),
            ])
            .map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }

    /// One line per check followed by the ranked entries.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            out.push_str(&format!("{mark} {}: {}\n", c.name, c.detail));
        }
        for e in &self.entries {
            out.push_str(&format!(
                "{:>4}  {:.12}  {:.1e}  {}  {}\n",
                e.rank,
                e.rho,
                e.method_gap,
                e.canonical_code,
                e.family_match.as_deref().unwrap_or("-")
            ));
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Ranks `trees` by ρ, descending or ascending, with both methods.
fn rank_entries(
    trees: &[Hypergraph],
    labels: &BTreeMap<CanonicalCode, String>,
    descending: bool,
) -> Result<Vec<RankingEntry>> {
    let mut entries = trees
        .par_iter()
        .map(|h| -> Result<RankingEntry> {
            let exact = rho_from_matching_poly::<f64>(&matching_polynomial(h))?;
            let power = rho_power_iteration::<f64>(h, 1e-12)?;
            let c = code(h);
            Ok(RankingEntry {
                rank: 0,
                family_match: labels.get(&c).cloned(),
                canonical_code: c,
                rho: exact.rho,
                method_gap: (exact.rho - power.rho).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| {
        let ord = a.rho.total_cmp(&b.rho);
        let ord = if descending { ord.reverse() } else { ord };
        ord.then_with(|| a.canonical_code.cmp(&b.canonical_code))
    });
    for (k, e) in entries.iter_mut().enumerate() {
        e.rank = k + 1;
    }
    Ok(entries)
}

fn label(labels: &mut BTreeMap<CanonicalCode, String>, spec: FamilySpec) {
    if let Ok(built) = spec.build() {
        labels
            .entry(code(&built.graph))
            .or_insert_with(|| spec.to_string());
    }
}

fn family_labels(m: usize, d: Option<usize>, r: usize) -> BTreeMap<CanonicalCode, String> {
    let mut labels = BTreeMap::new();
    label(&mut labels, FamilySpec::LoosePath { m, r });
    label(&mut labels, FamilySpec::Hyperstar { m, r });
    label(&mut labels, FamilySpec::D { m, r });
    label(&mut labels, FamilySpec::PGrave { m, r });
    let ds: Vec<usize> = match d {
        Some(d) => vec![d],
        None => (2..m).collect(),
    };
    for d in ds {
        label(&mut labels, FamilySpec::TDoublePrime { m, d, r });
        for i in 2..=d {
            label(&mut labels, FamilySpec::TmdI { m, d, r, i });
            label(&mut labels, FamilySpec::TmdrEdgeI { m, d, r, i });
        }
    }
    labels
}

/// Checks that the first `expected.len()` entries are `expected`, in order,
/// and strictly separated from each other and from the rest.
fn prefix_checks(entries: &[RankingEntry], expected: &[ExpectedEntry], what: &str) -> Vec<Check> {
    let mut checks = Vec::new();
    let k = expected.len();
    if entries.len() < k {
        checks.push(Check::new(
            what,
            false,
            format!(
                "only {} candidates for {} expected places",
                entries.len(),
                k
            ),
        ));
        return checks;
    }
    let got: Vec<&CanonicalCode> = entries[..k].iter().map(|e| &e.canonical_code).collect();
    let want: Vec<&CanonicalCode> = expected.iter().map(|e| &e.canonical_code).collect();
    let labels: Vec<&str> = expected.iter().map(|e| e.label.as_str()).collect();
    checks.push(Check::new(
        what,
        got == want,
        if got == want {
            format!("in order: {}", labels.join(", "))
        } else {
            let found: Vec<String> = entries[..k]
                .iter()
                .map(|e| {
                    e.family_match
                        .clone()
                        .unwrap_or_else(|| e.canonical_code.to_string())
                })
                .collect();
            format!("expected {}, found {}", labels.join(", "), found.join(", "))
        },
    ));
    let upto = (k + 1).min(entries.len());
    let gaps: Vec<f64> = entries[..upto]
        .windows(2)
        .map(|w| (w[0].rho - w[1].rho).abs())
        .collect();
    let min_gap = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(Check::new(
        "strict separation",
        gaps.iter().all(|&g| g > SEPARATION),
        format!("smallest gap among the first {upto} radii: {min_gap:.3e}"),
    ));
    checks
}

fn method_check(entries: &[RankingEntry]) -> Check {
    let worst = entries.iter().map(|e| e.method_gap).fold(0.0, f64::max);
    Check::new(
        "methods agree",
        worst <= 1e-8,
        format!("largest |matching - power| gap {worst:.3e}"),
    )
}

/// The expected leaders of `S(m, d, r)`.
pub fn expected_diameter_top(m: usize, d: usize, r: usize) -> Result<Vec<ExpectedEntry>> {
    let mut specs = Vec::new();
    if d >= 3 && m >= d + 3 {
        for i in (2..=d / 2 + 1).rev() {
            specs.push(FamilySpec::TmdI { m, d, r, i });
        }
        specs.push(FamilySpec::TDoublePrime { m, d, r });
    } else if d >= 4 && m == d + 2 {
        for i in (3..=d / 2 + 1).rev() {
            specs.push(FamilySpec::TmdI { m, d, r, i });
        }
    } else {
        return Err(Error::PreconditionViolated(format!(
            "need d >= 3 and m >= d+3, or d >= 4 and m = d+2; got m={m} d={d}"
        )));
    }
    specs.iter().map(ExpectedEntry::from_spec).collect()
}

/// Ranks `S(m, d, r)` by ρ and checks the leaders and the supporting pairwise
/// inequalities on the same parameters.
/// All supertrees with `m` edges (and diameter `d` when given), ranked by
/// decreasing ρ and labelled with the named families they match.
pub fn ranking_table(m: usize, d: Option<usize>, r: usize, budget: usize) -> Result<RankingReport> {
    let mut trees = enumerate_supertrees_with_budget(m, r, budget)?;
    if let Some(d) = d {
        trees.retain(|h| h.diameter().ok() == Some(d));
    }
    let entries = rank_entries(&trees, &family_labels(m, d, r), true)?;
    let checks = vec![method_check(&entries)];
    let pass = checks.iter().all(|c| c.pass);
    Ok(RankingReport {
        kind: RankingKind::Table,
        m,
        d,
        r,
        entries,
        expected: Vec::new(),
        checks,
        pass,
    })
}

pub fn verify_ranking_diameter(m: usize, d: usize, r: usize) -> Result<RankingReport> {
    let expected = expected_diameter_top(m, d, r)?;
    verify_ranking_diameter_against(m, d, r, expected, budget_from_env())
}

pub fn verify_ranking_diameter_against(
    m: usize,
    d: usize,
    r: usize,
    expected: Vec<ExpectedEntry>,
    budget: usize,
) -> Result<RankingReport> {
    expected_diameter_top(m, d, r)?;
    let trees: Vec<Hypergraph> = enumerate_supertrees_with_budget(m, r, budget)?
        .into_iter()
        .filter(|h| h.diameter().ok() == Some(d))
        .collect();
    let labels = family_labels(m, Some(d), r);
    let entries = rank_entries(&trees, &labels, true)?;

    let mut checks = prefix_checks(&entries, &expected, "leading radii");
    checks.push(method_check(&entries));

    let star = hyperstar(m - d, r)?;
    let center = star.anchor("center")?;
    checks.extend(path_attachment_checks(d, r, &star.graph, center)?);
    if r >= 3 {
        checks.push(middle_edge_check(d, r, &star.graph, center)?);
    }

    let tpp = t_double_prime(m, d, r)?.graph;
    let rho_tpp = rho(&tpp)?;
    if r >= 3 && m >= d + 2 && d + 2 >= 5 {
        let rho_edge = rho(&t_mdr_edge_i(m, d, r, d.div_ceil(2))?.graph)?;
        checks.push(Check::new(
            "middle-edge star below T''",
            rho_tpp - rho_edge > SEPARATION,
            format!("{rho_tpp:.12} vs {rho_edge:.12}"),
        ));
    }
    if m >= d + 3 {
        let mut family: Vec<CanonicalCode> = (2..=d)
            .map(|i| t_md_i(m, d, r, i).map(|b| code(&b.graph)))
            .collect::<Result<_>>()?;
        family.push(code(&tpp));
        let outside: Vec<&RankingEntry> = entries
            .iter()
            .filter(|e| !family.contains(&e.canonical_code))
            .collect();
        let worst = outside
            .iter()
            .map(|e| e.rho)
            .fold(f64::NEG_INFINITY, f64::max);
        checks.push(Check::new(
            "others below T''",
            outside.iter().all(|e| rho_tpp - e.rho > SEPARATION),
            format!(
                "{} others, largest {worst:.12} vs {rho_tpp:.12}",
                outside.len()
            ),
        ));
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(RankingReport {
        kind: RankingKind::DiameterTop,
        m,
        d: Some(d),
        r,
        entries,
        expected,
        checks,
        pass,
    })
}

/// Pairwise orders between `P_d(v_i, u)T` and `P_d(e_i, u)T`.
pub fn path_attachment_checks(d: usize, r: usize, t: &Hypergraph, u: usize) -> Result<Vec<Check>> {
    let vert: Vec<f64> = (0..=d + 1)
        .map(|i| {
            if (2..=d).contains(&i) {
                rho(&path_vertex_attach(d, r, i, t, u)?.graph)
            } else {
                Ok(f64::NAN)
            }
        })
        .collect::<Result<_>>()?;
    let mut checks = Vec::new();
    let mut bad = Vec::new();
    for i in 2..=d / 2 + 1 {
        for j in 2..i {
            if vert[i] - vert[j] <= 1e-12 {
                bad.push(format!("v{i}<=v{j}"));
            }
        }
    }
    checks.push(Check::new(
        "vertex attachments increase toward the middle",
        bad.is_empty(),
        bad.join(" "),
    ));
    if r < 3 {
        return Ok(checks);
    }
    let edge: Vec<f64> = (0..=d)
        .map(|i| {
            if (2..=d).contains(&i) {
                rho(&path_edge_attach(d, r, i, t, u)?.graph)
            } else {
                Ok(f64::NAN)
            }
        })
        .collect::<Result<_>>()?;
    let mut bad = Vec::new();
    for i in 2..=d.div_ceil(2) {
        for j in 2..i {
            if edge[i] - edge[j] <= 1e-12 {
                bad.push(format!("e{i}<=e{j}"));
            }
        }
    }
    checks.push(Check::new(
        "edge attachments increase toward the middle",
        bad.is_empty(),
        bad.join(" "),
    ));
    let bad: Vec<String> = (2..=d)
        .filter(|&i| vert[i] - edge[i] <= 1e-12)
        .map(|i| format!("e{i}>=v{i}"))
        .collect();
    checks.push(Check::new(
        "edge attachment below vertex attachment",
        bad.is_empty(),
        bad.join(" "),
    ));
    let bad: Vec<String> = (2..d)
        .filter(|&i| vert[i + 1] - edge[i] <= 1e-12)
        .map(|i| format!("e{i}>=v{}", i + 1))
        .collect();
    checks.push(Check::new(
        "edge attachment below next vertex attachment",
        bad.is_empty(),
        bad.join(" "),
    ));
    Ok(checks)
}

/// `P_d(e_⌈d/2⌉, u)T ≺ P_d(v_i, u)T` for every `2 ≤ i ≤ d`.
pub fn middle_edge_check(d: usize, r: usize, t: &Hypergraph, u: usize) -> Result<Check> {
    let mid = path_edge_attach(d, r, d.div_ceil(2), t, u)?.graph;
    let mut bad = Vec::new();
    for i in 2..=d {
        let other = path_vertex_attach(d, r, i, t, u)?.graph;
        let rel = compare(&mid, &other)?.relation;
        if rel != Relation::StrictlyLess {
            bad.push(format!("v{i}: {rel}"));
        }
    }
    Ok(Check::new(
        "middle edge attachment precedes vertex attachments",
        bad.is_empty(),
        bad.join(" "),
    ))
}

/// The two smallest supertrees with `m` edges.
pub fn expected_minima(m: usize, r: usize) -> Result<Vec<ExpectedEntry>> {
    if m < 4 {
        return Err(Error::PreconditionViolated(format!("need m >= 4, got {m}")));
    }
    [FamilySpec::LoosePath { m, r }, FamilySpec::D { m, r }]
        .iter()
        .map(ExpectedEntry::from_spec)
        .collect()
}

pub fn verify_minima(m: usize, r: usize) -> Result<RankingReport> {
    let expected = expected_minima(m, r)?;
    verify_minima_against(m, r, expected, budget_from_env())
}

pub fn verify_minima_against(
    m: usize,
    r: usize,
    expected: Vec<ExpectedEntry>,
    budget: usize,
) -> Result<RankingReport> {
    expected_minima(m, r)?;
    let trees = enumerate_supertrees_with_budget(m, r, budget)?;
    let labels = family_labels(m, None, r);
    let entries = rank_entries(&trees, &labels, false)?;
    let mut checks = prefix_checks(&entries, &expected, "smallest radii");
    checks.push(method_check(&entries));

    let path = loose_path(m, r)?.graph;
    let d = d_family(m, r)?.graph;
    let (path_code, d_code) = (code(&path), code(&d));
    let others: Vec<&Hypergraph> = trees
        .iter()
        .filter(|h| {
            let c = code(h);
            c != path_code && c != d_code
        })
        .collect();
    let relations: Vec<Relation> = others
        .par_iter()
        .map(|h| compare(&d, h).map(|v| v.relation))
        .collect::<Result<_>>()?;
    let strict = relations
        .iter()
        .filter(|&&r| r == Relation::StrictlyLess)
        .count();
    let weak = relations
        .iter()
        .filter(|&&r| r == Relation::LessOrEqual)
        .count();
    checks.push(Check::new(
        "D precedes every other non-path supertree",
        strict + weak == relations.len(),
        format!("{strict} strict, {weak} weak, {} total", relations.len()),
    ));
    if r >= 3 {
        let grave = p_grave(m, r)?.graph;
        let rel = compare(&grave, &d)?.relation;
        checks.push(Check::new(
            "P-grave above D",
            rel == Relation::StrictlyGreater,
            format!("compare(P-grave, D) = {rel}"),
        ));
    }
    let pass = checks.iter().all(|c| c.pass);
    Ok(RankingReport {
        kind: RankingKind::Minima,
        m,
        d: None,
        r,
        entries,
        expected,
        checks,
        pass,
    })
}

// ---------------------------------------------------------------------------
// transformations

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Grafting {
    /// Two pendent paths at one vertex.
    OneVertex,
    /// Pendent paths at two vertices of a common edge.
    Adjacent,
    /// Pendent paths at the ends of a bare path of length `s`.
    DistanceS,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GraftInstance {
    pub kind: Grafting,
    pub base: Hypergraph,
    pub u: usize,
    /// Ignored for [`Grafting::OneVertex`].
    pub v: usize,
    pub p: usize,
    pub q: usize,
}

/// Outcome of one transformation check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Outcome {
    pub pass: bool,
    pub relation: Relation,
    pub rho_before: f64,
    pub rho_after: f64,
    pub detail: String,
}

fn graft(inst: &GraftInstance, p: usize, q: usize) -> Result<Hypergraph> {
    match inst.kind {
        Grafting::OneVertex => graft_one_vertex(&inst.base, inst.u, p, q),
        Grafting::Adjacent => graft_adjacent(&inst.base, inst.u, inst.v, p, q),
        Grafting::DistanceS => Ok(graft_distance_s(&inst.base, inst.u, inst.v, p, q)?.0),
    }
}

/// Instances on which both grafts are isomorphic although the stated
/// parameter conditions hold; `None` when the instance is not of that kind.
pub fn graft_degeneracy(inst: &GraftInstance) -> Result<Option<String>> {
    let t = &inst.base;
    match inst.kind {
        Grafting::OneVertex if t.size() == 0 => Ok(Some("base has no edges".into())),
        Grafting::OneVertex => Ok(None),
        Grafting::Adjacent => {
            let e = t
                .edges()
                .iter()
                .find(|e| e.contains(&inst.u) && e.contains(&inst.v))
                .ok_or_else(|| {
                    Error::PreconditionViolated(format!("{} and {} share no edge", inst.u, inst.v))
                })?;
            let bare = e
                .iter()
                .filter(|&&w| w != inst.u)
                .all(|&w| t.degree(w) == Ok(1));
            Ok(match (bare, t.size()) {
                (true, 1) => Some("base is a single edge".into()),
                (true, _) if inst.p == inst.q => Some(format!(
                    "no branches off the shared edge away from {} and p = q",
                    inst.u
                )),
                _ => None,
            })
        }
        Grafting::DistanceS => {
            let s = grafting_distance(t, inst.u, inst.v)?;
            Ok((t.size() == s).then(|| format!("base is the bare path of length {s}")))
        }
    }
}

/// Builds the `(p, q)` and `(p + 1, q - 1)` grafts and checks that the first
/// is strictly above the second in the order and in ρ.
pub fn verify_grafting(inst: &GraftInstance) -> Result<Outcome> {
    let (p, q) = (inst.p, inst.q);
    if !inst.base.is_supertree() {
        return Err(Error::PreconditionViolated(
            "base must be a supertree".into(),
        ));
    }
    match inst.kind {
        Grafting::OneVertex | Grafting::Adjacent if !(p >= q && q >= 1) => {
            return Err(Error::PreconditionViolated(format!(
                "need p >= q >= 1, got p={p} q={q}"
            )));
        }
        Grafting::Adjacent if inst.base.size() < 2 => {
            return Err(Error::PreconditionViolated(
                "base needs at least two edges".into(),
            ));
        }
        Grafting::DistanceS => {
            let s = grafting_distance(&inst.base, inst.u, inst.v)
                .map_err(|e| Error::PreconditionViolated(e.to_string()))?;
            if !(q >= 1 && p >= q + s) {
                return Err(Error::PreconditionViolated(format!(
                    "need p - q >= s >= 1 and q >= 1, got p={p} q={q} s={s}"
                )));
            }
        }
        _ => {}
    }
    let before = graft(inst, p, q)?;
    let after = graft(inst, p + 1, q - 1)?;
    let relation = compare(&before, &after)?.relation;
    let (rb, ra) = (rho(&before)?, rho(&after)?);
    let pass = relation == Relation::StrictlyGreater && rb > ra;
    let mut detail = format!(
        "{:?} p={p} q={q}: {relation}, rho {rb:.12} -> {ra:.12}",
        inst.kind
    );
    if let Some(why) = graft_degeneracy(inst)? {
        detail.push_str(&format!(" (degenerate: {why})"));
    }
    Ok(Outcome {
        pass,
        relation,
        rho_before: rb,
        rho_after: ra,
        detail,
    })
}

/// Edge-releasing `e` at `u` must move the supertree strictly up.
pub fn verify_edge_release(t: &Hypergraph, e: usize, u: usize) -> Result<Outcome> {
    if !t.is_supertree() {
        return Err(Error::PreconditionViolated(
            "input must be a supertree".into(),
        ));
    }
    let released = t.edge_release(e, u)?;
    let relation = compare(t, &released)?.relation;
    let (rb, ra) = (rho(t)?, rho(&released)?);
    let pass = released.is_supertree() && relation == Relation::StrictlyLess && ra > rb;
    Ok(Outcome {
        pass,
        relation,
        rho_before: rb,
        rho_after: ra,
        detail: format!("release e{e} at {u}: {relation}, rho {rb:.12} -> {ra:.12}"),
    })
}

/// Moving `moves = [(edge, pivot)]` to `target` when the principal eigenvector
/// favours `target` must raise ρ.
pub fn verify_edge_moving(
    h: &Hypergraph,
    moves: &[(usize, usize)],
    target: usize,
) -> Result<Outcome> {
    let est = rho_power_iteration::<f64>(h, 1e-12)?;
    let x = est
        .eigenvector
        .expect("power iteration returns the eigenvector");
    let max_pivot = moves.iter().map(|&(_, v)| x[v]).fold(0.0, f64::max);
    if x[target] + 1e-12 < max_pivot {
        return Err(Error::PreconditionViolated(format!(
            "x[{target}] = {} is below a pivot entry {max_pivot}",
            x[target]
        )));
    }
    let moved = h.move_edges(moves, target)?;
    let after = if moved.is_connected() {
        rho_power_iteration::<f64>(&moved, 1e-12)?.rho
    } else if moved.is_acyclic() {
        rho(&moved)?
    } else {
        return Err(Error::PreconditionViolated(
            "moved hypergraph is disconnected and cyclic".into(),
        ));
    };
    Ok(Outcome {
        pass: after > est.rho,
        relation: Relation::Incomparable,
        rho_before: est.rho,
        rho_after: after,
        detail: format!(
            "{} edge(s) to {target}: rho {:.12} -> {after:.12}",
            moves.len(),
            est.rho
        ),
    })
}

// ---------------------------------------------------------------------------
// randomized batches

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BatchReport {
    pub name: String,
    pub instances: usize,
    pub violations: usize,
    /// Details of the first few violations.
    pub failures: Vec<String>,
}

impl BatchReport {
    pub fn pass(&self) -> bool {
        self.violations == 0 && self.instances > 0
    }

    fn collect(name: &str, outcomes: Vec<Outcome>) -> BatchReport {
        let failures: Vec<String> = outcomes
            .iter()
            .filter(|o| !o.pass)
            .map(|o| o.detail.clone())
            .collect();
        BatchReport {
            name: name.into(),
            instances: outcomes.len(),
            violations: failures.len(),
            failures: failures.into_iter().take(5).collect(),
        }
    }
}

/// Random supertree grown by attaching each new edge at a uniform vertex.
pub fn random_supertree<R: Rng>(rng: &mut R, m: usize, r: usize) -> Hypergraph {
    let mut h = Hypergraph::empty(r, 1).expect("rank is valid");
    for _ in 0..m {
        let v = rng.gen_range(0..h.order());
        h = h.attach_pendent_path(v, 1).expect("vertex exists").0;
    }
    h
}

/// Random non-degenerate instance of the requested grafting with small
/// parameters; see [`graft_degeneracy`].
pub fn random_graft_instance<R: Rng>(rng: &mut R, kind: Grafting) -> GraftInstance {
    loop {
        let inst = any_graft_instance(rng, kind);
        if graft_degeneracy(&inst).ok() == Some(None) {
            return inst;
        }
    }
}

fn any_graft_instance<R: Rng>(rng: &mut R, kind: Grafting) -> GraftInstance {
    let r = rng.gen_range(2..=4);
    match kind {
        Grafting::OneVertex => {
            let size = rng.gen_range(0..=4);
            let base = random_supertree(rng, size, r);
            let u = rng.gen_range(0..base.order());
            let q = rng.gen_range(1..=3);
            let p = q + rng.gen_range(0..=3);
            GraftInstance {
                kind,
                base,
                u,
                v: u,
                p,
                q,
            }
        }
        Grafting::Adjacent => {
            let size = rng.gen_range(2..=5);
            let base = random_supertree(rng, size, r);
            let e = &base.edges()[rng.gen_range(0..base.size())];
            let pair: Vec<usize> = e.choose_multiple(rng, 2).copied().collect();
            let q = rng.gen_range(1..=3);
            let p = q + rng.gen_range(0..=3);
            GraftInstance {
                kind,
                u: pair[0],
                v: pair[1],
                base,
                p,
                q,
            }
        }
        Grafting::DistanceS => loop {
            let size = rng.gen_range(1..=5);
            let base = random_supertree(rng, size, r);
            let u = rng.gen_range(0..base.order());
            let v = rng.gen_range(0..base.order());
            let Ok(s) = grafting_distance(&base, u, v) else {
                continue;
            };
            if s > 3 {
                continue;
            }
            let q = rng.gen_range(1..=2);
            let p = q + s + rng.gen_range(0..=2);
            break GraftInstance {
                kind,
                base,
                u,
                v,
                p,
                q,
            };
        },
    }
}

pub fn random_grafting_batch(kind: Grafting, count: usize, seed: u64) -> Result<BatchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let instances: Vec<GraftInstance> = (0..count)
        .map(|_| random_graft_instance(&mut rng, kind))
        .collect();
    let outcomes = instances
        .par_iter()
        .map(verify_grafting)
        .collect::<Result<Vec<_>>>()?;
    Ok(BatchReport::collect(
        &format!("{kind:?} grafting"),
        outcomes,
    ))
}

pub fn random_edge_release_batch(count: usize, seed: u64) -> Result<BatchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut instances = Vec::with_capacity(count);
    while instances.len() < count {
        let r = rng.gen_range(2..=4);
        let size = rng.gen_range(2..=6);
        let t = random_supertree(&mut rng, size, r);
        let candidates: Vec<usize> = (0..t.size())
            .filter(|&e| t.intersection_vertices(e).is_ok_and(|iv| iv.len() >= 2))
            .collect();
        let Some(&e) = candidates.choose(&mut rng) else {
            continue;
        };
        let u = *t.edges()[e].choose(&mut rng).unwrap();
        instances.push((t, e, u));
    }
    let outcomes = instances
        .par_iter()
        .map(|(t, e, u)| verify_edge_release(t, *e, *u))
        .collect::<Result<Vec<_>>>()?;
    Ok(BatchReport::collect("edge release", outcomes))
}

pub fn random_edge_moving_batch(count: usize, seed: u64) -> Result<BatchReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcomes = Vec::with_capacity(count);
    while outcomes.len() < count {
        let r = rng.gen_range(2..=4);
        let size = rng.gen_range(2..=6);
        let h = random_supertree(&mut rng, size, r);
        let x = rho_power_iteration::<f64>(&h, 1e-12)?.eigenvector.unwrap();
        let target = rng.gen_range(0..h.order());
        let mut moves = Vec::new();
        for e in 0..h.size() {
            let edge = &h.edges()[e];
            if edge.contains(&target) || !rng.gen_bool(0.5) {
                continue;
            }
            let pivots: Vec<usize> = edge
                .iter()
                .copied()
                .filter(|&w| x[w] <= x[target] + 1e-12)
                .collect();
            if let Some(&pivot) = pivots.choose(&mut rng) {
                moves.push((e, pivot));
            }
        }
        if moves.is_empty() {
            continue;
        }
        match verify_edge_moving(&h, &moves, target) {
            Ok(o) => outcomes.push(o),
            Err(Error::NonLinearResult { .. }) | Err(Error::PreconditionViolated(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(BatchReport::collect("edge moving", outcomes))
}

// ---------------------------------------------------------------------------
// closed forms and powers

/// `ρ(P_m^r) = (2 cos(π/(m+2)))^{2/r}` and `ρ(S_m^r) = m^{1/r}` for
/// `m = 1..=max_m`, each by both methods, within `tol`.
pub fn verify_closed_forms(r: usize, max_m: usize, tol: f64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for m in 1..=max_m {
        let path = (2.0 * (std::f64::consts::PI / (m as f64 + 2.0)).cos()).powf(2.0 / r as f64);
        let star = (m as f64).powf(1.0 / r as f64);
        for (name, h, want) in [
            ("path", loose_path(m, r)?.graph, path),
            ("star", hyperstar(m, r)?.graph, star),
        ] {
            let a = rho_from_matching_poly::<f64>(&matching_polynomial(&h))?.rho;
            let b = rho_power_iteration::<f64>(&h, 1e-13)?.rho;
            let gap = (a - want).abs().max((b - want).abs());
            checks.push(Check::new(
                format!("{name} m={m} r={r}"),
                gap <= tol,
                format!("closed {want:.13}, matching {a:.13}, power {b:.13}, gap {gap:.1e}"),
            ));
        }
    }
    Ok(checks)
}

/// Power relation on every ordinary tree with at most `max_edges` edges.
pub fn verify_power_relations(max_edges: usize, tol: f64, budget: usize) -> Result<Check> {
    let mut trees = Vec::new();
    for m in 1..=max_edges {
        trees.extend(enumerate_supertrees_with_budget(m, 2, budget)?);
    }
    let reports = trees
        .par_iter()
        .map(crate::spectral::verify_power_relation)
        .collect::<Result<Vec<_>>>()?;
    let worst = reports.iter().map(|r| r.max_gap()).fold(0.0, f64::max);
    let bad = reports.iter().filter(|r| r.max_gap() > tol).count();
    Ok(Check::new(
        format!("power relation, trees with <= {max_edges} edges, r in {{3,4}}"),
        bad == 0,
        format!(
            "{} trees, {bad} over {tol:.0e}, worst gap {worst:.2e}",
            trees.len()
        ),
    ))
}

// ---------------------------------------------------------------------------
// identities

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IdentityReport {
    pub supertrees: usize,
    pub edge_recurrences: usize,
    pub vertex_expansions: usize,
    pub derivative_checks: usize,
    pub nonzero_residuals: usize,
    pub failures: Vec<String>,
}

impl IdentityReport {
    pub fn pass(&self) -> bool {
        self.nonzero_residuals == 0 && self.supertrees > 0
    }
}

/// Evaluates the deletion recurrence on every edge, the vertex expansion at
/// every vertex and the derivative identity for each supertree.
pub fn verify_identities(trees: &[Hypergraph]) -> Result<IdentityReport> {
    let per_tree = trees
        .par_iter()
        .map(|h| -> Result<IdentityReport> {
            let mut rep = IdentityReport {
                supertrees: 1,
                ..Default::default()
            };
            let c = code(h);
            let note = |rep: &mut IdentityReport, what: String| {
                rep.nonzero_residuals += 1;
                if rep.failures.len() < 5 {
                    rep.failures.push(format!("{c}: {what}"));
                }
            };
            for e in 0..h.size() {
                rep.edge_recurrences += 1;
                if !edge_recurrence_residual(h, e)?.is_zero() {
                    note(&mut rep, format!("edge recurrence at e{e}"));
                }
            }
            for u in 0..h.order() {
                rep.vertex_expansions += 1;
                if !vertex_deletion_expand(h, u)?.is_zero() {
                    note(&mut rep, format!("vertex expansion at {u}"));
                }
            }
            rep.derivative_checks += 1;
            if !derivative_identity_check(h)?.is_zero() {
                note(&mut rep, "derivative identity".into());
            }
            Ok(rep)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = IdentityReport::default();
    for rep in per_tree {
        total.supertrees += rep.supertrees;
        total.edge_recurrences += rep.edge_recurrences;
        total.vertex_expansions += rep.vertex_expansions;
        total.derivative_checks += rep.derivative_checks;
        total.nonzero_residuals += rep.nonzero_residuals;
        total.failures.extend(rep.failures);
    }
    total.failures.truncate(10);
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grafting_examples() {
        let e = loose_path(1, 3).unwrap().graph;
        let one = GraftInstance {
            kind: Grafting::OneVertex,
            base: e.clone(),
            u: 1,
            v: 1,
            p: 2,
            q: 2,
        };
        assert!(verify_grafting(&one).unwrap().pass);

        let single = GraftInstance {
            kind: Grafting::Adjacent,
            base: e,
            u: 0,
            v: 2,
            p: 2,
            q: 1,
        };
        assert!(matches!(
            verify_grafting(&single),
            Err(Error::PreconditionViolated(_))
        ));
        let p2 = loose_path(2, 3).unwrap();
        let (u, v) = (p2.anchor("v1").unwrap(), p2.anchor("v2").unwrap());
        let adj = GraftInstance {
            kind: Grafting::Adjacent,
            base: p2.graph.clone(),
            u,
            v,
            p: 2,
            q: 1,
        };
        assert!(verify_grafting(&adj).unwrap().pass);

        let w = p2.anchor("v3").unwrap();
        let bare = GraftInstance {
            kind: Grafting::DistanceS,
            base: p2.graph.clone(),
            u,
            v: w,
            p: 3,
            q: 1,
        };
        let out = verify_grafting(&bare).unwrap();
        assert_eq!(out.relation, Relation::Equal);
        assert!(!out.pass && out.detail.contains("degenerate"));

        let p3 = loose_path(3, 3).unwrap();
        let dist = GraftInstance {
            kind: Grafting::DistanceS,
            base: p3.graph.clone(),
            u: p3.anchor("v2").unwrap(),
            v: p3.anchor("v4").unwrap(),
            p: 3,
            q: 1,
        };
        assert!(graft_degeneracy(&dist).unwrap().is_none());
        assert!(verify_grafting(&dist).unwrap().pass);
        let short = GraftInstance { p: 2, ..dist };
        assert!(matches!(
            verify_grafting(&short),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn adjacent_grafting_with_equal_lengths_can_be_isomorphic() {
        let t = Hypergraph::new(2, 3, vec![vec![0, 1], vec![0, 2]]).unwrap();
        let inst = GraftInstance {
            kind: Grafting::Adjacent,
            base: t,
            u: 0,
            v: 2,
            p: 2,
            q: 2,
        };
        assert!(graft_degeneracy(&inst).unwrap().is_some());
        let a = graft(&inst, 2, 2).unwrap();
        let b = graft(&inst, 3, 1).unwrap();
        assert_eq!(code(&a), code(&b));
        assert_eq!(verify_grafting(&inst).unwrap().relation, Relation::Equal);
        let wider = GraftInstance { p: 3, q: 2, ..inst };
        assert!(verify_grafting(&wider).unwrap().pass);
    }

    #[test]
    fn generated_instances_are_never_degenerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for kind in [Grafting::OneVertex, Grafting::Adjacent, Grafting::DistanceS] {
            for _ in 0..40 {
                let inst = random_graft_instance(&mut rng, kind);
                assert_eq!(graft_degeneracy(&inst).unwrap(), None);
                let out = verify_grafting(&inst).unwrap();
                assert!(out.pass, "{}", out.detail);
            }
        }
    }

    #[test]
    fn edge_release_example() {
        let p3 = loose_path(3, 3).unwrap();
        let out = verify_edge_release(&p3.graph, 1, p3.anchor("v2").unwrap()).unwrap();
        assert!(out.pass, "{}", out.detail);
        assert_eq!(out.relation, Relation::StrictlyLess);
    }

    #[test]
    fn table_has_one_row_per_supertree() {
        let rep = ranking_table(4, Some(3), 3, 7).unwrap();
        assert!(rep.pass);
        let csv = rep.to_csv();
        let rows = csv.lines().count() - 1;
        let all = enumerate_supertrees_with_budget(4, 3, 7).unwrap();
        let with_d3 = all.iter().filter(|h| h.diameter() == Ok(3)).count();
        assert_eq!(rows, with_d3);
        assert!(csv.starts_with("rank,canonical_code,family_match,rho,method_gap"));
        assert!(rep.to_text().contains("D(m=4,r=3)"));
    }

    #[test]
    fn ranking_minima_small() {
        let rep = verify_minima(4, 3).unwrap();
        assert!(rep.pass, "{:#?}", rep.failures());
        assert!((rep.entries[0].rho - 3f64.powf(1.0 / 3.0)).abs() < 1e-12);
        let csv = rep.to_csv();
        assert_eq!(
            csv.lines().next().unwrap(),
            "rank,canonical_code,family_match,rho,method_gap"
        );
        assert_eq!(csv.lines().count(), rep.entries.len() + 1);
    }

    #[test]
    fn ranking_rejects_out_of_range_parameters() {
        assert!(matches!(
            verify_ranking_diameter(5, 3, 3),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(matches!(
            verify_minima(3, 3),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn random_batches_are_reproducible() {
        let a = random_grafting_batch(Grafting::OneVertex, 5, 7).unwrap();
        let b = random_grafting_batch(Grafting::OneVertex, 5, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.pass());
    }

    #[test]
    fn identities_on_small_corpus() {
        let trees = enumerate_supertrees_with_budget(4, 3, 7).unwrap();
        let rep = verify_identities(&trees).unwrap();
        assert!(rep.pass());
        assert_eq!(rep.supertrees, 4);
        assert_eq!(rep.edge_recurrences, 16);
    }
}
