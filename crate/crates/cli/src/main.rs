use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use supertree::enumerate::{enumerate_supertrees_with_budget, BUDGET_ENV, DEFAULT_BUDGET};
use supertree::io::{ingest, to_json, write_file};
use supertree::spectral::{rho_matching, rho_power_iteration};
use supertree::verify::{
    expected_diameter_top, expected_minima, random_edge_moving_batch, random_edge_release_batch,
    random_grafting_batch, ranking_table, verify_closed_forms, verify_identities,
    verify_minima_against, verify_power_relations, verify_ranking_diameter_against, BatchReport,
    Check, ExpectedEntry, Grafting, RankingReport,
};
use supertree::{canonical_code, compare, matching_polynomial, FamilySpec, Hypergraph};

#[derive(Parser)]
#[command(
    name = "supertree",
    version,
    about = "Matching polynomials and spectral radii of uniform supertrees"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Print the matching polynomial.
    Poly(Common),
    /// Spectral radius by the matching polynomial, power iteration or both.
    Rho(Common),
    /// Build a named family and print it as JSON.
    Build(Common),
    /// Compare two supertrees in the matching-polynomial order.
    Compare(Common),
    /// List all supertrees with the given edge count.
    Enumerate(Common),
    /// Run a verification driver; exit 2 when a check fails.
    Verify(Common),
    /// Write a ranking table, or the input hypergraph, to a file.
    Export(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    LoosePath,
    Hyperstar,
    TmdI,
    TmdrEdgeI,
    TDoublePrime,
    D,
    PGrave,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Matching,
    Power,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Hypergraph JSON file; `compare` takes two.
    #[arg(long)]
    file: Vec<PathBuf>,
    #[arg(long, value_enum)]
    family: Option<Family>,
    #[arg(short)]
    m: Option<usize>,
    #[arg(short)]
    d: Option<usize>,
    #[arg(short)]
    r: Option<usize>,
    #[arg(short)]
    i: Option<usize>,
    #[arg(long, value_enum, default_value = "matching")]
    method: Method,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Enumeration budget in edges.
    #[arg(long, env = BUDGET_ENV, default_value_t = DEFAULT_BUDGET)]
    max_edges: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Instances per randomised batch.
    #[arg(long, default_value_t = 200)]
    count: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write results here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Result to check, by name or number (see `verify --help`).
    #[arg(long, long_help = TARGET_HELP)]
    theorem: Option<String>,
    /// JSON array of family specs replacing the expected ranking.
    #[arg(long)]
    expected: Option<PathBuf>,
}

const TARGET_HELP: &str = "\
extremes (4.8)           closed forms for paths and stars, m = 1..=M (default 10)
power-relation (2.5)     rho(T^r) = rho(T)^(2/r) on trees with <= M edges (default 7)
identities (3.2)         polynomial identities on every supertree with <= M edges
graft-one-vertex (4.3)   randomised grafting at one vertex
graft-adjacent (4.4)     randomised grafting at two vertices of an edge
graft-distance (4.5)     randomised grafting at the ends of a bare path
edge-release (4.6)       randomised edge-releasing
edge-moving (2.4)        randomised edge-moving
diameter-top (5.9, 5.10) largest radii with diameter d (-m -d -r)
minima (6.2)             two smallest radii (-m -r)";

#[derive(Clone, Copy, Debug)]
enum Target {
    Extremes,
    PowerRelation,
    Identities,
    Graft(Grafting),
    EdgeRelease,
    EdgeMoving,
    DiameterTop,
    Minima,
}

fn parse_target(s: &str) -> anyhow::Result<Target> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "extremes" | "4.8" => Target::Extremes,
        "power-relation" | "2.5" => Target::PowerRelation,
        "identities" | "3.2" => Target::Identities,
        "graft-one-vertex" | "4.3" => Target::Graft(Grafting::OneVertex),
        "graft-adjacent" | "4.4" => Target::Graft(Grafting::Adjacent),
        "graft-distance" | "4.5" => Target::Graft(Grafting::DistanceS),
        "edge-release" | "4.6" => Target::EdgeRelease,
        "edge-moving" | "2.4" => Target::EdgeMoving,
        "diameter-top" | "5.9" | "5.10" => Target::DiameterTop,
        "minima" | "6.2" => Target::Minima,
        other => bail!("unknown check {other:?}; see `supertree verify --help`"),
    })
}

/// Failure of a verification check, as opposed to bad input.
struct Failed;

type Outcome = anyhow::Result<Result<(), Failed>>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(Failed)) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.verb {
        Verb::Poly(a) => poly(&a),
        Verb::Rho(a) => rho(&a),
        Verb::Build(a) => build(&a),
        Verb::Compare(a) => cmp(&a),
        Verb::Enumerate(a) => enumerate(&a),
        Verb::Verify(a) => verify(&a),
        Verb::Export(a) => export(&a),
    }
}

fn need(v: Option<usize>, flag: &str) -> anyhow::Result<usize> {
    v.ok_or_else(|| anyhow!("missing -{flag}"))
}

fn family_spec(a: &Common) -> anyhow::Result<Option<FamilySpec>> {
    let Some(f) = a.family else { return Ok(None) };
    let (m, r) = (need(a.m, "m")?, need(a.r, "r")?);
    Ok(Some(match f {
        Family::LoosePath => FamilySpec::LoosePath { m, r },
        Family::Hyperstar => FamilySpec::Hyperstar { m, r },
        Family::D => FamilySpec::D { m, r },
        Family::PGrave => FamilySpec::PGrave { m, r },
        Family::TDoublePrime => FamilySpec::TDoublePrime {
            m,
            d: need(a.d, "d")?,
            r,
        },
        Family::TmdI => FamilySpec::TmdI {
            m,
            d: need(a.d, "d")?,
            r,
            i: need(a.i, "i")?,
        },
        Family::TmdrEdgeI => FamilySpec::TmdrEdgeI {
            m,
            d: need(a.d, "d")?,
            r,
            i: need(a.i, "i")?,
        },
    }))
}

/// Named hypergraphs from `--file` (in order) followed by `--family`.
fn inputs(a: &Common) -> anyhow::Result<Vec<(String, Hypergraph)>> {
    let mut out = Vec::new();
    for path in &a.file {
        let doc = ingest(path).with_context(|| format!("reading {}", path.display()))?;
        let name = doc.name.unwrap_or_else(|| path.display().to_string());
        out.push((name, doc.graph));
    }
    if let Some(spec) = family_spec(a)? {
        out.push((spec.to_string(), spec.build()?.graph));
    }
    Ok(out)
}

fn single(a: &Common) -> anyhow::Result<(String, Hypergraph)> {
    let mut all = inputs(a)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        0 => bail!("give a hypergraph with --file or --family"),
        n => bail!("expected one hypergraph, got {n}"),
    }
}

fn emit(a: &Common, text: &str) -> anyhow::Result<()> {
    match &a.out {
        Some(path) => write_file(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn line(v: serde_json::Value) -> String {
    format!(
        "{}\n",
        serde_json::to_string_pretty(&v).expect("json values serialise")
    )
}

fn poly(a: &Common) -> Outcome {
    let (name, h) = single(a)?;
    let phi = matching_polynomial(&h);
    let text = match a.format {
        Format::Json => format!("{}\n", serde_json::to_string(&phi)?),
        Format::Csv => {
            let mut s = String::from("k,count\n");
            for (k, c) in phi.counts().iter().enumerate() {
                writeln!(s, "{k},{c}")?;
            }
            s
        }
        Format::Text => {
            eprintln!("{name}: n={} r={}", h.order(), h.rank());
            format!("{phi}\n")
        }
    };
    emit(a, &text)?;
    Ok(Ok(()))
}

fn rho(a: &Common) -> Outcome {
    let (name, h) = single(a)?;
    let exact = match a.method {
        Method::Power => None,
        _ => Some(rho_matching::<f64>(&h)?),
    };
    let power = match a.method {
        Method::Matching => None,
        _ => Some(rho_power_iteration::<f64>(&h, a.tol)?),
    };
    let gap = exact
        .as_ref()
        .zip(power.as_ref())
        .map(|(x, y)| (x.rho - y.rho).abs());
    let text = match a.format {
        Format::Json => line(json!({
            "name": name,
            "matching": exact.as_ref().map(|e| e.rho),
            "power": power.as_ref().map(|e| e.rho),
            "power_error_bound": power.as_ref().map(|e| e.error_bound),
            "power_iterations": power.as_ref().map(|e| e.iterations),
            "gap": gap,
        })),
        Format::Csv => {
            let cell = |v: Option<f64>| v.map(|x| format!("{x:.15}")).unwrap_or_default();
            format!(
                "name,matching,power,gap\n{name},{},{},{}\n",
                cell(exact.as_ref().map(|e| e.rho)),
                cell(power.as_ref().map(|e| e.rho)),
                gap.map(|g| format!("{g:.3e}")).unwrap_or_default()
            )
        }
        Format::Text => {
            let mut s = String::new();
            if let Some(e) = &exact {
                writeln!(s, "matching  {:.15}", e.rho)?;
            }
            if let Some(p) = &power {
                writeln!(
                    s,
                    "power     {:.15}  (bound {:.1e}, {} iterations)",
                    p.rho, p.error_bound, p.iterations
                )?;
            }
            if let Some(g) = gap {
                writeln!(s, "gap       {g:.3e}")?;
            }
            s
        }
    };
    emit(a, &text)?;
    Ok(Ok(()))
}

fn build(a: &Common) -> Outcome {
    let (name, h) = single(a)?;
    emit(a, &format!("{}\n", to_json(&h, Some(&name))))?;
    Ok(Ok(()))
}

fn cmp(a: &Common) -> Outcome {
    let all = inputs(a)?;
    let [(ln, left), (rn, right)] = <[_; 2]>::try_from(all)
        .map_err(|v: Vec<_>| anyhow!("compare needs two hypergraphs, got {}", v.len()))?;
    let verdict = compare(&left, &right)?;
    let text = match a.format {
        Format::Json => line(json!({ "left": ln, "right": rn, "verdict": verdict })),
        Format::Csv => format!(
            "left,right,relation,difference,threshold\n{ln},{rn},{},{},{}\n",
            verdict.relation, verdict.difference, verdict.threshold
        ),
        Format::Text => format!(
            "{ln} vs {rn}: {}\ndifference {}\n",
            verdict.relation, verdict.difference
        ),
    };
    emit(a, &text)?;
    Ok(Ok(()))
}

fn enumerate(a: &Common) -> Outcome {
    let (m, r) = (need(a.m, "m")?, need(a.r, "r")?);
    let mut trees = enumerate_supertrees_with_budget(m, r, a.max_edges)?;
    if let Some(d) = a.d {
        trees.retain(|h| h.diameter().ok() == Some(d));
    }
    let mut text = String::new();
    match a.format {
        Format::Json => {
            let docs: Vec<serde_json::Value> = trees
                .iter()
                .map(|h| serde_json::from_str(&to_json(h, None)))
                .collect::<Result<_, _>>()?;
            text = line(serde_json::Value::Array(docs));
        }
        Format::Csv => {
            text.push_str("index,canonical_code,diameter,edges\n");
            for (k, h) in trees.iter().enumerate() {
                let edges = serde_json::to_string(h.edges())?;
                writeln!(
                    text,
                    "{k},{},{},\"{}\"",
                    canonical_code(h)?,
                    h.diameter()?,
                    edges
                )?;
            }
        }
        Format::Text => {
            for h in &trees {
                writeln!(
                    text,
                    "{}  d={}  {}",
                    canonical_code(h)?,
                    h.diameter()?,
                    to_json(h, None)
                )?;
            }
            eprintln!("{} supertrees", trees.len());
        }
    }
    emit(a, &text)?;
    Ok(Ok(()))
}

fn read_expected(a: &Common) -> anyhow::Result<Option<Vec<ExpectedEntry>>> {
    let Some(path) = &a.expected else {
        return Ok(None);
    };
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let specs: Vec<FamilySpec> =
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let entries = specs
        .iter()
        .map(ExpectedEntry::from_spec)
        .collect::<supertree::Result<Vec<_>>>()?;
    Ok(Some(entries))
}

fn checks_text(checks: &[Check]) -> String {
    checks
        .iter()
        .map(|c| {
            let mark = if c.pass { "ok  " } else { "FAIL" };
            format!("{mark} {}: {}\n", c.name, c.detail)
        })
        .collect()
}

fn report_checks(a: &Common, title: &str, checks: Vec<Check>) -> Outcome {
    let pass = checks.iter().all(|c| c.pass);
    let text = match a.format {
        Format::Json => line(json!({ "check": title, "pass": pass, "checks": checks })),
        Format::Csv => {
            let mut s = String::from("name,pass,detail\n");
            for c in &checks {
                writeln!(
                    s,
                    "{},{},\"{}\"",
                    c.name,
                    c.pass,
                    c.detail.replace('"', "'")
                )?;
            }
            s
        }
        Format::Text => format!("{title}: {}\n{}", verdict(pass), checks_text(&checks)),
    };
    emit(a, &text)?;
    Ok(if pass { Ok(()) } else { Err(Failed) })
}

fn report_ranking(a: &Common, rep: &RankingReport) -> Outcome {
    let text = match a.format {
        Format::Json => format!("{}\n", rep.to_json()),
        Format::Csv => rep.to_csv(),
        Format::Text => format!("ranking: {}\n{}", verdict(rep.pass), rep.to_text()),
    };
    emit(a, &text)?;
    Ok(if rep.pass { Ok(()) } else { Err(Failed) })
}

fn batch_check(rep: BatchReport) -> Check {
    let mut detail = format!("{} instances, {} violations", rep.instances, rep.violations);
    for f in &rep.failures {
        detail.push_str("; ");
        detail.push_str(f);
    }
    Check {
        name: rep.name.clone(),
        pass: rep.pass(),
        detail,
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn verify(a: &Common) -> Outcome {
    let name = a
        .theorem
        .as_deref()
        .ok_or_else(|| anyhow!("missing --theorem"))?;
    let target = parse_target(name)?;
    match target {
        Target::Extremes => {
            let max_m = a.m.unwrap_or(10);
            let ranks = a.r.map_or(vec![3, 4, 5], |r| vec![r]);
            let tol = a.tol.max(1e-9);
            let mut checks = Vec::new();
            for r in ranks {
                checks.extend(verify_closed_forms(r, max_m, tol)?);
            }
            report_checks(a, "closed forms", checks)
        }
        Target::PowerRelation => {
            let max = a.m.unwrap_or(7);
            let check = verify_power_relations(max, a.tol.max(1e-8), a.max_edges)?;
            report_checks(a, "power relation", vec![check])
        }
        Target::Identities => {
            let max = a.m.unwrap_or(6).min(a.max_edges);
            let ranks = a.r.map_or(vec![2, 3, 4], |r| vec![r]);
            let mut checks = Vec::new();
            for r in ranks {
                let mut trees = Vec::new();
                for m in 0..=max {
                    trees.extend(enumerate_supertrees_with_budget(m, r, a.max_edges)?);
                }
                let rep = verify_identities(&trees)?;
                checks.push(Check {
                    name: format!("identities r={r}, m <= {max}"),
                    pass: rep.pass(),
                    detail: format!(
                        "{} supertrees, {} edge recurrences, {} vertex expansions, {} nonzero residuals",
                        rep.supertrees, rep.edge_recurrences, rep.vertex_expansions, rep.nonzero_residuals
                    ),
                });
            }
            report_checks(a, "identities", checks)
        }
        Target::Graft(kind) => {
            let rep = random_grafting_batch(kind, a.count, a.seed)?;
            report_checks(a, "grafting", vec![batch_check(rep)])
        }
        Target::EdgeRelease => {
            let rep = random_edge_release_batch(a.count, a.seed)?;
            report_checks(a, "edge release", vec![batch_check(rep)])
        }
        Target::EdgeMoving => {
            let rep = random_edge_moving_batch(a.count, a.seed)?;
            report_checks(a, "edge moving", vec![batch_check(rep)])
        }
        Target::DiameterTop => {
            let (m, d, r) = (need(a.m, "m")?, need(a.d, "d")?, need(a.r, "r")?);
            let expected = match read_expected(a)? {
                Some(e) => e,
                None => expected_diameter_top(m, d, r)?,
            };
            let rep = verify_ranking_diameter_against(m, d, r, expected, a.max_edges)?;
            report_ranking(a, &rep)
        }
        Target::Minima => {
            let (m, r) = (need(a.m, "m")?, need(a.r, "r")?);
            let expected = match read_expected(a)? {
                Some(e) => e,
                None => expected_minima(m, r)?,
            };
            let rep = verify_minima_against(m, r, expected, a.max_edges)?;
            report_ranking(a, &rep)
        }
    }
}

fn export(a: &Common) -> Outcome {
    let out = a
        .out
        .as_ref()
        .ok_or_else(|| anyhow!("export needs --out"))?;
    let text = if a.file.is_empty() && a.family.is_none() {
        let (m, r) = (need(a.m, "m")?, need(a.r, "r")?);
        let rep = ranking_table(m, a.d, r, a.max_edges)?;
        match a.format {
            Format::Json => format!("{}\n", rep.to_json()),
            Format::Csv => rep.to_csv(),
            Format::Text => rep.to_text(),
        }
    } else {
        let (name, h) = single(a)?;
        format!("{}\n", to_json(&h, Some(&name)))
    };
    write_file(out, &text)?;
    eprintln!("wrote {}", out.display());
    Ok(Ok(()))
}
