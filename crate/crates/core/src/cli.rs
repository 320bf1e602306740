//! The `pqp` command line.
//!
//! Exit codes: 0 when everything checked passed or only information was
//! requested, 1 when a check failed with its hypotheses satisfied, 2 for
//! parse, consistency, resource and usage errors.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::corpus::{self, Family, FamilySpec};
use crate::group::PcGroup;
use crate::oracle::{recompute_and_compare, AssocMode, CayleyTable, DEFAULT_TABLE_BUDGET};
use crate::predicates::{property_report, PredicateOptions, PropertyReport};
use crate::presentation::parse_presentation;
use crate::report::{
    GroupSummary, InputInfo, OracleSummary, ReportBody, RunReport, SubgroupSummary,
};
use crate::subgroup::{
    enumerate_subgroups, min_generators, sample_subgroups, EnumerationBudget, Subgroup,
    SubgroupView,
};
use crate::sweep::default_workers;
use crate::theorems::{Checker, Status, SubgroupMode, Suite, TheoremVerdict, VerifyOptions};
use crate::view::{Elem, GroupView};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pqp",
    version,
    about = "Finite p-groups from power-commutator presentations"
)]
struct Cli {
    /// Print the full JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse, check consistency and print the order.
    Check { file: PathBuf },
    /// Property report.
    Props { file: PathBuf },
    /// Run a theorem suite.
    Verify(VerifyArgs),
    /// Enumerate or sample subgroups and report generator counts.
    Subgroups(SubgroupArgs),
    /// Write a presentation from the built-in families.
    Make(MakeArgs),
    /// Build the Cayley table and compare it with the engine.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    file: PathBuf,
    #[arg(long, default_value = "all")]
    suite: Suite,
    /// Pair sweeps are exhaustive up to this many pairs, otherwise sampled.
    #[arg(long, default_value_t = 729 * 729)]
    max_pairs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    workers: Option<usize>,
}

#[derive(Debug, Args)]
struct SubgroupArgs {
    file: PathBuf,
    #[arg(long, conflicts_with_all = ["sample", "gens"])]
    exhaustive: bool,
    /// Number of random subgroups.
    #[arg(long)]
    sample: Option<usize>,
    /// Random generators per sampled subgroup.
    #[arg(long, default_value_t = 3)]
    gens: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also check the generator bound for subgroups of quasi-powerful groups.
    #[arg(long)]
    bound_check: bool,
}

#[derive(Debug, Args)]
struct MakeArgs {
    family: String,
    #[arg(long)]
    p: u32,
    #[arg(long, conflicts_with = "exps")]
    r: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    exps: Option<Vec<u32>>,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct OracleArgs {
    file: PathBuf,
    /// Check every triple for associativity.
    #[arg(long)]
    full_assoc: bool,
    /// Write the product table to this path.
    #[arg(long)]
    dump: Option<PathBuf>,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<i32, Failure>;

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let json = cli.json;
    let result = match cli.command {
        Command::Check { file } => check(&file, json, out),
        Command::Props { file } => props(&file, json, out),
        Command::Verify(a) => verify(&a, json, out),
        Command::Subgroups(a) => subgroups(&a, json, out),
        Command::Make(a) => make(&a, out),
        Command::Oracle(a) => oracle(&a, json, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ERROR
        }
    }
}

struct Loaded {
    group: PcGroup,
    input: InputInfo,
    label: String,
    /// The input is the shipped order-6561 presentation.
    canonical_6561: bool,
}

fn load(path: &Path) -> Result<Loaded, Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Failure(format!("{}: not UTF-8", path.display())))?;
    let pres =
        parse_presentation(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let canonical = parse_presentation(corpus::PAPER_6561)
        .expect("shipped fixture parses")
        .to_text();
    let canonical_6561 = pres.to_text() == canonical;
    let group = PcGroup::new(pres).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(Loaded {
        group,
        input: InputInfo::of(&name, text.as_bytes()),
        label,
        canonical_6561,
    })
}

/// The known non-regular pair of the shipped order-6561 group.
fn priority_pairs(l: &Loaded) -> Vec<(Elem, Elem)> {
    if l.canonical_6561 {
        vec![(l.group.elem("a^18 c^18 d"), l.group.elem("c"))]
    } else {
        Vec::new()
    }
}

fn emit(out: &mut dyn Write, json: bool, report: &RunReport, text: &str) -> Result<(), Failure> {
    if json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        write!(out, "{text}")?;
        for t in &report.timing {
            writeln!(out, "time {:<12} {:.1} ms", t.phase, t.millis)?;
        }
    }
    Ok(())
}

fn summary_text(s: &GroupSummary) -> String {
    format!(
        "group {}: p = {}, order {}, class {}, exponent {}, d(G) = {}\n",
        s.label, s.prime, s.order, s.nilpotency_class, s.exponent, s.min_generators
    )
}

fn check(path: &Path, json: bool, out: &mut dyn Write) -> CmdResult {
    let start = Instant::now();
    let l = load(path)?;
    let g = &l.group;
    let summary = GroupSummary::of(g, &l.label)?;
    let overlaps = g.consistency().overlaps_checked;
    let body = ReportBody::new("check", l.input.clone(), 0, summary.clone())
        .option("overlaps_checked", overlaps);
    let mut report = RunReport::new(body);
    report.time("build", start.elapsed());
    let text = format!(
        "{}consistent ({overlaps} overlaps checked)\norder {}\n",
        summary_text(&summary),
        g.order()
    );
    emit(out, json, &report, &text)?;
    Ok(EXIT_OK)
}

fn property_text(p: &PropertyReport) -> String {
    let mut s = format!("frattini rank d(Phi) = {}\n", p.frattini_rank);
    for (name, e) in &p.properties {
        let v = match (e.holds, &e.error) {
            (Some(true), _) => "true".to_string(),
            (Some(false), _) => "false".to_string(),
            (None, Some(err)) => format!("undefined ({err})"),
            (None, None) => "undefined".to_string(),
        };
        s.push_str(&format!("{name:<20} {v}\n"));
        if let Some(w) = &e.witness {
            s.push_str(&witness_text(w));
        }
    }
    s
}

fn witness_text(w: &crate::witness::Witness) -> String {
    let mut s = format!("    witness: {}\n", w.note);
    for nw in &w.elements {
        s.push_str(&format!("      {} = {}\n", nw.name, nw.word));
    }
    for (k, v) in &w.parameters {
        s.push_str(&format!("      {k} = {v}\n"));
    }
    s
}

fn props(path: &Path, json: bool, out: &mut dyn Write) -> CmdResult {
    let start = Instant::now();
    let l = load(path)?;
    let g = &l.group;
    let opts = PredicateOptions {
        priority_pairs: priority_pairs(&l),
        ..PredicateOptions::default()
    };
    let summary = GroupSummary::of(g, &l.label)?;
    let built = start.elapsed();
    let start = Instant::now();
    let p = property_report(g, &l.label, &opts)?;
    let mut body = ReportBody::new("props", l.input.clone(), opts.seed, summary.clone())
        .option("exhaustive_order", opts.exhaustive_order)
        .option("sample_pairs", opts.sample_pairs);
    let text = format!("{}{}", summary_text(&summary), property_text(&p));
    body.properties = Some(p);
    let mut report = RunReport::new(body);
    report.time("build", built);
    report.time("properties", start.elapsed());
    emit(out, json, &report, &text)?;
    Ok(EXIT_OK)
}

fn verdict_text(v: &TheoremVerdict) -> String {
    let status = match v.status {
        Status::Holds => "holds",
        Status::Fails => "FAILS",
        Status::PreconditionFailed => "precondition not met",
    };
    let mut s = format!("{:<12} {status}\n", v.id);
    if v.status == Status::PreconditionFailed {
        s.push_str(&format!("    {}\n", v.precondition));
    } else if !v.swept.is_empty() {
        s.push_str(&format!("    swept: {}\n", v.swept));
    }
    for n in &v.notes {
        s.push_str(&format!("    {n}\n"));
    }
    if let Some(w) = &v.witness {
        s.push_str(&witness_text(w));
    }
    s
}

fn verify(a: &VerifyArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let start = Instant::now();
    let l = load(&a.file)?;
    let g = &l.group;
    let summary = GroupSummary::of(g, &l.label)?;
    let built = start.elapsed();
    let opts = VerifyOptions {
        seed: a.seed,
        workers: a.workers.unwrap_or_else(default_workers).max(1),
        max_pairs: a.max_pairs,
        exhaustive_pairs: a.suite == Suite::Paper,
        priority_pairs: priority_pairs(&l),
        ..VerifyOptions::default()
    };
    let checker = Checker::new(g, &l.label, opts.clone())?;
    let timed = checker.run(a.suite)?;
    let mut body = ReportBody::new("verify", l.input.clone(), a.seed, summary.clone())
        .option("suite", a.suite)
        .option("max_pairs", a.max_pairs)
        .option("identity_trials", opts.identity_trials);
    let mut text = summary_text(&summary);
    let mut report_timing = Vec::new();
    for (v, d) in timed {
        text.push_str(&verdict_text(&v));
        report_timing.push((v.id.clone(), d));
        body.verdicts.push(v);
    }
    body.passed = body.verdicts_pass();
    let failed = body
        .verdicts
        .iter()
        .filter(|v| v.status == Status::Fails)
        .count();
    text.push_str(&format!(
        "{} verdicts: {} hold, {failed} fail, {} preconditions not met\n",
        body.verdicts.len(),
        body.verdicts
            .iter()
            .filter(|v| v.status == Status::Holds)
            .count(),
        body.verdicts
            .iter()
            .filter(|v| v.status == Status::PreconditionFailed)
            .count()
    ));
    let passed = body.passed;
    let mut report = RunReport::new(body);
    report.time("build", built);
    for (id, d) in report_timing {
        report.time(&id, d);
    }
    emit(out, json, &report, &text)?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn subgroups(a: &SubgroupArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let start = Instant::now();
    let l = load(&a.file)?;
    let g = &l.group;
    let summary = GroupSummary::of(g, &l.label)?;
    let built = start.elapsed();
    let mode = if a.exhaustive {
        SubgroupMode::Exhaustive
    } else if let Some(n) = a.sample {
        SubgroupMode::Sample {
            count: n,
            gens: a.gens,
            seed: a.seed,
        }
    } else if g.order() <= 729 {
        SubgroupMode::Exhaustive
    } else {
        SubgroupMode::Sample {
            count: 500,
            gens: a.gens,
            seed: a.seed,
        }
    };
    let start = Instant::now();
    let mut s = SubgroupSummary::default();
    let mut record = |h: &Subgroup| -> Result<(), Failure> {
        let d = min_generators(&SubgroupView::new(g, h))?;
        s.subgroups += 1;
        *s.by_order.entry(h.order()).or_default() += 1;
        *s.by_rank.entry(d).or_default() += 1;
        s.max_rank = s.max_rank.max(d);
        Ok(())
    };
    match mode {
        SubgroupMode::Sample { count, gens, seed } => {
            s.mode = format!("sample {count} subgroups on {gens} generators, seed {seed}");
            for h in sample_subgroups(g, count, gens, seed)? {
                record(&h)?;
            }
        }
        _ => {
            s.mode = "exhaustive".into();
            for h in enumerate_subgroups(g, EnumerationBudget::default()) {
                record(&h?)?;
            }
        }
    }
    let swept = start.elapsed();
    let mut body = ReportBody::new("subgroups", l.input.clone(), a.seed, summary.clone())
        .option("mode", &s.mode);
    let mut text = summary_text(&summary);
    text.push_str(&format!(
        "{}: {} subgroups, max d(H) = {}\n",
        s.mode, s.subgroups, s.max_rank
    ));
    for (d, n) in &s.by_rank {
        text.push_str(&format!("  d(H) = {d}: {n}\n"));
    }
    body.subgroups = Some(s);
    let mut bound_time = None;
    if a.bound_check {
        let start = Instant::now();
        let opts = VerifyOptions {
            seed: a.seed,
            subgroups: mode,
            ..VerifyOptions::default()
        };
        let v = Checker::new(g, &l.label, opts)?.subgroup_rank_bound()?;
        text.push_str(&verdict_text(&v));
        body.verdicts.push(v);
        bound_time = Some(start.elapsed());
    }
    body.passed = body.verdicts_pass();
    let passed = body.passed;
    let mut report = RunReport::new(body);
    report.time("build", built);
    report.time("subgroups", swept);
    if let Some(d) = bound_time {
        report.time("bound_check", d);
    }
    emit(out, json, &report, &text)?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn make(a: &MakeArgs, out: &mut dyn Write) -> CmdResult {
    let family: Family = a.family.parse()?;
    let need_r = |what: &str| {
        a.r.ok_or_else(|| Failure(format!("{} needs --r {what}", family.name())))
    };
    let spec = match family {
        Family::Paper6561 | Family::Paper729 | Family::Paper256 => {
            let spec = match family {
                Family::Paper6561 => FamilySpec::paper_6561(),
                Family::Paper729 => FamilySpec::paper_729(),
                _ => FamilySpec::paper_256(),
            };
            if spec.prime != a.p {
                return Err(Failure(format!(
                    "{} is a {}-group, not a {}-group",
                    family.name(),
                    spec.prime,
                    a.p
                )));
            }
            spec
        }
        Family::Cyclic => match (&a.exps, a.r) {
            (Some(e), _) if e.len() == 1 => FamilySpec::cyclic(a.p, e[0]),
            (Some(_), _) => return Err(Failure("cyclic takes a single exponent".into())),
            (None, _) => FamilySpec::cyclic(a.p, need_r("(the exponent e of p^e)")?),
        },
        Family::Abelian => {
            let exps = a
                .exps
                .clone()
                .ok_or_else(|| Failure("abelian needs --exps E1,E2,...".into()))?;
            FamilySpec::abelian(a.p, &exps)
        }
        Family::Extraspecial => FamilySpec::extraspecial(a.p),
        Family::Higman => FamilySpec::higman(a.p, need_r("(the rank)")?),
    };
    let pres = corpus::presentation(&spec)?;
    let text = format!("# {}\n{}", spec.label(), pres.to_text());
    crate::group::PcGroup::new(pres)?;
    match &a.output {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| Failure(format!("{}: {e}", path.display())))?
        }
        None => write!(out, "{text}")?,
    }
    Ok(EXIT_OK)
}

fn oracle(a: &OracleArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let start = Instant::now();
    let l = load(&a.file)?;
    let g = &l.group;
    let summary = GroupSummary::of(g, &l.label)?;
    let t = CayleyTable::build_with_budget(g, DEFAULT_TABLE_BUDGET, default_workers())?;
    let built = start.elapsed();
    let start = Instant::now();
    let latin = t.is_latin_square();
    let assoc = t.check_associativity(if a.full_assoc {
        AssocMode::Full
    } else {
        AssocMode::Auto
    })?;
    let assoc_time = start.elapsed();
    let start = Instant::now();
    let comparison = recompute_and_compare(g, &t)?;
    let compare_time = start.elapsed();
    if let Some(path) = &a.dump {
        t.dump_to_path(path)
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
    }
    let summary_o = OracleSummary {
        latin_square: latin,
        associativity: assoc,
        comparison,
    };
    let mut text = summary_text(&summary);
    text.push_str(&format!(
        "table {0} x {0}, latin square: {latin}\n",
        t.order()
    ));
    let a_r = &summary_o.associativity;
    text.push_str(&format!(
        "associativity: {} triples ({}), {}\n",
        a_r.triples,
        if a_r.exhaustive {
            "all"
        } else {
            "seeded sample"
        },
        if a_r.failure.is_none() {
            "no failure"
        } else {
            "FAILED"
        }
    ));
    text.push_str(&format!(
        "compared {}: {}\n",
        summary_o.comparison.compared.join(", "),
        if summary_o.comparison.is_empty() {
            "empty diff"
        } else {
            "DIFFERENCES"
        }
    ));
    for d in &summary_o.comparison.diff {
        text.push_str(&format!(
            "  {}: engine {} / oracle {}\n",
            d.quantity, d.engine, d.oracle
        ));
    }
    if let Some(path) = &a.dump {
        text.push_str(&format!("table written to {}\n", path.display()));
    }
    let passed = summary_o.passed();
    let mut body = ReportBody::new("oracle", l.input.clone(), 0, summary)
        .option("full_assoc", a.full_assoc)
        .option("dump", a.dump.is_some());
    body.oracle = Some(summary_o);
    body.passed = passed;
    let mut report = RunReport::new(body);
    report.time("build", built);
    report.time("associativity", assoc_time);
    report.time("compare", compare_time);
    emit(out, json, &report, &text)?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}
