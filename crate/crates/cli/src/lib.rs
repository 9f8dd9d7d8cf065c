//! Command-line front end for `helixlab-core`.
//!
//! [`run`] parses arguments, evaluates one subcommand and prints an output
//! document in plain text, JSON or CSV. Exit codes: `0` ok, `1` failed
//! verification or internal error, `2` indeterminate verdict, `3` usage or
//! input error, `4` mutation result outside the catalog.

pub mod output;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};
use helixlab_core::{
    helix_element, parse_sheaf_expr, thread, Collection, Engine, Error,
    MRegularity, RegValue, SheafExpr, Variety, VarietyKind, Verdict, Witness,
};
use serde_json::{json, Value};

use crate::output::{big_json, class_json, rank_cells, rank_json, ranks_json, ubig_json, Doc, Format, Status};

/// Environment variable overriding the default regularity search width.
pub const MAX_WIDTH_ENV: &str = "HELIXLAB_MAX_WIDTH";

#[derive(Parser, Debug)]
#[command(name = "helixlab", version, about = "Exact cohomology, mutations and regularity on P^n and odd quadrics")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Variety: P<n> or Q<n> with n odd.
    #[arg(long, global = true)]
    variety: Option<String>,
    /// Width of regularity searches (default 6(n+1)).
    #[arg(long, global = true)]
    max_width: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Cohomology table h^q(X, F).
    Cohom { expr: String },
    /// Ext table dim Ext^q(A, B).
    Ext { source: String, target: String },
    /// Right mutation R_B A of an exceptional pair (A, B), or L_A B with --left.
    Mutate {
        #[arg(long)]
        left: bool,
        a: String,
        b: String,
    },
    /// Helix elements E_from, ..., E_to.
    Helix {
        #[arg(allow_negative_numbers = true)]
        from: i64,
        #[arg(allow_negative_numbers = true)]
        to: Option<i64>,
    },
    /// The thread (E_i, ..., E_{i+n}).
    Thread {
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        thread: i64,
    },
    /// Right (or left) dual basis of a thread or of the listed collection.
    DualBasis {
        #[arg(long, allow_negative_numbers = true)]
        thread: Option<i64>,
        #[arg(long)]
        left: bool,
        members: Vec<String>,
    },
    /// Exceptionality of a thread or of the listed collection.
    Check {
        #[arg(long, allow_negative_numbers = true)]
        thread: Option<i64>,
        #[arg(long)]
        strong: bool,
        members: Vec<String>,
    },
    /// Beilinson-type E_1 page of F along a thread.
    E1 {
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        thread: i64,
        expr: String,
    },
    /// Eilenberg-Moore-type E_1 page abutting to Ext(G, F).
    EmE1 {
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        thread: i64,
        f: String,
        g: String,
    },
    /// Regularity with respect to the standard collection, or an m-regularity test with --m.
    Reg {
        expr: String,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
    },
    /// Castelnuovo-Mumford regularity (of the pushforward to P^{n+1} on a quadric).
    CmReg { expr: String },
    /// Resolution of an m-regular sheaf by the helix (m defaults to its regularity).
    Resolution {
        expr: String,
        #[arg(long, allow_negative_numbers = true)]
        m: Option<i64>,
    },
    /// Both regularities of a sheaf on a quadric and the bounds between them.
    Compare { expr: String },
    /// Run the reproduction suite: all, a criterion number, or a slug.
    VerifyPaper {
        #[arg(default_value = "all")]
        scope: String,
    },
}

/// Runs the command line on the process streams and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line with explicit output streams.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let format = cli.format;
    let (doc, diagnostic) = execute(cli, echo.join(" "));
    if let Some(d) = diagnostic {
        let _ = writeln!(err, "helixlab: {}", d);
    }
    let _ = out.write_all(doc.render(format).as_bytes());
    let _ = out.flush();
    doc.status.exit_code()
}

/// Exit code of a core error.
fn error_code(e: &Error) -> i32 {
    match e {
        Error::NotRepresentable { .. } => 4,
        Error::Indeterminate(_) | Error::SearchExhausted { .. } => 2,
        Error::Syntax { .. }
        | Error::InvalidVariety(_)
        | Error::NotInCatalog(_)
        | Error::Overflow(_)
        | Error::VarietyMismatch
        | Error::NotExceptionalPair(_)
        | Error::NotMRegular(_)
        | Error::WrongVariety(_) => 3,
        Error::InternalInconsistency(_) | Error::RecursionCap | Error::OrthogonalityCheckFailed(_) => 1,
    }
}

/// Input problems detected by the front end itself.
struct Usage(String);

enum Failure {
    Core(Error),
    Usage(Usage),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Core(e)
    }
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Failure {
        Failure::Usage(u)
    }
}

struct Ctx {
    variety: Option<Variety>,
    max_width: Option<u32>,
}

impl Ctx {
    fn variety(&self) -> Result<Variety, Usage> {
        self.variety.ok_or_else(|| Usage("--variety is required for this command".to_string()))
    }

    fn engine(&self) -> Result<Engine, Usage> {
        Ok(Engine::new(self.variety()?))
    }

    fn parse(&self, text: &str) -> Result<SheafExpr, Failure> {
        Ok(parse_sheaf_expr(text, self.variety()?)?)
    }

    fn parse_all(&self, texts: &[String]) -> Result<Vec<SheafExpr>, Failure> {
        texts.iter().map(|t| self.parse(t)).collect()
    }

    fn collection(&self, thread_index: Option<i64>, members: &[String]) -> Result<Collection, Failure> {
        let v = self.variety()?;
        match (thread_index, members.is_empty()) {
            (Some(i), true) => Ok(thread(v, i)?),
            (None, false) => Ok(Collection::new(v, self.parse_all(members)?)?),
            (None, true) => Ok(thread(v, 0)?),
            (Some(_), false) => Err(Usage("give either --thread or explicit members, not both".to_string()).into()),
        }
    }
}

/// The search width: the flag, then the environment, then the default.
fn resolve_width(flag: Option<u32>) -> Result<Option<u32>, Usage> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(MAX_WIDTH_ENV) {
        Ok(s) => s
            .trim()
            .parse::<u32>()
            .map(Some)
            .map_err(|_| Usage(format!("{} must be a non-negative integer, got {:?}", MAX_WIDTH_ENV, s))),
        Err(_) => Ok(None),
    }
}

fn execute(cli: Cli, echo: String) -> (Doc, Option<String>) {
    let mut doc = Doc::new(echo, cli.variety.clone());
    let prepared = (|| -> Result<Ctx, Failure> {
        let variety = match &cli.variety {
            Some(s) => Some(s.parse::<Variety>()?),
            None => None,
        };
        Ok(Ctx { variety, max_width: resolve_width(cli.max_width)? })
    })();
    let result = prepared.and_then(|ctx| {
        if let Some(v) = ctx.variety {
            doc.variety = Some(v.to_string());
        }
        dispatch(&ctx, cli.command, &mut doc)
    });
    match result {
        Ok(()) => (doc, None),
        Err(f) => {
            let (code, message) = match &f {
                Failure::Core(e) => (error_code(e), e.to_string()),
                Failure::Usage(Usage(m)) => (3, m.clone()),
            };
            if let Failure::Core(Error::NotRepresentable { class, .. }) = &f {
                doc.field("class", class_json(class));
                doc.line(format!("class = {}", class));
            }
            doc.field("error", json!(message));
            doc.line(format!("error: {}", message));
            doc.csv_header(&["error"]);
            doc.csv_row(vec![message.clone()]);
            doc.mark(Status::Error(code));
            (doc, Some(message))
        }
    }
}

fn dispatch(ctx: &Ctx, command: Command, doc: &mut Doc) -> Result<(), Failure> {
    match command {
        Command::Cohom { expr } => cohom(ctx, &expr, doc),
        Command::Ext { source, target } => ext(ctx, &source, &target, doc),
        Command::Mutate { left, a, b } => mutate(ctx, left, &a, &b, doc),
        Command::Helix { from, to } => helix(ctx, from, to.unwrap_or(from), doc),
        Command::Thread { thread: i } => {
            let c = thread(ctx.variety()?, i)?;
            members_doc(doc, "thread", "E", i, &c.members);
            Ok(())
        }
        Command::DualBasis { thread: i, left, members } => dual_basis(ctx, i, left, &members, doc),
        Command::Check { thread: i, strong, members } => check(ctx, i, strong, &members, doc),
        Command::E1 { thread: i, expr } => e1(ctx, i, &expr, None, doc),
        Command::EmE1 { thread: i, f, g } => e1(ctx, i, &f, Some(&g), doc),
        Command::Reg { expr, m } => reg(ctx, &expr, m, doc),
        Command::CmReg { expr } => cm_reg(ctx, &expr, doc),
        Command::Resolution { expr, m } => resolution(ctx, &expr, m, doc),
        Command::Compare { expr } => compare(ctx, &expr, doc),
        Command::VerifyPaper { scope } => verify_paper(&scope, doc),
    }
}

fn table_doc(doc: &mut Doc, key: &str, label: &str, ranks: &[helixlab_core::RankValue], chi: &num_bigint::BigInt) {
    doc.field(key, ranks_json(ranks));
    doc.field("chi", big_json(chi));
    doc.csv_header(&["degree", "rank_lo", "rank_hi"]);
    for (q, r) in ranks.iter().enumerate() {
        doc.line(format!("{}^{} = {}", label, q, r));
        let [lo, hi] = rank_cells(r);
        doc.csv_row(vec![q.to_string(), lo, hi]);
    }
    doc.line(format!("chi = {}", chi));
    if ranks.iter().any(|r| !r.is_exact()) {
        doc.mark(Status::Indeterminate);
    }
}

fn cohom(ctx: &Ctx, expr: &str, doc: &mut Doc) -> Result<(), Failure> {
    let f = ctx.parse(expr)?;
    let t = ctx.engine()?.cohomology_table(&f)?;
    doc.field("sheaf", json!(f.to_string()));
    doc.line(format!("sheaf: {}", f));
    table_doc(doc, "h", "h", &t.ranks, &t.chi);
    Ok(())
}

fn ext(ctx: &Ctx, a: &str, b: &str, doc: &mut Doc) -> Result<(), Failure> {
    let (a, b) = (ctx.parse(a)?, ctx.parse(b)?);
    let t = ctx.engine()?.ext_table(&a, &b)?;
    doc.field("source", json!(a.to_string()));
    doc.field("target", json!(b.to_string()));
    doc.line(format!("source: {}", a));
    doc.line(format!("target: {}", b));
    table_doc(doc, "ext", "ext", &t.ranks, &t.chi);
    Ok(())
}

fn mutate(ctx: &Ctx, left: bool, a: &str, b: &str, doc: &mut Doc) -> Result<(), Failure> {
    let (a, b) = (ctx.parse(a)?, ctx.parse(b)?);
    let e = ctx.engine()?;
    let (name, r) = if left {
        (format!("L_({}) {}", a, b), e.left_mutation(&a, &b)?)
    } else {
        (format!("R_({}) {}", b, a), e.right_mutation(&a, &b)?)
    };
    let class = e.k0_class(&r)?;
    doc.field("side", json!(if left { "left" } else { "right" }));
    doc.field("result", json!(r.to_string()));
    doc.field("class", class_json(&class));
    doc.line(format!("{} = {}", name, r));
    doc.line(format!("class = {}", class));
    doc.csv_header(&["side", "result"]);
    doc.csv_row(vec![if left { "left" } else { "right" }.to_string(), r.to_string()]);
    Ok(())
}

/// A list of sheaves labelled `<prefix>_<start + k>`.
fn members_doc(doc: &mut Doc, key: &str, prefix: &str, start: i64, members: &[SheafExpr]) {
    doc.field(key, Value::Array(members.iter().map(|m| json!(m.to_string())).collect()));
    doc.csv_header(&["index", "sheaf"]);
    for (k, m) in members.iter().enumerate() {
        let idx = start + k as i64;
        doc.line(format!("{}_{} = {}", prefix, idx, m));
        doc.csv_row(vec![idx.to_string(), m.to_string()]);
    }
}

fn helix(ctx: &Ctx, from: i64, to: i64, doc: &mut Doc) -> Result<(), Failure> {
    if to < from {
        return Err(Usage(format!("empty helix range {}..{}", from, to)).into());
    }
    if to - from > 10_000 {
        return Err(Usage("helix ranges are limited to 10000 elements".to_string()).into());
    }
    let v = ctx.variety()?;
    let members = (from..=to).map(|i| helix_element(v, i)).collect::<Result<Vec<_>, _>>()?;
    members_doc(doc, "helix", "E", from, &members);
    Ok(())
}

fn dual_basis(ctx: &Ctx, i: Option<i64>, left: bool, members: &[String], doc: &mut Doc) -> Result<(), Failure> {
    let c = ctx.collection(i, members)?;
    let e = ctx.engine()?;
    let d = if left { e.left_dual_basis(&c)? } else { e.right_dual_basis(&c)? };
    doc.field("side", json!(if left { "left" } else { "right" }));
    doc.field("source", Value::Array(c.members.iter().map(|m| json!(m.to_string())).collect()));
    members_doc(doc, "dual_basis", "F", 0, &d.members);
    Ok(())
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::Indeterminate => "indeterminate",
    }
}

fn check(ctx: &Ctx, i: Option<i64>, strong: bool, members: &[String], doc: &mut Doc) -> Result<(), Failure> {
    let c = ctx.collection(i, members)?;
    let e = ctx.engine()?;
    let rep = if strong { e.check_strong_exceptional(&c)? } else { e.check_exceptional(&c)? };
    let issue = |x: &helixlab_core::ExtIssue| {
        json!({ "source": x.source, "target": x.target, "degree": x.degree, "rank": rank_json(&x.rank) })
    };
    doc.field("members", Value::Array(c.members.iter().map(|m| json!(m.to_string())).collect()));
    doc.field("strong", json!(strong));
    doc.field("verdict", json!(verdict_label(rep.verdict)));
    doc.field("violations", Value::Array(rep.violations.iter().map(issue).collect()));
    doc.field("undecided", Value::Array(rep.undecided.iter().map(issue).collect()));
    doc.line(format!("{} = {}", if strong { "strongly exceptional" } else { "exceptional" }, verdict_label(rep.verdict)));
    doc.csv_header(&["kind", "source", "target", "degree", "rank_lo", "rank_hi"]);
    for (kind, list) in [("violation", &rep.violations), ("undecided", &rep.undecided)] {
        for x in list {
            doc.line(format!(
                "{}: Ext^{}({}, {}) = {}",
                kind, x.degree, c.members[x.source], c.members[x.target], x.rank
            ));
            let [lo, hi] = rank_cells(&x.rank);
            doc.csv_row(vec![kind.to_string(), x.source.to_string(), x.target.to_string(), x.degree.to_string(), lo, hi]);
        }
    }
    if rep.verdict == Verdict::Indeterminate {
        doc.mark(Status::Indeterminate);
    }
    Ok(())
}

fn e1(ctx: &Ctx, i: i64, f: &str, g: Option<&str>, doc: &mut Doc) -> Result<(), Failure> {
    let f = ctx.parse(f)?;
    let e = ctx.engine()?;
    let grid = match g {
        None => e.beilinson_e1(i, &f)?,
        Some(g) => e.em_e1(i, &f, &ctx.parse(g)?)?,
    };
    doc.field("thread", json!(i));
    doc.field("sheaf", json!(f.to_string()));
    doc.line(format!("thread: {}", i));
    doc.line(format!("sheaf: {}", f));
    if let Some(s) = &grid.source {
        doc.field("source", json!(s.to_string()));
        doc.line(format!("source: {}", s));
    }
    let cells: Vec<Value> = grid
        .entries
        .iter()
        .map(|x| json!({ "p": x.p, "q": x.q, "rank": rank_json(&x.rank), "factor": x.factor.to_string() }))
        .collect();
    doc.field("grid", Value::Array(cells));
    doc.csv_header(&["p", "q", "rank_lo", "rank_hi", "factor"]);
    for x in &grid.entries {
        let [lo, hi] = rank_cells(&x.rank);
        doc.csv_row(vec![x.p.to_string(), x.q.to_string(), lo, hi, x.factor.to_string()]);
        if !x.rank.is_zero() {
            doc.line(format!("E1[{}, {}] = {} x {}", x.p, x.q, x.rank, x.factor));
        }
    }
    if grid.is_exact() {
        if grid.source.is_none() {
            if let Some(sum) = e.grid_k0_sum(&grid)? {
                doc.field("k0_sum", class_json(&sum));
                doc.line(format!("k0 sum = {}", sum));
            }
        } else if let Some(chi) = grid.alternating_rank_sum() {
            doc.field("chi", big_json(&chi));
            doc.line(format!("chi = {}", chi));
        }
    } else {
        doc.mark(Status::Indeterminate);
    }
    Ok(())
}

fn witness_json(w: &Witness) -> Value {
    json!({ "p": w.p, "q": w.q, "object": w.object.to_string(), "rank": rank_json(&w.rank) })
}

fn witnesses_doc(doc: &mut Doc, f: &SheafExpr, ws: &[Witness]) {
    doc.field("witnesses", Value::Array(ws.iter().map(witness_json).collect()));
    for w in ws {
        doc.line(format!("witness: Ext^{}({}, {}) = {} (p = {})", w.q, w.object, f, w.rank, w.p));
    }
}

/// Records a regularity value; anything but `Exact` is indeterminate.
fn reg_value_doc(doc: &mut Doc, key: &str, label: &str, v: RegValue) {
    match v {
        RegValue::Exact(m) => {
            doc.field(key, json!(m));
            doc.line(format!("{} = {}", label, m));
            doc.csv_row(vec![label.to_string(), m.to_string()]);
        }
        RegValue::Indeterminate { lo, hi } => {
            doc.field(key, json!({ "lo": lo, "hi": hi }));
            doc.line(format!("{} = {}..{}", label, lo, hi));
            doc.csv_row(vec![label.to_string(), format!("{}..{}", lo, hi)]);
            doc.mark(Status::Indeterminate);
        }
        RegValue::NotFoundBelow(m) => {
            doc.field(key, json!({ "not_found_below": m }));
            doc.line(format!("{} <= {} (regular at the bottom of the search window)", label, m));
            doc.csv_row(vec![label.to_string(), format!("<={}", m)]);
            doc.mark(Status::Indeterminate);
        }
    }
}

fn width(ctx: &Ctx) -> Option<u32> {
    ctx.max_width
}

fn reg(ctx: &Ctx, expr: &str, m: Option<i64>, doc: &mut Doc) -> Result<(), Failure> {
    let f = ctx.parse(expr)?;
    let e = ctx.engine()?;
    doc.field("sheaf", json!(f.to_string()));
    doc.line(format!("sheaf: {}", f));
    doc.csv_header(&["key", "value"]);
    if let Some(m) = m {
        let ans = e.is_m_regular(&f, m)?;
        let label = verdict_label(ans.verdict());
        doc.field("m", json!(m));
        doc.field("regular", json!(label));
        doc.line(format!("{}-regular = {}", m, label));
        doc.csv_row(vec!["m".into(), m.to_string()]);
        doc.csv_row(vec!["regular".into(), label.into()]);
        match ans {
            MRegularity::Yes => witnesses_doc(doc, &f, &[]),
            MRegularity::No(w) => witnesses_doc(doc, &f, &w),
            MRegularity::Indeterminate(w) => {
                witnesses_doc(doc, &f, &w);
                doc.mark(Status::Indeterminate);
            }
        }
        return Ok(());
    }
    let rep = e.reg_sigma(&f, width(ctx))?;
    reg_value_doc(doc, "reg", "reg", rep.value);
    if let (Some(l), Some(r)) = (rep.lambda, rep.remainder) {
        doc.field("lambda", json!(l));
        doc.field("remainder", json!(r));
        doc.line(format!("lambda = {}, r = {}", l, r));
    }
    witnesses_doc(doc, &f, &rep.witnesses);
    Ok(())
}

fn cm_reg(ctx: &Ctx, expr: &str, doc: &mut Doc) -> Result<(), Failure> {
    let f = ctx.parse(expr)?;
    let e = ctx.engine()?;
    let (kind, v) = match ctx.variety()?.kind() {
        VarietyKind::ProjectiveSpace => ("cm", e.cm_regularity(&f, width(ctx))?),
        VarietyKind::OddQuadric => ("cm_pushforward", e.cm_regularity_pushforward(&f, width(ctx))?),
    };
    doc.field("sheaf", json!(f.to_string()));
    doc.field("kind", json!(kind));
    doc.line(format!("sheaf: {}", f));
    doc.csv_header(&["key", "value"]);
    reg_value_doc(doc, "reg", "cm_reg", v);
    Ok(())
}

fn resolution(ctx: &Ctx, expr: &str, m: Option<i64>, doc: &mut Doc) -> Result<(), Failure> {
    let f = ctx.parse(expr)?;
    let e = ctx.engine()?;
    let m = match m {
        Some(m) => m,
        None => match e.reg_sigma(&f, width(ctx))?.value {
            RegValue::Exact(m) => m,
            other => return Err(Error::Indeterminate(format!("regularity of {} is {:?}", f, other)).into()),
        },
    };
    let terms = e.resolution_terms(&f, m)?;
    doc.field("sheaf", json!(f.to_string()));
    doc.field("m", json!(m));
    doc.field(
        "resolution",
        Value::Array(
            terms
                .iter()
                .map(|t| json!({ "p": t.p, "mult": ubig_json(&t.mult), "sheaf": t.sheaf.to_string() }))
                .collect(),
        ),
    );
    doc.line(format!("sheaf: {}", f));
    doc.line(format!("m = {}", m));
    doc.csv_header(&["p", "mult", "sheaf"]);
    for t in &terms {
        doc.line(format!("L_{} = {} x {}", t.p, t.mult, t.sheaf));
        doc.csv_row(vec![t.p.to_string(), t.mult.to_string(), t.sheaf.to_string()]);
    }
    Ok(())
}

fn compare(ctx: &Ctx, expr: &str, doc: &mut Doc) -> Result<(), Failure> {
    let f = ctx.parse(expr)?;
    let c = ctx.engine()?.compare_quadric_regularity(&f, width(ctx))?;
    doc.field("sheaf", json!(f.to_string()));
    doc.field("reg", json!({ "sigma": c.reg_sigma, "cm": c.reg_cm }));
    doc.field("lower", json!(c.lower));
    doc.field("upper", json!(c.upper));
    doc.field("holds", json!(c.holds));
    doc.line(format!("sheaf: {}", f));
    doc.csv_header(&["key", "value"]);
    for (k, v) in [
        ("reg_sigma", c.reg_sigma.to_string()),
        ("reg_cm", c.reg_cm.to_string()),
        ("lower", c.lower.to_string()),
        ("upper", c.upper.to_string()),
        ("holds", c.holds.to_string()),
    ] {
        doc.line(format!("{} = {}", k, v));
        doc.csv_row(vec![k.to_string(), v]);
    }
    Ok(())
}

fn verify_paper(scope: &str, doc: &mut Doc) -> Result<(), Failure> {
    let ids = verify::scope_ids(scope).ok_or_else(|| {
        let slugs: Vec<&str> = verify::CRITERIA.iter().map(|(s, _)| *s).collect();
        Usage(format!("unknown scope {:?}; use all, 1..10, or one of {}", scope, slugs.join(", ")))
    })?;
    let reports = verify::run_ids(&ids);
    let passed = reports.iter().filter(|r| r.passed()).count();
    doc.field("criteria", Value::Array(reports.iter().map(|r| r.to_json()).collect()));
    doc.field("passed", json!(passed));
    doc.field("total", json!(reports.len()));
    doc.csv_header(&["id", "slug", "passed", "checks", "failures"]);
    for r in &reports {
        for l in r.to_plain().lines() {
            doc.line(l);
        }
        doc.csv_row(vec![
            r.id.to_string(),
            r.slug.to_string(),
            r.passed().to_string(),
            r.checks.to_string(),
            r.failures.len().to_string(),
        ]);
    }
    doc.line(format!("summary: {} of {} criteria pass", passed, reports.len()));
    if passed != reports.len() {
        doc.mark(Status::Error(1));
    }
    Ok(())
}
