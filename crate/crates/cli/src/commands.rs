//! One handler per subcommand.

use std::collections::BTreeMap;
use std::sync::Arc;

use clap::Args;
use omegalarge::formula::{
    parse, psi_by_name, weakly_pi04_transform, Compiled, Pi03Sentence, PrefixSentence,
    RtLikeStatement, SecondOrderParam, Theta,
};
use omegalarge::grouping::{find_grouping, grouping_violation, GroupingWitness};
use omegalarge::largeness::{
    check_large, decompose_mixed, fuse, is_minimal, max_of_minimal, minimal_interval_size,
    minimal_large_interval, pigeonhole_extract, t_apart, verify_certificate, Certificate,
    LargenessSpec, Mode,
};
use omegalarge::lowerbound::{
    level_parity, verify_lower_bound, CanonicalBlocks, CanonicalTree, LowerBoundMode,
    LowerBoundStatus,
};
use omegalarge::nat::nat;
use omegalarge::ramsey::{
    ads_extract as run_ads, ads_q_coloring, bounds_table, em_extract as run_em, is_large_gamma,
    is_n_dense, successor_registry, to_tsv, Answer, DensityMode, DensityParams, EmConfig,
    FailureKind,
};
use omegalarge::{Budget, ColoringTable, Error, FinSet, Outcome};
use serde_json::{json, Value};

use crate::input::{self, cert_json, set_json, shorten};
use crate::report::{self, Failure, Report, Status};
use crate::{ColoringArgs, Globals, SearchMode, ThetaArgs, VerifyMode};

type Run = report::Outcome;

fn theta_of(t: &ThetaArgs) -> Result<Arc<Pi03Sentence>, Failure> {
    Ok(Arc::new(input::sentence(t)?))
}

#[derive(Args)]
pub struct CheckArgs {
    /// Set as LO..HI, inline JSON, or a file.
    #[arg(long)]
    set: String,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[command(flatten)]
    theta: ThetaArgs,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: SearchMode,
    /// Replay this certificate instead of searching.
    #[arg(long)]
    cert: Option<String>,
    /// Write the certificate found here.
    #[arg(long)]
    cert_out: Option<String>,
}

pub fn large_check(a: CheckArgs, g: &Globals) -> Run {
    let theta = theta_of(&a.theta)?;
    let x = input::read_set(&a.set, &input::floor(g, Some(&theta)))?;
    let spec = LargenessSpec::new(a.n, a.k, theta.clone());
    let what = format!("ω^{}·{}-large({})", a.n, a.k, theta.describe());
    if let Some(src) = &a.cert {
        let cert = Certificate::from_json(&input::read_text(src)?)
            .map_err(|e| Failure::Usage(format!("{src}: {e}")))?;
        let ok = verify_certificate(&x, &cert, &spec, g.paranoid)?;
        return Ok(Report::new(Status::from_bool(ok))
            .field("valid", ok)
            .line(format!(
                "certificate {} for {what}",
                if ok { "accepted" } else { "rejected" }
            )));
    }
    let mode = match a.mode {
        SearchMode::Exhaustive => Mode::Exhaustive,
        SearchMode::Greedy => Mode::Greedy,
    };
    match check_large(&x, &spec, mode)? {
        Some(cert) => {
            if let Some(path) = &a.cert_out {
                input::write_text(path, &cert.to_json())?;
            }
            Ok(Report::new(Status::True)
                .field("large", true)
                .field("certificate", cert_json(&cert))
                .line(format!("{} is {what}", shorten(&x)))
                .line(cert.to_json()))
        }
        None if matches!(mode, Mode::Exhaustive) => Ok(Report::new(Status::False)
            .field("large", false)
            .line(format!("{} is not {what}", shorten(&x)))),
        None => Ok(Report::new(Status::Inconclusive)
            .field("reason", "greedy search found no certificate")
            .line(format!(
                "greedy search found no certificate that {} is {what}",
                shorten(&x)
            ))),
    }
}

#[derive(Args)]
pub struct MinimalArgs {
    #[arg(long, default_value = "3")]
    base: String,
    #[arg(long)]
    n: usize,
    /// List the elements, up to --budget of them.
    #[arg(long)]
    materialize: bool,
    /// Instead, decide whether this set is minimal ω^n-large.
    #[arg(long)]
    set: Option<String>,
}

pub fn large_minimal(a: MinimalArgs, g: &Globals) -> Run {
    if let Some(src) = &a.set {
        let x = input::read_set(src, &input::floor(g, None))?;
        let ok = is_minimal(&x, a.n)?;
        return Ok(Report::new(Status::from_bool(ok))
            .field("minimal", ok)
            .line(format!(
                "{} is {}minimal ω^{}-large",
                shorten(&x),
                if ok { "" } else { "not " },
                a.n
            )));
    }
    let base = input::read_nat(&a.base, "--base")?;
    let size = minimal_interval_size(&base, a.n);
    let max = max_of_minimal(&base, a.n);
    let mut r = Report::new(Status::True)
        .field("base", base.to_string())
        .field("exponent", a.n)
        .field("cardinality", size.to_string())
        .field("max", max.to_string())
        .line(format!(
            "base {base}\nexponent {}\ncardinality {size}\nmax {max}",
            a.n
        ));
    if a.materialize {
        let x = minimal_large_interval(&base, a.n, &nat(g.budget))?;
        r = r
            .field("elements", set_json(&x))
            .line(x.to_lines().trim_end());
    }
    Ok(r)
}

#[derive(Args)]
pub struct PigeonholeArgs {
    #[arg(long)]
    set: String,
    #[command(flatten)]
    coloring: ColoringArgs,
    /// Target exponent.
    #[arg(long, default_value_t = 1)]
    b: usize,
    #[command(flatten)]
    theta: ThetaArgs,
    /// Fail instead of falling back to a direct search of the color classes.
    #[arg(long)]
    strict: bool,
}

pub fn large_pigeonhole(a: PigeonholeArgs, g: &Globals) -> Run {
    let theta = theta_of(&a.theta)?;
    let x = input::read_set(&a.set, &input::floor(g, Some(&theta)))?;
    let f = input::coloring(&a.coloring, g, &x, 1)?;
    let out = pigeonhole_extract(&x, &f, a.b, theta.clone(), g.sparsity, a.strict)?;
    let spec = LargenessSpec::new(a.b, 1, theta);
    if !verify_certificate(&out.set, &out.certificate, &spec, g.paranoid)? {
        return Err(Error::Domain("extracted set failed its own certificate".into()).into());
    }
    let mut r = Report::new(Status::True)
        .field("set", set_json(&out.set))
        .field("color", out.color)
        .field("route", out.route.to_string())
        .field("certificate", cert_json(&out.certificate))
        .line(format!(
            "color {} via {}: {}",
            out.color,
            out.route,
            shorten(&out.set)
        ));
    if let Some(why) = &out.counting_failure {
        r = r
            .field("counting_failure", why.as_str())
            .line(format!("counting step failed: {why}"));
    }
    Ok(r)
}

#[derive(Args)]
pub struct DecomposeArgs {
    #[arg(long)]
    set: String,
    /// Exponent of the pieces.
    #[arg(long)]
    n: usize,
    /// Exponent of the set of piece minima.
    #[arg(long)]
    m: usize,
    #[command(flatten)]
    theta: ThetaArgs,
}

pub fn large_decompose(a: DecomposeArgs, g: &Globals) -> Run {
    let theta = theta_of(&a.theta)?;
    let x = input::read_set(&a.set, &input::floor(g, Some(&theta)))?;
    let parts = decompose_mixed(&x, a.n, a.m, theta)?;
    let mut r = Report::new(Status::True).field(
        "blocks",
        parts
            .iter()
            .map(|(s, c)| json!({"set": set_json(s), "certificate": cert_json(c)}))
            .collect::<Vec<_>>(),
    );
    for (s, _) in &parts {
        r = r.line(shorten(s));
    }
    Ok(r)
}

#[derive(Args)]
pub struct FuseArgs {
    /// JSON array of sets.
    #[arg(long)]
    blocks: String,
    /// Exponent of each block.
    #[arg(long)]
    a: usize,
    /// One less than the exponent of the set of block maxima.
    #[arg(long)]
    b: usize,
    #[arg(long, default_value = "top")]
    theta: String,
    #[arg(long)]
    cert_out: Option<String>,
}

pub fn large_fuse(a: FuseArgs, g: &Globals) -> Run {
    let theta = theta_of(&ThetaArgs {
        theta: a.theta.clone(),
        a: "0".into(),
        param: None,
    })?;
    let blocks = input::read_blocks(&a.blocks, &input::floor(g, Some(&theta)))?;
    let (set, cert) = fuse(&blocks, a.a, a.b, theta)?;
    if let Some(path) = &a.cert_out {
        input::write_text(path, &cert.to_json())?;
    }
    Ok(Report::new(Status::True)
        .field("set", set_json(&set))
        .field("certificate", cert_json(&cert))
        .line(shorten(&set))
        .line(cert.to_json()))
}

#[derive(Args)]
pub struct ApartArgs {
    /// The lower set.
    #[arg(long)]
    left: String,
    /// The upper set.
    #[arg(long)]
    right: String,
    #[command(flatten)]
    theta: ThetaArgs,
}

pub fn apart(a: ApartArgs, g: &Globals) -> Run {
    let theta = theta_of(&a.theta)?;
    let floor = input::floor(g, Some(&theta));
    let x = input::read_set(&a.left, &floor)?;
    let y = input::read_set(&a.right, &floor)?;
    let ok = t_apart(&x, &y, theta.as_ref())?;
    Ok(Report::new(Status::from_bool(ok))
        .field("apart", ok)
        .line(format!("{}apart", if ok { "" } else { "not " })))
}

#[derive(Args)]
pub struct GroupingFindArgs {
    #[arg(long)]
    set: String,
    #[command(flatten)]
    coloring: ColoringArgs,
    /// Largeness of blocks: card:M, large:N[:K] or plain:N[:K].
    #[arg(long)]
    l0: String,
    /// Largeness of transversals, same syntax.
    #[arg(long)]
    l1: String,
    #[command(flatten)]
    theta: ThetaArgs,
    #[arg(long)]
    witness_out: Option<String>,
}

pub fn grouping_find(a: GroupingFindArgs, g: &Globals) -> Run {
    let theta = theta_of(&a.theta)?;
    let z = input::read_set(&a.set, &input::floor(g, Some(&theta)))?;
    let f = input::coloring(&a.coloring, g, &z, 2)?;
    let l0 = input::lspec(&a.l0, &theta)?;
    let l1 = input::lspec(&a.l1, &theta)?;
    let mut budget = Budget::new(g.budget);
    match find_grouping(&z, &f, &l0, &l1, theta.as_ref(), &mut budget)? {
        Outcome::Found(w) => {
            let text = serde_json::to_string_pretty(&w.to_json_value()).expect("plain json");
            if let Some(path) = &a.witness_out {
                input::write_text(path, &text)?;
            }
            let mut r = Report::new(Status::True).field("witness", w.to_json_value());
            for (i, b) in w.blocks.iter().enumerate() {
                r = r.line(format!("block {i}: {}", shorten(b)));
            }
            Ok(r)
        }
        Outcome::Absent => Ok(Report::new(Status::False).line("no grouping exists")),
        Outcome::Exhausted(why) => Ok(Report::new(Status::Inconclusive)
            .field("reason", why.as_str())
            .line(format!("inconclusive: {why}"))),
    }
}

#[derive(Args)]
pub struct GroupingCheckArgs {
    #[arg(long)]
    witness: String,
    #[arg(long)]
    l0: String,
    #[arg(long)]
    l1: String,
    #[command(flatten)]
    theta: ThetaArgs,
}

pub fn grouping_check(a: GroupingCheckArgs, _g: &Globals) -> Run {
    let theta = theta_of(&a.theta)?;
    let w = GroupingWitness::from_json_str(&input::read_text(&a.witness)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", a.witness)))?;
    let l0 = input::lspec(&a.l0, &theta)?;
    let l1 = input::lspec(&a.l1, &theta)?;
    match grouping_violation(&w, &l0, &l1, theta.as_ref())? {
        None => Ok(Report::new(Status::True)
            .field("valid", true)
            .line("grouping accepted")),
        Some(v) => Ok(Report::new(Status::False)
            .field("valid", false)
            .field("violation", v.to_string())
            .line(format!("grouping rejected: {v}"))),
    }
}

/// `ramsey:N:K`, `em`, or `PSI:N:K` for a named predicate or `formula:TEXT`.
fn statement(text: &str) -> Result<RtLikeStatement, Failure> {
    if text == "em" {
        return Ok(RtLikeStatement::erdos_moser());
    }
    let bad = || Failure::Usage(format!("{text}: expected em, ramsey:N:K or PREDICATE:N:K"));
    let mut parts = text.rsplitn(3, ':');
    let (Some(k), Some(n), Some(name)) = (parts.next(), parts.next(), parts.next()) else {
        return Err(bad());
    };
    let (n, k) = (n.parse().map_err(|_| bad())?, k.parse().map_err(|_| bad())?);
    if name == "ramsey" {
        return Ok(RtLikeStatement::ramsey(n, k));
    }
    Ok(RtLikeStatement::new(n, k, psi_by_name(name)?)?)
}

fn density_mode(sampled: Option<usize>, g: &Globals) -> DensityMode {
    match sampled {
        Some(trials) => DensityMode::Sampled {
            seed: g.seed,
            trials,
        },
        None => DensityMode::Exact,
    }
}

fn answer_report(ans: Answer, what: String) -> Report {
    let mut r = Report::verdict(&ans.verdict).field("reason", ans.reason.as_str());
    r = r.line(format!("{what}: {} ({})", ans.verdict, ans.reason));
    if let Some(c) = ans.counterexample {
        r = r.field("counterexample", c.to_json_value());
    }
    r
}

#[derive(Args)]
pub struct GammaLargeArgs {
    #[arg(long)]
    set: String,
    #[arg(long)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// em, ramsey:N:K, or PREDICATE:N:K.
    #[arg(long, default_value = "ramsey:2:2")]
    statement: String,
    #[command(flatten)]
    theta: ThetaArgs,
    /// Sample this many colorings instead of listing them all.
    #[arg(long)]
    sampled: Option<usize>,
}

pub fn gamma_large(a: GammaLargeArgs, g: &Globals) -> Run {
    let theta = theta_of(&a.theta)?;
    let z = input::read_set(&a.set, &input::floor(g, Some(&theta)))?;
    let st = statement(&a.statement)?;
    let ans = is_large_gamma(
        &z,
        a.r,
        a.s,
        theta,
        &st,
        density_mode(a.sampled, g),
        g.threads,
    )?;
    Ok(answer_report(
        ans,
        format!("ω^{}·{}-large for {st:?}", a.r, a.s),
    ))
}

#[derive(Args)]
pub struct GammaDenseArgs {
    #[arg(long)]
    set: String,
    #[arg(long)]
    level: usize,
    #[arg(long, default_value = "ramsey:2:2")]
    statement: String,
    #[command(flatten)]
    theta: ThetaArgs,
    #[arg(long)]
    sampled: Option<usize>,
}

pub fn gamma_dense(a: GammaDenseArgs, g: &Globals) -> Run {
    let theta = theta_of(&a.theta)?;
    let z = input::read_set(&a.set, &input::floor(g, Some(&theta)))?;
    let statement = statement(&a.statement)?;
    let what = format!("{}-dense for {statement:?}", a.level);
    let params = DensityParams {
        statement,
        theta,
        level: a.level,
        mode: density_mode(a.sampled, g),
    };
    Ok(answer_report(is_n_dense(&z, &params)?, what))
}

#[derive(Args)]
pub struct EmArgs {
    #[arg(long)]
    set: String,
    #[command(flatten)]
    coloring: ColoringArgs,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    theta: ThetaArgs,
    /// Block exponent per level, comma separated; zeros by default.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    /// Plain exponent required of transversals.
    #[arg(long, default_value_t = 2)]
    transversal: usize,
}

pub fn em_extract(a: EmArgs, g: &Globals) -> Run {
    let theta = theta_of(&a.theta)?;
    let x = input::read_set(&a.set, &input::floor(g, Some(&theta)))?;
    let f = input::coloring(&a.coloring, g, &x, 2)?;
    let config = EmConfig::scaled(a.levels.unwrap_or_else(|| vec![0; a.n]), a.transversal);
    match run_em(&x, &f, a.n, theta, &config, &mut Budget::new(g.budget))? {
        Ok(w) => Ok(Report::new(Status::True)
            .field("set", set_json(&w.set))
            .field("certificate", cert_json(&w.certificate))
            .line(format!("transitive: {}", shorten(&w.set)))),
        Err(fail) => {
            let status = match fail.kind {
                FailureKind::Budget => Status::Inconclusive,
                FailureKind::NotFound => Status::False,
            };
            Ok(Report::new(status)
                .field("reason", fail.to_string())
                .line(fail))
        }
    }
}

#[derive(Args)]
pub struct AdsArgs {
    #[arg(long)]
    set: String,
    #[command(flatten)]
    coloring: ColoringArgs,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    theta: ThetaArgs,
    /// How (ω^k+1)-largeness is read.
    #[arg(long, default_value = "drop-max")]
    reading: String,
    /// Write the result table or set here.
    #[arg(long)]
    out: Option<String>,
}

fn ads_inputs(
    a: &AdsArgs,
    g: &Globals,
) -> Result<(FinSet, ColoringTable, Arc<Pi03Sentence>), Failure> {
    let theta = theta_of(&a.theta)?;
    let x = input::read_set(&a.set, &input::floor(g, Some(&theta)))?;
    let f = input::coloring(&a.coloring, g, &x, 2)?;
    Ok((x, f, theta))
}

pub fn ads_q(a: AdsArgs, g: &Globals) -> Run {
    let (x, f, theta) = ads_inputs(&a, g)?;
    let reading = successor_registry().get(&a.reading)?;
    let q = ads_q_coloring(&x, &f, a.n, theta, reading, &mut Budget::new(g.budget))?;
    let text = serde_json::to_string_pretty(&q.to_json_value()).expect("plain json");
    if let Some(path) = &a.out {
        input::write_text(path, &text)?;
    }
    Ok(Report::new(Status::True)
        .field("coloring", q.to_json_value())
        .line(text))
}

pub fn ads_extract(a: AdsArgs, g: &Globals) -> Run {
    let (x, f, theta) = ads_inputs(&a, g)?;
    let reading = successor_registry().get(&a.reading)?;
    match run_ads(&x, &f, a.n, theta, reading, &mut Budget::new(g.budget))? {
        Outcome::Found(w) => {
            if let Some(path) = &a.out {
                input::write_text(path, &w.set.to_lines())?;
            }
            Ok(Report::new(Status::True)
                .field("set", set_json(&w.set))
                .field("certificate", cert_json(&w.certificate))
                .field("route", format!("{:?}", w.route))
                .line(format!("homogeneous: {}", shorten(&w.set))))
        }
        Outcome::Absent => Ok(Report::new(Status::False).line("no homogeneous large subset")),
        Outcome::Exhausted(why) => Ok(Report::new(Status::Inconclusive)
            .field("reason", why.as_str())
            .line(format!("inconclusive: {why}"))),
    }
}

#[derive(Args)]
pub struct TreeArgs {
    #[arg(long, default_value = "3")]
    base: String,
    #[arg(long)]
    rank: usize,
    /// List the elements, up to --budget of them.
    #[arg(long)]
    materialize: bool,
}

fn tree(base: &str, rank: usize) -> Result<Arc<CanonicalTree>, Failure> {
    Ok(CanonicalTree::new(input::read_nat(base, "--base")?, rank)?)
}

pub fn lowerbound_tree(a: TreeArgs, g: &Globals) -> Run {
    let t = tree(&a.base, a.rank)?;
    let mut r = Report::new(Status::True)
        .field("base", t.base().to_string())
        .field("rank", a.rank)
        .field("cardinality", t.cardinality().to_string())
        .field("max", t.max().to_string())
        .line(format!(
            "base {}\nrank {}\ncardinality {}\nmax {}",
            t.base(),
            a.rank,
            t.cardinality(),
            t.max()
        ));
    if a.materialize {
        let x = t.materialize(&nat(g.budget))?;
        r = r
            .field("elements", set_json(&x))
            .line(x.to_lines().trim_end());
    }
    Ok(r)
}

#[derive(Args)]
pub struct FxArgs {
    #[arg(long, default_value = "3")]
    base: String,
    #[arg(long)]
    rank: usize,
    /// Color of this element only; otherwise the whole coloring, within --budget.
    #[arg(long)]
    value: Option<String>,
}

pub fn lowerbound_fx(a: FxArgs, g: &Globals) -> Run {
    let t = tree(&a.base, a.rank)?;
    if let Some(v) = &a.value {
        let v = input::read_nat(v, "--value")?;
        let c = level_parity(t.as_ref(), &v)?;
        return Ok(Report::new(Status::True)
            .field("value", v.to_string())
            .field("color", c)
            .line(c));
    }
    let x = t.materialize(&nat(g.budget))?;
    let mut colors = Vec::with_capacity(x.len());
    for v in x.iter() {
        colors.push(level_parity(t.as_ref(), v)?);
    }
    let f = ColoringTable::new(x, 1, 2, colors)?;
    let text = serde_json::to_string_pretty(&f.to_json_value()).expect("plain json");
    Ok(Report::new(Status::True)
        .field("coloring", f.to_json_value())
        .line(text))
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "3")]
    base: String,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: VerifyMode,
}

pub fn lowerbound_verify(a: VerifyArgs, g: &Globals) -> Run {
    if a.n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let t = tree(&a.base, 2 * a.n - 1)?;
    let mode = match a.mode {
        VerifyMode::Exhaustive => LowerBoundMode::Exhaustive,
        VerifyMode::Pruned => LowerBoundMode::Pruned { budget: g.budget },
    };
    let rep = verify_lower_bound(&t, a.n, mode)?;
    let status = match &rep.status {
        LowerBoundStatus::Confirmed => Status::True,
        LowerBoundStatus::Consistent => Status::Inconclusive,
        LowerBoundStatus::Refuted(_) => Status::False,
    };
    let mut r = Report::new(status)
        .field("tree", t.describe())
        .field("result", rep.status.to_string())
        .field("largeness_checks", rep.largeness_checks)
        .field("sub_instances", rep.sub_instances)
        .field("note", rep.note.as_str())
        .line(format!(
            "{}: {} ({}, {} largeness checks)",
            t.describe(),
            rep.status,
            rep.note,
            rep.largeness_checks
        ));
    if let LowerBoundStatus::Refuted(w) = &rep.status {
        r = r.field("counterexample", set_json(w));
    }
    Ok(r)
}

#[derive(Args)]
pub struct BoundsArgs {
    #[arg(long)]
    n_max: u64,
    /// Number of colors in the grouping chain entry.
    #[arg(long, default_value_t = 1)]
    k: u32,
}

pub fn bounds(a: BoundsArgs, _g: &Globals) -> Run {
    let rows = bounds_table(a.n_max, a.k);
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "pigeonhole": r.pigeonhole.to_string(),
                "grouping_chain": r.grouping_chain.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                "em": r.em.to_string(),
                "ads": r.ads.to_string(),
                "rt22": r.rt22.to_string(),
                "lower": r.lower.as_ref().map(|v| v.to_string()),
            })
        })
        .collect();
    let mut r = Report::new(Status::True).field("rows", json_rows);
    r.text = to_tsv(&rows);
    Ok(r)
}

#[derive(Args)]
pub struct FormulaArgs {
    text: String,
}

pub fn formula_parse(a: FormulaArgs, _g: &Globals) -> Run {
    let f = parse(&a.text)?;
    let free: Vec<String> = f.free_vars().into_iter().collect();
    Ok(Report::new(Status::True)
        .field("formula", f.to_string())
        .field("free", free.clone())
        .field("size", f.size())
        .line(&f)
        .line(format!("free: {}", free.join(", "))))
}

#[derive(Args)]
pub struct EvalArgs {
    text: String,
    /// Values of the free variables, as name=value pairs.
    #[arg(long, value_delimiter = ',')]
    env: Vec<String>,
    #[arg(long, default_value = "0")]
    a: String,
    #[arg(long)]
    param: Option<String>,
}

pub fn formula_eval(a: EvalArgs, _g: &Globals) -> Run {
    let f = parse(&a.text)?;
    let mut env = BTreeMap::new();
    for pair in a.env.iter().filter(|p| !p.is_empty()) {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("{pair}: expected name=value")))?;
        env.insert(k.trim().to_string(), input::read_nat(v.trim(), k)?);
    }
    let set = match &a.param {
        Some(bits) => SecondOrderParam::parse(bits)?,
        None => SecondOrderParam::empty(),
    };
    let param_a = input::read_nat(&a.a, "--a")?;
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let names: Vec<&str> = free.iter().map(String::as_str).collect();
    let vals = free
        .iter()
        .map(|v| env.get(v).cloned().ok_or_else(|| Error::Unbound(v.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let (value, past) = Compiled::new(&f, &names)?.eval_tracked(&vals, &param_a, &set)?;
    if past {
        eprintln!(
            "warning: a membership query ran past the {} coded bits of A and read false",
            set.len()
        );
    }
    Ok(Report::new(Status::from_bool(value))
        .field("value", value)
        .field("past_parameter", past)
        .line(value))
}

pub fn formula_weaken(a: FormulaArgs, _g: &Globals) -> Run {
    let s = PrefixSentence::parse(&a.text)?;
    let w = weakly_pi04_transform(&s)?;
    Ok(Report::new(Status::True)
        .field("sentence", w.to_string())
        .line(w))
}
