//! Reading sets, colorings, sentences and largeness notions from arguments.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use omegalarge::formula::{Pi03Sentence, SecondOrderParam};
use omegalarge::grouping::LSpec;
use omegalarge::largeness::LargenessSpec;
use omegalarge::nat::{nat, parse_nat};
use omegalarge::{Color, ColoringTable, FinSet, Nat};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::report::Failure;
use crate::{ColoringArgs, Globals, ThetaArgs};

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Inline JSON, or a path to a file.
fn read_source(src: &str) -> Result<String, Failure> {
    if src.trim_start().starts_with('[') || src.trim_start().starts_with('{') {
        return Ok(src.to_string());
    }
    fs::read_to_string(Path::new(src)).map_err(|e| usage(format!("{src}: {e}")))
}

/// `LO..HI`, an inline JSON array, or a file of numerals.
pub fn read_set(src: &str, floor: &Nat) -> Result<FinSet, Failure> {
    if let Some((lo, hi)) = src.split_once("..") {
        if let (Ok(lo), Ok(hi)) = (parse_nat(lo.trim()), parse_nat(hi.trim())) {
            let mut v = lo;
            let mut out = Vec::new();
            while v <= hi {
                out.push(v.clone());
                v += 1u32;
                if out.len() > 1 << 24 {
                    return Err(usage(format!("interval {src} is too long to list")));
                }
            }
            return Ok(FinSet::new(out, floor.clone())?);
        }
    }
    let text = read_source(src)?;
    FinSet::parse_text(&text, floor.clone()).map_err(|e| usage(format!("{src}: {e}")))
}

/// A JSON array of sets, each written as in [`read_set`]'s JSON form.
pub fn read_blocks(src: &str, floor: &Nat) -> Result<Vec<FinSet>, Failure> {
    let text = read_source(src)?;
    let raw: Vec<Value> = serde_json::from_str(&text).map_err(|e| {
        usage(format!(
            "{src}: line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })?;
    raw.iter()
        .enumerate()
        .map(|(i, b)| {
            FinSet::parse_text(&b.to_string(), floor.clone())
                .map_err(|e| usage(format!("{src}: block {i}: {e}")))
        })
        .collect()
}

pub fn read_nat(text: &str, what: &str) -> Result<Nat, Failure> {
    parse_nat(text).map_err(|e| usage(format!("{what}: {e}")))
}

pub fn read_text(src: &str) -> Result<String, Failure> {
    fs::read_to_string(src).map_err(|e| usage(format!("{src}: {e}")))
}

pub fn write_text(path: &str, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{path}: {e}")))
}

pub fn sentence(args: &ThetaArgs) -> Result<Pi03Sentence, Failure> {
    let a = read_nat(&args.a, "--a")?;
    let set = match &args.param {
        Some(bits) => SecondOrderParam::parse(bits)?,
        None => SecondOrderParam::empty(),
    };
    if args.theta.eq_ignore_ascii_case("top") {
        if a != nat(0) || !set.is_empty() {
            return Err(usage("TOP takes no parameters"));
        }
        return Ok(Pi03Sentence::top());
    }
    Ok(Pi03Sentence::parse(&args.theta, a, set)?)
}

/// The floor sets are read with: the `--floor` flag, raised to the sentence's
/// own floor.
pub fn floor(g: &Globals, theta: Option<&Pi03Sentence>) -> Nat {
    let f = nat(g.floor);
    match theta {
        Some(t) => std::cmp::max(f, t.floor()),
        None => f,
    }
}

pub fn coloring(
    args: &ColoringArgs,
    g: &Globals,
    domain: &FinSet,
    arity: usize,
) -> Result<ColoringTable, Failure> {
    match (&args.coloring, args.random_colors) {
        (Some(src), None) => {
            let f = ColoringTable::from_json_str(&read_source(src)?)
                .map_err(|e| usage(format!("{src}: {e}")))?;
            if f.arity() != arity {
                return Err(usage(format!(
                    "{src}: expected arity {arity}, got {}",
                    f.arity()
                )));
            }
            Ok(f)
        }
        (None, Some(k)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            Ok(ColoringTable::random(
                domain.clone(),
                arity,
                k as Color,
                &mut rng,
            )?)
        }
        _ => Err(usage("give exactly one of --coloring and --random-colors")),
    }
}

/// `card:M`, `large:N[:K]` relative to the sentence, or `plain:N[:K]`.
pub fn lspec(text: &str, theta: &Arc<Pi03Sentence>) -> Result<LSpec, Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |s: &str| {
        s.parse::<usize>()
            .map_err(|e| usage(format!("{text}: {e}")))
    };
    let mult = |p: &[&str]| if p.len() > 2 { num(p[2]) } else { Ok(1) };
    match parts.as_slice() {
        ["card", m] => Ok(LSpec::CardAtLeast(num(m)?)),
        ["large", n, ..] if parts.len() <= 3 => Ok(LSpec::Largeness(LargenessSpec::new(
            num(n)?,
            mult(&parts)?,
            theta.clone(),
        ))),
        ["plain", n, ..] if parts.len() <= 3 => Ok(LSpec::Largeness(LargenessSpec::plain(
            num(n)?,
            mult(&parts)?,
        ))),
        _ => Err(usage(format!(
            "{text}: expected card:M, large:N[:K] or plain:N[:K]"
        ))),
    }
}

pub fn set_json(x: &FinSet) -> Value {
    x.to_json_value()
}

pub fn cert_json(cert: &omegalarge::largeness::Certificate) -> Value {
    serde_json::from_str(&cert.to_json()).expect("certificate json")
}

pub fn shorten(x: &FinSet) -> String {
    const SHOW: usize = 40;
    if x.len() <= SHOW {
        return x.to_string();
    }
    let head: Vec<String> = x.iter().take(SHOW).map(Nat::to_string).collect();
    format!("{{{}, ... ({} elements)}}", head.join(", "), x.len())
}
