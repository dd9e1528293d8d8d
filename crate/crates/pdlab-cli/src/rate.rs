//! `pdlab rate`: one-shot rate-function evaluation. Kinds carry both a
//! descriptive name and the short letter alias used in the write-ups.

use crate::output::{config_echo, num, rate_value, write_json};
use crate::{usage, CliError, Ctx};
use clap::Args;
use pdlab_core::ratefn::{
    configuration_rate, homozygosity_decay_rate, largest_atom_rate, max_stick_rate,
    selection_rate, single_stick_rate, tilted_supremum, top_m_rate, Minimizers, SelectionRegime,
};
use pdlab_core::simplex::{OrderedFrequencies, SimplexPoint};
use serde_json::{json, Map, Value};

#[derive(Args)]
pub struct RateArgs {
    /// One of: single-stick (I1), max-stick (In), largest-atom (S1),
    /// top-vector (Sm), configuration (S), homozygosity-decay (J),
    /// selection (Sprime), tilted-sup
    #[arg(long)]
    kind: String,
    /// Scalar evaluation point
    #[arg(long)]
    p: Option<f64>,
    /// Stick count for max-stick
    #[arg(long)]
    n: Option<usize>,
    /// Homozygosity order
    #[arg(long)]
    r: Option<u32>,
    /// Selection strength
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Selection regime: vanishing or critical
    #[arg(long)]
    regime: Option<String>,
    /// Comma-separated descending frequencies
    #[arg(long)]
    point: Option<String>,
    /// Ladder classification tolerance
    #[arg(long, default_value_t = 1e-9)]
    class_tol: f64,
    /// Scan depth for tilted-sup
    #[arg(long, default_value_t = 50)]
    n_max: u64,
}

fn parse_point(raw: &str) -> Result<Vec<f64>, CliError> {
    let mut v = Vec::new();
    for part in raw.split(',') {
        v.push(
            part.trim()
                .parse::<f64>()
                .map_err(|_| usage(format!("--point expects numbers, got {part:?}")))?,
        );
    }
    Ok(v)
}

/// The tracked coordinates are the whole configuration: whatever mass they
/// leave unclaimed is dust below every coordinate.
fn ordered(raw: &str) -> Result<OrderedFrequencies, CliError> {
    let v = parse_point(raw)?;
    let residual = (1.0 - v.iter().sum::<f64>()).max(0.0);
    OrderedFrequencies::from_sorted(v, residual).map_err(|e| usage(e.to_string()))
}

fn need<T: Copy>(v: Option<T>, kind: &str, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("--kind {kind} requires {flag}")))
}

fn minimizers_json(m: &Minimizers) -> Value {
    match m {
        Minimizers::SingleAtom => Value::String("single-atom".into()),
        Minimizers::AtomCounts(ns) => json!(ns),
    }
}

pub fn run(ctx: &Ctx, args: RateArgs) -> Result<(), CliError> {
    if let Some(r) = args.r {
        if r < 2 {
            return Err(usage(format!("--r must be at least 2, got {r}")));
        }
    }
    let mut input = Map::new();
    let mut minimizers: Option<Value> = None;

    let (canonical, value) = match args.kind.as_str() {
        "single-stick" | "I1" => {
            let p = need(args.p, &args.kind, "--p")?;
            input.insert("p".into(), num(p));
            (
                "single-stick",
                single_stick_rate(p).map_err(|e| usage(e.to_string()))?,
            )
        }
        "max-stick" | "In" => {
            let n = need(args.n, &args.kind, "--n")?;
            let p = need(args.p, &args.kind, "--p")?;
            input.insert("n".into(), json!(n));
            input.insert("p".into(), num(p));
            (
                "max-stick",
                max_stick_rate(n, p).map_err(|e| usage(e.to_string()))?,
            )
        }
        "largest-atom" | "S1" => {
            let p = need(args.p, &args.kind, "--p")?;
            input.insert("p".into(), num(p));
            (
                "largest-atom",
                largest_atom_rate(p).map_err(|e| usage(e.to_string()))?,
            )
        }
        "top-vector" | "Sm" => {
            let raw = args
                .point
                .as_deref()
                .ok_or_else(|| usage(format!("--kind {} requires --point", args.kind)))?;
            let coords = parse_point(raw)?;
            input.insert("point".into(), json!(coords));
            let sp = SimplexPoint::new(coords).map_err(|e| usage(e.to_string()))?;
            ("top-vector", top_m_rate(&sp))
        }
        "configuration" | "S" => {
            let raw = args
                .point
                .as_deref()
                .ok_or_else(|| usage(format!("--kind {} requires --point", args.kind)))?;
            let p = ordered(raw)?;
            input.insert("point".into(), Value::String(p.to_string()));
            input.insert("class_tol".into(), num(args.class_tol));
            ("configuration", configuration_rate(&p, args.class_tol))
        }
        "homozygosity-decay" | "J" => {
            let r = need(args.r, &args.kind, "--r")?;
            let p = need(args.p, &args.kind, "--p")?;
            input.insert("r".into(), json!(r));
            input.insert("p".into(), num(p));
            (
                "homozygosity-decay",
                homozygosity_decay_rate(r, p).map_err(|e| usage(e.to_string()))?,
            )
        }
        "selection" | "Sprime" => {
            let s = need(args.s, &args.kind, "--s")?;
            let r = need(args.r, &args.kind, "--r")?;
            let regime = match args.regime.as_deref() {
                Some("vanishing") => SelectionRegime::Vanishing,
                Some("critical") => SelectionRegime::Critical,
                Some(other) => {
                    return Err(usage(format!(
                        "--regime must be vanishing or critical, got {other:?}"
                    )))
                }
                None => return Err(usage(format!("--kind {} requires --regime", args.kind))),
            };
            let raw = args
                .point
                .as_deref()
                .ok_or_else(|| usage(format!("--kind {} requires --point", args.kind)))?;
            let p = ordered(raw)?;
            input.insert("s".into(), num(s));
            input.insert("r".into(), json!(r));
            input.insert(
                "regime".into(),
                Value::String(args.regime.clone().unwrap_or_default()),
            );
            input.insert("point".into(), Value::String(p.to_string()));
            input.insert("class_tol".into(), num(args.class_tol));
            (
                "selection",
                selection_rate(s, r, regime, &p, args.class_tol)
                    .map_err(|e| usage(e.to_string()))?,
            )
        }
        "tilted-sup" => {
            let s = need(args.s, &args.kind, "--s")?;
            let r = need(args.r, &args.kind, "--r")?;
            input.insert("s".into(), num(s));
            input.insert("r".into(), json!(r));
            input.insert("n_max".into(), json!(args.n_max));
            let sup = tilted_supremum(s, r, args.n_max).map_err(|e| usage(e.to_string()))?;
            minimizers = Some(minimizers_json(&sup.minimizers));
            (
                "tilted-sup",
                pdlab_core::ratefn::RateValue::Finite(sup.sup_value),
            )
        }
        other => {
            return Err(usage(format!(
                "unknown --kind {other:?}; see --help for the list"
            )))
        }
    };

    let mut params: Vec<(&str, Value)> = vec![("kind", Value::String(canonical.into()))];
    for (k, v) in &input {
        params.push((k.as_str(), v.clone()));
    }
    let config = config_echo(ctx, "rate", &params);
    drop(params);

    let mut report = Map::new();
    report.insert("config".into(), config);
    report.insert("kind".into(), Value::String(canonical.into()));
    report.insert("input".into(), Value::Object(input));
    report.insert("value".into(), rate_value(value));
    if let Some(m) = minimizers {
        report.insert("minimizers".into(), m);
    }
    write_json(ctx, &Value::Object(report))
}
