//! `pdlab sample`: frequency draws as CSV or JSON.

use crate::output::{config_echo, num, sink, write_csv_header, write_json};
use crate::{usage, CliError, Ctx, Format};
use clap::{Args, ValueEnum};
use pdlab_core::sampler::{sample_dirichlet_process, sample_pd, sample_pd_gamma, RngStream};
use pdlab_core::simplex::MutationRate;
use serde_json::{json, Value};
use std::io::Write;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Stick-breaking with size ordering
    Gem,
    /// Normalized subordinator atoms
    Gamma,
    /// Stick-breaking weights with uniform atom labels
    Dp,
}

impl Method {
    fn name(self) -> &'static str {
        match self {
            Method::Gem => "gem",
            Method::Gamma => "gamma",
            Method::Dp => "dp",
        }
    }
}

#[derive(Args)]
pub struct SampleArgs {
    /// Mutation rate
    #[arg(long)]
    theta: f64,
    #[arg(long, value_enum, default_value = "gem")]
    method: Method,
    /// Number of draws
    #[arg(long, default_value_t = 1000)]
    n: u64,
    /// Truncation threshold on the unallocated residual
    #[arg(long, default_value_t = 1e-8)]
    trunc_eps: f64,
    /// Smallest tracked subordinator atom (gamma method)
    #[arg(long, default_value_t = 1e-8)]
    atom_cutoff: f64,
}

pub fn run(ctx: &Ctx, args: SampleArgs) -> Result<(), CliError> {
    if !(args.theta > 0.0) || !args.theta.is_finite() {
        return Err(usage(format!("--theta must be > 0, got {}", args.theta)));
    }
    if !(args.trunc_eps > 0.0) || !args.trunc_eps.is_finite() {
        return Err(usage("--trunc-eps must be > 0"));
    }
    if !(args.atom_cutoff > 0.0) || !args.atom_cutoff.is_finite() {
        return Err(usage("--atom-cutoff must be > 0"));
    }
    if args.n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let theta = MutationRate::new(args.theta).map_err(|e| usage(e.to_string()))?;

    let mut params = vec![
        ("method", Value::String(args.method.name().into())),
        ("theta", json!(args.theta)),
        ("n", json!(args.n)),
    ];
    match args.method {
        Method::Gamma => params.push(("atom_cutoff", json!(args.atom_cutoff))),
        _ => params.push(("trunc_eps", json!(args.trunc_eps))),
    }

    let mut weight_rng = RngStream::new(ctx.seed, 0).rng();
    let mut label_rng = RngStream::new(ctx.seed, 1).rng();
    let mut draws = Vec::with_capacity(args.n as usize);
    for _ in 0..args.n {
        let (freqs, labels): (_, Option<Vec<f64>>) = match args.method {
            Method::Gem => (sample_pd(theta, args.trunc_eps, &mut weight_rng)?, None),
            Method::Gamma => (
                sample_pd_gamma(theta, args.atom_cutoff, &mut weight_rng)?,
                None,
            ),
            Method::Dp => {
                let d = sample_dirichlet_process(
                    theta,
                    args.trunc_eps,
                    &mut weight_rng,
                    &mut label_rng,
                )?;
                (d.weights, Some(d.labels))
            }
        };
        draws.push((freqs, labels));
    }

    match ctx.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = sink(ctx)?;
            write_csv_header(&mut w, ctx, "sample", &params)?;
            let labeled = args.method == Method::Dp;
            if labeled {
                writeln!(w, "draw_id,k,p_k,label")?;
            } else {
                writeln!(w, "draw_id,k,p_k")?;
            }
            for (id, (freqs, labels)) in draws.iter().enumerate() {
                for (i, &p) in freqs.freqs().iter().enumerate() {
                    if let Some(ls) = labels {
                        writeln!(w, "{id},{},{p},{}", i + 1, ls[i])?;
                    } else {
                        writeln!(w, "{id},{},{p}", i + 1)?;
                    }
                }
                if labeled {
                    writeln!(w, "{id},residual,{},", freqs.residual())?;
                } else {
                    writeln!(w, "{id},residual,{}", freqs.residual())?;
                }
            }
            Ok(())
        }
        Format::Json => {
            let rows: Vec<Value> = draws
                .iter()
                .enumerate()
                .map(|(id, (freqs, labels))| {
                    let mut o = serde_json::Map::new();
                    o.insert("draw_id".into(), json!(id));
                    o.insert(
                        "freqs".into(),
                        Value::Array(freqs.freqs().iter().map(|&p| num(p)).collect()),
                    );
                    o.insert("residual".into(), num(freqs.residual()));
                    if let Some(ls) = labels {
                        o.insert(
                            "labels".into(),
                            Value::Array(ls.iter().map(|&l| num(l)).collect()),
                        );
                    }
                    Value::Object(o)
                })
                .collect();
            write_json(
                ctx,
                &json!({
                    "config": config_echo(ctx, "sample", &params),
                    "draws": rows,
                }),
            )
        }
    }
}
