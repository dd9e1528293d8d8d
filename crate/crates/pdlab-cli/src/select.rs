//! `pdlab select`: importance-sampled draws from the selection-tilted
//! measure, summarized as weighted mass per coexistence class.

use crate::output::{config_echo, num, write_json};
use crate::{usage, CliError, Ctx};
use clap::Args;
use pdlab_core::ldp::{coexistence_report, sample_tilted, TiltIntensity};
use pdlab_core::sampler::RngStream;
use pdlab_core::simplex::MutationRate;
use serde_json::{json, Value};

#[derive(Args)]
pub struct SelectArgs {
    /// Mutation rate
    #[arg(long)]
    theta: f64,
    /// Selection strength; negative favors coexistence
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    /// Homozygosity order
    #[arg(long, default_value_t = 2)]
    r: u32,
    /// Constant selection intensity; critical scaling when absent
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    n_samples: u64,
    #[arg(long, default_value_t = 1e-8)]
    trunc_eps: f64,
    /// Ladder classification tolerance for the histogram
    #[arg(long, default_value_t = 0.05)]
    class_tol: f64,
}

pub fn run(ctx: &Ctx, args: SelectArgs) -> Result<(), CliError> {
    if !(args.theta > 0.0) || !args.theta.is_finite() {
        return Err(usage(format!("--theta must be > 0, got {}", args.theta)));
    }
    if args.r < 2 {
        return Err(usage(format!("--r must be at least 2, got {}", args.r)));
    }
    if args.n_samples == 0 {
        return Err(usage("--n-samples must be at least 1"));
    }
    if !(args.class_tol > 0.0) {
        return Err(usage("--class-tol must be > 0"));
    }
    let theta = MutationRate::new(args.theta).map_err(|e| usage(e.to_string()))?;
    let intensity = match args.alpha {
        Some(a) => {
            if !(a > 0.0) || !a.is_finite() {
                return Err(usage(format!("--alpha must be > 0, got {a}")));
            }
            TiltIntensity::Constant(a)
        }
        None => TiltIntensity::Critical,
    };
    if args.alpha.is_none() && args.theta >= 1.0 {
        return Err(usage("critical intensity needs --theta below 1"));
    }

    let params = vec![
        ("theta", json!(args.theta)),
        ("s", json!(args.s)),
        ("r", json!(args.r)),
        (
            "alpha",
            match args.alpha {
                Some(a) => json!(a),
                None => Value::String("critical".into()),
            },
        ),
        ("n_samples", json!(args.n_samples)),
        ("trunc_eps", json!(args.trunc_eps)),
        ("class_tol", json!(args.class_tol)),
    ];

    let sample = sample_tilted(
        theta,
        args.s,
        args.r,
        intensity,
        args.trunc_eps,
        args.n_samples,
        RngStream::new(ctx.seed, 0),
    )?;
    let report = coexistence_report(&sample, args.class_tol)?;

    let masses: Vec<Value> = report
        .masses
        .iter()
        .map(|c| json!({ "n": c.n, "mass": num(c.mass) }))
        .collect();
    write_json(
        ctx,
        &json!({
            "config": config_echo(ctx, "select", &params),
            "ess": num(report.ess),
            "n_draws": report.n_draws,
            "max_weight_log_error": num(sample.max_weight_log_error),
            "masses": masses,
            "unclassified_mass": num(report.unclassified_mass),
        }),
    )
}
