//! `pdlab density`: solve or load the largest-frequency table, dump it as
//! CSV, and answer cumulative queries.

use crate::output::{config_echo, num, sink, write_json};
use crate::{usage, CliError, Ctx, Format};
use clap::Args;
use pdlab_core::density::{solve_g1, DensityTable, DEFAULT_GRID_POINTS, DEFAULT_K_MAX};
use pdlab_core::simplex::MutationRate;
use serde_json::{json, Value};
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

#[derive(Args)]
pub struct DensityArgs {
    /// Mutation rate; required unless --load is given
    #[arg(long)]
    theta: Option<f64>,
    /// Number of solved intervals
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    k_max: usize,
    /// Grid points per interval
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
    /// Read a previously dumped table instead of solving
    #[arg(long)]
    load: Option<PathBuf>,
    /// Write the table CSV to this path (besides any --query output)
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Comma-separated points to evaluate the cumulative at (JSON output)
    #[arg(long)]
    query: Option<String>,
}

pub fn run(ctx: &Ctx, args: DensityArgs) -> Result<(), CliError> {
    let (table, params) = match (&args.load, args.theta) {
        (Some(_), Some(_)) => {
            return Err(usage("--load and --theta are mutually exclusive"));
        }
        (Some(path), None) => {
            let table = DensityTable::load_csv(BufReader::new(File::open(path)?))?;
            let params = vec![
                ("load", Value::String(path.display().to_string())),
                ("theta", json!(table.theta())),
                ("k_max", json!(table.k_max())),
                ("grid_points", json!(table.grid_points())),
            ];
            (table, params)
        }
        (None, Some(t)) => {
            if !(t > 0.0) || !t.is_finite() {
                return Err(usage(format!("--theta must be > 0, got {t}")));
            }
            if args.k_max < 1 {
                return Err(usage("--k-max must be at least 1"));
            }
            if args.grid < 8 {
                return Err(usage("--grid must be at least 8"));
            }
            let theta = MutationRate::new(t).map_err(|e| usage(e.to_string()))?;
            let table = solve_g1(theta, args.k_max, args.grid)?;
            let params = vec![
                ("theta", json!(t)),
                ("k_max", json!(args.k_max)),
                ("grid_points", json!(args.grid)),
            ];
            (table, params)
        }
        (None, None) => return Err(usage("either --theta or --load is required")),
    };

    if let Some(path) = &args.dump {
        table.dump_csv(std::io::BufWriter::new(File::create(path)?))?;
    }

    if let Some(q) = &args.query {
        let mut xs = Vec::new();
        for part in q.split(',') {
            let x: f64 = part
                .trim()
                .parse()
                .map_err(|_| usage(format!("--query expects numbers, got {part:?}")))?;
            xs.push(x);
        }
        if xs.is_empty() {
            return Err(usage("--query needs at least one point"));
        }
        let mut rows = Vec::new();
        for x in xs {
            let cdf = table.cdf_p1(x)?;
            rows.push(json!({ "x": num(x), "cdf": num(cdf) }));
        }
        return write_json(
            ctx,
            &json!({
                "config": config_echo(ctx, "density", &params),
                "table": {
                    "theta": num(table.theta()),
                    "k_max": table.k_max(),
                    "grid_points": table.grid_points(),
                    "normalization_defect": num(table.normalization_defect()),
                    "tail_bound": num(table.tail_bound()),
                },
                "queries": rows,
            }),
        );
    }

    if args.dump.is_some() {
        return Ok(());
    }
    if ctx.format == Some(Format::Json) {
        return Err(usage(
            "the density table serializes as csv; use --query for json output",
        ));
    }
    // the table file is exactly the canonical dump, so a later --load
    // reproduces every query bit-for-bit
    table.dump_csv(sink(ctx)?)?;
    Ok(())
}
