//! Output plumbing: one sink for stdout-or-file, JSON number handling
//! with explicit "inf"/"-inf" strings, and the config echo every run
//! embeds in its output.

use crate::{CliError, Ctx};
use pdlab_core::ratefn::RateValue;
use serde_json::{Map, Value};
use std::fs::File;
use std::io::{BufWriter, Write};

pub fn sink(ctx: &Ctx) -> Result<Box<dyn Write>, CliError> {
    Ok(match &ctx.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

/// Finite floats become JSON numbers; infinities become the strings
/// "inf" / "-inf" so golden files survive every JSON parser.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        serde_json::json!(v)
    } else if v < 0.0 {
        Value::String("-inf".into())
    } else {
        Value::String("inf".into())
    }
}

pub fn rate_value(v: RateValue) -> Value {
    match v {
        RateValue::Finite(x) => num(x),
        RateValue::Infinite => Value::String("inf".into()),
    }
}

/// Builds the `config` object: run-wide settings plus the subcommand's own
/// resolved parameters.
pub fn config_echo(ctx: &Ctx, command: &str, params: &[(&str, Value)]) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::String(command.into()));
    m.insert("seed".into(), serde_json::json!(ctx.seed));
    if let Some(t) = ctx.threads {
        m.insert("threads".into(), serde_json::json!(t));
    }
    if let Some(p) = &ctx.out {
        m.insert("out".into(), Value::String(p.display().to_string()));
    }
    for (k, v) in params {
        m.insert((*k).into(), v.clone());
    }
    Value::Object(m)
}

pub fn write_json(ctx: &Ctx, value: &Value) -> Result<(), CliError> {
    let mut w = sink(ctx)?;
    serde_json::to_writer_pretty(&mut w, value)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    writeln!(w)?;
    Ok(())
}

/// Comment header mirroring the config echo for CSV outputs.
pub fn write_csv_header<W: Write>(
    w: &mut W,
    ctx: &Ctx,
    command: &str,
    params: &[(&str, Value)],
) -> Result<(), CliError> {
    writeln!(w, "# command={command}")?;
    writeln!(w, "# seed={}", ctx.seed)?;
    for (k, v) in params {
        match v {
            Value::String(s) => writeln!(w, "# {k}={s}")?,
            other => writeln!(w, "# {k}={other}")?,
        }
    }
    Ok(())
}
