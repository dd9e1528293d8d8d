//! `pdlab verify`: named verification experiments. Every report carries
//! the same skeleton {experiment, theta_grid, estimates, slope,
//! prediction, pass} plus an experiment-specific detail block and the
//! config echo. Grid experiments can also emit the scaled-value curve as
//! CSV rows theta,lambda,log_p,scaled.

use crate::output::{config_echo, num, sink, write_csv_header, write_json};
use crate::{usage, CliError, Ctx, Format};
use clap::Args;
use pdlab_core::density::{solve_g1, DEFAULT_GRID_POINTS, DEFAULT_K_MAX};
use pdlab_core::ldp::{
    check_exp_approx_bound, coexistence_report, estimate_event_logprob,
    exact_beta_interval_logprob, min_hr_numeric, sample_tilted, scaling_curve, Estimator,
    EventSpec, LogProbEstimate, TiltIntensity,
};
use pdlab_core::ratefn::{
    homozygosity_decay_rate, largest_atom_rate, max_stick_rate, tilted_supremum, Minimizers,
    RateValue,
};
use pdlab_core::sampler::{sample_gamma_atoms, sample_pd, RngStream};
use pdlab_core::simplex::{MutationRate, OrderedFrequencies};
use pdlab_core::stats::{ks_one_sample, ks_two_sample, pearson_correlation};
use serde_json::{json, Value};
use statrs::distribution::{ContinuousCDF, Gamma};
use std::io::Write;

#[derive(Args)]
pub struct VerifyArgs {
    /// One of: beta-tail, slope-p1, joint-slope, exp-approx, density-self,
    /// estimator-agreement, sampler-crossval, coexistence, hr-min,
    /// rate-identities, selection-ties
    #[arg(long)]
    experiment: String,
    #[arg(long)]
    theta: Option<f64>,
    /// Comma-separated decreasing grid for slope experiments
    #[arg(long)]
    thetas: Option<String>,
    /// Interval endpoints for beta-tail
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// Threshold for slope-p1 and estimator-agreement
    #[arg(long)]
    x: Option<f64>,
    /// Stick count (exp-approx) or simplex dimension (hr-min)
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    n_samples: Option<u64>,
    /// Stick-breaking truncation; defaults to 1e-8 (1e-10 for coexistence)
    #[arg(long)]
    trunc_eps: Option<f64>,
    /// Estimator for slope experiments: density or mc
    #[arg(long, default_value = "density")]
    estimator: String,
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    k_max: usize,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    grid: usize,
    /// Box edges for joint-slope
    #[arg(long, default_value_t = 0.4)]
    p1_lo: f64,
    #[arg(long, default_value_t = 0.6)]
    p1_hi: f64,
    #[arg(long, default_value_t = 0.4)]
    p2_lo: f64,
    #[arg(long, default_value_t = 0.5)]
    p2_hi: f64,
    /// Rate prediction override for joint-slope
    #[arg(long)]
    prediction: Option<f64>,
    /// Pass tolerance; each experiment has its own default
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    mass_floor: f64,
    #[arg(long, default_value_t = 0.05)]
    class_tol: f64,
}

struct Report {
    experiment: &'static str,
    theta_grid: Vec<f64>,
    estimates: Vec<Value>,
    slope: Option<f64>,
    prediction: Value,
    pass: bool,
    detail: Value,
    /// Rows (theta, lambda, log_p, scaled) when the experiment has a curve.
    curve: Option<Vec<[f64; 4]>>,
    params: Vec<(&'static str, Value)>,
}

fn estimate_json(e: &LogProbEstimate) -> Value {
    json!({
        "log_prob": num(e.log_prob),
        "n_samples": e.n_samples,
        "n_hits": e.n_hits,
        "ci_low": num(e.ci_low),
        "ci_high": num(e.ci_high),
    })
}

fn check_theta(t: f64) -> Result<MutationRate, CliError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(usage(format!("--theta must be > 0, got {t}")));
    }
    MutationRate::new(t).map_err(|e| usage(e.to_string()))
}

fn deep_theta(t: f64) -> Result<MutationRate, CliError> {
    let theta = check_theta(t)?;
    if t >= 1.0 {
        return Err(usage(format!(
            "this experiment needs --theta in (0, 1), got {t}"
        )));
    }
    Ok(theta)
}

fn parse_grid(raw: Option<&str>, default: &[f64]) -> Result<Vec<f64>, CliError> {
    let grid = match raw {
        None => default.to_vec(),
        Some(text) => {
            let mut v = Vec::new();
            for part in text.split(',') {
                v.push(
                    part.trim()
                        .parse::<f64>()
                        .map_err(|_| usage(format!("--thetas expects numbers, got {part:?}")))?,
                );
            }
            v
        }
    };
    if grid.len() < 2 {
        return Err(usage("--thetas needs at least two points"));
    }
    for w in grid.windows(2) {
        if !(w[1] < w[0]) {
            return Err(usage("--thetas must be strictly decreasing"));
        }
    }
    for &t in &grid {
        deep_theta(t)?;
    }
    Ok(grid)
}

fn pick_estimator(args: &VerifyArgs, default_n: u64) -> Result<Estimator, CliError> {
    match args.estimator.as_str() {
        "density" => Ok(Estimator::Density {
            k_max: args.k_max,
            grid_points: args.grid,
        }),
        "mc" | "monte-carlo" => Ok(Estimator::MonteCarlo {
            n_samples: args.n_samples.unwrap_or(default_n),
            trunc_eps: args.trunc_eps.unwrap_or(1e-8),
        }),
        other => Err(usage(format!(
            "--estimator must be density or mc, got {other:?}"
        ))),
    }
}

fn estimator_params(e: &Estimator) -> Vec<(&'static str, Value)> {
    match e {
        Estimator::Density { k_max, grid_points } => vec![
            ("estimator", Value::String("density".into())),
            ("k_max", json!(k_max)),
            ("grid_points", json!(grid_points)),
        ],
        Estimator::MonteCarlo {
            n_samples,
            trunc_eps,
        } => vec![
            ("estimator", Value::String("mc".into())),
            ("n_samples", json!(n_samples)),
            ("trunc_eps", json!(trunc_eps)),
        ],
    }
}

fn beta_tail(args: &VerifyArgs) -> Result<Report, CliError> {
    let t = args.theta.ok_or_else(|| usage("beta-tail requires --theta"))?;
    let a = args.a.unwrap_or(0.0);
    let b = args.b.unwrap_or(0.5);
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || b <= a {
        return Err(usage(format!(
            "need 0 <= a < b <= 1, got a={a}, b={b}"
        )));
    }
    let theta = deep_theta(t)?;
    let tol = args.tol.unwrap_or(0.05);
    let speed = theta.ldp_speed()?;
    let log_prob = exact_beta_interval_logprob(theta, a, b)?;
    let scaled = speed * log_prob;
    // interval probabilities decay at unit rate unless the interval
    // reaches 1, which costs nothing
    let prediction = if b < 1.0 { -1.0 } else { 0.0 };
    let pass = (scaled - prediction).abs() <= tol;
    Ok(Report {
        experiment: "beta-tail",
        theta_grid: vec![t],
        estimates: vec![],
        slope: None,
        prediction: num(prediction),
        pass,
        detail: json!({
            "a": num(a),
            "b": num(b),
            "log_prob": num(log_prob),
            "speed": num(speed),
            "scaled": num(scaled),
            "tol": num(tol),
        }),
        curve: Some(vec![[t, speed, log_prob, scaled]]),
        params: vec![
            ("theta", json!(t)),
            ("a", json!(a)),
            ("b", json!(b)),
            ("tol", json!(tol)),
        ],
    })
}

fn slope_p1(ctx: &Ctx, args: &VerifyArgs) -> Result<Report, CliError> {
    let x = args.x.ok_or_else(|| usage("slope-p1 requires --x"))?;
    if !(x > 0.0 && x <= 1.0) {
        return Err(usage(format!("--x must lie in (0, 1], got {x}")));
    }
    let grid = parse_grid(args.thetas.as_deref(), &[1e-2, 1e-3, 1e-4, 1e-5])?;
    let estimator = pick_estimator(args, 1_000_000)?;
    let tol = args.tol.unwrap_or(0.3);
    let predicted = match largest_atom_rate(x).map_err(|e| usage(e.to_string()))? {
        RateValue::Finite(v) => v,
        RateValue::Infinite => {
            return Err(usage("the event {P1 <= 0} has no finite rate"));
        }
    };
    let report = scaling_curve(
        &EventSpec::LargestAtMost(x),
        &grid,
        &estimator,
        predicted,
        RngStream::new(ctx.seed, 0),
    )?;
    let pass = (report.fitted_slope - predicted).abs() <= tol;
    let mut params = vec![
        ("x", json!(x)),
        ("thetas", json!(grid.clone())),
        ("tol", json!(tol)),
    ];
    params.extend(estimator_params(&estimator));
    Ok(Report {
        experiment: "slope-p1",
        theta_grid: grid,
        estimates: report
            .estimates
            .iter()
            .flatten()
            .map(estimate_json)
            .collect(),
        slope: Some(report.fitted_slope),
        prediction: num(predicted),
        pass,
        detail: json!({
            "scaled_values": report.scaled_values.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        }),
        curve: Some(curve_rows(&report.thetas, &report.speeds, &report.log_probs)),
        params,
    })
}

fn joint_slope(ctx: &Ctx, args: &VerifyArgs) -> Result<Report, CliError> {
    let p1 = (args.p1_lo, args.p1_hi);
    let p2 = (args.p2_lo, args.p2_hi);
    let grid = parse_grid(args.thetas.as_deref(), &[0.3, 0.1, 0.03, 0.01])?;
    let estimator = pick_estimator(args, 1_000_000)?;
    let tol = args.tol.unwrap_or(0.3);
    let predicted = args.prediction.unwrap_or(1.0);
    let spec = EventSpec::TopTwoBox { p1, p2 };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let report = scaling_curve(&spec, &grid, &estimator, predicted, RngStream::new(ctx.seed, 0))?;
    let pass = (report.fitted_slope - predicted).abs() <= tol;
    let mut params = vec![
        ("p1_lo", json!(p1.0)),
        ("p1_hi", json!(p1.1)),
        ("p2_lo", json!(p2.0)),
        ("p2_hi", json!(p2.1)),
        ("thetas", json!(grid.clone())),
        ("tol", json!(tol)),
    ];
    params.extend(estimator_params(&estimator));
    Ok(Report {
        experiment: "joint-slope",
        theta_grid: grid,
        estimates: report
            .estimates
            .iter()
            .flatten()
            .map(estimate_json)
            .collect(),
        slope: Some(report.fitted_slope),
        prediction: num(predicted),
        pass,
        detail: json!({
            "scaled_values": report.scaled_values.iter().map(|&v| num(v)).collect::<Vec<_>>(),
        }),
        curve: Some(curve_rows(&report.thetas, &report.speeds, &report.log_probs)),
        params,
    })
}

fn curve_rows(thetas: &[f64], speeds: &[f64], log_probs: &[f64]) -> Vec<[f64; 4]> {
    thetas
        .iter()
        .zip(speeds)
        .zip(log_probs)
        .map(|((&t, &lam), &lp)| [t, lam, lp, lam * lp])
        .collect()
}

fn exp_approx(ctx: &Ctx, args: &VerifyArgs) -> Result<Report, CliError> {
    let t = args
        .theta
        .ok_or_else(|| usage("exp-approx requires --theta"))?;
    let theta = check_theta(t)?;
    let n = args.n.unwrap_or(10);
    if n > u32::MAX as u64 {
        return Err(usage("--n too large"));
    }
    let delta = args.delta.unwrap_or(0.5);
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(usage(format!("--delta must be > 0, got {delta}")));
    }
    let n_samples = args.n_samples.unwrap_or(1_000_000);
    let r = check_exp_approx_bound(theta, n as u32, delta, n_samples, RngStream::new(ctx.seed, 0))?;
    Ok(Report {
        experiment: "exp-approx",
        theta_grid: vec![t],
        estimates: vec![],
        slope: None,
        prediction: num(r.bound),
        pass: r.pass,
        detail: json!({
            "n": n,
            "delta": num(delta),
            "empirical_freq": num(r.empirical_freq),
            "std_err": num(r.std_err),
            "bound": num(r.bound),
        }),
        curve: None,
        params: vec![
            ("theta", json!(t)),
            ("n", json!(n)),
            ("delta", json!(delta)),
            ("n_samples", json!(n_samples)),
        ],
    })
}

fn density_self(args: &VerifyArgs) -> Result<Report, CliError> {
    let t = args
        .theta
        .ok_or_else(|| usage("density-self requires --theta"))?;
    let theta = check_theta(t)?;
    let tol = args.tol.unwrap_or(1e-6);
    let table = solve_g1(theta, args.k_max, args.grid)?;
    let residual = table.check_functional_eq();
    let defect = table.normalization_defect();
    let pass = residual <= tol && defect <= tol;
    Ok(Report {
        experiment: "density-self",
        theta_grid: vec![t],
        estimates: vec![],
        slope: None,
        prediction: num(0.0),
        pass,
        detail: json!({
            "functional_eq_residual": num(residual),
            "normalization_defect": num(defect),
            "tail_bound": num(table.tail_bound()),
            "implied_tail": num(table.implied_tail()),
            "tol": num(tol),
        }),
        curve: None,
        params: vec![
            ("theta", json!(t)),
            ("k_max", json!(args.k_max)),
            ("grid_points", json!(args.grid)),
            ("tol", json!(tol)),
        ],
    })
}

fn estimator_agreement(ctx: &Ctx, args: &VerifyArgs) -> Result<Report, CliError> {
    let t = args
        .theta
        .ok_or_else(|| usage("estimator-agreement requires --theta"))?;
    let theta = check_theta(t)?;
    let x = args.x.unwrap_or(0.5);
    if !(x > 0.0 && x <= 1.0) {
        return Err(usage(format!("--x must lie in (0, 1], got {x}")));
    }
    let n_samples = args.n_samples.unwrap_or(200_000);
    let table = solve_g1(theta, args.k_max, args.grid)?;
    let solver_log = table.cdf_p1(x)?.ln();
    let est = estimate_event_logprob(
        theta,
        args.trunc_eps.unwrap_or(1e-8),
        &|p: &OrderedFrequencies| p.coord(1) <= x,
        n_samples,
        RngStream::new(ctx.seed, 0),
    )?;
    let pass = est.ci_low <= solver_log && solver_log <= est.ci_high;
    Ok(Report {
        experiment: "estimator-agreement",
        theta_grid: vec![t],
        estimates: vec![estimate_json(&est)],
        slope: None,
        prediction: num(solver_log),
        pass,
        detail: json!({
            "x": num(x),
            "solver_log_prob": num(solver_log),
            "mc_log_prob": num(est.log_prob),
        }),
        curve: None,
        params: vec![
            ("theta", json!(t)),
            ("x", json!(x)),
            ("n_samples", json!(n_samples)),
            ("k_max", json!(args.k_max)),
            ("grid_points", json!(args.grid)),
        ],
    })
}

fn sampler_crossval(ctx: &Ctx, args: &VerifyArgs) -> Result<Report, CliError> {
    let t = args
        .theta
        .ok_or_else(|| usage("sampler-crossval requires --theta"))?;
    let theta = check_theta(t)?;
    let n = args.n_samples.unwrap_or(100_000) as usize;
    if n < 100 {
        return Err(usage("--n-samples must be at least 100"));
    }
    // matched truncation depths: differing cutoffs would turn deep
    // coordinates into a comparison of truncation schemes
    let cutoff = 1e-8;
    let mut gem_rng = RngStream::new(ctx.seed, 0).rng();
    let mut gamma_rng = RngStream::new(ctx.seed, 1).rng();
    let mut gem_coords: [Vec<f64>; 3] = Default::default();
    let mut gamma_coords: [Vec<f64>; 3] = Default::default();
    let mut totals = Vec::with_capacity(n);
    let mut h2 = Vec::with_capacity(n);
    for _ in 0..n {
        let g = sample_pd(theta, cutoff, &mut gem_rng)?;
        let atoms = sample_gamma_atoms(theta, cutoff, &mut gamma_rng)?;
        totals.push(atoms.total());
        let sorted = atoms.normalize()?;
        h2.push(sorted.freqs().iter().map(|&p| p * p).sum::<f64>());
        for k in 0..3 {
            gem_coords[k].push(g.coord(k + 1));
            gamma_coords[k].push(sorted.coord(k + 1));
        }
    }
    let coord_ks: Vec<f64> = (0..3)
        .map(|k| ks_two_sample(&gem_coords[k], &gamma_coords[k]))
        .collect();
    let marginal = Gamma::new(t, 1.0).map_err(|e| CliError::Runtime(e.to_string()))?;
    let total_ks = ks_one_sample(&totals, |x| marginal.cdf(x));
    let corr = pearson_correlation(&h2, &totals);
    let corr_bound = 2.576 / ((n as f64) - 3.0).sqrt();
    let ks_tol = args.tol.unwrap_or(0.01);
    let pass = coord_ks.iter().all(|&d| d <= ks_tol)
        && total_ks <= ks_tol
        && corr.abs() <= corr_bound;
    Ok(Report {
        experiment: "sampler-crossval",
        theta_grid: vec![t],
        estimates: vec![],
        slope: None,
        prediction: num(0.0),
        pass,
        detail: json!({
            "coordinate_ks": coord_ks.iter().map(|&d| num(d)).collect::<Vec<_>>(),
            "total_mass_ks": num(total_ks),
            "h2_total_correlation": num(corr),
            "correlation_bound_99": num(corr_bound),
            "ks_tol": num(ks_tol),
        }),
        curve: None,
        params: vec![
            ("theta", json!(t)),
            ("n_samples", json!(n)),
            ("atom_cutoff", json!(cutoff)),
        ],
    })
}

fn coexistence(ctx: &Ctx, args: &VerifyArgs) -> Result<Report, CliError> {
    let t = args.theta.unwrap_or(0.01);
    let theta = deep_theta(t)?;
    let s = args.s.unwrap_or(-2.0);
    let r = args.r.unwrap_or(2);
    if r < 2 {
        return Err(usage(format!("--r must be at least 2, got {r}")));
    }
    let n_samples = args.n_samples.unwrap_or(1_000_000);
    let trunc_eps = args.trunc_eps.unwrap_or(1e-10);
    let sample = sample_tilted(
        theta,
        s,
        r,
        TiltIntensity::Critical,
        trunc_eps,
        n_samples,
        RngStream::new(ctx.seed, 0),
    )?;
    let rep = coexistence_report(&sample, args.class_tol)?;
    let mass = |k: usize| {
        rep.masses
            .iter()
            .find(|c| c.n == k)
            .map(|c| c.mass)
            .unwrap_or(0.0)
    };
    let pass = mass(1) >= args.mass_floor && mass(2) >= args.mass_floor;
    Ok(Report {
        experiment: "coexistence",
        theta_grid: vec![t],
        estimates: vec![],
        slope: None,
        prediction: num(args.mass_floor),
        pass,
        detail: json!({
            "masses": rep.masses.iter().map(|c| json!({"n": c.n, "mass": num(c.mass)})).collect::<Vec<_>>(),
            "unclassified_mass": num(rep.unclassified_mass),
            "ess": num(rep.ess),
            "max_weight_log_error": num(sample.max_weight_log_error),
        }),
        curve: None,
        params: vec![
            ("theta", json!(t)),
            ("s", json!(s)),
            ("r", json!(r)),
            ("n_samples", json!(n_samples)),
            ("trunc_eps", json!(trunc_eps)),
            ("class_tol", json!(args.class_tol)),
            ("mass_floor", json!(args.mass_floor)),
        ],
    })
}

fn hr_min(ctx: &Ctx, args: &VerifyArgs) -> Result<Report, CliError> {
    let n = args.n.unwrap_or(3) as usize;
    if n == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let r = args.r.unwrap_or(2);
    if r < 2 {
        return Err(usage(format!("--r must be at least 2, got {r}")));
    }
    let tol = args.tol.unwrap_or(1e-9);
    let (value, point) = min_hr_numeric(n, r, 5000, 8, RngStream::new(ctx.seed, 0))?;
    let expected = (n as f64).powi(1 - r as i32);
    let coord_err = point
        .iter()
        .map(|&c| (c - 1.0 / n as f64).abs())
        .fold(0.0_f64, f64::max);
    let pass = (value - expected).abs() <= tol && coord_err <= 1e-6;
    Ok(Report {
        experiment: "hr-min",
        theta_grid: vec![],
        estimates: vec![],
        slope: None,
        prediction: num(expected),
        pass,
        detail: json!({
            "n": n,
            "r": r,
            "value": num(value),
            "argmin": point.iter().map(|&c| num(c)).collect::<Vec<_>>(),
            "argmin_deviation": num(coord_err),
            "tol": num(tol),
        }),
        curve: None,
        params: vec![("n", json!(n)), ("r", json!(r)), ("tol", json!(tol))],
    })
}

fn rate_identities(args: &VerifyArgs) -> Result<Report, CliError> {
    let _ = args;
    let grid: Vec<f64> = (0..=10_000).map(|i| i as f64 / 10_000.0).collect();
    let mut checked = 0u64;
    let mut pass = true;
    let mut first_break = Value::Null;
    'outer: for n in 1..=10usize {
        for &p in &grid {
            let got = max_stick_rate(n, p)?;
            let want = match largest_atom_rate(p)? {
                RateValue::Infinite => RateValue::Finite(n as f64),
                RateValue::Finite(v) => RateValue::Finite(v.min(n as f64)),
            };
            if got != want {
                pass = false;
                first_break = json!({"identity": "max-stick", "n": n, "p": p});
                break 'outer;
            }
            checked += 1;
        }
    }
    if pass {
        'outer2: for &r in &[2u32, 3, 4] {
            let inv = 1.0 / (r as f64 - 1.0);
            for &p in &grid {
                let got = homozygosity_decay_rate(r, p)?;
                let want = largest_atom_rate(p.powf(inv))?;
                if got != want {
                    pass = false;
                    first_break = json!({"identity": "homozygosity-decay", "r": r, "p": p});
                    break 'outer2;
                }
                checked += 1;
            }
        }
    }
    Ok(Report {
        experiment: "rate-identities",
        theta_grid: vec![],
        estimates: vec![],
        slope: None,
        prediction: Value::Null,
        pass,
        detail: json!({
            "points_checked": checked,
            "first_failure": first_break,
        }),
        curve: None,
        params: vec![],
    })
}

fn selection_ties(args: &VerifyArgs) -> Result<Report, CliError> {
    let k_max = args.n.unwrap_or(5);
    if k_max == 0 {
        return Err(usage("--n must be at least 1"));
    }
    let mut pass = true;
    let mut rows = Vec::new();
    for k in 1..=k_max {
        let s = -((k * (k + 1)) as f64);
        let sup = tilted_supremum(s, 2, 2 * k_max + 10)?;
        let ok = matches!(&sup.minimizers, Minimizers::AtomCounts(ns) if *ns == vec![k, k + 1]);
        pass = pass && ok;
        rows.push(json!({
            "s": num(s),
            "sup_value": num(sup.sup_value),
            "minimizers": match &sup.minimizers {
                Minimizers::SingleAtom => Value::String("single-atom".into()),
                Minimizers::AtomCounts(ns) => json!(ns),
            },
            "expected": json!([k, k + 1]),
        }));
    }
    Ok(Report {
        experiment: "selection-ties",
        theta_grid: vec![],
        estimates: vec![],
        slope: None,
        prediction: Value::Null,
        pass,
        detail: json!({ "ties": rows }),
        curve: None,
        params: vec![("n", json!(k_max))],
    })
}

pub fn run(ctx: &Ctx, args: VerifyArgs) -> Result<(), CliError> {
    let report = match args.experiment.as_str() {
        "beta-tail" => beta_tail(&args)?,
        "slope-p1" => slope_p1(ctx, &args)?,
        "joint-slope" => joint_slope(ctx, &args)?,
        "exp-approx" => exp_approx(ctx, &args)?,
        "density-self" => density_self(&args)?,
        "estimator-agreement" => estimator_agreement(ctx, &args)?,
        "sampler-crossval" => sampler_crossval(ctx, &args)?,
        "coexistence" => coexistence(ctx, &args)?,
        "hr-min" => hr_min(ctx, &args)?,
        "rate-identities" => rate_identities(&args)?,
        "selection-ties" => selection_ties(&args)?,
        other => {
            return Err(usage(format!(
                "unknown --experiment {other:?}; see --help for the list"
            )))
        }
    };

    let mut params = vec![(
        "experiment",
        Value::String(report.experiment.into()),
    )];
    params.extend(report.params.iter().cloned());

    match ctx.format.unwrap_or(Format::Json) {
        Format::Json => write_json(
            ctx,
            &json!({
                "experiment": report.experiment,
                "theta_grid": report.theta_grid.iter().map(|&t| num(t)).collect::<Vec<_>>(),
                "estimates": report.estimates,
                "slope": report.slope.map(num).unwrap_or(Value::Null),
                "prediction": report.prediction,
                "pass": report.pass,
                "detail": report.detail,
                "config": config_echo(ctx, "verify", &params),
            }),
        ),
        Format::Csv => {
            let rows = report.curve.ok_or_else(|| {
                usage(format!(
                    "experiment {} has no scaled-value curve; use json output",
                    report.experiment
                ))
            })?;
            let mut w = sink(ctx)?;
            write_csv_header(&mut w, ctx, "verify", &params)?;
            if let Some(s) = report.slope {
                writeln!(w, "# slope={s}")?;
            }
            writeln!(w, "# prediction={}", report.prediction)?;
            writeln!(w, "# pass={}", report.pass)?;
            writeln!(w, "theta,lambda,log_p,scaled")?;
            for [t, lam, lp, scaled] in rows {
                writeln!(w, "{t},{lam},{lp},{scaled}")?;
            }
            Ok(())
        }
    }
}
