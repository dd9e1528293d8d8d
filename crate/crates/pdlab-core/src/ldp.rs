//! Verification harness: exact and Monte-Carlo event probabilities in log
//! domain, scaling-slope extraction against rate predictions, the
//! exponential-approximation bound check, importance sampling under the
//! selection tilt, and the numerical homozygosity minimizer.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{solve_g1, DensityTable};
use crate::error::{Error, Result};
use crate::numeric::{gauss8, gauss8_graded_right, project_to_simplex};
use crate::ratefn::homozygosity;
use crate::sampler::{sample_pd, RngStream};
use crate::simplex::{classify_ladder, MutationRate, OrderedFrequencies};
use crate::stats::{clopper_pearson_log, weighted_slope};

/// Draws per Monte-Carlo work chunk. Chunk i of a run always uses rng
/// substream 1 + i, so results depend on (seed, chunk policy) and never on
/// the number of workers executing the chunks.
pub const CHUNK_SIZE: u64 = 1 << 16;

/// Stream-id stride between the theta points of one scaling curve; each
/// point owns a disjoint block of chunk substreams.
const THETA_STREAM_STRIDE: u64 = 1 << 32;

/// Log-domain binomial estimate with exact 95% Clopper-Pearson bounds.
/// Zero hits give log_prob = -inf with a finite ci_high, so rare-event
/// output never silently reads as "probability zero".
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogProbEstimate {
    pub log_prob: f64,
    pub n_samples: u64,
    pub n_hits: u64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl LogProbEstimate {
    pub fn from_counts(n_hits: u64, n_samples: u64) -> Self {
        assert!(n_samples >= 1 && n_hits <= n_samples);
        let (ci_low, ci_high) = clopper_pearson_log(n_hits, n_samples);
        let log_prob = if n_hits == 0 {
            f64::NEG_INFINITY
        } else {
            (n_hits as f64).ln() - (n_samples as f64).ln()
        };
        LogProbEstimate {
            log_prob,
            n_samples,
            n_hits,
            ci_low,
            ci_high,
        }
    }
}

/// Exact log-probability that one Beta(1, theta) stick lands in (a, b]:
/// log[(1-a)^theta - (1-b)^theta], evaluated cancellation-free as
/// theta ln(1-a) + ln(1 - ((1-b)/(1-a))^theta).
pub fn exact_beta_interval_logprob(theta: MutationRate, a: f64, b: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&a) || !(a < b) || b > 1.0 {
        return Err(Error::InvalidParameter {
            name: "interval",
            value: a,
            requirement: "0 <= a < b <= 1",
        });
    }
    let th = theta.value();
    let la = f64::ln_1p(-a);
    let lb = f64::ln_1p(-b); // -inf at b = 1, correctly dropping the term
    Ok(th * la + (-f64::exp_m1(th * (lb - la))).ln())
}

/// Monte-Carlo log-probability of an event under the sorted frequency draw.
/// Chunked and parallel; deterministic for a fixed (seed, chunk policy).
pub fn estimate_event_logprob<F>(
    theta: MutationRate,
    trunc_eps: f64,
    event: &F,
    n_samples: u64,
    base: RngStream,
) -> Result<LogProbEstimate>
where
    F: Fn(&OrderedFrequencies) -> bool + Sync,
{
    if n_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    let n_chunks = n_samples.div_ceil(CHUNK_SIZE);
    let hits = (0..n_chunks)
        .into_par_iter()
        .map(|i| -> Result<u64> {
            let count = chunk_len(n_samples, i);
            let mut rng = base.substream(1 + i).rng();
            let mut h = 0u64;
            for _ in 0..count {
                let draw = sample_pd(theta, trunc_eps, &mut rng)?;
                if event(&draw) {
                    h += 1;
                }
            }
            Ok(h)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(LogProbEstimate::from_counts(hits, n_samples))
}

fn chunk_len(total: u64, chunk: u64) -> u64 {
    let start = chunk * CHUNK_SIZE;
    CHUNK_SIZE.min(total - start)
}

/// Event families the estimators understand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum EventSpec {
    /// Largest frequency at most x.
    LargestAtMost(f64),
    /// Largest in [p1.0, p1.1] and second largest in [p2.0, p2.1],
    /// closed boxes.
    TopTwoBox { p1: (f64, f64), p2: (f64, f64) },
}

impl EventSpec {
    pub fn holds(&self, p: &OrderedFrequencies) -> bool {
        match *self {
            EventSpec::LargestAtMost(x) => p.coord(1) <= x,
            EventSpec::TopTwoBox { p1, p2 } => {
                let a = p.coord(1);
                let b = p.coord(2);
                a >= p1.0 && a <= p1.1 && b >= p2.0 && b <= p2.1
            }
        }
    }

    pub fn label(&self) -> String {
        match *self {
            EventSpec::LargestAtMost(x) => format!("P1 <= {x}"),
            EventSpec::TopTwoBox { p1, p2 } => format!(
                "P1 in [{}, {}] and P2 in [{}, {}]",
                p1.0, p1.1, p2.0, p2.1
            ),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            EventSpec::LargestAtMost(x) => (0.0..=1.0).contains(&x),
            EventSpec::TopTwoBox { p1, p2 } => {
                p1.0 <= p1.1 && p2.0 <= p2.1 && p1.0 >= 0.0 && p1.1 <= 1.0 && p2.0 >= 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter {
                name: "event",
                value: f64::NAN,
                requirement: "well-ordered bounds inside [0, 1]",
            })
        }
    }
}

/// How scaling-curve probabilities are computed.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Estimator {
    MonteCarlo { n_samples: u64, trunc_eps: f64 },
    Density { k_max: usize, grid_points: usize },
}

/// One scaling experiment: per-theta log-probabilities, speed-scaled
/// values, and the fitted slope of log P against log theta next to the
/// caller's rate prediction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub thetas: Vec<f64>,
    /// Speeds 1/(-log theta), same order as `thetas`.
    pub speeds: Vec<f64>,
    pub log_probs: Vec<f64>,
    /// speed * log P, the quantity whose limit the rate function predicts.
    pub scaled_values: Vec<f64>,
    /// Per-theta Monte-Carlo detail; None for exact/density estimates.
    pub estimates: Vec<Option<LogProbEstimate>>,
    pub fitted_slope: f64,
    pub predicted_rate: f64,
}

/// Runs a scaling curve for `event` over strictly decreasing thetas in
/// (0, 1). Monte-Carlo points fit with CI-derived weights; any zero-hit
/// point aborts (the caller must raise N or switch estimator).
pub fn scaling_curve(
    event: &EventSpec,
    thetas: &[f64],
    estimator: &Estimator,
    predicted_rate: f64,
    base: RngStream,
) -> Result<ScalingReport> {
    event.validate()?;
    if thetas.len() < 2 {
        return Err(Error::EmptyInput("need at least two theta points"));
    }
    for w in thetas.windows(2) {
        if !(w[1] < w[0]) {
            return Err(Error::InvalidParameter {
                name: "thetas",
                value: w[1],
                requirement: "strictly decreasing",
            });
        }
    }

    let mut speeds = Vec::with_capacity(thetas.len());
    let mut log_probs = Vec::with_capacity(thetas.len());
    let mut estimates = Vec::with_capacity(thetas.len());
    let mut weights = Vec::with_capacity(thetas.len());

    for (i, &t) in thetas.iter().enumerate() {
        let theta = MutationRate::new(t)?;
        speeds.push(theta.ldp_speed()?);
        match estimator {
            Estimator::MonteCarlo {
                n_samples,
                trunc_eps,
            } => {
                let block = base.substream((i as u64 + 1) * THETA_STREAM_STRIDE);
                let est = estimate_event_logprob(
                    theta,
                    *trunc_eps,
                    &|p: &OrderedFrequencies| event.holds(p),
                    *n_samples,
                    block,
                )?;
                if est.n_hits == 0 {
                    return Err(Error::NoHits {
                        n_samples: *n_samples,
                    });
                }
                // CI half-width as a 1.96-sigma proxy for the log-prob sd
                let sd = (est.ci_high - est.ci_low) / (2.0 * 1.96);
                weights.push(1.0 / (sd * sd).max(1e-30));
                log_probs.push(est.log_prob);
                estimates.push(Some(est));
            }
            Estimator::Density { k_max, grid_points } => {
                let table = solve_g1(theta, *k_max, *grid_points)?;
                let lp = match event {
                    EventSpec::LargestAtMost(x) => {
                        let c = table.cdf_p1(*x)?;
                        if c <= 0.0 {
                            return Err(Error::NoHits { n_samples: 0 });
                        }
                        c.ln()
                    }
                    EventSpec::TopTwoBox { p1, p2 } => box2_log_prob(&table, *p1, *p2)?,
                };
                weights.push(1.0);
                log_probs.push(lp);
                estimates.push(None);
            }
        }
    }

    let log_thetas: Vec<f64> = thetas.iter().map(|t| t.ln()).collect();
    let fitted_slope = weighted_slope(&log_thetas, &log_probs, &weights);
    let scaled_values = speeds
        .iter()
        .zip(&log_probs)
        .map(|(s, lp)| s * lp)
        .collect();

    Ok(ScalingReport {
        thetas: thetas.to_vec(),
        speeds,
        log_probs,
        scaled_values,
        estimates,
        fitted_slope,
        predicted_rate,
    })
}

/// Log-probability of a closed (P1, P2) box by quadrature against the
/// solved top-two joint density
/// theta^2 (1-p1-p2)^(theta-1) / (p1 p2) F((p2/(1-p1-p2)) /\ 1).
///
/// The inner integral grades panels toward the simplex diagonal, where the
/// (1-p1-p2)^(theta-1) factor is integrably singular; when the box actually
/// touches the diagonal the final sliver is summed as an exact series.
/// Errors when the box needs cumulative values below the solved region.
pub fn box2_log_prob(table: &DensityTable, p1: (f64, f64), p2: (f64, f64)) -> Result<f64> {
    let th = table.theta();
    // outer limits: p1 is a largest frequency with a second one below it
    let lo1 = p1.0.max(p2.0);
    let hi1 = p1.1.min(1.0);
    if !(lo1 < hi1) {
        return Ok(f64::NEG_INFINITY);
    }
    // The cumulative argument q2/(1-q1-q2) must stay at or above the table
    // floor everywhere in the box; the requirement is tightest at q1 = lo1.
    let floor = table.floor();
    let needed_p2 = (1.0 - lo1) * floor / (1.0 + floor);
    if p2.0 < needed_p2 - 1e-15 {
        return Err(Error::BelowSolvedRegion {
            point: p2.0,
            floor: needed_p2,
        });
    }

    let inner = |q1: f64| -> f64 {
        let lo2 = p2.0.max(1e-300);
        let hi2 = p2.1.min(q1);
        let diag = 1.0 - q1; // rem vanishes at q2 = diag
        if !(lo2 < hi2) || lo2 >= diag {
            return 0.0;
        }
        let integrand = |q2: f64| -> f64 {
            let rem = 1.0 - q1 - q2;
            let x = (q2 / rem).min(1.0);
            let f = if x >= 1.0 {
                1.0
            } else {
                table.cdf_p1(x).unwrap_or(0.0)
            };
            th * th * rem.powf(th - 1.0) / (q1 * q2) * f
        };
        if hi2 < diag * (1.0 - 1e-12) {
            // box stays off the diagonal: graded panels absorb the
            // near-singular right end
            gauss8_graded_right(integrand, lo2, hi2, 54)
        } else {
            // Box touches the diagonal. Split at max(diag/2, lo2): below
            // the split the integrand is regular (graded panels), above it
            // q2 >= rem so the cumulative factor is exactly 1 and the
            // sliver has the closed form
            //
            //   int_0^W theta^2 w^(theta-1) / (q1 (diag - w)) dw,
            //   w = diag - q2, W = diag - split <= diag/2,
            //
            // summed as a geometric-in-(W/diag) series.
            let split = (diag / 2.0).max(lo2);
            let mut acc = 0.0;
            if lo2 < split {
                acc += gauss8_graded_right(integrand, lo2, split, 54);
            }
            let w_top = diag - split;
            if w_top > 0.0 {
                let mut series = 0.0;
                let mut pow = w_top.powf(th); // w_top^(theta + j)
                for j in 0..200 {
                    let term = pow / ((th + j as f64) * diag.powi(j as i32 + 1));
                    series += term;
                    if term < 1e-18 * series {
                        break;
                    }
                    pow *= w_top;
                }
                acc += th * th / q1 * series;
            }
            acc
        }
    };

    // outer quadrature: panels fine enough to absorb the interior kinks the
    // inner integral inherits where its limits cross breakpoints
    let panels = 64;
    let step = (hi1 - lo1) / panels as f64;
    let mut total = 0.0;
    for i in 0..panels {
        let a = lo1 + step * i as f64;
        let b = if i == panels - 1 { hi1 } else { a + step };
        total += gauss8(inner, a, b);
    }
    if total <= 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(total.ln())
}

/// One cell of the exponential-approximation bound check: empirical
/// frequency of {prod_{i<=n} (1 - U_i) > delta} against the closed-form
/// bound delta^-1 (theta/(1+theta))^n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub theta: f64,
    pub n: u32,
    pub delta: f64,
    pub n_samples: u64,
    pub empirical_freq: f64,
    pub std_err: f64,
    pub bound: f64,
    /// False only when the CI lower bound exceeds the theoretical bound.
    pub pass: bool,
}

/// Simulates the survival-product event. The product telescopes through
/// the uniform source: ln prod (1-U_i) = sum ln(1-v_i)/theta, so no powf is
/// needed per stick.
pub fn check_exp_approx_bound(
    theta: MutationRate,
    n: u32,
    delta: f64,
    n_samples: u64,
    base: RngStream,
) -> Result<BoundCheck> {
    if !(delta > 0.0) || !delta.is_finite() {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            requirement: "finite and > 0",
        });
    }
    if n_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    let th = theta.value();
    let log_delta = delta.ln();
    let n_chunks = n_samples.div_ceil(CHUNK_SIZE);
    let hits = (0..n_chunks)
        .into_par_iter()
        .map(|i| {
            let count = chunk_len(n_samples, i);
            let mut rng = base.substream(1 + i).rng();
            let mut h = 0u64;
            for _ in 0..count {
                let mut log_prod = 0.0_f64;
                for _ in 0..n {
                    log_prod += f64::ln_1p(-rng.gen::<f64>()) / th;
                }
                if log_prod > log_delta {
                    h += 1;
                }
            }
            h
        })
        .sum::<u64>();

    let nf = n_samples as f64;
    let empirical_freq = hits as f64 / nf;
    let std_err = (empirical_freq * (1.0 - empirical_freq) / nf).sqrt();
    let bound = (th / (1.0 + th)).powi(n as i32) / delta;
    let (ci_low, _) = if hits == 0 {
        (f64::NEG_INFINITY, 0.0)
    } else {
        clopper_pearson_log(hits, n_samples)
    };
    let pass = !(ci_low > bound.ln());
    Ok(BoundCheck {
        theta: th,
        n,
        delta,
        n_samples,
        empirical_freq,
        std_err,
        bound,
        pass,
    })
}

/// Scaling of the selection intensity alpha(theta).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TiltIntensity {
    Constant(f64),
    /// alpha(theta) = -log theta, the scale at which selection enters the
    /// rate function at first order. Requires theta < 1.
    Critical,
}

impl TiltIntensity {
    pub fn alpha(self, theta: MutationRate) -> Result<f64> {
        match self {
            TiltIntensity::Constant(a) => {
                if !(a > 0.0) || !a.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "alpha",
                        value: a,
                        requirement: "finite and > 0",
                    });
                }
                Ok(a)
            }
            TiltIntensity::Critical => Ok(theta.ldp_speed()?.recip()),
        }
    }
}

/// Self-normalized importance sample against the neutral draw, with
/// log-weights s * alpha * H_r per draw.
#[derive(Debug, Clone)]
pub struct TiltedSample {
    pub theta: f64,
    pub s: f64,
    pub r: u32,
    pub alpha: f64,
    pub draws: Vec<OrderedFrequencies>,
    pub log_weights: Vec<f64>,
    pub ess: f64,
    /// Bound on the per-draw log-weight error from using the tracked lower
    /// bound of H_r: |s| * alpha * max residual^r over the sample.
    pub max_weight_log_error: f64,
}

/// Draws from the neutral sampler and weights by the tilt
/// exp(s alpha(theta) H_r), using the tracked lower bound of H_r. For
/// s > 0 the weights concentrate near H_r = 1, so an effective sample size
/// below 1% of n aborts; negative tilts keep all weights <= 1 and need no
/// gate. s = 0 is allowed and reproduces the neutral sample with equal
/// weights.
pub fn sample_tilted(
    theta: MutationRate,
    s: f64,
    r: u32,
    intensity: TiltIntensity,
    trunc_eps: f64,
    n_samples: u64,
    base: RngStream,
) -> Result<TiltedSample> {
    if n_samples == 0 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    if !s.is_finite() {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            requirement: "finite",
        });
    }
    let alpha = intensity.alpha(theta)?;
    let n_chunks = n_samples.div_ceil(CHUNK_SIZE);
    let chunks: Vec<(Vec<OrderedFrequencies>, Vec<f64>, f64)> = (0..n_chunks)
        .into_par_iter()
        .map(|i| -> Result<(Vec<OrderedFrequencies>, Vec<f64>, f64)> {
            let count = chunk_len(n_samples, i);
            let mut rng = base.substream(1 + i).rng();
            let mut draws = Vec::with_capacity(count as usize);
            let mut lws = Vec::with_capacity(count as usize);
            let mut max_res = 0.0_f64;
            for _ in 0..count {
                let draw = sample_pd(theta, trunc_eps, &mut rng)?;
                let h = homozygosity(&draw, r)?.lower;
                lws.push(s * alpha * h);
                max_res = max_res.max(draw.residual());
                draws.push(draw);
            }
            Ok((draws, lws, max_res))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut draws = Vec::with_capacity(n_samples as usize);
    let mut log_weights = Vec::with_capacity(n_samples as usize);
    let mut max_residual = 0.0_f64;
    for (d, l, m) in chunks {
        draws.extend(d);
        log_weights.extend(l);
        max_residual = max_residual.max(m);
    }

    let ess = effective_sample_size(&log_weights);
    if s > 0.0 {
        let floor = 0.01 * n_samples as f64;
        if ess < floor {
            return Err(Error::EssTooLow { ess, floor });
        }
    }
    let max_weight_log_error = s.abs() * alpha * max_residual.powi(r as i32);
    Ok(TiltedSample {
        theta: theta.value(),
        s,
        r,
        alpha,
        draws,
        log_weights,
        ess,
        max_weight_log_error,
    })
}

/// (sum w)^2 / sum w^2 with weights exponentiated after a max shift.
fn effective_sample_size(log_weights: &[f64]) -> f64 {
    let m = log_weights
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if !m.is_finite() {
        return 0.0;
    }
    let mut sw = 0.0;
    let mut sw2 = 0.0;
    for &lw in log_weights {
        let w = (lw - m).exp();
        sw += w;
        sw2 += w * w;
    }
    sw * sw / sw2
}

/// Weighted mass on one near-ladder class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMass {
    pub n: usize,
    pub mass: f64,
}

/// Self-normalized histogram of ladder classes under the tilted weights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoexistenceReport {
    pub tolerance: f64,
    pub masses: Vec<ClassMass>,
    pub unclassified_mass: f64,
    pub ess: f64,
    pub n_draws: u64,
}

pub fn coexistence_report(sample: &TiltedSample, tol: f64) -> Result<CoexistenceReport> {
    if sample.draws.is_empty() {
        return Err(Error::EmptyInput("tilted sample has no draws"));
    }
    let m = sample
        .log_weights
        .iter()
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut class_mass: Vec<(usize, f64)> = Vec::new();
    let mut unclassified = 0.0;
    let mut total = 0.0;
    for (draw, &lw) in sample.draws.iter().zip(&sample.log_weights) {
        let w = (lw - m).exp();
        total += w;
        match classify_ladder(draw, tol).n {
            Some(n) => match class_mass.iter_mut().find(|(c, _)| *c == n) {
                Some((_, acc)) => *acc += w,
                None => class_mass.push((n, w)),
            },
            None => unclassified += w,
        }
    }
    class_mass.sort_unstable_by_key(|&(n, _)| n);
    Ok(CoexistenceReport {
        tolerance: tol,
        masses: class_mass
            .into_iter()
            .map(|(n, w)| ClassMass {
                n,
                mass: w / total,
            })
            .collect(),
        unclassified_mass: unclassified / total,
        ess: sample.ess,
        n_draws: sample.draws.len() as u64,
    })
}

/// Numerical minimum of sum x_i^r over the n-point simplex by projected
/// gradient descent with random restarts. The objective is convex with
/// gradient Lipschitz constant r(r-1) on the cube, so a fixed step
/// 0.9/(r(r-1)) converges linearly; restarts guard the projection edges.
pub fn min_hr_numeric(
    n: usize,
    r: u32,
    iters: usize,
    restarts: usize,
    base: RngStream,
) -> Result<(f64, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    if r < 2 {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r as f64,
            requirement: ">= 2",
        });
    }
    let rf = r as f64;
    let step = 0.9 / (rf * (rf - 1.0));
    let objective = |x: &[f64]| -> f64 { x.iter().map(|&v| v.powi(r as i32)).sum() };

    let mut best_val = f64::INFINITY;
    let mut best_x = vec![0.0; n];
    for restart in 0..restarts.max(1) {
        let mut rng = base.substream(restart as u64).rng();
        // random interior start: normalized exponential spacings
        let mut x: Vec<f64> = (0..n)
            .map(|_| -f64::ln_1p(-rng.gen::<f64>()))
            .collect();
        let s: f64 = x.iter().sum();
        for v in x.iter_mut() {
            *v /= s;
        }
        for _ in 0..iters {
            let grad: Vec<f64> = x.iter().map(|&v| rf * v.powi(r as i32 - 1)).collect();
            let moved: Vec<f64> = x
                .iter()
                .zip(&grad)
                .map(|(&v, &g)| v - step * g)
                .collect();
            x = project_to_simplex(&moved);
        }
        let val = objective(&x);
        if val < best_val {
            best_val = val;
            best_x = x;
        }
    }
    best_x.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    Ok((best_val, best_x))
}
