//! Random-measure constructions: residual-allocation (stick-breaking)
//! sampling of the frequency sequence, the subordinator-atom route through
//! the exponential integral, and labeled random-measure draws.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{exp_integral_e1, inv_exp_integral_e1};
use crate::simplex::{MutationRate, OrderedFrequencies};

/// Hard cap on stick-breaking iterations. For theta <= 1 and
/// trunc_eps >= 1e-12 the expected stick count is theta * ln(1/trunc_eps),
/// orders of magnitude below this; the cap only trips on misuse.
pub const STICK_ITERATION_CAP: usize = 10_000_000;

/// Retry cap for the sorted-draw rejection loop and the subordinator
/// empty-atom redraw. Each retry shrinks the relevant cutoff by 10, so the
/// cap is unreachable for sane parameters.
const REDRAW_CAP: usize = 64;

/// Reproducible generator coordinates: one logical seed plus a stream id.
/// Parallel estimators assign one stream per work chunk, making results
/// independent of the worker count that executes the chunks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_id: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        RngStream { seed, stream_id }
    }

    /// Instantiates the generator for this (seed, stream) pair.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream_id);
        r
    }

    /// Derived stream with the same seed. Chunked estimators use
    /// offsets 1.. so the base stream itself is never reused.
    pub fn substream(&self, offset: u64) -> Self {
        RngStream {
            seed: self.seed,
            stream_id: self.stream_id.wrapping_add(offset),
        }
    }
}

/// Inverse CDF of the stick distribution Beta(1, theta) applied to a
/// uniform v in [0, 1): u = 1 - (1-v)^(1/theta), evaluated without
/// cancellation near either endpoint.
pub fn stick_from_uniform(theta: MutationRate, v: f64) -> f64 {
    debug_assert!((0.0..1.0).contains(&v));
    -f64::exp_m1(f64::ln_1p(-v) / theta.value())
}

/// One stick fraction drawn from Beta(1, theta).
pub fn sample_stick<R: Rng + ?Sized>(theta: MutationRate, rng: &mut R) -> f64 {
    stick_from_uniform(theta, rng.gen::<f64>())
}

/// Stick-breaking output: the raw stick fractions (betas), the allocated
/// masses in arrival order, and the residual product left unallocated.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StickSequence {
    betas: Vec<f64>,
    sticks: Vec<f64>,
    residual: f64,
}

impl StickSequence {
    /// Builds the allocation from raw fractions:
    /// sticks[i] = betas[i] * prod_{j<i} (1 - betas[j]).
    pub fn from_betas(betas: Vec<f64>) -> Self {
        let mut sticks = Vec::with_capacity(betas.len());
        let mut remaining = 1.0;
        for &b in &betas {
            sticks.push(b * remaining);
            remaining *= 1.0 - b;
        }
        StickSequence {
            betas,
            sticks,
            residual: remaining,
        }
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    pub fn sticks(&self) -> &[f64] {
        &self.sticks
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }
}

/// Stick-breaking with an injected uniform source; the production sampler
/// and the worked examples (fixed v sequences) share this path.
pub fn sample_gem_with(
    theta: MutationRate,
    trunc_eps: f64,
    mut next_v: impl FnMut() -> f64,
) -> Result<StickSequence> {
    if !(trunc_eps > 0.0 && trunc_eps < 1.0) {
        return Err(Error::InvalidParameter {
            name: "trunc_eps",
            value: trunc_eps,
            requirement: "in (0, 1)",
        });
    }
    let mut betas = Vec::new();
    let mut sticks = Vec::new();
    let mut remaining = 1.0_f64;
    while remaining >= trunc_eps {
        if betas.len() >= STICK_ITERATION_CAP {
            return Err(Error::StickCapExceeded {
                cap: STICK_ITERATION_CAP,
                residual: remaining,
            });
        }
        let u = stick_from_uniform(theta, next_v());
        betas.push(u);
        sticks.push(u * remaining);
        remaining *= 1.0 - u;
    }
    Ok(StickSequence {
        betas,
        sticks,
        residual: remaining,
    })
}

/// Draws sticks until the unallocated residual falls below `trunc_eps`.
pub fn sample_gem<R: Rng + ?Sized>(
    theta: MutationRate,
    trunc_eps: f64,
    rng: &mut R,
) -> Result<StickSequence> {
    sample_gem_with(theta, trunc_eps, || rng.gen::<f64>())
}

/// Sorted frequency draw. A draw whose residual reaches the smallest kept
/// atom is redrawn with trunc_eps/10: the kept coordinates are then
/// guaranteed to be the true largest atoms, which every ranked-coordinate
/// experiment depends on.
pub fn sample_pd<R: Rng + ?Sized>(
    theta: MutationRate,
    trunc_eps: f64,
    rng: &mut R,
) -> Result<OrderedFrequencies> {
    let mut eps = trunc_eps;
    for _ in 0..REDRAW_CAP {
        let seq = sample_gem(theta, eps, rng)?;
        let sorted = OrderedFrequencies::sort_truncate(seq.sticks(), seq.residual(), 0.0)?;
        match sorted.freqs().last() {
            Some(&smallest) if sorted.residual() < smallest => return Ok(sorted),
            None => {}
            _ => {}
        }
        eps = (eps / 10.0).max(1e-300);
    }
    Err(Error::RejectionCapExceeded {
        attempts: REDRAW_CAP,
    })
}

/// Largest allocated mass among the first n sticks. Cheap proxy for the
/// largest frequency: exact whenever the first n sticks contain the maximum.
pub fn sample_p1n<R: Rng + ?Sized>(theta: MutationRate, n: usize, rng: &mut R) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    let mut remaining = 1.0;
    let mut best = 0.0_f64;
    for _ in 0..n {
        let u = sample_stick(theta, rng);
        best = best.max(u * remaining);
        remaining *= 1.0 - u;
    }
    Ok(best)
}

/// Subordinator atoms above a cutoff, plus a matched-moment Gamma stand-in
/// for the mass of the discarded small jumps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GammaAtoms {
    atoms: Vec<f64>,
    remainder: f64,
    total: f64,
}

impl GammaAtoms {
    /// Atom sizes, descending, all > the cutoff used to draw them.
    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    /// Small-jump mass approximation folded below the cutoff.
    pub fn remainder(&self) -> f64 {
        self.remainder
    }

    /// Total mass: sum of atoms + remainder. Distributed Gamma(theta, 1)
    /// up to the small-jump approximation.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Normalizes to frequencies; the remainder becomes the residual.
    pub fn normalize(&self) -> Result<OrderedFrequencies> {
        let scaled: Vec<f64> = self.atoms.iter().map(|a| a / self.total).collect();
        OrderedFrequencies::sort_truncate(&scaled, self.remainder / self.total, 0.0)
    }
}

/// Small-jump mass moments below cutoff c for intensity theta v^-1 e^-v:
/// mean theta(1 - e^-c), variance theta * int_0^c v e^-v dv. The variance
/// integral is evaluated by series below c = 0.1 because the closed form
/// 1 - (1+c)e^-c cancels catastrophically there.
fn small_jump_moments(theta: f64, c: f64) -> (f64, f64) {
    let mean = theta * (-f64::exp_m1(-c));
    let var = if c < 0.1 {
        let mut term = c * c; // c^(k+2) * (-1)^k / (k! (k+2)), k = 0 term times 1/2
        let mut acc = 0.0;
        let mut kfact = 1.0;
        for k in 0..20 {
            let contrib = term / (kfact * (k as f64 + 2.0));
            acc += contrib;
            if contrib.abs() < 1e-20 * acc.abs() {
                break;
            }
            term *= -c;
            kfact *= k as f64 + 1.0;
        }
        theta * acc
    } else {
        theta * (1.0 - (1.0 + c) * (-c).exp())
    };
    (mean, var)
}

/// Subordinator-route draw: atoms above `atom_cutoff` arrive in decreasing
/// order via the inverse tail of the intensity measure; the untracked small
/// jumps contribute a Gamma remainder whose mean and variance match the
/// truncated intensity exactly.
pub fn sample_gamma_atoms<R: Rng + ?Sized>(
    theta: MutationRate,
    atom_cutoff: f64,
    rng: &mut R,
) -> Result<GammaAtoms> {
    let th = theta.value();
    if !(atom_cutoff > 0.0 && atom_cutoff.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "atom_cutoff",
            value: atom_cutoff,
            requirement: "finite and > 0",
        });
    }
    let expected_untracked = th * (-f64::exp_m1(-atom_cutoff));
    if expected_untracked >= 0.01 {
        return Err(Error::CutoffTooLarge {
            cutoff: atom_cutoff,
            expected: expected_untracked,
        });
    }

    let mut cutoff = atom_cutoff;
    for _ in 0..REDRAW_CAP {
        // Atoms above the cutoff: arrival levels of a unit Poisson process
        // mapped through the inverse of the intensity tail theta * E1(v).
        let cap = th * exp_integral_e1(cutoff);
        let mut atoms = Vec::new();
        let mut arrival = 0.0_f64;
        loop {
            // standard exponential spacing from a uniform
            arrival -= f64::ln_1p(-rng.gen::<f64>());
            if arrival >= cap {
                break;
            }
            let v = inv_exp_integral_e1(arrival / th).max(cutoff);
            atoms.push(v);
        }
        if atoms.is_empty() {
            // Poisson(theta * E1(cutoff)) produced zero atoms. Redrawing
            // with a finer cutoff keeps the draw usable; the induced bias is
            // the probability of this branch, e^(-theta E1(cutoff)).
            cutoff /= 10.0;
            continue;
        }
        let (mean, var) = small_jump_moments(th, cutoff);
        let shape = mean * mean / var;
        let scale = var / mean;
        let gamma = Gamma::new(shape, scale).map_err(|_| Error::InvalidParameter {
            name: "atom_cutoff",
            value: cutoff,
            requirement: "yield a valid small-jump Gamma approximation",
        })?;
        let remainder = gamma.sample(rng);
        let total = atoms.iter().sum::<f64>() + remainder;
        return Ok(GammaAtoms {
            atoms,
            remainder,
            total,
        });
    }
    Err(Error::RejectionCapExceeded {
        attempts: REDRAW_CAP,
    })
}

/// Normalized subordinator draw: same law as [`sample_pd`] up to the
/// small-jump approximation, through an entirely separate construction.
pub fn sample_pd_gamma<R: Rng + ?Sized>(
    theta: MutationRate,
    atom_cutoff: f64,
    rng: &mut R,
) -> Result<OrderedFrequencies> {
    sample_gamma_atoms(theta, atom_cutoff, rng)?.normalize()
}

/// Random-measure draw: sorted frequencies paired with i.i.d. uniform[0,1)
/// labels, one label per kept atom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledDraw {
    pub weights: OrderedFrequencies,
    pub labels: Vec<f64>,
}

impl LabeledDraw {
    /// Mass the measure assigns to [0, x) among tracked atoms.
    pub fn mass_below(&self, x: f64) -> f64 {
        self.weights
            .freqs()
            .iter()
            .zip(&self.labels)
            .filter(|(_, &l)| l < x)
            .map(|(w, _)| w)
            .sum()
    }
}

/// Draws the random measure: frequencies from the sorted sampler, atom
/// locations i.i.d. uniform and independent of the weights.
pub fn sample_dirichlet_process<R1, R2>(
    theta: MutationRate,
    trunc_eps: f64,
    weight_rng: &mut R1,
    label_rng: &mut R2,
) -> Result<LabeledDraw>
where
    R1: Rng + ?Sized,
    R2: Rng + ?Sized,
{
    let weights = sample_pd(theta, trunc_eps, weight_rng)?;
    let labels = (0..weights.len()).map(|_| label_rng.gen::<f64>()).collect();
    Ok(LabeledDraw { weights, labels })
}
