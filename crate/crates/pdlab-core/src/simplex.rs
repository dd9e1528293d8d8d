//! Core state space: the mutation-rate parameter, descending frequency
//! vectors with explicit untracked residual mass, finite simplex points,
//! the ladder classification, and the weighted coordinate metric.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// Floating-point slack for mass-conservation assertions. A single constant
/// decouples fp slack from the statistical tolerances used elsewhere.
pub const FP_TOL: f64 = 1e-9;

/// Positive mutation rate theta. The large-deviation speed additionally
/// requires theta < 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct MutationRate(f64);

impl MutationRate {
    pub fn new(theta: f64) -> Result<Self> {
        if !(theta > 0.0) || !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: theta,
                requirement: "finite and > 0",
            });
        }
        Ok(MutationRate(theta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Large-deviation speed 1/(-log theta); defined for theta < 1.
    pub fn ldp_speed(self) -> Result<f64> {
        if self.0 >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "theta",
                value: self.0,
                requirement: "< 1 for the large-deviation speed",
            });
        }
        Ok(1.0 / -self.0.ln())
    }
}

/// Frequencies sorted descending, each in (0, 1], plus the untracked residual
/// mass. Zeros are never stored; absent coordinates are implicitly zero.
///
/// Sampler outputs conserve mass: sum + residual = 1 within [`FP_TOL`].
/// Arbitrary query points only need sum + residual <= 1 + [`FP_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderedFrequencies {
    freqs: Vec<f64>,
    residual: f64,
}

impl OrderedFrequencies {
    /// Sorts `values` descending, moves every value < `eps` (and exact
    /// zeros) into the residual, and validates mass. `carried_residual` is
    /// mass already outside `values` (0 for a fresh query point).
    pub fn sort_truncate(values: &[f64], carried_residual: f64, eps: f64) -> Result<Self> {
        if !(carried_residual >= 0.0) || !carried_residual.is_finite() {
            return Err(Error::InvalidParameter {
                name: "carried_residual",
                value: carried_residual,
                requirement: "finite and >= 0",
            });
        }
        if !(eps >= 0.0) || !eps.is_finite() {
            return Err(Error::InvalidParameter {
                name: "eps",
                value: eps,
                requirement: "finite and >= 0",
            });
        }
        let mut residual = carried_residual;
        let mut kept = Vec::with_capacity(values.len());
        for &v in values {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::NegativeValue(v));
            }
            if v > 1.0 + FP_TOL {
                return Err(Error::ValueExceedsOne(v));
            }
            if v < eps || v == 0.0 {
                residual += v;
            } else {
                kept.push(v.min(1.0));
            }
        }
        kept.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
        let sum: f64 = kept.iter().sum();
        if sum + residual > 1.0 + FP_TOL {
            return Err(Error::MassExceedsOne(sum + residual));
        }
        Ok(OrderedFrequencies {
            freqs: kept,
            residual,
        })
    }

    /// Wraps already-sorted data, validating order and mass.
    pub fn from_sorted(freqs: Vec<f64>, residual: f64) -> Result<Self> {
        for w in freqs.windows(2) {
            if w[1] > w[0] {
                return Err(Error::InvalidParameter {
                    name: "freqs",
                    value: w[1],
                    requirement: "descending order",
                });
            }
        }
        let out = Self::sort_truncate(&freqs, residual, 0.0)?;
        Ok(out)
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// k-th largest frequency, 1-indexed; zero beyond the stored length.
    pub fn coord(&self, k: usize) -> f64 {
        assert!(k >= 1, "coordinates are 1-indexed");
        self.freqs.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn tracked_mass(&self) -> f64 {
        self.freqs.iter().sum()
    }
}

/// Canonical text form: comma-joined frequencies, then `;residual=`.
impl fmt::Display for OrderedFrequencies {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.freqs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ";residual={}", self.residual)
    }
}

/// Point of the finite ordered simplex: coords descending, nonnegative,
/// sum <= 1 + [`FP_TOL`]. Explicit zeros are allowed here (unlike
/// [`OrderedFrequencies`]) because rate functions evaluate boundary points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimplexPoint {
    coords: Vec<f64>,
}

impl SimplexPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyInput("simplex point needs at least one coordinate"));
        }
        for &c in &coords {
            if !c.is_finite() || c < 0.0 {
                return Err(Error::NegativeValue(c));
            }
        }
        for w in coords.windows(2) {
            if w[1] > w[0] {
                return Err(Error::InvalidParameter {
                    name: "coords",
                    value: w[1],
                    requirement: "descending order",
                });
            }
        }
        let sum: f64 = coords.iter().sum();
        if sum > 1.0 + FP_TOL {
            return Err(Error::MassExceedsOne(sum));
        }
        Ok(SimplexPoint { coords })
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn m(&self) -> usize {
        self.coords.len()
    }

    pub fn sum(&self) -> f64 {
        self.coords.iter().sum()
    }
}

/// Distance sum_k |p_k - q_k| / 2^k over 1-indexed coordinates; absent
/// coordinates count as zero. Metrizes coordinatewise convergence on the
/// infinite ordered simplex.
pub fn metric_d(p: &OrderedFrequencies, q: &OrderedFrequencies) -> f64 {
    let n = p.len().max(q.len());
    let mut acc = 0.0;
    let mut scale = 0.5;
    for k in 1..=n {
        acc += (p.coord(k) - q.coord(k)).abs() * scale;
        scale *= 0.5;
    }
    acc
}

/// Result of the near-ladder classification: the level n, or None when the
/// point is not within tolerance of any finite ladder state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LadderClass {
    pub n: Option<usize>,
}

/// Classifies p as near the n-allele ladder state (first n coordinates
/// summing to 1, all equal contributions not required): minimal n with
/// |sum of first n - 1| <= tol, the n-th coordinate > tol, and every later
/// coordinate < tol. Both thresholds are absolute: simplex coordinates are
/// bounded by 1, so absolute and relative scales coincide.
pub fn classify_ladder(p: &OrderedFrequencies, tol: f64) -> LadderClass {
    assert!(tol > 0.0, "classification tolerance must be positive");
    let mut sum = 0.0;
    for n in 1..=p.len() {
        let pn = p.coord(n);
        sum += pn;
        if (sum - 1.0).abs() <= tol && pn > tol {
            let later_small = (n + 1..=p.len()).all(|j| p.coord(j) < tol);
            if later_small {
                return LadderClass { n: Some(n) };
            }
        }
    }
    LadderClass { n: None }
}
