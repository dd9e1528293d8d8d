//! Numerical laboratory for the Poisson-Dirichlet family PD(theta) in the
//! small-mutation-rate regime: stick-breaking and subordinator samplers, the
//! piecewise density solver for the largest atom, the rate-function ladder
//! governing small-theta asymptotics, and a verification harness that ties
//! the three together with seeded, reproducible experiments.

pub mod density;
pub mod error;
pub mod ldp;
pub mod numeric;
pub mod ratefn;
pub mod sampler;
pub mod simplex;
pub mod stats;

pub use density::DensityTable;
pub use error::{Error, Result};
pub use ldp::{LogProbEstimate, ScalingReport, TiltedSample};
pub use ratefn::{RateValue, TiltedSupremum};
pub use sampler::{GammaAtoms, LabeledDraw, RngStream, StickSequence};
pub use simplex::{
    classify_ladder, metric_d, LadderClass, MutationRate, OrderedFrequencies, SimplexPoint,
    FP_TOL,
};
