//! End-to-end distributional checks tying the sampler, the density solver,
//! and the rare-event estimators to each other and to closed forms.

use pdlab_core::density::{solve_default, DEFAULT_GRID_POINTS, DEFAULT_K_MAX};
use pdlab_core::ldp::{
    box2_log_prob, estimate_event_logprob, exact_beta_interval_logprob, scaling_curve, Estimator,
    EventSpec,
};
use pdlab_core::numeric::{gauss8, gauss8_graded_right};
use pdlab_core::sampler::{sample_pd, RngStream};
use pdlab_core::simplex::{MutationRate, OrderedFrequencies, SimplexPoint};
use pdlab_core::stats::ks_one_sample;

const SEED: u64 = 7_311_526;
const BLOCK: u64 = 1 << 48;

fn theta(t: f64) -> MutationRate {
    MutationRate::new(t).expect("valid theta")
}

#[test]
fn interior_staircase_slopes_match_density_route() {
    let thetas = [1e-2, 1e-3, 1e-4, 1e-5];
    let est = Estimator::Density {
        k_max: DEFAULT_K_MAX,
        grid_points: DEFAULT_GRID_POINTS,
    };
    let base = RngStream::new(SEED, BLOCK);
    let flat = scaling_curve(&EventSpec::LargestAtMost(0.6), &thetas, &est, 1.0, base)
        .expect("density route at x = 0.6");
    assert!(
        (flat.fitted_slope - 1.0).abs() <= 0.1,
        "slope for P1 <= 0.6 is {}, want 1 +- 0.1",
        flat.fitted_slope
    );
    let base = RngStream::new(SEED, BLOCK + 1);
    let steep = scaling_curve(&EventSpec::LargestAtMost(0.45), &thetas, &est, 2.0, base)
        .expect("density route at x = 0.45");
    assert!(
        (steep.fitted_slope - 2.0).abs() <= 0.15,
        "slope for P1 <= 0.45 is {}, want 2 +- 0.15",
        steep.fitted_slope
    );
}

#[test]
fn solver_and_monte_carlo_agree_on_interval_probabilities() {
    let mut cell = 0u64;
    for &t in &[0.3, 0.5, 1.0] {
        let table = solve_default(theta(t)).expect("solver");
        for &x in &[0.4, 0.5, 0.6] {
            let target = table.cdf_p1(x).expect("solved region").ln();
            let est = estimate_event_logprob(
                theta(t),
                1e-8,
                &|p: &OrderedFrequencies| p.coord(1) <= x,
                200_000,
                RngStream::new(SEED, 2 * BLOCK + cell * (1 << 32)),
            )
            .expect("monte carlo");
            cell += 1;
            // nine simultaneous cells share the failure budget: widen each
            // 95% interval by half its half-width (past the Bonferroni level)
            let slack = 0.25 * (est.ci_high - est.ci_low);
            assert!(
                est.ci_low - slack <= target && target <= est.ci_high + slack,
                "theta {t}, x {x}: solver {target:.5} outside widened MC CI [{:.5}, {:.5}]",
                est.ci_low - slack,
                est.ci_high + slack
            );
        }
    }
}

#[test]
fn largest_frequency_sample_matches_solved_cdf() {
    let t = theta(0.5);
    let table = solve_default(t).expect("solver");
    let mut rng = RngStream::new(SEED, 3 * BLOCK).rng();
    let n = 1_000_000;
    let mut p1 = Vec::with_capacity(n);
    for _ in 0..n {
        p1.push(sample_pd(t, 1e-8, &mut rng).expect("draw").coord(1));
    }
    let ks = ks_one_sample(&p1, |x| {
        if x >= 1.0 {
            1.0
        } else {
            table.cdf_p1(x).unwrap_or(0.0)
        }
    });
    assert!(ks <= 0.005, "KS distance {ks} exceeds 0.005 at n = {n}");
}

#[test]
fn two_coordinate_box_quadrature_agrees_with_monte_carlo() {
    let t = theta(0.5);
    let table = solve_default(t).expect("solver");
    let p1 = (0.45, 0.65);
    let p2 = (0.2, 0.35);
    let quad = box2_log_prob(&table, p1, p2).expect("box quadrature");
    let spec = EventSpec::TopTwoBox { p1, p2 };
    let est = estimate_event_logprob(
        t,
        1e-8,
        &|p: &OrderedFrequencies| spec.holds(p),
        400_000,
        RngStream::new(SEED, 4 * BLOCK),
    )
    .expect("monte carlo");
    assert!(
        est.ci_low <= quad && quad <= est.ci_high,
        "quadrature {quad:.5} outside MC CI [{:.5}, {:.5}] (MC point {:.5})",
        est.ci_low,
        est.ci_high,
        est.log_prob
    );
}

/// Integrates the two-coordinate joint density over the part of its
/// support the default table resolves: p2 >= (1 - p1) / 10, which keeps
/// the cumulative argument at or above the deepest solved interval. The
/// excluded sliver needs at least ten comparable atoms below the second
/// largest, so its mass is far below the asserted tolerance.
#[test]
fn joint_two_coordinate_density_normalizes_over_solved_region() {
    let t = theta(0.5);
    let table = solve_default(t).expect("solver");
    let density = |p1: f64, p2: f64| -> f64 {
        if p2 <= 0.0 || p2 >= p1 || p1 + p2 >= 1.0 {
            return 0.0;
        }
        let point = SimplexPoint::new(vec![p1, p2]).expect("ordered pair");
        table.joint_density(&point).expect("solved region")
    };
    let inner = |p1: f64| -> f64 {
        let lo = (1.0 - p1) / 10.0;
        let hi = p1.min(1.0 - p1);
        if lo >= hi {
            return 0.0;
        }
        // grading absorbs the (1 - p1 - p2)^(theta - 1) edge at the
        // diagonal and the near-singular corner at p1 = 1/2
        gauss8_graded_right(|p2| density(p1, p2), lo, hi, 54)
    };
    let mut total = 0.0;
    let splits = [1.0 / 11.0, 0.5, 1.0];
    for w in splits.windows(2) {
        let panels = 48;
        let h = (w[1] - w[0]) / panels as f64;
        for i in 0..panels {
            let a = w[0] + i as f64 * h;
            total += gauss8(inner, a, a + h);
        }
    }
    assert!(
        (total - 1.0).abs() <= 0.01,
        "joint normalization over solved region is {total}, want 1 +- 0.01"
    );
}

#[test]
fn interval_probability_certificate_at_depth() {
    let deep = theta(1e-8);
    let speed = deep.ldp_speed().expect("speed");
    for &(a, b) in &[(0.0, 0.5), (0.2, 0.6)] {
        let scaled = speed * exact_beta_interval_logprob(deep, a, b).expect("interval");
        assert!(
            (scaled + 1.0).abs() <= 0.05,
            "interval ({a}, {b}]: scaled log-prob {scaled}, want -1 +- 0.05"
        );
    }
    let scaled = speed * exact_beta_interval_logprob(deep, 0.3, 1.0).expect("interval");
    assert!(
        scaled.abs() <= 0.005,
        "interval reaching 1 must carry no exponential cost, got {scaled}"
    );
}

#[test]
fn monte_carlo_reproduces_known_values() {
    // theta = 1: P{P1 <= 1/2} = 1 - ln 2 exactly
    let est = estimate_event_logprob(
        theta(1.0),
        1e-8,
        &|p: &OrderedFrequencies| p.coord(1) <= 0.5,
        1_000_000,
        RngStream::new(SEED, 6 * BLOCK),
    )
    .expect("monte carlo");
    let target = (1.0 - std::f64::consts::LN_2).ln();
    assert!(
        est.ci_low <= target && target <= est.ci_high,
        "ln(1 - ln 2) = {target:.5} outside CI [{:.5}, {:.5}]",
        est.ci_low,
        est.ci_high
    );
    // theta = 0.5: the solved table value, checked on a fresh sample
    let table = solve_default(theta(0.5)).expect("solver");
    let target = table.cdf_p1(0.5).expect("solved region").ln();
    let est = estimate_event_logprob(
        theta(0.5),
        1e-8,
        &|p: &OrderedFrequencies| p.coord(1) <= 0.5,
        1_000_000,
        RngStream::new(SEED, 6 * BLOCK + (1 << 32)),
    )
    .expect("monte carlo");
    assert!(
        est.ci_low <= target && target <= est.ci_high,
        "table value {target:.5} outside CI [{:.5}, {:.5}]",
        est.ci_low,
        est.ci_high
    );
}
