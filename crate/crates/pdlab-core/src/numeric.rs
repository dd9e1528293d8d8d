//! Shared numerical kernels: Gauss-Legendre panels, monotone cubic
//! interpolation, the exponential integral E1 with its inverse, and
//! Euclidean projection onto the probability simplex.

/// 8-point Gauss-Legendre abscissae on [-1, 1], ascending.
pub const GL8_NODES: [f64; 8] = [
    -0.9602898564975363,
    -0.7966664774136267,
    -0.5255324099163290,
    -0.1834346424956498,
    0.1834346424956498,
    0.5255324099163290,
    0.7966664774136267,
    0.9602898564975363,
];

/// Weights paired with [`GL8_NODES`].
pub const GL8_WEIGHTS: [f64; 8] = [
    0.1012285362903763,
    0.2223810344533745,
    0.3137066458778873,
    0.3626837833783620,
    0.3626837833783620,
    0.3137066458778873,
    0.2223810344533745,
    0.1012285362903763,
];

/// Single 8-point Gauss-Legendre panel over [a, b].
pub fn gauss8<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        acc += GL8_WEIGHTS[i] * f(mid + half * GL8_NODES[i]);
    }
    acc * half
}

/// Integrates a bounded f over [a, b] whose derivatives blow up at b
/// (an (b - x)^(theta - 1)-type kink in some antiderivative order).
/// Panels halve geometrically toward b; after `levels` halvings the
/// remaining sliver has width (b-a)/2^levels and gets one plain panel,
/// which is adequate because f itself stays bounded.
pub fn gauss8_graded_right<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, levels: usize) -> f64 {
    debug_assert!(b > a);
    let mut acc = 0.0;
    let mut left = a;
    for _ in 0..levels {
        let mid = 0.5 * (left + b);
        if mid <= left || mid >= b {
            break;
        }
        acc += gauss8(&f, left, mid);
        left = mid;
    }
    acc + gauss8(&f, left, b)
}

/// Shape-preserving piecewise-cubic Hermite interpolant (Fritsch-Carlson
/// slope limiting). Monotone data yields a monotone interpolant, which the
/// cumulative-integral tables rely on.
#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl MonotoneCubic {
    /// Fits the interpolant. `xs` must be strictly increasing with at least
    /// two points; violations are programmer errors and panic.
    pub fn fit(xs: Vec<f64>, ys: Vec<f64>) -> Self {
        let n = xs.len();
        assert!(n >= 2, "need at least two points");
        assert_eq!(n, ys.len(), "xs/ys length mismatch");
        for w in xs.windows(2) {
            assert!(w[1] > w[0], "abscissae must be strictly increasing");
        }

        let mut h = vec![0.0; n - 1];
        let mut delta = vec![0.0; n - 1];
        for i in 0..n - 1 {
            h[i] = xs[i + 1] - xs[i];
            delta[i] = (ys[i + 1] - ys[i]) / h[i];
        }

        let mut ds = vec![0.0; n];
        if n == 2 {
            ds[0] = delta[0];
            ds[1] = delta[0];
        } else {
            ds[0] = edge_slope(h[0], h[1], delta[0], delta[1]);
            ds[n - 1] = edge_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
            for i in 1..n - 1 {
                if delta[i - 1] * delta[i] <= 0.0 {
                    ds[i] = 0.0;
                } else {
                    let w1 = 2.0 * h[i] + h[i - 1];
                    let w2 = h[i] + 2.0 * h[i - 1];
                    ds[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
                }
            }
        }

        MonotoneCubic { xs, ys, ds }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }

    /// Evaluates at x, clamping to the fitted domain. The clamp absorbs
    /// ulp-level overshoot when a query maps an interval endpoint onto the
    /// neighbouring table.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let i = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(j) => return self.ys[j],
            Err(j) => j - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        self.ys[i] * h00 + h * self.ds[i] * h10 + self.ys[i + 1] * h01 + h * self.ds[i + 1] * h11
    }
}

fn edge_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s * d0 <= 0.0 {
        0.0
    } else if d0 * d1 < 0.0 && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

pub const EULER_GAMMA: f64 = 0.5772156649015329;

/// E1(1), used to pick the branch of the inverse.
const E1_AT_ONE: f64 = 0.21938393439552062;

/// Exponential integral E1(x) = int_x^inf e^(-t)/t dt for x > 0.
/// Power series below 1, modified-Lentz continued fraction above.
pub fn exp_integral_e1(x: f64) -> f64 {
    assert!(x > 0.0 && x.is_finite(), "E1 requires finite x > 0");
    if x <= 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..=64 {
            let kf = k as f64;
            term *= -x / kf;
            let contrib = term / kf;
            sum -= contrib;
            if contrib.abs() < 1e-18 * sum.abs().max(1e-300) {
                break;
            }
        }
        -EULER_GAMMA - x.ln() + sum
    } else {
        (-x).exp() * exp_integral_e1_scaled_cf(x)
    }
}

/// e^x * E1(x) for x > 1, free of exponential underflow. The inverse solver
/// works in log domain through this form for small targets.
pub fn exp_integral_e1_scaled(x: f64) -> f64 {
    assert!(x > 1.0, "scaled form is for x > 1");
    exp_integral_e1_scaled_cf(x)
}

fn exp_integral_e1_scaled_cf(x: f64) -> f64 {
    // E1(x) = e^(-x) / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))
    let tiny = 1e-300;
    let b0 = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b0;
    let mut h = d;
    for i in 1..=500u32 {
        let a = -((i as f64) * (i as f64));
        let b = x + (2 * i + 1) as f64;
        d = b + a * d;
        if d.abs() < tiny {
            d = tiny;
        }
        d = 1.0 / d;
        c = b + a / c;
        if c.abs() < tiny {
            c = tiny;
        }
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

/// Inverse of E1: returns x > 0 with E1(x) = t, for t > 0. Safeguarded
/// Newton with a maintained bracket; the small-t branch iterates on log E1
/// so targets near the underflow edge stay well-conditioned.
pub fn inv_exp_integral_e1(t: f64) -> f64 {
    assert!(t > 0.0 && t.is_finite(), "inverse E1 requires finite t > 0");
    if t >= E1_AT_ONE {
        // x in (0, 1]. E1(x) ~ -gamma - ln x near 0 gives the start.
        let mut x = (-EULER_GAMMA - t).exp().clamp(1e-300, 1.0);
        let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
        for _ in 0..200 {
            let f = exp_integral_e1(x) - t;
            if f > 0.0 {
                lo = x; // E1 decreasing: f > 0 means x too small
            } else {
                hi = x;
            }
            // f' = -e^(-x)/x
            let step = f * x * x.exp();
            let mut next = x + step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-16 * x {
                return next;
            }
            x = next;
        }
        x
    } else {
        // x > 1: solve ln E1(x) = ln t via the scaled form.
        let lt = -t.ln();
        let mut x = (lt - (lt + 1.0).ln()).max(1.0);
        let (mut lo, mut hi) = (1.0_f64, 800.0_f64);
        for _ in 0..200 {
            let h = exp_integral_e1_scaled_cf(x);
            let f = -x + h.ln() + lt; // ln E1 - ln t
            if f > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            // d/dx ln E1 = -1/(x h)
            let step = f * x * h;
            let mut next = x + step;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-16 * x {
                return next;
            }
            x = next;
        }
        x
    }
}

/// Euclidean projection onto the closed probability simplex
/// {x : x_i >= 0, sum x_i = 1}.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    assert!(!v.is_empty());
    let mut u: Vec<f64> = v.to_vec();
    u.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    let mut css = 0.0;
    let mut tau = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        css += uj;
        let cand = (css - 1.0) / (j + 1) as f64;
        if uj - cand > 0.0 {
            tau = cand;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn gauss8_integrates_low_degree_polynomials_exactly() {
        // degree 15 is the exactness limit for 8 points
        let val = gauss8(|x| x.powi(15) + 3.0 * x.powi(7) - x + 2.0, 0.0, 1.0);
        let exact = 1.0 / 16.0 + 3.0 / 8.0 - 0.5 + 2.0;
        assert!(
            (val - exact).abs() < 1e-15,
            "polynomial quadrature off: {val} vs {exact}"
        );
    }

    #[test]
    fn graded_panels_resolve_right_endpoint_kink() {
        // (1-x)^0.3 is bounded on [0,1] but has unbounded derivatives at 1,
        // exactly the kink class the density tables produce
        let g = |x: f64| (1.0 - x).powf(0.3);
        let exact = 1.0 / 1.3;
        let plain = gauss8(g, 0.0, 1.0);
        let graded = gauss8_graded_right(g, 0.0, 1.0, 54);
        assert!((graded - exact).abs() < 1e-14, "graded off: {graded}");
        assert!((graded - exact).abs() < (plain - exact).abs());
    }

    #[test]
    fn monotone_cubic_reproduces_nodes_and_preserves_monotonicity() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| x * x * (3.0 - 2.0 * x)).collect();
        let interp = MonotoneCubic::fit(xs.clone(), ys.clone());
        for (x, y) in xs.iter().zip(&ys) {
            assert_eq!(interp.eval(*x), *y, "node value must be exact");
        }
        let mut prev = interp.eval(0.0);
        for i in 1..=1000 {
            let x = i as f64 / 1000.0;
            let y = interp.eval(x);
            assert!(y >= prev - 1e-15, "monotonicity violated at {x}");
            prev = y;
        }
    }

    #[test]
    fn monotone_cubic_clamps_outside_domain() {
        let interp = MonotoneCubic::fit(vec![0.0, 1.0], vec![2.0, 5.0]);
        assert_eq!(interp.eval(-1.0), 2.0);
        assert_eq!(interp.eval(2.0), 5.0);
    }

    #[test]
    fn exp_integral_matches_reference_values() {
        // reference values computed with an independent arbitrary-precision tool
        let cases = [
            (1e-14, 31.658975637015118),
            (0.1, 1.8229239584193906),
            (1.0, 0.21938393439552062),
            (2.0, 0.048900510708061125),
            (10.0, 4.156968929685325e-6),
            (30.0, 3.0215520106888128e-15),
        ];
        for (x, want) in cases {
            let got = exp_integral_e1(x);
            assert!(
                rel_close(got, want, 1e-13),
                "E1({x}) = {got:e}, want {want:e}"
            );
        }
    }

    #[test]
    fn inverse_exp_integral_round_trips() {
        for &x in &[1e-12, 1e-6, 0.01, 0.5, 0.999, 1.0001, 2.0, 5.0, 20.0, 100.0, 500.0] {
            let t = exp_integral_e1(x);
            let back = inv_exp_integral_e1(t);
            assert!(
                rel_close(back, x, 1e-11),
                "round trip failed: x={x} -> t={t:e} -> {back}"
            );
        }
    }

    #[test]
    fn simplex_projection_known_cases() {
        // already on the simplex: unchanged
        let p = project_to_simplex(&[0.2, 0.3, 0.5]);
        assert!(p
            .iter()
            .zip([0.2, 0.3, 0.5])
            .all(|(a, b)| (a - b).abs() < 1e-15));
        // symmetric point projects to uniform
        let p = project_to_simplex(&[5.0, 5.0]);
        assert!((p[0] - 0.5).abs() < 1e-15 && (p[1] - 0.5).abs() < 1e-15);
        // dominated coordinate clips to zero
        let p = project_to_simplex(&[1.0, -1.0]);
        assert_eq!(p, vec![1.0, 0.0]);
    }

    #[test]
    fn simplex_projection_lands_on_simplex() {
        let v = [0.3, -2.0, 1.7, 0.01, 0.99];
        let p = project_to_simplex(&v);
        let sum: f64 = p.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
        assert!(p.iter().all(|&x| x >= 0.0));
    }
}
