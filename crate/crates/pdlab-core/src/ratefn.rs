//! The rate-function ladder governing small-mutation-rate asymptotics:
//! staircase rates for single sticks, largest atoms and top-m vectors, the
//! homozygosity decay rate, and the selection-tilted rate with its discrete
//! supremum scan.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::simplex::{classify_ladder, OrderedFrequencies, SimplexPoint};

/// Interval-membership comparisons (p against a breakpoint 1/k) treat
/// points within this absolute distance of the breakpoint as lying ON it,
/// which resolves to the lower rate: the staircase is right-continuous and
/// its brackets are closed on the left.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// A nonnegative rate: finite value or +infinity (impossible event class).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RateValue {
    Finite(f64),
    Infinite,
}

impl RateValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            RateValue::Finite(v) => Some(v),
            RateValue::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, RateValue::Infinite)
    }
}

fn check_unit_interval(name: &'static str, p: f64) -> Result<f64> {
    if !p.is_finite() || p < 0.0 || p > 1.0 + BOUNDARY_TOL {
        return Err(Error::InvalidParameter {
            name,
            value: p,
            requirement: "in [0, 1]",
        });
    }
    Ok(p.min(1.0))
}

fn check_order(r: u32) -> Result<()> {
    if r < 2 {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r as f64,
            requirement: ">= 2",
        });
    }
    Ok(())
}

/// Staircase level of p in (0, 1]: the integer level L with
/// p in [1/(L+1), 1/L), boundary points resolving to the lower level.
fn ladder_level(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p <= 1.0 + BOUNDARY_TOL);
    let m = (1.0 / p).round();
    if m >= 1.0 && (p - 1.0 / m).abs() <= BOUNDARY_TOL {
        m - 1.0
    } else {
        (1.0 / p).floor()
    }
}

/// Rate for one stick fraction: 0 exactly at p = 1, else 1. A single
/// Beta(1, theta) stick concentrates at 1 as theta -> 0 and every other
/// value is reached at the same first-order cost.
pub fn single_stick_rate(p: f64) -> Result<RateValue> {
    let p = check_unit_interval("p", p)?;
    Ok(if (p - 1.0).abs() <= BOUNDARY_TOL {
        RateValue::Finite(0.0)
    } else {
        RateValue::Finite(1.0)
    })
}

/// Rate for the max of the first n sticks: the staircase truncated at n.
/// Implemented as an explicit interval scan (not via [`largest_atom_rate`])
/// so the min identity between the two is a genuine cross-check.
pub fn max_stick_rate(n: usize, p: f64) -> Result<RateValue> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    let p = check_unit_interval("p", p)?;
    if (p - 1.0).abs() <= BOUNDARY_TOL {
        return Ok(RateValue::Finite(0.0));
    }
    for k in 1..n {
        let lo = 1.0 / (k + 1) as f64;
        let hi = 1.0 / k as f64;
        let at_lo = (p - lo).abs() <= BOUNDARY_TOL;
        let at_hi = (p - hi).abs() <= BOUNDARY_TOL;
        if at_lo || (p > lo && p < hi && !at_hi) {
            return Ok(RateValue::Finite(k as f64));
        }
    }
    Ok(RateValue::Finite(n as f64))
}

/// Rate for the largest frequency: the full staircase, infinite at 0
/// (the largest atom cannot vanish).
pub fn largest_atom_rate(p: f64) -> Result<RateValue> {
    let p = check_unit_interval("p", p)?;
    if p == 0.0 {
        return Ok(RateValue::Infinite);
    }
    Ok(RateValue::Finite(ladder_level(p)))
}

/// Rate for the vector of the m largest frequencies at an ordered simplex
/// point. Four regimes: zero at the one-atom corner; l-1 when the mass
/// closes exactly after l positive coordinates; m plus the staircase of the
/// renormalized next atom when mass remains and the m-th coordinate is
/// positive; infinite otherwise.
pub fn top_m_rate(point: &SimplexPoint) -> RateValue {
    let c = point.coords();
    let m = c.len();
    let tol = BOUNDARY_TOL;

    // one-atom corner (1, 0, ..., 0)
    if (c[0] - 1.0).abs() <= tol && c.iter().skip(1).all(|&x| x <= tol) {
        return RateValue::Finite(0.0);
    }

    // mass closes after l coordinates, all positive up to l
    let mut prefix = 0.0;
    for (i, &x) in c.iter().enumerate() {
        let l = i + 1;
        prefix += x;
        if l >= 2
            && (prefix - 1.0).abs() <= tol
            && x > tol
            && c.iter().skip(l).all(|&rest| rest <= tol)
        {
            return RateValue::Finite((l - 1) as f64);
        }
    }

    let sum: f64 = c.iter().sum();
    let last = c[m - 1];
    if sum < 1.0 - tol && last > tol {
        let ratio = (last / (1.0 - sum)).min(1.0);
        return RateValue::Finite(m as f64 + ladder_level(ratio));
    }

    RateValue::Infinite
}

/// Rate for a full configuration: n - 1 when the point classifies as the
/// n-allele ladder state, infinite off the ladder.
pub fn configuration_rate(p: &OrderedFrequencies, tol: f64) -> RateValue {
    match classify_ladder(p, tol).n {
        Some(n) => RateValue::Finite((n - 1) as f64),
        None => RateValue::Infinite,
    }
}

/// Order-r homozygosity of a draw, as an interval: the residual mass could
/// sit in one untracked atom at most, so sum f_i^r brackets the true value
/// from below and adding residual^r brackets it from above.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomozygosityBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn homozygosity(p: &OrderedFrequencies, r: u32) -> Result<HomozygosityBounds> {
    check_order(r)?;
    let lower: f64 = p.freqs().iter().map(|&f| f.powi(r as i32)).sum();
    let upper = lower + p.residual().powi(r as i32);
    Ok(HomozygosityBounds { lower, upper })
}

/// Minimum of sum q_i^r over the n-allele ladder states: attained at equal
/// weights with value n^(1-r).
pub fn min_homozygosity_on_ladder(n: usize, r: u32) -> Result<(f64, Vec<f64>)> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            requirement: ">= 1",
        });
    }
    check_order(r)?;
    let value = (n as f64).powi(1 - r as i32);
    Ok((value, vec![1.0 / n as f64; n]))
}

/// Rate for the order-r homozygosity falling to p: the staircase in the
/// variable p^(1/(r-1)), implemented directly on the transformed
/// breakpoints 1/n^(r-1) so the identity with [`largest_atom_rate`] is a
/// genuine cross-check.
pub fn homozygosity_decay_rate(r: u32, p: f64) -> Result<RateValue> {
    check_order(r)?;
    let p = check_unit_interval("p", p)?;
    if p == 0.0 {
        return Ok(RateValue::Infinite);
    }
    if (p - 1.0).abs() <= BOUNDARY_TOL {
        return Ok(RateValue::Finite(0.0));
    }
    let e = (r - 1) as i32;
    let t = (1.0 / p).powf(1.0 / e as f64);
    let cand = t.round();
    let n = if cand >= 1.0 && (p - cand.powi(-e)).abs() <= BOUNDARY_TOL {
        cand
    } else {
        t.ceil()
    };
    Ok(RateValue::Finite(n - 1.0))
}

/// Which configurations achieve the tilted supremum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Minimizers {
    /// The one-atom corner (1, 0, ...): positive tilt concentrates there.
    SingleAtom,
    /// Equal-weight ladder states, by allele count; more than one entry
    /// means coexistence of distinct optimal configurations.
    AtomCounts(Vec<u64>),
}

/// Result of sup_p { s H_r(p) - S(p) } over the ladder closure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TiltedSupremum {
    pub s: f64,
    pub r: u32,
    pub sup_value: f64,
    pub minimizers: Minimizers,
    /// For s < 0, the real-valued relaxation argmin ((r-1)|s|)^(1/r) of
    /// |s|/x^(r-1) + x - 1: explains integer ties and guides n_max.
    pub relaxed_minimizer: Option<f64>,
}

/// Exact-rational scan state for integer |s|: f(n) = (a + (n-1) P) / P
/// with P = n^(r-1), compared by cross-multiplication in u128.
fn exact_f(a: u128, n: u64, r: u32) -> Option<(u128, u128)> {
    let p = (n as u128).checked_pow(r - 1)?;
    let num = p.checked_mul((n - 1) as u128)?.checked_add(a)?;
    Some((num, p))
}

fn exact_less(lhs: (u128, u128), rhs: (u128, u128)) -> Option<std::cmp::Ordering> {
    let l = lhs.0.checked_mul(rhs.1)?;
    let r = rhs.0.checked_mul(lhs.1)?;
    Some(l.cmp(&r))
}

/// Evaluates sup over p of the tilted objective s H_r - S. For s > 0 the
/// supremum is s at the one-atom corner. For s < 0 it reduces to
/// -min_n { |s| / n^(r-1) + n - 1 } over integers n >= 1, scanned up to
/// n_max with exact tie detection when s is an integer (tolerance 1e-9
/// otherwise). The scan certifies completeness: beyond n_max the objective
/// exceeds n_max - 1, so n_max >= best + 1 brackets every minimizer.
pub fn tilted_supremum(s: f64, r: u32, n_max: u64) -> Result<TiltedSupremum> {
    check_order(r)?;
    if !s.is_finite() || s == 0.0 {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            requirement: "finite and nonzero",
        });
    }
    if s > 0.0 {
        return Ok(TiltedSupremum {
            s,
            r,
            sup_value: s,
            minimizers: Minimizers::SingleAtom,
            relaxed_minimizer: None,
        });
    }

    let a = s.abs();
    let min_n_max = a.powf(1.0 / r as f64).ceil() as u64 + 2;
    if n_max < min_n_max {
        return Err(Error::InvalidParameter {
            name: "n_max",
            value: n_max as f64,
            requirement: "at least ceil(|s|^(1/r)) + 2 so the scan brackets the minimizer",
        });
    }

    let exact_a: Option<u128> = if s.fract() == 0.0 && a < 2f64.powi(40) {
        Some(a as u128)
    } else {
        None
    };

    let scan = if let Some(ai) = exact_a {
        exact_scan(ai, r, n_max)
    } else {
        None
    };
    let (best_val, minimizers) = match scan {
        Some(res) => res,
        None => float_scan(a, r, n_max),
    };

    let needed = (best_val + 1.0).ceil() as u64;
    if n_max < needed {
        return Err(Error::ScanNotBracketed {
            n_max,
            best: best_val,
            needed,
        });
    }

    Ok(TiltedSupremum {
        s,
        r,
        sup_value: -best_val,
        minimizers: Minimizers::AtomCounts(minimizers),
        relaxed_minimizer: Some(((r as f64 - 1.0) * a).powf(1.0 / r as f64)),
    })
}

fn exact_scan(a: u128, r: u32, n_max: u64) -> Option<(f64, Vec<u64>)> {
    let mut best: Option<(u128, u128)> = None;
    let mut winners: Vec<u64> = Vec::new();
    for n in 1..=n_max {
        let f = exact_f(a, n, r)?;
        match best {
            None => {
                best = Some(f);
                winners.push(n);
            }
            Some(b) => match exact_less(f, b)? {
                std::cmp::Ordering::Less => {
                    best = Some(f);
                    winners.clear();
                    winners.push(n);
                }
                std::cmp::Ordering::Equal => winners.push(n),
                std::cmp::Ordering::Greater => {}
            },
        }
    }
    let (num, den) = best?;
    Some((num as f64 / den as f64, winners))
}

fn float_scan(a: f64, r: u32, n_max: u64) -> (f64, Vec<u64>) {
    let tie_tol = 1e-9;
    let mut best = f64::INFINITY;
    let mut winners: Vec<u64> = Vec::new();
    for n in 1..=n_max {
        let nf = n as f64;
        let f = a / nf.powi(r as i32 - 1) + (nf - 1.0);
        if f < best - tie_tol {
            best = f;
            winners.clear();
            winners.push(n);
        } else if (f - best).abs() <= tie_tol {
            winners.push(n);
            if f < best {
                best = f;
            }
        }
    }
    (best, winners)
}

/// Which scaling of the selection intensity applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SelectionRegime {
    /// alpha(theta) * lambda(theta) -> 0: selection too weak to shift the
    /// rate function; the neutral configuration rate applies.
    Vanishing,
    /// alpha(theta) * lambda(theta) -> 1: the tilt enters at first order.
    Critical,
}

/// Rate function under selection strength s on the order-r homozygosity.
/// Vanishing regime: the neutral rate unchanged. Critical regime: the
/// neutral rate plus the tilt cost, normalized so the minimum over the
/// ladder is zero.
pub fn selection_rate(
    s: f64,
    r: u32,
    regime: SelectionRegime,
    p: &OrderedFrequencies,
    class_tol: f64,
) -> Result<RateValue> {
    check_order(r)?;
    if !s.is_finite() {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            requirement: "finite",
        });
    }
    let neutral = configuration_rate(p, class_tol);
    if matches!(regime, SelectionRegime::Vanishing) || s == 0.0 {
        return Ok(neutral);
    }
    let base = match neutral {
        RateValue::Infinite => return Ok(RateValue::Infinite),
        RateValue::Finite(v) => v,
    };
    let h = homozygosity(p, r)?.lower;
    if s > 0.0 {
        Ok(RateValue::Finite(base + s * (1.0 - h)))
    } else {
        let n_max = s.abs().ceil() as u64 + 2;
        let sup = tilted_supremum(s, r, n_max)?;
        // sup_value = -min_n f(n); the normalizing constant is that min
        Ok(RateValue::Finite(base + s.abs() * h + sup.sup_value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::OrderedFrequencies;

    fn of(vals: &[f64], residual: f64) -> OrderedFrequencies {
        OrderedFrequencies::sort_truncate(vals, residual, 0.0).unwrap()
    }

    fn fin(v: RateValue) -> f64 {
        v.finite().expect("expected finite rate")
    }

    #[test]
    fn single_stick_rate_is_zero_only_at_one() {
        assert_eq!(fin(single_stick_rate(1.0).unwrap()), 0.0);
        assert_eq!(fin(single_stick_rate(0.999).unwrap()), 1.0);
        assert_eq!(fin(single_stick_rate(0.0).unwrap()), 1.0);
        assert!(single_stick_rate(1.1).is_err());
    }

    #[test]
    fn largest_atom_rate_staircase_values() {
        let cases = [
            (1.0, 0.0),
            (0.75, 1.0),
            (0.5, 1.0),
            (0.49, 2.0),
            (1.0 / 3.0, 2.0),
            (0.25, 3.0),
            (0.2001, 4.0),
        ];
        for (p, want) in cases {
            assert_eq!(
                fin(largest_atom_rate(p).unwrap()),
                want,
                "rate at p={p}"
            );
        }
        assert!(largest_atom_rate(0.0).unwrap().is_infinite());
    }

    #[test]
    fn boundary_points_resolve_to_the_lower_rate() {
        // within 1e-12 of 1/3 from either side: treated as the breakpoint
        assert_eq!(fin(largest_atom_rate(1.0 / 3.0 + 1e-13).unwrap()), 2.0);
        assert_eq!(fin(largest_atom_rate(1.0 / 3.0 - 1e-13).unwrap()), 2.0);
        // clearly below: next step up
        assert_eq!(fin(largest_atom_rate(1.0 / 3.0 - 1e-9).unwrap()), 3.0);
    }

    #[test]
    fn max_stick_rate_truncates_at_n() {
        assert_eq!(fin(max_stick_rate(3, 1.0).unwrap()), 0.0);
        assert_eq!(fin(max_stick_rate(3, 0.6).unwrap()), 1.0);
        assert_eq!(fin(max_stick_rate(3, 0.4).unwrap()), 2.0);
        assert_eq!(fin(max_stick_rate(3, 0.1).unwrap()), 3.0);
        assert_eq!(fin(max_stick_rate(3, 0.0).unwrap()), 3.0);
        assert_eq!(fin(max_stick_rate(1, 0.3).unwrap()), 1.0);
    }

    #[test]
    fn max_stick_rate_equals_truncated_staircase_on_grid() {
        for n in 1..=10usize {
            for i in 0..=1000 {
                let p = i as f64 / 1000.0;
                let lhs = fin(max_stick_rate(n, p).unwrap());
                let rhs = match largest_atom_rate(p).unwrap() {
                    RateValue::Finite(v) => v.min(n as f64),
                    RateValue::Infinite => n as f64,
                };
                assert_eq!(lhs, rhs, "mismatch at n={n}, p={p}");
            }
        }
    }

    #[test]
    fn top_m_rate_four_branches() {
        let pt = |v: Vec<f64>| SimplexPoint::new(v).unwrap();
        // corner
        assert_eq!(top_m_rate(&pt(vec![1.0, 0.0])).finite(), Some(0.0));
        // closed mass after two coordinates
        assert_eq!(top_m_rate(&pt(vec![0.5, 0.5])).finite(), Some(1.0));
        assert_eq!(
            top_m_rate(&pt(vec![0.5, 0.3, 0.2])).finite(),
            Some(2.0)
        );
        assert_eq!(
            top_m_rate(&pt(vec![0.5, 0.5, 0.0])).finite(),
            Some(1.0)
        );
        // open mass: m plus renormalized staircase
        assert_eq!(top_m_rate(&pt(vec![0.5, 0.3])).finite(), Some(2.0));
        // ratio 0.1/0.4 = 0.25: staircase level 3, total 2 + 3
        assert_eq!(
            top_m_rate(&pt(vec![0.5, 0.1])).finite(),
            Some(5.0)
        );
        // degenerate: last coordinate zero with open mass
        assert!(top_m_rate(&pt(vec![0.7, 0.0])).is_infinite());
    }

    #[test]
    fn configuration_rate_matches_ladder_classification() {
        assert_eq!(
            configuration_rate(&of(&[1.0], 0.0), 1e-9).finite(),
            Some(0.0)
        );
        assert_eq!(
            configuration_rate(&of(&[0.5, 0.5], 0.0), 1e-9).finite(),
            Some(1.0)
        );
        assert!(configuration_rate(&of(&[0.5, 0.4], 0.1), 1e-9).is_infinite());
    }

    #[test]
    fn homozygosity_brackets_residual_mass() {
        let p = of(&[0.5, 0.25], 0.25);
        let h = homozygosity(&p, 2).unwrap();
        assert!((h.lower - 0.3125).abs() < 1e-15);
        assert!((h.upper - 0.375).abs() < 1e-15);
        assert!(homozygosity(&p, 1).is_err());
    }

    #[test]
    fn ladder_minimum_is_equal_weights() {
        let (v, q) = min_homozygosity_on_ladder(4, 3).unwrap();
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(q, vec![0.25; 4]);
    }

    #[test]
    fn homozygosity_decay_rate_matches_transformed_staircase() {
        for r in [2u32, 3, 4] {
            for i in 1..=1000 {
                let p = i as f64 / 1000.0;
                let lhs = homozygosity_decay_rate(r, p).unwrap();
                let rhs = largest_atom_rate(p.powf(1.0 / (r as f64 - 1.0))).unwrap();
                assert_eq!(lhs, rhs, "mismatch at r={r}, p={p}");
            }
        }
        assert!(homozygosity_decay_rate(2, 0.0).unwrap().is_infinite());
    }

    #[test]
    fn tilted_supremum_positive_tilt_concentrates() {
        let t = tilted_supremum(3.0, 2, 10).unwrap();
        assert_eq!(t.sup_value, 3.0);
        assert_eq!(t.minimizers, Minimizers::SingleAtom);
        assert!(t.relaxed_minimizer.is_none());
    }

    #[test]
    fn tilted_supremum_coexistence_ties() {
        for k in 1..=5u64 {
            let s = -((k * (k + 1)) as f64);
            let t = tilted_supremum(s, 2, 64).unwrap();
            assert_eq!(
                t.minimizers,
                Minimizers::AtomCounts(vec![k, k + 1]),
                "tie expected at s={s}"
            );
            assert_eq!(t.sup_value, -((2 * k) as f64));
        }
    }

    #[test]
    fn tilted_supremum_generic_tilt_has_unique_minimizer() {
        let t = tilted_supremum(-3.0, 2, 32).unwrap();
        // f(1) = 3, f(2) = 2.5, f(3) = 3: unique minimizer 2
        assert_eq!(t.minimizers, Minimizers::AtomCounts(vec![2]));
        assert_eq!(t.sup_value, -2.5);
        let nstar = t.relaxed_minimizer.unwrap();
        assert!((nstar - 3.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn tilted_supremum_validates_scan_depth() {
        assert!(tilted_supremum(-2.0, 2, 2).is_err());
        assert!(tilted_supremum(0.0, 2, 10).is_err());
        assert!(tilted_supremum(-2.0, 1, 10).is_err());
    }

    #[test]
    fn selection_rate_critical_zeroes_at_coexisting_states() {
        // s = -2, r = 2: scan min is 2, attained at n = 1 and n = 2
        let one = of(&[1.0], 0.0);
        let two = of(&[0.5, 0.5], 0.0);
        let s1 = selection_rate(-2.0, 2, SelectionRegime::Critical, &one, 1e-9).unwrap();
        let s2 = selection_rate(-2.0, 2, SelectionRegime::Critical, &two, 1e-9).unwrap();
        assert_eq!(s1.finite(), Some(0.0));
        assert_eq!(s2.finite(), Some(0.0));
        // a three-allele state costs: 2 + 2*(1/3) - 2 = 2/3
        let three = of(&[1.0 / 3.0; 3], 1.0 - 3.0 * (1.0 / 3.0));
        let s3 = selection_rate(-2.0, 2, SelectionRegime::Critical, &three, 1e-6).unwrap();
        assert!((fin(s3) - 2.0 / 3.0).abs() < 1e-9, "got {s3:?}");
    }

    #[test]
    fn selection_rate_vanishing_regime_is_neutral() {
        let two = of(&[0.5, 0.5], 0.0);
        let v = selection_rate(-6.0, 2, SelectionRegime::Vanishing, &two, 1e-9).unwrap();
        assert_eq!(v.finite(), Some(1.0));
    }

    #[test]
    fn selection_rate_positive_tilt_penalizes_coexistence() {
        let one = of(&[1.0], 0.0);
        let two = of(&[0.5, 0.5], 0.0);
        let s1 = selection_rate(3.0, 2, SelectionRegime::Critical, &one, 1e-9).unwrap();
        let s2 = selection_rate(3.0, 2, SelectionRegime::Critical, &two, 1e-9).unwrap();
        assert_eq!(s1.finite(), Some(0.0));
        // 1 + 3 * (1 - 1/2) = 2.5
        assert_eq!(s2.finite(), Some(2.5));
    }

    #[test]
    fn selection_rate_nonnegative_and_attains_zero_on_grid() {
        for &s in &[-6.0, -2.0, 1.0, 3.0] {
            for &r in &[2u32, 3] {
                let mut min_seen = f64::INFINITY;
                for n in 1..=8usize {
                    let p = of(&vec![1.0 / n as f64; n], 0.0);
                    let v = selection_rate(s, r, SelectionRegime::Critical, &p, 1e-9)
                        .unwrap();
                    if let Some(v) = v.finite() {
                        assert!(
                            v >= -1e-9,
                            "negative rate {v} at s={s}, r={r}, n={n}"
                        );
                        min_seen = min_seen.min(v);
                    }
                }
                assert!(
                    min_seen.abs() <= 1e-9,
                    "rate never vanishes for s={s}, r={r}: min {min_seen}"
                );
            }
        }
    }
}
