//! Fixed points, 2-cycles, periodic-orbit enumeration and onset thresholds.
//!
//! On a cell of points sharing an itinerary `w` of length `n`, `T^n` is the
//! affine map `x -> S x + B` with `S = (-1)^{#R} h^n`. Each word therefore
//! has at most one candidate periodic point `B / (1 - S)`, which is kept only
//! if its actual itinerary is `w`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{branch_of, Branch, Real};
use crate::tent::{tent_step, MapParams};

pub const MAX_ENUMERATION_PERIOD: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct Cycle<R: Real> {
    pub period: usize,
    /// Orbit order, starting from the smallest point.
    pub points: Vec<R>,
    pub itinerary: String,
    pub multiplier: R,
}

/// Text form of a cycle for JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CycleRecord {
    pub period: usize,
    pub points: Vec<String>,
    pub itinerary: String,
    pub multiplier: String,
}

impl<R: Real> Cycle<R> {
    pub fn to_record(&self) -> CycleRecord {
        CycleRecord {
            period: self.period,
            points: self.points.iter().map(Real::to_text).collect(),
            itinerary: self.itinerary.clone(),
            multiplier: self.multiplier.to_text(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OnsetRecord {
    pub period: u32,
    /// Integer coefficients, highest degree first.
    pub polynomial: Vec<i64>,
    pub threshold: f64,
}

/// `h / (h + 1)`, the interior fixed point of `T_h`.
pub fn fixed_point<R: Real>(params: &MapParams<R>) -> R {
    let h = params.h().clone();
    let one = R::one(&params.context());
    h.clone() / (h + one)
}

/// `(h / (1 + h^2), h^2 / (1 + h^2))`.
pub fn two_cycle<R: Real>(params: &MapParams<R>) -> (R, R) {
    let h = params.h().clone();
    let h2 = h.clone() * h.clone();
    let denom = R::one(&params.context()) + h2.clone();
    (h / denom.clone(), h2 / denom)
}

fn word_symbol(word: u32, n: usize, t: usize) -> Branch {
    // symbol t is bit (n - 1 - t), so words compare like strings
    if (word >> (n - 1 - t)) & 1 == 0 {
        Branch::LeftBranch
    } else {
        Branch::RightBranch
    }
}

fn rotate(word: u32, n: usize, by: usize) -> u32 {
    let mask = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    ((word << by) | (word >> (n - by))) & mask
}

/// Primitive words that are the smallest of their rotations (Lyndon words).
fn is_lyndon(word: u32, n: usize) -> bool {
    (1..n).all(|r| rotate(word, n, r) > word)
}

/// Fixed point of the affine piece of `T^n` selected by `word`.
fn cell_fixed_point<R: Real>(word: u32, n: usize, params: &MapParams<R>) -> R {
    let ctx = params.context();
    let h = params.h().clone();
    let mut slope = R::one(&ctx);
    let mut offset = R::zero(&ctx);
    for t in 0..n {
        match word_symbol(word, n, t) {
            Branch::LeftBranch => {
                slope = h.clone() * slope;
                offset = h.clone() * offset;
            }
            Branch::RightBranch => {
                slope = -(h.clone() * slope);
                offset = h.clone() - h.clone() * offset;
            }
        }
    }
    offset / (R::one(&ctx) - slope)
}

fn close<R: Real>(a: &R, b: &R, tol: f64) -> bool {
    if tol == 0.0 {
        a == b
    } else {
        (a.clone() - b.clone()).to_f64().abs() <= tol
    }
}

/// Solve every rotation of a Lyndon word and check the orbit really follows it.
fn cycle_for_word<R: Real>(word: u32, n: usize, params: &MapParams<R>) -> Option<Cycle<R>> {
    let ctx = params.context();
    let tol = R::resolution(&ctx);
    let zero = R::zero(&ctx);
    let one = R::one(&ctx);
    let half = R::half(&ctx);
    let mut points = Vec::with_capacity(n);
    for t in 0..n {
        let x = cell_fixed_point(rotate(word, n, t), n, params);
        if x < zero || x > one {
            return None;
        }
        let branch = branch_of(&x);
        if branch != word_symbol(word, n, t) && !close(&x, &half, tol) {
            return None;
        }
        points.push(x);
    }
    // consecutive points must be images of each other
    for t in 0..n {
        let image = tent_step(&points[t], params).ok()?;
        if !close(&image, &points[(t + 1) % n], tol.max(0.0) * 16.0) {
            return None;
        }
    }
    // minimal period: pairwise distinct
    for i in 0..n {
        for j in i + 1..n {
            if close(&points[i], &points[j], tol) {
                return None;
            }
        }
    }
    let start = (0..n)
        .min_by(|&a, &b| points[a].partial_cmp(&points[b]).expect("ordered"))
        .expect("n >= 1");
    points.rotate_left(start);
    let mut itinerary = String::with_capacity(n);
    let mut multiplier = R::one(&ctx);
    for x in &points {
        let branch = branch_of(x);
        itinerary.push(branch.symbol());
        multiplier = multiplier * params.slope(branch);
    }
    Some(Cycle {
        period: n,
        points,
        itinerary,
        multiplier,
    })
}

fn same_point_set<R: Real>(a: &Cycle<R>, b: &Cycle<R>, tol: f64) -> bool {
    let mut sa: Vec<&R> = a.points.iter().collect();
    let mut sb: Vec<&R> = b.points.iter().collect();
    sa.sort_by(|x, y| x.partial_cmp(y).expect("ordered"));
    sb.sort_by(|x, y| x.partial_cmp(y).expect("ordered"));
    sa.len() == sb.len() && sa.iter().zip(&sb).all(|(x, y)| close(*x, *y, tol))
}

/// All cycles of `T_h` with minimal period `n`, each once, sorted by smallest point.
pub fn enumerate_cycles<R: Real>(params: &MapParams<R>, n: usize) -> Result<Vec<Cycle<R>>> {
    if n == 0 {
        return Err(Error::Invalid("period must be at least 1".into()));
    }
    if n > MAX_ENUMERATION_PERIOD {
        return Err(Error::PeriodTooLarge(n));
    }
    let mut found: Vec<Cycle<R>> = (0u32..(1u32 << n))
        .into_par_iter()
        .filter(|&w| is_lyndon(w, n))
        .filter_map(|w| cycle_for_word(w, n, params))
        .collect();
    found.sort_by(|a, b| a.points[0].partial_cmp(&b.points[0]).expect("ordered"));
    let tol = R::resolution(&params.context());
    let mut unique: Vec<Cycle<R>> = Vec::with_capacity(found.len());
    for c in found {
        if !unique.iter().any(|u| same_point_set(u, &c, tol)) {
            unique.push(c);
        }
    }
    Ok(unique)
}

/// Product of branch slopes around the cycle.
pub fn cycle_multiplier<R: Real>(cycle: &Cycle<R>, params: &MapParams<R>) -> Result<R> {
    let n = cycle.points.len();
    if n == 0 || n != cycle.period {
        return Err(Error::Invalid("cycle has no points or wrong period".into()));
    }
    let tol = R::resolution(&params.context()) * 16.0;
    let mut product = R::one(&params.context());
    for (i, x) in cycle.points.iter().enumerate() {
        let image = tent_step(x, params)?;
        if !close(&image, &cycle.points[(i + 1) % n], tol) {
            return Err(Error::Invalid(format!(
                "T({}) does not return the next cycle point",
                x.to_text()
            )));
        }
        product = product * params.slope(branch_of(x));
    }
    Ok(product)
}

fn eval_poly(coeffs: &[i64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c as f64)
}

/// Bisection on `[lo, hi]`, assuming a sign change.
pub fn bisect(
    f: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    tol: f64,
    max_iter: usize,
) -> Result<f64> {
    let mut f_lo = f(lo);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f(hi) == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f(hi).signum() {
        return Err(Error::Invalid(format!("no sign change on [{lo}, {hi}]")));
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    if hi - lo <= tol {
        Ok(0.5 * (lo + hi))
    } else {
        Err(Error::NoConvergence(max_iter))
    }
}

pub fn onset_polynomial(period: u32) -> Result<Vec<i64>> {
    Ok(match period {
        3 => vec![1, -1, -1],
        5 => vec![1, -1, -1, 1, -1],
        // h^2 = phi, so h^4 - h^2 - 1 = 0
        6 => vec![1, 0, -1, 0, -1],
        7 => vec![1, -1, -1, 1, -1, 1, -1],
        other => return Err(Error::UnsupportedPeriod(other)),
    })
}

/// Smallest `h` at which a cycle of the given period exists.
pub fn onset_threshold(period: u32) -> Result<OnsetRecord> {
    let polynomial = onset_polynomial(period)?;
    let p = |x: f64| eval_poly(&polynomial, x);
    // scan down from 2 for the largest sign change in (1, 2]
    const CELLS: usize = 1000;
    let width = 1.0 / CELLS as f64;
    let mut bracket = None;
    for i in (0..CELLS).rev() {
        let (lo, hi) = (1.0 + i as f64 * width, 1.0 + (i + 1) as f64 * width);
        if p(lo).signum() != p(hi).signum() || p(hi) == 0.0 {
            bracket = Some((lo, hi));
            break;
        }
    }
    let (lo, hi) =
        bracket.ok_or_else(|| Error::Invalid(format!("no root in (1, 2] for period {period}")))?;
    let threshold = bisect(p, lo, hi, 1e-12, 200)?;
    Ok(OnsetRecord {
        period,
        polynomial,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tent::tent_power_step;
    use num_rational::BigRational;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    fn rparams(p: i64, q: i64) -> MapParams<BigRational> {
        MapParams::new(rat(p, q)).unwrap()
    }

    #[test]
    fn fixed_point_examples() {
        let r = rparams(3, 2);
        assert_eq!(fixed_point(&r), rat(3, 5));
        let two = rparams(2, 1);
        assert_eq!(fixed_point(&two), rat(2, 3));
        assert_eq!(tent_step(&rat(2, 3), &two).unwrap(), rat(2, 3));
        for hp in 101..=200 {
            let p = rparams(hp, 100);
            let s = fixed_point(&p);
            assert_eq!(tent_step(&s, &p).unwrap(), s);
        }
    }

    #[test]
    fn two_cycle_examples() {
        let r = rparams(3, 2);
        assert_eq!(two_cycle(&r), (rat(6, 13), rat(9, 13)));
        let two = rparams(2, 1);
        let (a, b) = two_cycle(&two);
        assert_eq!((a.clone(), b.clone()), (rat(2, 5), rat(4, 5)));
        assert_eq!(tent_step(&a, &two).unwrap(), b);
        assert_eq!(tent_step(&b, &two).unwrap(), a);
        assert_eq!(tent_power_step(&a, &two, 2).unwrap(), a);
    }

    #[test]
    fn enumerate_period_two_at_three_halves() {
        let cycles = enumerate_cycles(&rparams(3, 2), 2).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].points, vec![rat(6, 13), rat(9, 13)]);
        assert_eq!(cycles[0].itinerary, "LR");
        assert_eq!(cycles[0].multiplier, rat(-9, 4));
    }

    #[test]
    fn enumerate_fixed_points_includes_zero() {
        let cycles = enumerate_cycles(&rparams(3, 2), 1).unwrap();
        let pts: Vec<_> = cycles.iter().map(|c| c.points[0].clone()).collect();
        assert_eq!(pts, vec![rat(0, 1), rat(3, 5)]);
    }

    #[test]
    fn no_three_cycle_below_golden_ratio() {
        assert!(enumerate_cycles(&rparams(3, 2), 3).unwrap().is_empty());
        assert!(enumerate_cycles(&MapParams::new(1.5).unwrap(), 3)
            .unwrap()
            .is_empty());
    }

    /// Sign changes of T^3(x) - x on a dense grid, skipping those explained by lower periods.
    fn grid_three_cycle_points(h: f64) -> Vec<f64> {
        let p = MapParams::new(h).unwrap();
        let n = 200_000;
        let g = |x: f64| tent_power_step(&x, &p, 3).unwrap() - x;
        let mut roots = Vec::new();
        for i in 0..n {
            let (a, b) = (i as f64 / n as f64, (i + 1) as f64 / n as f64);
            if g(a).signum() != g(b).signum() {
                let x = bisect(g, a, b, 1e-14, 200).unwrap();
                let fixed = (tent_step(&x, &p).unwrap() - x).abs() < 1e-9;
                if !fixed {
                    roots.push(x);
                }
            }
        }
        roots
    }

    #[test]
    fn three_cycles_above_golden_ratio_match_grid_oracle() {
        let p = MapParams::new(1.7).unwrap();
        let cycles = enumerate_cycles(&p, 3).unwrap();
        assert!(!cycles.is_empty());
        let mut enumerated: Vec<f64> = cycles.iter().flat_map(|c| c.points.clone()).collect();
        enumerated.sort_by(f64::total_cmp);
        let grid = grid_three_cycle_points(1.7);
        assert_eq!(enumerated.len(), grid.len());
        for (a, b) in enumerated.iter().zip(&grid) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        for c in &cycles {
            for x in &c.points {
                assert!((tent_power_step(x, &p, 3).unwrap() - x).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn multiplier_examples() {
        let r = rparams(3, 2);
        let two = &enumerate_cycles(&r, 2).unwrap()[0];
        assert_eq!(cycle_multiplier(two, &r).unwrap(), rat(-9, 4));
        let fixed = enumerate_cycles(&r, 1).unwrap();
        assert_eq!(cycle_multiplier(&fixed[1], &r).unwrap(), rat(-3, 2));
        assert_eq!(cycle_multiplier(&fixed[0], &r).unwrap(), rat(3, 2));
        let bogus = Cycle {
            period: 2,
            points: vec![rat(1, 3), rat(1, 2)],
            itinerary: "LL".into(),
            multiplier: rat(9, 4),
        };
        assert!(cycle_multiplier(&bogus, &r).is_err());
    }

    #[test]
    fn period_bound() {
        assert!(matches!(
            enumerate_cycles(&MapParams::new(1.5).unwrap(), 21),
            Err(Error::PeriodTooLarge(21))
        ));
    }

    #[test]
    fn onset_values() {
        let expect = [
            (3, 1.618033988749895),
            (5, 1.512876396),
            (6, 1.272019649514069),
            (7, 1.465571231876768),
        ];
        for (period, value) in expect {
            let rec = onset_threshold(period).unwrap();
            assert!(
                (rec.threshold - value).abs() < 1e-8,
                "{period}: {}",
                rec.threshold
            );
            assert!(eval_poly(&rec.polynomial, rec.threshold).abs() < 1e-10);
        }
        assert!(matches!(
            onset_threshold(4),
            Err(Error::UnsupportedPeriod(4))
        ));
    }

    #[test]
    fn onset_brackets_enumeration() {
        for period in [3u32, 5, 6, 7] {
            let t = onset_threshold(period).unwrap().threshold;
            let below =
                enumerate_cycles(&MapParams::new(t - 1e-3).unwrap(), period as usize).unwrap();
            let above =
                enumerate_cycles(&MapParams::new(t + 1e-3).unwrap(), period as usize).unwrap();
            assert!(below.is_empty(), "period {period} below");
            assert!(!above.is_empty(), "period {period} above");
        }
    }

    /// Aperiodic binary necklaces of length n, counted by brute force over all words.
    fn necklace_oracle(n: usize) -> usize {
        let mut primitive = 0;
        for w in 0u32..(1 << n) {
            let s: Vec<u32> = (0..n).map(|t| (w >> t) & 1).collect();
            let periodic = (1..n).any(|d| n.is_multiple_of(d) && (0..n).all(|i| s[i] == s[i % d]));
            if !periodic {
                primitive += 1;
            }
        }
        primitive / n
    }

    #[test]
    fn full_tent_counts_match_necklaces() {
        let two = rparams(2, 1);
        for n in 1..=9 {
            let cycles = enumerate_cycles(&two, n).unwrap();
            let expected = if n == 1 { 2 } else { necklace_oracle(n) };
            assert_eq!(cycles.len(), expected, "n = {n}");
        }
    }

    #[test]
    fn rational_cycles_have_zero_residual() {
        let p = rparams(19, 10);
        for n in 1..=6 {
            for c in enumerate_cycles(&p, n).unwrap() {
                for x in &c.points {
                    assert_eq!(tent_power_step(x, &p, n).unwrap(), *x);
                }
                assert_eq!(cycle_multiplier(&c, &p).unwrap(), c.multiplier);
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(50))]
            #[test]
            fn closed_forms_match_enumeration(hp in 1001i64..=2000) {
                let p = rparams(hp, 1000);
                let fixed = enumerate_cycles(&p, 1).unwrap();
                prop_assert_eq!(fixed.len(), 2);
                prop_assert_eq!(&fixed[0].points[0], &rat(0, 1));
                prop_assert_eq!(&fixed[1].points[0], &fixed_point(&p));
                let two = enumerate_cycles(&p, 2).unwrap();
                prop_assert_eq!(two.len(), 1);
                let (a, b) = two_cycle(&p);
                prop_assert_eq!(two[0].points.clone(), vec![a, b]);
            }
        }
    }
}
