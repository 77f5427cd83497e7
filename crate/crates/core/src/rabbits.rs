//! The Fibonacci recurrence as the hyperbolic operator `A = [[0, 1], [1, 1]]`.
//!
//! `A` has eigenvalues `phi` (unstable, eigenvector `(1, phi)`) and `-1/phi`
//! (stable, eigenvector `(1, -1/phi)`). A start that sits almost on the
//! stable line decays for a while and then escapes along the unstable one.

use serde::Serialize;

use crate::scalar::{sqrt_in, Real};

/// Digits of `sqrt(5)` used to build `phi` in every backend.
pub const ROOT_DIGITS: u32 = 50;

/// Value of `x1` that approximates `-1/phi` in the black-rabbit start.
pub const BLACK_RABBIT_X1: &str = "-0.618033988749";

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceRun<R: Real> {
    pub x0: R,
    pub x1: R,
    /// `x_0 ..= x_n`.
    pub seq: Vec<R>,
}

impl<R: Real> RecurrenceRun<R> {
    /// First index with `|x_n| > threshold`.
    pub fn first_exceeding(&self, threshold: f64) -> Option<usize> {
        self.seq.iter().position(|x| x.to_f64().abs() > threshold)
    }
}

/// One application of `A`: `(x_{n-2}, x_{n-1}) -> (x_{n-1}, x_n)`.
pub fn apply_operator<R: Real>(pair: &(R, R)) -> (R, R) {
    (pair.1.clone(), pair.0.clone() + pair.1.clone())
}

pub fn recurrence<R: Real>(x0: &R, x1: &R, n: usize) -> RecurrenceRun<R> {
    let mut seq = Vec::with_capacity(n.max(1) + 1);
    seq.push(x0.clone());
    seq.push(x1.clone());
    for i in 2..=n {
        let next = seq[i - 2].clone() + seq[i - 1].clone();
        seq.push(next);
    }
    seq.truncate(n.max(1) + 1);
    RecurrenceRun {
        x0: x0.clone(),
        x1: x1.clone(),
        seq,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenData {
    pub lambda_u: f64,
    pub lambda_s: f64,
    pub v_u: [f64; 2],
    pub v_s: [f64; 2],
    /// Coordinate along the unstable eigenvector.
    pub a_u: f64,
    /// Coordinate along the stable eigenvector.
    pub a_s: f64,
}

impl EigenData {
    /// `a_u phi^n + a_s (-1/phi)^n`.
    pub fn predict(&self, n: i32) -> f64 {
        self.a_u * self.lambda_u.powi(n) + self.a_s * self.lambda_s.powi(n)
    }

    pub fn reconstruct(&self) -> [f64; 2] {
        [
            self.a_u * self.v_u[0] + self.a_s * self.v_s[0],
            self.a_u * self.v_u[1] + self.a_s * self.v_s[1],
        ]
    }
}

fn root_digits<R: Real>(ctx: &R::Context) -> u32 {
    // decimal backends need sqrt(5) to at least their own precision
    R::backend(ctx)
        .precision_digits
        .map_or(ROOT_DIGITS, |p| ROOT_DIGITS.max(p + 10))
}

/// `(phi, sqrt(5))` in the given backend.
pub fn golden<R: Real>(ctx: &R::Context) -> (R, R) {
    let sqrt5 = sqrt_in::<R>(5, root_digits::<R>(ctx), ctx);
    let phi = (R::one(ctx) + sqrt5.clone()) / R::from_ratio(2, 1, ctx);
    (phi, sqrt5)
}

/// Coordinates of `(x0, x1)` in the eigenbasis, computed in `R` and reported in binary64.
pub fn decompose<R: Real>(x0: &R, x1: &R) -> EigenData {
    let ctx = x0.context();
    let (phi, sqrt5) = golden::<R>(&ctx);
    let a_u = (x1.clone() + x0.clone() / phi.clone()) / sqrt5;
    let a_s = x0.clone() - a_u.clone();
    let inv_phi = R::one(&ctx) / phi.clone();
    let lambda_u = phi.to_f64();
    let lambda_s = (-inv_phi).to_f64();
    EigenData {
        lambda_u,
        lambda_s,
        v_u: [1.0, lambda_u],
        v_s: [1.0, lambda_s],
        a_u: a_u.to_f64(),
        a_s: a_s.to_f64(),
    }
}

pub fn eigen_basis() -> EigenData {
    decompose(&0.0f64, &0.0f64)
}

/// Smallest `n` with `|a_u| phi^n > threshold`; `None` on the stable manifold.
pub fn predict_escape_index<R: Real>(x0: &R, x1: &R, threshold: f64) -> Option<u64> {
    let data = decompose(x0, x1);
    let magnitude = data.a_u.abs();
    if magnitude == 0.0 || threshold.is_nan() || threshold <= 0.0 {
        return None;
    }
    let level = (threshold / magnitude).ln() / data.lambda_u.ln();
    if level < 0.0 {
        Some(0)
    } else {
        Some(level.floor() as u64 + 1)
    }
}
