//! Initial-condition sweeps, outcome classification, flat-then-jump escape
//! detection, the chaotic series and the near-`sqrt(2)` precision run.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::{fixed_point, two_cycle};
use crate::error::{Error, Result};
use crate::scalar::{sqrt_in, Decimal, DecimalContext, Real};
use crate::stabilizer::{stabilized_final, Coefficients, StabRun};
use crate::tent::{orbit, MapParams, Orbit};

pub const MAX_NET_SIZE: u64 = 10_000_000;
pub const DEFAULT_FLAT_TOL: f64 = 1e-9;
pub const DEFAULT_JUMP_TOL: f64 = 1e-3;
pub const DEFAULT_MIN_FLAT: usize = 30;
pub const DEFAULT_TOLERANCE: f64 = 1e-3;

/// `h` from the precision experiment, a 57-fractional-digit truncation of `sqrt(2)`.
pub const SQRT2_DIGITS: &str = "1.414213562373095048801688724209698078569671875376948073176";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NetSpec {
    /// `i / n` for `i = 0..=n`.
    Uniform(u64),
    /// `i / (5 * 3^m)` for `i = 0..=5 * 3^m`.
    Triadic(u32),
}

impl NetSpec {
    pub fn denominator(&self) -> Result<u64> {
        match *self {
            NetSpec::Uniform(0) => Err(Error::Invalid("uniform net needs n >= 1".into())),
            NetSpec::Uniform(n) => Ok(n),
            NetSpec::Triadic(m) => 3u64
                .checked_pow(m)
                .and_then(|p| p.checked_mul(5))
                .ok_or(Error::NetTooLarge(u64::MAX)),
        }
    }

    pub fn size(&self) -> Result<u64> {
        Ok(self.denominator()? + 1)
    }
}

impl fmt::Display for NetSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NetSpec::Uniform(n) => write!(f, "uniform:{n}"),
            NetSpec::Triadic(m) => write!(f, "triadic:{m}"),
        }
    }
}

impl FromStr for NetSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("net must be uniform:N or triadic:M, got `{s}`"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "uniform" => Ok(NetSpec::Uniform(value.parse().map_err(|_| bad())?)),
            "triadic" => Ok(NetSpec::Triadic(value.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}

pub fn build_net<R: Real>(spec: &NetSpec, ctx: &R::Context) -> Result<Vec<R>> {
    let size = spec.size()?;
    if size > MAX_NET_SIZE {
        return Err(Error::NetTooLarge(size));
    }
    let den = BigInt::from(spec.denominator()?);
    Ok((0..size)
        .map(|i| R::from_big_ratio(&BigInt::from(i), &den, ctx))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    CycleLow,
    CycleHigh,
    FixedPoint,
    Unresolved,
}

impl OutcomeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            OutcomeKind::CycleLow => "cycle_low",
            OutcomeKind::CycleHigh => "cycle_high",
            OutcomeKind::FixedPoint => "fixed_point",
            OutcomeKind::Unresolved => "unresolved",
        }
    }
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<R: Real> {
    pub variant: OutcomeKind,
    pub final_value: R,
    /// Distance to the nearest target (whether or not within tolerance).
    pub distance: f64,
}

/// Classify a final value against the 2-cycle and the interior fixed point.
pub fn classify_value<R: Real>(value: &R, params: &MapParams<R>, tolerance: f64) -> Outcome<R> {
    let (low, high) = two_cycle(params);
    let fixed = fixed_point(params);
    // cycle targets first so they win ties
    let targets = [
        (OutcomeKind::CycleLow, low),
        (OutcomeKind::CycleHigh, high),
        (OutcomeKind::FixedPoint, fixed),
    ];
    let mut best = OutcomeKind::Unresolved;
    let mut best_distance = f64::INFINITY;
    for (kind, target) in targets {
        let d = (value.clone() - target).abs().to_f64();
        if d < best_distance {
            best_distance = d;
            best = kind;
        }
    }
    let variant = if best_distance < tolerance {
        best
    } else {
        OutcomeKind::Unresolved
    };
    Outcome {
        variant,
        final_value: value.clone(),
        distance: best_distance,
    }
}

pub fn classify_outcome<R: Real>(
    run: &StabRun<R>,
    params: &MapParams<R>,
    tolerance: f64,
) -> Outcome<R> {
    classify_value(run.final_value(), params, tolerance)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutcomeCounts {
    pub cycle_low: u64,
    pub cycle_high: u64,
    pub fixed_point: u64,
    pub unresolved: u64,
}

impl OutcomeCounts {
    fn record(&mut self, kind: OutcomeKind) {
        match kind {
            OutcomeKind::CycleLow => self.cycle_low += 1,
            OutcomeKind::CycleHigh => self.cycle_high += 1,
            OutcomeKind::FixedPoint => self.fixed_point += 1,
            OutcomeKind::Unresolved => self.unresolved += 1,
        }
    }

    pub fn total(&self) -> u64 {
        self.cycle_low + self.cycle_high + self.fixed_point + self.unresolved
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult<R: Real> {
    pub net: NetSpec,
    pub steps: usize,
    pub tolerance: f64,
    /// Net points in index order.
    pub points: Vec<R>,
    pub outcomes: Vec<Outcome<R>>,
    pub counts: OutcomeCounts,
}

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub k: usize,
    pub steps: usize,
    pub tolerance: f64,
    /// Worker threads; 0 lets rayon decide.
    pub threads: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            k: 2,
            steps: 50,
            tolerance: DEFAULT_TOLERANCE,
            threads: 0,
        }
    }
}

pub fn sweep<R: Real>(
    spec: &NetSpec,
    params: &MapParams<R>,
    coeffs: &Coefficients<R>,
    config: &SweepConfig,
) -> Result<SweepResult<R>> {
    let points = build_net::<R>(spec, &params.context())?;
    let work = || -> Result<Vec<Outcome<R>>> {
        points
            .par_iter()
            .map(|x0| {
                let last = stabilized_final(x0, params, config.k, coeffs, config.steps)?;
                Ok(classify_value(&last, params, config.tolerance))
            })
            .collect()
    };
    let outcomes = if config.threads == 0 {
        work()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?
            .install(work)?
    };
    let mut counts = OutcomeCounts::default();
    for o in &outcomes {
        counts.record(o.variant);
    }
    Ok(SweepResult {
        net: *spec,
        steps: config.steps,
        tolerance: config.tolerance,
        points,
        outcomes,
        counts,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EscapeEvent<R: Real> {
    pub flat_value: R,
    pub flat_start: usize,
    /// First index after the flat run (exclusive end).
    pub flat_end: usize,
    /// First index at or after `flat_end` deviating by at least the jump tolerance.
    pub escape_index: usize,
    pub terminal_value: R,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EscapeTolerances {
    pub flat_tol: f64,
    pub jump_tol: f64,
    pub min_flat: usize,
}

impl Default for EscapeTolerances {
    fn default() -> Self {
        Self {
            flat_tol: DEFAULT_FLAT_TOL,
            jump_tol: DEFAULT_JUMP_TOL,
            min_flat: DEFAULT_MIN_FLAT,
        }
    }
}

fn deviation<R: Real>(x: &R, from: &R) -> f64 {
    (x.clone() - from.clone()).abs().to_f64()
}

/// Longest run of at least `min_flat` values within `flat_tol` of the run's
/// first value that is later followed by a deviation of at least `jump_tol`.
pub fn detect_escape<R: Real>(series: &[R], tol: &EscapeTolerances) -> Option<EscapeEvent<R>> {
    if series.len() < tol.min_flat.max(1) {
        return None;
    }
    let mut best: Option<EscapeEvent<R>> = None;
    let mut start = 0;
    while start < series.len() {
        let anchor = &series[start];
        let mut end = start + 1;
        while end < series.len() && deviation(&series[end], anchor) <= tol.flat_tol {
            end += 1;
        }
        if end - start >= tol.min_flat {
            let jump = (end..series.len()).find(|&i| deviation(&series[i], anchor) >= tol.jump_tol);
            if let Some(escape_index) = jump {
                let longer = best
                    .as_ref()
                    .is_none_or(|b| end - start > b.flat_end - b.flat_start);
                if longer {
                    best = Some(EscapeEvent {
                        flat_value: anchor.clone(),
                        flat_start: start,
                        flat_end: end,
                        escape_index,
                        terminal_value: series.last().expect("nonempty").clone(),
                    });
                }
            }
        }
        start = end;
    }
    best
}

/// The orbit of the critical point 1/2 under `T_h`.
pub fn chaotic_series<R: Real>(params: &MapParams<R>, steps: usize) -> Result<Orbit<R>> {
    let half = R::half(&params.context());
    orbit(&half, params, 1, steps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sqrt2Report {
    pub orbit: Orbit<Decimal>,
    pub escape: Option<EscapeEvent<Decimal>>,
    /// `2 - sqrt(2)` at the run's precision.
    pub reference: Decimal,
}

impl Sqrt2Report {
    pub fn deviation(&self, n: usize) -> f64 {
        deviation(&self.orbit.points[n], &self.reference)
    }
}

pub const SQRT2_ESCAPE: EscapeTolerances = EscapeTolerances {
    flat_tol: DEFAULT_FLAT_TOL,
    jump_tol: 1e-2,
    min_flat: DEFAULT_MIN_FLAT,
};

fn significant_digits(text: &str) -> usize {
    let digits: String = text
        .trim()
        .trim_start_matches(['-', '+'])
        .chars()
        .take_while(|c| *c != 'e' && *c != 'E')
        .filter(|c| c.is_ascii_digit())
        .collect();
    digits.trim_start_matches('0').len().max(1)
}

/// Decimal orbit of 1/2 under `T_h` for a digit string `h` close to `sqrt(2)`.
pub fn sqrt2_experiment(h_digits: &str, precision: u32, steps: usize) -> Result<Sqrt2Report> {
    let needed = significant_digits(h_digits);
    if (precision as usize) < needed {
        return Err(Error::Invalid(format!(
            "precision {precision} is below the {needed} digits of h"
        )));
    }
    let ctx = DecimalContext::new(precision)?;
    let h = Decimal::parse(h_digits, &ctx)?;
    let params = MapParams::new(h)?;
    let orbit = chaotic_series(&params, steps)?;
    let reference =
        Decimal::from_ratio(&2.into(), &1.into(), &ctx) - sqrt_in::<Decimal>(2, precision, &ctx);
    let escape = detect_escape(&orbit.points, &SQRT2_ESCAPE);
    Ok(Sqrt2Report {
        orbit,
        escape,
        reference,
    })
}
