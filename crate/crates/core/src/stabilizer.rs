//! Six-tap predictive averaging.
//!
//! The stabilized sequence starts with six plain iterates of `f = T^k` and
//! then continues with `x*_n = a1 f(x*_{n-1}) + ... + a6 f(x*_{n-6})`. As a
//! map on six-dimensional states this is the companion map
//! `F(u1..u6) = (u2, .., u6, a1 f(u6) + .. + a6 f(u1))`; on each affine cell
//! of `f` with slope `mu` its Jacobian has characteristic polynomial
//! `l^6 - mu (a1 l^5 + a2 l^4 + .. + a6)`.

use std::collections::VecDeque;

use serde::Serialize;

use crate::cycles::enumerate_cycles;
use crate::error::{Error, Result};
use crate::poly;
use crate::scalar::Real;
use crate::tent::{itinerary, tent_power_step, MapParams};

pub const TAPS: usize = 6;
pub const DEFAULT_SIGMA: f64 = 1.2;

#[derive(Debug, Clone, PartialEq)]
pub struct Coefficients<R: Real> {
    pub sigma: R,
    pub a: [R; TAPS],
    /// Normalization making the weights sum to one.
    pub c: R,
}

impl<R: Real> Coefficients<R> {
    pub fn to_f64(&self) -> [f64; TAPS] {
        std::array::from_fn(|i| self.a[i].to_f64())
    }

    pub fn sum(&self) -> R {
        let ctx = self.sigma.context();
        self.a.iter().cloned().fold(R::zero(&ctx), |acc, v| acc + v)
    }
}

pub fn build_coefficients<R: Real>(sigma: &R) -> Result<Coefficients<R>> {
    let ctx = sigma.context();
    if *sigma <= R::one(&ctx) {
        return Err(Error::Invalid(format!(
            "sigma must exceed 1, got {}",
            sigma.to_text()
        )));
    }
    let int = |n: i64| R::from_ratio(n, 1, &ctx);
    let s1 = sigma.clone();
    let s2 = s1.clone() * s1.clone();
    let s3 = s2.clone() * s1.clone();
    let s5 = s3.clone() * s2.clone();
    let s7 = s5.clone() * s2.clone();

    let outer = s7.clone() - s5.clone();
    let middle = int(3) * s7.clone() - int(5) * s5.clone() + int(2) * s3.clone();
    let inner = int(5) * s7 - int(10) * s5 + int(6) * s3 - s1;

    let raw = [
        int(6) * outer.clone(),
        int(5) * middle.clone(),
        int(4) * inner.clone(),
        int(3) * inner,
        int(2) * middle,
        outer,
    ];
    let total = raw.iter().cloned().fold(R::zero(&ctx), |acc, v| acc + v);
    let c = R::one(&ctx) / total;
    let a = raw.map(|r| c.clone() * r);
    Ok(Coefficients {
        sigma: sigma.clone(),
        a,
        c,
    })
}

/// Weighted average `a1 f_1 + .. + a6 f_6`, summed left to right.
fn weighted<'a, R: Real>(coeffs: &Coefficients<R>, newest_first: impl Iterator<Item = &'a R>) -> R {
    let mut terms = coeffs.a.iter().zip(newest_first);
    let (a1, f1) = terms.next().expect("six taps");
    let mut acc = a1.clone() * f1.clone();
    for (a, f) in terms {
        acc = acc + a.clone() * f.clone();
    }
    acc
}

fn into_unit<R: Real>(x: R) -> Result<R> {
    x.clone()
        .clamp_unit()
        .ok_or_else(|| Error::OutOfUnit(x.to_text()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabRun<R: Real> {
    pub params: MapParams<R>,
    pub k: usize,
    pub coeffs: Coefficients<R>,
    pub x0: R,
    /// `x*_0 ..= x*_steps`.
    pub starred: Vec<R>,
}

impl<R: Real> StabRun<R> {
    pub fn final_value(&self) -> &R {
        self.starred.last().expect("at least the seed")
    }
}

fn check_run_args<R: Real>(x0: &R, k: usize, steps: usize) -> Result<R> {
    if k == 0 {
        return Err(Error::Invalid("power k must be at least 1".into()));
    }
    if steps < TAPS {
        return Err(Error::Invalid(format!(
            "stabilized runs need at least {TAPS} steps, got {steps}"
        )));
    }
    into_unit(x0.clone())
}

pub fn stabilized_orbit<R: Real>(
    x0: &R,
    params: &MapParams<R>,
    k: usize,
    coeffs: &Coefficients<R>,
    steps: usize,
) -> Result<StabRun<R>> {
    let start = check_run_args(x0, k, steps)?;
    let mut starred = Vec::with_capacity(steps + 1);
    let mut images = Vec::with_capacity(steps + 1);
    starred.push(start.clone());
    images.push(tent_power_step(&start, params, k)?);
    for n in 1..=steps {
        let next = if n < TAPS {
            images[n - 1].clone()
        } else {
            into_unit(weighted(coeffs, images[n - TAPS..n].iter().rev()))?
        };
        images.push(tent_power_step(&next, params, k)?);
        starred.push(next);
    }
    Ok(StabRun {
        params: params.clone(),
        k,
        coeffs: coeffs.clone(),
        x0: x0.clone(),
        starred,
    })
}

/// `x*_steps` without keeping the whole sequence.
pub fn stabilized_final<R: Real>(
    x0: &R,
    params: &MapParams<R>,
    k: usize,
    coeffs: &Coefficients<R>,
    steps: usize,
) -> Result<R> {
    let mut current = check_run_args(x0, k, steps)?;
    let mut images: VecDeque<R> = VecDeque::with_capacity(TAPS + 1);
    images.push_back(tent_power_step(&current, params, k)?);
    for n in 1..=steps {
        current = if n < TAPS {
            images.back().expect("seeded").clone()
        } else {
            into_unit(weighted(coeffs, images.iter().rev()))?
        };
        images.push_back(tent_power_step(&current, params, k)?);
        if images.len() > TAPS {
            images.pop_front();
        }
    }
    Ok(current)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompanionState<R: Real> {
    u: [R; TAPS],
}

impl<R: Real> CompanionState<R> {
    pub fn new(u: [R; TAPS]) -> Result<Self> {
        let u = u.into_iter().map(into_unit).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            u: u.try_into()
                .unwrap_or_else(|_| unreachable!("six components")),
        })
    }

    pub fn diagonal(s: R) -> Result<Self> {
        Self::new(std::array::from_fn(|_| s.clone()))
    }

    pub fn components(&self) -> &[R; TAPS] {
        &self.u
    }

    pub fn last(&self) -> &R {
        &self.u[TAPS - 1]
    }
}

pub fn companion_step<R: Real>(
    state: &CompanionState<R>,
    params: &MapParams<R>,
    k: usize,
    coeffs: &Coefficients<R>,
) -> Result<CompanionState<R>> {
    let images = state
        .u
        .iter()
        .map(|x| tent_power_step(x, params, k))
        .collect::<Result<Vec<_>>>()?;
    let last = weighted(coeffs, images.iter().rev());
    let mut u = state.u.clone();
    u.rotate_left(1);
    u[TAPS - 1] = last;
    CompanionState::new(u)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    /// Root magnitudes, largest first.
    pub magnitudes: [f64; TAPS],
    pub spectral_radius: f64,
}

/// Root magnitudes of `l^6 - mu (a1 l^5 + .. + a6)`.
pub fn companion_spectrum<R: Real>(mu: f64, coeffs: &Coefficients<R>) -> Result<Spectrum> {
    if !mu.is_finite() {
        return Err(Error::Invalid(format!("slope must be finite, got {mu}")));
    }
    let a = coeffs.to_f64();
    let mut poly_coeffs = vec![1.0];
    poly_coeffs.extend(a.iter().map(|ai| -mu * ai));
    let roots = poly::roots(&poly_coeffs)?;
    let mut magnitudes: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
    magnitudes.sort_by(|x, y| y.total_cmp(x));
    let magnitudes: [f64; TAPS] = magnitudes
        .try_into()
        .map_err(|_| Error::Invalid("degree-6 polynomial must have six roots".into()))?;
    Ok(Spectrum {
        spectral_radius: magnitudes[0],
        magnitudes,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumReport<R: Real> {
    pub point: R,
    /// Slope of `f = T^k` at the point.
    pub slope: R,
    pub spectral_radius: f64,
    pub stable: bool,
}

/// Stability of the diagonal state `(s, .., s)` under the companion map.
pub fn equilibrium_report<R: Real>(
    point: &R,
    params: &MapParams<R>,
    k: usize,
    coeffs: &Coefficients<R>,
) -> Result<EquilibriumReport<R>> {
    let slope = itinerary(point, params, k)?.slope_product;
    let spectrum = companion_spectrum(slope.to_f64(), coeffs)?;
    Ok(EquilibriumReport {
        point: point.clone(),
        slope,
        spectral_radius: spectrum.spectral_radius,
        stable: spectrum.spectral_radius < 1.0,
    })
}

/// Reports for the interior fixed points of `f = T^k`, ascending.
pub fn classify_equilibria<R: Real>(
    params: &MapParams<R>,
    k: usize,
    coeffs: &Coefficients<R>,
) -> Result<Vec<EquilibriumReport<R>>> {
    if k == 0 {
        return Err(Error::Invalid("power k must be at least 1".into()));
    }
    let zero = R::zero(&params.context());
    let mut points = Vec::new();
    for d in (1..=k).filter(|d| k.is_multiple_of(*d)) {
        for cycle in enumerate_cycles(params, d)? {
            points.extend(cycle.points.into_iter().filter(|x| *x != zero));
        }
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
    points
        .iter()
        .map(|x| equilibrium_report(x, params, k, coeffs))
        .collect()
}
