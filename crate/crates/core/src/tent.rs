//! The tent map `T_h`, its iterates, orbits and itineraries.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{branch_of, BackendSpec, Branch, Real};

/// Slope parameter of the tent map, validated to lie in `(1, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MapParams<R: Real> {
    h: R,
}

impl<R: Real> MapParams<R> {
    pub fn new(h: R) -> Result<Self> {
        let ctx = h.context();
        if h <= R::one(&ctx) || h > R::from_ratio(2, 1, &ctx) {
            return Err(Error::ParamRange(h.to_text()));
        }
        Ok(Self { h })
    }

    pub fn h(&self) -> &R {
        &self.h
    }

    pub fn context(&self) -> R::Context {
        self.h.context()
    }

    pub fn backend(&self) -> BackendSpec {
        R::backend(&self.context())
    }

    /// Slope of the branch used at `branch`: `h` or `-h`.
    pub fn slope(&self, branch: Branch) -> R {
        match branch {
            Branch::LeftBranch => self.h.clone(),
            Branch::RightBranch => -self.h.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<R: Real> {
    pub params: MapParams<R>,
    pub power: usize,
    pub x0: R,
    pub points: Vec<R>,
}

impl<R: Real> Orbit<R> {
    /// Rows for the `n,x` CSV layout.
    pub fn rows(&self) -> impl Iterator<Item = (usize, String)> + '_ {
        self.points
            .iter()
            .enumerate()
            .map(|(n, x)| (n, x.to_text()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Itinerary<R: Real> {
    pub symbols: String,
    #[serde(skip)]
    pub slope_product: R,
}

fn checked_unit<R: Real>(x: &R) -> Result<R> {
    x.clone()
        .clamp_unit()
        .ok_or_else(|| Error::OutOfUnit(x.to_text()))
}

/// One application of `T_h`: `h x` on `[0, 1/2]`, `h (1 - x)` on `(1/2, 1]`.
pub fn tent_step<R: Real>(x: &R, params: &MapParams<R>) -> Result<R> {
    let x = checked_unit(x)?;
    Ok(apply_branch(x, params))
}

fn apply_branch<R: Real>(x: R, params: &MapParams<R>) -> R {
    match branch_of(&x) {
        Branch::LeftBranch => params.h.clone() * x,
        Branch::RightBranch => {
            let one = R::one(&x.context());
            params.h.clone() * (one - x)
        }
    }
}

/// `T_h^k(x)`.
pub fn tent_power_step<R: Real>(x: &R, params: &MapParams<R>, k: usize) -> Result<R> {
    if k == 0 {
        return Err(Error::Invalid("power k must be at least 1".into()));
    }
    let mut y = checked_unit(x)?;
    for _ in 0..k {
        y = apply_branch(y, params);
    }
    Ok(y)
}

pub fn orbit<R: Real>(x0: &R, params: &MapParams<R>, k: usize, steps: usize) -> Result<Orbit<R>> {
    let start = checked_unit(x0)?;
    let mut points = Vec::with_capacity(steps + 1);
    points.push(start.clone());
    let mut current = start;
    for _ in 0..steps {
        current = tent_power_step(&current, params, k)?;
        points.push(current.clone());
    }
    Ok(Orbit {
        params: params.clone(),
        power: k,
        x0: x0.clone(),
        points,
    })
}

/// Branch symbols of `x0, T x0, ..., T^{n-1} x0` and the product of their slopes.
pub fn itinerary<R: Real>(x0: &R, params: &MapParams<R>, n: usize) -> Result<Itinerary<R>> {
    if n == 0 {
        return Err(Error::Invalid("itinerary length must be at least 1".into()));
    }
    let mut x = checked_unit(x0)?;
    let mut symbols = String::with_capacity(n);
    let mut slope_product = R::one(&params.context());
    for _ in 0..n {
        let branch = branch_of(&x);
        symbols.push(branch.symbol());
        slope_product = slope_product * params.slope(branch);
        x = apply_branch(x, params);
    }
    Ok(Itinerary {
        symbols,
        slope_product,
    })
}
