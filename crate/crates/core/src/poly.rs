//! Complex roots of real polynomials by Durand-Kerner iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ROOT_TOLERANCE: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 500;

fn eval(monic: &[f64], z: Complex64) -> Complex64 {
    monic
        .iter()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// All roots of the polynomial with `coeffs` (highest degree first, leading
/// coefficient nonzero). Exact zero trailing coefficients are returned as
/// zero roots without iterating.
pub fn roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let lead = *coeffs
        .first()
        .ok_or_else(|| Error::Invalid("empty polynomial".into()))?;
    if lead == 0.0 || !coeffs.iter().all(|c| c.is_finite()) {
        return Err(Error::Invalid(
            "leading coefficient must be finite and nonzero".into(),
        ));
    }
    let mut monic: Vec<f64> = coeffs.iter().map(|c| c / lead).collect();
    let mut out = Vec::with_capacity(monic.len() - 1);
    while monic.len() > 1 && *monic.last().expect("nonempty") == 0.0 {
        monic.pop();
        out.push(Complex64::new(0.0, 0.0));
    }
    let degree = monic.len() - 1;
    if degree == 0 {
        return Ok(out);
    }
    if degree == 1 {
        out.push(Complex64::new(-monic[1], 0.0));
        return Ok(out);
    }
    // Cauchy bound for the initial circle
    let radius = 1.0 + monic[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..degree).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..MAX_ITERATIONS {
        let mut largest_step = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..degree {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = eval(&monic, z[i]) / denom;
            z[i] -= step;
            largest_step = largest_step.max(step.norm() / z[i].norm().max(1.0));
        }
        if largest_step < ROOT_TOLERANCE * 1e-3 {
            out.extend(z);
            return Ok(out);
        }
    }
    Err(Error::NoConvergence(MAX_ITERATIONS))
}
