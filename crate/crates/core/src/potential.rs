//! The combined Hulthén + Yukawa + inverse-quadratic potential, its three
//! named limits and the Greene–Aldrich surrogates for 1/r² and 1/r.

use serde::{Deserialize, Serialize};

use crate::constants::{hbar2_over_2mu, Molecule, PhysicalConstants};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PotentialParams {
    /// Hulthén depth.
    pub v0: f64,
    /// Yukawa strength.
    pub a: f64,
    /// Inverse-quadratic strength.
    pub b: f64,
    /// Constant offset (the asymptote).
    pub c: f64,
    /// Screening parameter.
    pub alpha: f64,
}

impl PotentialParams {
    pub fn new(v0: f64, a: f64, b: f64, c: f64, alpha: f64) -> Result<Self> {
        let p = Self { v0, a, b, c, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn from_molecule(m: &Molecule, v0: f64) -> Self {
        Self {
            v0,
            a: m.a,
            b: m.b,
            c: m.c,
            alpha: m.alpha,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let all_finite = [self.v0, self.a, self.b, self.c, self.alpha]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::domain("potential parameters must be finite"));
        }
        if !(self.alpha > 0.0) {
            return Err(Error::domain(format!(
                "screening parameter must be positive, got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn hulthen_only(&self) -> Self {
        Self {
            a: 0.0,
            b: 0.0,
            c: 0.0,
            ..*self
        }
    }

    pub fn yukawa_only(&self) -> Self {
        Self {
            v0: 0.0,
            b: 0.0,
            c: 0.0,
            ..*self
        }
    }

    pub fn inverse_quadratic_only(&self) -> Self {
        Self {
            v0: 0.0,
            a: 0.0,
            c: 0.0,
            ..*self
        }
    }
}

fn check_r(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must be positive and finite, got {r}")))
    }
}

/// e^{-2αr} / (1 - e^{-2αr}) without cancellation for small αr.
fn hulthen_ratio(r: f64, alpha: f64) -> f64 {
    let x = 2.0 * alpha * r;
    1.0 / x.exp_m1()
}

/// V(r) = -V0 e^{-2αr}/(1-e^{-2αr}) - A e^{-αr}/r + B/r² + C.
pub fn potential(r: f64, p: &PotentialParams) -> Result<f64> {
    check_r(r)?;
    Ok(potential_unchecked(r, p))
}

#[inline]
pub(crate) fn potential_unchecked(r: f64, p: &PotentialParams) -> f64 {
    let mut v = p.c;
    if p.v0 != 0.0 {
        v -= p.v0 * hulthen_ratio(r, p.alpha);
    }
    if p.a != 0.0 {
        v -= p.a * (-p.alpha * r).exp() / r;
    }
    if p.b != 0.0 {
        v += p.b / (r * r);
    }
    v
}

pub fn hulthen(r: f64, v0: f64, alpha: f64) -> Result<f64> {
    check_r(r)?;
    Ok(-v0 * hulthen_ratio(r, alpha))
}

pub fn yukawa(r: f64, a: f64, alpha: f64) -> Result<f64> {
    check_r(r)?;
    Ok(-a * (-alpha * r).exp() / r)
}

pub fn inverse_quadratic(r: f64, b: f64) -> Result<f64> {
    check_r(r)?;
    Ok(b / (r * r))
}

/// Greene–Aldrich surrogate for 1/r²: 4α² e^{-2αr} / (1 - e^{-2αr})².
pub fn greene_aldrich_inv_r2(r: f64, alpha: f64) -> Result<f64> {
    check_r(r)?;
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha must be positive"));
    }
    let em1 = (2.0 * alpha * r).exp_m1();
    // e^{-x}/(1-e^{-x})^2 = e^{x}/(e^{x}-1)^2
    Ok(4.0 * alpha * alpha * (em1 + 1.0) / (em1 * em1))
}

/// Greene–Aldrich surrogate for 1/r with the mixed exponents as published:
/// 2α e^{-αr} / (1 - e^{-2αr}).
pub fn greene_aldrich_inv_r(r: f64, alpha: f64) -> Result<f64> {
    check_r(r)?;
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha must be positive"));
    }
    // 2α e^{-αr}/(1-e^{-2αr}) = α / sinh(αr)
    Ok(alpha / (alpha * r).sinh())
}

/// V(r) plus the centrifugal barrier ħ²l(l+1)/2μr².
pub fn effective_potential(r: f64, p: &PotentialParams, l: u32, mu: f64, constants: &PhysicalConstants) -> Result<f64> {
    check_r(r)?;
    let k = hbar2_over_2mu(mu, constants)?;
    let ll = f64::from(l) * (f64::from(l) + 1.0);
    Ok(potential_unchecked(r, p) + k * ll / (r * r))
}

/// One sample of the potential-curve figures: the full potential and its
/// three components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveSample {
    pub r: f64,
    pub full: f64,
    pub hulthen: f64,
    pub yukawa: f64,
    pub inverse_quadratic: f64,
}

/// Samples (r, F, F1, F2, F3) on a uniform grid over [r_start, r_end].
pub fn potential_curves(p: &PotentialParams, r_start: f64, r_end: f64, points: usize) -> Result<Vec<CurveSample>> {
    p.validate()?;
    check_r(r_start)?;
    if !(r_end > r_start) || points < 2 {
        return Err(Error::domain("curve grid needs r_end > r_start and at least 2 points"));
    }
    let step = (r_end - r_start) / (points - 1) as f64;
    (0..points)
        .map(|i| {
            let r = r_start + step * i as f64;
            Ok(CurveSample {
                r,
                full: potential(r, p)?,
                hulthen: hulthen(r, p.v0, p.alpha)?,
                yukawa: yukawa(r, p.a, p.alpha)?,
                inverse_quadratic: inverse_quadratic(r, p.b)?,
            })
        })
        .collect()
}
