//! Plot-ready samples for the potential-curve and wave-function figures.

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::potential::{potential_curves, CurveSample, PotentialParams};
use crate::spectrum::{JacobiConvention, WaveFunction};

pub const CURVE_R_START: f64 = 0.05;
pub const CURVE_R_END: f64 = 10.0;
pub const CURVE_POINTS: usize = 512;
pub const FIGURE1_ALPHAS: [f64; 5] = [0.1, 0.2, 0.3, 0.4, 0.5];
pub const WAVE_POINTS: usize = 512;
pub const WAVE_N_MAX: u32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FigureKind {
    /// Potential curves for several screening parameters.
    PotentialByAlpha,
    /// Full potential against its three components.
    Components,
    /// ψ for one l, n = 0..=WAVE_N_MAX.
    WaveFunction { l: u32 },
    /// ψ² for l = 0..=5.
    Density,
}

impl FigureKind {
    pub fn from_id(id: u32) -> Result<Self> {
        match id {
            1 => Ok(Self::PotentialByAlpha),
            2 => Ok(Self::Components),
            3..=8 => Ok(Self::WaveFunction { l: id - 3 }),
            9 => Ok(Self::Density),
            _ => Err(Error::domain(format!("figure id must be 1..9, got {id}"))),
        }
    }

    pub fn ls(&self) -> Vec<u32> {
        match self {
            Self::WaveFunction { l } => vec![*l],
            Self::Density => (0..=5).collect(),
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AlphaCurveSample {
    pub alpha: f64,
    pub sample: CurveSample,
}

pub fn figure1(p: &PotentialParams, alphas: &[f64], points: usize) -> Result<Vec<AlphaCurveSample>> {
    let mut out = Vec::with_capacity(alphas.len() * points);
    for &alpha in alphas {
        let q = PotentialParams { alpha, ..*p };
        for sample in potential_curves(&q, CURVE_R_START, CURVE_R_END, points)? {
            out.push(AlphaCurveSample { alpha, sample });
        }
    }
    Ok(out)
}

pub fn figure2(p: &PotentialParams, points: usize) -> Result<Vec<CurveSample>> {
    potential_curves(p, CURVE_R_START, CURVE_R_END, points)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveSample {
    pub n: u32,
    pub l: u32,
    pub r: f64,
    pub psi: f64,
    pub density: f64,
}

/// Density below this fraction of its peak is treated as invisible.
pub const VISIBLE_FRACTION: f64 = 1e-8;

/// Radius that contains the visible part of every requested state: the
/// largest radius where some density is above VISIBLE_FRACTION of its
/// peak, plus 10%.
pub fn wave_r_end(waves: &[WaveFunction]) -> f64 {
    const SCAN: usize = 4000;
    let mut r_end = 0.0f64;
    for w in waves {
        let tail = w.tail_radius();
        let dens: Vec<(f64, f64)> = (1..=SCAN)
            .map(|i| {
                let r = tail * i as f64 / SCAN as f64;
                (r, w.density(r).unwrap_or(0.0))
            })
            .collect();
        let peak = dens.iter().fold(0.0f64, |m, d| m.max(d.1));
        let last = dens
            .iter()
            .rev()
            .find(|d| d.1 >= VISIBLE_FRACTION * peak)
            .map_or(tail, |d| d.0);
        r_end = r_end.max(last);
    }
    1.1 * r_end
}

/// Normalized ψ and ψ² for n = 0..=n_max at each l, on a shared uniform
/// grid over (0, r_end]; r_end defaults to [`wave_r_end`].
#[allow(clippy::too_many_arguments)]
pub fn wave_samples(
    p: &PotentialParams,
    mu: f64,
    ls: &[u32],
    n_max: u32,
    consts: &PhysicalConstants,
    convention: JacobiConvention,
    points: usize,
    r_end: Option<f64>,
) -> Result<Vec<WaveSample>> {
    if points < 2 {
        return Err(Error::domain("wave-function grid needs at least 2 points"));
    }
    let mut waves = Vec::new();
    for &l in ls {
        for n in 0..=n_max {
            waves.push(WaveFunction::new(p, mu, n, l, consts, convention, true)?);
        }
    }
    let r_end = r_end.unwrap_or_else(|| wave_r_end(&waves));
    if !(r_end > 0.0 && r_end.is_finite()) {
        return Err(Error::domain(format!(
            "wave-function range must be positive, got {r_end}"
        )));
    }
    let step = r_end / points as f64;
    let mut out = Vec::with_capacity(waves.len() * points);
    for w in &waves {
        for i in 1..=points {
            let r = step * i as f64;
            let psi = w.eval(r)?;
            out.push(WaveSample {
                n: w.n,
                l: w.l,
                r,
                psi,
                density: psi * psi,
            });
        }
    }
    Ok(out)
}
