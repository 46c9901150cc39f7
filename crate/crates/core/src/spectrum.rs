//! Closed-form Nikiforov–Uvarov spectrum of the combined potential under the
//! Greene–Aldrich approximation, the three named limits, the NU audit
//! quantities and the radial wave function.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::jacobi::jacobi;
use crate::potential::PotentialParams;
use crate::quadrature;

/// Tolerance on |λ − λ_n| at a returned energy.
pub const NU_TOLERANCE: f64 = 1e-10;
/// Tolerance on the normalization integral.
pub const NORM_TOLERANCE: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub eps2: f64,
    pub delta2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
}

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("reduced mass must be positive, got {mu}")))
    }
}

pub fn dimensionless_params(
    p: &PotentialParams,
    mu: f64,
    energy: f64,
    consts: &PhysicalConstants,
) -> Result<DimensionlessParams> {
    p.validate()?;
    check_mu(mu)?;
    let h2 = consts.hbar_sq();
    let a2 = p.alpha * p.alpha;
    Ok(DimensionlessParams {
        eps2: -mu * energy / (2.0 * h2 * a2),
        delta2: mu * p.v0 / (2.0 * h2 * a2),
        sigma1: mu * p.a / (h2 * p.alpha),
        sigma2: 2.0 * mu * p.b / h2,
        sigma3: mu * p.c / (2.0 * h2 * a2),
    })
}

/// The recurring combinations of the energy formula, for real n and l.
///
/// gamma = sqrt(8μB/ħ² + 4l(l+1) + 1), q = σ₂ − σ₁ − δ² + l(l+1),
/// num = q + n² + n + ½ + (n + ½)·gamma, den = 1 + 2n + gamma.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shorthands {
    pub gamma: f64,
    pub q: f64,
    pub num: f64,
    pub den: f64,
    /// 2ħ²α²/μ
    pub scale: f64,
}

impl Shorthands {
    pub fn ratio(&self) -> f64 {
        self.num / self.den
    }
}

pub fn shorthands(p: &PotentialParams, mu: f64, n: f64, l: f64, consts: &PhysicalConstants) -> Result<Shorthands> {
    p.validate()?;
    check_mu(mu)?;
    if !(n >= 0.0 && l >= -0.5) {
        return Err(Error::domain(format!("need n >= 0 and l >= -1/2, got n={n}, l={l}")));
    }
    let h2 = consts.hbar_sq();
    let ll = l * (l + 1.0);
    let radicand = 8.0 * mu * p.b / h2 + 4.0 * ll + 1.0;
    if radicand < 0.0 {
        return Err(Error::UnsupportedRegime(format!(
            "8μB/ħ² + 4l(l+1) + 1 = {radicand} < 0: inverse-square attraction too strong"
        )));
    }
    let gamma = radicand.sqrt();
    let a2 = p.alpha * p.alpha;
    let q = 2.0 * mu * p.b / h2 - mu * p.a / (h2 * p.alpha) - mu * p.v0 / (2.0 * h2 * a2) + ll;
    let num = q + n * n + n + 0.5 + (n + 0.5) * gamma;
    let den = 1.0 + 2.0 * n + gamma;
    if den == 0.0 {
        return Err(Error::UnsupportedRegime("vanishing denominator 1 + 2n + gamma".into()));
    }
    Ok(Shorthands {
        gamma,
        q,
        num,
        den,
        scale: 2.0 * h2 * a2 / mu,
    })
}

/// Energy formula with n and l treated as real variables.
pub fn energy_continuous(p: &PotentialParams, mu: f64, n: f64, l: f64, consts: &PhysicalConstants) -> Result<f64> {
    let s = shorthands(p, mu, n, l, consts)?;
    let f = s.ratio();
    Ok(-s.scale * f * f + p.c)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub energy: f64,
    pub gamma: f64,
    pub n: u32,
    pub l: u32,
    /// |λ − λ_n| at the ε² implied by `energy`.
    pub nu_residual: f64,
    pub eps2: f64,
    /// Signed root w of λ(w) = λ_n(w), with w² = ε² + σ₃.
    pub quantization_root: f64,
    /// E < C.
    pub below_asymptote: bool,
    /// The s → 0 factor of the exact Greene–Aldrich solution decays (w < 0).
    pub normalizable: bool,
}

/// Evaluates the closed-form energy and audits it against the NU
/// quantization condition.
pub fn energy(p: &PotentialParams, mu: f64, n: u32, l: u32, consts: &PhysicalConstants) -> Result<SpectrumResult> {
    let s = shorthands(p, mu, f64::from(n), f64::from(l), consts)?;
    let f = s.ratio();
    let binding = -s.scale * f * f;
    let e = binding + p.c;
    let nu = nu_intermediates_at(p, mu, n, l, binding, consts)?;
    Ok(SpectrumResult {
        energy: e,
        gamma: s.gamma,
        n,
        l,
        nu_residual: nu.residual,
        eps2: nu.eps2,
        quantization_root: nu.w,
        below_asymptote: e < p.c,
        normalizable: nu.w < 0.0,
    })
}

/// Pure Hulthén energy in the collapsed form with 2l + 1 in place of the
/// square root. Errors if the perfect-square identity fails for `l`.
pub fn energy_hulthen(v0: f64, alpha: f64, mu: f64, n: u32, l: u32, consts: &PhysicalConstants) -> Result<f64> {
    check_mu(mu)?;
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha must be positive"));
    }
    if !perfect_square_holds(l) {
        return Err(Error::domain(format!("sqrt(4l(l+1)+1) != 2l+1 for l={l}")));
    }
    let h2 = consts.hbar_sq();
    let delta2 = mu * v0 / (2.0 * h2 * alpha * alpha);
    let k = f64::from(n + l);
    let f = (-delta2 + k * (k + 2.0) + 1.0) / (2.0 * (k + 1.0));
    Ok(-2.0 * h2 * alpha * alpha / mu * f * f)
}

/// Pure Hulthén energy with the square root left unsimplified.
pub fn energy_hulthen_unsimplified(
    v0: f64,
    alpha: f64,
    mu: f64,
    n: u32,
    l: u32,
    consts: &PhysicalConstants,
) -> Result<f64> {
    check_mu(mu)?;
    let h2 = consts.hbar_sq();
    let (n, l) = (f64::from(n), f64::from(l));
    let ll = l * (l + 1.0);
    let g = (4.0 * ll + 1.0).sqrt();
    let f = ((-mu * v0 / (2.0 * h2 * alpha * alpha) + ll) + (n * n + n + 0.5) + (n + 0.5) * g) / (1.0 + 2.0 * n + g);
    Ok(-2.0 * h2 * alpha * alpha / mu * f * f)
}

pub fn energy_yukawa(a: f64, alpha: f64, mu: f64, n: u32, l: u32, consts: &PhysicalConstants) -> Result<f64> {
    check_mu(mu)?;
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha must be positive"));
    }
    let h2 = consts.hbar_sq();
    let (n, l) = (f64::from(n), f64::from(l));
    let ll = l * (l + 1.0);
    let g = (4.0 * ll + 1.0).sqrt();
    let f = ((-mu * a / (h2 * alpha) + ll) + (n * n + n + 0.5) + (n + 0.5) * g) / (1.0 + 2.0 * n + g);
    Ok(-2.0 * h2 * alpha * alpha / mu * f * f)
}

pub fn energy_iqp(b: f64, alpha: f64, mu: f64, n: u32, l: u32, consts: &PhysicalConstants) -> Result<f64> {
    check_mu(mu)?;
    if !(alpha > 0.0) {
        return Err(Error::domain("alpha must be positive"));
    }
    let h2 = consts.hbar_sq();
    let (n, l) = (f64::from(n), f64::from(l));
    let ll = l * (l + 1.0);
    let radicand = 8.0 * mu * b / h2 + 4.0 * ll + 1.0;
    if radicand < 0.0 {
        return Err(Error::UnsupportedRegime(format!("negative radicand {radicand}")));
    }
    let g = radicand.sqrt();
    let f = ((2.0 * mu * b / h2 + ll) + (n * n + n + 0.5) + (n + 0.5) * g) / (1.0 + 2.0 * n + g);
    Ok(-2.0 * h2 * alpha * alpha / mu * f * f)
}

/// sqrt(4l(l+1)+1) == 2l+1 in floating point.
pub fn perfect_square_holds(l: u32) -> bool {
    let l = f64::from(l);
    (4.0 * l * (l + 1.0) + 1.0).sqrt() == 2.0 * l + 1.0
}

/// Audit quantities of the NU construction at a given energy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NUIntermediates {
    pub eps2: f64,
    /// Signed square root of ε² + σ₃ selected by the quantization condition.
    pub w: f64,
    pub gamma: f64,
    pub k1: f64,
    pub k2: f64,
    /// π(s) = pi_const + pi_slope·s on the bound-state branch.
    pub pi_const: f64,
    pub pi_slope: f64,
    /// Constant term of π(s) with the sign as published.
    pub pi_const_published: f64,
    /// b² − 4ac of the radicand at k = k1; zero when π(s) is linear.
    pub discriminant: f64,
    pub tau_slope: f64,
    pub lambda: f64,
    pub lambda_n: f64,
    pub residual: f64,
}

impl NUIntermediates {
    pub fn bound_state_condition(&self) -> bool {
        self.tau_slope < 0.0
    }
}

fn lambda_of(w: f64, gamma: f64, q: f64) -> f64 {
    -0.5 - (0.5 * gamma - w) + w * gamma - q
}

fn lambda_n_of(w: f64, gamma: f64, n: f64) -> f64 {
    n * n + n + n * gamma - 2.0 * n * w
}

/// `binding` is E − C. Forming ε² + σ₃ from it directly avoids the
/// cancellation in ε² + σ₃ when E sits close to the asymptote.
fn nu_intermediates_at(
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: u32,
    binding: f64,
    consts: &PhysicalConstants,
) -> Result<NUIntermediates> {
    let nf = f64::from(n);
    let lf = f64::from(l);
    let s = shorthands(p, mu, nf, lf, consts)?;
    let d = dimensionless_params(p, mu, binding + p.c, consts)?;
    let w2 = -binding / s.scale;
    let root = w2.max(0.0).sqrt();
    let residual_for = |w: f64| (lambda_of(w, s.gamma, s.q) - lambda_n_of(w, s.gamma, nf)).abs();
    let w = if residual_for(-root) < residual_for(root) {
        -root
    } else {
        root
    };
    let ll = lf * (lf + 1.0);
    let k1 = -s.q + w * s.gamma;
    let k2 = -s.q - w * s.gamma;
    // Radicand (a s² + b s + c) of π(s) at k = k1.
    let qa = 0.25 + d.eps2 + d.delta2 + d.sigma1 + d.sigma3 - k1;
    let qb = -(2.0 * d.eps2 + d.delta2 + d.sigma1 - d.sigma2 + 2.0 * d.sigma3 - ll - k1);
    let qc = w2;
    let lambda = lambda_of(w, s.gamma, s.q);
    let lambda_n = lambda_n_of(w, s.gamma, nf);
    Ok(NUIntermediates {
        eps2: d.eps2,
        w,
        gamma: s.gamma,
        k1,
        k2,
        pi_const: -w,
        pi_slope: -0.5 - (0.5 * s.gamma - w),
        pi_const_published: w,
        discriminant: qb * qb - 4.0 * qa * qc,
        tau_slope: -2.0 - s.gamma + 2.0 * w,
        lambda,
        lambda_n,
        residual: (lambda - lambda_n).abs(),
    })
}

/// NU intermediates at the closed-form energy.
pub fn nu_consistency(
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: u32,
    consts: &PhysicalConstants,
) -> Result<NUIntermediates> {
    let s = shorthands(p, mu, f64::from(n), f64::from(l), consts)?;
    let f = s.ratio();
    nu_intermediates_at(p, mu, n, l, -s.scale * f * f, consts)
}

/// Solves λ(w) = λ_n(w) for w by secant iteration on the two published
/// expressions and converts the root to an energy.
pub fn energy_from_quantization(
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: u32,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let nf = f64::from(n);
    let s = shorthands(p, mu, nf, f64::from(l), consts)?;
    let g = |w: f64| lambda_of(w, s.gamma, s.q) - lambda_n_of(w, s.gamma, nf);
    let (mut w0, mut w1) = (0.0, 1.0);
    let (mut g0, mut g1) = (g(w0), g(w1));
    for _ in 0..100 {
        if g1 == 0.0 || (w1 - w0).abs() <= 1e-15 * w1.abs().max(1.0) {
            break;
        }
        let slope = (g1 - g0) / (w1 - w0);
        if slope == 0.0 {
            return Err(Error::RootFinding("flat quantization function".into()));
        }
        let w2 = w1 - g1 / slope;
        w0 = w1;
        g0 = g1;
        w1 = w2;
        g1 = g(w1);
    }
    let d0 = dimensionless_params(p, mu, 0.0, consts)?;
    let eps2 = w1 * w1 - d0.sigma3;
    Ok(-eps2 * s.scale)
}

/// Which Jacobi parameters to attach to the polynomial factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum JacobiConvention {
    /// (2w − 4γ, −2w − 4γ), as printed with the total wave function.
    #[default]
    Printed,
    /// (4w, −2w − γ), the exponents of the published weight function.
    WeightFunction,
    /// (2w, γ), from the weight function s^{2w}(1 − s)^γ of the corrected π(s).
    Derived,
}

impl fmt::Display for JacobiConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Printed => "printed",
            Self::WeightFunction => "weight-function",
            Self::Derived => "derived",
        })
    }
}

impl FromStr for JacobiConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "printed" => Ok(Self::Printed),
            "weight-function" | "weight" => Ok(Self::WeightFunction),
            "derived" => Ok(Self::Derived),
            other => Err(Error::domain(format!(
                "unknown convention '{other}' (expected printed, weight-function, derived)"
            ))),
        }
    }
}

/// ψ(r) = N s^w (1 − s)^{(1+γ)/2} P_n^{(a,b)}(1 − 2s), s = e^{−2αr},
/// with w = sqrt(ε² + σ₃) ≥ 0.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveFunction {
    pub n: u32,
    pub l: u32,
    pub energy: f64,
    pub alpha: f64,
    pub s_exponent: f64,
    pub one_minus_s_exponent: f64,
    pub jacobi_a: f64,
    pub jacobi_b: f64,
    pub convention: JacobiConvention,
    pub norm: f64,
}

impl WaveFunction {
    pub fn new(
        p: &PotentialParams,
        mu: f64,
        n: u32,
        l: u32,
        consts: &PhysicalConstants,
        convention: JacobiConvention,
        normalized: bool,
    ) -> Result<Self> {
        let spec = energy(p, mu, n, l, consts)?;
        let d = dimensionless_params(p, mu, spec.energy, consts)?;
        let w = (d.eps2 + d.sigma3).max(0.0).sqrt();
        if !(w > 0.0) {
            return Err(Error::domain(format!(
                "state n={n}, l={l} has sqrt(eps2 + sigma3) = 0; the wave function does not decay"
            )));
        }
        let g = spec.gamma;
        let (ja, jb) = match convention {
            JacobiConvention::Printed => (2.0 * w - 4.0 * g, -2.0 * w - 4.0 * g),
            JacobiConvention::WeightFunction => (4.0 * w, -2.0 * w - g),
            JacobiConvention::Derived => (2.0 * w, g),
        };
        let mut wf = Self {
            n,
            l,
            energy: spec.energy,
            alpha: p.alpha,
            s_exponent: w,
            one_minus_s_exponent: 0.5 + 0.5 * g,
            jacobi_a: ja,
            jacobi_b: jb,
            convention,
            norm: 1.0,
        };
        if normalized {
            let integral = wf.norm_integral()?;
            if !(integral > 0.0 && integral.is_finite()) {
                return Err(Error::Quadrature(format!("normalization integral is {integral}")));
            }
            wf.norm = 1.0 / integral.sqrt();
        }
        Ok(wf)
    }

    fn raw(&self, r: f64) -> f64 {
        let x = 2.0 * self.alpha * r;
        let s = (-x).exp();
        let ln_1ms = (-(-x).exp_m1()).ln();
        let envelope = (-self.s_exponent * x + self.one_minus_s_exponent * ln_1ms).exp();
        envelope * jacobi(self.n, self.jacobi_a, self.jacobi_b, 1.0 - 2.0 * s)
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::domain(format!("radius must be positive and finite, got {r}")));
        }
        Ok(self.norm * self.raw(r))
    }

    pub fn density(&self, r: f64) -> Result<f64> {
        self.eval(r).map(|v| v * v)
    }

    /// Radius of the envelope maximum, where e^{−x} = w/(w + b) with
    /// x = 2αr, w and b the exponents of s and 1 − s.
    pub fn envelope_peak(&self) -> f64 {
        let (w, b) = (self.s_exponent, self.one_minus_s_exponent);
        ((w + b) / w).ln() / (2.0 * self.alpha)
    }

    /// Radius beyond which ψ² has fallen below ~1e-17 of its scale.
    pub fn tail_radius(&self) -> f64 {
        let decay = 4.0 * self.alpha * self.s_exponent;
        let poly = f64::from(self.n + 1) * 10.0 / decay;
        (self.envelope_peak() + 40.0 / decay + poly).min(1e4 / self.alpha)
    }

    fn norm_integral(&self) -> Result<f64> {
        let r_max = self.tail_radius();
        let f = |r: f64| {
            if r <= 0.0 {
                0.0
            } else {
                let v = self.raw(r);
                v * v
            }
        };
        // Split so the adaptive rule sees the interior structure.
        let pieces = 16;
        let mut total = 0.0;
        let mut parts = Vec::with_capacity(pieces);
        for i in 0..pieces {
            let a = r_max * i as f64 / pieces as f64;
            let b = r_max * (i + 1) as f64 / pieces as f64;
            parts.push(quadrature::integrate(f, a, b, 0.0, 1e-13)?);
        }
        for v in parts {
            total += v;
        }
        Ok(total)
    }

    /// ∫ ψ² dr over (0, tail_radius].
    pub fn norm_check(&self) -> Result<f64> {
        Ok(self.norm_integral()? * self.norm * self.norm)
    }

    /// Sign changes of ψ on a uniform sample of (r_lo, r_hi], ignoring
    /// samples below 1e-10 of the sampled maximum.
    pub fn sign_changes(&self, r_lo: f64, r_hi: f64, samples: usize) -> usize {
        let vals: Vec<f64> = (1..=samples)
            .map(|i| self.raw(r_lo + (r_hi - r_lo) * i as f64 / samples as f64))
            .collect();
        let peak = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let floor = 1e-10 * peak;
        let mut last = 0.0;
        let mut flips = 0;
        for v in vals {
            if v.abs() <= floor {
                continue;
            }
            if last != 0.0 && v.signum() != last {
                flips += 1;
            }
            last = v.signum();
        }
        flips
    }
}

/// Evaluates ψ at one radius with the printed convention.
pub fn wavefunction(
    r: f64,
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: u32,
    consts: &PhysicalConstants,
    normalized: bool,
) -> Result<f64> {
    WaveFunction::new(p, mu, n, l, consts, JacobiConvention::Printed, normalized)?.eval(r)
}

pub fn probability_density(
    r: f64,
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: u32,
    consts: &PhysicalConstants,
) -> Result<f64> {
    WaveFunction::new(p, mu, n, l, consts, JacobiConvention::Printed, true)?.density(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Registry;

    fn paper() -> PhysicalConstants {
        PhysicalConstants::paper()
    }

    fn mol(name: &str) -> (PotentialParams, f64) {
        let m = Registry::builtin().get(name).unwrap();
        (PotentialParams::from_molecule(&m, 0.0), m.mu)
    }

    fn anchor() -> PotentialParams {
        PotentialParams::new(2.0, 0.0, 0.0, 0.0, 0.05).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn dimensionless_examples() {
        let p = PotentialParams::new(0.0, 0.0, 1.0, 0.0, 0.5).unwrap();
        let d = dimensionless_params(&p, 0.5, 0.0, &paper()).unwrap();
        assert_eq!(d.sigma2, 1.0);
        assert_eq!(d.eps2, 0.0);
        assert_eq!(d.sigma3, 0.0);
        // H2 at E = -1 with ħ = 1.
        let (p, mu) = mol("H2");
        let p = PotentialParams { v0: 1.5, ..p };
        let d = dimensionless_params(&p, mu, -1.0, &paper()).unwrap();
        let a2 = 0.2099 * 0.2099;
        assert!(rel(d.eps2, 0.50391 / (2.0 * a2)) < 1e-14);
        assert!(rel(d.delta2, 0.50391 * 1.5 / (2.0 * a2)) < 1e-14);
        assert!(rel(d.sigma1, 0.50391 * 0.7416 / 0.2099) < 1e-14);
        assert!(rel(d.sigma2, 2.0 * 0.50391 * 1.9426) < 1e-14);
        assert!(rel(d.sigma3, 0.50391 * 1.440558 / (2.0 * a2)) < 1e-14);
    }

    #[test]
    fn collapsed_formula() {
        let p = PotentialParams::new(0.0, 0.0, 0.0, 0.0, 0.5).unwrap();
        let r = energy(&p, 1.0, 0, 0, &paper()).unwrap();
        assert!((r.energy - -0.125).abs() < 1e-15);
        assert_eq!(r.gamma, 1.0);
        assert!(r.nu_residual <= NU_TOLERANCE);
    }

    #[test]
    fn perfect_square() {
        for l in 0..=20 {
            assert!(perfect_square_holds(l));
            let p = PotentialParams::new(0.0, 0.0, 0.0, 0.0, 0.3).unwrap();
            assert_eq!(energy(&p, 1.0, 0, l, &paper()).unwrap().gamma, f64::from(2 * l + 1));
        }
    }

    #[test]
    fn limits_agree() {
        let c = paper();
        let (h2, mu) = mol("H2");
        for n in 0..=5 {
            for l in 0..=5 {
                let p = PotentialParams {
                    v0: 1.3,
                    a: 0.0,
                    b: 0.0,
                    c: 0.0,
                    ..h2
                };
                let e = energy(&p, mu, n, l, &c).unwrap().energy;
                assert!(rel(energy_hulthen(1.3, h2.alpha, mu, n, l, &c).unwrap(), e) < 1e-12);
                assert!(rel(energy_hulthen_unsimplified(1.3, h2.alpha, mu, n, l, &c).unwrap(), e) < 1e-12);
                let p = PotentialParams {
                    v0: 0.0,
                    b: 0.0,
                    c: 0.0,
                    ..h2
                };
                let e = energy(&p, mu, n, l, &c).unwrap().energy;
                assert!(rel(energy_yukawa(h2.a, h2.alpha, mu, n, l, &c).unwrap(), e) < 1e-12);
                let p = PotentialParams {
                    v0: 0.0,
                    a: 0.0,
                    c: 0.0,
                    ..h2
                };
                let e = energy(&p, mu, n, l, &c).unwrap().energy;
                assert!(rel(energy_iqp(h2.b, h2.alpha, mu, n, l, &c).unwrap(), e) < 1e-12);
            }
        }
    }

    #[test]
    fn iqp_golden() {
        // Hand evaluation at n = 1, l = 1 with 30-digit arithmetic.
        let (h2, mu) = mol("H2");
        let e = energy_iqp(1.9426, h2.alpha, mu, 1, 1, &paper()).unwrap();
        assert!(rel(e, -0.551_333_281_086_641_7) < 1e-13, "{e}");
    }

    #[test]
    fn hulthen_anchor_closed_form() {
        // l = 0 reproduces the textbook levels with principal number n + 1.
        let c = paper();
        for n in 0..19u32 {
            let np = f64::from(n + 1);
            let want = -0.005 * ((400.0 - np * np) / (2.0 * np)).powi(2);
            let got = energy(&anchor(), 1.0, n, 0, &c).unwrap();
            assert!(rel(got.energy, want) < 1e-13);
            assert!(got.normalizable);
        }
        let e: Vec<f64> = (0..19)
            .map(|n| energy(&anchor(), 1.0, n, 0, &c).unwrap().energy.abs())
            .collect();
        assert!(e.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn nu_residuals_small() {
        for mode in [PhysicalConstants::paper(), PhysicalConstants::physical()] {
            for name in ["H2", "LiH", "HCl", "CO"] {
                let (p, mu) = mol(name);
                for n in 0..=12 {
                    for l in 0..=12 {
                        let r = energy(&p, mu, n, l, &mode).unwrap();
                        assert!(r.nu_residual <= NU_TOLERANCE, "{name} {n} {l}: {}", r.nu_residual);
                        let nu = nu_consistency(&p, mu, n, l, &mode).unwrap();
                        let scale = nu.k1.abs().max(1.0).powi(2);
                        assert!(
                            nu.discriminant.abs() <= 1e-9 * scale,
                            "{name} {n} {l}: {}",
                            nu.discriminant
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn quantization_root_reproduces_energy() {
        let c = PhysicalConstants::physical();
        for name in ["H2", "LiH", "HCl", "CO"] {
            let (p, mu) = mol(name);
            for n in 0..=5 {
                for l in 0..=5 {
                    let e = energy(&p, mu, n, l, &c).unwrap().energy;
                    let q = energy_from_quantization(&p, mu, n, l, &c).unwrap();
                    assert!(rel(q, e) <= 1e-10, "{name} {n} {l}: {q} vs {e}");
                }
            }
        }
    }

    #[test]
    fn negative_radicand_rejected() {
        let p = PotentialParams::new(0.0, 0.0, -1.0, 0.0, 0.5).unwrap();
        assert!(matches!(
            energy(&p, 1.0, 0, 0, &paper()),
            Err(Error::UnsupportedRegime(_))
        ));
        assert!(matches!(
            nu_consistency(&p, 1.0, 0, 0, &paper()),
            Err(Error::UnsupportedRegime(_))
        ));
    }

    #[test]
    fn ground_state_nodeless_and_normalized() {
        for conv in [
            JacobiConvention::Printed,
            JacobiConvention::Derived,
            JacobiConvention::WeightFunction,
        ] {
            let wf = WaveFunction::new(&anchor(), 1.0, 0, 0, &paper(), conv, true).unwrap();
            assert!((wf.norm_check().unwrap() - 1.0).abs() < NORM_TOLERANCE);
            for i in 1..400 {
                assert!(wf.eval(0.05 * i as f64).unwrap() > 0.0);
            }
            assert!(wf.eval(wf.tail_radius()).unwrap().abs() < 1e-6);
        }
    }

    #[test]
    fn derived_nodes() {
        let c = PhysicalConstants::physical();
        let (p, mu) = mol("H2");
        for n in 0..=4 {
            let wf = WaveFunction::new(&p, mu, n, 0, &c, JacobiConvention::Derived, true).unwrap();
            assert_eq!(wf.sign_changes(0.0, 40.0, 40000), n as usize);
            assert!((wf.norm_check().unwrap() - 1.0).abs() < NORM_TOLERANCE);
        }
    }

    #[test]
    fn convention_parse() {
        assert_eq!(
            "derived".parse::<JacobiConvention>().unwrap(),
            JacobiConvention::Derived
        );
        assert!("bogus".parse::<JacobiConvention>().is_err());
        assert!(wavefunction(0.0, &anchor(), 1.0, 0, 0, &paper(), false).is_err());
    }
}
