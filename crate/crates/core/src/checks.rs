//! Invariant suites shared by the `check` command and the acceptance run.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::constants::{Molecule, PhysicalConstants, Registry, UnitMode};
use crate::error::{Error, Result};
use crate::hft::{self, Param};
use crate::oracle::{self, Observable, OracleConfig};
use crate::output::fmt_num;
use crate::potential::PotentialParams;
use crate::spectrum::{self, NU_TOLERANCE};

pub const HFT_TOLERANCE: f64 = 1e-6;
pub const REDUCTION_TOLERANCE: f64 = 1e-12;
pub const ANCHOR_ANALYTIC_TOLERANCE: f64 = 1e-4;
pub const ANCHOR_NUMEROV_TOLERANCE: f64 = 1e-6;
pub const BOX_TOLERANCE: f64 = 1e-3;
pub const ORDER_RANGE: (f64, f64) = (1.8, 2.2);
pub const RM1_TOLERANCE: f64 = 1e-3;

pub const HFT_SWEEP_MAX: u32 = 4;
pub const REDUCTION_SWEEP_MAX: u32 = 5;
pub const PERFECT_SQUARE_MAX: u32 = 20;
pub const NU_SWEEP_MAX: u32 = 12;
pub const ANCHOR_STATES: u32 = 5;
pub const ANCHOR_POINTS: usize = 20_000;
/// V0, α and μ of the pure Hulthén anchor, paper mode.
pub const ANCHOR: (f64, f64, f64) = (2.0, 0.05, 1.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Hft,
    Reduction,
    Nu,
    Oracle,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hft" => Ok(Self::Hft),
            "reduction" => Ok(Self::Reduction),
            "nu" => Ok(Self::Nu),
            "oracle" => Ok(Self::Oracle),
            "all" => Ok(Self::All),
            other => Err(Error::domain(format!(
                "unknown suite '{other}' (expected hft, reduction, nu, oracle, all)"
            ))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Hft => "hft",
            Self::Reduction => "reduction",
            Self::Nu => "nu",
            Self::Oracle => "oracle",
            Self::All => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Assertion {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Assertion {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        Self::new(name, false, format!("error: {err}"))
    }
}

impl fmt::Display for Assertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

/// Assertions plus informational lines that never fail the suite.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SuiteReport {
    pub assertions: Vec<Assertion>,
    pub info: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn first_failure(&self) -> Option<&Assertion> {
        self.assertions.iter().find(|a| !a.passed)
    }

    fn extend(&mut self, other: SuiteReport) {
        self.assertions.extend(other.assertions);
        self.info.extend(other.info);
    }
}

const MODES: [UnitMode; 2] = [UnitMode::Paper, UnitMode::Physical];

fn params(m: &Molecule) -> PotentialParams {
    PotentialParams::from_molecule(m, 0.0)
}

fn rel(a: f64, b: f64) -> f64 {
    hft::rel_dev(a, b)
}

pub fn run(suite: Suite, registry: &Registry) -> SuiteReport {
    let mut out = SuiteReport::default();
    if matches!(suite, Suite::Reduction | Suite::All) {
        out.extend(reductions(registry));
        out.extend(perfect_square());
    }
    if matches!(suite, Suite::Nu | Suite::All) {
        out.extend(nu_sweep(registry));
    }
    if matches!(suite, Suite::Hft | Suite::All) {
        out.extend(hft_sweep(registry));
        out.extend(p2_relation(registry));
    }
    if matches!(suite, Suite::Oracle | Suite::All) {
        out.extend(box_calibration());
        out.extend(hydrogenic());
        out.extend(hulthen_anchor());
        out.extend(rm1_independence());
    }
    out
}

/// Analytic ∂E/∂q against Richardson central differences, per molecule,
/// mode and parameter over n, l ≤ 4.
pub fn hft_sweep(registry: &Registry) -> SuiteReport {
    let mut out = SuiteReport::default();
    for mode in MODES {
        let c = PhysicalConstants::for_mode(mode);
        for m in registry.molecules() {
            let p = params(m);
            for which in [Param::L, Param::A, Param::Mu] {
                let name = format!("hft {} {mode} dE/d{which}", m.name);
                let mut worst = 0.0f64;
                let mut at = (0, 0);
                let mut err = None;
                'sweep: for n in 0..=HFT_SWEEP_MAX {
                    for l in 0..=HFT_SWEEP_MAX {
                        match hft::d_energy_d_param(&p, m.mu, n, l, which, &c) {
                            Ok(d) if d.gap > worst => {
                                worst = d.gap;
                                at = (n, l);
                            }
                            Ok(_) => {}
                            Err(e) => {
                                err = Some((n, l, e));
                                break 'sweep;
                            }
                        }
                    }
                }
                out.assertions.push(match err {
                    Some((n, l, e)) => Assertion::failed(format!("{name} n={n} l={l}"), &e),
                    None => Assertion::new(
                        name,
                        worst <= HFT_TOLERANCE,
                        format!(
                            "worst gap {} at n={} l={} (tol {})",
                            fmt_num(worst),
                            at.0,
                            at.1,
                            fmt_num(HFT_TOLERANCE)
                        ),
                    ),
                });
            }
        }
    }
    out
}

/// ⟨p²⟩ = 2μ⟨T⟩ on the machine-derivative path, bit for bit.
pub fn p2_relation(registry: &Registry) -> SuiteReport {
    let mut out = SuiteReport::default();
    for mode in MODES {
        let c = PhysicalConstants::for_mode(mode);
        for m in registry.molecules() {
            let p = params(m);
            let name = format!("p2 = 2 mu T {} {mode}", m.name);
            let mut mismatches = 0;
            let mut states = 0;
            let mut err = None;
            for n in 0..=NU_SWEEP_MAX {
                for l in 0..=NU_SWEEP_MAX {
                    let pair = hft::expect_p2(&p, m.mu, n, l, &c)
                        .and_then(|p2| Ok((p2, hft::expect_kinetic(&p, m.mu, n, l, &c)?)));
                    match pair {
                        Ok((p2, t)) => {
                            states += 1;
                            if p2.machine_derivative != 2.0 * c.mass_energy(m.mu) * t.machine_derivative {
                                mismatches += 1;
                            }
                        }
                        Err(e) if err.is_none() => err = Some(e),
                        Err(_) => {}
                    }
                }
            }
            out.assertions.push(match err {
                Some(e) => Assertion::failed(name, &e),
                None => Assertion::new(name, mismatches == 0, format!("{mismatches} of {states} states differ")),
            });
        }
    }
    out
}

/// Zeroed-parameter limits of the full energy against the standalone
/// Hulthén, Yukawa and inverse-quadratic formulas for n, l ≤ 5.
pub fn reductions(registry: &Registry) -> SuiteReport {
    let mut out = SuiteReport::default();
    const V0: f64 = 1.3;
    for mode in MODES {
        let c = PhysicalConstants::for_mode(mode);
        for m in registry.molecules() {
            let full = PotentialParams::from_molecule(m, V0);
            let limits: [(&str, PotentialParams); 3] = [
                ("hulthen", full.hulthen_only()),
                ("yukawa", full.yukawa_only()),
                ("inverse-quadratic", full.inverse_quadratic_only()),
            ];
            for (label, p) in limits {
                let name = format!("reduction {label} {} {mode}", m.name);
                let mut worst = 0.0f64;
                let mut err = None;
                for n in 0..=REDUCTION_SWEEP_MAX {
                    for l in 0..=REDUCTION_SWEEP_MAX {
                        let pair = spectrum::energy(&p, m.mu, n, l, &c).and_then(|e| {
                            let limit = match label {
                                "hulthen" => spectrum::energy_hulthen(V0, p.alpha, m.mu, n, l, &c)?,
                                "yukawa" => spectrum::energy_yukawa(p.a, p.alpha, m.mu, n, l, &c)?,
                                _ => spectrum::energy_iqp(p.b, p.alpha, m.mu, n, l, &c)?,
                            };
                            Ok((e.energy, limit))
                        });
                        match pair {
                            Ok((e, limit)) => worst = worst.max(rel(e, limit)),
                            Err(e) if err.is_none() => err = Some(e),
                            Err(_) => {}
                        }
                    }
                }
                out.assertions.push(match err {
                    Some(e) => Assertion::failed(name, &e),
                    None => Assertion::new(
                        name,
                        worst <= REDUCTION_TOLERANCE,
                        format!(
                            "worst relative gap {} (tol {})",
                            fmt_num(worst),
                            fmt_num(REDUCTION_TOLERANCE)
                        ),
                    ),
                });
            }
        }
    }
    out
}

pub fn perfect_square() -> SuiteReport {
    let bad: Vec<u32> = (0..=PERFECT_SQUARE_MAX)
        .filter(|&l| !spectrum::perfect_square_holds(l))
        .collect();
    SuiteReport {
        assertions: vec![Assertion::new(
            "perfect square sqrt(4l(l+1)+1) = 2l+1",
            bad.is_empty(),
            format!("l = 0..{PERFECT_SQUARE_MAX}, exact failures: {bad:?}"),
        )],
        info: Vec::new(),
    }
}

/// Quantization residual and τ′ < 0 at every closed-form energy,
/// n, l ≤ 12. Asserted in physical mode; paper-mode τ′ violations are
/// listed as information.
pub fn nu_sweep(registry: &Registry) -> SuiteReport {
    let mut out = SuiteReport::default();
    for mode in MODES {
        let c = PhysicalConstants::for_mode(mode);
        for m in registry.molecules() {
            let p = params(m);
            let mut worst = 0.0f64;
            let mut tau_bad = Vec::new();
            let mut err = None;
            for n in 0..=NU_SWEEP_MAX {
                for l in 0..=NU_SWEEP_MAX {
                    match spectrum::nu_consistency(&p, m.mu, n, l, &c) {
                        Ok(nu) => {
                            worst = worst.max(nu.residual);
                            if !nu.bound_state_condition() {
                                tau_bad.push((n, l));
                            }
                        }
                        Err(e) if err.is_none() => err = Some(e),
                        Err(_) => {}
                    }
                }
            }
            let name = format!("nu residual {} {mode}", m.name);
            out.assertions.push(match &err {
                Some(e) => Assertion::failed(name, e),
                None => Assertion::new(
                    name,
                    worst <= NU_TOLERANCE,
                    format!(
                        "worst |lambda - lambda_n| {} (tol {})",
                        fmt_num(worst),
                        fmt_num(NU_TOLERANCE)
                    ),
                ),
            });
            let summary = if tau_bad.is_empty() {
                "tau' < 0 at every state".to_string()
            } else {
                let first_n = tau_bad.iter().map(|s| s.0).min().unwrap_or(0);
                format!("tau' >= 0 at {} states, first at n = {first_n}", tau_bad.len())
            };
            if mode == UnitMode::Physical {
                out.assertions.push(Assertion::new(
                    format!("nu tau' < 0 {} {mode}", m.name),
                    tau_bad.is_empty() && err.is_none(),
                    format!("{summary} (n, l <= {NU_SWEEP_MAX})"),
                ));
            } else {
                out.info
                    .push(format!("nu tau' {} {mode}: {summary} (n, l <= {NU_SWEEP_MAX})", m.name));
            }
        }
    }
    out
}

fn box_cfg(n_points: usize) -> OracleConfig {
    OracleConfig {
        r_min: 1e-12,
        r_max: 1.0,
        n_points,
        bound_only: false,
        ..OracleConfig::default()
    }
}

/// Free particle between hard walls: levels within 0.1% of (ħ²/2μ)(kπ/L)²
/// for k ≤ 5, and second-order grid convergence.
pub fn box_calibration() -> SuiteReport {
    let mut out = SuiteReport::default();
    let c = PhysicalConstants::paper();
    let zero = match PotentialParams::new(0.0, 0.0, 0.0, 0.0, 1.0) {
        Ok(p) => p,
        Err(e) => {
            out.assertions.push(Assertion::failed("oracle box", &e));
            return out;
        }
    };
    let cfg = box_cfg(20_000);
    let len = cfg.r_max - cfg.r_min;
    let exact = |k: usize| 0.5 * (PI * k as f64 / len).powi(2);
    match oracle::solve_matrix(&zero, 0, 1.0, &c, &cfg, 5) {
        Ok(sol) => {
            let worst = (1..=5)
                .map(|k| rel(sol.eigenvalues[k - 1], exact(k)))
                .fold(0.0f64, f64::max);
            out.assertions.push(Assertion::new(
                "oracle box levels k = 1..5",
                worst <= BOX_TOLERANCE && sol.len() == 5,
                format!(
                    "worst relative error {} (tol {})",
                    fmt_num(worst),
                    fmt_num(BOX_TOLERANCE)
                ),
            ));
        }
        Err(e) => out.assertions.push(Assertion::failed("oracle box levels k = 1..5", &e)),
    }
    let err_at = |n: usize| -> Result<f64> {
        let sol = oracle::solve_matrix(&zero, 0, 1.0, &c, &box_cfg(n), 1)?;
        Ok((sol.eigenvalues[0] - exact(1)).abs())
    };
    match err_at(1001).and_then(|a| Ok((a, err_at(2001)?))) {
        Ok((coarse, fine)) => {
            let order = (coarse / fine).log2();
            out.assertions.push(Assertion::new(
                "oracle grid convergence order",
                (ORDER_RANGE.0..=ORDER_RANGE.1).contains(&order),
                format!(
                    "observed order {} (range [{}, {}])",
                    fmt_num(order),
                    ORDER_RANGE.0,
                    ORDER_RANGE.1
                ),
            ));
        }
        Err(e) => out
            .assertions
            .push(Assertion::failed("oracle grid convergence order", &e)),
    }
    out
}

/// Weakly screened Coulomb well against the hydrogenic ground state.
pub fn hydrogenic() -> SuiteReport {
    let name = "oracle hydrogenic ground state";
    let c = PhysicalConstants::paper();
    let run = || -> Result<f64> {
        let p = PotentialParams::new(0.0, 1.0, 0.0, 0.0, 1e-4)?;
        let cfg = OracleConfig {
            r_min: 1e-10,
            r_max: 60.0,
            ..OracleConfig::default()
        };
        let sol = oracle::solve_matrix(&p, 0, 1.0, &c, &cfg, 1)?;
        // First-order screening shift is +αA.
        Ok(rel(sol.eigenvalues[0], -0.5 + 1e-4))
    };
    let a = match run() {
        Ok(dev) => Assertion::new(
            name,
            dev <= 1e-3,
            format!("relative error {} (tol 0.001)", fmt_num(dev)),
        ),
        Err(e) => Assertion::failed(name, &e),
    };
    SuiteReport {
        assertions: vec![a],
        info: Vec::new(),
    }
}

pub fn anchor_params() -> Result<PotentialParams> {
    PotentialParams::new(ANCHOR.0, 0.0, 0.0, 0.0, ANCHOR.1)
}

/// Matrix and Numerov solutions of the pure Hulthén anchor at l = 0
/// against the closed form, k = 0..4.
pub fn hulthen_anchor() -> SuiteReport {
    let mut out = SuiteReport::default();
    let c = PhysicalConstants::paper();
    let mu = ANCHOR.2;
    for k in 0..ANCHOR_STATES {
        let name = format!("oracle hulthen anchor k={k}");
        let run = || -> Result<(f64, f64, f64, usize, usize)> {
            let p = anchor_params()?;
            let want = spectrum::energy(&p, mu, k, 0, &c)?.energy;
            let cfg = OracleConfig::fitted(&p, 0, mu, &c, want, ANCHOR_POINTS)?;
            let sol = oracle::solve_matrix(&p, 0, mu, &c, &cfg, k as usize + 1)?;
            let got = *sol
                .eigenvalues
                .get(k as usize)
                .ok_or_else(|| Error::RootFinding(format!("matrix oracle found fewer than {} states", k + 1)))?;
            let lo = got - 1e-3 * got.abs();
            let hi = got + 1e-3 * got.abs();
            let num = oracle::solve_numerov(&p, 0, mu, &c, &cfg, (lo, hi))?;
            Ok((want, got, num.energy, sol.node_counts[k as usize], num.nodes))
        };
        match run() {
            Ok((want, got, numerov, nodes, numerov_nodes)) => {
                let d1 = rel(got, want);
                let d2 = rel(numerov, got);
                out.assertions.push(Assertion::new(
                    name,
                    d1 <= ANCHOR_ANALYTIC_TOLERANCE
                        && d2 <= ANCHOR_NUMEROV_TOLERANCE
                        && nodes == k as usize
                        && numerov_nodes == k as usize,
                    format!(
                        "analytic vs matrix {} (tol {}), matrix vs numerov {} (tol {}), nodes {nodes}/{numerov_nodes}",
                        fmt_num(d1),
                        fmt_num(ANCHOR_ANALYTIC_TOLERANCE),
                        fmt_num(d2),
                        fmt_num(ANCHOR_NUMEROV_TOLERANCE)
                    ),
                ));
            }
            Err(e) => out.assertions.push(Assertion::failed(name, &e)),
        }
    }
    out
}

/// Quadrature of ⟨e^{−αr}/r⟩ on matrix eigenvectors against a finite
/// difference of matrix eigenvalues in A; the closed form is not used.
pub fn rm1_independence() -> SuiteReport {
    let mut out = SuiteReport::default();
    let c = PhysicalConstants::paper();
    let mu = ANCHOR.2;
    for k in 0..3usize {
        let name = format!("oracle screened r-1 vs -dE/dA k={k}");
        let run = || -> Result<(f64, f64)> {
            let p = anchor_params()?;
            // Box fitted to the k-th matrix level of a coarse pre-solve.
            let coarse = OracleConfig {
                r_min: 1e-10,
                r_max: 400.0,
                n_points: 8000,
                ..OracleConfig::default()
            };
            let pre = oracle::solve_matrix(&p, 0, mu, &c, &coarse, k + 1)?;
            let e = *pre
                .eigenvalues
                .get(k)
                .ok_or_else(|| Error::RootFinding(format!("matrix oracle found fewer than {} states", k + 1)))?;
            let cfg = OracleConfig::fitted(&p, 0, mu, &c, e, ANCHOR_POINTS)?;
            let sol = oracle::solve_matrix(&p, 0, mu, &c, &cfg, k + 1)?;
            let q = oracle::expectation_numeric(&sol, k, Observable::RM1Screened)?;
            let d = -oracle::matrix_energy_derivative_a(&p, 0, mu, &c, &cfg, k, 1e-3)?;
            Ok((q, d))
        };
        match run() {
            Ok((q, d)) => {
                let dev = rel(q, d);
                out.assertions.push(Assertion::new(
                    name,
                    dev <= RM1_TOLERANCE,
                    format!(
                        "quadrature {} vs finite difference {}: {} (tol {})",
                        fmt_num(q),
                        fmt_num(d),
                        fmt_num(dev),
                        fmt_num(RM1_TOLERANCE)
                    ),
                ));
            }
            Err(e) => out.assertions.push(Assertion::failed(name, &e)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("ALL".parse::<Suite>().unwrap(), Suite::All);
        assert!("everything".parse::<Suite>().is_err());
        assert_eq!(Suite::Nu.to_string(), "nu");
    }

    #[test]
    fn analytic_suites_pass() {
        let reg = Registry::builtin();
        for suite in [Suite::Reduction, Suite::Nu, Suite::Hft] {
            let r = run(suite, &reg);
            assert!(r.passed(), "{suite}: {:?}", r.first_failure());
        }
    }

    #[test]
    fn oracle_suite_passes() {
        let r = run(Suite::Oracle, &Registry::builtin());
        for a in &r.assertions {
            assert!(a.passed, "{a}");
        }
    }

    #[test]
    fn paper_mode_tau_violations_are_info() {
        let r = nu_sweep(&Registry::builtin());
        assert!(r.info.iter().any(|s| s.contains("H2 paper") && s.contains(">= 0")));
    }
}
