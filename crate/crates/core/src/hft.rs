//! Hellmann–Feynman expectation values from derivatives of the closed-form
//! energy, along two paths: the chain rule carried out here and the
//! expressions as published.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::oracle::{self, Observable, OracleConfig};
use crate::potential::PotentialParams;
use crate::spectrum::{energy_continuous, shorthands, Shorthands};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    L,
    A,
    Mu,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::L => "l",
            Self::A => "A",
            Self::Mu => "mu",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Derivative {
    pub analytic: f64,
    pub finite_difference: f64,
    /// |analytic − fd| / max(1, |analytic|)
    pub gap: f64,
}

/// ∂F/∂l and ∂F/∂μ for F = num/den.
fn ratio_slope(s: &Shorthands, p: &PotentialParams, mu: f64, n: f64, l: f64, which: Param, h2: f64) -> f64 {
    let (dn, dd) = match which {
        Param::L => {
            let two_l1 = 2.0 * l + 1.0;
            let dg = 2.0 * two_l1 / s.gamma;
            (two_l1 + (n + 0.5) * dg, dg)
        }
        Param::Mu => {
            let dg = 4.0 * p.b / (h2 * s.gamma);
            let x = 2.0 * p.b / h2 - p.a / (h2 * p.alpha) - p.v0 / (2.0 * h2 * p.alpha * p.alpha) + (n + 0.5) * dg;
            (x, dg)
        }
        Param::A => (-mu / (h2 * p.alpha), 0.0),
    };
    (dn * s.den - s.num * dd) / (s.den * s.den)
}

/// Chain-rule derivative of the energy with l continuous.
pub fn analytic_derivative(
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: f64,
    which: Param,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let nf = f64::from(n);
    let s = shorthands(p, mu, nf, l, consts)?;
    let h2 = consts.hbar_sq();
    let f = s.ratio();
    let df = ratio_slope(&s, p, mu, nf, l, which, h2);
    Ok(match which {
        Param::L | Param::A => -2.0 * s.scale * f * df,
        Param::Mu => s.scale / mu * f * f - 2.0 * s.scale * f * df,
    })
}

/// Central difference with step h = 1e-5·max(1, |q|) and one Richardson level.
pub fn finite_difference(
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: f64,
    which: Param,
    consts: &PhysicalConstants,
) -> Result<f64> {
    let nf = f64::from(n);
    let q = match which {
        Param::L => l,
        Param::A => p.a,
        Param::Mu => mu,
    };
    let e = |x: f64| -> Result<f64> {
        match which {
            Param::L => energy_continuous(p, mu, nf, x, consts),
            Param::A => energy_continuous(&PotentialParams { a: x, ..*p }, mu, nf, l, consts),
            Param::Mu => energy_continuous(p, x, nf, l, consts),
        }
    };
    let h = 1e-5 * q.abs().max(1.0);
    let central = |h: f64| -> Result<f64> { Ok((e(q + h)? - e(q - h)?) / (2.0 * h)) };
    let d1 = central(h)?;
    let d2 = central(0.5 * h)?;
    Ok((4.0 * d2 - d1) / 3.0)
}

pub fn d_energy_d_param(
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: u32,
    which: Param,
    consts: &PhysicalConstants,
) -> Result<Derivative> {
    let lf = f64::from(l);
    let analytic = analytic_derivative(p, mu, n, lf, which, consts)?;
    let fd = finite_difference(p, mu, n, lf, which, consts)?;
    if !(analytic.is_finite() && fd.is_finite()) {
        return Err(Error::domain(format!(
            "derivative with respect to {which} is undefined here"
        )));
    }
    Ok(Derivative {
        analytic,
        finite_difference: fd,
        gap: (analytic - fd).abs() / analytic.abs().max(1.0),
    })
}

/// Values of one observable along both derivation paths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPath {
    pub paper_formula: f64,
    pub machine_derivative: f64,
}

/// ⟨r⁻²⟩ = 2μ/(ħ²(2l+1)) ∂E/∂l. The published expression differs from the
/// chain rule in the l-derivative of the numerator: it carries
/// (2l+1) + (4n+2)(2l+1) where the chain rule gives
/// (2l+1) + (2n+1)(2l+1)/γ.
pub fn expect_r_m2(p: &PotentialParams, mu: f64, n: u32, l: u32, consts: &PhysicalConstants) -> Result<DualPath> {
    let (nf, lf) = (f64::from(n), f64::from(l));
    let h2 = consts.hbar_sq();
    let two_l1 = 2.0 * lf + 1.0;
    let de_dl = analytic_derivative(p, mu, n, lf, Param::L, consts)?;
    let machine = 2.0 * mu / (h2 * two_l1) * de_dl;

    let s = shorthands(p, mu, nf, lf, consts)?;
    let alpha2 = p.alpha * p.alpha;
    let printed_dn = two_l1 + (4.0 * nf + 2.0) * two_l1;
    let dd = (4.0 * lf + 2.0) / s.gamma;
    let bracket = (s.den * printed_dn - s.num * dd) / (s.den * s.den);
    let paper = -8.0 * alpha2 / two_l1 * bracket * s.ratio();
    Ok(DualPath {
        paper_formula: paper,
        machine_derivative: machine,
    })
}

/// ⟨e^{−αr} r⁻¹⟩ = −∂E/∂A; the published form multiplies by e^{αr},
/// taken as 1 unless a radius is supplied.
pub fn expect_r_m1(
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: u32,
    consts: &PhysicalConstants,
    exp_factor_r: Option<f64>,
) -> Result<DualPath> {
    let (nf, lf) = (f64::from(n), f64::from(l));
    let machine = -analytic_derivative(p, mu, n, lf, Param::A, consts)?;
    let s = shorthands(p, mu, nf, lf, consts)?;
    let prefactor = exp_factor_r.map_or(1.0, |r| (p.alpha * r).exp());
    let paper = -4.0 * p.alpha * prefactor / (s.den * s.den) * s.num;
    Ok(DualPath {
        paper_formula: paper,
        machine_derivative: machine,
    })
}

/// ⟨T⟩ = −μ ∂E/∂μ. The published expression, read term by term, is
/// 4ħ²α² F ∂F/∂μ − (2ħ²α²/μ) F².
pub fn expect_kinetic(p: &PotentialParams, mu: f64, n: u32, l: u32, consts: &PhysicalConstants) -> Result<DualPath> {
    let (nf, lf) = (f64::from(n), f64::from(l));
    let machine = -mu * analytic_derivative(p, mu, n, lf, Param::Mu, consts)?;
    let s = shorthands(p, mu, nf, lf, consts)?;
    let h2 = consts.hbar_sq();
    let f = s.ratio();
    let fmu = ratio_slope(&s, p, mu, nf, lf, Param::Mu, h2);
    let k = h2 * p.alpha * p.alpha;
    let paper = 4.0 * k * f * fmu - 2.0 * k / mu * f * f;
    Ok(DualPath {
        paper_formula: paper,
        machine_derivative: machine,
    })
}

/// ⟨p²⟩ = 2μ⟨T⟩ with μ as a mass-energy; the published form is
/// 8ħ²α²μ F ∂F/∂μ − 4ħ²α² F² in units of the mass scale.
pub fn expect_p2(p: &PotentialParams, mu: f64, n: u32, l: u32, consts: &PhysicalConstants) -> Result<DualPath> {
    let (nf, lf) = (f64::from(n), f64::from(l));
    let t = expect_kinetic(p, mu, n, l, consts)?;
    let machine = 2.0 * consts.mass_energy(mu) * t.machine_derivative;
    let s = shorthands(p, mu, nf, lf, consts)?;
    let h2 = consts.hbar_sq();
    let f = s.ratio();
    let fmu = ratio_slope(&s, p, mu, nf, lf, Param::Mu, h2);
    let k = h2 * p.alpha * p.alpha;
    let unit = consts.mass_energy(1.0);
    let paper = unit * (8.0 * k * mu * fmu * f - 4.0 * k * f * f);
    Ok(DualPath {
        paper_formula: paper,
        machine_derivative: machine,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Derivation {
    PaperFormula,
    MachineDerivative,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationSet {
    pub r_m2: f64,
    pub r_m1: f64,
    pub kinetic: f64,
    pub p2: f64,
    pub derivation: Derivation,
}

pub fn expectation_set(
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: u32,
    consts: &PhysicalConstants,
    derivation: Derivation,
) -> Result<ExpectationSet> {
    let pick = |d: DualPath| match derivation {
        Derivation::PaperFormula => d.paper_formula,
        Derivation::MachineDerivative => d.machine_derivative,
    };
    Ok(ExpectationSet {
        r_m2: pick(expect_r_m2(p, mu, n, l, consts)?),
        r_m1: pick(expect_r_m1(p, mu, n, l, consts, None)?),
        kinetic: pick(expect_kinetic(p, mu, n, l, consts)?),
        p2: pick(expect_p2(p, mu, n, l, consts)?),
        derivation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ObservableKind {
    #[serde(rename = "r-2")]
    RM2,
    #[serde(rename = "r-1")]
    RM1,
    #[serde(rename = "T")]
    Kinetic,
    #[serde(rename = "p2")]
    P2,
}

impl ObservableKind {
    pub const ALL: [ObservableKind; 4] = [Self::RM2, Self::RM1, Self::Kinetic, Self::P2];

    pub fn label(&self) -> &'static str {
        match self {
            Self::RM2 => "r-2",
            Self::RM1 => "r-1",
            Self::Kinetic => "T",
            Self::P2 => "p2",
        }
    }

    fn oracle_observable(&self) -> Observable {
        match self {
            Self::RM2 => Observable::RM2,
            Self::RM1 => Observable::RM1Screened,
            Self::Kinetic => Observable::Kinetic,
            Self::P2 => Observable::P2,
        }
    }
}

impl fmt::Display for ObservableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ObservableKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "r-2" | "r_m2" | "rm2" => Ok(Self::RM2),
            "r-1" | "r_m1" | "rm1" => Ok(Self::RM1),
            "T" | "t" | "kinetic" => Ok(Self::Kinetic),
            "p2" | "p^2" => Ok(Self::P2),
            other => Err(Error::domain(format!(
                "unknown observable '{other}' (expected r-2, r-1, T, p2)"
            ))),
        }
    }
}

pub fn dual_path(
    kind: ObservableKind,
    p: &PotentialParams,
    mu: f64,
    n: u32,
    l: u32,
    consts: &PhysicalConstants,
    exp_factor_r: Option<f64>,
) -> Result<DualPath> {
    match kind {
        ObservableKind::RM2 => expect_r_m2(p, mu, n, l, consts),
        ObservableKind::RM1 => expect_r_m1(p, mu, n, l, consts, exp_factor_r),
        ObservableKind::Kinetic => expect_kinetic(p, mu, n, l, consts),
        ObservableKind::P2 => expect_p2(p, mu, n, l, consts),
    }
}

/// Relative deviation |a − b| / |b|; exact agreement is 0.
pub fn rel_dev(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs()
    }
}

/// Relative deviations below this are roundoff between independently
/// evaluated expressions and are reported as 0.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// [`rel_dev`] with deviations under [`ROUNDOFF_FLOOR`] reported as 0.
pub fn report_dev(a: f64, b: f64) -> f64 {
    let d = rel_dev(a, b);
    if d < ROUNDOFF_FLOOR {
        0.0
    } else {
        d
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub n: u32,
    pub l: u32,
    pub paper_formula: Option<f64>,
    pub machine_derivative: Option<f64>,
    pub oracle: Option<f64>,
    pub paper_table: Option<f64>,
    pub dev_pf_md: Option<f64>,
    pub dev_md_oracle: Option<f64>,
    pub dev_vs_table: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpectationReport {
    pub observable: ObservableKind,
    pub v0: f64,
    pub exp_factor_r: Option<f64>,
    pub rows: Vec<ReportRow>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct ReportOptions {
    pub exp_factor_r: Option<f64>,
    /// None disables the oracle column.
    pub oracle: Option<OracleConfig>,
    /// Published values keyed by (n, l).
    pub fixture: Vec<(u32, u32, f64)>,
}

/// Per-(n, l) comparison of both derivation paths, the grid oracle and
/// any published value. Rows are ordered by n, then l.
pub fn expectation_report(
    kind: ObservableKind,
    p: &PotentialParams,
    mu: f64,
    n_max: u32,
    l_max: u32,
    consts: &PhysicalConstants,
    opts: &ReportOptions,
) -> Result<ExpectationReport> {
    if n_max > 12 || l_max > 12 {
        return Err(Error::domain(format!(
            "n_max and l_max must be at most 12, got {n_max}, {l_max}"
        )));
    }
    let mut diagnostics = Vec::new();
    // Oracle values per l, indexed by n.
    let mut oracle_cols: Vec<Vec<Option<f64>>> = Vec::new();
    if let Some(cfg) = &opts.oracle {
        for l in 0..=l_max {
            let mut col = vec![None; n_max as usize + 1];
            match oracle::solve_matrix(p, l, mu, consts, cfg, n_max as usize + 1) {
                Ok(sol) => {
                    for d in &sol.diagnostics {
                        diagnostics.push(format!("oracle: {d}"));
                    }
                    for (n, slot) in col.iter_mut().enumerate().take(sol.len()) {
                        match oracle::expectation_numeric(&sol, n, kind.oracle_observable()) {
                            Ok(v) => *slot = Some(v),
                            Err(e) => diagnostics.push(format!("oracle n={n} l={l}: {e}")),
                        }
                    }
                }
                Err(e) => diagnostics.push(format!("oracle l={l}: {e}")),
            }
            oracle_cols.push(col);
        }
    }
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for l in 0..=l_max {
            let (pf, md) = match dual_path(kind, p, mu, n, l, consts, opts.exp_factor_r) {
                Ok(d) => (Some(d.paper_formula), Some(d.machine_derivative)),
                Err(e) => {
                    diagnostics.push(format!("n={n} l={l}: {e}"));
                    (None, None)
                }
            };
            let oracle = oracle_cols.get(l as usize).and_then(|c| c[n as usize]);
            let table = opts.fixture.iter().find(|f| f.0 == n && f.1 == l).map(|f| f.2);
            let both = |a: Option<f64>, b: Option<f64>| a.zip(b).map(|(a, b)| report_dev(a, b));
            rows.push(ReportRow {
                n,
                l,
                paper_formula: pf,
                machine_derivative: md,
                oracle,
                paper_table: table,
                dev_pf_md: both(pf, md),
                dev_md_oracle: both(md, oracle),
                dev_vs_table: both(pf, table),
            });
        }
    }
    Ok(ExpectationReport {
        observable: kind,
        v0: p.v0,
        exp_factor_r: opts.exp_factor_r,
        rows,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::Registry;

    fn mol(name: &str) -> (PotentialParams, f64) {
        let m = Registry::builtin().get(name).unwrap();
        (PotentialParams::from_molecule(&m, 0.0), m.mu)
    }

    #[test]
    fn collapsed_a_derivative() {
        // E = −(2α²/μ)((1 − μA/α)/2)² at n = l = 0 with B = C = V0 = 0, ħ = 1.
        let c = PhysicalConstants::paper();
        let (alpha, mu, a) = (0.5, 1.0, 0.0);
        let p = PotentialParams::new(0.0, a, 0.0, 0.0, alpha).unwrap();
        let d = d_energy_d_param(&p, mu, 0, 0, Param::A, &c).unwrap();
        let want = alpha * (1.0 - mu * a / alpha);
        assert!((d.analytic - want).abs() < 1e-15);
        assert!(d.gap < 1e-9);
    }

    #[test]
    fn h2_and_co_derivatives() {
        for c in [PhysicalConstants::paper(), PhysicalConstants::physical()] {
            let (p, mu) = mol("H2");
            for which in [Param::L, Param::A, Param::Mu] {
                let d = d_energy_d_param(&p, mu, 0, 0, which, &c).unwrap();
                assert!(d.gap < 1e-8, "H2 {which}: {d:?}");
            }
            let (p, mu) = mol("CO");
            let d = d_energy_d_param(&p, mu, 1, 1, Param::Mu, &c).unwrap();
            assert!(d.gap < 1e-8, "CO mu: {d:?}");
        }
    }

    #[test]
    fn paper_and_machine_paths() {
        let c = PhysicalConstants::paper();
        for name in ["H2", "LiH", "HCl", "CO"] {
            let (p, mu) = mol(name);
            for n in 0..4 {
                for l in 0..4 {
                    let r1 = expect_r_m1(&p, mu, n, l, &c, None).unwrap();
                    assert!(rel_dev(r1.paper_formula, r1.machine_derivative) < 1e-12);
                    let t = expect_kinetic(&p, mu, n, l, &c).unwrap();
                    assert!(rel_dev(t.paper_formula, t.machine_derivative) < 1e-10);
                    let p2 = expect_p2(&p, mu, n, l, &c).unwrap();
                    assert_eq!(p2.machine_derivative, 2.0 * mu * t.machine_derivative);
                    assert!(rel_dev(p2.paper_formula, p2.machine_derivative) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn printed_r_m2_differs_from_chain_rule() {
        let c = PhysicalConstants::paper();
        let (p, mu) = mol("H2");
        let d = expect_r_m2(&p, mu, 1, 1, &c).unwrap();
        assert!(rel_dev(d.paper_formula, d.machine_derivative) > 1e-3);
    }

    #[test]
    fn exp_factor_scales_r_m1() {
        let c = PhysicalConstants::paper();
        let (p, mu) = mol("LiH");
        let one = expect_r_m1(&p, mu, 0, 0, &c, None).unwrap();
        let two = expect_r_m1(&p, mu, 0, 0, &c, Some(1.0)).unwrap();
        assert!((two.paper_formula / one.paper_formula - p.alpha.exp()).abs() < 1e-12);
        assert_eq!(one.machine_derivative, two.machine_derivative);
    }

    #[test]
    fn observable_parse() {
        for k in ObservableKind::ALL {
            assert_eq!(k.label().parse::<ObservableKind>().unwrap(), k);
        }
        assert!("x".parse::<ObservableKind>().is_err());
    }

    #[test]
    fn report_layout_and_determinism() {
        let c = PhysicalConstants::paper();
        let (p, mu) = mol("H2");
        let opts = ReportOptions {
            fixture: vec![(0, 0, -2.03579269252)],
            ..Default::default()
        };
        let a = expectation_report(ObservableKind::RM2, &p, mu, 8, 3, &c, &opts).unwrap();
        let b = expectation_report(ObservableKind::RM2, &p, mu, 8, 3, &c, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 36);
        assert_eq!((a.rows[1].n, a.rows[1].l), (0, 1));
        assert_eq!(a.rows[0].paper_table, Some(-2.03579269252));
        assert!(a.rows[0].dev_vs_table.is_some());
        assert!(expectation_report(ObservableKind::RM2, &p, mu, 13, 0, &c, &opts).is_err());
    }

    #[test]
    fn hulthen_sanity_oracle_column() {
        let c = PhysicalConstants::paper();
        let p = PotentialParams::new(2.0, 0.0, 0.0, 0.0, 0.05).unwrap();
        let cfg = OracleConfig {
            r_min: 1e-10,
            r_max: 2.0,
            ..OracleConfig::default()
        };
        for kind in ObservableKind::ALL {
            let opts = ReportOptions {
                oracle: Some(cfg),
                ..Default::default()
            };
            let rep = expectation_report(kind, &p, 1.0, 0, 0, &c, &opts).unwrap();
            let row = &rep.rows[0];
            assert!(row.dev_md_oracle.unwrap() < 1e-2, "{kind}: {row:?}");
        }
    }
}
