//! Table builders behind each CLI command. Every number comes from a
//! public library call; this module only arranges rows.

use crate::constants::{Molecule, PhysicalConstants, Registry};
use crate::error::{Error, Result};
use crate::figures::{self, FigureKind, CURVE_POINTS, FIGURE1_ALPHAS, WAVE_N_MAX};
use crate::fixtures::{self, TableInfo, MISSING_TABLES};
use crate::hft::{self, ObservableKind, ReportOptions};
use crate::oracle::{self, Method, OracleConfig};
use crate::output::{Cell, Metadata, Table};
use crate::potential::PotentialParams;
use crate::spectrum::{self, JacobiConvention};

/// Molecule the unattributed block is evaluated against.
pub const UNATTRIBUTED_REFERENCE: &str = "H2";

/// A potential and reduced mass, from the registry or given explicitly.
#[derive(Clone, Debug, PartialEq)]
pub struct System {
    pub label: String,
    pub params: PotentialParams,
    pub mu: f64,
}

impl System {
    pub fn molecule(m: &Molecule, v0: f64) -> Self {
        Self {
            label: m.name.clone(),
            params: PotentialParams::from_molecule(m, v0),
            mu: m.mu,
        }
    }

    /// `params` is "v0,A,B,C,alpha".
    pub fn explicit(params: &str, mu: f64) -> Result<Self> {
        let vals: Vec<f64> = params
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Domain(format!("bad number '{}' in --params", s.trim())))
            })
            .collect::<Result<_>>()?;
        let [v0, a, b, c, alpha] = vals[..] else {
            return Err(Error::Domain(format!(
                "--params needs five values v0,A,B,C,alpha; got {}",
                vals.len()
            )));
        };
        Ok(Self {
            label: "custom".into(),
            params: PotentialParams::new(v0, a, b, c, alpha)?,
            mu,
        })
    }

    pub fn resolve(
        registry: &Registry,
        molecule: Option<&str>,
        params: Option<&str>,
        mu: Option<f64>,
        v0: f64,
    ) -> Result<Self> {
        match (molecule, params) {
            (Some(_), Some(_)) => Err(Error::domain("give either --molecule or --params, not both")),
            (Some(name), None) => {
                let m = registry.get(name)?;
                let mut s = Self::molecule(&m, v0);
                if let Some(mu) = mu {
                    s.mu = mu;
                }
                Ok(s)
            }
            (None, Some(p)) => {
                let mu = mu.ok_or_else(|| Error::domain("--params needs --mu"))?;
                Self::explicit(p, mu)
            }
            (None, None) => Err(Error::domain("give --molecule or --params")),
        }
    }

    fn annotate(&self, meta: Metadata) -> Metadata {
        let p = &self.params;
        meta.with("system", self.label.clone()).with(
            "parameters",
            format!(
                "v0={} A={} B={} C={} alpha={} mu={}",
                p.v0, p.a, p.b, p.c, p.alpha, self.mu
            ),
        )
    }
}

pub fn energy_table(sys: &System, n: u32, l: u32, consts: &PhysicalConstants, meta: Metadata) -> Result<Table> {
    let r = spectrum::energy(&sys.params, sys.mu, n, l, consts)?;
    let nu = spectrum::nu_consistency(&sys.params, sys.mu, n, l, consts)?;
    let mut t = Table::new(
        sys.annotate(meta),
        &[
            "n",
            "l",
            "energy",
            "gamma",
            "nu_residual",
            "below_asymptote",
            "tau_negative",
            "normalizable",
        ],
    );
    t.push(vec![
        n.into(),
        l.into(),
        r.energy.into(),
        r.gamma.into(),
        r.nu_residual.into(),
        r.below_asymptote.into(),
        nu.bound_state_condition().into(),
        r.normalizable.into(),
    ]);
    Ok(t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectRequest {
    pub kind: ObservableKind,
    pub n_max: u32,
    pub l_max: u32,
    pub exp_factor_r: Option<f64>,
    pub oracle: bool,
}

const REPORT_COLUMNS: [&str; 9] = [
    "n",
    "l",
    "paper_formula",
    "machine_derivative",
    "oracle",
    "paper_table",
    "dev_pf_md",
    "dev_md_oracle",
    "dev_vs_table",
];

fn oracle_options(sys: &System, fixture: Option<&TableInfo>, req: &ExpectRequest) -> Result<ReportOptions> {
    Ok(ReportOptions {
        exp_factor_r: req.exp_factor_r,
        oracle: req.oracle.then(|| OracleConfig::scaled(sys.params.alpha)),
        fixture: match fixture {
            Some(t) => t.triples()?,
            None => Vec::new(),
        },
    })
}

/// Expectation report for a registry molecule, with the published table
/// as a fixture column when one exists.
pub fn expect_table(sys: &System, req: &ExpectRequest, consts: &PhysicalConstants, meta: Metadata) -> Result<Table> {
    let fixture = fixtures::table_for(&sys.label, req.kind);
    let opts = oracle_options(sys, fixture, req)?;
    let report = hft::expectation_report(req.kind, &sys.params, sys.mu, req.n_max, req.l_max, consts, &opts)?;
    let mut meta = sys.annotate(meta).with("observable", req.kind.label());
    if let Some(f) = fixture {
        meta = meta.with("fixture", format!("table {}", f.id));
    }
    let mut t = Table::new(meta, &REPORT_COLUMNS);
    for r in &report.rows {
        t.push(vec![
            r.n.into(),
            r.l.into(),
            r.paper_formula.into(),
            r.machine_derivative.into(),
            r.oracle.into(),
            r.paper_table.into(),
            r.dev_pf_md.into(),
            r.dev_md_oracle.into(),
            r.dev_vs_table.into(),
        ]);
    }
    for d in report.diagnostics {
        t.note(d);
    }
    Ok(t)
}

const TABLE_COLUMNS: [&str; 10] = [
    "n",
    "l",
    "paper_table",
    "paper_formula",
    "machine_derivative",
    "oracle",
    "dev_pf_table",
    "dev_md_table",
    "dev_pf_md",
    "dev_md_oracle",
];

/// Regenerates a published table in its own row order, with deviation
/// columns. Ids 3 and 4 fall back to the unattributed block with a notice.
pub fn table_table(
    id: &str,
    registry: &Registry,
    consts: &PhysicalConstants,
    v0: f64,
    oracle: bool,
    meta: Metadata,
) -> Result<Table> {
    let normalized = id.trim().trim_start_matches('0');
    let missing = MISSING_TABLES.contains(&normalized);
    let info = if missing {
        fixtures::table("2b").ok_or_else(|| Error::Fixture("unattributed block is not embedded".into()))?
    } else {
        fixtures::table(id).ok_or_else(|| {
            let known: Vec<&str> = fixtures::TABLES.iter().map(|t| t.id).collect();
            Error::Lookup(format!("table '{id}' (available: {})", known.join(", ")))
        })?
    };
    let molecule = info.molecule.unwrap_or(UNATTRIBUTED_REFERENCE);
    let sys = System::molecule(&registry.get(molecule)?, v0);
    let fixture = info.rows()?;
    let n_max = fixture.iter().map(|r| r.n).max().unwrap_or(0);
    let l_max = fixture.iter().map(|r| r.l).max().unwrap_or(0);
    let req = ExpectRequest {
        kind: info.observable,
        n_max,
        l_max,
        exp_factor_r: None,
        oracle,
    };
    let opts = oracle_options(&sys, Some(info), &req)?;
    let report = hft::expectation_report(info.observable, &sys.params, sys.mu, n_max, l_max, consts, &opts)?;

    let meta = sys
        .annotate(meta)
        .with("table", info.id)
        .with("caption", info.caption)
        .with("observable", info.observable.label());
    let mut t = Table::new(meta, &TABLE_COLUMNS);
    if missing {
        t.note(format!(
            "table {normalized} is missing in the paper; showing the unattributed table 2b block instead"
        ));
    }
    if info.molecule.is_none() {
        t.note(format!(
            "table 2b names no molecule; computed columns use {UNATTRIBUTED_REFERENCE}"
        ));
    }
    let both = |a: Option<f64>, b: Option<f64>| a.zip(b).map(|(a, b)| hft::report_dev(a, b));
    for f in &fixture {
        let r = report
            .rows
            .iter()
            .find(|r| r.n == f.n && r.l == f.l)
            .ok_or_else(|| Error::Fixture(format!("row ({}, {}) outside the report grid", f.n, f.l)))?;
        t.push(vec![
            f.n.into(),
            f.l.into(),
            Cell::Text(f.text.clone()),
            r.paper_formula.into(),
            r.machine_derivative.into(),
            r.oracle.into(),
            both(r.paper_formula, Some(f.value)).into(),
            both(r.machine_derivative, Some(f.value)).into(),
            r.dev_pf_md.into(),
            r.dev_md_oracle.into(),
        ]);
    }
    for d in report.diagnostics {
        t.note(d);
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct FigureRequest {
    pub id: u32,
    pub convention: JacobiConvention,
    pub points: Option<usize>,
    pub r_end: Option<f64>,
}

pub fn figure_table(sys: &System, req: &FigureRequest, consts: &PhysicalConstants, meta: Metadata) -> Result<Table> {
    let kind =
        FigureKind::from_id(req.id).map_err(|_| Error::Lookup(format!("figure {} (available: 1..9)", req.id)))?;
    let meta = sys.annotate(meta).with("figure", req.id.to_string());
    match kind {
        FigureKind::PotentialByAlpha => {
            let mut t = Table::new(meta, &["alpha", "r", "F", "F1", "F2", "F3"]);
            for s in figures::figure1(&sys.params, &FIGURE1_ALPHAS, req.points.unwrap_or(CURVE_POINTS))? {
                let c = s.sample;
                t.push(vec![
                    s.alpha.into(),
                    c.r.into(),
                    c.full.into(),
                    c.hulthen.into(),
                    c.yukawa.into(),
                    c.inverse_quadratic.into(),
                ]);
            }
            zero_v0_note(&mut t, &sys.params);
            Ok(t)
        }
        FigureKind::Components => {
            let mut t = Table::new(meta, &["r", "F", "F1", "F2", "F3"]);
            for c in figures::figure2(&sys.params, req.points.unwrap_or(CURVE_POINTS))? {
                t.push(vec![
                    c.r.into(),
                    c.full.into(),
                    c.hulthen.into(),
                    c.yukawa.into(),
                    c.inverse_quadratic.into(),
                ]);
            }
            zero_v0_note(&mut t, &sys.params);
            Ok(t)
        }
        FigureKind::WaveFunction { .. } | FigureKind::Density => {
            let meta = meta.with("convention", req.convention.to_string());
            let mut t = Table::new(meta, &["n", "l", "r", "psi", "density"]);
            let samples = figures::wave_samples(
                &sys.params,
                sys.mu,
                &kind.ls(),
                WAVE_N_MAX,
                consts,
                req.convention,
                req.points.unwrap_or(figures::WAVE_POINTS),
                req.r_end,
            )?;
            for s in samples {
                t.push(vec![s.n.into(), s.l.into(), s.r.into(), s.psi.into(), s.density.into()]);
            }
            Ok(t)
        }
    }
}

fn zero_v0_note(t: &mut Table, p: &PotentialParams) {
    if p.v0 == 0.0 {
        t.note("v0 = 0, so the Hulthen curve F1 is identically zero; pass --v0 to set it");
    }
}

pub fn registry_table(registry: &Registry, name: Option<&str>, meta: Metadata) -> Result<Table> {
    let mut t = Table::new(meta, &["name", "A", "B", "C", "alpha", "mu"]);
    let rows = match name {
        Some(n) => vec![registry.get(n)?],
        None => registry.molecules().to_vec(),
    };
    for m in rows {
        t.push(vec![
            m.name.clone().into(),
            m.a.into(),
            m.b.into(),
            m.c.into(),
            m.alpha.into(),
            m.mu.into(),
        ]);
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleRequest {
    pub l: u32,
    pub states: usize,
    pub config: OracleConfig,
    /// Emit r and u_k columns instead of the energy summary.
    pub dump: bool,
    /// Keep every stride-th grid point in a dump.
    pub stride: usize,
}

pub fn oracle_table(sys: &System, req: &OracleRequest, consts: &PhysicalConstants, meta: Metadata) -> Result<Table> {
    let cfg = req.config;
    let sol = oracle::solve_matrix(&sys.params, req.l, sys.mu, consts, &cfg, req.states)?;
    let meta = sys.annotate(meta).with("l", req.l.to_string()).with(
        "grid",
        format!(
            "r_min={} r_max={} n_points={} method={}",
            cfg.r_min, cfg.r_max, cfg.n_points, cfg.method
        ),
    );
    let mut t = if req.dump {
        let mut cols = vec!["r".to_string()];
        cols.extend((0..sol.len()).map(|k| format!("u{k}")));
        let col_refs: Vec<&str> = cols.iter().map(String::as_str).collect();
        let mut t = Table::new(meta, &col_refs);
        for i in (0..sol.grid.len()).step_by(req.stride.max(1)) {
            let mut row: Vec<Cell> = vec![sol.grid[i].into()];
            row.extend(sol.eigenvectors.iter().map(|u| Cell::Num(u[i])));
            t.push(row);
        }
        for (k, e) in sol.eigenvalues.iter().enumerate() {
            t.note(format!("E{k} = {}", crate::output::fmt_num(*e)));
        }
        t
    } else {
        let mut t = Table::new(
            meta,
            &[
                "k",
                "energy",
                "nodes",
                "numerov_energy",
                "numerov_nodes",
                "analytic",
                "dev_analytic",
            ],
        );
        for (k, &e) in sol.eigenvalues.iter().enumerate() {
            let (num_e, num_nodes) = if cfg.method == Method::Numerov {
                let bracket = (e - 1e-3 * e.abs().max(1e-12), e + 1e-3 * e.abs().max(1e-12));
                match oracle::solve_numerov(&sys.params, req.l, sys.mu, consts, &cfg, bracket) {
                    Ok(s) => (Some(s.energy), Cell::from(s.nodes)),
                    Err(err) => {
                        t.note(format!("numerov k={k}: {err}"));
                        (None, Cell::Empty)
                    }
                }
            } else {
                (None, Cell::Empty)
            };
            let analytic = spectrum::energy(&sys.params, sys.mu, k as u32, req.l, consts)
                .ok()
                .map(|r| r.energy);
            t.push(vec![
                k.into(),
                e.into(),
                sol.node_counts[k].into(),
                num_e.into(),
                num_nodes,
                analytic.into(),
                analytic.map(|a| hft::report_dev(e, a)).into(),
            ]);
        }
        t
    };
    for d in &sol.diagnostics {
        t.note(d.clone());
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::UnitMode;

    fn meta() -> Metadata {
        Metadata::new(UnitMode::Paper, "test")
    }

    #[test]
    fn explicit_params() {
        let s = System::explicit("0,0,0,0,0.5", 1.0).unwrap();
        let t = energy_table(&s, 0, 0, &PhysicalConstants::paper(), meta()).unwrap();
        assert_eq!(t.rows[0][2], Cell::Num(-0.125));
        assert!(System::explicit("0,0,0,0.5", 1.0).is_err());
        assert!(System::explicit("0,0,x,0,0.5", 1.0).is_err());
        let reg = Registry::builtin();
        assert!(System::resolve(&reg, None, Some("0,0,0,0,1"), None, 0.0).is_err());
        assert!(matches!(
            System::resolve(&reg, Some("XY"), None, None, 0.0),
            Err(Error::UnknownMolecule { .. })
        ));
    }

    #[test]
    fn table_layouts() {
        let reg = Registry::builtin();
        let c = PhysicalConstants::paper();
        let t = table_table("10", &reg, &c, 0.0, false, meta()).unwrap();
        assert_eq!(t.rows.len(), 36);
        assert_eq!(t.rows[0][2], Cell::Text("-5.77750109574".into()));
        let t = table_table("2", &reg, &c, 0.0, false, meta()).unwrap();
        assert_eq!(t.rows.len(), 4);
        let t = table_table("3", &reg, &c, 0.0, false, meta()).unwrap();
        assert_eq!(t.rows.len(), 36);
        assert!(t.notes[0].contains("missing"));
        assert!(matches!(
            table_table("18", &reg, &c, 0.0, false, meta()),
            Err(Error::Lookup(_))
        ));
    }

    #[test]
    fn figure_ids() {
        let s = System::molecule(&Registry::builtin().get("H2").unwrap(), 0.0);
        let req = |id| FigureRequest {
            id,
            convention: JacobiConvention::Printed,
            points: Some(16),
            r_end: None,
        };
        let c = PhysicalConstants::physical();
        assert_eq!(
            figure_table(&s, &req(2), &c, meta()).unwrap().columns,
            ["r", "F", "F1", "F2", "F3"]
        );
        assert_eq!(figure_table(&s, &req(9), &c, meta()).unwrap().rows.len(), 6 * 5 * 16);
        assert!(matches!(figure_table(&s, &req(10), &c, meta()), Err(Error::Lookup(_))));
    }
}
