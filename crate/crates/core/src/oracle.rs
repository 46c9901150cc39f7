//! Independent radial solver on a uniform grid with the exact potential:
//! a second-order finite-difference matrix method and a Numerov shooting
//! method, plus quadrature expectation values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::{hbar2_over_2mu, PhysicalConstants};
use crate::error::{Error, Result};
use crate::potential::{greene_aldrich_inv_r, greene_aldrich_inv_r2, potential_unchecked, PotentialParams};
use crate::quadrature::trapezoid;
use crate::tridiag::SymTridiag;

/// α of H2, the reference for scaling the default box.
const REFERENCE_ALPHA: f64 = 0.2099;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Matrix,
    Numerov,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Matrix => "matrix",
            Self::Numerov => "numerov",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "matrix" => Ok(Self::Matrix),
            "numerov" => Ok(Self::Numerov),
            other => Err(Error::domain(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub n_points: usize,
    pub method: Method,
    pub eig_tol: f64,
    /// Drop states at or above the asymptote C.
    pub bound_only: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            r_min: 1e-4,
            r_max: 40.0,
            n_points: 20_000,
            method: Method::Matrix,
            eig_tol: 1e-12,
            bound_only: true,
        }
    }
}

impl OracleConfig {
    /// Default box with r_max scaled by α_H2/α.
    pub fn scaled(alpha: f64) -> Self {
        Self {
            r_max: 40.0 * REFERENCE_ALPHA / alpha,
            ..Self::default()
        }
    }

    /// Box fitted to a state of energy `energy`: r_min close to the origin
    /// and r_max fifteen decay lengths past the outer turning point.
    pub fn fitted(
        p: &PotentialParams,
        l: u32,
        mu: f64,
        consts: &PhysicalConstants,
        energy: f64,
        n_points: usize,
    ) -> Result<Self> {
        let k = hbar2_over_2mu(mu, consts)?;
        let depth = p.c - energy;
        if !(depth > 0.0) {
            return Err(Error::domain(format!(
                "energy {energy} is not below the asymptote {}",
                p.c
            )));
        }
        let kappa = (depth / k).sqrt();
        let ll = f64::from(l) * (f64::from(l) + 1.0);
        let veff = |r: f64| potential_unchecked(r, p) + k * ll / (r * r);
        // Outermost classical turning point on a coarse log scan.
        let mut r_turn: f64 = 0.0;
        let mut r = 1e-6;
        while r < 1e4 / p.alpha.min(1.0) {
            if veff(r) < energy {
                r_turn = r;
            }
            r *= 1.01;
        }
        Ok(Self {
            r_min: 1e-10,
            r_max: r_turn + 15.0 / kappa,
            n_points,
            ..Self::default()
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r_min > 0.0 && self.r_min < self.r_max && self.r_max.is_finite()) {
            return Err(Error::domain(format!(
                "oracle grid needs 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.n_points < 1000 {
            return Err(Error::domain(format!(
                "n_points must be at least 1000, got {}",
                self.n_points
            )));
        }
        if !(self.eig_tol > 0.0 && self.eig_tol <= 1e-8) {
            return Err(Error::domain(format!(
                "eig_tol must be in (0, 1e-8], got {}",
                self.eig_tol
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / (self.n_points - 1) as f64
    }

    pub fn grid(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n_points).map(|i| self.r_min + h * i as f64).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadialGridSolution {
    pub grid: Vec<f64>,
    pub eigenvalues: Vec<f64>,
    /// u_k(r) on the full grid with zeros at both ends.
    pub eigenvectors: Vec<Vec<f64>>,
    pub node_counts: Vec<usize>,
    pub diagnostics: Vec<String>,
    pub params: PotentialParams,
    pub l: u32,
    pub mu: f64,
    pub constants: PhysicalConstants,
}

impl RadialGridSolution {
    pub fn step(&self) -> f64 {
        self.grid[1] - self.grid[0]
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }
}

/// Sign changes of a sampled function, ignoring values below 1e-8 of the
/// maximum so that round-off in the tails does not count as a node.
pub fn count_nodes(u: &[f64]) -> usize {
    let peak = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-8 * peak;
    let mut last = 0.0;
    let mut nodes = 0;
    for &v in u {
        if v.abs() <= floor {
            continue;
        }
        if last != 0.0 && v.signum() != last {
            nodes += 1;
        }
        last = v.signum();
    }
    nodes
}

fn effective_on_grid(
    p: &PotentialParams,
    l: u32,
    mu: f64,
    consts: &PhysicalConstants,
    grid: &[f64],
) -> Result<(f64, Vec<f64>)> {
    let k = hbar2_over_2mu(mu, consts)?;
    let ll = f64::from(l) * (f64::from(l) + 1.0);
    let v = grid
        .iter()
        .map(|&r| potential_unchecked(r, p) + k * ll / (r * r))
        .collect();
    Ok((k, v))
}

/// Finite-difference Hamiltonian on the interior points, Dirichlet ends.
pub fn solve_matrix(
    p: &PotentialParams,
    l: u32,
    mu: f64,
    consts: &PhysicalConstants,
    cfg: &OracleConfig,
    k_states: usize,
) -> Result<RadialGridSolution> {
    cfg.validate()?;
    p.validate()?;
    if k_states == 0 {
        return Err(Error::domain("k_states must be at least 1"));
    }
    let grid = cfg.grid();
    let h = cfg.step();
    let (k, veff) = effective_on_grid(p, l, mu, consts, &grid)?;
    let interior = grid.len() - 2;
    let kin = k / (h * h);
    let diag: Vec<f64> = veff[1..grid.len() - 1].iter().map(|v| 2.0 * kin + v).collect();
    let t = SymTridiag::new(diag, vec![-kin; interior - 1])?;

    let mut eigenvalues = Vec::new();
    let mut eigenvectors = Vec::new();
    let mut node_counts = Vec::new();
    let mut diagnostics = Vec::new();
    for idx in 0..k_states.min(interior) {
        let e = t.eigenvalue(idx, cfg.eig_tol)?;
        if cfg.bound_only && e >= p.c {
            diagnostics.push(format!(
                "only {idx} bound state(s) below the asymptote {} for l={l}; requested {k_states}",
                p.c
            ));
            break;
        }
        let v = t.eigenvector(e)?;
        let mut u = Vec::with_capacity(grid.len());
        u.push(0.0);
        u.extend_from_slice(&v);
        u.push(0.0);
        orient_and_normalize(&mut u, h);
        node_counts.push(count_nodes(&u));
        eigenvalues.push(e);
        eigenvectors.push(u);
    }
    Ok(RadialGridSolution {
        grid,
        eigenvalues,
        eigenvectors,
        node_counts,
        diagnostics,
        params: *p,
        l,
        mu,
        constants: *consts,
    })
}

fn orient_and_normalize(u: &mut [f64], h: f64) {
    let peak = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if let Some(first) = u.iter().find(|v| v.abs() > 1e-3 * peak) {
        if *first < 0.0 {
            u.iter_mut().for_each(|v| *v = -*v);
        }
    }
    let sq: Vec<f64> = u.iter().map(|v| v * v).collect();
    let norm = trapezoid(&sq, h).sqrt();
    if norm > 0.0 {
        u.iter_mut().for_each(|v| *v /= norm);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumerovSolution {
    pub energy: f64,
    pub nodes: usize,
    pub iterations: usize,
    pub match_index: usize,
}

struct Shooter<'a> {
    grid: &'a [f64],
    veff: &'a [f64],
    k: f64,
    h: f64,
}

impl Shooter<'_> {
    fn f(&self, i: usize, e: f64) -> f64 {
        (self.veff[i] - e) / self.k
    }

    /// Index of the outermost classical turning point.
    fn match_index(&self, e: f64) -> usize {
        let n = self.grid.len();
        let lo = 8;
        let hi = n - 8;
        let mut m = None;
        for i in (lo..hi).rev() {
            if self.veff[i] < e {
                m = Some(i);
                break;
            }
        }
        m.unwrap_or_else(|| {
            (lo..hi)
                .min_by(|&a, &b| self.veff[a].total_cmp(&self.veff[b]))
                .unwrap_or(n / 2)
        })
    }

    /// Outward and inward Numerov sweeps meeting at m. Returns the
    /// normalized mismatch and the assembled solution.
    fn shoot(&self, e: f64, m: usize) -> (f64, Vec<f64>) {
        let n = self.grid.len();
        let h2 = self.h * self.h / 12.0;
        let w = |i: usize| 1.0 - h2 * self.f(i, e);
        let mut out = vec![0.0; m + 2];
        out[1] = 1e-20;
        // First step uses (fu) at the wall extrapolated linearly.
        out[2] = 2.0 * out[1] * (1.0 + 6.0 * h2 * self.f(1, e));
        for i in 2..=m {
            out[i + 1] = ((12.0 - 10.0 * w(i)) * out[i] - w(i - 1) * out[i - 1]) / w(i + 1);
            if out[i + 1].abs() > 1e150 {
                out.iter_mut().for_each(|v| *v *= 1e-150);
            }
        }
        let mut inw = vec![0.0; n];
        inw[n - 2] = 1e-20;
        for i in (m..n - 2).rev() {
            inw[i] = ((12.0 - 10.0 * w(i + 1)) * inw[i + 1] - w(i + 2) * inw[i + 2]) / w(i);
            if inw[i].abs() > 1e150 {
                inw.iter_mut().for_each(|v| *v *= 1e-150);
            }
        }
        // Values and centred slopes at m; the inward run also covers m - 1.
        let inw_prev = ((12.0 - 10.0 * w(m)) * inw[m] - w(m + 1) * inw[m + 1]) / w(m - 1);
        let (uo, duo) = (out[m], (out[m + 1] - out[m - 1]) * 0.5);
        let (ui, dui) = (inw[m], (inw[m + 1] - inw_prev) * 0.5);
        let wron = duo * ui - uo * dui;
        let scale = uo.hypot(duo) * ui.hypot(dui);
        let mismatch = if scale > 0.0 { wron / scale } else { 0.0 };
        let mut u = vec![0.0; n];
        let ratio = if ui != 0.0 { uo / ui } else { 1.0 };
        u[..=m].copy_from_slice(&out[..=m]);
        for i in m + 1..n {
            u[i] = inw[i] * ratio;
        }
        (mismatch, u)
    }
}

/// Numerov shooting with a fixed matching point, bisection and secant
/// polish inside `bracket`.
pub fn solve_numerov(
    p: &PotentialParams,
    l: u32,
    mu: f64,
    consts: &PhysicalConstants,
    cfg: &OracleConfig,
    bracket: (f64, f64),
) -> Result<NumerovSolution> {
    cfg.validate()?;
    p.validate()?;
    let grid = cfg.grid();
    let (k, veff) = effective_on_grid(p, l, mu, consts, &grid)?;
    let sh = Shooter {
        grid: &grid,
        veff: &veff,
        k,
        h: cfg.step(),
    };
    let (mut a, mut b) = (bracket.0.min(bracket.1), bracket.0.max(bracket.1));
    let m = sh.match_index(0.5 * (a + b));
    let mut fa = sh.shoot(a, m).0;
    let fb = sh.shoot(b, m).0;
    if fa == 0.0 {
        b = a;
    } else if fa * fb > 0.0 {
        return Err(Error::RootFinding(format!(
            "no sign change of the matching function on [{a}, {b}]"
        )));
    }
    let mut iterations = 0;
    let mut fb = fb;
    while iterations < 200 {
        iterations += 1;
        if (b - a).abs() <= cfg.eig_tol * a.abs().max(b.abs()).max(1e-300) {
            break;
        }
        // Secant step, fall back to bisection if it leaves the bracket.
        let mut c = b - fb * (b - a) / (fb - fa);
        if !(c > a.min(b) && c < a.max(b)) || iterations % 4 == 0 {
            c = 0.5 * (a + b);
        }
        let fc = sh.shoot(c, m).0;
        if fc == 0.0 {
            a = c;
            b = c;
            break;
        }
        if fa * fc < 0.0 {
            b = c;
            fb = fc;
        } else {
            a = c;
            fa = fc;
        }
    }
    if (b - a).abs() > cfg.eig_tol * a.abs().max(b.abs()).max(1e-300) * 10.0 {
        return Err(Error::RootFinding(format!(
            "Numerov did not converge after {iterations} iterations"
        )));
    }
    let energy = 0.5 * (a + b);
    let (_, u) = sh.shoot(energy, m);
    Ok(NumerovSolution {
        energy,
        nodes: count_nodes(&u[1..u.len() - 1]),
        iterations,
        match_index: m,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    RM2,
    RM1Screened,
    Kinetic,
    P2,
}

/// Trapezoidal expectation values over a solved state. The kinetic
/// energy is E − ⟨V⟩ with the centrifugal term counted as kinetic, which
/// is the quantity −μ ∂E/∂μ.
pub fn expectation_numeric(sol: &RadialGridSolution, state: usize, obs: Observable) -> Result<f64> {
    let u = sol
        .eigenvectors
        .get(state)
        .ok_or_else(|| Error::domain(format!("state {state} out of range ({} solved)", sol.len())))?;
    let h = sol.step();
    let weighted = |f: &dyn Fn(f64) -> f64| {
        let vals: Vec<f64> = sol.grid.iter().zip(u).map(|(&r, &v)| v * v * f(r)).collect();
        trapezoid(&vals, h)
    };
    let alpha = sol.params.alpha;
    Ok(match obs {
        Observable::RM2 => weighted(&|r| 1.0 / (r * r)),
        Observable::RM1Screened => weighted(&|r| (-alpha * r).exp() / r),
        Observable::Kinetic => sol.eigenvalues[state] - weighted(&|r| potential_unchecked(r, &sol.params)),
        Observable::P2 => {
            let t = sol.eigenvalues[state] - weighted(&|r| potential_unchecked(r, &sol.params));
            2.0 * sol.constants.mass_energy(sol.mu) * t
        }
    })
}

/// Expectation values of the exact 1/r² and 1/r against their
/// Greene–Aldrich surrogates (the 1/r surrogate in both the printed and
/// the companion e^{−2αr} form) for one solved state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproximationGap {
    pub inv_r2_exact: f64,
    pub inv_r2_surrogate: f64,
    pub inv_r_exact: f64,
    pub inv_r_printed: f64,
    pub inv_r_companion: f64,
}

pub fn greene_aldrich_gap(sol: &RadialGridSolution, state: usize) -> Result<ApproximationGap> {
    let u = sol
        .eigenvectors
        .get(state)
        .ok_or_else(|| Error::domain(format!("state {state} out of range ({} solved)", sol.len())))?;
    let h = sol.step();
    let alpha = sol.params.alpha;
    let mut acc = [Vec::new(), Vec::new(), Vec::new(), Vec::new(), Vec::new()];
    for (&r, &v) in sol.grid.iter().zip(u) {
        let w = v * v;
        let s = (-2.0 * alpha * r).exp();
        acc[0].push(w / (r * r));
        acc[1].push(w * greene_aldrich_inv_r2(r, alpha)?);
        acc[2].push(w / r);
        acc[3].push(w * greene_aldrich_inv_r(r, alpha)?);
        acc[4].push(w * 2.0 * alpha * s / (-(-2.0 * alpha * r).exp_m1()));
    }
    Ok(ApproximationGap {
        inv_r2_exact: trapezoid(&acc[0], h),
        inv_r2_surrogate: trapezoid(&acc[1], h),
        inv_r_exact: trapezoid(&acc[2], h),
        inv_r_printed: trapezoid(&acc[3], h),
        inv_r_companion: trapezoid(&acc[4], h),
    })
}

/// −∂E_k/∂A from central differences of matrix eigenvalues.
pub fn matrix_energy_derivative_a(
    p: &PotentialParams,
    l: u32,
    mu: f64,
    consts: &PhysicalConstants,
    cfg: &OracleConfig,
    state: usize,
    step: f64,
) -> Result<f64> {
    let solve = |a: f64| -> Result<f64> {
        let q = PotentialParams { a, ..*p };
        let sol = solve_matrix(
            &q,
            l,
            mu,
            consts,
            &OracleConfig {
                bound_only: false,
                ..*cfg
            },
            state + 1,
        )?;
        sol.eigenvalues
            .get(state)
            .copied()
            .ok_or_else(|| Error::domain(format!("state {state} not found")))
    };
    Ok((solve(p.a + step)? - solve(p.a - step)?) / (2.0 * step))
}
