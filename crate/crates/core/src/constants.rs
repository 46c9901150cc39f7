//! Physical constants, unit conventions and the molecule registry.
//!
//! Two unit conventions are supported. [`UnitMode::Paper`] sets ħ = 1 and
//! feeds the tabulated numbers straight into the formulas, which is the only
//! reading under which the published expectation tables are self-consistent.
//! [`UnitMode::Physical`] uses eV, Å and amu with CODATA 2018 conversions.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ħc in eV·Å (CODATA 2018).
pub const HBAR_C_EV_ANGSTROM: f64 = 1973.269804;
/// Atomic mass unit as a rest energy in eV (CODATA 2018).
pub const AMU_EV: f64 = 931.49410242e6;
/// Tag written into every output envelope.
pub const CONSTANTS_VERSION: &str = "CODATA-2018";
/// Environment variable naming an additional registry file.
pub const REGISTRY_ENV: &str = "HYIQP_REGISTRY";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    Physical,
    Paper,
}

impl fmt::Display for UnitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitMode::Physical => "physical",
            UnitMode::Paper => "paper",
        })
    }
}

impl FromStr for UnitMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "physical" => Ok(UnitMode::Physical),
            "paper" => Ok(UnitMode::Paper),
            other => Err(Error::domain(format!("unknown unit mode `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalConstants {
    /// ħc in energy·length.
    pub hbar_c: f64,
    /// Rest energy of one mass unit.
    pub amu_to_energy: f64,
    pub mode: UnitMode,
}

impl PhysicalConstants {
    pub fn physical() -> Self {
        Self {
            hbar_c: HBAR_C_EV_ANGSTROM,
            amu_to_energy: AMU_EV,
            mode: UnitMode::Physical,
        }
    }

    pub fn paper() -> Self {
        Self {
            mode: UnitMode::Paper,
            ..Self::physical()
        }
    }

    pub fn for_mode(mode: UnitMode) -> Self {
        match mode {
            UnitMode::Physical => Self::physical(),
            UnitMode::Paper => Self::paper(),
        }
    }

    /// ħ² expressed so that `hbar_sq() / mu` is an energy·length² when `mu`
    /// is given in the registry's mass unit.
    pub fn hbar_sq(&self) -> f64 {
        match self.mode {
            UnitMode::Physical => self.hbar_c * self.hbar_c / self.amu_to_energy,
            UnitMode::Paper => 1.0,
        }
    }

    /// Converts a registry mass into the energy unit used for ⟨p²⟩ (so that
    /// p² = 2·m·T comes out in (energy/c)²). Unity in paper mode.
    pub fn mass_energy(&self, mu: f64) -> f64 {
        match self.mode {
            UnitMode::Physical => mu * self.amu_to_energy,
            UnitMode::Paper => mu,
        }
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::physical()
    }
}

/// ħ²/2μ, the prefactor of the kinetic and centrifugal terms.
pub fn hbar2_over_2mu(mu: f64, constants: &PhysicalConstants) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::domain(format!("reduced mass must be positive, got {mu}")));
    }
    Ok(constants.hbar_sq() / (2.0 * mu))
}

/// One row of the spectroscopic-constant registry.
///
/// The numbers are stored exactly as tabulated. The tabulated unit headers do
/// not match the roles the constants play in the potential, so every field is
/// treated as a plain number by whichever unit mode is active.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Molecule {
    pub name: String,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub alpha: f64,
    pub mu: f64,
}

impl Molecule {
    fn new(name: &str, a: f64, b: f64, c: f64, alpha: f64, mu: f64) -> Self {
        Self {
            name: name.to_string(),
            a,
            b,
            c,
            alpha,
            mu,
        }
    }

    fn validate(&self) -> Result<()> {
        let finite = [self.a, self.b, self.c, self.alpha, self.mu]
            .iter()
            .all(|v| v.is_finite());
        if self.name.trim().is_empty() {
            return Err(Error::Registry("empty molecule name".into()));
        }
        if !finite || !(self.alpha > 0.0) || !(self.mu > 0.0) {
            return Err(Error::Registry(format!(
                "molecule `{}` needs finite constants with alpha > 0 and mu > 0",
                self.name
            )));
        }
        Ok(())
    }

    /// The row formatted at the precision of the original table.
    pub fn table_row(&self) -> String {
        format!(
            "{},{:.4},{:.4},{},{:.5},{:.7}",
            self.name, self.a, self.b, self.c, self.alpha, self.mu
        )
    }
}

pub fn builtin_molecules() -> Vec<Molecule> {
    vec![
        Molecule::new("H2", 0.7416, 1.9426, 1.440558, 0.20990, 0.5039100),
        Molecule::new("LiH", 1.5956, 1.1280, 1.7998368, 1.55000, 0.8801221),
        Molecule::new("HCl", 1.2746, 1.8677, 2.38057, 0.20039, 0.9801045),
        Molecule::new("CO", 1.1283, 2.2994, 2.59441, 0.39000, 6.8606719),
    ]
}

const ALIASES: &[(&str, &str)] = &[
    ("hydrogen", "H2"),
    ("lithium hydride", "LiH"),
    ("lithium-hydride", "LiH"),
    ("hydrogen chloride", "HCl"),
    ("hydrogen-chloride", "HCl"),
    ("carbon monoxide", "CO"),
    ("carbon-monoxide", "CO"),
];

/// Immutable set of molecules: the built-ins plus any user-supplied rows.
#[derive(Clone, Debug, PartialEq)]
pub struct Registry {
    molecules: Vec<Molecule>,
}

impl Registry {
    pub fn builtin() -> Self {
        Self {
            molecules: builtin_molecules(),
        }
    }

    /// Built-ins plus the file named by `HYIQP_REGISTRY`, when set.
    pub fn from_env() -> Result<Self> {
        let mut reg = Self::builtin();
        if let Ok(path) = std::env::var(REGISTRY_ENV) {
            if !path.is_empty() {
                reg.extend(Self::parse_file(path)?)?;
            }
        }
        Ok(reg)
    }

    /// Parses registry text with header `name,A,B,C,alpha,mu`.
    pub fn parse<R: Read>(reader: R) -> Result<Vec<Molecule>> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let expected = ["name", "A", "B", "C", "alpha", "mu"];
        if headers.iter().collect::<Vec<_>>() != expected {
            return Err(Error::Registry(format!(
                "registry header must be `{}`",
                expected.join(",")
            )));
        }
        let mut out = Vec::new();
        for row in rdr.deserialize() {
            let m: Molecule = row?;
            m.validate()?;
            out.push(m);
        }
        Ok(out)
    }

    pub fn parse_file(path: impl AsRef<Path>) -> Result<Vec<Molecule>> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::Registry(format!("cannot open {}: {e}", path.as_ref().display())))?;
        Self::parse(file)
    }

    /// Builds a registry from rows alone (no built-ins).
    pub fn from_molecules(molecules: Vec<Molecule>) -> Result<Self> {
        let mut reg = Self { molecules: Vec::new() };
        reg.extend(molecules)?;
        Ok(reg)
    }

    fn extend(&mut self, extra: Vec<Molecule>) -> Result<()> {
        for m in extra {
            m.validate()?;
            if self.find(&m.name).is_some() {
                return Err(Error::Registry(format!("duplicate molecule `{}`", m.name)));
            }
            self.molecules.push(m);
        }
        Ok(())
    }

    fn find(&self, name: &str) -> Option<&Molecule> {
        let key = name.trim();
        let canonical = ALIASES
            .iter()
            .find(|(alias, _)| alias.eq_ignore_ascii_case(key))
            .map(|(_, c)| *c)
            .unwrap_or(key);
        self.molecules.iter().find(|m| m.name.eq_ignore_ascii_case(canonical))
    }

    pub fn get(&self, name: &str) -> Result<Molecule> {
        self.find(name).cloned().ok_or_else(|| Error::UnknownMolecule {
            name: name.to_string(),
            available: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&str> {
        self.molecules.iter().map(|m| m.name.as_str()).collect()
    }

    pub fn molecules(&self) -> &[Molecule] {
        &self.molecules
    }

    /// Serializes with shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("name,A,B,C,alpha,mu\n");
        for m in &self.molecules {
            out.push_str(&format!("{},{},{},{},{},{}\n", m.name, m.a, m.b, m.c, m.alpha, m.mu));
        }
        out
    }
}

/// Looks a molecule up in the built-ins plus `HYIQP_REGISTRY`.
pub fn get_molecule(name: &str) -> Result<Molecule> {
    Registry::from_env()?.get(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_rows_match_table_text() {
        let rows: Vec<String> = builtin_molecules().iter().map(Molecule::table_row).collect();
        assert_eq!(
            rows,
            vec![
                "H2,0.7416,1.9426,1.440558,0.20990,0.5039100",
                "LiH,1.5956,1.1280,1.7998368,1.55000,0.8801221",
                "HCl,1.2746,1.8677,2.38057,0.20039,0.9801045",
                "CO,1.1283,2.2994,2.59441,0.39000,6.8606719",
            ]
        );
    }

    #[test]
    fn lookup_examples() {
        let reg = Registry::builtin();
        let h2 = reg.get("H2").unwrap();
        assert_eq!(
            (h2.a, h2.b, h2.c, h2.alpha, h2.mu),
            (0.7416, 1.9426, 1.440558, 0.20990, 0.5039100)
        );
        let co = reg.get("co").unwrap();
        assert_eq!(
            (co.a, co.b, co.c, co.alpha, co.mu),
            (1.1283, 2.2994, 2.59441, 0.39000, 6.8606719)
        );
        assert_eq!(reg.get("Hydrogen Chloride").unwrap().name, "HCl");
    }

    #[test]
    fn unknown_molecule_lists_keys() {
        let err = Registry::builtin().get("Xe2").unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, Error::UnknownMolecule { .. }));
        for key in ["H2", "LiH", "HCl", "CO"] {
            assert!(msg.contains(key), "{msg}");
        }
    }

    #[test]
    fn prefactor_examples() {
        // hbar_c^2 / (2 mu amu) evaluated by hand: 1973.269804^2 = 3893793.7...
        let phys = PhysicalConstants::physical();
        let h2 = hbar2_over_2mu(0.5039100, &phys).unwrap();
        assert!((h2 - 4.1478e-3).abs() < 5e-7, "{h2}");
        let co = hbar2_over_2mu(6.8606719, &phys).unwrap();
        assert!((co - 3.0466e-4).abs() < 5e-8, "{co}");
        assert_eq!(hbar2_over_2mu(0.5, &PhysicalConstants::paper()).unwrap(), 1.0);
    }

    #[test]
    fn prefactor_rejects_bad_mass() {
        for mu in [0.0, -1.0, f64::NAN] {
            assert!(hbar2_over_2mu(mu, &PhysicalConstants::paper()).is_err());
        }
    }

    #[test]
    fn registry_file_parsing() {
        let text = "name,A,B,C,alpha,mu\n# comment\nXe2, 1.0, 2.0, 3.0, 0.5, 65.6\n";
        let rows = Registry::parse(text.as_bytes()).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].mu, 65.6);

        assert!(Registry::parse("name,A,B\nx,1,2\n".as_bytes()).is_err());
        assert!(Registry::parse("name,A,B,C,alpha,mu\nx,1,2,3,0,1\n".as_bytes()).is_err());
        let dup = Registry::from_molecules(builtin_molecules().into_iter().chain(builtin_molecules()).collect());
        assert!(dup.is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("Paper".parse::<UnitMode>().unwrap(), UnitMode::Paper);
        assert_eq!("physical".parse::<UnitMode>().unwrap(), UnitMode::Physical);
        assert!("si".parse::<UnitMode>().is_err());
    }
}
