//! Published expectation-value tables, embedded verbatim and guarded by
//! SHA-256 checksums.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::hft::ObservableKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TableInfo {
    pub id: &'static str,
    /// None for the unattributed block printed under the Table 2 heading.
    pub molecule: Option<&'static str>,
    pub observable: ObservableKind,
    pub caption: &'static str,
    source: &'static str,
    sha256: &'static str,
}

macro_rules! table {
    ($id:literal, $mol:expr, $obs:expr, $cap:literal, $file:literal, $sum:literal) => {
        TableInfo {
            id: $id,
            molecule: $mol,
            observable: $obs,
            caption: $cap,
            source: include_str!(concat!("../data/tables/", $file)),
            sha256: $sum,
        }
    };
}

use ObservableKind::{Kinetic, P2, RM1, RM2};

pub static TABLES: [TableInfo; 15] = [
    table!(
        "2",
        Some("H2"),
        RM2,
        "<r^-2> for hydrogen molecule",
        "table02.csv",
        "cc11f7c281a55ae3db982282275e03105eb425bae424428885cc4c6e06a112b4"
    ),
    table!(
        "2b",
        None,
        RM2,
        "<r^-2>, unlabeled block under the Table 2 heading",
        "table02b.csv",
        "1c35e34862d87c81bcea4a598089aa2b41dc926e0d1d6ee2d0f75a4142081bf1"
    ),
    table!(
        "5",
        Some("CO"),
        RM2,
        "<r^-2> for carbon monoxide",
        "table05.csv",
        "6093190f81beb63f05b0c50fcbbdb8fe48e685ff9a1c98fa622d463359050433"
    ),
    table!(
        "6",
        Some("H2"),
        RM1,
        "<r^-1> for hydrogen molecule",
        "table06.csv",
        "2114865804cb25378241ccad166c665285f9fa11b77ec83c39efda713e75ed8f"
    ),
    table!(
        "7",
        Some("LiH"),
        RM1,
        "<r^-1> for lithium hydride",
        "table07.csv",
        "54404f64d54d212a79c49d4eea9058925e8d3a31e2084b0a05ae934b1c94c919"
    ),
    table!(
        "8",
        Some("HCl"),
        RM1,
        "<r^-1> for hydrogen chloride",
        "table08.csv",
        "9b1c00919834692b3afb71e878e9c9f728cae9f2d78724d50327db449a500325"
    ),
    table!(
        "9",
        Some("CO"),
        RM1,
        "<r^-1> for carbon monoxide",
        "table09.csv",
        "6b7a483ec483a3ef38d86e27580d44c76942e7c04683964034b97f439eab2a37"
    ),
    table!(
        "10",
        Some("H2"),
        Kinetic,
        "<T> for hydrogen molecule",
        "table10.csv",
        "024ae5049fdcbd25efa514c1b8cd2aa6a289b975c29c6e066340e27fdec29ea3"
    ),
    table!(
        "11",
        Some("LiH"),
        Kinetic,
        "<T> for lithium hydride",
        "table11.csv",
        "574d6629b5be0742ed57f98bfaa3632af650136565ef01911395c94b69aae40a"
    ),
    table!(
        "12",
        Some("HCl"),
        Kinetic,
        "<T> for hydrogen chloride",
        "table12.csv",
        "11e318688b55eee59a57e699c3901a27672b4d3e8cab2244e4e1387ebc45e717"
    ),
    table!(
        "13",
        Some("CO"),
        Kinetic,
        "<T> for carbon monoxide",
        "table13.csv",
        "a9af32a1bb8d84f5a05a779b0bfffc9eed6cf6799b80af0869f1ad5136072a5e"
    ),
    table!(
        "14",
        Some("H2"),
        P2,
        "<p^2> for hydrogen molecule",
        "table14.csv",
        "a832696ca62e816d5c5e2620624fc801df66af46fefc76fe6aee247b1b811bca"
    ),
    table!(
        "15",
        Some("LiH"),
        P2,
        "<p^2> for lithium hydride",
        "table15.csv",
        "124f44493ac0ed90466de31176d1b2d17236d3d4c351f02ba309358ba0c06845"
    ),
    table!(
        "16",
        Some("HCl"),
        P2,
        "<p^2> for hydrogen chloride",
        "table16.csv",
        "dea41ddfd23b384a1d8d182d8410bbdcc594d8c4f3ffd73bdf2c9b178e3b63d1"
    ),
    table!(
        "17",
        Some("CO"),
        P2,
        "<p^2> for carbon monoxide",
        "table17.csv",
        "50e8ae9902485c4878f84779666d85f9f4fc465ac19325204d1fb63b5a2f917c"
    ),
];

/// Table numbers that never appear in the source.
pub const MISSING_TABLES: [&str; 2] = ["3", "4"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureRow {
    pub n: u32,
    pub l: u32,
    pub value: f64,
    /// The value exactly as printed.
    pub text: String,
}

impl TableInfo {
    pub fn checksum_ok(&self) -> bool {
        hex::encode(Sha256::digest(self.source.as_bytes())) == self.sha256
    }

    pub fn rows(&self) -> Result<Vec<FixtureRow>> {
        if !self.checksum_ok() {
            return Err(Error::Fixture(format!("table {} failed its checksum", self.id)));
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(self.source.as_bytes());
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let field = |i: usize| rec.get(i).map(str::trim).unwrap_or("");
            let parse_u = |s: &str| {
                s.parse::<u32>()
                    .map_err(|_| Error::Fixture(format!("table {}: bad quantum number '{s}'", self.id)))
            };
            let text = field(2).to_string();
            let value = text
                .parse::<f64>()
                .map_err(|_| Error::Fixture(format!("table {}: bad value '{text}'", self.id)))?;
            rows.push(FixtureRow {
                n: parse_u(field(0))?,
                l: parse_u(field(1))?,
                value,
                text,
            });
        }
        Ok(rows)
    }

    pub fn triples(&self) -> Result<Vec<(u32, u32, f64)>> {
        Ok(self.rows()?.into_iter().map(|r| (r.n, r.l, r.value)).collect())
    }

    /// False for the unattributed block, which is never compared hard.
    pub fn is_attributed(&self) -> bool {
        self.molecule.is_some()
    }
}

pub fn table(id: &str) -> Option<&'static TableInfo> {
    let id = id.trim().trim_start_matches('0');
    let id = id.replace(['-', '_'], "").to_ascii_lowercase();
    TABLES.iter().find(|t| t.id == id)
}

/// Published table for a molecule and observable, if any.
pub fn table_for(molecule: &str, observable: ObservableKind) -> Option<&'static TableInfo> {
    TABLES
        .iter()
        .find(|t| t.observable == observable && t.molecule.is_some_and(|m| m.eq_ignore_ascii_case(molecule)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checksums_and_sizes() {
        for t in &TABLES {
            assert!(t.checksum_ok(), "table {}", t.id);
            let rows = t.rows().unwrap();
            let want = if t.id == "2" { 4 } else { 36 };
            assert_eq!(rows.len(), want, "table {}", t.id);
        }
    }

    #[test]
    fn spot_values() {
        let get = |id: &str, n: u32, l: u32| {
            table(id)
                .unwrap()
                .rows()
                .unwrap()
                .into_iter()
                .find(|r| r.n == n && r.l == l)
                .unwrap()
        };
        assert_eq!(get("2", 0, 0).value, -2.03579269252);
        assert_eq!(get("5", 0, 0).value, -5.41245277040);
        assert_eq!(get("6", 0, 0).value, 1.26036805460);
        assert_eq!(get("7", 0, 0).value, -1.60040032851);
        assert_eq!(get("10", 0, 0).value, -5.77750109574);
        assert_eq!(get("14", 0, 0).value, -5.8226811543);
    }

    #[test]
    fn leading_dot_values_parse() {
        let all: Vec<FixtureRow> = TABLES.iter().flat_map(|t| t.rows().unwrap()).collect();
        let dotted = all.iter().find(|r| r.text.starts_with('.')).unwrap();
        assert!(dotted.value > 0.0 && dotted.value < 1.0);
        assert!(all.iter().any(|r| r.text.starts_with("-.")));
    }

    #[test]
    fn lookups() {
        assert_eq!(table("02").unwrap().id, "2");
        assert_eq!(table("2b").unwrap().molecule, None);
        assert_eq!(table("table-2b"), None);
        assert!(table("3").is_none());
        assert_eq!(table_for("lih", ObservableKind::P2).unwrap().id, "15");
        assert!(table_for("LiH", ObservableKind::RM2).is_none());
    }

    #[test]
    fn duplicated_p2_tables_differ_only_in_one_sign() {
        let a = table("15").unwrap().rows().unwrap();
        let b = table("16").unwrap().rows().unwrap();
        let diff: Vec<_> = a.iter().zip(&b).filter(|(x, y)| x.text != y.text).collect();
        assert_eq!(diff.len(), 1);
        assert_eq!((diff[0].0.n, diff[0].0.l), (0, 1));
        assert_eq!(diff[0].0.value, -diff[0].1.value);
    }
}
