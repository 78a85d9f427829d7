//! Chirality-resolved table of prime knots up to ten crossings, and the
//! pipeline that names the knot type of a lattice polygon.
//!
//! The table is two tab-separated files: one record per knot type with its
//! stored invariants, and a reference PD code per type. Every stored value
//! is recomputed from the PD code when the table is loaded.

mod corpus;
mod identify;

pub use corpus::{banding_corpus, corpus_text, name_torus_link, parse_corpus, BandingExample};
pub use identify::{identify, identify_with, lookup, Confidence, IdentificationResult, IdentifyOptions};

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::diagram::PdCode;
use crate::invariants::{homfly, invariant_set, LaurentPoly2};
use crate::lattice::{read_polygons, LatticePolygon, PolygonRecord};

#[derive(Debug, Error)]
pub enum TableError {
    #[error("cannot read table: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{name}: stored {field} = {stored}, recomputed {computed}")]
    Inconsistent { name: String, field: &'static str, stored: String, computed: String },
    #[error("{name}: {msg}")]
    Invalid { name: String, msg: String },
}

/// One knot type with its invariants and reference diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnotRecord {
    pub name: String,
    pub crossing_number: u32,
    pub chiral: bool,
    pub homfly: LaurentPoly2,
    pub det: u64,
    pub sigma: i32,
    pub arf: u8,
    pub e2: u32,
    pub delta3: u32,
    pub rank5: u32,
    pub qa: Option<bool>,
    pub u: Option<u32>,
    pub u2: Option<u32>,
    /// Upper bound on `u2` where only a bound is known.
    pub u2_max: Option<u32>,
    /// `n` when the knot is the torus knot `T(2, n)`.
    pub torus_param: Option<i32>,
    pub pd: PdCode,
}

/// `5_1` <-> `5_1*`.
pub fn mirror_name(name: &str) -> String {
    match name.strip_suffix('*') {
        Some(base) => base.to_string(),
        None => format!("{name}*"),
    }
}

pub const TABLE_COLUMNS: [&str; 15] = [
    "name", "crossings", "chiral", "det", "sigma", "arf", "e2", "delta3", "rank5", "qa", "u", "u2", "u2_max", "torus",
    "homfly",
];

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or("-".to_string(), |x| x.to_string())
}

impl KnotRecord {
    /// The record's row in the table file.
    pub fn to_row(&self) -> String {
        let yn = |b: bool| if b { "Y" } else { "N" };
        [
            self.name.clone(),
            self.crossing_number.to_string(),
            yn(self.chiral).to_string(),
            self.det.to_string(),
            self.sigma.to_string(),
            self.arf.to_string(),
            self.e2.to_string(),
            self.delta3.to_string(),
            self.rank5.to_string(),
            self.qa.map_or("-".to_string(), |b| yn(b).to_string()),
            opt(&self.u),
            opt(&self.u2),
            opt(&self.u2_max),
            opt(&self.torus_param),
            self.homfly.to_string(),
        ]
        .join("\t")
    }

    /// The record of the mirror image (identical for amphichiral knots).
    pub fn mirrored(&self) -> KnotRecord {
        if !self.chiral {
            return self.clone();
        }
        KnotRecord {
            name: mirror_name(&self.name),
            homfly: self.homfly.mirror(),
            sigma: -self.sigma,
            torus_param: self.torus_param.map(|n| -n),
            pd: self.pd.mirror(),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug)]
pub struct KnotTable {
    records: Vec<KnotRecord>,
    by_name: FxHashMap<String, usize>,
    by_homfly: FxHashMap<LaurentPoly2, Vec<usize>>,
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, TableError> {
    s.parse().map_err(|_| TableError::Parse { line, msg: format!("bad {what}: {s:?}") })
}

fn parse_opt<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<Option<T>, TableError> {
    if s == "-" {
        Ok(None)
    } else {
        parse_field(s, line, what).map(Some)
    }
}

fn parse_flag(s: &str, line: usize, what: &str) -> Result<bool, TableError> {
    match s {
        "Y" => Ok(true),
        "N" => Ok(false),
        _ => Err(TableError::Parse { line, msg: format!("bad {what}: {s:?}") }),
    }
}

fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i + 1, l)).filter(|(_, l)| !l.starts_with('#') && !l.trim().is_empty())
}

fn check<T: PartialEq + std::fmt::Display>(
    name: &str,
    field: &'static str,
    stored: T,
    computed: T,
) -> Result<(), TableError> {
    if stored == computed {
        Ok(())
    } else {
        Err(TableError::Inconsistent {
            name: name.to_string(),
            field,
            stored: stored.to_string(),
            computed: computed.to_string(),
        })
    }
}

impl KnotTable {
    /// Parses the table and PD files without recomputing invariants.
    pub fn parse_unverified(table: &str, pds: &str) -> Result<KnotTable, TableError> {
        let mut pd_of: FxHashMap<String, PdCode> = FxHashMap::default();
        for (line, l) in data_lines(pds) {
            let (name, code) =
                l.split_once('\t').ok_or_else(|| TableError::Parse { line, msg: "expected name<TAB>pd".into() })?;
            let pd: PdCode = code.parse().map_err(|e| TableError::Parse { line, msg: format!("{e}") })?;
            pd_of.insert(name.to_string(), pd);
        }
        let mut lines = data_lines(table);
        let (hline, header) = lines.next().ok_or(TableError::Parse { line: 1, msg: "empty table".into() })?;
        if header.split('\t').collect::<Vec<_>>() != TABLE_COLUMNS {
            return Err(TableError::Parse { line: hline, msg: "unexpected header".into() });
        }
        let mut records = Vec::new();
        for (line, l) in lines {
            let f: Vec<&str> = l.split('\t').collect();
            if f.len() != TABLE_COLUMNS.len() {
                return Err(TableError::Parse { line, msg: format!("expected {} fields", TABLE_COLUMNS.len()) });
            }
            let name = f[0].to_string();
            let pd = pd_of
                .remove(&name)
                .ok_or_else(|| TableError::Parse { line, msg: format!("no reference PD for {name}") })?;
            records.push(KnotRecord {
                crossing_number: parse_field(f[1], line, "crossings")?,
                chiral: parse_flag(f[2], line, "chiral")?,
                det: parse_field(f[3], line, "det")?,
                sigma: parse_field(f[4], line, "sigma")?,
                arf: parse_field(f[5], line, "arf")?,
                e2: parse_field(f[6], line, "e2")?,
                delta3: parse_field(f[7], line, "delta3")?,
                rank5: parse_field(f[8], line, "rank5")?,
                qa: if f[9] == "-" { None } else { Some(parse_flag(f[9], line, "qa")?) },
                u: parse_opt(f[10], line, "u")?,
                u2: parse_opt(f[11], line, "u2")?,
                u2_max: parse_opt(f[12], line, "u2_max")?,
                torus_param: parse_opt(f[13], line, "torus")?,
                homfly: parse_field(f[14], line, "homfly")?,
                name,
                pd,
            });
        }
        Ok(KnotTable::from_records(records))
    }

    /// Parses both files and recomputes every stored invariant.
    pub fn parse(table: &str, pds: &str) -> Result<KnotTable, TableError> {
        let t = KnotTable::parse_unverified(table, pds)?;
        t.validate()?;
        Ok(t)
    }

    pub fn from_records(records: Vec<KnotRecord>) -> KnotTable {
        let mut by_name = FxHashMap::default();
        let mut by_homfly: FxHashMap<LaurentPoly2, Vec<usize>> = FxHashMap::default();
        for (i, r) in records.iter().enumerate() {
            by_name.insert(r.name.clone(), i);
            by_homfly.entry(r.homfly.clone()).or_default().push(i);
        }
        KnotTable { records, by_name, by_homfly }
    }

    /// The table shipped with the crate, verified on first use.
    pub fn shipped() -> &'static KnotTable {
        static TABLE: OnceLock<KnotTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            KnotTable::parse(include_str!("../../data/knot_table.tsv"), include_str!("../../data/knot_pd.tsv"))
                .expect("shipped knot table is consistent")
        })
    }

    /// Recomputes every record from its reference PD code and checks the
    /// structural invariants of the table.
    pub fn validate(&self) -> Result<(), TableError> {
        for r in &self.records {
            self.validate_record(r)?;
        }
        Ok(())
    }

    fn validate_record(&self, r: &KnotRecord) -> Result<(), TableError> {
        let name = r.name.as_str();
        let invalid = |msg: String| TableError::Invalid { name: name.to_string(), msg };
        if r.pd.n_components() != 1 {
            return Err(invalid("reference diagram is not a knot".into()));
        }
        let h = homfly(&r.pd).map_err(|e| invalid(e.to_string()))?;
        check(name, "homfly", &r.homfly, &h)?;
        let s = invariant_set(&r.pd).map_err(|e| invalid(e.to_string()))?;
        check(name, "det", r.det, s.det)?;
        check(name, "sigma", r.sigma, s.sigma)?;
        check(name, "arf", r.arf, s.arf.unwrap_or(u8::MAX))?;
        check(name, "e2", r.e2, s.e2)?;
        check(name, "delta3", r.delta3, s.delta3)?;
        check(name, "rank5", r.rank5, s.rank5)?;
        if r.det % 2 == 0 || r.sigma % 2 != 0 {
            return Err(invalid("knot with even determinant or odd signature".into()));
        }
        if r.delta3 > r.e2 || r.rank5 > r.e2 {
            return Err(invalid("rank exceeds e2".into()));
        }
        if r.pd.crossing_count() as u32 != r.crossing_number {
            return Err(invalid("reference diagram is not minimal".into()));
        }
        if let (Some(u), Some(u2)) = (r.u, r.u2) {
            if u2 > u + 1 {
                return Err(invalid(format!("u2 = {u2} exceeds u + 1 = {}", u + 1)));
            }
        }
        if let (Some(bound), Some(u2)) = (r.u2_max, r.u2) {
            if u2 > bound {
                return Err(invalid("u2 above its bound".into()));
            }
        }
        if let Some(n) = r.torus_param {
            let expected = if n > 0 { 1 - n } else { -1 - n };
            check(name, "torus signature", r.sigma, expected)?;
            check(name, "torus det", r.det, n.unsigned_abs() as u64)?;
        }
        if r.chiral {
            let m = self
                .get(&mirror_name(name))
                .ok_or_else(|| invalid("mirror record is missing".into()))?;
            let expected = r.mirrored();
            if m.homfly != expected.homfly || m.sigma != expected.sigma || m.det != r.det || m.arf != r.arf {
                return Err(invalid("mirror record has inconsistent invariants".into()));
            }
            if m.qa != r.qa || m.u != r.u || m.u2 != r.u2 || m.torus_param != expected.torus_param {
                return Err(invalid("mirror record has inconsistent table data".into()));
            }
        } else if r.sigma != 0 || r.homfly != r.homfly.mirror() || name.ends_with('*') {
            return Err(invalid("amphichiral record with chiral invariants".into()));
        }
        Ok(())
    }

    pub fn records(&self) -> &[KnotRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&KnotRecord> {
        self.by_name.get(name).map(|&i| &self.records[i])
    }

    /// Records with exactly this HOMFLY polynomial.
    pub fn with_homfly(&self, h: &LaurentPoly2) -> Vec<&KnotRecord> {
        self.by_homfly.get(h).map_or_else(Vec::new, |v| v.iter().map(|&i| &self.records[i]).collect())
    }

    /// The record of the torus knot `T(2, n)`, if tabulated (`n = +-1` is
    /// the unknot).
    pub fn torus_knot(&self, n: i32) -> Option<&KnotRecord> {
        if n.abs() == 1 {
            return self.get("0_1");
        }
        self.records.iter().find(|r| r.torus_param == Some(n))
    }

    /// Serializes the table file.
    pub fn table_text(&self, preamble: &str) -> String {
        let mut out = String::new();
        for l in preamble.lines() {
            let _ = writeln!(out, "# {l}");
        }
        let _ = writeln!(out, "{}", TABLE_COLUMNS.join("\t"));
        for r in &self.records {
            let _ = writeln!(out, "{}", r.to_row());
        }
        out
    }

    /// Serializes the reference PD file.
    pub fn pd_text(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = writeln!(out, "{}\t{}", r.name, r.pd);
        }
        out
    }
}

/// Shipped compact seed conformation of a knot type up to 8 crossings.
pub fn seed_conformation(name: &str) -> Option<LatticePolygon> {
    static SEEDS: OnceLock<Vec<PolygonRecord>> = OnceLock::new();
    SEEDS
        .get_or_init(|| read_polygons(include_str!("../../data/seeds.txt")).expect("shipped seeds parse"))
        .iter()
        .find(|r| r.knot == name)
        .map(|r| r.polygon.clone())
}

/// Loads and verifies a table from a table file and its PD file.
pub fn load_table(table: &Path, pds: &Path) -> Result<KnotTable, TableError> {
    KnotTable::parse(&std::fs::read_to_string(table)?, &std::fs::read_to_string(pds)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_names() {
        assert_eq!(mirror_name("5_1"), "5_1*");
        assert_eq!(mirror_name("5_1*"), "5_1");
    }

    #[test]
    fn shipped_table_basics() {
        let t = KnotTable::shipped();
        let u = t.get("0_1").unwrap();
        assert_eq!((u.det, u.sigma, u.arf), (1, 0, 0));
        let k = t.get("9_49").unwrap();
        assert_eq!((k.u, k.u2), (Some(3), Some(3)));
        for r in t.records().iter().filter(|r| r.crossing_number <= 8 && r.crossing_number > 0) {
            assert_eq!(r.qa, Some(!r.name.starts_with("8_19")), "{}", r.name);
        }
        assert_eq!(t.torus_knot(7).unwrap().name, "7_1");
        assert_eq!(t.torus_knot(-5).unwrap().name, "5_1*");
    }

    #[test]
    fn tampered_table_is_rejected() {
        let t = KnotTable::shipped();
        let text = t.table_text("").replace("\n4_1\t4\tN\t5\t", "\n4_1\t4\tN\t7\t");
        match KnotTable::parse(&text, &t.pd_text()) {
            Err(TableError::Inconsistent { name, field, .. }) => assert_eq!((name.as_str(), field), ("4_1", "det")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip() {
        let t = KnotTable::shipped();
        let again = KnotTable::parse_unverified(&t.table_text("x"), &t.pd_text()).unwrap();
        assert_eq!(again.records(), t.records());
    }
}
