//! Explicit bandings realized on lattice conformations: a polygon, a
//! designated reconnection site and the product the band produces.
//!
//! ```text
//! # banding=t3-to-t7 knot=3_1 site=4,17 kind=non-coherent product=7_1
//! 0 0 0
//! ...
//! ```

use std::fmt::Write as _;
use std::sync::OnceLock;

use super::{identify_with, IdentifyOptions, KnotTable, TableError};
use crate::diagram::{project_components, simplify, PdCode, ProjectionSeed};
use crate::invariants::{homfly, HOMFLY_CAP};
use crate::lattice::{read_polygons, LatticePolygon};
use crate::reconnection::{find_sites, reconnect, BandKind, SitePair};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandingExample {
    pub label: String,
    pub substrate: String,
    pub polygon: LatticePolygon,
    pub site: SitePair,
    pub kind: BandKind,
    pub product: String,
}

fn kind_name(k: BandKind) -> &'static str {
    match k {
        BandKind::NonCoherent => "non-coherent",
        BandKind::Coherent => "coherent",
    }
}

/// Name of a two-component product if it is a torus link `T(2, n)` with
/// `2 <= |n| <= 10`, in the orientation the band induces or the other one.
pub fn name_torus_link(comps: &[LatticePolygon]) -> Option<String> {
    if comps.len() != 2 {
        return None;
    }
    let d = simplify(&project_components(comps, ProjectionSeed(1)).ok()?);
    if d.crossing_count() > HOMFLY_CAP {
        return None;
    }
    let h = homfly(&d).ok()?;
    // as unoriented links T(2,2) and T(2,-2) coincide
    [2, 4, -4, 6, -6, 8, -8, 10, -10].into_iter().find_map(|n| {
        let t = PdCode::torus_2(n);
        let hit = [t.clone(), t.reverse_component(1)].iter().any(|o| homfly(o).ok().as_ref() == Some(&h));
        hit.then(|| format!("T(2,{n})"))
    })
}

impl BandingExample {
    /// Performs the band and names the product: a table knot for
    /// non-coherent bands, a `T(2,n)` link for coherent ones.
    pub fn realize(&self, table: &KnotTable) -> Option<String> {
        let out = reconnect(&self.polygon, &self.site).ok()?;
        match self.kind {
            BandKind::NonCoherent => {
                identify_with(&out.products[0], table, IdentifyOptions::default()).name
            }
            BandKind::Coherent => name_torus_link(&out.products),
        }
    }
}

pub fn parse_corpus(text: &str) -> Result<Vec<BandingExample>, TableError> {
    let mut out = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    let lines: Vec<&str> = text.lines().chain(std::iter::once("")).collect();
    for (ln, line) in lines.into_iter().enumerate() {
        if !line.trim().is_empty() {
            block.push((ln + 1, line));
            continue;
        }
        if block.is_empty() {
            continue;
        }
        let Some(&(hl, header)) = block.iter().find(|(_, l)| l.trim_start().starts_with("# banding=")) else {
            block.clear();
            continue;
        };
        let err = |msg: String| TableError::Parse { line: hl, msg };
        let field = |key: &str| -> Result<&str, TableError> {
            header
                .trim_start_matches('#')
                .split_whitespace()
                .find_map(|f| f.strip_prefix(key).and_then(|v| v.strip_prefix('=')))
                .ok_or_else(|| err(format!("missing {key}")))
        };
        let body: String = block.iter().filter(|(_, l)| !l.trim_start().starts_with('#')).map(|(_, l)| format!("{l}\n")).collect();
        let polygon = read_polygons(&body)
            .map_err(|e| err(e.to_string()))?
            .pop()
            .ok_or_else(|| err("no conformation".into()))?
            .polygon;
        let site_field = field("site")?;
        let (a, b) = site_field
            .split_once(',')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| err(format!("bad site {site_field}")))?;
        let site = find_sites(&polygon)
            .into_iter()
            .find(|s| s.edge_a == a && s.edge_b == b)
            .ok_or_else(|| err(format!("edges {a},{b} are not a usable site")))?;
        let kind = match field("kind")? {
            "non-coherent" => BandKind::NonCoherent,
            "coherent" => BandKind::Coherent,
            k => return Err(err(format!("unknown kind {k}"))),
        };
        let expected = if site.alignment == crate::reconnection::Alignment::Parallel {
            BandKind::NonCoherent
        } else {
            BandKind::Coherent
        };
        if kind != expected {
            return Err(err(format!("site {a},{b} is {}", site.alignment.as_str())));
        }
        out.push(BandingExample {
            label: field("banding")?.to_string(),
            substrate: field("knot")?.to_string(),
            polygon,
            site,
            kind,
            product: field("product")?.to_string(),
        });
        block.clear();
    }
    Ok(out)
}

pub fn corpus_text(examples: &[BandingExample]) -> String {
    let mut s = String::new();
    for (k, e) in examples.iter().enumerate() {
        if k > 0 {
            s.push('\n');
        }
        let _ = writeln!(
            s,
            "# banding={} knot={} length={} site={},{} kind={} product={}",
            e.label,
            e.substrate,
            e.polygon.length(),
            e.site.edge_a,
            e.site.edge_b,
            kind_name(e.kind),
            e.product
        );
        for v in e.polygon.vertices() {
            let _ = writeln!(s, "{} {} {}", v.x, v.y, v.z);
        }
    }
    s
}

/// The corpus shipped with the crate.
pub fn banding_corpus() -> &'static [BandingExample] {
    static CORPUS: OnceLock<Vec<BandingExample>> = OnceLock::new();
    CORPUS.get_or_init(|| parse_corpus(include_str!("../../data/banding_corpus.txt")).expect("shipped corpus parses"))
}
