//! Reconnection sites on lattice polygons and band surgery at a site.
//!
//! A site is a pair of polygon edges forming opposite sides of a unit
//! square whose other two sides are free. Surgery swaps the two pairs of
//! sides. Parallel edges (same direction along the traversal) give one
//! polygon with the arc between them reversed; antiparallel edges split
//! the polygon in two.

use std::io::Write;

use rand::Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{validate_polygon, LatticeError, LatticePolygon, Point3};
use crate::error::ParseError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconnectionError {
    #[error("edges {0} and {1} do not form a reconnection site")]
    NotASite(usize, usize),
    #[error("replacement edges collide with the polygon")]
    ReplacementCollision,
    #[error("product is not a valid polygon: {0}")]
    InvalidProduct(#[from] LatticeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Alignment {
    Parallel,
    Antiparallel,
}

impl Alignment {
    pub fn as_str(self) -> &'static str {
        match self {
            Alignment::Parallel => "parallel",
            Alignment::Antiparallel => "antiparallel",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandKind {
    NonCoherent,
    Coherent,
}

/// Two edges on opposite sides of a unit square, `edge_a < edge_b`.
/// `square` lists the corners in cyclic order, starting with the tail of
/// `edge_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SitePair {
    pub edge_a: usize,
    pub edge_b: usize,
    pub square: [Point3; 4],
    pub alignment: Alignment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconnectionOutcome {
    pub products: Vec<LatticePolygon>,
    pub kind: BandKind,
}

/// Result of a site scan: the usable sites and how many square-opposite
/// pairs were dropped because a replacement edge is already present.
#[derive(Clone, Debug, Default)]
pub struct SiteScan {
    pub sites: Vec<SitePair>,
    pub excluded: usize,
}

fn index_of(p: &LatticePolygon) -> FxHashMap<Point3, usize> {
    p.vertices().iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

fn consecutive(i: usize, j: usize, n: usize) -> bool {
    (i + 1) % n == j || (j + 1) % n == i
}

/// Scans every edge pair of a polygon for reconnection sites.
pub fn scan_sites(p: &LatticePolygon) -> SiteScan {
    let n = p.length();
    let at = index_of(p);
    let mut scan = SiteScan::default();
    for i in 0..n {
        let a = p.vertex(i);
        let b = p.vertex(i + 1);
        let d = b - a;
        for e in Point3::UNITS {
            if e.dot(d) != 0 {
                continue;
            }
            let (Some(&ja), Some(&jb)) = (at.get(&(a + e)), at.get(&(b + e))) else {
                continue;
            };
            let (j, alignment) = if (ja + 1) % n == jb {
                (ja, Alignment::Parallel)
            } else if (jb + 1) % n == ja {
                (jb, Alignment::Antiparallel)
            } else {
                continue;
            };
            if j <= i {
                continue;
            }
            if consecutive(i, ja, n) || consecutive(i + 1, jb, n) {
                scan.excluded += 1;
                continue;
            }
            scan.sites.push(SitePair { edge_a: i, edge_b: j, square: [a, b, b + e, a + e], alignment });
        }
    }
    scan
}

/// All usable reconnection sites of a polygon.
pub fn find_sites(p: &LatticePolygon) -> Vec<SitePair> {
    scan_sites(p).sites
}

/// Uniformly chosen site with the given alignment, if any.
pub fn random_site<R: Rng + ?Sized>(p: &LatticePolygon, alignment: Alignment, rng: &mut R) -> Option<SitePair> {
    let sites: Vec<SitePair> = find_sites(p).into_iter().filter(|s| s.alignment == alignment).collect();
    if sites.is_empty() {
        None
    } else {
        Some(sites[rng.gen_range(0..sites.len())])
    }
}

/// Band surgery at a site.
pub fn reconnect(p: &LatticePolygon, s: &SitePair) -> Result<ReconnectionOutcome, ReconnectionError> {
    let n = p.length();
    let (i, j) = (s.edge_a, s.edge_b);
    if i >= j || j >= n {
        return Err(ReconnectionError::NotASite(i, j));
    }
    let (a, b) = (p.vertex(i), p.vertex(i + 1));
    let (c, d) = (p.vertex(j), p.vertex(j + 1));
    let ok = match s.alignment {
        Alignment::Parallel => (c - a).l1() == 1 && d - c == b - a && (c - a).dot(b - a) == 0,
        Alignment::Antiparallel => (d - a).l1() == 1 && c - d == b - a && (d - a).dot(b - a) == 0,
    };
    if !ok || s.square[0] != a || s.square[1] != b {
        return Err(ReconnectionError::NotASite(i, j));
    }
    let v = p.vertices();
    match s.alignment {
        Alignment::Parallel => {
            if consecutive(i, j, n) || consecutive(i + 1, j + 1, n) {
                return Err(ReconnectionError::ReplacementCollision);
            }
            let mut out = Vec::with_capacity(n);
            out.extend_from_slice(&v[..=i]);
            out.extend(v[i + 1..=j].iter().rev());
            out.extend_from_slice(&v[j + 1..]);
            Ok(ReconnectionOutcome { products: vec![validate_polygon(&out)?], kind: BandKind::NonCoherent })
        }
        Alignment::Antiparallel => {
            if consecutive(i, (j + 1) % n, n) || consecutive(i + 1, j, n) {
                return Err(ReconnectionError::ReplacementCollision);
            }
            let inner = v[i + 1..=j].to_vec();
            let mut outer = v[j + 1..].to_vec();
            outer.extend_from_slice(&v[..=i]);
            Ok(ReconnectionOutcome {
                products: vec![validate_polygon(&outer)?, validate_polygon(&inner)?],
                kind: BandKind::Coherent,
            })
        }
    }
}

/// One row of the reconnection event log.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconnectionEvent {
    pub substrate_knot: String,
    pub substrate_length: usize,
    pub site_alignment: Alignment,
    pub product_knots: Vec<String>,
    pub product_lengths: Vec<usize>,
    pub chain_id: usize,
    pub step: u64,
}

pub const EVENT_LOG_HEADER: &str =
    "substrate_knot,substrate_length,site_alignment,product_knots,product_lengths,chain_id,step";

/// Writes an event log as CSV. Multiple products are joined with `;`.
pub fn write_event_log<W: Write>(w: W, events: &[ReconnectionEvent]) -> std::io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(EVENT_LOG_HEADER.split(','))?;
    for e in events {
        let lengths: Vec<String> = e.product_lengths.iter().map(|l| l.to_string()).collect();
        out.write_record([
            e.substrate_knot.as_str(),
            &e.substrate_length.to_string(),
            e.site_alignment.as_str(),
            &e.product_knots.join(";"),
            &lengths.join(";"),
            &e.chain_id.to_string(),
            &e.step.to_string(),
        ])?;
    }
    out.flush()
}

/// Reads an event log written by [`write_event_log`]. Lines starting with
/// `#` are skipped.
pub fn read_event_log(text: &str) -> Result<Vec<ReconnectionEvent>, ParseError> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| ParseError::new(e.to_string()))?;
    if header.iter().collect::<Vec<_>>().join(",") != EVENT_LOG_HEADER {
        return Err(ParseError::new("missing event log header"));
    }
    rdr.records()
        .map(|rec| {
            let f = rec.map_err(|e| ParseError::new(e.to_string()))?;
            let line = f.position().map_or(0, |p| p.line());
            let bad = |what: &str| ParseError::new(format!("line {line}: bad {what}"));
            let site_alignment = match &f[2] {
                "parallel" => Alignment::Parallel,
                "antiparallel" => Alignment::Antiparallel,
                _ => return Err(bad("site_alignment")),
            };
            let product_lengths = f[4]
                .split(';')
                .map(|x| x.parse().map_err(|_| bad("product_lengths")))
                .collect::<Result<_, _>>()?;
            Ok(ReconnectionEvent {
                substrate_knot: f[0].to_string(),
                substrate_length: f[1].parse().map_err(|_| bad("substrate_length"))?,
                site_alignment,
                product_knots: f[3].split(';').map(str::to_string).collect(),
                product_lengths,
                chain_id: f[5].parse().map_err(|_| bad("chain_id"))?,
                step: f[6].parse().map_err(|_| bad("step"))?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_has_no_usable_site() {
        let scan = scan_sites(&LatticePolygon::unit_square());
        assert!(scan.sites.is_empty());
        assert_eq!(scan.excluded, 2);
    }

    #[test]
    fn long_rectangle_splits_into_two_squares() {
        let r = LatticePolygon::rectangle(3, 1);
        let sites = find_sites(&r);
        assert_eq!(sites.len(), 1);
        let s = sites[0];
        assert_eq!(s.alignment, Alignment::Antiparallel);
        assert_eq!((r.vertex(s.edge_a).x, r.vertex(s.edge_a + 1).x), (1, 2));
        let out = reconnect(&r, &s).unwrap();
        assert_eq!(out.kind, BandKind::Coherent);
        assert_eq!(out.products.len(), 2);
        for p in &out.products {
            assert_eq!(p.length(), 4);
        }
    }

    fn sample_polygons() -> impl Iterator<Item = LatticePolygon> {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut chain = crate::lattice::BfacfChain::new(&LatticePolygon::rectangle(3, 2), 0.22, 400);
        (0..40).map(move |_| {
            for _ in 0..500 {
                chain.step(&mut rng);
            }
            chain.polygon()
        })
    }

    #[test]
    fn parallel_surgery_is_an_involution() {
        let mut checked = 0;
        for p in sample_polygons() {
            for s in find_sites(&p).into_iter().filter(|s| s.alignment == Alignment::Parallel) {
                let out = reconnect(&p, &s).unwrap();
                assert_eq!(out.kind, BandKind::NonCoherent);
                let q = &out.products[0];
                assert_eq!(q.length(), p.length());
                // the new edges sit at the same positions and form a parallel site
                let back = find_sites(q)
                    .into_iter()
                    .find(|t| t.edge_a == s.edge_a && t.edge_b == s.edge_b)
                    .expect("inverse site");
                assert_eq!(back.alignment, Alignment::Parallel);
                assert_eq!(reconnect(q, &back).unwrap().products[0].canonical(), p.canonical());
                checked += 1;
            }
        }
        assert!(checked >= 10, "{checked}");
    }

    #[test]
    fn forged_site_is_rejected() {
        let r = LatticePolygon::rectangle(3, 1);
        let mut s = find_sites(&r)[0];
        s.edge_b = (s.edge_b + 1) % r.length();
        assert!(reconnect(&r, &s).is_err());
    }

    #[test]
    fn event_log_format() {
        let e = ReconnectionEvent {
            substrate_knot: "3_1".into(),
            substrate_length: 24,
            site_alignment: Alignment::Parallel,
            product_knots: vec!["5_1".into()],
            product_lengths: vec![24],
            chain_id: 0,
            step: 10,
        };
        let mut buf = Vec::new();
        write_event_log(&mut buf, &[e.clone()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some("3_1,24,parallel,5_1,24,0,10"));
        assert_eq!(read_event_log(&format!("# comment\n{text}")).unwrap(), vec![e.clone()]);
        assert!(read_event_log("3_1,24,parallel,5_1,24,0,10").is_err());
        let link = ReconnectionEvent {
            site_alignment: Alignment::Antiparallel,
            product_knots: vec!["T(2,4)".into()],
            product_lengths: vec![10, 14],
            ..e.clone()
        };
        let mut buf = Vec::new();
        write_event_log(&mut buf, &[link.clone()]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1), Some("3_1,24,antiparallel,\"T(2,4)\",10;14,0,10"));
        assert_eq!(read_event_log(&text).unwrap(), vec![link]);
    }
}
