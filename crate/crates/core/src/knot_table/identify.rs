use serde::Serialize;

use super::{KnotRecord, KnotTable};
use crate::diagram::{project, simplify, PdCode, ProjectionSeed};
use crate::invariants::{homfly, invariant_set, HOMFLY_CAP};
use crate::lattice::{shrink, LatticePolygon};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    /// The HOMFLY polynomial matches a single record, and so do the
    /// classical invariants.
    Exact,
    /// Several records share the HOMFLY polynomial; the classical
    /// invariants pick one.
    TieBroken,
    /// Several records remain after tie-breaking.
    Ambiguous,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentificationResult {
    pub name: Option<String>,
    pub confidence: Confidence,
    /// Remaining candidates when ambiguous.
    pub candidates: Vec<String>,
    /// Crossings of the simplified diagram used for the lookup.
    pub crossings: usize,
    pub retries: u32,
    /// Prime factors when the HOMFLY polynomial factors over the table.
    pub composite: Option<(String, String)>,
}

impl IdentificationResult {
    /// The name, or `"Unknown"`.
    pub fn label(&self) -> &str {
        self.name.as_deref().unwrap_or("Unknown")
    }

    fn unknown(crossings: usize, retries: u32) -> Self {
        IdentificationResult {
            name: None,
            confidence: Confidence::Unknown,
            candidates: Vec::new(),
            crossings,
            retries,
            composite: None,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IdentifyOptions {
    /// Shrink-and-retry rounds when the simplified diagram is too large.
    pub max_retries: u32,
}

impl Default for IdentifyOptions {
    fn default() -> Self {
        IdentifyOptions { max_retries: 3 }
    }
}

/// Names the knot type of a polygon using the shipped table.
pub fn identify(p: &LatticePolygon) -> IdentificationResult {
    identify_with(p, KnotTable::shipped(), IdentifyOptions::default())
}

/// Projects, simplifies and looks up the HOMFLY polynomial. When the
/// simplified diagram is above the HOMFLY cap the polygon is shrunk by
/// low-fugacity BFACF and the attempt repeated.
pub fn identify_with(p: &LatticePolygon, table: &KnotTable, opts: IdentifyOptions) -> IdentificationResult {
    let mut poly = p.clone();
    let mut crossings = 0;
    for attempt in 0..=opts.max_retries {
        let seed = crate::lattice::polygon_seed(&poly);
        if let Ok(d) = project(&poly, ProjectionSeed(seed)) {
            let s = simplify(&d);
            crossings = s.crossing_count();
            if crossings <= HOMFLY_CAP {
                return lookup(&s, table, attempt);
            }
        }
        if attempt < opts.max_retries {
            poly = shrink(&poly, 4);
        }
    }
    IdentificationResult::unknown(crossings, opts.max_retries)
}

/// Identifies a knot diagram of at most `HOMFLY_CAP` crossings.
pub fn lookup(s: &PdCode, table: &KnotTable, retries: u32) -> IdentificationResult {
    let crossings = s.crossing_count();
    if crossings == 0 {
        return found(table.get("0_1").expect("unknot record"), Confidence::Exact, crossings, retries);
    }
    let Ok(h) = homfly(s) else {
        return IdentificationResult::unknown(crossings, retries);
    };
    let cands = table.with_homfly(&h);
    let Ok(inv) = invariant_set(s) else {
        return IdentificationResult::unknown(crossings, retries);
    };
    if cands.is_empty() {
        let mut out = IdentificationResult::unknown(crossings, retries);
        out.composite = factor(table, &h, inv.det, inv.sigma, crossings);
        return out;
    }
    // a HOMFLY match can be a knot outside the table; the homology of the
    // branched double cover and the signature must agree as well
    let unique = cands.len() == 1;
    let kept: Vec<&KnotRecord> = cands
        .into_iter()
        .filter(|r| {
            (r.det, r.sigma, r.e2, r.delta3, r.rank5) == (inv.det, inv.sigma, inv.e2, inv.delta3, inv.rank5)
        })
        .collect();
    if unique && kept.len() == 1 {
        return found(kept[0], Confidence::Exact, crossings, retries);
    }
    match kept.len() {
        0 => IdentificationResult::unknown(crossings, retries),
        1 => found(kept[0], Confidence::TieBroken, crossings, retries),
        _ => IdentificationResult {
            name: None,
            confidence: Confidence::Ambiguous,
            candidates: kept.iter().map(|r| r.name.clone()).collect(),
            crossings,
            retries,
            composite: None,
        },
    }
}

fn found(r: &KnotRecord, confidence: Confidence, crossings: usize, retries: u32) -> IdentificationResult {
    IdentificationResult {
        name: Some(r.name.clone()),
        confidence,
        candidates: Vec::new(),
        crossings,
        retries,
        composite: None,
    }
}

/// Looks for two table knots whose HOMFLY product is `h`.
fn factor(
    table: &KnotTable,
    h: &crate::invariants::LaurentPoly2,
    det: u64,
    sigma: i32,
    crossings: usize,
) -> Option<(String, String)> {
    let rs: Vec<&KnotRecord> = table.records().iter().filter(|r| r.crossing_number > 0).collect();
    for (i, a) in rs.iter().enumerate() {
        for b in &rs[i..] {
            if a.det * b.det != det
                || a.sigma + b.sigma != sigma
                || (a.crossing_number + b.crossing_number) as usize > crossings
            {
                continue;
            }
            if &(&a.homfly * &b.homfly) == h {
                return Some((a.name.clone(), b.name.clone()));
            }
        }
    }
    None
}
