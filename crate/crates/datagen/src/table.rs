use std::error::Error;
use std::path::Path;

use bandsim::diagram::PdCode;
use bandsim::invariants::{homfly, invariant_set};
use bandsim::knot_table::{mirror_name, KnotRecord, KnotTable};

const PREAMBLE: &str = "Prime knots up to 10 crossings, one record per chirality class.
Mirrors carry a trailing '*'; unstarred names are the KnotInfo diagrams.
det, sigma, arf, e2, delta3, rank5 and homfly are recomputed from knot_pd.tsv on load.
qa: quasi-alternating flag from KnotInfo.
u: unknotting number from KnotInfo (entries given as a range are left empty).
u2: H(2)-unknotting number, known exactly for 0_1 and 9_49; u2_max = 2 bounds it for other knots up to 9 crossings.
torus: n for the torus knot T(2,n), read from a braid word of n equal generators.
homfly: pairs 'a,b:c' meaning c l^a m^b, with l P(L+) + l^-1 P(L-) + m P(L0) = 0.";

fn torus_param(braid: &str) -> Option<i32> {
    let word: Vec<i32> = serde_json::from_str(braid).ok()?;
    let first = *word.first()?;
    (first.abs() == 1 && word.iter().all(|&g| g == first)).then(|| first * word.len() as i32)
}

fn record(row: &std::collections::HashMap<String, String>) -> Result<KnotRecord, Box<dyn Error>> {
    let name = row["name"].clone();
    let pd = if name == "0_1" {
        PdCode::unknot()
    } else {
        let tuples: Vec<[u32; 4]> = serde_json::from_str(&row["pd"])?;
        PdCode::from_pd_tuples(&tuples, 0)?
    };
    let inv = invariant_set(&pd)?;
    let crossing_number: u32 = row["crossings"].parse()?;
    let symmetry = row["symmetry"].as_str();
    let chiral = matches!(symmetry, "chiral" | "reversible");
    let mut torus = torus_param(&row["braid"]);
    if let Some(n) = torus {
        // the braid closure may be drawn as the mirror of the tabulated diagram
        if inv.sigma != 1 - n {
            torus = Some(-n);
        }
    }
    Ok(KnotRecord {
        crossing_number,
        chiral,
        homfly: homfly(&pd)?,
        det: inv.det,
        sigma: inv.sigma,
        arf: inv.arf.expect("knot"),
        e2: inv.e2,
        delta3: inv.delta3,
        rank5: inv.rank5,
        qa: match row["qa"].as_str() {
            "Y" => Some(true),
            "N" => Some(false),
            _ => None,
        },
        u: if name == "0_1" { Some(0) } else { row["u"].parse().ok() },
        u2: match name.as_str() {
            "0_1" => Some(0),
            "9_49" => Some(3),
            _ => None,
        },
        u2_max: (crossing_number > 0 && crossing_number <= 9 && name != "9_49").then_some(2),
        torus_param: torus,
        pd,
        name,
    })
}

pub fn run(source: &Path, out: &Path) -> Result<(), Box<dyn Error>> {
    let text = std::fs::read_to_string(source)?;
    let mut records = Vec::new();
    for row in crate::source_rows(&text) {
        let r = record(&row)?;
        let mirror = r.chiral.then(|| r.mirrored());
        records.push(r);
        records.extend(mirror);
    }
    let table = KnotTable::from_records(records);
    table.validate()?;
    std::fs::write(out.join("knot_table.tsv"), table.table_text(PREAMBLE))?;
    std::fs::write(out.join("knot_pd.tsv"), table.pd_text())?;
    log::info!("wrote {} records", table.len());
    debug_assert!(table.records().iter().all(|r| !r.chiral || table.get(&mirror_name(&r.name)).is_some()));
    Ok(())
}
