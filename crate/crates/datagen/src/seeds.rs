use std::error::Error;
use std::path::Path;

use bandsim::diagram::{project, simplify, ProjectionSeed};
use bandsim::invariants::homfly;
use bandsim::knot_table::{identify, KnotTable};
use bandsim::lattice::{shrink_with, validate_polygon, write_polygons, LatticePolygon, Point3, PolygonRecord};

/// Lattice polygon of a grid diagram: horizontal runs at height 0,
/// vertical runs at height 1, joined by unit risers at the marks.
pub fn grid_polygon(marks: &[(i32, i32)]) -> LatticePolygon {
    let other_in = |pred: &dyn Fn(&(i32, i32)) -> bool, not: (i32, i32)| -> (i32, i32) {
        *marks.iter().find(|m| pred(m) && **m != not).expect("grid mark has a partner")
    };
    let mut verts = Vec::new();
    let start = marks[0];
    let mut cur = start;
    loop {
        // riser up, vertical run, riser down, horizontal run
        let (c, r) = cur;
        let v = other_in(&|m| m.0 == c, cur);
        let h = other_in(&|m| m.1 == v.1, v);
        verts.push(Point3::new(2 * c, 2 * r, 0));
        let step = (v.1 - r).signum();
        let mut y = 2 * r;
        while y != 2 * v.1 {
            verts.push(Point3::new(2 * c, y, 1));
            y += step;
        }
        verts.push(Point3::new(2 * c, y, 1));
        let step = (h.0 - v.0).signum();
        let mut x = 2 * v.0;
        while x != 2 * h.0 {
            verts.push(Point3::new(x, 2 * v.1, 0));
            x += step;
        }
        cur = h;
        if cur == start {
            break;
        }
    }
    validate_polygon(&verts).expect("grid embedding is self-avoiding")
}

fn parse_grid(s: &str) -> Result<Vec<(i32, i32)>, Box<dyn Error>> {
    let pairs: Vec<[i32; 2]> = serde_json::from_str(s)?;
    Ok(pairs.into_iter().map(|[a, b]| (a, b)).collect())
}

/// Shortest conformation found by repeated low-fugacity BFACF runs.
fn compact(p: &LatticePolygon, rounds: u64) -> LatticePolygon {
    let mut best = p.clone();
    for k in 0..rounds {
        let q = shrink_with(&best, 4, 0.1, 400_000, 17 + k);
        if q.length() < best.length() {
            best = q;
        }
    }
    best
}

pub fn run(source: &Path, out: &Path) -> Result<(), Box<dyn Error>> {
    let table = KnotTable::shipped();
    let text = std::fs::read_to_string(source)?;
    let mut records = vec![PolygonRecord::new("0_1", LatticePolygon::unit_square())];
    for row in crate::source_rows(&text) {
        let name = row["name"].clone();
        let crossings: u32 = row["crossings"].parse()?;
        if crossings == 0 || crossings > 8 {
            continue;
        }
        let rec = table.get(&name).ok_or("missing record")?;
        let raw = grid_polygon(&parse_grid(&row["grid"])?);
        let d = simplify(&project(&raw, ProjectionSeed(1))?);
        let h = homfly(&d)?;
        let base = if h == rec.homfly { raw } else { raw.mirrored() };
        let mut variants = vec![(name.clone(), base.clone())];
        if rec.chiral {
            variants.push((format!("{name}*"), base.mirrored()));
        }
        for (label, p) in variants {
            let small = compact(&p, 6);
            let id = identify(&small);
            // 8_8 and 8_16 share HOMFLY, det and sigma with 10-crossing knots
            let named = id.name.as_deref() == Some(label.as_str()) || id.candidates.contains(&label);
            if !named {
                return Err(format!("seed for {label} identified as {}", id.label()).into());
            }
            log::info!("{label}: grid length {} -> {}", p.length(), small.length());
            records.push(PolygonRecord::new(&label, small.canonical()));
        }
    }
    let mut buf = Vec::new();
    write_polygons(&mut buf, &records, None)?;
    std::fs::write(out, buf)?;
    log::info!("wrote {} seeds", records.len());
    Ok(())
}
