use std::error::Error;
use std::path::Path;

use bandsim::knot_table::{
    corpus_text, identify_with, name_torus_link, parse_corpus, BandingExample, IdentifyOptions, KnotTable,
};
use bandsim::lattice::{read_polygons, validate_polygon, BfacfChain, LatticePolygon, Point3};
use bandsim::reconnection::{find_sites, reconnect, Alignment, BandKind, SitePair};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Target {
    label: &'static str,
    substrate: &'static str,
    kind: BandKind,
    product: &'static str,
}

/// Bands found by sampling the substrate directly.
const DIRECT: [Target; 5] = [
    Target { label: "t3-to-t3", substrate: "3_1", kind: BandKind::NonCoherent, product: "3_1" },
    Target { label: "t3-to-unknot", substrate: "3_1", kind: BandKind::NonCoherent, product: "0_1" },
    Target { label: "t3-to-t2", substrate: "3_1", kind: BandKind::Coherent, product: "T(2,2)" },
    Target { label: "t3-to-t4", substrate: "3_1", kind: BandKind::Coherent, product: "T(2,4)" },
    Target { label: "5_1-to-mirror", substrate: "5_1", kind: BandKind::NonCoherent, product: "5_1*" },
];

const FUGACITY: f64 = 0.19;
const STEPS_PER_SAMPLE: u64 = 2_000;
const MAX_SAMPLES: u64 = 200_000;

/// Samples conformations of `substrate` until every target band on it has
/// been realized at some site.
fn search(
    table: &KnotTable,
    seed: &LatticePolygon,
    targets: &[&Target],
    rng_seed: u64,
) -> Result<Vec<BandingExample>, Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut chain = BfacfChain::new(seed, FUGACITY, 400);
    let mut found: Vec<Option<BandingExample>> = vec![None; targets.len()];
    for sample in 0..MAX_SAMPLES {
        for _ in 0..STEPS_PER_SAMPLE {
            chain.step(&mut rng);
        }
        let p = chain.polygon();
        for site in find_sites(&p) {
            let kind = match site.alignment {
                Alignment::Parallel => BandKind::NonCoherent,
                Alignment::Antiparallel => BandKind::Coherent,
            };
            let open: Vec<usize> =
                (0..targets.len()).filter(|&k| found[k].is_none() && targets[k].kind == kind).collect();
            if open.is_empty() {
                continue;
            }
            let out = reconnect(&p, &site)?;
            let name = match kind {
                BandKind::NonCoherent => identify_with(&out.products[0], table, IdentifyOptions::default()).name,
                BandKind::Coherent => name_torus_link(&out.products),
            };
            let Some(name) = name else { continue };
            for k in open {
                if targets[k].product == name {
                    log::info!("{} at sample {sample}, length {}", targets[k].label, p.length());
                    found[k] = Some(BandingExample {
                        label: targets[k].label.to_string(),
                        substrate: targets[k].substrate.to_string(),
                        polygon: p.clone(),
                        site,
                        kind,
                        product: name.clone(),
                    });
                }
            }
        }
        if found.iter().all(Option::is_some) {
            return Ok(found.into_iter().flatten().collect());
        }
    }
    let missing: Vec<&str> =
        targets.iter().zip(&found).filter(|(_, f)| f.is_none()).map(|(t, _)| t.label).collect();
    Err(format!("no realization found for {missing:?}").into())
}

/// Samples the larger knot `from` until a parallel band takes it to
/// `to`, then returns the dual band on the product, which undoes it.
fn search_reverse(
    table: &KnotTable,
    seed: &LatticePolygon,
    to: &str,
    label: &str,
    rng_seed: u64,
) -> Result<BandingExample, Box<dyn Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut chain = BfacfChain::new(seed, FUGACITY, 400);
    for sample in 0..MAX_SAMPLES {
        for _ in 0..STEPS_PER_SAMPLE {
            chain.step(&mut rng);
        }
        let p = chain.polygon();
        for site in find_sites(&p).into_iter().filter(|s| s.alignment == Alignment::Parallel) {
            let q = reconnect(&p, &site)?.products.remove(0);
            if identify_with(&q, table, IdentifyOptions::default()).name.as_deref() != Some(to) {
                continue;
            }
            let back = dual_site(&q, &[p.clone()])?;
            let product = identify_with(&p, table, IdentifyOptions::default()).name.ok_or("unnamed substrate")?;
            log::info!("{label} at sample {sample}, length {}", q.length());
            return Ok(BandingExample {
                label: label.to_string(),
                substrate: to.to_string(),
                polygon: q,
                site: back,
                kind: BandKind::NonCoherent,
                product,
            });
        }
    }
    Err(format!("no realization found for {label}").into())
}

/// The site of `q` whose reconnection gives back `original`.
fn dual_site(q: &LatticePolygon, original: &[LatticePolygon]) -> Result<SitePair, Box<dyn Error>> {
    let mut want: Vec<LatticePolygon> = original.iter().map(LatticePolygon::canonical).collect();
    want.sort_by_key(|p| p.vertices().to_vec());
    for site in find_sites(q) {
        let mut got: Vec<LatticePolygon> = reconnect(q, &site)?.products.iter().map(LatticePolygon::canonical).collect();
        got.sort_by_key(|p| p.vertices().to_vec());
        if got == want {
            return Ok(site);
        }
    }
    Err("the dual site is not usable".into())
}

/// A 4-braid word whose closure is the trefoil; the leading `σ_1` is the
/// crossing removed by the band, and without it the closure is
/// `T(2,-6)`. In band generators it reads `a_01 a_12 a_13 a_02 a_03`.
const TREFOIL_BRAID: [i32; 11] = [1, 2, 2, 3, -2, 1, 2, 2, 3, -2, -1];
const TREFOIL_STRANDS: usize = 4;

/// Lattice closure of a braid word with strands at `x = 0, 2, 4, ...`
/// running up the `y` axis. Each letter is a block of height 3 in which the
/// strand moving left passes under (positive letter) or over the strand
/// moving right. Letter `hook` is replaced by a block of height 5 where
/// the right strand doubles back at `z = lift` next to the left one, so
/// the two strands sit on antiparallel edges of a unit square. The closing
/// arcs are nested rectangles on the right.
fn braid_closure(strands: usize, word: &[i32], hook: usize, lift: i32) -> Vec<LatticePolygon> {
    let p = Point3::new;
    // paths[k] is the open path that currently ends at position k
    let mut paths: Vec<Vec<Point3>> = (0..strands).map(|_| Vec::new()).collect();
    let mut origin: Vec<usize> = (0..strands).collect();
    let mut y = 0;
    for (n, &g) in word.iter().enumerate() {
        let i = g.unsigned_abs() as usize - 1;
        let x0 = 2 * i as i32;
        let height = if n == hook { 5 } else { 3 };
        for k in (0..strands).filter(|&k| k != i && k != i + 1) {
            let x = 2 * k as i32;
            paths[k].extend((y..y + height).map(|t| p(x, t, 0)));
        }
        if n == hook {
            paths[i].extend((y..y + 5).map(|t| p(x0, t, 0)));
            let (r, z) = (x0 + 2, lift);
            paths[i + 1].extend([
                p(r, y, 0),
                p(r, y + 1, 0),
                p(r, y + 2, 0),
                p(r, y + 3, 0),
                p(r - 1, y + 3, 0),
                p(r - 1, y + 2, 0),
                p(r - 1, y + 1, 0),
                p(r - 1, y + 1, z),
                p(r - 1, y + 2, z),
                p(r - 1, y + 3, z),
                p(r - 1, y + 4, z),
                p(r, y + 4, z),
                p(r, y + 4, 0),
            ]);
        } else {
            let z = -g.signum();
            paths[i].extend([p(x0, y, 0), p(x0, y + 1, 0), p(x0 + 1, y + 1, 0), p(x0 + 2, y + 1, 0), p(x0 + 2, y + 2, 0)]);
            paths[i + 1].extend([
                p(x0 + 2, y, 0),
                p(x0 + 2, y, z),
                p(x0 + 1, y, z),
                p(x0 + 1, y + 1, z),
                p(x0 + 1, y + 2, z),
                p(x0, y + 2, z),
                p(x0, y + 2, 0),
            ]);
            paths.swap(i, i + 1);
            origin.swap(i, i + 1);
        }
        y += height;
    }
    let top = y;
    let right = 2 * (strands as i32 - 1);
    for (k, path) in paths.iter_mut().enumerate() {
        let (x, depth) = (2 * k as i32, (strands - k) as i32);
        let far = right + 2 * depth;
        path.extend((top..top + depth).map(|t| p(x, t, 0)));
        path.extend((x..far).map(|s| p(s, top + depth, 0)));
        path.extend(((1 - depth)..=top + depth).rev().map(|t| p(far, t, 0)));
        path.extend((x + 1..=far).rev().map(|s| p(s, -depth, 0)));
        path.extend((-depth..0).map(|t| p(x, t, 0)));
    }
    // the path ending at position k continues with the one that started there
    let mut at_end = vec![0; strands];
    for (k, &o) in origin.iter().enumerate() {
        at_end[o] = k;
    }
    let mut used = vec![false; strands];
    let mut out = Vec::new();
    for start in 0..strands {
        if used[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut k = at_end[start];
        while !used[k] {
            used[k] = true;
            cycle.extend(paths[k].iter().copied());
            k = at_end[k];
        }
        out.push(validate_polygon(&cycle).expect("braid closure is self-avoiding"));
    }
    out
}

/// Joins two components at antiparallel edges on opposite sides of a unit
/// square.
fn merge(a: &LatticePolygon, b: &LatticePolygon, i: usize, j: usize) -> Option<LatticePolygon> {
    let (na, nb) = (a.length(), b.length());
    let (a0, a1) = (a.vertex(i), a.vertex((i + 1) % na));
    let (b0, b1) = (b.vertex(j), b.vertex((j + 1) % nb));
    let u = Point3::new(b1.x - a0.x, b1.y - a0.y, b1.z - a0.z);
    if !u.is_unit() || Point3::new(b0.x - a1.x, b0.y - a1.y, b0.z - a1.z) != u {
        return None;
    }
    let mut v: Vec<Point3> = (0..=i).map(|k| a.vertex(k)).collect();
    v.extend((0..nb).map(|k| b.vertex((j + 1 + k) % nb)));
    v.extend((i + 1..na).map(|k| a.vertex(k)));
    validate_polygon(&v).ok()
}

/// Joins the two components of the lattice closure of
/// [`TREFOIL_BRAID`] with its hook in place, then keeps the join that is
/// the trefoil together with the dual band back to `T(2,-6)`.
fn braid_band(table: &KnotTable, label: &str) -> Result<BandingExample, Box<dyn Error>> {
    for lift in [1, -1] {
        let link = braid_closure(TREFOIL_STRANDS, &TREFOIL_BRAID, 0, lift);
        let [a, b] = <[LatticePolygon; 2]>::try_from(link).map_err(|_| "hooked braid is not a two-component link")?;
        let link_name = name_torus_link(&[a.clone(), b.clone()]).ok_or("hooked braid is not a torus link")?;
        for (a, b) in [(&a, &b), (&b, &a)] {
            for i in 0..a.length() {
                for j in 0..b.length() {
                    let Some(k) = merge(a, b, i, j) else { continue };
                    if identify_with(&k, table, IdentifyOptions::default()).name.as_deref() != Some("3_1") {
                        continue;
                    }
                    let site = dual_site(&k, &[a.clone(), b.clone()])?;
                    log::info!("{label} via {link_name}, length {}", k.length());
                    return Ok(BandingExample {
                        label: label.to_string(),
                        substrate: "3_1".to_string(),
                        polygon: k,
                        site,
                        kind: BandKind::Coherent,
                        product: link_name,
                    });
                }
            }
        }
    }
    Err(format!("no realization found for {label}").into())
}

pub fn run(seeds: &Path, out: &Path, rng_seed: u64) -> Result<(), Box<dyn Error>> {
    let table = KnotTable::shipped();
    let seeds = read_polygons(&std::fs::read_to_string(seeds)?)?;
    let mut examples = Vec::new();
    for substrate in ["3_1", "5_1"] {
        let seed = &seeds.iter().find(|r| r.knot == substrate).ok_or("missing seed")?.polygon;
        let targets: Vec<&Target> = DIRECT.iter().filter(|t| t.substrate == substrate).collect();
        examples.extend(search(table, seed, &targets, rng_seed)?);
    }
    let seven = &seeds.iter().find(|r| r.knot == "7_1").ok_or("missing seed")?.polygon;
    examples.push(search_reverse(table, seven, "3_1", "t3-to-t7", rng_seed)?);
    examples.push(braid_band(table, "t3-to-t-6")?);
    examples.sort_by(|x, y| (&x.substrate, &x.label).cmp(&(&y.substrate, &y.label)));
    let text = corpus_text(&examples);
    // the file must reproduce every banding after a round trip
    for e in parse_corpus(&text)? {
        if e.realize(table).as_deref() != Some(e.product.as_str()) {
            return Err(format!("{} does not reproduce", e.label).into());
        }
    }
    std::fs::write(out, text)?;
    Ok(())
}
