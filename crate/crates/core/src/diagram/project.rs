//! Exact projection of lattice polygons to PD codes.
//!
//! A point `p` is projected along an integer direction `v` (with `v.z > 0`)
//! to `(x v_z - z v_x, y v_z - z v_y)`; its height is `z`. All predicates
//! are evaluated in integer arithmetic, so a direction is either generic or
//! rejected, never misclassified.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Crossing, DiagramError, PdCode, Sign};
use crate::lattice::{LatticePolygon, Point3};

/// Seed from which projection directions are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ProjectionSeed(pub u64);

const MAX_ATTEMPTS: usize = 64;

#[derive(Clone, Copy)]
struct Segment {
    comp: usize,
    idx: usize,
    p: (i64, i64),
    r: (i64, i64),
    z: i64,
    dz: i64,
}

struct Event {
    // position along the segment as a fraction with positive denominator
    num: i128,
    den: i128,
    crossing: usize,
    over: bool,
}

fn cross(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

fn random_direction(rng: &mut ChaCha8Rng) -> Point3 {
    loop {
        let mut c = [0i32; 3];
        for v in c.iter_mut() {
            *v = rng.gen_range(101..1000);
        }
        if rng.gen::<bool>() {
            c[0] = -c[0];
        }
        if rng.gen::<bool>() {
            c[1] = -c[1];
        }
        let (a, b, z) = (c[0] as i64, c[1] as i64, c[2] as i64);
        let distinct = a.abs() != b.abs() && a.abs() != z && b.abs() != z;
        if distinct && gcd(a, b) == 1 && gcd(a, z) == 1 && gcd(b, z) == 1 {
            return Point3::new(c[0], c[1], c[2]);
        }
    }
}

/// Projects a single polygon.
pub fn project(p: &LatticePolygon, seed: ProjectionSeed) -> Result<PdCode, DiagramError> {
    project_components(std::slice::from_ref(p), seed)
}

/// Projects a link given by disjoint polygons, retrying with fresh
/// directions until one is generic.
pub fn project_components(
    comps: &[LatticePolygon],
    seed: ProjectionSeed,
) -> Result<PdCode, DiagramError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.0);
    for _ in 0..MAX_ATTEMPTS {
        let v = random_direction(&mut rng);
        if let Some(d) = project_along(comps, v) {
            return Ok(d);
        }
    }
    Err(DiagramError::NoGenericDirection(MAX_ATTEMPTS))
}

/// Projection along `v`, or `None` if `v` is not generic for these polygons.
pub(crate) fn project_along(comps: &[LatticePolygon], v: Point3) -> Option<PdCode> {
    let origin = comps.first()?.vertex(0);
    let (vx, vy, vz) = (v.x as i64, v.y as i64, v.z as i64);
    let map = |q: Point3| {
        let (x, y, z) = ((q.x - origin.x) as i64, (q.y - origin.y) as i64, (q.z - origin.z) as i64);
        ((x * vz - z * vx, y * vz - z * vy), z)
    };

    let mut segs: Vec<Segment> = Vec::new();
    let mut comp_start = Vec::with_capacity(comps.len());
    for (ci, poly) in comps.iter().enumerate() {
        comp_start.push(segs.len());
        let n = poly.length();
        for i in 0..n {
            let (a, za) = map(poly.vertex(i));
            let (b, zb) = map(poly.vertex(i + 1));
            segs.push(Segment { comp: ci, idx: i, p: a, r: (b.0 - a.0, b.1 - a.1), z: za, dz: zb - za });
        }
    }
    let comp_len: Vec<usize> = comps.iter().map(|c| c.length()).collect();
    let adjacent = |a: &Segment, b: &Segment| {
        a.comp == b.comp && {
            let n = comp_len[a.comp];
            (a.idx + 1) % n == b.idx || (b.idx + 1) % n == a.idx
        }
    };

    // sweep over x-extent
    let xmin = |s: &Segment| s.p.0.min(s.p.0 + s.r.0);
    let xmax = |s: &Segment| s.p.0.max(s.p.0 + s.r.0);
    let mut order: Vec<usize> = (0..segs.len()).collect();
    order.sort_by_key(|&i| xmin(&segs[i]));

    let mut events: Vec<Vec<Event>> = (0..segs.len()).map(|_| Vec::new()).collect();
    let mut signs: Vec<Sign> = Vec::new();

    for (oi, &i) in order.iter().enumerate() {
        let a = segs[i];
        let a_xmax = xmax(&a);
        for &j in &order[oi + 1..] {
            let b = segs[j];
            if xmin(&b) > a_xmax {
                break;
            }
            let (aymin, aymax) = (a.p.1.min(a.p.1 + a.r.1), a.p.1.max(a.p.1 + a.r.1));
            if b.p.1.max(b.p.1 + b.r.1) < aymin || b.p.1.min(b.p.1 + b.r.1) > aymax {
                continue;
            }
            let denom = cross(a.r, b.r);
            if adjacent(&a, &b) {
                // consecutive edges meet only at their shared vertex: their
                // images are either collinear and end to end, or not parallel
                continue;
            }
            let qp = (b.p.0 - a.p.0, b.p.1 - a.p.1);
            if denom == 0 {
                if cross(qp, a.r) == 0 {
                    // collinear: degenerate if the extents overlap
                    let dot = |u: (i64, i64), w: (i64, i64)| u.0 as i128 * w.0 as i128 + u.1 as i128 * w.1 as i128;
                    let len = dot(a.r, a.r);
                    let t0 = dot(qp, a.r);
                    let t1 = dot((qp.0 + b.r.0, qp.1 + b.r.1), a.r);
                    let (lo, hi) = (t0.min(t1), t0.max(t1));
                    if hi >= 0 && lo <= len {
                        return None;
                    }
                }
                continue;
            }
            let mut tn = cross(qp, b.r);
            let mut un = cross(qp, a.r);
            let mut den = denom;
            if den < 0 {
                tn = -tn;
                un = -un;
                den = -den;
            }
            if tn < 0 || tn > den || un < 0 || un > den {
                continue;
            }
            if tn == 0 || tn == den || un == 0 || un == den {
                // a vertex lands on another segment
                return None;
            }
            let za = a.z as i128 * den + tn * a.dz as i128;
            let zb = b.z as i128 * den + un * b.dz as i128;
            if za == zb {
                return None;
            }
            let (over, under) = if za > zb { (&a, &b) } else { (&b, &a) };
            let sign = if cross(over.r, under.r) > 0 { Sign::Positive } else { Sign::Negative };
            let c = signs.len();
            signs.push(sign);
            events[i].push(Event { num: tn, den, crossing: c, over: za > zb });
            events[j].push(Event { num: un, den, crossing: c, over: zb > za });
        }
    }

    for ev in events.iter_mut() {
        ev.sort_by(|x, y| (x.num * y.den).cmp(&(y.num * x.den)));
        // two crossings at one point of a segment: triple point
        if ev.windows(2).any(|w| w[0].num * w[1].den == w[1].num * w[0].den) {
            return None;
        }
    }

    let nc = signs.len();
    let mut under_in = vec![u32::MAX; nc];
    let mut under_out = vec![u32::MAX; nc];
    let mut over_in = vec![u32::MAX; nc];
    let mut over_out = vec![u32::MAX; nc];
    let mut label = 0u32;
    let mut loops = 0u32;
    for (ci, &start) in comp_start.iter().enumerate() {
        let seq: Vec<&Event> = (start..start + comp_len[ci]).flat_map(|s| events[s].iter()).collect();
        if seq.is_empty() {
            loops += 1;
            continue;
        }
        let k = seq.len() as u32;
        for (m, e) in seq.iter().enumerate() {
            let out_label = label + m as u32;
            let in_label = label + (m as u32 + k - 1) % k;
            if e.over {
                over_in[e.crossing] = in_label;
                over_out[e.crossing] = out_label;
            } else {
                under_in[e.crossing] = in_label;
                under_out[e.crossing] = out_label;
            }
        }
        label += k;
    }

    let crossings: Vec<Crossing> = (0..nc)
        .map(|c| match signs[c] {
            Sign::Positive => Crossing::new([under_in[c], over_out[c], under_out[c], over_in[c]], Sign::Positive),
            Sign::Negative => Crossing::new([under_in[c], over_in[c], under_out[c], over_out[c]], Sign::Negative),
        })
        .collect();
    Some(PdCode::from_crossings(crossings, loops).expect("projection yields a planar diagram"))
}
