//! Reidemeister simplification.
//!
//! R1 and R2 reductions are applied greedily. When none is available, short
//! random walks of R3 moves look for a diagram where one appears; a walk is
//! kept only if it ends in a reduction. The walks are seeded from the
//! diagram itself, which makes `simplify` a deterministic and idempotent
//! function of its input.

use std::hash::{Hash, Hasher};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHasher;

use super::{Crossing, PdCode, Port, Resolution};

const R3_ROUNDS: usize = 10;

/// Crossings to remove by R1 (all kinks at once) or, failing that, by R2
/// (a maximal set of disjoint bigons).
fn find_r1_r2(d: &PdCode) -> Option<Vec<Resolution>> {
    let n = d.crossing_count();
    let mut actions = vec![Resolution::Keep; n];
    let mut found = false;
    for (i, c) in d.crossings().iter().enumerate() {
        if (0..4).any(|s| c.edges[s] == c.edges[(s + 1) % 4]) {
            actions[i] = Resolution::Pass;
            found = true;
        }
    }
    if found {
        return Some(actions);
    }
    let partner = d.port_partner();
    for face in d.faces() {
        if face.len() != 2 {
            continue;
        }
        let ((c1, k1), (c2, _)) = (face[0], face[1]);
        if c1 == c2 || actions[c1] != Resolution::Keep || actions[c2] != Resolution::Keep {
            continue;
        }
        // one bigon edge leaves c1 at slot k1; R2 applies if it is on the
        // same level (over or under) at both ends
        let (pc, ps) = partner[c1][k1 as usize];
        debug_assert_eq!(pc, c2);
        if ps % 2 == k1 % 2 {
            actions[c1] = Resolution::Pass;
            actions[c2] = Resolution::Pass;
            found = true;
        }
    }
    found.then_some(actions)
}

/// Applies R1 and R2 reductions until none is left. Returns the input
/// unchanged (same labels) when nothing applies.
pub fn reduce_r1_r2(d: &PdCode) -> PdCode {
    let mut cur = d.clone();
    while let Some(actions) = find_r1_r2(&cur) {
        cur = cur.resolve(&actions);
    }
    cur
}

/// Edges of a face as `(port, port)` pairs, in face order.
fn face_edges(face: &[Port]) -> Vec<(Port, Port)> {
    let k = face.len();
    (0..k)
        .map(|i| {
            let (c, t) = face[i];
            let (c2, t2) = face[(i + 1) % k];
            ((c, t), (c2, (t2 + 1) % 4))
        })
        .collect()
}

/// Triangular faces where an R3 move is possible: three distinct crossings
/// and one strand passing over both of its crossings on the triangle.
fn r3_triangles(d: &PdCode) -> Vec<Vec<(Port, Port)>> {
    d.faces()
        .into_iter()
        .filter(|f| f.len() == 3 && f[0].0 != f[1].0 && f[1].0 != f[2].0 && f[0].0 != f[2].0)
        .map(|f| face_edges(&f))
        .filter(|edges| edges.iter().any(|&((_, a), (_, b))| a % 2 == 1 && b % 2 == 1))
        .collect()
}

/// Performs the R3 move across a triangle. Every crossing keeps its sign
/// and slot orientation; along each strand the two triangle crossings
/// trade places, so the outer edge that met one crossing now meets the
/// other.
fn apply_r3(d: &PdCode, triangle: &[(Port, Port)]) -> Option<PdCode> {
    let mut crossings: Vec<Crossing> = d.crossings().to_vec();
    let old = d.crossings();
    for &((p, a), (q, b)) in triangle {
        let e = old[p].edges[a as usize];
        let x = old[p].edges[((a + 2) % 4) as usize];
        let y = old[q].edges[((b + 2) % 4) as usize];
        crossings[p].edges[((a + 2) % 4) as usize] = e;
        crossings[p].edges[a as usize] = y;
        crossings[q].edges[b as usize] = x;
        crossings[q].edges[((b + 2) % 4) as usize] = e;
    }
    PdCode::from_crossings(crossings, d.free_loops()).ok()
}

fn diagram_seed(d: &PdCode) -> u64 {
    let mut h = FxHasher::default();
    d.hash(&mut h);
    h.finish()
}

/// Random R3 walks from `d`; returns a strictly smaller diagram if one of
/// them exposes an R1 or R2 reduction.
fn r3_search(d: &PdCode) -> Option<PdCode> {
    let mut rng = ChaCha8Rng::seed_from_u64(diagram_seed(d));
    let budget = 2 * d.crossing_count();
    for _ in 0..R3_ROUNDS {
        let mut cur = d.clone();
        for _ in 0..budget {
            let tris = r3_triangles(&cur);
            let Some(t) = tris.choose(&mut rng) else { break };
            match apply_r3(&cur, t) {
                Some(next) => cur = next,
                None => break,
            }
            if find_r1_r2(&cur).is_some() {
                return Some(reduce_r1_r2(&cur));
            }
        }
    }
    None
}

/// Simplifies a diagram by Reidemeister moves. The crossing count never
/// increases and `simplify(simplify(d)) == simplify(d)`.
pub fn simplify(d: &PdCode) -> PdCode {
    let mut cur = reduce_r1_r2(d);
    while cur.crossing_count() >= 3 {
        match r3_search(&cur) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::super::samples::*;
    use super::*;

    #[test]
    fn kink_is_removed() {
        assert_eq!(simplify(&kinked_unknot()), PdCode::unknot());
    }

    #[test]
    fn crossingless_diagrams_are_fixed() {
        assert_eq!(simplify(&PdCode::unknot()), PdCode::unknot());
        assert_eq!(simplify(&PdCode::unlink(3)), PdCode::unlink(3));
    }

    #[test]
    fn reduced_diagrams_are_untouched() {
        for d in [right_trefoil(), figure_eight()] {
            assert_eq!(simplify(&d), d);
        }
    }

    #[test]
    fn stacked_rectangles_separate() {
        use crate::lattice::{LatticePolygon, Point3};
        // a 1x4 rectangle lying across a 4x1 rectangle one level below
        let low = LatticePolygon::rectangle(4, 1);
        let high = LatticePolygon::rectangle(1, 4).translated(Point3::new(2, -2, 1));
        let d = super::super::project::project_along(&[low, high], Point3::new(1, 2, 997)).unwrap();
        assert_eq!(d.crossing_count(), 4);
        let s = simplify(&d);
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.n_components(), 2);
    }
}
