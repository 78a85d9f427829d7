use std::hash::{Hash, Hasher};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::{FxHashSet, FxHasher};

use super::{LatticePolygon, Point3};

/// Outcome of one attempted BFACF move.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveKind {
    Shrink,
    Flip,
    Grow,
    Rejected,
}

/// One BFACF chain at fixed fugacity, with a hash set of occupied sites.
///
/// A move picks an edge uniformly and one of the four perpendicular unit
/// vectors, and tries to push the edge across the unit square it spans.
/// Length changes are accepted with probability `b^2/(1+b^2)` (+2) and
/// `1/(1+b^2)` (-2), which makes `n * b^n` the stationary weight of an
/// `n`-edge polygon.
#[derive(Clone, Debug)]
pub struct BfacfChain {
    verts: Vec<Point3>,
    occ: FxHashSet<u64>,
    fugacity: f64,
    p_grow: f64,
    p_shrink: f64,
    max_length: usize,
    cap_rejections: u64,
}

fn perpendicular(u: Point3, k: usize) -> Point3 {
    let mut seen = 0;
    for d in Point3::UNITS {
        if d.dot(u) == 0 {
            if seen == k {
                return d;
            }
            seen += 1;
        }
    }
    unreachable!("a unit vector has four perpendicular units")
}

impl BfacfChain {
    pub fn new(p: &LatticePolygon, fugacity: f64, max_length: usize) -> Self {
        assert!(fugacity > 0.0, "fugacity must be positive");
        let verts = p.vertices().to_vec();
        let occ = verts.iter().map(|v| v.key()).collect();
        let b2 = fugacity * fugacity;
        Self {
            verts,
            occ,
            fugacity,
            p_grow: b2 / (1.0 + b2),
            p_shrink: 1.0 / (1.0 + b2),
            max_length,
            cap_rejections: 0,
        }
    }

    pub fn fugacity(&self) -> f64 {
        self.fugacity
    }

    pub fn set_fugacity(&mut self, fugacity: f64) {
        let b2 = fugacity * fugacity;
        self.fugacity = fugacity;
        self.p_grow = b2 / (1.0 + b2);
        self.p_shrink = 1.0 / (1.0 + b2);
    }

    pub fn length(&self) -> usize {
        self.verts.len()
    }

    /// Number of +2 proposals refused because of the length cap.
    pub fn cap_rejections(&self) -> u64 {
        self.cap_rejections
    }

    pub fn polygon(&self) -> LatticePolygon {
        LatticePolygon::from_vertices_unchecked(self.verts.clone())
    }

    pub fn vertices(&self) -> &[Point3] {
        &self.verts
    }

    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> MoveKind {
        let n = self.verts.len();
        let r = rng.gen_range(0..4 * n);
        let i = r >> 2;
        let j = (i + 1) % n;
        let a = self.verts[i];
        let b = self.verts[j];
        let d = perpendicular(b - a, r & 3);
        let a2 = a + d;
        let b2 = b + d;
        let prev = self.verts[(i + n - 1) % n];
        let next = self.verts[(j + 1) % n];

        if prev == a2 && next == b2 {
            if n <= 4 || rng.gen::<f64>() >= self.p_shrink {
                return MoveKind::Rejected;
            }
            self.occ.remove(&a.key());
            self.occ.remove(&b.key());
            if j == 0 {
                self.verts.pop();
                self.verts.remove(0);
            } else {
                self.verts.drain(i..=j);
            }
            MoveKind::Shrink
        } else if prev == a2 {
            if self.occ.contains(&b2.key()) {
                return MoveKind::Rejected;
            }
            self.occ.remove(&a.key());
            self.occ.insert(b2.key());
            self.verts[i] = b2;
            MoveKind::Flip
        } else if next == b2 {
            if self.occ.contains(&a2.key()) {
                return MoveKind::Rejected;
            }
            self.occ.remove(&b.key());
            self.occ.insert(a2.key());
            self.verts[j] = a2;
            MoveKind::Flip
        } else {
            if self.occ.contains(&a2.key()) || self.occ.contains(&b2.key()) {
                return MoveKind::Rejected;
            }
            if n + 2 > self.max_length {
                self.cap_rejections += 1;
                return MoveKind::Rejected;
            }
            if rng.gen::<f64>() >= self.p_grow {
                return MoveKind::Rejected;
            }
            self.occ.insert(a2.key());
            self.occ.insert(b2.key());
            if j == 0 {
                self.verts.push(a2);
                self.verts.push(b2);
            } else {
                self.verts.splice(j..j, [a2, b2]);
            }
            MoveKind::Grow
        }
    }
}

/// Performs one attempted BFACF move; returns the polygon unchanged when
/// the move is rejected.
pub fn bfacf_step<R: Rng + ?Sized>(p: &LatticePolygon, fugacity: f64, rng: &mut R) -> LatticePolygon {
    let mut chain = BfacfChain::new(p, fugacity, usize::MAX);
    match chain.step(rng) {
        MoveKind::Rejected => p.clone(),
        _ => chain.polygon(),
    }
}

pub(crate) fn polygon_seed(p: &LatticePolygon) -> u64 {
    let mut h = FxHasher::default();
    p.vertices().hash(&mut h);
    h.finish()
}

/// Reduces length by running BFACF at low fugacity. The RNG is seeded from
/// the polygon itself, so the result is a function of the input.
pub fn shrink(p: &LatticePolygon, target_length: usize) -> LatticePolygon {
    let budget = (2_000 * p.length() as u64).max(200_000);
    shrink_with(p, target_length, 0.12, budget, polygon_seed(p))
}

/// Runs at most `max_moves` attempted moves at `fugacity`, returning the
/// shortest conformation seen (the first one reached at that length).
pub fn shrink_with(
    p: &LatticePolygon,
    target_length: usize,
    fugacity: f64,
    max_moves: u64,
    seed: u64,
) -> LatticePolygon {
    if p.length() <= target_length {
        return p.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chain = BfacfChain::new(p, fugacity, p.length());
    let mut best = p.clone();
    for _ in 0..max_moves {
        if chain.step(&mut rng) == MoveKind::Shrink && chain.length() < best.length() {
            best = chain.polygon();
            if best.length() <= target_length {
                break;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::super::validate_polygon;
    use super::*;

    #[test]
    fn square_cannot_shrink() {
        let sq = LatticePolygon::unit_square();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..2000 {
            let q = bfacf_step(&sq, 0.2, &mut rng);
            assert!(q.length() == 4 || q.length() == 6);
        }
    }

    #[test]
    fn square_grows_into_six_edge_polygon() {
        let sq = LatticePolygon::unit_square();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let grown = (0..1000)
            .map(|_| bfacf_step(&sq, 1.0, &mut rng))
            .find(|q| q.length() == 6)
            .expect("a +2 move is accepted eventually");
        assert!(validate_polygon(grown.vertices()).is_ok());
    }

    #[test]
    fn chain_stays_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut chain = BfacfChain::new(&LatticePolygon::rectangle(3, 2), 0.21, 60);
        for k in 0..20_000 {
            chain.step(&mut rng);
            if k % 97 == 0 {
                let p = validate_polygon(chain.vertices()).unwrap();
                assert!(p.length() <= 60);
                let occ: FxHashSet<u64> = p.vertices().iter().map(|v| v.key()).collect();
                assert_eq!(occ, chain.occ);
            }
        }
    }

    #[test]
    fn shrinking_an_unknot_reaches_the_square() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut chain = BfacfChain::new(&LatticePolygon::unit_square(), 0.23, 200);
        for _ in 0..50_000 {
            chain.step(&mut rng);
        }
        let big = chain.polygon();
        let small = shrink(&big, 4);
        assert_eq!(small.length(), 4);
        assert_eq!(shrink(&small, 4), small);
    }
}
