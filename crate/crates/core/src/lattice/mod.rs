//! Self-avoiding polygons on the simple cubic lattice and the BFACF sampler.

mod bfacf;
mod cmc;
mod io;

pub use bfacf::{bfacf_step, shrink, shrink_with, BfacfChain, MoveKind};
pub use cmc::{geometric_fugacities, ChainParams, CmcSampler, CmcStats, CRITICAL_FUGACITY};
pub use io::{read_polygons, write_polygons, PolygonRecord};
pub(crate) use bfacf::polygon_seed;

use std::ops::{Add, Neg, Sub};

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("empty vertex sequence")]
    Empty,
    #[error("polygon does not close: last vertex is not adjacent to the first")]
    NotClosed,
    #[error("vertices {0} and {1} are not one unit step apart")]
    NotUnitStep(usize, usize),
    #[error("vertex {0} is visited twice")]
    SelfIntersecting(usize),
    #[error("polygon length {0} is odd or below 4")]
    OddLength(usize),
    #[error("chain length {length} exceeds the cap {cap}")]
    LengthCapExceeded { length: usize, cap: usize },
    #[error("invalid chain parameters: {0}")]
    InvalidParams(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Point3 {
    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Self { x, y, z }
    }

    /// The six unit steps.
    pub const UNITS: [Point3; 6] = [
        Point3::new(1, 0, 0),
        Point3::new(-1, 0, 0),
        Point3::new(0, 1, 0),
        Point3::new(0, -1, 0),
        Point3::new(0, 0, 1),
        Point3::new(0, 0, -1),
    ];

    pub fn l1(self) -> i32 {
        self.x.abs() + self.y.abs() + self.z.abs()
    }

    pub fn is_unit(self) -> bool {
        self.l1() == 1
    }

    pub fn dot(self, o: Point3) -> i32 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    /// Packs the point into a hash key. Coordinates must fit in 21 bits.
    #[inline]
    pub(crate) fn key(self) -> u64 {
        const OFF: i64 = 1 << 20;
        let x = (self.x as i64 + OFF) as u64;
        let y = (self.y as i64 + OFF) as u64;
        let z = (self.z as i64 + OFF) as u64;
        (x << 42) | (y << 21) | z
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

/// Closed self-avoiding lattice polygon. The edge `i` runs from vertex
/// `i` to vertex `i + 1` (cyclically).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePolygon {
    vertices: Vec<Point3>,
}

impl LatticePolygon {
    pub fn vertices(&self) -> &[Point3] {
        &self.vertices
    }

    pub fn length(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex(&self, i: usize) -> Point3 {
        self.vertices[i % self.vertices.len()]
    }

    /// Unit direction of edge `i`.
    pub fn edge_dir(&self, i: usize) -> Point3 {
        self.vertex(i + 1) - self.vertex(i)
    }

    /// The unit square in the xy-plane.
    pub fn unit_square() -> Self {
        Self {
            vertices: vec![
                Point3::new(0, 0, 0),
                Point3::new(1, 0, 0),
                Point3::new(1, 1, 0),
                Point3::new(0, 1, 0),
            ],
        }
    }

    /// Axis-aligned `a x b` rectangle in the xy-plane, traversed
    /// counterclockwise from the origin.
    pub fn rectangle(a: i32, b: i32) -> Self {
        assert!(a >= 1 && b >= 1);
        let mut v = Vec::new();
        for x in 0..a {
            v.push(Point3::new(x, 0, 0));
        }
        for y in 0..b {
            v.push(Point3::new(a, y, 0));
        }
        for x in (1..=a).rev() {
            v.push(Point3::new(x, b, 0));
        }
        for y in (1..=b).rev() {
            v.push(Point3::new(0, y, 0));
        }
        Self { vertices: v }
    }

    /// Mirror image through the plane z = 0.
    pub fn mirrored(&self) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| Point3::new(p.x, p.y, -p.z)).collect(),
        }
    }

    pub fn translated(&self, by: Point3) -> Self {
        Self { vertices: self.vertices.iter().map(|&p| p + by).collect() }
    }

    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self { vertices: v }
    }

    /// Canonical form up to starting vertex and traversal direction:
    /// starts at the least vertex and continues toward its smaller
    /// neighbour.
    pub fn canonical(&self) -> Self {
        let n = self.vertices.len();
        let (start, _) = self.vertices.iter().enumerate().min_by_key(|(_, p)| **p).expect("non-empty");
        let fwd = self.vertices[(start + 1) % n];
        let back = self.vertices[(start + n - 1) % n];
        let v = if fwd <= back {
            (0..n).map(|k| self.vertices[(start + k) % n]).collect()
        } else {
            (0..n).map(|k| self.vertices[(start + n - k) % n]).collect()
        };
        Self { vertices: v }
    }

    /// Builds a polygon without validation; callers guarantee the invariants.
    pub(crate) fn from_vertices_unchecked(vertices: Vec<Point3>) -> Self {
        debug_assert!(validate_polygon(&vertices).is_ok());
        Self { vertices }
    }
}

/// Checks the polygon invariants. A repeated first vertex at the end is
/// accepted as an explicit closure and dropped.
pub fn validate_polygon(vertices: &[Point3]) -> Result<LatticePolygon, LatticeError> {
    let mut v = vertices.to_vec();
    if v.is_empty() {
        return Err(LatticeError::Empty);
    }
    if v.len() > 1 && v.first() == v.last() {
        v.pop();
    }
    let n = v.len();
    for i in 0..n.saturating_sub(1) {
        if !(v[i + 1] - v[i]).is_unit() {
            return Err(LatticeError::NotUnitStep(i, i + 1));
        }
    }
    let mut seen = FxHashSet::default();
    for (i, p) in v.iter().enumerate() {
        if !seen.insert(*p) {
            return Err(LatticeError::SelfIntersecting(i));
        }
    }
    if n < 2 || !(v[0] - v[n - 1]).is_unit() {
        return Err(LatticeError::NotClosed);
    }
    if n % 2 == 1 || n < 4 {
        return Err(LatticeError::OddLength(n));
    }
    Ok(LatticePolygon { vertices: v })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(i32, i32, i32)]) -> Vec<Point3> {
        v.iter().map(|&(x, y, z)| Point3::new(x, y, z)).collect()
    }

    #[test]
    fn unit_square_is_valid() {
        let p = validate_polygon(&pts(&[(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)])).unwrap();
        assert_eq!(p.length(), 4);
        assert_eq!(p, LatticePolygon::unit_square());
    }

    #[test]
    fn validation_errors() {
        assert_eq!(validate_polygon(&pts(&[(0, 0, 0), (2, 0, 0)])), Err(LatticeError::NotUnitStep(0, 1)));
        assert_eq!(
            validate_polygon(&pts(&[(0, 0, 0), (1, 0, 0), (0, 0, 0), (0, 1, 0)])),
            Err(LatticeError::SelfIntersecting(2))
        );
        assert_eq!(validate_polygon(&pts(&[(0, 0, 0), (1, 0, 0), (1, 1, 0)])), Err(LatticeError::NotClosed));
        assert_eq!(validate_polygon(&[]), Err(LatticeError::Empty));
        assert!(validate_polygon(&pts(&[(0, 0, 0), (1, 0, 0)])).is_err());
    }

    #[test]
    fn explicit_closure_is_dropped() {
        let p = validate_polygon(&pts(&[(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 0)])).unwrap();
        assert_eq!(p.length(), 4);
    }

    #[test]
    fn rectangle_and_canonical_form() {
        let r = LatticePolygon::rectangle(1, 3);
        assert_eq!(r.length(), 8);
        assert!(validate_polygon(r.vertices()).is_ok());
        let shifted = LatticePolygon::from_vertices_unchecked(
            r.vertices().iter().cycle().skip(3).take(8).copied().collect(),
        );
        assert_eq!(shifted.canonical(), r.canonical());
        assert_eq!(r.reversed().canonical(), r.canonical());
    }

    #[test]
    fn keys_are_distinct_for_neighbours() {
        let p = Point3::new(-3, 7, 2);
        let keys: FxHashSet<u64> = Point3::UNITS.iter().map(|&u| (p + u).key()).collect();
        assert_eq!(keys.len(), 6);
    }
}
