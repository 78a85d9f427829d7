//! Exact knot and link invariants: HOMFLY-PT, Jones, Q, and the
//! Goeritz-matrix family (determinant, signature, Arf, homology of the
//! double branched cover).

pub mod goeritz;
pub mod homfly;
pub mod jones;
pub mod poly;
pub mod qpoly;
pub mod snf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{reduce_r1_r2, PdCode};

pub use goeritz::{goeritz, goeritz_with, Shading};
pub use homfly::{homfly, HOMFLY_CAP};
pub use jones::{jones_abs_at_omega, jones_derivative_at_minus_one, jones_from_homfly, SqrtPower};
pub use poly::{LaurentPoly, LaurentPoly2};
pub use qpoly::{q_abs_at_phibar, q_polynomial, Q_CAP};
pub use snf::{smith_normal_form, IntMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("diagram has {crossings} crossings, above the cap of {cap}")]
    TooManyCrossings { crossings: usize, cap: usize },
    #[error("|V(omega)| is not a power of sqrt(3)")]
    NotPowerOfSqrt3,
    #[error("|Q(-phibar)| is not a power of sqrt(5)")]
    NotPowerOfSqrt5,
    #[error("polynomial has half-integer exponents")]
    HalfIntegerExponent,
    #[error("diagram is disconnected")]
    DisconnectedDiagram,
}

/// Classical invariants derived from the Goeritz matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSet {
    pub det: u64,
    pub sigma: i32,
    /// Only defined for knots.
    pub arf: Option<u8>,
    pub e2: u32,
    pub delta3: u32,
    pub rank5: u32,
    pub n_components: u32,
}

/// Arf invariant of a knot from its determinant.
pub fn arf_from_det(det: u64) -> u8 {
    match det % 8 {
        1 | 7 => 0,
        3 | 5 => 1,
        r => panic!("knot determinant {det} is even (residue {r})"),
    }
}

/// Determinant, signature, Arf, and the ranks of `H1` of the double
/// branched cover, computed piece by piece on split diagrams.
pub fn invariant_set(d: &PdCode) -> Result<InvariantSet, InvariantError> {
    if d.crossing_count() > HOMFLY_CAP {
        return Err(InvariantError::TooManyCrossings { crossings: d.crossing_count(), cap: HOMFLY_CAP });
    }
    let n_components = d.n_components() as u32;
    let reduced = reduce_r1_r2(d);
    let pieces = reduced.split_pieces();
    let n_pieces = pieces.len() + reduced.free_loops() as usize;
    let mut sigma = 0i32;
    let mut det = 1u64;
    let mut factors: Vec<i64> = Vec::new();
    for piece in &pieces {
        let (g, correction) = goeritz(piece)?;
        sigma += g.signature() - correction as i32;
        det *= g.det().unsigned_abs() as u64;
        factors.extend(smith_normal_form(&g));
    }
    // each extra split piece adds a free Z summand
    if n_pieces > 1 {
        det = 0;
        factors.extend(std::iter::repeat(0).take(n_pieces - 1));
    }
    let count = |p: &dyn Fn(i64) -> bool| factors.iter().filter(|&&f| p(f)).count() as u32;
    let e2 = count(&|f| f.abs() != 1);
    let delta3 = count(&|f| f % 3 == 0);
    let rank5 = count(&|f| f % 5 == 0);
    let arf = (n_components == 1).then(|| arf_from_det(det));
    Ok(InvariantSet { det, sigma, arf, e2, delta3, rank5, n_components })
}
