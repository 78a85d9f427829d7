//! HOMFLY-PT polynomial by a memoized skein tree.
//!
//! Convention: `l P(L+) + l^-1 P(L-) + m P(L0) = 0` and `P(unknot) = 1`,
//! stored as a [`LaurentPoly2`] in `(l, m)`.
//!
//! Every component gets a base point at its lowest edge label, and the
//! components are ordered by that label. Walking the components in order,
//! a crossing first reached on its under-strand is switched (and smoothed)
//! until the diagram is descending, hence an unlink.

use rustc_hash::FxHashMap;

use super::{InvariantError, LaurentPoly2};
use crate::diagram::{PdCode, Sign};

/// Largest diagram the skein tree accepts.
pub const HOMFLY_CAP: usize = 16;

/// `(l + l^-1) m^-1` up to sign: the factor of a split unknotted component.
fn unlink_factor() -> LaurentPoly2 {
    LaurentPoly2::from_terms([((1, -1), -1), ((-1, -1), -1)])
}

fn unlink(components: u32) -> LaurentPoly2 {
    unlink_factor().pow(components.saturating_sub(1))
}

/// First crossing met on its under-strand when walking the components
/// from their base points.
pub(crate) fn first_ascending_crossing(d: &PdCode) -> Option<usize> {
    let ends = d.edge_ends();
    let mut seen = vec![false; d.crossing_count()];
    for &(_, (c, s)) in &ends {
        if !seen[c] {
            seen[c] = true;
            if s == 0 {
                return Some(c);
            }
        }
    }
    None
}

/// Switches crossing `i` in place, keeping every label.
pub(crate) fn switched_in_place(d: &PdCode, i: usize) -> PdCode {
    let mut cs = d.crossings().to_vec();
    cs[i] = cs[i].switched();
    PdCode::from_parts_unchecked(cs, d.free_loops())
}

struct Skein {
    memo: FxHashMap<PdCode, LaurentPoly2>,
}

impl Skein {
    /// HOMFLY of a diagram without free loops.
    fn eval(&mut self, d: &PdCode) -> LaurentPoly2 {
        debug_assert_eq!(d.free_loops(), 0);
        if let Some(p) = self.memo.get(d) {
            return p.clone();
        }
        let Some(c) = first_ascending_crossing(d) else {
            return unlink(d.n_components() as u32);
        };
        let cr = d.crossings()[c];
        let switched = reduce(&switched_in_place(d, c));
        let smoothed = reduce(&d.smooth_crossing(c, cr.oriented_smoothing()));
        let ps = self.eval_with_loops(&switched);
        let p0 = self.eval_with_loops(&smoothed);
        // L+: P = -l^-2 P(L-) - l^-1 m P(L0);  L-: P = -l^2 P(L+) - l m P(L0)
        let e = match cr.sign {
            Sign::Positive => -1,
            Sign::Negative => 1,
        };
        let p = &ps.mul_monomial(-1, 2 * e, 0) + &p0.mul_monomial(-1, e, 1);
        self.memo.insert(d.clone(), p.clone());
        p
    }

    fn eval_with_loops(&mut self, d: &PdCode) -> LaurentPoly2 {
        let loops = d.free_loops();
        if d.crossing_count() == 0 {
            return unlink(loops);
        }
        let core = if loops == 0 {
            self.eval(d)
        } else {
            let stripped = PdCode::from_parts_unchecked(d.crossings().to_vec(), 0);
            self.eval(&stripped)
        };
        &core * &unlink_factor().pow(loops)
    }
}

fn reduce(d: &PdCode) -> PdCode {
    crate::diagram::reduce_r1_r2(d)
}

/// HOMFLY-PT polynomial of an oriented link diagram.
pub fn homfly(d: &PdCode) -> Result<LaurentPoly2, InvariantError> {
    if d.crossing_count() > HOMFLY_CAP {
        return Err(InvariantError::TooManyCrossings { crossings: d.crossing_count(), cap: HOMFLY_CAP });
    }
    let mut sk = Skein { memo: FxHashMap::default() };
    Ok(sk.eval_with_loops(&reduce(d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::samples::*;

    fn right_trefoil_homfly() -> LaurentPoly2 {
        // -2 l^-2 - l^-4 + l^-2 m^2
        LaurentPoly2::from_terms([((-2, 0), -2), ((-4, 0), -1), ((-2, 2), 1)])
    }

    #[test]
    fn unknot_and_unlink() {
        assert_eq!(homfly(&PdCode::unknot()).unwrap(), LaurentPoly2::one());
        assert_eq!(homfly(&kinked_unknot()).unwrap(), LaurentPoly2::one());
        assert_eq!(homfly(&PdCode::unlink(2)).unwrap(), unlink_factor());
    }

    #[test]
    fn trefoil_and_mirror() {
        let t = right_trefoil();
        let p = homfly(&t).unwrap();
        assert_eq!(p, right_trefoil_homfly());
        assert_eq!(homfly(&t.mirror()).unwrap(), p.mirror());
        assert_ne!(p, p.mirror());
    }

    #[test]
    fn figure_eight_is_amphichiral() {
        let p = homfly(&figure_eight()).unwrap();
        assert_eq!(p, p.mirror());
        assert_eq!(homfly(&figure_eight().reversed()).unwrap(), p);
    }

    #[test]
    fn connected_sum_multiplies() {
        let t = right_trefoil();
        let f = figure_eight();
        let lhs = homfly(&t.connected_sum(&f)).unwrap();
        let rhs = &homfly(&t).unwrap() * &homfly(&f).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn cap_is_enforced() {
        let mut d = right_trefoil();
        for _ in 0..5 {
            d = d.connected_sum(&right_trefoil());
        }
        assert!(matches!(homfly(&d), Err(InvariantError::TooManyCrossings { .. })));
    }
}
