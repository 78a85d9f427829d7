//! The Brandt-Lickorish-Millett-Ho polynomial `Q(x)` of unoriented links.
//!
//! `Q(L+) + Q(L-) = x (Q(L0) + Q(Linf))`, `Q(unknot) = 1`, and a split
//! unknotted component multiplies by `2x^-1 - 1`.

use rustc_hash::FxHashMap;

use super::homfly::{first_ascending_crossing, switched_in_place};
use super::jones::{exact_log, SqrtPower};
use super::{InvariantError, LaurentPoly};
use crate::diagram::{reduce_r1_r2, PdCode};

pub const Q_CAP: usize = 12;

fn mu() -> LaurentPoly {
    LaurentPoly::from_terms([(-1, 2), (0, -1)])
}

struct QSkein {
    memo: FxHashMap<PdCode, LaurentPoly>,
}

impl QSkein {
    fn eval(&mut self, d: &PdCode) -> LaurentPoly {
        let loops = d.free_loops();
        if d.crossing_count() == 0 {
            return mu().pow(loops.saturating_sub(1));
        }
        if loops > 0 {
            let core = PdCode::from_parts_unchecked(d.crossings().to_vec(), 0);
            return &self.eval(&core) * &mu().pow(loops);
        }
        if let Some(q) = self.memo.get(d) {
            return q.clone();
        }
        let q = match first_ascending_crossing(d) {
            None => mu().pow(d.n_components() as u32 - 1),
            Some(c) => {
                let cr = d.crossings()[c];
                let sw = self.eval(&reduce_r1_r2(&switched_in_place(d, c)));
                let s0 = self.eval(&reduce_r1_r2(&d.smooth_crossing(c, cr.oriented_smoothing())));
                let s1 = self.eval(&reduce_r1_r2(&d.smooth_crossing(c, cr.unoriented_smoothing())));
                &(&(&s0 + &s1) * &LaurentPoly::monomial(1, 1)) - &sw
            }
        };
        self.memo.insert(d.clone(), q.clone());
        q
    }
}

/// Q-polynomial of a link diagram (orientation is ignored).
pub fn q_polynomial(d: &PdCode) -> Result<LaurentPoly, InvariantError> {
    if d.crossing_count() > Q_CAP {
        return Err(InvariantError::TooManyCrossings { crossings: d.crossing_count(), cap: Q_CAP });
    }
    let mut sk = QSkein { memo: FxHashMap::default() };
    Ok(sk.eval(&reduce_r1_r2(d)))
}

/// `a + b phi` with `phi^2 = phi + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct ZPhi(i64, i64);

impl ZPhi {
    fn mul(self, o: ZPhi) -> ZPhi {
        ZPhi(self.0 * o.0 + self.1 * o.1, self.0 * o.1 + self.1 * o.0 + self.1 * o.1)
    }

    fn pow(self, n: u32) -> ZPhi {
        (0..n).fold(ZPhi(1, 0), |acc, _| acc.mul(self))
    }
}

/// `|Q(-phibar)|` with `-phibar = (sqrt5 - 1)/2 = phi^-1`, computed in
/// `Z[phi]`; it must be a power of `sqrt(5)`.
pub fn q_abs_at_phibar(q: &LaurentPoly) -> Result<SqrtPower, InvariantError> {
    let x = ZPhi(-1, 1);
    let x_inv = ZPhi(0, 1);
    let mut v = ZPhi(0, 0);
    for (e, c) in q.terms() {
        let p = if e >= 0 { x.pow(e as u32) } else { x_inv.pow((-e) as u32) };
        v = ZPhi(v.0 + c * p.0, v.1 + c * p.1);
    }
    let sq = v.mul(v);
    if sq.1 != 0 || sq.0 <= 0 {
        return Err(InvariantError::NotPowerOfSqrt5);
    }
    let exponent = exact_log(sq.0 as u64, 5).ok_or(InvariantError::NotPowerOfSqrt5)?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    Ok(SqrtPower { modulus: (v.0 as f64 + v.1 as f64 * phi).abs(), exponent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::samples::*;

    #[test]
    fn unknot_and_unlink() {
        assert_eq!(q_polynomial(&PdCode::unknot()).unwrap(), LaurentPoly::one());
        assert_eq!(q_polynomial(&kinked_unknot()).unwrap(), LaurentPoly::one());
        assert_eq!(q_polynomial(&PdCode::unlink(2)).unwrap(), mu());
    }

    #[test]
    fn trefoil_and_figure_eight() {
        let t = q_polynomial(&right_trefoil()).unwrap();
        assert_eq!(t, LaurentPoly::from_terms([(0, -3), (1, 2), (2, 2)]));
        assert_eq!(q_polynomial(&right_trefoil().mirror()).unwrap(), t);
        let f = q_polynomial(&figure_eight()).unwrap();
        assert_eq!(f, LaurentPoly::from_terms([(0, -3), (1, -2), (2, 4), (3, 2)]));
        assert_eq!(q_abs_at_phibar(&t).unwrap().exponent, 0);
        let e = q_abs_at_phibar(&f).unwrap();
        assert_eq!(e.exponent, 1);
        assert!((e.modulus - 5f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn golden_ring_arithmetic() {
        let phi = ZPhi(0, 1);
        assert_eq!(phi.mul(phi), ZPhi(1, 1));
        // phi (phi - 1) = 1
        assert_eq!(phi.mul(ZPhi(-1, 1)), ZPhi(1, 0));
        // (2 phi - 1)^2 = 5
        assert_eq!(ZPhi(-1, 2).pow(2), ZPhi(5, 0));
    }
}
