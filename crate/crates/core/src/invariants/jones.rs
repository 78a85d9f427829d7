//! Jones polynomial as a specialization of HOMFLY-PT, and its evaluations.
//!
//! Jones polynomials are stored in the variable `s = t^(1/2)`, so an
//! exponent `e` stands for `t^(e/2)`.

use super::{InvariantError, LaurentPoly, LaurentPoly2};

/// `V(t) = P(l = i t^-1, m = i (t^-1/2 - t^1/2))`.
pub fn jones_from_homfly(h: &LaurentPoly2) -> LaurentPoly {
    let max_neg = h.terms().map(|((_, b), _)| (-b).max(0)).max().unwrap_or(0);
    // d = s^-1 - s
    let d = LaurentPoly::from_terms([(-1, 1), (1, -1)]);
    let mut acc = LaurentPoly::zero();
    for ((a, b), c) in h.terms() {
        let phase = a + b;
        assert!(phase % 2 == 0, "HOMFLY term l^{a} m^{b} has odd total degree");
        let sign = if (phase / 2) % 2 == 0 { 1 } else { -1 };
        // i^(a+b) t^-a d^b, multiplied through by d^max_neg
        let term = LaurentPoly::monomial(sign * c, -2 * a);
        acc += &(&term * &d.pow((b + max_neg) as u32));
    }
    // divide by d^max_neg = (-s^-1)^max_neg (s-1)^max_neg (s+1)^max_neg
    for _ in 0..max_neg {
        acc = acc.shift(1).scale(-1);
        acc = acc.div_linear(1).and_then(|q| q.div_linear(-1)).expect("Jones specialization is exact");
    }
    acc
}

/// Modulus of a Jones value in the form `sqrt(3)^exponent`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SqrtPower {
    pub modulus: f64,
    pub exponent: u32,
}

/// Element of `Z[z]`, `z = exp(i pi/6)`, in the basis `1, z, z^2, z^3`
/// (`z^4 = z^2 - 1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cyclo12([i64; 4]);

impl Cyclo12 {
    fn power(k: i32) -> Cyclo12 {
        let mut v = [1i64, 0, 0, 0];
        for _ in 0..k.rem_euclid(12) {
            // multiply by z: shift, then reduce z^4 = z^2 - 1
            let top = v[3];
            v = [-top, v[0], v[1] + top, v[2]];
        }
        Cyclo12(v)
    }

    fn mul(self, o: Cyclo12) -> Cyclo12 {
        let mut acc = Cyclo12([0; 4]);
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let p = Cyclo12::power(i as i32);
            let q = p.mul_linear(o);
            for k in 0..4 {
                acc.0[k] += a * q.0[k];
            }
        }
        acc
    }

    // multiply a power-of-z element by an arbitrary one
    fn mul_linear(self, o: Cyclo12) -> Cyclo12 {
        let mut acc = Cyclo12([0; 4]);
        for (j, &b) in o.0.iter().enumerate() {
            if b == 0 {
                continue;
            }
            let mut shifted = self;
            for _ in 0..j {
                let v = shifted.0;
                shifted = Cyclo12([-v[3], v[0], v[1] + v[3], v[2]]);
            }
            for k in 0..4 {
                acc.0[k] += b * shifted.0[k];
            }
        }
        acc
    }
}

fn eval_cyclo(v: &LaurentPoly, conjugate: bool) -> Cyclo12 {
    let mut acc = Cyclo12([0; 4]);
    for (e, c) in v.terms() {
        let p = Cyclo12::power(if conjugate { -e } else { e });
        for k in 0..4 {
            acc.0[k] += c * p.0[k];
        }
    }
    acc
}

/// `|V(exp(i pi/3))|` computed exactly; it must be a power of `sqrt(3)`.
pub fn jones_abs_at_omega(v: &LaurentPoly) -> Result<SqrtPower, InvariantError> {
    let norm = eval_cyclo(v, false).mul(eval_cyclo(v, true));
    let [n, rest @ ..] = norm.0;
    if rest != [0, 0, 0] || n <= 0 {
        return Err(InvariantError::NotPowerOfSqrt3);
    }
    let exponent = exact_log(n as u64, 3).ok_or(InvariantError::NotPowerOfSqrt3)?;
    Ok(SqrtPower { modulus: (n as f64).sqrt(), exponent })
}

pub(crate) fn exact_log(mut n: u64, base: u64) -> Option<u32> {
    let mut k = 0;
    while n > 1 {
        if n % base != 0 {
            return None;
        }
        n /= base;
        k += 1;
    }
    (n == 1).then_some(k)
}

/// `V'(-1)` with respect to `t`, for polynomials in integral powers of `t`.
pub fn jones_derivative_at_minus_one(v: &LaurentPoly) -> Result<i64, InvariantError> {
    let mut acc = 0i64;
    for (e, c) in v.terms() {
        if e % 2 != 0 {
            return Err(InvariantError::HalfIntegerExponent);
        }
        let k = e / 2;
        // d/dt t^k = k t^(k-1), and (-1)^(k-1)
        let sign = if (k - 1).rem_euclid(2) == 0 { 1 } else { -1 };
        acc += c * k as i64 * sign;
    }
    Ok(acc)
}
