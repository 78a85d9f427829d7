//! Dense integer matrices, Smith normal form, determinant and signature.

use std::fmt;

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self { rows: r, cols: c, data: rows.concat() }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i128 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> =
            (0..n).map(|i| (0..n).map(|j| self[(i, j)] as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        sign * a[n - 1][n - 1]
    }

    /// Signature of a symmetric matrix, by exact congruence diagonalization.
    pub fn signature(&self) -> i32 {
        assert!(self.is_symmetric(), "signature of a non-symmetric matrix");
        let mut a: Vec<Vec<Frac>> =
            (0..self.rows).map(|i| (0..self.rows).map(|j| Frac::int(self[(i, j)] as i128)).collect()).collect();
        let mut sig = 0;
        while !a.is_empty() {
            let n = a.len();
            if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
                symmetric_swap(&mut a, 0, i);
            } else if let Some((i, j)) =
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
            {
                // row_i += row_j, col_i += col_j makes a_ii = 2 a_ij
                for k in 0..n {
                    let v = a[j][k];
                    a[i][k] = a[i][k].add(v);
                }
                for k in 0..n {
                    let v = a[k][j];
                    a[k][i] = a[k][i].add(v);
                }
                symmetric_swap(&mut a, 0, i);
            } else {
                break;
            }
            let p = a[0][0];
            sig += p.signum();
            let mut rest: Vec<Vec<Frac>> = Vec::with_capacity(n - 1);
            for i in 1..n {
                let f = a[i][0].div(p);
                rest.push((1..n).map(|j| a[i][j].sub(f.mul(a[0][j]))).collect());
            }
            a = rest;
        }
        sig
    }
}

fn symmetric_swap(a: &mut [Vec<Frac>], i: usize, j: usize) {
    if i == j {
        return;
    }
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Frac {
    n: i128,
    d: i128,
}

impl Frac {
    fn int(n: i128) -> Self {
        Frac { n, d: 1 }
    }

    fn new(n: i128, d: i128) -> Self {
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Frac { n: s * n / g, d: s * d / g }
    }

    fn is_zero(self) -> bool {
        self.n == 0
    }

    fn signum(self) -> i32 {
        self.n.signum() as i32
    }

    fn add(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d + o.n * self.d, self.d * o.d)
    }

    fn sub(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d - o.n * self.d, self.d * o.d)
    }

    fn mul(self, o: Frac) -> Frac {
        Frac::new(self.n * o.n, self.d * o.d)
    }

    fn div(self, o: Frac) -> Frac {
        Frac::new(self.n * o.d, self.d * o.n)
    }
}

/// Invariant factors `d1 | d2 | ...` (non-negative, `min(rows, cols)` of
/// them, zeros last) of an integer matrix.
pub fn smith_normal_form(m: &IntMatrix) -> Vec<i64> {
    let (r, c) = (m.rows(), m.cols());
    let mut a: Vec<Vec<i128>> = (0..r).map(|i| (0..c).map(|j| m[(i, j)] as i128).collect()).collect();
    let k = r.min(c);
    let mut diag = Vec::with_capacity(k);
    for t in 0..k {
        // pivot: smallest non-zero entry of the remaining block
        let Some((pi, pj)) = (t..r)
            .flat_map(|i| (t..c).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            diag.extend(std::iter::repeat(0).take(k - t));
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut done = true;
            for i in t + 1..r {
                let q = a[i][t] / a[t][t];
                if q != 0 {
                    for j in t..c {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    done = false;
                }
            }
            for j in t + 1..c {
                let q = a[t][j] / a[t][t];
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    done = false;
                }
            }
            if !done {
                // move the smallest remaining entry of row/column t to the pivot
                let best_row = (t..r).filter(|&i| a[i][t] != 0).min_by_key(|&i| a[i][t].abs()).unwrap_or(t);
                a.swap(t, best_row);
                let best_col = (t..c).filter(|&j| a[t][j] != 0).min_by_key(|&j| a[t][j].abs()).unwrap_or(t);
                for row in a.iter_mut() {
                    row.swap(t, best_col);
                }
                continue;
            }
            // divisibility: fold any row whose entries the pivot does not divide
            let p = a[t][t];
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    for j in t..c {
                        a[t][j] += a[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    let mut nonzero: Vec<i128> = diag.iter().copied().filter(|&d| d != 0).collect();
    let zeros = diag.len() - nonzero.len();
    nonzero.sort_unstable();
    let mut out: Vec<i64> = nonzero.into_iter().map(|d| d as i64).collect();
    out.extend(std::iter::repeat(0).take(zeros));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_cases() {
        assert_eq!(smith_normal_form(&IntMatrix::diagonal(&[2, 3])), vec![1, 6]);
        assert_eq!(smith_normal_form(&IntMatrix::zeros(0, 0)), Vec::<i64>::new());
        assert_eq!(smith_normal_form(&IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]])), vec![1, 3]);
        assert_eq!(smith_normal_form(&IntMatrix::diagonal(&[0, 4, 6])), vec![2, 12, 0]);
        assert_eq!(IntMatrix::from_rows(&[vec![2, -1], vec![-1, 2]]).det(), 3);
        assert_eq!(IntMatrix::zeros(0, 0).det(), 1);
    }

    #[test]
    fn signature_cases() {
        assert_eq!(IntMatrix::diagonal(&[3, -2, 0, 5]).signature(), 1);
        assert_eq!(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).signature(), 0);
        assert_eq!(IntMatrix::from_rows(&[vec![-2, 1], vec![1, -2]]).signature(), -2);
    }

    /// Determinant by permutation expansion.
    fn leibniz(m: &IntMatrix) -> i128 {
        fn rec(m: &IntMatrix, row: usize, used: &mut Vec<bool>) -> i128 {
            let n = m.rows();
            if row == n {
                return 1;
            }
            let mut acc = 0;
            let mut sign = 1;
            for j in 0..n {
                if used[j] {
                    continue;
                }
                used[j] = true;
                acc += sign * m[(row, j)] as i128 * rec(m, row + 1, used);
                used[j] = false;
                sign = -sign;
            }
            acc
        }
        rec(m, 0, &mut vec![false; m.rows()])
    }

    fn square(max: usize) -> impl Strategy<Value = IntMatrix> {
        (1..=max).prop_flat_map(|n| {
            proptest::collection::vec(proptest::collection::vec(-6i64..=6, n), n)
                .prop_map(|rows| IntMatrix::from_rows(&rows))
        })
    }

    proptest! {
        #[test]
        fn product_of_factors_is_abs_det(m in square(5)) {
            let f = smith_normal_form(&m);
            let prod: i128 = f.iter().map(|&d| d as i128).product();
            prop_assert_eq!(prod, leibniz(&m).abs());
            prop_assert_eq!(m.det(), leibniz(&m));
            for w in f.windows(2) {
                if w[1] != 0 {
                    prop_assert_eq!(w[1] % w[0], 0);
                }
            }
        }

        #[test]
        fn signature_matches_eigenvalues(m in square(5)) {
            let n = m.rows();
            let mut s = IntMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] = m[(i, j)] + m[(j, i)];
                }
            }
            // independent check: floating-point Jacobi eigenvalue iteration
            let sig = jacobi_signature(&s);
            prop_assert_eq!(s.signature(), sig);
        }
    }

    fn jacobi_signature(m: &IntMatrix) -> i32 {
        let n = m.rows();
        let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[(i, j)] as f64).collect()).collect();
        for _ in 0..100 {
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-14 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        (0..n).map(|i| if a[i][i] > 1e-7 { 1 } else if a[i][i] < -1e-7 { -1 } else { 0 }).sum()
    }
}
