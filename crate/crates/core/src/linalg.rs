//! Dense kernels: column-pivoted QR least squares, LU with partial pivoting,
//! and eigenvalues of upper Hessenberg matrices.
//!
//! Sizes here are small (tens of columns, a few hundred unknowns for coarse
//! solves, Hessenberg dimensions up to a few hundred), so the kernels are
//! self-contained. Pivot ties break toward the smallest index, which keeps
//! every factorization deterministic for identical inputs.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Row-major dense real matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Self { rows: r, cols: c, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.iter())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (top, bottom) = self.data.split_at_mut(hi * c);
        top[lo * c..(lo + 1) * c].swap_with_slice(&mut bottom[..c]);
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

/// Column-pivoted Householder QR factorization A P = Q R.
///
/// Reflectors are stored below the diagonal of `fac` (with implicit unit
/// leading entry), R on and above it.
#[derive(Clone, Debug)]
pub struct PivotedQr {
    m: usize,
    p: usize,
    fac: DenseMatrix,
    tau: Vec<f64>,
    perm: Vec<usize>,
    rank: usize,
}

/// Relative pivot threshold used for numerical rank decisions.
pub const RANK_TOL: f64 = 1e-10;

pub fn qr_pivoted(a: &DenseMatrix) -> PivotedQr {
    let (m, p) = (a.rows(), a.cols());
    assert!(m >= p, "QR requires rows >= cols ({m} x {p})");
    let mut fac = a.clone();
    let mut tau = vec![0.0; p];
    let mut perm: Vec<usize> = (0..p).collect();

    for j in 0..p {
        // Exact trailing column norms each step; sizes are small and this
        // avoids downdating drift.
        let mut best = j;
        let mut best_norm = -1.0;
        for c in j..p {
            let mut s = 0.0;
            for i in j..m {
                let v = fac.at(i, c);
                s += v * v;
            }
            if s > best_norm {
                best_norm = s;
                best = c;
            }
        }
        if best != j {
            fac.swap_cols(j, best);
            perm.swap(j, best);
        }

        let mut norm = 0.0;
        for i in j..m {
            let v = fac.at(i, j);
            norm += v * v;
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            tau[j] = 0.0;
            continue;
        }
        let alpha = fac.at(j, j);
        let beta = if alpha >= 0.0 { -norm } else { norm };
        tau[j] = (beta - alpha) / beta;
        let scale = 1.0 / (alpha - beta);
        for i in j + 1..m {
            fac.set(i, j, fac.at(i, j) * scale);
        }
        fac.set(j, j, beta);

        for c in j + 1..p {
            let mut w = fac.at(j, c);
            for i in j + 1..m {
                w += fac.at(i, j) * fac.at(i, c);
            }
            w *= tau[j];
            fac.set(j, c, fac.at(j, c) - w);
            for i in j + 1..m {
                fac.set(i, c, fac.at(i, c) - w * fac.at(i, j));
            }
        }
    }

    let r00 = fac.at(0, 0).abs();
    let mut rank = 0;
    for j in 0..p {
        if fac.at(j, j).abs() > RANK_TOL * r00 {
            rank = j + 1;
        } else {
            break;
        }
    }

    PivotedQr {
        m,
        p,
        fac,
        tau,
        perm,
        rank,
    }
}

impl PivotedQr {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn cols(&self) -> usize {
        self.p
    }

    fn apply_reflector(&self, j: usize, y: &mut [f64]) {
        if self.tau[j] == 0.0 {
            return;
        }
        let mut w = y[j];
        for i in j + 1..self.m {
            w += self.fac.at(i, j) * y[i];
        }
        w *= self.tau[j];
        y[j] -= w;
        for i in j + 1..self.m {
            y[i] -= w * self.fac.at(i, j);
        }
    }

    /// y := Q^T y.
    pub fn q_transpose_apply(&self, y: &mut [f64]) {
        assert_eq!(y.len(), self.m);
        for j in 0..self.p {
            self.apply_reflector(j, y);
        }
    }

    /// y := Q y. Reflectors are symmetric, so this is the reverse sweep.
    pub fn q_apply(&self, y: &mut [f64]) {
        assert_eq!(y.len(), self.m);
        for j in (0..self.p).rev() {
            self.apply_reflector(j, y);
        }
    }

    /// Minimum-norm-ish basic least-squares solution of min ||A x - b||.
    /// Columns beyond the numerical rank receive zero.
    pub fn least_squares(&self, b: &[f64]) -> Vec<f64> {
        let mut y = b.to_vec();
        self.q_transpose_apply(&mut y);
        let k = self.rank;
        for j in (0..k).rev() {
            let mut s = y[j];
            for c in j + 1..k {
                s -= self.fac.at(j, c) * y[c];
            }
            y[j] = s / self.fac.at(j, j);
        }
        let mut x = vec![0.0; self.p];
        for j in 0..k {
            x[self.perm[j]] = y[j];
        }
        x
    }

    /// Row of the pseudoinverse action: returns s with s^T = v^T A^+, i.e.
    /// the coefficients such that s . d equals v . x_ls where x_ls solves
    /// min ||A x - d||. Requires full column rank: one triangular solve and
    /// one product with Q.
    pub fn dual_row(&self, v: &[f64]) -> Result<Vec<f64>> {
        assert_eq!(v.len(), self.p);
        if self.rank < self.p {
            return Err(Error::RankDeficient {
                rank: self.rank,
                cols: self.p,
            });
        }
        // w = P^T v, then solve R^T y = w (forward substitution).
        let mut y = vec![0.0; self.p];
        for j in 0..self.p {
            y[j] = v[self.perm[j]];
        }
        for j in 0..self.p {
            let mut s = y[j];
            for r in 0..j {
                s -= self.fac.at(r, j) * y[r];
            }
            y[j] = s / self.fac.at(j, j);
        }
        let mut s = vec![0.0; self.m];
        s[..self.p].copy_from_slice(&y);
        self.q_apply(&mut s);
        Ok(s)
    }
}

/// Column-wise least squares for multiple right-hand sides.
/// Returns the solution matrix and the numerical rank of A.
pub fn lsq_solve_pivoted(a: &DenseMatrix, b: &DenseMatrix) -> (DenseMatrix, usize) {
    assert_eq!(a.rows(), b.rows());
    let qr = qr_pivoted(a);
    let mut x = DenseMatrix::zeros(a.cols(), b.cols());
    let mut col = vec![0.0; a.rows()];
    for q in 0..b.cols() {
        for i in 0..a.rows() {
            col[i] = b.at(i, q);
        }
        let xc = qr.least_squares(&col);
        for (j, v) in xc.iter().enumerate() {
            x.set(j, q, *v);
        }
    }
    (x, qr.rank())
}

/// LU factorization with partial pivoting.
#[derive(Clone, Debug)]
pub struct LuFactors {
    n: usize,
    lu: DenseMatrix,
    piv: Vec<usize>,
}

pub fn lu_factor(a: DenseMatrix) -> Result<LuFactors> {
    let n = a.rows();
    assert_eq!(n, a.cols(), "LU requires a square matrix");
    let norm = a.norm_inf();
    let tol = 1e-14 * norm;
    let mut lu = a;
    let mut piv = Vec::with_capacity(n);

    for k in 0..n {
        let mut p = k;
        let mut best = lu.at(k, k).abs();
        for i in k + 1..n {
            let v = lu.at(i, k).abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= tol {
            return Err(Error::Singular { pivot: best });
        }
        lu.swap_rows(k, p);
        piv.push(p);

        let inv = 1.0 / lu.at(k, k);
        let cols = lu.cols;
        let (top, bottom) = lu.data.split_at_mut((k + 1) * cols);
        let row_k = &top[k * cols..(k + 1) * cols];
        for i in k + 1..n {
            let row_i = &mut bottom[(i - k - 1) * cols..(i - k) * cols];
            let l = row_i[k] * inv;
            row_i[k] = l;
            if l != 0.0 {
                for (ri, rk) in row_i[k + 1..].iter_mut().zip(&row_k[k + 1..]) {
                    *ri -= l * rk;
                }
            }
        }
    }

    Ok(LuFactors { n, lu, piv })
}

impl LuFactors {
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        assert_eq!(b.len(), self.n);
        let mut x = b.to_vec();
        for k in 0..self.n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            if xk != 0.0 {
                for i in k + 1..self.n {
                    x[i] -= self.lu.at(i, k) * xk;
                }
            }
        }
        for k in (0..self.n).rev() {
            let mut s = x[k];
            for j in k + 1..self.n {
                s -= self.lu.at(k, j) * x[j];
            }
            x[k] = s / self.lu.at(k, k);
        }
        x
    }
}

/// Factor-and-solve convenience for one right-hand side.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    Ok(lu_factor(a.clone())?.solve(b))
}

fn eig_2x2(a: f64, b: f64, c: f64, d: f64) -> [Complex64; 2] {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = tr * tr / 4.0 - det;
    if disc >= 0.0 {
        let s = disc.sqrt();
        [
            Complex64::new(tr / 2.0 + s, 0.0),
            Complex64::new(tr / 2.0 - s, 0.0),
        ]
    } else {
        let s = (-disc).sqrt();
        [
            Complex64::new(tr / 2.0, s),
            Complex64::new(tr / 2.0, -s),
        ]
    }
}

struct Reflector3 {
    v: [f64; 3],
    tau: f64,
}

fn householder3(x: f64, y: f64, z: f64) -> Option<Reflector3> {
    let scale = x.abs() + y.abs() + z.abs();
    if scale == 0.0 {
        return None;
    }
    let (xs, ys, zs) = (x / scale, y / scale, z / scale);
    let norm = (xs * xs + ys * ys + zs * zs).sqrt();
    let alpha = if xs >= 0.0 { -norm } else { norm };
    let v0 = xs - alpha;
    let vnorm2 = v0 * v0 + ys * ys + zs * zs;
    if vnorm2 == 0.0 {
        return None;
    }
    Some(Reflector3 {
        v: [v0, ys, zs],
        tau: 2.0 / vnorm2,
    })
}

/// Eigenvalues of a real upper Hessenberg matrix via the implicit
/// double-shift QR iteration with deflation. Entries below the first
/// subdiagonal are ignored.
pub fn hessenberg_eigs(h: &DenseMatrix) -> Result<Vec<Complex64>> {
    let n = h.rows();
    assert_eq!(n, h.cols(), "Hessenberg eigenvalues require a square matrix");
    let mut a = h.clone();
    // Enforce Hessenberg structure so stray entries cannot contaminate sweeps.
    for i in 0..n {
        for j in 0..i.saturating_sub(1) {
            a.set(i, j, 0.0);
        }
    }
    let mut eigs = Vec::with_capacity(n);
    if n == 0 {
        return Ok(eigs);
    }
    let eps = f64::EPSILON;
    let max_sweeps = 100 * n;
    let mut total_sweeps = 0usize;
    let mut hi = n;
    let mut stalled = 0usize;

    while hi > 0 {
        // Deflate tiny subdiagonals and locate the active block [lo, hi).
        let mut lo = 0;
        for i in (1..hi).rev() {
            let s = a.at(i - 1, i - 1).abs() + a.at(i, i).abs();
            let s = if s == 0.0 { a.norm_inf() } else { s };
            if a.at(i, i - 1).abs() <= eps * s {
                a.set(i, i - 1, 0.0);
                lo = i;
                break;
            }
        }
        let bs = hi - lo;
        if bs == 1 {
            eigs.push(Complex64::new(a.at(lo, lo), 0.0));
            hi -= 1;
            stalled = 0;
            continue;
        }
        if bs == 2 {
            let e = eig_2x2(
                a.at(lo, lo),
                a.at(lo, lo + 1),
                a.at(lo + 1, lo),
                a.at(lo + 1, lo + 1),
            );
            eigs.extend_from_slice(&e);
            hi -= 2;
            stalled = 0;
            continue;
        }

        total_sweeps += 1;
        stalled += 1;
        if total_sweeps > max_sweeps {
            return Err(Error::NoConvergence { sweeps: total_sweeps });
        }

        let m = hi - 1;
        let (s_tr, s_det) = if stalled % 16 == 0 {
            // Exceptional shift to break symmetric stalls.
            let w = a.at(m, m - 1).abs() + a.at(m - 1, m - 2).abs();
            (1.5 * w + a.at(m, m), w * w)
        } else {
            (
                a.at(m - 1, m - 1) + a.at(m, m),
                a.at(m - 1, m - 1) * a.at(m, m) - a.at(m - 1, m) * a.at(m, m - 1),
            )
        };

        // First column of (A - s1)(A - s2) e1 on the active block.
        let h11 = a.at(lo, lo);
        let h12 = a.at(lo, lo + 1);
        let h21 = a.at(lo + 1, lo);
        let h22 = a.at(lo + 1, lo + 1);
        let mut x = h11 * h11 + h12 * h21 - s_tr * h11 + s_det;
        let mut y = h21 * (h11 + h22 - s_tr);
        let mut z = h21 * a.at(lo + 2, lo + 1);

        for k in lo..hi - 2 {
            if let Some(r) = householder3(x, y, z) {
                let last = (k + 2).min(hi - 1);
                let nvec = last - k + 1; // 3, or 2 at the block tail
                let cs = if k > lo { k - 1 } else { lo };
                // Left update: rows k..=last over columns cs..hi.
                for j in cs..hi {
                    let mut w = 0.0;
                    for (t, vi) in r.v.iter().enumerate().take(nvec) {
                        w += vi * a.at(k + t, j);
                    }
                    w *= r.tau;
                    for (t, vi) in r.v.iter().enumerate().take(nvec) {
                        a.set(k + t, j, a.at(k + t, j) - w * vi);
                    }
                }
                // Right update: columns k..=last over rows lo..min(hi, k+4).
                let re = hi.min(k + 4);
                for i in lo..re {
                    let mut w = 0.0;
                    for (t, vi) in r.v.iter().enumerate().take(nvec) {
                        w += vi * a.at(i, k + t);
                    }
                    w *= r.tau;
                    for (t, vi) in r.v.iter().enumerate().take(nvec) {
                        a.set(i, k + t, a.at(i, k + t) - w * vi);
                    }
                }
            }
            x = a.at(k + 1, k);
            if k + 2 < hi {
                y = a.at(k + 2, k);
            }
            z = if k + 3 < hi { a.at(k + 3, k) } else { 0.0 };
        }

        // Final two-row reflector annihilates the trailing bulge entry
        // a[hi-1][hi-3] and restores Hessenberg form.
        let k = hi - 2;
        let norm = (x * x + y * y).sqrt();
        if norm > 0.0 {
            let alpha = if x >= 0.0 { -norm } else { norm };
            let v = [x - alpha, y];
            let vn2 = v[0] * v[0] + v[1] * v[1];
            if vn2 > 0.0 {
                let tau = 2.0 / vn2;
                for j in k - 1..hi {
                    let w = tau * (v[0] * a.at(k, j) + v[1] * a.at(k + 1, j));
                    a.set(k, j, a.at(k, j) - w * v[0]);
                    a.set(k + 1, j, a.at(k + 1, j) - w * v[1]);
                }
                for i in lo..hi {
                    let w = tau * (v[0] * a.at(i, k) + v[1] * a.at(i, k + 1));
                    a.set(i, k, a.at(i, k) - w * v[0]);
                    a.set(i, k + 1, a.at(i, k + 1) - w * v[1]);
                }
            }
        }
    }

    Ok(eigs)
}

/// Reduce a square matrix to upper Hessenberg form by orthogonal similarity.
/// Used by spectrum checks and test oracles.
pub fn hessenberg_reduce(a: &DenseMatrix) -> DenseMatrix {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        // Householder annihilating column k below row k+1.
        let mut norm = 0.0;
        for i in k + 1..n {
            norm += h.at(i, k) * h.at(i, k);
        }
        let norm = norm.sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if h.at(k + 1, k) >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; n];
        v[k + 1] = h.at(k + 1, k) - alpha;
        for i in k + 2..n {
            v[i] = h.at(i, k);
        }
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;
        // H := P H P with P = I - tau v v^T.
        for j in 0..n {
            let mut w = 0.0;
            for i in k + 1..n {
                w += v[i] * h.at(i, j);
            }
            w *= tau;
            for i in k + 1..n {
                h.set(i, j, h.at(i, j) - w * v[i]);
            }
        }
        for i in 0..n {
            let mut w = 0.0;
            for j in k + 1..n {
                w += v[j] * h.at(i, j);
            }
            w *= tau;
            for j in k + 1..n {
                h.set(i, j, h.at(i, j) - w * v[j]);
            }
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng_next(state: &mut u64) -> f64 {
        // splitmix64 mapped to [-1, 1); deterministic test fixtures.
        *state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = *state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
    }

    #[test]
    fn lsq_orthogonal_matrix_transposes() {
        // A square orthogonal (a rotation), so X = A^T B.
        let c = 0.6_f64;
        let s = 0.8_f64;
        let a = DenseMatrix::from_rows(&[vec![c, -s], vec![s, c]]);
        let b = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, -1.0]]);
        let (x, rank) = lsq_solve_pivoted(&a, &b);
        assert_eq!(rank, 2);
        for i in 0..2 {
            for j in 0..2 {
                let expect = a.at(0, i) * b.at(0, j) + a.at(1, i) * b.at(1, j);
                assert!((x.at(i, j) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn lsq_recovers_polynomial_coefficients() {
        // Overdetermined Vandermonde fit of exact samples from known
        // coefficients; residual must be at the round-off floor.
        let coeffs = [0.7, -1.3, 0.25, 2.0];
        let m = 12;
        let mut rows = Vec::new();
        let mut b = Vec::new();
        for i in 0..m {
            let t = -1.0 + 2.0 * i as f64 / (m - 1) as f64;
            rows.push(vec![1.0, t, t * t, t * t * t]);
            b.push(coeffs[0] + coeffs[1] * t + coeffs[2] * t * t + coeffs[3] * t * t * t);
        }
        let a = DenseMatrix::from_rows(&rows);
        let bm = DenseMatrix::from_rows(&b.iter().map(|v| vec![*v]).collect::<Vec<_>>());
        let (x, rank) = lsq_solve_pivoted(&a, &bm);
        assert_eq!(rank, 4);
        let mut resid: f64 = 0.0;
        for i in 0..m {
            let fit: f64 = (0..4).map(|j| a.at(i, j) * x.at(j, 0)).sum();
            resid = resid.max((fit - b[i]).abs());
        }
        assert!(resid <= 1e-10, "residual {resid}");
        for j in 0..4 {
            assert!((x.at(j, 0) - coeffs[j]).abs() < 1e-9);
        }
    }

    #[test]
    fn lsq_duplicate_column_drops_rank() {
        let mut rows = Vec::new();
        let mut state = 7u64;
        for _ in 0..8 {
            let a = rng_next(&mut state);
            let b = rng_next(&mut state);
            rows.push(vec![a, b, a]);
        }
        let a = DenseMatrix::from_rows(&rows);
        let qr = qr_pivoted(&a);
        assert_eq!(qr.rank(), 2);
    }

    #[test]
    fn dual_row_matches_least_squares() {
        let mut state = 42u64;
        let mut rows = Vec::new();
        for _ in 0..10 {
            rows.push((0..4).map(|_| rng_next(&mut state)).collect::<Vec<_>>());
        }
        let a = DenseMatrix::from_rows(&rows);
        let d: Vec<f64> = (0..10).map(|_| rng_next(&mut state)).collect();
        let v = vec![0.3, -1.0, 2.0, 0.5];
        let qr = qr_pivoted(&a);
        let s = qr.dual_row(&v).unwrap();
        let x = qr.least_squares(&d);
        let via_stencil: f64 = s.iter().zip(&d).map(|(a, b)| a * b).sum();
        let via_solve: f64 = v.iter().zip(&x).map(|(a, b)| a * b).sum();
        assert!((via_stencil - via_solve).abs() < 1e-10);
    }

    #[test]
    fn lu_identity_and_hand_checked() {
        let id = DenseMatrix::identity(3);
        let b = vec![1.0, -2.0, 4.0];
        let x = lu_solve(&id, &b).unwrap();
        assert_eq!(x, b);

        let a = DenseMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]);
        let x = lu_solve(&a, &[3.0, 4.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lu_random_diagonally_dominant_residual() {
        let n = 50;
        let mut state = 99u64;
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            let mut sum = 0.0;
            for j in 0..n {
                if i != j {
                    let v = rng_next(&mut state);
                    a.set(i, j, v);
                    sum += v.abs();
                }
            }
            a.set(i, i, sum + 1.0);
        }
        let b: Vec<f64> = (0..n).map(|_| rng_next(&mut state)).collect();
        let x = lu_solve(&a, &b).unwrap();
        let ax = a.matvec(&x);
        let resid = ax
            .iter()
            .zip(&b)
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max);
        let xnorm = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        assert!(resid <= 1e-10 * a.norm_inf() * xnorm.max(1.0));
    }

    #[test]
    fn lu_rejects_singular() {
        let a = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]);
        assert!(matches!(lu_solve(&a, &[1.0, 1.0]), Err(Error::Singular { .. })));
    }

    #[test]
    fn hessenberg_diagonal_eigs() {
        let mut h = DenseMatrix::zeros(4, 4);
        for (i, v) in [3.0, -1.0, 0.5, 7.0].iter().enumerate() {
            h.set(i, i, *v);
        }
        let mut eigs: Vec<f64> = hessenberg_eigs(&h)
            .unwrap()
            .iter()
            .map(|c| c.re)
            .collect();
        eigs.sort_by(f64::total_cmp);
        let expect = [-1.0, 0.5, 3.0, 7.0];
        for (e, x) in eigs.iter().zip(expect.iter()) {
            assert!((e - x).abs() < 1e-12);
        }
    }

    #[test]
    fn hessenberg_rotation_block_conjugate_pair() {
        // [[a, b], [-b, a]] has eigenvalues a +- i b by the quadratic formula.
        let h = DenseMatrix::from_rows(&[vec![0.3, 1.7], vec![-1.7, 0.3]]);
        let eigs = hessenberg_eigs(&h).unwrap();
        assert_eq!(eigs.len(), 2);
        for e in &eigs {
            assert!((e.re - 0.3).abs() < 1e-12);
            assert!((e.im.abs() - 1.7).abs() < 1e-12);
        }
    }

    #[test]
    fn hessenberg_companion_known_roots() {
        // Companion matrix of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6.
        let h = DenseMatrix::from_rows(&[
            vec![6.0, -11.0, 6.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ]);
        let mut eigs: Vec<f64> = hessenberg_eigs(&h).unwrap().iter().map(|c| c.re).collect();
        eigs.sort_by(f64::total_cmp);
        for (e, x) in eigs.iter().zip([1.0, 2.0, 3.0].iter()) {
            assert!((e - x).abs() < 1e-8, "root {e} vs {x}");
        }
        assert!(hessenberg_eigs(&h)
            .unwrap()
            .iter()
            .all(|c| c.im.abs() < 1e-8));
    }

    #[test]
    fn hessenberg_similarity_of_known_spectrum() {
        // Build A = Q D Q^T with known D, reduce to Hessenberg, and compare.
        let n = 12;
        let mut state = 1234u64;
        let d: Vec<f64> = (0..n).map(|i| i as f64 - 4.5).collect();
        let mut a = DenseMatrix::zeros(n, n);
        for i in 0..n {
            a.set(i, i, d[i]);
        }
        // Apply a few random Householder similarities.
        for _ in 0..3 {
            let v: Vec<f64> = (0..n).map(|_| rng_next(&mut state)).collect();
            let vn2: f64 = v.iter().map(|t| t * t).sum();
            let tau = 2.0 / vn2;
            // A := P A P.
            let mut tmp = a.clone();
            for j in 0..n {
                let w: f64 = (0..n).map(|i| v[i] * a.at(i, j)).sum::<f64>() * tau;
                for i in 0..n {
                    tmp.set(i, j, a.at(i, j) - w * v[i]);
                }
            }
            let mut out = tmp.clone();
            for i in 0..n {
                let w: f64 = (0..n).map(|j| v[j] * tmp.at(i, j)).sum::<f64>() * tau;
                for j in 0..n {
                    out.set(i, j, tmp.at(i, j) - w * v[j]);
                }
            }
            a = out;
        }
        let h = hessenberg_reduce(&a);
        let mut eigs: Vec<f64> = hessenberg_eigs(&h).unwrap().iter().map(|c| c.re).collect();
        eigs.sort_by(f64::total_cmp);
        for (e, x) in eigs.iter().zip(d.iter()) {
            assert!((e - x).abs() < 1e-8, "eig {e} vs {x}");
        }
    }
}
