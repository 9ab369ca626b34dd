//! Dense linear algebra used by the certificate machinery.
//!
//! Everything here targets desk-scale matrices (a few hundred rows at most
//! after truncation), so the implementations favour robustness and
//! verifiability over asymptotics: LU with partial pivoting, leading
//! principal minors by per-block elimination, a balanced Hessenberg +
//! Francis double-shift QR for general real spectra, cyclic Jacobi for
//! symmetric problems, and a Padé scaling-and-squaring matrix exponential
//! that the simulation tests use as an independent oracle.

use crate::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            data.extend_from_slice(row);
        }
        Mat {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Mat::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Leading principal `k x k` submatrix.
    pub fn leading_block(&self, k: usize) -> Mat {
        Mat::from_fn(k, k, |i, j| self[(i, j)])
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mat_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in mat_vec");
        let mut out = vec![0.0; self.rows];
        for i in 0..self.rows {
            let mut s = 0.0;
            for j in 0..self.cols {
                s += self[(i, j)] * v[j];
            }
            out[i] = s;
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a += b;
        }
        out
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            *a -= b;
        }
        out
    }

    pub fn scale(&self, s: f64) -> Mat {
        let mut out = self.clone();
        for a in out.data.iter_mut() {
            *a *= s;
        }
        out
    }

    /// `self + s * I`.
    pub fn add_scaled_identity(&self, s: f64) -> Mat {
        assert!(self.is_square());
        let mut out = self.clone();
        for i in 0..self.rows {
            out[(i, i)] += s;
        }
        out
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        let mut best: f64 = 0.0;
        for j in 0..self.cols {
            let mut s = 0.0;
            for i in 0..self.rows {
                s += self[(i, j)].abs();
            }
            best = best.max(s);
        }
        best
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.rows {
            let s: f64 = self.row(i).iter().map(|x| x.abs()).sum();
            best = best.max(s);
        }
        best
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting.
pub struct Lu {
    lu: Mat,
    perm: Vec<usize>,
    sign: f64,
    /// Smallest absolute pivot seen; a singularity witness.
    pub min_pivot: f64,
}

/// Factor a square matrix; fails if a pivot falls below an absolute floor
/// scaled by the matrix magnitude.
pub fn lu_factor(a: &Mat) -> Result<Lu> {
    assert!(a.is_square(), "lu_factor needs a square matrix");
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1.0;
    let scale = a.max_abs().max(1.0);
    let floor = scale * 1e-300;
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let mut p = k;
        let mut best = lu[(k, k)].abs();
        for i in k + 1..n {
            let v = lu[(i, k)].abs();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best <= floor {
            return Err(Error::SingularSystem {
                step: k,
                pivot: best,
            });
        }
        if p != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
            perm.swap(k, p);
            sign = -sign;
        }
        let pivot = lu[(k, k)];
        min_pivot = min_pivot.min(pivot.abs());
        for i in k + 1..n {
            let f = lu[(i, k)] / pivot;
            lu[(i, k)] = f;
            for j in k + 1..n {
                let v = lu[(k, j)];
                lu[(i, j)] -= f * v;
            }
        }
    }
    Ok(Lu {
        lu,
        perm,
        sign,
        min_pivot,
    })
}

impl Lu {
    pub fn det(&self) -> f64 {
        let n = self.lu.rows();
        let mut d = self.sign;
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[(i, j)] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[(i, j)] * x[j];
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }
}

/// Solve `A x = b`.
pub fn solve(a: &Mat, b: &[f64]) -> Result<Vec<f64>> {
    Ok(lu_factor(a)?.solve(b))
}

/// Determinant via LU. Returns 0 for numerically singular matrices.
pub fn determinant(a: &Mat) -> f64 {
    match lu_factor(a) {
        Ok(lu) => lu.det(),
        Err(_) => 0.0,
    }
}

/// Determinants of the leading principal blocks `1..=n`.
pub fn leading_principal_minors(a: &Mat) -> Vec<f64> {
    assert!(a.is_square());
    (1..=a.rows())
        .map(|k| determinant(&a.leading_block(k)))
        .collect()
}

/// A real or complex-conjugate eigenvalue, stored as `(re, im)`.
pub type Eig = (f64, f64);

/// All eigenvalues of a general real square matrix.
///
/// Balancing, Householder reduction to upper Hessenberg form, then the
/// Francis implicit double-shift QR iteration with deflation.
pub fn eigenvalues(a: &Mat) -> Result<Vec<Eig>> {
    assert!(a.is_square(), "eigenvalues needs a square matrix");
    let n = a.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![(a[(0, 0)], 0.0)]);
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    hqr(&mut h)
}

/// Largest real part over the spectrum.
pub fn spectral_abscissa(a: &Mat) -> Result<f64> {
    let eigs = eigenvalues(a)?;
    Ok(eigs
        .iter()
        .map(|e| e.0)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Osborne balancing in radix-2 arithmetic (precision-free similarity).
fn balance(a: &mut Mat) {
    let n = a.rows();
    let radix: f64 = 2.0;
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut c = 0.0;
            for j in 0..n {
                if j != i {
                    c += a[(j, i)].abs();
                    r += a[(i, j)].abs();
                }
            }
            if c != 0.0 && r != 0.0 {
                let mut g = r / radix;
                let mut f = 1.0;
                let s = c + r;
                let mut cc = c;
                while cc < g {
                    f *= radix;
                    cc *= sqrdx;
                }
                g = r * radix;
                while cc > g {
                    f /= radix;
                    cc /= sqrdx;
                }
                if (cc + r) / f < 0.95 * s {
                    done = false;
                    let ginv = 1.0 / f;
                    for j in 0..n {
                        a[(i, j)] *= ginv;
                    }
                    for j in 0..n {
                        a[(j, i)] *= f;
                    }
                }
            }
        }
    }
}

/// Householder reduction to upper Hessenberg form (in place).
fn hessenberg(a: &mut Mat) {
    let n = a.rows();
    for k in 1..n.saturating_sub(1) {
        // zero column k-1 below row k
        let mut scale = 0.0_f64;
        for i in k..n {
            scale += a[(i, k - 1)].abs();
        }
        if scale == 0.0 {
            continue;
        }
        let mut h = 0.0;
        let mut v = vec![0.0; n];
        for i in (k..n).rev() {
            v[i] = a[(i, k - 1)] / scale;
            h += v[i] * v[i];
        }
        let mut g = h.sqrt();
        if v[k] > 0.0 {
            g = -g;
        }
        h -= v[k] * g;
        v[k] -= g;
        // apply P = I - v v^T / h from both sides
        for j in 0..n {
            let mut f = 0.0;
            for i in k..n {
                f += v[i] * a[(i, j)];
            }
            f /= h;
            for i in k..n {
                a[(i, j)] -= f * v[i];
            }
        }
        for i in 0..n {
            let mut f = 0.0;
            for j in k..n {
                f += v[j] * a[(i, j)];
            }
            f /= h;
            for j in k..n {
                a[(i, j)] -= f * v[j];
            }
        }
        a[(k, k - 1)] = scale * g;
        for i in k + 1..n {
            a[(i, k - 1)] = 0.0;
        }
    }
}

/// Francis double-shift QR on an upper Hessenberg matrix. Destroys `h`.
fn hqr(h: &mut Mat) -> Result<Vec<Eig>> {
    let n = h.rows();
    let mut eigs: Vec<Eig> = Vec::with_capacity(n);
    let mut anorm = 0.0_f64;
    for i in 0..n {
        for j in i.saturating_sub(1)..n {
            anorm += h[(i, j)].abs();
        }
    }
    if anorm == 0.0 {
        // zero matrix
        return Ok(vec![(0.0, 0.0); n]);
    }
    let eps = f64::EPSILON;
    let mut t = 0.0_f64;
    let mut nn = n as isize - 1;
    while nn >= 0 {
        let mut its = 0usize;
        loop {
            // search for a negligible subdiagonal element
            let mut l = nn;
            while l >= 1 {
                let s = h[((l - 1) as usize, (l - 1) as usize)].abs()
                    + h[(l as usize, l as usize)].abs();
                let s = if s == 0.0 { anorm } else { s };
                if h[(l as usize, (l - 1) as usize)].abs() <= eps * s {
                    h[(l as usize, (l - 1) as usize)] = 0.0;
                    break;
                }
                l -= 1;
            }
            let x = h[(nn as usize, nn as usize)];
            if l == nn {
                eigs.push((x + t, 0.0));
                nn -= 1;
                break;
            }
            let y = h[((nn - 1) as usize, (nn - 1) as usize)];
            let w = h[(nn as usize, (nn - 1) as usize)] * h[((nn - 1) as usize, nn as usize)];
            if l == nn - 1 {
                let p = 0.5 * (y - x);
                let q = p * p + w;
                let z = q.abs().sqrt();
                let x = x + t;
                if q >= 0.0 {
                    let z = p + if p >= 0.0 { z } else { -z };
                    eigs.push((x + z, 0.0));
                    if z != 0.0 {
                        eigs.push((x - w / z, 0.0));
                    } else {
                        eigs.push((x + z, 0.0));
                    }
                } else {
                    eigs.push((x + p, z));
                    eigs.push((x + p, -z));
                }
                nn -= 2;
                break;
            }
            if its == 60 {
                return Err(Error::EigenNoConvergence { iters: its });
            }
            let (mut x, mut y, mut w) = (x, y, w);
            if its == 10 || its == 20 || its == 30 || its == 40 || its == 50 {
                // exceptional shift
                t += x;
                for i in 0..=nn as usize {
                    h[(i, i)] -= x;
                }
                let s = h[(nn as usize, (nn - 1) as usize)].abs()
                    + h[((nn - 1) as usize, (nn - 2) as usize)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            its += 1;
            // double-shift: look for two consecutive small subdiagonals
            let mut m = nn - 2;
            let (mut p, mut q, mut r) = (0.0, 0.0, 0.0);
            while m >= l {
                let mu = m as usize;
                let z = h[(mu, mu)];
                let rr = x - z;
                let ss = y - z;
                p = (rr * ss - w) / h[(mu + 1, mu)] + h[(mu, mu + 1)];
                q = h[(mu + 1, mu + 1)] - z - rr - ss;
                r = h[(mu + 2, mu + 1)];
                let s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                let u = h[(mu, mu - 1)].abs() * (q.abs() + r.abs());
                let v = p.abs()
                    * (h[(mu - 1, mu - 1)].abs() + z.abs() + h[(mu + 1, mu + 1)].abs());
                if u <= eps * v {
                    break;
                }
                m -= 1;
            }
            let m = m.max(l) as usize;
            for i in m + 2..=nn as usize {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }
            // double QR step on rows l..=nn, columns m..=nn
            for k in m..=(nn - 1) as usize {
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if k != (nn - 1) as usize {
                        h[(k + 2, k - 1)]
                    } else {
                        0.0
                    };
                    x = p.abs() + q.abs() + r.abs();
                    if x != 0.0 {
                        p /= x;
                        q /= x;
                        r /= x;
                    }
                }
                let s = {
                    let mag = (p * p + q * q + r * r).sqrt();
                    if p >= 0.0 {
                        mag
                    } else {
                        -mag
                    }
                };
                if s == 0.0 {
                    continue;
                }
                if k == m {
                    if l as usize != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                } else {
                    h[(k, k - 1)] = -s * x;
                }
                p += s;
                let px = p / s;
                let qy = q / s;
                let rz = r / s;
                let qp = q / p;
                let rp = r / p;
                // row modification
                for j in k..=nn as usize {
                    let mut pp = h[(k, j)] + qp * h[(k + 1, j)];
                    if k != (nn - 1) as usize {
                        pp += rp * h[(k + 2, j)];
                        h[(k + 2, j)] -= pp * rz;
                    }
                    h[(k + 1, j)] -= pp * qy;
                    h[(k, j)] -= pp * px;
                }
                let mmin = if (nn as usize) < k + 3 {
                    nn as usize
                } else {
                    k + 3
                };
                // column modification
                for i in l as usize..=mmin {
                    let mut pp = px * h[(i, k)] + qy * h[(i, k + 1)];
                    if k != (nn - 1) as usize {
                        pp += rz * h[(i, k + 2)];
                        h[(i, k + 2)] -= pp * rp;
                    }
                    h[(i, k + 1)] -= pp * qp;
                    h[(i, k)] -= pp;
                }
            }
        }
    }
    Ok(eigs)
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues in ascending order with the matching orthonormal
/// eigenvectors as columns.
pub fn sym_eigen(a: &Mat) -> Result<(Vec<f64>, Mat)> {
    assert!(a.is_square());
    let n = a.rows();
    let mut m = a.clone();
    let mut v = Mat::identity(n);
    let max_sweeps = 100;
    for _sweep in 0..max_sweeps {
        let mut off = 0.0_f64;
        for i in 0..n {
            for j in i + 1..n {
                off += m[(i, j)] * m[(i, j)];
            }
        }
        if off.sqrt() <= 1e-15 * m.max_abs().max(1.0) * (n as f64) {
            let mut idx: Vec<usize> = (0..n).collect();
            let vals: Vec<f64> = (0..n).map(|i| m[(i, i)]).collect();
            idx.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
            let sorted_vals: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
            let vecs = Mat::from_fn(n, n, |i, j| v[(i, idx[j])]);
            return Ok((sorted_vals, vecs));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(Error::EigenNoConvergence { iters: max_sweeps })
}

/// Spectral abscissa and positive eigenvector of an irreducible Metzler
/// matrix (nonnegative off-diagonal entries).
///
/// Shifts to a primitive nonnegative matrix, runs power iteration, then
/// polishes with inverse iteration. The eigenvector comes back normalized to
/// maximum entry 1; the residual `||A v - s v||_inf` is driven below
/// `tol * scale`.
pub fn perron_pair(a: &Mat, tol: f64) -> Result<(f64, Vec<f64>)> {
    assert!(a.is_square());
    let n = a.rows();
    let shift = (0..n).map(|i| a[(i, i)].abs()).fold(0.0_f64, f64::max) + 1.0;
    let p = a.add_scaled_identity(shift);
    let scale = p.norm_inf().max(1.0);
    let mut v = vec![1.0 / (n as f64); n];
    let mut r = 0.0;
    let mut converged = false;
    for _ in 0..20_000 {
        let w = p.mat_vec(&v);
        let norm = w.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        if norm == 0.0 {
            break;
        }
        let wn: Vec<f64> = w.iter().map(|x| x / norm).collect();
        let diff: f64 = wn
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = wn;
        r = norm;
        if diff < 1e-14 {
            converged = true;
            break;
        }
    }
    // Inverse-iteration polish at a slightly displaced shift.
    let lambda = r - shift;
    let mut lam = lambda;
    for _ in 0..8 {
        let shifted = a.add_scaled_identity(-(lam + 1e-9 * scale));
        match lu_factor(&shifted) {
            Ok(lu) => {
                let w = lu.solve(&v);
                let norm = w.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                if !norm.is_finite() || norm == 0.0 {
                    break;
                }
                v = w.iter().map(|x| x / norm).collect();
                // Rayleigh quotient update
                let av = a.mat_vec(&v);
                let num: f64 = v.iter().zip(&av).map(|(x, y)| x * y).sum();
                let den: f64 = v.iter().map(|x| x * x).sum();
                lam = num / den;
            }
            Err(_) => break,
        }
    }
    // Fix sign so the vector is positive, then check.
    let sum: f64 = v.iter().sum();
    if sum < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    let maxv = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    for x in v.iter_mut() {
        *x /= maxv;
    }
    let av = a.mat_vec(&v);
    let resid: f64 = av
        .iter()
        .zip(&v)
        .map(|(y, x)| (y - lam * x).abs())
        .fold(0.0, f64::max);
    if resid > tol * scale || !converged && resid > tol * scale {
        return Err(Error::EigenNoConvergence { iters: 20_000 });
    }
    Ok((lam, v))
}

/// Matrix exponential by Padé(13) with scaling and squaring.
pub fn expm(a: &Mat) -> Mat {
    assert!(a.is_square());
    let n = a.rows();
    const THETA13: f64 = 5.371920351148152;
    let norm = a.norm_1();
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = a.scale(0.5_f64.powi(s));
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let ident = Mat::identity(n);
    let a2 = a.matmul(&a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);
    let u_inner = a6
        .scale(B[13])
        .add(&a4.scale(B[11]))
        .add(&a2.scale(B[9]));
    let u = a.matmul(
        &a6.matmul(&u_inner)
            .add(&a6.scale(B[7]))
            .add(&a4.scale(B[5]))
            .add(&a2.scale(B[3]))
            .add(&ident.scale(B[1])),
    );
    let v_inner = a6
        .scale(B[12])
        .add(&a4.scale(B[10]))
        .add(&a2.scale(B[8]));
    let v = a6
        .matmul(&v_inner)
        .add(&a6.scale(B[6]))
        .add(&a4.scale(B[4]))
        .add(&a2.scale(B[2]))
        .add(&ident.scale(B[0]));
    // (V - U) X = (V + U)
    let lhs = v.sub(&u);
    let rhs = v.add(&u);
    let lu = lu_factor(&lhs).expect("Pade denominator is nonsingular by construction");
    let mut x = Mat::zeros(n, n);
    for j in 0..n {
        let col: Vec<f64> = (0..n).map(|i| rhs[(i, j)]).collect();
        let sol = lu.solve(&col);
        for i in 0..n {
            x[(i, j)] = sol[i];
        }
    }
    let mut result = x;
    for _ in 0..s {
        result = result.matmul(&result);
    }
    result
}
