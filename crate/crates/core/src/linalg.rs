//! Dense matrices with the two spectral routines the lab needs: singular
//! values (Householder bidiagonalization + implicit-shift QR) and eigenvalues
//! of symmetric matrices (Householder tridiagonalization + implicit QL).

use crate::error::LabError;
use crate::scalar::Real;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Real> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> T>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| a * s).collect() }
    }

    /// Gram matrix MᵀM.
    pub fn gram(&self) -> Self {
        let n = self.cols;
        let mut out = Self::zeros(n, n);
        for k in 0..self.rows {
            let row = self.row(k);
            for i in 0..n {
                let ri = row[i];
                if ri == T::zero() {
                    continue;
                }
                for (o, &rj) in out.data[i * n + i..(i + 1) * n].iter_mut().zip(&row[i..]) {
                    *o = *o + ri * rj;
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                out.data[i * n + j] = out.data[j * n + i];
            }
        }
        out
    }

    pub fn frobenius_norm_sq(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, &v| acc + v * v)
    }

    pub fn max_abs_asymmetry(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.rows.min(self.cols) {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }
}

fn sign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Singular values of `m`, sorted nonincreasing.
pub fn singular_values<T: Real>(m: &Matrix<T>) -> Result<Vec<T>, LabError> {
    let a = if m.rows >= m.cols { m.clone() } else { m.transpose() };
    let rows = a.rows;
    let n = a.cols;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = a.data;
    let idx = |i: usize, j: usize| i * n + j;
    let mut w = vec![T::zero(); n];
    let mut rv1 = vec![T::zero(); n];
    let (mut g, mut scale, mut anorm) = (T::zero(), T::zero(), T::zero());

    for i in 0..n {
        let l = i + 1;
        rv1[i] = scale * g;
        g = T::zero();
        scale = T::zero();
        let mut s = T::zero();
        if i < rows {
            for k in i..rows {
                scale = scale + a[idx(k, i)].abs();
            }
            if scale != T::zero() {
                for k in i..rows {
                    a[idx(k, i)] = a[idx(k, i)] / scale;
                    s = s + a[idx(k, i)] * a[idx(k, i)];
                }
                let f = a[idx(i, i)];
                g = -sign(s.sqrt(), f);
                let h = f * g - s;
                a[idx(i, i)] = f - g;
                // row-wise accumulation keeps memory access contiguous
                let mut dots = vec![T::zero(); n];
                for k in i..rows {
                    let v = a[idx(k, i)];
                    let row = &a[idx(k, l)..idx(k, 0) + n];
                    for (d, &x) in dots[l..].iter_mut().zip(row) {
                        *d = *d + v * x;
                    }
                }
                for d in dots[l..].iter_mut() {
                    *d = *d / h;
                }
                for k in i..rows {
                    let v = a[idx(k, i)];
                    let start = idx(k, l);
                    for (x, &f) in a[start..start + (n - l)].iter_mut().zip(&dots[l..]) {
                        *x = *x + f * v;
                    }
                }
                for k in i..rows {
                    a[idx(k, i)] = a[idx(k, i)] * scale;
                }
            }
        }
        w[i] = scale * g;
        g = T::zero();
        scale = T::zero();
        s = T::zero();
        if i < rows && i + 1 != n {
            for k in l..n {
                scale = scale + a[idx(i, k)].abs();
            }
            if scale != T::zero() {
                for k in l..n {
                    a[idx(i, k)] = a[idx(i, k)] / scale;
                    s = s + a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                g = -sign(s.sqrt(), f);
                let h = f * g - s;
                a[idx(i, l)] = f - g;
                for k in l..n {
                    rv1[k] = a[idx(i, k)] / h;
                }
                for j in l..rows {
                    let mut s = T::zero();
                    for k in l..n {
                        s = s + a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in l..n {
                        a[idx(j, k)] = a[idx(j, k)] + s * rv1[k];
                    }
                }
                for k in l..n {
                    a[idx(i, k)] = a[idx(i, k)] * scale;
                }
            }
        }
        anorm = anorm.max(w[i].abs() + rv1[i].abs());
    }

    // entries this small are round-off; deflating there keeps the chase from
    // stalling on graded matrices whose tail sits at noise level
    let tiny = T::lit(64.0) * T::epsilon() * anorm;
    let mut budget = 30 * n + 100;
    for k in (0..n).rev() {
        loop {
            let mut flag = true;
            let mut l = k;
            loop {
                if l == 0 || rv1[l].abs() <= tiny {
                    flag = false;
                    break;
                }
                if w[l - 1].abs() <= tiny {
                    break;
                }
                l -= 1;
            }
            if flag {
                // cancel rv1[l] when w[l-1] is negligible
                let (mut c, mut s) = (T::zero(), T::one());
                for i in l..=k {
                    let f = s * rv1[i];
                    rv1[i] = c * rv1[i];
                    if f.abs() <= tiny {
                        break;
                    }
                    let g = w[i];
                    let h = f.hypot(g);
                    w[i] = h;
                    c = g / h;
                    s = -f / h;
                }
            }
            let z = w[k];
            if l == k {
                if z < T::zero() {
                    w[k] = -z;
                }
                break;
            }
            if budget == 0 {
                return Err(LabError::NoConvergence("bidiagonal QR exceeded its sweep budget"));
            }
            budget -= 1;
            let mut x = w[l];
            let nm = k - 1;
            let mut y = w[nm];
            let mut g = rv1[nm];
            let mut h = rv1[k];
            let two = T::lit(2.0);
            let mut f = ((y - z) * (y + z) + (g - h) * (g + h)) / (two * h * y);
            g = f.hypot(T::one());
            f = ((x - z) * (x + z) + h * ((y / (f + sign(g, f))) - h)) / x;
            let (mut c, mut s) = (T::one(), T::one());
            for j in l..=nm {
                let i = j + 1;
                g = rv1[i];
                y = w[i];
                h = s * g;
                g = c * g;
                let mut z = f.hypot(h);
                rv1[j] = z;
                c = f / z;
                s = h / z;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y = y * c;
                z = f.hypot(h);
                w[j] = z;
                if z != T::zero() {
                    c = f / z;
                    s = h / z;
                }
                f = c * g + s * y;
                x = c * y - s * g;
            }
            rv1[l] = T::zero();
            rv1[k] = f;
            w[k] = x;
        }
    }
    w.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(w)
}

/// Eigenvalues of a symmetric matrix (lower triangle is read), sorted
/// nonincreasing.
pub fn symmetric_eigenvalues<T: Real>(m: &Matrix<T>) -> Result<Vec<T>, LabError> {
    if m.rows != m.cols {
        return Err(LabError::InvalidParameter {
            name: "matrix",
            reason: format!("symmetric eigensolver needs a square matrix, got {}x{}", m.rows, m.cols),
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut a = m.data.clone();
    let idx = |i: usize, j: usize| i * n + j;
    let mut d = vec![T::zero(); n];
    let mut e = vec![T::zero(); n];

    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = T::zero();
        if l > 0 {
            let mut scale = T::zero();
            for k in 0..=l {
                scale = scale + a[idx(i, k)].abs();
            }
            if scale == T::zero() {
                e[i] = a[idx(i, l)];
            } else {
                for k in 0..=l {
                    a[idx(i, k)] = a[idx(i, k)] / scale;
                    h = h + a[idx(i, k)] * a[idx(i, k)];
                }
                let f = a[idx(i, l)];
                let g = if f >= T::zero() { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h = h - f * g;
                a[idx(i, l)] = f - g;
                let mut f = T::zero();
                for j in 0..=l {
                    let mut g = T::zero();
                    for k in 0..=j {
                        g = g + a[idx(j, k)] * a[idx(i, k)];
                    }
                    for k in j + 1..=l {
                        g = g + a[idx(k, j)] * a[idx(i, k)];
                    }
                    e[j] = g / h;
                    f = f + e[j] * a[idx(i, j)];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[idx(i, j)];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[idx(j, k)] = a[idx(j, k)] - (f * e[k] + g * a[idx(i, k)]);
                    }
                }
            }
        } else {
            e[i] = a[idx(i, l)];
        }
        d[i] = h;
    }
    e[0] = T::zero();
    for i in 0..n {
        d[i] = a[idx(i, i)];
    }

    // implicit QL on the tridiagonal (d, e)
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = T::zero();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(LabError::NoConvergence("tridiagonal QL exceeded 60 iterations"));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + sign(r, g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] = d[i + 1] - p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] = d[l] - p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    d.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    Ok(d)
}
