//! Eigenvalues of general complex matrices: Householder reduction to upper
//! Hessenberg form, then implicitly single-shifted QR sweeps with Wilkinson
//! shifts and deflation. Complex arithmetic removes any need for double
//! shifts.

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::CMatrix;

/// Largest accepted dimension.
pub const MAX_DIMENSION: usize = 2048;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    /// Sorted by real part, ties by imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Backward errors `||A v - lambda v|| / (||A|| ||v||)`, one per
    /// eigenvalue; empty unless eigenvectors were requested.
    pub residuals: Vec<f64>,
    /// Total QR sweeps.
    pub iterations: usize,
}

/// Eigenvalues only.
pub fn general_complex_eigen(m: &CMatrix) -> Result<SpectrumResult> {
    let mut a = Dense::from_matrix(m)?;
    let mut z = None;
    hessenberg(&mut a, &mut z);
    let (values, iterations) = hessenberg_qr(&mut a, &mut z, false)?;
    let mut eigenvalues = values;
    eigenvalues.sort_by(compare);
    Ok(SpectrumResult {
        eigenvalues,
        residuals: Vec::new(),
        iterations,
    })
}

/// Eigenvalues with unit-norm eigenvectors (columns, in the same order).
pub fn general_complex_eigen_vectors(m: &CMatrix) -> Result<(SpectrumResult, CMatrix)> {
    let mut a = Dense::from_matrix(m)?;
    let n = a.n;
    let mut z = Some(Dense::identity(n));
    hessenberg(&mut a, &mut z);
    let (values, iterations) = hessenberg_qr(&mut a, &mut z, true)?;
    let z = z.expect("accumulated Schur vectors");
    let y = triangular_eigenvectors(&a);

    // v = Z y, normalized
    let mut vectors = CMatrix::zeros(n, n);
    for k in 0..n {
        let mut nrm = 0.0;
        for i in 0..n {
            let mut s = ZERO;
            for j in 0..=k {
                s += z.get(i, j) * y.get(j, k);
            }
            vectors[(i, k)] = s;
            nrm += s.norm_sqr();
        }
        let nrm = nrm.sqrt();
        if nrm > 0.0 {
            for i in 0..n {
                vectors[(i, k)] /= nrm;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| compare(&values[i], &values[j]));
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| values[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);

    let scale = m.norm().max(f64::MIN_POSITIVE);
    let residuals = (0..n)
        .map(|k| {
            let v = vectors.column(k);
            let r = m * v - v * eigenvalues[k];
            r.norm() / (scale * v.norm().max(f64::MIN_POSITIVE))
        })
        .collect();
    Ok((
        SpectrumResult {
            eigenvalues,
            residuals,
            iterations,
        },
        vectors,
    ))
}

fn compare(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Row-major square storage; the sweeps below walk rows.
#[derive(Clone)]
struct Dense {
    n: usize,
    data: Vec<Complex64>,
}

impl Dense {
    fn from_matrix(m: &CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(invalid(format!(
                "matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows();
        if n > MAX_DIMENSION {
            return Err(invalid(format!(
                "dimension {n} exceeds the cap of {MAX_DIMENSION}"
            )));
        }
        if m.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(invalid("matrix has non-finite entries"));
        }
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[i * n + j] = m[(i, j)];
            }
        }
        Ok(Dense { n, data })
    }

    fn identity(n: usize) -> Self {
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        Dense { n, data }
    }

    #[inline]
    fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.n + j] = v;
    }

    /// Left-multiplies rows `i`, `i+1` (columns in `cols`) by
    /// `[[c, s], [-conj(s), c]]`.
    fn rotate_rows(&mut self, i: usize, c: f64, s: Complex64, cols: std::ops::Range<usize>) {
        let n = self.n;
        let (top, bottom) = self.data.split_at_mut((i + 1) * n);
        let ri = &mut top[i * n + cols.start..i * n + cols.end];
        let rj = &mut bottom[cols.start..cols.end];
        let sc = s.conj();
        for (a, b) in ri.iter_mut().zip(rj.iter_mut()) {
            let x = *a;
            let y = *b;
            *a = x * c + s * y;
            *b = y * c - sc * x;
        }
    }

    /// Right-multiplies columns `j`, `j+1` (rows in `rows`) by the adjoint
    /// of the same rotation.
    fn rotate_cols(&mut self, j: usize, c: f64, s: Complex64, rows: std::ops::Range<usize>) {
        let n = self.n;
        let sc = s.conj();
        for r in rows {
            let base = r * n + j;
            let x = self.data[base];
            let y = self.data[base + 1];
            self.data[base] = x * c + y * sc;
            self.data[base + 1] = y * c - x * s;
        }
    }
}

/// Householder reduction to upper Hessenberg form, optionally accumulating
/// the unitary transform into `z`.
fn hessenberg(a: &mut Dense, z: &mut Option<Dense>) {
    let n = a.n;
    if n < 3 {
        return;
    }
    let mut v = vec![ZERO; n];
    let mut w = vec![ZERO; n];
    for k in 0..n - 2 {
        // x = a[k+1.., k]; only up to the last nonzero entry matters
        let mut last = k + 1;
        let mut xnorm2 = 0.0;
        for i in k + 1..n {
            let x = a.get(i, k);
            if x != ZERO {
                last = i;
                xnorm2 += x.norm_sqr();
            }
        }
        if last == k + 1 {
            continue;
        }
        let x0 = a.get(k + 1, k);
        let xnorm = xnorm2.sqrt();
        let phase = if x0 == ZERO { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * xnorm;
        let lo = k + 1;
        let hi = last + 1;
        for i in lo..hi {
            v[i] = a.get(i, k);
        }
        v[lo] -= alpha;
        let vv: f64 = v[lo..hi].iter().map(|x| x.norm_sqr()).sum();
        if vv == 0.0 {
            continue;
        }
        let beta = 2.0 / vv;

        // left: rows lo..hi, columns k..n.  w = v^H A
        for x in w[k..n].iter_mut() {
            *x = ZERO;
        }
        for i in lo..hi {
            let vi = v[i].conj();
            let row = &a.data[i * n + k..i * n + n];
            for (wj, aij) in w[k..n].iter_mut().zip(row) {
                *wj += vi * aij;
            }
        }
        for i in lo..hi {
            let f = v[i] * beta;
            let row = &mut a.data[i * n + k..i * n + n];
            for (aij, wj) in row.iter_mut().zip(&w[k..n]) {
                *aij -= f * wj;
            }
        }
        // right: all rows, columns lo..hi
        for r in 0..n {
            let row = &mut a.data[r * n + lo..r * n + hi];
            let mut s = ZERO;
            for (aij, vj) in row.iter().zip(&v[lo..hi]) {
                s += aij * vj;
            }
            let f = s * beta;
            for (aij, vj) in row.iter_mut().zip(&v[lo..hi]) {
                *aij -= f * vj.conj();
            }
        }
        if let Some(z) = z.as_mut() {
            for r in 0..n {
                let row = &mut z.data[r * n + lo..r * n + hi];
                let mut s = ZERO;
                for (zij, vj) in row.iter().zip(&v[lo..hi]) {
                    s += zij * vj;
                }
                let f = s * beta;
                for (zij, vj) in row.iter_mut().zip(&v[lo..hi]) {
                    *zij -= f * vj.conj();
                }
            }
        }
        a.set(k + 1, k, alpha);
        for i in k + 2..n {
            a.set(i, k, ZERO);
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(f, g)` to `(r, 0)`.
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let fa = f.norm();
    let ga = g.norm();
    if ga == 0.0 {
        return (1.0, ZERO);
    }
    if fa == 0.0 {
        return (0.0, g.conj() / ga);
    }
    let nrm = fa.hypot(ga);
    (fa / nrm, (f / fa) * g.conj() / nrm)
}

#[inline]
fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Eigenvalue of `[[a, b], [c, d]]` closer to `d`.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5 * ((a - d) * 0.5) + b * c).sqrt();
    let l1 = tr + disc;
    let l2 = tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// QR iteration on a Hessenberg matrix. With `full`, the whole Schur form is
/// maintained (and `z` updated) so that eigenvectors can be recovered;
/// otherwise only the active window is touched.
fn hessenberg_qr(a: &mut Dense, z: &mut Option<Dense>, full: bool) -> Result<(Vec<Complex64>, usize)> {
    let n = a.n;
    let mut values = vec![ZERO; n];
    let mut done = vec![false; n];
    if n == 0 {
        return Ok((values, 0));
    }
    let ulp = f64::EPSILON;
    let small = f64::MIN_POSITIVE * (n as f64 / ulp);
    let budget = 30 * n.max(1);
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut its = 0usize;

    loop {
        // find the start of the unreduced block ending at hi
        let mut lo = 0;
        let mut k = hi;
        while k > 0 {
            let sub = a.get(k, k - 1);
            let mut tst = abs1(a.get(k - 1, k - 1)) + abs1(a.get(k, k));
            if tst == 0.0 {
                if k >= 2 {
                    tst += abs1(a.get(k - 1, k - 2));
                }
                if k + 1 < n {
                    tst += abs1(a.get(k + 1, k));
                }
            }
            if abs1(sub) <= small.max(ulp * tst) {
                a.set(k, k - 1, ZERO);
                lo = k;
                break;
            }
            k -= 1;
        }

        if lo == hi {
            values[hi] = a.get(hi, hi);
            done[hi] = true;
            its = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }

        if total >= budget {
            let partial = (0..n).filter(|&i| done[i]).map(|i| values[i]).collect();
            return Err(Error::Convergence {
                iterations: total,
                partial,
            });
        }
        total += 1;
        its += 1;

        let shift = if its == 10 {
            a.get(lo, lo) + a.get(lo + 1, lo).re.abs() * 0.75
        } else if its == 20 {
            a.get(hi, hi) + a.get(hi, hi - 1).re.abs() * 0.75
        } else {
            wilkinson(
                a.get(hi - 1, hi - 1),
                a.get(hi - 1, hi),
                a.get(hi, hi - 1),
                a.get(hi, hi),
            )
        };

        let col_end = if full { n } else { hi + 1 };
        let row_start = if full { 0 } else { lo };
        for k in lo..hi {
            let (f, g) = if k == lo {
                (a.get(lo, lo) - shift, a.get(lo + 1, lo))
            } else {
                (a.get(k, k - 1), a.get(k + 1, k - 1))
            };
            let (c, s) = givens(f, g);
            let first_col = if k == lo { lo } else { k - 1 };
            a.rotate_rows(k, c, s, first_col..col_end);
            if k > lo {
                a.set(k + 1, k - 1, ZERO);
            }
            let last_row = (k + 3).min(hi + 1);
            a.rotate_cols(k, c, s, row_start..last_row);
            if let Some(z) = z.as_mut() {
                z.rotate_cols(k, c, s, 0..n);
            }
        }
    }
    Ok((values, total))
}

/// Columns `y_k` with `T y_k = T_kk y_k`, `y_k[k] = 1`, zero below.
fn triangular_eigenvectors(t: &Dense) -> Dense {
    let n = t.n;
    let mut y = Dense {
        n,
        data: vec![ZERO; n * n],
    };
    let tnorm = t.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let floor = f64::EPSILON * tnorm.max(f64::MIN_POSITIVE);
    for k in 0..n {
        let lam = t.get(k, k);
        y.set(k, k, Complex64::new(1.0, 0.0));
        for i in (0..k).rev() {
            let mut s = ZERO;
            for j in i + 1..=k {
                s += t.get(i, j) * y.get(j, k);
            }
            let mut d = t.get(i, i) - lam;
            if d.norm() < floor {
                d = Complex64::new(floor, 0.0);
            }
            y.set(i, k, -s / d);
        }
    }
    y
}
