//! General real eigenproblem: Householder reduction to Hessenberg form,
//! then complex shifted QR sweeps down to a Schur form, then back
//! substitution for eigenvectors.
//!
//! This path shares no code with the subspace iterations in `npm`; it is
//! the reference those iterations are checked against.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::matrix::DenseMatrix;
use crate::error::{Error, Result};

/// Largest dimension accepted by [`general_eig`].
pub const MAX_ORACLE_DIM: usize = 64;

/// Relative tolerance under which adjacent eigenvalue moduli count as tied.
pub const TIE_TOL: f64 = 1e-9;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Eigenvalues ordered by descending modulus, with unit eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<Complex64>,
    eigenvectors: DMatrix<Complex64>,
    ties: Vec<bool>,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[Complex64] {
        &self.eigenvalues
    }

    pub fn moduli(&self) -> Vec<f64> {
        self.eigenvalues.iter().map(|z| z.norm()).collect()
    }

    /// Columns are the eigenvectors, in the order of `eigenvalues`.
    pub fn eigenvector_matrix(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `ties()[i]` is set when `|lambda_{i+1}|` and `|lambda_{i+2}|` agree
    /// within [`TIE_TOL`] (one-based eigenvalue indices).
    pub fn ties(&self) -> &[bool] {
        &self.ties
    }

    /// True when `|lambda_m| > |lambda_{m+1}|` beyond the tie tolerance.
    /// A complex pair straddling the cut is always a tie.
    pub fn has_gap_at(&self, m: usize) -> bool {
        m >= 1 && m < self.dim() && !self.ties[m - 1]
    }

    /// `|lambda_{m+1}| / |lambda_m|`.
    pub fn gap_ratio(&self, m: usize) -> f64 {
        let mods = self.moduli();
        mods[m] / mods[m - 1]
    }

    /// Orthogonal projector onto the span of the first `m` eigenvectors.
    ///
    /// Returns `None` when that span is not closed under conjugation (so the
    /// projector is not real) or the eigenvectors are dependent.
    pub fn dominant_projector(&self, m: usize) -> Option<DenseMatrix> {
        let psi = self.eigenvectors.columns(0, m).into_owned();
        let gram = psi.adjoint() * &psi;
        let inv = gram.try_inverse()?;
        let p = &psi * inv * psi.adjoint();
        let scale = p.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1.0);
        if p.iter().any(|z| z.im.abs() > 1e-8 * scale) {
            return None;
        }
        DenseMatrix::from_na(p.map(|z| z.re)).ok().map(|d| d.symmetrized())
    }

    /// `max |(M Psi - Psi Lambda)_{ij}|` for the matrix this spectrum came from.
    pub fn residual(&self, m: &DenseMatrix) -> f64 {
        let mc = m.as_na().map(|v| Complex64::new(v, 0.0));
        let lhs = &mc * &self.eigenvectors;
        let mut worst: f64 = 0.0;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                let d = lhs[(i, j)] - self.eigenvectors[(i, j)] * self.eigenvalues[j];
                worst = worst.max(d.norm());
            }
        }
        worst
    }
}

/// Eigenvalues and eigenvectors of a real square matrix, `n <= 64`.
///
/// Eigenvalues are sorted by descending modulus; ties in modulus are broken
/// by descending real part, then descending imaginary part. Each eigenvector
/// has unit norm and its first non-negligible entry real and positive.
pub fn general_eig(m: &DenseMatrix) -> Result<Spectrum> {
    if !m.is_square() {
        return Err(Error::Shape(format!("general_eig of {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    if n > MAX_ORACLE_DIM {
        return Err(Error::Shape(format!("general_eig limited to n <= {MAX_ORACLE_DIM}, got {n}")));
    }

    // work on M / ||M||_F so every tolerance below is relative
    let scale = m.frobenius_norm();
    let unit = if scale > 0.0 { m.as_na() / scale } else { m.as_na().clone() };
    let (h, q) = hessenberg(&unit);
    let mut t = h.map(|v| Complex64::new(v, 0.0));
    let mut z = q.map(|v| Complex64::new(v, 0.0));
    schur_sweeps(&mut t, &mut z)?;

    let mut values: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();
    for v in values.iter_mut() {
        if v.im.abs() <= 1e-12 {
            v.im = 0.0;
        }
    }
    let y = triangular_eigenvectors(&t, &values);
    if scale > 0.0 {
        for v in values.iter_mut() {
            *v *= scale;
        }
    }
    let mut vectors = &z * y;
    for j in 0..n {
        let mut col = vectors.column(j).into_owned();
        normalize_phase(col.as_mut_slice());
        if values[j].im == 0.0 {
            for c in col.iter_mut() {
                c.im = 0.0;
            }
            let norm = col.norm();
            col /= Complex64::new(norm, 0.0);
        }
        vectors.set_column(j, &col);
    }

    let order = sorted_order(&values);
    let eigenvalues: Vec<Complex64> = order.iter().map(|&i| values[i]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &vectors.column(src));
    }
    let ties = eigenvalues
        .windows(2)
        .map(|w| moduli_tied(w[0].norm(), w[1].norm()))
        .collect();
    Ok(Spectrum { eigenvalues, eigenvectors, ties })
}

fn moduli_tied(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_TOL * a.max(b).max(f64::MIN_POSITIVE)
}

fn precedes(a: Complex64, b: Complex64) -> bool {
    let (ma, mb) = (a.norm(), b.norm());
    if !moduli_tied(ma, mb) {
        return ma > mb;
    }
    let scale = ma.max(mb).max(f64::MIN_POSITIVE);
    if (a.re - b.re).abs() > TIE_TOL * scale {
        return a.re > b.re;
    }
    a.im > b.im
}

// Insertion sort: the tolerance-based comparison is not a total order.
fn sorted_order(values: &[Complex64]) -> Vec<usize> {
    let mut order: Vec<usize> = Vec::with_capacity(values.len());
    for i in 0..values.len() {
        let pos = order
            .iter()
            .position(|&j| precedes(values[i], values[j]))
            .unwrap_or(order.len());
        order.insert(pos, i);
    }
    order
}

/// Householder reduction `A = Q H Q'` with `H` upper Hessenberg.
fn hessenberg(a: &DMatrix<f64>) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut h = a.clone();
    let mut q = DMatrix::<f64>::identity(n, n);
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<f64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H <- P H P with P = I - 2 v v' / (v'v) acting on rows/cols k+1..n
        for j in 0..n {
            let dot: f64 = (0..v.len()).map(|i| v[i] * h[(k + 1 + i, j)]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= f * v[i];
            }
        }
        for i in 0..n {
            let dot: f64 = (0..v.len()).map(|j| h[(i, k + 1 + j)] * v[j]).sum();
            let f = 2.0 * dot / vnorm2;
            for j in 0..v.len() {
                h[(i, k + 1 + j)] -= f * v[j];
            }
        }
        for i in 0..n {
            let dot: f64 = (0..v.len()).map(|j| q[(i, k + 1 + j)] * v[j]).sum();
            let f = 2.0 * dot / vnorm2;
            for j in 0..v.len() {
                q[(i, k + 1 + j)] -= f * v[j];
            }
        }
        for i in k + 2..n {
            h[(i, k)] = 0.0;
        }
    }
    (h, q)
}

/// Rotation `[c, s; -conj(s), c]` zeroing the second entry of `(a, b)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = na.hypot(nb);
    let c = na / r;
    let s = (a / na) * b.conj() / r;
    (c, s)
}

/// Reduces the Hessenberg matrix `t` to upper triangular form by unitary
/// similarity, accumulating the transformations into `z`.
fn schur_sweeps(t: &mut DMatrix<Complex64>, z: &mut DMatrix<Complex64>) -> Result<()> {
    let n = t.nrows();
    if n == 1 {
        return Ok(());
    }
    let norm = t.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let eps = f64::EPSILON;
    let budget = MAX_SWEEPS_PER_EIGENVALUE * n;
    let mut total = 0usize;
    let mut hi = n - 1;
    let mut stall = 0usize;

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = t[(lo, lo - 1)].norm();
            let mut diag = t[(lo - 1, lo - 1)].norm() + t[(lo, lo)].norm();
            if diag == 0.0 {
                diag = norm;
            }
            if sub <= eps * diag {
                t[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            stall = 0;
            continue;
        }

        total += 1;
        stall += 1;
        if total > budget {
            return Err(Error::EigFailed { iterations: total });
        }

        let shift = if stall % 11 == 10 {
            // exceptional shift to break cycles
            t[(hi, hi)] + Complex64::new(0.75 * t[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                t[(hi - 1, hi - 1)],
                t[(hi - 1, hi)],
                t[(hi, hi - 1)],
                t[(hi, hi)],
            )
        };

        for i in lo..=hi {
            t[(i, i)] -= shift;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(t[(k, k)], t[(k + 1, k)]);
            for j in k..n {
                let (x, y) = (t[(k, j)], t[(k + 1, j)]);
                t[(k, j)] = x * c + s * y;
                t[(k + 1, j)] = -s.conj() * x + y * c;
            }
            t[(k + 1, k)] = Complex64::new(0.0, 0.0);
            rots.push((k, c, s));
        }
        for &(k, c, s) in &rots {
            let top = (k + 2).min(hi);
            for i in 0..=top {
                let (x, y) = (t[(i, k)], t[(i, k + 1)]);
                t[(i, k)] = x * c + y * s.conj();
                t[(i, k + 1)] = -x * s + y * c;
            }
            for i in 0..n {
                let (x, y) = (z[(i, k)], z[(i, k + 1)]);
                z[(i, k)] = x * c + y * s.conj();
                z[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            t[(i, i)] += shift;
        }
    }
    Ok(())
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mean = (a + d) * 0.5;
    let (l1, l2) = (mean + disc, mean - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Eigenvectors of the upper triangular `t` by back substitution.
fn triangular_eigenvectors(
    t: &DMatrix<Complex64>,
    values: &[Complex64],
) -> DMatrix<Complex64> {
    let n = t.nrows();
    let small = f64::EPSILON;
    let mut y = DMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = values[k];
        let mut col = vec![Complex64::new(0.0, 0.0); n];
        col[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                acc += t[(i, j)] * col[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < small {
                denom = Complex64::new(small, 0.0);
            }
            col[i] = -acc / denom;
            let big = col.iter().map(|v| v.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                for v in col.iter_mut() {
                    *v /= big;
                }
            }
        }
        for i in 0..n {
            y[(i, k)] = col[i];
        }
    }
    y
}

/// Unit norm, first entry above `1e-8 * max` made real positive.
fn normalize_phase(v: &mut [Complex64]) {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let big = v.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let lead = v.iter().find(|c| c.norm() > 1e-8 * big).copied().unwrap();
    let phase = lead.conj() / lead.norm();
    for c in v.iter_mut() {
        *c = *c * phase / norm;
    }
}
