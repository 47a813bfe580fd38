//! Implicit-shift QL iteration for real symmetric tridiagonal matrices.
//!
//! This is the Bowdler/Martin/Reinsch/Wilkinson `tql2` scheme with a
//! Wilkinson-type shift, written generically over [`Real`]. Eigenvectors are
//! accumulated as rows of a row-major buffer so that every plane rotation
//! touches two contiguous slices.

use crate::scalar::Real;

/// Rotation sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Failure to deflate an eigenvalue within the sweep cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotConverged {
    pub index: usize,
}

/// Eigen-decomposition of a symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagonalEigen<T> {
    /// Ascending eigenvalues.
    pub values: Vec<T>,
    /// Row-major `dim x dim`; row `k` is the unit eigenvector of `values[k]`.
    pub vectors: Option<Vec<T>>,
}

impl<T: Real> TridiagonalEigen<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Option<&[T]> {
        let n = self.dim();
        self.vectors.as_ref().map(|v| &v[k * n..(k + 1) * n])
    }
}

/// Diagonalizes the matrix with diagonal `diag` and off-diagonal `off`
/// (`off[i]` couples rows `i` and `i + 1`).
///
/// With `want_vectors`, eigenvectors are normalized and oriented so that the
/// first component exceeding `sqrt(eps)` times the column max is positive.
pub fn symmetric_tridiagonal_eigen<T: Real>(
    diag: &[T],
    off: &[T],
    want_vectors: bool,
) -> Result<TridiagonalEigen<T>, NotConverged> {
    let n = diag.len();
    assert!(
        n == 0 && off.is_empty() || off.len() + 1 == n,
        "off-diagonal must have length dim - 1"
    );

    let mut d = diag.to_vec();
    let mut e: Vec<T> = off.to_vec();
    e.push(T::zero());
    let mut z = want_vectors.then(|| identity::<T>(n));

    let eps = T::epsilon();
    let norm = d
        .iter()
        .zip(&e)
        .fold(T::zero(), |acc, (&a, &b)| acc.max(a.abs() + b.abs()));
    let floor = eps * norm;

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                return Err(NotConverged { index: l });
            }

            let two = T::lit(2.0);
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
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
                    d[i + 1] -= p;
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
                if let Some(z) = z.as_mut() {
                    rotate_rows(z, n, i, c, s);
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].partial_cmp(&d[b]).unwrap_or(std::cmp::Ordering::Equal));
    let values = order.iter().map(|&k| d[k]).collect();
    let vectors = z.map(|z| {
        let mut sorted = Vec::with_capacity(n * n);
        for &k in &order {
            let row = &z[k * n..(k + 1) * n];
            sorted.extend(orient(row));
        }
        sorted
    });
    Ok(TridiagonalEigen { values, vectors })
}

fn identity<T: Real>(n: usize) -> Vec<T> {
    let mut z = vec![T::zero(); n * n];
    for i in 0..n {
        z[i * n + i] = T::one();
    }
    z
}

// Applies the Givens rotation to eigenvector rows i and i + 1.
fn rotate_rows<T: Real>(z: &mut [T], n: usize, i: usize, c: T, s: T) {
    let (head, tail) = z.split_at_mut((i + 1) * n);
    let lower = &mut head[i * n..];
    let upper = &mut tail[..n];
    for (zi, zi1) in lower.iter_mut().zip(upper.iter_mut()) {
        let f = *zi1;
        *zi1 = s * *zi + c * f;
        *zi = c * *zi - s * f;
    }
}

fn orient<T: Real>(row: &[T]) -> Vec<T> {
    let norm = row.iter().map(|&x| x * x).sum::<T>().sqrt();
    let scale = if norm > T::zero() { norm } else { T::one() };
    let max = row.iter().fold(T::zero(), |acc, &x| acc.max(x.abs()));
    let cut = T::epsilon().sqrt() * max;
    let flip = row
        .iter()
        .find(|x| x.abs() > cut)
        .is_some_and(|&x| x < T::zero());
    let sign = if flip { -T::one() } else { T::one() };
    row.iter().map(|&x| sign * x / scale).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn residual(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
        let n = diag.len();
        (0..n)
            .map(|i| {
                let mut hv = diag[i] * v[i];
                if i > 0 {
                    hv += off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    hv += off[i] * v[i + 1];
                }
                (hv - lambda * v[i]).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn two_by_two() {
        let eig = symmetric_tridiagonal_eigen(&[0.5, 0.5], &[1.0], true).unwrap();
        assert_abs_diff_eq!(eig.values[0], -0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(eig.values[1], 1.5, epsilon = 1e-15);
        let v0 = eig.vector(0).unwrap();
        assert!(v0[0] > 0.0);
        assert_abs_diff_eq!(v0[0], -v0[1], epsilon = 1e-15);
    }

    #[test]
    fn empty_and_single() {
        let eig = symmetric_tridiagonal_eigen::<f64>(&[], &[], true).unwrap();
        assert!(eig.values.is_empty());
        let eig = symmetric_tridiagonal_eigen(&[-0.5], &[], true).unwrap();
        assert_eq!(eig.values, vec![-0.5]);
        assert_eq!(eig.vector(0).unwrap(), &[1.0]);
    }

    #[test]
    fn free_particle_chain_matches_cosine_band() {
        // Zero diagonal, unit hopping: eigenvalues 2 cos(k pi / (n + 1)).
        let n = 40;
        let eig = symmetric_tridiagonal_eigen(&vec![0.0; n], &vec![1.0; n - 1], false).unwrap();
        let mut exact: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        exact.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in eig.values.iter().zip(&exact) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-13);
        }
    }

    #[test]
    fn vectors_are_eigenpairs_and_orthonormal() {
        let n = 60;
        let diag: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let off: Vec<f64> = (0..n - 1).map(|i| 0.5 + (i as f64 * 0.11).cos()).collect();
        let eig = symmetric_tridiagonal_eigen(&diag, &off, true).unwrap();
        for k in 0..n {
            let v = eig.vector(k).unwrap();
            assert!(residual(&diag, &off, eig.values[k], v) < 1e-12);
            for q in 0..n {
                let w = eig.vector(q).unwrap();
                let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                let want = if k == q { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(dot, want, epsilon = 1e-12);
            }
        }
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn works_in_single_precision() {
        let eig = symmetric_tridiagonal_eigen(&[1.0f32; 3], &[2.0f32.sqrt(); 2], true).unwrap();
        let want = [-1.0f32, 1.0, 3.0];
        for (a, b) in eig.values.iter().zip(want) {
            assert!((a - b).abs() < 1e-5);
        }
    }

    #[test]
    fn split_matrix_with_zero_coupling() {
        let eig = symmetric_tridiagonal_eigen(&[3.0, 1.0, 2.0], &[0.0, 0.0], true).unwrap();
        assert_eq!(eig.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(eig.vector(0).unwrap(), &[0.0, 1.0, 0.0]);
    }
}
