//! Tavis-Cummings Hamiltonian restricted to an invariant `(r, c)` block.
//!
//! With `N` resonant two-level molecules and one field mode (energies in
//! units of the mode quantum), `H = R3 + a†a - κ a R+ - κ* a† R-` conserves
//! the cooperation number `r` and the excitation number `c = m + n`. Each
//! `(r, c)` block is spanned by `|n>|r, c - n>` for
//! `n = max(0, c - r) ..= c + r` and is tridiagonal with constant diagonal
//! `c`. The phases of `κ`, `R±` and `a` are absorbed into the basis so the
//! block is real with non-negative couplings.

use crate::error::{Error, Result};
use crate::scalar::{HalfInt, Real};
use crate::tridiag::symmetric_tridiagonal_eigen;

/// Labels one invariant block: cooperation number, excitation number and
/// coupling magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockIndex<T> {
    r: HalfInt,
    c: HalfInt,
    kappa: T,
}

impl<T: Real> BlockIndex<T> {
    pub fn new(r: HalfInt, c: HalfInt, kappa: T) -> Result<Self> {
        block_basis(r, c)?;
        if !(kappa.is_finite() && kappa > T::zero()) {
            return Err(Error::param("kappa", format!("must be finite and > 0, got {kappa}")));
        }
        Ok(BlockIndex { r, c, kappa })
    }

    /// Convenience constructor from doubled quantum numbers `2r`, `2c`.
    pub fn from_doubled(r2: i64, c2: i64, kappa: T) -> Result<Self> {
        Self::new(HalfInt::from_doubled(r2), HalfInt::from_doubled(c2), kappa)
    }

    pub fn r(&self) -> HalfInt {
        self.r
    }

    pub fn c(&self) -> HalfInt {
        self.c
    }

    pub fn kappa(&self) -> T {
        self.kappa
    }

    pub fn with_kappa(self, kappa: T) -> Result<Self> {
        Self::new(self.r, self.c, kappa)
    }

    pub fn basis(&self) -> BasisRange {
        block_basis(self.r, self.c).expect("validated at construction")
    }
}

/// Photon-number range `n_min ..= n_max` spanned by a block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisRange {
    pub n_min: u64,
    pub n_max: u64,
}

impl BasisRange {
    pub fn dim(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn photon_numbers(&self) -> impl Iterator<Item = u64> + Clone {
        self.n_min..=self.n_max
    }
}

/// Photon-number range of block `(r, c)`.
pub fn block_basis(r: HalfInt, c: HalfInt) -> Result<BasisRange> {
    let (r2, c2) = (r.doubled(), c.doubled());
    if r2 < 0 {
        return Err(Error::param("r", format!("cooperation number must be >= 0, got {r}")));
    }
    if (r2 - c2).rem_euclid(2) != 0 {
        return Err(Error::Parity { r2, c2 });
    }
    if c2 < -r2 {
        return Err(Error::EmptyBlock { r, c });
    }
    let n_min = ((c2 - r2) / 2).max(0) as u64;
    let n_max = ((c2 + r2) / 2) as u64;
    Ok(BasisRange { n_min, n_max })
}

/// The real symmetric tridiagonal matrix of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianBlock<T> {
    pub index: BlockIndex<T>,
    pub basis: BasisRange,
    pub diagonal: Vec<T>,
    /// `offdiagonal[i]` couples photon numbers `n_min + i` and `n_min + i + 1`.
    pub offdiagonal: Vec<T>,
}

impl<T: Real> HamiltonianBlock<T> {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

/// `4 [r(r+1) - (c-n)(c-n+1)]`, the doubled-unit radicand of `R-` acting on
/// `|r, c-n+1>`.
fn lowering_radicand(r2: i64, c2: i64, n: i64) -> i64 {
    let m2 = c2 - 2 * n;
    r2 * (r2 + 2) - m2 * (m2 + 2)
}

/// Builds the gauge-fixed block: diagonal `c`, couplings
/// `t_n = |κ| √n √(r(r+1) - (c-n)(c-n+1))` for `n = n_min+1 ..= n_max`.
pub fn build_block<T: Real>(index: BlockIndex<T>) -> Result<HamiltonianBlock<T>> {
    let basis = index.basis();
    let (r2, c2) = (index.r.doubled(), index.c.doubled());
    let c: T = index.c.to_real();
    let diagonal = vec![c; basis.dim()];
    let half = T::lit(0.5);
    let offdiagonal = (basis.n_min + 1..=basis.n_max)
        .map(|n| {
            let rad = lowering_radicand(r2, c2, n as i64);
            if rad <= 0 {
                return Err(Error::Internal(format!(
                    "non-positive coupling radicand {rad} at n = {n} in block r = {}, c = {}",
                    index.r, index.c
                )));
            }
            let prod = T::lit(n as f64) * T::lit(rad as f64);
            Ok(index.kappa * half * prod.sqrt())
        })
        .collect::<Result<Vec<T>>>()?;
    Ok(HamiltonianBlock {
        index,
        basis,
        diagonal,
        offdiagonal,
    })
}

/// Eigenvalues and photon-number amplitudes of one block.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSolution<T> {
    pub block: BlockIndex<T>,
    pub basis: BasisRange,
    /// Ascending.
    pub eigenvalues: Vec<T>,
    amplitudes: Vec<T>,
}

impl<T: Real> EigenSolution<T> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Amplitudes `A_n` of eigenstate `k` over `n = n_min ..= n_max`.
    pub fn amplitudes(&self, k: usize) -> Result<&[T]> {
        let dim = self.dim();
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        Ok(&self.amplitudes[k * dim..(k + 1) * dim])
    }

    /// The `j` label of state `k`, defined only for full blocks (`dim = 2r + 1`).
    pub fn j_label(&self, k: usize) -> Option<HalfInt> {
        let full = self.block.r.doubled() + 1;
        (self.dim() as i64 == full && k < self.dim())
            .then(|| HalfInt::from_doubled(2 * k as i64) - self.block.r)
    }

    pub fn ground_energy(&self) -> T {
        self.eigenvalues[0]
    }
}

fn no_convergence<T: Real>(block: &HamiltonianBlock<T>) -> Error {
    Error::NoConvergence {
        r: block.index.r,
        c: block.index.c,
        dim: block.dim(),
    }
}

/// Full ascending spectrum and oriented orthonormal eigenvectors.
pub fn diagonalize<T: Real>(block: &HamiltonianBlock<T>) -> Result<EigenSolution<T>> {
    let eig = symmetric_tridiagonal_eigen(&block.diagonal, &block.offdiagonal, true)
        .map_err(|_| no_convergence(block))?;
    Ok(EigenSolution {
        block: block.index,
        basis: block.basis,
        eigenvalues: eig.values,
        amplitudes: eig.vectors.expect("vectors requested"),
    })
}

/// Ascending eigenvalues without eigenvectors.
pub fn eigenvalues<T: Real>(block: &HamiltonianBlock<T>) -> Result<Vec<T>> {
    symmetric_tridiagonal_eigen(&block.diagonal, &block.offdiagonal, false)
        .map(|eig| eig.values)
        .map_err(|_| no_convergence(block))
}

/// Photon-number distribution of one eigenstate and its first two moments.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonStatistics<T> {
    pub n_min: u64,
    /// `p_n = |A_n|^2`, normalized, over `n_min ..= n_max`.
    pub distribution: Vec<T>,
    pub n0: T,
    pub sigma2: T,
    /// `<R3> = c - n0`.
    pub molecular_mean: T,
}

pub fn photon_statistics<T: Real>(solution: &EigenSolution<T>, k: usize) -> Result<PhotonStatistics<T>> {
    let amps = solution.amplitudes(k)?;
    let weights: Vec<T> = amps.iter().map(|&a| a * a).collect();
    let total: T = weights.iter().copied().sum();
    let distribution: Vec<T> = weights.iter().map(|&w| w / total).collect();
    let ns = solution.basis.photon_numbers().map(|n| T::lit(n as f64));
    let n0: T = distribution.iter().zip(ns.clone()).map(|(&p, n)| p * n).sum();
    let sigma2: T = distribution
        .iter()
        .zip(ns)
        .map(|(&p, n)| p * (n - n0) * (n - n0))
        .sum();
    let c: T = solution.block.c.to_real();
    Ok(PhotonStatistics {
        n_min: solution.basis.n_min,
        distribution,
        n0,
        sigma2,
        molecular_mean: c - n0,
    })
}

/// Closed-form ground-state mean photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundMeanPrediction<T> {
    /// `(2/3)(c + 1/2) + (1/3)√(3r² + 3r + 3/4 + c² + c + 1/4)`
    pub full: T,
    /// `(2/3)c + (1/3)√(3r² + c²)`
    pub asymptotic: T,
}

pub fn predicted_ground_mean<T: Real>(index: &BlockIndex<T>) -> GroundMeanPrediction<T> {
    ground_mean_formula(index.r.to_real(), index.c.to_real())
}

/// [`predicted_ground_mean`] for arbitrary real `r`, `c`.
pub fn ground_mean_formula<T: Real>(r: T, c: T) -> GroundMeanPrediction<T> {
    let (two, three) = (T::lit(2.0), T::lit(3.0));
    let third = T::one() / three;
    let half = T::lit(0.5);
    let inner = three * r * r + three * r + T::lit(0.75) + c * c + c + T::lit(0.25);
    GroundMeanPrediction {
        full: two * third * (c + half) + third * inner.sqrt(),
        asymptotic: two * third * c + third * (three * r * r + c * c).sqrt(),
    }
}

/// Inverse of the asymptotic ground-mean formula: the excitation number `c`
/// whose ground state has mean photon number `n0` at cooperation `r`,
/// `c = 2 n0 - √(n0² + r²)`.
pub fn excitation_for_ground_mean<T: Real>(r: T, n0: T) -> T {
    T::lit(2.0) * n0 - (n0 * n0 + r * r).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariancePrediction<T> {
    pub sigma2: T,
    /// Whether `c > r > 1`, the stated validity range.
    pub in_regime: bool,
}

/// Closed-form ground-state photon variance
/// `σ² = ½ √( n0 [r² - (n0 - c)²] / (3 n0 - 2c) )`.
pub fn predicted_ground_variance<T: Real>(index: &BlockIndex<T>, n0: T) -> Result<VariancePrediction<T>> {
    ground_variance_formula(index.r.to_real(), index.c.to_real(), n0)
}

/// [`predicted_ground_variance`] for arbitrary real `r`, `c`.
pub fn ground_variance_formula<T: Real>(r: T, c: T, n0: T) -> Result<VariancePrediction<T>> {
    let denom = T::lit(3.0) * n0 - T::lit(2.0) * c;
    if !(denom > T::zero()) {
        return Err(Error::Domain(format!(
            "variance formula needs 3 n0 - 2c > 0 (n0 = {n0}, c = {c})"
        )));
    }
    let spread = r * r - (n0 - c) * (n0 - c);
    let radicand = n0 * spread / denom;
    if radicand < T::zero() {
        return Err(Error::Domain(format!(
            "variance formula needs |n0 - c| <= r (n0 = {n0}, c = {c}, r = {r})"
        )));
    }
    Ok(VariancePrediction {
        sigma2: T::lit(0.5) * radicand.sqrt(),
        in_regime: c > r && r > T::one(),
    })
}

/// Effective ground eigenvalue `q0 = (c - λ_min) / |κ|`.
pub fn effective_ground_eigenvalue<T: Real>(solution: &EigenSolution<T>) -> T {
    let c: T = solution.block.c.to_real();
    (c - solution.ground_energy()) / solution.block.kappa
}

/// Linear ladder `λ_j = c + 2 j |κ| √n0` for `j = -r ..= r`.
pub fn predicted_spectrum_linear<T: Real>(index: &BlockIndex<T>, n0: T) -> Vec<T> {
    let c: T = index.c.to_real();
    let step = T::lit(2.0) * index.kappa * n0.sqrt();
    let r2 = index.r.doubled();
    (0..=r2)
        .map(|k| {
            let j = HalfInt::from_doubled(2 * k - r2).to_real::<T>();
            c + j * step
        })
        .collect()
}

/// Ordinary least-squares fit of eigenvalue against level label.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
}

/// Fits `λ_k` against `j = k - r` for a full block.
pub fn ladder_regression<T: Real>(solution: &EigenSolution<T>) -> Result<LinearFit<T>> {
    if solution.j_label(0).is_none() {
        return Err(Error::Domain(format!(
            "ladder regression needs a full block (dim = 2r + 1); r = {}, dim = {}",
            solution.block.r,
            solution.dim()
        )));
    }
    let xs: Vec<T> = (0..solution.dim())
        .map(|k| solution.j_label(k).unwrap().to_real())
        .collect();
    linear_fit(&xs, &solution.eigenvalues)
}

pub fn linear_fit<T: Real>(xs: &[T], ys: &[T]) -> Result<LinearFit<T>> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::param("xs", "need at least two paired points"));
    }
    let n = T::from_count(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let sxx: T = xs.iter().map(|&x| (x - mx) * (x - mx)).sum();
    let sxy: T = xs.iter().zip(ys).map(|(&x, &y)| (x - mx) * (y - my)).sum();
    let syy: T = ys.iter().map(|&y| (y - my) * (y - my)).sum();
    if sxx == T::zero() {
        return Err(Error::param("xs", "abscissae are all equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: T = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let r_squared = if syy > T::zero() { T::one() - sse / syy } else { T::one() };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Discrete Gaussian `p_n ∝ exp(-(n - n0)² / 2σ²)` normalized over the basis.
pub fn gaussian_profile<T: Real>(n0: T, sigma2: T, basis: BasisRange) -> Result<Vec<T>> {
    if !(sigma2 > T::zero()) {
        return Err(Error::param("sigma2", format!("must be > 0, got {sigma2}")));
    }
    let two = T::lit(2.0);
    let raw: Vec<T> = basis
        .photon_numbers()
        .map(|n| {
            let d = T::lit(n as f64) - n0;
            (-(d * d) / (two * sigma2)).exp()
        })
        .collect();
    let total: T = raw.iter().copied().sum();
    if !(total > T::zero()) {
        return Err(Error::Domain(format!(
            "Gaussian centred at {n0} has no weight on [{}, {}]",
            basis.n_min, basis.n_max
        )));
    }
    Ok(raw.into_iter().map(|p| p / total).collect())
}

/// Largest absolute difference between two distributions on the same support.
pub fn max_abs_deviation<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (&x, &y)| acc.max((x - y).abs()))
}
