//! Dicke multiplet counting and thermal moments of `N` uncoupled two-level
//! molecules.
//!
//! The collective states `|r, m>` of `N` molecules have energy `m` (in units
//! of the level splitting) and the spin-`r` multiplet occurs `P(r)` times.
//! Closed forms for the thermal moments of `m` and `r(r+1)` are provided
//! alongside an exact enumeration over `(r, m)` used to check them.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{HalfInt, Real};

/// Largest `N` for which [`degeneracy`] returns an exact integer.
pub const EXACT_DEGENERACY_LIMIT: u32 = 30;
/// Largest `N` accepted by [`enumeration_oracle`].
pub const ENUMERATION_LIMIT: u32 = 14;

/// Inverse temperature in units of the level splitting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta<T> {
    Finite(T),
    /// Zero temperature; every molecule in its lower level.
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnsembleParams<T> {
    molecules: u32,
    beta: Beta<T>,
}

impl<T: Real> EnsembleParams<T> {
    pub fn new(molecules: u32, beta: Beta<T>) -> Result<Self> {
        if molecules == 0 {
            return Err(Error::param("N", "need at least one molecule"));
        }
        if let Beta::Finite(b) = beta {
            if !(b.is_finite() && b >= T::zero()) {
                return Err(Error::param("beta", format!("must be finite and >= 0, got {b}")));
            }
        }
        Ok(EnsembleParams { molecules, beta })
    }

    pub fn finite(molecules: u32, beta: T) -> Result<Self> {
        Self::new(molecules, Beta::Finite(beta))
    }

    pub fn molecules(&self) -> u32 {
        self.molecules
    }

    pub fn beta(&self) -> Beta<T> {
        self.beta
    }

    fn n(&self) -> T {
        T::lit(self.molecules as f64)
    }

    /// `tanh(β/2)`, exactly 1 at zero temperature.
    fn polarization(&self) -> T {
        match self.beta {
            Beta::Finite(b) => (b * T::lit(0.5)).tanh(),
            Beta::Infinite => T::one(),
        }
    }
}

fn check_multiplet(molecules: u32, r: HalfInt) -> Result<()> {
    let r2 = r.doubled();
    if r2 < 0 || r2 > molecules as i64 {
        return Err(Error::param("r", format!("need 0 <= r <= N/2 = {}/2, got {r}", molecules)));
    }
    if (r2 - molecules as i64) % 2 != 0 {
        return Err(Error::Parity { r2, c2: molecules as i64 });
    }
    Ok(())
}

fn check_projection(molecules: u32, m: HalfInt) -> Result<()> {
    let m2 = m.doubled();
    if m2.abs() > molecules as i64 {
        return Err(Error::param("m", format!("need |m| <= N/2 = {}/2, got {m}", molecules)));
    }
    if (m2 - molecules as i64) % 2 != 0 {
        return Err(Error::Parity { r2: m2, c2: molecules as i64 });
    }
    Ok(())
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Multiplicity `P(r)` of the spin-`r` multiplet, either exact or as a
/// natural logarithm past [`EXACT_DEGENERACY_LIMIT`].
#[derive(Debug, Clone, PartialEq)]
pub enum Degeneracy {
    Exact(BigUint),
    Log(f64),
}

impl Degeneracy {
    pub fn ln(&self) -> f64 {
        match self {
            Degeneracy::Exact(v) => v.to_f64().map_or(f64::INFINITY, f64::ln),
            Degeneracy::Log(l) => *l,
        }
    }
}

/// `P(r) = N! (2r+1) / ((N/2 + r + 1)! (N/2 - r)!)`.
pub fn degeneracy(molecules: u32, r: HalfInt) -> Result<Degeneracy> {
    if molecules <= EXACT_DEGENERACY_LIMIT {
        degeneracy_exact(molecules, r).map(Degeneracy::Exact)
    } else {
        ln_degeneracy(molecules, r).map(Degeneracy::Log)
    }
}

/// Exact `P(r)` for any `N`.
pub fn degeneracy_exact(molecules: u32, r: HalfInt) -> Result<BigUint> {
    check_multiplet(molecules, r)?;
    let n = molecules as u64;
    let r2 = r.doubled() as u64;
    let upper = (n + r2) / 2;
    let lower = (n - r2) / 2;
    let num = factorial(n) * (r2 + 1);
    let den = factorial(upper + 1) * factorial(lower);
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// `ln P(r)` via log-gamma.
pub fn ln_degeneracy(molecules: u32, r: HalfInt) -> Result<f64> {
    use statrs::function::gamma::ln_gamma;
    check_multiplet(molecules, r)?;
    let n = molecules as f64;
    let r = r.to_f64();
    Ok(ln_gamma(n + 1.0) + (2.0 * r + 1.0).ln() - ln_gamma(n / 2.0 + r + 2.0) - ln_gamma(n / 2.0 - r + 1.0))
}

/// Cooperation numbers allowed for `N` molecules, ascending.
pub fn multiplets(molecules: u32) -> impl Iterator<Item = HalfInt> {
    (molecules as i64 % 2..=molecules as i64)
        .step_by(2)
        .map(HalfInt::from_doubled)
}

/// Thermal mean of `m` with its high-temperature approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MolecularMean<T> {
    /// `-(N/2) tanh(β/2)`
    pub value: T,
    /// `-Nβ/4`; infinite at zero temperature.
    pub small_beta: T,
    /// The approximation is quoted for `β < 1`.
    pub small_beta_valid: bool,
}

pub fn thermal_m_mean<T: Real>(params: &EnsembleParams<T>) -> MolecularMean<T> {
    let n = params.n();
    let value = -(n / T::lit(2.0)) * params.polarization();
    let (small_beta, small_beta_valid) = match params.beta {
        Beta::Finite(b) => (-n * b / T::lit(4.0), b < T::one()),
        Beta::Infinite => (T::neg_infinity(), false),
    };
    MolecularMean {
        value,
        small_beta,
        small_beta_valid,
    }
}

/// `σ²(m) = N/4 - m_AV²/N`.
pub fn thermal_m_variance<T: Real>(params: &EnsembleParams<T>) -> T {
    let n = params.n();
    let m = thermal_m_mean(params).value;
    n / T::lit(4.0) - m * m / n
}

/// Degeneracy average of `r(r+1)` at fixed `m`: `N/2 + m²`.
pub fn r2_mean_given_m<T: Real>(molecules: u32, m: HalfInt) -> Result<T> {
    check_projection(molecules, m)?;
    let m: T = m.to_real();
    Ok(T::lit(molecules as f64) / T::lit(2.0) + m * m)
}

/// Exact rational form of [`r2_mean_given_m`].
pub fn r2_mean_given_m_exact(molecules: u32, m: HalfInt) -> Result<BigRational> {
    check_projection(molecules, m)?;
    let n = BigRational::new(molecules.into(), 2.into());
    let m = BigRational::new(m.doubled().into(), 2.into());
    Ok(n + &m * &m)
}

/// Degeneracy spread of `r(r+1)` at fixed `m`: `N²/4 - m²`.
pub fn r2_spread_given_m<T: Real>(molecules: u32, m: HalfInt) -> Result<T> {
    check_projection(molecules, m)?;
    let n = T::lit(molecules as f64);
    let m: T = m.to_real();
    Ok(n * n / T::lit(4.0) - m * m)
}

/// Exact rational form of [`r2_spread_given_m`].
pub fn r2_spread_given_m_exact(molecules: u32, m: HalfInt) -> Result<BigRational> {
    check_projection(molecules, m)?;
    let n = BigRational::from_integer(molecules.into());
    let m = BigRational::new(m.doubled().into(), 2.into());
    Ok(&n * &n / BigRational::from_integer(4.into()) - &m * &m)
}

/// Thermal mean of `r(r+1)`: `3N/4 + m_AV² (1 - 1/N)`.
pub fn thermal_r2_mean<T: Real>(params: &EnsembleParams<T>) -> T {
    let n = params.n();
    let m = thermal_m_mean(params).value;
    T::lit(0.75) * n + m * m * (T::one() - T::one() / n)
}

/// Thermal variance of `r(r+1)` in the printed closed form
/// `N(N-1)/8 + ((N-1)(N-2)/N) m_AV² - (2(2N-3)(N-1)/N³) m_AV⁴`.
///
/// This equals the thermal variance of `m²` (the spread of the fixed-`m`
/// mean `N/2 + m²`); the enumeration variance of `r(r+1)` additionally
/// contains the thermal average of the fixed-`m` spread, see
/// [`thermal_sigma_r2`].
pub fn thermal_r2_variance<T: Real>(params: &EnsembleParams<T>) -> T {
    let n = params.n();
    let one = T::one();
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let m2 = {
        let m = thermal_m_mean(params).value;
        m * m
    };
    n * (n - one) / T::lit(8.0) + (n - one) * (n - two) / n * m2
        - two * (two * n - three) * (n - one) / (n * n * n) * m2 * m2
}

/// Thermal average of the fixed-`m` spread: `(N(N-1)/4)(1 - 4 m_AV²/N²)`.
pub fn thermal_sigma_r2<T: Real>(params: &EnsembleParams<T>) -> T {
    let n = params.n();
    let m = thermal_m_mean(params).value;
    n * (n - T::one()) / T::lit(4.0) * (T::one() - T::lit(4.0) * m * m / (n * n))
}

/// Every closed-form thermal moment at one `(N, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalMoments<T> {
    pub m_mean: T,
    pub m_variance: T,
    pub r2_mean: T,
    pub r2_variance: T,
    pub sigma_r2_mean: T,
}

pub fn thermal_moments<T: Real>(params: &EnsembleParams<T>) -> ThermalMoments<T> {
    ThermalMoments {
        m_mean: thermal_m_mean(params).value,
        m_variance: thermal_m_variance(params),
        r2_mean: thermal_r2_mean(params),
        r2_variance: thermal_r2_variance(params),
        sigma_r2_mean: thermal_sigma_r2(params),
    }
}

/// Exact degeneracy averages over the multiplets reaching projection `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedProjection {
    /// Number of product states with this `m`, `Σ_{r >= |m|} P(r)`.
    pub count: BigUint,
    pub r2_mean: BigRational,
    pub r2_variance: BigRational,
}

pub fn fixed_projection_oracle(molecules: u32, m: HalfInt) -> Result<FixedProjection> {
    check_projection(molecules, m)?;
    let mut count = BigUint::zero();
    let mut first = BigRational::zero();
    let mut second = BigRational::zero();
    for r in multiplets(molecules).filter(|r| r.doubled() >= m.doubled().abs()) {
        let p = degeneracy_exact(molecules, r)?;
        let r2 = r.doubled();
        let x = BigRational::new((r2 * (r2 + 2)).into(), 4.into());
        let w = BigRational::from_integer(p.clone().into());
        first += &w * &x;
        second += &w * &x * &x;
        count += p;
    }
    let total = BigRational::from_integer(count.clone().into());
    let r2_mean = first / &total;
    let r2_variance = second / &total - &r2_mean * &r2_mean;
    Ok(FixedProjection {
        count,
        r2_mean,
        r2_variance,
    })
}

/// Thermal moments by direct summation over `(r, m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedMoments<T> {
    /// `Σ_r P(r) Σ_m e^{-βm}`; infinite at zero temperature.
    pub z: T,
    /// `(2 cosh(β/2))^N`.
    pub z_product: T,
    /// `<m^k>` for `k = 1..=4`.
    pub m_raw: [T; 4],
    /// `<(r(r+1))^k>` for `k = 1..=4`.
    pub r2_raw: [T; 4],
    pub m_mean: T,
    pub m_variance: T,
    pub r2_mean: T,
    pub r2_variance: T,
    /// Thermal variance of `m²`.
    pub m_squared_variance: T,
    /// Thermal average of the exact fixed-`m` variance of `r(r+1)`.
    pub sigma_r2_mean: T,
}

pub fn enumeration_oracle<T: Real>(params: &EnsembleParams<T>) -> Result<EnumeratedMoments<T>> {
    let molecules = params.molecules;
    if molecules > ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            dim: molecules as usize,
            limit: ENUMERATION_LIMIT as usize,
        });
    }
    let half_n = T::lit(molecules as f64 / 2.0);

    // Weights are shifted by e^{-βN/2} so the largest is 1.
    let weight = |m: T| -> T {
        match params.beta {
            Beta::Finite(b) => (-b * (m + half_n)).exp(),
            Beta::Infinite => {
                if m == -half_n {
                    T::one()
                } else {
                    T::zero()
                }
            }
        }
    };

    let mut norm = T::zero();
    let mut m_raw = [T::zero(); 4];
    let mut r2_raw = [T::zero(); 4];
    for r in multiplets(molecules) {
        let p = T::lit(degeneracy_exact(molecules, r)?.to_f64().expect("small N"));
        let x: T = {
            let rr: T = r.to_real();
            rr * (rr + T::one())
        };
        for m2 in (-r.doubled()..=r.doubled()).step_by(2) {
            let m: T = HalfInt::from_doubled(m2).to_real();
            let w = p * weight(m);
            norm += w;
            let (mut mk, mut xk) = (T::one(), T::one());
            for k in 0..4 {
                mk *= m;
                xk *= x;
                m_raw[k] += w * mk;
                r2_raw[k] += w * xk;
            }
        }
    }
    for k in 0..4 {
        m_raw[k] /= norm;
        r2_raw[k] /= norm;
    }

    let mut sigma_r2_mean = T::zero();
    for m2 in (-(molecules as i64)..=molecules as i64).step_by(2) {
        let m = HalfInt::from_doubled(m2);
        let fixed = fixed_projection_oracle(molecules, m)?;
        let count = T::lit(fixed.count.to_f64().expect("small N"));
        let spread = T::lit(fixed.r2_variance.to_f64().expect("finite"));
        sigma_r2_mean += count * weight(m.to_real()) * spread;
    }
    sigma_r2_mean /= norm;

    let (z, z_product) = match params.beta {
        Beta::Finite(b) => (
            norm * (b * half_n).exp(),
            (T::lit(2.0) * (b * T::lit(0.5)).cosh()).powi(molecules as i32),
        ),
        Beta::Infinite => (T::infinity(), T::infinity()),
    };

    Ok(EnumeratedMoments {
        z,
        z_product,
        m_raw,
        r2_raw,
        m_mean: m_raw[0],
        m_variance: m_raw[1] - m_raw[0] * m_raw[0],
        r2_mean: r2_raw[0],
        r2_variance: r2_raw[1] - r2_raw[0] * r2_raw[0],
        m_squared_variance: m_raw[3] - m_raw[1] * m_raw[1],
        sigma_r2_mean,
    })
}
