//! Closed-form companions of the steady-state solver: the non-condensate
//! bound, the linear growth of the total occupation, the threshold estimate
//! and the photon-number dispersion far above threshold.

use super::rates::planck_occupation;
use super::{BathParams, LevelLadder};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectrum::{excitation_for_ground_mean, ground_variance_formula};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoncondensateBound<T> {
    /// Largest `n_n` with `n_n (φ + χ n_n) / (φ + χ n_n + s) <= B`.
    pub bound: T,
    /// `B = Σ_{j != -r} 1 / (e^{(ω_j - ω_{-r})β} - 1)`
    pub b: T,
    /// `√(B s / χ)`; `None` when `χ = 0`.
    pub asymptote: Option<T>,
}

/// Left-hand side `n_n (φ + χ n_n) / (φ + χ n_n + s)` of the bound.
pub fn noncondensate_bound_lhs<T: Real>(n_n: T, s: T, bath: &BathParams<T>) -> T {
    let denom = bath.phi + bath.chi * n_n;
    n_n * denom / (denom + s)
}

pub fn noncondensate_bound<T: Real>(s: T, bath: &BathParams<T>, ladder: &LevelLadder<T>) -> Result<NoncondensateBound<T>> {
    if !(s >= T::zero()) {
        return Err(Error::param("s", format!("must be >= 0, got {s}")));
    }
    if let Some(level) = ladder.degenerate_level() {
        return Err(Error::DegenerateLadder { level });
    }
    let ground = ladder.ground();
    let b: T = ladder.omegas()[1..]
        .iter()
        .map(|&w| T::one() / ((w - ground) * bath.beta).exp_m1())
        .sum();
    let BathParams { phi, chi, .. } = *bath;
    if chi == T::zero() {
        return Ok(NoncondensateBound {
            bound: b * (T::one() + s / phi),
            b,
            asymptote: None,
        });
    }
    // χ n² + (φ - χB) n - B(φ + s) = 0, larger root.
    let lin = phi - chi * b;
    let disc = (lin * lin + T::lit(4.0) * chi * b * (phi + s)).sqrt();
    let bound = if lin > T::zero() {
        T::lit(2.0) * b * (phi + s) / (lin + disc)
    } else {
        (disc - lin) / (T::lit(2.0) * chi)
    };
    Ok(NoncondensateBound {
        bound,
        b,
        asymptote: Some((b * s / chi).sqrt()),
    })
}

/// Total thermal occupation `η_T = Σ_j 1 / (e^{ω_j β} - 1)`.
pub fn eta_thermal<T: Real>(ladder: &LevelLadder<T>, beta: T) -> Result<T> {
    ladder.omegas().iter().map(|&w| planck_occupation(w, beta)).sum()
}

/// `η_T ≈ (2r + 1) / (e^{ϖβ} - 1)` with a single effective frequency.
pub fn eta_thermal_flat<T: Real>(levels: usize, omega_bar: T, beta: T) -> Result<T> {
    Ok(T::from_count(levels) * planck_occupation(omega_bar, beta)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveFrequency<T> {
    pub omega_bar: T,
    /// Whether `ω_{-r} <= ϖ <= ω_r` (with relative slack `1e-9`).
    pub in_range: bool,
}

fn within_ladder<T: Real>(omega_bar: T, ladder: &LevelLadder<T>) -> bool {
    let slack = T::lit(1e-9) * ladder.top();
    omega_bar >= ladder.ground() - slack && omega_bar <= ladder.top() + slack
}

/// Fits `ϖ` so that `η = η_T + (2r+1) s / (φ (e^{ϖβ} - 1))` reproduces the
/// solver's total `eta` at supply `s`.
pub fn fit_effective_frequency<T: Real>(
    s: T,
    eta: T,
    eta_t: T,
    ladder: &LevelLadder<T>,
    bath: &BathParams<T>,
) -> Result<EffectiveFrequency<T>> {
    if !(s > T::zero()) {
        return Err(Error::param("s", "fit needs a reference point with s > 0"));
    }
    let excess = eta - eta_t;
    if !(excess > T::zero()) {
        return Err(Error::Domain(format!(
            "total occupation {eta} does not exceed the thermal value {eta_t}"
        )));
    }
    let ratio = T::from_count(ladder.len()) * s / (bath.phi * excess);
    let omega_bar = ratio.ln_1p() / bath.beta;
    Ok(EffectiveFrequency {
        omega_bar,
        in_range: within_ladder(omega_bar, ladder),
    })
}

/// Linear growth `η = η_T + (2r+1) s / (φ (e^{ϖβ} - 1))`.
pub fn total_occupancy_prediction<T: Real>(
    s: T,
    bath: &BathParams<T>,
    ladder: &LevelLadder<T>,
    eta_t: T,
    omega_bar: T,
) -> Result<T> {
    if !within_ladder(omega_bar, ladder) {
        return Err(Error::Domain(format!(
            "effective frequency {omega_bar} outside [{}, {}]",
            ladder.ground(),
            ladder.top()
        )));
    }
    Ok(eta_t + T::from_count(ladder.len()) * s / (bath.phi * (omega_bar * bath.beta).exp_m1()))
}

/// Condensate prediction `n_c = η_T - η_n + (2r+1) s / (φ (e^{ϖβ} - 1))`.
pub fn condensate_prediction<T: Real>(
    s: T,
    eta_t: T,
    eta_n: T,
    bath: &BathParams<T>,
    ladder: &LevelLadder<T>,
    omega_bar: T,
) -> Result<T> {
    Ok(total_occupancy_prediction(s, bath, ladder, eta_t, omega_bar)? - eta_n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold<T> {
    /// `s0 = (φ / η_T²) (η_T + 2φ/χ)(2B - η_T)`, unclamped.
    pub s0: T,
    /// `2B <= η_T`: the estimate is non-positive and condensation is
    /// immediate.
    pub immediate: bool,
}

pub fn threshold<T: Real>(eta_t: T, b: T, bath: &BathParams<T>) -> Result<Threshold<T>> {
    if !(eta_t > T::zero()) {
        return Err(Error::param("eta_T", format!("must be > 0, got {eta_t}")));
    }
    if !(bath.chi > T::zero()) {
        return Err(Error::param("chi", "threshold estimate needs χ > 0"));
    }
    let two = T::lit(2.0);
    let phi = bath.phi;
    let s0 = phi / (eta_t * eta_t) * ((eta_t + two * phi / bath.chi) * (two * b - eta_t));
    Ok(Threshold {
        s0,
        immediate: two * b <= eta_t,
    })
}

/// Which cooperation number to pair with the lasing-mode photon number.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cooperation<T> {
    Fixed(T),
    /// `r = c`, so `c = r = 3 n_o / 4`.
    EqualToExcitation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dispersion<T> {
    /// `n_o = s η_T / φ`
    pub n_o: T,
    pub r: T,
    /// Excitation number whose ground state has mean `n_o`.
    pub c: T,
    pub sigma2: T,
    pub in_regime: bool,
}

/// Ground-state photon variance of the lasing mode far above threshold.
pub fn above_threshold_dispersion<T: Real>(
    s: T,
    bath: &BathParams<T>,
    eta_t: T,
    cooperation: Cooperation<T>,
) -> Result<Dispersion<T>> {
    if !(s > T::zero()) {
        return Err(Error::param("s", format!("must be > 0, got {s}")));
    }
    let n_o = s * eta_t / bath.phi;
    let (r, c) = match cooperation {
        Cooperation::Fixed(r) => (r, excitation_for_ground_mean(r, n_o)),
        Cooperation::EqualToExcitation => {
            let c = T::lit(0.75) * n_o;
            (c, c)
        }
    };
    let v = ground_variance_formula(r, c, n_o)?;
    Ok(Dispersion {
        n_o,
        r,
        c,
        sigma2: v.sigma2,
        in_regime: v.in_regime,
    })
}

/// Supply at which the condensate fraction has covered half of the way
/// from its value at the first point to 1, interpolated in `ln s` (linearly
/// when the lower point is `s = 0`). `points` are `(s, n_c / η)` sorted by `s`.
pub fn condensation_knee<T: Real>(points: &[(T, T)]) -> Option<T> {
    let &(_, start) = points.first()?;
    let target = (start + T::one()) / T::lit(2.0);
    points.windows(2).find_map(|w| {
        let ((s0, f0), (s1, f1)) = (w[0], w[1]);
        if !(f0 < target && f1 >= target) {
            return None;
        }
        let t = (target - f0) / (f1 - f0);
        Some(if s0 > T::zero() {
            (s0.ln() + t * (s1.ln() - s0.ln())).exp()
        } else {
            s0 + t * (s1 - s0)
        })
    })
}
