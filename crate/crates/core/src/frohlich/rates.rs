use super::{BathParams, LevelLadder};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Planck occupation `1 / (e^{ωβ} - 1)`.
pub fn planck_occupation<T: Real>(omega: T, beta: T) -> Result<T> {
    let x = omega * beta;
    if !(x > T::zero()) {
        return Err(Error::param("omega*beta", format!("must be > 0, got {x}")));
    }
    Ok(T::one() / x.exp_m1())
}

/// First-order loss `φ (n e^{ωβ} - (1 + n))`.
pub fn first_order_loss<T: Real>(n: T, omega: T, bath: &BathParams<T>) -> T {
    bath.phi * (n * (omega * bath.beta).exp_m1() - T::one())
}

/// Second-order loss of level `l`:
/// `χ Σ_j [n_l (1 + n_j) e^{(ω_l - ω_j)β} - n_j (1 + n_l)]`.
pub fn second_order_loss<T: Real>(
    l: usize,
    occupations: &[T],
    ladder: &LevelLadder<T>,
    bath: &BathParams<T>,
) -> Result<T> {
    check_len(occupations, ladder)?;
    if l >= occupations.len() {
        return Err(Error::IndexOutOfRange {
            index: l,
            dim: occupations.len(),
        });
    }
    if bath.chi == T::zero() {
        return Ok(T::zero());
    }
    let omegas = ladder.omegas();
    let nl = occupations[l];
    let sum: T = occupations
        .iter()
        .zip(omegas)
        .enumerate()
        .filter(|&(j, _)| j != l)
        .map(|(_, (&nj, &wj))| nl * (T::one() + nj) * ((omegas[l] - wj) * bath.beta).exp() - nj * (T::one() + nl))
        .sum();
    Ok(bath.chi * sum)
}

fn check_len<T: Real>(occupations: &[T], ladder: &LevelLadder<T>) -> Result<()> {
    if occupations.len() != ladder.len() {
        return Err(Error::param(
            "occupations",
            format!("expected {} levels, got {}", ladder.len(), occupations.len()),
        ));
    }
    Ok(())
}

/// Pumped occupation `(1 + s / (φ + χη)) / (A e^{ωβ} - 1)`.
pub fn pumped_occupation<T: Real>(omega: T, s: T, bath: &BathParams<T>, eta: T, a: T) -> Result<T> {
    let denom = a * (omega * bath.beta).exp() - T::one();
    if !(denom > T::zero()) {
        return Err(Error::Unphysical(format!(
            "A e^(ωβ) - 1 = {denom} <= 0 at ω = {omega}: chemical potential reached the level"
        )));
    }
    Ok((T::one() + s / (bath.phi + bath.chi * eta)) / denom)
}

/// Amplification factor `A = (φ + χ Σ_j (1 + n_j) e^{-ω_j β}) / (φ + χη)`.
pub fn amplification_factor<T: Real>(
    occupations: &[T],
    ladder: &LevelLadder<T>,
    bath: &BathParams<T>,
    eta: T,
) -> Result<T> {
    check_len(occupations, ladder)?;
    let x: T = occupations
        .iter()
        .zip(ladder.omegas())
        .map(|(&n, &w)| (T::one() + n) * (-w * bath.beta).exp())
        .sum();
    Ok((bath.phi + bath.chi * x) / (bath.phi + bath.chi * eta))
}

/// `A = 1 - χ S / (φ (φ + χη))`, the form that follows from eliminating the
/// occupations with the balance expression for `S`.
pub fn amplification_from_transfer<T: Real>(transfer: T, eta: T, bath: &BathParams<T>) -> T {
    T::one() - bath.chi * transfer / (bath.phi * (bath.phi + bath.chi * eta))
}

/// The misprinted variant `1 - χ S / (φ (φ + ηφ))`, kept for comparison only.
pub fn amplification_as_printed<T: Real>(transfer: T, eta: T, bath: &BathParams<T>) -> T {
    T::one() - bath.chi * transfer / (bath.phi * (bath.phi + eta * bath.phi))
}

/// `S = s Σ_j e^{-ω_j β}`
pub fn excitation_transfer_supply<T: Real>(s: T, ladder: &LevelLadder<T>, bath: &BathParams<T>) -> T {
    s * ladder.boltzmann_sum(bath.beta)
}

/// `S = φ Σ_j [n_j - (1 + n_j) e^{-ω_j β}]`
pub fn excitation_transfer_balance<T: Real>(
    occupations: &[T],
    ladder: &LevelLadder<T>,
    bath: &BathParams<T>,
) -> Result<T> {
    check_len(occupations, ladder)?;
    let sum: T = occupations
        .iter()
        .zip(ladder.omegas())
        .map(|(&n, &w)| n - (T::one() + n) * (-w * bath.beta).exp())
        .sum();
    Ok(bath.phi * sum)
}

/// `μ = -ln(A) / β`; requires `0 < A <= 1`.
pub fn chemical_potential<T: Real>(a: T, beta: T) -> Result<T> {
    if !(a > T::zero()) {
        return Err(Error::Unphysical(format!("amplification factor {a} is not positive")));
    }
    if a > T::one() {
        return Err(Error::Unphysical(format!(
            "amplification factor {a} exceeds 1 (negative chemical potential)"
        )));
    }
    Ok(-a.ln() / beta)
}
