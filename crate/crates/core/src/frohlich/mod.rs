//! Pumped, bath-coupled steady state of the `2r + 1` collective levels.
//!
//! Each level `l` of energy `ω_l` exchanges single quanta with a heat bath
//! (rate `φ`), trades quanta with the other levels through the bath
//! (rate `χ`), is pumped at rate `p` and loses quanta to the cavity at rate
//! `Q`. Above a critical net supply `s = p - Q` the excess quanta pile up in
//! the lowest level: the laser analogue of Bose-Einstein condensation.

mod analysis;
mod rates;
mod solver;

pub use analysis::{
    above_threshold_dispersion, condensate_prediction, condensation_knee, eta_thermal, eta_thermal_flat,
    fit_effective_frequency, noncondensate_bound, noncondensate_bound_lhs, threshold, total_occupancy_prediction,
    Cooperation, Dispersion, EffectiveFrequency, NoncondensateBound, Threshold,
};
pub use rates::{
    amplification_as_printed, amplification_factor, amplification_from_transfer, chemical_potential,
    excitation_transfer_balance, excitation_transfer_supply, first_order_loss, planck_occupation,
    pumped_occupation, second_order_loss,
};
pub use solver::{pump_sweep, solve_steady_state, solve_steady_state_with, SolverOptions, SteadyStateSolution};

use crate::error::{Error, Result};
use crate::scalar::{HalfInt, Real};
use crate::spectrum::EigenSolution;

/// How a ladder's level energies were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderSource {
    /// `ω_j = ω (1 + j |κ| / √c_ref)`.
    Analytic,
    /// `ω_j = ω λ_j / c` from a diagonalized block.
    Spectral,
}

/// Level energies `ω_j`, `j = -r ..= r`, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelLadder<T> {
    omegas: Vec<T>,
    source: LadderSource,
}

impl<T: Real> LevelLadder<T> {
    pub fn new(omegas: Vec<T>, source: LadderSource) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::param("omegas", "ladder needs at least one level"));
        }
        for (j, &w) in omegas.iter().enumerate() {
            if !(w.is_finite() && w > T::zero()) {
                return Err(Error::param("omegas", format!("level {j} has non-positive energy {w}")));
            }
        }
        if omegas.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::param("omegas", "level energies must be ascending"));
        }
        Ok(LevelLadder { omegas, source })
    }

    pub fn omegas(&self) -> &[T] {
        &self.omegas
    }

    pub fn source(&self) -> LadderSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// The cooperation number `r` with `len = 2r + 1`.
    pub fn r(&self) -> HalfInt {
        HalfInt::from_doubled(self.omegas.len() as i64 - 1)
    }

    /// `ω_{-r}`
    pub fn ground(&self) -> T {
        self.omegas[0]
    }

    /// `ω_r`
    pub fn top(&self) -> T {
        self.omegas[self.omegas.len() - 1]
    }

    /// First excited level sharing the ground energy, if any.
    pub fn degenerate_level(&self) -> Option<usize> {
        (1..self.omegas.len()).find(|&j| self.omegas[j] <= self.omegas[0])
    }

    pub fn boltzmann_sum(&self, beta: T) -> T {
        self.omegas.iter().map(|&w| (-w * beta).exp()).sum()
    }
}

/// `ω_j = ω (1 + j |κ| / √c_ref)` for `j = -r ..= r`.
pub fn ladder_analytic<T: Real>(r: HalfInt, c_ref: T, omega: T, kappa: T) -> Result<LevelLadder<T>> {
    if r.doubled() < 0 {
        return Err(Error::param("r", format!("must be >= 0, got {r}")));
    }
    if !(c_ref.is_finite() && c_ref > T::zero()) {
        return Err(Error::param("c_ref", format!("must be > 0, got {c_ref}")));
    }
    if !(omega.is_finite() && omega > T::zero()) {
        return Err(Error::param("omega", format!("must be > 0, got {omega}")));
    }
    if !(kappa.is_finite() && kappa >= T::zero()) {
        return Err(Error::param("kappa", format!("must be >= 0, got {kappa}")));
    }
    let step = kappa / c_ref.sqrt();
    let r2 = r.doubled();
    let omegas: Vec<T> = (0..=r2)
        .map(|k| {
            let j: T = HalfInt::from_doubled(2 * k - r2).to_real();
            omega * (T::one() + j * step)
        })
        .collect();
    if !(omegas[0] > T::zero()) {
        return Err(Error::param(
            "kappa",
            format!("lowest level ω(1 - r|κ|/√c_ref) = {} is not positive", omegas[0]),
        ));
    }
    LevelLadder::new(omegas, LadderSource::Analytic)
}

/// `ω_j = ω λ_j / c` for a full `2r + 1` block.
pub fn ladder_from_spectrum<T: Real>(solution: &EigenSolution<T>, omega: T) -> Result<LevelLadder<T>> {
    if solution.j_label(0).is_none() {
        return Err(Error::Domain(format!(
            "ladder needs a full block with dim = 2r + 1 (r = {}, dim = {})",
            solution.block.r(),
            solution.dim()
        )));
    }
    if !(omega.is_finite() && omega > T::zero()) {
        return Err(Error::param("omega", format!("must be > 0, got {omega}")));
    }
    let c: T = solution.block.c().to_real();
    if !(c > T::zero()) {
        return Err(Error::param("c", "spectral ladder needs c > 0"));
    }
    let omegas: Vec<T> = solution.eigenvalues.iter().map(|&l| omega * l / c).collect();
    if let Some(j) = omegas.iter().position(|&w| !(w > T::zero())) {
        return Err(Error::Unphysical(format!(
            "spectral level {j} maps to non-positive energy {}",
            omegas[j]
        )));
    }
    LevelLadder::new(omegas, LadderSource::Spectral)
}

/// Bath temperature and the first- and second-order exchange rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams<T> {
    pub beta: T,
    pub phi: T,
    pub chi: T,
}

impl<T: Real> BathParams<T> {
    pub fn new(beta: T, phi: T, chi: T) -> Result<Self> {
        if !(beta.is_finite() && beta > T::zero()) {
            return Err(Error::param("beta", format!("must be > 0, got {beta}")));
        }
        if !(phi.is_finite() && phi > T::zero()) {
            return Err(Error::param("phi", format!("must be > 0, got {phi}")));
        }
        if !(chi.is_finite() && chi >= T::zero()) {
            return Err(Error::param("chi", format!("must be >= 0, got {chi}")));
        }
        Ok(BathParams { beta, phi, chi })
    }
}

/// Pump rate `p` and cavity loss `Q`, identical for every level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpParams<T> {
    pub p: T,
    pub q: T,
}

impl<T: Real> PumpParams<T> {
    pub fn new(p: T, q: T) -> Result<Self> {
        if !(p.is_finite() && p >= T::zero()) {
            return Err(Error::param("p", format!("must be >= 0, got {p}")));
        }
        if !(q.is_finite() && q >= T::zero()) {
            return Err(Error::param("Q", format!("must be >= 0, got {q}")));
        }
        Ok(PumpParams { p, q })
    }

    /// Pump that yields net supply `s` on top of cavity loss `q`.
    pub fn from_supply(s: T, q: T) -> Result<Self> {
        Self::new(s + q, q)
    }

    /// Net supply `s = p - Q`.
    pub fn s(&self) -> T {
        self.p - self.q
    }
}
