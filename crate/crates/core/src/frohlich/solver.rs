//! Scalar self-consistency for the stationary state.
//!
//! Stationarity `p = L1_l + L2_l + Q` for every level gives the occupations
//! `n_l = (1 + s/(φ + χη)) / (A e^{ω_l β} - 1)`. Summing the balance over
//! levels with weights `e^{-ω_l β}` fixes `S = s Σ e^{-ω_j β}`, and with it
//! `A(η) = 1 - χS / (φ(φ + χη))`. What remains is one equation in the total
//! `η`:
//!
//! `F(η) = Σ_l (1 + s/(φ + χη)) / (A(η) e^{ω_l β} - 1) - η = 0`.
//!
//! `F` is strictly decreasing on the admissible half-line
//! `A(η) e^{ω_{-r} β} > 1`, diverges to `+∞` at its lower edge and tends to
//! `-∞`, so the root is unique and bisection finds it without derivatives.

use super::rates::{
    amplification_from_transfer, chemical_potential, excitation_transfer_balance, excitation_transfer_supply,
    first_order_loss, second_order_loss,
};
use super::{BathParams, LevelLadder, PumpParams};
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions<T> {
    /// Converged when every `|p - L1 - L2 - Q| < residual_tol · max(p, φ)`.
    pub residual_tol: T,
    /// ... and `|η - Σ n_l| < eta_tol · η`.
    pub eta_tol: T,
    pub max_iterations: usize,
}

impl<T: Real> Default for SolverOptions<T> {
    fn default() -> Self {
        let eps = T::epsilon();
        SolverOptions {
            residual_tol: T::lit(1e-8).max(T::lit(1e4) * eps),
            eta_tol: T::lit(1e-10).max(T::lit(1e3) * eps),
            max_iterations: 400,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteadyStateSolution<T> {
    /// Net supply `s = p - Q`.
    pub s: T,
    pub pump: PumpParams<T>,
    /// `<n_l>`, ground level first.
    pub occupations: Vec<T>,
    pub amplification: T,
    pub mu: T,
    /// `Σ <n_l>`.
    pub eta: T,
    /// Root of the scalar equation; equals `eta` up to rounding.
    pub eta_root: T,
    /// `S` from the supply form.
    pub transfer_supply: T,
    /// `S` from the occupation balance.
    pub transfer_balance: T,
    pub n_c: T,
    pub n_n: T,
    pub first_order: Vec<T>,
    pub second_order: Vec<T>,
    /// `|p - L1_l - L2_l - Q|` per level.
    pub residuals: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
}

impl<T: Real> SteadyStateSolution<T> {
    pub fn max_residual(&self) -> T {
        self.residuals.iter().fold(T::zero(), |acc, &r| acc.max(r))
    }

    pub fn condensate_fraction(&self) -> T {
        self.n_c / self.eta
    }

    /// `(n_c, n_n)`
    pub fn condensate_split(&self) -> (T, T) {
        (self.n_c, self.n_n)
    }

    /// Residual scale `max(p, φ)` used by the convergence test.
    pub fn residual_scale(&self, bath: &BathParams<T>) -> T {
        self.pump.p.max(bath.phi)
    }
}

pub fn solve_steady_state<T: Real>(
    ladder: &LevelLadder<T>,
    bath: &BathParams<T>,
    pump: &PumpParams<T>,
) -> Result<SteadyStateSolution<T>> {
    solve_steady_state_with(ladder, bath, pump, &SolverOptions::default())
}

struct Equation<'a, T> {
    boltzmann: Vec<T>,
    expm1: Vec<T>,
    bath: &'a BathParams<T>,
    s: T,
    transfer: T,
}

impl<T: Real> Equation<'_, T> {
    /// Occupations at trial total `eta`, or `None` below the admissible edge.
    fn occupations(&self, eta: T) -> Option<Vec<T>> {
        let BathParams { phi, chi, .. } = *self.bath;
        let drive = T::one() + self.s / (phi + chi * eta);
        // A e^{x} - 1 = (e^{x} - 1) - q e^{x} with q = 1 - A.
        let q = chi * self.transfer / (phi * (phi + chi * eta));
        self.expm1
            .iter()
            .zip(&self.boltzmann)
            .map(|(&em1, &e)| {
                let denom = em1 - q * e;
                (denom > T::zero()).then(|| drive / denom)
            })
            .collect()
    }

    fn excess(&self, eta: T) -> Option<T> {
        self.occupations(eta).map(|n| n.into_iter().sum::<T>() - eta)
    }
}

pub fn solve_steady_state_with<T: Real>(
    ladder: &LevelLadder<T>,
    bath: &BathParams<T>,
    pump: &PumpParams<T>,
    options: &SolverOptions<T>,
) -> Result<SteadyStateSolution<T>> {
    let s = pump.s();
    if s < T::zero() {
        return Err(Error::param("s", format!("net supply p - Q must be >= 0, got {s}")));
    }
    if bath.chi > T::zero() {
        if let Some(level) = ladder.degenerate_level() {
            return Err(Error::DegenerateLadder { level });
        }
    }
    let beta = bath.beta;
    let equation = Equation {
        boltzmann: ladder.omegas().iter().map(|&w| (w * beta).exp()).collect(),
        expm1: ladder.omegas().iter().map(|&w| (w * beta).exp_m1()).collect(),
        bath,
        s,
        transfer: excitation_transfer_supply(s, ladder, bath),
    };

    let (eta_root, iterations) = if bath.chi == T::zero() || s == T::zero() {
        // A = 1 and the drive factor does not depend on η.
        let n = equation
            .occupations(T::zero())
            .expect("A = 1 keeps every level admissible");
        (n.into_iter().sum(), 0)
    } else {
        bisect_total(&equation, ladder, options.max_iterations)?
    };

    let occupations = equation.occupations(eta_root).ok_or(Error::NoRoot {
        lo: eta_root.as_f64(),
        hi: eta_root.as_f64(),
    })?;
    finish(ladder, bath, pump, options, &equation, eta_root, occupations, iterations)
}

fn bisect_total<T: Real>(eq: &Equation<'_, T>, ladder: &LevelLadder<T>, max_iterations: usize) -> Result<(T, usize)> {
    let BathParams { beta, phi, chi } = *eq.bath;
    // A(η) e^{ω_{-r} β} = 1 at η_edge.
    let edge = eq.transfer / (phi * -(-ladder.ground() * beta).exp_m1()) - phi / chi;
    let mut lo = edge.max(T::zero());
    let mut hi = (lo + lo).max(lo + T::one());
    let mut grow = 0;
    loop {
        match eq.excess(hi) {
            Some(f) if f <= T::zero() => break,
            _ => {
                lo = hi;
                hi = hi + hi;
                grow += 1;
                if grow > 2000 || !hi.is_finite() {
                    return Err(Error::NoRoot {
                        lo: edge.as_f64(),
                        hi: hi.as_f64(),
                    });
                }
            }
        }
    }

    let mut iterations = 0;
    loop {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            return Ok((hi, iterations));
        }
        if iterations >= max_iterations {
            return Err(Error::SolverNoConvergence {
                iterations,
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        iterations += 1;
        match eq.excess(mid) {
            Some(f) if f <= T::zero() => hi = mid,
            _ => lo = mid,
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn finish<T: Real>(
    ladder: &LevelLadder<T>,
    bath: &BathParams<T>,
    pump: &PumpParams<T>,
    options: &SolverOptions<T>,
    eq: &Equation<'_, T>,
    eta_root: T,
    occupations: Vec<T>,
    iterations: usize,
) -> Result<SteadyStateSolution<T>> {
    let eta: T = occupations.iter().copied().sum();
    let amplification = amplification_from_transfer(eq.transfer, eta_root, bath);
    let mu = chemical_potential(amplification, bath.beta)?;
    let transfer_balance = excitation_transfer_balance(&occupations, ladder, bath)?;

    let first_order: Vec<T> = occupations
        .iter()
        .zip(ladder.omegas())
        .map(|(&n, &w)| first_order_loss(n, w, bath))
        .collect();
    let second_order = (0..occupations.len())
        .map(|l| second_order_loss(l, &occupations, ladder, bath))
        .collect::<Result<Vec<T>>>()?;
    let residuals: Vec<T> = first_order
        .iter()
        .zip(&second_order)
        .map(|(&l1, &l2)| (pump.p - l1 - l2 - pump.q).abs())
        .collect();

    let n_c = occupations[0];
    let n_n: T = occupations[1..].iter().copied().sum();
    let scale = pump.p.max(bath.phi);
    let worst = residuals.iter().fold(T::zero(), |acc, &r| acc.max(r));
    let converged = worst < options.residual_tol * scale
        && (eta - eta_root).abs() <= options.eta_tol * eta.max(T::min_positive_value());

    Ok(SteadyStateSolution {
        s: eq.s,
        pump: *pump,
        occupations,
        amplification,
        mu,
        eta,
        eta_root,
        transfer_supply: eq.transfer,
        transfer_balance,
        n_c,
        n_n,
        first_order,
        second_order,
        residuals,
        iterations,
        converged,
    })
}

/// Solves at each supply value in turn with cavity loss `q`.
pub fn pump_sweep<T: Real>(
    ladder: &LevelLadder<T>,
    bath: &BathParams<T>,
    q: T,
    supplies: &[T],
) -> Vec<Result<SteadyStateSolution<T>>> {
    supplies
        .iter()
        .map(|&s| PumpParams::from_supply(s, q).and_then(|pump| solve_steady_state(ladder, bath, &pump)))
        .collect()
}
