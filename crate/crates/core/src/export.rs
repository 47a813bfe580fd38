//! CSV row layouts for the data files. Every float is written with 17
//! significant digits so identical inputs give byte-identical files.

use std::fmt::Write as _;

use crate::frohlich::SteadyStateSolution;
use crate::scalar::{sig17, Real};
use crate::spectrum::{photon_statistics, EigenSolution};
use crate::thermal::{EnsembleParams, Beta, EnumeratedMoments, ThermalMoments};
use crate::error::Result;

pub const SPECTRUM_HEADER: &str = "r,c,kappa,k,lambda,n0,sigma2";
pub const DISTRIBUTION_HEADER: &str = "n,p_n";
/// `r2_var` is the closed-form spread of `m²`; `r2_var_total` adds the
/// thermal average of the fixed-`m` spread `sigma_r2`. The oracle columns
/// hold the same quantities by enumeration and are empty above 14 molecules.
pub const THERMAL_HEADER: &str = "N,beta,m_mean,m_var,r2_mean,r2_var,sigma_r2,r2_var_total,\
oracle_m_mean,oracle_m_var,oracle_r2_mean,oracle_r2_var,oracle_sigma_r2,oracle_r2_var_total";
pub const SWEEP_HEADER: &str =
    "s,eta,A,mu,n_c,n_n,cond_frac,S_supply,S_balance,resid_max,omega_bar_fit,status";
pub const LEVELS_HEADER: &str = "l,j,omega,n,L1,L2,residual";

/// One row per eigenstate of the block.
pub fn spectrum_rows<T: Real>(solution: &EigenSolution<T>) -> Result<String> {
    let mut out = String::new();
    for k in 0..solution.dim() {
        let st = photon_statistics(solution, k)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            solution.block.r(),
            solution.block.c(),
            sig17(solution.block.kappa()),
            k,
            sig17(solution.eigenvalues[k]),
            sig17(st.n0),
            sig17(st.sigma2)
        )
        .expect("write to String");
    }
    Ok(out)
}

/// `n,p_n` rows for one distribution starting at photon number `n_min`.
pub fn distribution_rows<T: Real>(n_min: u64, distribution: &[T]) -> String {
    let mut out = String::new();
    for (i, &p) in distribution.iter().enumerate() {
        writeln!(out, "{},{}", n_min + i as u64, sig17(p)).expect("write to String");
    }
    out
}

pub fn thermal_row<T: Real>(
    params: &EnsembleParams<T>,
    moments: &ThermalMoments<T>,
    oracle: Option<&EnumeratedMoments<T>>,
) -> String {
    let beta = match params.beta() {
        Beta::Finite(b) => sig17(b),
        Beta::Infinite => "inf".to_string(),
    };
    let oracle_cols = match oracle {
        Some(o) => [
            o.m_mean,
            o.m_variance,
            o.r2_mean,
            o.m_squared_variance,
            o.sigma_r2_mean,
            o.r2_variance,
        ]
            .iter()
            .map(|&v| sig17(v))
            .collect::<Vec<_>>()
            .join(","),
        None => ",,,,,".to_string(),
    };
    format!(
        "{},{},{},{},{},{},{},{},{}\n",
        params.molecules(),
        beta,
        sig17(moments.m_mean),
        sig17(moments.m_variance),
        sig17(moments.r2_mean),
        sig17(moments.r2_variance),
        sig17(moments.sigma_r2_mean),
        sig17(moments.r2_variance + moments.sigma_r2_mean),
        oracle_cols
    )
}

/// One sweep row; `omega_bar_fit` is `NaN` where no fit exists.
pub fn sweep_row<T: Real>(solution: &SteadyStateSolution<T>, omega_bar_fit: Option<T>, status: &str) -> String {
    let fit = omega_bar_fit.map_or_else(|| "NaN".to_string(), sig17);
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}\n",
        sig17(solution.s),
        sig17(solution.eta),
        sig17(solution.amplification),
        sig17(solution.mu),
        sig17(solution.n_c),
        sig17(solution.n_n),
        sig17(solution.condensate_fraction()),
        sig17(solution.transfer_supply),
        sig17(solution.transfer_balance),
        sig17(solution.max_residual()),
        fit,
        status
    )
}

/// Row for a grid point whose solve failed; keeps the column count.
pub fn failed_sweep_row<T: Real>(s: T, status: &str) -> String {
    let blanks = ",".repeat(10);
    format!("{}{},{}\n", sig17(s), blanks, status.replace([',', '\n'], ";"))
}

/// Per-level table of one steady state; `j` runs from `-r`.
pub fn level_rows<T: Real>(solution: &SteadyStateSolution<T>, omegas: &[T]) -> String {
    let r2 = omegas.len() as i64 - 1;
    let mut out = String::new();
    for (l, &w) in omegas.iter().enumerate() {
        let j = crate::scalar::HalfInt::from_doubled(2 * l as i64 - r2);
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            l,
            j,
            sig17(w),
            sig17(solution.occupations[l]),
            sig17(solution.first_order[l]),
            sig17(solution.second_order[l]),
            sig17(solution.residuals[l])
        )
        .expect("write to String");
    }
    out
}
