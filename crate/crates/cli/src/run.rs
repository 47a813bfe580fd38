//! Executes a validated [`RunConfig`]: computes every grid point (in
//! parallel when `workers > 1`), then writes all files from one thread.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use rayon::prelude::*;
use tclaser_core::export::{
    distribution_rows, failed_sweep_row, level_rows, spectrum_rows, sweep_row, thermal_row,
    DISTRIBUTION_HEADER, LEVELS_HEADER, SPECTRUM_HEADER, SWEEP_HEADER, THERMAL_HEADER,
};
use tclaser_core::frohlich::{
    condensation_knee, eta_thermal, fit_effective_frequency, noncondensate_bound, solve_steady_state, threshold,
    BathParams, LevelLadder, PumpParams, SteadyStateSolution, Threshold,
};
use tclaser_core::spectrum::{
    build_block, diagonalize, gaussian_profile, ladder_regression, max_abs_deviation, photon_statistics,
    predicted_ground_mean, predicted_ground_variance,
};
use tclaser_core::thermal::{enumeration_oracle, thermal_moments, ENUMERATION_LIMIT};
use tclaser_core::{sig17, BlockIndex, EigenSolution};

use crate::config::{Command, DistributionSelection, RunConfig, SweepConfig};
use crate::manifest::{write_manifest, ResidualSummary};

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Model(#[from] tclaser_core::Error),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("could not start worker pool: {0}")]
    Pool(String),
    #[error("manifest: {0}")]
    Manifest(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Clean,
    Flagged,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Clean => 0,
            RunStatus::Flagged => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub files: Vec<PathBuf>,
    pub manifest: PathBuf,
    pub flags: Vec<String>,
}

/// Exit code for a finished or failed run: 0 clean, 2 flagged, 1 error.
pub fn exit_code(result: &Result<RunOutcome, RunError>) -> i32 {
    match result {
        Ok(outcome) => outcome.status.exit_code(),
        Err(_) => 1,
    }
}

/// Files and diagnostics produced by one command, before writing.
#[derive(Debug, Default)]
pub(crate) struct Products {
    pub files: Vec<(String, String)>,
    pub flags: Vec<String>,
    pub residuals: Option<ResidualSummary>,
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, RunError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| RunError::Pool(e.to_string()))?;
    let products = pool.install(|| match config.command {
        Command::Spectrum => spectrum(config),
        Command::Thermal => thermal(config),
        Command::SteadyState => steady_state(config),
        Command::Sweep => sweep(config, true),
        Command::Threshold => sweep(config, false),
    })?;

    let dir = &config.output_dir;
    fs::create_dir_all(dir).map_err(|source| RunError::Io {
        path: dir.clone(),
        source,
    })?;
    let mut written = Vec::new();
    for (name, contents) in &products.files {
        let path = dir.join(name);
        fs::write(&path, contents).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        written.push(path);
    }
    let manifest = write_manifest(config, &products)?;
    Ok(RunOutcome {
        status: if products.flags.is_empty() { RunStatus::Clean } else { RunStatus::Flagged },
        files: written,
        manifest,
        flags: products.flags,
    })
}

fn file_label(block: &BlockIndex) -> String {
    format!("r{}_c{}_kappa{}", block.r(), block.c(), block.kappa())
}

struct BlockReport {
    solution: EigenSolution,
    rows: String,
    summary: String,
    distributions: Vec<(String, String)>,
    symmetry_defect: f64,
    conservation_defect: f64,
}

fn nan_or<E>(v: Result<f64, E>) -> String {
    v.map_or_else(|_| "NaN".to_string(), sig17)
}

const SUMMARY_HEADER: &str = "r,c,kappa,dim,n0,sigma2,n0_asymptotic,n0_full,sigma2_formula,\
gaussian_max_dev,gaussian_peak,q0,slope,slope_expected,r_squared";

fn block_report(index: BlockIndex, selection: DistributionSelection) -> Result<BlockReport, tclaser_core::Error> {
    let solution = diagonalize(&build_block(index)?)?;
    let rows = spectrum_rows(&solution)?;
    let c = index.c().to_f64();
    let dim = solution.dim();
    let symmetry_defect = (0..dim)
        .map(|k| (solution.eigenvalues[k] + solution.eigenvalues[dim - 1 - k] - 2.0 * c).abs())
        .fold(0.0, f64::max)
        / c.abs().max(1.0);

    let states: Vec<usize> = match selection {
        DistributionSelection::Ground => vec![0],
        DistributionSelection::All => (0..dim).collect(),
    };
    let mut distributions = Vec::new();
    let mut conservation_defect = 0.0f64;
    for &k in &states {
        let st = photon_statistics(&solution, k)?;
        conservation_defect = conservation_defect.max((st.n0 + st.molecular_mean - c).abs() / c.abs().max(1.0));
        let name = match selection {
            DistributionSelection::Ground => format!("ground_{}.csv", file_label(&index)),
            DistributionSelection::All => format!("state{k}_{}.csv", file_label(&index)),
        };
        let body = format!("{DISTRIBUTION_HEADER}\n{}", distribution_rows(st.n_min, &st.distribution));
        distributions.push((name, body));
    }

    let ground = photon_statistics(&solution, 0)?;
    let mean = predicted_ground_mean(&index);
    let variance = predicted_ground_variance(&index, ground.n0).map(|v| v.sigma2);
    let (deviation, peak) = match gaussian_profile(ground.n0, ground.sigma2, index.basis()) {
        Ok(g) => (
            Ok(max_abs_deviation(&g, &ground.distribution)),
            ground.distribution.iter().cloned().fold(0.0, f64::max),
        ),
        Err(e) => (Err(e), ground.distribution.iter().cloned().fold(0.0, f64::max)),
    };
    let fit = ladder_regression(&solution);
    let q0 = tclaser_core::spectrum::effective_ground_eigenvalue(&solution);
    let summary = format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
        index.r(),
        index.c(),
        sig17(index.kappa()),
        dim,
        sig17(ground.n0),
        sig17(ground.sigma2),
        sig17(mean.asymptotic),
        sig17(mean.full),
        nan_or(variance),
        nan_or(deviation),
        sig17(peak),
        sig17(q0),
        nan_or(fit.as_ref().map(|f| f.slope)),
        sig17(2.0 * index.kappa() * ground.n0.sqrt()),
        nan_or(fit.as_ref().map(|f| f.r_squared)),
    );
    Ok(BlockReport {
        solution,
        rows,
        summary,
        distributions,
        symmetry_defect,
        conservation_defect,
    })
}

fn spectrum(config: &RunConfig) -> Result<Products, RunError> {
    let section = config.spectrum.as_ref().expect("validated spectrum section");
    let reports: Vec<_> = section
        .blocks
        .par_iter()
        .map(|&index| block_report(index, section.distributions))
        .collect();
    let mut products = Products::default();
    let mut rows = format!("{SPECTRUM_HEADER}\n");
    let mut summary = format!("{SUMMARY_HEADER}\n");
    let mut defects = Vec::new();
    for (index, report) in section.blocks.iter().zip(reports) {
        let report = report?;
        rows.push_str(&report.rows);
        summary.push_str(&report.summary);
        if report.symmetry_defect > 1e-9 {
            products.flags.push(format!(
                "spectrum ({}, {}): eigenvalues not symmetric about c (defect {:e})",
                index.r(),
                index.c(),
                report.symmetry_defect
            ));
        }
        if report.conservation_defect > 1e-12 {
            products.flags.push(format!(
                "spectrum ({}, {}): photon plus molecular mean differs from c by {:e}",
                index.r(),
                index.c(),
                report.conservation_defect
            ));
        }
        debug_assert_eq!(report.solution.dim(), index.basis().dim());
        defects.push(report.symmetry_defect.max(report.conservation_defect));
        products.files.extend(report.distributions);
    }
    products.files.insert(0, ("spectrum.csv".into(), rows));
    products.files.insert(1, ("spectrum_summary.csv".into(), summary));
    products.residuals = ResidualSummary::from_values("relative symmetry and conservation defect", &defects);
    Ok(products)
}

fn thermal(config: &RunConfig) -> Result<Products, RunError> {
    let section = config.thermal.as_ref().expect("validated thermal section");
    let rows: Vec<_> = section
        .points
        .par_iter()
        .map(|p| {
            let moments = thermal_moments(p);
            let oracle = if p.molecules() <= ENUMERATION_LIMIT {
                Some(enumeration_oracle(p)?)
            } else {
                None
            };
            Ok::<_, tclaser_core::Error>((p, moments, oracle))
        })
        .collect();
    let mut products = Products::default();
    let mut body = format!("{THERMAL_HEADER}\n");
    let mut gaps = Vec::new();
    for row in rows {
        let (p, m, oracle) = row?;
        body.push_str(&thermal_row(p, &m, oracle.as_ref()));
        if let Some(o) = &oracle {
            let pairs = [
                ("m_mean", m.m_mean, o.m_mean),
                ("m_var", m.m_variance, o.m_variance),
                ("r2_mean", m.r2_mean, o.r2_mean),
                ("r2_var", m.r2_variance, o.m_squared_variance),
                ("sigma_r2", m.sigma_r2_mean, o.sigma_r2_mean),
            ];
            for (name, a, b) in pairs {
                let gap = (a - b).abs() / a.abs().max(b.abs()).max(1.0);
                gaps.push(gap);
                if gap > 1e-10 {
                    products.flags.push(format!(
                        "thermal N={}: {name} closed form {a} disagrees with enumeration {b}",
                        p.molecules()
                    ));
                }
            }
        }
    }
    products.files.push(("thermal.csv".into(), body));
    products.residuals = ResidualSummary::from_values("relative closed form vs enumeration gap", &gaps);
    Ok(products)
}

fn solution_flags(sol: &SteadyStateSolution<f64>, ladder: &LevelLadder<f64>, bath: &BathParams<f64>) -> Vec<String> {
    let mut flags = Vec::new();
    let scale = sol.residual_scale(bath);
    if !sol.converged || sol.max_residual() >= 1e-8 * scale {
        flags.push(format!(
            "s = {}: not stationary (max residual {:e}, scale {scale})",
            sol.s,
            sol.max_residual()
        ));
    }
    if !(sol.amplification > 0.0 && sol.amplification <= 1.0) || !(sol.mu >= 0.0 && sol.mu < ladder.ground()) {
        flags.push(format!(
            "s = {}: amplification {} or chemical potential {} out of bounds",
            sol.s, sol.amplification, sol.mu
        ));
    }
    let rel = (sol.transfer_supply - sol.transfer_balance).abs() / sol.transfer_supply.abs().max(f64::MIN_POSITIVE);
    if sol.s > 0.0 && rel > 1e-8 {
        flags.push(format!("s = {}: transfer forms differ by {rel:e}", sol.s));
    }
    flags
}

fn steady_state(config: &RunConfig) -> Result<Products, RunError> {
    let ladder = config.ladder.as_ref().expect("validated ladder");
    let bath = config.bath.as_ref().expect("validated bath");
    let s = config.s.expect("validated supply");
    let pump = PumpParams::from_supply(s, config.q)?;
    let sol = solve_steady_state(ladder, bath, &pump)?;
    let mut products = Products {
        flags: solution_flags(&sol, ladder, bath),
        ..Products::default()
    };
    let mut report = String::new();
    let mut kv = |k: &str, v: String| writeln!(report, "{k} = {v}").expect("write to String");
    kv("s", sig17(sol.s));
    kv("p", sig17(sol.pump.p));
    kv("q", sig17(sol.pump.q));
    kv("eta", sig17(sol.eta));
    kv("A", sig17(sol.amplification));
    kv("mu", sig17(sol.mu));
    kv("n_c", sig17(sol.n_c));
    kv("n_n", sig17(sol.n_n));
    kv("cond_frac", sig17(sol.condensate_fraction()));
    kv("S_supply", sig17(sol.transfer_supply));
    kv("S_balance", sig17(sol.transfer_balance));
    kv("resid_max", sig17(sol.max_residual()));
    kv("converged", sol.converged.to_string());
    if bath.chi > 0.0 && ladder.degenerate_level().is_none() {
        let nb = noncondensate_bound(s, bath, ladder)?;
        kv("n_n_bound", sig17(nb.bound));
        kv("B", sig17(nb.b));
        if sol.n_n > nb.bound * (1.0 + 1e-9) {
            products.flags.push(format!("n_n = {} exceeds its bound {}", sol.n_n, nb.bound));
        }
    }
    products.files.push(("steady_state.txt".into(), report));
    products.files.push((
        "levels.csv".into(),
        format!("{LEVELS_HEADER}\n{}", level_rows(&sol, ladder.omegas())),
    ));
    products.residuals = ResidualSummary::from_values("max |p - L1 - L2 - Q| per point", &[sol.max_residual()]);
    Ok(products)
}

fn threshold_estimate(ladder: &LevelLadder<f64>, bath: &BathParams<f64>) -> Result<(Threshold<f64>, f64, f64), RunError> {
    let eta_t = eta_thermal(ladder, bath.beta)?;
    let b = noncondensate_bound(0.0, bath, ladder)?.b;
    Ok((threshold(eta_t, b, bath)?, b, eta_t))
}

/// Sweep and threshold commands; `with_table` writes the sweep CSV.
fn sweep(config: &RunConfig, with_table: bool) -> Result<Products, RunError> {
    let ladder = config.ladder.as_ref().expect("validated ladder");
    let bath = config.bath.as_ref().expect("validated bath");
    let grid_config: SweepConfig = config.sweep.expect("validated sweep");
    let estimate = if bath.chi > 0.0 {
        Some(threshold_estimate(ladder, bath)?)
    } else {
        None
    };
    let s0 = estimate.map_or(f64::NAN, |(t, _, _)| t.s0);
    let grid = grid_config.grid(s0);
    let eta_t = eta_thermal(ladder, bath.beta)?;

    let solved: Vec<_> = grid
        .par_iter()
        .map(|&s| PumpParams::from_supply(s, config.q).and_then(|pump| solve_steady_state(ladder, bath, &pump)))
        .collect();

    let mut products = Products::default();
    if let Some((t, _, _)) = estimate {
        if t.immediate {
            products
                .flags
                .push(format!("threshold estimate {} is not positive: condensation is immediate", t.s0));
        }
    }
    let bounds: Vec<Option<f64>> = if bath.chi > 0.0 {
        grid.iter()
            .map(|&s| noncondensate_bound(s, bath, ladder).ok().map(|nb| nb.bound))
            .collect()
    } else {
        vec![None; grid.len()]
    };

    let mut table = format!("{SWEEP_HEADER}\n");
    let mut residuals = Vec::new();
    let mut knee_points = Vec::new();
    let mut previous: Option<&SteadyStateSolution<f64>> = None;
    let mut calibration = None;
    for ((&s, result), bound) in grid.iter().zip(&solved).zip(&bounds) {
        match result {
            Ok(sol) => {
                let mut point_flags = solution_flags(sol, ladder, bath);
                if let Some(b) = bound {
                    if sol.n_n > b * (1.0 + 1e-9) {
                        point_flags.push(format!("s = {s}: n_n = {} exceeds its bound {b}", sol.n_n));
                    }
                }
                if let Some(prev) = previous {
                    if sol.mu < prev.mu || sol.eta < prev.eta {
                        point_flags.push(format!("s = {s}: chemical potential or total occupation decreased"));
                    }
                }
                let fit = (s > 0.0)
                    .then(|| fit_effective_frequency(s, sol.eta, eta_t, ladder, bath).ok())
                    .flatten();
                if calibration.is_none() {
                    calibration = fit.map(|f| (s, f));
                }
                let status = if point_flags.is_empty() { "ok" } else { "flagged" };
                table.push_str(&sweep_row(sol, fit.map(|f| f.omega_bar), status));
                residuals.push(sol.max_residual());
                knee_points.push((s, sol.condensate_fraction()));
                products.flags.extend(point_flags);
                previous = Some(sol);
            }
            Err(e) => {
                table.push_str(&failed_sweep_row(s, &format!("error: {e}")));
                products.flags.push(format!("s = {s}: {e}"));
            }
        }
    }

    if with_table {
        products.files.push(("sweep.csv".into(), table));
    }
    if let Some((t, b, eta_t)) = estimate {
        let knee = condensation_knee(&knee_points);
        let mut report = String::new();
        let mut kv = |k: &str, v: String| writeln!(report, "{k} = {v}").expect("write to String");
        kv("s0", sig17(t.s0));
        kv("s0_immediate", t.immediate.to_string());
        kv("B", sig17(b));
        kv("eta_T", sig17(eta_t));
        kv("knee", knee.map_or_else(|| "NaN".into(), sig17));
        kv("knee_over_s0", knee.map_or_else(|| "NaN".into(), |k| sig17(k / t.s0)));
        match calibration {
            Some((s, f)) => {
                kv("omega_bar", sig17(f.omega_bar));
                kv("omega_bar_in_range", f.in_range.to_string());
                kv("omega_bar_calibration_s", sig17(s));
                if !f.in_range {
                    products.flags.push(format!(
                        "effective frequency {} calibrated at s = {s} lies outside the ladder",
                        f.omega_bar
                    ));
                }
            }
            None => kv("omega_bar", "NaN".into()),
        }
        kv("points", knee_points.len().to_string());
        products.files.push(("threshold.txt".into(), report));
    }
    products.residuals = ResidualSummary::from_values("max |p - L1 - L2 - Q| per point", &residuals);
    Ok(products)
}
