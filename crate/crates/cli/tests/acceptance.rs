//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tclaser::config::SweepConfig;
use tclaser_core::dense_oracle::dense_oracle;
use tclaser_core::frohlich::{
    condensation_knee, eta_thermal, ladder_analytic, noncondensate_bound, planck_occupation, pump_sweep,
    solve_steady_state, threshold, BathParams, LevelLadder, PumpParams,
};
use tclaser_core::spectrum::{
    build_block, diagonalize, gaussian_profile, ladder_regression, max_abs_deviation, photon_statistics, BlockIndex,
};
use tclaser_core::thermal::{
    degeneracy_exact, enumeration_oracle, fixed_projection_oracle, multiplets, r2_mean_given_m_exact,
    thermal_m_mean, thermal_m_variance, thermal_r2_variance, EnsembleParams,
};
use tclaser_core::HalfInt;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

type Outcome = Result<String, String>;

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn solve(r: HalfInt, c: HalfInt, kappa: f64) -> tclaser_core::EigenSolution {
    let idx = BlockIndex::new(r, c, kappa).expect("valid block");
    diagonalize(&build_block(idx).expect("block")).expect("diagonalization")
}

fn oracle_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut sectors = 0;
    for molecules in [1, 2] {
        for kappa in [0.5, 1.0] {
            let dense = dense_oracle(molecules, 10, kappa).map_err(|e| e.to_string())?;
            for (&(r, c), values) in &dense.sectors {
                let block = solve(r, c, kappa).eigenvalues;
                if values.len() % block.len() != 0 {
                    return Err(format!("sector ({r}, {c}) has {} levels, block {}", values.len(), block.len()));
                }
                let copies = values.len() / block.len();
                for (i, v) in values.iter().enumerate() {
                    worst = worst.max((v - block[i / copies]).abs());
                }
                sectors += 1;
            }
        }
    }
    check(worst < 1e-9, format!("{sectors} sectors, max |Δλ| = {worst:.2e}"))
}

fn spectrum_symmetry() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let r2 = rng.random_range(0..=100i64);
        let c2 = loop {
            let c2 = rng.random_range(-r2..=1000i64);
            if (c2 - r2) % 2 == 0 {
                break c2;
            }
        };
        let kappa = rng.random_range(0.1..2.0);
        let s = solve(HalfInt::from_doubled(r2), HalfInt::from_doubled(c2), kappa);
        let c = c2 as f64 / 2.0;
        let dim = s.dim();
        for k in 0..dim {
            let defect = (s.eigenvalues[k] + s.eigenvalues[dim - 1 - k] - 2.0 * c).abs() / c.abs().max(1.0);
            worst = worst.max(defect);
        }
    }
    check(worst < 1e-9, format!("200 blocks, max relative defect {worst:.2e}"))
}

fn gaussian_ground_state() -> Outcome {
    let s = solve(HalfInt::from_int(60), HalfInt::from_int(60), 1.0);
    let st = photon_statistics(&s, 0).map_err(|e| e.to_string())?;
    let gauss = gaussian_profile(st.n0, st.sigma2, s.block.basis()).map_err(|e| e.to_string())?;
    let peak = st.distribution.iter().cloned().fold(0.0, f64::max);
    let dev = max_abs_deviation(&gauss, &st.distribution) / peak;
    let sigma_err = rel(st.sigma2, st.n0 / 12f64.sqrt());
    let n0_err = rel(st.n0, 4.0 / 3.0 * 60.0);
    check(
        dev < 0.05 && sigma_err < 0.10 && n0_err < 0.05,
        format!(
            "max dev/peak = {dev:.4}, σ² = {:.3} ({:.2}% from n0/√12), n0 = {:.3} ({:.2}% from 4c/3)",
            st.sigma2,
            100.0 * sigma_err,
            st.n0,
            100.0 * n0_err
        ),
    )
}

fn linear_ladder() -> Outcome {
    let s = solve(HalfInt::from_int(40), HalfInt::from_int(200), 1.0);
    let n0 = photon_statistics(&s, 0).map_err(|e| e.to_string())?.n0;
    let fit = ladder_regression(&s).map_err(|e| e.to_string())?;
    let expected = 2.0 * n0.sqrt();
    let err = rel(fit.slope, expected);
    check(
        err < 0.03 && fit.r_squared > 0.999,
        format!(
            "slope {:.4} vs 2√n0 = {expected:.4} ({:.2}%), R² = {:.6}",
            fit.slope,
            100.0 * err,
            fit.r_squared
        ),
    )
}

fn thermal_identities() -> Outcome {
    use num_bigint::BigUint;
    for n in 1..=30u32 {
        let total: BigUint = multiplets(n)
            .map(|r| degeneracy_exact(n, r).unwrap() * BigUint::from((r.doubled() + 1) as u64))
            .sum();
        if total != BigUint::from(1u8) << n as usize {
            return Err(format!("multiplet count fails at N = {n}"));
        }
    }
    let mut projections = 0;
    for n in 1..=14u32 {
        for m2 in (-(n as i64)..=n as i64).step_by(2) {
            let m = HalfInt::from_doubled(m2);
            if fixed_projection_oracle(n, m).unwrap().r2_mean != r2_mean_given_m_exact(n, m).unwrap() {
                return Err(format!("fixed-m mean of r(r+1) fails at N = {n}, m = {m}"));
            }
            projections += 1;
        }
    }
    let mut worst = 0.0f64;
    for n in 1..=14u32 {
        for beta in [0.0, 0.05, 0.2, 0.7, 1.0, 2.5, 6.0] {
            let p = EnsembleParams::<f64>::finite(n, beta).unwrap();
            let o = enumeration_oracle(&p).unwrap();
            worst = worst.max((thermal_m_mean(&p).value - o.m_mean).abs());
            worst = worst.max((thermal_m_variance(&p) - o.m_variance).abs());
        }
    }
    if worst >= 1e-12 {
        return Err(format!("closed-form polarization moments off by {worst:.2e}"));
    }
    for n in 1..=200u32 {
        let v = thermal_r2_variance(&EnsembleParams::finite(n, 0.0).unwrap());
        if v != (n as f64) * (n as f64 - 1.0) / 8.0 {
            return Err(format!("infinite-temperature spread {v} at N = {n}"));
        }
    }
    Ok(format!(
        "2^N for N ≤ 30, {projections} exact fixed-m means, polarization moments to {worst:.1e}, N(N-1)/8 at β = 0"
    ))
}

fn random_ladder(rng: &mut ChaCha8Rng) -> (LevelLadder<f64>, BathParams<f64>) {
    let r2 = rng.random_range(0..=14i64);
    let omega = rng.random_range(0.2..3.0);
    let spacing = rng.random_range(0.001..0.05);
    let ladder = ladder_analytic(HalfInt::from_doubled(r2), 1.0, omega, spacing).unwrap();
    let bath = BathParams::new(rng.random_range(0.2..4.0), rng.random_range(0.1..5.0), rng.random_range(0.0..2.0))
        .unwrap();
    (ladder, bath)
}

fn equilibrium_recovery() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (ladder, bath) = random_ladder(&mut rng);
        let q = rng.random_range(0.0..3.0);
        let sol = solve_steady_state(&ladder, &bath, &PumpParams::new(q, q).unwrap()).map_err(|e| e.to_string())?;
        if sol.amplification != 1.0 || sol.mu != 0.0 {
            return Err(format!("A = {}, μ = {}", sol.amplification, sol.mu));
        }
        for (l, &w) in ladder.omegas().iter().enumerate() {
            let planck = planck_occupation(w, bath.beta).unwrap();
            worst = worst.max(rel(sol.occupations[l], planck)).max(sol.residuals[l]);
        }
    }
    check(worst < 1e-12, format!("20 ladders, worst occupation/residual error {worst:.2e}"))
}

struct Transition {
    ladder: LevelLadder<f64>,
    bath: BathParams<f64>,
    s0: f64,
    grid: Vec<f64>,
    solutions: Vec<tclaser_core::SteadyStateSolution>,
}

fn transition_sweep() -> Result<Transition, String> {
    let ladder = ladder_analytic(HalfInt::from_int(5), 1.0, 1.0, 0.01).unwrap();
    let bath = BathParams::new(1.0, 1.0, 0.1).unwrap();
    let eta_t = eta_thermal(&ladder, bath.beta).unwrap();
    let b = noncondensate_bound(0.0, &bath, &ladder).unwrap().b;
    let s0 = threshold(eta_t, b, &bath).map_err(|e| e.to_string())?.s0;
    let grid = SweepConfig::KNEE_DEFAULT.grid(s0);
    let solutions = pump_sweep(&ladder, &bath, 0.0, &grid)
        .into_iter()
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(Transition {
        ladder,
        bath,
        s0,
        grid,
        solutions,
    })
}

fn stationarity(t: &Transition) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0007);
    let mut worst = t
        .solutions
        .iter()
        .map(|s| s.max_residual() / s.residual_scale(&t.bath))
        .fold(0.0, f64::max);
    let mut points = t.solutions.len();
    let mut unconverged = t.solutions.iter().filter(|s| !s.converged).count();
    for _ in 0..10 {
        let (ladder, bath) = random_ladder(&mut rng);
        let grid: Vec<f64> = (0..12).map(|k| 1e-2 * 10f64.powf(k as f64 / 2.0)).collect();
        for sol in pump_sweep(&ladder, &bath, 0.5, &grid) {
            let sol = sol.map_err(|e| e.to_string())?;
            unconverged += usize::from(!sol.converged);
            worst = worst.max(sol.max_residual() / sol.residual_scale(&bath));
            points += 1;
        }
    }
    check(
        worst < 1e-8 && unconverged == 0,
        format!("{points} points, max residual / max(p, φ) = {worst:.2e}, {unconverged} unconverged"),
    )
}

fn condensation_transition(t: &Transition) -> Outcome {
    let fractions: Vec<f64> = t.solutions.iter().map(|s| s.condensate_fraction()).collect();
    let mus: Vec<f64> = t.solutions.iter().map(|s| s.mu).collect();
    let ground = t.ladder.ground();
    let planck_fraction = {
        let n = planck_occupation(ground, t.bath.beta).unwrap();
        n / eta_thermal(&t.ladder, t.bath.beta).unwrap()
    };
    let start_ok = (fractions[0] - planck_fraction).abs() < 1e-12;
    let end = *fractions.last().unwrap();
    let monotone_mu = mus.windows(2).all(|w| w[1] >= w[0]);
    let below = mus.iter().all(|&m| m < ground);
    let approach = (ground - mus.last().unwrap()) / ground;
    let points: Vec<(f64, f64)> = t.grid.iter().cloned().zip(fractions.iter().cloned()).collect();
    let knee = condensation_knee(&points).ok_or("condensate fraction never reaches its half-rise")?;
    let ratio = knee / t.s0;
    check(
        t.grid.len() == 60
            && start_ok
            && end > 0.9
            && monotone_mu
            && below
            && approach < 1e-3
            && (1.0 / 3.0..=3.0).contains(&ratio),
        format!(
            "n_c/η {:.4} → {end:.4}, μ_max = {:.6} < ω_-r = {ground} (gap {approach:.1e}), knee {knee:.1} = {ratio:.3}·s0 (s0 = {:.2})",
            fractions[0],
            mus.last().unwrap(),
            t.s0
        ),
    )
}

fn square_root_asymptote(t: &Transition) -> Outcome {
    let phi = t.bath.phi;
    let lo = noncondensate_bound(1e3 * phi, &t.bath, &t.ladder).unwrap().bound;
    let hi = noncondensate_bound(1e6 * phi, &t.bath, &t.ladder).unwrap().bound;
    let slope = (hi / lo).ln() / 1e3f64.ln();
    let mut grid = t.grid.clone();
    grid.extend([1e3, 1e4, 1e5, 1e6].map(|s| s * phi));
    let mut worst = 0.0f64;
    for sol in pump_sweep(&t.ladder, &t.bath, 0.0, &grid) {
        let sol = sol.map_err(|e| e.to_string())?;
        let bound = noncondensate_bound(sol.s, &t.bath, &t.ladder).unwrap().bound;
        worst = worst.max(sol.n_n / bound);
    }
    check(
        (slope - 0.5).abs() <= 0.05 && worst <= 1.0 + 1e-12,
        format!("log-log slope {slope:.4}, max n_n / bound = {worst:.6}"),
    )
}

fn uncoupled_closed_form() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0010);
    let mut worst = 0.0f64;
    let mut points = 0;
    for _ in 0..10 {
        let (ladder, mut bath) = random_ladder(&mut rng);
        bath.chi = 0.0;
        let grid: Vec<f64> = (0..20).map(|k| if k == 0 { 0.0 } else { 1e-3 * 10f64.powf(k as f64 / 3.0) }).collect();
        for sol in pump_sweep(&ladder, &bath, 0.0, &grid) {
            let sol = sol.map_err(|e| e.to_string())?;
            for (l, &w) in ladder.omegas().iter().enumerate() {
                let expected = (1.0 + sol.s / bath.phi) * planck_occupation(w, bath.beta).unwrap();
                worst = worst.max(rel(sol.occupations[l], expected));
            }
            if sol.amplification != 1.0 {
                return Err(format!("A = {} at s = {}", sol.amplification, sol.s));
            }
            points += 1;
        }
    }
    check(worst < 1e-10, format!("{points} points, max relative error {worst:.2e}"))
}

fn determinism() -> Outcome {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let spectrum = "command = spectrum\nspectrum.r = 1, 60\nspectrum.c = 60\nspectrum.kappa = 0.5, 1\n";
    let sweep = "command = sweep\nladder.r = 5\nladder.c_ref = 1\nladder.omega = 1\nladder.kappa = 0.01\n\
bath.beta = 1\nbath.phi = 1\nbath.chi = 0.1\nsweep.s_min = 1e-3\nsweep.s_max = 100\nsweep.points = 60\n\
sweep.unit = s0\nsweep.include_zero = true\n";
    let thermal = "command = thermal\nthermal.n = 4, 14, 1000\nthermal.beta = 0, 0.3, inf\n";
    let mut compared = 0;
    for (name, config) in [("spectrum", spectrum), ("sweep", sweep), ("thermal", thermal)] {
        let path = tmp.path().join(format!("{name}.conf"));
        fs::write(&path, config).map_err(|e| e.to_string())?;
        let mut outputs = Vec::new();
        for (run, workers) in [("a", "1"), ("b", "4"), ("c", "1")] {
            let out = tmp.path().join(format!("{name}_{run}"));
            let status = Command::new(env!("CARGO_BIN_EXE_tclaser"))
                .args([name, "--config"])
                .arg(&path)
                .arg("--out")
                .arg(&out)
                .args(["--workers", workers])
                .output()
                .map_err(|e| e.to_string())?
                .status;
            if !status.success() {
                return Err(format!("{name} run exited with {status}"));
            }
            outputs.push(read_data(&out)?);
        }
        if outputs[0] != outputs[1] || outputs[0] != outputs[2] {
            return Err(format!("{name}: data files differ between runs"));
        }
        compared += outputs[0].len();
    }
    Ok(format!("{compared} data files byte-identical across three runs each (1 and 4 workers)"))
}

fn read_data(dir: &Path) -> Result<Vec<(String, Vec<u8>)>, String> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .map_err(|e| e.to_string())?
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv" || x == "txt"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    Ok(files)
}

fn main() -> ExitCode {
    let start = Instant::now();
    let transition = transition_sweep();
    let with_sweep = |f: fn(&Transition) -> Outcome| -> Outcome {
        match &transition {
            Ok(t) => f(t),
            Err(e) => Err(format!("sweep failed: {e}")),
        }
    };
    let results: Vec<(&str, Outcome)> = vec![
        ("oracle equivalence", oracle_equivalence()),
        ("spectrum symmetry", spectrum_symmetry()),
        ("gaussian ground state", gaussian_ground_state()),
        ("linear ladder", linear_ladder()),
        ("thermal identities", thermal_identities()),
        ("equilibrium recovery", equilibrium_recovery()),
        ("stationarity", with_sweep(stationarity)),
        ("condensation transition", with_sweep(condensation_transition)),
        ("square-root asymptote", with_sweep(square_root_asymptote)),
        ("uncoupled closed form", uncoupled_closed_form()),
        ("determinism", determinism()),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
