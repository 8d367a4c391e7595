//! The twelve acceptance criteria on the default configuration, one line each.

use std::process::ExitCode;
use std::time::Instant;

use degenerate_spectra::assembly::DiscreteForms;
use degenerate_spectra::harness::validate::{fiber_rng, fiber_suite, FIBER_SAMPLES};
use degenerate_spectra::harness::{
    sweep_kernel, sweep_projections, sweep_spectrum, sweep_tracenorm, sweep_zeta, validate, Injection, Section, Study, SweepConfig,
};
use degenerate_spectra::spectra::{cluster, default_gap_tol, family_spectrum};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn section_outcome(sec: &Section, prefix: &str, seconds: f64) -> Outcome {
    let relevant: Vec<_> = sec.checks.iter().filter(|c| c.name.starts_with(prefix)).collect();
    let failed: Vec<&str> = relevant.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let detail =
        if failed.is_empty() { format!("{} checks, {seconds:.1}s", relevant.len()) } else { format!("failed: {}", failed.join(", ")) };
    outcome(!relevant.is_empty() && failed.is_empty(), detail)
}

fn flat_anchor(cfg: &SweepConfig) -> Outcome {
    let clock = Instant::now();
    let forms = DiscreteForms::new(cfg.band_limit, cfg.family);
    let spec = match family_spectrum(&forms, 1.0, forms.dim()) {
        Ok(s) => s,
        Err(e) => return outcome(false, e.to_string()),
    };
    let seconds = clock.elapsed().as_secs_f64();
    let b = cfg.band_limit as i64;
    let two_pi_sq = 2.0 * std::f64::consts::PI.powi(2);
    let mut lattice: Vec<f64> = (-b..=b).flat_map(|m| (-b..=b).map(move |n| two_pi_sq * (m * m + n * n) as f64)).collect();
    lattice.sort_by(f64::total_cmp);
    let scale = lattice.last().copied().unwrap_or(1.0);
    let worst = spec.eigenvalues.iter().zip(&lattice).map(|(got, want)| (got - want).abs() / want.max(scale * 1e-3)).fold(0.0, f64::max);
    let multiplicities: Vec<usize> =
        cluster(&spec, default_gap_tol(&spec)).map(|cl| cl.iter().take(5).map(|c| c.multiplicity()).collect()).unwrap_or_default();
    let pass = spec.eigenvalues.len() == lattice.len() && worst <= 1e-9 && multiplicities == [1, 4, 4, 4, 8] && seconds < 10.0;
    outcome(pass, format!("max relative error {worst:.1e}, multiplicities {multiplicities:?}, {seconds:.2}s"))
}

fn fiber_criterion(seed: u64) -> Outcome {
    let clock = Instant::now();
    let checks: Vec<_> = (1..=3).flat_map(|m| fiber_suite(m, FIBER_SAMPLES, &mut fiber_rng(seed, m))).collect();
    let seconds = clock.elapsed().as_secs_f64();
    let failed: Vec<&str> = checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
    let detail = format!(
        "{} samples per m, {} checks, {seconds:.2}s{}",
        FIBER_SAMPLES,
        checks.len(),
        if failed.is_empty() { String::new() } else { format!(", failed: {}", failed.join(", ")) }
    );
    outcome(failed.is_empty() && seconds < 30.0, detail)
}

fn main() -> ExitCode {
    let cfg = SweepConfig::default();
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    results.push(("flat-metric anchor", flat_anchor(&cfg)));

    let clock = Instant::now();
    let study = match Study::run(&cfg) {
        Ok(s) => s,
        Err(e) => {
            println!("FAIL study: {e}");
            return ExitCode::FAILURE;
        }
    };
    let study_seconds = clock.elapsed().as_secs_f64();

    let timed = |f: fn(&Study) -> degenerate_spectra::Result<Section>| {
        let clock = Instant::now();
        let sec = f(&study).unwrap_or_else(|e| {
            let mut sec = Section::new("error");
            sec.checks.push(degenerate_spectra::harness::Check::failed(e.to_string()));
            sec
        });
        (sec, clock.elapsed().as_secs_f64())
    };
    let (spectrum, spectrum_seconds) = timed(sweep_spectrum);
    let (projections, projections_seconds) = timed(sweep_projections);
    let (tracenorm, tracenorm_seconds) = timed(sweep_tracenorm);
    let (zeta, zeta_seconds) = timed(sweep_zeta);
    let (kernel, kernel_seconds) = timed(sweep_kernel);
    let (checks, validate_seconds) = {
        let clock = Instant::now();
        let sec = validate(&study, Injection::None).unwrap_or_else(|_| Section::new("validate"));
        (sec, clock.elapsed().as_secs_f64())
    };

    results.push(("mass invariance", section_outcome(&spectrum, "mass_invariance", spectrum_seconds)));
    results.push(("eigenvalue domination", section_outcome(&checks, "family/minmax", validate_seconds)));
    results.push(("kernel stability", section_outcome(&spectrum, "kernel_dim/", spectrum_seconds)));

    let eigen_seconds = study_seconds + spectrum_seconds;
    let mut eigen = section_outcome(&spectrum, "", eigen_seconds);
    eigen.pass &= eigen_seconds < 300.0;
    results.push(("eigenvalue convergence", eigen));
    results.push(("projection convergence", section_outcome(&projections, "", projections_seconds)));
    results.push(("heat trace-norm convergence", section_outcome(&tracenorm, "", tracenorm_seconds)));
    results.push(("zeta convergence", section_outcome(&zeta, "", zeta_seconds)));
    results.push(("heat-kernel convergence", section_outcome(&kernel, "", kernel_seconds)));
    results.push(("fiber property suite", fiber_criterion(cfg.seed)));
    results.push(("varying-Hilbert-space suite", section_outcome(&checks, "hilbert/", validate_seconds)));

    let sensitivity = match validate(&study, Injection::UnderstateNuInMinmax) {
        Ok(sec) => {
            let failed: Vec<String> = sec.failures().iter().map(|c| c.name.clone()).collect();
            outcome(failed == ["family/minmax"], format!("failing checks under injection: {failed:?}"))
        }
        Err(e) => outcome(false, e.to_string()),
    };
    results.push(("injected-violation sensitivity", sensitivity));

    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        all &= o.pass;
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
