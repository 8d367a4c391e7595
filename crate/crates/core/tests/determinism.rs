//! Two runs of the same configuration write identical files.

use degenerate_spectra::harness::{
    sweep_kernel, sweep_projections, sweep_spectrum, sweep_tracenorm, sweep_zeta, validate, HeatGrid, Injection, Report, Study, SweepConfig,
};

fn run(dir: &std::path::Path, cfg: &SweepConfig) {
    let study = Study::run(cfg).unwrap();
    let mut report = Report::new(cfg);
    for f in [sweep_spectrum, sweep_projections, sweep_tracenorm, sweep_zeta, sweep_kernel] {
        report.sections.push(f(&study).unwrap());
    }
    report.sections.push(validate(&study, Injection::None).unwrap());
    report.write(dir).unwrap();
}

#[test]
fn reports_are_byte_identical() {
    let cfg = SweepConfig {
        band_limit: 3,
        kernel_band_limit: 3,
        depth: 8,
        minmax_depth: 20,
        s_grid: vec![1.0, 0.5, 0.2, 0.1, 0.05],
        ..SweepConfig::default()
    };
    // a short window cannot certify heat tails at small t
    let cfg = SweepConfig { heat: HeatGrid { t0: 0.3, ..cfg.heat }, ..cfg };
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    run(a.path(), &cfg);
    run(b.path(), &cfg);
    let mut names: Vec<_> = std::fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.iter().any(|n| n == "manifest.json"));
    for name in names.iter().filter(|n| *n != "timings.json") {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert!(x == y, "{name:?} differs");
    }
}
