//! Exit codes and output files of the command-line tool.

use std::process::Command;

use degenerate_spectra::io::load_matrix;
use degenerate_spectra::spectra::Strategy;

fn tool() -> Command {
    Command::new(env!("CARGO_BIN_EXE_degenerate-spectra"))
}

#[test]
fn invalid_configuration_is_an_execution_error() {
    let out = tempfile::tempdir().unwrap();
    let status = tool().args(["spectrum", "--s-grid", "0.5,1", "--out"]).arg(out.path()).status().unwrap();
    assert_eq!(status.code(), Some(1));
    let config = out.path().join("bad.toml");
    std::fs::write(&config, "band_limit = 3\nunknown_key = 1\n").unwrap();
    let status = tool().args(["sweep", "--config"]).arg(&config).status().unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn spectrum_writes_tables_manifest_and_containers() {
    let out = tempfile::tempdir().unwrap();
    // stopping at s = 0.1 with B = 3 leaves some relative deltas above 2%
    let result = tool()
        .args(["spectrum", "--band-limit", "3", "--s-grid", "1,0.5,0.2,0.1", "--strategy", "constrained", "--out"])
        .arg(out.path())
        .output()
        .unwrap();
    let code = result.status.code();
    let stdout = String::from_utf8(result.stdout).unwrap();
    assert_eq!(code, Some(if stdout.contains("FAIL ") { 2 } else { 0 }), "{stdout}");

    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["band_limit"], 3);
    assert_eq!(manifest["pass"], code == Some(0));
    assert_eq!(manifest["config_hash"].as_str().unwrap().len(), 64);

    let csv = std::fs::read_to_string(out.path().join("spectrum_s0.5.csv")).unwrap();
    assert!(csv.starts_with("k,lambda,residual\n1,"));
    assert_eq!(csv.lines().count(), 1 + 49);

    let (header, m) = load_matrix(&out.path().join("eigenvectors_s0.2.dsmx")).unwrap();
    assert_eq!((header.band_limit, header.s, header.strategy, m.nrows(), m.ncols()), (3, Some(0.2), Strategy::Direct, 49, 49));
    let (header, _) = load_matrix(&out.path().join("eigenvectors_constrained.dsmx")).unwrap();
    assert_eq!((header.strategy, header.grid), (Strategy::Constrained, 0));
    assert!(!out.path().join("eigenvectors_regularized.dsmx").exists());
}
