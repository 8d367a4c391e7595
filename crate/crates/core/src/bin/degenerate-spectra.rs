use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use degenerate_spectra::harness::{
    label, sweep_kernel, sweep_projections, sweep_spectrum, sweep_tracenorm, sweep_zeta, validate, Injection, Report, StrategySelection,
    Study, SweepConfig,
};
use degenerate_spectra::io::save_matrix;
use degenerate_spectra::spectra::Strategy;

#[derive(Parser)]
#[command(version, about = "Spectra of the canonical-bundle Laplacian under a degenerating metric family")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Overrides,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Eigenvalue sweep; also stores eigenvector matrices.
    Spectrum,
    /// Eigenvalues and cluster projection gaps.
    Sweep,
    /// Heat trace-norm convergence.
    Heat,
    /// Spectral zeta convergence.
    Zeta,
    /// Heat-kernel L² convergence.
    Kernel,
    /// Property suites.
    Validate,
    /// Every section.
    Report,
}

#[derive(Args)]
struct Overrides {
    /// TOML configuration; defaults apply to missing keys.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true)]
    band_limit: Option<usize>,
    /// Comma-separated, strictly decreasing values in (0, 1].
    #[arg(long, global = true, value_delimiter = ',')]
    s_grid: Option<Vec<f64>>,
    #[arg(long, global = true)]
    t0: Option<f64>,
    #[arg(long, global = true, value_enum)]
    strategy: Option<StrategySelection>,
    #[arg(long, global = true)]
    seed: Option<u64>,
}

impl Overrides {
    fn config(&self) -> degenerate_spectra::Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(path) => SweepConfig::load(path)?,
            None => SweepConfig::default(),
        };
        if let Some(b) = self.band_limit {
            cfg.band_limit = b;
        }
        if let Some(grid) = &self.s_grid {
            cfg.s_grid = grid.clone();
        }
        if let Some(t0) = self.t0 {
            cfg.heat.t0 = t0;
        }
        if let Some(s) = self.strategy {
            cfg.strategy = s;
        }
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn run(cli: &Cli) -> degenerate_spectra::Result<bool> {
    let cfg = cli.opts.config()?;
    let study = Study::run(&cfg)?;
    let mut report = Report::new(&cfg);
    report.timings.extend(&study.timings);

    type SectionFn = fn(&Study) -> degenerate_spectra::Result<degenerate_spectra::harness::Section>;
    let sections: &[(&str, SectionFn)] = match cli.command {
        Command::Spectrum => &[("spectrum", sweep_spectrum)],
        Command::Sweep => &[("spectrum", sweep_spectrum), ("projections", sweep_projections)],
        Command::Heat => &[("tracenorm", sweep_tracenorm)],
        Command::Zeta => &[("zeta", sweep_zeta)],
        Command::Kernel => &[("kernel", sweep_kernel)],
        Command::Validate => &[],
        Command::Report => &[
            ("spectrum", sweep_spectrum),
            ("projections", sweep_projections),
            ("tracenorm", sweep_tracenorm),
            ("zeta", sweep_zeta),
            ("kernel", sweep_kernel),
        ],
    };
    for (name, section) in sections {
        let clock = Instant::now();
        report.sections.push(section(&study)?);
        report.timings.record(name, clock);
    }
    if matches!(cli.command, Command::Validate | Command::Report) {
        let clock = Instant::now();
        report.sections.push(validate(&study, Injection::None)?);
        report.timings.record("validate", clock);
    }
    report.write(&cli.opts.out)?;

    if cli.command == Command::Spectrum {
        for spec in study.all() {
            // limits are not assembled on a single FFT grid
            let grid = match (spec.strategy, spec.s) {
                (Strategy::Direct, Some(s)) => study.forms.grid_for(s)?,
                _ => 0,
            };
            let path = cli.opts.out.join(format!("eigenvectors_{}.dsmx", label(spec)));
            save_matrix(&path, cfg.band_limit, spec.s, spec.strategy, grid, &spec.eigenvectors)?;
        }
    }
    print!("{}", report.summary());
    Ok(report.pass())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
