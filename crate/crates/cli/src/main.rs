use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twistspec_cli::config::{parse_entries, read_entries, set_preset, Entries};
use twistspec_cli::tables::{compare_files, limit_tables, potential_table};
use twistspec_cli::{reproduce_figure, run, run_experiment, CliError, ExperimentConfig, FigureId};

#[derive(Parser)]
#[command(name = "twistspec", version, about = "Spectra of randomly perturbed twisted Toeplitz matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the configured matrices and compare their spectra with the limit measure.
    Spectrum(Overrides),
    /// Tabulate the pointwise and integrated log-growth exponents over a z-grid.
    Potential(Overrides),
    /// Sample the limit measure, its support and the frozen root loci.
    Limit(Overrides),
    /// Sliced W1 and Hausdorff distance between two `re,im` CSV clouds.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = twistspec_core::measures::DEFAULT_ANGLES)]
        angles: usize,
        /// Also write the result to DIR/compare.json.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Reproduce one of the reference figures (fig1, fig2, fig4, fig5).
    Figure {
        id: FigureId,
        #[command(flatten)]
        overrides: Overrides,
    },
}

/// Flags that override config keys.
#[derive(Args)]
struct Overrides {
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Matrix size or comma-separated list of sizes.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Perturbation scale: a number or `1/n`.
    #[arg(long)]
    sigma: Option<String>,
    /// paper-binomial, standard-normal, rademacher or uniform-sym.
    #[arg(long)]
    noise: Option<String>,
    /// deterministic, perturbed or randomized.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// fig1, fig2, ex4 or ex5.
    #[arg(long)]
    preset: Option<String>,
}

impl Overrides {
    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut entries: Entries = match &self.config {
            Some(path) => read_entries(path)?,
            None => parse_entries("")?,
        };
        let mut set = |k: &str, v: String| {
            entries.insert(k.to_string(), v);
        };
        if let Some(v) = &self.n {
            set("n", v.clone());
        }
        if let Some(v) = self.seed {
            set("seed", v.to_string());
        }
        if let Some(v) = &self.sigma {
            set("sigma", v.clone());
        }
        if let Some(v) = &self.noise {
            set("noise.dist", v.clone());
        }
        if let Some(v) = &self.mode {
            set("mode", v.clone());
        }
        if let Some(v) = &self.out {
            set("out", v.display().to_string());
        }
        if let Some(v) = &self.preset {
            set_preset(&mut entries, v);
        }
        Ok(ExperimentConfig::from_entries(&entries)?)
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum(o) => {
            let reports = run_experiment(&o.resolve()?)?;
            for r in &reports {
                println!(
                    "n = {:>5}  sliced W1 = {:.6}  Hausdorff = {:.6}  eigensolve {:.2}s  -> {}",
                    r.metrics.n,
                    r.metrics.sliced_w1,
                    r.metrics.hausdorff_to_support,
                    r.metrics.runtimes.eigensolve,
                    r.dir.display()
                );
            }
            let failed = run::unconverged(&reports);
            if let Some((n, dir)) = failed.first() {
                return Err(CliError::Numerical(twistspec_core::Error::InvalidArgument(format!(
                    "eigensolver did not converge for n = {n} (see {})",
                    dir.join("metrics.json").display()
                ))));
            }
        }
        Command::Potential(o) => {
            let cfg = o.resolve()?;
            let m = potential_table(&cfg)?;
            println!("{} x {} grid -> {}", m.grid, m.grid, cfg.out.join("potential.csv").display());
        }
        Command::Limit(o) => {
            let cfg = o.resolve()?;
            let m = limit_tables(&cfg)?;
            println!("{} samples ({}) -> {}", m.limit_samples, m.limit_kind, cfg.out.display());
        }
        Command::Compare { a, b, angles, out } => {
            if angles == 0 {
                return Err(CliError::Input("--angles must be at least 1".into()));
            }
            let c = compare_files(&a, &b, angles)?;
            println!("{}", serde_json::to_string_pretty(&c).expect("comparison serialises"));
            if let Some(dir) = out {
                twistspec_cli::io::ensure_dir(&dir)?;
                twistspec_cli::io::write_json(&dir.join("compare.json"), &c)?;
            }
        }
        Command::Figure { id, overrides } => {
            let report = reproduce_figure(id, &overrides.resolve()?)?;
            println!("{id}: n = {} -> {}", report.metrics.n, report.dir.display());
            if !report.converged() {
                return Err(CliError::Numerical(twistspec_core::Error::InvalidArgument(format!(
                    "eigensolver did not converge (see {})",
                    report.dir.join("metrics.json").display()
                ))));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
