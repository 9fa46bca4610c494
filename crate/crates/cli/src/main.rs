mod commands;
mod config;
mod error;
mod figures;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{format_from, settings_from, Defaults, RawConfig, RunConfig};
use cpgraphene::{Constants, Engine};
use error::{CliError, CliResult};
use std::path::PathBuf;
use std::process::ExitCode;

/// Casimir-Polder interaction of atoms with graphene-coated plates.
#[derive(Parser)]
#[command(name = "cpgraphene", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Free energy, force or zero-temperature energy over separations.
    Compute(RunArgs),
    /// Coated/bare ratio of the chosen quantity.
    Ratio(RunArgs),
    /// Closed-form classical limit next to the full computation.
    Classical(RunArgs),
    /// Smallest separation beyond which the classical limit holds to --rel-tol.
    Crossover(RunArgs),
    /// Write the data files for all six figures.
    Figures(FigureArgs),
}

#[derive(Args)]
struct RunArgs {
    /// key = value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in atom (Rb, Na, Cs, He*) or [name:]alpha0_au:omega0_eV.
    #[arg(long)]
    atom: Option<String>,
    /// Material name or inline model such as "drude 9 0.035".
    #[arg(long)]
    material: Option<String>,
    /// Additional materials database, searched before the built-ins.
    #[arg(long)]
    materials_db: Option<String>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    coated: Option<String>,
    /// Kelvin (default 300).
    #[arg(long)]
    temperature: Option<String>,
    /// Comma-separated separations in nm.
    #[arg(long, allow_hyphen_values = true)]
    separations: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a_start: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    a_stop: Option<String>,
    #[arg(long)]
    a_count: Option<String>,
    /// linear or log (default).
    #[arg(long)]
    a_scale: Option<String>,
    /// free-energy, force or energy-t0.
    #[arg(long)]
    quantity: Option<String>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<String>,
    /// csv (default) or json.
    #[arg(long)]
    format: Option<String>,
    /// Record failing points in a status column instead of stopping.
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    keep_going: Option<String>,
    #[arg(long)]
    tol_quad: Option<String>,
    #[arg(long)]
    tol_sum: Option<String>,
    /// Matsubara term budget (default 100000).
    #[arg(long)]
    max_terms: Option<String>,
    /// Crossover tolerance (default 0.02).
    #[arg(long)]
    rel_tol: Option<String>,
}

impl RunArgs {
    fn into_raw(self) -> CliResult<RawConfig> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::load(path)?,
            None => RawConfig::default(),
        };
        for (key, value) in [
            ("atom", self.atom),
            ("material", self.material),
            ("materials_db", self.materials_db),
            ("coated", self.coated),
            ("temperature", self.temperature),
            ("separations", self.separations),
            ("a_start", self.a_start),
            ("a_stop", self.a_stop),
            ("a_count", self.a_count),
            ("a_scale", self.a_scale),
            ("quantity", self.quantity),
            ("out", self.out),
            ("format", self.format),
            ("keep_going", self.keep_going),
            ("tol_quad", self.tol_quad),
            ("tol_sum", self.tol_sum),
            ("max_terms", self.max_terms),
            ("rel_tol", self.rel_tol),
        ] {
            raw.set(key, value);
        }
        Ok(raw)
    }

    fn resolve(self, defaults: Defaults) -> CliResult<RunConfig> {
        RunConfig::resolve(&self.into_raw()?, defaults)
    }
}

#[derive(Args)]
struct FigureArgs {
    #[arg(long, default_value = "figures")]
    out_dir: PathBuf,
    /// Points per curve, log-spaced.
    #[arg(long, default_value_t = 60)]
    a_count: usize,
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    tol_quad: Option<String>,
    #[arg(long)]
    tol_sum: Option<String>,
}

fn finish(table: output::Table, failure: Option<CliError>, cfg: &RunConfig) -> CliResult<()> {
    table.write(cfg.format, cfg.out.as_deref())?;
    failure.map_or(Ok(()), Err)
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Compute(args) => {
            let cfg = args.resolve(commands::COMPUTE)?;
            let (table, failure) = commands::compute(&cfg)?;
            finish(table, failure, &cfg)
        }
        Command::Ratio(args) => {
            let cfg = args.resolve(commands::RATIO)?;
            let (table, failure) = commands::ratio(&cfg)?;
            finish(table, failure, &cfg)
        }
        Command::Classical(args) => {
            let cfg = args.resolve(commands::CLASSICAL)?;
            let (table, failure) = commands::classical(&cfg)?;
            finish(table, failure, &cfg)
        }
        Command::Crossover(args) => {
            let cfg = args.resolve(commands::CROSSOVER)?;
            let table = commands::crossover(&cfg)?;
            finish(table, None, &cfg)
        }
        Command::Figures(args) => {
            let mut raw = RawConfig::default();
            raw.set("format", args.format);
            raw.set("tol_quad", args.tol_quad);
            raw.set("tol_sum", args.tol_sum);
            let engine = Engine::new(Constants::default(), settings_from(&raw)?)?;
            for path in figures::write_all(&engine, args.a_count, &args.out_dir, format_from(&raw)?)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are configuration errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("cpgraphene: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
