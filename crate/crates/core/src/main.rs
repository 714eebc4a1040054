use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use mmsp::report::{
    cmd_compare, cmd_spectrum, cmd_sweep, find_preset, parse_presets, write_output, CliError,
    OutputFormat, Preset, RunConfig, SweepAxis, SweepSpec, EXIT_USAGE,
};
use mmsp::{ApproximationScheme, PhysicalContext, PotentialParams, DEFAULT_C0};

/// Bound states of the modified Mobius square potential.
#[derive(Debug, Parser)]
#[command(name = "mmsp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form energy levels per (n, l, scheme).
    Spectrum(CommonArgs),
    /// Closed-form levels against the finite-difference oracle.
    Compare(CommonArgs),
    /// Energies along one parameter axis, in long format.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    Pekeris,
    GreeneAldrich,
    Both,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum AxisArg {
    V0,
    Alpha,
    A,
    B,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Potential depth V0.
    #[arg(long, allow_negative_numbers = true)]
    v0: Option<f64>,
    /// Coefficient A.
    #[arg(long = "a", allow_negative_numbers = true)]
    a: Option<f64>,
    /// Coefficient B.
    #[arg(long = "b", allow_negative_numbers = true)]
    b: Option<f64>,
    /// Screening parameter alpha.
    #[arg(long, allow_negative_numbers = true)]
    alpha: Option<f64>,
    /// Reduced mass [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    /// Reduced Planck constant [default: 1].
    #[arg(long, allow_negative_numbers = true)]
    hbar: Option<f64>,
    /// Constant term of the Pekeris-type centrifugal approximation.
    #[arg(long, default_value_t = DEFAULT_C0, allow_negative_numbers = true)]
    c0: f64,
    /// Orbital quantum number; repeat for several.
    #[arg(long = "l", default_values_t = [0u32])]
    l: Vec<u32>,
    /// Highest radial quantum number.
    #[arg(long, default_value_t = 3)]
    n_max: u32,
    #[arg(long, value_enum, default_value_t = SchemeArg::Both)]
    scheme: SchemeArg,
    /// Enable the numerical oracle (always on for `compare`).
    #[arg(long)]
    oracle: bool,
    /// Oracle grid points on the coarse grid.
    #[arg(long)]
    grid_points: Option<usize>,
    /// Outer radius of the oracle grid.
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Preset name to load from --preset-file.
    #[arg(long, requires = "preset_file")]
    preset: Option<String>,
    #[arg(long)]
    preset_file: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum)]
    axis: AxisArg,
    #[arg(long, allow_negative_numbers = true)]
    from: f64,
    #[arg(long, allow_negative_numbers = true)]
    to: f64,
    #[arg(long)]
    steps: usize,
}

impl CommonArgs {
    fn preset(&self) -> Result<Preset, CliError> {
        let Some(name) = &self.preset else {
            return Ok(Preset::default());
        };
        let path = self.preset_file.as_ref().expect("enforced by clap");
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        find_preset(&parse_presets(&text)?, name)
    }

    /// Flags override preset values; `placeholder` fills the swept axis.
    fn run_config(&self, placeholder: Option<SweepAxis>) -> Result<RunConfig, CliError> {
        let preset = self.preset()?;
        let pick = |flag: Option<f64>, stored: Option<f64>, name: &str, axis: SweepAxis| {
            flag.or(stored)
                .or_else(|| (placeholder == Some(axis)).then_some(1.0))
                .ok_or_else(|| CliError::Usage(format!("missing --{name}")))
        };
        let params = PotentialParams {
            v0: pick(self.v0, preset.v0, "v0", SweepAxis::V0)?,
            a_coef: pick(self.a, preset.a_coef, "a", SweepAxis::A)?,
            b_coef: pick(self.b, preset.b_coef, "b", SweepAxis::B)?,
            alpha: pick(self.alpha, preset.alpha, "alpha", SweepAxis::Alpha)?,
        };
        let ctx = PhysicalContext {
            mu: self.mu.or(preset.mu).unwrap_or(1.0),
            hbar: self.hbar.or(preset.hbar).unwrap_or(1.0),
        };
        let pekeris = ApproximationScheme::PekerisType { c0: self.c0 };
        let schemes = match self.scheme {
            SchemeArg::Pekeris => vec![pekeris],
            SchemeArg::GreeneAldrich => vec![ApproximationScheme::GreeneAldrich],
            SchemeArg::Both => vec![pekeris, ApproximationScheme::GreeneAldrich],
        };
        Ok(RunConfig {
            params,
            ctx,
            l_list: self.l.clone(),
            n_limit: self.n_max,
            schemes,
            oracle_enabled: self.oracle,
            grid_points: self.grid_points,
            r_max: self.r_max,
            format: match self.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            },
        }
        .with_sorted_schemes())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (table, common) = match &cli.command {
        Command::Spectrum(args) => (cmd_spectrum(&args.run_config(None)?)?, args),
        Command::Compare(args) => {
            let mut cfg = args.run_config(None)?;
            cfg.oracle_enabled = true;
            (cmd_compare(&cfg)?, args)
        }
        Command::Sweep(args) => {
            let axis = match args.axis {
                AxisArg::V0 => SweepAxis::V0,
                AxisArg::Alpha => SweepAxis::Alpha,
                AxisArg::A => SweepAxis::A,
                AxisArg::B => SweepAxis::B,
            };
            let cfg = args.common.run_config(Some(axis))?;
            let spec = SweepSpec {
                axis,
                from: args.from,
                to: args.to,
                steps: args.steps,
            };
            (cmd_sweep(&cfg, &spec)?, &args.common)
        }
    };
    let format = match common.format {
        FormatArg::Csv => OutputFormat::Csv,
        FormatArg::Json => OutputFormat::Json,
    };
    write_output(&table.render(format), common.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE as u8),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mmsp: {e}");
            if e.exit_code() == EXIT_USAGE {
                eprintln!("run `mmsp --help` for usage");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
