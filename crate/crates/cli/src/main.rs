use std::io::Write;
use std::path::PathBuf;

use alevol_cli::commands::{self, EhArgs, EhCheck, Format, Zeta};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "alevol",
    version,
    about = "Exact and numeric checks for leading terms of 4d ALE metrics"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Renvol,
    B,
    Ros,
    Decay,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Symbolic,
    Kernel,
    Mckay,
    Eh,
    All,
}

#[derive(Subcommand)]
enum Cmd {
    /// Nullity and rank of the 80x90 gauge matrix.
    Kernel {
        /// Emit the 26 kernel tensors and their coordinates.
        #[arg(long)]
        basis: bool,
        /// Emit the U1/U2/U3/S4plus/S4minus dimensions.
        #[arg(long)]
        split: bool,
    },
    /// Split a kernel element into S4plus, S4minus and gauge parts.
    Decompose { file: PathBuf },
    /// Renormalized volume from a period point.
    #[command(group(ArgGroup::new("zeta").required(true).args(["zeta_gram", "zeta_coords"])))]
    Volume {
        #[arg(long)]
        gamma: String,
        /// Upper-triangular Gram entries z11,z12,z13,z22,z23,z33.
        #[arg(long, allow_hyphen_values = true)]
        zeta_gram: Option<String>,
        /// 3 x rank Cartan coordinates, row-major, comma separated.
        #[arg(long, allow_hyphen_values = true)]
        zeta_coords: Option<String>,
    },
    /// CMC profile and checks on Eguchi-Hanson.
    Eh {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 10.0)]
        rho_min: f64,
        #[arg(long, default_value_t = 1e4)]
        rho_max: f64,
        #[arg(long, default_value_t = 32)]
        points: usize,
        #[arg(long, value_enum)]
        check: Option<CheckArg>,
        /// Kernel element for `--check decay` (default: reduced Kronheimer term, unit z12).
        #[arg(long)]
        h0: Option<PathBuf>,
        /// Perturbation amplitude at unit radius, as a rational.
        #[arg(long, default_value = "1")]
        amplitude: String,
        #[arg(long, value_enum, default_value_t = FormatArg::Json)]
        format: FormatArg,
    },
    /// Run an invariant suite and report each check.
    Verify {
        #[arg(long, value_enum, default_value_t = SuiteArg::All)]
        suite: SuiteArg,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                commands::EXIT_INPUT
            } else {
                0
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Some(n) = alevol_cli::configure_threads() {
        eprintln!("alevol: using {n} threads");
    }
    let outcome = match cli.cmd {
        Cmd::Kernel { basis, split } => commands::kernel(basis, split),
        Cmd::Decompose { file } => commands::decompose(&file),
        Cmd::Volume {
            gamma,
            zeta_gram,
            zeta_coords,
        } => {
            let z = match (&zeta_gram, &zeta_coords) {
                (Some(g), _) => Zeta::Gram(g),
                (None, Some(c)) => Zeta::Coords(c),
                (None, None) => unreachable!("clap enforces the group"),
            };
            commands::volume(&gamma, z)
        }
        Cmd::Eh {
            a,
            rho_min,
            rho_max,
            points,
            check,
            h0,
            amplitude,
            format,
        } => {
            let check = check.map(|c| match c {
                CheckArg::Renvol => EhCheck::Renvol,
                CheckArg::B => EhCheck::B,
                CheckArg::Ros => EhCheck::Ros,
                CheckArg::Decay => EhCheck::Decay,
            });
            let format = match format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            };
            commands::eh(&EhArgs {
                a,
                rho_min,
                rho_max,
                points,
                check,
                h0: h0.as_deref(),
                amplitude: &amplitude,
                format,
            })
        }
        Cmd::Verify { suite } => {
            let name = match suite {
                SuiteArg::Symbolic => "symbolic",
                SuiteArg::Kernel => "kernel",
                SuiteArg::Mckay => "mckay",
                SuiteArg::Eh => "eh",
                SuiteArg::All => "all",
            };
            eprintln!("alevol: running suite {name}");
            commands::verify(name)
        }
    };
    if outcome.code != commands::EXIT_OK {
        eprintln!("alevol: exit {}", outcome.code);
    }
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(outcome.render().as_bytes());
    let _ = stdout.flush();
    std::process::exit(outcome.code);
}
