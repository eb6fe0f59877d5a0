use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use ytri_cli::report::Format;
use ytri_cli::run::{execute, fixture_commands, Command, EXIT_INPUT, EXIT_OK};

/// Exact classification, decomposition, inversion and injectivity
/// analysis for planar maps polynomial in y.
#[derive(Parser)]
#[command(name = "ytri", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    /// Report rendering: flat dotted keys or an indented tree.
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
    /// Omit the trailing timing line (it is excluded from the
    /// determinism contract anyway).
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Tree,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Text => Format::Text,
            FormatArg::Tree => Format::Tree,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Map type, Jacobian determinant, delta/Jacobian status and
    /// non-singularity on the strip.
    Classify { map: String },
    /// Factor the map into a chain of triangular and quasi-triangular
    /// factors, exactly verified.
    Decompose { map: String },
    /// Decompose and invert; explicit polynomial inverse when possible,
    /// exact bisection evaluator otherwise.
    Invert {
        map: String,
        /// Round-trip tolerance exponent k (defect below 2^-k).
        #[arg(long, default_value_t = 40)]
        tolerance_bits: u32,
    },
    /// Run the injectivity criteria, a decomposition-chain certificate,
    /// and the collision falsifier.
    CheckInjectivity {
        map: String,
        /// Falsifier sample budget.
        #[arg(long, default_value_t = 10_000)]
        budget: usize,
        /// Falsifier stream seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Treat undecided non-singularity as claimed by the caller.
        #[arg(long)]
        assume_nonsingular: bool,
    },
    /// Evaluate the map at an exact rational point.
    Eval {
        map: String,
        /// The point, as "u,v" with rational coordinates.
        #[arg(long)]
        at: String,
    },
    /// Decompose, recompose, and re-check the chain certificates.
    VerifyChain { map: String },
    /// Regenerate the fixture corpus of input/expected-report pairs.
    Fixtures {
        /// Target directory for the fixture files.
        #[arg(long)]
        dir: PathBuf,
    },
}

fn to_run_command(cmd: &Cmd) -> Option<Command> {
    Some(match cmd {
        Cmd::Classify { map } => Command::Classify { map: map.clone() },
        Cmd::Decompose { map } => Command::Decompose { map: map.clone() },
        Cmd::Invert {
            map,
            tolerance_bits,
        } => Command::Invert {
            map: map.clone(),
            tolerance_bits: *tolerance_bits,
        },
        Cmd::CheckInjectivity {
            map,
            budget,
            seed,
            assume_nonsingular,
        } => Command::CheckInjectivity {
            map: map.clone(),
            budget: *budget,
            seed: *seed,
            assume_nonsingular: *assume_nonsingular,
        },
        Cmd::Eval { map, at } => Command::Eval {
            map: map.clone(),
            at: at.clone(),
        },
        Cmd::VerifyChain { map } => Command::VerifyChain { map: map.clone() },
        Cmd::Fixtures { .. } => return None,
    })
}

fn main() {
    let cli = Cli::parse();
    let format: Format = cli.format.into();

    if let Cmd::Fixtures { dir } = &cli.command {
        std::process::exit(regenerate_fixtures(dir, format));
    }

    let command = to_run_command(&cli.command).expect("fixtures handled above");
    let started = Instant::now();
    match execute(&command) {
        Ok(outcome) => {
            let mut text = outcome.report.render(format);
            if !cli.no_timing {
                text.push_str(&format!("timing_us = {}\n", started.elapsed().as_micros()));
            }
            print!("{text}");
            std::process::exit(outcome.exit);
        }
        Err(parse_error) => {
            eprintln!("{parse_error}");
            std::process::exit(EXIT_INPUT);
        }
    }
}

fn regenerate_fixtures(dir: &PathBuf, format: Format) -> i32 {
    if let Err(e) = std::fs::create_dir_all(dir) {
        eprintln!("cannot create {}: {e}", dir.display());
        return EXIT_INPUT;
    }
    for (name, command) in fixture_commands() {
        match execute(&command) {
            Ok(outcome) => {
                let path = dir.join(format!("{name}.report"));
                let mut payload = outcome.report.render(format);
                payload.push_str(&format!("exit = {}\n", outcome.exit));
                match std::fs::File::create(&path)
                    .and_then(|mut f| f.write_all(payload.as_bytes()))
                {
                    Ok(()) => println!("wrote {}", path.display()),
                    Err(e) => {
                        eprintln!("cannot write {}: {e}", path.display());
                        return EXIT_INPUT;
                    }
                }
            }
            Err(e) => {
                eprintln!("fixture {name} failed to run: {e}");
                return EXIT_INPUT;
            }
        }
    }
    EXIT_OK
}
