use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use zforge::harness::{self, make_body, run_suite, BodySpec, SuiteConfig};
use zforge::lattice::{count_lattice, mu_measure};
use zforge::polytope::{to_json, volume};
use zforge::rational::q_to_json;
use zforge::steiner::steiner_symmetrize;
use zforge::suite::REGISTRY;
use zforge::Error;

const EXIT_CONFIG: u8 = 64;

#[derive(Parser)]
#[command(name = "zforge", version, about = "Check Zhang- and Berwald-type inequalities on lattice polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checker suite and write report.json / report.csv.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Evaluate one quantity on a single body.
    Body {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        op: Op,
    },
    /// Run only the limit sweeps of a config and print them.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    ListCheckers,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Volume,
    Lattice,
    Steiner,
    Mu,
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("zforge: {e}");
    match e {
        Error::Config(_) | Error::UnknownChecker(_) | Error::DegenerateSpec(_) => ExitCode::from(EXIT_CONFIG),
        _ => ExitCode::FAILURE,
    }
}

fn load_spec(path: &Path) -> zforge::Result<BodySpec> {
    let s = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&s).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn body_op(spec: &Path, op: Op) -> zforge::Result<Value> {
    let k = make_body(&load_spec(spec)?)?;
    Ok(match op {
        Op::Volume => json!({ "volume": q_to_json(&volume(&k)) }),
        Op::Lattice => json!({ "lattice_points": count_lattice(&k, 0)? }),
        Op::Mu => json!({ "mu": q_to_json(&mu_measure(&k)?) }),
        Op::Steiner => to_json(&steiner_symmetrize(&k)?),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListCheckers => {
            for c in REGISTRY {
                println!("{}\t{}", c.id, c.reference);
            }
            ExitCode::SUCCESS
        }
        Command::Body { spec, op } => match body_op(&spec, op) {
            Ok(v) => {
                println!("{}", serde_json::to_string_pretty(&v).expect("json"));
                ExitCode::SUCCESS
            }
            Err(e) => fail(&e),
        },
        Command::Verify { config, out, seed, jobs } => {
            let mut cfg = match SuiteConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            if let Some(s) = seed {
                cfg.params.seed = s;
            }
            let report = match run_suite(&cfg, jobs) {
                Ok(r) => r,
                Err(e) => return fail(&e),
            };
            let dir = harness::output_dir(&cfg, out.as_deref());
            if let Err(e) = report.write(&dir) {
                return fail(&e);
            }
            let s = &report.summary;
            println!(
                "total {} holds {} fails {} inconclusive {} skipped {} -> {}",
                s.total,
                s.holds,
                s.fails,
                s.inconclusive,
                s.skipped,
                dir.display()
            );
            ExitCode::from(s.exit_code() as u8)
        }
        Command::Sweep { config, jobs } => {
            let mut cfg = match SuiteConfig::load(&config) {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            cfg.bodies.clear();
            match run_suite(&cfg, jobs) {
                Ok(r) => {
                    println!("{}", serde_json::to_string_pretty(&r.sweeps).expect("json"));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(&e),
            }
        }
    }
}
