use clap::{Parser, Subcommand};
use priorlab_cli::{config::Config, zoo, Format, RunError};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "priorlab", version, about = "Exact experiments on Bayesian RL priors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a config file
    Run {
        config: PathBuf,
        /// Output directory (overrides output.dir)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format (overrides output.format)
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Seed for randomized policy sampling (overrides the config's)
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the environment catalog
    ListZoo {
        #[arg(long)]
        json: bool,
    },
}

fn run(
    path: PathBuf,
    out: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
    jobs: usize,
) -> Result<bool, RunError> {
    let config = Config::load(&path)?;
    let report = priorlab_cli::run_with_jobs(&config, seed, jobs)?;
    let dir = out
        .or_else(|| config.output.dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let format = format.or(config.output.format).unwrap_or_default();
    let stem = config.output.stem.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "report".into())
    });
    let written = report.write_files(&dir, &stem, format.json(), format.csv())?;
    for c in &report.checks {
        println!("[{}] {}", if c.holds { "pass" } else { "FAIL" }, c.name);
        if !c.holds {
            println!("       {}", c.outcome);
        }
    }
    for p in written {
        println!("wrote {}", p.display());
    }
    Ok(report.all_hold())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListZoo { json } => {
            let entries = zoo::catalog();
            if json {
                println!("{}", serde_json::to_string_pretty(&entries).expect("catalog serializes"));
            } else {
                for e in entries {
                    let params: Vec<String> =
                        e.params.iter().map(|p| format!("{}: {}", p.name, p.ty)).collect();
                    println!("{:<9} {:<32} [{}] {}", e.kind, format!("({})", params.join(", ")), e.anchor, e.description);
                }
            }
            ExitCode::SUCCESS
        }
        Command::Run { config, out, format, seed, jobs } => match run(config, out, format, seed, jobs) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
