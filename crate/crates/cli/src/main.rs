use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use hypercone_cli::commands;
use hypercone_cli::driver::{RunConfig, VerifyLevel};

#[derive(Parser)]
#[command(name = "hypercone", version, about = "Faces of the hypermetric cone and combinatorial types of Delaunay polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List and verify the facets of HYP_{n+1}
    Facets {
        #[arg(short, default_value_t = 6)]
        n: usize,
        /// Replace the first orbit representative by a non-facet (self-test of the verifier)
        #[arg(long, hide = true)]
        corrupt: bool,
    },
    /// Build and verify the extreme rays of HYP_7
    Rays {
        /// Write the inventory as JSON lines
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate combinatorial types level by level
    Classify {
        #[arg(short, default_value_t = 6)]
        n: usize,
        #[arg(long)]
        max_corank: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        #[arg(long, value_enum, default_value_t = VerifyLevel::Fast)]
        verify: VerifyLevel,
        /// Wall-time budget per level, in seconds
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Check the nonnegative decompositions behind basicness
    VerifyBasic,
    /// Compare a checkpoint directory with the published counts
    Report { dir: PathBuf },
    /// Reconstruct the Delaunay polytope of a distance vector
    Annulator {
        #[arg(long)]
        dist: PathBuf,
    },
}

fn run(cli: Cli) -> Result<bool> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let pass = match cli.command {
        Command::Facets { n, corrupt } => {
            let replacement = (corrupt && n == 6).then_some(&commands::NON_FACET_6[..]);
            commands::cmd_facets(n, replacement, &mut out)?
        }
        Command::Rays { out: path } => commands::cmd_rays(path.as_deref(), &mut out)?,
        Command::Classify { n, max_corank, checkpoint, threads, verify, budget } => {
            let cfg = RunConfig {
                n,
                max_corank,
                checkpoint_dir: checkpoint,
                threads,
                verify,
                budget: budget.map(Duration::from_secs),
            };
            commands::cmd_classify(&cfg, &mut out)?.1
        }
        Command::VerifyBasic => commands::cmd_verify_basic(&mut out)?,
        Command::Report { dir } => commands::cmd_report(&dir, &mut out)?,
        Command::Annulator { dist } => {
            let text = std::fs::read_to_string(&dist).with_context(|| format!("reading {}", dist.display()))?;
            commands::cmd_annulator(&text, &mut out)?
        }
    };
    out.flush()?;
    Ok(pass)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
