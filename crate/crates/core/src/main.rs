use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use margulis::cli::{cmd_domain, cmd_holonomy, cmd_invariants, Report, SceneConfig};

/// Holonomy, Margulis invariants and crooked fundamental domains.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Trace coordinates, lengths, word classification, identity residuals.
    Holonomy(Common),
    /// Margulis invariants, relation residuals, cone classification.
    Invariants(Common),
    /// Crooked fundamental domain construction and verification.
    Domain(Common),
}

#[derive(Args)]
struct Common {
    /// JSON scene configuration; `-` reads standard input.
    config: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Maximum reduced word length.
    #[arg(long)]
    depth: Option<usize>,
    /// Samples per crooked plane for the sampling oracles.
    #[arg(long)]
    samples: Option<usize>,
    /// Euclidean truncation radius for sampling and meshes.
    #[arg(long)]
    radius: Option<f64>,
    /// Bound on identity residuals.
    #[arg(long)]
    tol: Option<f64>,
    /// Seed of the sampling oracles.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for one OBJ mesh per domain face.
    #[arg(long, value_name = "DIR")]
    mesh_out: Option<PathBuf>,
    /// Perturb non-strict vertex coefficients before building the domain.
    #[arg(long)]
    resolve_kissing: bool,
}

const EXIT_FAIL: u8 = 1;
const EXIT_INPUT: u8 = 2;

fn load(c: &Common) -> Result<SceneConfig, String> {
    let text = if c.config.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| format!("stdin: {e}"))?;
        s
    } else {
        std::fs::read_to_string(&c.config).map_err(|e| format!("{}: {e}", c.config.display()))?
    };
    let mut cfg = SceneConfig::from_json(&text).map_err(|e| e.to_string())?;
    let v = &mut cfg.verify;
    if let Some(d) = c.depth {
        v.word_depth = d;
    }
    if let Some(n) = c.samples {
        v.samples = n;
    }
    if let Some(r) = c.radius {
        v.radius = r;
    }
    if let Some(t) = c.tol {
        v.tolerances.identity = t;
    }
    if let Some(s) = c.seed {
        v.seed = s;
    }
    v.resolve_kissing |= c.resolve_kissing;
    cfg.validate().map_err(|e| e.to_string())?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(Report, Option<PathBuf>), String> {
    let (c, report) = match &cli.command {
        Command::Holonomy(c) => (
            c,
            load(c).and_then(|cfg| cmd_holonomy(&cfg).map_err(|e| e.to_string()))?,
        ),
        Command::Invariants(c) => (
            c,
            load(c).and_then(|cfg| cmd_invariants(&cfg).map_err(|e| e.to_string()))?,
        ),
        Command::Domain(c) => {
            let cfg = load(c)?;
            let (r, _) = cmd_domain(&cfg, c.mesh_out.as_deref()).map_err(|e| e.to_string())?;
            (c, r)
        }
    };
    Ok((report, c.out.clone()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (report, out) = match run(cli) {
        Ok(r) => r,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let json = report.to_json();
    match out {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, &json) {
                eprintln!("error: {}: {e}", p.display());
                return ExitCode::from(EXIT_INPUT);
            }
        }
        None => print!("{json}"),
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}
