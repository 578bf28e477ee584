use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use dendra::canonical::Group;
use dendra::experiments::{d_generators, run_suite, SuiteParams, NUCLEUS_CAP, SUITES};
use dendra::family::{build_dw, BinSeqEP};

#[derive(Parser)]
#[command(name = "dendra", version, about = "Experiments on a family of self-similar groups acting on rooted trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite; exit status 0 = pass, 1 = fail, 2 = inconclusive.
    Suite {
        /// One of: relations, dihedral, nucleus, prefix, quotients, lsub, conjugator, growth, ratmap.
        name: String,
        /// Sequence `PREFIX:PERIOD`, e.g. `:0` or `1:01`; repeatable. Conjugator pairs are consecutive values.
        #[arg(long = "w", value_name = "PREFIX:PERIOD")]
        ws: Vec<BinSeqEP>,
        /// Level range `A..B` (inclusive).
        #[arg(long, value_parser = parse_levels)]
        levels: Option<RangeInclusive<usize>>,
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Output file; the format follows the extension (json, csv, txt). Defaults to text on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the nucleus of `𝒟`, or of `𝒟_w` with `--w`.
    Nucleus {
        #[arg(long = "w", value_name = "PREFIX:PERIOD")]
        w: Option<BinSeqEP>,
        #[arg(long, default_value_t = NUCLEUS_CAP)]
        cap: usize,
    },
}

fn parse_levels(s: &str) -> Result<RangeInclusive<usize>, String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected A..B, got `{s}`"))?;
    let a: usize = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: usize = b.trim().trim_start_matches('=').parse().map_err(|e| format!("{b}: {e}"))?;
    if a > b {
        return Err(format!("empty level range {a}..{b}"));
    }
    Ok(a..=b)
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    match cli.command {
        Command::Suite { name, ws, levels, radius, depth, trials, seed, out } => {
            if !SUITES.contains(&name.as_str()) {
                bail!("unknown suite `{name}`; expected one of {}", SUITES.join(", "));
            }
            let params = SuiteParams { ws, levels, radius, depth, trials, seed };
            let run = run_suite(&name, &params)?;
            let code = run.report.exit_code() as u8;
            match out {
                None => print!("{}", run.report.to_text()),
                Some(path) => {
                    let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
                    let body = match ext {
                        "json" => run.report.to_json(),
                        "txt" => run.report.to_text(),
                        "csv" => match run.csv {
                            Some(csv) => csv,
                            None => bail!("only the growth suite writes CSV"),
                        },
                        _ => bail!("unsupported output extension `{ext}`; use json, csv or txt"),
                    };
                    std::fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
                    eprintln!("suite {name}: {} ({})", run.report.status().as_str(), path.display());
                }
            }
            Ok(code)
        }
        Command::Nucleus { w, cap } => {
            let gens = match &w {
                Some(w) => build_dw(w).generators(),
                None => d_generators(),
            };
            let mut group = Group::new(&gens, cap)?;
            println!("{} elements", group.nucleus().len());
            print!("{}", group.nucleus_dump()?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
