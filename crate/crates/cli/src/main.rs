mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use biharmonic::divisor_means::MeanKind;
use biharmonic::formal::ExponentPattern;
use biharmonic::oeis::default_cache_dir;
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use commands::{Geo2Args, OeisConfig};
use output::{Format, Rendered, Report};

/// Exact divisor means, biharmonic numbers and crystals.
#[derive(Parser, Debug)]
#[command(name = "biharmonic", version)]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// b-file cache directory; falls back to $BIHARMONIC_OEIS_CACHE.
    #[arg(long, global = true)]
    oeis_cache_dir: Option<PathBuf>,
    /// Allow fetching b-files from oeis.org when no embedded prefix exists.
    #[arg(long, global = true)]
    network: bool,
    /// HTTP timeout in seconds.
    #[arg(long, global = true, default_value_t = 30)]
    timeout: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Divisor means of n.
    Means {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// n ≤ limit whose divisor mean of the given kind is an integer.
    Enumerate {
        kind: MeanKind,
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
        /// Compare against the OEIS prefix.
        #[arg(long)]
        check_oeis: bool,
    },
    /// Crystals N ≤ limit from the θ(a_n) construction.
    Crystals(CrystalArgs),
    /// Check an identity over a range.
    Verify {
        #[command(subcommand)]
        target: Target,
    },
    /// Look for crystals with more than one decomposition.
    Conjecture {
        #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
}

#[derive(Args, Debug)]
struct CrystalArgs {
    #[arg(long, conflicts_with = "all", required_unless_present = "all", value_parser = clap::value_parser!(u64).range(1..))]
    w: Option<u64>,
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = 1_000_000)]
    limit: u64,
    /// Confirm each record by brute-force decomposition.
    #[arg(long)]
    verify: bool,
}

#[derive(Subcommand, Debug)]
enum Target {
    /// G² = H·A over symbolic divisor sets.
    Geo2 {
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..=4))]
        k_max: u64,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..=8))]
        e_max: u32,
        /// Single exponent pattern, e.g. "2,1".
        #[arg(long)]
        pattern: Option<ExponentPattern>,
        /// Also evaluate at random rational points.
        #[arg(long)]
        numeric: bool,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// θ(a_n) = 2u_n − 1, the order-3 recurrence, and (a_n, a_{n−1}) on C(w).
    Theta {
        #[arg(long, default_value_t = 50)]
        w_max: u64,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
    },
    /// The correspondences between C, C₂ and C₃.
    Conics {
        #[arg(long, default_value_t = 50)]
        w_max: u64,
        #[arg(long, default_value_t = 100)]
        n_max: usize,
    },
    /// Positive solutions of (x+y−1)² = wxy are consecutive u-pairs.
    Diophantine {
        #[arg(long, conflicts_with = "w_max")]
        w: Option<u64>,
        #[arg(long, default_value_t = 30)]
        w_max: u64,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
    },
    /// (n+1)σ₁ − σ₂ − nσ₀ as a sum over divisor pairs.
    SumIdentity {
        #[arg(long, default_value_t = 10_000)]
        n_max: u64,
    },
    /// Integrality of B, F, P, Q agrees for odd a, b ≤ max.
    Equivalence {
        #[arg(long, default_value_t = 500)]
        max: u64,
    },
}

// default_cache_dir reads BIHARMONIC_OEIS_CACHE
fn cache_dir(flag: &Option<PathBuf>) -> PathBuf {
    flag.clone().unwrap_or_else(default_cache_dir)
}

struct Outcome {
    command: &'static str,
    parameters: Map<String, Value>,
    report: Report,
    seed: Option<u64>,
}

fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let mut params = Map::new();
    let mut seed = None;
    let (name, report) = match &cli.command {
        Command::Means { n } => {
            params.insert("n".into(), json!(n));
            ("means", commands::means(*n)?)
        }
        Command::Enumerate { kind, limit, check_oeis } => {
            params.insert("kind".into(), json!(kind));
            params.insert("limit".into(), json!(limit));
            params.insert("check_oeis".into(), json!(check_oeis));
            let cfg = check_oeis.then(|| OeisConfig {
                cache_dir: cache_dir(&cli.oeis_cache_dir),
                network: cli.network,
                timeout: Duration::from_secs(cli.timeout),
            });
            ("enumerate", commands::enumerate_cmd(*kind, *limit, cfg.as_ref())?)
        }
        Command::Crystals(a) => {
            match a.w {
                Some(w) => params.insert("w".into(), json!(w)),
                None => params.insert("all".into(), json!(true)),
            };
            params.insert("limit".into(), json!(a.limit));
            params.insert("verify".into(), json!(a.verify));
            ("crystals", commands::crystals(a.w, a.limit, a.verify)?)
        }
        Command::Verify { target } => {
            let report = match target {
                Target::Geo2 { k_max, e_max, pattern, numeric, trials } => {
                    params.insert("target".into(), json!("geo2"));
                    match pattern {
                        Some(p) => params.insert("pattern".into(), json!(p.exponents())),
                        None => {
                            params.insert("k_max".into(), json!(k_max));
                            params.insert("e_max".into(), json!(e_max))
                        }
                    };
                    params.insert("numeric".into(), json!(numeric));
                    if *numeric {
                        params.insert("trials".into(), json!(trials));
                        seed = Some(cli.seed.unwrap_or(0));
                    }
                    commands::verify_geo2(&Geo2Args {
                        k_max: *k_max as usize,
                        e_max: *e_max,
                        pattern: pattern.clone(),
                        numeric: *numeric,
                        trials: *trials,
                        seed: seed.unwrap_or(0),
                    })?
                }
                Target::Theta { w_max, n_max } => {
                    params.insert("target".into(), json!("theta"));
                    params.insert("w_max".into(), json!(w_max));
                    params.insert("n_max".into(), json!(n_max));
                    commands::verify_theta(*w_max, *n_max)?
                }
                Target::Conics { w_max, n_max } => {
                    params.insert("target".into(), json!("conics"));
                    params.insert("w_max".into(), json!(w_max));
                    params.insert("n_max".into(), json!(n_max));
                    commands::verify_conics(*w_max, *n_max)?
                }
                Target::Diophantine { w, w_max, bound } => {
                    params.insert("target".into(), json!("diophantine"));
                    match w {
                        Some(w) => params.insert("w".into(), json!(w)),
                        None => params.insert("w_max".into(), json!(w_max)),
                    };
                    params.insert("bound".into(), json!(bound));
                    match w {
                        Some(w) => commands::verify_diophantine(std::iter::once(*w), *bound)?,
                        None => commands::verify_diophantine(1..=*w_max, *bound)?,
                    }
                }
                Target::SumIdentity { n_max } => {
                    params.insert("target".into(), json!("sum-identity"));
                    params.insert("n_max".into(), json!(n_max));
                    commands::verify_sum_identity(*n_max)?
                }
                Target::Equivalence { max } => {
                    params.insert("target".into(), json!("equivalence"));
                    params.insert("max".into(), json!(max));
                    commands::verify_equivalence(*max)?
                }
            };
            ("verify", report)
        }
        Command::Conjecture { limit } => {
            params.insert("limit".into(), json!(limit));
            ("conjecture", commands::conjecture(*limit)?)
        }
    };
    Ok(Outcome { command: name, parameters: params, report, seed })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let Outcome { command, parameters, report, seed } = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    let rendered = Rendered { command, parameters, report: &report, timing_ms: start.elapsed().as_millis(), seed };
    let mut out = std::io::stdout().lock();
    if let Err(e) = rendered.write(cli.format, &mut out).and_then(|_| out.flush()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    ExitCode::from(report.status.code())
}
