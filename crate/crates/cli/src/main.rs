mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{load_group, Caps, OutputMode, RunConfig};
use relhyp::DEFAULT_ENUMERATION_CAP;

#[derive(Debug, Parser)]
#[command(name = "relhyp", version, about = "Conjugacy search in free products of free abelian groups")]
struct Cli {
    /// Group: `f2`, `z2z`, `z2z2` or a JSON group file.
    #[arg(long, global = true, default_value = "z2z")]
    group: String,
    /// Constants fixture; measured on finite balls when absent.
    #[arg(long, global = true)]
    constants: Option<PathBuf>,
    /// Ball radius for estimators and dumps [default: 4, at most the global cap].
    #[arg(long, global = true)]
    radius: Option<usize>,
    #[arg(long = "exp-cap", global = true, default_value_t = 4)]
    exp_cap: u64,
    #[arg(long = "count-cap", global = true, default_value_t = 64)]
    count_cap: usize,
    /// Search radius for conjugator searches [default: 6, at most the global cap].
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Ceiling on every enumeration radius.
    #[arg(long = "global-cap", global = true, env = "RELHYP_CAP", default_value_t = DEFAULT_ENUMERATION_CAP)]
    global_cap: usize,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    X,
    Rel,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of a word.
    Nf {
        #[arg(long)]
        word: String,
    },
    /// Word problem: do two words name the same element?
    Eq {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
    },
    /// Identity, parabolic or hyperbolic.
    Classify {
        #[arg(long)]
        word: String,
    },
    /// Distances in both metrics, optionally with the relative geodesics.
    Dist {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// List relative geodesics without backtracking (up to --count-cap).
        #[arg(long)]
        geodesics: bool,
    },
    /// Dump a ball as JSON lines.
    Ball {
        #[arg(long, value_enum, default_value = "x")]
        metric: MetricArg,
        /// Confine relative balls to this X-radius.
        #[arg(long)]
        x_confine: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Bounded conjugator search.
    Csp {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Exhaustive minimum-length conjugator search.
    Oracle {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Four-point hyperbolicity constant of the coned-off graph.
    Delta,
    /// Neighbourhood radius of k-similar relative geodesics.
    Epsilon {
        #[arg(long, default_value_t = 0)]
        k: u64,
        /// Measure every k in 0..=K and fit the quadratic.
        #[arg(long = "k-max")]
        k_max: Option<u64>,
    },
    /// Bounded coset penetration constant.
    Bcp,
    /// Conjugator length bounds at a given L.
    Bounds {
        #[arg(long = "L")]
        l: u64,
    },
    /// Planted-conjugator experiment.
    Experiment {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 6)]
        lmax: usize,
        /// Planted conjugator length bound; defaults to cap / 2.
        #[arg(long = "x-max")]
        x_max: Option<usize>,
        /// CSV report destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Fill the millis column.
        #[arg(long)]
        timing: bool,
    },
    /// Build the conjugacy diagram for a minimal conjugator and run the lemma checks.
    CheckLemmas {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Use this conjugator instead of the oracle minimum.
        #[arg(long)]
        x: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = if cli.json { OutputMode::Json } else { OutputMode::Text };
    let fail = |e: relhyp::Error| {
        let code = if e.is_config() { 2 } else { 1 };
        if output == OutputMode::Json {
            println!("{}", serde_json::json!({ "error": e.kind(), "message": e.to_string() }));
        } else {
            eprintln!("error: {e}");
        }
        ExitCode::from(code)
    };
    let group = match load_group(&cli.group) {
        Ok(g) => g,
        Err(e) => return fail(e),
    };
    let cfg = RunConfig {
        group,
        constants_path: cli.constants.clone(),
        caps: Caps {
            ball_radius: cli.radius.unwrap_or(4.min(cli.global_cap)),
            exp_cap: cli.exp_cap,
            count_cap: cli.count_cap,
            search_cap: cli.cap.unwrap_or(6.min(cli.global_cap)),
            global: cli.global_cap,
        },
        seed: cli.seed,
        workers: cli.workers,
        output,
    };
    if let Err(e) = cfg.validate() {
        return fail(e);
    }
    match commands::dispatch(&cfg, &cli.command) {
        Ok(report) => {
            report.emit(cfg.output);
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}
