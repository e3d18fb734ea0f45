//! `sobext` command-line front end.
//!
//! Exit codes: 0 success, 2 violated invariant, 3 bad config or input.

mod commands;
mod fields;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sobext::io::{ErrorRecord, RunConfig};
use sobext::{Error, Result};

use commands::Outcome;

#[derive(Parser, Debug)]
#[command(
    name = "sobext",
    version,
    about = "Whitney covers, extensions, traces and threshold examples"
)]
struct Cli {
    /// TOML run config; its settings override the flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Omit timings so repeated runs give identical JSON.
    #[arg(long, global = true)]
    deterministic: bool,
    /// Output directory for JSON reports and artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Domain: square, lshape, koch:L, strip, cusp:a, empty.
    #[arg(long)]
    domain: Option<String>,
    /// Test field: const:c, linear, quad, sinsin, expcos, bump, cusp-power:b.
    #[arg(long)]
    field: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// Integrability exponents, comma separated.
    #[arg(long, value_delimiter = ',')]
    p: Vec<f64>,
    /// Cells per unit length, comma separated and increasing.
    #[arg(long, value_delimiter = ',')]
    grids: Vec<usize>,
    #[arg(long)]
    jmax: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Whitney decomposition with exact certification.
    Whitney {
        #[command(flatten)]
        common: Common,
        /// Root cube as x0,y0,side.
        #[arg(long, value_delimiter = ',', num_args = 3)]
        root: Vec<f64>,
    },
    /// Extension norm ratios over a grid ladder.
    Extend {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
        /// Reflection search radius in units of the cube side.
        #[arg(long)]
        search_factor: Option<f64>,
    },
    /// Jets on an Ahlfors cloud from ball averages.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Cloud: koch:L or segment:points.
        #[arg(long)]
        cloud: Option<String>,
        /// direct or jw.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Besov norm of a field's jet on a cloud.
    Besov {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        cloud: Option<String>,
        #[arg(long)]
        s: Option<f64>,
    },
    /// Glue an inner and an outer field across an interface.
    Glue {
        #[command(flatten)]
        common: Common,
        /// Matched profile; only `smooth` is built in.
        #[arg(long, num_args = 0..=1, default_missing_value = "smooth", conflicts_with_all = ["jump", "kink"])]
        matched: Option<String>,
        #[arg(long, conflicts_with = "kink")]
        jump: bool,
        #[arg(long)]
        kink: bool,
    },
    /// Manufactured solves: dirichlet, mixed, neumann or incompatible.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        problem: Option<String>,
        #[arg(long)]
        tensor: Option<String>,
    },
    /// Threshold examples.
    Counterexample {
        #[command(subcommand)]
        case: Case,
    },
}

#[derive(Subcommand, Debug)]
enum Case {
    Meyers {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        mu: Option<f64>,
    },
    Degiorgi {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        gamma: Option<f64>,
    },
    Mazya {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
    },
}

fn base(c: Common) -> RunConfig {
    RunConfig {
        domain: c.domain,
        field: c.field,
        k: c.k,
        p: c.p,
        grids: c.grids,
        jmax: c.jmax,
        ..RunConfig::default()
    }
}

/// Flags as a config, plus the command name and the counterexample case.
fn flags_config(cmd: Command) -> (String, Option<String>, RunConfig) {
    match cmd {
        Command::Whitney { common, root } => {
            let root = (root.len() == 3).then(|| [root[0], root[1], root[2]]);
            ("whitney".into(), None, RunConfig { root, ..base(common) })
        }
        Command::Extend {
            common,
            eps,
            delta,
            search_factor,
        } => (
            "extend".into(),
            None,
            RunConfig {
                eps,
                delta,
                param: search_factor,
                ..base(common)
            },
        ),
        Command::Trace { common, cloud, mode } => (
            "trace".into(),
            None,
            RunConfig {
                cloud,
                mode,
                ..base(common)
            },
        ),
        Command::Besov { common, cloud, s } => (
            "besov".into(),
            None,
            RunConfig {
                cloud,
                s,
                ..base(common)
            },
        ),
        Command::Glue {
            common,
            matched,
            jump,
            kink,
        } => {
            let mode = if let Some(m) = matched {
                Some(m)
            } else if jump {
                Some("jump".to_string())
            } else if kink {
                Some("kink".to_string())
            } else {
                None
            };
            ("glue".into(), None, RunConfig { mode, ..base(common) })
        }
        Command::Solve {
            common,
            problem,
            tensor,
        } => (
            "solve".into(),
            None,
            RunConfig {
                mode: problem,
                tensor,
                ..base(common)
            },
        ),
        Command::Counterexample { case } => {
            let (name, cfg) = match case {
                Case::Meyers { common, mu } => (
                    "meyers",
                    RunConfig {
                        param: mu,
                        ..base(common)
                    },
                ),
                Case::Degiorgi { common, gamma } => (
                    "degiorgi",
                    RunConfig {
                        param: gamma,
                        ..base(common)
                    },
                ),
                Case::Mazya { common, eps, m } => (
                    "mazya",
                    RunConfig {
                        param: eps,
                        m,
                        ..base(common)
                    },
                ),
            };
            ("counterexample".into(), Some(name.into()), cfg)
        }
    }
}

fn run(name: &str, case: Option<&str>, cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    std::fs::create_dir_all(&out)?;
    match name {
        "whitney" => commands::whitney(cfg, &out),
        "extend" => commands::extend(cfg, &out),
        "trace" => commands::trace(cfg, &out),
        "besov" => commands::besov(cfg, &out),
        "glue" => commands::glue_cmd(cfg, &out),
        "solve" => commands::solve(cfg, &out),
        "counterexample" => commands::counterexample(case.unwrap_or("meyers"), cfg, &out),
        _ => Err(Error::Config(format!("unknown command '{name}'"))),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let (name, case, flags) = flags_config(cli.command);
    let flags = RunConfig {
        command: Some(name.clone()),
        out: Some(cli.out),
        deterministic: cli.deterministic,
        seed: cli.seed,
        ..flags
    };
    let cfg = match cli.config.as_deref().map(RunConfig::load) {
        None => Ok(flags),
        Some(Ok(file)) => Ok(flags.overlay(file)),
        Some(Err(e)) => Err(e),
    };
    let start = Instant::now();
    let result = cfg.and_then(|cfg| {
        run(&name, case.as_deref(), &cfg).and_then(|mut o| {
            if !cfg.deterministic {
                o.report.elapsed_seconds = Some(start.elapsed().as_secs_f64());
            }
            let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
            std::fs::write(out.join(format!("{name}.json")), o.report.to_json())?;
            Ok(o)
        })
    });
    match result {
        Ok(o) => {
            print!("{}", o.report.to_json());
            if o.strict && !o.report.all_pass() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            let rec = ErrorRecord::new(name, &e);
            println!("{}", serde_json::to_string_pretty(&rec).expect("records serialize"));
            eprintln!("error: {e}");
            ExitCode::from(if e.is_invariant_violation() { 2 } else { 3 })
        }
    }
}
