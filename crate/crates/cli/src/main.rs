//! Command line front end: model parsing, command dispatch, benchmark-table
//! reproduction, CSV/JSON emission.
//!
//! Exit codes: 0 success, 2 validation error, 3 numeric error.
//! `LEVQUE_THREADS` caps the worker pool used by the Monte Carlo commands.

mod run;
mod spec;

use clap::{Args, Parser, Subcommand};
use levque::{Error, ModelConfig, Result, SchemeKind};
use spec::{EpochSpec, McKind, OutputFormat, RunSpec};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "levque",
    about = "Transient workload of Levy-driven queues at exponential-sum epochs",
    version
)]
struct Cli {
    /// write the resolved run spec as JSON before executing
    #[arg(long, global = true, value_name = "PATH")]
    emit_spec: Option<PathBuf>,
    /// write the primary output here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ModelArgs {
    /// model shorthand (bm | gamma | cpexp) or path to a TOML model file
    #[arg(long, default_value = "bm")]
    model: String,
    /// parameter override key=value (repeatable); keys: d, sigma2, gamma,
    /// beta, rho, lambda, mu, c
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// spectral side: pos | neg (Brownian models accept both)
    #[arg(long)]
    side: Option<String>,
}

impl ModelArgs {
    fn resolve(&self) -> Result<ModelConfig> {
        let path = std::path::Path::new(&self.model);
        let mut cfg = if path.exists() {
            ModelConfig::from_toml(&std::fs::read_to_string(path)?)?
        } else {
            ModelConfig::shorthand(&self.model)?
        };
        if let Some(side) = &self.side {
            cfg.side = Some(side.clone());
        }
        for kv in &self.params {
            let (key, value) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got '{kv}'")))?;
            let value: f64 = value
                .parse()
                .map_err(|_| Error::Config(format!("'{value}' is not a number")))?;
            cfg.set(key, value)?;
        }
        // validate now so flag errors surface before any computation
        cfg.build()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct EpochArgs {
    /// explicit phase rates, comma separated (overrides --t/--n)
    #[arg(long, value_delimiter = ',')]
    rates: Vec<f64>,
    /// target deterministic time for the phase-sum approximation
    #[arg(long)]
    t: Option<f64>,
    /// number of exponential phases
    #[arg(long)]
    n: Option<u32>,
    /// rate perturbation layout: paper-literal | zero-sum
    #[arg(long, default_value = "paper-literal")]
    scheme: String,
    /// perturbation scale of the chosen scheme
    #[arg(long, default_value_t = 0.01)]
    epsilon: f64,
}

impl EpochArgs {
    fn resolve(&self) -> Result<EpochSpec> {
        if !self.rates.is_empty() {
            return Ok(EpochSpec::Rates {
                rates: self.rates.clone(),
            });
        }
        let (Some(t), Some(n)) = (self.t, self.n) else {
            return Err(Error::Config(
                "specify either --rates or both --t and --n".into(),
            ));
        };
        let scheme = match self.scheme.as_str() {
            "paper-literal" => SchemeKind::PaperLiteral,
            "zero-sum" => SchemeKind::ZeroSum,
            other => {
                return Err(Error::Config(format!(
                    "unknown scheme '{other}' (expected paper-literal or zero-sum)"
                )))
            }
        };
        Ok(EpochSpec::Scheme {
            t,
            n,
            scheme,
            epsilon: self.epsilon,
        })
    }
}

fn parse_format(s: &str) -> Result<OutputFormat> {
    match s {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(Error::Config(format!(
            "unknown format '{other}' (expected csv or json)"
        ))),
    }
}

#[derive(Subcommand)]
enum Command {
    /// Workload LST at the phase-sum epoch, one row per exponent
    Lst {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        epochs: EpochArgs,
        /// initial workload
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        /// transform exponents, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        alpha: Vec<f64>,
        #[arg(long, default_value = "csv")]
        format: String,
    },
    /// Workload density on a y grid (spectrally negative models)
    Density {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        epochs: EpochArgs,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        /// grid upper end (defaults to the slowest-tail cutoff)
        #[arg(long)]
        y_max: Option<f64>,
        #[arg(long, default_value_t = 400)]
        points: usize,
        #[arg(long, default_value = "csv")]
        format: String,
        /// JSON dump of the per-term coefficients instead of the grid
        #[arg(long)]
        dump_terms: bool,
    },
    /// Triple transform over initial workload and terminal exponent
    Triple {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        epochs: EpochArgs,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Mean workload over a time grid, one column per initial level
    MeanCurve {
        #[command(flatten)]
        model: ModelArgs,
        /// initial workloads, comma separated
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<f64>,
        #[arg(long, default_value_t = 0.1)]
        t_start: f64,
        #[arg(long, default_value_t = 12.0)]
        t_stop: f64,
        #[arg(long, default_value_t = 40)]
        t_points: usize,
        /// phase count of the approximation
        #[arg(long, default_value_t = 7)]
        n: u32,
        /// probe exponent for the mean extraction
        #[arg(long, default_value_t = 1e-4)]
        probe: f64,
    },
    /// Recompute a bundled benchmark table and report deviations
    Reproduce {
        /// table1 (Brownian) or table2 (gamma)
        table: String,
    },
    /// CSV dump of the scale functions W and Z on a grid
    Scale {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 5.0)]
        x_max: f64,
        #[arg(long, default_value_t = 512)]
        points: usize,
    },
    /// Monte Carlo estimate (LST value or density histogram)
    Mc {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        epochs: EpochArgs,
        /// lst | density
        #[arg(long, default_value = "lst")]
        kind: String,
        #[arg(long, default_value_t = 0.0)]
        x: f64,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        /// fixed deterministic horizon (alternative to the epoch flags)
        #[arg(long)]
        fixed_t: Option<f64>,
        #[arg(long, default_value_t = 5.0)]
        y_max: f64,
        #[arg(long, default_value_t = 40)]
        bins: usize,
        #[arg(long, default_value_t = 100_000)]
        paths: usize,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        #[arg(long, default_value_t = 0x5EED_CAFE)]
        seed: u64,
        /// plain Euler reflection instead of the exact stepping kernels
        #[arg(long)]
        euler: bool,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Re-run a command from an emitted JSON run spec
    FromSpec { path: PathBuf },
}

fn build_spec(command: &Command) -> Result<RunSpec> {
    Ok(match command {
        Command::Lst {
            model,
            epochs,
            x,
            alpha,
            format,
        } => RunSpec::Lst {
            model: model.resolve()?,
            x: *x,
            alphas: alpha.clone(),
            epochs: epochs.resolve()?,
            format: parse_format(format)?,
        },
        Command::Density {
            model,
            epochs,
            x,
            y_max,
            points,
            format,
            dump_terms,
        } => RunSpec::Density {
            model: model.resolve()?,
            x: *x,
            epochs: epochs.resolve()?,
            y_max: *y_max,
            points: *points,
            format: parse_format(format)?,
            dump_terms: *dump_terms,
        },
        Command::Triple {
            model,
            epochs,
            alpha,
            beta,
            format,
        } => RunSpec::Triple {
            model: model.resolve()?,
            alpha: *alpha,
            beta: *beta,
            epochs: epochs.resolve()?,
            format: parse_format(format)?,
        },
        Command::MeanCurve {
            model,
            x,
            t_start,
            t_stop,
            t_points,
            n,
            probe,
        } => RunSpec::MeanCurve {
            model: model.resolve()?,
            xs: x.clone(),
            t_start: *t_start,
            t_stop: *t_stop,
            t_points: *t_points,
            n: *n,
            probe: *probe,
        },
        Command::Reproduce { table } => RunSpec::Reproduce {
            table: table.clone(),
        },
        Command::Scale {
            model,
            q,
            x_max,
            points,
        } => RunSpec::Scale {
            model: model.resolve()?,
            q: *q,
            x_max: *x_max,
            points: *points,
        },
        Command::Mc {
            model,
            epochs,
            kind,
            x,
            alpha,
            fixed_t,
            y_max,
            bins,
            paths,
            step,
            seed,
            euler,
            format,
        } => {
            let kind = match kind.as_str() {
                "lst" => McKind::Lst,
                "density" => McKind::Density,
                other => {
                    return Err(Error::Config(format!(
                        "unknown mc kind '{other}' (expected lst or density)"
                    )))
                }
            };
            let epochs = if fixed_t.is_some() && epochs.rates.is_empty() && epochs.t.is_none() {
                None
            } else {
                Some(epochs.resolve()?)
            };
            RunSpec::Mc {
                model: model.resolve()?,
                kind,
                x: *x,
                alpha: *alpha,
                epochs,
                fixed_t: *fixed_t,
                y_max: *y_max,
                bins: *bins,
                paths: *paths,
                step: *step,
                seed: *seed,
                euler: *euler,
                format: parse_format(format)?,
            }
        }
        Command::FromSpec { path } => RunSpec::from_json(&std::fs::read_to_string(path)?)?,
    })
}

fn main() {
    if let Ok(threads) = std::env::var("LEVQUE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let code = match build_spec(&cli.command) {
        Ok(spec) => {
            if let Some(path) = &cli.emit_spec {
                if let Err(e) = std::fs::write(path, spec.to_json()) {
                    eprintln!("levque: {e}");
                    std::process::exit(2);
                }
            }
            match run::execute(&spec) {
                Ok(output) => {
                    let result = match &cli.out {
                        Some(path) => std::fs::write(path, output).map_err(Error::from),
                        None => {
                            print!("{output}");
                            Ok(())
                        }
                    };
                    match result {
                        Ok(()) => 0,
                        Err(e) => {
                            eprintln!("levque: {e}");
                            e.exit_code()
                        }
                    }
                }
                Err(e) => {
                    eprintln!("levque: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            eprintln!("levque: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
