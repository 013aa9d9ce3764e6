use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use dpsbm::certificates::{build_binary, build_general, verify_binary, verify_general};
use dpsbm::concentration::{check, default_constants};
use dpsbm::harness::{sweep, write_output, ExperimentConfig};
use dpsbm::privacy::{param_estimate_with, stbl, stbl_fast, EstimatorForm, FastConfig, ParamSource, PrivacyParams};
use dpsbm::sbm::generate;
use dpsbm::sdp::{recover, SolverOptions};
use dpsbm::spectral::tol;
use dpsbm::{Error, Graph, GroundTruth, SbmParams, Variant};

#[derive(Parser)]
#[command(name = "dpsbm", version, about = "Private exact community recovery in stochastic block models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph and its planted partition.
    Generate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge-list output; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON file for the planted partition.
        #[arg(long)]
        truth_out: Option<PathBuf>,
    },
    /// Solve the relaxation and round it.
    Recover {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
    },
    /// Run a stability mechanism.
    PrivateRecover {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        eps: f64,
        /// `delta = n^(-delta_exp)`.
        #[arg(long, default_value_t = 2.0)]
        delta_exp: f64,
        #[arg(long, default_value_t = 2.0)]
        c_delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = MechMode::Fast)]
        mode: MechMode,
        /// Estimate a and b from degrees instead of using --a and --b.
        #[arg(long)]
        estimate: bool,
        /// Use the 1/n form of the degree estimator.
        #[arg(long, requires = "estimate")]
        literal: bool,
        /// Time limit on the distance search, in milliseconds.
        #[arg(long)]
        budget_ms: Option<u64>,
    },
    /// Degree-based estimate of (a, b, rho).
    EstimateParams {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        literal: bool,
    },
    /// Check the concentration conditions of a graph around a partition.
    CheckConcentration {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 2.0)]
        c_delta: f64,
    },
    /// Build and verify the dual certificate of a partition.
    Certify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[command(flatten)]
        model: ModelArgs,
        /// Multiplier scale of the general certificate; defaults to the
        /// value implied by the default constants at --eps and --c-delta.
        #[arg(long)]
        tau_tilde: Option<f64>,
        #[arg(long, default_value_t = 2.0)]
        eps: f64,
        #[arg(long, default_value_t = 0.0)]
        c_delta: f64,
        #[arg(long, default_value_t = tol::CERTIFICATE)]
        tol: f64,
    },
    /// Run a JSON experiment config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's output path.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MechMode {
    Stbl,
    Fast,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long)]
    variant: Variant,
    #[arg(long)]
    a: f64,
    #[arg(long)]
    b: Option<f64>,
    /// Size fraction of the smaller community (binary models).
    #[arg(long, default_value_t = 0.5)]
    rho: f64,
    /// Comma-separated cluster fractions (general model).
    #[arg(long, value_delimiter = ',')]
    rhos: Vec<f64>,
    /// Label flip probability (censored model).
    #[arg(long)]
    xi: Option<f64>,
}

impl ModelArgs {
    fn params(&self, n: usize) -> Result<SbmParams, Error> {
        let b = || self.b.ok_or_else(|| Error::Config(format!("--b is required for {}", self.variant)));
        let p = match self.variant {
            Variant::Basbm => SbmParams::Basbm { n, a: self.a, b: b()?, rho: self.rho },
            Variant::Cbsbm => SbmParams::Cbsbm {
                n,
                a: self.a,
                rho: self.rho,
                xi: self.xi.ok_or_else(|| Error::Config("--xi is required for cbsbm".into()))?,
            },
            Variant::Gssbm => {
                if self.rhos.is_empty() {
                    return Err(Error::Config("--rhos is required for gssbm".into()));
                }
                SbmParams::Gssbm { n, a: self.a, b: b()?, rhos: self.rhos.clone() }
            }
        };
        p.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(p)
    }
}

/// Input problems exit with 1, failures while computing with 2.
enum Failure {
    Config(Error),
    Runtime(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) => Failure::Config(e),
            _ => Failure::Runtime(e),
        }
    }
}

fn config<T>(r: Result<T, Error>) -> Result<T, Failure> {
    r.map_err(Failure::Config)
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(Error::Config(format!("{}: {e}", path.display()))))?;
    config(Graph::from_edge_list(&text))
}

fn read_truth(path: &Path) -> Result<GroundTruth, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(Error::Config(format!("{}: {e}", path.display()))))?;
    config(serde_json::from_str(&text).map_err(Error::from))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    print_out(&format!("{text}\n"))
}

fn print_out(text: &str) -> Result<(), Failure> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::from(e).into()),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct Recovered<'a> {
    partition: &'a GroundTruth,
    status: String,
    iterations: usize,
    objective: f64,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Generate { model, n, seed, out, truth_out } => {
            let params = model.params(n)?;
            let (g, truth) = generate(&params, seed)?;
            match out {
                Some(p) => fs::write(p, g.to_edge_list()).map_err(Error::from)?,
                None => print_out(&g.to_edge_list())?,
            }
            if let Some(p) = truth_out {
                fs::write(p, serde_json::to_string(&truth).map_err(Error::from)?).map_err(Error::from)?;
            }
        }
        Command::Recover { graph, model } => {
            let g = read_graph(&graph)?;
            let params = model.params(g.n())?;
            let (truth, sol) = recover(&g, &params, &SolverOptions::default())?;
            print_json(&Recovered {
                partition: &truth,
                status: format!("{:?}", sol.status),
                iterations: sol.iterations,
                objective: sol.objective,
            })?;
        }
        Command::PrivateRecover { graph, model, eps, delta_exp, c_delta, seed, mode, estimate, literal, budget_ms } => {
            let g = read_graph(&graph)?;
            let params = model.params(g.n())?;
            let privacy = config(PrivacyParams::with_exponent(eps, g.n(), delta_exp))?;
            if c_delta <= 0.0 {
                return Err(Failure::Config(Error::Config("--c-delta must be positive".into())));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let budget = budget_ms.map(Duration::from_millis);
            let solver = SolverOptions::default();
            let outcome = match mode {
                MechMode::Stbl => {
                    let f = |h: &Graph| recover(h, &params, &solver).ok().map(|(t, _)| t);
                    stbl(&g, f, &privacy, &mut rng, budget)?
                }
                MechMode::Fast => {
                    let source = if estimate {
                        let form = if literal { EstimatorForm::Literal } else { EstimatorForm::ConditionalMean };
                        ParamSource::Estimate { form, fallback: true }
                    } else {
                        ParamSource::Known
                    };
                    let cfg = FastConfig { params, source, c_delta, solver, budget };
                    stbl_fast(&g, &cfg, &privacy, &mut rng)?
                }
            };
            print_json(&outcome)?;
        }
        Command::EstimateParams { graph, literal } => {
            let g = read_graph(&graph)?;
            let form = if literal { EstimatorForm::Literal } else { EstimatorForm::ConditionalMean };
            print_json(&param_estimate_with(&g, form)?)?;
        }
        Command::CheckConcentration { graph, truth, model, eps, c_delta } => {
            let g = read_graph(&graph)?;
            let truth = read_truth(&truth)?;
            let params = model.params(g.n())?;
            let c = default_constants(&params, eps, c_delta)?;
            print_json(&check(&g, &truth, &params, &c)?)?;
        }
        Command::Certify { graph, truth, model, tau_tilde, eps, c_delta, tol } => {
            let g = read_graph(&graph)?;
            let truth = read_truth(&truth)?;
            let params = model.params(g.n())?;
            match params {
                SbmParams::Gssbm { b, .. } => {
                    let t = match tau_tilde {
                        Some(t) => t,
                        None => default_constants(&params, eps, c_delta)?
                            .tau_tilde(b)
                            .ok_or_else(|| Error::Config("no tau_tilde for these constants".into()))?,
                    };
                    let cert = build_general(&g, &truth, &params, t)?;
                    print_json(&verify_general(&cert, &truth, tol)?)?;
                }
                _ => {
                    let cert = build_binary(&g, &truth, &params)?;
                    print_json(&verify_binary(&cert, &truth, tol)?)?;
                }
            }
        }
        Command::Sweep { config: path, output } => {
            let cfg = config(ExperimentConfig::load(&path))?;
            let out = sweep(&cfg)?;
            write_output(&out, output.as_deref().or(cfg.output.as_deref()))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
