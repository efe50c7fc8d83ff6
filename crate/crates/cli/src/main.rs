use clap::{Args, Parser, Subcommand};
use gcnlab_cli::{
    centrality_csv, load_and_validate, parse_rates, resolve_seeds, rows_to_csv, run_fixed,
    run_sweep, spectrum_csv, CliError, PipelineOptions,
};
use gcnlab_core::{
    generate_sbm, save_dataset, CentralityOptions, Policy, SbmConfig, SelectOptions, TrainConfig,
};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "gcnlab",
    version,
    about = "Labeling-budget experiments for a transductive two-layer GCN"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CentralityFlags {
    /// Truncate the per-node BFS at this radius
    #[arg(long)]
    max_radius: Option<u32>,
    /// Normalize centrality by component size instead of the global node count
    #[arg(long)]
    component_local_n: bool,
}

impl CentralityFlags {
    fn options(&self) -> CentralityOptions {
        CentralityOptions {
            component_local_n: self.component_local_n,
            max_radius: self.max_radius,
        }
    }
}

#[derive(Args, Clone)]
struct TrainFlags {
    /// Hidden layer width
    #[arg(long, default_value_t = 16)]
    hidden: usize,
    /// Adam learning rate
    #[arg(long, default_value_t = 0.01)]
    lr: f64,
    /// Dropout probability on inputs and hidden activations
    #[arg(long, default_value_t = 0.5)]
    dropout: f64,
    /// L2 penalty on the first layer
    #[arg(long, default_value_t = 5e-4)]
    weight_decay: f64,
    /// Epoch limit
    #[arg(long, default_value_t = 200)]
    max_epochs: usize,
    /// Early-stopping patience in epochs
    #[arg(long, default_value_t = 10)]
    patience: usize,
    /// Validation-set size (default: min(500, nodes/10))
    #[arg(long)]
    val_size: Option<usize>,
    /// Apply per-class quotas to mc/lc/ecm selection as well
    #[arg(long)]
    stratify: bool,
}

impl TrainFlags {
    fn pipeline_options(&self, centrality: &CentralityFlags) -> PipelineOptions {
        PipelineOptions {
            select: SelectOptions {
                stratify: self.stratify,
            },
            centrality: centrality.options(),
            train: TrainConfig {
                max_epochs: self.max_epochs,
                patience: self.patience,
                lr: self.lr,
                dropout: self.dropout,
                weight_decay: self.weight_decay,
                hidden_dim: self.hidden,
                seed: 0,
            },
            val_size: self.val_size,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Normalized-Laplacian eigenvalue statistics of a dataset
    Spectrum {
        /// Dataset directory (nodes.tsv + edges.tsv)
        #[arg(long)]
        data: PathBuf,
        /// Output CSV path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Lift the dense-solver node cap (large graphs take minutes and
        /// gigabytes)
        #[arg(long)]
        allow_large: bool,
    },
    /// Per-node local reaching centrality scores
    Centrality {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        centrality: CentralityFlags,
    },
    /// Train under one policy at one labeling rate across several seeds
    Fixed {
        #[arg(long)]
        data: PathBuf,
        /// Selection policy: df, mc, lc or ecm
        #[arg(long)]
        policy: Policy,
        /// Labeling rate in (0, 1]
        #[arg(long)]
        rate: f64,
        /// Number of seeds (expands to 1..=N)
        #[arg(long, default_value_t = 5)]
        seeds: usize,
        /// Explicit comma-separated seed list (overrides --seeds)
        #[arg(long)]
        seed_list: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        centrality: CentralityFlags,
        #[command(flatten)]
        train: TrainFlags,
    },
    /// Full (policy x rate x seed) grid with CSV and SVG output
    Sweep {
        #[arg(long)]
        data: PathBuf,
        /// Selection policy, repeatable (default: all four)
        #[arg(long = "policy")]
        policies: Vec<Policy>,
        /// Rate range A:B:STEP
        #[arg(long, default_value = "0.05:0.4:0.05")]
        rates: String,
        #[arg(long, default_value_t = 5)]
        seeds: usize,
        #[arg(long)]
        seed_list: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG chart path
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Worker threads (default: available parallelism)
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        centrality: CentralityFlags,
        #[command(flatten)]
        train: TrainFlags,
    },
    /// Generate a stochastic-block-model dataset directory
    Synth {
        /// Directory to create
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 200)]
        nodes: usize,
        #[arg(long, default_value_t = 2)]
        classes: usize,
        #[arg(long, default_value_t = 0.2)]
        p_in: f64,
        #[arg(long, default_value_t = 0.01)]
        p_out: f64,
        #[arg(long, default_value_t = 16)]
        features: usize,
        /// Scale of the class template added to unit feature noise
        #[arg(long, default_value_t = 1.0)]
        signal: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn write_output(path: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match path {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    fs::create_dir_all(parent)?;
                }
            }
            fs::write(path, content)?;
            Ok(())
        }
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(CliError::from)?;
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Spectrum {
            data,
            out,
            allow_large,
        } => {
            let bundle = load_and_validate(&data)?;
            eprintln!("{}", bundle.summary());
            let csv = spectrum_csv(&bundle, allow_large)?;
            write_output(out.as_ref(), &csv)
        }
        Command::Centrality {
            data,
            out,
            centrality,
        } => {
            let bundle = load_and_validate(&data)?;
            eprintln!("{}", bundle.summary());
            let csv = centrality_csv(&bundle, &centrality.options())?;
            write_output(out.as_ref(), &csv)
        }
        Command::Fixed {
            data,
            policy,
            rate,
            seeds,
            seed_list,
            out,
            centrality,
            train,
        } => {
            if !(rate > 0.0 && rate <= 1.0) {
                return Err(CliError::Usage(format!("--rate {rate} outside (0, 1]")));
            }
            let bundle = load_and_validate(&data)?;
            eprintln!("{}", bundle.summary());
            let seeds = resolve_seeds(seeds, seed_list.as_deref())?;
            let opts = train.pipeline_options(&centrality);
            let rows = run_fixed(&bundle, policy, rate, &seeds, &opts)?;
            write_output(out.as_ref(), &rows_to_csv(&rows))
        }
        Command::Sweep {
            data,
            policies,
            rates,
            seeds,
            seed_list,
            out,
            svg,
            jobs,
            centrality,
            train,
        } => {
            let bundle = load_and_validate(&data)?;
            eprintln!("{}", bundle.summary());
            let policies = if policies.is_empty() {
                Policy::ALL.to_vec()
            } else {
                policies
            };
            let rates = parse_rates(&rates)?;
            let seeds = resolve_seeds(seeds, seed_list.as_deref())?;
            let jobs =
                jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
            let opts = train.pipeline_options(&centrality);
            let (rows, chart) = run_sweep(&bundle, &policies, &rates, &seeds, &opts, jobs)?;
            write_output(out.as_ref(), &rows_to_csv(&rows))?;
            if let Some(svg_path) = svg {
                write_output(Some(&svg_path), &chart)?;
            }
            Ok(())
        }
        Command::Synth {
            out,
            nodes,
            classes,
            p_in,
            p_out,
            features,
            signal,
            seed,
        } => {
            let bundle = generate_sbm(&SbmConfig {
                num_nodes: nodes,
                num_classes: classes,
                p_in,
                p_out,
                feature_dim: features,
                feature_signal: signal,
                seed,
            })?;
            save_dataset(&bundle, &out)?;
            eprintln!("{}", bundle.summary());
            eprintln!("wrote {}", out.display());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
