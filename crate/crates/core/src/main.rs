use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fairstream::cli::{cmd_run, cmd_sweep, CliError, Mode, RunRequest, SweepParam};
use fairstream::harness::{Hyperparameters, Variant};

#[derive(Parser)]
#[command(name = "fairstream", version, about = "Fairness- and imbalance-aware online Naive Bayes evaluation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one variant prequentially and write a report.
    Run(RunArgs),
    /// Repeat a run over a list of values for one hyperparameter.
    Sweep {
        #[command(flatten)]
        run: RunArgs,
        /// lambda, alpha, eta, gamma, epsilon or window
        #[arg(long)]
        param: SweepParam,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Dataset manifest (TOML).
    #[arg(long)]
    data: PathBuf,
    /// mnb, damnb or dcamnb
    #[arg(long)]
    variant: Variant,
    #[arg(long, default_value_t = Hyperparameters::default().alpha)]
    alpha: f64,
    #[arg(long, default_value_t = Hyperparameters::default().epsilon)]
    epsilon: f64,
    #[arg(long, default_value_t = Hyperparameters::default().lambda)]
    lambda: f64,
    #[arg(long, default_value_t = Hyperparameters::default().gamma)]
    gamma: f64,
    #[arg(long, default_value_t = Hyperparameters::default().window)]
    window: usize,
    #[arg(long, default_value_t = Hyperparameters::default().eta)]
    eta: f64,
    #[arg(long, default_value_t = Hyperparameters::default().bucket_width)]
    bucket_width: f64,
    /// stream (file order) or shuffled
    #[arg(long, default_value = "shuffled")]
    mode: Mode,
    #[arg(long, default_value_t = 10)]
    shuffles: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report output path (JSON).
    #[arg(long)]
    report: PathBuf,
    /// Optional per-step trace output path (CSV).
    #[arg(long)]
    trace: Option<PathBuf>,
}

impl RunArgs {
    fn into_request(self) -> RunRequest {
        RunRequest {
            data: self.data,
            variant: self.variant,
            alpha: self.alpha,
            epsilon: self.epsilon,
            lambda: self.lambda,
            gamma: self.gamma,
            window: self.window,
            eta: self.eta,
            bucket_width: self.bucket_width,
            mode: self.mode,
            shuffles: self.shuffles,
            seed: self.seed,
            report: self.report,
            trace: self.trace,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result: Result<(), CliError> = match cli.command {
        Command::Run(args) => {
            let request = args.into_request();
            request.config().hyper.validate().map_err(|e| CliError::Usage(e.to_string())).and_then(|_| {
                let summary = cmd_run(&request)?;
                println!("{} {}", request.variant, summary);
                Ok(())
            })
        }
        Command::Sweep { run, param, values } => {
            let request = run.into_request();
            cmd_sweep(&request, param, &values).map(|summary| print!("{}", summary.table()))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
