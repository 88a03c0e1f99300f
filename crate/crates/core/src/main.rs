use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use stdg::bench::{run_study, StudyConfig, TxDefinition};
use stdg::timestepping::SchemeConfig;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SchemeArg {
    Be,
    CnOd,
    CnDo,
    Dg0,
    Dg1,
}

impl SchemeArg {
    fn tag(self) -> &'static str {
        match self {
            Self::Be => "be",
            Self::CnOd => "cn-od",
            Self::CnDo => "cn-do",
            Self::Dg0 => "dg0",
            Self::Dg1 => "dg1",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RealizationArg {
    Nodal,
    Galerkin,
}

/// Convergence study on a manufactured optimal control problem.
#[derive(Debug, Parser)]
#[command(name = "stdg", version)]
struct Cli {
    /// Benchmark problem.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    example: u8,
    #[arg(long, value_enum, default_value_t = SchemeArg::Dg0)]
    scheme: SchemeArg,
    /// Comma-separated numbers of time intervals (k = 1/level, h = k).
    #[arg(long, default_value = "5,10,20,40", value_delimiter = ',')]
    levels: Vec<usize>,
    /// Interior penalty parameter.
    #[arg(long, default_value_t = 6.0)]
    sigma: f64,
    /// Override the regularization weight.
    #[arg(long)]
    alpha: Option<f64>,
    /// Stopping tolerance on the control update.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, default_value_t = 50)]
    max_iter: usize,
    /// Inner variable of Example 2: char (x1+x2-t), half ((x1+x2)/2) or zero.
    #[arg(long = "tx-def", default_value = "char")]
    tx_def: TxDefinition,
    /// Right-hand sides of the dG schemes.
    #[arg(long, value_enum, default_value_t = RealizationArg::Nodal)]
    realization: RealizationArg,
    /// Turn off the halved endpoint weights in the θ-DO control update.
    #[arg(long)]
    no_endpoint_weights: bool,
    /// Output directory for table.csv, table.md, PDAS logs and snapshots.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut scheme = match SchemeConfig::<f64>::from_tag(cli.scheme.tag()) {
        Ok(s) => s.with_endpoint_weights(!cli.no_endpoint_weights),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if matches!(cli.realization, RealizationArg::Galerkin) {
        scheme = scheme.galerkin();
    }
    let mut config = StudyConfig::new(cli.example, scheme);
    config.levels = cli.levels;
    config.sigma = cli.sigma;
    config.alpha = cli.alpha;
    config.tol = cli.tol;
    config.max_iter = cli.max_iter;
    config.tx = cli.tx_def;
    config.out = cli.out;
    match run_study(&config) {
        Ok(table) => {
            print!("{}", table.to_markdown());
            for row in &table.rows {
                if let Some(msg) = &row.failure {
                    eprintln!("level {} failed: {msg}", row.steps);
                }
            }
            if table.failed() {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
