use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Subcommand};

use super::{
    default_methods, log_log_slope, run_benchmark, run_simulation, scenarios, Family, DEFAULT_REPS, SIZES,
};
use crate::error::{Error, Result};
use crate::estimators::{MethodId, MethodSpec};

#[derive(Debug, Subcommand)]
pub enum SimlabCommand {
    /// Run the method comparison and write one row per scenario and method.
    Run(RunArgs),
    /// Time the ROC-only and full paths.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_delimiter = ',', default_value = "normal,lognormal,gamma")]
    pub families: Vec<String>,
    /// Separation levels 1 to 4 (nominal Youden 0.2 to 0.8).
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
    pub levels: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_REPS)]
    pub reps: usize,
    /// Method ids; all seven when absent.
    #[arg(long, value_delimiter = ',')]
    pub methods: Vec<String>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000,100000,1000000")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

pub fn run(command: SimlabCommand, stdout: &mut dyn Write) -> Result<()> {
    match command {
        SimlabCommand::Run(a) => {
            let families = a.families.iter().map(|f| f.parse()).collect::<Result<Vec<Family>>>()?;
            let sizes = if a.sizes.is_empty() { SIZES.to_vec() } else { a.sizes.clone() };
            let methods = if a.methods.is_empty() {
                default_methods()
            } else {
                a.methods
                    .iter()
                    .map(|m| m.parse::<MethodId>().map(MethodSpec::new))
                    .collect::<Result<Vec<_>>>()?
            };
            let sc = scenarios(&families, &a.levels, &sizes)?;
            let result = run_simulation(&sc, &methods, a.reps, a.seed)?;
            match &a.out {
                Some(p) => {
                    let f = File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                    result.write_csv(f)
                }
                None => result.write_csv(stdout),
            }
        }
        SimlabCommand::Bench(a) => {
            let rows = run_benchmark(&a.sizes, a.reps, a.seed)?;
            writeln!(stdout, "n,roc_only_seconds,full_seconds")?;
            for r in &rows {
                writeln!(stdout, "{},{:.6e},{:.6e}", r.n, r.roc_only, r.full)?;
            }
            if rows.len() >= 2 {
                let roc: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.roc_only)).collect();
                let full: Vec<(usize, f64)> = rows.iter().map(|r| (r.n, r.full)).collect();
                writeln!(stdout, "# log-log slope: roc_only {:.3}, full {:.3}", log_log_slope(&roc), log_log_slope(&full))?;
            }
            Ok(())
        }
    }
}
