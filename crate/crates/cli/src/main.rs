use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use egma_cli::{gradcheck, oracle, run, sweep, table1, CliError, ConfigError, RunConfig};

#[derive(Parser)]
#[command(name = "egma", version, about = "Most-probable transition paths by energy-climbing geometric minimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration file.
    Solve { config: PathBuf },
    /// Run a configuration once per value of one parameter.
    Sweep {
        config: PathBuf,
        /// beta, epsilon, n_segments or ds.
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        values: Vec<String>,
    },
    /// Maier-Stein energy convergence table.
    Table1 {
        #[arg(long, default_value = "table1")]
        out: PathBuf,
    },
    /// Evaluate a closed-form reference; the argument is JSON text or a file.
    Oracle { query: String },
    /// Check grad U against finite differences.
    Gradcheck {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

fn fail(e: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Solve { config } => match run::solve_file(&config) {
            Ok(rec) => {
                println!("{}", rec.to_json());
                ExitCode::from(rec.exit_code() as u8)
            }
            Err(e) => fail(e),
        },
        Command::Sweep { config, param, values } => {
            let values: Vec<String> = values.into_iter().filter(|v| !v.trim().is_empty()).collect();
            let loaded = RunConfig::load(&config);
            let result = loaded.map_err(CliError::from).and_then(|(c, base)| sweep::sweep(&c, &base, &param, &values));
            match result {
                Ok(out) => {
                    println!("value,status,final_energy,iterations");
                    for r in &out.rows {
                        let e = r.final_energy.map(|v| v.to_string()).unwrap_or_default();
                        let n = r.iterations.map(|v| v.to_string()).unwrap_or_default();
                        println!("{},{},{e},{n}", r.value, r.status);
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => fail(e),
            }
        }
        Command::Table1 { out } => match table1::compute().and_then(|t| t.write_csv(&out).map(|_| t)) {
            Ok(t) => {
                print!("{}", t.render());
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Oracle { query } => {
            let text = if query.trim_start().starts_with('{') {
                Ok(query)
            } else {
                std::fs::read_to_string(&query).map_err(|e| ConfigError::Io(query.into(), e.to_string()))
            };
            match text.and_then(|t| oracle::parse(&t)) {
                Ok(q) => match oracle::answer(&q) {
                    Ok(v) => {
                        println!("{}", serde_json::to_string_pretty(&v).expect("json values serialize"));
                        ExitCode::SUCCESS
                    }
                    Err(e) => fail(e),
                },
                Err(e) => fail(e),
            }
        }
        Command::Gradcheck { model, points, seed, epsilon } => {
            let variants = match gradcheck::variants(&model, epsilon) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let mut ok = true;
            for m in &variants {
                match gradcheck::check(m, points, seed) {
                    Ok(c) => {
                        println!("{}", serde_json::to_string(&c).expect("reports serialize"));
                        ok &= c.passed;
                    }
                    Err(e) => return fail(e),
                }
            }
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
    }
}
