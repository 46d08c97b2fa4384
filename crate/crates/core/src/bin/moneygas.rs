use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use moneygas::{analyze_energy, parse_scenario, simulate, Overrides, TemperatureSet};

/// Random money-transfer simulations and energy-table analytics.
#[derive(Parser)]
#[command(name = "moneygas", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write frames, trace and manifest.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        transactions: Option<u64>,
    },
    /// Weighted Lorenz curves and Gini coefficients of energy tables.
    AnalyzeEnergy {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the theoretical temperatures of a scenario.
    Temperatures { scenario: PathBuf },
}

fn dollars(cents: f64) -> String {
    format!("${:.2}", cents / 100.0)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> Result<(), moneygas::Error> {
    match cli.command {
        Command::Simulate {
            scenario,
            out,
            seed,
            transactions,
        } => {
            let config = parse_scenario(&scenario, &Overrides { seed, transactions })?;
            let manifest = simulate(config, &out)?;
            let s = &manifest.final_summary;
            println!("transactions  {}", manifest.config.n_transactions);
            println!("applied       {}", manifest.applied);
            println!("blocked       {}", manifest.blocked);
            println!("mean          {}", dollars(s.moments.mean));
            if let Some(fit) = s.fit {
                println!("fit_T         {}", dollars(fit.temperature));
            }
            if let Some(ks) = s.ks {
                println!("ks            {ks:.4}");
            }
            println!("entropy       {:.4}", s.entropy);
            println!("stationary    {}", manifest.stationary);
            println!("conservation  {}", manifest.conservation_holds);
            println!("wrote         {}", out.join("manifest.json").display());
        }
        Command::AnalyzeEnergy { inputs, out } => {
            let summaries = analyze_energy(&inputs, &out)?;
            println!("year  world_mean_kw  gini    exp_distance");
            for s in summaries {
                println!(
                    "{:<5} {:<14.4} {:<7.4} {:.4}",
                    s.year, s.world_mean_kw, s.gini, s.exponential_distance
                );
            }
        }
        Command::Temperatures { scenario } => {
            let config = parse_scenario(&scenario, &Overrides::default())?;
            match config.theoretical_temperatures()? {
                TemperatureSet::Exponential { temperature, floor } => {
                    println!("T      {}", dollars(temperature));
                    println!("floor  {floor}");
                }
                TemperatureSet::TwoSided { t_plus, t_minus } => {
                    println!("T+  {}", dollars(t_plus));
                    println!("T-  {}", dollars(t_minus));
                }
                TemperatureSet::NonStationary => println!("no stationary distribution"),
            }
        }
    }
    Ok(())
}
