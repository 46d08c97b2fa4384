//! Random money-transfer simulations between agents, with debt, reserve
//! banking, interest and bankruptcy, plus Lorenz/Gini analytics for
//! per-capita energy tables.
//!
//! ```
//! use moneygas::{run, BoundaryPolicy, ExchangeRule, Money, ScenarioConfig};
//!
//! let config = ScenarioConfig::new(
//!     100,
//!     Money::from_dollars(1000),
//!     ExchangeRule::FixedAmount { delta: Money::from_dollars(1) },
//!     BoundaryPolicy::NoDebt,
//!     20_000,
//! );
//! let trace = run(config).unwrap();
//! let last = trace.final_snapshot();
//! assert_eq!(last.audit.agent_total, Money::from_dollars(100_000));
//! ```

pub mod banking;
pub mod energy;
pub mod exchange;
pub mod harness;
pub mod money;
pub mod rng;
pub mod scenario;
pub mod sim;
pub mod stats;

use std::path::PathBuf;

pub use banking::{BankState, BankingError, BoundaryPolicy, TemperatureSet};
pub use energy::{EnergyError, EnergyRecord};
pub use exchange::{AgentLedger, ExchangeRule, LedgerError, SavingLambda};
pub use harness::{analyze_energy, simulate, RunManifest};
pub use money::Money;
pub use scenario::{parse_scenario, parse_scenario_str, ConfigError, Overrides};
pub use sim::{run, ScenarioConfig, Simulation, SimulationTrace};
pub use stats::StatsError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Banking(#[from] BankingError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{}: {source}", path.display())]
    EnergyFile { path: PathBuf, source: EnergyError },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
}
