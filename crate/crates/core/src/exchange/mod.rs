//! Agents and pairwise money transfers.

mod ledger;
mod pair;
mod rule;
mod transfer;

pub use ledger::{init_population, AgentLedger};
pub use pair::draw_pair;
pub use rule::{saving_exchange, ExchangeRule, Proposer, SavingLambda};
pub use transfer::{apply_transfer, TransferOutcome};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LedgerError {
    #[error("invalid population: need at least 2 agents, got {0}")]
    InvalidPopulation(usize),
    #[error("invalid initial balance {0}: must be non-negative")]
    NegativeInitialBalance(crate::Money),
    #[error("invalid agent index {index} for population of {n}")]
    InvalidAgent { index: usize, n: usize },
    #[error("transfer amount {0} is negative")]
    NegativeAmount(crate::Money),
    #[error("invalid exchange rule: {0}")]
    InvalidRule(String),
    #[error("money overflow")]
    Overflow,
}
