//! Debt regimes and bank bookkeeping.
//!
//! Agent balances are net positions: a negative balance is an outstanding
//! loan and a positive one is a deposit, so the loan book always equals the
//! total debt `D = Σ max(-m_i, 0)`. The bank's equity absorbs interest and
//! bankruptcy losses, which keeps `Σ m_i + equity` fixed through every
//! event that is not an explicit injection.

mod boundary;
mod events;

pub use boundary::{
    check_boundary, money_aggregates, theoretical_temperatures, BankState, BlockReason,
    BoundaryPolicy, MoneyAggregates, Permit, TemperatureSet,
};
pub use events::{
    accrue_interest, trigger_bankruptcy, BankruptcySpec, EventEntry, EventKind, EventLog,
    InterestSpec,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BankingError {
    #[error("invalid reserve ratio {0}: expected 0 < R <= 1")]
    InvalidRatio(f64),
    #[error("invalid debt limit {0}: must be non-negative")]
    InvalidDebtLimit(crate::Money),
    #[error("invalid mutual-credit floor {0}: must not be positive")]
    InvalidFloor(crate::Money),
    #[error("invalid interest spec: {0}")]
    InvalidInterest(String),
    #[error("invalid bankruptcy spec: {0}")]
    InvalidBankruptcy(String),
    #[error("population must have at least one agent")]
    EmptyPopulation,
    #[error("money overflow during {0}")]
    Overflow(&'static str),
}
