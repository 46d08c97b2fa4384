use serde::{Deserialize, Serialize};

use super::BankingError;
use crate::exchange::AgentLedger;
use crate::money::{checked_total, Money};

/// Lower boundary condition on agent balances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BoundaryPolicy {
    /// Balances never go below zero; equivalent to `DebtLimit { limit: 0 }`.
    NoDebt,
    /// Each agent may owe at most `limit`.
    DebtLimit {
        limit: Money,
    },
    /// Lending is capped globally at `M_b (1 - R) / R`.
    ReserveRatio {
        ratio: f64,
    },
    Unlimited,
    /// Zero-base credit; `floor` (a non-positive balance) bounds the debt
    /// of each agent when present.
    MutualCredit {
        floor: Option<Money>,
    },
}

impl BoundaryPolicy {
    pub fn validate(&self) -> Result<(), BankingError> {
        match *self {
            BoundaryPolicy::DebtLimit { limit } if limit.is_negative() => {
                Err(BankingError::InvalidDebtLimit(limit))
            }
            BoundaryPolicy::ReserveRatio { ratio } if !(ratio > 0.0 && ratio <= 1.0) => {
                Err(BankingError::InvalidRatio(ratio))
            }
            BoundaryPolicy::MutualCredit { floor: Some(f) } if f.is_positive() => {
                Err(BankingError::InvalidFloor(f))
            }
            _ => Ok(()),
        }
    }

    /// The lowest balance an agent can reach through transfers, if bounded.
    pub fn floor(&self) -> Option<Money> {
        match *self {
            BoundaryPolicy::NoDebt => Some(Money::ZERO),
            BoundaryPolicy::DebtLimit { limit } => Some(-limit),
            BoundaryPolicy::MutualCredit { floor } => floor,
            BoundaryPolicy::ReserveRatio { .. } | BoundaryPolicy::Unlimited => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BoundaryPolicy::NoDebt => "no-debt",
            BoundaryPolicy::DebtLimit { .. } => "debt-limit",
            BoundaryPolicy::ReserveRatio { .. } => "reserve-ratio",
            BoundaryPolicy::Unlimited => "unlimited",
            BoundaryPolicy::MutualCredit { .. } => "mutual-credit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockReason {
    InsufficientFunds,
    DebtCap,
    BankCap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Permit {
    Allow,
    Deny(BlockReason),
}

/// The bank's monetary aggregates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BankState {
    pub monetary_base: Money,
    /// Outstanding loans, `Σ max(-m_i, 0)`.
    pub total_loans: Money,
    pub equity: Money,
    pub reserve_ratio: Option<f64>,
    /// Global lending cap under a reserve requirement.
    pub loan_cap: Option<Money>,
}

impl BankState {
    /// Opens the bank's books against an initial ledger.
    pub fn open(policy: &BoundaryPolicy, ledger: &AgentLedger) -> Result<Self, BankingError> {
        policy.validate()?;
        let balances = ledger.balances();
        let monetary_base =
            checked_total(balances.iter().copied()).ok_or(BankingError::Overflow("open"))?;
        let total_loans = checked_total(balances.iter().map(|m| m.debt()))
            .ok_or(BankingError::Overflow("open"))?;
        let (reserve_ratio, loan_cap) = match *policy {
            BoundaryPolicy::ReserveRatio { ratio } => {
                let agg = money_aggregates(ratio, monetary_base)?;
                (Some(ratio), Some(agg.total_debt))
            }
            _ => (None, None),
        };
        Ok(BankState {
            monetary_base,
            total_loans,
            equity: Money::ZERO,
            reserve_ratio,
            loan_cap,
        })
    }

    /// Room left under the lending cap; `None` when lending is uncapped.
    pub fn lending_headroom(&self) -> Option<Money> {
        self.loan_cap
            .map(|cap| Money::from_cents(cap.cents().saturating_sub(self.total_loans.cents())))
    }
}

/// Decides whether the payer may pay `delta` under `policy`.
pub fn check_boundary(
    policy: &BoundaryPolicy,
    bank: &BankState,
    m_payer: Money,
    delta: Money,
) -> Permit {
    let m = m_payer.cents();
    let d = delta.cents();
    match *policy {
        BoundaryPolicy::NoDebt => {
            if m >= d {
                Permit::Allow
            } else {
                Permit::Deny(BlockReason::InsufficientFunds)
            }
        }
        BoundaryPolicy::DebtLimit { limit } => {
            // m - d >= -limit, rearranged to avoid overflow on the subtraction
            if (m as i128) - (d as i128) >= -(limit.cents() as i128) {
                Permit::Allow
            } else {
                Permit::Deny(BlockReason::DebtCap)
            }
        }
        BoundaryPolicy::ReserveRatio { .. } => {
            let shortfall = (d as i128 - m.max(0) as i128).max(0);
            if shortfall == 0 {
                return Permit::Allow;
            }
            let cap = bank.loan_cap.map_or(0, |c| c.cents()) as i128;
            if bank.total_loans.cents() as i128 + shortfall <= cap {
                Permit::Allow
            } else {
                Permit::Deny(BlockReason::BankCap)
            }
        }
        BoundaryPolicy::Unlimited | BoundaryPolicy::MutualCredit { floor: None } => Permit::Allow,
        BoundaryPolicy::MutualCredit { floor: Some(f) } => {
            if (m as i128) - (d as i128) >= f.cents() as i128 {
                Permit::Allow
            } else {
                Permit::Deny(BlockReason::DebtCap)
            }
        }
    }
}

/// Closed-form stationary temperatures, in cents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TemperatureSet {
    /// `P(m) ∝ exp(-(m - floor) / temperature)` on `[floor, ∞)`.
    Exponential {
        temperature: f64,
        floor: Money,
    },
    TwoSided {
        t_plus: f64,
        t_minus: f64,
    },
    /// No stationary distribution exists.
    NonStationary,
}

pub fn theoretical_temperatures(
    policy: &BoundaryPolicy,
    monetary_base: Money,
    n: usize,
) -> Result<TemperatureSet, BankingError> {
    if n == 0 {
        return Err(BankingError::EmptyPopulation);
    }
    policy.validate()?;
    let per_agent = monetary_base.as_f64() / n as f64;
    Ok(match *policy {
        BoundaryPolicy::NoDebt => TemperatureSet::Exponential {
            temperature: per_agent,
            floor: Money::ZERO,
        },
        BoundaryPolicy::DebtLimit { limit } => TemperatureSet::Exponential {
            temperature: limit.as_f64() + per_agent,
            floor: -limit,
        },
        BoundaryPolicy::ReserveRatio { ratio } => TemperatureSet::TwoSided {
            t_plus: per_agent / ratio,
            t_minus: per_agent * (1.0 - ratio) / ratio,
        },
        // A floored credit system is a debt-limit system with its own base.
        BoundaryPolicy::MutualCredit { floor: Some(f) } => TemperatureSet::Exponential {
            temperature: -f.as_f64() + per_agent,
            floor: f,
        },
        BoundaryPolicy::Unlimited | BoundaryPolicy::MutualCredit { floor: None } => {
            TemperatureSet::NonStationary
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoneyAggregates {
    pub multiplier: f64,
    /// Positive money `M = M_b / R`.
    pub money_supply: Money,
    /// Debt `D = M_b / R - M_b`.
    pub total_debt: Money,
}

/// Money multiplier and saturated aggregates for reserve ratio `ratio`.
///
/// `D` is rounded down to the cent, except that values within 1e-6 cent of
/// an integer snap to it so ratios like 0.8 give the exact `M_b / 4`.
pub fn money_aggregates(ratio: f64, monetary_base: Money) -> Result<MoneyAggregates, BankingError> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(BankingError::InvalidRatio(ratio));
    }
    let base = monetary_base.as_f64();
    let raw = base * (1.0 - ratio) / ratio;
    let snapped = raw.round();
    let debt = if (raw - snapped).abs() < 1e-6 {
        snapped
    } else {
        raw.floor()
    };
    let total_debt = Money::round_cents(debt).ok_or(BankingError::Overflow("money aggregates"))?;
    let money_supply = monetary_base
        .checked_add(total_debt)
        .ok_or(BankingError::Overflow("money aggregates"))?;
    Ok(MoneyAggregates {
        multiplier: 1.0 / ratio,
        money_supply,
        total_debt,
    })
}
