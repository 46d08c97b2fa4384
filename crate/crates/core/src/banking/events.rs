use serde::{Deserialize, Serialize};

use super::{BankState, BankingError};
use crate::exchange::AgentLedger;
use crate::money::Money;

/// Per-cadence simple interest on deposits and loans.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterestSpec {
    pub deposit_rate: f64,
    pub loan_rate: f64,
    /// Sweeps (N transactions each) between accruals.
    pub cadence: u64,
}

impl InterestSpec {
    pub const DEFAULT_DEPOSIT_RATE: f64 = 0.005;
    pub const DEFAULT_LOAN_RATE: f64 = 0.01;

    pub fn validate(&self) -> Result<(), BankingError> {
        for (name, rate) in [
            ("deposit_rate", self.deposit_rate),
            ("loan_rate", self.loan_rate),
        ] {
            if !(0.0..1.0).contains(&rate) {
                return Err(BankingError::InvalidInterest(format!(
                    "{name} = {rate}, expected 0 <= rate < 1"
                )));
            }
        }
        if self.cadence == 0 {
            return Err(BankingError::InvalidInterest(
                "cadence must be >= 1 sweep".into(),
            ));
        }
        Ok(())
    }
}

impl Default for InterestSpec {
    fn default() -> Self {
        InterestSpec {
            deposit_rate: Self::DEFAULT_DEPOSIT_RATE,
            loan_rate: Self::DEFAULT_LOAN_RATE,
            cadence: 1,
        }
    }
}

/// Debts deeper than `threshold` are written off.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BankruptcySpec {
    pub threshold: Money,
    pub cadence: u64,
}

impl BankruptcySpec {
    pub fn validate(&self) -> Result<(), BankingError> {
        if !self.threshold.is_positive() {
            return Err(BankingError::InvalidBankruptcy(format!(
                "threshold {} must be positive",
                self.threshold
            )));
        }
        if self.cadence == 0 {
            return Err(BankingError::InvalidBankruptcy(
                "cadence must be >= 1 sweep".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    Interest,
    Bankruptcy,
}

/// One agent's balance change within an event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventEntry {
    pub agent: usize,
    pub change: Money,
}

/// Everything an interest or bankruptcy event did to the books.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventLog {
    pub kind: EventKind,
    pub entries: Vec<EventEntry>,
    /// Net change to `Σ m_i`.
    pub agent_delta: Money,
    pub equity_delta: Money,
    pub loans_delta: Money,
}

impl EventLog {
    fn empty(kind: EventKind) -> Self {
        EventLog {
            kind,
            entries: Vec::new(),
            agent_delta: Money::ZERO,
            equity_delta: Money::ZERO,
            loans_delta: Money::ZERO,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn rounded_interest(rate: f64, amount: Money) -> Result<Money, BankingError> {
    Money::round_cents(rate * amount.as_f64()).ok_or(BankingError::Overflow("interest"))
}

/// Credits deposit interest and charges loan interest, settling both
/// against bank equity.
///
/// All new balances are computed before any is written, so an overflow
/// leaves the ledger and bank untouched.
pub fn accrue_interest(
    ledger: &mut AgentLedger,
    bank: &mut BankState,
    spec: &InterestSpec,
) -> Result<EventLog, BankingError> {
    spec.validate()?;
    let mut log = EventLog::empty(EventKind::Interest);
    let mut paid: i128 = 0;
    let mut collected: i128 = 0;
    for (agent, &m) in ledger.balances().iter().enumerate() {
        let change = if m.is_positive() {
            let x = rounded_interest(spec.deposit_rate, m)?;
            paid += x.cents() as i128;
            x
        } else if m.is_negative() {
            let x = rounded_interest(spec.loan_rate, m.debt())?;
            collected += x.cents() as i128;
            -x
        } else {
            Money::ZERO
        };
        if change != Money::ZERO {
            m.checked_add(change)
                .ok_or(BankingError::Overflow("interest"))?;
            log.entries.push(EventEntry { agent, change });
        }
    }
    let to_money = |v: i128| {
        i64::try_from(v)
            .map(Money::from_cents)
            .map_err(|_| BankingError::Overflow("interest"))
    };
    log.agent_delta = to_money(paid - collected)?;
    log.equity_delta = to_money(collected - paid)?;
    log.loans_delta = to_money(collected)?;
    let equity = bank
        .equity
        .checked_add(log.equity_delta)
        .ok_or(BankingError::Overflow("interest"))?;
    let loans = bank
        .total_loans
        .checked_add(log.loans_delta)
        .ok_or(BankingError::Overflow("interest"))?;

    let balances = ledger.balances_mut();
    for e in &log.entries {
        balances[e.agent] = Money::from_cents(balances[e.agent].cents() + e.change.cents());
    }
    bank.equity = equity;
    bank.total_loans = loans;
    Ok(log)
}

/// Resets every balance below `-threshold` to zero and writes the erased
/// debt off the loan book and the bank's equity.
pub fn trigger_bankruptcy(
    ledger: &mut AgentLedger,
    bank: &mut BankState,
    spec: &BankruptcySpec,
) -> Result<EventLog, BankingError> {
    spec.validate()?;
    let mut log = EventLog::empty(EventKind::Bankruptcy);
    let floor = -spec.threshold;
    let mut erased: i128 = 0;
    for (agent, &m) in ledger.balances().iter().enumerate() {
        if m < floor {
            erased += m.debt().cents() as i128;
            log.entries.push(EventEntry {
                agent,
                change: m.debt(),
            });
        }
    }
    if log.is_empty() {
        return Ok(log);
    }
    let erased = i64::try_from(erased).map_err(|_| BankingError::Overflow("bankruptcy"))?;
    let erased = Money::from_cents(erased);
    log.agent_delta = erased;
    log.equity_delta = -erased;
    log.loans_delta = -erased;
    let equity = bank
        .equity
        .checked_sub(erased)
        .ok_or(BankingError::Overflow("bankruptcy"))?;
    let loans = bank
        .total_loans
        .checked_sub(erased)
        .ok_or(BankingError::Overflow("bankruptcy"))?;

    let balances = ledger.balances_mut();
    for e in &log.entries {
        balances[e.agent] = Money::ZERO;
    }
    bank.equity = equity;
    bank.total_loans = loans;
    Ok(log)
}
