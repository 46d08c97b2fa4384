use serde::{Deserialize, Serialize};

use super::LedgerError;
use crate::money::{checked_total, Money};

/// Per-agent balances, the whole microstate of a run apart from the bank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgentLedger {
    balances: Vec<Money>,
    /// Money added from outside the agent/bank system.
    total_injected: Money,
}

/// `n` agents holding `initial_balance` each.
pub fn init_population(n: usize, initial_balance: Money) -> Result<AgentLedger, LedgerError> {
    if initial_balance.is_negative() {
        return Err(LedgerError::NegativeInitialBalance(initial_balance));
    }
    AgentLedger::from_balances(vec![initial_balance; n])
}

impl AgentLedger {
    pub fn from_balances(balances: Vec<Money>) -> Result<Self, LedgerError> {
        if balances.len() < 2 {
            return Err(LedgerError::InvalidPopulation(balances.len()));
        }
        Ok(AgentLedger {
            balances,
            total_injected: Money::ZERO,
        })
    }

    pub fn len(&self) -> usize {
        self.balances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balances.is_empty()
    }

    pub fn balances(&self) -> &[Money] {
        &self.balances
    }

    pub(crate) fn balances_mut(&mut self) -> &mut [Money] {
        &mut self.balances
    }

    pub fn balance(&self, agent: usize) -> Result<Money, LedgerError> {
        self.balances
            .get(agent)
            .copied()
            .ok_or(LedgerError::InvalidAgent {
                index: agent,
                n: self.balances.len(),
            })
    }

    /// `Σ m_i`, or `None` on overflow.
    pub fn total(&self) -> Option<Money> {
        checked_total(self.balances.iter().copied())
    }

    /// Total debt `Σ max(-m_i, 0)`.
    pub fn total_debt(&self) -> Option<Money> {
        checked_total(self.balances.iter().map(|m| m.debt()))
    }

    pub fn total_injected(&self) -> Money {
        self.total_injected
    }

    /// Credits an agent with money from outside the system (a central-bank
    /// injection). This is the only way agent money appears without a
    /// matching entry in the bank's books.
    pub fn inject(&mut self, agent: usize, amount: Money) -> Result<(), LedgerError> {
        let n = self.balances.len();
        let slot = self
            .balances
            .get_mut(agent)
            .ok_or(LedgerError::InvalidAgent { index: agent, n })?;
        let injected = self
            .total_injected
            .checked_add(amount)
            .ok_or(LedgerError::Overflow)?;
        *slot = slot.checked_add(amount).ok_or(LedgerError::Overflow)?;
        self.total_injected = injected;
        Ok(())
    }
}
