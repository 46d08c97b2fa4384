use serde::{Deserialize, Serialize};

use super::{AgentLedger, LedgerError};
use crate::banking::{check_boundary, BankState, BlockReason, BoundaryPolicy, Permit};
use crate::money::Money;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferOutcome {
    pub applied: bool,
    pub payer: usize,
    pub payee: usize,
    pub delta: Money,
    pub block_reason: Option<BlockReason>,
}

/// Moves `delta` from payer to payee if the boundary policy allows it.
///
/// On success `Σ m_i` is unchanged and the loan book tracks the new total
/// debt. A blocked transfer leaves ledger and bank exactly as they were.
pub fn apply_transfer(
    ledger: &mut AgentLedger,
    bank: &mut BankState,
    policy: &BoundaryPolicy,
    payer: usize,
    payee: usize,
    delta: Money,
) -> Result<TransferOutcome, LedgerError> {
    let m_payer = ledger.balance(payer)?;
    let m_payee = ledger.balance(payee)?;
    if delta.is_negative() {
        return Err(LedgerError::NegativeAmount(delta));
    }
    if let Permit::Deny(reason) = check_boundary(policy, bank, m_payer, delta) {
        return Ok(TransferOutcome {
            applied: false,
            payer,
            payee,
            delta,
            block_reason: Some(reason),
        });
    }
    if payer == payee {
        return Ok(TransferOutcome {
            applied: true,
            payer,
            payee,
            delta,
            block_reason: None,
        });
    }
    let new_payer = m_payer.checked_sub(delta).ok_or(LedgerError::Overflow)?;
    let new_payee = m_payee.checked_add(delta).ok_or(LedgerError::Overflow)?;
    let loans = bank.total_loans.cents() as i128 + new_payer.debt().cents() as i128
        - m_payer.debt().cents() as i128
        + new_payee.debt().cents() as i128
        - m_payee.debt().cents() as i128;
    let loans = i64::try_from(loans).map_err(|_| LedgerError::Overflow)?;

    let balances = ledger.balances_mut();
    balances[payer] = new_payer;
    balances[payee] = new_payee;
    bank.total_loans = Money::from_cents(loans);
    Ok(TransferOutcome {
        applied: true,
        payer,
        payee,
        delta,
        block_reason: None,
    })
}
