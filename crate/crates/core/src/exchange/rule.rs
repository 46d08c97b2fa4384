use rand::Rng;
use serde::{Deserialize, Serialize};

use super::LedgerError;
use crate::money::Money;

/// How the amount of a transaction is proposed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ExchangeRule {
    FixedAmount {
        delta: Money,
    },
    /// Uniform integer number of cents in `[0, max_delta]`.
    UniformRandom {
        max_delta: Money,
    },
    /// `Δm = γ m_payer`.
    Proportional {
        gamma: f64,
    },
    SavingPropensity {
        lambda: SavingLambda,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SavingLambda {
    Fixed(f64),
    /// Each agent draws its own λ once, uniform on `[0, 1)`.
    PerAgentUniform,
}

impl ExchangeRule {
    pub fn validate(&self) -> Result<(), LedgerError> {
        match *self {
            ExchangeRule::FixedAmount { delta } if delta.is_negative() => Err(
                LedgerError::InvalidRule(format!("delta {delta} must be non-negative")),
            ),
            ExchangeRule::UniformRandom { max_delta } if max_delta.is_negative() => Err(
                LedgerError::InvalidRule(format!("max_delta {max_delta} must be non-negative")),
            ),
            ExchangeRule::Proportional { gamma } if !(gamma > 0.0 && gamma < 1.0) => Err(
                LedgerError::InvalidRule(format!("gamma {gamma} must lie in (0, 1)")),
            ),
            ExchangeRule::SavingPropensity {
                lambda: SavingLambda::Fixed(l),
            } if !(0.0..=1.0).contains(&l) => Err(LedgerError::InvalidRule(format!(
                "lambda {l} must lie in [0, 1]"
            ))),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExchangeRule::FixedAmount { .. } => "fixed",
            ExchangeRule::UniformRandom { .. } => "uniform",
            ExchangeRule::Proportional { .. } => "proportional",
            ExchangeRule::SavingPropensity { .. } => "saving",
        }
    }
}

/// Saving-propensity transfer: the payer keeps `λ_p m_p` and ends with that
/// plus a random share `ε` of the pooled remainder
/// `(1 - λ_p) m_p + (1 - λ_q) m_q`. Returns what the payer pays, clamped at
/// zero and rounded to the cent, ties to even.
pub fn saving_exchange(
    m_payer: Money,
    m_payee: Money,
    lambda_payer: f64,
    lambda_payee: f64,
    epsilon: f64,
) -> Money {
    let kept = (1.0 - lambda_payer) * m_payer.as_f64();
    let pool = kept + (1.0 - lambda_payee) * m_payee.as_f64();
    let delta = kept - epsilon * pool;
    if delta <= 0.0 {
        return Money::ZERO;
    }
    Money::round_cents(delta).unwrap_or(Money::ZERO)
}

/// Proposes transaction amounts for one population.
///
/// Holds the per-agent saving propensities when the rule needs them.
#[derive(Debug, Clone)]
pub struct Proposer {
    rule: ExchangeRule,
    propensities: Vec<f64>,
}

impl Proposer {
    /// Draws per-agent propensities from `rng` when the rule asks for them;
    /// other rules consume no randomness here.
    pub fn new<R: Rng + ?Sized>(
        rule: ExchangeRule,
        n: usize,
        rng: &mut R,
    ) -> Result<Self, LedgerError> {
        rule.validate()?;
        let propensities = match rule {
            ExchangeRule::SavingPropensity {
                lambda: SavingLambda::PerAgentUniform,
            } => (0..n).map(|_| rng.random::<f64>()).collect(),
            _ => Vec::new(),
        };
        Ok(Proposer { rule, propensities })
    }

    pub fn rule(&self) -> &ExchangeRule {
        &self.rule
    }

    /// Per-agent λ values; empty unless the rule is per-agent saving.
    pub fn propensities(&self) -> &[f64] {
        &self.propensities
    }

    /// Proposes `Δm ≥ 0` for a payer/payee pair.
    #[inline]
    pub fn propose_amount<R: Rng + ?Sized>(
        &self,
        payer: usize,
        payee: usize,
        m_payer: Money,
        m_payee: Money,
        rng: &mut R,
    ) -> Money {
        match self.rule {
            ExchangeRule::FixedAmount { delta } => delta,
            ExchangeRule::UniformRandom { max_delta } => {
                Money::from_cents(rng.random_range(0..=max_delta.cents()))
            }
            ExchangeRule::Proportional { gamma } => {
                Money::round_cents(gamma * m_payer.max(Money::ZERO).as_f64()).unwrap_or(Money::ZERO)
            }
            ExchangeRule::SavingPropensity { lambda } => {
                let (lp, lq) = match lambda {
                    SavingLambda::Fixed(l) => (l, l),
                    SavingLambda::PerAgentUniform => {
                        (self.propensities[payer], self.propensities[payee])
                    }
                };
                let eps = rng.random::<f64>();
                saving_exchange(m_payer, m_payee, lp, lq, eps)
            }
        }
    }
}
