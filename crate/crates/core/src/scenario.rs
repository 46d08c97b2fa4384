//! Flat `key = value` scenario files.
//!
//! ```text
//! # Boltzmann-Gibbs baseline
//! agents = 500
//! initial_balance_cents = 100000
//! rule = fixed
//! delta_cents = 100
//! boundary = no-debt
//! transactions = 40000000
//! seed = 7
//! ```
//!
//! Keys and defaults:
//!
//! | key | type | default |
//! |-----|------|---------|
//! | `agents` | integer ≥ 2 | required |
//! | `initial_balance_cents` | integer ≥ 0 | required |
//! | `rule` | `fixed` \| `uniform` \| `proportional` \| `saving` | required |
//! | `delta_cents` | integer ≥ 0 (fixed) | 100 |
//! | `max_delta_cents` | integer ≥ 0 (uniform) | 100 |
//! | `gamma` | number in (0, 1) (proportional) | 0.1 |
//! | `lambda` | number in [0, 1] or `per-agent` (saving) | 0.5 |
//! | `boundary` | `no-debt` \| `debt-limit` \| `reserve-ratio` \| `unlimited` \| `mutual-credit` | required |
//! | `debt_limit_cents` | integer ≥ 0 (debt-limit) | required |
//! | `reserve_ratio` | number in (0, 1] (reserve-ratio) | required |
//! | `credit_floor_cents` | integer ≤ 0 (mutual-credit) | none |
//! | `transactions` | integer ≥ 1 | required |
//! | `snapshot_every` | integer in [1, transactions] | 10 sweeps, at most half the run |
//! | `seed` | unsigned 64-bit integer | 1 |
//! | `bin_width_cents` | integer ≥ 1 | expected temperature / 20 |
//! | `interest.deposit_rate` | number in [0, 1) per cadence | 0.005 |
//! | `interest.loan_rate` | number in [0, 1) per cadence | 0.01 |
//! | `interest.cadence` | sweeps ≥ 1 | 1 |
//! | `bankruptcy.threshold_cents` | integer ≥ 1 | required with any `bankruptcy.*` key |
//! | `bankruptcy.cadence` | sweeps ≥ 1 | 1 |
//!
//! Any `interest.*` key turns interest on. Unknown keys, repeated keys and
//! parameters that do not belong to the chosen rule or boundary are errors.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::banking::{BankruptcySpec, BoundaryPolicy, InterestSpec};
use crate::exchange::{ExchangeRule, SavingLambda};
use crate::money::Money;
use crate::sim::ScenarioConfig;
use crate::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    Unknown { key: String, line: usize },
    #[error("line {line}: key `{key}` given twice")]
    Duplicate { key: String, line: usize },
    #[error("missing key `{key}` (expected {expected})")]
    Missing { key: String, expected: String },
    #[error("invalid value for `{key}`: expected {expected}, found `{found}`")]
    Invalid {
        key: String,
        expected: String,
        found: String,
    },
    #[error("key `{key}` does not apply: {reason}")]
    Inapplicable { key: String, reason: String },
}

impl ConfigError {
    pub fn invalid(key: &str, expected: &str, found: &str) -> Self {
        ConfigError::Invalid {
            key: key.to_string(),
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }
}

const KEYS: &[&str] = &[
    "agents",
    "initial_balance_cents",
    "rule",
    "delta_cents",
    "max_delta_cents",
    "gamma",
    "lambda",
    "boundary",
    "debt_limit_cents",
    "reserve_ratio",
    "credit_floor_cents",
    "transactions",
    "snapshot_every",
    "seed",
    "bin_width_cents",
    "interest.deposit_rate",
    "interest.loan_rate",
    "interest.cadence",
    "bankruptcy.threshold_cents",
    "bankruptcy.cadence",
];

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub transactions: Option<u64>,
}

struct Entries {
    map: BTreeMap<String, String>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return Err(ConfigError::Syntax {
                    line,
                    text: raw.trim().to_string(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Syntax {
                    line,
                    text: raw.trim().to_string(),
                });
            }
            if !KEYS.contains(&key) {
                return Err(ConfigError::Unknown {
                    key: key.to_string(),
                    line,
                });
            }
            if map.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ConfigError::Duplicate {
                    key: key.to_string(),
                    line,
                });
            }
        }
        Ok(Entries { map })
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn typed<T: FromStr>(&mut self, key: &str, expected: &str) -> Result<Option<T>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|_| ConfigError::invalid(key, expected, &v)),
        }
    }

    fn required<T: FromStr>(&mut self, key: &str, expected: &str) -> Result<T, ConfigError> {
        self.typed(key, expected)?
            .ok_or_else(|| ConfigError::Missing {
                key: key.to_string(),
                expected: expected.to_string(),
            })
    }

    fn number_in(
        &mut self,
        key: &str,
        expected: &str,
        ok: impl Fn(f64) -> bool,
    ) -> Result<Option<f64>, ConfigError> {
        match self.typed::<f64>(key, expected)? {
            Some(x) if !ok(x) => Err(ConfigError::invalid(key, expected, &x.to_string())),
            other => Ok(other),
        }
    }

    fn cents_where(
        &mut self,
        key: &str,
        expected: &str,
        ok: impl Fn(i64) -> bool,
    ) -> Result<Option<Money>, ConfigError> {
        match self.typed::<i64>(key, expected)? {
            Some(c) if !ok(c) => Err(ConfigError::invalid(key, expected, &c.to_string())),
            other => Ok(other.map(Money::from_cents)),
        }
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        self.map.keys().any(|k| k.starts_with(prefix))
    }

    /// Fails on the first key nobody consumed.
    fn finish(self, rule: &str, boundary: &str) -> Result<(), ConfigError> {
        match self.map.into_keys().next() {
            None => Ok(()),
            Some(key) => Err(ConfigError::Inapplicable {
                reason: format!("not used with rule `{rule}` and boundary `{boundary}`"),
                key,
            }),
        }
    }
}

fn parse_rule(e: &mut Entries) -> Result<(String, ExchangeRule), ConfigError> {
    let name: String = e.required("rule", "one of fixed, uniform, proportional, saving")?;
    let rule = match name.as_str() {
        "fixed" => ExchangeRule::FixedAmount {
            delta: e
                .cents_where("delta_cents", "integer >= 0", |c| c >= 0)?
                .unwrap_or(Money::from_cents(100)),
        },
        "uniform" => ExchangeRule::UniformRandom {
            max_delta: e
                .cents_where("max_delta_cents", "integer >= 0", |c| c >= 0)?
                .unwrap_or(Money::from_cents(100)),
        },
        "proportional" => ExchangeRule::Proportional {
            gamma: e
                .number_in("gamma", "number in (0, 1)", |g| g > 0.0 && g < 1.0)?
                .unwrap_or(0.1),
        },
        "saving" => {
            let lambda = match e.take("lambda").as_deref() {
                None => SavingLambda::Fixed(0.5),
                Some("per-agent") => SavingLambda::PerAgentUniform,
                Some(v) => match v.parse::<f64>() {
                    Ok(l) if (0.0..=1.0).contains(&l) => SavingLambda::Fixed(l),
                    _ => {
                        return Err(ConfigError::invalid(
                            "lambda",
                            "number in [0, 1] or per-agent",
                            v,
                        ))
                    }
                },
            };
            ExchangeRule::SavingPropensity { lambda }
        }
        other => {
            return Err(ConfigError::invalid(
                "rule",
                "one of fixed, uniform, proportional, saving",
                other,
            ))
        }
    };
    Ok((name, rule))
}

fn parse_boundary(e: &mut Entries) -> Result<(String, BoundaryPolicy), ConfigError> {
    const KINDS: &str = "one of no-debt, debt-limit, reserve-ratio, unlimited, mutual-credit";
    let name: String = e.required("boundary", KINDS)?;
    let policy = match name.as_str() {
        "no-debt" => BoundaryPolicy::NoDebt,
        "debt-limit" => BoundaryPolicy::DebtLimit {
            limit: e
                .cents_where("debt_limit_cents", "integer >= 0", |c| c >= 0)?
                .ok_or_else(|| ConfigError::Missing {
                    key: "debt_limit_cents".into(),
                    expected: "integer >= 0".into(),
                })?,
        },
        "reserve-ratio" => BoundaryPolicy::ReserveRatio {
            ratio: e
                .number_in("reserve_ratio", "number in (0, 1]", |r| r > 0.0 && r <= 1.0)?
                .ok_or_else(|| ConfigError::Missing {
                    key: "reserve_ratio".into(),
                    expected: "number in (0, 1]".into(),
                })?,
        },
        "unlimited" => BoundaryPolicy::Unlimited,
        "mutual-credit" => BoundaryPolicy::MutualCredit {
            floor: e.cents_where("credit_floor_cents", "integer <= 0", |c| c <= 0)?,
        },
        other => return Err(ConfigError::invalid("boundary", KINDS, other)),
    };
    Ok((name, policy))
}

/// Parses scenario text, applying `overrides` before defaults are filled.
pub fn parse_scenario_str(text: &str, overrides: &Overrides) -> Result<ScenarioConfig, Error> {
    let mut e = Entries::parse(text)?;
    let n_agents: usize = e.required("agents", "integer >= 2")?;
    let initial_balance = e
        .cents_where("initial_balance_cents", "integer >= 0", |c| c >= 0)?
        .ok_or_else(|| ConfigError::Missing {
            key: "initial_balance_cents".into(),
            expected: "integer >= 0".into(),
        })?;
    let (rule_name, rule) = parse_rule(&mut e)?;
    let (boundary_name, boundary) = parse_boundary(&mut e)?;
    let file_transactions: u64 = e.required("transactions", "integer >= 1")?;
    let n_transactions = overrides.transactions.unwrap_or(file_transactions);
    let snapshot_every = e
        .typed::<u64>("snapshot_every", "integer >= 1")?
        .unwrap_or_else(|| ScenarioConfig::default_snapshot_every(n_agents, n_transactions));
    let file_seed = e.typed::<u64>("seed", "unsigned 64-bit integer")?;
    let seed = overrides
        .seed
        .or(file_seed)
        .unwrap_or(ScenarioConfig::DEFAULT_SEED);
    let bin_width = e.cents_where("bin_width_cents", "integer >= 1", |c| c >= 1)?;

    let interest = if e.has_prefix("interest.") {
        let rate = |r: f64| (0.0..1.0).contains(&r);
        Some(InterestSpec {
            deposit_rate: e
                .number_in("interest.deposit_rate", "number in [0, 1)", rate)?
                .unwrap_or(InterestSpec::DEFAULT_DEPOSIT_RATE),
            loan_rate: e
                .number_in("interest.loan_rate", "number in [0, 1)", rate)?
                .unwrap_or(InterestSpec::DEFAULT_LOAN_RATE),
            cadence: cadence(&mut e, "interest.cadence")?,
        })
    } else {
        None
    };
    let bankruptcy = if e.has_prefix("bankruptcy.") {
        Some(BankruptcySpec {
            threshold: e
                .cents_where("bankruptcy.threshold_cents", "integer >= 1", |c| c >= 1)?
                .ok_or_else(|| ConfigError::Missing {
                    key: "bankruptcy.threshold_cents".into(),
                    expected: "integer >= 1".into(),
                })?,
            cadence: cadence(&mut e, "bankruptcy.cadence")?,
        })
    } else {
        None
    };
    e.finish(&rule_name, &boundary_name)?;

    let config = ScenarioConfig {
        n_agents,
        initial_balance,
        rule,
        boundary,
        n_transactions,
        snapshot_every,
        seed,
        interest,
        bankruptcy,
        bin_width,
    };
    config.validate()?;
    Ok(config)
}

fn cadence(e: &mut Entries, key: &str) -> Result<u64, ConfigError> {
    match e.typed::<u64>(key, "integer >= 1 (sweeps)")? {
        Some(0) => Err(ConfigError::invalid(key, "integer >= 1 (sweeps)", "0")),
        Some(c) => Ok(c),
        None => Ok(1),
    }
}

/// Reads and parses a scenario file.
pub fn parse_scenario(path: &Path, overrides: &Overrides) -> Result<ScenarioConfig, Error> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_scenario_str(&text, overrides)
}
