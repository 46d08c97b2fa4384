//! Scenario configuration and the transaction loop.

use serde::{Deserialize, Serialize};

use crate::banking::{
    accrue_interest, theoretical_temperatures, trigger_bankruptcy, BankState, BankruptcySpec,
    BoundaryPolicy, EventKind, EventLog, InterestSpec, TemperatureSet,
};
use crate::exchange::{
    apply_transfer, draw_pair, init_population, AgentLedger, ExchangeRule, LedgerError, Proposer,
    TransferOutcome,
};
use crate::money::Money;
use crate::rng::{self, SimRng};
use crate::scenario::ConfigError;
use crate::stats::{
    stationarity_reached, summarize, DistributionSummary, Histogram, SummaryOptions,
};
use crate::Error;

/// Default KS threshold for the manifest's stationarity verdict.
pub const STATIONARITY_EPSILON: f64 = 0.02;
/// Number of snapshot pairs the verdict inspects.
pub const STATIONARITY_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub n_agents: usize,
    pub initial_balance: Money,
    pub rule: ExchangeRule,
    pub boundary: BoundaryPolicy,
    pub n_transactions: u64,
    pub snapshot_every: u64,
    pub seed: u64,
    pub interest: Option<InterestSpec>,
    pub bankruptcy: Option<BankruptcySpec>,
    /// Histogram bin width; defaults to a twentieth of the expected
    /// temperature.
    pub bin_width: Option<Money>,
}

impl ScenarioConfig {
    pub const DEFAULT_SEED: u64 = 1;
    pub const DEFAULT_SNAPSHOT_SWEEPS: u64 = 10;

    /// A config with the default seed and snapshot cadence.
    pub fn new(
        n_agents: usize,
        initial_balance: Money,
        rule: ExchangeRule,
        boundary: BoundaryPolicy,
        n_transactions: u64,
    ) -> Self {
        ScenarioConfig {
            n_agents,
            initial_balance,
            rule,
            boundary,
            n_transactions,
            snapshot_every: Self::default_snapshot_every(n_agents, n_transactions),
            seed: Self::DEFAULT_SEED,
            interest: None,
            bankruptcy: None,
            bin_width: None,
        }
    }

    /// Ten sweeps, reduced to half the run when the run is shorter.
    pub fn default_snapshot_every(n_agents: usize, n_transactions: u64) -> u64 {
        let ten_sweeps = Self::DEFAULT_SNAPSHOT_SWEEPS.saturating_mul(n_agents as u64);
        ten_sweeps.min(n_transactions / 2).max(1)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.n_agents < 2 {
            return Err(LedgerError::InvalidPopulation(self.n_agents).into());
        }
        if self.initial_balance.is_negative() {
            return Err(LedgerError::NegativeInitialBalance(self.initial_balance).into());
        }
        self.rule.validate()?;
        self.boundary.validate()?;
        if self.n_transactions == 0 {
            return Err(ConfigError::invalid("transactions", "integer >= 1", "0").into());
        }
        if self.snapshot_every == 0 || self.snapshot_every > self.n_transactions {
            return Err(ConfigError::invalid(
                "snapshot_every",
                "integer in [1, transactions]",
                &self.snapshot_every.to_string(),
            )
            .into());
        }
        if let Some(spec) = &self.interest {
            spec.validate()?;
        }
        if let Some(spec) = &self.bankruptcy {
            spec.validate()?;
        }
        if let Some(w) = self.bin_width {
            if !w.is_positive() {
                return Err(ConfigError::invalid(
                    "bin_width_cents",
                    "integer >= 1",
                    &w.cents().to_string(),
                )
                .into());
            }
        }
        self.monetary_base()?;
        Ok(())
    }

    pub fn monetary_base(&self) -> Result<Money, Error> {
        self.initial_balance
            .checked_mul(self.n_agents as i64)
            .ok_or(Error::Ledger(LedgerError::Overflow))
    }

    pub fn theoretical_temperatures(&self) -> Result<TemperatureSet, Error> {
        Ok(theoretical_temperatures(
            &self.boundary,
            self.monetary_base()?,
            self.n_agents,
        )?)
    }

    /// Histogram settings used for every snapshot of this scenario.
    pub fn summary_options(&self) -> Result<SummaryOptions, Error> {
        let bin_width = match self.bin_width {
            Some(w) => w,
            None => {
                let scale = match self.theoretical_temperatures()? {
                    TemperatureSet::Exponential { temperature, .. } => temperature,
                    TemperatureSet::TwoSided { t_plus, .. } => t_plus,
                    TemperatureSet::NonStationary => {
                        let step = match self.rule {
                            ExchangeRule::FixedAmount { delta } => delta.as_f64(),
                            ExchangeRule::UniformRandom { max_delta } => max_delta.as_f64() / 2.0,
                            _ => 0.0,
                        };
                        self.initial_balance.as_f64().max(10.0 * step)
                    }
                };
                Money::from_cents(((scale / 20.0).round() as i64).max(1))
            }
        };
        Ok(SummaryOptions {
            bin_width,
            anchor: self.boundary.floor().unwrap_or(Money::ZERO),
            floor: self.boundary.floor(),
            two_sided: matches!(self.boundary, BoundaryPolicy::ReserveRatio { .. }),
        })
    }
}

/// Aggregate record of one interest or bankruptcy event.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EventRecord {
    pub transactions: u64,
    pub kind: EventKind,
    pub agents: usize,
    pub agent_delta: Money,
    pub equity_delta: Money,
    pub loans_delta: Money,
}

impl EventRecord {
    fn from_log(transactions: u64, log: &EventLog) -> Self {
        EventRecord {
            transactions,
            kind: log.kind,
            agents: log.entries.len(),
            agent_delta: log.agent_delta,
            equity_delta: log.equity_delta,
            loans_delta: log.loans_delta,
        }
    }
}

/// `Σ m_i + equity - injected`, which nothing but a bookkeeping error can
/// change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConservationAudit {
    pub agent_total: Money,
    pub bank_equity: Money,
    pub injected: Money,
    pub net: i128,
}

/// A single run's state, advanced one transaction at a time.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: ScenarioConfig,
    ledger: AgentLedger,
    bank: BankState,
    proposer: Proposer,
    rng: SimRng,
    transactions: u64,
    applied: u64,
    blocked: u64,
    interest_period: Option<u64>,
    bankruptcy_period: Option<u64>,
    events: Vec<EventRecord>,
}

impl Simulation {
    pub fn new(config: ScenarioConfig) -> Result<Self, Error> {
        config.validate()?;
        let ledger = init_population(config.n_agents, config.initial_balance)?;
        let bank = BankState::open(&config.boundary, &ledger)?;
        let mut rng = rng::seeded(config.seed);
        let proposer = Proposer::new(config.rule, config.n_agents, &mut rng)?;
        let sweep = config.n_agents as u64;
        let interest_period = config.interest.map(|s| s.cadence.saturating_mul(sweep));
        let bankruptcy_period = config.bankruptcy.map(|s| s.cadence.saturating_mul(sweep));
        Ok(Simulation {
            config,
            ledger,
            bank,
            proposer,
            rng,
            transactions: 0,
            applied: 0,
            blocked: 0,
            interest_period,
            bankruptcy_period,
            events: Vec::new(),
        })
    }

    pub fn config(&self) -> &ScenarioConfig {
        &self.config
    }

    pub fn ledger(&self) -> &AgentLedger {
        &self.ledger
    }

    pub fn bank(&self) -> &BankState {
        &self.bank
    }

    pub fn proposer(&self) -> &Proposer {
        &self.proposer
    }

    pub fn transactions(&self) -> u64 {
        self.transactions
    }

    pub fn applied(&self) -> u64 {
        self.applied
    }

    pub fn blocked(&self) -> u64 {
        self.blocked
    }

    pub fn events(&self) -> &[EventRecord] {
        &self.events
    }

    /// One transaction: draw a pair, propose an amount, try the transfer,
    /// then run any interest or bankruptcy event that falls due.
    pub fn step(&mut self) -> Result<TransferOutcome, Error> {
        let n = self.ledger.len();
        let (payer, payee) = draw_pair(&mut self.rng, n)?;
        let balances = self.ledger.balances();
        let delta = self.proposer.propose_amount(
            payer,
            payee,
            balances[payer],
            balances[payee],
            &mut self.rng,
        );
        let outcome = apply_transfer(
            &mut self.ledger,
            &mut self.bank,
            &self.config.boundary,
            payer,
            payee,
            delta,
        )?;
        self.transactions += 1;
        if outcome.applied {
            self.applied += 1;
        } else {
            self.blocked += 1;
        }
        self.run_due_events()?;
        Ok(outcome)
    }

    fn run_due_events(&mut self) -> Result<(), Error> {
        let t = self.transactions;
        if let (Some(period), Some(spec)) = (self.interest_period, self.config.interest) {
            if t.is_multiple_of(period) {
                let log = accrue_interest(&mut self.ledger, &mut self.bank, &spec)?;
                if !log.is_empty() {
                    self.events.push(EventRecord::from_log(t, &log));
                }
            }
        }
        if let (Some(period), Some(spec)) = (self.bankruptcy_period, self.config.bankruptcy) {
            if t.is_multiple_of(period) {
                let log = trigger_bankruptcy(&mut self.ledger, &mut self.bank, &spec)?;
                if !log.is_empty() {
                    self.events.push(EventRecord::from_log(t, &log));
                }
            }
        }
        Ok(())
    }

    /// Steps until `target` transactions have run in total.
    pub fn advance_to(&mut self, target: u64) -> Result<(), Error> {
        while self.transactions < target {
            self.step()?;
        }
        Ok(())
    }

    pub fn audit(&self) -> Result<ConservationAudit, Error> {
        let agent_total = self.ledger.total().ok_or(LedgerError::Overflow)?;
        let injected = self.ledger.total_injected();
        Ok(ConservationAudit {
            agent_total,
            bank_equity: self.bank.equity,
            injected,
            net: agent_total.cents() as i128 + self.bank.equity.cents() as i128
                - injected.cents() as i128,
        })
    }

    pub fn snapshot(&self, index: usize, opts: &SummaryOptions) -> Result<Snapshot, Error> {
        let audit = self.audit()?;
        Ok(Snapshot {
            index,
            transactions: self.transactions,
            summary: summarize(self.ledger.balances(), opts),
            total_loans: self.bank.total_loans,
            audit,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub index: usize,
    pub transactions: u64,
    pub summary: DistributionSummary,
    pub total_loans: Money,
    pub audit: ConservationAudit,
}

/// Everything a run produced.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationTrace {
    pub config: ScenarioConfig,
    pub rng_algorithm: String,
    pub theoretical: TemperatureSet,
    pub summary_options: SummaryOptions,
    pub snapshots: Vec<Snapshot>,
    pub final_ledger: AgentLedger,
    pub bank: BankState,
    pub events: Vec<EventRecord>,
    pub applied: u64,
    pub blocked: u64,
}

impl SimulationTrace {
    pub fn histograms(&self) -> Vec<Histogram> {
        self.snapshots
            .iter()
            .map(|s| s.summary.histogram.clone())
            .collect()
    }

    pub fn final_snapshot(&self) -> &Snapshot {
        self.snapshots.last().expect("a trace always has snapshots")
    }

    /// Stationarity verdict on `k + 1` snapshots spread evenly over the
    /// run, the last one being the final snapshot.
    ///
    /// Adjacent snapshots at the recording cadence can differ by less than
    /// any threshold even while the distribution keeps spreading, so the
    /// verdict compares snapshots a fixed fraction of the run apart.
    pub fn stationary(&self, epsilon: f64, k: usize) -> bool {
        let last = self.snapshots.len().saturating_sub(1);
        let mut picks: Vec<usize> = (1..=k + 1)
            .map(|j| (last * j + k.div_ceil(2)) / (k + 1))
            .collect();
        picks.dedup();
        if picks.len() < k + 1 {
            return false;
        }
        let spaced: Vec<Histogram> = picks
            .iter()
            .map(|&i| self.snapshots[i].summary.histogram.clone())
            .collect();
        stationarity_reached(&spaced, epsilon, k)
    }

    pub fn conservation_holds(&self) -> bool {
        let Some(first) = self.snapshots.first() else {
            return true;
        };
        self.snapshots
            .iter()
            .all(|s| s.audit.net == first.audit.net)
    }
}

/// Runs `config` to completion, summarising a snapshot at the start and
/// after every `snapshot_every` transactions (and at the end).
pub fn run(config: ScenarioConfig) -> Result<SimulationTrace, Error> {
    let mut sim = Simulation::new(config)?;
    let opts = sim.config.summary_options()?;
    let theoretical = sim.config.theoretical_temperatures()?;
    let (total, every) = (sim.config.n_transactions, sim.config.snapshot_every);
    let mut snapshots = vec![sim.snapshot(0, &opts)?];
    while sim.transactions < total {
        let next = (sim.transactions + every).min(total);
        sim.advance_to(next)?;
        snapshots.push(sim.snapshot(snapshots.len(), &opts)?);
    }
    Ok(SimulationTrace {
        rng_algorithm: rng::RNG_ALGORITHM.to_string(),
        theoretical,
        summary_options: opts,
        snapshots,
        final_ledger: sim.ledger.clone(),
        bank: sim.bank.clone(),
        events: std::mem::take(&mut sim.events),
        applied: sim.applied,
        blocked: sim.blocked,
        config: sim.config,
    })
}
