//! Acceptance criteria, one PASS/FAIL line each, with measured values and
//! tolerances printed underneath. Exits nonzero if any criterion fails.
//!
//! Set `MONEYGAS_ENERGY_DIR` to a directory of per-year energy CSV tables
//! (1990, 2000 and 2005) to run the optional real-data checks of criterion 9.

use std::path::Path;
use std::process::ExitCode;
use std::thread;
use std::time::Instant;

use moneygas::banking::{BankruptcySpec, BoundaryPolicy, InterestSpec};
use moneygas::energy::{
    group_by_year, load_energy_table, weighted_gini, weighted_lorenz, world_average, EnergyRecord,
    WeightedDistribution,
};
use moneygas::exchange::ExchangeRule;
use moneygas::rng::seeded;
use moneygas::sim::{STATIONARITY_EPSILON, STATIONARITY_WINDOW};
use moneygas::stats::{exponential_lorenz, lorenz_curve, LorenzCurve};
use moneygas::{run, Money, ScenarioConfig, Simulation, SimulationTrace};
use rand::Rng;

const N: usize = 500;
const BASE_DOLLARS: i64 = 1000;
const BASELINE_TRANSACTIONS: u64 = 40_000_000;

const T_TOLERANCE_1: f64 = 0.03;
const KS_LIMIT_1: f64 = 0.03;
const RUNTIME_LIMIT_1: f64 = 60.0;
const ENTROPY_TOLERANCE_2: f64 = 0.02;
const T_TOLERANCE_3: f64 = 0.05;
const T_TOLERANCE_4: f64 = 0.10;
const SKEW_LIMIT_6: f64 = 0.1;
const LORENZ_HALF: f64 = 0.153426;
const LORENZ_TOLERANCE_7: f64 = 1e-6;
const QUADRATURE_TOLERANCE_7: f64 = 1e-3;
const RUN_GINI_TOLERANCE_7: f64 = 0.02;
const GINI_ORACLE_TOLERANCE_8: f64 = 1e-9;
const GINI_TOLERANCE_9: f64 = 0.03;
const DISTANCE_LIMIT_9: f64 = 0.03;
const WORLD_MEAN_9: f64 = 2.2;
const WORLD_MEAN_TOLERANCE_9: f64 = 0.10;

/// `x + (1 - x) ln(1 - x)` at 0.5, mpmath with 40 digits.
const LORENZ_HALF_ORACLE: f64 = 0.153_426_409_720_027_345_291_383_939_270_911_6;

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

struct Criterion {
    id: u8,
    title: &'static str,
    checks: Vec<Check>,
    info: Vec<String>,
}

impl Criterion {
    fn new(id: u8, title: &'static str) -> Self {
        Criterion {
            id,
            title,
            checks: Vec::new(),
            info: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn info(&mut self, line: impl Into<String>) {
        self.info.push(line.into());
    }

    fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    fn print(&self) {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {verdict}  {}", self.id, self.title);
        for c in &self.checks {
            let mark = if c.pass { "ok" } else { "FAILED" };
            println!("    [{mark}] {}: {}", c.name, c.detail);
        }
        for line in &self.info {
            println!("    info: {line}");
        }
    }
}

fn dollars(cents: f64) -> String {
    format!("${:.2}", cents / 100.0)
}

fn rel_err(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected.abs()
}

fn config(
    boundary: BoundaryPolicy,
    delta_dollars: i64,
    transactions: u64,
    seed: u64,
) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(
        N,
        Money::from_dollars(BASE_DOLLARS),
        ExchangeRule::FixedAmount {
            delta: Money::from_dollars(delta_dollars),
        },
        boundary,
        transactions,
    );
    cfg.seed = seed;
    cfg
}

/// Conservation record of one acceptance run.
struct Audit {
    run: String,
    checked: usize,
    violations: usize,
}

impl Audit {
    fn from_trace(run: &str, trace: &SimulationTrace) -> Self {
        let net0 = trace.snapshots[0].audit.net;
        Audit {
            run: run.to_string(),
            checked: trace.snapshots.len(),
            violations: trace
                .snapshots
                .iter()
                .filter(|s| s.audit.net != net0)
                .count(),
        }
    }
}

/// Entropy of an exponential law with temperature `t` binned on `[k w, (k+1) w)`.
fn exponential_histogram_entropy(t: f64, w: f64) -> f64 {
    let q = (-w / t).exp();
    let mut s = 0.0;
    let mut tail = 1.0f64;
    while tail > 1e-300 {
        let p = tail * (1.0 - q);
        if p > 0.0 {
            s -= p * p.ln();
        }
        tail *= q;
    }
    s
}

fn pairwise_gini(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let mut acc = 0.0;
    for a in values {
        for b in values {
            acc += (a - b).abs();
        }
    }
    acc / (2.0 * n * n * mean)
}

fn thirds_means(values: &[f64]) -> [f64; 3] {
    let len = values.len();
    let mean = |s: &[f64]| s.iter().sum::<f64>() / s.len() as f64;
    [
        mean(&values[..len / 3]),
        mean(&values[len / 3..2 * len / 3]),
        mean(&values[2 * len / 3..]),
    ]
}

/// Criteria 1, 2 and 7 share the baseline run.
fn baseline() -> (Criterion, Criterion, Criterion, Vec<Audit>) {
    let cfg = config(BoundaryPolicy::NoDebt, 1, BASELINE_TRANSACTIONS, 1);
    let started = Instant::now();
    let trace = run(cfg).expect("baseline run");
    let elapsed = started.elapsed().as_secs_f64();
    let last = trace.final_snapshot();
    let summary = &last.summary;

    let mut c1 = Criterion::new(
        1,
        "Boltzmann-Gibbs stationarity (N=500, $1000, fixed $1, no debt, 4e7 transactions)",
    );
    let t = summary.fit.expect("fit").temperature;
    let err = rel_err(t, 100_000.0);
    c1.check(
        "fitted T",
        err <= T_TOLERANCE_1,
        format!(
            "{} vs $1000.00, error {:.3}% (limit {}%)",
            dollars(t),
            100.0 * err,
            100.0 * T_TOLERANCE_1
        ),
    );
    let ks = summary.ks.expect("ks");
    c1.check(
        "KS to fitted exponential",
        ks < KS_LIMIT_1,
        format!("{ks:.4} (limit < {KS_LIMIT_1})"),
    );
    c1.check(
        "runtime",
        elapsed < RUNTIME_LIMIT_1,
        format!("{elapsed:.1} s (limit < {RUNTIME_LIMIT_1} s)"),
    );
    let var = summary.moments.variance;
    c1.info(format!(
        "variance {:.3e} cents^2 vs {:.3e} at equilibrium; each agent has taken ~{} unit steps",
        var,
        1e10,
        2 * BASELINE_TRANSACTIONS / N as u64
    ));

    let mut c2 = Criterion::new(2, "Entropy growth on the baseline run");
    let entropies: Vec<f64> = trace.snapshots.iter().map(|s| s.summary.entropy).collect();
    c2.check(
        "initial entropy",
        entropies[0] == 0.0,
        format!("{}", entropies[0]),
    );
    let thirds = thirds_means(&entropies);
    c2.check(
        "windowed thirds strictly increasing",
        thirds[0] < thirds[1] && thirds[1] < thirds[2],
        format!("{:.4} < {:.4} < {:.4}", thirds[0], thirds[1], thirds[2]),
    );
    let w = trace.summary_options.bin_width.as_f64();
    let oracle = exponential_histogram_entropy(t, w);
    let final_s = *entropies.last().unwrap();
    let err = rel_err(final_s, oracle);
    c2.check(
        "final entropy vs exponential histogram",
        err <= ENTROPY_TOLERANCE_2,
        format!(
            "{final_s:.4} vs {oracle:.4} (T {}, bin {}), error {:.2}% (limit {}%)",
            dollars(t),
            dollars(w),
            100.0 * err,
            100.0 * ENTROPY_TOLERANCE_2
        ),
    );

    let mut c7 = Criterion::new(7, "Exponential Lorenz analytics");
    let y = exponential_lorenz(0.5).unwrap();
    c7.check(
        "exponential_lorenz(0.5)",
        (y - LORENZ_HALF).abs() <= LORENZ_TOLERANCE_7 && (y - LORENZ_HALF_ORACLE).abs() <= 1e-15,
        format!(
            "{y:.15} vs {LORENZ_HALF} ± {LORENZ_TOLERANCE_7} and oracle {LORENZ_HALF_ORACLE:.15}"
        ),
    );
    let analytic = LorenzCurve::from_fn(100_000, |x| exponential_lorenz(x).unwrap());
    c7.check(
        "Gini of the analytic curve",
        (analytic.gini - 0.5).abs() <= QUADRATURE_TOLERANCE_7,
        format!(
            "{:.6} vs 0.5 ± {QUADRATURE_TOLERANCE_7} (trapezoid, 1e5 panels)",
            analytic.gini
        ),
    );
    let g = summary.gini.expect("non-negative balances");
    c7.check(
        "Gini of the baseline final snapshot",
        (g - 0.5).abs() <= RUN_GINI_TOLERANCE_7,
        format!("{g:.4} vs 0.5 ± {RUN_GINI_TOLERANCE_7}"),
    );

    (c1, c2, c7, vec![Audit::from_trace("baseline", &trace)])
}

/// Same baseline with $10 steps, which relaxes a hundred times faster.
fn baseline_fast_info() -> String {
    let trace = run(config(BoundaryPolicy::NoDebt, 10, BASELINE_TRANSACTIONS, 1)).expect("run");
    let s = &trace.final_snapshot().summary;
    format!(
        "same run with $10 steps: KS {:.4}, Gini {:.4}, entropy {:.4}, variance {:.3e}",
        s.ks.unwrap(),
        s.gini.unwrap(),
        s.entropy,
        s.moments.variance
    )
}

fn debt_limit() -> (Criterion, Vec<Audit>) {
    let mut c = Criterion::new(3, "Debt-limit temperature (limit $800, same setup)");
    let trace = run(config(
        BoundaryPolicy::DebtLimit {
            limit: Money::from_dollars(800),
        },
        1,
        BASELINE_TRANSACTIONS,
        1,
    ))
    .expect("run");
    let s = &trace.final_snapshot().summary;
    let fit = s.fit.expect("fit");
    c.check(
        "fit floor",
        fit.floor == Money::from_dollars(-800),
        format!("{}", fit.floor),
    );
    let err = rel_err(fit.temperature, 180_000.0);
    c.check(
        "fitted T",
        err <= T_TOLERANCE_3,
        format!(
            "{} vs $1800.00, error {:.3}% (limit {}%)",
            dollars(fit.temperature),
            100.0 * err,
            100.0 * T_TOLERANCE_3
        ),
    );
    let floor_ok = trace
        .final_ledger
        .balances()
        .iter()
        .all(|&m| m >= Money::from_dollars(-800));
    c.check(
        "balances above floor",
        floor_ok,
        format!("min {}", s.moments.min),
    );
    c.info(format!(
        "KS to fitted shifted exponential {:.4}",
        s.ks.unwrap()
    ));
    (c, vec![Audit::from_trace("debt-limit", &trace)])
}

fn reserve() -> (Criterion, Vec<Audit>) {
    const TRANSACTIONS: u64 = 20_000_000;
    let mut c = Criterion::new(
        4,
        "Reserve ratio two temperatures (R=0.8, M_b/N=$1000, fixed $10, 2e7 transactions)",
    );
    let mut cfg = config(
        BoundaryPolicy::ReserveRatio { ratio: 0.8 },
        10,
        TRANSACTIONS,
        1,
    );
    cfg.snapshot_every = TRANSACTIONS / 100;
    let opts = cfg.summary_options().unwrap();
    let m_b = cfg.monetary_base().unwrap();
    let mut sim = Simulation::new(cfg).unwrap();
    let cap = sim.bank().loan_cap.expect("reserve cap");
    let net0 = sim.audit().unwrap().net;
    let (mut sum_violations, mut cap_violations, mut book_violations, mut audit_violations) =
        (0u64, 0u64, 0u64, 0u64);
    let mut max_loans = Money::ZERO;
    let mut saturated_at = None;
    let mut late_t_plus = Vec::new();
    let mut late_t_minus = Vec::new();
    // shadow copy moved only by the reported transfers; a full comparison
    // every FULL_CHECK steps proves nothing else touched the ledger
    const FULL_CHECK: u64 = 1_000;
    let mut shadow: Vec<i64> = sim.ledger().balances().iter().map(|m| m.cents()).collect();
    let mut shadow_debt: i64 = shadow.iter().map(|&c| (-c).max(0)).sum();
    let mut full_checks = 0u64;
    for t in 1..=TRANSACTIONS {
        let out = sim.step().unwrap();
        if out.applied && out.payer != out.payee {
            let (p, q, d) = (out.payer, out.payee, out.delta.cents());
            shadow_debt -= (-shadow[p]).max(0) + (-shadow[q]).max(0);
            shadow[p] -= d;
            shadow[q] += d;
            shadow_debt += (-shadow[p]).max(0) + (-shadow[q]).max(0);
        }
        let balances = sim.ledger().balances();
        let mut sum_ok = balances[out.payer].cents() == shadow[out.payer]
            && balances[out.payee].cents() == shadow[out.payee];
        if t % FULL_CHECK == 0 {
            full_checks += 1;
            sum_ok &= balances.iter().zip(&shadow).all(|(m, &s)| m.cents() == s)
                && balances.iter().map(|m| m.cents()).sum::<i64>() == m_b.cents();
        }
        let loans = sim.bank().total_loans;
        sum_violations += u64::from(!sum_ok);
        book_violations += u64::from(shadow_debt != loans.cents());
        cap_violations += u64::from(loans > cap);
        max_loans = max_loans.max(loans);
        if saturated_at.is_none() && loans == cap {
            saturated_at = Some(t);
        }
        if t % (TRANSACTIONS / 100) == 0 {
            audit_violations += u64::from(sim.audit().unwrap().net != net0);
            if t > TRANSACTIONS / 2 {
                if let Some(f) = sim.snapshot(0, &opts).unwrap().summary.two_sided_fit {
                    late_t_plus.push(f.t_plus);
                    late_t_minus.push(f.t_minus);
                }
            }
        }
    }
    let snap = sim.snapshot(0, &opts).unwrap();
    let fit = snap.summary.two_sided_fit.expect("two-sided sample");
    let (ep, em) = (
        rel_err(fit.t_plus, 125_000.0),
        rel_err(fit.t_minus, 25_000.0),
    );
    c.check(
        "T+",
        ep <= T_TOLERANCE_4,
        format!(
            "{} vs $1250.00, error {:.1}% (limit {}%)",
            dollars(fit.t_plus),
            100.0 * ep,
            100.0 * T_TOLERANCE_4
        ),
    );
    c.check(
        "T-",
        em <= T_TOLERANCE_4,
        format!(
            "{} vs $250.00, error {:.1}% (limit {}%)",
            dollars(fit.t_minus),
            100.0 * em,
            100.0 * T_TOLERANCE_4
        ),
    );
    c.check(
        "D <= M_b/4 at every step",
        cap_violations == 0 && cap == Money::from_cents(m_b.cents() / 4),
        format!(
            "cap {cap}, max D {max_loans}, {cap_violations} violations in {TRANSACTIONS} steps"
        ),
    );
    c.check("sum of balances = M_b at every step", sum_violations == 0 && book_violations == 0, format!("{sum_violations} sum and {book_violations} loan-book mismatches in {TRANSACTIONS} steps ({full_checks} full ledger comparisons)"));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    c.info(format!(
        "saturated (D = cap) after {} transactions; second-half means T+ {} T- {}; n+ {} n- {}",
        saturated_at.map_or("never".to_string(), |t| t.to_string()),
        dollars(mean(&late_t_plus)),
        dollars(mean(&late_t_minus)),
        fit.n_plus,
        fit.n_minus
    ));
    let n = N as f64;
    c.info(format!(
        "aggregates per agent: M/N {} (money supply), D/N {} (debt)",
        dollars((m_b.cents() + snap.total_loans.cents()) as f64 / n),
        dollars(snap.total_loans.cents() as f64 / n)
    ));
    let audit = Audit {
        run: "reserve-ratio (per step sums, per snapshot audit)".into(),
        checked: 100,
        violations: audit_violations as usize,
    };
    (c, vec![audit])
}

fn unlimited() -> (Criterion, Vec<Audit>) {
    let mut c = Criterion::new(
        5,
        "Unlimited debt non-stationarity (5 seeds, fixed $1, 2e6 transactions)",
    );
    let mut audits = Vec::new();
    let (mut mean_ok, mut grew, mut stationary) = (true, 0, 0);
    let mut pairs = Vec::new();
    for seed in 1..=5u64 {
        let mut cfg = config(BoundaryPolicy::Unlimited, 1, 2_000_000, seed);
        cfg.snapshot_every = 500_000;
        let trace = run(cfg).expect("run");
        mean_ok &= trace.snapshots.iter().all(|s| {
            s.audit.agent_total == Money::from_dollars(BASE_DOLLARS * N as i64)
                && s.summary.moments.mean == 100_000.0
        });
        let at = |tx: u64| {
            trace
                .snapshots
                .iter()
                .find(|s| s.transactions == tx)
                .unwrap()
                .summary
                .moments
                .variance
        };
        let (v1, v2) = (at(1_000_000), at(2_000_000));
        grew += usize::from(v2 > v1);
        pairs.push(format!("{:.3e}->{:.3e}", v1, v2));
        stationary += usize::from(trace.stationary(STATIONARITY_EPSILON, STATIONARITY_WINDOW));
        audits.push(Audit::from_trace(&format!("unlimited seed {seed}"), &trace));
    }
    c.check(
        "mean = M_b/N exactly at every snapshot",
        mean_ok,
        "5 seeds x 5 snapshots",
    );
    c.check(
        "variance grows from 1e6 to 2e6 transactions",
        grew >= 4,
        format!("{grew}/5 seeds (need >= 4): {}", pairs.join(", ")),
    );
    c.check("stationarity detector false", stationary == 0, format!("{stationary}/5 seeds flagged stationary (epsilon {STATIONARITY_EPSILON}, k {STATIONARITY_WINDOW})"));
    (c, audits)
}

fn mutual_credit() -> (Criterion, Vec<Audit>) {
    let mut c = Criterion::new(
        6,
        "Mutual credit (zero base, N=5000, fixed $1, 1e7 transactions)",
    );
    let mut cfg = ScenarioConfig::new(
        5_000,
        Money::ZERO,
        ExchangeRule::FixedAmount {
            delta: Money::from_dollars(1),
        },
        BoundaryPolicy::MutualCredit { floor: None },
        10_000_000,
    );
    cfg.snapshot_every = 100_000;
    cfg.seed = 1;
    let trace = run(cfg).expect("run");
    let zero = trace
        .snapshots
        .iter()
        .all(|s| s.audit.agent_total == Money::ZERO);
    c.check(
        "sum of balances = 0 exactly",
        zero,
        format!("{} snapshots", trace.snapshots.len()),
    );
    let skew = trace.final_snapshot().summary.moments.skewness;
    c.check(
        "final skewness",
        skew.abs() < SKEW_LIMIT_6,
        format!("{skew:.4} (limit |s| < {SKEW_LIMIT_6})"),
    );
    let st = trace.stationary(STATIONARITY_EPSILON, STATIONARITY_WINDOW);
    c.check(
        "stationarity detector false",
        !st,
        format!(
            "epsilon {STATIONARITY_EPSILON}, k {STATIONARITY_WINDOW}, snapshots at quarters of 1e7"
        ),
    );
    c.info(format!(
        "final variance {:.3e} cents^2",
        trace.final_snapshot().summary.moments.variance
    ));
    (c, vec![Audit::from_trace("mutual credit", &trace)])
}

fn gini_oracles() -> Criterion {
    let mut c = Criterion::new(8, "Gini oracle equivalence");
    let mut rng = seeded(8);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let n = rng.random_range(1..=200);
        let values: Vec<f64> = (0..n)
            .map(|_| match i % 4 {
                0 => rng.random_range(0.0..1.0),
                1 => -(1.0f64 - rng.random::<f64>()).ln() * 1000.0,
                2 => f64::from(rng.random_range(0u32..5)),
                _ => {
                    if rng.random_bool(0.9) {
                        0.0
                    } else {
                        rng.random_range(1.0..1e6)
                    }
                }
            })
            .collect();
        if values.iter().sum::<f64>() == 0.0 {
            continue;
        }
        let curve = lorenz_curve(&values).unwrap();
        worst = worst.max((curve.gini - pairwise_gini(&values)).abs());
    }
    c.check(
        "curve vs pairwise, 100 samples n <= 200",
        worst <= GINI_ORACLE_TOLERANCE_8,
        format!("max |diff| {worst:.2e} (limit {GINI_ORACLE_TOLERANCE_8:e})"),
    );

    let mut worst: f64 = 0.0;
    let mut tables = 0;
    while tables < 100 {
        let rows = rng.random_range(1..=60);
        let records: Vec<EnergyRecord> = (0..rows)
            .map(|r| {
                EnergyRecord::new(
                    2000,
                    format!("c{r}"),
                    rng.random_range(1..=160),
                    f64::from(rng.random_range(0u32..40)) / 4.0,
                )
            })
            .collect();
        let total: u64 = records.iter().map(|r| r.population).sum();
        if total > 10_000 || records.iter().all(|r| r.kw_per_capita == 0.0) {
            continue;
        }
        tables += 1;
        let expanded: Vec<f64> = records
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.kw_per_capita, r.population as usize))
            .collect();
        let g = weighted_gini(&records).unwrap();
        worst = worst.max((g - lorenz_curve(&expanded).unwrap().gini).abs());
        worst = worst.max((g - weighted_lorenz(&records).unwrap().gini).abs());
    }
    c.check(
        "weighted vs population expansion, 100 tables",
        worst <= GINI_ORACLE_TOLERANCE_8,
        format!("max |diff| {worst:.2e} (limit {GINI_ORACLE_TOLERANCE_8:e})"),
    );
    c
}

fn energy() -> Criterion {
    let mut c = Criterion::new(9, "Energy empirics");
    let mut rng = seeded(9);
    let table: Vec<EnergyRecord> = (0..10_000)
        .map(|i| {
            let kw = -(1.0f64 - rng.random::<f64>()).ln() * WORLD_MEAN_9;
            EnergyRecord::new(
                2005,
                format!("S{i:05}"),
                rng.random_range(100_000..10_000_000),
                kw,
            )
        })
        .collect();
    let dist = WeightedDistribution::new(&table).unwrap();
    let g = dist.lorenz().unwrap().gini;
    let d = dist.exponential_distance().unwrap();
    c.check(
        "synthetic exponential table: weighted Gini",
        (g - 0.5).abs() <= GINI_TOLERANCE_9,
        format!("{g:.4} vs 0.5 ± {GINI_TOLERANCE_9} (10000 countries)"),
    );
    c.check(
        "synthetic exponential table: exponential distance",
        d < DISTANCE_LIMIT_9,
        format!("{d:.4} (limit < {DISTANCE_LIMIT_9})"),
    );

    match std::env::var_os("MONEYGAS_ENERGY_DIR") {
        None => c.info("MONEYGAS_ENERGY_DIR not set; real-data checks skipped"),
        Some(dir) => real_energy(&mut c, Path::new(&dir)),
    }
    c
}

fn real_energy(c: &mut Criterion, dir: &Path) {
    let mut records = Vec::new();
    let entries = match std::fs::read_dir(dir) {
        Ok(e) => e,
        Err(e) => {
            c.check(
                "energy directory readable",
                false,
                format!("{}: {e}", dir.display()),
            );
            return;
        }
    };
    for entry in entries.flatten() {
        let path = entry.path();
        if path.extension().is_some_and(|e| e == "csv") {
            match std::fs::File::open(&path)
                .map_err(|e| e.to_string())
                .and_then(|f| load_energy_table(f).map_err(|e| e.to_string()))
            {
                Ok(mut rows) => records.append(&mut rows),
                Err(e) => c.check(format!("load {}", path.display()), false, e),
            }
        }
    }
    let years = group_by_year(&records);
    let ginis: Vec<(i32, f64)> = [1990, 2000, 2005]
        .iter()
        .filter_map(|y| {
            years
                .get(y)
                .map(|rows| (*y, weighted_gini(rows).unwrap_or(f64::NAN)))
        })
        .collect();
    if ginis.len() < 3 {
        c.check(
            "tables for 1990, 2000, 2005",
            false,
            format!("found years {:?}", years.keys().collect::<Vec<_>>()),
        );
        return;
    }
    let mean = world_average(&years[&2005]).unwrap();
    let err = rel_err(mean, WORLD_MEAN_9);
    c.check(
        "2005 world mean",
        err <= WORLD_MEAN_TOLERANCE_9,
        format!(
            "{mean:.3} kW vs {WORLD_MEAN_9} ± {}%",
            100.0 * WORLD_MEAN_TOLERANCE_9
        ),
    );
    let falling = ginis.windows(2).all(|w| w[1].1 < w[0].1);
    c.check("Gini strictly decreasing", falling, format!("{ginis:?}"));
}

fn banking_audit_runs() -> Vec<Audit> {
    let mut audits = Vec::new();
    let interest = InterestSpec {
        deposit_rate: 0.0,
        loan_rate: 0.01,
        cadence: 2,
    };
    let bankruptcy = BankruptcySpec {
        threshold: Money::from_dollars(500),
        cadence: 1,
    };
    for (name, boundary) in [
        (
            "unlimited + interest + bankruptcy",
            BoundaryPolicy::Unlimited,
        ),
        (
            "reserve 0.8 + interest + bankruptcy",
            BoundaryPolicy::ReserveRatio { ratio: 0.8 },
        ),
        (
            "debt limit $800 + interest + bankruptcy",
            BoundaryPolicy::DebtLimit {
                limit: Money::from_dollars(800),
            },
        ),
    ] {
        let mut cfg = config(boundary, 10, 2_000_000, 10);
        cfg.interest = Some(interest);
        cfg.bankruptcy = Some(bankruptcy);
        let mut sim = Simulation::new(cfg).unwrap();
        let net0 = sim.audit().unwrap().net;
        let mut violations = 0;
        for _ in 0..2_000_000 {
            sim.step().unwrap();
            violations += usize::from(sim.audit().unwrap().net != net0);
        }
        let kinds = |k| sim.events().iter().filter(|e| e.kind == k).count();
        audits.push(Audit {
            run: format!(
                "{name} ({} interest, {} bankruptcy events)",
                kinds(moneygas::banking::EventKind::Interest),
                kinds(moneygas::banking::EventKind::Bankruptcy)
            ),
            checked: 2_000_000,
            violations,
        });
    }
    audits
}

fn conservation(audits: &[Audit]) -> Criterion {
    let mut c = Criterion::new(
        10,
        "Conservation audit (sum of balances + equity - injections)",
    );
    for a in audits {
        c.check(
            &a.run,
            a.violations == 0 && a.checked > 0,
            format!("{} checks, {} violations", a.checked, a.violations),
        );
    }
    c
}

fn main() -> ExitCode {
    let started = Instant::now();
    let baseline = thread::spawn(baseline);
    let fast = thread::spawn(baseline_fast_info);
    let debt = thread::spawn(debt_limit);
    let reserve = thread::spawn(reserve);
    let unlimited = thread::spawn(unlimited);
    let mutual = thread::spawn(mutual_credit);
    let banking = thread::spawn(banking_audit_runs);
    let c8 = gini_oracles();
    let c9 = energy();

    let (mut c1, c2, c7, mut audits) = baseline.join().unwrap();
    c1.info(fast.join().unwrap());
    let (c3, a) = debt.join().unwrap();
    audits.extend(a);
    let (c4, a) = reserve.join().unwrap();
    audits.extend(a);
    let (c5, a) = unlimited.join().unwrap();
    audits.extend(a);
    let (c6, a) = mutual.join().unwrap();
    audits.extend(a);
    audits.extend(banking.join().unwrap());
    let c10 = conservation(&audits);

    let criteria = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10];
    println!();
    for c in &criteria {
        c.print();
    }
    let failed: Vec<u8> = criteria
        .iter()
        .filter(|c| !c.passed())
        .map(|c| c.id)
        .collect();
    println!();
    println!(
        "acceptance: {} passed, {} failed {:?} in {:.1} s",
        criteria.len() - failed.len(),
        failed.len(),
        failed,
        started.elapsed().as_secs_f64()
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
