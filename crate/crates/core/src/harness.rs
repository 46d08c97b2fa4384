//! File outputs for simulation runs and energy analyses.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::banking::TemperatureSet;
use crate::energy::{group_by_year, load_energy_table, summarize_year, YearSummary};
use crate::sim::{
    run, ConservationAudit, ScenarioConfig, SimulationTrace, STATIONARITY_EPSILON,
    STATIONARITY_WINDOW,
};
use crate::stats::DistributionSummary;
use crate::Error;

pub const CODE_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `manifest.json`: enough to reproduce the run and audit its outcome.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ScenarioConfig,
    pub seed: u64,
    pub rng_algorithm: String,
    pub code_version: String,
    pub frames: Vec<String>,
    pub trace_file: String,
    pub events_file: String,
    pub final_summary: DistributionSummary,
    pub theoretical: TemperatureSet,
    pub stationary: bool,
    pub stationarity_epsilon: f64,
    pub stationarity_window: usize,
    pub applied: u64,
    pub blocked: u64,
    pub initial_audit: ConservationAudit,
    pub final_audit: ConservationAudit,
    pub conservation_holds: bool,
    pub wall_clock_seconds: f64,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>, Error> {
    csv::Writer::from_path(path).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

fn write_rows<I, R>(path: &Path, header: &[&str], rows: I) -> Result<(), Error>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator,
    R::Item: AsRef<[u8]>,
{
    let wrap = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv_writer(path)?;
    w.write_record(header).map_err(wrap)?;
    for row in rows {
        w.write_record(row).map_err(wrap)?;
    }
    w.flush().map_err(io_err(path))
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Runs `config` and writes `frame_<k>.csv`, `trace.csv`, `events.csv` and
/// `manifest.json` into `out_dir`, creating it if needed.
pub fn simulate(config: ScenarioConfig, out_dir: &Path) -> Result<RunManifest, Error> {
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let started = Instant::now();
    let trace = run(config)?;
    let elapsed = started.elapsed().as_secs_f64();
    write_run(&trace, out_dir, elapsed)
}

/// Writes the outputs of an already finished run.
pub fn write_run(
    trace: &SimulationTrace,
    out_dir: &Path,
    wall_clock_seconds: f64,
) -> Result<RunManifest, Error> {
    let mut frames = Vec::with_capacity(trace.snapshots.len());
    for snap in &trace.snapshots {
        let name = format!("frame_{}.csv", snap.index);
        let hist = &snap.summary.histogram;
        let rows = hist
            .counts
            .iter()
            .enumerate()
            .map(|(k, c)| [hist.bin_lo(k).cents().to_string(), c.to_string()]);
        write_rows(&out_dir.join(&name), &["bin_lo", "count"], rows)?;
        frames.push(name);
    }

    let trace_file = "trace.csv".to_string();
    let rows = trace.snapshots.iter().map(|s| {
        let m = &s.summary.moments;
        [
            s.index.to_string(),
            s.transactions.to_string(),
            m.mean.to_string(),
            m.variance.to_string(),
            m.skewness.to_string(),
            s.summary.entropy.to_string(),
            opt(s.summary.fit.map(|f| f.temperature)),
            opt(s.summary.ks),
        ]
    });
    write_rows(
        &out_dir.join(&trace_file),
        &[
            "snapshot",
            "transactions",
            "mean",
            "variance",
            "skewness",
            "entropy",
            "fit_T",
            "ks",
        ],
        rows,
    )?;

    let events_file = "events.csv".to_string();
    let rows = trace.events.iter().map(|e| {
        [
            e.transactions.to_string(),
            format!("{:?}", e.kind).to_lowercase(),
            e.agents.to_string(),
            e.agent_delta.cents().to_string(),
            e.equity_delta.cents().to_string(),
            e.loans_delta.cents().to_string(),
        ]
    });
    write_rows(
        &out_dir.join(&events_file),
        &[
            "transactions",
            "kind",
            "agents",
            "agent_delta_cents",
            "equity_delta_cents",
            "loans_delta_cents",
        ],
        rows,
    )?;

    let last = trace.final_snapshot();
    let manifest = RunManifest {
        config: trace.config.clone(),
        seed: trace.config.seed,
        rng_algorithm: trace.rng_algorithm.clone(),
        code_version: CODE_VERSION.to_string(),
        frames,
        trace_file,
        events_file,
        final_summary: last.summary.clone(),
        theoretical: trace.theoretical,
        stationary: trace.stationary(STATIONARITY_EPSILON, STATIONARITY_WINDOW),
        stationarity_epsilon: STATIONARITY_EPSILON,
        stationarity_window: STATIONARITY_WINDOW,
        applied: trace.applied,
        blocked: trace.blocked,
        initial_audit: trace.snapshots[0].audit,
        final_audit: last.audit,
        conservation_holds: trace.conservation_holds(),
        wall_clock_seconds,
    };
    let path = out_dir.join("manifest.json");
    let file = File::create(&path).map_err(io_err(&path))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, &manifest).map_err(|source| Error::Json {
        path: path.clone(),
        source,
    })?;
    w.write_all(b"\n")
        .and_then(|_| w.flush())
        .map_err(io_err(&path))?;
    Ok(manifest)
}

/// Loads every table, then writes `lorenz_<year>.csv`, `slopes_<year>.csv`
/// and a `summary.csv` with one row per year.
pub fn analyze_energy(inputs: &[PathBuf], out_dir: &Path) -> Result<Vec<YearSummary>, Error> {
    let mut records = Vec::new();
    for path in inputs {
        let file = File::open(path).map_err(io_err(path))?;
        let mut table = load_energy_table(file).map_err(|source| Error::EnergyFile {
            path: path.clone(),
            source,
        })?;
        records.append(&mut table);
    }
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;

    let mut summaries = Vec::new();
    for (year, rows) in group_by_year(&records) {
        let (summary, curve) = summarize_year(year, &rows)?;
        write_rows(
            &out_dir.join(format!("lorenz_{year}.csv")),
            &["x", "y"],
            curve
                .points
                .iter()
                .map(|p| [p.x.to_string(), p.y.to_string()]),
        )?;
        write_rows(
            &out_dir.join(format!("slopes_{year}.csv")),
            &["x", "slope"],
            curve
                .slopes()
                .into_iter()
                .map(|(x, s)| [x.to_string(), s.to_string()]),
        )?;
        summaries.push(summary);
    }
    write_rows(
        &out_dir.join("summary.csv"),
        &["year", "world_mean_kw", "gini", "exponential_distance"],
        summaries.iter().map(|s| {
            [
                s.year.to_string(),
                s.world_mean_kw.to_string(),
                s.gini.to_string(),
                s.exponential_distance.to_string(),
            ]
        }),
    )?;
    Ok(summaries)
}
