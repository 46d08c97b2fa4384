//! Country-level energy tables: population-weighted Lorenz curves, Gini
//! coefficients, world averages and distance to the exponential law.
//!
//! Input is UTF-8 CSV with the header `year,country,population,kw_per_capita`.

use std::collections::BTreeMap;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stats::{LorenzCurve, LorenzPoint};

pub const ENERGY_HEADER: [&str; 4] = ["year", "country", "population", "kw_per_capita"];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("expected header `year,country,population,kw_per_capita`, found `{found}`")]
    Header { found: String },
    #[error("line {line}, column {column}: {message}")]
    Row {
        line: u64,
        column: String,
        message: String,
    },
    #[error("line {line}: malformed CSV: {message}")]
    Csv { line: u64, message: String },
    #[error("energy table has no rows")]
    Empty,
    #[error("total consumption is zero")]
    ZeroConsumption,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyRecord {
    pub year: i32,
    pub country: String,
    pub population: u64,
    pub kw_per_capita: f64,
}

impl EnergyRecord {
    pub fn new(year: i32, country: impl Into<String>, population: u64, kw_per_capita: f64) -> Self {
        EnergyRecord {
            year,
            country: country.into(),
            population,
            kw_per_capita,
        }
    }
}

fn row_error(line: u64, column: &str, message: impl Into<String>) -> EnergyError {
    EnergyError::Row {
        line,
        column: column.to_string(),
        message: message.into(),
    }
}

/// Reads an energy table. Line numbers in diagnostics count the header as line 1.
pub fn load_energy_table<R: Read>(source: R) -> Result<Vec<EnergyRecord>, EnergyError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let csv_error = |e: csv::Error| EnergyError::Csv {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    };
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.iter().ne(ENERGY_HEADER.iter().copied()) {
        if header.is_empty() {
            return Err(EnergyError::Empty);
        }
        return Err(EnergyError::Header {
            found: header.iter().collect::<Vec<_>>().join(","),
        });
    }

    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map_or(0, |p| p.line());
        let year = row[0].parse::<i32>().map_err(|_| {
            row_error(
                line,
                "year",
                format!("expected an integer, found `{}`", &row[0]),
            )
        })?;
        let country = row[1].to_string();
        if country.is_empty() {
            return Err(row_error(line, "country", "empty label"));
        }
        let population = row[2].parse::<u64>().map_err(|_| {
            row_error(
                line,
                "population",
                format!("expected a positive integer, found `{}`", &row[2]),
            )
        })?;
        if population == 0 {
            return Err(row_error(
                line,
                "population",
                format!("population of `{country}` must be positive"),
            ));
        }
        let kw_per_capita = match row[3].parse::<f64>() {
            Ok(v) if v.is_finite() && v >= 0.0 => v,
            _ => {
                return Err(row_error(
                    line,
                    "kw_per_capita",
                    format!("expected a finite number >= 0, found `{}`", &row[3]),
                ))
            }
        };
        records.push(EnergyRecord {
            year,
            country,
            population,
            kw_per_capita,
        });
    }
    if records.is_empty() {
        return Err(EnergyError::Empty);
    }
    Ok(records)
}

/// Population-weighted mean consumption per capita, in kW.
pub fn world_average(records: &[EnergyRecord]) -> Result<f64, EnergyError> {
    if records.is_empty() {
        return Err(EnergyError::Empty);
    }
    let population: f64 = records.iter().map(|r| r.population as f64).sum();
    let energy: f64 = records
        .iter()
        .map(|r| r.population as f64 * r.kw_per_capita)
        .sum();
    Ok(energy / population)
}

/// Records grouped by consumption level, ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDistribution {
    /// Input records ordered by consumption, ties by country label.
    pub records: Vec<EnergyRecord>,
    /// Distinct consumption levels with their summed population.
    pub levels: Vec<(f64, u64)>,
    pub total_population: u64,
    pub world_mean: f64,
}

impl WeightedDistribution {
    pub fn new(records: &[EnergyRecord]) -> Result<Self, EnergyError> {
        if records.is_empty() {
            return Err(EnergyError::Empty);
        }
        let mut sorted = records.to_vec();
        sorted.sort_by(|a, b| {
            a.kw_per_capita
                .total_cmp(&b.kw_per_capita)
                .then_with(|| a.country.cmp(&b.country))
        });
        let mut levels: Vec<(f64, u64)> = Vec::new();
        for r in &sorted {
            match levels.last_mut() {
                Some((kw, pop)) if *kw == r.kw_per_capita => *pop += r.population,
                _ => levels.push((r.kw_per_capita, r.population)),
            }
        }
        let total_population = levels.iter().map(|l| l.1).sum();
        let world_mean = world_average(&sorted)?;
        Ok(WeightedDistribution {
            records: sorted,
            levels,
            total_population,
            world_mean,
        })
    }

    pub fn lorenz(&self) -> Result<LorenzCurve, EnergyError> {
        let total_energy: f64 = self.levels.iter().map(|&(kw, p)| kw * p as f64).sum();
        if total_energy <= 0.0 {
            return Err(EnergyError::ZeroConsumption);
        }
        let total_population = self.total_population as f64;
        let mut points = Vec::with_capacity(self.levels.len() + 1);
        points.push(LorenzPoint { x: 0.0, y: 0.0 });
        let (mut people, mut energy) = (0u64, 0.0);
        for &(kw, p) in &self.levels {
            people += p;
            energy += kw * p as f64;
            points.push(LorenzPoint {
                x: people as f64 / total_population,
                y: energy / total_energy,
            });
        }
        if let Some(last) = points.last_mut() {
            last.y = 1.0;
        }
        Ok(LorenzCurve::from_points(points))
    }

    /// Sup distance between the population-weighted CDF of `kw / world_mean`
    /// and `1 - exp(-u)`, including left limits at every step.
    pub fn exponential_distance(&self) -> Result<f64, EnergyError> {
        if self.world_mean <= 0.0 {
            return Err(EnergyError::ZeroConsumption);
        }
        let total = self.total_population as f64;
        let mut below = 0u64;
        let mut sup: f64 = 0.0;
        for &(kw, p) in &self.levels {
            let model = -(-kw / self.world_mean).exp_m1();
            let left = below as f64 / total;
            below += p;
            let right = below as f64 / total;
            sup = sup.max((left - model).abs()).max((right - model).abs());
        }
        Ok(sup)
    }
}

pub fn weighted_lorenz(records: &[EnergyRecord]) -> Result<LorenzCurve, EnergyError> {
    WeightedDistribution::new(records)?.lorenz()
}

pub fn weighted_gini(records: &[EnergyRecord]) -> Result<f64, EnergyError> {
    Ok(weighted_lorenz(records)?.gini)
}

pub fn exponential_distance(records: &[EnergyRecord]) -> Result<f64, EnergyError> {
    WeightedDistribution::new(records)?.exponential_distance()
}

/// Splits records by year, preserving row order inside each year.
pub fn group_by_year(records: &[EnergyRecord]) -> BTreeMap<i32, Vec<EnergyRecord>> {
    let mut years: BTreeMap<i32, Vec<EnergyRecord>> = BTreeMap::new();
    for r in records {
        years.entry(r.year).or_default().push(r.clone());
    }
    years
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YearSummary {
    pub year: i32,
    pub world_mean_kw: f64,
    pub gini: f64,
    pub exponential_distance: f64,
}

pub fn summarize_year(
    year: i32,
    records: &[EnergyRecord],
) -> Result<(YearSummary, LorenzCurve), EnergyError> {
    let dist = WeightedDistribution::new(records)?;
    let curve = dist.lorenz()?;
    let summary = YearSummary {
        year,
        world_mean_kw: dist.world_mean,
        gini: curve.gini,
        exponential_distance: dist.exponential_distance()?,
    };
    Ok((summary, curve))
}

/// A table whose per-capita values sit at the midpoint quantiles of an
/// exponential law with mean `mean_kw`, every country with the same population.
pub fn exponential_table(
    year: i32,
    countries: usize,
    mean_kw: f64,
    population: u64,
) -> Vec<EnergyRecord> {
    (0..countries)
        .map(|i| {
            let q = (i as f64 + 0.5) / countries as f64;
            EnergyRecord::new(
                year,
                format!("C{i:04}"),
                population,
                -mean_kw * (-q).ln_1p(),
            )
        })
        .collect()
}
