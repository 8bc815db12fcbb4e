//! Benchmark runs over instance families.
//!
//! Each configuration is a list of family sizes run in increasing order. For
//! every size, `instances` seeded pairs of each requested polarity are
//! generated and decided; only the decision itself is timed. Once an instance
//! of some size times out, the larger sizes of that configuration are skipped.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{Family, FamilySpec, InstancePair};
use crate::matcher::{are_isomorphic, MatchOptions, MatchOutcome};

/// Standard deviation divisor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Divisor {
    /// Divide by the number of samples.
    #[default]
    Population,
    /// Divide by one less than the number of samples.
    Sample,
}

fn mean_and_sd(samples: &[f64], divisor: Divisor) -> Option<(f64, f64)> {
    if samples.is_empty() {
        return None;
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let denom = match divisor {
        Divisor::Population => n,
        Divisor::Sample if samples.len() > 1 => n - 1.0,
        Divisor::Sample => return Some((mean, 0.0)),
    };
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / denom;
    Some((mean, var.sqrt()))
}

/// Standard deviation over mean, with the population divisor. `None` for an
/// empty list or a zero mean.
pub fn nsd(samples: &[f64]) -> Option<f64> {
    nsd_with(samples, Divisor::Population)
}

pub fn nsd_with(samples: &[f64], divisor: Divisor) -> Option<f64> {
    let (mean, sd) = mean_and_sd(samples, divisor)?;
    (mean != 0.0).then(|| sd / mean)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub family: String,
    /// Vertex count.
    pub size: usize,
    pub instance: usize,
    pub seed: u64,
    pub positive: bool,
    /// `None` when the run timed out.
    pub decision: Option<bool>,
    pub timed_out: bool,
    /// Seconds spent deciding, excluding generation.
    pub time: f64,
    pub calls: u64,
    pub backjumps: u64,
    pub levels_skipped: u64,
    /// Same instance with backjumping disabled, when paired runs are on.
    pub calls_without_backjump: Option<u64>,
    pub time_without_backjump: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub family: String,
    pub size: usize,
    pub positive: bool,
    pub count: usize,
    pub timed_out: usize,
    /// Over completed runs only.
    pub mean_time: Option<f64>,
    pub std_dev: Option<f64>,
    pub nsd: Option<f64>,
    pub mean_calls: Option<f64>,
    pub mean_calls_without_backjump: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub divisor: Divisor,
    pub rows: Vec<SummaryRow>,
}

fn mean_u64(xs: impl Iterator<Item = u64>) -> Option<f64> {
    let v: Vec<f64> = xs.map(|x| x as f64).collect();
    mean_and_sd(&v, Divisor::Population).map(|(m, _)| m)
}

/// Groups records by (family, size, polarity) in order of first appearance.
pub fn summarize(records: &[BenchRecord], divisor: Divisor) -> BenchSummary {
    let mut keys: Vec<(&str, usize, bool)> = Vec::new();
    for r in records {
        let key = (r.family.as_str(), r.size, r.positive);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    let rows = keys
        .into_iter()
        .map(|(family, size, positive)| {
            let group: Vec<&BenchRecord> = records
                .iter()
                .filter(|r| r.family == family && r.size == size && r.positive == positive)
                .collect();
            let done: Vec<&&BenchRecord> = group.iter().filter(|r| !r.timed_out).collect();
            let times: Vec<f64> = done.iter().map(|r| r.time).collect();
            let stats = mean_and_sd(&times, divisor);
            SummaryRow {
                family: family.to_string(),
                size,
                positive,
                count: group.len(),
                timed_out: group.len() - done.len(),
                mean_time: stats.map(|s| s.0),
                std_dev: stats.map(|s| s.1),
                nsd: nsd_with(&times, divisor),
                mean_calls: mean_u64(done.iter().map(|r| r.calls)),
                mean_calls_without_backjump: mean_u64(
                    done.iter().filter_map(|r| r.calls_without_backjump),
                ),
            }
        })
        .collect();
    BenchSummary { divisor, rows }
}

/// One JSON object per line.
pub fn records_to_jsonl(records: &[BenchRecord]) -> String {
    records
        .iter()
        .map(|r| serde_json::to_string(r).expect("records serialize") + "\n")
        .collect()
}

pub fn records_from_jsonl(text: &str) -> Result<Vec<BenchRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| Error::parse(i + 1, e.to_string())))
        .collect()
}

/// Sizes of one family, run smallest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub sizes: Vec<Family>,
}

#[derive(Debug, Clone)]
pub struct BenchPlan {
    pub configs: Vec<BenchConfig>,
    /// Instances per size and polarity.
    pub instances: usize,
    pub seed: u64,
    pub timeout: Duration,
    pub positive: bool,
    pub negative: bool,
    /// Also run every instance with backjumping disabled.
    pub compare_backjump: bool,
    pub orbit_pruning: bool,
    /// Decide instances concurrently; times are then not comparable.
    pub parallel: bool,
}

impl Default for BenchPlan {
    fn default() -> Self {
        BenchPlan {
            configs: Vec::new(),
            instances: 10,
            seed: 0,
            timeout: Duration::from_secs(10),
            positive: true,
            negative: true,
            compare_backjump: true,
            orbit_pruning: true,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub records: Vec<BenchRecord>,
    pub summary: BenchSummary,
}

fn timed(
    pair: &InstancePair,
    options: MatchOptions,
    timeout: Duration,
) -> Result<Option<(MatchOutcome, f64)>> {
    let start = Instant::now();
    match are_isomorphic(
        &pair.g,
        &pair.h,
        MatchOptions {
            deadline: Some(start + timeout),
            ..options
        },
    ) {
        Ok(out) => Ok(Some((out, start.elapsed().as_secs_f64()))),
        Err(Error::Timeout) => Ok(None),
        Err(e) => Err(e),
    }
}

fn run_instance(plan: &BenchPlan, spec: FamilySpec, instance: usize) -> Result<BenchRecord> {
    let pair = spec.pair()?;
    let options = MatchOptions::default().with_orbit_pruning(plan.orbit_pruning);
    let mut record = BenchRecord {
        family: spec.family.id().to_string(),
        size: spec.family.vertex_count(),
        instance,
        seed: spec.seed,
        positive: !spec.negative,
        decision: None,
        timed_out: true,
        time: plan.timeout.as_secs_f64(),
        calls: 0,
        backjumps: 0,
        levels_skipped: 0,
        calls_without_backjump: None,
        time_without_backjump: None,
    };
    let Some((with, time)) = timed(&pair, options, plan.timeout)? else {
        return Ok(record);
    };
    if with.is_isomorphic() != pair.isomorphic {
        return Err(Error::Internal(format!(
            "{} instance {instance} (seed {}) decided {} but was built {}",
            record.family,
            spec.seed,
            with.is_isomorphic(),
            pair.isomorphic
        )));
    }
    record.decision = Some(with.is_isomorphic());
    record.timed_out = false;
    record.time = time;
    record.calls = with.stats.calls;
    record.backjumps = with.stats.backjumps;
    record.levels_skipped = with.stats.levels_skipped;
    if plan.compare_backjump {
        if let Some((without, t)) = timed(&pair, options.with_backjump(false), plan.timeout)? {
            if without.is_isomorphic() != with.is_isomorphic()
                || without.stats.calls < with.stats.calls
            {
                return Err(Error::Internal(format!(
                    "backjumping changed the outcome of {} instance {instance} (seed {}): {:?} vs {:?}",
                    record.family, spec.seed, with.stats, without.stats
                )));
            }
            record.calls_without_backjump = Some(without.stats.calls);
            record.time_without_backjump = Some(t);
        }
    }
    Ok(record)
}

/// Runs `plan`, handing each record to `sink` as soon as its size finishes.
pub fn run_bench_with(
    plan: &BenchPlan,
    sink: &mut dyn FnMut(&BenchRecord) -> Result<()>,
) -> Result<Vec<BenchRecord>> {
    let mut polarities = Vec::new();
    if plan.positive {
        polarities.push(false);
    }
    if plan.negative {
        polarities.push(true);
    }
    let mut all = Vec::new();
    for config in &plan.configs {
        for &family in &config.sizes {
            let jobs: Vec<(FamilySpec, usize)> = (0..plan.instances)
                .flat_map(|i| {
                    let seed = plan.seed.wrapping_add(i as u64);
                    polarities
                        .iter()
                        .map(move |&neg| (FamilySpec::new(family, neg, seed), i))
                })
                .collect();
            let batch: Vec<BenchRecord> = if plan.parallel {
                jobs.par_iter()
                    .map(|&(s, i)| run_instance(plan, s, i))
                    .collect::<Result<_>>()?
            } else {
                jobs.iter()
                    .map(|&(s, i)| run_instance(plan, s, i))
                    .collect::<Result<_>>()?
            };
            for r in &batch {
                sink(r)?;
            }
            let stop = batch.iter().any(|r| r.timed_out);
            all.extend(batch);
            if stop {
                break;
            }
        }
    }
    Ok(all)
}

pub fn run_bench(plan: &BenchPlan) -> Result<BenchReport> {
    let records = run_bench_with(plan, &mut |_| Ok(()))?;
    let summary = summarize(&records, Divisor::Population);
    Ok(BenchReport { records, summary })
}
