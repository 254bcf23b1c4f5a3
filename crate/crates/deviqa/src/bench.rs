//! Pooling runtime benchmark: how long mean, SD, MAD and the joint SD+MAD
//! sweep take as the local-similarity size grows.
//!
//! Buffers are filled from a fixed seed and every timed call runs on the
//! normal strictly sequential reduction path, so rows are comparable across
//! strategies and runs. Timings use the monotonic clock and the median of the
//! timed runs; one warm-up call per (size, strategy) is discarded.

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::pooling::{dd_pool_joint, mad_pool, mean_pool, sd_pool};
use crate::synth::uniform_buffer;

/// Largest supported buffer (2^28 elements = 2 GiB of f64); larger requests
/// are refused before anything is allocated.
pub const MAX_LS_SIZE: usize = 1 << 28;

pub const DEFAULT_SEED: u64 = 0x1_5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchStrategy {
    Mean,
    Sd,
    Mad,
    /// One sweep producing MAD, SD and their blend (alpha = 0.5).
    DdJoint,
}

impl BenchStrategy {
    pub const ALL: [BenchStrategy; 4] = [
        BenchStrategy::Mean,
        BenchStrategy::Sd,
        BenchStrategy::Mad,
        BenchStrategy::DdJoint,
    ];
}

impl std::fmt::Display for BenchStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchStrategy::Mean => write!(f, "mean"),
            BenchStrategy::Sd => write!(f, "sd"),
            BenchStrategy::Mad => write!(f, "mad"),
            BenchStrategy::DdJoint => write!(f, "dd-joint"),
        }
    }
}

/// One benchmark measurement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchRow {
    pub ls_size: usize,
    pub strategy: BenchStrategy,
    pub median_seconds: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    /// Buffer sizes in elements; strictly increasing.
    pub sizes: Vec<usize>,
    /// Timed runs per (size, strategy); at least 5.
    pub runs: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![1 << 20, 1 << 21, 1 << 22, 1 << 23, 1 << 24],
            runs: 20,
            seed: DEFAULT_SEED,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.sizes.is_empty() {
            return Err(Error::invalid("bench needs at least one size"));
        }
        if self.runs < 5 {
            return Err(Error::invalid(format!("bench needs at least 5 runs, got {}", self.runs)));
        }
        for pair in self.sizes.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::invalid("bench sizes must be strictly increasing"));
            }
        }
        for &size in &self.sizes {
            if size == 0 {
                return Err(Error::invalid("bench sizes must be at least 1"));
            }
            if size > MAX_LS_SIZE || size.checked_mul(std::mem::size_of::<f64>()).is_none() {
                return Err(Error::invalid(format!(
                    "refusing LS size {size} before allocation: maximum is {MAX_LS_SIZE} elements"
                )));
            }
        }
        Ok(())
    }
}

/// Runs the benchmark; rows come back ordered by size, then by strategy in
/// [`BenchStrategy::ALL`] order.
///
/// Timed calls are interleaved round-robin across strategies so that load
/// drift on the host biases every strategy's median equally rather than
/// whichever one happened to run in a bad stretch.
pub fn run_pooling_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    config.validate()?;
    let mut rows = Vec::with_capacity(config.sizes.len() * BenchStrategy::ALL.len());
    for &size in &config.sizes {
        let buffer = uniform_buffer(size, config.seed);
        let mut samples: [Vec<f64>; 4] = Default::default();
        for strategy in BenchStrategy::ALL {
            // warm-up, discarded
            black_box(run_once(strategy, &buffer));
        }
        for _ in 0..config.runs {
            for (i, strategy) in BenchStrategy::ALL.into_iter().enumerate() {
                let start = Instant::now();
                black_box(run_once(strategy, &buffer));
                samples[i].push(start.elapsed().as_secs_f64());
            }
        }
        for (i, strategy) in BenchStrategy::ALL.into_iter().enumerate() {
            rows.push(BenchRow {
                ls_size: size,
                strategy,
                median_seconds: median(&mut samples[i]),
                runs: config.runs,
            });
        }
    }
    Ok(rows)
}

fn run_once(strategy: BenchStrategy, buffer: &[f64]) -> f64 {
    match strategy {
        BenchStrategy::Mean => mean_pool(buffer).expect("buffer is valid").value,
        BenchStrategy::Sd => sd_pool(buffer).expect("buffer is valid").value,
        BenchStrategy::Mad => mad_pool(buffer).expect("buffer is valid").value,
        BenchStrategy::DdJoint => dd_pool_joint(buffer, 0.5).expect("buffer is valid").dd.value,
    }
}

fn median(samples: &mut [f64]) -> f64 {
    samples.sort_by(f64::total_cmp);
    let n = samples.len();
    if n % 2 == 1 {
        samples[n / 2]
    } else {
        (samples[n / 2 - 1] + samples[n / 2]) / 2.0
    }
}

/// Writes rows as `ls_size,strategy,median_seconds,runs`.
pub fn write_bench_csv<W: Write>(rows: &[BenchRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "ls_size,strategy,median_seconds,runs")?;
    for row in rows {
        writeln!(
            w,
            "{},{},{},{}",
            row.ls_size, row.strategy, row.median_seconds, row.runs
        )?;
    }
    Ok(())
}
