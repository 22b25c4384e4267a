//! Timing harness comparing the incremental monitor with full recomputation.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bound::BoundFormula;
use crate::formula::{Cmp, Formula, Interval, Predicate};
use crate::monitor::{rosi_naive, Monitor, MonitorError, MonitorState, NaiveMonitor, Verdict};
use crate::signal::{Signal, VarBounds};

/// `G[0, n-w] C[0, w-1]^(w/2) (x > 0)`: every full window of an `n`-sample
/// trace must be positive at least half the time.
pub fn scaling_formula(n: usize, w: usize) -> Formula {
    Formula::always(
        Interval::new(0.0, (n - w) as f64),
        Formula::cumulative(
            Interval::new(0.0, (w - 1) as f64),
            (w / 2) as f64,
            Formula::atom(Predicate::simple("x", Cmp::Gt, 0.0)),
        ),
    )
}

/// Strictly positive univariate trace. Against [`scaling_formula`] the
/// verdict stays open until the last window has seen `w/2` samples.
pub fn positive_trace(n: usize, seed: u64) -> Signal {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..10.0)).collect();
    Signal::univariate("x", &values).expect("finite samples")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaiveMode {
    /// Push every sample through the recomputing monitor.
    Full,
    /// Time recomputation at `probes` evenly spaced prefixes and scale the
    /// mean to the whole stream.
    Sampled { probes: usize },
}

#[derive(Debug, Clone)]
pub struct EngineRun {
    pub total: Duration,
    pub samples: usize,
    pub verdict: Verdict,
}

impl EngineRun {
    pub fn per_sample(&self) -> Duration {
        self.total / self.samples.max(1) as u32
    }
}

#[derive(Debug, Clone)]
pub struct NaiveRun {
    /// Measured total, or the scaled estimate in sampled mode.
    pub total: Duration,
    pub samples: usize,
    /// `None` in sampled mode.
    pub verdict: Option<Verdict>,
    pub extrapolated: bool,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub worklist: EngineRun,
    pub naive: NaiveRun,
}

impl BenchReport {
    /// Naive overhead divided by worklist overhead.
    pub fn ratio(&self) -> f64 {
        self.naive.total.as_secs_f64() / self.worklist.total.as_secs_f64().max(1e-12)
    }
}

/// Streams `sig` through the incremental monitor until the verdict is final
/// or the trace ends.
pub fn run_worklist(
    f: &BoundFormula,
    sig: &Signal,
    bounds: &VarBounds,
) -> Result<EngineRun, MonitorError> {
    let start = Instant::now();
    let mut m = MonitorState::new(f.clone(), bounds);
    let mut samples = 0;
    for s in sig.samples() {
        samples += 1;
        if m.push_sample(s)?.is_final() {
            break;
        }
    }
    Ok(EngineRun {
        total: start.elapsed(),
        samples,
        verdict: m.finalize(),
    })
}

pub fn run_naive(
    f: &BoundFormula,
    sig: &Signal,
    bounds: &VarBounds,
    mode: NaiveMode,
    samples: usize,
) -> Result<NaiveRun, MonitorError> {
    match mode {
        NaiveMode::Full => {
            let start = Instant::now();
            let mut m = NaiveMonitor::new(f.clone(), bounds);
            for s in sig.samples().take(samples) {
                if m.push_sample(s)?.is_final() {
                    break;
                }
            }
            Ok(NaiveRun {
                total: start.elapsed(),
                samples,
                verdict: Some(m.finalize()),
                extrapolated: false,
            })
        }
        NaiveMode::Sampled { probes } => {
            let arity = sig.schema().len();
            let data: Vec<f64> = sig.samples().take(samples).flatten().copied().collect();
            let probes = probes.clamp(1, samples.max(1));
            let mut spent = Duration::ZERO;
            for j in 0..probes {
                let len = (samples * (j + 1) / probes).max(1);
                let start = Instant::now();
                std::hint::black_box(rosi_naive(f, &data[..len * arity], 0, bounds));
                spent += start.elapsed();
            }
            Ok(NaiveRun {
                total: spent.mul_f64(samples as f64 / probes as f64),
                samples,
                verdict: None,
                extrapolated: true,
            })
        }
    }
}

/// Runs both engines on the same input; the naive engine sees as many
/// samples as the worklist engine consumed.
pub fn compare(
    f: &BoundFormula,
    sig: &Signal,
    bounds: &VarBounds,
    mode: NaiveMode,
) -> Result<BenchReport, MonitorError> {
    let worklist = run_worklist(f, sig, bounds)?;
    let naive = run_naive(f, sig, bounds, mode, worklist.samples)?;
    Ok(BenchReport { worklist, naive })
}
