//! Synthetic traces with controlled cumulative excursions.
//!
//! Two families: instantaneous overvoltage against a staircase of cumulative
//! duration limits, and blood glucose against daily time-in-range targets.
//! Each generator embeds excursions at fixed positions on top of seeded
//! nominal noise and reports the largest per-window excursion counts found
//! in the written data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::signal::Signal;

#[derive(Debug, Error, PartialEq)]
pub enum ScenarioError {
    #[error("{name} = {value} is out of range: {reason}")]
    ParamOutOfRange {
        name: &'static str,
        value: String,
        reason: &'static str,
    },
}

fn out_of_range(name: &'static str, value: impl ToString, reason: &'static str) -> ScenarioError {
    ScenarioError::ParamOutOfRange {
        name,
        value: value.to_string(),
        reason,
    }
}

/// `len` consecutive samples held at `level`, starting at sample `start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Excursion {
    pub start: usize,
    pub len: usize,
    pub level: f64,
}

impl Excursion {
    /// Parses `start:len:level`.
    pub fn parse(text: &str) -> Option<Excursion> {
        let mut it = text.split(':');
        let e = Excursion {
            start: it.next()?.trim().parse().ok()?,
            len: it.next()?.trim().parse().ok()?,
            level: it.next()?.trim().parse().ok()?,
        };
        (it.next().is_none() && e.level.is_finite()).then_some(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScenarioKind {
    Overvoltage,
    Glucose,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioParams {
    pub kind: ScenarioKind,
    pub len: usize,
    /// Cumulative window length in samples.
    pub window: usize,
    /// Nominal band the noise stays in.
    pub band: (f64, f64),
    pub excursions: Vec<Excursion>,
    pub seed: u64,
}

impl ScenarioParams {
    pub fn overvoltage(len: usize) -> Self {
        ScenarioParams {
            kind: ScenarioKind::Overvoltage,
            len,
            window: 10_000,
            band: (0.9, 1.1),
            excursions: Vec::new(),
            seed: 0,
        }
    }

    pub fn glucose(len: usize) -> Self {
        ScenarioParams {
            kind: ScenarioKind::Glucose,
            len,
            window: GLUCOSE_DAY + 1,
            band: (90.0, 160.0),
            excursions: Vec::new(),
            seed: 0,
        }
    }

    pub fn with_excursion(mut self, start: usize, len: usize, level: f64) -> Self {
        self.excursions.push(Excursion { start, len, level });
        self
    }

    pub fn variable(&self) -> &'static str {
        match self.kind {
            ScenarioKind::Overvoltage => "v",
            ScenarioKind::Glucose => "bg",
        }
    }
}

/// Daily window of five-minute glucose samples.
pub const GLUCOSE_DAY: usize = 288;

/// Overvoltage duration limits, in samples per window: `(level, limit)` with
/// `v >= level` counted as an excursion.
pub const OVERVOLTAGE_LIMITS: [(f64, usize); 3] = [(1.7, 16), (1.4, 30), (1.3, 160)];

/// Largest number of samples matching a condition in any full window.
#[derive(Debug, Clone, PartialEq)]
pub struct ExcursionCount {
    pub label: String,
    pub max_in_window: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub window: usize,
    pub counts: Vec<ExcursionCount>,
}

impl ScenarioReport {
    pub fn count(&self, label: &str) -> Option<usize> {
        self.counts
            .iter()
            .find(|c| c.label == label)
            .map(|c| c.max_in_window)
    }
}

pub fn generate(p: &ScenarioParams) -> Result<(Signal, ScenarioReport), ScenarioError> {
    if p.len == 0 {
        return Err(out_of_range("len", p.len, "must be positive"));
    }
    if p.window == 0 || p.window > p.len {
        return Err(out_of_range("window", p.window, "must be in 1..=len"));
    }
    let (lo, hi) = p.band;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(out_of_range(
            "band",
            format!("{lo}:{hi}"),
            "needs finite lo <= hi",
        ));
    }
    for e in &p.excursions {
        if e.start + e.len > p.len {
            return Err(out_of_range(
                "excursion",
                format!("{}:{}:{}", e.start, e.len, e.level),
                "extends past the end of the trace",
            ));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut values: Vec<f64> = match p.kind {
        ScenarioKind::Overvoltage => (0..p.len).map(|_| rng.random_range(lo..=hi)).collect(),
        ScenarioKind::Glucose => {
            // Bounded random walk: glucose drifts rather than jumps.
            let mut x = (lo + hi) / 2.0;
            let stride = (hi - lo) / 20.0;
            (0..p.len)
                .map(|_| {
                    x = (x + rng.random_range(-stride..=stride)).clamp(lo, hi);
                    x
                })
                .collect()
        }
    };
    for e in &p.excursions {
        values[e.start..e.start + e.len].fill(e.level);
    }
    let report = report(p.kind, p.window, &values);
    let sig = Signal::new(
        vec![p.variable().to_string()],
        1.0,
        values.into_iter().map(|v| vec![v]).collect(),
    )
    .expect("generated samples are finite");
    Ok((sig, report))
}

type Condition = (String, Box<dyn Fn(f64) -> bool>);

/// Recomputes the per-window excursion counts of a univariate trace.
pub fn report(kind: ScenarioKind, window: usize, values: &[f64]) -> ScenarioReport {
    let conditions: Vec<Condition> = match kind {
        ScenarioKind::Overvoltage => {
            let mut c: Vec<Condition> = vec![("v>2".into(), Box::new(|v| v > 2.0))];
            for (level, _) in OVERVOLTAGE_LIMITS {
                c.push((format!("v>={level}"), Box::new(move |v| v >= level)));
            }
            c
        }
        ScenarioKind::Glucose => vec![
            ("bg<70".into(), Box::new(|v| v < 70.0)),
            ("bg>180".into(), Box::new(|v| v > 180.0)),
            (
                "bg outside 70..=180".into(),
                Box::new(|v| !(70.0..=180.0).contains(&v)),
            ),
        ],
    };
    let counts = conditions
        .into_iter()
        .map(|(label, cond)| ExcursionCount {
            label,
            max_in_window: max_window_count(values, window, cond),
        })
        .collect();
    ScenarioReport { window, counts }
}

fn max_window_count(values: &[f64], window: usize, cond: impl Fn(f64) -> bool) -> usize {
    let hits: Vec<bool> = values.iter().map(|&v| cond(v)).collect();
    let mut count = hits[..window].iter().filter(|&&h| h).count();
    let mut best = count;
    for i in window..hits.len() {
        count += hits[i] as usize;
        count -= hits[i - window] as usize;
        best = best.max(count);
    }
    best
}

/// `G` over every full window of the trace: the conjunction of the hard
/// ceiling and the three cumulative duration limits.
pub fn overvoltage_formula(len: usize, window: usize) -> String {
    let cum = OVERVOLTAGE_LIMITS
        .iter()
        .map(|(level, limit)| format!("C[0,{}]^({window}-{limit}) (v < {level})", window - 1))
        .collect::<Vec<_>>()
        .join(" && ");
    format!("G[0,{}] (v <= 2 && {cum})", len - window)
}

/// Daily time-below-range, time-above-range and time-in-range requirements,
/// each as its own formula, then their conjunction, then the conjunction
/// held over `hold` consecutive samples.
pub fn glucose_formulas(day: usize, hold: usize) -> Vec<(String, String)> {
    let hypo = format!("!C[0,{day}]^(0.04*{day}) (bg < 70)");
    let hyper = format!("!C[0,{day}]^(0.25*{day}) (bg > 180)");
    let eu = format!("C[0,{day}]^(0.7*{day}) (bg >= 70 && bg <= 180)");
    let all = format!("{hypo} && {hyper} && {eu}");
    let held = format!("G[0,{hold}] ({all})");
    vec![
        ("hypo".into(), hypo),
        ("hyper".into(), hyper),
        ("euglycemia".into(), eu),
        ("daily".into(), all),
        ("held".into(), held),
    ]
}
