use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SignalError {
    #[error("signal has no variables")]
    EmptySchema,
    #[error("signal has no samples")]
    NoSamples,
    #[error("step must be a positive finite number, got {0}")]
    InvalidStep(f64),
    #[error("sample {index} has {got} values, schema has {expected}")]
    ArityMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("sample {index} holds a non-finite value for `{var}`")]
    NonFinite { index: usize, var: String },
    #[error("duplicate variable `{0}` in schema")]
    DuplicateVariable(String),
}

/// Finite, uniformly sampled multivariate trace. Samples are stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    schema: Vec<String>,
    step: f64,
    data: Vec<f64>,
}

impl Signal {
    pub fn new(schema: Vec<String>, step: f64, rows: Vec<Vec<f64>>) -> Result<Self, SignalError> {
        check_schema(&schema)?;
        check_step(step)?;
        if rows.is_empty() {
            return Err(SignalError::NoSamples);
        }
        let mut data = Vec::with_capacity(rows.len() * schema.len());
        for (index, row) in rows.iter().enumerate() {
            check_row(&schema, index, row)?;
            data.extend_from_slice(row);
        }
        Ok(Signal { schema, step, data })
    }

    /// Builds a signal from already validated row-major data.
    pub(crate) fn from_flat(schema: Vec<String>, step: f64, data: Vec<f64>) -> Self {
        debug_assert!(
            !schema.is_empty() && !data.is_empty() && data.len().is_multiple_of(schema.len())
        );
        Signal { schema, step, data }
    }

    /// Single-variable signal with unit step.
    pub fn univariate(name: &str, values: &[f64]) -> Result<Self, SignalError> {
        Signal::new(
            vec![name.to_string()],
            1.0,
            values.iter().map(|&v| vec![v]).collect(),
        )
    }

    pub fn with_step(mut self, step: f64) -> Result<Self, SignalError> {
        check_step(step)?;
        self.step = step;
        Ok(self)
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.schema.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn sample(&self, t: usize) -> &[f64] {
        let a = self.schema.len();
        &self.data[t * a..(t + 1) * a]
    }

    pub fn samples(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.schema.len())
    }

    pub fn column(&self, var: &str) -> Option<Vec<f64>> {
        let idx = self.schema.iter().position(|v| v == var)?;
        Some(self.samples().map(|s| s[idx]).collect())
    }

    /// Prefix of the first `len` samples (at least one).
    pub fn prefix(&self, len: usize) -> Signal {
        let len = len.clamp(1, self.len());
        Signal {
            schema: self.schema.clone(),
            step: self.step,
            data: self.data[..len * self.schema.len()].to_vec(),
        }
    }
}

pub(crate) fn check_schema(schema: &[String]) -> Result<(), SignalError> {
    if schema.is_empty() {
        return Err(SignalError::EmptySchema);
    }
    for (i, name) in schema.iter().enumerate() {
        if schema[..i].contains(name) {
            return Err(SignalError::DuplicateVariable(name.clone()));
        }
    }
    Ok(())
}

pub(crate) fn check_step(step: f64) -> Result<(), SignalError> {
    if step.is_finite() && step > 0.0 {
        Ok(())
    } else {
        Err(SignalError::InvalidStep(step))
    }
}

pub(crate) fn check_row(schema: &[String], index: usize, row: &[f64]) -> Result<(), SignalError> {
    if row.len() != schema.len() {
        return Err(SignalError::ArityMismatch {
            index,
            expected: schema.len(),
            got: row.len(),
        });
    }
    if let Some(pos) = row.iter().position(|v| !v.is_finite()) {
        return Err(SignalError::NonFinite {
            index,
            var: schema[pos].clone(),
        });
    }
    Ok(())
}

/// Declared value range of each signal variable. Unlisted variables are
/// unbounded. Monitors use these ranges to describe samples that have not
/// arrived yet; every sample pushed must respect them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct VarBounds {
    ranges: BTreeMap<String, (f64, f64)>,
}

#[derive(Debug, Error, PartialEq)]
pub enum BoundsError {
    #[error("bounds for `{var}` are empty or inverted: [{lo}, {hi}]")]
    Inverted { var: String, lo: f64, hi: f64 },
    #[error("bounds for `{0}` contain NaN")]
    NaN(String),
    #[error("cannot parse bounds `{0}`, expected var=lo:hi")]
    Syntax(String),
}

impl VarBounds {
    pub fn unbounded() -> Self {
        VarBounds::default()
    }

    pub fn set(&mut self, var: &str, lo: f64, hi: f64) -> Result<(), BoundsError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(BoundsError::NaN(var.to_string()));
        }
        if lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(BoundsError::Inverted {
                var: var.to_string(),
                lo,
                hi,
            });
        }
        self.ranges.insert(var.to_string(), (lo, hi));
        Ok(())
    }

    pub fn with(mut self, var: &str, lo: f64, hi: f64) -> Result<Self, BoundsError> {
        self.set(var, lo, hi)?;
        Ok(self)
    }

    pub fn get(&self, var: &str) -> (f64, f64) {
        self.ranges
            .get(var)
            .copied()
            .unwrap_or((f64::NEG_INFINITY, f64::INFINITY))
    }

    /// Parses `var=lo:hi`; either side may be empty or `inf`/`-inf`.
    pub fn parse_bound(&mut self, text: &str) -> Result<(), BoundsError> {
        let err = || BoundsError::Syntax(text.to_string());
        let (var, range) = text.split_once('=').ok_or_else(err)?;
        let (lo, hi) = range.split_once(':').ok_or_else(err)?;
        let num = |s: &str, default: f64| -> Result<f64, BoundsError> {
            let s = s.trim();
            if s.is_empty() {
                Ok(default)
            } else {
                s.parse::<f64>().map_err(|_| err())
            }
        };
        let var = var.trim();
        if var.is_empty() {
            return Err(err());
        }
        self.set(var, num(lo, f64::NEG_INFINITY)?, num(hi, f64::INFINITY)?)
    }
}
