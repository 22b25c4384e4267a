//! CSV signals, line-delimited monitor events and worklist snapshots.
//!
//! A signal file has a header row naming the variables and one row per
//! sample. An optional first column named `t` must be uniformly spaced; it
//! supplies the step when none is given and is otherwise checked against it.

use std::collections::VecDeque;
use std::io::{Read, Write};

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::bound::NodeId;
use crate::monitor::{MonitorState, Outcome, Verdict};
use crate::signal::{check_schema, check_step, Signal, SignalError};

/// Relative tolerance on the spacing of the `t` column.
pub const TIME_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}: {message}")]
    Malformed { line: u64, message: String },
    #[error("line {line}: `{value}` in column `{column}` is not a finite number")]
    NotNumeric {
        line: u64,
        column: String,
        value: String,
    },
    #[error("line {line}: expected {expected} fields, found {found}")]
    Arity {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: time {found} breaks the uniform spacing (expected {expected})")]
    NonUniformTime {
        line: u64,
        expected: f64,
        found: f64,
    },
    #[error("the `t` column must increase, got step {0}")]
    TimeNotIncreasing(f64),
    #[error("invalid header: {0}")]
    Header(SignalError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn malformed(line: u64, err: csv::Error) -> IoError {
    IoError::Malformed {
        line,
        message: err.to_string(),
    }
}

/// Reads samples one row at a time, so that a monitor can consume a stream
/// as it arrives.
pub struct SampleReader<R: Read> {
    rows: csv::StringRecordsIntoIter<R>,
    schema: Vec<String>,
    has_time: bool,
    step: Option<f64>,
    /// Rows already read while inferring the step, with their line numbers.
    ahead: VecDeque<(u64, Vec<f64>)>,
    prev_time: Option<f64>,
    line: u64,
}

impl<R: Read> SampleReader<R> {
    /// Reads the header. Completely empty input gives a reader with no
    /// variables and no rows.
    pub fn new(input: R, step: Option<f64>) -> Result<Self, IoError> {
        if let Some(s) = step {
            check_step(s)?;
        }
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(input);
        let header = rdr.headers().map_err(|e| malformed(1, e))?.clone();
        let mut schema: Vec<String> = header.iter().map(str::to_string).collect();
        let has_time = schema.first().is_some_and(|c| c == "t");
        if has_time {
            schema.remove(0);
        }
        if !header.is_empty() {
            check_schema(&schema).map_err(IoError::Header)?;
        }
        Ok(SampleReader {
            rows: rdr.into_records(),
            schema,
            has_time,
            step,
            ahead: VecDeque::new(),
            prev_time: None,
            line: 1,
        })
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    pub fn has_time(&self) -> bool {
        self.has_time
    }

    /// Line number of the most recently returned row (the header is line 1).
    pub fn line(&self) -> u64 {
        self.line
    }

    /// The sampling step: the one given, else the spacing of the first two
    /// `t` values, else 1. May read one row ahead.
    pub fn step(&mut self) -> Result<f64, IoError> {
        if let Some(s) = self.step {
            return Ok(s);
        }
        if self.has_time {
            while self.ahead.len() < 2 {
                match self.read_row()? {
                    Some(row) => self.ahead.push_back(row),
                    None => break,
                }
            }
        }
        let inferred = if self.has_time && self.ahead.len() >= 2 {
            self.ahead[1].1[0] - self.ahead[0].1[0]
        } else {
            1.0
        };
        if !(inferred > 0.0 && inferred.is_finite()) {
            return Err(IoError::TimeNotIncreasing(inferred));
        }
        self.step = Some(inferred);
        Ok(inferred)
    }

    /// Next sample without the `t` column, or `None` at end of input.
    pub fn next_sample(&mut self) -> Result<Option<Vec<f64>>, IoError> {
        let step = self.step()?;
        let next = match self.ahead.pop_front() {
            Some(row) => Some(row),
            None => self.read_row()?,
        };
        let Some((line, mut row)) = next else {
            return Ok(None);
        };
        self.line = line;
        if self.has_time {
            let t = row.remove(0);
            if let Some(prev) = self.prev_time {
                let gap = t - prev;
                if (gap - step).abs() > TIME_TOLERANCE * step.abs() {
                    return Err(IoError::NonUniformTime {
                        line,
                        expected: prev + step,
                        found: t,
                    });
                }
            }
            self.prev_time = Some(t);
        }
        Ok(Some(row))
    }

    /// Parses the next raw row, `t` column included.
    fn read_row(&mut self) -> Result<Option<(u64, Vec<f64>)>, IoError> {
        let Some(rec) = self.rows.next() else {
            return Ok(None);
        };
        let line_hint = self.ahead.back().map_or(self.line, |(l, _)| *l) + 1;
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(line_hint, |p| p.line());
            malformed(line, e)
        })?;
        let line = rec.position().map_or(line_hint, |p| p.line());
        let expected = self.schema.len() + self.has_time as usize;
        if rec.len() != expected {
            return Err(IoError::Arity {
                line,
                expected,
                found: rec.len(),
            });
        }
        let mut row = Vec::with_capacity(expected);
        for (j, field) in rec.iter().enumerate() {
            let v: f64 = field
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| IoError::NotNumeric {
                    line,
                    column: self.column_name(j),
                    value: field.to_string(),
                })?;
            row.push(v);
        }
        Ok(Some((line, row)))
    }

    fn column_name(&self, j: usize) -> String {
        match (self.has_time, j) {
            (true, 0) => "t".to_string(),
            (true, j) => self.schema[j - 1].clone(),
            (false, j) => self.schema[j].clone(),
        }
    }
}

/// Reads a whole signal file.
pub fn read_signal<R: Read>(input: R, step: Option<f64>) -> Result<Signal, IoError> {
    let mut rdr = SampleReader::new(input, step)?;
    let step = rdr.step()?;
    let mut rows = Vec::new();
    while let Some(row) = rdr.next_sample()? {
        rows.push(row);
    }
    Ok(Signal::new(rdr.schema().to_vec(), step, rows)?)
}

/// Writes `sig` as CSV, with a leading `t` column when `time` is set.
pub fn write_signal<W: Write>(out: W, sig: &Signal, time: bool) -> Result<(), IoError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = Vec::new();
    if time {
        header.push("t");
    }
    header.extend(sig.schema().iter().map(String::as_str));
    w.write_record(&header)?;
    for (i, s) in sig.samples().enumerate() {
        let mut rec: Vec<String> = Vec::with_capacity(s.len() + 1);
        if time {
            rec.push((i as f64 * sig.step()).to_string());
        }
        rec.extend(s.iter().map(f64::to_string));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Infinite bounds become the strings `"inf"` and `"-inf"`, which JSON
/// numbers cannot express.
fn number<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else if *v < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("nan")
    }
}

fn outcome<S: Serializer>(o: &Outcome, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(o)
}

/// One processed sample: its index, the root interval and the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonitorEvent {
    pub i: usize,
    #[serde(serialize_with = "number")]
    pub lb: f64,
    #[serde(serialize_with = "number")]
    pub ub: f64,
    #[serde(serialize_with = "outcome")]
    pub verdict: Outcome,
    pub decided: bool,
}

impl MonitorEvent {
    pub fn new(i: usize, v: &Verdict) -> Self {
        MonitorEvent {
            i,
            lb: v.rosi.lb,
            ub: v.rosi.ub,
            verdict: v.outcome,
            decided: v.is_final(),
        }
    }

    /// Writes the event as one JSON line.
    pub fn write_line<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer(&mut out, self)?;
        out.write_all(b"\n")
    }
}

/// Per-node worklist snapshots as CSV rows `node,t,i,lb,ub`, where `i` is
/// the index of the last sample received.
pub struct TraceWriter<W: Write> {
    out: csv::Writer<W>,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Result<Self, IoError> {
        let mut out = csv::Writer::from_writer(out);
        out.write_record(["node", "t", "i", "lb", "ub"])?;
        Ok(TraceWriter { out })
    }

    pub fn snapshot(&mut self, m: &mut MonitorState, i: usize) -> Result<(), IoError> {
        for id in 0..m.formula().len() {
            for (t, r) in m.worklist(NodeId(id)) {
                self.out.write_record([
                    id.to_string(),
                    t.to_string(),
                    i.to_string(),
                    r.lb.to_string(),
                    r.ub.to_string(),
                ])?;
            }
        }
        Ok(())
    }

    pub fn finish(mut self) -> Result<W, IoError> {
        self.out.flush()?;
        self.out
            .into_inner()
            .map_err(|e| IoError::Io(e.into_error()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monitor::{new_monitor, Monitor};
    use crate::signal::VarBounds;

    fn read(text: &str, step: Option<f64>) -> Result<Signal, IoError> {
        read_signal(text.as_bytes(), step)
    }

    #[test]
    fn plain_columns() {
        let sig = read("x, y\n1,2\n3 ,4\n", None).unwrap();
        assert_eq!(sig.schema(), ["x", "y"]);
        assert_eq!(sig.step(), 1.0);
        assert_eq!(sig.sample(1), [3.0, 4.0]);
    }

    #[test]
    fn time_column_sets_step() {
        let sig = read("t,x\n0,1\n0.5,2\n1.0,3\n", None).unwrap();
        assert_eq!(sig.schema(), ["x"]);
        assert_eq!(sig.step(), 0.5);
        assert_eq!(sig.len(), 3);
        assert!(read("t,x\n0,1\n0.5,2\n1.0,3\n", Some(0.5)).is_ok());
        let err = read("t,x\n0,1\n0.5,2\n1.0,3\n", Some(1.0)).unwrap_err();
        assert!(
            matches!(err, IoError::NonUniformTime { line: 3, .. }),
            "{err}"
        );
    }

    #[test]
    fn uneven_time_names_the_line() {
        let err = read("t,x\n0,1\n1,2\n2,3\n3.5,4\n", None).unwrap_err();
        assert!(
            matches!(err, IoError::NonUniformTime { line: 5, .. }),
            "{err}"
        );
        assert!(matches!(
            read("t,x\n1,1\n0,2\n", None),
            Err(IoError::TimeNotIncreasing(_))
        ));
    }

    #[test]
    fn bad_rows() {
        let err = read("x,y\n1,2\n3\n", None).unwrap_err();
        assert!(
            matches!(
                err,
                IoError::Arity {
                    line: 3,
                    expected: 2,
                    found: 1
                }
            ),
            "{err}"
        );
        let err = read("x\n1\nabc\n", None).unwrap_err();
        assert_eq!(
            err.to_string(),
            "line 3: `abc` in column `x` is not a finite number"
        );
        assert!(matches!(
            read("x\n1\ninf\n", None),
            Err(IoError::NotNumeric { .. })
        ));
        assert!(matches!(read("x,x\n1,2\n", None), Err(IoError::Header(_))));
        assert!(matches!(
            read("x\n", None),
            Err(IoError::Signal(SignalError::NoSamples))
        ));
    }

    #[test]
    fn empty_input_has_no_schema() {
        let mut r = SampleReader::new(&b""[..], None).unwrap();
        assert!(r.schema().is_empty());
        assert!(r.next_sample().unwrap().is_none());
    }

    #[test]
    fn round_trip() {
        let sig = Signal::new(
            vec!["a".into(), "b".into()],
            0.25,
            vec![vec![1.5, -2.0], vec![0.1, 1e-7], vec![3.0, 4.0]],
        )
        .unwrap();
        for time in [false, true] {
            let mut buf = Vec::new();
            write_signal(&mut buf, &sig, time).unwrap();
            let step = if time { None } else { Some(0.25) };
            assert_eq!(read_signal(&buf[..], step).unwrap(), sig);
        }
    }

    #[test]
    fn event_lines() {
        let f = crate::parse("C[0,2]^2 (x > 0)").unwrap();
        let mut m = new_monitor(&f, &["x".to_string()], 1.0, &VarBounds::default()).unwrap();
        let v = m.push_sample(&[3.0]).unwrap();
        let mut buf = Vec::new();
        MonitorEvent::new(0, &v).write_line(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "{\"i\":0,\"lb\":\"-inf\",\"ub\":\"inf\",\"verdict\":\"unknown\",\"decided\":false}\n"
        );
        let v = m.push_sample(&[2.0]).unwrap();
        let line = serde_json::to_string(&MonitorEvent::new(1, &v)).unwrap();
        assert_eq!(
            line,
            "{\"i\":1,\"lb\":2.0,\"ub\":3.0,\"verdict\":\"true\",\"decided\":true}"
        );
    }

    #[test]
    fn trace_rows() {
        let f = crate::parse("G[0,1] (x > 0)").unwrap();
        let mut m = new_monitor(&f, &["x".to_string()], 1.0, &VarBounds::default()).unwrap();
        let mut w = TraceWriter::new(Vec::new()).unwrap();
        m.push_sample(&[1.0]).unwrap();
        w.snapshot(&mut m, 0).unwrap();
        let text = String::from_utf8(w.finish().unwrap()).unwrap();
        assert_eq!(
            text,
            "node,t,i,lb,ub\n0,0,0,-inf,1\n1,0,0,1,1\n1,1,0,-inf,inf\n"
        );
    }
}
