use std::fs::File;
use std::io::{self, BufWriter, LineWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ctstl::bench::{compare, positive_trace, scaling_formula, NaiveMode};
use ctstl::io::{read_signal, write_signal, MonitorEvent, SampleReader, TraceWriter};
use ctstl::monitor::{Monitor, MonitorState, Outcome};
use ctstl::scenario::{generate, Excursion, ScenarioParams};
use ctstl::{
    parse, robustness, robustness_trace, satisfies, validate, BoundFormula, Formula, Signal,
    VarBounds,
};

/// Exit codes: 0 satisfied, 1 violated, 2 error, 3 undecided.
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "ctstl",
    version,
    about = "Cumulative-time STL: evaluation, robustness and online monitoring"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a signal file satisfies a formula.
    Eval(EvalArgs),
    /// Print the robustness of a formula on a signal file.
    Rob(RobArgs),
    /// Monitor a signal file or stdin stream, one JSON event per sample.
    Monitor(MonitorArgs),
    /// Generate a synthetic case-study trace.
    Gen(GenArgs),
    /// Time the incremental monitor against full recomputation.
    Bench(BenchArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct FormulaSource {
    /// Formula text.
    #[arg(long, short = 'f')]
    formula: Option<String>,
    /// File holding the formula text.
    #[arg(long)]
    formula_file: Option<PathBuf>,
}

impl FormulaSource {
    fn load(&self) -> Result<Formula> {
        let text = match (&self.formula, &self.formula_file) {
            (Some(t), _) => t.clone(),
            (None, Some(p)) => {
                std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?
            }
            (None, None) => unreachable!("clap requires a formula source"),
        };
        parse(&text).map_err(|e| anyhow!("parse error: {}", e.render(&text)))
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    formula: FormulaSource,
    /// Signal CSV, or `-` for stdin.
    signal: PathBuf,
    /// Sampling step; inferred from a `t` column when omitted.
    #[arg(long)]
    step: Option<f64>,
    /// Evaluation time, in time units.
    #[arg(long, default_value_t = 0.0)]
    at: f64,
}

#[derive(Args)]
struct RobArgs {
    #[command(flatten)]
    eval: EvalArgs,
    /// Print `t,rho` for every time with a complete window instead.
    #[arg(long)]
    sweep: bool,
}

#[derive(Args)]
struct MonitorArgs {
    #[command(flatten)]
    formula: FormulaSource,
    /// Signal CSV; stdin when omitted or `-`.
    input: Option<PathBuf>,
    /// Sampling step; inferred from the first two `t` values, else 1.
    #[arg(long)]
    step: Option<f64>,
    /// Declared range of a variable, `var=lo:hi`; repeatable.
    #[arg(long = "bounds", value_name = "VAR=LO:HI")]
    bounds: Vec<String>,
    /// Write per-node worklist snapshots (`node,t,i,lb,ub`) to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Keep reading after a decision, repeating the final verdict.
    #[arg(long)]
    run_to_end: bool,
    /// Write events here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    Overvoltage,
    Glucose,
}

#[derive(Args)]
struct GenArgs {
    scenario: Scenario,
    /// Number of samples.
    #[arg(long)]
    len: usize,
    /// Cumulative window in samples; the scenario default when omitted.
    #[arg(long)]
    window: Option<usize>,
    /// Nominal band `lo:hi`.
    #[arg(long, value_name = "LO:HI")]
    band: Option<String>,
    /// Excursion `start:len:level`; repeatable.
    #[arg(long = "excursion", value_name = "START:LEN:LEVEL")]
    excursions: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Include a `t` column.
    #[arg(long)]
    time: bool,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Trace length.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    /// Cumulative window width.
    #[arg(long, default_value_t = 1_000)]
    w: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Time recomputation at this many prefixes and extrapolate; 0 runs it
    /// after every sample.
    #[arg(long, default_value_t = 0)]
    probes: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Command::Eval(a) => eval(&a),
        Command::Rob(a) => rob(&a),
        Command::Monitor(a) => monitor(&a),
        Command::Gen(a) => gen(&a),
        Command::Bench(a) => bench(&a),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn open(path: Option<&Path>) -> Result<Box<dyn Read>> {
    match path {
        None => Ok(Box::new(io::stdin().lock())),
        Some(p) if p.as_os_str() == "-" => Ok(Box::new(io::stdin().lock())),
        Some(p) => Ok(Box::new(
            File::open(p).with_context(|| format!("opening {}", p.display()))?,
        )),
    }
}

fn create(path: Option<&Path>) -> Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
        Some(p) => Ok(Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        ))),
    }
}

fn exit_for(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::True => 0,
        Outcome::False => 1,
        Outcome::Unknown => 3,
    }
}

fn load(a: &EvalArgs) -> Result<(BoundFormula, Signal, usize)> {
    let f = a.formula.load()?;
    let sig = read_signal(open(Some(&a.signal))?, a.step)?;
    let f = validate(&f, sig.schema(), sig.step())?;
    let pos = a.at / sig.step();
    let t = pos.round();
    if !(t >= 0.0 && (pos - t).abs() <= 1e-9 * pos.abs().max(1.0)) {
        bail!(
            "--at {} is not a non-negative multiple of the step {}",
            a.at,
            sig.step()
        );
    }
    Ok((f, sig, t as usize))
}

fn eval(a: &EvalArgs) -> Result<u8> {
    let (f, sig, t) = load(a)?;
    let sat = satisfies(&f, &sig, t)?;
    println!("{sat}");
    Ok(if sat { 0 } else { 1 })
}

fn rob(a: &RobArgs) -> Result<u8> {
    let (f, sig, t) = load(&a.eval)?;
    let mut out = create(None)?;
    if a.sweep {
        writeln!(out, "t,rho")?;
        for (i, v) in robustness_trace(&f, &sig)? {
            writeln!(out, "{},{v}", i as f64 * sig.step())?;
        }
    } else {
        writeln!(out, "{}", robustness(&f, &sig, t)?)?;
    }
    out.flush()?;
    Ok(0)
}

fn monitor(a: &MonitorArgs) -> Result<u8> {
    let formula = a.formula.load()?;
    let mut bounds = VarBounds::default();
    for text in &a.bounds {
        bounds.parse_bound(text)?;
    }
    let mut rdr = SampleReader::new(open(a.input.as_deref())?, a.step)?;
    if rdr.schema().is_empty() {
        eprintln!("unknown after 0 samples");
        return Ok(exit_for(Outcome::Unknown));
    }
    let step = rdr.step()?;
    let f = validate(&formula, rdr.schema(), step)?;
    let mut m = MonitorState::new(f, &bounds);
    // Events go out a line at a time so a reader tailing the stream sees
    // each verdict as soon as its sample is processed.
    let mut out: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(LineWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(LineWriter::new(io::stdout().lock())),
    };
    let mut trace = match &a.trace {
        Some(p) => Some(TraceWriter::new(create(Some(p))?)?),
        None => None,
    };
    let mut i = 0;
    while let Some(row) = rdr.next_sample()? {
        let v = m
            .push_sample(&row)
            .with_context(|| format!("line {}", rdr.line()))?;
        MonitorEvent::new(i, &v).write_line(&mut out)?;
        if let Some(w) = trace.as_mut() {
            w.snapshot(&mut m, i)?;
        }
        i += 1;
        if v.is_final() && !a.run_to_end {
            break;
        }
    }
    out.flush()?;
    if let Some(w) = trace {
        w.finish()?.flush()?;
    }
    let v = m.finalize();
    match v.decided_at {
        Some(d) => eprintln!("{} at sample {d}", v.outcome),
        None => eprintln!("{} after {i} samples, root {}", v.outcome, v.rosi),
    }
    Ok(exit_for(v.outcome))
}

fn gen(a: &GenArgs) -> Result<u8> {
    let mut p = match a.scenario {
        Scenario::Overvoltage => ScenarioParams::overvoltage(a.len),
        Scenario::Glucose => ScenarioParams::glucose(a.len),
    };
    p.seed = a.seed;
    if let Some(w) = a.window {
        p.window = w;
    }
    if let Some(band) = &a.band {
        let (lo, hi) = band
            .split_once(':')
            .and_then(|(lo, hi)| Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?)))
            .ok_or_else(|| anyhow!("--band expects lo:hi, got `{band}`"))?;
        p.band = (lo, hi);
    }
    for e in &a.excursions {
        p.excursions.push(
            Excursion::parse(e)
                .ok_or_else(|| anyhow!("--excursion expects start:len:level, got `{e}`"))?,
        );
    }
    let (sig, report) = generate(&p)?;
    let mut out = create(a.out.as_deref())?;
    write_signal(&mut out, &sig, a.time)?;
    out.flush()?;
    for c in &report.counts {
        eprintln!(
            "{}: at most {} samples per {}-sample window",
            c.label, c.max_in_window, report.window
        );
    }
    Ok(0)
}

fn bench(a: &BenchArgs) -> Result<u8> {
    if a.w == 0 || a.w > a.n {
        bail!("need 1 <= w <= n, got w = {} and n = {}", a.w, a.n);
    }
    let sig = positive_trace(a.n, a.seed);
    let f = validate(&scaling_formula(a.n, a.w), sig.schema(), 1.0)?;
    let mode = match a.probes {
        0 => NaiveMode::Full,
        probes => NaiveMode::Sampled { probes },
    };
    let r = compare(&f, &sig, &VarBounds::default(), mode)?;
    let wl = &r.worklist;
    println!("formula: {}", scaling_formula(a.n, a.w));
    println!(
        "worklist: {:.3?} total, {:.3?} per sample over {} samples, {} at {:?}",
        wl.total,
        wl.per_sample(),
        wl.samples,
        wl.verdict.outcome,
        wl.verdict.decided_at
    );
    let per = r.naive.total / r.naive.samples.max(1) as u32;
    println!(
        "naive: {:.3?} total{}, {:.3?} per sample",
        r.naive.total,
        if r.naive.extrapolated {
            " (extrapolated)"
        } else {
            ""
        },
        per
    );
    if let Some(v) = r.naive.verdict {
        println!("naive verdict: {} at {:?}", v.outcome, v.decided_at);
    }
    println!("ratio: {:.1}", r.ratio());
    Ok(0)
}
