//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so every line shows up in `cargo test` output.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;

use ctstl::bench::{compare, positive_trace, scaling_formula, NaiveMode};
use ctstl::monitor::{rosi_naive, Monitor, MonitorState, NaiveMonitor, Outcome, Rosi};
use ctstl::scenario::{
    generate, glucose_formulas, overvoltage_formula, ScenarioParams, GLUCOSE_DAY,
};
use ctstl::sliding::{sliding_extremum_batch, sliding_kth_batch, Extremum};
use ctstl::{
    characteristic, max_tau, parse, robustness, satisfies, validate, Cmp, Formula, Interval,
    NodeId, Predicate, Signal, TimeInterval, VarBounds,
};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Check,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            name: "cumulative robustness examples",
            limit: Duration::from_secs(1),
            run: c1_examples,
        },
        Criterion {
            id: 2,
            name: "streaming worklist replay",
            limit: Duration::from_secs(1),
            run: c2_replay,
        },
        Criterion {
            id: 3,
            name: "robustness sign vs satisfaction",
            limit: Duration::from_secs(60),
            run: c3_sign,
        },
        Criterion {
            id: 4,
            name: "perturbation robustness",
            limit: Duration::from_secs(60),
            run: c4_perturb,
        },
        Criterion {
            id: 5,
            name: "sliding engines vs oracles",
            limit: Duration::from_secs(30),
            run: c5_sliding,
        },
        Criterion {
            id: 6,
            name: "online vs recomputed intervals",
            limit: Duration::from_secs(120),
            run: c6_online,
        },
        Criterion {
            id: 7,
            name: "performance scaling",
            limit: Duration::from_secs(600),
            run: c7_scaling,
        },
        Criterion {
            id: 8,
            name: "case-study scenarios",
            limit: Duration::from_secs(60),
            run: c8_scenarios,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let res = res.and_then(|detail| {
            if took <= c.limit {
                Ok(detail)
            } else {
                Err(format!("{detail}; took {took:.2?}, limit {:?}", c.limit))
            }
        });
        match res {
            Ok(detail) => println!("criterion {} PASS {} ({took:.2?}): {detail}", c.id, c.name),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL {} ({took:.2?}): {detail}", c.id, c.name);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn x() -> Vec<String> {
    vec!["x".to_string()]
}

fn c1_examples() -> Check {
    let f = validate(&parse("C[2,8]^4 (x > 1)").unwrap(), &x(), 1.0).unwrap();
    let x1 = Signal::univariate(
        "x",
        &[0.0, 0.0, 2.0, 3.0, 4.0, 7.0, 10.0, 0.0, 5.0, 5.0, 15.0],
    )
    .unwrap();
    let x2 = Signal::univariate(
        "x",
        &[0.0, 0.0, 2.0, -3.0, -4.0, 7.0, -5.0, -1.0, 0.0, 5.0, 15.0],
    )
    .unwrap();
    let (r1, r2) = (
        robustness(&f, &x1, 0).unwrap(),
        robustness(&f, &x2, 0).unwrap(),
    );
    let (s1, s2) = (
        satisfies(&f, &x1, 0).unwrap(),
        satisfies(&f, &x2, 0).unwrap(),
    );
    let detail = format!("x1: rho = {r1}, sat = {s1}; x2: rho = {r2}, sat = {s2}");
    ensure!(s1 && !s2, "{detail}");
    ensure!(r2 == -2.0, "{detail}; expected rho(x2) = -2");
    // Window values of x - 1 are {1,2,3,6,9,-1,4}; their 4th largest is 3.
    ensure!(r1 == 4.0, "{detail}; expected rho(x1) = 4");
    Ok(detail)
}

fn c2_replay() -> Check {
    let f = Formula::always(
        Interval::new(0.0, 2.0),
        Formula::cumulative(
            Interval::new(1.0, 5.0),
            3.0,
            Formula::atom(Predicate::simple("x", Cmp::Gt, 0.0)),
        ),
    );
    let bf = validate(&f, &x(), 1.0).unwrap();
    let (root, cum, atom) = (NodeId(0), NodeId(1), NodeId(2));
    let trace = [2.0, -1.0, 7.0, 10.0, -5.0, 15.0, 8.0, -2.0];
    let inf = f64::INFINITY;
    let unknown = Rosi::new(-inf, inf);
    let cum_rows = [
        (4, [Rosi::new(-1.0, 7.0), Rosi::new(-5.0, 10.0), unknown]),
        (
            5,
            [
                Rosi::point(7.0),
                Rosi::new(7.0, 10.0),
                Rosi::new(-5.0, 15.0),
            ],
        ),
        (
            6,
            [Rosi::point(7.0), Rosi::point(8.0), Rosi::new(8.0, 10.0)],
        ),
    ];
    let roots = [
        (4, Rosi::new(-inf, 7.0)),
        (5, Rosi::new(-5.0, 7.0)),
        (6, Rosi::point(7.0)),
    ];
    let mut m = MonitorState::new(bf.clone(), &VarBounds::default());
    let mut decided = None;
    for (i, &v) in trace.iter().enumerate() {
        let verdict = m.push_sample(&[v]).unwrap();
        if verdict.is_final() {
            decided = Some((i, verdict.outcome));
            break;
        }
        // Atom row: known values up to sample i, unknown beyond.
        for (t, r) in m.worklist(atom) {
            let want = if t <= i {
                Rosi::point(trace[t])
            } else {
                unknown
            };
            ensure!(
                r == want,
                "atom entry t={t} after sample {i}: {r}, expected {want}"
            );
        }
        check_rows(&mut m, i, cum, root, &cum_rows, &roots)?;
    }
    let i = 6;
    check_rows(&mut m, i, cum, root, &cum_rows, &roots)?;
    ensure!(
        decided == Some((6, Outcome::True)),
        "decision {decided:?}, expected True at sample 6"
    );
    ensure!(bf.horizon() == 7, "horizon {}", bf.horizon());
    Ok("all entries exact; True at sample 6, horizon 7".into())
}

fn check_rows(
    m: &mut MonitorState,
    i: usize,
    cum: NodeId,
    root: NodeId,
    cum_rows: &[(usize, [Rosi; 3])],
    roots: &[(usize, Rosi)],
) -> Result<(), String> {
    if let Some((_, want)) = cum_rows.iter().find(|(j, _)| *j == i) {
        let got: Vec<Rosi> = m.worklist(cum).into_iter().map(|(_, r)| r).collect();
        ensure!(
            got == want,
            "cumulative row after sample {i}: {got:?}, expected {want:?}"
        );
    }
    if let Some((_, want)) = roots.iter().find(|(j, _)| *j == i) {
        let got = m.entry(root, 0);
        ensure!(
            got == *want,
            "root after sample {i}: {got}, expected {want}"
        );
    }
    Ok(())
}

fn c3_sign() -> Check {
    let mut r = common::rng(3);
    let (mut instances, mut tried) = (0, 0);
    while instances < 2000 {
        tried += 1;
        let f = common::formula(&mut r, 4);
        let bf = validate(&f, &common::schema(), 1.0).unwrap();
        let len = bf.horizon() + 1 + r.random_range(0..3);
        ensure!(len <= 40, "trace length {len} for {f}");
        let sig = common::signal(&mut r, len, -4, 4);
        let rho = robustness(&bf, &sig, 0).unwrap();
        if rho == 0.0 {
            continue;
        }
        instances += 1;
        let sat = satisfies(&bf, &sig, 0).unwrap();
        ensure!(sat == (rho > 0.0), "{f}: rho = {rho}, satisfied = {sat}");
    }
    Ok(format!(
        "{instances} instances with nonzero robustness ({tried} drawn), 0 failures"
    ))
}

fn c4_perturb() -> Check {
    let mut r = common::rng(4);
    let mut instances = 0;
    while instances < 500 {
        let f = common::formula(&mut r, 4);
        let bf = validate(&f, &common::schema(), 1.0).unwrap();
        let sig = common::signal(&mut r, bf.horizon() + 1, -4, 4);
        let rho = robustness(&bf, &sig, 0).unwrap();
        if rho == 0.0 || !rho.is_finite() {
            continue;
        }
        instances += 1;
        let before = characteristic(&bf, &sig, 0).unwrap();
        for _ in 0..10 {
            let noise: Vec<f64> = (0..sig.len() * 2)
                .map(|_| r.random_range(-1.0..1.0))
                .collect();
            let budget = r.random_range(0.0..0.99) * rho.abs();
            let moved = common::perturb(&bf, &sig, &noise, budget);
            let after = characteristic(&bf, &moved, 0).unwrap();
            ensure!(
                after == before,
                "{f}: rho = {rho}, budget {budget} flipped {before:?}"
            );
        }
    }
    Ok(format!(
        "{instances} instances x 10 perturbations below 0.99|rho|, 0 failures"
    ))
}

fn c5_sliding() -> Check {
    let mut r = common::rng(5);
    let mut checked = 0;
    for _ in 0..500 {
        let len = r.random_range(1..80);
        let trace: Vec<f64> = (0..len).map(|_| r.random_range(-20..=20) as f64).collect();
        let hi = r.random_range(0..len);
        let lo = r.random_range(0..=hi);
        let i = TimeInterval { lo, hi };
        let k = r.random_range(1..=i.width());
        let kth = sliding_kth_batch(&trace, i, k).unwrap();
        let max = sliding_extremum_batch(&trace, i, Extremum::Max).unwrap();
        let min = sliding_extremum_batch(&trace, i, Extremum::Min).unwrap();
        ensure!(
            kth.len() == len - hi && max.len() == kth.len() && min.len() == kth.len(),
            "output lengths"
        );
        for t in 0..kth.len() {
            let w = &trace[t + lo..=t + hi];
            let oracle = max_tau(w, k).unwrap();
            ensure!(
                kth[t] == (t, oracle),
                "kth at t={t}: {:?} vs {oracle}",
                kth[t]
            );
            let hi_v = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lo_v = w.iter().copied().fold(f64::INFINITY, f64::min);
            ensure!(
                max[t] == (t, hi_v) && min[t] == (t, lo_v),
                "extremum at t={t}"
            );
            checked += 1;
        }
    }
    Ok(format!("500 instances, {checked} windows, 0 failures"))
}

fn c6_online() -> Check {
    let mut r = common::rng(6);
    let mut prefixes = 0;
    for _ in 0..200 {
        let f = common::formula_with(&mut r, 4, common::SMALL);
        let bf = validate(&f, &common::schema(), 1.0).unwrap();
        let len = bf.horizon() + 1 + r.random_range(0..3);
        let sig = common::signal(&mut r, len, -4, 4);
        let bounds = common::bounds(&mut r, -4, 4);
        let mut fast = MonitorState::new(bf.clone(), &bounds);
        let mut slow = NaiveMonitor::new(bf.clone(), &bounds);
        let mut data = Vec::new();
        for (i, s) in sig.samples().enumerate() {
            data.extend_from_slice(s);
            let a = fast.push_sample(s).unwrap();
            let b = slow.push_sample(s).unwrap();
            let root = fast.entry(NodeId(0), 0);
            let want = rosi_naive(&bf, &data, 0, &bounds);
            ensure!(
                root == want,
                "{f}: root {root} vs recomputed {want} after sample {i}"
            );
            ensure!(
                (a.outcome, a.decided_at) == (b.outcome, b.decided_at),
                "{f}: verdicts {a:?} vs {b:?}"
            );
            prefixes += 1;
            // A final verdict freezes the monitor; later samples are ignored.
            if a.is_final() {
                break;
            }
        }
    }
    Ok(format!("200 traces, {prefixes} prefixes, 0 failures"))
}

fn c7_scaling() -> Check {
    let n = 1_000_000;
    let sig = positive_trace(n, 7);
    let bounds = VarBounds::default();
    let mut per_sample = Vec::new();
    let mut detail = Vec::new();
    for w in [10_000, 20_000] {
        let f = validate(&scaling_formula(n, w), &x(), 1.0).unwrap();
        let mode = if w == 10_000 {
            NaiveMode::Sampled { probes: 8 }
        } else {
            NaiveMode::Sampled { probes: 1 }
        };
        let rep = compare(&f, &sig, &bounds, mode).unwrap();
        let per = rep.worklist.per_sample().as_secs_f64();
        if w == 10_000 {
            ensure!(
                rep.ratio() >= 5.0,
                "naive/worklist ratio {:.1} at w = {w}",
                rep.ratio()
            );
            detail.push(format!("ratio {:.0} at w = {w}", rep.ratio()));
        }
        detail.push(format!("w = {w}: {:.3} us/sample", per * 1e6));
        per_sample.push(per);
    }
    let growth = per_sample[1] / per_sample[0];
    detail.push(format!("doubling factor {growth:.2}"));
    ensure!(growth < 2.0, "{}", detail.join(", "));
    Ok(detail.join(", "))
}

/// Streams `sig`, returning the verdict and whether it came before the
/// last sample.
fn stream(text: &str, sig: &Signal) -> (Outcome, Option<usize>) {
    let bf = validate(&parse(text).unwrap(), sig.schema(), 1.0).unwrap();
    let mut m = MonitorState::new(bf, &VarBounds::default());
    for s in sig.samples() {
        if m.push_sample(s).unwrap().is_final() {
            break;
        }
    }
    let v = m.finalize();
    (v.outcome, v.decided_at)
}

fn scenario(
    name: &str,
    formula: &str,
    p: &ScenarioParams,
    expect: Outcome,
    checked: &mut Vec<String>,
) -> Result<(), String> {
    let (sig, _) = generate(p).unwrap();
    let (outcome, at) = stream(formula, &sig);
    ensure!(outcome == expect, "{name}: {outcome}, expected {expect}");
    let bf = validate(&parse(formula).unwrap(), sig.schema(), 1.0).unwrap();
    let offline = satisfies(&bf, &sig, 0).unwrap();
    ensure!(
        offline == (expect == Outcome::True),
        "{name}: offline evaluation disagrees"
    );
    if expect == Outcome::False {
        let at = at.unwrap();
        ensure!(
            at + 1 < sig.len(),
            "{name}: violation decided at the last sample {at}"
        );
        checked.push(format!("{name} false@{at}/{}", sig.len()));
    } else {
        checked.push(format!("{name} true"));
    }
    Ok(())
}

fn c8_scenarios() -> Check {
    let mut checked = Vec::new();
    let len = 20_000;
    let volt = overvoltage_formula(len, 10_000);
    let ov =
        |n: usize, level: f64| ScenarioParams::overvoltage(len).with_excursion(4_000, n, level);
    for (limit, level, label) in [
        (16, 1.8, "v>=1.7"),
        (30, 1.5, "v>=1.4"),
        (160, 1.35, "v>=1.3"),
    ] {
        let (_, rep) = generate(&ov(limit + 1, level)).unwrap();
        ensure!(
            rep.count(label) == Some(limit + 1),
            "{label}: reported {:?}",
            rep.count(label)
        );
        scenario(
            &format!("overvoltage {limit}@{level}"),
            &volt,
            &ov(limit, level),
            Outcome::True,
            &mut checked,
        )?;
        scenario(
            &format!("overvoltage {}@{level}", limit + 1),
            &volt,
            &ov(limit + 1, level),
            Outcome::False,
            &mut checked,
        )?;
    }
    scenario(
        "overvoltage spike 2.1",
        &volt,
        &ov(1, 2.1),
        Outcome::False,
        &mut checked,
    )?;

    let hold = 36;
    let days = GLUCOSE_DAY + 1 + hold;
    let forms: Vec<(String, String)> = glucose_formulas(GLUCOSE_DAY, hold);
    let text = |name: &str| forms.iter().find(|(n, _)| n == name).unwrap().1.clone();
    let gl = |runs: &[(usize, f64)]| {
        let mut p = ScenarioParams::glucose(days);
        let mut start = 20;
        for &(n, level) in runs {
            p = p.with_excursion(start, n, level);
            start += n + 5;
        }
        p
    };
    // Limits over the 289-sample daily window: fewer than 12 samples below
    // 70, fewer than 72 above 180, at least 202 inside 70..=180.
    for (name, ok, bad) in [
        ("hypo", vec![(11, 60.0)], vec![(12, 60.0)]),
        ("hyper", vec![(71, 200.0)], vec![(72, 200.0)]),
        ("euglycemia", vec![(87, 200.0)], vec![(88, 200.0)]),
        (
            "daily",
            vec![(11, 60.0), (71, 200.0)],
            vec![(11, 60.0), (72, 200.0)],
        ),
        ("held", vec![(11, 60.0), (71, 200.0)], vec![(12, 60.0)]),
    ] {
        scenario(
            &format!("glucose {name} ok"),
            &text(name),
            &gl(&ok),
            Outcome::True,
            &mut checked,
        )?;
        scenario(
            &format!("glucose {name} over"),
            &text(name),
            &gl(&bad),
            Outcome::False,
            &mut checked,
        )?;
    }
    Ok(checked.join(", "))
}
