use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context};
use sha2::{Digest, Sha256};
use ursc::beeping::{
    phase_space_sweep, simulate_local_broadcast, simulate_neighborhood_learning, BeepCode, Graph,
    WakeSchedule,
};
use ursc::codes::{
    check_cbp, construct_ursc, construct_ursc_with_length, empirical_segment_stats,
    expectation_bounds, verify_ursc_bruteforce, CheckMode, CodesError, ConstructionParams,
    ElongationTable, Interval, OracleOutcome,
};
use ursc::contention::{latency_report, simulate_channel, CrInstance, CrProtocol};
use ursc::rational::{format_rational, to_f64};
use ursc::{parse_rational, Rational};

use crate::scenario::{code_beside, parse_bits, read_code, read_json, BeepScenario, CrScenario};
use crate::{
    CheckArgs, ClassicArgs, ConstructArgs, OracleArgs, ParamArgs, SimBeepArgs, SimCrArgs,
    StatsArgs, Verdict,
};

/// Writes `lines` to `path`, or to stdout without a path.
fn emit(path: Option<&Path>, lines: &[String]) -> anyhow::Result<()> {
    let mut text = lines.join("\n");
    if !lines.is_empty() {
        text.push('\n');
    }
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn params(p: &ParamArgs) -> anyhow::Result<ConstructionParams> {
    Ok(ConstructionParams::new(p.n, p.alpha, p.eps, p.c, p.seed)?)
}

fn verdict(pass: bool) -> Verdict {
    if pass {
        Verdict::Pass
    } else {
        Verdict::Violation
    }
}

pub fn construct(a: ConstructArgs) -> anyhow::Result<Verdict> {
    if a.max_iters == 0 {
        bail!("--max-iters must be at least 1");
    }
    let p = params(&a.params)?;
    let result = match a.t {
        Some(t) => construct_ursc_with_length(&p, t, a.max_iters),
        None => construct_ursc(&p, a.max_iters),
    };
    let done = match result {
        Ok(done) => done,
        Err(CodesError::IterationsExhausted {
            iterations,
            last_report,
        }) => {
            println!("iterations: {iterations} (exhausted)");
            println!(
                "last check: {} violations over {} cells",
                last_report.violations.len(),
                last_report.cells_checked
            );
            if let Some(v) = last_report.violations.first() {
                println!("first violation: {v}");
            }
            return Err(CodesError::IterationsExhausted {
                iterations,
                last_report,
            }
            .into());
        }
        Err(e) => return Err(e.into()),
    };
    let text = done.matrix.to_text();
    fs::write(&a.output, &text).with_context(|| format!("writing {}", a.output.display()))?;
    let h = done.matrix.header();
    println!("iterations: {}", done.iterations);
    println!("seed: {}", h.seed.unwrap_or_default());
    println!("t: {}", h.t);
    println!("sha256: {}", hex::encode(Sha256::digest(text.as_bytes())));
    println!("k,tau1,tau2");
    for k in 2..=done.delta {
        let e = h.elongation_bounds(k)?;
        println!("{k},{},{}", e.tau1, e.tau2);
    }
    Ok(Verdict::Pass)
}

pub fn check(a: CheckArgs) -> anyhow::Result<Verdict> {
    let m = read_code(&a.file)?;
    let h = m.header();
    let alpha = a.alpha.unwrap_or(h.alpha);
    let k_max = a.k_max.unwrap_or_else(|| h.default_k_max());
    let table = ElongationTable::from_header(h, k_max)?;
    let mode = if a.fail_fast {
        CheckMode::FailFast
    } else {
        CheckMode::Full
    };
    let report = check_cbp(&m, alpha, &table, mode);
    let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
    emit(a.output.as_deref(), &lines)?;
    println!(
        "{}: {} violations, {} cells checked, k in 2..={k_max}, alpha {}",
        if report.passed { "pass" } else { "fail" },
        report.violations.len(),
        report.cells_checked,
        format_rational(&alpha)
    );
    Ok(verdict(report.passed))
}

pub fn verify_oracle(a: OracleArgs) -> anyhow::Result<Verdict> {
    let m = read_code(&a.file)?;
    let h = m.header();
    let alpha = a.alpha.unwrap_or(h.alpha);
    let k_max = a.k_max.unwrap_or(m.n()).min(m.n());
    let taus: Vec<usize> = (0..=k_max.max(2))
        .map(|k| match a.tau {
            Some(t) => Ok(t),
            None if k < 2 => Ok(0),
            None => Ok(h.elongation_bounds(k)?.tau2),
        })
        .collect::<Result<_, CodesError>>()?;
    match verify_ursc_bruteforce(&m, alpha, |k| taus[k], k_max, a.budget)? {
        OracleOutcome::Pass => {
            println!("pass: k in 2..={k_max}, alpha {}", format_rational(&alpha));
            Ok(Verdict::Pass)
        }
        OracleOutcome::Violation(w) => {
            let shifts: Vec<String> = w.shifts.iter().map(|(c, s)| format!("{c}:{s}")).collect();
            println!(
                "violation: k={} members={:?} designated={} shifts={} covered={} threshold={}",
                w.k,
                w.members,
                w.designated,
                shifts.join(" "),
                w.lhs,
                format_rational(&w.rhs_threshold)
            );
            Ok(Verdict::Violation)
        }
    }
}

pub fn verify_classic(a: ClassicArgs) -> anyhow::Result<Verdict> {
    let m = read_code(&a.file)?;
    match ursc::codes::verify_classic(&m, a.k, a.budget)? {
        None => {
            println!("pass: k={}", a.k);
            Ok(Verdict::Pass)
        }
        Some(w) => {
            println!(
                "violation: members={:?} designated={}",
                w.members, w.designated
            );
            Ok(Verdict::Violation)
        }
    }
}

pub fn sim_beep(a: SimBeepArgs) -> anyhow::Result<Verdict> {
    let sc: BeepScenario = read_json(&a.scenario)?;
    let m = code_beside(&a.scenario, &sc.code_file)?;
    let n_ids = sc
        .n_ids
        .or_else(|| sc.nodes.iter().copied().max())
        .context("the scenario has no nodes")?;
    let g = Graph::new(n_ids, sc.nodes.iter().copied(), sc.edges.iter().copied())?;
    let sched = WakeSchedule::new(sc.wake.clone());
    let mut pass = true;
    if a.sweep {
        let sweep = phase_space_sweep(&g, &m)?;
        for w in &sweep.safety {
            println!(
                "sweep safety: node {} decodes {} from {}",
                w.node, w.decoded, w.window
            );
        }
        for w in &sweep.inclusion {
            let offs: Vec<String> = w.offsets.iter().map(|(x, r)| format!("{x}:{r}")).collect();
            println!(
                "sweep inclusion: node {} can miss {} (offsets {})",
                w.node,
                w.neighbor,
                offs.join(" ")
            );
        }
        println!(
            "sweep: {} ({} windows, deadline {} rounds)",
            if sweep.passed() { "pass" } else { "fail" },
            sweep.windows,
            sweep.deadline
        );
        pass &= sweep.passed();
    }
    let code = BeepCode::certify(m, a.budget);
    println!("capacity: {}", code.capacity());
    let mutual = |v: usize, u: usize| sched.get(v).unwrap_or(0).max(sched.get(u).unwrap_or(0));
    let mut summary = Vec::new();
    let events = match &sc.messages {
        None => {
            let run = simulate_neighborhood_learning(&g, &sched, &code, sc.horizon)?;
            println!("period: {}", run.period);
            summary.push("node,neighbor,round,delay".to_string());
            for v in g.nodes() {
                for u in g.neighbors(v) {
                    summary.push(match run.learned_at(v, u) {
                        Some(r) => format!("{v},{u},{r},{}", r - mutual(v, u)),
                        None => format!("{v},{u},never,"),
                    });
                }
            }
            run.events
        }
        Some(msgs) => {
            let msgs: BTreeMap<usize, Vec<bool>> = msgs
                .iter()
                .map(|(&v, s)| Ok((v, parse_bits(s)?)))
                .collect::<anyhow::Result<_>>()?;
            let run = simulate_local_broadcast(&g, &sched, &code, &msgs, sc.horizon)?;
            println!("period: {}", run.period);
            summary.push("node,neighbor,message,round,delay".to_string());
            for v in g.nodes() {
                for u in g.neighbors(v) {
                    let d = run.received.get(&v).and_then(|r| r.get(&u));
                    summary.push(
                        match d.and_then(|d| Some((d.message.as_ref()?, d.completed_at?))) {
                            Some((bits, r)) => {
                                let s: String =
                                    bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
                                format!("{v},{u},{s},{r},{}", r - mutual(v, u))
                            }
                            None => format!("{v},{u},incomplete,,"),
                        },
                    );
                }
            }
            run.events
        }
    };
    let lines: Vec<String> = events.iter().map(ToString::to_string).collect();
    emit(a.output.as_deref(), &lines)?;
    for line in summary {
        println!("{line}");
    }
    Ok(verdict(pass))
}

pub fn sim_cr(a: SimCrArgs) -> anyhow::Result<Verdict> {
    let sc: CrScenario = read_json(&a.scenario)?;
    let m = code_beside(&a.scenario, &sc.code_file)?;
    let mut listed = sc.stations.clone();
    listed.sort_unstable();
    listed.dedup();
    if listed.len() != sc.stations.len() || !listed.iter().eq(sc.delta.keys()) {
        bail!("stations and delta must name the same stations exactly once");
    }
    let inst = CrInstance::new(m.n(), sc.delta.clone(), sc.s)?;
    let protocol = match (sc.repetitions, &sc.alpha) {
        (Some(r), _) => CrProtocol::forced(r)?,
        (None, Some(alpha)) => CrProtocol::from_alpha(&m, sc.s, parse_alpha(alpha)?)?,
        (None, None) => CrProtocol::from_alpha(&m, sc.s, m.header().alpha)?,
    };
    let horizon = sc
        .horizon
        .unwrap_or_else(|| protocol.default_horizon(&m, inst.k()));
    let vectors = protocol.vectors(&m, inst.stations())?;
    let last = inst.delta.values().max().copied().unwrap_or(0);
    let log = simulate_channel(&inst, &vectors, last + horizon)?;
    let mut report = latency_report(&log, &inst);
    for st in report.stations.values_mut() {
        st.successes.retain(|&r| r < horizon);
        st.latency_to_s = st.successes.get(inst.s - 1).copied();
    }
    let lines: Vec<String> = log.lines().collect();
    emit(a.output.as_deref(), &lines)?;
    println!("repetitions: {}", protocol.repetitions);
    println!("horizon: {horizon}");
    println!("station,activation,successes,latency_to_s");
    for (v, st) in &report.stations {
        let latency = st
            .latency_to_s
            .map_or("none".to_string(), |l| l.to_string());
        println!("{v},{},{},{latency}", inst.delta[v], st.successes.len());
    }
    Ok(verdict(report.all_reached()))
}

fn parse_alpha(s: &str) -> anyhow::Result<Rational> {
    parse_rational(s).with_context(|| format!("alpha {s:?}"))
}

fn interval_line(name: &str, mean: &Rational, iv: &Interval) -> String {
    let x = to_f64(mean);
    format!(
        "{name},{},{x:.4},{:.4},{:.4},{}",
        format_rational(mean),
        iv.low,
        iv.high,
        if iv.contains(x) { "inside" } else { "outside" }
    )
}

pub fn stats(a: StatsArgs) -> anyhow::Result<Verdict> {
    let p = params(&a.params)?;
    let s = empirical_segment_stats(&p, a.k, a.shift, a.trials)?;
    let b = expectation_bounds(&p, a.k);
    println!("trials: {}", s.trials);
    println!("t: {}", p.t);
    println!("tau1: {}", s.bounds.tau1);
    println!("tau2: {}", s.bounds.tau2);
    println!("statistic,mean,decimal,low,high,verdict");
    println!("{}", interval_line("upper", &s.mean_upper, &b.upper));
    println!("{}", interval_line("lower", &s.mean_lower, &b.lower));
    println!(
        "collision,{},{:.4},,,",
        format_rational(&s.mean_collision),
        to_f64(&s.mean_collision)
    );
    Ok(Verdict::Pass)
}
