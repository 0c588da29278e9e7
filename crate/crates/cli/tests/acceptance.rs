//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are printed on every run.
//! Extra command-line arguments select criteria by substring.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use ursc::beeping::{
    block_id, block_len, decode_block_id, phase_space_sweep, simulate_neighborhood_learning,
    BeepCode, Graph, WakeSchedule,
};
use ursc::codes::{
    check_cbp, construct_ursc, empirical_segment_stats, expectation_bounds, sample_matrix,
    verify_ursc_bruteforce, CheckMode, CodeMatrix, ConstructionParams, ElongationPair,
    ElongationTable, InequalityKind, OracleOutcome, Violation,
};
use ursc::contention::{exhaustive_cr_check, CrProtocol};
use ursc::{BitVector, Rational};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    /// A failing non-gating criterion is reported but does not fail the run.
    gating: bool,
    run: fn() -> Outcome,
}

fn r(p: i64, q: i64) -> Rational {
    Rational::new(p, q)
}

fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus")
}

fn fixture(name: &str) -> CodeMatrix {
    let path = fixtures_dir().join(format!("{name}.ursc"));
    CodeMatrix::from_text(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize, t: usize) -> CodeMatrix {
    let density = rng.gen_range(0.1..0.9);
    let cols = (0..n)
        .map(|_| {
            let bits: Vec<bool> = (0..t).map(|_| rng.gen_bool(density)).collect();
            BitVector::from_bools(&bits).unwrap()
        })
        .collect();
    CodeMatrix::from_columns(cols).unwrap()
}

fn random_table(rng: &mut ChaCha8Rng, t: usize, k_max: usize) -> ElongationTable {
    ElongationTable::from_fn(k_max, |_| {
        let (a, b) = (rng.gen_range(0..t), rng.gen_range(0..t));
        Ok(ElongationPair {
            tau1: a.min(b),
            tau2: a.max(b),
        })
    })
    .unwrap()
}

fn random_alpha(rng: &mut ChaCha8Rng) -> Rational {
    let (a, b) = (rng.gen_range(1..=12), rng.gen_range(1..=12));
    r(a.min(b), a.max(b))
}

// Plain Vec<bool> evaluation of both pairwise inequalities.
fn naive_violations(m: &CodeMatrix, alpha: Rational, table: &ElongationTable) -> Vec<Violation> {
    let (p, q) = (*alpha.numer() as i128, *alpha.denom() as i128);
    let t = m.t();
    let cols: Vec<Vec<bool>> = m.columns().iter().map(|c| c.iter().collect()).collect();
    let count = |v: &[bool], a: usize, b: usize| v[a..=b].iter().filter(|&&x| x).count() as i128;
    let mut out = Vec::new();
    for (k, e) in table.iter() {
        for j in 0..m.n() {
            let cj = &cols[j];
            let w = count(cj, e.tau1, e.tau2);
            if q * count(cj, 0, e.tau1) > p * w {
                out.push(Violation {
                    k,
                    j,
                    j_prime: None,
                    shift: None,
                    kind: InequalityKind::WeightInequality,
                });
            }
            for jp in (0..m.n()).filter(|&x| x != j) {
                for i in 0..t {
                    let slipped = |x: usize| (0..3).any(|d| cols[jp][(x + i + 2 * t + d - 1) % t]);
                    let lhs = (e.tau1..=e.tau2).filter(|&x| cj[x] && slipped(x)).count() as i128;
                    if lhs * q * (k as i128 - 1) > p * w - q {
                        out.push(Violation {
                            k,
                            j,
                            j_prime: Some(jp),
                            shift: Some(i),
                            kind: InequalityKind::CollisionWeightInequality,
                        });
                    }
                }
            }
        }
    }
    out
}

fn random_columns(rng: &mut ChaCha8Rng, n: usize, t: usize) -> CodeMatrix {
    if rng.gen_bool(0.5) {
        return random_matrix(rng, n, t);
    }
    let cols = (0..n)
        .map(|_| {
            let w = rng.gen_range(1..=t.div_ceil(2));
            let ones = rand::seq::index::sample(rng, t, w).into_vec();
            BitVector::from_ones(t, &ones).unwrap()
        })
        .collect();
    CodeMatrix::from_columns(cols).unwrap()
}

/// Each instance draws (n, t, alpha, tau1, tau2) and random columns, then
/// flips random bits as long as the number of violated cells does not grow,
/// stopping when the pairwise condition holds or the steps run out.
/// Unconditioned matrices this small almost never satisfy it, and for
/// three or more columns it is out of reach at t <= 12, so half of the
/// instances use two columns.
fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (instances, steps) = (3000, 500);
    let mut passing: BTreeMap<usize, usize> = BTreeMap::new();
    let mut counterexamples = Vec::new();
    for draw in 0..instances {
        let (n, t): (usize, usize) = (
            if rng.gen_bool(0.5) {
                2
            } else {
                rng.gen_range(3..=5)
            },
            rng.gen_range(3..=12),
        );
        let table = ElongationTable::from_fn(n, |_| {
            let early = if rng.gen_bool(0.5) { t / 4 + 1 } else { t };
            let tau1 = rng.gen_range(0..early);
            let tau2 = if rng.gen_bool(0.75) {
                t - 1
            } else {
                rng.gen_range(tau1..t)
            };
            Ok(ElongationPair { tau1, tau2 })
        })
        .unwrap();
        let alpha = if rng.gen_bool(0.5) {
            r(1, 1)
        } else {
            random_alpha(&mut rng)
        };
        let mut m = random_columns(&mut rng, n, t);
        let mut bad = check_cbp(&m, alpha, &table, CheckMode::Full)
            .violations
            .len();
        for _ in 0..steps {
            if bad == 0 {
                break;
            }
            let mut cols = m.columns().to_vec();
            let (j, i) = (rng.gen_range(0..n), rng.gen_range(0..t));
            let bit = cols[j].get(i);
            cols[j].set(i, !bit);
            let next = CodeMatrix::from_columns(cols).unwrap();
            let v = check_cbp(&next, alpha, &table, CheckMode::Full)
                .violations
                .len();
            if v <= bad {
                (m, bad) = (next, v);
            }
        }
        if bad > 0 {
            continue;
        }
        *passing.entry(n).or_default() += 1;
        let tau = |k: usize| table.get(k).unwrap().tau2;
        let out = verify_ursc_bruteforce(&m, alpha * 2, tau, n, u128::MAX).unwrap();
        if out != OracleOutcome::Pass {
            counterexamples.push(draw);
        }
    }
    let total: usize = passing.values().sum();
    outcome(
        counterexamples.is_empty() && total > 0,
        format!(
            "{instances} instances, {total} matrices satisfy the pairwise condition \
             (by n: {passing:?}), counterexamples {counterexamples:?}"
        ),
    )
}

fn checker_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut mismatches, mut cells, mut violations) = (Vec::new(), 0usize, 0usize);
    for draw in 0..100 {
        let (n, t) = (rng.gen_range(2..=6), rng.gen_range(3..=64));
        let m = random_matrix(&mut rng, n, t);
        let table = random_table(&mut rng, t, n);
        let alpha = random_alpha(&mut rng);
        let full = check_cbp(&m, alpha, &table, CheckMode::Full);
        let expect = naive_violations(&m, alpha, &table);
        cells += (n - 1) * n * (1 + (n - 1) * t);
        violations += expect.len();
        if full.violations != expect || full.passed != expect.is_empty() {
            mismatches.push(draw);
        }
    }
    outcome(
        mismatches.is_empty(),
        format!("100 matrices, {cells} cells, {violations} violations, mismatches {mismatches:?}"),
    )
}

fn hand_fixtures() -> Outcome {
    let one = r(1, 1);
    let pass = verify_ursc_bruteforce(&fixture("pass16"), one, |_| 15, 2, 1 << 20).unwrap();
    let fail = verify_ursc_bruteforce(&fixture("fail16"), one, |_| 15, 2, 1 << 20).unwrap();
    let fail_ok = match &fail {
        OracleOutcome::Violation(w) => w.k == 2 && w.shifts.iter().all(|&(_, s)| s == 0),
        OracleOutcome::Pass => false,
    };
    let witness = match &fail {
        OracleOutcome::Violation(w) => format!("{:?}", w.shifts),
        OracleOutcome::Pass => "none".into(),
    };
    outcome(
        pass == OracleOutcome::Pass && fail_ok,
        format!("{{0,4}}/{{0,8}}: {pass:?}; {{0,4}}/{{0,5}}: witness shifts {witness}"),
    )
}

fn sampling_fidelity() -> Outcome {
    let params = ConstructionParams::new(16, r(1, 1), r(1, 2), r(1, 1), 0).unwrap();
    let draws = 100_000u64;
    let blocks = params.block_count;
    let mut ones = vec![0u64; blocks];
    for seed in 0..draws {
        let m = sample_matrix(&params.with_seed(seed));
        for col in m.columns() {
            for row in col.iter_ones() {
                ones[row / params.block_len] += 1;
            }
        }
    }
    let per_block = (draws as usize * params.n * params.block_len) as f64;
    let mut worst = (0usize, 0.0f64);
    let mut outside = Vec::new();
    let mut chi2 = 0.0;
    for (b, &count) in ones.iter().enumerate().skip(1) {
        let p = 1.0 / ((b + 1) as f64).sqrt();
        let se = (p * (1.0 - p) / per_block).sqrt();
        let z = (count as f64 / per_block - p).abs() / se;
        chi2 += z * z;
        if z > worst.1 {
            worst = (b, z);
        }
        if z > 3.0 {
            outside.push(b);
        }
    }
    let block0_full = ones[0] as f64 == per_block;
    // Under a correct sampler each block leaves 3 SE with probability
    // 0.0027, independently of the others.
    let df = (blocks - 1) as f64;
    let tail = binomial_tail(blocks - 1, 0.0027, outside.len());
    outcome(
        block0_full && outside.is_empty(),
        format!(
            "{draws} matrices, {blocks} blocks, block 0 all ones: {block0_full}, \
             largest deviation {:.2} SE at block {}, beyond 3 SE: {outside:?}; \
             a correct sampler leaves 3 SE in {:.2} blocks on average and in at least {} \
             with probability {tail:.2}; chi-square {chi2:.1} on {df} df (z = {:.2})",
            worst.1,
            worst.0,
            df * 0.0027,
            outside.len(),
            (chi2 - df) / (2.0 * df).sqrt()
        ),
    )
}

/// `P(X >= m)` for `X ~ Binomial(n, p)`.
fn binomial_tail(n: usize, p: f64, m: usize) -> f64 {
    let mut term = (1.0 - p).powi(n as i32);
    let mut below = 0.0;
    for x in 0..m {
        below += term;
        term *= (n - x) as f64 / (x + 1) as f64 * p / (1.0 - p);
    }
    1.0 - below
}

fn statistical_bounds() -> Outcome {
    let params = ConstructionParams::new(32, r(1, 1), r(1, 2), r(64, 1), 0).unwrap();
    let stats = empirical_segment_stats(&params, 4, 0, 10_000).unwrap();
    let b = expectation_bounds(&params, 4);
    let upper = ursc::rational::to_f64(&stats.mean_upper);
    let lower = ursc::rational::to_f64(&stats.mean_lower);
    outcome(
        b.upper.contains(upper) && b.lower.contains(lower),
        format!(
            "10000 trials, upper mean {upper:.2} in ({:.2}, {:.2}), \
             lower mean {lower:.2} in ({:.2}, {:.2})",
            b.upper.low, b.upper.high, b.lower.low, b.lower.high
        ),
    )
}

// Calibrated with `cargo run --release --example calibrate`; see the README.
const CALIBRATED_C: i64 = 183;
const PINNED_SEED: u64 = 0;
const PINNED_ITERATIONS: usize = 6;
const PINNED_SHA256: &str = "08cfbfa128a0b0da4acc06082439f1c8e2a9ea5db0e3094db9244436d27da774";

fn construction_fixture() -> Outcome {
    let params = ConstructionParams::new(8, r(1, 1), r(1, 2), r(CALIBRATED_C, 1), PINNED_SEED);
    let Ok(params) = params else {
        return outcome(false, "calibrated c is not set");
    };
    match construct_ursc(&params, 20) {
        Ok(c) => {
            let hash = hex::encode(Sha256::digest(c.matrix.to_text().as_bytes()));
            outcome(
                c.iterations == PINNED_ITERATIONS && hash == PINNED_SHA256,
                format!(
                    "n=8 alpha=1 eps=1/2 c={CALIBRATED_C} seed={PINNED_SEED} t={}: \
                     {} iterations, sha256 {hash}",
                    params.t, c.iterations
                ),
            )
        }
        Err(e) => outcome(false, format!("construction failed: {e}")),
    }
}

/// Every connected graph whose nodes are a nonempty subset of `1..=n_ids`.
fn connected_graphs(n_ids: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for set in 1u32..(1 << n_ids) {
        let nodes: Vec<usize> = (1..=n_ids).filter(|v| set >> (v - 1) & 1 == 1).collect();
        let pairs: Vec<(usize, usize)> = nodes
            .iter()
            .flat_map(|&a| nodes.iter().filter(move |&&b| b > a).map(move |&b| (a, b)))
            .collect();
        for pick in 0u32..(1 << pairs.len()) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| pick >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let mut reach = vec![nodes[0]];
            let mut grew = true;
            while grew {
                grew = false;
                for &(a, b) in &edges {
                    for (x, y) in [(a, b), (b, a)] {
                        if reach.contains(&x) && !reach.contains(&y) {
                            reach.push(y);
                            grew = true;
                        }
                    }
                }
            }
            if reach.len() == nodes.len() {
                out.push(Graph::new(n_ids, nodes.iter().copied(), edges).unwrap());
            }
        }
    }
    out
}

fn beeping_sweep() -> Outcome {
    let m = fixture("star4_t162");
    let code = BeepCode::certify(m.clone(), 50_000_000);
    let p = (m.t() * block_len(4)) as u64;
    let graphs = connected_graphs(4);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut safety, mut inclusion, mut windows, mut late) = (0, 0, 0u64, 0);
    let mut simulated = 0;
    for g in &graphs {
        let sweep = phase_space_sweep(g, &m).unwrap();
        safety += sweep.safety.len();
        inclusion += sweep.inclusion.len();
        windows += sweep.windows;
        // replay sampled schedules against the same deadline
        for _ in 0..3 {
            let s = WakeSchedule::new(g.nodes().map(|v| (v, rng.gen_range(0..p))).collect());
            let last = s.iter().map(|(_, x)| x).max().unwrap();
            let run = simulate_neighborhood_learning(g, &s, &code, last + sweep.deadline).unwrap();
            simulated += 1;
            for (a, b) in g.edges() {
                let mutual = s.get(a).unwrap().max(s.get(b).unwrap());
                for (v, u) in [(a, b), (b, a)] {
                    if !run
                        .learned_at(v, u)
                        .is_some_and(|x| x - mutual < sweep.deadline)
                    {
                        late += 1;
                    }
                }
            }
        }
    }
    outcome(
        code.capacity() == 4 && safety == 0 && inclusion == 0 && late == 0,
        format!(
            "{} graphs, period {p}, deadline {}, {windows} windows, {safety} safety and \
             {inclusion} inclusion witnesses, {simulated} sampled schedules with {late} late edges",
            graphs.len(),
            2 * p
        ),
    )
}

fn contention_sweep() -> Outcome {
    let m = fixture("pass16");
    let protocol = CrProtocol::forced(1).unwrap();
    let horizon = protocol.default_horizon(&m, 2);
    match exhaustive_cr_check(&m, &protocol, 2, 1, 16, 1_000) {
        Ok(found) => outcome(
            found.is_none() && horizon == 16,
            format!("|T| <= 2, offsets in [0,16)^|T|, horizon {horizon}: counterexample {found:?}"),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn block_id_properties() -> Outcome {
    let mut close_pairs = 0;
    for n in 1..=256 {
        let ids: Vec<Vec<bool>> = (1..=n)
            .map(|v| block_id(v, n).unwrap().iter().collect())
            .collect();
        for a in 0..n {
            for b in a + 1..n {
                if ids[a].iter().zip(&ids[b]).filter(|(x, y)| x != y).count() < 2 {
                    close_pairs += 1;
                }
            }
        }
    }
    let (mut windows, mut decoded) = (0u64, 0);
    for n in 1..=64 {
        let len = block_len(n);
        let mut blocks: Vec<Vec<bool>> = (1..=n)
            .map(|v| block_id(v, n).unwrap().iter().collect())
            .collect();
        blocks.push(vec![false; len]);
        for a in &blocks {
            for b in &blocks {
                let joined: Vec<bool> = a.iter().chain(b).copied().collect();
                for off in 1..len {
                    let window = BitVector::from_bools(&joined[off..off + len]).unwrap();
                    windows += 1;
                    if decode_block_id(&window, n).is_some() {
                        decoded += 1;
                    }
                }
            }
        }
    }
    outcome(
        close_pairs == 0 && decoded == 0,
        format!(
            "n <= 256: {close_pairs} id pairs at distance < 2; n <= 64: \
             {decoded} of {windows} misaligned windows decode"
        ),
    )
}

struct Capture {
    code: Option<i32>,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    file: Option<Vec<u8>>,
}

fn run_cli(args: &[String], parallelism: usize, out: &Path) -> Capture {
    let args: Vec<String> = args
        .iter()
        .map(|a| a.replace("{out}", &out.display().to_string()))
        .collect();
    let o = Command::new(env!("CARGO_BIN_EXE_ursc"))
        .arg("--parallelism")
        .arg(parallelism.to_string())
        .args(&args)
        .env_remove("URSC_SEED")
        .output()
        .expect("running ursc");
    Capture {
        code: o.status.code(),
        stdout: o.stdout,
        stderr: o.stderr,
        file: std::fs::read(out).ok(),
    }
}

fn cli_corpus() -> Vec<Vec<String>> {
    let fx = |name: &str| fixtures_dir().join(name).display().to_string();
    let cp = |name: &str| corpus_dir().join(name).display().to_string();
    let mut codes: Vec<String> = [
        "pass16",
        "fail16",
        "pair4_t24",
        "star4_t162",
        "broadcast8_t48",
    ]
    .iter()
    .map(|n| fx(&format!("{n}.ursc")))
    .collect();
    codes.extend(
        ["identical8.ursc", "zero6.ursc", "truncated.ursc"]
            .iter()
            .map(|n| cp(n)),
    );
    let mut runs: Vec<Vec<String>> = Vec::new();
    let mut push = |v: &[&str]| runs.push(v.iter().map(|s| s.to_string()).collect());
    for code in &codes {
        push(&["check", code]);
        push(&["check", code, "--fail-fast"]);
        push(&["check", code, "-o", "{out}"]);
        push(&["verify-classic", code, "--k", "2"]);
        push(&["verify-oracle", code, "--k-max", "2"]);
    }
    push(&["verify-oracle", &fx("pair4_t24.ursc")]);
    push(&["verify-oracle", &fx("pass16.ursc"), "--tau", "7"]);
    push(&["verify-oracle", &fx("star4_t162.ursc"), "--budget", "1000"]);
    let mut scenarios: Vec<String> = std::fs::read_dir(corpus_dir())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|f| f.ends_with(".json"))
        .collect();
    scenarios.sort();
    for s in &scenarios {
        let path = cp(s);
        if s.starts_with("cr_") {
            push(&["sim-cr", &path]);
            push(&["sim-cr", &path, "-o", "{out}"]);
        } else {
            push(&["sim-beep", &path]);
            push(&["sim-beep", &path, "--sweep", "-o", "{out}"]);
        }
    }
    push(&[
        "construct",
        "--n",
        "4",
        "--c",
        "4",
        "--seed",
        "3",
        "-o",
        "{out}",
    ]);
    push(&[
        "construct",
        "--n",
        "5",
        "--c",
        "1/2",
        "--max-iters",
        "3",
        "-o",
        "{out}",
    ]);
    push(&[
        "construct",
        "--n",
        "4",
        "--c",
        "4",
        "--t",
        "40",
        "-o",
        "{out}",
    ]);
    push(&[
        "stats", "--n", "8", "--c", "4", "--k", "2", "--trials", "2000",
    ]);
    push(&[
        "stats", "--n", "16", "--c", "1", "--k", "3", "--shift", "-5", "--trials", "500",
    ]);
    push(&["check", "/nonexistent.ursc"]);
    runs
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs = cli_corpus();
    let mut differing = Vec::new();
    let mut codes: BTreeMap<i32, usize> = BTreeMap::new();
    for (i, args) in runs.iter().enumerate() {
        let one = run_cli(args, 1, &dir.path().join(format!("{i}-p1")));
        let eight = run_cli(args, 8, &dir.path().join(format!("{i}-p8")));
        *codes.entry(one.code.unwrap_or(-1)).or_default() += 1;
        let same = one.code == eight.code
            && one.stdout == eight.stdout
            && one.stderr == eight.stderr
            && one.file == eight.file;
        if !same {
            differing.push(args.join(" "));
        }
    }
    outcome(
        differing.is_empty(),
        format!(
            "{} invocations, exit codes {codes:?}, differing: {differing:?}",
            runs.len()
        ),
    )
}

fn main() {
    let criteria = [
        Criterion {
            name: "pairwise condition implies resilience at double alpha",
            limit: Duration::from_secs(300),
            gating: true,
            run: oracle_equivalence,
        },
        Criterion {
            name: "optimized checker matches naive evaluation",
            limit: Duration::from_secs(120),
            gating: true,
            run: checker_consistency,
        },
        Criterion {
            name: "hand fixtures",
            limit: Duration::from_secs(1),
            gating: true,
            run: hand_fixtures,
        },
        Criterion {
            name: "sampling fidelity",
            limit: Duration::from_secs(60),
            gating: false,
            run: sampling_fidelity,
        },
        Criterion {
            name: "segment weight expectations",
            limit: Duration::from_secs(120),
            gating: true,
            run: statistical_bounds,
        },
        Criterion {
            name: "pinned construction",
            limit: Duration::from_secs(600),
            gating: true,
            run: construction_fixture,
        },
        Criterion {
            name: "beeping safety and inclusion",
            limit: Duration::from_secs(900),
            gating: true,
            run: beeping_sweep,
        },
        Criterion {
            name: "contention resolution sweep",
            limit: Duration::from_secs(60),
            gating: true,
            run: contention_sweep,
        },
        Criterion {
            name: "block id properties",
            limit: Duration::from_secs(60),
            gating: true,
            run: block_id_properties,
        },
        Criterion {
            name: "cli output independent of parallelism",
            limit: Duration::from_secs(600),
            gating: true,
            run: cli_determinism,
        },
    ];
    let filters: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        if !filters.is_empty() && !filters.iter().any(|f| c.name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = (c.run)();
        let took = start.elapsed();
        let pass = o.pass && took <= c.limit;
        failed += usize::from(!pass && c.gating);
        println!(
            "acceptance {:>2} {}: {} ({}; {:.1}s of {}s)",
            i + 1,
            c.name,
            match (pass, c.gating) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "FAIL (not gating)",
            },
            o.detail,
            took.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
