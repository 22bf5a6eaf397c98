//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use forklat_core::corpus::{default_corpus, grid, named};
use forklat_core::oracle::{congruences_by_filtering, exhaustive_agreement, random_agreement};
use forklat_core::{
    all_congruences, cep_verify, count_extensions, insert_fork, parse, principal_congruence,
    serialize, Congruence, ExtensionCase, FiniteLattice, ForkAnnotation, ForkExtension,
};

const FORK_ANCHOR_LIMIT: Duration = Duration::from_secs(1);
const AGREEMENT_MAX_SIZE: usize = 8;
const AGREEMENT_MIN_CHECKS: usize = 10_000;
const RANDOM_PARTITIONS: usize = 10_000;
const RANDOM_SEED: u64 = 7;
const AGREEMENT_LIMIT: Duration = Duration::from_secs(60);
const CORPUS_SEEDS: u64 = 2;
const CEP_LIMIT: Duration = Duration::from_secs(300);
const CORPUS_SIZE_CAP: usize = 64;

type Outcome = Result<String, String>;
type Check = fn() -> Outcome;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let t = start.elapsed();
    ensure!(t <= limit, "took {t:.2?}, limit {limit:?}");
    Ok(t)
}

/// Fork anchors: B2 becomes S7; the top square of the 3×3 grid gives 14 elements.
fn fork_anchors() -> Outcome {
    let start = Instant::now();
    let b2 = named::b2();
    let f = insert_fork(&b2, b2.covering_squares()[0]).map_err(|e| e.to_string())?;
    let all = f.extended.elements().collect();
    ensure!(
        f.extended.len() == 7,
        "B2 fork has {} elements",
        f.extended.len()
    );
    ensure!(
        (f.n(), f.m()) == (1, 1),
        "B2 fork has n, m = {}, {}",
        f.n(),
        f.m()
    );
    ensure!(f.extended.is_s7(&all), "B2 fork is not S7");

    let g = grid(3, 3);
    let top = g
        .square_by_labels("11", "21", "12", "22")
        .map_err(|e| e.to_string())?;
    let f = insert_fork(&g, top).map_err(|e| e.to_string())?;
    ensure!(
        f.extended.len() == 14,
        "grid fork has {} elements",
        f.extended.len()
    );
    ensure!(
        (f.n(), f.m()) == (2, 2),
        "grid fork has n, m = {}, {}",
        f.n(),
        f.m()
    );
    let names = |xs: &[forklat_core::ElementId]| -> Vec<String> {
        xs.iter().map(|&x| g.label(x).to_string()).collect()
    };
    ensure!(
        names(&f.labels.x_left) == ["21", "20"],
        "x_l = {:?}",
        names(&f.labels.x_left)
    );
    ensure!(
        names(&f.labels.y_left) == ["11", "10"],
        "y_l = {:?}",
        names(&f.labels.y_left)
    );
    let t = within(FORK_ANCHOR_LIMIT, start)?;
    Ok(format!(
        "B2 -> S7 (n = m = 1), 3x3 top square -> 14 elements (n = m = 2), {t:.2?}"
    ))
}

/// Cover-condition checker against the triple scan.
fn checker_agreement() -> Outcome {
    let start = Instant::now();
    let all = exhaustive_agreement(AGREEMENT_MAX_SIZE);
    ensure!(
        all.checks >= AGREEMENT_MIN_CHECKS,
        "only {} exhaustive checks",
        all.checks
    );
    ensure!(
        all.disagreements.is_empty(),
        "disagree on {:?}",
        &all.disagreements[..1]
    );
    let lattices: Vec<FiniteLattice> = default_corpus(CORPUS_SEEDS)
        .map_err(|e| e.to_string())?
        .into_iter()
        .flat_map(|f| [f.base, f.extended])
        .collect();
    let random = random_agreement(&lattices, RANDOM_PARTITIONS, RANDOM_SEED);
    ensure!(
        random.checks == RANDOM_PARTITIONS,
        "{} random checks",
        random.checks
    );
    ensure!(
        random.disagreements.is_empty(),
        "disagree on {:?}",
        &random.disagreements[..1]
    );
    let t = within(AGREEMENT_LIMIT, start)?;
    Ok(format!(
        "{} exhaustive + {} random interval partitions, 0 disagreements, {t:.2?}",
        all.checks, random.checks
    ))
}

fn corpus() -> Result<Vec<ForkExtension>, String> {
    let c = default_corpus(CORPUS_SEEDS).map_err(|e| e.to_string())?;
    if let Some(f) = c.iter().find(|f| f.extended.len() > CORPUS_SIZE_CAP) {
        return Err(format!("corpus lattice with {} elements", f.extended.len()));
    }
    Ok(c)
}

/// The `cep` command on the base of `f` at its square, returning the exit status.
fn cli_cep(f: &ForkExtension, dir: &Path, k: usize) -> Result<i32, String> {
    let path = dir.join(format!("{k:03}.lat"));
    std::fs::write(&path, serialize(&f.base, None)).map_err(|e| e.to_string())?;
    let square = f.square.labels(&f.base).join(",");
    let out = Command::new(env!("CARGO_BIN_EXE_forklat"))
        .args(["cep", path.to_str().unwrap(), "--square", &square])
        .output()
        .map_err(|e| e.to_string())?;
    out.status
        .code()
        .ok_or_else(|| "cep was killed".to_string())
}

/// Every congruence of every corpus base extends, restricts back and equals the oracle.
fn cep_suite() -> Outcome {
    let start = Instant::now();
    let corpus = corpus()?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (mut alphas, mut failing, mut missing, mut bad_status) = (0, Vec::new(), 0, 0);
    for (k, f) in corpus.iter().enumerate() {
        let report = cep_verify(f).map_err(|e| e.to_string())?;
        alphas += report.congruences.len();
        if !report.verified {
            failing.push(!f.middle_steps().is_empty());
            let distinct: std::collections::BTreeSet<&str> = report
                .counterexamples
                .iter()
                .map(|c| c.alpha.as_str())
                .collect();
            missing += distinct.len();
        }
        let expected = if report.verified { 0 } else { 1 };
        if cli_cep(f, dir.path(), k)? != expected {
            bad_status += 1;
        }
    }
    ensure!(
        bad_status == 0,
        "{bad_status} CLI exit statuses disagree with the library"
    );
    ensure!(
        failing.is_empty(),
        "{} of {} instances have counterexamples ({} of {} congruences have no extension \
         to L[S]; every failing instance has a trajectory through the middle of an earlier S7: {})",
        failing.len(),
        corpus.len(),
        missing,
        alphas,
        failing.iter().all(|&crosses| crosses)
    );
    let t = within(CEP_LIMIT, start)?;
    Ok(format!(
        "{} instances, {alphas} congruences, 0 counterexamples, {t:.2?}",
        corpus.len()
    ))
}

/// Extension counts on B2 -> S7 and uniqueness across the corpus.
fn counts() -> Outcome {
    let s7 = named::s7();
    let filtered = congruences_by_filtering(&s7);
    let fast = all_congruences(&s7).map_err(|e| e.to_string())?;
    ensure!(
        filtered.len() == 5,
        "{} congruences of S7 by filtering",
        filtered.len()
    );
    ensure!(
        filtered
            .iter()
            .all(|p| fast.iter().any(|c| c.partition() == p)),
        "closure enumeration misses a congruence of S7"
    );

    let b2 = named::b2();
    let f = insert_fork(&b2, b2.covering_squares()[0]).map_err(|e| e.to_string())?;
    let id = |s: &str| b2.id(s).unwrap();
    let cases: [(&str, Congruence, usize); 4] = [
        ("1", Congruence::one(&b2), 1),
        ("left", principal_congruence(&b2, id("al"), id("i")), 1),
        ("right", principal_congruence(&b2, id("ar"), id("i")), 1),
        ("0", Congruence::zero(&b2), 2),
    ];
    for (name, alpha, want) in &cases {
        let got = count_extensions(&f, alpha).map_err(|e| e.to_string())?;
        ensure!(
            got == *want,
            "count for alpha = {name} is {got}, expected {want}"
        );
    }

    let (mut checked, mut wrong) = (0, Vec::new());
    for f in corpus()? {
        let report = cep_verify(&f).map_err(|e| e.to_string())?;
        for rec in report
            .congruences
            .iter()
            .filter(|r| r.case != ExtensionCase::ZeroOnS)
        {
            checked += 1;
            if rec.extension_count != Some(1) {
                wrong.push(rec.extension_count);
            }
        }
    }
    ensure!(
        wrong.is_empty(),
        "{} of {checked} non-zero congruences do not have exactly one extension (counts {:?})",
        wrong.len(),
        wrong.iter().collect::<std::collections::BTreeSet<_>>()
    );
    Ok(format!(
        "Con(S7) = 5, counts (1, 1, 1, 2), {checked} unique extensions in the corpus"
    ))
}

/// Sublattice and cover lemmas on every corpus extension.
fn lemma_suite() -> Outcome {
    let mut identities = 0;
    for f in corpus()? {
        let (b, e, l) = (&f.base, &f.extended, &f.labels);
        for x in b.elements() {
            for y in b.elements() {
                ensure!(
                    f.embed(b.join(x, y)) == e.join(f.embed(x), f.embed(y)),
                    "join not preserved"
                );
                ensure!(
                    f.embed(b.meet(x, y)) == e.meet(f.embed(x), f.embed(y)),
                    "meet not preserved"
                );
            }
        }
        for (zs, xs, ys) in [
            (&l.z_left, &l.x_left, &l.y_left),
            (&l.z_right, &l.x_right, &l.y_right),
        ] {
            for k in 0..zs.len() {
                let up: Vec<_> = e
                    .upper_covers(zs[k])
                    .iter()
                    .filter(|&&x| f.in_base(x))
                    .collect();
                let down: Vec<_> = e
                    .lower_covers(zs[k])
                    .iter()
                    .filter(|&&x| f.in_base(x))
                    .collect();
                ensure!(up == [&f.embed(xs[k])], "z has L-covers {up:?}");
                ensure!(down == [&f.embed(ys[k])], "z has L-lower covers {down:?}");
            }
        }
        let i = f.embed(f.square.i);
        ensure!(
            f.cover_in_l_above(l.t).ok() == Some(i),
            "cover of t in L is not i"
        );
        for y in l.fork_elements() {
            let up = f.cover_in_l_above(y).map_err(|e| e.to_string())?;
            let down = f.greatest_l_below(y).map_err(|e| e.to_string())?;
            for x in b.elements().map(|x| f.embed(x)) {
                let j = e.join(x, y);
                if f.in_base(j) {
                    identities += 1;
                    ensure!(
                        e.join(x, up) == j,
                        "join identity fails at {}, {}",
                        e.label(x),
                        e.label(y)
                    );
                }
                let m = e.meet(x, y);
                if f.in_base(m) {
                    identities += 1;
                    ensure!(
                        e.meet(x, down) == m,
                        "meet identity fails at {}, {}",
                        e.label(x),
                        e.label(y)
                    );
                }
            }
        }
        ensure!(
            e.elements().all(|x| e.upper_covers(x).len() <= 2),
            "element with 3 upper covers"
        );
        let seed = [f.embed(f.square.a_l), f.embed(f.square.a_r), l.t];
        ensure!(
            seed.iter().all(|&x| e.covers(x, i)),
            "a_l, a_r, t are not lower covers of i"
        );
        ensure!(
            e.is_s7(&e.sublattice_generated(&seed)),
            "a_l, a_r, t do not generate S7"
        );
        for x in e.elements().filter(|&x| e.lower_covers(x).len() == 3) {
            ensure!(
                e.is_s7(&e.sublattice_generated(e.lower_covers(x))),
                "no S7 at {}",
                e.label(x)
            );
        }
    }
    Ok(format!(
        "0 violations, {identities} join/meet identities checked"
    ))
}

fn forklat(args: &[&str]) -> Result<(i32, Vec<u8>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_forklat"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    Ok((out.status.code().unwrap_or(-1), out.stdout))
}

/// Byte-stable CLI output and text round-trips.
fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let (s7, b2, g33) = (data("s7.lat"), data("b2.lat"), data("grid33.lat"));
    let (s7, b2, g33) = (
        s7.to_str().unwrap(),
        b2.to_str().unwrap(),
        g33.to_str().unwrap(),
    );
    let mut runs = 0;
    for round in 0..2 {
        let fork_out = p(&format!("fork{round}.lat"));
        let corpus_out = p(&format!("corpus{round}"));
        let commands: Vec<Vec<&str>> = vec![
            vec!["validate", s7],
            vec!["validate", s7, "--json"],
            vec!["fork", b2, "--square", "o,al,ar,i", "--out", &fork_out],
            vec!["congruences", g33],
            vec!["congruences", g33, "--json"],
            vec!["cep", g33, "--square", "11,21,12,22"],
            vec!["cep", g33, "--square", "11,22", "--json"],
            vec![
                "corpus",
                "--grid",
                "3,3",
                "--steps",
                "3",
                "--seed",
                "5",
                "--out",
                &corpus_out,
            ],
            vec!["dot", s7],
            vec!["dot", g33, "--congruence", "3"],
        ];
        let mut outputs = Vec::new();
        for args in &commands {
            let (code, stdout) = forklat(args)?;
            ensure!(code == 0, "{args:?} exited with {code}");
            outputs.push(stdout);
            runs += 1;
        }
        outputs.push(std::fs::read(&fork_out).map_err(|e| e.to_string())?);
        for k in 0..=3 {
            let file = Path::new(&corpus_out).join(format!("{k:02}.lat"));
            outputs.push(std::fs::read(file).map_err(|e| e.to_string())?);
        }
        std::fs::write(p(&format!("round{round}")), outputs.concat()).map_err(|e| e.to_string())?;
    }
    let a = std::fs::read(p("round0")).map_err(|e| e.to_string())?;
    let b = std::fs::read(p("round1")).map_err(|e| e.to_string())?;
    ensure!(a == b, "CLI output differs between runs");

    let mut trips = 0;
    for f in corpus()? {
        let note = ForkAnnotation::from_extension(&f);
        for (l, fork) in [(&f.base, None), (&f.extended, Some(&note))] {
            let text = serialize(l, fork);
            let back = parse(&text).map_err(|e| e.to_string())?;
            ensure!(
                back.lattice.same_by_labels(l),
                "round trip changes a lattice"
            );
            ensure!(
                back.fork.as_ref() == fork,
                "round trip changes the fork line"
            );
            ensure!(
                serialize(&back.lattice, back.fork.as_ref()) == text,
                "serialization not stable"
            );
            trips += 1;
        }
    }
    Ok(format!(
        "{runs} CLI runs byte-identical, {trips} round trips exact"
    ))
}

fn main() {
    let criteria: [(&str, Check); 6] = [
        ("fork construction anchors", fork_anchors),
        (
            "cover conditions agree with substitution",
            checker_agreement,
        ),
        ("congruence extension property on the corpus", cep_suite),
        ("extension counts", counts),
        ("sublattice and cover lemmas", lemma_suite),
        ("determinism and round trip", determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
