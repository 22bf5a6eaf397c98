//! The `forklat` command line.
//!
//! [`run`] parses arguments and writes to the given streams, so the binary and
//! the tests drive exactly the same code. Exit status: 0 on success, 1 when
//! `cep` finds a counterexample, 2 on usage or input errors.

pub mod dot;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use forklat_core::{
    all_congruences, cep_verify, insert_fork, parse_with, random_sps, serialize, BuildOptions,
    CorpusSpec, CoveringSquare, FiniteLattice, ForkAnnotation, LatticeFile, StopReason,
};

#[derive(Debug, Parser)]
#[command(
    name = "forklat",
    version,
    about = "Fork extensions of slim planar semimodular lattices"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a file describes a lattice and report its SPS predicates.
    Validate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Accept cover lists that are not transitively reduced.
        #[arg(long)]
        reduce: bool,
    },
    /// Insert a fork at a covering square and write L[S].
    Fork {
        file: PathBuf,
        #[command(flatten)]
        square: SquareArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// List Con(L).
    Congruences {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Verify the congruence extension property for one fork.
    Cep {
        file: PathBuf,
        #[command(flatten)]
        square: SquareArg,
        #[arg(long)]
        json: bool,
    },
    /// Generate a seeded sequence of fork extensions of a grid.
    Corpus {
        /// Grid size as `p,q`.
        #[arg(long, value_parser = parse_grid)]
        grid: (usize, usize),
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 64)]
        size_cap: usize,
    },
    /// Write the order diagram in Graphviz DOT.
    Dot {
        file: PathBuf,
        /// Colour by the N-th congruence, numbered as in `congruences`.
        #[arg(long, value_name = "N")]
        congruence: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct SquareArg {
    /// `o,al,ar,i`, or `o,i` for the square with that bottom and top.
    #[arg(long)]
    square: String,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (p, q) = s.split_once(',').ok_or("expected p,q")?;
    let p: usize = p.trim().parse().map_err(|e| format!("{e}"))?;
    let q: usize = q.trim().parse().map_err(|e| format!("{e}"))?;
    if p == 0 || q == 0 {
        return Err("grid sides must be positive".into());
    }
    Ok((p, q))
}

/// Resolves a `--square` value against `l`.
///
/// Four labels are taken in the given order; two labels `o,i` pick the square
/// with that bottom and top, with the smaller-labelled atom on the left.
pub fn resolve_square(l: &FiniteLattice, spec: &str) -> Result<CoveringSquare> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    match parts[..] {
        [o, al, ar, i] => Ok(l.square_by_labels(o, al, ar, i)?),
        [o, i] => {
            let (o, i) = (l.require(o)?, l.require(i)?);
            let found: Vec<CoveringSquare> = l
                .covering_squares()
                .into_iter()
                .filter(|s| s.o == o && s.i == i)
                .collect();
            match found[..] {
                [s] => Ok(s),
                [] => bail!("no covering square from {} to {}", l.label(o), l.label(i)),
                _ => bail!(
                    "{} covering squares from {} to {}; give all four labels",
                    found.len(),
                    l.label(o),
                    l.label(i)
                ),
            }
        }
        _ => bail!("--square expects o,al,ar,i or o,i, got {spec:?}"),
    }
}

fn read_lattice(path: &Path, reduce: bool) -> Result<LatticeFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_with(
        &text,
        BuildOptions {
            reduce_covers: reduce,
        },
    )
    .with_context(|| format!("parsing {}", path.display()))
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Serialize)]
struct ValidateReport {
    elements: usize,
    covers: usize,
    semimodular: bool,
    slim: bool,
    planar: bool,
    sps: bool,
}

#[derive(Serialize)]
struct CongruenceList {
    count: usize,
    congruences: Vec<Vec<Vec<String>>>,
}

/// Runs one command; returns the exit status.
fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Validate { file, json, reduce } => {
            let l = read_lattice(&file, reduce)?.lattice;
            let (semimodular, slim, planar) = (l.is_semimodular(), l.is_slim(), l.is_planar());
            let r = ValidateReport {
                elements: l.len(),
                covers: l.cover_count(),
                semimodular,
                slim,
                planar,
                sps: semimodular && slim && planar,
            };
            if json {
                json_line(out, &r)?;
            } else {
                writeln!(
                    out,
                    "lattice: ok; semimodular: {}; slim: {}; planar: {}; SPS: {}",
                    yes(r.semimodular),
                    yes(r.slim),
                    yes(r.planar),
                    yes(r.sps)
                )?;
                writeln!(out, "elements: {}; covers: {}", r.elements, r.covers)?;
            }
        }
        Command::Fork {
            file,
            square,
            out: path,
        } => {
            let l = read_lattice(&file, false)?.lattice;
            let s = resolve_square(&l, &square.square)?;
            let ext = insert_fork(&l, s)?;
            let note = ForkAnnotation::from_extension(&ext);
            fs::write(&path, serialize(&ext.extended, Some(&note)))
                .with_context(|| format!("writing {}", path.display()))?;
            writeln!(
                out,
                "fork at {}: n = {}, m = {}, {} elements",
                s.labels(&l).join(","),
                ext.n(),
                ext.m(),
                ext.extended.len()
            )?;
        }
        Command::Congruences { file, json } => {
            let l = read_lattice(&file, false)?.lattice;
            let con = all_congruences(&l)?;
            if json {
                let list = CongruenceList {
                    count: con.len(),
                    congruences: con
                        .iter()
                        .map(|c| {
                            c.signature(&l)
                                .into_iter()
                                .map(|b| b.into_iter().map(String::from).collect())
                                .collect()
                        })
                        .collect(),
                };
                json_line(out, &list)?;
            } else {
                writeln!(out, "{} congruences", con.len())?;
                for c in &con {
                    writeln!(out, "{}", c.format(&l))?;
                }
            }
        }
        Command::Cep { file, square, json } => {
            let l = read_lattice(&file, false)?.lattice;
            let s = resolve_square(&l, &square.square)?;
            let ext = insert_fork(&l, s)?;
            let report = cep_verify(&ext)?;
            if json {
                json_line(out, &report)?;
            } else {
                writeln!(
                    out,
                    "square {}: n = {}, m = {}; |L| = {}, |L[S]| = {}",
                    report.square.join(","),
                    report.n,
                    report.m,
                    report.base_size,
                    report.extension_size
                )?;
                for rec in &report.congruences {
                    let blocks = |b: &[Vec<String>]| -> String {
                        b.iter().map(|x| format!("{{{}}}", x.join(","))).collect()
                    };
                    let count = rec
                        .extension_count
                        .map_or("-".to_string(), |c| c.to_string());
                    let ok = rec.oracle_equal && rec.restriction_ok && rec.congruence_ok;
                    writeln!(
                        out,
                        "{} {:?} extensions={} {}",
                        blocks(&rec.alpha_blocks),
                        rec.case,
                        count,
                        if ok { "ok" } else { "FAIL" }
                    )?;
                }
                for c in &report.counterexamples {
                    writeln!(out, "counterexample: {} ({:?})", c.alpha, c.clause)?;
                }
                if report.verified {
                    writeln!(out, "{} congruences verified", report.congruences.len())?;
                } else {
                    let n = report.counterexamples.len();
                    writeln!(out, "{n} counterexample{}", if n == 1 { "" } else { "s" })?;
                }
            }
            return Ok(if report.verified { 0 } else { 1 });
        }
        Command::Corpus {
            grid: (p, q),
            steps,
            seed,
            out: dir,
            size_cap,
        } => {
            let spec = CorpusSpec {
                size_cap,
                ..CorpusSpec::new(p, q, steps, seed)
            };
            let run = random_sps(&spec)?;
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let mut manifest =
                format!("grid {p}x{q} steps {steps} seed {seed} size_cap {size_cap}\n");
            fs::write(dir.join("00.lat"), serialize(&run.grid, None))?;
            manifest.push_str(&format!("00.lat grid elements={}\n", run.grid.len()));
            for (k, ext) in run.extensions.iter().enumerate() {
                let name = format!("{:02}.lat", k + 1);
                let note = ForkAnnotation::from_extension(ext);
                fs::write(dir.join(&name), serialize(&ext.extended, Some(&note)))?;
                manifest.push_str(&format!(
                    "{name} square={} n={} m={} elements={}\n",
                    ext.square.labels(&ext.base).join(","),
                    ext.n(),
                    ext.m(),
                    ext.extended.len()
                ));
            }
            match run.stopped {
                Some(StopReason::NoSquare) => manifest.push_str("stopped: no covering square\n"),
                Some(StopReason::SizeCap { size, cap }) => {
                    manifest.push_str(&format!("stopped: size {size} exceeds cap {cap}\n"))
                }
                None => {}
            }
            fs::write(dir.join("manifest.txt"), &manifest)?;
            write!(out, "{manifest}")?;
        }
        Command::Dot { file, congruence } => {
            let f = read_lattice(&file, false)?;
            let colour = match congruence {
                Some(k) => {
                    let con = all_congruences(&f.lattice)?;
                    let n = con.len();
                    Some(con.into_iter().nth(k).ok_or_else(|| {
                        anyhow!("--congruence {k} out of range: the lattice has {n} congruences")
                    })?)
                }
                None => None,
            };
            write!(
                out,
                "{}",
                dot::export_dot(&f.lattice, f.fork.as_ref(), colour.as_ref())
            )?;
        }
    }
    Ok(0)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}
