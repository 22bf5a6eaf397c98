//! Test corpora: grids and seeded sequences of fork insertions.

use rand_core::Rng;
use rand_pcg::Pcg32;

use crate::error::ForkError;
use crate::fork::{insert_fork, ForkExtension};
use crate::lattice::{BuildOptions, CoveringSquare, FiniteLattice};

/// Stream constant for the corpus generator.
pub const PCG_STREAM: u64 = 0x0a02_bdbf_7bb3_c0a7;

/// The product of a `p`-element chain and a `q`-element chain.
///
/// Element `(a, b)` is labelled `"{a}{b}"` when both factors have at most ten
/// elements and `"{a}.{b}"` otherwise.
pub fn grid(p: usize, q: usize) -> FiniteLattice {
    assert!(p >= 1 && q >= 1, "grid factors must be nonempty");
    let sep = if p <= 10 && q <= 10 { "" } else { "." };
    let id = |a: usize, b: usize| a * q + b;
    let mut labels = Vec::with_capacity(p * q);
    let mut covers = Vec::new();
    for a in 0..p {
        for b in 0..q {
            labels.push(format!("{a}{sep}{b}"));
            if a + 1 < p {
                covers.push((id(a, b), id(a + 1, b)));
            }
            if b + 1 < q {
                covers.push((id(a, b), id(a, b + 1)));
            }
        }
    }
    FiniteLattice::from_cover_indices(labels, &covers, BuildOptions::default())
        .expect("grids are lattices")
}

/// Small named lattices used throughout the tests and examples.
pub mod named {
    use super::*;
    use crate::sublattice::{S7_COVERS, S7_LABELS};

    fn build(labels: &[&str], covers: &[(usize, usize)]) -> FiniteLattice {
        FiniteLattice::from_cover_indices(
            labels.iter().map(|s| s.to_string()).collect(),
            covers,
            BuildOptions::default(),
        )
        .expect("named lattice")
    }

    /// `c0 < c1 < … < c{n-1}`.
    pub fn chain(n: usize) -> FiniteLattice {
        let labels: Vec<String> = (0..n).map(|k| format!("c{k}")).collect();
        let covers: Vec<_> = (1..n).map(|k| (k - 1, k)).collect();
        FiniteLattice::from_cover_indices(labels, &covers, BuildOptions::default()).expect("chain")
    }

    /// The square `o ≺ al, ar ≺ i`.
    pub fn b2() -> FiniteLattice {
        build(&["o", "al", "ar", "i"], &[(0, 1), (0, 2), (1, 3), (2, 3)])
    }

    /// The seven-element lattice `{o, zl, zr, al, ar, t, i}`.
    pub fn s7() -> FiniteLattice {
        build(&S7_LABELS, &S7_COVERS)
    }

    /// The pentagon `0 ≺ a ≺ 1`, `0 ≺ b ≺ c ≺ 1`.
    pub fn n5() -> FiniteLattice {
        build(
            &["0", "a", "b", "c", "1"],
            &[(0, 1), (1, 4), (0, 2), (2, 3), (3, 4)],
        )
    }

    /// The diamond with atoms `a`, `b`, `c`.
    pub fn m3() -> FiniteLattice {
        build(
            &["0", "a", "b", "c", "1"],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)],
        )
    }

    /// Subsets of a `k`-element set, labelled by bit strings.
    pub fn boolean(k: usize) -> FiniteLattice {
        let n = 1usize << k;
        let labels: Vec<String> = (0..n)
            .map(|s| {
                (0..k)
                    .map(|b| if s >> b & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect();
        let covers: Vec<_> = (0..n)
            .flat_map(|s| {
                (0..k)
                    .filter(move |b| s >> b & 1 == 0)
                    .map(move |b| (s, s | 1 << b))
            })
            .collect();
        FiniteLattice::from_cover_indices(labels, &covers, BuildOptions::default())
            .expect("boolean lattice")
    }
}

/// Parameters of a seeded corpus run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusSpec {
    pub p: usize,
    pub q: usize,
    pub fork_steps: usize,
    pub seed: u64,
    pub size_cap: usize,
}

impl CorpusSpec {
    pub fn new(p: usize, q: usize, fork_steps: usize, seed: u64) -> Self {
        CorpusSpec {
            p,
            q,
            fork_steps,
            seed,
            size_cap: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StopReason {
    /// The current lattice has no covering square.
    NoSquare,
    /// The next extension would have exceeded the size cap.
    SizeCap { size: usize, cap: usize },
}

#[derive(Debug, Clone)]
pub struct CorpusRun {
    pub grid: FiniteLattice,
    /// One extension per completed step; each base is the previous extension.
    pub extensions: Vec<ForkExtension>,
    pub stopped: Option<StopReason>,
}

/// Uniform index below `len` from one 32-bit draw (multiply-shift).
pub(crate) fn pick(rng: &mut Pcg32, len: usize) -> usize {
    ((u64::from(rng.next_u32()) * len as u64) >> 32) as usize
}

/// Starts from `grid(p, q)` and inserts `fork_steps` forks, each at a
/// covering square chosen by a PCG32 generator seeded with
/// `Pcg32::new(seed, PCG_STREAM)` from [`FiniteLattice::covering_squares`].
pub fn random_sps(spec: &CorpusSpec) -> Result<CorpusRun, ForkError> {
    let start = grid(spec.p, spec.q);
    let mut rng = Pcg32::new(spec.seed, PCG_STREAM);
    let mut current = start.clone();
    let mut extensions = Vec::new();
    let mut stopped = None;
    if start.len() > spec.size_cap {
        stopped = Some(StopReason::SizeCap {
            size: start.len(),
            cap: spec.size_cap,
        });
    }
    for _ in 0..spec.fork_steps {
        if stopped.is_some() {
            break;
        }
        let squares: Vec<CoveringSquare> = current.covering_squares();
        if squares.is_empty() {
            stopped = Some(StopReason::NoSquare);
            break;
        }
        let square = squares[pick(&mut rng, squares.len())];
        let ext = insert_fork(&current, square)?;
        if ext.extended.len() > spec.size_cap {
            stopped = Some(StopReason::SizeCap {
                size: ext.extended.len(),
                cap: spec.size_cap,
            });
            break;
        }
        current = ext.extended.clone();
        extensions.push(ext);
    }
    Ok(CorpusRun {
        grid: start,
        extensions,
        stopped,
    })
}

/// Every fork of every grid `p × q` with `2 ≤ p, q ≤ max_side`, at every covering square.
pub fn grid_forks(max_side: usize) -> Result<Vec<ForkExtension>, ForkError> {
    let mut out = Vec::new();
    for p in 2..=max_side {
        for q in 2..=max_side {
            let g = grid(p, q);
            for sq in g.covering_squares() {
                out.push(insert_fork(&g, sq)?);
            }
        }
    }
    Ok(out)
}

/// The default verification corpus: all single forks of grids up to 4×4 and
/// three-step seeded runs from every such grid with seeds `0..seeds`.
pub fn default_corpus(seeds: u64) -> Result<Vec<ForkExtension>, ForkError> {
    let mut out = grid_forks(4)?;
    for p in 2..=4 {
        for q in 2..=4 {
            for seed in 0..seeds {
                out.extend(random_sps(&CorpusSpec::new(p, q, 3, seed))?.extensions);
            }
        }
    }
    Ok(out)
}
