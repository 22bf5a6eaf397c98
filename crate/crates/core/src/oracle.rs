//! Brute-force reference computations for cross-checking the fast paths.
//!
//! Everything here is exponential in the lattice size and only meant for
//! small inputs. None of it calls into the algorithms it is used to check.

use std::collections::HashSet;

use rand_pcg::Pcg32;
use rayon::prelude::*;

use crate::congruence::{is_congruence_by_covers, is_congruence_naive, Partition};
use crate::lattice::{BuildOptions, ElementId, FiniteLattice};

/// Least upper bound found by scanning all common upper bounds.
pub fn join_by_search(l: &FiniteLattice, a: ElementId, b: ElementId) -> Option<ElementId> {
    let ub: Vec<ElementId> = l
        .elements()
        .filter(|&c| l.leq(a, c) && l.leq(b, c))
        .collect();
    ub.iter()
        .copied()
        .find(|&c| ub.iter().all(|&d| l.leq(c, d)))
}

/// Greatest lower bound found by scanning all common lower bounds.
pub fn meet_by_search(l: &FiniteLattice, a: ElementId, b: ElementId) -> Option<ElementId> {
    let lb: Vec<ElementId> = l
        .elements()
        .filter(|&c| l.leq(c, a) && l.leq(c, b))
        .collect();
    lb.iter()
        .copied()
        .find(|&c| lb.iter().all(|&d| l.leq(d, c)))
}

/// Every set partition of `0..n`, via restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Partition> {
    fn rec(n: usize, rgs: &mut Vec<usize>, max: usize, out: &mut Vec<Partition>) {
        if rgs.len() == n {
            out.push(Partition::from_keys(rgs.iter().copied()));
            return;
        }
        for b in 0..=max + 1 {
            rgs.push(b);
            rec(n, rgs, max.max(b), out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut rgs = vec![0];
    rec(n, &mut rgs, 0, &mut out);
    out
}

/// Whether every block has a least and a greatest member and contains
/// everything between them.
pub fn is_interval_partition(l: &FiniteLattice, p: &Partition) -> bool {
    p.blocks().iter().all(|block| {
        let min = block.iter().find(|&&m| block.iter().all(|&x| l.leq(m, x)));
        let max = block.iter().find(|&&m| block.iter().all(|&x| l.leq(x, m)));
        match (min, max) {
            (Some(&lo), Some(&hi)) => l
                .elements()
                .filter(|&x| l.leq(lo, x) && l.leq(x, hi))
                .all(|x| p.equivalent(x, lo)),
            _ => false,
        }
    })
}

pub fn interval_partitions(l: &FiniteLattice) -> Vec<Partition> {
    all_partitions(l.len())
        .into_iter()
        .filter(|p| is_interval_partition(l, p))
        .collect()
}

/// A random interval partition: repeatedly take the lowest unassigned
/// element and close it off with a random reachable top, keeping every block
/// an interval of still-unassigned elements.
pub fn random_interval_partition(l: &FiniteLattice, rng: &mut Pcg32) -> Partition {
    let n = l.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut order: Vec<ElementId> = l.elements().collect();
    order.sort_by_key(|&x| (l.height(x), x));
    for &lo in &order {
        if owner[lo.0].is_some() {
            continue;
        }
        let free = |hi: ElementId| {
            l.elements()
                .filter(|&x| l.leq(lo, x) && l.leq(x, hi))
                .all(|x| owner[x.0].is_none())
        };
        let tops: Vec<ElementId> = l
            .elements()
            .filter(|&hi| l.leq(lo, hi) && free(hi))
            .collect();
        let hi = tops[crate::corpus::pick(rng, tops.len())];
        for x in l.elements().filter(|&x| l.leq(lo, x) && l.leq(x, hi)) {
            owner[x.0] = Some(lo.0);
        }
    }
    Partition::from_keys(
        owner
            .into_iter()
            .map(|o| o.expect("every element is assigned")),
    )
}

/// `Con(L)` by filtering all partitions through the triple-scan checker.
pub fn congruences_by_filtering(l: &FiniteLattice) -> Vec<Partition> {
    all_partitions(l.len())
        .into_iter()
        .filter(|p| is_congruence_naive(l, p))
        .collect()
}

/// Least congruence containing `pairs`, by scanning all congruences.
pub fn least_congruence_containing(
    l: &FiniteLattice,
    pairs: &[(ElementId, ElementId)],
) -> Option<Partition> {
    let candidates: Vec<Partition> = congruences_by_filtering(l)
        .into_iter()
        .filter(|p| pairs.iter().all(|&(a, b)| p.equivalent(a, b)))
        .collect();
    candidates
        .iter()
        .find(|p| candidates.iter().all(|q| p.refines(q)))
        .cloned()
}

/// Outcome of comparing the cover-condition checker with the triple scan.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Agreement {
    pub checks: usize,
    /// Congruences found (by either checker) among the checked partitions.
    pub congruences: usize,
    /// Formatted partitions on which the checkers differ.
    pub disagreements: Vec<String>,
}

impl Agreement {
    fn check(&mut self, l: &FiniteLattice, p: &Partition) {
        let fast = is_congruence_by_covers(l, p).unwrap_or(false);
        let slow = is_congruence_naive(l, p);
        self.checks += 1;
        self.congruences += usize::from(fast || slow);
        if fast != slow {
            self.disagreements.push(p.format(l));
        }
    }

    fn merge(mut self, other: Agreement) -> Agreement {
        self.checks += other.checks;
        self.congruences += other.congruences;
        self.disagreements.extend(other.disagreements);
        self
    }
}

/// Both checkers on every interval partition of every lattice with at most
/// `max` elements.
pub fn exhaustive_agreement(max: usize) -> Agreement {
    all_lattices_up_to(max)
        .par_iter()
        .map(|l| {
            let mut a = Agreement::default();
            for p in interval_partitions(l) {
                a.check(l, &p);
            }
            a
        })
        .reduce(Agreement::default, Agreement::merge)
}

/// Both checkers on `samples` random interval partitions, cycling through
/// `lattices`, drawn from `Pcg32::new(seed, PCG_STREAM)`.
pub fn random_agreement(lattices: &[FiniteLattice], samples: usize, seed: u64) -> Agreement {
    let mut rng = Pcg32::new(seed, crate::corpus::PCG_STREAM);
    let mut a = Agreement::default();
    if lattices.is_empty() {
        return a;
    }
    for k in 0..samples {
        let l = &lattices[k % lattices.len()];
        let p = random_interval_partition(l, &mut rng);
        a.check(l, &p);
    }
    a
}

fn linear_extensions(l: &FiniteLattice) -> Vec<Vec<usize>> {
    fn rec(
        l: &FiniteLattice,
        placed: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let n = l.len();
        if placed.len() == n {
            out.push(placed.clone());
            return;
        }
        for x in 0..n {
            if used[x] {
                continue;
            }
            let ready = (0..n).all(|y| used[y] || y == x || !l.leq(ElementId(y), ElementId(x)));
            if ready {
                used[x] = true;
                placed.push(x);
                rec(l, placed, used, out);
                placed.pop();
                used[x] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(l, &mut Vec::new(), &mut vec![false; l.len()], &mut out);
    out
}

/// Whether two linear extensions intersect to the order of `l`.
pub fn dimension_at_most_two(l: &FiniteLattice) -> bool {
    let n = l.len();
    let exts: Vec<Vec<usize>> = linear_extensions(l)
        .into_iter()
        .map(|e| {
            let mut pos = vec![0; n];
            for (i, &x) in e.iter().enumerate() {
                pos[x] = i;
            }
            pos
        })
        .collect();
    let incomparable: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && !l.comparable(ElementId(a), ElementId(b)))
        .collect();
    exts.iter().any(|p| {
        exts.iter().any(|q| {
            incomparable
                .iter()
                .all(|&(a, b)| (p[a] < p[b]) != (q[a] < q[b]))
        })
    })
}

/// One representative of every isomorphism class of lattices with at most
/// `max` elements (`max ≤ 8` is practical).
pub fn all_lattices_up_to(max: usize) -> Vec<FiniteLattice> {
    let mut out = Vec::new();
    if max >= 1 {
        out.push(
            FiniteLattice::from_cover_indices(vec!["0".into()], &[], BuildOptions::default())
                .unwrap(),
        );
    }
    for n in 2..=max {
        out.extend(lattices_of_size(n));
    }
    out
}

/// Lattices with `n ≥ 2` elements: a bottom, a top, and a naturally labelled
/// poset on the `n - 2` middle elements.
fn lattices_of_size(n: usize) -> Vec<FiniteLattice> {
    let k = n - 2;
    let mut found = Vec::new();
    let mut seen = HashSet::new();
    let mut below = vec![0u32; k];
    enumerate_posets(k, 0, &mut below, &mut |below| {
        let key = canonical_form(below);
        if !seen.insert(key) {
            return;
        }
        if let Some(l) = close_with_bounds(below) {
            found.push(l);
        }
    });
    found
}

/// `below[j]` is the set of strict predecessors of `j`, drawn from `0..j`.
fn enumerate_posets(k: usize, j: usize, below: &mut Vec<u32>, visit: &mut impl FnMut(&[u32])) {
    if j == k {
        visit(below);
        return;
    }
    for set in 0u32..(1 << j) {
        let closed = (0..j).all(|i| set >> i & 1 == 0 || below[i] & !set == 0);
        if closed {
            below[j] = set;
            enumerate_posets(k, j + 1, below, visit);
        }
    }
    below[j] = 0;
}

fn canonical_form(below: &[u32]) -> Vec<u32> {
    let k = below.len();
    let mut best: Option<Vec<u32>> = None;
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, &mut |perm| {
        let mut img = vec![0u32; k];
        for j in 0..k {
            for i in 0..k {
                if below[j] >> i & 1 == 1 {
                    img[perm[j]] |= 1 << perm[i];
                }
            }
        }
        if best.as_ref().is_none_or(|b| img < *b) {
            best = Some(img);
        }
    });
    best.unwrap_or_default()
}

fn permute(perm: &mut Vec<usize>, i: usize, visit: &mut impl FnMut(&[usize])) {
    if i == perm.len() {
        visit(perm);
        return;
    }
    for j in i..perm.len() {
        perm.swap(i, j);
        permute(perm, i + 1, visit);
        perm.swap(i, j);
    }
}

fn close_with_bounds(below: &[u32]) -> Option<FiniteLattice> {
    let k = below.len();
    let (bot, top) = (0, k + 1);
    let lt = |a: usize, b: usize| -> bool {
        if a == b {
            return false;
        }
        if a == bot || b == top {
            return true;
        }
        if a == top || b == bot {
            return false;
        }
        below[b - 1] >> (a - 1) & 1 == 1
    };
    let n = k + 2;
    let mut covers = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                covers.push((a, b));
            }
        }
    }
    let labels = (0..n).map(|i| i.to_string()).collect();
    FiniteLattice::from_cover_indices(labels, &covers, BuildOptions::default()).ok()
}
