//! Validated finite lattices stored as Hasse diagrams with precomputed
//! order, join and meet tables.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::LatticeError;

/// Dense index of an element inside one [`FiniteLattice`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ElementId(pub usize);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Options for [`FiniteLattice::build_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct BuildOptions {
    /// Drop cover pairs implied by other covers instead of rejecting them.
    pub reduce_covers: bool,
}

/// A finite lattice. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FiniteLattice {
    labels: Vec<String>,
    index: HashMap<String, ElementId>,
    upper: Vec<Vec<ElementId>>,
    lower: Vec<Vec<ElementId>>,
    leq: Vec<bool>,
    join: Vec<ElementId>,
    meet: Vec<ElementId>,
    bottom: ElementId,
    top: ElementId,
}

impl PartialEq for FiniteLattice {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.upper == other.upper
    }
}

impl Eq for FiniteLattice {}

impl FiniteLattice {
    /// Builds a lattice from labels and `(lower, upper)` cover pairs given by label.
    pub fn build<S: AsRef<str>>(labels: &[S], covers: &[(S, S)]) -> Result<Self, LatticeError> {
        Self::build_with(labels, covers, BuildOptions::default())
    }

    pub fn build_with<S: AsRef<str>>(
        labels: &[S],
        covers: &[(S, S)],
        options: BuildOptions,
    ) -> Result<Self, LatticeError> {
        let labels: Vec<String> = labels.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }
        let mut pairs = Vec::with_capacity(covers.len());
        for (a, b) in covers {
            let lookup = |s: &str| {
                index
                    .get(s)
                    .copied()
                    .ok_or_else(|| LatticeError::UnknownLabel(s.to_string()))
            };
            pairs.push((lookup(a.as_ref())?, lookup(b.as_ref())?));
        }
        Self::from_cover_indices(labels, &pairs, options)
    }

    /// Builds a lattice from labels and cover pairs given by dense index.
    pub fn from_cover_indices(
        labels: Vec<String>,
        covers: &[(usize, usize)],
        options: BuildOptions,
    ) -> Result<Self, LatticeError> {
        let n = labels.len();
        if n == 0 {
            return Err(LatticeError::Empty);
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), ElementId(i)).is_some() {
                return Err(LatticeError::DuplicateLabel(l.clone()));
            }
        }

        let mut seen = HashSet::with_capacity(covers.len());
        let mut graph = DiGraph::<(), ()>::with_capacity(n, covers.len());
        for _ in 0..n {
            graph.add_node(());
        }
        for &(a, b) in covers {
            if a == b {
                return Err(LatticeError::CycleDetected(labels[a].clone()));
            }
            if !seen.insert((a, b)) {
                return Err(LatticeError::DuplicateCover(
                    labels[a].clone(),
                    labels[b].clone(),
                ));
            }
            graph.add_edge((a as u32).into(), (b as u32).into(), ());
        }
        let order = toposort(&graph, None).map_err(|cycle| {
            LatticeError::CycleDetected(labels[cycle.node_id().index()].clone())
        })?;
        let order: Vec<usize> = order.into_iter().map(|v| v.index()).collect();
        let mut position = vec![0; n];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }

        let mut succ = vec![Vec::new(); n];
        for &(a, b) in covers {
            succ[a].push(b);
        }
        // leq[a * n + b] <=> a <= b; filled in reverse topological order.
        let mut leq = vec![false; n * n];
        for &a in order.iter().rev() {
            leq[a * n + a] = true;
            for &b in &succ[a] {
                for c in 0..n {
                    if leq[b * n + c] {
                        leq[a * n + c] = true;
                    }
                }
            }
        }

        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for &(a, b) in covers {
            let implied = (0..n).any(|c| c != a && c != b && leq[a * n + c] && leq[c * n + b]);
            if implied {
                if options.reduce_covers {
                    continue;
                }
                return Err(LatticeError::NotTransitivelyReduced(
                    labels[a].clone(),
                    labels[b].clone(),
                ));
            }
            upper[a].push(ElementId(b));
            lower[b].push(ElementId(a));
        }
        for v in upper.iter_mut().chain(lower.iter_mut()) {
            v.sort();
        }

        let mut join = vec![ElementId(0); n * n];
        let mut meet = vec![ElementId(0); n * n];
        for a in 0..n {
            for b in a..n {
                let lub = least_bound(
                    n,
                    &leq,
                    &position,
                    |c| leq[a * n + c] && leq[b * n + c],
                    false,
                )
                .ok_or_else(|| LatticeError::NotALattice(labels[a].clone(), labels[b].clone()))?;
                let glb = least_bound(
                    n,
                    &leq,
                    &position,
                    |c| leq[c * n + a] && leq[c * n + b],
                    true,
                )
                .ok_or_else(|| LatticeError::NotALattice(labels[a].clone(), labels[b].clone()))?;
                join[a * n + b] = ElementId(lub);
                join[b * n + a] = ElementId(lub);
                meet[a * n + b] = ElementId(glb);
                meet[b * n + a] = ElementId(glb);
            }
        }
        let bottom = (1..n).fold(ElementId(0), |acc, x| meet[acc.0 * n + x]);
        let top = (1..n).fold(ElementId(0), |acc, x| join[acc.0 * n + x]);

        Ok(FiniteLattice {
            labels,
            index,
            upper,
            lower,
            leq,
            join,
            meet,
            bottom,
            top,
        })
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Always false: lattices are nonempty.
    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + '_ {
        (0..self.len()).map(ElementId)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn label(&self, x: ElementId) -> &str {
        &self.labels[x.0]
    }

    pub fn id(&self, label: &str) -> Option<ElementId> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<ElementId, LatticeError> {
        self.id(label)
            .ok_or_else(|| LatticeError::UnknownLabel(label.to_string()))
    }

    #[inline]
    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    #[inline]
    pub fn top(&self) -> ElementId {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.leq[a.0 * self.len() + b.0]
    }

    #[inline]
    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn comparable(&self, a: ElementId, b: ElementId) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> ElementId {
        self.join[a.0 * self.len() + b.0]
    }

    #[inline]
    pub fn meet(&self, a: ElementId, b: ElementId) -> ElementId {
        self.meet[a.0 * self.len() + b.0]
    }

    /// `a ≺ b`.
    pub fn covers(&self, a: ElementId, b: ElementId) -> bool {
        self.upper[a.0].binary_search(&b).is_ok()
    }

    pub fn upper_covers(&self, x: ElementId) -> &[ElementId] {
        &self.upper[x.0]
    }

    pub fn lower_covers(&self, x: ElementId) -> &[ElementId] {
        &self.lower[x.0]
    }

    /// All cover pairs `(a, b)` with `a ≺ b`, ordered by id.
    pub fn cover_pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.elements()
            .flat_map(move |a| self.upper[a.0].iter().map(move |&b| (a, b)))
    }

    pub fn cover_count(&self) -> usize {
        self.upper.iter().map(Vec::len).sum()
    }

    /// Length of the longest chain from the bottom to `x`.
    pub fn height(&self, x: ElementId) -> usize {
        let mut memo = vec![usize::MAX; self.len()];
        self.height_memo(x, &mut memo)
    }

    pub fn heights(&self) -> Vec<usize> {
        let mut memo = vec![usize::MAX; self.len()];
        for x in self.elements() {
            self.height_memo(x, &mut memo);
        }
        memo
    }

    fn height_memo(&self, x: ElementId, memo: &mut [usize]) -> usize {
        if memo[x.0] != usize::MAX {
            return memo[x.0];
        }
        let h = self.lower[x.0]
            .iter()
            .map(|&y| self.height_memo(y, memo) + 1)
            .max()
            .unwrap_or(0);
        memo[x.0] = h;
        h
    }

    pub fn is_chain(&self) -> bool {
        self.upper.iter().all(|u| u.len() <= 1)
    }

    /// Whether `a ∧ b ≺ a` implies `b ≺ a ∨ b` for every pair.
    pub fn is_semimodular(&self) -> bool {
        self.elements().all(|a| {
            self.elements()
                .all(|b| !self.covers(self.meet(a, b), a) || self.covers(b, self.join(a, b)))
        })
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<ElementId> {
        self.elements()
            .filter(|&x| self.lower[x.0].len() == 1)
            .collect()
    }

    /// Whether the join-irreducible elements contain no three-element antichain.
    pub fn is_slim(&self) -> bool {
        let ji = self.join_irreducibles();
        for (p, &a) in ji.iter().enumerate() {
            for (q, &b) in ji.iter().enumerate().skip(p + 1) {
                if self.comparable(a, b) {
                    continue;
                }
                if ji[q + 1..]
                    .iter()
                    .any(|&c| !self.comparable(a, c) && !self.comparable(b, c))
                {
                    return false;
                }
            }
        }
        true
    }

    /// Whether the lattice has order dimension at most two, which for finite
    /// lattices is equivalent to having a planar diagram.
    pub fn is_planar(&self) -> bool {
        crate::planar::has_dimension_at_most_two(self)
    }

    /// Slim, planar and semimodular.
    pub fn is_sps(&self) -> bool {
        self.is_semimodular() && self.is_slim() && self.is_planar()
    }

    /// All covering squares, each unordered pair of atoms reported once with
    /// the smaller label on the left, sorted by `(o, a_l, a_r, i)` labels.
    pub fn covering_squares(&self) -> Vec<CoveringSquare> {
        let mut out = Vec::new();
        for o in self.elements() {
            let up = &self.upper[o.0];
            for (p, &x) in up.iter().enumerate() {
                for &y in &up[p + 1..] {
                    let i = self.join(x, y);
                    if self.covers(x, i) && self.covers(y, i) {
                        let (a_l, a_r) = if self.label(x) <= self.label(y) {
                            (x, y)
                        } else {
                            (y, x)
                        };
                        out.push(CoveringSquare { o, a_l, a_r, i });
                    }
                }
            }
        }
        out.sort_by(|s, t| self.square_key(s).cmp(&self.square_key(t)));
        out
    }

    fn square_key(&self, s: &CoveringSquare) -> [&str; 4] {
        [
            self.label(s.o),
            self.label(s.a_l),
            self.label(s.a_r),
            self.label(s.i),
        ]
    }

    /// Least subset containing `seed` closed under join and meet.
    pub fn sublattice_generated(&self, seed: &[ElementId]) -> BTreeSet<ElementId> {
        let mut members: Vec<ElementId> = Vec::new();
        let mut inside = vec![false; self.len()];
        for &s in seed {
            if !inside[s.0] {
                inside[s.0] = true;
                members.push(s);
            }
        }
        // Each new member is combined with every member present at the time it
        // is processed; members added later combine with it on their own turn.
        let mut next = 0;
        while next < members.len() {
            let x = members[next];
            next += 1;
            for k in 0..next {
                let y = members[k];
                for z in [self.join(x, y), self.meet(x, y)] {
                    if !inside[z.0] {
                        inside[z.0] = true;
                        members.push(z);
                    }
                }
            }
        }
        members.into_iter().collect()
    }

    pub fn is_sublattice(&self, subset: &BTreeSet<ElementId>) -> bool {
        !subset.is_empty()
            && subset.iter().all(|&a| {
                subset.iter().all(|&b| {
                    subset.contains(&self.join(a, b)) && subset.contains(&self.meet(a, b))
                })
            })
    }

    /// Whether `subset` is a sublattice isomorphic to the seven-element lattice
    /// obtained by inserting a fork into a four-element square.
    pub fn is_s7(&self, subset: &BTreeSet<ElementId>) -> bool {
        if subset.len() != 7 || !self.is_sublattice(subset) {
            return false;
        }
        let members: Vec<ElementId> = subset.iter().copied().collect();
        crate::sublattice::isomorphic_to_s7(|a, b| self.leq(members[a], members[b]))
    }

    /// Checks that `(o, a_l, a_r, i)` is a covering square.
    pub fn square(
        &self,
        o: ElementId,
        a_l: ElementId,
        a_r: ElementId,
        i: ElementId,
    ) -> Result<CoveringSquare, LatticeError> {
        let ok = a_l != a_r
            && self.covers(o, a_l)
            && self.covers(o, a_r)
            && self.covers(a_l, i)
            && self.covers(a_r, i)
            && self.meet(a_l, a_r) == o
            && self.join(a_l, a_r) == i;
        if ok {
            Ok(CoveringSquare { o, a_l, a_r, i })
        } else {
            Err(LatticeError::NotACoveringSquare {
                o: self.label(o).to_string(),
                a_l: self.label(a_l).to_string(),
                a_r: self.label(a_r).to_string(),
                i: self.label(i).to_string(),
            })
        }
    }

    pub fn square_by_labels(
        &self,
        o: &str,
        a_l: &str,
        a_r: &str,
        i: &str,
    ) -> Result<CoveringSquare, LatticeError> {
        self.square(
            self.require(o)?,
            self.require(a_l)?,
            self.require(a_r)?,
            self.require(i)?,
        )
    }

    /// Whether both lattices have the same labels and the same covers,
    /// regardless of how ids are assigned.
    pub fn same_by_labels(&self, other: &FiniteLattice) -> bool {
        if self.len() != other.len() || self.cover_count() != other.cover_count() {
            return false;
        }
        let Some(map) = self
            .elements()
            .map(|x| other.id(self.label(x)))
            .collect::<Option<Vec<_>>>()
        else {
            return false;
        };
        self.cover_pairs()
            .all(|(a, b)| other.covers(map[a.0], map[b.0]))
    }
}

fn least_bound(
    n: usize,
    leq: &[bool],
    position: &[usize],
    bound: impl Fn(usize) -> bool,
    greatest: bool,
) -> Option<usize> {
    let bounds: Vec<usize> = (0..n).filter(|&c| bound(c)).collect();
    let candidate = if greatest {
        *bounds.iter().max_by_key(|&&c| position[c])?
    } else {
        *bounds.iter().min_by_key(|&&c| position[c])?
    };
    let extremal = bounds.iter().all(|&c| {
        if greatest {
            leq[c * n + candidate]
        } else {
            leq[candidate * n + c]
        }
    });
    extremal.then_some(candidate)
}

/// Closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: ElementId,
    pub hi: ElementId,
}

impl Interval {
    pub fn new(lattice: &FiniteLattice, lo: ElementId, hi: ElementId) -> Option<Self> {
        lattice.leq(lo, hi).then_some(Interval { lo, hi })
    }

    pub fn contains(&self, lattice: &FiniteLattice, x: ElementId) -> bool {
        lattice.leq(self.lo, x) && lattice.leq(x, self.hi)
    }

    pub fn elements<'a>(
        &'a self,
        lattice: &'a FiniteLattice,
    ) -> impl Iterator<Item = ElementId> + 'a {
        lattice
            .elements()
            .filter(move |&x| self.contains(lattice, x))
    }
}

/// Four elements `o ≺ a_l, a_r ≺ i` with `a_l ∧ a_r = o` and `a_l ∨ a_r = i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoveringSquare {
    pub o: ElementId,
    pub a_l: ElementId,
    pub a_r: ElementId,
    pub i: ElementId,
}

impl CoveringSquare {
    pub fn mirrored(self) -> Self {
        CoveringSquare {
            a_l: self.a_r,
            a_r: self.a_l,
            ..self
        }
    }

    pub fn elements(&self) -> [ElementId; 4] {
        [self.o, self.a_l, self.a_r, self.i]
    }

    pub fn labels<'a>(&self, lattice: &'a FiniteLattice) -> [&'a str; 4] {
        self.elements().map(|x| lattice.label(x))
    }
}
