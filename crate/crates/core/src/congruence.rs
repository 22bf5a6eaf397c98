//! Congruences of finite lattices.
//!
//! Congruence classes of a finite lattice are intervals, and an interval
//! partition is a congruence iff it satisfies the cover conditions checked by
//! [`IntervalPartition::satisfies_cover_conditions`]: whenever `x` is covered
//! by `y ≠ z` and `x ≡ y`, then `z ≡ y ∨ z`, and dually.

use std::cmp::Reverse;
use std::collections::{HashMap, HashSet};
use std::ops::Deref;

use petgraph::unionfind::UnionFind;

use crate::error::CongruenceError;
use crate::fork::ForkExtension;
use crate::lattice::{ElementId, FiniteLattice};

/// Largest lattice for which [`all_congruences`] is attempted by default.
pub const DEFAULT_SIZE_BOUND: usize = 128;

/// A partition of `0..n` in canonical form: members sorted, blocks ordered
/// by their least member.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    block_of: Vec<usize>,
    blocks: Vec<Vec<ElementId>>,
}

impl Partition {
    /// Builds a partition from arbitrary block keys, one per element.
    pub fn from_keys<K: Eq + std::hash::Hash>(keys: impl IntoIterator<Item = K>) -> Self {
        let mut renumber: HashMap<K, usize> = HashMap::new();
        let mut blocks: Vec<Vec<ElementId>> = Vec::new();
        let mut block_of = Vec::new();
        for (x, key) in keys.into_iter().enumerate() {
            let next = renumber.len();
            let b = *renumber.entry(key).or_insert(next);
            if b == blocks.len() {
                blocks.push(Vec::new());
            }
            blocks[b].push(ElementId(x));
            block_of.push(b);
        }
        // Keys are numbered by first occurrence, so blocks are already ordered
        // by least member and members are ascending.
        Partition { block_of, blocks }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<ElementId>]) -> Result<Self, CongruenceError> {
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(CongruenceError::NotAPartition("empty block".into()));
            }
            for &x in block {
                if x.0 >= n {
                    return Err(CongruenceError::NotAPartition(format!("{x} out of range")));
                }
                if owner[x.0] != usize::MAX {
                    return Err(CongruenceError::NotAPartition(format!("{x} in two blocks")));
                }
                owner[x.0] = b;
            }
        }
        if let Some(x) = owner.iter().position(|&b| b == usize::MAX) {
            return Err(CongruenceError::NotAPartition(format!("#{x} in no block")));
        }
        Ok(Self::from_keys(owner))
    }

    pub fn from_labels(
        lattice: &FiniteLattice,
        blocks: &[&[&str]],
    ) -> Result<Self, CongruenceError> {
        let blocks: Vec<Vec<ElementId>> = blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|s| {
                        lattice.id(s).ok_or_else(|| {
                            CongruenceError::NotAPartition(format!("unknown label `{s}`"))
                        })
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        Self::from_blocks(lattice.len(), &blocks)
    }

    pub fn singletons(n: usize) -> Self {
        Self::from_keys(0..n)
    }

    pub fn full(n: usize) -> Self {
        Self::from_keys(std::iter::repeat_n(0, n))
    }

    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    #[inline]
    pub fn block_of(&self, x: ElementId) -> usize {
        self.block_of[x.0]
    }

    pub fn block_ids(&self) -> &[usize] {
        &self.block_of
    }

    pub fn blocks(&self) -> &[Vec<ElementId>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    #[inline]
    pub fn equivalent(&self, a: ElementId, b: ElementId) -> bool {
        self.block_of[a.0] == self.block_of[b.0]
    }

    /// Every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks
            .iter()
            .all(|b| b.iter().all(|&x| other.equivalent(x, b[0])))
    }

    /// Intersection of the two equivalence relations.
    pub fn intersection(&self, other: &Partition) -> Partition {
        Partition::from_keys(
            self.block_of
                .iter()
                .zip(&other.block_of)
                .map(|(&a, &b)| (a, b)),
        )
    }

    /// Equivalence generated by the union of the two relations.
    pub fn union_closure(&self, other: &Partition) -> Partition {
        let mut uf = UnionFind::<usize>::new(self.len());
        for p in [self, other] {
            for block in &p.blocks {
                for x in &block[1..] {
                    uf.union(block[0].0, x.0);
                }
            }
        }
        Partition::from_keys(uf.into_labeling())
    }

    /// Blocks as sorted label lists, themselves sorted.
    pub fn signature<'a>(&self, lattice: &'a FiniteLattice) -> Vec<Vec<&'a str>> {
        let mut sig: Vec<Vec<&str>> = self
            .blocks
            .iter()
            .map(|b| {
                let mut names: Vec<&str> = b.iter().map(|&x| lattice.label(x)).collect();
                names.sort_unstable();
                names
            })
            .collect();
        sig.sort();
        sig
    }

    /// `{a,b}{c}…` with labels and blocks sorted.
    pub fn format(&self, lattice: &FiniteLattice) -> String {
        self.signature(lattice)
            .iter()
            .map(|b| format!("{{{}}}", b.join(",")))
            .collect()
    }
}

/// A partition whose blocks are intervals `[min, max]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalPartition {
    partition: Partition,
    bounds: Vec<(ElementId, ElementId)>,
}

impl Deref for IntervalPartition {
    type Target = Partition;
    fn deref(&self) -> &Partition {
        &self.partition
    }
}

impl IntervalPartition {
    pub fn new(lattice: &FiniteLattice, partition: Partition) -> Result<Self, CongruenceError> {
        if partition.len() != lattice.len() {
            return Err(CongruenceError::NotAPartition(format!(
                "partition of {} elements for a lattice of {}",
                partition.len(),
                lattice.len()
            )));
        }
        let mut bounds = Vec::with_capacity(partition.block_count());
        for block in partition.blocks() {
            let lo = block.iter().fold(block[0], |acc, &x| lattice.meet(acc, x));
            let hi = block.iter().fold(block[0], |acc, &x| lattice.join(acc, x));
            let size = lattice
                .elements()
                .filter(|&x| lattice.leq(lo, x) && lattice.leq(x, hi))
                .count();
            let closed = partition.equivalent(lo, block[0]) && partition.equivalent(hi, block[0]);
            if !closed || size != block.len() {
                return Err(CongruenceError::NotIntervalPartition(
                    lattice.label(block[0]).to_string(),
                ));
            }
            bounds.push((lo, hi));
        }
        Ok(IntervalPartition { partition, bounds })
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// `(min, max)` of each block, in block order.
    pub fn bounds(&self) -> &[(ElementId, ElementId)] {
        &self.bounds
    }

    /// The cover conditions and their duals.
    pub fn satisfies_cover_conditions(&self, lattice: &FiniteLattice) -> bool {
        for x in lattice.elements() {
            let up = lattice.upper_covers(x);
            for &y in up {
                if !self.equivalent(x, y) {
                    continue;
                }
                if up
                    .iter()
                    .any(|&z| z != y && !self.equivalent(z, lattice.join(y, z)))
                {
                    return false;
                }
            }
            let down = lattice.lower_covers(x);
            for &y in down {
                if !self.equivalent(x, y) {
                    continue;
                }
                if down
                    .iter()
                    .any(|&z| z != y && !self.equivalent(z, lattice.meet(y, z)))
                {
                    return false;
                }
            }
        }
        true
    }
}

/// A congruence of a finite lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Congruence(IntervalPartition);

impl Deref for Congruence {
    type Target = IntervalPartition;
    fn deref(&self) -> &IntervalPartition {
        &self.0
    }
}

impl Congruence {
    /// Validates `partition` as a congruence of `lattice`.
    pub fn new(lattice: &FiniteLattice, partition: Partition) -> Result<Self, CongruenceError> {
        let p = IntervalPartition::new(lattice, partition)?;
        if p.satisfies_cover_conditions(lattice) {
            Ok(Congruence(p))
        } else {
            Err(CongruenceError::NotACongruence)
        }
    }

    pub fn from_labels(
        lattice: &FiniteLattice,
        blocks: &[&[&str]],
    ) -> Result<Self, CongruenceError> {
        Self::new(lattice, Partition::from_labels(lattice, blocks)?)
    }

    /// Wraps a partition known to be a congruence, checking only that blocks are intervals.
    pub(crate) fn trusted(lattice: &FiniteLattice, partition: Partition) -> Self {
        let p = IntervalPartition::new(lattice, partition)
            .expect("congruence classes of a finite lattice are intervals");
        debug_assert!(p.satisfies_cover_conditions(lattice));
        Congruence(p)
    }

    pub fn zero(lattice: &FiniteLattice) -> Self {
        Self::trusted(lattice, Partition::singletons(lattice.len()))
    }

    pub fn one(lattice: &FiniteLattice) -> Self {
        Self::trusted(lattice, Partition::full(lattice.len()))
    }

    pub fn interval_partition(&self) -> &IntervalPartition {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.block_count() == self.len()
    }

    /// Join in the congruence lattice.
    pub fn join(&self, lattice: &FiniteLattice, other: &Congruence) -> Congruence {
        Self::trusted(lattice, self.union_closure(other))
    }

    /// Meet in the congruence lattice.
    pub fn meet(&self, lattice: &FiniteLattice, other: &Congruence) -> Congruence {
        Self::trusted(lattice, self.intersection(other))
    }
}

/// Checks the cover conditions after validating that `p` is an interval partition.
pub fn is_congruence_by_covers(
    lattice: &FiniteLattice,
    p: &Partition,
) -> Result<bool, CongruenceError> {
    Ok(IntervalPartition::new(lattice, p.clone())?.satisfies_cover_conditions(lattice))
}

/// Direct check: blocks are intervals and `a ≡ b` implies `a ∨ c ≡ b ∨ c`
/// and `a ∧ c ≡ b ∧ c` for all triples.
pub fn is_congruence_naive(lattice: &FiniteLattice, p: &Partition) -> bool {
    if p.len() != lattice.len() {
        return false;
    }
    for block in p.blocks() {
        let min = block
            .iter()
            .find(|&&m| block.iter().all(|&x| lattice.leq(m, x)));
        let max = block
            .iter()
            .find(|&&m| block.iter().all(|&x| lattice.leq(x, m)));
        let (Some(&min), Some(&max)) = (min, max) else {
            return false;
        };
        if lattice
            .elements()
            .any(|x| lattice.leq(min, x) && lattice.leq(x, max) && !p.equivalent(x, min))
        {
            return false;
        }
    }
    for block in p.blocks() {
        for &a in block {
            for &b in block {
                if a >= b {
                    continue;
                }
                for c in lattice.elements() {
                    if !p.equivalent(lattice.join(a, c), lattice.join(b, c))
                        || !p.equivalent(lattice.meet(a, c), lattice.meet(b, c))
                    {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Least congruence containing every seed pair.
pub fn generated_congruence(
    lattice: &FiniteLattice,
    seeds: impl IntoIterator<Item = (ElementId, ElementId)>,
) -> Congruence {
    let mut uf = UnionFind::<usize>::new(lattice.len());
    let mut pending: Vec<(ElementId, ElementId)> = seeds
        .into_iter()
        .filter(|&(a, b)| uf.union(a.0, b.0))
        .collect();
    while let Some((a, b)) = pending.pop() {
        for c in lattice.elements() {
            for (u, v) in [
                (lattice.join(a, c), lattice.join(b, c)),
                (lattice.meet(a, c), lattice.meet(b, c)),
            ] {
                if uf.union(u.0, v.0) {
                    pending.push((u, v));
                }
            }
        }
    }
    Congruence::trusted(lattice, Partition::from_keys(uf.into_labeling()))
}

/// `con(a, b)`, the least congruence identifying `a` and `b`.
pub fn principal_congruence(lattice: &FiniteLattice, a: ElementId, b: ElementId) -> Congruence {
    generated_congruence(lattice, [(a, b)])
}

/// Orders congruences finest first, then by label signature.
pub fn sort_congruences(lattice: &FiniteLattice, list: &mut [Congruence]) {
    list.sort_by_cached_key(|c| {
        (
            Reverse(c.block_count()),
            c.signature(lattice)
                .into_iter()
                .map(|b| b.into_iter().map(str::to_string).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
    });
}

/// `Con(L)` with the default size bound.
pub fn all_congruences(lattice: &FiniteLattice) -> Result<Vec<Congruence>, CongruenceError> {
    all_congruences_bounded(lattice, DEFAULT_SIZE_BOUND)
}

/// Every congruence, as joins of the principal congruences of prime intervals.
pub fn all_congruences_bounded(
    lattice: &FiniteLattice,
    bound: usize,
) -> Result<Vec<Congruence>, CongruenceError> {
    if lattice.len() > bound {
        return Err(CongruenceError::SizeBound {
            size: lattice.len(),
            bound,
        });
    }
    let mut generators: Vec<Congruence> = Vec::new();
    let mut seen_gen = HashSet::new();
    for (a, b) in lattice.cover_pairs() {
        let c = principal_congruence(lattice, a, b);
        if seen_gen.insert(c.clone()) {
            generators.push(c);
        }
    }
    let zero = Congruence::zero(lattice);
    let mut seen: HashSet<Congruence> = HashSet::from([zero.clone()]);
    let mut out = vec![zero];
    let mut next = 0;
    while next < out.len() {
        let current = out[next].clone();
        next += 1;
        for g in &generators {
            let j = current.join(lattice, g);
            if seen.insert(j.clone()) {
                out.push(j);
            }
        }
    }
    sort_congruences(lattice, &mut out);
    Ok(out)
}

/// Restricts a congruence of `big` to the sublattice `small`, embedded by `embed`.
pub fn restrict(
    congruence: &Congruence,
    big: &FiniteLattice,
    small: &FiniteLattice,
    embed: &[ElementId],
) -> Result<Congruence, CongruenceError> {
    if embed.len() != small.len() || congruence.len() != big.len() {
        return Err(CongruenceError::NotASublattice);
    }
    for a in small.elements() {
        for b in small.elements() {
            let (ea, eb) = (embed[a.0], embed[b.0]);
            if ea == eb && a != b
                || big.join(ea, eb) != embed[small.join(a, b).0]
                || big.meet(ea, eb) != embed[small.meet(a, b).0]
            {
                return Err(CongruenceError::NotASublattice);
            }
        }
    }
    let keys = embed.iter().map(|&e| congruence.block_of(e));
    Ok(Congruence::trusted(small, Partition::from_keys(keys)))
}

/// Restriction of a congruence of `L[S]` to `L`.
pub fn restrict_to_base(
    ext: &ForkExtension,
    congruence: &Congruence,
) -> Result<Congruence, CongruenceError> {
    restrict(congruence, &ext.extended, &ext.base, &ext.labels.embed)
}

/// Least congruence of `L[S]` containing the image of `alpha`.
pub fn smallest_extension(ext: &ForkExtension, alpha: &Congruence) -> Congruence {
    let seeds = alpha.blocks().iter().flat_map(|b| {
        let first = ext.embed(b[0]);
        b[1..].iter().map(move |&x| (first, ext.embed(x)))
    });
    generated_congruence(&ext.extended, seeds)
}
