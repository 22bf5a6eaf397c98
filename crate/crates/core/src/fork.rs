//! Inserting a fork into a slim planar semimodular lattice at a covering square.
//!
//! The square `{o, a_l, a_r, i}` is replaced by a copy of S7 by adding `t`,
//! `z_{l,1}` and `z_{r,1}`. The new element `z_{l,k}` then propagates down
//! the left trajectory: while the lower covers of `x_{l,k}` contain an
//! `x_{l,k+1}` such that `{x_{l,k+1} ∧ y_{l,k}, x_{l,k+1}, y_{l,k}, x_{l,k}}`
//! is a covering square of the base lattice, the cover
//! `y_{l,k+1} ≺ x_{l,k+1}` is subdivided by a new `z_{l,k+1} ≺ z_{l,k}`.
//! The right side is handled the same way.

use std::collections::HashSet;

use crate::error::ForkError;
use crate::lattice::{BuildOptions, CoveringSquare, ElementId, FiniteLattice};

/// The elements added by a fork and the trajectories they follow.
///
/// Index `k` of every sequence is the trajectory step `k + 1`: `z_left[0]`
/// is `z_{l,1}`, `x_left[0] = a_l` and `y_left[0] = o`. Trajectory entries
/// are ids of the base lattice, which [`embed`](Self::embed) maps into the
/// extension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForkLabels {
    pub t: ElementId,
    pub z_left: Vec<ElementId>,
    pub z_right: Vec<ElementId>,
    pub x_left: Vec<ElementId>,
    pub y_left: Vec<ElementId>,
    pub x_right: Vec<ElementId>,
    pub y_right: Vec<ElementId>,
    pub embed: Vec<ElementId>,
}

impl ForkLabels {
    /// Length `n` of the left trajectory.
    pub fn n(&self) -> usize {
        self.z_left.len()
    }

    /// Length `m` of the right trajectory.
    pub fn m(&self) -> usize {
        self.z_right.len()
    }

    /// `t`, then the left chain, then the right chain.
    pub fn fork_elements(&self) -> Vec<ElementId> {
        let mut out = vec![self.t];
        out.extend(&self.z_left);
        out.extend(&self.z_right);
        out
    }

    pub fn mirrored(&self) -> Self {
        ForkLabels {
            t: self.t,
            z_left: self.z_right.clone(),
            z_right: self.z_left.clone(),
            x_left: self.x_right.clone(),
            y_left: self.y_right.clone(),
            x_right: self.x_left.clone(),
            y_right: self.y_left.clone(),
            embed: self.embed.clone(),
        }
    }
}

/// `L[S]` together with the base lattice and the labelling of the construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForkExtension {
    pub extended: FiniteLattice,
    pub labels: ForkLabels,
    pub base: FiniteLattice,
    pub square: CoveringSquare,
}

/// Result of [`ForkExtension::join_via_base`] and its dual.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ViaBase {
    pub value: ElementId,
    /// The true result lies in `F[S]`, so the base-cover identity does not apply
    /// and `value` is the true join (meet).
    pub fork_case: bool,
}

struct Trajectory {
    x: Vec<ElementId>,
    y: Vec<ElementId>,
}

fn trajectory(
    base: &FiniteLattice,
    x1: ElementId,
    y1: ElementId,
    subdivided: &HashSet<(ElementId, ElementId)>,
) -> Result<Trajectory, ForkError> {
    let mut x = vec![x1];
    let mut y = vec![y1];
    loop {
        let (xk, yk) = (*x.last().unwrap(), *y.last().unwrap());
        let mut found = None;
        for &c in base.lower_covers(xk) {
            if c == yk {
                continue;
            }
            let m = base.meet(c, yk);
            if base.covers(m, c) && base.covers(m, yk) {
                if found.is_some() {
                    return Err(ForkError::AmbiguousPropagation(base.label(xk).to_string()));
                }
                found = Some((c, m));
            }
        }
        match found {
            // The cover must still be a cover at this stage of the construction.
            Some((c, m)) if !subdivided.contains(&(m, c)) => {
                x.push(c);
                y.push(m);
            }
            _ => return Ok(Trajectory { x, y }),
        }
    }
}

fn fresh_names(base: &FiniteLattice, n: usize, m: usize) -> Vec<String> {
    let make = |suffix: &str| -> Vec<String> {
        let mut names = vec![format!("t{suffix}")];
        names.extend((1..=n).map(|k| format!("zl{k}{suffix}")));
        names.extend((1..=m).map(|k| format!("zr{k}{suffix}")));
        names
    };
    let free = |names: &[String]| names.iter().all(|s| base.id(s).is_none());
    let plain = make("");
    if free(&plain) {
        return plain;
    }
    (2..)
        .map(|k| make(&format!("_{k}")))
        .find(|names| free(names))
        .unwrap()
}

/// Inserts a fork into `base` at `square`.
///
/// New element ids follow the base ids: `t`, then `z_{l,1..n}`, then
/// `z_{r,1..m}`. They are labelled `t`, `zl1`, …, `zr1`, … with a `_k`
/// suffix when those labels are taken.
pub fn insert_fork(
    base: &FiniteLattice,
    square: CoveringSquare,
) -> Result<ForkExtension, ForkError> {
    if !base.is_sps() {
        return Err(ForkError::NotSps);
    }
    base.square(square.o, square.a_l, square.a_r, square.i)?;
    insert_fork_unchecked(base, square)
}

/// [`insert_fork`] without the SPS check. The square must still be a covering square.
pub fn insert_fork_unchecked(
    base: &FiniteLattice,
    square: CoveringSquare,
) -> Result<ForkExtension, ForkError> {
    let square = base.square(square.o, square.a_l, square.a_r, square.i)?;
    let left = trajectory(base, square.a_l, square.o, &HashSet::new())?;
    let taken: HashSet<_> = left.y.iter().copied().zip(left.x.iter().copied()).collect();
    let right = trajectory(base, square.a_r, square.o, &taken)?;

    let size = base.len();
    let (n, m) = (left.x.len(), right.x.len());
    let t = ElementId(size);
    let z_left: Vec<ElementId> = (0..n).map(|k| ElementId(size + 1 + k)).collect();
    let z_right: Vec<ElementId> = (0..m).map(|k| ElementId(size + 1 + n + k)).collect();

    let mut labels: Vec<String> = base.labels().to_vec();
    labels.extend(fresh_names(base, n, m));

    let mut removed: HashSet<(ElementId, ElementId)> = taken;
    removed.extend(right.y.iter().copied().zip(right.x.iter().copied()));
    let mut covers: Vec<(usize, usize)> = base
        .cover_pairs()
        .filter(|p| !removed.contains(p))
        .map(|(a, b)| (a.0, b.0))
        .collect();
    for (traj, z) in [(&left, &z_left), (&right, &z_right)] {
        for k in 0..z.len() {
            covers.push((traj.y[k].0, z[k].0));
            covers.push((z[k].0, traj.x[k].0));
            if k > 0 {
                covers.push((z[k].0, z[k - 1].0));
            }
        }
        covers.push((z[0].0, t.0));
    }
    covers.push((t.0, square.i.0));

    let extended = FiniteLattice::from_cover_indices(labels, &covers, BuildOptions::default())?;
    Ok(ForkExtension {
        extended,
        labels: ForkLabels {
            t,
            z_left,
            z_right,
            x_left: left.x,
            y_left: left.y,
            x_right: right.x,
            y_right: right.y,
            embed: base.elements().collect(),
        },
        base: base.clone(),
        square,
    })
}

impl ForkExtension {
    pub fn n(&self) -> usize {
        self.labels.n()
    }

    pub fn m(&self) -> usize {
        self.labels.m()
    }

    pub fn embed(&self, x: ElementId) -> ElementId {
        self.labels.embed[x.0]
    }

    /// Whether `x` (an id of the extension) belongs to the image of the base.
    pub fn in_base(&self, x: ElementId) -> bool {
        x.0 < self.base.len()
    }

    pub fn is_fork_element(&self, x: ElementId) -> bool {
        !self.in_base(x) && x.0 < self.extended.len()
    }

    /// The same extension with left and right exchanged.
    pub fn mirrored(&self) -> Self {
        ForkExtension {
            extended: self.extended.clone(),
            labels: self.labels.mirrored(),
            base: self.base.clone(),
            square: self.square.mirrored(),
        }
    }

    /// Trajectory steps `(x_k, x_{k+1})` where `x_k` has three lower covers in
    /// the base, i.e. the trajectory runs through the middle of an `S7`.
    ///
    /// These are exactly the corpus instances on which some congruence of
    /// the base has no extension at all.
    pub fn middle_steps(&self) -> Vec<(ElementId, ElementId)> {
        let l = &self.labels;
        [&l.x_left, &l.x_right]
            .into_iter()
            .flat_map(|xs| xs.windows(2))
            .filter(|w| self.base.lower_covers(w[0]).len() == 3)
            .map(|w| (w[0], w[1]))
            .collect()
    }

    fn fork_position(&self, x: ElementId) -> Result<ForkPosition, ForkError> {
        let l = &self.labels;
        if x == l.t {
            return Ok(ForkPosition::T);
        }
        if let Some(k) = l.z_left.iter().position(|&z| z == x) {
            return Ok(ForkPosition::Left(k));
        }
        if let Some(k) = l.z_right.iter().position(|&z| z == x) {
            return Ok(ForkPosition::Right(k));
        }
        let label = if x.0 < self.extended.len() {
            self.extended.label(x).to_string()
        } else {
            x.to_string()
        };
        Err(ForkError::NotAForkElement(label))
    }

    /// The unique base element covering the fork element `x`, as an extension id.
    pub fn cover_in_l_above(&self, x: ElementId) -> Result<ElementId, ForkError> {
        let l = &self.labels;
        let base_id = match self.fork_position(x)? {
            ForkPosition::T => self.square.i,
            ForkPosition::Left(k) => l.x_left[k],
            ForkPosition::Right(k) => l.x_right[k],
        };
        Ok(self.embed(base_id))
    }

    /// The greatest base element below the fork element `x`, as an extension id.
    /// For `z` elements this is their lower cover in the base; for `t` it is `o`.
    pub fn greatest_l_below(&self, x: ElementId) -> Result<ElementId, ForkError> {
        let l = &self.labels;
        let base_id = match self.fork_position(x)? {
            ForkPosition::T => self.square.o,
            ForkPosition::Left(k) => l.y_left[k],
            ForkPosition::Right(k) => l.y_right[k],
        };
        Ok(self.embed(base_id))
    }

    /// `x ∨ y` for `x` in the base and `y` in `F[S]`, computed as
    /// `x ∨ cover_in_l_above(y)` when the join lies in the base.
    pub fn join_via_base(&self, x: ElementId, y: ElementId) -> Result<ViaBase, ForkError> {
        let above = self.cover_in_l_above(y)?;
        let e = &self.extended;
        let truth = e.join(x, y);
        Ok(if self.in_base(truth) {
            ViaBase {
                value: e.join(x, above),
                fork_case: false,
            }
        } else {
            ViaBase {
                value: truth,
                fork_case: true,
            }
        })
    }

    /// Dual of [`join_via_base`](Self::join_via_base) using `greatest_l_below`.
    pub fn meet_via_base(&self, x: ElementId, y: ElementId) -> Result<ViaBase, ForkError> {
        let below = self.greatest_l_below(y)?;
        let e = &self.extended;
        let truth = e.meet(x, y);
        Ok(if self.in_base(truth) {
            ViaBase {
                value: e.meet(x, below),
                fork_case: false,
            }
        } else {
            ViaBase {
                value: truth,
                fork_case: true,
            }
        })
    }
}

enum ForkPosition {
    T,
    Left(usize),
    Right(usize),
}
