//! Order-dimension-two test.
//!
//! A poset has dimension at most two iff its incomparability graph admits a
//! transitive orientation. The search below orients incomparable pairs one
//! at a time, propagating forced orientations, and backtracks on conflict.

use crate::lattice::{ElementId, FiniteLattice};

const UNSET: i8 = 0;

struct Orientation<'a> {
    lattice: &'a FiniteLattice,
    n: usize,
    // dir[a * n + b] == 1 iff a -> b, -1 iff b -> a.
    dir: Vec<i8>,
    trail: Vec<(usize, usize)>,
    queue: Vec<(usize, usize)>,
}

impl Orientation<'_> {
    #[inline]
    fn incomparable(&self, a: usize, b: usize) -> bool {
        a != b && !self.lattice.comparable(ElementId(a), ElementId(b))
    }

    #[inline]
    fn arc(&self, a: usize, b: usize) -> bool {
        self.dir[a * self.n + b] == 1
    }

    /// Orients `a -> b`; returns false on contradiction.
    fn force(&mut self, a: usize, b: usize) -> bool {
        match self.dir[a * self.n + b] {
            1 => true,
            -1 => false,
            _ => {
                self.dir[a * self.n + b] = 1;
                self.dir[b * self.n + a] = -1;
                self.trail.push((a, b));
                self.queue.push((a, b));
                true
            }
        }
    }

    fn propagate(&mut self) -> bool {
        while let Some((a, b)) = self.queue.pop() {
            for c in 0..self.n {
                if c == a || c == b {
                    continue;
                }
                let ac = self.incomparable(a, c);
                let bc = self.incomparable(b, c);
                // a -> b with c adjacent to exactly one endpoint.
                if ac && !bc && !self.force(a, c) {
                    return false;
                }
                if bc && !ac && !self.force(c, b) {
                    return false;
                }
                // Transitivity through c.
                if self.arc(b, c) && !(ac && self.force(a, c)) {
                    return false;
                }
                if self.arc(c, a) && !(bc && self.force(c, b)) {
                    return false;
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (a, b) = self.trail.pop().unwrap();
            self.dir[a * self.n + b] = UNSET;
            self.dir[b * self.n + a] = UNSET;
        }
        self.queue.clear();
    }

    fn solve(&mut self, edges: &[(usize, usize)], mut from: usize) -> bool {
        while from < edges.len() && self.dir[edges[from].0 * self.n + edges[from].1] != UNSET {
            from += 1;
        }
        let Some(&(a, b)) = edges.get(from) else {
            return true;
        };
        for (x, y) in [(a, b), (b, a)] {
            let mark = self.trail.len();
            if self.force(x, y) && self.propagate() && self.solve(edges, from + 1) {
                return true;
            }
            self.undo(mark);
        }
        false
    }
}

pub(crate) fn has_dimension_at_most_two(lattice: &FiniteLattice) -> bool {
    let n = lattice.len();
    let mut state = Orientation {
        lattice,
        n,
        dir: vec![UNSET; n * n],
        trail: Vec::new(),
        queue: Vec::new(),
    };
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .filter(|&(a, b)| state.incomparable(a, b))
        .collect();
    state.solve(&edges, 0)
}

#[cfg(test)]
mod tests {
    use crate::corpus::{grid, named};
    use crate::oracle;

    #[test]
    fn agrees_with_linear_extension_search() {
        for l in oracle::all_lattices_up_to(7) {
            assert_eq!(l.is_planar(), oracle::dimension_at_most_two(&l));
        }
        for l in [named::boolean(3), named::s7(), grid(2, 3), named::m3()] {
            assert_eq!(l.is_planar(), oracle::dimension_at_most_two(&l));
        }
    }

    #[test]
    fn known_cases() {
        assert!(named::chain(6).is_planar());
        assert!(grid(4, 4).is_planar());
        assert!(!named::boolean(3).is_planar());
        // M3 has dimension 2 (three atoms) but is not slim.
        assert!(named::m3().is_planar());
    }
}
