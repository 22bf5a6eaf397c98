//! Recognition of the seven-element lattice produced by a fork at a square.

/// Labels of the seven-element lattice, bottom to top.
pub const S7_LABELS: [&str; 7] = ["o", "zl", "zr", "al", "ar", "t", "i"];

/// Cover pairs of the seven-element lattice, as indices into [`S7_LABELS`].
pub const S7_COVERS: [(usize, usize); 9] = [
    (0, 1),
    (0, 2),
    (1, 3),
    (2, 4),
    (1, 5),
    (2, 5),
    (3, 6),
    (4, 6),
    (5, 6),
];

fn s7_order() -> [[bool; 7]; 7] {
    let mut leq = [[false; 7]; 7];
    for (x, row) in leq.iter_mut().enumerate() {
        row[x] = true;
    }
    for &(a, b) in &S7_COVERS {
        leq[a][b] = true;
    }
    // Two rounds close chains of length three.
    for _ in 0..2 {
        for a in 0..7 {
            for b in 0..7 {
                for c in 0..7 {
                    if leq[a][b] && leq[b][c] {
                        leq[a][c] = true;
                    }
                }
            }
        }
    }
    leq
}

/// Whether the order on seven points given by `leq` is isomorphic to S7.
pub(crate) fn isomorphic_to_s7(leq: impl Fn(usize, usize) -> bool) -> bool {
    let template = s7_order();
    let mut perm = [0usize; 7];
    let mut used = [false; 7];
    search(&template, &leq, &mut perm, &mut used, 0)
}

fn search(
    template: &[[bool; 7]; 7],
    leq: &impl Fn(usize, usize) -> bool,
    perm: &mut [usize; 7],
    used: &mut [bool; 7],
    depth: usize,
) -> bool {
    if depth == 7 {
        return true;
    }
    for candidate in 0..7 {
        if used[candidate] {
            continue;
        }
        let consistent = (0..depth).all(|p| {
            template[p][depth] == leq(perm[p], candidate)
                && template[depth][p] == leq(candidate, perm[p])
        });
        if consistent {
            used[candidate] = true;
            perm[depth] = candidate;
            if search(template, leq, perm, used, depth + 1) {
                return true;
            }
            used[candidate] = false;
        }
    }
    false
}
