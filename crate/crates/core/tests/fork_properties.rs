use std::collections::BTreeSet;

use forklat_core::corpus::{default_corpus, grid, grid_forks};
use forklat_core::{insert_fork, ElementId, ForkExtension};

fn corpus() -> Vec<ForkExtension> {
    default_corpus(2).expect("corpus generation")
}

fn check_labels(f: &ForkExtension) {
    let e = &f.extended;
    let l = &f.labels;
    let (n, m) = (l.n(), l.m());
    assert!(n >= 1 && m >= 1);
    assert_eq!(e.len(), f.base.len() + 1 + n + m);
    assert_eq!(l.x_left[0], f.square.a_l);
    assert_eq!(l.y_left[0], f.square.o);
    assert_eq!(l.x_right[0], f.square.a_r);
    assert_eq!(l.y_right[0], f.square.o);

    let emb = |x: ElementId| f.embed(x);
    for (zs, xs, ys) in [
        (&l.z_left, &l.x_left, &l.y_left),
        (&l.z_right, &l.x_right, &l.y_right),
    ] {
        for k in 0..zs.len() {
            assert!(e.covers(zs[k], emb(xs[k])));
            assert!(e.covers(emb(ys[k]), zs[k]));
            if k > 0 {
                assert!(e.covers(zs[k], zs[k - 1]));
                // the two squares created by this step
                assert!(f.base.square(ys[k], xs[k], ys[k - 1], xs[k - 1]).is_ok());
                assert!(e
                    .square(emb(ys[k]), zs[k], emb(ys[k - 1]), zs[k - 1])
                    .is_ok());
            }
        }
    }
    assert!(e.covers(l.z_left[0], l.t));
    assert!(e.covers(l.z_right[0], l.t));
    assert!(e.covers(l.t, emb(f.square.i)));

    let fork: BTreeSet<ElementId> = l.fork_elements().into_iter().collect();
    assert_eq!(fork.len(), 1 + n + m);
    assert!(l.embed.iter().all(|x| !fork.contains(x)));
}

#[test]
fn fork_labels_and_squares() {
    for f in corpus() {
        check_labels(&f);
    }
}

#[test]
fn base_is_a_sublattice() {
    for f in corpus() {
        let (b, e) = (&f.base, &f.extended);
        for x in b.elements() {
            for y in b.elements() {
                assert_eq!(f.embed(b.join(x, y)), e.join(f.embed(x), f.embed(y)));
                assert_eq!(f.embed(b.meet(x, y)), e.meet(f.embed(x), f.embed(y)));
            }
        }
    }
}

#[test]
fn extensions_stay_sps() {
    for f in corpus() {
        assert!(
            f.extended.is_sps(),
            "{}",
            forklat_core::serialize(&f.extended, None)
        );
        assert!(f
            .extended
            .elements()
            .all(|x| f.extended.upper_covers(x).len() <= 2));
    }
}

#[test]
fn base_cover_identities() {
    for f in corpus() {
        let e = &f.extended;
        let l = &f.labels;
        assert_eq!(f.cover_in_l_above(l.t).unwrap(), f.embed(f.square.i));
        assert_eq!(f.greatest_l_below(l.t).unwrap(), f.embed(f.square.o));
        for z in l.fork_elements() {
            // base elements above / below z, by scan
            let above: Vec<ElementId> = e
                .elements()
                .filter(|&x| f.in_base(x) && e.leq(z, x))
                .collect();
            let below: Vec<ElementId> = e
                .elements()
                .filter(|&x| f.in_base(x) && e.leq(x, z))
                .collect();
            let up = f.cover_in_l_above(z).unwrap();
            let down = f.greatest_l_below(z).unwrap();
            assert!(above.iter().all(|&x| e.leq(up, x)));
            assert!(below.iter().all(|&x| e.leq(x, down)));
            if z != l.t {
                let base_up: Vec<_> = e
                    .upper_covers(z)
                    .iter()
                    .filter(|&&x| f.in_base(x))
                    .collect();
                let base_down: Vec<_> = e
                    .lower_covers(z)
                    .iter()
                    .filter(|&&x| f.in_base(x))
                    .collect();
                assert_eq!(base_up, [&up]);
                assert_eq!(base_down, [&down]);
            }
            for x in f.base.elements().map(|x| f.embed(x)) {
                let j = f.join_via_base(x, z).unwrap();
                assert_eq!(j.value, e.join(x, z));
                assert_eq!(j.fork_case, !f.in_base(e.join(x, z)));
                let m = f.meet_via_base(x, z).unwrap();
                assert_eq!(m.value, e.meet(x, z));
            }
        }
    }
}

#[test]
fn three_lower_covers_generate_s7() {
    for f in corpus() {
        let e = &f.extended;
        let i = f.embed(f.square.i);
        let seed = [f.embed(f.square.a_l), f.embed(f.square.a_r), f.labels.t];
        assert!(seed.iter().all(|&x| e.covers(x, i)));
        assert!(e.is_s7(&e.sublattice_generated(&seed)));
        for a in e.elements() {
            let lc = e.lower_covers(a);
            if lc.len() == 3 {
                assert!(e.is_s7(&e.sublattice_generated(lc)), "at {}", e.label(a));
            }
        }
    }
}

/// `i` gains `t` as a lower cover, so it ends with one more than it had.
#[test]
fn i_gains_one_lower_cover() {
    let mut four = 0;
    for f in corpus() {
        let before = f.base.lower_covers(f.square.i).len();
        let after = f.extended.lower_covers(f.embed(f.square.i)).len();
        assert_eq!(after, before + 1);
        four += usize::from(after == 4);
    }
    assert!(four > 0);
}

#[test]
fn single_grid_forks_have_expected_sizes() {
    let forks = grid_forks(4).unwrap();
    assert_eq!(forks.len(), 1 + 2 + 3 + 2 + 4 + 6 + 3 + 6 + 9);
    let g = grid(3, 3);
    let top = g.square_by_labels("11", "21", "12", "22").unwrap();
    let f = insert_fork(&g, top).unwrap();
    assert_eq!(f.extended.len(), 14);
}
