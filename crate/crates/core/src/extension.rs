//! Extending congruences of `L` to the fork extension `L[S]`.
//!
//! A congruence `α` of `L` restricted to the square `S = {o, a_l, a_r, i}`
//! is one of four congruences of the square, and each has its own closed
//! form for the extension:
//!
//! * `o ≡ i`: every class `[u, v]_L` becomes `[u, v]_{L[S]}`; the fork
//!   elements are absorbed and the extension is unique.
//! * `α↾S = 0`: the classes `[u, v]_{L[S]}` contain no fork element; `t` is
//!   a singleton and each `z` chain splits along the `α`-classes of its
//!   trajectory. This is the least extension.
//! * `a_l ≡ i` and `a_r ≢ i`: each `z_{l,k}` joins the class of `x_{l,k}`,
//!   `t` joins the class of `i`, and each `z_{r,k}` joins the class of
//!   `x_{r,k}`. The extension is unique. The mirrored case swaps sides.

use rayon::prelude::*;
use serde::Serialize;

use crate::congruence::{
    all_congruences, is_congruence_naive, restrict_to_base, smallest_extension, Congruence,
    Partition,
};
use crate::error::{CongruenceError, ExtensionError};
use crate::fork::ForkExtension;
use crate::lattice::ElementId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ExtensionCase {
    ZeroOnS,
    CollapseAll,
    CollapseLeft,
    CollapseRight,
}

/// The case of `α↾S` together with, for every trajectory step `k`, the least
/// and greatest step `j` with `x_j ≡ x_k (mod α)`. Steps are 0-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionPlan {
    pub case: ExtensionCase,
    pub left_class_bounds: Vec<(usize, usize)>,
    pub right_class_bounds: Vec<(usize, usize)>,
}

fn class_bounds(alpha: &Congruence, xs: &[ElementId]) -> Vec<(usize, usize)> {
    (0..xs.len())
        .map(|k| {
            let same = |j: &usize| alpha.equivalent(xs[*j], xs[k]);
            let lo = (0..xs.len()).find(same).unwrap();
            let hi = (0..xs.len()).rev().find(same).unwrap();
            (lo, hi)
        })
        .collect()
}

impl ExtensionPlan {
    pub fn new(ext: &ForkExtension, alpha: &Congruence) -> Self {
        ExtensionPlan {
            case: classify_restriction(ext, alpha),
            left_class_bounds: class_bounds(alpha, &ext.labels.x_left),
            right_class_bounds: class_bounds(alpha, &ext.labels.x_right),
        }
    }
}

/// Which of the four congruences of the square `α` restricts to.
pub fn classify_restriction(ext: &ForkExtension, alpha: &Congruence) -> ExtensionCase {
    let s = ext.square;
    if alpha.equivalent(s.o, s.i) {
        ExtensionCase::CollapseAll
    } else if alpha.equivalent(s.a_l, s.i) {
        ExtensionCase::CollapseLeft
    } else if alpha.equivalent(s.a_r, s.i) {
        ExtensionCase::CollapseRight
    } else {
        ExtensionCase::ZeroOnS
    }
}

fn require_case(
    ext: &ForkExtension,
    alpha: &Congruence,
    allowed: &[ExtensionCase],
) -> Result<ExtensionCase, ExtensionError> {
    let case = classify_restriction(ext, alpha);
    if allowed.contains(&case) {
        Ok(case)
    } else {
        Err(ExtensionError::WrongCase(case))
    }
}

/// Block assignment for the elements of `L[S]`.
struct Assignment<'a> {
    ext: &'a ForkExtension,
    owner: Vec<Option<usize>>,
}

impl<'a> Assignment<'a> {
    fn new(ext: &'a ForkExtension) -> Self {
        Assignment {
            ext,
            owner: vec![None; ext.extended.len()],
        }
    }

    fn assign(&mut self, x: ElementId, block: usize) -> Result<(), ExtensionError> {
        match self.owner[x.0] {
            Some(b) if b != block => Err(ExtensionError::ConflictingAssignment(
                self.ext.extended.label(x).to_string(),
            )),
            _ => {
                self.owner[x.0] = Some(block);
                Ok(())
            }
        }
    }

    fn finish(self) -> Result<Congruence, ExtensionError> {
        let e = &self.ext.extended;
        let keys = self
            .owner
            .iter()
            .enumerate()
            .map(|(x, b)| {
                b.ok_or_else(|| {
                    CongruenceError::NotAPartition(format!(
                        "`{}` in no block",
                        e.label(ElementId(x))
                    ))
                })
            })
            .collect::<Result<Vec<usize>, _>>()?;
        Ok(Congruence::new(e, Partition::from_keys(keys))?)
    }
}

/// Assigns `[u, v]_{L[S]}` to every class `[u, v]_L`, returning the block
/// index used for each class.
fn assign_class_closures(
    asg: &mut Assignment<'_>,
    alpha: &Congruence,
    forbid_fork: bool,
) -> Result<(), ExtensionError> {
    let ext = asg.ext;
    let e = &ext.extended;
    for (b, &(lo, hi)) in alpha.bounds().iter().enumerate() {
        let (lo, hi) = (ext.embed(lo), ext.embed(hi));
        for x in e.elements().filter(|&x| e.leq(lo, x) && e.leq(x, hi)) {
            if forbid_fork && ext.is_fork_element(x) {
                return Err(ExtensionError::ForkElementInClass(e.label(x).to_string()));
            }
            asg.assign(x, b)?;
        }
    }
    Ok(())
}

/// Extension of a congruence collapsing `o` and `i`.
pub fn extend_full(ext: &ForkExtension, alpha: &Congruence) -> Result<Congruence, ExtensionError> {
    require_case(ext, alpha, &[ExtensionCase::CollapseAll])?;
    let mut asg = Assignment::new(ext);
    assign_class_closures(&mut asg, alpha, false)?;
    asg.finish()
}

/// Least extension of a congruence that is trivial on the square.
pub fn extend_zero(ext: &ForkExtension, alpha: &Congruence) -> Result<Congruence, ExtensionError> {
    require_case(ext, alpha, &[ExtensionCase::ZeroOnS])?;
    let plan = ExtensionPlan::new(ext, alpha);
    let mut asg = Assignment::new(ext);
    assign_class_closures(&mut asg, alpha, true)?;

    let mut next = alpha.block_count();
    asg.assign(ext.labels.t, next)?;
    next += 1;
    for (zs, bounds) in [
        (&ext.labels.z_left, &plan.left_class_bounds),
        (&ext.labels.z_right, &plan.right_class_bounds),
    ] {
        for (k, &z) in zs.iter().enumerate() {
            // Chain blocks are keyed by their least step.
            asg.assign(z, next + bounds[k].0)?;
        }
        next += zs.len();
    }
    asg.finish()
}

/// Unique extension of a congruence collapsing exactly one side of the square.
pub fn extend_onesided(
    ext: &ForkExtension,
    alpha: &Congruence,
) -> Result<Congruence, ExtensionError> {
    match require_case(
        ext,
        alpha,
        &[ExtensionCase::CollapseLeft, ExtensionCase::CollapseRight],
    )? {
        ExtensionCase::CollapseLeft => extend_left(ext, alpha),
        _ => extend_left(&ext.mirrored(), alpha),
    }
}

fn extend_left(ext: &ForkExtension, alpha: &Congruence) -> Result<Congruence, ExtensionError> {
    let l = &ext.labels;
    let block = |x: ElementId| alpha.block_of(x);
    let mut asg = Assignment::new(ext);
    for x in ext.base.elements() {
        asg.assign(ext.embed(x), block(x))?;
    }
    let top = block(ext.square.i);
    // The class of i takes every z_{l,k} whose x_{l,k} is congruent to a_l.
    for (k, &z) in l.z_left.iter().enumerate() {
        if alpha.equivalent(l.x_left[k], l.x_left[0]) {
            asg.assign(z, top)?;
        }
    }
    // Further down, z_{l,k} and z_{r,k} join the class of their upper cover x_k.
    for (k, &z) in l.z_left.iter().enumerate().skip(1) {
        asg.assign(z, block(l.x_left[k]))?;
    }
    for (k, &z) in l.z_right.iter().enumerate().skip(1) {
        asg.assign(z, block(l.x_right[k]))?;
    }
    // z_{l,1} ≤ t ≤ i puts t in the class of i; o ≤ z_{r,1} ≤ a_r with
    // o ≡ a_r puts z_{r,1} in the class of a_r.
    asg.assign(l.t, top)?;
    asg.assign(l.z_right[0], block(ext.square.a_r))?;
    asg.finish()
}

/// Extension of any congruence of `L` to `L[S]`, dispatched on `α↾S`.
pub fn extend(ext: &ForkExtension, alpha: &Congruence) -> Result<Congruence, ExtensionError> {
    match classify_restriction(ext, alpha) {
        ExtensionCase::CollapseAll => extend_full(ext, alpha),
        ExtensionCase::ZeroOnS => extend_zero(ext, alpha),
        ExtensionCase::CollapseLeft | ExtensionCase::CollapseRight => extend_onesided(ext, alpha),
    }
}

/// Number of congruences of `L[S]` restricting to `α`.
pub fn count_extensions(ext: &ForkExtension, alpha: &Congruence) -> Result<usize, CongruenceError> {
    let con = all_congruences(&ext.extended)?;
    let mut count = 0;
    for beta in &con {
        if restrict_to_base(ext, beta)? == *alpha {
            count += 1;
        }
    }
    Ok(count)
}

/// A clause of the verification that failed for some `α`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Construction(String),
    NotACongruence,
    Restriction,
    Oracle,
    Uniqueness,
    Minimality,
    /// The least congruence of `L[S]` containing `α` restricts to something
    /// strictly larger than `α`, so `α` has no extension at all.
    NoExtension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub alpha: String,
    pub clause: Clause,
}

/// Outcome for one congruence of `L`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaRecord {
    pub alpha_blocks: Vec<Vec<String>>,
    pub case: ExtensionCase,
    pub extension_blocks: Vec<Vec<String>>,
    pub oracle_equal: bool,
    pub restriction_ok: bool,
    pub extension_count: Option<usize>,
    pub congruence_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CepReport {
    pub base_size: usize,
    pub extension_size: usize,
    pub square: [String; 4],
    pub n: usize,
    pub m: usize,
    pub congruences: Vec<AlphaRecord>,
    pub counterexamples: Vec<Counterexample>,
    pub verified: bool,
}

fn owned(sig: Vec<Vec<&str>>) -> Vec<Vec<String>> {
    sig.into_iter()
        .map(|b| b.into_iter().map(str::to_string).collect())
        .collect()
}

/// Checks every congruence of `L`: the closed-form extension is a congruence
/// under both checkers, restricts to `α`, equals the closure oracle, and is
/// unique (or least, when `α↾S = 0`) among the extensions in `Con(L[S])`.
/// Uniqueness is skipped, with `extension_count` left empty, when `L[S]` is
/// above the enumeration bound.
pub fn cep_verify(ext: &ForkExtension) -> Result<CepReport, CongruenceError> {
    let base = &ext.base;
    let e = &ext.extended;
    let con_base = all_congruences(base)?;
    let restricted: Option<Vec<(Congruence, Congruence)>> = match all_congruences(e) {
        Ok(con) => Some(
            con.into_iter()
                .map(|beta| Ok((restrict_to_base(ext, &beta)?, beta)))
                .collect::<Result<_, CongruenceError>>()?,
        ),
        Err(CongruenceError::SizeBound { .. }) => None,
        Err(other) => return Err(other),
    };

    let results: Vec<(AlphaRecord, Vec<Counterexample>)> = con_base
        .par_iter()
        .map(|alpha| verify_one(ext, alpha, restricted.as_deref()))
        .collect();

    let mut congruences = Vec::with_capacity(results.len());
    let mut counterexamples = Vec::new();
    for (rec, bad) in results {
        congruences.push(rec);
        counterexamples.extend(bad);
    }
    Ok(CepReport {
        base_size: base.len(),
        extension_size: e.len(),
        square: ext.square.labels(base).map(str::to_string),
        n: ext.n(),
        m: ext.m(),
        verified: counterexamples.is_empty(),
        congruences,
        counterexamples,
    })
}

fn verify_one(
    ext: &ForkExtension,
    alpha: &Congruence,
    restricted: Option<&[(Congruence, Congruence)]>,
) -> (AlphaRecord, Vec<Counterexample>) {
    let e = &ext.extended;
    let case = classify_restriction(ext, alpha);
    let alpha_text = alpha.format(&ext.base);
    let mut bad = Vec::new();
    let mut fail = |clause| {
        bad.push(Counterexample {
            alpha: alpha_text.clone(),
            clause,
        })
    };
    let oracle = smallest_extension(ext, alpha);

    let mut record = AlphaRecord {
        alpha_blocks: owned(alpha.signature(&ext.base)),
        case,
        extension_blocks: Vec::new(),
        oracle_equal: false,
        restriction_ok: false,
        extension_count: None,
        congruence_ok: false,
    };

    if restrict_to_base(ext, &oracle).is_ok_and(|r| r != *alpha) {
        fail(Clause::NoExtension);
    }
    let fibre: Option<Vec<&Congruence>> = restricted.map(|all| {
        all.iter()
            .filter(|(r, _)| r == alpha)
            .map(|(_, b)| b)
            .collect()
    });
    record.extension_count = fibre.as_ref().map(Vec::len);

    let beta = match extend(ext, alpha) {
        Ok(beta) => beta,
        Err(err) => {
            fail(Clause::Construction(err.to_string()));
            return (record, bad);
        }
    };
    record.extension_blocks = owned(beta.signature(e));
    record.congruence_ok =
        beta.satisfies_cover_conditions(e) && is_congruence_naive(e, beta.partition());
    if !record.congruence_ok {
        fail(Clause::NotACongruence);
    }
    record.restriction_ok = restrict_to_base(ext, &beta).is_ok_and(|r| r == *alpha);
    if !record.restriction_ok {
        fail(Clause::Restriction);
    }
    record.oracle_equal = beta == oracle;
    if !record.oracle_equal {
        fail(Clause::Oracle);
    }
    if let Some(fibre) = fibre {
        match case {
            ExtensionCase::ZeroOnS => {
                if !fibre.iter().all(|b| beta.refines(b)) {
                    fail(Clause::Minimality);
                }
            }
            _ => {
                if fibre.len() != 1 {
                    fail(Clause::Uniqueness);
                }
            }
        }
    }
    (record, bad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::principal_congruence;
    use crate::corpus::{grid, named};
    use crate::fork::insert_fork;

    fn b2_fork() -> ForkExtension {
        let b2 = named::b2();
        insert_fork(&b2, b2.covering_squares()[0]).unwrap()
    }

    fn grid_fork() -> ForkExtension {
        let g = grid(3, 3);
        insert_fork(&g, g.square_by_labels("11", "21", "12", "22").unwrap()).unwrap()
    }

    #[test]
    fn classification() {
        let f = b2_fork();
        let b2 = &f.base;
        assert_eq!(
            classify_restriction(&f, &Congruence::zero(b2)),
            ExtensionCase::ZeroOnS
        );
        assert_eq!(
            classify_restriction(&f, &Congruence::one(b2)),
            ExtensionCase::CollapseAll
        );
        let left = Congruence::from_labels(b2, &[&["o", "ar"], &["al", "i"]]).unwrap();
        assert_eq!(classify_restriction(&f, &left), ExtensionCase::CollapseLeft);
        let right = Congruence::from_labels(b2, &[&["o", "al"], &["ar", "i"]]).unwrap();
        assert_eq!(
            classify_restriction(&f, &right),
            ExtensionCase::CollapseRight
        );
    }

    #[test]
    fn wrong_case_rejected() {
        let f = b2_fork();
        let zero = Congruence::zero(&f.base);
        assert_eq!(
            extend_full(&f, &zero).unwrap_err(),
            ExtensionError::WrongCase(ExtensionCase::ZeroOnS)
        );
        assert!(extend_onesided(&f, &zero).is_err());
        assert!(extend_zero(&f, &Congruence::one(&f.base)).is_err());
    }

    #[test]
    fn b2_extensions() {
        let f = b2_fork();
        let (b2, s7) = (&f.base, &f.extended);
        assert!(extend(&f, &Congruence::zero(b2)).unwrap().is_zero());
        assert_eq!(
            extend_full(&f, &Congruence::one(b2)).unwrap(),
            Congruence::one(s7)
        );
        let left = Congruence::from_labels(b2, &[&["o", "ar"], &["al", "i"]]).unwrap();
        assert_eq!(
            extend_onesided(&f, &left).unwrap().format(s7),
            "{al,i,t,zl1}{ar,o,zr1}"
        );
        let right = Congruence::from_labels(b2, &[&["o", "al"], &["ar", "i"]]).unwrap();
        assert_eq!(
            extend_onesided(&f, &right).unwrap().format(s7),
            "{al,o,zl1}{ar,i,t,zr1}"
        );
    }

    #[test]
    fn b2_counts() {
        let f = b2_fork();
        let b2 = &f.base;
        assert_eq!(count_extensions(&f, &Congruence::one(b2)).unwrap(), 1);
        assert_eq!(count_extensions(&f, &Congruence::zero(b2)).unwrap(), 2);
        let left = Congruence::from_labels(b2, &[&["o", "ar"], &["al", "i"]]).unwrap();
        assert_eq!(count_extensions(&f, &left).unwrap(), 1);
    }

    #[test]
    fn grid_zero_case_chain_block() {
        let f = grid_fork();
        let g = &f.base;
        let alpha = principal_congruence(g, g.id("00").unwrap(), g.id("01").unwrap());
        assert_eq!(classify_restriction(&f, &alpha), ExtensionCase::ZeroOnS);
        let plan = ExtensionPlan::new(&f, &alpha);
        assert_eq!(plan.left_class_bounds, [(0, 1), (0, 1)]);
        assert_eq!(plan.right_class_bounds, [(0, 0), (1, 1)]);
        let beta = extend_zero(&f, &alpha).unwrap();
        let l = &f.labels;
        assert!(beta.equivalent(l.z_left[0], l.z_left[1]));
        assert!(!beta.equivalent(l.z_right[0], l.z_right[1]));
        assert_eq!(beta, smallest_extension(&f, &alpha));
    }

    #[test]
    fn grid_full_case() {
        let f = grid_fork();
        let beta = extend(&f, &Congruence::one(&f.base)).unwrap();
        assert_eq!(beta.block_count(), 1);
        assert_eq!(beta.len(), 14);
    }

    #[test]
    fn cep_on_small_instances() {
        let report = cep_verify(&b2_fork()).unwrap();
        assert!(report.verified);
        let counts: Vec<(ExtensionCase, Option<usize>)> = report
            .congruences
            .iter()
            .map(|r| (r.case, r.extension_count))
            .collect();
        assert_eq!(counts.len(), 4);
        for (case, count) in counts {
            let expected = if case == ExtensionCase::ZeroOnS { 2 } else { 1 };
            assert_eq!(count, Some(expected));
        }

        let report = cep_verify(&grid_fork()).unwrap();
        assert!(report.verified, "{:?}", report.counterexamples);
        assert_eq!(report.congruences.len(), 16);
    }

    #[test]
    fn monotone() {
        let f = grid_fork();
        let con = all_congruences(&f.base).unwrap();
        for a in &con {
            for b in con.iter().filter(|b| a.refines(b)) {
                assert!(extend(&f, a).unwrap().refines(&extend(&f, b).unwrap()));
            }
        }
    }
}
