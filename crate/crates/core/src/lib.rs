//! Finite lattices, fork extensions of slim planar semimodular lattices, and
//! their congruences.
//!
//! The crate builds validated lattices from Hasse diagrams ([`FiniteLattice`]),
//! inserts forks at covering squares ([`insert_fork`]), computes congruence
//! lattices ([`all_congruences`]) and checks that every congruence of `L`
//! extends to `L[S]` through explicit constructions ([`cep_verify`]).

pub mod congruence;
pub mod corpus;
pub mod error;
pub mod extension;
pub mod fork;
pub mod lattice;
pub mod oracle;
mod planar;
pub mod sublattice;
pub mod text;

pub use congruence::{
    all_congruences, all_congruences_bounded, generated_congruence, is_congruence_by_covers,
    is_congruence_naive, principal_congruence, restrict, restrict_to_base, smallest_extension,
    Congruence, IntervalPartition, Partition,
};
pub use corpus::{grid, random_sps, CorpusRun, CorpusSpec, StopReason};
pub use error::{CongruenceError, ExtensionError, ForkError, LatticeError};
pub use extension::{
    cep_verify, classify_restriction, count_extensions, extend, extend_full, extend_onesided,
    extend_zero, CepReport, ExtensionCase, ExtensionPlan,
};
pub use fork::{insert_fork, ForkExtension, ForkLabels, ViaBase};
pub use lattice::{BuildOptions, CoveringSquare, ElementId, FiniteLattice, Interval};
pub use text::{parse, parse_with, serialize, ForkAnnotation, LatticeFile, ParseError};
