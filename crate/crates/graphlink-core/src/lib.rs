//! Exact-arithmetic calculus of splice diagrams for graph multilinks.
//!
//! A splice diagram is a weighted forest whose internal vertices stand for
//! Seifert-fibered pieces, whose arrows stand for link components carrying
//! integer multiplicities, and whose stubs stand for exceptional fibers.
//! This crate implements the diagram model and its validation, linking
//! numbers, the splice/split operations with their multiplicity
//! compatibility equations, reduction to minimal diagrams, the Novikov
//! homology of a diagram with multiplicities, and the stratification of
//! multiplicity space by the linear forms that control the answer.
//!
//! All arithmetic is exact ([`num_bigint::BigInt`] throughout); the crate is
//! `no_std` + `alloc`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diagram;
pub mod error;
pub mod matrix;
pub mod novikov;
pub mod splice;
pub mod strata;

pub use diagram::{
    Arrow, DiagramPath, Endpoint, InternalEdge, MultiplicityAssignment, PathElement,
    SpliceDiagram, Stub, Violation,
};
pub use error::Error;
pub use matrix::{cokernel, smith_normal_form, CokernelSummary, IntegerMatrix, SmithForm};
pub use novikov::{
    classify_vertices, gamma_prime, novikov_homology, presentation_matrix, GammaPrime,
    NovikovModule, PresentationData, VertexClassification, VertexStatus,
};
pub use splice::{
    fiber_multiplicity, is_fibered, linking, normalize, reduce, splice, split, LinkEnd,
    SplitResult,
};
pub use strata::{
    hyperplane_forms, stratum_constancy_check, sweep, ConstancyReport, FormOrigin, LinearForm,
    Signature, StratumEntry, SweepOptions, SweepReport,
};
