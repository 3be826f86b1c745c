//! Sign assignments on formal flows and integral combinatorial Heegaard Floer
//! homology of grid diagrams.
//!
//! The crate is organised bottom-up:
//!
//! * [`formal`] enumerates formal generators, bigons and rectangles.
//! * [`relations`] lists the degeneration and square relations a sign
//!   assignment must satisfy and compiles them into a GF(2) system.
//! * [`signs`] solves those systems, builds a total sign evaluator and
//!   provides gauge tools and the axiom verifier.
//! * [`diagram`] and [`homology`] use an evaluator to build the signed
//!   differential of a grid diagram and compute its homology over the integers.

pub mod calibrate;
pub mod diagram;
pub mod error;
pub mod formal;
pub mod gf2;
pub mod homology;
pub mod perm;
pub mod relations;
pub mod sign;
pub mod signs;
pub mod torus;

pub use error::{Error, Result};
pub use formal::{
    companion, enumerate_flows, enumerate_generators, flow_endpoints, reverse_edge, simple_flip,
    validate_flow, DegenerationKind, Edge, FormalBigon, FormalFlow, FormalGenerator,
    FormalRectangle,
};
pub use diagram::{b_stabilize, validate_diagram, DiagramFlow, DiagramGenerator, GridDiagram};
pub use homology::{homology, smith_normal_form, HomologyResult, SparseIntMatrix};
pub use sign::Sign;
pub use signs::{bigon_sign, SignEvaluator, SignSource, SignTable};
pub use torus::CurveFrame;

/// Size bounds for the exhaustive operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest power for which generators and flows are enumerated.
    pub enumeration: usize,
    /// Largest power for the profile-1 rectangle solve.
    pub profile1: usize,
    /// Largest power for the solve over all flows.
    pub global: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { enumeration: 8, profile1: 6, global: 3 }
    }
}
