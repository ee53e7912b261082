//! Approximation algorithms for generalized minimum Manhattan
//! networks: given terminal pairs in d dimensions, build a short
//! rectilinear network that connects every pair by a path of length
//! equal to its L1 distance.
//!
//! The pipeline separates the instance axis by axis at coordinate
//! medians, reduces fully separated subinstances to rectilinear
//! Steiner arborescences (built by Euler-tour shortcutting of a
//! Steiner tree), and, in the improved 2D configuration, handles
//! x-separated subinstances with a sweep-line stabbing plus two
//! arborescences. Exact rational arithmetic throughout; small exact
//! oracles and generators live in [`toolkit`].

pub mod error;
pub mod geom;
pub mod io;
pub mod rsa;
pub mod solver;
pub mod stabbing;
pub mod svg;
pub mod toolkit;
pub mod verifier;

pub use error::{GmmnError, Result};
pub use geom::{Instance, Point, Rational, RectilinearNetwork, Segment, TerminalPair};
pub use solver::{solve_gmmn, Algorithm, SolverConfig};
pub use verifier::verify_instance;
