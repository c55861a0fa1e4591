//! Numerical toolkit for the metric geometry of reduced C*-algebras of finite
//! transformation groupoids.
//!
//! Everything here is finite and dense: a groupoid is a finite group acting on
//! a finite set, algebra elements are complex tables over the arrow set, and
//! the regular representation splits into one matrix block per source fibre.
//! On top of that sit length functions, commutator seminorms, states given by
//! fibre density blocks, and a certified cutting-plane solver for the induced
//! distance on the state space.

pub mod algebra;
pub mod dirac;
pub mod groupoid;
pub mod linalg;
pub mod metric;
pub mod rd;
pub mod solver;
pub mod spec_io;
pub mod state;

pub use algebra::AlgebraElement;
pub use groupoid::{Ball, FiniteGroup, GroupAction, LengthFunction, TransformationGroupoid};
pub use metric::{CertificateStatus, DistanceCertificate};
pub use state::{FibreMeasure, State};
