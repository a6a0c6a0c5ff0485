//! Deadline-constrained task offloading and resource allocation in
//! multi-access edge computing, solved by LP rounding through weighted
//! 3-dimensional matching.
//!
//! The pipeline discretizes allocations, solves the relaxed program, splits
//! AP and server capacity into unit nodes, merges the two sides into a
//! tripartite hypergraph and rounds a vertex of its matching polytope.

pub mod baselines;
pub mod bench;
pub mod discretize;
pub mod gma;
pub mod graph;
pub mod lp;
pub mod matching;
pub mod model;
pub mod scalar;

pub use scalar::Scalar;

pub type Lp = lp::LinearProgram<f64>;
pub type ExactLp = lp::LinearProgram<num_rational::BigRational>;
pub type Solution = lp::FractionalSolution<f64>;
pub type ExactSolution = lp::FractionalSolution<num_rational::BigRational>;
pub type HyperMatching = matching::Matching<f64>;
