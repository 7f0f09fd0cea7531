//! Finite metric linear and cyclic orders with exact rational distances.
//!
//! The crate covers the derived predicates of metric linear orders and their
//! axioms as defect-valued checkers, the ultrametric space `U_S`, the
//! back-and-forth correlation engine, regulated functions with
//! quantifier-free predicate synthesis, a continuous-logic evaluator, and a
//! small valued-field sandbox over truncated power series.

pub mod backforth;
pub mod clogic;
pub mod cyclic;
pub mod error;
pub mod fixtures;
pub mod gen;
pub mod interval;
pub mod io;
pub mod metric;
pub mod mvf;
pub mod order;
pub mod rational;
pub mod regulated;
pub mod urysohn;

pub use cyclic::{roll_up, FiniteCyclicOrder};
pub use error::{Error, Result};
pub use metric::MetricSpace;
pub use order::{AxiomDefect, FiniteMetricOrder};
pub use rational::Rational;
