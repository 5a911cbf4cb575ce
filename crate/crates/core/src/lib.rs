//! Exact convex-polytope kernel, lattice measures, covariogram moments and a
//! numerical verification suite for Zhang-type and Berwald-type inequalities.

pub mod clip;
pub mod error;
pub mod harness;
pub mod hull;
pub mod lattice;
pub mod linalg;
pub mod lp;
pub mod moments;
pub mod polytope;
pub mod profiles;
pub mod quadrature;
pub mod rational;
pub mod sections;
pub mod steiner;
pub mod suite;
pub mod sweep;

pub use error::{Error, Result};
pub use polytope::{Direction, Halfspace, Interval, MeasureValue, Polytope};
pub use rational::Q;
