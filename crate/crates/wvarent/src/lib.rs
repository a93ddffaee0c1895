//! Weighted varentropy and weighted residual varentropy of lifetime
//! distributions.
//!
//! The crate computes variability measures of the (weighted) information
//! content `-w(X) log f(X)`:
//!
//! - closed forms and adaptive quadrature for nine lifetime families
//!   ([`distributions`], [`measures`]);
//! - residual-lifetime versions with derivative and bound machinery
//!   ([`residual`]);
//! - exact identities under affine and general monotone transformations
//!   ([`transforms`]);
//! - coherent-system distortion calculus ([`systems`]) and
//!   proportional-hazard-rate formulas ([`phr`]);
//! - a Gaussian-kernel nonparametric estimator with seeded Monte-Carlo and
//!   bootstrap study harnesses ([`estimation`]).
//!
//! The `wvarent` binary exposes all of it as subcommands; see the README.

pub mod cli;
pub mod dataset;
pub mod distributions;
pub mod erratum;
pub mod error;
pub mod estimation;
mod interp;
pub mod measures;
pub mod phr;
pub mod quadrature;
pub mod residual;
pub mod systems;
pub mod transforms;

pub use distributions::{Distribution, Law, PointFunction, SampleSeed};
pub use error::{Error, Result};
pub use measures::{DiscreteModel, WeightFunction};
pub use quadrature::{QuadratureConfig, QuadratureResult};
