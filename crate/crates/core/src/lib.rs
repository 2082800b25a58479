//! Correlation structure of finite networks of stochastic rate neurons.
//!
//! The crate covers structured connectivity ([`topology`]), closed-form
//! spectra ([`spectral`]), the linearized propagator ([`propagator`]),
//! first-order analytic covariances ([`analytic`]), Monte Carlo ensembles of
//! the exact and perturbative dynamics ([`simulator`]), the headline scans
//! ([`analysis`]) and Taylor radii of the activation ([`convergence`]).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::too_many_arguments, clippy::needless_range_loop)]

pub mod analysis;
pub mod analytic;
pub mod convergence;
pub mod error;
pub mod exec;
pub mod neuron;
pub mod propagator;
pub mod simulator;
pub mod spectral;
pub mod topology;

pub use analytic::{AnalyticModel, CovarianceReport, NoiseSpec};
pub use error::{Error, Result};
pub use exec::Execution;
pub use neuron::{NetworkParams, SigmoidParams};
pub use propagator::Propagator;
pub use simulator::{EnsembleStats, Order, SimConfig};
pub use spectral::{Basis, Spectrum};
pub use topology::{GraphExpr, TopologySpec, WeightedAdjacency};
