//! Derivative-free Frenet frames of point sequences, flag-simplex geometry, tangent
//! frames of sampled compact sets and piecewise-linear witness functions.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases at the
//! crate root fix `f64`, which is what the command-line tool uses.

pub mod clouds;
pub mod error;
pub mod estimator;
pub mod geometry;
pub mod scalar;
pub mod tangent;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Vector = geometry::Vector<f64>;
pub type Frame = geometry::Frame<f64>;
pub type Simplex = geometry::Simplex<f64>;
pub type FlagSimplex = geometry::FlagSimplex<f64>;
pub type Tolerances = geometry::Tolerances<f64>;
pub type PointSequence = estimator::PointSequence<f64>;
pub type FrameEstimate = estimator::FrameEstimate<f64>;
pub type EstimatorConfig = estimator::EstimatorConfig<f64>;
pub type SampledSet = tangent::SampledSet<f64>;
pub type TangentConfig = tangent::TangentConfig<f64>;
pub type TangentRecord = tangent::TangentRecord<f64>;
pub type TangentReport = tangent::TangentReport<f64>;
pub type OutgoingReport = tangent::OutgoingReport<f64>;
pub type PlFormula = witness::PlFormula<f64>;
pub type RatioTable = witness::RatioTable<f64>;
