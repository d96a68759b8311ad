//! Desk-scale numerical laboratory for vector-measure integration theory on
//! finite atomic probability spaces and finite-dimensional normed spaces:
//! dual-ball norms of simple functions, operator spectra, p-variation and
//! p-semivariation of vector measures, p-summing norm estimates with
//! domination certificates, and dual-set thickness radii.
//!
//! All numeric code is generic over the scalar type via [`scalar::Real`];
//! concrete `f64` aliases are exported at the crate root.

pub mod error;
pub mod scalar;

mod linalg;
mod simplex;

pub mod acceptance;
pub mod dunford;
pub mod measure;
pub mod normed;
pub mod space;
pub mod summing;
pub mod thickness;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` probability space.
pub type Space64 = space::DiscreteProbabilitySpace<f64>;
/// `f64` scalar function.
pub type ScalarFunction64 = space::ScalarFunction<f64>;
/// `f64` norm descriptor.
pub type Descriptor64 = normed::SpaceDescriptor<f64>;
/// `f64` primal vector.
pub type Vector64 = normed::Vector<f64>;
/// `f64` dual vector.
pub type DualVector64 = normed::DualVector<f64>;
/// `f64` simple function.
pub type SimpleFunction64 = dunford::SimpleFunction<f64>;
/// `f64` vector measure.
pub type VectorMeasure64 = measure::VectorMeasure<f64>;
/// `f64` linear operator.
pub type LinearOperator64 = summing::LinearOperator<f64>;
