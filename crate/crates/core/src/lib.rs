//! Smallest denominators of rational points in small regions, multidimensional
//! Farey fractions, their limit distributions, and minimal resonance orders.

pub mod analytic;
pub mod error;
pub mod exactnum;
pub mod farey;
pub mod par;
pub mod qmin;
pub mod regions;
pub mod resonance;
pub mod stats;

pub use error::{Error, Result};
pub use exactnum::{PrimitivePoint, Rational};
pub use farey::FareyLevel;
pub use qmin::{qmin, QminAnswer};
pub use regions::{Norm, QueryRegion, RegionSpec};
