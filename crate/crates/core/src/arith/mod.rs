//! Scalar arithmetic, polynomials and formal series at infinity.

pub mod complex;
pub mod intpoly;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod series;

pub use complex::Complex;
pub use poly::Poly;
pub use roots::{poly_roots, sturm_count};
pub use scalar::{precision_bits, set_default_precision_bits, with_precision, zero_threshold, Scalar};
pub use series::FormalSeries;
