//! Periodic grid fields, spectral transforms, differential operators,
//! interpolation, and the exterior-algebra residual oracle.

pub mod field;
pub mod forms;
pub mod grid;
pub mod products;
pub mod spectral;

pub use field::{kahan_sum, ScalarField, VectorField};
pub use forms::{eps, wedge_residual_full, FormPair, XMap};
pub use grid::Grid;
pub use products::{mul2, mul3};
pub use spectral::Spectrum;
