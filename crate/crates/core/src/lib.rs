//! Exact symbolic engine for planar maps that are polynomial in `y`
//! with rational-polynomial coefficients in `x`.
//!
//! The crate classifies such maps on vertical strips, decomposes
//! non-singular delta-maps into chains of triangular and
//! quasi-triangular factors, inverts those chains, and certifies (or
//! refutes) injectivity. All arithmetic is exact over the rationals;
//! every certificate is backed by Sturm-sequence root analysis rather
//! than floating point.

pub mod atomic;
pub mod bipoly;
pub mod decompose;
pub mod inject;
pub mod interval;
pub mod inverse;
pub mod mapalg;
pub mod rational;
pub mod realroots;
pub mod unipoly;

pub use atomic::{AtomicMap, Chain};
pub use bipoly::BiPoly;
pub use interval::Interval;
pub use mapalg::{classify, Classification, PlanarMap};
pub use rational::Rat;
pub use unipoly::UniPoly;
