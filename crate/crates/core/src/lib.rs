//! Exact computation in p-adic dynamical systems.
//!
//! Arithmetic in O_K = W(F_q)[π] at fixed precision, truncated power series
//! in one and two variables, Lubin logarithms and formal group laws, Newton
//! polygons, and checks of the dynamical statements attached to a commuting
//! pair `(f, u)`.

mod certify;
pub mod dynamics;
pub mod error;
mod fp_poly;
pub mod json;
pub mod kscalar;
pub mod lubin;
pub mod newton;
pub mod ring;
pub mod series;
pub mod series2;
mod series3;

pub use dynamics::{DynPair, HypothesisReport, Verdict};
pub use error::{Error, Result};
pub use kscalar::KScalar;
pub use newton::NewtonPolygon;
pub use ring::{FqElem, OKScalar, Ring, RingConfig, RingConfigSpec, ValuationResult};
pub use series::{PowerSeries, TruncSeries1};
pub use series2::TruncSeries2;
