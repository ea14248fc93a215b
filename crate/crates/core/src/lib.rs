//! Certified obstructions to writing a cube-free integer as a sum of two
//! rational cubes in towers and cyclic extensions of Q, built on the curve
//! family E_n: x^3 + y^3 = n z^3 (Weierstrass form y^2 = x^3 - 432 n^2).

pub mod arithmetic;
pub mod curve_en;
pub mod curve_fp;
pub mod error;
pub mod lseries;
pub mod obstruction;
pub mod tate;

pub use curve_en::{build_curve, rational_point_search, CubeSumWitness, CurveEn};
pub use curve_fp::{CurveFp, Point, TraceConfig};
pub use error::{Error, Result};
