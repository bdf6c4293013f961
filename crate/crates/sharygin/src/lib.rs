//! Inversive and Laguerre geometry around Sharygin points: circle pencils and
//! their limiting points, oriented cycles in the Minkowski model, hyperbolic
//! inflation, pencils of conics, and numerical checkers for the theorems
//! built on them.

pub mod error;
pub mod geom;
pub mod numeric;
pub mod pencil;
pub mod props;
pub mod cycle;
pub mod hyperbolic;
pub mod conics;
pub mod theorems;

pub use error::{Error, Result};
pub use geom::{pt, Circle, GObject, Line, Point, Tangency, Tol};
