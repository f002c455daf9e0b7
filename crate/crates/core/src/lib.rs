//! Painlevé-Kuratowski convergence of sampled closed sets, graphical
//! convergence of Clarke subdifferentials, and planar Delaunay diagrams with
//! exact predicates.
//!
//! The core is generic over the scalar type; the aliases below fix `f64`.

pub mod delaunay;
pub mod error;
pub mod geom;
pub mod harness;
pub mod multifun;
pub mod scalar;
pub mod sets;
pub mod subdiff;

pub use error::{Error, Result};

pub type Point = geom::Point<f64>;
pub type ConvexPolytope = geom::ConvexPolytope<f64>;
pub type GridWindow = sets::GridWindow<f64>;
pub type SampledSet = sets::SampledSet<f64>;
pub type PLFunction1D = subdiff::PLFunction1D<f64>;
pub type MultifunctionGraph = multifun::MultifunctionGraph<f64>;
pub type DelaunayDiagram = delaunay::DelaunayDiagram<f64>;
