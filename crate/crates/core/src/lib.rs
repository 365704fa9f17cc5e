//! Plane-curve evolutes and involutes, with numerical regularity analysis.
//!
//! The pipeline is: build a [`curve::CurveSpec`], reparametrize it into an
//! [`curve::ArcCurve`], then take evolutes and involutes ([`evolute`]),
//! classify the critical points of the radius of curvature ([`regularity`]),
//! and run the geometric checks ([`checks`]). [`report`] holds the CLI
//! front end and its emitters.

pub mod checks;
pub mod curve;
pub mod error;
pub mod evolute;
pub mod geom;
pub mod interp;
pub mod quadrature;
pub mod regularity;
pub mod report;

pub use error::{Error, Result};
pub use geom::Vec2;
