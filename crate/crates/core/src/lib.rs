//! Anisotropic capillarity in the upper half-plane.
//!
//! The crate builds Wulff shapes `{Phi° <= 1}` and their truncations by the
//! substrate (Winterbottom shapes), evaluates the capillary energy
//! `P_Phi(E, Omega) - beta * |substrate ∩ dE|` exactly on polygons, absorbs
//! the adhesion term into a tilted anisotropy, and minimises the energy over
//! polygonal competitors.
//!
//! Everything is generic over the scalar type (`f32`, `f64`); the aliases
//! below fix `f64`, which all documented tolerances assume.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod anisotropy;
pub mod error;
pub mod geometry;
pub mod minimize;
pub mod oracles;
pub mod scalar;
pub mod vec2;
pub mod winterbottom;

pub use anisotropy::{AnisotropyKind, AnisotropySpec, EtaPolicy, Gauge, Sign};
pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Anisotropy = anisotropy::Anisotropy<f64>;
pub type Anisotropy32 = anisotropy::Anisotropy<f32>;
pub type Point = vec2::Vec2<f64>;
pub type Polygon = geometry::HalfPlanePolygon<f64>;
pub type Polygon32 = geometry::HalfPlanePolygon<f32>;
pub type Energy = geometry::EnergyBreakdown<f64>;
pub type PsiBeta = winterbottom::PsiBeta<f64>;
pub type WinterbottomShape = winterbottom::WinterbottomShape<f64>;
pub type MinimizeConfig = minimize::MinimizeConfig<f64>;
pub type MinimizeReport = minimize::MinimizeReport<f64>;
pub type ValidationReport = anisotropy::ValidationReport<f64>;
