//! Exact polygonal set calculus in the closed upper half-plane.

mod clip;
mod hausdorff;
pub mod hull;
mod polygon;
mod random;
pub mod svg;

pub use clip::clip_to_halfplane;
pub use hausdorff::{
    align_horizontally, hausdorff, hausdorff_boundaries, hausdorff_mod_horizontal,
    HorizontalAlignment,
};
pub use polygon::{
    diameter, signed_area, EdgeKind, EnergyBreakdown, HalfPlanePolygon, PolygonJson,
    DEFAULT_SNAP_TOLERANCE,
};
pub(crate) use polygon::vertex_edges_ok;
pub use random::random_polygon;

use crate::anisotropy::Gauge;
use crate::scalar::Scalar;

/// Capillary energy `P_Phi(E, Omega) - beta * H^1(substrate ∩ dE)`.
pub fn capillary_energy<T: Scalar, G: Gauge<T> + ?Sized>(
    phi: &G,
    beta: T,
    polygon: &HalfPlanePolygon<T>,
) -> EnergyBreakdown<T> {
    polygon.capillary_energy(phi, beta)
}

/// Relative perimeter `P_g(E, Omega)`: interior edges only.
pub fn relative_perimeter<T: Scalar, G: Gauge<T> + ?Sized>(g: &G, polygon: &HalfPlanePolygon<T>) -> T {
    polygon.relative_perimeter(g)
}
