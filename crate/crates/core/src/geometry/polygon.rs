use serde::{Deserialize, Serialize};

use crate::anisotropy::Gauge;
use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::vec2::Vec2;

pub const DEFAULT_SNAP_TOLERANCE: f64 = 1e-9;

/// Where an edge lies relative to the substrate `{x2 = 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    /// Inside the open half-plane: contributes to the relative perimeter.
    Interior,
    /// On the substrate: contributes to the wetted length.
    Wetted,
}

/// A simple counterclockwise polygon in the closed upper half-plane.
///
/// Edges realize the boundary of the set; the outward normal of the edge
/// `a -> b` is `(b - a)` rotated by -90 degrees. An edge is wetted iff both
/// endpoints lie exactly on `x2 = 0` after snapping.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfPlanePolygon<T> {
    vertices: Vec<Vec2<T>>,
    snap_tolerance: T,
}

/// JSON form: `{"vertices": [[x, y], ...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonJson {
    pub vertices: Vec<[f64; 2]>,
}

/// Energy of a set in the half-plane, split into its two contributions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EnergyBreakdown<T> {
    /// Anisotropic perimeter inside the open half-plane.
    pub relative_perimeter: T,
    /// Length of the boundary lying on the substrate.
    pub wetted_length: T,
    pub beta: T,
    /// `relative_perimeter - beta * wetted_length`.
    pub total: T,
    pub area: T,
}

impl<T: Scalar> HalfPlanePolygon<T> {
    pub fn new(vertices: Vec<Vec2<T>>) -> Result<Self> {
        Self::with_snap_tolerance(vertices, lit(DEFAULT_SNAP_TOLERANCE))
    }

    pub fn with_snap_tolerance(mut vertices: Vec<Vec2<T>>, snap_tolerance: T) -> Result<Self> {
        if !(snap_tolerance >= T::zero()) {
            return Err(Error::InvalidArgument("snap tolerance must be >= 0".into()));
        }
        if vertices.len() < 3 {
            return Err(Error::InvalidPolygon(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        for v in vertices.iter_mut() {
            if !v.is_finite() {
                return Err(Error::InvalidPolygon("non-finite vertex".into()));
            }
            if v.y.abs() < snap_tolerance {
                v.y = T::zero();
            }
            if v.y < T::zero() {
                return Err(Error::InvalidPolygon(format!(
                    "vertex ({}, {}) lies below the substrate",
                    v.x, v.y
                )));
            }
        }
        if signed_area(&vertices) <= T::zero() {
            return Err(Error::InvalidPolygon(
                "vertices must be counterclockwise with positive area".into(),
            ));
        }
        if let Some((i, j)) = first_crossing(&vertices) {
            return Err(Error::InvalidPolygon(format!(
                "polygon is not simple: edges {i} and {j} intersect"
            )));
        }
        Ok(Self {
            vertices,
            snap_tolerance,
        })
    }

    /// Trusted constructor for callers that maintain the invariants.
    pub(crate) fn from_trusted(vertices: Vec<Vec2<T>>, snap_tolerance: T) -> Self {
        Self {
            vertices,
            snap_tolerance,
        }
    }

    pub fn from_json(json: &PolygonJson) -> Result<Self> {
        Self::new(
            json.vertices
                .iter()
                .map(|&[x, y]| Vec2::new(lit(x), lit(y)))
                .collect(),
        )
    }

    pub fn to_json(&self) -> PolygonJson {
        PolygonJson {
            vertices: self
                .vertices
                .iter()
                .map(|v| [v.x.to_f64().unwrap(), v.y.to_f64().unwrap()])
                .collect(),
        }
    }

    #[inline]
    pub fn vertices(&self) -> &[Vec2<T>] {
        &self.vertices
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn snap_tolerance(&self) -> T {
        self.snap_tolerance
    }

    /// Edges as `(start, end)` pairs in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (Vec2<T>, Vec2<T>)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Shoelace area (positive by orientation).
    pub fn area(&self) -> T {
        signed_area(&self.vertices)
    }

    pub fn classify_edges(&self) -> Vec<EdgeKind> {
        self.edges().map(|(a, b)| edge_kind(a, b)).collect()
    }

    pub fn touches_substrate(&self) -> bool {
        self.vertices.iter().any(|v| v.y == T::zero())
    }

    pub fn wetted_length(&self) -> T {
        self.edges()
            .filter(|&(a, b)| edge_kind(a, b) == EdgeKind::Wetted)
            .map(|(a, b)| (b.x - a.x).abs())
            .sum()
    }

    /// Anisotropic perimeter inside the open half-plane, `sum |e| g(nu_e)`
    /// over interior edges, evaluated as `g(|e| nu_e)` by homogeneity.
    pub fn relative_perimeter<G: Gauge<T> + ?Sized>(&self, g: &G) -> T {
        self.edges()
            .filter(|&(a, b)| edge_kind(a, b) == EdgeKind::Interior)
            .map(|(a, b)| g.eval2((b - a).perp_cw()))
            .sum()
    }

    pub fn capillary_energy<G: Gauge<T> + ?Sized>(&self, g: &G, beta: T) -> EnergyBreakdown<T> {
        let relative_perimeter = self.relative_perimeter(g);
        let wetted_length = self.wetted_length();
        EnergyBreakdown {
            relative_perimeter,
            wetted_length,
            beta,
            total: relative_perimeter - beta * wetted_length,
            area: self.area(),
        }
    }

    /// Area centroid.
    pub fn centroid(&self) -> Vec2<T> {
        let mut cx = T::zero();
        let mut cy = T::zero();
        let mut a2 = T::zero();
        for (p, q) in self.edges() {
            let w = p.cross(q);
            a2 += w;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        let k = a2 * lit(3.0);
        Vec2::new(cx / k, cy / k)
    }

    /// Largest distance between two vertices.
    pub fn diameter(&self) -> T {
        diameter(&self.vertices)
    }

    /// Midpoint of the leftmost wetted edge, if any.
    pub fn contact_point(&self) -> Option<Vec2<T>> {
        self.edges()
            .filter(|&(a, b)| edge_kind(a, b) == EdgeKind::Wetted)
            .map(|(a, b)| Vec2::new((a.x + b.x) * lit(0.5), T::zero()))
            .min_by(|p, q| p.x.partial_cmp(&q.x).unwrap())
            .or_else(|| {
                self.vertices
                    .iter()
                    .copied()
                    .filter(|v| v.y == T::zero())
                    .min_by(|p, q| p.x.partial_cmp(&q.x).unwrap())
            })
    }

    /// `centre + r (v - centre)` for every vertex. A centre on the substrate
    /// keeps the polygon in the closed half-plane and preserves contact.
    pub fn scaled_about(&self, centre: Vec2<T>, r: T) -> Result<Self> {
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::InvalidArgument(format!("scale must be positive, got {r}")));
        }
        if centre.y < T::zero() {
            return Err(Error::InvalidArgument("scaling centre below the substrate".into()));
        }
        let vs = self
            .vertices
            .iter()
            .map(|&v| {
                let y = if v.y == T::zero() && centre.y == T::zero() {
                    T::zero()
                } else {
                    centre.y + (v.y - centre.y) * r
                };
                Vec2::new(centre.x + (v.x - centre.x) * r, y)
            })
            .collect();
        Ok(Self::from_trusted(vs, self.snap_tolerance))
    }

    /// Uniform scaling to the given area, about the contact point when the
    /// polygon touches the substrate and about the centroid otherwise.
    pub fn scaled_to_area(&self, target: T) -> Result<Self> {
        if !(target > T::zero()) {
            return Err(Error::InvalidArgument("target area must be positive".into()));
        }
        let centre = self.contact_point().unwrap_or_else(|| self.centroid());
        let mut out = self.scaled_about(centre, (target / self.area()).sqrt())?;
        // one correction pass absorbs rounding in the first scale factor
        let a = out.area();
        if ((a - target) / target).abs() > lit(1e-14) {
            out = out.scaled_about(centre, (target / a).sqrt())?;
        }
        Ok(out)
    }

    pub fn translated_horizontally(&self, t: T) -> Self {
        Self::from_trusted(
            self.vertices.iter().map(|&v| Vec2::new(v.x + t, v.y)).collect(),
            self.snap_tolerance,
        )
    }

    /// Point-in-polygon by crossing number; boundary points are unspecified.
    pub fn contains(&self, p: Vec2<T>) -> bool {
        let mut inside = false;
        for (a, b) in self.edges() {
            if (a.y > p.y) != (b.y > p.y) {
                let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

impl<T: Scalar> Serialize for HalfPlanePolygon<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[inline]
pub(crate) fn edge_kind<T: Scalar>(a: Vec2<T>, b: Vec2<T>) -> EdgeKind {
    if a.y == T::zero() && b.y == T::zero() {
        EdgeKind::Wetted
    } else {
        EdgeKind::Interior
    }
}

/// Shoelace area taken about the first vertex, so far-away shapes do not
/// lose digits to cancellation.
pub fn signed_area<T: Scalar>(vs: &[Vec2<T>]) -> T {
    let n = vs.len();
    if n < 3 {
        return T::zero();
    }
    let o = vs[0];
    let twice: T = (1..n - 1).map(|i| (vs[i] - o).cross(vs[i + 1] - o)).sum();
    twice * lit(0.5)
}

pub fn diameter<T: Scalar>(vs: &[Vec2<T>]) -> T {
    let hull = super::hull::convex_hull(vs);
    let mut d = T::zero();
    for i in 0..hull.len() {
        for j in (i + 1)..hull.len() {
            d = d.max(hull[i].dist(hull[j]));
        }
    }
    d
}

#[inline]
fn orient<T: Scalar>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>) -> T {
    (b - a).cross(c - a)
}

#[inline]
fn on_segment<T: Scalar>(a: Vec2<T>, b: Vec2<T>, p: Vec2<T>) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `[a, b]` and `[c, d]` share at least one point.
#[inline]
pub(crate) fn segments_touch<T: Scalar>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>, d: Vec2<T>) -> bool {
    if a.x.max(b.x) < c.x.min(d.x)
        || c.x.max(d.x) < a.x.min(b.x)
        || a.y.max(b.y) < c.y.min(d.y)
        || c.y.max(d.y) < a.y.min(b.y)
    {
        return false;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    let z = T::zero();
    if ((o1 > z && o2 < z) || (o1 < z && o2 > z)) && ((o3 > z && o4 < z) || (o3 < z && o4 > z)) {
        return true;
    }
    (o1 == z && on_segment(a, b, c))
        || (o2 == z && on_segment(a, b, d))
        || (o3 == z && on_segment(c, d, a))
        || (o4 == z && on_segment(c, d, b))
}

/// Two consecutive edges `a -> b -> c` fold back onto each other.
#[inline]
pub(crate) fn folds_back<T: Scalar>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>) -> bool {
    let u = b - a;
    let v = c - b;
    u.cross(v) == T::zero() && u.dot(v) < T::zero()
}

/// Checks the edges incident to vertex `i` against the rest of the polygon.
pub(crate) fn vertex_edges_ok<T: Scalar>(vs: &[Vec2<T>], i: usize) -> bool {
    let n = vs.len();
    let prev = (i + n - 1) % n;
    let next = (i + 1) % n;
    let p = vs[i];
    if p == vs[prev] || p == vs[next] {
        return false;
    }
    if folds_back(vs[(prev + n - 1) % n], vs[prev], p)
        || folds_back(vs[prev], p, vs[next])
        || folds_back(p, vs[next], vs[(next + 1) % n])
    {
        return false;
    }
    // edge (prev, i) against all edges not sharing an endpoint, likewise (i, next)
    for j in 0..n {
        let k = (j + 1) % n;
        let (c, d) = (vs[j], vs[k]);
        if j != prev && k != prev && j != i && k != i && segments_touch(vs[prev], p, c, d) {
            return false;
        }
        if j != i && k != i && j != next && k != next && segments_touch(p, vs[next], c, d) {
            return false;
        }
    }
    true
}

/// First pair of edges violating simplicity, if any.
pub(crate) fn first_crossing<T: Scalar>(vs: &[Vec2<T>]) -> Option<(usize, usize)> {
    let n = vs.len();
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        if a == b {
            return Some((i, i));
        }
        if folds_back(a, b, vs[(i + 2) % n]) {
            return Some((i, (i + 1) % n));
        }
        for j in (i + 2)..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            if segments_touch(a, b, vs[j], vs[(j + 1) % n]) {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anisotropy::Anisotropy;

    fn poly(pts: &[(f64, f64)]) -> HalfPlanePolygon<f64> {
        HalfPlanePolygon::new(pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect()).unwrap()
    }

    fn unit_square() -> HalfPlanePolygon<f64> {
        poly(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)])
    }

    fn l1() -> Anisotropy<f64> {
        Anisotropy::support_polytope(vec![
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
        ])
        .unwrap()
    }

    #[test]
    fn areas() {
        assert_eq!(unit_square().area(), 1.0);
        assert_eq!(poly(&[(-1., 0.), (1., 0.), (1., 0.5), (-1., 0.5)]).area(), 1.0);
    }

    #[test]
    fn half_disk_area() {
        // 2048 samples over the full circle; the lower half clips to the chord
        let n = 2048;
        let mut vs: Vec<Vec2<f64>> = (0..=n / 2)
            .map(|k| Vec2::from_angle(std::f64::consts::TAU * k as f64 / n as f64))
            .collect();
        vs[n / 2].y = 0.0;
        let p = HalfPlanePolygon::new(vs).unwrap();
        assert!((p.area() - std::f64::consts::FRAC_PI_2).abs() < 1e-5);
    }

    #[test]
    fn edge_classification() {
        assert_eq!(
            unit_square().classify_edges(),
            vec![
                EdgeKind::Wetted,
                EdgeKind::Interior,
                EdgeKind::Interior,
                EdgeKind::Interior
            ]
        );
        let tri = poly(&[(0., 1.), (1., 2.), (-1., 2.)]);
        assert!(tri.classify_edges().iter().all(|&k| k == EdgeKind::Interior));
        assert_eq!(tri.wetted_length(), 0.0);
        let rect = poly(&[(-1., 0.), (1., 0.), (1., 0.5), (-1., 0.5)]);
        assert_eq!(rect.wetted_length(), 2.0);
    }

    #[test]
    fn energy_examples() {
        let e = Anisotropy::<f64>::euclidean(2).unwrap();
        for beta in [-0.7, 0.0, 0.3] {
            let b = unit_square().capillary_energy(&e, beta);
            assert_eq!(b.relative_perimeter, 3.0);
            assert_eq!(b.wetted_length, 1.0);
            assert_eq!(b.total, 3.0 - beta);
        }
        let rect = poly(&[(-1., 0.), (1., 0.), (1., 0.5), (-1., 0.5)]);
        let b = rect.capillary_energy(&l1(), 0.5);
        assert_eq!((b.relative_perimeter, b.wetted_length, b.total), (3.0, 2.0, 2.0));
    }

    #[test]
    fn snapping_makes_contact() {
        let p = poly(&[(0., 1e-12), (1., -1e-11), (1., 1.), (0., 1.)]);
        assert_eq!(p.classify_edges()[0], EdgeKind::Wetted);
    }

    #[test]
    fn invalid_polygons() {
        let mk = |pts: &[(f64, f64)]| {
            HalfPlanePolygon::new(pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect())
        };
        assert!(mk(&[(0., 0.), (1., 0.)]).is_err());
        assert!(mk(&[(0., 0.), (0., 1.), (1., 1.), (1., 0.)]).is_err()); // clockwise
        assert!(mk(&[(0., 0.), (1., 1.), (1., 0.), (0., 1.)]).is_err()); // bow tie
        assert!(mk(&[(0., -0.5), (1., 0.), (1., 1.)]).is_err()); // below substrate
        assert!(mk(&[(0., 0.), (2., 0.), (1., 0.), (1., 1.)]).is_err()); // fold back
    }

    #[test]
    fn outward_normals_point_outside() {
        let p = poly(&[(0., 0.), (2., 0.), (2., 1.), (1., 0.4), (0., 1.)]);
        for (a, b) in p.edges() {
            let nu = (b - a).perp_cw().scale(1.0 / (b - a).norm());
            let m = (a + b).scale(0.5);
            assert!(!p.contains(m + nu.scale(1e-6)));
            assert!(p.contains(m - nu.scale(1e-6)));
        }
    }

    #[test]
    fn scaling_to_area_keeps_contact() {
        let p = poly(&[(0., 0.), (2., 0.), (2., 1.), (1., 0.4), (0., 1.)]);
        let q = p.scaled_to_area(7.0).unwrap();
        assert!((q.area() - 7.0).abs() < 1e-12 * 7.0);
        assert_eq!(q.classify_edges(), p.classify_edges());
    }
}
