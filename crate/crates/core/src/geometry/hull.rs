//! Planar convex hulls and half-plane intersections.

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::vec2::Vec2;

/// Counterclockwise convex hull (Andrew's monotone chain). Collinear and
/// duplicate points are dropped, so every returned vertex is extreme.
pub fn convex_hull<T: Scalar>(points: &[Vec2<T>]) -> Vec<Vec2<T>> {
    let mut pts: Vec<Vec2<T>> = points.to_vec();
    pts.sort_by(|a, b| {
        a.x.partial_cmp(&b.x)
            .unwrap()
            .then(a.y.partial_cmp(&b.y).unwrap())
    });
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let scale = pts
        .iter()
        .fold(T::zero(), |m, p| m.max(p.x.abs()).max(p.y.abs()));
    let eps = lit::<T>(1e-14) * scale * scale;
    let turn = |o: Vec2<T>, a: Vec2<T>, b: Vec2<T>| (a - o).cross(b - o);

    let mut hull: Vec<Vec2<T>> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && turn(hull[hull.len() - 2], hull[hull.len() - 1], p) <= eps {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

/// Outward facets `(normal, offset)` of a counterclockwise convex polygon, so
/// that the polygon is `{y : <normal, y> <= offset}` for every facet. Normals
/// are unit length.
pub fn facets<T: Scalar>(hull: &[Vec2<T>]) -> Vec<(Vec2<T>, T)> {
    let n = hull.len();
    (0..n)
        .map(|i| {
            let a = hull[i];
            let b = hull[(i + 1) % n];
            let d = b - a;
            let normal = d.perp_cw().scale(T::one() / d.norm());
            (normal, normal.dot(a))
        })
        .collect()
}

/// Intersection of the half-planes `{y : <n_i, y> <= h_i}`.
///
/// This is the classical Wulff construction from a finite list of facet
/// normals and surface tensions. Normals need not be unit length; the
/// result is bounded only if the normals positively span the plane.
pub fn intersect_halfplanes<T: Scalar>(normals: &[Vec2<T>], offsets: &[T]) -> Result<Vec<Vec2<T>>> {
    if normals.len() != offsets.len() || normals.len() < 3 {
        return Err(Error::InvalidArgument(
            "need at least three (normal, offset) pairs".into(),
        ));
    }
    let mut bound = T::zero();
    for (n, &h) in normals.iter().zip(offsets) {
        if !n.is_finite() || !h.is_finite() || n.norm() == T::zero() {
            return Err(Error::InvalidArgument("non-finite or zero facet".into()));
        }
        bound = bound.max(h.abs() / n.norm());
    }
    // start from a box far larger than any bounded answer
    let big = lit::<T>(1e6) * (bound + T::one());
    let mut poly = vec![
        Vec2::new(-big, -big),
        Vec2::new(big, -big),
        Vec2::new(big, big),
        Vec2::new(-big, big),
    ];
    for (&n, &h) in normals.iter().zip(offsets) {
        poly = clip_convex(&poly, n, h);
        if poly.len() < 3 {
            return Err(Error::DegenerateAnisotropy(
                "half-plane intersection is empty".into(),
            ));
        }
    }
    if poly
        .iter()
        .any(|p| p.x.abs() >= big * lit(0.5) || p.y.abs() >= big * lit(0.5))
    {
        return Err(Error::DegenerateAnisotropy(
            "half-plane intersection is unbounded".into(),
        ));
    }
    Ok(convex_hull(&poly))
}

fn clip_convex<T: Scalar>(poly: &[Vec2<T>], n: Vec2<T>, h: T) -> Vec<Vec2<T>> {
    let mut out = Vec::with_capacity(poly.len() + 1);
    let len = poly.len();
    for i in 0..len {
        let a = poly[i];
        let b = poly[(i + 1) % len];
        let fa = n.dot(a) - h;
        let fb = n.dot(b) - h;
        if fa <= T::zero() {
            out.push(a);
        }
        if (fa < T::zero() && fb > T::zero()) || (fa > T::zero() && fb < T::zero()) {
            let t = fa / (fa - fb);
            out.push(a + (b - a).scale(t));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let pts = [
            v(-1., -1.),
            v(0., -1.),
            v(1., -1.),
            v(1., 1.),
            v(0.2, 0.1),
            v(-1., 1.),
            v(1., 1.),
        ];
        let h = convex_hull(&pts);
        assert_eq!(h, vec![v(-1., -1.), v(1., -1.), v(1., 1.), v(-1., 1.)]);
    }

    #[test]
    fn facets_of_square() {
        let h = convex_hull(&[v(-1., -1.), v(1., -1.), v(1., 1.), v(-1., 1.)]);
        for (n, off) in facets(&h) {
            assert!((n.norm() - 1.0).abs() < 1e-15);
            assert!((off - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn wulff_construction_from_tensions() {
        // four facets with unit tension: the square [-1,1]^2
        let normals = [v(1., 0.), v(0., 1.), v(-1., 0.), v(0., -1.)];
        let sq = intersect_halfplanes(&normals, &[1., 1., 1., 1.]).unwrap();
        assert_eq!(sq.len(), 4);
        for p in &sq {
            assert!((p.x.abs() - 1.0).abs() < 1e-9 && (p.y.abs() - 1.0).abs() < 1e-9);
        }
        // a facet with large tension never touches the shape
        let normals = [v(1., 0.), v(0., 1.), v(-1., 0.), v(0., -1.), v(1., 1.)];
        let sq = intersect_halfplanes(&normals, &[1., 1., 1., 1., 5.]).unwrap();
        assert_eq!(sq.len(), 4);
        // unbounded
        let normals = [v(1., 0.), v(0., 1.), v(1., 1.)];
        assert!(intersect_halfplanes(&normals, &[1., 1., 1.]).is_err());
    }
}
