use super::polygon::{signed_area, HalfPlanePolygon, DEFAULT_SNAP_TOLERANCE};
use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};
use crate::vec2::Vec2;

/// Intersect a simple polygon with the closed upper half-plane
/// (Sutherland-Hodgman against `x2 >= 0`).
///
/// Crossing points are placed exactly on `x2 = 0`. Either orientation is
/// accepted; the result is counterclockwise. Non-convex inputs whose
/// intersection with the half-plane is disconnected are rejected by the
/// simplicity check of [`HalfPlanePolygon`].
pub fn clip_to_halfplane<T: Scalar>(polygon: &[Vec2<T>]) -> Result<HalfPlanePolygon<T>> {
    if polygon.len() < 3 || polygon.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidPolygon(
            "clip input needs at least 3 finite vertices".into(),
        ));
    }
    let snap: T = lit(DEFAULT_SNAP_TOLERANCE);
    let mut input: Vec<Vec2<T>> = polygon
        .iter()
        .map(|&v| if v.y.abs() < snap { Vec2::new(v.x, T::zero()) } else { v })
        .collect();
    if signed_area(&input) < T::zero() {
        input.reverse();
    }

    let n = input.len();
    let mut out: Vec<Vec2<T>> = Vec::with_capacity(n + 2);
    for i in 0..n {
        let a = input[i];
        let b = input[(i + 1) % n];
        if a.y >= T::zero() {
            out.push(a);
        }
        if (a.y > T::zero() && b.y < T::zero()) || (a.y < T::zero() && b.y > T::zero()) {
            let t = a.y / (a.y - b.y);
            out.push(Vec2::new(a.x + (b.x - a.x) * t, T::zero()));
        }
    }
    out.dedup();
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    // drop vertices in the middle of a straight run along the substrate
    let mut i = 0;
    while out.len() >= 3 && i < out.len() {
        let m = out.len();
        let (p, c, q) = (out[(i + m - 1) % m], out[i], out[(i + 1) % m]);
        if p.y == T::zero() && c.y == T::zero() && q.y == T::zero() {
            out.remove(i);
        } else {
            i += 1;
        }
    }
    // canonical start: lowest, then leftmost vertex
    if let Some(start) = (0..out.len()).min_by(|&i, &j| {
        (out[i].y, out[i].x)
            .partial_cmp(&(out[j].y, out[j].x))
            .unwrap()
    }) {
        out.rotate_left(start);
    }
    if out.len() < 3 || signed_area(&out) < lit(1e-12) {
        return Err(Error::EmptyClip(
            "intersection with the upper half-plane is empty or degenerate".into(),
        ));
    }
    HalfPlanePolygon::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64) -> Vec2<f64> {
        Vec2::new(x, y)
    }

    #[test]
    fn clips_shifted_square() {
        let sq = [v(-1., -1.5), v(1., -1.5), v(1., 0.5), v(-1., 0.5)];
        let p = clip_to_halfplane(&sq).unwrap();
        assert_eq!(p.vertices(), &[v(-1., 0.), v(1., 0.), v(1., 0.5), v(-1., 0.5)]);
    }

    #[test]
    fn triangle_below_is_empty() {
        let tri = [v(0., -1.), v(1., -2.), v(-1., -2.)];
        assert!(matches!(clip_to_halfplane(&tri), Err(Error::EmptyClip(_))));
    }

    #[test]
    fn disk_cap_area() {
        let n = 2048;
        let disk: Vec<Vec2<f64>> = (0..n)
            .map(|k| Vec2::from_angle(std::f64::consts::TAU * k as f64 / n as f64) - v(0., 0.5))
            .collect();
        let p = clip_to_halfplane(&disk).unwrap();
        let beta: f64 = 0.5;
        let exact = beta.acos() - beta * (1.0 - beta * beta).sqrt();
        assert!((p.area() - exact).abs() < 1e-5);
        assert!((exact - (std::f64::consts::PI / 3.0 - 3f64.sqrt() / 4.0)).abs() < 1e-15);
    }

    #[test]
    fn clockwise_input_is_reoriented() {
        let sq = [v(-1., 0.5), v(1., 0.5), v(1., -1.5), v(-1., -1.5)];
        let p = clip_to_halfplane(&sq).unwrap();
        assert_eq!(p.area(), 1.0);
    }

    #[test]
    fn clip_is_idempotent() {
        let sq = [v(-1., -1.5), v(1., -1.5), v(1., 0.5), v(-1., 0.5)];
        let p = clip_to_halfplane(&sq).unwrap();
        let q = clip_to_halfplane(p.vertices()).unwrap();
        assert_eq!(p.area(), q.area());
    }
}
