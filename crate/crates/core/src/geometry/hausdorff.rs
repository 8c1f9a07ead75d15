//! Hausdorff distances between polygon boundaries, optionally modulo
//! horizontal translation.

use super::polygon::{diameter, HalfPlanePolygon};
use crate::scalar::{lit, Scalar};
use crate::vec2::Vec2;

/// Relative resampling spacing along boundaries.
const SPACING: f64 = 1e-3;
const PRESCAN_CELLS: usize = 64;

fn point_segment_dist2<T: Scalar>(p: Vec2<T>, a: Vec2<T>, b: Vec2<T>) -> T {
    let d = b - a;
    let len2 = d.dot(d);
    let t = if len2 > T::zero() {
        ((p - a).dot(d) / len2).max(T::zero()).min(T::one())
    } else {
        T::zero()
    };
    let q = a + d.scale(t);
    let r = p - q;
    r.dot(r)
}

/// Points along the closed polyline with spacing at most `spacing`.
fn resample<T: Scalar>(vs: &[Vec2<T>], spacing: T) -> Vec<Vec2<T>> {
    let n = vs.len();
    let mut out = Vec::with_capacity(n * 2);
    for i in 0..n {
        let (a, b) = (vs[i], vs[(i + 1) % n]);
        let len = a.dist(b);
        let pieces = (len / spacing).ceil().to_usize().unwrap_or(1).max(1);
        let step = T::one() / T::from_usize(pieces).unwrap();
        for k in 0..pieces {
            out.push(a + (b - a).scale(step * T::from_usize(k).unwrap()));
        }
    }
    out
}

/// `max_{p in samples} dist(p + shift, boundary of q)` with early exit.
/// Each scan starts at the previous sample's nearest segment.
fn directed<T: Scalar>(samples: &[Vec2<T>], shift: Vec2<T>, q: &[Vec2<T>]) -> T {
    let m = q.len();
    let mut worst = T::zero();
    let mut hint = 0;
    for &p in samples {
        let p = p + shift;
        let mut best = T::infinity();
        let start = hint;
        for k in 0..m {
            let j = (start + k) % m;
            let d = point_segment_dist2(p, q[j], q[(j + 1) % m]);
            if d < best {
                best = d;
                hint = j;
                if best <= worst {
                    break;
                }
            }
        }
        worst = worst.max(best);
    }
    worst.sqrt()
}

struct Prepared<T> {
    p: Vec<Vec2<T>>,
    q: Vec<Vec2<T>>,
    p_samples: Vec<Vec2<T>>,
    q_samples: Vec<Vec2<T>>,
}

impl<T: Scalar> Prepared<T> {
    fn new(p: &[Vec2<T>], q: &[Vec2<T>]) -> Self {
        let diam = diameter(p).max(diameter(q));
        let spacing = lit::<T>(SPACING) * diam.max(T::min_positive_value());
        Self {
            p: p.to_vec(),
            q: q.to_vec(),
            p_samples: resample(p, spacing),
            q_samples: resample(q, spacing),
        }
    }

    fn at(&self, t: T) -> T {
        let s = Vec2::new(t, T::zero());
        directed(&self.p_samples, s, &self.q)
            .max(directed(&self.q_samples, -s, &self.p))
    }
}

/// Symmetric Hausdorff distance between the boundaries of two closed
/// polylines, using boundary resampling at spacing `1e-3 * diameter`.
pub fn hausdorff_boundaries<T: Scalar>(p: &[Vec2<T>], q: &[Vec2<T>]) -> T {
    Prepared::new(p, q).at(T::zero())
}

pub fn hausdorff<T: Scalar>(p: &HalfPlanePolygon<T>, q: &HalfPlanePolygon<T>) -> T {
    hausdorff_boundaries(p.vertices(), q.vertices())
}

/// Result of aligning two shapes by a horizontal shift.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HorizontalAlignment<T> {
    pub distance: T,
    /// Shift `t` such that `p + t e1` best matches `q`.
    pub shift: T,
}

/// `min_t H(p + t e1, q)` over horizontal shifts `t`.
///
/// The search window has half-width `diam(p) + diam(q)` around the shift
/// that aligns the two centroids. A 64-cell prescan picks the best cell and
/// golden-section search refines the shift inside it.
pub fn align_horizontally<T: Scalar>(
    p: &HalfPlanePolygon<T>,
    q: &HalfPlanePolygon<T>,
) -> HorizontalAlignment<T> {
    let prep = Prepared::new(p.vertices(), q.vertices());
    let half_width = p.diameter() + q.diameter();
    let centre = q.centroid().x - p.centroid().x;
    let cells = T::from_usize(PRESCAN_CELLS).unwrap();
    let h = (half_width + half_width) / cells;

    let mut best_t = centre;
    let mut best = prep.at(centre);
    for k in 0..=PRESCAN_CELLS {
        let t = centre - half_width + h * T::from_usize(k).unwrap();
        let d = prep.at(t);
        if d < best {
            best = d;
            best_t = t;
        }
    }

    let (mut a, mut b) = (best_t - h, best_t + h);
    let invphi: T = lit(0.618_033_988_749_894_8);
    let mut c = b - (b - a) * invphi;
    let mut d = a + (b - a) * invphi;
    let (mut fc, mut fd) = (prep.at(c), prep.at(d));
    // the distance is V-shaped at an exact match, so refine well past 1e-6
    let tol = lit::<T>(1e-13) * (T::one() + half_width + centre.abs());
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * invphi;
            fc = prep.at(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * invphi;
            fd = prep.at(d);
        }
    }
    for (t, f) in [(c, fc), (d, fd)] {
        if f < best {
            best = f;
            best_t = t;
        }
    }
    HorizontalAlignment {
        distance: best,
        shift: best_t,
    }
}

/// Hausdorff distance modulo horizontal translation.
pub fn hausdorff_mod_horizontal<T: Scalar>(p: &HalfPlanePolygon<T>, q: &HalfPlanePolygon<T>) -> T {
    align_horizontally(p, q).distance
}
