//! Initial polygons for the restarts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::geometry::{random_polygon, HalfPlanePolygon};
use crate::scalar::{lit, Scalar};
use crate::vec2::Vec2;

const CORNER_TURN: f64 = 0.05;
const NOISE: f64 = 0.05;

/// Resample a closed polyline to `n` points, keeping the vertices listed in
/// `corners` and spreading the rest by arclength between them.
pub(crate) fn resample_with_corners<T: Scalar>(vs: &[Vec2<T>], corners: &[usize], n: usize) -> Vec<Vec2<T>> {
    let m = vs.len();
    let k = corners.len();
    if k >= n {
        return corners.iter().map(|&c| vs[c]).collect();
    }
    let path_len = |from: usize, to: usize| -> T {
        let mut len = T::zero();
        let mut j = from;
        while j != to {
            len += vs[j].dist(vs[(j + 1) % m]);
            j = (j + 1) % m;
        }
        len
    };
    let lens: Vec<T> = (0..k).map(|j| path_len(corners[j], corners[(j + 1) % k])).collect();
    let total: T = lens.iter().copied().sum();
    let extra = n - k;
    let shares: Vec<f64> = lens
        .iter()
        .map(|&l| (l / total).to_f64().unwrap() * extra as f64)
        .collect();
    let mut counts: Vec<usize> = shares.iter().map(|s| s.floor() as usize).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        let fa = shares[a] - shares[a].floor();
        let fb = shares[b] - shares[b].floor();
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });
    let mut left = extra - counts.iter().sum::<usize>();
    for &j in order.iter().cycle() {
        if left == 0 {
            break;
        }
        counts[j] += 1;
        left -= 1;
    }

    let mut out = Vec::with_capacity(n);
    for j in 0..k {
        let start = corners[j];
        out.push(vs[start]);
        let c = counts[j];
        if c == 0 {
            continue;
        }
        let spacing = lens[j] / T::from_usize(c + 1).unwrap();
        let mut seg = start;
        let mut walked = T::zero();
        for q in 1..=c {
            let target = spacing * T::from_usize(q).unwrap();
            loop {
                let (a, b) = (vs[seg], vs[(seg + 1) % m]);
                let l = a.dist(b);
                if walked + l >= target || (seg + 1) % m == corners[(j + 1) % k] {
                    let t = if l > T::zero() { ((target - walked) / l).min(T::one()) } else { T::zero() };
                    let mut p = a + (b - a).scale(t);
                    if a.y == T::zero() && b.y == T::zero() {
                        p.y = T::zero();
                    }
                    out.push(p);
                    break;
                }
                walked += l;
                seg = (seg + 1) % m;
            }
        }
    }
    out
}

/// Vertices that must survive resampling: sharp turns and substrate points.
fn corners<T: Scalar>(vs: &[Vec2<T>]) -> Vec<usize> {
    let m = vs.len();
    (0..m)
        .filter(|&i| {
            let d1 = vs[i] - vs[(i + m - 1) % m];
            let d2 = vs[(i + 1) % m] - vs[i];
            vs[i].y == T::zero() || d1.cross(d2).atan2(d1.dot(d2)).abs() > lit(CORNER_TURN)
        })
        .collect()
}

fn contact_midpoint<T: Scalar>(p: &HalfPlanePolygon<T>) -> Vec2<T> {
    p.contact_point().unwrap_or_else(|| Vec2::new(p.centroid().x, T::zero()))
}

/// The reference shape resampled to `n` vertices with multiplicative radial
/// noise about its contact point; substrate vertices stay put.
pub(crate) fn perturbed_reference<T: Scalar>(
    reference: &HalfPlanePolygon<T>,
    n: usize,
    seed: u64,
) -> Result<HalfPlanePolygon<T>> {
    let vs = reference.vertices();
    let base = resample_with_corners(vs, &corners(vs), n);
    let c = contact_midpoint(reference);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise: Vec<f64> = base.iter().map(|_| rng.random_range(-NOISE..NOISE)).collect();
    let mut amplitude = 1.0;
    for _ in 0..8 {
        let pts = base
            .iter()
            .zip(&noise)
            .map(|(&v, &e)| {
                if v.y == T::zero() {
                    v
                } else {
                    c + (v - c).scale(lit::<T>(1.0 + amplitude * e))
                }
            })
            .collect();
        if let Ok(p) = HalfPlanePolygon::new(pts) {
            return p.scaled_to_area(reference.area());
        }
        amplitude *= 0.5;
    }
    HalfPlanePolygon::new(base)
}

/// Rectangle on the substrate with the reference bounding-box aspect.
pub(crate) fn rectangle<T: Scalar>(reference: &HalfPlanePolygon<T>, n: usize) -> Result<HalfPlanePolygon<T>> {
    let vs = reference.vertices();
    let (mut lo, mut hi) = (vs[0].x, vs[0].x);
    let mut top = T::zero();
    for v in vs {
        lo = lo.min(v.x);
        hi = hi.max(v.x);
        top = top.max(v.y);
    }
    let k = (reference.area() / ((hi - lo) * top)).sqrt();
    let (w, h) = ((hi - lo) * k, top * k);
    let x0 = contact_midpoint(reference).x - w * lit(0.5);
    let box_ = [
        Vec2::new(x0, T::zero()),
        Vec2::new(x0 + w, T::zero()),
        Vec2::new(x0 + w, h),
        Vec2::new(x0, h),
    ];
    HalfPlanePolygon::new(resample_with_corners(&box_, &[0, 1, 2, 3], n))?.scaled_to_area(reference.area())
}

/// Inscribed upper half-disk polygon of matching area.
pub(crate) fn half_disk<T: Scalar>(reference: &HalfPlanePolygon<T>, n: usize) -> Result<HalfPlanePolygon<T>> {
    let cx = contact_midpoint(reference).x;
    let last = T::from_usize(n - 1).unwrap();
    let pts = (0..n)
        .map(|q| {
            if q == 0 {
                Vec2::new(cx + T::one(), T::zero())
            } else if q == n - 1 {
                Vec2::new(cx - T::one(), T::zero())
            } else {
                let t = T::PI() * T::from_usize(q).unwrap() / last;
                Vec2::new(cx + t.cos(), t.sin())
            }
        })
        .collect();
    HalfPlanePolygon::new(pts)?.scaled_to_area(reference.area())
}

/// Start polygon for restart `index`, with area equal to the reference.
pub(crate) fn start<T: Scalar>(
    reference: &HalfPlanePolygon<T>,
    index: usize,
    n: usize,
    seed: u64,
) -> Result<HalfPlanePolygon<T>> {
    match index {
        0 => perturbed_reference(reference, n, seed),
        1 => rectangle(reference, n),
        2 => half_disk(reference, n),
        _ => random_polygon(seed, n, reference.area(), true),
    }
}
