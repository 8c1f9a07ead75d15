//! Sample-based cross-checks that only use gauge evaluations.

use super::{Anisotropy, Gauge};
use crate::scalar::{lit, Scalar};
use crate::vec2::Vec2;

/// The dual anisotropy `Phi°` viewed as a gauge in its own right.
#[derive(Clone, Copy, Debug)]
pub struct Dual<'a, T>(pub &'a Anisotropy<T>);

impl<T: Scalar> Gauge<T> for Dual<'_, T> {
    fn dim(&self) -> usize {
        self.0.dim()
    }
    fn eval(&self, x: &[T]) -> T {
        self.0.dual_eval(x)
    }
    fn is_polyhedral(&self) -> bool {
        self.0.is_polyhedral()
    }
}

const DUAL_SAMPLES: usize = 1024;

/// Planar dual of an arbitrary gauge, `max_u <x, u> / g(u)` over unit `u`.
///
/// A coarse scan over equispaced angles locates the maximiser; golden-section
/// search on the bracketing cell then refines it far below the 1e-8
/// relative accuracy this routine promises. The objective is unimodal on
/// the circle because it is a linear functional restricted to the boundary
/// of the convex unit ball of `g`.
pub fn sampled_dual<T: Scalar, G: Gauge<T> + ?Sized>(g: &G, x: Vec2<T>) -> T {
    assert_eq!(g.dim(), 2, "sampled dual is planar");
    if x.x == T::zero() && x.y == T::zero() {
        return T::zero();
    }
    let f = |t: T| {
        let u = Vec2::from_angle(t);
        x.dot(u) / g.eval2(u)
    };
    let step = T::TAU() / T::from_usize(DUAL_SAMPLES).unwrap();
    let (mut best_k, mut best) = (0usize, T::neg_infinity());
    for k in 0..DUAL_SAMPLES {
        let v = f(step * T::from_usize(k).unwrap());
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let centre = step * T::from_usize(best_k).unwrap();
    let (mut a, mut b) = (centre - step, centre + step);
    let invphi: T = lit(0.618_033_988_749_894_8);
    let mut c = b - (b - a) * invphi;
    let mut d = a + (b - a) * invphi;
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > lit(1e-13) {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * invphi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * invphi;
            fd = f(d);
        }
    }
    best.max(fc).max(fd).max(f((a + b) * lit(0.5)))
}

/// Central-difference gradient with step `h`.
pub fn numerical_gradient<T: Scalar, G: Gauge<T> + ?Sized>(g: &G, x: &[T], h: T) -> Vec<T> {
    let mut xp = x.to_vec();
    (0..x.len())
        .map(|i| {
            xp[i] = x[i] + h;
            let fp = g.eval(&xp);
            xp[i] = x[i] - h;
            let fm = g.eval(&xp);
            xp[i] = x[i];
            (fp - fm) / (h + h)
        })
        .collect()
}
