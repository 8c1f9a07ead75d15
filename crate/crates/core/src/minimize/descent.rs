//! Per-vertex coordinate descent on the scale-free ratio `C / sqrt(area)`.

use crate::anisotropy::Gauge;
use crate::geometry::{clip_to_halfplane, diameter, vertex_edges_ok, HalfPlanePolygon, DEFAULT_SNAP_TOLERANCE};
use crate::scalar::{lit, Scalar};
use crate::vec2::Vec2;

pub(crate) struct Settings<T> {
    pub step_init: Option<T>,
    pub step_shrink: T,
    pub max_iterations: usize,
    /// Restore this area after every accepted move.
    pub volume: Option<T>,
}

pub(crate) struct Outcome<T> {
    pub vertices: Vec<Vec2<T>>,
    pub ratio: T,
    pub sweeps: usize,
}

struct State<'a, T, G: ?Sized> {
    phi: &'a G,
    beta: T,
    vs: Vec<Vec2<T>>,
    /// `cost[i]` belongs to the edge `(i, i + 1)`.
    cost: Vec<T>,
    energy: T,
    twice_area: T,
}

fn edge_cost<T: Scalar, G: Gauge<T> + ?Sized>(phi: &G, beta: T, a: Vec2<T>, b: Vec2<T>) -> T {
    if a.y == T::zero() && b.y == T::zero() {
        -beta * (b.x - a.x).abs()
    } else {
        phi.eval2((b - a).perp_cw())
    }
}

fn ratio<T: Scalar>(energy: T, twice_area: T) -> T {
    energy / (twice_area * lit(0.5)).sqrt()
}

impl<'a, T: Scalar, G: Gauge<T> + ?Sized> State<'a, T, G> {
    fn new(phi: &'a G, beta: T, vs: Vec<Vec2<T>>) -> Self {
        let mut s = Self {
            phi,
            beta,
            vs,
            cost: Vec::new(),
            energy: T::zero(),
            twice_area: T::zero(),
        };
        s.refresh();
        s
    }

    fn refresh(&mut self) {
        let n = self.vs.len();
        self.cost = (0..n)
            .map(|i| edge_cost(self.phi, self.beta, self.vs[i], self.vs[(i + 1) % n]))
            .collect();
        self.energy = self.cost.iter().copied().sum();
        self.twice_area = (0..n).map(|i| self.vs[i].cross(self.vs[(i + 1) % n])).sum();
    }

    fn value(&self) -> T {
        ratio(self.energy, self.twice_area)
    }

    /// Energy and twice the area after moving vertex `i` to `p`.
    fn trial(&self, i: usize, p: Vec2<T>) -> (T, T, T, T) {
        let n = self.vs.len();
        let prev = (i + n - 1) % n;
        let next = (i + 1) % n;
        let (a, v, b) = (self.vs[prev], self.vs[i], self.vs[next]);
        let c1 = edge_cost(self.phi, self.beta, a, p);
        let c2 = edge_cost(self.phi, self.beta, p, b);
        let energy = self.energy - self.cost[prev] - self.cost[i] + c1 + c2;
        let twice_area = self.twice_area - a.cross(v) - v.cross(b) + a.cross(p) + p.cross(b);
        (energy, twice_area, c1, c2)
    }

    /// Rescale to `volume` about the contact point (or the centroid when
    /// floating), clipping if the scaling leaves the half-plane.
    fn restore(&mut self, volume: T) -> bool {
        let mut poly = HalfPlanePolygon::from_trusted(self.vs.clone(), lit(DEFAULT_SNAP_TOLERANCE));
        for _ in 0..4 {
            let area = poly.area();
            if ((area - volume) / volume).abs() <= lit(1e-10) {
                self.vs = poly.vertices().to_vec();
                self.refresh();
                return true;
            }
            let centre = poly.contact_point().unwrap_or_else(|| poly.centroid());
            let r = (volume / area).sqrt();
            let scaled = match poly.scaled_about(centre, r) {
                Ok(p) => p,
                Err(_) => return false,
            };
            poly = if scaled.vertices().iter().any(|v| v.y < T::zero()) {
                match clip_to_halfplane(scaled.vertices()) {
                    Ok(p) => p,
                    Err(_) => return false,
                }
            } else {
                scaled
            };
        }
        false
    }
}

pub(crate) fn descend<T: Scalar, G: Gauge<T> + ?Sized>(
    phi: &G,
    beta: T,
    start: Vec<Vec2<T>>,
    settings: &Settings<T>,
) -> Outcome<T> {
    let snap: T = lit(DEFAULT_SNAP_TOLERANCE);
    let mut st = State::new(phi, beta, start);
    if let Some(v) = settings.volume {
        st.restore(v);
    }
    let mut step = settings.step_init.unwrap_or_else(|| lit::<T>(0.05) * diameter(&st.vs));
    let mut sweeps = 0;
    let mut candidates: Vec<(T, Vec2<T>)> = Vec::with_capacity(5);

    while sweeps < settings.max_iterations {
        if step < lit::<T>(1e-6) * diameter(&st.vs) {
            break;
        }
        sweeps += 1;
        let mut improved = false;
        let mut i = 0;
        while i < st.vs.len() {
            let v = st.vs[i];
            let current = st.value();
            let slack = lit::<T>(1e-14) * current.abs();
            candidates.clear();
            let down = v.y - step;
            let moves = [
                Vec2::new(v.x + step, v.y),
                Vec2::new(v.x - step, v.y),
                Vec2::new(v.x, v.y + step),
                Vec2::new(v.x, if down < snap { T::zero() } else { down }),
            ];
            for p in moves {
                if p == v {
                    continue;
                }
                let (e, a2, _, _) = st.trial(i, p);
                if a2 <= T::zero() {
                    continue;
                }
                let r = ratio(e, a2);
                if r < current - slack {
                    candidates.push((r, p));
                }
            }
            candidates.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            for &(_, p) in candidates.iter() {
                let n = st.vs.len();
                let (e, a2, c1, c2) = st.trial(i, p);
                let backup = st.vs[i];
                st.vs[i] = p;
                if !vertex_edges_ok(&st.vs, i) {
                    st.vs[i] = backup;
                    continue;
                }
                st.cost[(i + n - 1) % n] = c1;
                st.cost[i] = c2;
                st.energy = e;
                st.twice_area = a2;
                if let Some(vol) = settings.volume {
                    let saved = st.vs.clone();
                    if !st.restore(vol) {
                        st.vs = saved;
                        st.vs[i] = backup;
                        st.refresh();
                        continue;
                    }
                }
                improved = true;
                break;
            }
            i += 1;
        }
        st.refresh();
        if !improved {
            step *= settings.step_shrink;
        }
    }
    Outcome {
        ratio: st.value(),
        vertices: st.vs,
        sweeps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anisotropy::Anisotropy;

    #[test]
    fn square_relaxes_towards_half_disk() {
        let phi = Anisotropy::<f64>::euclidean(2).unwrap();
        let vs: Vec<Vec2<f64>> = [(0., 0.), (1., 0.), (1., 1.), (0., 1.)]
            .iter()
            .map(|&(x, y)| Vec2::new(x, y))
            .collect();
        let start = ratio(3.0, 2.0);
        let out = descend(
            &phi,
            0.0,
            vs,
            &Settings {
                step_init: None,
                step_shrink: 0.7,
                max_iterations: 200,
                volume: None,
            },
        );
        assert!(out.ratio < start);
        assert!(out.ratio > (2.0 * std::f64::consts::PI).sqrt());
        assert!(HalfPlanePolygon::new(out.vertices).is_ok());
    }

    #[test]
    fn fixed_volume_keeps_area() {
        let phi = Anisotropy::<f64>::euclidean(2).unwrap();
        let vs: Vec<Vec2<f64>> = [(0., 0.), (2., 0.), (2., 0.5), (0., 0.5)]
            .iter()
            .map(|&(x, y)| Vec2::new(x, y))
            .collect();
        let out = descend(
            &phi,
            0.3,
            vs,
            &Settings {
                step_init: None,
                step_shrink: 0.7,
                max_iterations: 50,
                volume: Some(1.0),
            },
        );
        let p = HalfPlanePolygon::new(out.vertices).unwrap();
        assert!((p.area() - 1.0).abs() < 1e-10);
    }
}
