//! Subdifferentials at nonzero directions and the selection of the vertical
//! subgradients `eta+ in dPhi(e_n)`, `eta- in dPhi(-e_n)`.

use serde::{Deserialize, Serialize};

use super::{Anisotropy, Family, Gauge};
use crate::error::{Error, Result};
use crate::scalar::{dot, lit, Scalar};

/// Orientation of the vertical axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value<T: Scalar>(self) -> T {
        match self {
            Sign::Plus => T::one(),
            Sign::Minus => -T::one(),
        }
    }

    /// `Plus` for `beta >= 0`, `Minus` otherwise.
    pub fn of_beta<T: Scalar>(beta: T) -> Self {
        if beta >= T::zero() {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// How to pick one element of a subdifferential that is not a singleton.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[serde(bound = "T: Scalar")]
pub enum EtaPolicy<T> {
    /// Average of the extreme points.
    #[default]
    Barycenter,
    /// Lexicographically smallest extreme point.
    MinLex,
    /// Lexicographically largest extreme point.
    MaxLex,
    /// A caller-supplied vector, checked before use.
    Explicit(Vec<T>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Subdifferential<T> {
    Singleton(Vec<T>),
    Segment(Vec<T>, Vec<T>),
    Polytope(Vec<Vec<T>>),
}

/// `dPhi(theta)` for some `theta != 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubdiffSet<T> {
    pub representation: Subdifferential<T>,
    pub base_direction: Vec<T>,
}

fn lex_cmp<T: Scalar>(a: &[T], b: &[T]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

impl<T: Scalar> SubdiffSet<T> {
    pub fn extreme_points(&self) -> Vec<&[T]> {
        match &self.representation {
            Subdifferential::Singleton(v) => vec![v],
            Subdifferential::Segment(a, b) => vec![a, b],
            Subdifferential::Polytope(vs) => vs.iter().map(Vec::as_slice).collect(),
        }
    }

    pub fn is_singleton(&self) -> bool {
        matches!(self.representation, Subdifferential::Singleton(_))
    }

    pub fn barycenter(&self) -> Vec<T> {
        let pts = self.extreme_points();
        let k = T::from_usize(pts.len()).unwrap();
        let n = pts[0].len();
        (0..n)
            .map(|i| pts.iter().map(|p| p[i]).sum::<T>() / k)
            .collect()
    }

    pub fn min_lex(&self) -> Vec<T> {
        self.extreme_points()
            .into_iter()
            .min_by(|a, b| lex_cmp(a, b))
            .unwrap()
            .to_vec()
    }

    pub fn max_lex(&self) -> Vec<T> {
        self.extreme_points()
            .into_iter()
            .max_by(|a, b| lex_cmp(a, b))
            .unwrap()
            .to_vec()
    }
}

impl<T: Scalar> Anisotropy<T> {
    /// Subdifferential `dPhi(theta)` for `theta != 0`.
    ///
    /// Polytopes: convex hull of the vertices active at `theta` (relative
    /// tolerance 1e-9). Smooth families: the gradient.
    pub fn subdifferential(&self, theta: &[T]) -> Result<SubdiffSet<T>> {
        self.try_eval(theta)?;
        if theta.iter().all(|&t| t == T::zero()) {
            return Err(Error::InvalidArgument(
                "subdifferential at the origin is the whole Wulff shape".into(),
            ));
        }
        let representation = match &self.family {
            Family::SupportPolytope { vertices, .. } => {
                let value = self.eval(theta);
                let tol = lit::<T>(1e-9) * value.abs();
                let mut active: Vec<Vec<T>> = vertices
                    .iter()
                    .filter(|v| dot(v, theta) >= value - tol)
                    .cloned()
                    .collect();
                active.sort_by(|a, b| lex_cmp(a, b));
                active.dedup();
                reduce_face(active)
            }
            _ => Subdifferential::Singleton(self.gradient(theta).expect("smooth family")),
        };
        Ok(SubdiffSet {
            representation,
            base_direction: theta.to_vec(),
        })
    }

    /// True if `<eta, theta> = Phi(theta)` and `Phi°(eta) = 1` within `tol`.
    pub fn is_subgradient(&self, theta: &[T], eta: &[T], tol: T) -> bool {
        if eta.len() != self.dim || eta.iter().any(|x| !x.is_finite()) {
            return false;
        }
        let scale = T::one().max(self.eval(theta).abs());
        (dot(eta, theta) - self.eval(theta)).abs() <= tol * scale
            && (self.dual_eval(eta) - T::one()).abs() <= tol
    }

    /// Select `eta^sign in dPhi(sign e_n)` according to `policy`.
    pub fn select_eta(&self, sign: Sign, policy: &EtaPolicy<T>) -> Result<Vec<T>> {
        let mut theta = vec![T::zero(); self.dim];
        theta[self.dim - 1] = sign.value();
        let set = self.subdifferential(&theta)?;
        let eta = match policy {
            EtaPolicy::Barycenter => set.barycenter(),
            EtaPolicy::MinLex => set.min_lex(),
            EtaPolicy::MaxLex => set.max_lex(),
            EtaPolicy::Explicit(v) => {
                if !self.is_subgradient(&theta, v, lit(1e-8)) {
                    return Err(Error::InvalidEta(format!(
                        "{v:?} does not satisfy <eta, {sign:?} e_n> = Phi({sign:?} e_n) and Phi°(eta) = 1"
                    )));
                }
                v.clone()
            }
        };
        Ok(eta)
    }
}

/// Collapse an active vertex set to the smallest representation.
fn reduce_face<T: Scalar>(active: Vec<Vec<T>>) -> Subdifferential<T> {
    if active.len() == 1 {
        return Subdifferential::Singleton(active.into_iter().next().unwrap());
    }
    let base = &active[0];
    let diffs: Vec<Vec<T>> = active
        .iter()
        .map(|v| v.iter().zip(base).map(|(&a, &b)| a - b).collect())
        .collect();
    let dir = diffs
        .iter()
        .max_by(|a, b| dot(a, a).partial_cmp(&dot(b, b)).unwrap())
        .unwrap()
        .clone();
    let dd = dot(&dir, &dir);
    let collinear = diffs.iter().all(|d| {
        let t = dot(d, &dir) / dd;
        let r: T = d.iter().zip(&dir).map(|(&a, &b)| (a - t * b) * (a - t * b)).sum();
        r <= lit::<T>(1e-20) * dd
    });
    if collinear {
        let proj = |v: &Vec<T>| dot(v, &dir);
        let lo = active
            .iter()
            .min_by(|a, b| proj(a).partial_cmp(&proj(b)).unwrap())
            .unwrap()
            .clone();
        let hi = active
            .iter()
            .max_by(|a, b| proj(a).partial_cmp(&proj(b)).unwrap())
            .unwrap()
            .clone();
        let (a, b) = if lex_cmp(&lo, &hi).is_le() { (lo, hi) } else { (hi, lo) };
        Subdifferential::Segment(a, b)
    } else {
        Subdifferential::Polytope(active)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l1() -> Anisotropy<f64> {
        Anisotropy::<f64>::support_polytope(vec![
            vec![1.0, 1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
        ])
        .unwrap()
    }

    #[test]
    fn subdifferential_examples() {
        let e = Anisotropy::<f64>::euclidean(2).unwrap();
        assert_eq!(
            e.subdifferential(&[0.0, 1.0]).unwrap().representation,
            Subdifferential::Singleton(vec![0.0, 1.0])
        );
        assert_eq!(
            l1().subdifferential(&[0.0, 1.0]).unwrap().representation,
            Subdifferential::Segment(vec![-1.0, 1.0], vec![1.0, 1.0])
        );
        assert_eq!(
            l1().subdifferential(&[0.3, 1.0]).unwrap().representation,
            Subdifferential::Singleton(vec![1.0, 1.0])
        );
        let s = Anisotropy::<f64>::shifted_euclidean(vec![0.0, 0.25]).unwrap();
        assert_eq!(
            s.subdifferential(&[0.0, -1.0]).unwrap().representation,
            Subdifferential::Singleton(vec![0.0, -0.75])
        );
        assert!(matches!(
            s.subdifferential(&[0.0, 0.0]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn collinear_face_points_collapse_to_segment() {
        let phi = Anisotropy::<f64>::support_polytope(vec![
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
            vec![1.0, -1.0],
        ])
        .unwrap();
        assert_eq!(
            phi.subdifferential(&[0.0, 2.0]).unwrap().representation,
            Subdifferential::Segment(vec![-1.0, 1.0], vec![1.0, 1.0])
        );
    }

    #[test]
    fn octahedral_face_is_a_polytope() {
        let mut verts = Vec::new();
        for sx in [-1.0, 1.0] {
            for sy in [-1.0, 1.0] {
                for sz in [-1.0, 1.0] {
                    verts.push(vec![sx, sy, sz]);
                }
            }
        }
        let cube = Anisotropy::<f64>::support_polytope(verts).unwrap();
        let set = cube.subdifferential(&[0.0, 0.0, 1.0]).unwrap();
        assert!(matches!(set.representation, Subdifferential::Polytope(ref v) if v.len() == 4));
        assert_eq!(set.barycenter(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn select_eta_examples() {
        let e = Anisotropy::<f64>::euclidean(2).unwrap();
        assert_eq!(
            e.select_eta(Sign::Plus, &EtaPolicy::Barycenter).unwrap(),
            vec![0.0, 1.0]
        );
        assert_eq!(
            l1().select_eta(Sign::Plus, &EtaPolicy::Barycenter).unwrap(),
            vec![0.0, 1.0]
        );
        assert_eq!(
            l1().select_eta(Sign::Plus, &EtaPolicy::MinLex).unwrap(),
            vec![-1.0, 1.0]
        );
        assert_eq!(
            l1().select_eta(Sign::Plus, &EtaPolicy::MaxLex).unwrap(),
            vec![1.0, 1.0]
        );
        let s = Anisotropy::<f64>::shifted_euclidean(vec![0.0, 0.25]).unwrap();
        for p in [EtaPolicy::Barycenter, EtaPolicy::MinLex, EtaPolicy::MaxLex] {
            assert_eq!(s.select_eta(Sign::Minus, &p).unwrap(), vec![0.0, -0.75]);
        }
    }

    #[test]
    fn explicit_eta_is_verified() {
        let ok = l1().select_eta(Sign::Plus, &EtaPolicy::Explicit(vec![0.5, 1.0]));
        assert_eq!(ok.unwrap(), vec![0.5, 1.0]);
        // right height but outside the Wulff shape
        assert!(matches!(
            l1().select_eta(Sign::Plus, &EtaPolicy::Explicit(vec![1.5, 1.0])),
            Err(Error::InvalidEta(_))
        ));
        // inside the Wulff shape but not on the supporting line
        assert!(matches!(
            l1().select_eta(Sign::Plus, &EtaPolicy::Explicit(vec![0.0, 0.9])),
            Err(Error::InvalidEta(_))
        ));
    }
}
