//! Anisotropies: positively one-homogeneous convex gauges on R^n, bounded
//! above and below by multiples of the Euclidean norm.
//!
//! Four closed-form families are supported. Each has an exact dual and an
//! exact subdifferential, so the sampled routines in [`sampled`] only ever
//! serve as cross-checks.

mod sampled;
mod simplex;
pub mod spec;
mod subdiff;
mod validate;

pub use sampled::{numerical_gradient, sampled_dual, Dual};
pub use spec::{AnisotropyKind, AnisotropySpec};
pub use subdiff::{EtaPolicy, Sign, SubdiffSet, Subdifferential};
pub use validate::{validate, ValidationReport};

use crate::error::{Error, Result};
use crate::geometry::hull;
use crate::scalar::{dot, lit, norm, Scalar};
use crate::vec2::Vec2;

use simplex::LpOutcome;

/// Anything that evaluates like an anisotropy.
///
/// Implemented by [`Anisotropy`] and by the absorbed anisotropy
/// [`crate::winterbottom::PsiBeta`], so perimeters, energies, validation and
/// Wulff constructions accept either.
pub trait Gauge<T: Scalar>: Sync {
    fn dim(&self) -> usize;

    /// Value at `x`; `x.len()` must equal [`Gauge::dim`].
    fn eval(&self, x: &[T]) -> T;

    #[inline]
    fn eval2(&self, v: Vec2<T>) -> T {
        self.eval(&[v.x, v.y])
    }

    /// True when the gauge is piecewise linear (crystalline).
    fn is_polyhedral(&self) -> bool {
        false
    }
}

impl<T: Scalar, G: Gauge<T> + ?Sized> Gauge<T> for &G {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, x: &[T]) -> T {
        (**self).eval(x)
    }
    fn eval2(&self, v: Vec2<T>) -> T {
        (**self).eval2(v)
    }
    fn is_polyhedral(&self) -> bool {
        (**self).is_polyhedral()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Family<T> {
    Euclidean,
    /// Support function of `conv(vertices)`; the polytope is the Wulff shape.
    SupportPolytope {
        vertices: Vec<Vec<T>>,
        /// Planar case only: extreme points and outward facets of the hull.
        hull: Vec<Vec2<T>>,
        facets: Vec<(Vec2<T>, T)>,
    },
    /// `sqrt(x^T A x)`; `inverse` is `A^{-1}`, both row-major.
    Quadratic { matrix: Vec<T>, inverse: Vec<T> },
    /// `|x| + <a, x>` with `|a| < 1`.
    ShiftedEuclidean { shift: Vec<T> },
}

/// A validated anisotropy in one of the closed-form families.
#[derive(Clone, Debug, PartialEq)]
pub struct Anisotropy<T> {
    dim: usize,
    family: Family<T>,
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be at least 2, got {dim}"
        )));
    }
    Ok(())
}

fn check_finite<T: Scalar>(xs: &[T], what: &str) -> Result<()> {
    if xs.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} has non-finite entries")))
    }
}

impl<T: Scalar> Anisotropy<T> {
    pub fn euclidean(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            dim,
            family: Family::Euclidean,
        })
    }

    /// Support function of the convex hull of `vertices`. The hull must
    /// contain the origin in its interior.
    pub fn support_polytope(vertices: Vec<Vec<T>>) -> Result<Self> {
        let dim = vertices.first().map_or(0, Vec::len);
        check_dim(dim)?;
        for v in &vertices {
            if v.len() != dim {
                return Err(Error::InvalidArgument(
                    "polytope vertices have mixed dimensions".into(),
                ));
            }
            check_finite(v, "polytope vertex")?;
        }
        if vertices.len() <= dim {
            return Err(Error::DegenerateAnisotropy(format!(
                "{} vertices cannot surround the origin in dimension {dim}",
                vertices.len()
            )));
        }
        let (hull, facets) = if dim == 2 {
            let pts: Vec<Vec2<T>> = vertices.iter().map(|v| Vec2::new(v[0], v[1])).collect();
            let hull = hull::convex_hull(&pts);
            if hull.len() < 3 {
                return Err(Error::DegenerateAnisotropy(
                    "polytope vertices are collinear".into(),
                ));
            }
            let facets = hull::facets(&hull);
            let scale = hull.iter().fold(T::zero(), |m, p| m.max(p.norm()));
            if facets.iter().any(|&(_, off)| off <= lit::<T>(1e-12) * scale) {
                return Err(Error::DegenerateAnisotropy(
                    "convex hull of the vertices does not contain the origin in its interior".into(),
                ));
            }
            (hull, facets)
        } else {
            // origin interior <=> polar polytope bounded <=> bounded along every +-e_k
            for k in 0..dim {
                for s in [T::one(), -T::one()] {
                    let mut c = vec![T::zero(); dim];
                    c[k] = s;
                    if simplex::max_over_polar(&vertices, &c) == LpOutcome::Unbounded {
                        return Err(Error::DegenerateAnisotropy(
                            "convex hull of the vertices does not contain the origin in its interior"
                                .into(),
                        ));
                    }
                }
            }
            (Vec::new(), Vec::new())
        };
        Ok(Self {
            dim,
            family: Family::SupportPolytope {
                vertices,
                hull,
                facets,
            },
        })
    }

    /// Planar crystalline anisotropy given in facet form: outward facet
    /// normals `normals[i]` with surface tensions `tensions[i]`. The Wulff
    /// shape `{y : <n_i, y> <= tension_i}` is computed and stored in vertex
    /// form.
    pub fn from_surface_tensions(normals: &[Vec2<T>], tensions: &[T]) -> Result<Self> {
        let unit: Vec<Vec2<T>> = normals.iter().map(|n| n.scale(T::one() / n.norm())).collect();
        let poly = hull::intersect_halfplanes(&unit, tensions)?;
        Self::support_polytope(poly.into_iter().map(|p| vec![p.x, p.y]).collect())
    }

    /// `sqrt(x^T A x)` for a symmetric positive-definite `A` (rows).
    pub fn quadratic(matrix: Vec<Vec<T>>) -> Result<Self> {
        let dim = matrix.len();
        check_dim(dim)?;
        let mut flat = Vec::with_capacity(dim * dim);
        for row in &matrix {
            if row.len() != dim {
                return Err(Error::InvalidArgument("matrix must be square".into()));
            }
            check_finite(row, "matrix")?;
            flat.extend_from_slice(row);
        }
        let scale = flat.iter().fold(T::zero(), |m, a| m.max(a.abs()));
        for i in 0..dim {
            for j in 0..i {
                if (flat[i * dim + j] - flat[j * dim + i]).abs() > lit::<T>(1e-12) * scale {
                    return Err(Error::InvalidArgument("matrix must be symmetric".into()));
                }
            }
        }
        let inverse = spd_inverse(&flat, dim).ok_or_else(|| {
            Error::DegenerateAnisotropy("matrix is not positive definite".into())
        })?;
        Ok(Self {
            dim,
            family: Family::Quadratic {
                matrix: flat,
                inverse,
            },
        })
    }

    /// `|x| + <a, x>` with `|a| < 1`.
    pub fn shifted_euclidean(shift: Vec<T>) -> Result<Self> {
        let dim = shift.len();
        check_dim(dim)?;
        check_finite(&shift, "shift")?;
        if norm(&shift) >= T::one() {
            return Err(Error::DegenerateAnisotropy(
                "shift must satisfy |a| < 1".into(),
            ));
        }
        Ok(Self {
            dim,
            family: Family::ShiftedEuclidean { shift },
        })
    }

    pub fn kind(&self) -> AnisotropyKind {
        match self.family {
            Family::Euclidean => AnisotropyKind::Euclidean,
            Family::SupportPolytope { .. } => AnisotropyKind::SupportPolytope,
            Family::Quadratic { .. } => AnisotropyKind::Quadratic,
            Family::ShiftedEuclidean { .. } => AnisotropyKind::ShiftedEuclidean,
        }
    }

    /// Vertex list for support polytopes (as given).
    pub fn polytope_vertices(&self) -> Option<&[Vec<T>]> {
        match &self.family {
            Family::SupportPolytope { vertices, .. } => Some(vertices),
            _ => None,
        }
    }

    /// Extreme points of the planar Wulff polytope, counterclockwise.
    pub fn polytope_hull(&self) -> Option<&[Vec2<T>]> {
        match &self.family {
            Family::SupportPolytope { hull, .. } if self.dim == 2 => Some(hull),
            _ => None,
        }
    }

    pub fn matrix(&self) -> Option<&[T]> {
        match &self.family {
            Family::Quadratic { matrix, .. } => Some(matrix),
            _ => None,
        }
    }

    pub fn shift(&self) -> Option<&[T]> {
        match &self.family {
            Family::ShiftedEuclidean { shift } => Some(shift),
            _ => None,
        }
    }

    /// `Phi(x)` with argument checking.
    pub fn try_eval(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dim {
            return Err(Error::InvalidArgument(format!(
                "expected a {}-vector, got length {}",
                self.dim,
                x.len()
            )));
        }
        check_finite(x, "argument")?;
        Ok(self.eval(x))
    }

    /// `Phi(s e_n)` for the last coordinate axis `e_n`.
    pub fn along_vertical(&self, sign: Sign) -> T {
        let mut e = vec![T::zero(); self.dim];
        e[self.dim - 1] = sign.value();
        self.eval(&e)
    }

    /// Dual anisotropy `Phi°(x) = max { <x, y> : Phi(y) = 1 }`.
    pub fn dual_eval(&self, x: &[T]) -> T {
        match &self.family {
            Family::Euclidean => norm(x),
            Family::Quadratic { inverse, .. } => quad_form(inverse, x, self.dim).max(T::zero()).sqrt(),
            Family::ShiftedEuclidean { shift } => {
                // gauge of the unit ball centred at `shift`
                let ax = dot(shift, x);
                let xx = dot(x, x);
                let k = T::one() - dot(shift, shift);
                if xx == T::zero() {
                    return T::zero();
                }
                let disc = (ax * ax + k * xx).sqrt();
                // (disc - ax) / k, rewritten to avoid cancellation when ax > 0
                if ax <= T::zero() {
                    (disc - ax) / k
                } else {
                    xx / (disc + ax)
                }
            }
            Family::SupportPolytope {
                vertices, facets, ..
            } => {
                if self.dim == 2 {
                    let v = Vec2::new(x[0], x[1]);
                    facets
                        .iter()
                        .map(|&(n, off)| n.dot(v) / off)
                        .fold(T::zero(), T::max)
                } else {
                    match simplex::max_over_polar(vertices, x) {
                        LpOutcome::Optimal(v) => v.max(T::zero()),
                        LpOutcome::Unbounded => T::infinity(),
                    }
                }
            }
        }
    }

    /// Checked variant of [`Anisotropy::dual_eval`].
    pub fn try_dual_eval(&self, x: &[T]) -> Result<T> {
        self.try_eval(x)?;
        Ok(self.dual_eval(x))
    }

    /// Exact gradient for the smooth families at `x != 0`.
    pub(crate) fn gradient(&self, x: &[T]) -> Option<Vec<T>> {
        match &self.family {
            Family::Euclidean => {
                let r = norm(x);
                Some(x.iter().map(|&v| v / r).collect())
            }
            Family::Quadratic { matrix, .. } => {
                let r = quad_form(matrix, x, self.dim).sqrt();
                Some(
                    (0..self.dim)
                        .map(|i| dot(&matrix[i * self.dim..(i + 1) * self.dim], x) / r)
                        .collect(),
                )
            }
            Family::ShiftedEuclidean { shift } => {
                let r = norm(x);
                Some(x.iter().zip(shift).map(|(&v, &a)| v / r + a).collect())
            }
            Family::SupportPolytope { .. } => None,
        }
    }

    /// Extreme semi-axes of the quadratic Wulff ellipse (planar only):
    /// returns `(major, minor)`.
    pub(crate) fn quadratic_semi_axes(&self) -> Option<(T, T)> {
        match &self.family {
            Family::Quadratic { matrix, .. } if self.dim == 2 => {
                let (a, b, d) = (matrix[0], matrix[1], matrix[3]);
                let mean = (a + d) * lit(0.5);
                let rad = ((a - d) * (a - d) * lit(0.25) + b * b).sqrt();
                // Wulff shape {x^T A^{-1} x <= 1} has semi-axes sqrt(eig(A))
                Some(((mean + rad).sqrt(), (mean - rad).sqrt()))
            }
            _ => None,
        }
    }
}

impl<T: Scalar> Gauge<T> for Anisotropy<T> {
    #[inline]
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[T]) -> T {
        match &self.family {
            Family::Euclidean => norm(x),
            Family::SupportPolytope { vertices, hull, .. } => {
                if self.dim == 2 {
                    let v = Vec2::new(x[0], x[1]);
                    hull.iter().map(|h| h.dot(v)).fold(T::neg_infinity(), T::max)
                } else {
                    vertices
                        .iter()
                        .map(|w| dot(w, x))
                        .fold(T::neg_infinity(), T::max)
                }
            }
            Family::Quadratic { matrix, .. } => quad_form(matrix, x, self.dim).max(T::zero()).sqrt(),
            Family::ShiftedEuclidean { shift } => norm(x) + dot(shift, x),
        }
    }

    #[inline]
    fn eval2(&self, v: Vec2<T>) -> T {
        match &self.family {
            Family::Euclidean => v.norm(),
            Family::SupportPolytope { hull, .. } => {
                hull.iter().map(|h| h.dot(v)).fold(T::neg_infinity(), T::max)
            }
            Family::ShiftedEuclidean { shift } => v.norm() + shift[0] * v.x + shift[1] * v.y,
            Family::Quadratic { .. } => self.eval(&[v.x, v.y]),
        }
    }

    fn is_polyhedral(&self) -> bool {
        matches!(self.family, Family::SupportPolytope { .. })
    }
}

fn quad_form<T: Scalar>(m: &[T], x: &[T], n: usize) -> T {
    (0..n).map(|i| x[i] * dot(&m[i * n..(i + 1) * n], x)).sum()
}

/// Inverse of a symmetric positive-definite matrix via Cholesky; `None` if a
/// pivot is not strictly positive.
fn spd_inverse<T: Scalar>(a: &[T], n: usize) -> Option<Vec<T>> {
    let mut l = vec![T::zero(); n * n];
    for j in 0..n {
        let mut d = a[j * n + j];
        for k in 0..j {
            d -= l[j * n + k] * l[j * n + k];
        }
        if d.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) {
            return None;
        }
        let d = d.sqrt();
        l[j * n + j] = d;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / d;
        }
    }
    // solve L L^T X = I column by column
    let mut inv = vec![T::zero(); n * n];
    for col in 0..n {
        let mut y = vec![T::zero(); n];
        for i in 0..n {
            let mut s = if i == col { T::one() } else { T::zero() };
            for k in 0..i {
                s -= l[i * n + k] * y[k];
            }
            y[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in (i + 1)..n {
                s -= l[k * n + i] * inv[k * n + col];
            }
            inv[i * n + col] = s / l[i * n + i];
        }
    }
    Some(inv)
}
