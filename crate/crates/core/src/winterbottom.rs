//! The absorbed anisotropy `Psi_beta`, Wulff and Winterbottom shapes, and
//! numerical residuals for the structural identities linking them.
//!
//! For `beta >= 0` and `eta+ in dPhi(e_n)`,
//!
//! ```text
//! Psi_beta(x) = Phi(x) - beta <x, eta+> / Phi(e_n),
//! ```
//!
//! and for `beta < 0` with `eta- in dPhi(-e_n)`,
//!
//! ```text
//! Psi_beta(x) = Phi(x) + beta <x, eta-> / Phi(-e_n).
//! ```
//!
//! In both cases `Psi_beta = Phi + <tilt, .>` and its Wulff shape is
//! `W^Phi + tilt`, a horizontal translate of `W^Phi - beta e_n`.

use serde::{Deserialize, Serialize};

use crate::anisotropy::{sampled_dual, validate, Anisotropy, EtaPolicy, Gauge, Sign, SubdiffSet, Subdifferential};
use crate::error::{Error, Result};
use crate::geometry::{self, hull, EnergyBreakdown, HalfPlanePolygon};
use crate::scalar::{dot, lit, norm, Scalar};
use crate::vec2::Vec2;

/// Directions sampled for the tight norm-equivalence constants of `Psi_beta`.
pub const CONSTANT_SAMPLES: usize = 4096;

/// Classification of the adhesion coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `beta <= -Phi(-e_n)`: the free Wulff shape detaches from the substrate.
    DetachedWulff,
    /// `-Phi(-e_n) < beta < Phi(e_n)`: the truncated Wulff shape minimises.
    Winterbottom,
    /// `beta = Phi(e_n)`: infimum 0, not attained.
    CriticalWetting,
    /// `beta > Phi(e_n)`: infimum minus infinity.
    UnboundedBelow,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::DetachedWulff => "detached_wulff",
            Self::Winterbottom => "winterbottom",
            Self::CriticalWetting => "critical_wetting",
            Self::UnboundedBelow => "unbounded_below",
        }
    }
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Exact classification (no tolerance); the endpoints fall on the closed
/// side, so the Winterbottom interval is open.
pub fn regime<T: Scalar>(phi: &Anisotropy<T>, beta: T) -> Regime {
    let up = phi.along_vertical(Sign::Plus);
    let down = phi.along_vertical(Sign::Minus);
    if beta <= -down {
        Regime::DetachedWulff
    } else if beta < up {
        Regime::Winterbottom
    } else if beta == up {
        Regime::CriticalWetting
    } else {
        Regime::UnboundedBelow
    }
}

pub(crate) fn require_regime<T: Scalar>(phi: &Anisotropy<T>, beta: T, allowed: &[Regime]) -> Result<Regime> {
    let r = regime(phi, beta);
    if allowed.contains(&r) {
        Ok(r)
    } else {
        Err(Error::Regime {
            beta: beta.to_f64().unwrap_or(f64::NAN),
            actual: r.as_str().into(),
            required: allowed
                .iter()
                .map(|r| r.as_str())
                .collect::<Vec<_>>()
                .join(" or "),
        })
    }
}

/// The absorbed anisotropy together with its certified constants.
#[derive(Clone, Debug, PartialEq)]
pub struct PsiBeta<T> {
    base: Anisotropy<T>,
    beta: T,
    sign: Sign,
    eta: Vec<T>,
    eta_plus: Vec<T>,
    eta_minus: Vec<T>,
    tilt: Vec<T>,
    tilt2: Vec2<T>,
    /// `c_Phi min{(Phi(e_n)-|beta|)/Phi(e_n), (Phi(-e_n)-|beta|)/Phi(-e_n)}`.
    pub nominal_c: T,
    /// `C_Phi + |beta| max{|eta+|, |eta-|} / Phi(e_n)`, both branches over `Phi(e_n)`.
    pub nominal_c_upper: T,
    /// `C_Phi + |beta| max{|eta+|/Phi(e_n), |eta-|/Phi(-e_n)}`.
    pub safe_c_upper: T,
    pub sampled_c: T,
    pub sampled_c_upper: T,
}

impl<T: Scalar> PsiBeta<T> {
    pub fn base(&self) -> &Anisotropy<T> {
        &self.base
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// The subgradient in use: `eta+` for `beta >= 0`, `eta-` otherwise.
    pub fn eta(&self) -> &[T] {
        &self.eta
    }

    pub fn eta_plus(&self) -> &[T] {
        &self.eta_plus
    }

    pub fn eta_minus(&self) -> &[T] {
        &self.eta_minus
    }

    /// `-+ beta eta± / Phi(±e_n)`; also the linear part of `Psi_beta`.
    pub fn shift_vector(&self) -> &[T] {
        &self.tilt
    }

    /// `dPsi_beta(theta) = dPhi(theta) + tilt`.
    pub fn subdifferential(&self, theta: &[T]) -> Result<SubdiffSet<T>> {
        let set = self.base.subdifferential(theta)?;
        let add = |v: &Vec<T>| v.iter().zip(&self.tilt).map(|(&a, &b)| a + b).collect::<Vec<T>>();
        let representation = match &set.representation {
            Subdifferential::Singleton(v) => Subdifferential::Singleton(add(v)),
            Subdifferential::Segment(a, b) => Subdifferential::Segment(add(a), add(b)),
            Subdifferential::Polytope(vs) => Subdifferential::Polytope(vs.iter().map(add).collect()),
        };
        Ok(SubdiffSet {
            representation,
            base_direction: set.base_direction,
        })
    }
}

impl<T: Scalar> Gauge<T> for PsiBeta<T> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    #[inline]
    fn eval(&self, x: &[T]) -> T {
        self.base.eval(x) + dot(&self.tilt, x)
    }

    #[inline]
    fn eval2(&self, v: Vec2<T>) -> T {
        self.base.eval2(v) + self.tilt2.dot(v)
    }

    fn is_polyhedral(&self) -> bool {
        self.base.is_polyhedral()
    }
}

fn eta_for<T: Scalar>(phi: &Anisotropy<T>, sign: Sign, wanted: Sign, policy: &EtaPolicy<T>) -> Result<Vec<T>> {
    // an explicit vector only applies to the subgradient actually in use
    match policy {
        EtaPolicy::Explicit(_) if sign != wanted => phi.select_eta(sign, &EtaPolicy::Barycenter),
        p => phi.select_eta(sign, p),
    }
}

/// Build `Psi_beta` for `beta` strictly inside `(-Phi(-e_n), Phi(e_n))`.
pub fn build_psi<T: Scalar>(phi: &Anisotropy<T>, beta: T, policy: &EtaPolicy<T>) -> Result<PsiBeta<T>> {
    require_regime(phi, beta, &[Regime::Winterbottom])?;
    let up = phi.along_vertical(Sign::Plus);
    let down = phi.along_vertical(Sign::Minus);
    let sign = Sign::of_beta(beta);
    let eta_plus = eta_for(phi, Sign::Plus, sign, policy)?;
    let eta_minus = eta_for(phi, Sign::Minus, sign, policy)?;
    let (eta, tilt): (Vec<T>, Vec<T>) = match sign {
        Sign::Plus => (
            eta_plus.clone(),
            eta_plus.iter().map(|&e| -(beta * e) / up).collect(),
        ),
        Sign::Minus => (
            eta_minus.clone(),
            eta_minus.iter().map(|&e| (beta * e) / down).collect(),
        ),
    };
    let tilt2 = if tilt.len() == 2 {
        Vec2::new(tilt[0], tilt[1])
    } else {
        Vec2::zero()
    };

    let base = validate(phi, CONSTANT_SAMPLES, 0)?;
    let ab = beta.abs();
    let (np, nm) = (norm(&eta_plus), norm(&eta_minus));
    let nominal_c = base.c_lower * ((up - ab) / up).min((down - ab) / down);
    let nominal_c_upper = base.c_upper + ab * np.max(nm) / up;
    let safe_c_upper = base.c_upper + ab * (np / up).max(nm / down);

    let mut psi = PsiBeta {
        base: phi.clone(),
        beta,
        sign,
        eta,
        eta_plus,
        eta_minus,
        tilt,
        tilt2,
        nominal_c,
        nominal_c_upper,
        safe_c_upper,
        sampled_c: T::zero(),
        sampled_c_upper: T::zero(),
    };
    let sampled = validate(&psi, CONSTANT_SAMPLES, 0)?;
    psi.sampled_c = sampled.c_lower;
    psi.sampled_c_upper = sampled.c_upper;
    Ok(psi)
}

/// A closed planar polygon approximating a Wulff shape.
#[derive(Clone, Debug, PartialEq)]
pub struct WulffPolygon<T> {
    /// Counterclockwise vertices.
    pub vertices: Vec<Vec2<T>>,
    /// Upper bound on the Hausdorff distance to the exact body.
    pub discretization_bound: T,
}

impl<T: Scalar> WulffPolygon<T> {
    pub fn translated(&self, by: Vec2<T>) -> Self {
        Self {
            vertices: self.vertices.iter().map(|&v| v + by).collect(),
            discretization_bound: self.discretization_bound,
        }
    }

    pub fn area(&self) -> T {
        geometry::signed_area(&self.vertices)
    }

    pub fn max_edge(&self) -> T {
        let n = self.vertices.len();
        (0..n)
            .map(|i| self.vertices[i].dist(self.vertices[(i + 1) % n]))
            .fold(T::zero(), T::max)
    }
}

/// Largest sagitta of a chord of length `h` on a convex curve whose
/// curvature never exceeds `kappa`.
fn sagitta_bound<T: Scalar>(kappa: T, h: T) -> T {
    let r = T::one() / kappa;
    let half = h * lit(0.5);
    if half >= r {
        return r;
    }
    // r - sqrt(r^2 - h^2/4), in cancellation-free form
    half * half / (r + (r * r - half * half).sqrt())
}

/// Maximal boundary curvature of the smooth planar Wulff shapes.
fn max_curvature<T: Scalar>(phi: &Anisotropy<T>) -> Option<T> {
    use crate::anisotropy::AnisotropyKind::*;
    match phi.kind() {
        Euclidean | ShiftedEuclidean => Some(T::one()),
        Quadratic => phi.quadratic_semi_axes().map(|(a, b)| a / (b * b)),
        SupportPolytope => None,
    }
}

fn require_planar<T: Scalar>(dim: usize, boundary_samples: usize) -> Result<()> {
    if dim != 2 {
        return Err(Error::InvalidArgument(format!(
            "shape construction is planar, got dimension {dim}"
        )));
    }
    if boundary_samples < 16 {
        return Err(Error::InvalidArgument(format!(
            "need at least 16 boundary samples, got {boundary_samples}"
        )));
    }
    let _ = T::zero();
    Ok(())
}

/// `W^Phi = {Phi° <= 1}`: exact for polytopes, otherwise inscribed with
/// vertices `u / Phi°(u)` at equispaced angles.
pub fn wulff<T: Scalar>(phi: &Anisotropy<T>, boundary_samples: usize) -> Result<WulffPolygon<T>> {
    require_planar::<T>(phi.dim(), boundary_samples)?;
    if let Some(h) = phi.polytope_hull() {
        return Ok(WulffPolygon {
            vertices: h.to_vec(),
            discretization_bound: T::zero(),
        });
    }
    let step = T::TAU() / T::from_usize(boundary_samples).unwrap();
    let vertices: Vec<Vec2<T>> = (0..boundary_samples)
        .map(|k| {
            let u = Vec2::from_angle(step * T::from_usize(k).unwrap());
            let mut y = u.scale(T::one() / phi.dual_eval(&[u.x, u.y]));
            // keep the angular grid points on the axes exactly on them
            if 2 * k == boundary_samples || k == 0 {
                y.y = T::zero();
            }
            if 4 * k == boundary_samples || 4 * k == 3 * boundary_samples {
                y.x = T::zero();
            }
            y
        })
        .collect();
    let mut w = WulffPolygon {
        vertices,
        discretization_bound: T::zero(),
    };
    w.discretization_bound = sagitta_bound(max_curvature(phi).unwrap(), w.max_edge());
    Ok(w)
}

/// Wulff shape of an arbitrary planar gauge from evaluations only.
///
/// Polyhedral gauges: on each linear cone the gauge equals `<g, u>` for a
/// vertex `g` of its Wulff shape; `g` is recovered from two neighbouring
/// directions by a 2x2 solve and kept only if a third direction between them
/// confirms linearity. The Wulff shape is the hull of the recovered vertices.
///
/// Smooth gauges: vertices `u / g°(u)` with the sampled dual.
pub fn wulff_of_gauge<T: Scalar, G: Gauge<T> + ?Sized>(g: &G, boundary_samples: usize) -> Result<Vec<Vec2<T>>> {
    require_planar::<T>(g.dim(), boundary_samples)?;
    if g.is_polyhedral() {
        let m = boundary_samples.max(4096);
        let step = T::TAU() / T::from_usize(m).unwrap();
        let dir = |k: usize| Vec2::from_angle(step * T::from_usize(k).unwrap());
        let mut found = Vec::new();
        for k in 0..m {
            let (u, w) = (dir(k), dir(k + 1));
            let (gu, gw) = (g.eval2(u), g.eval2(w));
            let det = u.cross(w);
            // solve <v,u> = gu, <v,w> = gw
            let v = Vec2::new((gu * w.y - gw * u.y) / det, (u.x * gw - w.x * gu) / det);
            let mid = (u + w).scale(lit(0.5));
            let scale = gu.abs().max(gw.abs()).max(T::one());
            if (g.eval2(mid) - v.dot(mid)).abs() <= lit::<T>(1e-12) * scale {
                found.push(v);
            }
        }
        let h = hull::convex_hull(&found);
        if h.len() < 3 {
            return Err(Error::DegenerateAnisotropy(
                "could not recover a polyhedral Wulff shape".into(),
            ));
        }
        // merge vertices recovered repeatedly from the same cone
        return Ok(merge_close(h, lit(1e-9)));
    }
    let step = T::TAU() / T::from_usize(boundary_samples).unwrap();
    Ok((0..boundary_samples)
        .map(|k| {
            let u = Vec2::from_angle(step * T::from_usize(k).unwrap());
            u.scale(T::one() / sampled_dual(g, u))
        })
        .collect())
}

fn merge_close<T: Scalar>(vs: Vec<Vec2<T>>, tol: T) -> Vec<Vec2<T>> {
    let mut out: Vec<Vec2<T>> = Vec::with_capacity(vs.len());
    for v in vs {
        if out.last().is_none_or(|&l| l.dist(v) > tol) {
            out.push(v);
        }
    }
    while out.len() > 1 && out[0].dist(*out.last().unwrap()) <= tol {
        out.pop();
    }
    out
}

/// The truncated translated Wulff shape `Omega ∩ (W^Phi - beta e_2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WinterbottomShape<T> {
    pub polygon: HalfPlanePolygon<T>,
    pub beta: T,
    pub boundary_samples: usize,
    pub energy: EnergyBreakdown<T>,
    pub discretization_bound: T,
    /// The untruncated, untranslated Wulff polygon it was cut from.
    pub wulff: WulffPolygon<T>,
}

pub fn winterbottom<T: Scalar>(phi: &Anisotropy<T>, beta: T, boundary_samples: usize) -> Result<WinterbottomShape<T>> {
    require_regime(phi, beta, &[Regime::Winterbottom])?;
    let w = wulff(phi, boundary_samples)?;
    let lowered = w.translated(Vec2::new(T::zero(), -beta));
    let polygon = geometry::clip_to_halfplane(&lowered.vertices)?;
    let energy = polygon.capillary_energy(phi, beta);
    Ok(WinterbottomShape {
        polygon,
        beta,
        boundary_samples,
        energy,
        discretization_bound: w.discretization_bound,
        wulff: w,
    })
}

/// `|C_{Phi,beta}(P) - P_{Psi_beta}(P, Omega)|`; zero up to rounding.
pub fn energy_identity_check<T: Scalar>(
    phi: &Anisotropy<T>,
    beta: T,
    polygon: &HalfPlanePolygon<T>,
    policy: &EtaPolicy<T>,
) -> Result<T> {
    let psi = build_psi(phi, beta, policy)?;
    Ok(energy_identity_residual(&psi, polygon))
}

/// Same as [`energy_identity_check`] for a prebuilt `Psi_beta`.
pub fn energy_identity_residual<T: Scalar>(psi: &PsiBeta<T>, polygon: &HalfPlanePolygon<T>) -> T {
    let capillary = polygon.capillary_energy(psi.base(), psi.beta()).total;
    (capillary - polygon.relative_perimeter(psi)).abs()
}

/// Outcome of comparing `W^{Psi_beta}` with `shift_vector + W^Phi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TranslationCheck<T> {
    pub residual: T,
    /// Sampling error allowance of the two polygons (0 for polytopes).
    pub discretization_bound: T,
}

/// Hausdorff distance between the Wulff shape of `Psi_beta`, computed from
/// `Psi_beta` evaluations alone, and `shift_vector + W^Phi`.
pub fn wulff_translation_check<T: Scalar>(
    phi: &Anisotropy<T>,
    beta: T,
    policy: &EtaPolicy<T>,
    boundary_samples: usize,
) -> Result<TranslationCheck<T>> {
    let psi = build_psi(phi, beta, policy)?;
    let direct = wulff_of_gauge(&psi, boundary_samples)?;
    let s = psi.shift_vector();
    let predicted = wulff(phi, boundary_samples)?.translated(Vec2::new(s[0], s[1]));
    let residual = geometry::hausdorff_boundaries(&direct, &predicted.vertices);
    let discretization_bound = match max_curvature(phi) {
        None => T::zero(),
        Some(kappa) => {
            let direct = WulffPolygon {
                vertices: direct,
                discretization_bound: T::zero(),
            };
            sagitta_bound(kappa, direct.max_edge().max(predicted.max_edge()))
        }
    };
    Ok(TranslationCheck {
        residual,
        discretization_bound,
    })
}

/// `b = -+ beta eta± / Phi(±e_n) + beta e_n` and `|<b, e_n>|`.
pub fn horizontal_shift_vector<T: Scalar>(
    phi: &Anisotropy<T>,
    beta: T,
    policy: &EtaPolicy<T>,
) -> Result<(Vec<T>, T)> {
    let psi = build_psi(phi, beta, policy)?;
    let mut b = psi.shift_vector().to_vec();
    let n = b.len();
    b[n - 1] += beta;
    let residual = b[n - 1].abs();
    Ok((b, residual))
}
