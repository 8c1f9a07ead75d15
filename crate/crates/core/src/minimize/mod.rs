//! Multi-start polygonal minimisation of the capillary energy, inequality
//! sampling and pancake witnesses for the degenerate regimes.

mod descent;
mod starts;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::anisotropy::{Anisotropy, Gauge};
use crate::error::{Error, Result};
use crate::geometry::{hausdorff_mod_horizontal, random_polygon, HalfPlanePolygon};
use crate::scalar::{lit, Scalar};
use crate::vec2::Vec2;
use crate::winterbottom::{require_regime, winterbottom, Regime, WinterbottomShape};

use descent::{descend, Settings};

/// Boundary samples of the Winterbottom polygon every run is compared with.
pub const REFERENCE_SAMPLES: usize = 2048;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    FixedVolume,
    #[default]
    Ratio,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::FixedVolume => "fixed_volume",
            Mode::Ratio => "ratio",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default, bound = "T: Scalar")]
pub struct MinimizeConfig<T> {
    pub vertex_count: usize,
    pub restarts: usize,
    /// Upper bound on descent sweeps per restart.
    pub max_iterations: usize,
    /// `None` means 5% of the start polygon's diameter.
    pub step_init: Option<T>,
    pub step_shrink: T,
    pub seed: u64,
    pub mode: Mode,
}

impl<T: Scalar> Default for MinimizeConfig<T> {
    fn default() -> Self {
        Self {
            vertex_count: 64,
            restarts: 8,
            max_iterations: 5000,
            step_init: None,
            step_shrink: lit(0.7),
            seed: 0,
            mode: Mode::Ratio,
        }
    }
}

impl<T: Scalar> MinimizeConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.vertex_count < 8 {
            return Err(Error::InvalidArgument(format!(
                "vertex_count must be at least 8, got {}",
                self.vertex_count
            )));
        }
        if self.restarts < 1 {
            return Err(Error::InvalidArgument("restarts must be at least 1".into()));
        }
        if !(self.step_shrink > T::zero() && self.step_shrink < T::one()) {
            return Err(Error::InvalidArgument("step_shrink must lie in (0, 1)".into()));
        }
        if let Some(s) = self.step_init {
            if !(s > T::zero()) || !s.is_finite() {
                return Err(Error::InvalidArgument("step_init must be positive".into()));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct MinimizeReport<T> {
    pub mode: Mode,
    pub best_polygon: HalfPlanePolygon<T>,
    pub best_energy: T,
    /// `C / sqrt(area)`.
    pub best_ratio: T,
    pub winterbottom_energy: T,
    pub winterbottom_ratio: T,
    pub relative_gap: T,
    pub hausdorff_mod_translation: T,
    /// Descent sweeps of the winning restart.
    pub iterations_used: usize,
    /// Best energy of each restart, evaluated at the reference volume.
    pub per_restart_energies: Vec<T>,
}

/// Minimise `C / sqrt(area)` over simple polygons in the half-plane.
pub fn minimize_ratio<T: Scalar>(phi: &Anisotropy<T>, beta: T, cfg: &MinimizeConfig<T>) -> Result<MinimizeReport<T>> {
    run(phi, beta, None, cfg)
}

/// Minimise the energy at fixed area `volume`.
pub fn minimize_fixed_volume<T: Scalar>(
    phi: &Anisotropy<T>,
    beta: T,
    volume: T,
    cfg: &MinimizeConfig<T>,
) -> Result<MinimizeReport<T>> {
    if !(volume > T::zero()) || !volume.is_finite() {
        return Err(Error::InvalidArgument("volume must be positive".into()));
    }
    run(phi, beta, Some(volume), cfg)
}

/// Dispatch on `cfg.mode`; fixed-volume runs use `volume`, defaulting to the
/// area of the Winterbottom shape.
pub fn minimize<T: Scalar>(
    phi: &Anisotropy<T>,
    beta: T,
    volume: Option<T>,
    cfg: &MinimizeConfig<T>,
) -> Result<MinimizeReport<T>> {
    match cfg.mode {
        Mode::Ratio => minimize_ratio(phi, beta, cfg),
        Mode::FixedVolume => {
            let v = match volume {
                Some(v) => v,
                None => winterbottom(phi, beta, REFERENCE_SAMPLES)?.polygon.area(),
            };
            minimize_fixed_volume(phi, beta, v, cfg)
        }
    }
}

struct RestartResult<T> {
    vertices: Vec<Vec2<T>>,
    ratio: T,
    sweeps: usize,
}

fn run<T: Scalar>(
    phi: &Anisotropy<T>,
    beta: T,
    volume: Option<T>,
    cfg: &MinimizeConfig<T>,
) -> Result<MinimizeReport<T>> {
    cfg.validate()?;
    require_regime(phi, beta, &[Regime::Winterbottom])?;
    let shape = winterbottom(phi, beta, REFERENCE_SAMPLES)?;
    let reference = match volume {
        Some(v) => shape.polygon.scaled_to_area(v)?,
        None => shape.polygon.clone(),
    };
    let settings = Settings {
        step_init: cfg.step_init,
        step_shrink: cfg.step_shrink,
        max_iterations: cfg.max_iterations,
        volume,
    };

    let results: Vec<std::result::Result<RestartResult<T>, String>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|k| {
            let seed = cfg.seed.wrapping_add(k as u64);
            let start = starts::start(&reference, k, cfg.vertex_count, seed).map_err(|e| format!("restart {k}: {e}"))?;
            let out = descend(phi, beta, start.vertices().to_vec(), &settings);
            HalfPlanePolygon::new(out.vertices.clone()).map_err(|e| format!("restart {k}: {e}"))?;
            Ok(RestartResult {
                vertices: out.vertices,
                ratio: out.ratio,
                sweeps: out.sweeps,
            })
        })
        .collect();

    let root_area = reference.area().sqrt();
    let mut per_restart = Vec::with_capacity(cfg.restarts);
    let mut best: Option<(usize, &RestartResult<T>)> = None;
    let mut failures = Vec::new();
    for (k, r) in results.iter().enumerate() {
        match r {
            Ok(r) => {
                per_restart.push(r.ratio * root_area);
                if best.is_none_or(|(_, b)| r.ratio < b.ratio) {
                    best = Some((k, r));
                }
            }
            Err(msg) => {
                per_restart.push(T::nan());
                failures.push(msg.clone());
            }
        }
    }
    let (_, best) = best.ok_or_else(|| Error::OptimizationFailure(failures.join("; ")))?;
    let best_polygon = HalfPlanePolygon::new(best.vertices.clone())?;
    report(phi, beta, cfg.mode_for(volume), &shape, &reference, best_polygon, best.sweeps, per_restart)
}

impl<T> MinimizeConfig<T> {
    fn mode_for(&self, volume: Option<T>) -> Mode {
        if volume.is_some() {
            Mode::FixedVolume
        } else {
            Mode::Ratio
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn report<T: Scalar>(
    phi: &Anisotropy<T>,
    beta: T,
    mode: Mode,
    shape: &WinterbottomShape<T>,
    reference: &HalfPlanePolygon<T>,
    best_polygon: HalfPlanePolygon<T>,
    sweeps: usize,
    per_restart_energies: Vec<T>,
) -> Result<MinimizeReport<T>> {
    let best_energy = best_polygon.capillary_energy(phi, beta).total;
    let best_ratio = best_energy / best_polygon.area().sqrt();
    let winterbottom_energy = reference.capillary_energy(phi, beta).total;
    let winterbottom_ratio = shape.energy.total / shape.polygon.area().sqrt();
    let matched = best_polygon.scaled_to_area(reference.area())?;
    Ok(MinimizeReport {
        mode,
        best_energy,
        best_ratio,
        winterbottom_energy,
        winterbottom_ratio,
        relative_gap: (best_ratio - winterbottom_ratio) / winterbottom_ratio,
        hausdorff_mod_translation: hausdorff_mod_horizontal(&matched, reference),
        iterations_used: sweeps,
        per_restart_energies,
        best_polygon,
    })
}

/// Outcome of [`verify_inequality_sample`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct InequalitySample<T> {
    pub violations: usize,
    pub worst_margin: T,
    pub samples: usize,
}

/// `C(E) - C(W)` for a competitor of the same area as the reference shape.
pub fn inequality_margin<T: Scalar>(
    phi: &Anisotropy<T>,
    beta: T,
    reference: &WinterbottomShape<T>,
    competitor: &HalfPlanePolygon<T>,
) -> T {
    competitor.capillary_energy(phi, beta).total - reference.energy.total
}

/// Slack below which a negative margin counts as a violation.
pub fn violation_threshold<T: Scalar>(reference_energy: T) -> T {
    -lit::<T>(1e-7) * (T::one() + reference_energy.abs())
}

/// Random area-matched competitors, alternating with and without contact.
pub fn verify_inequality_sample<T: Scalar>(
    phi: &Anisotropy<T>,
    beta: T,
    samples: usize,
    seed: u64,
) -> Result<InequalitySample<T>> {
    require_regime(phi, beta, &[Regime::Winterbottom])?;
    let shape = winterbottom(phi, beta, REFERENCE_SAMPLES)?;
    let area = shape.polygon.area();
    let threshold = violation_threshold(shape.energy.total);
    let margins: Vec<T> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let vertex_count = 6 + (k * 7) % 59;
            let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64);
            random_polygon(s, vertex_count, area, k % 2 == 0).map(|p| inequality_margin(phi, beta, &shape, &p))
        })
        .collect::<Result<_>>()?;
    Ok(InequalitySample {
        violations: margins.iter().filter(|&&m| m < threshold).count(),
        worst_margin: margins.iter().copied().fold(T::infinity(), T::min),
        samples,
    })
}

/// One pancake `[0, 1/h] x [0, h]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct WitnessPoint<T> {
    pub k: u32,
    pub h: T,
    /// Energy evaluated on the polygon.
    pub energy: T,
    /// `(Phi(e2) - beta) / h + (Phi(e1) + Phi(-e1)) h`.
    pub formula: T,
}

/// Unit-area pancakes of height `2^-k`, `k = 1..=k_max`.
pub fn witness_sequence<T: Scalar>(phi: &Anisotropy<T>, beta: T, k_max: u32) -> Result<Vec<WitnessPoint<T>>> {
    require_regime(phi, beta, &[Regime::CriticalWetting, Regime::UnboundedBelow])?;
    if k_max > 60 {
        return Err(Error::InvalidArgument(format!("k_max must be at most 60, got {k_max}")));
    }
    let (o, l) = (T::zero(), T::one());
    let up = phi.eval2(Vec2::new(o, l));
    let sideways = phi.eval2(Vec2::new(l, o)) + phi.eval2(Vec2::new(-l, o));
    (1..=k_max)
        .map(|k| {
            let h = lit::<T>(2.0).powi(-(k as i32));
            let w = T::one() / h;
            // thin pancakes fall below the default snap tolerance
            let p = HalfPlanePolygon::with_snap_tolerance(
                vec![Vec2::new(o, o), Vec2::new(w, o), Vec2::new(w, h), Vec2::new(o, h)],
                T::zero(),
            )?;
            Ok(WitnessPoint {
                k,
                h,
                energy: p.capillary_energy(phi, beta).total,
                formula: (up - beta) / h + sideways * h,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn euclid() -> Anisotropy<f64> {
        Anisotropy::euclidean(2).unwrap()
    }

    fn l1() -> Anisotropy<f64> {
        Anisotropy::support_polytope(vec![vec![1., 1.], vec![-1., 1.], vec![-1., -1.], vec![1., -1.]]).unwrap()
    }

    fn quick() -> MinimizeConfig<f64> {
        MinimizeConfig {
            vertex_count: 24,
            restarts: 3,
            max_iterations: 400,
            ..Default::default()
        }
    }

    #[test]
    fn config_checks() {
        let mut c = MinimizeConfig::<f64>::default();
        assert!(c.validate().is_ok());
        c.vertex_count = 7;
        assert!(c.validate().is_err());
        c.vertex_count = 8;
        c.restarts = 0;
        assert!(c.validate().is_err());
        let parsed: MinimizeConfig<f64> = serde_json::from_str(r#"{"restarts": 2, "mode": "fixed_volume"}"#).unwrap();
        assert_eq!(parsed.restarts, 2);
        assert_eq!(parsed.mode, Mode::FixedVolume);
        assert_eq!(parsed.vertex_count, 64);
    }

    #[test]
    fn regime_errors() {
        let cfg = quick();
        assert!(matches!(minimize_ratio(&euclid(), 1.0, &cfg), Err(Error::Regime { .. })));
        assert!(matches!(witness_sequence(&euclid(), 0.5, 4), Err(Error::Regime { .. })));
        assert!(verify_inequality_sample(&euclid(), -1.0, 4, 0).is_err());
    }

    #[test]
    fn euclidean_half_disk_ratio() {
        let rep = minimize_ratio(&euclid(), 0.0, &quick()).unwrap();
        assert!((rep.best_ratio - (2.0 * PI).sqrt()).abs() < 0.01 * (2.0 * PI).sqrt());
        assert!(rep.relative_gap > -1e-7);
        assert_eq!(rep.per_restart_energies.len(), 3);
        let gap = (rep.best_ratio - rep.winterbottom_ratio) / rep.winterbottom_ratio;
        assert_eq!(gap, rep.relative_gap);
    }

    #[test]
    fn l1_fixed_volume() {
        let rep = minimize_fixed_volume(&l1(), 0.5, 1.0, &quick()).unwrap();
        assert!((rep.best_polygon.area() - 1.0).abs() < 1e-9);
        assert!((rep.best_energy - 2.0).abs() < 0.02, "{}", rep.best_energy);
        assert!((rep.winterbottom_energy - 2.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic() {
        let a = serde_json::to_string(&minimize_ratio(&euclid(), 0.5, &quick()).unwrap()).unwrap();
        let b = serde_json::to_string(&minimize_ratio(&euclid(), 0.5, &quick()).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn inequality_sample_has_no_violations() {
        let s = verify_inequality_sample(&l1(), 0.5, 40, 1).unwrap();
        assert_eq!(s.violations, 0);
        assert!(s.worst_margin > 0.0);
        let w = winterbottom(&l1(), 0.5, REFERENCE_SAMPLES).unwrap();
        assert!(inequality_margin(&l1(), 0.5, &w, &w.polygon).abs() < 1e-12);
    }

    #[test]
    fn witness_examples() {
        let s = witness_sequence(&euclid(), 1.1, 10).unwrap();
        let last = s.last().unwrap();
        assert!((last.energy - (-0.1 * 1024.0 + 2.0 / 1024.0)).abs() < 1e-9);
        let s = witness_sequence(&l1(), 1.5, 5).unwrap();
        assert_eq!(s[4].energy, -15.9375);
        for p in witness_sequence(&euclid(), 1.0, 20).unwrap() {
            assert!(p.energy > 0.0);
            assert!(p.energy.abs() <= 2.0 * p.h);
            assert_eq!(p.energy, p.formula);
        }
    }

    #[test]
    fn witness_energies_decrease_when_unbounded() {
        let s = witness_sequence(&euclid(), 1.1, 30).unwrap();
        for w in s.windows(2).skip(2) {
            assert!(w[1].energy < w[0].energy);
        }
    }
}
