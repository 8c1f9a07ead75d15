use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::Gauge;
use crate::error::{Error, Result};
use crate::scalar::{lit, norm, Scalar};

/// Sampled norm-equivalence constants and structural residuals.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Scalar")]
pub struct ValidationReport<T> {
    /// min of the gauge over sampled unit directions (`c_Phi`).
    pub c_lower: T,
    /// max of the gauge over sampled unit directions (`C_Phi`).
    #[serde(rename = "C_upper")]
    pub c_upper: T,
    pub homogeneity_residual: T,
    pub convexity_residual: T,
    pub sample_count: usize,
}

/// Unit directions used for the constants: in the plane, `samples`
/// equispaced angles (hitting the axes and diagonals whenever `samples` is a
/// multiple of 8); otherwise the signed axes plus seeded Gaussian directions.
pub(crate) fn unit_directions<T: Scalar>(dim: usize, samples: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<T>> {
    if dim == 2 {
        let step = T::TAU() / T::from_usize(samples).unwrap();
        return (0..samples)
            .map(|k| {
                let t = step * T::from_usize(k).unwrap();
                vec![t.cos(), t.sin()]
            })
            .collect();
    }
    let mut out = Vec::with_capacity(samples);
    for k in 0..dim {
        for s in [T::one(), -T::one()] {
            let mut e = vec![T::zero(); dim];
            e[k] = s;
            out.push(e);
        }
    }
    while out.len() < samples {
        let v: Vec<T> = (0..dim)
            .map(|_| lit::<T>(rng.sample::<f64, _>(StandardNormal)))
            .collect();
        let r = norm(&v);
        if r > lit(1e-8) {
            out.push(v.into_iter().map(|x| x / r).collect());
        }
    }
    out
}

fn random_point<T: Scalar>(dim: usize, rng: &mut ChaCha8Rng) -> Vec<T> {
    let radius: f64 = 10f64.powf(rng.random_range(-1.0..1.0));
    let v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
    let r = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-12);
    v.into_iter().map(|x| lit(x * radius / r)).collect()
}

/// Estimate `c_Phi <= Phi(x)/|x| <= C_Phi` and check one-homogeneity and
/// midpoint convexity on seeded samples.
pub fn validate<T: Scalar, G: Gauge<T> + ?Sized>(
    phi: &G,
    samples: usize,
    seed: u64,
) -> Result<ValidationReport<T>> {
    if samples < 16 {
        return Err(Error::InvalidArgument(format!(
            "validation needs at least 16 samples, got {samples}"
        )));
    }
    let dim = phi.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dirs = unit_directions::<T>(dim, samples, &mut rng);
    let mut c_lower = T::infinity();
    let mut c_upper = T::neg_infinity();
    for u in &dirs {
        let v = phi.eval(u);
        c_lower = c_lower.min(v);
        c_upper = c_upper.max(v);
    }
    // exact zeros of the gauge show up as rounding-level values on the grid
    if !(c_lower > lit::<T>(1e-12) * c_upper) {
        return Err(Error::DegenerateAnisotropy(format!(
            "gauge is not positive on the unit sphere (min sampled value {c_lower})"
        )));
    }

    let mut homogeneity_residual = T::zero();
    let mut convexity_residual = T::zero();
    for _ in 0..samples {
        let x: Vec<T> = random_point(dim, &mut rng);
        let fx = phi.eval(&x);
        for lambda in [0.5, 2.0, 17.0] {
            let l = lit::<T>(lambda);
            let lx: Vec<T> = x.iter().map(|&c| c * l).collect();
            homogeneity_residual = homogeneity_residual.max((phi.eval(&lx) - l * fx).abs());
        }
        let y: Vec<T> = random_point(dim, &mut rng);
        let mid: Vec<T> = x.iter().zip(&y).map(|(&a, &b)| (a + b) * lit(0.5)).collect();
        let gap = phi.eval(&mid) - (fx + phi.eval(&y)) * lit(0.5);
        convexity_residual = convexity_residual.max(gap);
    }

    Ok(ValidationReport {
        c_lower,
        c_upper,
        homogeneity_residual,
        convexity_residual,
        sample_count: samples,
    })
}
