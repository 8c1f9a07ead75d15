//! Closed-form Winterbottom areas and energies for three reference families.
//!
//! For a unit-disk Wulff shape centred at `(0, a)` (Euclidean when `a = 0`)
//! the substrate cuts the translated disk at signed height `t = beta - a`
//! relative to its centre, giving a circular cap of area
//! `acos t - t sqrt(1 - t^2)`. The square family `|x1| + |x2|` truncates to
//! the rectangle `[-1, 1] x [0, 1 - beta]`.

use serde::{Deserialize, Serialize};

use crate::anisotropy::Anisotropy;
use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
#[serde(bound = "T: Scalar")]
pub enum CaseId<T> {
    EuclideanDisk,
    L1Square,
    /// `|x| + a x2`, Wulff shape the unit disk centred at `(0, a)`.
    ShiftedDisk(T),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct OracleCase<T> {
    pub case_id: CaseId<T>,
    pub beta: T,
}

impl<T: Scalar> OracleCase<T> {
    pub fn new(case_id: CaseId<T>, beta: T) -> Result<Self> {
        let c = Self { case_id, beta };
        let (lo, hi) = c.admissible();
        if !(beta > lo && beta < hi) {
            return Err(Error::Regime {
                beta: beta.to_f64().unwrap_or(f64::NAN),
                actual: "outside the admissible interval".into(),
                required: "winterbottom".into(),
            });
        }
        Ok(c)
    }

    /// Open interval `(-Phi(-e2), Phi(e2))`.
    pub fn admissible(&self) -> (T, T) {
        match self.case_id {
            CaseId::EuclideanDisk | CaseId::L1Square => (-T::one(), T::one()),
            CaseId::ShiftedDisk(a) => (a - T::one(), T::one() + a),
        }
    }

    pub fn anisotropy(&self) -> Anisotropy<T> {
        let (o, l) = (T::zero(), T::one());
        match self.case_id {
            CaseId::EuclideanDisk => Anisotropy::euclidean(2),
            CaseId::L1Square => Anisotropy::support_polytope(vec![
                vec![l, l],
                vec![-l, l],
                vec![-l, -l],
                vec![l, -l],
            ]),
            CaseId::ShiftedDisk(a) => Anisotropy::shifted_euclidean(vec![o, a]),
        }
        .expect("reference anisotropies are valid")
    }

    fn disk_offset(&self) -> Option<T> {
        match self.case_id {
            CaseId::EuclideanDisk => Some(T::zero()),
            CaseId::ShiftedDisk(a) => Some(a),
            CaseId::L1Square => None,
        }
    }

    pub fn reference_area(&self) -> T {
        match self.disk_offset() {
            Some(a) => {
                let t = self.beta - a;
                t.acos() - t * (T::one() - t * t).sqrt()
            }
            None => lit::<T>(2.0) * (T::one() - self.beta),
        }
    }

    pub fn reference_energy(&self) -> T {
        match self.disk_offset() {
            Some(a) => {
                let t = self.beta - a;
                let lo = t.asin();
                let hi = T::PI() - lo;
                // upper arc: integral of 1 + a sin(theta) over [lo, hi]
                (hi - lo) + a * (lo.cos() - hi.cos()) - self.beta * self.wetted_length()
            }
            None => lit::<T>(4.0) * (T::one() - self.beta),
        }
    }

    pub fn wetted_length(&self) -> T {
        match self.disk_offset() {
            Some(a) => {
                let t = self.beta - a;
                lit::<T>(2.0) * (T::one() - t * t).sqrt()
            }
            None => lit(2.0),
        }
    }

    /// Scale-free value `energy / sqrt(area)`.
    pub fn reference_ratio(&self) -> T {
        self.reference_energy() / self.reference_area().sqrt()
    }
}

pub fn reference_area<T: Scalar>(case: &OracleCase<T>) -> T {
    case.reference_area()
}

pub fn reference_energy<T: Scalar>(case: &OracleCase<T>) -> T {
    case.reference_energy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn case(id: CaseId<f64>, beta: f64) -> OracleCase<f64> {
        OracleCase::new(id, beta).unwrap()
    }

    #[test]
    fn areas() {
        assert!((case(CaseId::EuclideanDisk, 0.0).reference_area() - PI / 2.0).abs() < 1e-15);
        assert_eq!(case(CaseId::L1Square, 0.5).reference_area(), 1.0);
        let a = case(CaseId::EuclideanDisk, 0.5).reference_area();
        assert!((a - (PI / 3.0 - 3f64.sqrt() / 4.0)).abs() < 1e-15);
        assert!((a - 0.61418).abs() < 1e-5);
    }

    #[test]
    fn energies() {
        assert!((case(CaseId::EuclideanDisk, 0.0).reference_energy() - PI).abs() < 1e-15);
        assert_eq!(case(CaseId::L1Square, 0.5).reference_energy(), 2.0);
        assert!((case(CaseId::ShiftedDisk(0.25), 0.25).reference_energy() - PI).abs() < 1e-15);
        assert!((case(CaseId::EuclideanDisk, 0.5).reference_energy() - 1.22837).abs() < 1e-5);
    }

    #[test]
    fn inadmissible_beta() {
        assert!(OracleCase::new(CaseId::EuclideanDisk, 1.0).is_err());
        assert!(OracleCase::new(CaseId::ShiftedDisk(0.25), -0.75).is_err());
        assert!(OracleCase::new(CaseId::ShiftedDisk(0.25), 1.2).is_ok());
    }

    #[test]
    fn ratio_derivative_is_minus_wetted_over_root_area() {
        // the minimal ratio is an envelope over shapes, so its beta-derivative
        // is the partial derivative at the fixed optimal shape
        let h = 1e-5;
        for id in [CaseId::EuclideanDisk, CaseId::L1Square, CaseId::ShiftedDisk(0.25)] {
            for beta in [-0.5, -0.1, 0.2, 0.6] {
                let c = case(id, beta);
                let fd = (case(id, beta + h).reference_ratio() - case(id, beta - h).reference_ratio()) / (2.0 * h);
                let env = -c.wetted_length() / c.reference_area().sqrt();
                assert!((fd - env).abs() < 1e-6, "{id:?} {beta}: {fd} vs {env}");
            }
        }
    }

    #[test]
    fn euclidean_energy_derivative() {
        // dE/dbeta = -4 sqrt(1 - beta^2) = -2 * wetted length for the disk family
        let h = 1e-6;
        for beta in [-0.5, 0.0, 0.5] {
            let fd = (case(CaseId::EuclideanDisk, beta + h).reference_energy()
                - case(CaseId::EuclideanDisk, beta - h).reference_energy())
                / (2.0 * h);
            let w = case(CaseId::EuclideanDisk, beta).wetted_length();
            assert!((fd + 2.0 * w).abs() < 1e-6);
        }
    }
}
