use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LimitError;
use crate::sl2rep::{from_trace_triple, Matrix2C, DET_TOL};

/// Allowed violation of `x² + y² + z² = xyz`, relative to `max(1, |xyz|)`.
pub const MARKOV_TOL: f64 = 1e-8;

/// Which root of the Markov quadratic in `z` to take.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MarkovRoot {
    #[default]
    Larger,
    Smaller,
}

/// Generators of a Kleinian group (one or two of them).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    generators: Vec<Matrix2C>,
}

fn identity_tol(m: &Matrix2C) -> bool {
    m.distance_to_pm_identity() <= 1e-12
}

impl GroupSpec {
    pub fn new(a: Matrix2C, b: Matrix2C) -> Result<Self, LimitError> {
        for (i, m) in [a, b].iter().enumerate() {
            if !m.is_unimodular(DET_TOL) {
                return Err(crate::sl2rep::RepError::NotUnimodular { generator: i, det: m.det() }.into());
            }
            if identity_tol(m) {
                return Err(LimitError::TrivialGenerator(i));
            }
        }
        Ok(GroupSpec { generators: vec![a, b] })
    }

    /// Cyclic group generated by `a`; always elementary.
    pub fn single(a: Matrix2C) -> Result<Self, LimitError> {
        if !a.is_unimodular(DET_TOL) {
            return Err(crate::sl2rep::RepError::NotUnimodular { generator: 0, det: a.det() }.into());
        }
        if identity_tol(&a) {
            return Err(LimitError::TrivialGenerator(0));
        }
        Ok(GroupSpec { generators: vec![a] })
    }

    /// Punctured-torus group with `tr a = x`, `tr b = y`, `tr ab = z`.
    ///
    /// The generators are conjugated by the Cayley transform
    /// `z ↦ (z − i)/(z + i)`, so when all traces are real the group preserves
    /// the unit disc and its limit set is the unit circle.
    pub fn from_traces(x: Complex64, y: Complex64, z: Complex64) -> Result<Self, LimitError> {
        let violation = (x * x + y * y + z * z - x * y * z).norm();
        if violation > MARKOV_TOL * (x * y * z).norm().max(1.0) {
            return Err(LimitError::NotMarkov(violation));
        }
        let (a, b) = from_trace_triple(x, y, z);
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let cayley = Matrix2C::new(one, -i, one, i);
        let cayley = cayley.scale(cayley.det().sqrt().inv());
        GroupSpec::new(a.conjugate_by(&cayley), b.conjugate_by(&cayley))
    }

    /// As [`from_traces`](Self::from_traces) with `z` solved from
    /// `z² − xyz + x² + y² = 0`.
    pub fn from_trace_pair(x: Complex64, y: Complex64, root: MarkovRoot) -> Result<Self, LimitError> {
        let (large, small) = markov_roots(x, y);
        let z = match root {
            MarkovRoot::Larger => large,
            MarkovRoot::Smaller => small,
        };
        GroupSpec::from_traces(x, y, z)
    }

    pub fn generators(&self) -> &[Matrix2C] {
        &self.generators
    }
}

/// Both roots `z = (xy ± √(x²y² − 4(x² + y²)))/2`, larger modulus first.
pub fn markov_roots(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let xy = x * y;
    let disc = (xy * xy - 4.0 * (x * x + y * y)).sqrt();
    let (r1, r2) = ((xy + disc) / 2.0, (xy - disc) / 2.0);
    if r1.norm() >= r2.norm() {
        (r1, r2)
    } else {
        (r2, r1)
    }
}
