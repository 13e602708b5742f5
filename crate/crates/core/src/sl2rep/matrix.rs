use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2×2 complex matrix `[[p, q], [r, s]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2C {
    pub p: Complex64,
    pub q: Complex64,
    pub r: Complex64,
    pub s: Complex64,
}

impl Matrix2C {
    pub const IDENTITY: Matrix2C = Matrix2C { p: ONE, q: ZERO, r: ZERO, s: ONE };

    pub const fn new(p: Complex64, q: Complex64, r: Complex64, s: Complex64) -> Self {
        Matrix2C { p, q, r, s }
    }

    pub fn real(p: f64, q: f64, r: f64, s: f64) -> Self {
        Matrix2C::new(p.into(), q.into(), r.into(), s.into())
    }

    pub fn diag(d: Complex64, e: Complex64) -> Self {
        Matrix2C::new(d, ZERO, ZERO, e)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.p, self.q, self.r, self.s]
    }

    pub fn det(&self) -> Complex64 {
        self.p * self.s - self.q * self.r
    }

    pub fn trace(&self) -> Complex64 {
        self.p + self.s
    }

    /// Adjugate; the inverse of any unimodular matrix.
    pub fn adjugate(&self) -> Self {
        Matrix2C::new(self.s, -self.q, -self.r, self.p)
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Matrix2C::new(self.p * k, self.q * k, self.r * k, self.s * k)
    }

    /// `g · self · g⁻¹` for unimodular `g`.
    pub fn conjugate_by(&self, g: &Matrix2C) -> Self {
        *g * *self * g.adjugate()
    }

    /// Largest absolute entry difference.
    pub fn max_abs_diff(&self, other: &Matrix2C) -> f64 {
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Rounding scale of the determinant, `|p||s| + |q||r|`.
    pub fn det_scale(&self) -> f64 {
        self.p.norm() * self.s.norm() + self.q.norm() * self.r.norm()
    }

    /// `|det − 1| ≤ tol` measured relative to the rounding scale of the
    /// determinant (never below absolute `tol`).
    pub fn is_unimodular(&self, tol: f64) -> bool {
        (self.det() - ONE).norm() <= tol * self.det_scale().max(1.0)
    }

    /// Distance to the nearer of `I` and `−I`.
    pub fn distance_to_pm_identity(&self) -> f64 {
        let id = Matrix2C::IDENTITY;
        self.max_abs_diff(&id).min(self.max_abs_diff(&id.scale(-ONE)))
    }

    /// Random element of SL(2,C) with `p, q, r` drawn from the box
    /// `[-spread, spread]²` and `s` solved from the determinant.
    pub fn random_sl2<R: Rng + ?Sized>(rng: &mut R, spread: f64) -> Self {
        let draw = |rng: &mut R| Complex64::new(rng.gen_range(-spread..spread), rng.gen_range(-spread..spread));
        loop {
            let p = draw(rng);
            if p.norm() < 0.1 * spread {
                continue;
            }
            let q = draw(rng);
            let r = draw(rng);
            let s = (ONE + q * r) / p;
            return Matrix2C::new(p, q, r, s);
        }
    }
}

impl Mul for Matrix2C {
    type Output = Matrix2C;

    fn mul(self, o: Matrix2C) -> Matrix2C {
        Matrix2C::new(
            self.p * o.p + self.q * o.r,
            self.p * o.q + self.q * o.s,
            self.r * o.p + self.s * o.r,
            self.r * o.q + self.s * o.s,
        )
    }
}

impl fmt::Display for Matrix2C {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.p, self.q, self.r, self.s)
    }
}
