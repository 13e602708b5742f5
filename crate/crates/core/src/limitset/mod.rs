//! Limit sets of two-generator Kleinian groups.
//!
//! Points of the Riemann sphere are stored in one of two charts: `z` itself
//! when `|z| ≤ 1`-ish ([`Chart::Finite`]) or `w = 1/z` near infinity
//! ([`Chart::Infinite`]). Distances are chordal: the Euclidean distance
//! between images on the unit sphere under inverse stereographic projection,
//! which agrees with planar distance along the unit circle.

mod enumerate;
mod fit;
mod group;
mod render;

use std::cmp::Ordering;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numfmt::g9;
use crate::sl2rep::{Matrix2C, RepError};

pub use enumerate::{enumerate_limit_set, enumerate_limit_set_with, mobius_fixed_points, EnumConfig};
pub use fit::{box_dimension, circle_deviation, one_sided_distance};
pub use group::{markov_roots, GroupSpec, MarkovRoot, MARKOV_TOL};
pub use render::{render, Window};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LimitError {
    #[error("matrix is ±identity: every point is fixed")]
    EveryPointFixed,
    #[error("elementary: limit set has ≤ 2 points")]
    Elementary { points: Vec<LimitPoint> },
    #[error("generator {0} is ±identity")]
    TrivialGenerator(usize),
    #[error("trace triple violates the Markov relation by {0:.3e}")]
    NotMarkov(f64),
    #[error("epsilon must be positive and max_depth at least 1")]
    BadParameters,
    #[error("need at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
    #[error("points span too few box scales for a dimension estimate")]
    TooFewScales,
    #[error("degenerate render window or image size")]
    DegenerateWindow,
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Chart {
    /// Coordinate is `z`.
    Finite,
    /// Coordinate is `1/z`.
    Infinite,
}

impl Chart {
    pub fn flag(self) -> u8 {
        match self {
            Chart::Finite => 0,
            Chart::Infinite => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub coord: Complex64,
    pub chart: Chart,
}

impl LimitPoint {
    pub const INFINITY: LimitPoint = LimitPoint { coord: Complex64::new(0.0, 0.0), chart: Chart::Infinite };

    pub fn finite(z: Complex64) -> Self {
        LimitPoint { coord: z, chart: Chart::Finite }
    }

    /// The point `u/v` of a nonzero homogeneous pair.
    pub fn from_homogeneous(u: Complex64, v: Complex64) -> Self {
        if u.norm() <= v.norm() {
            LimitPoint { coord: u / v, chart: Chart::Finite }
        } else {
            LimitPoint { coord: v / u, chart: Chart::Infinite }
        }
    }

    /// A homogeneous pair `(u, v)` with `u/v` equal to this point.
    pub fn homogeneous(&self) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        match self.chart {
            Chart::Finite => (self.coord, one),
            Chart::Infinite => (one, self.coord),
        }
    }

    /// Plane coordinate; `None` at infinity.
    pub fn to_plane(&self) -> Option<Complex64> {
        match self.chart {
            Chart::Finite => Some(self.coord),
            Chart::Infinite if self.coord.norm() > 0.0 => Some(self.coord.inv()),
            Chart::Infinite => None,
        }
    }

    /// Image on the unit sphere under inverse stereographic projection.
    pub fn to_sphere(&self) -> [f64; 3] {
        let (u, v) = self.homogeneous();
        let d = u.norm_sqr() + v.norm_sqr();
        let x = 2.0 * u * v.conj() / d;
        [x.re, x.im, (u.norm_sqr() - v.norm_sqr()) / d]
    }

    pub fn from_sphere(p: [f64; 3]) -> Self {
        // inverse of to_sphere: z = (x + iy)/(1 − h) = (1 + h)/(x − iy)
        let xy = Complex64::new(p[0], p[1]);
        if p[2] <= 0.0 {
            LimitPoint::from_homogeneous(xy, Complex64::new(1.0 - p[2], 0.0))
        } else {
            LimitPoint::from_homogeneous(Complex64::new(1.0 + p[2], 0.0), xy.conj())
        }
    }

    pub fn chordal_distance(&self, other: &LimitPoint) -> f64 {
        let (a, b) = (self.to_sphere(), other.to_sphere());
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }

    /// Image under the Möbius map of `m`.
    pub fn apply(&self, m: &Matrix2C) -> LimitPoint {
        let (u, v) = self.homogeneous();
        LimitPoint::from_homogeneous(m.p * u + m.q * v, m.r * u + m.s * v)
    }

    fn sort_key(&self, other: &LimitPoint) -> Ordering {
        self.chart
            .cmp(&other.chart)
            .then(self.coord.re.total_cmp(&other.coord.re))
            .then(self.coord.im.total_cmp(&other.coord.im))
    }
}

/// Sampled limit set, sorted by chart then `(re, im)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitPointCloud {
    pub points: Vec<LimitPoint>,
    pub epsilon: f64,
    pub max_depth: usize,
    /// Set when the point cap cut enumeration short.
    pub truncated: bool,
}

impl LimitPointCloud {
    pub fn new(mut points: Vec<LimitPoint>, epsilon: f64, max_depth: usize, truncated: bool) -> Self {
        points.sort_by(LimitPoint::sort_key);
        LimitPointCloud { points, epsilon, max_depth, truncated }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Finite plane coordinates of all points not at infinity.
    pub fn plane_points(&self) -> Vec<Complex64> {
        self.points.iter().filter_map(LimitPoint::to_plane).collect()
    }

    pub fn mapped(&self, m: &Matrix2C) -> Vec<LimitPoint> {
        self.points.iter().map(|p| p.apply(m)).collect()
    }

    /// CSV `re,im,chart` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,chart\n");
        for p in &self.points {
            writeln!(out, "{},{},{}", g9(p.coord.re), g9(p.coord.im), p.chart.flag()).unwrap();
        }
        out
    }

    /// Reads the output of [`to_csv`](Self::to_csv). Epsilon and depth are
    /// not part of the file and come back as zero.
    pub fn from_csv(text: &str) -> Result<Self, LimitError> {
        let mut points = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (idx == 0 && line == "re,im,chart") {
                continue;
            }
            let err = || LimitError::Parse { line: idx + 1, message: format!("expected re,im,chart, found {line:?}") };
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 3 {
                return Err(err());
            }
            let re: f64 = f[0].trim().parse().map_err(|_| err())?;
            let im: f64 = f[1].trim().parse().map_err(|_| err())?;
            let chart = match f[2].trim() {
                "0" => Chart::Finite,
                "1" => Chart::Infinite,
                _ => return Err(err()),
            };
            points.push(LimitPoint { coord: Complex64::new(re, im), chart });
        }
        Ok(LimitPointCloud::new(points, 0.0, 0, false))
    }
}
