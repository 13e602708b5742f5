//! Representations of loop groups into SL(2,C).
//!
//! A [`Representation`] assigns a unimodular matrix to every generator of a
//! [`Presentation`]. From it we read characters (traces of word images), the
//! isometry type and translation length of each image acting on hyperbolic
//! 3-space, the log-character vector used for the compactification of the
//! character variety, and trace coordinates of a point of that variety.

mod matrix;
pub mod repfile;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::{ConjugacyClassList, GroupError, Presentation, Word};

pub use matrix::Matrix2C;

/// Unimodularity tolerance for generator images.
pub const DET_TOL: f64 = 1e-9;
/// A relation whose image is farther than this from `±I` is flagged.
pub const RELATION_TOL: f64 = 1e-6;
/// Default trace tolerance separating parabolic/elliptic from loxodromic.
pub const CLASSIFY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("image of generator {generator} is not unimodular: det = {det}")]
    NotUnimodular { generator: usize, det: Complex64 },
    #[error("matrix is not unimodular: det = {0}")]
    NonUnimodularMatrix(Complex64),
    #[error("expected {expected} generator images, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("class list is empty")]
    EmptyClassList,
    #[error("rank {0} representation needs explicit coordinate words")]
    MissingCoordinates(usize),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A homomorphism from a finitely presented group into SL(2,C), given on
/// generators. Relations are checked, not enforced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Representation {
    presentation: Presentation,
    images: Vec<Matrix2C>,
    inverses: Vec<Matrix2C>,
    residuals: Vec<f64>,
}

pub fn make_rep(presentation: Presentation, matrices: Vec<Matrix2C>) -> Result<Representation, RepError> {
    if matrices.len() != presentation.n_generators() {
        return Err(RepError::CountMismatch { expected: presentation.n_generators(), got: matrices.len() });
    }
    if let Some((generator, m)) = matrices.iter().enumerate().find(|(_, m)| !m.is_unimodular(DET_TOL)) {
        return Err(RepError::NotUnimodular { generator, det: m.det() });
    }
    let inverses = matrices.iter().map(Matrix2C::adjugate).collect();
    let mut rep = Representation { presentation, images: matrices, inverses, residuals: Vec::new() };
    rep.residuals = rep
        .presentation
        .relations()
        .iter()
        .map(|r| rep.eval_unchecked(r).distance_to_pm_identity())
        .collect();
    for (r, res) in rep.presentation.relations().iter().zip(&rep.residuals) {
        if *res > RELATION_TOL {
            log::warn!("relation {r} is off by {res:.3e}; representation kept");
        }
    }
    Ok(rep)
}

impl Representation {
    /// Representation of the free group on `matrices.len()` generators.
    pub fn free(matrices: Vec<Matrix2C>) -> Result<Self, RepError> {
        make_rep(Presentation::free(matrices.len()), matrices)
    }

    pub fn trivial(presentation: Presentation) -> Self {
        let n = presentation.n_generators();
        make_rep(presentation, vec![Matrix2C::IDENTITY; n]).expect("identity images are valid")
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Matrix2C] {
        &self.images
    }

    /// Distance of each relation's image from `±I`, in relation order.
    pub fn relation_residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn satisfies_relations(&self, tol: f64) -> bool {
        self.residuals.iter().all(|&r| r <= tol)
    }

    fn eval_unchecked(&self, w: &Word) -> Matrix2C {
        w.letters().iter().fold(Matrix2C::IDENTITY, |acc, l| {
            acc * if l.inverse { self.inverses[l.generator] } else { self.images[l.generator] }
        })
    }

    /// Image of `w`: the ordered product of generator images.
    pub fn evaluate(&self, w: &Word) -> Result<Matrix2C, RepError> {
        w.check_rank(self.rank())?;
        Ok(self.eval_unchecked(w))
    }

    pub fn character(&self, w: &Word) -> Result<Complex64, RepError> {
        Ok(self.evaluate(w)?.trace())
    }

    /// The representation `γ ↦ g ρ(γ) g⁻¹`.
    pub fn conjugate(&self, g: &Matrix2C) -> Representation {
        let images = self.images.iter().map(|m| m.conjugate_by(g)).collect();
        make_rep(self.presentation.clone(), images).expect("conjugation preserves unimodularity")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IsometryKind {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl IsometryKind {
    pub fn as_str(self) -> &'static str {
        match self {
            IsometryKind::Identity => "identity",
            IsometryKind::Elliptic => "elliptic",
            IsometryKind::Parabolic => "parabolic",
            IsometryKind::Loxodromic => "loxodromic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryClass {
    pub kind: IsometryKind,
    /// Minimal displacement in hyperbolic 3-space; zero unless loxodromic.
    pub translation_length: f64,
}

pub fn classify(m: &Matrix2C) -> Result<IsometryClass, RepError> {
    classify_with(m, CLASSIFY_TOL)
}

/// Classifies `m` as an isometry of hyperbolic 3-space. `tol` is the trace
/// tolerance around `±2` and around the real axis.
pub fn classify_with(m: &Matrix2C, tol: f64) -> Result<IsometryClass, RepError> {
    if !m.is_unimodular(DET_TOL) {
        return Err(RepError::NonUnimodularMatrix(m.det()));
    }
    let tr = m.trace();
    let kind = if m.distance_to_pm_identity() <= tol {
        IsometryKind::Identity
    } else if (tr - 2.0).norm() <= tol || (tr + 2.0).norm() <= tol {
        IsometryKind::Parabolic
    } else if tr.im.abs() <= tol && tr.re.abs() < 2.0 {
        IsometryKind::Elliptic
    } else {
        IsometryKind::Loxodromic
    };
    let translation_length = match kind {
        IsometryKind::Loxodromic => {
            let len = eigenvalue_length(tr);
            debug_assert!(
                (len - arccosh_length(tr)).abs() <= 1e-6 * len.max(1.0),
                "length formulas disagree at trace {tr}"
            );
            len
        }
        _ => 0.0,
    };
    Ok(IsometryClass { kind, translation_length })
}

/// `2·ln|μ|` for the eigenvalue `μ` of modulus at least one of a unimodular
/// matrix with trace `tr`.
pub fn eigenvalue_length(tr: Complex64) -> f64 {
    let h = tr / 2.0;
    let log_mu = if h.norm() < 1e8 {
        let root = (h * h - 1.0).sqrt();
        (h + root).norm().max((h - root).norm()).ln()
    } else {
        // μ = h(1 ± √(1 − h⁻²)) without squaring h
        let hi = h.inv();
        let w = (Complex64::new(1.0, 0.0) - hi * hi).sqrt();
        h.norm().ln() + (1.0 + w).norm().max((1.0 - w).norm()).ln()
    };
    2.0 * log_mu.max(0.0)
}

/// `2·|Re arccosh(tr/2)|`, the same quantity by the inverse hyperbolic cosine.
pub fn arccosh_length(tr: Complex64) -> f64 {
    2.0 * (tr / 2.0).acosh().re.abs()
}

/// Log-character coordinates `log(|χ(γ)| + 2)` over a class list.
pub fn morgan_shalen_vector(rep: &Representation, classes: &ConjugacyClassList) -> Result<Vec<f64>, RepError> {
    if classes.is_empty() {
        return Err(RepError::EmptyClassList);
    }
    classes.iter().map(|w| Ok((rep.character(w)?.norm() + 2.0).ln())).collect()
}

/// Trace coordinates of a point of the character variety.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModuliPoint {
    pub words: Vec<Word>,
    pub traces: Vec<Complex64>,
}

impl ModuliPoint {
    /// Largest coordinate difference; infinite if the coordinate words differ.
    pub fn distance(&self, other: &ModuliPoint) -> f64 {
        if self.words != other.words {
            return f64::INFINITY;
        }
        self.traces.iter().zip(&other.traces).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &ModuliPoint, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

/// Default coordinate words: `a` in rank 1, `a, b, ab` in rank 2.
pub fn default_coordinate_words(rank: usize) -> Option<Vec<Word>> {
    let a = Word::generator(0);
    match rank {
        1 => Some(vec![a]),
        2 => {
            let b = Word::generator(1);
            let ab = a.concat(&b);
            Some(vec![a, b, ab])
        }
        _ => None,
    }
}

pub fn moduli_point(rep: &Representation, coordinates: Option<&[Word]>) -> Result<ModuliPoint, RepError> {
    let words = match coordinates {
        Some(ws) => ws.to_vec(),
        None => default_coordinate_words(rep.rank()).ok_or(RepError::MissingCoordinates(rep.rank()))?,
    };
    let traces = words.iter().map(|w| rep.character(w)).collect::<Result<_, _>>()?;
    Ok(ModuliPoint { words, traces })
}

/// Generators with traces `tr a = x`, `tr b = y`, `tr ab = z`.
///
/// `a = [[x, 1], [−1, 0]]`, `b = [[0, ζ], [−1/ζ, y]]` with `ζ² + zζ + 1 = 0`.
pub fn from_trace_triple(x: Complex64, y: Complex64, z: Complex64) -> (Matrix2C, Matrix2C) {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let zeta = (-z + (z * z - 4.0).sqrt()) / 2.0;
    let a = Matrix2C::new(x, one, -one, zero);
    let b = Matrix2C::new(zero, zeta, -zeta.inv(), y);
    (a, b)
}
