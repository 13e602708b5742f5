//! Diverging families of representations and their rescaled length vectors.
//!
//! For a family `ρ_t` leaving every compact set of the character variety, the
//! translation-length vectors `ℓ_{ρ_t}` over a finite class list, divided by
//! their sup-norm `λ_t`, approach the length function of a group action on an
//! ℝ-tree. For the built-in Schottky family that tree is the Cayley tree of
//! the free group, whose length function is cyclically reduced word length;
//! [`tree_limit_check`] compares against exactly that.

use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fpgroup::{canonical_cyclic, ConjugacyClassList, Letter, Presentation, Word};
use crate::numfmt::g9;
use crate::sl2rep::{classify, make_rep, Matrix2C, RepError, Representation};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DegenError {
    #[error("class list is empty")]
    EmptyClassList,
    #[error("fixed point: length function vanishes on every class")]
    VanishingLengths,
    #[error("need at least two parameter values, got {0}")]
    TooFewSamples(usize),
    #[error("parameter values must be strictly increasing (at index {0})")]
    NotIncreasing(usize),
    #[error("length vectors are over different class lists")]
    ClassListMismatch,
    #[error("family failed at t = {t}: {source}")]
    Family { t: f64, source: RepError },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// A one-parameter family `t ↦ ρ_t`.
pub trait RepFamily: Sync {
    fn at(&self, t: f64) -> Result<Representation, RepError>;
}

/// `a ↦ diag(e^{ct}, e^{−ct})`, `b ↦ [[cosh ct, sinh ct], [sinh ct, cosh ct]]`
/// with speed `c`. For large `t` the pair plays ping-pong, so the group is
/// free and discrete.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchottkyFamily {
    pub speed: f64,
}

impl Default for SchottkyFamily {
    fn default() -> Self {
        SchottkyFamily { speed: 1.0 }
    }
}

impl RepFamily for SchottkyFamily {
    fn at(&self, t: f64) -> Result<Representation, RepError> {
        let u = self.speed * t;
        let a = Matrix2C::real(u.exp(), 0.0, 0.0, (-u).exp());
        let b = Matrix2C::real(u.cosh(), u.sinh(), u.sinh(), u.cosh());
        Representation::free(vec![a, b])
    }
}

/// Rank-one family `a ↦ diag(e^{ct}, e^{−ct})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbelianFamily {
    pub speed: f64,
}

impl RepFamily for AbelianFamily {
    fn at(&self, t: f64) -> Result<Representation, RepError> {
        let u = self.speed * t;
        Representation::free(vec![Matrix2C::real(u.exp(), 0.0, 0.0, (-u).exp())])
    }
}

/// The same representation for every `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantFamily(pub Representation);

impl RepFamily for ConstantFamily {
    fn at(&self, _t: f64) -> Result<Representation, RepError> {
        Ok(self.0.clone())
    }
}

/// A finite sum `Σ c_k e^{kt}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentExp {
    pub terms: Vec<(i32, Complex64)>,
}

impl LaurentExp {
    pub fn eval(&self, t: f64) -> Complex64 {
        self.terms.iter().map(|&(k, c)| c * (k as f64 * t).exp()).sum()
    }

    /// Parses `term+term+...`; a term is `c`, `c*E^k` or `E^k`, and `c` is a
    /// real number or `(re,im)`. Negative coefficients are written `+-c`.
    pub fn parse(s: &str) -> Option<Self> {
        let mut terms = Vec::new();
        for term in s.split('+') {
            let term = term.trim();
            let (coef, exp) = match term.split_once("E^") {
                Some((c, k)) => (c.strip_suffix('*').unwrap_or(c), k.parse::<i32>().ok()?),
                None => (term, 0),
            };
            let c = match coef {
                "" => Complex64::new(1.0, 0.0),
                "-" => Complex64::new(-1.0, 0.0),
                _ => match coef.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
                    Some(inner) => {
                        let (re, im) = inner.split_once(',')?;
                        Complex64::new(re.trim().parse().ok()?, im.trim().parse().ok()?)
                    }
                    None => Complex64::new(coef.parse().ok()?, 0.0),
                },
            };
            terms.push((exp, c));
        }
        Some(LaurentExp { terms })
    }
}

/// Generator images whose entries are exponential polynomials in `t`.
///
/// File format, one line per generator: a letter and four entries
/// `p q r s`, each a [`LaurentExp`]; `#` starts a comment. Example:
///
/// ```text
/// a E^1 0 0 E^-1
/// b 0.5*E^1+0.5*E^-1 0.5*E^1+-0.5*E^-1 0.5*E^1+-0.5*E^-1 0.5*E^1+0.5*E^-1
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentFamily {
    pub presentation: Presentation,
    pub entries: Vec<[LaurentExp; 4]>,
}

impl LaurentFamily {
    pub fn parse(text: &str) -> Result<Self, DegenError> {
        let mut rows: Vec<Option<[LaurentExp; 4]>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| DegenError::Parse { line: idx + 1, message };
            let toks: Vec<&str> = line.split_whitespace().collect();
            let letter = match toks[0].chars().collect::<Vec<_>>()[..] {
                [c] if c.is_ascii_lowercase() => Letter::from_char(c).map_err(|e| err(e.to_string()))?,
                _ => return Err(err(format!("expected a generator letter, found {:?}", toks[0]))),
            };
            if toks.len() != 5 {
                return Err(err("expected a letter and four entries".into()));
            }
            let parsed = toks[1..]
                .iter()
                .map(|t| LaurentExp::parse(t).ok_or_else(|| err(format!("bad entry {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let g = letter.generator;
            if rows.len() <= g {
                rows.resize(g + 1, None);
            }
            rows[g] = Some(parsed.try_into().expect("four entries"));
        }
        let entries = rows
            .into_iter()
            .enumerate()
            .map(|(g, r)| {
                r.ok_or_else(|| DegenError::Parse {
                    line: 0,
                    message: format!("missing generator {}", Letter::gen(g).to_char()),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(LaurentFamily { presentation: Presentation::free(entries.len()), entries })
    }
}

impl RepFamily for LaurentFamily {
    fn at(&self, t: f64) -> Result<Representation, RepError> {
        let mats = self
            .entries
            .iter()
            .map(|[p, q, r, s]| Matrix2C::new(p.eval(t), q.eval(t), r.eval(t), s.eval(t)))
            .collect();
        make_rep(self.presentation.clone(), mats)
    }
}

/// Translation lengths over a class list, carrying the scale they were
/// divided by.
#[derive(Debug, Clone, PartialEq)]
pub struct LengthVector {
    pub classes: Arc<ConjugacyClassList>,
    pub values: Vec<f64>,
    pub scale: f64,
}

impl LengthVector {
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn sup_distance(&self, other: &LengthVector) -> Result<f64, DegenError> {
        if self.classes != other.classes {
            return Err(DegenError::ClassListMismatch);
        }
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
    }

    pub fn get(&self, w: &Word) -> Option<f64> {
        self.classes.position(w).map(|i| self.values[i])
    }
}

pub fn length_vector(rep: &Representation, classes: &Arc<ConjugacyClassList>) -> Result<LengthVector, DegenError> {
    if classes.is_empty() {
        return Err(DegenError::EmptyClassList);
    }
    let values = classes
        .iter()
        .map(|w| Ok(classify(&rep.evaluate(w)?)?.translation_length))
        .collect::<Result<Vec<_>, RepError>>()?;
    Ok(LengthVector { classes: Arc::clone(classes), values, scale: 1.0 })
}

/// Divides by the sup-norm. The returned scale is the product of the input
/// scale and that norm, so projectivizing twice changes nothing.
pub fn projectivize(v: &LengthVector) -> Result<LengthVector, DegenError> {
    let sup = v.sup_norm();
    if sup == 0.0 {
        return Err(DegenError::VanishingLengths);
    }
    Ok(LengthVector {
        classes: Arc::clone(&v.classes),
        values: v.values.iter().map(|x| x / sup).collect(),
        scale: v.scale * sup,
    })
}

/// Projectivized length vectors along a family, with successive sup-norm
/// differences.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub t_values: Vec<f64>,
    pub vectors: Vec<LengthVector>,
    pub deltas: Vec<f64>,
}

impl Sweep {
    pub fn last(&self) -> &LengthVector {
        self.vectors.last().expect("sweeps hold at least two vectors")
    }

    /// CSV with header `t,lambda,<class words>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,lambda");
        for w in self.last().classes.iter() {
            write!(out, ",{w}").unwrap();
        }
        out.push('\n');
        for (t, v) in self.t_values.iter().zip(&self.vectors) {
            write!(out, "{},{}", g9(*t), g9(v.scale)).unwrap();
            for x in &v.values {
                write!(out, ",{}", g9(*x)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

pub fn sweep<F: RepFamily + ?Sized>(
    family: &F,
    classes: &Arc<ConjugacyClassList>,
    t_values: &[f64],
) -> Result<Sweep, DegenError> {
    if t_values.len() < 2 {
        return Err(DegenError::TooFewSamples(t_values.len()));
    }
    if let Some(i) = t_values.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(DegenError::NotIncreasing(i + 1));
    }
    let sample = |t: f64| -> Result<LengthVector, DegenError> {
        let rep = family.at(t).map_err(|source| DegenError::Family { t, source })?;
        projectivize(&length_vector(&rep, classes)?)
    };
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(t_values.len());
    let chunk = t_values.len().div_ceil(workers);
    let results: Vec<Result<LengthVector, DegenError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = t_values
            .chunks(chunk)
            .map(|ts| scope.spawn(move || ts.iter().map(|&t| sample(t)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    let vectors = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let deltas = vectors
        .windows(2)
        .map(|w| w[0].sup_distance(&w[1]))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Sweep { t_values: t_values.to_vec(), vectors, deltas })
}

/// Sup-normalized cyclically reduced word lengths: the length function of
/// the free group acting on its Cayley tree.
pub fn cyclic_length_oracle(classes: &ConjugacyClassList) -> Vec<f64> {
    let lens: Vec<f64> = classes.iter().map(|w| canonical_cyclic(w).len() as f64).collect();
    let sup = lens.iter().fold(0.0, |a: f64, &b| a.max(b));
    lens.iter().map(|l| l / sup).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeCheckConfig {
    /// Last Cauchy delta below this counts as converged.
    pub convergence_tol: f64,
    /// Allowed sup distance between the final vector and the oracle.
    pub oracle_tol: f64,
    /// Allowed error in `ℓ(w⁻¹) = ℓ(w)` and `ℓ(wⁿ) = n·ℓ(w)`.
    pub axiom_tol: f64,
}

impl Default for TreeCheckConfig {
    fn default() -> Self {
        TreeCheckConfig { convergence_tol: 1e-2, oracle_tol: 2e-2, axiom_tol: 1e-3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeLimitReport {
    pub cauchy_deltas: Vec<f64>,
    pub converged: bool,
    pub oracle: Vec<f64>,
    pub oracle_distance: f64,
    pub matches_oracle: bool,
    pub symmetry_error: f64,
    pub homogeneity_error: f64,
    pub symmetry_ok: bool,
    pub homogeneity_ok: bool,
    pub passed: bool,
}

impl TreeLimitReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn tree_limit_check(sweep: &Sweep, classes: &ConjugacyClassList) -> TreeLimitReport {
    tree_limit_check_with(sweep, classes, &TreeCheckConfig::default())
}

pub fn tree_limit_check_with(sweep: &Sweep, classes: &ConjugacyClassList, cfg: &TreeCheckConfig) -> TreeLimitReport {
    let last = sweep.last();
    let oracle = cyclic_length_oracle(classes);
    let oracle_distance = last.values.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);

    let mut symmetry_error: f64 = 0.0;
    let mut homogeneity_error: f64 = 0.0;
    for (i, w) in classes.iter().enumerate() {
        let l = last.values[i];
        if let Some(j) = classes.position(&w.inverse()) {
            symmetry_error = symmetry_error.max((last.values[j] - l).abs());
        }
        for n in 2..=classes.max_length().max(2) as u32 {
            if let Some(j) = classes.position(&w.pow(n)) {
                homogeneity_error = homogeneity_error.max((last.values[j] - n as f64 * l).abs());
            }
        }
    }

    let converged = sweep.deltas.last().is_some_and(|&d| d < cfg.convergence_tol);
    let matches_oracle = oracle_distance < cfg.oracle_tol;
    let symmetry_ok = symmetry_error <= cfg.axiom_tol;
    let homogeneity_ok = homogeneity_error <= cfg.axiom_tol;
    TreeLimitReport {
        cauchy_deltas: sweep.deltas.clone(),
        converged,
        oracle,
        oracle_distance,
        matches_oracle,
        symmetry_error,
        homogeneity_error,
        symmetry_ok,
        homogeneity_ok,
        passed: converged && matches_oracle && symmetry_ok && homogeneity_ok,
    }
}
