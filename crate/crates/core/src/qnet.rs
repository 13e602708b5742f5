//! Areas as two-level systems and small statevector circuits.
//!
//! Each area carries `a|0⟩ + b|1⟩`. A network of `n` areas is the Kronecker
//! product of its area states, `2ⁿ` amplitudes with area 0 as the most
//! significant bit of the basis index. Areas are 0-based here and 1-based in
//! circuit files.

use std::fmt::Write as _;

use num_complex::Complex64;
use thiserror::Error;

use crate::numfmt::g9;
use crate::sl2rep::Matrix2C;

/// Default cap on the number of areas a circuit may use.
pub const DEFAULT_AREA_CAP: usize = 20;
/// Tolerance on `|a|² + |b|² = 1` for inputs to [`tensor`].
pub const NORM_TOL: f64 = 1e-9;
/// Tolerance on unitarity and unit determinant of SU(2) payloads.
pub const UNITARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QnetError {
    #[error("unnormalizable: state (0, 0)")]
    Unnormalizable,
    #[error("area state {index} has norm {norm}, expected 1")]
    NotNormalized { index: usize, norm: f64 },
    #[error("need at least one area")]
    NoAreas,
    #[error("area {area} out of range for {n_areas} areas")]
    AreaOutOfRange { area: usize, n_areas: usize },
    #[error("SU2 payload is not special unitary (error {0:.3e})")]
    NotSpecialUnitary(f64),
    #[error("CNOT control and target are both area {0}")]
    SameControlTarget(usize),
    #[error("{n_areas} areas exceed the cap of {cap}")]
    TooManyAreas { n_areas: usize, cap: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// `a|0⟩ + b|1⟩`, not necessarily normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaState {
    pub a: Complex64,
    pub b: Complex64,
}

impl AreaState {
    pub const ZERO: AreaState = AreaState { a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0) };
    pub const ONE: AreaState = AreaState { a: Complex64::new(0.0, 0.0), b: Complex64::new(1.0, 0.0) };

    pub fn new(a: Complex64, b: Complex64) -> Self {
        AreaState { a, b }
    }

    pub fn real(a: f64, b: f64) -> Self {
        AreaState::new(Complex64::new(a, 0.0), Complex64::new(b, 0.0))
    }

    pub fn norm(&self) -> f64 {
        self.a.norm().hypot(self.b.norm())
    }

    /// Divides both amplitudes by `√(|a|² + |b|²)`.
    pub fn normalize(&self) -> Result<AreaState, QnetError> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(QnetError::Unnormalizable);
        }
        Ok(AreaState { a: self.a / n, b: self.b / n })
    }
}

/// Kronecker product of the area states in order, without any norm check.
pub fn kron(states: &[AreaState]) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(1.0, 0.0)];
    for s in states {
        amps = amps.iter().flat_map(|&x| [x * s.a, x * s.b]).collect();
    }
    amps
}

#[derive(Debug, Clone, PartialEq)]
pub struct TensorState {
    n_areas: usize,
    amplitudes: Vec<Complex64>,
}

/// Tensor state of normalized area states.
pub fn tensor(states: &[AreaState]) -> Result<TensorState, QnetError> {
    if states.is_empty() {
        return Err(QnetError::NoAreas);
    }
    for (index, s) in states.iter().enumerate() {
        let norm = s.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QnetError::NotNormalized { index, norm });
        }
    }
    Ok(TensorState { n_areas: states.len(), amplitudes: kron(states) })
}

impl TensorState {
    /// Takes amplitudes as given; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, QnetError> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(QnetError::NoAreas);
        }
        Ok(TensorState { n_areas: len.trailing_zeros() as usize, amplitudes })
    }

    pub fn n_areas(&self) -> usize {
        self.n_areas
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
    }

    fn bit(&self, area: usize) -> usize {
        1 << (self.n_areas - 1 - area)
    }

    fn check_area(&self, area: usize) -> Result<(), QnetError> {
        if area >= self.n_areas {
            return Err(QnetError::AreaOutOfRange { area, n_areas: self.n_areas });
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<(), QnetError> {
        gate.validate()?;
        match *gate {
            Gate::Not { area } => {
                self.check_area(area)?;
                let bit = self.bit(area);
                for i in (0..self.amplitudes.len()).filter(|i| i & bit == 0) {
                    self.amplitudes.swap(i, i | bit);
                }
            }
            Gate::Su2 { area, matrix: m } => {
                self.check_area(area)?;
                let bit = self.bit(area);
                for i in (0..self.amplitudes.len()).filter(|i| i & bit == 0) {
                    let (x, y) = (self.amplitudes[i], self.amplitudes[i | bit]);
                    self.amplitudes[i] = m.p * x + m.q * y;
                    self.amplitudes[i | bit] = m.r * x + m.s * y;
                }
            }
            Gate::Cnot { control, target } => {
                self.check_area(control)?;
                self.check_area(target)?;
                let (c, t) = (self.bit(control), self.bit(target));
                for i in (0..self.amplitudes.len()).filter(|i| i & c != 0 && i & t == 0) {
                    self.amplitudes.swap(i, i | t);
                }
            }
        }
        Ok(())
    }

    /// Largest amplitude difference.
    pub fn max_abs_diff(&self, other: &TensorState) -> f64 {
        if self.amplitudes.len() != other.amplitudes.len() {
            return f64::INFINITY;
        }
        self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    /// Distance after removing the best global phase `e^{iθ}` from `other`.
    pub fn phase_distance(&self, other: &TensorState) -> f64 {
        if self.amplitudes.len() != other.amplitudes.len() {
            return f64::INFINITY;
        }
        let overlap: Complex64 = self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| y.conj() * x).sum();
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
        self.amplitudes.iter().zip(&other.amplitudes).map(|(x, y)| (x - phase * y).norm()).fold(0.0, f64::max)
    }

    /// CSV `basis_index,re,im` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("basis_index,re,im\n");
        for (i, z) in self.amplitudes.iter().enumerate() {
            writeln!(out, "{i},{},{}", g9(z.re), g9(z.im)).unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Not { area: usize },
    Su2 { area: usize, matrix: Matrix2C },
    Cnot { control: usize, target: usize },
}

impl Gate {
    pub fn su2(area: usize, matrix: Matrix2C) -> Result<Gate, QnetError> {
        let g = Gate::Su2 { area, matrix };
        g.validate()?;
        Ok(g)
    }

    pub fn cnot(control: usize, target: usize) -> Result<Gate, QnetError> {
        let g = Gate::Cnot { control, target };
        g.validate()?;
        Ok(g)
    }

    /// `i·H`, the Hadamard gate scaled into SU(2).
    pub fn hadamard(area: usize) -> Gate {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (p, m) = (Complex64::new(0.0, h), Complex64::new(0.0, -h));
        Gate::Su2 { area, matrix: Matrix2C::new(p, p, p, m) }
    }

    fn validate(&self) -> Result<(), QnetError> {
        match *self {
            Gate::Su2 { matrix: m, .. } => {
                let err = su2_error(&m);
                if err.is_nan() || err > UNITARY_TOL {
                    return Err(QnetError::NotSpecialUnitary(err));
                }
            }
            Gate::Cnot { control, target } if control == target => {
                return Err(QnetError::SameControlTarget(control));
            }
            _ => {}
        }
        Ok(())
    }
}

/// Largest entry of `|M M* − I|` together with `|det M − 1|`.
fn su2_error(m: &Matrix2C) -> f64 {
    let adj = Matrix2C::new(m.p.conj(), m.r.conj(), m.q.conj(), m.s.conj());
    let prod = *m * adj;
    prod.max_abs_diff(&Matrix2C::IDENTITY).max((m.det() - 1.0).norm())
}

pub fn apply_gate(mut state: TensorState, gate: &Gate) -> Result<TensorState, QnetError> {
    state.apply(gate)?;
    Ok(state)
}

pub fn run_circuit(initial: &[AreaState], gates: &[Gate]) -> Result<TensorState, QnetError> {
    run_circuit_with_cap(initial, gates, DEFAULT_AREA_CAP)
}

pub fn run_circuit_with_cap(initial: &[AreaState], gates: &[Gate], cap: usize) -> Result<TensorState, QnetError> {
    if initial.len() > cap {
        return Err(QnetError::TooManyAreas { n_areas: initial.len(), cap });
    }
    let mut state = tensor(initial)?;
    for g in gates {
        state.apply(g)?;
    }
    Ok(state)
}

/// A parsed circuit file.
///
/// Lines are `areas <n>`, `init <area> <a_re> <a_im> <b_re> <b_im>`,
/// `NOT <area>`, `SU2 <area> <p_re> <p_im> <q_re> <q_im> <r_re> <r_im> <s_re> <s_im>`
/// and `CNOT <control> <target>`, with 1-based areas and `#` comments.
/// Without an `areas` line the count is the largest area mentioned.
/// Initial states are normalized on read; areas never initialized start
/// in `|0⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub initial: Vec<AreaState>,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn parse(text: &str) -> Result<Circuit, QnetError> {
        let mut declared = None;
        let mut inits: Vec<(usize, AreaState, usize)> = Vec::new();
        let mut gates = Vec::new();
        let mut max_area = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |message: String| QnetError::Parse { line, message };
            let mut tok = content.split_whitespace();
            let keyword = tok.next().unwrap_or_default();
            let rest: Vec<&str> = tok.collect();
            let area = |s: &str| -> Result<usize, QnetError> {
                match s.parse::<usize>() {
                    Ok(a) if a >= 1 => Ok(a - 1),
                    _ => Err(err(format!("bad area {s:?} (areas are numbered from 1)"))),
                }
            };
            let reals = |s: &[&str]| -> Result<Vec<f64>, QnetError> {
                s.iter().map(|t| t.parse::<f64>().map_err(|_| err(format!("bad number {t:?}")))).collect()
            };
            let arity = |n: usize| {
                if rest.len() == n {
                    Ok(())
                } else {
                    Err(err(format!("{keyword} takes {n} arguments, got {}", rest.len())))
                }
            };
            match keyword {
                "areas" => {
                    arity(1)?;
                    declared = Some(rest[0].parse::<usize>().map_err(|_| err(format!("bad count {:?}", rest[0])))?);
                }
                "init" => {
                    arity(5)?;
                    let a = area(rest[0])?;
                    let v = reals(&rest[1..])?;
                    let s = AreaState::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]));
                    let s = s.normalize().map_err(|e| err(e.to_string()))?;
                    if inits.iter().any(|(b, _, _)| *b == a) {
                        return Err(err(format!("area {} initialized twice", a + 1)));
                    }
                    max_area = max_area.max(a + 1);
                    inits.push((a, s, line));
                }
                "NOT" => {
                    arity(1)?;
                    let a = area(rest[0])?;
                    max_area = max_area.max(a + 1);
                    gates.push((Gate::Not { area: a }, line));
                }
                "SU2" => {
                    arity(9)?;
                    let a = area(rest[0])?;
                    let v = reals(&rest[1..])?;
                    let c = |k: usize| Complex64::new(v[2 * k], v[2 * k + 1]);
                    let g = Gate::su2(a, Matrix2C::new(c(0), c(1), c(2), c(3))).map_err(|e| err(e.to_string()))?;
                    max_area = max_area.max(a + 1);
                    gates.push((g, line));
                }
                "CNOT" => {
                    arity(2)?;
                    let (c, t) = (area(rest[0])?, area(rest[1])?);
                    let g = Gate::cnot(c, t).map_err(|e| err(e.to_string()))?;
                    max_area = max_area.max(c.max(t) + 1);
                    gates.push((g, line));
                }
                other => return Err(err(format!("unknown instruction {other:?}"))),
            }
        }
        let n = match declared {
            Some(n) if n < max_area => {
                return Err(QnetError::AreaOutOfRange { area: max_area - 1, n_areas: n });
            }
            Some(n) => n,
            None => max_area,
        };
        if n == 0 {
            return Err(QnetError::NoAreas);
        }
        let mut initial = vec![AreaState::ZERO; n];
        for (a, s, _) in inits {
            initial[a] = s;
        }
        Ok(Circuit { initial, gates: gates.into_iter().map(|(g, _)| g).collect() })
    }

    pub fn n_areas(&self) -> usize {
        self.initial.len()
    }

    pub fn run(&self, cap: usize) -> Result<TensorState, QnetError> {
        run_circuit_with_cap(&self.initial, &self.gates, cap)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn amps(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn normalize_examples() {
        let s = AreaState::real(3.0, 4.0).normalize().unwrap();
        assert!((s.a.re - 0.6).abs() < 1e-15 && (s.b.re - 0.8).abs() < 1e-15);
        assert_eq!(AreaState::real(1.0, 0.0).normalize().unwrap(), AreaState::ZERO);
        assert_eq!(AreaState::real(0.0, 0.0).normalize().unwrap_err(), QnetError::Unnormalizable);
        let z = AreaState::new(Complex64::new(0.0, 2.0), Complex64::new(0.0, 0.0)).normalize().unwrap();
        assert_eq!(z.a, Complex64::new(0.0, 1.0));
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor(&[AreaState::ZERO, AreaState::ZERO]).unwrap().amplitudes(), amps(&[1.0, 0.0, 0.0, 0.0]));
        assert_eq!(tensor(&[AreaState::ONE]).unwrap().amplitudes(), amps(&[0.0, 1.0]));
        let plus = AreaState::real(FRAC_1_SQRT_2, FRAC_1_SQRT_2);
        assert_eq!(
            tensor(&[plus, AreaState::ZERO]).unwrap().amplitudes(),
            amps(&[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0])
        );
        assert!(matches!(tensor(&[AreaState::real(1.0, 1.0)]), Err(QnetError::NotNormalized { index: 0, .. })));
        assert_eq!(tensor(&[]).unwrap_err(), QnetError::NoAreas);
    }

    #[test]
    fn not_and_cnot() {
        let s = AreaState::real(0.6, 0.8);
        let out = apply_gate(tensor(&[s]).unwrap(), &Gate::Not { area: 0 }).unwrap();
        assert_eq!(out.amplitudes(), amps(&[0.8, 0.6]));
        let cnot = Gate::cnot(0, 1).unwrap();
        let out = apply_gate(tensor(&[AreaState::ONE, AreaState::ZERO]).unwrap(), &cnot).unwrap();
        assert_eq!(out.amplitudes(), amps(&[0.0, 0.0, 0.0, 1.0]));
        let out = apply_gate(tensor(&[AreaState::ZERO, AreaState::ZERO]).unwrap(), &cnot).unwrap();
        assert_eq!(out.amplitudes(), amps(&[1.0, 0.0, 0.0, 0.0]));
    }

    #[test]
    fn gate_validation() {
        assert_eq!(Gate::cnot(1, 1).unwrap_err(), QnetError::SameControlTarget(1));
        assert!(matches!(Gate::su2(0, Matrix2C::real(2.0, 0.0, 0.0, 0.5)), Err(QnetError::NotSpecialUnitary(_))));
        // unitary but det −1
        assert!(Gate::su2(0, Matrix2C::real(0.0, 1.0, 1.0, 0.0)).is_err());
        assert!(Gate::su2(0, Matrix2C::real(0.0, -1.0, 1.0, 0.0)).is_ok());
        let mut s = tensor(&[AreaState::ZERO]).unwrap();
        assert_eq!(s.apply(&Gate::Not { area: 1 }).unwrap_err(), QnetError::AreaOutOfRange { area: 1, n_areas: 1 });
        assert!(s.apply(&Gate::Su2 { area: 0, matrix: Matrix2C::real(1.0, 1.0, 0.0, 1.0) }).is_err());
    }

    #[test]
    fn bell_circuit() {
        let out = run_circuit(&[AreaState::ZERO, AreaState::ZERO], &[Gate::hadamard(0), Gate::cnot(0, 1).unwrap()])
            .unwrap();
        let bell = TensorState::from_amplitudes(amps(&[FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2])).unwrap();
        assert!(out.phase_distance(&bell) < 1e-12);
        assert!(out.max_abs_diff(&bell) > 0.5);
    }

    #[test]
    fn cap_is_enforced() {
        let init = vec![AreaState::ZERO; 3];
        assert_eq!(run_circuit_with_cap(&init, &[], 2).unwrap_err(), QnetError::TooManyAreas { n_areas: 3, cap: 2 });
        assert_eq!(run_circuit(&init, &[]).unwrap(), tensor(&init).unwrap());
    }

    #[test]
    fn circuit_file() {
        let text = "# bell\ninit 1 1 0 0 0\nSU2 1 0 0.7071067811865476 0 0.7071067811865476 0 0.7071067811865476 0 -0.7071067811865476\nCNOT 1 2\n";
        let c = Circuit::parse(text).unwrap();
        assert_eq!(c.n_areas(), 2);
        let out = c.run(DEFAULT_AREA_CAP).unwrap();
        assert!((out.amplitudes()[3].im - FRAC_1_SQRT_2).abs() < 1e-12);
        assert_eq!(out.to_csv().lines().next(), Some("basis_index,re,im"));
        assert_eq!(out.to_csv().lines().count(), 5);

        let c = Circuit::parse("areas 3\ninit 2 3 0 4 0\nNOT 3\n").unwrap();
        assert_eq!(c.initial[1], AreaState::real(0.6, 0.8));
        assert_eq!(c.initial[0], AreaState::ZERO);

        for bad in ["NOT 0", "CNOT 1 1", "init 1 0 0 0 0", "FOO 1", "NOT 1 2", "areas 1\nNOT 2", "SU2 1 1 0 0 0 0 0 2 0", ""] {
            assert!(Circuit::parse(bad).is_err(), "{bad:?}");
        }
        match Circuit::parse("NOT 1\nNOT x\n") {
            Err(QnetError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
