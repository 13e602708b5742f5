use hypernet::qnet::{kron, run_circuit, tensor, AreaState, Gate, TensorState};
use hypernet::Matrix2C;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(rng: &mut ChaCha8Rng) -> AreaState {
    let c = |rng: &mut ChaCha8Rng| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    AreaState::new(c(rng), c(rng)).normalize().unwrap()
}

fn random_su2(rng: &mut ChaCha8Rng) -> Matrix2C {
    let s = random_state(rng);
    Matrix2C::new(s.a, -s.b.conj(), s.b, s.a.conj())
}

fn random_gate(rng: &mut ChaCha8Rng, n: usize) -> Gate {
    match rng.gen_range(0..3) {
        0 => Gate::Not { area: rng.gen_range(0..n) },
        1 => Gate::su2(rng.gen_range(0..n), random_su2(rng)).unwrap(),
        _ => {
            let c = rng.gen_range(0..n);
            let t = (c + rng.gen_range(1..n)) % n;
            Gate::cnot(c, t).unwrap()
        }
    }
}

type Dense = Vec<Vec<Complex64>>;

fn dense_identity(n: usize) -> Dense {
    (0..n).map(|i| (0..n).map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect()
}

fn dense_kron(a: &Dense, b: &Dense) -> Dense {
    let (n, m) = (a.len(), b.len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); n * m]; n * m];
    for i in 0..n * m {
        for j in 0..n * m {
            out[i][j] = a[i / m][j / m] * b[i % m][j % m];
        }
    }
    out
}

fn dense_apply(m: &Dense, v: &[Complex64]) -> Vec<Complex64> {
    m.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

/// Full matrix of a gate on `n` areas, area 0 leftmost in the Kronecker product.
fn dense_gate(g: &Gate, n: usize) -> Dense {
    let one_area = |area: usize, u: Dense| {
        (0..n).fold(dense_identity(1), |acc, k| dense_kron(&acc, &if k == area { u.clone() } else { dense_identity(2) }))
    };
    let c = |x: f64| Complex64::new(x, 0.0);
    match *g {
        Gate::Not { area } => one_area(area, vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]]),
        Gate::Su2 { area, matrix: m } => one_area(area, vec![vec![m.p, m.q], vec![m.r, m.s]]),
        Gate::Cnot { control, target } => {
            // |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ X on the control and target slots
            let p0 = vec![vec![c(1.0), c(0.0)], vec![c(0.0), c(0.0)]];
            let p1 = vec![vec![c(0.0), c(0.0)], vec![c(0.0), c(1.0)]];
            let x = vec![vec![c(0.0), c(1.0)], vec![c(1.0), c(0.0)]];
            let build = |pc: &Dense, xt: &Dense| {
                (0..n).fold(dense_identity(1), |acc, k| {
                    let f = if k == control {
                        pc.clone()
                    } else if k == target {
                        xt.clone()
                    } else {
                        dense_identity(2)
                    };
                    dense_kron(&acc, &f)
                })
            };
            let a = build(&p0, &dense_identity(2));
            let b = build(&p1, &x);
            a.iter().zip(&b).map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect()).collect()
        }
    }
}

#[test]
fn gates_match_dense_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let n = rng.gen_range(2..=4);
        let init: Vec<AreaState> = (0..n).map(|_| random_state(&mut rng)).collect();
        let gates: Vec<Gate> = (0..8).map(|_| random_gate(&mut rng, n)).collect();
        let fast = run_circuit(&init, &gates).unwrap();
        let mut v = kron(&init);
        for g in &gates {
            v = dense_apply(&dense_gate(g, n), &v);
        }
        let slow = TensorState::from_amplitudes(v).unwrap();
        assert!(fast.max_abs_diff(&slow) < 1e-12);
    }
}

#[test]
fn bell_state_by_hand() {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let out = run_circuit(&[AreaState::ZERO, AreaState::ZERO], &[Gate::hadamard(0), Gate::cnot(0, 1).unwrap()]).unwrap();
    let expect = TensorState::from_amplitudes(vec![
        Complex64::new(h, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(h, 0.0),
    ])
    .unwrap();
    assert!(out.phase_distance(&expect) < 1e-12);
}

#[test]
fn hundred_random_gates_on_ten_areas() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let init: Vec<AreaState> = (0..10).map(|_| random_state(&mut rng)).collect();
    let gates: Vec<Gate> = (0..100).map(|_| random_gate(&mut rng, 10)).collect();
    let out = run_circuit(&init, &gates).unwrap();
    assert!((out.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn ten_thousand_gates_keep_the_norm() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let init: Vec<AreaState> = (0..6).map(|_| random_state(&mut rng)).collect();
    let gates: Vec<Gate> = (0..10_000).map(|_| random_gate(&mut rng, 6)).collect();
    let out = run_circuit(&init, &gates).unwrap();
    assert!((out.norm() - 1.0).abs() < 1e-9);
}

proptest! {
    #[test]
    fn each_gate_preserves_norm(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = tensor(&(0..n).map(|_| random_state(&mut rng)).collect::<Vec<_>>()).unwrap();
        for _ in 0..20 {
            let before = s.norm();
            s.apply(&random_gate(&mut rng, n)).unwrap();
            prop_assert!((s.norm() - before).abs() < 1e-12);
        }
    }

    #[test]
    fn not_and_cnot_are_involutions(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = tensor(&(0..n).map(|_| random_state(&mut rng)).collect::<Vec<_>>()).unwrap();
        let c = rng.gen_range(0..n);
        let t = (c + rng.gen_range(1..n)) % n;
        for g in [Gate::Not { area: c }, Gate::cnot(c, t).unwrap()] {
            let mut r = s.clone();
            r.apply(&g).unwrap();
            r.apply(&g).unwrap();
            prop_assert!(r.max_abs_diff(&s) < 1e-12);
        }
    }

    #[test]
    fn disjoint_gates_commute(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = tensor(&(0..n).map(|_| random_state(&mut rng)).collect::<Vec<_>>()).unwrap();
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let gi = Gate::su2(i, random_su2(&mut rng)).unwrap();
        let gj = if rng.gen_bool(0.5) { Gate::Not { area: j } } else { Gate::su2(j, random_su2(&mut rng)).unwrap() };
        let (mut x, mut y) = (s.clone(), s);
        x.apply(&gi).unwrap();
        x.apply(&gj).unwrap();
        y.apply(&gj).unwrap();
        y.apply(&gi).unwrap();
        prop_assert!(x.max_abs_diff(&y) < 1e-12);
    }

    #[test]
    fn tensor_norm_is_multiplicative(
        parts in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0, -5.0f64..5.0), 1..6)
    ) {
        let states: Vec<AreaState> = parts
            .iter()
            .map(|&(a, b, c, d)| AreaState::new(Complex64::new(a, b), Complex64::new(c, d)))
            .collect();
        let norm = kron(&states).iter().map(Complex64::norm_sqr).sum::<f64>().sqrt();
        let product: f64 = states.iter().map(AreaState::norm).product();
        prop_assert!((norm - product).abs() <= 1e-12 * product.max(1.0));
    }
}
