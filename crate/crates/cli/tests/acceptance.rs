//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::fs;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hypernet::degeneration::{sweep, tree_limit_check, SchottkyFamily};
use hypernet::dessin::{build_dessin, Permutation};
use hypernet::fpgroup::{enumerate_classes, Letter, Word};
use hypernet::limitset::{
    box_dimension, circle_deviation, enumerate_limit_set, one_sided_distance, render, GroupSpec, LimitPoint,
    LimitPointCloud, MarkovRoot, Window,
};
use hypernet::qnet::{run_circuit, AreaState, Gate, TensorState};
use hypernet::sl2rep::{arccosh_length, classify, eigenvalue_length, moduli_point, IsometryKind};
use hypernet::{morgan_shalen_vector, Matrix2C, Representation};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.gen_range(1..=max_len);
    Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(0..2), rng.gen_bool(0.5))))
}

fn random_rep(rng: &mut ChaCha8Rng) -> Representation {
    Representation::free(vec![Matrix2C::random_sl2(rng, 1.0), Matrix2C::random_sl2(rng, 1.0)]).unwrap()
}

/// Error relative to `max(1, |scale|)`.
fn rel(err: f64, scale: f64) -> f64 {
    err / scale.abs().max(1.0)
}

fn trace_identities() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let rep = random_rep(&mut rng);
        let (u, v) = (random_word(&mut rng, 4), random_word(&mut rng, 4));
        let chi = |w: &Word| rep.character(w).unwrap();
        let (cu, cv) = (chi(&u), chi(&v));
        let lhs = chi(&u.concat(&v)) + chi(&u.concat(&v.inverse()));
        worst = worst.max(rel((lhs - cu * cv).norm(), (cu * cv).norm()));
        worst = worst.max(rel((chi(&u.inverse()) - cu).norm(), cu.norm()));
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        worst <= 1e-8 && secs < 5.0,
        format!("1000 reps and word pairs, max scaled error {worst:.2e} (tol 1e-8), {secs:.3} s (limit 5 s)"),
    )
}

fn gauge_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let classes = enumerate_classes(2, 3).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let rep = random_rep(&mut rng);
        let g = Matrix2C::random_sl2(&mut rng, 1.0);
        let conj = rep.conjugate(&g);
        for w in classes.iter() {
            let (c1, c2) = (rep.character(w).unwrap(), conj.character(w).unwrap());
            worst = worst.max(rel((c1 - c2).norm(), c1.norm()));
            let l1 = classify(&rep.evaluate(w).unwrap()).unwrap().translation_length;
            let l2 = classify(&conj.evaluate(w).unwrap()).unwrap().translation_length;
            worst = worst.max(rel((l1 - l2).abs(), l1));
        }
        let t1 = morgan_shalen_vector(&rep, &classes).unwrap();
        let t2 = morgan_shalen_vector(&conj, &classes).unwrap();
        for (a, b) in t1.iter().zip(&t2) {
            worst = worst.max(rel((a - b).abs(), *a));
        }
        let (m1, m2) = (moduli_point(&rep, None).unwrap(), moduli_point(&conj, None).unwrap());
        let scale = m1.traces.iter().map(|z| z.norm()).fold(1.0, f64::max);
        worst = worst.max(rel(m1.distance(&m2), scale));
    }
    outcome(
        worst <= 1e-8,
        format!(
            "1000 conjugators, {} classes: characters, theta, lengths, moduli points; max scaled error {worst:.2e} (tol 1e-8)",
            classes.len()
        ),
    )
}

fn length_formulas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut formula, mut power): (f64, f64) = (0.0, 0.0);
    let mut count = 0;
    while count < 1000 {
        let m = Matrix2C::random_sl2(&mut rng, 2.0);
        let class = classify(&m).unwrap();
        if class.kind != IsometryKind::Loxodromic {
            continue;
        }
        count += 1;
        let tr = m.trace();
        formula = formula.max((eigenvalue_length(tr) - arccosh_length(tr)).abs());
        let mut mn = m;
        for n in 2..=5 {
            mn = mn * m;
            let ln = classify(&mn).unwrap().translation_length;
            power = power.max((ln - n as f64 * class.translation_length).abs());
        }
    }
    outcome(
        formula <= 1e-8 && power <= 1e-6,
        format!("1000 loxodromics: formula gap {formula:.2e} (tol 1e-8), power gap {power:.2e} for n<=5 (tol 1e-6)"),
    )
}

fn morgan_shalen() -> Outcome {
    let start = Instant::now();
    let classes = Arc::new(enumerate_classes(2, 4).unwrap());
    let sw = sweep(&SchottkyFamily::default(), &classes, &[10.0, 20.0]).unwrap();
    let report = tree_limit_check(&sw, &classes);
    let secs = start.elapsed().as_secs_f64();
    let cauchy = sw.deltas[0];
    outcome(
        cauchy < 0.01 && report.oracle_distance < 0.02 && secs < 10.0,
        format!(
            "Schottky, {} classes up to length 4: sup distance t=10 vs t=20 {:.4} (tol 0.01), t=20 vs cyclic-length oracle {:.4} (tol 0.02), {secs:.3} s (limit 10 s)",
            classes.len(),
            cauchy,
            report.oracle_distance
        ),
    )
}

fn timed_cloud(g: &GroupSpec) -> (LimitPointCloud, f64) {
    let start = Instant::now();
    let cloud = enumerate_limit_set(g, 1e-3, 30).unwrap();
    render(&cloud, 800, 800, &Window::default()).unwrap();
    (cloud, start.elapsed().as_secs_f64())
}

fn fuchsian_separation() -> Outcome {
    let c = |re: f64| Complex64::new(re, 0.0);
    let (fuchs, t1) = timed_cloud(&GroupSpec::from_traces(c(3.0), c(3.0), c(3.0)).unwrap());
    let bent_group = GroupSpec::from_trace_pair(Complex64::new(3.0, 1.0), c(3.0), MarkovRoot::Smaller).unwrap();
    let (bent, t2) = timed_cloud(&bent_group);
    let (dev_f, dev_b) = (circle_deviation(&fuchs).unwrap(), circle_deviation(&bent).unwrap());
    let (dim_f, dim_b) = (box_dimension(&fuchs).unwrap(), box_dimension(&bent).unwrap());
    let circle: Vec<LimitPoint> = (0..10_000)
        .map(|k| LimitPoint::finite(Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 10_000.0)))
        .collect();
    let dim_c = box_dimension(&LimitPointCloud::new(circle, 0.0, 0, false)).unwrap();
    let secs = t1.max(t2);
    outcome(
        dev_f < 1e-3 && dev_b > 1e-2 && dim_b >= dim_f + 0.02 && (dim_c - 1.0).abs() <= 0.05 && secs < 60.0,
        format!(
            "(3,3,3) deviation {dev_f:.2e} (< 1e-3); (3+i,3,smaller root) deviation {dev_b:.3} (> 1e-2), box dimension {dim_b:.4} vs {dim_f:.4} (gap >= 0.02); circle benchmark {dim_c:.4} (1 +- 0.05); slowest render {secs:.3} s (limit 60 s)"
        ),
    )
}

fn limit_set_invariance() -> Outcome {
    let c = |re: f64| Complex64::new(re, 0.0);
    let eps = 1e-3;
    let mut worst: f64 = 0.0;
    let mut parts = Vec::new();
    for (name, g) in [
        ("(3,3,3)", GroupSpec::from_traces(c(3.0), c(3.0), c(3.0)).unwrap()),
        (
            "(3+0.2i,3,smaller)",
            GroupSpec::from_trace_pair(Complex64::new(3.0, 0.2), c(3.0), MarkovRoot::Smaller).unwrap(),
        ),
    ] {
        let cloud = enumerate_limit_set(&g, eps, 30).unwrap();
        let ratios: Vec<f64> =
            g.generators().iter().map(|m| one_sided_distance(&cloud.mapped(m), &cloud.points) / eps).collect();
        worst = ratios.iter().fold(worst, |a, &b| a.max(b));
        parts.push(format!("{name} a {:.2}, b {:.2}", ratios[0], ratios[1]));
    }
    outcome(
        worst < 5.0,
        format!("eps 1e-3, depth 30, one-sided distance / eps: {} (limit 5)", parts.join("; ")),
    )
}

fn brute_cycles(p: &Permutation) -> usize {
    (0..p.len())
        .filter(|&x| {
            let mut y = p.apply(x);
            while y != x {
                if y < x {
                    return false;
                }
                y = p.apply(y);
            }
            true
        })
        .count()
}

fn dessin_euler() -> Outcome {
    let p = |s: &str, n| Permutation::parse(s, Some(n)).unwrap();
    let examples = [
        ((p("()", 1), p("()", 1)), (2, 1, 1, 0)),
        ((p("(1 2)", 2), p("()", 2)), (3, 2, 1, 0)),
        ((p("(1 2 3)", 3), p("(1 2 3)", 3)), (2, 3, 1, 1)),
    ];
    let mut ok = true;
    for ((a, b), expect) in examples {
        let d = build_dessin(a, b).unwrap();
        ok &= (d.n_vertices(), d.n_darts(), d.faces().len(), d.genus()) == expect;
    }
    let examples_ok = ok;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut fuzzed = 0;
    while fuzzed < 1000 {
        let n = rng.gen_range(1..=9);
        let mut perm = || {
            let mut v: Vec<usize> = (0..n).collect();
            v.shuffle(&mut rng);
            Permutation::new(v).unwrap()
        };
        let (a, b) = (perm(), perm());
        let Ok(d) = build_dessin(a.clone(), b.clone()) else { continue };
        fuzzed += 1;
        let v = brute_cycles(&a) + brute_cycles(&b);
        let f = brute_cycles(&a.compose(&b));
        let chi = v as i64 - n as i64 + f as i64;
        ok &= d.n_vertices() == v && d.faces().len() == f && chi == 2 - 2 * d.genus() as i64;
    }
    outcome(
        ok,
        format!("index-1, index-2, torus examples exact: {examples_ok}; {fuzzed} random transitive pairs (n <= 9) match brute-force cycle counts with integral genus"),
    )
}

fn quantum_net() -> Outcome {
    let start = Instant::now();
    let basis = |bits: &[bool]| -> Vec<AreaState> {
        bits.iter().map(|&b| if b { AreaState::ONE } else { AreaState::ZERO }).collect()
    };
    let index_of = |s: &TensorState| -> Option<usize> {
        let amps = s.amplitudes();
        let hot: Vec<usize> = (0..amps.len()).filter(|&i| amps[i] != Complex64::new(0.0, 0.0)).collect();
        (hot.len() == 1 && amps[hot[0]] == Complex64::new(1.0, 0.0)).then(|| hot[0])
    };
    let mut tables = true;
    for x in [false, true] {
        let out = run_circuit(&basis(&[x]), &[Gate::Not { area: 0 }]).unwrap();
        tables &= index_of(&out) == Some(usize::from(!x));
    }
    for (c, t) in [(false, false), (false, true), (true, false), (true, true)] {
        let out = run_circuit(&basis(&[c, t]), &[Gate::cnot(0, 1).unwrap()]).unwrap();
        let expect = usize::from(c) * 2 + usize::from(t ^ c);
        tables &= index_of(&out) == Some(expect);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut drift: f64 = 0.0;
    for _ in 0..10 {
        let init: Vec<AreaState> = (0..10)
            .map(|_| {
                let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                AreaState::new(c(), c()).normalize().unwrap()
            })
            .collect();
        let gates: Vec<Gate> = (0..100)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    let mut c = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    let s = AreaState::new(c(), c()).normalize().unwrap();
                    Gate::su2(rng.gen_range(0..10), Matrix2C::new(s.a, -s.b.conj(), s.b, s.a.conj())).unwrap()
                } else {
                    let ctl = rng.gen_range(0..10);
                    Gate::cnot(ctl, (ctl + rng.gen_range(1..10)) % 10).unwrap()
                }
            })
            .collect();
        drift = drift.max((run_circuit(&init, &gates).unwrap().norm() - 1.0).abs());
    }
    let bell = run_circuit(&basis(&[false, false]), &[Gate::hadamard(0), Gate::cnot(0, 1).unwrap()]).unwrap();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let expect = TensorState::from_amplitudes(
        [h, 0.0, 0.0, h].iter().map(|&x| Complex64::new(x, 0.0)).collect(),
    )
    .unwrap();
    let bell_err = bell.phase_distance(&expect);
    let secs = start.elapsed().as_secs_f64();
    outcome(
        tables && drift <= 1e-9 && bell_err <= 1e-12 && secs < 1.0,
        format!(
            "NOT/CNOT truth tables exact: {tables}; 10 random 100-gate circuits on 10 areas, norm drift {drift:.2e} (tol 1e-9); Bell error up to phase {bell_err:.2e} (tol 1e-12); {secs:.3} s (limit 1 s)"
        ),
    )
}

fn cli_determinism() -> Outcome {
    let dir = tempfile::TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("rep.txt"), "generators 2\na 2,0 1,0 1,0 1,0\nb 1,0 0,1 0,1 0,0\n").unwrap();
    fs::write(d.join("bell.qc"), "init 1 3 0 4 0\nNOT 2\nCNOT 1 2\n").unwrap();
    let p = |name: &str| d.join(name).to_str().unwrap().to_string();
    let runs: Vec<(Vec<String>, Vec<&str>)> = vec![
        (
            vec!["limitset", "--traces", "3+0.2i,3", "--root", "smaller", "--eps", "2e-3"]
                .into_iter()
                .map(String::from)
                .chain(["--out".into(), p("lim.ppm"), "--cloud".into(), p("lim.csv")])
                .collect(),
            vec!["lim.ppm", "lim.csv"],
        ),
        (
            vec!["degenerate".into(), "--t".into(), "5,10,20".into(), "--out".into(), p("deg.csv")],
            vec!["deg.csv"],
        ),
        (
            vec!["character".into(), "--rep".into(), p("rep.txt"), "--max-len".into(), "3".into(), "--seed".into(), "4".into(), "--out".into(), p("chi.csv")],
            vec!["chi.csv"],
        ),
        (
            vec!["dessin".into(), "--subgroup".into(), "aa,bb,ab,ba".into(), "--dot".into(), p("d.dot"), "--json".into(), p("d.json")],
            vec!["d.dot", "d.json"],
        ),
        (vec!["qnet".into(), "--circuit".into(), p("bell.qc"), "--out".into(), p("q.csv")], vec!["q.csv"]),
    ];
    let mut ok = true;
    let mut checked = Vec::new();
    for (args, files) in runs {
        let mut copies = Vec::new();
        for _ in 0..2 {
            let status = Command::new(env!("CARGO_BIN_EXE_hypernet")).args(&args).output().unwrap().status;
            ok &= status.success();
            copies.push(files.iter().map(|f| fs::read(d.join(f)).unwrap_or_default()).collect::<Vec<_>>());
            for f in &files {
                let _ = fs::remove_file(d.join(f));
            }
        }
        ok &= copies[0] == copies[1] && copies[0].iter().all(|c| !c.is_empty());
        checked.extend(files);
    }
    outcome(ok, format!("two identical runs each, byte-identical outputs: {}", checked.join(", ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("trace identities", trace_identities),
        ("conjugation gauge invariance", gauge_invariance),
        ("length formula cross-check", length_formulas),
        ("Morgan-Shalen convergence", morgan_shalen),
        ("Fuchsian/fractal separation", fuchsian_separation),
        ("limit-set group invariance", limit_set_invariance),
        ("dessin Euler suite", dessin_euler),
        ("quantum-net suite", quantum_net),
        ("CLI determinism", cli_determinism),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} criterion {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, k + 1, name, o.detail);
    }
    println!("acceptance: {}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
