use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use num_complex::Complex64;

use super::{GroupSpec, LimitError, LimitPoint, LimitPointCloud};
use crate::sl2rep::{Matrix2C, CLASSIFY_TOL};

/// Fixed points of `z ↦ (pz + q)/(rz + s)`: one for parabolic maps, two
/// otherwise, the attracting one first when the map is loxodromic.
pub fn mobius_fixed_points(m: &Matrix2C) -> Result<Vec<LimitPoint>, LimitError> {
    if m.distance_to_pm_identity() <= CLASSIFY_TOL {
        return Err(LimitError::EveryPointFixed);
    }
    let tr = m.trace();
    let root = (tr * tr - 4.0).sqrt();
    let (mu1, mu2) = ((tr + root) / 2.0, (tr - root) / 2.0);
    let (big, small) = if mu1.norm() >= mu2.norm() { (mu1, mu2) } else { (mu2, mu1) };
    // eigenvectors (q, μ − p) and (μ − s, r) span the same line; take the
    // better conditioned one
    let eigen_point = |mu: Complex64| {
        let (u1, v1) = (m.q, mu - m.p);
        let (u2, v2) = (mu - m.s, m.r);
        if u1.norm_sqr() + v1.norm_sqr() >= u2.norm_sqr() + v2.norm_sqr() {
            LimitPoint::from_homogeneous(u1, v1)
        } else {
            LimitPoint::from_homogeneous(u2, v2)
        }
    };
    if (tr - 2.0).norm() <= CLASSIFY_TOL || (tr + 2.0).norm() <= CLASSIFY_TOL {
        return Ok(vec![eigen_point(big)]);
    }
    Ok(vec![eigen_point(big), eigen_point(small)])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnumConfig {
    pub epsilon: f64,
    pub max_depth: usize,
    /// Soft cap on emitted points.
    pub point_cap: usize,
    /// Worker threads for the four top-level subtrees.
    pub threads: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig { epsilon: 1e-3, max_depth: 30, point_cap: 1_000_000, threads: 4 }
    }
}

pub fn enumerate_limit_set(g: &GroupSpec, epsilon: f64, max_depth: usize) -> Result<LimitPointCloud, LimitError> {
    enumerate_limit_set_with(g, &EnumConfig { epsilon, max_depth, ..EnumConfig::default() })
}

struct Walker<'a> {
    // letters a, b, A, B; inverse of i is (i + 2) % 4
    mats: [Matrix2C; 4],
    attractors: [(Complex64, Complex64); 4],
    cfg: &'a EnumConfig,
    emitted: &'a AtomicUsize,
    truncated: &'a AtomicBool,
}

impl Walker<'_> {
    fn descend(&self, m: &Matrix2C, last: usize, depth: usize, out: &mut Vec<LimitPoint>) {
        if self.truncated.load(Ordering::Relaxed) {
            return;
        }
        let mut cands = [[0.0f64; 3]; 3];
        let mut next = [0usize; 3];
        let mut k = 0;
        for h in 0..4 {
            if h == (last + 2) % 4 {
                continue;
            }
            let (u, v) = self.attractors[h];
            cands[k] = LimitPoint::from_homogeneous(m.p * u + m.q * v, m.r * u + m.s * v).to_sphere();
            next[k] = h;
            k += 1;
        }
        let mut diam: f64 = 0.0;
        for i in 0..3 {
            for j in i + 1..3 {
                let d: f64 = (0..3).map(|c| (cands[i][c] - cands[j][c]).powi(2)).sum();
                diam = diam.max(d.sqrt());
            }
        }
        if diam < self.cfg.epsilon || depth >= self.cfg.max_depth {
            let mut c = [0.0; 3];
            for p in &cands {
                for (ci, pi) in c.iter_mut().zip(p) {
                    *ci += pi;
                }
            }
            let norm = c.iter().map(|x| x * x).sum::<f64>().sqrt();
            let centroid = if norm > 0.0 { [c[0] / norm, c[1] / norm, c[2] / norm] } else { cands[0] };
            out.push(LimitPoint::from_sphere(centroid));
            if self.emitted.fetch_add(1, Ordering::Relaxed) + 1 >= self.cfg.point_cap {
                self.truncated.store(true, Ordering::Relaxed);
            }
            return;
        }
        for &h in &next {
            self.descend(&(*m * self.mats[h]), h, depth + 1, out);
        }
    }
}

/// Samples the limit set by depth-first search over reduced words.
///
/// At a node with prefix matrix `M` the candidates are `M·fix⁺(h)` for every
/// letter `h` that does not cancel the last one. When they lie within
/// `epsilon` of each other (chordally), or at `max_depth`, their spherical
/// centroid is emitted and the branch is pruned.
pub fn enumerate_limit_set_with(g: &GroupSpec, cfg: &EnumConfig) -> Result<LimitPointCloud, LimitError> {
    if !(cfg.epsilon > 0.0) || cfg.max_depth == 0 {
        return Err(LimitError::BadParameters);
    }
    let gens = g.generators();
    let fixed = gens.iter().map(mobius_fixed_points).collect::<Result<Vec<_>, _>>()?;
    if gens.len() == 1 {
        return Err(LimitError::Elementary { points: fixed[0].clone() });
    }
    let shared = fixed[0].iter().any(|p| fixed[1].iter().any(|q| p.chordal_distance(q) < 1e-9));
    if shared {
        let mut points: Vec<LimitPoint> = Vec::new();
        for p in fixed.iter().flatten() {
            if points.iter().all(|q| q.chordal_distance(p) >= 1e-9) {
                points.push(*p);
            }
        }
        return Err(LimitError::Elementary { points });
    }

    let (a, b) = (gens[0], gens[1]);
    let mats = [a, b, a.adjugate(), b.adjugate()];
    let attractor = |m: &Matrix2C| -> Result<(Complex64, Complex64), LimitError> {
        Ok(mobius_fixed_points(m)?[0].homogeneous())
    };
    let attractors = [attractor(&mats[0])?, attractor(&mats[1])?, attractor(&mats[2])?, attractor(&mats[3])?];
    let emitted = AtomicUsize::new(0);
    let truncated = AtomicBool::new(false);
    let walker = Walker { mats, attractors, cfg, emitted: &emitted, truncated: &truncated };

    let threads = cfg.threads.clamp(1, 4);
    let mut points = Vec::new();
    let letters = [0usize, 1, 2, 3];
    std::thread::scope(|scope| {
        let walker = &walker;
        let handles: Vec<_> = letters
            .chunks(4usize.div_ceil(threads))
            .map(|chunk| {
                scope.spawn(move || {
                    let mut out = Vec::new();
                    for &first in chunk {
                        walker.descend(&walker.mats[first], first, 1, &mut out);
                    }
                    out
                })
            })
            .collect();
        for h in handles {
            points.extend(h.join().expect("limit set worker panicked"));
        }
    });
    let truncated = truncated.load(Ordering::Relaxed);
    if truncated {
        log::warn!("limit set truncated at {} points", cfg.point_cap);
    }
    Ok(LimitPointCloud::new(points, cfg.epsilon, cfg.max_depth, truncated))
}
