use std::collections::{HashMap, HashSet};

use num_complex::Complex64;

use super::{LimitError, LimitPoint, LimitPointCloud};

const MIN_FIT_POINTS: usize = 10;
const MIN_BOX_POINTS: usize = 1000;
/// Fitted radii beyond this multiple of the cloud extent count as a line.
const LINE_RADIUS_RATIO: f64 = 1e6;

fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            let pivot_row = a[col];
            for (x, p) in a[row].iter_mut().zip(pivot_row).skip(col) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let tail: f64 = (row + 1..3).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// Max radial deviation of a least-squares (algebraic) circle fit, divided by
/// the fitted radius. Nearly straight clouds fall back to a total least
/// squares line; the result is then the max distance to the line divided by
/// the cloud's extent along it.
pub fn circle_deviation(cloud: &LimitPointCloud) -> Result<f64, LimitError> {
    let pts = cloud.plane_points();
    if pts.len() < MIN_FIT_POINTS {
        return Err(LimitError::TooFewPoints { needed: MIN_FIT_POINTS, got: pts.len() });
    }
    let n = pts.len() as f64;
    let mean = pts.iter().sum::<Complex64>() / n;
    let scale = pts.iter().map(|p| (p - mean).norm()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Ok(0.0);
    }
    let local: Vec<Complex64> = pts.iter().map(|p| (p - mean) / scale).collect();

    // x² + y² + Dx + Ey + F = 0
    let mut ata = [[0.0; 3]; 3];
    let mut atb = [0.0; 3];
    for p in &local {
        let row = [p.re, p.im, 1.0];
        let rhs = -p.norm_sqr();
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * rhs;
        }
    }
    if let Some([d, e, f]) = solve3(ata, atb) {
        let center = Complex64::new(-d / 2.0, -e / 2.0);
        let r2 = center.norm_sqr() - f;
        if r2 > 0.0 && r2.sqrt() < LINE_RADIUS_RATIO {
            let r = r2.sqrt();
            let dev = local.iter().map(|p| ((p - center).norm() - r).abs()).fold(0.0, f64::max);
            return Ok(dev / r);
        }
    }

    // principal axis of the centered cloud
    let (sxx, syy, sxy) = local
        .iter()
        .fold((0.0, 0.0, 0.0), |(a, b, c), p| (a + p.re * p.re, b + p.im * p.im, c + p.re * p.im));
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let dir = Complex64::from_polar(1.0, theta);
    let along = local.iter().map(|p| (p * dir.conj()).re);
    let (lo, hi) = along.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    let dev = local.iter().map(|p| (p * dir.conj()).im.abs()).fold(0.0, f64::max);
    Ok(if hi > lo { dev / (hi - lo) } else { 0.0 })
}

/// Box-counting dimension of the finite part of the cloud.
///
/// Cells of side `δ_k = δ₀·2^−k` are counted on a grid anchored at the lower
/// left of the bounding box, with `δ₀` a quarter of the larger side; each
/// count is the least over four half-cell shifts of the grid. Scales
/// are used while the occupied-cell count stays at or below an eighth of the
/// point count, where sampling gaps do not yet show; the estimate is the
/// least-squares slope of `log N(δ)` against `log(1/δ)`.
pub fn box_dimension(cloud: &LimitPointCloud) -> Result<f64, LimitError> {
    let pts = cloud.plane_points();
    if pts.len() < MIN_BOX_POINTS {
        return Err(LimitError::TooFewPoints { needed: MIN_BOX_POINTS, got: pts.len() });
    }
    let (mut lo, mut hi) = (pts[0], pts[0]);
    for p in &pts {
        lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let extent = (hi.re - lo.re).max(hi.im - lo.im);
    if !(extent > 0.0) {
        return Err(LimitError::TooFewScales);
    }
    let limit = pts.len() / 8;
    let mut samples = Vec::new();
    // slightly widened so the far edge of the box stays inside 4·2^k cells
    let mut delta = extent * (1.0 + 1e-9) / 4.0;
    loop {
        let count = |shift: (f64, f64)| {
            pts.iter()
                .map(|p| {
                    (
                        ((p.re - lo.re) / delta + shift.0).floor() as i64,
                        ((p.im - lo.im) / delta + shift.1).floor() as i64,
                    )
                })
                .collect::<HashSet<_>>()
                .len()
        };
        let cells = [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)].into_iter().map(count).min().unwrap_or(0);
        if cells > limit {
            break;
        }
        samples.push(((1.0 / delta).ln(), (cells as f64).ln()));
        delta /= 2.0;
    }
    if samples.len() < 3 {
        return Err(LimitError::TooFewScales);
    }
    let n = samples.len() as f64;
    let mx = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let my = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let sxy: f64 = samples.iter().map(|s| (s.0 - mx) * (s.1 - my)).sum();
    let sxx: f64 = samples.iter().map(|s| (s.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

/// `max over a of min over b` chordal distance.
pub fn one_sided_distance(from: &[LimitPoint], to: &[LimitPoint]) -> f64 {
    if from.is_empty() {
        return 0.0;
    }
    if to.is_empty() {
        return f64::INFINITY;
    }
    let targets: Vec<[f64; 3]> = to.iter().map(LimitPoint::to_sphere).collect();
    // grid cell ~ typical spacing keeps the 27-cell search cheap
    let cell = (2.0 / (targets.len() as f64).sqrt()).max(1e-9);
    let key = |p: &[f64; 3]| {
        [(p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64, (p[2] / cell).floor() as i64]
    };
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    for (i, p) in targets.iter().enumerate() {
        grid.entry(key(p)).or_default().push(i);
    }
    let dist = |a: &[f64; 3], b: &[f64; 3]| ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
    let mut worst: f64 = 0.0;
    for p in from.iter().map(LimitPoint::to_sphere) {
        let k = key(&p);
        let mut best = f64::INFINITY;
        let mut ring: i64 = 0;
        // widen the search until a hit is closer than the searched radius
        loop {
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    for dz in -ring..=ring {
                        if dx.abs().max(dy.abs()).max(dz.abs()) != ring {
                            continue;
                        }
                        if let Some(ids) = grid.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                            for &i in ids {
                                best = best.min(dist(&p, &targets[i]));
                            }
                        }
                    }
                }
            }
            if best <= ring as f64 * cell || ring as f64 * cell > 2.0 {
                break;
            }
            ring += 1;
        }
        worst = worst.max(best);
    }
    worst
}
