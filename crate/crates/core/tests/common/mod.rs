//! Reference implementations used as test oracles. Nothing here calls into
//! the crate's simulator, solver or metric code.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qkad::data::Label;

// ---------- dense circuit oracle ----------

fn hadamard_layer(d: usize) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = DMatrix::from_row_slice(2, 2, &[s, s, s, -s]).map(|v| Complex64::new(v, 0.0));
    let mut out = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
    for _ in 0..d {
        out = h.kronecker(&out);
    }
    out
}

fn diagonal(d: usize, phase: impl Fn(usize) -> f64) -> DMatrix<Complex64> {
    let dim = 1 << d;
    DMatrix::from_fn(dim, dim, |r, c| {
        if r == c {
            Complex64::from_polar(1.0, phase(r))
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn bit(i: usize, q: usize) -> usize {
    (i >> q) & 1
}

/// Full unitary of the feature map, built as explicit matrix products.
pub fn dense_feature_unitary(x: &[f64], block_reps: usize, angle_scale: f64) -> DMatrix<Complex64> {
    let d = x.len();
    let dim = 1 << d;
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    for _ in 0..block_reps {
        u = hadamard_layer(d) * u;
        for (q, &xq) in x.iter().enumerate() {
            let theta = angle_scale * 2.0 * xq;
            let rz = diagonal(d, |i| if bit(i, q) == 0 { -theta / 2.0 } else { theta / 2.0 });
            u = rz * u;
        }
        for a in 0..d {
            for b in a + 1..d {
                let theta = angle_scale * angle_scale * 2.0 * x[a] * x[b];
                let rzz = diagonal(d, |i| if bit(i, a) == bit(i, b) { -theta / 2.0 } else { theta / 2.0 });
                u = rzz * u;
            }
        }
    }
    u
}

pub fn dense_feature_state(x: &[f64], block_reps: usize, angle_scale: f64) -> DVector<Complex64> {
    dense_feature_unitary(x, block_reps, angle_scale).column(0).into_owned()
}

pub fn dense_fidelity(x: &[f64], y: &[f64], block_reps: usize, angle_scale: f64) -> f64 {
    let a = dense_feature_state(x, block_reps, angle_scale);
    let b = dense_feature_state(y, block_reps, angle_scale);
    b.dotc(&a).norm_sqr()
}

// ---------- one-class dual oracles ----------

pub fn objective(g: &DMatrix<f64>, a: &[f64]) -> f64 {
    let v = DVector::from_column_slice(a);
    0.5 * v.dot(&(g * &v))
}

/// Exact minimum of `½ αᵀGα` over `0 ≤ α ≤ C`, `Σα = 1` by enumerating
/// every assignment of coordinates to {lower bound, upper bound, free} and
/// solving the equality-constrained KKT system on the free set. Needs a
/// positive definite `G`.
pub fn active_set_minimum(g: &DMatrix<f64>, c: f64) -> f64 {
    let n = g.nrows();
    let mut best = f64::INFINITY;
    let total = 3usize.pow(n as u32);
    for code in 0..total {
        let mut state = vec![0u8; n];
        let mut k = code;
        for s in state.iter_mut() {
            *s = (k % 3) as u8;
            k /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| state[i] == 2).collect();
        let mut alpha: Vec<f64> = state.iter().map(|&s| if s == 1 { c } else { 0.0 }).collect();
        let fixed_sum: f64 = alpha.iter().sum();
        if free.is_empty() {
            if (fixed_sum - 1.0).abs() > 1e-12 {
                continue;
            }
        } else {
            let f = free.len();
            let mut m = DMatrix::<f64>::zeros(f + 1, f + 1);
            let mut rhs = DVector::<f64>::zeros(f + 1);
            for (r, &i) in free.iter().enumerate() {
                for (cc, &j) in free.iter().enumerate() {
                    m[(r, cc)] = g[(i, j)];
                }
                m[(r, f)] = -1.0;
                m[(f, r)] = 1.0;
                rhs[r] = -(0..n).filter(|&j| state[j] == 1).map(|j| g[(i, j)] * c).sum::<f64>();
            }
            rhs[f] = 1.0 - fixed_sum;
            let Some(sol) = m.lu().solve(&rhs) else { continue };
            if free.iter().enumerate().any(|(r, _)| sol[r] < -1e-12 || sol[r] > c + 1e-12) {
                continue;
            }
            for (r, &i) in free.iter().enumerate() {
                alpha[i] = sol[r].clamp(0.0, c);
            }
        }
        best = best.min(objective(g, &alpha));
    }
    best
}

/// Grid search for `N ≤ 3`: the first `N − 1` coordinates run over
/// multiples of `step` plus the box value, the last is fixed by the simplex.
pub fn grid_minimum(g: &DMatrix<f64>, c: f64, step: f64) -> f64 {
    let n = g.nrows();
    assert!((2..=3).contains(&n));
    let mut values: Vec<f64> = (0..).map(|k| k as f64 * step).take_while(|v| *v <= c).collect();
    values.push(c);
    let mut best = f64::INFINITY;
    let mut consider = |a: &[f64]| {
        let last = 1.0 - a.iter().sum::<f64>();
        if (-1e-12..=c + 1e-12).contains(&last) {
            let mut full = a.to_vec();
            full.push(last.clamp(0.0, c));
            best = best.min(objective(g, &full));
        }
    };
    if n == 2 {
        for &a in &values {
            consider(&[a]);
        }
    } else {
        for &a in &values {
            for &b in &values {
                consider(&[a, b]);
            }
        }
    }
    best
}

// ---------- metric oracle ----------

/// Average precision by explicit enumeration: for every distinct score
/// threshold `t` (descending), predict anomaly iff `score ≥ t` and count
/// precision and recall from scratch.
pub fn brute_force_ap(labels: &[Label], scores: &[f64]) -> f64 {
    let mut thresholds: Vec<f64> = scores.to_vec();
    thresholds.sort_by(|a, b| b.partial_cmp(a).unwrap());
    thresholds.dedup();
    let positives = labels.iter().filter(|l| l.is_anomaly()).count() as f64;
    let mut ap = 0.0;
    let mut prev_recall = 0.0;
    for t in thresholds {
        let (mut tp, mut fp) = (0.0, 0.0);
        for (l, s) in labels.iter().zip(scores) {
            if *s >= t {
                if l.is_anomaly() {
                    tp += 1.0;
                } else {
                    fp += 1.0;
                }
            }
        }
        let recall = tp / positives;
        let precision = tp / (tp + fp);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
    }
    ap
}

// ---------- statistics ----------

pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

pub fn variance(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let m = v.iter().sum::<f64>() / n;
    v.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0)
}
