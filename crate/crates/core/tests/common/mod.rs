//! Independent oracles shared by the integration tests and the acceptance
//! suite. Nothing here calls the code paths it is used to check.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use socp_recovery::linalg::DenseMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box–Muller on the test's own generator.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = 1.0 - rng.gen::<f64>();
    let v: f64 = rng.gen::<f64>();
    (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
}

pub fn normals(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| normal(rng)).collect()
}

/// Genie objective with λ chosen optimally by clamping, from raw (h, g).
///
/// The last `k` entries of `h` are the support. Off the support the best
/// multiplier removes every residual below 1, leaving max(ν h̃ − 1, 0)²
/// with h̃ = |h| (general) or h (signed); on the support the residual is
/// (ν h + 1)². Returns None where the square root is undefined.
pub fn clamp_objective(h: &[f64], g: &[f64], k: usize, signed: bool, sigma: f64, r: f64, nu: f64) -> Option<f64> {
    let off = h.len() - k;
    let g2: f64 = g.iter().map(|v| v * v).sum();
    let mut resid = 0.0;
    for (i, &hi) in h.iter().enumerate() {
        if i < off {
            let ht = if signed { hi } else { hi.abs() };
            let e = (nu * ht - 1.0).max(0.0);
            resid += e * e;
        } else {
            let e = nu * hi + 1.0;
            resid += e * e;
        }
    }
    let rad = g2 * nu * nu - resid;
    (rad >= 0.0).then(|| sigma * rad.sqrt() - nu * r)
}

/// Brute-force maximum of the genie dual: a dense ν grid followed by a
/// golden-section polish around the best grid point.
pub fn genie_oracle(h: &[f64], g: &[f64], k: usize, signed: bool, sigma: f64, r: f64, points: usize) -> Option<(f64, f64)> {
    let f = |nu: f64| clamp_objective(h, g, k, signed, sigma, r, nu).unwrap_or(f64::NEG_INFINITY);
    // the objective is concave and eventually decreasing: grow the window
    // until it turns down
    let mut hi = 1.0;
    while f(hi) > f(0.5 * hi) || f(hi) == f64::NEG_INFINITY && f(0.5 * hi) == f64::NEG_INFINITY {
        hi *= 2.0;
        if hi > 1e9 {
            return None;
        }
    }
    let step = hi / points as f64;
    let (mut best_i, mut best) = (0usize, f64::NEG_INFINITY);
    for i in 1..=points {
        let v = f(i as f64 * step);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    if best == f64::NEG_INFINITY {
        return None;
    }
    let (mut a, mut b) = ((best_i as f64 - 1.0) * step, (best_i as f64 + 1.0) * step);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if f(c) >= f(d) {
            b = d;
        } else {
            a = c;
        }
    }
    let nu = 0.5 * (a + b);
    Some((nu, f(nu).max(best)))
}

/// A random SOCP instance: Gaussian A, k-sparse x̃ on random coordinates,
/// noise of level σ, radius σ√m.
pub struct RandomProblem {
    pub a: DenseMatrix<f64>,
    pub x_tilde: Vec<f64>,
    pub y: Vec<f64>,
    pub r: f64,
}

pub fn random_problem(rng: &mut ChaCha8Rng, m: usize, n: usize, k: usize, sigma: f64, signed: bool) -> RandomProblem {
    let a = DenseMatrix::from_row_major(m, n, normals(rng, m * n)).unwrap();
    let mut x_tilde = vec![0.0; n];
    let mut placed = 0;
    while placed < k {
        let j = rng.gen_range(0..n);
        if x_tilde[j] == 0.0 {
            let mag = 1.0 + 2.0 * rng.gen::<f64>();
            x_tilde[j] = if signed || rng.gen::<bool>() { mag } else { -mag };
            placed += 1;
        }
    }
    let mut y = a.matvec(&x_tilde);
    for v in y.iter_mut() {
        *v += sigma * normal(rng);
    }
    RandomProblem {
        a,
        x_tilde,
        y,
        r: sigma * (m as f64).sqrt(),
    }
}

pub fn l1(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum()
}

pub fn rel_diff(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

/// min ‖y − A x‖₂ over x ≥ 0 by accelerated projected gradient; an upper
/// bound on the distance that is tight once iterations suffice.
pub fn nnls_residual(a: &DenseMatrix<f64>, y: &[f64], iterations: usize) -> f64 {
    let n = a.cols();
    let fro2: f64 = a.as_slice().iter().map(|v| v * v).sum();
    let step = 1.0 / fro2;
    let (mut x, mut z) = (vec![0.0; n], vec![0.0; n]);
    let resid = |x: &[f64]| -> Vec<f64> { a.matvec(x).iter().zip(y).map(|(p, q)| p - q).collect() };
    let norm = |v: &[f64]| v.iter().map(|t| t * t).sum::<f64>().sqrt();
    let mut best = norm(y);
    for it in 0..iterations {
        let grad = a.matvec_t(&resid(&z));
        let next: Vec<f64> = z.iter().zip(&grad).map(|(zi, gi)| (zi - step * gi).max(0.0)).collect();
        let mom = it as f64 / (it as f64 + 3.0);
        z = next.iter().zip(&x).map(|(nx, ox)| (nx + mom * (nx - ox)).max(0.0)).collect();
        x = next;
        best = best.min(norm(&resid(&x)));
    }
    best
}
