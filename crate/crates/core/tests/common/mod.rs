//! Independent reference computations for integration tests.
//!
//! Nothing here calls into the library's numerics; each oracle uses a different
//! algorithm from the code it checks.

#![allow(dead_code)]

/// Dense `a * b` for row-major square matrices.
pub fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// `P^t` by repeated multiplication.
pub fn matpow(p: &[f64], n: usize, t: usize) -> Vec<f64> {
    let mut out: Vec<f64> = (0..n * n).map(|i| if i / n == i % n { 1.0 } else { 0.0 }).collect();
    for _ in 0..t {
        out = matmul(&out, p, n);
    }
    out
}

/// Stationary law by power iteration on the lazy chain `(I + P)/2`.
pub fn power_iteration_stationary(p: &[f64], n: usize) -> Vec<f64> {
    let mut v = vec![1.0 / n as f64; n];
    for _ in 0..200_000 {
        let mut next = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                next[j] += v[i] * 0.5 * (p[i * n + j] + if i == j { 1.0 } else { 0.0 });
            }
        }
        let diff: f64 = next.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum();
        v = next;
        if diff < 1e-16 {
            break;
        }
    }
    let s: f64 = v.iter().sum();
    v.iter().map(|x| x / s).collect()
}

/// `(beta(t), d(t))` from an explicit matrix power.
pub fn beta_and_d(p: &[f64], pi: &[f64], n: usize, t: usize) -> (f64, f64) {
    let pt = matpow(p, n, t);
    let mut beta = 0.0;
    let mut d: f64 = 0.0;
    for x in 0..n {
        let tv: f64 = 0.5 * (0..n).map(|y| (pt[x * n + y] - pi[y]).abs()).sum::<f64>();
        beta += pi[x] * tv;
        d = d.max(tv);
    }
    (beta, d)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, sorted descending.
pub fn jacobi_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let mut m = a.to_vec();
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| m[i * n + j].powi(2))
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = m[k * n + p];
                    let akq = m[k * n + q];
                    m[k * n + p] = c * akp - s * akq;
                    m[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = m[p * n + k];
                    let aqk = m[q * n + k];
                    m[p * n + k] = c * apk - s * aqk;
                    m[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

/// Principal branch of `w e^w = x` by bisection.
pub fn lambert_bisection(x: f64) -> f64 {
    let f = |w: f64| w * w.exp() - x;
    let (mut lo, mut hi) = (-1.0, 1.0f64);
    while f(hi) < 0.0 {
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-17 * hi.abs().max(1e-300) {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `Gamma(a, x) = e^-x int_0^inf (x+u)^(a-1) e^-u du` by exp-sinh quadrature.
pub fn upper_gamma_quadrature(a: f64, x: f64) -> f64 {
    let h = 1.0 / 256.0;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mut total = 0.0;
    for k in -2048i32..=2048 {
        let tau = k as f64 * h;
        let u = (half_pi * tau.sinh()).exp();
        if !u.is_finite() || u > 800.0 {
            continue;
        }
        let w = u * half_pi * tau.cosh();
        // (x+u)^(a-1) e^-u computed in log space.
        let v = ((a - 1.0) * (x + u).ln() - u).exp() * w;
        total += v;
    }
    (-x).exp() * total * h
}

/// `zeta(r)` from a compensated partial sum and the Euler-Maclaurin tail.
pub fn zeta_partial_sum(r: f64) -> f64 {
    let n = 200_000usize;
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for k in (1..n).rev() {
        let y = (k as f64).powf(-r) - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let nf = n as f64;
    let tail = nf.powf(1.0 - r) / (r - 1.0) + 0.5 * nf.powf(-r) + r / 12.0 * nf.powf(-r - 1.0)
        - r * (r + 1.0) * (r + 2.0) / 720.0 * nf.powf(-r - 3.0);
    sum + tail
}

/// `n` points log-spaced over `[lo, hi]`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (n - 1) as f64).exp()).collect()
}
