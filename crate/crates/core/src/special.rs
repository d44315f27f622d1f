//! Special functions used by the bound calculators.
//!
//! ```text
//! lambert_w0(x)             principal branch of w e^w = x, x >= -1/e
//! upper_incomplete_gamma    Gamma(a, x) = int_x^inf t^(a-1) e^-t dt, a > 0, x >= 0
//! riemann_zeta(r)           sum_{k>=1} k^-r, r > 1
//! hurwitz_zeta(s, q)        sum_{k>=0} (q+k)^-s, s > 1, q > 0
//! ```
//!
//! Incomplete gamma switches between the Legendre continued fraction
//! (x > a + 1) and the power series for the lower function (otherwise).
//! Zeta uses Euler-Maclaurin summation with twelve Bernoulli corrections.

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Natural log of the gamma function for a > 0.
pub fn ln_gamma(a: f64) -> f64 {
    if a < 0.5 {
        // Reflection: Gamma(a) Gamma(1-a) = pi / sin(pi a).
        let pi = std::f64::consts::PI;
        return (pi / (pi * a).sin()).ln() - ln_gamma(1.0 - a);
    }
    let z = a - 1.0;
    let mut sum = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        sum += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + sum.ln()
}

/// Gamma function for a > 0.
pub fn gamma(a: f64) -> f64 {
    ln_gamma(a).exp()
}

/// Principal branch W0 of the Lambert function.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let branch = -(-1.0f64).exp();
    if !(x >= branch - 1e-15) || !x.is_finite() {
        return Err(Error::DomainError(format!("lambert_w0 needs x >= -1/e, got {x}")));
    }
    if x <= branch {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let mut w = if x < -0.25 {
        let p = (2.0 * (std::f64::consts::E * x + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        (1.0 + x).ln() * (1.0 - 0.2 * (1.0 + x).ln() / (1.0 + (1.0 + x).ln()))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if step.abs() <= 1e-16 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

/// Upper incomplete gamma function Gamma(a, x).
pub fn upper_incomplete_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) || !(x >= 0.0) || !a.is_finite() {
        return Err(Error::DomainError(format!("upper_incomplete_gamma needs a > 0, x >= 0, got a={a}, x={x}")));
    }
    if x == 0.0 {
        return Ok(gamma(a));
    }
    if x.is_infinite() {
        return Ok(0.0);
    }
    let log_prefactor = -x + a * x.ln();
    if x > a + 1.0 {
        Ok((log_prefactor + continued_fraction(a, x).ln()).exp())
    } else {
        let lower = (log_prefactor + lower_series(a, x).ln()).exp();
        Ok(gamma(a) - lower)
    }
}

/// sum_n x^n / (a (a+1) ... (a+n)), so gamma_lower(a, x) = e^-x x^a * series.
fn lower_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut ap = a;
    for _ in 0..100_000 {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if term.abs() < sum.abs() * 1e-17 {
            break;
        }
    }
    sum
}

/// Modified Lentz evaluation of the Legendre continued fraction.
fn continued_fraction(a: f64, x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..100_000 {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < tiny {
            d = tiny;
        }
        c = b + an / c;
        if c.abs() < tiny {
            c = tiny;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

const BERNOULLI_EVEN: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// Hurwitz zeta sum_{k>=0} (q+k)^-s for s > 1, q > 0.
pub fn hurwitz_zeta(s: f64, q: f64) -> Result<f64> {
    if !(s > 1.0) || !(q > 0.0) {
        return Err(Error::DomainError(format!("hurwitz_zeta needs s > 1, q > 0, got s={s}, q={q}")));
    }
    let n_direct = 20usize;
    let mut head = 0.0;
    for k in (0..n_direct).rev() {
        head += (q + k as f64).powf(-s);
    }
    let big = q + n_direct as f64;
    let mut tail = big.powf(1.0 - s) / (s - 1.0) + 0.5 * big.powf(-s);
    // Correction j: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * big^(-s-2j+1).
    let mut rising = s; // s (s+1) ... (s + 2j - 2)
    let mut factorial = 2.0; // (2j)!
    let mut power = big.powf(-s - 1.0);
    for (j, b2j) in BERNOULLI_EVEN.iter().enumerate() {
        let term = b2j / factorial * rising * power;
        tail += term;
        if term.abs() < 1e-18 * tail.abs() {
            break;
        }
        let k = 2.0 * (j as f64 + 1.0);
        rising *= (s + k - 1.0) * (s + k);
        factorial *= (k + 1.0) * (k + 2.0);
        power /= big * big;
    }
    Ok(head + tail)
}

/// Riemann zeta for r > 1.
pub fn riemann_zeta(r: f64) -> Result<f64> {
    hurwitz_zeta(r, 1.0)
}
