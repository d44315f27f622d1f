//! Closed-form sequences indexed by states `x >= 1`, with tail sums.
//!
//! Tails `sum_{x > k} f(x)` are evaluated from the formula: an explicit sum up to a
//! cutoff, then either an exact Hurwitz-zeta remainder (pure power tails), a
//! quadrature remainder (power times log-log factors), or nothing at all when
//! the sequence decays geometrically and the explicit sum already converged.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::hurwitz_zeta;

/// A positive sequence defined by formula.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sequence {
    /// `value`.
    Constant {
        value: f64,
    },
    /// `scale * x^(-exponent)`.
    Power {
        scale: f64,
        exponent: f64,
    },
    /// `scale * ratio^x`.
    Geometric {
        scale: f64,
        ratio: f64,
    },
    /// `scale / ln(ln(x))`; infinite for `x <= e` so it is meant to sit under a `min`.
    InvLogLog {
        scale: f64,
    },
    /// `values[x - start]` for `start <= x < start + len`, zero elsewhere.
    Table {
        start: usize,
        values: Vec<f64>,
    },
    Min {
        a: Box<Sequence>,
        b: Box<Sequence>,
    },
    Product {
        factors: Vec<Sequence>,
    },
    Quotient {
        num: Box<Sequence>,
        den: Box<Sequence>,
    },
    Pow {
        base: Box<Sequence>,
        exponent: f64,
    },
}

/// How a tail sum was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMethod {
    FiniteSupport,
    ExplicitConverged,
    HurwitzRemainder,
    QuadratureRemainder,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailSum {
    pub value: f64,
    pub method: TailMethod,
}

/// Leading-order form `c * x^-a * exp(-g x) * ln(ln x)^-l`, exact for `x >= from`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Asymptotic {
    scale: f64,
    power: f64,
    rate: f64,
    loglog: f64,
    from: f64,
}

impl Asymptotic {
    fn eval(&self, x: f64) -> f64 {
        let mut v = self.scale * x.powf(-self.power) * (-self.rate * x).exp();
        if self.loglog != 0.0 {
            v *= x.ln().ln().powf(-self.loglog);
        }
        v
    }

    /// Orders by decay speed: faster decay compares as smaller.
    fn decays_faster_than(&self, other: &Asymptotic) -> Option<bool> {
        let key = |a: &Asymptotic| [a.rate, a.power, a.loglog];
        let (ka, kb) = (key(self), key(other));
        for i in 0..3 {
            if ka[i] > kb[i] {
                return Some(true);
            }
            if ka[i] < kb[i] {
                return Some(false);
            }
        }
        None
    }
}

impl Sequence {
    pub fn constant(value: f64) -> Self {
        Sequence::Constant { value }
    }

    pub fn power(scale: f64, exponent: f64) -> Self {
        Sequence::Power { scale, exponent }
    }

    pub fn geometric(scale: f64, ratio: f64) -> Self {
        Sequence::Geometric { scale, ratio }
    }

    pub fn min(a: Sequence, b: Sequence) -> Self {
        Sequence::Min { a: Box::new(a), b: Box::new(b) }
    }

    pub fn product(factors: Vec<Sequence>) -> Self {
        Sequence::Product { factors }
    }

    pub fn quotient(num: Sequence, den: Sequence) -> Self {
        Sequence::Quotient { num: Box::new(num), den: Box::new(den) }
    }

    pub fn pow(base: Sequence, exponent: f64) -> Self {
        Sequence::Pow { base: Box::new(base), exponent }
    }

    /// `min(cap, x^-a)`, the shape used for holding probabilities.
    pub fn capped_power(cap: f64, exponent: f64) -> Self {
        Sequence::min(Sequence::constant(cap), Sequence::power(1.0, exponent))
    }

    /// Multiplies by a constant.
    pub fn scaled(self, factor: f64) -> Self {
        match self {
            Sequence::Constant { value } => Sequence::Constant { value: value * factor },
            Sequence::Power { scale, exponent } => Sequence::Power { scale: scale * factor, exponent },
            Sequence::Geometric { scale, ratio } => Sequence::Geometric { scale: scale * factor, ratio },
            Sequence::Product { mut factors } => {
                factors.push(Sequence::constant(factor));
                Sequence::Product { factors }
            }
            other => Sequence::product(vec![other, Sequence::constant(factor)]),
        }
    }

    pub fn eval(&self, x: usize) -> f64 {
        let xf = x as f64;
        match self {
            Sequence::Constant { value } => *value,
            Sequence::Power { scale, exponent } => scale * xf.powf(-exponent),
            Sequence::Geometric { scale, ratio } => scale * ratio.powf(xf),
            Sequence::InvLogLog { scale } => {
                let ll = xf.ln().ln();
                if ll > 0.0 {
                    scale / ll
                } else {
                    f64::INFINITY
                }
            }
            Sequence::Table { start, values } => {
                if x >= *start {
                    values.get(x - start).copied().unwrap_or(0.0)
                } else {
                    0.0
                }
            }
            Sequence::Min { a, b } => a.eval(x).min(b.eval(x)),
            Sequence::Product { factors } => factors.iter().map(|f| f.eval(x)).product(),
            Sequence::Quotient { num, den } => {
                let n = num.eval(x);
                if n == 0.0 {
                    0.0
                } else {
                    n / den.eval(x)
                }
            }
            Sequence::Pow { base, exponent } => {
                let b = base.eval(x);
                if b == 0.0 {
                    0.0
                } else {
                    b.powf(*exponent)
                }
            }
        }
    }

    /// Values at `from..=to`.
    pub fn values(&self, from: usize, to: usize) -> Vec<f64> {
        (from..=to).map(|x| self.eval(x)).collect()
    }

    /// Last index with a possibly nonzero value, if finite.
    pub fn support_end(&self) -> Option<usize> {
        match self {
            Sequence::Table { start, values } => Some((start + values.len()).saturating_sub(1)),
            Sequence::Min { a, b } => match (a.support_end(), b.support_end()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (Some(x), None) | (None, Some(x)) => Some(x),
                (None, None) => None,
            },
            Sequence::Product { factors } => factors.iter().filter_map(|f| f.support_end()).min(),
            Sequence::Quotient { num, .. } => num.support_end(),
            Sequence::Pow { base, .. } => base.support_end(),
            _ => None,
        }
    }

    fn asymptotic(&self) -> Option<Asymptotic> {
        match self {
            Sequence::Constant { value } => {
                Some(Asymptotic { scale: *value, power: 0.0, rate: 0.0, loglog: 0.0, from: 1.0 })
            }
            Sequence::Power { scale, exponent } => {
                Some(Asymptotic { scale: *scale, power: *exponent, rate: 0.0, loglog: 0.0, from: 1.0 })
            }
            Sequence::Geometric { scale, ratio } => {
                Some(Asymptotic { scale: *scale, power: 0.0, rate: -ratio.ln(), loglog: 0.0, from: 1.0 })
            }
            Sequence::InvLogLog { scale } => {
                Some(Asymptotic { scale: *scale, power: 0.0, rate: 0.0, loglog: 1.0, from: 16.0 })
            }
            Sequence::Table { .. } => None,
            Sequence::Min { a, b } => {
                let (fa, fb) = (a.asymptotic()?, b.asymptotic()?);
                let (win, lose, win_seq, lose_seq) = match fa.decays_faster_than(&fb) {
                    Some(true) => (fa, fb, a, b),
                    Some(false) => (fb, fa, b, a),
                    None => {
                        let pick = if fa.scale <= fb.scale { fa } else { fb };
                        return Some(Asymptotic { from: fa.from.max(fb.from), ..pick });
                    }
                };
                let mut x = win.from.max(lose.from).max(1.0);
                // Walk forward until the faster branch is the minimum and stays so.
                let mut steps = 0;
                loop {
                    let xi = x.ceil() as usize;
                    let settled = (0..8).all(|k| {
                        let at = xi << k;
                        win_seq.eval(at) <= lose_seq.eval(at)
                    });
                    if settled {
                        return Some(Asymptotic { from: x.ceil(), ..win });
                    }
                    x *= 2.0;
                    steps += 1;
                    if steps > 50 {
                        return None;
                    }
                }
            }
            Sequence::Product { factors } => {
                let mut acc = Asymptotic { scale: 1.0, power: 0.0, rate: 0.0, loglog: 0.0, from: 1.0 };
                for f in factors {
                    let a = f.asymptotic()?;
                    acc = Asymptotic {
                        scale: acc.scale * a.scale,
                        power: acc.power + a.power,
                        rate: acc.rate + a.rate,
                        loglog: acc.loglog + a.loglog,
                        from: acc.from.max(a.from),
                    };
                }
                Some(acc)
            }
            Sequence::Quotient { num, den } => {
                let (n, d) = (num.asymptotic()?, den.asymptotic()?);
                Some(Asymptotic {
                    scale: n.scale / d.scale,
                    power: n.power - d.power,
                    rate: n.rate - d.rate,
                    loglog: n.loglog - d.loglog,
                    from: n.from.max(d.from),
                })
            }
            Sequence::Pow { base, exponent } => {
                let b = base.asymptotic()?;
                Some(Asymptotic {
                    scale: b.scale.powf(*exponent),
                    power: b.power * exponent,
                    rate: b.rate * exponent,
                    loglog: b.loglog * exponent,
                    from: b.from,
                })
            }
        }
    }

    /// True when `sum_x f(x)` is finite.
    pub fn is_summable(&self) -> bool {
        if self.support_end().is_some() {
            return true;
        }
        match self.asymptotic() {
            Some(a) => a.scale == 0.0 || a.rate > 0.0 || (a.rate == 0.0 && a.power > 1.0),
            None => false,
        }
    }

    /// `sum_{x > k} f(x)`.
    pub fn tail_sum(&self, k: usize) -> Result<TailSum> {
        if let Some(end) = self.support_end() {
            let value = ((k + 1)..=end).map(|x| self.eval(x)).sum();
            return Ok(TailSum { value, method: TailMethod::FiniteSupport });
        }
        let asym = self
            .asymptotic()
            .ok_or_else(|| Error::InvalidSequence("sequence has no recognizable asymptotic form".into()))?;
        if asym.scale == 0.0 {
            return Ok(TailSum { value: 0.0, method: TailMethod::ExplicitConverged });
        }
        if asym.rate < 0.0 || (asym.rate == 0.0 && asym.power <= 1.0) {
            return Err(Error::SummabilityFailure(format!(
                "tail of a sequence decaying like x^-{} e^-{} x diverges",
                asym.power, asym.rate
            )));
        }
        let from = asym.from.ceil() as usize;
        if asym.rate > 0.0 {
            let mut sum = 0.0;
            let mut x = k + 1;
            loop {
                let v = self.eval(x);
                sum += v;
                if x >= from && (v <= 1e-18 * sum || v < 1e-300) {
                    break;
                }
                if x > k + 100_000_000 {
                    return Err(Error::InvalidSequence("geometric tail did not converge".into()));
                }
                x += 1;
            }
            return Ok(TailSum { value: sum, method: TailMethod::ExplicitConverged });
        }
        let cutoff = (k + 1).max(from).max(4096);
        let explicit: f64 = ((k + 1)..cutoff).map(|x| self.eval(x)).sum();
        if asym.loglog == 0.0 {
            let rem = asym.scale * hurwitz_zeta(asym.power, cutoff as f64)?;
            Ok(TailSum { value: explicit + rem, method: TailMethod::HurwitzRemainder })
        } else {
            let rem = integral_tail(|x| asym.eval(x), cutoff as f64 - 0.5);
            Ok(TailSum { value: explicit + rem, method: TailMethod::QuadratureRemainder })
        }
    }

    /// `sum_{x >= from} f(x)`.
    pub fn sum_from(&self, from: usize) -> Result<f64> {
        Ok(self.tail_sum(from.saturating_sub(1))?.value)
    }
}

/// `int_a^inf f(x) dx` for a slowly varying integrand, via `x = e^y` and Simpson's rule.
fn integral_tail(f: impl Fn(f64) -> f64, a: f64) -> f64 {
    let g = |y: f64| {
        let x = y.exp();
        f(x) * x
    };
    let y0 = a.ln();
    let h = 1e-3;
    let mut total = 0.0;
    let mut y = y0;
    let block = 1.0;
    let scale0 = g(y0).abs().max(1e-300);
    loop {
        let n = (block / h) as usize;
        let mut s = g(y) + g(y + block);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * g(y + i as f64 * h);
        }
        let piece = s * h / 3.0;
        total += piece;
        y += block;
        if g(y).abs() < 1e-18 * scale0 || y > y0 + 700.0 {
            break;
        }
    }
    total
}
