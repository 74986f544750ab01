//! Power-series evaluation of ₁F₁, ₂F₁ and the local general-Heun solution
//! (singular points 0, 1, −1, ∞), with term-wise first and second derivatives
//! so that each defining ODE can be checked pointwise.
//!
//! A complex-parameter ₂F₁ with continuation along the negative real axis
//! (Pfaff and `1/z` connection formulas) is included for the positive-energy
//! free solutions in hyperbolic space.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

pub const TERM_CAP: usize = 10_000;
const SERIES_EPS: f64 = 1e-17;
const HEUN_TAIL_TOL: f64 = 1e-11;

/// Value and first two derivatives with respect to the series variable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
    /// Number of terms summed.
    pub terms: usize,
}

/// `Some(n)` when `x` is the non-positive integer `−n`.
pub fn neg_integer(x: f64) -> Option<u64> {
    let r = x.round();
    if x <= 0.0 && (x - r).abs() < 1e-12 && r > -1e9 {
        Some((-r) as u64)
    } else {
        None
    }
}

/// Accumulates `Σ c_m z^m` and its derivatives given the ratio
/// `c_{m+1}/c_m = ratio(m)`.
fn hyper_series(
    function: &'static str,
    z: f64,
    max_terms: Option<u64>,
    ratio: impl Fn(f64) -> f64,
) -> Result<SeriesValue> {
    let mut c = 1.0;
    let (mut value, mut d1, mut d2) = (0.0, 0.0, 0.0);
    // z^{m-2}, z^{m-1}, z^m kept separately so z = 0 is exact.
    let (mut zm2, mut zm1, mut zm) = (0.0, 0.0, 1.0);
    let mut quiet = 0;
    let cap = max_terms.map_or(TERM_CAP, |n| (n as usize + 1).min(TERM_CAP));
    for m in 0..cap {
        let mf = m as f64;
        let t0 = c * zm;
        let t1 = mf * c * zm1;
        let t2 = mf * (mf - 1.0) * c * zm2;
        value += t0;
        d1 += t1;
        d2 += t2;
        if max_terms.is_none() {
            let small = |t: f64, s: f64| t.abs() <= SERIES_EPS * s.abs().max(1e-300);
            if m > 2 && small(t0, value) && small(t1, d1) && small(t2, d2) {
                quiet += 1;
                if quiet >= 3 {
                    return Ok(SeriesValue { value, d1, d2, terms: m + 1 });
                }
            } else {
                quiet = 0;
            }
        }
        c *= ratio(mf);
        zm2 = zm1;
        zm1 = zm;
        zm *= z;
        if !value.is_finite() {
            return Err(Error::NonConvergence {
                function,
                terms: m + 1,
                last_term: f64::INFINITY,
            });
        }
    }
    if let Some(n) = max_terms {
        if (n as usize) < TERM_CAP {
            return Ok(SeriesValue {
                value,
                d1,
                d2,
                terms: n as usize + 1,
            });
        }
    }
    Err(Error::NonConvergence {
        function,
        terms: cap,
        last_term: (c * zm / value).abs(),
    })
}

/// Kummer's `₁F₁(a; b; z)` with derivatives in `z`.
pub fn kummer_1f1_full(a: f64, b: f64, z: f64) -> Result<SeriesValue> {
    let poly = neg_integer(a);
    if let Some(nb) = neg_integer(b) {
        match poly {
            Some(na) if na < nb => {}
            _ => {
                return Err(Error::ParameterDomain {
                    function: "kummer_1f1",
                    reason: format!("b = {b} is a non-positive integer"),
                })
            }
        }
    }
    hyper_series("kummer_1f1", z, poly, |m| (a + m) / ((b + m) * (m + 1.0)))
}

pub fn kummer_1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    kummer_1f1_full(a, b, z).map(|s| s.value)
}

/// Gauss `₂F₁(a, b; c; z)` with derivatives in `z`. Polynomial parameters are
/// accepted for any `z`; otherwise `|z| < 1` is required.
pub fn gauss_2f1_full(a: f64, b: f64, c: f64, z: f64) -> Result<SeriesValue> {
    let poly = match (neg_integer(a), neg_integer(b)) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, y) => x.or(y),
    };
    if let Some(nc) = neg_integer(c) {
        match poly {
            Some(n) if n < nc => {}
            _ => {
                return Err(Error::ParameterDomain {
                    function: "gauss_2f1",
                    reason: format!("c = {c} is a non-positive integer"),
                })
            }
        }
    }
    if poly.is_none() && z.abs() >= 1.0 {
        return Err(Error::ParameterDomain {
            function: "gauss_2f1",
            reason: format!("|z| = {} outside the unit disc for a non-terminating series", z.abs()),
        });
    }
    hyper_series("gauss_2f1", z, poly, |m| (a + m) * (b + m) / ((c + m) * (m + 1.0)))
}

pub fn gauss_2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    gauss_2f1_full(a, b, c, z).map(|s| s.value)
}

/// Parameters of
/// `H″ + (γ/z + δ/(z−1) + ε/(z+1))H′ + (λβz − q)/(z(z−1)(z+1)) H = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeunParams {
    pub gamma: f64,
    pub delta: f64,
    pub epsilon: f64,
    pub lambda: f64,
    pub beta: f64,
    pub q: f64,
}

impl HeunParams {
    /// `γ + δ + ε − (λ + β + 1)`.
    pub fn fuchs_residual(&self) -> f64 {
        self.gamma + self.delta + self.epsilon - (self.lambda + self.beta + 1.0)
    }

    /// ODE residual at `z` for given `H, H′, H″`, scaled by the size of the terms.
    pub fn ode_residual(&self, z: f64, h: &SeriesValue) -> f64 {
        let p = z * (z * z - 1.0);
        let t2 = p * h.d2;
        let t1 = (self.gamma * (z * z - 1.0) + self.delta * z * (z + 1.0) + self.epsilon * z * (z - 1.0)) * h.d1;
        let t0 = (self.lambda * self.beta * z - self.q) * h.value;
        let scale = t2.abs() + t1.abs() + t0.abs();
        if scale == 0.0 {
            0.0
        } else {
            (t2 + t1 + t0).abs() / scale
        }
    }
}

/// Double-double quotient with one correction step; the crate's own division
/// is only accurate to about one ulp of `f64`.
fn dd_div(a: TwoFloat, b: TwoFloat) -> TwoFloat {
    let q = a / b;
    q + (a - q * b).hi() / b.hi()
}

/// Local solution about `z = 0` normalised to `H(0) = 1`, with derivatives.
pub fn heun_local_full(p: &HeunParams, z: f64) -> Result<SeriesValue> {
    if neg_integer(p.gamma).is_some() {
        return Err(Error::ParameterDomain {
            function: "heun_local",
            reason: format!("γ = {} is a non-positive integer", p.gamma),
        });
    }
    if z.abs() >= 1.0 {
        return Err(Error::ParameterDomain {
            function: "heun_local",
            reason: format!("|z| = {} outside the local disc", z.abs()),
        });
    }
    // Coefficients and sums in double-double: near z = -0.8 the terms can
    // exceed the sum by seven orders of magnitude.
    let sum_gde = TwoFloat::from(p.gamma) + p.delta + p.epsilon;
    let lb = TwoFloat::from(p.lambda) * p.beta;
    let d_e = TwoFloat::from(p.delta) - p.epsilon;
    let zz = TwoFloat::from(z);
    // (m+1)(m+γ) c_{m+1} = [(δ−ε)m − q] c_m + [(m−1)(m−2+γ+δ+ε) + λβ] c_{m−1}
    let (mut c_prev, mut c) = (TwoFloat::from(0.0), TwoFloat::from(1.0));
    let (mut value, mut d1, mut d2) = (TwoFloat::from(0.0), TwoFloat::from(0.0), TwoFloat::from(0.0));
    let (mut zm2, mut zm1, mut zm) = (TwoFloat::from(0.0), TwoFloat::from(0.0), TwoFloat::from(1.0));
    let mut quiet = 0;
    let mut last = f64::NAN;
    for m in 0..TERM_CAP {
        let mf = m as f64;
        let t0 = c * zm;
        let t1 = c * zm1 * mf;
        let t2 = c * zm2 * (mf * (mf - 1.0));
        value += t0;
        d1 += t1;
        d2 += t2;
        let (v, g1, g2) = (value.hi(), d1.hi(), d2.hi());
        last = t0.hi().abs().max(t1.hi().abs()).max(t2.hi().abs());
        let small = |t: TwoFloat, s: f64| t.hi().abs() <= SERIES_EPS * s.abs().max(1e-300);
        if m > 2 && small(t0, v) && small(t1, g1) && small(t2, g2) {
            quiet += 1;
            if quiet >= 4 {
                // Geometric tail bound for the second derivative, the slowest series.
                let tail = last * z.abs() / (1.0 - z.abs());
                let scale = v.abs().max(g1.abs()).max(g2.abs());
                if tail > HEUN_TAIL_TOL * scale {
                    return Err(Error::NonConvergence {
                        function: "heun_local",
                        terms: m + 1,
                        last_term: tail / scale,
                    });
                }
                return Ok(SeriesValue {
                    value: v,
                    d1: g1,
                    d2: g2,
                    terms: m + 1,
                });
            }
        } else {
            quiet = 0;
        }
        let next = dd_div(
            (d_e * mf - p.q) * c + ((sum_gde + (mf - 2.0)) * (mf - 1.0) + lb) * c_prev,
            (TwoFloat::from(p.gamma) + mf) * (mf + 1.0),
        );
        c_prev = c;
        c = next;
        zm2 = zm1;
        zm1 = zm;
        zm *= zz;
        if !v.is_finite() {
            break;
        }
    }
    Err(Error::NonConvergence {
        function: "heun_local",
        terms: TERM_CAP,
        last_term: last,
    })
}

pub fn heun_local(p: &HeunParams, z: f64) -> Result<f64> {
    heun_local_full(p, z).map(|s| s.value)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex Γ(z) by the Lanczos approximation (about 15 significant digits),
/// with reflection for `Re z < ½`.
pub fn gamma_complex(z: Complex64) -> Complex64 {
    use std::f64::consts::PI;
    if z.re < 0.5 {
        let s = (z * PI).sin();
        return Complex64::new(PI, 0.0) / (s * gamma_complex(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * x
}

/// Direct complex series, `|z| < 1`.
fn gauss_2f1_series_c(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut quiet = 0;
    for m in 0..TERM_CAP {
        let mf = m as f64;
        term *= (a + mf) * (b + mf) / ((c + mf) * (mf + 1.0)) * z;
        sum += term;
        if term.norm() <= SERIES_EPS * sum.norm() {
            quiet += 1;
            if quiet >= 3 {
                return Ok(sum);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::NonConvergence {
        function: "gauss_2f1_complex",
        terms: TERM_CAP,
        last_term: term.norm() / sum.norm(),
    })
}

/// `₂F₁(a, b; c; x)` for complex parameters and real `x < 1`.
///
/// `|x| ≤ ½` uses the series directly, `−2 ≤ x < −½` the Pfaff transform and
/// `x < −2` the `1/x` connection formula, which needs `a − b` non-integer.
pub fn gauss_2f1_complex(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if x.abs() <= 0.5 || (0.0..1.0).contains(&x) {
        return gauss_2f1_series_c(a, b, c, Complex64::new(x, 0.0));
    }
    if x >= 1.0 {
        return Err(Error::ParameterDomain {
            function: "gauss_2f1_complex",
            reason: format!("x = {x} on or beyond the branch point"),
        });
    }
    if x >= -2.0 {
        let w = x / (x - 1.0);
        let f = gauss_2f1_series_c(a, c - b, c, Complex64::new(w, 0.0))?;
        return Ok(Complex64::new(1.0 - x, 0.0).powc(-a) * f);
    }
    let d = a - b;
    if (d.im.abs() < 1e-12) && neg_integer(-d.re.abs()).is_some() {
        return Err(Error::ParameterDomain {
            function: "gauss_2f1_complex",
            reason: "a − b is an integer; the 1/x connection formula is singular".into(),
        });
    }
    let inv = Complex64::new(1.0 / x, 0.0);
    let ln_mx = (-x).ln();
    let g = gamma_complex;
    let t1 = g(c) * g(b - a) / (g(b) * g(c - a)) * (-a * ln_mx).exp()
        * gauss_2f1_series_c(a, a - c + one, a - b + one, inv)?;
    let t2 = g(c) * g(a - b) / (g(a) * g(c - b)) * (-b * ln_mx).exp()
        * gauss_2f1_series_c(b, b - c + one, b - a + one, inv)?;
    Ok(t1 + t2)
}
