//! Wigner small-d functions and residual checks of the recurrences used to
//! separate the angular variables.
//!
//! The angular factors are `D_σ = D^j_{-m,σ}(φ, θ, 0)`. The `φ` phase cancels
//! in every identity checked here, so only `d^j_{-m,σ}(θ)` is evaluated.
//! Convention: `d^j_{m'm}(θ) = <j m'| exp(-iθ J_y) |j m>`, for which
//! `d^1_{10}(θ) = -sin θ / √2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{check_admissible, HalfInt, MonopoleCharge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WignerIndex {
    pub j: HalfInt,
    pub m1: HalfInt,
    pub m2: HalfInt,
}

impl WignerIndex {
    pub fn new(j: HalfInt, m1: HalfInt, m2: HalfInt) -> Result<Self> {
        let idx = WignerIndex { j, m1, m2 };
        if idx.in_range() {
            Ok(idx)
        } else {
            Err(Error::Domain(format!("invalid Wigner index j = {j}, m1 = {m1}, m2 = {m2}")))
        }
    }

    fn in_range(&self) -> bool {
        let (j, a, b) = (self.j.twice(), self.m1.twice(), self.m2.twice());
        j >= 0 && a.abs() <= j && b.abs() <= j && (j - a) % 2 == 0 && (j - b) % 2 == 0
    }
}

fn ln_factorial(n: i32) -> f64 {
    (2..=n).map(|k| f64::from(k).ln()).sum()
}

/// Summation terms of the finite Jacobi sum: `(sign·weight, cos power, sin power)`.
fn jacobi_terms(idx: &WignerIndex) -> Vec<(f64, i32, i32)> {
    // work in integers: j + m etc. are integers for a valid index
    let j2 = idx.j.twice();
    let (jp_m1, jm_m1) = ((j2 + idx.m1.twice()) / 2, (j2 - idx.m1.twice()) / 2);
    let (jp_m2, jm_m2) = ((j2 + idx.m2.twice()) / 2, (j2 - idx.m2.twice()) / 2);
    let dm = (idx.m1.twice() - idx.m2.twice()) / 2;
    let prefactor = 0.5
        * (ln_factorial(jp_m1) + ln_factorial(jm_m1) + ln_factorial(jp_m2) + ln_factorial(jm_m2));

    let s_min = 0.max(-dm);
    let s_max = jp_m2.min(jm_m1);
    (s_min..=s_max)
        .map(|s| {
            let ln_w = prefactor
                - ln_factorial(jp_m2 - s)
                - ln_factorial(s)
                - ln_factorial(dm + s)
                - ln_factorial(jm_m1 - s);
            let sign = if (dm + s).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            (sign * ln_w.exp(), j2 - dm - 2 * s, dm + 2 * s)
        })
        .collect()
}

fn check_theta(theta: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::Domain(format!("theta = {theta} outside [0, π]")));
    }
    Ok(())
}

/// `d^j_{m1,m2}(θ)` by the explicit factorial sum.
pub fn small_d(idx: WignerIndex, theta: f64) -> Result<f64> {
    if !idx.in_range() {
        return Err(Error::Domain(format!("invalid Wigner index {idx:?}")));
    }
    check_theta(theta)?;
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    Ok(jacobi_terms(&idx)
        .into_iter()
        .map(|(w, pc, ps)| w * c.powi(pc) * s.powi(ps))
        .sum())
}

/// `∂_θ d^j_{m1,m2}(θ)`, differentiating the factorial sum term by term.
pub fn small_d_derivative(idx: WignerIndex, theta: f64) -> Result<f64> {
    if !idx.in_range() {
        return Err(Error::Domain(format!("invalid Wigner index {idx:?}")));
    }
    check_theta(theta)?;
    let (c, s) = ((0.5 * theta).cos(), (0.5 * theta).sin());
    let pow = |x: f64, p: i32| if p < 0 { 0.0 } else { x.powi(p) };
    Ok(jacobi_terms(&idx)
        .into_iter()
        .map(|(w, pc, ps)| {
            let dc = if pc > 0 { -f64::from(pc) * pow(c, pc - 1) * pow(s, ps + 1) } else { 0.0 };
            let ds = if ps > 0 { f64::from(ps) * pow(c, pc + 1) * pow(s, ps - 1) } else { 0.0 };
            0.5 * w * (dc + ds)
        })
        .sum())
}

/// `d^j_{-m,σ}(θ)`, or zero when `|σ| > j`.
fn d_row(j: HalfInt, m: HalfInt, sigma: HalfInt, theta: f64) -> Result<f64> {
    if sigma.abs() > j {
        return Ok(0.0);
    }
    small_d(WignerIndex::new(j, -m, sigma)?, theta)
}

fn d_row_derivative(j: HalfInt, m: HalfInt, sigma: HalfInt, theta: f64) -> Result<f64> {
    if sigma.abs() > j {
        return Ok(0.0);
    }
    small_d_derivative(WignerIndex::new(j, -m, sigma)?, theta)
}

/// Largest absolute residual of the six first-order recurrences connecting
/// `D_{k-2}, …, D_{k+2}` (generic `j`), or of the pair that survives at the
/// minimum `j = |k| - 1`, evaluated on the interior grid `thetas`.
pub fn check_recurrences(j: HalfInt, k: MonopoleCharge, m: HalfInt, thetas: &[f64]) -> Result<f64> {
    check_admissible(k, j)?;
    if m.abs() > j || !m.same_parity(j) {
        return Err(Error::Domain(format!("m = {m} invalid for j = {j}")));
    }
    if let Some(t) = thetas.iter().find(|t| !(**t > 0.0 && **t < std::f64::consts::PI)) {
        return Err(Error::Domain(format!("theta = {t} is not interior to (0, π)")));
    }
    let one = HalfInt::from_int(1);
    let kk = k.half_int();
    let mut worst = 0.0f64;

    if j < kk.abs() {
        // j = |k| - 1: D_{k∓1} with the single coefficient sqrt((|k| - 1)/2)
        let (sigma, next) = if kk.twice() > 0 { (kk - one, kk - one - one) } else { (kk + one, kk + one + one) };
        let coef = ((kk.abs().value() - 1.0) / 2.0).sqrt();
        // for negative k the ladder runs upwards; the sign of the derivative term flips
        let dir = if kk.twice() > 0 { 1.0 } else { -1.0 };
        for &t in thetas {
            let d = d_row(j, m, sigma, t)?;
            let dd = d_row_derivative(j, m, sigma, t)?;
            let dn = d_row(j, m, next, t)?;
            let x = (-m.value() - sigma.value() * t.cos()) / t.sin();
            worst = worst.max((dd - dir * coef * dn).abs());
            worst = worst.max((x * d + coef * dn).abs());
        }
        return Ok(worst);
    }

    let c = crate::quantum::couplings(j, k)?;
    // (σ, lowering coefficient, raising coefficient)
    let rows = [(kk - one, c.a, c.c), (kk, c.c, c.d), (kk + one, c.d, c.b)];
    for &t in thetas {
        for &(sigma, lo, hi) in &rows {
            if sigma.abs() > j {
                continue;
            }
            let d = d_row(j, m, sigma, t)?;
            let dd = d_row_derivative(j, m, sigma, t)?;
            let below = d_row(j, m, sigma - one, t)?;
            let above = d_row(j, m, sigma + one, t)?;
            let x = (-m.value() - sigma.value() * t.cos()) / t.sin();
            worst = worst.max((dd - (lo * below - hi * above)).abs());
            worst = worst.max((x * d - (-lo * below - hi * above)).abs());
        }
    }
    Ok(worst)
}

/// `n` equally spaced interior points of `(0, π)`.
pub fn interior_grid(n: usize) -> Vec<f64> {
    let h = std::f64::consts::PI / (n as f64 + 1.0);
    (1..=n).map(|i| i as f64 * h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn idx(j: &str, a: &str, b: &str) -> WignerIndex {
        WignerIndex::new(h(j), h(a), h(b)).unwrap()
    }

    #[test]
    fn closed_forms() {
        let v = small_d(idx("1/2", "1/2", "1/2"), PI / 3.0).unwrap();
        assert!((v - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let v = small_d(idx("1", "0", "0"), PI / 2.0).unwrap();
        assert!(v.abs() < 1e-15);
        let t = 0.7;
        let v = small_d(idx("1", "1", "0"), t).unwrap();
        assert!((v + t.sin() / 2f64.sqrt()).abs() < 1e-15);
        let v = small_d(idx("1", "1", "1"), t).unwrap();
        assert!((v - (1.0 + t.cos()) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn identity_rotation() {
        for j2 in 0..=12 {
            for m2 in (-j2..=j2).step_by(2) {
                let i = WignerIndex::new(HalfInt::from_twice(j2), HalfInt::from_twice(m2), HalfInt::from_twice(m2)).unwrap();
                assert!((small_d(i, 0.0).unwrap() - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn transpose_symmetry() {
        for j2 in 0..=10 {
            for a in (-j2..=j2).step_by(2) {
                for b in (-j2..=j2).step_by(2) {
                    let j = HalfInt::from_twice(j2);
                    let (ma, mb) = (HalfInt::from_twice(a), HalfInt::from_twice(b));
                    let sign = if ((a - b) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let t = 1.1;
                    let l = small_d(WignerIndex::new(j, ma, mb).unwrap(), t).unwrap();
                    let r = small_d(WignerIndex::new(j, mb, ma).unwrap(), t).unwrap();
                    assert!((l - sign * r).abs() < 1e-13);
                }
            }
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        let i = idx("5/2", "1/2", "-3/2");
        for &t in &[0.3, 1.2, 2.5] {
            let hh = 1e-5;
            let fd = (small_d(i, t + hh).unwrap() - small_d(i, t - hh).unwrap()) / (2.0 * hh);
            assert!((small_d_derivative(i, t).unwrap() - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn index_errors() {
        assert!(WignerIndex::new(h("1"), h("2"), h("0")).is_err());
        assert!(WignerIndex::new(h("1"), h("1/2"), h("0")).is_err());
        assert!(small_d(idx("1", "0", "0"), -0.1).is_err());
    }

    /// Gauss–Legendre nodes and weights on [-1, 1] by Newton iteration.
    fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
        (1..=n)
            .map(|i| {
                let mut x = (PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-16 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    }

    #[test]
    fn orthogonality() {
        let nodes = gauss_legendre(40);
        for (a, b) in [(1i32, 1i32), (1, -1), (0, 2), (3, 1)] {
            for j2 in 0..=8 {
                for jp2 in 0..=8 {
                    if (j2 - a) % 2 != 0 || (jp2 - a) % 2 != 0 || (j2 - b) % 2 != 0 {
                        continue;
                    }
                    if a.abs() > j2 || b.abs() > j2 || a.abs() > jp2 || b.abs() > jp2 {
                        continue;
                    }
                    let i1 = WignerIndex::new(HalfInt::from_twice(j2), HalfInt::from_twice(a), HalfInt::from_twice(b)).unwrap();
                    let i2 = WignerIndex::new(HalfInt::from_twice(jp2), HalfInt::from_twice(a), HalfInt::from_twice(b)).unwrap();
                    // ∫ d d sinθ dθ = ∫_{-1}^{1} d d dx with x = cosθ
                    let integral: f64 = nodes
                        .iter()
                        .map(|&(x, w)| w * small_d(i1, x.acos()).unwrap() * small_d(i2, x.acos()).unwrap())
                        .sum();
                    let expect = if j2 == jp2 { 2.0 / (f64::from(j2) + 1.0) } else { 0.0 };
                    assert!((integral - expect).abs() < 1e-8, "j2={j2} jp2={jp2} a={a} b={b}: {integral}");
                }
            }
        }
    }

    #[test]
    fn recurrence_examples() {
        let grid = interior_grid(50);
        let k1 = MonopoleCharge(h("1"));
        assert!(check_recurrences(h("2"), k1, h("0"), &grid).unwrap() <= 1e-12);
        let kh = MonopoleCharge(h("1/2"));
        assert!(check_recurrences(h("1/2"), kh, h("1/2"), &grid).unwrap() <= 1e-12);
        // endpoints rejected
        assert!(check_recurrences(h("2"), k1, h("0"), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn minimum_j_recurrences() {
        let grid = interior_grid(50);
        for k in ["3/2", "2", "5/2", "3", "-3/2", "-2", "-3"] {
            let k = MonopoleCharge(h(k));
            let j = k.half_int().abs() - HalfInt::from_int(1);
            for m2 in (-j.twice()..=j.twice()).step_by(2) {
                let r = check_recurrences(j, k, HalfInt::from_twice(m2), &grid).unwrap();
                assert!(r <= 1e-12, "k={k} m2={m2}: {r}");
            }
        }
    }
}
