//! One-dimensional radial problems `u″ + Q(r) u = 0` and the closed-form
//! solutions that go with them.
//!
//! For problems linear in the energy, `Q = 2M·w·E − V_eff(r)`. The relativistic
//! minimum-j Coulomb problem on hyperbolic space is quadratic in `ε`:
//! `Q = (ε + α coth r)² − M²`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixing::mixing_problem;
use crate::oracle::Grid;
use crate::quantum::{classify, Channel, ChannelClass, Geometry, HalfInt, Potential, Scenario};
use crate::specfun::{gauss_2f1, gauss_2f1_complex, kummer_1f1};
use crate::spectra::EnergyLevel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialGeometry {
    Flat,
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Linearity {
    LinearInE,
    /// `Q = (ε + α coth r)² − M²`.
    QuadraticInEpsilon { alpha: f64 },
}

/// Behaviour of `V_eff/(2Mw)` as `r → ∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FarField {
    /// Grows without bound: purely discrete spectrum.
    Confining,
    /// Finite limit: bound states lie strictly below `edge`.
    Edge { edge: f64 },
    /// Levels accumulate at `edge` (flat Coulomb).
    Accumulating { edge: f64 },
}

/// `V_eff(r)` is the sum of the terms below, with
/// flat: `centrifugal/r² − coulomb/r + oscillator·r²`;
/// hyperbolic: `centrifugal/sinh² r − coulomb·coth r + oscillator·tanh² r
/// + parity·(1 + cosh r)/sinh² r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    pub geometry: RadialGeometry,
    pub mass: f64,
    pub weight: f64,
    pub centrifugal: f64,
    pub coulomb: f64,
    pub oscillator: f64,
    pub parity: f64,
    pub linearity: Linearity,
    /// Frobenius exponent of the regular solution at `r = 0`.
    pub origin_exponent: f64,
    pub far_field: FarField,
    pub channel: Channel,
    pub j2: i32,
    /// Tag of the equation this problem encodes.
    pub provenance: String,
}

impl RadialProblem {
    pub fn v_eff(&self, r: f64) -> f64 {
        match self.geometry {
            RadialGeometry::Flat => {
                let mut v = self.oscillator * r * r;
                if self.centrifugal != 0.0 {
                    v += self.centrifugal / (r * r);
                }
                if self.coulomb != 0.0 {
                    v -= self.coulomb / r;
                }
                v
            }
            RadialGeometry::Hyperbolic => {
                let mut v = 0.0;
                if self.centrifugal != 0.0 {
                    v += self.centrifugal / r.sinh().powi(2);
                }
                if self.coulomb != 0.0 {
                    v -= self.coulomb / r.tanh();
                }
                if self.oscillator != 0.0 {
                    v += self.oscillator * r.tanh().powi(2);
                }
                if self.parity != 0.0 {
                    // (1 + cosh r)/sinh² r = 1/(2 sinh²(r/2))
                    v += self.parity / (2.0 * (0.5 * r).sinh().powi(2));
                }
                v
            }
        }
    }

    /// `Q(r)` in `u″ + Q u = 0` at energy `e` (or `ε` for quadratic problems).
    pub fn q(&self, r: f64, e: f64) -> f64 {
        match self.linearity {
            Linearity::LinearInE => 2.0 * self.mass * self.weight * e - self.v_eff(r),
            Linearity::QuadraticInEpsilon { alpha } => {
                let t = e + alpha / r.tanh();
                t * t - self.mass * self.mass
            }
        }
    }

    /// Decay rate `κ` of `e^{−κr}` at large `r`, if the far field is classically forbidden.
    pub fn decay_rate(&self, e: f64) -> Option<f64> {
        let q_inf = match self.linearity {
            Linearity::QuadraticInEpsilon { alpha } => (e + alpha).powi(2) - self.mass * self.mass,
            Linearity::LinearInE => match self.far_field {
                FarField::Edge { edge } | FarField::Accumulating { edge } => 2.0 * self.mass * self.weight * (e - edge),
                FarField::Confining => return Some(f64::INFINITY),
            },
        };
        (q_inf < 0.0).then(|| (-q_inf).sqrt())
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.linearity, Linearity::LinearInE)
    }

    pub fn j(&self) -> HalfInt {
        HalfInt::from_twice(self.j2)
    }
}

fn frobenius_exponent(coef: f64) -> f64 {
    0.5 + (0.25 + coef).sqrt()
}

/// Radial problem for a scenario and channel. The hyperbolic radius is not
/// used: hyperbolic problems are in curvature units.
pub fn build_problem(scenario: &Scenario, channel: Channel, j: HalfInt) -> Result<RadialProblem> {
    scenario.validate()?;
    let m = scenario.mass;
    let k = scenario.charge;
    let class = classify(k, j);
    let unsupported = || {
        Err(Error::Unsupported(format!(
            "no radial problem for {} in channel {channel} at j = {j}, k = {k}",
            scenario.tag()
        )))
    };
    let (coulomb, oscillator) = match scenario.potential {
        Potential::None => (0.0, 0.0),
        Potential::Coulomb { alpha } => (2.0 * m * alpha, 0.0),
        Potential::Oscillator { k_osc } => (0.0, m * k_osc),
    };
    let base = RadialProblem {
        geometry: RadialGeometry::Flat,
        mass: m,
        weight: 1.0,
        centrifugal: 0.0,
        coulomb,
        oscillator,
        parity: 0.0,
        linearity: Linearity::LinearInE,
        origin_exponent: 1.0,
        far_field: FarField::Confining,
        channel,
        j2: j.twice(),
        provenance: String::new(),
    };
    match scenario.geometry {
        Geometry::Flat => {
            let l = match (channel, class) {
                (Channel::MinJ, ChannelClass::MinimumJ) => 0.0,
                (Channel::BranchA(i), c) if c != ChannelClass::MinimumJ => mixing_problem(j, k)?.roots.branch(i)?.1,
                _ => return unsupported(),
            };
            let far_field = match scenario.potential {
                Potential::None => FarField::Edge { edge: 0.0 },
                Potential::Coulomb { .. } => FarField::Accumulating { edge: 0.0 },
                Potential::Oscillator { .. } => FarField::Confining,
            };
            Ok(RadialProblem {
                centrifugal: l * (l + 1.0),
                origin_exponent: l + 1.0,
                far_field,
                provenance: format!("flat-{}-effective-l", potential_word(scenario.potential)),
                ..base
            })
        }
        Geometry::Lobachevsky { .. } => {
            let hyper = RadialProblem {
                geometry: RadialGeometry::Hyperbolic,
                ..base
            };
            let edge = match scenario.potential {
                Potential::None => 0.0,
                Potential::Coulomb { alpha } => -alpha,
                Potential::Oscillator { k_osc } => 0.5 * k_osc,
            };
            if channel == Channel::MinJ {
                if class != ChannelClass::MinimumJ {
                    return unsupported();
                }
                return Ok(match scenario.potential {
                    Potential::Oscillator { .. } => RadialProblem {
                        far_field: FarField::Edge { edge },
                        provenance: "lob-min-j-oscillator".into(),
                        ..hyper
                    },
                    Potential::Coulomb { alpha } => RadialProblem {
                        coulomb: 0.0,
                        linearity: Linearity::QuadraticInEpsilon { alpha },
                        origin_exponent: 0.5 * (1.0 + (1.0 - 4.0 * alpha * alpha).max(0.0).sqrt()),
                        far_field: FarField::Edge { edge: m - alpha },
                        provenance: "lob-min-j-coulomb-relativistic".into(),
                        ..hyper
                    },
                    Potential::None => RadialProblem {
                        linearity: Linearity::QuadraticInEpsilon { alpha: 0.0 },
                        far_field: FarField::Edge { edge: m },
                        provenance: "lob-min-j-free-relativistic".into(),
                        ..hyper
                    },
                });
            }
            if k.is_monopole() || !j.is_integer() {
                return unsupported();
            }
            let jv = j.value();
            let field = scenario.potential != Potential::None;
            let parity = match channel {
                Channel::ParityOdd => 0.0,
                Channel::ParityEven(1) if !field => jv + 1.0,
                Channel::ParityEven(2) if !field && j.twice() >= 2 => -jv,
                Channel::HeunChannel1 if field && j.twice() >= 2 => jv + 1.0,
                Channel::HeunChannel2 if field && j.twice() >= 2 => -jv,
                _ => return unsupported(),
            };
            let centrifugal = jv * (jv + 1.0);
            let provenance = match channel {
                Channel::ParityOdd => format!("lob-{}-parity-odd", potential_word(scenario.potential)),
                Channel::ParityEven(i) => format!("lob-free-parity-even-{i}"),
                Channel::HeunChannel1 => format!("lob-{}-heun-1", potential_word(scenario.potential)),
                _ => format!("lob-{}-heun-2", potential_word(scenario.potential)),
            };
            Ok(RadialProblem {
                centrifugal,
                parity,
                // (1 + cosh r)/sinh² r ≈ 2/r² near the origin
                origin_exponent: frobenius_exponent(centrifugal + 2.0 * parity),
                far_field: FarField::Edge { edge },
                provenance,
                ..hyper
            })
        }
    }
}

fn potential_word(p: Potential) -> &'static str {
    match p {
        Potential::None => "free",
        Potential::Coulomb { .. } => "coulomb",
        Potential::Oscillator { .. } => "oscillator",
    }
}

/// Sampled closed-form solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialSolution {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Name of the construction used.
    pub closed_form: String,
    /// Exponents and hypergeometric parameters of the construction.
    pub params: BTreeMap<String, f64>,
    /// `sqrt(∫ u² dr)` over the grid (trapezoidal), when meaningful.
    pub norm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl RadialSolution {
    /// Samples `f` at every grid node.
    pub fn new(grid: &Grid, closed_form: &str, params: &[(&str, f64)], f: impl Fn(f64) -> Result<f64>) -> Result<Self> {
        let rs = grid.nodes();
        let values = rs.iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?;
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("{closed_form}: non-finite value at r = {}", rs[bad])));
        }
        let norm = Some(trapezoid_norm(&rs, &values));
        Ok(RadialSolution {
            grid: rs,
            values,
            closed_form: closed_form.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            norm,
            note: None,
        })
    }

    /// Sign changes, ignoring samples below `1e-10·max|u|`.
    pub fn nodes(&self) -> usize {
        count_sign_changes(&self.values)
    }

    /// Two-column CSV with a `#`-prefixed JSON header line.
    pub fn to_csv(&self, residual: Option<f64>) -> String {
        let header = serde_json::json!({
            "closed_form": self.closed_form,
            "params": self.params,
            "norm": self.norm,
            "residual": residual,
            "note": self.note,
        });
        let mut out = format!("# {header}\nr,u\n");
        for (r, u) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{},{}\n", fmt12(*r), fmt12(*u)));
        }
        out
    }
}

/// 12 significant digits, locale-free.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        "0".into()
    } else {
        format!("{x:.11e}")
    }
}

pub fn count_sign_changes(values: &[f64]) -> usize {
    let max = values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let mut last = 0.0f64;
    let mut count = 0;
    for &v in values {
        if v.abs() <= 1e-10 * max {
            continue;
        }
        if last != 0.0 && v.signum() != last.signum() {
            count += 1;
        }
        last = v;
    }
    count
}

fn trapezoid_norm(r: &[f64], u: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 1..r.len() {
        s += 0.5 * (r[i] - r[i - 1]) * (u[i] * u[i] + u[i - 1] * u[i - 1]);
    }
    s.sqrt()
}

/// Least-squares slope of `ln|u|` against `ln r`.
pub fn log_log_slope(r: &[f64], u: &[f64]) -> f64 {
    let pts: Vec<(f64, f64)> = r
        .iter()
        .zip(u)
        .filter(|(r, u)| **r > 0.0 && u.abs() > 0.0)
        .map(|(r, u)| (r.ln(), u.abs().ln()))
        .collect();
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / n, sy / n);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, y) in &pts {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

/// Closed-form bound-state wavefunction of `level` on `problem`, sampled on `grid`.
///
/// Heun-channel levels have no closed form (only the local Heun series, see
/// `heunspec`), so they are rejected, as are inadmissible levels.
pub fn analytic_solution(problem: &RadialProblem, level: &EnergyLevel, grid: &Grid) -> Result<RadialSolution> {
    if !level.admissible {
        return Err(Error::Inadmissible(format!(
            "no bound-state solution: {}",
            level.reason.as_deref().unwrap_or("inadmissible level")
        )));
    }
    polynomial_solution(problem, level, grid)
}

/// Same as [`analytic_solution`] without the admissibility gate: the
/// hypergeometric polynomial is built even when it does not decay.
pub fn polynomial_solution(problem: &RadialProblem, level: &EnergyLevel, grid: &Grid) -> Result<RadialSolution> {
    if problem.channel != level.channel || problem.j2 != level.j2 {
        return Err(Error::Consistency(format!(
            "level ({}, j2 = {}) does not belong to problem ({}, j2 = {})",
            level.channel, level.j2, problem.channel, problem.j2
        )));
    }
    let m = problem.mass;
    let n = level.n;
    let nf = f64::from(n);
    let pot = level.scenario.potential;
    match (problem.geometry, pot, problem.channel) {
        (RadialGeometry::Flat, Potential::Coulomb { .. }, _) => {
            let l = level.meta.l.unwrap_or(0.0);
            let e = level.energy;
            if !(e < 0.0) {
                return Err(Error::Domain("flat Coulomb bound state needs E < 0".into()));
            }
            let kappa = (-2.0 * m * e).sqrt();
            let c = 2.0 * l + 2.0;
            RadialSolution::new(
                grid,
                "flat-coulomb: u = r z^L e^{-z/2} 1F1(-n; 2L+2; z), z = 2 kappa r",
                &[("L", l), ("kappa", kappa), ("a", -nf), ("b", c)],
                |r| {
                    let z = 2.0 * kappa * r;
                    Ok(r * z.powf(l) * (-0.5 * z).exp() * kummer_1f1(-nf, c, z)?)
                },
            )
        }
        (RadialGeometry::Flat, Potential::Oscillator { k_osc }, _) => {
            let l = level.meta.l.unwrap_or(0.0);
            let s = (m * k_osc).sqrt();
            let c = l + 1.5;
            RadialSolution::new(
                grid,
                "flat-oscillator: u = r x^{L/2} e^{-x/2} 1F1(-n; L+3/2; x), x = sqrt(MK) r^2",
                &[("L", l), ("sqrt_mk", s), ("a", -nf), ("b", c)],
                |r| {
                    let x = s * r * r;
                    Ok(r * x.powf(0.5 * l) * (-0.5 * x).exp() * kummer_1f1(-nf, c, x)?)
                },
            )
        }
        (RadialGeometry::Hyperbolic, Potential::Coulomb { alpha }, Channel::ParityOdd) => {
            let jv = problem.j().value();
            let big_n = level.meta.big_n.unwrap_or(jv + 1.0 + nf);
            let b = (m * alpha - big_n * big_n) / (2.0 * big_n);
            let (p1, p2) = (jv + 1.0 + m * alpha / big_n, 2.0 * jv + 2.0);
            RadialSolution::new(
                grid,
                "lob-coulomb-parity-odd: u = x^{j+1} (1-x)^b 2F1(-n, j+1+M alpha/N; 2j+2; x), x = 1 - e^{-2r}",
                &[("N", big_n), ("b", b), ("a2", p1), ("c2", p2)],
                |r| {
                    let x = -(-2.0 * r).exp_m1();
                    Ok(x.powf(jv + 1.0) * (-2.0 * b * r).exp() * gauss_2f1(-nf, p1, p2, x)?)
                },
            )
        }
        (RadialGeometry::Hyperbolic, Potential::Coulomb { alpha }, Channel::MinJ) => {
            let eps = level
                .epsilon_rel
                .ok_or_else(|| Error::Domain("relativistic energy is not real for this n".into()))?;
            let nu = level.meta.big_n.unwrap_or(f64::NAN);
            let a = nu - nf;
            let b = 0.5 * (eps * alpha / nu - nu);
            let (p1, p2) = (2.0 * a + 2.0 * b + nf, 2.0 * a);
            RadialSolution::new(
                grid,
                "lob-min-j-coulomb: F = x^A (1-x)^B 2F1(-n, 2A+2B+n; 2A; x), x = 1 - e^{-2r}",
                &[("A", a), ("B", b), ("nu", nu), ("epsilon", eps)],
                |r| {
                    let x = -(-2.0 * r).exp_m1();
                    Ok(x.powf(a) * (-2.0 * b * r).exp() * gauss_2f1(-nf, p1, p2, x)?)
                },
            )
        }
        (RadialGeometry::Hyperbolic, Potential::Oscillator { k_osc }, Channel::ParityOdd | Channel::MinJ) => {
            let jv = if problem.channel == Channel::MinJ { 0.0 } else { problem.j().value() };
            let a = 0.25 * (1.0 - (1.0 + 4.0 * m * k_osc).sqrt());
            let b = 0.5 * (1.0 + jv);
            let (p1, p2) = (2.0 * (a + b) + nf, 2.0 * a + 0.5);
            RadialSolution::new(
                grid,
                "lob-oscillator: u = cosh^{2a} r sinh^{2b} r 2F1(-n, 2(a+b)+n; 2a+1/2; cosh^2 r)",
                &[("a", a), ("b", b), ("a2", p1), ("c2", p2)],
                |r| {
                    let y = r.cosh().powi(2);
                    Ok(r.cosh().powf(2.0 * a) * r.sinh().powf(2.0 * b) * gauss_2f1(-nf, p1, p2, y)?)
                },
            )
        }
        _ => Err(Error::Unsupported(format!(
            "no closed-form bound state for {} in channel {}",
            level.scenario.tag(),
            problem.channel
        ))),
    }
}

/// `u = e^{−κr}`, `κ = sqrt(−2ME)`: the flat-space minimum-j state without an
/// external field (`Ψ = e^{−κr}/r`), for any chosen `E < 0`.
///
/// `u(0) ≠ 0`, so the state sits outside the usual regular-at-origin class.
/// Its `L²(r² dr)` norm of `Ψ` (equal to the `L²(dr)` norm of `u`) is finite
/// and reported; whether it counts as a bound state is left open.
pub fn peculiar_state(energy: f64, mass: f64, grid: &Grid) -> Result<RadialSolution> {
    if !(energy < 0.0) {
        return Err(Error::Domain(format!("the peculiar state needs E < 0, got {energy}")));
    }
    let kappa = (-2.0 * mass * energy).sqrt();
    let mut sol = RadialSolution::new(grid, "flat-min-j-free: u = e^{-kappa r}", &[("kappa", kappa)], |r| {
        Ok((-kappa * r).exp())
    })?;
    sol.note = Some("u(0) != 0: psi = e^{-kappa r}/r is singular at the origin; normalizability class undecided".into());
    Ok(sol)
}

/// Problem matching [`peculiar_state`]: flat, no external field, `V_eff = 0`.
pub fn peculiar_problem(mass: f64) -> RadialProblem {
    RadialProblem {
        geometry: RadialGeometry::Flat,
        mass,
        weight: 1.0,
        centrifugal: 0.0,
        coulomb: 0.0,
        oscillator: 0.0,
        parity: 0.0,
        linearity: Linearity::LinearInE,
        origin_exponent: 0.0,
        far_field: FarField::Edge { edge: 0.0 },
        channel: Channel::MinJ,
        j2: 0,
        provenance: "flat-min-j-free".into(),
    }
}

/// Maximum scaled residual of `u″ + Q(r)u` on the interior of a uniform grid,
/// using a 4th-order central difference for `u″`:
/// `max|u″ + Q u| / max(|u″| + |Q u|)`.
pub fn residual(problem: &RadialProblem, solution: &RadialSolution, energy: f64) -> Result<f64> {
    let (r, u) = (&solution.grid, &solution.values);
    if r.len() < 204 {
        return Err(Error::Grid(format!(
            "residual needs at least 200 interior points, got {}",
            r.len().saturating_sub(4)
        )));
    }
    let h = r[1] - r[0];
    if r.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs().max(1e-300)) {
        return Err(Error::Grid("residual needs a uniform grid".into()));
    }
    if r[0] <= 0.0 {
        return Err(Error::Grid("residual grid must avoid r = 0".into()));
    }
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for i in 2..r.len() - 2 {
        let d2 = (-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h);
        let qu = problem.q(r[i], energy) * u[i];
        worst = worst.max((d2 + qu).abs());
        scale = scale.max(d2.abs() + qu.abs());
    }
    if scale == 0.0 {
        return Err(Error::Domain("solution vanishes on the residual grid".into()));
    }
    Ok(worst / scale)
}

/// Outcome of the free-particle standing-wave check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StandingWave {
    pub j2: i32,
    pub channel: Channel,
    pub two_m_e: f64,
    /// Fitted exponent of `u ~ r^s` near the origin.
    pub origin_slope: f64,
    pub expected_slope: f64,
    /// `max/min` of the envelope `sqrt(u² + (u′/k)²)` over the window.
    pub flatness: f64,
    pub window: (f64, f64),
    /// Largest ODE residual of the sampled solution.
    pub residual: f64,
}

/// Regular solution of the free hyperbolic equation at `2ME = k² > 0`:
/// `u = y^a (y−1)^b ₂F₁(λ, β; λ+β−γ+1; 1−y)`, `y = (cosh r + 1)/2`,
/// `a = (j+1)/2`, `γ = 2a + ½`, `λ, β = a + b ± ik`, with `b` fixed by the
/// channel's origin exponent `2b`.
pub fn free_regular_solution(problem: &RadialProblem, two_m_e: f64, r: f64) -> Result<f64> {
    let jv = problem.j().value();
    let a = 0.5 * (jv + 1.0);
    let b = 0.5 * problem.origin_exponent;
    let gamma = 2.0 * a + 0.5;
    let k = two_m_e.sqrt();
    let lam = Complex64::new(a + b, k);
    let bet = Complex64::new(a + b, -k);
    let c = lam + bet - gamma + 1.0;
    // y^a (y−1)^b = cosh^{2a}(r/2) sinh^{2b}(r/2)
    let pre = (0.5 * r).cosh().powf(2.0 * a) * (0.5 * r).sinh().powf(2.0 * b);
    let x = -(0.5 * r).sinh().powi(2); // 1 − y
    let f = gauss_2f1_complex(lam, bet, c, x)?;
    Ok(pre * f.re)
}

pub fn standing_wave_check(problem: &RadialProblem, two_m_e: f64, window: (f64, f64)) -> Result<StandingWave> {
    if problem.geometry != RadialGeometry::Hyperbolic || problem.coulomb != 0.0 || problem.oscillator != 0.0 {
        return Err(Error::Unsupported("standing-wave check needs the free hyperbolic problem".into()));
    }
    if !(two_m_e > 0.0) {
        return Err(Error::Domain(format!("standing waves need E > 0, got 2ME = {two_m_e}")));
    }
    let k = two_m_e.sqrt();
    // One wavelength plus several decay lengths of the 1/sinh² tail.
    if window.0 < 5.0 || window.1 - window.0 < 2.0 * std::f64::consts::PI / k {
        return Err(Error::Grid(format!(
            "window {window:?} too close to the origin or shorter than one wavelength"
        )));
    }
    let f = |r: f64| free_regular_solution(problem, two_m_e, r);

    let near = Grid::new(1e-3, 1e-2, 40)?.nodes();
    let near_u = near.iter().map(|&r| f(r)).collect::<Result<Vec<_>>>()?;
    let origin_slope = log_log_slope(&near, &near_u);

    let h = 1e-3;
    let mut env_min = f64::INFINITY;
    let mut env_max: f64 = 0.0;
    let samples = 400;
    for i in 0..=samples {
        let r = window.0 + (window.1 - window.0) * f64::from(i) / f64::from(samples);
        let u = f(r)?;
        let du = (f(r + h)? - f(r - h)?) / (2.0 * h);
        let env = (u * u + (du / k).powi(2)).sqrt();
        env_min = env_min.min(env);
        env_max = env_max.max(env);
    }

    let grid = Grid::new(0.05, window.1, 2400)?;
    let sol = RadialSolution::new(&grid, "lob-free", &[], f)?;
    let e = two_m_e / (2.0 * problem.mass);
    Ok(StandingWave {
        j2: problem.j2,
        channel: problem.channel,
        two_m_e,
        origin_slope,
        expected_slope: problem.origin_exponent,
        flatness: env_max / env_min,
        window,
        residual: residual(problem, &sol, e)?,
    })
}

/// Relativistic minimum-j equation without external field,
/// `F″ + (ε² − M²)F = 0`, with its regular branch:
/// `sin(kr)` above threshold, `r` at threshold, `e^{−κr}` below.
/// On hyperbolic space the second component `f₂ = (1 + cosh r)/(2 sinh r)·F`
/// is attached.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelativisticMinJ {
    pub solution: RadialSolution,
    pub f2: Option<Vec<f64>>,
    pub residual: f64,
}

pub fn relativistic_minj(epsilon: f64, mass: f64, hyperbolic: bool, grid: &Grid) -> Result<RelativisticMinJ> {
    if !(mass > 0.0) {
        return Err(Error::Domain(format!("mass must be positive, got {mass}")));
    }
    let w = epsilon * epsilon - mass * mass;
    let scale = (epsilon.abs() + mass).powi(2);
    let (form, kk): (&str, f64) = if w.abs() <= 1e-14 * scale {
        ("F = r", 0.0)
    } else if w > 0.0 {
        ("F = sin(k r)", w.sqrt())
    } else {
        ("F = e^{-kappa r}", (-w).sqrt())
    };
    let f = |r: f64| -> Result<f64> {
        Ok(match form {
            "F = r" => r,
            "F = sin(k r)" => (kk * r).sin(),
            _ => (-kk * r).exp(),
        })
    };
    let solution = RadialSolution::new(grid, form, &[("epsilon", epsilon), ("M", mass), ("k", kk)], f)?;
    let f2 = hyperbolic.then(|| {
        solution
            .grid
            .iter()
            .zip(&solution.values)
            .map(|(&r, &v)| (1.0 + r.cosh()) / (2.0 * r.sinh()) * v)
            .collect()
    });
    let problem = RadialProblem {
        linearity: Linearity::QuadraticInEpsilon { alpha: 0.0 },
        geometry: if hyperbolic { RadialGeometry::Hyperbolic } else { RadialGeometry::Flat },
        ..peculiar_problem(mass)
    };
    let residual = if w.abs() <= 1e-14 * scale {
        // u″ = 0 and Q = 0: nothing to scale against.
        let u = &solution.values;
        let h = solution.grid[1] - solution.grid[0];
        (2..u.len() - 2)
            .map(|i| ((-u[i - 2] + 16.0 * u[i - 1] - 30.0 * u[i] + 16.0 * u[i + 1] - u[i + 2]) / (12.0 * h * h)).abs())
            .fold(0.0, f64::max)
    } else {
        residual(&problem, &solution, epsilon)?
    };
    Ok(RelativisticMinJ {
        solution,
        f2,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::MonopoleCharge;
    use crate::spectra;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn lob(p: Potential, k: &str) -> Scenario {
        Scenario::new(Geometry::Lobachevsky { radius: 1.0 }, p, MonopoleCharge::new(h(k)), 1.0).unwrap()
    }

    #[test]
    fn problem_examples() {
        let s = Scenario::new(Geometry::Flat, Potential::Coulomb { alpha: 1.0 }, MonopoleCharge::new(h("1")), 1.0).unwrap();
        let p = build_problem(&s, Channel::MinJ, h("0")).unwrap();
        assert_eq!(p.origin_exponent, 1.0);
        assert_eq!(p.v_eff(2.0), -1.0);

        let p = build_problem(&lob(Potential::Coulomb { alpha: 10.0 }, "0"), Channel::ParityOdd, h("2")).unwrap();
        let r: f64 = 0.7;
        assert!((p.v_eff(r) - (6.0 / r.sinh().powi(2) - 20.0 / r.tanh())).abs() < 1e-12);
        assert_eq!(p.far_field, FarField::Edge { edge: -10.0 });

        let p = build_problem(&lob(Potential::None, "0"), Channel::ParityEven(1), h("1")).unwrap();
        let want = 2.0 / r.sinh().powi(2) + (1.0 + r.cosh()) * 2.0 / r.sinh().powi(2);
        assert!((p.v_eff(r) - want).abs() < 1e-12);
        assert_eq!(p.origin_exponent, 3.0);

        assert!(build_problem(&lob(Potential::None, "0"), Channel::HeunChannel1, h("1")).is_err());
        assert!(build_problem(&lob(Potential::Coulomb { alpha: 1.0 }, "1"), Channel::ParityOdd, h("2")).is_err());
    }

    #[test]
    fn flat_coulomb_residual_and_sensitivity() {
        let lv = spectra::flat_coulomb(1.0, 1.0, h("0"), MonopoleCharge::new(h("1")), 0, Channel::MinJ).unwrap();
        let s = lv.scenario;
        let p = build_problem(&s, Channel::MinJ, h("0")).unwrap();
        let grid = Grid::new(1e-4, 30.0, 30001).unwrap();
        let sol = analytic_solution(&p, &lv, &grid).unwrap();
        let res = residual(&p, &sol, lv.energy).unwrap();
        assert!(res <= 1e-8, "{res}");
        let bumped = residual(&p, &sol, lv.energy * 1.01).unwrap();
        assert!(bumped >= 10.0 * res);
        assert_eq!(sol.nodes(), 0);
    }

    #[test]
    fn peculiar_state_solves_free_equation() {
        let grid = Grid::new(1e-4, 20.0, 20001).unwrap();
        let sol = peculiar_state(-0.3, 1.0, &grid).unwrap();
        let res = residual(&peculiar_problem(1.0), &sol, -0.3).unwrap();
        assert!(res < 1e-8);
        assert!(peculiar_state(0.1, 1.0, &grid).is_err());
        assert!(sol.note.is_some());
    }

    #[test]
    fn relativistic_minj_forms() {
        let grid = Grid::new(0.01, 10.0, 2000).unwrap();
        let at = relativistic_minj(2.0, 2.0, false, &grid).unwrap();
        assert_eq!(at.solution.closed_form, "F = r");
        assert!(at.residual < 1e-6);
        let above = relativistic_minj(3.0, 2.0, false, &grid).unwrap();
        assert!(above.residual < 1e-10, "{}", above.residual);
        let below = relativistic_minj(1.0, 2.0, true, &grid).unwrap();
        assert_eq!(below.solution.closed_form, "F = e^{-kappa r}");
        assert!(below.f2.is_some());
        assert!(below.solution.values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn csv_has_header_and_rows() {
        let grid = Grid::new(0.1, 1.0, 10).unwrap();
        let sol = peculiar_state(-0.5, 1.0, &grid).unwrap();
        let csv = sol.to_csv(Some(1e-9));
        let mut lines = csv.lines();
        let head = lines.next().unwrap();
        assert!(head.starts_with("# {"));
        let v: serde_json::Value = serde_json::from_str(&head[2..]).unwrap();
        assert_eq!(v["closed_form"], "flat-min-j-free: u = e^{-kappa r}");
        assert_eq!(lines.next().unwrap(), "r,u");
        assert_eq!(lines.count(), 10);
    }
}
