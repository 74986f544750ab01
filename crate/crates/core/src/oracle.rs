//! Numerical reference eigenvalues: a 3-point finite-difference discretisation
//! solved by Sturm-sequence bisection, and a shooting integrator with
//! logarithmic-derivative matching.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radial::{FarField, Linearity, RadialGeometry, RadialProblem};
use crate::spectra::{flat_oscillator_candidates, OscillatorPrefactor};

/// Uniform grid of `points` nodes from `r_min` to `r_max`, both included.
///
/// As a finite-difference grid the two end nodes are Dirichlet walls and only
/// the `points − 2` interior nodes carry unknowns, so `r_min = 0` is allowed
/// there (the potential is never evaluated at the walls).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(r_min: f64, r_max: f64, points: usize) -> Result<Self> {
        if !(r_min >= 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(Error::Grid(format!("need 0 <= r_min < r_max, got [{r_min}, {r_max}]")));
        }
        if points < 3 {
            return Err(Error::Grid(format!("need at least 3 points, got {points}")));
        }
        Ok(Grid { r_min, r_max, points })
    }

    /// Parses `rmin:rmax:points`.
    pub fn parse(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Grid(format!("grid '{spec}' is not rmin:rmax:points")));
        }
        let num = |s: &str| s.trim().parse::<f64>().map_err(|e| Error::Grid(format!("grid '{spec}': {e}")));
        let points = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| Error::Grid(format!("grid '{spec}': {e}")))?;
        Grid::new(num(parts[0])?, num(parts[1])?, points)
    }

    pub fn h(&self) -> f64 {
        (self.r_max - self.r_min) / (self.points - 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.h();
        (0..self.points)
            .map(|i| if i + 1 == self.points { self.r_max } else { self.r_min + i as f64 * h })
            .collect()
    }

    /// Same walls, half the spacing.
    pub fn refined(&self) -> Grid {
        Grid {
            points: 2 * self.points - 1,
            ..*self
        }
    }

    /// Same spacing, box stretched by `factor`.
    pub fn stretched(&self, factor: f64) -> Grid {
        let h = self.h();
        let r_max = self.r_min + (self.r_max - self.r_min) * factor;
        let points = ((r_max - self.r_min) / h).round() as usize + 1;
        Grid {
            r_min: self.r_min,
            r_max: self.r_min + (points - 1) as f64 * h,
            points,
        }
    }
}

/// Symmetric tridiagonal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Oracle(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diag.len(),
                off.len()
            )));
        }
        Ok(SymTridiagonal { diag, off })
    }

    /// Number of eigenvalues strictly below `x` (Sturm count via the pivots of `T − xI = LDLᵀ`).
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.diag.len() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x - e2 / d;
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut rad = 0.0;
            if i > 0 {
                rad += self.off[i - 1].abs();
            }
            if i + 1 < n {
                rad += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - rad);
            hi = hi.max(self.diag[i] + rad);
        }
        (lo, hi)
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection.
    pub fn eigenvalue(&self, index: usize) -> Result<f64> {
        if index >= self.diag.len() {
            return Err(Error::Oracle(format!("eigenvalue {index} of a {}×{} matrix", self.diag.len(), self.diag.len())));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let span = (hi - lo).max(f64::MIN_POSITIVE);
        lo -= 1e-12 * span;
        hi += 1e-12 * span;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    pub fn lowest(&self, count: usize) -> Result<Vec<f64>> {
        (0..count).map(|i| self.eigenvalue(i)).collect()
    }
}

/// Finite-difference Hamiltonian `(−D² + V)/(2Mw)` on the interior nodes; its
/// eigenvalues are energies.
pub fn fd_matrix(problem: &RadialProblem, grid: &Grid) -> Result<SymTridiagonal> {
    if !problem.is_linear() {
        return Err(Error::Oracle(format!(
            "{} is quadratic in the energy; use shooting instead",
            problem.provenance
        )));
    }
    if grid.points < 5 {
        return Err(Error::Grid("finite differences need at least 5 nodes".into()));
    }
    let h = grid.h();
    let s = 1.0 / (2.0 * problem.mass * problem.weight);
    let nodes = grid.nodes();
    let interior = &nodes[1..nodes.len() - 1];
    let diag = interior.iter().map(|&r| (2.0 / (h * h) + problem.v_eff(r)) * s).collect();
    let off = vec![-s / (h * h); interior.len() - 1];
    SymTridiagonal::new(diag, off)
}

/// `h·sqrt(max |V_eff|)` over interior nodes with `r ≥ 1`; the singular
/// `1/r²`-type terms near the origin are excluded because no uniform grid can
/// satisfy the bound there.
pub fn resolution_measure(problem: &RadialProblem, grid: &Grid) -> f64 {
    let h = grid.h();
    let nodes = grid.nodes();
    let vmax = nodes[1..nodes.len() - 1]
        .iter()
        .filter(|&&r| r >= 1.0)
        .map(|&r| problem.v_eff(r).abs())
        .fold(0.0, f64::max);
    h * vmax.sqrt()
}

pub const RESOLUTION_LIMIT: f64 = 0.05;

fn check_resolution(problem: &RadialProblem, grid: &Grid) -> Result<()> {
    let m = resolution_measure(problem, grid);
    if m > RESOLUTION_LIMIT {
        return Err(Error::Grid(format!(
            "resolution heuristic violated: h·sqrt(max|V|) = {m:.4} > {RESOLUTION_LIMIT} for {}",
            problem.provenance
        )));
    }
    Ok(())
}

fn edge_of(problem: &RadialProblem) -> Option<f64> {
    match problem.far_field {
        FarField::Edge { edge } | FarField::Accumulating { edge } => Some(edge),
        FarField::Confining => None,
    }
}

/// Lowest `count` eigenvalues, ascending. Eigenvalues at or above a finite
/// continuum edge are box artefacts; asking for them is an error.
pub fn fd_eigen(problem: &RadialProblem, grid: &Grid, count: usize) -> Result<Vec<f64>> {
    check_resolution(problem, grid)?;
    let t = fd_matrix(problem, grid)?;
    if let Some(edge) = edge_of(problem) {
        let below = t.count_below(edge);
        if count > below {
            return Err(Error::Oracle(format!(
                "{count} levels requested but only {below} lie below the continuum edge {edge} for {}",
                problem.provenance
            )));
        }
    }
    t.lowest(count)
}

/// Finite-difference eigenvalues on `grid` and on the half-spacing grid,
/// combined by Richardson extrapolation `(4E_{h/2} − E_h)/3`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Richardson {
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    pub extrapolated: Vec<f64>,
}

pub fn fd_eigen_richardson(problem: &RadialProblem, grid: &Grid, count: usize) -> Result<Richardson> {
    let coarse = fd_eigen(problem, grid, count)?;
    let fine = fd_eigen(problem, &grid.refined(), count)?;
    let extrapolated = coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect();
    Ok(Richardson {
        coarse,
        fine,
        extrapolated,
    })
}

/// Number of FD eigenvalues strictly below the continuum edge, required to be
/// the same on `grid` and on a box 1.5 times longer at equal spacing.
pub fn count_bound_states(problem: &RadialProblem, grid: &Grid) -> Result<usize> {
    let edge = match problem.far_field {
        FarField::Edge { edge } => edge,
        FarField::Accumulating { .. } => {
            return Err(Error::Oracle(format!(
                "{}: levels accumulate at the edge, the count grows with the box",
                problem.provenance
            )))
        }
        FarField::Confining => {
            return Err(Error::Oracle(format!("{}: confining potential has no continuum edge", problem.provenance)))
        }
    };
    check_resolution(problem, grid)?;
    let first = fd_matrix(problem, grid)?.count_below(edge);
    let big = grid.stretched(1.5);
    let second = fd_matrix(problem, &big)?.count_below(edge);
    if first != second {
        return Err(Error::Oracle(format!(
            "{}: bound-state count changes from {first} to {second} when r_max grows from {} to {}; enlarge r_max",
            problem.provenance, grid.r_max, big.r_max
        )));
    }
    Ok(first)
}

/// Result of matching outward and inward integrations.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShootResult {
    pub energy: f64,
    /// `u′/u` (outward) minus `u′/u` (inward) at `r_match`.
    pub mismatch: f64,
    pub r_match: f64,
    /// Far-field decay rate used for the inward start.
    pub kappa: f64,
    /// Whether `|mismatch|` is within the eigenvalue tolerance.
    pub decays: bool,
}

pub const SHOOT_TOL: f64 = 1e-5;

fn rk4_step(problem: &RadialProblem, e: f64, r: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let f = |r: f64, y: [f64; 2]| [y[1], -problem.q(r, e) * y[0]];
    let k1 = f(r, y);
    let k2 = f(r + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
    let k3 = f(r + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
    let k4 = f(r + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
    ]
}

/// Adaptive RK4 (step doubling) from `r0` to `r1`; the state is rescaled
/// whenever it grows large, which leaves `u′/u` unchanged.
fn integrate(problem: &RadialProblem, e: f64, r0: f64, r1: f64, mut y: [f64; 2], tol: f64) -> Result<[f64; 2]> {
    let dir = (r1 - r0).signum();
    let mut h = dir * ((r1 - r0).abs() / 1000.0).min(1e-3 * r0.abs().max(1e-3));
    let mut r = r0;
    let mut steps = 0usize;
    while (r1 - r) * dir > 0.0 {
        if (r + h - r1) * dir > 0.0 {
            h = r1 - r;
        }
        let full = rk4_step(problem, e, r, y, h);
        let half = rk4_step(problem, e, r, y, 0.5 * h);
        let two = rk4_step(problem, e, r + 0.5 * h, half, 0.5 * h);
        let scale = y[0].abs() + y[1].abs() * h.abs() + 1e-300;
        let err = ((two[0] - full[0]).abs() + (two[1] - full[1]).abs() * h.abs()) / scale / 15.0;
        if err <= tol || h.abs() < 1e-12 {
            r += h;
            // Local extrapolation of the two half steps.
            y = [two[0] + (two[0] - full[0]) / 15.0, two[1] + (two[1] - full[1]) / 15.0];
            let big = y[0].abs().max(y[1].abs());
            if big > 1e100 || (big < 1e-100 && big > 0.0) {
                y = [y[0] / big, y[1] / big];
            }
            let grow = if err == 0.0 { 2.0 } else { (0.9 * (tol / err).powf(0.2)).clamp(0.2, 2.0) };
            h *= grow;
        } else {
            h *= (0.9 * (tol / err).powf(0.25)).clamp(0.1, 0.5);
        }
        steps += 1;
        if steps > 5_000_000 {
            return Err(Error::Oracle("shooting integrator exceeded its step budget".into()));
        }
        if !y[0].is_finite() || !y[1].is_finite() {
            return Err(Error::Oracle("shooting integrator produced non-finite values".into()));
        }
    }
    Ok(y)
}

/// Outermost point where `Q` changes sign from positive to negative, or the
/// midpoint of `[r_lo, r_hi]` if there is none.
fn matching_point(problem: &RadialProblem, e: f64, r_lo: f64, r_hi: f64) -> f64 {
    let n = 4000;
    let mut found = None;
    let mut prev = problem.q(r_lo, e);
    for i in 1..=n {
        let r = r_lo + (r_hi - r_lo) * f64::from(i) / f64::from(n);
        let q = problem.q(r, e);
        if prev > 0.0 && q <= 0.0 {
            found = Some(r);
        }
        prev = q;
    }
    found.unwrap_or(0.5 * (r_lo + r_hi))
}

/// Shooting test of a trial energy (or `ε` for quadratic problems).
///
/// Outward integration starts at `r0` from the regular Frobenius branch
/// `r^s (1 + c₁ r)`; inward integration starts at `r_max` from `e^{−κr}`.
pub fn shoot_decay(problem: &RadialProblem, e: f64, r_max: f64) -> Result<ShootResult> {
    problem
        .decay_rate(e)
        .ok_or_else(|| Error::Oracle(format!("no decaying far-field solution at {e} for {}", problem.provenance)))?;
    let q_end = problem.q(r_max, e);
    if q_end >= 0.0 {
        return Err(Error::Oracle(format!("r_max = {r_max} is not in the classically forbidden region at {e}")));
    }
    // Local decay rate at the inward starting point.
    let kappa = (-q_end).sqrt();
    let s = problem.origin_exponent;
    // First Frobenius correction for Q ≈ c/r² + g/r near the origin:
    // c₁ = −g / ((s + 1)s − s(s − 1)) = −g/(2s).
    // r²Q(r) + s(s − 1) = g·r + O(r²); estimate g numerically.
    let g = {
        let (r1, r2): (f64, f64) = (1e-4, 2e-4);
        let c = s * (s - 1.0);
        let q1 = problem.q(r1, e) * r1 * r1 + c;
        let q2 = problem.q(r2, e) * r2 * r2 + c;
        (q2 - q1) / (r2 - r1)
    };
    let c1 = -g / (2.0 * s);
    let r0: f64 = 1e-4;
    let start = [r0.powf(s) * (1.0 + c1 * r0), s * r0.powf(s - 1.0) * (1.0 + c1 * r0) + c1 * r0.powf(s)];
    let r_match = matching_point(problem, e, r0, r_max);
    let tol = 1e-11;
    let out = integrate(problem, e, r0, r_match, start, tol)?;
    let inn = integrate(problem, e, r_max, r_match, [1.0, -kappa], tol)?;
    let mismatch = out[1] / out[0] - inn[1] / inn[0];
    Ok(ShootResult {
        energy: e,
        mismatch,
        r_match,
        kappa,
        decays: mismatch.abs() <= SHOOT_TOL,
    })
}

/// Deviation of one closed-form value from the oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub label: String,
    pub analytic: f64,
    pub numeric: f64,
    pub abs_dev: f64,
    pub rel_dev: f64,
}

impl Comparison {
    pub fn new(label: impl Into<String>, analytic: f64, numeric: f64) -> Self {
        let abs_dev = (analytic - numeric).abs();
        Comparison {
            label: label.into(),
            analytic,
            numeric,
            abs_dev,
            rel_dev: abs_dev / analytic.abs().max(f64::MIN_POSITIVE),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountComparison {
    pub label: String,
    pub analytic: usize,
    pub numeric: usize,
    pub stable: bool,
}

/// Outcome of testing both flat-oscillator prefactors against the oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArbitrationVerdict {
    pub confirmed: OscillatorPrefactor,
    /// Worst relative deviation of the confirmed candidate, per grid.
    pub confirmed_max_rel_dev: Vec<f64>,
    /// Smallest relative deviation of the rejected candidate, per grid.
    pub rejected_min_rel_dev: Vec<f64>,
    /// FD level spacing `E(n+1) − E(n)` divided by `sqrt(K/M)`, per `L`.
    pub spacing_ratio: Vec<f64>,
    pub stable_across_grids: bool,
    pub comparisons: Vec<Comparison>,
}

/// Tests the two flat-oscillator candidates on each `(L, n)` and each grid.
/// Exactly one candidate must match every FD level within `rel_tol`.
pub fn arbitrate_oscillator_prefactor(
    k_osc: f64,
    mass: f64,
    ls: &[f64],
    n_max: u32,
    grids: &[Grid],
    rel_tol: f64,
) -> Result<ArbitrationVerdict> {
    let mut per_grid = Vec::new();
    let mut comparisons = Vec::new();
    let mut spacing_ratio = Vec::new();
    for (gi, grid) in grids.iter().enumerate() {
        let (mut worst_p, mut worst_q) = (0.0f64, 0.0f64);
        let (mut best_p, mut best_q) = (f64::INFINITY, f64::INFINITY);
        for &l in ls {
            let problem = flat_oscillator_problem(k_osc, mass, l);
            let fd = fd_eigen_richardson(&problem, grid, n_max as usize + 1)?.extrapolated;
            if gi == 0 {
                spacing_ratio.push((fd[1] - fd[0]) / (k_osc / mass).sqrt());
            }
            for n in 0..=n_max {
                let (p, q) = flat_oscillator_candidates(k_osc, mass, l, n);
                let e = fd[n as usize];
                let cp = Comparison::new(format!("grid{gi} L={l:.6} n={n} printed"), p, e);
                let cq = Comparison::new(format!("grid{gi} L={l:.6} n={n} quantization"), q, e);
                worst_p = worst_p.max(cp.rel_dev);
                worst_q = worst_q.max(cq.rel_dev);
                best_p = best_p.min(cp.rel_dev);
                best_q = best_q.min(cq.rel_dev);
                comparisons.push(cp);
                comparisons.push(cq);
            }
        }
        let verdict = match (worst_p <= rel_tol, worst_q <= rel_tol) {
            (true, false) => (OscillatorPrefactor::Printed, worst_p, best_q),
            (false, true) => (OscillatorPrefactor::Quantization, worst_q, best_p),
            (false, false) => {
                return Err(Error::Oracle(format!(
                    "neither oscillator candidate matches the oracle (worst rel. deviations {worst_p:.3e}, {worst_q:.3e})"
                )))
            }
            (true, true) => return Err(Error::Oracle("both oscillator candidates match; arbitration is vacuous".into())),
        };
        per_grid.push(verdict);
    }
    let first = per_grid
        .first()
        .ok_or_else(|| Error::Oracle("arbitration needs at least one grid".into()))?
        .0;
    Ok(ArbitrationVerdict {
        confirmed: first,
        confirmed_max_rel_dev: per_grid.iter().map(|v| v.1).collect(),
        rejected_min_rel_dev: per_grid.iter().map(|v| v.2).collect(),
        spacing_ratio,
        stable_across_grids: per_grid.iter().all(|v| v.0 == first),
        comparisons,
    })
}

/// `u″ + (2ME − L(L+1)/r² − MK r²)u = 0`.
pub fn flat_oscillator_problem(k_osc: f64, mass: f64, l: f64) -> RadialProblem {
    RadialProblem {
        geometry: RadialGeometry::Flat,
        mass,
        weight: 1.0,
        centrifugal: l * (l + 1.0),
        coulomb: 0.0,
        oscillator: mass * k_osc,
        parity: 0.0,
        linearity: Linearity::LinearInE,
        origin_exponent: l + 1.0,
        far_field: FarField::Confining,
        channel: crate::quantum::Channel::MinJ,
        j2: 0,
        provenance: format!("flat-oscillator-L={l}"),
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub problem: String,
    pub comparisons: Vec<Comparison>,
    pub counts: Vec<CountComparison>,
    pub verdicts: Vec<ArbitrationVerdict>,
    pub notes: Vec<String>,
}

impl OracleReport {
    pub fn new(problem: impl Into<String>) -> Self {
        OracleReport {
            problem: problem.into(),
            ..Default::default()
        }
    }

    pub fn max_rel_dev(&self) -> f64 {
        self.comparisons.iter().map(|c| c.rel_dev).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// Fixed-width text table.
    pub fn to_table(&self) -> String {
        let mut out = format!("# {}\n", self.problem);
        out.push_str(&format!(
            "{:<44} {:>20} {:>20} {:>12}\n",
            "level", "analytic", "numeric", "rel.dev"
        ));
        for c in &self.comparisons {
            out.push_str(&format!(
                "{:<44} {:>20.12e} {:>20.12e} {:>12.3e}\n",
                c.label, c.analytic, c.numeric, c.rel_dev
            ));
        }
        for c in &self.counts {
            out.push_str(&format!(
                "count {:<38} analytic {:>3}  numeric {:>3}  stable {}\n",
                c.label, c.analytic, c.numeric, c.stable
            ));
        }
        for v in &self.verdicts {
            out.push_str(&format!(
                "arbitration: confirmed {:?}, stable across grids: {}\n",
                v.confirmed, v.stable_across_grids
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("note: {n}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn box_problem() -> RadialProblem {
        RadialProblem {
            centrifugal: 0.0,
            oscillator: 0.0,
            origin_exponent: 1.0,
            far_field: FarField::Confining,
            provenance: "box".into(),
            ..flat_oscillator_problem(0.0, 1.0, 0.0)
        }
    }

    #[test]
    fn grid_parsing_and_geometry() {
        let g = Grid::parse("0.001:40:4000").unwrap();
        assert_eq!(g.points, 4000);
        let nodes = g.nodes();
        assert_eq!(nodes[0], 0.001);
        assert_eq!(*nodes.last().unwrap(), 40.0);
        assert!(Grid::parse("1:0:10").is_err());
        assert!(Grid::parse("0:1").is_err());
        let r = g.refined();
        assert!((r.h() - g.h() / 2.0).abs() < 1e-15);
        let s = Grid::new(0.0, 40.0, 20001).unwrap().stretched(1.5);
        assert!((s.r_max - 60.0).abs() < 1e-9);
    }

    #[test]
    fn sturm_counts_match_bisection() {
        let t = SymTridiagonal::new(vec![2.0, 3.0, 1.0, 4.0], vec![1.0, 0.5, 0.2]).unwrap();
        let ev = t.lowest(4).unwrap();
        for w in ev.windows(2) {
            assert!(w[0] < w[1]);
        }
        for (i, &e) in ev.iter().enumerate() {
            assert_eq!(t.count_below(e - 1e-9), i);
            assert_eq!(t.count_below(e + 1e-9), i + 1);
        }
        assert!((ev.iter().sum::<f64>() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn particle_in_a_box() {
        let l = 10.0;
        let g = Grid::new(0.0, l, 4001).unwrap();
        let e = fd_eigen(&box_problem(), &g, 1).unwrap()[0];
        let exact = std::f64::consts::PI.powi(2) / (2.0 * l * l);
        assert!((e - exact).abs() / exact < 1e-3);
    }

    #[test]
    fn second_order_convergence() {
        let p = box_problem();
        let g = Grid::new(0.0, 1.0, 101).unwrap();
        let exact = std::f64::consts::PI.powi(2) / 2.0;
        let e1 = fd_eigen(&p, &g, 1).unwrap()[0];
        let e2 = fd_eigen(&p, &g.refined(), 1).unwrap()[0];
        let ratio = (e1 - exact) / (e2 - exact);
        assert!((ratio - 4.0).abs() < 0.05, "{ratio}");
        let rich = fd_eigen_richardson(&p, &g, 1).unwrap();
        assert!((rich.extrapolated[0] - exact).abs() < (e2 - exact).abs() / 100.0);
    }

    #[test]
    fn quadratic_problem_rejected() {
        let p = RadialProblem {
            linearity: Linearity::QuadraticInEpsilon { alpha: 0.1 },
            ..box_problem()
        };
        assert!(fd_eigen(&p, &Grid::new(0.0, 1.0, 101).unwrap(), 1).is_err());
    }

    #[test]
    fn shooting_finds_oscillator_ground_state() {
        let p = flat_oscillator_problem(1.0, 1.0, 0.0);
        let at = shoot_decay(&p, 1.5, 8.0).unwrap();
        assert!(at.mismatch.abs() < 1e-6, "{at:?}");
        let lo = shoot_decay(&p, 1.5 * 0.99, 8.0).unwrap();
        let hi = shoot_decay(&p, 1.5 * 1.01, 8.0).unwrap();
        assert!(lo.mismatch.signum() != hi.mismatch.signum());
    }

    #[test]
    fn report_serialises() {
        let mut r = OracleReport::new("demo");
        r.comparisons.push(Comparison::new("n=0", -0.5, -0.50001));
        r.counts.push(CountComparison {
            label: "j=0".into(),
            analytic: 3,
            numeric: 3,
            stable: true,
        });
        let json = r.to_json();
        let back: OracleReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert!(r.to_table().contains("n=0"));
        assert!((r.max_rel_dev() - 2e-5).abs() < 1e-9);
    }
}
