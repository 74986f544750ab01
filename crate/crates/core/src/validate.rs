//! Validation suites: every closed form checked against an independent
//! numerical oracle or an algebraic invariant.
//!
//! Reports hold only deterministic data; wall-clock times belong to whatever
//! envelope the caller wraps around them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::angular::{check_recurrences, interior_grid};
use crate::error::{Error, Result};
use crate::heunspec::{heun_residual_on_disc, solve_beta_coulomb, solve_beta_oscillator, BetaSolution};
use crate::mixing::{invariants_from_matrix, mixing_problem, parity_eigenvalues};
use crate::oracle::{
    arbitrate_oscillator_prefactor, count_bound_states, fd_eigen_richardson, fd_matrix, resolution_measure, shoot_decay,
    Comparison, CountComparison, Grid, OracleReport, SymTridiagonal, RESOLUTION_LIMIT,
};
use crate::quantum::{check_admissible, j_min, Channel, Geometry, HalfInt, MonopoleCharge, Potential, Scenario};
use crate::radial::{analytic_solution, build_problem, residual, standing_wave_check, RadialProblem};
use crate::spectra::{self, EnergyLevel, OscillatorPrefactor, CONFIRMED_OSCILLATOR_PREFACTOR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Roots,
    Wigner,
    FlatCoulomb,
    FlatOscillator,
    LobMinj,
    LobCoulomb,
    LobOscillator,
    Heun,
    Free,
    All,
}

impl Suite {
    /// Every concrete suite, in the order `all` runs them.
    pub const PARTS: [Suite; 9] = [
        Suite::Roots,
        Suite::Wigner,
        Suite::FlatCoulomb,
        Suite::FlatOscillator,
        Suite::LobMinj,
        Suite::LobCoulomb,
        Suite::LobOscillator,
        Suite::Heun,
        Suite::Free,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Roots => "roots",
            Suite::Wigner => "wigner",
            Suite::FlatCoulomb => "flat-coulomb",
            Suite::FlatOscillator => "flat-oscillator",
            Suite::LobMinj => "lob-minj",
            Suite::LobCoulomb => "lob-coulomb",
            Suite::LobOscillator => "lob-oscillator",
            Suite::Heun => "heun",
            Suite::Free => "free",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::PARTS
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Unsupported(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub root_abs: f64,
    pub closed_form: f64,
    pub transform_residual: f64,
    pub recurrence: f64,
    pub fd_rel: f64,
    pub shoot: f64,
    pub analytic_residual: f64,
    pub identity: f64,
    pub heun_disc: f64,
    pub fuchs: f64,
    pub slope: f64,
    pub flatness: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root_abs: 1e-10,
            closed_form: 1e-12,
            transform_residual: 1e-10,
            recurrence: 1e-10,
            fd_rel: 1e-4,
            shoot: 1e-5,
            analytic_residual: 1e-7,
            identity: 1e-12,
            heun_disc: 1e-9,
            fuchs: 1e-12,
            slope: 0.05,
            flatness: 0.01,
        }
    }
}

/// One checked quantity. Criteria sharing an `id` make up one acceptance item.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Criterion {
    pub id: u8,
    pub check: String,
    pub pass: bool,
    /// Recorded but never failing.
    pub informational: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl Criterion {
    fn at_most(id: u8, check: impl Into<String>, measured: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Criterion {
            id,
            check: check.into(),
            pass: measured <= tolerance,
            informational: false,
            measured,
            tolerance,
            detail: detail.into(),
        }
    }

    fn flag(id: u8, check: impl Into<String>, pass: bool, measured: f64, detail: impl Into<String>) -> Self {
        Criterion {
            id,
            check: check.into(),
            pass,
            informational: false,
            measured,
            tolerance: 0.0,
            detail: detail.into(),
        }
    }

    fn info(id: u8, check: impl Into<String>, measured: f64, detail: impl Into<String>) -> Self {
        Criterion {
            id,
            check: check.into(),
            pass: true,
            informational: true,
            measured,
            tolerance: f64::NAN,
            detail: detail.into(),
        }
    }

    /// An error while evaluating a hard check fails it.
    fn errored(id: u8, check: impl Into<String>, err: &Error) -> Self {
        Criterion {
            id,
            check: check.into(),
            pass: false,
            informational: false,
            measured: f64::NAN,
            tolerance: f64::NAN,
            detail: err.to_string(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub criteria: Vec<Criterion>,
    pub oracle: Vec<OracleReport>,
    pub heun: Vec<BetaSolution>,
}

impl SuiteReport {
    fn new(suite: Suite) -> Self {
        SuiteReport {
            suite: suite.name().to_string(),
            ..Default::default()
        }
    }

    /// Concatenation of `parts` in order, labelled `suite`.
    pub fn merged(suite: Suite, parts: Vec<SuiteReport>) -> Self {
        let mut out = SuiteReport::new(suite);
        for p in parts {
            out.absorb(p);
        }
        out
    }

    fn absorb(&mut self, other: SuiteReport) {
        self.criteria.extend(other.criteria);
        self.oracle.extend(other.oracle);
        self.heun.extend(other.heun);
    }

    pub fn passed(&self) -> bool {
        self.criteria.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Criterion> {
        self.criteria.iter().find(|c| !c.pass)
    }

    /// Pass/fail per criterion id, ascending.
    pub fn by_id(&self) -> Vec<(u8, bool)> {
        let mut ids: Vec<u8> = self.criteria.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter()
            .map(|id| (id, self.criteria.iter().filter(|c| c.id == id).all(|c| c.pass)))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for c in &self.criteria {
            let status = match (c.informational, c.pass) {
                (true, _) => "INFO",
                (false, true) => "PASS",
                (false, false) => "FAIL",
            };
            out.push_str(&format!(
                "[{status}] {:>2} {:<48} measured {:>12.5e}  tol {:>9.2e}  {}\n",
                c.id, c.check, c.measured, c.tolerance, c.detail
            ));
        }
        for r in &self.oracle {
            out.push_str(&r.to_table());
        }
        out
    }
}

pub fn run_suite(suite: Suite, tol: &Tolerances) -> SuiteReport {
    let mut report = SuiteReport::new(suite);
    match suite {
        Suite::Roots => {
            report.absorb(roots_suite(tol));
            report.absorb(parity_suite());
        }
        Suite::Wigner => report.absorb(wigner_suite(tol)),
        Suite::FlatCoulomb => report.absorb(flat_coulomb_suite(tol)),
        Suite::FlatOscillator => report.absorb(flat_oscillator_suite(tol)),
        Suite::LobMinj => {
            report.absorb(lob_minj_coulomb_suite(tol));
            report.absorb(lob_minj_oscillator_suite(tol));
        }
        Suite::LobCoulomb => report.absorb(lob_coulomb_suite(tol)),
        Suite::LobOscillator => report.absorb(lob_oscillator_suite(tol)),
        Suite::Heun => report.absorb(heun_suite(tol)),
        Suite::Free => report.absorb(free_suite(tol)),
        Suite::All => {
            for part in Suite::PARTS {
                report.absorb(run_suite(part, tol));
            }
            report.absorb(determinism_suite(tol));
        }
    }
    report
}

fn k_of(twice: i32) -> MonopoleCharge {
    MonopoleCharge::new(HalfInt::from_twice(twice))
}

fn fmt_j(j2: i32) -> String {
    HalfInt::from_twice(j2).to_string()
}

// ---------------------------------------------------------------- roots

/// Mixing roots for `|k| = ½ … 5` and `j` from the lowest cubic value up to
/// `|k| + 8`, against bisection on the tridiagonal matrix itself.
pub fn roots_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Roots);
    let (mut root_dev, mut closed_dev, mut float_dev, mut s_res) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut min_root, mut max_disc) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut cases, mut degenerate, mut skipped_min) = (0, 0, 0);
    let mut errors = Vec::new();
    for k2 in 1..=10 {
        let k = k_of(k2);
        let mut j2 = j_min(k).twice();
        while j2 <= k2 + 16 {
            if j2 < k2 {
                // minimum j: no cubic
                skipped_min += 1;
                j2 += 2;
                continue;
            }
            let j = HalfInt::from_twice(j2);
            match root_case(j, k) {
                Ok(c) => {
                    cases += 1;
                    root_dev = root_dev.max(c.root_dev);
                    closed_dev = closed_dev.max(c.closed_dev);
                    float_dev = float_dev.max(c.float_dev);
                    max_disc = max_disc.max(c.disc);
                    if j2 > k2 {
                        min_root = min_root.min(c.min_root);
                    }
                    match c.s_residual {
                        Some(r) => s_res = s_res.max(r),
                        None => degenerate += 1,
                    }
                }
                Err(e) => errors.push(format!("j = {j}, k = {k}: {e}")),
            }
            j2 += 2;
        }
    }
    let detail = format!("{cases} (j,k) pairs, {skipped_min} minimum-j pairs skipped");
    rep.criteria.push(Criterion::at_most(1, "trigonometric roots vs eigensolve", root_dev, tol.root_abs, detail));
    rep.criteria.push(Criterion::flag(
        1,
        "all roots positive for j > |k|",
        min_root > 0.0,
        min_root,
        "smallest root over j > |k|; j = |k| has an exact zero root",
    ));
    rep.criteria.push(Criterion::flag(1, "discriminant negative", max_disc < 0.0, max_disc, "largest D"));
    rep.criteria.push(Criterion::at_most(
        1,
        "p, q closed forms",
        closed_dev,
        tol.closed_form,
        "exact rational invariants of the matrix",
    ));
    rep.criteria.push(Criterion::info(
        1,
        "p, q from floating-point matrix entries",
        float_dev,
        "cancellation grows with j",
    ));
    rep.criteria.push(Criterion::at_most(
        1,
        "transform eigen-residual",
        s_res,
        tol.transform_residual,
        format!("{degenerate} pairs with j = |k| have no regular transform"),
    ));
    if !errors.is_empty() {
        rep.criteria.push(Criterion::flag(1, "root machinery errors", false, errors.len() as f64, errors.join("; ")));
    }
    rep
}

struct RootCase {
    root_dev: f64,
    closed_dev: f64,
    float_dev: f64,
    disc: f64,
    min_root: f64,
    s_residual: Option<f64>,
}

fn root_case(j: HalfInt, k: MonopoleCharge) -> Result<RootCase> {
    let mp = mixing_problem(j, k)?;
    let (d, e) = mp.matrix.tridiagonal();
    let oracle = SymTridiagonal::new(d.to_vec(), e.to_vec())?.lowest(3)?;
    let root_dev = oracle
        .iter()
        .zip(&mp.roots.a)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    let inv = &mp.invariants;
    let fl = invariants_from_matrix(&mp.matrix);
    Ok(RootCase {
        root_dev,
        closed_dev: (inv.p - inv.p_closed).abs().max((inv.q - inv.q_closed).abs()),
        float_dev: (fl.p - inv.p_closed).abs().max((fl.q - inv.q_closed).abs()),
        disc: inv.discriminant,
        min_root: mp.roots.a[0],
        s_residual: mp.transform.map(|t| t.residual),
    })
}

pub fn parity_suite() -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Roots);
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for j in 1..=10 {
        match parity_eigenvalues(HalfInt::from_int(j)) {
            Ok(ev) => {
                let want = [f64::from(j) + 1.0, -f64::from(j)];
                let dev = (ev[0] - want[0]).abs().max((ev[1] - want[1]).abs());
                worst = worst.max(dev);
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    rep.criteria.push(Criterion::flag(
        2,
        "parity eigenvalues {j+1, -j} exactly",
        worst == 0.0 && bad.is_empty(),
        worst,
        format!("j = 1..10 {}", bad.join("; ")),
    ));
    rep
}

// ---------------------------------------------------------------- wigner

pub fn wigner_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Wigner);
    let thetas = interior_grid(50);
    let mut worst = 0.0f64;
    let mut cases = 0;
    let mut errors = Vec::new();
    for j2 in 0..=12 {
        let j = HalfInt::from_twice(j2);
        for k2 in -(j2 + 2)..=(j2 + 2) {
            let k = k_of(k2);
            if check_admissible(k, j).is_err() {
                continue;
            }
            for m2 in (-j2..=j2).step_by(2) {
                match check_recurrences(j, k, HalfInt::from_twice(m2), &thetas) {
                    Ok(r) => {
                        worst = worst.max(r);
                        cases += 1;
                    }
                    Err(e) => errors.push(format!("j = {j}, k = {k}, m = {}: {e}", fmt_j(m2))),
                }
            }
        }
    }
    rep.criteria.push(Criterion::at_most(
        3,
        "Wigner first-order recurrences",
        worst,
        tol.recurrence,
        format!("{cases} (j,k,m) triples, 50 interior angles"),
    ));
    if !errors.is_empty() {
        rep.criteria.push(Criterion::flag(3, "recurrence errors", false, errors.len() as f64, errors.join("; ")));
    }
    rep
}

// ---------------------------------------------------------------- FD helpers

/// Uniform grid on `[r_min, r_max]` with at least `min_points` nodes, refined
/// until the resolution heuristic holds with a 10% margin.
pub fn resolved_grid(problem: &RadialProblem, r_min: f64, r_max: f64, min_points: usize) -> Result<Grid> {
    let target = 0.9 * RESOLUTION_LIMIT;
    let mut g = Grid::new(r_min, r_max, min_points)?;
    // The measured maximum moves with the nodes, so one rescaling may fall short.
    for _ in 0..8 {
        let m = resolution_measure(problem, &g);
        if m <= target {
            return Ok(g);
        }
        let intervals = ((g.points - 1) as f64 * m / target).ceil() as usize + 1;
        g = Grid::new(r_min, r_max, intervals + 1)?;
    }
    Err(Error::Grid(format!(
        "resolution heuristic not met on [{r_min}, {r_max}] with {} points",
        g.points
    )))
}

fn compare_levels(
    report: &mut OracleReport,
    problem: &RadialProblem,
    grid: &Grid,
    levels: &[EnergyLevel],
    label: &str,
) -> Result<f64> {
    if levels.is_empty() {
        return Ok(0.0);
    }
    let fd = fd_eigen_richardson(problem, grid, levels.len())?.extrapolated;
    let mut worst = 0.0f64;
    for (lv, e) in levels.iter().zip(fd) {
        let c = Comparison::new(format!("{label} n={}", lv.n), lv.energy, e);
        worst = worst.max(c.rel_dev);
        report.comparisons.push(c);
    }
    Ok(worst)
}

fn flat(potential: Potential, k: MonopoleCharge, mass: f64) -> Result<Scenario> {
    Scenario::new(Geometry::Flat, potential, k, mass)
}

fn lob(potential: Potential, k: MonopoleCharge, mass: f64) -> Result<Scenario> {
    Scenario::new(Geometry::Lobachevsky { radius: 1.0 }, potential, k, mass)
}

// ---------------------------------------------------------------- flat

/// `α = M = 1`: the minimum-j channel (`L = 0`, `j = 0`, `k = 1`) and the
/// three mixing branches at `j = 2`, `k = 1`, levels `n = 0..3`.
pub fn flat_coulomb_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::FlatCoulomb);
    let mut oracle = OracleReport::new("flat Coulomb, alpha = M = 1, k = 1");
    let cases: [(i32, Channel); 4] = [
        (0, Channel::MinJ),
        (4, Channel::BranchA(1)),
        (4, Channel::BranchA(2)),
        (4, Channel::BranchA(3)),
    ];
    let k = k_of(2);
    let (alpha, mass) = (1.0, 1.0);
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for (j2, ch) in cases {
        let j = HalfInt::from_twice(j2);
        let mut run = || -> Result<f64> {
            let sc = flat(Potential::Coulomb { alpha }, k, mass)?;
            let problem = build_problem(&sc, ch, j)?;
            let levels = (0..4)
                .map(|n| spectra::flat_coulomb(alpha, mass, j, k, n, ch))
                .collect::<Result<Vec<_>>>()?;
            let top = levels.last().map(|l| l.energy).unwrap_or(-0.5);
            let r_max = (80.0 / (2.0 * mass * top.abs()).sqrt()).min(400.0);
            let grid = resolved_grid(&problem, 0.0, r_max, 16_000)?;
            let l = levels[0].meta.l.unwrap_or(0.0);
            compare_levels(&mut oracle, &problem, &grid, &levels, &format!("{ch} L={l:.6}"))
        };
        match run() {
            Ok(w) => worst = worst.max(w),
            Err(e) => errors.push(format!("{ch}: {e}")),
        }
    }
    rep.criteria.push(Criterion::at_most(
        4,
        "flat Coulomb FD vs closed form",
        if errors.is_empty() { worst } else { f64::INFINITY },
        tol.fd_rel,
        errors.join("; "),
    ));
    rep.oracle.push(oracle);
    rep
}

/// Prefactor arbitration for `K = M = 1` at `L = 0` and `L = L₁(j=2, k=1)`.
pub fn flat_oscillator_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::FlatOscillator);
    let mut oracle = OracleReport::new("flat oscillator prefactor arbitration, K = M = 1");
    let run = || -> Result<_> {
        let l1 = mixing_problem(HalfInt::from_int(2), k_of(2))?.roots.l[0];
        let grids = [Grid::new(0.0, 12.0, 6001)?, Grid::new(0.0, 14.0, 9001)?];
        arbitrate_oscillator_prefactor(1.0, 1.0, &[0.0, l1], 3, &grids, tol.fd_rel)
    };
    match run() {
        Ok(v) => {
            let worst = v.confirmed_max_rel_dev.iter().copied().fold(0.0, f64::max);
            let rejected = v.rejected_min_rel_dev.iter().copied().fold(f64::INFINITY, f64::min);
            rep.criteria.push(Criterion::at_most(
                5,
                "confirmed oscillator candidate matches FD",
                worst,
                tol.fd_rel,
                format!("confirmed {:?}; rejected candidate off by at least {rejected:.3e}", v.confirmed),
            ));
            rep.criteria.push(Criterion::flag(
                5,
                "verdict stable across grids",
                v.stable_across_grids,
                v.confirmed_max_rel_dev.len() as f64,
                "two grids",
            ));
            rep.criteria.push(Criterion::flag(
                5,
                "library default equals verdict",
                v.confirmed == CONFIRMED_OSCILLATOR_PREFACTOR,
                0.0,
                format!("default {CONFIRMED_OSCILLATOR_PREFACTOR:?}"),
            ));
            let ratio = v.spacing_ratio.iter().copied().fold(0.0, f64::max);
            let word = match v.confirmed {
                OscillatorPrefactor::Printed => "printed 1/2",
                OscillatorPrefactor::Quantization => "quantization (prefactor 1)",
            };
            oracle.notes.push(format!("verdict: {word}; FD spacing / sqrt(K/M) = {ratio:.6}"));
            oracle.verdicts.push(v);
        }
        Err(e) => rep.criteria.push(Criterion::errored(5, "oscillator arbitration", &e)),
    }
    rep.oracle.push(oracle);
    rep
}

// ---------------------------------------------------------------- Lobachevsky min-j

/// Relativistic minimum-j Coulomb levels, `α = 0.1`, `M = 10`, `n = 0..2`,
/// shot at the closed-form `ε` and at the energies whose far-field decay rate
/// `κ = sqrt(M² − (ε + α)²)` is moved by ±1%.
pub fn lob_minj_coulomb_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::LobMinj);
    let mut oracle = OracleReport::new("hyperbolic min-j Coulomb (relativistic), alpha = 0.1, M = 10, k = 1");
    let (alpha, mass) = (0.1, 10.0);
    let k = k_of(2);
    let problem = lob(Potential::Coulomb { alpha }, k, mass).and_then(|sc| build_problem(&sc, Channel::MinJ, HalfInt::ZERO));
    let problem = match problem {
        Ok(p) => p,
        Err(e) => {
            rep.criteria.push(Criterion::errored(6, "min-j Coulomb problem", &e));
            return rep;
        }
    };
    for n in 0..3 {
        let check = format!("shooting n={n}");
        let mut run = || -> Result<(f64, bool, String)> {
            let lv = spectra::lob_minj_coulomb(alpha, mass, k, n)?;
            let eps = lv.epsilon_rel.ok_or_else(|| Error::Inadmissible(format!("n = {n}: ε is not real")))?;
            let kappa = problem
                .decay_rate(eps)
                .ok_or_else(|| Error::Oracle(format!("ε = {eps} lies in the continuum")))?;
            let r_max = (30.0 / kappa).clamp(40.0, 5000.0);
            let at = shoot_decay(&problem, eps, r_max)?;
            // ε(κ) = sqrt(M² − κ²) − α; moving κ keeps ε below the continuum.
            let eps_at = |kap: f64| (mass * mass - kap * kap).sqrt() - alpha;
            let lo = shoot_decay(&problem, eps_at(kappa * 1.01), r_max)?;
            let hi = shoot_decay(&problem, eps_at(kappa * 0.99), r_max)?;
            let bracket = lo.mismatch.signum() != hi.mismatch.signum();
            oracle.comparisons.push(Comparison::new(format!("n={n} epsilon"), eps, eps + at.mismatch));
            let note = format!(
                "ε = {eps:.12}, κ = {kappa:.6e}, mismatch {:.3e}, mismatches at κ(1 ± 1%) {:.3e} / {:.3e}, admissible = {}{}",
                at.mismatch,
                lo.mismatch,
                hi.mismatch,
                lv.admissible,
                lv.reason.map(|r| format!(" ({r})")).unwrap_or_default()
            );
            Ok((at.mismatch.abs(), bracket, note))
        };
        match run() {
            Ok((mis, bracket, note)) => {
                oracle.notes.push(format!("n={n}: {note}"));
                let mut c = Criterion::at_most(6, check, mis, tol.shoot, note);
                c.pass &= bracket;
                if !bracket {
                    c.detail.push_str("; no sign change between the ±1% perturbations");
                }
                rep.criteria.push(c);
            }
            Err(e) => rep.criteria.push(Criterion::errored(6, check, &e)),
        }
    }
    // Admissibility must switch off once and stay off.
    let mut flags = Vec::new();
    let mut n = 0;
    loop {
        match spectra::lob_minj_coulomb(alpha, mass, k, n) {
            Ok(lv) => {
                flags.push(lv.admissible);
                if lv.epsilon_rel.is_none() {
                    break;
                }
            }
            Err(e) => {
                rep.criteria.push(Criterion::errored(6, "admissibility scan", &e));
                break;
            }
        }
        n += 1;
        if n > 100_000 {
            break;
        }
    }
    let bound = flags.iter().take_while(|&&a| a).count();
    let prefix = flags[bound..].iter().all(|&a| !a);
    let finite = flags.last() == Some(&false);
    rep.criteria.push(Criterion::flag(
        6,
        "bound-state list terminates",
        prefix && finite,
        bound as f64,
        format!("{bound} admissible level(s), scan stopped at n = {}", flags.len() - 1),
    ));
    rep.oracle.push(oracle);
    rep
}

/// Minimum-j oscillator, `K M ∈ {10, 100}` with `M = 1`.
pub fn lob_minj_oscillator_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::LobMinj);
    let mut oracle = OracleReport::new("hyperbolic min-j oscillator, M = 1, k = 1");
    let mass = 1.0;
    let k = k_of(2);
    let (mut res_worst, mut fd_worst, mut pt_worst) = (0.0f64, 0.0f64, 0.0f64);
    let mut errors = Vec::new();
    for k_osc in [10.0, 100.0] {
        let run = |oracle: &mut OracleReport| -> Result<(f64, f64, f64)> {
            let sc = lob(Potential::Oscillator { k_osc }, k, mass)?;
            let problem = build_problem(&sc, Channel::MinJ, HalfInt::ZERO)?;
            let mut levels = Vec::new();
            let mut pt = 0.0f64;
            for n in 0.. {
                let lv = spectra::lob_minj_oscillator(k_osc, mass, k, n)?;
                if !lv.admissible {
                    break;
                }
                let form = spectra::poschl_teller_form(k_osc, mass, n);
                pt = pt.max((lv.energy - form).abs() / lv.energy.abs().max(1.0));
                levels.push(lv);
            }
            let res_grid = Grid::new(1e-3, 25.0, 25_000)?;
            let mut res = 0.0f64;
            for lv in &levels {
                let sol = analytic_solution(&problem, lv, &res_grid)?;
                res = res.max(residual(&problem, &sol, lv.energy)?);
            }
            let grid = resolved_grid(&problem, 0.0, 40.0, 20_000)?;
            let fd = compare_levels(oracle, &problem, &grid, &levels, &format!("KM={k_osc}"))?;
            let count = count_bound_states(&problem, &grid)?;
            oracle.counts.push(CountComparison {
                label: format!("KM={k_osc}"),
                analytic: levels.len(),
                numeric: count,
                stable: true,
            });
            Ok((res, fd, pt))
        };
        match run(&mut oracle) {
            Ok((r, f, p)) => {
                res_worst = res_worst.max(r);
                fd_worst = fd_worst.max(f);
                pt_worst = pt_worst.max(p);
            }
            Err(e) => errors.push(format!("KM = {k_osc}: {e}")),
        }
    }
    let err = |w: f64| if errors.is_empty() { w } else { f64::INFINITY };
    rep.criteria.push(Criterion::at_most(
        7,
        "min-j oscillator analytic residual",
        err(res_worst),
        tol.analytic_residual,
        errors.join("; "),
    ));
    rep.criteria.push(Criterion::at_most(7, "min-j oscillator FD vs closed form", err(fd_worst), tol.fd_rel, ""));
    rep.criteria.push(Criterion::at_most(7, "sech-squared well identity", err(pt_worst), tol.identity, ""));
    rep.oracle.push(oracle);
    rep
}

// ---------------------------------------------------------------- Lobachevsky no monopole

fn fd_channel_check(
    id: u8,
    name: &str,
    scenario: &Scenario,
    js: &[i32],
    grids: &[(f64, usize)],
    tol: &Tolerances,
    require_equal_count: bool,
) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::LobCoulomb);
    let mut oracle = OracleReport::new(format!("{name}, parity-odd channel"));
    let mut worst = 0.0f64;
    let mut counts_ok = true;
    let mut errors = Vec::new();
    for &j in js {
        let jj = HalfInt::from_int(j);
        let run = |oracle: &mut OracleReport| -> Result<(f64, bool)> {
            let problem = build_problem(scenario, Channel::ParityOdd, jj)?;
            let mut levels = Vec::new();
            for n in 0..1000 {
                let lv = spectra::level(scenario, Channel::ParityOdd, jj, n)?;
                if !lv.admissible {
                    break;
                }
                levels.push(lv);
            }
            let mut w = 0.0f64;
            let mut numeric = Vec::new();
            for (gi, &(r_max, points)) in grids.iter().enumerate() {
                let grid = resolved_grid(&problem, 0.0, r_max, points)?;
                if gi == 0 {
                    w = compare_levels(oracle, &problem, &grid, &levels, &format!("j={j}"))?;
                }
                numeric.push(count_bound_states(&problem, &grid)?);
            }
            let stable = numeric.windows(2).all(|p| p[0] == p[1]);
            oracle.counts.push(CountComparison {
                label: format!("j={j}"),
                analytic: levels.len(),
                numeric: numeric[0],
                stable,
            });
            let ok = stable && (!require_equal_count || numeric[0] == levels.len());
            Ok((w, ok))
        };
        match run(&mut oracle) {
            Ok((w, ok)) => {
                worst = worst.max(w);
                counts_ok &= ok;
            }
            Err(e) => errors.push(format!("j = {j}: {e}")),
        }
    }
    let err = |w: f64| if errors.is_empty() { w } else { f64::INFINITY };
    rep.criteria.push(Criterion::at_most(
        id,
        format!("{name} FD vs closed form"),
        err(worst),
        tol.fd_rel,
        errors.join("; "),
    ));
    let summary = oracle
        .counts
        .iter()
        .map(|c| format!("{}: {} vs {}", c.label, c.analytic, c.numeric))
        .collect::<Vec<_>>()
        .join(", ");
    let check = if require_equal_count {
        "bound-state count equals closed-form count"
    } else {
        "bound-state count stable across grids"
    };
    let deviation = oracle
        .counts
        .iter()
        .map(|c| (c.analytic as f64 - c.numeric as f64).abs())
        .fold(0.0, f64::max);
    rep.criteria.push(Criterion::flag(
        id,
        check,
        counts_ok && errors.is_empty(),
        deviation,
        format!("analytic vs FD: {summary}"),
    ));
    rep.oracle.push(oracle);
    rep
}

/// No-monopole Coulomb, `α = 10`, `M = 1`, `j = 0..2`.
pub fn lob_coulomb_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::LobCoulomb);
    match lob(Potential::Coulomb { alpha: 10.0 }, MonopoleCharge::NONE, 1.0) {
        Ok(sc) => rep.absorb(fd_channel_check(
            8,
            "hyperbolic Coulomb",
            &sc,
            &[0, 1, 2],
            &[(40.0, 20_000)],
            tol,
            true,
        )),
        Err(e) => rep.criteria.push(Criterion::errored(8, "scenario", &e)),
    }
    rep
}

/// No-monopole oscillator, `K M = 100`, `M = 1`, `j = 0..2`, two grids.
pub fn lob_oscillator_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::LobOscillator);
    match lob(Potential::Oscillator { k_osc: 100.0 }, MonopoleCharge::NONE, 1.0) {
        Ok(sc) => rep.absorb(fd_channel_check(
            9,
            "hyperbolic oscillator",
            &sc,
            &[0, 1, 2],
            &[(40.0, 20_000), (30.0, 12_000)],
            tol,
            false,
        )),
        Err(e) => rep.criteria.push(Criterion::errored(9, "scenario", &e)),
    }
    rep
}

// ---------------------------------------------------------------- Heun

fn heun_comparison(cases: &[(Scenario, &str, &[BetaSolution])]) -> Result<OracleReport> {
    let mut oracle = OracleReport::new("formal Heun condition vs FD on the parity (-1)^j pair");
    oracle
        .notes
        .push("only the exponent condition is imposed; the accessory-parameter condition is not, so agreement is not expected".into());
    for (sc, word, solutions) in cases {
        for ch in [Channel::HeunChannel1, Channel::HeunChannel2] {
            for j in 1..=2 {
                let jj = HalfInt::from_int(j);
                let problem = build_problem(sc, ch, jj)?;
                let grid = resolved_grid(&problem, 0.0, 40.0, 20_000)?;
                let mut formal: Vec<f64> = solutions
                    .iter()
                    .filter(|s| s.setup.channel == ch && s.setup.j2 == 2 * j && s.decaying)
                    .map(|s| s.energy)
                    .collect();
                formal.sort_by(|a, b| a.total_cmp(b));
                let edge = match sc.potential {
                    Potential::Coulomb { alpha } => -alpha,
                    Potential::Oscillator { k_osc } => 0.5 * k_osc,
                    Potential::None => 0.0,
                };
                let below = fd_matrix(&problem, &grid)?.count_below(edge);
                let take = formal.len().min(below);
                let fd = if take > 0 {
                    fd_eigen_richardson(&problem, &grid, take)?.extrapolated
                } else {
                    Vec::new()
                };
                for (i, (a, e)) in formal.iter().zip(&fd).enumerate() {
                    oracle
                        .comparisons
                        .push(Comparison::new(format!("{word} {ch} j={j} level {i}"), *a, *e));
                }
                oracle.counts.push(CountComparison {
                    label: format!("{word} {ch} j={j}"),
                    analytic: formal.len(),
                    numeric: below,
                    stable: true,
                });
            }
        }
    }
    Ok(oracle)
}

/// Parameter sets for `j = 1, 2`, both channels: Coulomb `α = 10`, `M = 1`
/// and oscillator `K = 100`, `M = 1`.
pub fn heun_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Heun);
    let (alpha, k_osc, mass) = (10.0, 100.0, 1.0);
    let (mut coulomb, mut osc) = (Vec::new(), Vec::new());
    let mut errors = Vec::new();
    for ch in [Channel::HeunChannel1, Channel::HeunChannel2] {
        for j in 1..=2 {
            let jj = HalfInt::from_int(j);
            for n in 0..6 {
                match solve_beta_coulomb(alpha, mass, jj, n, ch) {
                    Ok(s) => coulomb.push(s),
                    Err(e) => errors.push(e.to_string()),
                }
                match solve_beta_oscillator(k_osc, mass, jj, n, ch) {
                    Ok(s) => osc.push(s),
                    Err(e) => errors.push(e.to_string()),
                }
            }
        }
    }
    let sols: Vec<BetaSolution> = coulomb.iter().chain(&osc).cloned().collect();
    let fuchs = sols.iter().map(|s| s.setup.params.fuchs_residual().abs()).fold(0.0, f64::max);
    let condition = sols
        .iter()
        .filter(|s| s.decaying)
        .map(|s| s.condition_residual)
        .fold(0.0, f64::max);
    let mut disc = 0.0f64;
    for s in &sols {
        match heun_residual_on_disc(&s.setup.params, 0.8, 41) {
            Ok(r) => disc = disc.max(r),
            Err(e) => errors.push(e.to_string()),
        }
    }
    let err = |w: f64| if errors.is_empty() { w } else { f64::INFINITY };
    rep.criteria.push(Criterion::at_most(
        10,
        "Fuchs relation",
        err(fuchs),
        tol.fuchs,
        format!("{} parameter sets {}", sols.len(), errors.join("; ")),
    ));
    rep.criteria.push(Criterion::at_most(10, "Heun series residual on |z| <= 0.8", err(disc), tol.heun_disc, ""));
    rep.criteria.push(Criterion::at_most(
        10,
        "exponent condition re-obtained at solved E",
        err(condition),
        1e-10,
        "decaying sets",
    ));

    let run = || -> Result<(OracleReport, bool)> {
        let cases = [
            (lob(Potential::Coulomb { alpha }, MonopoleCharge::NONE, mass)?, "coulomb", coulomb.as_slice()),
            (lob(Potential::Oscillator { k_osc }, MonopoleCharge::NONE, mass)?, "oscillator", osc.as_slice()),
        ];
        let first = heun_comparison(&cases)?;
        let second = heun_comparison(&cases)?;
        let same = first.to_json() == second.to_json();
        Ok((first, same))
    };
    match run() {
        Ok((oracle, same)) => {
            rep.criteria.push(Criterion::flag(
                10,
                "FD comparison report produced and deterministic",
                same,
                oracle.comparisons.len() as f64,
                "two runs serialise identically",
            ));
            rep.criteria.push(Criterion::info(
                10,
                "formal Heun levels vs FD (largest rel. deviation)",
                oracle.max_rel_dev(),
                "informational",
            ));
            rep.oracle.push(oracle);
        }
        Err(e) => rep.criteria.push(Criterion::errored(10, "FD comparison report", &e)),
    }
    rep.heun = sols;
    rep
}

// ---------------------------------------------------------------- free particle

/// Free hyperbolic particle, `j = 1`, `2ME = 1`, parity-odd channel.
pub fn free_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::Free);
    let run = || -> Result<_> {
        let sc = lob(Potential::None, MonopoleCharge::NONE, 1.0)?;
        let problem = build_problem(&sc, Channel::ParityOdd, HalfInt::from_int(1))?;
        standing_wave_check(&problem, 1.0, (10.0, 40.0))
    };
    match run() {
        Ok(w) => {
            rep.criteria.push(Criterion::at_most(
                11,
                "origin exponent j+1",
                (w.origin_slope - w.expected_slope).abs(),
                tol.slope,
                format!("fitted {:.6}, expected {}", w.origin_slope, w.expected_slope),
            ));
            rep.criteria.push(Criterion::at_most(
                11,
                "far-field envelope flatness",
                w.flatness - 1.0,
                tol.flatness,
                format!("window {:?}, ODE residual {:.3e}", w.window, w.residual),
            ));
        }
        Err(e) => rep.criteria.push(Criterion::errored(11, "standing-wave check", &e)),
    }
    rep
}

// ---------------------------------------------------------------- determinism

pub fn determinism_suite(tol: &Tolerances) -> SuiteReport {
    let mut rep = SuiteReport::new(Suite::All);
    let a = run_suite(Suite::Roots, tol).to_json();
    let b = run_suite(Suite::Roots, tol).to_json();
    let levels = || -> String {
        let mut out = String::new();
        for n in 0..4 {
            for ch in [Channel::BranchA(1), Channel::BranchA(2), Channel::BranchA(3)] {
                if let Ok(l) = spectra::flat_coulomb(1.0, 1.0, HalfInt::from_int(2), k_of(2), n, ch) {
                    out.push_str(&serde_json::to_string(&l).unwrap_or_default());
                }
            }
        }
        out
    };
    rep.criteria.push(Criterion::flag(
        12,
        "repeated runs serialise byte-identically",
        a == b && levels() == levels(),
        a.len() as f64,
        "roots report and a spectrum, twice each",
    ));
    rep
}
