mod config;
mod output;

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use monopole_spectra::mixing::{self, CubicInvariants, RootTriple};
use monopole_spectra::oracle::Grid;
use monopole_spectra::quantum::{classify, ChannelClass, Couplings};
use monopole_spectra::radial::{self, RadialSolution};
use monopole_spectra::spectra;
use monopole_spectra::units::UnitSystem;
use monopole_spectra::validate::{run_suite, Suite, SuiteReport, Tolerances};
use monopole_spectra::{Channel, EnergyLevel, Geometry, HalfInt, MonopoleCharge, Potential, Scenario};

use config::RunConfig;
use output::{csv_field, emit, fmt12, json12, opt12};

const THREADS_VAR: &str = "MONOPOLE_SPECTRA_THREADS";

#[derive(Parser)]
#[command(name = "monopole-spectra", version, about = "Spin-1 particle spectra in a monopole field, flat and hyperbolic space")]
struct Cli {
    /// Run file of `key = value` lines; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// json, csv or table.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Tolerance override `name=value`, repeatable (validate only).
    #[arg(long = "tol", global = true)]
    tol: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy levels for ranges of j and n.
    Spectrum(SpectrumArgs),
    /// Mixing-matrix invariants, roots and transform for (j, k).
    Roots(RootsArgs),
    /// Run a validation suite against the numerical oracles.
    Validate(ValidateArgs),
    /// Sample a closed-form radial function on a grid.
    Wavefunction(WaveArgs),
}

#[derive(Args, Clone, Default)]
struct ScenarioArgs {
    /// flat or lobachevsky.
    #[arg(long)]
    geometry: Option<String>,
    /// Curvature radius (lobachevsky).
    #[arg(long)]
    radius: Option<f64>,
    /// none, coulomb or oscillator.
    #[arg(long)]
    potential: Option<String>,
    /// Monopole charge, a half-integer such as 1/2 or -3/2.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Shorthand for k = 0.
    #[arg(long)]
    no_monopole: bool,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    k_osc: Option<f64>,
    #[arg(long)]
    mass: Option<f64>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// j or an inclusive range `a..b`.
    #[arg(long)]
    j: Option<String>,
    /// n or an inclusive range `a..b` (empty when b < a).
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated channels; defaults depend on the scenario.
    #[arg(long)]
    channel: Option<String>,
    #[arg(long)]
    include_inadmissible: bool,
    /// Physical units `hbar:c:m[:length]`.
    #[arg(long)]
    units: Option<String>,
}

#[derive(Args)]
struct RootsArgs {
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    #[arg(long)]
    j: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    suite: Option<String>,
    /// JSON report path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct WaveArgs {
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long)]
    j: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    channel: Option<String>,
    /// `r_min:r_max:points`.
    #[arg(long)]
    grid: Option<String>,
    /// Energy for the free-particle profiles.
    #[arg(long, allow_hyphen_values = true)]
    energy: Option<f64>,
}

enum Fail {
    /// Bad flags or run file: exit 2.
    Config(String),
    /// The computation itself failed: exit 1.
    Compute(String),
}

impl From<monopole_spectra::Error> for Fail {
    fn from(e: monopole_spectra::Error) -> Self {
        Fail::Compute(e.to_string())
    }
}

impl From<std::io::Error> for Fail {
    fn from(e: std::io::Error) -> Self {
        Fail::Compute(format!("i/o: {e}"))
    }
}

fn cfg_err(msg: impl Display) -> Fail {
    Fail::Config(msg.to_string())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Table,
}

/// Flags layered over the run file.
struct Ctx {
    file: RunConfig,
    format: Option<String>,
    output: Option<PathBuf>,
    tol: Vec<String>,
}

impl Ctx {
    fn text(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.file.get(key).map(str::to_string))
    }

    fn value<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, Fail>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        self.file
            .get(key)
            .map(|s| s.parse::<T>().map_err(|e| cfg_err(format!("{key} = {s}: {e}"))))
            .transpose()
    }

    fn switch(&self, flag: bool, key: &str) -> Result<bool, Fail> {
        Ok(flag || self.value::<bool>(None, key)?.unwrap_or(false))
    }

    fn format(&self, default: Format) -> Result<Format, Fail> {
        match self.text(self.format.clone(), "format").as_deref() {
            None => Ok(default),
            Some("json") => Ok(Format::Json),
            Some("csv") => Ok(Format::Csv),
            Some("table") => Ok(Format::Table),
            Some(other) => Err(cfg_err(format!("unknown format '{other}' (json, csv or table)"))),
        }
    }

    fn output(&self) -> Option<PathBuf> {
        self.output.clone().or_else(|| self.file.get("output").map(PathBuf::from))
    }

    fn tolerances(&self) -> Result<Tolerances, Fail> {
        let mut v = serde_json::to_value(Tolerances::default()).expect("serialisable");
        let flags: Vec<(String, String)> = self
            .tol
            .iter()
            .map(|t| {
                t.split_once('=')
                    .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                    .ok_or_else(|| cfg_err(format!("--tol expects name=value, got '{t}'")))
            })
            .collect::<Result<_, _>>()?;
        let file = self.file.tolerances().into_iter().map(|(a, b)| (a.to_string(), b.to_string()));
        for (name, value) in file.chain(flags) {
            let x: f64 = value.parse().map_err(|e| cfg_err(format!("tolerance {name} = {value}: {e}")))?;
            let slot = v
                .get_mut(&name)
                .ok_or_else(|| cfg_err(format!("unknown tolerance '{name}'")))?;
            *slot = serde_json::json!(x);
        }
        serde_json::from_value(v).map_err(cfg_err)
    }

    fn scenario(&self, a: &ScenarioArgs) -> Result<Scenario, Fail> {
        let geometry = match self.text(a.geometry.clone(), "geometry").as_deref().unwrap_or("flat") {
            "flat" => Geometry::Flat,
            "lobachevsky" | "hyperbolic" => Geometry::Lobachevsky {
                radius: self.value(a.radius, "radius")?.unwrap_or(1.0),
            },
            other => return Err(cfg_err(format!("unknown geometry '{other}'"))),
        };
        let potential = match self.text(a.potential.clone(), "potential").as_deref().unwrap_or("none") {
            "none" | "free" => Potential::None,
            "coulomb" => Potential::Coulomb {
                alpha: self
                    .value(a.alpha, "alpha")?
                    .ok_or_else(|| cfg_err("coulomb potential needs --alpha"))?,
            },
            "oscillator" => Potential::Oscillator {
                k_osc: self
                    .value(a.k_osc, "k-osc")?
                    .ok_or_else(|| cfg_err("oscillator potential needs --k-osc"))?,
            },
            other => return Err(cfg_err(format!("unknown potential '{other}'"))),
        };
        let charge = self.charge(a.k.clone(), a.no_monopole)?;
        let mass = self.value(a.mass, "mass")?.unwrap_or(1.0);
        Scenario::new(geometry, potential, charge, mass).map_err(cfg_err)
    }

    fn charge(&self, k: Option<String>, no_monopole: bool) -> Result<MonopoleCharge, Fail> {
        if self.switch(no_monopole, "no-monopole")? {
            return Ok(MonopoleCharge::NONE);
        }
        let k = self
            .text(k, "k")
            .ok_or_else(|| cfg_err("set the monopole charge with --k or --no-monopole"))?;
        k.parse::<HalfInt>()
            .map(MonopoleCharge::new)
            .map_err(|e| cfg_err(format!("k = {k}: {e}")))
    }
}

fn parse_half_range(s: &str) -> Result<Vec<HalfInt>, Fail> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let p = |x: &str| x.trim().parse::<HalfInt>().map_err(|e| cfg_err(format!("'{x}': {e}")));
    let (lo, hi) = (p(lo)?, p(hi)?);
    if !lo.same_parity(hi) {
        return Err(cfg_err(format!("range {s} mixes integer and half-integer ends")));
    }
    Ok((lo.twice()..=hi.twice()).step_by(2).map(HalfInt::from_twice).collect())
}

fn parse_n_range(s: &str) -> Result<Vec<u32>, Fail> {
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b),
        None => (s, s),
    };
    let p = |x: &str| x.trim().parse::<i64>().map_err(|e| cfg_err(format!("n '{x}': {e}")));
    let (lo, hi) = (p(lo)?, p(hi)?);
    if lo < 0 {
        return Err(cfg_err(format!("n must be non-negative, got {lo}")));
    }
    Ok((lo..=hi).map(|n| n as u32).collect())
}

fn parse_channels(s: &str) -> Result<Vec<Channel>, Fail> {
    s.split(',').map(|c| c.parse::<Channel>().map_err(cfg_err)).collect()
}

fn parse_units(s: &str, sc: &Scenario) -> Result<UnitSystem, Fail> {
    let parts = s
        .split(':')
        .map(|x| x.trim().parse::<f64>().map_err(|e| cfg_err(format!("units '{s}': {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if !(3..=4).contains(&parts.len()) {
        return Err(cfg_err(format!("units expect hbar:c:m[:length], got '{s}'")));
    }
    let length = parts.get(3).copied().or(match sc.geometry {
        Geometry::Lobachevsky { radius } => Some(radius),
        Geometry::Flat => None,
    });
    let u = UnitSystem {
        hbar: parts[0],
        c: parts[1],
        mass: parts[2],
        length,
    };
    u.validate().map_err(cfg_err)?;
    Ok(u)
}

/// Channels with a closed-form spectrum, or `None` when `j` has none.
fn default_channels(sc: &Scenario, j: HalfInt) -> Option<Vec<Channel>> {
    let class = classify(sc.charge, j);
    match (sc.geometry, class) {
        (_, ChannelClass::MinimumJ) => Some(vec![Channel::MinJ]),
        (Geometry::Flat, _) => Some(vec![Channel::BranchA(1), Channel::BranchA(2), Channel::BranchA(3)]),
        (Geometry::Lobachevsky { .. }, ChannelClass::NoMonopole) => Some(vec![Channel::ParityOdd]),
        (Geometry::Lobachevsky { .. }, _) => None,
    }
}

fn init_threads() -> Result<(), Fail> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| cfg_err(format!("{THREADS_VAR} must be a positive integer, got '{v}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| cfg_err(format!("thread pool: {e}")))
}

// ---------------------------------------------------------------- spectrum

fn cmd_spectrum(ctx: &Ctx, a: SpectrumArgs) -> Result<(), Fail> {
    let sc = ctx.scenario(&a.scenario)?;
    let js = parse_half_range(&ctx.text(a.j, "j").ok_or_else(|| cfg_err("spectrum needs --j"))?)?;
    let ns = parse_n_range(&ctx.text(a.n, "n").unwrap_or_else(|| "0".into()))?;
    let explicit = ctx.text(a.channel, "channel").map(|s| parse_channels(&s)).transpose()?;
    let include = ctx.switch(a.include_inadmissible, "include-inadmissible")?;
    let units = ctx.text(a.units, "units").map(|s| parse_units(&s, &sc)).transpose()?;
    let format = ctx.format(Format::Table)?;

    let mut tasks = Vec::new();
    for &j in &js {
        let chans = match &explicit {
            Some(c) => c.clone(),
            None => match default_channels(&sc, j) {
                Some(c) => c,
                None => {
                    note(&format!("note: no closed-form spectrum for j = {j}, k = {} on {}", sc.charge, sc.tag()));
                    continue;
                }
            },
        };
        for ch in chans {
            for &n in &ns {
                tasks.push((ch, j, n));
            }
        }
    }
    let results: Vec<monopole_spectra::Result<EnergyLevel>> = tasks
        .par_iter()
        .map(|&(ch, j, n)| {
            let lv = spectra::level(&sc, ch, j, n)?;
            match &units {
                Some(u) if lv.admissible => spectra::to_physical_units(&lv, u),
                _ => Ok(lv),
            }
        })
        .collect();
    let mut levels = Vec::new();
    for r in results {
        let lv = r?;
        if lv.admissible || include {
            levels.push(lv);
        }
    }
    levels.sort_by(|x, y| (x.channel, x.j2, x.n).cmp(&(y.channel, y.j2, y.n)));

    let text = match format {
        Format::Json => json12(&levels),
        Format::Csv => spectrum_csv(&levels),
        Format::Table => spectrum_table(&levels),
    };
    emit(&text, ctx.output().as_deref())?;
    Ok(())
}

fn spectrum_csv(levels: &[EnergyLevel]) -> String {
    let mut out = String::from("scenario,k,mass,channel,j,n,energy,epsilon,L,N,admissible,derivation,tag,reason\n");
    for l in levels {
        let derivation = serde_json::to_value(l.derivation)
            .ok()
            .and_then(|v| v.as_str().map(str::to_string))
            .unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            l.scenario.tag(),
            l.scenario.charge,
            fmt12(l.scenario.mass),
            l.channel,
            l.j(),
            l.n,
            fmt12(l.energy),
            opt12(l.epsilon_rel),
            opt12(l.meta.l),
            opt12(l.meta.big_n),
            l.admissible,
            derivation,
            l.paper_eq,
            csv_field(l.reason.as_deref().unwrap_or("")),
        ));
    }
    out
}

fn spectrum_table(levels: &[EnergyLevel]) -> String {
    let mut out = format!(
        "{:<14} {:>5} {:>4} {:>20} {:>10}  {}\n",
        "channel", "j", "n", "energy", "admissible", "reason"
    );
    for l in levels {
        out.push_str(&format!(
            "{:<14} {:>5} {:>4} {:>20} {:>10}  {}\n",
            l.channel.to_string(),
            l.j().to_string(),
            l.n,
            fmt12(l.energy),
            l.admissible,
            l.reason.as_deref().unwrap_or("")
        ));
    }
    out
}

// ---------------------------------------------------------------- roots

#[derive(Serialize)]
struct RootsRecord {
    j: HalfInt,
    k: MonopoleCharge,
    #[serde(skip_serializing_if = "Option::is_none")]
    notice: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    couplings: Option<Couplings>,
    /// Exact rational evaluation, with the closed forms.
    #[serde(skip_serializing_if = "Option::is_none")]
    invariants: Option<CubicInvariants>,
    /// Floating-point evaluation from the matrix entries.
    #[serde(skip_serializing_if = "Option::is_none")]
    invariants_float: Option<CubicInvariants>,
    #[serde(skip_serializing_if = "Option::is_none")]
    roots: Option<RootTriple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transform: Option<[[f64; 3]; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    eigen_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    transform_note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parity_pair: Option<[f64; 2]>,
}

fn roots_record(j: HalfInt, k: MonopoleCharge) -> Result<RootsRecord, Fail> {
    monopole_spectra::quantum::check_admissible(k, j).map_err(cfg_err)?;
    let mut rec = RootsRecord {
        j,
        k,
        notice: None,
        couplings: None,
        invariants: None,
        invariants_float: None,
        roots: None,
        transform: None,
        eigen_residual: None,
        transform_note: None,
        parity_pair: None,
    };
    if !k.is_monopole() && j.is_integer() && j.twice() >= 2 {
        rec.parity_pair = Some(mixing::parity_eigenvalues(j)?);
    }
    if classify(k, j) == ChannelClass::MinimumJ {
        rec.notice = Some(format!(
            "minimum j = |k| - 1: a single radial equation with L = 0, no 3x3 mixing"
        ));
        return Ok(rec);
    }
    if !k.is_monopole() && j.twice() == 0 {
        rec.notice = Some("j = 0 without a monopole: a single radial equation, no 3x3 mixing".into());
        return Ok(rec);
    }
    let mp = mixing::mixing_problem(j, k)?;
    rec.couplings = Some(mp.couplings);
    rec.invariants = Some(mp.invariants);
    rec.invariants_float = Some(mixing::invariants_from_matrix(&mp.matrix));
    rec.roots = Some(mp.roots);
    rec.transform = mp.transform.map(|t| t.s);
    rec.eigen_residual = mp.transform.map(|t| t.residual);
    rec.transform_note = mp.transform_note;
    Ok(rec)
}

fn roots_table(recs: &[RootsRecord]) -> String {
    let mut out = String::new();
    for r in recs {
        out.push_str(&format!("j = {}, k = {}\n", r.j, r.k));
        if let Some(n) = &r.notice {
            out.push_str(&format!("  {n}\n"));
        }
        if let Some(c) = &r.couplings {
            out.push_str(&format!("  c = {}  d = {}\n", fmt12(c.c), fmt12(c.d)));
        }
        if let (Some(i), Some(f)) = (&r.invariants, &r.invariants_float) {
            out.push_str(&format!("  r = {}  s = {}  t = {}\n", fmt12(i.r), fmt12(i.s), fmt12(i.t)));
            out.push_str(&format!(
                "  p = {}  q = {}  D = {}\n",
                fmt12(i.p),
                fmt12(i.q),
                fmt12(i.discriminant)
            ));
            out.push_str(&format!("  closed form p = {}  q = {}\n", fmt12(i.p_closed), fmt12(i.q_closed)));
            out.push_str(&format!("  from float matrix p = {}  q = {}\n", fmt12(f.p), fmt12(f.q)));
        }
        if let Some(t) = &r.roots {
            for i in 0..3 {
                out.push_str(&format!("  A{} = {}  L{} = {}\n", i + 1, fmt12(t.a[i]), i + 1, fmt12(t.l[i])));
            }
        }
        if let Some(s) = &r.transform {
            out.push_str("  S =\n");
            for row in s {
                out.push_str(&format!("    {} {} {}\n", fmt12(row[0]), fmt12(row[1]), fmt12(row[2])));
            }
        }
        if let Some(e) = r.eigen_residual {
            out.push_str(&format!("  eigen-residual = {}\n", fmt12(e)));
        }
        if let Some(n) = &r.transform_note {
            out.push_str(&format!("  transform: {n}\n"));
        }
        if let Some(p) = r.parity_pair {
            out.push_str(&format!("  parity pair = {{{}, {}}}\n", fmt12(p[0]), fmt12(p[1])));
        }
    }
    out
}

fn roots_csv(recs: &[RootsRecord]) -> String {
    let mut out = String::from("j,k,quantity,value\n");
    for r in recs {
        let mut row = |q: &str, v: String| out.push_str(&format!("{},{},{q},{}\n", r.j, r.k, csv_field(&v)));
        if let Some(n) = &r.notice {
            row("notice", n.clone());
        }
        if let Some(c) = &r.couplings {
            row("c", fmt12(c.c));
            row("d", fmt12(c.d));
        }
        if let (Some(i), Some(f)) = (&r.invariants, &r.invariants_float) {
            for (name, v) in [
                ("r", i.r),
                ("s", i.s),
                ("t", i.t),
                ("p", i.p),
                ("q", i.q),
                ("D", i.discriminant),
                ("p_closed", i.p_closed),
                ("q_closed", i.q_closed),
                ("p_float", f.p),
                ("q_float", f.q),
            ] {
                row(name, fmt12(v));
            }
        }
        if let Some(t) = &r.roots {
            for i in 0..3 {
                row(&format!("A{}", i + 1), fmt12(t.a[i]));
                row(&format!("L{}", i + 1), fmt12(t.l[i]));
            }
        }
        if let Some(s) = &r.transform {
            for (i, rowv) in s.iter().enumerate() {
                for (j, v) in rowv.iter().enumerate() {
                    row(&format!("S{}{}", i + 1, j + 1), fmt12(*v));
                }
            }
        }
        if let Some(e) = r.eigen_residual {
            row("eigen_residual", fmt12(e));
        }
        if let Some(p) = r.parity_pair {
            row("parity_plus", fmt12(p[0]));
            row("parity_minus", fmt12(p[1]));
        }
    }
    out
}

fn cmd_roots(ctx: &Ctx, a: RootsArgs) -> Result<(), Fail> {
    let k = ctx.charge(a.k, false)?;
    let js = parse_half_range(&ctx.text(a.j, "j").ok_or_else(|| cfg_err("roots needs --j"))?)?;
    let format = ctx.format(Format::Table)?;
    let recs = js.iter().map(|&j| roots_record(j, k)).collect::<Result<Vec<_>, _>>()?;
    let text = match format {
        Format::Json => json12(&recs),
        Format::Csv => roots_csv(&recs),
        Format::Table => roots_table(&recs),
    };
    emit(&text, ctx.output().as_deref())?;
    Ok(())
}

// ---------------------------------------------------------------- validate

#[derive(Serialize)]
struct Envelope<'a> {
    suite: &'a str,
    /// The run file as read, empty without `--config`.
    config: String,
    passed: bool,
    runtime_seconds: f64,
    report: &'a SuiteReport,
}

fn run_parallel(suite: Suite, tol: &Tolerances) -> SuiteReport {
    if suite != Suite::All {
        return run_suite(suite, tol);
    }
    let mut parts: Vec<SuiteReport> = Suite::PARTS.par_iter().map(|&s| run_suite(s, tol)).collect();
    parts.push(monopole_spectra::validate::determinism_suite(tol));
    SuiteReport::merged(Suite::All, parts)
}

fn cmd_validate(ctx: &Ctx, a: ValidateArgs) -> Result<(), Fail> {
    let name = ctx.text(a.suite, "suite").unwrap_or_else(|| "all".into());
    let suite: Suite = name.parse().map_err(cfg_err)?;
    let tol = ctx.tolerances()?;
    let format = ctx.format(Format::Table)?;
    let report_path = a.report.or_else(|| ctx.file.get("report").map(PathBuf::from));

    let start = Instant::now();
    let rep = run_parallel(suite, &tol);
    let runtime = start.elapsed().as_secs_f64();

    let text = match format {
        Format::Json => json12(&rep),
        Format::Table | Format::Csv => rep.to_table(),
    };
    emit(&text, ctx.output().as_deref())?;
    if let Some(p) = report_path {
        let env = Envelope {
            suite: suite.name(),
            config: ctx.file.serialize(),
            passed: rep.passed(),
            runtime_seconds: runtime,
            report: &rep,
        };
        std::fs::write(&p, json12(&env))?;
    }
    note(&format!("suite {} finished in {runtime:.2} s", suite.name()));
    match rep.first_failure() {
        None => Ok(()),
        Some(c) => Err(Fail::Compute(format!(
            "criterion {} failed: {} (measured {:e}, tolerance {:e}) {}",
            c.id, c.check, c.measured, c.tolerance, c.detail
        ))),
    }
}

// ---------------------------------------------------------------- wavefunction

#[derive(Serialize)]
struct WaveOutput<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    level: Option<&'a EnergyLevel>,
    residual: Option<f64>,
    solution: &'a RadialSolution,
}

fn default_wave_grid(sc: &Scenario, level: Option<&EnergyLevel>) -> String {
    if let (Geometry::Flat, Potential::Coulomb { alpha }, Some(l)) = (sc.geometry, sc.potential, level) {
        let big_n = l.meta.big_n.unwrap_or(1.0);
        let r_max = (12.0 * big_n * big_n / (sc.mass * alpha)).clamp(40.0, 400.0);
        return format!("0.001:{r_max}:4000");
    }
    "0.001:40:4000".into()
}

fn cmd_wavefunction(ctx: &Ctx, a: WaveArgs) -> Result<(), Fail> {
    let sc = ctx.scenario(&a.scenario)?;
    let j: HalfInt = ctx
        .text(a.j, "j")
        .ok_or_else(|| cfg_err("wavefunction needs --j"))?
        .parse()
        .map_err(cfg_err)?;
    let n: u32 = ctx.value(a.n.map(|s| s.parse::<u32>()).transpose().map_err(cfg_err)?, "n")?.unwrap_or(0);
    let channel = match ctx.text(a.channel, "channel") {
        Some(s) => s.parse::<Channel>().map_err(cfg_err)?,
        None => default_channels(&sc, j)
            .and_then(|c| c.first().copied())
            .ok_or_else(|| cfg_err(format!("no default channel for j = {j}; pass --channel")))?,
    };
    let energy = ctx.value(a.energy, "energy")?;
    let grid_text = ctx.text(a.grid, "grid");
    let format = ctx.format(Format::Csv)?;
    let grid_of = |level: Option<&EnergyLevel>| -> Result<Grid, Fail> {
        let spec = grid_text.clone().unwrap_or_else(|| default_wave_grid(&sc, level));
        Grid::parse(&spec).map_err(cfg_err)
    };

    let (level, solution, residual) = if sc.potential == Potential::None {
        let e = energy.ok_or_else(|| cfg_err("free-particle profiles need --energy"))?;
        let grid = grid_of(None)?;
        match (sc.geometry, channel) {
            (Geometry::Flat, Channel::MinJ) => {
                let sol = radial::peculiar_state(e, sc.mass, &grid)?;
                let res = radial::residual(&radial::peculiar_problem(sc.mass), &sol, e).ok();
                (None, sol, res)
            }
            (Geometry::Lobachevsky { .. }, Channel::MinJ) => {
                let rel = radial::relativistic_minj(sc.mass + e, sc.mass, true, &grid)?;
                (None, rel.solution, Some(rel.residual))
            }
            (Geometry::Lobachevsky { .. }, _) => {
                let problem = radial::build_problem(&sc, channel, j)?;
                let two_m_e = 2.0 * sc.mass * e;
                let sol = RadialSolution::new(
                    &grid,
                    "regular free solution y^a (y-1)^b 2F1(lambda, beta; lambda+beta-gamma+1; 1-y)",
                    &[("2ME", two_m_e), ("origin_exponent", problem.origin_exponent)],
                    |r| radial::free_regular_solution(&problem, two_m_e, r),
                )?;
                let res = radial::residual(&problem, &sol, e).ok();
                (None, sol, res)
            }
            _ => {
                return Err(Fail::Compute(format!(
                    "no free-particle profile for channel {channel} in {}",
                    sc.tag()
                )))
            }
        }
    } else {
        let lv = spectra::level(&sc, channel, j, n)?.require_admissible()?;
        let grid = grid_of(Some(&lv))?;
        let problem = radial::build_problem(&sc, channel, j)?;
        let sol = radial::analytic_solution(&problem, &lv, &grid)?;
        let res = radial::residual(&problem, &sol, lv.energy).ok();
        (Some(lv), sol, res)
    };
    if residual.is_none() {
        note("note: residual not evaluated (needs a uniform grid with r_min > 0 and at least 204 nodes)");
    }
    let text = match format {
        Format::Json => json12(&WaveOutput {
            level: level.as_ref(),
            residual,
            solution: &solution,
        }),
        _ => solution.to_csv(residual),
    };
    emit(&text, ctx.output().as_deref())?;
    Ok(())
}

/// Diagnostics on stderr; a closed stderr is not an error.
fn note(msg: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stderr(), "{msg}");
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Fail> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| cfg_err(format!("{}: {e}", p.display())))?;
            RunConfig::parse(&text).map_err(|e| cfg_err(format!("{}: {e}", p.display())))
        }
    }
}

fn run(cli: Cli) -> Result<(), Fail> {
    init_threads()?;
    let ctx = Ctx {
        file: load_config(cli.config.as_deref())?,
        format: cli.format,
        output: cli.output,
        tol: cli.tol,
    };
    match cli.command {
        Command::Spectrum(a) => cmd_spectrum(&ctx, a),
        Command::Roots(a) => cmd_roots(&ctx, a),
        Command::Validate(a) => cmd_validate(&ctx, a),
        Command::Wavefunction(a) => cmd_wavefunction(&ctx, a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail::Compute(msg)) => {
            note(&format!("error: {msg}"));
            ExitCode::from(1)
        }
        Err(Fail::Config(msg)) => {
            note(&format!("configuration error: {msg}"));
            ExitCode::from(2)
        }
    }
}
