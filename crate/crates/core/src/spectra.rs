//! Closed-form energy levels.
//!
//! Every function returns a level record even when the level is not a bound
//! state; `admissible` and `reason` say why. Use
//! [`EnergyLevel::require_admissible`] to turn that into an error.
//!
//! Energies are nonrelativistic (rest energy excluded) and in natural units:
//! `ħ = c = 1` in flat space, plus curvature radius `R = 1` in hyperbolic space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixing::mixing_problem;
use crate::quantum::{
    check_admissible, classify, Channel, ChannelClass, Geometry, HalfInt, MonopoleCharge, Potential, Scenario,
};
use crate::units::UnitSystem;

/// How the quantization condition behind a level was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Derivation {
    /// A hypergeometric series truncated to a polynomial: a genuine solution.
    HypergeometricPolynomial,
    /// Only the exponent condition `β = −n` of a Heun equation was imposed;
    /// no polynomial solution is constructed.
    HeunFormalBetaCondition,
}

/// Which of the two flat-oscillator prefactors a value uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OscillatorPrefactor {
    /// `½·sqrt(K/M)(3/2 + L + 2n)`, as printed next to the spectrum.
    Printed,
    /// `sqrt(K/M)(3/2 + L + 2n)`, from setting the ₁F₁ parameter to `−n`.
    Quantization,
}

/// The prefactor that the finite-difference oracle confirms (re-checked by
/// `oracle::arbitrate_oscillator_prefactor` in tests and validation runs).
pub const CONFIRMED_OSCILLATOR_PREFACTOR: OscillatorPrefactor = OscillatorPrefactor::Quantization;

/// Channel-local quantities kept alongside the energy.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct LevelMeta {
    /// Effective angular momentum `L` (flat space).
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub l: Option<f64>,
    /// Mixing-matrix root `A` of the branch.
    #[serde(rename = "A", skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    /// The channel's principal number `N` (or `ν` for the relativistic min-j level).
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub big_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_printed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_quantization: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prefactor: Option<OscillatorPrefactor>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    pub scenario: Scenario,
    pub channel: Channel,
    /// Twice the total angular momentum.
    pub j2: i32,
    pub n: u32,
    #[serde(rename = "E")]
    pub energy: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_rel: Option<f64>,
    pub derivation: Derivation,
    pub admissible: bool,
    pub reason: Option<String>,
    /// Tag of the closed form used.
    pub paper_eq: String,
    #[serde(default)]
    pub meta: LevelMeta,
    /// `None` for natural units.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<UnitSystem>,
}

impl EnergyLevel {
    pub fn j(&self) -> HalfInt {
        HalfInt::from_twice(self.j2)
    }

    pub fn require_admissible(self) -> Result<Self> {
        if self.admissible {
            Ok(self)
        } else {
            Err(Error::Inadmissible(format!(
                "{} {} j = {} n = {}: {}",
                self.scenario.tag(),
                self.channel,
                self.j(),
                self.n,
                self.reason.as_deref().unwrap_or("not a bound state")
            )))
        }
    }
}

struct LevelBuilder {
    scenario: Scenario,
    channel: Channel,
    j: HalfInt,
    n: u32,
    derivation: Derivation,
    tag: &'static str,
}

impl LevelBuilder {
    fn build(self, energy: f64, inadmissible: Option<String>, meta: LevelMeta) -> EnergyLevel {
        EnergyLevel {
            scenario: self.scenario,
            channel: self.channel,
            j2: self.j.twice(),
            n: self.n,
            energy,
            epsilon_rel: None,
            derivation: self.derivation,
            admissible: inadmissible.is_none(),
            reason: inadmissible,
            paper_eq: self.tag.to_string(),
            meta,
            units: None,
        }
    }
}

/// Flat-space channel parameters: effective `L` and the mixing root, if any.
fn flat_branch(j: HalfInt, k: MonopoleCharge, channel: Channel) -> Result<(f64, Option<f64>)> {
    check_admissible(k, j)?;
    let class = classify(k, j);
    match (channel, class) {
        (Channel::MinJ, ChannelClass::MinimumJ) => Ok((0.0, None)),
        (Channel::MinJ, _) => Err(Error::Unsupported(format!(
            "min-j channel needs j = |k| − 1 (j = {j}, k = {k})"
        ))),
        (Channel::BranchA(i), c) if c != ChannelClass::MinimumJ => {
            let mp = mixing_problem(j, k)?;
            let (a, l) = mp.roots.branch(i)?;
            Ok((l, Some(a)))
        }
        _ => Err(Error::Unsupported(format!(
            "channel {channel} does not exist in flat space for j = {j}, k = {k}"
        ))),
    }
}

pub fn flat_coulomb(alpha: f64, mass: f64, j: HalfInt, k: MonopoleCharge, n: u32, channel: Channel) -> Result<EnergyLevel> {
    let scenario = Scenario::new(Geometry::Flat, Potential::Coulomb { alpha }, k, mass)?;
    let (l, a) = flat_branch(j, k, channel)?;
    let big_n = f64::from(n) + l + 1.0;
    let energy = -alpha * alpha * mass / (2.0 * big_n * big_n);
    let tag = if channel == Channel::MinJ { "flat-coulomb-min-j" } else { "flat-coulomb-branch" };
    Ok(LevelBuilder {
        scenario,
        channel,
        j,
        n,
        derivation: Derivation::HypergeometricPolynomial,
        tag,
    }
    .build(
        energy,
        None,
        LevelMeta {
            l: Some(l),
            a,
            big_n: Some(big_n),
            ..LevelMeta::default()
        },
    ))
}

/// Both candidate flat-oscillator energies `(printed, quantization)`.
pub fn flat_oscillator_candidates(k_osc: f64, mass: f64, l: f64, n: u32) -> (f64, f64) {
    let e = (k_osc / mass).sqrt() * (1.5 + l + 2.0 * f64::from(n));
    (0.5 * e, e)
}

/// Flat oscillator level; `E` is the oracle-confirmed candidate, both
/// candidates are kept in `meta`.
pub fn flat_oscillator(k_osc: f64, mass: f64, j: HalfInt, k: MonopoleCharge, n: u32, channel: Channel) -> Result<EnergyLevel> {
    let scenario = Scenario::new(Geometry::Flat, Potential::Oscillator { k_osc }, k, mass)?;
    let (l, a) = flat_branch(j, k, channel)?;
    let (printed, quantization) = flat_oscillator_candidates(k_osc, mass, l, n);
    let energy = match CONFIRMED_OSCILLATOR_PREFACTOR {
        OscillatorPrefactor::Printed => printed,
        OscillatorPrefactor::Quantization => quantization,
    };
    let tag = if channel == Channel::MinJ { "flat-oscillator-min-j" } else { "flat-oscillator-branch" };
    Ok(LevelBuilder {
        scenario,
        channel,
        j,
        n,
        derivation: Derivation::HypergeometricPolynomial,
        tag,
    }
    .build(
        energy,
        None,
        LevelMeta {
            l: Some(l),
            a,
            e_printed: Some(printed),
            e_quantization: Some(quantization),
            prefactor: Some(CONFIRMED_OSCILLATOR_PREFACTOR),
            ..LevelMeta::default()
        },
    ))
}

fn lob_scenario(potential: Potential, k: MonopoleCharge, mass: f64) -> Result<Scenario> {
    Scenario::new(Geometry::Lobachevsky { radius: 1.0 }, potential, k, mass)
}

fn min_j_of(k: MonopoleCharge) -> Result<HalfInt> {
    if k.0.abs().twice() < 2 {
        return Err(Error::Unsupported(format!(
            "the minimum-j channel j = |k| − 1 needs |k| >= 1 (k = {k})"
        )));
    }
    Ok(k.0.abs() - HalfInt::from_int(1))
}

/// Relativistic minimum-j level in a Coulomb field on hyperbolic space.
///
/// `ν = n + (1 + sqrt(1 − 4α²))/2`,
/// `ε = M/sqrt(1 + α²/ν²) · sqrt(1 − (α² + ν²)/M²)`, `E = ε − M`.
///
/// A decaying solution needs both `α² + ν² < M²` (real `ε`) and a positive
/// exponent `B = (εα/ν − ν)/2` of the factor `e^{−2Br}`, i.e. `εα > ν²`.
pub fn lob_minj_coulomb(alpha: f64, mass: f64, k: MonopoleCharge, n: u32) -> Result<EnergyLevel> {
    let scenario = lob_scenario(Potential::Coulomb { alpha }, k, mass)?;
    let j = min_j_of(k)?;
    if !(alpha < 0.5) {
        return Err(Error::Domain(format!(
            "min-j Coulomb needs 0 < α < 1/2 for a real origin exponent, got α = {alpha}"
        )));
    }
    let nu = f64::from(n) + 0.5 * (1.0 + (1.0 - 4.0 * alpha * alpha).sqrt());
    let radicand = 1.0 - (alpha * alpha + nu * nu) / (mass * mass);
    let (epsilon, reason) = if radicand <= 0.0 {
        (
            f64::NAN,
            Some(format!("finite spectrum exhausted: α² + ν² = {} >= M²", alpha * alpha + nu * nu)),
        )
    } else {
        let eps = mass / (1.0 + alpha * alpha / (nu * nu)).sqrt() * radicand.sqrt();
        let b = 0.5 * (eps * alpha / nu - nu);
        let reason = (b <= 0.0).then(|| {
            format!("finite spectrum exhausted: decay exponent B = (εα/ν − ν)/2 = {b:.6e} is not positive")
        });
        (eps, reason)
    };
    let mut level = LevelBuilder {
        scenario,
        channel: Channel::MinJ,
        j,
        n,
        derivation: Derivation::HypergeometricPolynomial,
        tag: "lob-min-j-coulomb",
    }
    .build(
        epsilon - mass,
        reason,
        LevelMeta {
            big_n: Some(nu),
            ..LevelMeta::default()
        },
    );
    level.epsilon_rel = epsilon.is_finite().then_some(epsilon);
    Ok(level)
}

/// `N·sqrt(K/M + 1/(2M)²) − (N² + ¼)/(2M)`.
pub fn lob_oscillator_energy(k_osc: f64, mass: f64, big_n: f64) -> f64 {
    big_n * (k_osc / mass + 1.0 / (4.0 * mass * mass)).sqrt() - (big_n * big_n + 0.25) / (2.0 * mass)
}

/// `σ = sqrt(1 + 4MK)/2`: bound states need `N < σ`.
pub fn lob_oscillator_sigma(k_osc: f64, mass: f64) -> f64 {
    0.5 * (1.0 + 4.0 * mass * k_osc).sqrt()
}

fn oscillator_restriction(k_osc: f64, mass: f64, big_n: f64) -> Option<String> {
    let sigma = lob_oscillator_sigma(k_osc, mass);
    (big_n >= sigma).then(|| format!("finite spectrum exhausted: N = {big_n} >= sqrt(1 + 4MK)/2 = {sigma}"))
}

/// Minimum-j oscillator level on hyperbolic space, `N = 2n + 3/2`.
pub fn lob_minj_oscillator(k_osc: f64, mass: f64, k: MonopoleCharge, n: u32) -> Result<EnergyLevel> {
    let scenario = lob_scenario(Potential::Oscillator { k_osc }, k, mass)?;
    let j = min_j_of(k)?;
    let big_n = 2.0 * f64::from(n) + 1.5;
    Ok(LevelBuilder {
        scenario,
        channel: Channel::MinJ,
        j,
        n,
        derivation: Derivation::HypergeometricPolynomial,
        tag: "lob-min-j-oscillator",
    }
    .build(
        lob_oscillator_energy(k_osc, mass, big_n),
        oscillator_restriction(k_osc, mass, big_n),
        LevelMeta {
            big_n: Some(big_n),
            ..LevelMeta::default()
        },
    ))
}

/// Same level written as a sech²-well spectrum: `K/2 − (s − (2n+1))²/(2M)`,
/// `s = (−1 + sqrt(1 + 4MK))/2`.
pub fn poschl_teller_form(k_osc: f64, mass: f64, n: u32) -> f64 {
    let s = 0.5 * (-1.0 + (1.0 + 4.0 * mass * k_osc).sqrt());
    let d = s - (2.0 * f64::from(n) + 1.0);
    0.5 * k_osc - d * d / (2.0 * mass)
}

fn no_monopole_j(j: HalfInt, channel: Channel) -> Result<()> {
    if !j.is_integer() || j.twice() < 0 {
        return Err(Error::Domain(format!("no-monopole states need integer j >= 0, got {j}")));
    }
    match channel {
        Channel::ParityOdd => Ok(()),
        Channel::HeunChannel1 | Channel::HeunChannel2 if j.twice() >= 2 => Ok(()),
        Channel::HeunChannel1 | Channel::HeunChannel2 => Err(Error::Unsupported(
            "the parity (−1)^j pair of equations exists only for j >= 1".into(),
        )),
        other => Err(Error::Unsupported(format!(
            "channel {other} is not a no-monopole channel with an external field"
        ))),
    }
}

/// `N` of the no-monopole Coulomb channels.
pub fn coulomb_channel_n(j: HalfInt, n: u32, channel: Channel) -> Result<f64> {
    let (jv, nf) = (j.value(), f64::from(n));
    match channel {
        Channel::ParityOdd => Ok(jv + 1.0 + nf),
        Channel::HeunChannel1 => Ok(jv + 1.5 + nf / 2.0),
        Channel::HeunChannel2 => Ok(jv + 0.5 + nf / 2.0),
        other => Err(Error::Unsupported(format!("no Coulomb spectrum for channel {other}"))),
    }
}

/// `−Mα²/(2N²) − N²/(2M)`.
pub fn lob_coulomb_energy(alpha: f64, mass: f64, big_n: f64) -> f64 {
    -mass * alpha * alpha / (2.0 * big_n * big_n) - big_n * big_n / (2.0 * mass)
}

/// No-monopole Coulomb level on hyperbolic space. Bound states need the decay
/// exponent `b = (Mα − N²)/(2N)` to be positive.
pub fn lob_nomonopole_coulomb(alpha: f64, mass: f64, j: HalfInt, n: u32, channel: Channel) -> Result<EnergyLevel> {
    let scenario = lob_scenario(Potential::Coulomb { alpha }, MonopoleCharge::NONE, mass)?;
    no_monopole_j(j, channel)?;
    let big_n = coulomb_channel_n(j, n, channel)?;
    let b = (mass * alpha - big_n * big_n) / (2.0 * big_n);
    let reason = (b <= 0.0).then(|| format!("finite spectrum exhausted: Mα = {} <= N² = {}", mass * alpha, big_n * big_n));
    let (derivation, tag) = match channel {
        Channel::ParityOdd => (Derivation::HypergeometricPolynomial, "lob-coulomb-parity-odd"),
        Channel::HeunChannel1 => (Derivation::HeunFormalBetaCondition, "lob-coulomb-heun-1"),
        _ => (Derivation::HeunFormalBetaCondition, "lob-coulomb-heun-2"),
    };
    Ok(LevelBuilder {
        scenario,
        channel,
        j,
        n,
        derivation,
        tag,
    }
    .build(
        lob_coulomb_energy(alpha, mass, big_n),
        reason,
        LevelMeta {
            big_n: Some(big_n),
            ..LevelMeta::default()
        },
    ))
}

/// `N` of the no-monopole oscillator channels.
pub fn oscillator_channel_n(j: HalfInt, n: u32, channel: Channel) -> Result<f64> {
    let (jv, nf) = (j.value(), f64::from(n));
    match channel {
        Channel::ParityOdd => Ok(2.0 * nf + jv + 1.5),
        Channel::HeunChannel1 => Ok(2.0 + jv + nf),
        Channel::HeunChannel2 => Ok(1.0 + jv + nf),
        other => Err(Error::Unsupported(format!("no oscillator spectrum for channel {other}"))),
    }
}

pub fn lob_nomonopole_oscillator(k_osc: f64, mass: f64, j: HalfInt, n: u32, channel: Channel) -> Result<EnergyLevel> {
    let scenario = lob_scenario(Potential::Oscillator { k_osc }, MonopoleCharge::NONE, mass)?;
    no_monopole_j(j, channel)?;
    let big_n = oscillator_channel_n(j, n, channel)?;
    let (derivation, tag) = match channel {
        Channel::ParityOdd => (Derivation::HypergeometricPolynomial, "lob-oscillator-parity-odd"),
        Channel::HeunChannel1 => (Derivation::HeunFormalBetaCondition, "lob-oscillator-heun-1"),
        _ => (Derivation::HeunFormalBetaCondition, "lob-oscillator-heun-2"),
    };
    Ok(LevelBuilder {
        scenario,
        channel,
        j,
        n,
        derivation,
        tag,
    }
    .build(
        lob_oscillator_energy(k_osc, mass, big_n),
        oscillator_restriction(k_osc, mass, big_n),
        LevelMeta {
            big_n: Some(big_n),
            ..LevelMeta::default()
        },
    ))
}

/// Level for any supported `(scenario, channel)`; the hyperbolic radius only
/// matters for unit conversion.
pub fn level(scenario: &Scenario, channel: Channel, j: HalfInt, n: u32) -> Result<EnergyLevel> {
    scenario.validate()?;
    let (m, k) = (scenario.mass, scenario.charge);
    let mut lv = match (scenario.geometry, scenario.potential) {
        (Geometry::Flat, Potential::Coulomb { alpha }) => flat_coulomb(alpha, m, j, k, n, channel),
        (Geometry::Flat, Potential::Oscillator { k_osc }) => flat_oscillator(k_osc, m, j, k, n, channel),
        (Geometry::Lobachevsky { .. }, Potential::Coulomb { alpha }) => match channel {
            Channel::MinJ => {
                if j != min_j_of(k)? {
                    return Err(Error::Unsupported(format!("min-j channel needs j = |k| − 1, got j = {j}")));
                }
                lob_minj_coulomb(alpha, m, k, n)
            }
            _ if !k.is_monopole() => lob_nomonopole_coulomb(alpha, m, j, n, channel),
            _ => Err(Error::Unsupported(format!(
                "hyperbolic Coulomb with a monopole has a closed form only in the min-j channel (got {channel})"
            ))),
        },
        (Geometry::Lobachevsky { .. }, Potential::Oscillator { k_osc }) => match channel {
            Channel::MinJ => {
                if j != min_j_of(k)? {
                    return Err(Error::Unsupported(format!("min-j channel needs j = |k| − 1, got j = {j}")));
                }
                lob_minj_oscillator(k_osc, m, k, n)
            }
            _ if !k.is_monopole() => lob_nomonopole_oscillator(k_osc, m, j, n, channel),
            _ => Err(Error::Unsupported(format!(
                "hyperbolic oscillator with a monopole has a closed form only in the min-j channel (got {channel})"
            ))),
        },
        (_, Potential::None) => Err(Error::Unsupported(
            "free motion has no discrete spectrum; see radial::standing_wave_check".into(),
        )),
    }?;
    lv.scenario = *scenario;
    Ok(lv)
}

/// Converts a natural-unit level to physical units.
///
/// In hyperbolic space the reference length is the curvature radius and must
/// be given; the level's dimensionless mass must equal `mcℓ/ħ`.
pub fn to_physical_units(level: &EnergyLevel, units: &UnitSystem) -> Result<EnergyLevel> {
    units.validate()?;
    if level.units.is_some() {
        return Err(Error::Units("level is already in physical units".into()));
    }
    if let Geometry::Lobachevsky { radius } = level.scenario.geometry {
        match units.length {
            None => return Err(Error::Units("hyperbolic levels need the curvature radius R".into())),
            Some(r) if (r - radius).abs() > 1e-12 * radius && radius != 1.0 => {
                return Err(Error::Units(format!(
                    "unit length {r} differs from the scenario curvature radius {radius}"
                )))
            }
            _ => {}
        }
    }
    let m_nat = units.natural_mass();
    if (m_nat - level.scenario.mass).abs() > 1e-9 * m_nat {
        return Err(Error::Units(format!(
            "level mass {} does not match mcℓ/ħ = {m_nat}",
            level.scenario.mass
        )));
    }
    let s = units.energy_scale();
    let mut out = level.clone();
    out.energy *= s;
    out.epsilon_rel = out.epsilon_rel.map(|e| e * s);
    out.meta.e_printed = out.meta.e_printed.map(|e| e * s);
    out.meta.e_quantization = out.meta.e_quantization.map(|e| e * s);
    out.units = Some(*units);
    Ok(out)
}

/// Inverse of [`to_physical_units`].
pub fn to_natural_units(level: &EnergyLevel) -> Result<EnergyLevel> {
    let units = level
        .units
        .ok_or_else(|| Error::Units("level is already in natural units".into()))?;
    let s = units.energy_scale();
    let mut out = level.clone();
    out.energy /= s;
    out.epsilon_rel = out.epsilon_rel.map(|e| e / s);
    out.meta.e_printed = out.meta.e_printed.map(|e| e / s);
    out.meta.e_quantization = out.meta.e_quantization.map(|e| e / s);
    out.units = None;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn k(s: &str) -> MonopoleCharge {
        MonopoleCharge::new(h(s))
    }

    #[test]
    fn flat_coulomb_examples() {
        let lv = flat_coulomb(1.0, 1.0, h("0"), k("1"), 0, Channel::MinJ).unwrap();
        assert_eq!(lv.energy, -0.5);
        assert!(lv.admissible);
        let tiny = flat_coulomb(1e-8, 1.0, h("2"), k("1"), 3, Channel::BranchA(2)).unwrap();
        assert!(tiny.energy.abs() < 1e-16);

        let lv = flat_coulomb(1.0, 1.0, h("2"), k("1"), 0, Channel::BranchA(3)).unwrap();
        let a3 = lv.meta.a.unwrap();
        assert!((a3 - 5.3635).abs() < 1e-3);
        let l3 = -0.5 + (0.25 + 2.0 * a3).sqrt();
        assert!((lv.energy + 1.0 / (2.0 * (l3 + 1.0).powi(2))).abs() < 1e-15);
    }

    #[test]
    fn flat_channel_checks() {
        assert!(flat_coulomb(1.0, 1.0, h("2"), k("1"), 0, Channel::MinJ).is_err());
        assert!(flat_coulomb(1.0, 1.0, h("0"), k("1"), 0, Channel::BranchA(1)).is_err());
        assert!(flat_coulomb(1.0, 1.0, h("2"), k("1"), 0, Channel::ParityOdd).is_err());
        assert!(flat_coulomb(-1.0, 1.0, h("2"), k("1"), 0, Channel::BranchA(1)).is_err());
    }

    #[test]
    fn flat_oscillator_candidates_and_spacing() {
        let lv = flat_oscillator(1.0, 1.0, h("0"), k("1"), 0, Channel::MinJ).unwrap();
        assert_eq!(lv.meta.e_printed, Some(0.75));
        assert_eq!(lv.meta.e_quantization, Some(1.5));
        assert_eq!(lv.energy, 1.5);
        for ch in [Channel::BranchA(1), Channel::BranchA(2), Channel::BranchA(3)] {
            let e0 = flat_oscillator(4.0, 1.0, h("2"), k("1"), 0, ch).unwrap();
            let e1 = flat_oscillator(4.0, 1.0, h("2"), k("1"), 1, ch).unwrap();
            assert!((e1.energy - e0.energy - 2.0 * 2.0).abs() < 1e-12);
            let dp = e1.meta.e_printed.unwrap() - e0.meta.e_printed.unwrap();
            assert!((dp - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn lob_minj_coulomb_examples() {
        let lv = lob_minj_coulomb(0.1, 10.0, k("1"), 0).unwrap();
        let nu = 0.5 * (1.0 + 0.96f64.sqrt());
        assert!((lv.meta.big_n.unwrap() - nu).abs() < 1e-15);
        assert!((nu - 0.989_897_948_556_635_6).abs() < 1e-15);
        let eps = 10.0 / (1.0 + 0.01 / (nu * nu)).sqrt() * (1.0 - (0.01 + nu * nu) / 100.0).sqrt();
        assert!((lv.epsilon_rel.unwrap() - eps).abs() < 1e-13);
        assert!((lv.energy - (eps - 10.0)).abs() < 1e-13);
        assert!(lv.admissible);

        // α → 0: ν → 1, ε → M·sqrt(1 − 1/M²)
        let lv = lob_minj_coulomb(1e-9, 10.0, k("1"), 0).unwrap();
        assert!((lv.meta.big_n.unwrap() - 1.0).abs() < 1e-12);
        assert!((lv.epsilon_rel.unwrap() - 10.0 * (1.0 - 0.01f64).sqrt()).abs() < 1e-8);

        let far = lob_minj_coulomb(0.1, 10.0, k("1"), 12).unwrap();
        assert!(!far.admissible);
        assert!(far.reason.unwrap().contains("finite spectrum exhausted"));
        assert!(lob_minj_coulomb(0.6, 10.0, k("1"), 0).is_err());
        assert!(lob_minj_coulomb(0.1, 10.0, k("1/2"), 0).is_err());
    }

    #[test]
    fn lob_minj_oscillator_examples() {
        let lv = lob_minj_oscillator(10.0, 1.0, k("1"), 0).unwrap();
        assert!((lv.energy - (1.5 * 10.25f64.sqrt() - 1.25)).abs() < 1e-14);
        assert!((lv.energy - 3.552_343_750_0).abs() < 1e-4);
        assert!(lv.admissible);
        for km in [10.0, 100.0, 2.5] {
            for n in 0..4 {
                let a = lob_minj_oscillator(km, 1.0, k("1"), n).unwrap().energy;
                assert!((a - poschl_teller_form(km, 1.0, n)).abs() < 1e-12);
            }
        }
        // K → 0 limit: negative, flagged
        let lv = lob_minj_oscillator(1e-12, 1.0, k("1"), 0).unwrap();
        assert!(lv.energy < 0.0 && !lv.admissible);
    }

    #[test]
    fn lob_coulomb_examples() {
        let lv = lob_nomonopole_coulomb(10.0, 1.0, h("0"), 0, Channel::ParityOdd).unwrap();
        assert_eq!(lv.energy, -50.5);
        assert!(lv.admissible);
        let lv = lob_nomonopole_coulomb(10.0, 1.0, h("0"), 3, Channel::ParityOdd).unwrap();
        assert!(!lv.admissible);
        let h1 = lob_nomonopole_coulomb(10.0, 1.0, h("1"), 2, Channel::HeunChannel1).unwrap();
        let h2 = lob_nomonopole_coulomb(10.0, 1.0, h("1"), 2, Channel::HeunChannel2).unwrap();
        assert_eq!(h1.meta.big_n.unwrap() - h2.meta.big_n.unwrap(), 1.0);
        assert_eq!(h1.derivation, Derivation::HeunFormalBetaCondition);
        assert!(lob_nomonopole_coulomb(10.0, 1.0, h("0"), 0, Channel::HeunChannel1).is_err());
    }

    #[test]
    fn lob_coulomb_decay_identity() {
        for (alpha, mass, nn) in [(10.0, 1.0, 1.0), (10.0, 1.0, 2.5), (3.0, 2.0, 1.5)] {
            let e = lob_coulomb_energy(alpha, mass, nn);
            let b = (mass * alpha - nn * nn) / (2.0 * nn);
            assert!((e - (-alpha - 2.0 * b * b / mass)).abs() < 1e-12);
        }
    }

    #[test]
    fn lob_oscillator_examples() {
        let lv = lob_nomonopole_oscillator(100.0, 1.0, h("0"), 0, Channel::ParityOdd).unwrap();
        assert_eq!(lv.meta.big_n, Some(1.5));
        assert!(lv.admissible);
        assert!((lob_oscillator_sigma(100.0, 1.0) - 401f64.sqrt() / 2.0).abs() < 1e-15);
        let h1 = lob_nomonopole_oscillator(100.0, 1.0, h("2"), 1, Channel::HeunChannel1).unwrap();
        let h2 = lob_nomonopole_oscillator(100.0, 1.0, h("2"), 1, Channel::HeunChannel2).unwrap();
        assert_eq!(h1.meta.big_n.unwrap() - h2.meta.big_n.unwrap(), 1.0);
        let count = (0..20)
            .filter(|&n| lob_nomonopole_oscillator(100.0, 1.0, h("0"), n, Channel::ParityOdd).unwrap().admissible)
            .count();
        // 2n + 3/2 < 10.012...
        assert_eq!(count, 5);
    }

    #[test]
    fn monotone_in_n() {
        let mut prev = f64::NEG_INFINITY;
        for n in 0..3 {
            let e = lob_nomonopole_coulomb(10.0, 1.0, h("0"), n, Channel::ParityOdd).unwrap().energy;
            assert!(e > prev);
            prev = e;
        }
        let mut prev = f64::NEG_INFINITY;
        for n in 0..5 {
            let e = lob_nomonopole_oscillator(100.0, 1.0, h("1"), n, Channel::ParityOdd).unwrap().energy;
            assert!(e > prev);
            prev = e;
        }
    }

    #[test]
    fn unit_conversion_matches_usual_forms() {
        let (hbar, c, m, r) = (1.3, 2.1, 0.8, 5.0);
        let units = UnitSystem {
            hbar,
            c,
            mass: m,
            length: Some(r),
        };
        let mm = units.natural_mass();
        let alpha = 0.9;
        let mut lv = lob_nomonopole_coulomb(alpha, mm, h("0"), 0, Channel::ParityOdd).unwrap();
        lv.scenario.geometry = Geometry::Lobachevsky { radius: r };
        let phys = to_physical_units(&lv, &units).unwrap();
        let nn = 1.0;
        let usual = -m * c * c * alpha * alpha / (2.0 * nn * nn) - hbar * hbar / (m * r * r) * nn * nn / 2.0;
        assert!((phys.energy - usual).abs() < 1e-12 * usual.abs());
        let back = to_natural_units(&phys).unwrap();
        assert!((back.energy - lv.energy).abs() < 1e-12 * lv.energy.abs());

        // oscillator: N ħ sqrt(k/m + ħ²/(4m²R⁴)) − ħ²(N² + ¼)/(2mR²)
        let k_phys = 0.37;
        let k_nat = units.natural_k_osc(k_phys);
        let mut lv = lob_minj_oscillator(k_nat, mm, k("1"), 1).unwrap();
        lv.scenario.geometry = Geometry::Lobachevsky { radius: r };
        let phys = to_physical_units(&lv, &units).unwrap();
        let nn = 3.5;
        let usual = nn * hbar * (k_phys / m + hbar * hbar / (4.0 * m * m * r.powi(4))).sqrt()
            - hbar * hbar * (nn * nn + 0.25) / (2.0 * m * r * r);
        assert!((phys.energy - usual).abs() < 1e-12 * usual.abs());

        let mut no_r = units;
        no_r.length = None;
        assert!(to_physical_units(&lv, &no_r).is_err());

        let id = to_physical_units(&lob_nomonopole_coulomb(alpha, 1.0, h("0"), 0, Channel::ParityOdd).unwrap(), &UnitSystem::IDENTITY)
            .unwrap();
        assert_eq!(id.energy, lob_coulomb_energy(alpha, 1.0, 1.0));
    }

    #[test]
    fn json_record_fields() {
        let lv = lob_nomonopole_coulomb(10.0, 1.0, h("1"), 0, Channel::ParityOdd).unwrap();
        let v = serde_json::to_value(&lv).unwrap();
        for key in ["scenario", "channel", "j2", "n", "E", "derivation", "admissible", "reason", "paper_eq"] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["j2"], 2);
        assert_eq!(v["channel"], "parity-odd");
        let back: EnergyLevel = serde_json::from_value(v).unwrap();
        assert_eq!(back, lv);
    }
}
