//! Heun parameter sets of the no-monopole parity-`(−1)^j` equations on
//! hyperbolic space, and the formal quantization `β = −n`.
//!
//! Coulomb: with `z = tanh(r/2)` the radial function is
//! `(1 − z²)^{−1/2} z^A (1 − z)^B (1 + z)^C H(z)`, where
//! `A = j + 2` (first equation) or `A = j` (second), `B = ½ + p`, `C = ½ − m`,
//! `p = sqrt(−2M(E + α))`, `m = sqrt(−2M(E − α))`.
//!
//! Oscillator: in `x = cosh r` the exponents are
//! `A = ½ − ½·sqrt(1 + 4MK)`, `C = ½ + j/2`, and `B = 1 + j/2` (first
//! equation) or `B = j/2` (second).
//!
//! Only the exponent condition is imposed; the accessory-parameter condition a
//! Heun polynomial also needs is not, so these levels are formal.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Channel, HalfInt};
use crate::specfun::{heun_local_full, HeunParams};
use crate::spectra::{coulomb_channel_n, lob_coulomb_energy, lob_oscillator_energy, lob_oscillator_sigma, oscillator_channel_n};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubstitutionExponents {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

/// Which Frobenius root each exponent takes. `BOUND_STATE` is the bound-state
/// choice used for every spectrum; the flips are for exploration only.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchOverride {
    pub flip_a: bool,
    pub flip_b: bool,
    pub flip_c: bool,
}

impl BranchOverride {
    pub const BOUND_STATE: BranchOverride = BranchOverride {
        flip_a: false,
        flip_b: false,
        flip_c: false,
    };
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeunSetup {
    pub channel: Channel,
    pub j2: i32,
    pub energy: f64,
    pub exponents: SubstitutionExponents,
    pub params: HeunParams,
}

fn heun_j(j: HalfInt, channel: Channel) -> Result<f64> {
    if !j.is_integer() || j.twice() < 2 {
        return Err(Error::Domain(format!("Heun channels need integer j >= 1, got {j}")));
    }
    match channel {
        Channel::HeunChannel1 | Channel::HeunChannel2 => Ok(j.value()),
        other => Err(Error::Unsupported(format!("{other} is not a Heun channel"))),
    }
}

/// Coulomb parameter set at energy `E` (requires `E + α < 0`, `E − α < 0`).
pub fn heun_params_coulomb(
    energy: f64,
    alpha: f64,
    mass: f64,
    j: HalfInt,
    channel: Channel,
    branch: BranchOverride,
) -> Result<HeunSetup> {
    let jv = heun_j(j, channel)?;
    let rp = -2.0 * mass * (energy + alpha);
    let rm = -2.0 * mass * (energy - alpha);
    if rp < 0.0 {
        return Err(Error::Domain(format!("radicand −2M(E + α) = {rp} is negative")));
    }
    if rm < 0.0 {
        return Err(Error::Domain(format!("radicand −2M(E − α) = {rm} is negative")));
    }
    let (p, m) = (rp.sqrt(), rm.sqrt());
    // Origin exponents: {j+2, −j−1} for the first equation, {j, 1−j} for the second.
    let (a_bound, a_other) = if channel == Channel::HeunChannel1 {
        (jv + 2.0, -jv - 1.0)
    } else {
        (jv, 1.0 - jv)
    };
    let a = if branch.flip_a { a_other } else { a_bound };
    let b = if branch.flip_b { 0.5 - p } else { 0.5 + p };
    let c = if branch.flip_c { 0.5 + m } else { 0.5 - m };
    let s = a + b + c;
    let params = HeunParams {
        gamma: 2.0 * a,
        delta: 2.0 * b,
        epsilon: 2.0 * c,
        q: 4.0 * mass * alpha - 2.0 * a * (b - c),
        lambda: -jv - 1.0 + s,
        beta: jv + s,
    };
    Ok(HeunSetup {
        channel,
        j2: j.twice(),
        energy,
        exponents: SubstitutionExponents { a, b, c },
        params,
    })
}

/// Oscillator parameter set at energy `E` (requires `E ≤ K/2`).
pub fn heun_params_oscillator(
    energy: f64,
    k_osc: f64,
    mass: f64,
    j: HalfInt,
    channel: Channel,
    branch: BranchOverride,
) -> Result<HeunSetup> {
    let jv = heun_j(j, channel)?;
    let rad = mass * (k_osc - 2.0 * energy);
    if rad < 0.0 {
        return Err(Error::Domain(format!("radicand M(K − 2E) = {rad} is negative")));
    }
    let root = (1.0 + 4.0 * mass * k_osc).sqrt();
    let a = if branch.flip_a { 0.5 + 0.5 * root } else { 0.5 - 0.5 * root };
    let (b_bound, b_other) = if channel == Channel::HeunChannel1 {
        (1.0 + 0.5 * jv, 0.5 - 0.5 * jv)
    } else {
        (0.5 * jv, 0.5 * (1.0 - jv) + 0.5)
    };
    let b = if branch.flip_b { b_other } else { b_bound };
    let c = if branch.flip_c { -0.5 * jv } else { 0.5 + 0.5 * jv };
    let s = a + b + c;
    let w = rad.sqrt();
    let params = HeunParams {
        gamma: 2.0 * a,
        delta: 2.0 * b + 0.5,
        epsilon: 2.0 * c + 0.5,
        q: -2.0 * a * (b - c),
        lambda: s + w,
        beta: s - w,
    };
    Ok(HeunSetup {
        channel,
        j2: j.twice(),
        energy,
        exponents: SubstitutionExponents { a, b, c },
        params,
    })
}

/// Energy from the exponent condition, and the parameter set regenerated at
/// that energy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BetaSolution {
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: f64,
    pub energy: f64,
    pub setup: HeunSetup,
    /// `min(|β + n|, |λ + n|)` of the regenerated set. Which of the pair is
    /// `−n` depends on the sign of the square root (see `exponent_label`).
    pub condition_residual: f64,
    /// `"beta"` or `"lambda"`: the parameter that equals `−n`.
    pub exponent_label: String,
    /// Whether the bound-state exponent branch yields a decaying factor.
    pub decaying: bool,
}

fn finish(n: u32, big_n: f64, setup: HeunSetup, decaying: bool) -> BetaSolution {
    let nf = f64::from(n);
    let rb = (setup.params.beta + nf).abs();
    let rl = (setup.params.lambda + nf).abs();
    BetaSolution {
        n,
        big_n,
        energy: setup.energy,
        setup,
        condition_residual: rb.min(rl),
        exponent_label: if rb <= rl { "beta".into() } else { "lambda".into() },
        decaying,
    }
}

/// Solves `β = −n` for the Coulomb channels. The bound-state branch has `p ≥ 0`,
/// which requires `Mα ≥ N²`; otherwise the regenerated parameters do not
/// satisfy the condition and `condition_residual` shows it.
pub fn solve_beta_coulomb(alpha: f64, mass: f64, j: HalfInt, n: u32, channel: Channel) -> Result<BetaSolution> {
    heun_j(j, channel)?;
    let big_n = coulomb_channel_n(j, n, channel)?;
    let energy = lob_coulomb_energy(alpha, mass, big_n);
    let setup = heun_params_coulomb(energy, alpha, mass, j, channel, BranchOverride::BOUND_STATE)?;
    let decaying = mass * alpha > big_n * big_n;
    Ok(finish(n, big_n, setup, decaying))
}

/// Solves the `−n` condition for the oscillator channels,
/// `E = K/2 − (N − σ)²/(2M)` with `σ = sqrt(1 + 4MK)/2`. For `N ≥ σ` it is `β`
/// that equals `−n`, for `N < σ` it is `λ`; decay needs `N < σ`.
pub fn solve_beta_oscillator(k_osc: f64, mass: f64, j: HalfInt, n: u32, channel: Channel) -> Result<BetaSolution> {
    heun_j(j, channel)?;
    let big_n = oscillator_channel_n(j, n, channel)?;
    let energy = lob_oscillator_energy(k_osc, mass, big_n);
    let setup = heun_params_oscillator(energy, k_osc, mass, j, channel, BranchOverride::BOUND_STATE)?;
    let decaying = big_n < lob_oscillator_sigma(k_osc, mass);
    Ok(finish(n, big_n, setup, decaying))
}

/// Largest scaled ODE residual of the local Heun series at `points` evenly
/// spaced `z` in `[−radius, radius]`.
pub fn heun_residual_on_disc(params: &HeunParams, radius: f64, points: usize) -> Result<f64> {
    if !(radius > 0.0 && radius < 1.0) || points < 2 {
        return Err(Error::Domain(format!("disc radius {radius} / {points} points")));
    }
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let z = -radius + 2.0 * radius * i as f64 / (points - 1) as f64;
        let s = heun_local_full(params, z)?;
        worst = worst.max(params.ode_residual(z, &s));
    }
    Ok(worst)
}
