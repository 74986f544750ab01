//! Quantum-number bookkeeping: exact half-integers, the Dirac quantization of
//! the monopole charge, the admissible values of `j`, and the coupling
//! coefficients `a, b, c, d` that enter the angular recurrences and the
//! radial mixing matrix.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub const fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub const fn from_int(n: i32) -> Self {
        HalfInt(2 * n)
    }

    pub const fn twice(self) -> i32 {
        self.0
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    pub const fn abs(self) -> Self {
        HalfInt(self.0.abs())
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Same integer/half-odd class as `other`.
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.0 - other.0) % 2 == 0
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `3`, `-3/2`, `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::NotHalfInteger(s.to_string());
        if let Some((num, den)) = t.split_once('/') {
            let num: i32 = num.trim().parse().map_err(|_| bad())?;
            match den.trim() {
                "1" => Ok(HalfInt(2 * num)),
                "2" => Ok(HalfInt(num)),
                _ => Err(bad()),
            }
        } else if let Ok(n) = t.parse::<i32>() {
            Ok(HalfInt(2 * n))
        } else {
            let x: f64 = t.parse().map_err(|_| bad())?;
            let twice = 2.0 * x;
            if (twice - twice.round()).abs() > 1e-9 || twice.abs() > f64::from(i32::MAX) {
                return Err(bad());
            }
            Ok(HalfInt(twice.round() as i32))
        }
    }
}

impl From<HalfInt> for String {
    fn from(h: HalfInt) -> String {
        h.to_string()
    }
}

impl TryFrom<String> for HalfInt {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Monopole charge `k = eg/ħc`. Any half-integer satisfies the Dirac rule;
/// `k = 0` is the explicit no-monopole limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MonopoleCharge(pub HalfInt);

impl MonopoleCharge {
    pub const NONE: MonopoleCharge = MonopoleCharge(HalfInt::ZERO);

    pub fn new(k: HalfInt) -> Self {
        MonopoleCharge(k)
    }

    pub fn from_f64(k: f64) -> Result<Self> {
        Ok(MonopoleCharge(k.to_string().parse()?))
    }

    pub fn half_int(self) -> HalfInt {
        self.0
    }

    pub fn value(self) -> f64 {
        self.0.value()
    }

    pub fn is_monopole(self) -> bool {
        self.0 != HalfInt::ZERO
    }
}

impl fmt::Display for MonopoleCharge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub k: MonopoleCharge,
    pub j: HalfInt,
    pub n: u32,
}

impl QuantumNumbers {
    pub fn new(k: MonopoleCharge, j: HalfInt, n: u32) -> Result<Self> {
        check_admissible(k, j)?;
        Ok(QuantumNumbers { k, j, n })
    }

    pub fn class(&self) -> ChannelClass {
        classify(self.k, self.j)
    }
}

/// Lowest admissible `j` for charge `k`.
pub fn j_min(k: MonopoleCharge) -> HalfInt {
    let ak = k.0.abs();
    match ak.twice() {
        0 | 1 => ak,
        _ => ak - HalfInt::from_int(1),
    }
}

pub fn check_admissible(k: MonopoleCharge, j: HalfInt) -> Result<()> {
    let err = |reason: &str| Error::InadmissibleJ {
        j: j.to_string(),
        k: k.to_string(),
        reason: reason.to_string(),
    };
    if j.twice() < 0 {
        return Err(err("j must be non-negative"));
    }
    if !j.same_parity(k.0) {
        return Err(err("j and k must both be integers or both half-odd"));
    }
    if j < j_min(k) {
        return Err(err("below the lowest value allowed by the Pauli criterium"));
    }
    Ok(())
}

/// All admissible `j` from the lowest allowed value up to `j_max` inclusive.
pub fn allowed_j(k: MonopoleCharge, j_max: HalfInt) -> Vec<HalfInt> {
    let lo = j_min(k).twice();
    (lo..=j_max.twice())
        .step_by(2)
        .map(HalfInt::from_twice)
        .collect()
}

/// Which set of radial equations a `(j, k)` pair uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelClass {
    /// `j = |k| - 1`: a single radial equation, no mixing.
    MinimumJ,
    /// `j = |k|`: the mixing matrix has a decoupled zero row; handle with care.
    EdgeJ,
    /// `j > |k|`: the generic three-component system.
    Generic,
    /// `k = 0`: parity splits the system into 1 + 2 equations.
    NoMonopole,
}

pub fn classify(k: MonopoleCharge, j: HalfInt) -> ChannelClass {
    if !k.is_monopole() {
        return ChannelClass::NoMonopole;
    }
    let ak = k.0.abs();
    if ak.twice() >= 2 && j == ak - HalfInt::from_int(1) {
        ChannelClass::MinimumJ
    } else if j == ak {
        ChannelClass::EdgeJ
    } else {
        ChannelClass::Generic
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Couplings {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// `½·sqrt((j + σ)(j − σ + 1))` from doubled integers; zero when `|σ| > j`
/// (the corresponding Wigner function does not exist).
fn lowering(j2: i32, sigma2: i32) -> Result<f64> {
    if sigma2.abs() > j2 {
        return Ok(0.0);
    }
    let radicand = i64::from(j2 + sigma2) * i64::from(j2 - sigma2 + 2);
    if radicand < 0 {
        return Err(Error::Domain(format!(
            "negative radicand for j = {}/2, sigma = {}/2",
            j2, sigma2
        )));
    }
    Ok(0.25 * (radicand as f64).sqrt())
}

/// `½·sqrt((j − σ)(j + σ + 1))`, zero when `|σ| > j`.
fn raising(j2: i32, sigma2: i32) -> Result<f64> {
    lowering(j2, -sigma2)
}

/// Coefficients of the Wigner-function recurrences at `σ = k − 1, k, k + 1`.
///
/// `c` and `d` belong to `σ = k`; `a` lowers from `σ = k − 1` and `b` raises
/// from `σ = k + 1`. Coefficients attached to Wigner functions with `|σ| > j`
/// are zero.
pub fn couplings(j: HalfInt, k: MonopoleCharge) -> Result<Couplings> {
    check_admissible(k, j)?;
    if j < k.0.abs() {
        return Err(Error::Domain(format!(
            "couplings need j >= |k| (got j = {j}, k = {k}); the minimum-j channel has none"
        )));
    }
    let (j2, k2) = (j.twice(), k.0.twice());
    Ok(Couplings {
        a: lowering(j2, k2 - 2)?,
        b: raising(j2, k2 + 2)?,
        c: lowering(j2, k2)?,
        d: raising(j2, k2)?,
    })
}

/// `c² + d² = (j(j+1) − k²)/2`, evaluated exactly from doubled integers.
pub fn c2_plus_d2(j: HalfInt, k: MonopoleCharge) -> f64 {
    let (j2, k2) = (i64::from(j.twice()), i64::from(k.0.twice()));
    // (j2(j2+2) - k2²)/8
    ((j2 * (j2 + 2) - k2 * k2) as f64) / 8.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Geometry {
    Flat,
    /// Curvature radius `R`; radial equations are solved in units of `R`.
    Lobachevsky { radius: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Potential {
    None,
    /// Attractive Coulomb potential `-α/r` (flat) or `-α·coth r` (Lobachevsky).
    Coulomb { alpha: f64 },
    /// Oscillator `K_osc r²/2` (flat) or `K_osc tanh² r / 2` (Lobachevsky).
    Oscillator { k_osc: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub geometry: Geometry,
    pub potential: Potential,
    pub charge: MonopoleCharge,
    pub mass: f64,
}

impl Scenario {
    pub fn new(geometry: Geometry, potential: Potential, charge: MonopoleCharge, mass: f64) -> Result<Self> {
        let s = Scenario {
            geometry,
            potential,
            charge,
            mass,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::Domain(format!("mass must be positive, got {}", self.mass)));
        }
        if let Geometry::Lobachevsky { radius } = self.geometry {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(Error::Domain(format!("curvature radius must be positive, got {radius}")));
            }
        }
        match self.potential {
            Potential::Coulomb { alpha } if !(alpha > 0.0 && alpha.is_finite()) => {
                Err(Error::Domain(format!("Coulomb coupling must be positive, got {alpha}")))
            }
            Potential::Oscillator { k_osc } if !(k_osc > 0.0 && k_osc.is_finite()) => {
                Err(Error::Domain(format!("oscillator constant must be positive, got {k_osc}")))
            }
            _ => Ok(()),
        }
    }

    /// Short stable tag, e.g. `flat-coulomb` or `lobachevsky-oscillator`.
    pub fn tag(&self) -> String {
        let g = match self.geometry {
            Geometry::Flat => "flat",
            Geometry::Lobachevsky { .. } => "lobachevsky",
        };
        let p = match self.potential {
            Potential::None => "free",
            Potential::Coulomb { .. } => "coulomb",
            Potential::Oscillator { .. } => "oscillator",
        };
        format!("{g}-{p}")
    }
}

/// Radial channel label of an energy level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Channel {
    MinJ,
    /// Eigenvalue `A_i` of the mixing matrix, `i ∈ {1, 2, 3}` in ascending order.
    BranchA(u8),
    /// No-monopole parity `(-1)^{j+1}`: a single hypergeometric equation.
    ParityOdd,
    /// No-monopole parity `(-1)^j`, free particle: the two decoupled equations.
    ParityEven(u8),
    /// No-monopole parity `(-1)^j` with a Coulomb or oscillator field, first equation.
    HeunChannel1,
    /// Second equation of the same pair.
    HeunChannel2,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::MinJ => write!(f, "min-j"),
            Channel::BranchA(i) => write!(f, "branch-a{i}"),
            Channel::ParityOdd => write!(f, "parity-odd"),
            Channel::ParityEven(i) => write!(f, "parity-even-{i}"),
            Channel::HeunChannel1 => write!(f, "heun-1"),
            Channel::HeunChannel2 => write!(f, "heun-2"),
        }
    }
}

impl FromStr for Channel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let c = match s.trim() {
            "min-j" => Channel::MinJ,
            "branch-a1" => Channel::BranchA(1),
            "branch-a2" => Channel::BranchA(2),
            "branch-a3" => Channel::BranchA(3),
            "parity-odd" => Channel::ParityOdd,
            "parity-even-1" => Channel::ParityEven(1),
            "parity-even-2" => Channel::ParityEven(2),
            "heun-1" => Channel::HeunChannel1,
            "heun-2" => Channel::HeunChannel2,
            other => return Err(Error::Unsupported(format!("unknown channel '{other}'"))),
        };
        Ok(c)
    }
}

impl From<Channel> for String {
    fn from(c: Channel) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Channel {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(s: &str) -> HalfInt {
        s.parse().unwrap()
    }

    fn k(s: &str) -> MonopoleCharge {
        MonopoleCharge(h(s))
    }

    #[test]
    fn half_int_parsing() {
        assert_eq!(h("1/2").twice(), 1);
        assert_eq!(h("-3/2").twice(), -3);
        assert_eq!(h("2").twice(), 4);
        assert_eq!(h("2.5").twice(), 5);
        assert!("1/3".parse::<HalfInt>().is_err());
        assert!("0.3".parse::<HalfInt>().is_err());
        assert_eq!(h("-3/2").to_string(), "-3/2");
        assert_eq!(h("4/2").to_string(), "2");
    }

    #[test]
    fn allowed_j_examples() {
        assert_eq!(allowed_j(k("1/2"), h("5/2")), vec![h("1/2"), h("3/2"), h("5/2")]);
        assert_eq!(allowed_j(k("1"), h("2")), vec![h("0"), h("1"), h("2")]);
        assert_eq!(allowed_j(k("0"), h("2")), vec![h("0"), h("1"), h("2")]);
        assert_eq!(allowed_j(k("-3/2"), h("5/2")), vec![h("1/2"), h("3/2"), h("5/2")]);
    }

    #[test]
    fn admissibility_errors() {
        assert!(check_admissible(k("1"), h("1/2")).is_err());
        assert!(check_admissible(k("2"), h("0")).is_err());
        assert!(check_admissible(k("1/2"), h("-1/2")).is_err());
        assert!(QuantumNumbers::new(k("1"), h("0"), 0).is_ok());
    }

    #[test]
    fn couplings_examples() {
        let c = couplings(h("2"), k("1")).unwrap();
        assert!((c.c - 6f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((c.d - 1.0).abs() < 1e-15);

        for kk in ["1", "3/2", "2", "5"] {
            let c = couplings(h(kk), k(kk)).unwrap();
            assert_eq!(c.d, 0.0);
            assert_eq!(c.b, 0.0);
        }

        let c = couplings(h("1"), k("0")).unwrap();
        assert!((c.c - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((c.d - 2f64.sqrt() / 2.0).abs() < 1e-15);
        // ν = c√2 = 1 for j = 1
        assert!((c.c * 2f64.sqrt() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn couplings_reject_minimum_j() {
        assert!(couplings(h("0"), k("1")).is_err());
        assert!(couplings(h("1/2"), k("1")).is_err());
    }

    #[test]
    fn classifier() {
        assert_eq!(classify(k("1"), h("0")), ChannelClass::MinimumJ);
        assert_eq!(classify(k("1"), h("1")), ChannelClass::EdgeJ);
        assert_eq!(classify(k("1/2"), h("1/2")), ChannelClass::EdgeJ);
        assert_eq!(classify(k("-2"), h("3")), ChannelClass::Generic);
        assert_eq!(classify(k("0"), h("0")), ChannelClass::NoMonopole);
    }

    #[test]
    fn channel_round_trip() {
        for c in [
            Channel::MinJ,
            Channel::BranchA(2),
            Channel::ParityOdd,
            Channel::ParityEven(1),
            Channel::HeunChannel1,
            Channel::HeunChannel2,
        ] {
            assert_eq!(c.to_string().parse::<Channel>().unwrap(), c);
        }
    }

    #[test]
    fn scenario_validation() {
        let bad = Scenario::new(Geometry::Lobachevsky { radius: 0.0 }, Potential::None, MonopoleCharge::NONE, 1.0);
        assert!(bad.is_err());
        let bad = Scenario::new(Geometry::Flat, Potential::Coulomb { alpha: -1.0 }, MonopoleCharge::NONE, 1.0);
        assert!(bad.is_err());
        let ok = Scenario::new(Geometry::Flat, Potential::Oscillator { k_osc: 2.0 }, k("1"), 1.0).unwrap();
        assert_eq!(ok.tag(), "flat-oscillator");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn admissible_pair() -> impl Strategy<Value = (HalfInt, MonopoleCharge)> {
            (-12i32..=12, 0i32..=16).prop_map(|(k2, extra)| {
                let k = MonopoleCharge(HalfInt::from_twice(k2));
                let j = HalfInt::from_twice(k2.abs() + 2 * extra);
                (j, k)
            })
        }

        proptest! {
            #[test]
            fn sum_of_squares_identity((j, k) in admissible_pair()) {
                let c = couplings(j, k).unwrap();
                let jv = j.value();
                let kv = k.value();
                let lhs = c.c * c.c + c.d * c.d;
                prop_assert!((lhs - (jv * (jv + 1.0) - kv * kv) / 2.0).abs() < 1e-12 * (1.0 + lhs));
                prop_assert!((lhs - c2_plus_d2(j, k)).abs() < 1e-12 * (1.0 + lhs));
                prop_assert!(c.a >= 0.0 && c.b >= 0.0 && c.c >= 0.0 && c.d >= 0.0);
            }

            #[test]
            fn charge_reflection_swaps_c_and_d((j, k) in admissible_pair()) {
                let p = couplings(j, k).unwrap();
                let m = couplings(j, MonopoleCharge(-k.0)).unwrap();
                prop_assert_eq!(p.c, m.d);
                prop_assert_eq!(p.d, m.c);
            }

            #[test]
            fn allowed_j_is_increasing_with_parity(k2 in -12i32..=12, extra in 0i32..20) {
                let k = MonopoleCharge(HalfInt::from_twice(k2));
                let js = allowed_j(k, HalfInt::from_twice(k2.abs() + extra));
                prop_assert!(js.windows(2).all(|w| w[0] < w[1]));
                prop_assert!(js.iter().all(|j| j.same_parity(k.0) && check_admissible(k, *j).is_ok()));
            }
        }
    }
}
