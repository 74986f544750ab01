//! Conversion between the internal natural units (`ħ = c = 1`, lengths in a
//! reference length `ℓ`) and physical units.
//!
//! With reference length `ℓ` (the curvature radius `R` in hyperbolic space):
//! energies scale by `ħc/ℓ`, the dimensionless mass is `M = mcℓ/ħ`, and the
//! oscillator constant is `K_osc = kℓ³/(ħc)`. The Coulomb coupling is already
//! dimensionless.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub c: f64,
    /// Physical particle mass `m`.
    pub mass: f64,
    /// Reference length; required (as `R`) for hyperbolic space. In flat space
    /// it defaults to the Compton length `ħ/(mc)`.
    pub length: Option<f64>,
}

impl UnitSystem {
    pub const IDENTITY: UnitSystem = UnitSystem {
        hbar: 1.0,
        c: 1.0,
        mass: 1.0,
        length: Some(1.0),
    };

    pub fn validate(&self) -> Result<()> {
        let ok = |x: f64| x > 0.0 && x.is_finite();
        if !(ok(self.hbar) && ok(self.c) && ok(self.mass)) {
            return Err(Error::Units(format!("ħ, c and m must be positive: {self:?}")));
        }
        if let Some(l) = self.length {
            if !ok(l) {
                return Err(Error::Units(format!("reference length must be positive, got {l}")));
            }
        }
        Ok(())
    }

    pub fn reference_length(&self) -> f64 {
        self.length.unwrap_or(self.hbar / (self.mass * self.c))
    }

    /// `ħc/ℓ`.
    pub fn energy_scale(&self) -> f64 {
        self.hbar * self.c / self.reference_length()
    }

    /// Dimensionless mass `mcℓ/ħ`.
    pub fn natural_mass(&self) -> f64 {
        self.mass * self.c * self.reference_length() / self.hbar
    }

    /// Dimensionless oscillator constant `kℓ³/(ħc)` for a physical spring constant `k`.
    pub fn natural_k_osc(&self, k_phys: f64) -> f64 {
        k_phys * self.reference_length().powi(3) / (self.hbar * self.c)
    }

    pub fn physical_k_osc(&self, k_nat: f64) -> f64 {
        k_nat * self.hbar * self.c / self.reference_length().powi(3)
    }

    pub fn energy_to_physical(&self, e_nat: f64) -> f64 {
        e_nat * self.energy_scale()
    }

    pub fn energy_to_natural(&self, e_phys: f64) -> f64 {
        e_phys / self.energy_scale()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_noop() {
        let u = UnitSystem::IDENTITY;
        assert_eq!(u.energy_scale(), 1.0);
        assert_eq!(u.natural_mass(), 1.0);
        assert_eq!(u.natural_k_osc(3.5), 3.5);
        assert_eq!(u.energy_to_physical(-0.25), -0.25);
    }

    #[test]
    fn compton_default_gives_unit_mass() {
        let u = UnitSystem {
            hbar: 1.054_571_817e-34,
            c: 2.997_924_58e8,
            mass: 9.109_383_7e-31,
            length: None,
        };
        assert!((u.natural_mass() - 1.0).abs() < 1e-14);
        // energy scale is the rest energy
        let mc2 = u.mass * u.c * u.c;
        assert!((u.energy_scale() - mc2).abs() < 1e-14 * mc2);
    }

    #[test]
    fn round_trips() {
        let u = UnitSystem {
            hbar: 0.7,
            c: 3.1,
            mass: 2.3,
            length: Some(17.0),
        };
        for e in [-3.2, 0.0, 1e-6, 42.0] {
            let back = u.energy_to_natural(u.energy_to_physical(e));
            assert!((back - e).abs() <= 1e-12 * e.abs().max(1e-300));
        }
        let k = 0.37;
        assert!((u.natural_k_osc(u.physical_k_osc(k)) - k).abs() < 1e-12 * k);
    }

    #[test]
    fn rejects_bad_values() {
        let mut u = UnitSystem::IDENTITY;
        u.length = Some(0.0);
        assert!(u.validate().is_err());
        u.length = None;
        u.hbar = -1.0;
        assert!(u.validate().is_err());
    }
}
