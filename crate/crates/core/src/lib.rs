//! Energy spectra of a nonrelativistic spin-1 particle in the field of a Dirac
//! monopole, in flat space and in Lobachevsky (hyperbolic) space, optionally
//! with an attractive Coulomb or an oscillator potential.
//!
//! Every closed-form spectrum is paired with an independent numerical route:
//! a finite-difference radial eigensolver with Sturm-sequence bisection, a
//! shooting integrator, and pointwise ODE residuals of the analytic
//! wavefunctions.
//!
//! Conventions: `ħ = c = 1` throughout; radial equations on Lobachevsky space
//! are written in units of the curvature radius. Half-integers (monopole
//! charge `k`, total angular momentum `j`) are stored as doubled integers.
//! The oscillator spring constant is called `K_osc` (`k_osc` in code) to keep
//! it apart from the monopole charge `k`.

pub mod angular;
pub mod error;
pub mod heunspec;
pub mod mixing;
pub mod oracle;
pub mod quantum;
pub mod radial;
pub mod specfun;
pub mod spectra;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
pub use quantum::{Channel, Geometry, HalfInt, MonopoleCharge, Potential, QuantumNumbers, Scenario};
pub use spectra::{Derivation, EnergyLevel};
