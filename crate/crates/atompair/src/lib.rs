//! Simulator and analysis library for the spontaneous-emission dynamics of
//! two spatially separated two-level atoms coupled through the vacuum field.
//!
//! The pair is a four-level system whose one-excitation sector splits into a
//! superradiant symmetric channel (rate Γ+Γ₁₂) and a subradiant antisymmetric
//! channel (rate Γ−Γ₁₂). Spontaneous emission alone can push an initially
//! uncorrelated pair through transiently entangled states; this crate
//! computes those trajectories with two cross-validated engines and scores
//! them with the standard two-qubit entanglement measures.
//!
//! Modules:
//! - [`couplings`]: Γ₁₂ and Ω₁₂ from the interatomic geometry
//! - [`hilbert`]: states, bases, density matrices, serialization
//! - [`dynamics`]: product-basis and collective-basis engines, RK4 integration
//! - [`analytic`]: closed-form solutions for identical atoms (the oracle)
//! - [`entanglement`]: concurrence, negativity, closed-form fast paths
//! - [`scenario`]: presets, observable extraction, CSV output
//! - [`cli`]: the `atompair` command-line tool
//!
//! All rates and times are in units of Γ (and 1/Γ); the mean transition
//! frequency defaults to zero, i.e. the rotating frame, which entanglement
//! measures cannot see.
//!
//! ```
//! use atompair::{integrate, pure_state_density, BasisTag, Engine, SystemParams};
//! use atompair::entanglement::measure;
//! use num_complex::Complex64;
//!
//! // one atom excited, couplings pinned to the reference values
//! let one = Complex64::new(1.0, 0.0);
//! let zero = Complex64::new(0.0, 0.0);
//! let rho0 = pure_state_density([zero, one, zero, zero], BasisTag::Product)?;
//! let params = SystemParams::new(1.0, 0.79, 1.12, 0.0, 0.0)?;
//!
//! let traj = integrate(&rho0, &params, 2.0, 1e-3, Engine::Collective, BasisTag::Collective)?;
//! let c_mid = measure(&traj.states[traj.index_at(1.0)])?.concurrence;
//! assert!(c_mid > 0.3, "spontaneous emission entangled the pair: C = {c_mid}");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod analytic;
pub mod cli;
pub mod couplings;
pub mod dynamics;
pub mod entanglement;
pub mod hilbert;
pub mod linalg;
pub mod scenario;

pub use couplings::{collective_damping, dipole_dipole_shift, AtomPairConfig, CouplingParams};
pub use dynamics::{integrate, Engine, SystemParams, Trajectory};
pub use entanglement::{concurrence, measure, negativity, MeasureResult};
pub use hilbert::{basis_change, pure_state_density, total_spin_squared, BasisTag, DensityMatrix};
pub use linalg::{CMat4, CVec4};
pub use scenario::{run_scenario, write_csv, ScenarioSpec};
