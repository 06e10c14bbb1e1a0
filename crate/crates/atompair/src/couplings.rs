//! Vacuum-mediated couplings of two atoms: the collective damping Γ₁₂ and the
//! dipole-dipole interaction potential Ω₁₂ as functions of the interatomic
//! geometry.
//!
//! Everything is expressed in units of the single-atom decay rate Γ. The
//! retarded-field kernels depend on x = k₀r₁₂ = 2π·(r₁₂/λ) and on the angle
//! between the (common) dipole direction and the interatomic axis.

use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CouplingsError {
    #[error("separation_over_lambda must be positive and finite, got {0}")]
    InvalidSeparation(f64),
    #[error("gamma must be positive and finite, got {0}")]
    InvalidGamma(f64),
    #[error("dipole_angle must be finite, got {0}")]
    InvalidAngle(f64),
    #[error("override would violate |gamma12| <= gamma: gamma12 = {0} (units of gamma)")]
    UnphysicalOverride(f64),
}

/// Geometry and atomic parameters of the pair.
///
/// `gamma` sets the unit of rate (Γ = 1 by default); `delta` is half the
/// transition-frequency difference (ω₂−ω₁)/2 and `omega0` the mean transition
/// frequency, both in units of Γ (`omega0 = 0` selects the rotating frame).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomPairConfig {
    pub gamma: f64,
    pub separation_over_lambda: f64,
    /// Angle between dipole direction and interatomic axis, radians,
    /// normalized into [0, π/2] (only cos² enters the coupling kernels).
    pub dipole_angle: f64,
    pub delta: f64,
    pub omega0: f64,
}

impl AtomPairConfig {
    pub fn new(
        gamma: f64,
        separation_over_lambda: f64,
        dipole_angle: f64,
        delta: f64,
        omega0: f64,
    ) -> Result<Self, CouplingsError> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(CouplingsError::InvalidGamma(gamma));
        }
        if !(separation_over_lambda > 0.0 && separation_over_lambda.is_finite()) {
            return Err(CouplingsError::InvalidSeparation(separation_over_lambda));
        }
        if !dipole_angle.is_finite() {
            return Err(CouplingsError::InvalidAngle(dipole_angle));
        }
        Ok(Self {
            gamma,
            separation_over_lambda,
            dipole_angle: normalize_angle(dipole_angle),
            delta,
            omega0,
        })
    }

    /// Perpendicular dipole orientation (μ̄ ⊥ r̄₁₂), identical atoms, rotating frame.
    pub fn perpendicular(separation_over_lambda: f64) -> Result<Self, CouplingsError> {
        Self::new(1.0, separation_over_lambda, PI / 2.0, 0.0, 0.0)
    }

    fn validate(&self) -> Result<(), CouplingsError> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(CouplingsError::InvalidGamma(self.gamma));
        }
        if !(self.separation_over_lambda > 0.0 && self.separation_over_lambda.is_finite()) {
            return Err(CouplingsError::InvalidSeparation(
                self.separation_over_lambda,
            ));
        }
        if !self.dipole_angle.is_finite() {
            return Err(CouplingsError::InvalidAngle(self.dipole_angle));
        }
        Ok(())
    }

    fn x(&self) -> f64 {
        2.0 * PI * self.separation_over_lambda
    }

    fn mu_dot_r_sq(&self) -> f64 {
        let c = normalize_angle(self.dipole_angle).cos();
        c * c
    }
}

/// Reduce an angle to [0, π/2]; cos²θ is invariant under θ → −θ and θ → π−θ.
fn normalize_angle(theta: f64) -> f64 {
    let t = theta.abs() % PI;
    if t > PI / 2.0 {
        PI - t
    } else {
        t
    }
}

/// Where the coupling params came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingSource {
    Computed,
    Override,
}

/// Collective damping Γ₁₂ and dipole-dipole shift Ω₁₂, in units of Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingParams {
    pub gamma12: f64,
    pub omega12: f64,
    pub source: CouplingSource,
}

impl CouplingParams {
    /// Evaluate both couplings from the geometry.
    pub fn computed(cfg: &AtomPairConfig) -> Result<Self, CouplingsError> {
        Ok(Self {
            gamma12: collective_damping(cfg)?,
            omega12: dipole_dipole_shift(cfg)?,
            source: CouplingSource::Computed,
        })
    }

    /// Pin both couplings by hand (units of Γ). Rejects |γ₁₂| > Γ; the
    /// small-sample limit γ₁₂ = Γ is reachable only through this path.
    pub fn manual(gamma12: f64, omega12: f64) -> Result<Self, CouplingsError> {
        if gamma12.is_nan() || gamma12.abs() > 1.0 || !omega12.is_finite() {
            return Err(CouplingsError::UnphysicalOverride(gamma12));
        }
        Ok(Self {
            gamma12,
            omega12,
            source: CouplingSource::Override,
        })
    }

    /// The rounded reference values quoted with the bundled figure presets:
    /// Γ₁₂ = 0.79 Γ, Ω₁₂ = 1.12 Γ (twice the value of [`dipole_dipole_shift`]
    /// at r₁₂ = λ/6, perpendicular; see the doubled-convention note there).
    pub fn caption_override() -> Self {
        Self {
            gamma12: 0.79,
            omega12: 1.12,
            source: CouplingSource::Override,
        }
    }
}

/// Switch point below which `cos x/x² − sin x/x³` is evaluated by its Taylor
/// expansion. Below x ≈ 0.1 the two terms cancel catastrophically (each grows
/// like 1/x³ while the combination stays near −1/3); the four-term expansion
/// keeps better than 14 significant digits there, and direct evaluation keeps
/// better than 12 above.
const SMALL_X_THRESHOLD: f64 = 0.1;

/// cos x/x² − sin x/x³, stable for all x > 0.
fn radial_kernel_cc(x: f64) -> f64 {
    if x < SMALL_X_THRESHOLD {
        let x2 = x * x;
        -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0 + x2 * x2 * x2 / 45360.0
    } else {
        x.cos() / (x * x) - x.sin() / (x * x * x)
    }
}

/// sin x/x² + cos x/x³ (no cancellation; diverges like 1/x³ as x → 0).
fn radial_kernel_ss(x: f64) -> f64 {
    x.sin() / (x * x) + x.cos() / (x * x * x)
}

/// Collective damping Γ₁₂ in units of Γ:
///
/// Γ₁₂ = (3/2)·{ [1−(μ̄·r̄)²] sin x/x + [1−3(μ̄·r̄)²] (cos x/x² − sin x/x³) },
/// x = 2π·(r₁₂/λ).
///
/// Tends to Γ for r₁₂ → 0 (small-sample limit) and falls off like 1/x in the
/// far zone. Pure function of the config.
pub fn collective_damping(cfg: &AtomPairConfig) -> Result<f64, CouplingsError> {
    cfg.validate()?;
    let x = cfg.x();
    let c2 = cfg.mu_dot_r_sq();
    Ok(1.5 * ((1.0 - c2) * x.sin() / x + (1.0 - 3.0 * c2) * radial_kernel_cc(x)))
}

/// Dipole-dipole interaction potential Ω₁₂ in units of Γ:
///
/// Ω₁₂ = (3/4)·{ −[1−(μ̄·r̄)²] cos x/x + [1−3(μ̄·r̄)²] (sin x/x² + cos x/x³) }.
///
/// Note on conventions: at r₁₂ = λ/6 perpendicular this evaluates to
/// 0.5607 Γ, while the reference figure parameters quote 1.12 Γ — exactly a
/// factor of two, consistent with a 3/2 vs 3/4 prefactor convention. This
/// function implements the 3/4 form; [`CouplingParams::caption_override`]
/// carries the doubled value for figure reproduction.
pub fn dipole_dipole_shift(cfg: &AtomPairConfig) -> Result<f64, CouplingsError> {
    cfg.validate()?;
    let x = cfg.x();
    let c2 = cfg.mu_dot_r_sq();
    Ok(0.75 * (-(1.0 - c2) * x.cos() / x + (1.0 - 3.0 * c2) * radial_kernel_ss(x)))
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen full-precision reference values
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn perp(sep: f64) -> AtomPairConfig {
        AtomPairConfig::perpendicular(sep).unwrap()
    }

    // Reference values below were computed with 30-digit arithmetic in a
    // throwaway script, directly from the two kernel formulas.

    #[test]
    fn damping_at_sixth_wavelength_perpendicular() {
        let g12 = collective_damping(&perp(1.0 / 6.0)).unwrap();
        assert_relative_eq!(g12, 0.79321675501254984, max_relative = 1e-12);
        assert!((g12 - 0.79).abs() < 0.005);
    }

    #[test]
    fn shift_at_sixth_wavelength_perpendicular() {
        let o12 = dipole_dipole_shift(&perp(1.0 / 6.0)).unwrap();
        assert_relative_eq!(o12, 0.56073851726584692, max_relative = 1e-12);
        assert!((o12 - 0.5608).abs() < 0.001);
        // doubled convention used by the figure presets
        assert!((2.0 * o12 - 1.12).abs() < 0.002);
    }

    #[test]
    fn parallel_orientation_values() {
        let cfg = AtomPairConfig::new(1.0, 1.0 / 6.0, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(
            dipole_dipole_shift(&cfg).unwrap(),
            -1.8376742784452228,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            collective_damping(&cfg).unwrap(),
            0.89454651937296454,
            max_relative = 1e-12
        );
    }

    #[test]
    fn far_zone_falloff() {
        let g12 = collective_damping(&perp(10.0)).unwrap();
        assert!(g12.abs() < 0.025, "got {g12}");
        assert_relative_eq!(g12, 0.00037995443865876664, max_relative = 1e-10);
    }

    #[test]
    fn small_sample_limit() {
        // x = 1e-3 means separation_over_lambda = 1e-3/(2π)
        let cfg = perp(1e-3 / (2.0 * PI));
        let g12 = collective_damping(&cfg).unwrap();
        assert!((g12 - 1.0).abs() < 1e-4, "got {g12}");
        assert_abs_diff_eq!(g12, 0.9999998000000107, epsilon = 1e-12);
    }

    #[test]
    fn infinite_separation_limit() {
        let o12 = dipole_dipole_shift(&perp(1e6)).unwrap();
        assert!(o12.abs() < 1e-6, "got {o12}");
    }

    #[test]
    fn ten_digit_agreement_with_reference() {
        // (x, Γ₁₂) for perpendicular orientation, 30-digit reference
        let table = [
            (0.01, 0.99998000010714259),
            (0.05, 0.99950006696015226),
            (0.1, 0.99800107116405874),
            (0.5, 0.95066552390440929),
            (1.0, 0.81045345880220958),
            (2.0, 0.35542473888426756),
            (5.0, -0.2591504599751903),
            (10.0, -0.093373207903218204),
            (25.0, -0.0055495124893846589),
            (50.0, -0.0072891174957781485),
        ];
        for &(x, want) in table.iter() {
            let cfg = perp(x / (2.0 * PI));
            let got = collective_damping(&cfg).unwrap();
            assert_relative_eq!(got, want, max_relative = 1e-10);
        }
        // one general-angle spot check (x = 1, angle = π/4)
        let cfg = AtomPairConfig::new(1.0, 1.0 / (2.0 * PI), PI / 4.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(
            collective_damping(&cfg).unwrap(),
            0.85697974781073997,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            dipole_dipole_shift(&cfg).unwrap(),
            -0.72077834870406598,
            max_relative = 1e-10
        );
    }

    #[test]
    fn damping_bounded_by_gamma_on_grid() {
        let angles = [0.0, PI / 8.0, PI / 4.0, 3.0 * PI / 8.0, PI / 2.0];
        let mut x = 0.01;
        while x <= 50.0 {
            for &a in angles.iter() {
                let cfg = AtomPairConfig::new(1.0, x / (2.0 * PI), a, 0.0, 0.0).unwrap();
                let g12 = collective_damping(&cfg).unwrap();
                assert!(g12.abs() <= 1.0 + 1e-12, "x={x} angle={a} g12={g12}");
            }
            x *= 1.05;
        }
    }

    #[test]
    fn rejects_bad_separation() {
        let mut cfg = perp(0.5);
        cfg.separation_over_lambda = 0.0;
        assert!(matches!(
            collective_damping(&cfg),
            Err(CouplingsError::InvalidSeparation(_))
        ));
        cfg.separation_over_lambda = -1.0;
        assert!(dipole_dipole_shift(&cfg).is_err());
        assert!(AtomPairConfig::perpendicular(-0.2).is_err());
    }

    #[test]
    fn angle_normalization() {
        for (raw, want) in [
            (0.3, 0.3),
            (-0.3, 0.3),
            (PI - 0.3, 0.3),
            (PI + 0.3, 0.3),
            (2.0 * PI + 0.3, 0.3),
        ] {
            let cfg = AtomPairConfig::new(1.0, 0.25, raw, 0.0, 0.0).unwrap();
            assert_abs_diff_eq!(cfg.dipole_angle, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn manual_override_bounds() {
        assert!(CouplingParams::manual(1.0, 0.0).is_ok());
        assert!(CouplingParams::manual(1.0001, 0.0).is_err());
        let cap = CouplingParams::caption_override();
        assert_eq!(cap.source, CouplingSource::Override);
        assert_eq!(cap.gamma12, 0.79);
        assert_eq!(cap.omega12, 1.12);
    }

    #[test]
    fn taylor_and_direct_kernel_agree_at_switch() {
        // both evaluation branches at the threshold itself
        for x in [0.08, SMALL_X_THRESHOLD, 0.12] {
            let taylor = {
                let x2 = x * x;
                -1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0 + x2 * x2 * x2 / 45360.0
            };
            let direct = x.cos() / (x * x) - x.sin() / (x * x * x);
            assert_abs_diff_eq!(taylor, direct, epsilon = 1e-12);
        }
    }
}
