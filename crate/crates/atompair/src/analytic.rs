//! Closed-form solutions for identical atoms (Δ = 0), used as independent
//! oracles for the numerical engines and to expose the structure behind the
//! transient entanglement.

use num_complex::Complex64;
use thiserror::Error;

use crate::dynamics::SystemParams;
use crate::hilbert::{basis_change, index, BasisTag, DensityMatrix};
use crate::linalg::{CMat4, CVec4, ONE_C, ZERO_C};

#[derive(Debug, Error, PartialEq)]
pub enum AnalyticError {
    #[error("closed form requires identical atoms (delta = 0), got delta = {0}")]
    NonZeroDetuning(f64),
    #[error(
        "prefactors diverge at gamma12 = gamma; use both_excited_populations_dicke \
         for the small-sample limit"
    )]
    DickeLimit,
    #[error("matrix does not have the one-excitation zero pattern: {0}")]
    PatternViolation(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

/// Near-degenerate switch: below this value of (Γ−Γ₁₂)/Γ the both-excited
/// populations are evaluated by their Γ₁₂ → Γ limit instead of the exact
/// prefactors.
pub const DICKE_SWITCH: f64 = 1e-6;

/// Tolerance on entries that must vanish in the one-excitation pattern.
const PATTERN_TOL: f64 = 1e-10;

/// Density matrix at time `t` (units of 1/Γ) for the initial state
/// |e₁g₂⟩ = (|s⟩+|a⟩)/√2 and identical atoms:
///
///   ρ_ss = ½e^{−(Γ+Γ₁₂)t},  ρ_aa = ½e^{−(Γ−Γ₁₂)t},
///   ρ_gg = 1 − e^{−Γt}cosh Γ₁₂t,  ρ_as = ½e^{−(Γ+2iΩ₁₂)t},
///
/// all other elements zero. Returned in the collective basis.
pub fn one_excited_solution(t: f64, params: &SystemParams) -> Result<DensityMatrix, AnalyticError> {
    params
        .validate()
        .map_err(|e| AnalyticError::InvalidParams(e.to_string()))?;
    if params.delta != 0.0 {
        return Err(AnalyticError::NonZeroDetuning(params.delta));
    }
    let g = params.gamma;
    let g12 = params.gamma12;
    let ss = 0.5 * (-(g + g12) * t).exp();
    let aa = 0.5 * (-(g - g12) * t).exp();
    let gg = 1.0 - (-g * t).exp() * (g12 * t).cosh();
    let as_ = Complex64::new(0.5 * (-g * t).exp(), 0.0)
        * Complex64::new(0.0, -2.0 * params.omega12 * t).exp();

    use index::{A, G, S};
    let mut m = CMat4::zeros();
    m[(S, S)] = Complex64::new(ss, 0.0);
    m[(A, A)] = Complex64::new(aa, 0.0);
    m[(G, G)] = Complex64::new(gg, 0.0);
    m[(A, S)] = as_;
    m[(S, A)] = as_.conj();
    Ok(DensityMatrix::new_unchecked(m, BasisTag::Collective))
}

/// Spectral decomposition of a one-excitation density matrix into four
/// orthonormal states with their populations.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalDecomposition {
    /// Ψ₁…Ψ₄ as collective-basis amplitude vectors; Ψ₁, Ψ₂ span the
    /// {|s⟩,|a⟩} block (Ψ₁ carries the larger population), Ψ₃ = |g⟩, Ψ₄ = |e⟩.
    pub states: [CVec4; 4],
    /// P₁…P₄, summing to one.
    pub populations: [f64; 4],
}

impl DiagonalDecomposition {
    /// Σ Pᵢ|Ψᵢ⟩⟨Ψᵢ| as a collective-basis matrix.
    pub fn reconstruct(&self) -> CMat4 {
        let mut m = CMat4::zeros();
        for (p, v) in self.populations.iter().zip(self.states.iter()) {
            m += v * v.adjoint() * Complex64::new(*p, 0.0);
        }
        m
    }
}

/// Rediagonalize a density matrix supported on the {|s⟩,|a⟩,|g⟩} block with
/// the one-excitation zero pattern (no |e⟩ population, no coherences to |e⟩
/// or |g⟩).
///
/// When |ρ_as|² = ρ_aa·ρ_ss (the factorized family) this yields P₂ = 0 and
/// Ψ₁ ∝ e^{iφ}√ρ_ss|s⟩ + √ρ_aa|a⟩, where φ is the phase of ρ_sa; the
/// populations are independent of that phase. Ψ₁ interpolates between the
/// unentangled |e₁g₂⟩ (equal populations) and the maximally entangled |a⟩
/// (depopulated |s⟩).
pub fn diagonal_decomposition(rho: &DensityMatrix) -> Result<DiagonalDecomposition, AnalyticError> {
    let coll = basis_change(rho, BasisTag::Collective);
    let m = coll.matrix();
    use index::{A, E, G, S};
    for (i, j, label) in [
        (E, E, "rho_ee"),
        (E, S, "rho_es"),
        (E, A, "rho_ea"),
        (E, G, "rho_eg"),
        (G, S, "rho_gs"),
        (G, A, "rho_ga"),
    ] {
        if m[(i, j)].norm() > PATTERN_TOL {
            return Err(AnalyticError::PatternViolation(format!(
                "{label} = {} is non-zero",
                m[(i, j)]
            )));
        }
    }

    let ss = m[(S, S)].re;
    let aa = m[(A, A)].re;
    let gg = m[(G, G)].re;
    let sa = m[(S, A)];

    // eigendecomposition of the 2×2 {s,a} block
    let mean = 0.5 * (ss + aa);
    let disc = (0.25 * (ss - aa) * (ss - aa) + sa.norm_sqr()).sqrt();
    let p1 = mean + disc;
    let p2 = (mean - disc).max(0.0);

    let (psi1, psi2) = if disc < 1e-15 {
        // degenerate block: any orthonormal pair works; keep (|s⟩, |a⟩)
        (
            CVec4::new(ZERO_C, ONE_C, ZERO_C, ZERO_C),
            CVec4::new(ZERO_C, ZERO_C, ONE_C, ZERO_C),
        )
    } else {
        // eigenvector of [[ss, sa],[conj(sa), aa]] for eigenvalue p1
        let (cs, ca) = if sa.norm() > 1e-15 {
            (sa, Complex64::new(p1 - ss, 0.0))
        } else if ss >= aa {
            (ONE_C, ZERO_C)
        } else {
            (ZERO_C, ONE_C)
        };
        let norm = (cs.norm_sqr() + ca.norm_sqr()).sqrt();
        let cs = cs / norm;
        let ca = ca / norm;
        let v1 = CVec4::new(ZERO_C, cs, ca, ZERO_C);
        // orthogonal partner within the block
        let v2 = CVec4::new(ZERO_C, -ca.conj(), cs.conj(), ZERO_C);
        (v1, v2)
    };

    Ok(DiagonalDecomposition {
        states: [
            psi1,
            psi2,
            CVec4::new(ZERO_C, ZERO_C, ZERO_C, ONE_C),
            CVec4::new(ONE_C, ZERO_C, ZERO_C, ZERO_C),
        ],
        populations: [p1, p2, gg, m[(E, E)].re.max(0.0)],
    })
}

/// Populations (ρ_ee, ρ_ss, ρ_aa, ρ_gg) at time `t` for the initial state
/// |e₁e₂⟩ and identical atoms:
///
///   ρ_ee = e^{−2Γt},
///   ρ_ss = (Γ+Γ₁₂)/(Γ−Γ₁₂)·[e^{−(Γ+Γ₁₂)t} − e^{−2Γt}],
///   ρ_aa = (Γ−Γ₁₂)/(Γ+Γ₁₂)·[e^{−(Γ−Γ₁₂)t} − e^{−2Γt}],
///
/// with ρ_gg fixed by the unit trace. The prefactors diverge at Γ₁₂ = Γ
/// (rejected); within [`DICKE_SWITCH`] of that point the continuous limit is
/// used instead.
pub fn both_excited_populations(t: f64, params: &SystemParams) -> Result<[f64; 4], AnalyticError> {
    params
        .validate()
        .map_err(|e| AnalyticError::InvalidParams(e.to_string()))?;
    if params.delta != 0.0 {
        return Err(AnalyticError::NonZeroDetuning(params.delta));
    }
    let g = params.gamma;
    let g12 = params.gamma12;
    if g12 >= g {
        return Err(AnalyticError::DickeLimit);
    }
    if g - g12 < DICKE_SWITCH * g {
        return Ok(both_excited_populations_dicke(t, g));
    }
    let ee = (-2.0 * g * t).exp();
    // e^{−(Γ+Γ₁₂)t} − e^{−2Γt} = e^{−2Γt}·expm1((Γ−Γ₁₂)t): expm1 avoids the
    // cancellation that loses digits as Γ₁₂ → Γ
    let ss = (g + g12) / (g - g12) * (-2.0 * g * t).exp() * ((g - g12) * t).exp_m1();
    let aa = (g - g12) / (g + g12) * ((-(g - g12) * t).exp() - (-2.0 * g * t).exp());
    let gg = 1.0 - ee - ss - aa;
    Ok([ee, ss, aa, gg])
}

/// Γ₁₂ → Γ limit of [`both_excited_populations`]: ρ_ss = 2Γt·e^{−2Γt}, the
/// antisymmetric state stays empty, and the pair never entangles.
pub fn both_excited_populations_dicke(t: f64, gamma: f64) -> [f64; 4] {
    let ee = (-2.0 * gamma * t).exp();
    let ss = 2.0 * gamma * t * ee;
    let aa = 0.0;
    let gg = 1.0 - ee - ss;
    [ee, ss, aa, gg]
}
