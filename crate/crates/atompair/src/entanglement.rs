//! Two-qubit entanglement measures: concurrence (spin-flip construction) and
//! negativity (partial transposition), plus closed-form fast paths for the
//! state families produced by the emission dynamics.
//!
//! Both measures are invariant under local unitaries, in particular under the
//! free phase rotation generated by the mean transition frequency; this is
//! what licenses the rotating-frame default ω₀ = 0 everywhere else.

use nalgebra::Matrix2;
use num_complex::Complex64;
use thiserror::Error;

use crate::hilbert::{basis_change, BasisTag, DensityMatrix};
use crate::linalg::{self, kron2, CMat4, ZERO_C};

#[derive(Debug, Error, PartialEq)]
pub enum EntanglementError {
    #[error("matrix is not positive semidefinite beyond slack: eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error("partial transpose needs a product-basis matrix (convert first), got {0}")]
    NotProductBasis(BasisTag),
    #[error("matrix is not Hermitian: defect {0:.3e}")]
    NotHermitian(f64),
    #[error("inputs violate the one-excitation pattern: {0}")]
    PatternViolation(String),
    #[error("invalid populations: {0}")]
    InvalidPopulations(String),
}

/// Spectrum values with magnitude below this are treated as exact zeros
/// before taking square roots (rank-deficient states are the rule here, and
/// √noise would otherwise contaminate the result at the 1e-8 level).
const SPECTRUM_CLAMP: f64 = 1e-12;
/// Eigenvalues below this are a genuine positivity violation, not noise.
const NEGATIVE_ERROR: f64 = -1e-8;

/// Both measures and both spectra for one state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasureResult {
    /// Wootters concurrence, in [0, 1].
    pub concurrence: f64,
    /// Negativity, −2Σ(negative PT eigenvalues), in [0, 1].
    pub negativity: f64,
    /// Eigenvalues of the partial transpose over atom 2, ascending; they sum
    /// to one (partial transposition preserves the trace).
    pub pt_spectrum: [f64; 4],
    /// Eigenvalues λᵢ of ρρ̃, sorted descending (the concurrence is
    /// max(0, √λ₁−√λ₂−√λ₃−√λ₄)).
    pub wootters_spectrum: [f64; 4],
}

fn sigma_y() -> Matrix2<Complex64> {
    Matrix2::new(
        ZERO_C,
        Complex64::new(0.0, -1.0),
        Complex64::new(0.0, 1.0),
        ZERO_C,
    )
}

fn wootters_spectrum_desc(rho_p: &CMat4) -> Result<[f64; 4], EntanglementError> {
    let (vals, vecs) = linalg::eigh(rho_p);
    if vals[0] < NEGATIVE_ERROR {
        return Err(EntanglementError::NotPositive(vals[0]));
    }
    let mut d = CMat4::zeros();
    for i in 0..4 {
        d[(i, i)] = Complex64::new(vals[i].max(0.0).sqrt(), 0.0);
    }
    let sqrt_rho = vecs * d * vecs.adjoint();
    let yy = kron2(&sigma_y(), &sigma_y());
    let rho_tilde = yy * rho_p.map(|z| z.conj()) * yy;
    // the eigenvalues of ρρ̃ equal those of the Hermitian √ρ·ρ̃·√ρ
    let m = sqrt_rho * rho_tilde * sqrt_rho;
    let m = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let (mut lams, _) = linalg::eigh(&m);
    for l in lams.iter_mut() {
        if *l < NEGATIVE_ERROR {
            return Err(EntanglementError::NotPositive(*l));
        }
        if *l < SPECTRUM_CLAMP {
            *l = 0.0;
        }
    }
    lams.reverse();
    Ok(lams)
}

/// Wootters concurrence of an arbitrary two-qubit density matrix.
///
/// Builds ρ̃ = (σ_y⊗σ_y)ρ*(σ_y⊗σ_y) in the product basis and evaluates
/// max(0, √λ₁−√λ₂−√λ₃−√λ₄) over the descending eigenvalues of ρρ̃
/// (computed through the equivalent Hermitian problem on √ρ·ρ̃·√ρ).
pub fn concurrence(rho: &DensityMatrix) -> Result<f64, EntanglementError> {
    let prod = basis_change(rho, BasisTag::Product);
    let lams = wootters_spectrum_desc(prod.matrix())?;
    let s: Vec<f64> = lams.iter().map(|l| l.sqrt()).collect();
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// Which atom's indices are transposed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    Atom1,
    Atom2,
}

/// Partial transpose of a product-basis density matrix. Involutive and
/// Hermiticity-preserving; for two qubits the negativity does not depend on
/// the subsystem choice (the two results are transposes of each other).
pub fn partial_transpose(
    rho: &DensityMatrix,
    subsystem: Subsystem,
) -> Result<CMat4, EntanglementError> {
    if rho.basis() != BasisTag::Product {
        return Err(EntanglementError::NotProductBasis(rho.basis()));
    }
    let m = rho.matrix();
    let mut out = CMat4::zeros();
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j1 in 0..2 {
                for j2 in 0..2 {
                    let (si, sj) = match subsystem {
                        // transpose the atom-2 indices within each block
                        Subsystem::Atom2 => (2 * i1 + j2, 2 * j1 + i2),
                        // swap the atom-1 block indices
                        Subsystem::Atom1 => (2 * j1 + i2, 2 * i1 + j2),
                    };
                    out[(2 * i1 + i2, 2 * j1 + j2)] = m[(si, sj)];
                }
            }
        }
    }
    Ok(out)
}

/// Negativity E = max(0, −2Σᵢ μᵢ) over the negative eigenvalues μᵢ of the
/// partial transpose (atom 2 by convention). Zero exactly on PPT states;
/// eigenvalues within the noise floor of zero do not contribute.
pub fn negativity(rho: &DensityMatrix) -> Result<f64, EntanglementError> {
    let prod = basis_change(rho, BasisTag::Product);
    let (rho_vals, _) = linalg::eigh(prod.matrix());
    if rho_vals[0] < NEGATIVE_ERROR {
        return Err(EntanglementError::NotPositive(rho_vals[0]));
    }
    let pt = partial_transpose(&prod, Subsystem::Atom2)?;
    let (vals, _) = linalg::eigh(&pt);
    let neg_sum: f64 = vals.iter().filter(|v| **v < -SPECTRUM_CLAMP).sum();
    Ok((-2.0 * neg_sum).clamp(0.0, 1.0))
}

/// Concurrence, negativity and both spectra in one pass.
pub fn measure(rho: &DensityMatrix) -> Result<MeasureResult, EntanglementError> {
    let prod = basis_change(rho, BasisTag::Product);
    let lams = wootters_spectrum_desc(prod.matrix())?;
    let s: Vec<f64> = lams.iter().map(|l| l.sqrt()).collect();
    let concurrence = (s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0);
    let pt = partial_transpose(&prod, Subsystem::Atom2)?;
    let (pt_spectrum, _) = linalg::eigh(&pt);
    let neg_sum: f64 = pt_spectrum.iter().filter(|v| **v < -SPECTRUM_CLAMP).sum();
    Ok(MeasureResult {
        concurrence,
        negativity: (-2.0 * neg_sum).clamp(0.0, 1.0),
        pt_spectrum,
        wootters_spectrum: lams,
    })
}

/// Partial-transpose spectrum of a one-excitation state, from the closed
/// forms. `eigenvalues` holds (μ₁, μ₂, μ₊, μ₋):
///
///   μ₁ = ½(ρ_ss+ρ_aa) − Re ρ_as,  μ₂ = ½(ρ_ss+ρ_aa) + Re ρ_as,
///   μ± = ½[ρ_gg ± √(ρ_gg² + (ρ_ss−ρ_aa)² + 4(Im ρ_as)²)].
///
/// μ₁, μ₂ and μ₊ are non-negative for every valid state; the state is
/// entangled exactly when μ₋ < 0, i.e. when (ρ_ss−ρ_aa)² − (ρ_as−ρ_sa)² > 0
/// (the coherence difference ρ_as−ρ_sa is purely imaginary, so its square
/// only ever helps).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneExcitedPtSpectrum {
    pub eigenvalues: [f64; 4],
    pub entangled: bool,
}

pub fn pt_spectrum_one_excited(
    rho_ss: f64,
    rho_aa: f64,
    rho_as: Complex64,
    rho_gg: f64,
) -> Result<OneExcitedPtSpectrum, EntanglementError> {
    let bad = |msg: String| Err(EntanglementError::PatternViolation(msg));
    for (name, v) in [("rho_ss", rho_ss), ("rho_aa", rho_aa), ("rho_gg", rho_gg)] {
        if !v.is_finite() || v < -1e-12 {
            return bad(format!("{name} = {v} is negative or not finite"));
        }
    }
    let trace = rho_ss + rho_aa + rho_gg;
    if (trace - 1.0).abs() > 1e-8 {
        return bad(format!("populations sum to {trace}, expected 1"));
    }
    if rho_as.norm_sqr() > rho_ss * rho_aa * (1.0 + 1e-8) + 1e-12 {
        return bad(format!(
            "|rho_as|² = {} exceeds rho_ss·rho_aa = {}",
            rho_as.norm_sqr(),
            rho_ss * rho_aa
        ));
    }

    let mean = 0.5 * (rho_ss + rho_aa);
    let mu1 = mean - rho_as.re;
    let mu2 = mean + rho_as.re;
    let diff = rho_ss - rho_aa;
    let disc = (rho_gg * rho_gg + diff * diff + 4.0 * rho_as.im * rho_as.im).sqrt();
    let mu_plus = 0.5 * (rho_gg + disc);
    let mu_minus = 0.5 * (rho_gg - disc);
    Ok(OneExcitedPtSpectrum {
        eigenvalues: [mu1, mu2, mu_plus, mu_minus],
        entangled: mu_minus < 0.0,
    })
}

/// Entanglement verdict for a diagonal collective state
/// diag(ρ_ee, ρ_ss, ρ_aa, ρ_gg): entangled iff
/// |ρ_ss − ρ_aa| > 2√(ρ_ee·ρ_gg); `margin` is the signed difference.
/// With ρ_ee = 0 the margin equals the concurrence whenever it is positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagonalCriterion {
    pub entangled: bool,
    pub margin: f64,
}

pub fn diagonal_criterion(populations: [f64; 4]) -> Result<DiagonalCriterion, EntanglementError> {
    let [ee, ss, aa, gg] = populations;
    for (name, v) in [
        ("rho_ee", ee),
        ("rho_ss", ss),
        ("rho_aa", aa),
        ("rho_gg", gg),
    ] {
        if !v.is_finite() || v < -1e-12 {
            return Err(EntanglementError::InvalidPopulations(format!(
                "{name} = {v} is negative or not finite"
            )));
        }
    }
    let trace: f64 = populations.iter().sum();
    if (trace - 1.0).abs() > 1e-8 {
        return Err(EntanglementError::InvalidPopulations(format!(
            "populations sum to {trace}, expected 1"
        )));
    }
    let margin = (ss - aa).abs() - 2.0 * (ee.max(0.0) * gg.max(0.0)).sqrt();
    Ok(DiagonalCriterion {
        entangled: margin > 0.0,
        margin,
    })
}

/// Eigenvalues of a 4×4 Hermitian matrix, ascending, by the deterministic
/// cyclic Jacobi iteration in [`crate::linalg`]. Rejects inputs whose
/// Hermiticity defect exceeds 1e-10.
pub fn hermitian_eigenvalues(m: &CMat4) -> Result<[f64; 4], EntanglementError> {
    let defect = linalg::hermitian_defect(m);
    if defect > 1e-10 {
        return Err(EntanglementError::NotHermitian(defect));
    }
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    Ok(linalg::eigh(&sym).0)
}
