//! Two-qubit states and density matrices in the product and collective bases.
//!
//! Basis orderings are part of the public contract and are used by every
//! serialized matrix:
//!   product:    |e₁e₂⟩, |e₁g₂⟩, |g₁e₂⟩, |g₁g₂⟩
//!   collective: |e⟩, |s⟩, |a⟩, |g⟩
//! with |s⟩ = (|e₁g₂⟩+|g₁e₂⟩)/√2 and |a⟩ = (|e₁g₂⟩−|g₁e₂⟩)/√2.

use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

use crate::linalg::{self, CMat4, CVec4, ONE_C, ZERO_C};

pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_SLACK: f64 = -1e-8;
/// Amplitude vectors with norm below this are rejected instead of being
/// renormalized; silently blowing them up would mask upstream bugs.
pub const NEAR_NULL_NORM: f64 = 1e-6;

#[derive(Debug, Error, PartialEq)]
pub enum HilbertError {
    #[error("matrix is not Hermitian: defect {0:.3e} exceeds {HERMITICITY_TOL:.0e}")]
    NotHermitian(f64),
    #[error("trace deviates from one by {0:.3e} (tolerance {TRACE_TOL:.0e})")]
    BadTrace(f64),
    #[error("matrix is not positive semidefinite: min eigenvalue {0:.3e}")]
    NotPositive(f64),
    #[error("amplitude vector norm {0:.3e} is below {NEAR_NULL_NORM:.0e}")]
    NearNullAmplitudes(f64),
    #[error("mixing coefficients are undefined for delta <= 0 with omega12 = 0")]
    DegenerateMixing,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Which basis a matrix or amplitude vector is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisTag {
    Product,
    Collective,
}

impl fmt::Display for BasisTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisTag::Product => write!(f, "product"),
            BasisTag::Collective => write!(f, "collective"),
        }
    }
}

/// Index of each named state within its basis ordering.
pub mod index {
    // product basis
    pub const E1E2: usize = 0;
    pub const E1G2: usize = 1;
    pub const G1E2: usize = 2;
    pub const G1G2: usize = 3;
    // collective basis
    pub const E: usize = 0;
    pub const S: usize = 1;
    pub const A: usize = 2;
    pub const G: usize = 3;
}

/// Conjugation by the basis map U with U = Uᵀ = U⁻¹ (entries 1 on the
/// corners, ±1/√2 on the inner block), so the same function converts in both
/// directions. Written out entry-wise so the inner-block coefficients are
/// exact halves — a matrix product would square 1/√2 and put 1-ulp noise on
/// every population.
pub(crate) fn conjugate_by_basis_unitary(m: &CMat4) -> CMat4 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let half = Complex64::new(0.5, 0.0);
    let mut out = CMat4::zeros();
    // corner entries pass through
    for &i in &[0usize, 3] {
        for &j in &[0usize, 3] {
            out[(i, j)] = m[(i, j)];
        }
    }
    // edges pick up one factor of 1/√2
    for &i in &[0usize, 3] {
        out[(i, 1)] = (m[(i, 1)] + m[(i, 2)]) * h;
        out[(i, 2)] = (m[(i, 1)] - m[(i, 2)]) * h;
        out[(1, i)] = (m[(1, i)] + m[(2, i)]) * h;
        out[(2, i)] = (m[(1, i)] - m[(2, i)]) * h;
    }
    // the inner 2×2 block mixes with exact ±1/2 coefficients
    let (b11, b12, b21, b22) = (m[(1, 1)], m[(1, 2)], m[(2, 1)], m[(2, 2)]);
    out[(1, 1)] = (b11 + b12 + b21 + b22) * half;
    out[(1, 2)] = (b11 - b12 + b21 - b22) * half;
    out[(2, 1)] = (b11 + b12 - b21 - b22) * half;
    out[(2, 2)] = (b11 - b12 - b21 + b22) * half;
    out
}

/// A validated 4×4 density matrix tagged with its basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMat4,
    basis: BasisTag,
}

impl DensityMatrix {
    /// Validate Hermiticity, unit trace and positivity (within numerical slack).
    pub fn new(matrix: CMat4, basis: BasisTag) -> Result<Self, HilbertError> {
        let defect = linalg::hermitian_defect(&matrix);
        if defect > HERMITICITY_TOL {
            return Err(HilbertError::NotHermitian(defect));
        }
        let tr = matrix.trace();
        let tr_err = (tr - ONE_C).norm();
        if tr_err > TRACE_TOL {
            return Err(HilbertError::BadTrace(tr_err));
        }
        let min_eig = linalg::min_eigenvalue(&matrix);
        if min_eig < POSITIVITY_SLACK {
            return Err(HilbertError::NotPositive(min_eig));
        }
        Ok(Self { matrix, basis })
    }

    /// Skip validation; for internal construction of states that are
    /// Hermitian and normalized by construction.
    pub(crate) fn new_unchecked(matrix: CMat4, basis: BasisTag) -> Self {
        Self { matrix, basis }
    }

    pub fn matrix(&self) -> &CMat4 {
        &self.matrix
    }

    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn element(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// Smallest eigenvalue (diagnostic; ≥ −1e-8 for any validated matrix).
    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.matrix)
    }

    /// Plain-text form: a basis-tag header line, then 4 lines of 4
    /// whitespace-separated complex entries `a+bi`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.basis);
        for i in 0..4 {
            let row: Vec<String> = (0..4)
                .map(|j| format_complex(self.matrix[(i, j)]))
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parse the plain-text form written by [`Self::to_text`].
    pub fn from_text(text: &str) -> Result<Self, HilbertError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| HilbertError::Parse("empty input".into()))?;
        let basis = match header.trim() {
            "product" => BasisTag::Product,
            "collective" => BasisTag::Collective,
            other => {
                return Err(HilbertError::Parse(format!(
                    "unknown basis tag {other:?} (expected \"product\" or \"collective\")"
                )))
            }
        };
        let mut m = CMat4::zeros();
        for i in 0..4 {
            let line = lines
                .next()
                .ok_or_else(|| HilbertError::Parse(format!("missing matrix row {}", i + 1)))?;
            let entries: Vec<&str> = line.split_whitespace().collect();
            if entries.len() != 4 {
                return Err(HilbertError::Parse(format!(
                    "row {} has {} entries, expected 4",
                    i + 1,
                    entries.len()
                )));
            }
            for (j, tok) in entries.iter().enumerate() {
                m[(i, j)] = parse_complex(tok)?;
            }
        }
        if lines.next().is_some() {
            return Err(HilbertError::Parse(
                "trailing content after matrix rows".into(),
            ));
        }
        Self::new(m, basis)
    }
}

fn format_complex(z: Complex64) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im < 0.0 {
        format!("{:e}-{:e}i", re, -im)
    } else {
        format!("{:e}+{:e}i", re, im)
    }
}

fn parse_complex(tok: &str) -> Result<Complex64, HilbertError> {
    let bad = |msg: &str| HilbertError::Parse(format!("bad complex entry {tok:?}: {msg}"));
    let body = tok
        .strip_suffix('i')
        .ok_or_else(|| bad("missing trailing 'i'"))?;
    let bytes = body.as_bytes();
    let mut split = None;
    for i in 1..bytes.len() {
        let c = bytes[i] as char;
        if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
            split = Some(i);
        }
    }
    let i = split.ok_or_else(|| bad("missing imaginary part"))?;
    let re: f64 = body[..i].parse().map_err(|_| bad("unparsable real part"))?;
    let im: f64 = body[i..]
        .parse()
        .map_err(|_| bad("unparsable imaginary part"))?;
    Ok(Complex64::new(re, im))
}

/// Re-express a density matrix in `target`; the identity when the tags match.
/// Conjugation by the fixed involutive unitary, so trace and spectrum are
/// preserved exactly.
pub fn basis_change(rho: &DensityMatrix, target: BasisTag) -> DensityMatrix {
    if rho.basis == target {
        return rho.clone();
    }
    DensityMatrix::new_unchecked(conjugate_by_basis_unitary(&rho.matrix), target)
}

/// Rank-1 projector |ψ⟩⟨ψ| from an amplitude vector in the given basis.
/// The vector is renormalized; near-null vectors are rejected.
pub fn pure_state_density(
    amplitudes: [Complex64; 4],
    basis: BasisTag,
) -> Result<DensityMatrix, HilbertError> {
    let v = CVec4::from_row_slice(&amplitudes);
    let norm = v.norm();
    if norm < NEAR_NULL_NORM {
        return Err(HilbertError::NearNullAmplitudes(norm));
    }
    let v = v / Complex64::new(norm, 0.0);
    Ok(DensityMatrix::new_unchecked(v * v.adjoint(), basis))
}

/// Eigenstate mixing of non-identical atoms (detuning Δ, shift Ω₁₂):
/// α = d/√(d²+Ω₁₂²), β = Ω₁₂/√(d²+Ω₁₂²), d = Δ + √(Ω₁₂²+Δ²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingCoefficients {
    pub alpha: f64,
    pub beta: f64,
    pub d: f64,
}

impl MixingCoefficients {
    /// |s′⟩ = [(α+β)|s⟩ + (β−α)|a⟩]/√2, as collective-basis amplitudes.
    pub fn symmetric_prime(&self) -> CVec4 {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        CVec4::new(
            ZERO_C,
            Complex64::new((self.alpha + self.beta) * r, 0.0),
            Complex64::new((self.beta - self.alpha) * r, 0.0),
            ZERO_C,
        )
    }

    /// |a′⟩ = [(α−β)|s⟩ + (α+β)|a⟩]/√2, as collective-basis amplitudes.
    pub fn antisymmetric_prime(&self) -> CVec4 {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        CVec4::new(
            ZERO_C,
            Complex64::new((self.alpha - self.beta) * r, 0.0),
            Complex64::new((self.alpha + self.beta) * r, 0.0),
            ZERO_C,
        )
    }
}

/// Mixing coefficients (α, β, d) for detuning `delta` and shift `omega12`,
/// both in units of Γ. d vanishes for Ω₁₂ = 0, Δ ≤ 0, where the mixing is
/// undefined; that case is rejected.
pub fn nonidentical_mixing(delta: f64, omega12: f64) -> Result<MixingCoefficients, HilbertError> {
    let d = delta + (omega12 * omega12 + delta * delta).sqrt();
    let denom = (d * d + omega12 * omega12).sqrt();
    if denom < 1e-300 || !denom.is_finite() {
        return Err(HilbertError::DegenerateMixing);
    }
    Ok(MixingCoefficients {
        alpha: d / denom,
        beta: omega12 / denom,
        d,
    })
}

/// Square of the total spin, S² = 2 − 2ρ_aa. Conserved only when the
/// antisymmetric state decouples (small-sample limit Γ₁₂ = Γ).
pub fn total_spin_squared(rho: &DensityMatrix) -> f64 {
    let coll = basis_change(rho, BasisTag::Collective);
    2.0 - 2.0 * coll.element(index::A, index::A).re
}
