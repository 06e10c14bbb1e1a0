//! Time evolution of the pair density matrix by two independent engines.
//!
//! The product engine integrates the master equation assembled from the
//! single-atom operators S⁺ᵢ, S⁻ᵢ, Sᶻᵢ; the collective engine integrates the
//! nine coupled equations for the collective-basis matrix elements. The two
//! must agree element-wise wherever both are defined; that agreement is a
//! standing cross-check exercised by the test suite.
//!
//! Sign convention: the exchange Hamiltonian enters with the sign that makes
//! the one-excitation coherence rotate as ρ_as ∝ e^{−2iΩ₁₂t}, matching the
//! collective equations and the closed-form solutions in [`crate::analytic`].
//! (The opposite choice conjugates ρ_as and leaves every population and
//! entanglement measure unchanged for the scenarios shipped here.)

use nalgebra::Matrix2;
use num_complex::Complex64;
use thiserror::Error;

use crate::hilbert::{basis_change, index, BasisTag, DensityMatrix};
use crate::linalg::{self, kron2, CMat4, ONE_C, ZERO_C};

#[derive(Debug, Error, PartialEq)]
pub enum DynamicsError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("expected a {expected}-basis density matrix, got {got}")]
    BasisMismatch { expected: BasisTag, got: BasisTag },
    #[error("invalid grid: dt = {dt}, t_end = {t_end}")]
    InvalidGrid { dt: f64, t_end: f64 },
    #[error("trace drift {drift:.3e} at t = {t:.6} exceeds 1e-6; integration aborted")]
    TraceDrift { t: f64, drift: f64 },
    #[error("state lost positivity at t = {t:.6}: min eigenvalue {min_eig:.3e}")]
    PositivityLoss { t: f64, min_eig: f64 },
}

/// Rates and frequencies of the pair, all in units of Γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub gamma: f64,
    pub gamma12: f64,
    pub omega12: f64,
    pub delta: f64,
    pub omega0: f64,
}

impl SystemParams {
    pub fn new(
        gamma: f64,
        gamma12: f64,
        omega12: f64,
        delta: f64,
        omega0: f64,
    ) -> Result<Self, DynamicsError> {
        let p = Self {
            gamma,
            gamma12,
            omega12,
            delta,
            omega0,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), DynamicsError> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(DynamicsError::InvalidParams(format!(
                "gamma must be positive, got {}",
                self.gamma
            )));
        }
        if self.gamma12.is_nan() || self.gamma12.abs() > self.gamma {
            return Err(DynamicsError::InvalidParams(format!(
                "|gamma12| = {} exceeds gamma = {}",
                self.gamma12.abs(),
                self.gamma
            )));
        }
        for (name, v) in [
            ("omega12", self.omega12),
            ("delta", self.delta),
            ("omega0", self.omega0),
        ] {
            if !v.is_finite() {
                return Err(DynamicsError::InvalidParams(format!(
                    "{name} is not finite"
                )));
            }
        }
        Ok(())
    }
}

/// Which right-hand side drives the integration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Product,
    Collective,
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Engine::Product => write!(f, "product"),
            Engine::Collective => write!(f, "collective"),
        }
    }
}

// ---------------------------------------------------------------------------
// product engine
// ---------------------------------------------------------------------------

/// The fixed 4×4 atomic operators in the product basis.
struct AtomOps {
    sz1: CMat4,
    sz2: CMat4,
    /// S⁺₁S⁻₂ + S⁺₂S⁻₁ (= |s⟩⟨s| − |a⟩⟨a| in the collective basis)
    exchange: CMat4,
    /// S⁺ᵢS⁻ⱼ products indexed [i][j]
    spsm: [[CMat4; 2]; 2],
    /// lowering operators S⁻₁, S⁻₂
    sm: [CMat4; 2],
    /// raising operators S⁺₁, S⁺₂
    sp: [CMat4; 2],
}

fn atom_ops() -> AtomOps {
    // single-atom basis order (e, g)
    let id = Matrix2::identity();
    let up = Matrix2::new(ZERO_C, ONE_C, ZERO_C, ZERO_C);
    let dn = Matrix2::new(ZERO_C, ZERO_C, ONE_C, ZERO_C);
    let z = Matrix2::new(
        Complex64::new(0.5, 0.0),
        ZERO_C,
        ZERO_C,
        Complex64::new(-0.5, 0.0),
    );
    let sp = [kron2(&up, &id), kron2(&id, &up)];
    let sm = [kron2(&dn, &id), kron2(&id, &dn)];
    let spsm = [
        [sp[0] * sm[0], sp[0] * sm[1]],
        [sp[1] * sm[0], sp[1] * sm[1]],
    ];
    AtomOps {
        sz1: kron2(&z, &id),
        sz2: kron2(&id, &z),
        exchange: spsm[0][1] + spsm[1][0],
        spsm,
        sm,
        sp,
    }
}

fn product_rhs_raw(rho: &CMat4, params: &SystemParams, ops: &AtomOps) -> CMat4 {
    let i = Complex64::new(0.0, 1.0);
    let w1 = Complex64::new(params.omega0 - params.delta, 0.0);
    let w2 = Complex64::new(params.omega0 + params.delta, 0.0);

    // coherent part: free evolution plus exchange interaction (sign per the
    // module-level phase convention)
    let h = ops.sz1 * w1 + ops.sz2 * w2 - ops.exchange * Complex64::new(params.omega12, 0.0);
    let mut out = (h * rho - rho * h) * (-i);

    // dissipator: −(1/2) Σ_ij Γ_ij (ρ S⁺ᵢS⁻ⱼ + S⁺ᵢS⁻ⱼ ρ − 2 S⁻ⱼ ρ S⁺ᵢ)
    let rates = [
        [params.gamma, params.gamma12],
        [params.gamma12, params.gamma],
    ];
    // (a, b) index four operator tables at once; keep the plain loops
    #[allow(clippy::needless_range_loop)]
    for a in 0..2 {
        for b in 0..2 {
            let r = Complex64::new(-0.5 * rates[a][b], 0.0);
            let proj = &ops.spsm[a][b];
            out += (rho * proj + proj * rho
                - ops.sm[b] * rho * ops.sp[a] * Complex64::new(2.0, 0.0))
                * r;
        }
    }
    // project out rounding noise; the exact map preserves Hermiticity
    (out + out.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Master-equation right-hand side ∂ρ/∂t in the product basis.
/// The result is Hermitian and traceless (up to rounding).
pub fn product_liouvillian_rhs(
    rho: &DensityMatrix,
    params: &SystemParams,
) -> Result<CMat4, DynamicsError> {
    params.validate()?;
    if rho.basis() != BasisTag::Product {
        return Err(DynamicsError::BasisMismatch {
            expected: BasisTag::Product,
            got: rho.basis(),
        });
    }
    Ok(product_rhs_raw(rho.matrix(), params, &atom_ops()))
}

// ---------------------------------------------------------------------------
// collective engine
// ---------------------------------------------------------------------------

/// The nine independent collective-basis elements
/// (ρ_ee, ρ_ss, ρ_aa, ρ_as, ρ_se, ρ_ae, ρ_gs, ρ_ga, ρ_eg); ρ_gg follows from
/// the unit trace and conjugate elements are never stored, so Hermiticity and
/// trace are exact by construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollectiveState(pub [Complex64; 9]);

impl CollectiveState {
    pub fn rho_ee(&self) -> Complex64 {
        self.0[0]
    }
    pub fn rho_ss(&self) -> Complex64 {
        self.0[1]
    }
    pub fn rho_aa(&self) -> Complex64 {
        self.0[2]
    }
    pub fn rho_as(&self) -> Complex64 {
        self.0[3]
    }
    pub fn rho_se(&self) -> Complex64 {
        self.0[4]
    }
    pub fn rho_ae(&self) -> Complex64 {
        self.0[5]
    }
    pub fn rho_gs(&self) -> Complex64 {
        self.0[6]
    }
    pub fn rho_ga(&self) -> Complex64 {
        self.0[7]
    }
    pub fn rho_eg(&self) -> Complex64 {
        self.0[8]
    }
    pub fn rho_gg(&self) -> Complex64 {
        ONE_C - self.0[0] - self.0[1] - self.0[2]
    }

    /// Extract the stored elements from a collective-basis density matrix.
    pub fn from_density(rho: &DensityMatrix) -> Self {
        let coll = basis_change(rho, BasisTag::Collective);
        let m = coll.matrix();
        use index::{A, E, G, S};
        CollectiveState([
            m[(E, E)],
            m[(S, S)],
            m[(A, A)],
            m[(A, S)],
            m[(S, E)],
            m[(A, E)],
            m[(G, S)],
            m[(G, A)],
            m[(E, G)],
        ])
    }

    /// Reassemble the full collective-basis matrix (Hermitian, unit trace).
    pub fn to_matrix(&self) -> CMat4 {
        use index::{A, E, G, S};
        let mut m = CMat4::zeros();
        m[(E, E)] = Complex64::new(self.rho_ee().re, 0.0);
        m[(S, S)] = Complex64::new(self.rho_ss().re, 0.0);
        m[(A, A)] = Complex64::new(self.rho_aa().re, 0.0);
        m[(G, G)] = Complex64::new(self.rho_gg().re, 0.0);
        m[(A, S)] = self.rho_as();
        m[(S, A)] = self.rho_as().conj();
        m[(S, E)] = self.rho_se();
        m[(E, S)] = self.rho_se().conj();
        m[(A, E)] = self.rho_ae();
        m[(E, A)] = self.rho_ae().conj();
        m[(G, S)] = self.rho_gs();
        m[(S, G)] = self.rho_gs().conj();
        m[(G, A)] = self.rho_ga();
        m[(A, G)] = self.rho_ga().conj();
        m[(E, G)] = self.rho_eg();
        m[(G, E)] = self.rho_eg().conj();
        m
    }

    fn scaled_add(&self, other: &Self, factor: f64) -> Self {
        let f = Complex64::new(factor, 0.0);
        let mut out = [ZERO_C; 9];
        for (o, (a, b)) in out.iter_mut().zip(self.0.iter().zip(other.0.iter())) {
            *o = a + b * f;
        }
        CollectiveState(out)
    }
}

/// The nine coupled equations of motion for the collective elements, written
/// out literally. With Δ = 0 the one-excitation block decouples into
/// superradiant (Γ+Γ₁₂) and subradiant (Γ−Γ₁₂) channels; a non-zero detuning
/// coherently transfers population between |s⟩ and |a⟩.
pub fn collective_rhs(state: &CollectiveState, params: &SystemParams) -> CollectiveState {
    let i = Complex64::new(0.0, 1.0);
    let g = params.gamma;
    let g12 = params.gamma12;
    let o = params.omega12;
    let w0 = params.omega0;
    let delta = Complex64::new(params.delta, 0.0);

    let ee = state.rho_ee();
    let ss = state.rho_ss();
    let aa = state.rho_aa();
    let as_ = state.rho_as();
    let sa = as_.conj();
    let se = state.rho_se();
    let ae = state.rho_ae();
    let gs = state.rho_gs();
    let ga = state.rho_ga();
    let eg = state.rho_eg();

    let c = |x: f64| Complex64::new(x, 0.0);
    let d_ee = -c(2.0 * g) * ee;
    let d_ss = -c(g + g12) * (ss - ee) + i * delta * (as_ - sa);
    let d_aa = -c(g - g12) * (aa - ee) - i * delta * (as_ - sa);
    let d_as = -(c(g) + i * c(2.0 * o)) * as_ + i * delta * (ss - aa);
    let d_se = -(c(0.5 * (3.0 * g + g12)) - i * c(w0 - o)) * se + i * delta * ae;
    let d_ae = -(c(0.5 * (3.0 * g - g12)) - i * c(w0 + o)) * ae + i * delta * se;
    let d_gs = -(c(0.5 * (g + g12)) - i * c(w0 + o)) * gs + c(g + g12) * se - i * delta * ga;
    let d_ga = -(c(0.5 * (g - g12)) - i * c(w0 - o)) * ga - c(g - g12) * ae - i * delta * gs;
    let d_eg = -(c(g) + i * c(2.0 * w0)) * eg;

    CollectiveState([d_ee, d_ss, d_aa, d_as, d_se, d_ae, d_gs, d_ga, d_eg])
}

// ---------------------------------------------------------------------------
// integration
// ---------------------------------------------------------------------------

/// Default integration step (in units of 1/Γ).
pub const DEFAULT_DT: f64 = 1e-3;
/// Trace drift that triggers renormalization of a stored state.
pub const TRACE_RENORM_THRESHOLD: f64 = 1e-10;
/// Trace drift that aborts the integration.
pub const TRACE_ABORT_THRESHOLD: f64 = 1e-6;
/// Positivity slack: stored states must have min eigenvalue above this.
pub const POSITIVITY_ABORT: f64 = -1e-8;

/// Per-step derived observables, filled by the scenario layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedRecord {
    pub rho_ee: f64,
    pub rho_ss: f64,
    pub rho_aa: f64,
    pub rho_gg: f64,
    pub rho_as: Complex64,
    pub concurrence: f64,
    pub negativity: f64,
    pub s_squared: f64,
}

/// A time grid with the stored state at every step, plus (optionally) the
/// derived per-step observables.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub derived: Vec<DerivedRecord>,
}

impl Trajectory {
    /// Index of the stored step closest to `t`.
    pub fn index_at(&self, t: f64) -> usize {
        let dt = if self.times.len() > 1 {
            self.times[1] - self.times[0]
        } else {
            1.0
        };
        ((t / dt).round() as usize).min(self.times.len() - 1)
    }
}

/// Fixed-step classical Runge-Kutta integration of the master equation from
/// `rho0` to `t_end` (adjusted to the nearest multiple of `dt`).
///
/// Every step is stored, in `out_basis`. Stored states are checked for trace
/// drift (renormalized above 1e-10, fatal above 1e-6) and positivity
/// (fatal below −1e-8).
pub fn integrate(
    rho0: &DensityMatrix,
    params: &SystemParams,
    t_end: f64,
    dt: f64,
    engine: Engine,
    out_basis: BasisTag,
) -> Result<Trajectory, DynamicsError> {
    params.validate()?;
    if !(dt > 0.0 && dt.is_finite()) || !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(DynamicsError::InvalidGrid { dt, t_end });
    }
    let n_steps = (t_end / dt).round() as usize;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);

    match engine {
        Engine::Product => {
            let ops = atom_ops();
            let mut m = *basis_change(rho0, BasisTag::Product).matrix();
            m = store_product(&mut states, &mut times, m, 0.0, out_basis)?;
            for k in 0..n_steps {
                let t = k as f64 * dt;
                let half = dt / 2.0;
                let k1 = product_rhs_raw(&m, params, &ops);
                let k2 = product_rhs_raw(&(m + k1 * Complex64::new(half, 0.0)), params, &ops);
                let k3 = product_rhs_raw(&(m + k2 * Complex64::new(half, 0.0)), params, &ops);
                let k4 = product_rhs_raw(&(m + k3 * Complex64::new(dt, 0.0)), params, &ops);
                m += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
                    * Complex64::new(dt / 6.0, 0.0);
                // store_product hands back the (possibly trace-renormalized) state
                m = store_product(&mut states, &mut times, m, t + dt, out_basis)?;
            }
        }
        Engine::Collective => {
            let mut y = CollectiveState::from_density(rho0);
            store_collective(&mut states, &mut times, &y, 0.0, out_basis)?;
            for k in 0..n_steps {
                let t = k as f64 * dt;
                let k1 = collective_rhs(&y, params);
                let k2 = collective_rhs(&y.scaled_add(&k1, dt / 2.0), params);
                let k3 = collective_rhs(&y.scaled_add(&k2, dt / 2.0), params);
                let k4 = collective_rhs(&y.scaled_add(&k3, dt), params);
                let mut acc = y.scaled_add(&k1, dt / 6.0);
                acc = acc.scaled_add(&k2, dt / 3.0);
                acc = acc.scaled_add(&k3, dt / 3.0);
                y = acc.scaled_add(&k4, dt / 6.0);
                store_collective(&mut states, &mut times, &y, t + dt, out_basis)?;
            }
        }
    }

    Ok(Trajectory {
        times,
        states,
        derived: Vec::new(),
    })
}

fn store_product(
    states: &mut Vec<DensityMatrix>,
    times: &mut Vec<f64>,
    mut m: CMat4,
    t: f64,
    out_basis: BasisTag,
) -> Result<CMat4, DynamicsError> {
    let tr = m.trace().re;
    let drift = (tr - 1.0).abs();
    if drift > TRACE_ABORT_THRESHOLD {
        return Err(DynamicsError::TraceDrift { t, drift });
    }
    if drift > TRACE_RENORM_THRESHOLD {
        log::warn!("renormalizing trace at t = {t:.6}: drift {drift:.3e}");
        m *= Complex64::new(1.0 / tr, 0.0);
    }
    let min_eig = linalg::min_eigenvalue(&m);
    if min_eig < POSITIVITY_ABORT {
        return Err(DynamicsError::PositivityLoss { t, min_eig });
    }
    let dm = DensityMatrix::new_unchecked(m, BasisTag::Product);
    states.push(basis_change(&dm, out_basis));
    times.push(t);
    Ok(m)
}

fn store_collective(
    states: &mut Vec<DensityMatrix>,
    times: &mut Vec<f64>,
    y: &CollectiveState,
    t: f64,
    out_basis: BasisTag,
) -> Result<(), DynamicsError> {
    // trace is one by construction; positivity still needs an eigensolve
    let m = y.to_matrix();
    let min_eig = linalg::min_eigenvalue(&m);
    if min_eig < POSITIVITY_ABORT {
        return Err(DynamicsError::PositivityLoss { t, min_eig });
    }
    let dm = DensityMatrix::new_unchecked(m, BasisTag::Collective);
    states.push(basis_change(&dm, out_basis));
    times.push(t);
    Ok(())
}
