//! Named experiment presets, observable extraction and CSV emission.
//!
//! The six bundled presets (`figure 1` … `figure 6`) reproduce the standard
//! emission scenarios: one atom excited, both excited, the detuned variants,
//! and decay from the maximally entangled symmetric/antisymmetric states.
//! Each writes a deterministic CSV with a fixed header so downstream plots
//! are byte-reproducible.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::couplings::{AtomPairConfig, CouplingParams};
use crate::dynamics::{integrate, DerivedRecord, Engine, SystemParams, Trajectory};
use crate::entanglement::measure;
use crate::hilbert::{index, pure_state_density, BasisTag, DensityMatrix};
use crate::linalg::{ONE_C, ZERO_C};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Dynamics(#[from] crate::dynamics::DynamicsError),
    #[error(transparent)]
    Couplings(#[from] crate::couplings::CouplingsError),
    #[error(transparent)]
    Hilbert(#[from] crate::hilbert::HilbertError),
    #[error("entanglement measure failed at step {step}: {source}")]
    Measure {
        step: usize,
        source: crate::entanglement::EntanglementError,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("trajectory is incomplete: {0}")]
    IncompleteTrajectory(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("no preset named figure {0}; available presets are 1..=6")]
    UnknownPreset(u8),
}

/// CSV column header; fixed byte-for-byte.
pub const CSV_HEADER: &str =
    "gamma_t,concurrence,negativity,rho_ee,rho_ss,rho_aa,rho_gg,re_rho_as,im_rho_as,s_squared";

/// Initial condition of a run.
#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)] // Custom carries the full matrix by design
pub enum InitialState {
    /// Atom 1 excited, atom 2 in the ground state.
    E1G2,
    /// Atom 2 excited, atom 1 in the ground state.
    G1E2,
    /// Both atoms excited.
    E1E2,
    /// The superradiant symmetric state |s⟩.
    Sym,
    /// The subradiant antisymmetric state |a⟩.
    Antisym,
    /// Arbitrary density matrix (loaded from its text form).
    Custom(DensityMatrix),
}

impl InitialState {
    pub fn parse_name(name: &str) -> Option<Self> {
        match name {
            "e1g2" => Some(Self::E1G2),
            "g1e2" => Some(Self::G1E2),
            "e1e2" => Some(Self::E1E2),
            "sym" => Some(Self::Sym),
            "antisym" => Some(Self::Antisym),
            _ => None,
        }
    }

    pub fn density(&self) -> Result<DensityMatrix, ScenarioError> {
        let rho = match self {
            Self::E1G2 => pure_state_density([ZERO_C, ONE_C, ZERO_C, ZERO_C], BasisTag::Product)?,
            Self::G1E2 => pure_state_density([ZERO_C, ZERO_C, ONE_C, ZERO_C], BasisTag::Product)?,
            Self::E1E2 => pure_state_density([ONE_C, ZERO_C, ZERO_C, ZERO_C], BasisTag::Product)?,
            Self::Sym => pure_state_density([ZERO_C, ONE_C, ZERO_C, ZERO_C], BasisTag::Collective)?,
            Self::Antisym => {
                pure_state_density([ZERO_C, ZERO_C, ONE_C, ZERO_C], BasisTag::Collective)?
            }
            Self::Custom(rho) => rho.clone(),
        };
        Ok(rho)
    }
}

impl fmt::Display for InitialState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::E1G2 => write!(f, "e1g2"),
            Self::G1E2 => write!(f, "g1e2"),
            Self::E1E2 => write!(f, "e1e2"),
            Self::Sym => write!(f, "sym"),
            Self::Antisym => write!(f, "antisym"),
            Self::Custom(_) => write!(f, "custom"),
        }
    }
}

/// How the couplings in `params` were chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CouplingsMode {
    /// Evaluated from the geometry.
    Computed,
    /// Pinned to the rounded reference values Γ₁₂ = 0.79 Γ, Ω₁₂ = 1.12 Γ.
    CaptionOverride,
    /// Pinned by hand (CLI overrides).
    Manual,
}

/// Output grid: integrate to `t_end` with step `dt`, write every `stride`-th
/// step to the CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_end: f64,
    pub dt: f64,
    pub stride: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            t_end: 8.0,
            dt: crate::dynamics::DEFAULT_DT,
            stride: 10,
        }
    }
}

/// A fully resolved run description.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub initial_state: InitialState,
    pub params: SystemParams,
    pub couplings_mode: CouplingsMode,
    pub grid: TimeGrid,
    pub engine: Engine,
}

impl ScenarioSpec {
    /// The bundled presets. All use the caption couplings by default
    /// (`caption = false` recomputes Γ₁₂, Ω₁₂ from r₁₂ = λ/6, perpendicular).
    pub fn figure_preset(number: u8, caption: bool) -> Result<Self, ScenarioError> {
        let (initial_state, delta, t_end) = match number {
            1 => (InitialState::E1G2, 0.0, 8.0),
            2 => (InitialState::E1E2, 0.0, 12.0),
            3 => (InitialState::E1G2, 1.0, 8.0),
            4 => (InitialState::G1E2, 1.0, 8.0),
            5 => (InitialState::Sym, 1.0, 8.0),
            6 => (InitialState::Antisym, 1.0, 8.0),
            n => return Err(ScenarioError::UnknownPreset(n)),
        };
        let (cp, mode) = if caption {
            (
                CouplingParams::caption_override(),
                CouplingsMode::CaptionOverride,
            )
        } else {
            let cfg = AtomPairConfig::perpendicular(1.0 / 6.0)?;
            (CouplingParams::computed(&cfg)?, CouplingsMode::Computed)
        };
        Ok(Self {
            initial_state,
            params: SystemParams::new(1.0, cp.gamma12, cp.omega12, delta, 0.0)?,
            couplings_mode: mode,
            grid: TimeGrid {
                t_end,
                ..TimeGrid::default()
            },
            engine: Engine::Collective,
        })
    }

    /// Serialize to the `key = value` config form. Custom initial states
    /// have no file name to refer back to and are rejected.
    pub fn to_config_string(&self) -> Result<String, ScenarioError> {
        if matches!(self.initial_state, InitialState::Custom(_)) {
            return Err(ScenarioError::Config(
                "custom initial states are not serializable; pass the density-matrix \
                 file through `init = <path>` instead"
                    .into(),
            ));
        }
        Ok(format!(
            "init = {}\n\
             gamma12-override = {:e}\n\
             omega12-override = {:e}\n\
             delta = {:e}\n\
             omega0 = {:e}\n\
             t-end = {:e}\n\
             dt = {:e}\n\
             stride = {}\n\
             engine = {}\n",
            self.initial_state,
            self.params.gamma12,
            self.params.omega12,
            self.params.delta,
            self.params.omega0,
            self.grid.t_end,
            self.grid.dt,
            self.grid.stride,
            self.engine,
        ))
    }

    /// Parse the `key = value` config form (`#` starts a comment). Unknown
    /// keys are rejected. `init` accepts a state name or a density-matrix
    /// file path.
    pub fn from_config_str(text: &str) -> Result<Self, ScenarioError> {
        let kv = parse_config(text)?;
        let mut spec = ScenarioSpec {
            initial_state: InitialState::E1G2,
            params: SystemParams::new(1.0, 0.0, 0.0, 0.0, 0.0)?,
            couplings_mode: CouplingsMode::Manual,
            grid: TimeGrid::default(),
            engine: Engine::Collective,
        };
        let mut r12: Option<f64> = None;
        let mut angle_deg: Option<f64> = None;
        let mut gamma12: Option<f64> = None;
        let mut omega12: Option<f64> = None;

        for (key, value) in kv.iter() {
            match key.as_str() {
                "init" => {
                    spec.initial_state = match InitialState::parse_name(value) {
                        Some(s) => s,
                        None => {
                            let text =
                                fs::read_to_string(value).map_err(|source| ScenarioError::Io {
                                    path: PathBuf::from(value),
                                    source,
                                })?;
                            InitialState::Custom(DensityMatrix::from_text(&text)?)
                        }
                    }
                }
                "delta" => spec.params.delta = parse_f64(key, value)?,
                "omega0" => spec.params.omega0 = parse_f64(key, value)?,
                "r12" => r12 = Some(parse_f64(key, value)?),
                "angle" => angle_deg = Some(parse_f64(key, value)?),
                "gamma12-override" => gamma12 = Some(parse_f64(key, value)?),
                "omega12-override" => omega12 = Some(parse_f64(key, value)?),
                "t-end" => spec.grid.t_end = parse_f64(key, value)?,
                "dt" => spec.grid.dt = parse_f64(key, value)?,
                "stride" => {
                    spec.grid.stride = value.parse().map_err(|_| {
                        ScenarioError::Config(format!(
                            "stride must be a positive integer, got {value:?}"
                        ))
                    })?
                }
                "engine" => {
                    spec.engine = match value.as_str() {
                        "product" => Engine::Product,
                        "collective" => Engine::Collective,
                        other => {
                            return Err(ScenarioError::Config(format!(
                                "engine must be \"product\" or \"collective\", got {other:?}"
                            )))
                        }
                    }
                }
                "out" => {} // consumed by the CLI layer
                other => {
                    return Err(ScenarioError::Config(format!("unknown key {other:?}")));
                }
            }
        }

        let (g12, o12, mode) = resolve_couplings(r12, angle_deg, gamma12, omega12)?;
        spec.params.gamma12 = g12;
        spec.params.omega12 = o12;
        spec.couplings_mode = mode;
        spec.params.validate()?;
        if spec.grid.stride == 0 {
            return Err(ScenarioError::Config("stride must be at least 1".into()));
        }
        Ok(spec)
    }
}

/// Couplings from geometry flags and/or explicit overrides; overrides win
/// component-wise.
pub fn resolve_couplings(
    r12: Option<f64>,
    angle_deg: Option<f64>,
    gamma12_override: Option<f64>,
    omega12_override: Option<f64>,
) -> Result<(f64, f64, CouplingsMode), ScenarioError> {
    let computed = match r12 {
        Some(sep) => {
            let angle = angle_deg.unwrap_or(90.0).to_radians();
            let cfg = AtomPairConfig::new(1.0, sep, angle, 0.0, 0.0)?;
            Some(CouplingParams::computed(&cfg)?)
        }
        None => None,
    };
    match (computed, gamma12_override, omega12_override) {
        (Some(c), None, None) => Ok((c.gamma12, c.omega12, CouplingsMode::Computed)),
        (c, g, o) => {
            let base = c.unwrap_or(CouplingParams {
                gamma12: 0.0,
                omega12: 0.0,
                source: crate::couplings::CouplingSource::Override,
            });
            let g12 = g.unwrap_or(base.gamma12);
            let o12 = o.unwrap_or(base.omega12);
            CouplingParams::manual(g12, o12)?;
            Ok((g12, o12, CouplingsMode::Manual))
        }
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ScenarioError> {
    value
        .parse()
        .map_err(|_| ScenarioError::Config(format!("{key} must be a number, got {value:?}")))
}

/// Parse `key = value` lines; `#` starts a comment, blank lines are skipped.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, ScenarioError> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            ScenarioError::Config(format!(
                "line {}: expected `key = value`, got {raw:?}",
                lineno + 1
            ))
        })?;
        out.push((key.trim().to_string(), value.trim().to_string()));
    }
    Ok(out)
}

/// Integrate the scenario and fill the derived per-step observables
/// (populations, coherence, both entanglement measures, S²).
pub fn run_scenario(spec: &ScenarioSpec) -> Result<Trajectory, ScenarioError> {
    let rho0 = spec.initial_state.density()?;
    let mut traj = integrate(
        &rho0,
        &spec.params,
        spec.grid.t_end,
        spec.grid.dt,
        spec.engine,
        BasisTag::Collective,
    )?;
    traj.derived.reserve(traj.states.len());
    for (step, state) in traj.states.iter().enumerate() {
        let m = measure(state).map_err(|source| ScenarioError::Measure { step, source })?;
        use index::{A, E, G, S};
        traj.derived.push(DerivedRecord {
            rho_ee: state.element(E, E).re,
            rho_ss: state.element(S, S).re,
            rho_aa: state.element(A, A).re,
            rho_gg: state.element(G, G).re,
            rho_as: state.element(A, S),
            concurrence: m.concurrence,
            negativity: m.negativity,
            s_squared: 2.0 - 2.0 * state.element(A, A).re,
        });
    }
    Ok(traj)
}

fn format_sig(x: f64) -> String {
    // 12 significant digits, deterministic
    format!("{:.11e}", if x == 0.0 { 0.0 } else { x })
}

/// Render the CSV text for a completed trajectory (header plus one row per
/// stride step, 12 significant digits per value).
pub fn csv_string(traj: &Trajectory, stride: usize) -> Result<String, ScenarioError> {
    if traj.derived.len() != traj.states.len() || traj.derived.is_empty() {
        return Err(ScenarioError::IncompleteTrajectory(format!(
            "derived records: {}, states: {}",
            traj.derived.len(),
            traj.states.len()
        )));
    }
    let stride = stride.max(1);
    let mut out = String::with_capacity(64 * (traj.times.len() / stride + 2));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for k in (0..traj.times.len()).step_by(stride) {
        let d = &traj.derived[k];
        let row = [
            traj.times[k],
            d.concurrence,
            d.negativity,
            d.rho_ee,
            d.rho_ss,
            d.rho_aa,
            d.rho_gg,
            d.rho_as.re,
            d.rho_as.im,
            d.s_squared,
        ];
        let cells: Vec<String> = row.iter().map(|v| format_sig(*v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Write the CSV to `path`; I/O failures carry the path.
pub fn write_csv(traj: &Trajectory, stride: usize, path: &Path) -> Result<(), ScenarioError> {
    let text = csv_string(traj, stride)?;
    let mut f = fs::File::create(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(text.as_bytes())
        .map_err(|source| ScenarioError::Io {
            path: path.to_path_buf(),
            source,
        })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen full-precision reference values
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn preset_table() {
        let f1 = ScenarioSpec::figure_preset(1, true).unwrap();
        assert_eq!(f1.initial_state, InitialState::E1G2);
        assert_eq!(f1.params.gamma12, 0.79);
        assert_eq!(f1.params.omega12, 1.12);
        assert_eq!(f1.params.delta, 0.0);
        assert_eq!(f1.grid.t_end, 8.0);
        assert_eq!(f1.grid.stride, 10);

        let f2 = ScenarioSpec::figure_preset(2, true).unwrap();
        assert_eq!(f2.initial_state, InitialState::E1E2);
        assert_eq!(f2.grid.t_end, 12.0);

        let f5 = ScenarioSpec::figure_preset(5, true).unwrap();
        assert_eq!(f5.initial_state, InitialState::Sym);
        assert_eq!(f5.params.delta, 1.0);

        let computed = ScenarioSpec::figure_preset(1, false).unwrap();
        assert_abs_diff_eq!(
            computed.params.gamma12,
            0.79321675501254984,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            computed.params.omega12,
            0.56073851726584692,
            epsilon = 1e-12
        );

        assert!(matches!(
            ScenarioSpec::figure_preset(7, true),
            Err(ScenarioError::UnknownPreset(7))
        ));
    }

    #[test]
    fn initial_states_have_expected_elements() {
        use index::{A, E, S};
        let sym = InitialState::Sym.density().unwrap();
        assert_abs_diff_eq!(sym.element(S, S).re, 1.0, epsilon = 1e-15);
        let anti = InitialState::Antisym.density().unwrap();
        assert_abs_diff_eq!(anti.element(A, A).re, 1.0, epsilon = 1e-15);
        let ee = InitialState::E1E2.density().unwrap();
        assert_abs_diff_eq!(ee.element(E, E).re, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn figure1_initial_row_values() {
        let mut spec = ScenarioSpec::figure_preset(1, true).unwrap();
        spec.grid.t_end = 0.01; // keep the unit test fast
        let traj = run_scenario(&spec).unwrap();
        let d0 = &traj.derived[0];
        assert_abs_diff_eq!(d0.concurrence, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d0.rho_ss, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(d0.rho_aa, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(d0.s_squared, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn figure2_initial_row_values() {
        let mut spec = ScenarioSpec::figure_preset(2, true).unwrap();
        spec.grid.t_end = 0.01;
        let traj = run_scenario(&spec).unwrap();
        let d0 = &traj.derived[0];
        assert_abs_diff_eq!(d0.rho_ee, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(d0.concurrence, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d0.negativity, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn csv_layout() {
        let mut spec = ScenarioSpec::figure_preset(1, true).unwrap();
        spec.grid.t_end = 0.05;
        let traj = run_scenario(&spec).unwrap();
        let text = csv_string(&traj, 10).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let first = lines.next().unwrap();
        let cells: Vec<&str> = first.split(',').collect();
        assert_eq!(cells.len(), 10);
        assert_eq!(cells[0], "0.00000000000e0");
        assert_eq!(cells[4], "5.00000000000e-1"); // rho_ss(0)
                                                  // 51 stored steps, stride 10 -> rows at 0,10,20,30,40,50
        assert_eq!(text.lines().count(), 1 + 6);
    }

    #[test]
    fn csv_requires_derived_records() {
        let spec = ScenarioSpec::figure_preset(1, true).unwrap();
        let rho0 = spec.initial_state.density().unwrap();
        let traj = integrate(
            &rho0,
            &spec.params,
            0.01,
            1e-3,
            Engine::Collective,
            BasisTag::Collective,
        )
        .unwrap();
        assert!(matches!(
            csv_string(&traj, 10),
            Err(ScenarioError::IncompleteTrajectory(_))
        ));
    }

    #[test]
    fn config_round_trip() {
        let spec = ScenarioSpec::figure_preset(3, true).unwrap();
        let text = spec.to_config_string().unwrap();
        let back = ScenarioSpec::from_config_str(&text).unwrap();
        assert_eq!(back.initial_state, spec.initial_state);
        assert_eq!(back.params, spec.params);
        assert_eq!(back.grid, spec.grid);
        assert_eq!(back.engine, spec.engine);
    }

    #[test]
    fn config_parsing() {
        let text = "# comment line\n\
                    init = sym\n\
                    delta = 1.0   # trailing comment\n\
                    r12 = 0.16666666666666666\n\
                    angle = 90\n\
                    t-end = 2.5\n\
                    dt = 0.002\n\
                    stride = 5\n\
                    engine = product\n";
        let spec = ScenarioSpec::from_config_str(text).unwrap();
        assert_eq!(spec.initial_state, InitialState::Sym);
        assert_eq!(spec.engine, Engine::Product);
        assert_eq!(spec.grid.stride, 5);
        assert_abs_diff_eq!(spec.params.gamma12, 0.79321675501254984, epsilon = 1e-10);
        assert_eq!(spec.couplings_mode, CouplingsMode::Computed);

        // overrides beat geometry
        let text = "init = e1e2\nr12 = 0.16667\ngamma12-override = 1.0\nomega12-override = 0\n";
        let spec = ScenarioSpec::from_config_str(text).unwrap();
        assert_eq!(spec.params.gamma12, 1.0);
        assert_eq!(spec.params.omega12, 0.0);
        assert_eq!(spec.couplings_mode, CouplingsMode::Manual);

        assert!(ScenarioSpec::from_config_str("bogus-key = 3\n").is_err());
        assert!(ScenarioSpec::from_config_str("delta 3\n").is_err());
        assert!(ScenarioSpec::from_config_str("engine = quantum\n").is_err());
        assert!(ScenarioSpec::from_config_str("stride = 0\n").is_err());
    }

    #[test]
    fn format_sig_is_stable() {
        assert_eq!(format_sig(0.0), "0.00000000000e0");
        assert_eq!(format_sig(0.5), "5.00000000000e-1");
        assert_eq!(format_sig(-0.79), "-7.90000000000e-1");
        assert_eq!(format_sig(1.0), "1.00000000000e0");
    }
}
