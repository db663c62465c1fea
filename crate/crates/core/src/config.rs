//! Plain-text configuration files: a flat key = value document (TOML
//! grammar, no tables). Unknown keys are hard errors, missing keys fall
//! back to the reference defaults, and the fully resolved configuration is
//! what lands in the run manifest.

use serde::{Deserialize, Serialize};

use crate::driver::{ExperimentConfig, InitialState};
use crate::error::{Error, Result};
use crate::kick::{AtomPreparation, InteractionParams};

/// Default sweep grid: transit times 0.0 to 20.0 in steps of 0.1.
pub fn default_sweep_grid() -> Vec<f64> {
    (0..=200).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    initial_state: Option<String>,
    mean_n: Option<f64>,
    fock_n: Option<usize>,
    atom_a: Option<f64>,
    atom_b: Option<f64>,
    atom_phi: Option<f64>,
    delta_over_lambda: Option<f64>,
    chi_over_lambda: Option<f64>,
    lambda_t: Option<f64>,
    n_atoms: Option<usize>,
    snapshot_every: Option<usize>,
    tail_tol: Option<f64>,
    sweep_values: Option<Vec<f64>>,
    sweep_start: Option<f64>,
    sweep_stop: Option<f64>,
    sweep_step: Option<f64>,
    energy_floor: Option<f64>,
}

/// Configuration with every default materialized. This is the exact record
/// serialized into the run manifest, and it parses back into itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResolvedConfig {
    pub initial_state: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_n: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fock_n: Option<usize>,
    pub atom_a: f64,
    pub atom_b: f64,
    pub atom_phi: f64,
    pub delta_over_lambda: f64,
    pub chi_over_lambda: f64,
    pub lambda_t: f64,
    pub n_atoms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshot_every: Option<usize>,
    pub tail_tol: f64,
    pub sweep_values: Vec<f64>,
    pub energy_floor: f64,
}

impl ResolvedConfig {
    /// Typed experiment description for the driver layer.
    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let initial_state = match self.initial_state.as_str() {
            "thermal" => InitialState::Thermal {
                mean_n: self.mean_n.unwrap_or(10.0),
            },
            "dephased_coherent" => InitialState::DephasedCoherent {
                mean_n: self.mean_n.unwrap_or(10.0),
            },
            "fock" => InitialState::Fock {
                n: self.fock_n.ok_or_else(|| {
                    Error::Config("initial_state = \"fock\" requires fock_n".into())
                })?,
            },
            other => {
                return Err(Error::Config(format!(
                    "initial_state must be \"thermal\", \"dephased_coherent\" or \"fock\", \
                     got \"{other}\""
                )))
            }
        };
        Ok(ExperimentConfig {
            initial_state,
            atom: AtomPreparation::new(self.atom_a, self.atom_b, self.atom_phi)?,
            params: InteractionParams::new(
                self.delta_over_lambda,
                self.chi_over_lambda,
                self.lambda_t,
            )?,
            n_atoms: self.n_atoms,
            snapshot_every: self.snapshot_every,
            tail_tol: self.tail_tol,
        })
    }
}

fn flatten_message(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Parse a configuration document and materialize defaults.
pub fn parse_config(text: &str) -> Result<ResolvedConfig> {
    let raw: RawConfig =
        toml::from_str(text).map_err(|e| Error::Config(flatten_message(&e.to_string())))?;

    let initial_state = raw
        .initial_state
        .ok_or_else(|| Error::Config("missing required key \"initial_state\"".into()))?;
    match initial_state.as_str() {
        "thermal" | "dephased_coherent" => {
            if raw.fock_n.is_some() {
                return Err(Error::Config(format!(
                    "fock_n is only valid with initial_state = \"fock\", not \"{initial_state}\""
                )));
            }
        }
        "fock" => {
            if raw.mean_n.is_some() {
                return Err(Error::Config(
                    "mean_n is not valid with initial_state = \"fock\"; use fock_n".into(),
                ));
            }
            if raw.fock_n.is_none() {
                return Err(Error::Config(
                    "initial_state = \"fock\" requires fock_n".into(),
                ));
            }
        }
        other => {
            return Err(Error::Config(format!(
                "initial_state must be \"thermal\", \"dephased_coherent\" or \"fock\", \
                 got \"{other}\""
            )))
        }
    }
    if let Some(m) = raw.mean_n {
        if !(m.is_finite() && m >= 0.0) {
            return Err(Error::Config(format!(
                "mean_n must be finite and nonnegative, got {m}"
            )));
        }
    }

    // Atom amplitudes: accept values normalized to within 1e-6 and
    // renormalize exactly, so hand-typed 0.7071 pairs are usable; the
    // resolved (exact) values are what the manifest records.
    let mut atom_a = raw.atom_a.unwrap_or(std::f64::consts::FRAC_1_SQRT_2);
    let mut atom_b = raw.atom_b.unwrap_or(std::f64::consts::FRAC_1_SQRT_2);
    let atom_phi = raw.atom_phi.unwrap_or(0.0);
    if !(atom_a.is_finite() && atom_b.is_finite()) || atom_a < 0.0 || atom_b < 0.0 {
        return Err(Error::Config(format!(
            "atom_a and atom_b must be finite and nonnegative, got {atom_a} and {atom_b}"
        )));
    }
    let norm = atom_a * atom_a + atom_b * atom_b;
    if (norm - 1.0).abs() > 1e-6 {
        return Err(Error::Config(format!(
            "atom_a^2 + atom_b^2 must be 1 (within 1e-6), got {norm}"
        )));
    }
    let scale = 1.0 / norm.sqrt();
    atom_a *= scale;
    atom_b *= scale;

    let tail_tol = raw.tail_tol.unwrap_or(1e-10);
    if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
        return Err(Error::Config(format!(
            "tail_tol must lie in (0, 1e-6], got {tail_tol}"
        )));
    }
    if let Some(k) = raw.snapshot_every {
        if k == 0 {
            return Err(Error::Config("snapshot_every must be at least 1".into()));
        }
    }

    let explicit_range =
        raw.sweep_start.is_some() || raw.sweep_stop.is_some() || raw.sweep_step.is_some();
    let sweep_values = match (&raw.sweep_values, explicit_range) {
        (Some(_), true) => {
            return Err(Error::Config(
                "give either sweep_values or sweep_start/sweep_stop/sweep_step, not both".into(),
            ))
        }
        (Some(values), false) => {
            for &v in values {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(Error::Config(format!(
                        "sweep_values entries must be finite and nonnegative, got {v}"
                    )));
                }
            }
            values.clone()
        }
        (None, true) => {
            let (start, stop, step) = match (raw.sweep_start, raw.sweep_stop, raw.sweep_step) {
                (Some(a), Some(b), Some(c)) => (a, b, c),
                _ => {
                    return Err(Error::Config(
                        "sweep_start, sweep_stop and sweep_step must be given together".into(),
                    ))
                }
            };
            if !(start.is_finite() && stop.is_finite() && step.is_finite())
                || start < 0.0
                || stop < start
                || step <= 0.0
            {
                return Err(Error::Config(format!(
                    "sweep range needs 0 <= sweep_start <= sweep_stop and sweep_step > 0, \
                     got start={start}, stop={stop}, step={step}"
                )));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| start + i as f64 * step).collect()
        }
        (None, false) => default_sweep_grid(),
    };

    let resolved = ResolvedConfig {
        initial_state,
        mean_n: match raw.mean_n {
            Some(m) => Some(m),
            None if raw.fock_n.is_none() => Some(10.0),
            None => None,
        },
        fock_n: raw.fock_n,
        atom_a,
        atom_b,
        atom_phi,
        delta_over_lambda: raw.delta_over_lambda.unwrap_or(1.0),
        chi_over_lambda: raw.chi_over_lambda.unwrap_or(1.0),
        lambda_t: raw.lambda_t.unwrap_or(12.2),
        n_atoms: raw.n_atoms.unwrap_or(200),
        snapshot_every: raw.snapshot_every,
        tail_tol,
        sweep_values,
        energy_floor: 0.0, // overwritten below once the initial mean is known
    };

    // Default energy floor: the initial state's mean photon number.
    let floor = match raw.energy_floor {
        Some(f) => {
            if !f.is_finite() {
                return Err(Error::Config(format!(
                    "energy_floor must be finite, got {f}"
                )));
            }
            f
        }
        None => {
            let experiment = resolved.experiment()?;
            experiment
                .initial_state
                .build(resolved.tail_tol)?
                .diagnostics()
                .mean_n
        }
    };
    let resolved = ResolvedConfig {
        energy_floor: floor,
        ..resolved
    };
    // Validate the typed view eagerly so config errors surface at parse
    // time, not mid-run.
    resolved.experiment()?;
    Ok(resolved)
}
