//! Structured experiments on top of the kick map: per-atom evolution
//! records, interaction-time sweeps, optimum-time selection, and saturation
//! detection.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kick::{apply_kick, AtomPreparation, InteractionParams};
use crate::state::DensityMatrix;

/// Default saturation window (atoms) and purity tolerance.
pub const SATURATION_WINDOW: usize = 20;
pub const SATURATION_TOL: f64 = 5e-3;

/// Initial cavity field of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    Thermal { mean_n: f64 },
    DephasedCoherent { mean_n: f64 },
    Fock { n: usize },
}

impl InitialState {
    pub fn build(&self, tail_tol: f64) -> Result<DensityMatrix> {
        match *self {
            InitialState::Thermal { mean_n } => DensityMatrix::thermal_state(mean_n, tail_tol),
            InitialState::DephasedCoherent { mean_n } => {
                DensityMatrix::dephased_coherent_state(mean_n, tail_tol)
            }
            InitialState::Fock { n } => DensityMatrix::fock_state(n, n + 1),
        }
    }
}

/// Full description of one pumping experiment.
///
/// The default mirrors the reference working point: a thermal field with
/// ten photons on average, balanced atoms (a = b = 1/sqrt(2), phi = 0),
/// Delta = chi = lambda, transit time lambda*T = 12.2, and 200 atoms.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub initial_state: InitialState,
    pub atom: AtomPreparation,
    pub params: InteractionParams,
    pub n_atoms: usize,
    /// Record a photon-number snapshot after every multiple of this many
    /// atoms; None disables snapshots.
    pub snapshot_every: Option<usize>,
    pub tail_tol: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            initial_state: InitialState::Thermal { mean_n: 10.0 },
            atom: AtomPreparation::balanced(),
            params: InteractionParams::new(1.0, 1.0, 12.2)
                .expect("default interaction parameters are valid"),
            n_atoms: 200,
            snapshot_every: None,
            tail_tol: 1e-10,
        }
    }
}

/// Diagnostics after N atoms have crossed the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionRow {
    pub n_atoms: usize,
    pub purity_deficit: f64,
    pub mean_n: f64,
    pub mandel_q: Option<f64>,
}

/// Per-atom time series of one experiment. Row 0 is the initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionRecord {
    pub rows: Vec<EvolutionRow>,
    /// Photon-number snapshots (N, P(0..dim)).
    pub snapshots: Vec<(usize, Vec<f64>)>,
    /// First atom count at which purity stopped moving, judged with the
    /// default window and tolerance.
    pub saturation_atom: Option<usize>,
    pub final_state: DensityMatrix,
}

/// One row of an interaction-time sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub lambda_t: f64,
    pub zeta_final: f64,
    pub mean_n_final: f64,
}

/// Winner of an optimum-interaction-time search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimumTime {
    pub lambda_t: f64,
    pub zeta_final: f64,
    pub mean_n_final: f64,
}

fn row_from_state(n_atoms: usize, state: &DensityMatrix) -> EvolutionRow {
    let d = state.diagnostics();
    EvolutionRow {
        n_atoms,
        purity_deficit: d.purity_deficit,
        mean_n: d.mean_n,
        mandel_q: d.mandel_q,
    }
}

/// Run the configured pump chain, recording diagnostics after every atom.
pub fn evolve_and_record(cfg: &ExperimentConfig) -> Result<EvolutionRecord> {
    if let Some(k) = cfg.snapshot_every {
        if k == 0 {
            return Err(Error::InvalidParameter(
                "snapshot_every must be at least 1".into(),
            ));
        }
    }
    let mut state = cfg.initial_state.build(cfg.tail_tol)?;
    let mut rows = Vec::with_capacity(cfg.n_atoms + 1);
    rows.push(row_from_state(0, &state));
    let mut snapshots = Vec::new();
    for n in 1..=cfg.n_atoms {
        state = apply_kick(&state, &cfg.atom, &cfg.params)?;
        rows.push(row_from_state(n, &state));
        if let Some(k) = cfg.snapshot_every {
            if n % k == 0 {
                let probs = state.photon_distribution().into_iter().map(|(_, p)| p);
                snapshots.push((n, probs.collect()));
            }
        }
    }
    let saturation_atom = detect_saturation(&rows, SATURATION_WINDOW, SATURATION_TOL);
    Ok(EvolutionRecord {
        rows,
        snapshots,
        saturation_atom,
        final_state: state,
    })
}

/// Final diagnostics after the configured atom count, for each candidate
/// transit time. Rows are independent, evaluated in parallel, and returned
/// sorted by transit time.
pub fn sweep_interaction_time(
    cfg: &ExperimentConfig,
    lambda_t_values: &[f64],
) -> Result<Vec<SweepRow>> {
    for &t in lambda_t_values {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sweep transit times must be finite and nonnegative, got {t}"
            )));
        }
    }
    let mut rows: Vec<SweepRow> = lambda_t_values
        .par_iter()
        .map(|&lambda_t| -> Result<SweepRow> {
            let point = ExperimentConfig {
                params: cfg.params.with_lambda_t(lambda_t)?,
                snapshot_every: None,
                ..cfg.clone()
            };
            let record = evolve_and_record(&point)?;
            let last = record.rows.last().expect("record always has row 0");
            Ok(SweepRow {
                lambda_t,
                zeta_final: last.purity_deficit,
                mean_n_final: last.mean_n,
            })
        })
        .collect::<Result<Vec<SweepRow>>>()?;
    rows.sort_by(|x, y| x.lambda_t.total_cmp(&y.lambda_t));
    Ok(rows)
}

/// Candidate transit time with the smallest final purity deficit among
/// those keeping the final mean photon number at or above `energy_floor`
/// (default: the initial state's mean). Ties go to the smaller transit
/// time. Ok(None) when no candidate satisfies the floor.
pub fn find_optimum_time(
    cfg: &ExperimentConfig,
    lambda_t_values: &[f64],
    energy_floor: Option<f64>,
) -> Result<Option<OptimumTime>> {
    if lambda_t_values.is_empty() {
        return Err(Error::InvalidParameter(
            "optimum search needs at least one candidate transit time".into(),
        ));
    }
    let floor = match energy_floor {
        Some(f) => f,
        None => cfg.initial_state.build(cfg.tail_tol)?.diagnostics().mean_n,
    };
    let rows = sweep_interaction_time(cfg, lambda_t_values)?;
    let mut best: Option<OptimumTime> = None;
    for row in rows {
        if row.mean_n_final < floor {
            continue;
        }
        // Strict comparison on rows sorted by ascending lambda_t breaks
        // ties toward the smaller transit time.
        if best.map_or(true, |b| row.zeta_final < b.zeta_final) {
            best = Some(OptimumTime {
                lambda_t: row.lambda_t,
                zeta_final: row.zeta_final,
                mean_n_final: row.mean_n_final,
            });
        }
    }
    Ok(best)
}

/// First atom count N >= window at which the purity deficit varied by at
/// most `tol` across the trailing `window` recorded values (rows N-window+1
/// through N). None if that never happens.
///
/// Panics if `window < 2`.
pub fn detect_saturation(rows: &[EvolutionRow], window: usize, tol: f64) -> Option<usize> {
    assert!(window >= 2, "saturation window must be at least 2");
    for end in window..rows.len() {
        let slice = &rows[end + 1 - window..=end];
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for r in slice {
            lo = lo.min(r.purity_deficit);
            hi = hi.max(r.purity_deficit);
        }
        if hi - lo <= tol {
            return Some(rows[end].n_atoms);
        }
    }
    None
}
