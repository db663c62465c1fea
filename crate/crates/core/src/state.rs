//! Truncated Fock-basis density matrices with adaptive cutoff, the initial
//! states used by the experiments, and scalar field diagnostics.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

/// Default bound on the probability mass allowed in the top two diagonal
/// entries of a truncated matrix.
pub const DEFAULT_TAIL_TOL: f64 = 1e-10;

/// Tolerances for the representation invariants.
pub const HERMITICITY_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-10;
pub const MIN_EIGENVALUE_TOL: f64 = -1e-8;

/// Cavity-field density matrix on the Fock basis {|0>, ..., |dim-1>}.
///
/// Invariants (checked by [`DensityMatrix::validate`]):
/// - Hermitian elementwise to 1e-12.
/// - Unit trace to 1e-10.
/// - Smallest eigenvalue >= -1e-8.
/// - Sum of the top two diagonal entries <= `tail_tol` (the truncation is
///   meaningful only while the occupied band stays below the cutoff).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    // Row-major, elements[n * dim + m] = rho(n, m).
    elements: Vec<Complex64>,
    tail_tol: f64,
}

/// Scalar diagnostics of a field state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldDiagnostics {
    /// Purity deficit 1 - Tr(rho^2); zero exactly for pure states.
    pub purity_deficit: f64,
    /// Mean photon number from the diagonal.
    pub mean_n: f64,
    /// Photon-number variance from the diagonal moments.
    pub variance_n: f64,
    /// Mandel Q = variance/mean - 1; undefined for a field with no photons.
    pub mandel_q: Option<f64>,
}

fn check_tail_tol(tail_tol: f64) -> Result<()> {
    if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
        return Err(Error::InvalidParameter(format!(
            "tail_tol must lie in (0, 1e-6], got {tail_tol}"
        )));
    }
    Ok(())
}

fn diagonal_state(probs: Vec<f64>, tail_tol: f64) -> DensityMatrix {
    let dim = probs.len();
    let mut elements = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (n, p) in probs.iter().enumerate() {
        elements[n * dim + n] = Complex64::new(*p, 0.0);
    }
    DensityMatrix {
        dim,
        elements,
        tail_tol,
    }
}

/// Grow a diagonal weight sequence until the renormalized top two entries
/// fall below half the tail tolerance, then renormalize to unit trace.
fn truncate_and_renormalize(
    weight: impl Fn(usize) -> f64,
    start_dim: usize,
    tail_tol: f64,
) -> Vec<f64> {
    let mut dim = start_dim.max(4);
    loop {
        let probs: Vec<f64> = (0..dim).map(&weight).collect();
        let sum: f64 = probs.iter().sum();
        let top2 = probs[dim - 1] + probs[dim - 2];
        // Judge the tail after renormalization so the stored state cannot
        // sit marginally above its own invariant.
        if sum > 0.0 && top2 / sum <= 0.5 * tail_tol {
            return probs.into_iter().map(|p| p / sum).collect();
        }
        dim += 2;
    }
}

impl DensityMatrix {
    /// Thermal (maximum-entropy) field with the given mean photon number.
    ///
    /// Diagonal geometric distribution p(n) = nbar^n / (nbar+1)^(n+1),
    /// truncated so the tail invariant holds and renormalized to unit trace.
    pub fn thermal_state(mean_n: f64, tail_tol: f64) -> Result<Self> {
        if !mean_n.is_finite() || mean_n < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "thermal mean_n must be finite and nonnegative, got {mean_n}"
            )));
        }
        check_tail_tol(tail_tol)?;
        let ratio = mean_n / (mean_n + 1.0);
        let base = 1.0 / (mean_n + 1.0);
        // Geometric decay: p(n) = base * ratio^n, evaluated in log domain to
        // stay finite at large cutoffs.
        let weight = move |n: usize| {
            if ratio == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (base.ln() + n as f64 * ratio.ln()).exp()
            }
        };
        let start = (4.0 * mean_n).ceil() as usize + 4;
        Ok(diagonal_state(
            truncate_and_renormalize(weight, start, tail_tol),
            tail_tol,
        ))
    }

    /// Coherent state of intensity `mean_n` with fully randomized phase:
    /// a diagonal Poissonian mixture.
    pub fn dephased_coherent_state(mean_n: f64, tail_tol: f64) -> Result<Self> {
        if !mean_n.is_finite() || mean_n < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "dephased coherent mean_n must be finite and nonnegative, got {mean_n}"
            )));
        }
        check_tail_tol(tail_tol)?;
        let weight = move |n: usize| {
            if mean_n == 0.0 {
                if n == 0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-mean_n + n as f64 * mean_n.ln() - ln_factorial(n)).exp()
            }
        };
        let start = (mean_n + 6.0 * (mean_n + 1.0).sqrt()).ceil() as usize + 4;
        Ok(diagonal_state(
            truncate_and_renormalize(weight, start, tail_tol),
            tail_tol,
        ))
    }

    /// Number state |n><n|. The basis is padded above `dim` when needed so
    /// the occupied level sits below the tail band.
    pub fn fock_state(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidParameter(format!(
                "fock level n={n} does not fit in a basis of dim={dim}"
            )));
        }
        let actual = dim.max(n + 3);
        let mut probs = vec![0.0; actual];
        probs[n] = 1.0;
        Ok(diagonal_state(probs, DEFAULT_TAIL_TOL))
    }

    /// Build a state from explicit row-major elements.
    ///
    /// Hermiticity and unit trace are enforced here; positivity is the
    /// caller's responsibility (checked fully by [`validate`]). If the top
    /// two diagonal entries carry more than `tail_tol`, the basis is padded
    /// by two levels so the tail invariant holds on the stored matrix.
    ///
    /// [`validate`]: DensityMatrix::validate
    pub fn from_elements(dim: usize, elements: Vec<Complex64>, tail_tol: f64) -> Result<Self> {
        check_tail_tol(tail_tol)?;
        if dim == 0 || elements.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "element buffer of length {} does not match dim {}",
                elements.len(),
                dim
            )));
        }
        for n in 0..dim {
            for m in n..dim {
                let diff = (elements[n * dim + m] - elements[m * dim + n].conj()).norm();
                if diff > HERMITICITY_TOL {
                    return Err(Error::InvalidParameter(format!(
                        "matrix is not Hermitian at ({n},{m}): asymmetry {diff:.3e}"
                    )));
                }
            }
        }
        let trace: f64 = (0..dim).map(|n| elements[n * dim + n].re).sum();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidParameter(format!(
                "trace {trace} is not 1 within {TRACE_TOL:.0e}"
            )));
        }
        let state = DensityMatrix {
            dim,
            elements,
            tail_tol,
        };
        if state.top_band_mass(2) > tail_tol {
            Ok(state.ensure_headroom(2))
        } else {
            Ok(state)
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// Element rho(n, m).
    pub fn element(&self, n: usize, m: usize) -> Complex64 {
        self.elements[n * self.dim + m]
    }

    /// Row-major element buffer.
    pub fn elements(&self) -> &[Complex64] {
        &self.elements
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim)
            .map(|n| self.elements[n * self.dim + n].re)
            .sum()
    }

    /// Probability mass on the top `band` diagonal entries.
    pub(crate) fn top_band_mass(&self, band: usize) -> f64 {
        let lo = self.dim.saturating_sub(band);
        (lo..self.dim)
            .map(|n| self.elements[n * self.dim + n].re)
            .sum()
    }

    pub(crate) fn from_parts(dim: usize, elements: Vec<Complex64>, tail_tol: f64) -> Self {
        debug_assert_eq!(elements.len(), dim * dim);
        DensityMatrix {
            dim,
            elements,
            tail_tol,
        }
    }

    /// Extend the basis by `extra` zero-padded levels. All diagnostics are
    /// unchanged; only the cutoff moves.
    pub fn ensure_headroom(&self, extra: usize) -> Self {
        if extra == 0 {
            return self.clone();
        }
        let nd = self.dim + extra;
        let mut elements = vec![Complex64::new(0.0, 0.0); nd * nd];
        for n in 0..self.dim {
            let src = &self.elements[n * self.dim..(n + 1) * self.dim];
            elements[n * nd..n * nd + self.dim].copy_from_slice(src);
        }
        DensityMatrix {
            dim: nd,
            elements,
            tail_tol: self.tail_tol,
        }
    }

    /// Purity deficit, photon-number mean and variance, and Mandel Q.
    pub fn diagnostics(&self) -> FieldDiagnostics {
        let purity: f64 = self.elements.iter().map(|z| z.norm_sqr()).sum();
        let mut mean = 0.0;
        let mut second = 0.0;
        for n in 0..self.dim {
            let p = self.elements[n * self.dim + n].re;
            mean += n as f64 * p;
            second += (n as f64) * (n as f64) * p;
        }
        let variance = (second - mean * mean).max(0.0);
        let mandel_q = if mean > 0.0 {
            Some(variance / mean - 1.0)
        } else {
            None
        };
        FieldDiagnostics {
            purity_deficit: (1.0 - purity).max(0.0),
            mean_n: mean,
            variance_n: variance,
            mandel_q,
        }
    }

    /// Photon-number distribution [(n, P(n))] from the diagonal.
    pub fn photon_distribution(&self) -> Vec<(usize, f64)> {
        (0..self.dim)
            .map(|n| (n, self.elements[n * self.dim + n].re))
            .collect()
    }

    /// Check every representation invariant, reporting the first violation.
    pub fn validate(&self) -> Result<()> {
        for n in 0..self.dim {
            for m in n..self.dim {
                let diff = (self.elements[n * self.dim + m]
                    - self.elements[m * self.dim + n].conj())
                .norm();
                if diff > HERMITICITY_TOL {
                    return Err(Error::InternalConsistency(format!(
                        "hermiticity violated at ({n},{m}): {diff:.3e}"
                    )));
                }
            }
        }
        let trace = self.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InternalConsistency(format!(
                "trace drifted to {trace}"
            )));
        }
        let min_eig = linalg::min_eigenvalue(&self.elements, self.dim);
        if min_eig < MIN_EIGENVALUE_TOL {
            return Err(Error::InternalConsistency(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        let tail = self.top_band_mass(2);
        if tail > self.tail_tol {
            return Err(Error::InternalConsistency(format!(
                "tail mass {tail:.3e} exceeds tolerance {:.3e}",
                self.tail_tol
            )));
        }
        Ok(())
    }
}

/// ln(n!) via a cached running sum; exact enough for n well beyond 300.
pub(crate) fn ln_factorial(n: usize) -> f64 {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = Vec::with_capacity(1024);
        t.push(0.0);
        for k in 1..1024usize {
            t.push(t[k - 1] + (k as f64).ln());
        }
        t
    });
    if n < table.len() {
        table[n]
    } else {
        let mut acc = table[table.len() - 1];
        for k in table.len()..=n {
            acc += (k as f64).ln();
        }
        acc
    }
}
