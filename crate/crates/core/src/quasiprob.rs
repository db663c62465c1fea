//! s-parameterized phase-space quasiprobabilities evaluated from Fock-basis
//! density matrices via the displaced-number-state series
//!
//!   P(beta; s) = (2/pi) sum_k (-1)^k (1+s)^k / (1-s)^(k+1) <beta,k|rho|beta,k>
//!
//! where |beta,k> = D(beta)|k>. s = 0 gives the Wigner function; s = -1
//! collapses the series to its k = 0 term, the Husimi function.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::state::{ln_factorial, DensityMatrix};

/// Hard cap on grid sizes, protecting against typo-sized lattices.
pub const MAX_GRID_POINTS: usize = 1 << 22;

const SERIES_TAIL_TOL: f64 = 1e-12;

/// Matrix element <m|D(beta)|n> of the displacement operator.
///
/// Evaluated in closed form: a Gaussian prefactor, a log-domain factorial
/// ratio, and an associated Laguerre polynomial computed by the upward
/// three-term recurrence with overflow rescaling. Stable for indices well
/// beyond 300; the result magnitude never exceeds 1.
pub fn displaced_number_overlap(m: usize, n: usize, beta: Complex64) -> Complex64 {
    let x = beta.norm_sqr();
    if x == 0.0 {
        return if m == n {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    let (small, big, swapped) = if m >= n { (n, m, false) } else { (m, n, true) };
    let k = big - small;

    // L_small^{(k)}(x) with a split magnitude: value = l_cur * exp(log_scale).
    let mut l_prev = 1.0_f64;
    let mut l_cur = if small == 0 { 1.0 } else { 1.0 + k as f64 - x };
    let mut log_scale = 0.0_f64;
    for j in 1..small {
        let jf = j as f64;
        let next =
            ((2.0 * jf + k as f64 + 1.0 - x) * l_cur - (jf + k as f64) * l_prev) / (jf + 1.0);
        l_prev = l_cur;
        l_cur = next;
        if l_cur.abs() > 1e250 {
            l_cur *= 1e-250;
            l_prev *= 1e-250;
            log_scale += 250.0 * std::f64::consts::LN_10;
        }
    }

    let ln_prefactor =
        -0.5 * x + 0.5 * (ln_factorial(small) - ln_factorial(big)) + 0.5 * k as f64 * x.ln();
    let magnitude = l_cur * (ln_prefactor + log_scale).exp();

    let theta = beta.arg();
    let phase = if swapped {
        // <m|D|n> for m < n carries (-conj(beta))^(n-m).
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign * Complex64::from_polar(1.0, -(k as f64) * theta)
    } else {
        Complex64::from_polar(1.0, k as f64 * theta)
    };
    phase * magnitude
}

/// Coefficients <n|D(beta)|0> for n = 0..dim: the coherent state |beta>.
fn coherent_column(dim: usize, beta: Complex64) -> Vec<Complex64> {
    let x = beta.norm_sqr();
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    if x == 0.0 {
        col[0] = Complex64::new(1.0, 0.0);
        return col;
    }
    let ln_mod = beta.norm().ln();
    let theta = beta.arg();
    for (n, c) in col.iter_mut().enumerate() {
        let ln_mag = -0.5 * x + n as f64 * ln_mod - 0.5 * ln_factorial(n);
        *c = Complex64::from_polar(ln_mag.exp(), n as f64 * theta);
    }
    col
}

/// In-place step |beta,k> -> |beta,k+1> from the operator identity
/// D(beta) a^dag = (a^dag - conj(beta)) D(beta):
/// <n|D|k+1> = (sqrt(n) <n-1|D|k> - conj(beta) <n|D|k>) / sqrt(k+1).
fn advance_column(col: &mut [Complex64], beta: Complex64, k: usize) {
    let inv = 1.0 / ((k + 1) as f64).sqrt();
    let bc = beta.conj();
    let mut prev = Complex64::new(0.0, 0.0);
    for (n, c) in col.iter_mut().enumerate() {
        let cur = *c;
        let root_n = if n == 0 { 0.0 } else { (n as f64).sqrt() };
        *c = (root_n * prev - bc * cur) * inv;
        prev = cur;
    }
}

fn check_s(s: f64) -> Result<()> {
    if !((-1.0..1.0).contains(&s)) {
        return Err(Error::InvalidParameter(format!(
            "quasiprobability order s must lie in [-1, 1), got {s}"
        )));
    }
    Ok(())
}

/// Quasiprobability P(beta; s) of a field state at one phase-space point.
///
/// The series index is extended adaptively until the remaining tail is
/// certified below 1e-12 by one of two bounds. For s <= 0 the term weights
/// w_k = <beta,k|rho|beta,k> sum to the trace and the powers of
/// (1+s)/(1-s) only shrink, so the uncovered mass bounds the tail directly.
/// For every s the column recurrence contracts once k exceeds
/// (sqrt(d-1) + |beta|)^2 times the power ratio, giving a geometric bound
/// from the current column norm alone; that one cannot stall on rounding
/// and also certifies the s > 0 regime, where the weights decay
/// factorially against the growing powers.
///
/// The certificates control truncation, not f64 rounding: for s > 0 the
/// summed terms peak near exp(2s|beta|^2/(1-s)) times the result, so the
/// returned value carries roundoff amplified by that factor.
pub fn quasiprob_value(rho: &DensityMatrix, beta: Complex64, s: f64) -> Result<f64> {
    check_s(s)?;
    let d = rho.dim();
    let elements = rho.elements();
    let prefactor = 2.0 / (std::f64::consts::PI * (1.0 - s));
    let ratio = (1.0 + s) / (1.0 - s);
    let gain = (d.saturating_sub(1) as f64).sqrt() + beta.norm();

    let mut col = coherent_column(d, beta);
    let mut v = vec![Complex64::new(0.0, 0.0); d];

    let mut acc = 0.0_f64;
    let mut acc_im = 0.0_f64;
    let mut term_mag = 0.0_f64;
    // Compensated sum: the mass certificate needs `covered` to approach the
    // trace without stalling on accumulated rounding.
    let mut covered = 0.0_f64;
    let mut covered_c = 0.0_f64;
    let mut term_scale = prefactor; // prefactor * (-ratio)^k
    let mut ratio_pow = 1.0_f64; // ratio^k
    let budget = beta.norm_sqr() * ratio.max(1.0);
    let k_cap = 4 * (d + budget.ceil() as usize + 8) + 256;

    for k in 0..=k_cap {
        if k > 0 {
            advance_column(&mut col, beta, k - 1);
            term_scale *= -ratio;
            ratio_pow *= ratio;
        }
        let colmass: f64 = col.iter().map(|c| c.norm_sqr()).sum();
        let mut finished = colmass == 0.0; // column annihilated: every later term is exactly zero
        if !finished {
            for (n, vn) in v.iter_mut().enumerate() {
                let row = &elements[n * d..(n + 1) * d];
                let mut sum = Complex64::new(0.0, 0.0);
                for (m, c) in col.iter().enumerate() {
                    sum += row[m] * c;
                }
                *vn = sum;
            }
            let mut w = Complex64::new(0.0, 0.0);
            for (c, vn) in col.iter().zip(v.iter()) {
                w += c.conj() * vn;
            }
            let term = term_scale * w.re;
            acc += term;
            acc_im += term_scale * w.im;
            term_mag += term.abs();
            let y = w.re.max(0.0) - covered_c;
            let t = covered + y;
            covered_c = (t - covered) - y;
            covered = t;

            if ratio <= 1.0 {
                let certified = prefactor * ratio_pow * ratio * (1.0 - covered).max(0.0);
                finished = certified < SERIES_TAIL_TOL;
            }
            if !finished {
                let q = ratio * gain * gain / ((k + 1) as f64);
                if q < 1.0 {
                    let certified = prefactor * ratio_pow * colmass * q / (1.0 - q);
                    finished = certified < SERIES_TAIL_TOL;
                }
            }
        }
        if finished {
            if !acc.is_finite() {
                return Err(Error::InternalConsistency(
                    "quasiprobability series overflowed".into(),
                ));
            }
            let realness = acc_im.abs();
            if realness > 1e-10_f64.max(1e-13 * term_mag) {
                return Err(Error::InternalConsistency(format!(
                    "quasiprobability imaginary residue {realness:.3e}"
                )));
            }
            return Ok(acc);
        }
    }
    Err(Error::InternalConsistency(format!(
        "quasiprobability series did not converge within {k_cap} terms"
    )))
}

/// Rectangular lattice of phase-space points for grid evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
    pub n_re: usize,
    pub n_im: usize,
    /// Quasiprobability order parameter, in [-1, 1).
    pub s: f64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        check_s(self.s)?;
        let bounds = [self.re_min, self.re_max, self.im_min, self.im_max];
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidParameter("grid bounds must be finite".into()));
        }
        if self.re_min > self.re_max || self.im_min > self.im_max {
            return Err(Error::InvalidParameter(
                "grid bounds must satisfy min <= max on both axes".into(),
            ));
        }
        if self.n_re == 0 || self.n_im == 0 {
            return Err(Error::InvalidParameter(
                "grid must have at least one point per axis".into(),
            ));
        }
        if self.n_re.saturating_mul(self.n_im) > MAX_GRID_POINTS {
            return Err(Error::InvalidParameter(format!(
                "grid of {}x{} points exceeds the maximum of {MAX_GRID_POINTS}",
                self.n_re, self.n_im
            )));
        }
        Ok(())
    }

    fn axis_point(min: f64, max: f64, count: usize, i: usize) -> f64 {
        if count == 1 {
            min
        } else {
            min + (max - min) * i as f64 / (count - 1) as f64
        }
    }

    pub fn re_point(&self, i: usize) -> f64 {
        Self::axis_point(self.re_min, self.re_max, self.n_re, i)
    }

    pub fn im_point(&self, j: usize) -> f64 {
        Self::axis_point(self.im_min, self.im_max, self.n_im, j)
    }
}

/// Quasiprobability values on a rectangular lattice, row-major with the
/// real axis outermost: `values[i * n_im + j]` sits at
/// (re_point(i), im_point(j)).
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiprobGrid {
    pub spec: GridSpec,
    pub values: Vec<f64>,
}

impl QuasiprobGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.n_im + j]
    }

    /// Riemann sum of the surface; approximates Tr rho on a wide enough
    /// grid. None when an axis has a single point (no cell area). Summed in
    /// a fixed order so results are independent of evaluation parallelism.
    pub fn quadrature(&self) -> Option<f64> {
        if self.spec.n_re < 2 || self.spec.n_im < 2 {
            return None;
        }
        let dre = (self.spec.re_max - self.spec.re_min) / (self.spec.n_re - 1) as f64;
        let dim = (self.spec.im_max - self.spec.im_min) / (self.spec.n_im - 1) as f64;
        Some(self.values.iter().sum::<f64>() * dre * dim)
    }
}

/// Evaluate the quasiprobability on every lattice point of `spec`.
/// Points are independent and evaluated in parallel.
pub fn quasiprob_grid(rho: &DensityMatrix, spec: &GridSpec) -> Result<QuasiprobGrid> {
    spec.validate()?;
    let total = spec.n_re * spec.n_im;
    let values: Result<Vec<f64>> = (0..total)
        .into_par_iter()
        .map(|idx| {
            let i = idx / spec.n_im;
            let j = idx % spec.n_im;
            let beta = Complex64::new(spec.re_point(i), spec.im_point(j));
            quasiprob_value(rho, beta, spec.s)
        })
        .collect();
    Ok(QuasiprobGrid {
        spec: *spec,
        values: values?,
    })
}
