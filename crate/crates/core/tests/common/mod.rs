//! Shared helpers for the integration tests: seeded randomness, random
//! density matrices, and reference numerics (eigenvalues, matrix
//! exponential) written independently of the library code they check.
#![allow(dead_code)]

use micromaser::DensityMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian via Box-Muller.
pub fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u.ln()).sqrt();
    Complex64::new(r * v.cos(), r * v.sin())
}

/// Random full-rank density matrix: G G^dagger for a Ginibre matrix G,
/// normalized to unit trace and symmetrized exactly.
pub fn random_density(rng: &mut ChaCha8Rng, dim: usize, tail_tol: f64) -> DensityMatrix {
    let g: Vec<Complex64> = (0..dim * dim).map(|_| complex_gaussian(rng)).collect();
    let mut rho = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += g[i * dim + k] * g[j * dim + k].conj();
            }
            rho[i * dim + j] = acc;
        }
    }
    let trace: f64 = (0..dim).map(|i| rho[i * dim + i].re).sum();
    for z in rho.iter_mut() {
        *z /= trace;
    }
    for i in 0..dim {
        rho[i * dim + i] = Complex64::new(rho[i * dim + i].re, 0.0);
        for j in i + 1..dim {
            let avg = 0.5 * (rho[i * dim + j] + rho[j * dim + i].conj());
            rho[i * dim + j] = avg;
            rho[j * dim + i] = avg.conj();
        }
    }
    DensityMatrix::from_elements(dim, rho, tail_tol).expect("random density matrix is valid")
}

/// Random density matrix supported on even photon-number differences:
/// the parity-diagonal part (rho + P rho P) / 2 of a random state.
pub fn random_parity_banded_density(
    rng: &mut ChaCha8Rng,
    dim: usize,
    tail_tol: f64,
) -> DensityMatrix {
    let full = random_density(rng, dim, tail_tol);
    let d = full.dim();
    let mut rho = full.elements().to_vec();
    for n in 0..d {
        for m in 0..d {
            if (n + m) % 2 == 1 {
                rho[n * d + m] = Complex64::new(0.0, 0.0);
            }
        }
    }
    DensityMatrix::from_elements(d, rho, tail_tol).expect("parity projection keeps validity")
}

/// Eigenvalues of a complex Hermitian matrix, ascending. Uses the real
/// symmetric embedding [[X, -Y], [Y, X]] of A = X + iY, whose spectrum is
/// that of A doubled, and a cyclic real Jacobi iteration.
pub fn hermitian_eigenvalues(elements: &[Complex64], dim: usize) -> Vec<f64> {
    assert_eq!(elements.len(), dim * dim);
    let n = 2 * dim;
    let mut m = vec![0.0f64; n * n];
    for i in 0..dim {
        for j in 0..dim {
            let z = elements[i * dim + j];
            m[i * n + j] = z.re;
            m[(i + dim) * n + (j + dim)] = z.re;
            m[i * n + (j + dim)] = -z.im;
            m[(i + dim) * n + j] = z.im;
        }
    }
    let scale: f64 = m
        .iter()
        .map(|x| x * x)
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    for _sweep in 0..120 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off += m[p * n + q] * m[p * n + q];
            }
        }
        if off.sqrt() <= scale * 1e-15 {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() <= scale * 1e-18 {
                    continue;
                }
                let theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = m[i * n + p];
                    let aiq = m[i * n + q];
                    m[i * n + p] = c * aip - s * aiq;
                    m[i * n + q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let api = m[p * n + i];
                    let aqi = m[q * n + i];
                    m[p * n + i] = c * api - s * aqi;
                    m[q * n + i] = s * api + c * aqi;
                }
            }
        }
    }
    // Each eigenvalue of A appears twice in the embedding; keep every
    // second entry of the sorted doubled spectrum.
    let mut doubled: Vec<f64> = (0..n).map(|i| m[i * n + i]).collect();
    doubled.sort_by(f64::total_cmp);
    doubled.into_iter().step_by(2).collect()
}

/// Trace distance (1/2) sum |eig(A - B)| between two states, embedding the
/// smaller basis into the larger.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> f64 {
    let dim = a.dim().max(b.dim());
    let mut diff = vec![Complex64::new(0.0, 0.0); dim * dim];
    for n in 0..dim {
        for m in 0..dim {
            let av = if n < a.dim() && m < a.dim() {
                a.element(n, m)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let bv = if n < b.dim() && m < b.dim() {
                b.element(n, m)
            } else {
                Complex64::new(0.0, 0.0)
            };
            diff[n * dim + m] = av - bv;
        }
    }
    0.5 * hermitian_eigenvalues(&diff, dim)
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
}

pub fn min_eigenvalue(rho: &DensityMatrix) -> f64 {
    hermitian_eigenvalues(rho.elements(), rho.dim())[0]
}

pub fn matmul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik.norm_sqr() == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    out
}

/// Matrix exponential by scaling and squaring with a Taylor series.
pub fn matrix_exp(a: &[Complex64], n: usize) -> Vec<Complex64> {
    assert_eq!(a.len(), n * n);
    let norm1: f64 = (0..n)
        .map(|j| (0..n).map(|i| a[i * n + j].norm()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm1 > 0.5 {
        (norm1 / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings as i32);
    let b: Vec<Complex64> = a.iter().map(|z| z * scale).collect();

    let mut result = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        result[i * n + i] = Complex64::new(1.0, 0.0);
    }
    let mut term = result.clone();
    for k in 1..=40u32 {
        term = matmul(&term, &b, n);
        let inv = 1.0 / k as f64;
        for z in term.iter_mut() {
            *z *= inv;
        }
        let mut tnorm = 0.0f64;
        for (r, t) in result.iter_mut().zip(term.iter()) {
            *r += t;
            tnorm += t.norm_sqr();
        }
        if tnorm.sqrt() < 1e-20 {
            break;
        }
    }
    for _ in 0..squarings {
        result = matmul(&result, &result, n);
    }
    result
}

/// Displacement operator exp(beta a^dagger - conj(beta) a) on a truncated
/// basis of `dim` levels.
pub fn displacement_matrix(dim: usize, beta: Complex64) -> Vec<Complex64> {
    let mut gen = vec![Complex64::new(0.0, 0.0); dim * dim];
    for n in 0..dim - 1 {
        let root = ((n + 1) as f64).sqrt();
        gen[(n + 1) * dim + n] = beta * root;
        gen[n * dim + (n + 1)] = -beta.conj() * root;
    }
    matrix_exp(&gen, dim)
}

pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

pub fn mean_photon_number(rho: &DensityMatrix) -> f64 {
    rho.photon_distribution()
        .iter()
        .map(|&(n, p)| n as f64 * p)
        .sum()
}
