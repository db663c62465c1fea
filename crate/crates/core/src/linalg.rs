//! Minimal dense Hermitian eigenvalue routine used by state validation and
//! by positivity checks in tests. Only eigenvalues are needed, so a cyclic
//! complex Jacobi iteration is enough and keeps the crate dependency-free.

use num_complex::Complex64;

/// Eigenvalues of a Hermitian matrix given in row-major order, ascending.
///
/// The input is not required to be exactly Hermitian; it is symmetrized
/// first so that tiny elementwise asymmetry cannot destabilize the sweep.
pub(crate) fn hermitian_eigenvalues(elements: &[Complex64], dim: usize) -> Vec<f64> {
    assert_eq!(elements.len(), dim * dim);
    if dim == 0 {
        return Vec::new();
    }
    let mut a: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let h = 0.5 * (elements[i * dim + j] + elements[j * dim + i].conj());
            a[i * dim + j] = h;
        }
        a[i * dim + i] = Complex64::new(a[i * dim + i].re, 0.0);
    }

    let scale: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let off_target = scale * 1e-14 + f64::MIN_POSITIVE;

    for _sweep in 0..60 {
        let off: f64 = (0..dim)
            .flat_map(|p| ((p + 1)..dim).map(move |q| (p, q)))
            .map(|(p, q)| 2.0 * a[p * dim + q].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= off_target {
            break;
        }
        let skip = off_target / (dim as f64 * dim as f64);
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[p * dim + q];
                let r = apq.norm();
                if r <= skip {
                    continue;
                }
                let phase = apq / r;
                let tau = (a[q * dim + q].re - a[p * dim + p].re) / (2.0 * r);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let w = phase * (t * c);

                // Column transform B = A J, then row transform A' = J^H B.
                for i in 0..dim {
                    let aip = a[i * dim + p];
                    let aiq = a[i * dim + q];
                    a[i * dim + p] = c * aip - w.conj() * aiq;
                    a[i * dim + q] = w * aip + c * aiq;
                }
                for i in 0..dim {
                    let bpi = a[p * dim + i];
                    let bqi = a[q * dim + i];
                    a[p * dim + i] = c * bpi - w * bqi;
                    a[q * dim + i] = w.conj() * bpi + c * bqi;
                }
                a[p * dim + q] = Complex64::new(0.0, 0.0);
                a[q * dim + p] = Complex64::new(0.0, 0.0);
                a[p * dim + p] = Complex64::new(a[p * dim + p].re, 0.0);
                a[q * dim + q] = Complex64::new(a[q * dim + q].re, 0.0);
            }
        }
    }

    let mut eig: Vec<f64> = (0..dim).map(|i| a[i * dim + i].re).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Smallest eigenvalue of a Hermitian matrix (row-major).
pub(crate) fn min_eigenvalue(elements: &[Complex64], dim: usize) -> f64 {
    hermitian_eigenvalues(elements, dim)
        .first()
        .copied()
        .unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_eigenvalues_pass_through() {
        let d = 4;
        let mut a = vec![Complex64::new(0.0, 0.0); d * d];
        for (i, v) in [3.0, -1.0, 0.5, 2.0].iter().enumerate() {
            a[i * d + i] = Complex64::new(*v, 0.0);
        }
        let eig = hermitian_eigenvalues(&a, d);
        assert!((eig[0] + 1.0).abs() < 1e-14);
        assert!((eig[3] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn two_by_two_complex_block_matches_closed_form() {
        // [[1, 2i], [-2i, -1]] has eigenvalues +-sqrt(5).
        let a = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.0, -2.0),
            Complex64::new(-1.0, 0.0),
        ];
        let eig = hermitian_eigenvalues(&a, 2);
        let s5 = 5.0_f64.sqrt();
        assert!((eig[0] + s5).abs() < 1e-13);
        assert!((eig[1] - s5).abs() < 1e-13);
    }

    #[test]
    fn eigenvalue_sum_and_square_sum_match_traces() {
        // Trace and Frobenius norm are basis independent; compare both
        // against the Jacobi output on a fixed Hermitian matrix.
        let d = 6;
        let mut a = vec![Complex64::new(0.0, 0.0); d * d];
        let mut seed = 0x9e3779b97f4a7c15_u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for i in 0..d {
            for j in i..d {
                let z = if i == j {
                    Complex64::new(next(), 0.0)
                } else {
                    Complex64::new(next(), next())
                };
                a[i * d + j] = z;
                a[j * d + i] = z.conj();
            }
        }
        let tr: f64 = (0..d).map(|i| a[i * d + i].re).sum();
        let fr: f64 = a.iter().map(|z| z.norm_sqr()).sum();
        let eig = hermitian_eigenvalues(&a, d);
        let tr_e: f64 = eig.iter().sum();
        let fr_e: f64 = eig.iter().map(|x| x * x).sum();
        assert!((tr - tr_e).abs() < 1e-12 * (1.0 + tr.abs()));
        assert!((fr - fr_e).abs() < 1e-12 * (1.0 + fr));
    }
}
