//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a(p,q)` and then applies
//! a real Givens rotation, so the update is a 2x2 unitary acting on rows and
//! columns `p`, `q`. Exactly-zero pivots are skipped, which keeps structured
//! sparse inputs (projector differences, GHZ-type states) cheap.

use num_complex::Complex64;

use super::{CMatrix, HERMITIAN_TOL};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;
/// Converged once the off-diagonal Frobenius norm drops below this fraction of the full norm.
const CONVERGED_REL: f64 = 1e-14;
/// Pivots smaller than this fraction of the full norm are left alone.
const SKIP_REL: f64 = 1e-18;

/// Eigenvalues in descending order with (optionally) matching unit eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Option<CMatrix>,
}

/// Real eigenvalues of a Hermitian matrix, largest first.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(a, false)?.values)
}

pub fn hermitian_eigen(a: &CMatrix, with_vectors: bool) -> Result<HermitianEigen> {
    let max_asymmetry = a.hermitian_asymmetry()?;
    if max_asymmetry > HERMITIAN_TOL {
        return Err(Error::NotHermitian { max_asymmetry });
    }
    let n = a.rows();
    // Work on the exactly Hermitian part.
    let mut work = a.clone();
    for i in 0..n {
        work[(i, i)] = Complex64::new(work[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (work[(i, j)] + work[(j, i)].conj()) * 0.5;
            work[(i, j)] = avg;
            work[(j, i)] = avg.conj();
        }
    }
    let mut vectors = with_vectors.then(|| CMatrix::identity(n));

    let scale = work.frobenius_norm();
    if scale > 0.0 {
        let mut converged = false;
        let mut off = off_diagonal_norm(&work);
        for _ in 0..MAX_SWEEPS {
            if off <= CONVERGED_REL * scale {
                converged = true;
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = work[(p, q)];
                    if apq.norm() <= SKIP_REL * scale {
                        continue;
                    }
                    rotate(&mut work, vectors.as_mut(), p, q);
                }
            }
            off = off_diagonal_norm(&work);
        }
        if !converged && off > CONVERGED_REL * scale {
            return Err(Error::NoConvergence {
                sweeps: MAX_SWEEPS,
                off_norm: off,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(j, j)].re.total_cmp(&work[(i, i)].re));
    let values = order.iter().map(|&i| work[(i, i)].re).collect();
    let vectors = vectors.map(|v| {
        let mut sorted = CMatrix::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            for r in 0..n {
                sorted[(r, dst)] = v[(r, src)];
            }
        }
        sorted
    });
    Ok(HermitianEigen { values, vectors })
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Zero `a(p,q)` with `a <- U^dag a U`, accumulating `v <- v U`.
fn rotate(a: &mut CMatrix, v: Option<&mut CMatrix>, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let r = apq.norm();
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let u_pp = Complex64::new(c, 0.0);
    let u_pq = Complex64::new(s, 0.0);
    let u_qp = -phase.conj() * s;
    let u_qq = phase.conj() * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * u_pp + akq * u_qp;
        a[(k, q)] = akp * u_pq + akq * u_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = u_pp.conj() * apk + u_qp.conj() * aqk;
        a[(q, k)] = u_pq.conj() * apk + u_qq.conj() * aqk;
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[(k, p)];
            let vkq = v[(k, q)];
            v[(k, p)] = vkp * u_pp + vkq * u_qp;
            v[(k, q)] = vkp * u_pq + vkq * u_qq;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlin::{dagger, matmul, CVector};

    #[test]
    fn identity_and_pauli_z() {
        assert_eq!(
            hermitian_eigenvalues(&CMatrix::identity(2)).unwrap(),
            vec![1.0, 1.0]
        );
        assert_eq!(
            hermitian_eigenvalues(&CMatrix::pauli_z()).unwrap(),
            vec![1.0, -1.0]
        );
    }

    #[test]
    fn pauli_y_has_complex_eigenvectors() {
        let y = CMatrix::pauli_y();
        let eig = hermitian_eigen(&y, true).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-12);
        assert!((eig.values[1] + 1.0).abs() < 1e-12);
        let v = eig.vectors.unwrap();
        for (col, &lambda) in eig.values.iter().enumerate() {
            let vec = CVector::new((0..2).map(|r| v[(r, col)]).collect()).unwrap();
            let lhs = y.apply(&vec).unwrap();
            let rhs = vec.scale(Complex64::new(lambda, 0.0));
            assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian_and_reports_asymmetry() {
        let a = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        match hermitian_eigenvalues(&a) {
            Err(Error::NotHermitian { max_asymmetry }) => assert_eq!(max_asymmetry, 1.0),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            hermitian_eigenvalues(&CMatrix::zeros(2, 3)),
            Err(Error::NotSquare(2, 3))
        ));
    }

    #[test]
    fn zero_matrix() {
        assert_eq!(
            hermitian_eigenvalues(&CMatrix::zeros(3, 3)).unwrap(),
            vec![0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn eigenvectors_are_unitary() {
        // A dense Hermitian 4x4 with complex off-diagonals.
        let mut a = CMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let re = ((i * 7 + j * 3) % 5) as f64 - 2.0;
                let im = ((i * 2 + j * 5) % 7) as f64 - 3.0;
                a[(i, j)] = Complex64::new(re, im);
            }
        }
        let h = a.add(&dagger(&a)).unwrap();
        let v = hermitian_eigen(&h, true).unwrap().vectors.unwrap();
        let vv = matmul(&dagger(&v), &v).unwrap();
        assert!(vv.max_abs_diff(&CMatrix::identity(4)) < 1e-12);
    }
}
