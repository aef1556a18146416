//! Dense reference computations.
//!
//! Everything here works on plain [`DenseMatrix`] values and shares no code
//! with the structured factorization, so it can be used to check it.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

const PIVOT_FLOOR: f64 = 1e-300;

/// Doolittle LU without pivoting: `A = L R`, `L` unit lower triangular.
/// A zero pivot yields [`Error::ZeroPivot`] with the 1-based step.
pub fn dense_lu_no_pivot(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    if !a.is_square() {
        return Err(Error::InvalidDimension("LU needs a square matrix".into()));
    }
    let n = a.rows();
    let mut u = a.clone();
    let mut l = DenseMatrix::identity(n);
    for k in 0..n {
        let pivot = u[(k, k)];
        if !(pivot.abs() >= PIVOT_FLOOR) {
            return Err(Error::ZeroPivot { step: k + 1 });
        }
        for i in (k + 1)..n {
            let factor = u[(i, k)] / pivot;
            if factor == 0.0 {
                continue;
            }
            l[(i, k)] = factor;
            u[(i, k)] = 0.0;
            for j in (k + 1)..n {
                let ukj = u[(k, j)];
                u[(i, j)] -= factor * ukj;
            }
        }
    }
    Ok((l, u))
}

/// LU with partial pivoting, stored compactly; returns `(lu, perm, sign)`.
fn lu_partial_pivot(a: &DenseMatrix) -> Result<(DenseMatrix, Vec<usize>)> {
    let n = a.rows();
    let mut lu = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&x, &y| lu[(x, k)].abs().total_cmp(&lu[(y, k)].abs()))
            .expect("non-empty range");
        if !(lu[(p, k)].abs() >= PIVOT_FLOOR) {
            return Err(Error::Singular);
        }
        if p != k {
            perm.swap(p, k);
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
        }
        let pivot = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / pivot;
            lu[(i, k)] = factor;
            if factor == 0.0 {
                continue;
            }
            for j in (k + 1)..n {
                let ukj = lu[(k, j)];
                lu[(i, j)] -= factor * ukj;
            }
        }
    }
    Ok((lu, perm))
}

fn column_dominant(a: &DenseMatrix) -> bool {
    let n = a.rows();
    (0..n).all(|k| {
        let off: f64 = (0..n).filter(|&i| i != k).map(|i| a[(i, k)].abs()).sum();
        a[(k, k)].abs() > off
    })
}

/// Dense inverse. Column diagonally dominant inputs go through the no-pivot
/// LU; everything else through partial pivoting.
pub fn dense_inverse(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::InvalidDimension("inverse needs a square matrix".into()));
    }
    let n = a.rows();
    let (lu, perm) = if column_dominant(a) {
        let (l, u) = dense_lu_no_pivot(a)?;
        // pack into one array so the solve below is shared
        let packed = DenseMatrix::from_fn(n, n, |i, j| if i > j { l[(i, j)] } else { u[(i, j)] });
        (packed, (0..n).collect())
    } else {
        lu_partial_pivot(a)?
    };

    let mut inv = DenseMatrix::zeros(n, n);
    let mut x = vec![0.0; n];
    for col in 0..n {
        // P A = L U, so A^{-1} e_col solves L U x = P e_col
        for (i, xi) in x.iter_mut().enumerate() {
            *xi = if perm[i] == col { 1.0 } else { 0.0 };
        }
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= lu[(i, k)] * x[k];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in (i + 1)..n {
                s -= lu[(i, k)] * x[k];
            }
            x[i] = s / lu[(i, i)];
        }
        for i in 0..n {
            inv[(i, col)] = x[i];
        }
    }
    if inv.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular);
    }
    Ok(inv)
}

/// Determinant by fraction-free (Bareiss) elimination with row exchanges.
/// Intended for small matrices.
pub fn determinant(a: &DenseMatrix) -> f64 {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return 1.0;
    }
    let mut m = a.clone();
    let mut sign = 1.0;
    let mut prev = 1.0;
    for k in 0..n - 1 {
        if m[(k, k)] == 0.0 {
            match ((k + 1)..n).find(|&i| m[(i, k)] != 0.0) {
                Some(p) => {
                    for j in 0..n {
                        let t = m[(k, j)];
                        m[(k, j)] = m[(p, j)];
                        m[(p, j)] = t;
                    }
                    sign = -sign;
                }
                None => return 0.0,
            }
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                m[(i, j)] = (m[(i, j)] * m[(k, k)] - m[(i, k)] * m[(k, j)]) / prev;
            }
        }
        prev = m[(k, k)];
    }
    sign * m[(n - 1, n - 1)]
}

/// Eigen-decomposition of a symmetric matrix; `vectors` holds eigenvectors
/// as columns, in the order of `values` (ascending).
#[derive(Clone, Debug)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: DenseMatrix,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops to
/// `1e-12 ‖A‖_F`.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<SymmetricEigen> {
    if !a.is_symmetric(1e-12) {
        return Err(Error::NotSymmetric);
    }
    let n = a.rows();
    let mut m = a.clone();
    let mut v = DenseMatrix::identity(n);
    let target = 1e-12 * a.norm_frobenius();

    let off_norm = |m: &DenseMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    for _sweep in 0..100 {
        if off_norm(&m) <= target {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = m[(p, p)];
                let aqq = m[(q, q)];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                m[(p, q)] = 0.0;
                m[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| m[(x, x)].total_cmp(&m[(y, y)]));
    let values = order.iter().map(|&k| m[(k, k)]).collect();
    let vectors = DenseMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SymmetricEigen { values, vectors })
}

/// All eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_spectrum(a: &DenseMatrix) -> Result<Vec<f64>> {
    symmetric_eigen(a).map(|e| e.values)
}
