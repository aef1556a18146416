//! Structured LU factorization of a lower banded matrix and the Green
//! generators of its inverse.
//!
//! Elimination keeps a rolling window of the `r` rows currently touched by
//! the factorization (`Y_{k-1}` holds rows `k..k+r-1`). Step `k` takes the
//! pivot `γ_k = Y(k,k)`, the subrow `X_k = Y(k, k+1:N)`, the multipliers
//! `f_k` (rows `k+1..k+r` of column `k`, divided by `γ_k`), and updates the
//! remaining rows by `-f_k X_k`. Once `k > N - r` there is no new row to bring
//! in and the window shrinks by one each step.
//!
//! Generators of `A^{-1}` are then produced by the backward recursion
//! `p(k) = (p_L(k) - X_k P_{k+1} a(k)) / γ_k`, `P_k = [p(k); P_{k+1} a(k)]`
//! starting from `P_N = 1/γ_N`.

use std::collections::VecDeque;

use crate::banded::BandedMatrix;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::green::GreenGenerators;

/// Pivots smaller than this in magnitude abort the factorization.
pub const PIVOT_TOLERANCE: f64 = 1e-300;

/// Output of [`structured_lu`]. Indices of the accessors are 1-based.
#[derive(Clone, Debug)]
pub struct StructuredLU {
    n: usize,
    r: usize,
    gamma: Vec<f64>,
    x: Vec<Vec<f64>>,
    f: Vec<Vec<f64>>,
    r_factor: DenseMatrix,
}

impl StructuredLU {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `γ_k = R(k, k)`, `1 <= k <= N`.
    pub fn gamma(&self, k: usize) -> f64 {
        self.gamma[k - 1]
    }

    pub fn gammas(&self) -> &[f64] {
        &self.gamma
    }

    /// `X_k = R(k, k+1:N)`, `1 <= k <= N-1`.
    pub fn x(&self, k: usize) -> &[f64] {
        &self.x[k - 1]
    }

    /// Multipliers `f_k`, `1 <= k <= N-1`; length `min(r, N-k)`.
    pub fn f(&self, k: usize) -> &[f64] {
        &self.f[k - 1]
    }

    /// Upper triangular factor `R`.
    pub fn r_factor(&self) -> &DenseMatrix {
        &self.r_factor
    }

    /// Unit lower triangular factor `L` with `L(k+i, k) = f_k(i)`.
    pub fn l_factor(&self) -> DenseMatrix {
        let mut l = DenseMatrix::identity(self.n);
        for (k0, fk) in self.f.iter().enumerate() {
            for (i, &v) in fk.iter().enumerate() {
                l[(k0 + 1 + i, k0)] = v;
            }
        }
        l
    }

    /// The elimination matrix `L_k = [[1, 0], [-f_k, I]]` of step `k`
    /// (order `r+1` for `k <= N-r`, `N-k+1` afterwards).
    pub fn step_matrix(&self, k: usize) -> DenseMatrix {
        let fk = self.f(k);
        let size = fk.len() + 1;
        let mut m = DenseMatrix::identity(size);
        for (i, &v) in fk.iter().enumerate() {
            m[(i + 1, 0)] = -v;
        }
        m
    }

    /// The `r×r` matrix `L_{N-r+1}` gathering the trailing elimination steps
    /// `k = N-r+1..N-1`, i.e. the trailing block of `L^{-1}`.
    pub fn trailing_elimination(&self) -> DenseMatrix {
        let (n, r) = (self.n, self.r);
        let base = n - r + 1;
        let mut acc = DenseMatrix::identity(r);
        for k in base..n {
            let offset = k - base;
            let step = self.step_matrix(k);
            let mut embedded = DenseMatrix::identity(r);
            for i in 0..step.rows() {
                for j in 0..step.cols() {
                    embedded[(offset + i, offset + j)] = step[(i, j)];
                }
            }
            acc = embedded.matmul(&acc);
        }
        acc
    }
}

/// Row-window Gaussian elimination without pivoting, shared by
/// [`structured_lu`] and [`schur_complement`].
struct Eliminator<'a> {
    a: &'a BandedMatrix,
    r: usize,
    /// rows `k+1..` of the current window, absolute column indexing
    window: VecDeque<Vec<f64>>,
    /// 0-based index of the next pivot
    k0: usize,
}

struct Step {
    gamma: f64,
    x: Vec<f64>,
    f: Vec<f64>,
}

impl<'a> Eliminator<'a> {
    fn new(a: &'a BandedMatrix) -> Self {
        let r = a.r_lower();
        let dense = a.as_dense();
        let window = (0..r).map(|i| dense.row(i).to_vec()).collect();
        Self { a, r, window, k0: 0 }
    }

    fn step(&mut self) -> Result<Step> {
        let n = self.a.n();
        let k0 = self.k0;
        let pivot_row = self.window.pop_front().expect("window holds the pivot row");
        if k0 + self.r < n {
            self.window.push_back(self.a.as_dense().row(k0 + self.r).to_vec());
        }
        let gamma = pivot_row[k0];
        if !(gamma.abs() >= PIVOT_TOLERANCE) {
            return Err(Error::ZeroPivot { step: k0 + 1 });
        }
        let x = pivot_row[k0 + 1..].to_vec();
        // rows of the reduced matrix never reach past the upper band of the pivot row
        let last_col = (k0 + self.a.r_upper()).min(n - 1);
        let mut f = Vec::with_capacity(self.window.len());
        for row in self.window.iter_mut() {
            let fi = row[k0] / gamma;
            row[k0] = 0.0;
            if fi != 0.0 {
                for c in (k0 + 1)..=last_col {
                    row[c] -= fi * pivot_row[c];
                }
            }
            f.push(fi);
        }
        self.k0 += 1;
        Ok(Step { gamma, x, f })
    }

    /// The `(N-k)×(N-k)` trailing matrix after `k` steps.
    fn trailing(&self) -> DenseMatrix {
        let n = self.a.n();
        let k0 = self.k0;
        let size = n - k0;
        let mut out = DenseMatrix::zeros(size, size);
        for i in 0..size {
            let src: &[f64] = if i < self.window.len() {
                &self.window[i]
            } else {
                self.a.as_dense().row(k0 + i)
            };
            out.row_mut(i).copy_from_slice(&src[k0..]);
        }
        out
    }
}

/// Factorizes a strongly regular lower banded matrix of order
/// `r = A.r_lower()` as `A = L R`.
pub fn structured_lu(a: &BandedMatrix) -> Result<StructuredLU> {
    let n = a.n();
    let mut elim = Eliminator::new(a);
    let mut gamma = Vec::with_capacity(n);
    let mut x = Vec::with_capacity(n - 1);
    let mut f = Vec::with_capacity(n - 1);
    let mut r_factor = DenseMatrix::zeros(n, n);
    for k0 in 0..n {
        let step = elim.step()?;
        r_factor[(k0, k0)] = step.gamma;
        for (c, &v) in step.x.iter().enumerate() {
            r_factor[(k0, k0 + 1 + c)] = v;
        }
        gamma.push(step.gamma);
        if k0 + 1 < n {
            x.push(step.x);
            f.push(step.f);
        }
    }
    Ok(StructuredLU {
        n,
        r: a.r_lower(),
        gamma,
        x,
        f,
        r_factor,
    })
}

/// Trailing `(N-ℓ)×(N-ℓ)` matrix after `ℓ` elimination steps,
/// `1 <= ℓ <= N - r`.
pub fn schur_complement(a: &BandedMatrix, ell: usize) -> Result<DenseMatrix> {
    let r = a.r_lower();
    if ell == 0 || ell > a.n() - r {
        return Err(Error::IndexOutOfRange(format!(
            "step count {ell} outside 1..={}",
            a.n() - r
        )));
    }
    let mut elim = Eliminator::new(a);
    for _ in 0..ell {
        elim.step()?;
    }
    Ok(elim.trailing())
}

/// Generators of the lower Green, upper banded matrix `L^{-1}`, taken from the
/// partitions of the elimination matrices `L_k`.
///
/// For `k <= N-r`, `L_k = [[p_L(k), d_L(k)], [a_L(k), q_L(k)]]`, which gives
/// `p_L(k) = e_1^T`, `d_L(k) = 0`, `q_L(k) = e_r` and
/// `a_L(k) = -f_k e_1^T + J` with `J` the upper shift. For the trailing steps
/// `L_k = [[p_L(k)], [a_L(k)]]` with shrinking sizes.
#[derive(Clone, Debug)]
pub struct LInvGenerators {
    n: usize,
    r: usize,
    p: Vec<DenseMatrix>,
    q: Vec<DenseMatrix>,
    a: Vec<DenseMatrix>,
    d: Vec<f64>,
    trailing: DenseMatrix,
}

impl LInvGenerators {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `p_L(k)` for `1 <= k <= N-1`.
    pub fn p_l(&self, k: usize) -> &DenseMatrix {
        &self.p[k - 1]
    }

    /// `q_L(k)` for `1 <= k <= N-r`.
    pub fn q_l(&self, k: usize) -> &DenseMatrix {
        &self.q[k - 1]
    }

    /// `a_L(k)` for `1 <= k <= N-1`.
    pub fn a_l(&self, k: usize) -> &DenseMatrix {
        &self.a[k - 1]
    }

    /// `d_L(k)` for `1 <= k <= N-r`.
    pub fn d_l(&self, k: usize) -> f64 {
        self.d[k - 1]
    }

    /// `p_L(N-r+1) = L_{N-r+1}`.
    pub fn p_l_last(&self) -> &DenseMatrix {
        &self.trailing
    }
}

pub fn linv_generators(slu: &StructuredLU) -> LInvGenerators {
    let (n, r) = (slu.n, slu.r);
    let mut p = Vec::with_capacity(n - 1);
    let mut q = Vec::with_capacity(n - r);
    let mut a = Vec::with_capacity(n - 1);
    let mut d = Vec::with_capacity(n - r);
    for k in 1..n {
        let lk = slu.step_matrix(k);
        let size = lk.rows();
        if k <= n - r {
            p.push(lk.submatrix(0, 0, 1, r));
            d.push(lk[(0, r)]);
            a.push(lk.submatrix(1, 0, r, r));
            q.push(lk.submatrix(1, r, r, 1));
        } else {
            p.push(lk.submatrix(0, 0, 1, size));
            a.push(lk.submatrix(1, 0, size - 1, size));
        }
    }
    LInvGenerators {
        n,
        r,
        p,
        q,
        a,
        d,
        trailing: slu.trailing_elimination(),
    }
}

/// `P · [-f | S]` where `S` is the leading columns of the identity that the
/// generator `a_L(k)` carries: the first column is `-P f` and the remaining
/// `width - 1` columns are the leading columns of `P`.
fn times_elimination_generator(p: &DenseMatrix, f: &[f64], width: usize) -> DenseMatrix {
    debug_assert_eq!(p.cols(), f.len());
    debug_assert!(width >= 1 && width - 1 <= p.cols());
    let mut out = DenseMatrix::zeros(p.rows(), width);
    for i in 0..p.rows() {
        let row = p.row(i);
        let dot: f64 = row.iter().zip(f).map(|(a, b)| a * b).sum();
        let dst = out.row_mut(i);
        dst[0] = -dot;
        dst[1..].copy_from_slice(&row[..width - 1]);
    }
    out
}

/// Backward recursion producing `p(k)` for all `k` and the trailing `P_k`.
fn green_from_lu(slu: &StructuredLU, linv: &LInvGenerators) -> Result<GreenGenerators> {
    let (n, r) = (slu.n, slu.r);
    let dot = |x: &[f64], m: &DenseMatrix| -> Vec<f64> {
        let mut out = vec![0.0; m.cols()];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (o, &v) in out.iter_mut().zip(m.row(i)) {
                *o += xi * v;
            }
        }
        out
    };

    // P_N = 1 / γ_N
    let mut big_p = DenseMatrix::from_row_major(1, 1, vec![1.0 / slu.gamma(n)]);
    // trailing steps k = N-1..N-r+1: P_k is (N-k+1)×(N-k+1)
    for k in ((n - r + 1)..n).rev() {
        let size = n - k + 1;
        let pa = times_elimination_generator(&big_p, slu.f(k), size);
        let t = dot(slu.x(k), &pa);
        let pl = linv.p_l(k);
        let pk: Vec<f64> = (0..size).map(|c| (pl[(0, c)] - t[c]) / slu.gamma(k)).collect();
        big_p = stack(&pk, &pa);
    }
    let p_last = big_p.clone();

    let count = n - r;
    let mut p_rows = vec![DenseMatrix::zeros(1, r); count];
    for k in (1..=count).rev() {
        let pa = times_elimination_generator(&big_p, slu.f(k), r);
        let t = dot(slu.x(k), &pa);
        let pl = linv.p_l(k);
        let pk: Vec<f64> = (0..r).map(|c| (pl[(0, c)] - t[c]) / slu.gamma(k)).collect();
        p_rows[k - 1] = DenseMatrix::row_vector(&pk);
        if k > 1 {
            big_p = stack(&pk, &pa);
        }
    }
    p_rows.push(p_last);

    let q = (1..=count).map(|k| linv.q_l(k).clone()).collect();
    let a = (1..=count).map(|k| linv.a_l(k).clone()).collect();
    GreenGenerators::new(n, r, p_rows, q, a)
}

fn stack(top: &[f64], rest: &DenseMatrix) -> DenseMatrix {
    let mut data = Vec::with_capacity(top.len() * (rest.rows() + 1));
    data.extend_from_slice(top);
    data.extend_from_slice(rest.as_slice());
    DenseMatrix::from_row_major(rest.rows() + 1, top.len(), data)
}

/// Lower Green generators of `A^{-1}` from an existing factorization.
pub fn inverse_generators_from_lu(slu: &StructuredLU) -> Result<GreenGenerators> {
    green_from_lu(slu, &linv_generators(slu))
}

/// Lower Green generators of `A^{-1}` for a strongly regular lower banded `A`
/// of order `A.r_lower()`.
pub fn inverse_green_generators(a: &BandedMatrix) -> Result<GreenGenerators> {
    inverse_generators_from_lu(&structured_lu(a)?)
}

/// `P_{N-r+1}` computed as `R(N-r+1:N, N-r+1:N)^{-1} L_{N-r+1}`.
pub fn p_tail_cross_check(slu: &StructuredLU) -> Result<DenseMatrix> {
    let (n, r) = (slu.n, slu.r);
    let base = n - r;
    let rt = slu.r_factor.submatrix(base, base, r, r);
    let mut x = slu.trailing_elimination();
    // back substitution, column by column
    for col in 0..r {
        for i in (0..r).rev() {
            let mut s = x[(i, col)];
            for k in (i + 1)..r {
                s -= rt[(i, k)] * x[(k, col)];
            }
            let d = rt[(i, i)];
            if !(d.abs() >= PIVOT_TOLERANCE) {
                return Err(Error::Singular);
            }
            x[(i, col)] = s / d;
        }
    }
    Ok(x)
}
