//! Banded matrix storage, the strong dominance metric, and Gershgorin
//! estimates.
//!
//! Entry access on [`BandedMatrix`] is 1-based, matching the usual
//! mathematical indexing of the decay bounds. Storage is a dense `N×N`
//! array; anything outside the declared band is stored as an exact zero.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// An `N×N` real matrix with `A(i,j) = 0` whenever `i - j > r_lower` or
/// `j - i > r_upper`.
///
/// A matrix with `r_upper = N - 1` is "one-sided": only the lower part is
/// banded.
#[derive(Clone, Debug, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    r_lower: usize,
    r_upper: usize,
    dense: DenseMatrix,
}

impl BandedMatrix {
    /// Samples `entry(i, j)` (1-based) inside the band; everything else is
    /// zero. `r_upper` is clamped to `n - 1`.
    pub fn from_fn(
        n: usize,
        r_lower: usize,
        r_upper: usize,
        mut entry: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        check_shape(n, r_lower)?;
        let r_upper = r_upper.min(n - 1);
        let dense = DenseMatrix::from_fn(n, n, |i, j| {
            if in_band(i, j, r_lower, r_upper) {
                entry(i + 1, j + 1)
            } else {
                0.0
            }
        });
        Ok(Self {
            n,
            r_lower,
            r_upper,
            dense,
        })
    }

    /// Wraps a dense matrix, zeroing everything outside the declared band.
    pub fn from_dense(dense: &DenseMatrix, r_lower: usize, r_upper: usize) -> Result<Self> {
        if !dense.is_square() {
            return Err(Error::InvalidDimension(format!(
                "matrix is {}x{}, expected square",
                dense.rows(),
                dense.cols()
            )));
        }
        Self::from_fn(dense.rows(), r_lower, r_upper, |i, j| dense[(i - 1, j - 1)])
    }

    /// Wraps a dense matrix using the tightest bandwidths containing all of
    /// its nonzeros (lower bandwidth at least 1).
    pub fn from_dense_tight(dense: &DenseMatrix) -> Result<Self> {
        let (r_lower, r_upper) = tight_bandwidths(dense);
        Self::from_dense(dense, r_lower, r_upper)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r_lower(&self) -> usize {
        self.r_lower
    }

    pub fn r_upper(&self) -> usize {
        self.r_upper
    }

    pub fn is_one_sided(&self) -> bool {
        self.r_upper == self.n - 1
    }

    /// `A(i, j)`, 1-based.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        assert!(
            (1..=self.n).contains(&i) && (1..=self.n).contains(&j),
            "index ({i}, {j}) out of range for N = {}",
            self.n
        );
        self.dense[(i - 1, j - 1)]
    }

    /// Overwrites `A(i, j)` (1-based). Writes outside the band are rejected.
    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        if !(1..=self.n).contains(&i) || !(1..=self.n).contains(&j) {
            return Err(Error::IndexOutOfRange(format!("({i}, {j}) for N = {}", self.n)));
        }
        if !in_band(i - 1, j - 1, self.r_lower, self.r_upper) {
            return Err(Error::IndexOutOfRange(format!(
                "({i}, {j}) lies outside the band ({}, {})",
                self.r_lower, self.r_upper
            )));
        }
        self.dense[(i - 1, j - 1)] = value;
        Ok(())
    }

    pub fn diag(&self, k: usize) -> f64 {
        self.get(k, k)
    }

    pub fn as_dense(&self) -> &DenseMatrix {
        &self.dense
    }

    pub fn is_symmetric(&self) -> bool {
        self.dense.is_symmetric(1e-12)
    }

    /// Range of 1-based rows that may be nonzero in column `k`.
    pub fn column_rows(&self, k: usize) -> std::ops::RangeInclusive<usize> {
        k.saturating_sub(self.r_upper).max(1)..=(k + self.r_lower).min(self.n)
    }
}

fn check_shape(n: usize, r_lower: usize) -> Result<()> {
    if r_lower == 0 {
        return Err(Error::InvalidDimension("lower bandwidth must be at least 1".into()));
    }
    if n <= r_lower {
        return Err(Error::InvalidDimension(format!(
            "need N > r_lower, got N = {n}, r_lower = {r_lower}"
        )));
    }
    Ok(())
}

#[inline]
fn in_band(i0: usize, j0: usize, r_lower: usize, r_upper: usize) -> bool {
    if i0 >= j0 {
        i0 - j0 <= r_lower
    } else {
        j0 - i0 <= r_upper
    }
}

/// Tightest `(r_lower, r_upper)` containing every nonzero, with
/// `r_lower >= 1`.
pub fn tight_bandwidths(dense: &DenseMatrix) -> (usize, usize) {
    let mut lower = 0;
    let mut upper = 0;
    for i in 0..dense.rows() {
        for j in 0..dense.cols() {
            if dense[(i, j)] != 0.0 {
                if i > j {
                    lower = lower.max(i - j);
                } else {
                    upper = upper.max(j - i);
                }
            }
        }
    }
    (lower.max(1), upper)
}

/// Builds a banded matrix from a 1-based entry function.
pub fn make_banded(
    n: usize,
    r_lower: usize,
    r_upper: usize,
    entry: impl FnMut(usize, usize) -> f64,
) -> Result<BandedMatrix> {
    BandedMatrix::from_fn(n, r_lower, r_upper, entry)
}

/// Per-column strong dominance data.
#[derive(Clone, Debug, PartialEq)]
pub struct DominanceReport {
    /// Smallest `mu >= 0` with `mu |A(k,k)| >= sum of off-diagonal |A(i,k)|`
    /// for every column. Infinite when some diagonal entry is zero.
    pub mu: f64,
    pub min_diag: f64,
    /// `mu < 1` and no zero diagonal entry.
    pub satisfied: bool,
    /// Off-diagonal column mass over `|A(k,k)|`, index `k - 1`.
    pub per_column_ratios: Vec<f64>,
    /// 1-based column attaining `mu`.
    pub worst_column: usize,
    /// 1-based index of the first zero diagonal entry, if any.
    pub zero_diagonal: Option<usize>,
}

impl DominanceReport {
    fn from_columns(diag: Vec<f64>, off: Vec<f64>) -> Self {
        let mut zero_diagonal = None;
        let per_column_ratios: Vec<f64> = diag
            .iter()
            .zip(&off)
            .enumerate()
            .map(|(k, (&d, &s))| {
                if d == 0.0 {
                    zero_diagonal.get_or_insert(k + 1);
                    f64::INFINITY
                } else {
                    s / d.abs()
                }
            })
            .collect();
        let (worst, mu) = per_column_ratios
            .iter()
            .enumerate()
            .fold((0, 0.0_f64), |(wk, wm), (k, &m)| if m > wm { (k, m) } else { (wk, wm) });
        let min_diag = diag.iter().fold(f64::INFINITY, |m, d| m.min(d.abs()));
        Self {
            mu,
            min_diag,
            satisfied: mu < 1.0 && min_diag > 0.0,
            per_column_ratios,
            worst_column: worst + 1,
            zero_diagonal,
        }
    }

    /// Dominance of an arbitrary square matrix using full off-diagonal column
    /// sums. For a banded matrix this coincides with [`dominance_mu`].
    pub fn of_dense(a: &DenseMatrix) -> Self {
        let n = a.rows();
        let diag = (0..n).map(|k| a[(k, k)]).collect();
        let off = (0..n)
            .map(|k| (0..n).filter(|&i| i != k).map(|i| a[(i, k)].abs()).sum())
            .collect();
        Self::from_columns(diag, off)
    }
}

/// Strong dominance metric of a banded matrix: for column `k` the ratio is
/// the absolute mass above the diagonal (within the upper band) plus rows
/// `k+1..k+r_lower`, divided by `|A(k,k)|`.
pub fn dominance_mu(a: &BandedMatrix) -> DominanceReport {
    let n = a.n();
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n);
    for k in 1..=n {
        diag.push(a.get(k, k));
        let s: f64 = a
            .column_rows(k)
            .filter(|&i| i != k)
            .map(|i| a.get(i, k).abs())
            .sum();
        off.push(s);
    }
    DominanceReport::from_columns(diag, off)
}

/// Column Gershgorin interval `(min_k(|A(k,k)| - s_k), max_k(|A(k,k)| + s_k))`
/// where `s_k` is the off-diagonal absolute column sum. Every eigenvalue has
/// modulus in this interval when the lower end is positive.
pub fn gershgorin_interval(a: &BandedMatrix) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 1..=a.n() {
        let d = a.get(k, k).abs();
        let s: f64 = a
            .column_rows(k)
            .filter(|&i| i != k)
            .map(|i| a.get(i, k).abs())
            .sum();
        lo = lo.min(d - s);
        hi = hi.max(d + s);
    }
    (lo, hi)
}

/// `I_r ⊕ A ⊕ I_r` with `r = r_lower`, keeping the bandwidths of `A`
/// (a one-sided input stays one-sided).
pub fn augment(a: &BandedMatrix) -> BandedMatrix {
    let r = a.r_lower();
    let n = a.n() + 2 * r;
    let r_upper = if a.is_one_sided() { n - 1 } else { a.r_upper() };
    BandedMatrix::from_fn(n, r, r_upper, |i, j| {
        let inner = (r + 1)..=(r + a.n());
        if inner.contains(&i) && inner.contains(&j) {
            a.get(i - r, j - r)
        } else if i == j {
            1.0
        } else {
            0.0
        }
    })
    .expect("augmentation of a valid banded matrix is valid")
}
