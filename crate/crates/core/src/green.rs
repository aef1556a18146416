//! Lower Green generators.
//!
//! An `N×N` lower Green matrix of order `r` is viewed as a block matrix with
//! `N - r + 2` block rows and columns (indexed from zero). Row blocks have
//! sizes `m = (0, 1, …, 1, r)` and column blocks `n = (r, 1, …, 1, 0)`, so
//! block column 0 holds scalar columns `1..=r` and the last block row holds
//! scalar rows `N-r+1..=N`. The strictly lower block part is
//!
//! ```text
//! B'(i, j) = p(i) · a(i-1) ⋯ a(j+1) · q(j),   0 <= j < i <= N-r+1
//! ```
//!
//! with `q(0) = I_r`. In scalar terms the generators describe every entry of
//! rows `N-r+1..=N` and, for rows `i <= N-r`, the entries with
//! `j <= i + r - 1`.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};

/// Block sizes of the Green partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockScheme {
    pub n: usize,
    pub r: usize,
    /// Row block sizes, indices `0..=N-r+1`.
    pub m: Vec<usize>,
    /// Column block sizes, indices `0..=N-r+1`.
    pub n_cols: Vec<usize>,
}

impl BlockScheme {
    /// Index of the last block row (`N - r + 1`).
    pub fn last(&self) -> usize {
        self.n - self.r + 1
    }
}

pub fn block_scheme(n: usize, r: usize) -> Result<BlockScheme> {
    if r == 0 || n <= r {
        return Err(Error::InvalidDimension(format!(
            "Green scheme needs N > r >= 1, got N = {n}, r = {r}"
        )));
    }
    let last = n - r + 1;
    let mut m = vec![1; last + 1];
    let mut n_cols = vec![1; last + 1];
    m[0] = 0;
    m[last] = r;
    n_cols[0] = r;
    n_cols[last] = 0;
    Ok(BlockScheme { n, r, m, n_cols })
}

/// Lower Green generators `p(i)`, `q(j)`, `a(k)` of an `N×N` matrix of
/// order `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct GreenGenerators {
    scheme: BlockScheme,
    /// `p(1..=N-r+1)`; `p(i)` is `1×r` except `p(N-r+1)`, which is `r×r`.
    p: Vec<DenseMatrix>,
    /// `q(0..=N-r)`; `q(0) = I_r`, the rest are `r×1`.
    q: Vec<DenseMatrix>,
    /// `a(1..=N-r)`, each `r×r`.
    a: Vec<DenseMatrix>,
}

impl GreenGenerators {
    /// Assembles a generator family. `p` runs over `1..=N-r+1`, `q` over
    /// `1..=N-r` (`q(0) = I_r` is added here) and `a` over `1..=N-r`.
    pub fn new(
        n: usize,
        r: usize,
        p: Vec<DenseMatrix>,
        q: Vec<DenseMatrix>,
        a: Vec<DenseMatrix>,
    ) -> Result<Self> {
        let scheme = block_scheme(n, r)?;
        let count = n - r;
        let bad = |what: String| Err(Error::InvalidDimension(what));
        if p.len() != count + 1 || q.len() != count || a.len() != count {
            return bad(format!(
                "expected {} p, {count} q and {count} a generators, got {}, {}, {}",
                count + 1,
                p.len(),
                q.len(),
                a.len()
            ));
        }
        for (k, pk) in p.iter().enumerate() {
            let want = (scheme.m[k + 1], r);
            if pk.shape() != want {
                return bad(format!("p({}) is {:?}, expected {want:?}", k + 1, pk.shape()));
            }
        }
        for (k, qk) in q.iter().enumerate() {
            if qk.shape() != (r, 1) {
                return bad(format!("q({}) is {:?}, expected ({r}, 1)", k + 1, qk.shape()));
            }
        }
        for (k, ak) in a.iter().enumerate() {
            if ak.shape() != (r, r) {
                return bad(format!("a({}) is {:?}, expected ({r}, {r})", k + 1, ak.shape()));
            }
        }
        let mut q_all = Vec::with_capacity(count + 1);
        q_all.push(DenseMatrix::identity(r));
        q_all.extend(q);
        Ok(Self {
            scheme,
            p,
            q: q_all,
            a,
        })
    }

    pub fn scheme(&self) -> &BlockScheme {
        &self.scheme
    }

    pub fn n(&self) -> usize {
        self.scheme.n
    }

    pub fn r(&self) -> usize {
        self.scheme.r
    }

    /// `p(i)`, `1 <= i <= N-r+1`.
    pub fn p(&self, i: usize) -> &DenseMatrix {
        &self.p[i - 1]
    }

    /// The trailing `r×r` generator `P_{N-r+1} = p(N-r+1)`.
    pub fn p_last(&self) -> &DenseMatrix {
        self.p.last().expect("at least one p generator")
    }

    /// `q(j)`, `0 <= j <= N-r`.
    pub fn q(&self, j: usize) -> &DenseMatrix {
        &self.q[j]
    }

    /// `a(k)`, `1 <= k <= N-r`.
    pub fn a(&self, k: usize) -> &DenseMatrix {
        &self.a[k - 1]
    }

    /// Whether scalar entry `(i, j)` (1-based) is described by the generators.
    pub fn is_represented(&self, i: usize, j: usize) -> bool {
        let (n, r) = (self.scheme.n, self.scheme.r);
        (1..=n).contains(&i) && (1..=n).contains(&j) && (i > n - r || j < i + r)
    }
}

/// Ordered product `a(i-1) · a(i-2) ⋯ a(j+1)`; the identity when `j >= i-1`.
pub fn transition_product(gens: &GreenGenerators, i: usize, j: usize) -> DenseMatrix {
    let r = gens.r();
    let mut out = DenseMatrix::identity(r);
    if j + 1 >= i {
        return out;
    }
    // left to right: a(i-1) first
    for k in ((j + 1)..i).rev() {
        out = out.matmul(gens.a(k));
    }
    out
}

/// The `m_i × n_j` block `B'(i, j) = p(i) a^>_{ij} q(j)` for
/// `0 <= j < i <= N-r+1`.
pub fn green_block_entry(gens: &GreenGenerators, i: usize, j: usize) -> Result<DenseMatrix> {
    let last = gens.scheme().last();
    if !(j < i && i <= last) {
        return Err(Error::IndexOutOfRange(format!(
            "block ({i}, {j}) is not strictly lower in a {}-block scheme",
            last + 1
        )));
    }
    Ok(gens
        .p(i)
        .matmul(&transition_product(gens, i, j))
        .matmul(gens.q(j)))
}

/// Scalar entry `B(i, j)` (1-based) recovered from the block representation.
pub fn green_scalar_entry(gens: &GreenGenerators, i: usize, j: usize) -> Result<f64> {
    if !gens.is_represented(i, j) {
        return Err(Error::NotRepresented { i, j });
    }
    let (n, r) = (gens.n(), gens.r());
    let (block_row, row_offset) = if i <= n - r { (i, 0) } else { (n - r + 1, i - (n - r + 1)) };
    let (block_col, col_offset) = if j <= r { (0, j - 1) } else { (j - r, 0) };
    let block = green_block_entry(gens, block_row, block_col)?;
    Ok(block[(row_offset, col_offset)])
}

/// Lower part of a Green matrix rebuilt from its generators. Entries outside
/// the represented region are zero and flagged `false` in `mask`.
#[derive(Clone, Debug)]
pub struct LowerReconstruction {
    pub values: DenseMatrix,
    /// `mask[(i-1, j-1)]` is 1.0 where `(i, j)` is represented, else 0.0.
    pub mask: DenseMatrix,
}

impl LowerReconstruction {
    pub fn is_represented(&self, i: usize, j: usize) -> bool {
        self.mask[(i - 1, j - 1)] != 0.0
    }

    /// Largest `|values - reference|` over the represented region.
    pub fn max_deviation(&self, reference: &DenseMatrix) -> f64 {
        let n = self.values.rows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                if self.mask[(i, j)] != 0.0 {
                    worst = worst.max((self.values[(i, j)] - reference[(i, j)]).abs());
                }
            }
        }
        worst
    }
}

/// Evaluates every represented entry, one block column at a time, carrying
/// `a(i-1) ⋯ a(j+1) q(j)` down the column instead of recomputing products.
pub fn reconstruct_lower(gens: &GreenGenerators) -> LowerReconstruction {
    let (n, r) = (gens.n(), gens.r());
    let last = gens.scheme().last();
    let mut values = DenseMatrix::zeros(n, n);
    let mut mask = DenseMatrix::zeros(n, n);

    for block_col in 0..last {
        let width = gens.scheme().n_cols[block_col];
        let first_col = if block_col == 0 { 0 } else { block_col + r - 1 };
        // carry = a^>_{i, block_col} q(block_col), starting at i = block_col + 1
        let mut carry = gens.q(block_col).clone();
        for block_row in (block_col + 1)..=last {
            if block_row > block_col + 1 {
                carry = gens.a(block_row - 1).matmul(&carry);
            }
            let block = gens.p(block_row).matmul(&carry);
            let first_row = block_row - 1;
            for bi in 0..block.rows() {
                for bj in 0..width {
                    values[(first_row + bi, first_col + bj)] = block[(bi, bj)];
                    mask[(first_row + bi, first_col + bj)] = 1.0;
                }
            }
        }
    }
    LowerReconstruction { values, mask }
}
