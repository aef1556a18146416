//! Off-diagonal decay bounds for `|A^{-1}(i, j)|`.
//!
//! The LU bound needs only the strong dominance metric `μ` and the smallest
//! diagonal modulus:
//!
//! ```text
//! |A^{-1}(i,j)| <= M γ^{i-j},  i >= j,   γ = μ^{1/r},
//! M = (1 + μ²) / ((1 - μ)(1 - μ²) min_k |A(k,k)|)
//! ```
//!
//! The other families (QR-based, Demko–Moss–Smith, Frommer's effective
//! condition number bound, the Chui–Hasson rate, Varah's norm bound) are here
//! for comparison.

use std::fmt;

use crate::banded::{dominance_mu, BandedMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Lu,
    Qr,
    DmsSpd,
    DmsIndefinite,
    Frommer,
    ChuiHasson,
    Varah,
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundKind::Lu => "LU",
            BoundKind::Qr => "QR",
            BoundKind::DmsSpd => "DMS-SPD",
            BoundKind::DmsIndefinite => "DMS-indefinite",
            BoundKind::Frommer => "Frommer",
            BoundKind::ChuiHasson => "ChuiHasson",
            BoundKind::Varah => "Varah",
        };
        f.write_str(s)
    }
}

/// Where a bound family makes a claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// `i >= j`
    LowerTriangle,
    /// `|i - j| >= min_distance`
    OffBand { min_distance: usize },
    /// every entry
    All,
}

impl Region {
    pub fn contains(&self, i: usize, j: usize) -> bool {
        match *self {
            Region::LowerTriangle => i >= j,
            Region::OffBand { min_distance } => i.abs_diff(j) >= min_distance,
            Region::All => true,
        }
    }
}

/// `value(i, j) = constant · rate^{d - offset}` on `region`, where `d` is
/// `i - j` for lower-triangle bounds and `|i - j|` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayBound {
    pub kind: BoundKind,
    /// Multiplicative constant. `None` for rate-only families.
    pub constant: Option<f64>,
    /// Decay rate, `0 <= rate < 1` for every decaying family.
    pub rate: f64,
    pub r: usize,
    pub region: Region,
    /// `false` when the constant is a stand-in and only the rate carries the
    /// literature's guarantee.
    pub constant_authoritative: bool,
    offset: usize,
}

impl DecayBound {
    fn new(kind: BoundKind, constant: Option<f64>, rate: f64, r: usize, region: Region) -> Self {
        Self {
            kind,
            constant,
            rate,
            r,
            region,
            constant_authoritative: constant.is_some(),
            offset: 0,
        }
    }

    /// Same rate and region with a different constant, marked advisory.
    pub fn anchored(&self, constant: f64) -> Self {
        Self {
            constant: Some(constant),
            constant_authoritative: false,
            ..self.clone()
        }
    }
}

/// Bound value at `(i, j)`, or `None` outside the family's region. Rate-only
/// families evaluate with a unit constant.
pub fn eval_bound(b: &DecayBound, i: usize, j: usize) -> Option<f64> {
    if !b.region.contains(i, j) {
        return None;
    }
    let c = b.constant.unwrap_or(1.0);
    if b.kind == BoundKind::Varah {
        return Some(c);
    }
    let d = i.abs_diff(j) - b.offset;
    // powi(0) is 1 even for a zero rate
    Some(c * b.rate.powi(d as i32))
}

/// LU-based bound for a matrix satisfying the strong dominance condition.
pub fn lu_bound(a: &BandedMatrix) -> Result<DecayBound> {
    let dom = dominance_mu(a);
    if let Some(index) = dom.zero_diagonal {
        return Err(Error::ZeroDiagonal { index });
    }
    if !dom.satisfied {
        return Err(Error::DominanceViolated {
            mu: dom.mu,
            column: dom.worst_column,
        });
    }
    Ok(lu_bound_from(dom.mu, dom.min_diag, a.r_lower()))
}

/// LU bound from its ingredients `μ ∈ [0, 1)`, `min_k |A(k,k)| > 0` and `r`.
pub fn lu_bound_from(mu: f64, min_diag: f64, r: usize) -> DecayBound {
    let mu2 = mu * mu;
    let m = (1.0 + mu2) / ((1.0 - mu) * (1.0 - mu2) * min_diag);
    let gamma = mu.powf(1.0 / r as f64);
    DecayBound::new(BoundKind::Lu, Some(m), gamma, r, Region::LowerTriangle)
}

/// `1 / ((1 - μ) min_k |A(k,k)|)`, an upper bound on `‖A^{-1}‖_1` and hence
/// on every entry of `A^{-1}`.
pub fn varah_bound(a: &BandedMatrix) -> Result<f64> {
    let dom = dominance_mu(a);
    if let Some(index) = dom.zero_diagonal {
        return Err(Error::ZeroDiagonal { index });
    }
    if !dom.satisfied {
        return Err(Error::DominanceViolated {
            mu: dom.mu,
            column: dom.worst_column,
        });
    }
    Ok(1.0 / ((1.0 - dom.mu) * dom.min_diag))
}

/// Varah's bound as an entrywise constant "decay bound".
pub fn varah_entry_bound(a: &BandedMatrix) -> Result<DecayBound> {
    let v = varah_bound(a)?;
    Ok(DecayBound::new(BoundKind::Varah, Some(v), 1.0, a.r_lower(), Region::All))
}

/// Inputs of the QR-based bound; `None` means "compute from the matrix".
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct QrParams {
    pub c0: Option<f64>,
    pub k: Option<f64>,
}

/// Constants and hypothesis checks of the QR-based bound.
#[derive(Clone, Debug, PartialEq)]
pub struct QrHypothesisReport {
    /// Bound on the energy of the strictly upper block above each pivot.
    pub c0: f64,
    /// Dominance constant.
    pub k: f64,
    pub delta: f64,
    pub mu: f64,
    pub m: f64,
    pub gamma: f64,
    /// Largest energy sum actually found in the matrix.
    pub c0_observed: f64,
    /// Largest `K` for which the column dominance inequality holds.
    pub k_admissible: f64,
    /// `K` meets the two checkable threshold terms.
    pub k_threshold_met: bool,
    /// The threshold term involving `x₀` is never checked.
    pub x0_term_unchecked: bool,
}

/// `δ = 2/K`, `μ = δ/√(1+δ²)`, `M = 2μ+1`, `γ = (μ r √r)^{1/r}`.
pub fn qr_constants(k: f64, r: usize) -> (f64, f64, f64, f64) {
    let delta = 2.0 / k;
    let mu = delta / (1.0 + delta * delta).sqrt();
    let rf = r as f64;
    let gamma = (mu * rf * rf.sqrt()).powf(1.0 / rf);
    (delta, mu, 2.0 * mu + 1.0, gamma)
}

/// `max(4(3 + 2 C₀ r√r), 2 √(r³ ((√3+1)/2)^{2r} - 1))`.
pub fn qr_k_threshold(c0: f64, r: usize) -> f64 {
    let rf = r as f64;
    let t1 = 4.0 * (3.0 + 2.0 * c0 * rf * rf.sqrt());
    let base = (3f64.sqrt() + 1.0) / 2.0;
    let t2 = 2.0 * (rf.powi(3) * base.powi(2 * r as i32) - 1.0).sqrt();
    t1.max(t2)
}

/// `max_k Σ_{i<k} Σ_{j>k} |A(i,j)|²` over `k = 1..N-r`.
fn qr_energy(a: &BandedMatrix) -> f64 {
    let n = a.n();
    let r = a.r_lower();
    let ru = a.r_upper();
    let mut worst = 0.0_f64;
    for k in 1..=(n - r) {
        let mut s = 0.0;
        for i in k.saturating_sub(ru).max(1)..k {
            for j in (k + 1)..=(i + ru).min(n) {
                let v = a.get(i, j);
                s += v * v;
            }
        }
        worst = worst.max(s);
    }
    worst
}

/// Largest `K` with `|A(k,k)| >= K √(column energy) + 1` for all `k`.
fn qr_admissible_k(a: &BandedMatrix) -> f64 {
    let mut k_max = f64::INFINITY;
    for k in 1..=a.n() {
        let energy: f64 = a
            .column_rows(k)
            .filter(|&i| i != k)
            .map(|i| a.get(i, k).powi(2))
            .sum();
        let slack = a.get(k, k).abs() - 1.0;
        if energy == 0.0 {
            if slack < 0.0 {
                return f64::NEG_INFINITY;
            }
            continue;
        }
        k_max = k_max.min(slack / energy.sqrt());
    }
    k_max
}

/// QR-based bound. Fails when the dominance hypothesis cannot hold for the
/// requested `K` or when the resulting rate is not below 1. The threshold on
/// `K` is reported, not enforced.
pub fn qr_bound(a: &BandedMatrix, params: QrParams) -> Result<(QrHypothesisReport, DecayBound)> {
    let r = a.r_lower();
    let c0_observed = qr_energy(a);
    let k_admissible = qr_admissible_k(a);
    let c0 = params.c0.unwrap_or(c0_observed);
    if c0 < c0_observed {
        return Err(Error::QrHypothesis(format!(
            "C0 = {c0} is below the observed energy {c0_observed}"
        )));
    }
    let k = params.k.unwrap_or(k_admissible);
    if !(k > 0.0) {
        return Err(Error::QrHypothesis(format!(
            "no positive K satisfies the dominance inequality (largest admissible K = {k_admissible})"
        )));
    }
    if k > k_admissible {
        return Err(Error::QrHypothesis(format!(
            "K = {k} exceeds the largest admissible value {k_admissible}"
        )));
    }
    let (delta, mu, m, gamma) = qr_constants(k, r);
    if !(gamma < 1.0) {
        return Err(Error::RateDegenerate { gamma });
    }
    let report = QrHypothesisReport {
        c0,
        k,
        delta,
        mu,
        m,
        gamma,
        c0_observed,
        k_admissible,
        k_threshold_met: k >= qr_k_threshold(c0, r),
        x0_term_unchecked: true,
    };
    let bound = DecayBound::new(BoundKind::Qr, Some(m), gamma, r, Region::LowerTriangle);
    Ok((report, bound))
}

/// How the Demko–Moss–Smith constant is chosen.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub enum DmsConstant {
    /// SPD: `max(1/a, (1+√κ)²/(2b))`. Indefinite: `1/a`, advisory only.
    #[default]
    Default,
    Fixed(f64),
}

/// Demko–Moss–Smith bound for a spectrum in `[a, b]` (definite) or in
/// `[-b, -a] ∪ [a, b]` (indefinite).
pub fn dms_rate(a: f64, b: f64, r: usize, definite: bool, constant: DmsConstant) -> Result<DecayBound> {
    check_interval(a, b)?;
    let kappa = b / a;
    let (kind, rate) = if definite {
        let s = kappa.sqrt();
        (BoundKind::DmsSpd, ((s - 1.0) / (s + 1.0)).powf(1.0 / r as f64))
    } else {
        (
            BoundKind::DmsIndefinite,
            ((kappa - 1.0) / (kappa + 1.0)).powf(1.0 / (2 * r) as f64),
        )
    };
    let (c, authoritative) = match constant {
        DmsConstant::Default if definite => {
            let s = kappa.sqrt();
            ((1.0 / a).max((1.0 + s).powi(2) / (2.0 * b)), true)
        }
        DmsConstant::Default => (1.0 / a, false),
        DmsConstant::Fixed(c) => (c, false),
    };
    let mut bound = DecayBound::new(kind, Some(c), rate, r, Region::All);
    bound.constant_authoritative = authoritative;
    Ok(bound)
}

/// Frommer's effective-condition-number bound
/// `C q₁^{|i-j|/r - 1}`, `|i-j| >= r`, with `C = 2/λ₁`.
pub fn frommer_bound(lambda1: f64, lambda_nm1: f64, r: usize) -> Result<DecayBound> {
    check_interval(lambda1, lambda_nm1)?;
    let s = (lambda_nm1 / lambda1).sqrt();
    let q1 = (s - 1.0) / (s + 1.0);
    let mut bound = DecayBound::new(
        BoundKind::Frommer,
        Some(2.0 / lambda1),
        q1.powf(1.0 / r as f64),
        r,
        Region::OffBand { min_distance: r },
    );
    bound.offset = r;
    Ok(bound)
}

/// Chui–Hasson rate `((b-a)/(b+a))^{1/(2r)}`; no explicit constant exists.
pub fn chui_hasson_rate(a: f64, b: f64, r: usize) -> Result<DecayBound> {
    check_interval(a, b)?;
    let rate = ((b - a) / (b + a)).powf(1.0 / (2 * r) as f64);
    Ok(DecayBound::new(BoundKind::ChuiHasson, None, rate, r, Region::All))
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a > 0.0 && a <= b && b.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSpectrum { a, b })
    }
}
