//! Test matrices for the decay comparisons and the sweep that evaluates every
//! applicable bound family along one column of the inverse.

use std::fmt;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::banded::{dominance_mu, make_banded, BandedMatrix};
use crate::bounds::{
    chui_hasson_rate, dms_rate, eval_bound, frommer_bound, lu_bound, qr_bound, varah_entry_bound,
    BoundKind, DecayBound, DmsConstant, QrParams,
};
use crate::error::{Error, Result};
use crate::mtx::read_matrix_market;
use crate::oracle::{dense_inverse, symmetric_spectrum};

pub const CSV_HEADER: [&str; 9] = ["i", "j", "exact", "lu", "qr", "varah", "dms", "frommer", "chui_hasson"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExperimentName {
    Ex1a,
    Ex1b,
    Ex1c,
    Ex1d,
    Ex2,
    Ex3,
    Ex4a,
    Ex4b,
    Ex5,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 9] = [
        Self::Ex1a,
        Self::Ex1b,
        Self::Ex1c,
        Self::Ex1d,
        Self::Ex2,
        Self::Ex3,
        Self::Ex4a,
        Self::Ex4b,
        Self::Ex5,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Ex1a => "ex1a",
            Self::Ex1b => "ex1b",
            Self::Ex1c => "ex1c",
            Self::Ex1d => "ex1d",
            Self::Ex2 => "ex2",
            Self::Ex3 => "ex3",
            Self::Ex4a => "ex4a",
            Self::Ex4b => "ex4b",
            Self::Ex5 => "ex5",
        }
    }
}

impl fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExperimentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|e| e.as_str() == s)
            .ok_or_else(|| Error::Experiment(s.to_string(), "unknown experiment name".into()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentSpec {
    pub name: ExperimentName,
    pub seed: u64,
    /// 1-based probe column.
    pub column: usize,
    /// Matrix Market input, required by `ex3`.
    pub input_path: Option<PathBuf>,
    /// Lower bandwidth for `ex5` (1 or 2, default 1).
    pub bandwidth: Option<usize>,
}

impl ExperimentSpec {
    pub fn new(name: ExperimentName) -> Self {
        Self {
            name,
            seed: 1,
            column: 1,
            input_path: None,
            bandwidth: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_column(mut self, column: usize) -> Self {
        self.column = column;
        self
    }

    pub fn with_input(mut self, path: impl Into<PathBuf>) -> Self {
        self.input_path = Some(path.into());
        self
    }

    pub fn with_bandwidth(mut self, r: usize) -> Self {
        self.bandwidth = Some(r);
        self
    }

    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Experiment(self.name.to_string(), message.into())
    }
}

/// Builds the test matrix of an experiment. Deterministic in `spec.seed`.
pub fn generate(spec: &ExperimentSpec) -> Result<BandedMatrix> {
    if spec.bandwidth.is_some() && spec.name != ExperimentName::Ex5 {
        return Err(spec.fail("--bandwidth only applies to ex5"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    match spec.name {
        ExperimentName::Ex1a => toeplitz_ex1(),
        ExperimentName::Ex1b => {
            let mut a = toeplitz_ex1()?;
            a.set(20, 20, 100.0)?;
            Ok(a)
        }
        ExperimentName::Ex1c => {
            let mut a = toeplitz_ex1()?;
            for k in 1..=25 {
                a.set(k, k, a.get(k, k) + 100.0)?;
            }
            Ok(a)
        }
        ExperimentName::Ex1d => {
            let mut a = toeplitz_ex1()?;
            for k in [10, 11, 12] {
                a.set(k, k, -a.get(k, k))?;
            }
            Ok(a)
        }
        ExperimentName::Ex2 => ex2(),
        ExperimentName::Ex3 => {
            let path = spec
                .input_path
                .as_deref()
                .ok_or_else(|| spec.fail("requires --input <matrix.mtx>"))?;
            ex3(path)
        }
        ExperimentName::Ex4a => Ok(ex4a(&mut rng)),
        ExperimentName::Ex4b => Ok(ex4b(&mut rng)),
        ExperimentName::Ex5 => {
            let r = spec.bandwidth.unwrap_or(1);
            if !(1..=2).contains(&r) {
                return Err(spec.fail(format!("bandwidth {r} not in 1..=2")));
            }
            ex5(r)
        }
    }
}

fn toeplitz_ex1() -> Result<BandedMatrix> {
    make_banded(50, 3, 3, |i, j| if i == j { 6.25 } else { 0.25 })
}

fn ex2() -> Result<BandedMatrix> {
    let base = toeplitz_ex1()?;
    let mut d = base.as_dense().clone();
    // 1-based views of the three modifications
    let mut scale_col = |rows: std::ops::RangeInclusive<usize>, col: usize, s: f64| {
        for i in rows {
            d[(i - 1, col - 1)] *= s;
        }
    };
    scale_col(21..=23, 20, 25.0);
    scale_col(22..=24, 21, 25.0);
    scale_col(1..=33, 30, 0.01);
    d[(19, 19)] = -100.0;
    d[(20, 20)] = -100.0;
    d[(29, 29)] = 1.0;
    BandedMatrix::from_dense(&d, 3, 3)
}

fn ex3(path: &Path) -> Result<BandedMatrix> {
    let a = read_matrix_market(path)?;
    let n = a.n();
    let mut d = a.as_dense().clone();
    for k in 0..n {
        d[(k, k)] += if k < n / 2 { 1.0 } else { -1.0 };
    }
    BandedMatrix::from_dense(&d, a.r_lower(), a.r_upper())
}

const EX4_N: usize = 100;
const EX4_R: usize = 5;
const EX4_NOISE: f64 = 1e-3;
const EX4_TARGET_RATIO: f64 = 0.95;

/// Uniform noise on every off-diagonal entry of a one-sided matrix of order 5.
fn ex4_noise(rng: &mut ChaCha8Rng) -> BandedMatrix {
    BandedMatrix::from_fn(EX4_N, EX4_R, EX4_N - 1, |i, j| {
        if i == j {
            0.0
        } else {
            rng.gen_range(-EX4_NOISE..=EX4_NOISE)
        }
    })
    .expect("valid bandwidths")
}

fn off_mass(a: &BandedMatrix, k: usize) -> f64 {
    a.column_rows(k)
        .filter(|&i| i != k)
        .map(|i| a.get(i, k).abs())
        .sum()
}

/// Conjugate pairs `x ± iy` near the ellipse with semiaxes 2 and 1, realized
/// as 2×2 blocks `[[x, y], [-y, x]]` on the diagonal.
fn ex4a(rng: &mut ChaCha8Rng) -> BandedMatrix {
    let mut a = ex4_noise(rng);
    for b in 0..EX4_N / 2 {
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        let rho = 1.0 + rng.gen_range(-0.05..0.05);
        let (x, y) = (2.0 * rho * theta.cos(), rho * theta.sin());
        let (k, l) = (2 * b + 1, 2 * b + 2);
        a.set(k, l, y).unwrap();
        a.set(l, k, -y).unwrap();
        // keep both diagonal entries equal so the block stays a scaled rotation
        let need = off_mass(&a, k).max(off_mass(&a, l)) / EX4_TARGET_RATIO;
        let sign = if x < 0.0 { -1.0 } else { 1.0 };
        let diag = sign * x.abs().max(need);
        a.set(k, k, diag).unwrap();
        a.set(l, l, diag).unwrap();
    }
    a
}

/// Real spectrum with `|λ|` log-uniform in `[1, 10^4]` and random signs.
fn ex4b(rng: &mut ChaCha8Rng) -> BandedMatrix {
    let mut a = ex4_noise(rng);
    for k in 1..=EX4_N {
        let magnitude = 10f64.powf(4.0 * rng.gen_range(0.0..=1.0));
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let need = off_mass(&a, k) / EX4_TARGET_RATIO;
        a.set(k, k, sign * magnitude.max(need)).unwrap();
    }
    a
}

fn ex5(r: usize) -> Result<BandedMatrix> {
    let n = 20;
    make_banded(n, r, n - 1, |i, j| {
        if i == j {
            if i <= n / 2 {
                12.0
            } else {
                -12.0
            }
        } else if i > j {
            0.5
        } else {
            0.5 * 0.5f64.powi((j - i) as i32)
        }
    })
}

fn generator_notes(spec: &ExperimentSpec) -> Vec<(String, String)> {
    let note = |s: &str| vec![("note".to_string(), s.to_string())];
    match spec.name {
        ExperimentName::Ex2 => note(
            "intended spectrum: two complex conjugate eigenvalues near -100, one near 1, \
             the rest in [5.6, 7.7] (not verified)",
        ),
        ExperimentName::Ex3 => note("diagonal shifted by +1 on the first half, -1 on the second"),
        ExperimentName::Ex4a => note(
            "reconstruction: eigenvalues near the ellipse with semiaxes 2 (real) and 1 (imaginary), \
             diagonal enlarged where needed for a column ratio of at most 0.95",
        ),
        ExperimentName::Ex4b => note(
            "reconstruction: real parts log-distributed in [-1e4, -1] U [1, 1e4], \
             diagonal enlarged where needed for a column ratio of at most 0.95",
        ),
        ExperimentName::Ex5 => note(
            "reconstruction: upper part 0.5*2^-(j-i), diagonal +12 on the first half and -12 on the second",
        ),
        _ => Vec::new(),
    }
}

/// One probed entry `(i, j)` of `A^{-1}`; bound cells are `None` where the
/// family is inapplicable.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub i: usize,
    pub j: usize,
    pub exact: f64,
    pub lu: Option<f64>,
    pub qr: Option<f64>,
    pub varah: Option<f64>,
    pub dms: Option<f64>,
    pub frommer: Option<f64>,
    pub chui_hasson: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub name: ExperimentName,
    pub n: usize,
    pub column: usize,
    pub rows: Vec<ReportRow>,
    /// Every bound family that applied.
    pub bounds: Vec<DecayBound>,
    /// Ordered key/value facts about the matrix and the bounds.
    pub metadata: Vec<(String, String)>,
}

impl ExperimentReport {
    pub fn bound(&self, kind: BoundKind) -> Option<&DecayBound> {
        self.bounds.iter().find(|b| b.kind == kind)
    }

    /// `false` when every bound family was inapplicable.
    pub fn any_bound_applicable(&self) -> bool {
        !self.bounds.is_empty()
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(CSV_HEADER).map_err(io::Error::from)?;
        for row in &self.rows {
            let cells = [
                row.i.to_string(),
                row.j.to_string(),
                fmt_float(row.exact),
                fmt_cell(row.lu),
                fmt_cell(row.qr),
                fmt_cell(row.varah),
                fmt_cell(row.dms),
                fmt_cell(row.frommer),
                fmt_cell(row.chui_hasson),
            ];
            w.write_record(&cells).map_err(io::Error::from)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is ASCII")
    }
}

/// Shortest representation that parses back to the same `f64`.
fn fmt_float(x: f64) -> String {
    format!("{x:e}")
}

fn fmt_cell(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), fmt_float)
}

pub fn emit_csv(report: &ExperimentReport, path: impl AsRef<Path>) -> Result<()> {
    report.write_csv(io::BufWriter::new(File::create(path)?))
}

/// Generates the matrix, inverts it with the dense oracle and evaluates every
/// bound family along column `spec.column`.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport> {
    let a = generate(spec)?;
    run_on_matrix(spec, &a)
}

/// Same as [`run_experiment`] on an explicit matrix.
pub fn run_on_matrix(spec: &ExperimentSpec, a: &BandedMatrix) -> Result<ExperimentReport> {
    let n = a.n();
    if spec.column == 0 || spec.column > n {
        return Err(spec.fail(format!("column {} outside 1..={n}", spec.column)));
    }
    let mut meta: Vec<(String, String)> = Vec::new();
    let mut put = |k: &str, v: String| meta.push((k.to_string(), v));

    put("experiment", spec.name.to_string());
    put("seed", spec.seed.to_string());
    put("n", n.to_string());
    put("r_lower", a.r_lower().to_string());
    put("r_upper", a.r_upper().to_string());
    put("one_sided", a.is_one_sided().to_string());
    let symmetric = a.is_symmetric();
    put("symmetric", symmetric.to_string());

    let dom = dominance_mu(a);
    put("mu", dom.mu.to_string());
    put("min_diag", dom.min_diag.to_string());
    put("dominance_satisfied", dom.satisfied.to_string());

    let mut bounds = Vec::new();
    match lu_bound(a) {
        Ok(b) => {
            put("lu_M", b.constant.unwrap().to_string());
            put("lu_gamma", b.rate.to_string());
            bounds.push(b);
        }
        Err(e) => put("lu", format!("NA ({e})")),
    }
    match varah_entry_bound(a) {
        Ok(b) => {
            put("varah", b.constant.unwrap().to_string());
            bounds.push(b);
        }
        Err(e) => put("varah", format!("NA ({e})")),
    }
    match qr_bound(a, QrParams::default()) {
        Ok((rep, b)) => {
            put("qr_C0", rep.c0.to_string());
            put("qr_K", rep.k.to_string());
            put("qr_M", rep.m.to_string());
            put("qr_gamma", rep.gamma.to_string());
            put("qr_k_threshold_met", rep.k_threshold_met.to_string());
            put("qr_x0_term_unchecked", rep.x0_term_unchecked.to_string());
            if rep.k_threshold_met {
                bounds.push(b);
            }
        }
        Err(e) => put("qr", format!("NA ({e})")),
    }

    if symmetric {
        spectral_bounds(a, &mut bounds, &mut put)?;
    } else {
        put("spectral_bounds", "NA (nonsymmetric)".into());
    }
    for (k, v) in generator_notes(spec) {
        put(&k, v);
    }

    let inv = dense_inverse(a.as_dense())?;
    let j = spec.column;
    let cell = |kind: BoundKind, i: usize| -> Option<f64> {
        bounds
            .iter()
            .find(|b| b.kind == kind)
            .and_then(|b| eval_bound(b, i, j))
    };
    let rows = (1..=n)
        .map(|i| {
            let dms = cell(BoundKind::DmsSpd, i).or_else(|| cell(BoundKind::DmsIndefinite, i));
            ReportRow {
                i,
                j,
                exact: inv[(i - 1, j - 1)].abs(),
                lu: cell(BoundKind::Lu, i),
                qr: cell(BoundKind::Qr, i),
                varah: cell(BoundKind::Varah, i),
                dms,
                frommer: cell(BoundKind::Frommer, i),
                chui_hasson: cell(BoundKind::ChuiHasson, i),
            }
        })
        .collect();

    Ok(ExperimentReport {
        name: spec.name,
        n,
        column: j,
        rows,
        bounds,
        metadata: meta,
    })
}

/// DMS, Frommer and Chui–Hasson bounds from the oracle spectrum.
fn spectral_bounds(
    a: &BandedMatrix,
    bounds: &mut Vec<DecayBound>,
    put: &mut impl FnMut(&str, String),
) -> Result<()> {
    let r = a.r_lower().max(a.r_upper());
    let eig = symmetric_spectrum(a.as_dense())?;
    let lo = eig.iter().fold(f64::INFINITY, |m, l| m.min(l.abs()));
    let hi = eig.iter().fold(0.0_f64, |m, l| m.max(l.abs()));
    let definite = eig[0] > 0.0;
    put("spectrum_abs_min", lo.to_string());
    put("spectrum_abs_max", hi.to_string());
    put("positive_definite", definite.to_string());
    if lo == 0.0 {
        put("spectral_bounds", "NA (singular)".into());
        return Ok(());
    }

    let dms = dms_rate(lo, hi, r, definite, DmsConstant::Default)?;
    put("dms_kind", dms.kind.to_string());
    put("dms_constant", dms.constant.unwrap().to_string());
    put("dms_constant_authoritative", dms.constant_authoritative.to_string());
    put("dms_rate", dms.rate.to_string());
    bounds.push(dms);

    if definite && eig.len() >= 2 {
        let fr = frommer_bound(eig[0], eig[eig.len() - 2], r)?;
        put("frommer_C", fr.constant.unwrap().to_string());
        put("frommer_rate", fr.rate.to_string());
        bounds.push(fr);
    } else {
        put("frommer", "NA (indefinite)".into());
    }

    let ch = chui_hasson_rate(lo, hi, r)?;
    put("chui_hasson_rate", ch.rate.to_string());
    put("chui_hasson_constant", "unknown (unit constant used)".into());
    bounds.push(ch);
    Ok(())
}

/// The diagonal test matrix `diag(d)` as a tridiagonal-declared matrix.
pub fn diagonal_matrix(d: &[f64]) -> Result<BandedMatrix> {
    make_banded(d.len(), 1, 1, |i, j| if i == j { d[i - 1] } else { 0.0 })
}
