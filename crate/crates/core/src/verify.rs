//! Runtime invariant suites over a seeded random ensemble, used by
//! `greendecay verify`. Each suite compares structured results with the dense
//! oracle or checks one of the inequalities behind the LU bound.

use std::fmt;

use crate::banded::{dominance_mu, BandedMatrix, DominanceReport};
use crate::bounds::{eval_bound, lu_bound, varah_bound};
use crate::dense::DenseMatrix;
use crate::ensemble::{ensemble, EnsembleConfig};
use crate::error::Result;
use crate::green::{reconstruct_lower, GreenGenerators};
use crate::lu::{inverse_generators_from_lu, p_tail_cross_check, schur_complement, structured_lu, StructuredLU};
use crate::oracle::{dense_inverse, dense_lu_no_pivot};

/// Slack for floating point comparisons of inequalities.
const SLACK: f64 = 1e-12;

#[derive(Clone, Debug, Default)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub instances: usize,
    /// Largest normalized deviation or ratio seen (suite specific).
    pub worst: f64,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn record(&mut self, value: f64, ok: bool, what: impl FnOnce() -> String) {
        self.worst = self.worst.max(value);
        if !ok {
            self.failures.push(what());
        }
    }
}

impl fmt::Display for SuiteOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<22} instances={:<4} worst={:.3e}",
            self.name, self.instances, self.worst
        )?;
        for msg in self.failures.iter().take(5) {
            write!(f, "\n    {msg}")?;
        }
        if self.failures.len() > 5 {
            write!(f, "\n    ... {} more", self.failures.len() - 5)?;
        }
        Ok(())
    }
}

/// Schur complement step counts probed per instance: both ends, the middle
/// and the step just before the tail.
pub fn sample_steps(n: usize, r: usize) -> Vec<usize> {
    let last = n - r;
    let mut steps = vec![1, 2, last / 2, last.saturating_sub(1), last];
    steps.retain(|&l| (1..=last).contains(&l));
    steps.sort_unstable();
    steps.dedup();
    steps
}

/// Trailing principal block of `A^{-1}` checked for the suffix property when
/// the Schur complement is too small to carry generators of its own.
fn trailing_block(m: &DenseMatrix, size: usize) -> DenseMatrix {
    let n = m.rows();
    m.submatrix(n - size, n - size, size, size)
}

fn schur_as_banded(a: &BandedMatrix, s: &DenseMatrix) -> Result<BandedMatrix> {
    let r_upper = if a.is_one_sided() { s.rows() - 1 } else { a.r_upper() };
    BandedMatrix::from_dense(s, a.r_lower(), r_upper)
}

/// Largest entrywise difference between the generators of `sub` and the
/// `ℓ`-shifted suffix of `full`.
pub fn suffix_deviation(full: &GreenGenerators, sub: &GreenGenerators, ell: usize) -> f64 {
    let count = sub.n() - sub.r();
    let mut dev = full.p_last().max_abs_diff(sub.p_last());
    for i in 1..=count {
        dev = dev
            .max(full.p(i + ell).max_abs_diff(sub.p(i)))
            .max(full.q(i + ell).max_abs_diff(sub.q(i)))
            .max(full.a(i + ell).max_abs_diff(sub.a(i)));
    }
    dev
}

struct Instance {
    a: BandedMatrix,
    dom: DominanceReport,
    slu: StructuredLU,
    gens: GreenGenerators,
    inv: DenseMatrix,
}

fn prepare(a: BandedMatrix) -> Result<Instance> {
    let dom = dominance_mu(&a);
    let slu = structured_lu(&a)?;
    let gens = inverse_generators_from_lu(&slu)?;
    let inv = dense_inverse(a.as_dense())?;
    Ok(Instance { a, dom, slu, gens, inv })
}

fn factorization(inst: &Instance, out: &mut SuiteOutcome, id: usize) -> Result<()> {
    let a = inst.a.as_dense();
    let norm = a.norm_1();
    let (_, r_dense) = dense_lu_no_pivot(a)?;
    let dev = inst.slu.r_factor().max_abs_diff(&r_dense) / norm;
    out.record(dev, dev <= 1e-10, || format!("#{id}: |R - R_dense| = {dev:.3e} ||A||_1"));
    let lr = inst.slu.l_factor().matmul(inst.slu.r_factor());
    let res = lr.sub(a).norm_1() / norm;
    out.record(res, res <= 1e-11, || format!("#{id}: ||LR - A||_1 = {res:.3e} ||A||_1"));
    Ok(())
}

fn reconstruction(inst: &Instance, out: &mut SuiteOutcome, id: usize) {
    let rec = reconstruct_lower(&inst.gens);
    let dev = rec.max_deviation(&inst.inv) / inst.inv.norm_1();
    out.record(dev, dev <= 1e-10, || format!("#{id}: deviation {dev:.3e} ||A^-1||_1"));
}

fn tail_cross_check(inst: &Instance, out: &mut SuiteOutcome, id: usize) -> Result<()> {
    let alt = p_tail_cross_check(&inst.slu)?;
    let rec = inst.gens.p_last();
    let dev = rec.max_abs_diff(&alt) / rec.max_abs().max(f64::MIN_POSITIVE);
    out.record(dev, dev <= 1e-12, || format!("#{id}: relative deviation {dev:.3e}"));
    Ok(())
}

fn pivot_checks(inst: &Instance, out: &mut SuiteOutcome, id: usize) {
    let (a, slu, mu) = (&inst.a, &inst.slu, inst.dom.mu);
    let (n, r) = (a.n(), a.r_lower());
    for k in 1..=(n - r) {
        let fnorm: f64 = slu.f(k).iter().map(|v| v.abs()).sum();
        out.record(fnorm, fnorm <= mu * (1.0 + SLACK) + SLACK, || {
            format!("#{id}: ||f_{k}||_1 = {fnorm} > mu = {mu}")
        });
    }
    for k in 1..=n {
        let lower = (1.0 - mu * mu) * a.diag(k).abs();
        let g = slu.gamma(k).abs();
        out.record(0.0, lower <= g * (1.0 + SLACK), || {
            format!("#{id}: (1-mu^2)|A({k},{k})| = {lower} > |gamma_{k}| = {g}")
        });
    }
    let m = lu_bound(a).ok().and_then(|b| b.constant);
    if let Some(m) = m {
        for i in 1..=(n - r) {
            let pn = inst.gens.p(i).max_abs();
            out.record(0.0, pn <= m * (1.0 + SLACK), || format!("#{id}: max |p({i})| = {pn} > M = {m}"));
        }
        // rows of P_last are p(N-r+1), ..., p(N)
        let pn = inst.gens.p_last().max_abs();
        out.record(0.0, pn <= m * (1.0 + SLACK), || format!("#{id}: max |P_last| = {pn} > M = {m}"));
    }
}

fn schur_suite(inst: &Instance, dom_out: &mut SuiteOutcome, suffix_out: &mut SuiteOutcome, id: usize) -> Result<()> {
    let (a, mu) = (&inst.a, inst.dom.mu);
    let (n, r) = (a.n(), a.r_lower());
    for ell in sample_steps(n, r) {
        let s = schur_complement(a, ell)?;
        let smu = DominanceReport::of_dense(&s).mu;
        dom_out.record(smu - mu, smu <= mu * (1.0 + SLACK) + SLACK, || {
            format!("#{id}: mu(S_{ell}) = {smu} > mu = {mu}")
        });
        for j in 1..=s.rows() {
            let g = inst.slu.gamma(ell + j).abs();
            let d = (1.0 + mu * mu) * s[(j - 1, j - 1)].abs();
            dom_out.record(0.0, g <= d * (1.0 + SLACK), || {
                format!("#{id}: |gamma_{}| = {g} > (1+mu^2)|S_{ell}({j},{j})| = {d}", ell + j)
            });
        }

        let scale = inst.inv.norm_1();
        let dev = if s.rows() > r {
            let sb = schur_as_banded(a, &s)?;
            let sub = inverse_generators_from_lu(&structured_lu(&sb)?)?;
            suffix_deviation(&inst.gens, &sub, ell)
        } else {
            let s_inv = dense_inverse(&s)?;
            inst.gens.p_last().max_abs_diff(&s_inv).max(trailing_block(&inst.inv, r).max_abs_diff(&s_inv))
        } / scale;
        suffix_out.record(dev, dev <= 1e-10, || format!("#{id}: ell = {ell}, deviation {dev:.3e}"));
    }
    Ok(())
}

fn soundness(inst: &Instance, out: &mut SuiteOutcome, varah_out: &mut SuiteOutcome, id: usize) -> Result<()> {
    let n = inst.a.n();
    let b = lu_bound(&inst.a)?;
    for j in 1..=n {
        for i in j..=n {
            let exact = inst.inv[(i - 1, j - 1)].abs();
            let bound = eval_bound(&b, i, j).expect("lower triangle");
            let ratio = if bound > 0.0 { exact / bound } else if exact == 0.0 { 0.0 } else { f64::INFINITY };
            out.record(ratio, exact <= bound * (1.0 + SLACK), || {
                format!("#{id}: |A^-1({i},{j})| = {exact:e} > {bound:e}")
            });
        }
    }
    let v = varah_bound(&inst.a)?;
    let norm = inst.inv.norm_1();
    varah_out.record(norm / v, norm <= v * (1.0 + SLACK), || format!("#{id}: ||A^-1||_1 = {norm} > {v}"));
    Ok(())
}

/// Runs every suite on `count` instances drawn from `seed`.
pub fn run_suites(seed: u64, count: usize, cfg: &EnsembleConfig) -> Result<Vec<SuiteOutcome>> {
    let mut fact = SuiteOutcome::new("factorization");
    let mut recon = SuiteOutcome::new("inverse-reconstruction");
    let mut tail = SuiteOutcome::new("tail-cross-check");
    let mut pivots = SuiteOutcome::new("pivots-and-multipliers");
    let mut schur = SuiteOutcome::new("schur-dominance");
    let mut suffix = SuiteOutcome::new("generator-suffix");
    let mut sound = SuiteOutcome::new("lu-bound-soundness");
    let mut varah = SuiteOutcome::new("varah-soundness");

    for (id, a) in ensemble(seed, count, cfg).into_iter().enumerate() {
        let inst = prepare(a)?;
        factorization(&inst, &mut fact, id)?;
        reconstruction(&inst, &mut recon, id);
        tail_cross_check(&inst, &mut tail, id)?;
        pivot_checks(&inst, &mut pivots, id);
        schur_suite(&inst, &mut schur, &mut suffix, id)?;
        soundness(&inst, &mut sound, &mut varah, id)?;
    }
    let mut all = vec![fact, recon, tail, pivots, schur, suffix, sound, varah];
    for s in &mut all {
        s.instances = count;
    }
    Ok(all)
}
