//! Seeded random matrices satisfying the strong dominance condition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::banded::BandedMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnsembleConfig {
    pub max_n: usize,
    pub max_r: usize,
    /// Largest two-sided upper bandwidth.
    pub max_r_upper: usize,
    /// Probability that an instance is one-sided.
    pub one_sided_prob: f64,
    /// Range the target `μ` is drawn from.
    pub mu_range: (f64, f64),
}

impl Default for EnsembleConfig {
    fn default() -> Self {
        Self {
            max_n: 200,
            max_r: 8,
            max_r_upper: 8,
            one_sided_prob: 0.3,
            mu_range: (0.05, 0.95),
        }
    }
}

/// One random instance: mixed-sign entries, diagonal scaled so that every
/// column has off-diagonal mass exactly `μ_target |A(k,k)|` (or less, for
/// columns with no off-diagonal mass).
pub fn random_dominant(rng: &mut impl Rng, cfg: &EnsembleConfig) -> BandedMatrix {
    let r = rng.gen_range(1..=cfg.max_r);
    let n = rng.gen_range((r + 1)..=cfg.max_n.max(r + 1));
    let r_upper = if rng.gen_bool(cfg.one_sided_prob) {
        n - 1
    } else {
        rng.gen_range(0..=cfg.max_r_upper)
    };
    let mu = rng.gen_range(cfg.mu_range.0..cfg.mu_range.1);
    let sparsity = rng.gen_range(0.0..0.5);

    let mut a = BandedMatrix::from_fn(n, r, r_upper, |i, j| {
        if i == j || rng.gen_bool(sparsity) {
            0.0
        } else {
            rng.gen_range(-1.0..1.0)
        }
    })
    .expect("bandwidths are valid");

    for k in 1..=n {
        let mass: f64 = a
            .column_rows(k)
            .filter(|&i| i != k)
            .map(|i| a.get(i, k).abs())
            .sum();
        let magnitude = if mass > 0.0 {
            mass / mu
        } else {
            rng.gen_range(0.5..2.0)
        };
        let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        a.set(k, k, sign * magnitude).expect("diagonal is in band");
    }
    a
}

/// `count` instances from a ChaCha stream seeded with `seed`.
pub fn ensemble(seed: u64, count: usize, cfg: &EnsembleConfig) -> Vec<BandedMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_dominant(&mut rng, cfg)).collect()
}
