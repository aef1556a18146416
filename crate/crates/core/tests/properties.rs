//! Property tests over random strongly dominant banded matrices. Dense
//! references come from nalgebra, independently of the crate's own oracle.

use greendecay::banded::{augment, dominance_mu, gershgorin_interval, make_banded, BandedMatrix, DominanceReport};
use greendecay::bounds::{
    chui_hasson_rate, dms_rate, eval_bound, lu_bound, lu_bound_from, varah_bound, DmsConstant,
};
use greendecay::dense::DenseMatrix;
use greendecay::green::{reconstruct_lower, transition_product, GreenGenerators};
use greendecay::lu::{inverse_generators_from_lu, p_tail_cross_check, schur_complement, structured_lu};
use greendecay::oracle::{dense_inverse, dense_lu_no_pivot, determinant, symmetric_spectrum};
use greendecay::verify::suffix_deviation;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn to_na(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

fn na_inverse(a: &BandedMatrix) -> DMatrix<f64> {
    to_na(a.as_dense()).try_inverse().expect("dominant matrices are invertible")
}

fn na_norm_1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Off-diagonal entries from `entries`, diagonal scaled so every column has
/// ratio exactly `mu` (columns without off-diagonal mass get `±1`).
fn build(n: usize, r: usize, r_upper: usize, mu: f64, entries: &[f64], signs: &[bool]) -> BandedMatrix {
    let mut a = make_banded(n, r, r_upper, |i, j| if i == j { 0.0 } else { entries[(i - 1) * n + j - 1] }).unwrap();
    for k in 1..=n {
        let mass: f64 = (1..=n).filter(|&i| i != k).map(|i| a.get(i, k).abs()).sum();
        let d = if mass > 0.0 { mass / mu } else { 1.0 };
        a.set(k, k, if signs[k - 1] { d } else { -d }).unwrap();
    }
    a
}

prop_compose! {
    fn dominant(max_n: usize, max_r: usize)
        (r in 1..=max_r, extra in 1..=max_n)
        (n in Just(r + extra), r in Just(r),
         upper in prop_oneof![Just(None), (0..=max_r).prop_map(Some)],
         mu in 0.02f64..0.97,
         entries in prop::collection::vec(-1.0f64..1.0, (r + extra) * (r + extra)),
         signs in prop::collection::vec(any::<bool>(), r + extra))
        -> BandedMatrix
    {
        let r_upper = upper.unwrap_or(n - 1);
        build(n, r, r_upper, mu, &entries, &signs)
    }
}

prop_compose! {
    fn symmetric_dominant(max_n: usize, max_r: usize)
        (r in 1..=max_r, extra in 1..=max_n)
        (n in Just(r + extra), r in Just(r),
         mu in 0.02f64..0.97,
         entries in prop::collection::vec(-1.0f64..1.0, (r + extra) * (r + extra)),
         signs in prop::collection::vec(any::<bool>(), r + extra))
        -> BandedMatrix
    {
        let sym: Vec<f64> = (0..n * n).map(|t| {
            let (i, j) = (t / n, t % n);
            entries[i.max(j) * n + i.min(j)]
        }).collect();
        build(n, r, r, mu, &sym, &signs)
    }
}

fn gens_of(a: &BandedMatrix) -> GreenGenerators {
    inverse_generators_from_lu(&structured_lu(a).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn factorization_reproduces_matrix(a in dominant(30, 5)) {
        let slu = structured_lu(&a).unwrap();
        let an = to_na(a.as_dense());
        let lr = to_na(&slu.l_factor()) * to_na(slu.r_factor());
        let norm = na_norm_1(&an);
        prop_assert!(na_norm_1(&(lr - &an)) <= 1e-11 * norm);
        let (_, r_dense) = dense_lu_no_pivot(a.as_dense()).unwrap();
        prop_assert!(slu.r_factor().max_abs_diff(&r_dense) <= 1e-10 * norm);
        let l = slu.l_factor();
        for i in 0..a.n() {
            prop_assert_eq!(l[(i, i)], 1.0);
            for j in 0..i {
                if i - j > a.r_lower() {
                    prop_assert_eq!(l[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn reconstruction_matches_inverse(a in dominant(30, 5)) {
        let inv = na_inverse(&a);
        let rec = reconstruct_lower(&gens_of(&a));
        let (n, r) = (a.n(), a.r_lower());
        let mut worst = 0.0_f64;
        for i in 1..=n {
            for j in 1..=n {
                let expected = i > n - r || j < i + r;
                prop_assert_eq!(rec.is_represented(i, j), expected);
                if expected {
                    worst = worst.max((rec.values[(i - 1, j - 1)] - inv[(i - 1, j - 1)]).abs());
                }
            }
        }
        prop_assert!(worst <= 1e-10 * na_norm_1(&inv), "{}", worst);
    }

    #[test]
    fn tail_generator_cross_check(a in dominant(30, 5)) {
        let slu = structured_lu(&a).unwrap();
        let gens = inverse_generators_from_lu(&slu).unwrap();
        let alt = p_tail_cross_check(&slu).unwrap();
        prop_assert!(gens.p_last().max_abs_diff(&alt) <= 1e-12 * gens.p_last().max_abs());
    }

    #[test]
    fn multipliers_and_pivots(a in dominant(30, 5)) {
        let mu = dominance_mu(&a).mu;
        let slu = structured_lu(&a).unwrap();
        let (n, r) = (a.n(), a.r_lower());
        for k in 1..=(n - r) {
            let f: f64 = slu.f(k).iter().map(|v| v.abs()).sum();
            prop_assert!(f <= mu * (1.0 + 1e-12) + 1e-15, "||f_{}|| = {} > {}", k, f, mu);
        }
        for k in 1..=n {
            prop_assert!((1.0 - mu * mu) * a.diag(k).abs() <= slu.gamma(k).abs() * (1.0 + 1e-12));
        }
        let m = lu_bound(&a).unwrap().constant.unwrap();
        let gens = inverse_generators_from_lu(&slu).unwrap();
        for i in 1..=(n - r) {
            prop_assert!(gens.p(i).max_abs() <= m * (1.0 + 1e-12));
        }
        prop_assert!(gens.p_last().max_abs() <= m * (1.0 + 1e-12));
    }

    #[test]
    fn schur_complements_every_step(a in dominant(16, 4)) {
        let mu = dominance_mu(&a).mu;
        let slu = structured_lu(&a).unwrap();
        let gens = inverse_generators_from_lu(&slu).unwrap();
        let inv = na_inverse(&a);
        let scale = na_norm_1(&inv);
        let (n, r) = (a.n(), a.r_lower());
        for ell in 1..=(n - r) {
            let s = schur_complement(&a, ell).unwrap();
            prop_assert_eq!(s.rows(), n - ell);
            // band structure survives elimination
            for i in 0..s.rows() {
                for j in 0..i {
                    if i - j > r {
                        prop_assert_eq!(s[(i, j)], 0.0);
                    }
                }
            }
            prop_assert!(DominanceReport::of_dense(&s).mu <= mu * (1.0 + 1e-12) + 1e-15);
            for j in 1..=s.rows() {
                prop_assert!(slu.gamma(ell + j).abs() <= (1.0 + mu * mu) * s[(j - 1, j - 1)].abs() * (1.0 + 1e-12));
            }
            // the trailing block of A^{-1} is the inverse of the Schur complement
            let s_inv = to_na(&s).try_inverse().unwrap();
            let tail = inv.view((ell, ell), (n - ell, n - ell)).into_owned();
            prop_assert!((s_inv - tail).amax() <= 1e-10 * scale);
            if s.rows() > r {
                let upper = if a.is_one_sided() { s.rows() - 1 } else { a.r_upper() };
                let sb = BandedMatrix::from_dense(&s, r, upper).unwrap();
                let dev = suffix_deviation(&gens, &gens_of(&sb), ell);
                prop_assert!(dev <= 1e-10 * scale, "ell = {}: {}", ell, dev);
            }
        }
    }

    #[test]
    fn lu_and_varah_bounds_are_sound(a in dominant(40, 6)) {
        let inv = na_inverse(&a);
        let b = lu_bound(&a).unwrap();
        let n = a.n();
        for j in 1..=n {
            for i in j..=n {
                let bound = eval_bound(&b, i, j).unwrap();
                prop_assert!(inv[(i - 1, j - 1)].abs() <= bound * (1.0 + 1e-12),
                    "({}, {}): {} > {}", i, j, inv[(i - 1, j - 1)].abs(), bound);
            }
        }
        prop_assert!(na_norm_1(&inv) <= varah_bound(&a).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn transition_products(a in dominant(24, 4)) {
        let gens = gens_of(&a);
        let mu = dominance_mu(&a).mu;
        let (n, r) = (a.n(), a.r_lower());
        let last = n - r + 1;
        let gamma = mu.powf(1.0 / r as f64);
        for k in 1..=(n - r) {
            prop_assert!(gens.a(k).norm_1() <= 1.0 + 1e-12);
        }
        for i in 1..=last {
            for j in 0..i {
                let t = transition_product(&gens, i, j);
                if i >= j + r {
                    let bound = gamma.powi((i - j - r) as i32);
                    prop_assert!(t.norm_1() <= bound * (1.0 + 1e-12) + 1e-15,
                        "T({}, {}) = {} > {}", i, j, t.norm_1(), bound);
                }
                for k in (j + 1)..i {
                    let split = transition_product(&gens, i, k)
                        .matmul(gens.a(k))
                        .matmul(&transition_product(&gens, k, j));
                    prop_assert!(split.max_abs_diff(&t) <= 1e-12 * (1.0 + t.max_abs()));
                }
            }
        }
    }

    #[test]
    fn dominance_matches_naive_sums(a in dominant(30, 5)) {
        let rep = dominance_mu(&a);
        let d = a.as_dense();
        let n = a.n();
        for k in 0..n {
            let naive: f64 = (0..n).filter(|&i| i != k).map(|i| d[(i, k)].abs()).sum();
            let got = rep.per_column_ratios[k] * d[(k, k)].abs();
            prop_assert!((got - naive).abs() <= 1e-12 * naive.max(1.0));
        }
        let aug = augment(&a);
        prop_assert_eq!(dominance_mu(&aug).mu, rep.mu);
        prop_assert_eq!(aug.is_one_sided(), a.is_one_sided());
    }

    #[test]
    fn symmetric_spectrum_in_gershgorin_interval(a in symmetric_dominant(20, 4)) {
        let (lo, hi) = gershgorin_interval(&a);
        prop_assume!(lo > 0.0);
        let eig = symmetric_spectrum(a.as_dense()).unwrap();
        let scale = hi.max(1.0);
        for l in eig {
            prop_assert!(l.abs() >= lo - 1e-10 * scale && l.abs() <= hi + 1e-10 * scale, "{} not in [{}, {}]", l, lo, hi);
        }
    }

    #[test]
    fn pivots_are_determinant_quotients(a in dominant(11, 3)) {
        let slu = structured_lu(&a).unwrap();
        let d = a.as_dense();
        let mut prev = 1.0;
        for k in 1..=a.n() {
            let det = determinant(&d.submatrix(0, 0, k, k));
            let g = det / prev;
            prop_assert!((g - slu.gamma(k)).abs() <= 1e-9 * slu.gamma(k).abs(), "k = {}", k);
            prev = det;
        }
    }

    #[test]
    fn inverse_is_an_involution(a in dominant(25, 4)) {
        let twice = dense_inverse(&dense_inverse(a.as_dense()).unwrap()).unwrap();
        prop_assert!(twice.max_abs_diff(a.as_dense()) <= 1e-10 * a.as_dense().max_abs());
    }

    #[test]
    fn bound_is_monotone_below_diagonal(mu in 0.0f64..0.99, d in 0.1f64..10.0, r in 1usize..6, j in 1usize..20) {
        let b = lu_bound_from(mu, d, r);
        let mut prev = f64::INFINITY;
        for i in j..j + 40 {
            let v = eval_bound(&b, i, j).unwrap();
            prop_assert!(v <= prev);
            prev = v;
        }
        prop_assert_eq!(eval_bound(&b, j, j), b.constant);
    }

    #[test]
    fn rate_comparisons(mu in 0.001f64..0.999, r in 1usize..8) {
        let gamma = mu.powf(1.0 / r as f64);
        let (lo, hi) = (1.0 - mu, 1.0 + mu);
        let l0 = dms_rate(lo, hi, r, true, DmsConstant::Default).unwrap().rate;
        let l1 = dms_rate(lo, hi, r, false, DmsConstant::Default).unwrap().rate;
        prop_assert!(l0 <= gamma * (1.0 + 1e-12));
        prop_assert!(l1 >= gamma * (1.0 - 1e-12));
        prop_assert!((l0.powi(r as i32) - (1.0 - (1.0 - mu * mu).sqrt()) / mu).abs() <= 1e-12);
        prop_assert!((l1 - mu.sqrt().powf(1.0 / r as f64)).abs() <= 1e-12);
        prop_assert!((chui_hasson_rate(lo, hi, r).unwrap().rate - l1).abs() <= 1e-12);
    }
}
