mod common;

use common::*;
use mep_prove::series::{
    cauchy_product, cheb_convolution, norm_cheb, norm_l1, perron_weights, Cheb, Ring, Taylor,
};
use mep_prove::Interval;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn coeffs(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10f64..10.0, 1..=n)
}

fn points(u: &[f64]) -> Vec<Interval> {
    u.iter().map(|&x| Interval::point(x)).collect()
}

/// Clenshaw evaluation of `a_0 + 2 sum a_k T_k(t)`.
fn clenshaw(a: &[f64], t: f64) -> f64 {
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in a.iter().skip(1).rev() {
        let b0 = 2.0 * c + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    a[0] + t * b1 - b2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn cauchy_product_matches_schoolbook(u in coeffs(8), v in coeffs(8)) {
        let n = u.len() + v.len() - 1;
        let got = cauchy_product(&points(&u), &points(&v), n);
        let want = schoolbook_cauchy(&points(&u), &points(&v), n);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!(g.overlaps(*w) && g.contains(w.mid()), "{g:?} vs {w:?}");
        }
    }

    #[test]
    fn cheb_convolution_matches_brute_force(u in coeffs(8), v in coeffs(8)) {
        let n = u.len() + v.len() - 1;
        let got = cheb_convolution(&points(&u), &points(&v), n);
        let want = brute_cheb(&points(&u), &points(&v), n);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!(g.overlaps(*w) && g.contains(w.mid()), "{g:?} vs {w:?}");
        }
    }

    #[test]
    fn cheb_product_is_pointwise_product(u in coeffs(8), v in coeffs(8), t in -1f64..1.0) {
        let p = Cheb::new(u.clone()).mul(&Cheb::new(v.clone()));
        let want = clenshaw(&u, t) * clenshaw(&v, t);
        let scale = norm_cheb(&u, 1.0).hi() * norm_cheb(&v, 1.0).hi() + 1.0;
        prop_assert!((p.eval(t) - want).abs() <= 1e-12 * scale);
    }

    #[test]
    fn cheb_eval_agrees_with_clenshaw(u in coeffs(12), t in -1f64..1.0) {
        let scale = norm_cheb(&u, 1.0).hi();
        prop_assert!((Cheb::new(u.clone()).eval(t) - clenshaw(&u, t)).abs() <= 1e-13 * scale.max(1.0));
        let (l, r) = Cheb::new(points(&u)).endpoints();
        prop_assert!(l.overlaps(Interval::point(clenshaw(&u, -1.0)).inflate(1e-13 * scale)));
        prop_assert!(r.overlaps(Interval::point(clenshaw(&u, 1.0)).inflate(1e-13 * scale)));
    }

    #[test]
    fn banach_algebra_inequalities(u in coeffs(10), v in coeffs(10), nu in 1.0f64..3.0) {
        let (ui, vi) = (points(&u), points(&v));
        let n = u.len() + v.len() - 1;
        let c = cheb_convolution(&ui, &vi, n);
        prop_assert!(norm_cheb(&c, nu).lo() <= norm_cheb(&ui, nu).hi() * norm_cheb(&vi, nu).hi());
        let t = cauchy_product(&ui, &vi, n);
        prop_assert!(norm_l1(&t).lo() <= norm_l1(&ui).hi() * norm_l1(&vi).hi());
    }

    #[test]
    fn norms_are_homogeneous_and_subadditive(u in coeffs(10), v in coeffs(10), a in -5f64..5.0, nu in 1.0f64..3.0) {
        let (ui, vi) = (points(&u), points(&v));
        let au: Vec<Interval> = ui.iter().map(|x| *x * a).collect();
        let na = norm_cheb(&au, nu);
        let want = norm_cheb(&ui, nu) * Interval::point(a.abs());
        prop_assert!(na.overlaps(want));
        let s = Cheb::new(ui.clone()).add(&Cheb::new(vi.clone()));
        prop_assert!(norm_cheb(&s.c, nu).lo() <= (norm_cheb(&ui, nu) + norm_cheb(&vi, nu)).hi());
    }

    #[test]
    fn taylor_eval_agrees_with_direct_sum(u in coeffs(10), t in -1f64..1.0) {
        let direct: f64 = u.iter().enumerate().map(|(n, c)| c * t.powi(n as i32)).sum();
        let scale: f64 = u.iter().map(|c| c.abs()).sum();
        prop_assert!((Taylor::new(u.clone()).eval(t) - direct).abs() <= 1e-13 * scale.max(1.0));
    }

    #[test]
    fn perron_vector_is_left_eigenvector(entries in prop::collection::vec(0.01f64..1.0, 16)) {
        let b = DMatrix::from_row_slice(4, 4, &entries);
        let (w, r) = perron_weights(&b).unwrap();
        prop_assert!(w.iter().all(|&x| x > 0.0));
        let wb = DMatrix::from_row_slice(1, 4, &w) * &b;
        for (j, &wj) in w.iter().enumerate() {
            prop_assert!((wb[(0, j)] - r * wj).abs() <= 1e-8 * r * wj.max(1e-3));
        }
    }
}
