mod common;

use common::*;
use mep_prove::contraction::{certify, certify_affine, certify_componentwise, radii_polynomials};
use mep_prove::Interval;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `[Y, Z0, Z1, Z2, Z3, Z4]` spread over the regimes met in practice.
fn random_bounds(rng: &mut impl Rng) -> [f64; 6] {
    [
        10f64.powf(rng.gen_range(-16.0..-1.0)),
        rng.gen_range(0.0..0.2),
        rng.gen_range(0.0..1.0),
        10f64.powf(rng.gen_range(-2.0..3.0)),
        10f64.powf(rng.gen_range(-2.0..4.0)),
        10f64.powf(rng.gen_range(-2.0..5.0)),
    ]
}

fn bounds_strategy() -> impl Strategy<Value = [f64; 6]> {
    any::<u64>().prop_map(|s| random_bounds(&mut ChaCha8Rng::seed_from_u64(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn certified_radius_satisfies_both_inequalities(b in bounds_strategy()) {
        let cert = certify(&bounds_of(&b));
        if cert.success {
            prop_assert_eq!(radii_signs(&b, cert.radius), (-1, -1), "at {:e}", cert.radius);
            prop_assert!(cert.reverify());
            prop_assert!(cert.r_min.lo() <= cert.radius && cert.radius <= cert.r_max.hi());
        }
    }

    #[test]
    fn larger_bounds_never_certify_more(b in bounds_strategy(), grow in prop::array::uniform6(1.0f64..3.0)) {
        let big: [f64; 6] = std::array::from_fn(|i| b[i] * grow[i]);
        if certify(&bounds_of(&big)).success {
            prop_assert!(certify(&bounds_of(&b)).success);
        }
    }

    #[test]
    fn componentwise_is_the_intersection(a in bounds_strategy(), b in bounds_strategy()) {
        let both = certify_componentwise(&[bounds_of(&a), bounds_of(&b)]);
        if both.success {
            prop_assert!(certify(&bounds_of(&a)).success && certify(&bounds_of(&b)).success);
            for x in [&a, &b] {
                prop_assert_eq!(radii_signs(x, both.radius), (-1, -1));
            }
        }
    }

    #[test]
    fn polynomials_enclose_their_floating_point_values(b in bounds_strategy(), r in 0f64..1e-2) {
        let pq = radii_polynomials(&bounds_of(&b));
        let (p, q) = radii_pq(&b, r);
        let tol = 1e-12 * (1.0 + p.abs() + q.abs());
        prop_assert!(pq.eval_p(r).inflate(tol).contains(p));
        prop_assert!(pq.eval_q(r).inflate(tol).contains(q));
    }
}

#[test]
fn certification_agrees_with_sign_scan() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let b = random_bounds(&mut rng);
        let cert = certify(&bounds_of(&b));
        assert_eq!(cert.success, sign_scan(&b, 1_000_000).is_some(), "{b:?}");
    }
}

/// For `P(r) = Y - (1 - Z1) r + Z2 r² / 2` the window is the pair of roots.
#[test]
fn affine_case_matches_quadratic_roots() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let y: f64 = 10f64.powf(rng.gen_range(-16.0..-4.0));
        let z1: f64 = rng.gen_range(0.0..0.9);
        let z2: f64 = 10f64.powf(rng.gen_range(-1.0..3.0));
        let cert = certify_affine(Interval::point(y), Interval::point(z1), Interval::point(z2), 1.0);
        let (a, bq, c) = (z2 / 2.0, -(1.0 - z1), y);
        let disc = bq * bq - 4.0 * a * c;
        assert_eq!(cert.success, disc > 0.0);
        if cert.success {
            // Stable root formulas.
            let q = -0.5 * (bq - disc.sqrt());
            let (r_lo, r_hi) = (c / q, q / a);
            assert!((cert.radius - r_lo).abs() <= 1e-9 * r_lo, "{} vs {r_lo}", cert.radius);
            assert!(cert.r_max.hi() <= r_hi * (1.0 + 1e-9) || cert.r_max.hi() <= 1.0);
        }
    }
}
