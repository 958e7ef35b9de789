//! Property suites over randomized inputs: exact inversion round-trips,
//! the gcd-sum/phi-convolution law, growth-certificate spot checks, and
//! tail-certification stability.

use divisum::identities;
use divisum::numtheory::PeriodicChar;
use divisum::seriescore::{
    lambert_sum, taylor_eval, weighted_product, CoeffSeq, DenomSign, ProductSign,
    TruncationPolicy,
};
use num_rational::Ratio;
use proptest::prelude::*;

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mobius_inversion_round_trip_exact(
        n in 1u64..=500,
        values in proptest::collection::vec(-1000i64..=1000, 501),
    ) {
        let tables = identities::tables();
        let a = |d: u64| Ratio::from_integer(values[d as usize % values.len()] as i128);
        let mut back = Ratio::from_integer(0i128);
        for d in tables.divisors(n) {
            back += tables.weighted_mobius_invert_rational(a, d) * Ratio::from_integer(d as i128);
        }
        prop_assert_eq!(back, a(n));
    }

    #[test]
    fn gcd_sum_equals_phi_convolution(
        n in 1u64..=600,
        values in proptest::collection::vec(-5.0f64..5.0, 64),
    ) {
        let tables = identities::tables();
        let f = |m: u64| values[(m % values.len() as u64) as usize];
        let direct: f64 = (1..=n).map(|k| f(gcd(n, k))).sum();
        let conv = tables.gcd_sum(f, n);
        prop_assert!((direct - conv).abs() <= 1e-9 * (1.0 + direct.abs()));
    }

    #[test]
    fn x2_reduces_to_legendre_mod_5(n in 1u64..=100_000) {
        let x2 = divisum::numtheory::x2_character(5, 1, 2).unwrap();
        prop_assert_eq!(x2.value(n), PeriodicChar::legendre5().value(n));
    }

    #[test]
    fn taylor_geometric_closed_form(q in 0.01f64..0.95, tol_exp in 6u32..12) {
        let tol = 10f64.powi(-(tol_exp as i32));
        let policy = TruncationPolicy::new(tol, 1 << 22);
        let r = taylor_eval(&CoeffSeq::one(), q, &policy).unwrap();
        prop_assert!(!r.saturated);
        prop_assert!((r.value - q / (1.0 - q)).abs() <= 10.0 * tol);
    }

    #[test]
    fn lambert_tail_certification(x in 0.2f64..3.0, tol_exp in 6u32..12) {
        let tol = 10f64.powi(-(tol_exp as i32));
        let tables = identities::tables();
        let phi = CoeffSeq::phi(tables);
        let policy = TruncationPolicy::new(tol, 1 << 22);
        let a = lambert_sum(&phi, DenomSign::Plus, x, &policy).unwrap();
        let tighter = TruncationPolicy::new(tol / 100.0, 1 << 22);
        let b = lambert_sum(&phi, DenomSign::Plus, x, &tighter).unwrap();
        // the certified tail bound must dominate the observed truncation drift
        prop_assert!(!a.saturated && !b.saturated);
        prop_assert!((a.value - b.value).abs() <= a.tail_bound + tol / 100.0);
        prop_assert!(a.tail_bound <= tol);
    }

    #[test]
    fn product_tail_certification(q in 0.05f64..0.9, w_scale in 0.1f64..3.0) {
        let tol = 1e-9;
        let w = CoeffSeq::new(
            move |n| w_scale * ((n % 7) as f64 - 3.0),
            divisum::seriescore::GrowthBound::new(4.0 * w_scale, 0.0),
            "bounded oscillating weight",
        );
        let policy = TruncationPolicy::new(tol, 1 << 22);
        let a = weighted_product(q, &w, ProductSign::Plus, &policy).unwrap();
        let tighter = TruncationPolicy::new(tol / 100.0, 1 << 22);
        let b = weighted_product(q, &w, ProductSign::Plus, &tighter).unwrap();
        prop_assert!((a.value - b.value).abs() <= a.tail_bound.abs() + 1e-12);
    }

    #[test]
    fn growth_certificates_hold(n in 1u64..=10_000) {
        let tables = identities::tables();
        for seq in [
            CoeffSeq::mu(tables.clone()),
            CoeffSeq::phi(tables.clone()),
            CoeffSeq::one(),
            CoeffSeq::identity(),
            CoeffSeq::delta(),
            CoeffSeq::poly(vec![0.5, -2.0, 3.25]),
            CoeffSeq::mobius_numerator(&CoeffSeq::phi(tables.clone()), tables.clone()),
        ] {
            let g = seq.growth();
            let bound = g.coeff * (n as f64).powf(g.power);
            prop_assert!(
                seq.eval(n).abs() <= bound + 1e-12,
                "{} violates its growth bound at n = {}: |{}| > {}",
                seq.description(), n, seq.eval(n), bound
            );
        }
    }
}

#[test]
fn eq3_property_on_random_polynomials() {
    // |lambert_sum(inverted numerator, -, x) - f(e^(-x))| <= 10 tol
    let tables = identities::tables();
    let tol = 1e-11;
    let policy = TruncationPolicy::new(tol, 1 << 22);
    let mut state = 0x243f6a8885a308d3u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    for _ in 0..40 {
        let deg = (1 + (next().abs() * 6.0) as usize).min(6);
        let coeffs: Vec<f64> = (0..deg).map(|_| next()).collect();
        let c = CoeffSeq::poly(coeffs.clone());
        let numer = CoeffSeq::mobius_numerator(&c, tables.clone());
        for &x in &[0.5, 1.0, 2.0] {
            let lhs = lambert_sum(&numer, DenomSign::Minus, x, &policy).unwrap();
            let q = (-x).exp();
            let f_val: f64 = coeffs
                .iter()
                .enumerate()
                .map(|(i, &ci)| ci * q.powi(i as i32 + 1))
                .sum();
            assert!(
                (lhs.value - f_val).abs() <= 10.0 * tol,
                "x={x} coeffs={coeffs:?}: {} vs {f_val}",
                lhs.value
            );
        }
    }
}
