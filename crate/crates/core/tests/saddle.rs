use num_bigint::BigUint;
use tstable_core::exact_counts::{exact_C, CoefficientRow};
use tstable_core::poly_saddle::{approx_log_C, contour_log_C, in_accuracy_window, DEFAULT_CONTOUR_NODES};
use tstable_core::scalar::ln_binomial;

// C_{2m}(1, k) = C(k, 2m): each vertex takes degree 0 or 1.
fn ln_binom_oracle(k: usize, two_m: usize) -> f64 {
    ln_binomial::<f64>(k as u64, two_m as u64)
}

#[test]
fn t1_symmetry_is_binomial() {
    for k in 1..=60usize {
        for m in 0..=k / 2 {
            let want: BigUint = num_integer::binomial(BigUint::from(k), BigUint::from(2 * m));
            let got = exact_C(1, k, m).unwrap();
            assert!(got.is_integer());
            assert_eq!(got.numer(), &want, "k = {k}, m = {m}");
        }
    }
}

#[test]
fn t1_saddle_error_shrinks_along_k() {
    let mut last = f64::INFINITY;
    for k in [100usize, 400, 1600] {
        let two_m = k - (k as f64).sqrt().ceil() as usize;
        let m = two_m / 2;
        let a = approx_log_C::<f64>(1, k, m).unwrap();
        assert!(a.in_window, "k = {k}");
        let err = (a.log_value - ln_binom_oracle(k, 2 * m)).exp() - 1.0;
        assert!(err.abs() < last, "k = {k}: error {err} after {last}");
        last = err.abs();
    }
    assert!(last < 0.01);
}

#[test]
fn saddle_ratio_tends_to_one_in_window() {
    for t in 2..=3usize {
        let mut errors = Vec::new();
        for k in [100usize, 200, 400, 800] {
            let row = CoefficientRow::new(t, k).unwrap();
            let worst = (1..row.max_m())
                .filter(|&m| in_accuracy_window(t, k, m))
                .map(|m| {
                    let a = approx_log_C::<f64>(t, k, m).unwrap().log_value;
                    (a - row.ln_c(m)).abs()
                })
                .fold(0.0f64, f64::max);
            errors.push(worst);
        }
        assert!(errors.windows(2).all(|w| w[1] < w[0]), "t = {t}: {errors:?}");
        assert!(*errors.last().unwrap() < 0.05, "t = {t}: {errors:?}");
    }
}

#[test]
fn contour_matches_exact_up_to_tk_60() {
    for t in 1..=60usize {
        for k in 1..=60 / t {
            for m in 0..=t * k / 2 {
                let exact = exact_C(t, k, m).unwrap().ln_value();
                let c = contour_log_C::<f64>(t, k, m, DEFAULT_CONTOUR_NODES).unwrap();
                assert!(
                    ((c - exact).exp() - 1.0).abs() <= 1e-6,
                    "t = {t}, k = {k}, m = {m}: {c} vs {exact}"
                );
            }
        }
    }
}

#[test]
fn contour_examples() {
    let v = contour_log_C::<f64>(1, 10, 3, DEFAULT_CONTOUR_NODES).unwrap().exp();
    assert!((v / 210.0 - 1.0).abs() < 1e-6);
    let v = contour_log_C::<f64>(2, 2, 2, DEFAULT_CONTOUR_NODES).unwrap().exp();
    assert!((v / 0.25 - 1.0).abs() < 1e-6);
    let exact = exact_C(3, 6, 4).unwrap().to_f64();
    let v = contour_log_C::<f64>(3, 6, 4, DEFAULT_CONTOUR_NODES).unwrap().exp();
    assert!((v / exact - 1.0).abs() < 1e-6);
}
