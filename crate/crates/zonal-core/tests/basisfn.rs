//! Oracle and property tests for quadrature and the special-function basis.

use approx::assert_abs_diff_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zonal_core::basisfn::{
    assoc_legendre, gauss_legendre, gegenbauer, legendre_norm_sq, BasisFunction,
};

#[test]
fn gauss_legendre_integrates_polynomials_exactly() {
    // The n-point rule is exact for degree <= 2n - 1.
    let quad = gauss_legendre(6);
    for deg in 0..=11u32 {
        let exact = if deg % 2 == 0 {
            2.0 / (deg as f64 + 1.0)
        } else {
            0.0
        };
        let num = quad.integrate(|s| s.powi(deg as i32));
        assert_abs_diff_eq!(num, exact, epsilon = 1e-14);
    }
}

#[test]
fn gauss_legendre_rule_structure() {
    for n in [1, 2, 7, 64, 301] {
        let quad = gauss_legendre(n);
        assert_eq!(quad.len(), n);
        let wsum: f64 = quad.weights.iter().sum();
        assert_abs_diff_eq!(wsum, 2.0, epsilon = 1e-13);
        assert!(quad.weights.iter().all(|&w| w > 0.0));
        // Strictly increasing, exactly antisymmetric nodes.
        for j in 1..n {
            assert!(quad.nodes[j] > quad.nodes[j - 1]);
        }
        for j in 0..n {
            assert_eq!(quad.nodes[j], -quad.nodes[n - 1 - j]);
            assert_eq!(quad.weights[j], quad.weights[n - 1 - j]);
        }
    }
}

#[test]
fn gauss_legendre_doubling_oracle() {
    // Smooth non-polynomial integrand with a known antiderivative.
    let exact = std::f64::consts::E - 1.0 / std::f64::consts::E;
    let v20 = gauss_legendre(20).integrate(f64::exp);
    let v40 = gauss_legendre(40).integrate(f64::exp);
    assert_abs_diff_eq!(v20, exact, epsilon = 1e-13);
    assert_abs_diff_eq!(v40, exact, epsilon = 1e-13);
    assert_abs_diff_eq!(v20, v40, epsilon = 1e-13);
}

#[test]
fn assoc_legendre_degree_three_closed_forms() {
    // Ferrers functions with the Condon-Shortley phase:
    //   P_3^1 = (3/2)(1 - 5s^2) sqrt(1-s^2)
    //   P_3^2 = 15 s (1 - s^2)
    //   P_3^3 = -15 (1 - s^2)^{3/2}
    for &s in &[-0.9, -0.3, 0.0, 0.4, 0.8, 1.0] {
        let w = (1.0 - s * s as f64).sqrt();
        assert_abs_diff_eq!(
            assoc_legendre(3, 1, s).unwrap(),
            1.5 * (1.0 - 5.0 * s * s) * w,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            assoc_legendre(3, 2, s).unwrap(),
            15.0 * s * (1.0 - s * s),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            assoc_legendre(3, 3, s).unwrap(),
            -15.0 * w.powi(3),
            epsilon = 1e-12
        );
    }
}

#[test]
fn assoc_legendre_p41_rational_oracle() {
    // P_4^1(s) = -(5/2)(7s^3 - 3s) sqrt(1-s^2); at s = 3/10 the prefactor is
    // exactly -(5/2)(7*27/1000 - 9/10) = 711/400.
    let s: f64 = 0.3;
    let expected = 711.0 / 400.0 * (1.0 - s * s).sqrt();
    assert_abs_diff_eq!(assoc_legendre(4, 1, s).unwrap(), expected, epsilon = 1e-13);
}

#[test]
fn assoc_legendre_orthogonality() {
    let quad = gauss_legendre(64); // exact for polynomial degree <= 127
    for k in 1..=3u32 {
        for l in k.max(2)..=40 {
            for m in l..=40 {
                let integral = quad.integrate(|s| {
                    assoc_legendre(l, k, s).unwrap() * assoc_legendre(m, k, s).unwrap()
                });
                let expected = if l == m {
                    legendre_norm_sq(l, k).unwrap()
                } else {
                    0.0
                };
                let scale = (legendre_norm_sq(l, k).unwrap() * legendre_norm_sq(m, k).unwrap())
                    .sqrt();
                assert!(
                    (integral - expected).abs() <= 1e-10 * scale,
                    "l={l} m={m} k={k}: {integral} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn assoc_legendre_parity() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    for _ in 0..50 {
        let s: f64 = rng.gen_range(-1.0..1.0);
        for &(l, k) in &[(2u32, 1u32), (3, 1), (5, 2), (8, 2), (11, 3), (20, 1)] {
            let sign = if (l + k) % 2 == 0 { 1.0 } else { -1.0 };
            let plus = assoc_legendre(l, k, s).unwrap();
            let minus = assoc_legendre(l, k, -s).unwrap();
            assert_abs_diff_eq!(minus, sign * plus, epsilon = 1e-11 * (1.0 + plus.abs()));
        }
    }
}

#[test]
fn legendre_norm_matches_quadrature() {
    let quad = gauss_legendre(64);
    for &(l, k) in &[(2u32, 1u32), (3, 2), (7, 3), (15, 1), (30, 2)] {
        let num = quad.integrate(|s| assoc_legendre(l, k, s).unwrap().powi(2));
        let exact = legendre_norm_sq(l, k).unwrap();
        assert!((num - exact).abs() <= 1e-12 * exact, "l={l} k={k}");
    }
}

#[test]
fn basis_function_is_unit_normalized() {
    let quad = gauss_legendre(64);
    let f = BasisFunction::new(9, 2).unwrap();
    let nrm = quad.integrate(|s| f.eval(s).powi(2));
    assert_abs_diff_eq!(nrm, 1.0, epsilon = 1e-12);
}

#[test]
fn assoc_legendre_domain_errors() {
    assert!(assoc_legendre(2, 3, 0.5).is_err()); // order exceeds degree
    assert!(assoc_legendre(3, 1, 1.5).is_err()); // s outside [-1, 1]
    assert!(legendre_norm_sq(1, 2).is_err());
}

#[test]
fn gegenbauer_low_orders() {
    // Rodrigues normalization: G_0 = 1, G_1 = -(2b+1)s, and for n = 2
    // expanding the Rodrigues formula by hand gives
    // G_2 = -2m(1-s^2) + 4m(m-1)s^2 with m = b + 3/2.
    for &beta in &[0.5, 1.5, 2.5, 4.0] {
        for &s in &[-0.7, 0.0, 0.4, 0.9] {
            assert_abs_diff_eq!(gegenbauer(0, beta, s), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(
                gegenbauer(1, beta, s),
                -(2.0 * beta + 1.0) * s,
                epsilon = 1e-12
            );
            let m = beta + 1.5;
            let g2 = -2.0 * m * (1.0 - s * s) + 4.0 * m * (m - 1.0) * s * s;
            assert_abs_diff_eq!(gegenbauer(2, beta, s), g2, epsilon = 1e-10);
        }
    }
    // Spot value: G_2^{5/2}(0.4) = -8 + 56 * 0.16 = 0.96.
    assert_abs_diff_eq!(gegenbauer(2, 2.5, 0.4), 0.96, epsilon = 1e-12);
}

#[test]
fn gegenbauer_satisfies_its_differential_equation() {
    // (1-s^2) G'' - (2b+1) s G' + n(n+2b) G = 0, checked by central
    // differences at interior points.
    let h = 1e-5;
    for &(n, beta) in &[(3u32, 1.5f64), (4, 2.5), (6, 0.75)] {
        for &s in &[-0.6, -0.2, 0.3, 0.7] {
            let g = |x: f64| gegenbauer(n, beta, x);
            let g0 = g(s);
            let d1 = (g(s + h) - g(s - h)) / (2.0 * h);
            let d2 = (g(s + h) + g(s - h) - 2.0 * g0) / (h * h);
            let resid = (1.0 - s * s) * d2 - (2.0 * beta + 1.0) * s * d1
                + (n * n) as f64 * g0
                + 2.0 * beta * n as f64 * g0;
            let scale = 1.0 + g0.abs() * ((n * n) as f64 + 2.0 * beta * n as f64);
            assert!(
                resid.abs() <= 1e-4 * scale,
                "n={n} beta={beta} s={s}: residual {resid}"
            );
        }
    }
}
