//! Oracle formulas: documented examples and algebraic properties.

use core::f64::consts::PI;
use proptest::prelude::*;
use twistlap_core::bundle::{half_canonical_twist_degree, he_constant};
use twistlap_core::oracle::*;
use twistlap_core::Error;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[test]
fn documented_examples() {
    assert!(close(bound_dolbeault_main(1, -1, 1, 4.0 * PI).unwrap(), 0.5, 1e-14));
    assert!(close(bound_dolbeault_main(2, -3, 1, PI).unwrap(), 4.0, 1e-14));
    assert!(close(bound_dirac_complex(-1, 1, 4.0 * PI).unwrap(), 1.0, 1e-14));
    assert!(close(bound_dirac_complex(-4, 1, 4.0 * PI).unwrap(), 2.0, 1e-14));
    assert!(close(bound_dirac_real(0, -1, 1, 4.0 * PI).unwrap(), 2f64.sqrt(), 1e-14));
    assert!(close(bound_dirac_real(1, -1, 1, 1.0).unwrap(), (4.0 * PI).sqrt(), 1e-14));
    let s = sphere_dirac_spectrum(2.0, 0, 4).unwrap();
    for (v, e) in s.iter().zip([1.0, 2.0, 3.0, 4.0, 5.0]) {
        assert!(close(*v, e, 1e-14));
    }
    assert!(close(sphere_dirac_spectrum(2.0, -2, 0).unwrap()[0], 3f64.sqrt(), 1e-14));
    assert!(close(sphere_dirac_spectrum(8.0 * PI, -1, 0).unwrap()[0], (8.0 * PI).sqrt(), 1e-14));
    let s = sphere_dolbeault_spectrum(2.0, -1, 2).unwrap();
    for (v, e) in s.iter().zip([0.5, 2.0, 4.5]) {
        assert!(close(*v, e, 1e-14));
    }
    assert!(close(sphere_dolbeault_spectrum(2.0, -3, 0).unwrap()[0], 1.5, 1e-14));
    let t = torus_dolbeault_spectrum(1.0, -1, 0).unwrap();
    assert!(close(t[0].0, 2.0 * PI, 1e-14) && t[0].1 == 1);
    let t = torus_dolbeault_spectrum(1.0, -3, 1).unwrap();
    assert!(close(t[0].0, 6.0 * PI, 1e-14) && t[0].1 == 3);
    assert!(close(t[1].0, 12.0 * PI, 1e-14));
    let d = dirac_from_dolbeault(&[0.5, 2.0, 4.5]).unwrap();
    for (v, e) in d.iter().zip([1.0, 2.0, 3.0]) {
        assert!(close(*v, e, 1e-14));
    }
    assert!(dirac_from_dolbeault(&[]).unwrap().is_empty());
    assert_eq!(dirac_from_dolbeault(&[0.0, 8.0]).unwrap(), vec![4.0]);
}

#[test]
fn out_of_domain_inputs_are_errors() {
    assert!(matches!(bound_dolbeault_main(1, 0, 1, 1.0), Err(Error::OutOfHypothesis(_))));
    assert!(matches!(bound_dirac_complex(0, 1, 1.0), Err(Error::Domain(_))));
    assert!(matches!(bound_dirac_real(0, 3, 1, 1.0), Err(Error::Domain(_))));
    assert!(matches!(sphere_dirac_spectrum(2.0, 1, 3), Err(Error::OutOfHypothesis(_))));
    assert!(matches!(sphere_dolbeault_spectrum(2.0, 0, 3), Err(Error::OutOfHypothesis(_))));
    assert!(matches!(torus_dolbeault_spectrum(1.0, 1, 3), Err(Error::OutOfHypothesis(_))));
    assert!(matches!(dirac_from_dolbeault(&[1.0, -0.5]), Err(Error::Domain(_))));
    assert!(bound_dolbeault_naive(1, -1, 1, -1.0).is_err());
    assert!(bound_dolbeault_naive(0, -1, 1, 1.0).is_err());
}

proptest! {
    #[test]
    fn sharpening_ratio_is_exact(n in 1u32..8, d in -50i64..0, r in 1u32..6, v in 0.01f64..100.0) {
        let naive = bound_dolbeault_naive(n, d, r, v).unwrap();
        let main = bound_dolbeault_main(n, d, r, v).unwrap();
        let two_n = 2.0 * n as f64;
        prop_assert!(close(main / naive, two_n / (two_n - 1.0), 1e-14));
    }

    #[test]
    fn bounds_nonincreasing_in_degree(n in 1u32..6, d in -50i64..-1, r in 1u32..6, v in 0.01f64..100.0, g in 0u32..4) {
        prop_assert!(bound_dolbeault_naive(n, d - 1, r, v).unwrap() >= bound_dolbeault_naive(n, d, r, v).unwrap());
        prop_assert!(bound_dolbeault_main(n, d - 1, r, v).unwrap() >= bound_dolbeault_main(n, d, r, v).unwrap());
        prop_assert!(bound_dirac_complex(d - 1, r, v).unwrap() >= bound_dirac_complex(d, r, v).unwrap());
        if let (Ok(a), Ok(b)) = (bound_dirac_real(g, d - 1, r, v), bound_dirac_real(g, d, r, v)) {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn he_constant_is_odd_and_scales(n in 1u32..8, d in -50i64..50, r in 1u32..6, v in 0.01f64..100.0) {
        let c = he_constant(n, d, r, v).unwrap();
        prop_assert!(close(he_constant(n, -d, r, v).unwrap(), -c, 1e-14));
        prop_assert!(close(he_constant(n, d, r, 2.0 * v).unwrap(), 0.5 * c, 1e-14));
        let fact: f64 = (1..n).map(|k| k as f64).product();
        prop_assert!(close(c, 2.0 * PI * d as f64 / (fact * r as f64 * v), 1e-13));
    }

    #[test]
    fn dirac_complex_squares_to_twice_main(d in -50i64..0, v in 0.01f64..100.0) {
        let mu = bound_dirac_complex(d, 1, v).unwrap();
        prop_assert!(close(mu * mu, 2.0 * bound_dolbeault_main(1, d, 1, v).unwrap(), 1e-13));
    }

    #[test]
    fn real_dirac_is_complex_dirac_after_twist(g in 0u32..4, d in -50i64..0, r in 1u32..4, v in 0.01f64..100.0) {
        let shifted = half_canonical_twist_degree(d, r, g);
        match (bound_dirac_real(g, d, r, v), bound_dirac_complex(shifted, r, v)) {
            (Ok(a), Ok(b)) => prop_assert!(close(a, b, 1e-13)),
            (Err(_), Err(_)) => {}
            (Ok(a), Err(_)) => prop_assert!(a == 0.0, "radicand zero only at shifted degree 0"),
            (Err(e), Ok(_)) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn sphere_cross_consistency(r in 0.1f64..20.0, d in -20i64..0, q in 0u32..30) {
        let dol = sphere_dolbeault_spectrum(r, d, q).unwrap();
        let via = dirac_from_dolbeault(&dol).unwrap();
        let direct = sphere_dirac_spectrum(r, d + 1, q).unwrap();
        prop_assert_eq!(via.len(), direct.len());
        for (a, b) in via.iter().zip(&direct) {
            prop_assert!(close(*a, *b, 1e-12));
        }
    }

    #[test]
    fn attainment_identities(r in 0.1f64..20.0, d in -20i64..0, vol in 0.01f64..100.0) {
        let sphere_vol = 8.0 * PI / r;
        let dol = sphere_dolbeault_spectrum(r, d, 3).unwrap();
        prop_assert!(close(dol[0], bound_dolbeault_main(1, d, 1, sphere_vol).unwrap(), 1e-12));
        prop_assert!(close(dol[0], -r * d as f64 / 4.0, 1e-12));
        prop_assert!(dol.windows(2).all(|w| w[0] < w[1]));
        let dir = sphere_dirac_spectrum(r, d + 1, 3).unwrap();
        prop_assert!(close(dir[0], bound_dirac_complex(d, 1, sphere_vol).unwrap(), 1e-12));
        let t = torus_dolbeault_spectrum(vol, d, 2).unwrap();
        prop_assert!(close(t[0].0, bound_dolbeault_main(1, d, 1, vol).unwrap(), 1e-12));
        prop_assert!(t.iter().all(|(_, m)| *m == d.unsigned_abs() as usize));
    }
}
