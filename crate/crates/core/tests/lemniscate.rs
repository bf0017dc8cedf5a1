use std::time::Instant;

use capax::capacity::{CompactDescriptor, FeketeOptions, IntervalUnion};
use capax::lemniscate::*;
use capax::poly::{MonicIntPolynomial, MonicRatPolynomial};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn shrink_shifted_disk() {
    let t = Instant::now();
    let p = MonicRatPolynomial::from_ratios(&[(-1, 2), (1, 1)]).unwrap();
    let l = Lemniscate::new(p.clone(), rat(3, 2)).unwrap();
    let s = lemniscate_shrink(&l, DEFAULT_DEGREE_CAP).unwrap();
    println!("mu {} nu {} in {:?}: {:?}", s.integerized.mu, s.integerized.nu, t.elapsed(), s.certificate);
    assert_eq!((s.integerized.mu, s.integerized.nu), (4, 384));
    assert_eq!(s.gamma().degree(), 384);
    assert!(s.certificate.max_ratio <= 0.5);
    assert!(s.certificate.min_log_gamma > 0.0);
    assert_eq!(s.roots.len(), 384);
    for r in &s.roots {
        // every root of Gamma inside L, within 1e-8
        assert!((r - 0.5).norm() <= 1.5 + 1e-8);
    }
    assert!(s.certificate.max_root_correction < 1e-8);
    assert!(s.integerized.defect(&p).is_zero());
    let zero = BigRational::zero();
    assert!(s.integerized.q_coeffs.iter().flatten().all(|c| *c >= zero && *c < BigRational::one()));
}

#[test]
fn shrink_quadratic_hits_degree_cap() {
    // |x^2 - 1/2| <= (5/4)^2 needs mu = 3, so nu = 6! 2^6 and nu d far above the cap
    let p = MonicRatPolynomial::from_ratios(&[(-1, 2), (0, 1), (1, 1)]).unwrap();
    let l = Lemniscate::new(p, rat(5, 4)).unwrap();
    assert!(matches!(
        lemniscate_shrink(&l, DEFAULT_DEGREE_CAP),
        Err(capax::Error::SizeExceeded { cap: 5000, .. })
    ));
}

#[test]
fn unit_lemniscate_roots_are_on_level_one() {
    for coeffs in [[-2i64, 0, 1], [1, 1, 1], [0, -1, 1]] {
        let p = MonicIntPolynomial::from_i64(&coeffs);
        let v = unit_lemniscate_integers(&p, 4).unwrap();
        for (i, q) in v.iter().enumerate() {
            assert_eq!(q.degree(), 2 * (i + 1));
        }
    }
}

#[test]
fn fekete_polynomial_examples() {
    let opt = FeketeOptions::default();
    let f = fekete_polynomial(&CompactDescriptor::Circle(1.0), 4, &opt).unwrap();
    for (i, c) in f.coeffs.iter().enumerate().skip(1).take(3) {
        assert!(c.norm() < 1e-9, "coefficient {i} = {c}");
    }
    assert!((f.coeffs[0].norm() - 1.0).abs() < 1e-9);

    let seg = CompactDescriptor::IntervalUnion(IntervalUnion::segment(-2.0, 2.0).unwrap());
    let f = fekete_polynomial(&seg, 2, &opt).unwrap();
    let c = f.real_coeffs();
    assert!((c[0] + 4.0).abs() < 1e-9 && c[1].abs() < 1e-9);

    let norms: Vec<f64> = [4, 8, 16].iter().map(|&n| fekete_polynomial(&seg, n, &opt).unwrap().norm_root).collect();
    println!("{norms:?}");
    assert!(norms[0] > norms[1] && norms[1] > norms[2] && norms[2] > 1.0);
}

#[test]
fn hilbert_sandwich() {
    let k = CompactDescriptor::IntervalUnion(IntervalUnion::segment(-0.5, 0.5).unwrap());
    let l = fekete_lemniscate(&k, 16, &FeketeOptions::default()).unwrap();
    for i in 0..=200 {
        let x = -0.5 + i as f64 / 200.0;
        assert!(lemniscate_contains(&l, Complex64::new(x, 0.0)));
    }
    // boundary of the 0.3-neighbourhood: two half circles and two segments
    let mut u = Vec::new();
    for i in 0..=100 {
        let t = std::f64::consts::PI * (i as f64 / 100.0 - 0.5);
        u.push(Complex64::new(0.5, 0.0) + Complex64::from_polar(0.3, t));
        u.push(Complex64::new(-0.5, 0.0) - Complex64::from_polar(0.3, t));
        let x = -0.5 + i as f64 / 100.0;
        u.push(Complex64::new(x, 0.3));
        u.push(Complex64::new(x, -0.3));
    }
    assert!(u.iter().all(|&z| !lemniscate_contains(&l, z)));
}

mod props {
    use super::*;
    use capax::poly::QPoly;
    use proptest::prelude::*;

    fn rat_poly() -> impl Strategy<Value = MonicRatPolynomial> {
        // d <= 2, coefficient denominators dividing 1, 2 or 3.
        (1usize..=2, prop::collection::vec((-6i64..=6, 1i64..=3), 2)).prop_map(|(d, c)| {
            let mut cs: Vec<(i64, i64)> = c[..d].to_vec();
            cs.push((1, 1));
            MonicRatPolynomial::from_ratios(&cs).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(20))]

        #[test]
        fn integerize_power_reconstructs_exactly(p in rat_poly()) {
            let z = integerize_power(&p, 1, 100_000).unwrap();
            // Rebuild p^nu - gamma - sum p^l q_l directly from the parts.
            let mut rhs = QPoly::from_int(z.gamma.poly());
            let mut pl = QPoly::constant(BigRational::one());
            for row in &z.q_coeffs {
                for c in row {
                    prop_assert!(!c.is_negative() && c < &BigRational::one(), "c = {}", c);
                }
                rhs = &rhs + &(&pl * &QPoly::new(row.clone()));
                pl = &pl * p.poly();
            }
            prop_assert_eq!(p.poly().pow(z.nu as u32), rhs);
            prop_assert!(z.defect(&p).is_zero());
            prop_assert_eq!(z.gamma.degree(), z.nu * p.degree());
        }
    }
}
