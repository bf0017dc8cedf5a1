use capax::poly::{
    chebyshev_monic, kronecker_classify, power_map, roots, simple_root_product, MonicIntPolynomial, QPoly, ZPoly,
};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn m(c: &[i64]) -> MonicIntPolynomial {
    MonicIntPolynomial::from_i64(c)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

#[test]
fn power_map_examples() {
    assert_eq!(power_map(&m(&[-2, 1]), 3).unwrap(), m(&[-8, 1]));
    assert_eq!(power_map(&m(&[1, 0, 1]), 2).unwrap(), m(&[1, 2, 1]));
    // phi^2 + psi^2 = (phi + psi)^2 - 2 phi psi = 1 + 2 = 3, and phi^2 psi^2 = 1.
    assert_eq!(power_map(&m(&[-1, -1, 1]), 2).unwrap(), m(&[1, -3, 1]));
}

#[test]
fn kronecker_examples() {
    let r = kronecker_classify(&m(&[1, -1, 1]), 1e-8, None).unwrap();
    assert!(r.is_cyclotomic_product);
    assert_eq!(r.order, Some(6));
    let r = kronecker_classify(&m(&[-1, 1]), 1e-8, None).unwrap();
    assert_eq!((r.is_cyclotomic_product, r.order), (true, Some(1)));
    let r = kronecker_classify(&m(&[1, -3, 1]), 1e-8, None).unwrap();
    assert_eq!((r.is_cyclotomic_product, r.order), (false, None));
    // Phi_5 * Phi_3: order lcm(5, 3).
    let p = m(&[1, 1, 1, 1, 1]).poly() * m(&[1, 1, 1]).poly();
    let r = kronecker_classify(&MonicIntPolynomial::new(p).unwrap(), 1e-8, None).unwrap();
    assert_eq!(r.order, Some(15));
}

#[test]
fn chebyshev_monic_examples() {
    assert_eq!(chebyshev_monic(1, &rat(2, 1)).unwrap().poly(), &QPoly::from_ratios(&[(0, 1), (1, 1)]));
    assert_eq!(chebyshev_monic(2, &rat(2, 1)).unwrap().poly(), &QPoly::from_ratios(&[(-2, 1), (0, 1), (1, 1)]));
    // cos 3t = 4 cos^3 t - 3 cos t, rescaled to leading coefficient 1.
    assert_eq!(
        chebyshev_monic(3, &rat(1, 1)).unwrap().poly(),
        &QPoly::from_ratios(&[(0, 1), (-3, 4), (0, 1), (1, 1)])
    );
}

#[test]
fn simple_root_product_examples() {
    assert_eq!(simple_root_product(&m(&[-2, 0, 1])).unwrap(), BigInt::from(-8));
    assert_eq!(simple_root_product(&m(&[-1, 0, 1])).unwrap(), BigInt::from(-4));
    assert_eq!(simple_root_product(&m(&[1, -2, 1])).unwrap(), BigInt::from(0));
}

fn monic_strategy(max_deg: usize, bound: i64) -> impl Strategy<Value = MonicIntPolynomial> {
    prop::collection::vec(-bound..=bound, 1..=max_deg).prop_map(|mut c| {
        c.push(1);
        MonicIntPolynomial::from_i64(&c)
    })
}

/// Greedy multiset matching; fine for the small degrees used here.
fn multiset_close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    for x in a {
        let best = (0..b.len()).filter(|&j| !used[j]).min_by(|&i, &j| {
            (b[i] - x).norm().partial_cmp(&(b[j] - x).norm()).unwrap()
        });
        match best {
            Some(j) if (b[j] - x).norm() <= tol * (1.0 + x.norm()) => used[j] = true,
            _ => return false,
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn power_map_composes(p in monic_strategy(6, 4), j in 1u64..=4, k in 1u64..=4) {
        prop_assert_eq!(&power_map(&p, 1).unwrap(), &p);
        let lhs = power_map(&power_map(&p, j).unwrap(), k).unwrap();
        prop_assert_eq!(lhs, power_map(&p, j * k).unwrap());
    }

    #[test]
    fn power_map_raises_roots(p in monic_strategy(5, 5), k in 1u64..=3) {
        let q = power_map(&p, k).unwrap();
        prop_assert_eq!(q.degree(), p.degree());
        // Repeated roots are only located to about sqrt(eps); compare squarefree inputs.
        let sq = QPoly::from_int(p.poly()).squarefree_part();
        prop_assume!(sq.degree() == Some(p.degree()));
        let rp = roots(&p, 1e-8).unwrap().roots;
        let want: Vec<Complex64> = rp.iter().map(|z| z.powu(k as u32)).collect();
        // An exact collision alpha^k = beta^k makes q repeated; skip those too.
        let sqq = QPoly::from_int(q.poly()).squarefree_part();
        prop_assume!(sqq.degree() == Some(q.degree()));
        let got = roots(&q, 1e-8).unwrap().roots;
        prop_assert!(multiset_close(&got, &want, 1e-6), "{:?} vs {:?}", got, want);
    }

    #[test]
    fn simple_root_product_detects_squarefree(p in monic_strategy(5, 4)) {
        let q = QPoly::from_int(p.poly());
        let g = q.gcd(&q.derivative());
        prop_assume!(p.degree() >= 2);
        let zero = simple_root_product(&p).unwrap() == BigInt::from(0);
        prop_assert_eq!(zero, g.degree().unwrap_or(0) > 0);
    }

    #[test]
    fn chebyshev_monic_alternates(n in 1usize..=12, num in 1i64..=9, den in 1i64..=4) {
        let l = rat(num, den);
        let lf = num as f64 / den as f64;
        let t = chebyshev_monic(n, &l).unwrap();
        let c = t.poly().to_f64();
        let level = lf * (lf / 2.0).powi(n as i32 - 1);
        for j in 0..=n {
            let x = lf * (j as f64 * std::f64::consts::PI / n as f64).cos();
            let v = c.iter().rev().fold(0.0, |acc, a| acc * x + a);
            let want = if j % 2 == 0 { level } else { -level };
            prop_assert!((v - want).abs() <= 1e-12 * level.max(1.0),
                "n={} l={} j={} v={} want={}", n, lf, j, v, want);
        }
    }
}

#[test]
fn squarefree_product_matches_resultant_oracle() {
    // Oracle: prod p'(root) computed from floating roots.
    for c in [[3i64, -1, 0, 1], [-5, 2, -2, 1], [1, 1, 1, 1]] {
        let p = m(&c);
        let dp = ZPoly::from_i64(&c).derivative();
        let dpf = dp.to_f64();
        let prod = roots(&p, 1e-10)
            .unwrap()
            .roots
            .iter()
            .map(|&z| dpf.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a))
            .fold(Complex64::new(1.0, 0.0), |a, b| a * b);
        let exact = simple_root_product(&p).unwrap();
        assert!((prod.re - exact.to_string().parse::<f64>().unwrap()).abs() < 1e-8 * prod.norm().max(1.0));
        assert!(prod.im.abs() < 1e-8 * prod.norm().max(1.0));
    }
}
