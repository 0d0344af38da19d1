use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use orbipoisson::scalars::*;
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn cyclotomic_polynomials_match_table() {
    assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
    assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
    assert_eq!(cyclotomic_polynomial(5), vec![1, 1, 1, 1, 1]);
    assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
    assert_eq!(cyclotomic_polynomial(20), vec![1, 0, -1, 0, 1, 0, -1, 0, 1]);
    // Phi_105 is the first one with a coefficient -2
    assert!(cyclotomic_polynomial(105).contains(&-2));
}

#[test]
fn roots_of_unity_behave() {
    for m in [1u32, 2, 3, 4, 5, 6, 12, 20, 28] {
        let z = Cyclotomic::root_of_unity(m, 1);
        assert!(z.pow(m as i64).is_one(), "zeta^M = 1 for M={m}");
        if m > 1 {
            let mut s = Cyclotomic::zero(m);
            for k in 0..m {
                s += &Cyclotomic::root_of_unity(m, k as i64);
            }
            assert!(s.is_zero(), "sum of all M-th roots vanishes for M={m}");
        }
        assert_eq!(z.conj(), Cyclotomic::root_of_unity(m, -1));
    }
}

#[test]
fn imaginary_unit_squares_to_minus_one() {
    let i = parse_cyclotomic("i", 12).unwrap();
    assert_eq!(&i * &i, Cyclotomic::from_i64(12, -1));
    assert_eq!(parse_cyclotomic("i", 6), Err(LiteralError::NoImaginaryUnit(6)));
}

/// Inverse via extended Euclid in Q[x] against Phi_M, written independently of
/// the Galois-norm method used by the library.
fn euclid_inverse(a: &[BigRational], m: u32) -> Vec<BigRational> {
    fn trim(p: &mut Vec<BigRational>) {
        while p.len() > 1 && p.last().unwrap().is_zero() {
            p.pop();
        }
    }
    fn sub_mul(a: &[BigRational], q: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(q.len() + b.len());
        let mut out = vec![BigRational::zero(); n];
        for (i, x) in a.iter().enumerate() {
            out[i] += x;
        }
        for (i, x) in q.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] -= x * y;
            }
        }
        trim(&mut out);
        out
    }
    fn divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let mut q = vec![BigRational::zero(); r.len().max(b.len())];
        while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
            let k = r.len() - 1 - db;
            let c = r.last().unwrap() / b.last().unwrap();
            for (j, y) in b.iter().enumerate() {
                r[k + j] -= &c * y;
            }
            q[k] = c;
            r.pop();
            if r.is_empty() {
                r.push(BigRational::zero());
            }
            trim(&mut r);
        }
        trim(&mut q);
        (q, r)
    }
    let phi: Vec<BigRational> = cyclotomic_polynomial(m)
        .into_iter()
        .map(|c| rat(c, 1))
        .collect();
    let (mut r0, mut r1) = (phi, a.to_vec());
    trim(&mut r1);
    let (mut t0, mut t1) = (vec![BigRational::zero()], vec![BigRational::one()]);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = divmod(&r0, &r1);
        let t = sub_mul(&t0, &q, &t1);
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = t;
    }
    assert_eq!(r0.len(), 1);
    let c = r0[0].clone();
    let mut out: Vec<BigRational> = t0.iter().map(|x| x / &c).collect();
    let (_, rem) = divmod(&out, &cyclotomic_polynomial(m).into_iter().map(|c| rat(c, 1)).collect::<Vec<_>>());
    out = rem;
    out
}

#[test]
fn inverse_agrees_with_euclid() {
    for m in [3u32, 5, 7, 12, 20] {
        let phi = field(m).degree();
        for seed in 0..6i64 {
            let coeffs: Vec<BigRational> = (0..phi as i64)
                .map(|j| rat((j * 7 + seed * 3) % 5 - 2, 1 + (j + seed) % 3))
                .collect();
            let a = Cyclotomic::from_power_coeffs(m, &coeffs);
            if a.is_zero() {
                continue;
            }
            let lib = a.inv().unwrap();
            let oracle = Cyclotomic::from_power_coeffs(m, &euclid_inverse(&a.coeffs(), m));
            assert_eq!(lib, oracle, "M={m} seed={seed}");
            assert!((&a * &lib).is_one());
        }
    }
}

#[test]
fn large_values_fall_back_to_bignums() {
    let m = 5;
    let a = Cyclotomic::from_ratio(m, i64::MAX, 3) + Cyclotomic::root_of_unity(m, 2);
    let sq = &a * &a;
    let back = &sq / &a;
    assert_eq!(back, a);
    let big = a.pow(7);
    assert_eq!(&big / &a.pow(6), a);
}

#[test]
fn q_numbers() {
    let m = 12;
    let q = Cyclotomic::root_of_unity(m, 2); // primitive 6th root
    assert!(q_integer(6, &q).is_zero());
    assert!(!q_integer(5, &q).is_zero());
    assert_eq!(q_integer(3, &q), parse_cyclotomic("1 + z^2 + z^4", m).unwrap());
    // binomial against the factorial quotient whenever that quotient is defined
    for n in 0..6u64 {
        for k in 0..=n {
            let num = q_factorial(n, &q);
            let den = &q_factorial(k, &q) * &q_factorial(n - k, &q);
            assert_eq!(q_binomial(n, k, &q), &num / &den, "n={n} k={k}");
        }
    }
    // q = 1 gives ordinary binomials
    let one = Cyclotomic::one(m);
    assert_eq!(q_binomial(7, 3, &one), Cyclotomic::from_i64(m, 35));
    assert_eq!(q_factorial(5, &one), Cyclotomic::from_i64(m, 120));
}

#[test]
fn literal_examples() {
    let v = parse_cyclotomic("1/2*z^3 - 2", 5).unwrap();
    assert_eq!(v.to_string(), "1/2*z^3 - 2");
    let h = parse_hscalar("h^2*z", 7).unwrap();
    assert_eq!(h.to_string(), "z*h^2");
    assert_eq!(parse_hscalar(&h.to_string(), 7).unwrap(), h);
    // z^4 reduces in Q(zeta_5)
    assert_eq!(
        parse_cyclotomic("z^4", 5).unwrap(),
        parse_cyclotomic("-1 - z - z^2 - z^3", 5).unwrap()
    );
    assert_eq!(parse_cyclotomic("z^-1", 5).unwrap(), parse_cyclotomic("z^4", 5).unwrap());
    assert!(parse_cyclotomic("h", 5).is_err());
    assert!(parse_cyclotomic("1/0", 5).is_err());
    assert!(parse_cyclotomic("2 3", 5).is_err());
}

fn arb_cyclo(m: u32) -> impl Strategy<Value = Cyclotomic> {
    let phi = field(m).degree();
    prop::collection::vec((-9i64..10, 1i64..5), phi).prop_map(move |v| {
        let cs: Vec<BigRational> = v.into_iter().map(|(a, b)| rat(a, b)).collect();
        Cyclotomic::from_power_coeffs(m, &cs)
    })
}

fn arb_h(m: u32) -> impl Strategy<Value = HScalar> {
    prop::collection::vec(arb_cyclo(m), 0..4).prop_map(HScalar::from_coeffs)
}

proptest! {
    #[test]
    fn field_axioms(a in arb_cyclo(12), b in arb_cyclo(12), c in arb_cyclo(12)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Cyclotomic::zero(12));
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn literal_round_trip(a in arb_h(20)) {
        let s = a.to_string();
        prop_assert_eq!(parse_hscalar(&s, 20).unwrap(), a);
    }

    #[test]
    fn cyclotomic_literal_round_trip(a in arb_cyclo(9)) {
        prop_assert_eq!(parse_cyclotomic(&a.to_string(), 9).unwrap(), a);
    }
}
