use biharmonic::crystals::{bfpq, generate_all_crystals, generate_crystals, smallest_crystal_for};
use biharmonic::divisor_means::{divisor_means, enumerate, prime_characterization, sum_identity_check, MeanKind};
use biharmonic::means::{arithmetic_mean, biharmonic_mean, geometric_mean, harmonic_mean};
use biharmonic::recurrences::{a_seq, u_seq, Conic, ConicId, QuadraticInt};
use biharmonic::{factorize, is_prime, sigma_sieve, Error, Rational};
use num_bigint::{BigInt, BigUint};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn sigma_multiplicative_up_to_1000() {
    let t = sigma_sieve(1, 1_000_000).unwrap();
    for m in 1..=1000u64 {
        let (a0, a1, a2) = t.get(m).unwrap();
        for n in 1..=1000u64 {
            if gcd(m, n) != 1 {
                continue;
            }
            let (b0, b1, b2) = t.get(n).unwrap();
            assert_eq!(t.get(m * n).unwrap(), (a0 * b0, a1 * b1, a2 * b2), "m = {m}, n = {n}");
        }
    }
}

#[test]
fn divisor_stats_shape() {
    for n in 1..=3000u64 {
        let s = factorize(n).unwrap().stats(true);
        let d = s.divisors.unwrap();
        assert_eq!((d[0], *d.last().unwrap()), (1, n));
        assert!(d.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.sigma0, BigUint::from(d.len()));
        assert_eq!(s.sigma1, d.iter().map(|&x| BigUint::from(x)).sum::<BigUint>());
    }
}

#[test]
fn biharmonic_closed_form_matches_general_mean() {
    for n in (1..=100_000u64).step_by(7).chain([1, 2, 4, 35, 8128, 30240, 65536]) {
        let divs: Vec<Rational> = factorize(n).unwrap().divisors().into_iter().map(Rational::from).collect();
        let r = divisor_means(n).unwrap();
        assert_eq!(r.biharmonic, biharmonic_mean(&divs).unwrap(), "n = {n}");
        assert_eq!(r.harmonic, harmonic_mean(&divs).unwrap());
        assert_eq!(r.arithmetic, arithmetic_mean(&divs).unwrap());
    }
}

#[test]
fn geometric_mean_rational_iff_square() {
    for n in 1..=2000u64 {
        let divs: Vec<Rational> = factorize(n).unwrap().divisors().into_iter().map(Rational::from).collect();
        let g = geometric_mean(&divs).unwrap();
        let r = (n as f64).sqrt().round() as u64;
        let square = r * r == n;
        assert_eq!(g.exact().is_some(), square, "n = {n}");
        assert_eq!(divisor_means(n).unwrap().is_square(), square);
        if square {
            assert_eq!(g.exact().unwrap(), &Rational::from(r));
        }
    }
}

#[test]
fn perfect_numbers_are_harmonic() {
    let harmonic = enumerate(MeanKind::Harmonic, 10_000).unwrap().terms;
    for p in [6, 28, 496, 8128] {
        assert!(harmonic.contains(&p));
    }
}

#[test]
fn sum_identity_rhs_positive_off_primes_and_squares() {
    for n in 2..=10_000u64 {
        let s = sum_identity_check(n).unwrap();
        assert!(s.equal);
        let composite = !is_prime(n);
        let r = (n as f64).sqrt().round() as u64;
        if composite && r * r != n {
            assert!(s.rhs > BigInt::from(0), "n = {n}");
        }
        if is_prime(n) {
            assert_eq!(s.rhs, BigInt::from(0));
        }
    }
}

#[test]
fn prime_characterization_rejects_even() {
    assert_eq!(prime_characterization(4), Err(Error::OddHypothesis("prime_characterization", 4)));
    assert!(prime_characterization(1).is_err());
    assert_eq!(prime_characterization(97), Ok(true));
    assert_eq!(prime_characterization(35), Ok(false));
}

#[test]
fn u_pairs_on_c2_and_a_pairs_on_c() {
    for w in 1..=20u64 {
        let u = u_seq(w, 40);
        let c2 = ConicId::new(Conic::C2, w);
        for n in 1..u.len() {
            assert!(c2.contains(&Rational::from(u[n].clone()), &Rational::from(u[n - 1].clone())));
        }
        let a = a_seq(w, 40).unwrap();
        for n in 0..a.len() {
            assert_eq!(a[n].square(), u[n]);
            assert_eq!(a[n].parity() as usize, if a[n].is_zero() { 0 } else { (n + 1) % 2 });
        }
    }
}

#[test]
fn conic_parameter_mismatch() {
    let c = ConicId::new(Conic::C, 5);
    let x = QuadraticInt::integer(3, 1);
    let y = QuadraticInt::integer(5, 0);
    assert_eq!(c.contains_quadratic(&x, &y), Err(Error::ParameterMismatch { conic: 5, point: 3 }));
}

#[test]
fn crystals_are_odd_and_satisfy_the_q_relation() {
    let catalog = generate_all_crystals(10_000_000);
    assert!(catalog.monotone);
    for r in &catalog.records {
        assert!(r.a.bit(0) && r.b.bit(0) && r.n.bit(0), "{r:?}");
        let (a, b) = (BigInt::from(r.a.clone()), BigInt::from(r.b.clone()));
        let lhs = (&a + &b) * (&a + &b);
        let rhs = BigInt::from(r.w) * (&a + 1) * (&b + 1);
        assert_eq!(lhs, rhs);
        assert!(bfpq(a, b).b.is_integer());
    }
}

#[test]
fn smallest_crystal_closed_form() {
    assert_eq!(smallest_crystal_for(3), Some(BigUint::from(35u32)));
    for w in 3..200u64 {
        let expect = (2 * (w - 1) * (w - 1) - 1) * (2 * w - 1);
        assert_eq!(smallest_crystal_for(w), Some(BigUint::from(expect)));
        assert_eq!(generate_crystals(w, 3)[0].n, BigUint::from(expect));
    }
}
