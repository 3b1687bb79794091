//! Polynomial evaluation oracles, region sweeps, and the consistency of the
//! pinned discount ladder with the root-free region.

use csg_core::limit::limit_constants_from_parts;
use csg_core::linalg::bit_size_uint;
use csg_core::poly::{eval_poly, region_constant, sample_region_check, MultiPoly};
use csg_core::rational::{rat, Rational};
use csg_core::testkit::rng;
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::Rng;

fn random_poly(rng: &mut rand_chacha::ChaCha8Rng, vars: usize, max_deg: u32, max_coeff: i64) -> MultiPoly {
    let terms: Vec<(Vec<u32>, BigInt)> = (0..rng.gen_range(1..=6))
        .map(|_| {
            let exps = (0..vars).map(|_| rng.gen_range(0..=max_deg)).collect();
            let coeff = BigInt::from(rng.gen_range(-max_coeff..=max_coeff));
            (exps, coeff)
        })
        .collect();
    MultiPoly::new(vars, terms)
}

/// Nested Horner evaluation, variable by variable; independent of the
/// direct term-sum path.
fn horner_eval(p: &MultiPoly, point: &[Rational]) -> Rational {
    fn go(terms: &[(Vec<u32>, BigInt)], var: usize, point: &[Rational]) -> Rational {
        if terms.is_empty() {
            return Rational::zero();
        }
        if var == point.len() {
            return Rational::from_integer(terms.iter().map(|(_, c)| c).sum());
        }
        let max_deg = terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0);
        let mut acc = Rational::zero();
        for d in (0..=max_deg).rev() {
            acc *= &point[var];
            let slice: Vec<(Vec<u32>, BigInt)> = terms
                .iter()
                .filter(|(e, _)| e[var] == d)
                .cloned()
                .collect();
            acc += go(&slice, var + 1, point);
        }
        acc
    }
    let terms: Vec<(Vec<u32>, BigInt)> = p.terms().map(|(e, c)| (e.clone(), c.clone())).collect();
    go(&terms, 0, point)
}

#[test]
fn direct_sum_matches_horner() {
    let mut rng = rng(0x81);
    for _ in 0..40 {
        let vars = rng.gen_range(1..=3usize);
        let p = random_poly(&mut rng, vars, 4, 20);
        let point: Vec<Rational> = (0..vars)
            .map(|_| rat(rng.gen_range(-9..=9), rng.gen_range(1..=7)))
            .collect();
        assert_eq!(eval_poly(&p, &point).unwrap(), horner_eval(&p, &point));
    }
}

#[test]
fn region_constant_recomputation() {
    let mut rng = rng(0x82);
    for _ in 0..30 {
        let vars = rng.gen_range(1..=3usize);
        let p = random_poly(&mut rng, vars, 4, 63);
        if p.is_zero() {
            continue;
        }
        // Independent recomputation from the raw pieces.
        let d: u32 = p.terms().flat_map(|(e, _)| e.iter().copied()).max().unwrap();
        let coeff_bits = p
            .terms()
            .map(|(_, c)| bit_size_uint(c.magnitude()))
            .max()
            .unwrap();
        let d_bits = 64 - u64::from(d + 1).leading_zeros() as u64
            - if (d + 1).is_power_of_two() { 1 } else { 0 };
        let expected = 4 * vars as u64 * d_bits + coeff_bits + 1;
        assert_eq!(region_constant(&p).unwrap(), expected);
    }
}

#[test]
fn region_sweep_has_no_violations() {
    let mut rng = rng(0x83);
    let mut seed = 1000u64;
    for _ in 0..15 {
        let vars = rng.gen_range(1..=3usize);
        let p = random_poly(&mut rng, vars, 4, 63);
        if p.is_zero() {
            continue;
        }
        seed += 1;
        let report = sample_region_check(&p, 100, seed).unwrap();
        assert!(
            report.holds(),
            "violation for poly with region bits {}",
            report.region_bits
        );
    }
}

#[test]
fn discount_ladder_sits_inside_the_root_free_region() {
    // The kernel determinant quotients are polynomials in the discount
    // factors of per-variable degree n*D with coefficients of bit size
    // 7*D*n*(B + bit(n) + bit(D) + kappa); the pinned ladder must satisfy
    // the region preconditions for those parameters.
    for n in 1..=3usize {
        for m in 1..=2usize {
            for d in 1..=3usize {
                for input_bits in [1u64, 4, 8] {
                    for kappa in [1u64, 3, 10] {
                        let c = limit_constants_from_parts(n, m, d, input_bits, kappa).unwrap();
                        let profile_bound = c.profile_bound.clone();
                        let nd = BigUint::from(n as u64) * &profile_bound;
                        let coeff_bits = BigUint::from(7u32)
                            * &profile_bound
                            * BigUint::from(n as u64)
                            * (BigUint::from(input_bits)
                                + BigUint::from(bit_size_uint(&BigUint::from(n as u64)))
                                + BigUint::from(bit_size_uint(&profile_bound))
                                + BigUint::from(kappa));
                        let region_poly = BigUint::from(4 * d as u64)
                            * BigUint::from(bit_size_uint(&nd))
                            + coeff_bits
                            + BigUint::one();
                        // First ladder point inside the region:
                        // 2^-B1_game <= 2^-B1_poly.
                        assert!(
                            c.region_bits >= region_poly,
                            "n={n} m={m} d={d} B={input_bits} kappa={kappa}"
                        );
                        // Nesting: each further point is exactly the
                        // predecessor raised to (degree + 1).
                        for i in 1..d {
                            assert_eq!(
                                c.lambda_exponents[i],
                                &c.lambda_exponents[i - 1] * (&nd + BigUint::one())
                            );
                        }
                    }
                }
            }
        }
    }
}
