//! Multivariate integer-coefficient polynomials and the root-free-region
//! bound that justifies the pinned discount ladder: close enough to the
//! origin, along a nested-exponent staircase, a nonzero polynomial cannot
//! vanish and in fact stays above an explicit lower bound.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::bit_size_uint;
use crate::rational::Rational;

/// Sparse multivariate polynomial with integer coefficients. Exponent
/// vectors index the terms; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
    degrees: Vec<u32>,
}

impl MultiPoly {
    pub fn new(num_vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, BigInt)>) -> MultiPoly {
        let mut map = BTreeMap::new();
        for (exps, coeff) in terms {
            assert_eq!(exps.len(), num_vars, "exponent vector arity mismatch");
            if coeff.is_zero() {
                continue;
            }
            *map.entry(exps).or_insert_with(BigInt::zero) += coeff;
        }
        map.retain(|_, c| !c.is_zero());
        let mut degrees = vec![0u32; num_vars];
        for exps in map.keys() {
            for (d, e) in degrees.iter_mut().zip(exps) {
                *d = (*d).max(*e);
            }
        }
        MultiPoly {
            num_vars,
            terms: map,
            degrees,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigInt)> {
        self.terms.iter()
    }

    /// Largest coefficient bit size.
    pub fn coeff_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| bit_size_uint(c.magnitude()))
            .max()
            .unwrap_or(0)
    }
}

/// Exact evaluation by direct term summation.
pub fn eval_poly(p: &MultiPoly, point: &[Rational]) -> Result<Rational> {
    if point.len() != p.num_vars {
        return Err(Error::ArityMismatch {
            expected: p.num_vars,
            got: point.len(),
        });
    }
    let mut acc = Rational::zero();
    for (exps, coeff) in &p.terms {
        let mut term = Rational::from_integer(coeff.clone());
        for (x, &e) in point.iter().zip(exps) {
            for _ in 0..e {
                term *= x;
            }
        }
        acc += term;
    }
    Ok(acc)
}

/// Root-free-region exponent `B1 = 4 * vars * bit(max_degree) + coeff_bits + 1`.
pub fn region_constant(p: &MultiPoly) -> Result<u64> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let d_bits = bit_size_uint(&BigUint::from(p.max_degree()));
    Ok(4 * p.num_vars as u64 * d_bits + p.coeff_bits() + 1)
}

/// One point that violated the region lower bound. Any entry signals an
/// implementation bug, not a counterexample to the bound.
#[derive(Debug, Clone)]
pub struct RegionViolation {
    pub point: Vec<Rational>,
    pub value: Rational,
    pub bound: Rational,
}

#[derive(Debug, Clone)]
pub struct RegionReport {
    pub samples: usize,
    pub region_bits: u64,
    pub violations: Vec<RegionViolation>,
}

impl RegionReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Dyadic in `(0, hi]` with a few random extra bits of resolution.
fn sample_in(rng: &mut ChaCha8Rng, hi: &Rational) -> Rational {
    let extra: u32 = rng.gen_range(1..=10);
    let mantissa: u64 = rng.gen_range(1..=(1u64 << extra));
    hi * Rational::new(BigInt::from(mantissa), BigInt::one() << extra)
}

/// Samples the nested region `x1 in (0, 2^-B1], x_i in (0, x_{i-1}^(D+1)]`
/// with seeded dyadic points and checks the lower bound
/// `|P(x)| >= 2^(B1 - vars) * x_last^(D+1)` exactly at each.
pub fn sample_region_check(p: &MultiPoly, samples: usize, seed: u64) -> Result<RegionReport> {
    let region_bits = region_constant(p)?;
    let vars = p.num_vars;
    let degree_plus_one = p.max_degree() as usize + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // 2^(B1 - vars) as an exact rational; vars can exceed B1 only for
    // degenerate inputs, so keep the signed exponent.
    let scale = crate::rational::pow2(region_bits as i64 - vars as i64);
    let first_cap = crate::rational::pow2(-(region_bits as i64));

    let mut violations = Vec::new();
    for _ in 0..samples {
        let mut point = Vec::with_capacity(vars);
        let mut cap = first_cap.clone();
        for _ in 0..vars {
            let x = sample_in(&mut rng, &cap);
            cap = num_traits::pow(x.clone(), degree_plus_one);
            point.push(x);
        }
        let value = eval_poly(p, &point)?;
        // cap currently holds x_last^(D+1).
        let bound = &scale * &cap;
        if value.abs() < bound {
            violations.push(RegionViolation {
                point,
                value,
                bound,
            });
        }
    }
    Ok(RegionReport {
        samples,
        region_bits,
        violations,
    })
}
