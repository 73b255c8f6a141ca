//! Shared generators and property-suite bodies for the integration tests.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cremona::{BirationalTuple, CremonaElement, FieldSpec, Polynomial, RationalFunction, Scalar};

pub mod suites;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num = rng.gen_range(-6i64..=6);
    let den = rng.gen_range(1i64..=4);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn random_coeff(rng: &mut ChaCha8Rng, domain: &FieldSpec) -> Scalar {
    match domain {
        FieldSpec::Rational => Scalar::Rational(small_rational(rng)),
        _ => domain.from_i64(rng.gen_range(-6i64..=6)),
    }
}

/// A random sparse polynomial with small integer-expressible coefficients.
pub fn random_poly(
    rng: &mut ChaCha8Rng,
    nvars: usize,
    domain: &FieldSpec,
    max_terms: usize,
    max_deg: u32,
) -> Polynomial {
    let mut acc = Polynomial::zero(nvars, domain.clone());
    let terms = rng.gen_range(0..=max_terms);
    for _ in 0..terms {
        let coeff = random_coeff(rng, domain);
        let mut term = Polynomial::constant(nvars, coeff);
        for i in 0..nvars {
            let e = rng.gen_range(0..=max_deg);
            if e > 0 {
                term = term
                    .mul(&Polynomial::var(nvars, i, domain.clone()).pow(e))
                    .unwrap();
            }
        }
        acc = acc.add(&term).unwrap();
    }
    acc
}

pub fn random_nonzero_poly(
    rng: &mut ChaCha8Rng,
    nvars: usize,
    domain: &FieldSpec,
    max_terms: usize,
    max_deg: u32,
) -> Polynomial {
    loop {
        let p = random_poly(rng, nvars, domain, max_terms.max(1), max_deg);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_ratfun(rng: &mut ChaCha8Rng, nvars: usize, domain: &FieldSpec) -> RationalFunction {
    let num = random_poly(rng, nvars, domain, 3, 2);
    let den = random_nonzero_poly(rng, nvars, domain, 2, 2);
    RationalFunction::new(num, den).unwrap()
}

/// A random nonzero polynomial in the single variable `index` of a
/// two-variable ring.
fn random_univariate(rng: &mut ChaCha8Rng, index: usize, domain: &FieldSpec) -> Polynomial {
    loop {
        let mut acc = Polynomial::zero(2, domain.clone());
        for e in 0..=2u32 {
            if rng.gen_bool(0.5) {
                let coeff = random_coeff(rng, domain);
                let term = Polynomial::constant(2, coeff)
                    .mul(&Polynomial::var(2, index, domain.clone()).pow(e))
                    .unwrap();
                acc = acc.add(&term).unwrap();
            }
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

fn var(domain: &FieldSpec, i: usize) -> Polynomial {
    Polynomial::var(2, i, domain.clone())
}

fn constant(domain: &FieldSpec, v: i64) -> Polynomial {
    Polynomial::constant(2, domain.from_i64(v))
}

fn tuple(coords: Vec<Polynomial>) -> BirationalTuple {
    BirationalTuple::new(
        coords
            .into_iter()
            .map(RationalFunction::from_poly)
            .collect(),
    )
    .unwrap()
}

/// A random certified element of the plane pool: translations, unimodular
/// linear maps, the coordinate inversion, the swap, and triangular maps.
pub fn random_element(rng: &mut ChaCha8Rng, domain: &FieldSpec) -> CremonaElement {
    let x = || var(domain, 0);
    let y = || var(domain, 1);
    let kind = rng.gen_range(0..6);
    let (fwd, inv) = match kind {
        0 => {
            // translation
            let a = rng.gen_range(-3i64..=3);
            let b = rng.gen_range(-3i64..=3);
            (
                tuple(vec![
                    x().add(&constant(domain, a)).unwrap(),
                    y().add(&constant(domain, b)).unwrap(),
                ]),
                tuple(vec![
                    x().sub(&constant(domain, a)).unwrap(),
                    y().sub(&constant(domain, b)).unwrap(),
                ]),
            )
        }
        1 => {
            // unimodular linear map
            let (a, b, c, d) = loop {
                let a = rng.gen_range(-2i64..=2);
                let b = rng.gen_range(-2i64..=2);
                let c = rng.gen_range(-2i64..=2);
                let d = rng.gen_range(-2i64..=2);
                if a * d - b * c == 1 {
                    break (a, b, c, d);
                }
            };
            let lin = |p: i64, q: i64| {
                x().scale(&domain.from_i64(p))
                    .unwrap()
                    .add(&y().scale(&domain.from_i64(q)).unwrap())
                    .unwrap()
            };
            (
                tuple(vec![lin(a, b), lin(c, d)]),
                tuple(vec![lin(d, -b), lin(-c, a)]),
            )
        }
        2 => {
            // coordinate inversion
            let inv_tuple = BirationalTuple::new(vec![
                RationalFunction::new(constant(domain, 1), x()).unwrap(),
                RationalFunction::new(constant(domain, 1), y()).unwrap(),
            ])
            .unwrap();
            (inv_tuple.clone(), inv_tuple)
        }
        3 => {
            // swap
            let swap = tuple(vec![y(), x()]);
            (swap.clone(), swap)
        }
        4 => {
            // triangular shear of y by a polynomial in x
            let p = random_univariate(rng, 0, domain);
            (
                tuple(vec![x(), y().add(&p).unwrap()]),
                tuple(vec![x(), y().sub(&p).unwrap()]),
            )
        }
        _ => {
            // triangular shear of x by a polynomial in y
            let q = random_univariate(rng, 1, domain);
            (
                tuple(vec![x().add(&q).unwrap(), y()]),
                tuple(vec![x().sub(&q).unwrap(), y()]),
            )
        }
    };
    CremonaElement::new(fwd, inv).unwrap()
}
