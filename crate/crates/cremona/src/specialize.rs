//! Reduction of a finite symmetric set of birational transformations over Q
//! to a good prime field, preserving products and distinctness.
//!
//! The plan multiplies together two quantities: c1, the product of all
//! nonzero coefficients of denominators across every pairwise composition,
//! and c2, the product of all nonzero coefficients of numerators of
//! coordinate-wise differences of distinct elements. A prime is bad when it
//! divides the numerator or denominator of c1*c2, or the denominator of any
//! coefficient appearing in the set or its pairwise compositions. Reduction
//! mod any other prime keeps every composition nondegenerate and every pair
//! of distinct elements distinct.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::birat::{BirationalTuple, CremonaElement};
use crate::error::{Error, Result};
use crate::field::{self, FieldSpec};
use crate::ratfun::RationalFunction;

/// The exact data backing one specialization: the two coefficient products,
/// the finite set of excluded primes, and the chosen good prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecializationPlan {
    pub c1: BigRational,
    pub c2: BigRational,
    /// Ascending; arbitrary-precision because coefficient numerators can
    /// carry large prime factors.
    pub bad_primes: Vec<BigUint>,
    pub chosen_prime: u64,
}

impl SpecializationPlan {
    /// The coefficient map Q -> F_p underlying the reduction; None when the
    /// rational is not p-integral (never happens for plan inputs).
    pub fn reduce_coeff(&self, r: &BigRational) -> Option<u64> {
        field::reduce_rational_mod(r, self.chosen_prime)
    }
}

/// Indices of the distinct elements (first occurrence wins), compared as
/// rational maps.
fn distinct_indices(w: &[CremonaElement]) -> Result<Vec<usize>> {
    let mut reps: Vec<usize> = Vec::new();
    'outer: for i in 0..w.len() {
        for &j in &reps {
            if w[i].forward().tuple_eq(w[j].forward())? {
                continue 'outer;
            }
        }
        reps.push(i);
    }
    Ok(reps)
}

fn validate(w: &[CremonaElement]) -> Result<Vec<usize>> {
    if w.is_empty() {
        return Err(Error::MissingIdentity);
    }
    for u in w {
        if u.domain() != &FieldSpec::Rational {
            return Err(Error::DomainMismatch(format!(
                "specialization requires rational coefficients, found {}",
                u.domain()
            )));
        }
    }
    let reps = distinct_indices(w)?;
    let mut has_identity = false;
    for &i in &reps {
        if w[i].is_identity()? {
            has_identity = true;
            break;
        }
    }
    if !has_identity {
        return Err(Error::MissingIdentity);
    }
    // symmetric: every element's inverse appears as some element
    for &i in &reps {
        let mut found = false;
        for &j in &reps {
            if w[j].forward().tuple_eq(w[i].inverse())? {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::NotSymmetric(crate::syntax::render_tuple(
                w[i].forward(),
            )));
        }
    }
    Ok(reps)
}

fn rational_coeffs_of(t: &BirationalTuple, out: &mut Vec<BigRational>) {
    for c in t.coords() {
        for (_, s) in c.num().terms().chain(c.den().terms()) {
            out.push(s.as_rational().expect("rational domain").clone());
        }
    }
}

/// Compute (c1, c2, badPrimes) for a symmetric set containing the identity.
pub fn compute_bad_primes(
    w: &[CremonaElement],
) -> Result<(BigRational, BigRational, Vec<BigUint>)> {
    let reps = validate(w)?;
    let mut coeffs: Vec<BigRational> = Vec::new();
    for &i in &reps {
        rational_coeffs_of(w[i].forward(), &mut coeffs);
    }
    // c1: nonzero coefficients of denominators over all pairwise compositions
    let mut c1 = BigRational::one();
    for &i in &reps {
        for &j in &reps {
            let prod = w[i].forward().compose(w[j].forward())?;
            rational_coeffs_of(&prod, &mut coeffs);
            for c in prod.coords() {
                for (_, s) in c.den().terms() {
                    c1 *= s.as_rational().expect("rational domain");
                }
            }
        }
    }
    // c2: nonzero coefficients of numerators of differences of distinct pairs
    let mut c2 = BigRational::one();
    for (a, &i) in reps.iter().enumerate() {
        for &j in reps.iter().skip(a + 1) {
            for (u, v) in w[i]
                .forward()
                .coords()
                .iter()
                .zip(w[j].forward().coords())
            {
                let diff = u.sub(v)?;
                for (_, s) in diff.num().terms() {
                    c2 *= s.as_rational().expect("rational domain");
                }
            }
        }
    }
    let mut bad: BTreeSet<BigUint> = BTreeSet::new();
    let c = &c1 * &c2;
    factor_into(&c.numer().abs().to_biguint().expect("nonneg"), &mut bad);
    factor_into(&c.denom().abs().to_biguint().expect("nonneg"), &mut bad);
    for r in &coeffs {
        factor_into(&r.denom().abs().to_biguint().expect("nonneg"), &mut bad);
    }
    Ok((c1, c2, bad.into_iter().collect()))
}

/// Smallest prime >= p0 outside the bad set.
pub fn choose_prime(bad_primes: &[BigUint], p0: u64) -> u64 {
    let mut p = field::next_prime_at_least(p0.max(2));
    loop {
        if !bad_primes.contains(&BigUint::from(p)) {
            return p;
        }
        p = field::next_prime_at_least(p + 1);
    }
}

/// Build the full plan for a symmetric set, choosing the first good prime at
/// or beyond `p0`.
pub fn make_plan(w: &[CremonaElement], p0: u64) -> Result<SpecializationPlan> {
    let (c1, c2, bad_primes) = compute_bad_primes(w)?;
    let chosen_prime = choose_prime(&bad_primes, p0);
    Ok(SpecializationPlan {
        c1,
        c2,
        bad_primes,
        chosen_prime,
    })
}

/// Reduce a tuple over Q coefficient-wise mod p. Fails with BadPrime when a
/// coefficient is not p-integral.
pub fn reduce_tuple(t: &BirationalTuple, p: u64) -> Result<BirationalTuple> {
    let target = FieldSpec::Prime(p);
    let mut coords = Vec::with_capacity(t.dim());
    for c in t.coords() {
        let map = |s: &crate::field::Scalar| {
            let r = s.as_rational()?;
            let v = field::reduce_rational_mod(r, p)?;
            Some(crate::field::Scalar::Prime { residue: v, p })
        };
        let num = c
            .num()
            .map_coeffs(target.clone(), map)
            .ok_or(Error::BadPrime(p))?;
        let den = c
            .den()
            .map_coeffs(target.clone(), map)
            .ok_or(Error::BadPrime(p))?;
        // the denominator is monic, so its image keeps leading coefficient 1
        debug_assert!(!den.is_zero());
        coords.push(RationalFunction::from_normalized(num, den));
    }
    BirationalTuple::new(coords)
}

/// Reduce every element mod a good prime, certifying each reduced element
/// against the reduction of its inverse partner in the set.
pub fn specialize_chunk(w: &[CremonaElement], p: u64) -> Result<Vec<CremonaElement>> {
    if w.is_empty() {
        return Ok(Vec::new());
    }
    match w[0].domain() {
        FieldSpec::Rational => {}
        FieldSpec::Prime(q) => {
            // already finite: specialization is the identity map
            if *q == p {
                return Ok(w.to_vec());
            }
            return Err(Error::DomainMismatch(format!(
                "elements already live over GF({q}), cannot respecialize at {p}"
            )));
        }
        other => {
            return Err(Error::DomainMismatch(format!(
                "cannot specialize elements over {other}"
            )));
        }
    }
    let (_, _, bad) = compute_bad_primes(w)?;
    if bad.contains(&BigUint::from(p)) {
        return Err(Error::BadPrime(p));
    }
    let reduced: Vec<BirationalTuple> = w
        .iter()
        .map(|u| reduce_tuple(u.forward(), p))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(w.len());
    for (i, u) in w.iter().enumerate() {
        // partner whose forward tuple is this element's inverse
        let mut partner = None;
        for (j, v) in w.iter().enumerate() {
            if v.forward().tuple_eq(u.inverse())? {
                partner = Some(j);
                break;
            }
        }
        let j = partner.ok_or_else(|| {
            Error::NotSymmetric(crate::syntax::render_tuple(u.forward()))
        })?;
        let elem = CremonaElement::new(reduced[i].clone(), reduced[j].clone()).map_err(|e| {
            Error::ReductionFailure {
                element: crate::syntax::render_tuple(u.forward()),
                prime: p,
                detail: e.to_string(),
            }
        })?;
        out.push(elem);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Integer factorization (trial division, then Pollard rho with a
// deterministic parameter schedule). Only prime *sets* are needed, not
// multiplicities.
// ---------------------------------------------------------------------------

fn factor_into(n: &BigUint, out: &mut BTreeSet<BigUint>) {
    if n.is_zero() || n.is_one() {
        return;
    }
    // fast path: everything that fits in a machine word
    if let Some(small) = n.to_u64() {
        factor_u64(small, out);
        return;
    }
    let mut n = n.clone();
    // wheel trial division: after removing 2 and 3, all primes are 6k +- 1;
    // composite candidates can no longer divide because their prime factors
    // were already removed
    let mut divide_out = |p: u64, n: &mut BigUint| {
        let bp = BigUint::from(p);
        if (&*n % &bp).is_zero() {
            out.insert(bp.clone());
            while (&*n % &bp).is_zero() {
                *n /= &bp;
            }
        }
    };
    divide_out(2, &mut n);
    divide_out(3, &mut n);
    let mut p = 5u64;
    while p <= 100_000 && BigUint::from(p) * BigUint::from(p) <= n {
        divide_out(p, &mut n);
        divide_out(p + 2, &mut n);
        p += 6;
    }
    if let Some(small) = n.to_u64() {
        factor_u64(small, out);
        return;
    }
    if is_probable_prime(&n) {
        out.insert(n);
        return;
    }
    let d = pollard_rho(&n);
    factor_into(&d, out);
    factor_into(&(n / d), out);
}

/// Prime factors of a u64 by wheel trial division.
fn factor_u64(mut n: u64, out: &mut BTreeSet<BigUint>) {
    if n <= 1 {
        return;
    }
    let mut divide_out = |p: u64, n: &mut u64| {
        if (*n).is_multiple_of(p) {
            out.insert(BigUint::from(p));
            while (*n).is_multiple_of(p) {
                *n /= p;
            }
        }
    };
    divide_out(2, &mut n);
    divide_out(3, &mut n);
    let mut p = 5u64;
    while p.saturating_mul(p) <= n {
        divide_out(p, &mut n);
        divide_out(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.insert(BigUint::from(n));
    }
}

/// Miller-Rabin with the first twelve prime bases: deterministic for all
/// inputs below 3.3e24, strong probable-prime test beyond.
fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return field::is_prime(small);
    }
    let one = BigUint::one();
    let two = BigUint::from(2u64);
    if (n % &two).is_zero() {
        return false;
    }
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let a = BigUint::from(a);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's cycle variant of Pollard rho; n must be odd, composite, and not a
/// prime power below the trial-division bound.
fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    for c in 1u64.. {
        let cval = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cval) % n;
        let mut x = BigUint::from(2u64);
        let mut y = x.clone();
        let mut d = one.clone();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break; // cycle degenerated; retry with next c
            }
            d = diff.gcd(n);
        }
        if d != one && &d != n {
            return d;
        }
    }
    unreachable!("pollard rho exhausted parameter schedule");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_map_expr;
    use crate::word::GeneratorSystem;
    use num_bigint::BigInt;

    fn qq_identity(d: usize) -> CremonaElement {
        CremonaElement::identity(d, FieldSpec::Rational)
    }

    fn element(fwd: &str, inv: &str) -> CremonaElement {
        CremonaElement::new(
            parse_map_expr(fwd).unwrap(),
            parse_map_expr(inv).unwrap(),
        )
        .unwrap()
    }

    fn half_shift_set() -> Vec<CremonaElement> {
        vec![
            qq_identity(1),
            element("[x + 1/2] over QQ", "[x - 1/2] over QQ"),
            element("[x - 1/2] over QQ", "[x + 1/2] over QQ"),
        ]
    }

    fn klein_set() -> Vec<CremonaElement> {
        let sigma = element("[1/x, 1/y] over QQ", "[1/x, 1/y] over QQ");
        let tau = element("[y, x] over QQ", "[y, x] over QQ");
        let st = element("[1/y, 1/x] over QQ", "[1/y, 1/x] over QQ");
        vec![qq_identity(2), sigma, tau, st]
    }

    #[test]
    fn identity_only_plan_is_empty() {
        let w = vec![qq_identity(1)];
        let (c1, c2, bad) = compute_bad_primes(&w).unwrap();
        assert!(c1.is_one());
        assert!(c2.is_one());
        assert!(bad.is_empty());
    }

    #[test]
    fn half_shift_plan() {
        let w = half_shift_set();
        let (c1, c2, bad) = compute_bad_primes(&w).unwrap();
        assert!(c1.is_one()); // every composition is a polynomial tuple
        assert_eq!(c2, BigRational::new(BigInt::from(-1), BigInt::from(4)));
        assert_eq!(bad, vec![BigUint::from(2u64)]);
        assert_eq!(choose_prime(&bad, 2), 3);
        assert_eq!(choose_prime(&bad, 5), 5);
    }

    #[test]
    fn klein_plan_has_no_bad_primes() {
        let (c1, c2, bad) = compute_bad_primes(&klein_set()).unwrap();
        // all coefficients involved are units
        assert!((c1.clone() * c1).is_one());
        assert!((c2.clone() * c2).is_one());
        assert!(bad.is_empty());
        assert_eq!(choose_prime(&bad, 2), 2);
    }

    #[test]
    fn half_shift_reduction_mod_3() {
        let w = half_shift_set();
        let reduced = specialize_chunk(&w, 3).unwrap();
        let rendered: Vec<String> = reduced
            .iter()
            .map(|e| crate::syntax::render_tuple(e.forward()))
            .collect();
        assert_eq!(
            rendered,
            vec![
                "[x] over GF(3)",
                "[x + 2] over GF(3)",
                "[x + 1] over GF(3)"
            ]
        );
    }

    #[test]
    fn bad_prime_is_rejected() {
        let w = half_shift_set();
        assert!(matches!(specialize_chunk(&w, 2), Err(Error::BadPrime(2))));
    }

    #[test]
    fn reduction_commutes_with_composition() {
        let w = half_shift_set();
        let p = 3;
        let reduced = specialize_chunk(&w, p).unwrap();
        for (i, u) in w.iter().enumerate() {
            for (j, v) in w.iter().enumerate() {
                let composed_then_reduced =
                    reduce_tuple(&u.forward().compose(v.forward()).unwrap(), p).unwrap();
                let reduced_then_composed = reduced[i]
                    .forward()
                    .compose(reduced[j].forward())
                    .unwrap();
                assert!(composed_then_reduced
                    .tuple_eq(&reduced_then_composed)
                    .unwrap());
            }
        }
    }

    #[test]
    fn reduction_is_injective_on_distinct_elements() {
        for p in [3u64, 5, 7] {
            let w = half_shift_set();
            let reduced = specialize_chunk(&w, p).unwrap();
            for i in 0..reduced.len() {
                for j in 0..i {
                    assert!(!reduced[i]
                        .forward()
                        .tuple_eq(reduced[j].forward())
                        .unwrap());
                }
            }
        }
    }

    #[test]
    fn klein_reduction_keeps_involutions() {
        let reduced = specialize_chunk(&klein_set(), 5).unwrap();
        for e in &reduced[1..] {
            let sq = e.compose(e).unwrap();
            assert!(sq.is_identity().unwrap());
        }
    }

    #[test]
    fn asymmetric_set_is_rejected() {
        let shift = element("[x + 1] over QQ", "[x - 1] over QQ");
        let w = vec![qq_identity(1), shift];
        assert!(matches!(
            compute_bad_primes(&w),
            Err(Error::NotSymmetric(_))
        ));
    }

    #[test]
    fn missing_identity_is_rejected() {
        let up = element("[x + 1] over QQ", "[x - 1] over QQ");
        let down = element("[x - 1] over QQ", "[x + 1] over QQ");
        assert!(matches!(
            compute_bad_primes(&[up, down]),
            Err(Error::MissingIdentity)
        ));
    }

    #[test]
    fn plans_are_deterministic() {
        let a = make_plan(&half_shift_set(), 2).unwrap();
        let b = make_plan(&half_shift_set(), 2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.chosen_prime, 3);
    }

    #[test]
    fn sigma_involution_survives_from_generator_file() {
        let sys = GeneratorSystem::parse(
            "s: [1/x, 1/y] over QQ ; inverse: [1/x, 1/y] over QQ\n",
        )
        .unwrap();
        let s = sys.element(0).unwrap().clone();
        let w = vec![qq_identity(2), s];
        let plan = make_plan(&w, 5).unwrap();
        assert_eq!(plan.chosen_prime, 5);
        let reduced = specialize_chunk(&w, plan.chosen_prime).unwrap();
        assert!(reduced[1]
            .compose(&reduced[1])
            .unwrap()
            .is_identity()
            .unwrap());
    }

    #[test]
    fn factoring_handles_large_semiprimes() {
        let mut out = BTreeSet::new();
        // 1000003 * 1000033 both prime, beyond the trial-division bound
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_033u64);
        factor_into(&n, &mut out);
        let got: Vec<BigUint> = out.into_iter().collect();
        assert_eq!(
            got,
            vec![BigUint::from(1_000_003u64), BigUint::from(1_000_033u64)]
        );
    }
}
