//! Exact scalar domains: arbitrary-precision rationals, prime fields GF(p),
//! and extension fields GF(p^m) with a deterministically chosen modulus.
//!
//! Every scalar carries its domain tag; mixed-domain arithmetic is a
//! [`Error::DomainMismatch`], never a silent coercion. The one embedding the
//! crate admits is GF(p) into GF(p^m) (and it is applied point-wise during
//! evaluation, not during arithmetic).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Deterministic Miller-Rabin, valid for all `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a % n, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime_at_least(mut n: u64) -> u64 {
    if n <= 2 {
        return 2;
    }
    if n.is_multiple_of(2) {
        n += 1;
    }
    while !is_prime(n) {
        n += 2;
    }
    n
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` mod prime `p`; `None` when `a = 0`.
pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    Some(pow_mod(a % p, p - 2, p))
}

// ---------------------------------------------------------------------------
// Univariate polynomials over GF(p): Vec<u64> ascending, no trailing zeros.
// Used for extension-field moduli and residues.
// ---------------------------------------------------------------------------

pub(crate) fn upoly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn upoly_deg(v: &[u64]) -> Option<usize> {
    if v.is_empty() {
        None
    } else {
        Some(v.len() - 1)
    }
}

pub(crate) fn upoly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = add_mod(out[i + j], mul_mod(x, y, p), p);
        }
    }
    upoly_trim(&mut out);
    out
}

/// Remainder of `a` divided by `b` (`b` nonzero) over GF(p).
pub(crate) fn upoly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = upoly_deg(b).expect("division by zero polynomial");
    let lead_inv = inv_mod(b[db], p).expect("leading coefficient invertible");
    let mut r = a.to_vec();
    upoly_trim(&mut r);
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = mul_mod(r[dr], lead_inv, p);
        let shift = dr - db;
        for (j, &bc) in b.iter().enumerate() {
            r[shift + j] = sub_mod(r[shift + j], mul_mod(factor, bc, p), p);
        }
        upoly_trim(&mut r);
    }
    r
}

/// Extended Euclid over GF(p)[x]: returns (g, s) with s*a = g mod b.
fn upoly_half_gcd(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    // Invariants: r0 = s0*a mod (original b), r1 = s1*a mod (original b).
    let mut r0 = b.to_vec();
    let mut r1 = a.to_vec();
    let mut s0: Vec<u64> = Vec::new();
    let mut s1: Vec<u64> = vec![1];
    while !r1.is_empty() {
        // quotient of r0 by r1
        let d1 = r1.len() - 1;
        let lead_inv = inv_mod(r1[d1], p).expect("nonzero leading coefficient");
        let mut q = vec![0u64; r0.len().saturating_sub(r1.len()) + 1];
        let mut rem = r0.clone();
        while rem.len() > d1 || (rem.len() == r1.len() && !rem.is_empty()) {
            if rem.len() < r1.len() {
                break;
            }
            let dr = rem.len() - 1;
            let factor = mul_mod(rem[dr], lead_inv, p);
            let shift = dr - d1;
            q[shift] = add_mod(q[shift], factor, p);
            for (j, &bc) in r1.iter().enumerate() {
                rem[shift + j] = sub_mod(rem[shift + j], mul_mod(factor, bc, p), p);
            }
            upoly_trim(&mut rem);
        }
        let qs1 = upoly_mul(&q, &s1, p);
        let mut s2 = s0.clone();
        s2.resize(s2.len().max(qs1.len()), 0);
        for (j, &c) in qs1.iter().enumerate() {
            s2[j] = sub_mod(s2[j], c, p);
        }
        upoly_trim(&mut s2);
        r0 = std::mem::replace(&mut r1, rem);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

fn upoly_is_irreducible(f: &[u64], p: u64) -> bool {
    let m = match upoly_deg(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if m == 1 {
        return true;
    }
    // Trial division against every monic polynomial of degree 1..=m/2.
    for k in 1..=m / 2 {
        let count = (p as u128).pow(k as u32);
        let mut idx = 0u128;
        while idx < count {
            let mut g = index_digits(idx, p, k);
            g.push(1); // monic of degree k
            if upoly_rem(f, &g, p).is_empty() {
                return false;
            }
            idx += 1;
        }
    }
    true
}

/// Base-p digits of `idx`, least significant first, padded to `len`.
fn index_digits(mut idx: u128, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for slot in out.iter_mut() {
        *slot = (idx % p as u128) as u64;
        idx /= p as u128;
    }
    out
}

// ---------------------------------------------------------------------------
// Field specs
// ---------------------------------------------------------------------------

/// An extension field GF(p^m), m >= 2, with a fixed monic irreducible modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExtensionField {
    p: u64,
    m: u32,
    /// Ascending coefficients, length m+1, leading coefficient 1.
    modulus: Vec<u64>,
}

impl ExtensionField {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Modulus coefficients, ascending, length m+1, monic.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
}

/// A coefficient domain: QQ, GF(p), or GF(p^m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
    Extension(Arc<ExtensionField>),
}

impl FieldSpec {
    /// GF(p^m) with the lexicographically smallest monic irreducible modulus
    /// (coefficients compared from the x^{m-1} term down). Deterministic.
    pub fn finite(p: u64, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        assert!(m >= 1, "extension degree must be at least 1");
        if m == 1 {
            return Ok(FieldSpec::Prime(p));
        }
        let count = (p as u128).pow(m);
        let mut idx = 0u128;
        while idx < count {
            // idx encodes (c_{m-1}, ..., c_0) with c_{m-1} most significant,
            // so ascending idx is ascending lexicographic order.
            let digits = index_digits(idx, p, m as usize);
            let mut f = digits;
            f.push(1);
            if upoly_is_irreducible(&f, p) {
                return Ok(FieldSpec::Extension(Arc::new(ExtensionField {
                    p,
                    m,
                    modulus: f,
                })));
            }
            idx += 1;
        }
        unreachable!("an irreducible monic polynomial of degree {m} exists over GF({p})");
    }

    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    /// Characteristic: 0 for QQ, p otherwise.
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
            FieldSpec::Extension(ext) => ext.p,
        }
    }

    pub fn extension_degree(&self) -> u32 {
        match self {
            FieldSpec::Extension(ext) => ext.m,
            _ => 1,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self, FieldSpec::Rational)
    }

    /// Number of elements, or None for QQ. Errors out of u64 are not
    /// representable; callers cap sizes well below that.
    pub fn element_count(&self) -> Option<u128> {
        match self {
            FieldSpec::Rational => None,
            FieldSpec::Prime(p) => Some(*p as u128),
            FieldSpec::Extension(ext) => Some((ext.p as u128).pow(ext.m)),
        }
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Prime { residue: 0, p: *p },
            FieldSpec::Extension(ext) => Scalar::Extension {
                coeffs: vec![0; ext.m as usize],
                field: ext.clone(),
            },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Prime {
                residue: 1 % p,
                p: *p,
            },
            FieldSpec::Extension(ext) => {
                let mut coeffs = vec![0; ext.m as usize];
                coeffs[0] = 1;
                Scalar::Extension {
                    coeffs,
                    field: ext.clone(),
                }
            }
        }
    }

    /// The image of an integer in this field.
    pub fn from_int(&self, n: &BigInt) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::Prime(p) => Scalar::Prime {
                residue: bigint_mod(n, *p),
                p: *p,
            },
            FieldSpec::Extension(ext) => {
                let mut coeffs = vec![0; ext.m as usize];
                coeffs[0] = bigint_mod(n, ext.p);
                Scalar::Extension {
                    coeffs,
                    field: ext.clone(),
                }
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        self.from_int(&BigInt::from(n))
    }

    /// All elements in the fixed deterministic order: index k maps to the
    /// element whose representative has base-p digits of k as coefficients
    /// (constant coefficient least significant).
    pub fn enumerate(&self) -> Result<Vec<Scalar>> {
        let count = self.element_count().ok_or(Error::InfiniteField)?;
        Ok((0..count).map(|k| self.element_at(k)).collect())
    }

    /// Element at enumeration index `k` (finite fields only).
    pub fn element_at(&self, k: u128) -> Scalar {
        match self {
            FieldSpec::Rational => panic!("element_at on an infinite field"),
            FieldSpec::Prime(p) => {
                debug_assert!(k < *p as u128);
                Scalar::Prime {
                    residue: k as u64,
                    p: *p,
                }
            }
            FieldSpec::Extension(ext) => Scalar::Extension {
                coeffs: index_digits(k, ext.p, ext.m as usize),
                field: ext.clone(),
            },
        }
    }

    /// Enumeration index of a scalar of this field.
    pub fn index_of(&self, s: &Scalar) -> Option<u128> {
        match (self, s) {
            (FieldSpec::Prime(p), Scalar::Prime { residue, p: q }) if p == q => {
                Some(*residue as u128)
            }
            (FieldSpec::Extension(ext), Scalar::Extension { coeffs, field }) if ext == field => {
                let mut idx = 0u128;
                for &c in coeffs.iter().rev() {
                    idx = idx * ext.p as u128 + c as u128;
                }
                Some(idx)
            }
            _ => None,
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "QQ"),
            FieldSpec::Prime(p) => write!(f, "GF({p})"),
            FieldSpec::Extension(ext) => write!(f, "GF({}^{})", ext.p, ext.m),
        }
    }
}

fn bigint_mod(n: &BigInt, p: u64) -> u64 {
    use num_integer::Integer;
    let r = n.mod_floor(&BigInt::from(p));
    let (_, digits) = r.to_u64_digits();
    digits.first().copied().unwrap_or(0)
}

/// Image of a rational in GF(p); `None` when p divides the denominator.
pub fn reduce_rational_mod(r: &BigRational, p: u64) -> Option<u64> {
    let den = bigint_mod(r.denom(), p);
    let num = bigint_mod(r.numer(), p);
    let inv = inv_mod(den, p)?;
    Some(mul_mod(num, inv, p))
}

// ---------------------------------------------------------------------------
// Scalars
// ---------------------------------------------------------------------------

/// An exact field element tagged with its domain.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime {
        residue: u64,
        p: u64,
    },
    Extension {
        /// Ascending coefficients of the representative, fixed length m.
        coeffs: Vec<u64>,
        field: Arc<ExtensionField>,
    },
}

impl Scalar {
    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Rational(r)
    }

    pub fn domain(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rational,
            Scalar::Prime { p, .. } => FieldSpec::Prime(*p),
            Scalar::Extension { field, .. } => FieldSpec::Extension(field.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
            Scalar::Extension { coeffs, .. } => coeffs.iter().all(|&c| c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { residue, p } => *residue == 1 % p,
            Scalar::Extension { coeffs, .. } => {
                coeffs.first() == Some(&1) && coeffs[1..].iter().all(|&c| c == 0)
            }
        }
    }

    fn mismatch(&self, other: &Scalar) -> Error {
        Error::DomainMismatch(format!(
            "scalar domains {} and {} differ",
            self.domain(),
            other.domain()
        ))
    }

    pub fn add(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a + b)),
            (Scalar::Prime { residue: a, p }, Scalar::Prime { residue: b, p: q }) if p == q => {
                Ok(Scalar::Prime {
                    residue: add_mod(*a, *b, *p),
                    p: *p,
                })
            }
            (
                Scalar::Extension { coeffs: a, field },
                Scalar::Extension {
                    coeffs: b,
                    field: g,
                },
            ) if field == g => {
                let p = field.p;
                let coeffs = a
                    .iter()
                    .zip(b.iter())
                    .map(|(&x, &y)| add_mod(x, y, p))
                    .collect();
                Ok(Scalar::Extension {
                    coeffs,
                    field: field.clone(),
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Result<Scalar> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { residue, p } => Scalar::Prime {
                residue: if *residue == 0 { 0 } else { p - residue },
                p: *p,
            },
            Scalar::Extension { coeffs, field } => {
                let p = field.p;
                Scalar::Extension {
                    coeffs: coeffs
                        .iter()
                        .map(|&c| if c == 0 { 0 } else { p - c })
                        .collect(),
                    field: field.clone(),
                }
            }
        }
    }

    pub fn mul(&self, other: &Scalar) -> Result<Scalar> {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Ok(Scalar::Rational(a * b)),
            (Scalar::Prime { residue: a, p }, Scalar::Prime { residue: b, p: q }) if p == q => {
                Ok(Scalar::Prime {
                    residue: mul_mod(*a, *b, *p),
                    p: *p,
                })
            }
            (
                Scalar::Extension { coeffs: a, field },
                Scalar::Extension {
                    coeffs: b,
                    field: g,
                },
            ) if field == g => {
                let p = field.p;
                let prod = upoly_mul(a, b, p);
                let mut r = upoly_rem(&prod, &field.modulus, p);
                r.resize(field.m as usize, 0);
                Ok(Scalar::Extension {
                    coeffs: r,
                    field: field.clone(),
                })
            }
            _ => Err(self.mismatch(other)),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        match self {
            Scalar::Rational(a) => Some(Scalar::Rational(a.recip())),
            Scalar::Prime { residue, p } => Some(Scalar::Prime {
                residue: inv_mod(*residue, *p)?,
                p: *p,
            }),
            Scalar::Extension { coeffs, field } => {
                let p = field.p;
                let mut rep = coeffs.clone();
                upoly_trim(&mut rep);
                let (g, s) = upoly_half_gcd(&rep, &field.modulus, p);
                // modulus irreducible and rep nonzero of smaller degree, so g is
                // a nonzero constant
                debug_assert_eq!(g.len(), 1);
                let scale = inv_mod(g[0], p)?;
                let mut out: Vec<u64> = s.iter().map(|&c| mul_mod(c, scale, p)).collect();
                out.resize(field.m as usize, 0);
                Some(Scalar::Extension {
                    coeffs: out,
                    field: field.clone(),
                })
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.domain().one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same domain");
            }
            base = base.mul(&base).expect("same domain");
            e >>= 1;
        }
        acc
    }

    /// Canonical embedding into `target`: identity on the own domain, and
    /// GF(p) -> GF(p^m) as constants. Anything else is `None`.
    pub fn embed(&self, target: &FieldSpec) -> Option<Scalar> {
        if &self.domain() == target {
            return Some(self.clone());
        }
        match (self, target) {
            (Scalar::Prime { residue, p }, FieldSpec::Extension(ext)) if *p == ext.p => {
                let mut coeffs = vec![0; ext.m as usize];
                coeffs[0] = *residue;
                Some(Scalar::Extension {
                    coeffs,
                    field: ext.clone(),
                })
            }
            _ => None,
        }
    }

    /// The underlying rational, if this is a QQ scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { residue, .. } => write!(f, "{residue}"),
            Scalar::Extension { coeffs, .. } => {
                // generator written as `g`; only shows up in debug output and
                // reports, never in parseable tuple text
                let mut first = true;
                for (i, &c) in coeffs.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    if !first {
                        write!(f, " + ")?;
                    }
                    first = false;
                    match (c, i) {
                        (_, 0) => write!(f, "{c}")?,
                        (1, 1) => write!(f, "g")?,
                        (_, 1) => write!(f, "{c}*g")?,
                        (1, _) => write!(f, "g^{i}")?,
                        (_, _) => write!(f, "{c}*g^{i}")?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small() {
        let primes: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(
            primes,
            vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
        );
        assert!(is_prime(2_147_483_647)); // 2^31 - 1
        assert!(!is_prime(2_147_483_649));
    }

    #[test]
    fn build_prime_field() {
        let f5 = FieldSpec::finite(5, 1).unwrap();
        assert_eq!(f5, FieldSpec::Prime(5));
        assert!(matches!(FieldSpec::finite(4, 1), Err(Error::NotPrime(4))));
    }

    #[test]
    fn modulus_f4_is_unique_irreducible_quadratic() {
        let f4 = FieldSpec::finite(2, 2).unwrap();
        match &f4 {
            FieldSpec::Extension(ext) => assert_eq!(ext.modulus(), &[1, 1, 1]), // x^2+x+1
            _ => panic!("expected extension"),
        }
    }

    #[test]
    fn modulus_f9_lex_first() {
        let f9 = FieldSpec::finite(3, 2).unwrap();
        match &f9 {
            FieldSpec::Extension(ext) => assert_eq!(ext.modulus(), &[1, 0, 1]), // x^2+1
            _ => panic!("expected extension"),
        }
    }

    #[test]
    fn enumerate_orders_and_sizes() {
        let f2 = FieldSpec::Prime(2);
        let elems = f2.enumerate().unwrap();
        assert_eq!(elems.len(), 2);
        assert!(elems[0].is_zero() && elems[1].is_one());

        let f4 = FieldSpec::finite(2, 2).unwrap();
        let elems = f4.enumerate().unwrap();
        assert_eq!(elems.len(), 4);
        assert!(elems[0].is_zero());
        assert!(elems[1].is_one());

        let f9 = FieldSpec::finite(3, 2).unwrap();
        assert_eq!(f9.enumerate().unwrap().len(), 9);

        assert!(matches!(
            FieldSpec::Rational.enumerate(),
            Err(Error::InfiniteField)
        ));
    }

    #[test]
    fn enumeration_distinct_and_indexed() {
        let f9 = FieldSpec::finite(3, 2).unwrap();
        let elems = f9.enumerate().unwrap();
        for (i, a) in elems.iter().enumerate() {
            assert_eq!(f9.index_of(a), Some(i as u128));
            for b in &elems[..i] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn field_tables_close_for_small_q() {
        for spec in [
            FieldSpec::Prime(2),
            FieldSpec::Prime(3),
            FieldSpec::Prime(5),
            FieldSpec::Prime(7),
            FieldSpec::finite(2, 2).unwrap(),
            FieldSpec::finite(2, 3).unwrap(),
            FieldSpec::finite(3, 2).unwrap(),
        ] {
            let elems = spec.enumerate().unwrap();
            for a in &elems {
                for b in &elems {
                    let s = a.add(b).unwrap();
                    let m = a.mul(b).unwrap();
                    assert!(spec.index_of(&s).is_some(), "sum closed in {spec}");
                    assert!(spec.index_of(&m).is_some(), "product closed in {spec}");
                }
                // additive and multiplicative inverses stay inside
                assert!(spec.index_of(&a.neg()).is_some());
                if !a.is_zero() {
                    let inv = a.inv().unwrap();
                    assert!(a.mul(&inv).unwrap().is_one(), "inverse in {spec}");
                }
            }
        }
    }

    #[test]
    fn extension_inverse_roundtrip_f8() {
        let f8 = FieldSpec::finite(2, 3).unwrap();
        for k in 1..8 {
            let a = f8.element_at(k);
            let inv = a.inv().unwrap();
            assert!(a.mul(&inv).unwrap().is_one());
        }
    }

    #[test]
    fn rational_reduction() {
        use num_bigint::BigInt;
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(reduce_rational_mod(&half, 3), Some(2)); // 1/2 = 2 mod 3
        assert_eq!(reduce_rational_mod(&half, 2), None);
        let neg = BigRational::new(BigInt::from(-1), BigInt::from(3));
        assert_eq!(reduce_rational_mod(&neg, 5), Some(3)); // -1/3 = 4*2 = 8 = 3 mod 5
    }

    #[test]
    fn domain_mismatch_is_an_error() {
        let a = FieldSpec::Prime(5).from_i64(2);
        let b = FieldSpec::Prime(7).from_i64(2);
        assert!(matches!(a.add(&b), Err(Error::DomainMismatch(_))));
        let q = FieldSpec::Rational.from_i64(2);
        assert!(matches!(a.mul(&q), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn fermat_in_f5() {
        let f5 = FieldSpec::Prime(5);
        for e in f5.enumerate().unwrap() {
            assert_eq!(e.pow(5), e);
        }
    }

    #[test]
    fn next_prime() {
        assert_eq!(next_prime_at_least(2), 2);
        assert_eq!(next_prime_at_least(8), 11);
        assert_eq!(next_prime_at_least(14), 17);
    }
}
