//! Sparse multivariate polynomials over a tagged scalar domain.
//!
//! Terms live in a BTreeMap keyed by exponent vectors under graded
//! lexicographic order, so the leading term and the canonical printed form
//! are defined without any extra bookkeeping. No gcd or factorization is
//! attempted anywhere: equality questions downstream go through
//! cross-multiplication instead.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// An exponent vector of fixed length (one slot per variable).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(&a, &b)| a + b)
                .collect(),
        )
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then exponents compared from
    /// the first variable down.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Default display names: x, y, z for up to three variables, t1..td beyond.
pub fn var_name(nvars: usize, i: usize) -> String {
    if nvars <= 3 {
        ["x", "y", "z"][i].to_string()
    } else {
        format!("t{}", i + 1)
    }
}

/// A sparse polynomial with all coefficients in one tagged domain.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    nvars: usize,
    domain: FieldSpec,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(nvars: usize, domain: FieldSpec) -> Self {
        Polynomial {
            nvars,
            domain,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, value: Scalar) -> Self {
        let domain = value.domain();
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(Monomial::one(nvars), value);
        }
        Polynomial {
            nvars,
            domain,
            terms,
        }
    }

    pub fn one(nvars: usize, domain: FieldSpec) -> Self {
        let one = domain.one();
        Self::constant(nvars, one)
    }

    /// The variable x_i as a polynomial.
    pub fn var(nvars: usize, i: usize, domain: FieldSpec) -> Self {
        assert!(i < nvars, "variable index {i} out of range for {nvars} vars");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(nvars, i), domain.one());
        Polynomial {
            nvars,
            domain,
            terms,
        }
    }

    pub fn from_terms<I>(nvars: usize, domain: FieldSpec, iter: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut out = Self::zero(nvars, domain);
        for (m, c) in iter {
            out.add_term(m, c)?;
        }
        Ok(out)
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) -> Result<()> {
        if c.domain() != self.domain {
            return Err(Error::DomainMismatch(format!(
                "coefficient domain {} in a {} polynomial",
                c.domain(),
                self.domain
            )));
        }
        assert_eq!(m.0.len(), self.nvars, "exponent vector length mismatch");
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.remove(&m) {
            None => {
                self.terms.insert(m, c);
            }
            Some(old) => {
                let sum = old.add(&c)?;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn domain(&self) -> &FieldSpec {
        &self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_constant())
    }

    /// The value of a constant polynomial (zero for the empty one).
    pub fn as_constant(&self) -> Option<Scalar> {
        if self.terms.is_empty() {
            return Some(self.domain.zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// Total degree; None for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Leading term in graded lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    /// Terms in ascending graded lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.domain != other.domain {
            return Err(Error::DomainMismatch(format!(
                "polynomial domains {} and {} differ",
                self.domain, other.domain
            )));
        }
        if self.nvars != other.nvars {
            return Err(Error::DomainMismatch(format!(
                "polynomials in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms.iter() {
            out.add_term(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = Polynomial::zero(self.nvars, self.domain.clone());
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in other.terms.iter() {
                out.add_term(ma.mul(mb), ca.mul(cb)?)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Result<Polynomial> {
        if s.domain() != self.domain {
            return Err(Error::DomainMismatch(format!(
                "scaling a {} polynomial by a {} scalar",
                self.domain,
                s.domain()
            )));
        }
        if s.is_zero() {
            return Ok(Polynomial::zero(self.nvars, self.domain.clone()));
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.mul(s)?;
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.nvars, self.domain.clone());
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

    /// Evaluate at a point whose coordinates live in the polynomial's domain
    /// or in an extension of it (coefficients are embedded point-wise).
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::DomainMismatch(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        let target = match point.first() {
            Some(c) => c.domain(),
            None => self.domain.clone(),
        };
        for c in point.iter().skip(1) {
            if c.domain() != target {
                return Err(Error::DomainMismatch(
                    "point coordinates live in different domains".into(),
                ));
            }
        }
        let mut acc = target.zero();
        for (m, c) in self.terms.iter() {
            let embedded = c.embed(&target).ok_or_else(|| {
                Error::DomainMismatch(format!(
                    "cannot evaluate a {} polynomial at a {} point",
                    self.domain, target
                ))
            })?;
            let mut term = embedded;
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&point[i].pow(e))?;
                }
            }
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    /// Compute `self(X_1/Y, ..., X_d/Y) * Y^delta` as a polynomial, where
    /// `delta` must be at least the total degree. This is the cleared form
    /// used when composing tuples of fractions with common denominator `Y`.
    pub fn homogeneous_substitute(
        &self,
        subs: &[Polynomial],
        y: &Polynomial,
        delta: u32,
    ) -> Result<Polynomial> {
        assert_eq!(subs.len(), self.nvars, "one substitute per variable");
        if let Some(d) = self.total_degree() {
            assert!(delta >= d, "delta below total degree");
        }
        let inner_vars = y.nvars();
        let mut out = Polynomial::zero(inner_vars, y.domain().clone());
        for (m, c) in self.terms.iter() {
            let mut term = Polynomial::constant(inner_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&subs[i].pow(e))?;
                }
            }
            term = term.mul(&y.pow(delta - m.degree()))?;
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Apply `f` to every coefficient, producing a polynomial over
    /// `new_domain`. `f` returning None aborts (used for reduction mod p when
    /// p divides a denominator).
    pub(crate) fn map_coeffs<F>(&self, new_domain: FieldSpec, mut f: F) -> Option<Polynomial>
    where
        F: FnMut(&Scalar) -> Option<Scalar>,
    {
        let mut out = Polynomial::zero(self.nvars, new_domain);
        for (m, c) in self.terms.iter() {
            let mapped = f(c)?;
            out.add_term(m.clone(), mapped).ok()?;
        }
        Some(out)
    }

    /// Render with explicit variable names (used by the canonical printer).
    pub fn display_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { c.neg() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.is_constant() {
                factors.push(scalar_factor(&mag));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[i].clone()),
                    _ => factors.push(format!("{}^{}", names[i], e)),
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

fn is_negative(c: &Scalar) -> bool {
    match c {
        Scalar::Rational(r) => r.is_negative(),
        _ => false,
    }
}

/// A scalar as a product factor: parenthesized when its rendering is a sum.
fn scalar_factor(c: &Scalar) -> String {
    let s = c.to_string();
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| var_name(self.nvars, i)).collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn graded_lex_order() {
        // In two variables: x^2 > x*y > y^2 > x > y > 1.
        let seq = [
            Monomial(vec![2, 0]),
            Monomial(vec![1, 1]),
            Monomial(vec![0, 2]),
            Monomial(vec![1, 0]),
            Monomial(vec![0, 1]),
            Monomial(vec![0, 0]),
        ];
        for w in seq.windows(2) {
            assert!(w[0] > w[1], "{:?} should exceed {:?}", w[0], w[1]);
        }
    }

    #[test]
    fn square_over_f2() {
        let f2 = FieldSpec::Prime(2);
        let x = Polynomial::var(1, 0, f2.clone());
        let xp1 = x.add(&Polynomial::one(1, f2.clone())).unwrap();
        let sq = xp1.mul(&xp1).unwrap();
        // (x+1)^2 = x^2 + 1 in characteristic 2
        let expected = x.pow(2).add(&Polynomial::one(1, f2)).unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn difference_of_squares() {
        let x = Polynomial::var(2, 0, qq());
        let y = Polynomial::var(2, 1, qq());
        let lhs = x.add(&y).unwrap().mul(&x.sub(&y).unwrap()).unwrap();
        let rhs = x.pow(2).sub(&y.pow(2)).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.total_degree(), Some(2));
    }

    #[test]
    fn eval_agrees_with_algebra() {
        let x = Polynomial::var(2, 0, qq());
        let y = Polynomial::var(2, 1, qq());
        let p = x
            .pow(2)
            .add(&x.mul(&y).unwrap().scale(&qq().from_i64(3)).unwrap())
            .unwrap()
            .sub(&Polynomial::one(2, qq()))
            .unwrap();
        // p = x^2 + 3xy - 1 at (2, -1/2): 4 - 3 - 1 = 0
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let half_neg = Scalar::from_rational(BigRational::new(BigInt::from(-1), BigInt::from(2)));
        let v = p.eval(&[qq().from_i64(2), half_neg]).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn fermat_vanishes_on_f5() {
        let f5 = FieldSpec::Prime(5);
        let x = Polynomial::var(1, 0, f5.clone());
        let p = x.pow(5).sub(&x).unwrap();
        for a in f5.enumerate().unwrap() {
            assert!(p.eval(&[a]).unwrap().is_zero());
        }
    }

    #[test]
    fn eval_embeds_prime_into_extension() {
        let f2 = FieldSpec::Prime(2);
        let f4 = FieldSpec::finite(2, 2).unwrap();
        let x = Polynomial::var(1, 0, f2.clone());
        let p = x.pow(2).add(&x).unwrap().add(&Polynomial::one(1, f2)).unwrap();
        // x^2 + x + 1 vanishes exactly at the two elements outside GF(2)
        let roots: Vec<bool> = f4
            .enumerate()
            .unwrap()
            .iter()
            .map(|a| p.eval(std::slice::from_ref(a)).unwrap().is_zero())
            .collect();
        assert_eq!(roots, vec![false, false, true, true]);
    }

    #[test]
    fn eval_rejects_mixed_points() {
        let x = Polynomial::var(2, 0, qq());
        let bad = [qq().from_i64(1), FieldSpec::Prime(5).from_i64(1)];
        assert!(matches!(x.eval(&bad), Err(Error::DomainMismatch(_))));
    }

    #[test]
    fn homogeneous_substitute_clears_denominators() {
        // u = x + y; substituting x -> X1/Y, y -> X2/Y with delta = 1 and
        // clearing gives X1 + X2. Take X1 = x^2, X2 = y^2, Y = x*y:
        // u(x^2/(xy), y^2/(xy)) * xy = x^2 + y^2.
        let x = Polynomial::var(2, 0, qq());
        let y = Polynomial::var(2, 1, qq());
        let u = x.add(&y).unwrap();
        let out = u
            .homogeneous_substitute(&[x.pow(2), y.pow(2)], &x.mul(&y).unwrap(), 1)
            .unwrap();
        assert_eq!(out, x.pow(2).add(&y.pow(2)).unwrap());
    }

    #[test]
    fn display_canonical() {
        let x = Polynomial::var(2, 0, qq());
        let y = Polynomial::var(2, 1, qq());
        let p = x
            .pow(2)
            .sub(&x.mul(&y).unwrap().scale(&qq().from_i64(2)).unwrap())
            .unwrap()
            .add(&Polynomial::one(2, qq()))
            .unwrap();
        assert_eq!(p.to_string(), "x^2 - 2*x*y + 1");
        assert_eq!(Polynomial::zero(2, qq()).to_string(), "0");
        let neg = Polynomial::one(2, qq()).neg();
        assert_eq!(neg.to_string(), "-1");
    }

    #[test]
    fn add_cancels_to_zero() {
        let x = Polynomial::var(1, 0, qq());
        let z = x.sub(&x).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.total_degree(), None);
        assert_eq!(z.num_terms(), 0);
    }
}
