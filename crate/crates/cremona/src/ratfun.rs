//! Rational functions as explicit numerator/denominator pairs.
//!
//! No attempt is made to cancel common factors; equality is decided by
//! cross-multiplication, which is exact and needs no gcd machinery. The one
//! normalization applied is scaling so the denominator's leading coefficient
//! (graded lex) is 1 — this fixes a canonical representative per
//! numerator/denominator pair and keeps denominators meaningful after
//! coefficient-wise reduction maps.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::{var_name, Polynomial};

/// A quotient of polynomials with a nonzero, monic denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

impl RationalFunction {
    /// Build `num/den`, normalizing so the denominator is monic.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self> {
        if num.domain() != den.domain() || num.nvars() != den.nvars() {
            return Err(Error::DomainMismatch(
                "numerator and denominator disagree in domain or variable count".into(),
            ));
        }
        if den.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        let lead = den.leading().expect("nonzero").1.clone();
        if lead.is_one() {
            return Ok(RationalFunction { num, den });
        }
        let inv = lead.inv().expect("nonzero leading coefficient");
        Ok(RationalFunction {
            num: num.scale(&inv)?,
            den: den.scale(&inv)?,
        })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        let one = Polynomial::one(p.nvars(), p.domain().clone());
        RationalFunction { num: p, den: one }
    }

    pub fn constant(nvars: usize, value: Scalar) -> Self {
        Self::from_poly(Polynomial::constant(nvars, value))
    }

    pub fn var(nvars: usize, i: usize, domain: FieldSpec) -> Self {
        Self::from_poly(Polynomial::var(nvars, i, domain))
    }

    pub fn zero(nvars: usize, domain: FieldSpec) -> Self {
        Self::from_poly(Polynomial::zero(nvars, domain))
    }

    pub fn one(nvars: usize, domain: FieldSpec) -> Self {
        Self::from_poly(Polynomial::one(nvars, domain))
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn domain(&self) -> &FieldSpec {
        self.num.domain()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Crate-internal constructor for pairs already normalized.
    pub(crate) fn from_normalized(num: Polynomial, den: Polynomial) -> Self {
        debug_assert!(den.leading().map(|(_, c)| c.is_one()).unwrap_or(false));
        RationalFunction { num, den }
    }

    pub fn add(&self, other: &RationalFunction) -> Result<RationalFunction> {
        let num = self
            .num
            .mul(&other.den)?
            .add(&other.num.mul(&self.den)?)?;
        RationalFunction::new(num, self.den.mul(&other.den)?)
    }

    pub fn neg(&self) -> RationalFunction {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RationalFunction) -> Result<RationalFunction> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RationalFunction) -> Result<RationalFunction> {
        RationalFunction::new(self.num.mul(&other.num)?, self.den.mul(&other.den)?)
    }

    /// Divide; the divisor must not be the zero function.
    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction> {
        if other.num.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        RationalFunction::new(self.num.mul(&other.den)?, self.den.mul(&other.num)?)
    }

    pub fn pow(&self, e: u32) -> RationalFunction {
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Equality as rational functions: P1*Q2 - P2*Q1 = 0 identically.
    pub fn eq(&self, other: &RationalFunction) -> Result<bool> {
        let cross = self
            .num
            .mul(&other.den)?
            .sub(&other.num.mul(&self.den)?)?;
        Ok(cross.is_zero())
    }

    /// Evaluate at a point where the denominator does not vanish.
    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        let n = self.num.eval(point)?;
        n.mul(&d.inv().expect("nonzero"))
    }
}

/// True when the polynomial renders as a single unparenthesized power factor
/// (a variable, possibly raised to an exponent, or the constant 1).
fn den_is_atomic(p: &Polynomial) -> bool {
    if p.num_terms() != 1 {
        return false;
    }
    let (m, c) = p.leading().expect("one term");
    if !c.is_one() {
        return false;
    }
    m.0.iter().filter(|&&e| e > 0).count() <= 1
}

impl RationalFunction {
    pub fn display_with(&self, names: &[String]) -> String {
        let num_one_term = self.num.num_terms() <= 1;
        let n = self.num.display_with(names);
        if self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            return n;
        }
        let n = if num_one_term { n } else { format!("({n})") };
        let d = self.den.display_with(names);
        let d = if den_is_atomic(&self.den) {
            d
        } else {
            format!("({d})")
        };
        format!("{n}/{d}")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars())
            .map(|i| var_name(self.nvars(), i))
            .collect();
        write!(f, "{}", self.display_with(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qq() -> FieldSpec {
        FieldSpec::Rational
    }

    fn x() -> Polynomial {
        Polynomial::var(2, 0, qq())
    }

    fn y() -> Polynomial {
        Polynomial::var(2, 1, qq())
    }

    #[test]
    fn denominator_becomes_monic() {
        let two = Polynomial::constant(2, qq().from_i64(2));
        let f = RationalFunction::new(x(), y().mul(&two).unwrap()).unwrap();
        assert_eq!(f.den(), &y());
        // numerator was scaled by the same 1/2
        assert_eq!(f.num().to_string(), "1/2*x");
    }

    #[test]
    fn zero_denominator_rejected() {
        let z = Polynomial::zero(2, qq());
        assert!(matches!(
            RationalFunction::new(x(), z),
            Err(Error::DenominatorVanishes)
        ));
    }

    #[test]
    fn cross_multiplication_equality() {
        let f = RationalFunction::new(x(), y()).unwrap();
        // x*(x+y) / y*(x+y) equals x/y without any cancellation
        let xpy = x().add(&y()).unwrap();
        let g = RationalFunction::new(x().mul(&xpy).unwrap(), y().mul(&xpy).unwrap()).unwrap();
        assert!(f.eq(&g).unwrap());
        let h = f.add(&RationalFunction::one(2, qq())).unwrap();
        assert!(!f.eq(&h).unwrap());
    }

    #[test]
    fn field_identities() {
        let f = RationalFunction::new(x(), y()).unwrap();
        let g = RationalFunction::new(y().add(&Polynomial::one(2, qq())).unwrap(), x()).unwrap();
        // (f+g) - g == f, (f*g)/g == f
        let back = f.add(&g).unwrap().sub(&g).unwrap();
        assert!(back.eq(&f).unwrap());
        let back = f.mul(&g).unwrap().div(&g).unwrap();
        assert!(back.eq(&f).unwrap());
    }

    #[test]
    fn eval_and_pole() {
        let f = RationalFunction::new(x(), y()).unwrap();
        let v = f.eval(&[qq().from_i64(3), qq().from_i64(2)]).unwrap();
        assert_eq!(v.to_string(), "3/2");
        assert!(matches!(
            f.eval(&[qq().from_i64(3), qq().from_i64(0)]),
            Err(Error::DenominatorVanishes)
        ));
    }

    #[test]
    fn division_by_zero_function() {
        let f = RationalFunction::one(2, qq());
        let z = RationalFunction::zero(2, qq());
        assert!(matches!(f.div(&z), Err(Error::DenominatorVanishes)));
    }

    #[test]
    fn display_forms() {
        let f = RationalFunction::new(x(), y()).unwrap();
        assert_eq!(f.to_string(), "x/y");
        let g = RationalFunction::new(
            x().add(&Polynomial::one(2, qq())).unwrap(),
            x().sub(&Polynomial::one(2, qq())).unwrap(),
        )
        .unwrap();
        assert_eq!(g.to_string(), "(x + 1)/(x - 1)");
        let h = RationalFunction::new(Polynomial::one(2, qq()), y().pow(2)).unwrap();
        assert_eq!(h.to_string(), "1/y^2");
        let k = RationalFunction::new(Polynomial::one(2, qq()), x().mul(&y()).unwrap()).unwrap();
        assert_eq!(k.to_string(), "1/(x*y)");
        let p = RationalFunction::from_poly(x().pow(2));
        assert_eq!(p.to_string(), "x^2");
    }

    #[test]
    fn eval_matches_arithmetic() {
        // spot check: (f+g)(P) = f(P) + g(P) at a few rational points
        let f = RationalFunction::new(x(), y()).unwrap();
        let g = RationalFunction::new(y(), x().add(&Polynomial::one(2, qq())).unwrap()).unwrap();
        let sum = f.add(&g).unwrap();
        for (a, b) in [(1i64, 2i64), (-3, 5), (7, -2)] {
            let pt = [qq().from_i64(a), qq().from_i64(b)];
            let lhs = sum.eval(&pt).unwrap();
            let rhs = f.eval(&pt).unwrap().add(&g.eval(&pt).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
