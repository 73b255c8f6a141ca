//! Rational self-maps of affine d-space as d-tuples of rational functions,
//! composition by clearing denominators, and two-sided inverse certificates.
//!
//! A `BirationalTuple` is just a tuple of fractions; nothing about it is
//! assumed invertible. A `CremonaElement` bundles a tuple with a partner that
//! has been *checked* to invert it on both sides, so downstream code can rely
//! on the pair without re-deriving anything.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::Polynomial;
use crate::ratfun::RationalFunction;

/// A d-tuple of rational functions in d variables over one domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BirationalTuple {
    coords: Vec<RationalFunction>,
}

impl BirationalTuple {
    pub fn new(coords: Vec<RationalFunction>) -> Result<Self> {
        let d = coords.len();
        if d == 0 {
            return Err(Error::DomainMismatch("empty coordinate tuple".into()));
        }
        let domain = coords[0].domain().clone();
        for c in &coords {
            if c.nvars() != d {
                return Err(Error::DomainMismatch(format!(
                    "coordinate in {} variables inside a {}-tuple",
                    c.nvars(),
                    d
                )));
            }
            if c.domain() != &domain {
                return Err(Error::DomainMismatch(format!(
                    "coordinate domains {} and {} differ",
                    c.domain(),
                    domain
                )));
            }
        }
        Ok(BirationalTuple { coords })
    }

    /// The identity tuple (x_1, ..., x_d).
    pub fn identity(d: usize, domain: FieldSpec) -> Self {
        let coords = (0..d)
            .map(|i| RationalFunction::var(d, i, domain.clone()))
            .collect();
        BirationalTuple { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn domain(&self) -> &FieldSpec {
        self.coords[0].domain()
    }

    pub fn coords(&self) -> &[RationalFunction] {
        &self.coords
    }

    /// Total number of stored terms across all numerators and denominators;
    /// the size measure used in growth diagnostics.
    pub fn formula_size(&self) -> usize {
        self.coords
            .iter()
            .map(|c| c.num().num_terms() + c.den().num_terms())
            .sum()
    }

    /// `self` after `other`: the tuple whose coordinates are the coordinates
    /// of `self` with `other`'s coordinates substituted for the variables.
    ///
    /// Substitution clears denominators through the common-denominator trick:
    /// with other_j = P_j/Q_j, put Y = prod_j Q_j and X_j = P_j * prod_{k!=j} Q_k,
    /// so that substituting X_j/Y and multiplying both parts of a coordinate
    /// by Y^delta (delta = max of the two total degrees) lands back in
    /// polynomials. A cleared denominator that collapses to zero means the
    /// image of `other` sits inside a pole set of `self`, which no dominant
    /// map can do; that case is reported as `DegenerateComposition`.
    pub fn compose(&self, other: &BirationalTuple) -> Result<BirationalTuple> {
        if self.dim() != other.dim() {
            return Err(Error::DomainMismatch(format!(
                "composition of a {}-tuple with a {}-tuple",
                self.dim(),
                other.dim()
            )));
        }
        if self.domain() != other.domain() {
            return Err(Error::DomainMismatch(format!(
                "composition across domains {} and {}",
                self.domain(),
                other.domain()
            )));
        }
        let d = self.dim();
        // Y = product of all inner denominators
        let mut y = Polynomial::one(d, self.domain().clone());
        for c in other.coords() {
            y = y.mul(c.den())?;
        }
        // X_j = P_j * product of the other denominators
        let mut xs = Vec::with_capacity(d);
        for (j, cj) in other.coords().iter().enumerate() {
            let mut xj = cj.num().clone();
            for (k, ck) in other.coords().iter().enumerate() {
                if k != j {
                    xj = xj.mul(ck.den())?;
                }
            }
            xs.push(xj);
        }
        let mut coords = Vec::with_capacity(d);
        for c in self.coords() {
            let dn = c.num().total_degree().unwrap_or(0);
            let dd = c.den().total_degree().unwrap_or(0);
            let delta = dn.max(dd);
            let num = c.num().homogeneous_substitute(&xs, &y, delta)?;
            let den = c.den().homogeneous_substitute(&xs, &y, delta)?;
            if den.is_zero() {
                return Err(Error::DegenerateComposition);
            }
            coords.push(RationalFunction::new(num, den)?);
        }
        Ok(BirationalTuple { coords })
    }

    /// Coordinate-wise equality as rational functions (cross-multiplication).
    pub fn tuple_eq(&self, other: &BirationalTuple) -> Result<bool> {
        if self.dim() != other.dim() || self.domain() != other.domain() {
            return Err(Error::DomainMismatch(
                "tuples differ in dimension or domain".into(),
            ));
        }
        for (a, b) in self.coords.iter().zip(other.coords.iter()) {
            if !a.eq(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The non-constant denominators of the coordinates: their zero sets cut
    /// out the locus where the tuple is undefined. Exact duplicates are
    /// listed once.
    pub fn indeterminacy_polys(&self) -> Vec<Polynomial> {
        let mut out: Vec<Polynomial> = Vec::new();
        for c in &self.coords {
            if c.den().is_constant() {
                continue;
            }
            if !out.contains(c.den()) {
                out.push(c.den().clone());
            }
        }
        out
    }

    /// Whether some coordinate denominator vanishes at the point.
    pub fn undefined_at(&self, point: &[Scalar]) -> Result<bool> {
        for c in &self.coords {
            if c.den().eval(point)?.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Evaluate all coordinates; a vanishing denominator is `SingularPoint`.
    pub fn eval_point(&self, point: &[Scalar]) -> Result<Vec<Scalar>> {
        if self.undefined_at(point)? {
            return Err(Error::SingularPoint);
        }
        self.coords.iter().map(|c| c.eval(point)).collect()
    }
}

impl fmt::Display for BirationalTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

/// Check that `inverse` undoes `forward` on both sides, returning the first
/// offending coordinate otherwise.
pub fn certify_inverse(forward: &BirationalTuple, inverse: &BirationalTuple) -> Result<()> {
    let id = BirationalTuple::identity(forward.dim(), forward.domain().clone());
    for (side, first, second) in [("left", forward, inverse), ("right", inverse, forward)] {
        // side "left": inverse composed after forward
        let prod = second.compose(first)?;
        for (i, (got, want)) in prod.coords().iter().zip(id.coords()).enumerate() {
            if !got.eq(want)? {
                return Err(Error::NotInverse {
                    coordinate: i,
                    side,
                    witness: got.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// A birational transformation together with its certified inverse.
#[derive(Debug, Clone)]
pub struct CremonaElement {
    forward: BirationalTuple,
    inverse: BirationalTuple,
}

impl CremonaElement {
    /// Certify and bundle. Fails with `NotInverse` when either composition
    /// misses the identity.
    pub fn new(forward: BirationalTuple, inverse: BirationalTuple) -> Result<Self> {
        certify_inverse(&forward, &inverse)?;
        Ok(CremonaElement { forward, inverse })
    }

    pub fn identity(d: usize, domain: FieldSpec) -> Self {
        let id = BirationalTuple::identity(d, domain);
        CremonaElement {
            forward: id.clone(),
            inverse: id,
        }
    }

    pub fn forward(&self) -> &BirationalTuple {
        &self.forward
    }

    pub fn inverse(&self) -> &BirationalTuple {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.forward.dim()
    }

    pub fn domain(&self) -> &FieldSpec {
        self.forward.domain()
    }

    /// The inverse element: certification is symmetric, so just swap.
    pub fn inverted(&self) -> CremonaElement {
        CremonaElement {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }

    /// Group product `self * other` = `self` after `other`.
    pub fn compose(&self, other: &CremonaElement) -> Result<CremonaElement> {
        Ok(CremonaElement {
            forward: self.forward.compose(&other.forward)?,
            inverse: other.inverse.compose(&self.inverse)?,
        })
    }

    pub fn is_identity(&self) -> Result<bool> {
        let id = BirationalTuple::identity(self.dim(), self.domain().clone());
        self.forward.tuple_eq(&id)
    }

    /// Membership in the singular set: the locus where the induced partial
    /// bijection on points must not be trusted. A point is singular when some
    /// forward denominator vanishes there, or when the forward image exists
    /// but lands where an inverse denominator vanishes.
    pub fn in_singular_set(&self, point: &[Scalar]) -> Result<bool> {
        if self.forward.undefined_at(point)? {
            return Ok(true);
        }
        let image = self.forward.eval_point(point)?;
        self.inverse.undefined_at(&image)
    }
}

impl fmt::Display for CremonaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.forward)
    }
}
