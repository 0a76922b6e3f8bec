use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver, RootClass};

/// One summand `mult * root`.
///
/// For an isotropic root, `mult = m` stands for `m` pairwise
/// non-isomorphic summands of that dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Term {
    pub root: DimVector,
    pub mult: u64,
    pub class: RootClass,
}

impl Term {
    pub fn new(q: &Quiver, root: DimVector, mult: u64) -> Result<Term> {
        if mult == 0 {
            return Err(Error::Precondition(format!("zero multiplicity for {root}")));
        }
        let class = q.root_class(root.as_slice())?;
        Ok(Term { root, mult, class })
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} x {} [{}]", self.mult, self.root, self.class)
    }
}

/// An ordered decomposition `total = sum mult_i * root_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub total: DimVector,
    pub terms: Vec<Term>,
}

impl Decomposition {
    pub fn new(total: DimVector, terms: Vec<Term>) -> Decomposition {
        Decomposition { total, terms }
    }

    pub fn roots(&self) -> Vec<DimVector> {
        self.terms.iter().map(|t| t.root.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// `sum mult_i * root_i`, checked.
    pub fn sum(&self) -> Result<DimVector> {
        let n = self.total.len();
        self.terms.iter().try_fold(DimVector::zero(n), |acc, t| {
            let mult = i64::try_from(t.mult).map_err(|_| Error::Overflow("multiplicity"))?;
            acc.checked_add(&t.root.checked_scale(mult)?)
        })
    }

    /// Strictly imaginary roots occur once with multiplicity one, and
    /// isotropic roots occur once (their multiplicity counts distinct
    /// summands).
    pub fn is_almost_loopless(&self) -> Result<bool> {
        for (i, t) in self.terms.iter().enumerate() {
            if t.class == RootClass::StrictlyImaginary && t.mult != 1 {
                return Ok(false);
            }
            if t.class.is_imaginary() && self.terms[..i].iter().any(|s| s.root == t.root) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Terms sorted by root, for order-insensitive comparison.
    pub fn multiset(&self) -> Vec<(DimVector, u64)> {
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|t| (t.root.clone(), t.mult))
            .collect();
        v.sort();
        v
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}
