//! Sparse multivariate polynomials arising from column relations.

use alloc::collections::BTreeMap;
use alloc::string::String;

use core::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::monomial::MultiIndex;
use crate::rational::Rational;

/// `p(x) = Σ a_i x^i` with nonzero coefficients only.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct KernelPolynomial {
    dimension: usize,
    terms: BTreeMap<MultiIndex, Rational>,
}

impl KernelPolynomial {
    /// Zero coefficients are dropped; indices must match `dimension`.
    pub fn new(dimension: usize, terms: BTreeMap<MultiIndex, Rational>) -> Result<Self> {
        for index in terms.keys() {
            if index.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: index.dimension(),
                });
            }
        }
        Ok(KernelPolynomial {
            dimension,
            terms: terms.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn constant(dimension: usize, value: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !value.is_zero() {
            terms.insert(MultiIndex::zero(dimension), value);
        }
        KernelPolynomial { dimension, terms }
    }

    /// Coefficients paired with basis labels; zero entries are dropped.
    pub fn from_coefficients(labels: &[MultiIndex], coeffs: &[Rational]) -> Result<Self> {
        debug_assert_eq!(labels.len(), coeffs.len());
        let dimension = labels
            .first()
            .map(MultiIndex::dimension)
            .ok_or_else(|| Error::InvalidInput(String::from("empty label set")))?;
        Self::new(
            dimension,
            labels.iter().cloned().zip(coeffs.iter().cloned()).collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Max total degree of a stored term; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(MultiIndex::total_degree)
            .max()
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, index: &MultiIndex) -> Option<&Rational> {
        self.terms.get(index)
    }

    /// The highest label in degree-lex order and its coefficient.
    pub fn leading(&self) -> Option<(&MultiIndex, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Scales so that the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, lead)) => {
                let lead = lead.clone();
                KernelPolynomial {
                    dimension: self.dimension,
                    terms: self
                        .terms
                        .iter()
                        .map(|(i, c)| (i.clone(), c / &lead))
                        .collect(),
                }
            }
        }
    }
}

impl fmt::Display for KernelPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest label first, matching how column relations are read.
        for (pos, (index, coeff)) in self.terms.iter().rev().enumerate() {
            let mag = coeff.abs();
            if pos == 0 {
                if coeff.is_negative() {
                    f.write_str("-")?;
                }
            } else if coeff.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if index.total_degree() == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{index}")?;
            } else {
                write!(f, "{mag}*{index}")?;
            }
        }
        Ok(())
    }
}

/// Evaluates `p` at the point `w`, exactly.
pub fn eval_poly(p: &KernelPolynomial, w: &[Rational]) -> Result<Rational> {
    if w.len() != p.dimension() {
        return Err(Error::DimensionMismatch {
            expected: p.dimension(),
            got: w.len(),
        });
    }
    let mut acc = Rational::zero();
    for (index, coeff) in p.terms() {
        acc += coeff * point_power(w, index);
    }
    Ok(acc)
}

/// `w^i`, the monomial value at a point.
pub(crate) fn point_power(w: &[Rational], index: &MultiIndex) -> Rational {
    let mut acc = Rational::one();
    for (coord, &e) in w.iter().zip(index.exponents()) {
        for _ in 0..e {
            acc *= coord;
        }
    }
    acc
}
