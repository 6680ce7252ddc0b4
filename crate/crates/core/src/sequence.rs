//! Moment sequences and the Riesz functional.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::monomial::{monomial_basis, MultiIndex};
use crate::poly::KernelPolynomial;
use crate::rational::Rational;

/// A `d`-dimensional sequence of degree `m`: one rational value for every
/// multi-index with `|i| <= m`, no more and no fewer.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentSequence {
    dimension: usize,
    degree: u32,
    entries: BTreeMap<MultiIndex, Rational>,
}

impl MomentSequence {
    pub fn new(
        dimension: usize,
        degree: u32,
        entries: BTreeMap<MultiIndex, Rational>,
    ) -> Result<Self> {
        let basis = monomial_basis(dimension, degree);
        if entries.len() != basis.len() {
            return Err(Error::InvalidInput(format!(
                "sequence of dimension {dimension}, degree {degree} needs {} entries, got {}",
                basis.len(),
                entries.len()
            )));
        }
        for index in &basis {
            if !entries.contains_key(index) {
                return Err(Error::InvalidInput(format!("missing entry for {index}")));
            }
        }
        Ok(MomentSequence {
            dimension,
            degree,
            entries,
        })
    }

    /// Builds the sequence by evaluating `f` on every index `|i| <= degree`.
    pub fn from_fn(
        dimension: usize,
        degree: u32,
        mut f: impl FnMut(&MultiIndex) -> Rational,
    ) -> Self {
        let entries = monomial_basis(dimension, degree)
            .into_iter()
            .map(|index| {
                let value = f(&index);
                (index, value)
            })
            .collect();
        MomentSequence {
            dimension,
            degree,
            entries,
        }
    }

    /// Values listed in degree-lexicographic order.
    pub fn from_values(dimension: usize, degree: u32, values: Vec<Rational>) -> Result<Self> {
        let basis = monomial_basis(dimension, degree);
        if values.len() != basis.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} values, got {}",
                basis.len(),
                values.len()
            )));
        }
        Ok(MomentSequence {
            dimension,
            degree,
            entries: basis.into_iter().zip(values).collect(),
        })
    }

    pub fn zero(dimension: usize, degree: u32) -> Self {
        Self::from_fn(dimension, degree, |_| Rational::zero())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn get(&self, index: &MultiIndex) -> Option<&Rational> {
        self.entries.get(index)
    }

    /// Entry lookup that must succeed; panics on an out-of-range index.
    pub fn value(&self, index: &MultiIndex) -> &Rational {
        self.entries
            .get(index)
            .unwrap_or_else(|| panic!("no moment stored for {index}"))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.entries.iter()
    }

    /// The β-vector in degree-lexicographic order.
    pub fn values_degree_lex(&self) -> Vec<Rational> {
        self.entries.values().cloned().collect()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        MomentSequence {
            dimension: self.dimension,
            degree: self.degree,
            entries: self.entries.iter().map(|(i, v)| (i.clone(), v * c)).collect(),
        }
    }

    /// Entry-wise sum; dimensions and degrees must agree.
    pub fn add(&self, other: &MomentSequence) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                degree: other.degree,
                max: self.degree,
            });
        }
        Ok(MomentSequence {
            dimension: self.dimension,
            degree: self.degree,
            entries: self
                .entries
                .iter()
                .map(|(i, v)| (i.clone(), v + other.value(i)))
                .collect(),
        })
    }
}

/// Applies the Riesz functional of `beta` to `p`: `Σ a_i β_i`.
pub fn riesz(beta: &MomentSequence, p: &KernelPolynomial) -> Result<Rational> {
    if p.dimension() != beta.dimension() {
        return Err(Error::DimensionMismatch {
            expected: beta.dimension(),
            got: p.dimension(),
        });
    }
    if p.degree() > beta.degree() {
        return Err(Error::DegreeMismatch {
            degree: p.degree(),
            max: beta.degree(),
        });
    }
    let mut acc = Rational::zero();
    for (index, coeff) in p.terms() {
        acc += coeff * beta.value(index);
    }
    Ok(acc)
}

/// A moment sequence with gaps: entries may be missing, and the nominal
/// degree may be odd. [`crate::solver::complete_sequence`] fills the gaps.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PartialMomentSequence {
    dimension: usize,
    degree: u32,
    entries: BTreeMap<MultiIndex, Rational>,
}

impl PartialMomentSequence {
    pub fn new(
        dimension: usize,
        degree: u32,
        entries: BTreeMap<MultiIndex, Rational>,
    ) -> Result<Self> {
        for index in entries.keys() {
            if index.dimension() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: index.dimension(),
                });
            }
            if index.total_degree() > degree {
                return Err(Error::InvalidInput(format!(
                    "entry {index} exceeds declared degree {degree}"
                )));
            }
        }
        Ok(PartialMomentSequence {
            dimension,
            degree,
            entries,
        })
    }

    pub fn from_complete(seq: &MomentSequence) -> Self {
        PartialMomentSequence {
            dimension: seq.dimension(),
            degree: seq.degree(),
            entries: seq.iter().map(|(i, v)| (i.clone(), v.clone())).collect(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn get(&self, index: &MultiIndex) -> Option<&Rational> {
        self.entries.get(index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MultiIndex, &Rational)> {
        self.entries.iter()
    }

    /// Indices `|i| <= degree` with no stored value.
    pub fn missing(&self) -> Vec<MultiIndex> {
        monomial_basis(self.dimension, self.degree)
            .into_iter()
            .filter(|i| !self.entries.contains_key(i))
            .collect()
    }

    /// The sequence as a complete [`MomentSequence`], if nothing is missing.
    pub fn try_complete(&self) -> Option<MomentSequence> {
        if !self.missing().is_empty() {
            return None;
        }
        Some(
            MomentSequence::new(self.dimension, self.degree, self.entries.clone())
                .expect("coverage just checked"),
        )
    }
}
