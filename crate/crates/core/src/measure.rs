//! Finitely atomic signed measures and the measure-to-moments oracle.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::point_power;
use crate::rational::Rational;
use crate::sequence::MomentSequence;

/// One support point with its (nonzero) density.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Atom {
    pub point: Vec<Rational>,
    pub density: Rational,
}

/// `μ = Σ α_k δ_{w_k}` with pairwise-distinct points and nonzero densities.
///
/// Constructors merge duplicate points and drop zero densities, so the atom
/// count is always meaningful. Atoms are kept sorted by point, which makes
/// equal measures structurally equal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SignedMeasure {
    dimension: usize,
    atoms: Vec<Atom>,
}

impl SignedMeasure {
    pub fn new(dimension: usize, atoms: Vec<(Vec<Rational>, Rational)>) -> Result<Self> {
        let mut merged: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        for (point, density) in atoms {
            if point.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: point.len(),
                });
            }
            *merged.entry(point).or_insert_with(Rational::zero) += density;
        }
        Ok(SignedMeasure {
            dimension,
            atoms: merged
                .into_iter()
                .filter(|(_, d)| !d.is_zero())
                .map(|(point, density)| Atom { point, density })
                .collect(),
        })
    }

    pub fn empty(dimension: usize) -> Self {
        SignedMeasure {
            dimension,
            atoms: Vec::new(),
        }
    }

    /// Unit point mass at `point`.
    pub fn dirac(point: Vec<Rational>) -> Self {
        let dimension = point.len();
        SignedMeasure {
            dimension,
            atoms: alloc::vec![Atom {
                point,
                density: Rational::one(),
            }],
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return SignedMeasure::empty(self.dimension);
        }
        SignedMeasure {
            dimension: self.dimension,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    point: a.point.clone(),
                    density: &a.density * c,
                })
                .collect(),
        }
    }

    /// `self + other`; densities at identical points combine, zeros drop.
    pub fn add(&self, other: &SignedMeasure) -> Result<Self> {
        if self.dimension != other.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: other.dimension,
            });
        }
        SignedMeasure::new(
            self.dimension,
            self.atoms
                .iter()
                .chain(&other.atoms)
                .map(|a| (a.point.clone(), a.density.clone()))
                .collect(),
        )
    }

    pub fn sub(&self, other: &SignedMeasure) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }
}

/// Jordan decomposition `(μ⁺, μ⁻)`: both parts carry strictly positive
/// densities and `μ⁺ − μ⁻ = μ` atom by atom.
pub fn jordan_split(mu: &SignedMeasure) -> (SignedMeasure, SignedMeasure) {
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for atom in mu.atoms() {
        if atom.density.is_positive() {
            plus.push(Atom {
                point: atom.point.clone(),
                density: atom.density.clone(),
            });
        } else {
            minus.push(Atom {
                point: atom.point.clone(),
                density: -atom.density.clone(),
            });
        }
    }
    (
        SignedMeasure {
            dimension: mu.dimension(),
            atoms: plus,
        },
        SignedMeasure {
            dimension: mu.dimension(),
            atoms: minus,
        },
    )
}

/// The oracle: `β_i = Σ_k α_k w_k^i` for every `|i| <= degree`, exactly.
///
/// Everything else in the crate is verified against this function.
pub fn moments_of_measure(mu: &SignedMeasure, degree: u32) -> MomentSequence {
    MomentSequence::from_fn(mu.dimension(), degree, |index| {
        let mut acc = Rational::zero();
        for atom in mu.atoms() {
            acc += &atom.density * point_power(&atom.point, index);
        }
        acc
    })
}
