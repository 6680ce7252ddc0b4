//! Multi-indices and the degree-lexicographic basis order.
//!
//! Every matrix in the crate labels rows and columns with monomials listed
//! in one fixed order: ascending total degree, and inside a degree block the
//! power of the first variable decreases first (`1, x1, x2, x1^2, x1*x2,
//! x2^2, ...`). [`MultiIndex`]'s `Ord` implements exactly this listing, so
//! sorted containers agree with matrix label positions everywhere.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

/// Exponent vector of a monomial `x^i = x1^{i_1} ... x_d^{i_d}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex {
    exps: Vec<u32>,
}

impl MultiIndex {
    /// Panics if `exps` is empty; the ambient dimension must be ≥ 1.
    pub fn new(exps: Vec<u32>) -> Self {
        assert!(!exps.is_empty(), "multi-index needs dimension >= 1");
        MultiIndex { exps }
    }

    pub fn zero(dimension: usize) -> Self {
        Self::new(alloc::vec![0; dimension])
    }

    pub fn dimension(&self) -> usize {
        self.exps.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.exps.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    /// Component-wise sum `i + j`, the index of `x^i * x^j`.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!(self.dimension(), other.dimension());
        MultiIndex::new(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Label text for matrix dumps, e.g. `1`, `x2`, `x1^2*x3`.
    pub fn label(&self) -> String {
        use core::fmt::Write;
        if self.total_degree() == 0 {
            return String::from("1");
        }
        let mut out = String::new();
        for (k, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            if e == 1 {
                let _ = write!(out, "x{}", k + 1);
            } else {
                let _ = write!(out, "x{}^{}", k + 1, e);
            }
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    /// Listing order: total degree first, then earlier-variable powers
    /// decreasing, so `(2,0) < (1,1) < (0,2)`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

/// All multi-indices with `|i| <= k` in listing order; `C(k+d, d)` of them.
pub fn monomial_basis(dimension: usize, k: u32) -> Vec<MultiIndex> {
    assert!(dimension >= 1, "dimension must be >= 1");
    let mut out = Vec::with_capacity(basis_size(dimension, k));
    let mut scratch = alloc::vec![0u32; dimension];
    for degree in 0..=k {
        emit_degree(degree, 0, &mut scratch, &mut out);
    }
    out
}

fn emit_degree(remaining: u32, pos: usize, scratch: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if pos + 1 == scratch.len() {
        scratch[pos] = remaining;
        out.push(MultiIndex::new(scratch.clone()));
        return;
    }
    for first in (0..=remaining).rev() {
        scratch[pos] = first;
        emit_degree(remaining - first, pos + 1, scratch, out);
    }
}

/// `C(k+d, d)`, the length of [`monomial_basis`].
pub fn basis_size(dimension: usize, k: u32) -> usize {
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for j in 1..=dimension as u128 {
        num *= k as u128 + j;
        den *= j;
    }
    (num / den) as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn mi(exps: &[u32]) -> MultiIndex {
        MultiIndex::new(exps.to_vec())
    }

    #[test]
    fn basis_matches_printed_order() {
        let basis: Vec<_> = monomial_basis(2, 2)
            .into_iter()
            .map(|m| m.exponents().to_vec())
            .collect();
        assert_eq!(
            basis,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
    }

    #[test]
    fn basis_single_variable() {
        let basis: Vec<_> = monomial_basis(1, 3)
            .into_iter()
            .map(|m| m.exponents().to_vec())
            .collect();
        assert_eq!(basis, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn basis_degree_one_three_vars() {
        let basis: Vec<_> = monomial_basis(3, 1)
            .into_iter()
            .map(|m| m.exponents().to_vec())
            .collect();
        assert_eq!(
            basis,
            vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]
        );
    }

    #[test]
    fn basis_is_sorted_and_counted() {
        for (d, k) in [(1usize, 0u32), (1, 5), (2, 3), (3, 2), (4, 2)] {
            let basis = monomial_basis(d, k);
            assert_eq!(basis.len(), basis_size(d, k));
            for pair in basis.windows(2) {
                assert!(pair[0] < pair[1], "basis must strictly increase");
            }
        }
    }

    #[test]
    fn labels() {
        assert_eq!(mi(&[0, 0]).label(), "1");
        assert_eq!(mi(&[1, 0]).label(), "x1");
        assert_eq!(mi(&[2, 1]).label(), "x1^2*x2");
    }
}
