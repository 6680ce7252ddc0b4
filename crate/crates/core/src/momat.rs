//! Moment matrices, column relations, and variety membership.
//!
//! The moment matrix of an even-degree sequence carries one row and column
//! per monomial of degree at most `n`, listed in degree-lex order, with
//! entry `β_{i+j}` at position `(i, j)`. Column relations read off its
//! kernel become polynomials; the variety they cut out is never enumerated,
//! only membership-tested.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, RationalMatrix};
use crate::measure::{moments_of_measure, SignedMeasure};
use crate::monomial::{monomial_basis, MultiIndex};
use crate::poly::{eval_poly, point_power, KernelPolynomial};
use crate::rational::Rational;
use crate::sequence::MomentSequence;

/// Symmetric rational matrix with monomial row/column labels.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentMatrix {
    dimension: usize,
    order: u32,
    labels: Vec<MultiIndex>,
    matrix: RationalMatrix,
}

impl MomentMatrix {
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Matrix order `n`; rows are labelled by monomials of degree ≤ n.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn labels(&self) -> &[MultiIndex] {
        &self.labels
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix)
    }

    /// `self + c * other`; labels must agree.
    pub fn add_scaled(&self, other: &MomentMatrix, c: &Rational) -> Result<MomentMatrix> {
        if self.dimension != other.dimension || self.order != other.order {
            return Err(Error::DimensionMismatch {
                expected: self.size(),
                got: other.size(),
            });
        }
        Ok(MomentMatrix {
            dimension: self.dimension,
            order: self.order,
            labels: self.labels.clone(),
            matrix: self.matrix.add(&other.matrix.scaled(c))?,
        })
    }

    /// Text table with monomial labels, for debugging dumps.
    pub fn to_table_string(&self) -> String {
        use core::fmt::Write;
        let mut cells: Vec<Vec<String>> = Vec::with_capacity(self.size() + 1);
        let mut header: Vec<String> = Vec::with_capacity(self.size() + 1);
        header.push(String::new());
        for l in &self.labels {
            header.push(l.label());
        }
        cells.push(header);
        for r in 0..self.size() {
            let mut row = Vec::with_capacity(self.size() + 1);
            row.push(self.labels[r].label());
            for c in 0..self.size() {
                row.push(alloc::format!("{}", self.matrix.get(r, c)));
            }
            cells.push(row);
        }
        let mut widths = alloc::vec![0usize; self.size() + 1];
        for row in &cells {
            for (j, cell) in row.iter().enumerate() {
                widths[j] = widths[j].max(cell.len());
            }
        }
        let mut out = String::new();
        for row in &cells {
            for (j, cell) in row.iter().enumerate() {
                let _ = write!(out, "{:>width$}  ", cell, width = widths[j]);
            }
            out.push('\n');
        }
        out
    }
}

/// Column relations of a moment matrix: the kernel read as polynomials.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VarietyReport {
    pub kernel_polynomials: Vec<KernelPolynomial>,
    pub rank: usize,
    pub corank: usize,
}

/// Builds `M_d(n)` from an even-degree sequence: entry `(i, j) = β_{i+j}`.
pub fn build_moment_matrix(beta: &MomentSequence) -> Result<MomentMatrix> {
    if beta.degree() % 2 != 0 {
        return Err(Error::OddDegree {
            degree: beta.degree(),
        });
    }
    let order = beta.degree() / 2;
    let labels = monomial_basis(beta.dimension(), order);
    let size = labels.len();
    let mut data = Vec::with_capacity(size * size);
    for i in &labels {
        for j in &labels {
            data.push(beta.value(&i.add(j)).clone());
        }
    }
    Ok(MomentMatrix {
        dimension: beta.dimension(),
        order,
        labels,
        matrix: RationalMatrix::new(size, size, data)?,
    })
}

/// `v(w)`: monomials of `w` up to degree `n` in degree-lex order.
pub fn point_vector(w: &[Rational], order: u32) -> Vec<Rational> {
    monomial_basis(w.len(), order)
        .iter()
        .map(|index| point_power(w, index))
        .collect()
}

/// `P(w) = v(w) v(w)ᵀ`, the moment matrix of the unit mass at `w`.
pub fn rank_one(w: &[Rational], order: u32) -> MomentMatrix {
    let labels = monomial_basis(w.len(), order);
    let v = point_vector(w, order);
    MomentMatrix {
        dimension: w.len(),
        order,
        labels,
        matrix: RationalMatrix::outer(&v),
    }
}

/// Kernel vectors of the matrix converted to polynomials through the
/// monomial labels, each normalized so its highest label has coefficient 1.
pub fn column_relations(m: &MomentMatrix) -> VarietyReport {
    let kernel = linalg::kernel_basis(&m.matrix);
    let corank = kernel.len();
    let kernel_polynomials = kernel
        .into_iter()
        .map(|coeffs| {
            KernelPolynomial::from_coefficients(&m.labels, &coeffs)
                .expect("labels are non-empty and dimensions agree")
                .monic()
        })
        .collect();
    VarietyReport {
        kernel_polynomials,
        rank: m.size() - corank,
        corank,
    }
}

/// Whether `w` lies in the variety of `m`: every kernel polynomial vanishes
/// at `w`.
///
/// In debug builds the equivalent range test — `v(w) ∈ ran M` — is computed
/// as well and the two answers are asserted to agree.
pub fn variety_contains(m: &MomentMatrix, w: &[Rational]) -> Result<bool> {
    if w.len() != m.dimension {
        return Err(Error::DimensionMismatch {
            expected: m.dimension,
            got: w.len(),
        });
    }
    let report = column_relations(m);
    let by_kernel = report
        .kernel_polynomials
        .iter()
        .all(|p| eval_poly(p, w).expect("dimension checked").is_zero());
    #[cfg(debug_assertions)]
    {
        let by_range = linalg::solve_consistent(&m.matrix, &point_vector(w, m.order))
            .expect("square system dimensions agree")
            .is_some();
        debug_assert_eq!(
            by_kernel, by_range,
            "kernel-vanishing and range membership must agree"
        );
    }
    Ok(by_kernel)
}

/// Densities placing `beta` on the given support, if any: solves the
/// generalized Vandermonde system `V α = β` exactly, where rows run over
/// all `|i| ≤ degree` and columns over the points.
pub fn finite_consistency(
    beta: &MomentSequence,
    points: &[Vec<Rational>],
) -> Result<Option<Vec<Rational>>> {
    for p in points {
        if p.len() != beta.dimension() {
            return Err(Error::DimensionMismatch {
                expected: beta.dimension(),
                got: p.len(),
            });
        }
    }
    for (i, p) in points.iter().enumerate() {
        if points[i + 1..].contains(p) {
            return Err(Error::DuplicatePoints);
        }
    }
    if points.is_empty() {
        // Only the zero sequence is supported on the empty set.
        let all_zero = beta.values_degree_lex().iter().all(Zero::is_zero);
        return Ok(all_zero.then(Vec::new));
    }
    let basis = monomial_basis(beta.dimension(), beta.degree());
    let mut rows = Vec::with_capacity(basis.len());
    for index in &basis {
        rows.push(
            points
                .iter()
                .map(|p| point_power(p, index))
                .collect::<Vec<_>>(),
        );
    }
    let vandermonde = RationalMatrix::from_rows(rows)?;
    linalg::solve_consistent(&vandermonde, &beta.values_degree_lex())
}

/// Oracle check used by tests: the matrix of a measure's moments equals the
/// density-weighted sum of rank-one blocks at its atoms.
pub fn matrix_of_measure(mu: &SignedMeasure, order: u32) -> Result<MomentMatrix> {
    build_moment_matrix(&moments_of_measure(mu, 2 * order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::string::ToString;
    use alloc::vec;

    fn eq31_sequence() -> MomentSequence {
        MomentSequence::from_values(
            2,
            2,
            vec![int(-1), int(-16), int(-4), int(-94), int(-10), int(2)],
        )
        .unwrap()
    }

    fn fib_sequence() -> MomentSequence {
        MomentSequence::from_values(2, 2, vec![int(1), int(1), int(2), int(3), int(5), int(8)])
            .unwrap()
    }

    #[test]
    fn builds_fibonacci_matrix() {
        let m = build_moment_matrix(&fib_sequence()).unwrap();
        let expect = RationalMatrix::from_rows(vec![
            vec![int(1), int(1), int(2)],
            vec![int(1), int(3), int(5)],
            vec![int(2), int(5), int(8)],
        ])
        .unwrap();
        assert_eq!(m.matrix(), &expect);
        assert!(m.matrix().is_symmetric());
    }

    #[test]
    fn rejects_odd_degree() {
        let beta = MomentSequence::from_values(1, 1, vec![int(1), int(2)]).unwrap();
        assert_eq!(
            build_moment_matrix(&beta).map(|m| m.size()),
            Err(Error::OddDegree { degree: 1 })
        );
    }

    #[test]
    fn concentrated_sequence_gives_corner_matrix() {
        let beta = MomentSequence::from_values(
            2,
            2,
            vec![int(7), int(0), int(0), int(0), int(0), int(0)],
        )
        .unwrap();
        let m = build_moment_matrix(&beta).unwrap();
        assert_eq!(m.matrix().get(0, 0), &int(7));
        let zeros = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&(i, j)| (i, j) != (0, 0));
        for (i, j) in zeros {
            assert!(m.matrix().get(i, j).is_zero());
        }
    }

    #[test]
    fn point_vector_layout() {
        let v = point_vector(&[int(2), int(3)], 2);
        assert_eq!(v, vec![int(1), int(2), int(3), int(4), int(6), int(9)]);
        let z = point_vector(&[int(0), int(0)], 2);
        assert_eq!(z[0], int(1));
        assert!(z[1..].iter().all(Zero::is_zero));
        assert!(point_vector(&[int(1), int(1)], 2)
            .iter()
            .all(|e| e == &int(1)));
    }

    #[test]
    fn rank_one_matches_oracle() {
        let w = vec![int(2), int(3)];
        let p = rank_one(&w, 2);
        assert_eq!(p.rank(), 1);
        let oracle = matrix_of_measure(&SignedMeasure::dirac(w), 2).unwrap();
        assert_eq!(p, oracle);
        // Spot-check one printed entry: row x2^2, col x1^2 is a^2 b^2 = 36.
        assert_eq!(p.matrix().get(5, 3), &int(36));
    }

    #[test]
    fn rank_one_at_origin() {
        let p = rank_one(&[int(0), int(0)], 1);
        assert_eq!(p.matrix().get(0, 0), &int(1));
        assert_eq!(p.rank(), 1);
    }

    #[test]
    fn single_column_relation_is_the_line() {
        let m = build_moment_matrix(&eq31_sequence()).unwrap();
        let report = column_relations(&m);
        assert_eq!(report.rank, 2);
        assert_eq!(report.corank, 1);
        assert_eq!(report.kernel_polynomials.len(), 1);
        assert_eq!(
            report.kernel_polynomials[0].to_string(),
            "x2 - 1/3*x1 + 4/3"
        );
    }

    #[test]
    fn invertible_matrix_has_no_relations() {
        let m = build_moment_matrix(&fib_sequence()).unwrap();
        let report = column_relations(&m);
        assert!(report.kernel_polynomials.is_empty());
        assert_eq!(report.corank, 0);
    }

    #[test]
    fn two_atom_line_relation() {
        // mu = delta_1 + delta_2 in one variable, order 2.
        let mu = SignedMeasure::new(
            1,
            vec![(vec![int(1)], int(1)), (vec![int(2)], int(1))],
        )
        .unwrap();
        let m = matrix_of_measure(&mu, 2).unwrap();
        let report = column_relations(&m);
        assert_eq!(report.kernel_polynomials.len(), 1);
        // x^2 - 3x + 2 = (x-1)(x-2)
        assert_eq!(report.kernel_polynomials[0].to_string(), "x1^2 - 3*x1 + 2");
    }

    #[test]
    fn variety_membership_on_the_line() {
        let m = build_moment_matrix(&eq31_sequence()).unwrap();
        assert!(variety_contains(&m, &[int(4), int(0)]).unwrap());
        assert!(!variety_contains(&m, &[int(0), int(0)]).unwrap());
        // Invertible matrix: variety is everything.
        let full = build_moment_matrix(&fib_sequence()).unwrap();
        assert!(variety_contains(&full, &[int(123), int(-7)]).unwrap());
    }

    #[test]
    fn finite_consistency_recovers_densities() {
        // Support from the closed-form two-atom family at a = 0.
        let points = vec![
            vec![ratio(47, 8), ratio(5, 8)],
            vec![int(0), ratio(-4, 3)],
        ];
        let densities = finite_consistency(&eq31_sequence(), &points)
            .unwrap()
            .expect("consistent support");
        assert_eq!(densities, vec![ratio(-128, 47), ratio(81, 47)]);

        // Cross-check by the oracle.
        let mu = SignedMeasure::new(
            2,
            points.into_iter().zip(densities).collect(),
        )
        .unwrap();
        assert_eq!(moments_of_measure(&mu, 2), eq31_sequence());
    }

    #[test]
    fn finite_consistency_fibonacci_support() {
        let points = vec![
            vec![ratio(1, 2), int(1)],
            vec![ratio(9, 2), int(7)],
            vec![int(1), int(0)],
        ];
        let densities = finite_consistency(&fib_sequence(), &points)
            .unwrap()
            .expect("the displayed support works");
        assert_eq!(densities, vec![int(1), ratio(1, 7), ratio(-1, 7)]);
    }

    #[test]
    fn finite_consistency_point_mass_and_duplicates() {
        let beta = MomentSequence::from_values(
            2,
            2,
            vec![int(5), int(0), int(0), int(0), int(0), int(0)],
        )
        .unwrap();
        let origin = vec![vec![int(0), int(0)]];
        assert_eq!(
            finite_consistency(&beta, &origin).unwrap().unwrap(),
            vec![int(5)]
        );
        let twice = vec![vec![int(0), int(0)], vec![int(0), int(0)]];
        assert_eq!(
            finite_consistency(&beta, &twice),
            Err(Error::DuplicatePoints)
        );
        // Fibonacci cannot sit on a single point.
        assert!(finite_consistency(&fib_sequence(), &origin)
            .unwrap()
            .is_none());
    }

    #[test]
    fn sesquilinear_entries() {
        let beta = fib_sequence();
        let m = build_moment_matrix(&beta).unwrap();
        for (i, li) in m.labels().iter().enumerate() {
            for (j, lj) in m.labels().iter().enumerate() {
                assert_eq!(m.matrix().get(i, j), beta.value(&li.add(lj)));
            }
        }
    }

    #[test]
    fn table_dump_mentions_labels() {
        let m = build_moment_matrix(&fib_sequence()).unwrap();
        let table = m.to_table_string();
        assert!(table.contains("x1"));
        assert!(table.contains("x2"));
        assert!(table.contains('8'));
    }
}
