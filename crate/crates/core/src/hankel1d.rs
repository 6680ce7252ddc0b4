//! One-dimensional layer: Hankel positivity, quadrature rules generated
//! from raw moments, separable grids, and product measures.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, RationalMatrix};
use crate::measure::SignedMeasure;
use crate::monomial::MultiIndex;
use crate::poly::point_power;
use crate::rational::{rational_to_f64, Rational};
use crate::roots::monic_real_roots;
use crate::sequence::MomentSequence;

/// `(k+1) x (k+1)` Hankel block of a one-dimensional sequence: entry
/// `(i, j) = β_{i+j+shift}` with `shift` 0 or 1.
pub fn hankel(beta: &MomentSequence, shift: u32, size: usize) -> Result<RationalMatrix> {
    if beta.dimension() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: beta.dimension(),
        });
    }
    assert!(size >= 1);
    let needed = 2 * (size as u32 - 1) + shift;
    if beta.degree() < needed {
        return Err(Error::InsufficientDegree {
            needed,
            got: beta.degree(),
        });
    }
    let mut data = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let idx = MultiIndex::new(vec![i as u32 + j as u32 + shift]);
            data.push(beta.value(&idx).clone());
        }
    }
    RationalMatrix::new(size, size, data)
}

/// Real-line positivity at level `k`: the shift-0 Hankel block of size
/// `k+1` is positive semidefinite.
pub fn hamburger_check(beta: &MomentSequence, level: u32) -> Result<bool> {
    linalg::psd_check(&hankel(beta, 0, level as usize + 1)?)
}

/// Half-line positivity at level `k`: both the shift-0 and shift-1 Hankel
/// blocks of size `k+1` are positive semidefinite.
pub fn stieltjes_check(beta: &MomentSequence, level: u32) -> Result<bool> {
    Ok(linalg::psd_check(&hankel(beta, 0, level as usize + 1)?)?
        && linalg::psd_check(&hankel(beta, 1, level as usize + 1)?)?)
}

/// Moments of the uniform weight on `[-1, 1]`: `β_j = 2/(j+1)` for even `j`,
/// `0` for odd `j`.
pub fn legendre_moments(degree: u32) -> MomentSequence {
    MomentSequence::from_fn(1, degree, |index| {
        let j = index.exponents()[0];
        if j % 2 == 1 {
            Rational::zero()
        } else {
            Rational::new(BigInt::from(2), BigInt::from(j + 1))
        }
    })
}

/// Quadrature rule of size `p` and precision `m`: `Σ ρ_j t_j^k` reproduces
/// the source moments for `k ≤ m` and fails at some degree `m+1` polynomial.
///
/// `node_poly` and `flat_extension` are exact byproducts of the
/// construction. Nodes are reported as doubles; a node that happens to be
/// rational also appears in `exact_nodes`, and a node whose minimal
/// polynomial is quadratic carries `(constant, linear)` of that factor in
/// `quadratic_factors`. Weights are exact whenever every node is rational.
#[derive(Clone, PartialEq, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub precision: u32,
    pub size: usize,
    /// Monic node polynomial, ascending coefficients.
    pub node_poly: Vec<Rational>,
    /// The trailing moment value that keeps the extended Hankel at minimal rank.
    pub flat_extension: Rational,
    pub exact_nodes: Vec<Option<Rational>>,
    pub quadratic_factors: Vec<Option<(Rational, Rational)>>,
    pub exact_weights: Option<Vec<Rational>>,
}

/// Builds the minimal (size `n`, precision `2n-1`) rule from the moments
/// `β_0, ..., β_{2n-1}`.
///
/// The trailing parameter is never searched: forcing the last column of the
/// extended Hankel into the span of the previous ones is one exact solve of
/// `H c = (β_n, ..., β_{2n-1})`, the node polynomial is
/// `t^n - c_{n-1} t^{n-1} - ... - c_0`, and the weights come from the
/// Vandermonde system on the nodes.
pub fn quadrature_from_moments(moments: &[Rational], n: usize) -> Result<QuadratureRule> {
    assert!(n >= 1, "rule size must be at least 1");
    if moments.len() < 2 * n {
        return Err(Error::InsufficientDegree {
            needed: 2 * n as u32 - 1,
            got: moments.len() as u32,
        });
    }
    let mut data = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            data.push(moments[i + j].clone());
        }
    }
    let h = RationalMatrix::new(n, n, data)?;
    let rhs: Vec<Rational> = moments[n..2 * n].to_vec();
    let c = match linalg::solve_square(&h, &rhs) {
        Ok(c) => c,
        Err(Error::SingularMatrix) => return Err(Error::SingularLeadingHankel),
        Err(e) => return Err(e),
    };

    let mut node_poly: Vec<Rational> = c.iter().map(|v| -v.clone()).collect();
    node_poly.push(Rational::one());
    let flat_extension = c
        .iter()
        .zip(&rhs)
        .fold(Rational::zero(), |acc, (ck, bk)| acc + ck * bk);

    let roots = monic_real_roots(&node_poly)?;
    debug_assert_eq!(roots.len(), n);
    let nodes: Vec<f64> = roots.iter().map(|r| r.value).collect();
    let exact_nodes: Vec<Option<Rational>> = roots.iter().map(|r| r.exact.clone()).collect();
    let quadratic_factors: Vec<Option<(Rational, Rational)>> =
        roots.iter().map(|r| r.quadratic.clone()).collect();

    let exact_weights = if exact_nodes.iter().all(Option::is_some) {
        let points: Vec<Rational> = exact_nodes.iter().map(|e| e.clone().expect("all set")).collect();
        let mut rows = Vec::with_capacity(n);
        let mut power: Vec<Rational> = vec![Rational::one(); n];
        for _ in 0..n {
            rows.push(power.clone());
            power = power.iter().zip(&points).map(|(p, t)| p * t).collect();
        }
        let v = RationalMatrix::from_rows(rows)?;
        Some(linalg::solve_square(&v, &moments[..n])?)
    } else {
        None
    };

    let weights: Vec<f64> = match &exact_weights {
        Some(w) => w.iter().map(rational_to_f64).collect(),
        None => {
            let mut rows = Vec::with_capacity(n);
            let mut power = vec![1.0f64; n];
            for _ in 0..n {
                rows.push(power.clone());
                power = power.iter().zip(&nodes).map(|(p, t)| p * t).collect();
            }
            let b: Vec<f64> = moments[..n].iter().map(rational_to_f64).collect();
            linalg::float::solve_square(&rows, &b).ok_or(Error::SingularMatrix)?
        }
    };

    Ok(QuadratureRule {
        nodes,
        weights,
        precision: 2 * n as u32 - 1,
        size: n,
        node_poly,
        flat_extension,
        exact_nodes,
        quadratic_factors,
        exact_weights,
    })
}

/// Rectangular table of values `β_{ij}`, `0 ≤ i ≤ m1`, `0 ≤ j ≤ m2`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MomentGrid {
    values: Vec<Vec<Rational>>,
}

impl MomentGrid {
    pub fn new(values: Vec<Vec<Rational>>) -> Result<Self> {
        let cols = values.first().map(Vec::len).unwrap_or(0);
        if values.is_empty() || cols == 0 || values.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput(alloc::string::String::from(
                "grid must be rectangular and non-empty",
            )));
        }
        Ok(MomentGrid { values })
    }

    pub fn rows(&self) -> usize {
        self.values.len()
    }

    pub fn cols(&self) -> usize {
        self.values[0].len()
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.values[i][j]
    }

    /// Rectangle moments `β_{ij} = Σ α x^i y^j` of a planar measure, for
    /// `i ≤ m1`, `j ≤ m2`. Unlike the triangular oracle this covers the
    /// whole rectangle, including `i + j > max(m1, m2)`.
    pub fn of_measure(mu: &SignedMeasure, m1: u32, m2: u32) -> Result<Self> {
        if mu.dimension() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: mu.dimension(),
            });
        }
        let mut values = Vec::with_capacity(m1 as usize + 1);
        for i in 0..=m1 {
            let mut row = Vec::with_capacity(m2 as usize + 1);
            for j in 0..=m2 {
                let index = MultiIndex::new(vec![i, j]);
                let mut acc = Rational::zero();
                for atom in mu.atoms() {
                    acc += &atom.density * point_power(&atom.point, &index);
                }
                row.push(acc);
            }
            values.push(row);
        }
        MomentGrid::new(values)
    }

    /// The largest inscribed rectangle of a planar triangular sequence:
    /// `i ≤ ⌊m/2⌋`, `j ≤ m − ⌊m/2⌋`.
    pub fn from_sequence(beta: &MomentSequence) -> Result<Self> {
        if beta.dimension() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: beta.dimension(),
            });
        }
        let m1 = beta.degree() / 2;
        let m2 = beta.degree() - m1;
        let values = (0..=m1)
            .map(|i| {
                (0..=m2)
                    .map(|j| beta.value(&MultiIndex::new(vec![i, j])).clone())
                    .collect()
            })
            .collect();
        MomentGrid::new(values)
    }
}

/// Factors a rank-one grid as `β_{ij} = u_i v_j`: `v` is the first nonzero
/// row, `u` the pivot column scaled so `u_{i0} = 1`. Returns `None` when the
/// grid has rank two or more; the all-zero grid factors as zeros.
pub fn separable_factor(grid: &MomentGrid) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let (rows, cols) = (grid.rows(), grid.cols());
    let first_nonzero_row =
        (0..rows).find(|&i| (0..cols).any(|j| !grid.get(i, j).is_zero()));
    let Some(i0) = first_nonzero_row else {
        return Some((
            vec![Rational::zero(); rows],
            vec![Rational::zero(); cols],
        ));
    };
    let j0 = (0..cols)
        .find(|&j| !grid.get(i0, j).is_zero())
        .expect("row i0 has a nonzero entry");
    let pivot = grid.get(i0, j0);
    let v: Vec<Rational> = (0..cols).map(|j| grid.get(i0, j).clone()).collect();
    let u: Vec<Rational> = (0..rows).map(|i| grid.get(i, j0) / pivot).collect();
    for (i, ui) in u.iter().enumerate() {
        for (j, vj) in v.iter().enumerate() {
            if &(ui * vj) != grid.get(i, j) {
                return None;
            }
        }
    }
    Some((u, v))
}

/// Product measure on concatenated coordinates: atoms are the Cartesian
/// product of the factors' atoms, densities multiply. Equals the four-term
/// Jordan expansion `μ⁺×ν⁺ + μ⁻×ν⁻ − μ⁺×ν⁻ − μ⁻×ν⁺` by bilinearity.
pub fn product_measure(mu: &SignedMeasure, nu: &SignedMeasure) -> SignedMeasure {
    let dimension = mu.dimension() + nu.dimension();
    let mut atoms = Vec::with_capacity(mu.len() * nu.len());
    for a in mu.atoms() {
        for b in nu.atoms() {
            let mut point = a.point.clone();
            point.extend(b.point.iter().cloned());
            atoms.push((point, &a.density * &b.density));
        }
    }
    SignedMeasure::new(dimension, atoms).expect("factor dimensions are consistent")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::moments_of_measure;
    use crate::rational::{int, ratio};

    fn seq1d(values: &[Rational]) -> MomentSequence {
        MomentSequence::from_values(1, values.len() as u32 - 1, values.to_vec()).unwrap()
    }

    #[test]
    fn hankel_blocks() {
        let beta = seq1d(&[int(2), int(0), ratio(2, 3), int(0)]);
        let h = hankel(&beta, 0, 2).unwrap();
        assert_eq!(
            h,
            RationalMatrix::from_rows(vec![
                vec![int(2), int(0)],
                vec![int(0), ratio(2, 3)],
            ])
            .unwrap()
        );

        // Moments of delta_3 give the rank-one Hankel 3^(i+j).
        let pow3 = seq1d(&[int(1), int(3), int(9), int(27), int(81)]);
        let h = hankel(&pow3, 0, 3).unwrap();
        assert_eq!(linalg::rank(&h), 1);
        assert_eq!(h.get(2, 2), &int(81));

        let ones = seq1d(&[int(1), int(1), int(1), int(1)]);
        let shifted = hankel(&ones, 1, 2).unwrap();
        assert!(shifted
            .row(0)
            .iter()
            .chain(shifted.row(1))
            .all(|e| e == &int(1)));

        assert_eq!(
            hankel(&ones, 0, 4),
            Err(Error::InsufficientDegree { needed: 6, got: 3 })
        );
    }

    #[test]
    fn hamburger_cases() {
        assert!(hamburger_check(&seq1d(&[int(1), int(0), int(1)]), 1).unwrap());
        assert!(!hamburger_check(&seq1d(&[int(1), int(0), int(-1)]), 1).unwrap());
        // Positive measure, oracle-generated: 2 delta_{-1} + 4 delta_2.
        let mu = SignedMeasure::new(
            1,
            vec![(vec![int(-1)], int(2)), (vec![int(2)], int(4))],
        )
        .unwrap();
        let beta = moments_of_measure(&mu, 4);
        assert!(hamburger_check(&beta, 2).unwrap());
    }

    #[test]
    fn stieltjes_cases() {
        assert!(stieltjes_check(&seq1d(&[int(1), int(1), int(1), int(1)]), 1).unwrap());
        // delta_{-1}: the shift-1 block is negative.
        assert!(!stieltjes_check(&seq1d(&[int(1), int(-1), int(1), int(-1)]), 1).unwrap());
        // Uniform weight on [-1,1]: supported off the half-line.
        assert!(!stieltjes_check(&seq1d(&[int(2), int(0), ratio(2, 3), int(0)]), 1).unwrap());
    }

    #[test]
    fn legendre_moment_values() {
        assert_eq!(
            legendre_moments(3).values_degree_lex(),
            vec![int(2), int(0), ratio(2, 3), int(0)]
        );
        assert_eq!(legendre_moments(0).values_degree_lex(), vec![int(2)]);
        assert_eq!(
            legendre_moments(5).values_degree_lex(),
            vec![int(2), int(0), ratio(2, 3), int(0), ratio(2, 5), int(0)]
        );
    }

    #[test]
    fn two_point_gauss_rule() {
        let rule =
            quadrature_from_moments(&legendre_moments(3).values_degree_lex(), 2).unwrap();
        assert_eq!(rule.node_poly, vec![ratio(-1, 3), int(0), int(1)]);
        assert_eq!(rule.flat_extension, ratio(2, 9));
        assert_eq!(rule.weights, vec![1.0, 1.0]);
        assert_eq!(rule.size, 2);
        assert_eq!(rule.precision, 3);
        // Bisection lands on the correctly rounded double for 1/sqrt(3);
        // the f64 reference below may itself be one ulp off.
        let s = 1.0 / 3.0f64.sqrt();
        assert!((rule.nodes[0] + s).abs() < 3e-16);
        assert!((rule.nodes[1] - s).abs() < 3e-16);
        assert_eq!(rule.nodes[0], -rule.nodes[1]);
        assert_eq!(rule.quadratic_factors[0], Some((ratio(-1, 3), int(0))));
    }

    #[test]
    fn midpoint_rule() {
        let rule = quadrature_from_moments(&[int(2), int(0)], 1).unwrap();
        assert_eq!(rule.nodes, vec![0.0]);
        assert_eq!(rule.exact_weights, Some(vec![int(2)]));
        assert_eq!(rule.weights, vec![2.0]);
    }

    #[test]
    fn three_point_gauss_rule() {
        let rule =
            quadrature_from_moments(&legendre_moments(5).values_degree_lex(), 3).unwrap();
        // Node polynomial t^3 - (3/5) t.
        assert_eq!(
            rule.node_poly,
            vec![int(0), ratio(-3, 5), int(0), int(1)]
        );
        let s = (3.0f64 / 5.0).sqrt();
        assert!((rule.nodes[0] + s).abs() < 1e-15);
        assert!(rule.nodes[1].abs() < 1e-300);
        assert!((rule.nodes[2] - s).abs() < 1e-15);
        for (w, expect) in rule.weights.iter().zip([5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0]) {
            assert!((w - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn quadrature_errors() {
        // Not enough moments.
        assert!(matches!(
            quadrature_from_moments(&[int(1), int(1)], 2),
            Err(Error::InsufficientDegree { .. })
        ));
        // Singular leading Hankel: moments of the zero functional.
        assert_eq!(
            quadrature_from_moments(&[int(0), int(0)], 1),
            Err(Error::SingularLeadingHankel)
        );
        // Signed moments can force complex nodes: t^2 + 1 comes from
        // beta = (1, 0, -1, 0).
        assert_eq!(
            quadrature_from_moments(&[int(1), int(0), int(-1), int(0)], 2),
            Err(Error::ComplexRoots {
                expected: 2,
                real: 0
            })
        );
    }

    #[test]
    fn separable_grids() {
        // 2^i * 3^j on 3x3.
        let grid = MomentGrid::new(
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| int(2i64.pow(i) * 3i64.pow(j)))
                        .collect()
                })
                .collect(),
        )
        .unwrap();
        let (u, v) = separable_factor(&grid).unwrap();
        assert_eq!(u, vec![int(1), int(2), int(4)]);
        assert_eq!(v, vec![int(1), int(3), int(9)]);

        // The planar Fibonacci table is not separable.
        let fib = MomentSequence::from_values(
            2,
            2,
            vec![int(1), int(1), int(2), int(3), int(5), int(8)],
        )
        .unwrap();
        let grid = MomentGrid::from_sequence(&fib).unwrap();
        assert_eq!(grid.rows(), 2);
        assert_eq!(grid.cols(), 2);
        assert_eq!(separable_factor(&grid), None);

        // All-zero grid: the degenerate convention.
        let zero = MomentGrid::new(vec![vec![int(0); 3]; 2]).unwrap();
        let (u, v) = separable_factor(&zero).unwrap();
        assert!(u.iter().all(Zero::is_zero));
        assert!(v.iter().all(Zero::is_zero));
    }

    #[test]
    fn product_measures() {
        let mu = SignedMeasure::new(1, vec![(vec![int(2)], int(1))]).unwrap();
        let nu = SignedMeasure::new(
            1,
            vec![(vec![int(1)], int(1)), (vec![int(3)], int(-2))],
        )
        .unwrap();
        let tau = product_measure(&mu, &nu);
        let expect = SignedMeasure::new(
            2,
            vec![
                (vec![int(2), int(1)], int(1)),
                (vec![int(2), int(3)], int(-2)),
            ],
        )
        .unwrap();
        assert_eq!(tau, expect);

        assert!(product_measure(&SignedMeasure::empty(1), &nu).is_empty());

        // (delta_1 - delta_2) squared has the checkerboard signs, and its
        // rectangle moments are the product of the factor moments.
        let diff = SignedMeasure::new(
            1,
            vec![(vec![int(1)], int(1)), (vec![int(2)], int(-1))],
        )
        .unwrap();
        let square = product_measure(&diff, &diff);
        assert_eq!(square.len(), 4);
        let grid = MomentGrid::of_measure(&square, 2, 2).unwrap();
        let factor = moments_of_measure(&diff, 2);
        let f = factor.values_degree_lex();
        for i in 0..=2usize {
            for j in 0..=2usize {
                assert_eq!(grid.get(i, j), &(&f[i] * &f[j]));
            }
        }
    }
}
