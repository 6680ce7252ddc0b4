//! Exact dense rational linear algebra.
//!
//! Rank, kernel and solve decisions are made by fraction-free (Bareiss)
//! elimination: each row is first scaled to integers, then eliminated with
//! the two-term update whose divisions are exact. Intermediate entries stay
//! minors of the scaled matrix, which keeps growth polynomial instead of the
//! exponential blow-up naive rational elimination produces.
//!
//! A binary floating mode lives in [`float`] for speed comparisons; no rank
//! or positivity decision elsewhere in the crate uses it.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Dense rational matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::InvalidInput(alloc::format!(
                "matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(RationalMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput(alloc::string::String::from(
                "ragged rows",
            )));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Rank-one matrix `v vᵀ`.
    pub fn outer(v: &[Rational]) -> Self {
        let n = v.len();
        let mut data = Vec::with_capacity(n * n);
        for a in v {
            for b in v {
                data.push(a * b);
            }
        }
        RationalMatrix { rows: n, cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, other: &RationalMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RationalMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &RationalMatrix,
        f: impl Fn(&Rational, &Rational) -> Rational,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: other.rows * other.cols,
            });
        }
        Ok(RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect())
    }
}

// ---------------------------------------------------------------------------
// Fraction-free elimination
// ---------------------------------------------------------------------------

struct Echelon {
    /// Staircase form with integer entries.
    rows: Vec<Vec<BigInt>>,
    /// Pivot column of each pivot row.
    pivots: Vec<usize>,
}

/// Rows of `a` (optionally augmented by `rhs`) scaled to integers. Row
/// scaling by a positive rational preserves rank, kernel, and solution sets.
fn integer_rows(a: &RationalMatrix, rhs: Option<&[Rational]>) -> Vec<Vec<BigInt>> {
    (0..a.rows)
        .map(|r| {
            let mut entries: Vec<&Rational> = a.row(r).iter().collect();
            if let Some(b) = rhs {
                entries.push(&b[r]);
            }
            let lcm = entries
                .iter()
                .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
            entries
                .iter()
                .map(|e| e.numer() * (&lcm / e.denom()))
                .collect()
        })
        .collect()
}

fn exact_div(value: BigInt, divisor: &BigInt) -> BigInt {
    debug_assert!(!divisor.is_zero());
    debug_assert!((&value % divisor).is_zero(), "fraction-free step not exact");
    value / divisor
}

/// Bareiss elimination. Pivots are searched only in columns `< pivot_limit`,
/// so augmented right-hand sides never become pivots. The pivot row is the
/// candidate with the fewest bits, which keeps the integer minors small.
fn eliminate(mut rows: Vec<Vec<BigInt>>, pivot_limit: usize) -> Echelon {
    let m = rows.len();
    let total = rows.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0usize;

    for c in 0..pivot_limit {
        if r == m {
            break;
        }
        let mut best: Option<usize> = None;
        for i in r..m {
            if rows[i][c].is_zero() {
                continue;
            }
            match best {
                None => best = Some(i),
                Some(b) => {
                    if rows[i][c].magnitude().bits() < rows[b][c].magnitude().bits() {
                        best = Some(i);
                    }
                }
            }
        }
        let Some(p) = best else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in r + 1..m {
            let head = core::mem::replace(&mut rows[i][c], BigInt::zero());
            for j in c + 1..total {
                let t = &pivot * &rows[i][j] - &head * &rows[r][j];
                rows[i][j] = exact_div(t, &prev);
            }
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    Echelon { rows, pivots }
}

/// Back-substitution over the staircase. `x` arrives with free coordinates
/// preset (zeros, or a unit for kernel vectors) and leaves fully solved.
fn back_substitute(ech: &Echelon, a_cols: usize, rhs_col: Option<usize>, x: &mut [Rational]) {
    for (row, &pc) in ech.pivots.iter().enumerate().rev() {
        let mut acc = match rhs_col {
            Some(col) => Rational::from(ech.rows[row][col].clone()),
            None => Rational::zero(),
        };
        for j in pc + 1..a_cols {
            if !ech.rows[row][j].is_zero() {
                acc -= Rational::from(ech.rows[row][j].clone()) * &x[j];
            }
        }
        x[pc] = acc / Rational::from(ech.rows[row][pc].clone());
    }
}

/// Exact rank.
pub fn rank(a: &RationalMatrix) -> usize {
    eliminate(integer_rows(a, None), a.cols).pivots.len()
}

/// A basis of `ker A`, one vector per free column; empty for full column
/// rank. `A v = 0` holds exactly for every returned `v`.
pub fn kernel_basis(a: &RationalMatrix) -> Vec<Vec<Rational>> {
    let ech = eliminate(integer_rows(a, None), a.cols);
    let mut basis = Vec::with_capacity(a.cols - ech.pivots.len());
    let mut is_pivot = vec![false; a.cols];
    for &c in &ech.pivots {
        is_pivot[c] = true;
    }
    for free in 0..a.cols {
        if is_pivot[free] {
            continue;
        }
        let mut x = vec![Rational::zero(); a.cols];
        x[free] = Rational::one();
        back_substitute(&ech, a.cols, None, &mut x);
        basis.push(x);
    }
    basis
}

/// Solves `A x = b` when `b ∈ ran A`, with free coordinates set to zero;
/// `None` when `b` is outside the range.
///
/// For symmetric `A` the quantity `bᵀx` is the same for every solution
/// (all solutions differ by kernel vectors and `b ⟂ ker A`), which is why
/// the deflation gauge downstream may use any witness returned here.
pub fn solve_consistent(a: &RationalMatrix, b: &[Rational]) -> Result<Option<Vec<Rational>>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            got: b.len(),
        });
    }
    let ech = eliminate(integer_rows(a, Some(b)), a.cols);
    // Any leftover row with a nonzero augmented entry certifies b ∉ ran A.
    for row in ech.pivots.len()..a.rows {
        if !ech.rows[row][a.cols].is_zero() {
            return Ok(None);
        }
    }
    let mut x = vec![Rational::zero(); a.cols];
    back_substitute(&ech, a.cols, Some(a.cols), &mut x);
    Ok(Some(x))
}

/// Unique solution of an invertible square system.
pub fn solve_square(a: &RationalMatrix, b: &[Rational]) -> Result<Vec<Rational>> {
    if a.rows != a.cols {
        return Err(Error::InvalidInput(alloc::string::String::from(
            "solve_square needs a square matrix",
        )));
    }
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            got: b.len(),
        });
    }
    let ech = eliminate(integer_rows(a, Some(b)), a.cols);
    if ech.pivots.len() < a.cols {
        return Err(Error::SingularMatrix);
    }
    let mut x = vec![Rational::zero(); a.cols];
    back_substitute(&ech, a.cols, Some(a.cols), &mut x);
    Ok(x)
}

// ---------------------------------------------------------------------------
// Exact positive-semidefiniteness
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PsdViolationKind {
    /// The largest remaining diagonal entry is negative.
    NegativeDiagonal { index: usize },
    /// A zero diagonal entry sits on a row with a nonzero remaining entry.
    NonzeroRowAtZeroDiagonal { row: usize, col: usize },
}

/// Certificate produced when a symmetric matrix fails the PSD test: the
/// indices already pivoted plus the offending entry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PsdViolation {
    pub pivot_order: Vec<usize>,
    pub kind: PsdViolationKind,
}

/// Exact PSD decision by symmetrically pivoted LDLᵀ: pivot on the largest
/// remaining diagonal; PSD iff every pivot is nonnegative and every zero
/// diagonal heads an all-zero remaining row.
pub fn psd_check(a: &RationalMatrix) -> Result<bool> {
    Ok(psd_violation(a)?.is_none())
}

/// Like [`psd_check`] but returns the violation found, if any.
pub fn psd_violation(a: &RationalMatrix) -> Result<Option<PsdViolation>> {
    if !a.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = a.rows;
    let mut w: Vec<Vec<Rational>> = (0..n).map(|r| a.row(r).to_vec()).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut order = Vec::new();

    while !active.is_empty() {
        let &k = active
            .iter()
            .max_by(|&&i, &&j| w[i][i].cmp(&w[j][j]))
            .expect("non-empty");
        let d = w[k][k].clone();
        if d.is_negative() {
            return Ok(Some(PsdViolation {
                pivot_order: order,
                kind: PsdViolationKind::NegativeDiagonal { index: k },
            }));
        }
        if d.is_zero() {
            // Largest remaining diagonal is zero: the whole remaining block
            // must vanish.
            for &i in &active {
                if w[i][i].is_negative() {
                    return Ok(Some(PsdViolation {
                        pivot_order: order,
                        kind: PsdViolationKind::NegativeDiagonal { index: i },
                    }));
                }
                for &j in &active {
                    if !w[i][j].is_zero() {
                        return Ok(Some(PsdViolation {
                            pivot_order: order,
                            kind: PsdViolationKind::NonzeroRowAtZeroDiagonal { row: i, col: j },
                        }));
                    }
                }
            }
            return Ok(None);
        }
        active.retain(|&i| i != k);
        for &i in &active {
            if w[i][k].is_zero() {
                continue;
            }
            let factor = &w[i][k] / &d;
            for &j in &active {
                let delta = &factor * &w[k][j];
                w[i][j] -= delta;
            }
        }
        order.push(k);
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Floating mode
// ---------------------------------------------------------------------------

/// Binary floating (f64) counterparts, provided for speed comparisons only.
/// Rank decisions in the rest of the crate never rely on this module.
pub mod float {
    use alloc::vec;
    use alloc::vec::Vec;

    // `f64::sqrt` is a std inherent method; route through the trait so the
    // crate stays no_std (libm supplies the implementation).
    fn sqrt(x: f64) -> f64 {
        num_traits::Float::sqrt(x)
    }

    /// Singular values by one-sided (Hestenes) Jacobi, descending.
    pub fn singular_values(a: &[Vec<f64>]) -> Vec<f64> {
        if a.is_empty() || a[0].is_empty() {
            return Vec::new();
        }
        // Work on columns; orient so rows >= cols.
        let (m, n) = (a.len(), a[0].len());
        let mut cols: Vec<Vec<f64>> = if m >= n {
            (0..n).map(|j| (0..m).map(|i| a[i][j]).collect()).collect()
        } else {
            (0..m).map(|i| a[i].clone()).collect()
        };
        let k = cols.len();
        let eps = 1e-14;
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..k {
                for q in p + 1..k {
                    let (mut app, mut aqq, mut apq) = (0.0, 0.0, 0.0);
                    for i in 0..cols[p].len() {
                        app += cols[p][i] * cols[p][i];
                        aqq += cols[q][i] * cols[q][i];
                        apq += cols[p][i] * cols[q][i];
                    }
                    if apq.abs() <= eps * sqrt(app * aqq) {
                        continue;
                    }
                    rotated = true;
                    let zeta = (aqq - app) / (2.0 * apq);
                    let t = zeta.signum() / (zeta.abs() + sqrt(1.0 + zeta * zeta));
                    let c = 1.0 / sqrt(1.0 + t * t);
                    let s = c * t;
                    for i in 0..cols[p].len() {
                        let vp = cols[p][i];
                        let vq = cols[q][i];
                        cols[p][i] = c * vp - s * vq;
                        cols[q][i] = s * vp + c * vq;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<f64> = cols
            .iter()
            .map(|col| sqrt(col.iter().map(|v| v * v).sum::<f64>()))
            .collect();
        sv.sort_by(|x, y| y.partial_cmp(x).expect("finite"));
        sv
    }

    /// Singular values below `rel_tol * max(σ_max, 1 if zero)` count as zero.
    pub fn rank(a: &[Vec<f64>], rel_tol: f64) -> usize {
        let sv = singular_values(a);
        let largest = sv.first().copied().unwrap_or(0.0);
        let threshold = rel_tol * if largest == 0.0 { 1.0 } else { largest };
        sv.iter().filter(|&&s| s > threshold).count()
    }

    /// Gaussian elimination with partial pivoting; `None` on a zero pivot.
    pub fn solve_square(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
        let n = a.len();
        if n == 0 || a.iter().any(|r| r.len() != n) || b.len() != n {
            return None;
        }
        let mut m: Vec<Vec<f64>> = a
            .iter()
            .zip(b)
            .map(|(row, &rhs)| {
                let mut r = row.clone();
                r.push(rhs);
                r
            })
            .collect();
        for c in 0..n {
            let p = (c..n).max_by(|&i, &j| {
                m[i][c].abs().partial_cmp(&m[j][c].abs()).expect("finite")
            })?;
            if m[p][c] == 0.0 {
                return None;
            }
            m.swap(c, p);
            for i in c + 1..n {
                let f = m[i][c] / m[c][c];
                for j in c..=n {
                    let upd = f * m[c][j];
                    m[i][j] -= upd;
                }
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = m[i][n];
            for j in i + 1..n {
                acc -= m[i][j] * x[j];
            }
            x[i] = acc / m[i][i];
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn eq31_matrix() -> RationalMatrix {
        RationalMatrix::from_rows(vec![
            vec![int(-1), int(-16), int(-4)],
            vec![int(-16), int(-94), int(-10)],
            vec![int(-4), int(-10), int(2)],
        ])
        .unwrap()
    }

    fn fib_matrix() -> RationalMatrix {
        RationalMatrix::from_rows(vec![
            vec![int(1), int(1), int(2)],
            vec![int(1), int(3), int(5)],
            vec![int(2), int(5), int(8)],
        ])
        .unwrap()
    }

    #[test]
    fn rank_golden_cases() {
        assert_eq!(rank(&eq31_matrix()), 2);
        assert_eq!(rank(&RationalMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&fib_matrix()), 3);
    }

    #[test]
    fn kernel_of_the_relation_matrix() {
        let basis = kernel_basis(&eq31_matrix());
        assert_eq!(basis.len(), 1);
        // Proportional to (4/3, -1/3, 1) over labels (1, x1, x2).
        let v = &basis[0];
        let scale = &v[2];
        assert!(!scale.is_zero());
        assert_eq!(&v[0] / scale, ratio(4, 3));
        assert_eq!(&v[1] / scale, ratio(-1, 3));
        assert!(eq31_matrix()
            .mul_vec(v)
            .unwrap()
            .iter()
            .all(|e| e.is_zero()));
    }

    #[test]
    fn kernel_empty_for_invertible_and_simple_for_ones() {
        assert!(kernel_basis(&fib_matrix()).is_empty());
        let ones = RationalMatrix::from_rows(vec![
            vec![int(1), int(1)],
            vec![int(1), int(1)],
        ])
        .unwrap();
        let basis = kernel_basis(&ones);
        assert_eq!(basis.len(), 1);
        assert_eq!(&basis[0][0] / &basis[0][1], int(-1));
    }

    #[test]
    fn consistent_solves() {
        // v((4,0)) = (1,4,0) lies on the relation line.
        let a = eq31_matrix();
        let b = vec![int(1), int(4), int(0)];
        let x = solve_consistent(&a, &b).unwrap().expect("in range");
        assert_eq!(a.mul_vec(&x).unwrap(), b);

        // (0,0,1) is not orthogonal to the kernel vector.
        assert!(solve_consistent(&a, &[int(0), int(0), int(1)])
            .unwrap()
            .is_none());

        let id = RationalMatrix::identity(3);
        let b = vec![int(5), ratio(1, 2), int(-7)];
        assert_eq!(solve_consistent(&id, &b).unwrap().unwrap(), b);
    }

    #[test]
    fn square_solves() {
        let a = RationalMatrix::from_rows(vec![
            vec![int(1), int(1)],
            vec![int(-1), int(1)],
        ])
        .unwrap();
        assert_eq!(
            solve_square(&a, &[int(2), int(0)]).unwrap(),
            vec![int(1), int(1)]
        );

        // Hilbert 3x3 with b = row sums.
        let h = RationalMatrix::from_rows(vec![
            vec![int(1), ratio(1, 2), ratio(1, 3)],
            vec![ratio(1, 2), ratio(1, 3), ratio(1, 4)],
            vec![ratio(1, 3), ratio(1, 4), ratio(1, 5)],
        ])
        .unwrap();
        let b = vec![ratio(11, 6), ratio(13, 12), ratio(47, 60)];
        assert_eq!(
            solve_square(&h, &b).unwrap(),
            vec![int(1), int(1), int(1)]
        );

        assert_eq!(
            solve_square(&RationalMatrix::zeros(2, 2), &[int(0), int(0)]),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn psd_basics() {
        assert!(psd_check(&RationalMatrix::identity(4)).unwrap());
        let indef = RationalMatrix::from_rows(vec![
            vec![int(1), int(0)],
            vec![int(0), int(-1)],
        ])
        .unwrap();
        assert!(!psd_check(&indef).unwrap());

        let nonsym = RationalMatrix::from_rows(vec![
            vec![int(1), int(2)],
            vec![int(0), int(1)],
        ])
        .unwrap();
        assert_eq!(psd_check(&nonsym), Err(Error::NotSymmetric));
    }

    #[test]
    fn psd_zero_diagonal_cases() {
        // PSD despite zero diagonal: the zero matrix.
        assert!(psd_check(&RationalMatrix::zeros(3, 3)).unwrap());
        // Zero diagonal with a nonzero row: [[0,1],[1,0]] is indefinite.
        let m = RationalMatrix::from_rows(vec![
            vec![int(0), int(1)],
            vec![int(1), int(0)],
        ])
        .unwrap();
        let violation = psd_violation(&m).unwrap().unwrap();
        assert!(matches!(
            violation.kind,
            PsdViolationKind::NonzeroRowAtZeroDiagonal { .. }
        ));
    }

    #[test]
    fn psd_rank_deficient_but_positive() {
        // Gram matrix of dependent vectors is PSD with zero eigenvalues.
        let g = RationalMatrix::from_rows(vec![
            vec![int(1), int(2)],
            vec![int(2), int(4)],
        ])
        .unwrap();
        assert!(psd_check(&g).unwrap());
    }

    #[test]
    fn float_rank_and_solve() {
        let a = vec![
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![1.0, 0.0, 1.0],
        ];
        assert_eq!(float::rank(&a, 1e-9), 2);
        assert_eq!(float::rank(&vec![vec![0.0; 3]; 3], 1e-9), 0);

        let b = vec![6.0, 12.0, 2.0];
        let sq = vec![
            vec![2.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 4.0],
        ];
        let x = float::solve_square(&sq, &b).unwrap();
        let r0 = 2.0 * x[0] + x[1];
        assert!((r0 - 6.0).abs() < 1e-12);
    }
}
