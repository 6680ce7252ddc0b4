//! Exact signed atomic measures for finite multi-index moment data.
//!
//! Given real values `β_i` indexed by multi-indices `|i| ≤ m`, this crate
//! finds finitely atomic signed measures `μ = Σ α_k δ_{w_k}` whose moments
//! `∫ x^i dμ` reproduce every `β_i` exactly. All decision-making arithmetic
//! is arbitrary-precision rational, so rank and positivity questions about
//! the associated moment and Hankel matrices are answered exactly rather
//! than to a tolerance.
//!
//! The main pieces:
//!
//! * [`monomial`] — multi-indices and the degree-lexicographic basis order
//!   shared by every matrix in the crate.
//! * [`sequence`] / [`measure`] / [`poly`] — moment sequences, signed atomic
//!   measures (with the measure-to-moments oracle), and sparse polynomials
//!   arising from column relations.
//! * [`linalg`] — fraction-free rational rank / kernel / solve / PSD kernels.
//! * [`momat`] — moment-matrix construction, column relations, rank-one
//!   blocks and variety membership.
//! * [`solver`] — the interpolation engines: direct Vandermonde solves,
//!   greedy rank completion by rank-one perturbations, sequence completion,
//!   and rank-one deflation along a linear variety.
//! * [`hankel1d`] — the one-dimensional layer: Hankel positivity checks,
//!   quadrature rules generated from raw moments, and separable products.
//!
//! The crate is `no_std` (with `alloc`); IO, serialization and the command
//! line front end live in the companion `moment-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod error;
pub mod hankel1d;
pub mod linalg;
pub mod measure;
pub mod momat;
pub mod monomial;
pub mod poly;
pub mod rational;
mod roots;
pub mod sequence;
pub mod solver;

pub use error::{Error, Result};
pub use hankel1d::{
    hamburger_check, hankel, legendre_moments, product_measure, quadrature_from_moments,
    separable_factor, stieltjes_check, MomentGrid, QuadratureRule,
};
pub use linalg::{kernel_basis, psd_check, rank, solve_consistent, solve_square, RationalMatrix};
pub use measure::{jordan_split, moments_of_measure, Atom, SignedMeasure};
pub use momat::{
    build_moment_matrix, column_relations, finite_consistency, point_vector, rank_one,
    variety_contains, MomentMatrix, VarietyReport,
};
pub use monomial::{monomial_basis, MultiIndex};
pub use poly::{eval_poly, KernelPolynomial};
pub use rational::{format_rational, parse_rational, rational_to_f64, Rational};
pub use sequence::{riesz, MomentSequence, PartialMomentSequence};
pub use solver::{
    complete_sequence, deflate_atom, perturb_to_invertible, solve_direct,
    solve_minimal_linear_variety, solve_perturbation, verify, verify_float, CompletionReport,
    SolveConfig, SolveReport, Strategy, VerifyReport,
};
