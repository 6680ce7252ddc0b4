//! Interpolating-measure engines.
//!
//! Three routes produce a signed measure whose moments reproduce a given
//! even-degree sequence exactly:
//!
//! * [`solve_direct`] — sample one generic node per basis monomial and solve
//!   the square generalized Vandermonde system.
//! * [`solve_perturbation`] — add rank-one blocks `P(w)` at points outside
//!   the variety until the moment matrix is invertible, solve the lifted
//!   sequence directly, then subtract the added unit masses.
//! * [`solve_minimal_linear_variety`] — when a column relation of total
//!   degree one exists, peel atoms off by rank-one deflation along that
//!   hyperplane; on success the atom count equals the matrix rank.
//!
//! Every returned measure is re-checked against the moment oracle before it
//! leaves this module. All sampling comes from a ChaCha8 stream seeded by
//! the caller, so identical inputs and seeds give identical results.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, RationalMatrix};
use crate::measure::{moments_of_measure, SignedMeasure};
use crate::momat::{
    build_moment_matrix, column_relations, point_vector, rank_one, variety_contains, MomentMatrix,
};
use crate::monomial::{monomial_basis, MultiIndex};
use crate::poly::{point_power, KernelPolynomial};
use crate::rational::{rational_to_f64, Rational};
use crate::sequence::{MomentSequence, PartialMomentSequence};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Strategy {
    Direct,
    Perturbation,
    MinimalLinear,
}

impl core::fmt::Display for Strategy {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            Strategy::Direct => "direct",
            Strategy::Perturbation => "perturbation",
            Strategy::MinimalLinear => "minimal-linear",
        })
    }
}

/// Solver knobs. `node_box` bounds sampled coordinates to `[-B, B]`;
/// `max_retries` caps both singular-system retries and consecutive
/// in-variety samples.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolveConfig {
    pub strategy: Strategy,
    pub seed: u64,
    pub node_box: Rational,
    pub max_retries: u32,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            strategy: Strategy::Direct,
            seed: 0,
            node_box: Rational::from(BigInt::from(10)),
            max_retries: 32,
        }
    }
}

impl SolveConfig {
    pub fn with_seed(seed: u64) -> Self {
        SolveConfig {
            seed,
            ..SolveConfig::default()
        }
    }
}

/// Result of a solve: the measure plus the evidence trail.
///
/// `atoms_added_for_invertibility` lists the unit-density points the
/// perturbation route inserted (empty for the other strategies), so the
/// `μ̃ − Σ δ_w` structure stays visible next to the merged measure.
/// `rank_trace` records matrix ranks as the perturbation or deflation
/// progressed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolveReport {
    pub measure: SignedMeasure,
    pub strategy: Strategy,
    pub atoms_added_for_invertibility: Vec<Vec<Rational>>,
    pub rank_trace: Vec<usize>,
    pub oracle_verified: bool,
}

// ---------------------------------------------------------------------------
// Node sampling
// ---------------------------------------------------------------------------

/// Deterministic node source. Coordinates are `i / 2^16` with `i` drawn
/// uniformly from `[-floor(B*2^16), floor(B*2^16)]` out of a ChaCha8 stream
/// seeded with `cfg.seed`; reproducibility matters here, statistical quality
/// does not.
struct NodeSampler {
    rng: ChaCha8Rng,
    bound: i64,
}

const NODE_DENOMINATOR: i64 = 1 << 16;

impl NodeSampler {
    fn new(cfg: &SolveConfig) -> Self {
        assert!(cfg.node_box.is_positive(), "node box must be positive");
        assert!(cfg.max_retries >= 1, "need at least one retry");
        let scaled = (&cfg.node_box * Rational::from(BigInt::from(NODE_DENOMINATOR))).floor();
        let bound = i64::try_from(scaled.to_integer()).unwrap_or(i64::MAX >> 1);
        NodeSampler {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            bound,
        }
    }

    fn coordinate(&mut self) -> Rational {
        let i = self.rng.gen_range(-self.bound..=self.bound);
        Rational::new(BigInt::from(i), BigInt::from(NODE_DENOMINATOR))
    }

    fn point(&mut self, dimension: usize) -> Vec<Rational> {
        (0..dimension).map(|_| self.coordinate()).collect()
    }

    fn distinct_points(&mut self, dimension: usize, count: usize) -> Option<Vec<Vec<Rational>>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::with_capacity(count);
        let mut budget = 64 * (count + 8);
        while out.len() < count {
            if budget == 0 {
                return None;
            }
            budget -= 1;
            let p = self.point(dimension);
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        Some(out)
    }
}

fn finish_report(
    beta: &MomentSequence,
    measure: SignedMeasure,
    strategy: Strategy,
    atoms_added: Vec<Vec<Rational>>,
    rank_trace: Vec<usize>,
) -> Result<SolveReport> {
    if moments_of_measure(&measure, beta.degree()) != *beta {
        return Err(Error::VerificationFailed);
    }
    Ok(SolveReport {
        measure,
        strategy,
        atoms_added_for_invertibility: atoms_added,
        rank_trace,
        oracle_verified: true,
    })
}

// ---------------------------------------------------------------------------
// Strategies
// ---------------------------------------------------------------------------

/// Direct route: one sampled node per basis monomial of degree ≤ 2n, exact
/// square Vandermonde solve, zero densities dropped. Retries with fresh
/// nodes if the sampled system is singular.
pub fn solve_direct(beta: &MomentSequence, cfg: &SolveConfig) -> Result<SolveReport> {
    if beta.degree() % 2 != 0 {
        return Err(Error::OddDegree {
            degree: beta.degree(),
        });
    }
    let dimension = beta.dimension();
    let basis = monomial_basis(dimension, beta.degree());
    let target = beta.values_degree_lex();
    let mut sampler = NodeSampler::new(cfg);

    for _ in 0..cfg.max_retries {
        let Some(points) = sampler.distinct_points(dimension, basis.len()) else {
            continue;
        };
        let rows = basis
            .iter()
            .map(|index| points.iter().map(|p| point_power(p, index)).collect())
            .collect();
        let vandermonde = RationalMatrix::from_rows(rows)?;
        match linalg::solve_square(&vandermonde, &target) {
            Ok(densities) => {
                let measure =
                    SignedMeasure::new(dimension, points.into_iter().zip(densities).collect())?;
                return finish_report(beta, measure, Strategy::Direct, Vec::new(), Vec::new());
            }
            Err(Error::SingularMatrix) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SingularAfterRetries {
        attempts: cfg.max_retries,
    })
}

/// Invertible completion produced by [`perturb_to_invertible`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PerturbOutcome {
    pub matrix: MomentMatrix,
    pub added_points: Vec<Vec<Rational>>,
    pub rank_trace: Vec<usize>,
}

/// Adds `P(w)` at sampled points `w` outside the current variety until the
/// matrix is invertible. Each accepted point raises the rank by exactly one,
/// so exactly `corank` points get added.
pub fn perturb_to_invertible(m: &MomentMatrix, cfg: &SolveConfig) -> Result<PerturbOutcome> {
    let mut sampler = NodeSampler::new(cfg);
    let mut current = m.clone();
    let mut rank = current.rank();
    let mut rank_trace = vec![rank];
    let mut added_points = Vec::new();

    while rank < current.size() {
        let mut missed = 0u32;
        let w = loop {
            let w = sampler.point(current.dimension());
            if !variety_contains(&current, &w)? {
                break w;
            }
            missed += 1;
            if missed >= cfg.max_retries {
                return Err(Error::SamplingExhausted {
                    attempts: cfg.max_retries,
                });
            }
        };
        current = current.add_scaled(&rank_one(&w, current.order()), &Rational::one())?;
        let new_rank = current.rank();
        assert_eq!(
            new_rank,
            rank + 1,
            "a rank-one block off the variety must raise the rank by one"
        );
        rank = new_rank;
        rank_trace.push(rank);
        added_points.push(w);
    }
    Ok(PerturbOutcome {
        matrix: current,
        added_points,
        rank_trace,
    })
}

/// Perturbation route: make the moment matrix invertible with unit masses,
/// solve the lifted (now naturally consistent) sequence directly, and
/// subtract the masses again.
pub fn solve_perturbation(beta: &MomentSequence, cfg: &SolveConfig) -> Result<SolveReport> {
    let m = build_moment_matrix(beta)?;
    let outcome = perturb_to_invertible(&m, cfg)?;
    let mut lifted = beta.clone();
    for w in &outcome.added_points {
        lifted = lifted.add(&moments_of_measure(
            &SignedMeasure::dirac(w.clone()),
            beta.degree(),
        ))?;
    }
    let inner = solve_direct(&lifted, cfg)?;
    let mut measure = inner.measure;
    for w in &outcome.added_points {
        measure = measure.sub(&SignedMeasure::dirac(w.clone()))?;
    }
    finish_report(
        beta,
        measure,
        Strategy::Perturbation,
        outcome.added_points,
        outcome.rank_trace,
    )
}

/// Outcome of [`complete_sequence`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CompletionReport {
    pub sequence: MomentSequence,
    /// Indices that had to be invented.
    pub filled: Vec<MultiIndex>,
    /// Whether the completed moment matrix came out invertible.
    pub invertible: bool,
}

/// Fills the gaps of a partial or odd-degree sequence with seeded random
/// rationals, retrying for an invertible moment matrix; the last fill is
/// returned even if invertibility was never reached (the direct solver does
/// not need it). Given entries are never altered, and a leading zero `β_0`
/// is left untouched.
pub fn complete_sequence(partial: &PartialMomentSequence, cfg: &SolveConfig) -> CompletionReport {
    let dimension = partial.dimension();
    let target_degree = partial.degree() + partial.degree() % 2;
    let missing: Vec<MultiIndex> = monomial_basis(dimension, target_degree)
        .into_iter()
        .filter(|i| partial.get(i).is_none())
        .collect();

    let assemble = |fill: &BTreeMap<MultiIndex, Rational>| {
        MomentSequence::from_fn(dimension, target_degree, |index| {
            partial
                .get(index)
                .cloned()
                .unwrap_or_else(|| fill[index].clone())
        })
    };

    if missing.is_empty() {
        let sequence = assemble(&BTreeMap::new());
        let m = build_moment_matrix(&sequence).expect("even by construction");
        let invertible = m.rank() == m.size();
        return CompletionReport {
            sequence,
            filled: missing,
            invertible,
        };
    }

    let mut sampler = NodeSampler::new(cfg);
    let mut last = None;
    for _ in 0..cfg.max_retries {
        let fill: BTreeMap<MultiIndex, Rational> = missing
            .iter()
            .map(|i| (i.clone(), sampler.coordinate()))
            .collect();
        let sequence = assemble(&fill);
        let m = build_moment_matrix(&sequence).expect("even by construction");
        if m.rank() == m.size() {
            return CompletionReport {
                sequence,
                filled: missing,
                invertible: true,
            };
        }
        last = Some(sequence);
    }
    CompletionReport {
        sequence: last.expect("max_retries >= 1"),
        filled: missing,
        invertible: false,
    }
}

/// Splits one atom off a moment matrix by a rank-one (Wedderburn) update.
///
/// For `w` in the variety, `v(w)` lies in the range, so `M x = v(w)` has a
/// witness; the gauge `g = v(w)ᵀ x` does not depend on which witness. With
/// `u = 1/g`, the matrix `M − u P(w)` has rank exactly one lower.
pub fn deflate_atom(m: &MomentMatrix, w: &[Rational]) -> Result<(Rational, MomentMatrix)> {
    if !variety_contains(m, w)? {
        return Err(Error::NotInVariety);
    }
    let v = point_vector(w, m.order());
    let witness = linalg::solve_consistent(m.matrix(), &v)?
        .expect("variety membership puts v(w) in the range");
    let gauge = v
        .iter()
        .zip(&witness)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
    if gauge.is_zero() {
        return Err(Error::ZeroGauge);
    }
    let density = gauge.recip();
    let deflated = m.add_scaled(&rank_one(w, m.order()), &-density.clone())?;
    assert_eq!(
        deflated.rank() + 1,
        m.rank(),
        "deflation at a nonzero gauge must drop the rank by one"
    );
    Ok((density, deflated))
}

/// Hunts for a measure supported inside a degree-one column relation's
/// hyperplane by greedy deflation. Succeeds with exactly `rank(M)` atoms, or
/// reports `None` when deflation stalls; errors with [`Error::NoLinearRelation`]
/// when no degree-one relation exists.
pub fn solve_minimal_linear_variety(
    beta: &MomentSequence,
    cfg: &SolveConfig,
) -> Result<Option<SolveReport>> {
    let m = build_moment_matrix(beta)?;
    let relations = column_relations(&m);
    let hyperplane = relations
        .kernel_polynomials
        .iter()
        .find(|p| p.degree() == 1)
        .cloned()
        .ok_or(Error::NoLinearRelation)?;
    let (lead, _) = hyperplane.leading().expect("degree-1 polynomial");
    let pivot_var = lead
        .exponents()
        .iter()
        .position(|&e| e == 1)
        .expect("leading term of a degree-1 polynomial is a variable");

    let dimension = m.dimension();
    let initial_rank = relations.rank;
    let mut sampler = NodeSampler::new(cfg);
    let mut current = m;
    let mut rank = initial_rank;
    let mut rank_trace = vec![rank];
    let mut atoms: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut failures = 0u32;

    while rank > 0 {
        // Once the remainder is rank one it is a scaled P(w); read the atom
        // off instead of waiting for a lucky sample.
        let w = match read_off_atom(&current) {
            Some(w) if rank == 1 => w,
            _ => sample_on_hyperplane(&mut sampler, &hyperplane, pivot_var, dimension),
        };
        match deflate_atom(&current, &w) {
            Ok((density, next)) => {
                atoms.push((w, density));
                current = next;
                rank -= 1;
                rank_trace.push(rank);
                failures = 0;
            }
            Err(Error::NotInVariety) | Err(Error::ZeroGauge) => {
                failures += 1;
                if failures >= cfg.max_retries {
                    return Ok(None);
                }
            }
            Err(e) => return Err(e),
        }
    }

    let measure = SignedMeasure::new(dimension, atoms)?;
    assert_eq!(
        measure.len(),
        initial_rank,
        "deflation produces one distinct atom per rank"
    );
    let report = finish_report(
        beta,
        measure,
        Strategy::MinimalLinear,
        Vec::new(),
        rank_trace,
    )?;
    Ok(Some(report))
}

fn sample_on_hyperplane(
    sampler: &mut NodeSampler,
    hyperplane: &KernelPolynomial,
    pivot_var: usize,
    dimension: usize,
) -> Vec<Rational> {
    let mut w = sampler.point(dimension);
    // The pivot variable has coefficient 1, so solve for it.
    let mut acc = Rational::zero();
    for (index, coeff) in hyperplane.terms() {
        if index.total_degree() == 0 {
            acc += coeff;
        } else {
            let var = index
                .exponents()
                .iter()
                .position(|&e| e == 1)
                .expect("hyperplane terms are linear");
            if var != pivot_var {
                acc += coeff * &w[var];
            }
        }
    }
    w[pivot_var] = -acc;
    w
}

/// If `m` equals `c · P(w)` for some point `w`, recover `w`; works whenever
/// the corner entry is nonzero.
fn read_off_atom(m: &MomentMatrix) -> Option<Vec<Rational>> {
    let dimension = m.dimension();
    if m.size() < 1 + dimension {
        return None;
    }
    let corner = m.matrix().get(0, 0);
    if corner.is_zero() {
        return None;
    }
    let w: Vec<Rational> = (0..dimension)
        .map(|k| m.matrix().get(0, 1 + k) / corner)
        .collect();
    let candidate = rank_one(&w, m.order()).matrix().scaled(corner);
    (&candidate == m.matrix()).then_some(w)
}

/// Runs the strategy selected in `cfg`; only the minimal-linear route can
/// report "not found" (`None`).
pub fn solve(beta: &MomentSequence, cfg: &SolveConfig) -> Result<Option<SolveReport>> {
    match cfg.strategy {
        Strategy::Direct => solve_direct(beta, cfg).map(Some),
        Strategy::Perturbation => solve_perturbation(beta, cfg).map(Some),
        Strategy::MinimalLinear => solve_minimal_linear_variety(beta, cfg),
    }
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Per-index exact deltas between a sequence and a measure's moments.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct VerifyReport {
    pub deltas: Vec<(MultiIndex, Rational)>,
    pub pass: bool,
}

/// Recomputes the measure's moments through the oracle and diffs them
/// against `beta`, index by index, in exact arithmetic.
pub fn verify(beta: &MomentSequence, mu: &SignedMeasure) -> Result<VerifyReport> {
    if mu.dimension() != beta.dimension() {
        return Err(Error::DimensionMismatch {
            expected: beta.dimension(),
            got: mu.dimension(),
        });
    }
    let recomputed = moments_of_measure(mu, beta.degree());
    let deltas: Vec<(MultiIndex, Rational)> = beta
        .iter()
        .map(|(index, value)| (index.clone(), value - recomputed.value(index)))
        .collect();
    let pass = deltas.iter().all(|(_, d)| d.is_zero());
    Ok(VerifyReport { deltas, pass })
}

/// Floating-mode verification: the maximum absolute delta with all terms
/// evaluated in f64.
pub fn verify_float(beta: &MomentSequence, mu: &SignedMeasure) -> Result<f64> {
    if mu.dimension() != beta.dimension() {
        return Err(Error::DimensionMismatch {
            expected: beta.dimension(),
            got: mu.dimension(),
        });
    }
    let mut worst = 0.0f64;
    for (index, value) in beta.iter() {
        let mut acc = 0.0f64;
        for atom in mu.atoms() {
            let mut term = rational_to_f64(&atom.density);
            for (coord, &e) in atom.point.iter().zip(index.exponents()) {
                let c = rational_to_f64(coord);
                for _ in 0..e {
                    term *= c;
                }
            }
            acc += term;
        }
        let delta = (rational_to_f64(value) - acc).abs();
        if delta > worst {
            worst = delta;
        }
    }
    Ok(worst)
}
