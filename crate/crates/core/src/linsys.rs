//! Linear systems of plane curves with fat-point conditions.
//!
//! A class `(d; m_1, …, m_n)` with `d, m_i >= 0` is read as the system of
//! degree-`d` plane curves with a point of multiplicity at least `m_i` at the
//! `i`-th general point. This module provides the Cremona reduction to
//! standard form, the expected dimension `max(0, χ)`, and a finite-field
//! interpolation oracle for the actual section count `h⁰`.
//!
//! # Certificate semantics
//!
//! The oracle samples point configurations over a prime field and computes
//! the exact rank of the multiplicity-condition matrix. The matrix entries
//! are integer polynomials in the point coordinates, so the rank at *any*
//! sample is at most the generic characteristic-zero rank; equivalently, the
//! returned section count is an upper bound for the generic `h⁰` at every
//! sample. A returned `0` is therefore a rigorous vanishing certificate
//! ([`Certificate::RankCertificate`]), while a positive value is a
//! Monte-Carlo answer reported as the minimum over independent trials
//! ([`Certificate::MonteCarlo`]).
//!
//! Negative multiplicities are clipped to zero before conditions are built:
//! an exceptional class appearing with positive coefficient is a fixed
//! component and contributes no conditions on the plane model.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euler::chi_divisor;
use crate::field::{matrix_rank, PrimeField, MERSENNE31};
use crate::lattice::DivisorClass;

/// Largest supported oracle degree. `C(d+2, 2)` columns times a comparable
/// row count must stay allocatable; degrees beyond this are of no practical
/// use for a dense rank computation anyway.
const MAX_ORACLE_DEGREE: i64 = 4096;

/// Maximum number of matrix entries the oracle will allocate (8 bytes each).
const MAX_MATRIX_ENTRIES: u64 = 256_000_000;

/// Parameters of the interpolation oracle. Trial seeds are derived from
/// `seed` by counter, so equal configurations reproduce equal outputs
/// bit-for-bit.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct OracleConfig {
    pub prime: u64,
    pub seed: u64,
    pub trials: u32,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { prime: MERSENNE31, seed: 0, trials: 3 }
    }
}

impl OracleConfig {
    pub fn with_seed(self, seed: u64) -> Self {
        OracleConfig { seed, ..self }
    }
}

/// How a reported section count is certified.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Certificate {
    /// A full-rank computation that rigorously certifies the value (always
    /// the case for a reported 0).
    #[serde(rename = "RANK_CERTIFICATE")]
    RankCertificate,
    /// Minimum over random samples; an upper bound for the generic value.
    #[serde(rename = "MONTE_CARLO")]
    MonteCarlo,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::RankCertificate => f.write_str("RANK_CERTIFICATE"),
            Certificate::MonteCarlo => f.write_str("MONTE_CARLO"),
        }
    }
}

/// Result of one oracle query: the section count, its certificate kind, and
/// the RNG seeds that were consumed.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct SectionCount {
    pub value: u64,
    pub certificate: Certificate,
    pub seeds: Vec<u64>,
}

/// `true` iff the m-vector is non-increasing, `d >= m_1`, and
/// `d - m_1 - m_2 - m_3 >= 0`. For `n < 3` the Cremona condition is vacuous
/// and sortedness alone counts as standard.
pub fn is_standard_form(divisor: &DivisorClass) -> bool {
    let m = divisor.multiplicities();
    let sorted = m.windows(2).all(|w| w[0] >= w[1]);
    if divisor.n() < 3 {
        return sorted;
    }
    let d = i128::from(divisor.degree());
    sorted
        && d >= i128::from(m[0])
        && d - i128::from(m[0]) - i128::from(m[1]) - i128::from(m[2]) >= 0
}

/// One rewriting step of the standard-form reduction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum ReductionStep {
    /// Reorder multiplicities: new position `t` receives old position
    /// `permutation[t]` (0-based; the stable descending argsort).
    Sort { permutation: Vec<usize> },
    /// Quadratic Cremona reflection on the given point indices (1-based).
    Cremona { i: usize, j: usize, k: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum ReductionVerdict {
    /// The loop exited on a class in standard form.
    StandardForm,
    /// The degree went negative; the system is empty.
    NegativeDegree,
    /// The loop exited with `d >= 0` but a multiplicity exceeding the
    /// degree (possible only with negative trailing multiplicities); the
    /// clipped system is empty.
    EmptyByClip,
}

/// The recorded orbit walk from a class to its reduced representative.
/// Replaying `steps` on the input reproduces `result`, and `χ` is constant
/// along the trace.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<ReductionStep>,
    pub result: DivisorClass,
    pub verdict: ReductionVerdict,
}

/// Sorts multiplicities and applies quadratic Cremona reflections on the
/// three largest until the class is in standard form or its degree goes
/// negative. Each reflection strictly decreases the degree, so the loop
/// terminates.
pub fn standard_form_reduce(divisor: &DivisorClass) -> Result<ReductionTrace> {
    let n = divisor.n();
    if n < 3 {
        return Err(Error::Dimension(format!(
            "standard-form reduction needs n >= 3 (got n = {n})"
        )));
    }
    let mut d = divisor.degree();
    let mut m = divisor.multiplicities().to_vec();
    let mut steps = Vec::new();
    loop {
        // Stable descending argsort of the multiplicities.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(m[i]));
        if order.iter().enumerate().any(|(t, &src)| t != src) {
            m = order.iter().map(|&src| m[src]).collect();
            steps.push(ReductionStep::Sort { permutation: order });
        }

        if d < 0 {
            return Ok(ReductionTrace {
                steps,
                result: DivisorClass::new(d, m),
                verdict: ReductionVerdict::NegativeDegree,
            });
        }

        let drop = i128::from(d) - i128::from(m[0]) - i128::from(m[1]) - i128::from(m[2]);
        if drop >= 0 {
            let result = DivisorClass::new(d, m);
            let verdict = if is_standard_form(&result) {
                ReductionVerdict::StandardForm
            } else {
                ReductionVerdict::EmptyByClip
            };
            return Ok(ReductionTrace { steps, result, verdict });
        }

        // v ↦ v + (v·r) r for r = H - E_1 - E_2 - E_3 on the sorted class.
        let pairing = drop as i64; // |drop| <= |d| + 3 max|m|, no overflow
        let new_d = d
            .checked_add(pairing)
            .ok_or(Error::Overflow("Cremona reduction"))?;
        let (m1, m2, m3) = (m[0], m[1], m[2]);
        m[0] = sub3(d, m2, m3)?;
        m[1] = sub3(d, m1, m3)?;
        m[2] = sub3(d, m1, m2)?;
        d = new_d;
        steps.push(ReductionStep::Cremona { i: 1, j: 2, k: 3 });
    }
}

fn sub3(d: i64, a: i64, b: i64) -> Result<i64> {
    d.checked_sub(a)
        .and_then(|x| x.checked_sub(b))
        .ok_or(Error::Overflow("Cremona reduction"))
}

/// The conjectural section count `max(0, χ(D))` for a class in standard
/// form over general points. A prediction, not a certified value.
pub fn expected_dimension(divisor: &DivisorClass) -> Result<u64> {
    Ok(chi_divisor(divisor)?.max(0) as u64)
}

/// `true` when `h⁰ = 0` for elementary reasons, with no sampling needed:
/// the degree is negative, or some clipped multiplicity exceeds the degree
/// (a plane curve of degree `d` has multiplicity at most `d` at any point).
pub fn h0_trivially_zero(divisor: &DivisorClass) -> bool {
    let d = divisor.degree();
    if d < 0 {
        return true;
    }
    divisor.multiplicities().iter().any(|&m| m > d)
}

/// Number of sections of `O(D)` at a random configuration of distinct
/// points over the field with `cfg.prime` elements.
///
/// Columns are the `C(d+2, 2)` monomials of degree `<= d` in the affine
/// chart; each point of (clipped) multiplicity `m` contributes the
/// `C(m+1, 2)` rows that kill the Taylor coefficients of total order
/// `< m` after translating the point to the origin. The value is
/// `C(d+2, 2) - rank`. See the module docs for certificate semantics.
pub fn h0_oracle(divisor: &DivisorClass, cfg: &OracleConfig) -> Result<SectionCount> {
    let field = PrimeField::new(cfg.prime)?;
    if cfg.trials == 0 {
        return Err(Error::Parameter("oracle needs at least one trial".into()));
    }
    if h0_trivially_zero(divisor) {
        return Ok(SectionCount {
            value: 0,
            certificate: Certificate::RankCertificate,
            seeds: Vec::new(),
        });
    }
    let d = divisor.degree();
    if d > MAX_ORACLE_DEGREE {
        return Err(Error::Parameter(format!(
            "degree {d} exceeds the dense-oracle limit {MAX_ORACLE_DEGREE}"
        )));
    }
    let clipped: Vec<i64> = divisor.multiplicities().iter().map(|&m| m.max(0)).collect();
    let max_mult = clipped.iter().copied().max().unwrap_or(0);
    if cfg.prime <= d as u64 || cfg.prime <= max_mult as u64 {
        return Err(Error::Parameter(format!(
            "prime {} must exceed the degree ({d}) and every multiplicity (max {max_mult})",
            cfg.prime
        )));
    }

    let ncols = monomial_count(d as u64);
    let nrows: u64 = clipped.iter().map(|&m| conditions(m as u64)).sum();
    if nrows == 0 {
        // No conditions at all: the value is exact but positive, so it is
        // reported under the Monte-Carlo label like any other positive value.
        return Ok(SectionCount {
            value: ncols,
            certificate: Certificate::MonteCarlo,
            seeds: Vec::new(),
        });
    }
    if nrows.saturating_mul(ncols) > MAX_MATRIX_ENTRIES {
        return Err(Error::Parameter(format!(
            "condition matrix {nrows} x {ncols} exceeds the dense-oracle memory limit"
        )));
    }

    let pascal = pascal_mod(d as usize, field);
    let mut best: Option<u64> = None;
    let mut seeds = Vec::with_capacity(cfg.trials as usize);
    for trial in 0..cfg.trials {
        let seed = cfg.seed.wrapping_add(u64::from(trial));
        seeds.push(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let points = sample_points(divisor.n(), field, &mut rng)?;
        let mut matrix = condition_matrix(d as u64, &clipped, &points, field, &pascal);
        let rank = matrix_rank(&mut matrix, field) as u64;
        let value = ncols - rank;
        if value == 0 {
            return Ok(SectionCount {
                value: 0,
                certificate: Certificate::RankCertificate,
                seeds,
            });
        }
        best = Some(best.map_or(value, |b| b.min(value)));
    }
    Ok(SectionCount {
        value: best.expect("at least one trial ran"),
        certificate: Certificate::MonteCarlo,
        seeds,
    })
}

fn monomial_count(d: u64) -> u64 {
    (d + 1) * (d + 2) / 2
}

fn conditions(m: u64) -> u64 {
    m * (m + 1) / 2
}

/// Pascal's triangle reduced modulo the field characteristic, rows `0..=d`.
fn pascal_mod(d: usize, field: PrimeField) -> Vec<Vec<u64>> {
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(d + 1);
    for r in 0..=d {
        let mut row = vec![1u64; r + 1];
        if r > 0 {
            let prev = &rows[r - 1];
            for c in 1..r {
                row[c] = field.add(prev[c - 1], prev[c]);
            }
        }
        rows.push(row);
    }
    rows
}

/// `n` distinct points with unit last coordinate, sampled uniformly from the
/// affine plane over the field. The stream depends only on `(n, prime, seed)`,
/// so different divisors with the same configuration see the same points.
fn sample_points(n: usize, field: PrimeField, rng: &mut ChaCha8Rng) -> Result<Vec<(u64, u64)>> {
    let p = field.modulus();
    let mut points = Vec::with_capacity(n);
    let mut seen = HashSet::with_capacity(n);
    let mut attempts = 0usize;
    while points.len() < n {
        attempts += 1;
        if attempts > 64 + 32 * n {
            return Err(Error::Sampling(format!(
                "could not find {n} distinct points over F_{p} after {attempts} attempts"
            )));
        }
        let x = rng.random_range(0..p);
        let y = rng.random_range(0..p);
        if seen.insert((x, y)) {
            points.push((x, y));
        }
    }
    Ok(points)
}

/// Builds the multiplicity-condition matrix. Column `(u, v)` (with
/// `u + v <= d`, ordered by total degree then `u`) is the monomial
/// `x^u y^v`; the row for Taylor order `(a, b)` at a point `q` holds the
/// coefficient of `x^a y^b` in the translate `(x + q_x)^u (y + q_y)^v`,
/// namely `C(u, a) C(v, b) q_x^(u-a) q_y^(v-b)`.
fn condition_matrix(
    d: u64,
    mults: &[i64],
    points: &[(u64, u64)],
    field: PrimeField,
    pascal: &[Vec<u64>],
) -> Vec<Vec<u64>> {
    let d = d as usize;
    let ncols = monomial_count(d as u64) as usize;
    let col_of = |u: usize, v: usize| -> usize {
        let t = u + v;
        t * (t + 1) / 2 + u
    };
    let mut rows = Vec::new();
    for (&(qx, qy), &m) in points.iter().zip(mults) {
        if m <= 0 {
            continue;
        }
        let m = m as usize;
        let xpow = power_table(qx, d, field);
        let ypow = power_table(qy, d, field);
        for a in 0..m {
            for b in 0..m - a {
                let mut row = vec![0u64; ncols];
                for u in a..=d {
                    for v in b..=(d - u) {
                        let binom = field.mul(pascal[u][a], pascal[v][b]);
                        let point_part = field.mul(xpow[u - a], ypow[v - b]);
                        row[col_of(u, v)] = field.mul(binom, point_part);
                    }
                }
                rows.push(row);
            }
        }
    }
    rows
}

fn power_table(base: u64, max_exp: usize, field: PrimeField) -> Vec<u64> {
    let mut table = Vec::with_capacity(max_exp + 1);
    table.push(1u64);
    for e in 1..=max_exp {
        table.push(field.mul(table[e - 1], base));
    }
    table
}

/// The triple `(h⁰, h¹, h²)` of a line bundle, with `h²` obtained from
/// sections of the Serre-dual class `K - D` and `h¹` filled in so that
/// `h⁰ - h¹ + h² = χ(D)` holds exactly.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct CohomologyVector {
    pub h0: u64,
    pub h1: u64,
    pub h2: u64,
    pub certificate: Certificate,
    pub seeds: Vec<u64>,
}

impl CohomologyVector {
    pub fn h(&self, degree: usize) -> u64 {
        match degree {
            0 => self.h0,
            1 => self.h1,
            2 => self.h2,
            _ => 0,
        }
    }
}

/// Seed offset used when a degenerate sample forces a retry.
pub(crate) const RETRY_STRIDE: u64 = 0x9E37_79B9_7F4A_7C15;
const MAX_RETRIES: u64 = 3;

/// Combines `h⁰(D)` and `h⁰(K - D)` into a full cohomology vector.
///
/// A derived `h¹ < 0` would signal a non-generic sample; the computation is
/// retried with fresh derived seeds and, should that ever fail, reported as
/// a consistency error.
pub fn cohomology_vector(divisor: &DivisorClass, cfg: &OracleConfig) -> Result<CohomologyVector> {
    let chi = chi_divisor(divisor)?;
    let serre_dual = DivisorClass::canonical(divisor.n()).try_sub(divisor)?;
    let mut attempt_cfg = *cfg;
    for retry in 0..=MAX_RETRIES {
        let h0 = h0_oracle(divisor, &attempt_cfg)?;
        let h2 = h0_oracle(&serre_dual, &attempt_cfg)?;
        match assemble_cohomology(&h0, &h2, chi) {
            Some(vector) => return Ok(vector),
            None => {
                attempt_cfg = cfg.with_seed(
                    cfg.seed.wrapping_add((retry + 1).wrapping_mul(RETRY_STRIDE)),
                );
            }
        }
    }
    Err(Error::Consistency(format!(
        "derived h¹ stayed negative for {divisor} after {MAX_RETRIES} reseeded retries"
    )))
}

pub(crate) fn assemble_cohomology(
    h0: &SectionCount,
    h2: &SectionCount,
    chi: i64,
) -> Option<CohomologyVector> {
    let h1 = h0.value as i64 + h2.value as i64 - chi;
    if h1 < 0 {
        return None;
    }
    let certificate = match (h0.certificate, h2.certificate) {
        (Certificate::RankCertificate, Certificate::RankCertificate) => {
            Certificate::RankCertificate
        }
        _ => Certificate::MonteCarlo,
    };
    let mut seeds = h0.seeds.clone();
    seeds.extend_from_slice(&h2.seeds);
    Some(CohomologyVector { h0: h0.value, h1: h1 as u64, h2: h2.value, certificate, seeds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeIsometry;

    fn div(text: &str) -> DivisorClass {
        text.parse().unwrap()
    }

    #[test]
    fn standard_form_examples() {
        assert!(is_standard_form(&div("38;12,12,12,12,12,12,12,12,12,12")));
        assert!(is_standard_form(&div("13;5,4,4,4,4,4,4,4,4,4")));
        assert!(!is_standard_form(&div("1;1,1,1")));
        assert!(!is_standard_form(&div("5;1,2,3"))); // unsorted
        assert!(!is_standard_form(&div("2;3,0,0"))); // d < m1
        // Below n = 3 only sortedness is required.
        assert!(is_standard_form(&div("0;2,1")));
        assert!(!is_standard_form(&div("0;1,2")));
        assert!(is_standard_form(&div("-5;")));
    }

    #[test]
    fn reduce_fixes_standard_classes() {
        let d = div("19;6,6,6,6,6,6,6,6,6,6");
        let trace = standard_form_reduce(&d).unwrap();
        assert_eq!(trace.result, d);
        assert_eq!(trace.verdict, ReductionVerdict::StandardForm);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn reduce_line_through_three_points() {
        let trace = standard_form_reduce(&div("1;1,1,1")).unwrap();
        assert_eq!(trace.result, div("-1;-1,-1,-1"));
        assert_eq!(trace.verdict, ReductionVerdict::NegativeDegree);
        let cremonas = trace
            .steps
            .iter()
            .filter(|s| matches!(s, ReductionStep::Cremona { .. }))
            .count();
        assert_eq!(cremonas, 1);
    }

    #[test]
    fn reduce_conic_through_five_points() {
        let trace = standard_form_reduce(&div("2;1,1,1,1,1")).unwrap();
        assert_eq!(trace.verdict, ReductionVerdict::StandardForm);
        assert_eq!(trace.result.with_sorted_multiplicities(), div("0;0,0,0,0,-1"));
        let cremonas = trace
            .steps
            .iter()
            .filter(|s| matches!(s, ReductionStep::Cremona { .. }))
            .count();
        assert_eq!(cremonas, 2);
        // The surviving section: χ is preserved, and the conic is unique.
        assert_eq!(chi_divisor(&trace.result).unwrap(), 1);
    }

    #[test]
    fn reduce_detects_clip_empty_corner() {
        // Sorted, Cremona-inapplicable, but the top multiplicity exceeds the
        // degree; only reachable with negative trailing multiplicities.
        let trace = standard_form_reduce(&div("1;2,-2,-2")).unwrap();
        assert_eq!(trace.verdict, ReductionVerdict::EmptyByClip);
    }

    #[test]
    fn reduction_replays_through_lattice_isometries() {
        let d = div("7;5,5,4,1,0,-2,3,3,2,1");
        let trace = standard_form_reduce(&d).unwrap();
        let mut current = d;
        for step in &trace.steps {
            current = match step {
                ReductionStep::Sort { permutation } => {
                    // perm[t] = source index; as an E-permutation it sends
                    // source -> t, so invert before building the isometry.
                    let mut image = vec![0usize; permutation.len()];
                    for (t, &src) in permutation.iter().enumerate() {
                        image[src] = t + 1;
                    }
                    LatticeIsometry::permutation(current.n(), &image)
                        .unwrap()
                        .apply(&current)
                        .unwrap()
                }
                ReductionStep::Cremona { i, j, k } => LatticeIsometry::cremona(current.n(), *i, *j, *k)
                    .unwrap()
                    .apply(&current)
                    .unwrap(),
            };
        }
        assert_eq!(current, trace.result);
    }

    #[test]
    fn expected_dimension_examples() {
        assert_eq!(expected_dimension(&div("38;12,12,12,12,12,12,12,12,12,12")).unwrap(), 0);
        assert_eq!(expected_dimension(&div("16;5,5,5,5,5,5,5,5,5,5")).unwrap(), 3);
        assert_eq!(expected_dimension(&div("2;0,0,0,0,0,0,0,0,0,0")).unwrap(), 6);
    }

    #[test]
    fn oracle_guards() {
        let cfg = OracleConfig { prime: 6, ..OracleConfig::default() };
        assert!(matches!(h0_oracle(&div("1;0"), &cfg), Err(Error::Parameter(_))));

        let cfg = OracleConfig { prime: 5, ..OracleConfig::default() };
        assert!(matches!(h0_oracle(&div("7;1"), &cfg), Err(Error::Parameter(_))));

        let cfg = OracleConfig { trials: 0, ..OracleConfig::default() };
        assert!(matches!(h0_oracle(&div("1;0"), &cfg), Err(Error::Parameter(_))));
    }

    #[test]
    fn oracle_on_cubics_through_ten_points() {
        let cfg = OracleConfig::default();
        let result = h0_oracle(&div("3;1,1,1,1,1,1,1,1,1,1"), &cfg).unwrap();
        assert_eq!(result.value, 0);
        assert_eq!(result.certificate, Certificate::RankCertificate);
        assert_eq!(result.seeds, vec![0]);
    }

    #[test]
    fn oracle_on_unconstrained_conics() {
        let cfg = OracleConfig::default();
        let result = h0_oracle(&div("2;0,0,0,0,0,0,0,0,0,0"), &cfg).unwrap();
        assert_eq!(result.value, 6);
        assert_eq!(result.certificate, Certificate::MonteCarlo);
    }

    #[test]
    fn oracle_finds_the_unique_conic_through_five_points() {
        let cfg = OracleConfig::default();
        let result = h0_oracle(&div("2;1,1,1,1,1,0,0,0,0,0"), &cfg).unwrap();
        assert_eq!(result.value, 1);
        assert_eq!(result.certificate, Certificate::MonteCarlo);
        assert_eq!(result.seeds.len(), 3);
    }

    #[test]
    fn oracle_clips_negative_multiplicities() {
        let cfg = OracleConfig::default();
        // E_1 as a divisor class: one section from the exceptional curve.
        let e1 = DivisorClass::exceptional(10, 1).unwrap();
        assert_eq!(h0_oracle(&e1, &cfg).unwrap().value, 1);
    }

    #[test]
    fn oracle_short_circuits_trivial_vanishing() {
        let cfg = OracleConfig::default();
        for text in ["-1;0,0", "0;1,0", "2;3,0"] {
            let result = h0_oracle(&div(text), &cfg).unwrap();
            assert_eq!(result.value, 0);
            assert_eq!(result.certificate, Certificate::RankCertificate);
            assert!(result.seeds.is_empty());
        }
    }

    #[test]
    fn oracle_is_deterministic() {
        let cfg = OracleConfig { prime: MERSENNE31, seed: 42, trials: 3 };
        let d = div("5;2,2,2,1,1,1,0,0,0,0");
        assert_eq!(h0_oracle(&d, &cfg).unwrap(), h0_oracle(&d, &cfg).unwrap());
    }

    #[test]
    fn oracle_small_prime_still_certifies() {
        // Three general points over F_101 already kill all lines.
        let cfg = OracleConfig { prime: 101, seed: 7, trials: 3 };
        let result = h0_oracle(&div("1;1,1,1"), &cfg).unwrap();
        assert_eq!(result.value, 0);
        assert_eq!(result.certificate, Certificate::RankCertificate);
    }

    #[test]
    fn cohomology_vector_examples() {
        let cfg = OracleConfig::default();
        let iota = LatticeIsometry::canonical_involution(10).unwrap();
        let f = iota.apply(&DivisorClass::hyperplane(10)).unwrap();
        let coh = cohomology_vector(&f, &cfg).unwrap();
        assert_eq!((coh.h0, coh.h1, coh.h2), (0, 0, 3));
        assert_eq!(coh.certificate, Certificate::MonteCarlo);

        let e1 = DivisorClass::exceptional(10, 1).unwrap();
        let coh = cohomology_vector(&e1, &cfg).unwrap();
        assert_eq!((coh.h0, coh.h1, coh.h2), (1, 0, 0));

        let minus_k = DivisorClass::canonical(10).try_neg().unwrap();
        let coh = cohomology_vector(&minus_k, &cfg).unwrap();
        assert_eq!((coh.h0, coh.h1, coh.h2), (0, 0, 0));
        assert_eq!(coh.certificate, Certificate::RankCertificate);
    }

    #[test]
    fn cohomology_satisfies_riemann_roch() {
        let cfg = OracleConfig::default();
        for text in ["1;1,1,1,1,1,1,1,1,1,1", "4;2,2,1,1,1,0,0,0,0,0", "0;0,0,0,0,0,0,0,0,0,0"] {
            let d = div(text);
            let coh = cohomology_vector(&d, &cfg).unwrap();
            assert_eq!(
                coh.h0 as i64 - coh.h1 as i64 + coh.h2 as i64,
                chi_divisor(&d).unwrap()
            );
        }
    }
}
