//! Relative heights and the (anticanonical) pseudoheight of collections of
//! line bundles, together with the not-full criterion and the presilting
//! Ext-vanishing check.
//!
//! For line bundles `O(A)`, `O(B)` one has `Ext^k(O(A), O(B)) = H^k(B - A)`,
//! so every relative height reduces to a cohomology vector of a difference
//! divisor. Cohomology vectors are memoized per difference divisor in a
//! [`CohomologyOracle`]; the chain searches below reuse each pair many times.

use std::fmt;

use dashmap::DashMap;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::euler::{chi_divisor, Collection};
use crate::lattice::DivisorClass;
use crate::linsys::{
    assemble_cohomology, h0_oracle, CohomologyVector, OracleConfig, SectionCount, RETRY_STRIDE,
};

/// A cohomological degree or chain value; `Top` is the absorbing value used
/// when every relevant group vanishes. Ordered above all finite values.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HeightValue {
    Finite(i64),
    Top,
}

impl HeightValue {
    pub fn is_top(self) -> bool {
        matches!(self, HeightValue::Top)
    }

    /// Shift by a constant; `Top` absorbs.
    pub fn plus(self, shift: i64) -> HeightValue {
        match self {
            HeightValue::Finite(v) => HeightValue::Finite(v + shift),
            HeightValue::Top => HeightValue::Top,
        }
    }

    /// `self > bound`, with `Top` counting as larger than every integer.
    pub fn exceeds(self, bound: i64) -> bool {
        match self {
            HeightValue::Finite(v) => v > bound,
            HeightValue::Top => true,
        }
    }
}

impl PartialOrd for HeightValue {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeightValue {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use HeightValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (Finite(_), Top) => std::cmp::Ordering::Less,
            (Top, Finite(_)) => std::cmp::Ordering::Greater,
            (Top, Top) => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for HeightValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HeightValue::Finite(v) => write!(f, "{v}"),
            HeightValue::Top => f.write_str("TOP"),
        }
    }
}

impl Serialize for HeightValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            HeightValue::Finite(v) => serializer.serialize_i64(*v),
            HeightValue::Top => serializer.serialize_str("TOP"),
        }
    }
}

/// Memoizing cohomology calculator bound to one oracle configuration.
///
/// Section counts are cached per divisor; concurrent lookups may compute the
/// same value twice, but writes are idempotent because the oracle is
/// deterministic for a fixed configuration.
pub struct CohomologyOracle {
    cfg: OracleConfig,
    cache: DashMap<DivisorClass, SectionCount>,
}

impl CohomologyOracle {
    pub fn new(cfg: OracleConfig) -> Self {
        CohomologyOracle { cfg, cache: DashMap::new() }
    }

    pub fn config(&self) -> &OracleConfig {
        &self.cfg
    }

    /// Memoized `h⁰`.
    pub fn section_count(&self, divisor: &DivisorClass) -> Result<SectionCount> {
        if let Some(hit) = self.cache.get(divisor) {
            return Ok(hit.clone());
        }
        let fresh = h0_oracle(divisor, &self.cfg)?;
        self.cache.insert(divisor.clone(), fresh.clone());
        Ok(fresh)
    }

    /// Memoized cohomology vector, with the same degenerate-sample retry
    /// policy as [`crate::linsys::cohomology_vector`].
    pub fn cohomology(&self, divisor: &DivisorClass) -> Result<CohomologyVector> {
        let chi = chi_divisor(divisor)?;
        let dual = DivisorClass::canonical(divisor.n()).try_sub(divisor)?;
        let h0 = self.section_count(divisor)?;
        let h2 = self.section_count(&dual)?;
        if let Some(vector) = assemble_cohomology(&h0, &h2, chi) {
            return Ok(vector);
        }
        for retry in 1..=3u64 {
            let cfg = self
                .cfg
                .with_seed(self.cfg.seed.wrapping_add(retry.wrapping_mul(RETRY_STRIDE)));
            let h0 = h0_oracle(divisor, &cfg)?;
            let h2 = h0_oracle(&dual, &cfg)?;
            if let Some(vector) = assemble_cohomology(&h0, &h2, chi) {
                self.cache.insert(divisor.clone(), h0);
                self.cache.insert(dual, h2);
                return Ok(vector);
            }
        }
        Err(Error::Consistency(format!(
            "derived h¹ stayed negative for {divisor} after reseeded retries"
        )))
    }

    /// `e(O(A), O(B))`: the least `k` with `Ext^k(O(A), O(B)) ≠ 0`, i.e.
    /// with `H^k(B - A) ≠ 0`; `Top` when the whole cohomology vanishes.
    /// Finite values lie in `{0, 1, 2}`.
    pub fn relative_height(&self, a: &DivisorClass, b: &DivisorClass) -> Result<HeightValue> {
        let coh = self.cohomology(&b.try_sub(a)?)?;
        for degree in 0..=2 {
            if coh.h(degree) != 0 {
                return Ok(HeightValue::Finite(degree as i64));
            }
        }
        Ok(HeightValue::Top)
    }
}

/// One-shot convenience wrapper around [`CohomologyOracle::relative_height`].
pub fn relative_height(
    a: &DivisorClass,
    b: &DivisorClass,
    cfg: &OracleConfig,
) -> Result<HeightValue> {
    CohomologyOracle::new(*cfg).relative_height(a, b)
}

/// Which closing term a chain uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClosingTerm {
    /// `e(E_last, S⁻¹ E_first)`; on a surface `S⁻¹ = - ⊗ ω⁻¹[-2]`, so this
    /// equals `e(E_last, E_first ⊗ ω⁻¹) + 2`.
    SerreInverse,
    /// `e(E_last, E_first ⊗ ω⁻¹)`, with no degree shift.
    AnticanonicalTwist,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct EdgeHeight {
    /// 1-based collection indices.
    pub from: usize,
    pub to: usize,
    pub height: HeightValue,
}

/// A chain `a_0 < … < a_p` with all its relative heights and the resulting
/// value `Σ edges + closing - p` (finite only when every term is).
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ChainReport {
    /// 1-based collection indices, strictly increasing.
    pub chain: Vec<usize>,
    pub edges: Vec<EdgeHeight>,
    pub closing: ClosingTerm,
    pub closing_height: HeightValue,
    pub value: HeightValue,
}

struct HeightTables {
    /// `edges[i][j]` for `i < j` (0-based): `e(E_i, E_j)`.
    edges: Vec<Vec<Option<HeightValue>>>,
    /// `closings[end][start]` for `start <= end`: `e(E_end, E_start ⊗ ω⁻¹)`,
    /// i.e. without the Serre degree shift.
    closings: Vec<Vec<Option<HeightValue>>>,
}

fn compute_height_tables(c: &Collection, oracle: &CohomologyOracle) -> Result<HeightTables> {
    let k = c.len();
    let canonical = DivisorClass::canonical(c.n());
    enum Task {
        Edge(usize, usize),
        Closing(usize, usize),
    }
    let mut tasks = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            tasks.push(Task::Edge(i, j));
        }
    }
    for end in 0..k {
        for start in 0..=end {
            tasks.push(Task::Closing(end, start));
        }
    }
    let computed: Vec<HeightValue> = tasks
        .par_iter()
        .map(|task| match task {
            Task::Edge(i, j) => oracle.relative_height(c.entry(*i), c.entry(*j)),
            Task::Closing(end, start) => {
                let twisted = c.entry(*start).try_sub(&canonical)?;
                oracle.relative_height(c.entry(*end), &twisted)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut tables = HeightTables {
        edges: vec![vec![None; k]; k],
        closings: vec![vec![None; k]; k],
    };
    for (task, value) in tasks.iter().zip(computed) {
        match task {
            Task::Edge(i, j) => tables.edges[*i][*j] = Some(value),
            Task::Closing(end, start) => tables.closings[*end][*start] = Some(value),
        }
    }
    Ok(tables)
}

/// Shortest-chain dynamic programming over all increasing chains. Chains
/// containing a `Top` term are skipped; ties between equal values are broken
/// towards the lexicographically smallest chain.
fn chain_minimum(
    tables: &HeightTables,
    closing: ClosingTerm,
) -> (HeightValue, Option<ChainReport>) {
    let k = tables.edges.len();
    let shift = match closing {
        ClosingTerm::SerreInverse => 2,
        ClosingTerm::AnticanonicalTwist => 0,
    };
    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut consider = |value: i64, chain: &[usize]| {
        let better = match &best {
            None => true,
            Some((bv, bc)) => value < *bv || (value == *bv && chain < bc.as_slice()),
        };
        if better {
            best = Some((value, chain.to_vec()));
        }
    };
    for start in 0..k {
        // partial[j] = min over chains start..=j of (Σ edges - p).
        let mut partial: Vec<Option<(i64, Vec<usize>)>> = vec![None; k];
        partial[start] = Some((0, vec![start]));
        for j in start + 1..k {
            for i in start..j {
                let Some((cost_i, chain_i)) = partial[i].clone() else { continue };
                let Some(HeightValue::Finite(edge)) = tables.edges[i][j] else { continue };
                let cand_cost = cost_i + edge - 1;
                let mut cand_chain = chain_i;
                cand_chain.push(j);
                let better = match &partial[j] {
                    None => true,
                    Some((cost_j, chain_j)) => {
                        cand_cost < *cost_j || (cand_cost == *cost_j && cand_chain < *chain_j)
                    }
                };
                if better {
                    partial[j] = Some((cand_cost, cand_chain));
                }
            }
        }
        for (end, entry) in partial.iter().enumerate().skip(start) {
            let Some((cost, chain)) = entry else { continue };
            let Some(HeightValue::Finite(raw)) = tables.closings[end][*chain.first().unwrap()]
            else {
                continue;
            };
            consider(cost + raw + shift, chain);
        }
    }
    match best {
        None => (HeightValue::Top, None),
        Some((value, chain)) => {
            let edges = chain
                .windows(2)
                .map(|w| EdgeHeight {
                    from: w[0] + 1,
                    to: w[1] + 1,
                    height: tables.edges[w[0]][w[1]].expect("edge on a finite chain"),
                })
                .collect();
            let end = *chain.last().unwrap();
            let start = chain[0];
            let closing_height = tables.closings[end][start]
                .expect("closing on a finite chain")
                .plus(shift);
            let report = ChainReport {
                chain: chain.iter().map(|&i| i + 1).collect(),
                edges,
                closing,
                closing_height,
                value: HeightValue::Finite(value),
            };
            (HeightValue::Finite(value), Some(report))
        }
    }
}

/// The pseudoheight: minimum over nonempty increasing chains of
/// `Σ e(E_a_i, E_a_{i+1}) + e(E_a_p, S⁻¹ E_a_0) - p`, with a witness chain
/// attaining the minimum. `Top` when every chain contains a vanishing pair.
pub fn pseudoheight(
    c: &Collection,
    oracle: &CohomologyOracle,
) -> Result<(HeightValue, Option<ChainReport>)> {
    let tables = compute_height_tables(c, oracle)?;
    Ok(chain_minimum(&tables, ClosingTerm::SerreInverse))
}

/// Same chain minimization with the anticanonical closing term; satisfies
/// `ph = ph_ac + 2` whenever both are finite.
pub fn anticanonical_pseudoheight(
    c: &Collection,
    oracle: &CohomologyOracle,
) -> Result<(HeightValue, Option<ChainReport>)> {
    let tables = compute_height_tables(c, oracle)?;
    Ok(chain_minimum(&tables, ClosingTerm::AnticanonicalTwist))
}

/// Evidence backing a not-full verdict.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct NotFullReport {
    pub not_full: bool,
    pub pseudoheight_ac: HeightValue,
    pub witness: Option<ChainReport>,
    /// All forward relative heights `e(E_i, E_j)`, `i < j`.
    pub forward_heights: Vec<EdgeHeight>,
}

/// An exceptional collection with `ph_ac > -dim X = -2` cannot be full
/// (`Top` counts as larger). The caller is responsible for the hypothesis
/// that the collection is exceptional.
pub fn not_full_criterion(c: &Collection, oracle: &CohomologyOracle) -> Result<NotFullReport> {
    let tables = compute_height_tables(c, oracle)?;
    let (value, witness) = chain_minimum(&tables, ClosingTerm::AnticanonicalTwist);
    let mut forward_heights = Vec::new();
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            forward_heights.push(EdgeHeight {
                from: i + 1,
                to: j + 1,
                height: tables.edges[i][j].expect("all edges computed"),
            });
        }
    }
    Ok(NotFullReport {
        not_full: value.exceeds(-2),
        pseudoheight_ac: value,
        witness,
        forward_heights,
    })
}

/// A nonvanishing `Ext` group violating the presilting condition.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct ExtViolation {
    /// 1-based collection indices of the source and target bundles.
    pub from: usize,
    pub to: usize,
    /// Cohomological degree of the nonvanishing group, in `{0, 1, 2}`.
    pub degree: usize,
    pub dimension: u64,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PresiltingReport {
    pub pass: bool,
    pub first_violation: Option<ExtViolation>,
}

/// Checks that `O(D_1)[s_1] ⊕ … ⊕ O(D_k)[s_k]` has no positive
/// self-extensions: for every ordered pair `(a, b)` and every `i > 0` the
/// group `Ext^(s_b - s_a + i)(O(D_a), O(D_b))` vanishes. Since only degrees
/// 0–2 can be nonzero, the check is `h^k(D_b - D_a) = 0` for
/// `k` from `max(0, s_b - s_a + 1)` to `2`. Returns the first violation in
/// row-major `(a, b, k)` order.
pub fn presilting_check(
    c: &Collection,
    shifts: &[i64],
    oracle: &CohomologyOracle,
) -> Result<PresiltingReport> {
    if shifts.len() != c.len() {
        return Err(Error::Parameter(format!(
            "{} shifts for a collection of length {}",
            shifts.len(),
            c.len()
        )));
    }
    for a in 0..c.len() {
        for b in 0..c.len() {
            let low = (shifts[b] - shifts[a] + 1).max(0);
            if low > 2 {
                continue;
            }
            let difference = c.entry(b).try_sub(c.entry(a))?;
            let coh = oracle.cohomology(&difference)?;
            for degree in low as usize..=2 {
                let dimension = coh.h(degree);
                if dimension != 0 {
                    return Ok(PresiltingReport {
                        pass: false,
                        first_violation: Some(ExtViolation {
                            from: a + 1,
                            to: b + 1,
                            degree,
                            dimension,
                        }),
                    });
                }
            }
        }
    }
    Ok(PresiltingReport { pass: true, first_violation: None })
}
