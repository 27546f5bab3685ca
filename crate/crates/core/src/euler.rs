//! Riemann–Roch Euler characteristics, the Euler pairing on line bundles,
//! numerical exceptionality, and the K-group basis test.

use serde::Serialize;

use crate::error::{checked_add, checked_sub, Error, Result};
use crate::field::bareiss_determinant;
use crate::lattice::DivisorClass;

/// `χ(O(D)) = 1 + (D·D - D·K) / 2` by Riemann–Roch on a rational surface.
///
/// The numerator is even for every integral class; an odd numerator would
/// mean the intersection form is broken and is reported as a consistency
/// error.
pub fn chi_divisor(divisor: &DivisorClass) -> Result<i64> {
    let self_int = divisor.self_intersection()?;
    let k_deg = divisor.canonical_degree()?;
    let numerator = checked_sub(self_int, k_deg, "Riemann-Roch numerator")?;
    if numerator % 2 != 0 {
        return Err(Error::Consistency(format!(
            "Riemann-Roch numerator D·D - D·K = {numerator} is odd for {divisor}"
        )));
    }
    checked_add(1, numerator / 2, "Riemann-Roch value")
}

/// The Euler pairing `χ(O(A), O(B)) = χ(O(B - A))` of two line bundles.
pub fn euler_pairing(a: &DivisorClass, b: &DivisorClass) -> Result<i64> {
    chi_divisor(&b.try_sub(a)?)
}

/// An ordered list of divisor classes, read as the line bundles
/// `(O(D_1), …, O(D_k))`. Entries share the same point count and the list is
/// non-empty.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Collection {
    entries: Vec<DivisorClass>,
    labels: Option<Vec<String>>,
}

impl Collection {
    pub fn new(entries: Vec<DivisorClass>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(Error::Parameter("a collection must be non-empty".into()));
        };
        let n = first.n();
        if entries.iter().any(|e| e.n() != n) {
            return Err(Error::Dimension(
                "all entries of a collection must share the same point count".into(),
            ));
        }
        Ok(Collection { entries, labels: None })
    }

    pub fn with_labels(entries: Vec<DivisorClass>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != entries.len() {
            return Err(Error::Parameter(format!(
                "{} labels for {} entries",
                labels.len(),
                entries.len()
            )));
        }
        let mut collection = Collection::new(entries)?;
        collection.labels = Some(labels);
        Ok(collection)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction
    }

    pub fn n(&self) -> usize {
        self.entries[0].n()
    }

    pub fn entries(&self) -> &[DivisorClass] {
        &self.entries
    }

    /// 0-based access.
    pub fn entry(&self, i: usize) -> &DivisorClass {
        &self.entries[i]
    }

    /// Display name of the `i`-th entry (0-based); falls back to the divisor
    /// literal when no label was attached.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(labels) => labels[i].clone(),
            None => format!("O({})", self.entries[i]),
        }
    }

    /// Twists every entry by `t`, i.e. maps `O(D_i)` to `O(D_i + t)`.
    pub fn twist(&self, t: &DivisorClass) -> Result<Collection> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.try_add(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Collection { entries, labels: self.labels.clone() })
    }
}

/// The matrix of Euler pairings `χ(O(D_i), O(D_j))` of a collection.
/// Serializes to JSON as a plain list of rows of integers.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
#[serde(transparent)]
pub struct GramMatrix {
    chi: Vec<Vec<i64>>,
}

impl GramMatrix {
    pub fn size(&self) -> usize {
        self.chi.len()
    }

    /// 0-based access to `χ(O(D_i), O(D_j))`.
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.chi[i][j]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.chi
    }
}

pub fn gram_matrix(collection: &Collection) -> Result<GramMatrix> {
    let k = collection.len();
    let mut chi = vec![vec![0i64; k]; k];
    for (i, row) in chi.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = euler_pairing(collection.entry(i), collection.entry(j))?;
        }
    }
    Ok(GramMatrix { chi })
}

/// A Gram entry that violates numerical exceptionality. Row and column are
/// 1-based, matching the usual indexing of collections.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct GramViolation {
    pub row: usize,
    pub col: usize,
    pub value: i64,
}

/// Checks that the Gram matrix is unit upper-triangular: `χ = 1` on the
/// diagonal and `χ = 0` strictly below it. Returns `None` when the collection
/// is numerically exceptional, otherwise the first offending entry in
/// row-major order.
pub fn is_numerically_exceptional(collection: &Collection) -> Result<Option<GramViolation>> {
    let gram = gram_matrix(collection)?;
    for i in 0..gram.size() {
        for j in 0..=i {
            let value = gram.entry(i, j);
            let expected = if i == j { 1 } else { 0 };
            if value != expected {
                return Ok(Some(GramViolation { row: i + 1, col: j + 1, value }));
            }
        }
    }
    Ok(None)
}

/// The class of a line bundle in the K-group, in `(rank, c_1, χ)`
/// coordinates. Flattened, this is an integer vector of length `n + 3`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct K0Vector {
    pub rank: i64,
    pub c1: DivisorClass,
    pub chi: i64,
}

impl K0Vector {
    /// `[rank, d, e_1, …, e_n, χ]` with `e_i` the coefficient of `E_i`.
    pub fn flatten(&self) -> Result<Vec<i64>> {
        let mut v = Vec::with_capacity(self.c1.n() + 3);
        v.push(self.rank);
        v.extend(self.c1.coords()?);
        v.push(self.chi);
        Ok(v)
    }
}

pub fn k0_vector(divisor: &DivisorClass) -> Result<K0Vector> {
    Ok(K0Vector { rank: 1, c1: divisor.clone(), chi: chi_divisor(divisor)? })
}

/// Outcome of the maximal-length test: do the K-group classes of the
/// collection form a basis of `Z^(n+3)`?
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum BasisVerdict {
    /// The stacked vectors are unimodular.
    Basis { determinant: i64 },
    /// Square but not unimodular.
    NotUnimodular { determinant: i128 },
    /// Fewer or more than `n + 3` vectors cannot be a basis.
    WrongLength { expected: usize, actual: usize },
}

impl BasisVerdict {
    pub fn is_basis(&self) -> bool {
        matches!(self, BasisVerdict::Basis { .. })
    }
}

/// Stacks the `(rank, c_1, χ)` vectors of the collection into a square
/// integer matrix and tests whether its exact determinant is ±1.
pub fn is_maximal_length_basis(collection: &Collection) -> Result<BasisVerdict> {
    let expected = collection.n() + 3;
    if collection.len() != expected {
        return Ok(BasisVerdict::WrongLength { expected, actual: collection.len() });
    }
    let mut rows = Vec::with_capacity(expected);
    for entry in collection.entries() {
        let flat = k0_vector(entry)?.flatten()?;
        rows.push(flat.into_iter().map(i128::from).collect::<Vec<_>>());
    }
    let determinant = bareiss_determinant(rows)?;
    if determinant == 1 || determinant == -1 {
        Ok(BasisVerdict::Basis { determinant: determinant as i64 })
    } else {
        Ok(BasisVerdict::NotUnimodular { determinant })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeIsometry;
    use proptest::prelude::*;

    fn div(text: &str) -> DivisorClass {
        text.parse().unwrap()
    }

    #[test]
    fn chi_of_basic_classes() {
        assert_eq!(chi_divisor(&DivisorClass::zero(10)).unwrap(), 1);
        assert_eq!(chi_divisor(&DivisorClass::hyperplane(10)).unwrap(), 3);
        assert_eq!(chi_divisor(&div("19;6,6,6,6,6,6,6,6,6,6")).unwrap(), 0);
        // iota(E_1) has D·D = D·K = -1.
        assert_eq!(chi_divisor(&div("-6;-1,-2,-2,-2,-2,-2,-2,-2,-2,-2")).unwrap(), 1);
    }

    #[test]
    fn euler_pairing_examples() {
        let iota = LatticeIsometry::canonical_involution(10).unwrap();
        let f = iota.apply(&DivisorClass::hyperplane(10)).unwrap();
        let two_f = f.try_scale(2).unwrap();
        assert_eq!(euler_pairing(&two_f, &f).unwrap(), 0);
        assert_eq!(euler_pairing(&f, &two_f).unwrap(), 3);
        assert_eq!(euler_pairing(&f, &f).unwrap(), 1);
        assert_eq!(euler_pairing(&DivisorClass::zero(10), &DivisorClass::zero(10)).unwrap(), 1);
    }

    #[test]
    fn collection_validation() {
        assert!(Collection::new(vec![]).is_err());
        let mixed = vec![DivisorClass::zero(3), DivisorClass::zero(4)];
        assert!(matches!(Collection::new(mixed), Err(Error::Dimension(_))));
        let ok = Collection::new(vec![DivisorClass::zero(3)]).unwrap();
        assert_eq!(ok.label(0), "O(0;0,0,0)");
    }

    #[test]
    fn gram_of_singleton_structure_sheaf() {
        let c = Collection::new(vec![DivisorClass::zero(10)]).unwrap();
        let gram = gram_matrix(&c).unwrap();
        assert_eq!(gram.rows(), &[vec![1]]);
        assert!(is_numerically_exceptional(&c).unwrap().is_none());
    }

    #[test]
    fn anticanonical_pair_is_not_numerically_exceptional() {
        let n = 10;
        let minus_k = DivisorClass::canonical(n).try_neg().unwrap();
        let c = Collection::new(vec![DivisorClass::zero(n), minus_k]).unwrap();
        let violation = is_numerically_exceptional(&c).unwrap().unwrap();
        assert_eq!(violation, GramViolation { row: 2, col: 1, value: 1 }); // χ(K) = 1
    }

    #[test]
    fn k0_vector_of_zero_class() {
        let v = k0_vector(&DivisorClass::zero(2)).unwrap();
        assert_eq!(v.flatten().unwrap(), vec![1, 0, 0, 0, 1]);
    }

    #[test]
    fn wrong_length_cannot_be_a_basis() {
        let c = Collection::new(vec![DivisorClass::zero(10)]).unwrap();
        assert_eq!(
            is_maximal_length_basis(&c).unwrap(),
            BasisVerdict::WrongLength { expected: 13, actual: 1 }
        );
    }

    #[test]
    fn gram_serializes_as_rows() {
        let c = Collection::new(vec![DivisorClass::zero(1), DivisorClass::hyperplane(1)]).unwrap();
        let gram = gram_matrix(&c).unwrap();
        let json = serde_json::to_string(&gram).unwrap();
        assert_eq!(json, "[[1,3],[0,1]]");
    }

    prop_compose! {
        fn arb_divisor(n: usize)(d in -30i64..=30, m in prop::collection::vec(-12i64..=12, n)) -> DivisorClass {
            DivisorClass::new(d, m)
        }
    }

    proptest! {
        #[test]
        fn serre_symmetry(d in arb_divisor(10)) {
            let k = DivisorClass::canonical(10);
            let dual = k.try_sub(&d).unwrap();
            prop_assert_eq!(chi_divisor(&d).unwrap(), chi_divisor(&dual).unwrap());
        }

        #[test]
        fn chi_is_invariant_under_canonical_isometries(d in arb_divisor(10), which in 0usize..3) {
            let iso = match which {
                0 => LatticeIsometry::canonical_involution(10).unwrap(),
                1 => LatticeIsometry::cremona(10, 1, 2, 3).unwrap(),
                _ => LatticeIsometry::permutation(10, &[2, 1, 3, 4, 5, 6, 7, 8, 9, 10]).unwrap(),
            };
            prop_assert!(iso.fixes_canonical().unwrap());
            prop_assert_eq!(chi_divisor(&iso.apply(&d).unwrap()).unwrap(), chi_divisor(&d).unwrap());
        }

        #[test]
        fn exceptionality_is_twist_invariant(
            ds in prop::collection::vec(arb_divisor(4), 1..5),
            t in arb_divisor(4),
        ) {
            let c = Collection::new(ds).unwrap();
            let twisted = c.twist(&t).unwrap();
            prop_assert_eq!(gram_matrix(&c).unwrap(), gram_matrix(&twisted).unwrap());
            prop_assert_eq!(
                is_numerically_exceptional(&c).unwrap(),
                is_numerically_exceptional(&twisted).unwrap()
            );
        }
    }
}
