//! Integer model of the Picard lattice of a blow-up of the projective plane.
//!
//! The lattice is `Z H ⊕ Z E_1 ⊕ … ⊕ Z E_n`, where `H` is the pullback of a
//! line and the `E_i` are the exceptional classes over the blown-up points.
//! The intersection form is `H·H = 1`, `E_i·E_i = -1`, with all mixed
//! products zero. A class is stored as `(d; m_1, …, m_n)` and denotes
//! `dH - Σ m_i E_i`; this sign convention keeps the standard-form
//! inequalities on linear systems directly readable off the coefficients.
//!
//! All coefficient arithmetic is overflow-checked. An overflow surfaces as
//! [`Error::Overflow`](crate::Error::Overflow), never as silent wraparound.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{checked_add, checked_mul, checked_sub, Error, Result};
use crate::field;

/// A divisor class `dH - Σ m_i E_i` on the blow-up of the plane in `n` points.
///
/// The textual literal form is `"d;m1,m2,...,mn"` (whitespace-free, `n`
/// inferred from the list length), e.g. `"38;12,12,12,12,12,12,12,12,12,12"`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    d: i64,
    m: Vec<i64>,
}

impl DivisorClass {
    pub fn new(d: i64, m: Vec<i64>) -> Self {
        DivisorClass { d, m }
    }

    /// The zero class on the blow-up in `n` points.
    pub fn zero(n: usize) -> Self {
        DivisorClass { d: 0, m: vec![0; n] }
    }

    /// The hyperplane pullback `H`.
    pub fn hyperplane(n: usize) -> Self {
        DivisorClass { d: 1, m: vec![0; n] }
    }

    /// The exceptional class `E_i` over the `i`-th point (1-based).
    pub fn exceptional(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::Parameter(format!(
                "exceptional index {i} out of range 1..={n}"
            )));
        }
        let mut m = vec![0; n];
        m[i - 1] = -1; // E_i = 0*H - (-1)*E_i
        Ok(DivisorClass { d: 0, m })
    }

    /// The canonical class `K = -3H + Σ E_i`, i.e. `(-3; -1, …, -1)`.
    pub fn canonical(n: usize) -> Self {
        DivisorClass { d: -3, m: vec![-1; n] }
    }

    /// Number of blown-up points.
    pub fn n(&self) -> usize {
        self.m.len()
    }

    /// The `H`-coefficient.
    pub fn degree(&self) -> i64 {
        self.d
    }

    pub fn multiplicities(&self) -> &[i64] {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.d == 0 && self.m.iter().all(|&x| x == 0)
    }

    fn check_same_n(&self, other: &DivisorClass, op: &str) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "{op} requires equal point counts, got {} and {}",
                self.n(),
                other.n()
            )));
        }
        Ok(())
    }

    /// The intersection product `a·b = d_a d_b - Σ m_i(a) m_i(b)`.
    pub fn intersect(&self, other: &DivisorClass) -> Result<i64> {
        self.check_same_n(other, "intersection product")?;
        let mut acc = checked_mul(self.d, other.d, "intersection product")?;
        for (&a, &b) in self.m.iter().zip(&other.m) {
            let prod = checked_mul(a, b, "intersection product")?;
            acc = checked_sub(acc, prod, "intersection product")?;
        }
        Ok(acc)
    }

    pub fn self_intersection(&self) -> Result<i64> {
        self.intersect(self)
    }

    /// `D·K` for the canonical class of the same rank.
    pub fn canonical_degree(&self) -> Result<i64> {
        self.intersect(&DivisorClass::canonical(self.n()))
    }

    pub fn try_add(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_same_n(other, "divisor sum")?;
        let d = checked_add(self.d, other.d, "divisor sum")?;
        let m = self
            .m
            .iter()
            .zip(&other.m)
            .map(|(&a, &b)| checked_add(a, b, "divisor sum"))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass { d, m })
    }

    pub fn try_sub(&self, other: &DivisorClass) -> Result<DivisorClass> {
        self.check_same_n(other, "divisor difference")?;
        let d = checked_sub(self.d, other.d, "divisor difference")?;
        let m = self
            .m
            .iter()
            .zip(&other.m)
            .map(|(&a, &b)| checked_sub(a, b, "divisor difference"))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass { d, m })
    }

    pub fn try_neg(&self) -> Result<DivisorClass> {
        DivisorClass::zero(self.n()).try_sub(self)
    }

    pub fn try_scale(&self, k: i64) -> Result<DivisorClass> {
        let d = checked_mul(self.d, k, "divisor scaling")?;
        let m = self
            .m
            .iter()
            .map(|&a| checked_mul(a, k, "divisor scaling"))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass { d, m })
    }

    /// The same class with multiplicities sorted non-increasing, i.e. the
    /// image under the point permutation that orders the multiplicities.
    pub fn with_sorted_multiplicities(&self) -> DivisorClass {
        let mut m = self.m.clone();
        m.sort_unstable_by(|a, b| b.cmp(a));
        DivisorClass { d: self.d, m }
    }

    /// Coordinates in the basis `(H, E_1, …, E_n)`; note `e_i = -m_i`.
    pub(crate) fn coords(&self) -> Result<Vec<i64>> {
        let mut c = Vec::with_capacity(self.n() + 1);
        c.push(self.d);
        for &mi in &self.m {
            c.push(mi.checked_neg().ok_or(Error::Overflow("coordinate negation"))?);
        }
        Ok(c)
    }

    pub(crate) fn from_coords(coords: &[i64]) -> Result<DivisorClass> {
        let d = coords[0];
        let m = coords[1..]
            .iter()
            .map(|&e| e.checked_neg().ok_or(Error::Overflow("coordinate negation")))
            .collect::<Result<Vec<_>>>()?;
        Ok(DivisorClass { d, m })
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};", self.d)?;
        for (i, mi) in self.m.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{mi}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DivisorClass({self})")
    }
}

impl FromStr for DivisorClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<DivisorClass> {
        let semi = s.find(';').ok_or_else(|| Error::Parse {
            pos: s.len(),
            msg: "expected ';' after the degree".into(),
        })?;
        let d: i64 = s[..semi].parse().map_err(|_| Error::Parse {
            pos: 0,
            msg: format!("invalid degree integer {:?}", &s[..semi]),
        })?;
        let rest = &s[semi + 1..];
        if rest.is_empty() {
            return Ok(DivisorClass { d, m: Vec::new() });
        }
        let mut m = Vec::new();
        let mut pos = semi + 1;
        for part in rest.split(',') {
            let value: i64 = part.parse().map_err(|_| Error::Parse {
                pos,
                msg: format!("invalid multiplicity integer {part:?}"),
            })?;
            m.push(value);
            pos += part.len() + 1;
        }
        Ok(DivisorClass { d, m })
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct LiteralVisitor;
        impl Visitor<'_> for LiteralVisitor {
            type Value = DivisorClass;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a divisor literal of the form \"d;m1,...,mn\"")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<DivisorClass, E> {
                v.parse().map_err(|e| E::custom(format!("{e}")))
            }
        }
        deserializer.deserialize_str(LiteralVisitor)
    }
}

/// An integer isometry of the Picard lattice, stored as an
/// `(n+1) × (n+1)` matrix in the basis `(H, E_1, …, E_n)`.
///
/// Construction validates that the matrix preserves the intersection form on
/// the full basis Gram matrix; this forces the determinant to be ±1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LatticeIsometry {
    mat: Vec<Vec<i64>>,
}

impl LatticeIsometry {
    /// Validates and wraps a matrix acting on `(H, E_1, …, E_n)` coordinates.
    pub fn from_matrix(mat: Vec<Vec<i64>>) -> Result<Self> {
        let size = mat.len();
        if size == 0 || mat.iter().any(|row| row.len() != size) {
            return Err(Error::Parameter(
                "isometry matrix must be square and non-empty".into(),
            ));
        }
        // Gram check: pairing(M u, M v) = pairing(u, v) for all basis pairs,
        // where the basis Gram matrix is diag(1, -1, …, -1).
        for u in 0..size {
            for v in u..size {
                let mut acc: i64 = 0;
                for (r, row) in mat.iter().enumerate() {
                    let prod = checked_mul(row[u], row[v], "isometry Gram check")?;
                    acc = if r == 0 {
                        checked_add(acc, prod, "isometry Gram check")?
                    } else {
                        checked_sub(acc, prod, "isometry Gram check")?
                    };
                }
                let expected = match (u, v) {
                    (0, 0) => 1,
                    (a, b) if a == b => -1,
                    _ => 0,
                };
                if acc != expected {
                    return Err(Error::Parameter(format!(
                        "matrix does not preserve the intersection form at basis pair ({u}, {v})"
                    )));
                }
            }
        }
        Ok(LatticeIsometry { mat })
    }

    pub fn identity(n: usize) -> Self {
        let size = n + 1;
        let mut mat = vec![vec![0; size]; size];
        for (r, row) in mat.iter_mut().enumerate() {
            row[r] = 1;
        }
        LatticeIsometry { mat }
    }

    /// The involution that fixes the canonical class and negates its
    /// orthogonal complement: `v ↦ -v - 2(v·K)K`.
    ///
    /// Integral only when `K·K = -1`, i.e. `n = 10`; other ranks are
    /// rejected.
    pub fn canonical_involution(n: usize) -> Result<Self> {
        if n != 10 {
            return Err(Error::Parameter(format!(
                "the canonical involution needs K·K = -1, which holds only for n = 10 (got n = {n})"
            )));
        }
        let k = DivisorClass::canonical(n);
        Self::from_columns(n, |basis| {
            let twice_pairing = checked_mul(2, basis.intersect(&k)?, "involution")?;
            basis.try_neg()?.try_sub(&k.try_scale(twice_pairing)?)
        })
    }

    /// The reflection in the root `r = H - E_i - E_j - E_k` (indices 1-based,
    /// distinct): `v ↦ v + (v·r) r`. Fixes `K` and has determinant -1.
    pub fn cremona(n: usize, i: usize, j: usize, k: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Parameter(format!(
                "a Cremona reflection needs n >= 3 (got n = {n})"
            )));
        }
        if i == j || j == k || i == k {
            return Err(Error::Parameter(format!(
                "Cremona indices must be distinct, got ({i}, {j}, {k})"
            )));
        }
        for idx in [i, j, k] {
            if idx == 0 || idx > n {
                return Err(Error::Parameter(format!(
                    "Cremona index {idx} out of range 1..={n}"
                )));
            }
        }
        let mut root = DivisorClass::hyperplane(n);
        root.m[i - 1] = 1;
        root.m[j - 1] = 1;
        root.m[k - 1] = 1; // H - E_i - E_j - E_k
        Self::from_columns(n, |basis| {
            let pairing = basis.intersect(&root)?;
            basis.try_add(&root.try_scale(pairing)?)
        })
    }

    /// The isometry permuting the exceptional classes: `E_i ↦ E_{perm[i-1]}`.
    /// `perm` must be a permutation of `1..=n`.
    pub fn permutation(n: usize, perm: &[usize]) -> Result<Self> {
        if perm.len() != n {
            return Err(Error::Parameter(format!(
                "permutation must have length {n}, got {}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &image in perm {
            if image == 0 || image > n || seen[image - 1] {
                return Err(Error::Parameter(format!(
                    "not a permutation of 1..={n}: {perm:?}"
                )));
            }
            seen[image - 1] = true;
        }
        let size = n + 1;
        let mut mat = vec![vec![0i64; size]; size];
        mat[0][0] = 1;
        for (i, &image) in perm.iter().enumerate() {
            mat[image][i + 1] = 1;
        }
        LatticeIsometry::from_matrix(mat)
    }

    fn from_columns(
        n: usize,
        image: impl Fn(&DivisorClass) -> Result<DivisorClass>,
    ) -> Result<Self> {
        let size = n + 1;
        let mut mat = vec![vec![0i64; size]; size];
        let mut basis = Vec::with_capacity(size);
        basis.push(DivisorClass::hyperplane(n));
        for i in 1..=n {
            basis.push(DivisorClass::exceptional(n, i)?);
        }
        for (c, b) in basis.iter().enumerate() {
            let img = image(b)?;
            let coords = img.coords()?;
            for (r, &value) in coords.iter().enumerate() {
                mat[r][c] = value;
            }
        }
        LatticeIsometry::from_matrix(mat)
    }

    pub fn n(&self) -> usize {
        self.mat.len() - 1
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.mat
    }

    /// Matrix–vector product in the `(H, E_1, …, E_n)` basis.
    pub fn apply(&self, divisor: &DivisorClass) -> Result<DivisorClass> {
        if divisor.n() != self.n() {
            return Err(Error::Dimension(format!(
                "isometry acts on n = {}, divisor has n = {}",
                self.n(),
                divisor.n()
            )));
        }
        let x = divisor.coords()?;
        let size = self.mat.len();
        let mut y = vec![0i64; size];
        for (r, row) in self.mat.iter().enumerate() {
            let mut acc: i64 = 0;
            for (c, &entry) in row.iter().enumerate() {
                let prod = checked_mul(entry, x[c], "isometry application")?;
                acc = checked_add(acc, prod, "isometry application")?;
            }
            y[r] = acc;
        }
        DivisorClass::from_coords(&y)
    }

    pub fn compose(&self, other: &LatticeIsometry) -> Result<LatticeIsometry> {
        if self.n() != other.n() {
            return Err(Error::Dimension(format!(
                "cannot compose isometries of ranks {} and {}",
                self.n(),
                other.n()
            )));
        }
        let size = self.mat.len();
        let mut mat = vec![vec![0i64; size]; size];
        for (r, out_row) in mat.iter_mut().enumerate() {
            for (c, cell) in out_row.iter_mut().enumerate() {
                let mut acc: i64 = 0;
                for t in 0..size {
                    let prod = checked_mul(self.mat[r][t], other.mat[t][c], "isometry product")?;
                    acc = checked_add(acc, prod, "isometry product")?;
                }
                *cell = acc;
            }
        }
        LatticeIsometry::from_matrix(mat)
    }

    /// Exact determinant; always ±1 for a validated isometry.
    pub fn determinant(&self) -> Result<i64> {
        let m: Vec<Vec<i128>> = self
            .mat
            .iter()
            .map(|row| row.iter().map(|&x| x as i128).collect())
            .collect();
        Ok(field::bareiss_determinant(m)? as i64)
    }

    pub fn fixes_canonical(&self) -> Result<bool> {
        let k = DivisorClass::canonical(self.n());
        Ok(self.apply(&k)? == k)
    }
}

/// A class `C` with `C·C = -1` and `C·K = -1`; the numerical shadow of an
/// exceptional curve. The defining equations hold by construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MinusOneClass {
    class: DivisorClass,
}

impl MinusOneClass {
    pub fn new(class: DivisorClass) -> Result<Self> {
        let self_int = class.self_intersection()?;
        let k_deg = class.canonical_degree()?;
        if self_int != -1 || k_deg != -1 {
            return Err(Error::Parameter(format!(
                "class {class} has C·C = {self_int}, C·K = {k_deg}; both must be -1"
            )));
        }
        Ok(MinusOneClass { class })
    }

    pub fn class(&self) -> &DivisorClass {
        &self.class
    }

    pub fn into_class(self) -> DivisorClass {
        self.class
    }
}

/// All classes `C = (a; b_1, …, b_n)` with `0 <= a <= degree_bound`,
/// `C·C = -1` and `C·K = -1`, in lexicographic `(a, b)` order.
///
/// The bound is on the `H`-coefficient: for `n >= 10` the full set is
/// infinite, so a degree bound is what makes the enumeration total. The
/// defining equations pin the multiplicities to `Σ b_i = 3a - 1` and
/// `Σ b_i² = a² + 1`, which the search uses for pruning.
pub fn enumerate_minus_one_classes(n: usize, degree_bound: u32) -> Vec<MinusOneClass> {
    let mut found = Vec::new();
    let mut scratch = vec![0i64; n];
    for a in 0..=i64::from(degree_bound) {
        let sum = 3 * a - 1;
        let square_sum = a * a + 1;
        search_multiplicities(a, n, 0, sum, square_sum, &mut scratch, &mut found);
    }
    found.sort_by(|x, y| x.class.cmp(&y.class));
    found
}

fn search_multiplicities(
    a: i64,
    n: usize,
    idx: usize,
    sum: i64,
    square_sum: i64,
    scratch: &mut Vec<i64>,
    found: &mut Vec<MinusOneClass>,
) {
    if idx == n {
        if sum == 0 && square_sum == 0 {
            let class = DivisorClass::new(a, scratch.clone());
            found.push(
                MinusOneClass::new(class).expect("search solutions satisfy the defining equations"),
            );
        }
        return;
    }
    let remaining = (n - idx) as i64;
    // Squares and values agree mod 2, and Cauchy-Schwarz bounds the sum.
    if (square_sum - sum) % 2 != 0 || sum * sum > remaining * square_sum {
        return;
    }
    let limit = (square_sum as u64).isqrt() as i64;
    for b in -limit..=limit {
        scratch[idx] = b;
        search_multiplicities(a, n, idx + 1, sum - b, square_sum - b * b, scratch, found);
    }
    scratch[idx] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn div(text: &str) -> DivisorClass {
        text.parse().unwrap()
    }

    #[test]
    fn intersection_on_basis_vectors() {
        let h = DivisorClass::hyperplane(10);
        let e1 = DivisorClass::exceptional(10, 1).unwrap();
        let e2 = DivisorClass::exceptional(10, 2).unwrap();
        assert_eq!(h.intersect(&h).unwrap(), 1);
        assert_eq!(e1.intersect(&e1).unwrap(), -1);
        assert_eq!(e1.intersect(&e2).unwrap(), 0);
        assert_eq!(h.intersect(&e1).unwrap(), 0);
    }

    #[test]
    fn intersection_minus_f_with_canonical() {
        let minus_f = div("19;6,6,6,6,6,6,6,6,6,6");
        let k = DivisorClass::canonical(10);
        assert_eq!(minus_f.intersect(&k).unwrap(), 3); // -3*19 + 10*6
    }

    #[test]
    fn intersection_rejects_mismatched_rank() {
        let a = DivisorClass::zero(3);
        let b = DivisorClass::zero(4);
        assert!(matches!(a.intersect(&b), Err(Error::Dimension(_))));
    }

    #[test]
    fn intersection_overflow_is_loud() {
        let a = DivisorClass::new(i64::MAX, vec![]);
        assert!(matches!(a.intersect(&a), Err(Error::Overflow(_))));
    }

    #[test]
    fn canonical_self_intersection_is_nine_minus_n() {
        for (n, expected) in [(0usize, 9i64), (9, 0), (10, -1)] {
            let k = DivisorClass::canonical(n);
            assert_eq!(k.self_intersection().unwrap(), expected);
        }
        assert_eq!(DivisorClass::canonical(10), div("-3;-1,-1,-1,-1,-1,-1,-1,-1,-1,-1"));
    }

    #[test]
    fn involution_images_match_closed_forms() {
        let iota = LatticeIsometry::canonical_involution(10).unwrap();
        let e1 = DivisorClass::exceptional(10, 1).unwrap();
        let d1 = iota.apply(&e1).unwrap();
        assert_eq!(d1, div("-6;-1,-2,-2,-2,-2,-2,-2,-2,-2,-2"));

        let h = DivisorClass::hyperplane(10);
        let f = iota.apply(&h).unwrap();
        assert_eq!(f, div("-19;-6,-6,-6,-6,-6,-6,-6,-6,-6,-6"));

        let k = DivisorClass::canonical(10);
        assert_eq!(iota.apply(&k).unwrap(), k);

        // Involution: applying twice recovers the argument.
        assert_eq!(iota.apply(&d1).unwrap(), e1);
        // Linearity: 2H maps to 2F.
        let two_f = f.try_scale(2).unwrap();
        assert_eq!(iota.apply(&h.try_scale(2).unwrap()).unwrap(), two_f);
    }

    #[test]
    fn involution_rejects_other_ranks() {
        for n in [0usize, 3, 9, 11] {
            assert!(matches!(
                LatticeIsometry::canonical_involution(n),
                Err(Error::Parameter(_))
            ));
        }
    }

    #[test]
    fn identity_application_is_trivial() {
        let id = LatticeIsometry::identity(10);
        let d = div("5;1,2,3,0,0,-1,4,0,0,2");
        assert_eq!(id.apply(&d).unwrap(), d);
        assert_eq!(id.determinant().unwrap(), 1);
    }

    #[test]
    fn cremona_reflection_on_a_line_through_three_points() {
        let refl = LatticeIsometry::cremona(5, 1, 2, 3).unwrap();
        let line = div("1;1,1,1,0,0");
        assert_eq!(refl.apply(&line).unwrap(), div("-1;-1,-1,-1,0,0"));
        assert_eq!(refl.determinant().unwrap(), -1);
        assert!(refl.fixes_canonical().unwrap());
        // Reflections are involutions.
        let d = div("7;3,-1,2,5,0");
        assert_eq!(refl.apply(&refl.apply(&d).unwrap()).unwrap(), d);
    }

    #[test]
    fn cremona_coefficient_formulas() {
        let refl = LatticeIsometry::cremona(4, 1, 2, 3).unwrap();
        let d = div("5;3,2,1,4");
        // d' = 2d - m1 - m2 - m3, m_i' = d - m_j - m_k.
        assert_eq!(refl.apply(&d).unwrap(), div("4;2,1,0,4"));
    }

    #[test]
    fn cremona_rejects_bad_indices() {
        assert!(LatticeIsometry::cremona(5, 1, 1, 2).is_err());
        assert!(LatticeIsometry::cremona(5, 0, 1, 2).is_err());
        assert!(LatticeIsometry::cremona(5, 1, 2, 6).is_err());
        assert!(LatticeIsometry::cremona(2, 1, 2, 3).is_err());
    }

    #[test]
    fn permutation_moves_exceptional_classes() {
        let perm = LatticeIsometry::permutation(3, &[2, 3, 1]).unwrap();
        let e1 = DivisorClass::exceptional(3, 1).unwrap();
        assert_eq!(perm.apply(&e1).unwrap(), DivisorClass::exceptional(3, 2).unwrap());
        assert!(perm.fixes_canonical().unwrap());
        assert!(LatticeIsometry::permutation(3, &[1, 1, 2]).is_err());
    }

    #[test]
    fn from_matrix_rejects_non_isometries() {
        // Doubling H does not preserve the form.
        let mat = vec![vec![2, 0], vec![0, 1]];
        assert!(LatticeIsometry::from_matrix(mat).is_err());
    }

    #[test]
    fn minus_one_class_validation() {
        let e1 = DivisorClass::exceptional(4, 1).unwrap();
        assert!(MinusOneClass::new(e1).is_ok());
        assert!(MinusOneClass::new(DivisorClass::hyperplane(4)).is_err());
    }

    #[test]
    fn minus_one_enumeration_small_cases() {
        assert!(enumerate_minus_one_classes(0, 5).is_empty());

        let n3 = enumerate_minus_one_classes(3, 1);
        assert_eq!(n3.len(), 6); // three E_i and three H - E_i - E_j

        let n6 = enumerate_minus_one_classes(6, 2);
        assert_eq!(n6.len(), 27); // the lines on a cubic surface

        // Independent brute-force scan over the full coefficient box.
        let mut brute = Vec::new();
        for a in 0..=1i64 {
            let lim = a + 1;
            for b1 in -lim..=lim {
                for b2 in -lim..=lim {
                    for b3 in -lim..=lim {
                        let c = DivisorClass::new(a, vec![b1, b2, b3]);
                        if c.self_intersection().unwrap() == -1
                            && c.canonical_degree().unwrap() == -1
                        {
                            brute.push(c);
                        }
                    }
                }
            }
        }
        brute.sort();
        let fast: Vec<_> = n3.iter().map(|c| c.class().clone()).collect();
        assert_eq!(fast, brute);
    }

    #[test]
    fn divisor_literal_parsing() {
        assert_eq!(div("38;12,12,12,12,12,12,12,12,12,12").degree(), 38);
        assert_eq!(div("0;"), DivisorClass::zero(0));
        assert_eq!(div("-6;-1,-2"), DivisorClass::new(-6, vec![-1, -2]));

        let trailing: std::result::Result<DivisorClass, _> = "3;1,1,".parse();
        assert!(matches!(trailing, Err(Error::Parse { pos: 6, .. })));
        assert!(matches!(
            "nonsense".parse::<DivisorClass>(),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            "3; 1,1".parse::<DivisorClass>(),
            Err(Error::Parse { .. })
        ));
    }

    prop_compose! {
        fn arb_divisor(n: usize)(d in -50i64..=50, m in prop::collection::vec(-20i64..=20, n)) -> DivisorClass {
            DivisorClass::new(d, m)
        }
    }

    proptest! {
        #[test]
        fn intersection_is_symmetric_and_matches_formula(a in arb_divisor(6), b in arb_divisor(6)) {
            let ab = a.intersect(&b).unwrap();
            prop_assert_eq!(ab, b.intersect(&a).unwrap());
            let expected = a.degree() * b.degree()
                - a.multiplicities().iter().zip(b.multiplicities()).map(|(x, y)| x * y).sum::<i64>();
            prop_assert_eq!(ab, expected);
        }

        #[test]
        fn intersection_is_bilinear(a in arb_divisor(5), b in arb_divisor(5), c in arb_divisor(5)) {
            let lhs = a.try_add(&b).unwrap().intersect(&c).unwrap();
            let rhs = a.intersect(&c).unwrap() + b.intersect(&c).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn involution_preserves_pairing(v in arb_divisor(10), w in arb_divisor(10)) {
            let iota = LatticeIsometry::canonical_involution(10).unwrap();
            let iv = iota.apply(&v).unwrap();
            let iw = iota.apply(&w).unwrap();
            prop_assert_eq!(iv.intersect(&iw).unwrap(), v.intersect(&w).unwrap());
            prop_assert_eq!(iota.apply(&iv).unwrap(), v);
        }

        #[test]
        fn literal_round_trip(d in arb_divisor(7)) {
            let text = d.to_string();
            let back: DivisorClass = text.parse().unwrap();
            prop_assert_eq!(back, d);
        }

        #[test]
        fn enumerated_classes_satisfy_defining_equations(bound in 0u32..=4) {
            for c in enumerate_minus_one_classes(5, bound) {
                prop_assert_eq!(c.class().self_intersection().unwrap(), -1);
                prop_assert_eq!(c.class().canonical_degree().unwrap(), -1);
                prop_assert!(c.class().degree() <= i64::from(bound));
            }
        }
    }
}
