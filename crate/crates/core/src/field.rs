//! Exact dense linear algebra: rank over word-sized prime fields and a
//! fraction-free integer determinant.
//!
//! The rank computation is the workhorse behind the interpolation oracle, so
//! multiplication is specialized for the default Mersenne modulus `2^31 - 1`
//! (shift-and-fold reduction) with a plain `%` fallback for other primes.

use crate::error::{Error, Result};

/// The Mersenne prime `2^31 - 1`, the default oracle modulus.
pub const MERSENNE31: u64 = (1 << 31) - 1;

/// Deterministic Miller–Rabin primality test for `u64`.
///
/// The witness set 2, 3, 5, …, 37 is known to be exact for all 64-bit
/// integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &q in &WITNESSES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod(a: u64, b: u64, modulus: u64) -> u64 {
    ((u128::from(a) * u128::from(b)) % u128::from(modulus)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, modulus);
        }
        base = mul_mod(base, base, modulus);
        exp >>= 1;
    }
    acc
}

/// Arithmetic in the prime field with `p` elements, `p < 2^62`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parameter(format!("{p} is not prime")));
        }
        if p >= 1 << 62 {
            return Err(Error::Parameter(format!(
                "prime modulus {p} exceeds the supported range (< 2^62)"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(self) -> u64 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        self.muladd(0, a, b)
    }

    /// `(acc + a·b) mod p` with `acc, a, b` already reduced.
    #[inline]
    pub fn muladd(self, acc: u64, a: u64, b: u64) -> u64 {
        if self.p == MERSENNE31 {
            // All operands < 2^31, so acc + a*b < 2^62 + 2^31 fits in u64.
            reduce_m31(acc + a * b)
        } else if self.p < 1 << 31 {
            (acc + a * b) % self.p
        } else {
            ((u128::from(acc) + u128::from(a) * u128::from(b)) % u128::from(self.p)) as u64
        }
    }

    pub fn pow(self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse of a nonzero element.
    pub fn inv(self, a: u64) -> u64 {
        debug_assert!(a != 0 && a < self.p);
        self.pow(a, self.p - 2)
    }

    /// Reduces an arbitrary signed integer into the field.
    pub fn from_i64(self, x: i64) -> u64 {
        x.rem_euclid(self.p as i64) as u64
    }
}

/// Folds `x < 2^62 + 2^31` modulo `2^31 - 1` using `2^31 ≡ 1`.
#[inline]
fn reduce_m31(x: u64) -> u64 {
    let folded = (x >> 31) + (x & MERSENNE31);
    let folded = (folded >> 31) + (folded & MERSENNE31);
    if folded >= MERSENNE31 {
        folded - MERSENNE31
    } else {
        folded
    }
}

/// Rank of a dense matrix over `field`, by in-place Gaussian elimination.
/// Entries must already be reduced modulo the field characteristic.
pub fn matrix_rank(rows: &mut [Vec<u64>], field: PrimeField) -> usize {
    let nrows = rows.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = rows[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]);
        for x in rows[rank][col..].iter_mut() {
            *x = field.mul(*x, inv);
        }
        let (upper, lower) = rows.split_at_mut(rank + 1);
        let pivot_row = &upper[rank][col..];
        for row in lower {
            let factor = row[col];
            if factor != 0 {
                let neg = field.neg(factor);
                for (x, &pv) in row[col..].iter_mut().zip(pivot_row) {
                    *x = field.muladd(*x, neg, pv);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Exact determinant of a square integer matrix by fraction-free (Bareiss)
/// elimination. Intermediate values are checked `i128`; an overflow is
/// reported rather than wrapped.
pub fn bareiss_determinant(mut m: Vec<Vec<i128>>) -> Result<i128> {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return Err(Error::Parameter("determinant of a non-square matrix".into()));
    }
    if n == 0 {
        return Ok(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return Ok(0);
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let lhs = m[k][k]
                    .checked_mul(m[i][j])
                    .ok_or(Error::Overflow("exact determinant"))?;
                let rhs = m[i][k]
                    .checked_mul(m[k][j])
                    .ok_or(Error::Overflow("exact determinant"))?;
                let num = lhs.checked_sub(rhs).ok_or(Error::Overflow("exact determinant"))?;
                debug_assert_eq!(num % prev, 0, "Bareiss division must be exact");
                m[i][j] = num / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_spot_checks() {
        assert!(!is_prime(0));
        assert!(!is_prime(1));
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(!is_prime(4));
        assert!(is_prime(MERSENNE31));
        assert!(!is_prime(561)); // Carmichael
        assert!(!is_prime((1 << 31) - 3));
        assert!(is_prime(2_147_483_629));
        assert!(is_prime(4_611_686_018_427_387_847)); // largest prime < 2^62
    }

    #[test]
    fn field_construction_guards() {
        assert!(PrimeField::new(6).is_err());
        assert!(PrimeField::new(MERSENNE31).is_ok());
        assert!(PrimeField::new(1 << 62).is_err());
    }

    #[test]
    fn arithmetic_in_small_field() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.add(5, 4), 2);
        assert_eq!(f.sub(2, 5), 4);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(3), 5);
        assert_eq!(f.pow(3, 6), 1);
        assert_eq!(f.from_i64(-1), 6);
    }

    #[test]
    fn mersenne_reduction_agrees_with_modulo() {
        let f = PrimeField::new(MERSENNE31).unwrap();
        let samples = [0u64, 1, 2, MERSENNE31 - 1, 12345, 2_000_000_000, 7];
        for &a in &samples {
            for &b in &samples {
                let expected = mul_mod(a, b, MERSENNE31);
                assert_eq!(f.mul(a, b), expected);
                assert_eq!(f.muladd(5, a, b), (expected + 5) % MERSENNE31);
            }
        }
    }

    #[test]
    fn rank_of_known_matrices() {
        let f = PrimeField::new(7).unwrap();
        let mut identity = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        assert_eq!(matrix_rank(&mut identity, f), 3);

        // Second row is twice the first.
        let mut dependent = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 2]];
        assert_eq!(matrix_rank(&mut dependent, f), 2);

        let mut zero = vec![vec![0u64; 4]; 3];
        assert_eq!(matrix_rank(&mut zero, f), 0);
        assert_eq!(matrix_rank(&mut [][..], f), 0);

        // Wide matrix with rank bounded by the row count.
        let mut wide = vec![vec![1, 1, 1, 1, 1], vec![1, 2, 3, 4, 5]];
        assert_eq!(matrix_rank(&mut wide, f), 2);
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(bareiss_determinant(vec![]).unwrap(), 1);
        assert_eq!(bareiss_determinant(vec![vec![5]]).unwrap(), 5);
        assert_eq!(
            bareiss_determinant(vec![vec![1, 2], vec![3, 4]]).unwrap(),
            -2
        );
        // Needs a row swap.
        assert_eq!(
            bareiss_determinant(vec![vec![0, 1], vec![1, 0]]).unwrap(),
            -1
        );
        assert_eq!(
            bareiss_determinant(vec![vec![2, 0, 1], vec![1, 1, 0], vec![0, 3, 1]]).unwrap(),
            5
        );
        assert_eq!(
            bareiss_determinant(vec![vec![1, 2], vec![2, 4]]).unwrap(),
            0
        );
    }

    #[test]
    fn determinant_overflow_is_loud() {
        let big = i128::MAX / 2;
        let m = vec![vec![big, big], vec![big, -big]];
        assert!(matches!(
            bareiss_determinant(m),
            Err(Error::Overflow(_))
        ));
    }
}
