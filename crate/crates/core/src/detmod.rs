//! Determinants of matrices of integer power series, truncated at `t^n`.
//!
//! Small matrices use cofactor expansion over the integers. Larger ones are
//! reduced modulo word-sized primes, eliminated in `F_p[[t]]`, and lifted back
//! by the Chinese remainder theorem under an a priori coefficient bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::rat;

/// Primes that may divide the constant-term determinant before giving up.
const MAX_UNLUCKY: usize = 64;

/// Matrices up to this size are expanded by cofactors.
pub const COFACTOR_MAX: usize = 4;

/// A square matrix whose entries are integer series `sum a_t t^t`, `t < n`.
pub type SeriesMatrix = Vec<Vec<Vec<BigInt>>>;

fn mul_int_series(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn cofactor_det(m: &[Vec<Vec<BigInt>>], rows: &[usize], col: usize, n: usize) -> Vec<BigInt> {
    if rows.len() == 1 {
        return m[rows[0]][col].clone();
    }
    let mut acc = vec![BigInt::zero(); n];
    for (pos, &r) in rows.iter().enumerate() {
        let rest: Vec<usize> = rows.iter().copied().filter(|&x| x != r).collect();
        let minor = cofactor_det(m, &rest, col + 1, n);
        let term = mul_int_series(&m[r][col], &minor, n);
        for (a, t) in acc.iter_mut().zip(term) {
            if pos % 2 == 0 {
                *a += t;
            } else {
                *a -= t;
            }
        }
    }
    acc
}

/// Upper bound on every coefficient of the determinant below `t^n`:
/// `k!` times the coefficients of the product of the row majorants.
fn coefficient_bound(m: &SeriesMatrix, n: usize) -> BigInt {
    let mut prod = vec![BigInt::zero(); n];
    if n == 0 {
        return BigInt::zero();
    }
    prod[0] = BigInt::one();
    for row in m {
        let majorant: Vec<BigInt> = (0..n)
            .map(|t| row.iter().map(|e| e[t].abs()).max().unwrap_or_default())
            .collect();
        prod = mul_int_series(&prod, &majorant, n);
    }
    let max = prod.into_iter().max().unwrap_or_default();
    max * rat::factorial(m.len() as u64)
}

fn mul_mod_series(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; n];
    let first = a.iter().position(|&x| x != 0).unwrap_or(n);
    for (t, o) in out.iter_mut().enumerate().skip(first) {
        let mut acc: u128 = 0;
        for i in first..=t {
            acc += a[i] as u128 * b[t - i] as u128;
        }
        *o = (acc % p as u128) as u64;
    }
    out
}

fn inv_mod_series(a: &[u64], n: usize, p: u64) -> Vec<u64> {
    let inv0 = rat::inv_mod(a[0], p);
    let mut out = vec![0u64; n];
    out[0] = inv0;
    for t in 1..n {
        let mut acc: u128 = 0;
        for j in 1..=t {
            acc += a[j] as u128 * out[t - j] as u128;
        }
        let s = (acc % p as u128) as u64;
        out[t] = rat::mul_mod(p - s, inv0, p) % p;
    }
    out
}

fn reduce(x: &BigInt, p: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap_or(0)
}

/// Determinant modulo `p`; `None` when the constant-term matrix is singular mod `p`.
fn det_mod_p(m: &SeriesMatrix, n: usize, p: u64) -> Option<Vec<u64>> {
    let k = m.len();
    let mut a: Vec<Vec<Vec<u64>>> = m
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| e.iter().map(|x| reduce(x, p)).collect())
                .collect()
        })
        .collect();
    let mut det = vec![0u64; n];
    det[0] = 1;
    let mut negate = false;
    for c in 0..k {
        let r = (c..k).find(|&r| a[r][c][0] != 0)?;
        if r != c {
            a.swap(r, c);
            negate = !negate;
        }
        det = mul_mod_series(&det, &a[c][c], n, p);
        let inv = inv_mod_series(&a[c][c], n, p);
        let (top, bottom) = a.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in bottom.iter_mut() {
            if row[c].iter().all(|&x| x == 0) {
                continue;
            }
            let f = mul_mod_series(&row[c], &inv, n, p);
            for j in c + 1..k {
                let prod = mul_mod_series(&f, &pivot_row[j], n, p);
                for (x, y) in row[j].iter_mut().zip(prod) {
                    *x = if *x >= y { *x - y } else { *x + p - y };
                }
            }
        }
    }
    if negate {
        for x in det.iter_mut() {
            *x = (p - *x) % p;
        }
    }
    Some(det)
}

/// Primes below `2^31`, descending.
fn primes_from_top() -> impl Iterator<Item = u64> {
    (1u64 << 20..(1u64 << 31))
        .rev()
        .filter(|&x| rat::is_prime(x))
}

/// Determinant of a square matrix of integer series, truncated at `t^n`.
/// Matrices larger than [`COFACTOR_MAX`] must have a nonsingular constant-term matrix.
pub fn series_det(m: &SeriesMatrix, n: usize, exec: Exec) -> Result<Vec<BigInt>> {
    let k = m.len();
    if k == 0 {
        let mut one = vec![BigInt::zero(); n];
        if n > 0 {
            one[0] = BigInt::one();
        }
        return Ok(one);
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if k <= COFACTOR_MAX {
        let rows: Vec<usize> = (0..k).collect();
        return Ok(cofactor_det(m, &rows, 0, n));
    }
    modular_det(m, n, exec)
}

/// Multimodular determinant; fails when the constant-term matrix is singular.
pub fn modular_det(m: &SeriesMatrix, n: usize, exec: Exec) -> Result<Vec<BigInt>> {
    let bound = coefficient_bound(m, n);
    let target: BigInt = bound * 2 + 1;
    let mut modulus = BigInt::one();
    let mut residues = vec![BigInt::zero(); n];
    let mut primes = primes_from_top();
    let mut unlucky = 0;
    while modulus <= target {
        if unlucky > MAX_UNLUCKY {
            return Err(Error::InvalidArgument(
                "constant-term matrix of the determinant is singular".into(),
            ));
        }
        let bits = (&target / &modulus).bits() as usize;
        let batch: Vec<u64> = primes.by_ref().take(bits / 30 + 1).collect();
        let results = par::map(exec, batch.clone(), |p| det_mod_p(m, n, p));
        for (p, r) in batch.into_iter().zip(results) {
            let Some(r) = r else {
                unlucky += 1;
                continue;
            };
            // Garner step: x + M * ((r - x) / M mod p)
            let pb = BigInt::from(p);
            let m_inv = rat::inv_mod(reduce(&modulus, p), p);
            for (x, rt) in residues.iter_mut().zip(r) {
                let xr = reduce(x, p);
                let diff = (rt + p - xr) % p;
                let c = rat::mul_mod(diff, m_inv, p);
                if c != 0 {
                    *x += &modulus * BigInt::from(c);
                }
            }
            modulus *= pb;
        }
    }
    let half = &modulus >> 1;
    Ok(residues
        .into_iter()
        .map(|x| if x > half { x - &modulus } else { x })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_matrix(k: usize, n: usize, seed: u64) -> SeriesMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        (0..n)
                            .map(|t| {
                                // keep the constant-term matrix nonsingular
                                let base = if t == 0 && i == j {
                                    1_000_000_007i64
                                } else {
                                    0
                                };
                                BigInt::from(
                                    base + rng.gen_range(-1_000_000_000_000i64..1_000_000_000_000),
                                )
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn modular_matches_cofactor() {
        for k in 1..=4 {
            let m = random_matrix(k, 8, k as u64);
            let rows: Vec<usize> = (0..k).collect();
            let exact = cofactor_det(&m, &rows, 0, 8);
            assert_eq!(
                modular_det(&m, 8, Exec::Sequential).unwrap(),
                exact,
                "k={k}"
            );
            assert_eq!(modular_det(&m, 8, Exec::Parallel).unwrap(), exact, "k={k}");
        }
    }

    #[test]
    fn pivot_needs_row_swap() {
        // [[t, 1], [1, t]] has determinant t^2 - 1
        let t = |c0: i64, c1: i64| vec![BigInt::from(c0), BigInt::from(c1), BigInt::zero()];
        let m = vec![vec![t(0, 1), t(1, 0)], vec![t(1, 0), t(0, 1)]];
        let want = vec![BigInt::from(-1), BigInt::zero(), BigInt::one()];
        assert_eq!(modular_det(&m, 3, Exec::Sequential).unwrap(), want);
        assert_eq!(series_det(&m, 3, Exec::Sequential).unwrap(), want);
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(
            series_det(&Vec::new(), 2, Exec::Sequential).unwrap(),
            vec![BigInt::one(), BigInt::zero()]
        );
    }

    #[test]
    fn singular_constant_term_is_reported() {
        let t = |c0: i64, c1: i64| vec![BigInt::from(c0), BigInt::from(c1)];
        let m = vec![vec![t(0, 1), t(0, 2)], vec![t(1, 0), t(1, 1)]];
        assert!(modular_det(&m, 2, Exec::Sequential).is_err());
    }
}
