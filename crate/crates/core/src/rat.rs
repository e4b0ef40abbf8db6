//! Small helpers around exact rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `a`, `-a` or `a/b` into a reduced rational.
pub fn parse(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// `p/q` or `p` when the denominator is one.
pub fn show(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn denom_u64(r: &BigRational) -> Option<u64> {
    r.denom().to_u64()
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// Smallest integer `>= r`.
pub fn ceil(r: &BigRational) -> BigInt {
    r.ceil().to_integer()
}

pub fn floor(r: &BigRational) -> BigInt {
    r.floor().to_integer()
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `a (a-1) ... (a-n+1)` with exact rational `a`.
pub fn falling_factorial(a: &BigRational, n: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut cur = a.clone();
    for _ in 0..n {
        acc *= &cur;
        cur -= BigRational::one();
    }
    acc
}

/// Reduces `r` modulo the prime `p`; `None` when `p` divides the denominator.
pub fn mod_p(r: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = r.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = r.numer().mod_floor(&pb).to_u64().unwrap_or(0);
    let den = den.to_u64().unwrap_or(0);
    Some(mul_mod(num, inv_mod(den, p), p))
}

pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
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

pub fn abs(r: &BigRational) -> BigRational {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_show() {
        assert_eq!(parse("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse("7").unwrap(), int(7));
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
        assert_eq!(show(&frac(11, 60)), "11/60");
        assert_eq!(show(&int(-4)), "-4");
    }

    #[test]
    fn residues() {
        assert_eq!(mod_p(&frac(-1, 18), 5), Some(3));
        assert_eq!(mod_p(&frac(1, 7), 7), None);
        assert_eq!(mod_p(&frac(432000, 691), 13), Some(5));
        assert_eq!(inv_mod(3, 5), 2);
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(2147483647));
        assert!(!is_prime(2147483647 * 3));
    }

    #[test]
    fn falling() {
        assert_eq!(falling_factorial(&frac(1, 3), 2), frac(-2, 9));
        assert_eq!(falling_factorial(&int(5), 0), int(1));
        assert_eq!(factorial(5), BigInt::from(120));
    }
}
