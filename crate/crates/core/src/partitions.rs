//! Colored partitions counted through their product generating functions.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::etaprod::{self, ProductFactor};

/// Parts `≡ i (mod modulus)` come in `counts[i - 1]` colors; the last entry is residue 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorSpec {
    modulus: u64,
    counts: Vec<u32>,
}

impl ColorSpec {
    pub fn new(counts: &[u32]) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidArgument(
                "color spec needs at least one residue".into(),
            ));
        }
        Ok(ColorSpec {
            modulus: counts.len() as u64,
            counts: counts.to_vec(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    fn factors(&self) -> Vec<ProductFactor> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| {
                ProductFactor::new((i as u64 + 1) % self.modulus, self.modulus, -(c as i64))
            })
            .collect()
    }
}

/// Counts for `0..=n`.
pub fn colored_counts(spec: &ColorSpec, n: usize) -> Vec<BigInt> {
    etaprod::product_coeffs(&spec.factors(), n + 1)
}

pub fn colored_count(spec: &ColorSpec, n: usize) -> BigInt {
    colored_counts(spec, n).pop().unwrap_or_default()
}

fn pab_factors(a: u64, b: u64) -> Vec<ProductFactor> {
    (1..a)
        .filter(|&r| r != b && r != a - b)
        .map(|r| ProductFactor::new(r, a, -1))
        .collect()
}

/// Partitions of `0..=n` into parts `≢ 0, ±b (mod a)`.
pub fn pab_counts(a: u64, b: u64, n: usize) -> Result<Vec<BigInt>> {
    if b == 0 || b >= a {
        return Err(Error::InvalidArgument(format!(
            "need 0 < b < a, got a={a}, b={b}"
        )));
    }
    Ok(etaprod::product_coeffs(&pab_factors(a, b), n + 1))
}

pub fn pab_count(a: u64, b: u64, n: usize) -> Result<BigInt> {
    Ok(pab_counts(a, b, n)?.pop().unwrap_or_default())
}

/// Ordinary partition numbers `p(0..=n)` by the pentagonal number recurrence.
pub fn pentagonal_partitions(n: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::from(0); n + 1];
    p[0] = BigInt::from(1);
    for m in 1..=n {
        let mut acc = BigInt::from(0);
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign_plus = k % 2 == 1;
            for g in [g1, g1 + k] {
                if g <= m {
                    if sign_plus {
                        acc += &p[m - g];
                    } else {
                        acc -= &p[m - g];
                    }
                }
            }
        }
        p[m] = acc;
    }
    p
}

/// Which recurrence to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Recurrence {
    /// `P_{11,1,1,11,0}(n) = 11 P_{6,6,6,6,0}(n-1) + P_{1,11,11,1,0}(n-2)`
    Ssss,
    /// `P_{27,12}(n) = P_{27,6}(n-1) + P_{27,3}(n-2)`
    P27,
}

impl Recurrence {
    pub const ALL: [Recurrence; 2] = [Recurrence::Ssss, Recurrence::P27];

    pub fn name(self) -> &'static str {
        match self {
            Recurrence::Ssss => "ssss",
            Recurrence::P27 => "p27",
        }
    }

    /// `(lhs, first, second)` counts for `0..=n`; the claim is
    /// `lhs(n) = c first(n-1) + second(n-2)`.
    fn sides(self, n: usize) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, u32) {
        match self {
            Recurrence::Ssss => {
                let spec = |c: &[u32]| {
                    let s = ColorSpec {
                        modulus: c.len() as u64,
                        counts: c.to_vec(),
                    };
                    colored_counts(&s, n)
                };
                (
                    spec(&[11, 1, 1, 11, 0]),
                    spec(&[6, 6, 6, 6, 0]),
                    spec(&[1, 11, 11, 1, 0]),
                    11,
                )
            }
            Recurrence::P27 => (
                etaprod::product_coeffs(&pab_factors(27, 12), n + 1),
                etaprod::product_coeffs(&pab_factors(27, 6), n + 1),
                etaprod::product_coeffs(&pab_factors(27, 3), n + 1),
                1,
            ),
        }
    }
}

impl std::str::FromStr for Recurrence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Recurrence::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecurrenceReport {
    pub recurrence: Recurrence,
    pub upto: usize,
    /// `n` where the two sides differ.
    pub failures: Vec<usize>,
    /// Left-hand side at `n = 2`.
    pub anchor: String,
}

impl RecurrenceReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks one recurrence for `2 <= n <= upto`.
pub fn check_recurrence(rec: Recurrence, upto: usize) -> Result<RecurrenceReport> {
    if upto < 2 {
        return Err(Error::InvalidArgument(format!("need N >= 2, got {upto}")));
    }
    let (lhs, first, second, c) = rec.sides(upto);
    let failures = (2..=upto)
        .filter(|&n| lhs[n] != BigInt::from(c) * &first[n - 1] + &second[n - 2])
        .collect();
    Ok(RecurrenceReport {
        recurrence: rec,
        upto,
        failures,
        anchor: lhs[2].to_string(),
    })
}

/// Both recurrences through `upto`.
pub fn verify_recurrences(upto: usize) -> Result<Vec<RecurrenceReport>> {
    Recurrence::ALL
        .into_iter()
        .map(|r| check_recurrence(r, upto))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etaprod::NamedSeries;

    #[test]
    fn ordinary_partitions() {
        let ones = ColorSpec::new(&[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(colored_count(&ones, 4), BigInt::from(5));
        assert_eq!(colored_counts(&ones, 200), pentagonal_partitions(200));
        assert_eq!(pentagonal_partitions(100)[100].to_string(), "190569292");
    }

    #[test]
    fn empty_partition() {
        let spec = ColorSpec::new(&[3, 0, 2]).unwrap();
        assert_eq!(colored_count(&spec, 0), BigInt::from(1));
        assert_eq!(pab_count(7, 3, 0).unwrap(), BigInt::from(1));
        assert!(pab_count(5, 5, 3).is_err());
    }

    #[test]
    fn anchor_67() {
        let lhs = colored_count(&ColorSpec::new(&[11, 1, 1, 11, 0]).unwrap(), 2);
        let first = colored_count(&ColorSpec::new(&[6, 6, 6, 6, 0]).unwrap(), 1);
        assert_eq!(first, BigInt::from(6));
        assert_eq!(lhs, BigInt::from(67));
    }

    #[test]
    fn pab_matches_ch2() {
        let ch2 = NamedSeries::Ch2.series(40).unwrap();
        let counts = pab_counts(5, 2, 39).unwrap();
        let want: Vec<_> = counts
            .into_iter()
            .map(num_rational::BigRational::from_integer)
            .collect();
        assert_eq!(&ch2.coeffs()[..40], &want[..]);
    }

    #[test]
    fn recurrences_hold() {
        let reports = verify_recurrences(50).unwrap();
        assert!(reports.iter().all(|r| r.passes()), "{reports:?}");
        assert_eq!(reports[0].anchor, "67");
        assert!(check_recurrence(Recurrence::P27, 1).is_err());
    }
}
