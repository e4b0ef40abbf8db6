//! Truncated q-series `q^h * sum_n a_n q^(n/d)` with exact rational coefficients.
//!
//! A [`QSeries`] knows its coefficients exactly for every exponent below its
//! precision bound `prec`; nothing is ever reported at or above that bound.
//! Precision propagates conservatively through every operation:
//!
//! * add / sub: `min(prec_a, prec_b)`
//! * mul: `min(prec_a + val_b, prec_b + val_a)`
//! * invert: `prec - 2 * val`
//!
//! Exponents live on the lattice `offset + (1/step_den) * Z>=0`. Binary
//! operations reconcile lattices through the lcm of the step denominators and
//! of the offset difference; the result must stay below the lattice cap
//! (see [`set_lattice_cap`]).

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat;

/// Default bound on exponent-lattice denominators.
pub const DEFAULT_LATTICE_CAP: u64 = 120;

static LATTICE_CAP: AtomicU64 = AtomicU64::new(DEFAULT_LATTICE_CAP);

/// Sets the process-wide lattice cap. Intended to be called once at start-up.
pub fn set_lattice_cap(cap: u64) {
    LATTICE_CAP.store(cap.max(1), Ordering::Relaxed);
}

pub fn lattice_cap() -> u64 {
    LATTICE_CAP.load(Ordering::Relaxed)
}

fn check_cap(d: u64) -> Result<u64> {
    let cap = lattice_cap();
    if d > cap {
        Err(Error::LatticeCap { needed: d, cap })
    } else {
        Ok(d)
    }
}

/// Number of lattice points `offset + n/d` (n >= 0) strictly below `prec`.
fn lattice_count(offset: &BigRational, d: u64, prec: &BigRational) -> usize {
    if prec <= offset {
        return 0;
    }
    let span = (prec - offset) * BigRational::from_integer(BigInt::from(d));
    rat::ceil(&span).to_usize().expect("series length overflow")
}

/// Splits rational coefficients into integer numerators over one common denominator.
pub(crate) fn common_denominator(coeffs: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let nums = coeffs
        .iter()
        .map(|c| {
            if c.denom() == &den {
                c.numer().clone()
            } else {
                c.numer() * (&den / c.denom())
            }
        })
        .collect();
    (nums, den)
}

pub(crate) fn over_denominator(nums: Vec<BigInt>, den: &BigInt) -> Vec<BigRational> {
    if den.is_one() {
        nums.into_iter().map(BigRational::from_integer).collect()
    } else {
        nums.into_iter()
            .map(|n| BigRational::new(n, den.clone()))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    offset: BigRational,
    step_den: u64,
    coeffs: Vec<BigRational>,
    prec: BigRational,
}

impl QSeries {
    /// The series that is zero below `prec`.
    pub fn zero(prec: BigRational) -> Self {
        QSeries {
            offset: prec.clone(),
            step_den: 1,
            coeffs: Vec::new(),
            prec,
        }
    }

    /// Constant `c`, known below `prec`.
    pub fn constant(c: BigRational, prec: BigRational) -> Self {
        Self::monomial(c, BigRational::zero(), prec)
    }

    pub fn one(prec: BigRational) -> Self {
        Self::constant(BigRational::one(), prec)
    }

    /// `c * q^e`, known below `prec`.
    pub fn monomial(c: BigRational, e: BigRational, prec: BigRational) -> Self {
        Self::from_parts(e, 1, vec![c], prec)
    }

    /// Builds a series from coefficients on the lattice `offset + n/step_den`.
    /// Missing coefficients below `prec` are taken to be zero and entries at or
    /// beyond `prec` are dropped.
    pub fn from_parts(
        offset: BigRational,
        step_den: u64,
        mut coeffs: Vec<BigRational>,
        prec: BigRational,
    ) -> Self {
        assert!(step_den > 0, "step denominator must be positive");
        let count = lattice_count(&offset, step_den, &prec);
        coeffs.resize(count, BigRational::zero());
        let mut s = QSeries {
            offset,
            step_den,
            coeffs,
            prec,
        };
        s.renormalize();
        s
    }

    pub fn from_integers(
        offset: BigRational,
        step_den: u64,
        coeffs: Vec<BigInt>,
        prec: BigRational,
    ) -> Self {
        Self::from_parts(
            offset,
            step_den,
            coeffs.into_iter().map(BigRational::from_integer).collect(),
            prec,
        )
    }

    /// Builds a series from sparse `(exponent, coefficient)` terms; repeated
    /// exponents accumulate.
    pub fn from_terms<I>(terms: I, prec: BigRational) -> Result<Self>
    where
        I: IntoIterator<Item = (BigRational, BigRational)>,
    {
        let terms: Vec<_> = terms.into_iter().filter(|(e, _)| e < &prec).collect();
        let Some(base) = terms.iter().map(|(e, _)| e.clone()).min() else {
            return Ok(Self::zero(prec));
        };
        let mut d = 1u64;
        for (e, _) in &terms {
            let diff = e - &base;
            let den = rat::denom_u64(&diff).ok_or(Error::LatticeCap {
                needed: u64::MAX,
                cap: lattice_cap(),
            })?;
            d = check_cap(rat::lcm_u64(d, den))?;
        }
        let count = lattice_count(&base, d, &prec);
        let mut coeffs = vec![BigRational::zero(); count];
        let dr = BigRational::from_integer(BigInt::from(d));
        for (e, c) in terms {
            let idx = ((e - &base) * &dr).to_integer().to_usize().unwrap();
            coeffs[idx] += c;
        }
        Ok(Self::from_parts(base, d, coeffs, prec))
    }

    fn renormalize(&mut self) {
        let first = self.coeffs.iter().position(|c| !c.is_zero());
        match first {
            None => {
                *self = Self::zero(self.prec.clone());
            }
            Some(k) => {
                if k > 0 {
                    self.offset += BigRational::new(BigInt::from(k), BigInt::from(self.step_den));
                    self.coeffs.drain(..k);
                }
                self.compact();
            }
        }
    }

    /// Coarsens the exponent lattice when every known nonzero term lies on a
    /// coarser one.
    fn compact(&mut self) {
        if self.step_den == 1 {
            return;
        }
        let mut g = self.step_den;
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                g = g.gcd(&(i as u64));
                if g == 1 {
                    return;
                }
            }
        }
        if g > 1 {
            let g = g as usize;
            self.coeffs = self.coeffs.iter().step_by(g).cloned().collect();
            self.step_den /= g as u64;
        }
    }

    pub fn offset(&self) -> &BigRational {
        &self.offset
    }

    pub fn step_den(&self) -> u64 {
        self.step_den
    }

    pub fn prec(&self) -> &BigRational {
        &self.prec
    }

    /// Known coefficients, index `n` standing for exponent `offset + n/step_den`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of index `n`.
    pub fn exponent(&self, n: usize) -> BigRational {
        &self.offset + BigRational::new(BigInt::from(n), BigInt::from(self.step_den))
    }

    /// Nonzero terms as `(exponent, coefficient)` pairs, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (BigRational, &BigRational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(n, c)| (self.exponent(n), c))
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Result<BigRational> {
        if self.is_zero() {
            Err(Error::ValuationUndefined(self.prec.clone()))
        } else {
            Ok(self.offset.clone())
        }
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.coeffs.first()
    }

    /// Coefficient at exponent `e`; `None` when `e` is at or beyond the precision.
    pub fn coeff_at(&self, e: &BigRational) -> Option<BigRational> {
        if e >= &self.prec {
            return None;
        }
        if self.is_zero() || e < &self.offset {
            return Some(BigRational::zero());
        }
        let idx = (e - &self.offset) * BigRational::from_integer(BigInt::from(self.step_den));
        if !idx.is_integer() {
            return Some(BigRational::zero());
        }
        let idx = idx.to_integer().to_usize()?;
        Some(
            self.coeffs
                .get(idx)
                .cloned()
                .unwrap_or_else(BigRational::zero),
        )
    }

    /// Lowers the precision bound to `prec` (no-op when already lower).
    pub fn truncate(&self, prec: &BigRational) -> QSeries {
        if prec >= &self.prec {
            return self.clone();
        }
        if self.is_zero() {
            return Self::zero(prec.clone());
        }
        Self::from_parts(
            self.offset.clone(),
            self.step_den,
            self.coeffs.clone(),
            prec.clone(),
        )
    }

    pub fn neg(&self) -> QSeries {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> QSeries {
        if k.is_zero() {
            return Self::zero(self.prec.clone());
        }
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= k;
        }
        out
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: &BigRational) -> QSeries {
        let mut out = self.clone();
        out.offset += e;
        out.prec += e;
        out
    }

    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &QSeries) -> Result<QSeries> {
        self.combine(other, true)
    }

    fn combine(&self, other: &QSeries, subtract: bool) -> Result<QSeries> {
        let prec = (&self.prec).min(&other.prec).clone();
        if other.is_zero() {
            return Ok(self.truncate(&prec));
        }
        if self.is_zero() {
            let o = other.truncate(&prec);
            return Ok(if subtract { o.neg() } else { o });
        }
        let diff = &self.offset - &other.offset;
        let dd = rat::denom_u64(&diff).ok_or(Error::LatticeCap {
            needed: u64::MAX,
            cap: lattice_cap(),
        })?;
        let d = check_cap(rat::lcm_u64(
            rat::lcm_u64(self.step_den, other.step_den),
            dd,
        ))?;
        let base = (&self.offset).min(&other.offset).clone();
        let count = lattice_count(&base, d, &prec);
        let mut coeffs = vec![BigRational::zero(); count];
        let dr = BigRational::from_integer(BigInt::from(d));
        for (s, neg) in [(self, false), (other, subtract)] {
            let start = ((&s.offset - &base) * &dr).to_integer().to_usize().unwrap();
            let stride = (d / s.step_den) as usize;
            for (n, c) in s.coeffs.iter().enumerate() {
                let idx = start + n * stride;
                if idx >= count {
                    break;
                }
                if neg {
                    coeffs[idx] -= c;
                } else {
                    coeffs[idx] += c;
                }
            }
        }
        Ok(Self::from_parts(base, d, coeffs, prec))
    }

    pub fn mul(&self, other: &QSeries) -> Result<QSeries> {
        let prec = (&self.prec + &other.offset).min(&other.prec + &self.offset);
        let offset = &self.offset + &other.offset;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(prec));
        }
        let d = check_cap(rat::lcm_u64(self.step_den, other.step_den))?;
        let count = lattice_count(&offset, d, &prec);
        let ra = (d / self.step_den) as usize;
        let rb = (d / other.step_den) as usize;
        let (na, da) = common_denominator(&self.coeffs);
        let (nb, db) = common_denominator(&other.coeffs);
        let mut acc = vec![BigInt::zero(); count];
        for (i, a) in na.iter().enumerate() {
            let base = i * ra;
            if base >= count {
                break;
            }
            if a.is_zero() {
                continue;
            }
            for (j, b) in nb.iter().enumerate() {
                let idx = base + j * rb;
                if idx >= count {
                    break;
                }
                if !b.is_zero() {
                    acc[idx] += a * b;
                }
            }
        }
        let coeffs = over_denominator(acc, &(da * db));
        Ok(Self::from_parts(offset, d, coeffs, prec))
    }

    /// Multiplicative inverse; the offset negates.
    pub fn invert(&self) -> Result<QSeries> {
        if self.is_zero() {
            return Err(Error::NotInvertible);
        }
        let n = self.coeffs.len();
        let (a, den) = common_denominator(&self.coeffs);
        // 1/A = sum e_n t^n / A0^(n+1), e_n = -sum_{i=1..n} A_i A0^(i-1) e_{n-i}
        let a0 = a[0].clone();
        let mut weighted = Vec::with_capacity(n);
        let mut p = BigInt::one();
        for (i, ai) in a.iter().enumerate() {
            if i == 0 {
                weighted.push(BigInt::zero());
            } else {
                weighted.push(ai * &p);
                p *= &a0;
            }
        }
        let mut e: Vec<BigInt> = Vec::with_capacity(n);
        e.push(BigInt::one());
        for k in 1..n {
            let mut s = BigInt::zero();
            for i in 1..=k {
                if !weighted[i].is_zero() {
                    s += &weighted[i] * &e[k - i];
                }
            }
            e.push(-s);
        }
        let mut a0_pow = a0.clone();
        let coeffs = e
            .into_iter()
            .map(|ek| {
                let c = BigRational::new(ek * &den, a0_pow.clone());
                a0_pow *= &a0;
                c
            })
            .collect();
        let offset = -self.offset.clone();
        let prec = &self.prec - &self.offset * BigRational::from_integer(BigInt::from(2));
        Ok(Self::from_parts(offset, self.step_den, coeffs, prec))
    }

    /// Integer power by repeated squaring; negative exponents go through [`Self::invert`].
    pub fn pow(&self, k: i64) -> Result<QSeries> {
        if k < 0 {
            return self.invert()?.pow(-k);
        }
        if k == 0 {
            if self.is_zero() {
                return Err(Error::InvalidArgument("0^0 on a truncated series".into()));
            }
            return Ok(Self::one(&self.prec - &self.offset));
        }
        let mut base = self.clone();
        let mut acc: Option<QSeries> = None;
        let mut e = k as u64;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.mul(&base)?;
        }
        Ok(acc.unwrap())
    }

    /// Ramanujan's derivative `q d/dq`: multiplies the coefficient at exponent `e` by `e`.
    pub fn derive(&self) -> QSeries {
        if self.is_zero() {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * self.exponent(n))
            .collect();
        Self::from_parts(
            self.offset.clone(),
            self.step_den,
            coeffs,
            self.prec.clone(),
        )
    }

    /// Substitutes `q -> q^s` for a positive rational `s`.
    pub fn rescale(&self, s: &BigRational) -> Result<QSeries> {
        if !s.is_positive() {
            return Err(Error::InvalidArgument(
                "rescale factor must be positive".into(),
            ));
        }
        let u = s
            .numer()
            .to_usize()
            .ok_or(Error::InvalidArgument("rescale factor too large".into()))?;
        let v = s
            .denom()
            .to_u64()
            .ok_or(Error::InvalidArgument("rescale factor too large".into()))?;
        let prec = &self.prec * s;
        if self.is_zero() {
            return Ok(Self::zero(prec));
        }
        let d = check_cap(self.step_den * v)?;
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * u + 1];
        for (n, c) in self.coeffs.iter().enumerate() {
            coeffs[n * u] = c.clone();
        }
        Ok(Self::from_parts(&self.offset * s, d, coeffs, prec))
    }

    /// Scales to leading coefficient one.
    pub fn normalize(&self) -> Result<QSeries> {
        let lc = self.leading_coeff().ok_or(Error::ZeroSeries)?;
        Ok(self.scale(&lc.recip()))
    }

    /// First exponent below the common precision at which the two series differ.
    pub fn first_difference(&self, other: &QSeries) -> Result<Option<BigRational>> {
        let diff = self.sub(other)?;
        Ok(diff.valuation().ok())
    }

    /// True when the series agree on every exponent below the common precision.
    pub fn agrees_with(&self, other: &QSeries) -> Result<bool> {
        Ok(self.first_difference(other)?.is_none())
    }

    /// Sum of several series.
    pub fn sum<'a, I: IntoIterator<Item = &'a QSeries>>(items: I) -> Result<QSeries> {
        let mut it = items.into_iter();
        let first = it
            .next()
            .ok_or(Error::InvalidArgument("empty sum".into()))?
            .clone();
        it.try_fold(first, |acc, s| acc.add(s))
    }

    /// Coefficients at integral exponents `0..count`, when the series has
    /// integral exponents and nonnegative valuation.
    pub fn integral_coeffs(&self) -> Option<Vec<BigRational>> {
        if !self.is_zero()
            && (self.step_den != 1 || !self.offset.is_integer() || self.offset.is_negative())
        {
            return None;
        }
        if self.prec <= BigRational::zero() {
            return Some(Vec::new());
        }
        let count = rat::ceil(&self.prec).to_usize()?;
        let mut out = vec![BigRational::zero(); count];
        if !self.is_zero() {
            let start = self.offset.to_integer().to_usize()?;
            for (n, c) in self.coeffs.iter().enumerate() {
                out[start + n] = c.clone();
            }
        }
        Some(out)
    }
}

fn fmt_exponent(e: &BigRational) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("({})", rat::show(e))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (sign, mag) = if c.is_negative() {
                ("-", -c.clone())
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let is_const = e.is_zero();
            if is_const {
                write!(f, "{}", rat::show(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", rat::show(&mag))?;
                }
                if e.is_one() {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^{}", fmt_exponent(&e))?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", fmt_exponent(&self.prec))
    }
}

/// JSON shape of a series: exact rationals are carried as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QSeriesRecord {
    pub offset: String,
    pub step_den: u64,
    pub prec: String,
    pub coeffs: Vec<String>,
}

impl From<&QSeries> for QSeriesRecord {
    fn from(s: &QSeries) -> Self {
        QSeriesRecord {
            offset: rat::show(&s.offset),
            step_den: s.step_den,
            prec: rat::show(&s.prec),
            coeffs: s.coeffs.iter().map(rat::show).collect(),
        }
    }
}

impl TryFrom<QSeriesRecord> for QSeries {
    type Error = Error;

    fn try_from(r: QSeriesRecord) -> Result<Self> {
        if r.step_den == 0 {
            return Err(Error::Parse("step_den must be positive".into()));
        }
        check_cap(r.step_den)?;
        let coeffs = r
            .coeffs
            .iter()
            .map(|c| rat::parse(c))
            .collect::<Result<Vec<_>>>()?;
        let offset = rat::parse(&r.offset)?;
        let prec = rat::parse(&r.prec)?;
        if lattice_count(&offset, r.step_den, &prec) < coeffs.len() {
            return Err(Error::Parse(
                "coefficients extend past the precision bound".into(),
            ));
        }
        Ok(QSeries::from_parts(offset, r.step_den, coeffs, prec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    fn poly(coeffs: &[i64], prec: i64) -> QSeries {
        QSeries::from_parts(
            int(0),
            1,
            coeffs.iter().map(|&c| int(c)).collect(),
            int(prec),
        )
    }

    #[test]
    fn offsets_add_under_multiplication() {
        let a = QSeries::monomial(int(1), frac(1, 6), int(10));
        let p = a.mul(&a).unwrap();
        assert_eq!(p.offset(), &frac(1, 3));
        assert_eq!(p.leading_coeff(), Some(&int(1)));
    }

    #[test]
    fn addition_cancels_to_q() {
        let a = poly(&[1, 1], 10);
        let b = poly(&[-1], 10);
        let s = a.add(&b).unwrap();
        assert_eq!(s.valuation().unwrap(), int(1));
        assert_eq!(s.coeffs()[0], int(1));
        assert_eq!(s.coeffs().len(), 9);
    }

    #[test]
    fn geometric_inverse() {
        let a = poly(&[1, -1], 8);
        let inv = a.invert().unwrap();
        assert_eq!(inv.coeffs(), vec![int(1); 8].as_slice());
        assert_eq!(inv.prec(), &int(8));
        let one = a.mul(&inv).unwrap();
        assert_eq!(one, QSeries::one(int(8)));
    }

    #[test]
    fn invert_monomial_and_zero() {
        let a = QSeries::monomial(int(1), frac(1, 5), int(3));
        let inv = a.invert().unwrap();
        assert_eq!(inv.offset(), &frac(-1, 5));
        assert_eq!(inv.prec(), &(int(3) - frac(2, 5)));
        assert_eq!(QSeries::zero(int(4)).invert(), Err(Error::NotInvertible));
    }

    #[test]
    fn non_unit_leading_inverse() {
        let a = poly(&[2, 3, 5], 12);
        let one = a.mul(&a.invert().unwrap()).unwrap();
        assert_eq!(one, QSeries::one(int(12)));
    }

    #[test]
    fn small_power() {
        let a = poly(&[1, 1], 10);
        let p = a.pow(2).unwrap();
        assert_eq!(p.coeffs()[..3], [int(1), int(2), int(1)]);
        assert!(p.coeffs()[3..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn derive_examples() {
        assert!(QSeries::constant(int(3), int(5)).derive().is_zero());
        let m = QSeries::monomial(int(1), frac(11, 60), int(5));
        assert_eq!(m.derive().leading_coeff(), Some(&frac(11, 60)));
        let s = poly(&[1, 1, 1], 5).derive();
        assert_eq!(s.valuation().unwrap(), int(1));
        assert_eq!(s.coeffs()[..2], [int(1), int(2)]);
    }

    #[test]
    fn valuation_of_zero_fails() {
        assert!(matches!(
            QSeries::zero(int(3)).valuation(),
            Err(Error::ValuationUndefined(_))
        ));
    }

    #[test]
    fn rescale_roundtrip() {
        let a = poly(&[1, -1, -1, 0, 0, 1], 6).shift(&frac(1, 24));
        let up = a.rescale(&int(5)).unwrap();
        assert_eq!(up.offset(), &frac(5, 24));
        assert_eq!(up.prec(), &(int(30) + frac(5, 24)));
        let down = a.rescale(&frac(1, 5)).unwrap();
        assert_eq!(down.offset(), &frac(1, 120));
        assert_eq!(down.step_den(), 5);
        assert_eq!(up.rescale(&frac(1, 5)).unwrap(), a);
    }

    #[test]
    fn lattice_cap_is_enforced() {
        let a = QSeries::monomial(int(1), frac(1, 7), int(2));
        let b = QSeries::monomial(int(1), frac(1, 121), int(2));
        assert!(matches!(a.add(&b), Err(Error::LatticeCap { .. })));
    }

    #[test]
    fn coefficients_beyond_precision_are_unknown() {
        let a = poly(&[1, 2, 3], 3);
        assert_eq!(a.coeff_at(&int(2)), Some(int(3)));
        assert_eq!(a.coeff_at(&int(3)), None);
        assert_eq!(a.coeff_at(&frac(1, 2)), Some(int(0)));
    }

    #[test]
    fn mixed_lattice_addition() {
        let a = QSeries::monomial(int(1), frac(-1, 5), int(3));
        let b = QSeries::monomial(int(2), frac(1, 5), int(3));
        let s = a.add(&b).unwrap();
        assert_eq!(s.step_den(), 5);
        assert_eq!(s.coeff_at(&frac(1, 5)), Some(int(2)));
        assert_eq!(s.coeff_at(&frac(-1, 5)), Some(int(1)));
    }

    #[test]
    fn json_record_roundtrip() {
        let a = poly(&[1, -2, 0, 5], 4)
            .shift(&frac(11, 60))
            .scale(&frac(1, 3));
        let rec = QSeriesRecord::from(&a);
        assert_eq!(rec.offset, "11/60");
        assert_eq!(QSeries::try_from(rec).unwrap(), a);
    }

    #[test]
    fn display_is_readable() {
        let a = poly(&[1, -2, 0, 1], 4);
        assert_eq!(a.to_string(), "1 - 2*q + q^3 + O(q^4)");
    }
}
