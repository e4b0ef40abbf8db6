//! Dense univariate polynomials over the rationals and over prime fields.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{self, int};

/// Polynomial in `x` with rational coefficients, ascending order, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        RatPoly::default()
    }

    pub fn one() -> Self {
        Self::from_ints(&[1])
    }

    /// `x - a`
    pub fn linear(a: BigRational) -> Self {
        Self::new(vec![-a, BigRational::one()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRational::zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&zero) + other.coeffs.get(i).unwrap_or(&zero))
            .collect();
        RatPoly::new(c)
    }

    pub fn mul(&self, other: &RatPoly) -> RatPoly {
        if self.is_zero() || other.is_zero() {
            return RatPoly::zero();
        }
        let mut c = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        RatPoly::new(c)
    }

    pub fn scale(&self, k: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn pow(&self, k: u32) -> RatPoly {
        (0..k).fold(RatPoly::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Scales to leading coefficient one.
    pub fn monic(&self) -> RatPoly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => self.clone(),
        }
    }

    /// Remainder of division by `d` (nonzero).
    pub fn rem(&self, d: &RatPoly) -> RatPoly {
        let dl = d.leading().expect("division by zero polynomial").clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let top = r.len() - 1;
            let f = &r[top] / &dl;
            if !f.is_zero() {
                for (i, c) in d.coeffs.iter().enumerate() {
                    let t = &f * c;
                    r[top - dd + i] -= t;
                }
            }
            r.pop();
            while r.last().is_some_and(|c| c.is_zero()) {
                r.pop();
            }
        }
        RatPoly::new(r)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Rational roots, ascending, without multiplicity, by the rational root theorem.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        // strip the root at zero
        let k = self.coeffs.iter().position(|c| !c.is_zero()).unwrap();
        if k > 0 {
            roots.push(BigRational::zero());
        }
        let (nums, _) = crate::qseries::common_denominator(&self.coeffs[k..]);
        let a0 = nums[0].abs();
        let an = nums.last().unwrap().abs();
        let divisors = |n: &num_bigint::BigInt| {
            let n = n.clone();
            let mut out = Vec::new();
            let mut d = num_bigint::BigInt::one();
            while &d * &d <= n {
                if (&n % &d).is_zero() {
                    out.push(d.clone());
                    out.push(&n / &d);
                }
                d += 1;
            }
            out
        };
        let shifted = RatPoly::new(self.coeffs[k..].to_vec());
        for p in divisors(&a0) {
            for q in divisors(&an) {
                for sign in [1, -1] {
                    let cand = BigRational::new(p.clone() * sign, q.clone());
                    if !roots.contains(&cand) && shifted.eval(&cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.is_negative(), rat::show(&c.abs()), c.abs().is_one())),
        )
    }
}

fn write_terms<I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (usize, bool, String, bool)>,
{
    let mut first = true;
    for (i, neg, mag, unit) in terms {
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { "-" } else { "+" })?;
        }
        first = false;
        match (i, unit) {
            (0, _) => write!(f, "{mag}")?,
            (1, true) => write!(f, "x")?,
            (1, false) => write!(f, "{mag}*x")?,
            (_, true) => write!(f, "x^{i}")?,
            (_, false) => write!(f, "{mag}*x^{i}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Polynomial over `F_p`, ascending coefficients in `0..p`, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    /// Coefficientwise reduction of a rational polynomial.
    pub fn reduce(poly: &RatPoly, p: u64) -> Result<Self> {
        let coeffs = poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| rat::mod_p(c, p).ok_or(Error::DenominatorDivisibleByP { p, index: i }))
            .collect::<Result<Vec<_>>>()?;
        Ok(FpPoly::new(p, coeffs))
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    /// `x - a`
    pub fn linear(p: u64, a: u64) -> Self {
        FpPoly::new(p, vec![(p - a % p) % p, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (rat::mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        if self.is_zero() || other.is_zero() {
            return FpPoly::new(self.p, Vec::new());
        }
        let mut c = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                c[i + j] = (c[i + j] + rat::mul_mod(a, b, self.p)) % self.p;
            }
        }
        FpPoly::new(self.p, c)
    }

    pub fn monic(&self) -> FpPoly {
        match self.coeffs.last() {
            Some(&l) => {
                let inv = rat::inv_mod(l, self.p);
                FpPoly::new(
                    self.p,
                    self.coeffs
                        .iter()
                        .map(|&c| rat::mul_mod(c, inv, self.p))
                        .collect(),
                )
            }
            None => self.clone(),
        }
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        let p = self.p;
        let dl = *d.coeffs.last().expect("division by zero polynomial");
        let inv = rat::inv_mod(dl, p);
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (FpPoly::new(p, Vec::new()), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let f = rat::mul_mod(r[top], inv, p);
            q[top - dd] = f;
            if f != 0 {
                for (i, &c) in d.coeffs.iter().enumerate() {
                    let t = rat::mul_mod(f, c, p);
                    r[top - dd + i] = (r[top - dd + i] + p - t) % p;
                }
            }
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &FpPoly) -> Option<FpPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| rat::mul_mod(c, i as u64 % self.p, self.p))
            .collect();
        FpPoly::new(self.p, c)
    }

    /// No repeated factors (gcd with the derivative is constant).
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Roots in `F_p`, ascending, found by enumeration.
    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }

    /// Splits off linear factors and monic irreducible quadratics.
    pub fn factor_low_degree(&self) -> LowDegreeFactors {
        let p = self.p;
        let mut rest = self.monic();
        let mut linear = Vec::new();
        for a in rest.roots() {
            let f = FpPoly::linear(p, a);
            while let Some(q) = rest.div_exact(&f) {
                linear.push(a);
                rest = q;
            }
        }
        let mut quadratics = Vec::new();
        'outer: while rest.degree().is_some_and(|d| d >= 2) {
            for b in 0..p {
                for a in 0..p {
                    let g = FpPoly::new(p, vec![b, a, 1]);
                    if g.roots().is_empty() {
                        if let Some(q) = rest.div_exact(&g) {
                            quadratics.push(g);
                            rest = q;
                            continue 'outer;
                        }
                    }
                }
            }
            break;
        }
        LowDegreeFactors {
            linear,
            quadratics,
            remainder: rest,
        }
    }
}

/// Result of [`FpPoly::factor_low_degree`]: `poly = lc * prod (x - a) * prod g * remainder`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowDegreeFactors {
    pub linear: Vec<u64>,
    pub quadratics: Vec<FpPoly>,
    pub remainder: FpPoly,
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .rev()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, false, c.to_string(), c == 1)),
        )
    }
}
