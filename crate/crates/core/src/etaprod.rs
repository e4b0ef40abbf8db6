//! Generators for the named q-series: eta functions with scaled arguments,
//! congruence-class products, theta sums and the characters built from them.
//!
//! Precision convention: a generator called with order `n` returns a series
//! known for every exponent below `offset + n` (theta sums, which have no
//! natural offset, are known below the absolute bound `n`).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::rat::{self, frac, int};

/// `(1 - q^n)` or `(1 + q^n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorSign {
    Minus,
    Plus,
}

/// `prod_{n > 0, n = residue (mod modulus)} (1 -+ q^n)^exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductFactor {
    pub residue: u64,
    pub modulus: u64,
    pub exponent: i64,
    pub sign: FactorSign,
}

impl ProductFactor {
    pub fn new(residue: u64, modulus: u64, exponent: i64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        ProductFactor {
            residue: residue % modulus,
            modulus,
            exponent,
            sign: FactorSign::Minus,
        }
    }

    pub fn plus(residue: u64, modulus: u64, exponent: i64) -> Self {
        ProductFactor {
            sign: FactorSign::Plus,
            ..Self::new(residue, modulus, exponent)
        }
    }
}

/// A prefactor `q^h` times a list of congruence-class factors.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ProductSpec {
    pub prefactor: BigRational,
    pub factors: Vec<ProductFactor>,
}

impl ProductSpec {
    pub fn new(prefactor: BigRational) -> Self {
        ProductSpec {
            prefactor,
            factors: Vec::new(),
        }
    }

    pub fn with(mut self, factor: ProductFactor) -> Self {
        self.factors.push(factor);
        self
    }
}

/// Integer coefficients of the product part for exponents `0..n`.
pub(crate) fn product_coeffs(factors: &[ProductFactor], n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n];
    if n == 0 {
        return c;
    }
    c[0] = BigInt::one();
    for f in factors {
        let start = if f.residue == 0 { f.modulus } else { f.residue } as usize;
        let step = f.modulus as usize;
        let sigma = match f.sign {
            FactorSign::Minus => 1,
            FactorSign::Plus => -1,
        };
        for part in (start..n).step_by(step) {
            for _ in 0..f.exponent.unsigned_abs() {
                if f.exponent > 0 {
                    // multiply by (1 - sigma q^part)
                    for i in (part..n).rev() {
                        let t = c[i - part].clone();
                        if sigma > 0 {
                            c[i] -= t;
                        } else {
                            c[i] += t;
                        }
                    }
                } else {
                    // divide by (1 - sigma q^part)
                    for i in part..n {
                        let t = c[i - part].clone();
                        if sigma > 0 {
                            c[i] += t;
                        } else {
                            c[i] -= t;
                        }
                    }
                }
            }
        }
    }
    c
}

/// Exact expansion of a product, known below `prefactor + n`.
pub fn product_series(spec: &ProductSpec, n: usize) -> QSeries {
    QSeries::from_integers(
        spec.prefactor.clone(),
        1,
        product_coeffs(&spec.factors, n),
        &spec.prefactor + int(n as i64),
    )
}

/// `prod_{n >= 1} (1 - q^n)` below `q^n`, by the pentagonal number theorem.
pub fn euler_product(n: usize) -> Vec<BigInt> {
    let mut c = vec![BigInt::zero(); n];
    let mut k: i64 = 0;
    loop {
        let mut any = false;
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let e = kk * (3 * kk - 1) / 2;
            if (e as usize) < n {
                any = true;
                c[e as usize] += if kk % 2 == 0 { 1 } else { -1 };
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    c
}

/// `eta(scale * tau) = q^(scale/24) prod (1 - q^(scale n))`, known below `offset + n`.
pub fn eta(scale: &BigRational, n: usize) -> Result<QSeries> {
    if !scale.is_positive() {
        return Err(Error::InvalidArgument("eta scale must be positive".into()));
    }
    let core_len = rat::ceil(&(int(n as i64) / scale));
    let core_len: usize = core_len.try_into().unwrap_or(0);
    let core = QSeries::from_integers(int(0), 1, euler_product(core_len), int(core_len as i64));
    let offset = scale / int(24);
    let s = core.rescale(scale)?.shift(&offset);
    Ok(s.truncate(&(offset + int(n as i64))))
}

/// Sign character of a theta sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThetaSign {
    Trivial,
    Alternating,
}

/// `sum_{n in Z} eps(n) q^((a n^2 + b n)/2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSpec {
    pub a: BigRational,
    pub b: BigRational,
    pub sign: ThetaSign,
}

impl ThetaSpec {
    pub fn new(a: BigRational, b: BigRational, sign: ThetaSign) -> Self {
        ThetaSpec { a, b, sign }
    }
}

/// Every term of the theta sum with exponent below `bound`.
pub fn theta_sum(spec: &ThetaSpec, bound: &BigRational) -> Result<QSeries> {
    if !spec.a.is_positive() {
        return Err(Error::InvalidArgument(
            "theta sum needs a positive quadratic coefficient".into(),
        ));
    }
    let two = int(2);
    let expo = |n: &BigInt| {
        let n = BigRational::from_integer(n.clone());
        (&spec.a * &n * &n + &spec.b * &n) / &two
    };
    let sign = |n: &BigInt| match spec.sign {
        ThetaSign::Trivial => int(1),
        ThetaSign::Alternating => {
            if (n % 2u8).is_zero() {
                int(1)
            } else {
                int(-1)
            }
        }
    };
    let vertex = rat::floor(&(-&spec.b / (&spec.a * &two)));
    let mut terms = Vec::new();
    let mut n = vertex.clone();
    loop {
        let e = expo(&n);
        if &e >= bound {
            break;
        }
        terms.push((e, sign(&n)));
        n -= 1;
    }
    let mut n = vertex + 1;
    loop {
        let e = expo(&n);
        if &e >= bound {
            break;
        }
        terms.push((e, sign(&n)));
        n += 1;
    }
    QSeries::from_terms(terms, bound.clone())
}

/// Which construction to use for series that have two classical forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    Product,
    Theta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NamedSeries {
    /// `q^(11/60) prod 1/((1-q^(5n+2))(1-q^(5n+3)))`
    Ch1,
    /// `q^(-1/60) prod 1/((1-q^(5n+1))(1-q^(5n+4)))`
    Ch2,
    /// Rogers-Ramanujan continued fraction `R(q) = ch1/ch2`.
    RrCf,
    /// `sum q^(n^2) / eta`
    A1F1,
    /// `sum q^((n+1/2)^2) / eta`
    A1F2,
    /// `q^(-1/6) prod (1 + q^(n-1/2))^8`
    Weber8First,
    /// `q^(1/3) prod (1 + q^n)^8`
    Weber8Second,
}

impl NamedSeries {
    pub const ALL: [NamedSeries; 7] = [
        NamedSeries::Ch1,
        NamedSeries::Ch2,
        NamedSeries::RrCf,
        NamedSeries::A1F1,
        NamedSeries::A1F2,
        NamedSeries::Weber8First,
        NamedSeries::Weber8Second,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedSeries::Ch1 => "ch1",
            NamedSeries::Ch2 => "ch2",
            NamedSeries::RrCf => "rr_cf",
            NamedSeries::A1F1 => "a1_f1",
            NamedSeries::A1F2 => "a1_f2",
            NamedSeries::Weber8First => "weber8_1",
            NamedSeries::Weber8Second => "weber8_2",
        }
    }

    /// Leading exponent of the series.
    pub fn offset(self) -> BigRational {
        match self {
            NamedSeries::Ch1 => frac(11, 60),
            NamedSeries::Ch2 => frac(-1, 60),
            NamedSeries::RrCf => frac(1, 5),
            NamedSeries::A1F1 => frac(-1, 24),
            NamedSeries::A1F2 => frac(5, 24),
            NamedSeries::Weber8First => frac(-1, 6),
            NamedSeries::Weber8Second => frac(1, 3),
        }
    }

    /// Expansion known below `offset + n`, by the default route.
    pub fn series(self, n: usize) -> Result<QSeries> {
        let s = match self {
            NamedSeries::Ch1 | NamedSeries::Ch2 => {
                let s = self.series_by(Route::Product, n)?;
                #[cfg(debug_assertions)]
                {
                    let t = self.series_by(Route::Theta, n)?;
                    debug_assert!(
                        s.agrees_with(&t)?,
                        "product and theta forms of {} differ",
                        self.name()
                    );
                }
                s
            }
            NamedSeries::A1F1 | NamedSeries::A1F2 => self.series_by(Route::Theta, n)?,
            _ => self.series_by(Route::Product, n)?,
        };
        Ok(s)
    }

    /// Expansion by an explicit route. Series with a single classical form
    /// ignore the route.
    pub fn series_by(self, route: Route, n: usize) -> Result<QSeries> {
        let ni = n as i64;
        match (self, route) {
            (NamedSeries::Ch1, Route::Product) => Ok(product_series(
                &ProductSpec::new(frac(11, 60))
                    .with(ProductFactor::new(2, 5, -1))
                    .with(ProductFactor::new(3, 5, -1)),
                n,
            )),
            (NamedSeries::Ch2, Route::Product) => Ok(product_series(
                &ProductSpec::new(frac(-1, 60))
                    .with(ProductFactor::new(1, 5, -1))
                    .with(ProductFactor::new(4, 5, -1)),
                n,
            )),
            (NamedSeries::Ch1, Route::Theta) => theta_over_eta(
                &ThetaSpec::new(int(5), int(3), ThetaSign::Alternating),
                frac(9, 40),
                n,
            ),
            (NamedSeries::Ch2, Route::Theta) => theta_over_eta(
                &ThetaSpec::new(int(5), int(1), ThetaSign::Alternating),
                frac(1, 40),
                n,
            ),
            (NamedSeries::RrCf, _) => Ok(product_series(
                &ProductSpec::new(frac(1, 5))
                    .with(ProductFactor::new(1, 5, 1))
                    .with(ProductFactor::new(4, 5, 1))
                    .with(ProductFactor::new(2, 5, -1))
                    .with(ProductFactor::new(3, 5, -1)),
                n,
            )),
            (NamedSeries::A1F1, Route::Theta) => theta_over_eta(
                &ThetaSpec::new(int(2), int(0), ThetaSign::Trivial),
                int(0),
                n,
            ),
            (NamedSeries::A1F2, Route::Theta) => theta_over_eta(
                &ThetaSpec::new(int(2), int(2), ThetaSign::Trivial),
                frac(1, 4),
                n,
            ),
            (NamedSeries::A1F1, Route::Product) => {
                let num = product_series(
                    &ProductSpec::new(int(0))
                        .with(ProductFactor::new(0, 2, 1))
                        .with(ProductFactor::plus(1, 2, 2)),
                    n,
                );
                num.mul(&eta(&int(1), n)?.invert()?)
            }
            (NamedSeries::A1F2, Route::Product) => {
                let num = product_series(
                    &ProductSpec::new(frac(1, 4))
                        .with(ProductFactor::new(0, 2, 1))
                        .with(ProductFactor::plus(0, 2, 2)),
                    n,
                )
                .scale(&int(2));
                num.mul(&eta(&int(1), n)?.invert()?)
            }
            (NamedSeries::Weber8First, _) => {
                let inner = product_series(
                    &ProductSpec::new(int(0)).with(ProductFactor::plus(1, 2, 8)),
                    2 * n,
                );
                Ok(inner.rescale(&frac(1, 2))?.shift(&frac(-1, 6)))
            }
            (NamedSeries::Weber8Second, _) => Ok(product_series(
                &ProductSpec::new(frac(1, 3)).with(ProductFactor::plus(0, 1, 8)),
                n,
            )),
        }
        .map(|s| s.truncate(&(self.offset() + int(ni))))
    }
}

/// `q^shift * theta / eta`, known below `offset + n`.
fn theta_over_eta(spec: &ThetaSpec, shift: BigRational, n: usize) -> Result<QSeries> {
    let num = theta_sum(spec, &int(n as i64 + 1))?.shift(&shift);
    num.mul(&eta(&int(1), n + 1)?.invert()?)
}

impl fmt::Display for NamedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedSeries {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedSeries::ALL
            .into_iter()
            .find(|n| n.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Expansion of a named series known below `offset + n`.
pub fn named_series(name: &str, n: usize) -> Result<QSeries> {
    name.parse::<NamedSeries>()?.series(n)
}
