//! Level-one modular forms as polynomials in `E4` and `E6`: Eisenstein
//! expansions, the theta derivation, identification of q-series and divisor
//! polynomials.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::etaprod::{product_series, ProductFactor, ProductSpec};
use crate::poly::RatPoly;
use crate::qseries::QSeries;
use crate::rat::{self, frac, int};

/// Extra coefficients demanded by [`identify`] beyond the dimension of the space.
pub const IDENTIFY_MARGIN: usize = 10;

fn bernoulli_cache() -> &'static Mutex<Vec<BigRational>> {
    static CACHE: OnceLock<Mutex<Vec<BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BigRational::one()]))
}

/// Bernoulli number `B_n` (with `B_1 = -1/2`).
pub fn bernoulli(n: usize) -> BigRational {
    let mut b = bernoulli_cache().lock().unwrap();
    while b.len() <= n {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let m = b.len();
        let mut binom = BigInt::one();
        let mut s = BigRational::zero();
        for (k, bk) in b.iter().enumerate() {
            s += BigRational::from_integer(binom.clone()) * bk;
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        b.push(-s / BigRational::from_integer(BigInt::from(m + 1)));
    }
    b[n].clone()
}

/// `sigma_k(n)` for `n = 0..len` (index 0 unused, set to zero).
fn divisor_sums(k: u32, len: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); len];
    for d in 1..len {
        let dk = BigInt::from(d).pow(k);
        for m in (d..len).step_by(d) {
            s[m] += &dk;
        }
    }
    s
}

/// Normalization of an Eisenstein series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// Constant term one.
    E,
    /// Constant term `-B_k / k!`.
    G,
}

type EisensteinCache = Mutex<HashMap<(u32, Normalization, usize), QSeries>>;

fn eisenstein_cache() -> &'static EisensteinCache {
    static CACHE: OnceLock<EisensteinCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Eisenstein series of even weight `k >= 2`, known below `q^n`.
pub fn eisenstein(k: u32, norm: Normalization, n: usize) -> Result<QSeries> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "Eisenstein weight must be even and at least 2, got {k}"
        )));
    }
    if let Some(s) = eisenstein_cache().lock().unwrap().get(&(k, norm, n)) {
        return Ok(s.clone());
    }
    let b = bernoulli(k as usize);
    let (constant, factor) = match norm {
        Normalization::E => (int(1), -int(2 * k as i64) / &b),
        Normalization::G => (
            -&b / BigRational::from_integer(rat::factorial(k as u64)),
            int(2) / BigRational::from_integer(rat::factorial(k as u64 - 1)),
        ),
    };
    let mut coeffs: Vec<BigRational> = divisor_sums(k - 1, n)
        .into_iter()
        .map(|s| BigRational::from_integer(s) * &factor)
        .collect();
    if n > 0 {
        coeffs[0] = constant;
    }
    let s = QSeries::from_parts(int(0), 1, coeffs, int(n as i64));
    eisenstein_cache()
        .lock()
        .unwrap()
        .insert((k, norm, n), s.clone());
    Ok(s)
}

/// `G_2 = -E_2 / 12`, known below `q^n`.
pub fn g2(n: usize) -> QSeries {
    eisenstein(2, Normalization::G, n).expect("weight 2 is valid")
}

/// `Theta_h(y) = q dy/dq + h G_2 y`. The `G_2` factor is expanded as far as
/// the precision of `y` requires.
pub fn theta_h(y: &QSeries, h: &BigRational) -> Result<QSeries> {
    let d = y.derive();
    if y.is_zero() || h.is_zero() {
        return Ok(d);
    }
    let need = rat::ceil(&(y.prec() - y.offset())).to_usize().unwrap_or(0);
    d.add(&g2(need).mul(y)?.scale(h))
}

/// `Delta = q prod (1 - q^n)^24 = (E4^3 - E6^2) / 1728`, known below `q^n`.
pub fn delta_std(n: usize) -> QSeries {
    let len = n.saturating_sub(1);
    product_series(
        &ProductSpec::new(int(1)).with(ProductFactor::new(0, 1, 24)),
        len,
    )
    .truncate(&int(n as i64))
}

/// `j = E4^3 / Delta = 1/q + 744 + ...`, known below `q^n`.
pub fn j_series(n: usize) -> Result<QSeries> {
    let e4 = eisenstein(4, Normalization::E, n + 2)?;
    e4.pow(3)?
        .mul(&delta_std(n + 2).invert()?)
        .map(|s| s.truncate(&int(n as i64)))
}

/// Polynomial `sum c_(a,b) E4^a E6^b` with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct MFPoly {
    terms: BTreeMap<(u32, u32), BigRational>,
}

impl MFPoly {
    pub fn zero() -> Self {
        MFPoly::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    /// `c E4^a E6^b`
    pub fn monomial(c: BigRational, a: u32, b: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        MFPoly { terms }
    }

    pub fn e4() -> Self {
        Self::monomial(int(1), 1, 0)
    }

    pub fn e6() -> Self {
        Self::monomial(int(1), 0, 1)
    }

    /// `G4 = E4 / 720`
    pub fn g4() -> Self {
        Self::monomial(frac(1, 720), 1, 0)
    }

    /// `G6 = -E6 / 30240`
    pub fn g6() -> Self {
        Self::monomial(frac(-1, 30240), 0, 1)
    }

    /// `(E4^3 - E6^2) / 1728`
    pub fn delta() -> Self {
        Self::monomial(frac(1, 1728), 3, 0).sub(&Self::monomial(frac(1, 1728), 0, 2))
    }

    /// Eisenstein series `E_k` as an element of the ring.
    pub fn eisenstein(k: u32) -> Result<Self> {
        let n = dimension(k) + IDENTIFY_MARGIN;
        identify(&eisenstein(k, Normalization::E, n)?, k)
    }

    pub fn terms(&self) -> impl Iterator<Item = ((u32, u32), &BigRational)> + '_ {
        self.terms.iter().map(|(&k, v)| (k, v))
    }

    pub fn coeff(&self, a: u32, b: u32) -> BigRational {
        self.terms
            .get(&(a, b))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Common weight `4a + 6b` of every term; `None` for zero or mixed polynomials.
    pub fn weight(&self) -> Option<u32> {
        let mut ws = self.terms.keys().map(|&(a, b)| 4 * a + 6 * b);
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.weight().is_some()
    }

    fn insert_add(&mut self, key: (u32, u32), c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(key).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &MFPoly) -> MFPoly {
        let mut out = self.clone();
        for (&k, c) in &other.terms {
            out.insert_add(k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MFPoly) -> MFPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MFPoly {
        self.scale(&int(-1))
    }

    pub fn scale(&self, k: &BigRational) -> MFPoly {
        if k.is_zero() {
            return MFPoly::zero();
        }
        MFPoly {
            terms: self.terms.iter().map(|(&key, c)| (key, c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &MFPoly) -> MFPoly {
        let mut out = MFPoly::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &other.terms {
                out.insert_add((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> MFPoly {
        (0..k).fold(MFPoly::one(), |acc, _| acc.mul(self))
    }

    /// The derivation `-(E6/3) d/dE4 - (E4^2/2) d/dE6`, raising the weight by two.
    pub fn theta(&self) -> Result<MFPoly> {
        if !self.is_homogeneous() {
            return Err(Error::NonHomogeneous);
        }
        let mut out = MFPoly::zero();
        for (&(a, b), c) in &self.terms {
            if a > 0 {
                out.insert_add((a - 1, b + 1), c * frac(-(a as i64), 3));
            }
            if b > 0 {
                out.insert_add((a + 2, b - 1), c * frac(-(b as i64), 2));
            }
        }
        Ok(out)
    }

    /// Constant term of the expansion (the sum of all coefficients).
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .values()
            .fold(BigRational::zero(), |acc, c| acc + c)
    }

    /// Expansion known below `q^n`.
    pub fn to_qseries(&self, n: usize) -> Result<QSeries> {
        let prec = int(n as i64);
        if self.is_zero() {
            return Ok(QSeries::zero(prec));
        }
        let max_a = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let max_b = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let e4 = eisenstein(4, Normalization::E, n)?;
        let e6 = eisenstein(6, Normalization::E, n)?;
        let mut p4 = vec![QSeries::one(prec.clone())];
        for i in 0..max_a as usize {
            let next = p4[i].mul(&e4)?;
            p4.push(next);
        }
        let mut p6 = vec![QSeries::one(prec.clone())];
        for i in 0..max_b as usize {
            let next = p6[i].mul(&e6)?;
            p6.push(next);
        }
        let mut acc = QSeries::zero(prec);
        for (&(a, b), c) in &self.terms {
            acc = acc.add(&p4[a as usize].mul(&p6[b as usize])?.scale(c))?;
        }
        Ok(acc)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<F: Fn(&BigRational) -> BigRational>(&self, f: F) -> MFPoly {
        let mut out = MFPoly::zero();
        for (&k, c) in &self.terms {
            out.insert_add(k, f(c));
        }
        out
    }
}

impl fmt::Display for MFPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(a, b), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mut factors = Vec::new();
            for (name, e) in [("E4", a), ("E6", b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            if factors.is_empty() {
                write!(f, "{}", rat::show(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{}*{}", rat::show(&mag), factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Exponent pairs `(a, b)` with `4a + 6b = weight`, ordered by `a`.
pub fn monomial_basis(weight: u32) -> Vec<(u32, u32)> {
    if weight % 2 == 1 {
        return Vec::new();
    }
    (0..=weight / 4)
        .filter_map(|a| {
            let rest = weight - 4 * a;
            rest.is_multiple_of(6).then_some((a, rest / 6))
        })
        .collect()
}

/// Dimension of the space of weight `weight` forms.
pub fn dimension(weight: u32) -> usize {
    monomial_basis(weight).len()
}

/// Finds the form of the given weight whose expansion matches `y` on every
/// known coefficient.
pub fn identify(y: &QSeries, weight: u32) -> Result<MFPoly> {
    identify_with_margin(y, weight, IDENTIFY_MARGIN)
}

pub fn identify_with_margin(y: &QSeries, weight: u32, margin: usize) -> Result<MFPoly> {
    let coeffs = y.integral_coeffs().ok_or_else(|| {
        Error::NotIdentifiable("series has non-integral exponents or a pole".into())
    })?;
    let basis = monomial_basis(weight);
    let need = basis.len() + margin;
    if coeffs.len() < need {
        return Err(Error::InsufficientPrecision {
            have: coeffs.len(),
            need,
        });
    }
    let n = coeffs.len();
    let columns = basis
        .iter()
        .map(|&(a, b)| {
            MFPoly::monomial(int(1), a, b)
                .to_qseries(n)?
                .integral_coeffs()
                .ok_or(Error::NotIdentifiable("basis".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    // rows: [basis values..., target]
    let mut rows: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            columns
                .iter()
                .map(|c| c[i].clone())
                .chain(std::iter::once(coeffs[i].clone()))
                .collect()
        })
        .collect();
    let k = basis.len();
    let mut pivot_row = 0;
    let mut pivots = Vec::new();
    for col in 0..k {
        let Some(r) = (pivot_row..n).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, r);
        let inv = rows[pivot_row][col].recip();
        for v in rows[pivot_row].iter_mut() {
            *v *= &inv;
        }
        let pr = rows[pivot_row].clone();
        for (ri, row) in rows.iter_mut().enumerate() {
            if ri != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, p) in row.iter_mut().zip(&pr) {
                    *v -= &f * p;
                }
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[k].is_zero()) {
        return Err(Error::NotIdentifiable(format!(
            "no weight {weight} form matches the series to precision {}",
            rat::show(y.prec())
        )));
    }
    let mut out = MFPoly::zero();
    for (i, &col) in pivots.iter().enumerate() {
        let (a, b) = basis[col];
        out.insert_add((a, b), rows[i][k].clone());
    }
    Ok(out)
}

/// `f = Delta^t E4^delta E6^epsilon f_tilde(j)` together with `F = h_k f_tilde`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorData {
    pub t: u32,
    pub delta: u32,
    pub epsilon: u32,
    pub f_tilde: RatPoly,
    pub divisor_poly: RatPoly,
}

/// `(delta, epsilon)` for a weight, by its residue mod 12.
fn delta_epsilon(weight: u32) -> (u32, u32) {
    match weight % 12 {
        0 => (0, 0),
        2 => (2, 1),
        4 => (1, 0),
        6 => (0, 1),
        8 => (2, 0),
        _ => (1, 1),
    }
}

/// `h_k(x) = x^delta (x - 1728)^epsilon`.
pub fn h_poly(weight: u32) -> RatPoly {
    let (d, e) = delta_epsilon(weight);
    RatPoly::from_ints(&[0, 1])
        .pow(d)
        .mul(&RatPoly::from_ints(&[-1728, 1]).pow(e))
}

/// Writes a nonzero homogeneous form through `Delta`, `E4`, `E6` and a polynomial in `j`.
pub fn decompose(p: &MFPoly) -> Result<DivisorData> {
    if p.is_zero() {
        return Err(Error::ZeroSeries);
    }
    let w = p.weight().ok_or(Error::NonHomogeneous)?;
    if w % 2 == 1 {
        return Err(Error::NonHomogeneous);
    }
    let (delta, epsilon) = delta_epsilon(w);
    let t = (w - 4 * delta - 6 * epsilon) / 12;
    // p / (E4^delta E6^epsilon) = sum_k c_k X^k Y^(t-k), X = E4^3, Y = E6^2
    let mut d = vec![BigRational::zero(); t as usize + 1];
    for ((a, b), c) in p.terms() {
        let (a, b) = (a - delta, b - epsilon);
        debug_assert!(a % 3 == 0 && b % 2 == 0);
        let k = a / 3;
        // Y = X - 1728 Delta
        let m = t - k;
        let mut binom = BigInt::one();
        let mut power = BigInt::one();
        for r in 0..=m {
            let coeff = BigRational::from_integer(&binom * &power) * c;
            d[(t - r) as usize] += coeff;
            binom = binom * BigInt::from(m - r) / BigInt::from(r + 1);
            power *= -1728;
        }
    }
    let f_tilde = RatPoly::new(d);
    let divisor_poly = h_poly(w).mul(&f_tilde);
    Ok(DivisorData {
        t,
        delta,
        epsilon,
        f_tilde,
        divisor_poly,
    })
}

/// `F(p, x) = h_k(x) f_tilde(x)`.
pub fn divisor_polynomial(p: &MFPoly) -> Result<RatPoly> {
    Ok(decompose(p)?.divisor_poly)
}

impl DivisorData {
    /// Rebuilds the form from its decomposition.
    pub fn reassemble(&self) -> MFPoly {
        let delta = MFPoly::delta();
        let j_num = MFPoly::monomial(int(1), 3, 0);
        let mut acc = MFPoly::zero();
        for (i, c) in self.f_tilde.coeffs().iter().enumerate() {
            let term = j_num
                .pow(i as u32)
                .mul(&delta.pow(self.t - i as u32))
                .scale(c);
            acc = acc.add(&term);
        }
        acc.mul(&MFPoly::monomial(int(1), self.delta, self.epsilon))
    }
}
