//! Supersingular polynomials in characteristic `p`: from `E_(p-1)`, from the
//! Wronskian of a symmetric power of the Weber pair, and a Hasse-invariant
//! oracle that is independent of both.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modpoly::{self, MFPoly};
use crate::par::Exec;
use crate::poly::{FpPoly, RatPoly};
use crate::rat;
use crate::symmpow;
use crate::wronskian;

/// Primes used by default.
pub const DEFAULT_PRIMES: [u64; 9] = [5, 7, 11, 13, 17, 19, 23, 29, 31];

fn check_prime(p: u64) -> Result<()> {
    if p < 5 || !rat::is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not a prime >= 5")));
    }
    Ok(())
}

/// Coefficientwise reduction of a rational polynomial.
pub fn reduce_mod_p(poly: &RatPoly, p: u64) -> Result<FpPoly> {
    FpPoly::reduce(poly, p)
}

/// Monic divisor polynomial of `f` reduced mod `p`.
fn divisor_mod_p(f: &MFPoly, p: u64) -> Result<FpPoly> {
    Ok(reduce_mod_p(&modpoly::divisor_polynomial(f)?, p)?.monic())
}

/// `S_p` as the divisor polynomial of `E_(p-1)`.
pub fn ss_poly_deligne(p: u64) -> Result<FpPoly> {
    check_prime(p)?;
    divisor_mod_p(&MFPoly::eisenstein(p as u32 - 1)?, p)
}

/// `W'/W` for `Sym^((p-3)/2)` of the Weber pair, computed from the Wronskians
/// and checked against the closed form.
pub fn weber_quotient_form(p: u64, exec: Exec) -> Result<MFPoly> {
    check_prime(p)?;
    let m = (p as u32 - 3) / 2;
    let weight = 2 * m + 2;
    let n = modpoly::dimension(weight) + modpoly::IDENTIFY_MARGIN + 2;
    let (f, g) = symmpow::weber_pair(n)?;
    let form = wronskian::quotient_form_with(&symmpow::sym_basis(&f, &g, m)?, weight, exec)?;
    let closed = symmpow::kz_sym_form(m);
    if form != closed {
        return Err(Error::NotIdentifiable(format!(
            "Wronskian quotient {form} differs from the closed form {closed}"
        )));
    }
    Ok(form)
}

/// `S_p` from the normalized quotient `W'/W` of `Sym^((p-3)/2)` of the Weber pair.
pub fn ss_poly_wronskian(p: u64, exec: Exec) -> Result<FpPoly> {
    let form = weber_quotient_form(p, exec)?;
    let c = form.constant_term();
    if c.is_zero() {
        return Err(Error::ZeroSeries);
    }
    divisor_mod_p(&form.scale(&c.recip()), p)
}

/// Supersingular `j` in `F_p`: the coefficient of `x^(p-1)` in
/// `(x^3 + a x + b)^((p-1)/2)` vanishes for a curve with invariant `j`.
pub fn hasse_oracle(p: u64) -> Vec<u64> {
    let j1728 = 1728 % p;
    let curve = |j: u64| -> (u64, u64) {
        if j == 0 {
            (0, 1)
        } else if j == j1728 {
            (1, 0)
        } else {
            let t = (j1728 + p - j) % p;
            let a = rat::mul_mod(3, rat::mul_mod(j, t, p), p);
            let b = rat::mul_mod(2, rat::mul_mod(j, rat::mul_mod(t, t, p), p), p);
            (a, b)
        }
    };
    (0..p)
        .filter(|&j| {
            let (a, b) = curve(j);
            let mut acc = FpPoly::one(p);
            let cubic = FpPoly::new(p, vec![b, a, 0, 1]);
            for _ in 0..(p - 1) / 2 {
                acc = acc.mul(&cubic);
            }
            acc.coeffs().get(p as usize - 1).copied().unwrap_or(0) == 0
        })
        .collect()
}

/// `(eps_omega, eps_i)`: multiplicities of `j = 0` and `j = 1728`.
pub fn epsilon_factors(p: u64) -> (u32, u32) {
    (u32::from(p % 3 == 2), u32::from(p % 4 == 3))
}

/// `S_p / (x^eps_omega (x - 1728)^eps_i)`.
pub fn ss_tilde(p: u64) -> Result<FpPoly> {
    let s = ss_poly_deligne(p)?;
    let (eo, ei) = epsilon_factors(p);
    let mut d = FpPoly::one(p);
    for _ in 0..eo {
        d = d.mul(&FpPoly::linear(p, 0));
    }
    for _ in 0..ei {
        d = d.mul(&FpPoly::linear(p, 1728 % p));
    }
    s.div_exact(&d)
        .ok_or_else(|| Error::InexactDivision(format!("S_{p} by x^{eo} (x - 1728)^{ei}")))
}

/// `(-1)^((p-1)/2) (2/p) ((p-1)/2)!` mod `p`.
pub fn congruence_target(p: u64) -> u64 {
    let h = (p - 1) / 2;
    let fact = (1..=h).fold(1u64, |acc, k| rat::mul_mod(acc, k, p));
    let legendre = rat::pow_mod(2, h, p);
    let sign = if h.is_multiple_of(2) { 1 } else { p - 1 };
    rat::mul_mod(rat::mul_mod(sign, legendre, p), fact, p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub p: u64,
    pub expected: u64,
    pub constant: u64,
    /// First exponent with a nonzero residue beyond the constant term.
    pub first_nonconstant: Option<usize>,
    pub terms_checked: usize,
    pub holds: bool,
}

/// Reduces the expansion of the closed form for `m = (p-3)/2` mod `p`.
pub fn congruence_constant_check(p: u64, n: usize) -> Result<CongruenceReport> {
    check_prime(p)?;
    let form = symmpow::kz_sym_form((p as u32 - 3) / 2);
    let s = form.to_qseries(n)?;
    let coeffs = s.integral_coeffs().unwrap_or_default();
    let residues = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| rat::mod_p(c, p).ok_or(Error::DenominatorDivisibleByP { p, index: i }))
        .collect::<Result<Vec<u64>>>()?;
    let expected = congruence_target(p);
    let constant = residues.first().copied().unwrap_or(0);
    let first_nonconstant = residues.iter().skip(1).position(|&r| r != 0).map(|i| i + 1);
    Ok(CongruenceReport {
        p,
        expected,
        constant,
        first_nonconstant,
        terms_checked: residues.len(),
        holds: constant == expected && first_nonconstant.is_none(),
    })
}

/// Which construction(s) of `S_p` to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SsRoute {
    Deligne,
    Wronskian,
    Oracle,
    All,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SsReport {
    pub p: u64,
    /// Ascending coefficients of the monic `S_p`; empty when only the oracle ran.
    pub polynomial: Vec<u64>,
    pub fp_roots: Vec<u64>,
    /// Monic irreducible quadratic factors, ascending coefficients.
    pub quadratic_factors: Vec<Vec<u64>>,
    pub routes_agree: bool,
    #[serde(skip)]
    pub squarefree: bool,
    #[serde(skip)]
    pub only_linear_and_quadratic: bool,
}

impl SsReport {
    /// Every consistency condition holds.
    pub fn passes(&self) -> bool {
        self.routes_agree && self.squarefree && self.only_linear_and_quadratic
    }
}

/// Builds `S_p` by the requested routes and cross-checks them.
pub fn ss_report(p: u64, route: SsRoute, exec: Exec) -> Result<SsReport> {
    check_prime(p)?;
    let oracle = hasse_oracle(p);
    let (poly, mut agree) = match route {
        SsRoute::Oracle => {
            return Ok(SsReport {
                p,
                polynomial: Vec::new(),
                fp_roots: oracle,
                quadratic_factors: Vec::new(),
                routes_agree: true,
                squarefree: true,
                only_linear_and_quadratic: true,
            })
        }
        SsRoute::Deligne => (ss_poly_deligne(p)?, true),
        SsRoute::Wronskian => (ss_poly_wronskian(p, exec)?, true),
        SsRoute::All => {
            let d = ss_poly_deligne(p)?;
            let w = ss_poly_wronskian(p, exec)?;
            let same = d == w;
            (d, same)
        }
    };
    let roots = poly.roots();
    agree &= roots == oracle;
    let factors = poly.factor_low_degree();
    Ok(SsReport {
        p,
        polynomial: poly.coeffs().to_vec(),
        fp_roots: roots,
        quadratic_factors: factors
            .quadratics
            .iter()
            .map(|q| q.coeffs().to_vec())
            .collect(),
        routes_agree: agree,
        squarefree: poly.degree() == Some(0) || poly.is_squarefree(),
        only_linear_and_quadratic: factors.remainder.degree() == Some(0),
    })
}

/// Degree of `S_p`: the number of supersingular invariants counted over `F_(p^2)`.
pub fn expected_degree(p: u64) -> usize {
    let (eo, ei) = epsilon_factors(p);
    ((p / 12) as usize) + eo as usize + ei as usize
}

/// Reduction of a rational to `F_p`, for callers holding form coefficients.
pub fn residue(c: &BigRational, p: u64) -> Option<u64> {
    rat::mod_p(c, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{frac, int};

    #[test]
    fn deligne_small_primes() {
        assert_eq!(ss_poly_deligne(5).unwrap(), FpPoly::new(5, vec![0, 1]));
        assert_eq!(ss_poly_deligne(7).unwrap(), FpPoly::new(7, vec![1, 1]));
        assert_eq!(ss_poly_deligne(13).unwrap(), FpPoly::linear(13, 5));
        assert!(ss_poly_deligne(9).is_err());
    }

    #[test]
    fn wronskian_route_small_primes() {
        assert_eq!(
            ss_poly_wronskian(5, Exec::Sequential).unwrap(),
            FpPoly::new(5, vec![0, 1])
        );
        assert_eq!(
            ss_poly_wronskian(7, Exec::Sequential).unwrap(),
            FpPoly::new(7, vec![1, 1])
        );
        assert_eq!(
            ss_poly_wronskian(11, Exec::Sequential).unwrap(),
            ss_poly_deligne(11).unwrap()
        );
    }

    #[test]
    fn oracle_small_primes() {
        assert_eq!(hasse_oracle(5), vec![0]);
        assert_eq!(hasse_oracle(7), vec![6]);
        assert_eq!(hasse_oracle(13), vec![5]);
    }

    #[test]
    fn epsilons_and_tilde() {
        assert_eq!(epsilon_factors(5), (1, 0));
        assert_eq!(epsilon_factors(7), (0, 1));
        assert_eq!(epsilon_factors(11), (1, 1));
        assert_eq!(ss_tilde(5).unwrap(), FpPoly::one(5));
        assert_eq!(ss_tilde(7).unwrap(), FpPoly::one(7));
        for p in DEFAULT_PRIMES {
            assert_eq!(
                ss_poly_deligne(p).unwrap().degree(),
                Some(expected_degree(p)),
                "p={p}"
            );
        }
    }

    #[test]
    fn congruence_constants() {
        assert_eq!(congruence_target(5), 3);
        assert_eq!(residue(&frac(-1, 18), 5), Some(3));
        assert_eq!(rat::pow_mod(2, 3, 7), 1);
        let r = congruence_constant_check(5, 30).unwrap();
        assert!(r.holds, "{r:?}");
        let r = congruence_constant_check(7, 30).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(
            reduce_mod_p(&RatPoly::new(vec![int(1)]), 7).unwrap(),
            FpPoly::one(7)
        );
    }
}
