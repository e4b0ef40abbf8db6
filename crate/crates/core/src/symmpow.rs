//! Symmetric powers of two-dimensional spaces: bases, the Wronskian product
//! formula, the operators `D_i` in powers of `Theta`, the recursion for their
//! constant coefficients, and the closed forms `G_(l, alpha)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::etaprod::{self, NamedSeries};
use crate::modpoly::{self, MFPoly};
use crate::par::Exec;
use crate::poly::RatPoly;
use crate::qseries::QSeries;
use crate::rat::{self, frac, int};
use crate::wronskian;

/// `[g^m, f g^(m-1), ..., f^m]`.
pub fn sym_basis(f: &QSeries, g: &QSeries, m: u32) -> Result<Vec<QSeries>> {
    let mut fp = vec![QSeries::one(f.prec() - f.offset())];
    let mut gp = vec![QSeries::one(g.prec() - g.offset())];
    for i in 0..m as usize {
        let nf = if i == 0 { f.clone() } else { fp[i].mul(f)? };
        let ng = if i == 0 { g.clone() } else { gp[i].mul(g)? };
        fp.push(nf);
        gp.push(ng);
    }
    (0..=m as usize)
        .map(|i| match (i, m as usize - i) {
            (0, j) => Ok(gp[j].clone()),
            (i, 0) => Ok(fp[i].clone()),
            (i, j) => fp[i].mul(&gp[j]),
        })
        .collect()
}

/// `1! 2! ... m!`
pub fn superfactorial(m: u32) -> BigInt {
    (1..=m as u64).map(rat::factorial).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymWronskianReport {
    pub m: u32,
    pub constant: BigInt,
    /// `W(Sym^m) = (1! ... m!) W(U)^(m(m+1)/2)` below `prec`.
    pub product_formula: bool,
    pub first_failure: Option<BigRational>,
    /// When the normalized `W(U)` is `eta^4`: whether the normalized
    /// `W(Sym^m)` is `eta^(2m(m+1))`.
    pub eta_power: Option<bool>,
    pub prec: BigRational,
}

/// Checks the Wronskian of `Sym^m(span(f, g))` against the product formula
/// and, for spaces whose Wronskian is `eta^4`, against `eta^(2m(m+1))`.
pub fn check_sym_wronskian(
    f: &QSeries,
    g: &QSeries,
    m: u32,
    exec: Exec,
) -> Result<SymWronskianReport> {
    let w_u = wronskian::wronskian_with(&[g.clone(), f.clone()], exec)?;
    let w_v = wronskian::wronskian_with(&sym_basis(f, g, m)?, exec)?;
    let constant = superfactorial(m);
    let e = (m * (m + 1) / 2) as i64;
    let rhs = w_u
        .pow(e)?
        .scale(&BigRational::from_integer(constant.clone()));
    let diff = w_v.first_difference(&rhs)?;
    let prec = w_v.prec().min(rhs.prec()).clone();
    let eta_power = if w_u.is_zero() || w_v.is_zero() {
        None
    } else {
        let nu = w_u.normalize()?;
        let rel = rat::ceil(&(nu.prec() - nu.offset()))
            .to_usize()
            .unwrap_or(0);
        let eta4 = etaprod::eta(&int(1), rel)?.pow(4)?;
        if nu.offset() == eta4.offset() && nu.agrees_with(&eta4)? {
            let nv = w_v.normalize()?;
            let rel = rat::ceil(&(nv.prec() - nv.offset()))
                .to_usize()
                .unwrap_or(0);
            let target = etaprod::eta(&int(1), rel)?.pow(2 * (m as i64) * (m as i64 + 1))?;
            Some(nv.offset() == target.offset() && nv.agrees_with(&target)?)
        } else {
            None
        }
    };
    Ok(SymWronskianReport {
        m,
        constant,
        product_formula: diff.is_none(),
        first_failure: diff,
        eta_power,
        prec,
    })
}

/// `sum_j R_j Theta^j`, acting on weight-zero series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaOperator {
    /// `coeffs[j]` multiplies `Theta^j`.
    pub coeffs: Vec<MFPoly>,
}

impl ThetaOperator {
    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// The coefficient of `Theta^0`.
    pub fn constant_coeff(&self) -> &MFPoly {
        &self.coeffs[0]
    }

    /// `Theta o self`.
    fn theta_compose(&self) -> Result<ThetaOperator> {
        let mut out = vec![MFPoly::zero(); self.coeffs.len() + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j] = out[j].add(&c.theta()?);
            out[j + 1] = out[j + 1].add(c);
        }
        Ok(ThetaOperator { coeffs: out })
    }

    fn add(&self, other: &ThetaOperator) -> ThetaOperator {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = MFPoly::zero();
        ThetaOperator {
            coeffs: (0..n)
                .map(|j| {
                    self.coeffs
                        .get(j)
                        .unwrap_or(&zero)
                        .add(other.coeffs.get(j).unwrap_or(&zero))
                })
                .collect(),
        }
    }

    fn mul_form(&self, p: &MFPoly) -> ThetaOperator {
        ThetaOperator {
            coeffs: self.coeffs.iter().map(|c| c.mul(p)).collect(),
        }
    }

    /// `sum_j R_j y_j` with `y_0 = y`, `y_(j+1) = Theta_(2j) y_j`.
    pub fn apply(&self, y: &QSeries) -> Result<QSeries> {
        let n = rat::ceil(&(y.prec() - y.offset())).to_usize().unwrap_or(0);
        let mut yj = y.clone();
        let mut acc: Option<QSeries> = None;
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                yj = modpoly::theta_h(&yj, &int(2 * (j as i64 - 1)))?;
            }
            if c.is_zero() {
                continue;
            }
            let term = c.to_qseries(n)?.mul(&yj)?;
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| QSeries::zero(y.prec().clone())))
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let op = match j {
                0 => String::new(),
                1 => "Θ".to_string(),
                _ => format!("Θ^{j}"),
            };
            parts.push(match (c == &MFPoly::one(), j) {
                (true, 0) => "1".to_string(),
                (true, _) => op,
                (false, 0) => format!("({c})"),
                (false, _) => format!("({c})*{op}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `D_(m+1)` from `D_0 = 1`, `D_1 = Theta`,
/// `D_(i+1) = Theta D_i + i (m - i + 1) Q D_(i-1)`.
pub fn d_operator(q: &MFPoly, m: u32) -> Result<ThetaOperator> {
    let mut prev = ThetaOperator {
        coeffs: vec![MFPoly::one()],
    };
    let mut cur = ThetaOperator {
        coeffs: vec![MFPoly::zero(), MFPoly::one()],
    };
    for i in 1..=m as i64 {
        let c = BigRational::from_integer(BigInt::from(i * (m as i64 - i + 1)));
        let next = cur.theta_compose()?.add(&prev.mul_form(&q.scale(&c)));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `R_1, ..., R_m` from `R_0 = 0`, `R_1 = m Q`,
/// `R_(i+1) = Theta R_i + (i+1)(m-i) Q R_(i-1)`.
pub fn r_recursion(q: &MFPoly, m: u32) -> Result<Vec<MFPoly>> {
    if q.weight().is_some_and(|w| w != 4) {
        return Err(Error::InvalidArgument("Q must have weight 4".into()));
    }
    let m = m as i64;
    let mut out = Vec::new();
    let mut prev = MFPoly::zero();
    let mut cur = q.scale(&int(m));
    for i in 1..=m {
        out.push(cur.clone());
        if i == m {
            break;
        }
        let next = cur
            .theta()?
            .add(&q.mul(&prev).scale(&int((i + 1) * (m - i))));
        prev = cur;
        cur = next;
    }
    Ok(out)
}

/// Polynomial in a formal parameter `lambda` with form coefficients;
/// `coeffs[d]` multiplies `lambda^d`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct LambdaForm {
    coeffs: Vec<MFPoly>,
}

impl LambdaForm {
    fn theta(&self) -> Result<LambdaForm> {
        Ok(LambdaForm {
            coeffs: self
                .coeffs
                .iter()
                .map(MFPoly::theta)
                .collect::<Result<_>>()?,
        })
    }

    fn add(&self, other: &LambdaForm) -> LambdaForm {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = MFPoly::zero();
        LambdaForm {
            coeffs: (0..n)
                .map(|d| {
                    self.coeffs
                        .get(d)
                        .unwrap_or(&zero)
                        .add(other.coeffs.get(d).unwrap_or(&zero))
                })
                .collect(),
        }
    }

    /// Multiplication by `c lambda G4`.
    fn times_lambda_g4(&self, c: &BigRational) -> LambdaForm {
        let g = MFPoly::g4().scale(c);
        let mut coeffs = vec![MFPoly::zero()];
        coeffs.extend(self.coeffs.iter().map(|x| x.mul(&g)));
        LambdaForm { coeffs }
    }
}

/// Common rational roots in `lambda` of `R_m` for `Q = lambda G4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSet {
    pub m: u32,
    pub roots: Vec<BigRational>,
    /// Largest `lambda`-degree among the coefficient polynomials.
    pub lambda_degree: usize,
    /// `R_m` at `lambda = 1` is a nonzero form.
    pub nonzero_at_one: bool,
    /// The polynomial in `lambda`, for each monomial `E4^a E6^b`.
    pub coefficient_polys: Vec<((u32, u32), RatPoly)>,
}

/// Values of `lambda` for which `R_m(lambda G4)` vanishes.
pub fn r_root_set(m: u32) -> Result<RootSet> {
    let mi = m as i64;
    let q = LambdaForm {
        coeffs: vec![MFPoly::zero(), MFPoly::g4()],
    };
    let mut prev = LambdaForm::default();
    let mut cur = LambdaForm {
        coeffs: q.coeffs.iter().map(|c| c.scale(&int(mi))).collect(),
    };
    for i in 1..mi {
        let next = cur
            .theta()?
            .add(&prev.times_lambda_g4(&int((i + 1) * (mi - i))));
        prev = cur;
        cur = next;
    }
    let mut keys: Vec<(u32, u32)> = cur
        .coeffs
        .iter()
        .flat_map(|c| c.terms().map(|(k, _)| k).collect::<Vec<_>>())
        .collect();
    keys.sort();
    keys.dedup();
    let polys: Vec<((u32, u32), RatPoly)> = keys
        .into_iter()
        .map(|(a, b)| {
            (
                (a, b),
                RatPoly::new(cur.coeffs.iter().map(|c| c.coeff(a, b)).collect()),
            )
        })
        .collect();
    let mut g = RatPoly::zero();
    for (_, p) in &polys {
        g = g.gcd(p);
    }
    let lambda_degree = polys
        .iter()
        .filter_map(|(_, p)| p.degree())
        .max()
        .unwrap_or(0);
    let nonzero_at_one = polys
        .iter()
        .any(|(_, p)| !p.eval(&BigRational::one()).is_zero());
    Ok(RootSet {
        m,
        roots: g.rational_roots(),
        lambda_degree,
        nonzero_at_one,
        coefficient_polys: polys,
    })
}

/// The root set for `m = 12`.
pub fn r12_root_set() -> Result<RootSet> {
    r_root_set(12)
}

/// `G_(l, alpha) = Coeff_(x^(2l)) (1 - 3 E4 x^4 + 2 E6 x^6)^alpha`, summed over `2r + 3s = l`.
pub fn kz_coeff(l: u32, alpha: &BigRational) -> MFPoly {
    let mut out = MFPoly::zero();
    for s in 0..=l / 3 {
        let rest = l - 3 * s;
        if rest % 2 == 1 {
            continue;
        }
        let r = rest / 2;
        let c = rat::falling_factorial(alpha, (r + s) as u64)
            / BigRational::from_integer(rat::factorial(r as u64) * rat::factorial(s as u64))
            * BigRational::from_integer(BigInt::from(-3).pow(r) * BigInt::from(2).pow(s));
        out = out.add(&MFPoly::monomial(c, r, s));
    }
    out
}

/// `l! / 6^l * G_(l, alpha)`.
pub fn kz_normalized(l: u32, alpha: &BigRational) -> MFPoly {
    let c = BigRational::new(rat::factorial(l as u64), BigInt::from(6).pow(l));
    kz_coeff(l, alpha).scale(&c)
}

/// `Gbar_(l, m/3)` by `Gbar_0 = 1`, `Gbar_1 = 0`,
/// `Gbar_l = Theta Gbar_(l-1) + (l-1)(m-l+2)(-E4/18) Gbar_(l-2)`.
pub fn kz_recursion(l: u32, m: i64) -> Result<MFPoly> {
    let q = MFPoly::e4().scale(&frac(-1, 18));
    let mut prev = MFPoly::one();
    let mut cur = MFPoly::zero();
    if l == 0 {
        return Ok(prev);
    }
    for k in 2..=l as i64 {
        let next = cur
            .theta()?
            .add(&q.mul(&prev).scale(&int((k - 1) * (m - k + 2))));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `(-1)^(m+1) (m+1)!/6^(m+1) G_(m+1, m/3)`, the form `W'/W` for `Sym^m` of
/// the Weber pair.
pub fn kz_sym_form(m: u32) -> MFPoly {
    let f = kz_normalized(m + 1, &frac(m as i64, 3));
    if m.is_multiple_of(2) {
        f.neg()
    } else {
        f
    }
}

/// The Weber pair `(weber8_1, weber8_2)` known below `offset + n`.
pub fn weber_pair(n: usize) -> Result<(QSeries, QSeries)> {
    Ok((
        NamedSeries::Weber8First.series(n)?,
        NamedSeries::Weber8Second.series(n)?,
    ))
}

/// `W'/W` for `Sym^m` of the Weber pair by three independent routes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeberRoutes {
    pub m: u32,
    pub wronskian: MFPoly,
    pub recursion: MFPoly,
    pub closed_form: MFPoly,
}

impl WeberRoutes {
    pub fn agree(&self) -> bool {
        self.wronskian == self.recursion && self.recursion == self.closed_form
    }
}

pub fn weber_routes(m: u32, n: usize, exec: Exec) -> Result<WeberRoutes> {
    let (f, g) = weber_pair(n)?;
    let basis = sym_basis(&f, &g, m)?;
    let wronskian = wronskian::quotient_form_with(&basis, 2 * m + 2, exec)?;
    let rm = r_recursion(&MFPoly::g4().scale(&int(-40)), m)?
        .pop()
        .unwrap_or_default();
    let recursion = if m.is_multiple_of(2) { rm.neg() } else { rm };
    Ok(WeberRoutes {
        m,
        wronskian,
        recursion,
        closed_form: kz_sym_form(m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etaprod::named_series;

    #[test]
    fn sym_basis_offsets() {
        let (f, g) = weber_pair(10).unwrap();
        let b = sym_basis(&f, &g, 1).unwrap();
        assert_eq!(b, vec![g.clone(), f.clone()]);
        let b = sym_basis(&f, &g, 2).unwrap();
        let offs: Vec<_> = b.iter().map(|s| s.offset().clone()).collect();
        assert_eq!(offs, vec![frac(2, 3), frac(1, 6), frac(-1, 3)]);
        let ch1 = named_series("ch1", 10).unwrap();
        let ch2 = named_series("ch2", 10).unwrap();
        let b = sym_basis(&ch1, &ch2, 12).unwrap();
        for (i, s) in b.iter().enumerate() {
            assert_eq!(s.offset(), &frac(i as i64 - 1, 5));
        }
    }

    #[test]
    fn d3_matches_display() {
        // Q = G4 symbolically: D_3 = Theta^3 + 4 Q Theta + 2 Theta(Q)
        let q = MFPoly::g4();
        let d3 = d_operator(&q, 2).unwrap();
        assert_eq!(d3.coeffs.len(), 4);
        assert_eq!(d3.coeffs[3], MFPoly::one());
        assert!(d3.coeffs[2].is_zero());
        assert_eq!(d3.coeffs[1], q.scale(&int(4)));
        assert_eq!(d3.coeffs[0], q.theta().unwrap().scale(&int(2)));
        for m in 1..=8 {
            let q = MFPoly::g4().scale(&frac(-7, 3));
            let d = d_operator(&q, m).unwrap();
            assert_eq!(
                d.constant_coeff(),
                r_recursion(&q, m).unwrap().last().unwrap()
            );
        }
    }

    #[test]
    fn recursion_small_cases() {
        let q = MFPoly::g4().scale(&int(-40));
        assert_eq!(
            r_recursion(&q, 1).unwrap(),
            vec![MFPoly::e4().scale(&frac(-1, 18))]
        );
        let r = r_recursion(&MFPoly::g4().scale(&frac(-11, 5)), 12).unwrap();
        assert!(r[11].is_zero());
        for (i, ri) in r.iter().enumerate() {
            assert!(ri.is_zero() || ri.weight() == Some(2 * i as u32 + 4));
        }
    }

    #[test]
    fn root_set_of_r12() {
        let rs = r12_root_set().unwrap();
        let mut want = vec![int(0), frac(-11, 5), frac(-25, 4), int(-15), int(-40)];
        want.sort();
        assert_eq!(rs.roots, want);
        assert!(rs.nonzero_at_one);
        assert_eq!(rs.lambda_degree, 6);
    }

    #[test]
    fn kz_low_orders() {
        for m in 1..6 {
            let a = frac(m, 3);
            assert!(kz_coeff(1, &a).is_zero());
            assert_eq!(kz_normalized(2, &a), MFPoly::e4().scale(&frac(-m, 18)));
            assert_eq!(kz_normalized(3, &a), MFPoly::e6().scale(&frac(m, 54)));
        }
        assert_eq!(kz_sym_form(1), MFPoly::e4().scale(&frac(-1, 18)));
    }

    #[test]
    fn kz_closed_form_matches_recursion() {
        for m in 1..=25i64 {
            for l in 2..=14 {
                assert_eq!(
                    kz_normalized(l, &frac(m, 3)),
                    kz_recursion(l, m).unwrap(),
                    "l={l} m={m}"
                );
            }
        }
    }

    #[test]
    fn second_order_equations() {
        for (name, lambda) in [
            ("ch1", frac(-11, 5)),
            ("ch2", frac(-11, 5)),
            ("weber8_1", int(-40)),
            ("a1_f2", frac(-25, 4)),
        ] {
            let y = named_series(name, 30).unwrap();
            let op = d_operator(&MFPoly::g4().scale(&lambda), 1).unwrap();
            assert!(op.apply(&y).unwrap().is_zero(), "{name}");
        }
        let y = named_series("ch1", 30).unwrap();
        let op = d_operator(&MFPoly::g4().scale(&int(-40)), 1).unwrap();
        assert!(!op.apply(&y).unwrap().is_zero());
    }

    #[test]
    fn symmetric_power_operator_kills_products() {
        let (f, g) = weber_pair(25).unwrap();
        let q = MFPoly::g4().scale(&int(-40));
        for m in 1..=3 {
            let op = d_operator(&q, m).unwrap();
            for s in sym_basis(&f, &g, m).unwrap() {
                assert!(op.apply(&s).unwrap().is_zero(), "m={m}");
            }
        }
    }

    #[test]
    fn weber_routes_small_m() {
        for m in 1..=3 {
            let r = weber_routes(m, 30, Exec::Sequential).unwrap();
            assert!(r.agree(), "{r:?}");
        }
    }

    #[test]
    fn sym_wronskian_rr_m2() {
        let ch1 = named_series("ch1", 30).unwrap();
        let ch2 = named_series("ch2", 30).unwrap();
        let rep = check_sym_wronskian(&ch1, &ch2, 2, Exec::Sequential).unwrap();
        assert_eq!(rep.constant, BigInt::from(2));
        assert!(rep.product_formula);
        assert_eq!(rep.eta_power, Some(true));
        let rep = check_sym_wronskian(&ch1, &ch2, 1, Exec::Sequential).unwrap();
        assert_eq!(rep.constant, BigInt::one());
        assert!(rep.product_formula);
    }
}
