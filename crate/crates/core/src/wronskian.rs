//! Wronskians of q-series bases with respect to `q d/dq`, echelon bases,
//! the quotient `W'/W` as a modular form, and the vanishing criterion that
//! turns `W' = 0` into a linear relation with a nonzero constant.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::detmod::{self, SeriesMatrix};
use crate::error::{Error, Result};
use crate::etaprod;
use crate::modpoly::{self, MFPoly};
use crate::par::Exec;
use crate::qseries::{lattice_cap, QSeries};
use crate::rat::{self, int};

/// A basis with strictly increasing leading exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularBasis {
    pub series: Vec<QSeries>,
    /// Leading exponents, strictly increasing.
    pub exponents: Vec<BigRational>,
    /// Input position each echelon vector was derived from.
    pub origin: Vec<usize>,
    /// Determinant of the change of basis from the input list.
    pub transform_det: BigRational,
}

/// Outcome of echelonization when the input turns out dependent.
struct Dependence {
    index: usize,
    /// Precision of the vanishing combination.
    prec: BigRational,
    /// Sum of the valuations of every other row.
    other_valuations: BigRational,
}

fn echelonize_inner(series: &[QSeries]) -> std::result::Result<ModularBasis, Box<Dependence>> {
    let mut done: Vec<(QSeries, usize)> = Vec::new();
    let mut det = BigRational::one();
    for (i, f) in series.iter().enumerate() {
        let mut v = f.clone();
        let mut reduced = false;
        loop {
            if v.is_zero() {
                let others = done
                    .iter()
                    .map(|(u, _)| u.offset().clone())
                    .chain(series[i + 1..].iter().map(|s| s.offset().clone()))
                    .fold(BigRational::zero(), |a, b| a + b);
                return Err(Box::new(Dependence {
                    index: i,
                    prec: v.prec().clone(),
                    other_valuations: others,
                }));
            }
            let Some((u, _)) = done.iter().find(|(u, _)| u.offset() == v.offset()) else {
                break;
            };
            let c = v.leading_coeff().unwrap() / u.leading_coeff().unwrap();
            v = v.sub(&u.scale(&c)).expect("aligned lattices");
            reduced = true;
        }
        if reduced {
            let lc = v.leading_coeff().unwrap().clone();
            det /= &lc;
            v = v.scale(&lc.recip());
        }
        done.push((v, i));
    }
    // sort by exponent, tracking the permutation sign
    let mut order: Vec<usize> = (0..done.len()).collect();
    order.sort_by(|&a, &b| done[a].0.offset().cmp(done[b].0.offset()));
    let mut inversions = 0usize;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            if order[a] > order[b] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 1 {
        det = -det;
    }
    let series: Vec<QSeries> = order.iter().map(|&k| done[k].0.clone()).collect();
    Ok(ModularBasis {
        exponents: series.iter().map(|s| s.offset().clone()).collect(),
        origin: order.iter().map(|&k| done[k].1).collect(),
        series,
        transform_det: det,
    })
}

/// Triangular change of basis to strictly increasing leading exponents.
/// The first series with a given leading exponent keeps it; later ones are
/// reduced against it and rescaled to leading coefficient one.
pub fn echelonize(series: &[QSeries]) -> Result<ModularBasis> {
    echelonize_inner(series).map_err(|d| Error::Dependent { index: d.index })
}

/// `W(f_1, ..., f_k) = det((q d/dq)^j f_i)`.
pub fn wronskian(basis: &[QSeries]) -> Result<QSeries> {
    wronskian_with(basis, Exec::default())
}

/// Wronskian of the derived list `f_1', ..., f_k'`.
pub fn wronskian_derived(basis: &[QSeries]) -> Result<QSeries> {
    wronskian_derived_with(basis, Exec::default())
}

pub fn wronskian_derived_with(basis: &[QSeries], exec: Exec) -> Result<QSeries> {
    let derived: Vec<QSeries> = basis.iter().map(QSeries::derive).collect();
    wronskian_with(&derived, exec)
}

pub fn wronskian_with(basis: &[QSeries], exec: Exec) -> Result<QSeries> {
    if basis.is_empty() {
        return Err(Error::InvalidArgument("empty basis".into()));
    }
    let eb = match echelonize_inner(basis) {
        Ok(b) => b,
        Err(d) => return Ok(QSeries::zero(d.prec + d.other_valuations)),
    };
    let w = echelon_wronskian(&eb, exec)?;
    Ok(w.scale(&eb.transform_det.recip()))
}

/// Wronskian of an echelon basis: `q^(sum h_i) det((D + h_i)^j g_i)` with
/// `g_i = q^(-h_i) f_i`.
pub fn echelon_wronskian(eb: &ModularBasis, exec: Exec) -> Result<QSeries> {
    let k = eb.series.len();
    let hsum = eb.exponents.iter().fold(BigRational::zero(), |a, b| a + b);
    let mut lat = 1u64;
    for s in &eb.series {
        lat = rat::lcm_u64(lat, s.step_den());
    }
    if lat > lattice_cap() {
        return Err(Error::LatticeCap {
            needed: lat,
            cap: lattice_cap(),
        });
    }
    // relative precision common to all rows
    let rel = eb
        .series
        .iter()
        .map(|s| s.prec() - s.offset())
        .min()
        .unwrap();
    let latr = int(lat as i64);
    let n = rat::ceil(&(&rel * &latr)).to_usize().unwrap_or(0);
    if n == 0 {
        return Ok(QSeries::zero(&hsum + rel));
    }
    let mut matrix: SeriesMatrix = Vec::with_capacity(k);
    let mut scale = BigInt::one();
    for (s, h) in eb.series.iter().zip(&eb.exponents) {
        let stride = (lat / s.step_den()) as usize;
        let mut row: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n]; k];
        for (idx, c) in s.coeffs().iter().enumerate() {
            let t = idx * stride;
            if t >= n {
                break;
            }
            if c.is_zero() {
                continue;
            }
            let e = BigRational::new(BigInt::from(t), BigInt::from(lat)) + h;
            let mut v = c.clone();
            for entry in row.iter_mut() {
                entry[t] = v.clone();
                v *= &e;
            }
        }
        let den = row
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let int_row = row
            .into_iter()
            .map(|entry| {
                entry
                    .into_iter()
                    .map(|c| c.numer() * (&den / c.denom()))
                    .collect()
            })
            .collect();
        matrix.push(int_row);
        scale *= den;
    }
    let det = detmod::series_det(&matrix, n, exec)?;
    let coeffs = det
        .into_iter()
        .map(|c| BigRational::new(c, scale.clone()))
        .collect();
    Ok(QSeries::from_parts(hsum.clone(), lat, coeffs, &hsum + rel))
}

/// Scales to leading coefficient one.
pub fn normalize(w: &QSeries) -> Result<QSeries> {
    w.normalize()
}

/// `W'/W` identified as a form of the given weight (zero when `W'` vanishes
/// to the working precision).
pub fn quotient_form(basis: &[QSeries], weight: u32) -> Result<MFPoly> {
    quotient_form_with(basis, weight, Exec::default())
}

pub fn quotient_form_with(basis: &[QSeries], weight: u32, exec: Exec) -> Result<MFPoly> {
    let w = wronskian_with(basis, exec)?;
    if w.is_zero() {
        return Err(Error::NotInvertible);
    }
    let wd = wronskian_derived_with(basis, exec)?;
    if wd.is_zero() {
        return Ok(MFPoly::zero());
    }
    modpoly::identify(&wd.mul(&w.invert()?)?, weight)
}

/// The q-series `W'/W` itself.
pub fn quotient_series(basis: &[QSeries], exec: Exec) -> Result<QSeries> {
    let w = wronskian_with(basis, exec)?;
    let wd = wronskian_derived_with(basis, exec)?;
    wd.mul(&w.invert()?)
}

/// How the holomorphy of `W'/W` is justified.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Holomorphy {
    /// Taken on trust from the caller.
    Assumed,
    /// Checked: the normalized Wronskian equals `eta^(2k(k-1))` to precision,
    /// so `W` has no zeros in the upper half-plane.
    EtaPower,
}

/// `sum lambda_j f_(i_j) = constant`, with `lambda_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lambdas: Vec<BigRational>,
    pub constant: BigRational,
    /// The relation holds below this exponent.
    pub prec: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub forced_zero: bool,
    pub r: usize,
    /// Positions in the echelon basis of the members with `ord = 0, 1, ..., r`.
    pub integer_indices: Vec<usize>,
    pub relation: Option<Relation>,
    pub holomorphy: Option<Holomorphy>,
    pub diagnostic: String,
}

/// Checks the holomorphy hypothesis by comparing the normalized Wronskian with a power of eta.
pub fn holomorphy_by_eta_power(basis: &[QSeries], exec: Exec) -> Result<bool> {
    let k = basis.len() as i64;
    let w = wronskian_with(basis, exec)?;
    if w.is_zero() {
        return Ok(false);
    }
    let w = w.normalize()?;
    let rel = rat::ceil(&(w.prec() - w.offset())).to_usize().unwrap_or(0);
    let eta = etaprod::eta(&int(1), rel)?.pow(2 * k * (k - 1))?;
    Ok(eta.agrees_with(&w)? && eta.offset() == w.offset())
}

/// The vanishing criterion: if the members with integral exponents have
/// orders `0, 1, ..., r` with `r >= floor(k/6)` and `W'/W` is holomorphic,
/// then `W' = 0`, and when those are the only integral members, a combination
/// of them is a nonzero constant. The relation is solved for and then
/// verified on every known coefficient.
pub fn vanishing_check(
    basis: &[QSeries],
    holomorphy: Holomorphy,
    exec: Exec,
) -> Result<VanishingReport> {
    let eb = echelonize(basis)?;
    let k = eb.series.len();
    let mut report = VanishingReport {
        forced_zero: false,
        r: 0,
        integer_indices: Vec::new(),
        relation: None,
        holomorphy: None,
        diagnostic: String::new(),
    };
    let integral: Vec<usize> = (0..k)
        .filter(|&i| eb.exponents[i].is_integer() && eb.series[i].step_den() == 1)
        .collect();
    if integral.is_empty() {
        report.diagnostic = "no member has integral exponents".into();
        return Ok(report);
    }
    let consecutive = integral
        .iter()
        .enumerate()
        .all(|(j, &i)| eb.exponents[i] == int(j as i64));
    if !consecutive {
        report.diagnostic = "integral members do not have orders 0, 1, ..., r".into();
        return Ok(report);
    }
    let r = integral.len() - 1;
    report.r = r;
    report.integer_indices = integral.clone();
    if r < k / 6 {
        report.diagnostic = format!("r = {r} is below floor(k/6) = {}", k / 6);
        return Ok(report);
    }
    let justified = match holomorphy {
        Holomorphy::Assumed => true,
        Holomorphy::EtaPower => holomorphy_by_eta_power(&eb.series, exec)?,
    };
    if !justified {
        report.diagnostic = "normalized Wronskian is not the expected power of eta".into();
        return Ok(report);
    }
    report.holomorphy = Some(holomorphy);
    report.forced_zero = true;
    // lambda_0 = 1; kill the q^1..q^r coefficients of sum lambda_j f_(i_j)'
    let members: Vec<&QSeries> = integral.iter().map(|&i| &eb.series[i]).collect();
    let derived: Vec<QSeries> = members.iter().map(|s| s.derive()).collect();
    let mut lambdas = vec![BigRational::one()];
    for n in 1..=r {
        let e = int(n as i64);
        let mut s = BigRational::zero();
        for (j, l) in lambdas.iter().enumerate() {
            s += l * derived[j]
                .coeff_at(&e)
                .ok_or(Error::InsufficientPrecision {
                    have: n,
                    need: r + 1,
                })?;
        }
        let pivot = derived[n]
            .coeff_at(&e)
            .ok_or(Error::InsufficientPrecision {
                have: n,
                need: r + 1,
            })?;
        lambdas.push(-s / pivot);
    }
    let mut combo = QSeries::zero(members[0].prec().clone());
    for (l, m) in lambdas.iter().zip(&members) {
        combo = combo.add(&m.scale(l))?;
    }
    let constant = combo.coeff_at(&int(0)).unwrap_or_default();
    let rest = combo.sub(&QSeries::constant(constant.clone(), combo.prec().clone()))?;
    if rest.is_zero() && !constant.is_zero() {
        report.relation = Some(Relation {
            lambdas,
            constant,
            prec: rest.prec().clone(),
        });
    } else {
        report.diagnostic = match rest.valuation() {
            Ok(e) => format!("combination is not constant at exponent {}", rat::show(&e)),
            Err(_) => "combination vanishes identically".into(),
        };
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etaprod::named_series;
    use crate::rat::frac;

    fn poly(c: &[i64], prec: i64) -> QSeries {
        QSeries::from_parts(int(0), 1, c.iter().map(|&x| int(x)).collect(), int(prec))
    }

    #[test]
    fn single_and_repeated() {
        let one = QSeries::one(int(10));
        assert_eq!(wronskian(std::slice::from_ref(&one)).unwrap(), one);
        let f = named_series("ch1", 10).unwrap();
        assert!(wronskian(&[f.clone(), f.clone()]).unwrap().is_zero());
        let f1 = f.scale(&int(3));
        assert!(wronskian(&[f, f1]).unwrap().is_zero());
    }

    #[test]
    fn echelon_examples() {
        let b = echelonize(&[poly(&[1, 1], 10), poly(&[1], 10)]).unwrap();
        assert_eq!(b.exponents, vec![int(0), int(1)]);
        assert_eq!(b.series[1], QSeries::monomial(int(1), int(1), int(10)));
        let ch1 = named_series("ch1", 10).unwrap();
        let ch2 = named_series("ch2", 10).unwrap();
        let b = echelonize(&[ch1.clone(), ch2.clone()]).unwrap();
        assert_eq!(b.exponents, vec![frac(-1, 60), frac(11, 60)]);
        assert_eq!(b.origin, vec![1, 0]);
        assert_eq!(b.transform_det, int(-1));
        assert_eq!(
            echelonize(&[ch1.clone(), ch1.scale(&int(2))]),
            Err(Error::Dependent { index: 1 })
        );
    }

    #[test]
    fn wronskian_of_rr_pair_is_eta_fourth() {
        let ch1 = named_series("ch1", 30).unwrap();
        let ch2 = named_series("ch2", 30).unwrap();
        let w = wronskian(&[ch2.clone(), ch1.clone()]).unwrap();
        assert_eq!(w.offset(), &frac(1, 6));
        assert_eq!(w.leading_coeff(), Some(&frac(1, 5)));
        let eta4 = etaprod::eta(&int(1), 30).unwrap().pow(4).unwrap();
        assert!(normalize(&w).unwrap().agrees_with(&eta4).unwrap());
        // swapping the rows flips the sign
        assert_eq!(wronskian(&[ch1, ch2]).unwrap(), w.neg());
    }

    #[test]
    fn derived_wronskian_with_constant_vanishes() {
        let b = [
            QSeries::one(int(10)),
            QSeries::monomial(int(1), int(1), int(10)),
        ];
        assert!(wronskian_derived(&b).unwrap().is_zero());
        let f = named_series("ch2", 10).unwrap();
        assert_eq!(
            wronskian_derived(std::slice::from_ref(&f)).unwrap(),
            f.derive()
        );
    }

    #[test]
    fn quotient_forms_of_pairs() {
        let w1 = named_series("weber8_1", 30).unwrap();
        let w2 = named_series("weber8_2", 30).unwrap();
        assert_eq!(
            quotient_form(&[w1, w2], 4).unwrap(),
            MFPoly::e4().scale(&frac(-1, 18))
        );
        let ch1 = named_series("ch1", 30).unwrap();
        let ch2 = named_series("ch2", 30).unwrap();
        assert_eq!(
            quotient_form(&[ch2, ch1], 4).unwrap(),
            MFPoly::g4().scale(&frac(-11, 5))
        );
    }

    #[test]
    fn cofactor_and_modular_routes_agree() {
        // five rows: above the cofactor threshold
        let ch1 = named_series("ch1", 25).unwrap();
        let ch2 = named_series("ch2", 25).unwrap();
        let basis: Vec<QSeries> = (0..=4)
            .map(|i| ch1.pow(i).unwrap().mul(&ch2.pow(4 - i).unwrap()).unwrap())
            .collect();
        let seq = wronskian_with(&basis, Exec::Sequential).unwrap();
        let par = wronskian_with(&basis, Exec::Parallel).unwrap();
        assert_eq!(seq, par);
        // constant of the symmetric-power formula: 1! 2! 3! 4! = 288
        let w_u = wronskian(&[ch2, ch1]).unwrap();
        let want = w_u.pow(10).unwrap().scale(&int(288));
        assert!(seq.agrees_with(&want).unwrap());
    }

    #[test]
    fn vanishing_without_integral_members() {
        let ch1 = named_series("ch1", 10).unwrap();
        let ch2 = named_series("ch2", 10).unwrap();
        let rep = vanishing_check(&[ch1, ch2], Holomorphy::Assumed, Exec::Sequential).unwrap();
        assert!(!rep.forced_zero);
        assert!(rep.relation.is_none());
    }
}
