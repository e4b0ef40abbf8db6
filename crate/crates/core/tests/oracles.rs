//! Known expansions and values, independent of the code under test.

use num_rational::BigRational;

use modwron::etaprod::{self, NamedSeries, Route};
use modwron::modpoly::{self, MFPoly, Normalization};
use modwron::rat::{frac, int};
use modwron::{symmpow, wronskian, QSeries};

fn ints(s: &QSeries, k: usize) -> Vec<BigRational> {
    s.coeffs().iter().take(k).cloned().collect()
}

fn want(c: &[i64]) -> Vec<BigRational> {
    c.iter().map(|&x| int(x)).collect()
}

#[test]
fn ramanujan_tau() {
    let d = modpoly::delta_std(8);
    assert_eq!(d.offset(), &int(1));
    assert_eq!(
        ints(&d, 7),
        want(&[1, -24, 252, -1472, 4830, -6048, -16744])
    );
}

#[test]
fn eisenstein_expansions() {
    let e4 = modpoly::eisenstein(4, Normalization::E, 5).unwrap();
    assert_eq!(ints(&e4, 4), want(&[1, 240, 2160, 6720]));
    let e6 = modpoly::eisenstein(6, Normalization::E, 5).unwrap();
    assert_eq!(ints(&e6, 4), want(&[1, -504, -16632, -122976]));
    let e2 = modpoly::g2(4).scale(&int(-12));
    assert_eq!(ints(&e2, 4), want(&[1, -24, -72, -96]));
}

#[test]
fn j_invariant() {
    let j = modpoly::j_series(4).unwrap();
    assert_eq!(j.offset(), &int(-1));
    assert_eq!(ints(&j, 3), want(&[1, 744, 196884]));
}

#[test]
fn rogers_ramanujan_characters() {
    // partitions into parts ±2 mod 5, and ±1 mod 5
    let ch1 = NamedSeries::Ch1.series(10).unwrap();
    assert_eq!(ch1.offset(), &frac(11, 60));
    assert_eq!(ints(&ch1, 10), want(&[1, 0, 1, 1, 1, 1, 2, 2, 3, 3]));
    let ch2 = NamedSeries::Ch2.series(10).unwrap();
    assert_eq!(ints(&ch2, 10), want(&[1, 1, 1, 1, 2, 2, 3, 3, 4, 5]));
    for s in [NamedSeries::Ch1, NamedSeries::Ch2] {
        let a = s.series_by(Route::Product, 40).unwrap();
        let b = s.series_by(Route::Theta, 40).unwrap();
        assert!(a.agrees_with(&b).unwrap());
    }
}

#[test]
fn affine_a1_characters() {
    for s in [NamedSeries::A1F1, NamedSeries::A1F2] {
        let a = s.series_by(Route::Product, 40).unwrap();
        let b = s.series_by(Route::Theta, 40).unwrap();
        assert!(a.agrees_with(&b).unwrap(), "{s}");
    }
    let f2 = NamedSeries::A1F2.series(3).unwrap();
    assert_eq!(f2.offset(), &frac(5, 24));
    assert_eq!(f2.leading_coeff(), Some(&int(2)));
}

#[test]
fn weber_eighth_powers() {
    let w = NamedSeries::Weber8First.series(3).unwrap();
    assert_eq!(w.offset(), &frac(-1, 6));
    assert_eq!(ints(&w, 3), want(&[1, 8, 28]));
    let w2 = NamedSeries::Weber8Second.series(3).unwrap();
    assert_eq!(ints(&w2, 3), want(&[1, 8, 36]));
}

#[test]
fn eta_offsets() {
    let e = etaprod::eta(&frac(1, 5), 6).unwrap();
    assert_eq!(e.offset(), &frac(1, 120));
    assert_eq!(e.step_den(), 5);
}

#[test]
fn ramanujan_derivatives() {
    assert_eq!(MFPoly::g4().theta().unwrap(), MFPoly::g6().scale(&int(14)));
    assert_eq!(
        MFPoly::g6().theta().unwrap(),
        MFPoly::g4().pow(2).scale(&frac(60, 7))
    );
}

#[test]
fn small_quotient_forms() {
    let (f, g) = symmpow::weber_pair(20).unwrap();
    let q = wronskian::quotient_form(&[g.clone(), f.clone()], 4).unwrap();
    assert_eq!(q, MFPoly::e4().scale(&frac(-1, 18)));
    let ch1 = NamedSeries::Ch1.series(20).unwrap();
    let ch2 = NamedSeries::Ch2.series(20).unwrap();
    let q = wronskian::quotient_form(&[ch2, ch1], 4).unwrap();
    assert_eq!(q, MFPoly::g4().scale(&frac(-11, 5)));
}

#[test]
fn e12_divisor_polynomial() {
    let p = modpoly::divisor_polynomial(&MFPoly::eisenstein(12).unwrap()).unwrap();
    assert_eq!(p.coeffs(), &[frac(-432000, 691), int(1)]);
}
