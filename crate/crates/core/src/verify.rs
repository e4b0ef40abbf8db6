//! Registry of q-series identities and the full verification suite.

use std::time::{Duration, Instant};

use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::etaprod::{self, NamedSeries, ProductFactor, ProductSpec};
use crate::modpoly::MFPoly;
use crate::par::{self, Exec};
use crate::partitions::{self, Recurrence};
use crate::qseries::QSeries;
use crate::rat::{self, frac, int};
use crate::ssing::{self, SsRoute};
use crate::symmpow;
use crate::wronskian::{self, Holomorphy};

/// Identities checked by two-sided expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityId {
    Wa,
    Wat2,
    Wa2ch,
    Ex1,
    Ex2,
    Ex3,
    OdeRr,
    OdeWeber,
    OdeA1,
    Chprod,
    F1f2,
}

impl IdentityId {
    pub const ALL: [IdentityId; 11] = [
        IdentityId::Wa,
        IdentityId::Wat2,
        IdentityId::Wa2ch,
        IdentityId::Ex1,
        IdentityId::Ex2,
        IdentityId::Ex3,
        IdentityId::OdeRr,
        IdentityId::OdeWeber,
        IdentityId::OdeA1,
        IdentityId::Chprod,
        IdentityId::F1f2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            IdentityId::Wa => "wa",
            IdentityId::Wat2 => "wat2",
            IdentityId::Wa2ch => "wa2ch",
            IdentityId::Ex1 => "ex1",
            IdentityId::Ex2 => "ex2",
            IdentityId::Ex3 => "ex3",
            IdentityId::OdeRr => "ode_rr",
            IdentityId::OdeWeber => "ode_weber",
            IdentityId::OdeA1 => "ode_a1",
            IdentityId::Chprod => "chprod",
            IdentityId::F1f2 => "f1f2",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            IdentityId::Wa => "1/R - 1 - R = eta(tau/5)/eta(5 tau)",
            IdentityId::Wat2 => "1/R^5 - 11 - R^5 = (eta(tau)/eta(5 tau))^6",
            IdentityId::Wa2ch => "ch2^11 ch1 - 11 ch1^6 ch2^6 - ch1^11 ch2 = 1",
            IdentityId::Ex1 => "2 f1/f2 - 2 f2/f1 = (eta(tau/2)/eta(2 tau))^4",
            IdentityId::Ex2 => "f1^5 f2 - f2^5 f1 = 2",
            IdentityId::Ex3 => "prod (1+q^(2n-1))^8 - 16 q prod (1+q^(2n))^8 = prod (1-q^(2n-1))^8",
            IdentityId::OdeRr => "Theta^2 y - 11/5 G4 y = 0 for y = ch1, ch2",
            IdentityId::OdeWeber => "Theta^2 y - 40 G4 y = 0 for the Weber eighth powers",
            IdentityId::OdeA1 => "Theta^2 y - 25/4 G4 y = 0 for f1, f2",
            IdentityId::Chprod => "ch1 ch2 = eta(5 tau)/eta(tau)",
            IdentityId::F1f2 => "f1 f2 = 2 (eta(2 tau)/eta(tau))^4",
        }
    }

    /// Pairs `(lhs, rhs)` expanded so that both are known through `q^n`.
    fn sides(self, n: usize) -> Result<Vec<(QSeries, QSeries)>> {
        let m = n + 3;
        let eta = |num: i64, den: i64| etaprod::eta(&frac(num, den), m);
        let named = |s: NamedSeries| s.series(m);
        let pair = |l: QSeries, r: QSeries| Ok(vec![(l, r)]);
        match self {
            IdentityId::Wa => {
                let r = named(NamedSeries::RrCf)?;
                let lhs = r.invert()?.sub(&QSeries::one(r.prec().clone()))?.sub(&r)?;
                pair(lhs, eta(1, 5)?.mul(&eta(5, 1)?.invert()?)?)
            }
            IdentityId::Wat2 => {
                let r5 = named(NamedSeries::RrCf)?.pow(5)?;
                let lhs = r5
                    .invert()?
                    .sub(&QSeries::constant(int(11), r5.prec().clone()))?
                    .sub(&r5)?;
                pair(lhs, eta(1, 1)?.mul(&eta(5, 1)?.invert()?)?.pow(6)?)
            }
            IdentityId::Wa2ch => {
                let c1 = named(NamedSeries::Ch1)?;
                let c2 = named(NamedSeries::Ch2)?;
                let a = c2.pow(11)?.mul(&c1)?;
                let b = c1.pow(6)?.mul(&c2.pow(6)?)?.scale(&int(11));
                let c = c1.pow(11)?.mul(&c2)?;
                let lhs = a.sub(&b)?.sub(&c)?;
                let prec = lhs.prec().clone();
                pair(lhs, QSeries::one(prec))
            }
            IdentityId::Ex1 => {
                let f1 = named(NamedSeries::A1F1)?;
                let f2 = named(NamedSeries::A1F2)?;
                let lhs = f1
                    .mul(&f2.invert()?)?
                    .sub(&f2.mul(&f1.invert()?)?)?
                    .scale(&int(2));
                pair(lhs, eta(1, 2)?.mul(&eta(2, 1)?.invert()?)?.pow(4)?)
            }
            IdentityId::Ex2 => {
                let f1 = named(NamedSeries::A1F1)?;
                let f2 = named(NamedSeries::A1F2)?;
                let lhs = f1.pow(5)?.mul(&f2)?.sub(&f2.pow(5)?.mul(&f1)?)?;
                let prec = lhs.prec().clone();
                pair(lhs, QSeries::constant(int(2), prec))
            }
            IdentityId::Ex3 => {
                let odd_plus = ProductSpec::new(int(0)).with(ProductFactor::plus(1, 2, 8));
                let even_plus = ProductSpec::new(int(1)).with(ProductFactor::plus(0, 2, 8));
                let odd_minus = ProductSpec::new(int(0)).with(ProductFactor::new(1, 2, 8));
                let lhs = etaprod::product_series(&odd_plus, m)
                    .sub(&etaprod::product_series(&even_plus, m).scale(&int(16)))?;
                pair(lhs, etaprod::product_series(&odd_minus, m))
            }
            IdentityId::OdeRr => ode_sides(frac(-11, 5), &[NamedSeries::Ch1, NamedSeries::Ch2], m),
            IdentityId::OdeWeber => ode_sides(
                int(-40),
                &[NamedSeries::Weber8First, NamedSeries::Weber8Second],
                m,
            ),
            IdentityId::OdeA1 => {
                ode_sides(frac(-25, 4), &[NamedSeries::A1F1, NamedSeries::A1F2], m)
            }
            IdentityId::Chprod => {
                let lhs = named(NamedSeries::Ch1)?.mul(&named(NamedSeries::Ch2)?)?;
                pair(lhs, eta(5, 1)?.mul(&eta(1, 1)?.invert()?)?)
            }
            IdentityId::F1f2 => {
                let lhs = named(NamedSeries::A1F1)?.mul(&named(NamedSeries::A1F2)?)?;
                let rhs = eta(2, 1)?
                    .mul(&eta(1, 1)?.invert()?)?
                    .pow(4)?
                    .scale(&int(2));
                pair(lhs, rhs)
            }
        }
    }
}

impl std::fmt::Display for IdentityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for IdentityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IdentityId::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// `Theta^2 y + lambda G4 y` against zero, for each `y`, with the modular derivative `Theta`.
fn ode_sides(lambda: BigRational, ys: &[NamedSeries], m: usize) -> Result<Vec<(QSeries, QSeries)>> {
    let op = symmpow::d_operator(&MFPoly::g4().scale(&lambda), 1)?;
    ys.iter()
        .map(|s| {
            let lhs = op.apply(&s.series(m)?)?;
            let prec = lhs.prec().clone();
            Ok((lhs, QSeries::zero(prec)))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    InsufficientPrecision,
}

impl Status {
    fn worst(self, other: Status) -> Status {
        match (self, other) {
            (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
            (Status::InsufficientPrecision, _) | (_, Status::InsufficientPrecision) => {
                Status::InsufficientPrecision
            }
            _ => Status::Pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub id: String,
    pub status: Status,
    /// Comparison holds below this exponent (or the size of the check).
    pub precision: Option<String>,
    pub first_failure: Option<String>,
    pub note: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl VerificationReport {
    fn new(id: impl Into<String>, status: Status) -> Self {
        VerificationReport {
            id: id.into(),
            status,
            precision: None,
            first_failure: None,
            note: None,
            elapsed: Duration::ZERO,
        }
    }

    fn pass_if(id: impl Into<String>, ok: bool) -> Self {
        Self::new(id, if ok { Status::Pass } else { Status::Fail })
    }

    fn precision(mut self, p: impl ToString) -> Self {
        self.precision = Some(p.to_string());
        self
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.note = Some(n.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

fn lattice_den(s: &QSeries) -> u64 {
    if s.is_zero() {
        return 1;
    }
    rat::lcm_u64(s.step_den(), rat::denom_u64(s.offset()).unwrap_or(1))
}

/// Compares two series on every exponent up to and including `n`.
fn compare(
    lhs: &QSeries,
    rhs: &QSeries,
    n: usize,
) -> Result<(Status, BigRational, Option<BigRational>)> {
    let den = rat::lcm_u64(lattice_den(lhs), lattice_den(rhs));
    let bound = int(n as i64) + frac(1, den as i64);
    let (l, r) = (lhs.truncate(&bound), rhs.truncate(&bound));
    let prec = l.prec().min(r.prec()).clone();
    if let Some(e) = l.first_difference(&r)? {
        return Ok((Status::Fail, prec, Some(e)));
    }
    let status = if prec < bound {
        Status::InsufficientPrecision
    } else {
        Status::Pass
    };
    Ok((status, prec, None))
}

/// Expands both sides of an identity and compares them through `q^n`.
pub fn verify(id: IdentityId, n: usize) -> Result<VerificationReport> {
    let start = Instant::now();
    let mut status = Status::Pass;
    let mut prec: Option<BigRational> = None;
    let mut first = None;
    for (lhs, rhs) in id.sides(n)? {
        let (s, p, f) = compare(&lhs, &rhs, n)?;
        status = status.worst(s);
        prec = Some(prec.map_or(p.clone(), |q| q.min(p)));
        if first.is_none() {
            first = f;
        }
    }
    let mut report = VerificationReport::new(id.name(), status);
    report.precision = prec.map(|p| rat::show(&p));
    report.first_failure = first.map(|e| rat::show(&e));
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Pair families for symmetric-power checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Rr,
    Weber,
    A1,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Rr, Family::Weber, Family::A1];

    pub fn name(self) -> &'static str {
        match self {
            Family::Rr => "rr",
            Family::Weber => "weber",
            Family::A1 => "a1",
        }
    }

    /// `(f, g)` with relative precision `n`; `g` has the lower leading exponent.
    pub fn pair(self, n: usize) -> Result<(QSeries, QSeries)> {
        match self {
            Family::Rr => Ok((NamedSeries::Ch1.series(n)?, NamedSeries::Ch2.series(n)?)),
            Family::Weber => symmpow::weber_pair(n),
            Family::A1 => Ok((NamedSeries::A1F2.series(n)?, NamedSeries::A1F1.series(n)?)),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Settings for [`run_all`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    /// Identities are compared through this exponent.
    pub prec: usize,
    /// Precision for symmetric-power Wronskians.
    pub sym_prec: usize,
    pub primes: Vec<u64>,
    pub partitions_upto: usize,
    pub congruence_terms: usize,
    pub exec: Exec,
}

impl SuiteConfig {
    pub fn new(prec: usize) -> Self {
        SuiteConfig {
            prec,
            sym_prec: prec.min(60),
            primes: ssing::DEFAULT_PRIMES.to_vec(),
            partitions_upto: 50,
            congruence_terms: 50,
            exec: Exec::default(),
        }
    }
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self::new(100)
    }
}

/// One unit of the suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteItem {
    Identity(IdentityId),
    SymRoutes(u32),
    SymWronskian(Family, u32),
    Sym12Eta,
    VanishingRr12,
    VanishingA1Sym6,
    R12Roots,
    Recurrence(Recurrence),
    Supersingular(u64),
    Congruence(u64),
}

impl SuiteItem {
    pub fn id(&self) -> String {
        match self {
            SuiteItem::Identity(i) => i.name().to_string(),
            SuiteItem::SymRoutes(m) => format!("sym_routes_m{m}"),
            SuiteItem::SymWronskian(f, m) => format!("sym_wronskian_{}_m{m}", f.name()),
            SuiteItem::Sym12Eta => "sym12_rr_eta".into(),
            SuiteItem::VanishingRr12 => "vanishing_rr_sym12".into(),
            SuiteItem::VanishingA1Sym6 => "vanishing_a1_sym6".into(),
            SuiteItem::R12Roots => "r12_roots".into(),
            SuiteItem::Recurrence(r) => format!("partitions_{}", r.name()),
            SuiteItem::Supersingular(p) => format!("ssing_p{p}"),
            SuiteItem::Congruence(p) => format!("congruence_p{p}"),
        }
    }
}

/// Items run by [`run_all`], in report order.
pub fn suite_items(config: &SuiteConfig) -> Vec<SuiteItem> {
    let mut items: Vec<SuiteItem> = IdentityId::ALL
        .into_iter()
        .map(SuiteItem::Identity)
        .collect();
    items.extend((1..=12).map(SuiteItem::SymRoutes));
    for fam in [Family::Rr, Family::Weber] {
        items.extend((1..=6).map(|m| SuiteItem::SymWronskian(fam, m)));
    }
    items.push(SuiteItem::Sym12Eta);
    items.push(SuiteItem::VanishingRr12);
    items.push(SuiteItem::VanishingA1Sym6);
    items.push(SuiteItem::R12Roots);
    items.extend(Recurrence::ALL.into_iter().map(SuiteItem::Recurrence));
    items.extend(config.primes.iter().map(|&p| SuiteItem::Supersingular(p)));
    items.extend(config.primes.iter().map(|&p| SuiteItem::Congruence(p)));
    items
}

/// Expected relation `sum lambda_j f_j = C` among the integral members.
fn relation_matches(
    basis: &[QSeries],
    lambdas: &[i64],
    constant: i64,
    exec: Exec,
) -> Result<VerificationReport> {
    let rep = wronskian::vanishing_check(basis, Holomorphy::EtaPower, exec)?;
    let want: Vec<BigRational> = lambdas.iter().map(|&l| int(l)).collect();
    let Some(rel) = rep.relation else {
        return Ok(VerificationReport::new("", Status::Fail).note(rep.diagnostic));
    };
    let shown: Vec<String> = rel.lambdas.iter().map(rat::show).collect();
    let ok = rel.lambdas == want && rel.constant == int(constant);
    Ok(VerificationReport::pass_if("", ok)
        .precision(rat::show(&rel.prec))
        .note(format!(
            "({}; C={})",
            shown.join(", "),
            rat::show(&rel.constant)
        )))
}

fn run_item(item: SuiteItem, config: &SuiteConfig) -> Result<VerificationReport> {
    let exec = config.exec;
    let n = config.sym_prec;
    let report = match item {
        SuiteItem::Identity(id) => verify(id, config.prec)?,
        SuiteItem::SymRoutes(m) => {
            let r = symmpow::weber_routes(m, n, exec)?;
            VerificationReport::pass_if("", r.agree())
                .precision(n)
                .note(r.closed_form.to_string())
        }
        SuiteItem::SymWronskian(fam, m) => {
            let (f, g) = fam.pair(n)?;
            let r = symmpow::check_sym_wronskian(&f, &g, m, exec)?;
            let mut rep =
                VerificationReport::pass_if("", r.product_formula).precision(rat::show(&r.prec));
            rep.first_failure = r.first_failure.as_ref().map(rat::show);
            rep.note(format!("constant {}", r.constant))
        }
        SuiteItem::Sym12Eta => {
            let through = n.min(40);
            let (f, g) = Family::Rr.pair(through + 2)?;
            let w = wronskian::wronskian_with(&symmpow::sym_basis(&f, &g, 12)?, exec)?;
            let w = wronskian::normalize(&w)?;
            let target = etaprod::eta(&int(1), through + 1)?.pow(312)?;
            if w.offset() != target.offset() {
                return Ok(VerificationReport::new("", Status::Fail)
                    .note(format!("leading exponent {}", rat::show(w.offset()))));
            }
            // compare the first `through` coefficients after the leading q^13
            let (status, prec, first) =
                compare(&w.shift(&int(-13)), &target.shift(&int(-13)), through)?;
            let mut rep =
                VerificationReport::new("", status).precision(rat::show(&(prec + int(13))));
            rep.first_failure = first.map(|e| rat::show(&e));
            rep.note("normalized Wronskian of Sym^12(ch1, ch2) against eta^312")
        }
        SuiteItem::VanishingRr12 => {
            let (f, g) = Family::Rr.pair(n)?;
            relation_matches(&symmpow::sym_basis(&f, &g, 12)?, &[1, -11, -1], 1, exec)?
        }
        SuiteItem::VanishingA1Sym6 => {
            let (f, g) = Family::A1.pair(n)?;
            relation_matches(&symmpow::sym_basis(&f, &g, 6)?, &[1, -1], 2, exec)?
        }
        SuiteItem::R12Roots => {
            let rs = symmpow::r12_root_set()?;
            let want = vec![int(-40), int(-15), frac(-25, 4), frac(-11, 5), int(0)];
            let shown: Vec<String> = rs.roots.iter().map(rat::show).collect();
            VerificationReport::pass_if("", rs.roots == want && rs.nonzero_at_one)
                .note(format!("roots {{{}}}", shown.join(", ")))
        }
        SuiteItem::Recurrence(r) => {
            let rep = partitions::check_recurrence(r, config.partitions_upto)?;
            let mut out = VerificationReport::pass_if("", rep.passes())
                .precision(config.partitions_upto)
                .note(format!("n=2 count {}", rep.anchor));
            out.first_failure = rep.failures.first().map(|n| n.to_string());
            out
        }
        SuiteItem::Supersingular(p) => {
            let rep = ssing::ss_report(p, SsRoute::All, exec)?;
            let tilde = ssing::ss_tilde(p).is_ok();
            VerificationReport::pass_if("", rep.passes() && tilde).note(format!(
                "roots {:?}, {} quadratic factor(s)",
                rep.fp_roots,
                rep.quadratic_factors.len()
            ))
        }
        SuiteItem::Congruence(p) => {
            let rep = ssing::congruence_constant_check(p, config.congruence_terms + 1)?;
            let mut out = VerificationReport::pass_if("", rep.holds)
                .precision(rep.terms_checked)
                .note(format!(
                    "constant {} (expected {}) mod {p}",
                    rep.constant, rep.expected
                ));
            out.first_failure = rep.first_nonconstant.map(|e| e.to_string());
            out
        }
    };
    Ok(report)
}

/// Runs every suite item; report order follows [`suite_items`].
pub fn run_all(config: &SuiteConfig) -> Vec<VerificationReport> {
    let items = suite_items(config);
    par::map(config.exec, items, |item| {
        let start = Instant::now();
        let mut rep = match run_item(item, config) {
            Ok(r) => r,
            Err(Error::InsufficientPrecision { have, need }) => {
                VerificationReport::new("", Status::InsufficientPrecision)
                    .note(format!("have {have} coefficients, need {need}"))
            }
            Err(e) => VerificationReport::new("", Status::Fail).note(e.to_string()),
        };
        rep.id = item.id();
        rep.elapsed = start.elapsed();
        rep
    })
}
