//! Parsers for form expressions (`E4^3 - 1/2*Delta`) and series bases
//! (`ch1*ch2^11,sym(rr,2)`).

use num_bigint::BigInt;
use num_rational::BigRational;

use modwron::etaprod::NamedSeries;
use modwron::modpoly::{self, MFPoly};
use modwron::symmpow;
use modwron::verify::Family;
use modwron::{Error, QSeries, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(
                digits.parse().map_err(|_| Error::Parse(digits.clone()))?,
            ));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}` in `{s}`")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, op: char) -> Result<()> {
        if self.eat(op) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{op}`")))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(n.clone())
            }
            _ => Err(Error::Parse("expected an integer".into())),
        }
    }

    fn small(&mut self) -> Result<u32> {
        let n = self.integer()?;
        u32::try_from(n.clone()).map_err(|_| Error::Parse(format!("{n} is too large")))
    }

    fn sum(&mut self) -> Result<MFPoly> {
        let mut acc = if self.eat('-') {
            self.product()?.neg()
        } else {
            self.product()?
        };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<MFPoly> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.power()?);
            } else if self.eat('/') {
                let d = self.integer()?;
                if d == BigInt::from(0) {
                    return Err(Error::Parse("division by zero".into()));
                }
                acc = acc.scale(&BigRational::new(BigInt::from(1), d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MFPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            Ok(base.pow(self.small()?))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MFPoly> {
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(MFPoly::constant(BigRational::from_integer(n))),
            Tok::Op('(') => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => self.named(&name),
            Tok::Op(c) => Err(Error::Parse(format!("unexpected `{c}`"))),
        }
    }

    fn named(&mut self, name: &str) -> Result<MFPoly> {
        if name == "Delta" {
            return Ok(MFPoly::delta());
        }
        if name == "Weber" {
            self.expect('(')?;
            let m = self.small()?;
            self.expect(')')?;
            return Ok(symmpow::kz_sym_form(m));
        }
        let weight = |rest: &str| -> Result<u32> {
            rest.parse()
                .map_err(|_| Error::Parse(format!("unknown atom `{name}`")))
        };
        if let Some(rest) = name.strip_prefix('E') {
            return MFPoly::eisenstein(weight(rest)?);
        }
        if let Some(rest) = name.strip_prefix('G') {
            let k = weight(rest)?;
            let e = MFPoly::eisenstein(k)?;
            // constant term of G_k is -B_k / k!
            let c = -modpoly::bernoulli(k as usize)
                / BigRational::from_integer(modwron::rat::factorial(k as u64));
            return Ok(e.scale(&c));
        }
        Err(Error::Parse(format!("unknown atom `{name}`")))
    }
}

/// Parses a polynomial in `E<k>`, `G<k>`, `Delta`, `Weber(m)` and rationals.
pub fn parse_form(s: &str) -> Result<MFPoly> {
    let mut p = Parser {
        toks: tokenize(s)?,
        pos: 0,
    };
    let f = p.sum()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in `{s}`")));
    }
    Ok(f)
}

/// Splits on commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

fn parse_monomial(item: &str, n: usize) -> Result<QSeries> {
    let mut acc: Option<QSeries> = None;
    for factor in item.split('*') {
        let (name, exp) = match factor.split_once('^') {
            Some((a, e)) => (
                a.trim(),
                e.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
            ),
            None => (factor.trim(), 1),
        };
        let s = name.parse::<NamedSeries>()?.series(n)?.pow(exp)?;
        acc = Some(match acc {
            Some(a) => a.mul(&s)?,
            None => s,
        });
    }
    acc.ok_or_else(|| Error::Parse("empty basis element".into()))
}

/// Expands a comma-separated basis; `sym(family,m)` contributes `m + 1` series.
pub fn parse_basis(s: &str, n: usize) -> Result<Vec<QSeries>> {
    let mut out = Vec::new();
    for item in split_top(s) {
        if let Some(args) = item.strip_prefix("sym(").and_then(|r| r.strip_suffix(')')) {
            let (fam, m) = args
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected sym(family,m), got `{item}`")))?;
            let fam: Family = fam.trim().parse()?;
            let m: u32 = m
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad power in `{item}`")))?;
            let (f, g) = fam.pair(n)?;
            out.extend(symmpow::sym_basis(&f, &g, m)?);
        } else {
            out.push(parse_monomial(item, n)?);
        }
    }
    Ok(out)
}
