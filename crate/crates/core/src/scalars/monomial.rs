//! Signed monomials in formal parameters with rational exponents.
//!
//! Every character value handled by the engine lives in the group
//! `{±1} × ∏ q^Q`, one free factor per named parameter. Distinct parameters are
//! treated as algebraically independent non-roots of unity, so equality of
//! monomials is decidable and a monomial is a root of unity exactly when it
//! carries no parameter at all.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::Product;
use std::ops::{Div, Mul, MulAssign};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use smallvec::SmallVec;

use super::ScalarError;

/// Name of a formal parameter such as `q` or `q1`.
///
/// Names are interned for the lifetime of the process, which makes the handle
/// `Copy` while keeping the lexicographic order of the names themselves.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param(&'static str);

fn interner() -> &'static Mutex<BTreeSet<&'static str>> {
    static NAMES: OnceLock<Mutex<BTreeSet<&'static str>>> = OnceLock::new();
    NAMES.get_or_init(|| Mutex::new(BTreeSet::new()))
}

impl Param {
    /// Interns `name`. Fails unless it is an identifier (`[A-Za-z_][A-Za-z0-9_]*`).
    pub fn new(name: &str) -> Result<Param, ScalarError> {
        let mut chars = name.chars();
        let valid = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(ScalarError::Parse(format!("invalid parameter name `{name}`")));
        }
        let mut names = interner().lock().expect("parameter interner poisoned");
        if let Some(existing) = names.get(name) {
            return Ok(Param(existing));
        }
        let leaked: &'static str = Box::leak(name.to_owned().into_boxed_str());
        names.insert(leaked);
        Ok(Param(leaked))
    }

    pub fn name(self) -> &'static str {
        self.0
    }
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0)
    }
}

type Factors = SmallVec<[(Param, Rational64); 2]>;

/// A nonzero scalar `±∏ p^e` with rational exponents.
///
/// Factors are kept sorted by parameter name and never carry a zero exponent,
/// so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    negative: bool,
    factors: Factors,
}

fn add_exponents(a: Rational64, b: Rational64) -> Rational64 {
    a.checked_add(&b).expect("monomial exponent overflow")
}

fn scale_exponent(a: Rational64, b: Rational64) -> Rational64 {
    a.checked_mul(&b).expect("monomial exponent overflow")
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { negative: false, factors: Factors::new() }
    }

    pub fn minus_one() -> Monomial {
        Monomial { negative: true, factors: Factors::new() }
    }

    /// `p^1`.
    pub fn param(p: Param) -> Monomial {
        Monomial::param_pow(p, Rational64::one())
    }

    /// `p^e`.
    pub fn param_pow(p: Param, e: Rational64) -> Monomial {
        let mut factors = Factors::new();
        if !e.is_zero() {
            factors.push((p, e));
        }
        Monomial { negative: false, factors }
    }

    /// Builds a monomial from arbitrary (possibly repeated, possibly zero) factors.
    pub fn from_factors<I>(negative: bool, factors: I) -> Monomial
    where
        I: IntoIterator<Item = (Param, Rational64)>,
    {
        factors
            .into_iter()
            .fold(if negative { Monomial::minus_one() } else { Monomial::one() }, |acc, (p, e)| {
                acc * Monomial::param_pow(p, e)
            })
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.factors.is_empty()
    }

    /// True iff the value is `±1`; any nonempty exponent map is a non-root of unity.
    pub fn is_root_of_unity(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, p: Param) -> Rational64 {
        self.factors
            .iter()
            .find(|(q, _)| *q == p)
            .map(|(_, e)| *e)
            .unwrap_or_else(Rational64::zero)
    }

    pub fn factors(&self) -> impl Iterator<Item = (Param, Rational64)> + '_ {
        self.factors.iter().copied()
    }

    pub fn params(&self) -> impl Iterator<Item = Param> + '_ {
        self.factors.iter().map(|(p, _)| *p)
    }

    /// Sign of the first nonzero exponent in parameter order (`0` for roots of unity).
    ///
    /// This is the orientation used to pick canonical representatives among
    /// `q` and `q^{-1}`.
    pub fn leading_exponent_sign(&self) -> i32 {
        match self.factors.first() {
            None => 0,
            Some((_, e)) if e.is_positive() => 1,
            Some(_) => -1,
        }
    }

    pub fn inv(&self) -> Monomial {
        Monomial {
            negative: self.negative,
            factors: self.factors.iter().map(|(p, e)| (*p, -*e)).collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        let scale = Rational64::from_integer(n);
        Monomial {
            negative: self.negative && n.is_odd(),
            factors: self.factors.iter().map(|(p, e)| (*p, scale_exponent(*e, scale))).collect(),
        }
    }

    /// Rational power. Fractional powers of a negative monomial have no
    /// canonical value in this group and are rejected.
    pub fn pow_ratio(&self, r: Rational64) -> Result<Monomial, ScalarError> {
        if r.is_integer() {
            return Ok(self.pow(r.to_integer()));
        }
        if self.negative {
            return Err(ScalarError::NonMonomial(format!("({self})^({r})")));
        }
        Ok(Monomial {
            negative: false,
            factors: self.factors.iter().map(|(p, e)| (*p, scale_exponent(*e, r))).collect(),
        })
    }
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl<'a> Mul<&'a Monomial> for &'a Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &'a Monomial) -> Monomial {
        let mut factors = Factors::with_capacity(self.factors.len().max(rhs.factors.len()));
        let (mut a, mut b) = (self.factors.iter().peekable(), rhs.factors.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((pa, ea)), Some((pb, eb))) => {
                    if pa < pb {
                        factors.push((*pa, *ea));
                        a.next();
                    } else if pb < pa {
                        factors.push((*pb, *eb));
                        b.next();
                    } else {
                        let e = add_exponents(*ea, *eb);
                        if !e.is_zero() {
                            factors.push((*pa, e));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some(f), None) => {
                    factors.push(**f);
                    a.next();
                }
                (None, Some(f)) => {
                    factors.push(**f);
                    b.next();
                }
                (None, None) => break,
            }
        }
        Monomial { negative: self.negative != rhs.negative, factors }
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        &self * &rhs
    }
}

impl<'a> Mul<&'a Monomial> for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: &'a Monomial) -> Monomial {
        &self * rhs
    }
}

impl MulAssign<&Monomial> for Monomial {
    fn mul_assign(&mut self, rhs: &Monomial) {
        *self = &*self * rhs;
    }
}

impl<'a> Div<&'a Monomial> for &'a Monomial {
    type Output = Monomial;

    fn div(self, rhs: &'a Monomial) -> Monomial {
        self * &rhs.inv()
    }
}

impl Div for Monomial {
    type Output = Monomial;

    fn div(self, rhs: Monomial) -> Monomial {
        &self / &rhs
    }
}

impl Product for Monomial {
    fn product<I: Iterator<Item = Monomial>>(iter: I) -> Monomial {
        iter.fold(Monomial::one(), |acc, m| &acc * &m)
    }
}

impl<'a> Product<&'a Monomial> for Monomial {
    fn product<I: Iterator<Item = &'a Monomial>>(iter: I) -> Monomial {
        iter.fold(Monomial::one(), |acc, m| &acc * m)
    }
}

fn fmt_exponent(e: &Rational64) -> String {
    if e.is_integer() {
        e.numer().to_string()
    } else {
        format!("{}/{}", e.numer(), e.denom())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{p}^{}", fmt_exponent(e))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_exponent(text: &str) -> Result<Rational64, ScalarError> {
    let bad = || ScalarError::Parse(format!("invalid exponent `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let num: i64 = num.trim().parse().map_err(|_| bad())?;
    let den: i64 = match den {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => 1,
    };
    if den == 0 {
        return Err(bad());
    }
    Ok(Rational64::new(num, den))
}

impl FromStr for Monomial {
    type Err = ScalarError;

    /// Parses `-q^3/2*t^1`, `q^-2`, `q`, `1` or `-1`.
    fn from_str(text: &str) -> Result<Monomial, ScalarError> {
        let text = text.trim();
        let (negative, body) = match text.strip_prefix('-') {
            Some(rest) => (true, rest.trim_start()),
            None => (false, text),
        };
        if body.is_empty() {
            return Err(ScalarError::Parse(format!("empty monomial `{text}`")));
        }
        let mut acc = if negative { Monomial::minus_one() } else { Monomial::one() };
        for factor in body.split('*') {
            let factor = factor.trim();
            if factor == "1" {
                continue;
            }
            let (name, exponent) = match factor.split_once('^') {
                Some((n, e)) => (n.trim(), parse_exponent(e)?),
                None => (factor, Rational64::one()),
            };
            acc *= &Monomial::param_pow(Param::new(name)?, exponent);
        }
        Ok(acc)
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Monomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}
