//! Exact arithmetic in Q(w), w = sqrt(-2).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("valuation of zero is +infinity")]
    ZeroValuation,
    #[error("element {0} is not in the subring {1:?}")]
    NotInSubring(String, SubringTag),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse quadratic element from {0:?}")]
    Parse(String),
}

/// a + b*w with w^2 = -2.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadElement {
    pub a: Rat,
    pub b: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubringTag {
    /// Z[w]
    ZOmega,
    /// Z[w][1/2]
    ZOmegaHalf,
    /// Z_(2)[w], odd denominators only
    DyadicLocal,
}

/// Dyadic valuation with a separate sentinel for zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// The smaller of two valuations; Infinite is the top element.
    pub fn min(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Infinite, x) | (x, Valuation::Infinite) => x,
            (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x.min(y)),
        }
    }

    pub fn ge(self, other: Valuation) -> bool {
        match (self, other) {
            (Valuation::Infinite, _) => true,
            (Valuation::Finite(_), Valuation::Infinite) => false,
            (Valuation::Finite(x), Valuation::Finite(y)) => x >= y,
        }
    }
}

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

impl QuadElement {
    pub fn new(a: Rat, b: Rat) -> Self {
        QuadElement { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadElement::new(int(a), int(b))
    }

    pub fn from_ratios(an: i64, ad: i64, bn: i64, bd: i64) -> Self {
        QuadElement::new(rat(an, ad), rat(bn, bd))
    }

    pub fn zero() -> Self {
        QuadElement::from_ints(0, 0)
    }

    pub fn one() -> Self {
        QuadElement::from_ints(1, 0)
    }

    pub fn omega() -> Self {
        QuadElement::from_ints(0, 1)
    }

    pub fn from_rat(r: Rat) -> Self {
        QuadElement::new(r, Rat::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn conjugate(&self) -> Self {
        QuadElement::new(self.a.clone(), -self.b.clone())
    }

    pub fn scale(&self, r: &Rat) -> Self {
        QuadElement::new(&self.a * r, &self.b * r)
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let n = norm(self);
        Ok(self.conjugate().scale(&n.recip()))
    }

    pub fn checked_div(&self, other: &QuadElement) -> Result<Self, ArithError> {
        Ok(self * &other.inverse()?)
    }
}

/// a^2 + 2 b^2.
pub fn norm(x: &QuadElement) -> Rat {
    &x.a * &x.a + int(2) * &x.b * &x.b
}

/// Exponent of 2 in a nonzero rational.
pub fn rational_two_adic(r: &Rat) -> Option<i64> {
    if r.is_zero() {
        return None;
    }
    let num = r.numer().trailing_zeros().unwrap_or(0) as i64;
    let den = r.denom().trailing_zeros().unwrap_or(0) as i64;
    Some(num - den)
}

pub fn valuation(x: &QuadElement) -> Valuation {
    match rational_two_adic(&norm(x)) {
        Some(v) => Valuation::Finite(v),
        None => Valuation::Infinite,
    }
}

pub fn dyadic_valuation(x: &QuadElement) -> Result<i64, ArithError> {
    valuation(x).finite().ok_or(ArithError::ZeroValuation)
}

pub fn in_subring(x: &QuadElement, tag: SubringTag) -> bool {
    let coords = [&x.a, &x.b];
    match tag {
        SubringTag::ZOmega => coords.iter().all(|c| c.is_integer()),
        SubringTag::ZOmegaHalf => coords.iter().all(|c| {
            let d = c.denom();
            let tz = d.trailing_zeros().unwrap_or(0);
            (d >> tz as usize).is_one()
        }),
        SubringTag::DyadicLocal => coords
            .iter()
            .all(|c| c.denom().trailing_zeros().unwrap_or(0) == 0),
    }
}

pub fn is_uniformizer(x: &QuadElement) -> Result<bool, ArithError> {
    if x.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    if !in_subring(x, SubringTag::DyadicLocal) {
        return Err(ArithError::NotInSubring(x.to_string(), SubringTag::DyadicLocal));
    }
    Ok(dyadic_valuation(x)? == 1)
}

impl Add for &QuadElement {
    type Output = QuadElement;
    fn add(self, o: &QuadElement) -> QuadElement {
        QuadElement::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &QuadElement {
    type Output = QuadElement;
    fn sub(self, o: &QuadElement) -> QuadElement {
        QuadElement::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Mul for &QuadElement {
    type Output = QuadElement;
    fn mul(self, o: &QuadElement) -> QuadElement {
        let a = &self.a * &o.a - int(2) * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadElement::new(a, b)
    }
}

impl Neg for &QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        QuadElement::new(-self.a.clone(), -self.b.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadElement {
            type Output = QuadElement;
            fn $m(self, o: QuadElement) -> QuadElement {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadElement {
    type Output = QuadElement;
    fn neg(self) -> QuadElement {
        -&self
    }
}

fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for QuadElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_rat(&self.a));
        }
        let coef = |b: &Rat| -> String {
            if b.is_one() {
                "w".to_string()
            } else {
                format!("{}*w", fmt_rat(b))
            }
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                return write!(f, "-{}", coef(&-self.b.clone()));
            }
            return write!(f, "{}", coef(&self.b));
        }
        if self.b.is_negative() {
            write!(f, "{}-{}", fmt_rat(&self.a), coef(&-self.b.clone()))
        } else {
            write!(f, "{}+{}", fmt_rat(&self.a), coef(&self.b))
        }
    }
}

fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

impl FromStr for QuadElement {
    type Err = ArithError;

    /// Accepts forms like "3", "-1/2", "w", "-w", "1+w", "1/2-3/4*w", "2*w".
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ArithError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err());
        }
        // split into signed terms
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        let mut signed = false;
        for ch in compact.chars() {
            if ch == '+' || ch == '-' {
                if !cur.is_empty() {
                    terms.push((neg, std::mem::take(&mut cur)));
                    signed = false;
                }
                if signed {
                    return Err(err());
                }
                neg = ch == '-';
                signed = true;
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(err());
        }
        terms.push((neg, cur));
        let mut out = QuadElement::zero();
        for (neg, t) in terms {
            let (coef, is_w) = if let Some(c) = t.strip_suffix("*w") {
                (parse_rat(c).ok_or_else(err)?, true)
            } else if t == "w" {
                (Rat::one(), true)
            } else {
                (parse_rat(&t).ok_or_else(err)?, false)
            };
            let coef = if neg { -coef } else { coef };
            if is_w {
                out.b += coef;
            } else {
                out.a += coef;
            }
        }
        Ok(out)
    }
}

/// Small integer view of a rational, used for compact reporting.
pub fn rat_to_i64(r: &Rat) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}
