//! 2x2 matrices over Q(w), the congruence subgroup Gamma_0(w) and the two injections.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::quad::{in_subring, norm, ArithError, QuadElement, SubringTag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix {0} does not have determinant 1")]
    NotUnimodular(String),
    #[error("matrix {0} has entries outside Z[w]")]
    NotIntegral(String),
    #[error("matrix {0} is not in Gamma_0(w)")]
    NotInGamma0(String),
    #[error("the two Gamma_0 membership predicates disagree on {0}")]
    PredicateMismatch(String),
    #[error("closure exceeded {0} elements")]
    ClosureCap(usize),
    #[error("unknown generator name {0:?}")]
    UnknownGenerator(String),
    #[error("cannot parse matrix from {0:?}")]
    Parse(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: QuadElement,
    pub b: QuadElement,
    pub c: QuadElement,
    pub d: QuadElement,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    ExceedsCap,
}

impl Mat2 {
    pub fn new(a: QuadElement, b: QuadElement, c: QuadElement, d: QuadElement) -> Self {
        Mat2 { a, b, c, d }
    }

    /// Entries given as (integer part, w part) pairs.
    pub fn from_pairs(e: [(i64, i64); 4]) -> Self {
        let q = |(x, y): (i64, i64)| QuadElement::from_ints(x, y);
        Mat2::new(q(e[0]), q(e[1]), q(e[2]), q(e[3]))
    }

    pub fn identity() -> Self {
        Mat2::from_pairs([(1, 0), (0, 0), (0, 0), (1, 0)])
    }

    pub fn minus_identity() -> Self {
        Mat2::from_pairs([(-1, 0), (0, 0), (0, 0), (-1, 0)])
    }

    pub fn entries(&self) -> [&QuadElement; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> QuadElement {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().is_one()
    }

    pub fn mul(&self, n: &Mat2) -> Mat2 {
        Mat2::new(
            &(&self.a * &n.a) + &(&self.b * &n.c),
            &(&self.a * &n.b) + &(&self.b * &n.d),
            &(&self.c * &n.a) + &(&self.d * &n.c),
            &(&self.c * &n.b) + &(&self.d * &n.d),
        )
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    /// Inverse of a determinant-one matrix via the adjugate.
    pub fn inverse(&self) -> Result<Mat2, GroupError> {
        if !self.is_unimodular() {
            return Err(GroupError::NotUnimodular(self.to_string()));
        }
        Ok(self.adjugate())
    }

    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// Inverse in GL_2(K), for conjugations by matrices of other determinants.
    pub fn general_inverse(&self) -> Result<Mat2, GroupError> {
        let inv_det = self.det().inverse()?;
        let adj = self.adjugate();
        Ok(Mat2::new(
            &adj.a * &inv_det,
            &adj.b * &inv_det,
            &adj.c * &inv_det,
            &adj.d * &inv_det,
        ))
    }

    /// m^k for k >= 0, or the inverse power for k < 0.
    pub fn pow(&self, k: i64) -> Result<Mat2, GroupError> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut out = Mat2::identity();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::identity()
    }

    pub fn is_central(&self) -> bool {
        *self == Mat2::identity() || *self == Mat2::minus_identity()
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|x| in_subring(x, SubringTag::ZOmega))
    }

    /// k^-1 * self * k for determinant-one k.
    pub fn conj_by(&self, k: &Mat2) -> Mat2 {
        k.adjugate().mul(self).mul(k)
    }
}

pub fn multiply(m: &Mat2, n: &Mat2) -> Mat2 {
    m.mul(n)
}

pub fn inverse(m: &Mat2) -> Result<Mat2, GroupError> {
    m.inverse()
}

pub fn element_order(m: &Mat2, cap: u32) -> Order {
    let mut p = m.clone();
    for k in 1..=cap {
        if p.is_identity() {
            return Order::Finite(k);
        }
        p = p.mul(m);
    }
    Order::ExceedsCap
}

pub fn in_gamma0(m: &Mat2) -> Result<bool, GroupError> {
    if !m.is_integral() {
        return Err(GroupError::NotIntegral(m.to_string()));
    }
    if !m.is_unimodular() {
        return Err(GroupError::NotUnimodular(m.to_string()));
    }
    let n = norm(&m.c);
    let by_norm = !n.to_integer().bit(0);
    let quotient = m.c.checked_div(&QuadElement::omega())?;
    let by_division = in_subring(&quotient, SubringTag::ZOmega);
    if by_norm != by_division {
        return Err(GroupError::PredicateMismatch(m.to_string()));
    }
    Ok(by_norm)
}

fn require_gamma0(m: &Mat2) -> Result<(), GroupError> {
    if !in_gamma0(m)? {
        return Err(GroupError::NotInGamma0(m.to_string()));
    }
    Ok(())
}

/// The entry formula [[a,b],[c,d]] -> [[d, c/w], [b*w, a]].
pub fn inject_second_factor(m: &Mat2) -> Result<Mat2, GroupError> {
    require_gamma0(m)?;
    let w = QuadElement::omega();
    Ok(Mat2::new(
        m.d.clone(),
        m.c.checked_div(&w)?,
        &m.b * &w,
        m.a.clone(),
    ))
}

/// Serre's form [[a,b],[c,d]] -> [[a, b*w], [c/w, d]], i.e. conjugation by diag(1, w).
pub fn serre_injection(m: &Mat2) -> Result<Mat2, GroupError> {
    require_gamma0(m)?;
    let w = QuadElement::omega();
    Ok(Mat2::new(
        m.a.clone(),
        &m.b * &w,
        m.c.checked_div(&w)?,
        m.d.clone(),
    ))
}

/// P = [[0,1],[w,0]]; the entry formula equals P^-1 m P.
pub fn injection_conjugator() -> Mat2 {
    Mat2::from_pairs([(0, 0), (1, 0), (0, 1), (0, 0)])
}

/// The transposition [[0,1],[1,0]] relating the two forms.
pub fn swap_matrix() -> Mat2 {
    Mat2::from_pairs([(0, 0), (1, 0), (1, 0), (0, 0)])
}

pub fn verify_conjugacy(g: &Mat2, target: &Mat2, conjugator: &Mat2) -> bool {
    match conjugator.general_inverse() {
        Ok(inv) => conjugator.mul(g).mul(&inv) == *target,
        Err(_) => false,
    }
}

pub const GENERATOR_NAMES: [&str; 8] = ["A", "B", "C", "b", "c", "h", "T", "U"];

/// Named matrices A, B, C (order 4), b (order 6), c (order 4), h, T, U.
pub fn generator(name: &str) -> Result<Mat2, GroupError> {
    let m = match name {
        "A" => Mat2::from_pairs([(1, 0), (0, 1), (0, 1), (-1, 0)]),
        "B" => Mat2::from_pairs([(-1, -1), (0, -1), (2, 0), (1, 1)]),
        "C" => Mat2::from_pairs([(-1, 0), (-1, 0), (2, 0), (1, 0)]),
        "b" => Mat2::from_pairs([(1, 0), (-1, 0), (1, 0), (0, 0)]),
        "c" => Mat2::from_pairs([(0, 0), (-1, 0), (1, 0), (0, 0)]),
        "h" => Mat2::from_pairs([(1, 0), (0, 0), (1, 0), (1, 0)]),
        "T" => Mat2::from_pairs([(1, 0), (1, 0), (0, 0), (1, 0)]),
        "U" => Mat2::from_pairs([(1, 0), (0, 0), (0, -1), (1, 0)]),
        "I" => Mat2::identity(),
        "-I" => Mat2::minus_identity(),
        _ => return Err(GroupError::UnknownGenerator(name.to_string())),
    };
    Ok(m)
}

pub fn generator_table() -> Vec<(&'static str, Mat2)> {
    GENERATOR_NAMES
        .iter()
        .map(|n| (*n, generator(n).expect("built-in name")))
        .collect()
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for Mat2 {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || GroupError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = compact
            .strip_prefix("[[")
            .and_then(|r| r.strip_suffix("]]"))
            .ok_or_else(err)?;
        let (row0, row1) = inner.split_once("],[").ok_or_else(err)?;
        let mut cells = Vec::new();
        for row in [row0, row1] {
            let parts: Vec<&str> = row.split(',').collect();
            if parts.len() != 2 {
                return Err(err());
            }
            for p in parts {
                cells.push(p.parse::<QuadElement>().map_err(|_| err())?);
            }
        }
        let mut it = cells.into_iter();
        let mut next = || it.next().ok_or_else(err);
        Ok(Mat2::new(next()?, next()?, next()?, next()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let m = generator("B").unwrap();
        let s = m.to_string();
        assert_eq!(s, "[[-1-w,-w],[2,1+w]]");
        assert_eq!(s.parse::<Mat2>().unwrap(), m);
        assert!("[[1,2],[3]]".parse::<Mat2>().is_err());
    }
}
