//! Points of upper half space H^3 with exact coordinates and the Poincare action.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::mat2::Mat2;
use crate::quad::{norm, rat, QuadElement, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("squared height must be positive, got {0}")]
    NonPositiveHeight(String),
    #[error("unknown vertex {0:?}")]
    UnknownVertex(String),
}

/// (z, zeta^2) with zeta^2 > 0. Heights are kept squared so everything stays rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HPoint {
    pub z: QuadElement,
    pub zeta_sq: Rat,
}

impl HPoint {
    pub fn new(z: QuadElement, zeta_sq: Rat) -> Result<Self, GeometryError> {
        if !zeta_sq.is_positive() {
            return Err(GeometryError::NonPositiveHeight(zeta_sq.to_string()));
        }
        Ok(HPoint { z, zeta_sq })
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.z, self.zeta_sq)
    }
}

/// z' = (conj(cz+d)(az+b) + zeta^2 conj(c) a) / D,  zeta'^2 = zeta^2 |det|^2 / D^2,
/// D = |cz+d|^2 + zeta^2 |c|^2.
pub fn act(g: &Mat2, p: &HPoint) -> HPoint {
    let cz_d = &(&g.c * &p.z) + &g.d;
    let az_b = &(&g.a * &p.z) + &g.b;
    let den = norm(&cz_d) + &p.zeta_sq * norm(&g.c);
    debug_assert!(!den.is_zero());
    let num = &(&cz_d.conjugate() * &az_b) + &(&g.c.conjugate() * &g.a).scale(&p.zeta_sq);
    let inv = den.recip();
    let z = num.scale(&inv);
    let zeta_sq = &p.zeta_sq * norm(&g.det()) * &inv * &inv;
    HPoint { z, zeta_sq }
}

pub fn fixes_point(g: &Mat2, p: &HPoint) -> bool {
    act(g, p) == *p
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedVertex {
    pub name: &'static str,
    pub z: String,
    pub zeta_sq: String,
}

/// The eight vertices v1..v1''' (height^2 1/4) and v2..v2''' of the fundamental domain.
pub fn domain_vertices() -> Vec<(&'static str, HPoint)> {
    let p = |an, ad, bn, bd, zn, zd| HPoint {
        z: QuadElement::from_ratios(an, ad, bn, bd),
        zeta_sq: rat(zn, zd),
    };
    vec![
        ("v1", p(-1, 2, -1, 2, 1, 4)),
        ("v1'", p(1, 2, -1, 2, 1, 4)),
        ("v1''", p(1, 2, 1, 2, 1, 4)),
        ("v1'''", p(-1, 2, 1, 2, 1, 4)),
        ("v2", p(-1, 2, -1, 4, 1, 8)),
        ("v2'", p(0, 1, -1, 2, 1, 2)),
        ("v2''", p(0, 1, 1, 2, 1, 2)),
        ("v2'''", p(-1, 2, 1, 4, 1, 8)),
    ]
}

pub fn domain_vertex(name: &str) -> Result<HPoint, GeometryError> {
    domain_vertices()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p)
        .ok_or_else(|| GeometryError::UnknownVertex(name.to_string()))
}

pub fn vertex_table() -> Vec<NamedVertex> {
    domain_vertices()
        .into_iter()
        .map(|(name, p)| NamedVertex { name, z: p.z.to_string(), zeta_sq: p.zeta_sq.to_string() })
        .collect()
}

/// Name of a domain vertex equal to the point, if any.
pub fn name_of(p: &HPoint) -> Option<&'static str> {
    domain_vertices().into_iter().find(|(_, q)| q == p).map(|(n, _)| n)
}
