//! E1 and E2 pages of the equivariant spectral sequence, and the comparison map
//! (i*, j*) from two copies of the SL_2(Z[w]) page to the Gamma_0(w) page.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

use crate::cellmap::{offsets, CellularMap, MapError};
use crate::cohomology::{derived_restriction, rule_key, table_for, ConfigError, RestrictionRules};
use crate::complex::{GroupTag, QuotientComplex};
use crate::f2::{complement_columns, kernel_basis, rank, F2Matrix};
use crate::groups::FiniteSubgroup;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("complex unavailable: {0}")]
    Complex(String),
    #[error("d1 o d1 != 0 in row q = {q}")]
    NotAComplex { q: u32, dump: String },
    #[error("comparison map does not commute with d1 at (p, q) = ({p}, {q})")]
    ChainMap { p: usize, q: u32, dump: String },
}

impl SpectralError {
    /// Matrices captured at the point of failure, if any.
    pub fn forensics(&self) -> Option<&str> {
        match self {
            SpectralError::NotAComplex { dump, .. } | SpectralError::ChainMap { dump, .. } => Some(dump),
            _ => None,
        }
    }
}

pub fn stab_of(x: &QuotientComplex, p: usize, i: usize) -> &FiniteSubgroup {
    match p {
        0 => &x.vertices[i].stab,
        1 => &x.edges[i].stab,
        _ => &x.faces[i].stab,
    }
}

fn cell_name(x: &QuotientComplex, p: usize, i: usize) -> &str {
    match p {
        0 => &x.vertices[i].name,
        1 => &x.edges[i].name,
        _ => &x.faces[i].name,
    }
}

fn cell_count(x: &QuotientComplex, p: usize) -> usize {
    match p {
        0..=2 => x.counts()[p],
        _ => 0,
    }
}

/// Dimension of H^q of each p-cell stabilizer.
pub fn cell_dims(x: &QuotientComplex, p: usize, q: u32) -> Vec<usize> {
    (0..cell_count(x, p)).map(|i| table_for(stab_of(x, p, i).kind).dim(q)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct E1Page {
    pub group: String,
    pub q_max: u32,
    /// names[q][p]: basis of E1^{p,q}, e.g. "x3<c,A>@v2'"
    pub names: Vec<[Vec<String>; 3]>,
}

impl E1Page {
    pub fn dim(&self, p: usize, q: u32) -> usize {
        if p > 2 || q > self.q_max {
            return 0;
        }
        self.names[q as usize][p].len()
    }
}

pub fn assemble_e1(x: &QuotientComplex, q_max: u32) -> E1Page {
    let names = (0..=q_max)
        .map(|q| {
            let col = |p: usize| {
                let mut out = Vec::new();
                for i in 0..cell_count(x, p) {
                    let st = stab_of(x, p, i);
                    let sp = table_for(st.kind);
                    for b in sp.basis_names(q) {
                        out.push(format!("{}{}@{}", b, st.label(), cell_name(x, p, i)));
                    }
                }
                out
            };
            [col(0), col(1), col(2)]
        })
        .collect();
    E1Page { group: x.tag.name().to_string(), q_max, names }
}

fn place(m: &mut F2Matrix, block: &F2Matrix, r0: usize, c0: usize) {
    for i in 0..block.rows() {
        for j in 0..block.cols() {
            if block.get(i, j) {
                m.flip(r0 + i, c0 + j);
            }
        }
    }
}

/// d1: E1^{p,q} -> E1^{p+1,q} as a (dim E1^{p+1,q}) x (dim E1^{p,q}) matrix.
pub fn d1_matrix(
    x: &QuotientComplex,
    p: usize,
    q: u32,
    rules: &RestrictionRules,
    used: &mut BTreeSet<String>,
) -> Result<F2Matrix, ConfigError> {
    let src = cell_dims(x, p, q);
    let dst = cell_dims(x, p + 1, q);
    let (so, dof) = (offsets(&src), offsets(&dst));
    let mut m = F2Matrix::zeros(dst.iter().sum(), src.iter().sum());
    match p {
        0 => {
            for (ei, e) in x.edges.iter().enumerate() {
                let ov = &x.vertices[e.origin].stab;
                let r = derived_restriction(ov, &e.stab, |s| s.clone(), rules)?;
                used.insert(rule_key(ov.kind, e.stab.kind));
                place(&mut m, &r.matrix(q), dof[ei], so[e.origin]);
                let tv = &x.vertices[e.target].stab;
                let g = e.translate.m.clone();
                let r = derived_restriction(tv, &e.stab, |s| s.conj_by(&g), rules)?;
                used.insert(rule_key(tv.kind, e.stab.kind));
                place(&mut m, &r.matrix(q), dof[ei], so[e.target]);
            }
        }
        1 => {
            for (fi, f) in x.faces.iter().enumerate() {
                for b in &f.boundary {
                    let es = &x.edges[b.edge].stab;
                    let k = b.k.m.clone();
                    let r = derived_restriction(es, &f.stab, |s| s.conj_by(&k), rules)?;
                    used.insert(rule_key(es.kind, f.stab.kind));
                    place(&mut m, &r.matrix(q), dof[fi], so[b.edge]);
                }
            }
        }
        _ => {}
    }
    Ok(m)
}

/// All d1 matrices of a page: d[q][p] for p = 0, 1, 2 (the last one is the zero map).
#[derive(Clone, Debug)]
pub struct Differentials {
    pub d: Vec<[F2Matrix; 3]>,
    pub rules_used: BTreeSet<String>,
}

impl Differentials {
    /// Map into E1^{p,q}, i.e. d1 from (p-1, q).
    pub fn incoming(&self, p: usize, q: u32, dim: usize) -> F2Matrix {
        if p == 0 {
            F2Matrix::zeros(dim, 0)
        } else {
            self.d[q as usize][p - 1].clone()
        }
    }
}

pub fn differentials(x: &QuotientComplex, q_max: u32, rules: &RestrictionRules) -> Result<Differentials, SpectralError> {
    let mut used = BTreeSet::new();
    let mut d = Vec::new();
    for q in 0..=q_max {
        let d0 = d1_matrix(x, 0, q, rules, &mut used)?;
        let d1 = d1_matrix(x, 1, q, rules, &mut used)?;
        if !d1.mul(&d0).is_zero() {
            return Err(SpectralError::NotAComplex { q, dump: format!("d1(0):\n{d0:?}d1(1):\n{d1:?}") });
        }
        let n2 = cell_dims(x, 2, q).iter().sum();
        d.push([d0, d1, F2Matrix::zeros(0, n2)]);
    }
    Ok(Differentials { d, rules_used: used })
}

#[derive(Clone, Debug, Serialize)]
pub struct E2Page {
    pub group: String,
    pub q_max: u32,
    /// dims[q][p]
    pub dims: Vec<[usize; 3]>,
    /// Representative cocycles of a basis, written as sums of E1 basis names.
    pub names: Vec<[Vec<String>; 3]>,
}

impl E2Page {
    pub fn dim(&self, p: usize, q: u32) -> usize {
        if p > 2 || q > self.q_max {
            return 0;
        }
        self.dims[q as usize][p]
    }

    /// Rows of the page as tuples (p, q, dim, basis names).
    pub fn entries(&self) -> Vec<(usize, u32, usize, Vec<String>)> {
        let mut out = Vec::new();
        for q in 0..=self.q_max {
            for p in 0..3 {
                out.push((p, q, self.dims[q as usize][p], self.names[q as usize][p].clone()));
            }
        }
        out
    }
}

pub fn format_vector(v: &[u8], names: &[String]) -> String {
    let terms: Vec<&str> = v.iter().zip(names).filter(|(c, _)| **c == 1).map(|(_, n)| n.as_str()).collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn columns(vs: &[Vec<u8>], rows: usize) -> F2Matrix {
    F2Matrix::from_columns(vs, rows)
}

pub fn compute_e2(e1: &E1Page, d: &Differentials) -> E2Page {
    let mut dims = Vec::new();
    let mut names = Vec::new();
    for q in 0..=e1.q_max {
        let mut drow = [0usize; 3];
        let mut nrow: [Vec<String>; 3] = Default::default();
        for p in 0..3 {
            let n = e1.dim(p, q);
            let out = &d.d[q as usize][p];
            let z = if out.rows() == 0 { identity_columns(n) } else { kernel_basis(out) };
            let b = d.incoming(p, q, n);
            let chosen = complement_columns(&b, &columns(&z, n));
            drow[p] = z.len() - rank(&b);
            debug_assert_eq!(drow[p], chosen.len());
            nrow[p] = chosen.iter().map(|&j| format_vector(&z[j], &e1.names[q as usize][p])).collect();
        }
        dims.push(drow);
        names.push(nrow);
    }
    E2Page { group: e1.group.clone(), q_max: e1.q_max, dims, names }
}

fn identity_columns(n: usize) -> Vec<Vec<u8>> {
    (0..n)
        .map(|i| {
            let mut v = vec![0u8; n];
            v[i] = 1;
            v
        })
        .collect()
}

/// Sum of E2 dims on the antidiagonal p + q = n.
pub fn total_dims(e2: &E2Page, n: u32) -> usize {
    (0..3usize).filter(|&p| p as u32 <= n).map(|p| e2.dim(p, n - p as u32)).sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonEntry {
    pub p: usize,
    pub q: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    pub kernel_names: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Comparison {
    pub q_max: u32,
    pub entries: Vec<ComparisonEntry>,
    /// Face coefficients of the cellular maps, per map name.
    pub face_images: Vec<(String, Vec<Vec<u8>>)>,
    pub rules_used: BTreeSet<String>,
}

impl Comparison {
    pub fn entry(&self, p: usize, q: u32) -> Option<&ComparisonEntry> {
        self.entries.iter().find(|e| e.p == p && e.q == q)
    }
}

fn block_diag_columns(z: &[Vec<u8>], n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for half in 0..2 {
        for v in z {
            let mut w = vec![0u8; 2 * n];
            w[half * n..half * n + n].copy_from_slice(v);
            out.push(w);
        }
    }
    out
}

/// (i*, j*): E(SL_2) + E(SL_2) -> E(Gamma_0), on E1 with a chain-map audit, then on E2.
pub fn comparison(
    gamma0: &QuotientComplex,
    sl2: &QuotientComplex,
    maps: &mut [CellularMap; 2],
    rules: &RestrictionRules,
    q_max: u32,
) -> Result<Comparison, SpectralError> {
    assert_eq!(gamma0.tag, GroupTag::Gamma0);
    assert_eq!(sl2.tag, GroupTag::Sl2);
    let dg = differentials(gamma0, q_max, rules)?;
    let ds = differentials(sl2, q_max, rules)?;
    let e1g = assemble_e1(gamma0, q_max);
    let e1s = assemble_e1(sl2, q_max);
    let mut used = dg.rules_used.clone();
    used.extend(ds.rules_used.iter().cloned());
    let mut entries = Vec::new();
    for q in 0..=q_max {
        let mut f: Vec<F2Matrix> = Vec::new();
        for p in 0..3 {
            let fi = maps[0].e1_matrix(gamma0, sl2, rules, p, q)?;
            let fj = maps[1].e1_matrix(gamma0, sl2, rules, p, q)?;
            f.push(fi.hstack(&fj));
        }
        // D_G0 F_p = F_{p+1} (D_SL + D_SL)
        for p in 0..2 {
            let dsl = &ds.d[q as usize][p];
            let dd = dsl.block_diag(dsl);
            let lhs = dg.d[q as usize][p].mul(&f[p]);
            let rhs = f[p + 1].mul(&dd);
            if lhs != rhs {
                return Err(SpectralError::ChainMap { p, q, dump: format!("D F:\n{lhs:?}F D:\n{rhs:?}") });
            }
        }
        for p in 0..3 {
            let ns = e1s.dim(p, q);
            let nt = e1g.dim(p, q);
            let out = &ds.d[q as usize][p];
            let zs = if out.rows() == 0 { identity_columns(ns) } else { kernel_basis(out) };
            let zs2 = block_diag_columns(&zs, ns);
            let bs = ds.incoming(p, q, ns);
            let bs2 = bs.block_diag(&bs);
            let bt = dg.incoming(p, q, nt);
            let rbt = rank(&bt);
            let rbs2 = rank(&bs2);
            let src_dim = zs2.len() - rbs2;
            let tgt_z = {
                let out = &dg.d[q as usize][p];
                if out.rows() == 0 { nt } else { kernel_basis(out).len() }
            };
            let tgt_dim = tgt_z - rbt;
            let img = f[p].mul(&columns(&zs2, 2 * ns));
            let r = rank(&img.hstack(&bt)) - rbt;
            // kernel representatives: combinations of cocycles landing in the target boundaries
            let stacked = img.hstack(&bt);
            let mut reps = Vec::new();
            for v in kernel_basis(&stacked) {
                let mut w = vec![0u8; 2 * ns];
                for (a, z) in v.iter().take(zs2.len()).zip(&zs2) {
                    if *a == 1 {
                        for (wi, zi) in w.iter_mut().zip(z) {
                            *wi ^= zi;
                        }
                    }
                }
                reps.push(w);
            }
            let chosen = complement_columns(&bs2, &columns(&reps, 2 * ns));
            let src_names: Vec<String> = ["i", "j"]
                .iter()
                .flat_map(|t| e1s.names[q as usize][p].iter().map(move |n| format!("{n}[{t}]")))
                .collect();
            let kernel_names: Vec<String> = chosen.iter().map(|&j| format_vector(&reps[j], &src_names)).collect();
            debug_assert_eq!(kernel_names.len(), src_dim - r);
            entries.push(ComparisonEntry {
                p,
                q,
                source_dim: src_dim,
                target_dim: tgt_dim,
                rank: r,
                kernel_dim: src_dim - r,
                cokernel_dim: tgt_dim - r,
                kernel_names,
            });
        }
    }
    for m in maps.iter() {
        used.extend(m.rules_used.iter().cloned());
    }
    let face_images = maps.iter().map(|m| (m.name.clone(), m.face_images.clone())).collect();
    Ok(Comparison { q_max, entries, face_images, rules_used: used })
}
