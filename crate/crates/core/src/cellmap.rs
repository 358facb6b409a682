//! Equivariant cellular maps X -> X covering a group homomorphism phi from the
//! Gamma_0 action to the SL_2(Z[w]) action: vertices go to phi-fixed vertices, edges to
//! fixed edge paths, faces to the unique 2-chain with the right boundary.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::cohomology::{derived_restriction, rule_key, ConfigError, RestrictionRules};
use crate::complex::QuotientComplex;
use crate::f2::{solve, F2Matrix};
use crate::hyperbolic::{act, HPoint};
use crate::mat2::{GroupError, Mat2};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("no vertex fixed by the image of the stabilizer of {0} within the search radius")]
    NoFixedVertex(String),
    #[error("no fixed edge path for the image of edge {0}")]
    NoPath(String),
    #[error("face images cannot satisfy the chain-map equation in row 0")]
    FaceEquation,
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Config(#[from] ConfigError),
}

/// A vertex of X written as g * (orbit representative).
#[derive(Clone, Debug)]
pub struct XVertex {
    pub g: Mat2,
    pub rep: usize,
}

/// The X-edge k * (orbit edge).
#[derive(Clone, Debug)]
pub struct XEdge {
    pub k: Mat2,
    pub edge: usize,
}

#[derive(Clone, Debug)]
struct LocalStep {
    k: Mat2,
    edge: usize,
    nbr_rep: usize,
    nbr_g: Mat2,
}

/// Edges of X at each orbit vertex, one entry per distinct X-edge.
fn local_steps(x: &QuotientComplex) -> Vec<Vec<LocalStep>> {
    let mut out = Vec::new();
    for (r, v) in x.vertices.iter().enumerate() {
        let mut seen: BTreeSet<(HPoint, HPoint)> = BTreeSet::new();
        let mut steps = Vec::new();
        for a in v.stab.elements() {
            for (ei, e) in x.edges.iter().enumerate() {
                let mut cands = Vec::new();
                if e.origin == r {
                    cands.push((a.clone(), e.target, a.mul(&e.translate.m)));
                }
                if e.target == r {
                    let k = a.mul(&e.translate.m.adjugate());
                    cands.push((k.clone(), e.origin, k));
                }
                for (k, nbr_rep, nbr_g) in cands {
                    let p0 = act(&k, &x.vertices[e.origin].point);
                    let p1 = act(&k.mul(&e.translate.m), &x.vertices[e.target].point);
                    let key = if p0 <= p1 { (p0, p1) } else { (p1, p0) };
                    if seen.insert(key) {
                        steps.push(LocalStep { k, edge: ei, nbr_rep, nbr_g });
                    }
                }
            }
        }
        out.push(steps);
    }
    out
}

const SEARCH_LIMIT: usize = 20_000;

fn point_of(x: &QuotientComplex, v: &XVertex) -> HPoint {
    act(&v.g, &x.vertices[v.rep].point)
}

fn fixed_by(gens: &[Mat2], p: &HPoint) -> bool {
    gens.iter().all(|g| act(g, p) == *p)
}

fn edge_fixed(x: &QuotientComplex, gens: &[Mat2], k: &Mat2, edge: usize) -> bool {
    let e = &x.edges[edge];
    let p0 = act(k, &x.vertices[e.origin].point);
    let p1 = act(&k.mul(&e.translate.m), &x.vertices[e.target].point);
    fixed_by(gens, &p0) && fixed_by(gens, &p1)
}

/// Breadth-first search over X from the orbit representatives for a vertex fixed by `gens`.
fn find_fixed_vertex(x: &QuotientComplex, steps: &[Vec<LocalStep>], gens: &[Mat2]) -> Option<XVertex> {
    let mut seen: HashMap<HPoint, ()> = HashMap::new();
    let mut queue: VecDeque<XVertex> = VecDeque::new();
    for r in 0..x.vertices.len() {
        let v = XVertex { g: Mat2::identity(), rep: r };
        seen.insert(point_of(x, &v), ());
        queue.push_back(v);
    }
    while let Some(v) = queue.pop_front() {
        if fixed_by(gens, &point_of(x, &v)) {
            return Some(v);
        }
        if seen.len() > SEARCH_LIMIT {
            return None;
        }
        for s in &steps[v.rep] {
            let w = XVertex { g: v.g.mul(&s.nbr_g), rep: s.nbr_rep };
            let p = point_of(x, &w);
            if seen.insert(p, ()).is_none() {
                queue.push_back(w);
            }
        }
    }
    None
}

/// Shortest path of X-edges from `a` to `b` using only edges fixed by `gens`.
fn fixed_path(x: &QuotientComplex, steps: &[Vec<LocalStep>], gens: &[Mat2], a: &XVertex, b: &XVertex) -> Option<Vec<XEdge>> {
    let goal = point_of(x, b);
    let start = point_of(x, a);
    if start == goal {
        return Some(vec![]);
    }
    let mut prev: HashMap<HPoint, Option<(HPoint, XEdge)>> = HashMap::new();
    prev.insert(start.clone(), None);
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(v) = queue.pop_front() {
        let here = point_of(x, &v);
        for s in &steps[v.rep] {
            let k = v.g.mul(&s.k);
            if !edge_fixed(x, gens, &k, s.edge) {
                continue;
            }
            let w = XVertex { g: v.g.mul(&s.nbr_g), rep: s.nbr_rep };
            let p = point_of(x, &w);
            if prev.contains_key(&p) {
                continue;
            }
            prev.insert(p.clone(), Some((here.clone(), XEdge { k, edge: s.edge })));
            if p == goal {
                let mut path = Vec::new();
                let mut cur = p;
                while let Some(Some((back, e))) = prev.get(&cur) {
                    path.push(e.clone());
                    cur = back.clone();
                }
                path.reverse();
                return Some(path);
            }
            if prev.len() > SEARCH_LIMIT {
                return None;
            }
            queue.push_back(w);
        }
    }
    None
}

pub struct CellularMap {
    pub name: String,
    pub vertex_images: Vec<XVertex>,
    pub edge_images: Vec<Vec<XEdge>>,
    /// Coefficient of each target face orbit in the image of each source face.
    pub face_images: Vec<Vec<u8>>,
    phi: Box<dyn Fn(&Mat2) -> Mat2>,
    pub rules_used: BTreeSet<String>,
}

impl CellularMap {
    pub fn phi(&self, m: &Mat2) -> Mat2 {
        (self.phi)(m)
    }

    /// Matrix of the induced map E1^{p,q}(target complex) -> E1^{p,q}(source complex);
    /// rows follow `source_basis`, columns `target_basis` (cell index, dimension in degree q).
    pub fn e1_matrix(
        &mut self,
        src: &QuotientComplex,
        tgt: &QuotientComplex,
        rules: &RestrictionRules,
        p: usize,
        q: u32,
    ) -> Result<F2Matrix, MapError> {
        let src_dims = crate::spectral::cell_dims(src, p, q);
        let tgt_dims = crate::spectral::cell_dims(tgt, p, q);
        let src_off = offsets(&src_dims);
        let tgt_off = offsets(&tgt_dims);
        let mut m = F2Matrix::zeros(src_dims.iter().sum(), tgt_dims.iter().sum());
        let place = |m: &mut F2Matrix, block: &F2Matrix, r0: usize, c0: usize| {
            for i in 0..block.rows() {
                for j in 0..block.cols() {
                    if block.get(i, j) {
                        m.flip(r0 + i, c0 + j);
                    }
                }
            }
        };
        match p {
            0 => {
                for (si, v) in src.vertices.iter().enumerate() {
                    let img = &self.vertex_images[si];
                    let tstab = &tgt.vertices[img.rep].stab;
                    let g = img.g.clone();
                    let phi = &self.phi;
                    let r = derived_restriction(tstab, &v.stab, |s| phi(s).conj_by(&g), rules)?;
                    self.rules_used.insert(rule_key(tstab.kind, v.stab.kind));
                    place(&mut m, &r.matrix(q), src_off[si], tgt_off[img.rep]);
                }
            }
            1 => {
                for (si, e) in src.edges.iter().enumerate() {
                    for step in &self.edge_images[si] {
                        let tstab = &tgt.edges[step.edge].stab;
                        let k = step.k.clone();
                        let phi = &self.phi;
                        let r = derived_restriction(tstab, &e.stab, |s| phi(s).conj_by(&k), rules)?;
                        self.rules_used.insert(rule_key(tstab.kind, e.stab.kind));
                        place(&mut m, &r.matrix(q), src_off[si], tgt_off[step.edge]);
                    }
                }
            }
            2 => {
                for (si, f) in src.faces.iter().enumerate() {
                    for (ti, c) in self.face_images[si].iter().enumerate() {
                        if *c == 0 {
                            continue;
                        }
                        let tstab = &tgt.faces[ti].stab;
                        let phi = &self.phi;
                        let r = derived_restriction(tstab, &f.stab, |s| phi(s), rules)?;
                        self.rules_used.insert(rule_key(tstab.kind, f.stab.kind));
                        place(&mut m, &r.matrix(q), src_off[si], tgt_off[ti]);
                    }
                }
            }
            _ => {}
        }
        Ok(m)
    }
}

pub fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(dims.len());
    let mut acc = 0;
    for d in dims {
        out.push(acc);
        acc += d;
    }
    out
}

/// Builds the map on vertices and edges by search, then solves for the face images.
pub fn build_cellular_map(
    name: &str,
    src: &QuotientComplex,
    tgt: &QuotientComplex,
    phi: Box<dyn Fn(&Mat2) -> Mat2>,
) -> Result<CellularMap, MapError> {
    let steps = local_steps(tgt);
    let mut vertex_images = Vec::new();
    for v in &src.vertices {
        let gens: Vec<Mat2> = v.stab.gens.iter().map(&phi).collect();
        let w = find_fixed_vertex(tgt, &steps, &gens).ok_or_else(|| MapError::NoFixedVertex(v.name.clone()))?;
        // the whole image group must sit in the stabilizer of the chosen vertex
        for s in v.stab.elements() {
            if !tgt.vertices[w.rep].stab.contains(&phi(s).conj_by(&w.g)) {
                return Err(MapError::NoFixedVertex(v.name.clone()));
            }
        }
        vertex_images.push(w);
    }
    let mut edge_images = Vec::new();
    for e in &src.edges {
        let gens: Vec<Mat2> = e.stab.gens.iter().map(&phi).collect();
        let a = vertex_images[e.origin].clone();
        let t = &vertex_images[e.target];
        let b = XVertex { g: phi(&e.translate.m).mul(&t.g), rep: t.rep };
        let path = fixed_path(tgt, &steps, &gens, &a, &b).ok_or_else(|| MapError::NoPath(e.name.clone()))?;
        edge_images.push(path);
    }
    let mut map = CellularMap {
        name: name.to_string(),
        vertex_images,
        edge_images,
        face_images: vec![vec![0; tgt.faces.len()]; src.faces.len()],
        phi,
        rules_used: BTreeSet::new(),
    };
    // row 0: D_src F_1 = F_2 D_tgt, solved row by row for F_2
    let d_src = src.chain().d2.transpose(); // faces x edges (coboundary C^1 -> C^2)
    let d_tgt = tgt.chain().d2.transpose();
    let f1 = edge_incidence(&map, src, tgt);
    let lhs = d_src.mul(&f1);
    let dt = d_tgt.transpose();
    for i in 0..src.faces.len() {
        let row = lhs.row(i);
        let x = solve(&dt, &row).ok_or(MapError::FaceEquation)?;
        map.face_images[i] = x;
    }
    Ok(map)
}

/// Row-0 matrix of the map on 1-cochains: counts of path edges mod 2.
fn edge_incidence(map: &CellularMap, src: &QuotientComplex, tgt: &QuotientComplex) -> F2Matrix {
    let mut m = F2Matrix::zeros(src.edges.len(), tgt.edges.len());
    for (i, path) in map.edge_images.iter().enumerate() {
        for s in path {
            m.flip(i, s.edge);
        }
    }
    m
}
