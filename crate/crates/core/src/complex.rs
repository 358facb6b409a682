//! The two-dimensional cell complexes for Gamma_0(w) and SL_2(Z[w]) built from the
//! fundamental domain, their orbit quotients and cellular (co)homology.

use std::collections::{BTreeMap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::f2::{kernel_basis, rank, F2Matrix};
use crate::groups::{FiniteSubgroup, StabKind};
use crate::hyperbolic::{act, domain_vertex, fixes_point, GeometryError, HPoint};
use crate::mat2::{generator, in_gamma0, GroupError, Mat2};
use crate::smith::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("identification {matrix} does not carry {from:?} onto {to:?}")]
    BadIdentification { matrix: String, from: (String, String), to: (String, String) },
    #[error("stabilizer generator {gen} of {cell} does not fix {vertex}")]
    StabilizerAudit { gen: String, cell: String, vertex: String },
    #[error("stabilizer of {edge} is not contained in the stabilizer of its endpoint {vertex}")]
    Containment { edge: String, vertex: String },
    #[error("identified edges {0} and {1} carry incompatible stabilizers")]
    LabelConflict(String, String),
    #[error("face {face} has no edge between {a} and {b}")]
    MissingEdge { face: String, a: String, b: String },
    #[error("unknown domain cell {0}")]
    UnknownCell(String),
    #[error("complex is not connected")]
    Disconnected,
    #[error("orbit representative {0} cannot be reached through the identifications")]
    Unreachable(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GroupTag {
    Gamma0,
    Sl2,
}

impl GroupTag {
    pub fn contains(self, m: &Mat2) -> bool {
        match self {
            GroupTag::Gamma0 => in_gamma0(m).unwrap_or(false),
            GroupTag::Sl2 => m.is_integral() && m.is_unimodular(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GroupTag::Gamma0 => "Gamma0(w)",
            GroupTag::Sl2 => "SL2(Z[w])",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DomainEdge {
    pub ends: (String, String),
    /// Generator names of the decorated stabilizer; empty means only +-I.
    pub label: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DomainFace {
    pub name: String,
    pub cycle: Vec<String>,
}

/// `matrix` maps from.0 to to.0 and from.1 to to.1.
#[derive(Clone, Debug, Serialize)]
pub struct Identification {
    pub matrix: String,
    pub from: (String, String),
    pub to: (String, String),
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivariantComplex {
    pub tag: GroupTag,
    pub vertices: Vec<String>,
    pub edges: Vec<DomainEdge>,
    pub faces: Vec<DomainFace>,
    /// Stabilizer generators at selected domain vertices.
    pub vertex_labels: Vec<(String, Vec<String>)>,
    pub identifications: Vec<Identification>,
}

fn s(x: &str) -> String {
    x.to_string()
}

fn edge(a: &str, b: &str, label: &[&str]) -> DomainEdge {
    DomainEdge { ends: (s(a), s(b)), label: label.iter().map(|x| s(x)).collect() }
}

fn ident(m: &str, f: (&str, &str), t: (&str, &str)) -> Identification {
    Identification { matrix: s(m), from: (s(f.0), s(f.1)), to: (s(t.0), s(t.1)) }
}

fn face(name: &str, cycle: &[&str]) -> DomainFace {
    DomainFace { name: s(name), cycle: cycle.iter().map(|x| s(x)).collect() }
}

/// Three quadrangles with the decorated edges and the U, T identifications.
pub fn build_gamma0_complex() -> EquivariantComplex {
    EquivariantComplex {
        tag: GroupTag::Gamma0,
        vertices: ["v2", "v1", "v2'", "v1'", "v1''", "v1'''", "v2''", "v2'''"].map(s).to_vec(),
        edges: vec![
            edge("v2", "v2'''", &["C"]),
            edge("v2", "v1", &["B"]),
            edge("v1", "v2'", &["A"]),
            edge("v2'", "v1'", &["A"]),
            edge("v2'", "v2''", &["c"]),
            edge("v1'", "v1''", &["b"]),
            edge("v1", "v1'''", &[]),
            edge("v2'''", "v1'''", &[]),
            edge("v1'''", "v2''", &[]),
            edge("v2''", "v1''", &[]),
        ],
        faces: vec![
            face("Q1", &["v2", "v1", "v1'''", "v2'''"]),
            face("Q2", &["v1", "v2'", "v2''", "v1'''"]),
            face("Q3", &["v2'", "v1'", "v1''", "v2''"]),
        ],
        vertex_labels: vec![(s("v2"), vec![s("C"), s("B")]), (s("v1"), vec![s("B"), s("A")]), (s("v2'"), vec![s("A")])],
        identifications: vec![
            ident("U", ("v2", "v1"), ("v2'''", "v1'''")),
            ident("U", ("v1", "v2'"), ("v1'''", "v2''")),
            ident("U", ("v2'", "v1'"), ("v2''", "v1''")),
            ident("T", ("v1", "v1'''"), ("v1'", "v1''")),
        ],
    }
}

/// The quadrangle (v2', v1', v1'', v2'') folded into a cylinder by U.
pub fn build_sl2_complex() -> EquivariantComplex {
    EquivariantComplex {
        tag: GroupTag::Sl2,
        vertices: ["v2'", "v1'", "v1''", "v2''"].map(s).to_vec(),
        edges: vec![
            edge("v2'", "v1'", &["A"]),
            edge("v2'", "v2''", &["c"]),
            edge("v1'", "v1''", &["b"]),
            edge("v2''", "v1''", &[]),
        ],
        faces: vec![face("Q3", &["v2'", "v1'", "v1''", "v2''"])],
        vertex_labels: vec![(s("v2'"), vec![s("c"), s("A")]), (s("v1'"), vec![s("A"), s("b")])],
        identifications: vec![ident("U", ("v2'", "v1'"), ("v2''", "v1''"))],
    }
}

/// Every domain cell of `inner` also occurs in `outer`.
pub fn is_nested(inner: &EquivariantComplex, outer: &EquivariantComplex) -> bool {
    let same_edge = |a: &DomainEdge, b: &DomainEdge| {
        a.ends == b.ends || (a.ends.0 == b.ends.1 && a.ends.1 == b.ends.0)
    };
    inner.vertices.iter().all(|v| outer.vertices.contains(v))
        && inner.edges.iter().all(|e| outer.edges.iter().any(|f| same_edge(e, f)))
        && inner.faces.iter().all(|f| outer.faces.iter().any(|g| g.cycle == f.cycle))
}

/// A group element together with a readable word for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Named {
    pub m: Mat2,
    pub word: String,
}

impl Named {
    pub fn identity() -> Self {
        Named { m: Mat2::identity(), word: s("I") }
    }

    pub fn mul(&self, o: &Named) -> Named {
        let inverse_of = |t: &str| match t.strip_suffix("^-1") {
            Some(b) => s(b),
            None => format!("{t}^-1"),
        };
        let mut toks: Vec<String> = self.word.split(' ').filter(|t| *t != "I").map(s).collect();
        for t in o.word.split(' ').filter(|t| *t != "I") {
            if toks.last().map(|l| *l == inverse_of(t)).unwrap_or(false) {
                toks.pop();
            } else {
                toks.push(s(t));
            }
        }
        let word = if toks.is_empty() { s("I") } else { toks.join(" ") };
        Named { m: self.m.mul(&o.m), word }
    }

    pub fn inverse(&self) -> Result<Named, GroupError> {
        let word = if self.word == "I" {
            s("I")
        } else {
            self.word
                .split(' ')
                .rev()
                .map(|t| match t.strip_suffix("^-1") {
                    Some(b) => s(b),
                    None => format!("{t}^-1"),
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        Ok(Named { m: self.m.inverse()?, word })
    }
}

#[derive(Clone, Debug)]
pub struct OrbitVertex {
    pub name: String,
    pub point: HPoint,
    pub stab: FiniteSubgroup,
}

/// Orbit edge normalized to start at an orbit vertex: from `origin` to translate * `target`.
#[derive(Clone, Debug)]
pub struct OrbitEdge {
    pub name: String,
    pub origin: usize,
    pub target: usize,
    pub translate: Named,
    pub stab: FiniteSubgroup,
}

/// k * edge occurs in the boundary with the given sign.
#[derive(Clone, Debug)]
pub struct BoundaryEntry {
    pub k: Named,
    pub edge: usize,
    pub sign: i64,
}

#[derive(Clone, Debug)]
pub struct OrbitFace {
    pub name: String,
    pub cycle: Vec<String>,
    pub boundary: Vec<BoundaryEntry>,
    pub stab: FiniteSubgroup,
}

#[derive(Clone, Debug)]
pub struct QuotientComplex {
    pub tag: GroupTag,
    pub vertices: Vec<OrbitVertex>,
    pub edges: Vec<OrbitEdge>,
    pub faces: Vec<OrbitFace>,
    /// For every domain vertex: (orbit index, element carrying the orbit vertex onto it).
    pub vertex_position: BTreeMap<String, (usize, Named)>,
}

fn named_generator(name: &str) -> Result<Named, ComplexError> {
    Ok(Named { m: generator(name)?, word: s(name) })
}

fn subgroup(names: &[String], tag: GroupTag) -> Result<FiniteSubgroup, ComplexError> {
    if names.is_empty() {
        return Ok(FiniteSubgroup::center());
    }
    let gens = names.iter().map(|n| generator(n)).collect::<Result<Vec<_>, _>>()?;
    let full = FiniteSubgroup::generate(names.to_vec(), gens)?;
    Ok(full.intersect(|m| tag.contains(m))?)
}

/// Orbit structure generated by a list of (from, to, element) moves with to = g * from.
fn orbits<T: Clone + Ord>(items: &[T], moves: &[(T, T, Named)]) -> Result<BTreeMap<T, (usize, Named)>, ComplexError> {
    let mut out: BTreeMap<T, (usize, Named)> = BTreeMap::new();
    let mut orbit = 0;
    for root in items {
        if out.contains_key(root) {
            continue;
        }
        out.insert(root.clone(), (orbit, Named::identity()));
        let mut queue = VecDeque::from([root.clone()]);
        while let Some(x) = queue.pop_front() {
            let gx = out[&x].1.clone();
            for (f, t, g) in moves {
                let step = if *f == x {
                    Some((t.clone(), g.mul(&gx)))
                } else if *t == x {
                    Some((f.clone(), g.inverse()?.mul(&gx)))
                } else {
                    None
                };
                if let Some((y, gy)) = step {
                    if !out.contains_key(&y) {
                        out.insert(y.clone(), (orbit, gy));
                        queue.push_back(y);
                    }
                }
            }
        }
        orbit += 1;
    }
    Ok(out)
}

fn point(name: &str) -> Result<HPoint, ComplexError> {
    Ok(domain_vertex(name)?)
}

fn audit_fixes(stab: &FiniteSubgroup, cell: &str, vertices: &[(&str, HPoint)]) -> Result<(), ComplexError> {
    for (gn, g) in stab.gen_names.iter().zip(&stab.gens) {
        for (vn, p) in vertices {
            if !fixes_point(g, p) {
                return Err(ComplexError::StabilizerAudit { gen: gn.clone(), cell: s(cell), vertex: s(vn) });
            }
        }
    }
    Ok(())
}

fn same_elements(a: &FiniteSubgroup, b: &FiniteSubgroup) -> bool {
    a.order() == b.order() && a.elements().iter().all(|m| b.contains(m))
}

/// Orbit cells, normalized edge representatives and face boundaries.
pub fn quotient(x: &EquivariantComplex) -> Result<QuotientComplex, ComplexError> {
    // identifications must carry endpoints exactly
    let mut vmoves = Vec::new();
    let mut emoves = Vec::new();
    let edge_index = |a: &str, b: &str| -> Option<(usize, bool)> {
        x.edges.iter().position(|e| e.ends.0 == a && e.ends.1 == b).map(|i| (i, true)).or_else(|| {
            x.edges.iter().position(|e| e.ends.0 == b && e.ends.1 == a).map(|i| (i, false))
        })
    };
    for id in &x.identifications {
        let g = named_generator(&id.matrix)?;
        let ok = act(&g.m, &point(&id.from.0)?) == point(&id.to.0)? && act(&g.m, &point(&id.from.1)?) == point(&id.to.1)?;
        if !ok || !x.tag.contains(&g.m) {
            return Err(ComplexError::BadIdentification { matrix: id.matrix.clone(), from: id.from.clone(), to: id.to.clone() });
        }
        let (fi, fdir) = edge_index(&id.from.0, &id.from.1).ok_or_else(|| ComplexError::UnknownCell(format!("{:?}", id.from)))?;
        let (ti, tdir) = edge_index(&id.to.0, &id.to.1).ok_or_else(|| ComplexError::UnknownCell(format!("{:?}", id.to)))?;
        if fdir != tdir {
            return Err(ComplexError::BadIdentification { matrix: id.matrix.clone(), from: id.from.clone(), to: id.to.clone() });
        }
        vmoves.push((id.from.0.clone(), id.to.0.clone(), g.clone()));
        vmoves.push((id.from.1.clone(), id.to.1.clone(), g.clone()));
        emoves.push((fi, ti, g));
    }
    let vorb = orbits(&x.vertices, &vmoves)?;
    let eids: Vec<usize> = (0..x.edges.len()).collect();
    let eorb = orbits(&eids, &emoves)?;
    for (v, (_, g)) in &vorb {
        debug_assert!(g.m.is_unimodular(), "{v}");
    }

    // orbit vertices: the first domain vertex of each orbit
    let mut vertices: Vec<OrbitVertex> = Vec::new();
    let mut rep_of_orbit: BTreeMap<usize, String> = BTreeMap::new();
    for v in &x.vertices {
        let (o, _) = &vorb[v];
        if rep_of_orbit.contains_key(o) {
            continue;
        }
        rep_of_orbit.insert(*o, v.clone());
        // stabilizer from a labeled vertex in the orbit, transported to the representative
        let mut stab = FiniteSubgroup::center();
        for (lv, names) in &x.vertex_labels {
            let Some((lo, gl)) = vorb.get(lv) else { continue };
            if lo != o {
                continue;
            }
            let st = subgroup(names, x.tag)?;
            audit_fixes(&st, lv, &[(lv.as_str(), point(lv)?)])?;
            stab = st.conjugate(&gl.m, &gl.word)?;
        }
        vertices.push(OrbitVertex { name: v.clone(), point: point(v)?, stab });
    }
    let vindex = |name: &str| -> usize {
        let (o, _) = &vorb[name];
        vertices.iter().position(|w| vorb[&w.name].0 == *o).expect("orbit has a representative")
    };
    let vertex_position: BTreeMap<String, (usize, Named)> =
        x.vertices.iter().map(|v| (v.clone(), (vindex(v), vorb[v].1.clone()))).collect();

    // orbit edges
    let mut edges: Vec<OrbitEdge> = Vec::new();
    let mut edge_of_orbit: BTreeMap<usize, (usize, Named)> = BTreeMap::new(); // orbit -> (orbit edge index, g_P)
    for (i, e) in x.edges.iter().enumerate() {
        let (o, _) = &eorb[&i];
        if edge_of_orbit.contains_key(o) {
            continue;
        }
        let (rp, gp) = vertex_position[&e.ends.0].clone();
        let (rq, gq) = vertex_position[&e.ends.1].clone();
        let translate = gp.inverse()?.mul(&gq);
        // stabilizer: from any decorated edge in the orbit, transported to this edge
        let mut stab: Option<FiniteSubgroup> = None;
        for (j, f) in x.edges.iter().enumerate() {
            let (oj, mj) = &eorb[&j];
            if oj != o || f.label.is_empty() {
                continue;
            }
            let st = subgroup(&f.label, x.tag)?;
            audit_fixes(&st, &format!("{}-{}", f.ends.0, f.ends.1), &[(f.ends.0.as_str(), point(&f.ends.0)?), (f.ends.1.as_str(), point(&f.ends.1)?)])?;
            // f = mj * root, e = me * root, so Stab(e) = (mj me^-1)^-1 Stab(f) (mj me^-1)
            let me = &eorb[&i].1;
            let k = mj.mul(&me.inverse()?);
            let here = st.conjugate(&k.m, &k.word)?;
            if let Some(prev) = &stab {
                if !same_elements(prev, &here) {
                    return Err(ComplexError::LabelConflict(format!("{}-{}", e.ends.0, e.ends.1), format!("{}-{}", f.ends.0, f.ends.1)));
                }
            } else {
                stab = Some(here);
            }
        }
        let stab = stab.unwrap_or_else(FiniteSubgroup::center);
        let stab = stab.conjugate(&gp.m, &gp.word)?;
        let name = format!("{}-{}", e.ends.0, e.ends.1);
        // containment in both endpoint stabilizers
        for s_el in stab.elements() {
            if !vertices[rp].stab.contains(s_el) {
                return Err(ComplexError::Containment { edge: name.clone(), vertex: vertices[rp].name.clone() });
            }
            if !vertices[rq].stab.contains(&s_el.conj_by(&translate.m)) {
                return Err(ComplexError::Containment { edge: name.clone(), vertex: vertices[rq].name.clone() });
            }
        }
        edge_of_orbit.insert(*o, (edges.len(), gp));
        edges.push(OrbitEdge { name, origin: rp, target: rq, translate, stab });
    }

    // faces
    let mut faces = Vec::new();
    for f in &x.faces {
        let mut boundary = Vec::new();
        let n = f.cycle.len();
        for i in 0..n {
            let (a, b) = (&f.cycle[i], &f.cycle[(i + 1) % n]);
            let (di, forward) = edge_index(a, b).ok_or_else(|| ComplexError::MissingEdge { face: f.name.clone(), a: a.clone(), b: b.clone() })?;
            let (o, m) = &eorb[&di];
            let (ei, gp) = &edge_of_orbit[o];
            let k = m.mul(gp);
            boundary.push(BoundaryEntry { k, edge: *ei, sign: if forward { 1 } else { -1 } });
        }
        faces.push(OrbitFace { name: f.name.clone(), cycle: f.cycle.clone(), boundary, stab: FiniteSubgroup::center() });
    }
    Ok(QuotientComplex { tag: x.tag, vertices, edges, faces, vertex_position })
}

/// Cell counts and F2 boundary matrices of a 2-complex.
#[derive(Clone, Debug)]
pub struct CellChain {
    pub counts: [usize; 3],
    /// edges -> vertices (n0 x n1)
    pub d1: F2Matrix,
    /// faces -> edges (n1 x n2)
    pub d2: F2Matrix,
}

impl CellChain {
    pub fn betti(&self) -> [usize; 3] {
        let r1 = rank(&self.d1);
        let r2 = rank(&self.d2);
        [self.counts[0] - r1, self.counts[1] - r1 - r2, self.counts[2] - r2]
    }

    pub fn euler(&self) -> i64 {
        self.counts[0] as i64 - self.counts[1] as i64 + self.counts[2] as i64
    }

    /// Subcomplex on the selected cells (indices per dimension).
    pub fn restrict(&self, cells: &[Vec<usize>; 3]) -> CellChain {
        let pick = |m: &F2Matrix, rows: &[usize], cols: &[usize]| {
            let mut out = F2Matrix::zeros(rows.len(), cols.len());
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    out.set(i, j, m.get(r, c));
                }
            }
            out
        };
        CellChain {
            counts: [cells[0].len(), cells[1].len(), cells[2].len()],
            d1: pick(&self.d1, &cells[0], &cells[1]),
            d2: pick(&self.d2, &cells[1], &cells[2]),
        }
    }

    /// Cells in a permuted order (new index i holds old cell perm[p][i]).
    pub fn permuted(&self, perm: &[Vec<usize>; 3]) -> CellChain {
        self.restrict(perm)
    }
}

impl QuotientComplex {
    pub fn counts(&self) -> [usize; 3] {
        [self.vertices.len(), self.edges.len(), self.faces.len()]
    }

    /// Integer boundary of edges: target - origin.
    pub fn boundary1_z(&self) -> IntMatrix {
        let mut rows = vec![vec![0i64; self.edges.len()]; self.vertices.len()];
        for (j, e) in self.edges.iter().enumerate() {
            rows[e.target][j] += 1;
            rows[e.origin][j] -= 1;
        }
        IntMatrix::from_rows_shaped(&rows, self.edges.len())
    }

    pub fn boundary2_z(&self) -> IntMatrix {
        let mut rows = vec![vec![0i64; self.faces.len()]; self.edges.len()];
        for (j, f) in self.faces.iter().enumerate() {
            for b in &f.boundary {
                rows[b.edge][j] += b.sign;
            }
        }
        IntMatrix::from_rows_shaped(&rows, self.faces.len())
    }

    pub fn chain(&self) -> CellChain {
        let to_f2 = |m: &IntMatrix| {
            let mut out = F2Matrix::zeros(m.rows(), m.cols());
            for i in 0..m.rows() {
                for j in 0..m.cols() {
                    out.set(i, j, m.get(i, j).bit(0));
                }
            }
            out
        };
        CellChain { counts: self.counts(), d1: to_f2(&self.boundary1_z()), d2: to_f2(&self.boundary2_z()) }
    }

    /// Orbit cells whose stabilizer has non-central 2-torsion.
    pub fn torsion_cells(&self) -> [Vec<usize>; 3] {
        let keep = |k: StabKind| k.has_noncentral_two_torsion();
        [
            (0..self.vertices.len()).filter(|&i| keep(self.vertices[i].stab.kind)).collect(),
            (0..self.edges.len()).filter(|&i| keep(self.edges[i].stab.kind)).collect(),
            (0..self.faces.len()).filter(|&i| keep(self.faces[i].stab.kind)).collect(),
        ]
    }

    pub fn torsion_subcomplex(&self) -> CellChain {
        self.chain().restrict(&self.torsion_cells())
    }

    pub fn is_connected(&self) -> bool {
        self.chain().betti()[0] == 1
    }
}

/// Distinct vertex stabilizers of the given quotients, in order of appearance.
pub fn vertex_stabilizers(xs: &[&QuotientComplex]) -> Vec<FiniteSubgroup> {
    let mut out: Vec<FiniteSubgroup> = Vec::new();
    for v in xs.iter().flat_map(|x| x.vertices.iter()) {
        if !out.iter().any(|g| g.elements() == v.stab.elements()) {
            out.push(v.stab.clone());
        }
    }
    out
}

pub fn cohomology_dims(q: &QuotientComplex, p: usize) -> usize {
    if p > 2 {
        return 0;
    }
    q.chain().betti()[p]
}

/// Rank of the cokernel of H^1(whole) -> H^1(sub) over F2.
pub fn corank(whole: &CellChain, sub_cells: &[Vec<usize>; 3]) -> usize {
    let sub = whole.restrict(sub_cells);
    if sub.counts[1] == 0 {
        return 0;
    }
    // cocycles of the whole complex: ker of d2^T on C^1
    let z1 = kernel_basis(&whole.d2.transpose());
    let restricted: Vec<Vec<u8>> = z1.iter().map(|v| sub_cells[1].iter().map(|&e| v[e]).collect()).collect();
    let b1_sub = sub.d1.transpose(); // coboundaries of the subcomplex (s1 x s0)
    let rb = rank(&b1_sub);
    let h1_sub = sub.counts[1] - rank(&sub.d2.transpose()) - rb;
    let image = if restricted.is_empty() {
        0
    } else {
        rank(&b1_sub.hstack(&F2Matrix::from_columns(&restricted, sub.counts[1]))) - rb
    };
    h1_sub - image
}

/// Serializable view of a quotient complex for the report.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientSummary {
    pub group: String,
    pub vertices: Vec<(String, String, usize)>,
    pub edges: Vec<(String, String, String, String, String, usize)>,
    pub faces: Vec<(String, Vec<String>)>,
}

impl QuotientComplex {
    pub fn summary(&self) -> QuotientSummary {
        QuotientSummary {
            group: self.tag.name().to_string(),
            vertices: self.vertices.iter().map(|v| (v.name.clone(), v.stab.label(), v.stab.order())).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    (
                        e.name.clone(),
                        self.vertices[e.origin].name.clone(),
                        self.vertices[e.target].name.clone(),
                        e.translate.word.clone(),
                        e.stab.label(),
                        e.stab.order(),
                    )
                })
                .collect(),
            faces: self
                .faces
                .iter()
                .map(|f| {
                    let b = f
                        .boundary
                        .iter()
                        .map(|b| format!("{}{}*{}", if b.sign < 0 { "-" } else { "+" }, b.k.word, self.edges[b.edge].name))
                        .collect();
                    (f.name.clone(), b)
                })
                .collect(),
        }
    }
}
