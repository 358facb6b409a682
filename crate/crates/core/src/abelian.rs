//! Abelianized presentation of the group acting on the complex, read off from the
//! orbit complex: vertex groups, one letter per non-tree edge, edge and face relations.

use num_bigint::BigInt;
use serde::Serialize;

use crate::complex::{ComplexError, QuotientComplex};
use crate::groups::FiniteSubgroup;
use crate::hyperbolic::{act, domain_vertex};
use crate::mat2::Mat2;
use crate::smith::{smith_normal_form, IntMatrix, SmithForm};

#[derive(Clone, Debug, Serialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    /// Exponent-sum vectors of the relators.
    pub relations: Vec<Vec<i64>>,
    pub relation_names: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Abelianization {
    /// Non-unit elementary divisors, "inf" for each free factor.
    pub invariants: Vec<String>,
    pub f2_corank: usize,
    pub free_rank: usize,
}

/// Exponent sums of a word like "a b a^-1 b^-1" or "a^4".
pub fn exponent_sums(word: &str, generators: &[&str]) -> Option<Vec<i64>> {
    let mut v = vec![0i64; generators.len()];
    for tok in word.split_whitespace() {
        let (base, e) = match tok.split_once('^') {
            Some((b, e)) => (b, e.parse::<i64>().ok()?),
            None => (tok, 1),
        };
        let i = generators.iter().position(|g| *g == base)?;
        v[i] += e;
    }
    Some(v)
}

pub fn abelianize(p: &Presentation) -> (Abelianization, SmithForm) {
    // generators are rows, relators are columns: H = Z^gens / image
    let n = p.generators.len();
    let m = IntMatrix::from_rows_shaped(&p.relations, n).transpose();
    let snf = smith_normal_form(&m);
    let invariants = snf
        .cokernel_invariants()
        .into_iter()
        .map(|d: Option<BigInt>| d.map_or_else(|| "inf".to_string(), |d| d.to_string()))
        .collect();
    (Abelianization { invariants, f2_corank: snf.f2_corank(), free_rank: snf.free_rank }, snf)
}

struct Letters {
    offsets: Vec<usize>,
    edge_letter: Vec<Option<usize>>,
    count: usize,
}

fn vertex_vector(stab: &FiniteSubgroup, offset: usize, m: &Mat2, width: usize) -> Vec<i64> {
    let mut v = vec![0i64; width];
    let w = stab.word(m).expect("element lies in the vertex group");
    for (i, e) in w.iter().enumerate() {
        v[offset + i] += *e as i64;
    }
    v
}

fn add(a: &mut [i64], b: &[i64], sign: i64) {
    for (x, y) in a.iter_mut().zip(b) {
        *x += sign * y;
    }
}

/// Presentation of the group acting on the complex, abelianized.
pub fn presentation(q: &QuotientComplex) -> Result<Presentation, ComplexError> {
    if !q.is_connected() {
        return Err(ComplexError::Disconnected);
    }
    // maximal tree among edges with trivial translate
    let mut comp: Vec<usize> = (0..q.vertices.len()).collect();
    fn find(c: &mut Vec<usize>, x: usize) -> usize {
        if c[x] != x {
            let r = find(c, c[x]);
            c[x] = r;
        }
        c[x]
    }
    let mut tree = vec![false; q.edges.len()];
    for (i, e) in q.edges.iter().enumerate() {
        if !e.translate.m.is_identity() || e.origin == e.target {
            continue;
        }
        let (a, b) = (find(&mut comp, e.origin), find(&mut comp, e.target));
        if a != b {
            comp[a] = b;
            tree[i] = true;
        }
    }
    let roots: std::collections::BTreeSet<usize> = (0..q.vertices.len()).map(|v| find(&mut comp, v)).collect();
    if roots.len() != 1 {
        return Err(ComplexError::Unreachable("spanning tree with trivial translates".to_string()));
    }

    let mut generators = Vec::new();
    let mut offsets = Vec::new();
    for v in &q.vertices {
        offsets.push(generators.len());
        for g in &v.stab.gen_names {
            generators.push(format!("{}@{}", g, v.name));
        }
    }
    let mut edge_letter = vec![None; q.edges.len()];
    for (i, e) in q.edges.iter().enumerate() {
        if !tree[i] {
            edge_letter[i] = Some(generators.len());
            generators.push(format!("t[{}]", e.name));
        }
    }
    let letters = Letters { count: generators.len(), offsets, edge_letter };
    let width = letters.count;
    let mut relations = Vec::new();
    let mut names = Vec::new();

    // vertex groups: cycles of the Cayley graph on the chosen generators
    for (vi, v) in q.vertices.iter().enumerate() {
        for x in v.stab.elements() {
            for (j, g) in v.stab.gens.iter().enumerate() {
                let y = x.mul(g);
                let mut r = vertex_vector(&v.stab, letters.offsets[vi], x, width);
                r[letters.offsets[vi] + j] += 1;
                add(&mut r, &vertex_vector(&v.stab, letters.offsets[vi], &y, width), -1);
                if r.iter().any(|c| *c != 0) {
                    relations.push(r);
                    names.push(format!("group relation at {}", v.name));
                }
            }
        }
    }
    // edge groups included in both endpoint groups
    for e in &q.edges {
        for sg in &e.stab.gens {
            let o = &q.vertices[e.origin];
            let t = &q.vertices[e.target];
            let mut r = vertex_vector(&o.stab, letters.offsets[e.origin], sg, width);
            add(&mut r, &vertex_vector(&t.stab, letters.offsets[e.target], &sg.conj_by(&e.translate.m), width), -1);
            relations.push(r);
            names.push(format!("edge {}", e.name));
        }
    }
    // faces: walk the boundary cycle through the orbit representatives
    for f in &q.faces {
        let mut r = vec![0i64; width];
        let (v0, gamma0) = q.vertex_position[&f.cycle[0]].clone();
        let (mut gamma, mut v) = (gamma0.m.clone(), v0);
        let n = f.cycle.len();
        for i in 0..n {
            let next = domain_vertex(&f.cycle[(i + 1) % n])?;
            let mut step = None;
            'search: for a in q.vertices[v].stab.elements() {
                for (ei, e) in q.edges.iter().enumerate() {
                    if e.origin == v {
                        let k = gamma.mul(a);
                        let g = k.mul(&e.translate.m);
                        if act(&g, &q.vertices[e.target].point) == next {
                            step = Some((a.clone(), ei, 1i64, g, e.target));
                            break 'search;
                        }
                    }
                    if e.target == v {
                        let g = gamma.mul(a).mul(&e.translate.m.inverse()?);
                        if act(&g, &q.vertices[e.origin].point) == next {
                            step = Some((a.clone(), ei, -1i64, g, e.origin));
                            break 'search;
                        }
                    }
                }
            }
            let (a, ei, sign, g, w) = step.ok_or_else(|| ComplexError::MissingEdge {
                face: f.name.clone(),
                a: f.cycle[i].clone(),
                b: f.cycle[(i + 1) % n].clone(),
            })?;
            add(&mut r, &vertex_vector(&q.vertices[v].stab, letters.offsets[v], &a, width), 1);
            if let Some(l) = letters.edge_letter[ei] {
                r[l] += sign;
            }
            gamma = g;
            v = w;
        }
        // back at the start vertex up to an element of its stabilizer
        let z = gamma0.m.inverse()?.mul(&gamma);
        if v != v0 || !q.vertices[v0].stab.contains(&z) {
            return Err(ComplexError::Unreachable(format!("boundary walk of {}", f.name)));
        }
        add(&mut r, &vertex_vector(&q.vertices[v0].stab, letters.offsets[v0], &z, width), -1);
        relations.push(r);
        names.push(format!("face {}", f.name));
    }
    Ok(Presentation { generators, relations, relation_names: names })
}
