//! Finite subgroups of SL_2 generated by explicit matrices.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::mat2::{GroupError, Mat2};

pub const CLOSURE_CAP: usize = 10_000;

/// Isomorphism types of the stabilizers that occur.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum StabKind {
    /// {I, -I}
    Center,
    Z4,
    Z6,
    Q8,
    Te24,
}

impl StabKind {
    pub fn order(self) -> usize {
        match self {
            StabKind::Center => 2,
            StabKind::Z4 => 4,
            StabKind::Z6 => 6,
            StabKind::Q8 => 8,
            StabKind::Te24 => 24,
        }
    }

    /// Contains an element of 2-power order outside the center.
    pub fn has_noncentral_two_torsion(self) -> bool {
        matches!(self, StabKind::Z4 | StabKind::Q8 | StabKind::Te24)
    }

    pub fn short(self) -> &'static str {
        match self {
            StabKind::Center => "Z2",
            StabKind::Z4 => "Z4",
            StabKind::Z6 => "Z6",
            StabKind::Q8 => "Q8",
            StabKind::Te24 => "Te24",
        }
    }

    pub fn from_short(s: &str) -> Option<StabKind> {
        Some(match s {
            "Z2" => StabKind::Center,
            "Z4" => StabKind::Z4,
            "Z6" => StabKind::Z6,
            "Q8" => StabKind::Q8,
            "Te24" => StabKind::Te24,
            _ => return None,
        })
    }
}

impl fmt::Display for StabKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// Breadth-first closure under right multiplication by the generators.
/// Each element is recorded with the exponent count of every generator along
/// the first word found.
pub fn closure_with_words(gens: &[Mat2], cap: usize) -> Result<Vec<(Mat2, Vec<u32>)>, GroupError> {
    let mut out = vec![(Mat2::identity(), vec![0; gens.len()])];
    let mut seen: HashMap<Mat2, usize> = HashMap::new();
    seen.insert(Mat2::identity(), 0);
    let mut frontier = vec![0usize];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &i in &frontier {
            for (j, g) in gens.iter().enumerate() {
                let y = out[i].0.mul(g);
                if seen.contains_key(&y) {
                    continue;
                }
                if out.len() >= cap {
                    return Err(GroupError::ClosureCap(cap));
                }
                let mut word = out[i].1.clone();
                word[j] += 1;
                seen.insert(y.clone(), out.len());
                next.push(out.len());
                out.push((y, word));
            }
        }
        frontier = next;
    }
    Ok(out)
}

pub fn closure(gens: &[Mat2], cap: usize) -> Result<Vec<Mat2>, GroupError> {
    Ok(closure_with_words(gens, cap)?.into_iter().map(|(m, _)| m).collect())
}

/// x^4 = 1, x^2 = y^2, y x y^-1 = x^-1.
pub fn quaternion_relations(x: &Mat2, y: &Mat2) -> bool {
    let (Ok(xi), Ok(yi)) = (x.inverse(), y.inverse()) else {
        return false;
    };
    let x2 = x.mul(x);
    x2.mul(&x2).is_identity() && x2 == y.mul(y) && y.mul(x).mul(&yi) == xi && !x2.is_identity()
}

/// s^3 = t^3 = (st)^2.
pub fn tetrahedral_relations(s: &Mat2, t: &Mat2) -> bool {
    let s3 = s.mul(s).mul(s);
    let t3 = t.mul(t).mul(t);
    let st = s.mul(t);
    s3 == t3 && s3 == st.mul(&st)
}

#[derive(Clone, Debug)]
pub struct FiniteSubgroup {
    pub kind: StabKind,
    pub gen_names: Vec<String>,
    pub gens: Vec<Mat2>,
    elements: Vec<Mat2>,
    words: Vec<Vec<u32>>,
    index: HashMap<Mat2, usize>,
}

impl FiniteSubgroup {
    /// Closes the generators and recognizes the isomorphism type.
    pub fn generate(gen_names: Vec<String>, gens: Vec<Mat2>) -> Result<Self, GroupError> {
        let gens = if gens.is_empty() { vec![Mat2::minus_identity()] } else { gens };
        let gen_names = if gen_names.is_empty() { vec!["-I".to_string()] } else { gen_names };
        let cw = closure_with_words(&gens, CLOSURE_CAP)?;
        let mut elements = Vec::with_capacity(cw.len());
        let mut words = Vec::with_capacity(cw.len());
        let mut index = HashMap::new();
        for (i, (m, w)) in cw.into_iter().enumerate() {
            index.insert(m.clone(), i);
            elements.push(m);
            words.push(w);
        }
        let kind = recognize(&gens, &elements)
            .ok_or_else(|| GroupError::Parse(format!("unrecognized subgroup <{}>", gen_names.join(","))))?;
        Ok(FiniteSubgroup { kind, gen_names, gens, elements, words, index })
    }

    pub fn center() -> Self {
        FiniteSubgroup::generate(vec![], vec![]).expect("center closes")
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Mat2] {
        &self.elements
    }

    pub fn contains(&self, m: &Mat2) -> bool {
        self.index.contains_key(m)
    }

    pub fn label(&self) -> String {
        format!("<{}>", self.gen_names.join(","))
    }

    /// Values of the degree-one mod-2 classes on an element: the parities of
    /// generator exponents (well defined for the kinds with nontrivial H^1).
    pub fn degree_one_values(&self, m: &Mat2) -> Option<Vec<u8>> {
        let i = *self.index.get(m)?;
        Some(match self.kind {
            StabKind::Te24 => vec![],
            _ => self.words[i].iter().map(|e| (e % 2) as u8).collect(),
        })
    }

    /// Integer exponent vector of the first word found for an element.
    pub fn word(&self, m: &Mat2) -> Option<&[u32]> {
        self.index.get(m).map(|&i| self.words[i].as_slice())
    }

    /// Subgroup of the elements satisfying a predicate (e.g. membership in Gamma_0).
    pub fn intersect<F: Fn(&Mat2) -> bool>(&self, keep: F) -> Result<FiniteSubgroup, GroupError> {
        let kept: Vec<&Mat2> = self.elements.iter().filter(|m| keep(m)).collect();
        if kept.len() == self.order() {
            return Ok(self.clone());
        }
        let n = kept.len();
        if n == 2 {
            return Ok(FiniteSubgroup::center());
        }
        if let Some(g) = kept.iter().find(|g| is_cyclic_generated_by(g, n)) {
            return FiniteSubgroup::generate(vec![self.name_of(g)], vec![(*g).clone()]);
        }
        for x in &kept {
            for y in &kept {
                if quaternion_relations(x, y) && closure(&[(*x).clone(), (*y).clone()], CLOSURE_CAP)?.len() == n {
                    return FiniteSubgroup::generate(
                        vec![self.name_of(x), self.name_of(y)],
                        vec![(*x).clone(), (*y).clone()],
                    );
                }
            }
        }
        Err(GroupError::Parse(format!("unrecognized intersection of {}", self.label())))
    }

    fn name_of(&self, m: &Mat2) -> String {
        if *m == Mat2::minus_identity() {
            return "-I".to_string();
        }
        match self.word(m) {
            Some(w) => self
                .gen_names
                .iter()
                .zip(w)
                .filter(|(_, e)| **e > 0)
                .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
                .collect::<Vec<_>>()
                .join(""),
            None => m.to_string(),
        }
    }

    /// Subgroups containing -I that are generated by one or two elements and have a
    /// recognized kind, one representative each; cyclic generators are preferred.
    pub fn subgroups(&self) -> Vec<FiniteSubgroup> {
        let mut seen: Vec<Vec<Mat2>> = Vec::new();
        let mut out = Vec::new();
        let mut consider = |names: Vec<String>, gens: Vec<Mat2>| {
            let Ok(h) = FiniteSubgroup::generate(names, gens) else { return };
            if !h.contains(&Mat2::minus_identity()) {
                return;
            }
            let mut key = h.elements.clone();
            key.sort();
            if !seen.contains(&key) {
                seen.push(key);
                out.push(h);
            }
        };
        for x in &self.elements {
            consider(vec![self.name_of(x)], vec![x.clone()]);
        }
        for x in &self.elements {
            for y in &self.elements {
                if quaternion_relations(x, y) {
                    consider(vec![self.name_of(x), self.name_of(y)], vec![x.clone(), y.clone()]);
                }
            }
        }
        out.sort_by_key(|h| h.order());
        out
    }

    /// k^-1 G k, with generator names decorated by the conjugator's name.
    pub fn conjugate(&self, k: &Mat2, k_name: &str) -> Result<FiniteSubgroup, GroupError> {
        if k.is_identity() {
            return Ok(self.clone());
        }
        let names = self
            .gen_names
            .iter()
            .map(|n| if n == "-I" { n.clone() } else { format!("{k_name}^-1 {n} {k_name}") })
            .collect();
        let gens = self.gens.iter().map(|g| g.conj_by(k)).collect();
        FiniteSubgroup::generate(names, gens)
    }
}

fn is_cyclic_generated_by(g: &Mat2, order: usize) -> bool {
    let mut p = g.clone();
    for k in 1..order {
        if p.is_identity() {
            return k == order;
        }
        p = p.mul(g);
    }
    p.is_identity()
}

fn recognize(gens: &[Mat2], elements: &[Mat2]) -> Option<StabKind> {
    let n = elements.len();
    let minus = Mat2::minus_identity();
    match n {
        2 => elements.contains(&minus).then_some(StabKind::Center),
        4 if gens.len() == 1 => is_cyclic_generated_by(&gens[0], 4).then_some(StabKind::Z4),
        6 if gens.len() == 1 => is_cyclic_generated_by(&gens[0], 6).then_some(StabKind::Z6),
        8 if gens.len() == 2 => quaternion_relations(&gens[0], &gens[1]).then_some(StabKind::Q8),
        24 => {
            // look for s, t with the binary tetrahedral relations generating everything
            for s in elements {
                for t in elements {
                    if !s.is_central()
                        && !t.is_central()
                        && tetrahedral_relations(s, t)
                        && closure(&[s.clone(), t.clone()], CLOSURE_CAP).ok()?.len() == 24
                    {
                        return Some(StabKind::Te24);
                    }
                }
            }
            None
        }
        4 => elements
            .iter()
            .any(|g| is_cyclic_generated_by(g, 4))
            .then_some(StabKind::Z4),
        _ => None,
    }
}
