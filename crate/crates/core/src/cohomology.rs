//! Mod-2 cohomology of the finite stabilizers as free modules over a periodicity
//! class, and restriction maps given by class assignments.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::f2::F2Matrix;
use crate::groups::{FiniteSubgroup, StabKind};
use crate::mat2::Mat2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("unknown class {class:?} for {space}")]
    UnknownClass { class: String, space: String },
    #[error("assignment for {0} does not cover class {1:?}")]
    MissingClass(String, String),
    #[error("image {image:?} of {class:?} has the wrong degree")]
    DegreeMismatch { class: String, image: String },
    #[error("cannot parse image expression {0:?}")]
    BadExpression(String),
    #[error("no restriction rule for {0}")]
    MissingRule(String),
    #[error("element {0} is not in the restriction target group")]
    NotASubgroupMap(String),
    #[error("degree-one values {0:?} are inconsistent with a group without H^1")]
    InconsistentDegreeOne(Vec<u8>),
    #[error("malformed rule entry {0:?}")]
    BadRule(String),
}

/// Graded F2 space that is free over F2[period class] on named generators.
#[derive(Clone, Debug, Serialize)]
pub struct GradedF2Space {
    pub name: String,
    pub kind: StabKind,
    /// Module generators with their degrees; "1" is the unit.
    pub generators: Vec<(String, u32)>,
    pub period_class: String,
    pub period: u32,
}

/// A basis element: period_class^power * generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub generator: usize,
    pub power: u32,
}

pub fn table_for(kind: StabKind) -> GradedF2Space {
    let g = |v: &[(&str, u32)]| v.iter().map(|(n, d)| (n.to_string(), *d)).collect();
    let (generators, period_class, period) = match kind {
        StabKind::Center | StabKind::Z6 => (g(&[("1", 0)]), "t", 1),
        StabKind::Z4 => (g(&[("1", 0), ("b1", 1)]), "e2", 2),
        StabKind::Q8 => (
            g(&[("1", 0), ("x1", 1), ("y1", 1), ("x2", 2), ("y2", 2), ("x3", 3)]),
            "e4",
            4,
        ),
        StabKind::Te24 => (g(&[("1", 0), ("b3", 3)]), "e4", 4),
    };
    GradedF2Space { name: kind.short().to_string(), kind, generators, period_class: period_class.to_string(), period }
}

impl GradedF2Space {
    pub fn basis(&self, q: u32) -> Vec<Monomial> {
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, (_, d))| *d <= q && (q - d).is_multiple_of(self.period))
            .map(|(i, (_, d))| Monomial { generator: i, power: (q - d) / self.period })
            .collect()
    }

    pub fn dim(&self, q: u32) -> usize {
        self.basis(q).len()
    }

    pub fn monomial_degree(&self, m: Monomial) -> u32 {
        self.generators[m.generator].1 + m.power * self.period
    }

    pub fn monomial_name(&self, m: Monomial) -> String {
        let gen = &self.generators[m.generator].0;
        let pc = match m.power {
            0 => String::new(),
            1 => self.period_class.clone(),
            k => format!("{}^{}", self.period_class, k),
        };
        match (pc.is_empty(), gen == "1") {
            (true, _) => gen.clone(),
            (false, true) => pc,
            (false, false) => format!("{pc} {gen}"),
        }
    }

    pub fn basis_names(&self, q: u32) -> Vec<String> {
        self.basis(q).into_iter().map(|m| self.monomial_name(m)).collect()
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|(n, _)| n == name)
    }

    /// Names of the degree-one classes (the period class itself when it has degree one).
    pub fn degree_one_classes(&self) -> Vec<String> {
        if self.period == 1 {
            return vec![self.period_class.clone()];
        }
        self.generators.iter().filter(|(_, d)| *d == 1).map(|(n, _)| n.clone()).collect()
    }

    /// Degree-one classes as monomials, in the order of `degree_one_classes`.
    fn degree_one_monomials(&self) -> Vec<Monomial> {
        if self.period == 1 {
            return vec![Monomial { generator: 0, power: 1 }];
        }
        self.generators
            .iter()
            .enumerate()
            .filter(|(_, (_, d))| *d == 1)
            .map(|(i, _)| Monomial { generator: i, power: 0 })
            .collect()
    }

    /// Square of a degree-one monomial: x1 -> x2, y1 -> y2, b1 -> 0, t -> t^2.
    fn square_of_degree_one(&self, m: Monomial) -> Option<Monomial> {
        if self.period == 1 {
            return Some(Monomial { generator: 0, power: 2 });
        }
        match self.generators[m.generator].0.as_str() {
            "x1" => self.generator_index("x2").map(|g| Monomial { generator: g, power: 0 }),
            "y1" => self.generator_index("y2").map(|g| Monomial { generator: g, power: 0 }),
            _ => None,
        }
    }

    /// Parses "0", "x3", "e2^2", "e2*b1", "t^4", "x1+y1" into a sum of monomials.
    pub fn parse_sum(&self, expr: &str) -> Result<Vec<Monomial>, ConfigError> {
        let bad = || ConfigError::BadExpression(expr.to_string());
        let expr = expr.trim();
        if expr == "0" {
            return Ok(vec![]);
        }
        let mut acc: BTreeSet<Monomial> = BTreeSet::new();
        for term in expr.split('+') {
            let mut gen = self.generator_index("1").ok_or_else(bad)?;
            let mut power = 0;
            for factor in term.split('*').map(str::trim) {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<u32>().map_err(|_| bad())?),
                    None => (factor, 1),
                };
                if base == self.period_class {
                    power += exp;
                } else if let Some(i) = self.generator_index(base) {
                    if exp != 1 || self.generators[gen].0 != "1" {
                        return Err(bad());
                    }
                    gen = i;
                } else {
                    return Err(ConfigError::UnknownClass { class: base.to_string(), space: self.name.clone() });
                }
            }
            let m = Monomial { generator: gen, power };
            if !acc.remove(&m) {
                acc.insert(m);
            }
        }
        Ok(acc.into_iter().collect())
    }

    pub fn format_sum(&self, s: &[Monomial]) -> String {
        if s.is_empty() {
            return "0".to_string();
        }
        s.iter().map(|m| self.monomial_name(*m).replace(' ', "*")).collect::<Vec<_>>().join("+")
    }
}

/// H^*(source) -> H^*(target), extended linearly over the period classes.
#[derive(Clone, Debug)]
pub struct GradedF2Map {
    pub source: GradedF2Space,
    pub target: GradedF2Space,
    /// Image of each source module generator (index aligned with source.generators).
    generator_images: Vec<Vec<Monomial>>,
    /// Image of the source period class as a power of the target period class, or zero.
    period_image: Option<u32>,
    /// When the source period class has degree one, its image as a sum.
    period_sum: Option<Vec<Monomial>>,
}

/// Builds a restriction map from "class = expression" pairs. Expressions are
/// sums of target monomials, or sq(c) for the square of the image of a degree-one class c.
pub fn restriction_map(
    source: &GradedF2Space,
    target: &GradedF2Space,
    assignment: &[(String, String)],
) -> Result<GradedF2Map, ConfigError> {
    let mut table: BTreeMap<&str, &str> = BTreeMap::new();
    for (k, v) in assignment {
        let known = source.generator_index(k).is_some() || *k == source.period_class;
        if !known || k == "1" {
            return Err(ConfigError::UnknownClass { class: k.clone(), space: source.name.clone() });
        }
        table.insert(k.as_str(), v.as_str());
    }
    let mut images: Vec<Vec<Monomial>> = vec![Vec::new(); source.generators.len()];
    let mut resolved: BTreeMap<String, Vec<Monomial>> = BTreeMap::new();
    // degree-one classes first, so sq() can refer to them
    let mut order: Vec<usize> = (0..source.generators.len()).collect();
    order.sort_by_key(|&i| source.generators[i].1);
    let unit = target.generator_index("1").expect("unit");
    let mut period_sum = None;
    if source.period == 1 {
        let expr = table
            .get(source.period_class.as_str())
            .ok_or_else(|| ConfigError::MissingClass(source.name.clone(), source.period_class.clone()))?;
        let s = eval(target, expr, &resolved)?;
        check_degree(target, &s, 1, &source.period_class, expr)?;
        resolved.insert(source.period_class.clone(), s.clone());
        period_sum = Some(s);
    }
    for i in order {
        let (name, deg) = &source.generators[i];
        if name == "1" {
            images[i] = vec![Monomial { generator: unit, power: 0 }];
            continue;
        }
        let expr = table.get(name.as_str()).ok_or_else(|| ConfigError::MissingClass(source.name.clone(), name.clone()))?;
        let s = eval(target, expr, &resolved)?;
        check_degree(target, &s, *deg, name, expr)?;
        resolved.insert(name.clone(), s.clone());
        images[i] = s;
    }
    let period_image = if source.period == 1 {
        None
    } else {
        let expr = table
            .get(source.period_class.as_str())
            .ok_or_else(|| ConfigError::MissingClass(source.name.clone(), source.period_class.clone()))?;
        let s = eval(target, expr, &resolved)?;
        check_degree(target, &s, source.period, &source.period_class, expr)?;
        match s.as_slice() {
            [] => None,
            [m] if m.generator == unit => Some(m.power),
            _ => {
                return Err(ConfigError::BadExpression(format!(
                    "{} must map to a power of {}",
                    source.period_class, target.period_class
                )))
            }
        }
    };
    Ok(GradedF2Map { source: source.clone(), target: target.clone(), generator_images: images, period_image, period_sum })
}

fn check_degree(target: &GradedF2Space, s: &[Monomial], deg: u32, class: &str, expr: &str) -> Result<(), ConfigError> {
    if s.iter().all(|m| target.monomial_degree(*m) == deg) {
        Ok(())
    } else {
        Err(ConfigError::DegreeMismatch { class: class.to_string(), image: expr.to_string() })
    }
}

fn eval(target: &GradedF2Space, expr: &str, resolved: &BTreeMap<String, Vec<Monomial>>) -> Result<Vec<Monomial>, ConfigError> {
    let e = expr.trim();
    if let Some(inner) = e.strip_prefix("sq(").and_then(|r| r.strip_suffix(')')) {
        let base = resolved.get(inner.trim()).ok_or_else(|| ConfigError::BadExpression(expr.to_string()))?;
        // Frobenius: squaring is additive in characteristic 2
        let mut acc = BTreeSet::new();
        for m in base {
            if let Some(sq) = target.square_of_degree_one(*m) {
                if !acc.remove(&sq) {
                    acc.insert(sq);
                }
            }
        }
        return Ok(acc.into_iter().collect());
    }
    target.parse_sum(e)
}

impl GradedF2Map {
    /// dim target(q) x dim source(q) matrix in degree q.
    pub fn matrix(&self, q: u32) -> F2Matrix {
        let sb = self.source.basis(q);
        let tb = self.target.basis(q);
        let mut m = F2Matrix::zeros(tb.len(), sb.len());
        for (j, s) in sb.iter().enumerate() {
            for t in self.image_of(*s) {
                let i = tb.iter().position(|x| *x == t).expect("image monomial lies in the target degree");
                m.flip(i, j);
            }
        }
        m
    }

    fn image_of(&self, s: Monomial) -> Vec<Monomial> {
        if let Some(ps) = &self.period_sum {
            // source is t^k; only t -> t (or 0) occurs
            return match ps.as_slice() {
                [] if s.power > 0 => vec![],
                [] => self.generator_images[s.generator].clone(),
                [m] => {
                    let mut out = Vec::new();
                    for g in &self.generator_images[s.generator] {
                        out.push(Monomial { generator: g.generator, power: g.power + m.power * s.power });
                    }
                    out
                }
                _ => panic!("sum-valued image of a degree-one period class is not supported"),
            };
        }
        match (self.period_image, s.power) {
            (_, 0) => self.generator_images[s.generator].clone(),
            (None, _) => vec![],
            (Some(r), k) => self.generator_images[s.generator]
                .iter()
                .map(|g| Monomial { generator: g.generator, power: g.power + r * k })
                .collect(),
        }
    }

    /// Assignment rendered back to text, for the report.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        if let Some(ps) = &self.period_sum {
            parts.push(format!("{}->{}", self.source.period_class, self.target.format_sum(ps)));
        }
        for (i, (n, _)) in self.source.generators.iter().enumerate() {
            if n != "1" {
                parts.push(format!("{}->{}", n, self.target.format_sum(&self.generator_images[i])));
            }
        }
        if self.source.period > 1 {
            let img = match self.period_image {
                None => "0".to_string(),
                Some(0) => "1".to_string(),
                Some(1) => self.target.period_class.clone(),
                Some(r) => format!("{}^{}", self.target.period_class, r),
            };
            parts.push(format!("{}->{}", self.source.period_class, img));
        }
        parts.join(", ")
    }
}

/// Higher-degree restriction data keyed by "Source>Target" kind pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RestrictionRules {
    pub rules: BTreeMap<String, Vec<(String, String)>>,
}

impl RestrictionRules {
    /// Parses entries like "x2=sq(x1) y2=sq(y1) x3=0 e4=e2^2".
    pub fn from_entries(entries: &BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let mut rules = BTreeMap::new();
        for (key, body) in entries {
            let (s, t) = key.split_once('>').ok_or_else(|| ConfigError::BadRule(key.clone()))?;
            if StabKind::from_short(s.trim()).is_none() || StabKind::from_short(t.trim()).is_none() {
                return Err(ConfigError::BadRule(key.clone()));
            }
            let mut pairs = Vec::new();
            for tok in body.split_whitespace() {
                let (c, e) = tok.split_once('=').ok_or_else(|| ConfigError::BadRule(tok.to_string()))?;
                pairs.push((c.to_string(), e.to_string()));
            }
            rules.insert(format!("{}>{}", s.trim(), t.trim()), pairs);
        }
        Ok(RestrictionRules { rules })
    }

    pub fn to_entries(&self) -> BTreeMap<String, String> {
        self.rules
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().map(|(c, e)| format!("{c}={e}")).collect::<Vec<_>>().join(" ")))
            .collect()
    }

    pub fn get(&self, source: StabKind, target: StabKind) -> Result<&[(String, String)], ConfigError> {
        let key = rule_key(source, target);
        self.rules.get(&key).map(|v| v.as_slice()).ok_or(ConfigError::MissingRule(key))
    }
}

pub fn rule_key(source: StabKind, target: StabKind) -> String {
    format!("{}>{}", source.short(), target.short())
}

impl fmt::Display for RestrictionRules {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.to_entries() {
            writeln!(f, "{k}: {v}")?;
        }
        Ok(())
    }
}

/// Restriction H^*(G) -> H^*(S) along psi: S -> G. Degree-one images come from the
/// values of the degree-one classes of G on psi(generators of S); the remaining
/// classes come from the rule table.
pub fn derived_restriction<F: Fn(&Mat2) -> Mat2>(
    g: &FiniteSubgroup,
    s: &FiniteSubgroup,
    psi: F,
    rules: &RestrictionRules,
) -> Result<GradedF2Map, ConfigError> {
    let gt = table_for(g.kind);
    let st = table_for(s.kind);
    // values[j][c] = value of the c-th degree-one class of G on psi(s_j)
    let mut values: Vec<Vec<u8>> = Vec::new();
    for sg in &s.gens {
        let img = psi(sg);
        let v = g.degree_one_values(&img).ok_or_else(|| ConfigError::NotASubgroupMap(img.to_string()))?;
        values.push(v);
    }
    let g_classes = gt.degree_one_classes();
    let s_monos = st.degree_one_monomials();
    let mut assignment: Vec<(String, String)> = Vec::new();
    for (c, cname) in g_classes.iter().enumerate() {
        // the degree-one classes of S are dual to its generators (none for Te24)
        let mut v: Vec<Monomial> = Vec::new();
        for (j, vals) in values.iter().enumerate() {
            if vals.get(c).copied().unwrap_or(0) == 1 {
                match s_monos.get(j) {
                    Some(m) if s_monos.len() == values.len() => v.push(*m),
                    _ => return Err(ConfigError::InconsistentDegreeOne(vals.clone())),
                }
            }
        }
        assignment.push((cname.clone(), st.format_sum(&v)));
    }
    for (c, e) in rules.get(g.kind, s.kind)? {
        if !g_classes.contains(c) {
            assignment.push((c.clone(), e.clone()));
        }
    }
    restriction_map(&gt, &st, &assignment)
}

#[derive(Clone, Debug, Serialize)]
pub struct RuleFinding {
    pub property: String,
    pub rules: Vec<String>,
    pub group: String,
    pub ok: bool,
    pub detail: String,
}

fn matrices(m: &GradedF2Map, q_max: u32) -> Vec<F2Matrix> {
    (0..=q_max).map(|q| m.matrix(q)).collect()
}

fn inclusion(g: &FiniteSubgroup, k: &FiniteSubgroup, rules: &RestrictionRules, q_max: u32) -> Option<Result<Vec<F2Matrix>, ConfigError>> {
    rules
        .rules
        .contains_key(&rule_key(g.kind, k.kind))
        .then(|| derived_restriction(g, k, |x| x.clone(), rules).map(|m| matrices(&m, q_max)))
}

fn proper_subgroups(g: &FiniteSubgroup) -> Vec<FiniteSubgroup> {
    g.subgroups().into_iter().filter(|s| s.order() < g.order()).collect()
}

fn contains(big: &FiniteSubgroup, small: &FiniteSubgroup) -> bool {
    small.elements().iter().all(|x| big.elements().contains(x))
}

/// Checks rule data against three facts about restriction in mod-2 cohomology:
/// conjugation by an element of G acts trivially on H^*(G); restriction to a subgroup
/// of odd index is injective; all chains K <= S <= G induce the same map H^*(G) -> H^*(K).
pub fn audit_rules(groups: &[FiniteSubgroup], rules: &RestrictionRules, q_max: u32) -> Vec<RuleFinding> {
    let mut out = Vec::new();
    let mut push = |property: &str, keys: Vec<String>, g: &FiniteSubgroup, ok: bool, detail: String| {
        out.push(RuleFinding { property: property.to_string(), rules: keys, group: g.label(), ok, detail });
    };
    for g in groups {
        let key = rule_key(g.kind, g.kind);
        if rules.rules.contains_key(&key) {
            let bad: Vec<String> = g
                .elements()
                .iter()
                .filter_map(|k| match derived_restriction(g, g, |s| s.conj_by(k), rules) {
                    Ok(m) => {
                        let id = (0..=q_max).all(|q| m.matrix(q) == F2Matrix::identity(table_for(g.kind).dim(q)));
                        (!id).then(|| format!("conjugation by {k}: {}", m.describe()))
                    }
                    Err(e) => Some(format!("conjugation by {k}: {e}")),
                })
                .collect();
            push("inner automorphisms act trivially", vec![key], g, bad.is_empty(), bad.into_iter().next().unwrap_or_default());
        }
        let subs = proper_subgroups(g);
        for s in &subs {
            let gs = rule_key(g.kind, s.kind);
            match inclusion(g, s, rules, q_max) {
                Some(Ok(m)) if (g.order() / s.order()) % 2 == 1 => {
                    let dim = |q: u32| table_for(g.kind).dim(q);
                    let inj = m.iter().zip(0..).all(|(x, q)| crate::f2::rank(x) == dim(q));
                    push("odd index restriction is injective", vec![gs], g, inj, format!("to {}", s.label()));
                }
                Some(Err(e)) => push("restriction defined", vec![gs], g, false, format!("to {}: {e}", s.label())),
                _ => {}
            }
        }
        for k in &subs {
            // every way of restricting H^*(g) to k, directly or through one intermediate subgroup
            let mut routes: Vec<(Vec<String>, Vec<F2Matrix>)> = Vec::new();
            if let Some(Ok(m)) = inclusion(g, k, rules, q_max) {
                routes.push((vec![rule_key(g.kind, k.kind)], m));
            }
            for s in subs.iter().filter(|s| s.order() > k.order() && contains(s, k)) {
                if let (Some(Ok(a)), Some(Ok(b))) = (inclusion(g, s, rules, q_max), inclusion(s, k, rules, q_max)) {
                    let composite = b.iter().zip(&a).map(|(x, y)| x.mul(y)).collect();
                    routes.push((vec![rule_key(g.kind, s.kind), rule_key(s.kind, k.kind)], composite));
                }
            }
            for r in routes.iter().skip(1) {
                let ok = r.1 == routes[0].1;
                let mut keys = routes[0].0.clone();
                keys.extend(r.0.iter().cloned());
                keys.dedup();
                let detail = format!("to {}: {} vs {}", k.label(), routes[0].0.join(" then "), r.0.join(" then "));
                push("restriction is transitive", keys, g, ok, detail);
            }
        }
    }
    out
}

/// Generator images of every injective homomorphism K -> G.
pub fn injective_homs(k: &FiniteSubgroup, g: &FiniteSubgroup) -> Vec<Vec<Mat2>> {
    let n = k.gens.len();
    let total = g.order().pow(n as u32);
    let mut out = Vec::new();
    'tuples: for code in 0..total {
        let imgs: Vec<Mat2> = (0..n).map(|j| g.elements()[code / g.order().pow(j as u32) % g.order()].clone()).collect();
        let mut f: HashMap<Mat2, Mat2> = HashMap::new();
        f.insert(Mat2::identity(), Mat2::identity());
        let mut frontier = vec![Mat2::identity()];
        while let Some(x) = frontier.pop() {
            let fx = f[&x].clone();
            for (gen, img) in k.gens.iter().zip(&imgs) {
                let (y, fy) = (x.mul(gen), fx.mul(img));
                match f.get(&y) {
                    Some(prev) if *prev != fy => continue 'tuples,
                    Some(_) => {}
                    None => {
                        f.insert(y.clone(), fy);
                        frontier.push(y);
                    }
                }
            }
        }
        let distinct: HashSet<&Mat2> = f.values().collect();
        if distinct.len() == k.order() {
            out.push(imgs);
        }
    }
    out
}

fn group_pool(groups: &[FiniteSubgroup]) -> Vec<FiniteSubgroup> {
    let mut pool: Vec<FiniteSubgroup> = Vec::new();
    for g in groups {
        for h in std::iter::once(g.clone()).chain(g.subgroups()) {
            if !pool.iter().any(|x| x.elements() == h.elements()) {
                pool.push(h);
            }
        }
    }
    pool
}

/// Whether replacing the body of one rule changes the map induced by some injective
/// homomorphism between groups of the key's kinds, taken from `groups` and their subgroups.
pub fn rule_change_is_visible(groups: &[FiniteSubgroup], base: &RestrictionRules, key: &str, body: &[(String, String)], q_max: u32) -> bool {
    let mut changed = base.clone();
    changed.rules.insert(key.to_string(), body.to_vec());
    let pool = group_pool(groups);
    let Some((src, tgt)) = key.split_once('>') else { return true };
    let (Some(g), Some(k)) = (
        pool.iter().find(|h| h.kind.short() == src),
        pool.iter().find(|h| h.kind.short() == tgt),
    ) else {
        return true;
    };
    injective_homs(k, g).iter().any(|imgs| {
        let psi = |x: &Mat2| k.gens.iter().position(|y| y == x).map(|j| imgs[j].clone()).unwrap_or_else(|| x.clone());
        let a = derived_restriction(g, k, psi, base).map(|m| matrices(&m, q_max));
        let b = derived_restriction(g, k, psi, &changed).map(|m| matrices(&m, q_max));
        match (a, b) {
            (Ok(x), Ok(y)) => x != y,
            (Err(_), Err(_)) => false,
            _ => true,
        }
    })
}
