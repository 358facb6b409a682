use std::collections::BTreeMap;

use bianchi_amalgam::cohomology::{
    audit_rules, derived_restriction, injective_homs, restriction_map, rule_change_is_visible, table_for, RestrictionRules,
};
use bianchi_amalgam::config::builtin_rules;
use bianchi_amalgam::f2::{rank, F2Matrix};
use bianchi_amalgam::groups::{quaternion_relations, FiniteSubgroup, StabKind};
use bianchi_amalgam::mat2::generator;
use proptest::prelude::*;

fn group(names: &[&str]) -> FiniteSubgroup {
    FiniteSubgroup::generate(
        names.iter().map(|s| s.to_string()).collect(),
        names.iter().map(|n| generator(n).unwrap()).collect(),
    )
    .unwrap()
}

fn pairs(body: &str) -> Vec<(String, String)> {
    body.split_whitespace().map(|t| t.split_once('=').unwrap()).map(|(a, b)| (a.into(), b.into())).collect()
}

fn stabilizers() -> Vec<FiniteSubgroup> {
    vec![group(&["C", "B"]), group(&["B", "A"]), group(&["c", "A"]), group(&["A", "b"])]
}

#[test]
fn table_dims() {
    let q8 = table_for(StabKind::Q8);
    assert_eq!((0..5).map(|q| q8.dim(q)).collect::<Vec<_>>(), vec![1, 2, 2, 1, 1]);
    let z4 = table_for(StabKind::Z4);
    assert!((0..12).all(|q| z4.dim(q) == 1));
    let te = table_for(StabKind::Te24);
    assert_eq!((te.dim(1), te.dim(3), te.dim(4), te.dim(7)), (0, 1, 1, 1));
    for k in [StabKind::Center, StabKind::Z4, StabKind::Z6, StabKind::Q8, StabKind::Te24] {
        assert_eq!(table_for(k).dim(0), 1);
    }
}

#[test]
fn tetrahedral_to_cyclic_restriction() {
    let m = restriction_map(&table_for(StabKind::Te24), &table_for(StabKind::Z4), &pairs("b3=0 e4=e2^2")).unwrap();
    assert!(m.matrix(3).is_zero());
    assert_eq!(rank(&m.matrix(4)), 1);
    assert_eq!(rank(&m.matrix(8)), 1);
}

#[test]
fn cyclic_identity_restriction() {
    let z4 = table_for(StabKind::Z4);
    let m = restriction_map(&z4, &z4, &pairs("b1=b1 e2=e2")).unwrap();
    for q in 0..10 {
        assert_eq!(m.matrix(q), F2Matrix::identity(1));
    }
}

#[test]
fn unknown_class_is_a_config_error() {
    let z4 = table_for(StabKind::Z4);
    assert!(restriction_map(&z4, &z4, &pairs("q7=b1")).is_err());
    assert!(restriction_map(&z4, &z4, &pairs("e2=zz")).is_err());
}

#[test]
fn quaternion_stabilizers() {
    for g in &stabilizers()[..3] {
        assert_eq!(g.order(), 8);
        assert_eq!(g.kind, StabKind::Q8);
        assert!(quaternion_relations(&g.gens[0], &g.gens[1]));
    }
    let te = &stabilizers()[3];
    assert_eq!((te.order(), te.kind), (24, StabKind::Te24));
}

#[test]
fn subgroup_lattices() {
    let count = |g: &FiniteSubgroup, k: StabKind| g.subgroups().iter().filter(|s| s.kind == k).count();
    let q8 = group(&["C", "B"]);
    assert_eq!((count(&q8, StabKind::Center), count(&q8, StabKind::Z4), count(&q8, StabKind::Q8)), (1, 3, 1));
    let te = group(&["A", "b"]);
    // one Sylow 2-subgroup, four Sylow 3-subgroups each giving a Z6 with the center
    assert_eq!(
        (count(&te, StabKind::Center), count(&te, StabKind::Z4), count(&te, StabKind::Z6), count(&te, StabKind::Q8)),
        (1, 3, 4, 1)
    );
}

#[test]
fn injective_hom_counts() {
    let q8 = group(&["C", "B"]);
    let te = group(&["A", "b"]);
    let z4 = group(&["A"]);
    // |Aut(Q8)| = 24; six elements of order 4; one involution
    assert_eq!(injective_homs(&q8, &q8).len(), 24);
    assert_eq!(injective_homs(&z4, &q8).len(), 6);
    assert_eq!(injective_homs(&FiniteSubgroup::center(), &q8).len(), 1);
    assert_eq!(injective_homs(&q8, &te).len(), 24);
    assert!(injective_homs(&te, &q8).is_empty());
}

#[test]
fn quaternion_isomorphisms_have_full_rank() {
    let rules = builtin_rules();
    let q8 = group(&["c", "A"]);
    let tq = table_for(StabKind::Q8);
    for imgs in injective_homs(&q8, &q8) {
        let psi = |x: &bianchi_amalgam::mat2::Mat2| imgs[q8.gens.iter().position(|y| y == x).unwrap()].clone();
        let m = derived_restriction(&q8, &q8, psi, &rules).unwrap();
        for q in 0..9 {
            assert_eq!(rank(&m.matrix(q)), tq.dim(q), "degree {q}");
        }
    }
}

#[test]
fn builtin_rules_pass_the_audit() {
    let findings = audit_rules(&stabilizers(), &builtin_rules(), 9);
    assert!(findings.len() > 20);
    let bad: Vec<_> = findings.iter().filter(|f| !f.ok).collect();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn audit_catches_corrupted_rules() {
    let groups = stabilizers();
    for (key, body) in [("Te24>Z6", "b3=t^3 e4=t^4"), ("Q8>Z2", "x2=t^2 y2=sq(y1) x3=0 e4=t^4"), ("Z4>Z2", "e2=0")] {
        let mut rules = builtin_rules();
        rules.rules.insert(key.into(), pairs(body));
        assert!(audit_rules(&groups, &rules, 9).iter().any(|f| !f.ok), "{key}");
    }
}

#[test]
fn equivalent_rule_bodies_are_invisible() {
    let groups = stabilizers();
    let base = builtin_rules();
    // x1 vanishes on the center and b1^2 = 0, so these squares carry no information
    assert!(!rule_change_is_visible(&groups, &base, "Q8>Z2", &pairs("x2=0 y2=sq(y1) x3=0 e4=t^4"), 9));
    assert!(!rule_change_is_visible(&groups, &base, "Q8>Z4", &pairs("x2=0 y2=sq(y1) x3=0 e4=e2^2"), 9));
    // a fixed target class is wrong under outer automorphisms
    assert!(rule_change_is_visible(&groups, &base, "Q8>Q8", &pairs("x2=x2 y2=sq(y1) x3=x3 e4=e4"), 9));
    assert!(rule_change_is_visible(&groups, &base, "Te24>Z6", &pairs("b3=0 e4=0"), 9));
}

#[test]
fn rules_round_trip_through_entries() {
    let rules = builtin_rules();
    let again = RestrictionRules::from_entries(&rules.to_entries()).unwrap();
    assert_eq!(again.rules, rules.rules);
    let mut bad = BTreeMap::new();
    bad.insert("Q9>Z4".to_string(), "x=1".to_string());
    assert!(RestrictionRules::from_entries(&bad).is_err());
}

proptest! {
    #[test]
    fn restriction_commutes_with_periodicity(q in 0u32..8, key in prop::sample::select(vec!["Q8>Z4", "Te24>Q8", "Q8>Z2", "Z4>Z2"])) {
        let rules = builtin_rules();
        let (s, t) = key.split_once('>').unwrap();
        let (s, t) = (StabKind::from_short(s).unwrap(), StabKind::from_short(t).unwrap());
        let mut asg = rules.rules[key].clone();
        let degree_one: Vec<(String, String)> = table_for(s).degree_one_classes().into_iter().map(|c| (c, "0".into())).collect();
        asg.extend(degree_one);
        let m = restriction_map(&table_for(s), &table_for(t), &asg).unwrap();
        // both tables have period 4 in positive degrees
        if q > 0 {
            prop_assert_eq!(m.matrix(q), m.matrix(q + 4));
        }
    }
}
