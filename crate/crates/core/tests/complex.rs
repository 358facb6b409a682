use bianchi_amalgam::abelian::{abelianize, exponent_sums, presentation, Presentation};
use bianchi_amalgam::complex::{
    build_gamma0_complex, build_sl2_complex, cohomology_dims, corank, is_nested, quotient, CellChain,
};
use bianchi_amalgam::f2::F2Matrix;
use bianchi_amalgam::groups::StabKind;
use bianchi_amalgam::hyperbolic::{act, domain_vertex, fixes_point};
use bianchi_amalgam::mat2::generator;
use bianchi_amalgam::smith::{smith_normal_form, IntMatrix};
use num_integer::Integer;

// F2 Betti numbers from the integer boundaries via Smith forms: rank mod 2 counts even-free divisors
fn f2_rank_via_smith(m: &IntMatrix) -> usize {
    smith_normal_form(m).divisors.iter().filter(|d| d.is_odd()).count()
}

#[test]
fn domain_counts() {
    let g = build_gamma0_complex();
    assert_eq!(g.vertices.len(), 8);
    assert_eq!(g.faces.len(), 3);
    let s = build_sl2_complex();
    assert_eq!(s.faces.len(), 1);
    assert!(is_nested(&s, &g));
}

#[test]
fn labeled_generators_fix_their_cells() {
    for x in [build_gamma0_complex(), build_sl2_complex()] {
        for e in &x.edges {
            for name in &e.label {
                let m = generator(name).unwrap();
                for v in [&e.ends.0, &e.ends.1] {
                    assert!(fixes_point(&m, &domain_vertex(v).unwrap()), "{name} at {v}");
                }
            }
        }
        for id in &x.identifications {
            let m: bianchi_amalgam::mat2::Mat2 = match generator(&id.matrix) {
                Ok(m) => m,
                Err(_) => id.matrix.parse().unwrap(),
            };
            assert_eq!(act(&m, &domain_vertex(&id.from.0).unwrap()), domain_vertex(&id.to.0).unwrap());
            assert_eq!(act(&m, &domain_vertex(&id.from.1).unwrap()), domain_vertex(&id.to.1).unwrap());
        }
    }
}

#[test]
fn quotient_betti_numbers() {
    let g = quotient(&build_gamma0_complex()).unwrap();
    let s = quotient(&build_sl2_complex()).unwrap();
    assert_eq!(g.chain().betti(), [1, 2, 1]);
    assert_eq!(s.chain().betti(), [1, 1, 0]);
    assert_eq!(g.chain().euler(), 0);
    assert_eq!(s.chain().euler(), 0);
    assert_eq!(cohomology_dims(&g, 1), 2);
    assert_eq!(cohomology_dims(&g, 3), 0);
    assert_eq!(cohomology_dims(&s, 1), 1);
    assert_eq!(cohomology_dims(&s, 2), 0);
    for x in [&g, &s] {
        let c = x.counts();
        let (r1, r2) = (f2_rank_via_smith(&x.boundary1_z()), f2_rank_via_smith(&x.boundary2_z()));
        assert_eq!(x.chain().betti(), [c[0] - r1, c[1] - r1 - r2, c[2] - r2]);
    }
}

#[test]
fn stabilizer_kinds() {
    let s = quotient(&build_sl2_complex()).unwrap();
    let mut kinds: Vec<StabKind> = s.vertices.iter().map(|v| v.stab.kind).collect();
    kinds.sort_by_key(|k| k.order());
    kinds.dedup();
    assert_eq!(kinds, vec![StabKind::Q8, StabKind::Te24]);
}

#[test]
fn torsion_subcomplexes_and_corank() {
    let g = quotient(&build_gamma0_complex()).unwrap();
    let s = quotient(&build_sl2_complex()).unwrap();
    let tg = g.torsion_subcomplex().betti();
    assert_eq!((tg[0], tg[1]), (1, 2));
    assert_eq!(s.torsion_subcomplex().betti()[1], 1);
    assert_eq!(corank(&g.chain(), &g.torsion_cells()), 0);
}

#[test]
fn corank_toys() {
    // one vertex, one loop, one disc glued along the loop
    let disc = CellChain {
        counts: [1, 1, 1],
        d1: F2Matrix::zeros(1, 1),
        d2: F2Matrix::identity(1),
    };
    assert_eq!(corank(&disc, &[vec![0], vec![0], vec![]]), 1);
    assert_eq!(corank(&disc, &[vec![], vec![], vec![]]), 0);
    // the circle inside a circle
    let circle = CellChain { counts: [1, 1, 0], d1: F2Matrix::zeros(1, 1), d2: F2Matrix::zeros(1, 0) };
    assert_eq!(corank(&circle, &[vec![0], vec![0], vec![]]), 0);
}

#[test]
fn abelianization_toys() {
    let gens = ["a", "b"];
    let torus = Presentation {
        generators: gens.iter().map(|s| s.to_string()).collect(),
        relations: vec![exponent_sums("a b a^-1 b^-1", &gens).unwrap()],
        relation_names: vec!["commutator".into()],
    };
    assert_eq!(abelianize(&torus).0.invariants, vec!["inf", "inf"]);
    let cyclic = Presentation {
        generators: vec!["a".into()],
        relations: vec![exponent_sums("a^4", &["a"]).unwrap()],
        relation_names: vec!["a^4".into()],
    };
    let (ab, _) = abelianize(&cyclic);
    assert_eq!(ab.invariants, vec!["4"]);
    assert_eq!(ab.f2_corank, 1);
    assert!(exponent_sums("a c", &gens).is_none());
}

#[test]
fn gamma0_abelianization() {
    let g = quotient(&build_gamma0_complex()).unwrap();
    let (ab, snf) = abelianize(&presentation(&g).unwrap());
    assert_eq!(ab.f2_corank, 4);
    // Smith form certificate
    let p = presentation(&g).unwrap();
    let m = IntMatrix::from_rows_shaped(&p.relations, p.generators.len()).transpose();
    assert_eq!(snf.left.mul(&m).mul(&snf.right), snf.diagonal);
}
