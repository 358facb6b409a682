use bianchi_amalgam::cellmap::build_cellular_map;
use bianchi_amalgam::complex::{build_gamma0_complex, build_sl2_complex, cohomology_dims, quotient, QuotientComplex};
use bianchi_amalgam::config::builtin_rules;
use bianchi_amalgam::mat2::{serre_injection, Mat2};
use bianchi_amalgam::spectral::{assemble_e1, comparison, compute_e2, differentials, total_dims, Comparison, E2Page};
use proptest::prelude::*;

fn quotients() -> (QuotientComplex, QuotientComplex) {
    (quotient(&build_gamma0_complex()).unwrap(), quotient(&build_sl2_complex()).unwrap())
}

fn e2(x: &QuotientComplex, q_max: u32) -> E2Page {
    let d = differentials(x, q_max, &builtin_rules()).unwrap();
    compute_e2(&assemble_e1(x, q_max), &d)
}

fn row(page: &E2Page, q: u32, cols: usize) -> Vec<usize> {
    (0..cols).map(|p| page.dim(p, q)).collect()
}

fn compare(q_max: u32) -> Comparison {
    let (g, s) = quotients();
    let i = build_cellular_map("i", &g, &s, Box::new(|m: &Mat2| m.clone())).unwrap();
    let j = build_cellular_map("j", &g, &s, Box::new(|m: &Mat2| serre_injection(m).unwrap())).unwrap();
    comparison(&g, &s, &mut [i, j], &builtin_rules(), q_max).unwrap()
}

#[test]
fn e1_dims() {
    let (g, s) = quotients();
    let e1g = assemble_e1(&g, 9);
    let e1s = assemble_e1(&s, 9);
    assert_eq!(e1g.dim(1, 1), 6);
    assert_eq!(e1s.dim(0, 3), 2);
    for p in 0..3 {
        assert_eq!(e1g.dim(p, 0), g.counts()[p]);
    }
}

#[test]
fn d1_squares_to_zero() {
    let (g, s) = quotients();
    for x in [&g, &s] {
        let d = differentials(x, 9, &builtin_rules()).unwrap();
        for q in 0..=9 {
            assert!(d.d[q][1].mul(&d.d[q][0]).is_zero(), "q = {q}");
        }
    }
}

#[test]
fn e2_tables() {
    let (g, s) = quotients();
    let pg = e2(&g, 9);
    let ps = e2(&s, 9);
    assert_eq!(row(&pg, 0, 3), vec![1, 2, 1]);
    assert_eq!(row(&ps, 0, 3), vec![1, 1, 0]);
    let g_rows = [vec![2, 1, 1], vec![4, 3, 1], vec![2, 3, 1], vec![1, 2, 1]];
    let s_rows = [vec![1, 1, 0], vec![2, 2, 0], vec![2, 2, 0], vec![1, 1, 0]];
    for q in 1..=8u32 {
        assert_eq!(row(&pg, q, 3), g_rows[(q as usize - 1) % 4], "gamma0 row {q}");
        assert_eq!(row(&ps, q, 3), s_rows[(q as usize - 1) % 4], "sl2 row {q}");
    }
    for p in 0..3 {
        assert_eq!(pg.dim(p, 0), cohomology_dims(&g, p));
    }
}

#[test]
fn total_dims_examples() {
    let (g, s) = quotients();
    let pg = e2(&g, 9);
    let totals: Vec<usize> = (0..=9).map(|n| total_dims(&pg, n)).collect();
    assert_eq!(totals, vec![1, 4, 6, 6, 5, 5, 6, 6, 5, 5]);
    assert_eq!(total_dims(&e2(&s, 9), 1), 2);
}

#[test]
fn comparison_examples() {
    let c = compare(9);
    assert_eq!(c.entry(0, 4).unwrap().kernel_dim, 1);
    assert_eq!(c.entry(1, 1).unwrap().kernel_dim, 1);
    assert_eq!(c.entry(0, 2).unwrap().kernel_dim, 0);
    for q in 0..=9 {
        assert_eq!(c.entry(2, q).unwrap().cokernel_dim, 1);
    }
    for q in 1..=9 {
        for p in 0..2 {
            let e = c.entry(p, q).unwrap();
            assert_eq!(e.rank, e.target_dim, "surjective at ({p}, {q})");
        }
    }
    let k = &c.entry(0, 4).unwrap().kernel_names;
    assert!(k[0].contains("[i]") && k[0].contains("[j]"), "{k:?}");
    let faces: Vec<&Vec<Vec<u8>>> = c.face_images.iter().map(|(_, f)| f).collect();
    assert_eq!(faces, vec![&vec![vec![1u8], vec![1], vec![1]], &vec![vec![0u8], vec![0], vec![0]]]);
}

#[test]
fn missing_rule_is_reported() {
    let (g, _) = quotients();
    let mut rules = builtin_rules();
    rules.rules.remove("Q8>Z4");
    assert!(differentials(&g, 9, &rules).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]
    #[test]
    fn low_rows_independent_of_q_max(q_max in 5u32..13) {
        let (g, _) = quotients();
        let small = e2(&g, 5);
        let big = e2(&g, q_max);
        for q in 0..=5 {
            prop_assert_eq!(row(&small, q, 3), row(&big, q, 3));
        }
        for q in 1..=q_max.saturating_sub(4) {
            prop_assert_eq!(row(&big, q, 3), row(&big, q + 4, 3));
        }
    }
}
