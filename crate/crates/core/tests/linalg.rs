use bianchi_amalgam::f2::{cokernel_dim, kernel_basis, rank, solve, F2Matrix};
use bianchi_amalgam::smith::{smith_normal_form, IntMatrix};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

// row reduction on u64 bitmasks, independent of the packed implementation
fn rank_oracle(rows: &[Vec<u8>]) -> usize {
    let mut masks: Vec<u64> =
        rows.iter().map(|r| r.iter().enumerate().fold(0u64, |acc, (j, &b)| acc | ((b as u64 & 1) << j))).collect();
    let mut r = 0;
    for bit in 0..64 {
        let Some(i) = (r..masks.len()).find(|&i| masks[i] >> bit & 1 == 1) else { continue };
        masks.swap(r, i);
        for k in 0..masks.len() {
            if k != r && masks[k] >> bit & 1 == 1 {
                masks[k] ^= masks[r];
            }
        }
        r += 1;
    }
    r
}

fn bits(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(0u8..2, cols), rows)
}

fn ints(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..10, cols), rows)
}

#[test]
fn f2_examples() {
    let id = F2Matrix::identity(3);
    assert_eq!(rank(&id), 3);
    assert!(kernel_basis(&id).is_empty());
    assert_eq!(cokernel_dim(&id), 0);
    let z = F2Matrix::zeros(2, 5);
    assert_eq!(rank(&z), 0);
    assert_eq!(kernel_basis(&z).len(), 5);
    assert_eq!(cokernel_dim(&z), 2);
}

#[test]
fn f2_wide_matrices_cross_word_boundaries() {
    let cols = 130;
    let mut m = F2Matrix::zeros(3, cols);
    m.set(0, 0, true);
    m.set(0, 129, true);
    m.set(1, 64, true);
    m.set(2, 0, true);
    m.set(2, 64, true);
    m.set(2, 129, true);
    assert_eq!(rank(&m), 2);
    assert_eq!(kernel_basis(&m).len(), cols - 2);
}

#[test]
fn smith_examples() {
    let d = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
    assert_eq!(d.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    let d = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 4], vec![6, 8]]));
    assert_eq!(d.divisors, vec![BigInt::from(2), BigInt::from(4)]);
    let d = smith_normal_form(&IntMatrix::zeros(3, 2));
    assert!(d.divisors.is_empty());
    assert_eq!(d.free_rank, 3);
}

proptest! {
    #[test]
    fn f2_rank_matches_oracle(rows in (1usize..9, 1usize..40).prop_flat_map(|(r, c)| bits(r, c))) {
        let cols = rows[0].len();
        let m = F2Matrix::from_rows(&rows, cols);
        prop_assert_eq!(rank(&m), rank_oracle(&rows));
        prop_assert_eq!(rank(&m.transpose()), rank(&m));
        prop_assert_eq!(cokernel_dim(&m), rows.len() - rank(&m));
    }

    #[test]
    fn f2_kernel_is_kernel(rows in (1usize..8, 1usize..30).prop_flat_map(|(r, c)| bits(r, c))) {
        let cols = rows[0].len();
        let m = F2Matrix::from_rows(&rows, cols);
        let k = kernel_basis(&m);
        prop_assert_eq!(k.len() + rank(&m), cols);
        for v in &k {
            prop_assert!(m.mul_vec(v).iter().all(|x| *x == 0));
        }
        prop_assert_eq!(rank_oracle(&k), k.len());
    }

    #[test]
    fn f2_solve_recovers_rhs(rows in (1usize..8, 1usize..20).prop_flat_map(|(r, c)| bits(r, c)), seed in prop::collection::vec(0u8..2, 20)) {
        let cols = rows[0].len();
        let m = F2Matrix::from_rows(&rows, cols);
        let rhs = m.mul_vec(&seed[..cols]);
        let x = solve(&m, &rhs).expect("consistent system");
        prop_assert_eq!(m.mul_vec(&x), rhs);
    }

    #[test]
    fn smith_reconstructs(rows in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| ints(r, c))) {
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        prop_assert_eq!(s.left.mul(&m).mul(&s.right), s.diagonal.clone());
        prop_assert!(s.left.det().abs() == BigInt::from(1) && s.right.det().abs() == BigInt::from(1));
        for w in s.divisors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        prop_assert!(s.divisors.iter().all(|d| d.is_positive()));
        prop_assert_eq!(s.rank + s.free_rank, m.rows());
    }

    #[test]
    fn smith_square_determinant(rows in (1usize..5).prop_flat_map(|n| ints(n, n))) {
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        let det = m.det().abs();
        if det.is_zero() {
            prop_assert!(s.rank < m.rows());
        } else {
            let prod = s.divisors.iter().fold(BigInt::from(1), |a, d| a * d);
            prop_assert_eq!(prod, det);
        }
    }

    #[test]
    fn smith_gcd_of_entries(rows in (1usize..4, 1usize..4).prop_flat_map(|(r, c)| ints(r, c))) {
        let m = IntMatrix::from_rows(&rows);
        let g = rows.iter().flatten().fold(0i64, |a, &x| a.gcd(&x));
        let s = smith_normal_form(&m);
        match s.divisors.first() {
            Some(d) => prop_assert_eq!(d.clone(), BigInt::from(g)),
            None => prop_assert_eq!(g, 0),
        }
    }
}
