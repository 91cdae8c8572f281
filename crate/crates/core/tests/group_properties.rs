mod common;

use std::collections::HashSet;

use hermpic_core::abgrp::{
    check_exact, cokernel, direct_sum, fixed_and_twisted, image, kernel, tate_cohomology, AbGroup,
    GroupHom,
};
use hermpic_core::matrix::{smith_normal_form, Matrix};
use proptest::prelude::*;

use common::{any_module, finite_module, tate_by_enumeration};

fn matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(-20i64..=20, c), r)
            .prop_map(move |rows| Matrix::from_rows(&rows, c))
    })
}

fn square_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(-20i64..=20, n), n)
            .prop_map(move |rows| Matrix::from_rows(&rows, n))
    })
}

fn wide(m: &Matrix) -> Vec<Vec<i128>> {
    m.to_rows().iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
}

fn mul_wide(a: &[Vec<i128>], b: &[Vec<i128>]) -> Vec<Vec<i128>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| (0..cols).map(|j| r.iter().zip(b).map(|(x, row)| x * row[j]).sum()).collect())
        .collect()
}

/// Fraction-free elimination.
fn det_wide(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let (mut sign, mut prev) = (1, 1i128);
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

proptest! {
    #[test]
    fn smith_form_is_a_unimodular_diagonalization(m in matrix()) {
        let s = smith_normal_form(&m);
        // transforms of dense inputs can exceed i64 once multiplied out
        let lmr = mul_wide(&mul_wide(&wide(&s.left), &wide(&m)), &wide(&s.right));
        prop_assert_eq!(lmr, wide(&s.diagonal_matrix()));
        prop_assert_eq!(mul_wide(&wide(&s.left_inv), &wide(&s.left)), wide(&Matrix::identity(m.rows())));
        prop_assert_eq!(det_wide(wide(&s.right)).abs(), 1);
        let d = &s.diagonal;
        prop_assert!(d.iter().all(|&x| x >= 0));
        for w in d.windows(2) {
            prop_assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0));
        }
    }

    #[test]
    fn cokernel_of_square_matrix_has_order_det(m in square_matrix()) {
        let n = m.rows();
        let h = GroupHom::new(AbGroup::free(n), AbGroup::free(n), m.clone()).unwrap();
        let q = cokernel(&h).group;
        let det = m.determinant();
        if det == 0 {
            prop_assert!(q.rank() > 0);
        } else {
            prop_assert_eq!(q.order(), Some(det.unsigned_abs()));
        }
    }

    #[test]
    fn tate_matches_enumeration(g in finite_module(400)) {
        let t = tate_cohomology(&g);
        let (h0, h1) = tate_by_enumeration(&g);
        prop_assert!(t.h0.group().isomorphic(&h0), "{} vs {}", t.h0.group(), h0);
        prop_assert!(t.h1.group().isomorphic(&h1), "{} vs {}", t.h1.group(), h1);
    }

    #[test]
    fn tate_groups_are_killed_by_two(g in any_module()) {
        let t = tate_cohomology(&g);
        for h in [t.h0.group(), t.h1.group()] {
            prop_assert_eq!(h.rank(), 0);
            prop_assert!(h.torsion().iter().all(|&d| d == 2));
        }
    }

    #[test]
    fn fixed_points_carry_the_expected_action(g in any_module()) {
        let fp = fixed_and_twisted(&g);
        prop_assert!(fp.fixed.group.has_trivial_action());
        let tw = &fp.twisted.group;
        for j in 0..tw.ngens() {
            let x = tw.generator(j);
            prop_assert_eq!(tw.act(&x), tw.neg(&x));
        }
        // taking fixed points twice changes nothing
        let again = fixed_and_twisted(&fp.fixed.group).fixed.group;
        prop_assert_eq!(again, fp.fixed.group.clone());
    }

    #[test]
    fn split_sequences_are_exact(a in any_module(), b in any_module()) {
        let s = direct_sum(&a, &b);
        let chain = vec![
            GroupHom::zero(&AbGroup::trivial(), &a),
            s.inj[0].clone(),
            s.proj[1].clone(),
            GroupHom::zero(&b, &AbGroup::trivial()),
        ];
        let report = check_exact(&chain).unwrap();
        prop_assert!(report.all_exact(), "{:?}", report);
        prop_assert!(s.inj[0].is_equivariant() && s.proj[1].is_equivariant());
    }

    #[test]
    fn kernel_and_image_sizes_multiply(g in finite_module(300)) {
        for h in [g.norm_hom(), g.coboundary_hom()] {
            let k = kernel(&h).group.order().unwrap();
            let i = image(&h).group.order().unwrap();
            prop_assert_eq!(k * i, g.order().unwrap());
            let c = cokernel(&h).group.order().unwrap();
            prop_assert_eq!(i * c, g.order().unwrap());
        }
    }

    #[test]
    fn json_round_trip(g in any_module()) {
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = AbGroup::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn enumerated_elements_are_distinct(g in finite_module(500)) {
        let all = g.elements().unwrap();
        let set: HashSet<_> = all.iter().cloned().collect();
        prop_assert_eq!(set.len() as u64, g.order().unwrap());
        prop_assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
