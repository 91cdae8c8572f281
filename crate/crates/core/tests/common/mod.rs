#![allow(dead_code)]

use std::collections::HashSet;

use hermpic_core::abgrp::{direct_sum, gcd, AbGroup, Element};
use hermpic_core::matrix::Matrix;
use hermpic_core::structure::group_from_order_counts;
use proptest::prelude::*;

/// `Z/n` with `x ↦ u·x`, `u² = 1 mod n`.
pub fn twisted_cyclic() -> impl Strategy<Value = AbGroup> {
    (2i64..=16)
        .prop_flat_map(|n| {
            let us: Vec<i64> = (1..n).filter(|u| u * u % n == 1 && gcd(*u, n) == 1).collect();
            (Just(n), prop::sample::select(us))
        })
        .prop_map(|(n, u)| {
            AbGroup::cyclic(n)
                .with_action(Matrix::from_rows(&[vec![u]], 1))
                .unwrap()
        })
}

/// `(Z/n)²` with the swap.
pub fn swapped_pair() -> impl Strategy<Value = AbGroup> {
    (2i64..=6).prop_map(|n| {
        AbGroup::new(vec![n, n], 0)
            .unwrap()
            .with_action(Matrix::from_rows(&[vec![0, 1], vec![1, 0]], 2))
            .unwrap()
    })
}

/// A finite module with involution of order at most `bound`.
pub fn finite_module(bound: u64) -> impl Strategy<Value = AbGroup> {
    let block = prop_oneof![twisted_cyclic(), swapped_pair()];
    prop::collection::vec(block, 1..=3).prop_map(move |blocks| {
        let mut g = AbGroup::trivial();
        for b in blocks {
            let next = direct_sum(&g, &b).group;
            if next.order().unwrap() > bound {
                break;
            }
            g = next;
        }
        g
    })
}

/// Finite or infinite modules, including `Z` with `±1` and `Z²` with swap.
pub fn any_module() -> impl Strategy<Value = AbGroup> {
    let free = prop_oneof![
        Just(AbGroup::free(1)),
        Just(AbGroup::free(1).with_sign_action()),
        Just(
            AbGroup::free(2)
                .with_action(Matrix::from_rows(&[vec![0, 1], vec![1, 0]], 2))
                .unwrap()
        ),
    ];
    (finite_module(200), prop::option::of(free)).prop_map(|(g, f)| match f {
        Some(f) => direct_sum(&g, &f).group,
        None => g,
    })
}

/// Enumerates `sub ⊆ all` cosets and reads the structure of `sub / kill`
/// from orders of cosets, with no presentation arithmetic.
pub fn quotient_by_enumeration(g: &AbGroup, sub: &[Element], kill: &HashSet<Element>) -> AbGroup {
    let mut seen: HashSet<Element> = HashSet::new();
    let mut orders = Vec::new();
    for x in sub {
        if seen.contains(x) {
            continue;
        }
        for k in kill {
            seen.insert(g.add(x, k));
        }
        let mut m = 1u64;
        let mut y = x.clone();
        while !kill.contains(&y) {
            y = g.add(&y, x);
            m += 1;
        }
        orders.push(m);
    }
    group_from_order_counts(&orders)
}

/// `(Ĥ⁰, Ĥ¹)` computed from the element lists.
pub fn tate_by_enumeration(g: &AbGroup) -> (AbGroup, AbGroup) {
    let all = g.elements().unwrap();
    let fixed: Vec<Element> = all.iter().filter(|x| g.act(x) == **x).cloned().collect();
    let norms: HashSet<Element> = all.iter().map(|x| g.add(x, &g.act(x))).collect();
    let norm_kernel: Vec<Element> = all
        .iter()
        .filter(|x| g.is_zero(&g.add(x, &g.act(x))))
        .cloned()
        .collect();
    let cob: HashSet<Element> = all.iter().map(|x| g.add(x, &g.neg(&g.act(x)))).collect();
    (
        quotient_by_enumeration(g, &fixed, &norms),
        quotient_by_enumeration(g, &norm_kernel, &cob),
    )
}
