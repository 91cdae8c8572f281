//! Structure of a finite abelian group given by its elements and law.
//!
//! Each Sylow subgroup gets a basis by greedy extraction: repeatedly take
//! an element of largest order modulo the span so far and correct it into
//! a complement. The resulting presentation is renormalized into invariant
//! factors and a full discrete-logarithm table is kept.

use std::collections::HashMap;
use std::hash::Hash;

use thiserror::Error;

use crate::abgrp::{normalize, AbGroup, Element, Normalized};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureError {
    #[error("the given elements are not closed under the law (expected {expected} elements, generated {generated})")]
    NotAGroup { expected: usize, generated: usize },
    #[error("the law has no elements")]
    Empty,
}

/// A finite abelian group identified with its normal form.
#[derive(Clone, Debug)]
pub struct Decomposition<T> {
    pub group: AbGroup,
    /// Embedded normal-form generators.
    pub generators: Vec<T>,
    raw_orders: Vec<i64>,
    raw_log: HashMap<T, Element>,
    raw_exp: HashMap<Element, T>,
    norm: Normalized,
}

impl<T: Clone + Eq + Hash + Ord> Decomposition<T> {
    /// Normal-form coordinates of `x`.
    pub fn log(&self, x: &T) -> Option<Element> {
        let raw = self.raw_log.get(x)?;
        Some(self.group.reduce(&self.norm.to_normal.mul_vec(raw)))
    }

    /// The element with the given normal-form coordinates.
    pub fn exp(&self, coords: &[i64]) -> T {
        let raw = self.norm.from_normal.mul_vec(coords);
        let raw: Element = raw
            .iter()
            .zip(&self.raw_orders)
            .map(|(x, d)| x.rem_euclid(*d))
            .collect();
        self.raw_exp[&raw].clone()
    }

    pub fn len(&self) -> usize {
        self.raw_log.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw_log.is_empty()
    }

    /// Installs the action induced by an involutive automorphism `f` of the
    /// underlying group.
    pub fn with_automorphism(mut self, f: impl Fn(&T) -> T) -> Self {
        let n = self.group.ngens();
        let cols: Vec<Element> = self
            .generators
            .iter()
            .map(|g| self.log(&f(g)).expect("automorphism stays in the group"))
            .collect();
        self.group = self
            .group
            .with_action(Matrix::from_cols(&cols, n))
            .expect("automorphism is an involution");
        self
    }
}

fn power<T: Clone>(x: &T, mut e: u64, identity: &T, op: &impl Fn(&T, &T) -> T) -> T {
    let mut base = x.clone();
    let mut acc = identity.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = op(&acc, &base);
        }
        base = op(&base, &base);
        e >>= 1;
    }
    acc
}

pub(crate) fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Greedy basis of a finite abelian p-group. Returns basis elements with
/// their orders and a log table of the whole p-group.
fn p_group_basis<T: Clone + Eq + Hash + Ord>(
    members: &[T],
    p: u64,
    identity: &T,
    op: &impl Fn(&T, &T) -> T,
) -> (Vec<(T, i64)>, HashMap<T, Element>) {
    let mut span: HashMap<T, Element> = HashMap::from([(identity.clone(), vec![])]);
    let mut basis: Vec<(T, i64)> = Vec::new();
    while span.len() < members.len() {
        // element of largest order modulo the current span
        let mut best: Option<(u32, &T)> = None;
        for x in members {
            let mut y = x.clone();
            let mut s = 0u32;
            while !span.contains_key(&y) {
                y = power(&y, p, identity, op);
                s += 1;
            }
            if best.is_none_or(|(b, _)| s > b) {
                best = Some((s, x));
            }
        }
        let (s, x) = best.expect("non-empty member list");
        let q = p.pow(s);
        let landing = &span[&power(x, q, identity, op)];
        let mut corrected = x.clone();
        for ((b, ord), &t) in basis.iter().zip(landing) {
            debug_assert_eq!(t % q as i64, 0);
            let e = (-(t / q as i64)).rem_euclid(*ord) as u64;
            corrected = op(&corrected, &power(b, e, identity, op));
        }
        let mut next = HashMap::with_capacity(span.len() * q as usize);
        for (h, c) in &span {
            let mut acc = h.clone();
            for j in 0..q as i64 {
                let mut coords = c.clone();
                coords.resize(basis.len(), 0);
                coords.push(j);
                next.insert(acc.clone(), coords);
                acc = op(&acc, &corrected);
            }
        }
        span = next;
        basis.push((corrected, q as i64));
    }
    for c in span.values_mut() {
        c.resize(basis.len(), 0);
    }
    (basis, span)
}

/// Decomposes the finite abelian group formed by `elements` under `op`.
pub fn decompose<T: Clone + Eq + Hash + Ord>(
    elements: &[T],
    identity: &T,
    op: impl Fn(&T, &T) -> T,
) -> Result<Decomposition<T>, StructureError> {
    if elements.is_empty() {
        return Err(StructureError::Empty);
    }
    let mut sorted = elements.to_vec();
    sorted.sort();
    sorted.dedup();
    let n = sorted.len() as u64;

    let mut raw_basis: Vec<(T, i64)> = Vec::new();
    let mut table: HashMap<T, Element> = HashMap::from([(identity.clone(), vec![])]);
    for (p, a) in factorize(n) {
        let m = n / p.pow(a);
        let mut members: Vec<T> = sorted.iter().map(|x| power(x, m, identity, &op)).collect();
        members.sort();
        members.dedup();
        let (basis, log) = p_group_basis(&members, p, identity, &op);
        let mut merged = HashMap::with_capacity(table.len() * log.len());
        for (x, cx) in &table {
            for (y, cy) in &log {
                let mut c = cx.clone();
                c.extend_from_slice(cy);
                merged.insert(op(x, y), c);
            }
        }
        table = merged;
        raw_basis.extend(basis);
    }
    if table.len() as u64 != n || !sorted.iter().all(|x| table.contains_key(x)) {
        return Err(StructureError::NotAGroup {
            expected: n as usize,
            generated: table.len(),
        });
    }

    let raw_orders: Vec<i64> = raw_basis.iter().map(|(_, d)| *d).collect();
    let norm = normalize(raw_orders.len(), &Matrix::diagonal(&raw_orders), None);
    let raw_exp: HashMap<Element, T> = table.iter().map(|(x, c)| (c.clone(), x.clone())).collect();
    let mut d = Decomposition {
        group: norm.group.clone(),
        generators: Vec::new(),
        raw_orders,
        raw_log: table,
        raw_exp,
        norm,
    };
    d.generators = (0..d.group.ngens())
        .map(|j| d.exp(&d.group.generator(j)))
        .collect();
    Ok(d)
}

/// The finite abelian group whose element orders are `orders`.
pub fn group_from_order_counts(orders: &[u64]) -> AbGroup {
    let n = orders.len() as u64;
    let mut prime_parts: Vec<Vec<i64>> = Vec::new();
    for (p, e) in factorize(n) {
        // s_j = log_p #{x : p^j x = 0} = Σ_i min(e_i, j)
        let s: Vec<u32> = (0..=e)
            .map(|j| {
                let pj = p.pow(j);
                let mut count = orders.iter().filter(|&&o| o > 0 && pj % o == 0).count() as u64;
                let mut s = 0;
                while count > 1 && count.is_multiple_of(p) {
                    count /= p;
                    s += 1;
                }
                s
            })
            .collect();
        // number of cyclic factors of exponent >= j
        let at_least: Vec<u32> = (1..=e as usize).map(|j| s[j] - s[j - 1]).collect();
        let mut exps = Vec::new();
        for j in 1..=at_least.len() {
            let next = at_least.get(j).copied().unwrap_or(0);
            for _ in 0..(at_least[j - 1] - next) {
                exps.push(p.pow(j as u32) as i64);
            }
        }
        prime_parts.push(exps);
    }
    AbGroup::from_orders(&prime_parts.concat())
}
