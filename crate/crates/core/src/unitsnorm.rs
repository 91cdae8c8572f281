//! Unit groups with involution and the norm `u ↦ u·λ(u)`.
//!
//! The quotient of fixed units by norms is the Tate group `Ĥ⁰` of the unit
//! module and the units of norm one are `ker(1 + λ)`, so both come straight
//! out of the group layer once the unit group is presented with its action.

use std::collections::BTreeMap;

use crate::abgrp::{fixed_and_twisted, kernel, tate_cohomology, AbGroup, Element, Homology, Subgroup};
use crate::config::Limits;
use crate::error::Result;
use crate::ringsinv::{Elem, RingWithInvolution};
use crate::structure::{decompose, Decomposition};

/// The unit group of a ring as an abstract group with the action of `λ`.
#[derive(Clone, Debug)]
pub struct UnitGroupData {
    pub ring: RingWithInvolution,
    pub group: AbGroup,
    /// All units in ascending encoding order.
    pub units: Vec<Elem>,
    dec: Decomposition<Elem>,
}

impl UnitGroupData {
    /// Embedded images of the canonical generators.
    pub fn generators(&self) -> &[Elem] {
        &self.dec.generators
    }

    pub fn embed(&self, coords: &[i64]) -> Elem {
        self.dec.exp(coords)
    }

    /// Discrete logarithm of a unit; `None` for non-units.
    pub fn log(&self, u: &Elem) -> Option<Element> {
        self.dec.log(u)
    }

    pub fn order(&self) -> usize {
        self.units.len()
    }
}

pub fn unit_group(r: &RingWithInvolution, limits: &Limits) -> Result<UnitGroupData> {
    let units = r.units(limits.cap)?;
    let one = r.one();
    let dec = decompose(&units, &one, |a, b| r.mul(a, b))?.with_automorphism(|u| r.involution(u));
    Ok(UnitGroupData {
        ring: r.clone(),
        group: dec.group.clone(),
        units,
        dec,
    })
}

/// Fixed units modulo norms.
#[derive(Clone, Debug)]
pub struct NormFixedQuotient {
    pub units: UnitGroupData,
    pub homology: Homology,
    /// Least unit in the class of each canonical generator.
    pub representatives: Vec<Elem>,
}

impl NormFixedQuotient {
    pub fn group(&self) -> &AbGroup {
        self.homology.group()
    }

    /// Class of a fixed unit; `None` if `u` is not a fixed unit.
    pub fn class_of(&self, u: &Elem) -> Option<Element> {
        let coords = self.units.log(u)?;
        self.homology.class_of(&coords)
    }

    /// Least fixed unit of every class, keyed by class coordinates.
    pub fn class_representatives(&self) -> BTreeMap<Element, Elem> {
        let mut reps = BTreeMap::new();
        for u in &self.units.units {
            if let Some(c) = self.class_of(u) {
                reps.entry(c).or_insert_with(|| u.clone());
            }
        }
        reps
    }
}

pub fn norm_fixed_quotient(r: &RingWithInvolution, limits: &Limits) -> Result<NormFixedQuotient> {
    let units = unit_group(r, limits)?;
    let homology = tate_cohomology(&units.group).h0;
    let mut nfq = NormFixedQuotient {
        units,
        homology,
        representatives: Vec::new(),
    };
    let reps = nfq.class_representatives();
    nfq.representatives = (0..nfq.group().ngens())
        .map(|j| reps[&nfq.group().generator(j)].clone())
        .collect();
    Ok(nfq)
}

/// Units `u` with `u·λ(u) = 1`.
#[derive(Clone, Debug)]
pub struct HermitianUnits {
    pub subgroup: Subgroup,
    /// The embedded elements, ascending.
    pub elements: Vec<Elem>,
}

impl HermitianUnits {
    pub fn group(&self) -> &AbGroup {
        &self.subgroup.group
    }
}

pub fn hermitian_units(r: &RingWithInvolution, limits: &Limits) -> Result<HermitianUnits> {
    let units = unit_group(r, limits)?;
    let subgroup = kernel(&units.group.norm_hom());
    let elements = units
        .units
        .iter()
        .filter(|u| {
            let c = units.log(u).expect("unit");
            subgroup.contains(&c)
        })
        .cloned()
        .collect();
    Ok(HermitianUnits { subgroup, elements })
}

/// Fixed units as a subgroup of the unit group.
pub fn fixed_units(units: &UnitGroupData) -> Subgroup {
    fixed_and_twisted(&units.group).fixed
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringsinv::{validate, FactorSpec, Involution, RingSpec};

    fn ring(s: RingSpec) -> RingWithInvolution {
        validate(&s).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn gf9_frobenius_units() {
        let r = ring(RingSpec::gf(3, 2, 1));
        let u = unit_group(&r, &lim()).unwrap();
        assert_eq!(u.group.torsion(), &[8]);
        assert_eq!(u.group.action().to_rows(), vec![vec![3]]);
    }

    #[test]
    fn imquad_units() {
        let r = ring(RingSpec::imquad(-23, Involution::Conj));
        let u = unit_group(&r, &lim()).unwrap();
        assert_eq!(u.group, AbGroup::cyclic(2));
        let r = ring(RingSpec::imquad(-4, Involution::Conj));
        let u = unit_group(&r, &lim()).unwrap();
        assert_eq!(u.group.torsion(), &[4]);
        assert_eq!(u.group.action().to_rows(), vec![vec![3]]);
        let r = ring(RingSpec::imquad(-3, Involution::Conj));
        assert_eq!(unit_group(&r, &lim()).unwrap().group.action().to_rows(), vec![vec![5]]);
    }

    #[test]
    fn zmod8_units() {
        let r = ring(RingSpec::zmod(8));
        assert_eq!(unit_group(&r, &lim()).unwrap().group.torsion(), &[2, 2]);
    }

    #[test]
    fn norm_fixed_quotients() {
        let q = norm_fixed_quotient(&ring(RingSpec::imquad(-23, Involution::Conj)), &lim()).unwrap();
        assert_eq!(q.group(), &AbGroup::cyclic(2));
        assert_eq!(q.representatives.len(), 1);
        assert_eq!(q.representatives[0].to_string(), "-1");

        let q = norm_fixed_quotient(&ring(RingSpec::gf(3, 2, 1)), &lim()).unwrap();
        assert!(q.group().is_trivial());

        let pair = RingSpec::swapped_pair(FactorSpec::Gf { p: 5, k: 1 });
        assert!(norm_fixed_quotient(&ring(pair), &lim()).unwrap().group().is_trivial());
    }

    #[test]
    fn hermitian_unit_groups() {
        let h = hermitian_units(&ring(RingSpec::zmod(7)), &lim()).unwrap();
        assert_eq!(h.group(), &AbGroup::cyclic(2));
        assert_eq!(h.elements, vec![Elem::Finite(vec![1]), Elem::Finite(vec![6])]);

        let pair = RingSpec::swapped_pair(FactorSpec::Gf { p: 2, k: 2 });
        let h = hermitian_units(&ring(pair), &lim()).unwrap();
        assert_eq!(h.group().torsion(), &[3]);
        assert_eq!(h.group().action().to_rows(), vec![vec![2]]);

        let h = hermitian_units(&ring(RingSpec::zmod(2)), &lim()).unwrap();
        assert!(h.group().is_trivial());
    }
}
