//! Poincaré Picard groups of discrete rings: the hermitian part plus
//! equivariant sign functions on the components of the spectrum.

use serde::{Deserialize, Serialize};

use crate::abgrp::{direct_sum, gcd, AbGroup, DirectSum, Element};
use crate::config::Limits;
use crate::error::Result;
use crate::hermforms::{pich, HermitianLine, PicH};
use crate::ringsinv::{spec_components, RingWithInvolution, SpecWithAction};
use crate::unitsnorm::norm_fixed_quotient;
use crate::classgrp::{class_group, twisted_fixed_classes};

/// Functions `f` on components with `f(λc) = -f(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivariantSignFunctions {
    pub spec: SpecWithAction,
    /// Free of rank the number of free orbits, trivial action.
    pub group: AbGroup,
    /// Basis functions: `+1` on the smaller component of an orbit, `-1` on
    /// its partner.
    pub basis: Vec<Vec<i64>>,
}

impl EquivariantSignFunctions {
    /// The function with the given coordinates.
    pub fn function(&self, coords: &[i64]) -> Vec<i64> {
        let mut f = vec![0; self.spec.len()];
        for (b, &c) in self.basis.iter().zip(coords) {
            for (x, y) in f.iter_mut().zip(b) {
                *x += c * y;
            }
        }
        f
    }

    /// Coordinates of `f`, `None` if `f` is not equivariant.
    pub fn coords_of(&self, f: &[i64]) -> Option<Element> {
        if f.len() != self.spec.len() {
            return None;
        }
        let a = &self.spec.action;
        if (0..f.len()).any(|c| f[a[c]] != -f[c]) {
            return None;
        }
        Some(self.spec.free_orbits().iter().map(|&(c, _)| f[c]).collect())
    }
}

pub fn equivariant_sign_functions(x: &SpecWithAction) -> EquivariantSignFunctions {
    let orbits = x.free_orbits();
    let basis = orbits
        .iter()
        .map(|&(c, d)| {
            let mut f = vec![0; x.len()];
            f[c] = 1;
            f[d] = -1;
            f
        })
        .collect();
    EquivariantSignFunctions {
        spec: x.clone(),
        group: AbGroup::free(orbits.len()),
        basis,
    }
}

/// `Pic^p = Pic^h ⊕ C_{C₂}(Spec R, Z⁻)`.
#[derive(Clone, Debug)]
pub struct PicP {
    pub hermitian: PicH,
    pub shift: EquivariantSignFunctions,
    pub group: AbGroup,
    pub sum: DirectSum,
}

/// An element of `Pic^p` as a hermitian line and a component degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PicPElement {
    pub line: HermitianLine,
    pub degrees: Vec<i64>,
}

impl PicP {
    pub fn shift_rank(&self) -> usize {
        self.shift.group.rank()
    }

    pub fn element(&self, coords: &[i64]) -> PicPElement {
        let h = self.sum.proj[0].apply(coords);
        let s = self.sum.proj[1].apply(coords);
        PicPElement {
            line: self.hermitian.line(&h),
            degrees: self.shift.function(&s),
        }
    }

    /// Coordinates of a (line, degree function) pair.
    pub fn classify(&self, line: &HermitianLine, degrees: &[i64]) -> Result<Option<Element>> {
        let h = self.hermitian.classify(line)?;
        let Some(s) = self.shift.coords_of(degrees) else {
            return Ok(None);
        };
        let g = &self.group;
        Ok(Some(g.add(&self.sum.inj[0].apply(&h), &self.sum.inj[1].apply(&s))))
    }
}

pub fn pic_p(r: &RingWithInvolution, limits: &Limits) -> Result<PicP> {
    let hermitian = pich(r, limits)?;
    let shift = equivariant_sign_functions(&spec_components(r));
    let sum = direct_sum(&hermitian.group, &shift.group);
    Ok(PicP {
        group: sum.group.clone(),
        hermitian,
        shift,
        sum,
    })
}

/// A claimed splitting of `0 → K → X → Q → 0`: the order of a chosen lift
/// of each generator of `Q`, with `0` for infinite order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitWitness {
    pub lift_orders: Vec<i64>,
    #[serde(default)]
    pub description: String,
}

/// What is known about the middle term of an extension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum ExtensionVerdict {
    Determined { middle: AbGroup, reason: String },
    SplitByWitness { middle: AbGroup },
    #[serde(rename = "extension-ambiguous")]
    Ambiguous,
}

impl ExtensionVerdict {
    pub fn middle(&self) -> Option<&AbGroup> {
        match self {
            ExtensionVerdict::Determined { middle, .. } | ExtensionVerdict::SplitByWitness { middle } => {
                Some(middle)
            }
            ExtensionVerdict::Ambiguous => None,
        }
    }
}

/// Returns `Err` with a reason when the witness does not fit `q`.
pub fn check_witness(q: &AbGroup, w: &SplitWitness) -> std::result::Result<(), String> {
    if w.lift_orders.len() != q.ngens() {
        return Err(format!(
            "{} lift orders given for {} generators",
            w.lift_orders.len(),
            q.ngens()
        ));
    }
    for (i, &o) in w.lift_orders.iter().enumerate() {
        if o != q.relation_order(i) {
            return Err(format!(
                "generator {i} has order {} but its lift has order {o}",
                q.relation_order(i)
            ));
        }
    }
    Ok(())
}

/// Decides the middle term of `0 → k → X → q → 0` when the data forces it.
pub fn extension_verdict(
    k: &AbGroup,
    q: &AbGroup,
    witness: Option<&SplitWitness>,
) -> std::result::Result<ExtensionVerdict, String> {
    let split = || direct_sum(k, q).group;
    let determined = |reason: &str| ExtensionVerdict::Determined {
        middle: split(),
        reason: reason.to_string(),
    };
    if q.is_trivial() {
        return Ok(determined("quotient vanishes"));
    }
    if k.is_trivial() {
        return Ok(determined("kernel vanishes"));
    }
    if q.torsion().is_empty() {
        return Ok(determined("quotient is free"));
    }
    if let (Some(a), Some(b)) = (k.order(), q.order()) {
        if gcd(a as i64, b as i64) == 1 {
            return Ok(determined("orders are coprime"));
        }
    }
    match witness {
        Some(w) => {
            check_witness(q, w)?;
            Ok(ExtensionVerdict::SplitByWitness { middle: split() })
        }
        None => Ok(ExtensionVerdict::Ambiguous),
    }
}

/// The flanking terms of `0 → U^{C₂}/N(U) → Pic^p(R^s) → Pic^{-λ} → 0`.
#[derive(Clone, Debug)]
pub struct BorelPieces {
    pub kernel: AbGroup,
    pub quotient: AbGroup,
    pub verdict: ExtensionVerdict,
}

pub fn borel_symmetric_pieces(
    r: &RingWithInvolution,
    witness: Option<&SplitWitness>,
    limits: &Limits,
) -> Result<BorelPieces> {
    let kernel = norm_fixed_quotient(r, limits)?.group().clone();
    let quotient = match r {
        RingWithInvolution::ImQuad(q) => {
            twisted_fixed_classes(&class_group(q.disc, q.involution, limits)?).group
        }
        RingWithInvolution::Finite(_) => AbGroup::trivial(),
    };
    let verdict = extension_verdict(&kernel, &quotient, witness)
        .map_err(crate::brauerseq::ScenarioError::BadWitness)?;
    Ok(BorelPieces {
        kernel,
        quotient,
        verdict,
    })
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
    fn sign_function_ranks() {
        let one_fixed = SpecWithAction::fixed_points(1);
        assert!(equivariant_sign_functions(&one_fixed).group.is_trivial());
        let orbit = SpecWithAction::new(vec!["a".into(), "b".into()], vec![1, 0]).unwrap();
        let s = equivariant_sign_functions(&orbit);
        assert_eq!(s.group, AbGroup::free(1));
        assert_eq!(s.function(&[3]), vec![3, -3]);
        assert_eq!(s.coords_of(&[2, -2]), Some(vec![2]));
        assert_eq!(s.coords_of(&[2, 2]), None);
        let mixed = SpecWithAction::new(
            (0..4).map(|i| i.to_string()).collect(),
            vec![0, 2, 1, 3],
        )
        .unwrap();
        assert_eq!(equivariant_sign_functions(&mixed).group.rank(), 1);
    }

    #[test]
    fn pic_p_examples() {
        let p = pic_p(&ring(RingSpec::imquad(-23, Involution::Conj)), &lim()).unwrap();
        assert!(p.group.isomorphic(&AbGroup::from_orders(&[2, 3])));
        assert_eq!(p.shift_rank(), 0);

        let pair = ring(RingSpec::swapped_pair(FactorSpec::Zmod { n: 3 }));
        let p = pic_p(&pair, &lim()).unwrap();
        assert_eq!(p.group, AbGroup::free(1));
        assert!(p.hermitian.group.is_trivial());
        let e = p.element(&[1]);
        assert_eq!(e.degrees, vec![1, -1]);
        assert_eq!(p.classify(&e.line, &e.degrees).unwrap(), Some(vec![1]));

        let p = pic_p(&ring(RingSpec::gf(3, 2, 0)), &lim()).unwrap();
        assert_eq!(p.group, AbGroup::cyclic(2));
    }

    #[test]
    fn borel_pieces() {
        let b = borel_symmetric_pieces(&ring(RingSpec::imquad(-23, Involution::Conj)), None, &lim()).unwrap();
        assert_eq!(b.kernel, AbGroup::cyclic(2));
        assert!(b.quotient.isomorphic(&AbGroup::cyclic(3)));
        assert_eq!(b.verdict.middle().unwrap().torsion(), &[6]);

        let b = borel_symmetric_pieces(&ring(RingSpec::zmod(5)), None, &lim()).unwrap();
        assert_eq!(b.verdict.middle(), Some(&AbGroup::cyclic(2)));
    }

    #[test]
    fn ambiguous_extensions_need_a_witness() {
        let z2 = AbGroup::cyclic(2);
        assert_eq!(extension_verdict(&z2, &z2, None), Ok(ExtensionVerdict::Ambiguous));
        let w = SplitWitness {
            lift_orders: vec![2],
            description: String::new(),
        };
        let v = extension_verdict(&z2, &z2, Some(&w)).unwrap();
        assert_eq!(v.middle().unwrap().torsion(), &[2, 2]);
        let bad = SplitWitness {
            lift_orders: vec![4],
            description: String::new(),
        };
        assert!(extension_verdict(&z2, &z2, Some(&bad)).is_err());
        let v = extension_verdict(&z2, &AbGroup::free(1), None).unwrap();
        assert!(matches!(v, ExtensionVerdict::Determined { .. }));
    }
}
