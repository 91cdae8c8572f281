//! Rank one hermitian forms and the hermitian Picard group.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::abgrp::{
    check_exact, direct_sum, image, kernel, AbGroup, DirectSum, Element, ExactnessReport,
    GroupHom, Subgroup,
};
use crate::classgrp::{class_group, twisted_fixed_classes, BinaryQuadraticForm, ClassGroupData};
use crate::config::Limits;
use crate::error::Result;
use crate::matrix::Matrix;
use crate::ringsinv::{Elem, RingWithInvolution};
use crate::structure::group_from_order_counts;
use crate::unitsnorm::{fixed_units, norm_fixed_quotient, unit_group, NormFixedQuotient};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormError {
    #[error("{0} is not an element of the ring")]
    NotAnElement(String),
    #[error("form value {0} is not a unit")]
    NonUnit(String),
    #[error("form value {0} is not fixed by the involution")]
    NotFixed(String),
    #[error("module class {0} is not in the twisted fixed classes, so it carries no hermitian form")]
    ClassNotTwistedFixed(BinaryQuadraticForm),
    #[error("form {form} does not have discriminant {disc}")]
    WrongDiscriminant { form: BinaryQuadraticForm, disc: i64 },
    #[error("ideal class modules need an imaginary quadratic order")]
    ModuleUnsupported,
    #[error("the two forms live over different rings")]
    RingMismatch,
}

/// The underlying invertible module of a hermitian line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LineModule {
    Free,
    /// The ideal class of a reduced form.
    Ideal(BinaryQuadraticForm),
}

impl LineModule {
    /// `None` for the trivial class.
    fn class(&self) -> Option<BinaryQuadraticForm> {
        match self {
            LineModule::Free => None,
            LineModule::Ideal(f) if f.is_principal() => None,
            LineModule::Ideal(f) => Some(f.reduce()),
        }
    }

    fn from_class(f: BinaryQuadraticForm) -> Self {
        if f.is_principal() {
            LineModule::Free
        } else {
            LineModule::Ideal(f.reduce())
        }
    }
}

impl fmt::Display for LineModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineModule::Free => write!(f, "R"),
            LineModule::Ideal(q) => write!(f, "I{q}"),
        }
    }
}

/// An invertible module with a nondegenerate hermitian pairing. On `R`
/// the pairing is `(x, y) ↦ x·a·λ(y)`; on an ideal it is `a` times the
/// canonical pairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianLine {
    pub ring: RingWithInvolution,
    pub module: LineModule,
    pub value: Elem,
}

impl fmt::Display for HermitianLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.module, self.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineJson {
    pub module: LineModule,
    pub value: Elem,
}

impl HermitianLine {
    pub fn to_json(&self) -> LineJson {
        LineJson {
            module: self.module,
            value: self.value.clone(),
        }
    }
}

pub fn make_form(
    r: &RingWithInvolution,
    module: LineModule,
    a: Elem,
    limits: &Limits,
) -> Result<HermitianLine> {
    if !r.contains(&a) {
        return Err(FormError::NotAnElement(a.to_string()).into());
    }
    if !r.is_unit(&a) {
        return Err(FormError::NonUnit(a.to_string()).into());
    }
    if r.involution(&a) != a {
        return Err(FormError::NotFixed(a.to_string()).into());
    }
    let module = match module {
        LineModule::Free => LineModule::Free,
        LineModule::Ideal(form) => {
            let RingWithInvolution::ImQuad(q) = r else {
                return Err(FormError::ModuleUnsupported.into());
            };
            if form.discriminant() != q.disc || !form.is_positive_definite() || !form.is_primitive() {
                return Err(FormError::WrongDiscriminant { form, disc: q.disc }.into());
            }
            let cg = class_group(q.disc, q.involution, limits)?;
            let coords = cg.log(&form).expect("form of the right discriminant");
            if !twisted_fixed_classes(&cg).contains(&coords) {
                return Err(FormError::ClassNotTwistedFixed(form.reduce()).into());
            }
            LineModule::from_class(form)
        }
    };
    Ok(HermitianLine {
        ring: r.clone(),
        module,
        value: a,
    })
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Isomorphism {
    pub isomorphic: bool,
    /// Least unit `x` with `x·λ(x)·b = a`.
    pub witness: Option<Elem>,
    /// Units tried before stopping.
    pub checked: usize,
}

/// Decides `(I, a) ≅ (J, b)`: the classes must agree and some unit `x`
/// must satisfy `x·λ(x)·b = a`. Units are searched in ascending order.
pub fn isomorphic(phi: &HermitianLine, psi: &HermitianLine, limits: &Limits) -> Result<Isomorphism> {
    if phi.ring != psi.ring {
        return Err(FormError::RingMismatch.into());
    }
    if phi.module.class() != psi.module.class() {
        return Ok(Isomorphism {
            isomorphic: false,
            witness: None,
            checked: 0,
        });
    }
    let r = &phi.ring;
    let units = r.units(limits.cap)?;
    for (i, x) in units.iter().enumerate() {
        if r.mul(&r.norm(x), &psi.value) == phi.value {
            return Ok(Isomorphism {
                isomorphic: true,
                witness: Some(x.clone()),
                checked: i + 1,
            });
        }
    }
    Ok(Isomorphism {
        isomorphic: false,
        witness: None,
        checked: units.len(),
    })
}

/// `(I ⊗ J, φ ⊗ ψ)`.
pub fn tensor(phi: &HermitianLine, psi: &HermitianLine) -> Result<HermitianLine> {
    if phi.ring != psi.ring {
        return Err(FormError::RingMismatch.into());
    }
    let module = match (phi.module.class(), psi.module.class()) {
        (None, None) => LineModule::Free,
        (Some(f), None) | (None, Some(f)) => LineModule::Ideal(f),
        (Some(f), Some(g)) => LineModule::from_class(crate::classgrp::compose(&f, &g)?),
    };
    Ok(HermitianLine {
        ring: phi.ring.clone(),
        module,
        value: phi.ring.mul(&phi.value, &psi.value),
    })
}

/// Disagreement between the assembled group and the brute-force oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PicWarning {
    OracleDisagreement { formula: String, oracle: String },
}

/// The hermitian Picard group assembled as
/// `fixed units / norms ⊕ twisted fixed classes`.
#[derive(Clone, Debug)]
pub struct PicH {
    pub ring: RingWithInvolution,
    /// Normal form.
    pub group: AbGroup,
    pub kernel: NormFixedQuotient,
    /// Twisted fixed classes inside the class group.
    pub quotient: Subgroup,
    pub classes: Option<ClassGroupData>,
    pub sum: DirectSum,
    /// One line per normal-form generator.
    pub generators: Vec<HermitianLine>,
    pub warnings: Vec<PicWarning>,
}

/// Description of the splitting used to name elements.
pub const SECTION: &str =
    "ideal classes carry the canonical ideal pairing scaled by 1; kernel classes use their least fixed unit on the free module";

impl PicH {
    pub fn section(&self) -> &'static str {
        SECTION
    }

    /// Coordinates of a line in `group`.
    pub fn classify(&self, line: &HermitianLine) -> Result<Element> {
        if line.ring != self.ring {
            return Err(FormError::RingMismatch.into());
        }
        let k = self
            .kernel
            .class_of(&line.value)
            .ok_or_else(|| FormError::NotFixed(line.value.to_string()))?;
        let q = match (line.module.class(), &self.classes) {
            (None, _) => self.quotient.group.zero(),
            (Some(f), Some(cg)) => {
                let c = cg.log(&f).ok_or(FormError::ModuleUnsupported)?;
                self.quotient
                    .coords_of(&c)
                    .ok_or(FormError::ClassNotTwistedFixed(f))?
            }
            (Some(_), None) => return Err(FormError::ModuleUnsupported.into()),
        };
        let g = &self.group;
        Ok(g.add(&self.sum.inj[0].apply(&k), &self.sum.inj[1].apply(&q)))
    }

    /// The line named by coordinates in `group`.
    pub fn line(&self, coords: &[i64]) -> HermitianLine {
        let k = self.sum.proj[0].apply(coords);
        let q = self.sum.proj[1].apply(coords);
        let reps = self.kernel.class_representatives();
        let value = reps[&self.kernel.group().reduce(&k)].clone();
        let module = match &self.classes {
            Some(cg) => LineModule::from_class(cg.form(&self.quotient.inclusion.apply(&q))),
            None => LineModule::Free,
        };
        HermitianLine {
            ring: self.ring.clone(),
            module,
            value,
        }
    }
}

pub fn pich(r: &RingWithInvolution, limits: &Limits) -> Result<PicH> {
    let kernel = norm_fixed_quotient(r, limits)?;
    let (classes, quotient) = match r {
        RingWithInvolution::ImQuad(q) => {
            let cg = class_group(q.disc, q.involution, limits)?;
            let tw = twisted_fixed_classes(&cg);
            (Some(cg), tw)
        }
        // finite rings are semilocal, so every invertible module is free
        RingWithInvolution::Finite(_) => {
            (None, Subgroup::generated_by(&AbGroup::trivial(), &Matrix::zeros(0, 0)))
        }
    };
    let sum = direct_sum(kernel.group(), &quotient.group);
    let mut warnings = Vec::new();
    if r.is_finite() {
        let oracle = pich_bruteforce(r, limits)?;
        if !oracle.group.isomorphic(&sum.group) {
            warnings.push(PicWarning::OracleDisagreement {
                formula: sum.group.to_string(),
                oracle: oracle.group.to_string(),
            });
        }
    }
    let mut out = PicH {
        ring: r.clone(),
        group: sum.group.clone(),
        kernel,
        quotient,
        classes,
        sum,
        generators: Vec::new(),
        warnings,
    };
    out.generators = (0..out.group.ngens())
        .map(|j| out.line(&out.group.generator(j)))
        .collect();
    Ok(out)
}

/// Result of the enumeration oracle.
#[derive(Clone, Debug)]
pub struct BruteForcePicH {
    pub group: AbGroup,
    /// Isomorphism classes of forms on the free module, each listed by its
    /// fixed-unit values in ascending order.
    pub classes: Vec<Vec<Elem>>,
}

/// Enumerates fixed units, groups them into classes under
/// `a ~ x·λ(x)·b`, and reads the structure of the class group from element
/// order counts.
pub fn pich_bruteforce(r: &RingWithInvolution, limits: &Limits) -> Result<BruteForcePicH> {
    r.as_finite()?.check_cap(limits.cap)?;
    let units = r.units(limits.cap)?;
    let fixed: Vec<Elem> = units
        .iter()
        .filter(|u| r.involution(u) == **u)
        .cloned()
        .collect();
    let norms: HashSet<Elem> = units.iter().map(|u| r.norm(u)).collect();
    let inverse = |a: &Elem| {
        units
            .iter()
            .find(|x| r.mul(a, x) == r.one())
            .cloned()
            .expect("units are invertible")
    };

    let mut classes: Vec<Vec<Elem>> = Vec::new();
    let mut seen: HashSet<Elem> = HashSet::new();
    for a in &fixed {
        if seen.contains(a) {
            continue;
        }
        let a_inv = inverse(a);
        let coset: Vec<Elem> = fixed
            .iter()
            .filter(|b| norms.contains(&r.mul(b, &a_inv)))
            .cloned()
            .collect();
        seen.extend(coset.iter().cloned());
        classes.push(coset);
    }

    let order_of = |a: &Elem| {
        let mut x = a.clone();
        let mut m = 1u64;
        while !norms.contains(&x) {
            x = r.mul(&x, a);
            m += 1;
        }
        m
    };
    let orders: Vec<u64> = classes.iter().map(|c| order_of(&c[0])).collect();
    Ok(BruteForcePicH {
        group: group_from_order_counts(&orders),
        classes,
    })
}

/// Builds `0 → U^{-λ} → U → U^{C₂} → Pic^h → Pic^cl → im(N) → 0` and checks
/// exactness at every term.
pub fn verify_five_term(r: &RingWithInvolution, limits: &Limits) -> Result<ExactnessReport> {
    let units = unit_group(r, limits)?;
    let u = &units.group;
    let herm = kernel(&u.norm_hom());
    let fixed = fixed_units(&units);
    let p = pich(r, limits)?;
    let cl = match &p.classes {
        Some(cg) => cg.group.clone(),
        None => AbGroup::trivial(),
    };
    let cl_norm = cl.norm_hom();
    let im = image(&cl_norm);

    let h = &herm.group;
    let f = &fixed.group;
    let pic = &p.group;
    let n_map = hom_from(u, f, |v| {
        fixed
            .coords_of(&u.norm_hom().apply(v))
            .expect("norms are fixed")
    })?;
    let to_pic = hom_from(f, pic, |v| {
        let k = p
            .kernel
            .homology
            .class_of(&fixed.inclusion.apply(v))
            .expect("fixed units have a class");
        p.sum.inj[0].apply(&k)
    })?;
    let forget = hom_from(pic, &cl, |v| {
        p.quotient.inclusion.apply(&p.sum.proj[1].apply(v))
    })?;
    let to_im = hom_from(&cl, &im.group, |v| {
        im.coords_of(&cl_norm.apply(v)).expect("in the image")
    })?;
    let chain = vec![
        GroupHom::zero(&AbGroup::trivial(), h),
        GroupHom::new(h.clone(), u.clone(), herm.inclusion.matrix().clone())?,
        n_map,
        to_pic,
        forget,
        to_im,
        GroupHom::zero(&im.group, &AbGroup::trivial()),
    ];
    Ok(check_exact(&chain)?)
}

fn hom_from(source: &AbGroup, target: &AbGroup, f: impl Fn(&[i64]) -> Element) -> Result<GroupHom> {
    let cols: Vec<Element> = (0..source.ngens()).map(|j| f(&source.generator(j))).collect();
    Ok(GroupHom::new(
        source.clone(),
        target.clone(),
        Matrix::from_cols(&cols, target.ngens()),
    )?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductCheck {
    pub product: String,
    pub factors: [String; 2],
    pub holds: bool,
}

/// Compares `Pic^h(R × S)` with `Pic^h(R) × Pic^h(S)`.
pub fn product_formula_check(
    r: &RingWithInvolution,
    s: &RingWithInvolution,
    limits: &Limits,
) -> Result<ProductCheck> {
    let rs = r.product(s)?;
    let whole = pich(&rs, limits)?.group;
    let a = pich(r, limits)?.group;
    let b = pich(s, limits)?.group;
    let prod = direct_sum(&a, &b).group;
    Ok(ProductCheck {
        product: whole.to_string(),
        factors: [a.to_string(), b.to_string()],
        holds: whole.isomorphic(&prod),
    })
}

/// Pic^h classes listed by least representative value, for reporting.
pub fn kernel_representatives(p: &PicH) -> BTreeMap<Element, Elem> {
    p.kernel.class_representatives()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ringsinv::{validate, FactorSpec, Involution, RingSpec};
    use crate::Error;

    fn ring(s: RingSpec) -> RingWithInvolution {
        validate(&s).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    fn z(v: u32) -> Elem {
        Elem::Finite(vec![v])
    }

    #[test]
    fn make_form_checks_each_condition() {
        let z5 = ring(RingSpec::zmod(5));
        assert!(make_form(&z5, LineModule::Free, z(1), &lim()).is_ok());
        assert!(matches!(
            make_form(&z5, LineModule::Free, z(0), &lim()),
            Err(Error::Form(FormError::NonUnit(_)))
        ));
        let gf9 = ring(RingSpec::gf(3, 2, 1));
        let fixed = make_form(&gf9, LineModule::Free, z(2), &lim());
        assert!(fixed.is_ok());
        assert!(matches!(
            make_form(&gf9, LineModule::Free, z(3), &lim()),
            Err(Error::Form(FormError::NotFixed(_)))
        ));
        let o = ring(RingSpec::imquad(-23, Involution::Conj));
        let one = Elem::Quad(crate::ringsinv::QuadElem::ONE);
        let f = BinaryQuadraticForm::new(2, 1, 3);
        assert!(make_form(&o, LineModule::Ideal(f), one.clone(), &lim()).is_ok());
        let triv = ring(RingSpec::imquad(-23, Involution::Trivial));
        assert!(matches!(
            make_form(&triv, LineModule::Ideal(f), one, &lim()),
            Err(Error::Form(FormError::ClassNotTwistedFixed(_)))
        ));
    }

    #[test]
    fn isomorphism_witnesses() {
        let z5 = ring(RingSpec::zmod(5));
        let form = |v| make_form(&z5, LineModule::Free, z(v), &lim()).unwrap();
        let iso = isomorphic(&form(1), &form(4), &lim()).unwrap();
        assert!(iso.isomorphic);
        assert_eq!(iso.witness, Some(z(2)));
        assert!(!isomorphic(&form(1), &form(2), &lim()).unwrap().isomorphic);
        assert_eq!(isomorphic(&form(3), &form(3), &lim()).unwrap().witness, Some(z(1)));
    }

    #[test]
    fn tensor_examples() {
        let z8 = ring(RingSpec::zmod(8));
        let form = |v| make_form(&z8, LineModule::Free, z(v), &lim()).unwrap();
        assert_eq!(tensor(&form(3), &form(5)).unwrap().value, z(7));

        let o = ring(RingSpec::imquad(-23, Involution::Conj));
        let one = Elem::Quad(crate::ringsinv::QuadElem::ONE);
        let a = make_form(&o, LineModule::Ideal(BinaryQuadraticForm::new(2, 1, 3)), one.clone(), &lim()).unwrap();
        let b = make_form(&o, LineModule::Ideal(BinaryQuadraticForm::new(2, -1, 3)), one.clone(), &lim()).unwrap();
        let t = tensor(&a, &b).unwrap();
        assert_eq!(t.module, LineModule::Free);
        assert_eq!(t.value, one);
    }

    #[test]
    fn pich_examples() {
        let p = pich(&ring(RingSpec::imquad(-23, Involution::Conj)), &lim()).unwrap();
        assert!(p.group.isomorphic(&AbGroup::from_orders(&[2, 3])));
        assert_eq!(p.generators.len(), 1);
        let g = &p.generators[0];
        assert_eq!(p.classify(g).unwrap(), p.group.generator(0));

        let p = pich(&ring(RingSpec::gf(3, 2, 1)), &lim()).unwrap();
        assert!(p.group.is_trivial());
        assert!(p.warnings.is_empty());

        let p = pich(&ring(RingSpec::zmod(8)), &lim()).unwrap();
        assert_eq!(p.group.torsion(), &[2, 2]);
    }

    #[test]
    fn bruteforce_examples() {
        let b = pich_bruteforce(&ring(RingSpec::zmod(5)), &lim()).unwrap();
        assert_eq!(b.group, AbGroup::cyclic(2));
        assert_eq!(b.classes, vec![vec![z(1), z(4)], vec![z(2), z(3)]]);
        assert!(pich_bruteforce(&ring(RingSpec::gf(2, 2, 0)), &lim()).unwrap().group.is_trivial());
        let pair = RingSpec::swapped_pair(FactorSpec::Gf { p: 5, k: 1 });
        assert!(pich_bruteforce(&ring(pair), &lim()).unwrap().group.is_trivial());
        assert!(pich_bruteforce(&ring(RingSpec::imquad(-23, Involution::Conj)), &lim()).is_err());
    }

    #[test]
    fn five_term_sequences_are_exact() {
        for spec in [
            RingSpec::imquad(-23, Involution::Conj),
            RingSpec::zmod(8),
            RingSpec::gf(3, 2, 1),
            RingSpec::imquad(-15, Involution::Trivial),
        ] {
            let report = verify_five_term(&ring(spec.clone()), &lim()).unwrap();
            assert!(report.all_exact(), "{spec:?}: {report:?}");
        }
    }

    #[test]
    fn product_formula_examples() {
        let cases = [
            (RingSpec::zmod(3), RingSpec::zmod(5), 4),
            (RingSpec::zmod(2), RingSpec::zmod(3), 2),
            (RingSpec::gf(2, 2, 0), RingSpec::zmod(5), 2),
        ];
        for (a, b, order) in cases {
            let (a, b) = (ring(a), ring(b));
            let c = product_formula_check(&a, &b, &lim()).unwrap();
            assert!(c.holds, "{c:?}");
            let whole = pich(&a.product(&b).unwrap(), &lim()).unwrap();
            assert_eq!(whole.group.order(), Some(order));
        }
    }
}
