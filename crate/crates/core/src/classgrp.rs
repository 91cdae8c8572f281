//! Class groups of imaginary quadratic orders through reduced primitive
//! positive definite binary quadratic forms.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgrp::{fixed_and_twisted, gcd, AbGroup, Element, Subgroup};
use crate::config::Limits;
use crate::ringsinv::Involution;
use crate::structure::{decompose, Decomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("invalid discriminant {0}: need D < 0 with D = 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("|D| = {} exceeds the configured bound {bound}", .disc.abs())]
    BoundExceeded { disc: i64, bound: i64 },
    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),
    #[error("form {0} is not primitive and positive definite")]
    NotPrimitive(BinaryQuadraticForm),
}

/// `a x² + b xy + c y²`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinaryQuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

impl fmt::Debug for BinaryQuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl BinaryQuadraticForm {
    pub const fn new(a: i64, b: i64, c: i64) -> Self {
        Self { a, b, c }
    }

    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    /// The identity class of discriminant `disc`.
    pub fn principal(disc: i64) -> Self {
        let b = disc.rem_euclid(2);
        Self::new(1, b, (b * b - disc) / 4)
    }

    pub fn is_principal(&self) -> bool {
        self.reduce() == Self::principal(self.discriminant())
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    pub fn is_positive_definite(&self) -> bool {
        self.a > 0 && self.discriminant() < 0
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && !((b.abs() == a || a == c) && b < 0)
    }

    /// Moves `b` into `(-a, a]`.
    fn normalize(self) -> Self {
        let d = self.discriminant();
        let (a, b) = (self.a, self.b);
        let b = a - (a - b).rem_euclid(2 * a);
        Self::new(a, b, (b * b - d) / (4 * a))
    }

    /// The reduced form equivalent to a positive definite form.
    pub fn reduce(self) -> Self {
        let mut f = self.normalize();
        while f.a > f.c {
            f = Self::new(f.c, -f.b, f.a).normalize();
        }
        if f.a == f.c && f.b < 0 {
            f.b = -f.b;
        }
        f
    }

    /// `(a, -b, c)`, reduced: the inverse class.
    pub fn inverse(&self) -> Self {
        Self::new(self.a, -self.b, self.c).reduce()
    }

    fn check(&self) -> Result<(), ClassError> {
        if !(self.is_positive_definite() && self.is_primitive()) {
            return Err(ClassError::NotPrimitive(*self));
        }
        Ok(())
    }
}

/// `(g, x, y)` with `x a + y b = g = gcd(a, b) >= 0`.
fn xgcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Gauss composition of primitive forms of equal discriminant, reduced.
///
/// Dirichlet's method via united forms; intermediate values are `i128`.
pub fn compose(
    f: &BinaryQuadraticForm,
    g: &BinaryQuadraticForm,
) -> Result<BinaryQuadraticForm, ClassError> {
    let disc = f.discriminant();
    if g.discriminant() != disc {
        return Err(ClassError::DiscriminantMismatch(disc, g.discriminant()));
    }
    f.check()?;
    g.check()?;
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (f1.a as i128, f1.b as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let n = b2 - s;
    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (d, u, _) = xgcd(a2, a1);
        (d, u)
    };
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (d1, u, v) = xgcd(s, d);
        (d1, u, -v)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (c2 * d1 + r * (b2 + v2 * r)) / v1;
    let out = BinaryQuadraticForm::new(
        i64::try_from(a3).expect("composition overflow"),
        i64::try_from(b3).expect("composition overflow"),
        i64::try_from(c3).expect("composition overflow"),
    );
    debug_assert_eq!(out.discriminant(), disc);
    Ok(out.reduce())
}

fn check_disc(disc: i64, limits: &Limits) -> Result<(), ClassError> {
    if disc >= 0 || !matches!(disc.rem_euclid(4), 0 | 1) {
        return Err(ClassError::InvalidDiscriminant(disc));
    }
    if disc.abs() > limits.disc_bound {
        return Err(ClassError::BoundExceeded {
            disc,
            bound: limits.disc_bound,
        });
    }
    Ok(())
}

/// One reduced primitive form per class, ordered by `a`, then `|b|`, with
/// positive `b` before negative.
pub fn reduced_forms(disc: i64, limits: &Limits) -> Result<Vec<BinaryQuadraticForm>, ClassError> {
    check_disc(disc, limits)?;
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -disc {
        for b in -a + 1..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = BinaryQuadraticForm::new(a, b, num / (4 * a));
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), f.b < 0));
    Ok(out)
}

/// The class group of the order of discriminant `disc` with the action
/// induced by the involution (inversion for conjugation).
#[derive(Clone, Debug)]
pub struct ClassGroupData {
    pub disc: i64,
    pub involution: Involution,
    pub group: AbGroup,
    /// Reduced forms, one per class, in [`reduced_forms`] order.
    pub forms: Vec<BinaryQuadraticForm>,
    dec: Decomposition<BinaryQuadraticForm>,
}

impl ClassGroupData {
    /// Coordinates of the class of any primitive form of this discriminant.
    pub fn log(&self, f: &BinaryQuadraticForm) -> Option<Element> {
        if f.discriminant() != self.disc || !f.is_positive_definite() {
            return None;
        }
        self.dec.log(&f.reduce())
    }

    /// The reduced form with the given coordinates.
    pub fn form(&self, coords: &[i64]) -> BinaryQuadraticForm {
        self.dec.exp(coords)
    }

    /// Forms realizing the canonical generators.
    pub fn generators(&self) -> &[BinaryQuadraticForm] {
        &self.dec.generators
    }

    pub fn class_number(&self) -> usize {
        self.forms.len()
    }

    /// Pullback of a class along the involution.
    pub fn act(&self, f: &BinaryQuadraticForm) -> BinaryQuadraticForm {
        match self.involution {
            Involution::Trivial => f.reduce(),
            Involution::Conj => f.inverse(),
        }
    }

    pub fn principal(&self) -> BinaryQuadraticForm {
        BinaryQuadraticForm::principal(self.disc)
    }
}

pub fn class_group(
    disc: i64,
    involution: Involution,
    limits: &Limits,
) -> Result<ClassGroupData, ClassError> {
    let forms = reduced_forms(disc, limits)?;
    let principal = BinaryQuadraticForm::principal(disc);
    let dec = decompose(&forms, &principal, |f, g| {
        compose(f, g).expect("forms of one discriminant")
    })
    .expect("composition of reduced forms is a group law");
    let dec = match involution {
        Involution::Trivial => dec,
        Involution::Conj => dec.with_automorphism(|f| f.inverse()),
    };
    Ok(ClassGroupData {
        disc,
        involution,
        group: dec.group.clone(),
        forms,
        dec,
    })
}

/// Classes `x` with `λx = -x`.
pub fn twisted_fixed_classes(cg: &ClassGroupData) -> Subgroup {
    fixed_and_twisted(&cg.group).twisted
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(a: i64, b: i64, c: i64) -> BinaryQuadraticForm {
        BinaryQuadraticForm::new(a, b, c)
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn reduced_forms_of_small_discriminants() {
        assert_eq!(
            reduced_forms(-23, &lim()).unwrap(),
            vec![f(1, 1, 6), f(2, 1, 3), f(2, -1, 3)]
        );
        assert_eq!(reduced_forms(-4, &lim()).unwrap(), vec![f(1, 0, 1)]);
        assert_eq!(reduced_forms(-15, &lim()).unwrap().len(), 2);
    }

    #[test]
    fn discriminant_errors() {
        assert_eq!(reduced_forms(-5, &lim()), Err(ClassError::InvalidDiscriminant(-5)));
        assert_eq!(reduced_forms(8, &lim()), Err(ClassError::InvalidDiscriminant(8)));
        let tight = Limits {
            disc_bound: 100,
            ..lim()
        };
        assert!(matches!(reduced_forms(-103, &tight), Err(ClassError::BoundExceeded { .. })));
    }

    #[test]
    fn composition_examples() {
        assert_eq!(compose(&f(1, 1, 6), &f(2, 1, 3)).unwrap(), f(2, 1, 3));
        assert_eq!(compose(&f(2, 1, 3), &f(2, -1, 3)).unwrap(), f(1, 1, 6));
        assert_eq!(compose(&f(2, 1, 3), &f(2, 1, 3)).unwrap(), f(2, -1, 3));
        assert!(matches!(
            compose(&f(1, 1, 6), &f(1, 0, 1)),
            Err(ClassError::DiscriminantMismatch(..))
        ));
    }

    #[test]
    fn reduction_handles_boundary_cases() {
        // a = c forces b >= 0, |b| = a forces b >= 0
        assert_eq!(f(2, -1, 2).reduce(), f(2, 1, 2));
        assert_eq!(f(2, -2, 3).reduce(), f(2, 2, 3));
        // a far-from-reduced form of discriminant -23
        let g = f(6, 13, 8);
        assert_eq!(g.discriminant(), -23);
        assert!(g.reduce().is_reduced());
    }

    #[test]
    fn class_groups_with_involution() {
        let cg = class_group(-23, Involution::Conj, &lim()).unwrap();
        assert_eq!(cg.group.torsion(), &[3]);
        assert_eq!(cg.group.action().to_rows(), vec![vec![2]]);
        let cg = class_group(-23, Involution::Trivial, &lim()).unwrap();
        assert!(cg.group.has_trivial_action());
        assert!(class_group(-4, Involution::Conj, &lim()).unwrap().group.is_trivial());
    }

    #[test]
    fn twisted_fixed_examples() {
        let cg = class_group(-23, Involution::Conj, &lim()).unwrap();
        assert_eq!(twisted_fixed_classes(&cg).group.torsion(), &[3]);
        let cg = class_group(-23, Involution::Trivial, &lim()).unwrap();
        assert!(twisted_fixed_classes(&cg).group.is_trivial());
        let cg = class_group(-15, Involution::Trivial, &lim()).unwrap();
        assert_eq!(twisted_fixed_classes(&cg).group.torsion(), &[2]);
    }
}
