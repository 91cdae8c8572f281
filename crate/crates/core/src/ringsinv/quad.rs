//! Orders in imaginary quadratic fields, `Z[ω]` with `ω = (D + √D)/2`.

use serde::{Deserialize, Serialize};

/// `a + b·ω` in the order of discriminant `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadElem {
    pub a: i64,
    pub b: i64,
}

impl QuadElem {
    pub const ONE: QuadElem = QuadElem { a: 1, b: 0 };

    pub fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }
}

/// Arithmetic in the order of a fixed discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadArith {
    pub disc: i64,
}

impl QuadArith {
    /// `ω² = D·ω - (D² - D)/4`
    fn omega_sq_const(&self) -> i64 {
        (self.disc * self.disc - self.disc) / 4
    }

    pub fn mul(&self, x: QuadElem, y: QuadElem) -> QuadElem {
        let c = self.omega_sq_const();
        QuadElem {
            a: x.a * y.a - x.b * y.b * c,
            b: x.a * y.b + x.b * y.a + self.disc * x.b * y.b,
        }
    }

    pub fn add(&self, x: QuadElem, y: QuadElem) -> QuadElem {
        QuadElem::new(x.a + y.a, x.b + y.b)
    }

    pub fn neg(&self, x: QuadElem) -> QuadElem {
        QuadElem::new(-x.a, -x.b)
    }

    /// Complex conjugation: `ω ↦ D - ω`.
    pub fn conj(&self, x: QuadElem) -> QuadElem {
        QuadElem::new(x.a + x.b * self.disc, -x.b)
    }

    pub fn norm(&self, x: QuadElem) -> i64 {
        x.a * x.a + x.a * x.b * self.disc + x.b * x.b * self.omega_sq_const()
    }

    /// The roots of unity, which are all the units of an imaginary
    /// quadratic order.
    pub fn units(&self) -> Vec<QuadElem> {
        let generator = match self.disc {
            // i = ω + 2 and ζ₆ = ω + 2 respectively
            -4 | -3 => QuadElem::new(2, 1),
            _ => QuadElem::new(-1, 0),
        };
        let mut out = vec![QuadElem::ONE];
        let mut x = generator;
        while x != QuadElem::ONE {
            out.push(x);
            x = self.mul(x, generator);
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_counts_and_norms() {
        for (d, count) in [(-3, 6), (-4, 4), (-7, 2), (-23, 2), (-16, 2), (-12, 2)] {
            let q = QuadArith { disc: d };
            let u = q.units();
            assert_eq!(u.len(), count, "D = {d}");
            assert!(u.iter().all(|&x| q.norm(x) == 1));
        }
    }

    #[test]
    fn conjugation_is_a_ring_involution() {
        let q = QuadArith { disc: -23 };
        let xs = [QuadElem::new(3, -2), QuadElem::new(-1, 5), QuadElem::new(0, 1)];
        for &x in &xs {
            assert_eq!(q.conj(q.conj(x)), x);
            assert_eq!(q.mul(x, q.conj(x)), QuadElem::new(q.norm(x), 0));
            for &y in &xs {
                assert_eq!(q.conj(q.mul(x, y)), q.mul(q.conj(x), q.conj(y)));
            }
        }
    }
}
