//! Explicit commutative rings with involution.
//!
//! Two families are modelled: finite products of residue rings `Z/n` and
//! finite fields `GF(p^k)` with an involution built from a factor
//! permutation and Frobenius powers, and orders in imaginary quadratic
//! fields with either the trivial involution or complex conjugation.

pub mod gf;
pub mod quad;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use gf::GfField;
pub use quad::{QuadArith, QuadElem};

use crate::structure::factorize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("permutation {perm:?} is not an involution of the factor indices")]
    PermNotInvolution { perm: Vec<usize> },
    #[error("permutation exchanges non-isomorphic factors {i} ({a}) and {j} ({b})")]
    PermMismatch { i: usize, j: usize, a: String, b: String },
    #[error("factor {factor}: automorphism x -> x^(p^{exponent}) composed with its partner does not square to the identity")]
    AutomorphismOrder { factor: usize, exponent: u32 },
    #[error("factor {factor}: Z/n has no non-trivial automorphism (frobenius exponent {exponent})")]
    ZmodAutomorphism { factor: usize, exponent: u32 },
    #[error("invalid discriminant {0}: need D < 0 with D = 0 or 1 mod 4")]
    InvalidDiscriminant(i64),
    #[error("unsupported: infinite unit group (real quadratic discriminant {0})")]
    RealQuadratic(i64),
    #[error("Z/{0}: modulus must be at least 2")]
    BadModulus(u64),
    #[error("GF({p}^{k}): {p} is not prime")]
    NotPrime { p: u64, k: u32 },
    #[error("GF({p}^{k}) exceeds the supported field size 2^16")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("ring has no factors")]
    NoFactors,
    #[error("{what} has length {got}, expected {expected}")]
    LengthMismatch { what: &'static str, got: usize, expected: usize },
    #[error("infinite ring: element enumeration needs a finite ring")]
    Infinite,
    #[error("ring has {size} elements, exceeding the enumeration cap {cap}")]
    CapExceeded { size: u128, cap: u64 },
    #[error("malformed ring description: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Involution {
    #[default]
    Trivial,
    #[serde(alias = "conjugation")]
    Conj,
}

/// One factor of a finite product, as described by a user.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FactorSpec {
    Zmod { n: u64 },
    Gf { p: u64, k: u32 },
}

impl fmt::Display for FactorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorSpec::Zmod { n } => write!(f, "Z/{n}"),
            FactorSpec::Gf { p, k } => write!(f, "GF({p}^{k})"),
        }
    }
}

/// The JSON ring description.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RingSpec {
    Finite {
        factors: Vec<FactorSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        perm: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        frob: Option<Vec<u32>>,
    },
    Imquad {
        disc: i64,
        #[serde(default)]
        involution: Involution,
    },
}

impl RingSpec {
    pub fn finite(factors: Vec<FactorSpec>) -> Self {
        RingSpec::Finite {
            factors,
            perm: None,
            frob: None,
        }
    }

    pub fn zmod(n: u64) -> Self {
        Self::finite(vec![FactorSpec::Zmod { n }])
    }

    pub fn gf(p: u64, k: u32, frob: u32) -> Self {
        RingSpec::Finite {
            factors: vec![FactorSpec::Gf { p, k }],
            perm: None,
            frob: Some(vec![frob]),
        }
    }

    pub fn imquad(disc: i64, involution: Involution) -> Self {
        RingSpec::Imquad { disc, involution }
    }

    /// Two copies of `factor` exchanged by the involution.
    pub fn swapped_pair(factor: FactorSpec) -> Self {
        RingSpec::Finite {
            factors: vec![factor.clone(), factor],
            perm: Some(vec![1, 0]),
            frob: None,
        }
    }

    /// Parses either JSON or the shorthand forms `imquad:D[:conj|:trivial]`
    /// and `finite:F1,F2,..[:swap|:perm=..][:frob=..]` where each factor is
    /// `zmodN` or `gfP^K`.
    pub fn parse(text: &str) -> Result<Self, RingError> {
        let t = text.trim();
        if t.starts_with('{') {
            return serde_json::from_str(t).map_err(|e| RingError::Parse(e.to_string()));
        }
        let mut parts = t.split(':');
        match parts.next() {
            Some("imquad") => {
                let disc = parts
                    .next()
                    .and_then(|d| d.parse::<i64>().ok())
                    .ok_or_else(|| RingError::Parse(format!("missing discriminant in `{t}`")))?;
                let involution = match parts.next() {
                    None | Some("trivial") | Some("id") => Involution::Trivial,
                    Some("conj") | Some("conjugation") => Involution::Conj,
                    Some(other) => {
                        return Err(RingError::Parse(format!("unknown involution `{other}`")))
                    }
                };
                if let Some(extra) = parts.next() {
                    return Err(RingError::Parse(format!("unexpected `{extra}` in `{t}`")));
                }
                Ok(RingSpec::Imquad { disc, involution })
            }
            Some("finite") => {
                let factors = parts
                    .next()
                    .ok_or_else(|| RingError::Parse(format!("missing factors in `{t}`")))?
                    .split(',')
                    .map(parse_factor)
                    .collect::<Result<Vec<_>, _>>()?;
                let mut perm = None;
                let mut frob = None;
                for opt in parts {
                    if opt == "swap" {
                        if factors.len() != 2 {
                            return Err(RingError::Parse(
                                "`swap` needs exactly two factors".into(),
                            ));
                        }
                        perm = Some(vec![1, 0]);
                    } else if let Some(list) = opt.strip_prefix("perm=") {
                        perm = Some(parse_list(list)?);
                    } else if let Some(list) = opt.strip_prefix("frob=") {
                        frob = Some(parse_list(list)?);
                    } else {
                        return Err(RingError::Parse(format!("unknown option `{opt}`")));
                    }
                }
                Ok(RingSpec::Finite {
                    factors,
                    perm,
                    frob,
                })
            }
            _ => Err(RingError::Parse(format!(
                "`{t}` is neither JSON nor a `finite:`/`imquad:` shorthand"
            ))),
        }
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, RingError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse()
                .map_err(|_| RingError::Parse(format!("bad list entry `{x}`")))
        })
        .collect()
}

fn parse_factor(s: &str) -> Result<FactorSpec, RingError> {
    let bad = || RingError::Parse(format!("bad factor `{s}`; expected zmodN or gfP^K"));
    if let Some(n) = s.strip_prefix("zmod") {
        return Ok(FactorSpec::Zmod {
            n: n.parse().map_err(|_| bad())?,
        });
    }
    if let Some(rest) = s.strip_prefix("gf") {
        let (p, k) = rest.split_once('^').unwrap_or((rest, "1"));
        return Ok(FactorSpec::Gf {
            p: p.parse().map_err(|_| bad())?,
            k: k.parse().map_err(|_| bad())?,
        });
    }
    Err(bad())
}

/// A validated local factor of a finite ring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    /// `Z/p^e`
    Zmod { n: u32, p: u32 },
    Gf(GfField),
}

impl Factor {
    pub fn size(&self) -> u32 {
        match self {
            Factor::Zmod { n, .. } => *n,
            Factor::Gf(f) => f.size(),
        }
    }

    pub fn spec(&self) -> FactorSpec {
        match self {
            Factor::Zmod { n, .. } => FactorSpec::Zmod { n: *n as u64 },
            Factor::Gf(f) => FactorSpec::Gf {
                p: f.characteristic() as u64,
                k: f.degree(),
            },
        }
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        match self {
            Factor::Zmod { n, .. } => ((a as u64 + b as u64) % *n as u64) as u32,
            Factor::Gf(f) => f.add(a, b),
        }
    }

    fn neg(&self, a: u32) -> u32 {
        match self {
            Factor::Zmod { n, .. } => (n - a) % n,
            Factor::Gf(f) => f.neg(a),
        }
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        match self {
            Factor::Zmod { n, .. } => ((a as u64 * b as u64) % *n as u64) as u32,
            Factor::Gf(f) => f.mul(a, b),
        }
    }

    fn is_unit(&self, a: u32) -> bool {
        match self {
            Factor::Zmod { p, .. } => !a.is_multiple_of(*p),
            Factor::Gf(_) => a != 0,
        }
    }

    fn automorphism(&self, a: u32, exponent: u32) -> u32 {
        match self {
            Factor::Zmod { .. } => a,
            Factor::Gf(f) => f.frobenius(a, exponent),
        }
    }
}

/// A finite product of local rings with involution
/// `λ(x)_i = σ_i(x_{perm(i)})`, `σ_i` a Frobenius power.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteRing {
    factors: Vec<Factor>,
    perm: Vec<usize>,
    frob: Vec<u32>,
}

/// A ring element; finite-ring elements are factor-wise encodings.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Elem {
    Finite(Vec<u32>),
    Quad(QuadElem),
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Finite(v) if v.len() == 1 => write!(f, "{}", v[0]),
            Elem::Finite(v) => {
                let parts: Vec<String> = v.iter().map(u32::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Elem::Quad(q) => match (q.a, q.b) {
                (a, 0) => write!(f, "{a}"),
                (0, b) => write!(f, "{b}w"),
                (a, b) => write!(f, "{a}{b:+}w"),
            },
        }
    }
}

impl FiniteRing {
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn frob(&self) -> &[u32] {
        &self.frob
    }

    /// Number of elements (may exceed `u64` only for absurd inputs).
    pub fn size(&self) -> u128 {
        self.factors.iter().map(|f| f.size() as u128).product()
    }

    pub fn check_cap(&self, cap: u64) -> Result<(), RingError> {
        let size = self.size();
        if size > cap as u128 {
            return Err(RingError::CapExceeded { size, cap });
        }
        Ok(())
    }

    pub fn zero(&self) -> Vec<u32> {
        vec![0; self.factors.len()]
    }

    pub fn one(&self) -> Vec<u32> {
        vec![1; self.factors.len()]
    }

    pub fn add(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(f, (&x, &y))| f.add(x, y))
            .collect()
    }

    pub fn neg(&self, a: &[u32]) -> Vec<u32> {
        self.factors.iter().zip(a).map(|(f, &x)| f.neg(x)).collect()
    }

    pub fn mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .map(|(f, (&x, &y))| f.mul(x, y))
            .collect()
    }

    pub fn involution(&self, a: &[u32]) -> Vec<u32> {
        (0..self.factors.len())
            .map(|i| self.factors[i].automorphism(a[self.perm[i]], self.frob[i]))
            .collect()
    }

    pub fn is_unit(&self, a: &[u32]) -> bool {
        self.factors.iter().zip(a).all(|(f, &x)| f.is_unit(x))
    }

    /// Every element, in lexicographic order of encodings, if the ring has
    /// at most `cap` elements.
    pub fn elements(&self, cap: u64) -> Result<ElementIter<'_>, RingError> {
        self.check_cap(cap)?;
        Ok(ElementIter {
            ring: self,
            next: Some(self.zero()),
        })
    }

    /// All units in ascending encoding order.
    pub fn units(&self, cap: u64) -> Result<Vec<Vec<u32>>, RingError> {
        Ok(self.elements(cap)?.filter(|x| self.is_unit(x)).collect())
    }
}

/// Lexicographic enumeration of a finite ring.
pub struct ElementIter<'a> {
    ring: &'a FiniteRing,
    next: Option<Vec<u32>>,
}

impl Iterator for ElementIter<'_> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.ring.factors[i].size() {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

/// An imaginary quadratic order with its involution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadOrder {
    pub disc: i64,
    pub involution: Involution,
}

impl QuadOrder {
    pub fn arith(&self) -> QuadArith {
        QuadArith { disc: self.disc }
    }

    pub fn apply_involution(&self, x: QuadElem) -> QuadElem {
        match self.involution {
            Involution::Trivial => x,
            Involution::Conj => self.arith().conj(x),
        }
    }
}

/// A validated ring with involution.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingWithInvolution {
    Finite(FiniteRing),
    ImQuad(QuadOrder),
}

impl fmt::Display for RingWithInvolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingWithInvolution::ImQuad(q) => {
                let inv = match q.involution {
                    Involution::Trivial => "trivial",
                    Involution::Conj => "conj",
                };
                write!(f, "O({}) with {} involution", q.disc, inv)
            }
            RingWithInvolution::Finite(r) => {
                let parts: Vec<String> = r
                    .factors
                    .iter()
                    .zip(&r.frob)
                    .map(|(fac, &e)| {
                        if e == 0 {
                            fac.spec().to_string()
                        } else {
                            format!("{}[frob^{e}]", fac.spec())
                        }
                    })
                    .collect();
                write!(f, "{}", parts.join(" x "))?;
                if r.perm.iter().enumerate().any(|(i, &j)| i != j) {
                    write!(f, " perm {:?}", r.perm)?;
                }
                Ok(())
            }
        }
    }
}

impl RingWithInvolution {
    pub fn parse(text: &str) -> Result<Self, RingError> {
        validate(&RingSpec::parse(text)?)
    }

    pub fn as_finite(&self) -> Result<&FiniteRing, RingError> {
        match self {
            RingWithInvolution::Finite(r) => Ok(r),
            RingWithInvolution::ImQuad(_) => Err(RingError::Infinite),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RingWithInvolution::Finite(_))
    }

    /// Whether the involution is the identity.
    pub fn has_trivial_involution(&self) -> bool {
        match self {
            RingWithInvolution::ImQuad(q) => q.involution == Involution::Trivial,
            RingWithInvolution::Finite(r) => {
                r.perm.iter().enumerate().all(|(i, &j)| i == j)
                    && r.frob.iter().zip(&r.factors).all(|(&e, f)| match f {
                        Factor::Gf(g) => e % g.degree() == 0,
                        Factor::Zmod { .. } => true,
                    })
            }
        }
    }

    /// The normalized description.
    pub fn to_spec(&self) -> RingSpec {
        match self {
            RingWithInvolution::ImQuad(q) => RingSpec::Imquad {
                disc: q.disc,
                involution: q.involution,
            },
            RingWithInvolution::Finite(r) => RingSpec::Finite {
                factors: r.factors.iter().map(Factor::spec).collect(),
                perm: Some(r.perm.clone()),
                frob: Some(r.frob.clone()),
            },
        }
    }

    pub fn one(&self) -> Elem {
        match self {
            RingWithInvolution::Finite(r) => Elem::Finite(r.one()),
            RingWithInvolution::ImQuad(_) => Elem::Quad(QuadElem::ONE),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (RingWithInvolution::Finite(r), Elem::Finite(x), Elem::Finite(y)) => {
                Elem::Finite(r.mul(x, y))
            }
            (RingWithInvolution::ImQuad(q), Elem::Quad(x), Elem::Quad(y)) => {
                Elem::Quad(q.arith().mul(*x, *y))
            }
            _ => panic!("element {a} or {b} does not belong to {self}"),
        }
    }

    pub fn involution(&self, a: &Elem) -> Elem {
        match (self, a) {
            (RingWithInvolution::Finite(r), Elem::Finite(x)) => Elem::Finite(r.involution(x)),
            (RingWithInvolution::ImQuad(q), Elem::Quad(x)) => Elem::Quad(q.apply_involution(*x)),
            _ => panic!("element {a} does not belong to {self}"),
        }
    }

    /// Whether `a` is a well-formed element of this ring.
    pub fn contains(&self, a: &Elem) -> bool {
        match (self, a) {
            (RingWithInvolution::Finite(r), Elem::Finite(x)) => {
                x.len() == r.factors.len()
                    && x.iter().zip(&r.factors).all(|(&v, f)| v < f.size())
            }
            (RingWithInvolution::ImQuad(_), Elem::Quad(_)) => true,
            _ => false,
        }
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        match (self, a) {
            (RingWithInvolution::Finite(r), Elem::Finite(x)) => r.is_unit(x),
            (RingWithInvolution::ImQuad(q), Elem::Quad(x)) => q.arith().norm(*x) == 1,
            _ => false,
        }
    }

    /// `u · λ(u)`.
    pub fn norm(&self, a: &Elem) -> Elem {
        self.mul(a, &self.involution(a))
    }

    /// All units, ascending. Imaginary quadratic orders have finitely many.
    pub fn units(&self, cap: u64) -> Result<Vec<Elem>, RingError> {
        match self {
            RingWithInvolution::Finite(r) => {
                Ok(r.units(cap)?.into_iter().map(Elem::Finite).collect())
            }
            RingWithInvolution::ImQuad(q) => {
                Ok(q.arith().units().into_iter().map(Elem::Quad).collect())
            }
        }
    }

    /// Finite product of two rings with involution.
    pub fn product(&self, other: &RingWithInvolution) -> Result<RingWithInvolution, RingError> {
        let (a, b) = (self.as_finite()?, other.as_finite()?);
        let offset = a.factors.len();
        let factors = a
            .factors
            .iter()
            .chain(&b.factors)
            .map(Factor::spec)
            .collect();
        let perm = a
            .perm
            .iter()
            .copied()
            .chain(b.perm.iter().map(|&j| j + offset))
            .collect();
        let frob = a.frob.iter().chain(&b.frob).copied().collect();
        validate(&RingSpec::Finite {
            factors,
            perm: Some(perm),
            frob: Some(frob),
        })
    }
}

/// Checks a description and returns the normalized ring: `Z/n` factors are
/// split into prime-power factors and factors are sorted canonically.
pub fn validate(spec: &RingSpec) -> Result<RingWithInvolution, RingError> {
    match spec {
        RingSpec::Imquad { disc, involution } => {
            let d = *disc;
            if d > 0 {
                return Err(RingError::RealQuadratic(d));
            }
            if d == 0 || !matches!(d.rem_euclid(4), 0 | 1) {
                return Err(RingError::InvalidDiscriminant(d));
            }
            Ok(RingWithInvolution::ImQuad(QuadOrder {
                disc: d,
                involution: *involution,
            }))
        }
        RingSpec::Finite {
            factors,
            perm,
            frob,
        } => validate_finite(factors, perm.as_deref(), frob.as_deref())
            .map(RingWithInvolution::Finite),
    }
}

fn validate_finite(
    factors: &[FactorSpec],
    perm: Option<&[usize]>,
    frob: Option<&[u32]>,
) -> Result<FiniteRing, RingError> {
    let n = factors.len();
    if n == 0 {
        return Err(RingError::NoFactors);
    }
    let perm: Vec<usize> = perm.map_or_else(|| (0..n).collect(), <[usize]>::to_vec);
    let frob: Vec<u32> = frob.map_or_else(|| vec![0; n], <[u32]>::to_vec);
    if perm.len() != n {
        return Err(RingError::LengthMismatch {
            what: "perm",
            got: perm.len(),
            expected: n,
        });
    }
    if frob.len() != n {
        return Err(RingError::LengthMismatch {
            what: "frob",
            got: frob.len(),
            expected: n,
        });
    }
    if perm.iter().any(|&j| j >= n) || (0..n).any(|i| perm[perm[i]] != i) {
        return Err(RingError::PermNotInvolution { perm });
    }
    for (i, f) in factors.iter().enumerate() {
        match *f {
            FactorSpec::Zmod { n } if n < 2 => return Err(RingError::BadModulus(n)),
            FactorSpec::Gf { p, k } => {
                if k == 0 || !gf::is_prime(p) {
                    return Err(RingError::NotPrime { p, k });
                }
                if (p as u128).pow(k) > gf::MAX_FIELD_SIZE as u128 {
                    return Err(RingError::FieldTooLarge { p, k });
                }
            }
            _ => {}
        }
        let j = perm[i];
        if factors[j] != *f {
            return Err(RingError::PermMismatch {
                i,
                j,
                a: f.to_string(),
                b: factors[j].to_string(),
            });
        }
        match *f {
            FactorSpec::Zmod { .. } if frob[i] != 0 => {
                return Err(RingError::ZmodAutomorphism {
                    factor: i,
                    exponent: frob[i],
                })
            }
            FactorSpec::Gf { k, .. }
                if (frob[i] >= k || !(frob[i] + frob[j]).is_multiple_of(k)) => {
                    return Err(RingError::AutomorphismOrder {
                        factor: i,
                        exponent: frob[i],
                    });
                }
            _ => {}
        }
    }

    // split Z/n into prime powers; (original index, prime) labels each piece
    struct Piece {
        origin: usize,
        prime: u64,
        factor: FactorSpec,
        frob: u32,
    }
    let mut pieces: Vec<Piece> = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        match *f {
            FactorSpec::Zmod { n } => {
                for (p, e) in factorize(n) {
                    pieces.push(Piece {
                        origin: i,
                        prime: p,
                        factor: FactorSpec::Zmod { n: p.pow(e) },
                        frob: 0,
                    });
                }
            }
            FactorSpec::Gf { p, .. } => pieces.push(Piece {
                origin: i,
                prime: p,
                factor: f.clone(),
                frob: frob[i],
            }),
        }
    }
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| {
        (&pieces[a].factor, pieces[a].frob).cmp(&(&pieces[b].factor, pieces[b].frob))
    });
    let position = |origin: usize, prime: u64| {
        order
            .iter()
            .position(|&k| pieces[k].origin == origin && pieces[k].prime == prime)
            .expect("partner piece exists")
    };
    let mut new_factors = Vec::with_capacity(order.len());
    let mut new_perm = Vec::with_capacity(order.len());
    let mut new_frob = Vec::with_capacity(order.len());
    for &k in &order {
        let piece = &pieces[k];
        new_perm.push(position(perm[piece.origin], piece.prime));
        new_frob.push(piece.frob);
        new_factors.push(match piece.factor {
            FactorSpec::Zmod { n } => Factor::Zmod {
                n: n as u32,
                p: piece.prime as u32,
            },
            FactorSpec::Gf { p, k } => Factor::Gf(GfField::new(p as u32, k)),
        });
    }
    Ok(FiniteRing {
        factors: new_factors,
        perm: new_perm,
        frob: new_frob,
    })
}

/// A finite set of connected components with an involutive permutation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpecWithAction {
    pub components: Vec<String>,
    pub action: Vec<usize>,
}

impl SpecWithAction {
    pub fn new(components: Vec<String>, action: Vec<usize>) -> Result<Self, RingError> {
        let n = components.len();
        if action.len() != n {
            return Err(RingError::LengthMismatch {
                what: "component action",
                got: action.len(),
                expected: n,
            });
        }
        if action.iter().any(|&j| j >= n) || (0..n).any(|i| action[action[i]] != i) {
            return Err(RingError::PermNotInvolution { perm: action });
        }
        Ok(Self { components, action })
    }

    /// `n` components, all fixed.
    pub fn fixed_points(n: usize) -> Self {
        Self {
            components: (0..n).map(|i| format!("c{i}")).collect(),
            action: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn fixed_count(&self) -> usize {
        (0..self.len()).filter(|&i| self.action[i] == i).count()
    }

    /// Orbits `{c, λc}` with `c < λc`, as `(c, λc)`.
    pub fn free_orbits(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter(|&i| self.action[i] > i)
            .map(|i| (i, self.action[i]))
            .collect()
    }
}

/// Connected components of the spectrum with the induced action.
pub fn spec_components(r: &RingWithInvolution) -> SpecWithAction {
    match r {
        RingWithInvolution::ImQuad(q) => SpecWithAction {
            components: vec![format!("O({})", q.disc)],
            action: vec![0],
        },
        RingWithInvolution::Finite(f) => SpecWithAction {
            components: f
                .factors
                .iter()
                .enumerate()
                .map(|(i, fac)| format!("{i}:{}", fac.spec()))
                .collect(),
            action: f.perm.clone(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const CAP: u64 = 1 << 20;

    fn finite(r: &RingWithInvolution) -> &FiniteRing {
        r.as_finite().unwrap()
    }

    #[test]
    fn gf9_with_frobenius_is_valid() {
        let r = validate(&RingSpec::gf(3, 2, 1)).unwrap();
        assert!(!r.has_trivial_involution());
    }

    #[test]
    fn zmod6_splits_by_crt() {
        let r = validate(&RingSpec::zmod(6)).unwrap();
        assert_eq!(
            r.to_spec(),
            RingSpec::Finite {
                factors: vec![FactorSpec::Zmod { n: 2 }, FactorSpec::Zmod { n: 3 }],
                perm: Some(vec![0, 1]),
                frob: Some(vec![0, 0]),
            }
        );
    }

    #[test]
    fn swapped_pair_of_gf2() {
        let r = validate(&RingSpec::swapped_pair(FactorSpec::Gf { p: 2, k: 1 })).unwrap();
        assert_eq!(finite(&r).perm(), &[1, 0]);
    }

    #[test]
    fn swapped_zmod6_pair_keeps_primes_matched() {
        let r = validate(&RingSpec::swapped_pair(FactorSpec::Zmod { n: 6 })).unwrap();
        let f = finite(&r);
        let sizes: Vec<u32> = f.factors().iter().map(Factor::size).collect();
        assert_eq!(sizes, vec![2, 2, 3, 3]);
        assert_eq!(f.perm(), &[1, 0, 3, 2]);
    }

    #[test]
    fn invalid_rings_are_reported() {
        let bad_perm = RingSpec::Finite {
            factors: vec![FactorSpec::Zmod { n: 3 }; 3],
            perm: Some(vec![1, 2, 0]),
            frob: None,
        };
        assert!(matches!(validate(&bad_perm), Err(RingError::PermNotInvolution { .. })));
        let mismatch = RingSpec::Finite {
            factors: vec![FactorSpec::Zmod { n: 3 }, FactorSpec::Zmod { n: 5 }],
            perm: Some(vec![1, 0]),
            frob: None,
        };
        assert!(matches!(validate(&mismatch), Err(RingError::PermMismatch { .. })));
        // x -> x^2 on GF(8) has order 3
        assert!(matches!(
            validate(&RingSpec::gf(2, 3, 1)),
            Err(RingError::AutomorphismOrder { .. })
        ));
        assert_eq!(
            validate(&RingSpec::imquad(-5, Involution::Conj)),
            Err(RingError::InvalidDiscriminant(-5))
        );
        assert_eq!(
            validate(&RingSpec::imquad(5, Involution::Conj)),
            Err(RingError::RealQuadratic(5))
        );
        assert!(matches!(
            validate(&RingSpec::gf(4, 1, 0)),
            Err(RingError::NotPrime { .. })
        ));
    }

    #[test]
    fn validate_is_idempotent() {
        let specs = [
            RingSpec::zmod(60),
            RingSpec::gf(3, 2, 1),
            RingSpec::swapped_pair(FactorSpec::Zmod { n: 12 }),
            RingSpec::Finite {
                factors: vec![
                    FactorSpec::Gf { p: 3, k: 2 },
                    FactorSpec::Zmod { n: 10 },
                    FactorSpec::Gf { p: 3, k: 2 },
                ],
                perm: Some(vec![2, 1, 0]),
                frob: Some(vec![1, 0, 1]),
            },
        ];
        for s in &specs {
            let r = validate(s).unwrap();
            assert_eq!(validate(&r.to_spec()).unwrap(), r, "{s:?}");
        }
    }

    #[test]
    fn enumeration_and_units() {
        let r = validate(&RingSpec::zmod(5)).unwrap();
        let f = finite(&r);
        assert_eq!(f.elements(CAP).unwrap().count(), 5);
        assert_eq!(f.units(CAP).unwrap(), vec![vec![1], vec![2], vec![3], vec![4]]);

        // Z/8 stays a single local factor
        let r = validate(&RingSpec::zmod(8)).unwrap();
        let units: Vec<u32> = finite(&r).units(CAP).unwrap().into_iter().map(|u| u[0]).collect();
        assert_eq!(units, vec![1, 3, 5, 7]);

        let r = validate(&RingSpec::gf(3, 2, 1)).unwrap();
        let f = finite(&r);
        let all: Vec<Vec<u32>> = f.elements(CAP).unwrap().collect();
        assert_eq!(all.len(), 9);
        let fixed: Vec<u32> = all
            .iter()
            .filter(|x| f.involution(x) == **x)
            .map(|x| x[0])
            .collect();
        assert_eq!(fixed, vec![0, 1, 2]);
    }

    #[test]
    fn enumeration_errors() {
        let r = validate(&RingSpec::imquad(-23, Involution::Conj)).unwrap();
        assert_eq!(r.as_finite().unwrap_err(), RingError::Infinite);
        let r = validate(&RingSpec::zmod(1000)).unwrap();
        assert!(matches!(
            finite(&r).elements(100).err(),
            Some(RingError::CapExceeded { size: 1000, cap: 100 })
        ));
    }

    #[test]
    fn components() {
        let r = validate(&RingSpec::gf(3, 2, 1)).unwrap();
        let s = spec_components(&r);
        assert_eq!((s.len(), s.fixed_count()), (1, 1));

        let r = validate(&RingSpec::swapped_pair(FactorSpec::Zmod { n: 3 })).unwrap();
        let s = spec_components(&r);
        assert_eq!(s.free_orbits(), vec![(0, 1)]);

        let r = validate(&RingSpec::zmod(6)).unwrap();
        let s = spec_components(&r);
        assert_eq!((s.len(), s.fixed_count()), (2, 2));
    }

    #[test]
    fn shorthand_parsing() {
        assert_eq!(
            RingSpec::parse("imquad:-23:conj").unwrap(),
            RingSpec::imquad(-23, Involution::Conj)
        );
        assert_eq!(RingSpec::parse("finite:zmod8").unwrap(), RingSpec::zmod(8));
        assert_eq!(
            RingSpec::parse("finite:zmod3,zmod3:swap").unwrap(),
            RingSpec::swapped_pair(FactorSpec::Zmod { n: 3 })
        );
        assert_eq!(RingSpec::parse("finite:gf3^2:frob=1").unwrap(), RingSpec::gf(3, 2, 1));
        assert_eq!(
            RingSpec::parse(r#"{"type":"finite","factors":[{"kind":"zmod","n":8}],"perm":[0],"frob":[0]}"#)
                .unwrap(),
            RingSpec::Finite {
                factors: vec![FactorSpec::Zmod { n: 8 }],
                perm: Some(vec![0]),
                frob: Some(vec![0]),
            }
        );
        assert_eq!(
            RingSpec::parse(r#"{"type":"imquad","disc":-23,"involution":"conj"}"#).unwrap(),
            RingSpec::imquad(-23, Involution::Conj)
        );
        assert!(RingSpec::parse("finite:zmodx").is_err());
        assert!(RingSpec::parse("nonsense").is_err());
    }
}
