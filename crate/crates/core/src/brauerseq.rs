//! Long exact sequences with one unknown term, and the group-level
//! Brauer computations built on them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abgrp::{
    cokernel, exact_at, kernel, tate_cohomology, AbGroup, Element, ExactnessReport, GroupHom,
    GroupJson, Junction, Quotient, Subgroup,
};
use crate::error::Result;
use crate::matrix::Matrix;
use crate::pnpic::{extension_verdict, ExtensionVerdict, SplitWitness};
use crate::ringsinv::SpecWithAction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("malformed scenario: {0}")]
    Parse(String),
    #[error("no builtin scenario named {0:?}")]
    UnknownBuiltin(String),
    #[error("a scenario needs exactly one unknown term, found {0}")]
    UnknownCount(usize),
    #[error("{terms} terms need {expected} maps, found {found}")]
    MapCount { terms: usize, expected: usize, found: usize },
    #[error("map {0} touches the unknown term and must be null")]
    UnknownMapGiven(usize),
    #[error("map {index} is invalid: {message}")]
    BadMap { index: usize, message: String },
    #[error("the unknown term is under-determined: {0}")]
    Underdetermined(String),
    #[error("the chain is not exact at term {term}: {detail}")]
    Inexact { term: usize, detail: String },
    #[error("invalid splitting witness: {0}")]
    BadWitness(String),
    #[error("lower bound {0:?} refers to a missing map")]
    LowerBound(String),
    #[error("the map does not start at the given group")]
    SourceMismatch,
    #[error("Galois mode needs a norm map")]
    MissingNorm,
    #[error("{0:?} is not an element of the group")]
    ClassNotInGroup(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Term {
    Known { label: String, group: GroupJson },
    Unknown { label: String },
}

impl Term {
    pub fn label(&self) -> &str {
        match self {
            Term::Known { label, .. } | Term::Unknown { label } => label,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SourceKind {
    Reference,
    Trivial,
    Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub entry: String,
    pub kind: SourceKind,
    pub anchor: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LowerBoundSpec {
    pub label: String,
    /// The cokernel of this map injects into the next term of the sequence.
    pub map: usize,
    #[serde(default)]
    pub expected: Option<GroupJson>,
}

/// A fragment `T_0 → T_1 → ... → T_{n-1}` of a long exact sequence;
/// `maps[i]` goes from `T_i` to `T_{i+1}` and is given as a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub terms: Vec<Term>,
    pub maps: Vec<Option<Vec<Vec<i64>>>>,
    #[serde(default)]
    pub witness: Option<SplitWitness>,
    #[serde(default)]
    pub lower_bounds: Vec<LowerBoundSpec>,
    #[serde(default)]
    pub expected: Option<GroupJson>,
    #[serde(default)]
    pub provenance: Vec<Provenance>,
}

const BUILTINS: &[(&str, &str)] = &[
    ("algclosed-char-ne-2", include_str!("../scenarios/algclosed-char-ne-2.json")),
    ("algclosed-char-2", include_str!("../scenarios/algclosed-char-2.json")),
    ("split-quadratic", include_str!("../scenarios/split-quadratic.json")),
    ("sphere", include_str!("../scenarios/sphere.json")),
    ("unit-picp", include_str!("../scenarios/unit-picp.json")),
    ("kr", include_str!("../scenarios/kr.json")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTINS.iter().map(|(n, _)| *n).collect()
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario, ScenarioError> {
        serde_json::from_str(text).map_err(|e| ScenarioError::Parse(e.to_string()))
    }

    pub fn builtin(name: &str) -> Result<Scenario, ScenarioError> {
        let (_, text) = BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .ok_or_else(|| ScenarioError::UnknownBuiltin(name.to_string()))?;
        Scenario::from_json(text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LowerBound {
    pub label: String,
    pub group: AbGroup,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioOutcome {
    pub name: String,
    pub unknown: String,
    /// Image of the incoming map: the cokernel of the map two steps back.
    pub sub: AbGroup,
    /// Image of the outgoing map: the kernel of the map one step ahead.
    pub quotient: AbGroup,
    pub verdict: ExtensionVerdict,
    pub precheck: ExactnessReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub postcheck: Option<ExactnessReport>,
    pub lower_bounds: Vec<LowerBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
}

impl ScenarioOutcome {
    pub fn value(&self) -> Option<&AbGroup> {
        self.verdict.middle()
    }
}

fn exactness(homs: &[Option<GroupHom>]) -> ExactnessReport {
    let junctions: Vec<Junction> = homs
        .windows(2)
        .enumerate()
        .filter_map(|(i, w)| match (&w[0], &w[1]) {
            (Some(f), Some(g)) => Some(exact_at(f, g, i + 1)),
            _ => None,
        })
        .collect();
    ExactnessReport { junctions }
}

fn require_exact(report: &ExactnessReport) -> Result<(), ScenarioError> {
    match report.first_failure() {
        Some(j) => Err(ScenarioError::Inexact {
            term: j.term,
            detail: serde_json::to_string(&j.failure).unwrap_or_default(),
        }),
        None => Ok(()),
    }
}

/// Solves for the unknown term: it is an extension of `ker(next)` by
/// `coker(prev)`. Known junctions are checked before solving and the
/// completed chain is checked again when the middle is determined.
pub fn run_scenario(s: &Scenario) -> Result<ScenarioOutcome> {
    let n = s.terms.len();
    let unknowns: Vec<usize> = (0..n)
        .filter(|&i| matches!(s.terms[i], Term::Unknown { .. }))
        .collect();
    if unknowns.len() != 1 {
        return Err(ScenarioError::UnknownCount(unknowns.len()).into());
    }
    let u = unknowns[0];
    if s.maps.len() + 1 != n {
        return Err(ScenarioError::MapCount {
            terms: n,
            expected: n.saturating_sub(1),
            found: s.maps.len(),
        }
        .into());
    }
    let groups: Vec<Option<AbGroup>> = s
        .terms
        .iter()
        .map(|t| match t {
            Term::Known { group, .. } => AbGroup::from_json(group).map(Some),
            Term::Unknown { .. } => Ok(None),
        })
        .collect::<Result<_, _>>()?;
    let mut homs: Vec<Option<GroupHom>> = Vec::with_capacity(n.saturating_sub(1));
    for (i, m) in s.maps.iter().enumerate() {
        let Some(rows) = m else {
            homs.push(None);
            continue;
        };
        let (Some(a), Some(b)) = (&groups[i], &groups[i + 1]) else {
            return Err(ScenarioError::UnknownMapGiven(i).into());
        };
        let h = GroupHom::from_rows(a.clone(), b.clone(), rows).map_err(|e| ScenarioError::BadMap {
            index: i,
            message: e.to_string(),
        })?;
        homs.push(Some(h));
    }
    let precheck = exactness(&homs);
    require_exact(&precheck)?;

    let trivial = AbGroup::trivial();
    let sub: Quotient = match u {
        0 => return Err(ScenarioError::Underdetermined("no term before it".into()).into()),
        _ => {
            let before = groups[u - 1].as_ref().expect("single unknown");
            if before.is_trivial() {
                cokernel(&GroupHom::zero(&trivial, before))
            } else if u >= 2 && homs[u - 2].is_some() {
                cokernel(homs[u - 2].as_ref().unwrap())
            } else {
                return Err(ScenarioError::Underdetermined(
                    "the map into the preceding term is missing".into(),
                )
                .into());
            }
        }
    };
    let quot: Subgroup = if u + 1 >= n {
        return Err(ScenarioError::Underdetermined("no term after it".into()).into());
    } else {
        let after = groups[u + 1].as_ref().expect("single unknown");
        if after.is_trivial() {
            kernel(&GroupHom::zero(after, &trivial))
        } else if u + 2 < n && homs[u + 1].is_some() {
            kernel(homs[u + 1].as_ref().unwrap())
        } else {
            return Err(ScenarioError::Underdetermined(
                "the map out of the following term is missing".into(),
            )
            .into());
        }
    };

    let verdict = extension_verdict(&sub.group, &quot.group, s.witness.as_ref())
        .map_err(ScenarioError::BadWitness)?;

    let postcheck = match verdict.middle() {
        Some(_) => {
            let ds = crate::abgrp::direct_sum(&sub.group, &quot.group);
            let x = ds.group.clone();
            let into = GroupHom::new(
                sub.projection.source().clone(),
                x.clone(),
                ds.inj[0].matrix().mul(sub.projection.matrix()),
            )?;
            let out = GroupHom::new(
                x,
                quot.inclusion.target().clone(),
                quot.inclusion.matrix().mul(ds.proj[1].matrix()),
            )?;
            let mut full = homs.clone();
            full[u - 1] = Some(into);
            full[u] = Some(out);
            let report = exactness(&full);
            require_exact(&report)?;
            Some(report)
        }
        None => None,
    };

    let mut lower_bounds = Vec::new();
    for lb in &s.lower_bounds {
        let h = homs
            .get(lb.map)
            .and_then(Option::as_ref)
            .ok_or_else(|| ScenarioError::LowerBound(lb.label.clone()))?;
        let group = cokernel(h).group;
        let matches_expected = match &lb.expected {
            Some(e) => Some(group.isomorphic(&AbGroup::from_json(e)?)),
            None => None,
        };
        lower_bounds.push(LowerBound {
            label: lb.label.clone(),
            group,
            matches_expected,
        });
    }
    let matches_expected = match (&s.expected, verdict.middle()) {
        (Some(e), Some(m)) => Some(m.isomorphic(&AbGroup::from_json(e)?)),
        (Some(_), None) => Some(false),
        _ => None,
    };

    Ok(ScenarioOutcome {
        name: s.name.clone(),
        unknown: s.terms[u].label().to_string(),
        sub: sub.group,
        quotient: quot.group,
        verdict,
        precheck,
        postcheck,
        lower_bounds,
        matches_expected,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum H1Mode {
    TrivialAction,
    Reduced,
}

/// The `H¹` correction term of a space with finitely many components.
///
/// With trivial action it is `(Z/2)^components`. For reduced spaces it is
/// the invariant integer functions modulo `f + f∘λ`, i.e. `Ĥ⁰` of the
/// permutation module on the components.
pub fn h1_extra_junk(x: &SpecWithAction, mode: H1Mode) -> AbGroup {
    match mode {
        H1Mode::TrivialAction => AbGroup::from_orders(&vec![2; x.len()]),
        H1Mode::Reduced => {
            let n = x.len();
            let mut rows = vec![vec![0; n]; n];
            for (c, &d) in x.action.iter().enumerate() {
                rows[d][c] = 1;
            }
            let module = AbGroup::free(n)
                .with_action(Matrix::from_rows(&rows, n))
                .expect("an involutive permutation");
            tate_cohomology(&module).h0.group().clone()
        }
    }
}

/// `Br' = ker(Br^p → H¹)`.
pub fn br_prime_kernel(brp: &AbGroup, h1_map: &GroupHom) -> Result<Subgroup> {
    if h1_map.source() != brp {
        return Err(ScenarioError::SourceMismatch.into());
    }
    Ok(kernel(h1_map))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SaltmanMode {
    TrivialAction,
    Galois,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaltmanVerdict {
    pub holds: bool,
    /// `2·cls` or `norm(cls)`.
    pub certificate: Element,
}

/// Whether a class admits an involution-compatible representative:
/// `2·cls = 0` for trivial action, `norm(cls) = 0` in the Galois case.
pub fn saltman_check(
    b: &AbGroup,
    cls: &[i64],
    mode: SaltmanMode,
    norm: Option<&GroupHom>,
) -> Result<SaltmanVerdict> {
    if b.check_element(cls).is_err() {
        return Err(ScenarioError::ClassNotInGroup(cls.to_vec()).into());
    }
    let (certificate, target) = match mode {
        SaltmanMode::TrivialAction => (b.scale(2, cls), b),
        SaltmanMode::Galois => {
            let nu = norm.ok_or(ScenarioError::MissingNorm)?;
            if nu.source() != b {
                return Err(ScenarioError::SourceMismatch.into());
            }
            (nu.apply(cls), nu.target())
        }
    };
    Ok(SaltmanVerdict {
        holds: target.is_zero(&certificate),
        certificate,
    })
}
