//! Finitely generated abelian groups carrying an involution.
//!
//! A group is stored in invariant-factor normal form
//! `Z/d_1 ⊕ … ⊕ Z/d_k ⊕ Z^r` with `d_1 | d_2 | … | d_k`, torsion generators
//! first. Elements are integer coordinate vectors on those generators,
//! reduced modulo the `d_i`. Homomorphisms are integer matrices between
//! canonical generators; every constructed subgroup or quotient comes back
//! renormalized together with the map relating it to its parent.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{integer_kernel, smith_normal_form, solve_with, Matrix, SmithForm};

pub type Element = Vec<i64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("invariant factors {0:?} must be integers >= 2 forming a divisibility chain")]
    InvalidInvariantFactors(Vec<i64>),
    #[error("action matrix is {rows}x{cols}, expected {n}x{n}")]
    ActionShape { rows: usize, cols: usize, n: usize },
    #[error("action sends the relation of generator {generator} outside the relation lattice")]
    ActionBreaksRelation { generator: usize },
    #[error("action does not square to the identity (fails on generator {generator})")]
    ActionNotInvolution { generator: usize },
    #[error("homomorphism matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    HomShape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error(
        "ill-defined homomorphism: generator {generator} has order {order} but its image {image:?} is not killed by {order}"
    )]
    IllDefined {
        generator: usize,
        order: i64,
        image: Element,
    },
    #[error("group is infinite (free rank {0}); element enumeration needs a finite group")]
    Infinite(usize),
    #[error("chain is not composable: map {0} does not land in the source of map {next}", next = .0 + 1)]
    NotComposable(usize),
    #[error("element {element:?} does not have {expected} coordinates")]
    ElementShape { element: Element, expected: usize },
    #[error("homomorphism is not equivariant for the two actions")]
    NotEquivariant,
}

/// A finitely generated abelian group in invariant-factor form with an
/// order-at-most-2 automorphism (identity unless set).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AbGroup {
    torsion: Vec<i64>,
    rank: usize,
    action: Matrix,
}

impl std::fmt::Debug for AbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self)?;
        if !self.has_trivial_action() {
            write!(f, " with action {:?}", self.action)?;
        }
        Ok(())
    }
}

impl std::fmt::Display for AbGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl AbGroup {
    pub fn new(torsion: Vec<i64>, rank: usize) -> Result<Self, GroupError> {
        let chain_ok = torsion.iter().all(|&d| d >= 2)
            && torsion.windows(2).all(|w| w[1] % w[0] == 0);
        if !chain_ok {
            return Err(GroupError::InvalidInvariantFactors(torsion));
        }
        let n = torsion.len() + rank;
        Ok(Self {
            torsion,
            rank,
            action: Matrix::identity(n),
        })
    }

    pub fn trivial() -> Self {
        Self::new(vec![], 0).unwrap()
    }

    /// `Z/n`; `n = 1` gives the trivial group and `n = 0` gives `Z`.
    pub fn cyclic(n: i64) -> Self {
        match n.abs() {
            0 => Self::free(1),
            1 => Self::trivial(),
            m => Self::new(vec![m], 0).unwrap(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self::new(vec![], rank).unwrap()
    }

    /// The group `⊕ Z/n_i` for arbitrary non-negative orders, renormalized.
    pub fn from_orders(orders: &[i64]) -> Self {
        let relations = Matrix::diagonal(orders);
        normalize(orders.len(), &relations, None).group
    }

    pub fn with_action(mut self, action: Matrix) -> Result<Self, GroupError> {
        let n = self.ngens();
        if action.rows() != n || action.cols() != n {
            return Err(GroupError::ActionShape {
                rows: action.rows(),
                cols: action.cols(),
                n,
            });
        }
        for (i, &d) in self.torsion.iter().enumerate() {
            let image: Element = action.col(i).iter().map(|x| x * d).collect();
            if !self.is_zero(&image) {
                return Err(GroupError::ActionBreaksRelation { generator: i });
            }
        }
        let square = action.mul(&action);
        for j in 0..n {
            let mut diff = square.col(j);
            diff[j] -= 1;
            if !self.is_zero(&diff) {
                return Err(GroupError::ActionNotInvolution { generator: j });
            }
        }
        self.action = self.reduce_matrix(&action);
        Ok(self)
    }

    /// The same group with the action `x ↦ -x`.
    pub fn with_sign_action(self) -> Self {
        let n = self.ngens();
        self.with_action(Matrix::identity(n).scale(-1))
            .expect("negation is always an involution")
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn action(&self) -> &Matrix {
        &self.action
    }

    pub fn ngens(&self) -> usize {
        self.torsion.len() + self.rank
    }

    pub fn is_trivial(&self) -> bool {
        self.ngens() == 0
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn has_trivial_action(&self) -> bool {
        self.action == Matrix::identity(self.ngens())
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<u64> {
        self.is_finite()
            .then(|| self.torsion.iter().map(|&d| d as u64).product())
    }

    /// The exponent of the torsion part (1 for torsion-free groups).
    pub fn exponent(&self) -> i64 {
        self.torsion.last().copied().unwrap_or(1)
    }

    /// Same invariant factors and rank; actions are not compared.
    pub fn isomorphic(&self, other: &AbGroup) -> bool {
        self.torsion == other.torsion && self.rank == other.rank
    }

    /// Relation order of generator `i` (0 for free generators).
    pub fn relation_order(&self, i: usize) -> i64 {
        self.torsion.get(i).copied().unwrap_or(0)
    }

    pub fn zero(&self) -> Element {
        vec![0; self.ngens()]
    }

    pub fn generator(&self, i: usize) -> Element {
        let mut e = self.zero();
        e[i] = 1;
        e
    }

    pub fn check_element(&self, v: &[i64]) -> Result<(), GroupError> {
        if v.len() != self.ngens() {
            return Err(GroupError::ElementShape {
                element: v.to_vec(),
                expected: self.ngens(),
            });
        }
        Ok(())
    }

    pub fn reduce(&self, v: &[i64]) -> Element {
        debug_assert_eq!(v.len(), self.ngens());
        v.iter()
            .enumerate()
            .map(|(i, &x)| match self.torsion.get(i) {
                Some(&d) => x.rem_euclid(d),
                None => x,
            })
            .collect()
    }

    fn reduce_matrix(&self, m: &Matrix) -> Matrix {
        let cols: Vec<Element> = (0..m.cols()).map(|j| self.reduce(&m.col(j))).collect();
        Matrix::from_cols(&cols, self.ngens())
    }

    pub fn is_zero(&self, v: &[i64]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &[i64], b: &[i64]) -> Element {
        let s: Element = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.reduce(&s)
    }

    pub fn neg(&self, a: &[i64]) -> Element {
        let s: Element = a.iter().map(|x| -x).collect();
        self.reduce(&s)
    }

    pub fn scale(&self, k: i64, a: &[i64]) -> Element {
        let s: Element = a.iter().map(|x| k * x).collect();
        self.reduce(&s)
    }

    pub fn act(&self, v: &[i64]) -> Element {
        self.reduce(&self.action.mul_vec(v))
    }

    /// Order of an element, `None` if it has infinite order.
    pub fn element_order(&self, v: &[i64]) -> Option<i64> {
        let v = self.reduce(v);
        if v[self.torsion.len()..].iter().any(|&x| x != 0) {
            return None;
        }
        Some(
            v.iter()
                .zip(&self.torsion)
                .map(|(&x, &d)| d / gcd(x, d))
                .fold(1, lcm),
        )
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<Element>, GroupError> {
        if !self.is_finite() {
            return Err(GroupError::Infinite(self.rank));
        }
        let mut out = vec![vec![]];
        for &d in &self.torsion {
            out = out
                .into_iter()
                .flat_map(|prefix: Element| {
                    (0..d).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        Ok(out)
    }

    /// Diagonal relation matrix: one column per torsion generator.
    pub fn relation_matrix(&self) -> Matrix {
        let n = self.ngens();
        let mut m = Matrix::zeros(n, self.torsion.len());
        for (i, &d) in self.torsion.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// The action as an endomorphism.
    pub fn action_hom(&self) -> GroupHom {
        GroupHom::new_unchecked(self.clone(), self.clone(), self.action.clone())
    }

    pub fn identity_hom(&self) -> GroupHom {
        GroupHom::new_unchecked(self.clone(), self.clone(), Matrix::identity(self.ngens()))
    }

    /// The endomorphism `1 + λ`.
    pub fn norm_hom(&self) -> GroupHom {
        let m = Matrix::identity(self.ngens()).add(&self.action);
        GroupHom::new_unchecked(self.clone(), self.clone(), m)
    }

    /// The endomorphism `1 - λ`.
    pub fn coboundary_hom(&self) -> GroupHom {
        let m = Matrix::identity(self.ngens()).sub(&self.action);
        GroupHom::new_unchecked(self.clone(), self.clone(), m)
    }

    pub fn to_json(&self) -> GroupJson {
        GroupJson {
            torsion: self.torsion.clone(),
            rank: self.rank,
            action: (!self.has_trivial_action()).then(|| self.action.to_rows()),
        }
    }

    pub fn from_json(j: &GroupJson) -> Result<Self, GroupError> {
        let g = Self::new(j.torsion.clone(), j.rank)?;
        match &j.action {
            None => Ok(g),
            Some(rows) => {
                let n = g.ngens();
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(GroupError::ActionShape {
                        rows: rows.len(),
                        cols: rows.first().map_or(0, Vec::len),
                        n,
                    });
                }
                g.with_action(Matrix::from_rows(rows, n))
            }
        }
    }
}

impl Serialize for AbGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// JSON form `{"torsion":[..],"rank":r,"action":[[..]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    #[serde(default)]
    pub torsion: Vec<i64>,
    #[serde(default)]
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<Vec<i64>>>,
}

/// JSON form `{"source":..,"target":..,"matrix":[[..]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomJson {
    pub source: GroupJson,
    pub target: GroupJson,
    pub matrix: Vec<Vec<i64>>,
}

/// A homomorphism between two groups, as a matrix on canonical generators
/// (target generators by source generators).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: AbGroup,
    target: AbGroup,
    matrix: Matrix,
}

impl GroupHom {
    pub fn new(source: AbGroup, target: AbGroup, matrix: Matrix) -> Result<Self, GroupError> {
        if matrix.rows() != target.ngens() || matrix.cols() != source.ngens() {
            return Err(GroupError::HomShape {
                rows: matrix.rows(),
                cols: matrix.cols(),
                expected_rows: target.ngens(),
                expected_cols: source.ngens(),
            });
        }
        for (i, &d) in source.torsion.iter().enumerate() {
            let image = matrix.col(i);
            let killed: Element = image.iter().map(|x| x * d).collect();
            if !target.is_zero(&killed) {
                return Err(GroupError::IllDefined {
                    generator: i,
                    order: d,
                    image,
                });
            }
        }
        Ok(Self::new_unchecked(source, target, matrix))
    }

    pub(crate) fn new_unchecked(source: AbGroup, target: AbGroup, matrix: Matrix) -> Self {
        let matrix = target.reduce_matrix(&matrix);
        Self {
            source,
            target,
            matrix,
        }
    }

    pub fn from_rows(source: AbGroup, target: AbGroup, rows: &[Vec<i64>]) -> Result<Self, GroupError> {
        let cols = source.ngens();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(GroupError::HomShape {
                rows: rows.len(),
                cols: rows.iter().map(Vec::len).max().unwrap_or(0),
                expected_rows: target.ngens(),
                expected_cols: cols,
            });
        }
        Self::new(source, target, Matrix::from_rows(rows, cols))
    }

    pub fn zero(source: &AbGroup, target: &AbGroup) -> Self {
        Self::new_unchecked(
            source.clone(),
            target.clone(),
            Matrix::zeros(target.ngens(), source.ngens()),
        )
    }

    pub fn source(&self) -> &AbGroup {
        &self.source
    }

    pub fn target(&self) -> &AbGroup {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[i64]) -> Element {
        self.target.reduce(&self.matrix.mul_vec(v))
    }

    pub fn is_zero(&self) -> bool {
        (0..self.matrix.cols()).all(|j| self.target.is_zero(&self.matrix.col(j)))
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &GroupHom) -> Result<GroupHom, GroupError> {
        if !self.target.isomorphic(&other.source) {
            return Err(GroupError::NotComposable(0));
        }
        Ok(GroupHom::new_unchecked(
            self.source.clone(),
            other.target.clone(),
            other.matrix.mul(&self.matrix),
        ))
    }

    /// Whether the matrix commutes with the two actions modulo relations.
    pub fn is_equivariant(&self) -> bool {
        let lhs = self.matrix.mul(self.source.action());
        let rhs = self.target.action().mul(&self.matrix);
        let diff = lhs.sub(&rhs);
        (0..diff.cols()).all(|j| self.target.is_zero(&diff.col(j)))
    }

    /// The same matrix between the same groups with their actions replaced.
    pub fn retarget(&self, source: AbGroup, target: AbGroup) -> Result<GroupHom, GroupError> {
        GroupHom::new(source, target, self.matrix.clone())
    }

    pub fn to_json(&self) -> HomJson {
        HomJson {
            source: self.source.to_json(),
            target: self.target.to_json(),
            matrix: self.matrix.to_rows(),
        }
    }

    pub fn from_json(j: &HomJson) -> Result<Self, GroupError> {
        let source = AbGroup::from_json(&j.source)?;
        let target = AbGroup::from_json(&j.target)?;
        GroupHom::from_rows(source, target, &j.matrix)
    }
}

/// Outcome of renormalizing a presentation `Z^m / span(relations)`.
#[derive(Clone, Debug)]
pub(crate) struct Normalized {
    pub group: AbGroup,
    /// Old coordinates to new (`ngens_new × m`).
    pub to_normal: Matrix,
    /// New generators as old coordinates (`m × ngens_new`).
    pub from_normal: Matrix,
}

/// Renormalizes the presentation with `ngens` generators and relation
/// columns `relations`; the action, when given, is an endomorphism of
/// `Z^ngens` preserving the relation lattice.
pub(crate) fn normalize(ngens: usize, relations: &Matrix, action: Option<&Matrix>) -> Normalized {
    debug_assert_eq!(relations.rows(), ngens);
    let snf = smith_normal_form(relations);
    let d = |i: usize| snf.diagonal.get(i).copied().unwrap_or(0);
    let kept: Vec<usize> = (0..ngens).filter(|&i| d(i) != 1).collect();
    let torsion: Vec<i64> = kept.iter().map(|&i| d(i)).filter(|&x| x != 0).collect();
    let rank = kept.len() - torsion.len();
    let mut group = AbGroup::new(torsion, rank).expect("Smith diagonal is a divisibility chain");
    let to_normal = group.reduce_matrix(&snf.left.select_rows(&kept));
    let from_normal = snf.left_inv.select_cols(&kept);
    if let Some(a) = action {
        let induced = to_normal.mul(a).mul(&from_normal);
        group = group
            .with_action(induced)
            .expect("action preserving the relations descends to an involution");
    }
    Normalized {
        group,
        to_normal,
        from_normal,
    }
}

/// A subgroup of `ambient`, renormalized, with its inclusion map.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub group: AbGroup,
    pub inclusion: GroupHom,
    gens: Matrix,
    to_normal: Matrix,
    membership: SmithForm,
}

impl Subgroup {
    /// Subgroup of `ambient` generated by the columns of `gens`.
    pub fn generated_by(ambient: &AbGroup, gens: &Matrix) -> Subgroup {
        assert_eq!(gens.rows(), ambient.ngens(), "generator dimension mismatch");
        let g = gens.cols();
        let system = gens.hcat(&ambient.relation_matrix());
        let kernel = integer_kernel(&system);
        let idx: Vec<usize> = (0..g).collect();
        let relations = kernel.select_rows(&idx);
        let norm = normalize(g, &relations, None);
        let incl_matrix = gens.mul(&norm.from_normal);
        let membership = smith_normal_form(&system);
        let mut sub = Subgroup {
            group: norm.group.clone(),
            inclusion: GroupHom::new_unchecked(norm.group, ambient.clone(), incl_matrix),
            gens: gens.clone(),
            to_normal: norm.to_normal,
            membership,
        };
        sub.restrict_action(ambient);
        sub
    }

    /// Subgroup coordinates of an ambient element, `None` if it is not in
    /// the subgroup.
    pub fn coords_of(&self, v: &[i64]) -> Option<Element> {
        let x = solve_with(&self.membership, v)?;
        let c = &x[..self.gens.cols()];
        Some(self.group.reduce(&self.to_normal.mul_vec(c)))
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        solve_with(&self.membership, v).is_some()
    }

    /// Whether the subgroup is stable under the ambient action.
    pub fn is_stable(&self) -> bool {
        let ambient = self.inclusion.target();
        (0..self.group.ngens()).all(|j| {
            let image = ambient.act(&self.inclusion.matrix().col(j));
            self.contains(&image)
        })
    }

    fn restrict_action(&mut self, ambient: &AbGroup) {
        if ambient.has_trivial_action() {
            return;
        }
        let n = self.group.ngens();
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let image = ambient.act(&self.inclusion.matrix().col(j));
            match self.coords_of(&image) {
                Some(c) => cols.push(c),
                None => return,
            }
        }
        let action = Matrix::from_cols(&cols, n);
        let group = self
            .group
            .clone()
            .with_action(action)
            .expect("restriction of an involution is an involution");
        self.group = group.clone();
        self.inclusion = GroupHom::new_unchecked(group, ambient.clone(), self.inclusion.matrix.clone());
    }
}

/// A quotient of a group with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: AbGroup,
    pub projection: GroupHom,
    /// Lifts of the quotient generators, as columns in the parent.
    pub lifts: Matrix,
}

impl Quotient {
    /// `ambient / span(columns of gens)`. The action descends when the
    /// killed subgroup is stable.
    pub fn by(ambient: &AbGroup, gens: &Matrix) -> Quotient {
        let relations = ambient.relation_matrix().hcat(gens);
        let stable = ambient.has_trivial_action()
            || Subgroup::generated_by(ambient, gens).is_stable();
        let action = (!ambient.has_trivial_action() && stable).then(|| ambient.action().clone());
        let norm = normalize(ambient.ngens(), &relations, action.as_ref());
        Quotient {
            projection: GroupHom::new_unchecked(ambient.clone(), norm.group.clone(), norm.to_normal),
            group: norm.group,
            lifts: norm.from_normal,
        }
    }

    /// Lift of a quotient element to the parent.
    pub fn lift(&self, v: &[i64]) -> Element {
        let parent = self.projection.source();
        parent.reduce(&self.lifts.mul_vec(v))
    }
}

pub fn image(h: &GroupHom) -> Subgroup {
    Subgroup::generated_by(&h.target, &h.matrix)
}

pub fn kernel(h: &GroupHom) -> Subgroup {
    let system = h.matrix.hcat(&h.target.relation_matrix());
    let basis = integer_kernel(&system);
    let idx: Vec<usize> = (0..h.source.ngens()).collect();
    let gens = basis.select_rows(&idx);
    Subgroup::generated_by(&h.source, &gens)
}

pub fn cokernel(h: &GroupHom) -> Quotient {
    Quotient::by(&h.target, &h.matrix)
}

/// `ker(g) / im(f)` for `A --f--> B --g--> C` with `g ∘ f = 0`.
#[derive(Clone, Debug)]
pub struct Homology {
    pub kernel: Subgroup,
    pub quotient: Quotient,
}

impl Homology {
    pub fn group(&self) -> &AbGroup {
        &self.quotient.group
    }

    /// Class of an element of the middle group lying in the kernel.
    pub fn class_of(&self, v: &[i64]) -> Option<Element> {
        let k = self.kernel.coords_of(v)?;
        Some(self.quotient.projection.apply(&k))
    }

    /// A middle-group representative of a homology class.
    pub fn representative(&self, class: &[i64]) -> Element {
        let k = self.quotient.lift(class);
        self.kernel.inclusion.apply(&k)
    }
}

pub fn homology(f: &GroupHom, g: &GroupHom) -> Result<Homology, GroupError> {
    if !f.target.isomorphic(&g.source) {
        return Err(GroupError::NotComposable(0));
    }
    let ker = kernel(g);
    let mut cols = Vec::with_capacity(f.source.ngens());
    for j in 0..f.source.ngens() {
        let c = ker
            .coords_of(&f.matrix.col(j))
            .ok_or(GroupError::NotComposable(0))?;
        cols.push(c);
    }
    let into_kernel = Matrix::from_cols(&cols, ker.group.ngens());
    let quotient = Quotient::by(&ker.group, &into_kernel);
    Ok(Homology {
        kernel: ker,
        quotient,
    })
}

/// Fixed points `{m : λm = m}` and twisted fixed points `{m : λm = -m}`.
#[derive(Clone, Debug)]
pub struct FixedPoints {
    pub fixed: Subgroup,
    pub twisted: Subgroup,
}

pub fn fixed_and_twisted(m: &AbGroup) -> FixedPoints {
    let id = Matrix::identity(m.ngens());
    let minus = GroupHom::new_unchecked(m.clone(), m.clone(), m.action().sub(&id));
    let plus = GroupHom::new_unchecked(m.clone(), m.clone(), m.action().add(&id));
    FixedPoints {
        fixed: kernel(&minus),
        twisted: kernel(&plus),
    }
}

/// Tate cohomology of the cyclic group of order two acting through `λ`.
#[derive(Clone, Debug)]
pub struct TateCohomology {
    /// `M^λ / {m + λm}`
    pub h0: Homology,
    /// `ker(1 + λ) / {m - λm}`
    pub h1: Homology,
}

pub fn tate_cohomology(m: &AbGroup) -> TateCohomology {
    let norm = m.norm_hom();
    let cob = m.coboundary_hom();
    let h0 = homology(&norm, &cob).expect("(1-λ)(1+λ) = 0");
    let h1 = homology(&cob, &norm).expect("(1+λ)(1-λ) = 0");
    TateCohomology { h0, h1 }
}

/// Direct sum with its injections and projections.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub group: AbGroup,
    pub inj: [GroupHom; 2],
    pub proj: [GroupHom; 2],
}

pub fn direct_sum(a: &AbGroup, b: &AbGroup) -> DirectSum {
    let (na, nb) = (a.ngens(), b.ngens());
    let relations = a.relation_matrix().block_diag(&b.relation_matrix());
    let action = a.action().block_diag(b.action());
    let trivial = a.has_trivial_action() && b.has_trivial_action();
    let norm = normalize(na + nb, &relations, (!trivial).then_some(&action));
    let g = norm.group.clone();
    let first: Vec<usize> = (0..na).collect();
    let second: Vec<usize> = (na..na + nb).collect();
    let inj_a = norm.to_normal.select_cols(&first);
    let inj_b = norm.to_normal.select_cols(&second);
    let proj_a = norm.from_normal.select_rows(&first);
    let proj_b = norm.from_normal.select_rows(&second);
    DirectSum {
        inj: [
            GroupHom::new_unchecked(a.clone(), g.clone(), inj_a),
            GroupHom::new_unchecked(b.clone(), g.clone(), inj_b),
        ],
        proj: [
            GroupHom::new_unchecked(g.clone(), a.clone(), proj_a),
            GroupHom::new_unchecked(g.clone(), b.clone(), proj_b),
        ],
        group: g,
    }
}

/// Why a junction of a chain fails to be exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExactnessFailure {
    /// `g(f(x)) != 0` for this source element `x`.
    NotAComplex { element: Element },
    /// This element of the middle term is killed by `g` but is not in the
    /// image of `f`.
    KernelNotInImage { element: Element },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Junction {
    /// Index of the middle term (terms are numbered from 0 at the source of
    /// the first map).
    pub term: usize,
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<ExactnessFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactnessReport {
    pub junctions: Vec<Junction>,
}

impl ExactnessReport {
    pub fn all_exact(&self) -> bool {
        self.junctions.iter().all(|j| j.exact)
    }

    pub fn first_failure(&self) -> Option<&Junction> {
        self.junctions.iter().find(|j| !j.exact)
    }
}

/// Checks `im(f) = ker(g)` at every interior term of the chain.
pub fn exact_at(f: &GroupHom, g: &GroupHom, term: usize) -> Junction {
    for j in 0..f.source.ngens() {
        let x = f.source.generator(j);
        let gx = g.apply(&f.apply(&x));
        if !g.target.is_zero(&gx) {
            return Junction {
                term,
                exact: false,
                failure: Some(ExactnessFailure::NotAComplex { element: x }),
            };
        }
    }
    let ker = kernel(g);
    let im = image(f);
    for j in 0..ker.group.ngens() {
        let k = ker.inclusion.matrix().col(j);
        if !im.contains(&k) {
            return Junction {
                term,
                exact: false,
                failure: Some(ExactnessFailure::KernelNotInImage {
                    element: g.source.reduce(&k),
                }),
            };
        }
    }
    Junction {
        term,
        exact: true,
        failure: None,
    }
}

pub fn check_exact(chain: &[GroupHom]) -> Result<ExactnessReport, GroupError> {
    for (i, w) in chain.windows(2).enumerate() {
        if !w[0].target.isomorphic(&w[1].source) {
            return Err(GroupError::NotComposable(i));
        }
    }
    let junctions = chain
        .windows(2)
        .enumerate()
        .map(|(i, w)| exact_at(&w[0], &w[1], i + 1))
        .collect();
    Ok(ExactnessReport { junctions })
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        (a / gcd(a, b) * b).abs()
    }
}
