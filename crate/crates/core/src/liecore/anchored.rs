use std::fmt;

use super::lie::LieAlgebra;
use crate::algebras::{flatten, unflatten, AlgebraPresentation};
use crate::error::{Error, Result};
use crate::exactla::{vec_axpy, Matrix, Scalar, Subspace};
use crate::report::Report;

/// A Lie algebra `L` with a linear anchor `ω: L → End(A)`, stored as the
/// `dim_A² × dim_L` matrix of flattened images.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AnchoredLieAlgebra {
    lie: LieAlgebra,
    base: AlgebraPresentation,
    anchor: Matrix,
}

impl fmt::Debug for AnchoredLieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Anchored({:?} over {:?})", self.lie, self.base)
    }
}

impl AnchoredLieAlgebra {
    /// Checks the anchor's shape only; see [`validate`](Self::validate).
    pub fn new(lie: LieAlgebra, base: AlgebraPresentation, anchor: Matrix) -> Result<Self> {
        let n = base.dim();
        if anchor.rows() != n * n || anchor.cols() != lie.dim() {
            return Err(Error::DimensionMismatch {
                op: "AnchoredLieAlgebra::new (anchor shape)",
                expected: n * n * lie.dim(),
                found: anchor.rows() * anchor.cols(),
            });
        }
        Ok(AnchoredLieAlgebra { lie, base, anchor })
    }

    pub fn zero_anchor(lie: LieAlgebra, base: AlgebraPresentation) -> Self {
        let n = base.dim();
        let anchor = Matrix::zeros(n * n, lie.dim());
        AnchoredLieAlgebra { lie, base, anchor }
    }

    /// `A` as a Lie algebra under the commutator, anchored by `a ↦ [a, −]`.
    pub fn commutator_anchor(a: &AlgebraPresentation) -> Self {
        let lie = LieAlgebra::commutator_algebra(a);
        let cols: Vec<Vec<Scalar>> = (0..a.dim())
            .map(|i| {
                let e = a.basis_vector(i);
                flatten(&a.left_multiplication(&e).sub(&a.right_multiplication(&e)))
            })
            .collect();
        let anchor = Matrix::from_columns(a.dim() * a.dim(), &cols);
        AnchoredLieAlgebra {
            lie,
            base: a.clone(),
            anchor,
        }
    }

    /// `(A, Der(A), id)`.
    pub fn derivations(a: &AlgebraPresentation) -> Self {
        let ders = a.derivation_space();
        AnchoredLieAlgebra {
            lie: LieAlgebra::of_derivations(&ders),
            base: a.clone(),
            anchor: ders.inclusion(),
        }
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn base(&self) -> &AlgebraPresentation {
        &self.base
    }

    pub fn anchor(&self) -> &Matrix {
        &self.anchor
    }

    pub fn dim(&self) -> usize {
        self.lie.dim()
    }

    /// `ω(e_i)` as an endomorphism of the base.
    pub fn omega(&self, i: usize) -> Matrix {
        unflatten(self.base.dim(), &self.anchor.column(i))
    }

    pub fn omega_of(&self, x: &[Scalar]) -> Matrix {
        unflatten(self.base.dim(), &self.anchor.apply(x))
    }

    pub fn kernel_of_anchor(&self) -> Subspace {
        self.anchor.nullspace()
    }

    pub fn is_zero_anchor(&self) -> bool {
        self.anchor.is_zero()
    }

    /// Lie axioms, Leibniz for every `ω(e_i)`, and `ω([X,Y]) = [ω(X), ω(Y)]`.
    pub fn validate(&self) -> Report {
        let mut report = self.lie.validate();
        let names = self.lie.basis_names();
        let mut der = Vec::new();
        for i in 0..self.dim() {
            for v in self.base.leibniz_violations(&self.omega(i)) {
                der.push(format!("ω({}) {v}", names[i]));
            }
        }
        report.axiom("anchor_derivation", der);

        let mut morph = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let lhs = self.omega_of(self.lie.basis_bracket(i, j));
                let rhs = self.omega(i).commutator(&self.omega(j));
                if lhs != rhs {
                    morph.push(format!(
                        "pair ({},{}): ω([X,Y]) ≠ [ω(X),ω(Y)] (differ by {:?})",
                        names[i],
                        names[j],
                        lhs.sub(&rhs)
                    ));
                }
            }
        }
        report.axiom("anchor_morphism", morph);
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().all_passed()
    }

    /// The anchored sub-Lie algebra on `sub`.
    pub fn restrict(&self, sub: &Subspace, basis_names: Vec<String>) -> Result<AnchoredLieAlgebra> {
        let lie = self.lie.restrict(sub, basis_names)?;
        let anchor = self.anchor.mul(&sub.basis_matrix());
        AnchoredLieAlgebra::new(lie, self.base.clone(), anchor)
    }

    pub fn with_lie_name(mut self, name: impl Into<String>) -> Self {
        self.lie = self.lie.with_name(name);
        self
    }
}

/// An anchored Lie algebra over a commutative base with an `A`-module structure
/// on `L`; `action[(a·dim_L + x)·dim_L + y]` is the coefficient of `e_y` in `a·e_x`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LieRinehartAlgebra {
    anchored: AnchoredLieAlgebra,
    action: Vec<Scalar>,
}

impl fmt::Debug for LieRinehartAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieRinehart({:?} over {:?})", self.anchored.lie, self.anchored.base)
    }
}

impl LieRinehartAlgebra {
    /// Checks the action's arity only.
    pub fn new(anchored: AnchoredLieAlgebra, action: Vec<Scalar>) -> Result<Self> {
        let (na, nl) = (anchored.base.dim(), anchored.dim());
        if action.len() != na * nl * nl {
            return Err(Error::DimensionMismatch {
                op: "LieRinehartAlgebra::new (action table)",
                expected: na * nl * nl,
                found: action.len(),
            });
        }
        Ok(LieRinehartAlgebra { anchored, action })
    }

    /// `(A, Der(A), id)` with `(a·δ)(b) = a·δ(b)`.
    pub fn derivations(a: &AlgebraPresentation) -> Result<Self> {
        if !a.is_commutative() {
            return Err(Error::NonCommutativeBase(a.name().to_string()));
        }
        let ders = a.derivation_space();
        let nl = ders.dim();
        let mut action = Vec::with_capacity(a.dim() * nl * nl);
        for i in 0..a.dim() {
            for x in 0..nl {
                action.extend(ders.action_coordinates(i, x)?);
            }
        }
        LieRinehartAlgebra::new(AnchoredLieAlgebra::derivations(a), action)
    }

    /// A Lie algebra over the ground field: zero anchor, scalar action.
    pub fn over_ground_field(lie: LieAlgebra) -> Self {
        let base = AlgebraPresentation::ground_field();
        let nl = lie.dim();
        let action = Matrix::identity(nl).into_entries();
        LieRinehartAlgebra {
            anchored: AnchoredLieAlgebra::zero_anchor(lie, base),
            action,
        }
    }

    /// Zero anchor with the free-module action `a·(Σ bᵢXᵢ)` on `A ⊗ g`, basis `e_a ⊗ X_i`.
    /// Only a Lie–Rinehart algebra when `g` is abelian or `A` is the ground field.
    pub fn abelian_free(a: &AlgebraPresentation, rank: usize) -> Result<Self> {
        if !a.is_commutative() {
            return Err(Error::NonCommutativeBase(a.name().to_string()));
        }
        let na = a.dim();
        let nl = na * rank;
        let names = a
            .basis_names()
            .iter()
            .flat_map(|b| (1..=rank).map(move |i| format!("{b}⊗X{i}")))
            .collect();
        let lie = LieAlgebra::new(
            format!("{}⊗ab{rank}", a.name()),
            names,
            vec![Scalar::zero(); nl * nl * nl],
        )?;
        let mut action = vec![Scalar::zero(); na * nl * nl];
        for s in 0..na {
            for x in 0..nl {
                let (b, i) = (x / rank, x % rank);
                for (t, c) in a.basis_product(s, b).iter().enumerate() {
                    if !c.is_zero() {
                        action[(s * nl + x) * nl + t * rank + i] = c.clone();
                    }
                }
            }
        }
        LieRinehartAlgebra::new(AnchoredLieAlgebra::zero_anchor(lie, a.clone()), action)
    }

    /// `A ⋊ Der(A)`: functions acting by multiplication plus derivations, with
    /// `[δ, b] = δ(b)`, anchor `(b, δ) ↦ δ` and the evident `A`-action.
    pub fn first_order_operators(a: &AlgebraPresentation) -> Result<Self> {
        let der = LieRinehartAlgebra::derivations(a)?;
        let ders = a.derivation_space();
        let (na, nd) = (a.dim(), der.dim());
        let nl = na + nd;
        let names = a
            .basis_names()
            .iter()
            .map(|b| format!("l({b})"))
            .chain(der.lie().basis_names().iter().cloned())
            .collect();
        let lie = LieAlgebra::from_brackets(format!("{} ⋊ Der", a.name()), names, |i, j| {
            let mut v = vec![Scalar::zero(); nl];
            match (i < na, j < na) {
                (true, true) => {}
                (false, true) => v[..na].clone_from_slice(&ders.basis_derivation(i - na).column(j)),
                (true, false) => {
                    for (k, c) in ders.basis_derivation(j - na).column(i).iter().enumerate() {
                        v[k] = -c;
                    }
                }
                (false, false) => v[na..].clone_from_slice(der.lie().basis_bracket(i - na, j - na)),
            }
            v
        });
        let anchor = Matrix::hstack(&[&Matrix::zeros(na * na, na), der.anchor()])?;
        let mut action = vec![Scalar::zero(); na * nl * nl];
        for s in 0..na {
            for x in 0..nl {
                let at = (s * nl + x) * nl;
                if x < na {
                    action[at..at + na].clone_from_slice(a.basis_product(s, x));
                } else {
                    action[at + na..at + nl].clone_from_slice(der.basis_action(s, x - na));
                }
            }
        }
        LieRinehartAlgebra::new(AnchoredLieAlgebra::new(lie, a.clone(), anchor)?, action)
    }

    pub fn anchored(&self) -> &AnchoredLieAlgebra {
        &self.anchored
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.anchored.lie
    }

    pub fn base(&self) -> &AlgebraPresentation {
        &self.anchored.base
    }

    pub fn anchor(&self) -> &Matrix {
        &self.anchored.anchor
    }

    pub fn action_constants(&self) -> &[Scalar] {
        &self.action
    }

    pub fn dim(&self) -> usize {
        self.anchored.dim()
    }

    /// Coordinates of `e_a · e_x`.
    pub fn basis_action(&self, a: usize, x: usize) -> &[Scalar] {
        let nl = self.dim();
        &self.action[(a * nl + x) * nl..(a * nl + x + 1) * nl]
    }

    pub fn act(&self, a: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, xj) in x.iter().enumerate() {
                if !xj.is_zero() {
                    vec_axpy(&mut out, &(ai * xj), self.basis_action(i, j));
                }
            }
        }
        out
    }

    /// `dim_L × dim_L` matrix of `X ↦ a·X`.
    pub fn action_matrix(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|x| self.act(a, &self.lie().basis_vector(x)))
            .collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// Every anchored check plus commutativity of the base, the module axioms
    /// and both Leibniz compatibilities.
    pub fn validate(&self) -> Report {
        let mut report = self.anchored.validate();
        let base = self.base();
        let lie = self.lie();
        let (na, nl) = (base.dim(), lie.dim());
        let an = base.basis_names();
        let ln = lie.basis_names();

        report.check("base_commutative", base.is_commutative(), || {
            format!("{} is not commutative", base.name())
        });

        let mut unital = Vec::new();
        for x in 0..nl {
            let e = lie.basis_vector(x);
            let y = self.act(base.unit(), &e);
            if y != e {
                unital.push(format!("1·{} = {}", ln[x], lie.format_element(&y)));
            }
        }
        report.axiom("module_unital", unital);

        let mut assoc = Vec::new();
        for a in 0..na {
            for b in 0..na {
                for x in 0..nl {
                    let lhs = self.act(base.basis_product(a, b), &lie.basis_vector(x));
                    let rhs = self.act(&base.basis_vector(a), self.basis_action(b, x));
                    if lhs != rhs {
                        assoc.push(format!(
                            "({},{},{}): (ab)·X = {} but a·(b·X) = {}",
                            an[a],
                            an[b],
                            ln[x],
                            lie.format_element(&lhs),
                            lie.format_element(&rhs)
                        ));
                    }
                }
            }
        }
        report.axiom("module_associative", assoc);

        // ω(a·X) = a·ω(X)
        let mut l1 = Vec::new();
        for a in 0..na {
            let la = base.left_multiplication(&base.basis_vector(a));
            for x in 0..nl {
                let lhs = self.anchored.omega_of(self.basis_action(a, x));
                let rhs = la.mul(&self.anchored.omega(x));
                if lhs != rhs {
                    l1.push(format!("({},{}): ω(a·X) ≠ a·ω(X)", an[a], ln[x]));
                }
            }
        }
        report.axiom("leibniz_1", l1);

        // [X, a·Y] = a·[X,Y] + ω(X)(a)·Y
        let mut l2 = Vec::new();
        for x in 0..nl {
            let ex = lie.basis_vector(x);
            let wx = self.anchored.omega(x);
            for a in 0..na {
                let ea = base.basis_vector(a);
                let wxa = wx.apply(&ea);
                for y in 0..nl {
                    let ey = lie.basis_vector(y);
                    let lhs = lie.bracket(&ex, self.basis_action(a, y));
                    let mut rhs = self.act(&ea, lie.basis_bracket(x, y));
                    let t = self.act(&wxa, &ey);
                    rhs.iter_mut().zip(&t).for_each(|(p, q)| *p += q);
                    if lhs != rhs {
                        l2.push(format!(
                            "({},{},{}): [X,a·Y] = {} but a·[X,Y] + ω(X)(a)·Y = {}",
                            ln[x],
                            an[a],
                            ln[y],
                            lie.format_element(&lhs),
                            lie.format_element(&rhs)
                        ));
                    }
                }
            }
        }
        report.axiom("leibniz_2", l2);
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().all_passed()
    }

    /// The sub-Lie–Rinehart algebra on `sub`; errors when `sub` is not closed
    /// under the bracket or the action.
    pub fn restrict(&self, sub: &Subspace, basis_names: Vec<String>) -> Result<LieRinehartAlgebra> {
        let anchored = self.anchored.restrict(sub, basis_names)?;
        let action = restrict_action(sub, self.base(), |a, x| self.act(a, x))?;
        LieRinehartAlgebra::new(anchored, action)
    }

    pub fn kernel_of_anchor(&self) -> Result<LieRinehartAlgebra> {
        let k = self.anchored.kernel_of_anchor();
        let names = (0..k.dim()).map(|i| self.lie().format_element(&k.basis()[i])).collect();
        self.restrict(&k, names)
    }
}

/// Either flavour of anchored structure, for operations that accept both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LieStructure {
    Anchored(AnchoredLieAlgebra),
    LieRinehart(LieRinehartAlgebra),
}

impl LieStructure {
    pub fn anchored(&self) -> &AnchoredLieAlgebra {
        match self {
            LieStructure::Anchored(a) => a,
            LieStructure::LieRinehart(l) => l.anchored(),
        }
    }

    pub fn lie_rinehart(&self) -> Option<&LieRinehartAlgebra> {
        match self {
            LieStructure::Anchored(_) => None,
            LieStructure::LieRinehart(l) => Some(l),
        }
    }

    pub fn lie(&self) -> &LieAlgebra {
        self.anchored().lie()
    }

    pub fn base(&self) -> &AlgebraPresentation {
        self.anchored().base()
    }

    pub fn dim(&self) -> usize {
        self.anchored().dim()
    }

    pub fn validate(&self) -> Report {
        match self {
            LieStructure::Anchored(a) => a.validate(),
            LieStructure::LieRinehart(l) => l.validate(),
        }
    }

    /// Morphism checks appropriate to the pair of structures.
    pub fn check_morphism(&self, target: &LieStructure, f: &LieMorphism) -> Report {
        match (self, target) {
            (LieStructure::LieRinehart(s), LieStructure::LieRinehart(t)) => f.check_lie_rinehart(s, t),
            _ => f.check_anchored(self.anchored(), target.anchored()),
        }
    }
}

impl From<AnchoredLieAlgebra> for LieStructure {
    fn from(a: AnchoredLieAlgebra) -> Self {
        LieStructure::Anchored(a)
    }
}

impl From<LieRinehartAlgebra> for LieStructure {
    fn from(l: LieRinehartAlgebra) -> Self {
        LieStructure::LieRinehart(l)
    }
}

/// Action constants of `A` on `sub`, in its canonical basis.
pub(crate) fn restrict_action(
    sub: &Subspace,
    base: &AlgebraPresentation,
    act: impl Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
) -> Result<Vec<Scalar>> {
    let d = sub.dim();
    let mut table = Vec::with_capacity(base.dim() * d * d);
    for a in 0..base.dim() {
        let ea = base.basis_vector(a);
        for x in sub.basis() {
            match sub.coordinates(&act(&ea, x))? {
                Some(c) => table.extend(c),
                None => return Err(Error::NotClosed("A-action".into())),
            }
        }
    }
    Ok(table)
}

/// A linear map between Lie structures, checked against whichever structure the
/// endpoints carry.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LieMorphism {
    matrix: Matrix,
}

impl LieMorphism {
    pub fn new(matrix: Matrix) -> Self {
        LieMorphism { matrix }
    }

    pub fn identity(n: usize) -> Self {
        LieMorphism::new(Matrix::identity(n))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Scalar]) -> Vec<Scalar> {
        self.matrix.apply(x)
    }

    pub fn check_lie(&self, source: &LieAlgebra, target: &LieAlgebra) -> Report {
        let mut r = Report::new();
        r.axiom("bracket", source.morphism_violations(target, &self.matrix));
        r
    }

    /// Bracket preservation and `ω' ∘ f = ω`.
    pub fn check_anchored(&self, source: &AnchoredLieAlgebra, target: &AnchoredLieAlgebra) -> Report {
        let mut r = self.check_lie(&source.lie, &target.lie);
        if source.base != target.base {
            r.fail(
                "anchor",
                format!("bases differ: {} vs {}", source.base.name(), target.base.name()),
            );
            return r;
        }
        if r.failed("bracket") && self.matrix.rows() != target.dim() {
            return r;
        }
        let composed = target.anchor.mul(&self.matrix);
        let mut v = Vec::new();
        for x in 0..source.dim() {
            if composed.column(x) != source.anchor.column(x) {
                v.push(format!("ω'(f({})) ≠ ω({0})", source.lie.basis_names()[x]));
            }
        }
        r.axiom("anchor", v);
        r
    }

    /// Anchored checks plus `f(a·X) = a·f(X)`.
    pub fn check_lie_rinehart(&self, source: &LieRinehartAlgebra, target: &LieRinehartAlgebra) -> Report {
        let mut r = self.check_anchored(&source.anchored, &target.anchored);
        if r.failed("anchor") && source.base() != target.base() {
            return r;
        }
        if self.matrix.rows() != target.dim() || self.matrix.cols() != source.dim() {
            return r;
        }
        let mut v = Vec::new();
        for a in 0..source.base().dim() {
            let ea = source.base().basis_vector(a);
            for x in 0..source.dim() {
                let lhs = self.apply(source.basis_action(a, x));
                let rhs = target.act(&ea, &self.matrix.column(x));
                if lhs != rhs {
                    v.push(format!(
                        "({},{}): f(a·X) = {} but a·f(X) = {}",
                        source.base().basis_names()[a],
                        source.lie().basis_names()[x],
                        target.lie().format_element(&lhs),
                        target.lie().format_element(&rhs)
                    ));
                }
            }
        }
        r.axiom("a_linear", v);
        r
    }
}
