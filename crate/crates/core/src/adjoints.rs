//! Right adjoints to the enveloping-ring functors.
//!
//! For an `A`-ring `φ: A → R`, the carrier `𝓛_A(R)` is the space of pairs
//! `(r, δ) ∈ R × Der(A)` with `[r, φ(a)] = φ(δ(a))` for every `a`. It is an
//! anchored Lie algebra over `A` (and Lie–Rinehart when `A` is commutative)
//! under the componentwise bracket, anchored by the second projection. The
//! enveloping variant takes an `A^e`-ring and imposes
//! `[r, φ(a ⊗ b°)] = φ(δ(a) ⊗ b° + a ⊗ δ(b)°)`.
//!
//! The left adjoint sends `L` to the smash product `A # U(L)`; this module
//! builds the unit `X ↦ (ι_L(X), ω(X))`, the ring morphism induced by a Lie
//! morphism into a carrier, and a verifier for the adjunction.

use std::collections::HashMap;
use std::fmt;

use rand::Rng;

use crate::algebras::{ARing, AlgebraMorphism, AlgebraPresentation, DerivationSpace};
use crate::error::{Error, Result};
use crate::exactla::{preimage_pullback, vec_add, vec_is_zero, vec_sub, Matrix, Scalar, Subspace};
use crate::liecore::{
    der_factor, extension_map, functor_f, AnchoredLieAlgebra, Factor, LieAlgebra, LieMorphism, LieStructure,
    PullbackLie,
};
use crate::pbw::{coordinates_in, monomials_up_to, Combination, Monomial, SmashAlgebra, SmashElement};
use crate::report::Report;

/// Which defining constraint a carrier was built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variant {
    Anchored,
    LieRinehart,
    EnvelopingBase,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Anchored => "anchored",
            Variant::LieRinehart => "lie_rinehart",
            Variant::EnvelopingBase => "enveloping_base",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anchored" => Ok(Variant::Anchored),
            "lie_rinehart" => Ok(Variant::LieRinehart),
            "enveloping_base" => Ok(Variant::EnvelopingBase),
            other => Err(Error::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

/// A carrier of pairs `(r, δ)` inside `R ⊕ Der(A)`; factor 0 is `R` under the
/// commutator, factor 1 is `Der(A)` in its canonical basis.
#[derive(Clone, Debug)]
pub struct AdjointCarrier {
    ring: ARing,
    base: AlgebraPresentation,
    variant: Variant,
    ders: DerivationSpace,
    pullback: PullbackLie,
}

impl AdjointCarrier {
    pub fn ring(&self) -> &ARing {
        &self.ring
    }

    /// The algebra `A` whose derivations appear in the second slot.
    pub fn base(&self) -> &AlgebraPresentation {
        &self.base
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn derivations(&self) -> &DerivationSpace {
        &self.ders
    }

    pub fn pullback(&self) -> &PullbackLie {
        &self.pullback
    }

    pub fn dim(&self) -> usize {
        self.pullback.dim()
    }

    pub fn carrier(&self) -> &Subspace {
        self.pullback.carrier()
    }

    pub fn anchored(&self) -> &AnchoredLieAlgebra {
        self.pullback.anchored()
    }

    /// The Lie–Rinehart structure when present, else the anchored one.
    pub fn structure(&self) -> LieStructure {
        match self.pullback.lie_rinehart() {
            Some(l) => LieStructure::LieRinehart(l.clone()),
            None => LieStructure::Anchored(self.pullback.anchored().clone()),
        }
    }

    /// `p₁`: `dim R × dim 𝓛`.
    pub fn ring_projection(&self) -> &Matrix {
        self.pullback.projection(0)
    }

    /// `p₂` in `Der(A)` coordinates.
    pub fn derivation_projection(&self) -> &Matrix {
        self.pullback.projection(1)
    }

    /// The pair `(r, δ)` of carrier basis vector `i`.
    pub fn pair(&self, i: usize) -> (Vec<Scalar>, Matrix) {
        self.pair_of(&self.carrier().basis()[i])
    }

    fn pair_of(&self, ambient: &[Scalar]) -> (Vec<Scalar>, Matrix) {
        let r = self.pullback.component(0, ambient).to_vec();
        let d = self.ders.derivation(self.pullback.component(1, ambient));
        (r, d)
    }

    /// Carrier coordinates of `(r, δ)`; `None` if `δ` is not a derivation or the pair violates the constraint.
    pub fn coordinates_of_pair(&self, r: &[Scalar], delta: &Matrix) -> Result<Option<Vec<Scalar>>> {
        let nr = self.ring.ring().dim();
        if r.len() != nr {
            return Err(Error::DimensionMismatch {
                op: "AdjointCarrier::coordinates_of_pair (ring element)",
                expected: nr,
                found: r.len(),
            });
        }
        let Some(dc) = self.ders.coordinates(delta) else {
            return Ok(None);
        };
        self.pullback.coordinates(&self.pullback.join(&[r, &dc]))
    }

    /// `[r, φ(a)] − φ(δ(a))`, or its enveloping analogue, for one base index.
    fn defect(&self, r: &[Scalar], delta: &Matrix, index: usize) -> Vec<Scalar> {
        let phi = self.ring.structure_map();
        let ring = self.ring.ring();
        let lhs = ring.commutator(r, &phi.matrix().column(index));
        let moved = match self.variant {
            Variant::EnvelopingBase => extend_derivation_column(delta, index),
            _ => delta.column(index),
        };
        vec_sub(&lhs, &phi.apply(&moved))
    }

    /// Re-substitutes every basis pair into the defining equation.
    pub fn check_membership(&self) -> Report {
        let mut v = Vec::new();
        let src = self.ring.base();
        for (i, name) in self.pullback.basis_names().iter().enumerate() {
            let (r, delta) = self.pair(i);
            if !self.base.leibniz_violations(&delta).is_empty() {
                v.push(format!("{name}: second component is not a derivation"));
            }
            for idx in 0..src.dim() {
                let d = self.defect(&r, &delta, idx);
                if !vec_is_zero(&d) {
                    v.push(format!(
                        "{name} at {}: defect {}",
                        src.basis_names()[idx],
                        self.ring.ring().format_element(&d)
                    ));
                }
            }
        }
        let mut rep = Report::new();
        rep.axiom("membership", v);
        rep
    }

    /// `[(r,δ), a·(r′,δ′)] = a·[(r,δ),(r′,δ′)] + δ(a)·(r′,δ′)`, computed on
    /// ambient pairs with `a·(r,δ) = (φ(a)r, aδ)`.
    pub fn check_leibniz(&self) -> Report {
        let mut rep = Report::new();
        if self.variant != Variant::LieRinehart {
            return rep;
        }
        let ring = self.ring.ring();
        let phi = self.ring.structure_map();
        let a = &self.base;
        let act = |s: &[Scalar], (r, d): &(Vec<Scalar>, Matrix)| -> (Vec<Scalar>, Matrix) {
            (ring.multiply(&phi.apply(s), r), a.left_multiplication(s).mul(d))
        };
        let bracket = |(r, d): &(Vec<Scalar>, Matrix), (r2, d2): &(Vec<Scalar>, Matrix)| {
            (ring.commutator(r, r2), d.commutator(d2))
        };
        let pairs: Vec<_> = (0..self.dim()).map(|i| self.pair(i)).collect();
        let names = self.pullback.basis_names();
        let mut v = Vec::new();
        for (i, p) in pairs.iter().enumerate() {
            for (j, p2) in pairs.iter().enumerate() {
                let br = bracket(p, p2);
                for s in 0..a.dim() {
                    let es = a.basis_vector(s);
                    let lhs = bracket(p, &act(&es, p2));
                    let first = act(&es, &br);
                    let second = act(&p.1.column(s), p2);
                    let rhs = (vec_add(&first.0, &second.0), first.1.add(&second.1));
                    if lhs != rhs {
                        v.push(format!("({}, {}, {})", names[i], a.basis_names()[s], names[j]));
                    }
                }
            }
        }
        rep.axiom("leibniz_componentwise", v);
        rep
    }

    /// Membership, componentwise Leibniz, projections and the carrier's own axioms.
    pub fn validate(&self) -> Report {
        let mut r = self.check_membership();
        r.merge("", self.check_leibniz());
        r.merge("", self.pullback.check_projections());
        r.merge("structure", self.structure().validate());
        r
    }

    /// `(r, δ) ↦ (f(r), δ)` for an `A`-ring morphism `f` from this ring to `target`'s.
    pub fn induced_map(&self, target: &AdjointCarrier, f: &AlgebraMorphism) -> Result<Matrix> {
        if f.source() != self.ring.ring() || f.target() != target.ring.ring() {
            return Err(Error::BaseMismatch(format!(
                "{} → {} does not connect {} and {}",
                f.source().name(),
                f.target().name(),
                self.ring.ring().name(),
                target.ring.ring().name()
            )));
        }
        if self.base != target.base || self.ring.base() != target.ring.base() {
            return Err(Error::BaseMismatch("carriers over different bases".into()));
        }
        let composed = f.matrix().mul(self.ring.structure_map().matrix());
        if &composed != target.ring.structure_map().matrix() {
            return Err(Error::Precondition("f ∘ φ ≠ ψ: not a morphism of A-rings".into()));
        }
        if !f.validate().all_passed() {
            return Err(Error::Precondition("f is not an algebra morphism".into()));
        }
        induced_pair_map(&self.pullback, &target.pullback, f.matrix())
    }
}

/// Column `index` of `δ ⊗ id + id ⊗ δ`, where `index = i·n + j` stands for `a_i ⊗ a_j°`.
fn extend_derivation_column(delta: &Matrix, index: usize) -> Vec<Scalar> {
    let n = delta.rows();
    let (i, j) = (index / n, index % n);
    let mut out = vec![Scalar::zero(); n * n];
    for s in 0..n {
        let c = &delta[(s, i)];
        if !c.is_zero() {
            out[s * n + j] += c;
        }
        let d = &delta[(s, j)];
        if !d.is_zero() {
            out[i * n + s] += d;
        }
    }
    out
}

/// `(X, δ) ↦ (f(X), δ)` between two carriers whose second factors agree.
pub fn induced_pair_map(source: &PullbackLie, target: &PullbackLie, f: &Matrix) -> Result<Matrix> {
    if source.factors().len() != 2 || target.factors().len() != 2 {
        return Err(Error::Precondition("pair maps need two-factor carriers".into()));
    }
    if source.factors()[1].lie != target.factors()[1].lie {
        return Err(Error::BaseMismatch("second factors differ".into()));
    }
    let d0 = source.factors()[0].lie.dim();
    if f.cols() != d0 || f.rows() != target.factors()[0].lie.dim() {
        return Err(Error::DimensionMismatch {
            op: "induced_pair_map (f shape)",
            expected: target.factors()[0].lie.dim() * d0,
            found: f.rows() * f.cols(),
        });
    }
    let mut cols = Vec::with_capacity(source.dim());
    for (i, v) in source.carrier().basis().iter().enumerate() {
        let image = target.join(&[&f.apply(source.component(0, v)), source.component(1, v)]);
        match target.coordinates(&image)? {
            Some(c) => cols.push(c),
            None => {
                return Err(Error::CrossCheck(format!(
                    "image of {} leaves the target carrier",
                    source.basis_names()[i]
                )))
            }
        }
    }
    Ok(Matrix::from_columns(target.dim(), &cols))
}

fn require_valid(report: Report, what: &'static str) -> Result<()> {
    match report.failures().next() {
        Some(c) => Err(Error::Invalid {
            what,
            detail: format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()),
        }),
        None => Ok(()),
    }
}

fn der_anchor(a: &AlgebraPresentation, ders: &DerivationSpace, first: usize) -> Result<Matrix> {
    let n = a.dim();
    Matrix::hstack(&[&Matrix::zeros(n * n, first), &ders.inclusion()])
}

/// `𝒜_A^R(M, ϖ)`: pairs `(X, δ) ∈ M × Der(A)` with `ϖ(X)(φ(a)) = φ(δ(a))`,
/// anchored by the second projection.
pub fn anchored_adjoint(phi: &ARing, m: &AnchoredLieAlgebra) -> Result<PullbackLie> {
    if m.base() != phi.ring() {
        return Err(Error::BaseMismatch(format!(
            "anchor over {} but the A-ring is {}",
            m.base().name(),
            phi.ring().name()
        )));
    }
    let a = phi.base();
    let ders = a.derivation_space();
    let map = phi.structure_map();
    let left = map.pullback_along().mul(m.anchor());
    let right = map.pushforward().mul(&ders.inclusion());
    let carrier = preimage_pullback(&left, &right)?;
    PullbackLie::assemble(
        "A",
        a,
        vec![
            Factor::new("p1", m.lie().clone(), None),
            Factor::new("p2", LieAlgebra::of_derivations(&ders), None),
        ],
        carrier,
        &der_anchor(a, &ders, m.dim())?,
        false,
    )
}

/// `𝓛_A(R)`. The Lie–Rinehart variant needs `A` commutative and adds the
/// componentwise action `a·(r, δ) = (φ(a)r, aδ)`.
pub fn lie_adjoint(phi: &ARing, variant: Variant) -> Result<AdjointCarrier> {
    let a = phi.base();
    let ring = phi.ring();
    let lie_rinehart = match variant {
        Variant::Anchored => false,
        Variant::LieRinehart => {
            if !a.is_commutative() {
                return Err(Error::NonCommutativeBase(a.name().to_string()));
            }
            true
        }
        Variant::EnvelopingBase => {
            return Err(Error::Precondition(
                "the enveloping variant is built by enveloping_adjoint".into(),
            ))
        }
    };
    let ders = a.derivation_space();
    let map = phi.structure_map();
    let m = AnchoredLieAlgebra::commutator_anchor(ring);
    let left = map.pullback_along().mul(m.anchor());
    let right = map.pushforward().mul(&ders.inclusion());
    let carrier = preimage_pullback(&left, &right)?;
    AdjointCarrier::assemble(phi, lie_rinehart, ders, carrier)
}

impl AdjointCarrier {
    /// Wraps a carrier subspace of `R ⊕ Der(A)` computed by any route.
    pub(crate) fn assemble(phi: &ARing, lie_rinehart: bool, ders: DerivationSpace, carrier: Subspace) -> Result<Self> {
        let a = phi.base();
        let ring = phi.ring();
        let map = phi.structure_map();
        let lie = LieAlgebra::commutator_algebra(ring);
        let (ring_factor, der) = if lie_rinehart {
            let mut action = Vec::with_capacity(a.dim() * ring.dim() * ring.dim());
            for s in 0..a.dim() {
                let ps = map.matrix().column(s);
                for t in 0..ring.dim() {
                    action.extend(ring.multiply(&ps, &ring.basis_vector(t)));
                }
            }
            (Factor::new("p1", lie, Some(action)), der_factor("p2", &ders, a)?)
        } else {
            (
                Factor::new("p1", lie, None),
                Factor::new("p2", LieAlgebra::of_derivations(&ders), None),
            )
        };
        let pullback = PullbackLie::assemble(
            "L",
            a,
            vec![ring_factor, der],
            carrier,
            &der_anchor(a, &ders, ring.dim())?,
            lie_rinehart,
        )?;
        Ok(AdjointCarrier {
            ring: phi.clone(),
            base: a.clone(),
            variant: if lie_rinehart {
                Variant::LieRinehart
            } else {
                Variant::Anchored
            },
            ders,
            pullback,
        })
    }
}

/// The enveloping carrier of an `A^e`-ring, built directly and cross-checked
/// against `F_A(𝓛_{A^e}(R))` projected to `R ⊕ Der(A)`.
pub fn enveloping_adjoint(phi_e: &ARing, a: &AlgebraPresentation) -> Result<AdjointCarrier> {
    let carrier = enveloping_adjoint_direct(phi_e, a)?;
    let composite = enveloping_adjoint_composite(phi_e, a)?;
    if &composite != carrier.carrier() {
        return Err(Error::CrossCheck(format!(
            "direct carrier has dim {}, composite has dim {}",
            carrier.dim(),
            composite.dim()
        )));
    }
    Ok(carrier)
}

/// The enveloping carrier from its defining constraint alone.
pub fn enveloping_adjoint_direct(phi_e: &ARing, a: &AlgebraPresentation) -> Result<AdjointCarrier> {
    let ae = a.enveloping()?;
    if phi_e.base() != &ae {
        return Err(Error::BaseMismatch(format!(
            "expected an {}-ring, found a {}-ring",
            ae.name(),
            phi_e.base().name()
        )));
    }
    let ring = phi_e.ring();
    let ders = a.derivation_space();
    let map = phi_e.structure_map();
    let m = AnchoredLieAlgebra::commutator_anchor(ring);
    let left = map.pullback_along().mul(m.anchor());
    let right = map.pushforward().mul(&extension_map(a)).mul(&ders.inclusion());
    let carrier = preimage_pullback(&left, &right)?;
    let pullback = PullbackLie::assemble(
        "sL",
        a,
        vec![
            Factor::new("rho1", m.lie().clone(), None),
            Factor::new("rho2", LieAlgebra::of_derivations(&ders), None),
        ],
        carrier,
        &der_anchor(a, &ders, ring.dim())?,
        false,
    )?;
    Ok(AdjointCarrier {
        ring: phi_e.clone(),
        base: a.clone(),
        variant: Variant::EnvelopingBase,
        ders,
        pullback,
    })
}

/// `F_A(𝓛_{A^e}(R))`, mapped into `R ⊕ Der(A)` by `p₁ ∘ q₁` and `q₂`.
pub fn enveloping_adjoint_composite(phi_e: &ARing, a: &AlgebraPresentation) -> Result<Subspace> {
    let inner = lie_adjoint(phi_e, Variant::Anchored)?;
    let outer = functor_f(inner.anchored(), a)?;
    let ders_dim = a.derivation_space().dim();
    let to_ambient = Matrix::block_diagonal(&[inner.ring_projection(), &Matrix::identity(ders_dim)]);
    outer.carrier().image(&to_ambient)
}

/// The unit `η_L: X ↦ (ι_L(X), ω(X))` into the carrier of `A # U(L)`.
#[derive(Clone, Debug)]
pub struct UnitMorphism {
    source: LieStructure,
    smash: SmashAlgebra,
    ders: DerivationSpace,
    /// `ω(X_i)` in `Der(A)` coordinates, column `i`.
    matrix: Matrix,
}

impl UnitMorphism {
    pub fn source(&self) -> &LieStructure {
        &self.source
    }

    pub fn smash(&self) -> &SmashAlgebra {
        &self.smash
    }

    /// The derivation half of `η`: `dim Der(A) × dim L`.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `η(X) = (ι_L(X), ω(X))`.
    pub fn image(&self, x: &[Scalar]) -> (SmashElement, Matrix) {
        (self.smash.j_l(x), self.source.anchored().omega_of(x))
    }

    /// Membership of each `η(X)` via `[ι_L(X), ι_A(a)] = ι_A(ω(X)(a))`, bracket
    /// preservation, and for Lie–Rinehart input `ι_A(a)ι_L(X) = a ⊗ X`.
    pub fn check(&self) -> Result<Report> {
        let s = &self.smash;
        let a = s.base();
        let lie = self.source.lie();
        let mut membership = Vec::new();
        for x in 0..lie.dim() {
            let jl = s.j_l(&lie.basis_vector(x));
            let w = self.source.anchored().omega(x);
            for i in 0..a.dim() {
                let ea = a.basis_vector(i);
                let lhs = s.commutator(&jl, &s.j_a(&ea))?;
                let rhs = s.j_a(&w.apply(&ea));
                if lhs != rhs {
                    membership.push(format!("X = {}, a = {}", lie.basis_names()[x], a.basis_names()[i]));
                }
            }
        }
        let mut bracket = Vec::new();
        for x in 0..lie.dim() {
            for y in 0..lie.dim() {
                let lhs = s.commutator(&s.j_l(&lie.basis_vector(x)), &s.j_l(&lie.basis_vector(y)))?;
                let rhs = s.j_l(lie.basis_bracket(x, y));
                if lhs != rhs {
                    bracket.push(format!("[{}, {}]", lie.basis_names()[x], lie.basis_names()[y]));
                }
            }
        }
        let mut rep = Report::new();
        rep.axiom("membership", membership);
        rep.axiom("bracket", bracket);
        let through_ders = self.ders.inclusion().mul(&self.matrix);
        rep.check(
            "anchor_in_derivations",
            &through_ders == self.source.anchored().anchor(),
            || "some ω(X) is not a derivation".into(),
        );
        if let Some(l) = self.source.lie_rinehart() {
            let env = s.enveloping();
            let mut module = Vec::new();
            let mut anchor_linear = Vec::new();
            for i in 0..a.dim() {
                let ea = a.basis_vector(i);
                for x in 0..lie.dim() {
                    let ex = lie.basis_vector(x);
                    let prod = s.multiply(&s.j_a(&ea), &s.j_l(&ex))?;
                    if prod != s.tensor(&ea, &env.from_lie(&ex)) {
                        module.push(format!("a = {}, X = {}", a.basis_names()[i], lie.basis_names()[x]));
                    }
                    let lhs = l.anchored().omega_of(l.basis_action(i, x));
                    let rhs = a.left_multiplication(&ea).mul(&l.anchored().omega(x));
                    if lhs != rhs {
                        anchor_linear.push(format!("a = {}, X = {}", a.basis_names()[i], lie.basis_names()[x]));
                    }
                }
            }
            rep.axiom("module_identity", module);
            rep.axiom("anchor_a_linear", anchor_linear);
        }
        Ok(rep)
    }
}

/// `A # U(L)` with its unit `η_L`; the input must pass its own axioms.
pub fn enveloping_ring(l: &LieStructure) -> Result<(SmashAlgebra, UnitMorphism)> {
    require_valid(l.validate(), "lie structure")?;
    let smash = SmashAlgebra::new(l.anchored().clone());
    let ders = l.base().derivation_space();
    let mut cols = Vec::with_capacity(l.dim());
    for x in 0..l.dim() {
        let w = l.anchored().omega(x);
        let c = ders.coordinates(&w).ok_or_else(|| Error::Invalid {
            what: "anchor",
            detail: format!("ω({}) is not a derivation", l.lie().basis_names()[x]),
        })?;
        cols.push(c);
    }
    let matrix = Matrix::from_columns(ders.dim(), &cols);
    let unit = UnitMorphism {
        source: l.clone(),
        smash: smash.clone(),
        ders,
        matrix,
    };
    Ok((smash, unit))
}

/// The ring morphism `Φ: A # U(L) → R`, `a ⊗ X_{i1}⋯X_{ik} ↦ φ(a) f̃(X_{i1})⋯f̃(X_{ik})`.
#[derive(Clone, Debug)]
pub struct RingMorphism {
    smash: SmashAlgebra,
    ring: ARing,
    /// `f̃(X_i) = p₁(ψ(X_i))`.
    images: Vec<Vec<Scalar>>,
}

impl RingMorphism {
    pub fn smash(&self) -> &SmashAlgebra {
        &self.smash
    }

    pub fn ring(&self) -> &ARing {
        &self.ring
    }

    /// `f̃(X_i)` in `R`.
    pub fn lie_images(&self) -> &[Vec<Scalar>] {
        &self.images
    }

    fn monomial_image(&self, m: &Monomial, cache: &mut HashMap<Monomial, Vec<Scalar>>) -> Vec<Scalar> {
        if let Some(v) = cache.get(m) {
            return v.clone();
        }
        let r = self.ring.ring();
        let mut acc = r.unit().to_vec();
        for g in m.word() {
            acc = r.multiply(&acc, &self.images[g]);
        }
        cache.insert(m.clone(), acc.clone());
        acc
    }

    pub fn apply(&self, s: &SmashElement) -> Result<Vec<Scalar>> {
        let r = self.ring.ring();
        let phi = self.ring.structure_map();
        let n = self.smash.base().dim();
        let rank = self.smash.enveloping().rank();
        let mut cache = HashMap::new();
        let mut out = r.zero_element();
        for ((a, m), c) in s.iter() {
            if *a >= n || m.len() != rank {
                return Err(Error::DimensionMismatch {
                    op: "RingMorphism::apply",
                    expected: n,
                    found: a + 1,
                });
            }
            let term = r.multiply(&phi.matrix().column(*a), &self.monomial_image(m, &mut cache));
            crate::exactla::vec_axpy(&mut out, c, &term);
        }
        Ok(out)
    }
}

/// Builds `Φ` from `ψ: L → 𝓛_A(R)` after checking that `ψ` is a morphism and
/// that `[f̃(X), φ(a)] = φ(ω(X)(a))`.
pub fn induce_ring_morphism(l: &LieStructure, carrier: &AdjointCarrier, psi: &LieMorphism) -> Result<RingMorphism> {
    if l.base() != carrier.base() || carrier.variant() == Variant::EnvelopingBase {
        return Err(Error::BaseMismatch(format!(
            "{} over {} against a {} carrier over {}",
            l.lie().name(),
            l.base().name(),
            carrier.variant(),
            carrier.base().name()
        )));
    }
    if psi.matrix().rows() != carrier.dim() || psi.matrix().cols() != l.dim() {
        return Err(Error::DimensionMismatch {
            op: "induce_ring_morphism (ψ shape)",
            expected: carrier.dim() * l.dim(),
            found: psi.matrix().rows() * psi.matrix().cols(),
        });
    }
    let ring = carrier.ring();
    let r = ring.ring();
    let phi = ring.structure_map();
    let tilde = carrier.ring_projection().mul(psi.matrix());
    let images: Vec<Vec<Scalar>> = (0..l.dim()).map(|x| tilde.column(x)).collect();
    let a = l.base();
    for (x, fx) in images.iter().enumerate() {
        let w = l.anchored().omega(x);
        for i in 0..a.dim() {
            let ea = a.basis_vector(i);
            let lhs = r.commutator(fx, &phi.apply(&ea));
            let rhs = phi.apply(&w.apply(&ea));
            if lhs != rhs {
                return Err(Error::Precondition(format!(
                    "[f̃({}), φ({})] = {} but φ(ω(X)(a)) = {}",
                    l.lie().basis_names()[x],
                    a.basis_names()[i],
                    r.format_element(&lhs),
                    r.format_element(&rhs)
                )));
            }
        }
    }
    let report = l.check_morphism(&carrier.structure(), psi);
    if let Some(c) = report.failures().next() {
        return Err(Error::Precondition(format!(
            "ψ is not a morphism: {}: {}",
            c.name,
            c.witness.clone().unwrap_or_default()
        )));
    }
    Ok(RingMorphism {
        smash: SmashAlgebra::new(l.anchored().clone()),
        ring: ring.clone(),
        images,
    })
}

/// A morphism `f: L₀ → L` along which naturality of the unit is checked.
#[derive(Clone, Debug)]
pub struct NaturalitySquare {
    pub source: LieStructure,
    pub map: LieMorphism,
}

/// Knobs for [`verify_adjunction`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    /// Filtered degree for the generation check.
    pub degree: u32,
    /// Random pairs per multiplicativity check.
    pub trials: usize,
    /// Maximal degree of random smash elements.
    pub pair_degree: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            degree: 3,
            trials: 100,
            pair_degree: 2,
        }
    }
}

/// `U_A(f)(a ⊗ u) = a ⊗ U(f)(u)` from `A # U(L₀)` to `A # U(L)`.
pub fn enveloping_map(target: &SmashAlgebra, f: &Matrix, s: &SmashElement) -> Result<SmashElement> {
    let env = target.enveloping();
    let images: Vec<_> = (0..f.cols()).map(|x| env.from_lie(&f.column(x))).collect();
    let mut cache: HashMap<Monomial, crate::pbw::PbwElement> = HashMap::new();
    let mut out = Combination::zero();
    for ((a, m), c) in s.iter() {
        if m.len() != f.cols() {
            return Err(Error::DimensionMismatch {
                op: "enveloping_map (monomial length)",
                expected: f.cols(),
                found: m.len(),
            });
        }
        let u = match cache.get(m) {
            Some(u) => u.clone(),
            None => {
                let mut acc = env.one();
                for g in m.word() {
                    acc = env.multiply(&acc, &images[g])?;
                }
                cache.insert(m.clone(), acc.clone());
                acc
            }
        };
        for (mm, cc) in u.iter() {
            out.add_term((*a, mm.clone()), c * cc);
        }
    }
    Ok(out)
}

/// Checks the adjunction on supplied data. Every morphism `ψ` gets a
/// precondition check, the round trip `𝓛_A(Φ) ∘ η = ψ`, unit and `A`-ring
/// compatibility, and multiplicativity of `Φ` on random pairs. The unit's
/// membership, generation of the degree-`N` filtration by `ι_A(A) ∪ ι_L(L)`,
/// and naturality along each supplied square are checked once.
pub fn verify_adjunction<G: Rng>(
    l: &LieStructure,
    carrier: &AdjointCarrier,
    psis: &[LieMorphism],
    squares: &[NaturalitySquare],
    options: VerifyOptions,
    rng: &mut G,
) -> Report {
    let mut rep = Report::new();
    let (smash, unit) = match enveloping_ring(l) {
        Ok(p) => p,
        Err(e) => {
            rep.fail("enveloping_ring", e.to_string());
            return rep;
        }
    };
    match unit.check() {
        Ok(r) => rep.merge("unit", r),
        Err(e) => rep.fail("unit", e.to_string()),
    }
    match generation_rank(&smash, options.degree) {
        Ok((rank, size)) => rep.check("generation", rank == size, || {
            format!(
                "products of generators span rank {rank} of {size} at degree ≤ {}",
                options.degree
            )
        }),
        Err(e) => rep.fail("generation", e.to_string()),
    }
    for (k, psi) in psis.iter().enumerate() {
        let prefix = format!("psi{k}");
        match verify_one(l, carrier, &unit, psi, options, rng) {
            Ok(r) => rep.merge(&prefix, r),
            Err(e) => rep.fail(format!("{prefix}.precondition"), e.to_string()),
        }
    }
    for (k, sq) in squares.iter().enumerate() {
        let prefix = format!("naturality{k}");
        match verify_square(l, &smash, sq, options, rng) {
            Ok(r) => rep.merge(&prefix, r),
            Err(e) => rep.fail(format!("{prefix}.precondition"), e.to_string()),
        }
    }
    rep
}

/// `(rank, size)` of the products `ι_A(a) ι_L(X_{i1}) ⋯ ι_L(X_{ik})` over sorted
/// words of length ≤ `degree`, inside the degree-`degree` filtered piece.
pub fn generation_rank(smash: &SmashAlgebra, degree: u32) -> Result<(usize, usize)> {
    let basis = smash.filtered_basis(degree);
    let a = smash.base();
    let lie = smash.enveloping().lie();
    let mut rows = Vec::new();
    for m in monomials_up_to(lie.dim(), degree) {
        for i in 0..a.dim() {
            let mut acc = smash.j_a(&a.basis_vector(i));
            for g in m.word() {
                acc = smash.multiply(&acc, &smash.j_l(&lie.basis_vector(g)))?;
            }
            let c = coordinates_in(&basis, &acc)
                .ok_or_else(|| Error::CrossCheck("product of generators leaves the filtered piece".into()))?;
            rows.push(c);
        }
    }
    let size = basis.len();
    if rows.is_empty() {
        return Ok((0, size));
    }
    Ok((Matrix::from_rows(&rows).rank(), size))
}

fn verify_one<G: Rng>(
    l: &LieStructure,
    carrier: &AdjointCarrier,
    unit: &UnitMorphism,
    psi: &LieMorphism,
    options: VerifyOptions,
    rng: &mut G,
) -> Result<Report> {
    let phi_map = induce_ring_morphism(l, carrier, psi)?;
    let smash = unit.smash();
    let ring = carrier.ring();
    let r = ring.ring();
    let a = l.base();
    let lie = l.lie();
    let mut rep = Report::new();
    rep.pass("precondition");

    let mut round_trip = Vec::new();
    let mut extends = Vec::new();
    for x in 0..lie.dim() {
        let (jl, w) = unit.image(&lie.basis_vector(x));
        let image = phi_map.apply(&jl)?;
        if image != phi_map.lie_images()[x] {
            extends.push(lie.basis_names()[x].clone());
        }
        match carrier.coordinates_of_pair(&image, &w)? {
            Some(c) if c == psi.matrix().column(x) => {}
            Some(c) => round_trip.push(format!(
                "{}: {} ≠ {}",
                lie.basis_names()[x],
                carrier.pullback().lie().format_element(&c),
                carrier.pullback().lie().format_element(&psi.matrix().column(x))
            )),
            None => round_trip.push(format!("{}: (Φ(ι_L X), ω(X)) leaves the carrier", lie.basis_names()[x])),
        }
    }
    rep.axiom("round_trip", round_trip);
    rep.axiom("extends_lie_map", extends);

    let one = phi_map.apply(&smash.one())?;
    rep.check("unit", one == r.unit(), || format!("Φ(1) = {}", r.format_element(&one)));
    let mut a_ring = Vec::new();
    for i in 0..a.dim() {
        let ea = a.basis_vector(i);
        if phi_map.apply(&smash.j_a(&ea))? != ring.structure_map().apply(&ea) {
            a_ring.push(a.basis_names()[i].clone());
        }
    }
    rep.axiom("a_ring", a_ring);

    if let Some(lr) = l.lie_rinehart() {
        let mut ident = Vec::new();
        for i in 0..a.dim() {
            let ea = a.basis_vector(i);
            for x in 0..lie.dim() {
                let lhs = phi_map.apply(&smash.j_l(lr.basis_action(i, x)))?;
                let rhs = phi_map.apply(&smash.tensor(&ea, &smash.enveloping().generator(x)))?;
                if lhs != rhs {
                    ident.push(format!("a = {}, X = {}", a.basis_names()[i], lie.basis_names()[x]));
                }
            }
        }
        rep.axiom("rinehart_identification", ident);
    }

    let mut mult = Vec::new();
    for t in 0..options.trials {
        let s1 = smash.random_element(rng, options.pair_degree, 2);
        let s2 = smash.random_element(rng, options.pair_degree, 2);
        let lhs = phi_map.apply(&smash.multiply(&s1, &s2)?)?;
        let rhs = r.multiply(&phi_map.apply(&s1)?, &phi_map.apply(&s2)?);
        if lhs != rhs {
            mult.push(format!("trial {t}: s = {s1:?}, t = {s2:?}"));
            break;
        }
    }
    rep.axiom("multiplicative", mult);
    Ok(rep)
}

fn verify_square<G: Rng>(
    l: &LieStructure,
    smash: &SmashAlgebra,
    sq: &NaturalitySquare,
    options: VerifyOptions,
    rng: &mut G,
) -> Result<Report> {
    if sq.source.base() != l.base() {
        return Err(Error::BaseMismatch("naturality source over a different base".into()));
    }
    let f = sq.map.matrix();
    if f.rows() != l.dim() || f.cols() != sq.source.dim() {
        return Err(Error::DimensionMismatch {
            op: "naturality (f shape)",
            expected: l.dim() * sq.source.dim(),
            found: f.rows() * f.cols(),
        });
    }
    require_valid(sq.source.check_morphism(l, &sq.map), "naturality morphism")?;
    let (smash0, _) = enveloping_ring(&sq.source)?;
    let lie0 = sq.source.lie();
    let mut rep = Report::new();
    let mut v = Vec::new();
    for x in 0..lie0.dim() {
        let ex = lie0.basis_vector(x);
        let lhs = enveloping_map(smash, f, &smash0.j_l(&ex))?;
        let fx = f.apply(&ex);
        let rhs = smash.j_l(&fx);
        if lhs != rhs || sq.source.anchored().omega(x) != l.anchored().omega_of(&fx) {
            v.push(lie0.basis_names()[x].clone());
        }
    }
    rep.axiom("square", v);
    let mut mult = Vec::new();
    for t in 0..options.trials.min(20) {
        let s1 = smash0.random_element(rng, options.pair_degree, 2);
        let s2 = smash0.random_element(rng, options.pair_degree, 2);
        let lhs = enveloping_map(smash, f, &smash0.multiply(&s1, &s2)?)?;
        let rhs = smash.multiply(&enveloping_map(smash, f, &s1)?, &enveloping_map(smash, f, &s2)?)?;
        if lhs != rhs {
            mult.push(format!("trial {t}"));
            break;
        }
    }
    rep.axiom("induced_ring_map_multiplicative", mult);
    Ok(rep)
}

/// `ψ(X) = (ω(X), ω(X))` into `𝓛_A(End A)` for `φ = a ↦ l_a`: the tautological action.
pub fn canonical_psi(l: &LieStructure, carrier: &AdjointCarrier) -> Result<LieMorphism> {
    let mut cols = Vec::with_capacity(l.dim());
    for x in 0..l.dim() {
        let w = l.anchored().omega(x);
        let r = crate::algebras::flatten(&w);
        let c = carrier.coordinates_of_pair(&r, &w)?.ok_or_else(|| {
            Error::CrossCheck(format!(
                "(ω(X), ω(X)) not in the carrier for X = {}",
                l.lie().basis_names()[x]
            ))
        })?;
        cols.push(c);
    }
    Ok(LieMorphism::new(Matrix::from_columns(carrier.dim(), &cols)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::flatten;
    use crate::exactla::{q, unit_vector};
    use crate::liecore::LieRinehartAlgebra;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn a(n: usize) -> AlgebraPresentation {
        AlgebraPresentation::truncated_polynomial(n)
    }

    /// Oracle: solve `[r, φ(a)] = φ(δ(a))` directly over unknowns `(r, c)` with
    /// `δ = Σ c_k D_k`, one scalar equation per `(a, output coordinate)`.
    fn carrier_oracle(phi: &ARing) -> Subspace {
        let base = phi.base();
        let ring = phi.ring();
        let ders = base.derivation_space();
        let (nr, nd) = (ring.dim(), ders.dim());
        let mut rows = Vec::new();
        for i in 0..base.dim() {
            let pa = phi.structure_map().matrix().column(i);
            for k in 0..nr {
                let mut row = vec![Scalar::zero(); nr + nd];
                for t in 0..nr {
                    row[t] = ring.commutator(&ring.basis_vector(t), &pa)[k].clone();
                }
                for d in 0..nd {
                    let moved = ders.basis_derivation(d).column(i);
                    row[nr + d] = -phi.structure_map().apply(&moved)[k].clone();
                }
                rows.push(row);
            }
        }
        Matrix::from_rows(&rows).nullspace()
    }

    #[test]
    fn atiyah_of_a3_has_dimension_five() {
        let phi = ARing::left_regular(&a(3));
        let c = lie_adjoint(&phi, Variant::LieRinehart).unwrap();
        assert_eq!(c.dim(), 5);
        assert_eq!(c.carrier(), &carrier_oracle(&phi));
        let report = c.validate();
        assert!(report.all_passed(), "{report}");
        assert!(c.pullback().lie_rinehart().unwrap().is_valid());
    }

    #[test]
    fn identity_ring_gives_base_with_zero_anchor() {
        for n in 2..=4 {
            let phi = ARing::identity(&a(n));
            let c = lie_adjoint(&phi, Variant::LieRinehart).unwrap();
            assert_eq!(c.dim(), n);
            assert_eq!(c.carrier(), &carrier_oracle(&phi));
            assert!(c.anchored().is_zero_anchor());
            assert!(c.validate().all_passed());
        }
    }

    fn over_ground_field(r: &AlgebraPresentation) -> ARing {
        over_one_dimensional(AlgebraPresentation::ground_field(), r)
    }

    fn over_one_dimensional(k: AlgebraPresentation, r: &AlgebraPresentation) -> ARing {
        let map = AlgebraMorphism::new(k, r.clone(), Matrix::from_columns(r.dim(), &[r.unit().to_vec()])).unwrap();
        ARing::new(map).unwrap()
    }

    #[test]
    fn ground_field_base_gives_whole_ring() {
        let r = AlgebraPresentation::matrix_algebra(2);
        let c = lie_adjoint(&over_ground_field(&r), Variant::Anchored).unwrap();
        assert_eq!(c.dim(), 4);
        assert!(c.anchored().is_zero_anchor());
        assert_eq!(
            c.pullback().lie().structure_constants(),
            LieAlgebra::commutator_algebra(&r).structure_constants()
        );
        let m = AnchoredLieAlgebra::commutator_anchor(&r);
        let p = anchored_adjoint(&over_ground_field(&r), &m).unwrap();
        assert_eq!(p.dim(), 4);
    }

    #[test]
    fn lie_rinehart_variant_needs_commutative_base() {
        let m2 = AlgebraPresentation::matrix_algebra(2);
        let err = lie_adjoint(&ARing::identity(&m2), Variant::LieRinehart).unwrap_err();
        assert!(matches!(err, Error::NonCommutativeBase(_)));
        let c = lie_adjoint(&ARing::identity(&m2), Variant::Anchored).unwrap();
        // pairs (r, δ) with δ = [r, −]: one per element of M2
        assert_eq!(c.dim(), 4);
        assert!(c.check_membership().all_passed());
    }

    #[test]
    fn anchored_adjoint_of_commutator_anchor_matches_lie_adjoint() {
        let phi = ARing::left_regular(&a(3));
        let p = anchored_adjoint(&phi, &AnchoredLieAlgebra::commutator_anchor(phi.ring())).unwrap();
        let c = lie_adjoint(&phi, Variant::Anchored).unwrap();
        assert_eq!(p.carrier(), c.carrier());
        assert!(p.check_projections().all_passed());
    }

    #[test]
    fn anchored_functoriality_along_inclusion() {
        // M = span{l_a, δ} ⊂ End(A3), a sub-anchored Lie algebra of (End A3, ad)
        let base = a(3);
        let phi = ARing::left_regular(&base);
        let big = AnchoredLieAlgebra::commutator_anchor(phi.ring());
        let ders = base.derivation_space();
        let mut gens: Vec<Vec<Scalar>> = (0..3)
            .map(|i| flatten(&base.left_multiplication(&base.basis_vector(i))))
            .collect();
        gens.extend((0..ders.dim()).map(|d| ders.basis_derivation(d).into_entries()));
        let sub = Subspace::from_spanning(9, gens).unwrap();
        let names = (0..sub.dim()).map(|i| format!("m{i}")).collect();
        let small = big.restrict(&sub, names).unwrap();
        let f = sub.basis_matrix();
        let src = anchored_adjoint(&phi, &small).unwrap();
        let tgt = anchored_adjoint(&phi, &big).unwrap();
        let induced = induced_pair_map(&src, &tgt, &f).unwrap();
        assert_eq!(tgt.projection(0).mul(&induced), f.mul(src.projection(0)));
        assert_eq!(tgt.projection(1).mul(&induced), *src.projection(1));
        assert!(LieMorphism::new(induced.clone())
            .check_anchored(src.anchored(), tgt.anchored())
            .all_passed());
        assert_eq!(src.dim(), 5);
    }

    #[test]
    fn lie_adjoint_functoriality() {
        // (A, id) → (End A, l) → (End A, l), the last map conjugation by l_u for u = 1 + x
        let base = a(3);
        let r0 = ARing::identity(&base);
        let r1 = ARing::left_regular(&base);
        let l_map = AlgebraMorphism::left_regular(&base);
        let u = base.left_multiplication(&[q(1), q(1), q(0)]);
        let u_inv = base.left_multiplication(&[q(1), q(-1), q(1)]);
        assert_eq!(u.mul(&u_inv), Matrix::identity(3));
        let conj = u.kron(&u_inv.transpose());
        let end = r1.ring().clone();
        let c_map = AlgebraMorphism::new(end.clone(), end, conj).unwrap();
        let c0 = lie_adjoint(&r0, Variant::LieRinehart).unwrap();
        let c1 = lie_adjoint(&r1, Variant::LieRinehart).unwrap();
        let f01 = c0.induced_map(&c1, &l_map).unwrap();
        let f11 = c1.induced_map(&c1, &c_map).unwrap();
        let composite = l_map.then(&c_map).unwrap();
        let direct = c0.induced_map(&c1, &composite).unwrap();
        assert_eq!(direct, f11.mul(&f01));
        let s0 = c0.structure();
        let s1 = c1.structure();
        assert!(s0.check_morphism(&s1, &LieMorphism::new(f01)).all_passed());
        assert!(s1.check_morphism(&s1, &LieMorphism::new(f11)).all_passed());
        // conjugation by a non-central unit is not an A-ring map from (End A, l)
        assert!(c1.induced_map(&c0, &l_map).is_err());
    }

    fn bimodule_ring(base: &AlgebraPresentation) -> ARing {
        // φ(a ⊗ b°) = l_a ∘ r_b on M = A
        let n = base.dim();
        let cols: Vec<Vec<Scalar>> = (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let la = base.left_multiplication(&base.basis_vector(i));
                let rb = base.right_multiplication(&base.basis_vector(j));
                flatten(&la.mul(&rb))
            })
            .collect();
        let end = AlgebraPresentation::matrix_algebra(n).with_name(format!("End({})", base.name()));
        let map = AlgebraMorphism::new(base.enveloping().unwrap(), end, Matrix::from_columns(n * n, &cols)).unwrap();
        ARing::new(map).unwrap()
    }

    #[test]
    fn enveloping_carrier_characterizes_bimodule_actions() {
        let base = a(3);
        let phi = bimodule_ring(&base);
        let c = enveloping_adjoint(&phi, &base).unwrap();
        assert!(c.check_membership().all_passed());
        // oracle: (f, δ) with f(amb) = δ(a)mb + a f(m) b + a m δ(b) on basis triples
        let ders = base.derivation_space();
        let n = base.dim();
        let nd = ders.dim();
        let mut rows = Vec::new();
        for ai in 0..n {
            for m in 0..n {
                for b in 0..n {
                    let (ea, em, eb) = (base.basis_vector(ai), base.basis_vector(m), base.basis_vector(b));
                    let amb = base.multiply(&base.multiply(&ea, &em), &eb);
                    for k in 0..n {
                        let mut row = vec![Scalar::zero(); n * n + nd];
                        // f(amb)_k − a f(m) b_k, f = Σ f_{rc} E_rc
                        for r in 0..n {
                            for cidx in 0..n {
                                let mut coeff = if r == k { amb[cidx].clone() } else { Scalar::zero() };
                                let fm = if cidx == m {
                                    base.basis_vector(r)
                                } else {
                                    base.zero_element()
                                };
                                let sandwiched = base.multiply(&base.multiply(&ea, &fm), &eb);
                                coeff -= &sandwiched[k];
                                row[r * n + cidx] = coeff;
                            }
                        }
                        for d in 0..nd {
                            let dm = ders.basis_derivation(d);
                            let t1 = base.multiply(&base.multiply(&dm.apply(&ea), &em), &eb);
                            let t2 = base.multiply(&base.multiply(&ea, &em), &dm.apply(&eb));
                            row[n * n + d] = -(&t1[k] + &t2[k]);
                        }
                        rows.push(row);
                    }
                }
            }
        }
        assert_eq!(c.carrier(), &Matrix::from_rows(&rows).nullspace());
        // commutative A: l_b and r_b coincide, so the carrier matches 𝓛_A(End A)
        assert_eq!(c.dim(), 5);
    }

    #[test]
    fn enveloping_carrier_over_ground_field_is_whole_ring() {
        let r = AlgebraPresentation::matrix_algebra(2);
        let k = AlgebraPresentation::ground_field();
        let c = enveloping_adjoint(&over_one_dimensional(k.enveloping().unwrap(), &r), &k).unwrap();
        assert_eq!(c.dim(), 4);
        let err = enveloping_adjoint(&ARing::left_regular(&a(2)), &a(2)).unwrap_err();
        assert!(matches!(err, Error::BaseMismatch(_)));
    }

    #[test]
    fn enveloping_direct_and_composite_agree() {
        for base in [a(2), AlgebraPresentation::split(2)] {
            let phi = bimodule_ring(&base);
            let direct = enveloping_adjoint_direct(&phi, &base).unwrap();
            let composite = enveloping_adjoint_composite(&phi, &base).unwrap();
            assert_eq!(direct.carrier(), &composite);
        }
    }

    fn der_a3() -> LieStructure {
        LieRinehartAlgebra::derivations(&a(3)).unwrap().into()
    }

    #[test]
    fn unit_lands_in_carrier() {
        let (smash, unit) = enveloping_ring(&der_a3()).unwrap();
        let r = unit.check().unwrap();
        assert!(r.all_passed(), "{r}");
        assert_eq!(smash.base().dim(), 3);
        assert_eq!(unit.matrix(), &Matrix::identity(2));
    }

    #[test]
    fn zero_lie_algebra_gives_base_ring() {
        let l: LieStructure = LieRinehartAlgebra::abelian_free(&a(3), 0).unwrap().into();
        let (smash, unit) = enveloping_ring(&l).unwrap();
        assert_eq!(smash.filtered_basis(3).len(), 3);
        assert_eq!(unit.matrix().cols(), 0);
        let phi = ARing::left_regular(&a(3));
        let c = lie_adjoint(&phi, Variant::LieRinehart).unwrap();
        let psi = LieMorphism::new(Matrix::zeros(c.dim(), 0));
        let map = induce_ring_morphism(&l, &c, &psi).unwrap();
        for i in 0..3 {
            let e = a(3).basis_vector(i);
            assert_eq!(map.apply(&smash.j_a(&e)).unwrap(), phi.structure_map().apply(&e));
        }
    }

    #[test]
    fn canonical_psi_evaluates_exactly() {
        let l = der_a3();
        let c = lie_adjoint(&ARing::left_regular(&a(3)), Variant::LieRinehart).unwrap();
        let psi = canonical_psi(&l, &c).unwrap();
        let map = induce_ring_morphism(&l, &c, &psi).unwrap();
        let smash = map.smash().clone();
        // Φ(x ⊗ x∂) applied to x: x·(x∂)(x) = x·x = x²
        let s = smash.tensor(&a(3).basis_vector(1), &smash.enveloping().generator(0));
        let op = crate::algebras::unflatten(3, &map.apply(&s).unwrap());
        assert_eq!(op.apply(&a(3).basis_vector(1)), vec![q(0), q(0), q(1)]);
    }

    #[test]
    fn adjunction_on_derivation_fixture() {
        let l = der_a3();
        let c = lie_adjoint(&ARing::left_regular(&a(3)), Variant::LieRinehart).unwrap();
        let psi = canonical_psi(&l, &c).unwrap();
        let kernel = l.lie_rinehart().unwrap().kernel_of_anchor().unwrap();
        let square = NaturalitySquare {
            source: kernel.clone().into(),
            map: LieMorphism::new(Matrix::zeros(l.dim(), kernel.dim())),
        };
        let opts = VerifyOptions {
            trials: 10,
            ..VerifyOptions::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = verify_adjunction(&l, &c, &[psi], &[square], opts, &mut rng);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn naturality_along_nontrivial_kernel() {
        let lr = LieRinehartAlgebra::first_order_operators(&a(3)).unwrap();
        let kernel_space = lr.anchored().kernel_of_anchor();
        let kernel = lr.kernel_of_anchor().unwrap();
        let l: LieStructure = lr.into();
        let c = lie_adjoint(&ARing::left_regular(&a(3)), Variant::LieRinehart).unwrap();
        // ψ(l(b)) = (l_b, 0), ψ(δ) = (δ, δ)
        let mut cols = Vec::new();
        let base = a(3);
        let ders = base.derivation_space();
        for i in 0..3 {
            let lb = base.left_multiplication(&base.basis_vector(i));
            cols.push(
                c.coordinates_of_pair(&flatten(&lb), &Matrix::zeros(3, 3))
                    .unwrap()
                    .unwrap(),
            );
        }
        for d in 0..ders.dim() {
            let m = ders.basis_derivation(d);
            cols.push(c.coordinates_of_pair(&flatten(&m), &m).unwrap().unwrap());
        }
        let psi = LieMorphism::new(Matrix::from_columns(c.dim(), &cols));
        let square = NaturalitySquare {
            source: kernel.into(),
            map: LieMorphism::new(kernel_space.basis_matrix()),
        };
        let opts = VerifyOptions {
            trials: 5,
            ..VerifyOptions::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let r = verify_adjunction(&l, &c, &[psi], &[square], opts, &mut rng);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn zero_psi_is_rejected() {
        let l = der_a3();
        let c = lie_adjoint(&ARing::left_regular(&a(3)), Variant::LieRinehart).unwrap();
        let psi = LieMorphism::new(Matrix::zeros(c.dim(), 2));
        assert!(matches!(
            induce_ring_morphism(&l, &c, &psi),
            Err(Error::Precondition(_))
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = verify_adjunction(&l, &c, &[psi], &[], VerifyOptions::default(), &mut rng);
        assert!(r.failed("precondition"));
    }

    #[test]
    fn abelian_rank_one_into_base() {
        // L = A·X with zero anchor, R = A: morphisms ψ are A-linear maps L → {(a, 0)}
        let base = a(3);
        let lr = LieRinehartAlgebra::abelian_free(&base, 1).unwrap();
        let l: LieStructure = lr.clone().into();
        let c = lie_adjoint(&ARing::identity(&base), Variant::LieRinehart).unwrap();
        let target = c.pullback().lie_rinehart().unwrap().clone();
        // oracle: unknowns ψ (dim 𝓛 × dim L, row-major); A-linearity and the anchor are linear
        let (m, n) = (c.dim(), lr.dim());
        let mut rows = Vec::new();
        for s in 0..base.dim() {
            let es = base.basis_vector(s);
            for x in 0..n {
                let lhs_vec = lr.basis_action(s, x).to_vec();
                for k in 0..m {
                    let mut row = vec![Scalar::zero(); m * n];
                    for y in 0..n {
                        row[k * n + y] += &lhs_vec[y];
                    }
                    for t in 0..m {
                        let acted = target.act(&es, &unit_vector(m, t));
                        row[t * n + x] -= &acted[k];
                    }
                    rows.push(row);
                }
            }
        }
        let anchor = target.anchor();
        for row_a in 0..anchor.rows() {
            for x in 0..n {
                let mut row = vec![Scalar::zero(); m * n];
                for t in 0..m {
                    row[t * n + x] = anchor[(row_a, t)].clone();
                }
                rows.push(row);
            }
        }
        let homs = Matrix::from_rows(&rows).nullspace();
        assert_eq!(homs.dim(), base.dim());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for v in homs.basis() {
            let psi = LieMorphism::new(Matrix::from_vec(m, n, v.clone()).unwrap());
            let opts = VerifyOptions {
                trials: 5,
                ..VerifyOptions::default()
            };
            let r = verify_adjunction(&l, &c, &[psi], &[], opts, &mut rng);
            assert!(r.all_passed(), "{r}");
        }
    }
}
