//! Modules over anchored and Lie–Rinehart algebras, the Atiyah algebra of a
//! module, the infinitesimal gauge algebra `DO(A, L, M)`, and their universal
//! properties.

use crate::adjoints::{enveloping_adjoint, lie_adjoint, AdjointCarrier, Variant};
use crate::algebras::{flatten, unflatten, ARing, AlgebraMorphism, AlgebraPresentation};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Scalar};
use crate::liecore::{
    product_lie_rinehart, Factor, LieAlgebra, LieMorphism, LieRinehartAlgebra, LieStructure, PullbackLie,
};
use crate::report::Report;

/// A finite-dimensional left `A`-module, optionally with a right action making it a bimodule.
///
/// Action constants are stored as `(a·d + m)·d + k` for the coefficient of
/// `m_k` in `a_a · m_m` (resp. `m_m · a_a`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AModule {
    name: String,
    base: AlgebraPresentation,
    basis_names: Vec<String>,
    left: Vec<Scalar>,
    right: Option<Vec<Scalar>>,
}

impl AModule {
    /// Checks table arity only; [`validate`](Self::validate) checks the module axioms.
    pub fn new(
        name: impl Into<String>,
        base: AlgebraPresentation,
        basis_names: Vec<String>,
        left: Vec<Scalar>,
        right: Option<Vec<Scalar>>,
    ) -> Result<Self> {
        let d = basis_names.len();
        let expected = base.dim() * d * d;
        for table in std::iter::once(&left).chain(right.as_ref()) {
            if table.len() != expected {
                return Err(Error::DimensionMismatch {
                    op: "AModule::new (action table)",
                    expected,
                    found: table.len(),
                });
            }
        }
        Ok(AModule {
            name: name.into(),
            base,
            basis_names,
            left,
            right,
        })
    }

    /// `A` acting on itself on both sides.
    pub fn regular(a: &AlgebraPresentation) -> Self {
        let n = a.dim();
        let mut left = Vec::with_capacity(n * n * n);
        let mut right = Vec::with_capacity(n * n * n);
        for s in 0..n {
            for m in 0..n {
                left.extend_from_slice(a.basis_product(s, m));
                right.extend_from_slice(a.basis_product(m, s));
            }
        }
        AModule {
            name: a.name().to_string(),
            base: a.clone(),
            basis_names: a.basis_names().to_vec(),
            left,
            right: Some(right),
        }
    }

    /// The zero module.
    pub fn zero(a: &AlgebraPresentation) -> Self {
        AModule {
            name: "0".into(),
            base: a.clone(),
            basis_names: Vec::new(),
            left: Vec::new(),
            right: Some(Vec::new()),
        }
    }

    /// `ℚ^d` over a one-dimensional base, acting by scalars.
    pub fn vector_space(a: &AlgebraPresentation, d: usize) -> Result<Self> {
        if a.dim() != 1 {
            return Err(Error::Precondition("vector_space needs a one-dimensional base".into()));
        }
        let u = a.unit()[0].recip().ok_or_else(|| Error::Invalid {
            what: "base",
            detail: "zero unit".into(),
        })?;
        let table = Matrix::identity(d).scale(&u).into_entries();
        Ok(AModule {
            name: format!("Q^{d}"),
            base: a.clone(),
            basis_names: (1..=d).map(|i| format!("v{i}")).collect(),
            left: table.clone(),
            right: Some(table),
        })
    }

    /// Forgets the right action.
    pub fn left_only(mut self) -> Self {
        self.right = None;
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &AlgebraPresentation {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn left_constants(&self) -> &[Scalar] {
        &self.left
    }

    pub fn right_constants(&self) -> Option<&[Scalar]> {
        self.right.as_deref()
    }

    pub fn is_bimodule(&self) -> bool {
        self.right.is_some()
    }

    fn table_matrix(&self, table: &[Scalar], a: &[Scalar]) -> Matrix {
        let d = self.dim();
        let mut out = Matrix::zeros(d, d);
        for (s, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for m in 0..d {
                for k in 0..d {
                    let t = &table[(s * d + m) * d + k];
                    if !t.is_zero() {
                        out[(k, m)] += &(c * t);
                    }
                }
            }
        }
        out
    }

    /// `m ↦ a·m`.
    pub fn left_matrix(&self, a: &[Scalar]) -> Matrix {
        self.table_matrix(&self.left, a)
    }

    /// `m ↦ m·b`, when a right action is present.
    pub fn right_matrix(&self, b: &[Scalar]) -> Option<Matrix> {
        self.right.as_ref().map(|t| self.table_matrix(t, b))
    }

    pub fn format_element(&self, v: &[Scalar]) -> String {
        crate::algebras::format_combination(&self.basis_names, v)
    }

    /// Unital and associative actions, and commuting actions for bimodules.
    pub fn validate(&self) -> Report {
        let a = &self.base;
        let n = a.dim();
        let d = self.dim();
        let mut r = Report::new();
        let id = Matrix::identity(d);
        let basis_l: Vec<Matrix> = (0..n).map(|s| self.left_matrix(&a.basis_vector(s))).collect();
        r.check("left_unital", self.left_matrix(a.unit()) == id, || "1·m ≠ m".into());
        let mut v = Vec::new();
        for s in 0..n {
            for t in 0..n {
                if self.left_matrix(a.basis_product(s, t)) != basis_l[s].mul(&basis_l[t]) {
                    v.push(format!(
                        "({}{})·m ≠ {0}·({1}·m)",
                        a.basis_names()[s],
                        a.basis_names()[t]
                    ));
                }
            }
        }
        r.axiom("left_associative", v);
        if let Some(one) = self.right_matrix(a.unit()) {
            let basis_r: Vec<Matrix> = (0..n).map(|s| self.right_matrix(&a.basis_vector(s)).unwrap()).collect();
            r.check("right_unital", one == id, || "m·1 ≠ m".into());
            let mut v = Vec::new();
            let mut c = Vec::new();
            for s in 0..n {
                for t in 0..n {
                    // m·(st) = (m·s)·t, i.e. r_{st} = r_t ∘ r_s
                    if self.right_matrix(a.basis_product(s, t)).unwrap() != basis_r[t].mul(&basis_r[s]) {
                        v.push(format!(
                            "m·({}{}) ≠ (m·{0})·{1}",
                            a.basis_names()[s],
                            a.basis_names()[t]
                        ));
                    }
                    if basis_l[s].mul(&basis_r[t]) != basis_r[t].mul(&basis_l[s]) {
                        c.push(format!(
                            "({}·m)·{} ≠ {0}·(m·{1})",
                            a.basis_names()[s],
                            a.basis_names()[t]
                        ));
                    }
                }
            }
            r.axiom("right_associative", v);
            r.axiom("bimodule_commute", c);
        }
        r
    }

    pub fn is_valid(&self) -> bool {
        self.validate().all_passed()
    }

    /// `End(M)` as the matrix algebra in row-major coordinates.
    pub fn endomorphism_algebra(&self) -> AlgebraPresentation {
        AlgebraPresentation::matrix_algebra(self.dim()).with_name(format!("End({})", self.name))
    }

    /// `(End(M), a ↦ l_a)`.
    pub fn endomorphism_ring(&self) -> Result<ARing> {
        let a = &self.base;
        let cols: Vec<Vec<Scalar>> = (0..a.dim())
            .map(|s| flatten(&self.left_matrix(&a.basis_vector(s))))
            .collect();
        let map = AlgebraMorphism::new(
            a.clone(),
            self.endomorphism_algebra(),
            Matrix::from_columns(self.dim() * self.dim(), &cols),
        )?;
        ARing::new(map)
    }

    /// `(End(M), a ⊗ b° ↦ l_a ∘ r_b)` for a bimodule.
    pub fn enveloping_ring(&self) -> Result<ARing> {
        let a = &self.base;
        let n = a.dim();
        if !self.is_bimodule() {
            return Err(Error::Precondition(format!("{} has no right action", self.name)));
        }
        let cols: Vec<Vec<Scalar>> = (0..n * n)
            .map(|k| {
                let l = self.left_matrix(&a.basis_vector(k / n));
                let r = self.right_matrix(&a.basis_vector(k % n)).unwrap();
                flatten(&l.mul(&r))
            })
            .collect();
        let map = AlgebraMorphism::new(
            a.enveloping()?,
            self.endomorphism_algebra(),
            Matrix::from_columns(self.dim() * self.dim(), &cols),
        )?;
        ARing::new(map)
    }
}

/// A Lie structure acting on a module through `ρ: L → End(M)`, stored as a
/// `dim(M)² × dim(L)` matrix of flattened endomorphisms.
#[derive(Clone, Debug)]
pub struct LieModuleStructure {
    pub lie: LieStructure,
    pub module: AModule,
    pub rho: Matrix,
}

impl LieModuleStructure {
    pub fn new(lie: LieStructure, module: AModule, rho: Matrix) -> Result<Self> {
        let d = module.dim();
        if rho.rows() != d * d || rho.cols() != lie.dim() {
            return Err(Error::DimensionMismatch {
                op: "LieModuleStructure::new (ρ shape)",
                expected: d * d * lie.dim(),
                found: rho.rows() * rho.cols(),
            });
        }
        if lie.base() != module.base() {
            return Err(Error::BaseMismatch(format!(
                "{} vs {}",
                lie.base().name(),
                module.base().name()
            )));
        }
        Ok(LieModuleStructure { lie, module, rho })
    }

    /// `M = A` with `ρ = ω`.
    pub fn tautological(l: LieStructure) -> Self {
        let module = AModule::regular(l.base());
        let rho = l.anchored().anchor().clone();
        LieModuleStructure { lie: l, module, rho }
    }

    pub fn rho(&self, x: usize) -> Matrix {
        unflatten(self.module.dim(), &self.rho.column(x))
    }

    pub fn rho_of(&self, x: &[Scalar]) -> Matrix {
        unflatten(self.module.dim(), &self.rho.apply(x))
    }

    /// The carrier that `X ↦ (ρ(X), ω(X))` should land in.
    fn adjoint_carrier(&self) -> Result<AdjointCarrier> {
        match (&self.lie, self.module.is_bimodule()) {
            (LieStructure::LieRinehart(_), _) => lie_adjoint(&self.module.endomorphism_ring()?, Variant::LieRinehart),
            (LieStructure::Anchored(_), true) => {
                enveloping_adjoint(&self.module.enveloping_ring()?, self.module.base())
            }
            (LieStructure::Anchored(_), false) => lie_adjoint(&self.module.endomorphism_ring()?, Variant::Anchored),
        }
    }

    /// `X ↦ (ρ(X), ω(X))` in carrier coordinates, if every image lies in the carrier.
    fn induced(&self, carrier: &AdjointCarrier) -> Result<Option<Matrix>> {
        let mut cols = Vec::with_capacity(self.lie.dim());
        for x in 0..self.lie.dim() {
            let r = self.rho.column(x);
            match carrier.coordinates_of_pair(&r, &self.lie.anchored().omega(x))? {
                Some(c) => cols.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix::from_columns(carrier.dim(), &cols)))
    }
}

/// Module axioms for `ρ`, and their equivalence with `X ↦ (ρ(X), ω(X))`
/// being a morphism into the adjoint carrier of `End(M)`.
///
/// Lie–Rinehart input uses the left-module conditions; anchored input with a
/// bimodule uses the two-sided rule `ρ(X)(a·m·b) = ω(X)(a)·m·b + a·ρ(X)(m)·b + a·m·ω(X)(b)`,
/// and anchored input with a left module uses its one-sided part.
pub fn check_module(s: &LieModuleStructure) -> Report {
    let mut rep = Report::new();
    rep.merge("module", s.module.validate());
    let lie = s.lie.lie();
    let a = s.lie.base();
    let m = &s.module;
    rep.axiom(
        "rho_lie_morphism",
        lie.morphism_violations(&LieAlgebra::commutator_algebra(&m.endomorphism_algebra()), &s.rho),
    );

    let mut leibniz = Vec::new();
    for x in 0..lie.dim() {
        let rx = s.rho(x);
        let w = s.lie.anchored().omega(x);
        for i in 0..a.dim() {
            let ea = a.basis_vector(i);
            let la = m.left_matrix(&ea);
            let l_wa = m.left_matrix(&w.apply(&ea));
            match (&s.lie, m.right_matrix(&ea)) {
                (LieStructure::Anchored(_), Some(_)) => {
                    for j in 0..a.dim() {
                        let eb = a.basis_vector(j);
                        let rb = m.right_matrix(&eb).unwrap();
                        let r_wb = m.right_matrix(&w.apply(&eb)).unwrap();
                        let lhs = rx.mul(&la).mul(&rb);
                        let rhs = l_wa.mul(&rb).add(&la.mul(&rb).mul(&rx)).add(&la.mul(&r_wb));
                        if lhs != rhs {
                            leibniz.push(format!(
                                "X = {}, a = {}, b = {}",
                                lie.basis_names()[x],
                                a.basis_names()[i],
                                a.basis_names()[j]
                            ));
                        }
                    }
                }
                _ => {
                    if rx.mul(&la) != la.mul(&rx).add(&l_wa) {
                        leibniz.push(format!("X = {}, a = {}", lie.basis_names()[x], a.basis_names()[i]));
                    }
                }
            }
        }
    }
    rep.axiom("rho_leibniz", leibniz);

    if let Some(lr) = s.lie.lie_rinehart() {
        let mut v = Vec::new();
        for i in 0..a.dim() {
            let la = m.left_matrix(&a.basis_vector(i));
            for x in 0..lie.dim() {
                if s.rho_of(lr.basis_action(i, x)) != la.mul(&s.rho(x)) {
                    v.push(format!("a = {}, X = {}", a.basis_names()[i], lie.basis_names()[x]));
                }
            }
        }
        rep.axiom("rho_a_linear", v);
    }

    let conditions = rep.all_passed();
    let into_carrier = s
        .adjoint_carrier()
        .and_then(|c| Ok((s.induced(&c)?, c)))
        .map(|(induced, c)| match induced {
            Some(f) => s.lie.check_morphism(&c.structure(), &LieMorphism::new(f)).all_passed(),
            None => false,
        });
    match into_carrier {
        Ok(ok) => {
            rep.check("adjoint_equivalence", ok == conditions, || {
                format!("module conditions {conditions}, carrier morphism {ok}")
            });
        }
        Err(e) => rep.fail("adjoint_equivalence", e.to_string()),
    }
    rep
}

fn require_commutative(a: &AlgebraPresentation) -> Result<()> {
    if !a.is_commutative() {
        return Err(Error::NonCommutativeBase(a.name().to_string()));
    }
    Ok(())
}

/// Rows of `f(a·m) − a·f(m) − δ(a)·m = 0` over unknowns `(f, c)`, `δ = Σ c_k D_k`
/// given as images of the base: `anchors[k]` is `D_k`.
fn gauge_constraints(m: &AModule, anchors: &[Matrix]) -> Matrix {
    let a = m.base();
    let d = m.dim();
    let width = d * d + anchors.len();
    let mut rows = Vec::new();
    for i in 0..a.dim() {
        let ea = a.basis_vector(i);
        let la = m.left_matrix(&ea);
        let moved: Vec<Matrix> = anchors.iter().map(|w| m.left_matrix(&w.apply(&ea))).collect();
        for mm in 0..d {
            for k in 0..d {
                let mut row = vec![Scalar::zero(); width];
                // (f ∘ l_a)[k, mm] = Σ_t f[k,t] l_a[t,mm];  (l_a ∘ f)[k, mm] = Σ_t l_a[k,t] f[t,mm]
                for t in 0..d {
                    row[k * d + t] += &la[(t, mm)];
                    row[t * d + mm] -= &la[(k, t)];
                }
                for (c, w) in moved.iter().enumerate() {
                    row[d * d + c] = -w[(k, mm)].clone();
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return Matrix::zeros(0, width);
    }
    Matrix::from_rows(&rows)
}

/// `𝒜_M = {(f, δ) : f(a·m) = a·f(m) + δ(a)·m}`, built from that constraint and
/// cross-checked against `𝓛_A(End M)`.
pub fn atiyah(m: &AModule) -> Result<AdjointCarrier> {
    let a = m.base();
    require_commutative(a)?;
    let ders = a.derivation_space();
    let anchors: Vec<Matrix> = (0..ders.dim()).map(|k| ders.basis_derivation(k)).collect();
    let carrier = gauge_constraints(m, &anchors).nullspace();
    let ring = m.endomorphism_ring()?;
    let direct = AdjointCarrier::assemble(&ring, true, ders, carrier)?;
    let via_adjoint = lie_adjoint(&ring, Variant::LieRinehart)?;
    if direct.carrier() != via_adjoint.carrier() {
        return Err(Error::CrossCheck(format!(
            "Atiyah carrier has dim {}, adjoint carrier has dim {}",
            direct.dim(),
            via_adjoint.dim()
        )));
    }
    Ok(direct)
}

/// `DO(A, L, M) = {(f, X) : f(a·m) = ω(X)(a)·m + a·f(m)}` with factors `rho`
/// (`End M`) and `q2` (`L`), anchored by `ω ∘ q₂`. Cross-checked against the
/// product of `𝓛_A(End M)` and `L`.
pub fn gauge_algebra(l: &LieRinehartAlgebra, m: &AModule) -> Result<PullbackLie> {
    let a = l.base();
    if a != m.base() {
        return Err(Error::BaseMismatch(format!("{} vs {}", a.name(), m.base().name())));
    }
    require_commutative(a)?;
    let direct = gauge_algebra_direct(l, m)?;
    let product = gauge_algebra_product(l, m)?;
    let report = compare_gauge_routes(&direct, &product, m)?;
    if let Some(c) = report.failures().next() {
        return Err(Error::CrossCheck(format!(
            "{}: {}",
            c.name,
            c.witness.clone().unwrap_or_default()
        )));
    }
    Ok(direct)
}

/// `DO(A, L, M)` from its defining constraint alone.
pub fn gauge_algebra_direct(l: &LieRinehartAlgebra, m: &AModule) -> Result<PullbackLie> {
    let a = l.base();
    let d = m.dim();
    let anchors: Vec<Matrix> = (0..l.dim()).map(|x| l.anchored().omega(x)).collect();
    let carrier = gauge_constraints(m, &anchors).nullspace();
    let end = m.endomorphism_algebra();
    let mut action = Vec::with_capacity(a.dim() * d * d * d * d);
    for s in 0..a.dim() {
        let la = flatten(&m.left_matrix(&a.basis_vector(s)));
        for t in 0..d * d {
            action.extend(end.multiply(&la, &end.basis_vector(t)));
        }
    }
    let n = a.dim();
    let anchor = Matrix::hstack(&[&Matrix::zeros(n * n, d * d), l.anchor()])?;
    PullbackLie::assemble(
        "DO",
        a,
        vec![
            Factor::new("rho", LieAlgebra::commutator_algebra(&end), Some(action)),
            Factor::new("q2", l.lie().clone(), Some(l.action_constants().to_vec())),
        ],
        carrier,
        &anchor,
        true,
    )
}

/// The product of `𝓛_A(End M)` and `L` in Lie–Rinehart algebras over `A`.
pub fn gauge_algebra_product(l: &LieRinehartAlgebra, m: &AModule) -> Result<PullbackLie> {
    let adj = lie_adjoint(&m.endomorphism_ring()?, Variant::LieRinehart)?;
    let lr = adj
        .pullback()
        .lie_rinehart()
        .ok_or_else(|| Error::Precondition("adjoint carrier without A-action".into()))?;
    product_lie_rinehart(lr, l)
}

/// Canonical subspace equality of the two routes inside `End(M) ⊕ L`, and the
/// comparison map being a Lie–Rinehart isomorphism.
pub fn compare_gauge_routes(direct: &PullbackLie, product: &PullbackLie, m: &AModule) -> Result<Report> {
    let adj = lie_adjoint(&m.endomorphism_ring()?, Variant::LieRinehart)?;
    let l_dim = direct.factors()[1].lie.dim();
    let to_ambient = Matrix::block_diagonal(&[adj.ring_projection(), &Matrix::identity(l_dim)]);
    let image = product.carrier().image(&to_ambient)?;
    let mut rep = Report::new();
    rep.check("canonical_subspace", &image == direct.carrier(), || {
        format!("direct dim {}, product image dim {}", direct.dim(), image.dim())
    });
    let mut cols = Vec::with_capacity(product.dim());
    for v in product.carrier().basis() {
        match direct.coordinates(&to_ambient.apply(v))? {
            Some(c) => cols.push(c),
            None => {
                rep.fail("comparison_map", "product element outside the direct carrier");
                return Ok(rep);
            }
        }
    }
    let t = Matrix::from_columns(direct.dim(), &cols);
    rep.check(
        "comparison_bijective",
        t.rows() == t.cols() && t.rank() == t.rows(),
        || format!("{}×{} of rank {}", t.rows(), t.cols(), t.rank()),
    );
    match (product.lie_rinehart(), direct.lie_rinehart()) {
        (Some(p), Some(dr)) => rep.merge("comparison", LieMorphism::new(t).check_lie_rinehart(p, dr)),
        _ => rep.fail("comparison", "missing A-action"),
    }
    Ok(rep)
}

/// `M` as a `DO(A, L, M)`-module through `ϱ = p₁ ∘ q₁`.
pub fn gauge_module(l: &LieRinehartAlgebra, m: &AModule) -> Result<(PullbackLie, LieModuleStructure)> {
    let dop = gauge_algebra(l, m)?;
    let lr = dop
        .lie_rinehart()
        .ok_or_else(|| Error::Precondition("gauge algebra without A-action".into()))?
        .clone();
    let rho = dop.projection(0).clone();
    let s = LieModuleStructure::new(lr.into(), m.clone(), rho)?;
    Ok((dop, s))
}

/// Result of a universal-property check: the factorization, when it exists, and the report.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub map: Option<Matrix>,
    pub report: Report,
}

/// Factors `(ρ, f)` through `DO(A, L, M)`: the unique `f̃: L′ → DO` with
/// `ϱ ∘ f̃ = ρ` and `q₂ ∘ f̃ = f`. The acting structure `other` must be a
/// module structure on `m` and `f` a Lie–Rinehart morphism `L′ → L`.
pub fn gauge_universal(l: &LieRinehartAlgebra, other: &LieModuleStructure, f: &LieMorphism) -> Result<Factorization> {
    let src = other
        .lie
        .lie_rinehart()
        .ok_or_else(|| Error::Precondition("the acting structure must be Lie–Rinehart".into()))?;
    let module_report = check_module(other);
    if let Some(c) = module_report.failures().next() {
        return Err(Error::Precondition(format!(
            "not a module: {}: {}",
            c.name,
            c.witness.clone().unwrap_or_default()
        )));
    }
    let f_report = f.check_lie_rinehart(src, l);
    if let Some(c) = f_report.failures().next() {
        return Err(Error::Precondition(format!(
            "f is not a morphism: {}: {}",
            c.name,
            c.witness.clone().unwrap_or_default()
        )));
    }
    let dop = gauge_algebra(l, &other.module)?;
    let mut rep = Report::new();
    let map = dop.factor_cone(&[&other.rho, f.matrix()])?;
    match &map {
        None => rep.fail("factorization", "(ρ(X), f(X)) leaves DO(A, L, M) for some X"),
        Some(h) => {
            rep.pass("factorization");
            rep.check("rho_commutes", dop.projection(0).mul(h) == other.rho, || {
                "ϱ ∘ f̃ ≠ ρ".into()
            });
            rep.check("q2_commutes", &dop.projection(1).mul(h) == f.matrix(), || {
                "q₂ ∘ f̃ ≠ f".into()
            });
            let target = dop.lie_rinehart().expect("gauge algebra carries an action");
            rep.merge("morphism", LieMorphism::new(h.clone()).check_lie_rinehart(src, target));
        }
    }
    let k = dop.joint_projection_kernel_dim();
    rep.check("unique", k == 0, || format!("joint projection kernel has dim {k}"));
    Ok(Factorization { map, report: rep })
}

/// `τ: L → 𝒜_M`, `X ↦ (ρ(X), ω(X))`, the unique morphism with `p₁ ∘ τ = ρ`.
pub fn atiyah_universal(s: &LieModuleStructure) -> Result<(LieMorphism, Report)> {
    let lr = s
        .lie
        .lie_rinehart()
        .ok_or_else(|| Error::Precondition("atiyah_universal needs a Lie–Rinehart algebra".into()))?;
    let module_report = check_module(s);
    if let Some(c) = module_report.failures().next() {
        return Err(Error::Precondition(format!(
            "not a module: {}: {}",
            c.name,
            c.witness.clone().unwrap_or_default()
        )));
    }
    let carrier = atiyah(&s.module)?;
    let ders = carrier.derivations();
    let mut anchor_coords = Vec::with_capacity(lr.dim());
    for x in 0..lr.dim() {
        let c = ders
            .coordinates(&lr.anchored().omega(x))
            .ok_or_else(|| Error::Invalid {
                what: "anchor",
                detail: "ω(X) is not a derivation".into(),
            })?;
        anchor_coords.push(c);
    }
    let omega = Matrix::from_columns(ders.dim(), &anchor_coords);
    let tau = carrier
        .pullback()
        .factor_cone(&[&s.rho, &omega])?
        .ok_or_else(|| Error::CrossCheck("(ρ(X), ω(X)) leaves the Atiyah algebra".into()))?;
    let mut rep = Report::new();
    rep.check("p1_commutes", carrier.ring_projection().mul(&tau) == s.rho, || {
        "p₁ ∘ τ ≠ ρ".into()
    });
    let target = carrier
        .pullback()
        .lie_rinehart()
        .expect("Atiyah algebra carries an action");
    let tau = LieMorphism::new(tau);
    rep.merge("morphism", tau.check_lie_rinehart(lr, target));
    let k = carrier.pullback().joint_projection_kernel_dim();
    rep.check("unique", k == 0, || format!("joint projection kernel has dim {k}"));
    Ok((tau, rep))
}
