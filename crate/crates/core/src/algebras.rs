//! Finite-dimensional unital associative algebras given by structure constants,
//! their morphisms, A-rings, and derivation spaces.
//!
//! Endomorphisms of an `n`-dimensional space are flattened row-major: the
//! matrix entry `(r, c)` (coefficient of `e_r` in the image of `e_c`) sits at
//! index `r * n + c`. Every derivation space is therefore a nullspace in `ℚ^{n²}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::exactla::{unit_vector, vec_axpy, Matrix, Scalar, Subspace};
use crate::report::Report;

/// Renders `Σ vᵢ·namesᵢ`, e.g. `2*x + (1/2)*x²`; the zero vector renders as `0`.
pub fn format_combination(names: &[String], v: &[Scalar]) -> String {
    let terms: Vec<String> = v
        .iter()
        .zip(names)
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| format!("{}{}", format_coefficient(c), n))
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Coefficient prefix: empty for 1, `c*` for other integers, `(p/q)*` otherwise.
pub fn format_coefficient(c: &Scalar) -> String {
    if c.is_one() {
        String::new()
    } else if c.is_integer() {
        format!("{c}*")
    } else {
        format!("({c})*")
    }
}

fn superscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// A unital associative algebra over ℚ with basis `e_0, …, e_{n-1}` and
/// `e_i·e_j = Σ_k mul[(i·n + j)·n + k] e_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlgebraPresentation {
    name: String,
    basis_names: Vec<String>,
    mul: Vec<Scalar>,
    unit: Vec<Scalar>,
    generator: Option<usize>,
}

impl fmt::Debug for AlgebraPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({}, dim {})", self.name, self.dim())
    }
}

impl AlgebraPresentation {
    /// Builds a presentation, checking only table arity. Use [`validate`](Self::validate)
    /// for the algebra axioms.
    pub fn new(name: impl Into<String>, basis_names: Vec<String>, mul: Vec<Scalar>, unit: Vec<Scalar>) -> Result<Self> {
        let n = basis_names.len();
        if mul.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                op: "AlgebraPresentation::new (mul table)",
                expected: n * n * n,
                found: mul.len(),
            });
        }
        if unit.len() != n {
            return Err(Error::DimensionMismatch {
                op: "AlgebraPresentation::new (unit)",
                expected: n,
                found: unit.len(),
            });
        }
        Ok(AlgebraPresentation {
            name: name.into(),
            basis_names,
            mul,
            unit,
            generator: None,
        })
    }

    pub fn from_products(
        name: impl Into<String>,
        basis_names: Vec<String>,
        unit: Vec<Scalar>,
        mut product: impl FnMut(usize, usize) -> Vec<Scalar>,
    ) -> Self {
        let n = basis_names.len();
        let mut mul = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let p = product(i, j);
                assert_eq!(p.len(), n);
                mul.extend(p);
            }
        }
        AlgebraPresentation::new(name, basis_names, mul, unit).expect("consistent arity")
    }

    /// Records a basis index that generates the algebra; used only to name derivations.
    pub fn with_generator(mut self, g: Option<usize>) -> Self {
        self.generator = g.filter(|&g| g < self.dim());
        self
    }

    /// ℚ[x]/(xⁿ) with basis `1, x, x², …`.
    pub fn truncated_polynomial(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x{}", superscript(k)),
            })
            .collect();
        let name = if n == 1 {
            "Q".to_string()
        } else {
            format!("Q[x]/(x{})", superscript(n))
        };
        AlgebraPresentation::from_products(name, names, unit_vector(n, 0), |i, j| {
            let mut v = vec![Scalar::zero(); n];
            if i + j < n {
                v[i + j] = Scalar::one();
            }
            v
        })
        .with_generator(if n > 1 { Some(1) } else { None })
    }

    /// The ground field ℚ.
    pub fn ground_field() -> Self {
        AlgebraPresentation::truncated_polynomial(1)
    }

    /// ℚⁿ with orthogonal idempotents `e1, …, en`.
    pub fn split(n: usize) -> Self {
        let names = (1..=n).map(|i| format!("e{i}")).collect();
        AlgebraPresentation::from_products(format!("Q^{n}"), names, vec![Scalar::one(); n], |i, j| {
            let mut v = vec![Scalar::zero(); n];
            if i == j {
                v[i] = Scalar::one();
            }
            v
        })
    }

    /// n×n matrices with matrix units `E_ij` at index `i·n + j`.
    ///
    /// An element's coordinate vector is exactly the row-major flattening of the
    /// matrix, so `End(M)` of an `n`-dimensional module is `matrix_algebra(n)`.
    pub fn matrix_algebra(n: usize) -> Self {
        let names = (0..n * n).map(|k| format!("E{}{}", k / n + 1, k % n + 1)).collect();
        let unit = Matrix::identity(n).into_entries();
        AlgebraPresentation::from_products(format!("M{n}(Q)"), names, unit, |a, b| {
            let (i, j) = (a / n, a % n);
            let (k, l) = (b / n, b % n);
            let mut v = vec![Scalar::zero(); n * n];
            if j == k {
                v[i * n + l] = Scalar::one();
            }
            v
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis_names.len()
    }

    pub fn basis_names(&self) -> &[String] {
        &self.basis_names
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn generator(&self) -> Option<usize> {
        self.generator
    }

    pub fn structure_constants(&self) -> &[Scalar] {
        &self.mul
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &Scalar {
        let n = self.dim();
        &self.mul[(i * n + j) * n + k]
    }

    /// Coordinates of `e_i · e_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim();
        &self.mul[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        unit_vector(self.dim(), i)
    }

    pub fn zero_element(&self) -> Vec<Scalar> {
        vec![Scalar::zero(); self.dim()]
    }

    pub fn multiply(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        let mut out = vec![Scalar::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                vec_axpy(&mut out, &(ai * bj), self.basis_product(i, j));
            }
        }
        out
    }

    /// `ab − ba`.
    pub fn commutator(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let ab = self.multiply(a, b);
        let ba = self.multiply(b, a);
        ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
    }

    /// Matrix of `x ↦ a·x`.
    pub fn left_multiplication(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|j| self.multiply(a, &self.basis_vector(j)))
            .collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// Matrix of `x ↦ x·a`.
    pub fn right_multiplication(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|j| self.multiply(&self.basis_vector(j), a))
            .collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.basis_product(i, j) == self.basis_product(j, i)))
    }

    pub fn format_element(&self, v: &[Scalar]) -> String {
        format_combination(&self.basis_names, v)
    }

    fn triple_name(&self, i: usize, j: usize, k: usize) -> String {
        format!(
            "({i},{j},{k}) = ({},{},{})",
            self.basis_names[i], self.basis_names[j], self.basis_names[k]
        )
    }

    /// Reports every violated associativity and unit constraint.
    pub fn validate(&self) -> Report {
        let n = self.dim();
        let mut report = Report::new();
        let mut assoc = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let ij = self.basis_product(i, j).to_vec();
                for k in 0..n {
                    let left = self.multiply(&ij, &self.basis_vector(k));
                    let right = self.multiply(&self.basis_vector(i), self.basis_product(j, k));
                    if left != right {
                        assoc.push(format!(
                            "triple {}: (ab)c = {} but a(bc) = {}",
                            self.triple_name(i, j, k),
                            self.format_element(&left),
                            self.format_element(&right)
                        ));
                    }
                }
            }
        }
        report.axiom("associativity", assoc);

        let mut unit_left = Vec::new();
        let mut unit_right = Vec::new();
        for i in 0..n {
            let e = self.basis_vector(i);
            let l = self.multiply(&self.unit, &e);
            if l != e {
                unit_left.push(format!(
                    "basis {i} ({}): 1·e = {}",
                    self.basis_names[i],
                    self.format_element(&l)
                ));
            }
            let r = self.multiply(&e, &self.unit);
            if r != e {
                unit_right.push(format!(
                    "basis {i} ({}): e·1 = {}",
                    self.basis_names[i],
                    self.format_element(&r)
                ));
            }
        }
        report.axiom("unit_left", unit_left);
        report.axiom("unit_right", unit_right);
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().all_passed()
    }

    fn require_valid(&self, op: &str) -> Result<()> {
        let report = self.validate();
        if let Some(c) = report.failures().next() {
            return Err(Error::Invalid {
                what: "algebra",
                detail: format!(
                    "{op}: {} {} ({})",
                    self.name,
                    c.name,
                    c.witness.clone().unwrap_or_default()
                ),
            });
        }
        Ok(())
    }

    /// The opposite algebra: `e_i ∘ e_j = e_j · e_i`.
    pub fn opposite(&self) -> Result<Self> {
        self.require_valid("opposite")?;
        Ok(self.opposite_unchecked())
    }

    fn opposite_unchecked(&self) -> Self {
        let names = self.basis_names.iter().map(|s| format!("{s}°")).collect();
        AlgebraPresentation::from_products(format!("{}^op", self.name), names, self.unit.clone(), |i, j| {
            self.basis_product(j, i).to_vec()
        })
    }

    /// Tensor product with basis `e_i ⊗ f_j` at index `i·dim(other) + j`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.require_valid("tensor")?;
        other.require_valid("tensor")?;
        Ok(self.tensor_unchecked(other))
    }

    fn tensor_unchecked(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let names = self
            .basis_names
            .iter()
            .flat_map(|a| other.basis_names.iter().map(move |b| format!("{a}⊗{b}")))
            .collect();
        let unit = Matrix::from_columns(n, std::slice::from_ref(&self.unit))
            .kron(&Matrix::from_columns(m, std::slice::from_ref(&other.unit)))
            .into_entries();
        AlgebraPresentation::from_products(format!("{}⊗{}", self.name, other.name), names, unit, |a, b| {
            let (i, j) = (a / m, a % m);
            let (k, l) = (b / m, b % m);
            let p = self.basis_product(i, k);
            let q = other.basis_product(j, l);
            let mut v = vec![Scalar::zero(); n * m];
            for (s, ps) in p.iter().enumerate() {
                if ps.is_zero() {
                    continue;
                }
                for (t, qt) in q.iter().enumerate() {
                    if !qt.is_zero() {
                        v[s * m + t] = ps * qt;
                    }
                }
            }
            v
        })
    }

    /// `A^e = A ⊗ A^op`, basis `a_i ⊗ a_j°` at index `i·n + j`.
    pub fn enveloping(&self) -> Result<Self> {
        self.require_valid("enveloping")?;
        Ok(self.enveloping_unchecked())
    }

    pub(crate) fn enveloping_unchecked(&self) -> Self {
        self.tensor_unchecked(&self.opposite_unchecked())
            .with_name(format!("{}^e", self.name))
    }

    /// Linear constraints `δ(e_i e_j) − δ(e_i) e_j − e_i δ(e_j) = 0` on flattened `δ`.
    fn leibniz_constraints(&self) -> Matrix {
        let n = self.dim();
        let mut rows = Matrix::zeros(n * n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let row = (i * n + j) * n + k;
                    // δ(e_i e_j)_k = Σ_m c_ij^m δ[k][m]
                    for m in 0..n {
                        let c = self.structure_constant(i, j, m);
                        if !c.is_zero() {
                            rows[(row, k * n + m)] += c;
                        }
                    }
                    // (δ(e_i) e_j)_k = Σ_m δ[m][i] c_mj^k
                    for m in 0..n {
                        let c = self.structure_constant(m, j, k);
                        if !c.is_zero() {
                            rows[(row, m * n + i)] -= c;
                        }
                    }
                    // (e_i δ(e_j))_k = Σ_m δ[m][j] c_im^k
                    for m in 0..n {
                        let c = self.structure_constant(i, m, k);
                        if !c.is_zero() {
                            rows[(row, m * n + j)] -= c;
                        }
                    }
                }
            }
        }
        rows
    }

    /// `Der(A)` as a subspace of the flattened endomorphisms.
    pub fn derivation_space(&self) -> DerivationSpace {
        DerivationSpace {
            algebra: self.clone(),
            space: self.leibniz_constraints().nullspace(),
        }
    }

    /// Every violation of `δ(ab) = δ(a)b + aδ(b)` on basis pairs.
    pub fn leibniz_violations(&self, delta: &Matrix) -> Vec<String> {
        let n = self.dim();
        let mut out = Vec::new();
        if delta.rows() != n || delta.cols() != n {
            out.push(format!("shape {}x{} is not {n}x{n}", delta.rows(), delta.cols()));
            return out;
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = delta.apply(self.basis_product(i, j));
                let mut rhs = self.multiply(&delta.column(i), &self.basis_vector(j));
                let t = self.multiply(&self.basis_vector(i), &delta.column(j));
                rhs.iter_mut().zip(&t).for_each(|(a, b)| *a += b);
                if lhs != rhs {
                    out.push(format!(
                        "pair ({},{}): δ(ab) = {} but δ(a)b + aδ(b) = {}",
                        self.basis_names[i],
                        self.basis_names[j],
                        self.format_element(&lhs),
                        self.format_element(&rhs)
                    ));
                }
            }
        }
        out
    }
}

/// Flattens an `n × n` matrix to its row-major coordinate vector.
pub fn flatten(m: &Matrix) -> Vec<Scalar> {
    m.entries().to_vec()
}

/// Inverse of [`flatten`].
pub fn unflatten(n: usize, v: &[Scalar]) -> Matrix {
    Matrix::from_vec(n, v.len() / n.max(1), v.to_vec()).expect("flattened square matrix")
}

/// A linear endomorphism satisfying the Leibniz rule.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    matrix: Matrix,
}

impl Derivation {
    pub fn new(over: &AlgebraPresentation, matrix: Matrix) -> Result<Self> {
        let violations = over.leibniz_violations(&matrix);
        if let Some(v) = violations.into_iter().next() {
            return Err(Error::Invalid {
                what: "derivation",
                detail: v,
            });
        }
        debug_assert!(crate::exactla::vec_is_zero(&matrix.apply(over.unit())));
        Ok(Derivation { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.matrix.apply(a)
    }
}

/// `Der_ℚ(A)` with its canonical basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DerivationSpace {
    algebra: AlgebraPresentation,
    space: Subspace,
}

impl DerivationSpace {
    pub fn algebra(&self) -> &AlgebraPresentation {
        &self.algebra
    }

    pub fn subspace(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The `i`-th basis derivation as an `n × n` matrix.
    pub fn basis_derivation(&self, i: usize) -> Matrix {
        unflatten(self.algebra.dim(), &self.space.basis()[i])
    }

    /// `n² × dim` inclusion `Der(A) → End(A)`.
    pub fn inclusion(&self) -> Matrix {
        self.space.basis_matrix()
    }

    /// Coordinates of an endomorphism in the derivation basis, if it is a derivation.
    pub fn coordinates(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        self.space.coordinates(m.entries()).ok().flatten()
    }

    pub fn derivation(&self, coords: &[Scalar]) -> Matrix {
        unflatten(self.algebra.dim(), &self.space.vector(coords))
    }

    /// Basis names: `g∂` style when the algebra records a generator `g` and
    /// `δ(g)` is a single basis element, `(…)∂` for other images of `g`, `d{i}` otherwise.
    pub fn basis_names(&self) -> Vec<String> {
        (0..self.dim())
            .map(|i| match self.algebra.generator() {
                Some(g) => {
                    let image = self.basis_derivation(i).column(g);
                    let nonzero: Vec<usize> = (0..image.len()).filter(|&k| !image[k].is_zero()).collect();
                    if nonzero.len() == 1 && image[nonzero[0]].is_one() {
                        format!("{}∂", self.algebra.basis_names()[nonzero[0]])
                    } else {
                        format!("({})∂", self.algebra.format_element(&image))
                    }
                }
                None => format!("d{i}"),
            })
            .collect()
    }

    /// The commutator `[δ_i, δ_j]` expressed in the derivation basis.
    pub fn bracket_coordinates(&self, i: usize, j: usize) -> Result<Vec<Scalar>> {
        let c = self.basis_derivation(i).commutator(&self.basis_derivation(j));
        self.coordinates(&c)
            .ok_or_else(|| Error::NotClosed("commutator of derivations".into()))
    }

    /// `(a·δ)(b) = a·δ(b)`; only meaningful for commutative `A`.
    pub fn action_coordinates(&self, a: usize, j: usize) -> Result<Vec<Scalar>> {
        let l = self.algebra.left_multiplication(&self.algebra.basis_vector(a));
        let m = l.mul(&self.basis_derivation(j));
        self.coordinates(&m)
            .ok_or_else(|| Error::NotClosed("A-action on derivations".into()))
    }

    /// Renders a derivation by its values on the basis.
    pub fn describe(&self, m: &Matrix) -> String {
        let parts: Vec<String> = (0..self.algebra.dim())
            .filter(|&c| !m.column(c).iter().all(Scalar::is_zero))
            .map(|c| {
                format!(
                    "{} ↦ {}",
                    self.algebra.basis_names()[c],
                    self.algebra.format_element(&m.column(c))
                )
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(", ")
        }
    }
}

/// A unital algebra morphism, `matrix` is `target_dim × source_dim`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraMorphism {
    source: AlgebraPresentation,
    target: AlgebraPresentation,
    matrix: Matrix,
}

impl AlgebraMorphism {
    /// Checks shape, unitality and multiplicativity on basis pairs.
    pub fn new(source: AlgebraPresentation, target: AlgebraPresentation, matrix: Matrix) -> Result<Self> {
        let m = AlgebraMorphism::new_unchecked(source, target, matrix)?;
        let report = m.validate();
        if let Some(c) = report.failures().next() {
            return Err(Error::Invalid {
                what: "algebra morphism",
                detail: format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()),
            });
        }
        Ok(m)
    }

    /// Checks shape only.
    pub fn new_unchecked(source: AlgebraPresentation, target: AlgebraPresentation, matrix: Matrix) -> Result<Self> {
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                op: "AlgebraMorphism (matrix shape)",
                expected: target.dim() * source.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        Ok(AlgebraMorphism { source, target, matrix })
    }

    pub fn identity(a: &AlgebraPresentation) -> Self {
        AlgebraMorphism {
            source: a.clone(),
            target: a.clone(),
            matrix: Matrix::identity(a.dim()),
        }
    }

    /// `a ↦ l_a`, from `A` into `End(A) = M_n(ℚ)`.
    pub fn left_regular(a: &AlgebraPresentation) -> Self {
        let n = a.dim();
        let cols: Vec<Vec<Scalar>> = (0..n)
            .map(|i| flatten(&a.left_multiplication(&a.basis_vector(i))))
            .collect();
        AlgebraMorphism {
            source: a.clone(),
            target: AlgebraPresentation::matrix_algebra(n).with_name(format!("End({})", a.name())),
            matrix: Matrix::from_columns(n * n, &cols),
        }
    }

    pub fn source(&self) -> &AlgebraPresentation {
        &self.source
    }

    pub fn target(&self) -> &AlgebraPresentation {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.matrix.apply(a)
    }

    pub fn validate(&self) -> Report {
        let mut report = Report::new();
        let n = self.source.dim();
        let image_unit = self.apply(self.source.unit());
        report.check("unital", image_unit == self.target.unit(), || {
            format!("φ(1) = {}", self.target.format_element(&image_unit))
        });
        let mut mult = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let lhs = self.apply(self.source.basis_product(i, j));
                let rhs = self.target.multiply(&self.matrix.column(i), &self.matrix.column(j));
                if lhs != rhs {
                    mult.push(format!(
                        "pair ({},{}): φ(ab) = {} but φ(a)φ(b) = {}",
                        self.source.basis_names()[i],
                        self.source.basis_names()[j],
                        self.target.format_element(&lhs),
                        self.target.format_element(&rhs)
                    ));
                }
            }
        }
        report.axiom("multiplicative", mult);
        report
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &AlgebraMorphism) -> Result<AlgebraMorphism> {
        if other.source != self.target {
            return Err(Error::BaseMismatch(format!(
                "cannot compose {} → {} with {} → {}",
                self.source.name(),
                self.target.name(),
                other.source.name(),
                other.target.name()
            )));
        }
        Ok(AlgebraMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            matrix: other.matrix.mul(&self.matrix),
        })
    }

    /// The relative derivation space `Der(A, R)` inside flattened `Hom(A, R)`
    /// (`dim R × dim A`, row-major): `f(ab) = f(a)φ(b) + φ(a)f(b)`.
    pub fn relative_derivation_space(&self) -> Subspace {
        let (na, nr) = (self.source.dim(), self.target.dim());
        let idx = |r: usize, c: usize| r * na + c;
        let mut rows = Matrix::zeros(na * na * nr, nr * na);
        for i in 0..na {
            for j in 0..na {
                let phi_i = self.matrix.column(i);
                let phi_j = self.matrix.column(j);
                for k in 0..nr {
                    let row = (i * na + j) * nr + k;
                    for m in 0..na {
                        let c = self.source.structure_constant(i, j, m);
                        if !c.is_zero() {
                            rows[(row, idx(k, m))] += c;
                        }
                    }
                    // f(e_i)φ(e_j) and φ(e_i)f(e_j), linear in f's columns i and j
                    for s in 0..nr {
                        for t in 0..nr {
                            let c = self.target.structure_constant(s, t, k);
                            if c.is_zero() {
                                continue;
                            }
                            if !phi_j[t].is_zero() {
                                rows[(row, idx(s, i))] -= &(c * &phi_j[t]);
                            }
                            if !phi_i[s].is_zero() {
                                rows[(row, idx(t, j))] -= &(c * &phi_i[s]);
                            }
                        }
                    }
                }
            }
        }
        rows.nullspace()
    }

    /// `φ_* : End(A) → Hom(A, R)`, `δ ↦ φ∘δ`, on flattened coordinates.
    pub fn pushforward(&self) -> Matrix {
        self.matrix.left_composition_operator(self.source.dim())
    }

    /// `φ^* : End(R) → Hom(A, R)`, `d ↦ d∘φ`, on flattened coordinates.
    pub fn pullback_along(&self) -> Matrix {
        self.matrix.right_composition_operator(self.target.dim())
    }
}

/// A derivation relative to `φ : A → R`, stored as a `dim R × dim A` matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelativeDerivation {
    matrix: Matrix,
}

impl RelativeDerivation {
    pub fn new(phi: &AlgebraMorphism, matrix: Matrix) -> Result<Self> {
        let space = phi.relative_derivation_space();
        if matrix.rows() != phi.target().dim() || matrix.cols() != phi.source().dim() {
            return Err(Error::DimensionMismatch {
                op: "RelativeDerivation::new",
                expected: phi.target().dim() * phi.source().dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        if !space.contains(matrix.entries())? {
            return Err(Error::Invalid {
                what: "relative derivation",
                detail: "f(ab) ≠ f(a)φ(b) + φ(a)f(b)".into(),
            });
        }
        Ok(RelativeDerivation { matrix })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

/// An algebra `R` with a structure morphism `A → R`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ARing {
    structure_map: AlgebraMorphism,
}

impl ARing {
    /// Validates the structure map.
    pub fn new(structure_map: AlgebraMorphism) -> Result<Self> {
        let report = structure_map.validate();
        if let Some(c) = report.failures().next() {
            return Err(Error::Invalid {
                what: "A-ring structure map",
                detail: format!("{}: {}", c.name, c.witness.clone().unwrap_or_default()),
            });
        }
        Ok(ARing { structure_map })
    }

    pub fn base(&self) -> &AlgebraPresentation {
        self.structure_map.source()
    }

    pub fn ring(&self) -> &AlgebraPresentation {
        self.structure_map.target()
    }

    pub fn structure_map(&self) -> &AlgebraMorphism {
        &self.structure_map
    }

    /// `(End(A), a ↦ l_a)`.
    pub fn left_regular(a: &AlgebraPresentation) -> Self {
        ARing {
            structure_map: AlgebraMorphism::left_regular(a),
        }
    }

    /// `(A, id)`.
    pub fn identity(a: &AlgebraPresentation) -> Self {
        ARing {
            structure_map: AlgebraMorphism::identity(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;

    fn mat2() -> AlgebraPresentation {
        AlgebraPresentation::matrix_algebra(2)
    }

    #[test]
    fn families_are_valid() {
        let a2 = AlgebraPresentation::truncated_polynomial(2);
        assert!(a2.validate().all_passed());
        assert!(a2.is_commutative());
        let m = mat2();
        assert!(m.validate().all_passed());
        assert!(!m.is_commutative());
        assert!(AlgebraPresentation::split(3).is_valid());
        assert_eq!(a2.basis_names(), &["1", "x"]);
    }

    #[test]
    fn matrix_algebra_matches_direct_matrix_arithmetic() {
        let m = mat2();
        // oracle: multiply the 2x2 matrices directly
        for a in 0..4 {
            for b in 0..4 {
                let ma = unflatten(2, &m.basis_vector(a));
                let mb = unflatten(2, &m.basis_vector(b));
                assert_eq!(m.basis_product(a, b), ma.mul(&mb).entries());
            }
        }
    }

    #[test]
    fn tampered_unit_constant_is_named() {
        let a = AlgebraPresentation::truncated_polynomial(2);
        let mut mul = a.structure_constants().to_vec();
        mul[0] = q(2); // 1·1 = 2·1
        let bad = AlgebraPresentation::new("bad", a.basis_names().to_vec(), mul, a.unit().to_vec()).unwrap();
        let r = bad.validate();
        assert!(!r.all_passed());
        assert!(r.failures().any(|c| c.witness.as_deref().unwrap().contains("(0,0,")));
        assert!(bad.opposite().is_err());
    }

    #[test]
    fn opposite_is_involution_and_reverses_products() {
        let m = mat2();
        let op = m.opposite().unwrap();
        let opop = op.opposite().unwrap();
        assert_eq!(opop.structure_constants(), m.structure_constants());
        // e12 ∘ e21 in the opposite = e21·e12 = e22 (oracle: matrix product)
        let e12 = 1;
        let e21 = 2;
        let direct = unflatten(2, &m.basis_vector(e21)).mul(&unflatten(2, &m.basis_vector(e12)));
        assert_eq!(op.basis_product(e12, e21), direct.entries());
        let a3 = AlgebraPresentation::truncated_polynomial(3);
        assert_eq!(a3.opposite().unwrap().structure_constants(), a3.structure_constants());
    }

    #[test]
    fn tensor_dimensions_and_products() {
        let a2 = AlgebraPresentation::truncated_polynomial(2);
        let s = AlgebraPresentation::split(3);
        assert_eq!(a2.tensor(&s).unwrap().dim(), 6);
        let q1 = AlgebraPresentation::ground_field();
        assert_eq!(a2.tensor(&q1).unwrap().structure_constants(), a2.structure_constants());

        // (a⊗b)(a'⊗b') = aa'⊗bb' by expanding structure constants
        let t = a2.tensor(&a2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let lhs = t.basis_product(i * 2 + j, k * 2 + l);
                        let p = a2.basis_product(i, k);
                        let qv = a2.basis_product(j, l);
                        for s in 0..2 {
                            for u in 0..2 {
                                assert_eq!(lhs[s * 2 + u], &p[s] * &qv[u]);
                            }
                        }
                    }
                }
            }
        }
        assert!(t.is_valid());
    }

    #[test]
    fn enveloping_products() {
        let a3 = AlgebraPresentation::truncated_polynomial(3);
        let ae = a3.enveloping().unwrap();
        assert_eq!(ae.dim(), 9);
        assert!(ae.is_valid());
        assert_eq!(
            AlgebraPresentation::truncated_polynomial(2).enveloping().unwrap().dim(),
            4
        );
        assert_eq!(AlgebraPresentation::ground_field().enveloping().unwrap().dim(), 1);
        // (a⊗b°)(a'⊗b'°) = aa' ⊗ (b'b)°
        for (a, b, a2, b2) in [(1, 1, 1, 0), (0, 1, 1, 1), (1, 2, 0, 0), (2, 0, 0, 2)] {
            let lhs = ae.basis_product(a * 3 + b, a2 * 3 + b2);
            let left = a3.basis_product(a, a2);
            let right = a3.basis_product(b2, b);
            for s in 0..3 {
                for t in 0..3 {
                    assert_eq!(lhs[s * 3 + t], &left[s] * &right[t]);
                }
            }
        }
        let m = mat2().enveloping().unwrap();
        assert!(m.is_valid());
    }

    #[test]
    fn derivations_of_truncated_polynomials() {
        let a2 = AlgebraPresentation::truncated_polynomial(2);
        let d2 = a2.derivation_space();
        assert_eq!(d2.dim(), 1);
        assert_eq!(d2.basis_names(), vec!["x∂"]);

        let a3 = AlgebraPresentation::truncated_polynomial(3);
        let d3 = a3.derivation_space();
        assert_eq!(d3.dim(), 2);
        assert_eq!(d3.basis_names(), vec!["x∂", "x²∂"]);
        // [x∂, x²∂] = x²∂
        assert_eq!(d3.bracket_coordinates(0, 1).unwrap(), vec![q(0), q(1)]);
        for i in 0..d3.dim() {
            assert!(Derivation::new(&a3, d3.basis_derivation(i)).is_ok());
        }

        assert_eq!(AlgebraPresentation::split(2).derivation_space().dim(), 0);
        assert_eq!(AlgebraPresentation::truncated_polynomial(4).derivation_space().dim(), 3);
    }

    #[test]
    fn derivations_kill_unit_and_are_closed() {
        for a in [AlgebraPresentation::truncated_polynomial(4), mat2()] {
            let d = a.derivation_space();
            for i in 0..d.dim() {
                assert!(d.basis_derivation(i).apply(a.unit()).iter().all(Scalar::is_zero));
                for j in 0..d.dim() {
                    assert!(d.bracket_coordinates(i, j).is_ok());
                }
            }
        }
        // all derivations of M2 are inner: dim 3
        assert_eq!(mat2().derivation_space().dim(), 3);
    }

    #[test]
    fn relative_derivations() {
        let a3 = AlgebraPresentation::truncated_polynomial(3);
        let id = AlgebraMorphism::identity(&a3);
        assert_eq!(id.relative_derivation_space(), a3.derivation_space().subspace().clone());
        let q1 = AlgebraPresentation::ground_field();
        let to_a3 =
            AlgebraMorphism::new(q1.clone(), a3.clone(), Matrix::from_columns(3, &[a3.unit().to_vec()])).unwrap();
        assert_eq!(to_a3.relative_derivation_space().dim(), 0);

        let a2 = AlgebraPresentation::truncated_polynomial(2);
        let l = AlgebraMorphism::left_regular(&a2);
        assert!(l.validate().all_passed());
        let rel = l.relative_derivation_space();
        // oracle: every basis vector satisfies the relative Leibniz rule directly
        for b in rel.basis() {
            let f = unflatten(4, b);
            for i in 0..2 {
                for j in 0..2 {
                    let lhs = f.apply(a2.basis_product(i, j));
                    let mut rhs = l.target().multiply(&f.column(i), &l.matrix().column(j));
                    let t = l.target().multiply(&l.matrix().column(i), &f.column(j));
                    rhs.iter_mut().zip(&t).for_each(|(x, y)| *x += y);
                    assert_eq!(lhs, rhs);
                }
            }
        }
        // f(1) = 0 and f(x) = y with x̂ y + y x̂ = 0 where x̂ = l_x: 2-dimensional
        assert_eq!(rel.dim(), 2);
    }

    #[test]
    fn push_and_pull_land_in_relative_derivations() {
        let a3 = AlgebraPresentation::truncated_polynomial(3);
        let l = AlgebraMorphism::left_regular(&a3);
        let rel = l.relative_derivation_space();
        let ders = a3.derivation_space();
        for i in 0..ders.dim() {
            let pushed = l.pushforward().apply(ders.subspace().basis()[i].as_slice());
            assert!(rel.contains(&pushed).unwrap());
        }
        let r = l.target();
        let dr = r.derivation_space();
        for i in 0..dr.dim() {
            let pulled = l.pullback_along().apply(dr.subspace().basis()[i].as_slice());
            assert!(rel.contains(&pulled).unwrap());
        }
        // id: both maps are identities on flattened endomorphisms
        let id = AlgebraMorphism::identity(&a3);
        assert_eq!(id.pushforward(), Matrix::identity(9));
        assert_eq!(id.pullback_along(), Matrix::identity(9));
        // x∂ pushed along l: the map a ↦ l_{δ(a)}
        let pushed = unflatten(9, &l.pushforward().apply(ders.subspace().basis()[0].as_slice()));
        assert!(RelativeDerivation::new(&l, pushed).is_ok());
    }

    #[test]
    fn morphism_checks() {
        let a3 = AlgebraPresentation::truncated_polynomial(3);
        let a2 = AlgebraPresentation::truncated_polynomial(2);
        // x ↦ x from A3 to A2 is fine (x³ ↦ 0)
        let m = Matrix::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0]]);
        assert!(AlgebraMorphism::new(a3.clone(), a2.clone(), m).is_ok());
        // x ↦ x from A2 to A3 is not (x² = 0 but x² ≠ 0 in A3)
        let bad = Matrix::from_i64_rows(&[&[1, 0], &[0, 1], &[0, 0]]);
        assert!(AlgebraMorphism::new(a2, a3, bad).is_err());
    }
}
