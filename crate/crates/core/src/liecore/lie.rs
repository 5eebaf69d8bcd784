use std::fmt;

use crate::algebras::{format_combination, AlgebraPresentation, DerivationSpace};
use crate::error::{Error, Result};
use crate::exactla::{unit_vector, vec_axpy, Matrix, Scalar, Subspace};
use crate::report::Report;

/// A finite-dimensional Lie algebra over ℚ: `[e_i, e_j] = Σ_k bracket[(i·n + j)·n + k] e_k`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LieAlgebra {
    name: String,
    basis_names: Vec<String>,
    bracket: Vec<Scalar>,
}

impl fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lie({}, dim {})", self.name, self.dim())
    }
}

impl LieAlgebra {
    pub fn new(name: impl Into<String>, basis_names: Vec<String>, bracket: Vec<Scalar>) -> Result<Self> {
        let n = basis_names.len();
        if bracket.len() != n * n * n {
            return Err(Error::DimensionMismatch {
                op: "LieAlgebra::new (bracket table)",
                expected: n * n * n,
                found: bracket.len(),
            });
        }
        Ok(LieAlgebra {
            name: name.into(),
            basis_names,
            bracket,
        })
    }

    pub fn from_brackets(
        name: impl Into<String>,
        basis_names: Vec<String>,
        mut bracket: impl FnMut(usize, usize) -> Vec<Scalar>,
    ) -> Self {
        let n = basis_names.len();
        let mut table = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                let b = bracket(i, j);
                assert_eq!(b.len(), n);
                table.extend(b);
            }
        }
        LieAlgebra::new(name, basis_names, table).expect("consistent arity")
    }

    pub fn abelian(n: usize) -> Self {
        let names = (1..=n).map(|i| format!("X{i}")).collect();
        LieAlgebra::new(format!("ab{n}"), names, vec![Scalar::zero(); n * n * n]).unwrap()
    }

    /// `X < Y < Z` with `[X, Y] = Z` and `Z` central.
    pub fn heisenberg() -> Self {
        let names = vec!["X".to_string(), "Y".to_string(), "Z".to_string()];
        LieAlgebra::from_brackets("heisenberg", names, |i, j| {
            let mut v = vec![Scalar::zero(); 3];
            match (i, j) {
                (0, 1) => v[2] = Scalar::one(),
                (1, 0) => v[2] = -Scalar::one(),
                _ => {}
            }
            v
        })
    }

    /// `A` with `[a, b] = ab − ba`.
    pub fn commutator_algebra(a: &AlgebraPresentation) -> Self {
        LieAlgebra::from_brackets(format!("Lie({})", a.name()), a.basis_names().to_vec(), |i, j| {
            a.commutator(&a.basis_vector(i), &a.basis_vector(j))
        })
    }

    /// `Der(A)` with the commutator bracket in its canonical basis.
    pub fn of_derivations(ders: &DerivationSpace) -> Self {
        LieAlgebra::from_brackets(format!("Der({})", ders.algebra().name()), ders.basis_names(), |i, j| {
            ders.bracket_coordinates(i, j)
                .expect("derivations close under commutator")
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn with_basis_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.dim());
        self.basis_names = names;
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

    pub fn structure_constants(&self) -> &[Scalar] {
        &self.bracket
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[Scalar] {
        let n = self.dim();
        &self.bracket[(i * n + j) * n..(i * n + j + 1) * n]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        unit_vector(self.dim(), i)
    }

    pub fn bracket(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if !yj.is_zero() {
                    vec_axpy(&mut out, &(xi * yj), self.basis_bracket(i, j));
                }
            }
        }
        out
    }

    /// Matrix of `ad_x = [x, −]`.
    pub fn ad(&self, x: &[Scalar]) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|j| self.bracket(x, &self.basis_vector(j)))
            .collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    pub fn format_element(&self, v: &[Scalar]) -> String {
        format_combination(&self.basis_names, v)
    }

    pub fn is_abelian(&self) -> bool {
        self.bracket.iter().all(Scalar::is_zero)
    }

    /// Antisymmetry on basis pairs and the Jacobi identity on all basis triples.
    pub fn validate(&self) -> Report {
        let n = self.dim();
        let names = &self.basis_names;
        let mut report = Report::new();
        let mut anti = Vec::new();
        for i in 0..n {
            for j in i..n {
                let a = self.basis_bracket(i, j);
                let b = self.basis_bracket(j, i);
                let ok = a.iter().zip(b).all(|(p, q)| (p + q).is_zero());
                if !ok {
                    anti.push(format!(
                        "pair ({i},{j}) = ({},{}): [a,b] = {} and [b,a] = {}",
                        names[i],
                        names[j],
                        self.format_element(a),
                        self.format_element(b)
                    ));
                }
            }
        }
        report.axiom("antisymmetry", anti);

        let mut jacobi = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (x, y, z) = (self.basis_vector(i), self.basis_vector(j), self.basis_vector(k));
                    let mut sum = self.bracket(&x, self.basis_bracket(j, k));
                    let t1 = self.bracket(&y, self.basis_bracket(k, i));
                    let t2 = self.bracket(&z, self.basis_bracket(i, j));
                    for (s, (a, b)) in sum.iter_mut().zip(t1.iter().zip(&t2)) {
                        *s += a;
                        *s += b;
                    }
                    if !sum.iter().all(Scalar::is_zero) {
                        jacobi.push(format!(
                            "triple ({i},{j},{k}) = ({},{},{}): cyclic sum = {}",
                            names[i],
                            names[j],
                            names[k],
                            self.format_element(&sum)
                        ));
                    }
                }
            }
        }
        report.axiom("jacobi", jacobi);
        report
    }

    pub fn is_valid(&self) -> bool {
        self.validate().all_passed()
    }

    /// Violations of `f([X,Y]) = [f(X), f(Y)]` for a linear map `f: self → target`.
    pub fn morphism_violations(&self, target: &LieAlgebra, f: &Matrix) -> Vec<String> {
        if f.rows() != target.dim() || f.cols() != self.dim() {
            return vec![format!(
                "shape {}x{} is not {}x{}",
                f.rows(),
                f.cols(),
                target.dim(),
                self.dim()
            )];
        }
        let mut out = Vec::new();
        for i in 0..self.dim() {
            for j in i + 1..self.dim() {
                let lhs = f.apply(self.basis_bracket(i, j));
                let rhs = target.bracket(&f.column(i), &f.column(j));
                if lhs != rhs {
                    out.push(format!(
                        "pair ({},{}): f([X,Y]) = {} but [f(X),f(Y)] = {}",
                        self.basis_names[i],
                        self.basis_names[j],
                        target.format_element(&lhs),
                        target.format_element(&rhs)
                    ));
                }
            }
        }
        out
    }

    /// `L₁ ⊕ … ⊕ L_k` with block-diagonal bracket; factor `i` occupies a contiguous block.
    pub fn direct_sum(parts: &[&LieAlgebra]) -> LieAlgebra {
        let offsets = block_offsets(parts.iter().map(|p| p.dim()));
        let total = *offsets.last().unwrap();
        let names = parts
            .iter()
            .enumerate()
            .flat_map(|(f, p)| p.basis_names.iter().map(move |s| format!("{s}@{}", f + 1)))
            .collect();
        let name = parts.iter().map(|p| p.name.as_str()).collect::<Vec<_>>().join(" ⊕ ");
        let owner = |g: usize| offsets.iter().rposition(|&o| o <= g).unwrap();
        LieAlgebra::from_brackets(name, names, |i, j| {
            let mut v = vec![Scalar::zero(); total];
            let (fi, fj) = (owner(i), owner(j));
            if fi == fj {
                let o = offsets[fi];
                v[o..o + parts[fi].dim()].clone_from_slice(parts[fi].basis_bracket(i - o, j - o));
            }
            v
        })
    }

    /// The bracket restricted to a subspace, in the subspace's canonical basis.
    pub fn restrict(&self, sub: &Subspace, basis_names: Vec<String>) -> Result<LieAlgebra> {
        let table = restrict_bilinear(sub, |x, y| self.bracket(x, y), "bracket")?;
        LieAlgebra::new(format!("{}|sub", self.name), basis_names, table)
    }
}

/// `[0, d₀, d₀ + d₁, …]`.
pub(crate) fn block_offsets(dims: impl Iterator<Item = usize>) -> Vec<usize> {
    let mut offsets = vec![0];
    for d in dims {
        offsets.push(offsets.last().unwrap() + d);
    }
    offsets
}

/// Structure constants of a bilinear operation on `sub`, in its canonical basis.
pub(crate) fn restrict_bilinear(
    sub: &Subspace,
    op: impl Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
    what: &str,
) -> Result<Vec<Scalar>> {
    let d = sub.dim();
    let mut table = Vec::with_capacity(d * d * d);
    for x in sub.basis() {
        for y in sub.basis() {
            let z = op(x, y);
            match sub.coordinates(&z)? {
                Some(c) => table.extend(c),
                None => return Err(Error::NotClosed(what.to_string())),
            }
        }
    }
    Ok(table)
}

/// Names a vector of a direct sum by its components: `(x∂ | X)`.
pub(crate) fn format_blocks(blocks: &[&[String]], v: &[Scalar]) -> String {
    let mut at = 0;
    let parts: Vec<String> = blocks
        .iter()
        .map(|names| {
            let s = format_combination(names, &v[at..at + names.len()]);
            at += names.len();
            s
        })
        .collect();
    format!("({})", parts.join(" | "))
}
