use std::collections::HashMap;

use rand::Rng;

use super::combination::{monomials_up_to, Combination, Monomial, PbwElement, SmashElement};
use super::enveloping::UniversalEnveloping;
use crate::algebras::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Scalar};
use crate::liecore::AnchoredLieAlgebra;

/// The extension `Ω: U(L) → End(A)` of the anchor: `Ω(X_{i1}⋯X_{ik}) = ω(X_{i1}) ∘ ⋯ ∘ ω(X_{ik})`.
#[derive(Clone, Debug)]
pub(crate) struct ActionCache {
    anchored: AnchoredLieAlgebra,
    omegas: Vec<Matrix>,
    cache: HashMap<Monomial, Matrix>,
}

impl ActionCache {
    pub(crate) fn new(anchored: &AnchoredLieAlgebra) -> Self {
        ActionCache {
            anchored: anchored.clone(),
            omegas: (0..anchored.dim()).map(|i| anchored.omega(i)).collect(),
            cache: HashMap::new(),
        }
    }

    pub(crate) fn matrix(&mut self, m: &Monomial) -> Matrix {
        if let Some(hit) = self.cache.get(m) {
            return hit.clone();
        }
        let n = self.anchored.base().dim();
        let mut acc = Matrix::identity(n);
        for g in m.word() {
            acc = acc.mul(&self.omegas[g]);
        }
        self.cache.insert(m.clone(), acc.clone());
        acc
    }
}

/// Exact arithmetic in the smash product `A # U(L)`: `(a ⊗ u)(b ⊗ v) = Σ a(u₁·b) ⊗ u₂v`.
///
/// The anchor is used as given; products are associative exactly when it is a
/// Lie morphism into derivations.
#[derive(Clone, Debug)]
pub struct SmashAlgebra {
    anchored: AnchoredLieAlgebra,
    env: UniversalEnveloping,
}

impl SmashAlgebra {
    pub fn new(anchored: AnchoredLieAlgebra) -> Self {
        let env = UniversalEnveloping::new(anchored.lie().clone());
        SmashAlgebra { anchored, env }
    }

    pub fn anchored(&self) -> &AnchoredLieAlgebra {
        &self.anchored
    }

    pub fn base(&self) -> &AlgebraPresentation {
        self.anchored.base()
    }

    pub fn enveloping(&self) -> &UniversalEnveloping {
        &self.env
    }

    /// `Ω(u)` as an endomorphism of `A`.
    pub fn action_matrix(&self, u: &PbwElement) -> Result<Matrix> {
        self.env.check_element(u)?;
        let n = self.base().dim();
        let mut cache = ActionCache::new(&self.anchored);
        let mut out = Matrix::zeros(n, n);
        for (m, c) in u.iter() {
            out = out.add(&cache.matrix(m).scale(c));
        }
        Ok(out)
    }

    /// `u · a = Ω(u)(a)`.
    pub fn module_action(&self, u: &PbwElement, a: &[Scalar]) -> Result<Vec<Scalar>> {
        if a.len() != self.base().dim() {
            return Err(Error::DimensionMismatch {
                op: "module action (base element)",
                expected: self.base().dim(),
                found: a.len(),
            });
        }
        Ok(self.action_matrix(u)?.apply(a))
    }

    pub fn one(&self) -> SmashElement {
        let one = Monomial::one(self.env.rank());
        self.base()
            .unit()
            .iter()
            .enumerate()
            .map(|(i, c)| ((i, one.clone()), c.clone()))
            .collect()
    }

    /// `j_A(a) = a ⊗ 1`.
    pub fn j_a(&self, a: &[Scalar]) -> SmashElement {
        let one = Monomial::one(self.env.rank());
        a.iter()
            .enumerate()
            .map(|(i, c)| ((i, one.clone()), c.clone()))
            .collect()
    }

    /// `j_L(X) = 1 ⊗ X`.
    pub fn j_l(&self, x: &[Scalar]) -> SmashElement {
        self.tensor(self.base().unit(), &self.env.from_lie(x))
    }

    /// `a ⊗ u`.
    pub fn tensor(&self, a: &[Scalar], u: &PbwElement) -> SmashElement {
        let mut out = Combination::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (m, c) in u.iter() {
                out.add_term((i, m.clone()), ai * c);
            }
        }
        out
    }

    pub fn basis_element(&self, a: usize, m: Monomial) -> SmashElement {
        Combination::term((a, m), Scalar::one())
    }

    fn check(&self, s: &SmashElement) -> Result<()> {
        for (a, m) in s.keys() {
            if *a >= self.base().dim() {
                return Err(Error::DimensionMismatch {
                    op: "smash element (base index)",
                    expected: self.base().dim(),
                    found: a + 1,
                });
            }
            if m.len() != self.env.rank() {
                return Err(Error::DimensionMismatch {
                    op: "smash element (monomial length)",
                    expected: self.env.rank(),
                    found: m.len(),
                });
            }
        }
        Ok(())
    }

    pub fn multiply(&self, s: &SmashElement, t: &SmashElement) -> Result<SmashElement> {
        self.check(s)?;
        self.check(t)?;
        let base = self.base();
        let mut cache = ActionCache::new(&self.anchored);
        let mut out = Combination::zero();
        for ((a, u), c) in s.iter() {
            let delta = self.env.coproduct_unchecked(&self.env.monomial(u.clone()), 2);
            for ((b, v), d) in t.iter() {
                let cd = c * d;
                let v_elem = self.env.monomial(v.clone());
                for (legs, e) in delta.iter() {
                    let moved = cache.matrix(&legs[0]).column(*b);
                    let left = base.multiply(&base.basis_vector(*a), &moved);
                    let right = self.env.multiply_monomial(&legs[1], &v_elem);
                    let coeff = &cd * e;
                    for (i, li) in left.iter().enumerate() {
                        if li.is_zero() {
                            continue;
                        }
                        for (m, rm) in right.iter() {
                            out.add_term((i, m.clone()), &coeff * &(li * rm));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, s: &SmashElement, t: &SmashElement) -> Result<SmashElement> {
        Ok(self.multiply(s, t)?.sub(&self.multiply(t, s)?))
    }

    /// `e_a ⊗ m` for all base indices and monomials of degree ≤ `max_degree`.
    pub fn filtered_basis(&self, max_degree: u32) -> Vec<(usize, Monomial)> {
        let monos = monomials_up_to(self.env.rank(), max_degree);
        monos
            .iter()
            .flat_map(|m| (0..self.base().dim()).map(move |a| (a, m.clone())))
            .collect()
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R, max_degree: u32, terms: usize) -> SmashElement {
        let mut out = Combination::zero();
        for _ in 0..terms.max(1) {
            let u = self.env.random_element(rng, max_degree, 1);
            let a = rng.gen_range(0..self.base().dim());
            for (m, c) in u.iter() {
                out.add_term((a, m.clone()), c.clone());
            }
        }
        out
    }

    /// `ω(X_i)` as an endomorphism of `A`.
    pub fn omega(&self, i: usize) -> Matrix {
        self.anchored.omega(i)
    }
}

/// Coordinates of `elem` in the listed basis, or `None` if some key is missing.
pub fn coordinates_in<K: Ord + Clone>(basis: &[K], elem: &Combination<K>) -> Option<Vec<Scalar>> {
    let index: std::collections::BTreeMap<&K, usize> = basis.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let mut v = vec![Scalar::zero(); basis.len()];
    for (k, c) in elem.iter() {
        v[*index.get(k)?] = c.clone();
    }
    Some(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::q;
    use crate::liecore::LieAlgebra;

    fn a3() -> AlgebraPresentation {
        AlgebraPresentation::truncated_polynomial(3)
    }

    fn der_a3() -> SmashAlgebra {
        SmashAlgebra::new(AnchoredLieAlgebra::derivations(&a3()))
    }

    #[test]
    fn module_action_examples() {
        let s = der_a3();
        let u = s.enveloping().generator(0); // x∂
        let x2 = a3().basis_vector(2);
        assert_eq!(s.module_action(&u, &x2).unwrap(), vec![q(0), q(0), q(2)]);
        assert_eq!(s.module_action(&s.enveloping().one(), &x2).unwrap(), x2);
        let uu = s.enveloping().multiply(&u, &u).unwrap();
        assert!(s.module_action(&uu, a3().unit()).unwrap().iter().all(Scalar::is_zero));
    }

    #[test]
    fn d_times_x_with_plain_derivative_anchor() {
        // L = span{d}, ω(d) = d/dx on the table of ℚ[x]/(x³) (not a derivation there)
        let a = a3();
        let mut partial = Matrix::zeros(3, 3);
        partial[(0, 1)] = q(1);
        partial[(1, 2)] = q(2);
        let anchored = AnchoredLieAlgebra::new(
            LieAlgebra::abelian(1),
            a.clone(),
            Matrix::from_columns(9, &[partial.into_entries()]),
        )
        .unwrap();
        let s = SmashAlgebra::new(anchored);
        let d = s.j_l(&[q(1)]);
        let x = s.j_a(&a.basis_vector(1));
        let prod = s.multiply(&d, &x).unwrap();
        let expected = s
            .basis_element(1, Monomial::generator(1, 0))
            .add(&s.basis_element(0, Monomial::one(1)));
        assert_eq!(prod, expected);
    }

    #[test]
    fn j_a_is_multiplicative_and_bracket_identity() {
        let s = der_a3();
        let a = a3();
        for i in 0..3 {
            for j in 0..3 {
                let lhs = s
                    .multiply(&s.j_a(&a.basis_vector(i)), &s.j_a(&a.basis_vector(j)))
                    .unwrap();
                assert_eq!(lhs, s.j_a(a.basis_product(i, j)));
            }
        }
        for x in 0..2 {
            let jl = s.j_l(&s.enveloping().lie().basis_vector(x));
            for i in 0..3 {
                let ja = s.j_a(&a.basis_vector(i));
                let lhs = s.commutator(&jl, &ja).unwrap();
                let rhs = s.j_a(&s.omega(x).apply(&a.basis_vector(i)));
                assert_eq!(lhs, rhs);
            }
        }
        let one = s.one();
        let e = s.basis_element(1, Monomial::generator(2, 1));
        assert_eq!(s.multiply(&one, &e).unwrap(), e);
        assert_eq!(s.multiply(&e, &one).unwrap(), e);
    }

    #[test]
    fn coordinates_in_basis() {
        let s = der_a3();
        let basis = s.filtered_basis(1);
        assert_eq!(basis.len(), 9);
        let e = s.j_l(&[q(2), q(0)]);
        let v = coordinates_in(&basis, &e).unwrap();
        assert_eq!(v.iter().filter(|c| !c.is_zero()).count(), 1);
        assert!(coordinates_in(&s.filtered_basis(0), &e).is_none());
    }
}
