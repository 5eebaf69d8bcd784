use rand::Rng;

use super::combination::{monomials_up_to, CmElement, Combination, Monomial, PbwElement, SmashElement};
use super::enveloping::UniversalEnveloping;
use super::smash::{ActionCache, SmashAlgebra};
use crate::algebras::AlgebraPresentation;
use crate::error::{Error, Result};
use crate::exactla::Scalar;
use crate::liecore::{functor_e, AnchoredLieAlgebra};

/// The ring `A ⊙ U(L) ⊙ A` on `A ⊗ U(L) ⊗ A` with
/// `(a ⊗ u ⊗ b)(a' ⊗ v ⊗ b') = Σ a(u₁·a') ⊗ u₂v ⊗ (u₃·b')b`.
///
/// Sweedler legs are read left to right: `u₁` acts on the left base factor,
/// `u₃` on the right one.
#[derive(Clone, Debug)]
pub struct CmAlgebra {
    anchored: AnchoredLieAlgebra,
    env: UniversalEnveloping,
}

impl CmAlgebra {
    pub fn new(anchored: AnchoredLieAlgebra) -> Self {
        let env = UniversalEnveloping::new(anchored.lie().clone());
        CmAlgebra { anchored, env }
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

    pub fn one(&self) -> CmElement {
        self.tensor(self.base().unit(), &self.env.one(), self.base().unit())
    }

    /// `a ⊗ u ⊗ b`.
    pub fn tensor(&self, a: &[Scalar], u: &PbwElement, b: &[Scalar]) -> CmElement {
        let mut out = Combination::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                for (m, c) in u.iter() {
                    out.add_term((i, m.clone(), j), &(ai * bj) * c);
                }
            }
        }
        out
    }

    /// `J_A(a ⊗ b°) = a ⊗ 1 ⊗ b`, for `v` in `A^e` coordinates (`a_i ⊗ a_j°` at `i·n + j`).
    pub fn j_a(&self, v: &[Scalar]) -> CmElement {
        let n = self.base().dim();
        let one = Monomial::one(self.env.rank());
        v.iter()
            .enumerate()
            .map(|(k, c)| ((k / n, one.clone(), k % n), c.clone()))
            .collect()
    }

    /// `J_L(X) = 1 ⊗ X ⊗ 1`.
    pub fn j_l(&self, x: &[Scalar]) -> CmElement {
        self.tensor(self.base().unit(), &self.env.from_lie(x), self.base().unit())
    }

    pub fn basis_element(&self, a: usize, m: Monomial, b: usize) -> CmElement {
        Combination::term((a, m, b), Scalar::one())
    }

    fn check(&self, s: &CmElement) -> Result<()> {
        let n = self.base().dim();
        for (a, m, b) in s.keys() {
            if *a >= n || *b >= n {
                return Err(Error::DimensionMismatch {
                    op: "cm element (base index)",
                    expected: n,
                    found: (*a).max(*b) + 1,
                });
            }
            if m.len() != self.env.rank() {
                return Err(Error::DimensionMismatch {
                    op: "cm element (monomial length)",
                    expected: self.env.rank(),
                    found: m.len(),
                });
            }
        }
        Ok(())
    }

    pub fn multiply(&self, s: &CmElement, t: &CmElement) -> Result<CmElement> {
        self.check(s)?;
        self.check(t)?;
        let base = self.base();
        let mut cache = ActionCache::new(&self.anchored);
        let mut out = Combination::zero();
        for ((a, u, b), c) in s.iter() {
            let delta = self.env.coproduct_unchecked(&self.env.monomial(u.clone()), 3);
            for ((a2, v, b2), d) in t.iter() {
                let cd = c * d;
                let v_elem = self.env.monomial(v.clone());
                for (legs, e) in delta.iter() {
                    let left = base.multiply(&base.basis_vector(*a), &cache.matrix(&legs[0]).column(*a2));
                    let right = base.multiply(&cache.matrix(&legs[2]).column(*b2), &base.basis_vector(*b));
                    let middle = self.env.multiply_monomial(&legs[1], &v_elem);
                    let coeff = &cd * e;
                    for (i, li) in left.iter().enumerate() {
                        if li.is_zero() {
                            continue;
                        }
                        for (j, rj) in right.iter().enumerate() {
                            if rj.is_zero() {
                                continue;
                            }
                            let lr = li * rj;
                            for (m, mc) in middle.iter() {
                                out.add_term((i, m.clone(), j), &coeff * &(&lr * mc));
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, s: &CmElement, t: &CmElement) -> Result<CmElement> {
        Ok(self.multiply(s, t)?.sub(&self.multiply(t, s)?))
    }

    pub fn filtered_basis(&self, max_degree: u32) -> Vec<(usize, Monomial, usize)> {
        let n = self.base().dim();
        let monos = monomials_up_to(self.env.rank(), max_degree);
        monos
            .iter()
            .flat_map(|m| (0..n).flat_map(move |a| (0..n).map(move |b| (a, m.clone(), b))))
            .collect()
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R, max_degree: u32, terms: usize) -> CmElement {
        let n = self.base().dim();
        let mut out = Combination::zero();
        for _ in 0..terms.max(1) {
            let u = self.env.random_element(rng, max_degree, 1);
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            for (m, c) in u.iter() {
                out.add_term((a, m.clone(), b), c.clone());
            }
        }
        out
    }
}

/// The linear map `(a ⊗ b°) ⊗ u ↦ a ⊗ u ⊗ b` from `A^e # U(L)` to `A ⊙ U(L) ⊙ A`.
#[derive(Clone, Debug)]
pub struct CmIsomorphism {
    smash: SmashAlgebra,
    cm: CmAlgebra,
}

impl CmIsomorphism {
    /// Requires the smash base to be `A^e` and its anchor to be `E_A(ω)`.
    pub fn new(smash: SmashAlgebra, cm: CmAlgebra) -> Result<Self> {
        let ae = cm.base().enveloping()?;
        if smash.base() != &ae {
            return Err(Error::BaseMismatch(format!(
                "smash base {} is not {}",
                smash.base().name(),
                ae.name()
            )));
        }
        let expected = functor_e(cm.anchored());
        if smash.anchored() != &expected {
            return Err(Error::Precondition(
                "smash anchor is not the extension of the CM anchor".into(),
            ));
        }
        Ok(CmIsomorphism { smash, cm })
    }

    /// Builds both sides from `(A, L, ω)`.
    pub fn from_anchored(l: &AnchoredLieAlgebra) -> Result<Self> {
        CmIsomorphism::new(SmashAlgebra::new(functor_e(l)), CmAlgebra::new(l.clone()))
    }

    pub fn smash(&self) -> &SmashAlgebra {
        &self.smash
    }

    pub fn cm(&self) -> &CmAlgebra {
        &self.cm
    }

    pub fn apply(&self, s: &SmashElement) -> CmElement {
        let n = self.cm.base().dim();
        s.iter()
            .map(|((k, u), c)| ((k / n, u.clone(), k % n), c.clone()))
            .collect()
    }

    pub fn inverse(&self, t: &CmElement) -> SmashElement {
        let n = self.cm.base().dim();
        t.iter()
            .map(|((a, u, b), c)| ((a * n + b, u.clone()), c.clone()))
            .collect()
    }
}

#[cfg(test)]
#[allow(clippy::identity_op)]
mod tests {
    use super::*;
    use crate::exactla::{q, unit_vector};

    fn a3() -> AlgebraPresentation {
        AlgebraPresentation::truncated_polynomial(3)
    }

    fn cm() -> CmAlgebra {
        CmAlgebra::new(AnchoredLieAlgebra::derivations(&a3()))
    }

    #[test]
    fn x_times_a_tensor_b() {
        let c = cm();
        let a = a3();
        let x = c.j_l(&[q(1), q(0)]);
        let env = c.enveloping();
        let w = c.anchored().omega(0);
        for i in 0..3 {
            for j in 0..3 {
                let t = c.basis_element(i, Monomial::one(2), j);
                let lhs = c.multiply(&x, &t).unwrap();
                // oracle: (X·a)⊗1⊗b + a⊗X⊗b + a⊗1⊗(X·b)
                let expected = c
                    .tensor(&w.apply(&a.basis_vector(i)), &env.one(), &a.basis_vector(j))
                    .add(&c.tensor(&a.basis_vector(i), &env.generator(0), &a.basis_vector(j)))
                    .add(&c.tensor(&a.basis_vector(i), &env.one(), &w.apply(&a.basis_vector(j))));
                assert_eq!(lhs, expected);
            }
        }
    }

    #[test]
    fn j_a_multiplicative_and_units() {
        let c = cm();
        let a = a3();
        let ae = a.enveloping().unwrap();
        for k in [1, 3, 4, 5] {
            for l in [0, 2, 4, 7] {
                let lhs = c
                    .multiply(&c.j_a(&unit_vector(9, k)), &c.j_a(&unit_vector(9, l)))
                    .unwrap();
                assert_eq!(lhs, c.j_a(ae.basis_product(k, l)));
            }
        }
        let e = c.basis_element(1, Monomial::generator(2, 1), 2);
        assert_eq!(c.multiply(&c.one(), &e).unwrap(), e);
        assert_eq!(c.multiply(&e, &c.one()).unwrap(), e);
    }

    #[test]
    fn iso_on_units_and_generators() {
        let iso = CmIsomorphism::from_anchored(&AnchoredLieAlgebra::derivations(&a3())).unwrap();
        assert_eq!(iso.apply(&iso.smash().one()), iso.cm().one());
        let v = unit_vector(9, 3 + 2);
        assert_eq!(iso.apply(&iso.smash().j_a(&v)), iso.cm().j_a(&v));
        let s = iso.smash().basis_element(4, Monomial::generator(2, 0));
        assert_eq!(iso.inverse(&iso.apply(&s)), s);
    }

    #[test]
    fn iso_rejects_wrong_base() {
        let l = AnchoredLieAlgebra::derivations(&a3());
        let wrong = SmashAlgebra::new(l.clone());
        assert!(matches!(
            CmIsomorphism::new(wrong, CmAlgebra::new(l)),
            Err(Error::BaseMismatch(_))
        ));
    }
}
