use std::collections::HashMap;

use rand::Rng;

use super::combination::{Combination, Monomial, PbwElement, Tensor};
use crate::error::{Error, Result};
use crate::exactla::Scalar;
use crate::liecore::LieAlgebra;

/// Hard ceiling on rewrite steps in [`UniversalEnveloping::normalize_with`].
pub const REWRITE_STEP_LIMIT: usize = 1_000_000;

/// Order in which descents `X_j X_i` (`j > i`) are rewritten by the word rewriter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStrategy {
    /// Smallest word first, leftmost descent first.
    LeftmostInnermost,
    /// Largest word first, rightmost descent first.
    RightmostOutermost,
}

type Memo = HashMap<(usize, Monomial), PbwElement>;

/// Arithmetic in `U(L)` over the PBW basis of ordered monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalEnveloping {
    lie: LieAlgebra,
}

impl UniversalEnveloping {
    pub fn new(lie: LieAlgebra) -> Self {
        UniversalEnveloping { lie }
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn rank(&self) -> usize {
        self.lie.dim()
    }

    pub fn one(&self) -> PbwElement {
        Combination::term(Monomial::one(self.rank()), Scalar::one())
    }

    pub fn generator(&self, i: usize) -> PbwElement {
        Combination::term(Monomial::generator(self.rank(), i), Scalar::one())
    }

    /// `Σ xᵢ Xᵢ` for a coordinate vector of `L`.
    pub fn from_lie(&self, x: &[Scalar]) -> PbwElement {
        x.iter()
            .enumerate()
            .map(|(i, c)| (Monomial::generator(self.rank(), i), c.clone()))
            .collect()
    }

    pub fn monomial(&self, m: Monomial) -> PbwElement {
        Combination::term(m, Scalar::one())
    }

    pub(crate) fn check_element(&self, u: &PbwElement) -> Result<()> {
        if let Some(m) = u.keys().find(|m| m.len() != self.rank()) {
            return Err(Error::DimensionMismatch {
                op: "U(L) element (monomial length)",
                expected: self.rank(),
                found: m.len(),
            });
        }
        Ok(())
    }

    /// `X_i · m` in normal form.
    fn mul_generator_monomial(&self, i: usize, m: &Monomial, memo: &mut Memo) -> PbwElement {
        match m.first_index() {
            Some(j) if j < i => {
                if let Some(hit) = memo.get(&(i, m.clone())) {
                    return hit.clone();
                }
                // X_i X_j m' = X_j (X_i m') + [X_i, X_j] m'
                let rest = m.with_decremented(j);
                let inner = self.mul_generator_monomial(i, &rest, memo);
                let mut out = self.mul_generator_element(j, &inner, memo);
                let bracket = self.lie.basis_bracket(i, j).to_vec();
                for (k, c) in bracket.iter().enumerate() {
                    if !c.is_zero() {
                        let t = self.mul_generator_monomial(k, &rest, memo);
                        out.add_scaled(c, &t);
                    }
                }
                memo.insert((i, m.clone()), out.clone());
                out
            }
            _ => Combination::term(m.with_incremented(i), Scalar::one()),
        }
    }

    fn mul_generator_element(&self, i: usize, u: &PbwElement, memo: &mut Memo) -> PbwElement {
        let mut out = Combination::zero();
        for (m, c) in u.iter() {
            let t = self.mul_generator_monomial(i, m, memo);
            out.add_scaled(c, &t);
        }
        out
    }

    /// `X_i · u`.
    pub fn left_mul_generator(&self, i: usize, u: &PbwElement) -> PbwElement {
        self.mul_generator_element(i, u, &mut Memo::new())
    }

    fn mul_monomial_element(&self, m: &Monomial, v: &PbwElement, memo: &mut Memo) -> PbwElement {
        let mut acc = v.clone();
        for &g in m.word().iter().rev() {
            acc = self.mul_generator_element(g, &acc, memo);
        }
        acc
    }

    pub fn multiply(&self, u: &PbwElement, v: &PbwElement) -> Result<PbwElement> {
        self.check_element(u)?;
        self.check_element(v)?;
        Ok(self.multiply_unchecked(u, v))
    }

    pub(crate) fn multiply_unchecked(&self, u: &PbwElement, v: &PbwElement) -> PbwElement {
        let mut memo = Memo::new();
        let mut out = Combination::zero();
        for (m, c) in u.iter() {
            let t = self.mul_monomial_element(m, v, &mut memo);
            out.add_scaled(c, &t);
        }
        out
    }

    /// `m · v` for a single monomial, sharing nothing across calls.
    pub(crate) fn multiply_monomial(&self, m: &Monomial, v: &PbwElement) -> PbwElement {
        self.mul_monomial_element(m, v, &mut Memo::new())
    }

    /// Normal form of the product of generators in `word`.
    pub fn normalize(&self, word: &[usize]) -> Result<PbwElement> {
        self.check_word(word)?;
        let mut memo = Memo::new();
        let mut acc = self.one();
        for &g in word.iter().rev() {
            acc = self.mul_generator_element(g, &acc, &mut memo);
        }
        Ok(acc)
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        if let Some(&g) = word.iter().find(|&&g| g >= self.rank()) {
            return Err(Error::DimensionMismatch {
                op: "U(L) word (generator index)",
                expected: self.rank(),
                found: g + 1,
            });
        }
        Ok(())
    }

    /// Normal form by literal rewriting `X_j X_i → X_i X_j + [X_j, X_i]` on words,
    /// independent of the insertion algorithm used by [`normalize`](Self::normalize).
    pub fn normalize_with(&self, word: &[usize], strategy: RewriteStrategy) -> Result<PbwElement> {
        self.check_word(word)?;
        let mut pending: Combination<Vec<usize>> = Combination::term(word.to_vec(), Scalar::one());
        let mut done = Combination::zero();
        let mut steps = 0usize;
        loop {
            let next = match strategy {
                RewriteStrategy::LeftmostInnermost => pending.keys().next().cloned(),
                RewriteStrategy::RightmostOutermost => pending.keys().next_back().cloned(),
            };
            let Some(w) = next else { break };
            let c = pending.coefficient(&w);
            pending.add_term(w.clone(), -c.clone());
            let descent = match strategy {
                RewriteStrategy::LeftmostInnermost => (0..w.len().saturating_sub(1)).find(|&p| w[p] > w[p + 1]),
                RewriteStrategy::RightmostOutermost => (0..w.len().saturating_sub(1)).rev().find(|&p| w[p] > w[p + 1]),
            };
            match descent {
                None => {
                    let m = Monomial::from_sorted_word(self.rank(), &w).expect("no descent");
                    done.add_term(m, c);
                }
                Some(p) => {
                    steps += 1;
                    if steps > REWRITE_STEP_LIMIT {
                        return Err(Error::RewriteLimit(REWRITE_STEP_LIMIT));
                    }
                    let (hi, lo) = (w[p], w[p + 1]);
                    let mut swapped = w.clone();
                    swapped.swap(p, p + 1);
                    pending.add_term(swapped, c.clone());
                    for (k, b) in self.lie.basis_bracket(hi, lo).iter().enumerate() {
                        if !b.is_zero() {
                            let mut shorter = w[..p].to_vec();
                            shorter.push(k);
                            shorter.extend_from_slice(&w[p + 2..]);
                            pending.add_term(shorter, &c * b);
                        }
                    }
                }
            }
        }
        Ok(done)
    }

    /// `ε(u)`: the coefficient of `1`.
    pub fn counit(&self, u: &PbwElement) -> Scalar {
        u.coefficient(&Monomial::one(self.rank()))
    }

    pub fn degree(&self, u: &PbwElement) -> Option<u32> {
        u.keys().map(Monomial::degree).max()
    }

    /// `1 ⊗ ⋯ ⊗ 1` with `legs` factors.
    pub fn tensor_one(&self, legs: usize) -> Tensor {
        Combination::term(vec![Monomial::one(self.rank()); legs], Scalar::one())
    }

    /// `Δ(X) = X ⊗ 1 + ⋯ + 1 ⊗ X` applied from the left, leg by leg.
    fn primitive_times(&self, g: usize, t: &Tensor, memo: &mut Memo) -> Tensor {
        let mut out = Combination::zero();
        for (legs, c) in t.iter() {
            for l in 0..legs.len() {
                let prod = self.mul_generator_monomial(g, &legs[l], memo);
                for (m, d) in prod.iter() {
                    let mut key = legs.clone();
                    key[l] = m.clone();
                    out.add_term(key, c * d);
                }
            }
        }
        out
    }

    /// `Δ^{(legs−1)}(u)`, built by multiplying primitive coproducts of the
    /// generators leg-wise.
    pub fn coproduct(&self, u: &PbwElement, legs: usize) -> Result<Tensor> {
        self.check_element(u)?;
        if legs < 2 {
            return Err(Error::Precondition(format!(
                "coproduct needs at least 2 legs, got {legs}"
            )));
        }
        Ok(self.coproduct_unchecked(u, legs))
    }

    pub(crate) fn coproduct_unchecked(&self, u: &PbwElement, legs: usize) -> Tensor {
        let mut memo = Memo::new();
        let mut out = Combination::zero();
        for (m, c) in u.iter() {
            let mut acc = self.tensor_one(legs);
            for &g in m.word().iter().rev() {
                acc = self.primitive_times(g, &acc, &mut memo);
            }
            out.add_scaled(c, &acc);
        }
        out
    }

    /// Applies `Δ` to leg `leg` of `t`, producing one more leg.
    pub fn coproduct_on_leg(&self, t: &Tensor, leg: usize) -> Tensor {
        let mut out = Combination::zero();
        for (legs, c) in t.iter() {
            let split = self.coproduct_unchecked(&self.monomial(legs[leg].clone()), 2);
            for (pair, d) in split.iter() {
                let mut key = legs[..leg].to_vec();
                key.extend(pair.iter().cloned());
                key.extend_from_slice(&legs[leg + 1..]);
                out.add_term(key, c * d);
            }
        }
        out
    }

    /// Leg-wise product in `U(L)^{⊗k}`.
    pub fn tensor_multiply(&self, s: &Tensor, t: &Tensor) -> Tensor {
        let mut memo = Memo::new();
        let mut out = Combination::zero();
        for (ls, cs) in s.iter() {
            for (lt, ct) in t.iter() {
                let mut partial: Tensor = Combination::term(Vec::new(), cs * ct);
                for (a, b) in ls.iter().zip(lt) {
                    let prod = self.mul_monomial_element(a, &self.monomial(b.clone()), &mut memo);
                    let mut next = Combination::zero();
                    for (prefix, pc) in partial.iter() {
                        for (m, mc) in prod.iter() {
                            let mut key = prefix.clone();
                            key.push(m.clone());
                            next.add_term(key, pc * mc);
                        }
                    }
                    partial = next;
                }
                out.add_scaled(&Scalar::one(), &partial);
            }
        }
        out
    }

    /// `(ε ⊗ id)` on a two-leg tensor.
    pub fn counit_left(&self, t: &Tensor) -> PbwElement {
        let one = Monomial::one(self.rank());
        t.iter()
            .filter(|(legs, _)| legs[0] == one)
            .map(|(legs, c)| (legs[1].clone(), c.clone()))
            .collect()
    }

    /// A random element with up to `terms` monomials of degree ≤ `max_degree`
    /// and small integer coefficients.
    pub fn random_element<R: Rng>(&self, rng: &mut R, max_degree: u32, terms: usize) -> PbwElement {
        let mut out = Combination::zero();
        for _ in 0..terms.max(1) {
            let degree = rng.gen_range(0..=max_degree);
            let word: Vec<usize> = if self.rank() == 0 {
                Vec::new()
            } else {
                (0..degree).map(|_| rng.gen_range(0..self.rank())).collect()
            };
            let mut sorted = word;
            sorted.sort_unstable();
            let m = Monomial::from_sorted_word(self.rank(), &sorted).expect("sorted");
            let c = Scalar::from(rng.gen_range(-3i64..=3));
            out.add_term(m, c);
        }
        out
    }

    /// A random word of length ≤ `max_len`.
    pub fn random_word<R: Rng>(&self, rng: &mut R, max_len: usize) -> Vec<usize> {
        if self.rank() == 0 {
            return Vec::new();
        }
        let len = rng.gen_range(0..=max_len);
        (0..len).map(|_| rng.gen_range(0..self.rank())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::AlgebraPresentation;
    use crate::exactla::q;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn heis() -> UniversalEnveloping {
        UniversalEnveloping::new(LieAlgebra::heisenberg())
    }

    fn mono(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e.to_vec())
    }

    #[test]
    fn abelian_words_sort() {
        let u = UniversalEnveloping::new(LieAlgebra::abelian(2));
        assert_eq!(u.normalize(&[1, 0]).unwrap(), u.monomial(mono(&[1, 1])));
        assert_eq!(u.normalize(&[]).unwrap(), u.one());
    }

    #[test]
    fn heisenberg_yx() {
        let u = heis();
        let expected: PbwElement = [(mono(&[1, 1, 0]), q(1)), (mono(&[0, 0, 1]), q(-1))]
            .into_iter()
            .collect();
        assert_eq!(u.normalize(&[1, 0]).unwrap(), expected);
        for s in [RewriteStrategy::LeftmostInnermost, RewriteStrategy::RightmostOutermost] {
            assert_eq!(u.normalize_with(&[1, 0], s).unwrap(), expected);
        }
        let y = u.generator(1);
        let x = u.generator(0);
        assert_eq!(u.multiply(&y, &x).unwrap(), expected);
    }

    #[test]
    fn unit_and_abelian_products() {
        let u = UniversalEnveloping::new(LieAlgebra::abelian(2));
        let xy = u.normalize(&[0, 1]).unwrap();
        assert_eq!(u.multiply(&xy, &u.one()).unwrap(), xy);
        let xyy = u.multiply(&xy, &u.generator(1)).unwrap();
        assert_eq!(xyy, u.monomial(mono(&[1, 2])));
        assert!(u
            .multiply(&xy, &UniversalEnveloping::new(LieAlgebra::abelian(3)).one())
            .is_err());
    }

    #[test]
    fn coproduct_small_cases() {
        let u = UniversalEnveloping::new(LieAlgebra::abelian(1));
        let one = Monomial::one(1);
        let x = mono(&[1]);
        let x2 = mono(&[2]);
        assert_eq!(u.coproduct(&u.one(), 2).unwrap(), u.tensor_one(2));
        let d = u.coproduct(&u.monomial(x2.clone()), 2).unwrap();
        let expected: Tensor = [
            (vec![x2.clone(), one.clone()], q(1)),
            (vec![x.clone(), x.clone()], q(2)),
            (vec![one.clone(), x2.clone()], q(1)),
        ]
        .into_iter()
        .collect();
        assert_eq!(d, expected);
        // oracle: Δ(X)·Δ(X) computed leg-wise
        let dx = u.coproduct(&u.generator(0), 2).unwrap();
        assert_eq!(u.tensor_multiply(&dx, &dx), expected);
        let d3 = u.coproduct(&u.generator(0), 3).unwrap();
        assert_eq!(d3.len(), 3);
        assert!(u.coproduct(&u.one(), 1).is_err());
    }

    #[test]
    fn multinomial_coefficients_in_coproduct() {
        // Δ(X^k) = Σ C(k,i) X^i ⊗ X^{k−i}
        let u = UniversalEnveloping::new(LieAlgebra::abelian(1));
        let d = u.coproduct(&u.monomial(mono(&[4])), 2).unwrap();
        for (i, c) in [1, 4, 6, 4, 1].iter().enumerate() {
            assert_eq!(d.coefficient(&vec![mono(&[i as u32]), mono(&[4 - i as u32])]), q(*c));
        }
    }

    #[test]
    fn strategies_agree_on_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let der = LieAlgebra::of_derivations(&AlgebraPresentation::truncated_polynomial(4).derivation_space());
        for u in [heis(), UniversalEnveloping::new(der)] {
            for _ in 0..30 {
                let w = u.random_word(&mut rng, 6);
                let fast = u.normalize(&w).unwrap();
                assert_eq!(u.normalize_with(&w, RewriteStrategy::LeftmostInnermost).unwrap(), fast);
                assert_eq!(u.normalize_with(&w, RewriteStrategy::RightmostOutermost).unwrap(), fast);
            }
        }
    }

    #[test]
    fn counit_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = heis();
        for _ in 0..10 {
            let e = u.random_element(&mut rng, 3, 3);
            let d = u.coproduct(&e, 2).unwrap();
            assert_eq!(u.counit_left(&d), e);
        }
    }
}
