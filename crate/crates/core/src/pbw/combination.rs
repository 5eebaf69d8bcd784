use std::collections::BTreeMap;
use std::fmt;

use crate::exactla::Scalar;

/// An exponent vector over the ordered basis `X_1 < … < X_n` of a Lie algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    /// The monomial of a weakly increasing word, or `None` if the word has a descent.
    pub fn from_sorted_word(n: usize, word: &[usize]) -> Option<Self> {
        if word.windows(2).any(|w| w[0] > w[1]) || word.iter().any(|&g| g >= n) {
            return None;
        }
        let mut e = vec![0; n];
        for &g in word {
            e[g] += 1;
        }
        Some(Monomial(e))
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Smallest generator index with positive exponent.
    pub fn first_index(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// The weakly increasing word `X_{i1} ⋯ X_{ik}`.
    pub fn word(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect()
    }

    pub(crate) fn with_incremented(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e[i] += 1;
        Monomial(e)
    }

    pub(crate) fn with_decremented(&self, i: usize) -> Self {
        let mut e = self.0.clone();
        e[i] -= 1;
        Monomial(e)
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// A finite linear combination of keys with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Combination<K: Ord> {
    terms: BTreeMap<K, Scalar>,
}

impl<K: Ord> Default for Combination<K> {
    fn default() -> Self {
        Combination { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Combination<K> {
    pub fn zero() -> Self {
        Combination::default()
    }

    pub fn term(key: K, coefficient: Scalar) -> Self {
        let mut c = Combination::zero();
        c.add_term(key, coefficient);
        c
    }

    pub fn add_term(&mut self, key: K, coefficient: Scalar) {
        if coefficient.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coefficient);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coefficient;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, c: &Scalar, other: &Combination<K>) {
        if c.is_zero() {
            return;
        }
        for (k, v) in &other.terms {
            self.add_term(k.clone(), c * v);
        }
    }

    pub fn add(&self, other: &Combination<K>) -> Combination<K> {
        let mut out = self.clone();
        out.add_scaled(&Scalar::one(), other);
        out
    }

    pub fn sub(&self, other: &Combination<K>) -> Combination<K> {
        let mut out = self.clone();
        out.add_scaled(&-Scalar::one(), other);
        out
    }

    pub fn scale(&self, c: &Scalar) -> Combination<K> {
        let mut out = Combination::zero();
        out.add_scaled(c, self);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &K) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&K, &Scalar)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl DoubleEndedIterator<Item = &K> {
        self.terms.keys()
    }
}

impl<K: Ord + Clone> FromIterator<(K, Scalar)> for Combination<K> {
    fn from_iter<I: IntoIterator<Item = (K, Scalar)>>(iter: I) -> Self {
        let mut c = Combination::zero();
        for (k, v) in iter {
            c.add_term(k, v);
        }
        c
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for Combination<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, v)| format!("{v}*{k:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// An element of `U(L)` in PBW normal form.
pub type PbwElement = Combination<Monomial>;
/// An element of `U(L)^{⊗k}`, one monomial per leg.
pub type Tensor = Combination<Vec<Monomial>>;
/// `Σ c · e_a ⊗ u` in `A # U(L)`.
pub type SmashElement = Combination<(usize, Monomial)>;
/// `Σ c · e_a ⊗ u ⊗ e_b` in `A ⊙ U(L) ⊙ A`.
pub type CmElement = Combination<(usize, Monomial, usize)>;

/// All monomials in `n` generators of degree at most `max_degree`, by degree then key order.
pub fn monomials_up_to(n: usize, max_degree: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        let mut current = vec![0u32; n];
        exponents_of_degree(n, d, 0, &mut current, &mut out);
    }
    out
}

fn exponents_of_degree(n: usize, remaining: u32, at: usize, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if at + 1 >= n {
        if n == 0 {
            if remaining == 0 {
                out.push(Monomial(Vec::new()));
            }
            return;
        }
        current[at] = remaining;
        out.push(Monomial(current.clone()));
        current[at] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[at] = e;
        exponents_of_degree(n, remaining - e, at + 1, current, out);
    }
    current[at] = 0;
}
