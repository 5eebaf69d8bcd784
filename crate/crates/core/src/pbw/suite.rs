//! Randomized and exhaustive property checks for `U(L)`, `A # U(L)`,
//! `A ⊙ U(L) ⊙ A` and the comparison map `A^e # U(L) → A ⊙ U(L) ⊙ A`.

use rand::Rng;

use super::cm::{CmAlgebra, CmIsomorphism};
use super::combination::{Combination, SmashElement};
use super::enveloping::{RewriteStrategy, UniversalEnveloping};
use super::smash::{coordinates_in, SmashAlgebra};
use crate::error::Result;
use crate::exactla::{unit_vector, Matrix, Scalar};
use crate::liecore::AnchoredLieAlgebra;
use crate::report::Report;

/// At most this many witnesses are kept per failing property.
const WITNESS_LIMIT: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Random words for strategy independence, and random triples for associativity.
    pub trials: usize,
    /// Random pairs for the coproduct and comparison-map checks.
    pub pairs: usize,
    /// Degree bound for random elements.
    pub degree: u32,
    pub word_length: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            trials: 200,
            pairs: 100,
            degree: 3,
            word_length: 6,
        }
    }
}

fn record(report: &mut Report, name: &str, mut violations: Vec<String>) {
    violations.truncate(WITNESS_LIMIT);
    report.axiom(name, violations);
}

/// Strategy independence of straightening, associativity and unit of `U(L)`,
/// coassociativity, multiplicativity of `Δ`, and the counit law.
pub fn enveloping_suite<G: Rng>(env: &UniversalEnveloping, opts: &SuiteOptions, rng: &mut G) -> Report {
    let mut report = Report::new();

    let mut bad = Vec::new();
    for _ in 0..opts.trials {
        let w = env.random_word(rng, opts.word_length);
        let direct = env.normalize(&w);
        let left = env.normalize_with(&w, RewriteStrategy::LeftmostInnermost);
        let right = env.normalize_with(&w, RewriteStrategy::RightmostOutermost);
        match (direct, left, right) {
            (Ok(d), Ok(l), Ok(r)) if d == l && l == r => {}
            (d, l, r) => bad.push(format!("word {w:?}: insertion {d:?}, leftmost {l:?}, rightmost {r:?}")),
        }
    }
    record(&mut report, "strategy_independence", bad);

    let mut bad = Vec::new();
    for _ in 0..opts.trials {
        let u = env.random_element(rng, opts.degree, 2);
        let v = env.random_element(rng, opts.degree, 2);
        let w = env.random_element(rng, opts.degree, 2);
        let lhs = env.multiply_unchecked(&env.multiply_unchecked(&u, &v), &w);
        let rhs = env.multiply_unchecked(&u, &env.multiply_unchecked(&v, &w));
        if lhs != rhs {
            bad.push(format!("u = {u:?}, v = {v:?}, w = {w:?}"));
        }
    }
    record(&mut report, "enveloping_associativity", bad);

    let mut bad = Vec::new();
    let mut coassoc = Vec::new();
    let mut counit = Vec::new();
    for _ in 0..opts.pairs {
        let u = env.random_element(rng, opts.degree, 2);
        let v = env.random_element(rng, opts.degree, 2);
        let one = env.one();
        if env.multiply_unchecked(&u, &one) != u || env.multiply_unchecked(&one, &u) != u {
            bad.push(format!("unit fails on {u:?}"));
        }
        let du = env.coproduct_unchecked(&u, 2);
        let dv = env.coproduct_unchecked(&v, 2);
        let duv = env.coproduct_unchecked(&env.multiply_unchecked(&u, &v), 2);
        if duv != env.tensor_multiply(&du, &dv) {
            bad.push(format!("Δ(uv) ≠ Δ(u)Δ(v) for u = {u:?}, v = {v:?}"));
        }
        let left = env.coproduct_on_leg(&du, 0);
        let right = env.coproduct_on_leg(&du, 1);
        let direct = env.coproduct_unchecked(&u, 3);
        if left != right || right != direct {
            coassoc.push(format!("u = {u:?}"));
        }
        if env.counit_left(&du) != u {
            counit.push(format!("u = {u:?}"));
        }
    }
    record(&mut report, "coproduct_multiplicative", bad);
    record(&mut report, "coassociativity", coassoc);
    record(&mut report, "counit", counit);
    report
}

/// Associativity of `A # U(L)` and `A ⊙ U(L) ⊙ A`, the module-algebra law
/// `u·(ab) = Σ (u₁·a)(u₂·b)`, and the two bracket identities on all basis elements.
pub fn ring_suite<G: Rng>(l: &AnchoredLieAlgebra, opts: &SuiteOptions, rng: &mut G) -> Result<Report> {
    let mut report = Report::new();
    let smash = SmashAlgebra::new(l.clone());
    let cm = CmAlgebra::new(l.clone());
    let env = smash.enveloping();
    let base = l.base();
    let n = base.dim();

    let mut bad = Vec::new();
    for _ in 0..opts.trials {
        let s: Vec<SmashElement> = (0..3).map(|_| smash.random_element(rng, opts.degree, 2)).collect();
        let lhs = smash.multiply(&smash.multiply(&s[0], &s[1])?, &s[2])?;
        let rhs = smash.multiply(&s[0], &smash.multiply(&s[1], &s[2])?)?;
        if lhs != rhs {
            bad.push(format!("{:?} · {:?} · {:?}", s[0], s[1], s[2]));
        }
    }
    record(&mut report, "smash_associativity", bad);

    let mut bad = Vec::new();
    for _ in 0..opts.trials {
        let s: Vec<_> = (0..3).map(|_| cm.random_element(rng, opts.degree, 2)).collect();
        let lhs = cm.multiply(&cm.multiply(&s[0], &s[1])?, &s[2])?;
        let rhs = cm.multiply(&s[0], &cm.multiply(&s[1], &s[2])?)?;
        if lhs != rhs {
            bad.push(format!("{:?} · {:?} · {:?}", s[0], s[1], s[2]));
        }
    }
    record(&mut report, "cm_associativity", bad);

    let mut bad = Vec::new();
    if n > 0 {
        for _ in 0..opts.pairs {
            let u = env.random_element(rng, opts.degree, 2);
            let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
            let (a, b) = (base.basis_vector(i), base.basis_vector(j));
            let lhs = smash.module_action(&u, &base.multiply(&a, &b))?;
            let mut rhs = vec![Scalar::zero(); n];
            for (legs, c) in env.coproduct_unchecked(&u, 2).iter() {
                let ua = smash.module_action(&env.monomial(legs[0].clone()), &a)?;
                let ub = smash.module_action(&env.monomial(legs[1].clone()), &b)?;
                crate::exactla::vec_axpy(&mut rhs, c, &base.multiply(&ua, &ub));
            }
            if lhs != rhs {
                bad.push(format!("u = {u:?}, a = e{i}, b = e{j}"));
            }
        }
    }
    record(&mut report, "module_algebra_law", bad);
    report.merge("", bracket_identities(l)?);
    Ok(report)
}

/// `[j_L(X), j_A(a)] = j_A(X·a)` and
/// `[J_L(X), J_A(a ⊗ b°)] = J_A((X·a) ⊗ b° + a ⊗ (X·b)°)` for all basis `X`, `a`, `b`.
pub fn bracket_identities(l: &AnchoredLieAlgebra) -> Result<Report> {
    let mut report = Report::new();
    let smash = SmashAlgebra::new(l.clone());
    let cm = CmAlgebra::new(l.clone());
    let n = l.base().dim();
    let mut smash_bad = Vec::new();
    let mut cm_bad = Vec::new();
    for x in 0..l.dim() {
        let ex = unit_vector(l.dim(), x);
        let w = l.omega(x);
        let jl = smash.j_l(&ex);
        let cl = cm.j_l(&ex);
        for a in 0..n {
            let ea = unit_vector(n, a);
            let lhs = smash.commutator(&jl, &smash.j_a(&ea))?;
            if lhs != smash.j_a(&w.apply(&ea)) {
                smash_bad.push(format!(
                    "X = {}, a = {}",
                    l.lie().basis_names()[x],
                    l.base().basis_names()[a]
                ));
            }
            let wa = w.apply(&ea);
            for b in 0..n {
                let eb = unit_vector(n, b);
                let wb = w.apply(&eb);
                let mut target = vec![Scalar::zero(); n * n];
                for k in 0..n {
                    target[k * n + b] += &wa[k];
                    target[a * n + k] += &wb[k];
                }
                let lhs = cm.commutator(&cl, &cm.j_a(&unit_vector(n * n, a * n + b)))?;
                if lhs != cm.j_a(&target) {
                    cm_bad.push(format!(
                        "X = {}, a = {}, b = {}",
                        l.lie().basis_names()[x],
                        l.base().basis_names()[a],
                        l.base().basis_names()[b]
                    ));
                }
            }
        }
    }
    record(&mut report, "smash_bracket_identity", smash_bad);
    record(&mut report, "cm_bracket_identity", cm_bad);
    Ok(report)
}

/// The comparison map is a bijection on each filtered piece of degree ≤ `degree`,
/// preserves units and the base maps, and is multiplicative on random pairs.
pub fn verify_cm_iso<G: Rng>(
    l: &AnchoredLieAlgebra,
    degree: u32,
    pairs: usize,
    pair_degree: u32,
    rng: &mut G,
) -> Result<Report> {
    let iso = CmIsomorphism::from_anchored(l)?;
    let (smash, cm) = (iso.smash(), iso.cm());
    let mut report = Report::new();

    for d in 0..=degree {
        let src = smash.filtered_basis(d);
        let tgt = cm.filtered_basis(d);
        let mut m = Matrix::zeros(tgt.len(), src.len());
        let mut outside = None;
        for (j, (k, u)) in src.iter().enumerate() {
            let image = iso.apply(&Combination::term((*k, u.clone()), Scalar::one()));
            match coordinates_in(&tgt, &image) {
                Some(v) => m.set_column(j, &v),
                None => outside = Some(format!("image of basis element {j} leaves the filtered piece")),
            }
        }
        let rank = m.rank();
        let ok = outside.is_none() && src.len() == tgt.len() && rank == src.len();
        report.check(format!("bijective_degree_{d}"), ok, || {
            outside.unwrap_or_else(|| format!("source {}, target {}, rank {rank}", src.len(), tgt.len()))
        });
    }

    report.check("unit", iso.apply(&smash.one()) == cm.one(), || "1 ↦ 1 fails".into());

    let n2 = smash.base().dim();
    let bad: Vec<String> = (0..n2)
        .filter(|&k| iso.apply(&smash.j_a(&unit_vector(n2, k))) != cm.j_a(&unit_vector(n2, k)))
        .map(|k| format!("A^e basis element {k}"))
        .collect();
    record(&mut report, "intertwines_base", bad);
    let bad: Vec<String> = (0..l.dim())
        .filter(|&x| iso.apply(&smash.j_l(&unit_vector(l.dim(), x))) != cm.j_l(&unit_vector(l.dim(), x)))
        .map(|x| format!("X = {}", l.lie().basis_names()[x]))
        .collect();
    record(&mut report, "intertwines_lie", bad);

    let mut bad = Vec::new();
    for _ in 0..pairs {
        let s = smash.random_element(rng, pair_degree, 2);
        let t = smash.random_element(rng, pair_degree, 2);
        let lhs = iso.apply(&smash.multiply(&s, &t)?);
        let rhs = cm.multiply(&iso.apply(&s), &iso.apply(&t))?;
        if lhs != rhs {
            bad.push(format!("s = {s:?}, t = {t:?}"));
        }
    }
    record(&mut report, "multiplicative", bad);
    Ok(report)
}
