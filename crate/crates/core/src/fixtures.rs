//! Reference objects shared by tests, benches and the command line: truncated
//! polynomial algebras with their derivation algebras, the Heisenberg algebra,
//! matrix algebras with the commutator anchor, and single-constant faults.

use crate::adjoints::{canonical_psi, lie_adjoint, AdjointCarrier, NaturalitySquare, Variant};
use crate::algebras::{ARing, AlgebraPresentation};
use crate::error::Result;
use crate::exactla::{Matrix, Scalar};
use crate::liecore::{AnchoredLieAlgebra, LieAlgebra, LieMorphism, LieRinehartAlgebra, LieStructure};

/// `ℚ[x]/(xⁿ)`.
pub fn truncated(n: usize) -> AlgebraPresentation {
    AlgebraPresentation::truncated_polynomial(n)
}

/// `(ℚ[x]/(xⁿ), Der, id)`.
pub fn derivation_algebra(n: usize) -> LieRinehartAlgebra {
    LieRinehartAlgebra::derivations(&truncated(n)).expect("truncated polynomial algebras are commutative")
}

/// The Heisenberg algebra over `ℚ` with zero anchor.
pub fn heisenberg() -> LieRinehartAlgebra {
    LieRinehartAlgebra::over_ground_field(LieAlgebra::heisenberg())
}

/// `M_n(ℚ)` under the commutator, anchored by inner derivations.
pub fn matrix_commutator(n: usize) -> AnchoredLieAlgebra {
    AnchoredLieAlgebra::commutator_anchor(&AlgebraPresentation::matrix_algebra(n))
}

/// `(End(A), a ↦ l_a)`.
pub fn endomorphism_ring(a: &AlgebraPresentation) -> ARing {
    ARing::left_regular(a)
}

/// The structures the axiom suite must accept, by name.
pub fn axiom_fixtures() -> Vec<(String, LieStructure)> {
    let mut out: Vec<(String, LieStructure)> = (2..=4)
        .map(|n| (format!("derA{n}"), derivation_algebra(n).into()))
        .collect();
    out.push(("heisenberg".into(), heisenberg().into()));
    out.push(("m2_commutator".into(), matrix_commutator(2).into()));
    out
}

/// The adjunction fixture: `(A3, Der A3, id)`, `R = End(A3)`, its Lie–Rinehart
/// carrier and the tautological `ψ`.
pub fn adjunction_fixture() -> Result<(LieStructure, AdjointCarrier, LieMorphism)> {
    let l: LieStructure = derivation_algebra(3).into();
    let carrier = lie_adjoint(&endomorphism_ring(&truncated(3)), Variant::LieRinehart)?;
    let psi = canonical_psi(&l, &carrier)?;
    Ok((l, carrier, psi))
}

/// `ker ω ↪ L` as a naturality square.
pub fn kernel_inclusion(l: &LieStructure) -> Result<NaturalitySquare> {
    let sub = l.anchored().kernel_of_anchor();
    let source: LieStructure = match l {
        LieStructure::LieRinehart(lr) => lr.kernel_of_anchor()?.into(),
        LieStructure::Anchored(a) => {
            let names = sub.basis().iter().map(|v| a.lie().format_element(v)).collect();
            a.restrict(&sub, names)?.into()
        }
    };
    Ok(NaturalitySquare {
        source,
        map: LieMorphism::new(sub.basis_matrix()),
    })
}

/// A valid structure with exactly one constant changed, and a check it must fail.
#[derive(Clone, Debug)]
pub struct Fault {
    pub name: &'static str,
    pub expected: &'static str,
    pub structure: LieStructure,
}

fn rebuild_lr(
    l: &LieRinehartAlgebra,
    base: AlgebraPresentation,
    bracket: Vec<Scalar>,
    anchor: Matrix,
    action: Vec<Scalar>,
) -> LieStructure {
    let lie = LieAlgebra::new(l.lie().name(), l.lie().basis_names().to_vec(), bracket).expect("same arity");
    let anchored = AnchoredLieAlgebra::new(lie, base, anchor).expect("same arity");
    LieRinehartAlgebra::new(anchored, action).expect("same arity").into()
}

fn bracket_fault(l: &LieRinehartAlgebra, i: usize, j: usize, k: usize, value: i64) -> LieStructure {
    let n = l.dim();
    let mut b = l.lie().structure_constants().to_vec();
    b[(i * n + j) * n + k] = Scalar::from(value);
    rebuild_lr(
        l,
        l.base().clone(),
        b,
        l.anchor().clone(),
        l.action_constants().to_vec(),
    )
}

fn anchor_fault(l: &LieRinehartAlgebra, row: usize, col: usize, value: i64) -> LieStructure {
    let mut anchor = l.anchor().clone();
    anchor[(row, col)] = Scalar::from(value);
    rebuild_lr(
        l,
        l.base().clone(),
        l.lie().structure_constants().to_vec(),
        anchor,
        l.action_constants().to_vec(),
    )
}

fn action_fault(l: &LieRinehartAlgebra, a: usize, x: usize, k: usize, value: i64) -> LieStructure {
    let n = l.dim();
    let mut act = l.action_constants().to_vec();
    act[(a * n + x) * n + k] = Scalar::from(value);
    rebuild_lr(
        l,
        l.base().clone(),
        l.lie().structure_constants().to_vec(),
        l.anchor().clone(),
        act,
    )
}

fn base_fault(l: &LieRinehartAlgebra, i: usize, j: usize, k: usize, value: i64) -> LieStructure {
    let b = l.base();
    let n = b.dim();
    let mut mul = b.structure_constants().to_vec();
    mul[(i * n + j) * n + k] = Scalar::from(value);
    let base =
        AlgebraPresentation::new(b.name(), b.basis_names().to_vec(), mul, b.unit().to_vec()).expect("same arity");
    rebuild_lr(
        l,
        base,
        l.lie().structure_constants().to_vec(),
        l.anchor().clone(),
        l.action_constants().to_vec(),
    )
}

/// Ten single-constant faults, each detected by a named check.
pub fn injected_faults() -> Vec<Fault> {
    let a2 = derivation_algebra(2);
    let a3 = derivation_algebra(3);
    let a4 = derivation_algebra(4);
    let heis = heisenberg();
    let free = LieRinehartAlgebra::abelian_free(&truncated(2), 1).expect("commutative base");
    let m2 = matrix_commutator(2);
    let mut m2_anchor = m2.anchor().clone();
    // ω(E12) sends E21 ↦ E11 − E22; drop the E22 part
    m2_anchor[(3 * 4 + 2, 1)] = Scalar::zero();
    let m2_fault = AnchoredLieAlgebra::new(m2.lie().clone(), m2.base().clone(), m2_anchor).expect("same arity");
    vec![
        // ω(x∂)(x) = x + 1 on ℚ[x]/(x²)
        Fault {
            name: "derA2_anchor_not_derivation",
            expected: "anchor_derivation",
            structure: anchor_fault(&a2, 1, 0, 1),
        },
        // [x∂, x²∂] = 2x²∂ on one side only
        Fault {
            name: "derA3_bracket_one_sided",
            expected: "antisymmetry",
            structure: bracket_fault(&a3, 0, 1, 1, 2),
        },
        // ω(x²∂) doubled: still a derivation, no longer A-linear in X
        Fault {
            name: "derA3_anchor_not_linear",
            expected: "leibniz_1",
            structure: anchor_fault(&a3, 2 * 3 + 1, 1, 2),
        },
        // 1·x∂ = 2x∂
        Fault {
            name: "derA3_action_not_unital",
            expected: "module_unital",
            structure: action_fault(&a3, 0, 0, 0, 2),
        },
        // x·x²∂ = x²∂
        Fault {
            name: "derA3_action_not_associative",
            expected: "module_associative",
            structure: action_fault(&a3, 1, 1, 1, 1),
        },
        // x·x² = x + x³ in the base
        Fault {
            name: "derA4_base_not_commutative",
            expected: "base_commutative",
            structure: base_fault(&a4, 1, 2, 1, 1),
        },
        // ω(x²∂) = x²∂ + x³∂, still a derivation
        Fault {
            name: "derA4_anchor_not_bracket_preserving",
            expected: "anchor_morphism",
            structure: anchor_fault(&a4, 3 * 4 + 1, 1, 1),
        },
        // ω(1⊗X) = x∂ on an abelian algebra with A-action
        Fault {
            name: "free_rank1_leibniz",
            expected: "leibniz_2",
            structure: anchor_fault(&free, 2 + 1, 0, 1),
        },
        // [Y, X] = 2Z while [X, Y] = Z
        Fault {
            name: "heisenberg_bracket_one_sided",
            expected: "antisymmetry",
            structure: bracket_fault(&heis, 1, 0, 2, 2),
        },
        Fault {
            name: "m2_anchor_not_derivation",
            expected: "anchor_derivation",
            structure: m2_fault.into(),
        },
    ]
}
