//! Lie algebras, anchored Lie algebras and Lie–Rinehart algebras, their
//! morphisms, and the pullback constructions built from them.

mod anchored;
mod lie;
mod pullback;

pub use anchored::{AnchoredLieAlgebra, LieMorphism, LieRinehartAlgebra, LieStructure};
pub use lie::LieAlgebra;
pub(crate) use pullback::der_factor;
pub use pullback::{
    base_change, check_morphism_pair, extend_derivation, extension_is_injective, extension_map, functor_e, functor_f,
    functor_f_unit, product, product_lie_rinehart, Factor, MorphismPairCheck, PullbackLie,
};
