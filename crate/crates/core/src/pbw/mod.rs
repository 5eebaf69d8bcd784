//! Universal enveloping algebras in PBW normal form, the smash product
//! `A # U(L)`, the ring `A ⊙ U(L) ⊙ A`, and the comparison map between them.

mod cm;
mod combination;
mod enveloping;
mod smash;
mod suite;

pub use cm::{CmAlgebra, CmIsomorphism};
pub use combination::{monomials_up_to, CmElement, Combination, Monomial, PbwElement, SmashElement, Tensor};
pub use enveloping::{RewriteStrategy, UniversalEnveloping, REWRITE_STEP_LIMIT};
pub use smash::{coordinates_in, SmashAlgebra};
pub use suite::{bracket_identities, enveloping_suite, ring_suite, verify_cm_iso, SuiteOptions};
