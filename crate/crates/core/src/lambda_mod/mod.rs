//! Koszul complexes and cohomology of finitely presented modules over the
//! truncated Iwasawa algebra, the adjoint module, Ext of elementary modules,
//! pseudo-nullity tests and the lattice invariant `e(Γ, H)`.
//!
//! Modules are flattened to `Z/p^N`-modules in the monomial basis and all
//! homological algebra is done with Howell forms.

pub mod adjoint;
pub mod algebra;
pub mod ext;
pub mod group;
pub mod koszul;
pub mod lattice;
pub mod poly;
pub mod presentation;
pub mod pseudo_null;
pub mod resolution;
pub mod sequence;

pub use adjoint::{adjoint_e, AdjointResult};
pub use algebra::{FlatModule, TruncAlgebra};
pub use ext::ext1_elementary;
pub use group::CohomologyGroup;
pub use koszul::{
    exact_sequence_check, koszul_cohomology, koszul_cohomology_all, koszul_complex,
    ExactSequenceCheck, KoszulComplex,
};
pub use lattice::{lattice_e, Lattice, LatticeE};
pub use poly::Poly;
pub use presentation::ModulePresentation;
pub use pseudo_null::{pseudo_null_test, DeclaredType, PseudoNullVerdict};
pub use sequence::{Flavor, Sequence};

use crate::modarith::ArithError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LambdaError {
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("sequence has length {got}, expected {expected}")]
    SequenceLength { got: usize, expected: String },
    #[error("module is not finite: {0}")]
    NotFinite(String),
    #[error("element is zero in the truncated algebra")]
    ZeroElement,
    #[error("singular lattice basis")]
    Singular,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
