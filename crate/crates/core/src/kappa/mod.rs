//! κ-Minkowski space as a Hopf algebra in PBW normal form, with the
//! κ-Poincaré action on it.

pub mod hopf;
pub mod integral;
pub mod monomial;
pub mod pbw;
pub mod poincare;
pub mod tensor;

pub use hopf::{antipode, coproduct, counit, hopf_axiom_check};
pub use integral::integral_star_oracle;
pub use monomial::Monomial;
pub use pbw::PbwElement;
pub use poincare::{act, module_algebra_sides, pairing, PoincareGenerator};
pub use tensor::TensorElement;
