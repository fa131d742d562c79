//! The Weyl algebra and the modules it acts on: polynomials, the injective
//! hull of the residue field, and localizations at a homogeneous form.

pub mod adjoint;
pub mod hull;
pub mod op;
pub mod pole;

pub use adjoint::{check_euler_identity, formal_adjoint, left_coefficients, EulerIdentity};
pub use hull::{act_on_e, EElement};
pub use op::{normal_order, normal_order_with, Gen, WeylOp};
pub use pole::{act_on_pole, PoleElement};
