pub mod limit;
pub mod model;
pub mod verify;
pub mod weierstrass;

pub use limit::{continuum_limit_w22, target_eps5, ContinuumLimit, DiffPoly};
pub use model::{EllipticModel, FunctionModel, Target};
pub use verify::{mkdv_identity_check, verify_elliptic_family, verify_exponential, EllipticParams, VerifierReport};
pub use weierstrass::{carlson_rf, wp_eval, Lattice, Weierstrass};
