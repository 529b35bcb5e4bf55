//! Exact linear algebra and polynomial arithmetic over Q and Z.

pub mod factor;
pub mod matrix;
pub mod poly;
pub mod roots;
pub mod scalar;
pub mod units;
pub mod xfloat;
pub mod zpoly;

pub use factor::{factor_over_z, Factorization};
pub use matrix::ExactMatrix;
pub use poly::ExactPoly;
pub use roots::{roots_complex, ComplexApprox};
pub use scalar::ExactScalar;
pub use units::{is_algebraic_unit, poly_divide_root, Deflation, UnitCertificate};
pub use xfloat::{XComplex, XFloat};
pub use zpoly::ZPoly;
