mod field;
mod poly;
pub mod factor;
pub mod transforms;

pub use factor::{factor_irreducibles, factor_with_hint, is_irreducible, is_irreducible_with_hint, FactorHint, Factorization};
pub use field::{Field, Scalar};
pub use poly::Poly;
pub use transforms::*;
