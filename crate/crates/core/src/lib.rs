pub mod algebra;
pub mod blocks;
pub mod decompose;
pub mod error;
pub mod gen;
pub mod infinite;
pub mod kaplansky;
pub mod json;
pub mod linalg;
pub mod oracle;

pub use algebra::{Field, Poly, Scalar};
pub use error::{Error, Result};
pub use linalg::Mat;
