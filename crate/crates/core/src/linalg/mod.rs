mod frobenius;
mod mat;
mod primary;
mod smith;
pub mod subspace;

pub use frobenius::{
    frobenius, maximal_vector, minimal_polynomial, similar_to_inverse, similar_to_opposite,
    similarity_witness, vector_minpoly, Frobenius,
};
pub use mat::Mat;
pub use primary::{
    adapted_basis, elementary_divisors, elementary_divisors_with_hint, is_primary, primary_component,
    primary_decomposition, primes_of, AdaptedBasis, Generator, Link, PrimaryPart,
};
pub use smith::{invariant_factors, product as factors_product};
