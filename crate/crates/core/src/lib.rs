//! Exact constructions over `F_p` and `F_{p^2}`: maximum rank distance matrix codes
//! obtained as images of `(F_{p^2})^r`, their lifts to constant-dimension subspace
//! codes meeting the anticode bound, and exhaustive checks of every parameter.

pub mod cli;
pub mod codes;
pub mod error;
pub mod gf;
pub mod grassmann;
pub mod graph;
pub mod matfp;

pub use codes::{
    bachoc_weight, build_image_code, hamming_weight, image_code_unchecked, isometry_report, phi,
    phi_e, phi_o, singleton_max_dim, ExtVector, RankMetricCode, Variant,
};
pub use error::{Error, Result};
pub use gf::{is_construction_prime, is_prime, Fp, Fp2};
pub use grassmann::{
    anticode_bound, construct_g, dual_code, enumerate_grassmannian, gaussian_coefficient,
    lift_code, CodeParams, GrassmannianCode, Metric, Subspace,
};
pub use graph::CodeGraph;
pub use matfp::MatrixFp;
