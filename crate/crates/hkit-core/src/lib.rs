//! Exact functional calculus on finite-dimensional operator pairs: defect
//! operators, quasi-homogeneous classification of relations, decomposition
//! certificates for combined pairs, and splitting witness search.
//!
//! Everything structural is generic over the scalar through [`Scalar`];
//! the concrete aliases at the crate root fix the Gaussian-rational
//! instantiation used for exact work, with `num_complex::Complex64`
//! available for the numeric fallback paths.

pub mod generators;
pub mod matrix;
pub mod nc;
pub mod poly;
pub mod quasihom;
pub mod scalar;
pub mod splitting;
pub mod unipoly;

pub use poly::{parse_poly, parse_poly4, DeltaKind, MPoly, ParseError};
pub use scalar::{Conjugate, GaussRat, Scalar};

pub use generators::{
    gen_combined_instance, gen_nsym2_instance, gen_nsym_instance, gen_nsymmetry,
    gen_strict_inverse_pair, GenError, GeneratedInstance, GeneratedOperands, InstanceSpec,
};
pub use nc::RelationKind;
pub use quasihom::{
    classify_qh, make_certificate, verify_certificate, CanonicalForm, CertError, Certificate,
    QhClass, QhError,
};
pub use splitting::{
    common_roots, lambda_pencil, split_nsym, split_nsym2, split_perturbation,
    split_tensor_product, split_tensor_sum_helton, PencilMode, PencilPoly, RootSet, SolverOptions,
    SplitError, SplitWitness, WitnessScalar, NUMERIC_RESIDUAL_TOL,
};
pub use unipoly::{NumericRoot, Roots, UniPoly};

/// Exact two-variable relation polynomial.
pub type CommPoly = poly::MPoly<GaussRat, 2>;
/// Exact four-variable (combined pair) polynomial.
pub type CommPoly4 = poly::MPoly<GaussRat, 4>;
/// Exact normal-ordered polynomial.
pub type NcGaussPoly = nc::NcPoly<GaussRat>;
/// Exact matrix.
pub type ExactMatrix = matrix::Matrix<GaussRat>;
