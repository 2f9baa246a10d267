//! Core entropy and biaccessibility dimension of quadratic polynomials,
//! computed from rational external angles.
//!
//! The central pipeline: a rational angle θ determines a kneading sequence and
//! a finite transition matrix on unordered pairs of postcritical angles
//! ([`transition`]); the spectral radius λ of that matrix ([`spectral`]) gives
//! the core entropy h = log λ and the biaccessibility dimension
//! B = log λ / log 2 ([`entropy`]). Two independent routes cross-validate the
//! matrix computation: closed-form polynomial families ([`families`]) and
//! Milnor–Thurston kneading determinants ([`kneading_det`]), plus a
//! box-counting estimator on the real angle tree ([`symbolic`]). The
//! [`galois`] module enumerates the associated Galois-conjugate root clouds.

pub mod entropy;
pub mod error;
pub mod exact_angle;
pub mod families;
pub mod galois;
pub mod kneading_det;
pub mod spectral;
pub mod symbolic;
pub mod transition;

pub use entropy::{
    core_entropy, core_entropy_with_method, core_entropy_with_tol, dimension_estimate_real,
    graph_samples, EntropyCache, EntropyReport, Method,
};
pub use error::{Error, Result};
pub use exact_angle::{parse_angle, tune_angle, Angle, OrbitStructure};
pub use families::{
    family_growth, family_limit, family_polynomial, fit_asymptotics, AsymptoticsFit, FamilyName,
    FamilySpec,
};
pub use galois::{
    complex_roots, enumerate_m2_windows, enumerate_polynomials, root_cloud, window_growth,
    CloudPoint, CloudSet, RootCloud,
};
pub use kneading_det::{kneading_lambda, kneading_signs, KneadingValue, SCAN_LIMIT};
pub use spectral::{
    char_poly, growth_rate, growth_rate_certified, largest_real_root, poly_gcd,
    square_free_decomposition, GrowthMethod, GrowthResult, IntPolynomial, SparseMatrix,
};
pub use symbolic::{
    is_real_admissible, itinerary, kneading_sequence, real_tree_survivors, KneadingSequence, Symbol,
};
pub use transition::{build_pair_matrix, dominant_component, is_separated, postcritical_angles, ComponentInfo, PairMatrix};
