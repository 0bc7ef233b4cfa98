//! Parikh matrices of words over ordered alphabets.
//!
//! The crate computes Parikh matrices and subword counts, closed-form powers
//! and roots of upper unitriangular matrices, M-equivalence classes, and the
//! right-to-left Parikh normal forms of matrices and words. Everything that
//! needs to decide whether a matrix is a Parikh matrix does so by exhaustive
//! witness search, capped by an enumeration bound on word length.

pub mod binary_decomposition;
pub mod error;
pub mod matrix;
pub mod matrix_normal;
pub mod mequivalence;
pub mod normal_form;
pub mod powers;
pub mod verify;
pub mod word_normal;
pub mod words;

pub use binary_decomposition::{decompose_binary, BinarySolution, DecomposeMode};
pub use error::{Error, Result};
pub use matrix::{
    entries_from_subwords, find_witness, is_parikh_m3, psi, ParikhMatrix, UnitriangularMatrix,
};
pub use matrix_normal::{
    is_primitive, mu, rl_normal_forms_matrix, s_set, theta_matrix, Analysis, Decomposer,
    DecompositionTriplet,
};
pub use mequivalence::{
    class_of_matrix, conjecture_scan, equivalence_class, is_m_unambiguous, power_class_inequality,
    EquivalenceClass, ScanRow,
};
pub use normal_form::{Factor, MatrixNormalForm, NormalForm, WordNormalForm};
pub use powers::{
    binary_power_is_parikh, matrix_power_closed_form, matrix_power_iterated, matrix_root,
    min_power_to_parikh,
};
pub use word_normal::{maximal_words, pn_r, precedes, rho, tau, theta_word, RhoTriplet};
pub use words::{
    count_subword, enumerate_words, parikh_vector, OrderedAlphabet, ParikhVector, Word,
    DEFAULT_ENUM_BOUND,
};
