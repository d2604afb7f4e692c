//! Contractions, operator directional derivatives and the primed-product
//! evaluation relating two orderings.

mod contraction;
mod derivative;
mod primed;

pub use contraction::{
    contraction_general, contraction_matrix, contraction_same, ContractionEntry, ContractionTable, Decomposition,
    OrderingPair,
};
pub use derivative::{directional_derivative, scalar_derivative};
pub use primed::{
    got_verify, got_verify_with, primed_product_eval, primed_product_eval_general, primed_product_eval_general_with,
    primed_product_eval_with, push_lemma_check, Mutation, VerificationReport,
};

use thiserror::Error;

use crate::ncalg::Generator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GotError {
    #[error("index {0} is not in the input index set")]
    OutsideOmega(Generator),
    #[error("index {0} is not in the decomposition index set")]
    OutsideOmegaPrime(Generator),
    #[error("shared-set contraction needs the identity decomposition")]
    NotSameSet,
    #[error("decomposition row {0} has no nonzero entry")]
    ZeroRow(Generator),
    #[error("decomposition row {0} given twice")]
    DuplicateRow(Generator),
    #[error("decomposition has no rows")]
    EmptyDecomposition,
}
