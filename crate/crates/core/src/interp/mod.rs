//! Linear algebra of vanishing conditions along linear subspaces.

pub mod alpha;
pub mod conditions;
pub mod elim;
pub mod form;
pub mod monomial;

pub use alpha::{
    alpha_symbolic, default_degree_cap, is_full_rank, membership, rank_and_kernel, stacked_conditions, AlphaOptions,
    AlphaRecord, FieldMode,
};
pub use conditions::{condition_rows, expected_row_count, ConditionMatrix};
pub use elim::{CoeffRing, Echelon, IntegerRing};
pub use form::{form_product, Coeffs, Form};
pub use monomial::MonomialBasis;
