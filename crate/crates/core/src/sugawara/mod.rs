//! Level-`l` integrable modules of affine `sl_2` and the Sugawara construction.
//!
//! Modules are built as quotients of a generalized Verma module by the radical
//! of its Shapovalov form, one degree at a time, in exact arithmetic.

pub mod module;
pub mod verma;
pub mod virasoro;

pub use module::{
    generator_from_name, truncated_module, truncated_module_with_limit, TruncatedModule,
    DEFAULT_MAX_DEPTH, GENERATORS,
};
pub use verma::Gen;
pub use virasoro::{
    affine_bracket_check, full_check, l0_grading_check, ln_operator, lx_commutator_check,
    virasoro_bracket_check, CheckOutcome, SugawaraReport, VirasoroOperator,
};
