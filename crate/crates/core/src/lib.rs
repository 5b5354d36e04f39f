//! despla-core: a computation engine for *displacements* of objects along
//! morphisms under a functor between finite categories.
//!
//! The engine answers, by exhaustive and certified search, questions of the
//! form: given `p : E -> B`, an object `e` of `E`, and `eps : p(e) -> b` in
//! `B`, is there a universal way to move `e` along `eps`? On top of the
//! direct search sit an opfibration checker, adjoint-based and pushout-based
//! formulas, an iterative descent procedure over pseudopullbacks of several
//! functors, and checkers for the marking/transfer conditions that make the
//! descent construction interact well with distinguished morphism classes.

pub mod adjunction;
pub mod budget;
pub mod category;
pub mod colimits;
pub mod descent;
pub mod displacement;
pub mod error;
pub mod equivalence;
pub mod functor;
pub mod instances;
pub mod join;
pub mod pseudopullback;
pub mod transfer;

pub use adjunction::{
    left_adjoint_via_displacements, left_adjoint_via_displacements_on, natural_comparison,
    AdjunctionData,
};
pub use budget::{BudgetUse, SearchBudget};
pub use category::{
    CategoryBuilder, FinCategory, MorId, MorInfo, ObjId, ValidationReport, Violation,
};
pub use colimits::{
    chain_colimit, check_crossing, colimit, enumerate_cocones, pushout, wide_pushout,
    ChainColimit, Cocone, CrossingData, CrossingReport, WidePushout,
};
pub use descent::{
    check_left_perfect, check_stagewise_class, descend, descent_crossing, intersect_adjoints,
    intersect_adjoints_on, verify_descent_universal, DescentStage, DescentTrace,
    IntersectedAdjoints, LeftPerfectFailure, LeftPerfectFailureReason, LeftPerfectReport,
    MarkKind, MarkedClass, StagewiseClassReport, UnitLabel,
};
pub use displacement::{
    comma_under, displace, displace_all, extract_unit, induced_comma_functor,
    is_street_opfibration, mediate, verify_displacement, Certificate, CommaUnder,
    DisplacementResult, OpfibFailure, OpfibrationReport, OpfibrationVerdict,
};
pub use equivalence::{
    are_equivalent, check_equivalence, enumerate_functors, is_essentially_surjective,
    is_fully_faithful, witness_from_half, EquivalenceWitness,
};
pub use error::{Error, Result};
pub use functor::{same_category, FunctorData, NatTrans};
pub use instances::{discrete, walking_arrow, FinSetCat, MSetAction, MSetCat, Monoid, PointedCat};
pub use join::{
    assemble_bridge, check_join_preserves_pseudopullback, decompose_bridge, join_functor,
    join_one, recognize_join, BridgeDecomposition, JoinedCategory, JoinedFunctor,
};
pub use pseudopullback::{
    pseudopullback, verify_pseudopullback_square, ConeObject, PseudoPullback, PseudoSquare,
};
pub use transfer::{
    displacement_via_pushout, p_equivalence, pushout_via_displacement, transfer_condition_check,
    ModelMarks, PushoutComparison, TransferFailure, TransferReport, UncheckedInstance,
    UnitReading,
};
