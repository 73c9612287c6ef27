//! Recovery of point-evaluation and weighted-composition structure, isometry
//! classification and counterexample search.

mod family;
mod functional;
mod isometry;
mod operator;
mod zeros;

pub use family::outer_test_family;
pub use functional::{
    difference_quotient_check, functional_witness, recover_functional, CoefficientFunctional,
    FunctionalWitness, RecoveryReport, WitnessOutcome,
};
pub use isometry::{
    classify_isometry, quotient_constancy_check, ClassifyOptions, CounterexampleReport,
    ForelliCertificate, IsometryClass,
};
pub use operator::{
    check_outer_nonvanishing, outer_nonvanishing_witnesses, point_functional, recover_operator,
    recover_operator_on_grid, swap_unitary, NonvanishingWitness, WcoReport, MARGIN_RADIUS,
};
pub use zeros::WitnessSearch;
