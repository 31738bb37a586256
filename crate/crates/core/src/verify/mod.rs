mod checks;
#[cfg(test)]
mod corrected;
mod squares;
mod sweep;

pub use checks::{
    check_dgp_bridge, check_intro_identity, check_lemma_suite, check_master_identity, check_prop_equivalence, check_thm1,
    check_thm1_jacobi, check_thm2, check_thm2_jacobi, check_thm3, check_thm3_jacobi, check_thm4, check_thm4_jacobi,
    fourier_rational_part, lemma_breakdown, max_precision, thm1_lhs, thm1_rhs, thm2_rhs_numerator, CheckKind,
    CheckResult, LemmaOutcome,
};
pub use squares::{two_squares, TwoSquares};
pub use sweep::{exit_code, sweep, write_report, ReportFormat, SweepConfig};
