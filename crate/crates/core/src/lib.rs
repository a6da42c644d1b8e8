//! Certified classification of the self-similar sets K(Σ;q) = Σ + q·K(Σ;q)
//! and of achievement sets of multigeometric sequences.
//!
//! Everything runs in exact rational arithmetic. The crate computes gap
//! statistics of a digit set Σ, applies the interval / Cantorval criteria
//! (q ≥ I(Σ), q ≥ i(Σ), extreme largest gap), searches for zero-measure
//! certificates |Σₙ|·qⁿ < 1 by exact sumset enumeration, evaluates the
//! Solomyak lower bound α̲(d) with certified enclosures, produces the
//! decreasing null-measure ratio sequences qₙ ↘ 1/|Σ|, and renders q-axis
//! structure diagrams. Every emitted fact carries a machine-checkable
//! certificate that the `verify` module can replay from its serialized
//! witnesses alone.

pub mod bounds;
pub mod classify;
pub mod nullseq;
pub mod rational;
pub mod ratio;
pub mod render;
pub mod report;
pub mod sigma;
pub mod sumsets;
pub mod verify;

pub use bounds::{alpha_lower, alpha_lower_via_star, star_eval, star_min, AlphaBound, StarFunction};
pub use classify::{
    ae_positive_window, classify, sweep, ClassifyOptions, ClassifyOutcome, Fact, FactKind,
    SweepResult, TrichotomyLabel, Verdict, Window,
};
pub use nullseq::{qn_root, qn_sequence, star_condition_witness, QnCertificate};
pub use rational::{parse_rational, Rational};
pub use ratio::RatioValue;
pub use render::{diagram_from_sweep, render_svg, DiagramSpec};
pub use sigma::{gap_stats, i_bruteforce, sumset_of_multigeometric, FiniteSigma, GapStats,
    MultigeometricSpec};
pub use sumsets::{
    cover_length, full_sumset_check, null_certificate, sigma_n, sumset_report, t12_check,
    CoverReport, NullCertificate, SumsetBudget, T12Outcome,
};
pub use verify::{verify_str, verify_value, VerifyReport};
