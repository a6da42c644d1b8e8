//! Stable JSON envelopes for every artifact the engine emits.
//!
//! Each envelope carries a `schema` tag (`verdict/v1`, `nullcert/v1`, …),
//! the exact inputs, and the payload. Rational numbers travel as canonical
//! `p/q` strings; decimal fields are advisory renderings only. The `verify`
//! module re-checks any of these from the serialized witnesses alone.

use crate::bounds::{AlphaBound, Enclosure};
use crate::classify::{ClassifyOutcome, SweepResult};
use crate::nullseq::QnCertificate;
use crate::rational::{rat_str, Rational};
use crate::ratio::RatioValue;
use crate::sigma::FiniteSigma;
use crate::sumsets::{CoverReport, NullCertificate, T12Outcome};
use serde::{Deserialize, Serialize};

pub const VERDICT_SCHEMA: &str = "verdict/v1";
pub const NULLCERT_SCHEMA: &str = "nullcert/v1";
pub const COVER_SCHEMA: &str = "cover/v1";
pub const T12_SCHEMA: &str = "t12/v1";
pub const QNSEQ_SCHEMA: &str = "qnseq/v1";
pub const ALPHA_SCHEMA: &str = "alpha/v1";
pub const SWEEP_SCHEMA: &str = "sweep/v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub schema: String,
    pub sigma: FiniteSigma,
    pub q: RatioValue,
    #[serde(flatten)]
    pub outcome: ClassifyOutcome,
}

impl VerdictReport {
    pub fn new(sigma: FiniteSigma, q: RatioValue, outcome: ClassifyOutcome) -> Self {
        VerdictReport {
            schema: VERDICT_SCHEMA.into(),
            sigma,
            q,
            outcome,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NullCertReport {
    pub schema: String,
    pub sigma: FiniteSigma,
    #[serde(with = "rat_str")]
    pub q: Rational,
    pub max_depth: u32,
    pub certificate: Option<NullCertificate>,
}

impl NullCertReport {
    pub fn new(
        sigma: FiniteSigma,
        q: Rational,
        max_depth: u32,
        certificate: Option<NullCertificate>,
    ) -> Self {
        NullCertReport {
            schema: NULLCERT_SCHEMA.into(),
            sigma,
            q,
            max_depth,
            certificate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverEnvelope {
    pub schema: String,
    pub sigma: FiniteSigma,
    #[serde(with = "rat_str")]
    pub q: Rational,
    #[serde(flatten)]
    pub report: CoverReport,
    /// Advisory decimal of the total length.
    pub total_length_decimal: String,
}

impl CoverEnvelope {
    pub fn new(sigma: FiniteSigma, q: Rational, report: CoverReport) -> Self {
        let total_length_decimal = crate::rational::decimal_string(&report.total_length, 12);
        CoverEnvelope {
            schema: COVER_SCHEMA.into(),
            sigma,
            q,
            report,
            total_length_decimal,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct T12Report {
    pub schema: String,
    pub sigma: FiniteSigma,
    #[serde(with = "rat_str")]
    pub q: Rational,
    pub max_depth: u32,
    pub outcome: T12Outcome,
}

impl T12Report {
    pub fn new(sigma: FiniteSigma, q: Rational, max_depth: u32, outcome: T12Outcome) -> Self {
        T12Report {
            schema: T12_SCHEMA.into(),
            sigma,
            q,
            max_depth,
            outcome,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QnSeqReport {
    pub schema: String,
    pub sigma: FiniteSigma,
    pub s: u64,
    pub certificates: Vec<QnCertificate>,
}

impl QnSeqReport {
    pub fn new(sigma: FiniteSigma, certificates: Vec<QnCertificate>) -> Self {
        let s = sigma.len() as u64;
        QnSeqReport {
            schema: QNSEQ_SCHEMA.into(),
            sigma,
            s,
            certificates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaReport {
    pub schema: String,
    #[serde(flatten)]
    pub bound: AlphaBound,
    /// Advisory decimal of the enclosure midpoint.
    pub decimal: String,
    /// Independent (*)-function oracle enclosure, when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub via_star: Option<Enclosure>,
}

impl AlphaReport {
    pub fn new(bound: AlphaBound, via_star: Option<Enclosure>) -> Self {
        let decimal = bound.value.decimal(12);
        AlphaReport {
            schema: ALPHA_SCHEMA.into(),
            bound,
            decimal,
            via_star,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: String,
    pub sigma: FiniteSigma,
    pub resolution: u32,
    pub depth_budget: u32,
    #[serde(flatten)]
    pub sweep: SweepResult,
}

impl SweepReport {
    pub fn new(sigma: FiniteSigma, resolution: u32, depth_budget: u32, sweep: SweepResult) -> Self {
        SweepReport {
            schema: SWEEP_SCHEMA.into(),
            sigma,
            resolution,
            depth_budget,
            sweep,
        }
    }
}
