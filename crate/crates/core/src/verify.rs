//! Independent certificate replay.
//!
//! Takes any serialized artifact, dispatches on its `schema` tag and
//! re-evaluates every stored inequality from the witnesses alone — no
//! re-enumeration, no re-derivation. A tampered bound, a certificate whose
//! numbers do not reproduce its inequality, or an inconsistent verdict all
//! surface as named failures.

use crate::classify::{FactKind, TrichotomyLabel, Verdict};
use crate::rational::Rational;
use crate::render::DiagramSpec;
use crate::report::*;
use crate::sigma::{gap_stats, FiniteSigma};
use num_traits::{One, Signed};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("artifact has no string `schema` field")]
    MissingSchema,
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("malformed `{schema}` artifact: {source}")]
    Malformed {
        schema: String,
        source: serde_json::Error,
    },
}

/// Result of replaying one artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema: String,
    pub certificates_checked: u64,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn check_verdict(v: &Verdict, at: &str, checked: &mut u64, failures: &mut Vec<String>) {
    for fact in &v.facts {
        *checked += 1;
        if !fact.certificate.replay() {
            failures.push(format!("{at}: {:?} certificate does not replay", fact.kind));
        }
    }
    let has = |k: FactKind| v.has(k);
    let pairs = [
        (FactKind::IsInterval, FactKind::NotInterval),
        (FactKind::IsInterval, FactKind::NotFiniteUnionOfIntervals),
        (FactKind::IsInterval, FactKind::ZeroMeasureCantor),
        (FactKind::ContainsInterval, FactKind::ZeroMeasureCantor),
    ];
    for (a, b) in pairs {
        if has(a) && has(b) {
            failures.push(format!("{at}: contradictory facts {a:?} and {b:?}"));
        }
    }
    let implied = match v.trichotomy {
        None => true,
        Some(TrichotomyLabel::FiniteUnionOfIntervals) => has(FactKind::IsInterval),
        Some(TrichotomyLabel::Cantorval) => {
            has(FactKind::ContainsInterval) && has(FactKind::NotFiniteUnionOfIntervals)
        }
        Some(TrichotomyLabel::CantorSet) => has(FactKind::ZeroMeasureCantor),
    };
    if !implied {
        failures.push(format!("{at}: trichotomy label not implied by facts"));
    }
}

fn parse<T: serde::de::DeserializeOwned>(schema: &str, value: &Value) -> Result<T, VerifyError> {
    serde_json::from_value(value.clone()).map_err(|source| VerifyError::Malformed {
        schema: schema.to_string(),
        source,
    })
}

fn diam_over_one_minus_q(sigma: &FiniteSigma, q: &Rational) -> Rational {
    let stats = gap_stats(sigma);
    stats.diam / (Rational::one() - q)
}

/// Replay all certificates inside one parsed JSON artifact.
pub fn verify_value(value: &Value) -> Result<VerifyReport, VerifyError> {
    let schema = value
        .get("schema")
        .and_then(Value::as_str)
        .ok_or(VerifyError::MissingSchema)?
        .to_string();
    let mut checked = 0u64;
    let mut failures = Vec::new();

    match schema.as_str() {
        VERDICT_SCHEMA => {
            let r: VerdictReport = parse(&schema, value)?;
            check_verdict(&r.outcome.verdict, "verdict", &mut checked, &mut failures);
        }
        NULLCERT_SCHEMA => {
            let r: NullCertReport = parse(&schema, value)?;
            if let Some(cert) = &r.certificate {
                checked += 1;
                if !cert.replay(&r.q) {
                    failures.push(format!("null certificate at depth {} does not replay", cert.depth));
                }
                if cert.depth > r.max_depth {
                    failures.push("certificate depth exceeds the stated search depth".into());
                }
            }
        }
        COVER_SCHEMA => {
            let r: CoverEnvelope = parse(&schema, value)?;
            checked += 1;
            let diam_k = diam_over_one_minus_q(&r.sigma, &r.q);
            if r.report.total_length > diam_k {
                failures.push("cover length exceeds diam K".into());
            }
            if !r.report.total_length.is_positive() {
                failures.push("cover length not positive".into());
            }
        }
        T12_SCHEMA => {
            let r: T12Report = parse(&schema, value)?;
            match &r.outcome {
                crate::sumsets::T12Outcome::ZeroMeasure(cert) => {
                    checked += 1;
                    if !cert.replay(&r.q) {
                        failures.push("zero-measure certificate does not replay".into());
                    }
                }
                crate::sumsets::T12Outcome::NoViolationUpTo { depth, trace } => {
                    for db in trace {
                        checked += 1;
                        let qn = Rational::new(
                            r.q.numer().pow(db.depth),
                            r.q.denom().pow(db.depth),
                        );
                        let bound =
                            Rational::from_integer(db.cardinality.into()) * qn;
                        if bound != db.bound || db.bound < Rational::one() {
                            failures.push(format!(
                                "trace entry at depth {} inconsistent",
                                db.depth
                            ));
                        }
                    }
                    if trace.last().map(|db| db.depth) != Some(*depth) {
                        failures.push("trace does not reach the stated depth".into());
                    }
                }
            }
        }
        QNSEQ_SCHEMA => {
            let r: QnSeqReport = parse(&schema, value)?;
            for cert in &r.certificates {
                checked += 2;
                if !cert.replay() {
                    failures.push(format!("qn certificate at n = {} does not replay", cert.n));
                }
                if !cert.witness.replay(&r.sigma) {
                    failures.push(format!(
                        "condition-(*) witness of the n = {} certificate fails membership",
                        cert.n
                    ));
                }
                if cert.s != r.sigma.len() as u64 {
                    failures.push("certificate |Σ| differs from the digit set".into());
                }
            }
            for pair in r.certificates.windows(2) {
                if pair[1].q_enclosure.upper() >= pair[0].q_enclosure.lower() {
                    failures.push(format!(
                        "enclosures at n = {} and n = {} not strictly decreasing",
                        pair[0].n, pair[1].n
                    ));
                }
            }
        }
        ALPHA_SCHEMA => {
            let r: AlphaReport = parse(&schema, value)?;
            checked += 1;
            if !r.bound.replay() {
                failures.push("alpha bound does not replay".into());
            }
        }
        SWEEP_SCHEMA => {
            let r: SweepReport = parse(&schema, value)?;
            for cell in &r.sweep.cells {
                check_verdict(
                    &cell.verdict,
                    &format!("cell ({}, {})", cell.lo, cell.hi),
                    &mut checked,
                    &mut failures,
                );
            }
            for point in &r.sweep.points {
                check_verdict(
                    &point.verdict,
                    &format!("point {}", point.q),
                    &mut checked,
                    &mut failures,
                );
            }
        }
        crate::render::DIAGRAM_SCHEMA => {
            let r: DiagramSpec = parse(&schema, value)?;
            checked += 1;
            let zero = Rational::from_integer(0.into());
            let one = Rational::one();
            for seg in &r.segments {
                if seg.lo > seg.hi || seg.lo < zero || seg.hi > one {
                    failures.push(format!("segment ({}, {}) out of range", seg.lo, seg.hi));
                }
            }
            for pair in r.segments.windows(2) {
                if pair[1].lo < pair[0].hi {
                    failures.push(format!("segments overlap near {}", pair[1].lo));
                }
            }
            for mark in &r.marks {
                if mark.q <= zero || mark.q >= one {
                    failures.push(format!("mark {} outside (0,1)", mark.q));
                }
            }
        }
        other => return Err(VerifyError::UnknownSchema(other.to_string())),
    }

    Ok(VerifyReport {
        schema,
        certificates_checked: checked,
        failures,
    })
}

/// Replay a serialized artifact.
pub fn verify_str(text: &str) -> Result<VerifyReport, VerifyError> {
    let value: Value = serde_json::from_str(text).map_err(|source| VerifyError::Malformed {
        schema: "<json>".into(),
        source,
    })?;
    verify_value(&value)
}
