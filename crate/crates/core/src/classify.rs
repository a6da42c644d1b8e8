//! Structural verdicts about K(Σ;q) with machine-checkable certificates.
//!
//! Every emitted fact carries the numbers needed to re-check it: the gap
//! thresholds I(Σ) and i(Σ) decide interval structure, a sumset cardinality
//! bound |Σₙ|·qⁿ < 1 certifies zero measure, and the Solomyak window
//! (1/|Σ|, α̲(d)) is attached as an almost-everywhere annotation, never as a
//! per-point certificate. Enclosure-valued ratios are compared with
//! three-valued logic; an undecidable comparison suppresses the fact.

use crate::bounds::{alpha_lower, closed_form_applies, cubic_residual, BoundsError};
use crate::rational::{rat, rat_str, Rational};
use crate::ratio::{Provable, RatioValue};
use crate::sigma::{gap_stats, FiniteSigma, GapStats};
use crate::sumsets::{null_certificate, SumsetBudget, SumsetError};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ClassifyError {
    #[error("depth budget must be at least 1")]
    ZeroDepthBudget,
    #[error("resolution must be at least 1")]
    ZeroResolution,
    #[error("enclosure width {width} exceeds the configured maximum {max}")]
    EnclosureTooWide { width: String, max: String },
    #[error("contradictory facts {0:?} and {1:?}")]
    ContradictoryFacts(FactKind, FactKind),
    #[error(transparent)]
    Sumset(#[from] SumsetError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// Certified structural statements about K(Σ;q).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FactKind {
    IsInterval,
    NotInterval,
    ContainsInterval,
    NotFiniteUnionOfIntervals,
    ZeroMeasureCantor,
    AePositiveWindowMember,
}

/// Which criterion backs a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremTag {
    /// K is an interval iff q ≥ I(Σ); both directions use this tag.
    IntervalIffThreshold,
    /// K ⊇ K(B;q) is an interval for the minimizing subset B once q ≥ i(Σ).
    SubsetIntervalThreshold,
    /// q < I(Σ) and the largest gap at an end of Σ leave an unreachable
    /// boundary point: not a finite union of intervals.
    ExtremeGapObstruction,
    /// |Σₙ|·qⁿ < 1 forces λ(K) = 0 and K is a Cantor set.
    SumsetMeasureBound,
    /// q sits in the window (1/|Σ|, α̲(d)) where almost every ratio gives
    /// positive measure. Annotation only.
    AePositiveWindow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Ge,
    Lt,
}

/// Structured payload from which the certified inequality can be re-checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Witnesses {
    Threshold {
        q: RatioValue,
        #[serde(with = "rat_str")]
        threshold: Rational,
        relation: Relation,
    },
    ExtremeGap {
        q: RatioValue,
        #[serde(with = "rat_str")]
        threshold: Rational,
        #[serde(with = "rat_str")]
        largest_gap: Rational,
        #[serde(with = "rat_str")]
        first_gap: Rational,
        #[serde(with = "rat_str")]
        last_gap: Rational,
        #[serde(with = "rat_str")]
        diam: Rational,
    },
    SumsetNull {
        q: RatioValue,
        depth: u32,
        cardinality: u64,
        #[serde(with = "rat_str")]
        bound: Rational,
    },
    Window {
        q: RatioValue,
        #[serde(with = "rat_str")]
        window_lo: Rational,
        window_hi: RatioValue,
    },
}

/// A fact's machine-checkable witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub theorem_tag: TheoremTag,
    pub witnesses: Witnesses,
}

impl Certificate {
    /// Re-evaluate the stated inequality from the stored numbers alone.
    pub fn replay(&self) -> bool {
        match &self.witnesses {
            Witnesses::Threshold {
                q,
                threshold,
                relation,
            } => match relation {
                Relation::Ge => q.ge(threshold) == Provable::True,
                Relation::Lt => q.lt(threshold) == Provable::True,
            },
            Witnesses::ExtremeGap {
                q,
                threshold,
                largest_gap,
                first_gap,
                last_gap,
                diam,
            } => {
                q.lt(threshold) == Provable::True
                    && *threshold == largest_gap / (largest_gap + diam)
                    && (largest_gap == first_gap || largest_gap == last_gap)
            }
            Witnesses::SumsetNull {
                q,
                depth,
                cardinality,
                bound,
            } => {
                let hi = q.upper();
                let qn = Rational::new(hi.numer().pow(*depth), hi.denom().pow(*depth));
                let recomputed = Rational::from_integer(BigInt::from(*cardinality)) * qn;
                recomputed == *bound && *bound < Rational::one()
            }
            Witnesses::Window {
                q,
                window_lo,
                window_hi,
            } => q.gt(window_lo) == Provable::True && q.upper() < window_hi.lower(),
        }
    }
}

/// One certified fact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fact {
    pub kind: FactKind,
    #[serde(flatten)]
    pub certificate: Certificate,
}

/// Guthrie–Nymann trichotomy bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrichotomyLabel {
    FiniteUnionOfIntervals,
    CantorSet,
    Cantorval,
}

/// The full verdict: certified facts, plus the optional trichotomy label.
///
/// `caveat` is set when the Cantorval label relies on the trichotomy being
/// exhaustive, which is proven for achievement sets and Ferens-like digit
/// sets but not for arbitrary Σ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub facts: Vec<Fact>,
    pub trichotomy: Option<TrichotomyLabel>,
    #[serde(rename = "caveat")]
    pub trichotomy_caveat: bool,
}

impl Verdict {
    fn from_facts(mut facts: Vec<Fact>, known_form: bool) -> Result<Verdict, ClassifyError> {
        facts.sort_by_key(|f| f.kind);
        let has = |k: FactKind| facts.iter().any(|f| f.kind == k);
        let exclusions = [
            (FactKind::IsInterval, FactKind::NotInterval),
            (FactKind::IsInterval, FactKind::NotFiniteUnionOfIntervals),
            (FactKind::IsInterval, FactKind::ZeroMeasureCantor),
            (FactKind::ContainsInterval, FactKind::ZeroMeasureCantor),
        ];
        for (a, b) in exclusions {
            if has(a) && has(b) {
                return Err(ClassifyError::ContradictoryFacts(a, b));
            }
        }
        let trichotomy = if has(FactKind::IsInterval) {
            Some(TrichotomyLabel::FiniteUnionOfIntervals)
        } else if has(FactKind::ContainsInterval) && has(FactKind::NotFiniteUnionOfIntervals) {
            Some(TrichotomyLabel::Cantorval)
        } else if has(FactKind::ZeroMeasureCantor) {
            Some(TrichotomyLabel::CantorSet)
        } else {
            None
        };
        let trichotomy_caveat = trichotomy == Some(TrichotomyLabel::Cantorval) && !known_form;
        Ok(Verdict {
            facts,
            trichotomy,
            trichotomy_caveat,
        })
    }

    pub fn has(&self, kind: FactKind) -> bool {
        self.facts.iter().any(|f| f.kind == kind)
    }

    pub fn fact(&self, kind: FactKind) -> Option<&Fact> {
        self.facts.iter().find(|f| f.kind == kind)
    }

    /// Merge key for sweep cells: fact kinds, label, caveat.
    pub fn signature(&self) -> (Vec<FactKind>, Option<TrichotomyLabel>, bool) {
        (
            self.facts.iter().map(|f| f.kind).collect(),
            self.trichotomy,
            self.trichotomy_caveat,
        )
    }
}

/// The almost-everywhere positive-measure window (1/|Σ|, α̲(d)).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    #[serde(with = "rat_str")]
    pub lo: Rational,
    pub hi: RatioValue,
    #[serde(with = "rat_str")]
    pub d: Rational,
}

/// Tunable parameters for classification.
#[derive(Debug, Clone)]
pub struct ClassifyOptions {
    /// Maximum sumset depth searched for a zero-measure certificate.
    pub depth_budget: u32,
    /// Reject enclosure ratios wider than this.
    pub max_enclosure_width: Rational,
    /// Enclosure tolerance for α̲(d).
    pub tol: Rational,
    pub budget: SumsetBudget,
    /// Σ is known to be the sumset of a multigeometric sequence.
    pub known_achievement: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            depth_budget: 8,
            max_enclosure_width: rat(1, 100),
            tol: rat(1, 1_000_000_000_000),
            budget: SumsetBudget::default(),
            known_achievement: false,
        }
    }
}

/// How the zero-measure search ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// Not attempted: an interval-side fact already holds.
    Skipped,
    Found { depth: u32 },
    Exhausted { max_depth: u32 },
    BudgetExceeded { depth_reached: u32 },
}

/// A verdict plus diagnostics about the certificate search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOutcome {
    pub verdict: Verdict,
    pub null_search: SearchStatus,
}

/// Per-Σ data shared across many classify calls.
struct SigmaContext {
    stats: GapStats,
    window: Option<Window>,
    known_form: bool,
}

fn build_context(sigma: &FiniteSigma, opts: &ClassifyOptions) -> Result<SigmaContext, ClassifyError> {
    let stats = gap_stats(sigma);
    let window = window_from_stats(sigma, &stats, &opts.tol)?;
    Ok(SigmaContext {
        window,
        known_form: opts.known_achievement || sigma.is_ferens_like(),
        stats,
    })
}

fn window_from_stats(
    sigma: &FiniteSigma,
    stats: &GapStats,
    tol: &Rational,
) -> Result<Option<Window>, ClassifyError> {
    let d = &stats.d;
    if *d > rat(1, 2) {
        return Ok(None); // α̲ only computable for d ≤ 1/2
    }
    let s = sigma.len();
    let lo = Rational::new(BigInt::one(), BigInt::from(s));
    if closed_form_applies(d) {
        // √d/(1+√d) > 1/s ⇔ (s−1)√d > 1 ⇔ d > 1/(s−1)², decided exactly
        let s1 = Rational::from_integer(BigInt::from(s as i64 - 1));
        if *d <= Rational::one() / (&s1 * &s1) {
            return Ok(None);
        }
        let hi = alpha_lower(d, tol)?.value;
        return Ok(Some(Window {
            lo,
            hi,
            d: d.clone(),
        }));
    }
    // cubic branch: rule out the exact-equality case, then refine until the
    // comparison α̲(d) vs 1/s is decided
    if cubic_residual(d, &lo) == Rational::from_integer(0.into()) {
        return Ok(None);
    }
    let mut cur_tol = tol.clone();
    for _ in 0..64 {
        let a = alpha_lower(d, &cur_tol)?;
        if a.value.lower() > &lo {
            return Ok(Some(Window {
                lo,
                hi: a.value,
                d: d.clone(),
            }));
        }
        if a.value.upper() < &lo {
            return Ok(None);
        }
        cur_tol /= Rational::from_integer(16.into());
    }
    Err(ClassifyError::Bounds(BoundsError::RefinementCap(
        "window endpoint separation".into(),
    )))
}

fn classify_in_context(
    sigma: &FiniteSigma,
    q: &RatioValue,
    opts: &ClassifyOptions,
    ctx: &SigmaContext,
) -> Result<ClassifyOutcome, ClassifyError> {
    if opts.depth_budget == 0 {
        return Err(ClassifyError::ZeroDepthBudget);
    }
    if q.width() > opts.max_enclosure_width {
        return Err(ClassifyError::EnclosureTooWide {
            width: q.width().to_string(),
            max: opts.max_enclosure_width.to_string(),
        });
    }
    let stats = &ctx.stats;
    let mut facts: Vec<Fact> = Vec::new();

    let vs_big_i = q.ge(&stats.big_i);
    if vs_big_i == Provable::True {
        facts.push(Fact {
            kind: FactKind::IsInterval,
            certificate: Certificate {
                theorem_tag: TheoremTag::IntervalIffThreshold,
                witnesses: Witnesses::Threshold {
                    q: q.clone(),
                    threshold: stats.big_i.clone(),
                    relation: Relation::Ge,
                },
            },
        });
    }
    if vs_big_i == Provable::False {
        facts.push(Fact {
            kind: FactKind::NotInterval,
            certificate: Certificate {
                theorem_tag: TheoremTag::IntervalIffThreshold,
                witnesses: Witnesses::Threshold {
                    q: q.clone(),
                    threshold: stats.big_i.clone(),
                    relation: Relation::Lt,
                },
            },
        });
        if stats.extreme_gap {
            let gaps = sigma.gaps();
            facts.push(Fact {
                kind: FactKind::NotFiniteUnionOfIntervals,
                certificate: Certificate {
                    theorem_tag: TheoremTag::ExtremeGapObstruction,
                    witnesses: Witnesses::ExtremeGap {
                        q: q.clone(),
                        threshold: stats.big_i.clone(),
                        largest_gap: stats.delta_max.clone(),
                        first_gap: gaps[0].clone(),
                        last_gap: gaps[gaps.len() - 1].clone(),
                        diam: stats.diam.clone(),
                    },
                },
            });
        }
    }

    let contains = q.ge(&stats.little_i) == Provable::True;
    if contains {
        facts.push(Fact {
            kind: FactKind::ContainsInterval,
            certificate: Certificate {
                theorem_tag: TheoremTag::SubsetIntervalThreshold,
                witnesses: Witnesses::Threshold {
                    q: q.clone(),
                    threshold: stats.little_i.clone(),
                    relation: Relation::Ge,
                },
            },
        });
    }

    // Zero-measure search. Skipped once an interval-side fact holds: a set
    // containing an interval cannot satisfy |Σₙ|·qⁿ < 1.
    let mut null_search = SearchStatus::Skipped;
    if !contains && vs_big_i != Provable::True {
        match q {
            RatioValue::Exact(qr) => {
                match null_certificate(sigma, qr, opts.depth_budget, opts.budget) {
                    Ok(Some(c)) => {
                        null_search = SearchStatus::Found { depth: c.depth };
                        facts.push(Fact {
                            kind: FactKind::ZeroMeasureCantor,
                            certificate: Certificate {
                                theorem_tag: TheoremTag::SumsetMeasureBound,
                                witnesses: Witnesses::SumsetNull {
                                    q: q.clone(),
                                    depth: c.depth,
                                    cardinality: c.cardinality,
                                    bound: c.bound,
                                },
                            },
                        });
                    }
                    Ok(None) => {
                        null_search = SearchStatus::Exhausted {
                            max_depth: opts.depth_budget,
                        };
                    }
                    Err(SumsetError::BudgetExceeded { depth_reached }) => {
                        null_search = SearchStatus::BudgetExceeded { depth_reached };
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            RatioValue::Enclosure { .. } => {
                // Σₙ is not enumerable without an exact ratio; only the
                // depth-1 bound |Σ|·q < 1 is available.
                let s = sigma.len() as u64;
                let bound = Rational::from_integer(BigInt::from(s)) * q.upper();
                if bound < Rational::one() {
                    null_search = SearchStatus::Found { depth: 1 };
                    facts.push(Fact {
                        kind: FactKind::ZeroMeasureCantor,
                        certificate: Certificate {
                            theorem_tag: TheoremTag::SumsetMeasureBound,
                            witnesses: Witnesses::SumsetNull {
                                q: q.clone(),
                                depth: 1,
                                cardinality: s,
                                bound,
                            },
                        },
                    });
                } else {
                    null_search = SearchStatus::Exhausted { max_depth: 1 };
                }
            }
        }
    }

    // Window membership annotation: only in the uncertified region below i(Σ).
    if !contains && vs_big_i != Provable::True {
        if let Some(w) = &ctx.window {
            if q.gt(&w.lo) == Provable::True && q.upper() < w.hi.lower() {
                facts.push(Fact {
                    kind: FactKind::AePositiveWindowMember,
                    certificate: Certificate {
                        theorem_tag: TheoremTag::AePositiveWindow,
                        witnesses: Witnesses::Window {
                            q: q.clone(),
                            window_lo: w.lo.clone(),
                            window_hi: w.hi.clone(),
                        },
                    },
                });
            }
        }
    }

    let verdict = Verdict::from_facts(facts, ctx.known_form)?;
    Ok(ClassifyOutcome {
        verdict,
        null_search,
    })
}

/// Classify K(Σ;q): every provable fact with its certificate, plus the
/// trichotomy label when the facts imply one.
pub fn classify(
    sigma: &FiniteSigma,
    q: &RatioValue,
    opts: &ClassifyOptions,
) -> Result<ClassifyOutcome, ClassifyError> {
    let ctx = build_context(sigma, opts)?;
    classify_in_context(sigma, q, opts, &ctx)
}

/// The window (1/|Σ|, α̲(d)) in which almost every q gives K positive
/// Lebesgue measure, when the hypotheses hold (d ≤ 1/2 and α̲(d) > 1/|Σ|,
/// both decided with certified arithmetic). Annotation, not a certificate.
pub fn ae_positive_window(
    sigma: &FiniteSigma,
    tol: &Rational,
) -> Result<Option<Window>, ClassifyError> {
    let stats = gap_stats(sigma);
    window_from_stats(sigma, &stats, tol)
}

/// One cell of a sweep: the open interval (lo, hi) with the verdict of a
/// representative ratio.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCell {
    #[serde(with = "rat_str")]
    pub lo: Rational,
    #[serde(with = "rat_str")]
    pub hi: Rational,
    #[serde(with = "rat_str")]
    pub rep: Rational,
    pub verdict: Verdict,
}

/// Verdict at one exact partition point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepPoint {
    #[serde(with = "rat_str")]
    pub q: Rational,
    pub verdict: Verdict,
}

/// Partition of (0,1) into classified cells and exact boundary points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
    pub points: Vec<SweepPoint>,
    pub window: Option<Window>,
}

fn representative(lo: &Rational, hi: &Rational, resolution: u32) -> Rational {
    let two = Rational::from_integer(2.into());
    let mid = (lo + hi) / &two;
    let res = Rational::from_integer(BigInt::from(resolution));
    let floor = (&mid * &res).floor();
    for cand in [&floor / &res, (&floor + Rational::one()) / &res] {
        // both candidates bracket mid; prefer the grid point when inside
        if &cand > lo && &cand < hi {
            let other = if cand <= mid {
                (&floor + Rational::one()) / &res
            } else {
                &floor / &res
            };
            if &other > lo && &other < hi && (&other - &mid).abs() < (&cand - &mid).abs() {
                return other;
            }
            return cand;
        }
    }
    mid
}

/// Partition (0,1) at the exact critical points {1/|Σ|, i(Σ), I(Σ), window
/// top when it ends below i(Σ)} plus the uniform grid k/resolution, classify
/// a representative of each cell and every partition point, and merge
/// adjacent cells with identical verdict signatures.
pub fn sweep(
    sigma: &FiniteSigma,
    resolution: u32,
    opts: &ClassifyOptions,
) -> Result<SweepResult, ClassifyError> {
    if resolution == 0 {
        return Err(ClassifyError::ZeroResolution);
    }
    if opts.depth_budget == 0 {
        return Err(ClassifyError::ZeroDepthBudget);
    }
    let ctx = build_context(sigma, opts)?;
    let one = Rational::one();

    let mut boundaries: Vec<Rational> = Vec::new();
    boundaries.push(Rational::new(BigInt::one(), BigInt::from(sigma.len())));
    boundaries.push(ctx.stats.little_i.clone());
    boundaries.push(ctx.stats.big_i.clone());
    if let Some(w) = &ctx.window {
        let band_end = w.hi.lower().clone();
        if band_end < ctx.stats.little_i {
            boundaries.push(band_end);
        }
    }
    for k in 1..resolution {
        boundaries.push(Rational::new(BigInt::from(k), BigInt::from(resolution)));
    }
    boundaries.retain(|b| b > &Rational::from_integer(0.into()) && b < &one);
    boundaries.sort();
    boundaries.dedup();

    let mut points = Vec::with_capacity(boundaries.len());
    for b in &boundaries {
        let q = RatioValue::Exact(b.clone());
        let outcome = classify_in_context(sigma, &q, opts, &ctx)?;
        points.push(SweepPoint {
            q: b.clone(),
            verdict: outcome.verdict,
        });
    }

    let mut cells: Vec<SweepCell> = Vec::with_capacity(boundaries.len() + 1);
    let mut lo = Rational::from_integer(0.into());
    let ends = boundaries
        .iter()
        .cloned()
        .chain(std::iter::once(one.clone()));
    for hi in ends {
        let rep = representative(&lo, &hi, resolution);
        let q = RatioValue::Exact(rep.clone());
        let outcome = classify_in_context(sigma, &q, opts, &ctx)?;
        let verdict = outcome.verdict;
        match cells.last_mut() {
            Some(last) if last.verdict.signature() == verdict.signature() => {
                last.hi = hi.clone();
            }
            _ => cells.push(SweepCell {
                lo: lo.clone(),
                hi: hi.clone(),
                rep,
                verdict,
            }),
        }
        lo = hi;
    }

    Ok(SweepResult {
        cells,
        points,
        window: ctx.window,
    })
}
