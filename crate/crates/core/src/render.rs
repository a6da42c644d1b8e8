//! q-axis structure diagrams.
//!
//! A sweep partitions (0,1) into labelled regions: C₀ (Cantor set of zero
//! measure), MC (Cantorval), I (interval), λ⁺ (almost-everywhere positive
//! measure annotation) and unknown. The diagram keeps exact rational
//! boundaries; floating point only positions the SVG elements. Certified
//! zero-measure points that sit inside a differently-labelled region become
//! hollow marks.

use crate::classify::{FactKind, SweepResult, TrichotomyLabel, Verdict};
use crate::rational::{rat_str, rational_string, to_f64, Rational};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("sweep cells overlap near {0}")]
    OverlappingCells(String),
    #[error("sweep is empty")]
    EmptySweep,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionLabel {
    #[serde(rename = "C0")]
    C0,
    #[serde(rename = "lambda+")]
    LambdaPlus,
    #[serde(rename = "MC")]
    MC,
    #[serde(rename = "I")]
    I,
    #[serde(rename = "unknown")]
    Unknown,
}

impl RegionLabel {
    fn text(self) -> &'static str {
        match self {
            RegionLabel::C0 => "C0",
            RegionLabel::LambdaPlus => "λ+",
            RegionLabel::MC => "MC",
            RegionLabel::I => "I",
            RegionLabel::Unknown => "",
        }
    }

    fn color(self) -> &'static str {
        match self {
            RegionLabel::C0 => "#b0b0b0",
            RegionLabel::LambdaPlus => "#8fcf8f",
            RegionLabel::MC => "#e8a04c",
            RegionLabel::I => "#5b8ecf",
            RegionLabel::Unknown => "#ececec",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MarkStyle {
    Solid,
    Hollow,
    Bold,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    #[serde(with = "rat_str")]
    pub lo: Rational,
    #[serde(with = "rat_str")]
    pub hi: Rational,
    pub label: RegionLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mark {
    #[serde(with = "rat_str")]
    pub q: Rational,
    pub style: MarkStyle,
    pub caption: String,
}

/// Machine-readable diagram: ordered disjoint segments plus point marks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramSpec {
    pub schema: String,
    pub segments: Vec<Segment>,
    pub marks: Vec<Mark>,
}

pub const DIAGRAM_SCHEMA: &str = "diagram/v1";

fn verdict_label(v: &Verdict) -> RegionLabel {
    if v.has(FactKind::IsInterval) {
        RegionLabel::I
    } else if v.trichotomy == Some(TrichotomyLabel::Cantorval) {
        RegionLabel::MC
    } else if v.has(FactKind::ZeroMeasureCantor) {
        RegionLabel::C0
    } else if v.has(FactKind::AePositiveWindowMember) {
        RegionLabel::LambdaPlus
    } else {
        RegionLabel::Unknown
    }
}

/// Map a sweep to a diagram: verdicts become region labels, adjacent cells
/// with the same label merge, and every partition point whose own verdict
/// stands out (or that separates two regions) becomes a mark.
pub fn diagram_from_sweep(sweep: &SweepResult) -> Result<DiagramSpec, RenderError> {
    if sweep.cells.is_empty() {
        return Err(RenderError::EmptySweep);
    }
    for pair in sweep.cells.windows(2) {
        if pair[1].lo < pair[0].hi {
            return Err(RenderError::OverlappingCells(pair[1].lo.to_string()));
        }
    }

    let mut segments: Vec<Segment> = Vec::new();
    for cell in &sweep.cells {
        let label = verdict_label(&cell.verdict);
        match segments.last_mut() {
            Some(seg) if seg.label == label && seg.hi == cell.lo => seg.hi = cell.hi.clone(),
            _ => segments.push(Segment {
                lo: cell.lo.clone(),
                hi: cell.hi.clone(),
                label,
            }),
        }
    }

    let mut marks: Vec<Mark> = Vec::new();
    for point in &sweep.points {
        let plabel = verdict_label(&point.verdict);
        let is_boundary = segments.iter().skip(1).any(|s| s.lo == point.q);
        let containing = segments
            .iter()
            .find(|s| s.lo < point.q && point.q < s.hi)
            .map(|s| s.label);
        let exceptional = containing.is_some_and(|l| l != plabel);
        if !is_boundary && !exceptional {
            continue;
        }
        let style = if point.verdict.has(FactKind::IsInterval) {
            MarkStyle::Bold
        } else if point.verdict.has(FactKind::ZeroMeasureCantor) {
            MarkStyle::Hollow
        } else {
            MarkStyle::Solid
        };
        marks.push(Mark {
            q: point.q.clone(),
            style,
            caption: plabel.text().to_string(),
        });
    }

    Ok(DiagramSpec {
        schema: DIAGRAM_SCHEMA.to_string(),
        segments,
        marks,
    })
}

const WIDTH: f64 = 960.0;
const HEIGHT: f64 = 190.0;
const AXIS_Y: f64 = 110.0;
const X0: f64 = 40.0;
const X1: f64 = 920.0;

fn x_of(q: &Rational) -> f64 {
    X0 + (X1 - X0) * to_f64(q)
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

/// Deterministic SVG 1.1 rendering of a diagram.
pub fn svg_string(spec: &DiagramSpec) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\">\n",
        WIDTH as u32, HEIGHT as u32, WIDTH as u32, HEIGHT as u32
    ));
    out.push_str("  <rect x=\"0\" y=\"0\" width=\"960\" height=\"190\" fill=\"white\"/>\n");

    // region bands
    for seg in &spec.segments {
        let xa = x_of(&seg.lo);
        let xb = x_of(&seg.hi);
        if seg.label == RegionLabel::LambdaPlus {
            // annotation band: above the axis, dashed outline
            out.push_str(&format!(
                "  <rect x=\"{}\" y=\"86\" width=\"{}\" height=\"12\" fill=\"{}\" fill-opacity=\"0.45\" stroke=\"#4a7f4a\" stroke-dasharray=\"4 3\"/>\n",
                fmt(xa), fmt(xb - xa), seg.label.color()
            ));
        } else if seg.label != RegionLabel::Unknown {
            out.push_str(&format!(
                "  <rect x=\"{}\" y=\"104\" width=\"{}\" height=\"12\" fill=\"{}\"/>\n",
                fmt(xa),
                fmt(xb - xa),
                seg.label.color()
            ));
        }
        if !seg.label.text().is_empty() {
            let cx = (xa + xb) / 2.0;
            out.push_str(&format!(
                "  <text x=\"{}\" y=\"70\" font-family=\"sans-serif\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n",
                fmt(cx),
                seg.label.text()
            ));
        }
    }

    // axis
    out.push_str(&format!(
        "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        fmt(X0),
        fmt(AXIS_Y),
        fmt(X1),
        fmt(AXIS_Y)
    ));
    for (x, label) in [(X0, "0"), (X1, "1")] {
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(x),
            fmt(AXIS_Y - 6.0),
            fmt(x),
            fmt(AXIS_Y + 6.0)
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            fmt(x),
            fmt(AXIS_Y + 28.0),
            label
        ));
    }

    // boundary ticks with exact rational labels
    for seg in spec.segments.iter().skip(1) {
        let x = x_of(&seg.lo);
        out.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
            fmt(x),
            fmt(AXIS_Y - 5.0),
            fmt(x),
            fmt(AXIS_Y + 5.0)
        ));
        out.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
            fmt(x),
            fmt(AXIS_Y + 28.0),
            rational_string(&seg.lo)
        ));
    }

    // marks
    for mark in &spec.marks {
        let x = x_of(&mark.q);
        match mark.style {
            MarkStyle::Hollow => out.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"white\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
                fmt(x),
                fmt(AXIS_Y)
            )),
            MarkStyle::Solid => out.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"black\"/>\n",
                fmt(x),
                fmt(AXIS_Y)
            )),
            MarkStyle::Bold => out.push_str(&format!(
                "  <circle cx=\"{}\" cy=\"{}\" r=\"6\" fill=\"black\"/>\n",
                fmt(x),
                fmt(AXIS_Y)
            )),
        }
        if !mark.caption.is_empty() {
            out.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
                fmt(x),
                fmt(AXIS_Y - 12.0),
                mark.caption
            ));
        }
    }

    out.push_str("</svg>\n");
    out
}

/// Write the SVG and a JSON sidecar (same path with the `json` extension).
pub fn render_svg(spec: &DiagramSpec, path: &Path) -> Result<(), RenderError> {
    std::fs::write(path, svg_string(spec))?;
    let sidecar = path.with_extension("json");
    std::fs::write(sidecar, serde_json::to_string_pretty(spec)?)?;
    Ok(())
}
