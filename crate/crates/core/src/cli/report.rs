//! Summary tables, JSON dumps and chart files.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::pipeline::{Analysis, CycleOutcome};
use super::svg::{line_chart, Color, Series};
use crate::error::{Error, Result};
use crate::signal::CycleSearch;
use crate::symmetry::{CaseOutcome, CaseReport, CouplingCase, DissimilarityReport, ShiftCorrelationResult};

/// Writes through a sibling temporary file and a rename, so readers never
/// see a half-written report.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidParameter(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.tmp", name.to_string_lossy()));
    let write = || -> std::io::Result<()> {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    };
    write().map_err(|e| {
        let _ = fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

fn fixed(v: f64) -> String {
    format!("{v:.2}")
}

fn case_cells(report: &CaseReport) -> (String, String) {
    match &report.outcome {
        CaseOutcome::Computed {
            dis, classification, ..
        } => (fixed(*dis), classification.to_string()),
        CaseOutcome::Failed(_) => ("NA".into(), "Degenerate".into()),
    }
}

/// Column order of `summary.csv`.
pub fn summary_header() -> Vec<String> {
    let mut cols: Vec<String> = ["subject", "frames", "cycle_frames", "full_cycles", "rho"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    cols.extend(CouplingCase::ALL.iter().map(|c| format!("dis_{c}")));
    cols.extend(CouplingCase::ALL.iter().map(|c| format!("class_{c}")));
    cols
}

pub fn summary_csv(analysis: &Analysis) -> Result<String> {
    let cycle = analysis.cycle.combined.period_frames;
    let mut row = vec![
        analysis.subject.clone(),
        analysis.frames.to_string(),
        cycle.to_string(),
        (analysis.frames / cycle.max(1)).to_string(),
        fixed(analysis.shift.rho),
    ];
    let cells: Vec<(String, String)> = CouplingCase::ALL
        .iter()
        .map(|&c| case_cells(analysis.dissimilarity.case(c)))
        .collect();
    row.extend(cells.iter().map(|(d, _)| d.clone()));
    row.extend(cells.into_iter().map(|(_, c)| c));

    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::InvalidInput(format!("summary encoding failed: {e}"));
    w.write_record(summary_header()).map_err(to_err)?;
    w.write_record(&row).map_err(to_err)?;
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidInput(format!("summary encoding failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

#[derive(Serialize)]
struct CaseJson {
    case: CouplingCase,
    dis: Option<f64>,
    classification: Option<String>,
    error: Option<String>,
}

#[derive(Serialize)]
pub struct DissimilarityJson {
    threshold: f64,
    demean: bool,
    cases: Vec<CaseJson>,
}

pub fn dissimilarity_json(report: &DissimilarityReport) -> DissimilarityJson {
    DissimilarityJson {
        threshold: report.threshold,
        demean: report.demean,
        cases: report
            .cases
            .iter()
            .map(|c| CaseJson {
                case: c.case,
                dis: c.dis(),
                classification: c.classification().map(|k| k.to_string()),
                error: match &c.outcome {
                    CaseOutcome::Failed(e) => Some(e.to_string()),
                    CaseOutcome::Computed { .. } => None,
                },
            })
            .collect(),
    }
}

#[derive(Serialize)]
struct ShiftJson {
    rho: f64,
    cycle_frames: usize,
    left_shift: f64,
    right_shift: f64,
    analyzed_length: usize,
    window_start: usize,
}

fn shift_json(r: &ShiftCorrelationResult) -> ShiftJson {
    ShiftJson {
        rho: r.rho,
        cycle_frames: r.cycle_frames,
        left_shift: r.left_shift,
        right_shift: r.right_shift,
        analyzed_length: r.analyzed_length,
        window_start: r.window_start,
    }
}

#[derive(Serialize)]
struct SummaryJson<'a> {
    subject: &'a str,
    frames: usize,
    search: &'a CycleSearch,
    cycle: &'a CycleOutcome,
    shift_correlation: ShiftJson,
    dissimilarity: DissimilarityJson,
}

/// Full-precision counterpart of `summary.csv`.
pub fn summary_json(analysis: &Analysis, search: &CycleSearch) -> String {
    let doc = SummaryJson {
        subject: &analysis.subject,
        frames: analysis.frames,
        search,
        cycle: &analysis.cycle,
        shift_correlation: shift_json(&analysis.shift),
        dissimilarity: dissimilarity_json(&analysis.dissimilarity),
    };
    serde_json::to_string_pretty(&doc).expect("summary serializes") + "\n"
}

pub fn shift_json_string(r: &ShiftCorrelationResult) -> String {
    serde_json::to_string_pretty(&shift_json(r)).expect("result serializes") + "\n"
}

pub fn cycle_text(c: &CycleOutcome) -> String {
    let line = |label: &str, e: &crate::signal::CycleEstimate| {
        format!(
            "{label:<12}{:>4} frames  (peak acf {:.3}, lags {}..{})\n",
            e.period_frames, e.peak_acf, e.search_range.0, e.search_range.1
        )
    };
    let mut s = line("left ankle", &c.left);
    s += &line("right ankle", &c.right);
    s += &format!("{:<12}{:>4} frames\n", "combined", c.combined.period_frames);
    s
}

pub fn shift_text(r: &ShiftCorrelationResult) -> String {
    format!(
        "cycle {} frames, window {}..{} ({} frames)\nleft shift {:+.2}, right shift {:+.2}\nrho {:.4}\n",
        r.cycle_frames,
        r.window_start,
        r.window_start + r.analyzed_length,
        r.analyzed_length,
        r.left_shift,
        r.right_shift,
        r.rho
    )
}

pub fn dissimilarity_table(report: &DissimilarityReport) -> String {
    let mut s = format!("{:<6}{:>12}  {}\n", "case", "dis", "class");
    for c in &report.cases {
        match &c.outcome {
            CaseOutcome::Computed {
                dis, classification, ..
            } => {
                s += &format!("{:<6}{:>12.4}  {classification}\n", c.case.to_string(), dis);
            }
            CaseOutcome::Failed(e) => {
                s += &format!("{:<6}{:>12}  Degenerate ({e})\n", c.case.to_string(), "NA");
            }
        }
    }
    s += &format!(
        "threshold {}{}\n",
        report.threshold,
        if report.demean { ", demeaned" } else { "" }
    );
    s
}

fn case_axis_label(case: CouplingCase) -> String {
    format!("{} / {} speed (px/frame)", case.input_mode(), case.output_mode())
}

/// `speeds_<CASE>.svg`: the four speed series of a case.
pub fn speeds_svg(report: &CaseReport) -> String {
    let s = &report.series;
    let (inp, out) = (report.case.input_mode(), report.case.output_mode());
    line_chart(
        &format!("Ankle and wrist speeds, case {}", report.case),
        &case_axis_label(report.case),
        &[
            Series {
                label: format!("right ankle ({inp})"),
                color: Color::Blue,
                values: &s.a.values,
            },
            Series {
                label: format!("right wrist ({out})"),
                color: Color::Red,
                values: &s.b.values,
            },
            Series {
                label: format!("left ankle ({inp})"),
                color: Color::Green,
                values: &s.x.values,
            },
            Series {
                label: format!("left wrist ({out})"),
                color: Color::Yellow,
                values: &s.y.values,
            },
        ],
    )
}

/// `convolution_<CASE>.svg`: the two cross-convolutions, or `None` when the
/// case failed.
pub fn convolution_svg(report: &CaseReport) -> Option<String> {
    let CaseOutcome::Computed { dis, pair, .. } = &report.outcome else {
        return None;
    };
    Some(line_chart(
        &format!("Cross-convolutions, case {} (dis {:.2})", report.case, dis),
        "convolution",
        &[
            Series {
                label: "u = right ankle * left wrist".into(),
                color: Color::Blue,
                values: &pair.u,
            },
            Series {
                label: "v = left ankle * right wrist".into(),
                color: Color::Red,
                values: &pair.v,
            },
        ],
    ))
}

pub fn shift_svg(r: &ShiftCorrelationResult) -> String {
    line_chart(
        &format!("Quarter-cycle shifted ankle speeds (rho {:.2})", r.rho),
        "ankle speed (px/frame)",
        &[
            Series {
                label: "right ankle, advanced T/4".into(),
                color: Color::Blue,
                values: &r.right_shifted,
            },
            Series {
                label: "left ankle, delayed T/4".into(),
                color: Color::Green,
                values: &r.left_shifted,
            },
        ],
    )
}

pub fn write_dissimilarity_charts(dir: &Path, report: &DissimilarityReport, speeds: bool) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for case in &report.cases {
        if speeds {
            let path = dir.join(format!("speeds_{}.svg", case.case));
            write_atomic(&path, speeds_svg(case).as_bytes())?;
            written.push(path);
        }
        if let Some(svg) = convolution_svg(case) {
            let path = dir.join(format!("convolution_{}.svg", case.case));
            write_atomic(&path, svg.as_bytes())?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}
