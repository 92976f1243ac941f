//! Report generation: checks, homology tables, page tables, convergence
//! comparison, and diffs against a spec's reference block.
//!
//! Reports are deterministic byte for byte: all collections are sorted and
//! nothing environmental (time, paths) enters the output. The JSON form is
//! the machine-readable surface; the text form prints the same data as
//! aligned tables.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::Degree;
use crate::specfile::FibrationSpec;
use crate::spectral::SpectralPage;

/// Options accepted by [`run_report`].
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    /// Show pages only up to this index (stabilization is still computed).
    pub max_page: Option<u32>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CheckResult {
    Pass,
    Fail { witnesses: Vec<String> },
    Skipped,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        matches!(self, CheckResult::Pass)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Checks {
    pub structure_equation: CheckResult,
    pub d_squared: CheckResult,
    pub filtration: CheckResult,
}

impl Checks {
    pub fn all_passed(&self) -> bool {
        self.structure_equation.passed() && self.d_squared.passed() && self.filtration.passed()
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct DegreeDim {
    pub degree: Degree,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CellDim {
    pub p: i64,
    pub q: i64,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct CellRank {
    pub p: i64,
    pub q: i64,
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PageReport {
    pub r: u32,
    pub dims: Vec<CellDim>,
    pub differential_ranks: Vec<CellRank>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidityWindow {
    pub truncation_degree: Degree,
    pub trustworthy_up_to: Degree,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportBody {
    /// Homology dimensions over the full degree support, zeros included.
    pub homology: Vec<DegreeDim>,
    pub pages: Vec<PageReport>,
    pub stabilization: u32,
    pub infinity: Vec<CellDim>,
    pub associated_graded: Vec<CellDim>,
    pub infinity_matches_associated_graded: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validity_window: Option<ValidityWindow>,
}

/// The full outcome of running the pipeline on one spec.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub name: String,
    pub checks: Checks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<ReportBody>,
}

fn cell_dims(dims: &BTreeMap<(i64, i64), usize>) -> Vec<CellDim> {
    dims.iter()
        .map(|(&(p, q), &dim)| CellDim { p, q, dim })
        .collect()
}

fn page_report(page: &SpectralPage) -> PageReport {
    let differential_ranks = page
        .differentials
        .iter()
        .map(|(&(p, q), m)| CellRank {
            p,
            q,
            rank: m.rank(),
        })
        .collect();
    PageReport {
        r: page.r,
        dims: cell_dims(&page.dims),
        differential_ranks,
    }
}

/// Runs checks, homology, pages, and the convergence comparison.
///
/// A failing structure equation (or an invalid total complex, which the
/// structure equation rules out) yields a report whose checks carry the
/// witnesses and whose results are absent; it never panics on bad data.
pub fn run_report(spec: &FibrationSpec, options: ReportOptions) -> Report {
    let name = spec.name.clone();
    let datum = &spec.datum;
    if let Err(witnesses) = datum.check_structure_equation() {
        return Report {
            name,
            checks: Checks {
                structure_equation: CheckResult::Fail {
                    witnesses: witnesses.iter().map(ToString::to_string).collect(),
                },
                d_squared: CheckResult::Skipped,
                filtration: CheckResult::Skipped,
            },
            results: None,
        };
    }
    let total = datum
        .total_complex()
        .expect("structure equation holds, so the total complex builds");
    let d_squared = match total.complex().validate() {
        Ok(()) => CheckResult::Pass,
        Err(w) => CheckResult::Fail {
            witnesses: vec![w.to_string()],
        },
    };
    let filtration = match total.validate() {
        Ok(()) => CheckResult::Pass,
        Err(w) => CheckResult::Fail {
            witnesses: vec![w.to_string()],
        },
    };
    let checks = Checks {
        structure_equation: CheckResult::Pass,
        d_squared,
        filtration,
    };
    if !checks.all_passed() {
        return Report {
            name,
            checks,
            results: None,
        };
    }

    let homology_data = total
        .complex()
        .homology()
        .expect("total complex was just validated");
    let homology = match (total.complex().min_degree(), total.complex().max_degree()) {
        (Some(lo), Some(hi)) => (lo..=hi)
            .map(|degree| DegreeDim {
                degree,
                dim: homology_data.dim(degree),
            })
            .collect(),
        _ => Vec::new(),
    };

    let (infinity, stabilization) = total
        .infinity_page()
        .expect("total complex was just validated");
    let shown = options.max_page.unwrap_or(stabilization).min(stabilization);
    let pages = (0..=shown)
        .map(|r| page_report(&total.page(r).expect("total complex was just validated")))
        .collect();
    let associated_graded = total
        .associated_graded()
        .expect("total complex was just validated");
    let infinity_matches = infinity.dims == associated_graded;

    let validity_window = spec.truncation_degree.map(|n| {
        let trustworthy = n - i64::from(datum.max_index());
        ValidityWindow {
            truncation_degree: n,
            trustworthy_up_to: trustworthy,
            note: format!(
                "fiber truncated above degree {n}: dimensions in degrees > {trustworthy} may be truncation artifacts"
            ),
        }
    });

    Report {
        name,
        checks,
        results: Some(ReportBody {
            homology,
            pages,
            stabilization,
            infinity: cell_dims(&infinity.dims),
            associated_graded: cell_dims(&associated_graded),
            infinity_matches_associated_graded: infinity_matches,
            validity_window,
        }),
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn checks_text(&self) -> String {
        fn line(label: &str, result: &CheckResult) -> String {
            match result {
                CheckResult::Pass => format!("  {label:<20} pass\n"),
                CheckResult::Skipped => format!("  {label:<20} skipped\n"),
                CheckResult::Fail { witnesses } => {
                    let mut s = format!("  {label:<20} FAIL\n");
                    for w in witnesses {
                        s.push_str(&format!("    - {w}\n"));
                    }
                    s
                }
            }
        }
        let mut out = format!("fixture: {}\nchecks:\n", self.name);
        out.push_str(&line("structure equation", &self.checks.structure_equation));
        out.push_str(&line("d^2 = 0", &self.checks.d_squared));
        out.push_str(&line("filtration", &self.checks.filtration));
        out
    }

    pub fn homology_text(&self) -> String {
        let Some(body) = &self.results else {
            return String::new();
        };
        let mut out = String::from("homology:\n  degree  dim\n");
        for row in &body.homology {
            let mark = match &body.validity_window {
                Some(w) if row.degree > w.trustworthy_up_to => "  (truncation artifact window)",
                _ => "",
            };
            out.push_str(&format!("  {:>6}  {:>3}{mark}\n", row.degree, row.dim));
        }
        if let Some(w) = &body.validity_window {
            out.push_str(&format!("note: {}\n", w.note));
        }
        out
    }

    pub fn pages_text(&self) -> String {
        let Some(body) = &self.results else {
            return String::new();
        };
        let mut out = String::new();
        for page in &body.pages {
            out.push_str(&format!("page r={}:\n", page.r));
            out.push_str("   p   q  dim\n");
            for cell in &page.dims {
                out.push_str(&format!(
                    "  {:>2}  {:>2}  {:>3}\n",
                    cell.p, cell.q, cell.dim
                ));
            }
            if page.differential_ranks.iter().any(|c| c.rank > 0) {
                out.push_str(&format!("  d_{} ranks:\n", page.r));
                for cell in &page.differential_ranks {
                    if cell.rank > 0 {
                        out.push_str(&format!(
                            "    ({}, {}) -> ({}, {}): {}\n",
                            cell.p,
                            cell.q,
                            cell.p - i64::from(page.r),
                            cell.q + i64::from(page.r) - 1,
                            cell.rank
                        ));
                    }
                }
            }
        }
        out.push_str(&format!(
            "stabilization: E^{} = E^infinity\n",
            body.stabilization
        ));
        out.push_str("infinity page:\n   p   q  dim\n");
        for cell in &body.infinity {
            out.push_str(&format!(
                "  {:>2}  {:>2}  {:>3}\n",
                cell.p, cell.q, cell.dim
            ));
        }
        out.push_str(&format!(
            "infinity page vs associated graded of homology: {}\n",
            if body.infinity_matches_associated_graded {
                "match"
            } else {
                "MISMATCH"
            }
        ));
        if let Some(w) = &body.validity_window {
            out.push_str(&format!("note: {}\n", w.note));
        }
        out
    }
}

/// Outcome of diffing a run against the spec's reference block.
#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub name: String,
    pub passed: bool,
    pub diffs: Vec<String>,
}

/// Diffs computed homology, page dims, and stabilization against the
/// reference block. Truncated fixtures are compared inside their window.
pub fn compare(spec: &FibrationSpec) -> Comparison {
    let mut diffs = Vec::new();
    let Some(reference) = &spec.reference else {
        return Comparison {
            name: spec.name.clone(),
            passed: false,
            diffs: vec!["spec carries no reference block".to_string()],
        };
    };
    let report = run_report(spec, ReportOptions::default());
    let Some(body) = &report.results else {
        return Comparison {
            name: spec.name.clone(),
            passed: false,
            diffs: vec!["checks failed; nothing to compare".to_string()],
        };
    };
    let computed: BTreeMap<Degree, usize> = body
        .homology
        .iter()
        .filter(|row| row.dim > 0)
        .map(|row| (row.degree, row.dim))
        .collect();
    match reference.compare_up_to {
        None => {
            if computed != reference.homology {
                diffs.push(format!(
                    "homology: computed {computed:?}, reference {:?}",
                    reference.homology
                ));
            }
        }
        Some(window) => {
            for degree in 0..=window {
                let got = computed.get(&degree).copied().unwrap_or(0);
                let want = reference.homology.get(&degree).copied().unwrap_or(0);
                if got != want {
                    diffs.push(format!(
                        "homology degree {degree}: computed {got}, reference {want} (window ≤ {window})"
                    ));
                }
            }
        }
    }
    let total = spec
        .datum
        .total_complex()
        .expect("report succeeded, so the total complex builds");
    for (&r, expected) in &reference.pages {
        let page = total.page(r).expect("report succeeded on this complex");
        if &page.dims != expected {
            diffs.push(format!(
                "page {r} dims: computed {:?}, reference {expected:?}",
                page.dims
            ));
        }
    }
    if let Some(want) = reference.stabilization {
        if body.stabilization != want {
            diffs.push(format!(
                "stabilization: computed {}, reference {want}",
                body.stabilization
            ));
        }
    }
    Comparison {
        name: spec.name.clone(),
        passed: diffs.is_empty(),
        diffs,
    }
}

/// Outcome of cross-checking the two routes to the first two pages: the
/// fiber-homology assembly against the filtration engine.
#[derive(Debug, Clone, Serialize)]
pub struct CrossCheck {
    pub name: String,
    pub passed: bool,
    pub e2: Vec<CellDim>,
    pub diffs: Vec<String>,
}

/// Compares the first-page dimensions and differential ranks, and the
/// second-page dimensions, computed through fiber homology, against pages
/// 1 and 2 of the filtration engine.
pub fn e2_cross_check(spec: &FibrationSpec) -> CrossCheck {
    let mut diffs = Vec::new();
    let datum = &spec.datum;
    if let Err(witnesses) = datum.check_structure_equation() {
        return CrossCheck {
            name: spec.name.clone(),
            passed: false,
            e2: Vec::new(),
            diffs: witnesses.iter().map(ToString::to_string).collect(),
        };
    }
    let e1 = datum.e1().expect("structure equation holds");
    let total = datum.total_complex().expect("structure equation holds");
    let page1 = total.page(1).expect("total complex is valid");
    if e1.dims != page1.dims {
        diffs.push(format!(
            "page 1 dims: fiber homology {:?}, engine {:?}",
            e1.dims, page1.dims
        ));
    }
    for (&(p, q), m) in &e1.differentials {
        let got = page1.differential_rank(p, q);
        if m.rank() != got {
            diffs.push(format!(
                "d_1 rank at ({p}, {q}): fiber homology {}, engine {got}",
                m.rank()
            ));
        }
    }
    for (&(p, q), m) in &page1.differentials {
        let want = e1.differentials.get(&(p, q)).map_or(0, |b| b.rank());
        if m.rank() != want {
            diffs.push(format!(
                "d_1 rank at ({p}, {q}): engine {}, fiber homology {want}",
                m.rank()
            ));
        }
    }
    let e2 = datum.e2_dims().expect("structure equation holds");
    let page2 = total.page(2).expect("total complex is valid");
    if e2 != page2.dims {
        diffs.push(format!(
            "page 2 dims: fiber homology {e2:?}, engine {:?}",
            page2.dims
        ));
    }
    CrossCheck {
        name: spec.name.clone(),
        passed: diffs.is_empty(),
        e2: cell_dims(&e2),
        diffs,
    }
}
