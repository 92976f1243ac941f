//! The on-disk fibration spec format: a UTF-8 JSON document describing
//! critical points, fiber complexes, transports, and optional group data
//! and reference values.
//!
//! Degrees appear as string keys. Matrices are `{rows, cols, entries}` with
//! entries a sorted list of `[row, col]` positions carrying a 1. Group
//! elements are strings accompanied by a full multiplication table. Parsing
//! validates everything and reports located errors; emission is canonical,
//! so parse∘emit is the identity and emit∘parse∘emit is byte-stable.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::complex::{Degree, DegreeMap, GradedComplex};
use crate::enriched::{CriticalPoint, EnrichedMorseDatum};
use crate::gf2::BitMatrix;
use crate::monodromy::{FiniteGroup, GroupAlgebraComplex, MonodromyLocalSystem};

/// A located parse or validation error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError {
    /// Field path such as `fibers.x0.differentials.1`, or `document` for
    /// syntax errors (which carry line and column in the message).
    pub location: String,
    pub message: String,
}

impl SpecError {
    fn new(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl std::fmt::Display for SpecError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// Which built-in local system a lifted fixture carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    LeftRegular,
    Conjugation,
    EndMon,
    Trivial,
}

impl SystemKind {
    pub fn name(self) -> &'static str {
        match self {
            SystemKind::LeftRegular => "left-regular",
            SystemKind::Conjugation => "conjugation",
            SystemKind::EndMon => "end-mon",
            SystemKind::Trivial => "trivial",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        match name {
            "left-regular" => Some(SystemKind::LeftRegular),
            "conjugation" => Some(SystemKind::Conjugation),
            "end-mon" => Some(SystemKind::EndMon),
            "trivial" => Some(SystemKind::Trivial),
            _ => None,
        }
    }

    /// Instantiates the system over a group.
    pub fn build(self, group: FiniteGroup) -> MonodromyLocalSystem {
        match self {
            SystemKind::LeftRegular => MonodromyLocalSystem::left_regular(group),
            SystemKind::Conjugation => MonodromyLocalSystem::conjugation(group),
            SystemKind::EndMon => MonodromyLocalSystem::end_mon(group),
            SystemKind::Trivial => MonodromyLocalSystem::trivial(group),
        }
    }
}

/// Group-algebra data carried by lifted fixtures: the group, the named
/// local system, and the complex of modules used as an independent oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedData {
    pub group: FiniteGroup,
    pub system: SystemKind,
    pub algebra: GroupAlgebraComplex,
}

/// Expected values a spec may carry for comparison runs.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Reference {
    /// Expected homology dimensions (absent degrees mean zero).
    pub homology: BTreeMap<Degree, usize>,
    /// Expected page dimensions for selected page indices.
    pub pages: BTreeMap<u32, BTreeMap<(i64, i64), usize>>,
    /// Expected stabilization index.
    pub stabilization: Option<u32>,
    /// Compare homology only up to this degree (truncated fixtures).
    pub compare_up_to: Option<Degree>,
}

/// A parsed and validated fibration spec.
#[derive(Debug, Clone, PartialEq)]
pub struct FibrationSpec {
    pub name: String,
    pub datum: EnrichedMorseDatum,
    pub lifted: Option<LiftedData>,
    /// Fiber truncation degree, when the fiber models a space truncated
    /// above some degree; homology beyond the window is an artifact.
    pub truncation_degree: Option<Degree>,
    pub reference: Option<Reference>,
}

// ---------------------------------------------------------------------------
// serde document mirror
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    rows: usize,
    cols: usize,
    entries: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ComplexDoc {
    generators: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    differentials: BTreeMap<String, MatrixDoc>,
}

#[derive(Serialize, Deserialize)]
struct PointDoc {
    id: String,
    index: u32,
}

#[derive(Serialize, Deserialize)]
struct TransportDoc {
    from: String,
    to: String,
    shift: i64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    components: BTreeMap<String, MatrixDoc>,
}

#[derive(Serialize, Deserialize)]
struct GroupDoc {
    elements: Vec<String>,
    table: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
struct MonodromyDoc {
    system: String,
    ranks: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    boundaries: BTreeMap<String, Vec<Vec<Vec<String>>>>,
}

#[derive(Serialize, Deserialize)]
struct ReferenceDoc {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    homology: BTreeMap<String, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pages: BTreeMap<String, BTreeMap<String, usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    stabilization: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    compare_up_to: Option<Degree>,
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    name: String,
    base: Vec<PointDoc>,
    fibers: BTreeMap<String, ComplexDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    transports: Vec<TransportDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    group: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    monodromy: Option<MonodromyDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    truncation_degree: Option<Degree>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference: Option<ReferenceDoc>,
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

fn parse_degree(key: &str, location: &str, errors: &mut Vec<SpecError>) -> Option<Degree> {
    match key.parse::<Degree>() {
        Ok(d) => Some(d),
        Err(_) => {
            errors.push(SpecError::new(
                location,
                format!("degree key `{key}` is not an integer"),
            ));
            None
        }
    }
}

fn parse_matrix(doc: &MatrixDoc, location: &str, errors: &mut Vec<SpecError>) -> Option<BitMatrix> {
    let mut seen = BTreeSet::new();
    let mut ok = true;
    for &[r, c] in &doc.entries {
        if r >= doc.rows || c >= doc.cols {
            errors.push(SpecError::new(
                location,
                format!(
                    "entry [{r}, {c}] outside a {}x{} matrix",
                    doc.rows, doc.cols
                ),
            ));
            ok = false;
        }
        if !seen.insert((r, c)) {
            errors.push(SpecError::new(
                location,
                format!("entry [{r}, {c}] listed twice"),
            ));
            ok = false;
        }
    }
    ok.then(|| BitMatrix::from_entries(doc.rows, doc.cols, seen))
}

fn parse_complex(
    doc: &ComplexDoc,
    location: &str,
    errors: &mut Vec<SpecError>,
) -> Option<GradedComplex> {
    let mut generators = BTreeMap::new();
    for (key, names) in &doc.generators {
        let loc = format!("{location}.generators.{key}");
        if let Some(d) = parse_degree(key, &loc, errors) {
            generators.insert(d, names.clone());
        }
    }
    let mut differentials = BTreeMap::new();
    for (key, m) in &doc.differentials {
        let loc = format!("{location}.differentials.{key}");
        let d = parse_degree(key, &loc, errors);
        let matrix = parse_matrix(m, &loc, errors);
        if let (Some(d), Some(matrix)) = (d, matrix) {
            differentials.insert(d, matrix);
        }
    }
    if !errors.is_empty() {
        return None;
    }
    match GradedComplex::new(generators, differentials) {
        Ok(c) => Some(c),
        Err(e) => {
            errors.push(SpecError::new(location, e.to_string()));
            None
        }
    }
}

/// Parses and validates a spec document.
///
/// On failure, returns every located error found; syntax errors carry the
/// line and column reported by the JSON parser.
pub fn parse_spec(text: &str) -> Result<FibrationSpec, Vec<SpecError>> {
    let doc: SpecDoc = serde_json::from_str(text).map_err(|e| {
        vec![SpecError::new(
            "document",
            format!("line {}, column {}: {e}", e.line(), e.column()),
        )]
    })?;
    let mut errors = Vec::new();

    let points: Vec<CriticalPoint> = doc
        .base
        .iter()
        .map(|p| CriticalPoint::new(p.id.clone(), p.index))
        .collect();
    let index_of = |id: &str| points.iter().find(|p| p.id == id).map(|p| p.index);

    let mut fibers = BTreeMap::new();
    for p in &points {
        match doc.fibers.get(&p.id) {
            None => errors.push(SpecError::new(
                format!("fibers.{}", p.id),
                format!("no fiber block for critical point `{}`", p.id),
            )),
            Some(cd) => {
                if let Some(c) = parse_complex(cd, &format!("fibers.{}", p.id), &mut errors) {
                    fibers.insert(p.id.clone(), c);
                }
            }
        }
    }
    for id in doc.fibers.keys() {
        if index_of(id).is_none() {
            errors.push(SpecError::new(
                format!("fibers.{id}"),
                format!("fiber block for unknown critical point `{id}`"),
            ));
        }
    }

    let mut transports = BTreeMap::new();
    for (i, t) in doc.transports.iter().enumerate() {
        let loc = format!("transports[{i}]");
        let (Some(fi), Some(ti)) = (index_of(&t.from), index_of(&t.to)) else {
            errors.push(SpecError::new(
                &loc,
                format!("unknown critical point in pair ({} → {})", t.from, t.to),
            ));
            continue;
        };
        if fi <= ti {
            errors.push(SpecError::new(
                &loc,
                format!("pair ({} → {}) does not descend in index", t.from, t.to),
            ));
            continue;
        }
        let want = i64::from(fi) - i64::from(ti) - 1;
        if t.shift != want {
            errors.push(SpecError::new(
                &loc,
                format!(
                    "pair ({} → {}) has shift {}, expected {want}",
                    t.from, t.to, t.shift
                ),
            ));
            continue;
        }
        let mut components = BTreeMap::new();
        for (key, m) in &t.components {
            let comp_loc = format!("{loc}.components.{key}");
            let d = parse_degree(key, &comp_loc, &mut errors);
            let matrix = parse_matrix(m, &comp_loc, &mut errors);
            if let (Some(d), Some(matrix)) = (d, matrix) {
                components.insert(d, matrix);
            }
        }
        if transports
            .insert(
                (t.from.clone(), t.to.clone()),
                DegreeMap::new(t.shift, components),
            )
            .is_some()
        {
            errors.push(SpecError::new(
                &loc,
                format!("duplicate transport for pair ({} → {})", t.from, t.to),
            ));
        }
    }

    let group = doc.group.as_ref().and_then(|g| {
        match FiniteGroup::new(g.elements.clone(), g.table.clone()) {
            Ok(group) => Some(group),
            Err(e) => {
                errors.push(SpecError::new("group", e.to_string()));
                None
            }
        }
    });

    let lifted = match (&doc.monodromy, group) {
        (None, _) => None,
        (Some(_), None) => {
            errors.push(SpecError::new(
                "monodromy",
                "monodromy block requires a group block",
            ));
            None
        }
        (Some(m), Some(group)) => {
            let system = SystemKind::from_name(&m.system);
            if system.is_none() {
                errors.push(SpecError::new(
                    "monodromy.system",
                    format!("unknown system `{}`", m.system),
                ));
            }
            let mut ranks = BTreeMap::new();
            for (key, &rank) in &m.ranks {
                let loc = format!("monodromy.ranks.{key}");
                if let Some(d) = parse_degree(key, &loc, &mut errors) {
                    ranks.insert(d, rank);
                }
            }
            let mut boundaries = BTreeMap::new();
            for (key, rows) in &m.boundaries {
                let loc = format!("monodromy.boundaries.{key}");
                if let Some(d) = parse_degree(key, &loc, &mut errors) {
                    let rows: Vec<Vec<BTreeSet<String>>> = rows
                        .iter()
                        .map(|row| row.iter().map(|e| e.iter().cloned().collect()).collect())
                        .collect();
                    boundaries.insert(d, rows);
                }
            }
            match (
                system,
                GroupAlgebraComplex::new(group.clone(), ranks, boundaries),
            ) {
                (Some(system), Ok(algebra)) => Some(LiftedData {
                    group,
                    system,
                    algebra,
                }),
                (_, Err(e)) => {
                    errors.push(SpecError::new("monodromy.boundaries", e.to_string()));
                    None
                }
                _ => None,
            }
        }
    };

    let reference = doc.reference.as_ref().map(|r| {
        let mut homology = BTreeMap::new();
        for (key, &dim) in &r.homology {
            let loc = format!("reference.homology.{key}");
            if let Some(d) = parse_degree(key, &loc, &mut errors) {
                homology.insert(d, dim);
            }
        }
        let mut pages = BTreeMap::new();
        for (rkey, dims) in &r.pages {
            let loc = format!("reference.pages.{rkey}");
            let Ok(rr) = rkey.parse::<u32>() else {
                errors.push(SpecError::new(
                    &loc,
                    format!("page key `{rkey}` is not a page index"),
                ));
                continue;
            };
            let mut cell_dims = BTreeMap::new();
            for (cell, &dim) in dims {
                match parse_bidegree(cell) {
                    Some(pq) => {
                        cell_dims.insert(pq, dim);
                    }
                    None => errors.push(SpecError::new(
                        &loc,
                        format!("cell key `{cell}` is not of the form `p,q`"),
                    )),
                }
            }
            pages.insert(rr, cell_dims);
        }
        Reference {
            homology,
            pages,
            stabilization: r.stabilization,
            compare_up_to: r.compare_up_to,
        }
    });

    if !errors.is_empty() {
        return Err(errors);
    }

    let datum = EnrichedMorseDatum::new(points, fibers, transports)
        .map_err(|e| vec![SpecError::new("document", e.to_string())])?;

    Ok(FibrationSpec {
        name: doc.name,
        datum,
        lifted,
        truncation_degree: doc.truncation_degree,
        reference,
    })
}

fn parse_bidegree(s: &str) -> Option<(i64, i64)> {
    let (p, q) = s.split_once(',')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

/// Formats a bidegree as the canonical `p,q` key.
pub fn bidegree_key(pq: (i64, i64)) -> String {
    format!("{},{}", pq.0, pq.1)
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

fn emit_matrix(m: &BitMatrix) -> MatrixDoc {
    MatrixDoc {
        rows: m.rows(),
        cols: m.cols(),
        entries: m.entries().into_iter().map(|(r, c)| [r, c]).collect(),
    }
}

fn emit_complex(c: &GradedComplex) -> ComplexDoc {
    let generators = c
        .degrees()
        .map(|d| (d.to_string(), c.generator_names(d).to_vec()))
        .collect();
    let differentials = c
        .degrees()
        .filter(|&d| !c.differential(d).is_zero())
        .map(|d| (d.to_string(), emit_matrix(&c.differential(d))))
        .collect();
    ComplexDoc {
        generators,
        differentials,
    }
}

/// Canonical serialization of a spec: sorted keys, sorted matrix entries,
/// two-space indentation, trailing newline.
pub fn emit_spec(spec: &FibrationSpec) -> String {
    let datum = &spec.datum;
    let doc = SpecDoc {
        name: spec.name.clone(),
        base: datum
            .points()
            .iter()
            .map(|p| PointDoc {
                id: p.id.clone(),
                index: p.index,
            })
            .collect(),
        fibers: datum
            .fibers()
            .iter()
            .map(|(id, c)| (id.clone(), emit_complex(c)))
            .collect(),
        transports: datum
            .transports()
            .iter()
            .map(|((from, to), map)| TransportDoc {
                from: from.clone(),
                to: to.clone(),
                shift: map.shift(),
                components: map
                    .components()
                    .iter()
                    .map(|(&d, m)| (d.to_string(), emit_matrix(m)))
                    .collect(),
            })
            .collect(),
        group: spec.lifted.as_ref().map(|l| GroupDoc {
            elements: l.group.elements().to_vec(),
            table: l.group.named_table(),
        }),
        monodromy: spec.lifted.as_ref().map(|l| MonodromyDoc {
            system: l.system.name().to_string(),
            ranks: l
                .algebra
                .ranks()
                .iter()
                .map(|(&d, &r)| (d.to_string(), r))
                .collect(),
            boundaries: l
                .algebra
                .boundaries()
                .iter()
                .map(|(&d, rows)| {
                    let rows = rows
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|entry| entry.iter().cloned().collect())
                                .collect()
                        })
                        .collect();
                    (d.to_string(), rows)
                })
                .collect(),
        }),
        truncation_degree: spec.truncation_degree,
        reference: spec.reference.as_ref().map(|r| ReferenceDoc {
            homology: r
                .homology
                .iter()
                .map(|(&d, &dim)| (d.to_string(), dim))
                .collect(),
            pages: r
                .pages
                .iter()
                .map(|(&rr, dims)| {
                    let dims = dims
                        .iter()
                        .map(|(&pq, &dim)| (bidegree_key(pq), dim))
                        .collect();
                    (rr.to_string(), dims)
                })
                .collect(),
            stabilization: r.stabilization,
            compare_up_to: r.compare_up_to,
        }),
    };
    let mut out = serde_json::to_string_pretty(&doc).expect("spec document serializes");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_specs_round_trip() {
        for name in catalog::names() {
            let spec = catalog::get(&name).unwrap();
            let text = emit_spec(&spec);
            let parsed = parse_spec(&text).unwrap_or_else(|errs| {
                panic!("{name}: {errs:?}");
            });
            assert_eq!(parsed, spec, "round trip failed for {name}");
            assert_eq!(emit_spec(&parsed), text, "re-emission differs for {name}");
        }
    }

    #[test]
    fn missing_fiber_block_names_the_point() {
        let spec = catalog::get("hopf").unwrap();
        let mut text = emit_spec(&spec);
        // drop the fiber block for M by renaming its key
        text = text.replace(
            "\"M\": {\n      \"generators\"",
            "\"Mkey\": {\n      \"generators\"",
        );
        let errs = parse_spec(&text).unwrap_err();
        assert!(errs.iter().any(|e| e.location == "fibers.M"));
        assert!(errs.iter().any(|e| e.location == "fibers.Mkey"));
    }

    #[test]
    fn wrong_shift_names_the_pair() {
        let spec = catalog::get("hopf").unwrap();
        let text = emit_spec(&spec).replace("\"shift\": 1", "\"shift\": 0");
        let errs = parse_spec(&text).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| e.location.starts_with("transports[") && e.message.contains("expected 1")));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let errs = parse_spec("{ not json").unwrap_err();
        assert_eq!(errs.len(), 1);
        assert_eq!(errs[0].location, "document");
        assert!(errs[0].message.contains("line 1"));
    }

    #[test]
    fn out_of_range_matrix_entry_is_located() {
        let text = r#"{
            "name": "bad",
            "base": [{"id": "m", "index": 0}],
            "fibers": {
                "m": {
                    "generators": {"0": ["e"], "1": ["f"]},
                    "differentials": {"1": {"rows": 1, "cols": 1, "entries": [[7, 0]]}}
                }
            }
        }"#;
        let errs = parse_spec(text).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| e.location == "fibers.m.differentials.1" && e.message.contains("outside")));
    }

    #[test]
    fn lifted_specs_carry_the_group_block() {
        let spec = catalog::get("rp3-lifted").unwrap();
        let text = emit_spec(&spec);
        assert!(text.contains("\"group\""));
        assert!(text.contains("\"elements\": [\n      \"1\",\n      \"t\"\n    ]"));
        assert!(text.contains("\"system\": \"left-regular\""));
    }

    #[test]
    fn empty_datum_round_trips() {
        let spec = FibrationSpec {
            name: "empty".to_string(),
            datum: EnrichedMorseDatum::new(Vec::new(), BTreeMap::new(), BTreeMap::new()).unwrap(),
            lifted: None,
            truncation_degree: None,
            reference: None,
        };
        let text = emit_spec(&spec);
        let parsed = parse_spec(&text).unwrap();
        assert_eq!(parsed, spec);
    }
}
