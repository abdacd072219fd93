//! Canonical JSON documents for images, multivalued functions, witnesses,
//! property reports and censuses.
//!
//! Every document is a single JSON object carrying `"kind"` and
//! `"version"`. Serialization sorts points lexicographically and emits keys
//! in a fixed order on one line, so equal values give byte-identical text.
//! Images are always inlined; there is no reference indirection.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{AdjacencySpec, DigitalImage, Point, PointMap, PointSet};
use crate::multifun::{Continuity, ContinuityWitness, MultiFn, PropertyReport, Refutation};
use crate::oracle::{CensusClass, CensusRecord, ClassCounts, ContinuityClass, Signature};
use crate::subdivision::SubdividedImage;

pub const FORMAT_VERSION: &str = "1";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImageDoc {
    kind: String,
    version: String,
    dim: usize,
    adjacency: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    scale: Option<usize>,
    points: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapEntry {
    x: Vec<i64>,
    fx: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MultiFnDoc {
    kind: String,
    version: String,
    domain: ImageDoc,
    codomain: ImageDoc,
    map: Vec<MapEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentEntry {
    z: Vec<i64>,
    value: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessDoc {
    kind: String,
    version: String,
    level: usize,
    assignment: Vec<AssignmentEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ContinuityDoc {
    status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    level: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    r_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    at: Option<Vec<Vec<i64>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReportDoc {
    kind: String,
    version: String,
    weak: bool,
    strong: bool,
    connectivity_preserving: bool,
    continuous: ContinuityDoc,
    witness: Option<WitnessDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CountsDoc {
    weak: u64,
    strong: u64,
    connectivity_preserving: u64,
    witness_found: u64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    weak: bool,
    strong: bool,
    connectivity_preserving: bool,
    continuous: String,
    count: u64,
    representative: MultiFnDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CensusDoc {
    kind: String,
    version: String,
    domain: ImageDoc,
    codomain: ImageDoc,
    r_max: usize,
    total: u64,
    counts: CountsDoc,
    cp_mismatches: u64,
    classes: Vec<ClassDoc>,
}

/// Any of the five document kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Image(DigitalImage),
    MultiFn(MultiFn),
    Witness(ContinuityWitness),
    Report(PropertyReport),
    Census(CensusRecord),
}

fn parse_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{field}: {msg}"))
}

fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn from_text<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "{what} document, line {} column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

fn check_header(kind: &str, version: &str, expected: &str, field: &str) -> Result<()> {
    if kind != expected {
        return Err(parse_err(
            field,
            format!("expected kind \"{expected}\", found \"{kind}\""),
        ));
    }
    if version != FORMAT_VERSION {
        return Err(parse_err(
            field,
            format!("unsupported version \"{version}\""),
        ));
    }
    Ok(())
}

fn coords(p: &Point) -> Vec<i64> {
    p.coords().to_vec()
}

fn image_doc(img: &DigitalImage, scale: Option<usize>) -> ImageDoc {
    ImageDoc {
        kind: "image".into(),
        version: FORMAT_VERSION.into(),
        dim: img.spec().dim(),
        adjacency: img.spec().u(),
        scale,
        points: img.points().iter().map(coords).collect(),
    }
}

fn image_from_doc(doc: ImageDoc, field: &str) -> Result<DigitalImage> {
    check_header(&doc.kind, &doc.version, "image", field)?;
    let spec = AdjacencySpec::new(doc.dim, doc.adjacency)
        .map_err(|e| parse_err(&format!("{field}.adjacency"), e))?;
    let points = doc.points.into_iter().map(Point::new);
    DigitalImage::new(spec, points).map_err(|e| parse_err(&format!("{field}.points"), e))
}

fn point_in(img: &DigitalImage, c: Vec<i64>, field: &str) -> Result<Point> {
    let p = Point::new(c);
    img.require(&p).map_err(|e| parse_err(field, e))?;
    Ok(p)
}

fn multifn_doc(f: &MultiFn) -> MultiFnDoc {
    MultiFnDoc {
        kind: "multifn".into(),
        version: FORMAT_VERSION.into(),
        domain: image_doc(f.domain(), None),
        codomain: image_doc(f.codomain(), None),
        map: f
            .to_map()
            .into_iter()
            .map(|(x, fx)| MapEntry {
                x: coords(&x),
                fx: fx.iter().map(coords).collect(),
            })
            .collect(),
    }
}

fn multifn_from_doc(doc: MultiFnDoc, field: &str) -> Result<MultiFn> {
    check_header(&doc.kind, &doc.version, "multifn", field)?;
    let domain = image_from_doc(doc.domain, &format!("{field}.domain"))?;
    let codomain = image_from_doc(doc.codomain, &format!("{field}.codomain"))?;
    let mut map: BTreeMap<Point, PointSet> = BTreeMap::new();
    for (k, entry) in doc.map.into_iter().enumerate() {
        let at = format!("{field}.map[{k}]");
        let x = point_in(&domain, entry.x, &format!("{at}.x"))?;
        if entry.fx.is_empty() {
            return Err(parse_err(
                &format!("{at}.fx"),
                format!("empty point-image at {x}"),
            ));
        }
        let mut fx = PointSet::new();
        for c in entry.fx {
            let y = point_in(&codomain, c, &format!("{at}.fx"))?;
            if !fx.insert(y.clone()) {
                return Err(parse_err(
                    &format!("{at}.fx"),
                    format!("duplicate value {y}"),
                ));
            }
        }
        if map.insert(x.clone(), fx).is_some() {
            return Err(parse_err(&format!("{at}.x"), format!("{x} listed twice")));
        }
    }
    if let Some(missing) = domain.points().iter().find(|p| !map.contains_key(*p)) {
        return Err(parse_err(
            &format!("{field}.map"),
            format!("no entry for {missing}"),
        ));
    }
    MultiFn::new(domain, codomain, &map).map_err(|e| parse_err(field, e))
}

fn witness_doc(w: &ContinuityWitness) -> WitnessDoc {
    WitnessDoc {
        kind: "witness".into(),
        version: FORMAT_VERSION.into(),
        level: w.level,
        assignment: w
            .assignment
            .iter()
            .map(|(z, v)| AssignmentEntry {
                z: coords(z),
                value: coords(v),
            })
            .collect(),
    }
}

fn witness_from_doc(doc: WitnessDoc, field: &str) -> Result<ContinuityWitness> {
    check_header(&doc.kind, &doc.version, "witness", field)?;
    if doc.level < 1 {
        return Err(parse_err(&format!("{field}.level"), "must be at least 1"));
    }
    let mut assignment = PointMap::new();
    for (k, e) in doc.assignment.into_iter().enumerate() {
        let z = Point::new(e.z);
        if assignment.insert(z.clone(), Point::new(e.value)).is_some() {
            return Err(parse_err(
                &format!("{field}.assignment[{k}]"),
                format!("{z} listed twice"),
            ));
        }
    }
    Ok(ContinuityWitness {
        level: doc.level,
        assignment,
    })
}

fn continuity_doc(c: &Continuity) -> ContinuityDoc {
    let mut doc = ContinuityDoc {
        status: String::new(),
        level: None,
        r_max: None,
        reason: None,
        at: None,
    };
    match c {
        Continuity::WitnessFound { level } => {
            doc.status = "witness-found".into();
            doc.level = Some(*level);
        }
        Continuity::NotFoundUpTo { r_max } => {
            doc.status = "not-found".into();
            doc.r_max = Some(*r_max);
        }
        Continuity::Refuted(Refutation::DisconnectedPointImage { at }) => {
            doc.status = "refuted".into();
            doc.reason = Some("disconnected-point-image".into());
            doc.at = Some(vec![coords(at)]);
        }
        Continuity::Refuted(Refutation::NotWeaklyContinuous { x, y }) => {
            doc.status = "refuted".into();
            doc.reason = Some("not-weakly-continuous".into());
            doc.at = Some(vec![coords(x), coords(y)]);
        }
    }
    doc
}

fn continuity_from_doc(doc: ContinuityDoc, field: &str) -> Result<Continuity> {
    let missing = |name: &str| parse_err(&format!("{field}.{name}"), "missing");
    match doc.status.as_str() {
        "witness-found" => Ok(Continuity::WitnessFound {
            level: doc.level.ok_or_else(|| missing("level"))?,
        }),
        "not-found" => Ok(Continuity::NotFoundUpTo {
            r_max: doc.r_max.ok_or_else(|| missing("r_max"))?,
        }),
        "refuted" => {
            let mut at = doc
                .at
                .ok_or_else(|| missing("at"))?
                .into_iter()
                .map(Point::new);
            let reason = doc.reason.ok_or_else(|| missing("reason"))?;
            let bad_at = || parse_err(&format!("{field}.at"), "wrong number of points");
            let refutation = match reason.as_str() {
                "disconnected-point-image" => Refutation::DisconnectedPointImage {
                    at: at.next().ok_or_else(bad_at)?,
                },
                "not-weakly-continuous" => Refutation::NotWeaklyContinuous {
                    x: at.next().ok_or_else(bad_at)?,
                    y: at.next().ok_or_else(bad_at)?,
                },
                other => {
                    return Err(parse_err(
                        &format!("{field}.reason"),
                        format!("unknown reason \"{other}\""),
                    ))
                }
            };
            if at.next().is_some() {
                return Err(bad_at());
            }
            Ok(Continuity::Refuted(refutation))
        }
        other => Err(parse_err(
            &format!("{field}.status"),
            format!("unknown status \"{other}\""),
        )),
    }
}

fn report_doc(r: &PropertyReport) -> ReportDoc {
    ReportDoc {
        kind: "report".into(),
        version: FORMAT_VERSION.into(),
        weak: r.weak,
        strong: r.strong,
        connectivity_preserving: r.connectivity_preserving,
        continuous: continuity_doc(&r.continuous),
        witness: r.witness.as_ref().map(witness_doc),
    }
}

fn report_from_doc(doc: ReportDoc) -> Result<PropertyReport> {
    check_header(&doc.kind, &doc.version, "report", "report")?;
    Ok(PropertyReport {
        weak: doc.weak,
        strong: doc.strong,
        connectivity_preserving: doc.connectivity_preserving,
        continuous: continuity_from_doc(doc.continuous, "continuous")?,
        witness: doc
            .witness
            .map(|w| witness_from_doc(w, "witness"))
            .transpose()?,
    })
}

fn class_name(c: ContinuityClass) -> &'static str {
    match c {
        ContinuityClass::WitnessFound => "witness-found",
        ContinuityClass::NotFound => "not-found",
        ContinuityClass::Refuted => "refuted",
    }
}

fn class_from_name(name: &str, field: &str) -> Result<ContinuityClass> {
    match name {
        "witness-found" => Ok(ContinuityClass::WitnessFound),
        "not-found" => Ok(ContinuityClass::NotFound),
        "refuted" => Ok(ContinuityClass::Refuted),
        other => Err(parse_err(field, format!("unknown class \"{other}\""))),
    }
}

fn census_doc(c: &CensusRecord) -> CensusDoc {
    CensusDoc {
        kind: "census".into(),
        version: FORMAT_VERSION.into(),
        domain: image_doc(&c.domain, None),
        codomain: image_doc(&c.codomain, None),
        r_max: c.r_max,
        total: c.total,
        counts: CountsDoc {
            weak: c.counts.weak,
            strong: c.counts.strong,
            connectivity_preserving: c.counts.cp,
            witness_found: c.counts.witness_found,
        },
        cp_mismatches: c.cp_mismatches,
        classes: c
            .classes
            .iter()
            .map(|k| ClassDoc {
                weak: k.signature.weak,
                strong: k.signature.strong,
                connectivity_preserving: k.signature.cp,
                continuous: class_name(k.signature.continuous).into(),
                count: k.count,
                representative: multifn_doc(&k.representative),
            })
            .collect(),
    }
}

fn census_from_doc(doc: CensusDoc) -> Result<CensusRecord> {
    check_header(&doc.kind, &doc.version, "census", "census")?;
    let classes = doc
        .classes
        .into_iter()
        .enumerate()
        .map(|(k, c)| {
            let field = format!("classes[{k}]");
            Ok(CensusClass {
                signature: Signature {
                    weak: c.weak,
                    strong: c.strong,
                    cp: c.connectivity_preserving,
                    continuous: class_from_name(&c.continuous, &format!("{field}.continuous"))?,
                },
                count: c.count,
                representative: multifn_from_doc(
                    c.representative,
                    &format!("{field}.representative"),
                )?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CensusRecord {
        domain: image_from_doc(doc.domain, "domain")?,
        codomain: image_from_doc(doc.codomain, "codomain")?,
        r_max: doc.r_max,
        total: doc.total,
        counts: ClassCounts {
            weak: doc.counts.weak,
            strong: doc.counts.strong,
            cp: doc.counts.connectivity_preserving,
            witness_found: doc.counts.witness_found,
        },
        cp_mismatches: doc.cp_mismatches,
        classes,
    })
}

pub fn serialize_image(img: &DigitalImage) -> String {
    to_text(&image_doc(img, None))
}

pub fn parse_image(text: &str) -> Result<DigitalImage> {
    image_from_doc(from_text(text, "image")?, "image")
}

/// The numerator image of `S(X,r)` with a `"scale"` annotation. It parses
/// back as a plain image of numerators.
pub fn serialize_subdivision(s: &SubdividedImage) -> String {
    to_text(&image_doc(s.image(), Some(s.scale())))
}

pub fn serialize_multifn(f: &MultiFn) -> String {
    to_text(&multifn_doc(f))
}

pub fn parse_multifn(text: &str) -> Result<MultiFn> {
    multifn_from_doc(from_text(text, "multifn")?, "multifn")
}

pub fn serialize_witness(w: &ContinuityWitness) -> String {
    to_text(&witness_doc(w))
}

pub fn parse_witness(text: &str) -> Result<ContinuityWitness> {
    witness_from_doc(from_text(text, "witness")?, "witness")
}

pub fn serialize_report(r: &PropertyReport) -> String {
    to_text(&report_doc(r))
}

pub fn parse_report(text: &str) -> Result<PropertyReport> {
    report_from_doc(from_text(text, "report")?)
}

pub fn serialize_census(c: &CensusRecord) -> String {
    to_text(&census_doc(c))
}

pub fn parse_census(text: &str) -> Result<CensusRecord> {
    census_from_doc(from_text(text, "census")?)
}

pub fn serialize_document(doc: &Document) -> String {
    match doc {
        Document::Image(i) => serialize_image(i),
        Document::MultiFn(f) => serialize_multifn(f),
        Document::Witness(w) => serialize_witness(w),
        Document::Report(r) => serialize_report(r),
        Document::Census(c) => serialize_census(c),
    }
}

/// Parses a document of any kind, dispatching on its `"kind"` field.
pub fn parse_document(text: &str) -> Result<Document> {
    #[derive(Deserialize)]
    struct Header {
        kind: String,
    }
    let header: Header = from_text(text, "document")?;
    match header.kind.as_str() {
        "image" => parse_image(text).map(Document::Image),
        "multifn" => parse_multifn(text).map(Document::MultiFn),
        "witness" => parse_witness(text).map(Document::Witness),
        "report" => parse_report(text).map(Document::Report),
        "census" => parse_census(text).map(Document::Census),
        other => Err(parse_err(
            "kind",
            format!("unknown document kind \"{other}\""),
        )),
    }
}
