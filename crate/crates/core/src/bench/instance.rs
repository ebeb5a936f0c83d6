use super::BenchError;
use crate::hp::{convert_aa_to_hp, parse_sequence, HpError, HpSequence, HydrophobicityTable};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashSet};
use std::path::Path;

/// One `>` record of a FASTA-like file: header text after `>`, and the body
/// lines joined without separators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastaRecord {
    pub header: String,
    pub body: String,
    /// 1-based line number of the header.
    pub line: usize,
    /// 1-based line number of the first body line, or the header line when
    /// the body is empty.
    pub body_line: usize,
}

/// Splits text into records. Blank lines and lines starting with `;` or `#`
/// are skipped.
pub fn read_fasta(text: &str) -> Result<Vec<FastaRecord>, BenchError> {
    let mut out: Vec<FastaRecord> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with(';') || t.starts_with('#') {
            continue;
        }
        if let Some(h) = t.strip_prefix('>') {
            out.push(FastaRecord { header: h.trim().to_string(), body: String::new(), line, body_line: line });
            continue;
        }
        let Some(rec) = out.last_mut() else {
            return Err(BenchError::Parse { line, message: "sequence data before the first '>' header".into() });
        };
        if rec.body.is_empty() {
            rec.body_line = line;
        }
        rec.body.extend(t.chars().filter(|c| !c.is_whitespace()));
    }
    Ok(out)
}

/// Lower bound as written in the file: a value, a value marked as not
/// converged (`-378*`), or an explicit unknown (`?`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundAnnotation {
    Exact,
    NotConverged,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: String,
    pub sequence: HpSequence,
    pub lower_bound: Option<i64>,
    /// `None` when the header carries no `El` tag at all.
    pub bound_annotation: Option<BoundAnnotation>,
    /// Energies reported by other methods, keyed by tag name, e.g. `[LS-Mem=-326]`.
    pub references: BTreeMap<String, f64>,
    /// Free text of the header after the name and tags.
    pub source_note: String,
}

impl Instance {
    pub fn new(name: impl Into<String>, sequence: HpSequence) -> Self {
        Self {
            name: name.into(),
            sequence,
            lower_bound: None,
            bound_annotation: None,
            references: BTreeMap::new(),
            source_note: String::new(),
        }
    }
}

struct Header {
    name: String,
    lower_bound: Option<i64>,
    annotation: Option<BoundAnnotation>,
    references: BTreeMap<String, f64>,
    note: String,
}

fn parse_header(text: &str, line: usize) -> Result<Header, BenchError> {
    let err = |message: String| BenchError::Parse { line, message };
    let (name, mut rest) = match text.find(|c: char| c.is_whitespace() || c == '[') {
        Some(k) => (&text[..k], &text[k..]),
        None => (text, ""),
    };
    if name.is_empty() {
        return Err(err("header has no name".into()));
    }
    let mut h = Header {
        name: name.to_string(),
        lower_bound: None,
        annotation: None,
        references: BTreeMap::new(),
        note: String::new(),
    };
    let mut note = Vec::new();
    loop {
        rest = rest.trim_start();
        if rest.is_empty() {
            break;
        }
        if let Some(tag) = rest.strip_prefix('[') {
            let close = tag.find(']').ok_or_else(|| err("unterminated '[' tag".into()))?;
            let (key, value) = tag[..close]
                .split_once('=')
                .ok_or_else(|| err(format!("tag {:?} is not key=value", &tag[..close])))?;
            let (key, value) = (key.trim(), value.trim());
            if key.eq_ignore_ascii_case("el") {
                if h.annotation.is_some() {
                    return Err(err("El given twice".into()));
                }
                let (digits, ann) = match value.strip_suffix('*') {
                    _ if value == "?" => ("", BoundAnnotation::Unknown),
                    Some(v) => (v, BoundAnnotation::NotConverged),
                    None => (value, BoundAnnotation::Exact),
                };
                if ann != BoundAnnotation::Unknown {
                    let v: i64 = digits.trim().parse().map_err(|_| err(format!("El value {value:?} is not an integer")))?;
                    if v > 0 {
                        return Err(err(format!("El must be <= 0, got {v}")));
                    }
                    h.lower_bound = Some(v);
                }
                h.annotation = Some(ann);
            } else {
                if key.is_empty() {
                    return Err(err("empty tag name".into()));
                }
                let v: f64 = value
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| err(format!("reference {key:?} has non-numeric value {value:?}")))?;
                if h.references.insert(key.to_string(), v).is_some() {
                    return Err(err(format!("reference {key:?} given twice")));
                }
            }
            rest = &tag[close + 1..];
        } else {
            let end = rest.find(|c: char| c.is_whitespace() || c == '[').unwrap_or(rest.len());
            note.push(&rest[..end]);
            rest = &rest[end..];
        }
    }
    h.note = note.join(" ");
    Ok(h)
}

/// Sequence errors point at the first body line of the record.
fn locate(err: HpError, rec: &FastaRecord) -> BenchError {
    BenchError::Parse { line: rec.body_line, message: format!("record {:?}: {err}", rec.header) }
}

/// Parses instance records. With `convert`, bodies are amino-acid strings
/// classified by the table; otherwise they must be H/P strings.
pub fn parse_instances(text: &str, convert: Option<&HydrophobicityTable>) -> Result<Vec<Instance>, BenchError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for rec in read_fasta(text)? {
        let h = parse_header(&rec.header, rec.line)?;
        if !seen.insert(h.name.clone()) {
            return Err(BenchError::DuplicateName { name: h.name, line: rec.line });
        }
        let sequence: HpSequence = match convert {
            Some(table) => convert_aa_to_hp(&rec.body, table),
            None => parse_sequence(&rec.body),
        }
        .map_err(|e| locate(e, &rec))?;
        out.push(Instance {
            name: h.name,
            sequence,
            lower_bound: h.lower_bound,
            bound_annotation: h.annotation,
            references: h.references,
            source_note: h.note,
        });
    }
    Ok(out)
}

pub fn load_instances(path: &Path, convert: Option<&HydrophobicityTable>) -> Result<Vec<Instance>, BenchError> {
    let text = std::fs::read_to_string(path)?;
    parse_instances(&text, convert)
}
