//! Line-oriented text formats.
//!
//! ```text
//! # comment
//! clutter 4
//! 1 2
//! 2 3
//! -
//! ```
//!
//! A clutter document starts with `clutter <n>` and lists one member per line
//! as ascending 1-based indices, `-` standing for the empty member. A set-system
//! document starts with `setsystem <d>` and lists one 0/1 string of length `d`
//! per point. Several documents may be concatenated; each header starts a new
//! one.

use std::fmt::Write as _;

use thiserror::Error;

use crate::clutter::{Clutter, ClutterError, MemberSet, MAX_GROUND};
use crate::structure::{SetSystem, StructureError};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Clutter { line: usize, source: ClutterError },
    #[error("line {line}: {source}")]
    SetSystem { line: usize, source: StructureError },
    #[error("no document found")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Document {
    Clutter(Clutter),
    SetSystem(SetSystem),
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        message: message.into(),
    }
}

enum Header {
    Clutter(usize),
    SetSystem(usize),
}

fn parse_header(line_no: usize, line: &str) -> Result<Option<Header>, ParseError> {
    let mut parts = line.split(' ');
    let (Some(kind), Some(size), None) = (parts.next(), parts.next(), parts.next()) else {
        return Ok(None);
    };
    let header = match kind {
        "clutter" => Header::Clutter as fn(usize) -> Header,
        "setsystem" => Header::SetSystem,
        _ => return Ok(None),
    };
    let size: usize = size
        .parse()
        .map_err(|_| syntax(line_no, format!("bad size `{size}` in header")))?;
    if size > MAX_GROUND {
        return Err(syntax(
            line_no,
            format!("size {size} exceeds the supported maximum of {MAX_GROUND}"),
        ));
    }
    Ok(Some(header(size)))
}

fn parse_member(line_no: usize, line: &str) -> Result<Vec<usize>, ParseError> {
    if line == "-" {
        return Ok(Vec::new());
    }
    let mut out: Vec<usize> = Vec::new();
    for tok in line.split(' ') {
        let e: usize = tok
            .parse()
            .map_err(|_| syntax(line_no, format!("bad element `{tok}`")))?;
        if let Some(&prev) = out.last() {
            if e <= prev {
                return Err(syntax(line_no, "elements must be strictly ascending"));
            }
        }
        out.push(e);
    }
    Ok(out)
}

fn parse_point(line_no: usize, line: &str, dimension: usize) -> Result<MemberSet, ParseError> {
    if line.len() != dimension {
        return Err(syntax(
            line_no,
            format!("point `{line}` does not have length {dimension}"),
        ));
    }
    let mut point = MemberSet::EMPTY;
    for (i, ch) in line.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => point = point.with(i + 1),
            _ => return Err(syntax(line_no, format!("bad coordinate `{ch}`"))),
        }
    }
    Ok(point)
}

/// Parses every document in `input`, in order.
pub fn parse_documents(input: &str) -> Result<Vec<Document>, ParseError> {
    struct Open {
        header: Header,
        header_line: usize,
        rows: Vec<(usize, String)>,
    }

    fn close(open: Open) -> Result<Document, ParseError> {
        match open.header {
            Header::Clutter(n) => {
                let mut raw = Vec::with_capacity(open.rows.len());
                for (line_no, row) in &open.rows {
                    raw.push(parse_member(*line_no, row)?);
                }
                let clutter = Clutter::validate(n, &raw).map_err(|source| {
                    let line = locate_clutter_error(&source, &open.rows, n).unwrap_or(open.header_line);
                    ParseError::Clutter { line, source }
                })?;
                Ok(Document::Clutter(clutter))
            }
            Header::SetSystem(d) => {
                let mut points = Vec::with_capacity(open.rows.len());
                for (line_no, row) in &open.rows {
                    points.push(parse_point(*line_no, row, d)?);
                }
                let system = SetSystem::new(d, points).map_err(|source| ParseError::SetSystem {
                    line: open.header_line,
                    source,
                })?;
                Ok(Document::SetSystem(system))
            }
        }
    }

    let mut docs = Vec::new();
    let mut open: Option<Open> = None;
    for (idx, raw_line) in input.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            // only a trailing newline may produce an empty final line
            if idx + 1 == input.split('\n').count() {
                continue;
            }
            return Err(syntax(line_no, "blank line (use `-` for the empty member)"));
        }
        if let Some(header) = parse_header(line_no, line)? {
            if let Some(prev) = open.take() {
                docs.push(close(prev)?);
            }
            open = Some(Open {
                header,
                header_line: line_no,
                rows: Vec::new(),
            });
            continue;
        }
        match open.as_mut() {
            Some(o) => o.rows.push((line_no, line.to_string())),
            None => return Err(syntax(line_no, "expected a `clutter <n>` or `setsystem <d>` header")),
        }
    }
    if let Some(prev) = open.take() {
        docs.push(close(prev)?);
    }
    Ok(docs)
}

fn locate_clutter_error(err: &ClutterError, rows: &[(usize, String)], n: usize) -> Option<usize> {
    let target = match err {
        ClutterError::NotAntichain { inner, outer } => [Some(*inner), Some(*outer)],
        ClutterError::DuplicateMember(m) => [Some(*m), None],
        ClutterError::ElementOutOfRange { element, .. } => {
            return rows.iter().find_map(|(line_no, row)| {
                parse_member(*line_no, row)
                    .ok()
                    .filter(|m| m.contains(element))
                    .map(|_| *line_no)
            })
        }
        _ => return None,
    };
    // Report the later of the offending lines.
    rows.iter()
        .rev()
        .find(|(line_no, row)| {
            parse_member(*line_no, row)
                .ok()
                .and_then(|m| MemberSet::try_from_elements(m, n).ok())
                .is_some_and(|m| target.contains(&Some(m)))
        })
        .map(|(line_no, _)| *line_no)
}

/// Parses exactly one document.
pub fn parse_document(input: &str) -> Result<Document, ParseError> {
    let mut docs = parse_documents(input)?;
    match docs.len() {
        0 => Err(ParseError::Empty),
        1 => Ok(docs.pop().unwrap()),
        k => Err(syntax(1, format!("expected one document, found {k}"))),
    }
}

pub fn parse_clutter(input: &str) -> Result<Clutter, ParseError> {
    match parse_document(input)? {
        Document::Clutter(c) => Ok(c),
        Document::SetSystem(_) => Err(syntax(1, "expected a clutter, found a set-system")),
    }
}

pub fn parse_set_system(input: &str) -> Result<SetSystem, ParseError> {
    match parse_document(input)? {
        Document::SetSystem(s) => Ok(s),
        Document::Clutter(_) => Err(syntax(1, "expected a set-system, found a clutter")),
    }
}

pub fn format_members(ground_size: usize, members: &[MemberSet]) -> String {
    let mut out = format!("clutter {ground_size}\n");
    for m in members {
        if m.is_empty() {
            out.push('-');
        } else {
            for (k, e) in m.iter().enumerate() {
                if k > 0 {
                    out.push(' ');
                }
                write!(out, "{e}").unwrap();
            }
        }
        out.push('\n');
    }
    out
}

pub fn format_clutter(c: &Clutter) -> String {
    format_members(c.ground_size(), c.members())
}

pub fn format_point(point: MemberSet, dimension: usize) -> String {
    (1..=dimension)
        .map(|i| if point.contains(i) { '1' } else { '0' })
        .collect()
}

pub fn format_set_system(s: &SetSystem) -> String {
    let mut out = format!("setsystem {}\n", s.dimension());
    for &p in s.points() {
        out.push_str(&format_point(p, s.dimension()));
        out.push('\n');
    }
    out
}
