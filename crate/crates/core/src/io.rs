//! Plain-text frame and series-family files.
//!
//! A frame file holds one vector per line as whitespace-separated decimals.
//! Lines whose first non-blank character is `#` are comments and blank
//! lines are skipped. A family file prefixes each vector with its
//! coefficient and a `|`:
//!
//! ```text
//! # c | y
//! 0.5 | 1 0
//! 0.25 | 1 0
//! ```

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::frame::Frame;
use crate::linalg::Vector;
use crate::series::{NormMode, SeriesFamily};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_numbers(line_no: usize, text: &str) -> Result<Vec<f64>> {
    text.split_whitespace()
        .map(|tok| {
            let x: f64 = tok.parse().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not a number: {tok:?}"),
            })?;
            if !x.is_finite() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("non-finite entry {tok:?}"),
                });
            }
            Ok(x)
        })
        .collect()
}

fn check_width(line_no: usize, width: &mut Option<usize>, found: usize) -> Result<()> {
    match *width {
        None if found == 0 => Err(Error::Parse {
            line: line_no,
            message: "vector has no entries".into(),
        }),
        None => {
            *width = Some(found);
            Ok(())
        }
        Some(w) if w != found => Err(Error::Parse {
            line: line_no,
            message: format!("expected {w} entries, found {found}"),
        }),
        Some(_) => Ok(()),
    }
}

pub fn parse_frame(text: &str) -> Result<Frame> {
    let mut width = None;
    let mut vectors = Vec::new();
    for (line_no, line) in content_lines(text) {
        let entries = parse_numbers(line_no, line)?;
        check_width(line_no, &mut width, entries.len())?;
        vectors.push(Vector::new(entries)?);
    }
    let Some(dim) = width else {
        return Err(Error::Parse {
            line: 0,
            message: "no vectors".into(),
        });
    };
    Frame::new(dim, vectors)
}

/// Writes a frame file. Entries use the shortest representation that
/// parses back to the same `f64`, so files round-trip bit-exactly.
pub fn format_frame(frame: &Frame, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for v in frame.vectors() {
        let row: Vec<String> = v.iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn parse_family(text: &str, mode: NormMode) -> Result<SeriesFamily> {
    let mut width = None;
    let mut vectors = Vec::new();
    let mut coefficients = Vec::new();
    for (line_no, line) in content_lines(text) {
        let Some((coef, rest)) = line.split_once('|') else {
            return Err(Error::Parse {
                line: line_no,
                message: "expected `coefficient | entries`".into(),
            });
        };
        let coef = parse_numbers(line_no, coef)?;
        if coef.len() != 1 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected one coefficient, found {}", coef.len()),
            });
        }
        let entries = parse_numbers(line_no, rest)?;
        check_width(line_no, &mut width, entries.len())?;
        coefficients.push(coef[0]);
        vectors.push(Vector::new(entries)?);
    }
    if vectors.is_empty() {
        return Err(Error::Parse {
            line: 0,
            message: "no terms".into(),
        });
    }
    SeriesFamily::new(vectors, coefficients, mode)
}

pub fn format_family(family: &SeriesFamily, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    for (c, y) in family.coefficients().iter().zip(family.vectors()) {
        let row: Vec<String> = y.iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(out, "{c:?} | {}", row.join(" "));
    }
    out
}
