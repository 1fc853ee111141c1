//! The `.appr` election file format.
//!
//! Line 1 (after comments): `m k`. Every following non-comment line is one
//! voter's ballot: a space-separated, strictly increasing list of 0-based
//! candidate indices, possibly empty. A line whose first non-whitespace
//! character is `#` is a comment; `#` elsewhere starts a trailing comment.
//! The voter count is inferred from the number of ballot lines.
//!
//! Canonical form: header, then exactly n ballot lines with sorted
//! indices, single spaces, LF endings, no comments. `parse` after
//! `serialize` is the identity on canonical form, byte for byte.

use proprep_core::{Election, Error};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Splits a line into (token, 1-based column) pairs.
fn tokens(line: &str) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((&line[s..i], s + 1));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((&line[s..], s + 1));
    }
    out
}

pub fn parse_election(text: &str) -> Result<Election, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut ballots: Vec<Vec<usize>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        if raw.trim_start().starts_with('#') {
            continue;
        }
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let toks = tokens(line);

        match header {
            None => {
                if toks.is_empty() {
                    continue; // blank lines before the header are ignored
                }
                if toks.len() != 2 {
                    return Err(err(
                        lineno,
                        toks.first().map_or(1, |t| t.1),
                        "header must be exactly `m k`",
                    ));
                }
                let m: usize = toks[0]
                    .0
                    .parse()
                    .map_err(|_| err(lineno, toks[0].1, "candidate count is not a number"))?;
                let k: usize = toks[1]
                    .0
                    .parse()
                    .map_err(|_| err(lineno, toks[1].1, "committee size is not a number"))?;
                if m == 0 {
                    return Err(err(lineno, toks[0].1, "candidate count must be positive"));
                }
                if k == 0 || k > m {
                    return Err(err(
                        lineno,
                        toks[1].1,
                        format!("committee size must satisfy 1 <= k <= m = {}", m),
                    ));
                }
                header = Some((m, k));
            }
            Some((m, _)) => {
                let mut ballot = Vec::with_capacity(toks.len());
                for &(tok, col) in &toks {
                    let c: usize = tok.parse().map_err(|_| {
                        err(lineno, col, format!("approval index {:?} is not a number", tok))
                    })?;
                    if c >= m {
                        return Err(err(
                            lineno,
                            col,
                            format!("candidate index {} out of range (m = {})", c, m),
                        ));
                    }
                    if let Some(&last) = ballot.last() {
                        if c <= last {
                            return Err(err(
                                lineno,
                                col,
                                format!("indices must be strictly increasing ({} after {})", c, last),
                            ));
                        }
                    }
                    ballot.push(c);
                }
                ballots.push(ballot);
            }
        }
    }

    let Some((m, k)) = header else {
        return Err(err(1, 1, "missing `m k` header"));
    };
    if ballots.is_empty() {
        return Err(err(1, 1, "election needs at least one ballot line"));
    }
    Election::new(m, k, ballots).map_err(|e| match e {
        Error::InvalidInput(msg) => err(1, 1, msg),
        other => err(1, 1, other.to_string()),
    })
}

pub fn serialize_election(e: &Election) -> String {
    let mut out = format!("{} {}\n", e.num_candidates(), e.committee_size());
    for v in 0..e.num_voters() {
        let indices: Vec<String> = e.ballot(v).iter().map(|c| c.to_string()).collect();
        out.push_str(&indices.join(" "));
        out.push('\n');
    }
    out
}

/// Parses `0,2,5` (or the empty string) into committee member indices.
pub fn parse_committee_arg(arg: &str) -> Result<Vec<usize>, String> {
    if arg.trim().is_empty() {
        return Ok(Vec::new());
    }
    arg.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad committee index {:?}", part.trim()))
        })
        .collect()
}
