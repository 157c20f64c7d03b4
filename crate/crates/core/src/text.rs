//! Line-oriented `key: value` reader shared by the grammar, automaton and
//! queue-grammar file formats.

use thiserror::Error;

use crate::symbol::Symbol;

/// A diagnostic tied to a 1-based source line (0 when the problem concerns
/// the file as a whole, such as a missing section).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError { line, message: message.into() }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Line<'a> {
    pub number: usize,
    pub key: &'a str,
    pub value: &'a str,
}

/// Splits significant lines into `key: value` pairs. Blank lines and lines
/// starting with `//` are skipped.
pub(crate) fn lines(text: &str) -> Result<Vec<Line<'_>>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let number = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        let Some((key, value)) = trimmed.split_once(':') else {
            return Err(ParseError::new(number, format!("malformed line `{trimmed}` (expected `key: value`)")));
        };
        let key = key.trim();
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(ParseError::new(number, format!("malformed key in `{trimmed}`")));
        }
        out.push(Line { number, key, value: value.trim() });
    }
    Ok(out)
}

/// Returns the `kind:` declared by the first significant line.
pub fn read_kind(text: &str) -> Result<String, ParseError> {
    for (idx, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        return match trimmed.split_once(':') {
            Some((key, value)) if key.trim() == "kind" => Ok(value.trim().to_string()),
            _ => Err(ParseError::new(idx + 1, "first line must be a `kind:` header")),
        };
    }
    Err(ParseError::new(0, "empty input (missing `kind:` header)"))
}

pub(crate) fn expect_kind(lines: &[Line<'_>], expected: &[&str]) -> Result<String, ParseError> {
    match lines.first() {
        Some(l) if l.key == "kind" => {
            if expected.contains(&l.value) {
                Ok(l.value.to_string())
            } else {
                Err(ParseError::new(
                    l.number,
                    format!("expected `kind: {}`, found `kind: {}`", expected.join("` or `kind: "), l.value),
                ))
            }
        }
        Some(l) => Err(ParseError::new(l.number, "first line must be a `kind:` header")),
        None => Err(ParseError::new(0, "empty input (missing `kind:` header)")),
    }
}

pub(crate) fn symbol_list(line: &Line<'_>) -> Result<Vec<Symbol>, ParseError> {
    line.value
        .split_whitespace()
        .map(|t| Symbol::new(t).map_err(|e| ParseError::new(line.number, e.to_string())))
        .collect()
}

pub(crate) fn symbol_at(line: usize, token: &str) -> Result<Symbol, ParseError> {
    Symbol::new(token).map_err(|e| ParseError::new(line, e.to_string()))
}

/// Tracks single-occurrence sections.
pub(crate) struct Sections<'a> {
    seen: Vec<(&'a str, usize)>,
}

impl<'a> Sections<'a> {
    pub fn new() -> Self {
        Sections { seen: Vec::new() }
    }

    pub fn once(&mut self, line: &Line<'a>) -> Result<(), ParseError> {
        if let Some((_, first)) = self.seen.iter().find(|(k, _)| *k == line.key) {
            return Err(ParseError::new(
                line.number,
                format!("duplicate `{}:` section (first given on line {first})", line.key),
            ));
        }
        self.seen.push((line.key, line.number));
        Ok(())
    }
}

/// Joins a list after a key, omitting the trailing space for empty lists.
pub(crate) fn keyed<S: AsRef<str>>(key: &str, items: &[S]) -> String {
    if items.is_empty() {
        format!("{key}:")
    } else {
        let body: Vec<&str> = items.iter().map(|s| s.as_ref()).collect();
        format!("{key}: {}", body.join(" "))
    }
}
