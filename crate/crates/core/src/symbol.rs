//! Atomic symbols and small symbol-set utilities.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Token spelling the empty string in every text format.
pub const EPSILON: &str = "eps";

/// Arrow separating left and right-hand sides of rules.
pub const ARROW: &str = "->";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("empty symbol name")]
    Empty,
    #[error("symbol `{0}` contains whitespace")]
    Whitespace(String),
    #[error("`{0}` is a reserved token")]
    Reserved(String),
    #[error("symbol `{0}` contains a reserved sequence (`->` or `,`)")]
    ReservedSequence(String),
}

/// A grammar symbol. Whether it is a terminal is decided by the grammar that
/// declares it, not by the token itself.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Result<Self, SymbolError> {
        if name.is_empty() {
            return Err(SymbolError::Empty);
        }
        if name.chars().any(char::is_whitespace) {
            return Err(SymbolError::Whitespace(name.to_string()));
        }
        if name == EPSILON {
            return Err(SymbolError::Reserved(name.to_string()));
        }
        if name.contains(ARROW) || name.contains(',') {
            return Err(SymbolError::ReservedSequence(name.to_string()));
        }
        Ok(Symbol(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Spellings of the form `<...>` are produced by the grammar
    /// constructions and may not appear in their inputs.
    pub fn is_reserved_spelling(&self) -> bool {
        self.0.len() >= 2 && self.0.starts_with('<') && self.0.ends_with('>')
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Builds symbols from names known to be valid.
///
/// # Panics
///
/// Panics when a name is not a valid symbol; meant for literals in code and tests.
pub fn syms(names: &[&str]) -> Vec<Symbol> {
    names
        .iter()
        .map(|n| Symbol::new(n).unwrap_or_else(|e| panic!("invalid symbol literal: {e}")))
        .collect()
}

/// Single symbol from a literal. Panics on an invalid name.
pub fn sym(name: &str) -> Symbol {
    Symbol::new(name).unwrap_or_else(|e| panic!("invalid symbol literal: {e}"))
}

/// Splits `text` into symbols. Whitespace-separated text is split on
/// whitespace; otherwise the longest matching name from `alphabet` is taken
/// at each position. `eps` (or the empty string) is the empty word.
pub fn tokenize(text: &str, alphabet: &[Symbol]) -> Option<Vec<Symbol>> {
    let text = text.trim();
    if text.is_empty() || text == EPSILON {
        return Some(Vec::new());
    }
    if text.contains(char::is_whitespace) {
        return text.split_whitespace().map(|t| Symbol::new(t).ok()).collect();
    }
    let mut by_len: Vec<&Symbol> = alphabet.iter().collect();
    by_len.sort_by(|a, b| b.as_str().len().cmp(&a.as_str().len()).then(a.cmp(b)));
    let mut out = Vec::new();
    let mut rest = text;
    while !rest.is_empty() {
        let hit = by_len.iter().find(|s| rest.starts_with(s.as_str()))?;
        out.push((*hit).clone());
        rest = &rest[hit.as_str().len()..];
    }
    Some(out)
}

/// Renders a word: symbols are concatenated when every one of them is a
/// single character, otherwise separated by spaces. The empty word is `eps`.
pub fn render_word<S: AsRef<str>>(word: &[S]) -> String {
    if word.is_empty() {
        return EPSILON.to_string();
    }
    let compact = word.iter().all(|s| s.as_ref().chars().count() == 1);
    let sep = if compact { "" } else { " " };
    word.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(sep)
}

impl AsRef<str> for Symbol {
    fn as_ref(&self) -> &str {
        self.as_str()
    }
}
