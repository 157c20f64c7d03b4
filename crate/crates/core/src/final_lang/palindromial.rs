use thiserror::Error;

use crate::grammar::{classify, Cfg};
use crate::symbol::Symbol;

/// A grammar `S -> a S a | ... | #` generating marked palindromes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PalindromialGrammar {
    grammar: Cfg,
    marker: Symbol,
    /// Terminals other than the marker, in declaration order.
    base: Vec<Symbol>,
    /// Terminals `a` with a rule `S -> a S a`.
    pairs: Vec<Symbol>,
}

impl PalindromialGrammar {
    pub fn grammar(&self) -> &Cfg {
        &self.grammar
    }

    pub fn marker(&self) -> &Symbol {
        &self.marker
    }

    pub fn base(&self) -> &[Symbol] {
        &self.base
    }

    pub fn pairs(&self) -> &[Symbol] {
        &self.pairs
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PalgError {
    #[error("not minimal linear: {0}")]
    NotMinimalLinear(String),
    #[error("marker `{marker}` is reused in rule {rule}")]
    MarkerReused { marker: Symbol, rule: String },
    #[error("a palindromial grammar needs at least 2 rules (card(P) < 2)")]
    TooFewRules,
    #[error("rule {rule} is not of the form S -> a S a with a single terminal a")]
    Unbalanced { rule: String },
}

/// Checks the palindromial conditions in order and reports the first one
/// that fails.
pub fn palg_validate(g: Cfg) -> Result<PalindromialGrammar, PalgError> {
    if g.nonterminals() != [g.start()] {
        return Err(PalgError::NotMinimalLinear("the start symbol must be the only nonterminal".into()));
    }
    let s = g.start();
    if let Some(i) = (0..g.rules().len()).find(|&i| g.rule(i).rhs.iter().filter(|&&x| x == s).count() > 1) {
        return Err(PalgError::NotMinimalLinear(format!("rule {} has more than one nonterminal", g.render_rule(i))));
    }
    let terminal_only: Vec<usize> = (0..g.rules().len()).filter(|&i| !g.rule(i).rhs.contains(&s)).collect();
    let marker = match terminal_only.as_slice() {
        [i] if g.rule(*i).rhs.len() == 1 => g.rule(*i).rhs[0],
        [i] => {
            return Err(PalgError::NotMinimalLinear(format!("terminating rule {} must rewrite S to a single marker", g.render_rule(*i))))
        }
        [] => return Err(PalgError::NotMinimalLinear("no terminating rule S -> #".into())),
        _ => return Err(PalgError::NotMinimalLinear("more than one terminating rule".into())),
    };
    let end = terminal_only[0];
    if let Some(i) = (0..g.rules().len()).find(|&i| i != end && g.rule(i).rhs.contains(&marker)) {
        return Err(PalgError::MarkerReused { marker: g.symbol(marker).clone(), rule: g.render_rule(i) });
    }
    if g.rules().len() < 2 {
        return Err(PalgError::TooFewRules);
    }
    if let Some(i) = (0..g.rules().len()).find(|&i| i != end && !crate::grammar::is_mirrored_pair(&g, &g.rule(i).rhs)) {
        return Err(PalgError::Unbalanced { rule: g.render_rule(i) });
    }
    debug_assert!(classify(&g).palindromial);
    let marker = g.symbol(marker).clone();
    let base = g.terminals().iter().map(|&t| g.symbol(t).clone()).filter(|t| *t != marker).collect();
    let mut pairs: Vec<Symbol> = Vec::new();
    for (i, r) in g.rules().iter().enumerate() {
        if i != end && !pairs.contains(g.symbol(r.rhs[0])) {
            pairs.push(g.symbol(r.rhs[0]).clone());
        }
    }
    Ok(PalindromialGrammar { grammar: g, marker, base, pairs })
}
