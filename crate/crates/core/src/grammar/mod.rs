//! Context-free grammars, sentential forms, derivations and classification.

mod chart;
mod classify;
mod language;
pub(crate) mod search;
mod text;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::symbol::{render_word, Symbol};

pub use chart::cfg_member;
pub use classify::{classify, ClassificationReport};
pub(crate) use classify::is_mirrored_pair;
pub(crate) use language::shortlex;
pub use language::{enumerate_language, enumerate_language_by_membership, enumerate_language_by_membership_with, LanguageBudget, LanguageError};
pub use search::{enumerate_forms, FormSet, SearchBounds};
pub use text::{parse_grammar, print_grammar};

/// Index of a symbol inside the grammar that declared it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Membership table over the symbols of one grammar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSet(Vec<bool>);

impl SymbolSet {
    pub fn empty(universe: usize) -> Self {
        SymbolSet(vec![false; universe])
    }

    pub fn insert(&mut self, id: SymbolId) {
        self.0[id.index()] = true;
    }

    pub fn contains(&self, id: SymbolId) -> bool {
        self.0.get(id.index()).copied().unwrap_or(false)
    }

    pub fn iter(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.0.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| SymbolId(i as u32))
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn complement(&self) -> SymbolSet {
        SymbolSet(self.0.iter().map(|b| !b).collect())
    }

    pub fn intersect(&self, other: &SymbolSet) -> SymbolSet {
        SymbolSet(self.0.iter().zip(&other.0).map(|(a, b)| *a && *b).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub label: String,
    pub lhs: SymbolId,
    pub rhs: Vec<SymbolId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("symbol `{0}` is declared more than once")]
    DuplicateSymbol(Symbol),
    #[error("start must be a nonterminal (`{0}` is a terminal)")]
    StartIsTerminal(Symbol),
    #[error("start symbol `{0}` is not declared")]
    UndeclaredStart(Symbol),
    #[error("rule {rule}: undeclared symbol `{symbol}`")]
    UndeclaredSymbol { rule: usize, symbol: Symbol },
    #[error("rule {rule}: left-hand side `{symbol}` is not a nonterminal")]
    TerminalLhs { rule: usize, symbol: Symbol },
    #[error("rule {rule}: duplicate of rule {first}")]
    DuplicateRule { rule: usize, first: usize },
}

/// A context-free grammar `(V, T, P, S)`.
///
/// Symbols are interned: every [`SymbolId`] indexes into this grammar's total
/// alphabet. Rules keep their declaration order and carry positional labels
/// `r1`, `r2`, ...
#[derive(Clone)]
pub struct Cfg {
    symbols: Vec<Symbol>,
    index: HashMap<Symbol, SymbolId>,
    terminal: Vec<bool>,
    terminals: Vec<SymbolId>,
    nonterminals: Vec<SymbolId>,
    rules: Vec<Rule>,
    start: SymbolId,
    rules_by_lhs: Vec<Vec<usize>>,
    compact: bool,
}

impl Cfg {
    /// Builds and validates a grammar. Rules are `(lhs, rhs)` pairs; an empty
    /// rhs is an ε-rule.
    pub fn new(
        terminals: Vec<Symbol>,
        nonterminals: Vec<Symbol>,
        start: Symbol,
        rules: Vec<(Symbol, Vec<Symbol>)>,
    ) -> Result<Cfg, GrammarError> {
        let mut symbols = Vec::new();
        let mut index = HashMap::new();
        let mut terminal = Vec::new();
        let mut t_ids = Vec::new();
        let mut n_ids = Vec::new();
        for (sym, is_t) in terminals.into_iter().map(|s| (s, true)).chain(nonterminals.into_iter().map(|s| (s, false))) {
            if index.contains_key(&sym) {
                return Err(GrammarError::DuplicateSymbol(sym));
            }
            let id = SymbolId(symbols.len() as u32);
            index.insert(sym.clone(), id);
            symbols.push(sym);
            terminal.push(is_t);
            if is_t {
                t_ids.push(id);
            } else {
                n_ids.push(id);
            }
        }
        let start_id = match index.get(&start) {
            None => return Err(GrammarError::UndeclaredStart(start)),
            Some(&id) if terminal[id.index()] => return Err(GrammarError::StartIsTerminal(start)),
            Some(&id) => id,
        };
        let lookup = |rule: usize, s: &Symbol| -> Result<SymbolId, GrammarError> {
            index.get(s).copied().ok_or_else(|| GrammarError::UndeclaredSymbol { rule, symbol: s.clone() })
        };
        let mut built = Vec::with_capacity(rules.len());
        let mut seen: HashMap<(SymbolId, Vec<SymbolId>), usize> = HashMap::new();
        for (i, (lhs, rhs)) in rules.iter().enumerate() {
            let rule_no = i + 1;
            let l = lookup(rule_no, lhs)?;
            if terminal[l.index()] {
                return Err(GrammarError::TerminalLhs { rule: rule_no, symbol: lhs.clone() });
            }
            let r = rhs.iter().map(|s| lookup(rule_no, s)).collect::<Result<Vec<_>, _>>()?;
            if let Some(first) = seen.insert((l, r.clone()), rule_no) {
                return Err(GrammarError::DuplicateRule { rule: rule_no, first });
            }
            built.push(Rule { label: format!("r{rule_no}"), lhs: l, rhs: r });
        }
        let mut rules_by_lhs = vec![Vec::new(); symbols.len()];
        for (i, r) in built.iter().enumerate() {
            rules_by_lhs[r.lhs.index()].push(i);
        }
        let compact = symbols.iter().all(|s| s.as_str().chars().count() == 1);
        Ok(Cfg {
            symbols,
            index,
            terminal,
            terminals: t_ids,
            nonterminals: n_ids,
            rules: built,
            start: start_id,
            rules_by_lhs,
            compact,
        })
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.index()]
    }

    pub fn id(&self, name: &str) -> Option<SymbolId> {
        Symbol::new(name).ok().and_then(|s| self.index.get(&s).copied())
    }

    pub fn id_of(&self, sym: &Symbol) -> Option<SymbolId> {
        self.index.get(sym).copied()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_terminal(&self, id: SymbolId) -> bool {
        self.terminal[id.index()]
    }

    /// Terminals in declaration order.
    pub fn terminals(&self) -> &[SymbolId] {
        &self.terminals
    }

    /// Nonterminals in declaration order.
    pub fn nonterminals(&self) -> &[SymbolId] {
        &self.nonterminals
    }

    pub fn terminal_set(&self) -> SymbolSet {
        let mut s = SymbolSet::empty(self.symbols.len());
        for &t in &self.terminals {
            s.insert(t);
        }
        s
    }

    pub fn start(&self) -> SymbolId {
        self.start
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, idx: usize) -> &Rule {
        &self.rules[idx]
    }

    pub fn rule_by_label(&self, label: &str) -> Option<usize> {
        self.rules.iter().position(|r| r.label == label)
    }

    pub fn rules_for(&self, lhs: SymbolId) -> &[usize] {
        &self.rules_by_lhs[lhs.index()]
    }

    /// A nonterminal with at least one rule; symbols without rules are never
    /// rewritten.
    pub fn is_rewritable(&self, id: SymbolId) -> bool {
        !self.rules_by_lhs[id.index()].is_empty()
    }

    pub fn names(&self, form: &[SymbolId]) -> Vec<Symbol> {
        form.iter().map(|&id| self.symbol(id).clone()).collect()
    }

    /// Resolves names to ids; `None` if some name is not in `V`.
    pub fn ids(&self, word: &[Symbol]) -> Option<Vec<SymbolId>> {
        word.iter().map(|s| self.id_of(s)).collect()
    }

    /// Resolves symbol-name literals. Panics on unknown names.
    pub fn form(&self, names: &[&str]) -> SententialForm {
        SententialForm(
            names
                .iter()
                .map(|n| self.id(n).unwrap_or_else(|| panic!("`{n}` is not a symbol of this grammar")))
                .collect(),
        )
    }

    /// Renders a sequence of this grammar's symbols. When every symbol of the
    /// grammar is a single character the symbols are concatenated.
    pub fn render(&self, form: &[SymbolId]) -> String {
        if form.is_empty() {
            return crate::symbol::EPSILON.to_string();
        }
        if self.compact {
            form.iter().map(|&id| self.symbol(id).as_str()).collect()
        } else {
            render_word(&self.names(form))
        }
    }

    pub fn render_rule(&self, idx: usize) -> String {
        let r = &self.rules[idx];
        let rhs = if r.rhs.is_empty() {
            crate::symbol::EPSILON.to_string()
        } else {
            r.rhs.iter().map(|&s| self.symbol(s).as_str()).collect::<Vec<_>>().join(" ")
        };
        format!("{} -> {}", self.symbol(r.lhs), rhs)
    }

    /// The rule list as `(lhs, rhs)` names, ready to feed back into [`Cfg::new`].
    pub fn rule_names(&self) -> Vec<(Symbol, Vec<Symbol>)> {
        self.rules.iter().map(|r| (self.symbol(r.lhs).clone(), self.names(&r.rhs))).collect()
    }

    /// Same grammar with the rule at `idx` removed.
    pub fn without_rule(&self, idx: usize) -> Cfg {
        let mut rules = self.rule_names();
        rules.remove(idx);
        Cfg::new(
            self.names(&self.terminals),
            self.names(&self.nonterminals),
            self.symbol(self.start).clone(),
            rules,
        )
        .expect("removing a rule keeps a grammar valid")
    }
}

impl fmt::Debug for Cfg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_grammar(self))
    }
}

impl PartialEq for Cfg {
    fn eq(&self, other: &Self) -> bool {
        self.symbols == other.symbols
            && self.terminal == other.terminal
            && self.start == other.start
            && self.rules == other.rules
    }
}

impl Eq for Cfg {}

/// A string over a grammar's total alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SententialForm(pub Vec<SymbolId>);

impl std::ops::Deref for SententialForm {
    type Target = [SymbolId];
    fn deref(&self) -> &[SymbolId] {
        &self.0
    }
}

impl From<Vec<SymbolId>> for SententialForm {
    fn from(v: Vec<SymbolId>) -> Self {
        SententialForm(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("no rule with index {0}")]
    UnknownRule(usize),
    #[error("position {pos} is out of range for a form of length {len}")]
    PositionOutOfRange { pos: usize, len: usize },
    #[error("symbol at position {pos} is `{found}`, rule rewrites `{expected}`")]
    LhsMismatch { pos: usize, found: Symbol, expected: Symbol },
    #[error("trace starts from `{found}`, grammar start is `{expected}`")]
    WrongStart { found: Symbol, expected: Symbol },
}

/// Applies rule `rule` to the symbol at `pos`.
pub fn derive_step(g: &Cfg, form: &[SymbolId], rule: usize, pos: usize) -> Result<SententialForm, DeriveError> {
    let r = g.rules.get(rule).ok_or(DeriveError::UnknownRule(rule))?;
    let &at = form.get(pos).ok_or(DeriveError::PositionOutOfRange { pos, len: form.len() })?;
    if at != r.lhs {
        return Err(DeriveError::LhsMismatch { pos, found: g.symbol(at).clone(), expected: g.symbol(r.lhs).clone() });
    }
    let mut out = Vec::with_capacity(form.len() + r.rhs.len());
    out.extend_from_slice(&form[..pos]);
    out.extend_from_slice(&r.rhs);
    out.extend_from_slice(&form[pos + 1..]);
    Ok(SententialForm(out))
}

/// Weak-identity image of `form`: symbols in `keep` survive, the rest vanish.
pub fn project(form: &[SymbolId], keep: &SymbolSet) -> SententialForm {
    SententialForm(form.iter().copied().filter(|&s| keep.contains(s)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceStep {
    pub rule: usize,
    pub pos: usize,
}

/// A replayable derivation: rule applications at explicit positions,
/// starting from a single symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DerivationTrace {
    pub start: SymbolId,
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    /// Every form along the derivation, starting with the start symbol.
    pub fn replay(&self, g: &Cfg) -> Result<Vec<SententialForm>, DeriveError> {
        let mut forms = vec![SententialForm(vec![self.start])];
        for step in &self.steps {
            let next = derive_step(g, forms.last().expect("non-empty"), step.rule, step.pos)?;
            forms.push(next);
        }
        Ok(forms)
    }

    /// Replays from the grammar's start symbol and returns the final form.
    pub fn result(&self, g: &Cfg) -> Result<SententialForm, DeriveError> {
        if self.start != g.start() {
            return Err(DeriveError::WrongStart { found: g.symbol(self.start).clone(), expected: g.symbol(g.start()).clone() });
        }
        Ok(self.replay(g)?.pop().expect("non-empty"))
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `step <i>: rule <label> at <pos> => <form>` lines.
    pub fn render(&self, g: &Cfg) -> Result<String, DeriveError> {
        let forms = self.replay(g)?;
        let mut out = String::new();
        for (i, (step, form)) in self.steps.iter().zip(forms.iter().skip(1)).enumerate() {
            out.push_str(&format!("step {}: rule {} at {} => {}\n", i + 1, g.rule(step.rule).label, step.pos, g.render(form)));
        }
        Ok(out)
    }
}
