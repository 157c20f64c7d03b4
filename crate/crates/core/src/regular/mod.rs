//! Compiles a grammar finalized by a regular language into an ordinary
//! context-free grammar `H` with `L(H) = L(G,F)`.
//!
//! Nonterminals of `H` are wrapped triples `<p.X.q>`: `X` derives a string
//! whose `W`-projection drives the automaton from `p` to `q`. The start
//! symbol is `<qs.S.QF>`.

use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::final_lang::Dfa;
use crate::grammar::{Cfg, GrammarError};
use crate::symbol::Symbol;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("final alphabet symbol `{0}` is not a symbol of the grammar")]
    AlphabetNotInGrammar(Symbol),
    #[error("`{0}` uses a reserved spelling `<...>`")]
    ReservedSpelling(Symbol),
    #[error("state name `{0}` may not contain `.` or be `QF`")]
    BadStateName(Symbol),
    #[error("the compiled grammar is invalid: {0}")]
    Grammar(#[from] GrammarError),
}

/// The token `<p.a.q>`; `q` is `QF` for the start wrapper.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WrappedSymbol {
    pub left: Symbol,
    pub core: Symbol,
    pub right: Symbol,
}

pub const FINAL_SET: &str = "QF";

impl WrappedSymbol {
    pub fn new(left: &Symbol, core: &Symbol, right: &Symbol) -> Self {
        WrappedSymbol { left: left.clone(), core: core.clone(), right: right.clone() }
    }

    pub fn token(&self) -> Symbol {
        Symbol::new(&self.to_string()).expect("wrapped tokens are valid symbols")
    }

    /// Inverse of [`WrappedSymbol::token`]. State names contain no `.`, so
    /// the first and last dots delimit the core symbol.
    pub fn parse(token: &Symbol) -> Option<Self> {
        let inner = token.as_str().strip_prefix('<')?.strip_suffix('>')?;
        let (left, rest) = inner.split_once('.')?;
        let (core, right) = rest.rsplit_once('.')?;
        Some(WrappedSymbol { left: Symbol::new(left).ok()?, core: Symbol::new(core).ok()?, right: Symbol::new(right).ok()? })
    }

    pub fn is_start(&self) -> bool {
        self.right.as_str() == FINAL_SET
    }
}

impl fmt::Display for WrappedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}.{}.{}>", self.left, self.core, self.right)
    }
}

/// A split of a right-hand side into picks `X₁ … Xₙ` (by position) and the
/// gaps between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub picks: Vec<usize>,
}

impl Decomposition {
    /// Gaps `y₀ … yₙ` of `rhs`.
    pub fn gaps<'a>(&self, rhs: &'a [Symbol]) -> Vec<&'a [Symbol]> {
        let mut out = Vec::with_capacity(self.picks.len() + 1);
        let mut from = 0;
        for &p in &self.picks {
            out.push(&rhs[from..p]);
            from = p + 1;
        }
        out.push(&rhs[from..]);
        out
    }
}

/// All decompositions of `rhs`: symbols in `W` are always picks, every other
/// symbol is independently a pick or part of a gap, and at least one pick
/// is required. Ordered by the bitmask over the optional positions.
pub fn decompose_rhs(rhs: &[Symbol], w: &[Symbol]) -> Vec<Decomposition> {
    let optional: Vec<usize> = (0..rhs.len()).filter(|&i| !w.contains(&rhs[i])).collect();
    assert!(optional.len() < 32, "right-hand side too long to decompose");
    let mut out = Vec::new();
    for mask in 0u32..(1 << optional.len()) {
        let picks: Vec<usize> = (0..rhs.len())
            .filter(|&i| match optional.iter().position(|&o| o == i) {
                Some(bit) => mask & (1 << bit) != 0,
                None => true,
            })
            .collect();
        if !picks.is_empty() {
            out.push(Decomposition { picks });
        }
    }
    out
}

/// Which construction step produced a rule of `H`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleOrigin {
    /// `<qs.S.QF> -> <qs.S.qf>`.
    Start,
    /// A state-chained rule from rule `source` of `G`.
    Chained { source: usize, picks: Vec<usize> },
    /// A verbatim copy of rule `source`, over `V - W` only.
    Copy { source: usize },
    /// `<p.a.q> -> a` for a terminal `a ∈ W`.
    Emit,
    /// `<p.B.q> -> eps` for a nonterminal `B ∈ W` left in the final form.
    Erase,
    /// `<p.B.p> -> α` for `B ∈ W` rewritten by rule `source` to a `W`-free `α`.
    Vanish { source: usize },
    /// `<qs.S.QF> -> S` when the whole derivation avoids `W` and `qs` is final.
    Unfinalized,
}

/// `H` together with the origin of each of its rules.
#[derive(Debug, Clone)]
pub struct Compiled {
    pub h: Cfg,
    pub origins: Vec<RuleOrigin>,
}

/// Builds `H` with `L(H) = L(G, L(M))`, pruned of useless rules.
pub fn build_finalized_cfg(g: &Cfg, m: &Dfa) -> Result<Cfg, ConstructionError> {
    Ok(build_finalized_cfg_detailed(g, m)?.h)
}

pub fn build_finalized_cfg_detailed(g: &Cfg, m: &Dfa) -> Result<Compiled, ConstructionError> {
    build(g, m, true, true)
}

/// Only the start, chained, copy, emit and erase rules, without the two
/// supplementary rule kinds. Derivations in which a `W`-nonterminal is
/// rewritten to a `W`-free string, or in which no `W` symbol ever occurs,
/// have no counterpart in this grammar.
pub fn build_finalized_cfg_unsupplemented(g: &Cfg, m: &Dfa) -> Result<Compiled, ConstructionError> {
    build(g, m, false, true)
}

/// The grammar before pruning.
pub fn build_finalized_cfg_unpruned(g: &Cfg, m: &Dfa) -> Result<Compiled, ConstructionError> {
    build(g, m, true, false)
}

/// The chained rules contributed by one rule of `G` and one decomposition,
/// for every state sequence `q₁ … qₙ₊₁`, before deduplication.
pub fn chained_rules(g: &Cfg, m: &Dfa, rule: usize, d: &Decomposition) -> Vec<(Symbol, Vec<Symbol>)> {
    let r = g.rule(rule);
    let lhs = g.symbol(r.lhs);
    let rhs = g.names(&r.rhs);
    let gaps = d.gaps(&rhs);
    let states = m.states();
    let n = d.picks.len();
    let mut out = Vec::new();
    let mut seq = vec![0usize; n + 1];
    loop {
        let mut body = gaps[0].to_vec();
        for j in 0..n {
            body.push(WrappedSymbol::new(&states[seq[j]], &rhs[d.picks[j]], &states[seq[j + 1]]).token());
            body.extend_from_slice(gaps[j + 1]);
        }
        out.push((WrappedSymbol::new(&states[seq[0]], lhs, &states[seq[n]]).token(), body));
        // Next state sequence, last position fastest.
        let mut k = n + 1;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            seq[k] += 1;
            if seq[k] < states.len() {
                break;
            }
            seq[k] = 0;
        }
    }
}

fn check_inputs(g: &Cfg, m: &Dfa) -> Result<(), ConstructionError> {
    for id in (0..g.symbol_count()).map(|i| crate::grammar::SymbolId(i as u32)) {
        let s = g.symbol(id);
        if s.is_reserved_spelling() {
            return Err(ConstructionError::ReservedSpelling(s.clone()));
        }
    }
    for q in m.states() {
        if q.as_str().contains('.') || q.as_str() == FINAL_SET || q.is_reserved_spelling() {
            return Err(ConstructionError::BadStateName(q.clone()));
        }
    }
    for a in m.alphabet() {
        if g.id_of(a).is_none() {
            return Err(ConstructionError::AlphabetNotInGrammar(a.clone()));
        }
    }
    Ok(())
}

fn build(g: &Cfg, m: &Dfa, supplemented: bool, prune: bool) -> Result<Compiled, ConstructionError> {
    check_inputs(g, m)?;
    let w: Vec<Symbol> = m.alphabet().to_vec();
    let in_w = |s: &Symbol| w.contains(s);
    let states = m.states();
    let start = g.symbol(g.start()).clone();
    let qs = &states[m.start()];
    let wrapper = WrappedSymbol { left: qs.clone(), core: start.clone(), right: Symbol::new(FINAL_SET).expect("valid") }.token();

    let mut rules: IndexSet<(Symbol, Vec<Symbol>)> = IndexSet::new();
    let mut origins = Vec::new();
    let mut add = |rule: (Symbol, Vec<Symbol>), origin: RuleOrigin, rules: &mut IndexSet<_>| {
        if rules.insert(rule) {
            origins.push(origin);
        }
    };

    for qf in m.finals() {
        add((wrapper.clone(), vec![WrappedSymbol::new(qs, &start, &states[qf]).token()]), RuleOrigin::Start, &mut rules);
    }
    if supplemented && !in_w(&start) && m.is_final(m.start()) {
        add((wrapper.clone(), vec![start.clone()]), RuleOrigin::Unfinalized, &mut rules);
    }
    for (ri, r) in g.rules().iter().enumerate() {
        let rhs = g.names(&r.rhs);
        for d in decompose_rhs(&rhs, &w) {
            for rule in chained_rules(g, m, ri, &d) {
                add(rule, RuleOrigin::Chained { source: ri, picks: d.picks.clone() }, &mut rules);
            }
        }
    }
    for (ri, r) in g.rules().iter().enumerate() {
        let lhs = g.symbol(r.lhs);
        let rhs = g.names(&r.rhs);
        if !in_w(lhs) && !rhs.iter().any(&in_w) {
            add((lhs.clone(), rhs), RuleOrigin::Copy { source: ri }, &mut rules);
        }
    }
    for (ai, a) in w.iter().enumerate() {
        let id = g.id_of(a).expect("checked");
        for p in 0..states.len() {
            let q = m.next(p, ai);
            let wrapped = WrappedSymbol::new(&states[p], a, &states[q]).token();
            if g.is_terminal(id) {
                add((wrapped, vec![a.clone()]), RuleOrigin::Emit, &mut rules);
            } else {
                add((wrapped, vec![]), RuleOrigin::Erase, &mut rules);
            }
        }
    }
    if supplemented {
        for (ri, r) in g.rules().iter().enumerate() {
            let lhs = g.symbol(r.lhs);
            let rhs = g.names(&r.rhs);
            if in_w(lhs) && !rhs.iter().any(&in_w) {
                for p in states {
                    add((WrappedSymbol::new(p, lhs, p).token(), rhs.clone()), RuleOrigin::Vanish { source: ri }, &mut rules);
                }
            }
        }
    }

    let mut rules: Vec<(Symbol, Vec<Symbol>)> = rules.into_iter().collect();
    if prune {
        let keep = useful_rules(g, &wrapper, &rules);
        let mut k = keep.iter();
        rules.retain(|_| *k.next().expect("same length"));
        let mut k = keep.iter();
        origins.retain(|_| *k.next().expect("same length"));
    }

    let terminals = g.names(g.terminals());
    let mut nonterminals: IndexSet<Symbol> = g.names(g.nonterminals()).into_iter().collect();
    nonterminals.insert(wrapper.clone());
    for (lhs, rhs) in &rules {
        nonterminals.insert(lhs.clone());
        for s in rhs {
            if s.is_reserved_spelling() {
                nonterminals.insert(s.clone());
            }
        }
    }
    let h = Cfg::new(terminals, nonterminals.into_iter().collect(), wrapper, rules)?;
    Ok(Compiled { h, origins })
}

/// Rules reachable from `start` that use only productive symbols.
fn useful_rules(g: &Cfg, start: &Symbol, rules: &[(Symbol, Vec<Symbol>)]) -> Vec<bool> {
    use std::collections::HashSet;
    let mut productive: HashSet<&Symbol> = g.terminals().iter().map(|&t| g.symbol(t)).collect();
    loop {
        let mut changed = false;
        for (lhs, rhs) in rules {
            if !productive.contains(lhs) && rhs.iter().all(|s| productive.contains(s)) {
                productive.insert(lhs);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let usable: Vec<bool> = rules.iter().map(|(l, r)| productive.contains(l) && r.iter().all(|s| productive.contains(s))).collect();
    let mut reached: HashSet<&Symbol> = HashSet::from([start]);
    loop {
        let mut changed = false;
        for (i, (lhs, rhs)) in rules.iter().enumerate() {
            if usable[i] && reached.contains(lhs) {
                for s in rhs {
                    changed |= reached.insert(s);
                }
            }
        }
        if !changed {
            break;
        }
    }
    rules.iter().enumerate().map(|(i, (lhs, _))| usable[i] && reached.contains(lhs)).collect()
}
