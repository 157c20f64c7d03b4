use std::collections::HashMap;

use thiserror::Error;

use crate::symbol::Symbol;
use crate::text::{expect_kind, keyed, lines, symbol_list, ParseError, Sections};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DfaError {
    #[error("state `{0}` is declared more than once")]
    DuplicateState(Symbol),
    #[error("input symbol `{0}` is declared more than once")]
    DuplicateSymbol(Symbol),
    #[error("unknown state `{0}`")]
    UnknownState(Symbol),
    #[error("`{0}` is not in the input alphabet")]
    UnknownSymbol(Symbol),
    #[error("transition for ({state}, {symbol}) is given twice")]
    DuplicateTransition { state: Symbol, symbol: Symbol },
    #[error("missing transition for ({state}, {symbol}); the transition function must be total")]
    MissingTransition { state: Symbol, symbol: Symbol },
    #[error("a DFA needs at least one state")]
    NoStates,
}

/// A deterministic finite automaton with a total transition function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    states: Vec<Symbol>,
    alphabet: Vec<Symbol>,
    delta: Vec<usize>,
    start: usize,
    finals: Vec<bool>,
}

impl Dfa {
    /// Builds a DFA; every `(state, symbol)` pair needs exactly one transition.
    pub fn new(
        states: Vec<Symbol>,
        alphabet: Vec<Symbol>,
        start: Symbol,
        finals: Vec<Symbol>,
        transitions: Vec<(Symbol, Symbol, Symbol)>,
    ) -> Result<Dfa, DfaError> {
        if states.is_empty() {
            return Err(DfaError::NoStates);
        }
        let mut sidx = HashMap::new();
        for (i, s) in states.iter().enumerate() {
            if sidx.insert(s.clone(), i).is_some() {
                return Err(DfaError::DuplicateState(s.clone()));
            }
        }
        let mut aidx = HashMap::new();
        for (i, a) in alphabet.iter().enumerate() {
            if aidx.insert(a.clone(), i).is_some() {
                return Err(DfaError::DuplicateSymbol(a.clone()));
            }
        }
        let state = |s: &Symbol| sidx.get(s).copied().ok_or_else(|| DfaError::UnknownState(s.clone()));
        let start = state(&start)?;
        let mut fin = vec![false; states.len()];
        for f in &finals {
            fin[state(f)?] = true;
        }
        let k = alphabet.len();
        let mut delta = vec![usize::MAX; states.len() * k];
        for (p, a, q) in &transitions {
            let pi = state(p)?;
            let ai = *aidx.get(a).ok_or_else(|| DfaError::UnknownSymbol(a.clone()))?;
            let qi = state(q)?;
            let slot = &mut delta[pi * k + ai];
            if *slot != usize::MAX {
                return Err(DfaError::DuplicateTransition { state: p.clone(), symbol: a.clone() });
            }
            *slot = qi;
        }
        for (pi, p) in states.iter().enumerate() {
            for (ai, a) in alphabet.iter().enumerate() {
                if delta[pi * k + ai] == usize::MAX {
                    return Err(DfaError::MissingTransition { state: p.clone(), symbol: a.clone() });
                }
            }
        }
        Ok(Dfa { states, alphabet, delta, start, finals: fin })
    }

    pub fn states(&self) -> &[Symbol] {
        &self.states
    }

    pub fn alphabet(&self) -> &[Symbol] {
        &self.alphabet
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn is_final(&self, state: usize) -> bool {
        self.finals[state]
    }

    pub fn finals(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.states.len()).filter(|&q| self.finals[q])
    }

    pub fn symbol_index(&self, a: &Symbol) -> Option<usize> {
        self.alphabet.iter().position(|x| x == a)
    }

    pub fn next(&self, state: usize, symbol: usize) -> usize {
        self.delta[state * self.alphabet.len() + symbol]
    }

    /// Runs from the start state; fails on symbols outside the alphabet.
    pub fn run(&self, word: &[Symbol]) -> Result<usize, DfaError> {
        let mut q = self.start;
        for a in word {
            let ai = self.symbol_index(a).ok_or_else(|| DfaError::UnknownSymbol(a.clone()))?;
            q = self.next(q, ai);
        }
        Ok(q)
    }

    pub fn accepts(&self, word: &[Symbol]) -> bool {
        self.run(word).map(|q| self.finals[q]).unwrap_or(false)
    }

    /// `reach[p][q]`: `q` is reachable from `p` by some word (possibly empty).
    pub(crate) fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.states.len();
        let mut reach = vec![vec![false; n]; n];
        for (p, row) in reach.iter_mut().enumerate() {
            let mut stack = vec![p];
            row[p] = true;
            while let Some(x) = stack.pop() {
                for a in 0..self.alphabet.len() {
                    let y = self.next(x, a);
                    if !row[y] {
                        row[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        reach
    }

    /// True when no final state is reachable from the start.
    pub fn is_empty_language(&self) -> bool {
        !self.reachability()[self.start].iter().enumerate().any(|(q, &r)| r && self.finals[q])
    }
}

/// `dfa_run`: the state reached from the start state on `word`.
pub fn dfa_run(m: &Dfa, word: &[Symbol]) -> Result<Symbol, DfaError> {
    m.run(word).map(|q| m.states[q].clone())
}

/// Parses the `kind: dfa` text format. Totality is checked.
pub fn parse_dfa(text: &str) -> Result<Dfa, ParseError> {
    let lines = lines(text)?;
    expect_kind(&lines, &["dfa"])?;
    let mut sections = Sections::new();
    let mut states = None;
    let mut alphabet = None;
    let mut start = None;
    let mut finals = None;
    let mut trans = Vec::new();
    let mut trans_lines = Vec::new();
    for line in &lines[1..] {
        match line.key {
            "states" => {
                sections.once(line)?;
                states = Some(symbol_list(line)?);
            }
            "alphabet" => {
                sections.once(line)?;
                alphabet = Some(symbol_list(line)?);
            }
            "start" => {
                sections.once(line)?;
                let s = symbol_list(line)?;
                if s.len() != 1 {
                    return Err(ParseError::new(line.number, "`start:` takes exactly one state"));
                }
                start = Some((line.number, s[0].clone()));
            }
            "final" => {
                sections.once(line)?;
                finals = Some((line.number, symbol_list(line)?));
            }
            "trans" => {
                let t = symbol_list(line)?;
                if t.len() != 3 {
                    return Err(ParseError::new(line.number, "`trans:` expects `state symbol state`"));
                }
                trans.push((t[0].clone(), t[1].clone(), t[2].clone()));
                trans_lines.push(line.number);
            }
            "kind" => return Err(ParseError::new(line.number, "duplicate `kind:` header")),
            other => return Err(ParseError::new(line.number, format!("unknown section `{other}:`"))),
        }
    }
    let states = states.ok_or_else(|| ParseError::new(0, "missing `states:` section"))?;
    let alphabet = alphabet.ok_or_else(|| ParseError::new(0, "missing `alphabet:` section"))?;
    let (s_line, start) = start.ok_or_else(|| ParseError::new(0, "missing `start:` section"))?;
    let (f_line, finals) = finals.unwrap_or((0, Vec::new()));
    // Attribute errors to the most specific line available.
    for (i, (p, a, q)) in trans.iter().enumerate() {
        for s in [p, q] {
            if !states.contains(s) {
                return Err(ParseError::new(trans_lines[i], format!("unknown state `{s}`")));
            }
        }
        if !alphabet.contains(a) {
            return Err(ParseError::new(trans_lines[i], format!("`{a}` is not in the input alphabet")));
        }
        if trans[..i].iter().any(|(p2, a2, _)| p2 == p && a2 == a) {
            return Err(ParseError::new(trans_lines[i], format!("transition for ({p}, {a}) is given twice")));
        }
    }
    if !states.contains(&start) {
        return Err(ParseError::new(s_line, format!("unknown state `{start}`")));
    }
    if let Some(f) = finals.iter().find(|f| !states.contains(f)) {
        return Err(ParseError::new(f_line, format!("unknown state `{f}`")));
    }
    Dfa::new(states, alphabet, start, finals, trans).map_err(|e| ParseError::new(0, e.to_string()))
}

/// Canonical text: transitions in state-major, alphabet-minor order.
pub fn print_dfa(m: &Dfa) -> String {
    let mut out = String::from("kind: dfa\n");
    out.push_str(&keyed("states", &m.states));
    out.push('\n');
    out.push_str(&keyed("alphabet", &m.alphabet));
    out.push('\n');
    out.push_str(&format!("start: {}\n", m.states[m.start]));
    let finals: Vec<&Symbol> = m.finals().map(|q| &m.states[q]).collect();
    out.push_str(&keyed("final", &finals.iter().map(|s| s.as_str()).collect::<Vec<_>>()));
    out.push('\n');
    for p in 0..m.states.len() {
        for a in 0..m.alphabet.len() {
            out.push_str(&format!("trans: {} {} {}\n", m.states[p], m.alphabet[a], m.states[m.next(p, a)]));
        }
    }
    out
}
