//! Left-extended queue grammars.
//!
//! A configuration `w # r q` holds the consumed history `w`, the queue `r`
//! and the state `q`. A rule `(a, b, z, c)` applies when `r` starts with `a`
//! and `q = b`; it shifts `a` into the history, appends `z` to the queue and
//! moves to state `c`. A word `v ∈ T*` is generated when the queue equals
//! `v` as a state of `D` is entered.

mod search;
mod text;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::symbol::{render_word, Symbol};

pub use search::{lqg_enumerate, lqg_member_bounded, QueueBounds, QueueLanguage, QueueWord};
pub use text::{parse_lqg, print_lqg};

/// Marker separating history from queue when a configuration is rendered.
pub const HISTORY_MARK: &str = "#";

/// A rule `(a, b, x, c)`: read `a` in state `b`, append `x`, go to `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueueRule {
    pub a: Symbol,
    pub b: Symbol,
    pub x: Vec<Symbol>,
    pub c: Symbol,
}

impl fmt::Display for QueueRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x: Vec<&str> = self.x.iter().map(Symbol::as_str).collect();
        let x = if x.is_empty() { crate::symbol::EPSILON.to_string() } else { x.join(" ") };
        write!(f, "({}, {}, {}, {})", self.a, self.b, x, self.c)
    }
}

/// Unvalidated components, as read from a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawLqg {
    pub v: Vec<Symbol>,
    pub t: Vec<Symbol>,
    pub u: Vec<Symbol>,
    pub d: Vec<Symbol>,
    pub start: (Symbol, Symbol),
    pub rules: Vec<QueueRule>,
    /// Ordinary queue grammars must have a rule for every `a ∈ V`.
    pub ordinary: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LqgError {
    #[error("`{0}` is declared more than once")]
    Duplicate(Symbol),
    #[error("`{0}` is both a grammar symbol and a state (V ∩ U must be empty)")]
    SharedSymbol(Symbol),
    #[error("`{0}` is reserved as the history marker and may not be in V or U")]
    ReservedMarker(Symbol),
    #[error("terminal `{0}` is not in V")]
    TerminalNotInV(Symbol),
    #[error("final state `{0}` is not in U")]
    FinalNotInU(Symbol),
    #[error("start pair must be a nonterminal followed by a non-final state, got `{0} {1}`")]
    BadStart(Symbol, Symbol),
    #[error("rule {rule}: {message}")]
    BadRule { rule: usize, message: String },
    #[error("rule {rule}: duplicate of rule {first}")]
    DuplicateRule { rule: usize, first: usize },
    #[error("ordinary queue grammar has no rule reading `{0}`")]
    NotTotal(Symbol),
}

/// Whether every rule appends only nonterminals or only terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalFormReport {
    pub holds: bool,
    /// Index of the first rule violating the normal form.
    pub offending: Option<usize>,
}

/// A validated left-extended queue grammar `(V, T, U, D, s, R)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lqg {
    v: Vec<Symbol>,
    terminal: Vec<bool>,
    u: Vec<Symbol>,
    fin: Vec<bool>,
    start: (usize, usize),
    rules: Vec<QueueRule>,
    /// Rules as `(a, b, x, c)` indices into `v` and `u`.
    coded: Vec<(usize, usize, Vec<usize>, usize)>,
    ordinary: bool,
}

impl Lqg {
    pub fn symbols(&self) -> &[Symbol] {
        &self.v
    }

    pub fn terminals(&self) -> Vec<Symbol> {
        self.v.iter().zip(&self.terminal).filter(|(_, &t)| t).map(|(s, _)| s.clone()).collect()
    }

    pub fn nonterminals(&self) -> Vec<Symbol> {
        self.v.iter().zip(&self.terminal).filter(|(_, &t)| !t).map(|(s, _)| s.clone()).collect()
    }

    pub fn states(&self) -> &[Symbol] {
        &self.u
    }

    pub fn finals(&self) -> Vec<Symbol> {
        self.u.iter().zip(&self.fin).filter(|(_, &f)| f).map(|(s, _)| s.clone()).collect()
    }

    pub fn is_terminal(&self, a: &Symbol) -> bool {
        self.v.iter().position(|s| s == a).is_some_and(|i| self.terminal[i])
    }

    pub fn is_final(&self, q: &Symbol) -> bool {
        self.u.iter().position(|s| s == q).is_some_and(|i| self.fin[i])
    }

    pub fn start(&self) -> (&Symbol, &Symbol) {
        (&self.v[self.start.0], &self.u[self.start.1])
    }

    pub fn rules(&self) -> &[QueueRule] {
        &self.rules
    }

    pub fn is_ordinary(&self) -> bool {
        self.ordinary
    }

    pub fn normal_form(&self) -> NormalFormReport {
        let offending = self.coded.iter().position(|(_, _, x, _)| {
            let nt = x.iter().all(|&s| !self.terminal[s]);
            let t = x.iter().all(|&s| self.terminal[s]);
            !(nt || t)
        });
        // Rule reads must also be nonterminals from non-final states; the
        // latter holds structurally.
        let offending = offending.into_iter().chain(self.coded.iter().position(|(a, ..)| self.terminal[*a])).min();
        NormalFormReport { holds: offending.is_none(), offending }
    }

    pub fn initial(&self) -> LqgConfig {
        LqgConfig { consumed: Vec::new(), queue: vec![self.v[self.start.0].clone()], state: self.u[self.start.1].clone() }
    }
}

/// Validates the components and reports whether the normal form holds.
pub fn lqg_validate(raw: RawLqg) -> Result<(Lqg, NormalFormReport), LqgError> {
    let mut vi: HashMap<Symbol, usize> = HashMap::new();
    for (i, s) in raw.v.iter().enumerate() {
        if vi.insert(s.clone(), i).is_some() {
            return Err(LqgError::Duplicate(s.clone()));
        }
    }
    let mut ui: HashMap<Symbol, usize> = HashMap::new();
    for (i, s) in raw.u.iter().enumerate() {
        if vi.contains_key(s) {
            return Err(LqgError::SharedSymbol(s.clone()));
        }
        if ui.insert(s.clone(), i).is_some() {
            return Err(LqgError::Duplicate(s.clone()));
        }
    }
    if let Some(s) = raw.v.iter().chain(&raw.u).find(|s| s.as_str() == HISTORY_MARK) {
        return Err(LqgError::ReservedMarker(s.clone()));
    }
    let mut terminal = vec![false; raw.v.len()];
    for t in &raw.t {
        let i = *vi.get(t).ok_or_else(|| LqgError::TerminalNotInV(t.clone()))?;
        if terminal[i] {
            return Err(LqgError::Duplicate(t.clone()));
        }
        terminal[i] = true;
    }
    let mut fin = vec![false; raw.u.len()];
    for d in &raw.d {
        let i = *ui.get(d).ok_or_else(|| LqgError::FinalNotInU(d.clone()))?;
        if fin[i] {
            return Err(LqgError::Duplicate(d.clone()));
        }
        fin[i] = true;
    }
    let (a0, q0) = &raw.start;
    let start = match (vi.get(a0), ui.get(q0)) {
        (Some(&a), Some(&q)) if !terminal[a] && !fin[q] => (a, q),
        _ => return Err(LqgError::BadStart(a0.clone(), q0.clone())),
    };
    let mut coded = Vec::with_capacity(raw.rules.len());
    let mut seen: HashMap<&QueueRule, usize> = HashMap::new();
    for (i, r) in raw.rules.iter().enumerate() {
        let rule = i + 1;
        let bad = |message: String| LqgError::BadRule { rule, message };
        let a = *vi.get(&r.a).ok_or_else(|| bad(format!("`{}` is not in V", r.a)))?;
        let b = *ui.get(&r.b).ok_or_else(|| bad(format!("`{}` is not in U", r.b)))?;
        if fin[b] {
            return Err(bad(format!("`{}` is a final state and cannot be read from", r.b)));
        }
        let x = r.x.iter().map(|s| vi.get(s).copied().ok_or_else(|| bad(format!("`{s}` is not in V")))).collect::<Result<Vec<_>, _>>()?;
        let c = *ui.get(&r.c).ok_or_else(|| bad(format!("`{}` is not in U", r.c)))?;
        if let Some(first) = seen.insert(r, rule) {
            return Err(LqgError::DuplicateRule { rule, first });
        }
        coded.push((a, b, x, c));
    }
    if raw.ordinary {
        if let Some(i) = (0..raw.v.len()).find(|&i| !coded.iter().any(|(a, ..)| *a == i)) {
            return Err(LqgError::NotTotal(raw.v[i].clone()));
        }
    }
    let g = Lqg { v: raw.v, terminal, u: raw.u, fin, start, rules: raw.rules, coded, ordinary: raw.ordinary };
    let report = g.normal_form();
    Ok((g, report))
}

/// A configuration `consumed # queue state`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LqgConfig {
    pub consumed: Vec<Symbol>,
    pub queue: Vec<Symbol>,
    pub state: Symbol,
}

impl fmt::Display for LqgConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |w: &[Symbol]| if w.is_empty() { String::new() } else { render_word(w) };
        write!(f, "{}{HISTORY_MARK}{} {}", part(&self.consumed), part(&self.queue), self.state)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("rule {0} is not a rule of the grammar")]
    UnknownRule(QueueRule),
    #[error("there is no rule number {0}")]
    NoSuchRule(usize),
    #[error("the queue is empty")]
    EmptyQueue,
    #[error("queue head `{found}` does not match the rule's `{expected}`")]
    HeadMismatch { found: Symbol, expected: Symbol },
    #[error("state `{found}` does not match the rule's `{expected}`")]
    StateMismatch { found: Symbol, expected: Symbol },
}

/// Applies `rule` to `c`.
pub fn lqg_step(g: &Lqg, c: &LqgConfig, rule: &QueueRule) -> Result<LqgConfig, StepError> {
    if !g.rules.contains(rule) {
        return Err(StepError::UnknownRule(rule.clone()));
    }
    let head = c.queue.first().ok_or(StepError::EmptyQueue)?;
    if *head != rule.a {
        return Err(StepError::HeadMismatch { found: head.clone(), expected: rule.a.clone() });
    }
    if c.state != rule.b {
        return Err(StepError::StateMismatch { found: c.state.clone(), expected: rule.b.clone() });
    }
    let mut consumed = c.consumed.clone();
    consumed.push(head.clone());
    let mut queue = c.queue[1..].to_vec();
    queue.extend_from_slice(&rule.x);
    Ok(LqgConfig { consumed, queue, state: rule.c.clone() })
}

/// Rule applications (indices into [`Lqg::rules`]) from the initial
/// configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueTrace {
    pub rules: Vec<usize>,
}

impl QueueTrace {
    pub fn replay(&self, g: &Lqg) -> Result<Vec<LqgConfig>, StepError> {
        let mut out = vec![g.initial()];
        for &r in &self.rules {
            let rule = g.rules.get(r).ok_or(StepError::NoSuchRule(r + 1))?;
            let next = lqg_step(g, out.last().expect("non-empty"), rule)?;
            out.push(next);
        }
        Ok(out)
    }

    /// `step <i>: rule <(a, b, x, c)> => <configuration>` lines.
    pub fn render(&self, g: &Lqg) -> Result<String, StepError> {
        let configs = self.replay(g)?;
        let mut out = String::new();
        for (i, (&r, c)) in self.rules.iter().zip(configs.iter().skip(1)).enumerate() {
            out.push_str(&format!("step {}: rule {} => {}\n", i + 1, g.rules[r], c));
        }
        Ok(out)
    }
}
