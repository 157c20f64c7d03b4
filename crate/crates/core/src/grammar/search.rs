//! Breadth-first exploration of sentential forms.
//!
//! Order is fixed: levels by step count; within a level, forms in discovery
//! order; for each form, rules in declaration order and, per rule, the
//! leftmost matching position first. Each form keeps the first derivation
//! that reached it, so witnesses use the fewest steps.

use indexmap::IndexSet;

use crate::grammar::{Cfg, DerivationTrace, SententialForm, SymbolId, TraceStep};

/// Limits for bounded searches over sentential forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_form_len: usize,
    pub max_steps: usize,
    /// Maximum number of stored forms.
    pub node_cap: usize,
}

impl SearchBounds {
    pub const DEFAULT_NODE_CAP: usize = 1_000_000;

    pub fn new(max_form_len: usize, max_steps: usize) -> Self {
        SearchBounds { max_form_len, max_steps, node_cap: Self::DEFAULT_NODE_CAP }
    }

    pub fn with_node_cap(mut self, cap: usize) -> Self {
        self.node_cap = cap;
        self
    }

    /// True when every field of `self` is at least the matching field of `other`.
    pub fn dominates(&self, max_form_len: usize, max_steps: usize) -> bool {
        self.max_form_len >= max_form_len && self.max_steps >= max_steps
    }
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_form_len: 32, max_steps: 64, node_cap: Self::DEFAULT_NODE_CAP }
    }
}

const ROOT: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Link {
    parent: u32,
    rule: u32,
    pos: u32,
}

/// Forms discovered by a search, with one witness derivation each.
#[derive(Debug, Clone)]
pub struct FormSet {
    start: SymbolId,
    forms: IndexSet<Box<[SymbolId]>>,
    links: Vec<Link>,
    depth: Vec<u32>,
    /// The node cap stopped the search before the bounds were exhausted.
    pub truncated: bool,
    /// Some admissible form was left out because of `max_form_len` or
    /// `max_steps`. When false the search saw every reachable form.
    pub cut_by_bounds: bool,
}

impl FormSet {
    fn new(start: SymbolId) -> Self {
        let mut forms = IndexSet::new();
        forms.insert(vec![start].into_boxed_slice());
        FormSet {
            start,
            forms,
            links: vec![Link { parent: ROOT, rule: 0, pos: 0 }],
            depth: vec![0],
            truncated: false,
            cut_by_bounds: false,
        }
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn form(&self, node: usize) -> &[SymbolId] {
        &self.forms[node]
    }

    /// Number of steps of the witness derivation for `node`.
    pub fn depth(&self, node: usize) -> usize {
        self.depth[node] as usize
    }

    pub fn contains(&self, form: &[SymbolId]) -> bool {
        self.forms.contains(form)
    }

    pub fn position(&self, form: &[SymbolId]) -> Option<usize> {
        self.forms.get_index_of(form)
    }

    pub fn iter(&self) -> impl Iterator<Item = &[SymbolId]> + '_ {
        self.forms.iter().map(|f| &**f)
    }

    pub fn trace(&self, node: usize) -> DerivationTrace {
        let mut steps = Vec::with_capacity(self.depth(node));
        let mut at = node as u32;
        while self.links[at as usize].parent != ROOT {
            let l = self.links[at as usize];
            steps.push(TraceStep { rule: l.rule as usize, pos: l.pos as usize });
            at = l.parent;
        }
        steps.reverse();
        DerivationTrace { start: self.start, steps }
    }

    pub fn sentential_form(&self, node: usize) -> SententialForm {
        SententialForm(self.forms[node].to_vec())
    }
}

pub(crate) enum Flow {
    Continue,
    Stop,
}

pub(crate) struct Explored {
    pub set: FormSet,
    /// Node at which `visit` asked to stop.
    pub stopped_at: Option<usize>,
}

/// Runs the search. `admit` filters newly generated forms (pruning);
/// `visit` sees every stored form, the start included.
pub(crate) fn breadth_first(
    g: &Cfg,
    bounds: &SearchBounds,
    mut admit: impl FnMut(&[SymbolId]) -> bool,
    mut visit: impl FnMut(usize, &[SymbolId]) -> Flow,
) -> Explored {
    let mut set = FormSet::new(g.start());
    if let Flow::Stop = visit(0, &set.forms[0]) {
        return Explored { set, stopped_at: Some(0) };
    }
    let rules = g.rules();
    let mut level = 0..1usize;
    let mut depth = 0usize;
    let mut scratch: Vec<(usize, SymbolId)> = Vec::new();
    let mut present = vec![false; g.symbol_count()];
    while depth < bounds.max_steps && !level.is_empty() {
        for node in level.clone() {
            let form: Box<[SymbolId]> = set.forms[node].clone();
            scratch.clear();
            for (pos, &s) in form.iter().enumerate() {
                if g.is_rewritable(s) {
                    scratch.push((pos, s));
                    present[s.index()] = true;
                }
            }
            for (ri, rule) in rules.iter().enumerate() {
                if !present[rule.lhs.index()] {
                    continue;
                }
                let new_len = form.len() + rule.rhs.len() - 1;
                let too_long = new_len > bounds.max_form_len;
                if too_long && set.cut_by_bounds {
                    continue;
                }
                for &(pos, s) in &scratch {
                    if s != rule.lhs {
                        continue;
                    }
                    let mut next = Vec::with_capacity(new_len);
                    next.extend_from_slice(&form[..pos]);
                    next.extend_from_slice(&rule.rhs);
                    next.extend_from_slice(&form[pos + 1..]);
                    if too_long {
                        if admit(&next) {
                            set.cut_by_bounds = true;
                            break;
                        }
                        continue;
                    }
                    if set.forms.contains(next.as_slice()) || !admit(&next) {
                        continue;
                    }
                    if set.forms.len() >= bounds.node_cap {
                        set.truncated = true;
                        for &(_, s) in &scratch {
                            present[s.index()] = false;
                        }
                        return Explored { set, stopped_at: None };
                    }
                    let (id, _) = set.forms.insert_full(next.into_boxed_slice());
                    set.links.push(Link { parent: node as u32, rule: ri as u32, pos: pos as u32 });
                    set.depth.push(depth as u32 + 1);
                    if let Flow::Stop = visit(id, &set.forms[id]) {
                        for &(_, s) in &scratch {
                            present[s.index()] = false;
                        }
                        return Explored { set, stopped_at: Some(id) };
                    }
                }
            }
            for &(_, s) in &scratch {
                present[s.index()] = false;
            }
        }
        level = level.end..set.forms.len();
        depth += 1;
    }
    if depth == bounds.max_steps && level.clone().any(|node| set.forms[node].iter().any(|&s| g.is_rewritable(s))) {
        set.cut_by_bounds = true;
    }
    Explored { set, stopped_at: None }
}

/// Sentential forms reachable from the start symbol in at most
/// `bounds.max_steps` steps through forms no longer than
/// `bounds.max_form_len`. The result is bound-truncated by construction;
/// `truncated` additionally reports that the node cap was hit.
pub fn enumerate_forms(g: &Cfg, bounds: &SearchBounds) -> FormSet {
    breadth_first(g, bounds, |_| true, |_, _| Flow::Continue).set
}
