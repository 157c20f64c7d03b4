//! Final sentential forms `φ(G,F)` and the finalized language `L(G,F)`.
//!
//! `x ∈ φ(G,F)` when `x` is a sentential form of `G` whose projection onto
//! `W` lies in `F`. `L(G,F)` collects the terminal projections of those final
//! forms whose nonterminals all belong to `W`.
//!
//! Searches are breadth-first over sentential forms with three prunings,
//! each of which only discards forms that have no qualifying descendant:
//! the `W`-skeleton must still be completable to a word of `F`, every symbol
//! outside `W ∪ T` must still be erasable, and (for membership) the terminal
//! skeleton must still fit the target.

mod bound;

use thiserror::Error;

use crate::exec::{self, Exec};
use crate::final_lang::{AlphabetMismatch, BoundFinal, Dfa, FinalLanguage};
use crate::grammar::search::{breadth_first, Flow};
use crate::grammar::{cfg_member, project, Cfg, DerivationTrace, FormSet, SearchBounds, SententialForm, SymbolId, SymbolSet};
use crate::regular::{build_finalized_cfg, ConstructionError};
use crate::symbol::Symbol;

pub use bound::{completeness_bound, CompletenessBound};

/// A grammar together with a final language over a subset of its symbols.
#[derive(Debug, Clone)]
pub struct FinalizationInstance {
    g: Cfg,
    f: FinalLanguage,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Alphabet(#[from] AlphabetMismatch),
}

impl FinalizationInstance {
    /// Requires `W ⊆ V`.
    pub fn new(g: Cfg, f: FinalLanguage) -> Result<Self, InstanceError> {
        BoundFinal::new(&g, &f)?;
        Ok(FinalizationInstance { g, f })
    }

    pub fn grammar(&self) -> &Cfg {
        &self.g
    }

    pub fn final_language(&self) -> &FinalLanguage {
        &self.f
    }

    fn bound(&self) -> BoundFinal<'_> {
        BoundFinal::new(&self.g, &self.f).expect("alphabet checked at construction")
    }

    /// `W` as a set of this grammar's symbols.
    pub fn w_set(&self) -> SymbolSet {
        self.bound().w_set().clone()
    }
}

/// Outcome of a bounded membership search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<C> {
    Found(C),
    /// Not found, and the search provably covered every candidate.
    ExhaustedComplete,
    /// Not found within the bounds; larger bounds might find it.
    ExhaustedTruncated,
}

impl<C> Verdict<C> {
    pub fn is_found(&self) -> bool {
        matches!(self, Verdict::Found(_))
    }

    pub fn found(&self) -> Option<&C> {
        match self {
            Verdict::Found(c) => Some(c),
            _ => None,
        }
    }
}

/// A derivation of `G` ending in a final form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub trace: DerivationTrace,
    pub form: SententialForm,
}

/// Final sentential forms found by [`finalized_forms`].
#[derive(Debug, Clone)]
pub struct FinalForms {
    /// Every form visited by the (pruned) search.
    pub explored: FormSet,
    /// Nodes of `explored` that are final.
    pub finals: Vec<usize>,
}

impl FinalForms {
    pub fn iter(&self) -> impl Iterator<Item = &[SymbolId]> + '_ {
        self.finals.iter().map(|&n| self.explored.form(n))
    }

    pub fn contains(&self, form: &[SymbolId]) -> bool {
        self.explored.position(form).is_some_and(|n| self.finals.contains(&n))
    }

    pub fn certificate(&self, node: usize) -> Certificate {
        Certificate { trace: self.explored.trace(node), form: self.explored.sentential_form(node) }
    }
}

/// `{ x ∈ enumerate_forms(g, b) : project(x, W) ∈ F }`.
pub fn finalized_forms(inst: &FinalizationInstance, bounds: &SearchBounds) -> FinalForms {
    let fin = inst.bound();
    let mut finals = Vec::new();
    let explored = breadth_first(
        &inst.g,
        bounds,
        |form| fin.viable(form),
        |node, form| {
            if fin.accepts_form(form) {
                finals.push(node);
            }
            Flow::Continue
        },
    );
    FinalForms { explored: explored.set, finals }
}

/// Symbols that can derive a string over `T ∪ W`.
fn clearable(g: &Cfg, w: &SymbolSet) -> Vec<bool> {
    let mut ok: Vec<bool> = (0..g.symbol_count()).map(|i| {
        let id = SymbolId(i as u32);
        g.is_terminal(id) || w.contains(id)
    }).collect();
    loop {
        let mut changed = false;
        for r in g.rules() {
            if !ok[r.lhs.index()] && r.rhs.iter().all(|s| ok[s.index()]) {
                ok[r.lhs.index()] = true;
                changed = true;
            }
        }
        if !changed {
            return ok;
        }
    }
}

/// Whether `form` contributes a word: all of its nonterminals lie in `W`
/// and its `W`-projection is in `F`.
fn word_final(g: &Cfg, fin: &BoundFinal<'_>, form: &[SymbolId]) -> bool {
    form.iter().all(|&s| g.is_terminal(s) || fin.w_set().contains(s)) && fin.accepts_form(form)
}

fn terminal_projection(g: &Cfg, form: &[SymbolId]) -> Vec<SymbolId> {
    form.iter().copied().filter(|&s| g.is_terminal(s)).collect()
}

/// Whether the terminal skeleton of `form` can still grow into `target`.
/// Rewritable symbols are gaps matching any string; other nonterminals are
/// skipped.
fn skeleton_fits(g: &Cfg, form: &[SymbolId], target: &[SymbolId]) -> bool {
    let mut segments: Vec<Vec<SymbolId>> = vec![Vec::new()];
    for &s in form {
        if g.is_terminal(s) {
            segments.last_mut().expect("non-empty").push(s);
        } else if g.is_rewritable(s) && (segments.len() == 1 || !segments.last().expect("non-empty").is_empty()) {
            segments.push(Vec::new());
        }
    }
    if segments.len() == 1 {
        return segments[0] == target;
    }
    let first = &segments[0];
    let last = &segments[segments.len() - 1];
    if first.len() + last.len() > target.len() || !target.starts_with(first) || !target.ends_with(last) {
        return false;
    }
    // Greedy leftmost placement of the inner segments.
    let mut at = first.len();
    let limit = target.len() - last.len();
    for seg in &segments[1..segments.len() - 1] {
        if seg.is_empty() {
            continue;
        }
        match target[at..limit].windows(seg.len()).position(|w| w == seg.as_slice()) {
            Some(i) => at += i + seg.len(),
            None => return false,
        }
    }
    true
}

/// A word of `L(G,F)` with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinalizedWord {
    pub word: Vec<SymbolId>,
    pub certificate: Certificate,
}

#[derive(Debug, Clone)]
pub struct FinalizedLanguage {
    /// In length-then-lexicographic order.
    pub words: Vec<FinalizedWord>,
    /// Every word of `L(G,F)` up to the length limit is listed.
    pub complete: bool,
    pub truncated: bool,
}

impl FinalizedLanguage {
    pub fn contains(&self, word: &[SymbolId]) -> bool {
        self.words.iter().any(|w| w.word == word)
    }
}

/// `L(G,F) ∩ T^{≤max_len}` as far as the bounds reach.
pub fn finalized_language(inst: &FinalizationInstance, max_len: usize, bounds: &SearchBounds) -> FinalizedLanguage {
    let g = &inst.g;
    let fin = inst.bound();
    let clear = clearable(g, fin.w_set());
    let mut found: std::collections::HashMap<Vec<SymbolId>, usize> = std::collections::HashMap::new();
    let explored = breadth_first(
        g,
        bounds,
        |form| {
            form.iter().filter(|&&s| g.is_terminal(s)).count() <= max_len
                && form.iter().all(|s| clear[s.index()])
                && fin.viable(form)
        },
        |node, form| {
            if word_final(g, &fin, form) {
                found.entry(terminal_projection(g, form)).or_insert(node);
            }
            Flow::Continue
        },
    );
    let set = explored.set;
    let mut words: Vec<FinalizedWord> = found
        .into_iter()
        .map(|(word, node)| FinalizedWord { word, certificate: Certificate { trace: set.trace(node), form: set.sentential_form(node) } })
        .collect();
    words.sort_by(|a, b| crate::grammar::shortlex(g, &a.word, &b.word));
    let complete = !set.truncated && (!set.cut_by_bounds || covered(g, max_len, bounds));
    FinalizedLanguage { words, complete, truncated: set.truncated }
}

fn covered(g: &Cfg, max_len: usize, bounds: &SearchBounds) -> bool {
    completeness_bound(g, max_len).is_some_and(|b| bounds.dominates(b.max_form_len, b.max_steps))
}

/// Searches for a final form whose terminal projection is `target` and
/// whose nonterminals all lie in `W`.
pub fn finalized_member_bounded(inst: &FinalizationInstance, target: &[Symbol], bounds: &SearchBounds) -> Verdict<Certificate> {
    let g = &inst.g;
    let Some(target) = resolve_target(g, target) else {
        return Verdict::ExhaustedComplete;
    };
    let fin = inst.bound();
    let clear = clearable(g, fin.w_set());
    let explored = breadth_first(
        g,
        bounds,
        |form| form.iter().all(|s| clear[s.index()]) && skeleton_fits(g, form, &target) && fin.viable(form),
        |_, form| {
            if word_final(g, &fin, form) && terminal_projection(g, form) == target {
                Flow::Stop
            } else {
                Flow::Continue
            }
        },
    );
    let set = explored.set;
    match explored.stopped_at {
        Some(node) => Verdict::Found(Certificate { trace: set.trace(node), form: set.sentential_form(node) }),
        None if !set.truncated && (!set.cut_by_bounds || covered(g, target.len(), bounds)) => Verdict::ExhaustedComplete,
        None => Verdict::ExhaustedTruncated,
    }
}

fn resolve_target(g: &Cfg, target: &[Symbol]) -> Option<Vec<SymbolId>> {
    target.iter().map(|s| g.id_of(s).filter(|&id| g.is_terminal(id))).collect()
}

/// Iterative deepening: starts small and doubles `max_form_len` and
/// `max_steps` until the target is found, the search is complete, the node
/// cap is hit, or the step bound passes `max_steps_limit`.
pub fn finalized_member_deepening(
    inst: &FinalizationInstance,
    target: &[Symbol],
    node_cap: usize,
    max_steps_limit: usize,
) -> Verdict<Certificate> {
    let mut bounds = SearchBounds::new(target.len() + 2, target.len() + 2).with_node_cap(node_cap);
    loop {
        match finalized_member_bounded(inst, target, &bounds) {
            Verdict::ExhaustedTruncated if bounds.max_steps < max_steps_limit => {
                bounds.max_form_len *= 2;
                bounds.max_steps *= 2;
            }
            v => return v,
        }
    }
}

/// Runs [`finalized_member_bounded`] for every target.
pub fn finalized_members_batch(
    inst: &FinalizationInstance,
    targets: &[Vec<Symbol>],
    bounds: &SearchBounds,
    exec: Exec,
) -> Vec<Verdict<Certificate>> {
    exec::map(exec, targets, |t| finalized_member_bounded(inst, t, bounds))
}

/// Exact membership for a regular final language, through the equivalent
/// ordinary grammar `H`.
#[derive(Debug, Clone)]
pub struct RegularVerdict {
    pub h: Cfg,
    /// A derivation of the target in `H`, when it is a member.
    pub trace: Option<DerivationTrace>,
}

pub fn finalized_member_regular(g: &Cfg, m: &Dfa, target: &[Symbol]) -> Result<RegularVerdict, ConstructionError> {
    let h = build_finalized_cfg(g, m)?;
    let trace = h.ids(target).and_then(|w| cfg_member(&h, &w));
    Ok(RegularVerdict { h, trace })
}

/// Checks that a certificate replays to a form contributing `word`.
pub fn check_certificate(inst: &FinalizationInstance, cert: &Certificate, word: &[SymbolId]) -> bool {
    let g = &inst.g;
    let fin = inst.bound();
    match cert.trace.result(g) {
        Ok(form) => {
            form == cert.form
                && word_final(g, &fin, &form)
                && project(&form, &g.terminal_set()).0 == word
        }
        Err(_) => false,
    }
}
