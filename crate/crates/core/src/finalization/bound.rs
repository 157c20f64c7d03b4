use crate::grammar::Cfg;

/// Search bounds that provably cover every derivation of a word of length
/// at most `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletenessBound {
    pub max_form_len: usize,
    pub max_steps: usize,
}

/// Bounds covering all derivations whose final form has at most
/// `max_target_len` terminals, or `None` when no such bound is known.
///
/// Applies to propagating grammars in which every rule either emits a
/// terminal or is a unit rule `A -> B`, with no cycle of unit rules.
/// Terminals are never erased, so a derivation has at most `L` emitting
/// steps, each lengthening the form by at most `r - 1` (`r` the longest
/// rhs). At most `1 + L·r` nonterminal occurrences are ever created, and
/// each undergoes at most `u` unit steps (`u` the longest unit chain).
pub fn completeness_bound(g: &Cfg, max_target_len: usize) -> Option<CompletenessBound> {
    let mut unit_edges = vec![Vec::new(); g.symbol_count()];
    let mut r = 1;
    for rule in g.rules() {
        if rule.rhs.is_empty() {
            return None;
        }
        r = r.max(rule.rhs.len());
        let emits = rule.rhs.iter().any(|&s| g.is_terminal(s));
        match rule.rhs.as_slice() {
            [b] if !g.is_terminal(*b) => unit_edges[rule.lhs.index()].push(b.index()),
            _ if emits => {}
            _ => return None,
        }
    }
    let u = longest_path(&unit_edges)?;
    let l = max_target_len;
    Some(CompletenessBound { max_form_len: 1 + l * (r - 1), max_steps: l + (1 + l * r) * u })
}

/// Longest path (in edges) of a directed graph, `None` on a cycle.
fn longest_path(edges: &[Vec<usize>]) -> Option<usize> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done(usize),
    }
    fn visit(v: usize, edges: &[Vec<usize>], marks: &mut [Mark]) -> Option<usize> {
        match marks[v] {
            Mark::Done(d) => return Some(d),
            Mark::Active => return None,
            Mark::New => {}
        }
        marks[v] = Mark::Active;
        let mut best = 0;
        for &w in &edges[v] {
            best = best.max(1 + visit(w, edges, marks)?);
        }
        marks[v] = Mark::Done(best);
        Some(best)
    }
    let mut marks = vec![Mark::New; edges.len()];
    let mut best = 0;
    for v in 0..edges.len() {
        best = best.max(visit(v, edges, &mut marks)?);
    }
    Some(best)
}
