use crate::grammar::{Cfg, SymbolId};
use crate::symbol::Symbol;

/// Structural properties of a grammar, recomputable from the grammar alone.
///
/// `linear` counts every nonterminal. `rewrite_linear` only counts
/// nonterminals that have rules: symbols outside `T` that are never rewritten
/// behave like inert letters, and grammars produced by the queue-grammar
/// construction rely on such letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassificationReport {
    pub propagating: bool,
    pub linear: bool,
    pub rewrite_linear: bool,
    pub minimal_linear: bool,
    pub palindromial: bool,
    /// The `#` of a minimal linear grammar.
    pub marker: Option<Symbol>,
}

pub fn classify(g: &Cfg) -> ClassificationReport {
    let rules = g.rules();
    let propagating = rules.iter().all(|r| !r.rhs.is_empty());
    let count = |rhs: &[SymbolId], pred: &dyn Fn(SymbolId) -> bool| rhs.iter().filter(|&&s| pred(s)).count();
    let linear = rules.iter().all(|r| count(&r.rhs, &|s| !g.is_terminal(s)) <= 1);
    let rewrite_linear = rules.iter().all(|r| count(&r.rhs, &|s| g.is_rewritable(s)) <= 1);

    let marker = minimal_linear_marker(g, linear);
    let minimal_linear = marker.is_some();
    let palindromial = match marker {
        Some(m) => rules.len() >= 2 && rules.iter().filter(|r| r.rhs != [m]).all(|r| is_mirrored_pair(g, &r.rhs)),
        None => false,
    };
    ClassificationReport {
        propagating,
        linear,
        rewrite_linear,
        minimal_linear,
        palindromial,
        marker: marker.map(|m| g.symbol(m).clone()),
    }
}

/// `N = {S}`, a unique terminal-only rule `S -> #` with `# ∈ T`, and `#`
/// absent from every other rule.
fn minimal_linear_marker(g: &Cfg, linear: bool) -> Option<SymbolId> {
    if !linear || g.nonterminals() != [g.start()] {
        return None;
    }
    let mut terminal_rules = g.rules().iter().filter(|r| r.rhs.iter().all(|&s| g.is_terminal(s)));
    let only = terminal_rules.next()?;
    if terminal_rules.next().is_some() || only.rhs.len() != 1 {
        return None;
    }
    let marker = only.rhs[0];
    let reused = g.rules().iter().filter(|r| !std::ptr::eq(*r, only)).any(|r| r.rhs.contains(&marker));
    (!reused).then_some(marker)
}

/// `S -> a S a` with a single terminal `a`.
pub(crate) fn is_mirrored_pair(g: &Cfg, rhs: &[SymbolId]) -> bool {
    rhs.len() == 3 && rhs[1] == g.start() && rhs[0] == rhs[2] && g.is_terminal(rhs[0])
}
