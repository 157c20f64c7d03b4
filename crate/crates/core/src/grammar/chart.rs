//! Exact membership by span tabulation directly over the original rules.
//!
//! A fact `(A, i, j)` records that `A` derives `w[i..j]`. Spans are filled by
//! increasing length; within one span, facts are saturated to a fixpoint so
//! that ε-rules and unit cycles are handled without normalizing the grammar.
//! Each fact is justified only by facts established before it, which keeps
//! the witness structure acyclic and lets us read back a leftmost derivation.

use crate::grammar::{Cfg, DerivationTrace, SymbolId, TraceStep};

#[derive(Debug, Clone)]
struct Witness {
    rule: usize,
    /// Sub-span of each right-hand-side symbol.
    spans: Vec<(usize, usize)>,
}

struct Chart<'g> {
    g: &'g Cfg,
    word: &'g [SymbolId],
    n: usize,
    facts: Vec<Option<Witness>>,
}

impl<'g> Chart<'g> {
    fn slot(&self, a: SymbolId, i: usize, j: usize) -> usize {
        (a.index() * (self.n + 1) + i) * (self.n + 1) + j
    }

    fn known(&self, a: SymbolId, i: usize, j: usize) -> bool {
        self.facts[self.slot(a, i, j)].is_some()
    }

    /// Splits `w[i..j]` among the rhs symbols using established facts.
    fn match_rhs(&self, rhs: &[SymbolId], i: usize, j: usize) -> Option<Vec<(usize, usize)>> {
        // reach[k][p]: rhs[..k] derives w[i..p]; back[k][p] the start of rhs[k-1]'s span.
        let width = j - i + 1;
        let mut reach = vec![vec![false; width]; rhs.len() + 1];
        let mut back = vec![vec![usize::MAX; width]; rhs.len() + 1];
        reach[0][0] = true;
        for (k, &x) in rhs.iter().enumerate() {
            for p in i..=j {
                if !reach[k][p - i] {
                    continue;
                }
                if self.g.is_terminal(x) {
                    if p < j && self.word[p] == x && !reach[k + 1][p + 1 - i] {
                        reach[k + 1][p + 1 - i] = true;
                        back[k + 1][p + 1 - i] = p;
                    }
                } else {
                    for q in p..=j {
                        if !reach[k + 1][q - i] && self.known(x, p, q) {
                            reach[k + 1][q - i] = true;
                            back[k + 1][q - i] = p;
                        }
                    }
                }
            }
        }
        if !reach[rhs.len()][j - i] {
            return None;
        }
        let mut spans = vec![(0, 0); rhs.len()];
        let mut end = j;
        for k in (1..=rhs.len()).rev() {
            let begin = back[k][end - i];
            spans[k - 1] = (begin, end);
            end = begin;
        }
        Some(spans)
    }

    fn fill(&mut self) {
        let rules = self.g.rules();
        for len in 0..=self.n {
            for i in 0..=self.n - len {
                let j = i + len;
                loop {
                    let mut progress = false;
                    for (ri, rule) in rules.iter().enumerate() {
                        if self.known(rule.lhs, i, j) {
                            continue;
                        }
                        // Terminal count is a cheap lower bound on the span.
                        if rule.rhs.iter().filter(|&&s| self.g.is_terminal(s)).count() > len {
                            continue;
                        }
                        if let Some(spans) = self.match_rhs(&rule.rhs, i, j) {
                            let slot = self.slot(rule.lhs, i, j);
                            self.facts[slot] = Some(Witness { rule: ri, spans });
                            progress = true;
                        }
                    }
                    if !progress {
                        break;
                    }
                }
            }
        }
    }

    fn leftmost(&self, a: SymbolId, i: usize, j: usize, steps: &mut Vec<TraceStep>) {
        let w = self.facts[self.slot(a, i, j)].as_ref().expect("fact is established");
        // Everything left of this node is already the terminal prefix w[..i].
        steps.push(TraceStep { rule: w.rule, pos: i });
        let rhs = &self.g.rule(w.rule).rhs;
        for (&x, &(p, q)) in rhs.iter().zip(&w.spans) {
            if !self.g.is_terminal(x) {
                self.leftmost(x, p, q, steps);
            }
        }
    }
}

/// Decides `word ∈ L(g)`; on success returns a leftmost derivation.
///
/// Symbols of `word` that are not terminals of `g` make the answer `None`.
pub fn cfg_member(g: &Cfg, word: &[SymbolId]) -> Option<DerivationTrace> {
    if word.iter().any(|&s| s.index() >= g.symbol_count() || !g.is_terminal(s)) {
        return None;
    }
    let n = word.len();
    let mut chart = Chart { g, word, n, facts: vec![None; g.symbol_count() * (n + 1) * (n + 1)] };
    chart.fill();
    if !chart.known(g.start(), 0, n) {
        return None;
    }
    let mut steps = Vec::new();
    chart.leftmost(g.start(), 0, n, &mut steps);
    Some(DerivationTrace { start: g.start(), steps })
}
