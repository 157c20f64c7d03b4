use std::collections::BTreeSet;

use thiserror::Error;

use crate::exec::{self, Exec};
use crate::grammar::{cfg_member, Cfg, SymbolId};

/// Work limit for exact language enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LanguageBudget {
    /// Maximum number of candidate strings (`Σ_{l ≤ k} |T|^l`) for the
    /// membership sweep, and of stored strings for the fixpoint.
    pub max_work: u64,
}

impl Default for LanguageBudget {
    fn default() -> Self {
        LanguageBudget { max_work: 10_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanguageError {
    #[error("language enumeration exceeds the work budget ({work} > {budget})")]
    BudgetExceeded { work: u64, budget: u64 },
}

/// Words ordered by length, then lexicographically by symbol name.
pub(crate) fn shortlex(g: &Cfg, a: &[SymbolId], b: &[SymbolId]) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.iter().map(|&s| g.symbol(s)).cmp(b.iter().map(|&s| g.symbol(s)))
    })
}

/// `L(g) ∩ T^{≤max_len}`, exactly.
///
/// Computes, per nonterminal, the set of terminal strings of length at most
/// `max_len` it derives, as a least fixpoint over the rules. Length never
/// decreases under concatenation, so truncating at `max_len` is exact;
/// ε-rules and unit cycles simply converge.
pub fn enumerate_language(g: &Cfg, max_len: usize, budget: LanguageBudget) -> Result<Vec<Vec<SymbolId>>, LanguageError> {
    let mut sets: Vec<BTreeSet<Vec<SymbolId>>> = vec![BTreeSet::new(); g.symbol_count()];
    let mut stored = 0u64;
    loop {
        let mut changed = false;
        for rule in g.rules() {
            let mut partial: Vec<Vec<SymbolId>> = vec![Vec::new()];
            for &x in &rule.rhs {
                let mut next = Vec::new();
                if g.is_terminal(x) {
                    for mut p in partial {
                        if p.len() < max_len {
                            p.push(x);
                            next.push(p);
                        }
                    }
                } else {
                    for p in &partial {
                        for s in &sets[x.index()] {
                            if p.len() + s.len() <= max_len {
                                let mut c = p.clone();
                                c.extend_from_slice(s);
                                next.push(c);
                            }
                        }
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            for w in partial {
                if sets[rule.lhs.index()].insert(w) {
                    changed = true;
                    stored += 1;
                    if stored > budget.max_work {
                        return Err(LanguageError::BudgetExceeded { work: stored, budget: budget.max_work });
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut out: Vec<Vec<SymbolId>> = std::mem::take(&mut sets[g.start().index()]).into_iter().collect();
    out.sort_by(|a, b| shortlex(g, a, b));
    Ok(out)
}

/// Same set as [`enumerate_language`], computed by running [`cfg_member`] on
/// every candidate string over `T` up to `max_len`.
pub fn enumerate_language_by_membership(g: &Cfg, max_len: usize, budget: LanguageBudget) -> Result<Vec<Vec<SymbolId>>, LanguageError> {
    enumerate_language_by_membership_with(g, max_len, budget, Exec::default())
}

pub fn enumerate_language_by_membership_with(
    g: &Cfg,
    max_len: usize,
    budget: LanguageBudget,
    exec: Exec,
) -> Result<Vec<Vec<SymbolId>>, LanguageError> {
    let t = g.terminals();
    let mut work = 0u64;
    let mut layer = 1u64;
    for _ in 0..=max_len {
        work = work.saturating_add(layer);
        layer = layer.saturating_mul(t.len() as u64);
    }
    if work > budget.max_work {
        return Err(LanguageError::BudgetExceeded { work, budget: budget.max_work });
    }
    let mut sorted: Vec<SymbolId> = t.to_vec();
    sorted.sort_by(|a, b| g.symbol(*a).cmp(g.symbol(*b)));
    let mut out = Vec::new();
    let mut current: Vec<Vec<SymbolId>> = vec![Vec::new()];
    for len in 0..=max_len {
        let accepted = exec::map(exec, &current, |w| cfg_member(g, w).is_some());
        out.extend(current.iter().zip(accepted).filter(|(_, ok)| *ok).map(|(w, _)| w.clone()));
        if len == max_len {
            break;
        }
        // Extending in sorted order keeps each layer in lexicographic order.
        current = current
            .iter()
            .flat_map(|w| {
                sorted.iter().map(move |&s| {
                    let mut c = w.clone();
                    c.push(s);
                    c
                })
            })
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    fn render_all(g: &Cfg, ws: &[Vec<SymbolId>]) -> Vec<String> {
        ws.iter().map(|w| g.render(w)).collect()
    }

    #[test]
    fn palindromes_up_to_three() {
        let h = parse_grammar(include_str!("../../tests/data/pal01.cfg")).unwrap();
        let l = enumerate_language(&h, 3, LanguageBudget::default()).unwrap();
        assert_eq!(render_all(&h, &l), ["#", "0#0", "1#1"]);
    }

    #[test]
    fn unfolding_twice() {
        let g = parse_grammar(include_str!("../../tests/data/g0.cfg")).unwrap();
        let l = enumerate_language(&g, 5, LanguageBudget::default()).unwrap();
        assert_eq!(render_all(&g, &l), ["#", "0#1", "00#11"]);
        assert_eq!(enumerate_language_by_membership(&g, 5, LanguageBudget::default()).unwrap(), l);
    }

    #[test]
    fn no_terminating_derivation() {
        let g = parse_grammar("kind: cfg\nterminals: a\nnonterminals: S\nstart: S\nrule: S -> a S\n").unwrap();
        assert!(enumerate_language(&g, 6, LanguageBudget::default()).unwrap().is_empty());
    }

    #[test]
    fn budget_is_enforced() {
        let g = parse_grammar(include_str!("../../tests/data/ex1.cfg")).unwrap();
        let err = enumerate_language_by_membership(&g, 8, LanguageBudget { max_work: 1000 }).unwrap_err();
        assert!(matches!(err, LanguageError::BudgetExceeded { .. }));
    }

    #[test]
    fn sequential_and_parallel_sweeps_agree() {
        let g = parse_grammar(include_str!("../../tests/data/pal01.cfg")).unwrap();
        let a = enumerate_language_by_membership_with(&g, 5, LanguageBudget::default(), Exec::Sequential).unwrap();
        let b = enumerate_language_by_membership_with(&g, 5, LanguageBudget::default(), Exec::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
