//! Breadth-first search over `(queue, state)` pairs.
//!
//! The consumed history never influences what happens next, so
//! configurations are deduplicated on queue and state alone; the history of
//! the first (shortest) path is recovered from parent links.

use std::collections::HashMap;

use indexmap::IndexSet;

use crate::finalization::Verdict;
use crate::queue::{Lqg, QueueTrace};
use crate::symbol::Symbol;

/// Limits for queue-grammar searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QueueBounds {
    pub max_steps: usize,
    /// Longest queue kept; `None` means `2·L + 8` for target length `L`.
    pub queue_cap: Option<usize>,
    pub node_cap: usize,
}

impl Default for QueueBounds {
    fn default() -> Self {
        QueueBounds { max_steps: 64, queue_cap: None, node_cap: 1_000_000 }
    }
}

impl QueueBounds {
    fn cap_for(&self, len: usize) -> usize {
        self.queue_cap.unwrap_or(2 * len + 8)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueWord {
    pub word: Vec<Symbol>,
    pub trace: QueueTrace,
}

/// Words of length at most `max_len` found by [`lqg_enumerate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueLanguage {
    /// Shortlex order, each with its shortest derivation.
    pub words: Vec<QueueWord>,
    /// Every generated word of length at most `max_len` is listed.
    pub complete: bool,
    /// The node cap was reached.
    pub truncated: bool,
}

type Node = (Vec<usize>, usize);

struct Explorer<'g> {
    g: &'g Lqg,
    by_head: HashMap<(usize, usize), Vec<usize>>,
    /// Least number of output symbols each grammar symbol can end up as.
    min_yield: Vec<usize>,
    /// No rule reads a terminal, so terminals in the queue are output.
    terminals_stay: bool,
}

impl<'g> Explorer<'g> {
    fn new(g: &'g Lqg) -> Self {
        let mut by_head: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, (a, b, _, _)) in g.coded.iter().enumerate() {
            by_head.entry((*a, *b)).or_default().push(i);
        }
        let mut min_yield: Vec<usize> = g.terminal.iter().map(|&t| if t { 1 } else { usize::MAX }).collect();
        loop {
            let mut changed = false;
            for (a, _, x, _) in &g.coded {
                let sum = x.iter().fold(0usize, |acc, &s| acc.saturating_add(min_yield[s]));
                if sum < min_yield[*a] {
                    min_yield[*a] = sum;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let terminals_stay = g.coded.iter().all(|(a, ..)| !g.terminal[*a]);
        Explorer { g, by_head, min_yield, terminals_stay }
    }

    fn yield_bound(&self, queue: &[usize]) -> usize {
        queue.iter().fold(0usize, |acc, &s| acc.saturating_add(self.min_yield[s]))
    }

    fn is_word(&self, node: &Node) -> bool {
        self.g.fin[node.1] && node.0.iter().all(|&s| self.g.terminal[s])
    }

    /// Runs the search. `admit` prunes queues; `accept` sees each word
    /// configuration and returns true to stop.
    fn run(
        &self,
        bounds: &QueueBounds,
        cap: usize,
        admit: impl Fn(&[usize]) -> bool,
        mut accept: impl FnMut(usize, &Node) -> bool,
    ) -> Search {
        let (a0, q0) = self.g.start;
        let mut nodes: IndexSet<Node> = IndexSet::new();
        let mut parent: Vec<Option<(usize, usize)>> = Vec::new();
        let mut cut = false;
        let mut truncated = false;
        let start = (vec![a0], q0);
        if !admit(&start.0) {
            return Search { nodes, parent, cut, truncated, stopped: None };
        }
        nodes.insert(start);
        parent.push(None);
        let mut level = 0..1;
        for depth in 0..=bounds.max_steps {
            let level_end = nodes.len();
            for id in level.clone() {
                let node = nodes.get_index(id).expect("node").clone();
                if self.g.fin[node.1] {
                    if self.is_word(&node) && accept(id, &node) {
                        return Search { nodes, parent, cut, truncated, stopped: Some(id) };
                    }
                    continue;
                }
                let Some(rules) = node.0.first().and_then(|&h| self.by_head.get(&(h, node.1))) else { continue };
                if depth == bounds.max_steps {
                    cut = true;
                    continue;
                }
                for &r in rules {
                    let (_, _, x, c) = &self.g.coded[r];
                    let mut queue = Vec::with_capacity(node.0.len() - 1 + x.len());
                    queue.extend_from_slice(&node.0[1..]);
                    queue.extend_from_slice(x);
                    if !admit(&queue) {
                        continue;
                    }
                    if queue.len() > cap {
                        cut = true;
                        continue;
                    }
                    if nodes.len() >= bounds.node_cap {
                        truncated = true;
                        return Search { nodes, parent, cut, truncated, stopped: None };
                    }
                    if nodes.insert((queue, *c)) {
                        parent.push(Some((id, r)));
                    }
                }
            }
            if level_end == nodes.len() {
                break;
            }
            level = level_end..nodes.len();
        }
        Search { nodes, parent, cut, truncated, stopped: None }
    }
}

struct Search {
    nodes: IndexSet<Node>,
    parent: Vec<Option<(usize, usize)>>,
    cut: bool,
    truncated: bool,
    stopped: Option<usize>,
}

impl Search {
    fn trace(&self, mut id: usize) -> QueueTrace {
        let mut rules = Vec::new();
        while let Some((p, r)) = self.parent[id] {
            rules.push(r);
            id = p;
        }
        rules.reverse();
        QueueTrace { rules }
    }
}

/// Words of `L(g)` of length at most `max_len`, by bounded search.
pub fn lqg_enumerate(g: &Lqg, max_len: usize, bounds: &QueueBounds) -> QueueLanguage {
    let ex = Explorer::new(g);
    let mut hits = Vec::new();
    let s = ex.run(
        bounds,
        bounds.cap_for(max_len),
        |q| ex.yield_bound(q) <= max_len,
        |id, node| {
            if node.0.len() <= max_len {
                hits.push(id);
            }
            false
        },
    );
    let mut words: Vec<QueueWord> = hits
        .into_iter()
        .map(|id| {
            let (queue, _) = s.nodes.get_index(id).expect("node");
            QueueWord { word: queue.iter().map(|&i| g.v[i].clone()).collect(), trace: s.trace(id) }
        })
        .collect();
    words.sort_by(|a, b| a.word.len().cmp(&b.word.len()).then_with(|| a.word.cmp(&b.word)));
    words.dedup_by(|a, b| a.word == b.word);
    QueueLanguage { words, complete: !s.cut && !s.truncated, truncated: s.truncated }
}

/// Decides `target ∈ L(g)` within `bounds`.
pub fn lqg_member_bounded(g: &Lqg, target: &[Symbol], bounds: &QueueBounds) -> Verdict<QueueTrace> {
    let Some(target): Option<Vec<usize>> = target
        .iter()
        .map(|t| g.v.iter().position(|s| s == t).filter(|&i| g.terminal[i]))
        .collect()
    else {
        return Verdict::ExhaustedComplete;
    };
    let ex = Explorer::new(g);
    let prefix_ok = |q: &[usize]| {
        let mut out = q.iter().filter(|&&s| g.terminal[s]);
        let mut i = 0;
        out.all(|&s| {
            i += 1;
            target.get(i - 1) == Some(&s)
        })
    };
    let s = ex.run(
        bounds,
        bounds.cap_for(target.len()),
        |q| ex.yield_bound(q) <= target.len() && (!ex.terminals_stay || prefix_ok(q)),
        |_, node| node.0 == target,
    );
    match s.stopped {
        Some(id) => Verdict::Found(s.trace(id)),
        None if !s.cut && !s.truncated => Verdict::ExhaustedComplete,
        None => Verdict::ExhaustedTruncated,
    }
}
