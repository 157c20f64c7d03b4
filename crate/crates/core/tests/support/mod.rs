//! Seeded random instances shared by the integration tests.
#![allow(dead_code)]

use finalform::final_lang::{parse_dfa, Dfa};
use finalform::grammar::{parse_grammar, Cfg};
use finalform::symbol::{sym, Symbol};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

pub fn read_data(name: &str) -> String {
    std::fs::read_to_string(data(name)).unwrap()
}

pub fn names(word: &[Symbol]) -> String {
    word.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ")
}

/// A propagating grammar with at most 4 nonterminals (`S` first), 3
/// terminals, 8 rules and right-hand sides of length at most 3. Every
/// nonterminal has a rule.
pub fn random_propagating_cfg(rng: &mut Rng8) -> Cfg {
    let nonterminals = ["S", "A", "B", "C"];
    let terminals = ["a", "b", "c"];
    let n = rng.gen_range(1..=4);
    let t = rng.gen_range(1..=3);
    let symbols: Vec<&str> = terminals[..t].iter().chain(&nonterminals[..n]).copied().collect();
    let target = rng.gen_range(n.max(2)..=8);
    let mut rules: Vec<(usize, Vec<&str>)> = Vec::new();
    let mut attempts = 0;
    while rules.len() < target && attempts < 100 {
        attempts += 1;
        // The first rules give every nonterminal one rule, the first of
        // which ends in terminals only so something is productive.
        let lhs = if rules.len() < n { rules.len() } else { rng.gen_range(0..n) };
        let len = rng.gen_range(1..=3);
        let rhs: Vec<&str> = if rules.is_empty() {
            (0..len).map(|_| terminals[rng.gen_range(0..t)]).collect()
        } else {
            (0..len).map(|_| *symbols.choose(rng).unwrap()).collect()
        };
        if !rules.iter().any(|(l, r)| *l == lhs && *r == rhs) {
            rules.push((lhs, rhs));
        }
    }
    let mut text = format!("kind: cfg\nterminals: {}\nnonterminals: {}\nstart: S\n", terminals[..t].join(" "), nonterminals[..n].join(" "));
    for (lhs, rhs) in rules {
        text.push_str(&format!("rule: {} -> {}\n", nonterminals[lhs], rhs.join(" ")));
    }
    parse_grammar(&text).unwrap()
}

/// A nonempty random subset of the grammar's symbols.
pub fn random_w(rng: &mut Rng8, g: &Cfg) -> Vec<Symbol> {
    let all: Vec<Symbol> = (0..g.symbol_count()).map(|i| g.symbol(finalform::grammar::SymbolId(i as u32)).clone()).collect();
    loop {
        let w: Vec<Symbol> = all.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
        if !w.is_empty() {
            return w;
        }
    }
}

/// A total DFA with 1 to 3 states over `alphabet`.
pub fn random_dfa(rng: &mut Rng8, alphabet: &[Symbol]) -> Dfa {
    let k = rng.gen_range(1..=3);
    let states: Vec<String> = (0..k).map(|i| format!("q{i}")).collect();
    let finals: Vec<&str> = states.iter().filter(|_| rng.gen_bool(0.5)).map(String::as_str).collect();
    let mut text = format!(
        "kind: dfa\nstates: {}\nalphabet: {}\nstart: q0\nfinal: {}\n",
        states.join(" "),
        names(alphabet),
        finals.join(" ")
    );
    for p in &states {
        for a in alphabet {
            text.push_str(&format!("trans: {p} {a} {}\n", states[rng.gen_range(0..k)]));
        }
    }
    parse_dfa(&text).unwrap()
}

pub fn symbol(name: &str) -> Symbol {
    sym(name)
}
