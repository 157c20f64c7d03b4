//! Compiling a normal-form left-extended queue grammar `Q` into a
//! propagating CFG `G` with `L(Q) = L(G, {w#wᴿ : w ∈ {0,1}*})`.
//!
//! Every pair `aq` read by some rule gets a binary codeword `ι(aq)`. While
//! `G` simulates `Q`, the left of its single nonterminal collects the codes
//! of the appended symbols, paired with the state that will read them, and
//! the right collects, reversed, the code of each pair actually read. The
//! final language then forces both sequences to agree.

use std::fmt;

use indexmap::IndexSet;
use thiserror::Error;

use crate::final_lang::FinalLanguage;
use crate::grammar::{Cfg, GrammarError};
use crate::queue::Lqg;
use crate::symbol::{sym, Symbol};

#[cfg(test)]
mod tests;

/// Symbols the compiled grammar reserves for itself.
pub const ZERO: &str = "0";
pub const ONE: &str = "1";
pub const MARKER: &str = "#";
pub const START: &str = "S";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReError {
    #[error("rule {rule} appends a mix of terminals and nonterminals (normal form required)")]
    NotNormalForm { rule: usize },
    #[error("no rule reads a nonterminal in a non-final state, so there is nothing to encode")]
    EmptyPsi,
    #[error("`{0}` is used by the queue grammar but reserved by the construction; rename it")]
    Collision(Symbol),
    #[error("`{0}` uses the reserved `<...>` spelling")]
    ReservedSpelling(Symbol),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
}

/// Pairs `aq` with `(a, q, x, p) ∈ R`, `a ∈ V−T`, `q ∈ U−D`, ordered by
/// `(a, q)` token names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsiSet(Vec<(Symbol, Symbol)>);

impl PsiSet {
    pub fn pairs(&self) -> &[(Symbol, Symbol)] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn position(&self, a: &Symbol, q: &Symbol) -> Option<usize> {
        self.0.iter().position(|(x, y)| x == a && y == q)
    }
}

fn check_normal_form(q: &Lqg) -> Result<(), ReError> {
    match q.normal_form().offending {
        Some(i) => Err(ReError::NotNormalForm { rule: i + 1 }),
        None => Ok(()),
    }
}

pub fn build_psi(q: &Lqg) -> Result<PsiSet, ReError> {
    check_normal_form(q)?;
    let mut pairs: Vec<(Symbol, Symbol)> = q
        .rules()
        .iter()
        .filter(|r| !q.is_terminal(&r.a) && !q.is_final(&r.b))
        .map(|r| (r.a.clone(), r.b.clone()))
        .collect();
    pairs.sort();
    pairs.dedup();
    Ok(PsiSet(pairs))
}

/// The injection `ι` from `Ψ` into `{0,1}ⁿ − {1ⁿ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingScheme {
    n: usize,
    psi: PsiSet,
    codes: Vec<Vec<Symbol>>,
}

impl EncodingScheme {
    pub fn width(&self) -> usize {
        self.n
    }

    pub fn psi(&self) -> &PsiSet {
        &self.psi
    }

    pub fn iota(&self, a: &Symbol, q: &Symbol) -> Option<&[Symbol]> {
        self.psi.position(a, q).map(|i| &self.codes[i][..])
    }

    /// `(a, q, codeword)` in `Ψ` order.
    pub fn entries(&self) -> impl Iterator<Item = (&Symbol, &Symbol, &[Symbol])> + '_ {
        self.psi.0.iter().zip(&self.codes).map(|((a, q), c)| (a, q, &c[..]))
    }

    /// Sidecar lines `iota: A q0 -> 010`.
    pub fn render(&self) -> String {
        self.entries().map(|(a, q, c)| format!("iota: {a} {q} -> {}\n", bits(c))).collect()
    }
}

fn bits(code: &[Symbol]) -> String {
    code.iter().map(Symbol::as_str).collect()
}

/// Smallest `n ≥ 1` with `2ⁿ − 1 ≥ |Ψ|`; the i-th pair gets i in binary.
pub fn build_encoding(psi: PsiSet) -> Result<EncodingScheme, ReError> {
    if psi.is_empty() {
        return Err(ReError::EmptyPsi);
    }
    let mut n = 1;
    while (1usize << n) - 1 < psi.len() {
        n += 1;
    }
    let (zero, one) = (sym(ZERO), sym(ONE));
    let codes = (0..psi.len())
        .map(|i| (0..n).rev().map(|b| if i >> b & 1 == 1 { one.clone() } else { zero.clone() }).collect())
        .collect();
    Ok(EncodingScheme { n, psi, codes })
}

/// `ν(a) = {ι(aq) : aq ∈ Ψ}` and `μ(q) = {ι(aq)ᴿ : aq ∈ Ψ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionTables {
    nu: Vec<(Symbol, Vec<Vec<Symbol>>)>,
    mu: Vec<(Symbol, Vec<Vec<Symbol>>)>,
}

impl SubstitutionTables {
    pub fn new(q: &Lqg, e: &EncodingScheme) -> Self {
        let nu = q
            .symbols()
            .iter()
            .map(|a| (a.clone(), e.entries().filter(|(x, _, _)| *x == a).map(|(_, _, c)| c.to_vec()).collect()))
            .collect();
        let mu = q
            .states()
            .iter()
            .map(|p| {
                let codes = e.entries().filter(|(_, y, _)| *y == p).map(|(_, _, c)| c.iter().rev().cloned().collect()).collect();
                (p.clone(), codes)
            })
            .collect();
        SubstitutionTables { nu, mu }
    }

    pub fn nu(&self, a: &Symbol) -> &[Vec<Symbol>] {
        self.nu.iter().find(|(x, _)| x == a).map_or(&[], |(_, c)| c)
    }

    pub fn mu(&self, q: &Symbol) -> &[Vec<Symbol>] {
        self.mu.iter().find(|(x, _)| x == q).map_or(&[], |(_, c)| c)
    }

    /// `ν(y₁⋯yₖ) = ν(y₁)⋯ν(yₖ)`, in lexicographic order of the choices.
    pub fn nu_word(&self, y: &[Symbol]) -> Vec<Vec<Symbol>> {
        let mut out = vec![Vec::new()];
        for a in y {
            let options = self.nu(a);
            out = out
                .iter()
                .flat_map(|prefix| {
                    options.iter().map(move |c| {
                        let mut w = prefix.clone();
                        w.extend(c.iter().cloned());
                        w
                    })
                })
                .collect();
        }
        out
    }
}

/// A nonterminal `<p.i>` of the compiled grammar.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JSymbol {
    pub state: Symbol,
    pub phase: u8,
}

impl JSymbol {
    pub fn token(&self) -> Symbol {
        sym(&format!("<{}.{}>", self.state, self.phase))
    }

    pub fn parse(s: &Symbol) -> Option<JSymbol> {
        let inner = s.as_str().strip_prefix('<')?.strip_suffix('>')?;
        let (state, phase) = inner.rsplit_once('.')?;
        let phase = match phase {
            "1" => 1,
            "2" => 2,
            _ => return None,
        };
        Some(JSymbol { state: Symbol::new(state).ok()?, phase })
    }
}

/// Shapes of `Q` under which `G` can generate words `Q` does not, or miss
/// words `Q` does generate. The construction is still carried out literally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Caveat {
    /// State `q` reads several symbols. The code guessed for the next read
    /// is not tied to the rule that performs it, so `G` may over-generate.
    SharedState { state: Symbol, symbols: Vec<Symbol> },
    /// A rule appends nothing and stays outside `D`. `G` does not check that
    /// the queue is non-empty, so it may over-generate.
    EmptyAppend { rule: usize },
    /// A rule reading the start pair appends terminals and enters `D`. No
    /// step covers such one-step derivations, so `G` misses their words.
    UncoveredStartRule { rule: usize },
}

impl fmt::Display for Caveat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Caveat::SharedState { state, symbols } => {
                let s: Vec<&str> = symbols.iter().map(Symbol::as_str).collect();
                write!(f, "state `{state}` reads several symbols ({}); the compiled grammar may generate extra words", s.join(", "))
            }
            Caveat::EmptyAppend { rule } => {
                write!(f, "rule {rule} appends eps outside D; the compiled grammar may generate extra words")
            }
            Caveat::UncoveredStartRule { rule } => {
                write!(f, "rule {rule} reads the start pair and accepts at once; its word is not generated by the compiled grammar")
            }
        }
    }
}

pub fn re_caveats(q: &Lqg, psi: &PsiSet) -> Vec<Caveat> {
    let mut out = Vec::new();
    for state in q.states() {
        let symbols: Vec<Symbol> = psi.pairs().iter().filter(|(_, p)| p == state).map(|(a, _)| a.clone()).collect();
        if symbols.len() > 1 {
            out.push(Caveat::SharedState { state: state.clone(), symbols });
        }
    }
    let (s, q0) = q.start();
    for (i, r) in q.rules().iter().enumerate() {
        if r.x.is_empty() && !q.is_final(&r.c) {
            out.push(Caveat::EmptyAppend { rule: i + 1 });
        }
        if (&r.a, &r.b) == (s, q0) && q.is_final(&r.c) && r.x.iter().all(|a| q.is_terminal(a)) {
            out.push(Caveat::UncoveredStartRule { rule: i + 1 });
        }
    }
    out
}

/// Result of [`build_re_cfg`].
#[derive(Debug, Clone)]
pub struct ReCompilation {
    pub g: Cfg,
    /// `{w#wᴿ : w ∈ {0,1}*}`.
    pub final_language: FinalLanguage,
    pub encoding: EncodingScheme,
    pub tables: SubstitutionTables,
    pub caveats: Vec<Caveat>,
}

fn check_names(q: &Lqg) -> Result<(), ReError> {
    for s in q.symbols().iter().chain(q.states()) {
        if s.is_reserved_spelling() {
            return Err(ReError::ReservedSpelling(s.clone()));
        }
        if [ZERO, ONE, MARKER].contains(&s.as_str()) {
            return Err(ReError::Collision(s.clone()));
        }
    }
    if let Some(t) = q.terminals().into_iter().find(|t| t.as_str() == START) {
        return Err(ReError::Collision(t));
    }
    Ok(())
}

pub fn build_re_cfg(q: &Lqg) -> Result<ReCompilation, ReError> {
    check_normal_form(q)?;
    check_names(q)?;
    let psi = build_psi(q)?;
    let caveats = re_caveats(q, &psi);
    let encoding = build_encoding(psi)?;
    let tables = SubstitutionTables::new(q, &encoding);

    let live: Vec<&Symbol> = q.states().iter().filter(|p| !q.is_final(p)).collect();
    let j = |p: &Symbol, phase: u8| JSymbol { state: p.clone(), phase }.token();
    let start = sym(START);
    let hash = sym(MARKER);
    let (s0, q0) = q.start();

    let mut rules: IndexSet<(Symbol, Vec<Symbol>)> = IndexSet::new();
    let nonterminal_phase = |x: &[Symbol]| x.iter().all(|a| !q.is_terminal(a));
    let terminal_phase = |x: &[Symbol]| x.iter().all(|a| q.is_terminal(a));
    let mut wrap = |lhs: &Symbol, u: &[Symbol], mid: Symbol, v: &[Symbol]| {
        let mut rhs = u.to_vec();
        rhs.push(mid);
        rhs.extend_from_slice(v);
        rules.insert((lhs.clone(), rhs));
    };
    // Steps 1 and 2: nonterminal phase.
    for first in [true, false] {
        for r in q.rules() {
            if !nonterminal_phase(&r.x) || q.is_final(&r.c) || (first && (&r.a, &r.b) != (s0, q0)) {
                continue;
            }
            let lhs = if first { start.clone() } else { j(&r.b, 1) };
            for u in tables.nu_word(&r.x) {
                for v in tables.mu(&r.c) {
                    wrap(&lhs, &u, j(&r.c, 1), v);
                }
            }
        }
    }
    // Step 3: phase switch.
    for p in &live {
        rules.insert((j(p, 1), vec![j(p, 2)]));
    }
    // Steps 4 and 5: terminal phase.
    for r in q.rules() {
        if !terminal_phase(&r.x) {
            continue;
        }
        if q.is_final(&r.c) {
            let mut rhs = r.x.clone();
            rhs.push(hash.clone());
            rules.insert((j(&r.b, 2), rhs));
        } else {
            for v in tables.mu(&r.c) {
                let mut rhs = r.x.clone();
                rhs.push(j(&r.c, 2));
                rhs.extend(v.iter().cloned());
                rules.insert((j(&r.b, 2), rhs));
            }
        }
    }

    let mut nonterminals = vec![start.clone()];
    nonterminals.extend(live.iter().map(|p| j(p, 1)));
    nonterminals.extend(live.iter().map(|p| j(p, 2)));
    nonterminals.extend([sym(ZERO), sym(ONE), hash.clone()]);
    let g = Cfg::new(q.terminals(), nonterminals, start, rules.into_iter().collect())?;
    let final_language =
        FinalLanguage::marked_palindrome(vec![sym(ZERO), sym(ONE)], hash).expect("0, 1 and # are distinct");
    Ok(ReCompilation { g, final_language, encoding, tables, caveats })
}

/// True iff `form = x y # z` with `x ∈ {0,1}⁺`, `y ∈ T*` and `z = xᴿ`.
pub fn omega_member(form: &[Symbol], t: &[Symbol]) -> bool {
    let bit = |s: &Symbol| s.as_str() == ZERO || s.as_str() == ONE;
    let Some(h) = form.iter().position(|s| s.as_str() == MARKER) else { return false };
    let (left, z) = (&form[..h], &form[h + 1..]);
    let k = left.iter().take_while(|s| bit(s)).count();
    let (x, y) = left.split_at(k);
    !x.is_empty() && y.iter().all(|s| t.contains(s)) && z.len() == x.len() && z.iter().rev().eq(x.iter())
}
