//! Final languages `F ⊆ W*` and their membership tests.

mod dfa;
mod palindromial;

use std::path::Path;

use thiserror::Error;

use crate::grammar::{parse_grammar, Cfg, SymbolId, SymbolSet};
use crate::symbol::Symbol;
use crate::text::ParseError;

pub use dfa::{dfa_run, parse_dfa, print_dfa, Dfa, DfaError};
pub use palindromial::{palg_validate, PalgError, PalindromialGrammar};

/// A final language over its own alphabet `W`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FinalLanguage {
    Regular(Dfa),
    /// `{ u·marker·uᴿ : u ∈ base* }`
    MarkedPalindrome { base: Vec<Symbol>, marker: Symbol },
    /// `{ u·uᴿ : u ∈ base* }`
    EvenPalindrome { base: Vec<Symbol> },
    Palindromial(PalindromialGrammar),
}

#[derive(Debug, Error)]
pub enum FinalSpecError {
    #[error("unrecognised final-language spec `{0}` (expected dfa:, markpal:, evenpal: or palg:)")]
    Unrecognised(String),
    #[error("malformed final-language spec `{spec}`: {reason}")]
    Malformed { spec: String, reason: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Palindromial { path: String, source: PalgError },
}

impl FinalLanguage {
    pub fn marked_palindrome(base: Vec<Symbol>, marker: Symbol) -> Result<Self, String> {
        if base.contains(&marker) {
            return Err(format!("marker `{marker}` is also a base symbol"));
        }
        check_distinct(&base)?;
        Ok(FinalLanguage::MarkedPalindrome { base, marker })
    }

    pub fn even_palindrome(base: Vec<Symbol>) -> Result<Self, String> {
        check_distinct(&base)?;
        Ok(FinalLanguage::EvenPalindrome { base })
    }

    /// Parses `dfa:<path>`, `markpal:<a,b,..>:<marker>`, `evenpal:<a,b,..>`
    /// or `palg:<path>`. Relative paths are resolved against `dir`.
    pub fn from_spec(spec: &str, dir: &Path) -> Result<Self, FinalSpecError> {
        let malformed = |reason: String| FinalSpecError::Malformed { spec: spec.to_string(), reason };
        let (kind, rest) = spec.split_once(':').ok_or_else(|| FinalSpecError::Unrecognised(spec.to_string()))?;
        match kind {
            "dfa" | "palg" => {
                let path = dir.join(rest);
                let shown = path.display().to_string();
                let text = std::fs::read_to_string(&path).map_err(|source| FinalSpecError::Io { path: shown.clone(), source })?;
                if kind == "dfa" {
                    let m = parse_dfa(&text).map_err(|source| FinalSpecError::Parse { path: shown, source })?;
                    Ok(FinalLanguage::Regular(m))
                } else {
                    let g = parse_grammar(&text).map_err(|source| FinalSpecError::Parse { path: shown.clone(), source })?;
                    let p = palg_validate(g).map_err(|source| FinalSpecError::Palindromial { path: shown, source })?;
                    Ok(FinalLanguage::Palindromial(p))
                }
            }
            "markpal" => {
                let (base, marker) = rest.rsplit_once(':').ok_or_else(|| malformed("expected `markpal:<symbols>:<marker>`".into()))?;
                let base = symbol_csv(base).map_err(malformed)?;
                let marker = Symbol::new(marker.trim()).map_err(|e| malformed(e.to_string()))?;
                FinalLanguage::marked_palindrome(base, marker).map_err(malformed)
            }
            "evenpal" => FinalLanguage::even_palindrome(symbol_csv(rest).map_err(malformed)?).map_err(malformed),
            _ => Err(FinalSpecError::Unrecognised(spec.to_string())),
        }
    }

    /// The alphabet `W`.
    pub fn alphabet(&self) -> Vec<Symbol> {
        match self {
            FinalLanguage::Regular(m) => m.alphabet().to_vec(),
            FinalLanguage::MarkedPalindrome { base, marker } => {
                let mut w = base.clone();
                w.push(marker.clone());
                w
            }
            FinalLanguage::EvenPalindrome { base } => base.clone(),
            FinalLanguage::Palindromial(p) => {
                let mut w = p.base().to_vec();
                w.push(p.marker().clone());
                w
            }
        }
    }

    /// Membership on letters, i.e. indices into [`FinalLanguage::alphabet`].
    fn accepts_letters(&self, w: &[usize]) -> bool {
        match self.shape() {
            Shape::Regular(m) => {
                let mut q = m.start();
                for &a in w {
                    q = m.next(q, a);
                }
                m.is_final(q)
            }
            Shape::Palindrome { marker, allowed } => {
                if w.iter().any(|&a| !allowed[a] && Some(a) != marker) {
                    return false;
                }
                let mirrored = w.iter().eq(w.iter().rev());
                match marker {
                    Some(m) => w.len() % 2 == 1 && w[w.len() / 2] == m && w.iter().filter(|&&a| a == m).count() == 1 && mirrored,
                    None => w.len().is_multiple_of(2) && mirrored,
                }
            }
        }
    }

    /// Whether some word of `F` has the shape `s₀ · Σ* · s₁ · ... · Σ* · sₖ`.
    /// Exact for regular backends; for palindromes a necessary condition.
    fn viable_letters(&self, segments: &[Vec<usize>], reach: Option<&[Vec<bool>]>) -> bool {
        if segments.len() == 1 {
            return self.accepts_letters(&segments[0]);
        }
        match self.shape() {
            Shape::Regular(m) => {
                let reach = reach.expect("reachability is precomputed for regular backends");
                let n = m.states().len();
                let mut current = vec![false; n];
                current[m.start()] = true;
                for (i, seg) in segments.iter().enumerate() {
                    let mut next = vec![false; n];
                    for q in (0..n).filter(|&q| current[q]) {
                        let mut p = q;
                        for &a in seg {
                            p = m.next(p, a);
                        }
                        next[p] = true;
                    }
                    current = next;
                    if i + 1 < segments.len() {
                        let mut closed = vec![false; n];
                        for q in (0..n).filter(|&q| current[q]) {
                            for (p, &r) in reach[q].iter().enumerate() {
                                closed[p] |= r;
                            }
                        }
                        current = closed;
                    }
                }
                (0..n).any(|q| current[q] && m.is_final(q))
            }
            Shape::Palindrome { marker, allowed } => {
                let mut markers = 0;
                for &a in segments.iter().flatten() {
                    if Some(a) == marker {
                        markers += 1;
                    } else if !allowed[a] {
                        return false;
                    }
                }
                if markers > 1 {
                    return false;
                }
                // Words are palindromes, so the known prefix must agree with
                // the reversed known suffix.
                let first = &segments[0];
                let last = &segments[segments.len() - 1];
                first.iter().zip(last.iter().rev()).all(|(a, b)| a == b)
            }
        }
    }

    fn shape(&self) -> Shape<'_> {
        match self {
            FinalLanguage::Regular(m) => Shape::Regular(m),
            FinalLanguage::MarkedPalindrome { base, .. } => Shape::Palindrome { marker: Some(base.len()), allowed: vec![true; base.len() + 1] },
            FinalLanguage::EvenPalindrome { base } => Shape::Palindrome { marker: None, allowed: vec![true; base.len()] },
            FinalLanguage::Palindromial(p) => {
                let base = p.base();
                let mut allowed: Vec<bool> = base.iter().map(|a| p.pairs().contains(a)).collect();
                allowed.push(false);
                Shape::Palindrome { marker: Some(base.len()), allowed }
            }
        }
    }
}

enum Shape<'a> {
    Regular(&'a Dfa),
    Palindrome { marker: Option<usize>, allowed: Vec<bool> },
}

fn check_distinct(base: &[Symbol]) -> Result<(), String> {
    for (i, a) in base.iter().enumerate() {
        if base[..i].contains(a) {
            return Err(format!("base symbol `{a}` is listed twice"));
        }
    }
    Ok(())
}

fn symbol_csv(list: &str) -> Result<Vec<Symbol>, String> {
    let list = list.trim();
    if list.is_empty() {
        return Ok(Vec::new());
    }
    list.split(',').map(|t| Symbol::new(t.trim()).map_err(|e| e.to_string())).collect()
}

/// `W` of a final language.
pub fn alphabet_of(f: &FinalLanguage) -> Vec<Symbol> {
    f.alphabet()
}

/// Whether `w ∈ F`. Words with symbols outside `W` are rejected.
pub fn final_member(f: &FinalLanguage, w: &[Symbol]) -> bool {
    let alphabet = f.alphabet();
    let letters: Option<Vec<usize>> = w.iter().map(|a| alphabet.iter().position(|b| b == a)).collect();
    letters.is_some_and(|l| f.accepts_letters(&l))
}

/// A final language resolved against the symbols of one grammar.
#[derive(Debug, Clone)]
pub(crate) struct BoundFinal<'a> {
    f: &'a FinalLanguage,
    letter: Vec<Option<usize>>,
    w: SymbolSet,
    /// Symbols that may still change the `W`-projection when rewritten.
    gap: Vec<bool>,
    reach: Option<Vec<Vec<bool>>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("final alphabet symbol `{0}` is not a symbol of the grammar")]
pub struct AlphabetMismatch(pub Symbol);

impl<'a> BoundFinal<'a> {
    pub fn new(g: &Cfg, f: &'a FinalLanguage) -> Result<Self, AlphabetMismatch> {
        let mut letter = vec![None; g.symbol_count()];
        let mut w = SymbolSet::empty(g.symbol_count());
        for (i, a) in f.alphabet().iter().enumerate() {
            let id = g.id_of(a).ok_or_else(|| AlphabetMismatch(a.clone()))?;
            letter[id.index()] = Some(i);
            w.insert(id);
        }
        // Rewritable symbols that are in W or can derive a W symbol.
        let mut yields = vec![false; g.symbol_count()];
        loop {
            let mut changed = false;
            for r in g.rules() {
                if !yields[r.lhs.index()] && r.rhs.iter().any(|&s| w.contains(s) || yields[s.index()]) {
                    yields[r.lhs.index()] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let gap = (0..g.symbol_count())
            .map(|i| {
                let id = SymbolId(i as u32);
                g.is_rewritable(id) && (w.contains(id) || yields[i])
            })
            .collect();
        let reach = match f {
            FinalLanguage::Regular(m) => Some(m.reachability()),
            _ => None,
        };
        Ok(BoundFinal { f, letter, w, gap, reach })
    }

    pub fn w_set(&self) -> &SymbolSet {
        &self.w
    }

    /// `project(form, W) ∈ F`.
    pub fn accepts_form(&self, form: &[SymbolId]) -> bool {
        let letters: Vec<usize> = form.iter().filter_map(|s| self.letter[s.index()]).collect();
        self.f.accepts_letters(&letters)
    }

    /// False only when no form derivable from `form` can be final.
    pub fn viable(&self, form: &[SymbolId]) -> bool {
        let mut segments = vec![Vec::new()];
        for &s in form {
            if self.gap[s.index()] {
                if !segments.last().expect("non-empty").is_empty() || segments.len() == 1 {
                    segments.push(Vec::new());
                }
            } else if let Some(l) = self.letter[s.index()] {
                segments.last_mut().expect("non-empty").push(l);
            }
        }
        self.f.viable_letters(&segments, self.reach.as_deref())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbol::syms;

    fn markpal_xy() -> FinalLanguage {
        FinalLanguage::marked_palindrome(syms(&["X", "Y"]), Symbol::new("#").unwrap()).unwrap()
    }

    #[test]
    fn marked_palindromes() {
        let f = markpal_xy();
        assert!(final_member(&f, &syms(&["Y", "X", "X", "#", "X", "X", "Y"])));
        assert!(!final_member(&f, &syms(&["Y", "X", "X", "#", "X", "X", "Y", "Y"])));
        assert!(final_member(&f, &syms(&["#"])));
        assert!(!final_member(&f, &syms(&["X", "#", "#", "X"])));
        assert!(!final_member(&f, &syms(&["Z", "#", "Z"])));
        assert!(!final_member(&f, &[]));
    }

    #[test]
    fn even_palindromes() {
        let f = FinalLanguage::even_palindrome(syms(&["0", "1"])).unwrap();
        assert!(final_member(&f, &[]));
        assert!(final_member(&f, &syms(&["0", "1", "1", "0"])));
        assert!(!final_member(&f, &syms(&["0", "1", "0"])));
    }

    #[test]
    fn palindromial_backend() {
        let g = parse_grammar(include_str!("../../tests/data/ex2_final.cfg")).unwrap();
        let f = FinalLanguage::Palindromial(palg_validate(g).unwrap());
        assert!(final_member(&f, &syms(&["A", "B", "C", "D", "#", "D", "C", "B", "A"])));
        assert!(!final_member(&f, &syms(&["A", "#", "B"])));
        assert_eq!(alphabet_of(&f), syms(&["A", "B", "C", "D", "#"]));
    }

    #[test]
    fn alphabets() {
        let f = FinalLanguage::marked_palindrome(syms(&["0", "1"]), Symbol::new("#").unwrap()).unwrap();
        assert_eq!(alphabet_of(&f), syms(&["0", "1", "#"]));
        assert_eq!(alphabet_of(&FinalLanguage::even_palindrome(syms(&["0", "1"])).unwrap()), syms(&["0", "1"]));
        let m = parse_dfa(include_str!("../../tests/data/one_marker.dfa")).unwrap();
        assert_eq!(alphabet_of(&FinalLanguage::Regular(m)), syms(&["X", "Y", "#"]));
    }

    #[test]
    fn spec_strings() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
        assert_eq!(FinalLanguage::from_spec("markpal:X,Y:#", &dir).unwrap(), markpal_xy());
        assert!(matches!(FinalLanguage::from_spec("dfa:hash.dfa", &dir).unwrap(), FinalLanguage::Regular(_)));
        assert!(matches!(FinalLanguage::from_spec("palg:ex2_final.cfg", &dir).unwrap(), FinalLanguage::Palindromial(_)));
        assert!(matches!(FinalLanguage::from_spec("evenpal:", &dir).unwrap(), FinalLanguage::EvenPalindrome { .. }));
        assert!(matches!(FinalLanguage::from_spec("markpal:#,X:#", &dir), Err(FinalSpecError::Malformed { .. })));
        assert!(matches!(FinalLanguage::from_spec("palg:g0.cfg", &dir), Err(FinalSpecError::Palindromial { .. })));
        assert!(matches!(FinalLanguage::from_spec("nope:x", &dir), Err(FinalSpecError::Unrecognised(_))));
        assert!(matches!(FinalLanguage::from_spec("dfa:missing.dfa", &dir), Err(FinalSpecError::Io { .. })));
    }

    #[test]
    fn viability_prunes_mismatched_ends() {
        let g = parse_grammar(include_str!("../../tests/data/ex1.cfg")).unwrap();
        let f = markpal_xy();
        let b = BoundFinal::new(&g, &f).unwrap();
        assert!(b.viable(&g.form(&["t", "A", "X", "#", "B"])));
        assert!(b.viable(&g.form(&["t", "h", "e", "Y", "X", "X", "#", "1", "X", "1", "X", "0", "Y", "B"])));
        // Prefix Y X X against suffix ... X: mirrored prefix fails.
        assert!(!b.viable(&g.form(&["Y", "A", "X", "#", "B", "X"])));
        assert!(!b.viable(&g.form(&["A", "#", "B", "#"])));
    }

    #[test]
    fn regular_viability_uses_gaps() {
        let g = parse_grammar(include_str!("../../tests/data/ex1.cfg")).unwrap();
        let m = parse_dfa(include_str!("../../tests/data/one_marker.dfa")).unwrap();
        let f = FinalLanguage::Regular(m);
        let b = BoundFinal::new(&g, &f).unwrap();
        assert!(b.viable(&g.form(&["A", "#", "B"])));
        assert!(!b.viable(&g.form(&["A", "#", "B", "#"])));
        assert!(!b.viable(&g.form(&["X", "Y"])));
    }
}
