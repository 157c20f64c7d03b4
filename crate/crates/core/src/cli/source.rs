use std::path::Path;

use crate::cli::{final_language, read, read_cfg, located, Bounds, Failure};
use crate::finalization::{finalized_language, FinalizationInstance};
use crate::grammar::{enumerate_language, Cfg, LanguageBudget};
use crate::queue::{lqg_enumerate, parse_lqg, Lqg};
use crate::symbol::Symbol;

/// Something with a language to enumerate.
pub(crate) enum Source {
    Cfg(Cfg),
    Finalized(Box<FinalizationInstance>),
    Lqg(Lqg),
}

/// Words up to the length bound, shortlex ordered.
pub(crate) struct Language {
    pub words: Vec<Vec<Symbol>>,
    pub complete: bool,
}

impl Source {
    /// `cfg:<path>`, `lqg:<path>` or `final:<cfg path>,<final spec>`.
    pub fn parse(spec: &str) -> Result<Source, Failure> {
        let (kind, rest) = spec.split_once(':').ok_or_else(|| Failure(format!("source `{spec}`: expected `cfg:`, `lqg:` or `final:`")))?;
        match kind {
            "cfg" => Ok(Source::Cfg(read_cfg(Path::new(rest))?)),
            "lqg" => {
                let path = Path::new(rest);
                Ok(Source::Lqg(parse_lqg(&read(path)?).map_err(|e| located(path, e))?.0))
            }
            "final" => {
                let (g, f) = rest.split_once(',').ok_or_else(|| Failure(format!("source `{spec}`: expected `final:<cfg path>,<final spec>`")))?;
                let inst = FinalizationInstance::new(read_cfg(Path::new(g))?, final_language(f)?)?;
                Ok(Source::Finalized(Box::new(inst)))
            }
            _ => Err(Failure(format!("source `{spec}`: unknown kind `{kind}`"))),
        }
    }

    pub fn terminals(&self) -> Vec<Symbol> {
        match self {
            Source::Cfg(g) => g.names(g.terminals()),
            Source::Finalized(inst) => inst.grammar().names(inst.grammar().terminals()),
            Source::Lqg(q) => q.terminals(),
        }
    }

    pub fn language(&self, bounds: &Bounds) -> Result<Language, Failure> {
        let (mut words, complete) = match self {
            Source::Cfg(g) => {
                let words = enumerate_language(g, bounds.max_len, LanguageBudget::default())?;
                (words.iter().map(|w| g.names(w)).collect::<Vec<_>>(), true)
            }
            Source::Finalized(inst) => {
                let lang = finalized_language(inst, bounds.max_len, &bounds.search());
                let g = inst.grammar();
                (lang.words.iter().map(|w| g.names(&w.word)).collect(), lang.complete)
            }
            Source::Lqg(q) => {
                let lang = lqg_enumerate(q, bounds.max_len, &bounds.queue());
                (lang.words.into_iter().map(|w| w.word).collect(), lang.complete)
            }
        };
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(Language { words, complete })
    }
}
