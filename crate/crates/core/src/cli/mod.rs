//! Command-line front end. [`run`] never touches the process streams, so it
//! can be driven from tests; `main` only forwards its outcome.
//!
//! Exit statuses: 0 success or property holds, 1 property fails, 2 usage
//! or input error, 3 budget exhausted without a conclusive answer.

mod source;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::final_lang::{final_member, parse_dfa, print_dfa, FinalLanguage};
use crate::finalization::{finalized_member_bounded, finalized_member_deepening, FinalizationInstance, Verdict};
use crate::grammar::{cfg_member, classify, derive_step, parse_grammar, print_grammar, Cfg, SearchBounds, SententialForm};
use crate::queue::{lqg_member_bounded, parse_lqg, print_lqg, QueueBounds};
use crate::re_cfg::build_re_cfg;
use crate::regular::build_finalized_cfg;
use crate::symbol::{render_word, tokenize, Symbol};
use crate::text::read_kind;

use source::{Language, Source};

pub const SUCCESS: i32 = 0;
pub const PROPERTY_FAILS: i32 = 1;
pub const INPUT_ERROR: i32 = 2;
pub const INCONCLUSIVE: i32 = 3;

/// Status and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser)]
#[command(name = "finalform", version, about = "Grammars finalized by a final language: enumeration, membership and constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Bounds {
    /// Longest word considered.
    #[arg(long, default_value_t = 6)]
    max_len: usize,
    /// Longest derivation searched.
    #[arg(long, default_value_t = 64)]
    max_steps: usize,
    /// Longest sentential form kept.
    #[arg(long, default_value_t = 32)]
    max_form_len: usize,
    /// Maximum number of stored search nodes.
    #[arg(long, default_value_t = 1_000_000)]
    node_cap: usize,
    /// Longest queue kept by queue-grammar searches (default 2·max-len+8).
    #[arg(long)]
    queue_cap: Option<usize>,
}

impl Bounds {
    fn search(&self) -> SearchBounds {
        SearchBounds::new(self.max_form_len, self.max_steps).with_node_cap(self.node_cap)
    }

    fn queue(&self) -> QueueBounds {
        QueueBounds { max_steps: self.max_steps, queue_cap: self.queue_cap, node_cap: self.node_cap }
    }
}

/// `--grammar [--final]` or `--lqg`.
#[derive(Args)]
struct Subject {
    /// A `kind: cfg` file.
    #[arg(long, required_unless_present = "lqg", conflicts_with = "lqg")]
    grammar: Option<PathBuf>,
    /// Final language: `dfa:<path>`, `palg:<path>`, `markpal:<a,b>:<marker>` or `evenpal:<a,b>`.
    #[arg(long = "final", requires = "grammar")]
    final_spec: Option<String>,
    /// A `kind: lqg` file.
    #[arg(long)]
    lqg: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file of any kind and report whether it is well formed.
    Validate {
        file: PathBuf,
        /// Print the canonical form instead of a summary.
        #[arg(long)]
        print: bool,
    },
    /// Report the propagating/linear/minimal linear/palindromial flags of a grammar.
    Classify { file: PathBuf },
    /// List the words of a language up to `--max-len`.
    Enumerate {
        #[command(flatten)]
        subject: Subject,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Decide whether a word belongs to a language, printing a derivation.
    Member {
        #[command(flatten)]
        subject: Subject,
        /// The word, either spelled out (`the#110`) or space separated.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        /// Grow the search bounds until the answer is conclusive or `--max-steps` is passed.
        #[arg(long)]
        deepen: bool,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Compile a grammar and a DFA into a CFG for the finalized language.
    FinalizeRegular {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long)]
        dfa: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compile a normal-form queue grammar into a CFG finalized by `{w#wᴿ : w ∈ {0,1}*}`.
    QueueToCfg {
        #[arg(long)]
        lqg: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Where to write the codeword table; by default it follows the grammar as comments.
        #[arg(long)]
        iota: Option<PathBuf>,
    },
    /// Compare two languages up to `--max-len`. Sources: `cfg:<path>`, `lqg:<path>`, `final:<cfg path>,<final spec>`.
    Equiv {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Replay rule applications `LABEL@POS` from the start symbol.
    Derive {
        #[arg(long)]
        grammar: PathBuf,
        #[arg(long = "step")]
        steps: Vec<String>,
        #[arg(long = "final")]
        final_spec: Option<String>,
    },
}

/// An input or usage problem; always status 2.
#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Run = Result<(i32, String, String), Failure>;

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { status: INPUT_ERROR, stdout: String::new(), stderr: text }
            } else {
                Outcome { status: SUCCESS, stdout: text, stderr: String::new() }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((status, stdout, stderr)) => Outcome { status, stdout, stderr },
        Err(Failure(message)) => Outcome { status: INPUT_ERROR, stdout: String::new(), stderr: format!("error: {message}\n") },
    }
}

fn dispatch(command: Command) -> Run {
    match command {
        Command::Validate { file, print } => validate(&file, print),
        Command::Classify { file } => {
            let g = read_cfg(&file)?;
            let r = classify(&g);
            let mut out = String::new();
            for (name, flag) in [
                ("propagating", r.propagating),
                ("linear", r.linear),
                ("rewrite-linear", r.rewrite_linear),
                ("minimal-linear", r.minimal_linear),
                ("palindromial", r.palindromial),
            ] {
                writeln!(out, "{name}: {}", yes(flag))?;
            }
            if let Some(m) = r.marker {
                writeln!(out, "marker: {m}")?;
            }
            Ok((SUCCESS, out, String::new()))
        }
        Command::Enumerate { subject, bounds } => {
            let lang = subject_source(&subject)?.language(&bounds)?;
            let mut out = String::new();
            for w in &lang.words {
                writeln!(out, "{}", render_word(w))?;
            }
            writeln!(out, "complete: {}", yes(lang.complete))?;
            Ok((if lang.complete { SUCCESS } else { INCONCLUSIVE }, out, String::new()))
        }
        Command::Member { subject, target, deepen, bounds } => member(&subject, &target, deepen, &bounds),
        Command::FinalizeRegular { grammar, dfa, output } => {
            let g = read_cfg(&grammar)?;
            let m = parse_dfa(&read(&dfa)?).map_err(|e| located(&dfa, e))?;
            let h = build_finalized_cfg(&g, &m)?;
            emit(output.as_deref(), print_grammar(&h), String::new())
        }
        Command::QueueToCfg { lqg, output, iota } => {
            let (q, _) = parse_lqg(&read(&lqg)?).map_err(|e| located(&lqg, e))?;
            let c = build_re_cfg(&q)?;
            let mut stderr = String::new();
            for w in &c.caveats {
                writeln!(stderr, "warning: {w}")?;
            }
            let mut text = print_grammar(&c.g);
            let table = c.encoding.render();
            match iota {
                Some(path) => std::fs::write(&path, table).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?,
                None => table.lines().for_each(|l| text.push_str(&format!("// {l}\n"))),
            }
            emit(output.as_deref(), text, stderr)
        }
        Command::Equiv { left, right, bounds } => equiv(&left, &right, &bounds),
        Command::Derive { grammar, steps, final_spec } => derive(&grammar, &steps, final_spec.as_deref()),
    }
}

fn yes(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
}

fn located(path: &Path, e: impl std::fmt::Display) -> Failure {
    Failure(format!("{}: {e}", path.display()))
}

fn read_cfg(path: &Path) -> Result<Cfg, Failure> {
    parse_grammar(&read(path)?).map_err(|e| located(path, e))
}

fn final_language(spec: &str) -> Result<FinalLanguage, Failure> {
    Ok(FinalLanguage::from_spec(spec, Path::new("."))?)
}

fn emit(output: Option<&Path>, text: String, stderr: String) -> Run {
    match output {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?;
            Ok((SUCCESS, String::new(), stderr))
        }
        None => Ok((SUCCESS, text, stderr)),
    }
}

fn validate(path: &Path, print: bool) -> Run {
    let text = read(path)?;
    let kind = read_kind(&text).map_err(|e| located(path, e))?;
    let (canonical, summary) = match kind.as_str() {
        "cfg" => {
            let g = parse_grammar(&text).map_err(|e| located(path, e))?;
            let s = format!(
                "kind: cfg\nterminals: {}\nnonterminals: {}\nrules: {}\n",
                g.terminals().len(),
                g.nonterminals().len(),
                g.rules().len()
            );
            (print_grammar(&g), s)
        }
        "dfa" => {
            let m = parse_dfa(&text).map_err(|e| located(path, e))?;
            let s = format!("kind: dfa\nstates: {}\nalphabet: {}\n", m.states().len(), m.alphabet().len());
            (print_dfa(&m), s)
        }
        "lqg" | "qg" => {
            let (q, report) = parse_lqg(&text).map_err(|e| located(path, e))?;
            let nf = match report.offending {
                None => "yes".to_string(),
                Some(i) => format!("no (rule {})", i + 1),
            };
            let s = format!("kind: {kind}\nrules: {}\nnormal form: {nf}\n", q.rules().len());
            (print_lqg(&q), s)
        }
        other => return Err(located(path, format!("line 1: unknown kind `{other}`"))),
    };
    Ok((SUCCESS, if print { canonical } else { summary }, String::new()))
}

fn subject_source(s: &Subject) -> Result<Source, Failure> {
    match (&s.grammar, &s.final_spec, &s.lqg) {
        (Some(g), None, None) => Ok(Source::Cfg(read_cfg(g)?)),
        (Some(g), Some(f), None) => {
            let inst = FinalizationInstance::new(read_cfg(g)?, final_language(f)?)?;
            Ok(Source::Finalized(Box::new(inst)))
        }
        (None, None, Some(q)) => Ok(Source::Lqg(parse_lqg(&read(q)?).map_err(|e| located(q, e))?.0)),
        _ => Err(Failure("give either --grammar (optionally with --final) or --lqg".into())),
    }
}

fn verdict_report<C>(v: &Verdict<C>, found: impl FnOnce(&C) -> Result<String, Failure>) -> Run {
    match v {
        Verdict::Found(c) => Ok((SUCCESS, format!("member: yes\n{}complete: yes\n", found(c)?), String::new())),
        Verdict::ExhaustedComplete => Ok((PROPERTY_FAILS, "member: no\ncomplete: yes\n".into(), String::new())),
        Verdict::ExhaustedTruncated => Ok((INCONCLUSIVE, "member: unknown\ncomplete: no\n".into(), String::new())),
    }
}

fn member(subject: &Subject, target: &str, deepen: bool, bounds: &Bounds) -> Run {
    let source = subject_source(subject)?;
    let Some(word) = tokenize(target, &source.terminals()) else {
        return Ok((PROPERTY_FAILS, "member: no\ncomplete: yes\n".into(), format!("note: `{target}` is not a word over the terminals\n")));
    };
    match &source {
        Source::Cfg(g) => {
            let hit = g.ids(&word).and_then(|w| cfg_member(g, &w));
            let v = hit.map_or(Verdict::ExhaustedComplete, Verdict::Found);
            verdict_report(&v, |t| Ok(t.render(g)?))
        }
        Source::Finalized(inst) => {
            let v = if deepen {
                finalized_member_deepening(inst, &word, bounds.node_cap, bounds.max_steps)
            } else {
                finalized_member_bounded(inst, &word, &bounds.search())
            };
            let g = inst.grammar();
            verdict_report(&v, |c| Ok(format!("{}final form: {}\n", c.trace.render(g)?, g.render(&c.form))))
        }
        Source::Lqg(q) => {
            let v = lqg_member_bounded(q, &word, &bounds.queue());
            verdict_report(&v, |t| Ok(t.render(q)?))
        }
    }
}

fn equiv(left: &str, right: &str, bounds: &Bounds) -> Run {
    let l = Source::parse(left)?.language(bounds)?;
    let r = Source::parse(right)?.language(bounds)?;
    let only = |a: &Language, b: &Language| -> Vec<Vec<Symbol>> { a.words.iter().filter(|w| !b.words.contains(w)).cloned().collect() };
    let (left_only, right_only) = (only(&l, &r), only(&r, &l));
    let mut out = String::new();
    // A word missing from an incomplete side may just not have been found.
    let definite: Vec<(&Vec<Symbol>, &str)> = left_only
        .iter()
        .filter(|_| r.complete)
        .map(|w| (w, "left"))
        .chain(right_only.iter().filter(|_| l.complete).map(|w| (w, "right")))
        .collect();
    if let Some(&(w, side)) = definite.iter().min_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0))) {
        writeln!(out, "equal: no")?;
        writeln!(out, "witness: {} ({side} only)", render_word(w))?;
        writeln!(out, "complete: yes")?;
        return Ok((PROPERTY_FAILS, out, String::new()));
    }
    let complete = l.complete && r.complete;
    if left_only.is_empty() && right_only.is_empty() {
        writeln!(out, "equal: yes (words up to length {}: {})", bounds.max_len, l.words.len())?;
    } else {
        writeln!(out, "equal: unknown")?;
        for (w, side) in left_only.iter().map(|w| (w, "left")).chain(right_only.iter().map(|w| (w, "right"))) {
            writeln!(out, "unconfirmed: {} ({side} only)", render_word(w))?;
        }
    }
    writeln!(out, "complete: {}", yes(complete))?;
    Ok((if complete { SUCCESS } else { INCONCLUSIVE }, out, String::new()))
}

fn derive(path: &Path, steps: &[String], final_spec: Option<&str>) -> Run {
    let g = read_cfg(path)?;
    let f = final_spec.map(final_language).transpose()?;
    let mut form = SententialForm(vec![g.start()]);
    let mut out = String::new();
    for (i, step) in steps.iter().enumerate() {
        let (label, pos) = step.split_once('@').ok_or_else(|| Failure(format!("step `{step}`: expected `LABEL@POS`")))?;
        let rule = g.rule_by_label(label).ok_or_else(|| Failure(format!("step `{step}`: no rule labelled `{label}`")))?;
        let pos: usize = pos.parse().map_err(|_| Failure(format!("step `{step}`: bad position `{pos}`")))?;
        form = derive_step(&g, &form, rule, pos).map_err(|e| Failure(format!("step {}: {e}", i + 1)))?;
        writeln!(out, "step {}: rule {label} at {pos} => {}", i + 1, g.render(&form))?;
    }
    let Some(f) = f else {
        return Ok((SUCCESS, out, String::new()));
    };
    let w = f.alphabet();
    let projected: Vec<Symbol> = g.names(&form).into_iter().filter(|s| w.contains(s)).collect();
    let is_final = final_member(&f, &projected);
    writeln!(out, "projection: {}", render_word(&projected))?;
    writeln!(out, "final: {}", yes(is_final))?;
    Ok((if is_final { SUCCESS } else { PROPERTY_FAILS }, out, String::new()))
}
