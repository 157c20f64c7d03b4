//! Acceptance criteria 1 to 7. Each criterion prints one `PASS`/`FAIL`
//! line; the process exits non-zero if any criterion fails.

mod support;

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use finalform::final_lang::{final_member, parse_dfa, palg_validate, print_dfa, FinalLanguage};
use finalform::finalization::{
    check_certificate, completeness_bound, finalized_language, finalized_member_bounded, finalized_member_deepening,
    FinalizationInstance, Verdict,
};
use finalform::grammar::{
    cfg_member, classify, derive_step, enumerate_forms, enumerate_language, parse_grammar, print_grammar, Cfg,
    LanguageBudget, SearchBounds, SententialForm,
};
use finalform::queue::{lqg_enumerate, lqg_member_bounded, parse_lqg, print_lqg, QueueBounds};
use finalform::re_cfg::{build_re_cfg, omega_member, JSymbol};
use finalform::regular::{build_finalized_cfg_detailed, Compiled, RuleOrigin, WrappedSymbol};
use finalform::symbol::{render_word, sym, syms, tokenize, Symbol};
use support::*;

type Check = Result<String, String>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn word(g: &Cfg, text: &str) -> Vec<Symbol> {
    tokenize(text, &g.names(g.terminals())).unwrap()
}

fn rendered(g: &Cfg, words: impl IntoIterator<Item = Vec<finalform::grammar::SymbolId>>) -> BTreeSet<String> {
    words.into_iter().map(|w| g.render(&w)).collect()
}

/// The ex1 grammar: membership, bound-backed rejections and the exact language up to length 8.
fn criterion_1() -> Check {
    let start = Instant::now();
    let g = parse_grammar(&read_data("ex1.cfg")).unwrap();
    let f = FinalLanguage::marked_palindrome(syms(&["X", "Y"]), sym("#")).unwrap();
    let inst = FinalizationInstance::new(g.clone(), f).unwrap();

    let target = word(&g, "the#110");
    let Verdict::Found(cert) = finalized_member_bounded(&inst, &target, &SearchBounds::default()) else {
        return Err("the#110 not found".into());
    };
    ensure(check_certificate(&inst, &cert, &g.ids(&target).unwrap()), || "the#110 certificate does not replay".into())?;

    for miss in ["the#100", "the#1100"] {
        let w = word(&g, miss);
        let b = completeness_bound(&g, w.len()).ok_or("the completeness bound does not apply to ex1")?;
        let bounds = SearchBounds::new(b.max_form_len, b.max_steps);
        let v = finalized_member_bounded(&inst, &w, &bounds);
        ensure(v == Verdict::ExhaustedComplete, || format!("{miss}: expected a complete rejection, got {v:?}"))?;
    }

    // w#σ(w) with σ(t) = σ(h) = 1 and σ(e) = 0.
    let mut expected = BTreeSet::new();
    let mut layer = vec![String::new()];
    for _ in 1..=3 {
        layer = layer.iter().flat_map(|w| ["t", "h", "e"].map(|c| format!("{w}{c}"))).collect();
        for w in &layer {
            let s: String = w.chars().map(|c| if c == 'e' { '0' } else { '1' }).collect();
            expected.insert(format!("{w}#{s}"));
        }
    }
    let lang = finalized_language(&inst, 8, &SearchBounds::default());
    ensure(lang.complete, || "language search incomplete".into())?;
    let got = rendered(&g, lang.words.iter().map(|w| w.word.clone()));
    ensure(got == expected, || format!("language differs: {:?}", got.symmetric_difference(&expected).collect::<Vec<_>>()))?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} words, {:.2?}", got.len(), start.elapsed()))
}

/// The ex2 grammar: the derivation of 1010#1001 and the language up to |u| = |v| = 4.
fn criterion_2() -> Check {
    let start = Instant::now();
    let g = parse_grammar(&read_data("ex2.cfg")).unwrap();
    let h = palg_validate(parse_grammar(&read_data("ex2_final.cfg")).unwrap()).unwrap();
    let inst = FinalizationInstance::new(g.clone(), FinalLanguage::Palindromial(h)).unwrap();

    // The reference derivation, with Xb and Yb for the barred nonterminals.
    let reference = [
        "S",
        "X # Xb",
        "1 A X # Xb",
        "1 A 0 B X # Xb",
        "1 A 0 B 1 C Y # Xb",
        "1 A 0 B 1 C 0 D # Xb",
        "1 A 0 B 1 C 0 D # 1 Xb A",
        "1 A 0 B 1 C 0 D # 1 0 Xb B A",
        "1 A 0 B 1 C 0 D # 1 0 0 Yb C B A",
        "1 A 0 B 1 C 0 D # 1 0 0 1 Yb D C B A",
        "1 A 0 B 1 C 0 D # 1 0 0 1 D C B A",
    ];
    let forms: Vec<SententialForm> = reference.iter().map(|f| g.form(&f.split(' ').collect::<Vec<_>>())).collect();
    let one_step = |a: &SententialForm, b: &SententialForm| {
        (0..g.rules().len()).any(|r| (0..a.len()).any(|p| derive_step(&g, a, r, p).is_ok_and(|x| x == *b)))
    };
    for i in 0..9 {
        ensure(one_step(&forms[i], &forms[i + 1]), || format!("reference step {} does not replay", i + 1))?;
    }
    ensure(!one_step(&forms[9], &forms[10]), || "last reference step unexpectedly replays".into())?;
    ensure(one_step(&forms[8], &forms[10]), || "corrected last step (Yb -> 1 D) does not replay".into())?;

    let target = word(&g, "1010#1001");
    let v = finalized_member_bounded(&inst, &target, &SearchBounds::default());
    let cert = v.found().ok_or("1010#1001 not found")?;
    ensure(check_certificate(&inst, cert, &g.ids(&target).unwrap()), || "certificate does not replay".into())?;

    let mut oracle = BTreeSet::new();
    for n in 1..=4u32 {
        for u in 0..1u32 << n {
            for v in 0..u {
                oracle.insert(format!("{u:0w$b}#{v:0w$b}", w = n as usize));
            }
        }
    }
    let lang = finalized_language(&inst, 9, &SearchBounds::default());
    let got = rendered(&g, lang.words.iter().map(|w| w.word.clone()));
    ensure(got == oracle, || format!("language differs: {:?}", got.symmetric_difference(&oracle).take(10).collect::<Vec<_>>()))?;
    ensure(lang.complete, || "language search incomplete".into())?;
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} words, {:.2?}", got.len(), start.elapsed()))
}

struct RegularInstance {
    seed: u64,
    inst: FinalizationInstance,
    compiled: Compiled,
}

fn regular_instances() -> Vec<RegularInstance> {
    (0..50u64)
        .map(|seed| {
            let mut rng = rng(seed);
            let g = random_propagating_cfg(&mut rng);
            let w = random_w(&mut rng, &g);
            let m = random_dfa(&mut rng, &w);
            let compiled = build_finalized_cfg_detailed(&g, &m).unwrap();
            let inst = FinalizationInstance::new(g, FinalLanguage::Regular(m)).unwrap();
            RegularInstance { seed, inst, compiled }
        })
        .collect()
}

/// Randomized equivalence of the regular construction in both directions.
fn criterion_3(instances: &[RegularInstance]) -> Check {
    let start = Instant::now();
    let mut words = 0;
    for r in instances {
        let g = r.inst.grammar();
        let h = &r.compiled.h;
        let lang = finalized_language(&r.inst, 5, &SearchBounds::default());
        for w in &lang.words {
            let names = g.names(&w.word);
            let ok = h.ids(&names).and_then(|ids| cfg_member(h, &ids)).is_some();
            ensure(ok, || format!("seed {}: `{}` is finalized but not in L(H)", r.seed, render_word(&names)))?;
        }
        let h_words = enumerate_language(h, 5, LanguageBudget::default()).map_err(|e| e.to_string())?;
        for w in &h_words {
            let names = h.names(w);
            let v = finalized_member_deepening(&r.inst, &names, 1_000_000, 256);
            ensure(v.is_found(), || format!("seed {}: `{}` in L(H) but not found: {v:?}", r.seed, render_word(&names)))?;
        }
        words += lang.words.len() + h_words.len();

    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("50 instances, {words} word checks, {:.2?}", start.elapsed()))
}

/// Structural invariants of every compiled grammar from criterion 3.
fn criterion_4(instances: &[RegularInstance]) -> Check {
    let mut rules = 0;
    for r in instances {
        let g = r.inst.grammar();
        let w = r.inst.final_language().alphabet();
        let h = &r.compiled.h;
        for t in h.terminals() {
            let name = h.symbol(*t);
            ensure(g.id_of(name).is_some_and(|i| g.is_terminal(i)), || format!("seed {}: `{name}` is not a terminal of G", r.seed))?;
            ensure(WrappedSymbol::parse(name).is_none(), || format!("seed {}: wrapped token `{name}` is a terminal", r.seed))?;
        }
        for (i, origin) in r.compiled.origins.iter().enumerate() {
            let rule = h.rule(i);
            let lhs = h.symbol(rule.lhs);
            let rhs = h.names(&rule.rhs);
            match origin {
                RuleOrigin::Chained { .. } => {
                    let outer = WrappedSymbol::parse(lhs).ok_or_else(|| format!("seed {}: chained lhs `{lhs}` not wrapped", r.seed))?;
                    let picks: Vec<WrappedSymbol> = rhs.iter().filter_map(WrappedSymbol::parse).collect();
                    let chained = !picks.is_empty()
                        && picks[0].left == outer.left
                        && picks.last().unwrap().right == outer.right
                        && picks.windows(2).all(|p| p[0].right == p[1].left);
                    ensure(chained, || format!("seed {}: rule `{}` breaks state chaining", r.seed, h.render_rule(i)))?;
                }
                RuleOrigin::Copy { .. } => {
                    let clean = std::iter::once(lhs).chain(&rhs).all(|s| !w.contains(s) && WrappedSymbol::parse(s).is_none());
                    ensure(clean, || format!("seed {}: copied rule `{}` mentions W", r.seed, h.render_rule(i)))?;
                }
                _ => {}
            }
            rules += 1;
        }
    }
    Ok(format!("{rules} rules checked"))
}

fn anbncn_words() -> BTreeSet<String> {
    ["abc", "aabbcc", "aaabbbccc"].iter().map(|s| s.to_string()).collect()
}

/// The a^n b^n c^n queue grammar compiled into a CFG finalized by markpal.
fn criterion_5() -> Check {
    let start = Instant::now();
    let (q, report) = parse_lqg(&read_data("anbncn.lqg")).unwrap();
    ensure(report.holds, || "normal form does not hold".into())?;
    let qlang = lqg_enumerate(&q, 9, &QueueBounds::default());
    let qwords: BTreeSet<String> = qlang.words.iter().map(|w| render_word(&w.word)).collect();
    ensure(qlang.complete && qwords == anbncn_words(), || format!("queue grammar generates {qwords:?}"))?;

    let c = build_re_cfg(&q).map_err(|e| e.to_string())?;
    ensure(c.caveats.is_empty(), || format!("caveats: {:?}", c.caveats))?;
    let flags = classify(&c.g);
    ensure(flags.propagating, || "compiled grammar is not propagating".into())?;
    // 0, 1 and # are nonterminals of G, so only the rewritable ones count.
    ensure(flags.rewrite_linear, || "a rule has two rewritable nonterminals".into())?;

    let inst = FinalizationInstance::new(c.g.clone(), c.final_language.clone()).unwrap();
    let lang = finalized_language(&inst, 9, &SearchBounds::new(160, 40));
    let got: BTreeSet<String> = lang.words.iter().map(|w| c.g.render(&w.word)).collect();
    ensure(got == anbncn_words(), || format!("finalized language is {got:?}"))?;
    for w in &lang.words {
        ensure(check_certificate(&inst, &w.certificate, &w.word), || "certificate does not replay".into())?;
        let v = lqg_member_bounded(&q, &c.g.names(&w.word), &QueueBounds::default());
        let trace = v.found().ok_or("word of G not generated by Q")?;
        ensure(trace.replay(&q).is_ok(), || "queue trace does not replay".into())?;
    }
    for w in &qlang.words {
        let v = finalized_member_bounded(&inst, &w.word, &SearchBounds::new(160, 40));
        let cert = v.found().ok_or_else(|| format!("{} not found in G", render_word(&w.word)))?;
        ensure(check_certificate(&inst, cert, &c.g.ids(&w.word).unwrap()), || "certificate does not replay".into())?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("linear (strict): {}, {:.2?}", if flags.linear { "yes" } else { "no" }, start.elapsed()))
}

/// Trace-level structure of the compiled grammar over 10 000 derivations.
fn criterion_6() -> Check {
    let (q, _) = parse_lqg(&read_data("anbncn.lqg")).unwrap();
    let c = build_re_cfg(&q).map_err(|e| e.to_string())?;
    let g = &c.g;
    let forms = enumerate_forms(g, &SearchBounds::new(160, 40).with_node_cap(10_000));
    ensure(forms.len() == 10_000, || format!("only {} traces", forms.len()))?;
    let terminals = q.terminals();
    let w = c.final_language.alphabet();
    let mut accepting = 0;
    for node in 0..forms.len() {
        let trace = forms.trace(node);
        let replay = trace.replay(g).map_err(|e| e.to_string())?;
        let mut seen_phase_two = false;
        for form in &replay {
            let js: Vec<JSymbol> = g.names(form).iter().filter_map(JSymbol::parse).collect();
            let rewritable = form.iter().filter(|&&s| g.is_rewritable(s)).count();
            ensure(rewritable <= 1 && js.len() <= 1, || format!("form `{}` has several nonterminals to rewrite", g.render(form)))?;
            if let Some(j) = js.first() {
                ensure(!(seen_phase_two && j.phase == 1), || format!("phase 1 after phase 2 in `{}`", g.render(form)))?;
                seen_phase_two |= j.phase == 2;
            }
        }
        let names = g.names(forms.form(node));
        let projected: Vec<Symbol> = names.iter().filter(|s| w.contains(s)).cloned().collect();
        let clear = names.iter().all(|s| w.contains(s) || terminals.contains(s));
        if clear && final_member(&c.final_language, &projected) {
            accepting += 1;
            ensure(omega_member(&names, &terminals), || format!("accepting form `{}` is not in Ω", render_word(&names)))?;
        }
    }
    let inst = FinalizationInstance::new(g.clone(), c.final_language.clone()).unwrap();
    for w_ in finalized_language(&inst, 9, &SearchBounds::new(160, 40)).words {
        let names = g.names(&w_.certificate.form);
        let projected: Vec<Symbol> = names.iter().filter(|s| w.contains(s)).cloned().collect();
        ensure(omega_member(&names, &terminals), || format!("certificate form `{}` is not in Ω", render_word(&names)))?;
        ensure(final_member(&c.final_language, &projected), || "certificate projection not in F".into())?;
        accepting += 1;
    }
    ensure(accepting > 0, || "no accepting forms checked".into())?;
    Ok(format!("10000 traces, {accepting} accepting forms"))
}

fn binary(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_finalform")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

/// Byte-exact round trips and the `equiv` command.
fn criterion_7() -> Check {
    let golden = format!("{}/tests/golden", env!("CARGO_MANIFEST_DIR"));
    let mut files = 0;
    for dir in [golden.clone(), data("")] {
        for entry in std::fs::read_dir(&dir).map_err(|e| e.to_string())? {
            let path = entry.map_err(|e| e.to_string())?.path();
            let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
            let print = |t: &str| -> String {
                match finalform::text::read_kind(t).unwrap().as_str() {
                    "cfg" => print_grammar(&parse_grammar(t).unwrap()),
                    "dfa" => print_dfa(&parse_dfa(t).unwrap()),
                    _ => print_lqg(&parse_lqg(t).unwrap().0),
                }
            };
            let once = print(&text);
            ensure(print(&once) == once, || format!("{} is not a print fixpoint", path.display()))?;
            if dir == golden {
                ensure(once == text, || format!("{} does not round-trip byte-exact", path.display()))?;
            }
            files += 1;
        }
    }

    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let h_path = tmp.path().join("h.cfg");
    let h_str = h_path.to_str().unwrap();
    let (g0, hash) = (data("g0.cfg"), data("hash.dfa"));
    let (status, _) = binary(&["finalize-regular", "--grammar", &g0, "--dfa", &hash, "--output", h_str]);
    ensure(status == 0, || format!("finalize-regular exited with {status}"))?;
    let right = format!("final:{g0},dfa:{hash}");
    let (status, out) = binary(&["equiv", "--left", &format!("cfg:{h_str}"), "--right", &right, "--max-len", "5"]);
    ensure(status == 0, || format!("equiv on H exited with {status}: {out}"))?;

    let h = parse_grammar(&std::fs::read_to_string(&h_path).unwrap()).unwrap();
    for i in 0..h.rules().len() {
        let cut = tmp.path().join(format!("h{i}.cfg"));
        std::fs::write(&cut, print_grammar(&h.without_rule(i))).unwrap();
        let (status, out) = binary(&["equiv", "--left", &format!("cfg:{}", cut.display()), "--right", &right, "--max-len", "5"]);
        ensure(status == 1 && out.contains("witness: "), || format!("H without `{}`: status {status}: {out}", h.render_rule(i)))?;
    }
    Ok(format!("{files} files round-tripped, {} rule deletions detected", h.rules().len()))
}

fn main() {
    let instances = regular_instances();
    let results: Vec<(&str, Check)> = vec![
        ("1 ex1 golden", criterion_1()),
        ("2 ex2 golden", criterion_2()),
        ("3 regular construction randomized equivalence", criterion_3(&instances)),
        ("4 regular construction structure", criterion_4(&instances)),
        ("5 queue grammar compilation", criterion_5()),
        ("6 compiled grammar trace structure", criterion_6()),
        ("7 tooling round trips and equiv", criterion_7()),
    ];
    let mut failed = false;
    for (name, result) in &results {
        match result {
            Ok(detail) => println!("PASS criterion {name} ({detail})"),
            Err(why) => {
                failed = true;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    if failed {
        std::process::exit(1);
    }
}
