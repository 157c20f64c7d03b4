use super::*;
use crate::finalization::{finalized_language, finalized_member_bounded, FinalizationInstance};
use crate::grammar::{classify, SearchBounds};
use crate::queue::{lqg_enumerate, parse_lqg, QueueBounds};
use crate::symbol::{render_word, syms};

fn lqg(text: &str) -> Lqg {
    parse_lqg(text).unwrap().0
}

fn anbncn() -> Lqg {
    lqg(include_str!("../../tests/data/anbncn.lqg"))
}

fn codes(e: &EncodingScheme) -> Vec<String> {
    e.entries().map(|(_, _, c)| bits(c)).collect()
}

fn psi_of(pairs: &[(&str, &str)]) -> PsiSet {
    PsiSet(pairs.iter().map(|(a, q)| (sym(a), sym(q))).collect())
}

fn instance(c: &ReCompilation) -> FinalizationInstance {
    FinalizationInstance::new(c.g.clone(), c.final_language.clone()).unwrap()
}

fn language(c: &ReCompilation, k: usize, bounds: &SearchBounds) -> (Vec<String>, bool) {
    let lang = finalized_language(&instance(c), k, bounds);
    (lang.words.iter().map(|w| c.g.render(&w.word)).collect(), lang.complete)
}

const SHARED: &str = "kind: lqg\nV: S A B a b\nT: a b\nU: q0 p f\nD: f\nstart: S q0\n\
    rule: S q0 -> A B , p\nrule: A p -> a , p\nrule: B p -> b , f\nrule: A p -> a , f\nrule: B p -> b , p\n";

#[test]
fn psi_is_read_off_the_rules() {
    let g = lqg("kind: lqg\nV: S A B a\nT: a\nU: q0 q1 f\nD: f\nstart: B q0\n\
        rule: B q0 -> A , q1\nrule: A q1 -> A , q0\nrule: A q0 -> a , f\nrule: A q0 -> eps , f\n");
    let psi = build_psi(&g).unwrap();
    assert_eq!(psi, psi_of(&[("A", "q0"), ("A", "q1"), ("B", "q0")]));
    let single = lqg("kind: lqg\nV: S a\nT: a\nU: q f\nD: f\nstart: S q\nrule: S q -> a , f\nrule: S q -> a a , f\n");
    assert_eq!(build_psi(&single).unwrap().len(), 1);
    assert_eq!(build_psi(&anbncn()).unwrap().len(), 7);
    let mixed = lqg("kind: lqg\nV: S a\nT: a\nU: q f\nD: f\nstart: S q\nrule: S q -> S a , f\n");
    assert_eq!(build_psi(&mixed), Err(ReError::NotNormalForm { rule: 1 }));
}

#[test]
fn codeword_assignment() {
    let e = build_encoding(psi_of(&[("A", "p"), ("B", "p"), ("C", "p")])).unwrap();
    assert_eq!((e.width(), codes(&e)), (2, vec!["00".into(), "01".into(), "10".into()]));
    let e = build_encoding(psi_of(&[("A", "p")])).unwrap();
    assert_eq!((e.width(), codes(&e)), (1, vec!["0".to_string()]));
    let e = build_encoding(psi_of(&[("A", "p"), ("B", "p"), ("C", "p"), ("D", "p")])).unwrap();
    assert_eq!((e.width(), codes(&e)), (3, vec!["000".into(), "001".into(), "010".into(), "011".into()]));
    assert_eq!(build_encoding(psi_of(&[])), Err(ReError::EmptyPsi));
    let e = build_encoding(build_psi(&anbncn()).unwrap()).unwrap();
    assert_eq!(e.width(), 3);
    assert!(codes(&e).iter().all(|c| c != "111"));
    assert!(e.render().starts_with("iota: A pA -> 000\niota: A qa -> 001\n"));
}

#[test]
fn substitution_tables() {
    let c = build_re_cfg(&anbncn()).unwrap();
    let t = &c.tables;
    assert_eq!(t.nu(&sym("A")).len(), 2);
    assert!(t.nu(&sym("a")).is_empty());
    assert!(t.mu(&sym("f")).is_empty());
    assert_eq!(t.mu(&sym("qb")), [syms(&["1", "1", "0"])]);
    assert_eq!(t.nu_word(&syms(&["A", "B"])).len(), 4);
    assert_eq!(t.nu_word(&[]), [Vec::<Symbol>::new()]);
}

#[test]
fn compiles_anbncn() {
    let q = anbncn();
    let c = build_re_cfg(&q).unwrap();
    assert!(c.caveats.is_empty());
    let report = classify(&c.g);
    assert!(report.propagating);
    assert!(report.rewrite_linear);
    assert!(!report.linear, "the code symbols 0 and 1 are nonterminals of G");
    assert_eq!(c.g.symbol(c.g.start()).as_str(), "S");
    for i in 0..c.g.rules().len() {
        let rhs = &c.g.rule(i).rhs;
        let js = rhs.iter().filter(|&&s| JSymbol::parse(c.g.symbol(s)).is_some()).count();
        assert!(js == 1 || c.g.symbol(*rhs.last().unwrap()).as_str() == MARKER);
    }

    let inst = instance(&c);
    let b = SearchBounds::default();
    let hit = finalized_member_bounded(&inst, &syms(&["a", "b", "c"]), &b);
    let cert = hit.found().expect("abc is generated");
    assert!(omega_member(&c.g.names(&cert.form), &q.terminals()));
    for miss in [&["a", "b"][..], &["a", "c", "b"], &["a", "a", "b", "c"]] {
        assert!(!finalized_member_bounded(&inst, &syms(miss), &b).is_found(), "{miss:?}");
    }
}

#[test]
fn small_queue_grammar_languages_agree() {
    // a^n b^n with one pass per n.
    let text = "kind: lqg\nV: S A B a b\nT: a b\nU: q0 pA pB qa qb f\nD: f\nstart: S q0\n\
        rule: S q0 -> A B , pA\nrule: S q0 -> A B , qa\nrule: A pA -> A , pA\nrule: A pA -> A A , pB\n\
        rule: B pB -> B , pB\nrule: B pB -> B B , pA\nrule: B pB -> B B , qa\n\
        rule: A qa -> a , qa\nrule: A qa -> a , qb\nrule: B qb -> b , qb\nrule: B qb -> b , f\n";
    let q = lqg(text);
    let expected: Vec<String> = lqg_enumerate(&q, 6, &QueueBounds::default()).words.iter().map(|w| render_word(&w.word)).collect();
    assert_eq!(expected, ["ab", "aabb", "aaabbb"]);
    let c = build_re_cfg(&q).unwrap();
    assert!(c.caveats.is_empty());
    let (got, _) = language(&c, 6, &SearchBounds::new(96, 40));
    assert_eq!(got, expected);
}

#[test]
fn unreachable_final_states_give_no_words() {
    let q = lqg("kind: lqg\nV: S A a\nT: a\nU: q0 p f\nD: f\nstart: S q0\nrule: S q0 -> A , p\nrule: A p -> A , p\n");
    let c = build_re_cfg(&q).unwrap();
    assert!(c.g.rules().iter().all(|r| !r.rhs.iter().any(|&s| c.g.symbol(s).as_str() == MARKER)));
    let (got, complete) = language(&c, 4, &SearchBounds::new(24, 12));
    assert!(got.is_empty());
    assert!(complete, "no J-symbol can be cleared, so the search space is empty");
}

#[test]
fn shared_states_over_generate() {
    let q = lqg(SHARED);
    let words: Vec<String> = lqg_enumerate(&q, 4, &QueueBounds::default()).words.iter().map(|w| render_word(&w.word)).collect();
    assert_eq!(words, ["ab"]);
    let c = build_re_cfg(&q).unwrap();
    assert_eq!(c.caveats, [Caveat::SharedState { state: sym("p"), symbols: syms(&["A", "B"]) }]);
    let (got, complete) = language(&c, 4, &SearchBounds::default());
    assert!(complete);
    assert_eq!(got, ["aa", "ab", "ba", "bb"]);
}

#[test]
fn other_caveats_are_reported() {
    let q = lqg("kind: lqg\nV: S A a\nT: a\nU: q0 p f\nD: f\nstart: S q0\n\
        rule: S q0 -> a , f\nrule: S q0 -> eps , p\nrule: A p -> a , f\n");
    let c = build_re_cfg(&q).unwrap();
    assert_eq!(c.caveats, [Caveat::UncoveredStartRule { rule: 1 }, Caveat::EmptyAppend { rule: 2 }]);
    assert!(c.caveats.iter().all(|w| !w.to_string().is_empty()));
}

#[test]
fn reserved_names_are_rejected() {
    let clash = lqg("kind: lqg\nV: S 0 a\nT: a\nU: q f\nD: f\nstart: S q\nrule: S q -> a , f\n");
    assert_eq!(build_re_cfg(&clash).unwrap_err(), ReError::Collision(sym("0")));
    let start = lqg("kind: lqg\nV: X S\nT: S\nU: q f\nD: f\nstart: X q\nrule: X q -> S , f\n");
    assert_eq!(build_re_cfg(&start).unwrap_err(), ReError::Collision(sym("S")));
    let wrapped = lqg("kind: lqg\nV: X a\nT: a\nU: <q> f\nD: f\nstart: X <q>\nrule: X <q> -> a , f\n");
    assert!(matches!(build_re_cfg(&wrapped), Err(ReError::ReservedSpelling(_))));
}

#[test]
fn j_symbols_round_trip() {
    let j = JSymbol { state: sym("q.0"), phase: 2 };
    assert_eq!(j.token().as_str(), "<q.0.2>");
    assert_eq!(JSymbol::parse(&j.token()), Some(j));
    assert_eq!(JSymbol::parse(&sym("<q.3>")), None);
    assert_eq!(JSymbol::parse(&sym("q")), None);
}

#[test]
fn omega() {
    let t = syms(&["a", "b", "c"]);
    assert!(omega_member(&syms(&["0", "0", "a", "b", "c", "#", "0", "0"]), &t));
    assert!(!omega_member(&syms(&["0", "1", "a", "b", "c", "#", "0", "1"]), &t));
    assert!(omega_member(&syms(&["0", "1", "a", "#", "1", "0"]), &t));
    assert!(!omega_member(&syms(&["#"]), &t));
    assert!(!omega_member(&syms(&["0", "a", "0", "#", "0", "0"]), &t));
}

