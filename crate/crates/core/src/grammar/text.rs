use crate::grammar::{Cfg, GrammarError};
use crate::symbol::{Symbol, ARROW, EPSILON};
use crate::text::{expect_kind, keyed, lines, symbol_at, symbol_list, ParseError, Sections};

/// Parses the `kind: cfg` text format.
///
/// ```text
/// kind: cfg
/// terminals: a b #
/// nonterminals: S A
/// start: S
/// rule: S -> a S b
/// rule: S -> eps
/// ```
pub fn parse_grammar(text: &str) -> Result<Cfg, ParseError> {
    let lines = lines(text)?;
    expect_kind(&lines, &["cfg"])?;
    let mut sections = Sections::new();
    let mut terminals: Option<(usize, Vec<Symbol>)> = None;
    let mut nonterminals: Option<(usize, Vec<Symbol>)> = None;
    let mut start: Option<(usize, Symbol)> = None;
    let mut rules: Vec<(usize, Symbol, Vec<Symbol>)> = Vec::new();

    for line in &lines[1..] {
        match line.key {
            "terminals" => {
                sections.once(line)?;
                terminals = Some((line.number, symbol_list(line)?));
            }
            "nonterminals" => {
                sections.once(line)?;
                nonterminals = Some((line.number, symbol_list(line)?));
            }
            "start" => {
                sections.once(line)?;
                let toks: Vec<&str> = line.value.split_whitespace().collect();
                if toks.len() != 1 {
                    return Err(ParseError::new(line.number, "`start:` takes exactly one symbol"));
                }
                start = Some((line.number, symbol_at(line.number, toks[0])?));
            }
            "rule" => {
                let (lhs, rhs) = parse_rule(line.number, line.value)?;
                rules.push((line.number, lhs, rhs));
            }
            "kind" => return Err(ParseError::new(line.number, "duplicate `kind:` header")),
            other => return Err(ParseError::new(line.number, format!("unknown section `{other}:`"))),
        }
    }

    let (t_line, terminals) = terminals.ok_or_else(|| ParseError::new(0, "missing `terminals:` section"))?;
    let (n_line, nonterminals) = nonterminals.ok_or_else(|| ParseError::new(0, "missing `nonterminals:` section"))?;
    let (s_line, start) = start.ok_or_else(|| ParseError::new(0, "missing `start:` section"))?;

    // Declaration problems are reported against the declaring line.
    let mut declared: Vec<&Symbol> = Vec::new();
    for (line, list) in [(t_line, &terminals), (n_line, &nonterminals)] {
        for s in list {
            if declared.contains(&s) {
                return Err(ParseError::new(line, format!("symbol `{s}` is declared more than once")));
            }
            declared.push(s);
        }
    }
    if terminals.contains(&start) {
        return Err(ParseError::new(s_line, "start must be a nonterminal"));
    }
    if !nonterminals.contains(&start) {
        return Err(ParseError::new(s_line, format!("start symbol `{start}` is not declared")));
    }

    let rule_lines: Vec<usize> = rules.iter().map(|r| r.0).collect();
    let pairs = rules.into_iter().map(|(_, l, r)| (l, r)).collect();
    Cfg::new(terminals, nonterminals, start, pairs).map_err(|e| {
        let line = match &e {
            GrammarError::UndeclaredSymbol { rule, .. }
            | GrammarError::TerminalLhs { rule, .. }
            | GrammarError::DuplicateRule { rule, .. } => rule_lines[rule - 1],
            GrammarError::DuplicateSymbol(_) => t_line,
            GrammarError::StartIsTerminal(_) | GrammarError::UndeclaredStart(_) => s_line,
        };
        let message = match e {
            GrammarError::UndeclaredSymbol { symbol, .. } => format!("undeclared symbol `{symbol}` in rule"),
            GrammarError::TerminalLhs { symbol, .. } => format!("left-hand side `{symbol}` is not a nonterminal"),
            GrammarError::DuplicateRule { first, .. } => format!("duplicate rule (same as line {})", rule_lines[first - 1]),
            other => other.to_string(),
        };
        ParseError::new(line, message)
    })
}

pub(crate) fn parse_rule(line: usize, value: &str) -> Result<(Symbol, Vec<Symbol>), ParseError> {
    let toks: Vec<&str> = value.split_whitespace().collect();
    let arrows = toks.iter().filter(|t| **t == ARROW).count();
    if arrows != 1 || toks.len() < 3 || toks[1] != ARROW {
        return Err(ParseError::new(line, format!("malformed rule `{value}` (expected `A -> x ...` or `A -> eps`)")));
    }
    let lhs = symbol_at(line, toks[0])?;
    let rhs_toks = &toks[2..];
    if rhs_toks == [EPSILON] {
        return Ok((lhs, Vec::new()));
    }
    if rhs_toks.contains(&EPSILON) {
        return Err(ParseError::new(line, "`eps` must be the whole right-hand side"));
    }
    let rhs = rhs_toks.iter().map(|t| symbol_at(line, t)).collect::<Result<Vec<_>, _>>()?;
    Ok((lhs, rhs))
}

/// Canonical text: fixed section order, symbols and rules in declaration order.
pub fn print_grammar(g: &Cfg) -> String {
    let mut out = String::from("kind: cfg\n");
    out.push_str(&keyed("terminals", &g.names(g.terminals())));
    out.push('\n');
    out.push_str(&keyed("nonterminals", &g.names(g.nonterminals())));
    out.push('\n');
    out.push_str(&format!("start: {}\n", g.symbol(g.start())));
    for i in 0..g.rules().len() {
        out.push_str(&format!("rule: {}\n", g.render_rule(i)));
    }
    out
}
