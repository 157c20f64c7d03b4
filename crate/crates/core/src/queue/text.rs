use crate::queue::{lqg_validate, Lqg, LqgError, NormalFormReport, QueueRule, RawLqg};
use crate::symbol::{Symbol, ARROW, EPSILON};
use crate::text::{expect_kind, keyed, lines, symbol_at, symbol_list, ParseError, Sections};

/// Parses the `kind: lqg` (or `kind: qg`) text format and validates it.
///
/// ```text
/// kind: lqg
/// V: S A a
/// T: a
/// U: q0 q1 f
/// D: f
/// start: S q0
/// rule: S q0 -> A A , q1
/// rule: A q1 -> eps , q1
/// ```
pub fn parse_lqg(text: &str) -> Result<(Lqg, NormalFormReport), ParseError> {
    let lines = lines(text)?;
    let kind = expect_kind(&lines, &["lqg", "qg"])?;
    let mut sections = Sections::new();
    let mut lists: [Option<(usize, Vec<Symbol>)>; 4] = Default::default();
    let mut start: Option<(usize, (Symbol, Symbol))> = None;
    let mut rules = Vec::new();
    let mut rule_lines = Vec::new();
    for line in &lines[1..] {
        let slot = ["V", "T", "U", "D"].iter().position(|k| *k == line.key);
        match (line.key, slot) {
            (_, Some(i)) => {
                sections.once(line)?;
                lists[i] = Some((line.number, symbol_list(line)?));
            }
            ("start", _) => {
                sections.once(line)?;
                let s = symbol_list(line)?;
                if s.len() != 2 {
                    return Err(ParseError::new(line.number, "`start:` expects `symbol state`"));
                }
                start = Some((line.number, (s[0].clone(), s[1].clone())));
            }
            ("rule", _) => {
                rules.push(parse_queue_rule(line.number, line.value)?);
                rule_lines.push(line.number);
            }
            ("kind", _) => return Err(ParseError::new(line.number, "duplicate `kind:` header")),
            (other, _) => return Err(ParseError::new(line.number, format!("unknown section `{other}:`"))),
        }
    }
    let [v, t, u, d] = lists;
    let missing = |k: &str| ParseError::new(0, format!("missing `{k}:` section"));
    let (v_line, v) = v.ok_or_else(|| missing("V"))?;
    let (t_line, t) = t.ok_or_else(|| missing("T"))?;
    let (u_line, u) = u.ok_or_else(|| missing("U"))?;
    let (d_line, d) = d.ok_or_else(|| missing("D"))?;
    let (s_line, start) = start.ok_or_else(|| missing("start"))?;
    let dup_lines = [(v_line, v.clone()), (t_line, t.clone()), (u_line, u.clone()), (d_line, d.clone())];
    let raw = RawLqg { v, t, u, d, start, rules, ordinary: kind == "qg" };
    lqg_validate(raw).map_err(|e| {
        let line = match &e {
            LqgError::Duplicate(s) => dup_lines.iter().find(|(_, l)| l.iter().filter(|x| *x == s).count() > 1).map_or(v_line, |(n, _)| *n),
            LqgError::SharedSymbol(_) | LqgError::ReservedMarker(_) => u_line,
            LqgError::TerminalNotInV(_) => t_line,
            LqgError::FinalNotInU(_) => d_line,
            LqgError::BadStart(..) => s_line,
            LqgError::BadRule { rule, .. } | LqgError::DuplicateRule { rule, .. } => rule_lines[rule - 1],
            LqgError::NotTotal(_) => 0,
        };
        ParseError::new(line, e.to_string())
    })
}

fn parse_queue_rule(line: usize, value: &str) -> Result<QueueRule, ParseError> {
    let malformed = || ParseError::new(line, format!("malformed rule `{value}` (expected `a q -> x ... , p`)"));
    let (lhs, rhs) = value.split_once(ARROW).ok_or_else(malformed)?;
    let (x, c) = rhs.rsplit_once(',').ok_or_else(malformed)?;
    let lhs: Vec<&str> = lhs.split_whitespace().collect();
    let c: Vec<&str> = c.split_whitespace().collect();
    let x: Vec<&str> = x.split_whitespace().collect();
    if lhs.len() != 2 || c.len() != 1 || x.is_empty() {
        return Err(malformed());
    }
    let x = if x == [EPSILON] {
        Vec::new()
    } else if x.contains(&EPSILON) {
        return Err(ParseError::new(line, "`eps` must be the whole appended string"));
    } else {
        x.iter().map(|t| symbol_at(line, t)).collect::<Result<_, _>>()?
    };
    Ok(QueueRule { a: symbol_at(line, lhs[0])?, b: symbol_at(line, lhs[1])?, x, c: symbol_at(line, c[0])? })
}

/// Canonical text in declaration order.
pub fn print_lqg(g: &Lqg) -> String {
    let mut out = format!("kind: {}\n", if g.is_ordinary() { "qg" } else { "lqg" });
    for (key, list) in [("V", g.symbols().to_vec()), ("T", g.terminals()), ("U", g.states().to_vec()), ("D", g.finals())] {
        out.push_str(&keyed(key, &list));
        out.push('\n');
    }
    let (a, q) = g.start();
    out.push_str(&format!("start: {a} {q}\n"));
    for r in g.rules() {
        let x: Vec<&str> = r.x.iter().map(Symbol::as_str).collect();
        let x = if x.is_empty() { EPSILON.to_string() } else { x.join(" ") };
        out.push_str(&format!("rule: {} {} {ARROW} {x} , {}\n", r.a, r.b, r.c));
    }
    out
}
