//! The line-oriented presentation format.
//!
//! ```text
//! # skip two
//! vertices = infinite
//! edge 1 source=v1 range=cofinite(v1,v2)
//! tail start=2 source=identity range=all
//! ```
//!
//! - `vertices = infinite | finite(N)`: vertices are `v1, v2, …` (and stop at
//!   `vN`). Defaults to `infinite` when omitted.
//! - `edge <k> source=v<i> range=<set>` declares one exceptional edge.
//! - `tail start=<k> [stride=<m>] source=identity|constant(v<i>)
//!   range=<set>|uppertail(<c>)|shift(<c>)` declares the edges
//!   `e_k, e_{k+m}, …`; the `q`-th of them (counting from `k`) has source
//!   `v_q` under `identity`, and range `{v_j : j ≥ q + c}` under
//!   `uppertail(c)` or `{v_{q+c}}` under `shift(c)`.
//!
//! `<set>` is `all`, `none`, `finite(v..,..)` or `cofinite(v..,..)`. Spaces
//! around `=` are allowed; `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::ultragraph::{ExceptionalEdge, RangeRule, SourceRule, TailRule, Ultragraph};
use crate::vertexset::{parse_index, IndexSet, Universe};
use crate::Index;

#[derive(Debug, Clone)]
struct Token {
    text: String,
    column: usize,
}

/// Splits a line into words and `=` signs; parentheses keep their contents
/// together. Columns are 1-based character positions.
fn tokenize(line: &str, line_no: usize) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut current: Option<Token> = None;
    let mut depth = 0usize;
    for (i, c) in line.chars().enumerate() {
        let column = i + 1;
        match c {
            '=' if depth == 0 => {
                tokens.extend(current.take());
                tokens.push(Token { text: "=".into(), column });
            }
            c if c.is_whitespace() && depth == 0 => tokens.extend(current.take()),
            c if c.is_whitespace() => {}
            c => {
                if c == '(' {
                    depth += 1;
                } else if c == ')' {
                    depth = depth.checked_sub(1).ok_or(Error::Parse {
                        line: line_no,
                        column,
                        reason: "unbalanced ')'".into(),
                    })?;
                }
                current.get_or_insert(Token { text: String::new(), column }).text.push(c);
            }
        }
    }
    if depth > 0 {
        return Err(Error::Parse { line: line_no, column: line.chars().count(), reason: "unclosed '('".into() });
    }
    tokens.extend(current);
    Ok(tokens)
}

struct Line {
    number: usize,
    keyword: Token,
    positional: Vec<Token>,
    fields: BTreeMap<String, (Token, Token)>,
}

impl Line {
    fn err(&self, column: usize, reason: impl Into<String>) -> Error {
        Error::Parse { line: self.number, column, reason: reason.into() }
    }

    fn field(&self, key: &str) -> Result<&Token> {
        self.fields.get(key).map(|(_, v)| v).ok_or_else(|| self.err(self.keyword.column, format!("missing `{key}=`")))
    }

    fn optional(&self, key: &str) -> Option<&Token> {
        self.fields.get(key).map(|(_, v)| v)
    }

    fn allow(&self, keys: &[&str]) -> Result<()> {
        for (k, (kt, _)) in &self.fields {
            if !keys.contains(&k.as_str()) {
                return Err(self.err(kt.column, format!("unknown field `{k}`")));
            }
        }
        Ok(())
    }
}

fn parse_line(number: usize, tokens: Vec<Token>) -> Result<Line> {
    let mut it = tokens.into_iter().peekable();
    let keyword = it.next().expect("nonempty line");
    let mut positional = Vec::new();
    let mut fields = BTreeMap::new();
    // `vertices = …` is a field of the line itself.
    if it.peek().is_some_and(|t| t.text == "=") {
        it.next();
        let value = it.next().ok_or(Error::Parse {
            line: number,
            column: keyword.column,
            reason: "missing value after '='".into(),
        })?;
        fields.insert(keyword.text.clone(), (keyword.clone(), value));
    }
    while let Some(t) = it.next() {
        if t.text == "=" {
            return Err(Error::Parse { line: number, column: t.column, reason: "unexpected '='".into() });
        }
        if it.peek().is_some_and(|n| n.text == "=") {
            let eq = it.next().expect("peeked");
            let value = it.next().ok_or(Error::Parse {
                line: number,
                column: eq.column,
                reason: "missing value after '='".into(),
            })?;
            if fields.contains_key(&t.text) {
                return Err(Error::Parse {
                    line: number,
                    column: t.column,
                    reason: format!("repeated field `{}`", t.text),
                });
            }
            fields.insert(t.text.clone(), (t, value));
        } else {
            positional.push(t);
        }
    }
    Ok(Line { number, keyword, positional, fields })
}

fn index_at(line: &Line, token: &Token, what: &str) -> Result<Index> {
    parse_index(&token.text).map_err(|e| line.err(token.column, format!("bad {what} `{}`: {e}", token.text)))
}

fn set_at(line: &Line, token: &Token, universe: Universe) -> Result<IndexSet> {
    IndexSet::parse(&token.text, universe).map_err(|e| line.err(token.column, format!("bad set `{}`: {e}", token.text)))
}

fn call_arg<'a>(text: &'a str, name: &str) -> Option<&'a str> {
    text.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')
}

fn parse_vertices(line: &Line) -> Result<Universe> {
    line.allow(&["vertices"])?;
    let v = line.field("vertices")?;
    if let Some(extra) = line.positional.first() {
        return Err(line.err(extra.column, "unexpected token"));
    }
    if v.text == "infinite" {
        return Ok(Universe::POSITIVE);
    }
    match call_arg(&v.text, "finite") {
        Some(n) => {
            let n = n.trim().parse::<Index>().map_err(|e| line.err(v.column, format!("bad size: {e}")))?;
            Ok(Universe::first_n(n))
        }
        None => Err(line.err(v.column, "expected `infinite` or `finite(N)`")),
    }
}

fn parse_edge(line: &Line, universe: Universe) -> Result<ExceptionalEdge> {
    line.allow(&["source", "range"])?;
    let [k] = line.positional.as_slice() else {
        let col = line.positional.get(1).map_or(line.keyword.column, |t| t.column);
        return Err(line.err(col, "expected exactly one edge index"));
    };
    let index = index_at(line, k, "edge index")?;
    let source_token = line.field("source")?;
    let source = index_at(line, source_token, "source vertex")?;
    if !universe.contains(source) {
        return Err(line.err(source_token.column, format!("vertex v{source} is outside {universe}")));
    }
    let range_token = line.field("range")?;
    let range = set_at(line, range_token, universe)?;
    if range.is_empty() {
        return Err(line.err(range_token.column, format!("empty range for edge e{index}")));
    }
    Ok(ExceptionalEdge { index, source, range })
}

fn parse_tail(line: &Line, universe: Universe) -> Result<TailRule> {
    line.allow(&["start", "stride", "source", "range"])?;
    if let Some(extra) = line.positional.first() {
        return Err(line.err(extra.column, "unexpected token"));
    }
    let start = index_at(line, line.field("start")?, "start")?;
    let stride = match line.optional("stride") {
        Some(t) => index_at(line, t, "stride")?,
        None => 1,
    };
    let st = line.field("source")?;
    let source = if st.text == "identity" {
        SourceRule::Identity
    } else if let Some(v) = call_arg(&st.text, "constant") {
        SourceRule::Constant(index_at(line, &Token { text: v.into(), column: st.column }, "source vertex")?)
    } else {
        return Err(line.err(st.column, "expected `identity` or `constant(v<i>)`"));
    };
    let rt = line.field("range")?;
    let range = if let Some(c) = call_arg(&rt.text, "uppertail") {
        RangeRule::UpperTail { offset: c.trim().parse().map_err(|e| line.err(rt.column, format!("bad offset: {e}")))? }
    } else if let Some(c) = call_arg(&rt.text, "shift") {
        RangeRule::Shift { offset: c.trim().parse().map_err(|e| line.err(rt.column, format!("bad offset: {e}")))? }
    } else {
        let r = set_at(line, rt, universe)?;
        if r.is_empty() {
            return Err(line.err(rt.column, "empty range for tail"));
        }
        RangeRule::Constant(r)
    };
    Ok(TailRule::new(start, source, range).with_stride(stride))
}

/// Parses and validates a presentation.
pub fn parse_presentation(text: &str) -> Result<Ultragraph> {
    let mut universe = None;
    let mut edges: Vec<ExceptionalEdge> = Vec::new();
    let mut tails = Vec::new();
    let mut seen = BTreeMap::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let number = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content, number)?;
        if tokens.is_empty() {
            continue;
        }
        last_line = number;
        let line = parse_line(number, tokens)?;
        match line.keyword.text.as_str() {
            "vertices" => {
                if universe.is_some() || !edges.is_empty() || !tails.is_empty() {
                    return Err(line.err(line.keyword.column, "`vertices` must come first and only once"));
                }
                universe = Some(parse_vertices(&line)?);
            }
            "edge" => {
                let u = *universe.get_or_insert(Universe::POSITIVE);
                let e = parse_edge(&line, u)?;
                if let Some(prev) = seen.insert(e.index, number) {
                    return Err(line.err(
                        line.positional[0].column,
                        format!("duplicate edge index e{} (first declared on line {prev})", e.index),
                    ));
                }
                edges.push(e);
            }
            "tail" => {
                let u = *universe.get_or_insert(Universe::POSITIVE);
                tails.push(parse_tail(&line, u)?);
            }
            other => return Err(line.err(line.keyword.column, format!("unknown directive `{other}`"))),
        }
    }
    let universe = universe.unwrap_or(Universe::POSITIVE);
    Ultragraph::new(universe, edges, tails).map_err(|e| Error::Parse {
        line: last_line.max(1),
        column: 1,
        reason: format!("invalid presentation: {e}"),
    })
}

/// Renders a presentation in canonical form: `parse_presentation` of the
/// output reproduces it exactly.
pub fn render_presentation(g: &Ultragraph) -> Result<String> {
    let mut out = String::new();
    match g.vertices() {
        Universe::Infinite { start: 1 } => out.push_str("vertices = infinite\n"),
        Universe::Finite { start: 1, len } => writeln!(out, "vertices = finite({len})").expect("string write"),
        other => return Err(Error::Usage(format!("vertex set {other} has no text form; vertices start at v1"))),
    }
    for e in g.exceptional_edges() {
        writeln!(out, "edge {} source=v{} range={}", e.index, e.source, e.range.labeled("v")).expect("string write");
    }
    for t in g.tails() {
        write!(out, "tail start={}", t.start).expect("string write");
        if t.stride != 1 {
            write!(out, " stride={}", t.stride).expect("string write");
        }
        match t.source {
            SourceRule::Identity => out.push_str(" source=identity"),
            SourceRule::Constant(v) => write!(out, " source=constant(v{v})").expect("string write"),
        }
        match &t.range {
            RangeRule::Constant(r) => write!(out, " range={}", r.labeled("v")),
            RangeRule::UpperTail { offset } => write!(out, " range=uppertail({offset})"),
            RangeRule::Shift { offset } => write!(out, " range=shift({offset})"),
        }
        .expect("string write");
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const SKIP_TWO: &str = "\
# r(e1) skips v1 and v2
vertices = infinite
edge 1 source=v1 range=cofinite(v1,v2)
tail start=2 source=identity range=all
";

    #[test]
    fn parses_skip_two() {
        let g = parse_presentation(SKIP_TWO).unwrap();
        assert_eq!(g, catalog::skip_two());
        assert_eq!(
            render_presentation(&g).unwrap(),
            SKIP_TWO.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>()
        );
    }

    #[test]
    fn catalog_round_trips() {
        for g in [
            catalog::skip_two(),
            catalog::upper_tail(),
            catalog::split_source(),
            catalog::double_emitter(),
            catalog::bouquet(),
            catalog::successor_chain(),
        ] {
            let text = render_presentation(&g).unwrap();
            assert_eq!(parse_presentation(&text).unwrap(), g, "{text}");
        }
    }

    #[test]
    fn lenient_spacing() {
        let g = parse_presentation("vertices=finite(1)\ntail  start = 1 source = constant(v1) range = all  # loops\n")
            .unwrap();
        assert_eq!(g, catalog::bouquet());
        let g = parse_presentation("edge 1 source=v1 range=cofinite(v1, v2)\ntail start=2 source=identity range=all")
            .unwrap();
        assert_eq!(g, catalog::skip_two());
    }

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse_presentation(text) {
            Err(Error::Parse { line, column, reason }) => (line, column, reason),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn diagnostics() {
        let (line, column, reason) = parse_err("vertices = infinite\nedge 1 source=v1 range = none\n");
        assert_eq!((line, column), (2, 26));
        assert!(reason.contains("empty range"), "{reason}");

        let (line, _, reason) = parse_err("edge 1 source=v1 range=all\nedge 1 source=v2 range=all\n");
        assert_eq!(line, 2);
        assert!(reason.contains("duplicate edge"), "{reason}");

        let (_, column, reason) = parse_err("edge 1 source=v1 range=all colour=red\n");
        assert_eq!(column, 28);
        assert!(reason.contains("unknown field"));

        assert!(parse_err("vertex = infinite\n").2.contains("unknown directive"));
        assert!(parse_err("edge 1 source=v1 range=finite(v1\n").2.contains("unclosed"));
        assert!(parse_err("edge 1 source=v1\n").2.contains("missing `range=`"));
        assert!(parse_err("vertices = finite(2)\nedge 1 source=v3 range=all\n").2.contains("outside"));
        assert!(parse_err("edge 1 source=v1 range=all\ntail start=1 source=identity range=all\n")
            .2
            .contains("invalid presentation"));
        assert!(parse_err("tail start=1 source=identity range=sideways\n").2.contains("bad set"));
        assert!(parse_err("edge 1 source=v1 range=all\nvertices = infinite\n").2.contains("must come first"));
    }

    #[test]
    fn non_positive_universe_has_no_text_form() {
        let g = Ultragraph::new(Universe::NATURALS, vec![], vec![]).unwrap();
        assert!(render_presentation(&g).is_err());
    }
}
