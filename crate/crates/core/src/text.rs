//! The line-oriented workbench format.
//!
//! ```text
//! # the punctured interval [0, 2] \ {1}
//! set S
//! carrier H 1
//! ineq 1 | 2
//! ineq -1 | 0
//! remove V 1
//! point 1
//!
//! mapping F 1 1
//! carrier H 2
//! ...
//!
//! function f 1
//! piece 1 | 0
//! piece -1 | 0
//! dom S
//! ```
//!
//! A polyhedron block starts with `H n` or `V n` after `carrier` or
//! `remove` and is followed by `ineq a… | b` and `eq a… | d` rows or by
//! `point`, `ray` and `line` rows. A function domain is either `dom NAME`
//! referring to a set or a bare `dom` followed by a set body; without one
//! the domain is all of `ℝ^n`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::function::{NcFunction, Piece};
use crate::ncset::{Fidelity, PuncturedPolyhedron};
use crate::polyhedron::{GenRep, HRep, Polyhedron};
use crate::scalar::Field;
use crate::svmap::SvMap;
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax { expected: Vec<String> },
    DuplicateName,
    UnresolvedReference,
    Invalid,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// 1-based; 0 when the error has no position.
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self.kind {
            ParseErrorKind::Syntax { .. } => "SyntaxError",
            ParseErrorKind::DuplicateName => "DuplicateName",
            ParseErrorKind::UnresolvedReference => "UnresolvedReference",
            ParseErrorKind::Invalid => "InvalidObject",
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if let ParseErrorKind::Syntax { expected } = &self.kind {
            if !expected.is_empty() {
                write!(f, " (expected {})", expected.join(" or "))?;
            }
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Named sets, mappings and functions.
#[derive(Clone, Debug, Default)]
pub struct Workspace<F: Field = Rat> {
    pub sets: BTreeMap<String, PuncturedPolyhedron<F>>,
    pub maps: BTreeMap<String, SvMap<F>>,
    pub functions: BTreeMap<String, NcFunction<F>>,
}

impl<F: Field> Workspace<F> {
    pub fn new() -> Self {
        Self {
            sets: BTreeMap::new(),
            maps: BTreeMap::new(),
            functions: BTreeMap::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty() && self.maps.is_empty() && self.functions.is_empty()
    }

    /// Adds every object of `source`, checking name uniqueness per kind.
    pub fn parse_into(&mut self, source: &str) -> Result<(), ParseError> {
        Parser::new(self).run(source)
    }

    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let mut ws = Self::new();
        ws.parse_into(source)?;
        Ok(ws)
    }

    pub fn set(&self, name: &str) -> Result<&PuncturedPolyhedron<F>, ParseError> {
        self.sets.get(name).ok_or_else(|| unresolved("set", name))
    }

    pub fn map(&self, name: &str) -> Result<&SvMap<F>, ParseError> {
        self.maps.get(name).ok_or_else(|| unresolved("mapping", name))
    }

    pub fn function(&self, name: &str) -> Result<&NcFunction<F>, ParseError> {
        self.functions.get(name).ok_or_else(|| unresolved("function", name))
    }

    /// All objects in the workbench format, sets first.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (name, s) in &self.sets {
            out.push_str(&render_set(name, s));
            out.push('\n');
        }
        for (name, m) in &self.maps {
            out.push_str(&render_map(name, m));
            out.push('\n');
        }
        for (name, f) in &self.functions {
            out.push_str(&render_function(name, f));
            out.push('\n');
        }
        out
    }
}

fn unresolved(kind: &str, name: &str) -> ParseError {
    ParseError {
        kind: ParseErrorKind::UnresolvedReference,
        line: 0,
        column: 0,
        message: format!("no {kind} named {name}"),
    }
}

pub fn render_vec<F: Field>(v: &[F]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

/// A polyhedron block without its leading keyword.
pub fn render_polyhedron<F: Field>(p: &Polyhedron<F>) -> String {
    let mut out = String::new();
    match p.stored() {
        (Some(h), _) => {
            let _ = writeln!(out, "H {}", h.ambient());
            for (a, b) in h.ineq.row_iter().zip(&h.ineq_rhs) {
                let _ = writeln!(out, "ineq {} | {}", render_vec(a), b);
            }
            for (a, b) in h.eq.row_iter().zip(&h.eq_rhs) {
                let _ = writeln!(out, "eq {} | {}", render_vec(a), b);
            }
        }
        (None, Some(v)) => {
            let _ = writeln!(out, "V {}", v.ambient);
            for (tag, rows) in [("point", &v.points), ("ray", &v.rays), ("line", &v.lines)] {
                for r in rows {
                    let _ = writeln!(out, "{tag} {}", render_vec(r));
                }
            }
        }
        (None, None) => unreachable!("at least one representation"),
    }
    out
}

fn render_set_body<F: Field>(s: &PuncturedPolyhedron<F>) -> String {
    let mut out = format!("carrier {}", render_polyhedron(s.carrier()));
    for d in s.removed() {
        out.push_str("remove ");
        out.push_str(&render_polyhedron(d));
    }
    if s.fidelity() == Fidelity::NearEqual {
        out.push_str("fidelity near\n");
    }
    out
}

pub fn render_set<F: Field>(name: &str, s: &PuncturedPolyhedron<F>) -> String {
    format!("set {name}\n{}", render_set_body(s))
}

pub fn render_map<F: Field>(name: &str, m: &SvMap<F>) -> String {
    format!(
        "mapping {name} {} {}\n{}",
        m.source_dim(),
        m.target_dim(),
        render_set_body(m.graph())
    )
}

pub fn render_function<F: Field>(name: &str, f: &NcFunction<F>) -> String {
    let mut out = format!("function {name} {}\n", f.dim());
    for p in f.pieces() {
        let _ = writeln!(out, "piece {} | {}", render_vec(&p.c), p.beta);
    }
    out.push_str("dom\n");
    out.push_str(&render_set_body(f.dom()));
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    H,
    V,
}

struct PolyBuilder<F> {
    kind: Kind,
    n: usize,
    h: HRep<F>,
    v: GenRep<F>,
}

impl<F: Field> PolyBuilder<F> {
    fn new(kind: Kind, n: usize) -> Self {
        Self {
            kind,
            n,
            h: HRep::new(n),
            v: GenRep::empty(n),
        }
    }

    fn build(self) -> Polyhedron<F> {
        match self.kind {
            Kind::H => Polyhedron::from_h(self.h).expect("rows checked while parsing"),
            Kind::V => Polyhedron::from_v(self.v).expect("rows checked while parsing"),
        }
    }
}

struct SetBuilder<F> {
    line: usize,
    carrier: Option<PolyBuilder<F>>,
    removed: Vec<PolyBuilder<F>>,
    fidelity: Fidelity,
    reference: Option<(String, usize, usize)>,
}

impl<F: Field> SetBuilder<F> {
    fn new(line: usize) -> Self {
        Self {
            line,
            carrier: None,
            removed: Vec::new(),
            fidelity: Fidelity::Exact,
            reference: None,
        }
    }

    fn current(&mut self) -> Option<&mut PolyBuilder<F>> {
        match self.removed.last_mut() {
            Some(r) => Some(r),
            None => self.carrier.as_mut(),
        }
    }

    fn build(self) -> Result<PuncturedPolyhedron<F>, ParseError> {
        let carrier = self.carrier.ok_or_else(|| ParseError {
            kind: ParseErrorKind::Syntax {
                expected: vec!["carrier".into()],
            },
            line: self.line,
            column: 1,
            message: "set body has no carrier".into(),
        })?;
        let carrier = carrier.build();
        let removed = self.removed.into_iter().map(PolyBuilder::build).collect();
        PuncturedPolyhedron::new(carrier, removed, self.fidelity).map_err(|e| ParseError {
            kind: ParseErrorKind::Invalid,
            line: self.line,
            column: 1,
            message: e.to_string(),
        })
    }
}

enum Object<F> {
    Set {
        name: String,
        body: SetBuilder<F>,
    },
    Map {
        name: String,
        n: usize,
        p: usize,
        body: SetBuilder<F>,
    },
    Function {
        name: String,
        n: usize,
        line: usize,
        pieces: Vec<Piece<F>>,
        dom: Option<SetBuilder<F>>,
    },
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in content.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &content[s..i],
                    column: content[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &content[s..],
            column: content[..s].chars().count() + 1,
        });
    }
    out
}

/// Name, dimension, pieces, domain and line of a function awaiting its domain.
type PendingFunction<F> = (String, usize, Vec<Piece<F>>, Option<SetBuilder<F>>, usize);

struct Parser<'w, F: Field> {
    ws: &'w mut Workspace<F>,
    current: Option<Object<F>>,
    /// Functions are built last so `dom NAME` can refer to any set.
    functions: Vec<PendingFunction<F>>,
}

impl<'w, F: Field> Parser<'w, F> {
    fn new(ws: &'w mut Workspace<F>) -> Self {
        Self {
            ws,
            current: None,
            functions: Vec::new(),
        }
    }

    fn run(mut self, source: &str) -> Result<(), ParseError> {
        for (i, line) in source.lines().enumerate() {
            let toks = tokenize(line);
            if toks.is_empty() {
                continue;
            }
            self.statement(i + 1, &toks)?;
        }
        self.finish()?;
        self.resolve_functions()
    }

    fn statement(&mut self, line: usize, toks: &[Token<'_>]) -> Result<(), ParseError> {
        let head = &toks[0];
        match head.text {
            "set" if toks.len() == 1 => {
                if matches!(self.current, Some(Object::Map { .. })) {
                    Ok(())
                } else {
                    Err(syntax(line, head.column + 3, &["NAME"], "set needs a name"))
                }
            }
            "set" => {
                self.finish()?;
                let name = self.name(line, toks, 2)?;
                self.current = Some(Object::Set {
                    name,
                    body: SetBuilder::new(line),
                });
                Ok(())
            }
            "mapping" => {
                self.finish()?;
                let name = self.name(line, toks, 4)?;
                let n = parse_usize(line, &toks[2])?;
                let p = parse_usize(line, &toks[3])?;
                self.current = Some(Object::Map {
                    name,
                    n,
                    p,
                    body: SetBuilder::new(line),
                });
                Ok(())
            }
            "function" => {
                self.finish()?;
                let name = self.name(line, toks, 3)?;
                let n = parse_usize(line, &toks[2])?;
                self.current = Some(Object::Function {
                    name,
                    n,
                    line,
                    pieces: Vec::new(),
                    dom: None,
                });
                Ok(())
            }
            "carrier" | "remove" => self.block_header(line, toks),
            "ineq" | "eq" | "point" | "ray" | "line" => self.row(line, toks),
            "fidelity" => {
                let body = self.body(line, head)?;
                expect_len(line, toks, 2, &["exact", "near"])?;
                body.fidelity = match toks[1].text {
                    "exact" => Fidelity::Exact,
                    "near" => Fidelity::NearEqual,
                    _ => {
                        return Err(syntax(
                            line,
                            toks[1].column,
                            &["exact", "near"],
                            "unknown fidelity",
                        ))
                    }
                };
                Ok(())
            }
            "piece" => {
                let Some(Object::Function { n, pieces, .. }) = &mut self.current else {
                    return Err(syntax(line, head.column, &["function"], "piece outside a function"));
                };
                let (c, beta) = parse_row(line, &toks[1..], *n)?;
                pieces.push(Piece::new(c, beta));
                Ok(())
            }
            "dom" => {
                let Some(Object::Function { dom, .. }) = &mut self.current else {
                    return Err(syntax(line, head.column, &["function"], "dom outside a function"));
                };
                let mut body = SetBuilder::new(line);
                match toks.len() {
                    1 => {}
                    2 => body.reference = Some((toks[1].text.to_string(), line, toks[1].column)),
                    _ => return Err(syntax(line, toks[2].column, &["end of line"], "trailing tokens")),
                }
                *dom = Some(body);
                Ok(())
            }
            other => Err(syntax(
                line,
                head.column,
                &["set", "mapping", "function", "carrier", "remove", "ineq", "eq", "point", "ray", "line", "fidelity", "piece", "dom"],
                &format!("unknown keyword {other}"),
            )),
        }
    }

    fn name(&self, line: usize, toks: &[Token<'_>], len: usize) -> Result<String, ParseError> {
        let expected: &[&str] = match len {
            2 => &["NAME"],
            3 => &["NAME n"],
            _ => &["NAME n p"],
        };
        expect_len(line, toks, len, expected)?;
        Ok(toks[1].text.to_string())
    }

    fn body(&mut self, line: usize, head: &Token<'_>) -> Result<&mut SetBuilder<F>, ParseError> {
        match &mut self.current {
            Some(Object::Set { body, .. }) | Some(Object::Map { body, .. }) => Ok(body),
            Some(Object::Function { dom: Some(body), .. }) if body.reference.is_none() => Ok(body),
            _ => Err(syntax(
                line,
                head.column,
                &["set", "mapping", "dom"],
                &format!("{} outside a set body", head.text),
            )),
        }
    }

    fn ambient(&self) -> Option<usize> {
        match &self.current {
            Some(Object::Map { n, p, .. }) => Some(n + p),
            Some(Object::Function { n, .. }) => Some(*n),
            _ => None,
        }
    }

    fn block_header(&mut self, line: usize, toks: &[Token<'_>]) -> Result<(), ParseError> {
        let want = self.ambient();
        let head = &toks[0];
        expect_len(line, toks, 3, &["H n", "V n"])?;
        let kind = match toks[1].text {
            "H" => Kind::H,
            "V" => Kind::V,
            _ => return Err(syntax(line, toks[1].column, &["H", "V"], "unknown representation")),
        };
        let n = parse_usize(line, &toks[2])?;
        if let Some(w) = want {
            if w != n {
                return Err(ParseError {
                    kind: ParseErrorKind::Invalid,
                    line,
                    column: toks[2].column,
                    message: format!("dimension {n} does not match the declared {w}"),
                });
            }
        }
        let is_carrier = head.text == "carrier";
        let body = self.body(line, head)?;
        if is_carrier {
            if body.carrier.is_some() {
                return Err(syntax(line, head.column, &["remove"], "second carrier"));
            }
            if !body.removed.is_empty() {
                return Err(syntax(line, head.column, &["remove"], "carrier after remove"));
            }
            body.carrier = Some(PolyBuilder::new(kind, n));
        } else {
            let Some(c) = &body.carrier else {
                return Err(syntax(line, head.column, &["carrier"], "remove before carrier"));
            };
            if c.n != n {
                return Err(ParseError {
                    kind: ParseErrorKind::Invalid,
                    line,
                    column: toks[2].column,
                    message: format!("removed piece dimension {n} differs from carrier {}", c.n),
                });
            }
            body.removed.push(PolyBuilder::new(kind, n));
        }
        Ok(())
    }

    fn row(&mut self, line: usize, toks: &[Token<'_>]) -> Result<(), ParseError> {
        let head = &toks[0];
        let body = self.body(line, head)?;
        let Some(poly) = body.current() else {
            return Err(syntax(line, head.column, &["carrier"], "row before any block"));
        };
        match (head.text, poly.kind) {
            ("ineq" | "eq", Kind::H) => {
                let (a, b) = parse_row(line, &toks[1..], poly.n)?;
                if head.text == "ineq" {
                    poly.h.leq(a, b);
                } else {
                    poly.h.equal(a, b);
                }
            }
            ("point" | "ray" | "line", Kind::V) => {
                let v = parse_vec(line, &toks[1..], poly.n)?;
                match head.text {
                    "point" => poly.v.points.push(v),
                    "ray" => poly.v.rays.push(v),
                    _ => poly.v.lines.push(v),
                }
            }
            (_, Kind::H) => return Err(syntax(line, head.column, &["ineq", "eq"], "generator in an H block")),
            (_, Kind::V) => {
                return Err(syntax(line, head.column, &["point", "ray", "line"], "inequality in a V block"))
            }
        }
        Ok(())
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        match self.current.take() {
            None => Ok(()),
            Some(Object::Set { name, body }) => {
                let line = body.line;
                let set = body.build()?;
                insert(&mut self.ws.sets, name, set, line)
            }
            Some(Object::Map { name, n, p, body }) => {
                let line = body.line;
                let graph = body.build()?;
                let map = SvMap::new(n, p, graph).map_err(|e| invalid(line, e))?;
                insert(&mut self.ws.maps, name, map, line)
            }
            Some(Object::Function {
                name,
                n,
                line,
                pieces,
                dom,
            }) => {
                if self.ws.functions.contains_key(&name)
                    || self.functions.iter().any(|f| f.0 == name)
                {
                    return Err(duplicate(&name, line));
                }
                self.functions.push((name, n, pieces, dom, line));
                Ok(())
            }
        }
    }

    fn resolve_functions(&mut self) -> Result<(), ParseError> {
        for (name, n, pieces, dom, line) in std::mem::take(&mut self.functions) {
            let dom = match dom {
                None => PuncturedPolyhedron::convex(Polyhedron::full_space(n)),
                Some(SetBuilder {
                    reference: Some((r, l, c)),
                    ..
                }) => self
                    .ws
                    .sets
                    .get(&r)
                    .cloned()
                    .ok_or(ParseError {
                        kind: ParseErrorKind::UnresolvedReference,
                        line: l,
                        column: c,
                        message: format!("no set named {r}"),
                    })?,
                Some(body) => body.build()?,
            };
            let f = NcFunction::new(n, pieces, dom).map_err(|e| invalid(line, e))?;
            insert(&mut self.ws.functions, name, f, line)?;
        }
        Ok(())
    }
}

fn insert<T>(map: &mut BTreeMap<String, T>, name: String, value: T, line: usize) -> Result<(), ParseError> {
    if map.contains_key(&name) {
        return Err(duplicate(&name, line));
    }
    map.insert(name, value);
    Ok(())
}

fn duplicate(name: &str, line: usize) -> ParseError {
    ParseError {
        kind: ParseErrorKind::DuplicateName,
        line,
        column: 1,
        message: format!("{name} is already defined"),
    }
}

fn invalid(line: usize, e: crate::Error) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Invalid,
        line,
        column: 1,
        message: e.to_string(),
    }
}

fn syntax(line: usize, column: usize, expected: &[&str], message: &str) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax {
            expected: expected.iter().map(|s| s.to_string()).collect(),
        },
        line,
        column,
        message: message.to_string(),
    }
}

fn expect_len(line: usize, toks: &[Token<'_>], len: usize, expected: &[&str]) -> Result<(), ParseError> {
    if toks.len() == len {
        return Ok(());
    }
    let column = toks
        .get(len)
        .map(|t| t.column)
        .unwrap_or_else(|| toks.last().map(|t| t.column + t.text.len()).unwrap_or(1));
    Err(syntax(
        line,
        column,
        expected,
        &format!("{} takes {} arguments", toks[0].text, len - 1),
    ))
}

fn parse_usize(line: usize, t: &Token<'_>) -> Result<usize, ParseError> {
    t.text
        .parse()
        .map_err(|_| syntax(line, t.column, &["dimension"], &format!("bad dimension {}", t.text)))
}

fn parse_scalar<F: Field>(line: usize, t: &Token<'_>) -> Result<F, ParseError> {
    F::parse_rational(t.text)
        .ok_or_else(|| syntax(line, t.column, &["rational"], &format!("bad number {}", t.text)))
}

fn parse_vec<F: Field>(line: usize, toks: &[Token<'_>], n: usize) -> Result<Vec<F>, ParseError> {
    let v = toks
        .iter()
        .map(|t| parse_scalar(line, t))
        .collect::<Result<Vec<F>, _>>()?;
    if v.len() != n {
        let column = toks.get(n).or(toks.last()).map(|t| t.column).unwrap_or(1);
        return Err(syntax(
            line,
            column,
            &[&format!("{n} entries")],
            &format!("found {} entries", v.len()),
        ));
    }
    Ok(v)
}

fn parse_row<F: Field>(line: usize, toks: &[Token<'_>], n: usize) -> Result<(Vec<F>, F), ParseError> {
    let Some(bar) = toks.iter().position(|t| t.text == "|") else {
        let column = toks.last().map(|t| t.column + t.text.len() + 1).unwrap_or(1);
        return Err(syntax(line, column, &["|"], "row needs a right-hand side"));
    };
    let a = parse_vec(line, &toks[..bar], n)?;
    let rest = &toks[bar + 1..];
    if rest.len() != 1 {
        let column = rest.get(1).map(|t| t.column).unwrap_or(toks[bar].column + 2);
        return Err(syntax(line, column, &["one right-hand side"], "bad right-hand side"));
    }
    Ok((a, parse_scalar(line, &rest[0])?))
}

/// Parses one polyhedron block written as in [`render_polyhedron`].
pub fn parse_polyhedron<F: Field>(source: &str) -> Result<Polyhedron<F>, ParseError> {
    let text = format!("set _\ncarrier {}", source.trim_start());
    let ws = Workspace::<F>::parse(&text)?;
    Ok(ws.sets.into_values().next().expect("one set").carrier().clone())
}
