//! Parser for model files.
//!
//! ```text
//! # comment
//! base p probs=[1/2, 1/4] tail=1/4
//! set e1 = rect{ y:{2/3}, z:[1/2,1) } | rect{ y:{1/3}, z:[0,1/2) }
//! set c  = !e1 & rect{ y:[0,1/2) ∪ {3/4} }
//! dset d = prod(y:{0}, z:co{0}) | prod(y:co{0})
//! profile diag = cells[(vol=1, q=0)]
//! ```
//!
//! Expression operators bind as `!` > `&` > `|`; parentheses group. Inside a
//! `rect{}` component, pieces are joined with `∪` (or `|`). Dimension names
//! are assigned indices in order of first appearance.

use std::fmt;

use cylproj_core::discrete_core::{AtomSet, AtomUniverse, DiscreteBase, DiscreteSet};
use cylproj_core::measure_engine::FiberProfile;
use cylproj_core::rational::{parse_rational, Q};
use cylproj_core::set_core::{Component, DimVar, FinDimSet, OneDimSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErrorKind {
    SyntaxError(String),
    DuplicateName(String),
    UnknownName(String),
    InvalidRational(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ErrorKind,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ErrorKind::SyntaxError(m) => write!(f, "syntax error: {m}"),
            ErrorKind::DuplicateName(n) => write!(f, "duplicate name `{n}`"),
            ErrorKind::UnknownName(n) => write!(f, "unknown name `{n}`"),
            ErrorKind::InvalidRational(m) => write!(f, "invalid rational: {m}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Entry {
    Set(FinDimSet),
    DSet(DiscreteSet),
    Profile(FiberProfile),
}

#[derive(Debug, Clone, Default)]
pub struct ModelFile {
    dims: Vec<String>,
    base: Option<(String, DiscreteBase)>,
    entries: Vec<(String, Entry)>,
}

impl ModelFile {
    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.entries.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(n, _)| n.as_str())
    }

    pub fn base(&self) -> Option<&DiscreteBase> {
        self.base.as_ref().map(|(_, b)| b)
    }

    pub fn dim(&self, name: &str) -> Option<DimVar> {
        self.dims
            .iter()
            .position(|d| d == name)
            .map(|i| DimVar(i as u32))
    }

    /// Declared name of a dimension, or `_k` for dimensions created on the fly.
    pub fn dim_name(&self, d: DimVar) -> String {
        self.dims
            .get(d.0 as usize)
            .cloned()
            .unwrap_or_else(|| format!("_{}", d.0))
    }

    pub fn render<C: Component>(&self, s: &cylproj_core::set_core::CylSet<C>) -> String {
        s.render(&|d| self.dim_name(d))
    }

    fn universe(&self) -> AtomUniverse {
        self.base()
            .map_or(AtomUniverse::Countable, DiscreteBase::universe)
    }

    fn intern_dim(&mut self, name: &str) -> DimVar {
        match self.dim(name) {
            Some(d) => d,
            None => {
                self.dims.push(name.to_string());
                DimVar(self.dims.len() as u32 - 1)
            }
        }
    }

    fn name_taken(&self, name: &str) -> bool {
        self.get(name).is_some() || self.base.as_ref().is_some_and(|(n, _)| n == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn lex(line: &str, lineno: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        if c.is_ascii_digit() || c == '-' || c == '.' {
            let start = i;
            i += 1;
            while i < chars.len() && (chars[i].is_ascii_digit() || matches!(chars[i], '/' | '.')) {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Num(chars[start..i].iter().collect()),
                col,
            });
            continue;
        }
        if "=[](){},:|&!∪∅".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                col,
            });
            i += 1;
            continue;
        }
        return Err(ParseError {
            line: lineno,
            col,
            kind: ErrorKind::SyntaxError(format!("unexpected character `{c}`")),
        });
    }
    Ok(out)
}

struct Parser<'m> {
    toks: Vec<Token>,
    pos: usize,
    line: usize,
    eol_col: usize,
    model: &'m mut ModelFile,
}

type PResult<T> = Result<T, ParseError>;

impl Parser<'_> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.eol_col, |t| t.col)
    }

    fn err<T>(&self, kind: ErrorKind) -> PResult<T> {
        self.err_at(self.col(), kind)
    }

    fn err_at<T>(&self, col: usize, kind: ErrorKind) -> PResult<T> {
        Err(ParseError {
            line: self.line,
            col,
            kind,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn describe(&self) -> String {
        match self.peek() {
            None => "end of line".to_string(),
            Some(Tok::Ident(s)) | Some(Tok::Num(s)) => format!("`{s}`"),
            Some(Tok::Sym(c)) => format!("`{c}`"),
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, c: char) -> PResult<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.err(ErrorKind::SyntaxError(format!(
                "expected `{c}`, found {}",
                self.describe()
            )))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err(ErrorKind::SyntaxError(format!(
                "expected a name, found {}",
                self.describe()
            ))),
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<()> {
        let col = self.col();
        let got = self.ident()?;
        if got == kw {
            Ok(())
        } else {
            self.err_at(
                col,
                ErrorKind::SyntaxError(format!("expected `{kw}`, found `{got}`")),
            )
        }
    }

    fn rational(&mut self) -> PResult<(Q, usize)> {
        let col = self.col();
        match self.peek() {
            Some(Tok::Num(s)) => {
                let s = s.clone();
                self.pos += 1;
                parse_rational(&s)
                    .map(|v| (v, col))
                    .map_err(|e| ParseError {
                        line: self.line,
                        col,
                        kind: ErrorKind::InvalidRational(e.to_string()),
                    })
            }
            _ => self.err(ErrorKind::SyntaxError(format!(
                "expected a number, found {}",
                self.describe()
            ))),
        }
    }

    fn unit_rational(&mut self, what: &str) -> PResult<Q> {
        let (v, col) = self.rational()?;
        if v < Q::from_integer(0.into()) || v > Q::from_integer(1.into()) {
            return self.err_at(
                col,
                ErrorKind::InvalidRational(format!("{what} {v} lies outside [0,1]")),
            );
        }
        Ok(v)
    }

    fn finish(&self) -> PResult<()> {
        if self.pos < self.toks.len() {
            self.err(ErrorKind::SyntaxError(format!(
                "unexpected {} after statement",
                self.describe()
            )))
        } else {
            Ok(())
        }
    }

    // ---- continuous sets ----

    fn set_expr(&mut self) -> PResult<FinDimSet> {
        let mut acc = self.set_and()?;
        while self.eat_sym('|') {
            acc = acc.union(&self.set_and()?);
        }
        Ok(acc)
    }

    fn set_and(&mut self) -> PResult<FinDimSet> {
        let mut acc = self.set_unary()?;
        while self.eat_sym('&') {
            acc = acc.intersect(&self.set_unary()?);
        }
        Ok(acc)
    }

    fn set_unary(&mut self) -> PResult<FinDimSet> {
        if self.eat_sym('!') {
            return Ok(self.set_unary()?.complement());
        }
        if self.eat_sym('(') {
            let e = self.set_expr()?;
            self.expect_sym(')')?;
            return Ok(e);
        }
        if self.eat_sym('∅') {
            return Ok(FinDimSet::empty());
        }
        let col = self.col();
        let name = self.ident()?;
        match name.as_str() {
            "rect" => self.rect(),
            "empty" => Ok(FinDimSet::empty()),
            "unit" => Ok(FinDimSet::unit()),
            _ => match self.model.get(&name) {
                Some(Entry::Set(s)) => Ok(s.clone()),
                Some(_) => self.err_at(
                    col,
                    ErrorKind::SyntaxError(format!("`{name}` is not a continuous set")),
                ),
                None => self.err_at(col, ErrorKind::UnknownName(name)),
            },
        }
    }

    fn rect(&mut self) -> PResult<FinDimSet> {
        self.expect_sym('{')?;
        let mut comps = Vec::new();
        if !self.eat_sym('}') {
            loop {
                let dim = self.ident()?;
                self.expect_sym(':')?;
                let comp = self.oned()?;
                comps.push((self.model.intern_dim(&dim), comp));
                if self.eat_sym('}') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        Ok(FinDimSet::product(comps))
    }

    fn oned(&mut self) -> PResult<OneDimSet> {
        let mut acc = self.oned_piece()?;
        while self.eat_sym('∪') || self.eat_sym('|') {
            acc = acc.union(&self.oned_piece()?);
        }
        Ok(acc)
    }

    fn oned_piece(&mut self) -> PResult<OneDimSet> {
        if self.eat_sym('∅') {
            return Ok(OneDimSet::empty());
        }
        if self.eat_sym('{') {
            let mut pts = Vec::new();
            if !self.eat_sym('}') {
                loop {
                    let (p, col) = self.rational()?;
                    if p < Q::from_integer(0.into()) || p >= Q::from_integer(1.into()) {
                        return self.err_at(
                            col,
                            ErrorKind::InvalidRational(format!("point {p} lies outside [0,1)")),
                        );
                    }
                    pts.push(p);
                    if self.eat_sym('}') {
                        break;
                    }
                    self.expect_sym(',')?;
                }
            }
            return Ok(OneDimSet::points(pts).expect("points checked in range"));
        }
        let open_col = self.col();
        let lo_closed = if self.eat_sym('[') {
            true
        } else if self.eat_sym('(') {
            false
        } else {
            return self.err(ErrorKind::SyntaxError(format!(
                "expected an interval or point set, found {}",
                self.describe()
            )));
        };
        let lo = self.unit_rational("endpoint")?;
        self.expect_sym(',')?;
        let hi = self.unit_rational("endpoint")?;
        let hi_closed = if self.eat_sym(']') {
            true
        } else if self.eat_sym(')') {
            false
        } else {
            return self.err(ErrorKind::SyntaxError(format!(
                "expected `]` or `)`, found {}",
                self.describe()
            )));
        };
        if lo >= hi {
            return self.err_at(
                open_col,
                ErrorKind::InvalidRational(format!(
                    "empty interval: lower end {lo} is not below upper end {hi}"
                )),
            );
        }
        Ok(OneDimSet::span(lo, hi, lo_closed, hi_closed))
    }

    // ---- discrete sets ----

    fn dset_expr(&mut self) -> PResult<DiscreteSet> {
        let mut acc = self.dset_and()?;
        while self.eat_sym('|') {
            acc = acc.union(&self.dset_and()?);
        }
        Ok(acc)
    }

    fn dset_and(&mut self) -> PResult<DiscreteSet> {
        let mut acc = self.dset_unary()?;
        while self.eat_sym('&') {
            acc = acc.intersect(&self.dset_unary()?);
        }
        Ok(acc)
    }

    fn dset_unary(&mut self) -> PResult<DiscreteSet> {
        if self.eat_sym('!') {
            return Ok(self.dset_unary()?.complement());
        }
        if self.eat_sym('(') {
            let e = self.dset_expr()?;
            self.expect_sym(')')?;
            return Ok(e);
        }
        if self.eat_sym('∅') {
            return Ok(DiscreteSet::empty());
        }
        let col = self.col();
        let name = self.ident()?;
        match name.as_str() {
            "prod" => self.prod(),
            "empty" => Ok(DiscreteSet::empty()),
            "unit" => Ok(DiscreteSet::unit()),
            _ => match self.model.get(&name) {
                Some(Entry::DSet(s)) => Ok(s.clone()),
                Some(_) => self.err_at(
                    col,
                    ErrorKind::SyntaxError(format!("`{name}` is not a discrete set")),
                ),
                None => self.err_at(col, ErrorKind::UnknownName(name)),
            },
        }
    }

    fn prod(&mut self) -> PResult<DiscreteSet> {
        self.expect_sym('(')?;
        let universe = self.model.universe();
        let mut comps = Vec::new();
        if !self.eat_sym(')') {
            loop {
                let dim = self.ident()?;
                self.expect_sym(':')?;
                let cofinite = matches!(self.peek(), Some(Tok::Ident(s)) if s == "co");
                if cofinite {
                    self.pos += 1;
                }
                let atoms = self.atom_list()?;
                let comp = if cofinite {
                    AtomSet::cofinite(universe, atoms)
                } else {
                    AtomSet::finite(universe, atoms)
                };
                comps.push((self.model.intern_dim(&dim), comp));
                if self.eat_sym(')') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        Ok(DiscreteSet::product(comps))
    }

    fn atom_list(&mut self) -> PResult<Vec<u32>> {
        self.expect_sym('{')?;
        let mut atoms = Vec::new();
        if self.eat_sym('}') {
            return Ok(atoms);
        }
        loop {
            let col = self.col();
            let text = match self.peek() {
                Some(Tok::Num(s)) => s.clone(),
                _ => {
                    return self.err(ErrorKind::SyntaxError(format!(
                        "expected an atom index, found {}",
                        self.describe()
                    )))
                }
            };
            self.pos += 1;
            let idx: u32 = text.parse().map_err(|_| ParseError {
                line: self.line,
                col,
                kind: ErrorKind::SyntaxError(format!("`{text}` is not an atom index")),
            })?;
            if let Some(AtomUniverse::Finite(n)) = self.model.base().map(DiscreteBase::universe) {
                if idx >= n {
                    return self.err_at(
                        col,
                        ErrorKind::SyntaxError(format!("atom {idx} is not named by the base")),
                    );
                }
            }
            atoms.push(idx);
            if self.eat_sym('}') {
                return Ok(atoms);
            }
            self.expect_sym(',')?;
        }
    }

    // ---- statements ----

    fn declare_name(&mut self) -> PResult<(String, usize)> {
        let col = self.col();
        let name = self.ident()?;
        if ["rect", "prod", "empty", "unit", "co", "cells"].contains(&name.as_str()) {
            return self.err_at(
                col,
                ErrorKind::SyntaxError(format!("`{name}` is a reserved word")),
            );
        }
        if self.model.name_taken(&name) {
            return self.err_at(col, ErrorKind::DuplicateName(name));
        }
        Ok((name, col))
    }

    fn statement(&mut self) -> PResult<()> {
        let col = self.col();
        let kw = self.ident()?;
        match kw.as_str() {
            "set" => {
                let (name, _) = self.declare_name()?;
                self.expect_sym('=')?;
                let s = self.set_expr()?;
                self.finish()?;
                self.model.entries.push((name, Entry::Set(s)));
            }
            "dset" => {
                let (name, _) = self.declare_name()?;
                self.expect_sym('=')?;
                let s = self.dset_expr()?;
                self.finish()?;
                self.model.entries.push((name, Entry::DSet(s)));
            }
            "profile" => {
                let (name, _) = self.declare_name()?;
                self.expect_sym('=')?;
                let p = self.profile()?;
                self.finish()?;
                self.model.entries.push((name, Entry::Profile(p)));
            }
            "base" => {
                if self.model.base.is_some() {
                    return self.err_at(
                        col,
                        ErrorKind::SyntaxError("only one base may be declared".into()),
                    );
                }
                if self
                    .model
                    .entries
                    .iter()
                    .any(|(_, e)| matches!(e, Entry::DSet(_)))
                {
                    return self.err_at(
                        col,
                        ErrorKind::SyntaxError("the base must precede every dset".into()),
                    );
                }
                let (name, _) = self.declare_name()?;
                self.keyword("probs")?;
                self.expect_sym('=')?;
                self.expect_sym('[')?;
                let mut probs = Vec::new();
                if !self.eat_sym(']') {
                    loop {
                        probs.push(self.rational()?.0);
                        if self.eat_sym(']') {
                            break;
                        }
                        self.expect_sym(',')?;
                    }
                }
                self.keyword("tail")?;
                self.expect_sym('=')?;
                let tail = self.rational()?.0;
                self.finish()?;
                let base = DiscreteBase::new(probs, tail).map_err(|e| ParseError {
                    line: self.line,
                    col,
                    kind: ErrorKind::InvalidRational(e.to_string()),
                })?;
                self.model.base = Some((name, base));
            }
            other => {
                return self.err_at(
                    col,
                    ErrorKind::SyntaxError(format!(
                        "expected `set`, `dset`, `profile` or `base`, found `{other}`"
                    )),
                )
            }
        }
        Ok(())
    }

    fn profile(&mut self) -> PResult<FiberProfile> {
        let col = self.col();
        self.keyword("cells")?;
        self.expect_sym('[')?;
        let mut cells = Vec::new();
        if !self.eat_sym(']') {
            loop {
                self.expect_sym('(')?;
                self.keyword("vol")?;
                self.expect_sym('=')?;
                let vol = self.unit_rational("volume")?;
                self.expect_sym(',')?;
                self.keyword("q")?;
                self.expect_sym('=')?;
                let q = self.unit_rational("fiber measure")?;
                self.expect_sym(')')?;
                cells.push((vol, q));
                if self.eat_sym(']') {
                    break;
                }
                self.expect_sym(',')?;
            }
        }
        FiberProfile::from_cells(cells).map_err(|e| ParseError {
            line: self.line,
            col,
            kind: ErrorKind::InvalidRational(e.to_string()),
        })
    }
}

pub fn parse_model(text: &str) -> Result<ModelFile, ParseError> {
    let mut model = ModelFile::default();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks = lex(line, lineno)?;
        if toks.is_empty() {
            continue;
        }
        let mut p = Parser {
            toks,
            pos: 0,
            line: lineno,
            eol_col: line.chars().count() + 1,
            model: &mut model,
        };
        p.statement()?;
    }
    Ok(model)
}
